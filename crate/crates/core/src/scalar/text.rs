//! Parser for the textual scalar form: `c*q^e` terms joined by `+`/`-`,
//! optionally written as `num / den`.

use num_bigint::BigInt;

use super::{LaurentPoly, QScalar, ScalarError};

pub(super) fn parse_scalar(input: &str) -> Result<QScalar, ScalarError> {
    let err = |reason: &str| ScalarError::Parse { input: input.to_string(), reason: reason.to_string() };
    let mut depth = 0i32;
    let mut split = None;
    for (i, ch) in input.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 => {
                if split.is_some() {
                    return Err(err("more than one '/'"));
                }
                split = Some(i);
            }
            _ => {}
        }
    }
    match split {
        None => Ok(QScalar::from_laurent(parse_laurent(input).map_err(|r| err(&r))?)),
        Some(i) => {
            let num = parse_laurent(&input[..i]).map_err(|r| err(&r))?;
            let den = parse_laurent(&input[i + 1..]).map_err(|r| err(&r))?;
            if den.is_zero() {
                return Err(ScalarError::DivisionByZero { context: input.to_string() });
            }
            Ok(QScalar::from_parts(num, den))
        }
    }
}

fn strip_parens(s: &str) -> &str {
    let t = s.trim();
    if t.starts_with('(') && t.ends_with(')') {
        strip_parens(&t[1..t.len() - 1])
    } else {
        t
    }
}

fn parse_laurent(s: &str) -> Result<LaurentPoly, String> {
    let body: String = strip_parens(s).chars().filter(|c| !c.is_whitespace()).collect();
    if body.is_empty() {
        return Err("empty expression".into());
    }
    let mut terms = Vec::new();
    let mut start = 0;
    let bytes = body.as_bytes();
    for i in 1..bytes.len() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
            terms.push(&body[start..i]);
            start = i;
        }
    }
    terms.push(&body[start..]);
    let mut acc = LaurentPoly::zero();
    for t in terms {
        acc = &acc + &parse_term(t)?;
    }
    Ok(acc)
}

fn parse_term(t: &str) -> Result<LaurentPoly, String> {
    let (sign, rest) = match t.as_bytes().first() {
        Some(b'+') => (1, &t[1..]),
        Some(b'-') => (-1, &t[1..]),
        _ => (1, t),
    };
    if rest.is_empty() {
        return Err(format!("dangling sign in {t:?}"));
    }
    let (coef, qpart) = match rest.find('q') {
        None => (rest, None),
        Some(pos) => {
            let c = rest[..pos].trim_end_matches('*');
            (c, Some(&rest[pos + 1..]))
        }
    };
    let c: BigInt = if coef.is_empty() {
        BigInt::from(1)
    } else {
        coef.parse().map_err(|_| format!("bad coefficient {coef:?}"))?
    };
    let e: i32 = match qpart {
        None => 0,
        Some("") => 1,
        Some(p) => {
            let p = p.strip_prefix('^').ok_or_else(|| format!("expected '^' in {t:?}"))?;
            let p = strip_parens(p);
            p.parse().map_err(|_| format!("bad exponent {p:?}"))?
        }
    };
    Ok(LaurentPoly::monomial(c * sign, e))
}
