//! Printed reference data used to calibrate the constructions: the `2×2`
//! block maps `σ_q`, `α^±_q`, `β_q`, the explicit `Sp(2)` and `Sp(4)` map
//! displays, and the explicit `Sp(2)` relations and contractions.
//!
//! Maps on `n×n` matrices are coefficient operators indexed by
//! `(a·n + b, c·n + d)`, as in [`super::Maps`].

use super::appendix;
use super::ncpoly::NCPoly;
use crate::scalar::{lambda, QField, QScalar};
use crate::tensor::{Operator, QOperator};

fn q(e: i32) -> QScalar {
    QScalar::q_pow(e)
}

/// A map on `n×n` matrices from `(out (a,b), coefficient, source (c,d))` terms, 1-based.
fn map_from(n: usize, terms: &[((usize, usize), QScalar, (usize, usize))]) -> QOperator {
    QOperator::from_entries(&QField, n, 2, terms.iter().map(|((a, b), c, (s, t))| ((a - 1) * n + b - 1, (s - 1) * n + t - 1, c.clone())))
}

/// `σ_x(X) = [[X22, x^{-1}X12], [x X21, X11]]`.
pub fn sigma(x: &QScalar) -> QOperator {
    let xi = x.inv().expect("x ≠ 0");
    map_from(2, &[((1, 1), QScalar::one(), (2, 2)), ((1, 2), xi, (1, 2)), ((2, 1), x.clone(), (2, 1)), ((2, 2), QScalar::one(), (1, 1))])
}

/// `α^±_x(X) = [[x^{-2}X11 ± (1-x^{-2})X22, x^{-3}X12], [x^{-1}X21, X22]]`.
pub fn alpha(plus: bool, x: &QScalar) -> QOperator {
    let xi = x.inv().expect("x ≠ 0");
    let x2 = xi.mul(&xi);
    let mix = QScalar::one().sub(&x2);
    let mix = if plus { mix } else { mix.neg() };
    map_from(
        2,
        &[((1, 1), x2.clone(), (1, 1)), ((1, 1), mix, (2, 2)), ((1, 2), x2.mul(&xi), (1, 2)), ((2, 1), xi, (2, 1)), ((2, 2), QScalar::one(), (2, 2))],
    )
}

/// `β_x(X) = (x^{-2}X11 + X22) I + x^{-4} σ_x(X)`.
pub fn beta(x: &QScalar) -> QOperator {
    let xi = x.inv().expect("x ≠ 0");
    let x2 = xi.mul(&xi);
    let trace_part = map_from(2, &[((1, 1), x2.clone(), (1, 1)), ((1, 1), QScalar::one(), (2, 2)), ((2, 2), x2.clone(), (1, 1)), ((2, 2), QScalar::one(), (2, 2))]);
    trace_part.add(&QField, &sigma(x).scale(&QField, &x2.mul(&x2)))
}

/// Assembles a map on `4×4` matrices from block pieces
/// `(output block, coefficient, 2×2 map, source block)`, blocks 0-based.
pub fn block_map(pieces: &[((usize, usize), QScalar, QOperator, (usize, usize))]) -> QOperator {
    let mut e = Vec::new();
    for ((br, bc), c, op, (sr, sc)) in pieces {
        for (o, i, v) in op.entries() {
            let (a, b) = (o / 2, o % 2);
            let (s, t) = (i / 2, i % 2);
            e.push(((2 * br + a) * 4 + 2 * bc + b, (2 * sr + s) * 4 + 2 * sc + t, c.mul(v)));
        }
    }
    QOperator::from_entries(&QField, 4, 2, e)
}

const A: (usize, usize) = (0, 0);
const B: (usize, usize) = (0, 1);
const C: (usize, usize) = (1, 0);
const D: (usize, usize) = (1, 1);

/// The printed block form of `ξ` for `Sp(4)` RTT.
pub fn sp4_xi_printed() -> QOperator {
    let s = sigma(&q(1));
    block_map(&[(A, q(-5).neg(), s.clone(), D), (B, q(-8), s.clone(), B), (C, q(-2), s.clone(), C), (D, q(-5).neg(), s, A)])
}

/// The printed block form of `φ` for `Sp(4)` RTT.
pub fn sp4_phi_printed() -> QOperator {
    let x = q(1);
    block_map(&[
        (A, q(-6), alpha(true, &x), A),
        (A, QScalar::one().sub(&q(-2)), beta(&x), D),
        (B, q(-7), alpha(false, &x), B),
        (C, q(-1), alpha(false, &x), C),
        (D, QScalar::one(), alpha(true, &x), D),
    ])
}

/// The printed block form of `π` for `Sp(4)` RTT.
pub fn sp4_pi_printed() -> QOperator {
    let f = QField;
    let s = sigma(&q(1));
    let ap = alpha(true, &q(-1)).compose(&f, &s);
    let am = alpha(false, &q(-1)).compose(&f, &s);
    let bs = beta(&q(-1)).compose(&f, &s);
    block_map(&[
        (A, q(-4), ap.clone(), D),
        (A, q(-8).mul(&QScalar::one().sub(&q(-2))).neg(), bs, A),
        (B, q(-6).neg(), am.clone(), B),
        (C, q(-6).neg(), am, C),
        (D, q(-10), ap, A),
    ])
}

/// Entrywise `q ↦ q^{-1}`.
pub fn bar_map(m: &QOperator) -> QOperator {
    m.bar()
}

/// The printed `φ(T)` for `Sp(2)` RTT.
pub fn sp2_phi_printed() -> QOperator {
    map_from(
        2,
        &[((1, 1), q(-4), (1, 1)), ((1, 1), QScalar::one().sub(&q(-4)), (2, 2)), ((1, 2), q(-6), (1, 2)), ((2, 1), q(-2), (2, 1)), ((2, 2), QScalar::one(), (2, 2))],
    )
}

/// The printed `π(T)` for `Sp(2)`.
pub fn sp2_pi_printed() -> QOperator {
    map_from(
        2,
        &[((1, 1), q(-6).add(&q(-2)), (1, 1)), ((1, 1), q(-2), (2, 2)), ((1, 2), q(-2).neg(), (1, 2)), ((2, 1), q(-2).neg(), (2, 1)), ((2, 2), q(-6), (2, 2))],
    )
}

/// `Sp(2)` generator `T^i_j` (1-based).
fn t(i: usize, j: usize) -> u8 {
    ((i - 1) * 2 + j - 1) as u8
}

fn p2(terms: &[(QScalar, (usize, usize), (usize, usize))]) -> NCPoly<QScalar> {
    let mut p = NCPoly::zero();
    for (c, a, b) in terms {
        p.add_term(&QField, vec![t(a.0, a.1), t(b.0, b.1)], c.clone());
    }
    p
}

fn p1(terms: &[(QScalar, (usize, usize))]) -> NCPoly<QScalar> {
    let mut p = NCPoly::zero();
    for (c, a) in terms {
        p.add_term(&QField, vec![t(a.0, a.1)], c.clone());
    }
    p
}

/// The six printed `Sp(2)` RTT permutation relations.
pub fn sp2_rtt_relations() -> Vec<NCPoly<QScalar>> {
    let one = QScalar::one;
    let mut out = Vec::new();
    for i in 1..=2 {
        out.push(p2(&[(q(2), (i, 2), (i, 1)), (one().neg(), (i, 1), (i, 2))]));
        out.push(p2(&[(q(2), (2, i), (1, i)), (one().neg(), (1, i), (2, i))]));
    }
    out.push(p2(&[(one(), (2, 1), (1, 2)), (one().neg(), (1, 2), (2, 1))]));
    out.push(p2(&[(one(), (2, 2), (1, 1)), (one().neg(), (1, 1), (2, 2)), (q(-2).sub(&q(2)).neg(), (1, 2), (2, 1))]));
    out
}

/// The printed `Sp(2)` RE permutation relations.
pub fn sp2_re_relations() -> Vec<NCPoly<QScalar>> {
    let one = QScalar::one;
    let c = one().sub(&q(-4));
    let mut out = Vec::new();
    for (i, j) in [(1, 2), (2, 1), (2, 2)] {
        let e = 4 * (j as i32 - i as i32);
        out.push(p2(&[(one(), (i, j), (1, 1)), (q(e).neg(), (1, 1), (i, j))]));
    }
    out.push(p2(&[(one(), (2, 2), (1, 2)), (one().neg(), (1, 2), (2, 2)), (c.neg(), (1, 1), (1, 2))]));
    out.push(p2(&[(one(), (2, 2), (2, 1)), (one().neg(), (2, 1), (2, 2)), (q(-4).mul(&c), (1, 1), (2, 1))]));
    out.push(p2(&[(one(), (2, 1), (1, 2)), (one().neg(), (1, 2), (2, 1)), (c.neg(), (1, 1), (1, 1)), (c.clone(), (1, 1), (2, 2))]));
    out
}

/// Printed `g` for `Sp(2)` RTT: the unreduced form and the reduced form.
pub fn sp2_rtt_g_printed() -> [NCPoly<QScalar>; 2] {
    let s = q(-6).div(&q(2).add(&q(-2)));
    let first = p2(&[(s.mul(&q(-2)), (1, 1), (2, 2)), (s.mul(&q(2)), (2, 2), (1, 1)), (s.neg(), (1, 2), (2, 1)), (s.neg(), (2, 1), (1, 2))]);
    let second = p2(&[(q(-6), (1, 1), (2, 2)), (q(-4).neg(), (1, 2), (2, 1))]);
    [first, second]
}

/// Printed `g` for `Sp(2)` RE: the unreduced form and the reduced form.
pub fn sp2_re_g_printed() -> [NCPoly<QScalar>; 2] {
    let c = QScalar::one().sub(&q(-4));
    let s = q(-4).div(&q(2).add(&q(-2)));
    let first = p2(&[
        (s.clone(), (1, 1), (2, 2)),
        (s.clone(), (2, 2), (1, 1)),
        (s.mul(&c).neg(), (1, 1), (1, 1)),
        (s.neg(), (1, 2), (2, 1)),
        (s.mul(&q(4)).neg(), (2, 1), (1, 2)),
    ]);
    let second = p2(&[(q(-2), (1, 1), (2, 2)), (q(-2).mul(&c).neg(), (1, 1), (1, 1)), (q(-2).neg(), (1, 2), (2, 1))]);
    [first, second]
}

/// Printed `a_1 = q^{-5}T11 + q^{-1}T22`.
pub fn sp2_a1_printed() -> NCPoly<QScalar> {
    p1(&[(q(-5), (1, 1)), (q(-1), (2, 2))])
}

/// Printed `ε_1` for `Sp(4)` RTT.
pub fn sp4_eps1_printed() -> NCPoly<QScalar> {
    let mut p = NCPoly::zero();
    for (c, g) in [(q(-9), "A11"), (q(-7), "A22"), (q(-3), "D11"), (q(-1), "D22")] {
        p.add_term(&QField, vec![appendix::gen(g)], c);
    }
    p
}

/// Printed `ε_2 = a_2 + g` for `Sp(4)` RTT.
pub fn sp4_eps2_printed() -> NCPoly<QScalar> {
    let f = QField;
    let one = QScalar::one;
    let lin = |terms: &[(QScalar, &str)]| {
        let mut p = NCPoly::zero();
        for (c, g) in terms {
            p.add_term(&f, vec![appendix::gen(g)], c.clone());
        }
        p
    };
    let mut p = appendix::poly(&[(q(-16), "A11", "A22"), (q(-15).neg(), "A12", "A21"), (q(-4), "D11", "D22"), (q(-3).neg(), "D12", "D21")]);
    let d = lin(&[(one(), "D11"), (q(2), "D22")]);
    let a = lin(&[(one(), "A11"), (q(2), "A22")]);
    p.add_scaled(&f, &q(-12), &d.mul(&f, &a));
    let cb = appendix::poly(&[
        (q(-1), "C11", "B11"),
        (lambda().neg(), "C11", "B22"),
        (one(), "C12", "B21"),
        (one(), "C21", "B12"),
        (q(3), "C22", "B22"),
    ]);
    p.add_scaled(&f, &q(-12).neg(), &cb);
    p
}

/// `(σ_q)^{-1} = σ_{1/q}`, `(α^±_q)^{-1} = α^±_{1/q}` and
/// `β_q∘α^+_{1/q} = q^{-4} α^+_q∘β_{1/q}`, as `(name, lhs, rhs)` pairs.
pub fn block_identities() -> Vec<(&'static str, QOperator, QOperator)> {
    let f = QField;
    let (x, xi) = (q(1), q(-1));
    let id = Operator::identity(&f, 2, 2);
    vec![
        ("sigma_q inverse is sigma_1/q", sigma(&x).compose(&f, &sigma(&xi)), id.clone()),
        ("alpha+_q inverse is alpha+_1/q", alpha(true, &x).compose(&f, &alpha(true, &xi)), id.clone()),
        ("alpha-_q inverse is alpha-_1/q", alpha(false, &x).compose(&f, &alpha(false, &xi)), id),
        (
            "beta_q alpha+_1/q = q^-4 alpha+_q beta_1/q",
            beta(&x).compose(&f, &alpha(true, &xi)),
            alpha(true, &x).compose(&f, &beta(&xi)).scale(&f, &q(-4)),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_is_an_involution_up_to_q_flip() {
        let f = QField;
        let s = sigma(&q(1));
        assert_eq!(s.compose(&f, &sigma(&q(-1))), Operator::identity(&f, 2, 2));
    }

    #[test]
    fn sp2_relation_counts() {
        assert_eq!(sp2_rtt_relations().len(), 6);
        assert_eq!(sp2_re_relations().len(), 6);
    }
}
