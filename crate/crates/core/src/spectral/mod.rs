//! The spectral-variable algebra ℰ_{2k}: commuting ν₀, …, ν_{2k} subject to
//! ν_j ν_{2k+1−j} = ν₀², and the images of characteristic elements in it.

mod eval;

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::report::Outcome;
use crate::scalar::{q_int, QScalar};

pub use eval::{sample_point, Point, RationalCheck, RationalSuite};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("index {index} out of range for Sp({}) (at most {})", 2 * .k, 2 * .k)]
    IndexRange { k: usize, index: usize },
    #[error("k must be at least 1")]
    ZeroRank,
}

/// Exponent vector over (ν₀, ν₁, …, ν_{2k}).
pub type Exponents = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralPoly {
    k: usize,
    terms: BTreeMap<Exponents, QScalar>,
}

impl SpectralPoly {
    pub fn zero(k: usize) -> Self {
        Self { k, terms: BTreeMap::new() }
    }

    pub fn constant(k: usize, c: QScalar) -> Self {
        Self::term(k, vec![0; 2 * k + 1], c)
    }

    pub fn one(k: usize) -> Self {
        Self::constant(k, QScalar::one())
    }

    pub fn term(k: usize, e: Exponents, c: QScalar) -> Self {
        assert_eq!(e.len(), 2 * k + 1);
        let mut p = Self::zero(k);
        p.add_term(e, c);
        p
    }

    /// `ν_i`.
    pub fn var(k: usize, i: usize) -> Self {
        let mut e = vec![0; 2 * k + 1];
        e[i] = 1;
        Self::term(k, e, QScalar::one())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &QScalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    fn add_term(&mut self, e: Exponents, c: QScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&QScalar::from_int(-1)))
    }

    pub fn scale(&self, c: &QScalar) -> Self {
        let mut out = Self::zero(self.k);
        if !c.is_zero() {
            for (e, x) in &self.terms {
                out.terms.insert(e.clone(), x.mul(c));
            }
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.k);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let e = a.iter().zip(b).map(|(i, j)| i + j).collect();
                out.add_term(e, x.mul(y));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(self.k), |acc, _| acc.mul(self))
    }

    /// The unique normal form: every overlap ν_jν_{2k+1−j} is rewritten to ν₀².
    pub fn reduce(&self) -> Self {
        let k = self.k;
        let mut out = Self::zero(k);
        for (e, c) in &self.terms {
            let mut e = e.clone();
            for j in 1..=k {
                let m = e[j].min(e[2 * k + 1 - j]);
                e[j] -= m;
                e[2 * k + 1 - j] -= m;
                e[0] += 2 * m;
            }
            out.add_term(e, c.clone());
        }
        out
    }

    /// Total degree in the ν variables; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Value at `q` and `nu = (ν₀, …, ν_{2k})`.
    pub fn eval(&self, q: &BigRational, nu: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.eval_rational(q).expect("coefficient pole at sample point");
            for (x, &n) in nu.iter().zip(e) {
                for _ in 0..n {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }
}

impl fmt::Display for SpectralPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| if x == 1 { format!("v{i}") } else { format!("v{i}^{x}") })
                .collect();
            if vars.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", vars.join(" "))?;
            } else {
                write!(f, "({c}) {}", vars.join(" "))?;
            }
        }
        Ok(())
    }
}

/// Elementary symmetric polynomials e_0..=e_{len} of the letters.
pub fn elementary_all(k: usize, letters: &[SpectralPoly]) -> Vec<SpectralPoly> {
    let mut e = vec![SpectralPoly::one(k)];
    for x in letters {
        e.push(SpectralPoly::zero(k));
        for j in (1..e.len()).rev() {
            let t = e[j - 1].mul(x);
            e[j] = e[j].add(&t);
        }
    }
    e
}

pub fn elementary(k: usize, letters: &[SpectralPoly], i: usize) -> SpectralPoly {
    elementary_all(k, letters).into_iter().nth(i).unwrap_or_else(|| SpectralPoly::zero(k))
}

/// Complete symmetric polynomials h_0..=h_n of the letters.
pub fn complete_all(k: usize, letters: &[SpectralPoly], n: usize) -> Vec<SpectralPoly> {
    let mut h = vec![SpectralPoly::zero(k); n + 1];
    h[0] = SpectralPoly::one(k);
    for x in letters {
        for j in 1..=n {
            let t = h[j - 1].mul(x);
            h[j] = h[j].add(&t);
        }
    }
    h
}

/// (ν₁, …, ν_{2k}).
pub fn nu_letters(k: usize) -> Vec<SpectralPoly> {
    (1..=2 * k).map(|i| SpectralPoly::var(k, i)).collect()
}

/// (ν₀, −ν₀, ν₁, …, ν_{2k}).
pub fn extended_letters(k: usize) -> Vec<SpectralPoly> {
    let v0 = SpectralPoly::var(k, 0);
    let mut out = vec![v0.clone(), v0.scale(&QScalar::from_int(-1))];
    out.extend(nu_letters(k));
    out
}

/// Characteristic elements with images in ℰ_{2k}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symbol {
    G,
    A(usize),
    Eps(usize),
    S(usize),
    P(usize),
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::G => write!(f, "g"),
            Symbol::A(i) => write!(f, "a{i}"),
            Symbol::Eps(i) => write!(f, "eps{i}"),
            Symbol::S(i) => write!(f, "s{i}"),
            Symbol::P(i) => write!(f, "p{i}"),
        }
    }
}

/// `μ = −q^{−1−2k}`.
pub fn mu(k: usize) -> QScalar {
    QScalar::q_pow(-1 - 2 * k as i32).neg()
}

/// `e_n(ν₀, −ν₀, ν⃗)`, the image of `a_n`; zero past `2k + 2`.
pub fn a_image(k: usize, n: usize) -> SpectralPoly {
    elementary(k, &extended_letters(k), n)
}

fn g_image(k: usize) -> SpectralPoly {
    SpectralPoly::var(k, 0).pow(2)
}

/// Power-sum images from the Newton recursion for `a_n`, which makes them
/// polynomials in ℰ_{2k}: entry `n` is the image of `p_n` for `n ≥ 1`.
pub fn newton_power_sums(k: usize, max_n: usize) -> Vec<SpectralPoly> {
    let q = QScalar::q();
    let mu = mu(k);
    let g = g_image(k);
    let a: Vec<SpectralPoly> = (0..=max_n).map(|n| a_image(k, n)).collect();
    let mut p = vec![SpectralPoly::zero(k)];
    for n in 1..=max_n {
        let sign = |m: usize| QScalar::from_int(if m.is_multiple_of(2) { 1 } else { -1 });
        let mut rhs = a[n].scale(&sign(n - 1).mul(&q_int(n as i64)));
        for i in 1..=n / 2 {
            let c = mu.mul(&QScalar::q_pow(n as i32 - 2 * i as i32)).sub(&QScalar::q_pow(1 - n as i32 + 2 * i as i32));
            rhs = rhs.add(&a[n - 2 * i].mul(&g.pow(i as u32)).scale(&c.mul(&sign(n))));
        }
        for i in 1..n {
            rhs = rhs.sub(&a[i].mul(&p[n - i]).scale(&q.neg().pow(i as i32)));
        }
        p.push(rhs.reduce());
    }
    p
}

/// `π_{Sp(2k)}` on characteristic elements, in normal form.
pub fn pi_hom(k: usize, x: Symbol) -> Result<SpectralPoly, SpectralError> {
    if k == 0 {
        return Err(SpectralError::ZeroRank);
    }
    let check = |i: usize| if i > 2 * k { Err(SpectralError::IndexRange { k, index: i }) } else { Ok(()) };
    let g = g_image(k);
    Ok(match x {
        Symbol::G => g,
        Symbol::A(i) => {
            check(i)?;
            a_image(k, i).reduce()
        }
        Symbol::Eps(i) => {
            check(i)?;
            if i <= k {
                (0..=i / 2)
                    .map(|j| a_image(k, i - 2 * j).mul(&g.pow(j as u32)))
                    .fold(SpectralPoly::zero(k), |acc, t| acc.add(&t))
                    .reduce()
            } else {
                let m = i - k;
                pi_hom(k, Symbol::Eps(k - m))?.mul(&g.pow(m as u32)).reduce()
            }
        }
        Symbol::S(n) => complete_all(k, &nu_letters(k), n).pop().unwrap().reduce(),
        Symbol::P(n) => {
            if n == 0 {
                // p_0 = Tr_R I at μ = −q^{−1−2k}
                let c = QScalar::q_pow(-1 - 2 * k as i32).mul(&q_int(2 * k as i64 + 1).sub(&QScalar::one()));
                SpectralPoly::constant(k, c)
            } else {
                newton_power_sums(k, n).pop().unwrap()
            }
        }
    })
}

fn zero_check(name: String, residual: &SpectralPoly) -> Outcome {
    Outcome::from_residual(name, (!residual.is_zero()).then(|| residual.to_string()))
}

/// Both e-identities used to identify the images of the CH coefficients.
pub fn sym_identities(k: usize, i: usize) -> Vec<Outcome> {
    let e = elementary_all(k, &nu_letters(k));
    let ext = elementary_all(k, &extended_letters(k));
    let g = g_image(k);
    let mut out = Vec::new();
    if (1..=k).contains(&i) {
        let r = e[k + i].sub(&g.pow(i as u32).mul(&e[k - i])).reduce();
        out.push(zero_check(format!("k={k} e_{{k+{i}}}(nu) = nu0^{} e_{{k-{i}}}(nu)", 2 * i), &r));
    }
    let lower = if i >= 2 { e[i - 2].clone() } else { SpectralPoly::zero(k) };
    let upper = e.get(i).cloned().unwrap_or_else(|| SpectralPoly::zero(k));
    let r = ext.get(i).cloned().unwrap_or_else(|| SpectralPoly::zero(k)).sub(&upper.sub(&g.mul(&lower)));
    out.push(zero_check(format!("k={k} e_{i}(nu0,-nu0,nu) = e_{i}(nu) - nu0^2 e_{}(nu)", i as i64 - 2), &r));
    out
}

/// `∏(X − qν_i)` as coefficients of `X^{2k−i}`, factors taken in `order`.
pub fn factor_expansion(k: usize, order: &[usize]) -> Vec<SpectralPoly> {
    let q = QScalar::q();
    // coefficient list indexed by i, the number of ν-factors taken
    let mut c = vec![SpectralPoly::one(k)];
    for &j in order {
        let v = SpectralPoly::var(k, j).scale(&q.neg());
        c.push(SpectralPoly::zero(k));
        for i in (1..c.len()).rev() {
            let t = c[i - 1].mul(&v);
            c[i] = c[i].add(&t);
        }
    }
    c.into_iter().map(|p| p.reduce()).collect()
}

/// The factorized form against the image of the CH coefficients `(−q)^i ε_i`.
pub fn factor_check(k: usize) -> Result<Vec<Outcome>, SpectralError> {
    let natural: Vec<usize> = (1..=2 * k).collect();
    let expansion = factor_expansion(k, &natural);
    let mut out = Vec::new();
    let mut bad = None;
    let q = QScalar::q();
    for (i, c) in expansion.iter().enumerate() {
        let eps = if i == 0 { SpectralPoly::one(k) } else { pi_hom(k, Symbol::Eps(i))? };
        let r = c.sub(&eps.scale(&q.neg().pow(i as i32)));
        if bad.is_none() && !r.is_zero() {
            bad = Some(format!("coefficient of M^{}: {r}", 2 * k - i));
        }
    }
    out.push(Outcome::from_residual(format!("k={k} factorized CH matches pi(eps_i)"), bad));
    let mut reversed = natural.clone();
    reversed.reverse();
    let mut shuffled = natural.clone();
    shuffled.rotate_left(k);
    let same = factor_expansion(k, &reversed) == expansion && factor_expansion(k, &shuffled) == expansion;
    out.push(Outcome::from_residual(
        format!("k={k} factor order invariance"),
        (!same).then(|| "expansion depends on the factor order".to_string()),
    ));
    Ok(out)
}

/// Symbolic checks in ℰ_{2k}.
pub fn poly_suite(k: usize, max_n: usize, seed: u64) -> Result<Vec<Outcome>, SpectralError> {
    use rand::{Rng, SeedableRng};
    if k == 0 {
        return Err(SpectralError::ZeroRank);
    }
    let mut out = Vec::new();
    let g = g_image(k);

    // normal form
    let mut e = vec![0; 2 * k + 1];
    e[1] = 2;
    e[2 * k] = 1;
    let sq = SpectralPoly::term(k, e, QScalar::one());
    let mut want = vec![0; 2 * k + 1];
    want[0] = 2;
    want[1] = 1;
    let ok = sq.reduce() == SpectralPoly::term(k, want, QScalar::one());
    out.push(Outcome::from_residual(format!("k={k} reduce nu1^2 nu{} = nu0^2 nu1", 2 * k), (!ok).then(|| sq.reduce().to_string())));
    let wide = elementary(k, &nu_letters(k), k).pow(2).add(&complete_all(k, &nu_letters(k), 3)[3]);
    let once = wide.reduce();
    out.push(Outcome::from_residual(format!("k={k} reduce is idempotent"), (once.reduce() != once).then(|| once.to_string())));

    for i in 0..=2 * k + 2 {
        out.extend(sym_identities(k, i));
    }
    let q = QScalar::q();
    let m = mu(k);
    let p0 = QScalar::one().sub(&m.mul(&m).mul(&q).mul(&q)).div(&q.sub(&q.inv().unwrap()));
    let r = p0.sub(&QScalar::q_pow(-2 * k as i32).mul(&q_int(2 * k as i64)));
    out.push(Outcome::from_residual(
        format!("k={k} (1 - mu^2 q^2)/(q - q^-1) = q^-2k (2k)_q"),
        (!r.is_zero()).then(|| r.to_string()),
    ));

    // ε_i ↦ e_i(ν⃗)
    let e = elementary_all(k, &nu_letters(k));
    let mut bad = None;
    for (i, ei) in e.iter().enumerate().skip(1) {
        let r = pi_hom(k, Symbol::Eps(i))?.sub(&ei.reduce());
        if bad.is_none() && !r.is_zero() {
            bad = Some(format!("eps{i}: {r}"));
        }
    }
    out.push(Outcome::from_residual(format!("k={k} pi(eps_i) = e_i(nu), i=1..{}", 2 * k), bad));
    out.extend(factor_check(k)?);

    // homomorphism on random products of g, a_1..a_k
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut bad = None;
    for _ in 0..6 {
        let pick = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<Symbol> {
            (0..rng.gen_range(1..=3)).map(|_| match rng.gen_range(0..=k) { 0 => Symbol::G, i => Symbol::A(i) }).collect()
        };
        let (x, y) = (pick(&mut rng), pick(&mut rng));
        let img = |w: &[Symbol]| -> Result<SpectralPoly, SpectralError> {
            w.iter().try_fold(SpectralPoly::one(k), |acc, s| Ok(acc.mul(&pi_hom(k, *s)?).reduce()))
        };
        let joint: Vec<Symbol> = x.iter().chain(&y).copied().collect();
        let raw = joint.iter().fold(SpectralPoly::one(k), |acc, s| match s {
            Symbol::G => acc.mul(&g),
            Symbol::A(i) => acc.mul(&a_image(k, *i)),
            _ => unreachable!(),
        });
        let r = img(&x)?.mul(&img(&y)?).reduce().sub(&raw.reduce());
        if bad.is_none() && !r.is_zero() {
            bad = Some(format!("{:?}*{:?}: {r}", x, y));
        }
    }
    out.push(Outcome::from_residual(format!("k={k} pi is multiplicative on products of g, a_i"), bad));

    // complete functions from the Wronski relations
    let ext = extended_letters(k);
    let he = complete_all(k, &ext, max_n);
    let ee = elementary_all(k, &ext);
    let h = complete_all(k, &nu_letters(k), max_n);
    let mut bad = None;
    for n in 0..=max_n {
        let w = (0..=n.min(ee.len() - 1))
            .map(|i| ee[i].mul(&he[n - i]).scale(&QScalar::from_int(if i % 2 == 0 { 1 } else { -1 })))
            .fold(SpectralPoly::zero(k), |acc, t| acc.add(&t));
        let w = if n == 0 { w.sub(&SpectralPoly::one(k)) } else { w };
        if bad.is_none() && !w.is_zero() {
            bad = Some(format!("Wronski n={n}: {w}"));
        }
        let s = if n >= 2 { he[n].sub(&he[n - 2].mul(&g)) } else { he[n].clone() };
        let r = s.sub(&h[n]);
        if bad.is_none() && !r.is_zero() {
            bad = Some(format!("s{n}: {r}"));
        }
    }
    out.push(Outcome::from_residual(format!("k={k} s'_n = h_n(nu0,-nu0,nu) gives s_n = h_n(nu), n<={max_n}"), bad));

    out.push(Outcome::from_residual(
        format!("k={k} s-Newton relation holds with a-Newton power sums, n<={max_n}"),
        newton_consistency(k, max_n).map(|(n, r)| format!("n={n}: {r}")),
    ));
    Ok(out)
}

/// With `s_n ↦ h_n(ν⃗)`, the `s`-Newton relation evaluated on the polynomial
/// power sums of [`newton_power_sums`]; first failing `n` and its residual.
fn newton_consistency(k: usize, max_n: usize) -> Option<(usize, SpectralPoly)> {
    let mu = mu(k);
    let g = g_image(k);
    let p = newton_power_sums(k, max_n);
    let h = complete_all(k, &nu_letters(k), max_n);
    for n in 1..=max_n {
        let mut lhs = SpectralPoly::zero(k);
        for i in 0..n {
            lhs = lhs.add(&h[i].mul(&p[n - i]).scale(&QScalar::q_pow(-(i as i32))));
        }
        let mut rhs = h[n].scale(&q_int(n as i64));
        for i in 1..=n / 2 {
            let c = mu.mul(&QScalar::q_pow(2 * i as i32 - n as i32)).add(&QScalar::q_pow(n as i32 - 2 * i as i32 - 1));
            rhs = rhs.add(&h[n - 2 * i].mul(&g.pow(i as u32)).scale(&c));
        }
        let r = lhs.sub(&rhs).reduce();
        if !r.is_zero() {
            return Some((n, r));
        }
    }
    None
}

/// Everything: symbolic checks plus the rational identities at sampled points.
pub fn suite(k: usize, max_n: usize, seed: u64) -> Result<Vec<Outcome>, SpectralError> {
    let mut out = poly_suite(k, max_n, seed)?;
    out.extend(RationalSuite::new(k, max_n, seed).run());
    Ok(out)
}
