//! The q → 1 limit: symplectic similitudes over ℚ and the classical parent
//! Cayley–Hamilton identity.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
pub use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::report::Outcome;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassicalError {
    #[error("block {0} is not invariant under X -> w X^t w")]
    NotSelfDual(&'static str),
    #[error("block A is singular")]
    SingularA,
    #[error("no invertible A drawn after {0} attempts")]
    RetryBudget(usize),
    #[error("block sizes disagree")]
    Shape,
}

/// Exact rational matrix kept as an integer matrix over one positive common
/// denominator, reduced to lowest terms.
#[derive(Clone, Debug)]
pub struct RationalMatrix {
    n: usize,
    m: usize,
    num: Vec<BigInt>,
    den: BigInt,
}

impl PartialEq for RationalMatrix {
    fn eq(&self, o: &Self) -> bool {
        // both sides are normalized
        (self.n, self.m) == (o.n, o.m) && self.den == o.den && self.num == o.num
    }
}

impl Eq for RationalMatrix {}

impl RationalMatrix {
    fn from_parts(n: usize, m: usize, num: Vec<BigInt>, den: BigInt) -> Self {
        let mut g = den.clone();
        for x in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(x);
        }
        if den.is_negative() {
            g = -g;
        }
        if g.is_one() {
            return Self { n, m, num, den };
        }
        Self { n, m, num: num.into_iter().map(|x| x / &g).collect(), den: den / g }
    }

    pub fn zero(n: usize, m: usize) -> Self {
        Self { n, m, num: vec![BigInt::zero(); n * m], den: BigInt::one() }
    }

    pub fn identity(n: usize) -> Self {
        let mut out = Self::zero(n, n);
        for i in 0..n {
            out.num[i * n + i] = BigInt::one();
        }
        out
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == m), "ragged rows");
        let den = rows.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let num = rows.iter().flatten().map(|x| x.numer() * (&den / x.denom())).collect();
        Self::from_parts(n, m, num, den)
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> BigRational {
        BigRational::new(self.num[i * self.m + j].clone(), self.den.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    fn combine(&self, o: &Self, sign: i32) -> Self {
        assert_eq!((self.n, self.m), (o.n, o.m));
        let l = self.den.lcm(&o.den);
        let (a, b) = (&l / &self.den, &l / &o.den);
        let num = self
            .num
            .iter()
            .zip(&o.num)
            .map(|(x, y)| if sign > 0 { x * &a + y * &b } else { x * &a - y * &b })
            .collect();
        Self::from_parts(self.n, self.m, num, l)
    }

    pub fn add(&self, o: &Self) -> Self {
        self.combine(o, 1)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.combine(o, -1)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_parts(self.n, self.m, self.num.iter().map(|x| x * c.numer()).collect(), &self.den * c.denom())
    }

    pub fn neg(&self) -> Self {
        Self { n: self.n, m: self.m, num: self.num.iter().map(|x| -x).collect(), den: self.den.clone() }
    }

    fn int_mul(n: usize, l: usize, m: usize, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); n * m];
        for i in 0..n {
            for t in 0..l {
                let x = &a[i * l + t];
                if x.is_zero() {
                    continue;
                }
                for j in 0..m {
                    let y = &b[t * m + j];
                    if !y.is_zero() {
                        out[i * m + j] += x * y;
                    }
                }
            }
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.m, o.n);
        let num = Self::int_mul(self.n, self.m, o.m, &self.num, &o.num);
        Self::from_parts(self.n, o.m, num, &self.den * &o.den)
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::identity(self.n), |acc, _| acc.mul(self))
    }

    pub fn transpose(&self) -> Self {
        let mut num = vec![BigInt::zero(); self.n * self.m];
        for i in 0..self.n {
            for j in 0..self.m {
                num[j * self.n + i] = self.num[i * self.m + j].clone();
            }
        }
        Self { n: self.m, m: self.n, num, den: self.den.clone() }
    }

    pub fn trace(&self) -> BigRational {
        let t: BigInt = (0..self.n).map(|i| &self.num[i * self.m + i]).sum();
        BigRational::new(t, self.den.clone())
    }

    /// Fraction-free (Bareiss) elimination on the numerator.
    pub fn det(&self) -> BigRational {
        assert_eq!(self.n, self.m);
        let n = self.n;
        let mut a = self.num.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r * n + c].is_zero()) else { return BigRational::zero() };
            if p != c {
                for j in 0..n {
                    a.swap(p * n + j, c * n + j);
                }
                sign = -sign;
            }
            for r in c + 1..n {
                for j in c + 1..n {
                    let t = &a[c * n + c] * &a[r * n + j] - &a[r * n + c] * &a[c * n + j];
                    a[r * n + j] = t / &prev;
                }
                a[r * n + c] = BigInt::zero();
            }
            prev = a[c * n + c].clone();
        }
        let d = if n == 0 { BigInt::one() } else { a[n * n - 1].clone() };
        BigRational::new(sign * d, num_traits::pow(self.den.clone(), n))
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.n, self.m);
        let n = self.n;
        let mut a: Vec<BigRational> = (0..n * n).map(|t| self.get(t / n, t % n)).collect();
        let mut inv: Vec<BigRational> = (0..n * n).map(|t| if t / n == t % n { BigRational::one() } else { BigRational::zero() }).collect();
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r * n + c].is_zero())?;
            for j in 0..n {
                a.swap(p * n + j, c * n + j);
                inv.swap(p * n + j, c * n + j);
            }
            let piv = a[c * n + c].recip();
            for j in 0..n {
                a[c * n + j] *= &piv;
                inv[c * n + j] *= &piv;
            }
            for r in 0..n {
                if r == c || a[r * n + c].is_zero() {
                    continue;
                }
                let f = a[r * n + c].clone();
                for j in 0..n {
                    let (x, y) = (&f * &a[c * n + j], &f * &inv[c * n + j]);
                    a[r * n + j] -= x;
                    inv[r * n + j] -= y;
                }
            }
        }
        Some(Self::from_rows(inv.chunks(n).map(<[BigRational]>::to_vec).collect()))
    }

    /// Coefficients `ε_i = Tr ∧^i M`, `i = 0..=n`, by Faddeev–LeVerrier on the
    /// integer numerator `N = den·M`, using `ε_i(M) = ε_i(N)/den^i`.
    pub fn wedge_traces(&self) -> Vec<BigRational> {
        let n = self.n;
        // c[j] is the coefficient of x^j in det(x − N), an integer
        let mut c = vec![BigInt::zero(); n + 1];
        c[n] = BigInt::one();
        let mut mk = vec![BigInt::zero(); n * n];
        for k in 1..=n {
            mk = Self::int_mul(n, n, n, &self.num, &mk);
            for i in 0..n {
                mk[i * n + i] += &c[n - k + 1];
            }
            let prod = Self::int_mul(n, n, n, &self.num, &mk);
            let tr: BigInt = (0..n).map(|i| &prod[i * n + i]).sum();
            c[n - k] = -tr / BigInt::from(k);
        }
        (0..=n)
            .map(|i| {
                let e = if i % 2 == 0 { c[n - i].clone() } else { -c[n - i].clone() };
                BigRational::new(e, num_traits::pow(self.den.clone(), i))
            })
            .collect()
    }

    /// The `(bi, bj)` block of size `s`.
    pub fn block(&self, bi: usize, bj: usize, s: usize) -> Self {
        let mut num = Vec::with_capacity(s * s);
        for i in 0..s {
            for j in 0..s {
                num.push(self.num[(bi * s + i) * self.m + bj * s + j].clone());
            }
        }
        Self::from_parts(s, s, num, self.den.clone())
    }

    /// `[[a, b], [c, d]]` from equal square blocks.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let s = a.n;
        let l = [b, c, d].iter().fold(a.den.clone(), |acc, x| acc.lcm(&x.den));
        let mut num = vec![BigInt::zero(); 4 * s * s];
        for (bi, bj, x) in [(0, 0, a), (0, 1, b), (1, 0, c), (1, 1, d)] {
            let f = &l / &x.den;
            for i in 0..s {
                for j in 0..s {
                    num[(bi * s + i) * 2 * s + bj * s + j] = &x.num[i * s + j] * &f;
                }
            }
        }
        Self::from_parts(2 * s, 2 * s, num, l)
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.n)
            .map(|i| {
                let r: Vec<String> = (0..self.m).map(|j| self.get(i, j).to_string()).collect();
                format!("[{}]", r.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// The `k × k` antidiagonal unit.
pub fn antidiagonal(k: usize) -> RationalMatrix {
    let mut w = RationalMatrix::zero(k, k);
    for i in 0..k {
        w.num[i * k + k - 1 - i] = BigInt::one();
    }
    w
}

/// `Ω = [[0, w], [−w, 0]]`.
pub fn omega(k: usize) -> RationalMatrix {
    let w = antidiagonal(k);
    let z = RationalMatrix::zero(k, k);
    RationalMatrix::from_blocks(&z, &w, &w.neg(), &z)
}

/// `X′ = w Xᵗ w`.
pub fn prime(x: &RationalMatrix) -> RationalMatrix {
    let w = antidiagonal(x.rows());
    w.mul(&x.transpose()).mul(&w)
}

/// `π(M) = −Ω Mᵗ Ω`.
pub fn classical_pi(m: &RationalMatrix) -> RationalMatrix {
    let o = omega(m.rows() / 2);
    o.mul(&m.transpose()).mul(&o).neg()
}

/// `π(M)` assembled from the block formula `[[D′, −B′], [−C′, A′]]`.
pub fn classical_pi_blocks(m: &RationalMatrix) -> RationalMatrix {
    let k = m.rows() / 2;
    let (a, b, c, d) = (m.block(0, 0, k), m.block(0, 1, k), m.block(1, 0, k), m.block(1, 1, k));
    RationalMatrix::from_blocks(&prime(&d), &prime(&b).neg(), &prime(&c).neg(), &prime(&a))
}

/// A solution of the g-invariance relations with `A` invertible.
#[derive(Clone, Debug)]
pub struct SimilitudeSample {
    pub a: RationalMatrix,
    pub x: RationalMatrix,
    pub y: RationalMatrix,
    pub g: BigRational,
}

impl SimilitudeSample {
    pub fn new(a: RationalMatrix, x: RationalMatrix, y: RationalMatrix, g: BigRational) -> Result<Self, ClassicalError> {
        let k = a.rows();
        if [a.cols(), x.rows(), x.cols(), y.rows(), y.cols()].iter().any(|&s| s != k) {
            return Err(ClassicalError::Shape);
        }
        if prime(&x) != x {
            return Err(ClassicalError::NotSelfDual("X"));
        }
        if prime(&y) != y {
            return Err(ClassicalError::NotSelfDual("Y"));
        }
        if a.det().is_zero() {
            return Err(ClassicalError::SingularA);
        }
        Ok(Self { a, x, y, g })
    }

    pub fn k(&self) -> usize {
        self.a.rows()
    }

    /// `M = [[A, AY], [XA, XAY + g A′⁻¹]]`; at `g = 0` the corner is `XAY`.
    pub fn matrix(&self) -> RationalMatrix {
        let (a, x, y) = (&self.a, &self.x, &self.y);
        let ay = a.mul(y);
        let xa = x.mul(a);
        let mut d = xa.mul(y);
        if !self.g.is_zero() {
            d = d.add(&self.corner());
        }
        RationalMatrix::from_blocks(a, &ay, &xa, &d)
    }

    fn corner(&self) -> RationalMatrix {
        prime(&self.a).inverse().expect("A is invertible").scale(&self.g)
    }

    /// The triple product `[[I, 0], [X, I]] · diag(A, g A′⁻¹) · [[I, Y], [0, I]]`.
    pub fn factorized(&self) -> RationalMatrix {
        let k = self.k();
        let (i, z) = (RationalMatrix::identity(k), RationalMatrix::zero(k, k));
        let lower = RationalMatrix::from_blocks(&i, &z, &self.x, &i);
        let corner = if self.g.is_zero() { z.clone() } else { self.corner() };
        let mid = RationalMatrix::from_blocks(&self.a, &z, &z, &corner);
        let upper = RationalMatrix::from_blocks(&i, &self.y, &z, &i);
        lower.mul(&mid).mul(&upper)
    }
}

fn small(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(rng.gen_range(-99..=99i64).into(), rng.gen_range(1..=99i64).into())
}

fn random_matrix(k: usize, rng: &mut ChaCha8Rng) -> RationalMatrix {
    RationalMatrix::from_rows((0..k).map(|_| (0..k).map(|_| small(rng)).collect()).collect())
}

/// `(R + R′)/2`, invariant under the prime map.
fn random_self_dual(k: usize, rng: &mut ChaCha8Rng) -> RationalMatrix {
    let r = random_matrix(k, rng);
    r.add(&prime(&r)).scale(&BigRational::new(1.into(), 2.into()))
}

pub const RETRY_BUDGET: usize = 64;

/// A random sample with entries of height at most 99.
pub fn sample_similitude(k: usize, g: &BigRational, rng: &mut ChaCha8Rng) -> Result<SimilitudeSample, ClassicalError> {
    for _ in 0..RETRY_BUDGET {
        let a = random_matrix(k, rng);
        if a.det().is_zero() {
            continue;
        }
        let (x, y) = (random_self_dual(k, rng), random_self_dual(k, rng));
        return SimilitudeSample::new(a, x, y, g.clone());
    }
    Err(ClassicalError::RetryBudget(RETRY_BUDGET))
}

/// `Σ_{i≤k} (−1)^i M^{k−i} ε_i + Σ_{i<k} (−1)^i π(M)^{k−i} ε_i`.
pub fn classical_parent_ch(m: &RationalMatrix) -> RationalMatrix {
    let k = m.rows() / 2;
    let eps = m.wedge_traces();
    let pm = classical_pi(m);
    let mut out = RationalMatrix::zero(2 * k, 2 * k);
    for (i, e) in eps.iter().enumerate().take(k + 1) {
        let s = if i % 2 == 0 { e.clone() } else { -e.clone() };
        out = out.add(&m.pow(k - i).scale(&s));
        if i < k {
            out = out.add(&pm.pow(k - i).scale(&s));
        }
    }
    out
}

/// Residuals of `MᵗΩM = gΩ` and `MΩMᵗ = gΩ`.
pub fn invariance_residuals(m: &RationalMatrix, g: &BigRational) -> (RationalMatrix, RationalMatrix) {
    let o = omega(m.rows() / 2);
    let go = o.scale(g);
    (m.transpose().mul(&o).mul(m).sub(&go), m.mul(&o).mul(&m.transpose()).sub(&go))
}

/// Per-sample check results, in a fixed order.
fn sample_checks(s: &SimilitudeSample) -> Vec<(&'static str, Option<String>)> {
    let k = s.k();
    let m = s.matrix();
    let nz = |r: RationalMatrix| (!r.is_zero()).then(|| r.to_string());
    let (left, right) = invariance_residuals(&m, &s.g);
    let det = m.det();
    let gk = (0..k).fold(BigRational::one(), |acc, _| acc * &s.g);
    let eps = m.wedge_traces();
    let pm = classical_pi(&m);
    vec![
        ("factorization reproduces M", nz(s.factorized().sub(&m))),
        ("M^t Omega M = g Omega", nz(left)),
        ("M Omega M^t = g Omega", nz(right)),
        ("det M = g^k", (det != gk).then(|| format!("det {det}, g^k {gk}"))),
        ("eps_2k = det M", (eps[2 * k] != det).then(|| format!("eps {}, det {det}", eps[2 * k]))),
        ("eps_1 = tr M", (eps[1] != m.trace()).then(|| eps[1].to_string())),
        ("pi(M) block form", nz(pm.sub(&classical_pi_blocks(&m)))),
        ("pi(pi(M)) = M", nz(classical_pi(&pm).sub(&m))),
        ("classical parent CH", nz(classical_parent_ch(&m))),
    ]
}

fn aggregate(prefix: &str, samples: &[SimilitudeSample]) -> Vec<Outcome> {
    let results: Vec<Vec<(&'static str, Option<String>)>> = samples.par_iter().map(sample_checks).collect();
    let Some(first) = results.first() else { return Vec::new() };
    let zero = samples.iter().filter(|s| s.g.is_zero()).count();
    let negative = samples.iter().filter(|s| s.g.is_negative()).count();
    let detail = format!("{} samples (g=0: {zero}, g<0: {negative})", samples.len());
    (0..first.len())
        .map(|c| {
            let bad = results.iter().enumerate().find_map(|(i, r)| {
                r[c].1.as_ref().map(|e| format!("sample {i} (A={}, X={}, Y={}, g={}): {e}", samples[i].a, samples[i].x, samples[i].y, samples[i].g))
            });
            Outcome::from_residual(format!("{prefix} {}", first[c].0), bad).with_detail(detail.clone())
        })
        .collect()
}

/// Fixed `g`, or a fresh multiplier per sample.
pub fn classical_suite(k: usize, samples: usize, g: Option<&BigRational>, seed: u64) -> Result<Vec<Outcome>, ClassicalError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let o = omega(k);
    let i = RationalMatrix::identity(2 * k);
    let mut out = vec![
        Outcome::from_residual(format!("k={k} Omega^t = -Omega"), (o.transpose() != o.neg()).then(|| o.to_string())),
        Outcome::from_residual(format!("k={k} Omega^2 = -I"), (o.mul(&o) != i.neg()).then(|| o.to_string())),
    ];
    // without a fixed multiplier every tenth sample is degenerate (g = 0, where
    // the two invariance equalities are independent) and the next one negative
    let mut drawn = Vec::with_capacity(samples);
    for i in 0..samples {
        let gi = match g {
            Some(g) => g.clone(),
            None if i % 10 == 0 => BigRational::zero(),
            None => loop {
                let x = small(&mut rng);
                if !x.is_zero() {
                    break if i % 10 == 1 { -x.abs() } else { x };
                }
            },
        };
        drawn.push(sample_similitude(k, &gi, &mut rng)?);
    }
    let label = match g {
        Some(g) => format!("k={k} g={g}"),
        None => format!("k={k}"),
    };
    out.extend(aggregate(&label, &drawn));
    Ok(out)
}

/// Parses `a`, `-a/b` or a decimal-free integer ratio.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: num_bigint::BigInt = n.trim().parse().ok()?;
    let d: num_bigint::BigInt = d.trim().parse().ok()?;
    (!d.is_zero()).then(|| BigRational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjugate_at_k1() {
        let m = RationalMatrix::from_ints(&[&[2, 3], &[5, 7]]);
        assert_eq!(classical_pi(&m), RationalMatrix::from_ints(&[&[7, -3], &[-5, 2]]));
        assert!(classical_parent_ch(&m).is_zero());
    }

    #[test]
    fn wedge_traces_of_diagonal() {
        let m = RationalMatrix::from_ints(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]]);
        let e: Vec<i64> = m.wedge_traces().iter().map(|x| x.to_integer().try_into().unwrap()).collect();
        assert_eq!(e, vec![1, 6, 11, 6]);
        assert!(m.wedge_traces().iter().all(|x| !x.is_negative()));
    }
}
