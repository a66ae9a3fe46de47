//! Rational identities in the chart ν_{2k+1−j} = ν₀²/ν_j, decided by exact
//! evaluation at random admissible points.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::report::Outcome;

use super::{newton_power_sums, SpectralPoly};

/// One admissible sample: `q`, the full `ν = (ν₀, …, ν_{2k})` in the chart,
/// and an auxiliary `z` for the partial-fraction checks.
#[derive(Clone, Debug)]
pub struct Point {
    pub q: BigRational,
    pub nu: Vec<BigRational>,
    pub z: BigRational,
}

fn small(rng: &mut ChaCha8Rng) -> BigRational {
    let n: i64 = rng.gen_range(1..=99) * if rng.gen_bool(0.5) { 1 } else { -1 };
    BigRational::new(n.into(), rng.gen_range(1..=99i64).into())
}

fn admissible(k: usize, p: &Point) -> bool {
    let one = BigRational::one();
    if p.q.abs() == one || p.q.is_zero() || p.nu.iter().any(Zero::is_zero) {
        return false;
    }
    let nu = &p.nu[1..];
    let pole = &p.nu[0] / &p.q;
    let mut bad: Vec<BigRational> = vec![pole.clone(), -pole];
    for (i, x) in nu.iter().enumerate() {
        if bad.contains(x) || nu[..i].contains(x) {
            return false;
        }
        bad.push(x.clone());
    }
    debug_assert_eq!(nu.len(), 2 * k);
    !bad.contains(&p.z)
}

/// A random admissible point; inadmissible draws are resampled.
pub fn sample_point(k: usize, rng: &mut ChaCha8Rng) -> Point {
    loop {
        let q = small(rng).abs();
        let nu0 = small(rng);
        let half: Vec<BigRational> = (0..k).map(|_| small(rng)).collect();
        let mut nu = vec![nu0.clone(); 2 * k + 1];
        for (j, x) in half.iter().enumerate() {
            nu[j + 1] = x.clone();
            nu[2 * k - j] = &nu0 * &nu0 / x;
        }
        let p = Point { q, nu, z: small(rng) };
        if admissible(k, &p) {
            return p;
        }
    }
}

fn pow(x: &BigRational, n: i64) -> BigRational {
    let b = if n < 0 { x.recip() } else { x.clone() };
    (0..n.unsigned_abs()).fold(BigRational::one(), |acc, _| acc * &b)
}

fn sign(n: usize) -> BigRational {
    if n.is_multiple_of(2) {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

fn elementary(xs: &[BigRational]) -> Vec<BigRational> {
    let mut e = vec![BigRational::one()];
    for x in xs {
        e.push(BigRational::zero());
        for j in (1..e.len()).rev() {
            let t = &e[j - 1] * x;
            e[j] += t;
        }
    }
    e
}

fn complete(xs: &[BigRational], n: usize) -> Vec<BigRational> {
    let mut h = vec![BigRational::zero(); n + 1];
    h[0] = BigRational::one();
    for x in xs {
        for j in 1..=n {
            let t = &h[j - 1] * x;
            h[j] += t;
        }
    }
    h
}

/// Values of all spectral quantities at one point.
struct Values {
    k: usize,
    q: BigRational,
    mu: BigRational,
    g: BigRational,
    nu0: BigRational,
    nu: Vec<BigRational>,
    d: Vec<BigRational>,
    dh: Vec<BigRational>,
    /// `a_n ↦ e_n(ν₀, −ν₀, ν⃗)`, padded with zeros.
    a: Vec<BigRational>,
    s: Vec<BigRational>,
    /// `p_n ↦ q^{n−1} Σ d_i ν_i^n`.
    p: Vec<BigRational>,
    /// `q^{n−1} Σ d̂_i ν_i^n`.
    ph: Vec<BigRational>,
}

impl Values {
    fn new(k: usize, max_n: usize, pt: &Point) -> Self {
        let q = pt.q.clone();
        let q2 = pow(&q, -2);
        let nu = pt.nu[1..].to_vec();
        let m = 2 * k;
        let ratio = |i: usize, j: usize, c: &BigRational| (&nu[i] - c * &nu[j]) / (&nu[i] - &nu[j]);
        let dh: Vec<BigRational> =
            (0..m).map(|i| (0..m).filter(|&j| j != i).fold(BigRational::one(), |acc, j| acc * ratio(i, j, &q2))).collect();
        let q4 = pow(&q, -4);
        let d: Vec<BigRational> = (0..m)
            .map(|i| {
                let ib = m - 1 - i;
                (0..m).filter(|&j| j != i && j != ib).fold(ratio(i, ib, &q4), |acc, j| acc * ratio(i, j, &q2))
            })
            .collect();
        let sums = |w: &[BigRational], n: usize| -> BigRational {
            let t: BigRational = w.iter().zip(&nu).map(|(c, x)| c * pow(x, n as i64)).sum();
            t * pow(&q, n as i64 - 1)
        };
        let p = (0..=max_n).map(|n| sums(&d, n)).collect();
        let ph = (0..=max_n).map(|n| sums(&dh, n)).collect();
        let nu0 = pt.nu[0].clone();
        let mut ext = vec![nu0.clone(), -nu0.clone()];
        ext.extend(nu.iter().cloned());
        let mut a = elementary(&ext);
        a.resize(a.len().max(max_n + 1), BigRational::zero());
        let s = complete(&nu, max_n);
        let mu = -pow(&q, -1 - 2 * k as i64);
        Self { k, g: &nu0 * &nu0, q, mu, nu0, nu, d, dh, a, s, p, ph }
    }

    fn qint(&self, n: i64) -> BigRational {
        (pow(&self.q, n) - pow(&self.q, -n)) / (&self.q - self.q.recip())
    }

    fn newton_a(&self, n: usize) -> BigRational {
        let q = &self.q;
        let lhs: BigRational = (0..n).map(|i| pow(&-q, i as i64) * &self.a[i] * &self.p[n - i]).sum();
        lhs - self.newton_a_rhs(n, &self.a[n])
    }

    fn newton_a_rhs(&self, n: usize, an: &BigRational) -> BigRational {
        let q = &self.q;
        let mut rhs = sign(n - 1) * self.qint(n as i64) * an;
        for i in 1..=n / 2 {
            let c = &self.mu * pow(q, (n - 2 * i) as i64) - pow(q, 1 - n as i64 + 2 * i as i64);
            rhs += sign(n) * c * &self.a[n - 2 * i] * pow(&self.g, i as i64);
        }
        rhs
    }

    fn newton_s(&self, n: usize) -> BigRational {
        let q = &self.q;
        let lhs: BigRational = (0..n).map(|i| pow(q, -(i as i64)) * &self.s[i] * &self.p[n - i]).sum();
        let mut rhs = self.qint(n as i64) * &self.s[n];
        for i in 1..=n / 2 {
            let c = &self.mu * pow(q, 2 * i as i64 - n as i64) + pow(q, n as i64 - 2 * i as i64 - 1);
            rhs += c * &self.s[n - 2 * i] * pow(&self.g, i as i64);
        }
        lhs - rhs
    }

    fn p0_modified(&self) -> BigRational {
        let q = &self.q;
        (BigRational::one() - &self.mu * &self.mu * q * q) / (q - q.recip())
    }

    /// The iterations for `s′` and `p′`.
    fn modified(&self, max_n: usize) -> (Vec<BigRational>, Vec<BigRational>) {
        let q2 = pow(&self.q, -2);
        let mut s = vec![self.s[0].clone()];
        let mut p = vec![self.p0_modified()];
        if max_n >= 1 {
            s.push(self.s[1].clone());
            p.push(self.p[1].clone());
        }
        for i in 2..=max_n {
            s.push(&self.s[i] + &s[i - 2] * &self.g);
            let t = &self.p[i] + (&q2 * &p[i - 2] - &self.p[i - 2]) * &self.g;
            p.push(t);
        }
        (s, p)
    }

    fn w1(&self, z: &BigRational) -> BigRational {
        let q2 = pow(&self.q, -2);
        self.nu.iter().map(|x| (z - &q2 * x) / (z - x)).product()
    }

    fn w2(&self, z: &BigRational) -> BigRational {
        &self.g * self.w1(z) / (z * z - pow(&self.q, -2) * &self.g)
    }

    fn pole(&self) -> BigRational {
        &self.nu0 / &self.q
    }

    /// Simple-ratio expansion of `z^j w₂(z)` for `j = 0, 1`.
    fn w_expansion(&self, z: &BigRational, j: i64) -> BigRational {
        let q = &self.q;
        let mut t: BigRational = (0..2 * self.k)
            .map(|i| q * q * (&self.d[i] - &self.dh[i]) * pow(&self.nu[i], 1 + j) / (z - &self.nu[i]))
            .sum();
        let a = self.pole();
        let (up, down) = (self.w1(&a), self.w1(&-a.clone()));
        let half = q * &self.nu0 / BigRational::from_integer(2.into());
        t += half * (pow(&a, j) * up / (z - &a) - pow(&-a.clone(), j) * down / (z + &a));
        t
    }

    fn w1_expansion(&self, z: &BigRational) -> BigRational {
        let c = BigRational::one() - pow(&self.q, -2);
        BigRational::one() + (0..2 * self.k).map(|i| &c * &self.nu[i] * &self.dh[i] / (z - &self.nu[i])).sum::<BigRational>()
    }
}

/// Outcome of one identity over all points.
#[derive(Clone, Debug)]
pub struct RationalCheck {
    pub name: String,
    pub points: usize,
    pub failure: Option<String>,
}

impl RationalCheck {
    pub fn outcome(&self) -> Outcome {
        Outcome::from_residual(self.name.clone(), self.failure.clone()).with_detail(format!("zero at {} sample points", self.points))
    }
}

pub struct RationalSuite {
    k: usize,
    max_n: usize,
    points: Vec<Point>,
    polys: Vec<SpectralPoly>,
}

impl RationalSuite {
    /// Evaluation count: above the total degree of every cleared residual,
    /// which is at most `(2k)²(n + 3)` in `q` and the ν's together.
    pub fn point_count(k: usize, max_n: usize) -> usize {
        4 * k * k * (max_n + 3) + 1
    }

    pub fn new(k: usize, max_n: usize, seed: u64) -> Self {
        Self::with_points(k, max_n, seed, Self::point_count(k, max_n))
    }

    pub fn with_points(k: usize, max_n: usize, seed: u64, count: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x05be_c7a1);
        let points = (0..count).map(|_| sample_point(k, &mut rng)).collect();
        Self { k, max_n, points, polys: newton_power_sums(k, max_n) }
    }

    /// Named residuals at one point, in a fixed order.
    fn residuals(&self, pt: &Point) -> Vec<(String, BigRational)> {
        let (k, n_max) = (self.k, self.max_n);
        let v = Values::new(k, n_max, pt);
        let q = &v.q;
        let (sm, pm) = v.modified(n_max);
        let mut out = Vec::new();
        for n in 1..=n_max {
            out.push((format!("newton-a n={n}"), v.newton_a(n)));
        }
        for n in 1..=n_max {
            out.push((format!("newton-s n={n}"), v.newton_s(n)));
        }
        for n in 1..=n_max {
            let lhs: BigRational = (0..n).map(|i| pow(q, -(i as i64)) * &v.s[i] * &pm[n - i]).sum();
            out.push((format!("modified newton n={n}"), lhs - v.qint(n as i64) * &v.s[n]));
        }
        for n in 0..=n_max {
            let lhs: BigRational = (0..=n).map(|i| sign(i) * &v.a[i] * &sm[n - i]).sum();
            let delta = if n == 0 { BigRational::one() } else { BigRational::zero() };
            out.push((format!("modified wronski n={n}"), lhs - delta));
        }
        for n in 0..=n_max {
            out.push((format!("p'_{n} = q^(n-1) sum dhat_i nu_i^n"), &pm[n] - &v.ph[n]));
        }
        let q2 = pow(q, -2);
        let q4 = pow(q, -4);
        let dd = (0..2 * k)
            .map(|i| {
                let x2 = &v.nu[i] * &v.nu[i];
                &v.d[i] - (&x2 - &q4 * &v.g) / (&x2 - &q2 * &v.g) * &v.dh[i]
            })
            .find(|r| !r.is_zero())
            .unwrap_or_else(BigRational::zero);
        out.push(("d_i = (nu_i^2 - q^-4 nu0^2)/(nu_i^2 - q^-2 nu0^2) dhat_i".into(), dd));
        let qk = pow(q, -2 * k as i64);
        let sum_dh: BigRational = v.dh.iter().sum::<BigRational>() / q;
        out.push(("init: q^-1 sum dhat_i = p'_0".into(), &sum_dh - v.p0_modified()));
        out.push(("init: p'_0 = q^-2k (2k)_q".into(), v.p0_modified() - &qk * v.qint(2 * k as i64)));
        let p0 = v.d.iter().sum::<BigRational>() / q;
        let tr = pow(q, -1 - 2 * k as i64) * (v.qint(2 * k as i64 + 1) - BigRational::one());
        out.push(("init: p_0 = q^-1 sum d_i = q^(-1-2k)((2k+1)_q - 1)".into(), &p0 - &tr));
        let s3: BigRational = (0..2 * k).map(|i| &v.nu[i] * (&v.d[i] - &v.dh[i])).sum();
        out.push(("init: sum nu_i (d_i - dhat_i) = 0".into(), s3));
        let a = v.pole();
        out.push(("w1(q^-1 nu0) = q^-2k".into(), v.w1(&a) - &qk));
        out.push(("w1(-q^-1 nu0) = q^-2k".into(), v.w1(&-a.clone()) - &qk));
        let zero = BigRational::zero();
        let w20 = v.w2(&zero);
        out.push(("w2(0) = -q^(2-4k)".into(), &w20 + pow(q, 2 - 4 * k as i64)));
        out.push((
            "w2(0) = -q^3 (p_0 - p'_0) - q^(2-2k)".into(),
            &w20 + pow(q, 3) * (&p0 - v.p0_modified()) + pow(q, 2 - 2 * k as i64),
        ));
        out.push(("w1 simple-ratio expansion".into(), v.w1(&pt.z) - v.w1_expansion(&pt.z)));
        out.push(("w2 simple-ratio expansion".into(), v.w2(&pt.z) - v.w_expansion(&pt.z, 0)));
        out.push(("w3 simple-ratio expansion".into(), &pt.z * v.w2(&pt.z) - v.w_expansion(&pt.z, 1)));
        for n in 1..=k.min(n_max) {
            // solve (Newton-a) for a_n from the power-sum images
            let zero_an = v.newton_a_rhs(n, &BigRational::zero());
            let lhs: BigRational = (0..n).map(|i| pow(&-q.clone(), i as i64) * &v.a[i] * &v.p[n - i]).sum();
            let an = (lhs - zero_an) / (sign(n - 1) * v.qint(n as i64));
            out.push((format!("closure: Newton recursion gives a_{n} = e_{n}(nu0,-nu0,nu)"), an - &v.a[n]));
        }
        for n in 1..=n_max {
            out.push((format!("p_{n} image is the polynomial from the Newton recursion"), &v.p[n] - self.polys[n].eval(q, &pt.nu)));
        }
        out
    }

    pub fn run_checks(&self) -> Vec<RationalCheck> {
        let all: Vec<Vec<(String, BigRational)>> = self.points.par_iter().map(|p| self.residuals(p)).collect();
        let Some(first) = all.first() else { return Vec::new() };
        (0..first.len())
            .map(|c| {
                let failure = all.iter().enumerate().find(|(_, r)| !r[c].1.is_zero()).map(|(i, r)| {
                    let pt = &self.points[i];
                    let nu: Vec<String> = pt.nu.iter().map(ToString::to_string).collect();
                    format!("residual {} at q={}, nu=({}), z={}", r[c].1, pt.q, nu.join(", "), pt.z)
                });
                RationalCheck { name: format!("k={} {}", self.k, first[c].0), points: self.points.len(), failure }
            })
            .collect()
    }

    pub fn run(&self) -> Vec<Outcome> {
        self.run_checks().iter().map(RationalCheck::outcome).collect()
    }
}
