//! Prime-field arithmetic on `u64` residues and evaluation points `(p, q̂)`.

use rand::Rng;
use serde::Serialize;

use super::{QScalar, ScalarError};

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse by the extended Euclidean algorithm; `None` for zero.
pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return None;
    }
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let qt = r0 / r1;
        (r0, r1) = (r1, r0 - qt * r1);
        (t0, t1) = (t1, t0 - qt * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(p as i128) as u64)
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// An evaluation point for probabilistic identity testing: the prime `p`, the
/// value `qhat` substituted for `q`, and the guard bound used when sampling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PrimePoint {
    pub p: u64,
    pub qhat: u64,
    pub guard: u32,
}

impl PrimePoint {
    /// Checks the admissibility conditions: `qhat ∉ {0, ±1}`, `i_q(qhat) ≠ 0` for
    /// `2 ≤ i ≤ guard`, and `1 + μ qhat^{2i-1} ≠ 0` for `1 ≤ i ≤ guard`
    /// whenever that factor is not identically zero.
    pub fn new(p: u64, qhat: u64, guard: u32, mu: &QScalar) -> Result<Self, ScalarError> {
        let pt = Self { p, qhat: qhat % p, guard };
        pt.check(mu)?;
        Ok(pt)
    }

    fn check(&self, mu: &QScalar) -> Result<(), ScalarError> {
        let (p, x) = (self.p, self.qhat);
        let bad = |why: &str| ScalarError::InadmissiblePoint { p, qhat: x, reason: why.to_string() };
        if x == 0 || x == 1 || x == p - 1 {
            return Err(bad("q must avoid 0 and ±1"));
        }
        let x2 = mul_mod(x, x, p);
        let mut pw = x2;
        for i in 2..=self.guard.max(1) {
            pw = mul_mod(pw, x2, p);
            if pw == 1 {
                return Err(bad(&format!("{i}_q vanishes")));
            }
        }
        let m = mu.reduce(self)?;
        let mut odd = x; // qhat^{2i-1}
        for i in 1..=self.guard.max(1) {
            // A factor that is already zero in ℚ(q) (the Sp-type degeneration
            // level) cannot be rescued by the choice of point.
            let symbolic = QScalar::one().add(&mu.mul(&QScalar::q_pow(2 * i as i32 - 1)));
            if !symbolic.is_zero() && add_mod(1, mul_mod(m, odd, p), p) == 0 {
                return Err(bad(&format!("1 + mu q^{} vanishes", 2 * i - 1)));
            }
            odd = mul_mod(odd, x2, p);
        }
        Ok(())
    }

    /// Draws an admissible point with a random prime in `[2^61, 2^62)`.
    pub fn sample<R: Rng>(rng: &mut R, guard: u32, mu: &QScalar) -> Self {
        loop {
            let mut n: u64 = rng.gen_range((1u64 << 61)..(1u64 << 62)) | 1;
            while !is_prime(n) {
                n += 2;
            }
            let qhat = rng.gen_range(2..n - 1);
            if let Ok(pt) = Self::new(n, qhat, guard, mu) {
                return pt;
            }
        }
    }

    /// `count` independent admissible points, deterministic in `seed`.
    pub fn sample_many(seed: u64, count: usize, guard: u32, mu: &QScalar) -> Vec<Self> {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut out: Vec<Self> = Vec::with_capacity(count);
        while out.len() < count {
            let pt = Self::sample(&mut rng, guard, mu);
            if !out.iter().any(|o| o.p == pt.p) {
                out.push(pt);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_mod_101() {
        assert_eq!(inv_mod(3, 101), Some(34));
        assert_eq!(inv_mod(0, 101), None);
    }

    #[test]
    fn miller_rabin_small_and_large() {
        assert!(is_prime(101));
        assert!(!is_prime(561));
        assert!(is_prime(2305843009213693951)); // 2^61 - 1
        assert!(!is_prime(2305843009213693953));
    }

    #[test]
    fn sampling_is_deterministic() {
        let mu = QScalar::q_pow(-5).neg();
        let a = PrimePoint::sample_many(7, 3, 8, &mu);
        let b = PrimePoint::sample_many(7, 3, 8, &mu);
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
        for pt in &a {
            assert!(is_prime(pt.p));
        }
    }
}
