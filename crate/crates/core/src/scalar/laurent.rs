use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::modular::{add_mod, mul_mod, pow_mod, inv_mod};
use super::upoly;

/// Integer-coefficient Laurent polynomial in `q`.
///
/// `coeffs[i]` is the coefficient of `q^(low + i)`. Both ends are trimmed, so
/// the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct LaurentPoly {
    low: i32,
    coeffs: Vec<BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(BigInt::from(c), 0)
    }

    pub fn monomial(c: BigInt, exp: i32) -> Self {
        Self::from_parts(exp, vec![c])
    }

    /// `q^exp`.
    pub fn q_pow(exp: i32) -> Self {
        Self::monomial(BigInt::one(), exp)
    }

    pub fn from_parts(low: i32, coeffs: Vec<BigInt>) -> Self {
        let mut p = Self { low, coeffs };
        p.normalize();
        p
    }

    /// Builds from `(coefficient, exponent)` pairs; repeated exponents add up.
    pub fn from_terms<I: IntoIterator<Item = (i64, i32)>>(terms: I) -> Self {
        let mut acc = Self::zero();
        for (c, e) in terms {
            acc = &acc + &Self::monomial(BigInt::from(c), e);
        }
        acc
    }

    fn normalize(&mut self) {
        upoly::trim(&mut self.coeffs);
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros == self.coeffs.len() {
            self.coeffs.clear();
            self.low = 0;
            return;
        }
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.low += lead_zeros as i32;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Lowest exponent with a nonzero coefficient (0 for the zero polynomial).
    pub fn low(&self) -> i32 {
        self.low
    }

    /// Highest exponent with a nonzero coefficient (0 for the zero polynomial).
    pub fn high(&self) -> i32 {
        if self.is_zero() {
            0
        } else {
            self.low + self.coeffs.len() as i32 - 1
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Iterator over `(coefficient, exponent)` for nonzero terms, ascending exponent.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&BigInt, i32)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (c, self.low + i as i32))
    }

    pub fn coeff(&self, exp: i32) -> BigInt {
        let i = exp - self.low;
        if i < 0 || i as usize >= self.coeffs.len() {
            BigInt::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    /// Multiplies by `q^e`.
    pub fn shift(&self, e: i32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self { low: self.low + e, coeffs: self.coeffs.clone() }
    }

    /// Substitutes `q -> q^{-1}`.
    pub fn bar(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self { low: -self.high(), coeffs }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { low: self.low, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn content(&self) -> BigInt {
        upoly::content(&self.coeffs)
    }

    pub(crate) fn div_integer(&self, c: &BigInt) -> Self {
        Self::from_parts(self.low, self.coeffs.iter().map(|x| x / c).collect())
    }

    pub(crate) fn poly_part(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Value at `q = qhat` in the prime field of order `p`.
    ///
    /// Requires `qhat` invertible when negative exponents are present.
    pub fn eval_mod(&self, p: u64, qhat: u64) -> u64 {
        if self.is_zero() {
            return 0;
        }
        let pb = BigInt::from(p);
        let mut acc = 0u64;
        for c in self.coeffs.iter().rev() {
            let r = c.mod_floor(&pb).to_u64().expect("residue fits u64");
            acc = add_mod(mul_mod(acc, qhat, p), r, p);
        }
        let base = if self.low >= 0 {
            pow_mod(qhat, self.low as u64, p)
        } else {
            pow_mod(inv_mod(qhat, p).expect("qhat invertible"), (-self.low) as u64, p)
        };
        mul_mod(acc, base, p)
    }

    /// Value at an integer-rational point `q = a` with `a` given as a big rational.
    pub fn eval_rational(&self, a: &num_rational::BigRational) -> num_rational::BigRational {
        use num_rational::BigRational;
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * a + BigRational::from_integer(c.clone());
        }
        let mut base = BigRational::one();
        let step = if self.low >= 0 { a.clone() } else { a.recip() };
        for _ in 0..self.low.unsigned_abs() {
            base *= &step;
        }
        acc * base
    }

    pub(crate) fn lowest_coeff_is_negative(&self) -> bool {
        self.coeffs.first().is_some_and(|c| c.is_negative())
    }
}

impl<'a> std::ops::Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let low = self.low.min(o.low);
        let high = self.high().max(o.high());
        let mut coeffs = vec![BigInt::zero(); (high - low + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.low - low) as usize + i] += c;
        }
        for (i, c) in o.coeffs.iter().enumerate() {
            coeffs[(o.low - low) as usize + i] += c;
        }
        LaurentPoly::from_parts(low, coeffs)
    }
}

impl<'a> std::ops::Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        self + &(-o)
    }
}

impl std::ops::Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { low: self.low, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl<'a> std::ops::Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || o.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LaurentPoly::from_parts(self.low + o.low, coeffs)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (c, e) in self.terms().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (mag.is_one(), e) {
                (_, 0) => write!(f, "{mag}")?,
                (true, 1) => write!(f, "q")?,
                (true, e) => write!(f, "q^{e}")?,
                (false, 1) => write!(f, "{mag}*q")?,
                (false, e) => write!(f, "{mag}*q^{e}")?,
            }
        }
        Ok(())
    }
}
