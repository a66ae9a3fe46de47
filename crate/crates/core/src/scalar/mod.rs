//! Exact arithmetic in the field of rational functions ℚ(q).
//!
//! A [`QScalar`] is a ratio of integer-coefficient Laurent polynomials kept in
//! canonical form: the denominator is an honest polynomial with positive
//! constant term, numerator and denominator are coprime, and their joint
//! integer content is one. Canonical form makes `==` decide equality.

mod field;
mod laurent;
pub mod modular;
mod text;
mod upoly;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use field::{Field, ModField, QField};
pub use laurent::LaurentPoly;
pub use modular::PrimePoint;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScalarError {
    #[error("division by zero: {context}")]
    DivisionByZero { context: String },
    #[error("point (p={p}, q={qhat}) is inadmissible: {reason}")]
    InadmissiblePoint { p: u64, qhat: u64, reason: String },
    #[error("cannot parse scalar {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QScalar {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Default for QScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl QScalar {
    pub fn zero() -> Self {
        Self { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self { num: LaurentPoly::constant(n), den: LaurentPoly::one() }
    }

    pub fn from_ratio(a: i64, b: i64) -> Self {
        Self::from_parts(LaurentPoly::constant(a), LaurentPoly::constant(b))
    }

    pub fn from_bigint_ratio(a: BigInt, b: BigInt) -> Self {
        Self::from_parts(LaurentPoly::monomial(a, 0), LaurentPoly::monomial(b, 0))
    }

    /// `q^e`.
    pub fn q_pow(e: i32) -> Self {
        Self { num: LaurentPoly::q_pow(e), den: LaurentPoly::one() }
    }

    pub fn q() -> Self {
        Self::q_pow(1)
    }

    pub fn from_laurent(p: LaurentPoly) -> Self {
        Self { num: p, den: LaurentPoly::one() }
    }

    /// `num / den`, normalized. Panics if `den` is zero; use [`QScalar::try_div`]
    /// for a recoverable division.
    pub fn from_parts(num: LaurentPoly, den: LaurentPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut s = Self { num, den };
        s.normalize();
        s
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    /// True when the denominator is 1, i.e. the value is a Laurent polynomial.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = LaurentPoly::one();
            return;
        }
        // Move powers of q out of the denominator.
        let dl = self.den.low();
        if dl != 0 {
            self.den = self.den.shift(-dl);
            self.num = self.num.shift(-dl);
        }
        if !self.den.is_one() {
            if self.den.high() > 0 {
                let g = upoly::gcd(self.num.poly_part(), self.den.poly_part());
                if g.len() > 1 {
                    let low = self.num.low();
                    self.num = LaurentPoly::from_parts(low, upoly::exact_div(self.num.poly_part(), &g));
                    self.den = LaurentPoly::from_parts(0, upoly::exact_div(self.den.poly_part(), &g));
                }
            }
            let c = self.num.content().gcd(&self.den.content());
            if !c.is_one() {
                self.num = self.num.div_integer(&c);
                self.den = self.den.div_integer(&c);
            }
            if self.den.lowest_coeff_is_negative() {
                self.num = -&self.num;
                self.den = -&self.den;
            }
        }
    }

    pub fn neg(&self) -> Self {
        Self { num: -&self.num, den: self.den.clone() }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            let num = &self.num + &o.num;
            if self.den.is_one() {
                return Self { num, den: LaurentPoly::one() };
            }
            return Self::from_parts(num, self.den.clone());
        }
        let num = &(&self.num * &o.den) + &(&o.num * &self.den);
        Self::from_parts(num, &self.den * &o.den)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return Self { num: &self.num * &o.num, den: LaurentPoly::one() };
        }
        Self::from_parts(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::from_parts(self.den.clone(), self.num.clone()))
        }
    }

    pub fn try_div(&self, o: &Self) -> Result<Self, ScalarError> {
        let inv = o.inv().ok_or_else(|| ScalarError::DivisionByZero {
            context: format!("({self}) / 0"),
        })?;
        Ok(self.mul(&inv))
    }

    /// Panicking division for internal formulas whose denominators are known nonzero.
    pub fn div(&self, o: &Self) -> Self {
        self.try_div(o).expect("division by a nonzero scalar")
    }

    pub fn pow(&self, n: i32) -> Self {
        let base = if n < 0 { self.inv().expect("negative power of zero") } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// Substitutes `q -> q^{-1}`.
    pub fn bar(&self) -> Self {
        Self::from_parts(self.num.bar(), self.den.bar())
    }

    /// Residue of the value at `q = qhat` modulo `p`.
    pub fn reduce(&self, pt: &PrimePoint) -> Result<u64, ScalarError> {
        let d = self.den.eval_mod(pt.p, pt.qhat);
        let dinv = modular::inv_mod(d, pt.p).ok_or_else(|| ScalarError::InadmissiblePoint {
            p: pt.p,
            qhat: pt.qhat,
            reason: format!("denominator of {self} vanishes"),
        })?;
        Ok(modular::mul_mod(self.num.eval_mod(pt.p, pt.qhat), dinv, pt.p))
    }

    /// Largest absolute exponent appearing in numerator or denominator; a
    /// crude degree measure used in failure-probability bounds.
    pub fn degree_span(&self) -> u32 {
        let n = (self.num.high() - self.num.low()).unsigned_abs();
        let d = self.den.high().unsigned_abs();
        n.max(d) + self.num.low().unsigned_abs()
    }

    /// If the value is a rational constant, returns it.
    pub fn as_rational(&self) -> Option<num_rational::BigRational> {
        if self.num.high() == 0 && self.num.low() == 0 && self.den.high() == 0 {
            let n = self.num.coeff(0);
            let d = self.den.coeff(0);
            Some(num_rational::BigRational::new(n, d))
        } else if self.num.is_zero() {
            Some(num_rational::BigRational::zero())
        } else {
            None
        }
    }

    /// Value at a rational `q`; `None` at a pole.
    pub fn eval_rational(&self, q: &num_rational::BigRational) -> Option<num_rational::BigRational> {
        let d = self.den.eval_rational(q);
        (!d.is_zero()).then(|| self.num.eval_rational(q) / d)
    }

    pub fn is_negative_constant(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_negative())
    }
}

/// The q-integer `n_q = (q^n - q^{-n}) / (q - q^{-1})`.
pub fn q_int(n: i64) -> QScalar {
    if n == 0 {
        return QScalar::zero();
    }
    let m = n.unsigned_abs() as i32;
    let p = LaurentPoly::from_terms((0..m).map(|j| (1, m - 1 - 2 * j)));
    let v = QScalar::from_laurent(p);
    if n < 0 {
        v.neg()
    } else {
        v
    }
}

/// `q - q^{-1}`.
pub fn lambda() -> QScalar {
    QScalar::q_pow(1).sub(&QScalar::q_pow(-1))
}

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &LaurentPoly| {
            if p.terms().count() > 1 || p.coeffs().first().is_some_and(|c| c.is_negative()) {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        write!(f, "{} / {}", wrap(&self.num), wrap(&self.den))
    }
}

impl std::str::FromStr for QScalar {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        text::parse_scalar(s)
    }
}

impl From<i64> for QScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> QScalar {
        x.parse().unwrap()
    }

    #[test]
    fn inverse_pair() {
        assert_eq!(QScalar::q().mul(&QScalar::q_pow(-1)), QScalar::one());
    }

    #[test]
    fn telescoping_quotient() {
        let a = QScalar::q_pow(2).sub(&QScalar::q_pow(-2));
        let b = lambda();
        assert_eq!(a.div(&b), s("q + q^-1"));
    }

    #[test]
    fn sum_back_to_q() {
        assert_eq!(lambda().add(&QScalar::q_pow(-1)), QScalar::q());
    }

    #[test]
    fn q_integers() {
        assert_eq!(q_int(1), QScalar::one());
        assert_eq!(q_int(2), s("q + q^-1"));
        assert_eq!(q_int(0), QScalar::zero());
        for n in 1..6 {
            assert_eq!(q_int(-n), q_int(n).neg());
            let direct = QScalar::q_pow(n as i32).sub(&QScalar::q_pow(-(n as i32))).div(&lambda());
            assert_eq!(q_int(n), direct);
        }
    }

    #[test]
    fn bar_substitution() {
        assert_eq!(QScalar::q().bar(), QScalar::q_pow(-1));
        assert_eq!(q_int(4).bar(), q_int(4));
        for k in 1..4 {
            let mu = QScalar::q_pow(-1 - 2 * k).neg();
            assert_eq!(mu.bar(), QScalar::q_pow(1 + 2 * k).neg());
        }
    }

    #[test]
    fn reduction_examples() {
        let pt = PrimePoint { p: 101, qhat: 3, guard: 0 };
        assert_eq!(QScalar::q().reduce(&pt), Ok(3));
        assert_eq!(QScalar::q_pow(-1).reduce(&pt), Ok(34));
        assert_eq!(lambda().reduce(&pt), Ok(70));
    }

    #[test]
    fn division_by_zero_reports_context() {
        let err = QScalar::q().try_div(&QScalar::zero()).unwrap_err();
        assert!(matches!(err, ScalarError::DivisionByZero { .. }));
    }

    #[test]
    fn canonical_sign_and_content() {
        let a = QScalar::from_parts(LaurentPoly::constant(-4), LaurentPoly::from_terms([(-2, 0), (-6, 2)]));
        // -4 / (-2 - 6q^2) = 2 / (1 + 3 q^2)
        assert_eq!(a.numerator(), &LaurentPoly::constant(2));
        assert_eq!(a.denominator(), &LaurentPoly::from_terms([(1, 0), (3, 2)]));
    }

    #[test]
    fn text_roundtrip_examples() {
        for t in ["q^2 - 1", "-3*q^-2 + q", "(q^2 + 1) / (q^4 + q^2 + 1)", "0", "7", "-q"] {
            let v = s(t);
            assert_eq!(s(&v.to_string()), v, "{t}");
        }
        assert_eq!(s("(q^2 - 1) / (q - q^-1)"), QScalar::q());
    }
}
