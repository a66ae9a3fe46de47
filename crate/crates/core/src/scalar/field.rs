use std::fmt::{Debug, Display};

use super::modular::{add_mod, inv_mod, mul_mod, sub_mod};
use super::{PrimePoint, QScalar, ScalarError};

/// Coefficient field used by the generic operator and polynomial code.
///
/// Elements are plain values; the field object carries whatever context the
/// arithmetic needs (nothing for ℚ(q), the modulus and `q̂` for a prime point).
pub trait Field: Clone + Send + Sync + Debug {
    type Elem: Clone + PartialEq + Debug + Display + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// Image of an exact scalar.
    fn from_q(&self, x: &QScalar) -> Result<Self::Elem, ScalarError>;
    fn is_exact(&self) -> bool;

    fn from_int(&self, n: i64) -> Self::Elem {
        self.from_q(&QScalar::from_int(n)).expect("integers embed")
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }
}

/// The exact field ℚ(q).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QField;

impl Field for QField {
    type Elem = QScalar;

    fn zero(&self) -> QScalar {
        QScalar::zero()
    }
    fn one(&self) -> QScalar {
        QScalar::one()
    }
    fn is_zero(&self, a: &QScalar) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &QScalar, b: &QScalar) -> QScalar {
        a.add(b)
    }
    fn sub(&self, a: &QScalar, b: &QScalar) -> QScalar {
        a.sub(b)
    }
    fn mul(&self, a: &QScalar, b: &QScalar) -> QScalar {
        a.mul(b)
    }
    fn neg(&self, a: &QScalar) -> QScalar {
        a.neg()
    }
    fn inv(&self, a: &QScalar) -> Option<QScalar> {
        a.inv()
    }
    fn from_q(&self, x: &QScalar) -> Result<QScalar, ScalarError> {
        Ok(x.clone())
    }
    fn is_exact(&self) -> bool {
        true
    }
    fn is_one(&self, a: &QScalar) -> bool {
        a.is_one()
    }
}

/// The prime field `F_p` reached by evaluating `q` at `q̂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModField {
    pub point: PrimePoint,
}

impl ModField {
    pub fn new(point: PrimePoint) -> Self {
        Self { point }
    }

    pub fn p(&self) -> u64 {
        self.point.p
    }
}

impl Field for ModField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        add_mod(*a, *b, self.point.p)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        sub_mod(*a, *b, self.point.p)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.point.p)
    }
    fn neg(&self, a: &u64) -> u64 {
        sub_mod(0, *a, self.point.p)
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        inv_mod(*a, self.point.p)
    }
    fn from_q(&self, x: &QScalar) -> Result<u64, ScalarError> {
        x.reduce(&self.point)
    }
    fn is_exact(&self) -> bool {
        false
    }
    fn from_int(&self, n: i64) -> u64 {
        let p = self.point.p as i128;
        (n as i128).rem_euclid(p) as u64
    }
}
