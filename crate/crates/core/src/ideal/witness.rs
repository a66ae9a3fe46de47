//! Exact membership witnesses `p = Σ c · u·r·v`.

use serde::ser::{Serialize, SerializeTuple, Serializer};

use crate::qma::ncpoly::{word_text, NCPoly, Word};
use crate::scalar::{QField, QScalar};

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessTerm {
    pub coeff: QScalar,
    pub left: Word,
    pub relation: usize,
    pub right: Word,
}

/// A combination of two-sided multiples of the defining relations.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Witness {
    pub n: usize,
    pub terms: Vec<WitnessTerm>,
}

impl Witness {
    /// `Σ c · left · relations[id] · right`.
    pub fn expand(&self, relations: &[NCPoly<QScalar>]) -> NCPoly<QScalar> {
        let f = QField;
        let mut out = NCPoly::zero();
        for t in &self.terms {
            let l = NCPoly::monomial(&f, QScalar::one(), t.left.clone());
            let r = NCPoly::monomial(&f, QScalar::one(), t.right.clone());
            out.add_scaled(&f, &t.coeff, &l.mul(&f, &relations[t.relation]).mul(&f, &r));
        }
        out
    }

    /// Whether the combination reproduces `p` exactly.
    pub fn verify(&self, p: &NCPoly<QScalar>, relations: &[NCPoly<QScalar>]) -> bool {
        self.expand(relations).sub(&QField, p).is_zero()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

struct TermView<'a>(&'a WitnessTerm, usize);

impl Serialize for TermView<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(4)?;
        t.serialize_element(&self.0.coeff.to_string())?;
        t.serialize_element(&word_text(&self.0.left, self.1))?;
        t.serialize_element(&self.0.relation)?;
        t.serialize_element(&word_text(&self.0.right, self.1))?;
        t.end()
    }
}

/// Serialized as a list of `[coefficient, left word, relation id, right word]`.
impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.terms.iter().map(|t| TermView(t, self.n)))
    }
}
