//! Membership in the two-sided ideal generated by homogeneous quadratic
//! relations.
//!
//! The ideal is graded, so membership is decided degree by degree: the
//! degree-`d` component is spanned by the products `u·r·v` with
//! `|u| + |v| = d − 2`. Two ways of building it are available:
//!
//! * **direct** — every `u·r·v` as a sparse vector over all words of length
//!   `d`; supports exact witness extraction;
//! * **reduced** — every `u·r·v` is first rewritten to normal form by the
//!   oriented degree-2 rules (see [`rewrite::Rewriter`]), and elimination runs
//!   over the normal words only. The rewriting is a projection whose kernel lies
//!   in the ideal, so no completeness of the rules is assumed.

pub mod rewrite;
pub mod witness;

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::qma::ncpoly::{NCPoly, Word};
use crate::qma::Algebra;
use crate::scalar::{Field, ModField, PrimePoint, QField, QScalar};
use crate::tensor::Echelon;

pub use rewrite::{words, Rewriter, WordOrder};
pub use witness::{Witness, WitnessTerm};

#[derive(Debug, Error)]
pub enum IdealError {
    #[error("relation of degree {0} is not homogeneous quadratic")]
    NotQuadratic(usize),
    #[error("rewriting exceeded the step budget of {0}")]
    StepBudget(u64),
    #[error("witness extraction needs an exact field")]
    NotExact,
}

/// How a degree component is assembled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Direct,
    Reduced,
}

/// Word count up to which [`Method::Direct`] is chosen automatically.
pub const DIRECT_LIMIT: usize = 4096;

/// One spanning product `left · relations[relation] · right`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Product {
    pub left: Word,
    pub relation: usize,
    pub right: Word,
}

/// Echelon basis of the degree-`d` part of the ideal.
pub struct DegreeComponent<E> {
    pub degree: usize,
    pub method: Method,
    /// Number of words of length `d`.
    pub words: usize,
    /// Number of spanning products generated.
    pub spanning: usize,
    /// Words that are not rewritten (all words for the direct method).
    pub normal_words: usize,
    basis: Echelon<E>,
    /// Basis row (by pivot) as a combination of `products`.
    combos: Option<HashMap<usize, BTreeMap<usize, E>>>,
    products: Vec<Product>,
}

impl<E: Clone + PartialEq> DegreeComponent<E> {
    /// Dimension of the degree-`d` part of the ideal.
    pub fn rank(&self) -> usize {
        self.words - self.normal_words + self.basis.rank()
    }

    /// Dimension of the degree-`d` part of the quotient algebra.
    pub fn quotient_dim(&self) -> usize {
        self.words - self.rank()
    }
}

/// Per-degree dimensions reported by `qch ideal --stats`.
#[derive(Clone, Debug, Serialize)]
pub struct DegreeStats {
    pub degree: usize,
    pub method: Method,
    pub words: usize,
    pub spanning: usize,
    pub normal_words: usize,
    pub rank: usize,
    pub quotient_dim: usize,
}

/// The ideal of a fixed relation list over a field `F`.
pub struct Ideal<F: Field> {
    f: F,
    /// Matrix size: generators are `M[a,b]`, ids `a·n + b`.
    n: usize,
    relations: Vec<NCPoly<F::Elem>>,
    independent: Vec<usize>,
    order: WordOrder,
    rewriter: Rewriter<F>,
    components: HashMap<(usize, Method, bool), DegreeComponent<F::Elem>>,
}

impl<F: Field> Ideal<F> {
    pub fn new(f: &F, n: usize, relations: Vec<NCPoly<F::Elem>>, order: WordOrder) -> Result<Self, IdealError> {
        let rewriter = Rewriter::new(f, &relations, order.clone())?;
        let mut basis = Echelon::new();
        let independent = (0..relations.len())
            .filter(|&i| basis.insert(f, relations[i].terms().map(|(w, c)| (order.column(w), c.clone())).collect()))
            .collect();
        Ok(Self { f: f.clone(), n, relations, independent, order, rewriter, components: HashMap::new() })
    }

    /// The ideal of the defining relations of `a`, with the standard word order.
    pub fn of_algebra(a: &Algebra<F>) -> Result<Self, IdealError> {
        let n = a.n();
        Self::new(a.f(), n, a.relations().to_vec(), WordOrder::for_pair(n, a.pair))
    }

    pub fn field(&self) -> &F {
        &self.f
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ngen(&self) -> usize {
        self.n * self.n
    }

    pub fn relations(&self) -> &[NCPoly<F::Elem>] {
        &self.relations
    }

    /// Indices of a maximal linearly independent subset of the relations.
    pub fn independent(&self) -> &[usize] {
        &self.independent
    }

    pub fn order(&self) -> &WordOrder {
        &self.order
    }

    pub fn rewriter(&mut self) -> &mut Rewriter<F> {
        &mut self.rewriter
    }

    pub fn auto_method(&self, d: usize) -> Method {
        if self.ngen().pow(d as u32) <= DIRECT_LIMIT {
            Method::Direct
        } else {
            Method::Reduced
        }
    }

    /// The degree-`d` component built with `method`; `track` keeps the
    /// combinations needed for witnesses (direct method only).
    pub fn span_degree(&mut self, d: usize, method: Method, track: bool) -> Result<&DegreeComponent<F::Elem>, IdealError> {
        let track = track && method == Method::Direct;
        let key = (d, method, track);
        if !self.components.contains_key(&key) {
            let c = self.build(d, method, track)?;
            self.components.insert(key, c);
        }
        Ok(&self.components[&key])
    }

    fn build(&mut self, d: usize, method: Method, track: bool) -> Result<DegreeComponent<F::Elem>, IdealError> {
        let f = self.f.clone();
        let ng = self.ngen();
        let total = ng.pow(d as u32);
        let mut comp = DegreeComponent {
            degree: d,
            method,
            words: total,
            spanning: 0,
            normal_words: total,
            basis: Echelon::new(),
            combos: track.then(HashMap::new),
            products: Vec::new(),
        };
        if d < 2 {
            return Ok(comp);
        }
        if method == Method::Reduced {
            comp.normal_words = words(ng, d).filter(|w| self.rewriter.is_normal(w)).count();
        }
        let rels: Vec<(usize, NCPoly<F::Elem>)> = match method {
            Method::Direct => self.independent.iter().map(|&i| (i, self.relations[i].clone())).collect(),
            Method::Reduced => {
                let one = f.one();
                self.rewriter.rules().iter().enumerate().map(|(i, r)| (i, r.tail.neg(&f).add(&f, &NCPoly::monomial(&f, one.clone(), r.lead.clone())))).collect()
            }
        };
        for a in 0..=d - 2 {
            let lefts: Vec<Word> = words(ng, a).collect();
            let rights: Vec<Word> = words(ng, d - 2 - a).collect();
            for (ri, r) in &rels {
                for u in &lefts {
                    for v in &rights {
                        comp.spanning += 1;
                        let mut x = NCPoly::zero();
                        for (w, c) in r.terms() {
                            let mut full = Vec::with_capacity(d);
                            full.extend_from_slice(u);
                            full.extend_from_slice(w);
                            full.extend_from_slice(v);
                            x.add_term(&f, full, c.clone());
                        }
                        if method == Method::Reduced {
                            x = self.rewriter.normal_order(&x)?;
                        }
                        let vec: Vec<(usize, F::Elem)> = x.terms().map(|(w, c)| (self.order.column(w), c.clone())).collect();
                        match comp.combos.as_mut() {
                            None => {
                                comp.basis.insert(&f, vec);
                            }
                            Some(combos) => {
                                let gi = comp.products.len();
                                comp.products.push(Product { left: u.clone(), relation: *ri, right: v.clone() });
                                let mut acc: BTreeMap<usize, F::Elem> = BTreeMap::new();
                                acc.insert(gi, f.one());
                                let rem = comp.basis.reduce_tracked(&f, vec, |piv, fac| {
                                    for (j, y) in &combos[&piv] {
                                        let e = acc.entry(*j).or_insert_with(|| f.zero());
                                        *e = f.sub(e, &f.mul(fac, y));
                                    }
                                });
                                if let Some((piv, inv)) = comp.basis.insert_reduced(&f, rem) {
                                    let row = acc.into_iter().filter(|(_, c)| !f.is_zero(c)).map(|(j, c)| (j, f.mul(&inv, &c))).collect();
                                    combos.insert(piv, row);
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(comp)
    }

    /// Whether the homogeneous `p` of degree `d` lies in the component, using
    /// the normal form first for the reduced method.
    fn component_contains(&mut self, p: &NCPoly<F::Elem>, d: usize, method: Method) -> Result<bool, IdealError> {
        let p = match method {
            Method::Direct => p.clone(),
            Method::Reduced => self.rewriter.normal_order(p)?,
        };
        if p.is_zero() {
            return Ok(true);
        }
        let order = self.order.clone();
        let f = self.f.clone();
        let comp = self.span_degree(d, method, false)?;
        Ok(comp.basis.reduce(&f, p.terms().map(|(w, c)| (order.column(w), c.clone())).collect()).is_empty())
    }

    /// Membership of an arbitrary `p`, decided grade by grade.
    pub fn contains(&mut self, p: &NCPoly<F::Elem>) -> Result<bool, IdealError> {
        self.contains_with(p, None)
    }

    /// Like [`Ideal::contains`] with a fixed method for degrees `≥ 2`.
    pub fn contains_with(&mut self, p: &NCPoly<F::Elem>, method: Option<Method>) -> Result<bool, IdealError> {
        for d in p.degrees() {
            let part = p.graded_part(d);
            if d < 2 {
                return Ok(false);
            }
            let m = method.unwrap_or_else(|| self.auto_method(d));
            if !self.component_contains(&part, d, m)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The normal form of `p` under the oriented rules.
    pub fn normal_order(&mut self, p: &NCPoly<F::Elem>) -> Result<NCPoly<F::Elem>, IdealError> {
        self.rewriter.normal_order(p)
    }

    pub fn stats(&mut self, d: usize, method: Option<Method>) -> Result<DegreeStats, IdealError> {
        let m = method.unwrap_or_else(|| self.auto_method(d));
        let c = self.span_degree(d, m, false)?;
        Ok(DegreeStats {
            degree: d,
            method: m,
            words: c.words,
            spanning: c.spanning,
            normal_words: c.normal_words,
            rank: c.rank(),
            quotient_dim: c.quotient_dim(),
        })
    }
}

impl Ideal<QField> {
    /// An exact witness for `p`, or `None` if `p` is not a member.
    pub fn witness(&mut self, p: &NCPoly<QScalar>) -> Result<Option<Witness>, IdealError> {
        let f = QField;
        let mut terms = Vec::new();
        for d in p.degrees() {
            let part = p.graded_part(d);
            if d < 2 {
                return Ok(None);
            }
            let order = self.order.clone();
            let comp = self.span_degree(d, Method::Direct, true)?;
            let combos = comp.combos.as_ref().expect("tracked");
            let mut acc: BTreeMap<usize, QScalar> = BTreeMap::new();
            let rem = comp.basis.reduce_tracked(&f, part.terms().map(|(w, c)| (order.column(w), c.clone())).collect(), |piv, fac| {
                for (j, y) in &combos[&piv] {
                    let e = acc.entry(*j).or_insert_with(QScalar::zero);
                    *e = e.add(&fac.mul(y));
                }
            });
            if !rem.is_empty() {
                return Ok(None);
            }
            terms.extend(acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(j, coeff)| {
                let g = &comp.products[j];
                WitnessTerm { coeff, left: g.left.clone(), relation: g.relation, right: g.right.clone() }
            }));
        }
        Ok(Some(Witness { n: self.n, terms }))
    }
}

/// Outcome of a membership test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    Member,
    NonMember,
    ProbableMember,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub status: Membership,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub primes: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
}

impl Certificate {
    pub fn is_member(&self) -> bool {
        self.status != Membership::NonMember
    }

    fn exact(member: bool, witness: Option<Witness>) -> Self {
        Self { status: if member { Membership::Member } else { Membership::NonMember }, primes: Vec::new(), failure_bound: None, witness, residual: None }
    }
}

/// Declared cap on the `q`-degree of a single coefficient after clearing
/// denominators, per unit of polynomial degree; used for the failure bound.
pub const Q_DEGREE_PER_LETTER: u64 = 64;

/// Failure bound for a modular membership claim in degree `d`: a false
/// positive needs a minor of size at most `words + 1` to vanish at `q̂`.
pub fn membership_failure_bound(ngen: usize, d: usize, points: &[PrimePoint]) -> f64 {
    let minor = (ngen as u64).saturating_pow(d as u32).saturating_add(1);
    crate::rmatrix::failure_bound(minor.saturating_mul(Q_DEGREE_PER_LETTER * d as u64), points)
}

/// Exact membership, with a verified witness when requested.
pub fn certify_exact(ideal: &mut Ideal<QField>, p: &NCPoly<QScalar>, want_witness: bool) -> Result<Certificate, IdealError> {
    if p.is_zero() {
        return Ok(Certificate::exact(true, want_witness.then(|| Witness { n: ideal.n(), terms: Vec::new() })));
    }
    if !want_witness {
        let member = ideal.contains(p)?;
        let mut c = Certificate::exact(member, None);
        if !member {
            c.residual = Some(residual_text(ideal, p)?);
        }
        return Ok(c);
    }
    match ideal.witness(p)? {
        Some(w) => {
            if !w.verify(p, ideal.relations()) {
                let mut c = Certificate::exact(false, None);
                c.residual = Some("witness does not reconstruct the polynomial".into());
                return Ok(c);
            }
            Ok(Certificate::exact(true, Some(w)))
        }
        None => {
            let mut c = Certificate::exact(false, None);
            c.residual = Some(residual_text(ideal, p)?);
            Ok(c)
        }
    }
}

fn residual_text<F: Field>(ideal: &mut Ideal<F>, p: &NCPoly<F::Elem>) -> Result<String, IdealError> {
    let n = ideal.n();
    let nf = ideal.normal_order(p)?;
    let shown = if nf.len() > 6 { format!("{} terms", nf.len()) } else { nf.display(n).to_string() };
    Ok(format!("normal form {shown}"))
}

/// Membership of one polynomial reduced at several primes; `per_prime[j]` is
/// tested in `ideals[j]`.
pub fn certify_modular(ideals: &mut [Ideal<ModField>], per_prime: &[NCPoly<u64>], points: &[PrimePoint]) -> Result<Certificate, IdealError> {
    let mut verdicts = Vec::with_capacity(ideals.len());
    for (ideal, p) in ideals.iter_mut().zip(per_prime) {
        verdicts.push(ideal.contains(p)?);
    }
    let primes: Vec<u64> = points.iter().map(|p| p.p).collect();
    let d = per_prime.iter().map(NCPoly::degree).max().unwrap_or(0);
    let ngen = ideals.first().map_or(1, Ideal::ngen);
    if verdicts.iter().all(|&v| v) {
        let bound = membership_failure_bound(ngen, d, points);
        return Ok(Certificate { status: Membership::ProbableMember, primes, failure_bound: Some(bound), witness: None, residual: None });
    }
    let failing: Vec<String> = verdicts.iter().zip(points).filter(|(v, _)| !**v).map(|(_, p)| p.p.to_string()).collect();
    let residual = if verdicts.iter().any(|&v| v) {
        format!("primes disagree; non-member at {}", failing.join(", "))
    } else {
        let j = 0;
        format!("non-member at every prime; {}", residual_text(&mut ideals[j], &per_prime[j])?)
    };
    Ok(Certificate { status: Membership::NonMember, primes, failure_bound: None, witness: None, residual: Some(residual) })
}
