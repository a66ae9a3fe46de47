//! Word order and the oriented degree-2 rewriting system.

use std::collections::HashMap;

use crate::qma::ncpoly::{NCPoly, Word};
use crate::scalar::Field;
use crate::tensor::Echelon;

use super::IdealError;

/// Graded lexicographic order on words under a fixed generator ranking.
#[derive(Clone, Debug)]
pub struct WordOrder {
    rank: Vec<u8>,
}

impl WordOrder {
    /// `rank[g]` is the position of generator `g`; must be a permutation.
    pub fn new(rank: Vec<u8>) -> Self {
        let mut seen = vec![false; rank.len()];
        for &r in &rank {
            assert!(!std::mem::replace(&mut seen[r as usize], true), "generator ranking is not a permutation");
        }
        Self { rank }
    }

    pub fn by_id(ngen: usize) -> Self {
        Self::new((0..ngen as u8).collect())
    }

    /// The appendix order for `N = 4`, generator-id order otherwise.
    pub fn standard(n: usize) -> Self {
        if n == 4 {
            Self::new(crate::qma::appendix::generator_order())
        } else {
            Self::by_id(n * n)
        }
    }

    /// The order used for a pair. The appendix order is tailored to the RTT
    /// relations; for the RE algebra it leaves 1044 normal words in degree 3
    /// against a 672-dimensional quotient, while generator-id order is exact
    /// there and in degree 4.
    pub fn for_pair(n: usize, pair: crate::qma::Pair) -> Self {
        match pair {
            crate::qma::Pair::Rtt | crate::qma::Pair::Custom => Self::standard(n),
            crate::qma::Pair::Re => Self::by_id(n * n),
        }
    }

    pub fn ngen(&self) -> usize {
        self.rank.len()
    }

    /// Position of `w` among words of its length, increasing in the order.
    pub fn index(&self, w: &[u8]) -> usize {
        w.iter().fold(0, |acc, &g| acc * self.ngen() + self.rank[g as usize] as usize)
    }

    /// Column of `w` among words of length `d`: the largest word gets column 0,
    /// so that echelon pivots are leading words.
    pub fn column(&self, w: &[u8]) -> usize {
        self.ngen().pow(w.len() as u32) - 1 - self.index(w)
    }

    /// Inverse of [`WordOrder::column`].
    pub fn word_at(&self, d: usize, col: usize) -> Word {
        let ng = self.ngen();
        let mut idx = ng.pow(d as u32) - 1 - col;
        let mut by_rank = vec![0u8; ng];
        for (g, &r) in self.rank.iter().enumerate() {
            by_rank[r as usize] = g as u8;
        }
        let mut w = vec![0u8; d];
        for slot in w.iter_mut().rev() {
            *slot = by_rank[idx % ng];
            idx /= ng;
        }
        w
    }

    pub fn less(&self, a: &[u8], b: &[u8]) -> bool {
        (a.len(), self.index(a)) < (b.len(), self.index(b))
    }
}

/// All words of length `d` over `ngen` generators, in generator-id order.
pub fn words(ngen: usize, d: usize) -> impl Iterator<Item = Word> {
    (0..ngen.pow(d as u32)).map(move |mut i| {
        let mut w = vec![0u8; d];
        for slot in w.iter_mut().rev() {
            *slot = (i % ngen) as u8;
            i /= ngen;
        }
        w
    })
}

/// One oriented rule `lead → tail`.
#[derive(Clone, Debug)]
pub struct Rule<E> {
    pub lead: Word,
    pub tail: NCPoly<E>,
}

/// Rewriting by the echelon form of the degree-2 relations, each rule sending the
/// largest word of a basis relation to a combination of smaller words.
///
/// The normal form is computed right to left, `NF(a·w) = NF(a·NF(w))`, and
/// memoized per word. It is a linear projection onto the span of words that
/// contain no leading pair, and `w − NF(w)` lies in the ideal.
pub struct Rewriter<F: Field> {
    f: F,
    order: WordOrder,
    rules: HashMap<[u8; 2], usize>,
    rule_list: Vec<Rule<F::Elem>>,
    memo: HashMap<Word, NCPoly<F::Elem>>,
    steps: u64,
    budget: u64,
}

impl<F: Field> Rewriter<F> {
    pub const DEFAULT_BUDGET: u64 = 200_000_000;

    pub fn new(f: &F, relations: &[NCPoly<F::Elem>], order: WordOrder) -> Result<Self, IdealError> {
        let mut basis = Echelon::new();
        for r in relations {
            if !r.is_zero() && !(r.is_homogeneous() && r.degree() == 2) {
                return Err(IdealError::NotQuadratic(r.degree()));
            }
            basis.insert(f, r.terms().map(|(w, c)| (order.column(w), c.clone())).collect());
        }
        let mut rules = HashMap::new();
        let mut rule_list = Vec::new();
        for piv in basis.pivot_columns().collect::<Vec<_>>() {
            let row = basis.pivot_row(piv).expect("pivot");
            let lead = order.word_at(2, piv);
            let mut tail = NCPoly::zero();
            for (c, x) in row.iter().skip(1) {
                tail.add_term(f, order.word_at(2, *c), f.neg(x));
            }
            rules.insert([lead[0], lead[1]], rule_list.len());
            rule_list.push(Rule { lead, tail });
        }
        Ok(Self { f: f.clone(), order, rules, rule_list, memo: HashMap::new(), steps: 0, budget: Self::DEFAULT_BUDGET })
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn rules(&self) -> &[Rule<F::Elem>] {
        &self.rule_list
    }

    pub fn order(&self) -> &WordOrder {
        &self.order
    }

    /// Whether `w` avoids every leading pair.
    pub fn is_normal(&self, w: &[u8]) -> bool {
        w.windows(2).all(|p| !self.rules.contains_key(&[p[0], p[1]]))
    }

    pub fn normal_word(&mut self, w: &[u8]) -> Result<NCPoly<F::Elem>, IdealError> {
        if w.len() < 2 || self.is_normal(w) {
            return Ok(NCPoly::monomial(&self.f, self.f.one(), w.to_vec()));
        }
        if let Some(p) = self.memo.get(w) {
            return Ok(p.clone());
        }
        let f = self.f.clone();
        let rest = self.normal_word(&w[1..])?;
        let a = w[0];
        let mut out = NCPoly::zero();
        for (t, c) in rest.into_terms() {
            self.steps += 1;
            if self.steps > self.budget {
                return Err(IdealError::StepBudget(self.budget));
            }
            match self.rules.get(&[a, t[0]]) {
                None => {
                    let mut at = Vec::with_capacity(t.len() + 1);
                    at.push(a);
                    at.extend_from_slice(&t);
                    out.add_term(&f, at, c);
                }
                Some(&ri) => {
                    let tail: Vec<(Word, F::Elem)> = self.rule_list[ri].tail.terms().map(|(w, x)| (w.clone(), x.clone())).collect();
                    for (yz, x) in tail {
                        let mut u = yz;
                        u.extend_from_slice(&t[1..]);
                        let nf = self.normal_word(&u)?;
                        out.add_scaled(&f, &f.mul(&c, &x), &nf);
                    }
                }
            }
        }
        self.memo.insert(w.to_vec(), out.clone());
        Ok(out)
    }

    /// The normal form of `p`.
    pub fn normal_order(&mut self, p: &NCPoly<F::Elem>) -> Result<NCPoly<F::Elem>, IdealError> {
        let f = self.f.clone();
        let mut out = NCPoly::zero();
        for (w, c) in p.terms() {
            let nf = self.normal_word(w)?;
            out.add_scaled(&f, c, &nf);
        }
        Ok(out)
    }

    /// Number of memoized non-normal words.
    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }
}
