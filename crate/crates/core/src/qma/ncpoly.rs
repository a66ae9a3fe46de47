//! Noncommutative polynomials in the generators `M[a,b]` and operators whose
//! coefficients are such polynomials.

use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::{Field, QScalar};
use crate::tensor::Operator;

/// A word in the generators; generator `M[a,b]` (0-based) has id `a·N + b`.
pub type Word = Vec<u8>;

/// Formal sum of words with nonzero coefficients. Words are kept verbatim.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NCPoly<E> {
    terms: BTreeMap<Word, E>,
}

impl<E> Default for NCPoly<E> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<E: Clone + PartialEq> NCPoly<E> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant<F: Field<Elem = E>>(f: &F, c: E) -> Self {
        Self::monomial(f, c, Word::new())
    }

    pub fn one<F: Field<Elem = E>>(f: &F) -> Self {
        Self::constant(f, f.one())
    }

    pub fn monomial<F: Field<Elem = E>>(f: &F, c: E, w: Word) -> Self {
        let mut p = Self::zero();
        if !f.is_zero(&c) {
            p.terms.insert(w, c);
        }
        p
    }

    pub fn generator<F: Field<Elem = E>>(f: &F, id: u8) -> Self {
        Self::monomial(f, f.one(), vec![id])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &E)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Word, E)> {
        self.terms.into_iter()
    }

    pub fn coeff<F: Field<Elem = E>>(&self, f: &F, w: &[u8]) -> E {
        self.terms.get(w).cloned().unwrap_or_else(|| f.zero())
    }

    /// Largest word length (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Vec::len);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// Homogeneous component of degree `d`.
    pub fn graded_part(&self, d: usize) -> Self {
        Self { terms: self.terms.iter().filter(|(w, _)| w.len() == d).map(|(w, c)| (w.clone(), c.clone())).collect() }
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut ds: Vec<usize> = self.terms.keys().map(Vec::len).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    pub fn add_term<F: Field<Elem = E>>(&mut self, f: &F, w: Word, c: E) {
        if f.is_zero(&c) {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = f.add(e.get(), &c);
                if f.is_zero(&s) {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add_assign<F: Field<Elem = E>>(&mut self, f: &F, o: &Self) {
        for (w, c) in &o.terms {
            self.add_term(f, w.clone(), c.clone());
        }
    }

    /// `self += c · o`.
    pub fn add_scaled<F: Field<Elem = E>>(&mut self, f: &F, c: &E, o: &Self) {
        if f.is_zero(c) {
            return;
        }
        for (w, x) in &o.terms {
            self.add_term(f, w.clone(), f.mul(c, x));
        }
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_assign(f, o);
        r
    }

    pub fn sub<F: Field<Elem = E>>(&self, f: &F, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_scaled(f, &f.neg(&f.one()), o);
        r
    }

    pub fn neg<F: Field<Elem = E>>(&self, f: &F) -> Self {
        Self { terms: self.terms.iter().map(|(w, c)| (w.clone(), f.neg(c))).collect() }
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, c: &E) -> Self {
        if f.is_zero(c) {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(w, x)| (w.clone(), f.mul(c, x))).collect() }
    }

    /// Noncommutative product: words concatenate in order.
    pub fn mul<F: Field<Elem = E>>(&self, f: &F, o: &Self) -> Self {
        let mut r = Self::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                let mut w = Word::with_capacity(w1.len() + w2.len());
                w.extend_from_slice(w1);
                w.extend_from_slice(w2);
                r.add_term(f, w, f.mul(c1, c2));
            }
        }
        r
    }

    pub fn pow<F: Field<Elem = E>>(&self, f: &F, n: usize) -> Self {
        (0..n).fold(Self::one(f), |acc, _| acc.mul(f, self))
    }

    /// `[a, b] = ab - ba`.
    pub fn commutator<F: Field<Elem = E>>(&self, f: &F, o: &Self) -> Self {
        self.mul(f, o).sub(f, &o.mul(f, self))
    }

    /// Maps coefficients into another field.
    pub fn convert<G: Field>(&self, g: &G, map: impl Fn(&E) -> G::Elem) -> NCPoly<G::Elem> {
        let mut r = NCPoly::zero();
        for (w, c) in &self.terms {
            r.add_term(g, w.clone(), map(c));
        }
        r
    }

    /// Renames generators.
    pub fn relabel<F: Field<Elem = E>>(&self, f: &F, map: impl Fn(u8) -> u8) -> Self {
        let mut r = Self::zero();
        for (w, c) in &self.terms {
            r.add_term(f, w.iter().map(|&x| map(x)).collect(), c.clone());
        }
        r
    }

    /// Text form `coeff * M[a,b] M[c,d] + …` with 1-based indices.
    pub fn display(&self, n: usize) -> NCPolyDisplay<'_, E> {
        NCPolyDisplay { p: self, n }
    }
}

/// Dimension of the linear span of `polys` (as vectors indexed by word).
pub fn span_rank<F: Field>(f: &F, polys: &[NCPoly<F::Elem>]) -> usize {
    let mut index: BTreeMap<&Word, usize> = BTreeMap::new();
    for p in polys {
        for (w, _) in p.terms() {
            let next = index.len();
            index.entry(w).or_insert(next);
        }
    }
    let vectors = polys.iter().map(|p| p.terms().map(|(w, c)| (index[w], c.clone())).collect::<Vec<_>>());
    crate::tensor::sparse_rank(f, vectors)
}

/// Whether `p` lies in the linear span of `family`.
pub fn in_span<F: Field>(f: &F, p: &NCPoly<F::Elem>, family: &[NCPoly<F::Elem>]) -> bool {
    let mut with: Vec<_> = family.to_vec();
    with.push(p.clone());
    span_rank(f, &with) == span_rank(f, family)
}

/// Whether two families span the same linear subspace.
pub fn same_span<F: Field>(f: &F, a: &[NCPoly<F::Elem>], b: &[NCPoly<F::Elem>]) -> bool {
    let both: Vec<_> = a.iter().chain(b).cloned().collect();
    let r = span_rank(f, &both);
    span_rank(f, a) == r && span_rank(f, b) == r
}

pub struct NCPolyDisplay<'a, E> {
    p: &'a NCPoly<E>,
    n: usize,
}

pub fn word_text(w: &[u8], n: usize) -> String {
    w.iter().map(|&g| format!("M[{},{}]", g as usize / n + 1, g as usize % n + 1)).collect::<Vec<_>>().join(" ")
}

impl<E: fmt::Display> fmt::Display for NCPolyDisplay<'_, E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.p.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let cs = c.to_string();
            let cs = if cs.contains(' ') || cs.contains('/') { format!("({cs})") } else { cs };
            if w.is_empty() {
                write!(f, "{cs}")?;
            } else {
                write!(f, "{cs} * {}", word_text(w, self.n))?;
            }
        }
        Ok(())
    }
}

/// Parses the text form written by [`NCPoly::display`] (exact coefficients).
pub fn parse_ncpoly(s: &str, n: usize) -> Result<NCPoly<QScalar>, String> {
    let f = crate::scalar::QField;
    let s = s.trim();
    let mut p = NCPoly::zero();
    if s == "0" {
        return Ok(p);
    }
    let mut depth = 0i32;
    let mut parts = Vec::new();
    let mut start = 0;
    let b = s.as_bytes();
    let mut i = 0;
    while i < b.len() {
        match b[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' if depth == 0 && i > 0 && b[i - 1] == b' ' && b.get(i + 1) == Some(&b' ') => {
                parts.push(&s[start..i - 1]);
                start = i + 2;
            }
            _ => {}
        }
        i += 1;
    }
    parts.push(&s[start..]);
    for part in parts {
        let (coef, word) = match part.find(" * M[") {
            Some(pos) => (&part[..pos], &part[pos + 3..]),
            None if part.trim_start().starts_with("M[") => ("1", part.trim()),
            None => (part, ""),
        };
        let c: QScalar = coef.trim().parse().map_err(|e| format!("{e}"))?;
        let mut w = Word::new();
        for g in word.split_whitespace() {
            let inner = g.strip_prefix("M[").and_then(|x| x.strip_suffix(']')).ok_or(format!("bad generator {g}"))?;
            let (a, bb) = inner.split_once(',').ok_or(format!("bad generator {g}"))?;
            let a: usize = a.parse().map_err(|_| format!("bad index in {g}"))?;
            let bb: usize = bb.parse().map_err(|_| format!("bad index in {g}"))?;
            if a == 0 || bb == 0 || a > n || bb > n {
                return Err(format!("index out of range in {g}"));
            }
            w.push(((a - 1) * n + bb - 1) as u8);
        }
        p.add_term(&f, w, c);
    }
    Ok(p)
}

/// Square array of [`NCPoly`] indexed by flattened multi-indices of `V^{⊗arity}`.
/// Arity 1 is a quantum matrix; arity 0 a single polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct NCMatrix<E> {
    n: usize,
    arity: usize,
    entries: Vec<NCPoly<E>>,
}

pub type QMatrix<E> = NCMatrix<E>;

impl<E: Clone + PartialEq> NCMatrix<E> {
    pub fn zero(n: usize, arity: usize) -> Self {
        let dim = n.pow(arity as u32);
        Self { n, arity, entries: vec![NCPoly::zero(); dim * dim] }
    }

    pub fn base_dim(&self) -> usize {
        self.n
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        self.n.pow(self.arity as u32)
    }

    pub fn get(&self, r: usize, c: usize) -> &NCPoly<E> {
        &self.entries[r * self.dim() + c]
    }

    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut NCPoly<E> {
        let d = self.dim();
        &mut self.entries[r * d + c]
    }

    pub fn entries(&self) -> &[NCPoly<E>] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(NCPoly::is_zero)
    }

    /// `c · I`.
    pub fn identity_times<F: Field<Elem = E>>(_f: &F, n: usize, arity: usize, c: &NCPoly<E>) -> Self {
        let mut m = Self::zero(n, arity);
        for i in 0..m.dim() {
            *m.get_mut(i, i) = c.clone();
        }
        m
    }

    pub fn identity<F: Field<Elem = E>>(f: &F, n: usize, arity: usize) -> Self {
        Self::identity_times(f, n, arity, &NCPoly::one(f))
    }

    /// The matrix of generators `M[a][b]`.
    pub fn generators<F: Field<Elem = E>>(f: &F, n: usize) -> Self {
        let mut m = Self::zero(n, 1);
        for a in 0..n {
            for b in 0..n {
                *m.get_mut(a, b) = NCPoly::generator(f, (a * n + b) as u8);
            }
        }
        m
    }

    /// `X ⊗ I^{⊗(target-arity)}`.
    pub fn embed_first(&self, target: usize) -> Self {
        let rest = self.n.pow((target - self.arity) as u32);
        let d = self.dim();
        let mut m = Self::zero(self.n, target);
        for r in 0..d {
            for c in 0..d {
                let e = self.get(r, c);
                if e.is_zero() {
                    continue;
                }
                for t in 0..rest {
                    *m.get_mut(r * rest + t, c * rest + t) = e.clone();
                }
            }
        }
        m
    }

    fn check(&self, o: &Self) {
        assert!(self.n == o.n && self.arity == o.arity, "NCMatrix shape mismatch");
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, o: &Self) -> Self {
        self.check(o);
        Self { n: self.n, arity: self.arity, entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a.add(f, b)).collect() }
    }

    pub fn sub<F: Field<Elem = E>>(&self, f: &F, o: &Self) -> Self {
        self.check(o);
        Self { n: self.n, arity: self.arity, entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a.sub(f, b)).collect() }
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, c: &E) -> Self {
        Self { n: self.n, arity: self.arity, entries: self.entries.iter().map(|a| a.scale(f, c)).collect() }
    }

    /// Matrix product with noncommutative entries, `(XY)[r][c] = Σ_m X[r][m] Y[m][c]`.
    pub fn mul<F: Field<Elem = E>>(&self, f: &F, o: &Self) -> Self {
        self.check(o);
        let d = self.dim();
        let mut m = Self::zero(self.n, self.arity);
        for r in 0..d {
            for k in 0..d {
                let x = self.get(r, k);
                if x.is_zero() {
                    continue;
                }
                for c in 0..d {
                    let y = o.get(k, c);
                    if !y.is_zero() {
                        let p = x.mul(f, y);
                        m.get_mut(r, c).add_assign(f, &p);
                    }
                }
            }
        }
        m
    }

    /// `S · X` for a scalar operator `S`.
    pub fn left_scalar<F: Field<Elem = E>>(&self, f: &F, s: &Operator<E>) -> Self {
        assert_eq!(s.dim(), self.dim());
        let d = self.dim();
        let mut m = Self::zero(self.n, self.arity);
        for (r, k, v) in s.entries() {
            for c in 0..d {
                let x = self.get(k, c);
                if !x.is_zero() {
                    m.get_mut(r, c).add_scaled(f, v, x);
                }
            }
        }
        m
    }

    /// `X · S` for a scalar operator `S`.
    pub fn right_scalar<F: Field<Elem = E>>(&self, f: &F, s: &Operator<E>) -> Self {
        assert_eq!(s.dim(), self.dim());
        let d = self.dim();
        let mut m = Self::zero(self.n, self.arity);
        for (k, c, v) in s.entries() {
            for r in 0..d {
                let x = self.get(r, k);
                if !x.is_zero() {
                    m.get_mut(r, c).add_scaled(f, v, x);
                }
            }
        }
        m
    }

    /// Scalar operator multiplied entrywise by a polynomial: `S ⊗ c`.
    pub fn from_scalar_times<F: Field<Elem = E>>(f: &F, s: &Operator<E>, c: &NCPoly<E>) -> Self {
        let mut m = Self::zero(s.base_dim(), s.arity());
        for (r, k, v) in s.entries() {
            *m.get_mut(r, k) = c.scale(f, v);
        }
        m
    }

    /// Entrywise `X[r][c] · p` (right multiplication by a polynomial).
    pub fn right_poly<F: Field<Elem = E>>(&self, f: &F, p: &NCPoly<E>) -> Self {
        Self { n: self.n, arity: self.arity, entries: self.entries.iter().map(|a| a.mul(f, p)).collect() }
    }

    /// Entrywise `p · X[r][c]`.
    pub fn left_poly<F: Field<Elem = E>>(&self, f: &F, p: &NCPoly<E>) -> Self {
        Self { n: self.n, arity: self.arity, entries: self.entries.iter().map(|a| p.mul(f, a)).collect() }
    }

    /// Trace over factor `i` (1-based).
    pub fn partial_trace<F: Field<Elem = E>>(&self, f: &F, i: usize) -> Self {
        assert!(i >= 1 && i <= self.arity);
        let n = self.n;
        let right = n.pow((self.arity - i) as u32);
        let d = self.dim();
        let mut m = Self::zero(n, self.arity - 1);
        for r in 0..d {
            let (lr, ar, tr) = (r / right / n, (r / right) % n, r % right);
            for c in 0..d {
                let (lc, ac, tc) = (c / right / n, (c / right) % n, c % right);
                if ar != ac {
                    continue;
                }
                let e = self.get(r, c);
                if !e.is_zero() {
                    m.get_mut(lr * right + tr, lc * right + tc).add_assign(f, e);
                }
            }
        }
        m
    }

    /// R-trace in factor `i`: `Tr_i(D_i X)`.
    pub fn r_trace<F: Field<Elem = E>>(&self, f: &F, d: &Operator<E>, i: usize) -> Self {
        let di = d.embed(i, self.arity).expect("position");
        self.left_scalar(f, &di).partial_trace(f, i)
    }

    pub fn r_trace_many<F: Field<Elem = E>>(&self, f: &F, d: &Operator<E>, factors: &[usize]) -> Self {
        let mut fs = factors.to_vec();
        fs.sort_unstable_by(|a, b| b.cmp(a));
        fs.into_iter().fold(self.clone(), |x, i| x.r_trace(f, d, i))
    }

    /// The single entry of an arity-0 array.
    pub fn into_scalar(self) -> NCPoly<E> {
        assert_eq!(self.arity, 0);
        self.entries.into_iter().next().unwrap()
    }

    /// Applies a linear map on matrix entries given as an `N²×N²` coefficient
    /// operator: `Y[a][b] = Σ_{c,d} map[(a,b)][(c,d)] X[c][d]`.
    pub fn apply_map<F: Field<Elem = E>>(&self, f: &F, map: &Operator<E>) -> Self {
        assert_eq!(self.arity, 1);
        let n = self.n;
        let mut m = Self::zero(n, 1);
        for (ab, cd, v) in map.entries() {
            let x = &self.entries[cd];
            if !x.is_zero() {
                m.entries[ab].add_scaled(f, v, x);
            }
        }
        m
    }

    pub fn map_entries(&self, g: impl Fn(&NCPoly<E>) -> NCPoly<E>) -> Self {
        Self { n: self.n, arity: self.arity, entries: self.entries.iter().map(g).collect() }
    }

    /// First nonzero entry as `(row, col, poly)`.
    pub fn first_nonzero(&self) -> Option<(usize, usize, &NCPoly<E>)> {
        let d = self.dim();
        self.entries.iter().enumerate().find(|(_, p)| !p.is_zero()).map(|(i, p)| (i / d, i % d, p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::QField;

    #[test]
    fn product_keeps_word_order() {
        let f = QField;
        let a = NCPoly::generator(&f, 0);
        let b = NCPoly::generator(&f, 3);
        let ab = a.mul(&f, &b);
        let ba = b.mul(&f, &a);
        assert_ne!(ab, ba);
        assert!(ab.commutator(&f, &ab).is_zero());
        assert_eq!(ab.degree(), 2);
    }

    #[test]
    fn text_roundtrip() {
        let f = QField;
        let mut p = NCPoly::zero();
        p.add_term(&f, vec![0, 3], QScalar::q_pow(-6));
        p.add_term(&f, vec![1, 2], QScalar::q_pow(-4).neg());
        p.add_term(&f, vec![2], QScalar::q().sub(&QScalar::q_pow(-1)));
        let s = p.display(2).to_string();
        assert_eq!(parse_ncpoly(&s, 2).unwrap(), p, "{s}");
    }

    #[test]
    fn trace_of_embedded_identity() {
        let f = QField;
        let m = NCMatrix::generators(&f, 2);
        let m12 = m.embed_first(2);
        let t = m12.partial_trace(&f, 2);
        assert_eq!(t, m.scale(&f, &QScalar::from_int(2)));
    }
}
