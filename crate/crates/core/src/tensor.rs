//! Sparse linear operators on `V^{⊗n}` with coefficients in a [`Field`].
//!
//! Rows and columns are flattened multi-indices `(a_1, …, a_n)`, 0-based,
//! with `a_1` most significant. Composition is the ordinary matrix product,
//! `(XY)[r][c] = Σ_m X[r][m] Y[m][c]`; the matrix unit `E_ij` has its single
//! one in row `i`, column `j`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{Field, ModField, PrimePoint, QField, QScalar, ScalarError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TensorError {
    #[error("factor position {pos} out of range for arity {arity}")]
    Position { pos: usize, arity: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("operator is singular")]
    Singular,
    #[error("not skew invertible; kernel witness {witness:?}")]
    NotSkewInvertible { witness: Vec<(usize, String)> },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("malformed dump: {0}")]
    Dump(String),
}

/// Operator on `(F^N)^{⊗arity}`; each row keeps its nonzero entries sorted by column.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator<E> {
    n: usize,
    arity: usize,
    rows: Vec<Vec<(usize, E)>>,
}

pub type QOperator = Operator<QScalar>;

fn pow(n: usize, e: usize) -> usize {
    n.pow(e as u32)
}

impl<E: Clone + PartialEq> Operator<E> {
    pub fn zero(n: usize, arity: usize) -> Self {
        Self { n, arity, rows: vec![Vec::new(); pow(n, arity)] }
    }

    pub fn identity<F: Field<Elem = E>>(f: &F, n: usize, arity: usize) -> Self {
        let dim = pow(n, arity);
        Self { n, arity, rows: (0..dim).map(|i| vec![(i, f.one())]).collect() }
    }

    /// Sums coefficients given as `(row, col, value)` triples.
    pub fn from_entries<F, I>(f: &F, n: usize, arity: usize, entries: I) -> Self
    where
        F: Field<Elem = E>,
        I: IntoIterator<Item = (usize, usize, E)>,
    {
        let dim = pow(n, arity);
        let mut rows: Vec<Vec<(usize, E)>> = vec![Vec::new(); dim];
        for (r, c, v) in entries {
            assert!(r < dim && c < dim, "index out of range");
            rows[r].push((c, v));
        }
        for row in &mut rows {
            *row = Self::merge_row(f, std::mem::take(row));
        }
        Self { n, arity, rows }
    }

    fn merge_row<F: Field<Elem = E>>(f: &F, mut row: Vec<(usize, E)>) -> Vec<(usize, E)> {
        row.sort_by_key(|e| e.0);
        let mut out: Vec<(usize, E)> = Vec::with_capacity(row.len());
        for (c, v) in row {
            match out.last_mut() {
                Some((lc, lv)) if *lc == c => *lv = f.add(lv, &v),
                _ => out.push((c, v)),
            }
        }
        out.retain(|(_, v)| !f.is_zero(v));
        out
    }

    /// Diagonal operator of arity 1.
    pub fn diagonal<F: Field<Elem = E>>(f: &F, diag: Vec<E>) -> Self {
        let n = diag.len();
        Self::from_entries(f, n, 1, diag.into_iter().enumerate().map(|(i, v)| (i, i, v)))
    }

    /// The flip `P` on `V ⊗ V`.
    pub fn flip<F: Field<Elem = E>>(f: &F, n: usize) -> Self {
        Self::from_entries(
            f,
            n,
            2,
            (0..n).flat_map(|a| (0..n).map(move |b| (a * n + b, b * n + a))).map(|(r, c)| (r, c, f.one())),
        )
    }

    pub fn base_dim(&self) -> usize {
        self.n
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<(usize, E)>] {
        &self.rows
    }

    /// Number of stored (nonzero) coefficients.
    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn get<F: Field<Elem = E>>(&self, f: &F, r: usize, c: usize) -> E {
        match self.rows[r].binary_search_by_key(&c, |e| e.0) {
            Ok(i) => self.rows[r][i].1.clone(),
            Err(_) => f.zero(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &E)> {
        self.rows.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    /// Multi-index digits of a flattened index, most significant first.
    pub fn digits(&self, idx: usize) -> Vec<usize> {
        unflatten(self.n, self.arity, idx)
    }

    fn check_shape(&self, o: &Self, what: &str) -> Result<(), TensorError> {
        if self.n != o.n || self.arity != o.arity {
            return Err(TensorError::Shape(format!(
                "{what}: (N={}, n={}) vs (N={}, n={})",
                self.n, self.arity, o.n, o.arity
            )));
        }
        Ok(())
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, o: &Self) -> Self {
        self.check_shape(o, "add").expect("shape");
        let rows = self
            .rows
            .iter()
            .zip(&o.rows)
            .map(|(a, b)| {
                let mut v = a.clone();
                v.extend(b.iter().cloned());
                Self::merge_row(f, v)
            })
            .collect();
        Self { n: self.n, arity: self.arity, rows }
    }

    pub fn neg<F: Field<Elem = E>>(&self, f: &F) -> Self {
        self.map_values(|v| f.neg(v))
    }

    pub fn sub<F: Field<Elem = E>>(&self, f: &F, o: &Self) -> Self {
        self.add(f, &o.neg(f))
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, c: &E) -> Self {
        if f.is_zero(c) {
            return Self::zero(self.n, self.arity);
        }
        self.map_values(|v| f.mul(c, v))
    }

    fn map_values(&self, g: impl Fn(&E) -> E) -> Self {
        Self {
            n: self.n,
            arity: self.arity,
            rows: self.rows.iter().map(|row| row.iter().map(|(c, v)| (*c, g(v))).collect()).collect(),
        }
    }

    /// Matrix product `self · o`.
    pub fn compose<F: Field<Elem = E>>(&self, f: &F, o: &Self) -> Self {
        self.check_shape(o, "compose").expect("shape");
        let dim = self.dim();
        let mut acc: Vec<Option<E>> = vec![None; dim];
        let mut touched = Vec::new();
        let rows = self
            .rows
            .iter()
            .map(|row| {
                touched.clear();
                for (m, x) in row {
                    for (c, y) in &o.rows[*m] {
                        let p = f.mul(x, y);
                        match &mut acc[*c] {
                            Some(s) => *s = f.add(s, &p),
                            slot @ None => {
                                *slot = Some(p);
                                touched.push(*c);
                            }
                        }
                    }
                }
                touched.sort_unstable();
                touched
                    .iter()
                    .filter_map(|&c| acc[c].take().filter(|v| !f.is_zero(v)).map(|v| (c, v)))
                    .collect()
            })
            .collect();
        Self { n: self.n, arity: self.arity, rows }
    }

    /// Product of a sequence, left to right.
    pub fn product<'a, F: Field<Elem = E>>(f: &F, ops: impl IntoIterator<Item = &'a Self>) -> Self
    where
        E: 'a,
    {
        let mut it = ops.into_iter();
        let first = it.next().expect("nonempty product").clone();
        it.fold(first, |acc, x| acc.compose(f, x))
    }

    pub fn transpose(&self) -> Self {
        let mut rows: Vec<Vec<(usize, E)>> = vec![Vec::new(); self.dim()];
        for (r, c, v) in self.entries() {
            rows[c].push((r, v.clone()));
        }
        Self { n: self.n, arity: self.arity, rows }
    }

    /// `X_m` inside `End(V^{⊗target})`: `X` on factors `m..m+arity-1` (1-based),
    /// identity elsewhere.
    pub fn embed(&self, m: usize, target: usize) -> Result<Self, TensorError> {
        if m == 0 || m + self.arity > target + 1 {
            return Err(TensorError::Position { pos: m, arity: target });
        }
        let nl = pow(self.n, m - 1);
        let nr = pow(self.n, target + 1 - m - self.arity);
        let d = self.dim();
        let mut rows: Vec<Vec<(usize, E)>> = vec![Vec::new(); nl * d * nr];
        for l in 0..nl {
            for (r, row) in self.rows.iter().enumerate() {
                for t in 0..nr {
                    rows[(l * d + r) * nr + t] = row.iter().map(|(c, v)| ((l * d + c) * nr + t, v.clone())).collect();
                }
            }
        }
        Ok(Self { n: self.n, arity: target, rows })
    }

    /// `X ⊗ Y`.
    pub fn kron<F: Field<Elem = E>>(&self, f: &F, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let od = o.dim();
        let mut rows = Vec::with_capacity(self.dim() * od);
        for ra in &self.rows {
            for rb in &o.rows {
                let mut row = Vec::with_capacity(ra.len() * rb.len());
                for (ca, va) in ra {
                    for (cb, vb) in rb {
                        row.push((ca * od + cb, f.mul(va, vb)));
                    }
                }
                row.retain(|(_, v)| !f.is_zero(v));
                rows.push(row);
            }
        }
        Self { n: self.n, arity: self.arity + o.arity, rows }
    }

    /// Trace over factor `i` (1-based).
    pub fn partial_trace<F: Field<Elem = E>>(&self, f: &F, i: usize) -> Result<Self, TensorError> {
        if i == 0 || i > self.arity {
            return Err(TensorError::Position { pos: i, arity: self.arity });
        }
        let n = self.n;
        let right = pow(n, self.arity - i);
        let split = |idx: usize| {
            let t = idx % right;
            let rest = idx / right;
            (rest / n, rest % n, t)
        };
        let mut entries = Vec::new();
        for (r, c, v) in self.entries() {
            let (lr, ar, tr) = split(r);
            let (lc, ac, tc) = split(c);
            if ar == ac {
                entries.push((lr * right + tr, lc * right + tc, v.clone()));
            }
        }
        Ok(Self::from_entries(f, n, self.arity - 1, entries))
    }

    /// Traces over several factors (1-based positions, any order).
    pub fn partial_trace_many<F: Field<Elem = E>>(&self, f: &F, factors: &[usize]) -> Result<Self, TensorError> {
        let mut fs = factors.to_vec();
        fs.sort_unstable_by(|a, b| b.cmp(a));
        let mut x = self.clone();
        for i in fs {
            x = x.partial_trace(f, i)?;
        }
        Ok(x)
    }

    /// Full trace.
    pub fn trace<F: Field<Elem = E>>(&self, f: &F) -> E {
        let mut s = f.zero();
        for (r, row) in self.rows.iter().enumerate() {
            if let Ok(i) = row.binary_search_by_key(&r, |e| e.0) {
                s = f.add(&s, &row[i].1);
            }
        }
        s
    }

    /// R-trace in factor `i`: `Tr_i(D_i X)`.
    pub fn r_trace<F: Field<Elem = E>>(&self, f: &F, d: &Self, i: usize) -> Result<Self, TensorError> {
        if d.arity != 1 || d.n != self.n {
            return Err(TensorError::Shape("R-trace weight must be an arity-1 operator on V".into()));
        }
        let di = d.embed(i, self.arity)?;
        di.compose(f, self).partial_trace(f, i)
    }

    /// R-trace over several factors.
    pub fn r_trace_many<F: Field<Elem = E>>(&self, f: &F, d: &Self, factors: &[usize]) -> Result<Self, TensorError> {
        let mut fs = factors.to_vec();
        fs.sort_unstable_by(|a, b| b.cmp(a));
        let mut x = self.clone();
        for i in fs {
            x = x.r_trace(f, d, i)?;
        }
        Ok(x)
    }

    /// Reinterprets coefficients in another field.
    pub fn convert<G, M>(&self, g: &G, map: M) -> Result<Operator<G::Elem>, ScalarError>
    where
        G: Field,
        M: Fn(&E) -> Result<G::Elem, ScalarError>,
    {
        let mut rows = Vec::with_capacity(self.dim());
        for row in &self.rows {
            let mut out = Vec::with_capacity(row.len());
            for (c, v) in row {
                let x = map(v)?;
                if !g.is_zero(&x) {
                    out.push((*c, x));
                }
            }
            rows.push(out);
        }
        Ok(Operator { n: self.n, arity: self.arity, rows })
    }

    /// Dense row-major copy.
    pub fn to_dense<F: Field<Elem = E>>(&self, f: &F) -> Vec<Vec<E>> {
        let dim = self.dim();
        self.rows
            .iter()
            .map(|row| {
                let mut d = vec![f.zero(); dim];
                for (c, v) in row {
                    d[*c] = v.clone();
                }
                d
            })
            .collect()
    }

    pub fn from_dense<F: Field<Elem = E>>(f: &F, n: usize, arity: usize, dense: Vec<Vec<E>>) -> Self {
        let rows = dense
            .into_iter()
            .map(|r| r.into_iter().enumerate().filter(|(_, v)| !f.is_zero(v)).collect())
            .collect();
        Self { n, arity, rows }
    }

    /// Gauss-Jordan inverse.
    pub fn inverse<F: Field<Elem = E>>(&self, f: &F) -> Result<Self, TensorError> {
        let dim = self.dim();
        let mut a = self.to_dense(f);
        let mut inv = Self::identity(f, self.n, self.arity).to_dense(f);
        for col in 0..dim {
            let piv = (col..dim).find(|&r| !f.is_zero(&a[r][col])).ok_or(TensorError::Singular)?;
            a.swap(col, piv);
            inv.swap(col, piv);
            let pinv = f.inv(&a[col][col]).ok_or(TensorError::Singular)?;
            for j in 0..dim {
                a[col][j] = f.mul(&a[col][j], &pinv);
                inv[col][j] = f.mul(&inv[col][j], &pinv);
            }
            for r in 0..dim {
                if r == col || f.is_zero(&a[r][col]) {
                    continue;
                }
                let factor = a[r][col].clone();
                for j in 0..dim {
                    if !f.is_zero(&a[col][j]) {
                        let t = f.mul(&factor, &a[col][j]);
                        a[r][j] = f.sub(&a[r][j], &t);
                    }
                    if !f.is_zero(&inv[col][j]) {
                        let t = f.mul(&factor, &inv[col][j]);
                        inv[r][j] = f.sub(&inv[r][j], &t);
                    }
                }
            }
        }
        Ok(Self::from_dense(f, self.n, self.arity, inv))
    }

    /// Rank by sparse elimination over `f`.
    pub fn rank<F: Field<Elem = E>>(&self, f: &F) -> usize {
        sparse_rank(f, self.rows.iter().cloned())
    }

    /// First nonzero entry, for residual reporting.
    pub fn first_nonzero(&self) -> Option<(usize, usize, &E)> {
        self.entries().next()
    }
}

pub fn unflatten(n: usize, arity: usize, mut idx: usize) -> Vec<usize> {
    let mut d = vec![0; arity];
    for slot in d.iter_mut().rev() {
        *slot = idx % n;
        idx /= n;
    }
    d
}

pub fn flatten(n: usize, digits: &[usize]) -> usize {
    digits.iter().fold(0, |acc, &x| acc * n + x)
}

/// Rank of a family of sparse vectors (entries sorted by index).
pub fn sparse_rank<F: Field, I: IntoIterator<Item = Vec<(usize, F::Elem)>>>(f: &F, vectors: I) -> usize {
    let mut basis = Echelon::new();
    vectors.into_iter().filter(|v| basis.insert(f, v.clone())).count()
}

/// Incremental row-echelon basis of sparse vectors, keyed by pivot column.
/// Pivots are the smallest index of each reduced vector and are normalized to one.
#[derive(Clone, Debug)]
pub struct Echelon<E> {
    pivots: std::collections::BTreeMap<usize, Vec<(usize, E)>>,
}

impl<E: Clone + PartialEq> Default for Echelon<E> {
    fn default() -> Self {
        Self::new()
    }
}

impl<E: Clone + PartialEq> Echelon<E> {
    pub fn new() -> Self {
        Self { pivots: Default::default() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` against the basis; returns the remainder (empty if in span).
    pub fn reduce<F: Field<Elem = E>>(&self, f: &F, v: Vec<(usize, E)>) -> Vec<(usize, E)> {
        self.reduce_tracked(f, v, |_, _| {})
    }

    /// Like [`Echelon::reduce`], calling `on_step(pivot, factor)` for each
    /// subtraction `v -= factor * basis[pivot]`.
    pub fn reduce_tracked<F: Field<Elem = E>>(
        &self,
        f: &F,
        v: Vec<(usize, E)>,
        mut on_step: impl FnMut(usize, &E),
    ) -> Vec<(usize, E)> {
        let mut cur: std::collections::BTreeMap<usize, E> = v.into_iter().filter(|(_, x)| !f.is_zero(x)).collect();
        let mut done: Vec<(usize, E)> = Vec::new();
        while let Some((&c, _)) = cur.iter().next() {
            let x = cur.remove(&c).unwrap();
            match self.pivots.get(&c) {
                None => done.push((c, x)),
                Some(row) => {
                    on_step(c, &x);
                    for (j, y) in row.iter().skip(1) {
                        let t = f.mul(&x, y);
                        let e = cur.entry(*j).or_insert_with(|| f.zero());
                        *e = f.sub(e, &t);
                        if f.is_zero(e) {
                            cur.remove(j);
                        }
                    }
                }
            }
        }
        done
    }

    /// Adds `v`; returns true if it was independent.
    pub fn insert<F: Field<Elem = E>>(&mut self, f: &F, v: Vec<(usize, E)>) -> bool {
        let r = self.reduce(f, v);
        self.insert_reduced(f, r).is_some()
    }

    /// Inserts an already-reduced vector, normalizing its pivot; returns the pivot
    /// column and the normalizing factor applied.
    pub fn insert_reduced<F: Field<Elem = E>>(&mut self, f: &F, r: Vec<(usize, E)>) -> Option<(usize, E)> {
        let (&(c, ref lead), _) = r.split_first()?;
        let inv = f.inv(lead).expect("nonzero pivot");
        let row: Vec<(usize, E)> = r.iter().map(|(j, y)| (*j, f.mul(&inv, y))).collect();
        self.pivots.insert(c, row);
        Some((c, inv))
    }

    pub fn pivot_row(&self, c: usize) -> Option<&[(usize, E)]> {
        self.pivots.get(&c).map(Vec::as_slice)
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }
}

impl QOperator {
    /// Reduction modulo a prime point.
    pub fn reduce_mod(&self, pt: &PrimePoint) -> Result<Operator<u64>, ScalarError> {
        self.convert(&ModField::new(*pt), |v| v.reduce(pt))
    }

    /// Substitutes `q -> q^{-1}` in every coefficient.
    pub fn bar(&self) -> Self {
        self.map_values(QScalar::bar)
    }

    /// JSON dump: records `{in, out, coeff}` with 1-based multi-indices and the
    /// scalar text form; `X e_in = Σ coeff e_out`, i.e. `in` is the column.
    pub fn to_dump(&self) -> Vec<DumpRecord> {
        self.entries()
            .map(|(r, c, v)| DumpRecord {
                input: self.digits(c).iter().map(|d| d + 1).collect(),
                output: self.digits(r).iter().map(|d| d + 1).collect(),
                coeff: v.to_string(),
            })
            .collect()
    }

    pub fn from_dump(n: usize, records: &[DumpRecord]) -> Result<Self, TensorError> {
        let arity = records.first().map(|r| r.input.len()).ok_or_else(|| TensorError::Dump("empty".into()))?;
        let mut entries = Vec::with_capacity(records.len());
        for rec in records {
            if rec.input.len() != arity || rec.output.len() != arity {
                return Err(TensorError::Dump("inconsistent arity".into()));
            }
            let idx = |v: &[usize]| -> Result<usize, TensorError> {
                if v.iter().any(|&d| d == 0 || d > n) {
                    return Err(TensorError::Dump(format!("index {v:?} outside 1..={n}")));
                }
                Ok(flatten(n, &v.iter().map(|d| d - 1).collect::<Vec<_>>()))
            };
            let coeff: QScalar = rec.coeff.parse()?;
            entries.push((idx(&rec.output)?, idx(&rec.input)?, coeff));
        }
        Ok(Self::from_entries(&QField, n, arity, entries))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DumpRecord {
    #[serde(rename = "in")]
    pub input: Vec<usize>,
    #[serde(rename = "out")]
    pub output: Vec<usize>,
    pub coeff: String,
}

/// Solves for the skew inverse `Ψ` with `Tr_(2) R_12 Ψ_23 = P_13` and checks the
/// mirrored condition `Tr_(2) Ψ_12 R_23 = P_13`.
pub fn solve_skew_inverse<F: Field>(f: &F, r: &Operator<F::Elem>) -> Result<Operator<F::Elem>, TensorError> {
    if r.arity != 2 {
        return Err(TensorError::Shape("skew inverse needs arity 2".into()));
    }
    let n = r.n;
    // Partial transpose: Rt[(a,b)][(m,c)] = R[(a,c)][(b,m)].
    let mut rt = Vec::with_capacity(r.nnz());
    for (row, col, v) in r.entries() {
        let (a, c) = (row / n, row % n);
        let (b, m) = (col / n, col % n);
        rt.push((a * n + b, m * n + c, v.clone()));
    }
    let rt = Operator::from_entries(f, n, 2, rt);
    let rt_inv = match rt.inverse(f) {
        Ok(x) => x,
        Err(_) => {
            let witness = kernel_vector(f, &rt).into_iter().map(|(i, v)| (i, format!("{v:?}"))).collect();
            return Err(TensorError::NotSkewInvertible { witness });
        }
    };
    // Ψt = Rt^{-1} J with J[(a,b)][(a',b')] = δ_{a b'} δ_{a' b}, i.e. J is the flip.
    let psit = rt_inv.compose(f, &Operator::flip(f, n));
    // Ψ[(m,a)][(c,b)] = Ψt[(m,c)][(a,b)].
    let mut psi = Vec::with_capacity(psit.nnz());
    for (row, col, v) in psit.entries() {
        let (m, c) = (row / n, row % n);
        let (a, b) = (col / n, col % n);
        psi.push((m * n + a, c * n + b, v.clone()));
    }
    let psi = Operator::from_entries(f, n, 2, psi);
    let p13 = Operator::flip(f, n);
    let lhs = psi.embed(1, 3)?.compose(f, &r.embed(2, 3)?).partial_trace(f, 2)?;
    if lhs != p13 {
        return Err(TensorError::NotSkewInvertible { witness: Vec::new() });
    }
    Ok(psi)
}

/// A nonzero kernel vector of a singular square operator.
pub fn kernel_vector<F: Field>(f: &F, x: &Operator<F::Elem>) -> Vec<(usize, F::Elem)> {
    let dim = x.dim();
    let mut a = x.to_dense(f);
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..dim {
        let Some(p) = (row..dim).find(|&r| !f.is_zero(&a[r][col])) else { continue };
        a.swap(row, p);
        let inv = f.inv(&a[row][col]).unwrap();
        for j in 0..dim {
            a[row][j] = f.mul(&a[row][j], &inv);
        }
        for r in 0..dim {
            if r != row && !f.is_zero(&a[r][col]) {
                let fac = a[r][col].clone();
                for j in 0..dim {
                    let t = f.mul(&fac, &a[row][j]);
                    a[r][j] = f.sub(&a[r][j], &t);
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    let Some(free) = (0..dim).find(|c| !pivot_cols.contains(c)) else { return Vec::new() };
    let mut v = vec![(free, f.one())];
    for (r, &pc) in pivot_cols.iter().enumerate() {
        if !f.is_zero(&a[r][free]) {
            v.push((pc, f.neg(&a[r][free])));
        }
    }
    v.sort_by_key(|e| e.0);
    v
}

/// Rank over ℚ(q) certified by agreement at several prime points, with an exact
/// elimination when the points disagree or `exact` is requested.
#[derive(Clone, Debug, Serialize)]
pub struct RankCertificate {
    pub rank: usize,
    pub modular: Vec<(u64, usize)>,
    pub exact: Option<usize>,
}

pub fn certified_rank(x: &QOperator, points: &[PrimePoint], exact: bool) -> RankCertificate {
    let modular: Vec<(u64, usize)> = points
        .iter()
        .filter_map(|pt| x.reduce_mod(pt).ok().map(|m| (pt.p, m.rank(&ModField::new(*pt)))))
        .collect();
    let agree = !modular.is_empty() && modular.iter().all(|m| m.1 == modular[0].1);
    let exact = if exact || !agree { Some(x.rank(&QField)) } else { None };
    let rank = exact.unwrap_or(modular[0].1);
    RankCertificate { rank, modular, exact }
}

impl<E: fmt::Display + Clone + PartialEq> fmt::Display for Operator<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (r, c, v) in self.entries() {
            if !first {
                writeln!(f)?;
            }
            first = false;
            let fmt_idx = |d: Vec<usize>| d.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(",");
            write!(f, "[{}][{}] = {}", fmt_idx(self.digits(r)), fmt_idx(self.digits(c)), v)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(e: i32) -> QScalar {
        QScalar::q_pow(e)
    }

    #[test]
    fn flip_trace_is_identity() {
        let p = QOperator::flip(&QField, 3);
        assert_eq!(p.partial_trace(&QField, 2).unwrap(), QOperator::identity(&QField, 3, 1));
        let i2 = QOperator::identity(&QField, 3, 2);
        let t = i2.partial_trace(&QField, 2).unwrap().partial_trace(&QField, 1).unwrap();
        assert_eq!(t.trace(&QField), QScalar::from_int(9));
    }

    #[test]
    fn embed_positions() {
        let f = QField;
        let p = QOperator::flip(&f, 2);
        let p12 = p.embed(1, 3).unwrap();
        // P_12 maps e_{a,b,c} to e_{b,a,c}.
        let col = flatten(2, &[0, 1, 1]);
        let row = flatten(2, &[1, 0, 1]);
        assert!(f.is_one(&p12.get(&f, row, col)));
        assert_eq!(QOperator::identity(&f, 2, 1).embed(2, 3).unwrap(), QOperator::identity(&f, 2, 3));
        assert!(p.embed(3, 3).is_err());
    }

    #[test]
    fn skew_inverse_of_flip_is_flip() {
        let p = QOperator::flip(&QField, 2);
        assert_eq!(solve_skew_inverse(&QField, &p).unwrap(), p);
    }

    #[test]
    fn inverse_roundtrip() {
        let f = QField;
        let x = QOperator::from_entries(&f, 2, 1, vec![(0, 0, q(1)), (0, 1, q(-2)), (1, 1, q(3)), (1, 0, QScalar::from_int(2))]);
        let xi = x.inverse(&f).unwrap();
        assert_eq!(x.compose(&f, &xi), QOperator::identity(&f, 2, 1));
    }

    #[test]
    fn rank_of_flip() {
        assert_eq!(QOperator::flip(&QField, 2).rank(&QField), 4);
    }

    #[test]
    fn dump_roundtrip() {
        let f = QField;
        let x = QOperator::from_entries(&f, 2, 2, vec![(1, 2, q(1).sub(&q(-3))), (0, 0, q(1))]);
        let d = x.to_dump();
        let json = serde_json::to_string(&d).unwrap();
        let back: Vec<DumpRecord> = serde_json::from_str(&json).unwrap();
        assert_eq!(QOperator::from_dump(2, &back).unwrap(), x);
    }
}
