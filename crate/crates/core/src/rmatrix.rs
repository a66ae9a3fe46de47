//! R-matrices: the standard symplectic family, BMW-type certification,
//! compatible pairs and twists, the operator `G`, antisymmetrizer and
//! symmetrizer towers, `δ_i`, `Δ^{(i)}` and the height test.

use serde::Serialize;
use thiserror::Error;

use crate::report::Outcome;
use crate::scalar::{lambda, q_int, Field, ModField, PrimePoint, QField, QScalar, ScalarError};
use crate::tensor::{solve_skew_inverse, Operator, QOperator, TensorError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RMatrixError {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("R is not invertible")]
    NotInvertible,
    #[error("context carries no BMW data (μ, K)")]
    NotBmw,
    #[error("recursion guard violated at level {level}: {what}")]
    Guard { level: usize, what: String },
    #[error("no vanishing level found up to {bound}: height > {bound}")]
    HeightAboveBound { bound: usize },
    #[error("D_R is not invertible (R is not strict skew invertible)")]
    NotStrict,
}

/// Range `[low, high]` of `q`-exponents an operator's Laurent entries may occupy,
/// after clearing the point-independent scalar denominators. Used only to bound
/// the failure probability of modular zero tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Extent {
    pub low: i64,
    pub high: i64,
}

impl Extent {
    pub const ZERO: Extent = Extent { low: 0, high: 0 };

    pub fn of_scalar(x: &QScalar) -> Self {
        let n = x.numerator();
        let d = x.denominator();
        // Both numerator and denominator count: clearing denominators multiplies by d.
        Extent { low: n.low() as i64, high: n.high() as i64 + d.high() as i64 }
    }

    pub fn of_operator(x: &QOperator) -> Self {
        let mut e: Option<Extent> = None;
        for (_, _, v) in x.entries() {
            let s = Self::of_scalar(v);
            e = Some(e.map_or(s, |a| a.union(s)));
        }
        e.unwrap_or(Self::ZERO)
    }

    pub fn union(self, o: Self) -> Self {
        Extent { low: self.low.min(o.low), high: self.high.max(o.high) }
    }

    pub fn times(self, o: Self) -> Self {
        Extent { low: self.low + o.low, high: self.high + o.high }
    }

    pub fn span(self) -> u64 {
        (self.high - self.low).unsigned_abs()
    }
}

/// A skew-invertible R-matrix with its derived operators, over a coefficient field.
#[derive(Clone, Debug)]
pub struct RMatrix<F: Field> {
    pub field: F,
    pub n: usize,
    pub r: Operator<F::Elem>,
    pub r_inv: Operator<F::Elem>,
    pub psi: Operator<F::Elem>,
    /// `D_R = Tr_(2) Ψ_12`.
    pub d: Operator<F::Elem>,
    /// `Tr_(1) Ψ_12 = (D_{R^{-1}})^{-1}`.
    pub c: Operator<F::Elem>,
    pub bmw: Option<Bmw<F::Elem>>,
    pub extent_r: Extent,
}

#[derive(Clone, Debug)]
pub struct Bmw<E> {
    pub mu: QScalar,
    pub k: Operator<E>,
    pub extent_k: Extent,
}

pub type QRMatrix = RMatrix<QField>;

impl<F: Field> RMatrix<F> {
    /// Builds the context for `r`. With `mu` given, `K` is formed from
    /// `μ^{-1}(q-q^{-1})^{-1}(qI-R)(q^{-1}I+R)`.
    pub fn new(field: F, r: Operator<F::Elem>, mu: Option<QScalar>, extent_r: Extent) -> Result<Self, RMatrixError> {
        let f = &field;
        let n = r.base_dim();
        let r_inv = r.inverse(f).map_err(|_| RMatrixError::NotInvertible)?;
        let psi = solve_skew_inverse(f, &r)?;
        let d = psi.partial_trace(f, 2)?;
        let c = psi.partial_trace(f, 1)?;
        let bmw = match mu {
            None => None,
            Some(mu) => {
                let id = Operator::identity(f, n, 2);
                let qe = f.from_q(&QScalar::q())?;
                let qi = f.from_q(&QScalar::q_pow(-1))?;
                let a = id.scale(f, &qe).sub(f, &r);
                let b = id.scale(f, &qi).add(f, &r);
                let coef = f.from_q(&mu.mul(&lambda()).inv().ok_or(ScalarError::DivisionByZero {
                    context: "μ(q-q^{-1})".into(),
                })?)?;
                let k = a.compose(f, &b).scale(f, &coef);
                let q1 = Extent { low: -1, high: 1 };
                // Dividing by μλ shifts exponents by at most its span either way.
                let ml = mu.mul(&lambda());
                let s = ml.numerator().low().abs().max(ml.numerator().high().abs()) as i64 + ml.denominator().high() as i64;
                let extent_k = q1.union(extent_r).times(q1.union(extent_r)).times(Extent { low: -s, high: s });
                Some(Bmw { mu, k, extent_k })
            }
        };
        Ok(Self { field, n, r, r_inv, psi, d, c, bmw, extent_r })
    }

    pub fn f(&self) -> &F {
        &self.field
    }

    pub fn bmw(&self) -> Result<&Bmw<F::Elem>, RMatrixError> {
        self.bmw.as_ref().ok_or(RMatrixError::NotBmw)
    }

    pub fn mu(&self) -> Result<&QScalar, RMatrixError> {
        Ok(&self.bmw()?.mu)
    }

    pub fn k_op(&self) -> Result<&Operator<F::Elem>, RMatrixError> {
        Ok(&self.bmw()?.k)
    }

    pub fn elem(&self, x: &QScalar) -> Result<F::Elem, RMatrixError> {
        Ok(self.field.from_q(x)?)
    }

    pub fn identity(&self, arity: usize) -> Operator<F::Elem> {
        Operator::identity(&self.field, self.n, arity)
    }

    /// `R_i` inside `End(V^{⊗arity})`.
    pub fn r_at(&self, i: usize, arity: usize) -> Operator<F::Elem> {
        self.r.embed(i, arity).expect("position")
    }

    pub fn r_inv_at(&self, i: usize, arity: usize) -> Operator<F::Elem> {
        self.r_inv.embed(i, arity).expect("position")
    }

    pub fn k_at(&self, i: usize, arity: usize) -> Result<Operator<F::Elem>, RMatrixError> {
        Ok(self.k_op()?.embed(i, arity)?)
    }

    /// `R_1 R_2 R_1 - R_2 R_1 R_2`.
    pub fn braid_residual(&self) -> Operator<F::Elem> {
        let f = &self.field;
        let (r1, r2) = (self.r_at(1, 3), self.r_at(2, 3));
        let lhs = Operator::product(f, [&r1, &r2, &r1]);
        let rhs = Operator::product(f, [&r2, &r1, &r2]);
        lhs.sub(f, &rhs)
    }

    /// R-trace in factor `i` with weight `D_R`.
    pub fn r_trace(&self, x: &Operator<F::Elem>, i: usize) -> Operator<F::Elem> {
        x.r_trace(&self.field, &self.d, i).expect("shape")
    }

    pub fn r_trace_many(&self, x: &Operator<F::Elem>, factors: &[usize]) -> Operator<F::Elem> {
        x.r_trace_many(&self.field, &self.d, factors).expect("shape")
    }

    /// Image of a braid word: letters `(i, +1)` and `(i, -1)` for `σ_i^{±1}`.
    pub fn braid_image(&self, word: &[(usize, i8)], arity: usize) -> Operator<F::Elem> {
        let f = &self.field;
        let mut acc = self.identity(arity);
        for &(i, s) in word {
            let g = if s > 0 { self.r_at(i, arity) } else { self.r_inv_at(i, arity) };
            acc = acc.compose(f, &g);
        }
        acc
    }

    /// `σ^±_i(x) = 1 + (x-1)/(q-q^{-1}) R_i + μ(x-1)/(μ ∓ q^{∓1}x) K_i` on `arity` factors.
    pub fn sigma_pm(&self, plus: bool, i: usize, x: &QScalar, arity: usize) -> Result<Operator<F::Elem>, RMatrixError> {
        let f = &self.field;
        let mu = self.mu()?.clone();
        let xm1 = x.sub(&QScalar::one());
        let c1 = xm1.div(&lambda());
        let den = if plus { mu.sub(&QScalar::q_pow(-1).mul(x)) } else { mu.add(&QScalar::q().mul(x)) };
        if den.is_zero() {
            return Err(RMatrixError::Guard { level: i, what: format!("μ {} q^{{{}}}x vanishes", if plus { "-" } else { "+" }, if plus { -1 } else { 1 }) });
        }
        let c2 = mu.mul(&xm1).div(&den);
        let op = self
            .identity(arity)
            .add(f, &self.r_at(i, arity).scale(f, &self.elem(&c1)?))
            .add(f, &self.k_at(i, arity)?.scale(f, &self.elem(&c2)?));
        Ok(op)
    }

    /// `a^{(1)}, …, a^{(levels)}` (or the symmetrizers with `plus`), as
    /// operators of arity `1..=levels`.
    pub fn tower(&self, plus: bool, levels: usize) -> Result<Tower<F::Elem>, RMatrixError> {
        let mut t = Tower { plus, ops: vec![self.identity(1)], extents: vec![Extent::ZERO] };
        while t.ops.len() < levels {
            self.extend_tower(&mut t)?;
        }
        Ok(t)
    }

    /// Appends the next level of `t`.
    pub fn extend_tower(&self, t: &mut Tower<F::Elem>) -> Result<(), RMatrixError> {
        let f = &self.field;
        let plus = t.plus;
        let i = t.ops.len();
        let prev = t.ops[i - 1].embed(1, i + 1)?;
        let e = i as i32;
        let x = QScalar::q_pow(if plus { 2 * e } else { -2 * e });
        let iq = q_int(i as i64 + 1);
        if iq.is_zero() {
            return Err(RMatrixError::Guard { level: i + 1, what: format!("{}_q vanishes", i + 1) });
        }
        let coef = QScalar::q_pow(if plus { -e } else { e }).div(&iq);
        let s = self.sigma_pm(plus, i, &x, i + 1)?;
        let next = Operator::product(f, [&prev, &s, &prev]).scale(f, &self.elem(&coef)?);
        let se = self.sigma_extent(plus, i)?;
        t.extents.push(t.extents[i - 1].times(se).times(t.extents[i - 1]));
        t.ops.push(next);
        Ok(())
    }

    /// Exponent range of the cleared `σ^±_i(q^{∓2i})`.
    fn sigma_extent(&self, plus: bool, i: usize) -> Result<Extent, RMatrixError> {
        let mu = self.mu()?;
        let ke = self.bmw()?.extent_k;
        let x = if plus { QScalar::q_pow(2 * i as i32) } else { QScalar::q_pow(-2 * i as i32) };
        let den = if plus { mu.sub(&QScalar::q_pow(-1).mul(&x)) } else { mu.add(&QScalar::q().mul(&x)) };
        let xm1 = x.sub(&QScalar::one());
        let clear = lambda().mul(&den);
        let e0 = Extent::of_scalar(&clear);
        let e1 = Extent::of_scalar(&xm1.mul(&den)).times(self.extent_r);
        let e2 = Extent::of_scalar(&lambda().mul(mu).mul(&xm1)).times(ke);
        Ok(e0.union(e1).union(e2))
    }

    /// `ρ_R(a^{(k)} σ^-_k(q^{-2k}) a^{(k)})` from a tower with at least `k` levels.
    pub fn height_operator(&self, tower: &Tower<F::Elem>, k: usize) -> Result<Operator<F::Elem>, RMatrixError> {
        let f = &self.field;
        let a = tower.ops[k - 1].embed(1, k + 1)?;
        let s = self.sigma_pm(false, k, &QScalar::q_pow(-2 * k as i32), k + 1)?;
        Ok(Operator::product(f, [&a, &s, &a]))
    }

    /// Searches for the height up to `bound`.
    pub fn height(&self, bound: usize) -> Result<Height, RMatrixError> {
        let f = &self.field;
        let mu = self.mu()?.clone();
        let mut tower = self.tower(false, 1)?;
        for k in 1..=bound {
            if k > 1 {
                self.extend_tower(&mut tower)?;
            }
            if tower.ops[k - 1].is_zero() {
                return Err(RMatrixError::Guard { level: k, what: "antisymmetrizer vanishes below the height".into() });
            }
            let h = self.height_operator(&tower, k)?;
            if h.is_zero() {
                let tag = if mu == QScalar::q_pow(-1 - 2 * k as i32).neg() {
                    Some(format!("Sp({})", 2 * k))
                } else if mu == QScalar::q_pow(1 - k as i32) && tower.ops[k - 1].rank(f) == 1 {
                    Some(format!("O({k})"))
                } else {
                    None
                };
                let ext = tower.extents[k - 1].times(self.sigma_extent(false, k)?).times(tower.extents[k - 1]);
                return Ok(Height { k, tag, degree_bound: ext.span() });
            }
        }
        Err(RMatrixError::HeightAboveBound { bound })
    }

    /// The closed-form `δ_i(q, μ)`.
    pub fn delta(&self, i: usize) -> Result<QScalar, RMatrixError> {
        delta(self.mu()?, i)
    }

    pub fn big_delta(&self, i: usize) -> Result<QScalar, RMatrixError> {
        let mu = self.mu()?;
        (1..=i).try_fold(QScalar::one(), |acc, j| Ok(acc.mul(&delta(mu, j)?)))
    }

    /// Residuals of the BMW conditions, each as an [`Outcome`].
    pub fn check_bmw(&self) -> Result<Vec<Outcome>, RMatrixError> {
        let f = &self.field;
        let b = self.bmw()?;
        let mut out = Vec::new();
        let id2 = self.identity(2);
        let sc = |x: QScalar| self.elem(&x);
        let a = id2.scale(f, &sc(QScalar::q())?).sub(f, &self.r);
        let bb = id2.scale(f, &sc(QScalar::q_pow(-1))?).add(f, &self.r);
        let c = id2.scale(f, &sc(b.mu.clone())?).sub(f, &self.r);
        let cubic = Operator::product(f, [&a, &bb, &c]);
        out.push(Outcome::from_residual("charR", residual_text(&cubic)));
        let (k1, k2) = (self.k_at(1, 3)?, self.k_at(2, 3)?);
        let k2k1 = k2.compose(f, &k1);
        for (s1, s2) in [(1i8, 1i8), (-1, -1)] {
            let word = [(1usize, s1), (2usize, s2)];
            let rhs = k2.compose(f, &self.braid_image(&word, 3));
            out.push(Outcome::from_residual(
                format!("bmwRa K2K1=K2R1^{s1}R2^{s2}"),
                residual_text(&k2k1.sub(f, &rhs)),
            ));
        }
        let kkk = Operator::product(f, [&k1, &k2, &k1]).sub(f, &k1);
        out.push(Outcome::from_residual("bmwRa K1K2K1=K1", residual_text(&kkk)));
        let rank = b.k.rank(f);
        out.push(if rank == 1 { Outcome::pass("rank K = 1") } else { Outcome::fail("rank K = 1", format!("rank {rank}")) });
        let tk = self.r_trace(&b.k, 2).sub(f, &self.identity(1).scale(f, &sc(b.mu.clone())?));
        out.push(Outcome::from_residual("Tr_R(2) K1 = μ I", residual_text(&tk)));
        let tr_i = self.d.trace(f);
        let expect = sc(tr_r_identity(&b.mu))?;
        out.push(if tr_i == expect {
            Outcome::pass("Tr_R I")
        } else {
            Outcome::fail("Tr_R I", format!("{} vs {}", tr_i, expect))
        });
        Ok(out)
    }

    /// `Tr_R(2) R_1 = I` and `Tr_R(2) R_1^{-1} = μ² I`.
    pub fn check_traces(&self) -> Result<Vec<Outcome>, RMatrixError> {
        let f = &self.field;
        let mut out = vec![Outcome::from_residual(
            "Tr_R(2) R1 = I",
            residual_text(&self.r_trace(&self.r, 2).sub(f, &self.identity(1))),
        )];
        if let Ok(mu) = self.mu() {
            let m2 = self.elem(&mu.mul(mu))?;
            out.push(Outcome::from_residual(
                "Tr_R(2) R1^-1 = μ² I",
                residual_text(&self.r_trace(&self.r_inv, 2).sub(f, &self.identity(1).scale(f, &m2))),
            ));
        }
        Ok(out)
    }

    /// `D_{R_f} = D_{F^{-1}} (D_{R^{-1}})^{-1} D_F` for the twisted matrix of the pair `{self, F}`.
    pub fn twisted_d(&self, fm: &RMatrix<F>) -> Result<Operator<F::Elem>, RMatrixError> {
        let f = &self.field;
        let df_inv = fm.c.inverse(f).map_err(|_| RMatrixError::NotStrict)?;
        Ok(Operator::product(f, [&df_inv, &self.c, &fm.d]))
    }
}

impl QRMatrix {
    /// The standard `Sp(2k)` R-matrix with `μ = -q^{-1-2k}`.
    pub fn standard_sp(k: usize) -> Self {
        assert!(k >= 1, "k must be positive");
        let r = standard_sp_r(k);
        let ext = Extent::of_operator(&r);
        let mu = sp_mu(k);
        Self::new(QField, r, Some(mu), ext).expect("standard R-matrix is skew invertible")
    }

    /// The flip `P` as an R-matrix (no BMW data).
    pub fn flip(n: usize) -> Self {
        Self::new(QField, QOperator::flip(&QField, n), None, Extent::ZERO).expect("P is skew invertible")
    }

    /// Reduction of every operator modulo a prime point.
    pub fn reduce(&self, pt: &PrimePoint) -> Result<RMatrix<ModField>, RMatrixError> {
        let g = ModField::new(*pt);
        let bmw = match &self.bmw {
            None => None,
            Some(b) => Some(Bmw { mu: b.mu.clone(), k: b.k.reduce_mod(pt)?, extent_k: b.extent_k }),
        };
        Ok(RMatrix {
            field: g,
            n: self.n,
            r: self.r.reduce_mod(pt)?,
            r_inv: self.r_inv.reduce_mod(pt)?,
            psi: self.psi.reduce_mod(pt)?,
            d: self.d.reduce_mod(pt)?,
            c: self.c.reduce_mod(pt)?,
            bmw,
            extent_r: self.extent_r,
        })
    }

    /// Closed-form `K^{(st)}` for comparison with the computed `K`.
    pub fn standard_sp_k(k: usize) -> QOperator {
        let n = 2 * k;
        let mut e = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let c = QScalar::q_pow(-(rho(k, i) + rho(k, j))).mul(&QScalar::from_int(eps(k, i) * eps(k, prime(k, j))));
                e.push((i * n + prime(k, i), j * n + prime(k, j), c));
            }
        }
        QOperator::from_entries(&QField, n, 2, e)
    }

    /// Closed-form `D_{R^{(st)}} = diag(q^{-(2k+2ρ_i+1)})`.
    pub fn standard_sp_d(k: usize) -> QOperator {
        QOperator::diagonal(&QField, (0..2 * k).map(|i| QScalar::q_pow(-(2 * k as i32 + 2 * rho(k, i) + 1))).collect())
    }
}

/// `μ = -q^{-1-2k}`.
pub fn sp_mu(k: usize) -> QScalar {
    QScalar::q_pow(-1 - 2 * k as i32).neg()
}

/// `(q-μ)(q^{-1}+μ)/(q-q^{-1})`.
pub fn tr_r_identity(mu: &QScalar) -> QScalar {
    QScalar::q().sub(mu).mul(&QScalar::q_pow(-1).add(mu)).div(&lambda())
}

/// `δ_i = -q^{i-1}(μ+q^{1-2i})(μ²-q^{4-2i}) / ((μ+q^{3-2i})(q-q^{-1}) i_q)`.
pub fn delta(mu: &QScalar, i: usize) -> Result<QScalar, RMatrixError> {
    let i32_ = i as i32;
    let num = QScalar::q_pow(i32_ - 1)
        .mul(&mu.add(&QScalar::q_pow(1 - 2 * i32_)))
        .mul(&mu.mul(mu).sub(&QScalar::q_pow(4 - 2 * i32_)))
        .neg();
    let den = mu.add(&QScalar::q_pow(3 - 2 * i32_)).mul(&lambda()).mul(&q_int(i as i64));
    num.try_div(&den).map_err(|_| RMatrixError::Guard { level: i, what: "δ_i denominator vanishes".into() })
}

// 0-based versions of the index data: i' , ε_i, ρ_i.
fn prime(k: usize, i: usize) -> usize {
    2 * k - 1 - i
}

fn eps(k: usize, i: usize) -> i64 {
    if i < k {
        1
    } else {
        -1
    }
}

fn rho(k: usize, i: usize) -> i32 {
    if i < k {
        k as i32 - i as i32
    } else {
        -rho(k, prime(k, i))
    }
}

/// Assembles the standard symplectic R-matrix on `(ℚ(q)^{2k})^{⊗2}`.
///
/// The second sum carries `E_{i'j} ⊗ E_{ij'}` over `j < i`.
pub fn standard_sp_r(k: usize) -> QOperator {
    let n = 2 * k;
    let lam = lambda();
    // E_ab ⊗ E_cd sits at row (a,c), column (b,d).
    let unit = |a: usize, b: usize, c: usize, d: usize| (a * n + c, b * n + d);
    let mut e = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let ex = (i == j) as i32 - (j == prime(k, i)) as i32;
            let (r, c) = unit(i, j, j, i);
            e.push((r, c, QScalar::q_pow(ex)));
        }
    }
    for i in 0..n {
        for j in 0..i {
            let (r, c) = unit(j, j, i, i);
            e.push((r, c, lam.clone()));
            let coef = QScalar::q_pow(rho(k, i) - rho(k, j)).mul(&QScalar::from_int(eps(k, i) * eps(k, j))).mul(&lam).neg();
            let (r, c) = unit(prime(k, i), j, i, prime(k, j));
            e.push((r, c, coef));
        }
    }
    QOperator::from_entries(&QField, n, 2, e)
}

/// Antisymmetrizer or symmetrizer tower; `ops[i-1]` has arity `i`.
#[derive(Clone, Debug)]
pub struct Tower<E> {
    pub plus: bool,
    pub ops: Vec<Operator<E>>,
    pub extents: Vec<Extent>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Height {
    pub k: usize,
    pub tag: Option<String>,
    /// Upper bound on the `q`-degree span of the vanishing operator's entries.
    pub degree_bound: u64,
}

/// Twist relations `R_1F_2F_1 = F_2F_1R_2` and `R_2F_1F_2 = F_1F_2R_1`.
pub fn check_compatible<F: Field>(r: &RMatrix<F>, fm: &RMatrix<F>) -> Vec<Outcome> {
    let f = &r.field;
    if r.n != fm.n {
        return vec![Outcome::fail("twist relations", "dimension mismatch")];
    }
    let (r1, r2, f1, f2) = (r.r_at(1, 3), r.r_at(2, 3), fm.r_at(1, 3), fm.r_at(2, 3));
    let a = Operator::product(f, [&r1, &f2, &f1]).sub(f, &Operator::product(f, [&f2, &f1, &r2]));
    let b = Operator::product(f, [&r2, &f1, &f2]).sub(f, &Operator::product(f, [&f1, &f2, &r1]));
    vec![
        Outcome::from_residual("twist R1F2F1=F2F1R2", residual_text(&a)),
        Outcome::from_residual("twist R2F1F2=F1F2R1", residual_text(&b)),
    ]
}

/// `F^{-1} R F`.
pub fn twist<F: Field>(r: &RMatrix<F>, fm: &RMatrix<F>) -> Operator<F::Elem> {
    Operator::product(&r.field, [&fm.r_inv, &r.r, &fm.r])
}

/// `G_1 = Tr_(23) K_2 F_1^{-1} F_2^{-1}` and `G_1^{-1} = Tr_(23) F_2 F_1 K_2`;
/// fails if their product is not the identity.
pub fn compute_g<F: Field>(r: &RMatrix<F>, fm: &RMatrix<F>) -> Result<(Operator<F::Elem>, Operator<F::Elem>), RMatrixError> {
    let f = &r.field;
    let k2 = r.k_at(2, 3)?;
    let g = Operator::product(f, [&k2, &fm.r_inv_at(1, 3), &fm.r_inv_at(2, 3)]).partial_trace_many(f, &[2, 3])?;
    let gi = Operator::product(f, [&fm.r_at(2, 3), &fm.r_at(1, 3), &k2]).partial_trace_many(f, &[2, 3])?;
    if g.compose(f, &gi) != r.identity(1) {
        return Err(RMatrixError::Guard { level: 0, what: "G·G^{-1} ≠ I".into() });
    }
    Ok((g, gi))
}

/// First nonzero entry of a residual, in text form.
pub fn residual_text<E: Clone + PartialEq + std::fmt::Display>(x: &Operator<E>) -> Option<String> {
    x.first_nonzero().map(|(r, c, v)| {
        let show = |d: Vec<usize>| d.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(",");
        format!("[{}][{}] = {}", show(x.digits(r)), show(x.digits(c)), v)
    })
}

/// Failure probability bound for a zero test repeated at independent points:
/// `Π degree / p`.
pub fn failure_bound(degree: u64, points: &[PrimePoint]) -> f64 {
    points.iter().map(|pt| (degree.max(1) as f64) / (pt.p as f64)).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qs(e: i32) -> QScalar {
        QScalar::q_pow(e)
    }

    #[test]
    fn k1_has_five_terms() {
        let r = standard_sp_r(1);
        let f = QField;
        assert_eq!(r.nnz(), 5);
        let at = |a: usize, b: usize, c: usize, d: usize| r.get(&f, a * 2 + c, b * 2 + d);
        assert_eq!(at(0, 0, 0, 0), qs(1));
        assert_eq!(at(1, 1, 1, 1), qs(1));
        assert_eq!(at(0, 1, 1, 0), qs(-1));
        assert_eq!(at(1, 0, 0, 1), qs(-1));
        assert_eq!(at(0, 0, 1, 1), qs(1).sub(&qs(-3)));
    }

    #[test]
    fn k1_minimal_polynomial_is_quadratic() {
        let ctx = QRMatrix::standard_sp(1);
        let f = QField;
        let id = ctx.identity(2);
        let a = id.scale(&f, &qs(1)).sub(&f, &ctx.r);
        let b = id.scale(&f, &qs(-3)).add(&f, &ctx.r);
        assert!(a.compose(&f, &b).is_zero());
        assert!(!a.is_zero() && !b.is_zero());
    }

    #[test]
    fn k_and_d_match_closed_forms() {
        for k in 1..=2 {
            let ctx = QRMatrix::standard_sp(k);
            assert_eq!(ctx.bmw.as_ref().unwrap().k, QRMatrix::standard_sp_k(k), "K at k={k}");
            assert_eq!(ctx.d, QRMatrix::standard_sp_d(k), "D at k={k}");
        }
    }

    #[test]
    fn k_partial_trace_k1() {
        let k = QRMatrix::standard_sp_k(1);
        let t = k.partial_trace(&QField, 2).unwrap();
        assert_eq!(t, QOperator::diagonal(&QField, vec![qs(-2).neg(), qs(2).neg()]));
    }

    #[test]
    fn delta_one_is_trace_of_identity() {
        let mu = sp_mu(2);
        assert_eq!(delta(&mu, 1).unwrap(), tr_r_identity(&mu));
        for k in 1..=3 {
            assert!(delta(&sp_mu(k), k + 1).unwrap().is_zero());
        }
    }

    #[test]
    fn flip_fails_cubic() {
        let p = QRMatrix::new(QField, QOperator::flip(&QField, 2), Some(sp_mu(1)), Extent::ZERO).unwrap();
        let out = p.check_bmw().unwrap();
        assert!(!out[0].ok());
    }
}
