use qch_core::rmatrix::{check_compatible, compute_g, failure_bound, sp_mu, twist, QRMatrix, RMatrix};
use qch_core::scalar::{Field, PrimePoint, QField, QScalar};
use qch_core::tensor::{Operator, QOperator};

#[test]
fn standard_family_is_bmw() {
    for k in 1..=2 {
        let ctx = QRMatrix::standard_sp(k);
        assert!(ctx.braid_residual().is_zero(), "YBE k={k}");
        for o in ctx.check_bmw().unwrap() {
            assert!(o.ok(), "k={k}: {o:?}");
        }
        for o in ctx.check_traces().unwrap() {
            assert!(o.ok(), "k={k}: {o:?}");
        }
    }
}

#[test]
fn k2_cubic_with_designated_mu() {
    let ctx = QRMatrix::standard_sp(2);
    assert_eq!(ctx.mu().unwrap(), &QScalar::q_pow(-5).neg());
}

#[test]
fn heights_k1_k2() {
    for k in 1..=2 {
        let ctx = QRMatrix::standard_sp(k);
        let h = ctx.height(k + 2).unwrap();
        assert_eq!(h.k, k);
        assert_eq!(h.tag.as_deref(), Some(format!("Sp({})", 2 * k).as_str()));
    }
}

#[test]
fn a2_vanishes_at_k1() {
    let ctx = QRMatrix::standard_sp(1);
    let t = ctx.tower(false, 2).unwrap();
    assert!(t.ops[1].is_zero());
}

#[test]
fn towers_idempotent_and_traces_k2() {
    let ctx = QRMatrix::standard_sp(2);
    let f = QField;
    let a = ctx.tower(false, 3).unwrap();
    let s = ctx.tower(true, 3).unwrap();
    for i in 1..=3 {
        let x = &a.ops[i - 1];
        assert_eq!(&x.compose(&f, x), x, "a^({i}) idempotent");
        let y = &s.ops[i - 1];
        assert_eq!(&y.compose(&f, y), y, "s^({i}) idempotent");
    }
    for i in 2..=3 {
        let t = ctx.r_trace(&a.ops[i - 1], i);
        let expect = a.ops[i - 2].scale(&f, &ctx.delta(i).unwrap());
        assert_eq!(t, expect, "spec1 i={i}");
    }
    let big = ctx.r_trace_many(&a.ops[1], &[1, 2]).trace(&f);
    assert_eq!(big, ctx.big_delta(2).unwrap());
}

#[test]
fn pairs_and_g() {
    for k in 1..=2 {
        let r = QRMatrix::standard_sp(k);
        let p = QRMatrix::flip(2 * k);
        assert!(check_compatible(&r, &p).iter().all(|o| o.ok()));
        assert!(check_compatible(&r, &r).iter().all(|o| o.ok()));
        let (g, gi) = compute_g(&r, &p).unwrap();
        assert_eq!(g, r.identity(1));
        assert_eq!(gi, r.identity(1));
        let (g, gi) = compute_g(&r, &r).unwrap();
        assert_eq!(g.compose(&QField, &gi), r.identity(1));
        let f = QField;
        let pr = twist(&r, &p);
        assert_eq!(pr, Operator::product(&f, [&p.r, &r.r, &p.r]));
        let rf = RMatrix::new(QField, pr, Some(sp_mu(k)), r.extent_r).unwrap();
        assert!(rf.braid_residual().is_zero());
        assert!(rf.check_bmw().unwrap()[0].ok());
    }
}

#[test]
fn height_k3_modular() {
    let ctx = QRMatrix::standard_sp(3);
    let pts = PrimePoint::sample_many(11, 3, 16, ctx.mu().unwrap());
    for pt in &pts {
        let m = ctx.reduce(pt).unwrap();
        let h = m.height(4).unwrap();
        assert_eq!(h.k, 3);
        assert!(failure_bound(h.degree_bound, &pts) < 1e-12);
    }
}

#[test]
fn k_rank_one_k3() {
    let ctx = QRMatrix::standard_sp(3);
    let k: &QOperator = ctx.k_op().unwrap();
    assert_eq!(k.rank(&QField), 1);
    let _ = QField.one();
}
