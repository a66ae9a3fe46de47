use num_rational::BigRational;
use qch_core::classical::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn omega_shapes() {
    assert_eq!(omega(1), RationalMatrix::from_ints(&[&[0, 1], &[-1, 0]]));
    for k in 1..=4 {
        let o = omega(k);
        assert_eq!(o.transpose(), o.neg());
        assert_eq!(o.mul(&o), RationalMatrix::identity(2 * k).neg());
    }
}

#[test]
fn trivial_sample_is_diagonal() {
    let k = 2;
    let g = r(7, 3);
    let (i, z) = (RationalMatrix::identity(k), RationalMatrix::zero(k, k));
    let s = SimilitudeSample::new(i.clone(), z.clone(), z.clone(), g.clone()).unwrap();
    let m = s.matrix();
    assert_eq!(m, RationalMatrix::from_blocks(&i, &z, &z, &i.scale(&g)));
    let (left, right) = invariance_residuals(&m, &g);
    assert!(left.is_zero() && right.is_zero());
}

#[test]
fn constructor_rejects_non_self_dual_blocks() {
    let a = RationalMatrix::identity(2);
    let x = RationalMatrix::from_ints(&[&[1, 2], &[3, 4]]);
    let z = RationalMatrix::zero(2, 2);
    assert_eq!(SimilitudeSample::new(a.clone(), x.clone(), z.clone(), r(1, 1)).unwrap_err(), ClassicalError::NotSelfDual("X"));
    assert_eq!(SimilitudeSample::new(a, z.clone(), x, r(1, 1)).unwrap_err(), ClassicalError::NotSelfDual("Y"));
    assert_eq!(SimilitudeSample::new(z.clone(), z.clone(), z, r(1, 1)).unwrap_err(), ClassicalError::SingularA);
}

#[test]
fn pi_is_blockwise_and_involutive() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let s = sample_similitude(2, &r(-5, 2), &mut rng).unwrap();
    let m = s.matrix();
    assert_eq!(classical_pi(&m), classical_pi_blocks(&m));
    assert_eq!(classical_pi(&classical_pi(&m)), m);
    let m1 = RationalMatrix::from_ints(&[&[1, 2], &[3, 4]]);
    assert_eq!(classical_pi(&m1), RationalMatrix::from_ints(&[&[4, -2], &[-3, 1]]));
}

#[test]
fn random_k2_sample_satisfies_everything() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let g = r(7, 3);
    let s = sample_similitude(2, &g, &mut rng).unwrap();
    let m = s.matrix();
    assert_eq!(s.factorized(), m);
    let (left, right) = invariance_residuals(&m, &g);
    assert!(left.is_zero() && right.is_zero());
    assert_eq!(m.det(), &g * &g);
    let eps = m.wedge_traces();
    assert_eq!(eps[0], r(1, 1));
    assert_eq!(eps[1], m.trace());
    assert_eq!(eps[4], m.det());
    assert!(classical_parent_ch(&m).is_zero());
}

#[test]
fn degenerate_multiplier() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let zero = r(0, 1);
    for k in 1..=3 {
        let m = sample_similitude(k, &zero, &mut rng).unwrap().matrix();
        let (left, right) = invariance_residuals(&m, &zero);
        assert!(left.is_zero(), "k={k}");
        assert!(right.is_zero(), "k={k}");
        assert!(m.det() == zero);
        assert!(classical_parent_ch(&m).is_zero());
    }
}

#[test]
fn non_similitude_fails_the_parent_identity() {
    let m = RationalMatrix::from_ints(&[&[1, 2, 0, 1], &[0, 1, 3, 0], &[1, 0, 2, 0], &[0, 0, 1, 1]]);
    assert!(!classical_parent_ch(&m).is_zero());
}

#[test]
fn full_suite_small() {
    for k in 1..=3 {
        let out = classical_suite(k, 20, None, 7).unwrap();
        assert!(out.iter().all(|o| o.ok()), "{:?}", out.iter().find(|o| !o.ok()));
    }
    let out = classical_suite(2, 10, Some(&r(0, 1)), 1).unwrap();
    assert!(out.iter().all(|o| o.ok()));
}

#[test]
fn parses_rationals() {
    assert_eq!(parse_rational("-7/3"), Some(r(-7, 3)));
    assert_eq!(parse_rational("4"), Some(r(4, 1)));
    assert_eq!(parse_rational("1/0"), None);
    assert_eq!(parse_rational("x"), None);
}
