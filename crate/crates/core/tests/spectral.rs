use proptest::prelude::*;
use qch_core::scalar::QScalar;
use qch_core::spectral::{factor_expansion, pi_hom, poly_suite, sym_identities, RationalSuite, SpectralError, SpectralPoly, Symbol};

fn mono(k: usize, e: &[u32]) -> SpectralPoly {
    SpectralPoly::term(k, e.to_vec(), QScalar::one())
}

#[test]
fn reduce_examples() {
    assert_eq!(mono(1, &[0, 1, 1]).reduce(), mono(1, &[2, 0, 0]));
    assert_eq!(mono(1, &[0, 2, 1]).reduce(), mono(1, &[2, 1, 0]));
    assert_eq!(mono(1, &[1, 1, 0]).reduce(), mono(1, &[1, 1, 0]));
    // k=2 pairs are (1,4) and (2,3)
    assert_eq!(mono(2, &[0, 1, 1, 1, 2]).reduce(), mono(2, &[4, 0, 0, 0, 1]));
}

#[test]
fn pi_hom_generators() {
    assert_eq!(pi_hom(2, Symbol::G).unwrap(), mono(2, &[2, 0, 0, 0, 0]));
    let a1 = pi_hom(2, Symbol::A(1)).unwrap();
    let sum = (1..=4).fold(SpectralPoly::zero(2), |acc, i| acc.add(&SpectralPoly::var(2, i)));
    assert_eq!(a1, sum);
    assert_eq!(pi_hom(1, Symbol::Eps(3)), Err(SpectralError::IndexRange { k: 1, index: 3 }));
    assert_eq!(pi_hom(0, Symbol::G), Err(SpectralError::ZeroRank));
}

#[test]
fn elementary_identities_hold() {
    for k in 1..=3 {
        for i in 0..=2 * k + 2 {
            for o in sym_identities(k, i) {
                assert!(o.ok(), "{}: {:?}", o.name, o.residual);
            }
        }
    }
}

#[test]
fn k1_factorization() {
    // (M − qν₁)(M − qν₂) = M² − q(ν₁+ν₂)M + q²ν₀²
    let c = factor_expansion(1, &[1, 2]);
    let q = QScalar::q();
    let lin = SpectralPoly::var(1, 1).add(&SpectralPoly::var(1, 2)).scale(&q.neg());
    assert_eq!(c[1], lin);
    assert_eq!(c[2], mono(1, &[2, 0, 0]).scale(&q.mul(&q)));
}

#[test]
fn symbolic_suite_passes() {
    for k in 1..=3 {
        for o in poly_suite(k, 6, 7).unwrap() {
            assert!(o.ok(), "{}: {:?}", o.name, o.residual);
        }
    }
}

#[test]
fn rational_suite_passes() {
    for k in 1..=2 {
        let s = RationalSuite::new(k, 6, 11);
        for c in s.run_checks() {
            assert!(c.failure.is_none(), "{}: {:?}", c.name, c.failure);
            assert_eq!(c.points, RationalSuite::point_count(k, 6));
        }
    }
}

#[test]
fn a_wrong_image_is_caught() {
    // perturbing the multiplier breaks the factorized form
    let k = 1;
    let eps1 = pi_hom(k, Symbol::Eps(1)).unwrap();
    let c = factor_expansion(k, &[1, 2]);
    assert_ne!(c[1], eps1.scale(&QScalar::q()));
    assert_eq!(c[1], eps1.scale(&QScalar::q().neg()));
}

fn poly() -> impl Strategy<Value = SpectralPoly> {
    prop::collection::vec((prop::collection::vec(0u32..3, 5), -3i64..=3), 1..5).prop_map(|ts| {
        ts.into_iter().fold(SpectralPoly::zero(2), |acc, (e, c)| acc.add(&SpectralPoly::term(2, e, QScalar::from_int(c))))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn reduce_is_idempotent_and_multiplicative(a in poly(), b in poly()) {
        let ra = a.reduce();
        prop_assert_eq!(ra.reduce(), ra.clone());
        prop_assert_eq!(a.mul(&b).reduce(), ra.mul(&b.reduce()).reduce());
    }
}
