use proptest::prelude::*;
use qch_core::ideal::{certify_exact, certify_modular, Ideal, Membership, Method, WordOrder};
use qch_core::qma::ncpoly::{parse_ncpoly, NCPoly};
use qch_core::qma::{Algebra, Pair, QAlgebra};
use qch_core::rmatrix::sp_mu;
use qch_core::scalar::{Field, ModField, PrimePoint, QField, QScalar};

fn points(k: usize, seed: u64) -> Vec<PrimePoint> {
    PrimePoint::sample_many(seed, 3, 2 * k as u32 + 2, &sp_mu(k))
}

fn exact_ideal(k: usize, pair: Pair) -> (QAlgebra, Ideal<QField>) {
    let a = QAlgebra::standard(k, pair).unwrap();
    let i = Ideal::of_algebra(&a).unwrap();
    (a, i)
}

fn reduce(p: &NCPoly<QScalar>, pt: &PrimePoint) -> NCPoly<u64> {
    p.convert(&ModField::new(*pt), |c| c.reduce(pt).unwrap())
}

#[test]
fn sp2_degree_two_rank_is_six() {
    let (_, mut i) = exact_ideal(1, Pair::Rtt);
    let s = i.stats(2, Some(Method::Direct)).unwrap();
    assert_eq!((s.words, s.rank), (16, 6));
    assert_eq!(i.stats(2, Some(Method::Reduced)).unwrap().rank, 6);
}

#[test]
fn sp4_degree_two_rank_is_130_at_every_prime() {
    for pt in points(2, 3) {
        let a = Algebra::<ModField>::standard_mod(2, Pair::Rtt, &pt).unwrap();
        let mut i = Ideal::of_algebra(&a).unwrap();
        assert_eq!(i.stats(2, None).unwrap().rank, 130);
    }
}

#[test]
fn sp2_degree_three_rank_is_stable_and_methods_agree() {
    let (_, mut exact) = exact_ideal(1, Pair::Rtt);
    let r = exact.stats(3, Some(Method::Direct)).unwrap().rank;
    assert_eq!(exact.stats(3, Some(Method::Reduced)).unwrap().rank, r);
    for pt in points(1, 11) {
        let a = Algebra::<ModField>::standard_mod(1, Pair::Rtt, &pt).unwrap();
        let mut i = Ideal::of_algebra(&a).unwrap();
        assert_eq!(i.stats(3, Some(Method::Direct)).unwrap().rank, r);
        assert_eq!(i.stats(3, Some(Method::Reduced)).unwrap().rank, r);
    }
}

#[test]
fn sp2_ch_entries_are_members_with_witnesses() {
    for pair in [Pair::Rtt, Pair::Re] {
        let (a, mut i) = exact_ideal(1, pair);
        let ch = a.ch_lhs().unwrap();
        assert!(!ch.is_zero());
        for p in ch.entries() {
            let c = certify_exact(&mut i, p, true).unwrap();
            assert_eq!(c.status, Membership::Member, "{pair}: {}", p.display(2));
            assert!(c.witness.unwrap().verify(p, i.relations()));
        }
    }
}

#[test]
fn plain_commutator_is_not_a_member() {
    let (_, mut i) = exact_ideal(1, Pair::Rtt);
    let p = parse_ncpoly("1 * M[1,1] M[1,2] + -1 * M[1,2] M[1,1]", 2).unwrap();
    let c = certify_exact(&mut i, &p, true).unwrap();
    assert_eq!(c.status, Membership::NonMember);
    assert!(c.residual.is_some());
    assert!(certify_exact(&mut i, &NCPoly::zero(), true).unwrap().is_member());
}

#[test]
fn normal_order_of_the_commutator_pair() {
    let (_, mut i) = exact_ideal(1, Pair::Rtt);
    let p = parse_ncpoly("1 * M[2,2] M[1,1]", 2).unwrap();
    let nf = i.normal_order(&p).unwrap();
    let expect = parse_ncpoly("1 * M[1,1] M[2,2] + (q^-2 - q^2) * M[1,2] M[2,1]", 2).unwrap();
    assert_eq!(nf, expect);
    assert_eq!(i.normal_order(&nf).unwrap(), nf);
}

#[test]
fn witness_serializes_as_tuples() {
    let (a, mut i) = exact_ideal(1, Pair::Rtt);
    let p = a.relations()[0].scale(&QField, &QScalar::q_pow(3));
    let w = i.witness(&p).unwrap().unwrap();
    let json = serde_json::to_value(&w).unwrap();
    let first = &json.as_array().unwrap()[0];
    assert_eq!(first.as_array().unwrap().len(), 4);
    assert!(first[2].is_u64());
}

#[test]
fn sp4_methods_agree_in_degree_three() {
    let pt = points(2, 5)[0];
    let a = Algebra::<ModField>::standard_mod(2, Pair::Rtt, &pt).unwrap();
    let mut i = Ideal::of_algebra(&a).unwrap();
    let direct = i.stats(3, Some(Method::Direct)).unwrap();
    let reduced = i.stats(3, Some(Method::Reduced)).unwrap();
    assert_eq!(direct.rank, reduced.rank);
    // Products of a relation with generators are members; words are not.
    let f = ModField::new(pt);
    let x = NCPoly::generator(&f, 3).mul(&f, &a.relations()[7]);
    assert!(i.contains_with(&x, Some(Method::Direct)).unwrap());
    assert!(i.contains_with(&x, Some(Method::Reduced)).unwrap());
    let w = NCPoly::monomial(&f, f.one(), vec![1, 2, 3]);
    assert!(!i.contains_with(&w, Some(Method::Reduced)).unwrap());
}

#[test]
fn modular_certificate_has_small_bound() {
    let pts = points(1, 9);
    let (a, _) = exact_ideal(1, Pair::Rtt);
    let ch = a.ch_lhs().unwrap();
    let mut ideals: Vec<_> = pts.iter().map(|pt| Ideal::of_algebra(&Algebra::<ModField>::standard_mod(1, Pair::Rtt, pt).unwrap()).unwrap()).collect();
    let per: Vec<_> = pts.iter().map(|pt| reduce(ch.get(0, 0), pt)).collect();
    let c = certify_modular(&mut ideals, &per, &pts).unwrap();
    assert_eq!(c.status, Membership::ProbableMember);
    assert!(c.failure_bound.unwrap() < 1e-12);
}

#[test]
fn word_order_columns_roundtrip() {
    let o = WordOrder::standard(4);
    for w in [vec![0u8, 15, 3], vec![6, 6], vec![15]] {
        assert_eq!(o.word_at(w.len(), o.column(&w)), w);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn normal_order_is_congruent(terms in prop::collection::vec((prop::collection::vec(0u8..4, 1..=3), -3i64..=3), 1..6)) {
        let (_, mut i) = exact_ideal(1, Pair::Rtt);
        let f = QField;
        let mut p = NCPoly::zero();
        for (w, c) in terms {
            p.add_term(&f, w, QScalar::from_int(c));
        }
        let nf = i.normal_order(&p).unwrap();
        prop_assert!(i.contains(&p.sub(&f, &nf)).unwrap());
        prop_assert_eq!(i.normal_order(&nf).unwrap(), nf);
    }
}
