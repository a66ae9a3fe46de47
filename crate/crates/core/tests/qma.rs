use qch_core::qma::calibration as cal;
use qch_core::qma::ncpoly::{in_span, same_span, NCMatrix};
use qch_core::qma::{Pair, QAlgebra};
use qch_core::scalar::{QField, QScalar};
use qch_core::tensor::{Operator, QOperator};

fn sp2_parent_with(a: &QAlgebra, pi: &QOperator) -> NCMatrix<QScalar> {
    let f = QField;
    let m = a.m();
    let a1 = a.a_i(1).unwrap();
    m.sub(&f, &NCMatrix::identity_times(&f, 2, 1, &a1).scale(&f, &QScalar::q()))
        .add(&f, &m.apply_map(&f, pi).scale(&f, &QScalar::q_pow(2)))
}

#[test]
fn block_maps_satisfy_their_identities() {
    for (name, lhs, rhs) in cal::block_identities() {
        assert_eq!(lhs, rhs, "{name}");
    }
}

#[test]
fn sp2_re_relations_and_g_match_printed_forms() {
    let f = QField;
    let a = QAlgebra::standard(1, Pair::Re).unwrap();
    assert!(same_span(&f, a.relations(), &cal::sp2_re_relations()));
    let g = a.g().unwrap();
    let [first, second] = cal::sp2_re_g_printed();
    assert_eq!(g, first);
    assert!(in_span(&f, &g.sub(&f, &second), a.relations()));
}

#[test]
fn sp2_phi_matches_and_printed_pi_does_not() {
    let a = QAlgebra::standard(1, Pair::Rtt).unwrap();
    assert_eq!(a.maps.phi, cal::sp2_phi_printed());
    assert_eq!(a.a_i(1).unwrap(), cal::sp2_a1_printed());
    assert!(sp2_parent_with(&a, &a.maps.pi).is_zero());
    // The displayed π(T) differs from the trace formula and breaks the identity.
    assert_ne!(a.maps.pi, cal::sp2_pi_printed());
    assert!(!sp2_parent_with(&a, &cal::sp2_pi_printed()).is_zero());
}

#[test]
fn sp4_block_maps_match_printed_forms() {
    let f = QField;
    let a = QAlgebra::standard(2, Pair::Rtt).unwrap();
    assert_eq!(a.maps.xi, cal::sp4_xi_printed());
    assert_eq!(a.maps.phi, cal::sp4_phi_printed());
    assert_eq!(a.maps.pi, cal::sp4_pi_printed());
    assert_eq!(a.maps.xi_inv, cal::sp4_xi_printed().bar());
    assert_eq!(a.maps.phi_inv, cal::sp4_phi_printed().bar());
    let id = Operator::identity(&f, 4, 2);
    assert_eq!(cal::sp4_phi_printed().compose(&f, &cal::sp4_phi_printed().bar()), id);
}

#[test]
fn sp4_eps_match_printed_forms_modulo_relations() {
    let f = QField;
    let a = QAlgebra::standard(2, Pair::Rtt).unwrap();
    let eps = a.eps().unwrap();
    assert_eq!(eps[1], cal::sp4_eps1_printed());
    // ε₂ agrees only after using the quadratic relations.
    assert_ne!(eps[2], cal::sp4_eps2_printed());
    assert!(in_span(&f, &eps[2].sub(&f, &cal::sp4_eps2_printed()), a.relations()));
}

#[test]
fn sp4_appendix_relations_span_the_defining_relations() {
    let f = QField;
    let a = QAlgebra::standard(2, Pair::Rtt).unwrap();
    let printed: Vec<_> = qch_core::qma::appendix::relations().into_iter().map(|r| r.poly).collect();
    assert!(same_span(&f, a.relations(), &printed));
    assert_eq!(qch_core::qma::ncpoly::span_rank(&f, &printed), 130);
    // The displayed sign of the λ² term in [B21, C12] is inconsistent.
    assert!(!in_span(&f, &qch_core::qma::appendix::bc_commutator_as_printed().poly, a.relations()));
}

#[test]
fn sp4_g_matches_both_printed_forms_modulo_relations() {
    let f = QField;
    let a = QAlgebra::standard(2, Pair::Rtt).unwrap();
    let g = a.g().unwrap();
    for form in qch_core::qma::appendix::g_forms() {
        assert!(in_span(&f, &g.sub(&f, &form), a.relations()));
    }
}
