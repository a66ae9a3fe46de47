use qch_core::qma::Pair;
use qch_core::report::{Outcome, Status};
use qch_core::suites::*;

fn assert_all_ok(out: &[Outcome]) {
    assert!(!out.is_empty());
    for o in out {
        assert!(o.ok(), "{} failed: {:?}", o.name, o.residual);
    }
}

const ALL: [QCheck; 5] = [QCheck::Parent, QCheck::Ch, QCheck::Cutting, QCheck::Recursions, QCheck::Structure];

#[test]
fn sp2_suites_pass_for_both_pairs() {
    for pair in [Pair::Rtt, Pair::Re] {
        let mut s = Session::new(1, pair, Settings::new(1, 7, 3)).unwrap();
        let out = qma_suite(&mut s, &ALL);
        assert_all_ok(&out);
        let parent = out.iter().find(|o| o.name.ends_with("parent identity (literal)")).unwrap();
        assert_eq!(parent.status, Status::Pass);
    }
}

#[test]
fn sp2_star_product_is_associative_and_pi_star_contracts() {
    let mut s = Session::new(1, Pair::Rtt, Settings::new(1, 7, 3)).unwrap();
    for t in [Target::StarAssoc, Target::StarPower(3), Target::PiStarM, Target::B11] {
        let o = s.membership(&t);
        assert!(o.ok(), "{}: {:?}", o.name, o.residual);
    }
}

#[test]
fn ch_is_not_literally_zero() {
    // it holds only modulo the relations
    let mut s = Session::new(1, Pair::Rtt, Settings::new(1, 7, 3)).unwrap();
    let o = s.literal_zero(&Target::Ch);
    assert_eq!(o.status, Status::Fail);
}

#[test]
fn calibration_passes() {
    assert_all_ok(&calibration_suite());
}

#[test]
fn rmatrix_small_ranks() {
    let checks: Vec<RCheck> = "ybe,bmw,height".split(',').map(|c| c.parse().unwrap()).collect();
    for k in 1..=2 {
        assert_all_ok(&rmatrix_suite(k, &checks, &Settings::new(k, 7, 3)));
    }
}

#[test]
fn sp2_ideal_stats_are_stable_across_primes() {
    let out = ideal_suite(1, Pair::Rtt, &[2, 3], &Settings::new(1, 7, 3));
    assert_all_ok(&out);
}

#[test]
fn unknown_checks_are_rejected() {
    assert!("nope".parse::<RCheck>().is_err());
    assert!("nope".parse::<QCheck>().is_err());
}
