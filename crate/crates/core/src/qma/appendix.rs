//! The quadratic relations of the standard `Sp(4)` RTT algebra, transcribed
//! relation by relation in block notation `M = [[A, B], [C, D]]`, together
//! with the generator order and the two printed expressions for `g`.
//!
//! A generator is named by block letter, upper index, lower index: `"B21"`
//! is `B^2_1`, the entry in row 2, column 3 of `M`.

use super::ncpoly::{NCPoly, Word};
use crate::scalar::{lambda, q_int, QField, QScalar};

/// Generator id (`row·4 + col`, 0-based) of a block component such as `"C12"`.
pub fn gen(name: &str) -> u8 {
    let b = name.as_bytes();
    assert_eq!(b.len(), 3, "generator name {name}");
    let (up, low) = ((b[1] - b'1') as usize, (b[2] - b'1') as usize);
    assert!(up < 2 && low < 2, "generator name {name}");
    let (r0, c0) = match b[0] {
        b'A' => (0, 0),
        b'B' => (0, 2),
        b'C' => (2, 0),
        b'D' => (2, 2),
        _ => panic!("generator name {name}"),
    };
    ((r0 + up) * 4 + c0 + low) as u8
}

/// Block name of a generator id.
pub fn gen_name(id: u8) -> String {
    let (r, c) = (id as usize / 4, id as usize % 4);
    let block = match (r / 2, c / 2) {
        (0, 0) => 'A',
        (0, 1) => 'B',
        (1, 0) => 'C',
        _ => 'D',
    };
    format!("{block}{}{}", r % 2 + 1, c % 2 + 1)
}

/// Rank of every generator id in the order `D < C < B < A`, and
/// `X11 < X12 < X21 < X22` inside each block.
pub fn generator_order() -> Vec<u8> {
    let mut rank = vec![0u8; 16];
    let mut next = 0u8;
    for block in ['D', 'C', 'B', 'A'] {
        for name in ["11", "12", "21", "22"] {
            rank[gen(&format!("{block}{name}")) as usize] = next;
            next += 1;
        }
    }
    rank
}

fn q(e: i32) -> QScalar {
    QScalar::q_pow(e)
}

fn one() -> QScalar {
    QScalar::one()
}

fn lam() -> QScalar {
    lambda()
}

fn two() -> QScalar {
    q_int(2)
}

/// Builds `Σ c · X Y` from `(c, "X", "Y")` terms.
pub fn poly(terms: &[(QScalar, &str, &str)]) -> NCPoly<QScalar> {
    let mut p = NCPoly::zero();
    for (c, a, b) in terms {
        let w: Word = vec![gen(a), gen(b)];
        p.add_term(&QField, w, c.clone());
    }
    p
}

/// `XY - c·YX` plus extra terms.
fn qc(c: QScalar, x: &str, y: &str, extra: &[(QScalar, &str, &str)]) -> NCPoly<QScalar> {
    let mut t = vec![(one(), x, y), (c.neg(), y, x)];
    t.extend(extra.iter().cloned());
    poly(&t)
}

/// One transcribed relation with the group it is listed under.
#[derive(Clone, Debug)]
pub struct AppendixRelation {
    pub group: &'static str,
    pub poly: NCPoly<QScalar>,
}

/// The 120 permutation relations followed by the 10 invariance conditions.
pub fn relations() -> Vec<AppendixRelation> {
    let mut out = Vec::new();
    let mut push = |group: &'static str, p: NCPoly<QScalar>| out.push(AppendixRelation { group, poly: p });
    let is = [1usize, 2];

    for x in ['A', 'B', 'C', 'D'] {
        for i in is {
            push("block", qc(q(1), &format!("{x}{i}1"), &format!("{x}{i}2"), &[]));
        }
        for i in is {
            push("block", qc(q(1), &format!("{x}1{i}"), &format!("{x}2{i}"), &[]));
        }
        push("block", qc(one(), &format!("{x}21"), &format!("{x}12"), &[]));
        let (x11, x22, x12, x21) = (format!("{x}11"), format!("{x}22"), format!("{x}12"), format!("{x}21"));
        push("block", qc(one(), &x22, &x11, &[(lam(), &x12, &x21)]));
    }

    // Commutators.
    for i in is {
        push("commutator", qc(one(), &format!("A2{i}"), &format!("B1{i}"), &[]));
        push("commutator", qc(one(), &format!("A{i}2"), &format!("C{i}1"), &[]));
        push("commutator", qc(one(), &format!("B{i}2"), &format!("D{i}1"), &[]));
        push("commutator", qc(one(), &format!("C2{i}"), &format!("D1{i}"), &[]));
    }
    for i in is {
        for j in is {
            push("commutator", qc(one(), &format!("B{i}{j}"), &format!("C{i}{j}"), &[]));
        }
    }
    push("commutator", qc(one(), "B12", "C21", &[]));

    // q-commutators.
    for i in is {
        for j in is {
            for (x, y) in [('A', 'B'), ('A', 'C'), ('B', 'D'), ('C', 'D')] {
                push("q-commutator", qc(q(1), &format!("{x}{i}{j}"), &format!("{y}{i}{j}"), &[]));
            }
        }
    }
    for (x, y) in [("A21", "B12"), ("A12", "C21"), ("B12", "D21"), ("C21", "D12")] {
        push("q-commutator", qc(q(1), x, y, &[]));
    }
    for i in is {
        push("q-commutator", qc(q(1), &format!("B1{i}"), &format!("C2{i}"), &[]));
    }
    for i in is {
        push("q-commutator", qc(q(-1), &format!("B{i}2"), &format!("C{i}1"), &[]));
    }

    // q²-commutators.
    for i in is {
        push("q2-commutator", qc(q(2), &format!("A{i}1"), &format!("B{i}2"), &[]));
        push("q2-commutator", qc(q(2), &format!("A1{i}"), &format!("C2{i}"), &[]));
        push("q2-commutator", qc(q(2), &format!("B1{i}"), &format!("D2{i}"), &[]));
        push("q2-commutator", qc(q(2), &format!("C{i}1"), &format!("D{i}2"), &[]));
    }

    // Commutators with a ±λ term.
    let ml = lam().neg();
    for i in is {
        push("lambda-commutator", qc(one(), &format!("A1{i}"), &format!("B2{i}"), &[(ml.clone(), &format!("B1{i}"), &format!("A2{i}"))]));
        push("lambda-commutator", qc(one(), &format!("A{i}1"), &format!("C{i}2"), &[(ml.clone(), &format!("C{i}1"), &format!("A{i}2"))]));
        push("lambda-commutator", qc(one(), &format!("B{i}1"), &format!("D{i}2"), &[(ml.clone(), &format!("D{i}1"), &format!("B{i}2"))]));
        push("lambda-commutator", qc(one(), &format!("C1{i}"), &format!("D2{i}"), &[(ml.clone(), &format!("D1{i}"), &format!("C2{i}"))]));
    }
    for i in is {
        for j in is {
            push("lambda-commutator", qc(one(), &format!("A{i}{j}"), &format!("D{i}{j}"), &[(ml.clone(), &format!("C{i}{j}"), &format!("B{i}{j}"))]));
        }
    }
    push("lambda-commutator", qc(one(), "B22", "C11", &[(ml.clone(), "C21", "B12")]));
    push("lambda-commutator", qc(one(), "B11", "C22", &[(lam(), "C21", "B12")]));

    // q-commutators with a ±q^{±1}λ term.
    let mlq = lam().mul(&q(1)).neg();
    for i in is {
        let ip = 3 - i;
        push("q-lambda", qc(q(1), &format!("A{i}{i}"), &format!("B{ip}{ip}"), &[(mlq.clone(), "B12", "A21")]));
        push("q-lambda", qc(q(1), &format!("A{i}{i}"), &format!("C{ip}{ip}"), &[(mlq.clone(), "C21", "A12")]));
        push("q-lambda", qc(q(1), &format!("B{i}{i}"), &format!("D{ip}{ip}"), &[(mlq.clone(), "D21", "B12")]));
        push("q-lambda", qc(q(1), &format!("C{i}{i}"), &format!("D{ip}{ip}"), &[(mlq.clone(), "D12", "C21")]));
    }
    for i in is {
        push("q-lambda", qc(q(1), &format!("A1{i}"), &format!("D2{i}"), &[(mlq.clone(), &format!("C2{i}"), &format!("B1{i}"))]));
        push("q-lambda", qc(q(1), &format!("B2{i}"), &format!("C1{i}"), &[(mlq.clone(), &format!("C2{i}"), &format!("B1{i}"))]));
    }
    for i in is {
        push("q-lambda", qc(q(-1), &format!("B{i}1"), &format!("C{i}2"), &[(lam().mul(&q(-1)), &format!("C{i}1"), &format!("B{i}2"))]));
    }

    // q-commutators with a ±λ term.
    for i in is {
        push("q-lambda-plain", qc(q(1), &format!("A{i}1"), &format!("D{i}2"), &[(ml.clone(), &format!("C{i}1"), &format!("B{i}2"))]));
    }

    // q²-commutators with a ±q²λ term.
    let mlq2 = lam().mul(&q(2)).neg();
    for i in is {
        push("q2-lambda", qc(q(2), &format!("A{i}2"), &format!("B{i}1"), &[(mlq2.clone(), &format!("B{i}2"), &format!("A{i}1"))]));
        push("q2-lambda", qc(q(2), &format!("A2{i}"), &format!("C1{i}"), &[(mlq2.clone(), &format!("C2{i}"), &format!("A1{i}"))]));
        push("q2-lambda", qc(q(2), &format!("B2{i}"), &format!("D1{i}"), &[(mlq2.clone(), &format!("D2{i}"), &format!("B1{i}"))]));
        push("q2-lambda", qc(q(2), &format!("C{i}2"), &format!("D{i}1"), &[(mlq2.clone(), &format!("D{i}2"), &format!("C{i}1"))]));
    }

    // More complicated relations.
    let l2q = lam().mul(&two());
    for i in is {
        push(
            "complicated",
            qc(q(-1), &format!("A{i}2"), &format!("D{i}1"), &[(lam().mul(&q(-3)).neg(), &format!("C{i}1"), &format!("B{i}2")), (l2q.mul(&q(-1)).neg(), &format!("C{i}2"), &format!("B{i}1"))]),
        );
    }
    for i in is {
        push(
            "complicated",
            qc(q(-1), &format!("A2{i}"), &format!("D1{i}"), &[(mlq2.clone(), &format!("C2{i}"), &format!("B1{i}")), (l2q.neg(), &format!("C1{i}"), &format!("B2{i}"))]),
        );
    }
    for (x, y, a1, a2, b1, b2) in [
        ("A12", "B21", "B12", "A21", "B11", "A22"),
        ("A21", "C12", "C21", "A12", "C11", "A22"),
        ("B21", "D12", "D21", "B12", "D11", "B22"),
        ("C12", "D21", "D12", "C21", "D11", "C22"),
    ] {
        push("complicated", qc(q(-1), x, y, &[(mlq2.clone(), a1, a2), (l2q.neg(), b1, b2)]));
    }
    let lam2 = lam().mul(&lam());
    // Printed with `+λ²C21B12` on the right; only `−λ²` lies in the defining span.
    push("complicated", qc(one(), "B21", "C12", &[(ml.clone(), "C22", "B11"), (lam(), "C11", "B22"), (lam2.clone(), "C21", "B12")]));
    push("complicated", qc(one(), "A11", "D22", &[(lam(), "D12", "A21"), (lam().mul(&q(-2)).neg(), "C11", "B22"), (l2q.neg(), "C21", "B12")]));
    push("complicated", qc(one(), "A12", "D21", &[(lam().mul(&q(-2)).neg(), "C21", "B12"), (l2q.neg(), "C22", "B11")]));
    push("complicated", qc(one(), "A21", "D12", &[(mlq2.clone(), "C21", "B12"), (l2q.neg(), "C11", "B22")]));
    push(
        "complicated",
        qc(
            one(),
            "A22",
            "D11",
            &[
                (ml.clone(), "D21", "A12"),
                (lam().mul(&q(-2)).neg(), "C11", "B22"),
                (l2q.neg(), "C12", "B21"),
                (lam2.mul(&q(-2)).neg(), "C21", "B12"),
                (lam2.mul(&two()).neg(), "C22", "B11"),
            ],
        ),
    );

    // Invariance conditions.
    let inv4 = |a: [&str; 8], c: [QScalar; 4]| {
        poly(&[(c[0].clone(), a[0], a[1]), (c[1].clone(), a[2], a[3]), (c[2].clone(), a[4], a[5]), (c[3].clone(), a[6], a[7])])
    };
    let std4 = [one(), q(1), q(1).neg(), q(2).neg()];
    push("invariance", inv4(["B11", "A22", "B12", "A21", "B21", "A12", "B22", "A11"], std4.clone()));
    push("invariance", inv4(["D11", "C22", "D12", "C21", "D21", "C12", "D22", "C11"], std4.clone()));
    push("invariance", inv4(["C11", "A22", "C21", "A12", "C12", "A21", "C22", "A11"], std4.clone()));
    push("invariance", inv4(["D11", "B22", "D21", "B12", "D12", "B21", "D22", "B11"], std4.clone()));
    for i in is {
        let names = [format!("C{i}1"), format!("B{i}2"), format!("C{i}2"), format!("B{i}1"), format!("D{i}1"), format!("A{i}2"), format!("D{i}2"), format!("A{i}1")];
        let r: Vec<&str> = names.iter().map(String::as_str).collect();
        push("invariance", inv4([r[0], r[1], r[2], r[3], r[4], r[5], r[6], r[7]], [one(), q(1), q(3).neg(), q(4).neg()]));
    }
    for i in is {
        let names = [format!("C1{i}"), format!("B2{i}"), format!("C2{i}"), format!("B1{i}"), format!("D1{i}"), format!("A2{i}"), format!("D2{i}"), format!("A1{i}")];
        let r: Vec<&str> = names.iter().map(String::as_str).collect();
        push("invariance", inv4([r[0], r[1], r[2], r[3], r[4], r[5], r[6], r[7]], std4.clone()));
    }
    push("invariance", poly(&[(one(), "C11", "B22"), (one().neg(), "C22", "B11"), (lam(), "C21", "B12"), (q(2).neg(), "D12", "A21"), (q(2), "D21", "A12")]));
    push(
        "invariance",
        poly(&[(one(), "C12", "B21"), (one().neg(), "C21", "B12"), (q(2).neg(), "D11", "A22"), (q(2), "D22", "A11"), (lam().mul(&q(2)).neg(), "D12", "A21")]),
    );
    out
}

/// The `[B21, C12]` relation exactly as displayed, before the sign correction
/// applied in [`relations`].
pub fn bc_commutator_as_printed() -> AppendixRelation {
    let lam = lambda();
    let extra = [(lam.neg(), "C22", "B11"), (lam.clone(), "C11", "B22"), (lam.mul(&lam).neg(), "C21", "B12")];
    AppendixRelation { group: "complicated", poly: qc(QScalar::one(), "B21", "C12", &extra) }
}

/// The two printed expressions for `g`.
pub fn g_forms() -> [NCPoly<QScalar>; 2] {
    let s = q(-10);
    let first = poly(&[(s.clone(), "D11", "A22"), (s.mul(&q(1)), "D12", "A21"), (s.mul(&q(-2)).neg(), "C12", "B21"), (s.mul(&q(-3)).neg(), "C11", "B22")]);
    let second = poly(&[(s.clone(), "D22", "A11"), (s.mul(&q(-1)), "D12", "A21"), (s.mul(&q(-2)).neg(), "C21", "B12"), (s.mul(&q(-3)).neg(), "C11", "B22")]);
    [first, second]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_names() {
        let rels = relations();
        assert_eq!(rels.len(), 130);
        assert_eq!(rels.iter().filter(|r| r.group == "invariance").count(), 10);
        assert_eq!(rels.iter().filter(|r| r.group == "block").count(), 24);
        assert_eq!(gen("A11"), 0);
        assert_eq!(gen("B21"), 6);
        assert_eq!(gen("D22"), 15);
        for id in 0..16u8 {
            assert_eq!(gen(&gen_name(id)), id);
        }
        let ord = generator_order();
        assert_eq!(ord[gen("D11") as usize], 0);
        assert_eq!(ord[gen("A22") as usize], 15);
        assert!(rels.iter().all(|r| r.poly.is_homogeneous() && r.poly.degree() == 2));
    }
}
