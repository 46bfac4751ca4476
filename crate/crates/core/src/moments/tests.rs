use super::*;
use crate::berger::{build_counterexample, theorem4_measure};
use crate::lattice::Window;
use crate::rational::q;

fn thm4() -> AtomicMeasure {
    theorem4_measure(q(1, 2), q(1, 1)).unwrap()
}

fn hh() -> AtomicMeasure {
    AtomicMeasure::point_mass(q(1, 1), q(1, 1)).unwrap()
}

fn rows(m: &MomentMatrix) -> Vec<Vec<String>> {
    m.rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
}

const ONE: Monomial = Monomial { x: 0, y: 0 };
const X: Monomial = Monomial { x: 1, y: 0 };
const Y: Monomial = Monomial { x: 0, y: 1 };

#[test]
fn index_conversion_is_a_transpose() {
    assert_eq!(lattice_point(2, 1), LatticePoint::new(1, 2));
    assert_eq!(matrix_index(LatticePoint::new(1, 2)), (2, 1));
}

#[test]
fn theorem4_sequence() {
    let g = sequence_from_measure(&thm4(), 2);
    assert_eq!(g.gamma(0, 0), Some(&q(1, 1)));
    assert_eq!(g.gamma(0, 1), Some(&q(1, 2)));
    assert_eq!(g.gamma(1, 0), Some(&q(3, 2)));
    assert_eq!(g.gamma(0, 2), Some(&q(1, 2)));
    assert_eq!(g.gamma(1, 1), Some(&q(1, 2)));
    assert_eq!(g.gamma(2, 0), Some(&q(5, 2)));
    assert!(g.gamma(0, 5).is_none());
}

#[test]
fn diagram_sequence_matches_measure_sequence() {
    let mu = thm4();
    let d = crate::berger::shift_from_measure(&mu, Window::new(5, 5)).unwrap();
    assert_eq!(sequence_from_diagram(&d, 2).unwrap(), sequence_from_measure(&mu, 2));
}

#[test]
fn labels_are_graded() {
    let labels: Vec<String> = monomials(2).iter().map(ToString::to_string).collect();
    assert_eq!(labels, ["1", "X", "Y", "X^2", "XY", "Y^2"]);
    assert_eq!(monomials(3).len(), 10);
}

#[test]
fn theorem4_m1() {
    let m = build_moment_matrix(&sequence_from_measure(&thm4(), 1));
    assert_eq!(rows(&m), [["1", "1/2", "3/2"], ["1/2", "1/2", "1/2"], ["3/2", "1/2", "5/2"]]);
    assert!(psd_exact(&m));
    assert_eq!(rank_exact(&m), 2);
    let rels = column_relations(&m);
    assert_eq!(rels.len(), 1);
    assert_eq!(rels[0].to_string(), "Y = 2*1 - X");
    assert!(rels[0].evaluates_to_zero(&m));
}

#[test]
fn theorem4_m2_relations() {
    let g = sequence_from_measure(&thm4(), 2);
    let m = build_moment_matrix(&g);
    assert!(m.is_hankel_blocks() && m.is_symmetric());
    assert_eq!(rank_exact(&m), 2);
    assert!(flat_extension(&g));
    assert_eq!(ranks(&g), [1, 2, 2]);
    assert_eq!(flat_levels(&g), [false, true]);
    let rels = column_relations(&m);
    assert_eq!(rels.len(), 4);
    assert!(rels.iter().all(|r| r.evaluates_to_zero(&m)));
    let x2 = Monomial::new(2, 0);
    let xy = Monomial::new(1, 1);
    let y2 = Monomial::new(0, 2);
    let expected = [
        ColumnRelation::equation(x2, &[(q(1, 1), X)]).unwrap(),
        ColumnRelation::equation(xy, &[(q(1, 1), X)]).unwrap(),
        ColumnRelation::equation(y2, &[(q(2, 1), Y), (q(-1, 1), X)]).unwrap(),
        ColumnRelation::from_terms([(q(1, 1), X), (q(1, 1), Y), (q(-2, 1), ONE)]).unwrap(),
    ];
    for e in &expected {
        assert!(relations_imply(&rels, e), "{e}");
        assert!(e.evaluates_to_zero(&m), "{e}");
    }
    let wrong = ColumnRelation::equation(x2, &[(q(1, 1), ONE)]).unwrap();
    assert!(!relations_imply(&rels, &wrong));
}

#[test]
fn point_mass_matrix() {
    let g = sequence_from_measure(&hh(), 2);
    let m = build_moment_matrix(&g.truncate(1).unwrap());
    assert!(m.rows().iter().flatten().all(|v| *v == 1));
    assert_eq!(rank_exact(&m), 1);
    let rels: Vec<String> = column_relations(&m).iter().map(ToString::to_string).collect();
    assert_eq!(rels, ["X = 1", "Y = 1"]);
    assert!(flat_extension(&g));
}

#[test]
fn three_atoms_full_rank_at_order_one() {
    let mu = AtomicMeasure::new(vec![
        Atom::new(q(0, 1), q(0, 1), q(1, 3)),
        Atom::new(q(1, 1), q(0, 1), q(1, 3)),
        Atom::new(q(0, 1), q(1, 1), q(1, 3)),
    ])
    .unwrap();
    let g = sequence_from_measure(&mu, 1);
    assert_eq!(rank_exact(&build_moment_matrix(&g)), 3);
    assert!(column_relations(&build_moment_matrix(&g)).is_empty());
    assert_eq!(flat_levels(&g), [false]);
    assert!(matches!(recover_atoms(&sequence_from_measure(&mu, 2)), Err(Error::Unsupported(_))));
}

#[test]
fn recovery() {
    let got = recover_atoms(&sequence_from_measure(&thm4(), 2)).unwrap();
    assert!(got.same_as(&thm4()));
    let got = recover_atoms(&sequence_from_measure(&hh(), 1)).unwrap();
    assert!(got.same_as(&hh()));
    let ce = build_counterexample(q(0, 1), q(1, 2)).unwrap();
    let got = recover_atoms(&sequence_from_measure(&ce, 2)).unwrap();
    assert!(got.same_as(&ce));
}

#[test]
fn recovery_on_a_vertical_pair() {
    let mu = AtomicMeasure::new(vec![
        Atom::new(q(1, 2), q(1, 3), q(1, 4)),
        Atom::new(q(1, 2), q(2, 1), q(3, 4)),
    ])
    .unwrap();
    assert!(recover_atoms(&sequence_from_measure(&mu, 2)).unwrap().same_as(&mu));
}

#[test]
fn recovery_needs_order_two() {
    let g = sequence_from_measure(&thm4(), 1);
    assert!(matches!(recover_atoms(&g), Err(Error::Unsupported(_))));
}

#[test]
fn irrational_support_is_unsupported() {
    // z^2 = z + 1
    assert!(matches!(quadratic_roots(q(1, 1), q(1, 1)), Err(Error::Unsupported(_))));
    assert!(matches!(quadratic_roots(q(0, 1), q(-1, 1)), Err(Error::NoRepresentingMeasure(_))));
    assert_eq!(quadratic_roots(q(1, 1), q(0, 1)).unwrap(), [q(0, 1), q(1, 1)]);
}

#[test]
fn non_psd_sequence_has_no_measure() {
    let mut gamma = BTreeMap::new();
    for d in 0..=2 {
        for i in 0..=d {
            gamma.insert((i, d - i), q(1, 1));
        }
    }
    gamma.insert((0, 2), q(1, 2));
    let g = BiMomentSequence::new(1, gamma).unwrap();
    assert!(matches!(recover_atoms(&g), Err(Error::NoRepresentingMeasure(_))));
}

#[test]
fn sequences_validate_and_roundtrip_json() {
    assert!(BiMomentSequence::new(1, BTreeMap::from([((0, 0), q(1, 1))])).is_err());
    let g = sequence_from_measure(&thm4(), 1);
    let json = serde_json::to_string(&g).unwrap();
    assert_eq!(
        json,
        r#"{"n":1,"gamma":{"0,0":"1","0,1":"1/2","1,0":"3/2","0,2":"1/2","1,1":"1/2","2,0":"5/2"}}"#
    );
    let back: BiMomentSequence = serde_json::from_str(&json).unwrap();
    assert_eq!(back, g);
    assert!(serde_json::from_str::<BiMomentSequence>(r#"{"n":0,"gamma":{"x":"1"}}"#).is_err());
    assert!(serde_json::from_str::<BiMomentSequence>(r#"{"n":0,"gamma":{"0,0":"0"}}"#).is_err());
}

#[test]
fn matrix_display_has_labels() {
    let m = build_moment_matrix(&sequence_from_measure(&thm4(), 1));
    let text = m.to_string();
    assert!(text.lines().next().unwrap().contains('X'));
    assert_eq!(text.lines().count(), 4);
}
