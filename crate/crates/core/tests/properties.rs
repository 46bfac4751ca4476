mod common;

use proptest::prelude::*;

use shiftlab::aluthge::{spherical_transform, toral_transform};
use shiftlab::berger::{measure_moment, shift_from_measure, two_atom_conditions, Atom, AtomicMeasure};
use shiftlab::classify::{is_spherically_quasinormal, is_spherically_quasinormal_by_moments};
use shiftlab::format::DiagramFile;
use shiftlab::moments::{
    build_moment_matrix, lattice_point, matrix_index, psd_exact, rank_exact, sequence_from_diagram,
    sequence_from_measure,
};
use shiftlab::powers::{power_subspace_diagram, PowerSpec};
use shiftlab::{moment, q, LatticePoint, Rational, WeightDiagram, Window};

fn config() -> ProptestConfig {
    ProptestConfig { cases: 48, ..ProptestConfig::default() }
}

/// `γ_k` along the column-first path, straight from the weights.
fn column_first(d: &WeightDiagram, k: LatticePoint) -> Rational {
    let mut g = q(1, 1);
    for j in 0..k.k2 {
        g = g * d.weight_y(LatticePoint::new(0, j)).unwrap();
    }
    for i in 0..k.k1 {
        g = g * d.weight_x(LatticePoint::new(i, k.k2)).unwrap();
    }
    g
}

fn any_diagram(seed: u64, window: Window) -> WeightDiagram {
    let mut rng = common::rng(seed);
    if seed.is_multiple_of(3) {
        common::explicit(&mut rng, window)
    } else {
        common::tailed(&mut rng, window)
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn moments_do_not_depend_on_the_path(seed in any::<u64>()) {
        let d = any_diagram(seed, Window::new(4, 4));
        for k in d.window().points() {
            prop_assert_eq!(moment(&d, k).unwrap(), column_first(&d, k));
        }
    }

    #[test]
    fn weights_are_moment_ratios(seed in any::<u64>()) {
        let d = any_diagram(seed, Window::new(4, 4));
        for k in Window::new(3, 3).points() {
            let g = moment(&d, k).unwrap();
            prop_assert_eq!(moment(&d, k.e1()).unwrap(), d.weight_x(k).unwrap() * &g);
            prop_assert_eq!(moment(&d, k.e2()).unwrap(), d.weight_y(k).unwrap() * &g);
        }
    }

    #[test]
    fn flat_family_has_constant_density(seed in any::<u64>()) {
        let d = common::flat(&mut common::rng(seed));
        let c = d.weight_x(LatticePoint::ORIGIN).unwrap() + d.weight_y(LatticePoint::ORIGIN).unwrap();
        for k in d.window().points() {
            prop_assert_eq!(d.weight_x(k).unwrap() + d.weight_y(k).unwrap(), c.clone());
        }
        prop_assert!(is_spherically_quasinormal(&d).holds());
    }

    #[test]
    fn measure_roundtrip(seed in any::<u64>(), atoms in 1usize..=3) {
        let mu = common::measure(&mut common::rng(seed), atoms);
        let d = shift_from_measure(&mu, Window::new(5, 5)).unwrap();
        for k in d.window().points() {
            prop_assert_eq!(moment(&d, k).unwrap(), measure_moment(&mu, k));
        }
    }

    #[test]
    fn two_atom_conditions_ignore_densities(seed in any::<u64>(), r in 1i64..20) {
        let mu = common::measure(&mut common::rng(seed), 2);
        let a = mu.atoms();
        prop_assume!(a[0].s != a[1].s && a[0].t != a[1].t);
        let other = AtomicMeasure::new(vec![
            Atom::new(a[0].s.clone(), a[0].t.clone(), q(r, 20)),
            Atom::new(a[1].s.clone(), a[1].t.clone(), q(20 - r, 20)),
        ]);
        prop_assume!(other.is_ok());
        prop_assert_eq!(two_atom_conditions(&mu).unwrap(), two_atom_conditions(&other.unwrap()).unwrap());
    }

    #[test]
    fn weight_and_moment_criteria_agree(seed in any::<u64>()) {
        let d = any_diagram(seed, Window::new(5, 5));
        let by_weights = is_spherically_quasinormal(&d);
        let by_moments = is_spherically_quasinormal_by_moments(&d);
        prop_assert_eq!(by_weights.holds(), by_moments.holds());
    }

    #[test]
    fn restricted_moments_are_rescaled_moments(seed in any::<u64>(), m in 1usize..=3, n in 1usize..=3) {
        let d = common::tailed(&mut common::rng(seed), Window::new(6, 6));
        let (p, qq) = ((seed as usize) % m, (seed as usize / 7) % n);
        let r = power_subspace_diagram(&d, PowerSpec::new(m, n, p, qq).unwrap()).unwrap();
        let base = moment(&d, LatticePoint::new(p, qq)).unwrap();
        for k in Window::new(2, 2).points() {
            let expected = moment(&d, LatticePoint::new(m * k.k1 + p, n * k.k2 + qq)).unwrap() / &base;
            prop_assert_eq!(moment(&r, k).unwrap(), expected);
        }
    }

    #[test]
    fn support_size_is_rank_of_m1(seed in any::<u64>(), atoms in 1usize..=3) {
        let mu = common::measure(&mut common::rng(seed), atoms);
        let pts: Vec<(Rational, Rational)> = mu.atoms().iter().map(|a| (a.s.clone(), a.t.clone())).collect();
        if atoms == 3 {
            // collinear triples give rank 2
            let (a, b, c) = (&pts[0], &pts[1], &pts[2]);
            let cross = (&b.0 - &a.0) * (&c.1 - &a.1) - (&b.1 - &a.1) * (&c.0 - &a.0);
            prop_assume!(!cross.is_zero());
        }
        let m1 = build_moment_matrix(&sequence_from_measure(&mu, 1));
        prop_assert_eq!(rank_exact(&m1), atoms);
    }

    #[test]
    fn genuine_moment_matrices_are_psd_and_hankel(seed in any::<u64>(), atoms in 1usize..=3, n in 1usize..=3) {
        let mu = common::measure(&mut common::rng(seed), atoms);
        let m = build_moment_matrix(&sequence_from_measure(&mu, n));
        prop_assert!(m.is_symmetric());
        prop_assert!(m.is_hankel_blocks());
        prop_assert!(psd_exact(&m));
    }

    #[test]
    fn diagram_sequences_transpose_lattice_moments(seed in any::<u64>()) {
        let d = common::tailed(&mut common::rng(seed), Window::new(5, 5));
        let g = sequence_from_diagram(&d, 2).unwrap();
        for ((i, j), v) in g.entries() {
            prop_assert_eq!(lattice_point(i, j), LatticePoint::new(j, i));
            prop_assert_eq!(matrix_index(lattice_point(i, j)), (i, j));
            prop_assert_eq!(v, &moment(&d, LatticePoint::new(j, i)).unwrap());
        }
    }

    #[test]
    fn transforms_stay_positive(seed in any::<u64>()) {
        let d = any_diagram(seed, Window::new(4, 4));
        for t in [toral_transform(&d, 128).unwrap(), spherical_transform(&d, 128).unwrap()] {
            for k in t.window().points() {
                prop_assert!(t.x_exact(k).unwrap().is_positive());
                prop_assert!(t.y_exact(k).unwrap().is_positive());
            }
        }
    }

    #[test]
    fn diagram_files_roundtrip(seed in any::<u64>()) {
        let d = any_diagram(seed, Window::new(3, 4));
        let text = serde_json::to_string(&DiagramFile::describe(&d)).unwrap();
        let back = serde_json::from_str::<DiagramFile>(&text).unwrap().build(None).unwrap();
        prop_assert_eq!(back.x_rows(), d.x_rows());
        prop_assert_eq!(back.y_rows(), d.y_rows());
        prop_assert_eq!(back.kind(), d.kind());
    }

    #[test]
    fn rationals_roundtrip_through_text(n in -10_000i64..10_000, dd in 1i64..10_000) {
        let r = q(n, dd);
        prop_assert_eq!(r.to_string().parse::<Rational>().unwrap(), r);
    }
}
