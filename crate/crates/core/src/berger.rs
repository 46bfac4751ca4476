//! Finitely atomic Berger measures.
//!
//! A subnormal 2-variable weighted shift has moments
//! `γ_k = ∫ s^k1 t^k2 dμ(s,t)` for a probability measure `μ` on `R₊²`.
//! For atomic `μ` the weights are recovered as moment ratios,
//! `x_k = γ_{k+ε1}/γ_k` and `y_k = γ_{k+ε2}/γ_k`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, Source, WeightDiagram, Window};
use crate::powers::PowerSpec;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Atom {
    pub s: Rational,
    pub t: Rational,
    /// Point mass at `(s, t)`.
    pub rho: Rational,
}

impl Atom {
    pub fn new(s: Rational, t: Rational, rho: Rational) -> Self {
        Atom { s, t, rho }
    }
}

/// A probability measure with finitely many atoms in `R₊²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AtomicMeasure {
    atoms: Vec<Atom>,
}

impl AtomicMeasure {
    /// Checks nonnegative coordinates, positive densities summing to 1, and
    /// pairwise distinct support points.
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::invalid("a measure needs at least one atom"));
        }
        for a in &atoms {
            if a.s.is_negative() || a.t.is_negative() {
                return Err(Error::invalid(format!("atom ({}, {}) leaves R+^2", a.s, a.t)));
            }
            if !a.rho.is_positive() {
                return Err(Error::invalid(format!("density {} must be positive", a.rho)));
            }
        }
        let total: Rational = atoms.iter().map(|a| &a.rho).sum();
        if total != Rational::one() {
            return Err(Error::invalid(format!("densities sum to {total}, not 1")));
        }
        for (i, a) in atoms.iter().enumerate() {
            if atoms[..i].iter().any(|b| b.s == a.s && b.t == a.t) {
                return Err(Error::invalid(format!("atom ({}, {}) is repeated", a.s, a.t)));
            }
        }
        Ok(AtomicMeasure { atoms })
    }

    pub fn point_mass(s: Rational, t: Rational) -> Result<Self> {
        AtomicMeasure::new(vec![Atom::new(s, t, Rational::one())])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Atoms sorted by `(s, t)`, for order-insensitive comparison.
    pub fn sorted_atoms(&self) -> Vec<Atom> {
        let mut atoms = self.atoms.clone();
        atoms.sort_by(|a, b| (&a.s, &a.t).cmp(&(&b.s, &b.t)));
        atoms
    }

    /// Same support points and densities, regardless of atom order.
    pub fn same_as(&self, other: &AtomicMeasure) -> bool {
        self.sorted_atoms() == other.sorted_atoms()
    }

    /// The Berger measure of the restriction of `(T1^m, T2^n)` to
    /// `H^(m,n)_(p,q)`: atoms move to `(s^m, t^n)` and are reweighted by
    /// `s^p t^q`, then renormalized.
    pub fn power_pushforward(&self, spec: &PowerSpec) -> Result<AtomicMeasure> {
        let weighted: Vec<Atom> = self
            .atoms
            .iter()
            .map(|a| {
                Atom::new(
                    a.s.pow(spec.m as u32),
                    a.t.pow(spec.n as u32),
                    &a.rho * a.s.pow(spec.p as u32) * a.t.pow(spec.q as u32),
                )
            })
            .filter(|a| a.rho.is_positive())
            .collect();
        let total: Rational = weighted.iter().map(|a| &a.rho).sum();
        if !total.is_positive() {
            return Err(Error::ZeroMoment(LatticePoint::new(spec.p, spec.q)));
        }
        AtomicMeasure::new(
            weighted
                .into_iter()
                .map(|a| Atom::new(a.s, a.t, a.rho / &total))
                .collect(),
        )
    }
}

impl<'de> Deserialize<'de> for AtomicMeasure {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            atoms: Vec<Atom>,
        }
        let raw = Raw::deserialize(deserializer)?;
        AtomicMeasure::new(raw.atoms).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for AtomicMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}*delta({}, {})", a.rho, a.s, a.t)?;
        }
        Ok(())
    }
}

/// `γ_k = Σ ρ_i s_i^k1 t_i^k2`, with `0^0 = 1`.
pub fn measure_moment(mu: &AtomicMeasure, k: LatticePoint) -> Rational {
    mu.atoms
        .iter()
        .map(|a| &a.rho * a.s.pow(k.k1 as u32) * a.t.pow(k.k2 as u32))
        .sum()
}

/// The weight diagram whose Berger measure is `mu`, evaluated lazily past
/// the window. Rejects measures with a vanishing moment where a weight is
/// needed.
pub fn shift_from_measure(mu: &AtomicMeasure, window: Window) -> Result<WeightDiagram> {
    WeightDiagram::from_source(Source::Measure(mu.clone()), window)
}

/// Sphericality of `(T1,T2)`, `(T1²,T2)` and `(T1,T2²)` for a 2-atomic
/// Berger measure `σδ_(s,t) + τδ_(u,v)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TwoAtomConditions {
    /// `s + t = u + v`
    pub base: bool,
    /// `s² + t = u² + v`
    pub pow21: bool,
    /// `s + t² = u + v²`
    pub pow12: bool,
}

/// The conditions do not involve the densities. Atoms are ordered so that
/// `s < u`; equal `s` or equal `t` is rejected.
pub fn two_atom_conditions(mu: &AtomicMeasure) -> Result<TwoAtomConditions> {
    let [a, b] = mu.atoms() else {
        return Err(Error::invalid(format!(
            "expected exactly 2 atoms, got {}",
            mu.atoms().len()
        )));
    };
    let (first, second) = if a.s <= b.s { (a, b) } else { (b, a) };
    let (s, t, u, v) = (&first.s, &first.t, &second.s, &second.t);
    if s == u {
        return Err(Error::invalid("two-atom conditions need s < u"));
    }
    if t == v {
        return Err(Error::invalid("two-atom conditions need t != v"));
    }
    Ok(TwoAtomConditions {
        base: s + t == u + v,
        pow21: s * s + t == u * u + v,
        pow12: s + t * t == u + v * v,
    })
}

/// Two atoms `(s,t)`, `(u,v)` of mass 1/2 with
/// `t = (1 − s³ − s²u + su² + u³) / (2(s+u))` and `v = s² + t − u²`:
/// both `(T1²,T2)` and `(T1,T2²)` are spherically quasinormal, while
/// `s + t − u − v = (u − s)(s + u − 1)` keeps `(T1,T2)` from being so.
pub fn build_counterexample(s: Rational, u: Rational) -> Result<AtomicMeasure> {
    if s.is_negative() || s >= u {
        return Err(Error::invalid(format!("need 0 <= s < u, got s={s}, u={u}")));
    }
    let one = Rational::one();
    let su = &s + &u;
    if su == one {
        return Err(Error::invalid("s + u = 1 makes (T1,T2) spherical as well"));
    }
    let (s2, u2) = (&s * &s, &u * &u);
    let t = (&one - &s2 * &s - &s2 * &u + &s * &u2 + &u2 * &u) / (Rational::from(2i64) * &su);
    let v = &s2 + &t - &u2;
    if t.is_negative() || v.is_negative() {
        return Err(Error::invalid(format!(
            "construction leaves R+^2: t={t}, v={v}"
        )));
    }
    if t == v {
        return Err(Error::invalid("construction gives t = v"));
    }
    let half = Rational::new(1, 2);
    AtomicMeasure::new(vec![Atom::new(s, t, half.clone()), Atom::new(u, v, half)])
}

/// `(1 − x0)·δ_(0, 1+q) + x0·δ_(1, q)` for `0 < x0 < 1`, `q > 0`.
pub fn theorem4_measure(x0: Rational, q: Rational) -> Result<AtomicMeasure> {
    if !x0.is_positive() || x0 >= Rational::one() {
        return Err(Error::invalid(format!(
            "need 0 < x0 < 1, got {x0} (x0 = 1 is the point mass; see theorem4_point_mass)"
        )));
    }
    if !q.is_positive() {
        return Err(Error::invalid(format!("need q > 0, got {q}")));
    }
    let one = Rational::one();
    AtomicMeasure::new(vec![
        Atom::new(Rational::zero(), &one + &q, &one - &x0),
        Atom::new(one, q, x0),
    ])
}

/// The `x0 = 1` end of the family: `δ_(1,q)`, a scaled Helton–Howe shift.
pub fn theorem4_point_mass(q: Rational) -> Result<AtomicMeasure> {
    if !q.is_positive() {
        return Err(Error::invalid(format!("need q > 0, got {q}")));
    }
    AtomicMeasure::point_mass(Rational::one(), q)
}

/// `γ_(0,2) + x0 − (q² + 1)` for the two-atom family, which equals
/// `2q(1 − x0)`. It vanishes exactly when `(T1, T2²)` could be spherically
/// quasinormal, i.e. only at the point mass `x0 = 1`.
pub fn corollary41_deficit(x0: Rational, q: Rational) -> Result<Rational> {
    let mu = if x0 == Rational::one() {
        theorem4_point_mass(q.clone())?
    } else {
        theorem4_measure(x0.clone(), q.clone())?
    };
    let gamma02 = measure_moment(&mu, LatticePoint::new(0, 2));
    Ok(gamma02 + x0 - (&q * &q + Rational::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn helton_howe_measure_has_unit_moments() {
        let mu = AtomicMeasure::point_mass(q(1, 1), q(1, 1)).unwrap();
        for k in [(0, 0), (3, 1), (5, 7)] {
            assert_eq!(measure_moment(&mu, LatticePoint::new(k.0, k.1)), q(1, 1));
        }
    }

    #[test]
    fn theorem4_moments_and_weights() {
        let mu = theorem4_measure(q(1, 2), q(1, 1)).unwrap();
        assert_eq!(measure_moment(&mu, LatticePoint::new(1, 0)), q(1, 2));
        assert_eq!(measure_moment(&mu, LatticePoint::new(0, 1)), q(3, 2));
        let d = shift_from_measure(&mu, Window::new(4, 4)).unwrap();
        assert_eq!(d.weight_x(LatticePoint::new(0, 0)).unwrap(), q(1, 2));
        assert_eq!(d.weight_y(LatticePoint::new(0, 0)).unwrap(), q(3, 2));
        assert_eq!(d.weight_x(LatticePoint::new(1, 0)).unwrap(), q(1, 1));
        assert_eq!(d.weight_y(LatticePoint::new(1, 0)).unwrap(), q(1, 1));
    }

    #[test]
    fn counterexample_weights() {
        let mu = build_counterexample(q(0, 1), q(1, 2)).unwrap();
        let d = shift_from_measure(&mu, Window::new(3, 3)).unwrap();
        let o = LatticePoint::ORIGIN;
        let k = LatticePoint::new(1, 0);
        assert_eq!((d.weight_x(o).unwrap(), d.weight_y(o).unwrap()), (q(1, 4), q(1, 1)));
        assert_eq!((d.weight_x(k).unwrap(), d.weight_y(k).unwrap()), (q(1, 2), q(7, 8)));
    }

    #[test]
    fn counterexample_construction() {
        let mu = build_counterexample(q(0, 1), q(1, 2)).unwrap();
        let a = mu.sorted_atoms();
        assert_eq!((a[0].t.clone(), a[1].t.clone()), (q(9, 8), q(7, 8)));
        assert!(build_counterexample(q(1, 4), q(3, 4)).is_err());
        assert!(build_counterexample(q(0, 1), q(2, 1)).is_err());
        assert!(build_counterexample(q(1, 2), q(1, 2)).is_err());
    }

    #[test]
    fn two_atom_condition_values() {
        let mu = AtomicMeasure::new(vec![
            Atom::new(q(0, 1), q(9, 8), q(1, 2)),
            Atom::new(q(1, 2), q(7, 8), q(1, 2)),
        ])
        .unwrap();
        let c = two_atom_conditions(&mu).unwrap();
        assert_eq!(c, TwoAtomConditions { base: false, pow21: true, pow12: true });

        let symmetric = AtomicMeasure::new(vec![
            Atom::new(q(3, 4), q(1, 4), q(1, 3)),
            Atom::new(q(1, 4), q(3, 4), q(2, 3)),
        ])
        .unwrap();
        let c = two_atom_conditions(&symmetric).unwrap();
        assert_eq!(c, TwoAtomConditions { base: true, pow21: true, pow12: true });

        let thm4 = theorem4_measure(q(1, 2), q(1, 1)).unwrap();
        assert!(two_atom_conditions(&thm4).unwrap().base);
    }

    #[test]
    fn two_atom_conditions_reject_bad_inputs() {
        let one = AtomicMeasure::point_mass(q(1, 1), q(1, 1)).unwrap();
        assert!(two_atom_conditions(&one).is_err());
        let same_t = AtomicMeasure::new(vec![
            Atom::new(q(0, 1), q(1, 1), q(1, 2)),
            Atom::new(q(1, 1), q(1, 1), q(1, 2)),
        ])
        .unwrap();
        assert!(two_atom_conditions(&same_t).is_err());
    }

    #[test]
    fn measure_validation() {
        assert!(AtomicMeasure::new(vec![]).is_err());
        assert!(AtomicMeasure::new(vec![Atom::new(q(1, 1), q(1, 1), q(1, 2))]).is_err());
        assert!(AtomicMeasure::new(vec![Atom::new(q(-1, 1), q(1, 1), q(1, 1))]).is_err());
        assert!(AtomicMeasure::new(vec![
            Atom::new(q(1, 1), q(1, 1), q(1, 2)),
            Atom::new(q(1, 1), q(1, 1), q(1, 2)),
        ])
        .is_err());
    }

    #[test]
    fn theorem4_parameter_ranges() {
        let mu = theorem4_measure(q(1, 2), q(1, 1)).unwrap();
        let a = mu.sorted_atoms();
        assert_eq!((a[0].s.clone(), a[0].t.clone(), a[0].rho.clone()), (q(0, 1), q(2, 1), q(1, 2)));
        assert_eq!((a[1].s.clone(), a[1].t.clone(), a[1].rho.clone()), (q(1, 1), q(1, 1), q(1, 2)));
        assert!(theorem4_measure(q(1, 2), q(0, 1)).is_err());
        assert!(theorem4_measure(q(1, 1), q(1, 1)).is_err());
        assert_eq!(theorem4_point_mass(q(1, 1)).unwrap().atoms().len(), 1);
    }

    #[test]
    fn deficits() {
        assert_eq!(corollary41_deficit(q(1, 2), q(1, 1)).unwrap(), q(1, 1));
        assert_eq!(corollary41_deficit(q(3, 4), q(1, 2)).unwrap(), q(1, 4));
        assert_eq!(corollary41_deficit(q(1, 1), q(5, 3)).unwrap(), q(0, 1));
    }

    #[test]
    fn zero_moments_are_rejected() {
        // all mass on the t-axis: gamma_(1,0) = 0
        let mu = AtomicMeasure::point_mass(q(0, 1), q(1, 1)).unwrap();
        assert!(matches!(shift_from_measure(&mu, Window::new(2, 2)), Err(Error::ZeroMoment(_))));
    }
}
