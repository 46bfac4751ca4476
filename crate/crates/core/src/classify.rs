//! The quasinormality hierarchy for 2-variable weighted shifts.
//!
//! For a shift with squared weights `x`, `y`:
//!
//! * matricially quasinormal: never (each row of `T1` above row 0 would
//!   have to be a normal unilateral weighted shift);
//! * jointly quasinormal: `y` constant along `ε1`, `x` constant along `ε2`,
//!   and each `Ti` commuting with `Ti*Ti`, which together force constant
//!   weights (the Helton–Howe shift up to scaling);
//! * spherically quasinormal: `x_k + y_k = C` for all `k`, equivalently
//!   `γ_{k+ε1} + γ_{k+ε2} = C·γ_k`.
//!
//! Subnormality is not decided from a finite window. The report carries
//! coordinatewise hyponormality (a necessary condition) and a derived flag
//! for spherically quasinormal shifts, which are subnormal.

use std::fmt;

use serde::Serialize;

use crate::aluthge;
use crate::error::{Error, Result};
use crate::lattice::{
    self, row_first_moment, scan, Check, LatticePoint, PredicateVerdict, Property, Status,
    TailRule, WeightDiagram, Witness,
};
use crate::rational::Rational;

/// Tests `x_k + y_k = C` with `C = x_(0,0) + y_(0,0)`. The witness reads
/// `C` on the left and the offending sum on the right.
pub fn is_spherically_quasinormal(d: &WeightDiagram) -> PredicateVerdict {
    let origin = LatticePoint::ORIGIN;
    let c = d.x_at(origin).expect("origin is in every window")
        + d.y_at(origin).expect("origin is in every window");
    let verdict = scan(d, Property::Spherical, |k| {
        let sum = d.x_at(k)? + d.y_at(k)?;
        Some(vec![Check::new(c.clone(), sum, "x(0,0)+y(0,0) = x(k)+y(k)")])
    })
    .with_constant(c);

    #[cfg(debug_assertions)]
    {
        let by_moments = is_spherically_quasinormal_by_moments(d);
        if verdict.holds() {
            debug_assert!(by_moments.holds(), "moment criterion disagrees: {by_moments}");
        }
        if !by_moments.holds() {
            debug_assert!(!verdict.holds());
        }
    }
    verdict
}

/// The moment form of sphericality: `γ_{k+ε1} + γ_{k+ε2} = C·γ_k` with
/// `C = γ_{ε1} + γ_{ε2}`. Moments are taken along row-first paths, so this
/// route shares no arithmetic with [`is_spherically_quasinormal`].
pub fn is_spherically_quasinormal_by_moments(d: &WeightDiagram) -> PredicateVerdict {
    let gamma = |k: LatticePoint| row_first_moment(d, k).ok();
    let origin = LatticePoint::ORIGIN;
    let c = match (gamma(origin.e1()), gamma(origin.e2())) {
        (Some(a), Some(b)) => a + b,
        _ => {
            return PredicateVerdict::holding(Status::HoldsOnWindow)
                .with_explanation("window too small to evaluate moments")
        }
    };
    scan(d, Property::MomentSpherical, |k| {
        let lhs = gamma(k.e1())? + gamma(k.e2())?;
        let rhs = &c * gamma(k)?;
        Some(vec![Check::new(lhs, rhs, "g(k+e1)+g(k+e2) = C*g(k)")])
    })
    .with_constant(c)
}

/// Each `Ti` commutes with each `Tj*Tj`. Checked as four equalities per
/// point: `y_k = y_{k+ε1}` and `x_k = x_{k+ε2}` (mixed pairs), then
/// `x_k = x_{k+ε1}` and `y_k = y_{k+ε2}` (each `Ti` with its own `Ti*Ti`).
pub fn is_jointly_quasinormal(d: &WeightDiagram) -> PredicateVerdict {
    scan(d, Property::Constant, |k| {
        let (xk, yk) = (d.x_at(k)?, d.y_at(k)?);
        let mut checks = Vec::with_capacity(4);
        if let Some(y1) = d.y_at(k.e1()) {
            checks.push(Check::new(yk.clone(), y1, "T1 commutes with T2*T2: y(k) = y(k+e1)"));
        }
        if let Some(x2) = d.x_at(k.e2()) {
            checks.push(Check::new(xk.clone(), x2, "T2 commutes with T1*T1: x(k) = x(k+e2)"));
        }
        if let Some(x1) = d.x_at(k.e1()) {
            checks.push(Check::new(xk, x1, "T1 commutes with T1*T1: x(k) = x(k+e1)"));
        }
        if let Some(y2) = d.y_at(k.e2()) {
            checks.push(Check::new(yk, y2, "T2 commutes with T2*T2: y(k) = y(k+e2)"));
        }
        Some(checks)
    })
}

/// Always violated. `T1` would have to be normal on the range of `T2`, so
/// its restriction to row 1 would be a normal unilateral weighted shift;
/// the witness compares `‖T1 e_(0,1)‖² = x_(0,1)` with `‖T1* e_(0,1)‖² = 0`
/// on that row.
pub fn is_matricially_quasinormal(d: &WeightDiagram) -> PredicateVerdict {
    let k = LatticePoint::new(0, 1);
    let lhs = d.x_at(k).unwrap_or_else(|| d.x_at(LatticePoint::ORIGIN).expect("origin"));
    PredicateVerdict::violated(Witness {
        k,
        lhs,
        rhs: Rational::zero(),
        condition: "row 1 of T1 normal: |T1 e|^2 = |T1* e|^2".into(),
    })
    .with_explanation(
        "T1 must be normal on Ran T2, but there are no normal unilateral weighted shifts",
    )
}

/// `x_k ≤ x_{k+ε1}` and `y_k ≤ y_{k+ε2}`: every row of `T1` and every
/// column of `T2` is a hyponormal unilateral shift. Necessary for
/// subnormality.
pub fn is_coordinatewise_hyponormal(d: &WeightDiagram) -> PredicateVerdict {
    scan(d, Property::Hyponormal, |k| {
        let mut checks = Vec::with_capacity(2);
        if let Some(x1) = d.x_at(k.e1()) {
            checks.push(Check::le(d.x_at(k)?, x1, "x(k) <= x(k+e1)"));
        }
        if let Some(y2) = d.y_at(k.e2()) {
            checks.push(Check::le(d.y_at(k)?, y2, "y(k) <= y(k+e2)"));
        }
        Some(checks)
    })
    .with_explanation("necessary condition for subnormality only")
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub kind: String,
    pub window: [usize; 2],
    pub tail_rule: TailRule,
    pub commutative: PredicateVerdict,
    pub matricial: PredicateVerdict,
    pub joint: PredicateVerdict,
    pub spherical: PredicateVerdict,
    pub coordinatewise_hyponormal: PredicateVerdict,
    pub toral_fixed: PredicateVerdict,
    pub spherical_fixed: PredicateVerdict,
    pub transforms_agree: PredicateVerdict,
    pub toral_transform_commutes: PredicateVerdict,
    /// Spherically quasinormal shifts are subnormal; this flag is derived
    /// from `spherical`, not tested independently.
    pub subnormal_by_sphericality: bool,
}

/// Evaluates the whole hierarchy. Fails on non-commutative diagrams.
pub fn classify(d: &WeightDiagram) -> Result<ClassificationReport> {
    let commutative = lattice::check_commutative(d);
    if let Some(w) = &commutative.witness {
        return Err(Error::NotCommutative(Box::new(w.clone())));
    }
    let joint = is_jointly_quasinormal(d);
    let spherical = is_spherically_quasinormal(d);
    let spherical_fixed = aluthge::is_spherical_fixed_point(d);
    assert!(!joint.holds() || spherical.holds(), "joint quasinormality must imply sphericality");
    assert_eq!(spherical_fixed.status, spherical.status);
    Ok(ClassificationReport {
        kind: d.kind().to_string(),
        window: [d.window().n1, d.window().n2],
        tail_rule: d.tail_rule(),
        matricial: is_matricially_quasinormal(d),
        coordinatewise_hyponormal: is_coordinatewise_hyponormal(d),
        toral_fixed: aluthge::is_toral_fixed_point(d),
        transforms_agree: aluthge::transforms_agree(d),
        toral_transform_commutes: aluthge::toral_transform_commutes(d),
        subnormal_by_sphericality: spherical.holds(),
        commutative,
        joint,
        spherical,
        spherical_fixed,
    })
}

impl fmt::Display for ClassificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "diagram: {} ({}x{} window, tail: {:?})",
            self.kind, self.window[0], self.window[1], self.tail_rule
        )?;
        let rows = [
            ("commutative", &self.commutative),
            ("matricially quasinormal", &self.matricial),
            ("jointly quasinormal", &self.joint),
            ("spherically quasinormal", &self.spherical),
            ("coordinatewise hyponormal", &self.coordinatewise_hyponormal),
            ("toral Aluthge fixed point", &self.toral_fixed),
            ("spherical Aluthge fixed point", &self.spherical_fixed),
            ("toral = spherical transform", &self.transforms_agree),
            ("toral transform commutes", &self.toral_transform_commutes),
        ];
        for (name, v) in rows {
            writeln!(f, "  {name:<30} {v}")?;
        }
        write!(
            f,
            "  {:<30} {}",
            "subnormal (via sphericality)",
            if self.subnormal_by_sphericality { "yes" } else { "not established" }
        )
    }
}

/// A unilateral weighted shift, by its squared weights `w_i = α_i²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneVarShift {
    w: Vec<Rational>,
    tail: TailRule,
}

impl OneVarShift {
    pub fn new(w: Vec<Rational>, tail: TailRule) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::WindowTooSmall("a shift needs at least one weight".into()));
        }
        if let Some((i, bad)) = w.iter().enumerate().find(|(_, r)| !r.is_positive()) {
            return Err(Error::invalid(format!("weight {i} must be positive, got {bad}")));
        }
        if tail == TailRule::Generator {
            return Err(Error::invalid("one-variable shifts take a None or constant tail"));
        }
        Ok(OneVarShift { w, tail })
    }

    pub fn weights(&self) -> &[Rational] {
        &self.w
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    pub fn tail_rule(&self) -> TailRule {
        self.tail
    }

    pub fn get(&self, i: usize) -> Option<Rational> {
        match self.w.get(i) {
            Some(r) => Some(r.clone()),
            None if self.tail == TailRule::ConstantExtension => self.w.last().cloned(),
            None => None,
        }
    }

    pub(crate) fn is_constant_everywhere(&self) -> bool {
        self.tail == TailRule::ConstantExtension && self.w.iter().all(|r| r == &self.w[0])
    }
}

/// Splits `T^m` along the residues `p mod m`. Component `p` is the shift
/// with squared weights `Π_{j<m} w[m·l + p + j]` at position `l`.
pub fn onevar_power_components(s: &OneVarShift, m: usize) -> Result<Vec<OneVarShift>> {
    if m == 0 {
        return Err(Error::invalid("power must be at least 1"));
    }
    let len = s.len();
    let mut out = Vec::with_capacity(m);
    for p in 0..m {
        let count = match s.tail {
            // One extra entry built purely from tail values makes the
            // component's own constant extension exact.
            TailRule::ConstantExtension => len.saturating_sub(p).div_ceil(m) + 1,
            _ => len.saturating_sub(p) / m,
        };
        if count == 0 {
            return Err(Error::WindowTooSmall(format!(
                "{len} weights cannot fill component {p} of power {m}"
            )));
        }
        let w = (0..count)
            .map(|l| {
                (0..m)
                    .map(|j| s.get(m * l + p + j).expect("index within the component"))
                    .product()
            })
            .collect();
        out.push(OneVarShift::new(w, s.tail)?);
    }
    Ok(out)
}

/// Holds iff all squared weights are equal, i.e. the shift is a multiple
/// of the unweighted unilateral shift.
pub fn onevar_is_quasinormal(s: &OneVarShift) -> PredicateVerdict {
    let first = &s.w[0];
    for (i, r) in s.w.iter().enumerate().skip(1) {
        if r != first {
            return PredicateVerdict::violated(Witness {
                k: LatticePoint::new(i, 0),
                lhs: first.clone(),
                rhs: r.clone(),
                condition: "w(0) = w(i)".into(),
            });
        }
    }
    let status = if s.tail == TailRule::ConstantExtension {
        Status::HoldsEverywhere
    } else {
        Status::HoldsOnWindow
    };
    PredicateVerdict::holding(status).with_constant(first.clone())
}
