//! Powers `W^(m,n) = (T1^m, T2^n)` split along the reducing subspaces
//! `H^(m,n)_(p,q)`, spanned by `e_(m·l+p, n·k+q)`.
//!
//! On `H^(m,n)_(p,q)` the power acts as a 2-variable weighted shift in the
//! indices `(l, k)` with squared weights
//! `x'_(l,k) = Π_{j<m} x_(m·l+p+j, n·k+q)` and
//! `y'_(l,k) = Π_{j<n} y_(m·l+p, n·k+q+j)`,
//! since `T1^m e_k` picks up the `m` consecutive weights along `ε1`.

use std::fmt;

use serde::Serialize;

use crate::classify::is_spherically_quasinormal;
use crate::error::{Error, Result};
use crate::lattice::{
    require_commutative, PredicateVerdict, Source, Status, TailRule, WeightDiagram, Window,
};
use crate::rational::Rational;

/// Largest power accepted by [`power_spherical_report`].
pub const DEFAULT_POWER_CAP: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PowerSpec {
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub q: usize,
}

impl PowerSpec {
    pub fn new(m: usize, n: usize, p: usize, q: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::invalid(format!("powers must be positive, got ({m},{n})")));
        }
        if p >= m || q >= n {
            return Err(Error::invalid(format!(
                "residues must satisfy 0 <= p < m and 0 <= q < n, got p={p}, q={q} for ({m},{n})"
            )));
        }
        Ok(PowerSpec { m, n, p, q })
    }
}

fn restricted_window(base: &WeightDiagram, spec: &PowerSpec) -> Result<Window> {
    let w = base.window();
    let (avail1, avail2) = (w.n1.saturating_sub(spec.p), w.n2.saturating_sub(spec.q));
    let (n1, n2) = if base.tail_rule() == TailRule::None {
        (avail1 / spec.m, avail2 / spec.n)
    } else {
        (avail1.div_ceil(spec.m), avail2.div_ceil(spec.n))
    };
    if n1 == 0 || n2 == 0 {
        return Err(Error::WindowTooSmall(format!(
            "a {w} window holds no complete weight of the ({},{}) power on H_({},{})",
            spec.m, spec.n, spec.p, spec.q
        )));
    }
    Ok(Window::new(n1, n2))
}

/// The restriction of `W^(m,n)` to `H^(m,n)_(p,q)` as a weight diagram.
pub fn power_subspace_diagram(d: &WeightDiagram, spec: PowerSpec) -> Result<WeightDiagram> {
    require_commutative(d)?;
    let window = restricted_window(d, &spec)?;
    let out = WeightDiagram::from_source(
        Source::Power {
            base: Box::new(d.clone()),
            spec,
        },
        window,
    )?;
    require_commutative(&out)?;
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct PowerEntry {
    pub p: usize,
    pub q: usize,
    pub window: [usize; 2],
    pub verdict: PredicateVerdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct PowerReport {
    pub m: usize,
    pub n: usize,
    pub entries: Vec<PowerEntry>,
    /// Holds only if every restriction holds.
    pub overall: Status,
    /// Whether all restrictions share one constant `C`; `None` unless every
    /// restriction holds.
    pub common_constant: Option<bool>,
}

impl PowerReport {
    pub fn entry(&self, p: usize, q: usize) -> Option<&PowerEntry> {
        self.entries.iter().find(|e| e.p == p && e.q == q)
    }

    pub fn holds(&self) -> bool {
        self.overall.holds()
    }
}

/// Sphericality of every restriction of `W^(m,n)`, with `m, n` capped at
/// [`DEFAULT_POWER_CAP`].
pub fn power_spherical_report(d: &WeightDiagram, m: usize, n: usize) -> Result<PowerReport> {
    power_spherical_report_capped(d, m, n, DEFAULT_POWER_CAP)
}

pub fn power_spherical_report_capped(
    d: &WeightDiagram,
    m: usize,
    n: usize,
    cap: usize,
) -> Result<PowerReport> {
    if m > cap || n > cap {
        return Err(Error::Unsupported(format!(
            "power ({m},{n}) exceeds the cap of {cap}"
        )));
    }
    PowerSpec::new(m, n, 0, 0)?;
    let mut entries = Vec::with_capacity(m * n);
    for q in 0..n {
        for p in 0..m {
            let r = power_subspace_diagram(d, PowerSpec::new(m, n, p, q)?)?;
            entries.push(PowerEntry {
                p,
                q,
                window: [r.window().n1, r.window().n2],
                verdict: is_spherically_quasinormal(&r),
            });
        }
    }
    let overall = if entries.iter().any(|e| !e.verdict.holds()) {
        Status::Violated
    } else if entries.iter().all(|e| e.verdict.status == Status::HoldsEverywhere) {
        Status::HoldsEverywhere
    } else {
        Status::HoldsOnWindow
    };
    let common_constant = overall.holds().then(|| {
        let constants: Vec<&Rational> = entries.iter().filter_map(|e| e.verdict.constant.as_ref()).collect();
        constants.windows(2).all(|w| w[0] == w[1])
    });
    Ok(PowerReport { m, n, entries, overall, common_constant })
}

impl fmt::Display for PowerReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "power ({},{}): {}", self.m, self.n, self.overall)?;
        writeln!(f, "  {:<8} {:<18} C / witness", "(p,q)", "status")?;
        for e in &self.entries {
            let detail = match (&e.verdict.witness, &e.verdict.constant) {
                (Some(w), _) => format!("{} != {} at k={}", w.lhs, w.rhs, w.k),
                (None, Some(c)) => format!("C = {c}"),
                (None, None) => String::new(),
            };
            writeln!(
                f,
                "  {:<8} {:<18} {detail}",
                format!("({},{})", e.p, e.q),
                e.verdict.status.to_string()
            )?;
        }
        match self.common_constant {
            Some(true) => write!(f, "  restrictions share one constant"),
            Some(false) => write!(f, "  restrictions hold with different constants"),
            None => write!(f, "  not spherically quasinormal"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{generate_constant, generate_flat_above_row_zero, LatticePoint};
    use crate::rational::q;

    fn ex1() -> WeightDiagram {
        generate_flat_above_row_zero(q(1, 3), q(1, 3), q(1, 1)).unwrap()
    }

    #[test]
    fn ex1_square_in_first_variable() {
        let r = power_subspace_diagram(&ex1(), PowerSpec::new(2, 1, 0, 0).unwrap()).unwrap();
        let o = LatticePoint::ORIGIN;
        assert_eq!(r.weight_x(o).unwrap(), q(5, 9));
        assert_eq!(r.weight_y(o).unwrap(), q(1, 3));
        let k = LatticePoint::new(1, 0);
        assert_eq!(r.weight_x(k).unwrap(), q(41, 45));
        assert_eq!(r.weight_y(k).unwrap(), q(1, 15));
    }

    #[test]
    fn ex1_power_report_witness() {
        let rep = power_spherical_report(&ex1(), 2, 1).unwrap();
        assert_eq!(rep.overall, Status::Violated);
        let w = rep.entry(0, 0).unwrap().verdict.witness.clone().unwrap();
        assert_eq!((w.lhs, w.rhs), (q(8, 9), q(44, 45)));
        assert_eq!(w.k, LatticePoint::new(1, 0));
    }

    #[test]
    fn helton_howe_powers_stay_helton_howe() {
        let hh = generate_constant(q(1, 1), q(1, 1)).unwrap();
        let rep = power_spherical_report(&hh, 3, 2).unwrap();
        assert_eq!(rep.entries.len(), 6);
        assert_eq!(rep.overall, Status::HoldsEverywhere);
        assert_eq!(rep.common_constant, Some(true));
        let r = power_subspace_diagram(&hh, PowerSpec::new(3, 2, 2, 1).unwrap()).unwrap();
        assert!(r.window().points().all(|k| r.weight_x(k).unwrap() == q(1, 1)));
    }

    #[test]
    fn spec_validation_and_cap() {
        assert!(PowerSpec::new(0, 1, 0, 0).is_err());
        assert!(PowerSpec::new(2, 1, 2, 0).is_err());
        assert!(matches!(power_spherical_report(&ex1(), 9, 1), Err(Error::Unsupported(_))));
    }
}
