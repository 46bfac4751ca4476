//! Named example shifts: `ex1`, `helton-howe`, `thm3` and `thm4:x0,q`.

use crate::berger::{
    build_counterexample, shift_from_measure, theorem4_measure, theorem4_point_mass, AtomicMeasure,
};
use crate::error::{Error, Result};
use crate::lattice::{generate_constant, generate_flat_above_row_zero, WeightDiagram, Window};
use crate::rational::Rational;

#[derive(Clone, Debug)]
pub struct Builtin {
    pub name: String,
    pub diagram: WeightDiagram,
    /// The Berger measure, for the measure-generated examples.
    pub measure: Option<AtomicMeasure>,
}

/// The spherical isometry flat above row 0 with `x = 1/3` on rows
/// `k2 ≥ 1` and `y_(0,0) = 1/3`.
pub fn ex1() -> WeightDiagram {
    generate_flat_above_row_zero(Rational::new(1, 3), Rational::new(1, 3), Rational::one())
        .expect("valid parameters")
}

/// All weights 1.
pub fn helton_howe() -> WeightDiagram {
    generate_constant(Rational::one(), Rational::one()).expect("valid parameters")
}

/// Two atoms `(0, 9/8)` and `(1/2, 7/8)` of mass 1/2.
pub fn thm3_measure() -> AtomicMeasure {
    build_counterexample(Rational::zero(), Rational::new(1, 2)).expect("valid parameters")
}

/// `thm4:x0,q` for `0 < x0 ≤ 1`, `q > 0`.
pub fn thm4_measure(x0: Rational, q: Rational) -> Result<AtomicMeasure> {
    if x0 == Rational::one() {
        theorem4_point_mass(q)
    } else {
        theorem4_measure(x0, q)
    }
}

/// Looks up a builtin by name, materialized on `window`.
pub fn builtin(name: &str, window: Window) -> Result<Builtin> {
    let (diagram, measure) = match name {
        "ex1" => (ex1(), None),
        "helton-howe" => (helton_howe(), None),
        "thm3" => (shift_from_measure(&thm3_measure(), window)?, Some(thm3_measure())),
        _ => {
            let Some(args) = name.strip_prefix("thm4:") else {
                return Err(Error::invalid(format!(
                    "unknown builtin {name:?}; expected ex1, helton-howe, thm3 or thm4:x0,q"
                )));
            };
            let (x0, q) = args
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected thm4:x0,q, got {name:?}")))?;
            let mu = thm4_measure(x0.trim().parse()?, q.trim().parse()?)?;
            (shift_from_measure(&mu, window)?, Some(mu))
        }
    };
    Ok(Builtin {
        name: name.to_string(),
        diagram: diagram.with_window(window)?,
        measure,
    })
}
