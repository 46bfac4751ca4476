use std::fmt;

use serde::Serialize;

use super::{LatticePoint, Property, WeightDiagram};
use crate::rational::Rational;

/// Scope of a predicate verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// Every applicable lattice point of the window passed; nothing is
    /// claimed beyond it.
    HoldsOnWindow,
    /// Passed on the window, and the diagram's tail rule certifies the
    /// condition at every lattice point.
    HoldsEverywhere,
    Violated,
}

impl Status {
    pub fn holds(self) -> bool {
        !matches!(self, Status::Violated)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::HoldsOnWindow => "holds on window",
            Status::HoldsEverywhere => "holds everywhere",
            Status::Violated => "violated",
        })
    }
}

/// The first lattice point where an identity `lhs = rhs` fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub k: LatticePoint,
    pub lhs: Rational,
    pub rhs: Rational,
    pub condition: String,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at k={}: {} != {} ({})", self.k, self.lhs, self.rhs, self.condition)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredicateVerdict {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub explanation: Option<String>,
}

impl PredicateVerdict {
    pub fn holds(&self) -> bool {
        self.status.holds()
    }

    pub fn violated(witness: Witness) -> Self {
        PredicateVerdict {
            status: Status::Violated,
            witness: Some(witness),
            constant: None,
            explanation: None,
        }
    }

    pub(crate) fn holding(status: Status) -> Self {
        debug_assert!(status.holds());
        PredicateVerdict {
            status,
            witness: None,
            constant: None,
            explanation: None,
        }
    }

    pub fn with_constant(mut self, c: Rational) -> Self {
        self.constant = Some(c);
        self
    }

    pub fn with_explanation(mut self, text: impl Into<String>) -> Self {
        self.explanation = Some(text.into());
        self
    }
}

impl fmt::Display for PredicateVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.status)?;
        if let Some(c) = &self.constant {
            write!(f, ", C = {c}")?;
        }
        if let Some(w) = &self.witness {
            write!(f, " {w}")?;
        }
        Ok(())
    }
}

/// One identity to test at a lattice point.
pub(crate) struct Check {
    pub lhs: Rational,
    pub rhs: Rational,
    pub condition: &'static str,
    /// `lhs <= rhs` instead of `lhs = rhs`
    pub inequality: bool,
}

impl Check {
    pub fn new(lhs: Rational, rhs: Rational, condition: &'static str) -> Self {
        Check { lhs, rhs, condition, inequality: false }
    }

    pub fn le(lhs: Rational, rhs: Rational, condition: &'static str) -> Self {
        Check { lhs, rhs, condition, inequality: true }
    }

    fn fails(&self) -> bool {
        if self.inequality {
            self.lhs > self.rhs
        } else {
            self.lhs != self.rhs
        }
    }
}

/// Runs `at` over the window in row-major order. `at` returns `None` when
/// some weight it needs is unavailable at that point, which skips the
/// point. The first failing identity becomes the witness.
pub(crate) fn scan<F>(d: &WeightDiagram, property: Property, mut at: F) -> PredicateVerdict
where
    F: FnMut(LatticePoint) -> Option<Vec<Check>>,
{
    for k in d.window().points() {
        let Some(checks) = at(k) else { continue };
        for c in checks {
            if c.fails() {
                return PredicateVerdict::violated(Witness {
                    k,
                    lhs: c.lhs,
                    rhs: c.rhs,
                    condition: c.condition.to_string(),
                });
            }
        }
    }
    let status = if d.certifies(property) {
        Status::HoldsEverywhere
    } else {
        Status::HoldsOnWindow
    };
    PredicateVerdict::holding(status)
}
