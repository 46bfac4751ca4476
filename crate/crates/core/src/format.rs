//! JSON file formats for diagrams, measures and moment sequences.
//!
//! A diagram file names its construction and, for generator kinds, the
//! parameters that rebuild it:
//!
//! ```json
//! {"kind": "flat_above_row_zero", "window": [8, 8],
//!  "params": {"a": "1/3", "y00": "1/3", "c": "1"}}
//! ```
//!
//! `explicit` diagrams list `x` and `y` as rows indexed by `k2`, plus an
//! optional `"tail"` (`"none"` or `"constant-extension"`). Written files
//! always carry the materialized `x` and `y` of the window; they are
//! ignored on input for generator kinds.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::berger::{shift_from_measure, AtomicMeasure};
use crate::classify::OneVarShift;
use crate::error::{Error, Result};
use crate::lattice::{
    generate_constant, generate_explicit, generate_flat_above_row_zero, generate_ts, Source,
    TailRule, WeightDiagram, Window,
};
use crate::powers::{power_subspace_diagram, PowerSpec};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramFile {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<TailRule>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub x: Vec<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub y: Vec<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub params: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FlatParams {
    a: Rational,
    y00: Rational,
    c: Rational,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstantParams {
    x: Rational,
    y: Rational,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TsParams {
    row0_x: Vec<Rational>,
    #[serde(default = "no_tail")]
    tail: TailRule,
    y00: Rational,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PowerParams {
    base: DiagramFile,
    m: usize,
    n: usize,
    p: usize,
    q: usize,
}

fn no_tail() -> TailRule {
    TailRule::None
}

fn params<T: DeserializeOwned>(kind: &str, v: &Value) -> Result<T> {
    serde_json::from_value(v.clone())
        .map_err(|e| Error::Parse(format!("bad params for {kind}: {e}")))
}

impl DiagramFile {
    /// Builds the diagram. `window` overrides the file's window; without
    /// either, generators use their default window.
    pub fn build(&self, window: Option<Window>) -> Result<WeightDiagram> {
        let window = window.or(self.window.map(|[n1, n2]| Window::new(n1, n2)));
        let d = match self.kind.as_str() {
            "explicit" => {
                if !self.params.is_null() {
                    return Err(Error::Parse("explicit diagrams take no params".into()));
                }
                generate_explicit(self.x.clone(), self.y.clone(), self.tail.unwrap_or(TailRule::None))?
            }
            "constant" => {
                let p: ConstantParams = params(&self.kind, &self.params)?;
                generate_constant(p.x, p.y)?
            }
            "flat_above_row_zero" => {
                let p: FlatParams = params(&self.kind, &self.params)?;
                generate_flat_above_row_zero(p.a, p.y00, p.c)?
            }
            "ts" => {
                let p: TsParams = params(&self.kind, &self.params)?;
                generate_ts(OneVarShift::new(p.row0_x, p.tail)?, p.y00)?
            }
            "from_measure" => {
                let mu: AtomicMeasure = params(&self.kind, &self.params)?;
                let w = window.unwrap_or(crate::lattice::DEFAULT_WINDOW);
                return shift_from_measure(&mu, w);
            }
            "power" => {
                let p: PowerParams = params(&self.kind, &self.params)?;
                let base = p.base.build(None)?;
                let d = power_subspace_diagram(&base, PowerSpec::new(p.m, p.n, p.p, p.q)?)?;
                return match window {
                    Some(w) => d.with_window(w),
                    None => Ok(d),
                };
            }
            other => {
                return Err(Error::Parse(format!(
                    "unknown diagram kind {other:?}; expected explicit, constant, \
                     flat_above_row_zero, ts, from_measure or power"
                )))
            }
        };
        match window {
            Some(w) if w != d.window() => d.with_window(w),
            _ => Ok(d),
        }
    }

    /// Describes `d`, including its window values.
    pub fn describe(d: &WeightDiagram) -> DiagramFile {
        let w = d.window();
        let (tail, params) = match d.source() {
            Source::Explicit { tail } => (Some(*tail), Value::Null),
            Source::Constant { x, y } => (None, json!({ "x": x, "y": y })),
            Source::FlatAboveRowZero(f) => (None, json!({ "a": f.a, "y00": f.y00, "c": f.c })),
            Source::Ts { row, y00 } => (
                None,
                json!({ "row0_x": row.weights(), "tail": row.tail_rule(), "y00": y00 }),
            ),
            Source::Measure(mu) => (None, serde_json::to_value(mu).expect("serializable")),
            Source::Power { base, spec } => (
                None,
                json!({
                    "base": DiagramFile::describe(base),
                    "m": spec.m, "n": spec.n, "p": spec.p, "q": spec.q,
                }),
            ),
        };
        DiagramFile {
            kind: d.kind().to_string(),
            window: Some([w.n1, w.n2]),
            tail,
            x: d.x_rows(),
            y: d.y_rows(),
            params,
        }
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn read_diagram(path: &Path, window: Option<Window>) -> Result<WeightDiagram> {
    read_json::<DiagramFile>(path)?.build(window)
}

/// Pretty JSON with a trailing newline; key order follows the types.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}
