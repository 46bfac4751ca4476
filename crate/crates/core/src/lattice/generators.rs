//! Built-in diagram families.

use super::{FlatRow, Source, TailRule, WeightDiagram, Window};
use crate::classify::OneVarShift;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Window used by generators unless the caller picks another one with
/// [`WeightDiagram::with_window`].
pub const DEFAULT_WINDOW: Window = Window::new(8, 8);

/// A diagram given by its window values, rows indexed by `k2`.
pub fn generate_explicit(
    x_rows: Vec<Vec<Rational>>,
    y_rows: Vec<Vec<Rational>>,
    tail: TailRule,
) -> Result<WeightDiagram> {
    let n2 = x_rows.len();
    let n1 = x_rows.first().map_or(0, Vec::len);
    if y_rows.len() != n2
        || x_rows.iter().chain(&y_rows).any(|row| row.len() != n1)
    {
        return Err(Error::invalid("x and y must be rectangular arrays of equal shape"));
    }
    let window = Window::new(n1, n2);
    let x = x_rows.into_iter().flatten().collect();
    let y = y_rows.into_iter().flatten().collect();
    WeightDiagram::from_parts(window, x, y, tail)
}

/// `x ≡ r1_sq`, `y ≡ r2_sq`: the Helton–Howe shift scaled by `(r1, r2)`.
pub fn generate_constant(r1_sq: Rational, r2_sq: Rational) -> Result<WeightDiagram> {
    if !r1_sq.is_positive() || !r2_sq.is_positive() {
        return Err(Error::invalid(format!(
            "constant weights must be positive, got ({r1_sq}, {r2_sq})"
        )));
    }
    WeightDiagram::from_source(Source::Constant { x: r1_sq, y: r2_sq }, DEFAULT_WINDOW)
}

/// Rows `k2 ≥ 1` carry `x = a`, `y = C − a`; row 0 is forced by
/// commutativity: `y_{k+1,0} = a·y_{k,0}/x_{k,0}` with `x_{k,0} = C − y_{k,0}`.
/// Every point has `x_k + y_k = C`.
///
/// `(1/3, 1/3, 1)` is the spherical isometry whose row 0 reads
/// `x = 2/3, 5/6, 14/15, 41/42, …`.
pub fn generate_flat_above_row_zero(
    a: Rational,
    y00: Rational,
    c: Rational,
) -> Result<WeightDiagram> {
    if !a.is_positive() || a >= c {
        return Err(Error::invalid(format!("need 0 < a < C, got a={a}, C={c}")));
    }
    if !y00.is_positive() || y00 >= c {
        return Err(Error::invalid(format!("need 0 < y00 < C, got y00={y00}, C={c}")));
    }
    let flat = FlatRow::new(a, c, y00);
    let window = DEFAULT_WINDOW;
    if flat.row0_y(window.n1).is_none() {
        return Err(Error::invalid(
            "row-0 recurrence leaves (0, C) inside the window; choose y00 < C - a",
        ));
    }
    WeightDiagram::from_source(Source::FlatAboveRowZero(flat), window)
}

/// The diagram on which the toral and spherical Aluthge transforms agree:
/// `x_(k1,k2) = row0_x[k1+k2]` and `y_(k1,k2) = row0_x[k1+k2]·y00/row0_x[0]`.
///
/// With a finite row (tail rule `None`) the window is the largest square
/// the row can fill.
pub fn generate_ts(row0_x: OneVarShift, y00: Rational) -> Result<WeightDiagram> {
    if !y00.is_positive() {
        return Err(Error::invalid(format!("y00 must be positive, got {y00}")));
    }
    let window = match row0_x.tail_rule() {
        TailRule::None => {
            let n = row0_x.len().div_ceil(2);
            if n == 0 {
                return Err(Error::WindowTooSmall("empty row".into()));
            }
            Window::new(n, n)
        }
        _ => DEFAULT_WINDOW,
    };
    WeightDiagram::from_source(Source::Ts { row: row0_x, y00 }, window)
}
