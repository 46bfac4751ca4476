//! Toral and spherical Aluthge transforms of weight diagrams.
//!
//! In squared form the toral transform maps
//! `x_k ↦ √(x_k·x_{k+ε1})`, `y_k ↦ √(y_k·y_{k+ε2})`, and the spherical
//! transform maps `x_k ↦ x_k·√(S_{k+ε1}/S_k)`, `y_k ↦ y_k·√(S_{k+ε2}/S_k)`
//! with `S_k = x_k + y_k`. Transformed weights are irrational in general and
//! are computed numerically; every fixed-point and agreement question is
//! decided by an exact rational identity instead.

use serde::Serialize;

use crate::classify::is_spherically_quasinormal;
use crate::error::{Error, Result};
use crate::lattice::{scan, Check, LatticePoint, PredicateVerdict, Property, WeightDiagram, Window};
use crate::numeric::{
    check_precision, decimal_digits, format_decimal, relative_deviation, to_float, to_rational,
    Float, DEFAULT_PRECISION, RM,
};
use crate::rational::Rational;

/// Squared weights held as high-precision floats.
#[derive(Clone, Debug)]
pub struct NumericDiagram {
    window: Window,
    x: Vec<Float>,
    y: Vec<Float>,
    precision: usize,
}

impl NumericDiagram {
    /// Rounds the window of an exact diagram.
    pub fn from_exact(d: &WeightDiagram, precision: usize) -> Result<Self> {
        let precision = check_precision(precision)?;
        let window = d.window();
        let mut x = Vec::with_capacity(window.len());
        let mut y = Vec::with_capacity(window.len());
        for k in window.points() {
            x.push(to_float(&d.weight_x(k)?, precision));
            y.push(to_float(&d.weight_y(k)?, precision));
        }
        Ok(NumericDiagram { window, x, y, precision })
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    fn index(&self, k: LatticePoint) -> Option<usize> {
        self.window.contains(k).then(|| k.k2 * self.window.n1 + k.k1)
    }

    pub fn x(&self, k: LatticePoint) -> Option<&Float> {
        self.index(k).map(|i| &self.x[i])
    }

    pub fn y(&self, k: LatticePoint) -> Option<&Float> {
        self.index(k).map(|i| &self.y[i])
    }

    /// Exact value of the stored float.
    pub fn x_exact(&self, k: LatticePoint) -> Option<Rational> {
        self.x(k).map(to_rational)
    }

    pub fn y_exact(&self, k: LatticePoint) -> Option<Rational> {
        self.y(k).map(to_rational)
    }

    /// Largest relative deviation from `other` over the common window.
    pub fn max_relative_deviation(&self, other: &NumericDiagram) -> Rational {
        let p = self.precision.max(other.precision);
        let common = Window::new(
            self.window.n1.min(other.window.n1),
            self.window.n2.min(other.window.n2),
        );
        let mut worst = Rational::zero();
        for k in common.points() {
            for (a, b) in [(self.x(k), other.x(k)), (self.y(k), other.y(k))] {
                let dev = to_rational(&relative_deviation(a.unwrap(), b.unwrap(), p));
                if dev > worst {
                    worst = dev;
                }
            }
        }
        worst
    }

    /// Largest absolute difference over the common window.
    pub fn sup_distance(&self, other: &NumericDiagram) -> Rational {
        let common = Window::new(
            self.window.n1.min(other.window.n1),
            self.window.n2.min(other.window.n2),
        );
        let mut worst = Rational::zero();
        for k in common.points() {
            for (a, b) in [(self.x(k), other.x(k)), (self.y(k), other.y(k))] {
                let dev = (to_rational(a.unwrap()) - to_rational(b.unwrap())).abs();
                if dev > worst {
                    worst = dev;
                }
            }
        }
        worst
    }

    /// Rows of decimal strings (indexed by `k2`) for `x` and `y`.
    pub fn decimal_rows(&self) -> (Vec<Vec<String>>, Vec<Vec<String>>) {
        let digits = decimal_digits(self.precision);
        let rows = |v: &[Float]| {
            v.chunks(self.window.n1)
                .map(|row| row.iter().map(|f| format_decimal(&to_rational(f), digits)).collect())
                .collect()
        };
        (rows(&self.x), rows(&self.y))
    }
}

#[derive(Serialize)]
struct NumericDiagramFile {
    window: [usize; 2],
    precision: usize,
    x: Vec<Vec<String>>,
    y: Vec<Vec<String>>,
}

impl Serialize for NumericDiagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (x, y) = self.decimal_rows();
        NumericDiagramFile {
            window: [self.window.n1, self.window.n2],
            precision: self.precision,
            x,
            y,
        }
        .serialize(s)
    }
}

/// Either an exact diagram (tail lookups allowed) or a numeric one
/// (window only).
#[derive(Clone, Copy)]
pub enum TransformInput<'a> {
    Exact(&'a WeightDiagram),
    Numeric(&'a NumericDiagram),
}

impl<'a> From<&'a WeightDiagram> for TransformInput<'a> {
    fn from(d: &'a WeightDiagram) -> Self {
        TransformInput::Exact(d)
    }
}

impl<'a> From<&'a NumericDiagram> for TransformInput<'a> {
    fn from(d: &'a NumericDiagram) -> Self {
        TransformInput::Numeric(d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransformKind {
    Toral,
    Spherical,
}

impl std::str::FromStr for TransformKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "toral" => Ok(TransformKind::Toral),
            "spherical" => Ok(TransformKind::Spherical),
            _ => Err(Error::Parse(format!("unknown transform {s:?}"))),
        }
    }
}

/// The output window: the input window, shrunk by one along each axis
/// whose next row or column of weights is unavailable.
fn output_window(input: TransformInput<'_>) -> Result<Window> {
    let w = match input {
        TransformInput::Exact(d) => d.window(),
        TransformInput::Numeric(d) => d.window(),
    };
    let (n1, n2) = match input {
        TransformInput::Numeric(_) => (w.n1 - 1, w.n2 - 1),
        TransformInput::Exact(d) => {
            let avail = |k: LatticePoint| d.x_at(k).is_some() && d.y_at(k).is_some();
            let col = (0..w.n2).all(|k2| avail(LatticePoint::new(w.n1, k2)));
            let row = (0..w.n1).all(|k1| avail(LatticePoint::new(k1, w.n2)));
            (if col { w.n1 } else { w.n1 - 1 }, if row { w.n2 } else { w.n2 - 1 })
        }
    };
    if n1 == 0 || n2 == 0 {
        return Err(Error::WindowTooSmall(format!(
            "a transform of a {w} window without tail values is empty"
        )));
    }
    Ok(Window::new(n1, n2))
}

fn transform(input: TransformInput<'_>, kind: TransformKind, precision: usize) -> Result<NumericDiagram> {
    let p = check_precision(precision)?;
    let window = output_window(input)?;
    let mut x = Vec::with_capacity(window.len());
    let mut y = Vec::with_capacity(window.len());
    for k in window.points() {
        let (xk, yk) = match input {
            TransformInput::Exact(d) => exact_point(d, k, kind, p)?,
            TransformInput::Numeric(d) => numeric_point(d, k, kind, p),
        };
        x.push(xk);
        y.push(yk);
    }
    Ok(NumericDiagram { window, x, y, precision: p })
}

/// One rounding of an exact rational radicand, then one square root.
fn exact_point(d: &WeightDiagram, k: LatticePoint, kind: TransformKind, p: usize) -> Result<(Float, Float)> {
    let (xk, yk) = (d.weight_x(k)?, d.weight_y(k)?);
    let (x1, y1) = (d.weight_x(k.e1())?, d.weight_y(k.e1())?);
    let (x2, y2) = (d.weight_x(k.e2())?, d.weight_y(k.e2())?);
    let (rx, ry) = match kind {
        TransformKind::Toral => (&xk * &x1, &yk * &y2),
        TransformKind::Spherical => {
            let s = &xk + &yk;
            (&xk * &xk * (&x1 + &y1) / &s, &yk * &yk * (&x2 + &y2) / &s)
        }
    };
    Ok((to_float(&rx, p).sqrt(p, RM), to_float(&ry, p).sqrt(p, RM)))
}

fn numeric_point(d: &NumericDiagram, k: LatticePoint, kind: TransformKind, p: usize) -> (Float, Float) {
    let get = |v: Option<&Float>| v.expect("inside the shrunk window").clone();
    let (xk, yk) = (get(d.x(k)), get(d.y(k)));
    let (x1, y1) = (get(d.x(k.e1())), get(d.y(k.e1())));
    let (x2, y2) = (get(d.x(k.e2())), get(d.y(k.e2())));
    match kind {
        TransformKind::Toral => (
            xk.mul(&x1, p, RM).sqrt(p, RM),
            yk.mul(&y2, p, RM).sqrt(p, RM),
        ),
        TransformKind::Spherical => {
            let s = xk.add(&yk, p, RM);
            let s1 = x1.add(&y1, p, RM);
            let s2 = x2.add(&y2, p, RM);
            (
                xk.mul(&s1.div(&s, p, RM).sqrt(p, RM), p, RM),
                yk.mul(&s2.div(&s, p, RM).sqrt(p, RM), p, RM),
            )
        }
    }
}

/// `x'_k = √(x_k·x_{k+ε1})`, `y'_k = √(y_k·y_{k+ε2})`.
pub fn toral_transform<'a>(d: impl Into<TransformInput<'a>>, precision: usize) -> Result<NumericDiagram> {
    transform(d.into(), TransformKind::Toral, precision)
}

/// `x'_k = x_k·√(S_{k+ε1}/S_k)`, `y'_k = y_k·√(S_{k+ε2}/S_k)`, `S = x + y`.
pub fn spherical_transform<'a>(d: impl Into<TransformInput<'a>>, precision: usize) -> Result<NumericDiagram> {
    transform(d.into(), TransformKind::Spherical, precision)
}

/// The toral transform of a commutative diagram commutes iff
/// `x_{k+ε2}·x_{k+ε1+ε2} = x_{k+ε1}·x_{k+2ε2}` for all `k`.
pub fn toral_transform_commutes(d: &WeightDiagram) -> PredicateVerdict {
    scan(d, Property::ToralCommutes, |k| {
        let lhs = d.x_at(k.e2())? * d.x_at(k.offset(1, 1))?;
        let rhs = d.x_at(k.e1())? * d.x_at(k.offset(0, 2))?;
        Some(vec![Check::new(lhs, rhs, "x(k+e2)*x(k+e1+e2) = x(k+e1)*x(k+2e2)")])
    })
}

/// `x_{k+ε1} = x_k` and `y_{k+ε2} = y_k` for all `k`: the exact fixed-point
/// condition of the toral transform.
pub fn is_toral_fixed_point(d: &WeightDiagram) -> PredicateVerdict {
    scan(d, Property::ToralFixed, |k| {
        let mut checks = Vec::with_capacity(2);
        if let Some(x1) = d.x_at(k.e1()) {
            checks.push(Check::new(d.x_at(k)?, x1, "x(k) = x(k+e1)"));
        }
        if let Some(y2) = d.y_at(k.e2()) {
            checks.push(Check::new(d.y_at(k)?, y2, "y(k) = y(k+e2)"));
        }
        Some(checks)
    })
}

/// Fixed points of the spherical transform are exactly the spherically
/// quasinormal diagrams; the verdict is that of
/// [`is_spherically_quasinormal`]. Debug builds also confirm it numerically.
pub fn is_spherical_fixed_point(d: &WeightDiagram) -> PredicateVerdict {
    let verdict = is_spherically_quasinormal(d);
    #[cfg(debug_assertions)]
    if verdict.holds() {
        if let Ok(dev) = spherical_fixed_point_deviation(d, DEFAULT_PRECISION) {
            debug_assert!(dev < crate::numeric::pow2_neg(DEFAULT_PRECISION / 2), "deviation {dev}");
        }
    }
    verdict.with_explanation("spherical Aluthge fixed point iff x(k)+y(k) is constant")
}

/// Largest relative change the spherical transform makes to `d` on the
/// transform's window.
pub fn spherical_fixed_point_deviation(d: &WeightDiagram, precision: usize) -> Result<Rational> {
    let t = spherical_transform(d, precision)?;
    let original = NumericDiagram::from_exact(&d.with_window(t.window())?, precision)?;
    Ok(t.max_relative_deviation(&original))
}

/// `x_{k+ε1} = x_{k+ε2}` and `y_{k+ε2} = y_{k+ε1}`: for a commutative
/// diagram this is exactly when the toral and spherical transforms agree.
pub fn transforms_agree(d: &WeightDiagram) -> PredicateVerdict {
    scan(d, Property::TransformsAgree, |k| {
        Some(vec![
            Check::new(d.x_at(k.e1())?, d.x_at(k.e2())?, "x(k+e1) = x(k+e2)"),
            Check::new(d.y_at(k.e2())?, d.y_at(k.e1())?, "y(k+e2) = y(k+e1)"),
        ])
    })
}

/// Successive transforms with their sup-norm step sizes.
#[derive(Clone, Debug, Serialize)]
pub struct Iteration {
    pub kind: TransformKind,
    pub precision: usize,
    /// `diagrams[0]` is the input, rounded.
    pub diagrams: Vec<NumericDiagram>,
    /// `deltas[i]` is the sup-norm distance between `diagrams[i+1]` and
    /// `diagrams[i]` on their common window.
    #[serde(serialize_with = "serialize_deltas")]
    pub deltas: Vec<Rational>,
    /// Step at which the window ran out, if it did.
    pub exhausted_at: Option<usize>,
}

fn serialize_deltas<S: serde::Serializer>(deltas: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    let digits = 20;
    s.collect_seq(deltas.iter().map(|d| format_decimal(d, digits)))
}

pub fn iterate(d: &WeightDiagram, kind: TransformKind, steps: usize, precision: usize) -> Result<Iteration> {
    let precision = check_precision(precision)?;
    let mut diagrams = vec![NumericDiagram::from_exact(d, precision)?];
    let mut deltas = Vec::with_capacity(steps);
    let mut exhausted_at = None;
    for step in 1..=steps {
        let next = if step == 1 {
            transform(TransformInput::Exact(d), kind, precision)
        } else {
            transform(TransformInput::Numeric(diagrams.last().unwrap()), kind, precision)
        };
        match next {
            Ok(next) => {
                deltas.push(next.sup_distance(diagrams.last().unwrap()));
                diagrams.push(next);
            }
            Err(Error::WindowTooSmall(_)) => {
                exhausted_at = Some(step);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Iteration { kind, precision, diagrams, deltas, exhausted_at })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{generate_constant, generate_flat_above_row_zero, Status};
    use crate::numeric::pow2_neg;
    use crate::rational::q;

    fn ex1() -> WeightDiagram {
        generate_flat_above_row_zero(q(1, 3), q(1, 3), q(1, 1)).unwrap()
    }

    #[test]
    fn helton_howe_is_fixed_by_both_transforms() {
        let hh = generate_constant(q(1, 1), q(1, 1)).unwrap();
        for t in [toral_transform(&hh, 256).unwrap(), spherical_transform(&hh, 256).unwrap()] {
            assert_eq!(t.window(), hh.window());
            for k in t.window().points() {
                assert_eq!(t.x_exact(k).unwrap(), q(1, 1));
                assert_eq!(t.y_exact(k).unwrap(), q(1, 1));
            }
        }
    }

    #[test]
    fn toral_transform_of_ex1_at_origin() {
        // sqrt((2/3)(5/6)) = sqrt(5)/3
        let t = toral_transform(&ex1(), 256).unwrap();
        let v = t.x_exact(LatticePoint::ORIGIN).unwrap();
        let target = q(5, 9);
        assert!((&v * &v - &target).abs() / target < pow2_neg(250));
        assert_eq!(format_decimal(&v, 8), "7.4535599e-1");
    }

    #[test]
    fn spherical_transform_fixes_ex1() {
        let d = ex1();
        let t = spherical_transform(&d, 256).unwrap();
        for k in t.window().points() {
            let x = d.weight_x(k).unwrap();
            assert!((t.x_exact(k).unwrap() - &x).abs() / x < pow2_neg(250));
        }
        assert!(spherical_fixed_point_deviation(&d, 256).unwrap() < pow2_neg(128));
    }

    #[test]
    fn predicates_on_ex1() {
        let d = ex1();
        let v = toral_transform_commutes(&d);
        let w = v.witness.unwrap();
        assert_eq!((w.k, w.lhs, w.rhs), (LatticePoint::ORIGIN, q(1, 9), q(5, 18)));
        assert_eq!(is_toral_fixed_point(&d).status, Status::Violated);
        assert_eq!(is_spherical_fixed_point(&d).status, Status::HoldsEverywhere);
        let w = transforms_agree(&d).witness.unwrap();
        assert_eq!((w.lhs, w.rhs), (q(5, 6), q(1, 3)));
    }

    #[test]
    fn iteration_diagnostics() {
        let hh = generate_constant(q(1, 1), q(1, 1)).unwrap();
        let it = iterate(&hh, TransformKind::Toral, 5, 256).unwrap();
        assert_eq!(it.deltas.len(), 5);
        assert!(it.deltas.iter().all(Rational::is_zero));

        let it = iterate(&ex1(), TransformKind::Spherical, 5, 256).unwrap();
        assert!(it.deltas.iter().all(|d| d < &pow2_neg(128)));

        let it = iterate(&ex1(), TransformKind::Toral, 3, 256).unwrap();
        assert!(it.deltas[0].is_positive());
    }

    #[test]
    fn iteration_reports_window_exhaustion() {
        let it = iterate(&ex1(), TransformKind::Toral, 12, 128).unwrap();
        // 8x8 survives step 1 via the generator, then shrinks by one per step
        assert_eq!(it.exhausted_at, Some(9));
        assert_eq!(it.diagrams.last().unwrap().window(), Window::new(1, 1));
    }

    #[test]
    fn low_precision_is_rejected() {
        assert!(toral_transform(&ex1(), 32).is_err());
    }
}
