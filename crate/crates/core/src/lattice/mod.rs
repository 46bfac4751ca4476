//! Weight diagrams of 2-variable weighted shifts.
//!
//! A shift `W(α,β) = (T1, T2)` acts on the basis `e_k`, `k ∈ Z₊²`, by
//! `T1 e_k = α_k e_{k+ε1}` and `T2 e_k = β_k e_{k+ε2}`. Everything here is
//! stored in squared form, `x_k = α_k²` and `y_k = β_k²`, so that all the
//! identities the crate tests are polynomial identities over the rationals.
//!
//! A diagram has a finite *window* of materialized values plus a
//! [`TailRule`] saying whether (and how) values outside the window are
//! known. Predicates are verified exactly on the window, and reported as
//! holding everywhere only when the tail rule certifies it.

mod generators;
mod verdict;

use std::fmt;
use std::sync::Mutex;

use serde::{Deserialize, Serialize, Serializer};

pub use generators::{
    generate_constant, generate_explicit, generate_flat_above_row_zero, generate_ts,
    DEFAULT_WINDOW,
};
pub(crate) use verdict::{scan, Check};
pub use verdict::{PredicateVerdict, Status, Witness};

use crate::berger::{self, AtomicMeasure};
use crate::classify::OneVarShift;
use crate::error::{Error, Result};
use crate::powers::PowerSpec;
use crate::rational::Rational;

/// A point `k = (k1, k2)` of `Z₊²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub k1: usize,
    pub k2: usize,
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { k1: 0, k2: 0 };

    pub const fn new(k1: usize, k2: usize) -> Self {
        LatticePoint { k1, k2 }
    }

    /// `k + ε1`
    pub fn e1(self) -> Self {
        LatticePoint::new(self.k1 + 1, self.k2)
    }

    /// `k + ε2`
    pub fn e2(self) -> Self {
        LatticePoint::new(self.k1, self.k2 + 1)
    }

    pub fn offset(self, d1: usize, d2: usize) -> Self {
        LatticePoint::new(self.k1 + d1, self.k2 + d2)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.k1, self.k2)
    }
}

impl Serialize for LatticePoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        [self.k1, self.k2].serialize(serializer)
    }
}

/// The rectangle `{0..n1} × {0..n2}` of explicitly held lattice points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    pub n1: usize,
    pub n2: usize,
}

impl Window {
    pub const fn new(n1: usize, n2: usize) -> Self {
        Window { n1, n2 }
    }

    pub fn contains(&self, k: LatticePoint) -> bool {
        k.k1 < self.n1 && k.k2 < self.n2
    }

    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major scan: `k2` outer, `k1` inner.
    pub fn points(&self) -> impl Iterator<Item = LatticePoint> {
        let (n1, n2) = (self.n1, self.n2);
        (0..n2).flat_map(move |k2| (0..n1).map(move |k1| LatticePoint::new(k1, k2)))
    }

    fn index(&self, k: LatticePoint) -> usize {
        k.k2 * self.n1 + k.k1
    }

    fn clamp(&self, k: LatticePoint) -> LatticePoint {
        LatticePoint::new(k.k1.min(self.n1 - 1), k.k2.min(self.n2 - 1))
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.n1, self.n2)
    }
}

impl std::str::FromStr for Window {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("window must look like N1xN2, got {s:?}"));
        let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
        let n1: usize = a.trim().parse().map_err(|_| bad())?;
        let n2: usize = b.trim().parse().map_err(|_| bad())?;
        if n1 == 0 || n2 == 0 {
            return Err(Error::WindowTooSmall(format!("window {s} is empty")));
        }
        Ok(Window::new(n1, n2))
    }
}

/// How weights outside the window are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailRule {
    /// Nothing is known outside the window.
    None,
    /// Coordinates beyond the window are clamped to its last row/column.
    ConstantExtension,
    /// A closed-form generator evaluates any lattice point.
    Generator,
}

/// Properties a diagram's construction may certify on all of `Z₊²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Property {
    Commutative,
    Spherical,
    Constant,
    ToralFixed,
    TransformsAgree,
    ToralCommutes,
    Hyponormal,
    MomentSpherical,
}

/// Memoized row 0 of the flat-above-row-zero family.
#[derive(Debug)]
pub(crate) struct FlatRow {
    pub a: Rational,
    pub c: Rational,
    pub y00: Rational,
    row0_y: Mutex<Vec<Rational>>,
}

impl FlatRow {
    pub fn new(a: Rational, c: Rational, y00: Rational) -> Self {
        let row0_y = Mutex::new(vec![y00.clone()]);
        FlatRow { a, c, y00, row0_y }
    }

    /// The recurrence is stationary exactly when `y00 = C - a`.
    pub fn is_constant(&self) -> bool {
        self.y00 == &self.c - &self.a
    }

    /// `y_{k+1,0} = a·y_{k,0} / x_{k,0}` with `x = C − y`; `None` once the
    /// sequence leaves `(0, C)`.
    fn row0_y(&self, k1: usize) -> Option<Rational> {
        let mut memo = self.row0_y.lock().unwrap_or_else(|e| e.into_inner());
        while memo.len() <= k1 {
            let last = memo.last().expect("seeded");
            let x = &self.c - last;
            if !x.is_positive() {
                return None;
            }
            let next = &self.a * last / &x;
            if !next.is_positive() || next >= self.c {
                return None;
            }
            memo.push(next);
        }
        Some(memo[k1].clone())
    }
}

impl Clone for FlatRow {
    fn clone(&self) -> Self {
        let memo = self.row0_y.lock().unwrap_or_else(|e| e.into_inner()).clone();
        FlatRow {
            a: self.a.clone(),
            c: self.c.clone(),
            y00: self.y00.clone(),
            row0_y: Mutex::new(memo),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) enum Source {
    Explicit { tail: TailRule },
    Constant { x: Rational, y: Rational },
    FlatAboveRowZero(FlatRow),
    Ts { row: OneVarShift, y00: Rational },
    Measure(AtomicMeasure),
    Power { base: Box<WeightDiagram>, spec: PowerSpec },
}

impl Source {
    /// Closed-form weights at `k` for generator-backed sources.
    fn generate(&self, k: LatticePoint) -> Option<(Rational, Rational)> {
        match self {
            Source::Explicit { .. } => None,
            Source::Constant { x, y } => Some((x.clone(), y.clone())),
            Source::FlatAboveRowZero(f) => {
                if k.k2 >= 1 {
                    Some((f.a.clone(), &f.c - &f.a))
                } else {
                    let y = f.row0_y(k.k1)?;
                    Some((&f.c - &y, y))
                }
            }
            Source::Ts { row, y00 } => {
                let x = row.get(k.k1 + k.k2)?;
                let first = row.get(0)?;
                let y = &x * y00 / &first;
                Some((x, y))
            }
            Source::Measure(mu) => {
                let g = berger::measure_moment(mu, k);
                if !g.is_positive() {
                    return None;
                }
                let gx = berger::measure_moment(mu, k.e1());
                let gy = berger::measure_moment(mu, k.e2());
                if !gx.is_positive() || !gy.is_positive() {
                    return None;
                }
                Some((gx / &g, gy / g))
            }
            Source::Power { base, spec } => {
                let origin = LatticePoint::new(spec.m * k.k1 + spec.p, spec.n * k.k2 + spec.q);
                let mut x = Rational::one();
                for j in 0..spec.m {
                    x = x * base.x_at(origin.offset(j, 0))?;
                }
                let mut y = Rational::one();
                for j in 0..spec.n {
                    y = y * base.y_at(origin.offset(0, j))?;
                }
                Some((x, y))
            }
        }
    }
}

/// Squared weights `x_k = α_k²`, `y_k = β_k²` of a 2-variable weighted shift.
#[derive(Clone, Debug)]
pub struct WeightDiagram {
    window: Window,
    x: Vec<Rational>,
    y: Vec<Rational>,
    source: Source,
}

impl WeightDiagram {
    /// Materializes the window from a source and checks positivity.
    pub(crate) fn from_source(source: Source, window: Window) -> Result<Self> {
        if window.is_empty() {
            return Err(Error::WindowTooSmall("empty window".into()));
        }
        let mut x = Vec::with_capacity(window.len());
        let mut y = Vec::with_capacity(window.len());
        for k in window.points() {
            let (xk, yk) = match &source {
                Source::Measure(mu) => measure_weights(mu, k)?,
                _ => source.generate(k).ok_or(Error::OutOfWindow(k))?,
            };
            x.push(xk);
            y.push(yk);
        }
        let d = WeightDiagram { window, x, y, source };
        d.check_positive()?;
        Ok(d)
    }

    pub(crate) fn from_parts(
        window: Window,
        x: Vec<Rational>,
        y: Vec<Rational>,
        tail: TailRule,
    ) -> Result<Self> {
        if window.is_empty() {
            return Err(Error::WindowTooSmall("empty window".into()));
        }
        if x.len() != window.len() || y.len() != window.len() {
            return Err(Error::invalid(format!(
                "expected {} weights for a {window} window",
                window.len()
            )));
        }
        if tail == TailRule::Generator {
            return Err(Error::invalid("explicit diagrams cannot use a generator tail"));
        }
        let d = WeightDiagram {
            window,
            x,
            y,
            source: Source::Explicit { tail },
        };
        d.check_positive()?;
        Ok(d)
    }

    fn check_positive(&self) -> Result<()> {
        for k in self.window.points() {
            let i = self.window.index(k);
            if !self.x[i].is_positive() || !self.y[i].is_positive() {
                return Err(Error::invalid(format!(
                    "weights must be strictly positive; got x={}, y={} at {k}",
                    self.x[i], self.y[i]
                )));
            }
        }
        Ok(())
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn tail_rule(&self) -> TailRule {
        match &self.source {
            Source::Explicit { tail } => *tail,
            Source::Constant { .. } => TailRule::ConstantExtension,
            Source::Power { base, .. } if base.tail_rule() == TailRule::None => TailRule::None,
            _ => TailRule::Generator,
        }
    }

    /// Short name of the construction, as used in diagram files.
    pub fn kind(&self) -> &'static str {
        match &self.source {
            Source::Explicit { .. } => "explicit",
            Source::Constant { .. } => "constant",
            Source::FlatAboveRowZero(_) => "flat_above_row_zero",
            Source::Ts { .. } => "ts",
            Source::Measure(_) => "from_measure",
            Source::Power { .. } => "power",
        }
    }

    pub(crate) fn source(&self) -> &Source {
        &self.source
    }

    /// The Berger measure this diagram was generated from, if any.
    pub fn generating_measure(&self) -> Option<&AtomicMeasure> {
        match &self.source {
            Source::Measure(mu) => Some(mu),
            _ => None,
        }
    }

    /// Same construction, materialized on another window.
    pub fn with_window(&self, window: Window) -> Result<Self> {
        match &self.source {
            Source::Explicit { tail } => {
                let mut x = Vec::with_capacity(window.len());
                let mut y = Vec::with_capacity(window.len());
                for k in window.points() {
                    x.push(self.weight_x(k)?);
                    y.push(self.weight_y(k)?);
                }
                WeightDiagram::from_parts(window, x, y, *tail)
            }
            other => WeightDiagram::from_source(other.clone(), window),
        }
    }

    /// `x_k = α_k²`
    pub fn weight_x(&self, k: LatticePoint) -> Result<Rational> {
        self.x_at(k).ok_or(Error::OutOfWindow(k))
    }

    /// `y_k = β_k²`
    pub fn weight_y(&self, k: LatticePoint) -> Result<Rational> {
        self.y_at(k).ok_or(Error::OutOfWindow(k))
    }

    pub(crate) fn x_at(&self, k: LatticePoint) -> Option<Rational> {
        self.lookup(k).map(|(x, _)| x)
    }

    pub(crate) fn y_at(&self, k: LatticePoint) -> Option<Rational> {
        self.lookup(k).map(|(_, y)| y)
    }

    fn lookup(&self, k: LatticePoint) -> Option<(Rational, Rational)> {
        if self.window.contains(k) {
            let i = self.window.index(k);
            return Some((self.x[i].clone(), self.y[i].clone()));
        }
        match &self.source {
            Source::Explicit { tail: TailRule::ConstantExtension } => {
                let i = self.window.index(self.window.clamp(k));
                Some((self.x[i].clone(), self.y[i].clone()))
            }
            Source::Explicit { .. } => None,
            other => other.generate(k),
        }
    }

    /// Window values as rows indexed by `k2`.
    pub fn x_rows(&self) -> Vec<Vec<Rational>> {
        self.x.chunks(self.window.n1).map(<[_]>::to_vec).collect()
    }

    pub fn y_rows(&self) -> Vec<Vec<Rational>> {
        self.y.chunks(self.window.n1).map(<[_]>::to_vec).collect()
    }

    /// Whether the construction guarantees `property` on all of `Z₊²` once
    /// it has been verified on the window.
    pub(crate) fn certifies(&self, property: Property) -> bool {
        match &self.source {
            // Beyond the window every neighbourhood repeats one that touches
            // the last row or column, and those are part of the scan.
            Source::Explicit { tail } => *tail == TailRule::ConstantExtension,
            Source::Constant { .. } => true,
            Source::FlatAboveRowZero(f) => {
                f.is_constant()
                    || matches!(
                        property,
                        Property::Commutative | Property::Spherical | Property::MomentSpherical
                    )
            }
            Source::Ts { row, .. } => {
                row.is_constant_everywhere()
                    || matches!(
                        property,
                        Property::Commutative
                            | Property::TransformsAgree
                            | Property::ToralCommutes
                    )
            }
            Source::Measure(mu) => measure_certifies(mu, property),
            Source::Power { base, spec } => match &base.source {
                Source::Measure(mu) => match mu.power_pushforward(spec) {
                    Ok(pushed) => measure_certifies(&pushed, property),
                    Err(_) => false,
                },
                _ => {
                    base.certifies(Property::Constant)
                        || (property == Property::Commutative
                            && base.certifies(Property::Commutative))
                }
            },
        }
    }
}

fn measure_weights(mu: &AtomicMeasure, k: LatticePoint) -> Result<(Rational, Rational)> {
    let g = berger::measure_moment(mu, k);
    if !g.is_positive() {
        return Err(Error::ZeroMoment(k));
    }
    let gx = berger::measure_moment(mu, k.e1());
    if !gx.is_positive() {
        return Err(Error::ZeroMoment(k.e1()));
    }
    let gy = berger::measure_moment(mu, k.e2());
    if !gy.is_positive() {
        return Err(Error::ZeroMoment(k.e2()));
    }
    Ok((gx / &g, gy / g))
}

/// Measure-generated diagrams: moment ratios always commute, and the
/// weights sum to `C` everywhere exactly when every atom lies on the line
/// `s + t = C` (then `x_k + y_k = ∫ s^k1 t^k2 (s+t) dμ / γ_k = C`).
fn measure_certifies(mu: &AtomicMeasure, property: Property) -> bool {
    if mu.atoms().len() == 1 {
        return true;
    }
    match property {
        Property::Commutative => true,
        Property::Spherical | Property::MomentSpherical => {
            let first = &mu.atoms()[0];
            let c = &first.s + &first.t;
            mu.atoms().iter().all(|a| &a.s + &a.t == c)
        }
        _ => false,
    }
}

/// Tests `y_{k+ε1}·x_k = x_{k+ε2}·y_k` at every applicable `k` of the window.
pub fn check_commutative(d: &WeightDiagram) -> PredicateVerdict {
    scan(d, Property::Commutative, |k| {
        let lhs = d.y_at(k.e1())? * d.x_at(k)?;
        let rhs = d.x_at(k.e2())? * d.y_at(k)?;
        Some(vec![Check::new(lhs, rhs, "y(k+e1)*x(k) = x(k+e2)*y(k)")])
    })
}

/// Like [`check_commutative`] but an error when violated.
pub(crate) fn require_commutative(d: &WeightDiagram) -> Result<()> {
    match check_commutative(d).witness {
        Some(w) => Err(Error::NotCommutative(Box::new(w))),
        None => Ok(()),
    }
}

/// The lattice moment `γ_k`: the product of squared weights along the path
/// from the origin that runs along row 0 and then up column `k1`.
pub fn moment(d: &WeightDiagram, k: LatticePoint) -> Result<Rational> {
    for k2 in 0..k.k2 {
        for k1 in 0..k.k1 {
            let p = LatticePoint::new(k1, k2);
            let lhs = d.weight_y(p.e1())? * d.weight_x(p)?;
            let rhs = d.weight_x(p.e2())? * d.weight_y(p)?;
            if lhs != rhs {
                return Err(Error::NotCommutative(Box::new(Witness {
                    k: p,
                    lhs,
                    rhs,
                    condition: "y(k+e1)*x(k) = x(k+e2)*y(k)".into(),
                })));
            }
        }
    }
    let gamma = row_first_moment(d, k)?;
    debug_assert_eq!(gamma, column_first_moment(d, k)?);
    Ok(gamma)
}

pub(crate) fn row_first_moment(d: &WeightDiagram, k: LatticePoint) -> Result<Rational> {
    let mut g = Rational::one();
    for i in 0..k.k1 {
        g = g * d.weight_x(LatticePoint::new(i, 0))?;
    }
    for j in 0..k.k2 {
        g = g * d.weight_y(LatticePoint::new(k.k1, j))?;
    }
    Ok(g)
}

pub(crate) fn column_first_moment(d: &WeightDiagram, k: LatticePoint) -> Result<Rational> {
    let mut g = Rational::one();
    for j in 0..k.k2 {
        g = g * d.weight_y(LatticePoint::new(0, j))?;
    }
    for i in 0..k.k1 {
        g = g * d.weight_x(LatticePoint::new(i, k.k2))?;
    }
    Ok(g)
}
