//! Truncated bivariate moment matrices.
//!
//! Moments here follow the matrix convention `γ_ij = ∫ y^i x^j dμ(x, y)`:
//! the first index is the power of `y`. A measure atom `(s, t)` contributes
//! `s` as `x` and `t` as `y`, so `γ_ij` equals the lattice moment
//! `γ_(j, i)`. Use [`lattice_point`] and [`matrix_index`] to convert.

pub mod linalg;

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::berger::{measure_moment, Atom, AtomicMeasure};
use crate::error::{Error, Result};
use crate::lattice::{moment, LatticePoint, WeightDiagram};
use crate::rational::Rational;

/// Lattice point holding the moment `γ_ij` (`i` = power of `y`).
pub fn lattice_point(i: usize, j: usize) -> LatticePoint {
    LatticePoint::new(j, i)
}

/// Inverse of [`lattice_point`].
pub fn matrix_index(k: LatticePoint) -> (usize, usize) {
    (k.k2, k.k1)
}

/// Moments `γ_ij` for `i + j ≤ 2n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiMomentSequence {
    n: usize,
    gamma: BTreeMap<(usize, usize), Rational>,
}

impl BiMomentSequence {
    /// Requires every `γ_ij` with `i + j ≤ 2n` and `γ_00 > 0`. Entries of
    /// higher order are dropped.
    pub fn new(n: usize, mut gamma: BTreeMap<(usize, usize), Rational>) -> Result<Self> {
        gamma.retain(|&(i, j), _| i + j <= 2 * n);
        for d in 0..=2 * n {
            for i in 0..=d {
                if !gamma.contains_key(&(i, d - i)) {
                    return Err(Error::invalid(format!("missing moment gamma_{},{}", i, d - i)));
                }
            }
        }
        if !gamma[&(0, 0)].is_positive() {
            return Err(Error::invalid("gamma_00 must be positive"));
        }
        Ok(BiMomentSequence { n, gamma })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `γ_ij`, with `i` the power of `y`.
    pub fn gamma(&self, i: usize, j: usize) -> Option<&Rational> {
        self.gamma.get(&(i, j))
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &Rational)> {
        self.gamma.iter().map(|(&k, v)| (k, v))
    }

    /// The same sequence cut down to order `n ≤ self.n()`.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        if n > self.n {
            return Err(Error::invalid(format!("cannot extend order {} to {n}", self.n)));
        }
        BiMomentSequence::new(n, self.gamma.clone())
    }

    fn ordered(&self) -> impl Iterator<Item = ((usize, usize), &Rational)> {
        (0..=2 * self.n).flat_map(move |d| (0..=d).map(move |i| ((i, d - i), &self.gamma[&(i, d - i)])))
    }
}

impl Serialize for BiMomentSequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Gamma<'a>(&'a BiMomentSequence);
        impl Serialize for Gamma<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.gamma.len()))?;
                for ((i, j), v) in self.0.ordered() {
                    map.serialize_entry(&format!("{i},{j}"), v)?;
                }
                map.end()
            }
        }
        let mut s = serializer.serialize_struct("BiMomentSequence", 2)?;
        s.serialize_field("n", &self.n)?;
        s.serialize_field("gamma", &Gamma(self))?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for BiMomentSequence {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            n: usize,
            gamma: BTreeMap<String, Rational>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let mut gamma = BTreeMap::new();
        for (key, v) in raw.gamma {
            let parsed = key
                .split_once(',')
                .and_then(|(i, j)| Some((i.trim().parse().ok()?, j.trim().parse().ok()?)));
            let Some(ij) = parsed else {
                return Err(de::Error::custom(format!("bad moment index {key:?}, expected \"i,j\"")));
            };
            gamma.insert(ij, v);
        }
        BiMomentSequence::new(raw.n, gamma).map_err(de::Error::custom)
    }
}

/// `γ_ij = Σ ρ t^i s^j` through order `2n`.
pub fn sequence_from_measure(mu: &AtomicMeasure, n: usize) -> BiMomentSequence {
    let mut gamma = BTreeMap::new();
    for d in 0..=2 * n {
        for i in 0..=d {
            gamma.insert((i, d - i), measure_moment(mu, lattice_point(i, d - i)));
        }
    }
    BiMomentSequence { n, gamma }
}

/// The moment sequence of a commutative diagram, read off its lattice
/// moments. Needs weights through total degree `2n`.
pub fn sequence_from_diagram(d: &WeightDiagram, n: usize) -> Result<BiMomentSequence> {
    let mut gamma = BTreeMap::new();
    for deg in 0..=2 * n {
        for i in 0..=deg {
            gamma.insert((i, deg - i), moment(d, lattice_point(i, deg - i))?);
        }
    }
    BiMomentSequence::new(n, gamma)
}

/// Column label `X^x Y^y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub x: usize,
    pub y: usize,
}

impl Monomial {
    pub fn new(x: usize, y: usize) -> Self {
        Monomial { x, y }
    }

    pub fn degree(self) -> usize {
        self.x + self.y
    }
}

/// Graded order, `X` before `Y` within a degree: `1, X, Y, X², XY, Y², …`.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree().cmp(&other.degree()).then(other.x.cmp(&self.x))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn part(f: &mut fmt::Formatter<'_>, var: char, e: usize) -> fmt::Result {
            match e {
                0 => Ok(()),
                1 => write!(f, "{var}"),
                _ => write!(f, "{var}^{e}"),
            }
        }
        if self.degree() == 0 {
            return f.write_str("1");
        }
        part(f, 'X', self.x)?;
        part(f, 'Y', self.y)
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Labels of `M(n)` in column order.
pub fn monomials(n: usize) -> Vec<Monomial> {
    (0..=n)
        .flat_map(|d| (0..=d).map(move |y| Monomial::new(d - y, y)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MomentMatrix {
    n: usize,
    labels: Vec<Monomial>,
    rows: Vec<Vec<Rational>>,
}

impl MomentMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[Monomial] {
        &self.labels
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn entry(&self, row: Monomial, col: Monomial) -> Option<&Rational> {
        let r = self.labels.iter().position(|&m| m == row)?;
        let c = self.labels.iter().position(|&m| m == col)?;
        Some(&self.rows[r][c])
    }

    /// Leading principal submatrix `M(m)`, `m ≤ n`.
    pub fn truncate(&self, m: usize) -> MomentMatrix {
        let m = m.min(self.n);
        let dim = (m + 1) * (m + 2) / 2;
        MomentMatrix {
            n: m,
            labels: self.labels[..dim].to_vec(),
            rows: self.rows[..dim].iter().map(|r| r[..dim].to_vec()).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim()).all(|i| (0..i).all(|j| self.rows[i][j] == self.rows[j][i]))
    }

    /// Each block `M[i, j]` (rows of degree `i`, columns of degree `j`) is
    /// constant along cross-diagonals.
    pub fn is_hankel_blocks(&self) -> bool {
        let start = |d: usize| d * (d + 1) / 2;
        for bi in 0..=self.n {
            for bj in 0..=self.n {
                for r in 0..bi {
                    for c in 1..=bj {
                        let a = &self.rows[start(bi) + r][start(bj) + c];
                        let b = &self.rows[start(bi) + r + 1][start(bj) + c - 1];
                        if a != b {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

impl fmt::Display for MomentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect();
        let labels: Vec<String> = self.labels.iter().map(ToString::to_string).collect();
        let width = cells
            .iter()
            .flatten()
            .chain(&labels)
            .map(|s| s.chars().count())
            .max()
            .unwrap_or(1);
        write!(f, "{:>width$}", "")?;
        for l in &labels {
            write!(f, " {l:>width$}")?;
        }
        writeln!(f)?;
        for (l, row) in labels.iter().zip(&cells) {
            write!(f, "{l:>width$}")?;
            for c in row {
                write!(f, " {c:>width$}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// `M(n)` with entry `γ_{a+c, b+d}` at row `X^b Y^a`, column `X^d Y^c`.
pub fn build_moment_matrix(g: &BiMomentSequence) -> MomentMatrix {
    let labels = monomials(g.n);
    let rows = labels
        .iter()
        .map(|u| {
            labels
                .iter()
                .map(|v| g.gamma[&(u.y + v.y, u.x + v.x)].clone())
                .collect()
        })
        .collect();
    let m = MomentMatrix { n: g.n, labels, rows };
    debug_assert!(m.is_hankel_blocks() && m.is_symmetric());
    m
}

pub fn psd_exact(m: &MomentMatrix) -> bool {
    linalg::is_psd(&m.rows)
}

pub fn rank_exact(m: &MomentMatrix) -> usize {
    linalg::rank(&m.rows)
}

/// A linear dependence `Σ c_v·v = 0` among the columns of a moment matrix,
/// scaled so the latest-labeled column has coefficient 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnRelation {
    coeffs: BTreeMap<Monomial, Rational>,
}

impl ColumnRelation {
    /// Builds `Σ c·v = 0` from terms, merging repeated monomials. `None` if
    /// every coefficient cancels.
    pub fn from_terms(terms: impl IntoIterator<Item = (Rational, Monomial)>) -> Option<Self> {
        let mut coeffs: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (c, v) in terms {
            let e = coeffs.entry(v).or_insert_with(Rational::zero);
            *e = &*e + c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        let lead = coeffs.values().next_back()?.clone();
        for c in coeffs.values_mut() {
            *c = &*c / &lead;
        }
        Some(ColumnRelation { coeffs })
    }

    /// `lhs = Σ c·v`, i.e. `lhs − Σ c·v = 0`.
    pub fn equation(lhs: Monomial, rhs: &[(Rational, Monomial)]) -> Option<Self> {
        ColumnRelation::from_terms(
            std::iter::once((Rational::one(), lhs)).chain(rhs.iter().map(|(c, v)| (-c, *v))),
        )
    }

    pub fn leading(&self) -> Monomial {
        *self.coeffs.keys().next_back().expect("relations are nonzero")
    }

    pub fn coefficient(&self, v: Monomial) -> Rational {
        self.coeffs.get(&v).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &Rational)> {
        self.coeffs.iter().map(|(&v, c)| (v, c))
    }

    /// Exact check that the combination of columns is the zero column.
    /// False if a monomial is not a label of `m`.
    pub fn evaluates_to_zero(&self, m: &MomentMatrix) -> bool {
        let mut idx = Vec::new();
        for (v, c) in self.terms() {
            match m.labels.iter().position(|&l| l == v) {
                Some(i) => idx.push((i, c)),
                None => return false,
            }
        }
        m.rows
            .iter()
            .all(|row| idx.iter().map(|&(i, c)| c * &row[i]).sum::<Rational>().is_zero())
    }

    fn vector(&self, labels: &[Monomial]) -> Option<Vec<Rational>> {
        if self.coeffs.keys().any(|v| !labels.contains(v)) {
            return None;
        }
        Some(labels.iter().map(|&l| self.coefficient(l)).collect())
    }
}

impl fmt::Display for ColumnRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lead = self.leading();
        write!(f, "{lead} =")?;
        let rhs: Vec<(Monomial, Rational)> = self
            .coeffs
            .iter()
            .filter(|(&v, _)| v != lead)
            .map(|(&v, c)| (v, -c))
            .collect();
        if rhs.is_empty() {
            return f.write_str(" 0");
        }
        for (i, (v, c)) in rhs.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            match (i, c.is_negative()) {
                (0, false) => f.write_str(" ")?,
                (0, true) => f.write_str(" -")?,
                _ => write!(f, " {sign} ")?,
            }
            let a = c.abs();
            if a == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{a}*{v}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for ColumnRelation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A basis of the column dependencies of `m`: one relation per non-pivot
/// column, writing it in terms of earlier pivot columns.
pub fn column_relations(m: &MomentMatrix) -> Vec<ColumnRelation> {
    let (r, pivots) = linalg::rref(&m.rows);
    let mut out = Vec::new();
    for f in (0..m.dim()).filter(|c| !pivots.contains(c)) {
        let rhs: Vec<(Rational, Monomial)> = pivots
            .iter()
            .enumerate()
            .filter(|&(_, &p)| p < f)
            .map(|(row, &p)| (r[row][f].clone(), m.labels[p]))
            .collect();
        out.push(ColumnRelation::equation(m.labels[f], &rhs).expect("leading term is 1"));
    }
    out
}

/// Whether `candidate` is a linear combination of `relations`.
pub fn relations_imply(relations: &[ColumnRelation], candidate: &ColumnRelation) -> bool {
    let mut labels: Vec<Monomial> = relations
        .iter()
        .chain(std::iter::once(candidate))
        .flat_map(|r| r.coeffs.keys().copied())
        .collect();
    labels.sort();
    labels.dedup();
    let basis: Vec<Vec<Rational>> = relations.iter().filter_map(|r| r.vector(&labels)).collect();
    let Some(c) = candidate.vector(&labels) else {
        return false;
    };
    let mut with = basis.clone();
    with.push(c);
    linalg::rank(&with) == linalg::rank(&basis)
}

/// `rank M(k)` for `k = 0..=n`.
pub fn ranks(g: &BiMomentSequence) -> Vec<usize> {
    let m = build_moment_matrix(g);
    (0..=g.n).map(|k| rank_exact(&m.truncate(k))).collect()
}

/// `rank M(n) = rank M(n−1)`. Always false for `n = 0`.
pub fn flat_extension(g: &BiMomentSequence) -> bool {
    let r = ranks(g);
    g.n >= 1 && r[g.n] == r[g.n - 1]
}

/// Per-level flatness: entry `k − 1` says whether `M(k)` is a flat
/// extension of `M(k − 1)`.
pub fn flat_levels(g: &BiMomentSequence) -> Vec<bool> {
    ranks(g).windows(2).map(|w| w[0] == w[1]).collect()
}

/// The representing measure of a normalized (`γ_00 = 1`) sequence whose
/// moment matrix has rank at most 2, checked against every moment through
/// order `2n`.
pub fn recover_atoms(g: &BiMomentSequence) -> Result<AtomicMeasure> {
    if g.gamma[&(0, 0)] != 1 {
        return Err(Error::invalid(format!(
            "gamma_00 = {}; divide the sequence by it first",
            g.gamma[&(0, 0)]
        )));
    }
    let m = build_moment_matrix(g);
    if !psd_exact(&m) {
        return Err(Error::NoRepresentingMeasure("M(n) is not positive semidefinite".into()));
    }
    let rank = rank_exact(&m);
    let points = match rank {
        1 => vec![(g.gamma[&(0, 1)].clone(), g.gamma[&(1, 0)].clone())],
        2 => rank_two_support(g)?,
        r => {
            return Err(Error::Unsupported(format!(
                "atom recovery handles rank at most 2, M({}) has rank {r}",
                g.n
            )))
        }
    };
    let atoms = match points.as_slice() {
        [p] => vec![Atom::new(p.0.clone(), p.1.clone(), Rational::one())],
        [p, q] => {
            // ρ1 + ρ2 = γ_00 together with the first moment in a coordinate that separates the points
            let (a, b, target) = if p.0 != q.0 {
                (&p.0, &q.0, &g.gamma[&(0, 1)])
            } else {
                (&p.1, &q.1, &g.gamma[&(1, 0)])
            };
            let rho1 = (target - b) / (a - b);
            let rho2 = Rational::one() - &rho1;
            if !rho1.is_positive() || !rho2.is_positive() {
                return Err(Error::NoRepresentingMeasure(format!(
                    "densities {rho1}, {rho2} are not positive"
                )));
            }
            vec![
                Atom::new(p.0.clone(), p.1.clone(), rho1),
                Atom::new(q.0.clone(), q.1.clone(), rho2),
            ]
        }
        _ => unreachable!("rank 1 or 2"),
    };
    if atoms.iter().any(|a| a.s.is_negative() || a.t.is_negative()) {
        return Err(Error::NoRepresentingMeasure("support leaves R+^2".into()));
    }
    let mu = AtomicMeasure::new(atoms)?;
    if sequence_from_measure(&mu, g.n) != *g {
        return Err(Error::NoRepresentingMeasure(format!(
            "candidate {mu} does not reproduce the moments through order {}",
            2 * g.n
        )));
    }
    Ok(mu)
}

/// Support of a rank-2 flat sequence: the common zeros of the degree ≤ 2
/// column relations.
fn rank_two_support(g: &BiMomentSequence) -> Result<Vec<(Rational, Rational)>> {
    if g.n < 2 || !flat_extension(g) {
        return Err(Error::Unsupported(
            "rank 2 needs a flat extension of order at least 2".into(),
        ));
    }
    let m2 = build_moment_matrix(&g.truncate(2)?);
    if rank_exact(&m2.truncate(1)) != 2 {
        return Err(Error::NoRepresentingMeasure("rank M(1) differs from rank M(2)".into()));
    }
    let rels = column_relations(&m2);
    let find = |lead: Monomial| rels.iter().find(|r| r.leading() == lead);
    let (one, x, y) = (Monomial::new(0, 0), Monomial::new(1, 0), Monomial::new(0, 1));
    // With rank M(1) = 2 and γ_00 > 0 the pivots are {1, X} or {1, Y}.
    if let Some(ry) = find(y) {
        // Y = a + b·X and X² = c + d·X
        let a = -ry.coefficient(one);
        let b = -ry.coefficient(x);
        let rx2 = find(Monomial::new(2, 0)).expect("X^2 is not a pivot at rank 2");
        let roots = quadratic_roots(-rx2.coefficient(x), -rx2.coefficient(one))?;
        Ok(roots.into_iter().map(|s| { let t = &a + &b * &s; (s, t) }).collect())
    } else {
        // X = a and Y² = c + d·Y
        let rx = find(x).expect("X is not a pivot when Y is");
        let a = -rx.coefficient(one);
        let ry2 = find(Monomial::new(0, 2)).expect("Y^2 is not a pivot at rank 2");
        let roots = quadratic_roots(-ry2.coefficient(y), -ry2.coefficient(one))?;
        Ok(roots.into_iter().map(|t| (a.clone(), t)).collect())
    }
}

/// The two distinct rational roots of `z² = d·z + c`.
fn quadratic_roots(d: Rational, c: Rational) -> Result<Vec<Rational>> {
    let disc = &d * &d + Rational::from(4i64) * &c;
    if !disc.is_positive() {
        return Err(Error::NoRepresentingMeasure(format!(
            "z^2 = {d}*z + {c} has no two distinct real roots"
        )));
    }
    let root = disc.sqrt_exact().ok_or_else(|| {
        Error::Unsupported(format!("z^2 = {d}*z + {c} has irrational roots"))
    })?;
    let two = Rational::from(2i64);
    Ok(vec![(&d - &root) / &two, (&d + &root) / &two])
}

#[cfg(test)]
mod tests;
