//! Random diagrams and measures shared by the integration tests.
#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use shiftlab::berger::{shift_from_measure, Atom, AtomicMeasure};
use shiftlab::classify::OneVarShift;
use shiftlab::{
    generate_constant, generate_explicit, generate_flat_above_row_zero, generate_ts, q, Rational,
    TailRule, WeightDiagram, Window,
};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// A positive rational `a/b` with `1 ≤ a, b ≤ max`.
pub fn pos(rng: &mut StdRng, max: i64) -> Rational {
    q(rng.gen_range(1..=max), rng.gen_range(1..=max))
}

/// A rational strictly between 0 and 1 with denominator at most `max`.
pub fn unit(rng: &mut StdRng, max: i64) -> Rational {
    let d = rng.gen_range(2..=max);
    q(rng.gen_range(1..d), d)
}

pub fn constant(rng: &mut StdRng) -> WeightDiagram {
    generate_constant(pos(rng, 6), pos(rng, 6)).unwrap()
}

/// `0 < y00 < C − a` keeps the row-0 recurrence inside `(0, C)`.
pub fn flat(rng: &mut StdRng) -> WeightDiagram {
    let c = pos(rng, 4);
    let a = &c * unit(rng, 6);
    let y00 = (&c - &a) * unit(rng, 6);
    generate_flat_above_row_zero(a, y00, c).unwrap()
}

/// Row 0 for the TS family: random, or constant with probability 1/4.
pub fn ts(rng: &mut StdRng) -> WeightDiagram {
    let tail = if rng.gen_bool(0.5) { TailRule::ConstantExtension } else { TailRule::None };
    ts_with_tail(rng, tail)
}

pub fn ts_with_tail(rng: &mut StdRng, tail: TailRule) -> WeightDiagram {
    let len = rng.gen_range(4..=9);
    let row: Vec<Rational> = if rng.gen_bool(0.25) {
        vec![pos(rng, 5); len]
    } else {
        (0..len).map(|_| pos(rng, 5)).collect()
    };
    generate_ts(OneVarShift::new(row, tail).unwrap(), pos(rng, 5)).unwrap()
}

/// 1 to 3 atoms with positive coordinates, so every moment is positive.
pub fn measure(rng: &mut StdRng, atoms: usize) -> AtomicMeasure {
    loop {
        let mut pts: Vec<(Rational, Rational)> = (0..atoms).map(|_| (pos(rng, 4), pos(rng, 4))).collect();
        pts.sort();
        pts.dedup();
        if pts.len() != atoms {
            continue;
        }
        let raw: Vec<Rational> = (0..atoms).map(|_| q(rng.gen_range(1..=5), 1)).collect();
        let total: Rational = raw.iter().sum();
        let list = pts
            .into_iter()
            .zip(raw)
            .map(|((s, t), r)| Atom::new(s, t, r / &total))
            .collect();
        return AtomicMeasure::new(list).unwrap();
    }
}

pub fn from_measure(rng: &mut StdRng, window: Window) -> WeightDiagram {
    let n = rng.gen_range(1..=3);
    shift_from_measure(&measure(rng, n), window).unwrap()
}

/// An explicit commutative diagram: `x` and column 0 of `y` are free, the
/// rest of `y` follows `y_{k+ε1} = x_{k+ε2}·y_k / x_k`; the top row of `y`
/// is free because nothing above the window constrains it.
pub fn explicit(rng: &mut StdRng, window: Window) -> WeightDiagram {
    let (n1, n2) = (window.n1, window.n2);
    let x: Vec<Vec<Rational>> = (0..n2).map(|_| (0..n1).map(|_| pos(rng, 4)).collect()).collect();
    let mut y: Vec<Vec<Rational>> = vec![Vec::with_capacity(n1); n2];
    for k2 in 0..n2 {
        y[k2].push(pos(rng, 4));
        for k1 in 1..n1 {
            let v = if k2 + 1 < n2 {
                &x[k2 + 1][k1 - 1] * &y[k2][k1 - 1] / &x[k2][k1 - 1]
            } else {
                pos(rng, 4)
            };
            y[k2].push(v);
        }
    }
    generate_explicit(x, y, TailRule::None).unwrap()
}

/// Any commutative diagram whose weights are defined beyond the window.
pub fn tailed(rng: &mut StdRng, window: Window) -> WeightDiagram {
    let d = match rng.gen_range(0..4) {
        0 => constant(rng),
        1 => flat(rng),
        2 => ts_with_tail(rng, TailRule::ConstantExtension),
        _ => from_measure(rng, window),
    };
    d.with_window(window).unwrap()
}

/// Constant-tail mix used for the joint-quasinormality property.
pub fn family(rng: &mut StdRng) -> WeightDiagram {
    match rng.gen_range(0..4) {
        0 => constant(rng),
        1 => flat(rng),
        2 => ts(rng),
        _ => from_measure(rng, Window::new(5, 5)),
    }
}

/// A nondecreasing weight list of length `len` with entries in `[1, 4]`,
/// drawn from few distinct values so that equalities are common.
pub fn monotone_list(rng: &mut StdRng, len: usize) -> Vec<Rational> {
    let palette = [q(1, 1), q(3, 2), q(2, 1), q(4, 1)];
    let k = rng.gen_range(1..=3);
    let chosen: Vec<Rational> = palette.choose_multiple(rng, k).cloned().collect();
    let mut w: Vec<Rational> = (0..len).map(|_| chosen.choose(rng).unwrap().clone()).collect();
    w.sort();
    w
}
