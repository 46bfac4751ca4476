//! The `shiftlab` command line.
//!
//! [`run`] parses arguments and returns the exit code with everything that
//! would be printed, so the binary is a thin wrapper and the commands are
//! testable in-process. Exit codes: 0 when the analysis ran (whatever the
//! verdict), 1 for bad input, 2 for a non-commutative diagram, 3 for
//! unsupported requests.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::aluthge::{iterate, TransformKind};
use crate::berger::{
    build_counterexample, corollary41_deficit, measure_moment, shift_from_measure,
    two_atom_conditions, AtomicMeasure,
};
use crate::builtins::{self, builtin};
use crate::classify::{classify, is_spherically_quasinormal};
use crate::error::{Error, Result};
use crate::format::{read_json, to_json, DiagramFile};
use crate::lattice::{check_commutative, moment, LatticePoint, WeightDiagram, Window, DEFAULT_WINDOW};
use crate::moments::{
    build_moment_matrix, column_relations, flat_levels, psd_exact, rank_exact, ranks,
    recover_atoms, sequence_from_diagram, sequence_from_measure, BiMomentSequence,
};
use crate::numeric::{check_precision, format_decimal, to_rational, Float, DEFAULT_PRECISION};
use crate::powers::power_spherical_report;
use crate::rational::Rational;

#[derive(Parser, Debug)]
#[command(name = "shiftlab", version, about = "Exact analysis of 2-variable weighted shifts")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Lattice window N1xN2
    #[arg(long, global = true, value_name = "N1xN2")]
    window: Option<Window>,

    /// Float precision in bits for the Aluthge transforms
    #[arg(long, global = true, env = "SHIFTLAB_PRECISION", default_value_t = DEFAULT_PRECISION)]
    precision: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Args, Debug, Clone)]
struct InputArgs {
    /// ex1, helton-howe, thm3 or thm4:x0,q
    #[arg(long, conflicts_with = "input")]
    builtin: Option<String>,

    /// JSON file (diagram, measure or moment sequence, as the command expects)
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate every quasinormality notion on a diagram
    Classify(InputArgs),
    /// Lattice moments on the window
    Moments(InputArgs),
    /// Iterate the toral or spherical Aluthge transform
    Transform {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value = "spherical")]
        kind: TransformKind,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        /// Significant digits in human output
        #[arg(long, default_value_t = 12)]
        digits: usize,
    },
    /// Sphericality of every restriction of (T1^m, T2^n)
    Power {
        #[command(flatten)]
        input: InputArgs,
        #[arg(short = 'm')]
        m: usize,
        #[arg(short = 'n')]
        n: usize,
    },
    /// Weight diagram of a Berger measure
    BergerBuild(InputArgs),
    /// Two-atom conditions and moment roundtrip of a Berger measure
    BergerCheck(InputArgs),
    /// Two atoms whose (2,1) and (1,2) powers are spherical but (1,1) is not
    Counterexample {
        #[arg(long, allow_hyphen_values = true)]
        s: Rational,
        #[arg(long, allow_hyphen_values = true)]
        u: Rational,
        /// Cross-validate on the shift
        #[arg(long)]
        check: bool,
    },
    /// Moment matrix M(n) with rank, positivity and column relations
    Momentmatrix {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 1)]
        order: usize,
    },
    /// Atoms of a rank <= 2 moment sequence
    Recover {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Reproduce the built-in worked examples
    Demo,
}

/// Exit code and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Ctx {
    window: Option<Window>,
    precision: usize,
    format: Format,
}

impl Ctx {
    fn window(&self) -> Window {
        self.window.unwrap_or(DEFAULT_WINDOW)
    }
}

struct Report {
    human: String,
    json: Value,
}

fn report<T: Serialize>(human: String, value: &T) -> Report {
    Report { human, json: serde_json::to_value(value).expect("serializable") }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 1, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let ctx = Ctx { window: cli.window, precision: cli.precision, format: cli.format };
    let result = check_precision(ctx.precision).and_then(|_| dispatch(&cli.command, &ctx));
    match result {
        Ok(r) => Outcome {
            code: 0,
            stdout: match ctx.format {
                Format::Human => ensure_newline(r.human),
                Format::Json => to_json(&r.json),
            },
            stderr: String::new(),
        },
        Err(e) => {
            let code = e.exit_code();
            let stdout = match ctx.format {
                Format::Human => String::new(),
                Format::Json => {
                    let mut v = json!({ "error": e.to_string(), "exit_code": code });
                    if let Error::NotCommutative(w) = &e {
                        v["witness"] = serde_json::to_value(w).expect("serializable");
                    }
                    to_json(&v)
                }
            };
            Outcome { code, stdout, stderr: format!("error: {e}\n") }
        }
    }
}

fn ensure_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn dispatch(cmd: &Command, ctx: &Ctx) -> Result<Report> {
    match cmd {
        Command::Classify(input) => {
            let d = load_diagram(input, ctx)?;
            let r = classify(&d)?;
            Ok(report(r.to_string(), &r))
        }
        Command::Moments(input) => moments_cmd(&load_diagram(input, ctx)?),
        Command::Transform { input, kind, steps, digits } => {
            let d = load_diagram(input, ctx)?;
            require_commutative(&d)?;
            let it = iterate(&d, *kind, *steps, ctx.precision)?;
            let mut h = String::new();
            writeln!(h, "{kind:?} Aluthge transform, {} bits", it.precision).unwrap();
            for (i, delta) in it.deltas.iter().enumerate() {
                writeln!(h, "  step {}: sup |change| = {}", i + 1, format_decimal(delta, 6)).unwrap();
            }
            if let Some(s) = it.exhausted_at {
                writeln!(h, "  window exhausted at step {s}").unwrap();
            }
            let last = it.diagrams.last().expect("input diagram");
            let w = last.window();
            writeln!(h, "result on {w} window (x; y), rows k2 = 0..{}:", w.n2).unwrap();
            for k2 in 0..w.n2 {
                let cell = |f: Option<&Float>| {
                    format_decimal(&to_rational(f.expect("in window")), *digits)
                };
                let xs: Vec<String> = (0..w.n1).map(|k1| cell(last.x(LatticePoint::new(k1, k2)))).collect();
                let ys: Vec<String> = (0..w.n1).map(|k1| cell(last.y(LatticePoint::new(k1, k2)))).collect();
                writeln!(h, "  x: {}", xs.join(" ")).unwrap();
                writeln!(h, "  y: {}", ys.join(" ")).unwrap();
            }
            Ok(report(h, &it))
        }
        Command::Power { input, m, n } => {
            let d = load_diagram(input, ctx)?;
            let r = power_spherical_report(&d, *m, *n)?;
            Ok(report(r.to_string(), &r))
        }
        Command::BergerBuild(input) => {
            let mu = load_measure(input)?;
            let d = shift_from_measure(&mu, ctx.window())?;
            let file = DiagramFile::describe(&d);
            let mut h = format!("measure: {mu}\n");
            h.push_str(&weight_table(&d));
            Ok(report(h, &file))
        }
        Command::BergerCheck(input) => berger_check(&load_measure(input)?, ctx),
        Command::Counterexample { s, u, check } => {
            let mu = build_counterexample(s.clone(), u.clone())?;
            if *check {
                berger_check(&mu, ctx)
            } else {
                Ok(report(format!("measure: {mu}"), &mu))
            }
        }
        Command::Momentmatrix { input, order } => {
            let g = load_sequence(input, Some(*order), ctx)?;
            momentmatrix_cmd(&g)
        }
        Command::Recover { input, order } => {
            let g = load_sequence(input, *order, ctx)?;
            let mu = recover_atoms(&g)?;
            let mut h = format!("representing measure from M({}): {mu}\n", g.n());
            for a in mu.sorted_atoms() {
                writeln!(h, "  atom ({}, {}) density {}", a.s, a.t, a.rho).unwrap();
            }
            Ok(report(h, &mu))
        }
        Command::Demo => demo(),
    }
}

fn require_commutative(d: &WeightDiagram) -> Result<()> {
    match check_commutative(d).witness {
        Some(w) => Err(Error::NotCommutative(Box::new(w))),
        None => Ok(()),
    }
}

fn missing_input() -> Error {
    Error::invalid("pass --builtin NAME or --input PATH")
}

fn load_diagram(input: &InputArgs, ctx: &Ctx) -> Result<WeightDiagram> {
    match (&input.builtin, &input.input) {
        (Some(name), _) => Ok(builtin(name, ctx.window())?.diagram),
        (None, Some(path)) => read_json::<DiagramFile>(path)?.build(ctx.window),
        (None, None) => Err(missing_input()),
    }
}

fn load_measure(input: &InputArgs) -> Result<AtomicMeasure> {
    match (&input.builtin, &input.input) {
        (Some(name), _) => builtin(name, Window::new(1, 1))?
            .measure
            .ok_or_else(|| Error::invalid(format!("builtin {name} is not given by a measure"))),
        (None, Some(path)) => read_json(path),
        (None, None) => Err(missing_input()),
    }
}

/// Accepts a moment-sequence, measure or diagram file.
fn load_sequence(input: &InputArgs, order: Option<usize>, ctx: &Ctx) -> Result<BiMomentSequence> {
    let n = order.unwrap_or(2);
    match (&input.builtin, &input.input) {
        (Some(name), _) => {
            let b = builtin(name, ctx.window())?;
            match &b.measure {
                Some(mu) => Ok(sequence_from_measure(mu, n)),
                None => sequence_from_diagram(&b.diagram, n),
            }
        }
        (None, Some(path)) => {
            let v: Value = read_json(path)?;
            if v.get("gamma").is_some() {
                let g: BiMomentSequence = serde_json::from_value(v)?;
                match order {
                    Some(n) => g.truncate(n),
                    None => Ok(g),
                }
            } else if v.get("atoms").is_some() {
                Ok(sequence_from_measure(&serde_json::from_value(v)?, n))
            } else if v.get("kind").is_some() {
                let f: DiagramFile = serde_json::from_value(v)?;
                sequence_from_diagram(&f.build(ctx.window)?, n)
            } else {
                Err(Error::Parse(
                    "expected a moment sequence (gamma), measure (atoms) or diagram (kind)".into(),
                ))
            }
        }
        (None, None) => Err(missing_input()),
    }
}

fn weight_table(d: &WeightDiagram) -> String {
    let mut h = String::new();
    let w = d.window();
    writeln!(h, "{} diagram on {w} window, rows k2 = 0..{}:", d.kind(), w.n2).unwrap();
    for (xs, ys) in d.x_rows().iter().zip(d.y_rows()) {
        let fmt = |v: &[Rational]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        writeln!(h, "  x: {}", fmt(xs)).unwrap();
        writeln!(h, "  y: {}", fmt(&ys)).unwrap();
    }
    h
}

fn moments_cmd(d: &WeightDiagram) -> Result<Report> {
    require_commutative(d)?;
    let w = d.window();
    let mut rows = Vec::with_capacity(w.n2);
    for k2 in 0..w.n2 {
        let mut row = Vec::with_capacity(w.n1);
        for k1 in 0..w.n1 {
            row.push(moment(d, LatticePoint::new(k1, k2))?);
        }
        rows.push(row);
    }
    let mut h = format!("lattice moments gamma_(k1,k2) on {w} window, rows k2 = 0..{}:\n", w.n2);
    for row in &rows {
        let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
        writeln!(h, "  {}", cells.join(" ")).unwrap();
    }
    Ok(report(h, &json!({ "window": [w.n1, w.n2], "gamma": rows })))
}

fn berger_check(mu: &AtomicMeasure, ctx: &Ctx) -> Result<Report> {
    let w = ctx.window();
    let d = shift_from_measure(mu, w)?;
    let mut roundtrip = true;
    for k in w.points() {
        if moment(&d, k)? != measure_moment(mu, k) {
            roundtrip = false;
        }
    }
    let conditions = if mu.atoms().len() == 2 { Some(two_atom_conditions(mu)?) } else { None };
    let spherical = is_spherically_quasinormal(&d);
    let p21 = power_spherical_report(&d, 2, 1)?;
    let p12 = power_spherical_report(&d, 1, 2)?;

    let mut h = format!("measure: {mu}\n");
    writeln!(h, "moment roundtrip on {w} window: {}", if roundtrip { "exact" } else { "MISMATCH" }).unwrap();
    if let Some(c) = &conditions {
        writeln!(h, "two-atom conditions: base={} pow21={} pow12={}", c.base, c.pow21, c.pow12).unwrap();
    }
    writeln!(h, "(T1,T2) spherically quasinormal: {spherical}").unwrap();
    writeln!(h, "(T1^2,T2): {}", p21.overall).unwrap();
    writeln!(h, "(T1,T2^2): {}", p12.overall).unwrap();
    let value = json!({
        "measure": mu,
        "window": [w.n1, w.n2],
        "roundtrip": roundtrip,
        "conditions": conditions,
        "spherical": spherical,
        "power_2_1": p21,
        "power_1_2": p12,
    });
    Ok(Report { human: h, json: value })
}

fn momentmatrix_cmd(g: &BiMomentSequence) -> Result<Report> {
    let m = build_moment_matrix(g);
    let psd = psd_exact(&m);
    let rank = rank_exact(&m);
    let level_ranks = ranks(g);
    let flat = flat_levels(g);
    let relations = column_relations(&m);
    let mut h = format!("M({}):\n{m}", g.n());
    writeln!(h, "hankel blocks: {}", m.is_hankel_blocks()).unwrap();
    writeln!(h, "positive semidefinite: {psd}").unwrap();
    writeln!(h, "rank: {rank} (ranks of M(0..={}): {level_ranks:?})", g.n()).unwrap();
    if g.n() >= 1 {
        writeln!(h, "flat extension of M({}): {}", g.n() - 1, flat[g.n() - 1]).unwrap();
    }
    writeln!(h, "column relations:").unwrap();
    if relations.is_empty() {
        writeln!(h, "  none").unwrap();
    }
    for r in &relations {
        writeln!(h, "  {r}").unwrap();
    }
    let value = json!({
        "sequence": g,
        "matrix": m,
        "hankel": m.is_hankel_blocks(),
        "psd": psd,
        "rank": rank,
        "ranks": level_ranks,
        "flat_levels": flat,
        "relations": relations,
    });
    Ok(Report { human: h, json: value })
}

fn demo() -> Result<Report> {
    let q = Rational::new;
    let mut h = String::new();

    let ex1 = builtins::ex1();
    let c = classify(&ex1)?;
    let p = power_spherical_report(&ex1, 2, 1)?;
    let w00 = p.entry(0, 0).and_then(|e| e.verdict.witness.clone());
    writeln!(h, "ex1: spherically quasinormal: {}", c.spherical).unwrap();
    writeln!(h, "ex1: jointly quasinormal: {}", c.joint).unwrap();
    if let Some(w) = &w00 {
        writeln!(h, "ex1: (T1^2,T2) on H_(0,0): {} != {} at {}", w.lhs, w.rhs, w.k).unwrap();
    }

    let hh = builtins::helton_howe();
    let hc = classify(&hh)?;
    writeln!(h, "helton-howe: jointly quasinormal: {}", hc.joint).unwrap();

    let mu3 = builtins::thm3_measure();
    let cond = two_atom_conditions(&mu3)?;
    writeln!(h, "thm3: {mu3}").unwrap();
    writeln!(h, "thm3: base={} pow21={} pow12={}", cond.base, cond.pow21, cond.pow12).unwrap();

    let mu4 = builtins::thm4_measure(q(1, 2), q(1, 1))?;
    let g = sequence_from_measure(&mu4, 2);
    let m1 = build_moment_matrix(&g.truncate(1)?);
    let recovered = recover_atoms(&g)?;
    writeln!(h, "thm4:1/2,1: rank M(1) = {}, rank M(2) = {}", rank_exact(&m1), rank_exact(&build_moment_matrix(&g))).unwrap();
    for r in column_relations(&build_moment_matrix(&g)) {
        writeln!(h, "thm4:1/2,1: {r}").unwrap();
    }
    writeln!(h, "thm4:1/2,1: recovered {recovered}").unwrap();

    let mut deficits = Vec::new();
    for x0 in [q(1, 4), q(1, 2), q(3, 4)] {
        for qq in [q(1, 2), q(1, 1)] {
            let def = corollary41_deficit(x0.clone(), qq.clone())?;
            writeln!(h, "deficit(x0={x0}, q={qq}) = {def}").unwrap();
            deficits.push(json!({ "x0": x0, "q": qq, "deficit": def }));
        }
    }
    let value = json!({
        "ex1": { "spherical": c.spherical, "joint": c.joint, "power_2_1_witness": w00 },
        "helton_howe": { "joint": hc.joint },
        "thm3": { "measure": mu3, "conditions": cond },
        "thm4": {
            "rank_m1": rank_exact(&m1),
            "rank_m2": rank_exact(&build_moment_matrix(&g)),
            "relations": column_relations(&build_moment_matrix(&g)),
            "recovered": recovered,
        },
        "deficits": deficits,
    });
    Ok(Report { human: h, json: value })
}
