use std::fmt::Display;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;

use eds_core::arith::{self, Rational};
use eds_core::bounds::{self, Mode};
use eds_core::curves::{MordellCurve, TwistCurve};
use eds_core::divpoly::{self, FormTable};
use eds_core::heights;
use eds_core::points::{twist_to_mordell, CurvePoint};
use eds_core::sequences::{self, bigint_str, column};
use eds_core::tables::{self, GeneratorRecord};
use eds_core::thue::{self, ThueProblem};
use eds_core::Error;

const EXIT_VALIDATION: u8 = 2;
const EXIT_TORSION: u8 = 3;
const EXIT_DATA: u8 = 4;
const EXIT_MISMATCH: u8 = 5;
const EXIT_UNEXPECTED: u8 = 6;
const EXIT_INTERNAL: u8 = 1;

#[derive(Parser)]
#[command(name = "eds", version, about = "Elliptic divisibility sequences on U^3 + V^3 = m W^3")]
struct Cli {
    /// Worker threads; changes wall time only.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Table,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    Twist,
    Mordell,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BoundMode {
    PerCase,
    Strict,
    WorstCase,
}

impl From<BoundMode> for Mode {
    fn from(m: BoundMode) -> Mode {
        match m {
            BoundMode::PerCase => Mode::PerCase,
            BoundMode::Strict => Mode::Strict,
            BoundMode::WorstCase => Mode::WorstCase,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Terms A, B, C, U, V, W of the sequence generated by a point.
    Seq {
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        /// `x,y` with rational coordinates such as `553/9,4085/27`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, value_enum, default_value = "mordell")]
        model: Model,
        #[arg(long, default_value_t = 10)]
        n: u32,
        #[arg(long, value_enum, default_value = "table")]
        emit: Emit,
    },
    /// Checks the rank-1 table: Z(W) up to N and the A-sequence claim.
    Figure1 {
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long, default_value_t = tables::W_INDEX_LIMIT)]
        n: u32,
        #[arg(long, value_enum, default_value = "table")]
        emit: Emit,
    },
    /// Checks the rank-2 generators: on the curve, non-torsion, height above 0.1.
    Figure2 {
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "table")]
        emit: Emit,
    },
    /// Regenerates the binary forms; `--verify` diffs them against the printed tables.
    Forms {
        #[arg(long)]
        verify: bool,
        /// Compare against the printed tables with the known sign misprints fixed.
        #[arg(long)]
        corrected: bool,
        #[arg(long, value_enum, default_value = "table")]
        emit: Emit,
    },
    /// Bounded Thue searches (`--case 3..14` or `all`) or the n = 2 unit equations (`--case n2`).
    Thue {
        #[arg(long, default_value = "all")]
        case: String,
        #[arg(long, default_value_t = thue::DEFAULT_BOUND)]
        bound: i64,
        #[arg(long, default_value_t = thue::MIN_EXP_BOUND)]
        exp_bound: u32,
        /// Print every record, not only the unexpected ones.
        #[arg(long)]
        all_records: bool,
        #[arg(long, value_enum, default_value = "table")]
        emit: Emit,
    },
    /// Largest indices not excluded by the height inequality, for cube-free m in a range.
    Bounds {
        /// `a:b`, inclusive.
        #[arg(long, default_value = "40:10000")]
        m_range: String,
        #[arg(long, value_enum, default_value = "per-case")]
        mode: BoundMode,
        /// Print one row per m.
        #[arg(long)]
        rows: bool,
        #[arg(long, value_enum, default_value = "table")]
        emit: Emit,
    },
    /// Canonical height of a point on Y^2 = X^3 - 432 m^2.
    Height {
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = heights::DEFAULT_ITERATIONS)]
        iterations: u32,
        #[arg(long, value_enum, default_value = "table")]
        emit: Emit,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Display) -> Self {
        Failure { code, message: message.to_string() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Torsion => EXIT_TORSION,
            Error::Data(_) => EXIT_DATA,
            Error::Structure(_) | Error::Internal(_) => EXIT_INTERNAL,
            _ => EXIT_VALIDATION,
        };
        Failure::new(code, e)
    }
}

type CmdResult = Result<(), Failure>;

fn parse_int(s: &str, name: &str) -> Result<BigInt, Failure> {
    BigInt::from_str(s.trim()).map_err(|_| Failure::new(EXIT_VALIDATION, format!("{name} = {s:?} is not an integer")))
}

fn parse_pair(s: &str) -> Result<(Rational, Rational), Failure> {
    let bad = || Failure::new(EXIT_VALIDATION, format!("point {s:?} must look like x,y"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let a = Rational::from_str(a.trim()).map_err(|_| bad())?;
    let b = Rational::from_str(b.trim()).map_err(|_| bad())?;
    Ok((a, b))
}

fn print_json<T: Serialize>(v: &T) -> CmdResult {
    let s = serde_json::to_string_pretty(v).map_err(|e| Failure::new(EXIT_INTERNAL, e))?;
    println!("{s}");
    Ok(())
}

fn set_str(v: &[u32]) -> String {
    let items: Vec<String> = v.iter().map(u32::to_string).collect();
    format!("{{{}}}", items.join(","))
}

#[derive(Serialize)]
struct SeqRow {
    n: u32,
    #[serde(with = "bigint_str")]
    a: BigInt,
    #[serde(with = "bigint_str")]
    b: BigInt,
    #[serde(with = "bigint_str")]
    c: BigInt,
    #[serde(with = "bigint_str")]
    u: BigInt,
    #[serde(with = "bigint_str")]
    v: BigInt,
    #[serde(with = "bigint_str")]
    w: BigInt,
    #[serde(with = "bigint_str")]
    prim_a: BigInt,
    #[serde(with = "bigint_str")]
    prim_w: BigInt,
}

#[derive(Serialize)]
struct SeqReport {
    #[serde(with = "bigint_str")]
    m: BigInt,
    point: String,
    rows: Vec<SeqRow>,
}

fn cmd_seq(m: &str, point: &str, model: Model, n: u32, emit: Emit) -> CmdResult {
    let m = parse_int(m, "m")?;
    TwistCurve::new_allow_small(&m)?;
    let (x, y) = parse_pair(point)?;
    let q = match model {
        Model::Mordell => CurvePoint::affine(x, y),
        Model::Twist => twist_to_mordell(&m, &x, &y)?,
    };
    MordellCurve::new_allow_small(&m)?.model().check(&q)?;
    let mordell = sequences::mordell_terms(&m, &q, n)?;
    let cubic: Vec<_> = mordell.iter().map(|t| sequences::cubic_from_mordell(&m, t)).collect::<Result<_, _>>()?;
    let a_col = column(&mordell, |t| &t.a);
    let w_col = column(&cubic, |t| &t.w);
    let mut rows = Vec::new();
    for (i, (mt, ct)) in mordell.iter().zip(&cubic).enumerate() {
        rows.push(SeqRow {
            n: mt.n,
            a: mt.a.clone(),
            b: mt.b.clone(),
            c: mt.c.clone(),
            u: ct.u.clone(),
            v: ct.v.clone(),
            w: ct.w.clone(),
            prim_a: arith::primitive_part(&a_col[i], &a_col[..i])?,
            prim_w: arith::primitive_part(&w_col[i], &w_col[..i])?,
        });
    }
    let report = SeqReport { m, point: q.to_string(), rows };
    match emit {
        Emit::Json => print_json(&report)?,
        Emit::Table => {
            println!("m = {}, Q = {}", report.m, report.point);
            println!("n\tA\tB\tC\tU\tV\tW\tprim(A)\tprim(W)");
            for r in &report.rows {
                println!("{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}", r.n, r.a, r.b, r.c, r.u, r.v, r.w, r.prim_a, r.prim_w);
            }
        }
    }
    Ok(())
}

fn load(data: &Option<PathBuf>, embedded: &str) -> Result<Vec<GeneratorRecord>, Failure> {
    let text = match data {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Failure::new(EXIT_DATA, format!("{}: {e}", p.display())))?,
        None => embedded.to_string(),
    };
    Ok(tables::parse_generators(&text)?)
}

fn cmd_figure1(data: &Option<PathBuf>, n: u32, emit: Emit) -> CmdResult {
    let records = load(data, tables::RANK_ONE_CSV)?;
    let rows = tables::verify_rank_one(&records, n, tables::A_INDEX_LIMIT.min(n));
    let failed = rows.iter().filter(|r| !r.pass()).count();
    match emit {
        Emit::Json => print_json(&rows)?,
        Emit::Table => {
            for r in &rows {
                let z = r.expected_z_w.map(|z| z.to_string()).unwrap_or_else(|| "-".into());
                let status = if r.pass() { "PASS" } else { "FAIL" };
                print!(
                    "line {:>3}  m = {:>4}  Q = {:<28}  Z(W) printed {z}  W failing {:<5}  A failing {:<5}  {status}",
                    r.line,
                    r.m,
                    r.point,
                    set_str(&r.w_failing),
                    set_str(&r.a_failing)
                );
                match &r.error {
                    Some(e) => println!("  ({e})"),
                    None => println!(),
                }
            }
            println!("{} of {} rows pass", rows.len() - failed, rows.len());
        }
    }
    if failed > 0 {
        return Err(Failure::new(EXIT_MISMATCH, format!("{failed} row(s) disagree with the table")));
    }
    Ok(())
}

fn cmd_figure2(data: &Option<PathBuf>, emit: Emit) -> CmdResult {
    let records = load(data, tables::RANK_TWO_CSV)?;
    let rows = tables::verify_rank_two(&records);
    let failed = rows.iter().filter(|r| !r.pass()).count();
    match emit {
        Emit::Json => print_json(&rows)?,
        Emit::Table => {
            for r in &rows {
                let h = r
                    .height
                    .map(|h| format!("{:.6} +- {:.1e}", h.value, h.error_bound))
                    .unwrap_or_else(|| "-".into());
                let status = if r.pass() { "PASS" } else { "FAIL" };
                print!("line {:>3}  m = {:>4}  Q = {:<32}  h = {h:<22}  {status}", r.line, r.m, r.point);
                match &r.error {
                    Some(e) => println!("  ({e})"),
                    None => println!(),
                }
            }
            println!("{} of {} generators pass", rows.len() - failed, rows.len());
        }
    }
    if failed > 0 {
        return Err(Failure::new(EXIT_MISMATCH, format!("{failed} generator(s) fail")));
    }
    Ok(())
}

#[derive(Serialize)]
struct FormRow {
    name: String,
    degree: usize,
    coefficients: Vec<String>,
    matches: Option<bool>,
    first_difference: Option<String>,
}

fn cmd_forms(verify: bool, corrected: bool, emit: Emit) -> CmdResult {
    let table = FormTable::new();
    let expected = if corrected { divpoly::corrected_forms() } else { divpoly::expected_forms() };
    let mut rows = Vec::new();
    for (name, want) in &expected {
        let f = divpoly::form_by_name(&table, name)?;
        let got = f.printed();
        let (matches, first_difference) = if verify {
            let want: Vec<BigInt> = want.iter().map(|&c| BigInt::from(c)).collect();
            let diff = if got.len() != want.len() {
                Some(format!("{name}: degree {} vs printed {}", got.len() - 1, want.len() - 1))
            } else {
                got.iter()
                    .zip(&want)
                    .position(|(a, b)| a != b)
                    .map(|i| format!("{name}: coefficient {i} is {} vs printed {}", got[i], want[i]))
            };
            (Some(diff.is_none()), diff)
        } else {
            (None, None)
        };
        rows.push(FormRow {
            name: name.to_string(),
            degree: f.degree(),
            coefficients: got.iter().map(BigInt::to_string).collect(),
            matches,
            first_difference,
        });
    }
    match emit {
        Emit::Json => print_json(&rows)?,
        Emit::Table => {
            for r in &rows {
                let status = match r.matches {
                    Some(true) => "  PASS",
                    Some(false) => "  FAIL",
                    None => "",
                };
                println!("{:<5} deg {:>2}  [{}]{status}", r.name, r.degree, r.coefficients.join(", "));
                if let Some(d) = &r.first_difference {
                    println!("      {d}");
                }
            }
        }
    }
    let diffs: Vec<&str> = rows.iter().filter_map(|r| r.first_difference.as_deref()).collect();
    if !diffs.is_empty() {
        return Err(Failure::new(EXIT_MISMATCH, format!("mismatch: {}", diffs.join("; "))));
    }
    Ok(())
}

#[derive(Serialize)]
struct ThueReport {
    problem: ThueProblem,
    records: usize,
    unexpected: usize,
    shown: Vec<thue::SolutionRecord>,
}

#[derive(Serialize)]
struct N2Report {
    unit_equations: Vec<thue::UnitEquation>,
    solutions: Vec<thue::N2Solution>,
    traces: Vec<N2TraceRow>,
}

#[derive(Serialize)]
struct N2TraceRow {
    s: i64,
    t: i64,
    #[serde(with = "bigint_str")]
    m: BigInt,
    point: String,
    twist: String,
    #[serde(with = "bigint_str")]
    w1: BigInt,
    #[serde(with = "bigint_str")]
    w2: BigInt,
}

fn cmd_thue_n2(exp_bound: u32, emit: Emit) -> CmdResult {
    let unit_equations = thue::unit_sum_enumerate(exp_bound)?;
    let solutions = thue::solve_n2_system(exp_bound)?;
    let mut traces = Vec::new();
    for s in solutions.iter().filter(|s| s.classification == thue::Classification::Unexpected) {
        let tr = thue::trace_n2(s.s, s.t)?;
        traces.push(N2TraceRow {
            s: s.s,
            t: s.t,
            m: tr.m,
            point: tr.point.to_string(),
            twist: format!("({}, {})", tr.twist.0, tr.twist.1),
            w1: tr.w1,
            w2: tr.w2,
        });
    }
    let report = N2Report { unit_equations, solutions, traces };
    match emit {
        Emit::Json => print_json(&report)?,
        Emit::Table => {
            println!("unit equations a = b + c, a = d x^2 ({}):", report.unit_equations.len());
            for e in &report.unit_equations {
                println!("  {} = {} + ({})   d = {}, x = {}", e.a, e.b, e.c, e.d, e.root);
            }
            println!("n = 2 system solutions ({}):", report.solutions.len());
            for s in &report.solutions {
                println!("  (s, t) = ({}, {})  W1 = {}, W2 = {}  {}", s.s, s.t, s.w1, s.w2, s.classification.label());
            }
            for t in &report.traces {
                println!(
                    "  trace ({}, {}): m = {}, Q = {}, R = {}, W_1 = {}, W_2 = {}",
                    t.s, t.t, t.m, t.point, t.twist, t.w1, t.w2
                );
            }
        }
    }
    // A traced pair whose W_2 lacks a primitive divisor would falsify the n = 2 case.
    for t in &report.traces {
        if !sequences::has_primitive_divisor(&[t.w1.clone(), t.w2.clone()], 2)?.0 {
            return Err(Failure::new(EXIT_UNEXPECTED, format!("({}, {}): W_2 has no primitive divisor", t.s, t.t)));
        }
    }
    Ok(())
}

fn cmd_thue(case: &str, bound: i64, exp_bound: u32, all_records: bool, emit: Emit) -> CmdResult {
    if case == "n2" || case == "2" {
        return cmd_thue_n2(exp_bound, emit);
    }
    let cases: Vec<u32> = if case == "all" {
        thue::SEARCH_CASES.to_vec()
    } else {
        vec![case
            .parse()
            .map_err(|_| Failure::new(EXIT_VALIDATION, format!("case {case:?} is not n2, all or 3..14")))?]
    };
    let table = FormTable::new();
    let mut reports = Vec::new();
    for n in cases {
        let problem = ThueProblem::for_case(&table, n, bound)?;
        let records = thue::bounded_search(&problem);
        let unexpected = thue::unexpected(&records).len();
        let shown = records
            .iter()
            .filter(|r| all_records || !r.classification.is_expected())
            .cloned()
            .collect();
        reports.push(ThueReport { records: records.len(), unexpected, shown, problem });
    }
    match emit {
        Emit::Json => print_json(&reports)?,
        Emit::Table => {
            for r in &reports {
                let p = &r.problem;
                println!(
                    "{:<5} deg {:>2}  alpha {}  beta {}  eps^{}  bound {}  records {}  unexpected {}",
                    p.label,
                    p.form.degree(),
                    set_str(&p.rhs.alpha),
                    set_str(&p.rhs.beta),
                    set_str(&p.rhs.gamma),
                    p.bound,
                    r.records,
                    r.unexpected
                );
                for s in &r.shown {
                    println!("      (s, t) = ({}, {})  F = {}  {}", s.s, s.t, s.value, s.classification.label());
                }
            }
        }
    }
    let total: usize = reports.iter().map(|r| r.unexpected).sum();
    if total > 0 {
        return Err(Failure::new(EXIT_UNEXPECTED, format!("{total} unexpected solution(s)")));
    }
    Ok(())
}

#[derive(Serialize)]
struct BoundsSummary {
    m_from: u64,
    m_to: u64,
    cube_free: usize,
    checked: usize,
    max_a: u32,
    max_w: u32,
    max_a_composite: u32,
    max_a_prime: u32,
    max_relaxation_a: u32,
    max_relaxation_w: u32,
    manual_check: Vec<u64>,
    rows: Vec<BoundsRow>,
}

#[derive(Serialize)]
struct BoundsRow {
    m: u64,
    a: bounds::BoundReport,
    w: bounds::BoundReport,
}

fn cmd_bounds(range: &str, mode: Mode, show_rows: bool, emit: Emit) -> CmdResult {
    let bad = || Failure::new(EXIT_VALIDATION, format!("m-range {range:?} must look like a:b"));
    let (a, b) = range.split_once(':').ok_or_else(bad)?;
    let (lo, hi): (u64, u64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if lo < 1 || lo > hi {
        return Err(bad());
    }
    use rayon::prelude::*;
    let ms: Vec<u64> = (lo..=hi).filter(|&m| arith::is_cube_free(&BigInt::from(m)).unwrap_or(false)).collect();
    let rows: Vec<BoundsRow> = ms
        .par_iter()
        .map(|&m| -> Result<BoundsRow, Error> {
            let mb = BigInt::from(m);
            Ok(BoundsRow { m, a: bounds::max_failing_index_a(&mb, mode)?, w: bounds::max_failing_index_w(&mb, mode)? })
        })
        .collect::<Result<_, _>>()?;
    let checked: Vec<&BoundsRow> = rows.iter().filter(|r| !r.a.manual_check).collect();
    let summary = BoundsSummary {
        m_from: lo,
        m_to: hi,
        cube_free: rows.len(),
        checked: checked.len(),
        max_a: checked.iter().map(|r| r.a.max_failing).max().unwrap_or(0),
        max_w: checked.iter().map(|r| r.w.max_failing).max().unwrap_or(0),
        max_a_composite: checked.iter().map(|r| r.a.composite_max).max().unwrap_or(0),
        max_a_prime: checked.iter().map(|r| r.a.prime_max).max().unwrap_or(0),
        max_relaxation_a: checked.iter().map(|r| r.a.relaxation_bound).max().unwrap_or(0),
        max_relaxation_w: checked.iter().map(|r| r.w.relaxation_bound).max().unwrap_or(0),
        manual_check: rows.iter().filter(|r| r.a.manual_check).map(|r| r.m).collect(),
        rows: if show_rows { rows } else { Vec::new() },
    };
    match emit {
        Emit::Json => print_json(&summary)?,
        Emit::Table => {
            if show_rows {
                println!("m\tcase\tbranch\th_lower\tA\tA_relax\tW\tW_relax\tmanual");
                for r in &summary.rows {
                    println!(
                        "{}\t{:?}\t{:?}\t{:.4}\t{}\t{}\t{}\t{}\t{}",
                        r.m, r.a.case, r.a.branch, r.a.h_lower, r.a.max_failing, r.a.relaxation_bound,
                        r.w.max_failing, r.w.relaxation_bound, r.a.manual_check
                    );
                }
            }
            println!("cube-free m in [{lo}, {hi}]: {} ({} outside the manual-check set)", summary.cube_free, summary.checked);
            println!(
                "max index A: {} (composite {}, prime {}), W: {}",
                summary.max_a, summary.max_a_composite, summary.max_a_prime, summary.max_w
            );
            println!("max relaxation bound A: {}, W: {}", summary.max_relaxation_a, summary.max_relaxation_w);
            println!("manual check: {} value(s) {:?}", summary.manual_check.len(), summary.manual_check);
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct HeightReport {
    #[serde(with = "bigint_str")]
    m: BigInt,
    point: String,
    height: heights::HeightEstimate,
    lower_bound: f64,
    branch: heights::Branch,
    above_lower_bound: bool,
}

fn cmd_height(m: &str, point: &str, iterations: u32, emit: Emit) -> CmdResult {
    let m = parse_int(m, "m")?;
    let (x, y) = parse_pair(point)?;
    let q = CurvePoint::affine(x, y);
    MordellCurve::new_allow_small(&m)?.model().check(&q)?;
    let height = heights::canonical_height(&m, &q, iterations)?;
    let (lower_bound, branch) = heights::height_lower_bound(&m)?;
    let report = HeightReport {
        m,
        point: q.to_string(),
        above_lower_bound: height.value - height.error_bound > lower_bound,
        height,
        lower_bound,
        branch,
    };
    match emit {
        Emit::Json => print_json(&report)?,
        Emit::Table => {
            println!("m = {}, Q = {}", report.m, report.point);
            println!(
                "canonical height {:.12} +- {:.3e} ({} doublings{})",
                report.height.value,
                report.height.error_bound,
                report.height.iterations,
                if report.height.exact { ", exact" } else { "" }
            );
            println!(
                "lower bound {:.6} ({:?} branch): {}",
                report.lower_bound,
                report.branch,
                if report.above_lower_bound { "above" } else { "NOT above" }
            );
        }
    }
    Ok(())
}

fn run(cli: Cli) -> CmdResult {
    if let Some(k) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build_global()
            .map_err(|e| Failure::new(EXIT_INTERNAL, e))?;
    }
    match cli.command {
        Command::Seq { m, point, model, n, emit } => cmd_seq(&m, &point, model, n, emit),
        Command::Figure1 { data, n, emit } => cmd_figure1(&data, n, emit),
        Command::Figure2 { data, emit } => cmd_figure2(&data, emit),
        Command::Forms { verify, corrected, emit } => cmd_forms(verify, corrected, emit),
        Command::Thue { case, bound, exp_bound, all_records, emit } => {
            cmd_thue(&case, bound, exp_bound, all_records, emit)
        }
        Command::Bounds { m_range, mode, rows, emit } => cmd_bounds(&m_range, mode.into(), rows, emit),
        Command::Height { m, point, iterations, emit } => cmd_height(&m, &point, iterations, emit),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
