//! The `nicensus` command line.
//!
//! Every run prints a JSON document `{"manifest": ..., "result": ...}` on
//! stdout (or a text table with `--table`, the manifest then going to
//! stderr). Exit codes: 0 success, 2 definitive violation, 3 only
//! inconclusive statistical outcomes, 4 usage or input error.

use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use nicensus_core::census::{builtin_spec, flag_weight, ni_by_definition, omega, NiSpec};
use nicensus_core::estimate::{Direction, NamedBound, SampleConfig, Target};
use nicensus_core::interval::{Interval, Verdict};
use nicensus_core::quokka::{
    irr_count_not_t, ngl_band, ngl_exact, pc_r_bounds_hold, quokka_pc_r, quokka_pc_single, r_cycle_proportion,
    thm_pc_m_bound, thm_pc_m_exact, BoundSheet,
};
use nicensus_core::rational::{enclose, Rational};
use nicensus_core::{Error, Field, Mat};
use serde_json::{json, Map, Value};

use crate::compare::{compare, CompareRow};
use crate::error::{CliError, Result};
use crate::format::{field_descriptor, parse_field, parse_matrix_input, parse_tower};
use crate::manifest::{document, RunManifest};
use crate::suites::{self, skew_flag, worst, SuiteOptions};
use crate::{json, par};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_USAGE: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "nicensus", version, about = "Exact and sampled census of nilpotent-independent matrix families over finite fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Enumeration cap in matrices (default 2^24, or NICENSUS_BUDGET).
    #[arg(long, global = true, value_name = "CELLS")]
    pub budget: Option<u128>,
    /// Also write the JSON document to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Write a CSV table to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    /// Print a text table instead of JSON.
    #[arg(long, global = true)]
    pub table: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exhaustive flag census of a built-in spec on M(d, q).
    Census {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        d: usize,
        /// Field: q, p^k or p^k/modulus.
        #[arg(long)]
        q: String,
        /// Recount |N_i| from the definition on a second, non-standard flag.
        #[arg(long)]
        flag_check: bool,
    },
    /// Closed forms and bounds for the large-degree primary-cyclic sets.
    Quokka {
        #[arg(long)]
        c: usize,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        b: u32,
        #[arg(long)]
        r: Option<usize>,
    },
    /// Monte Carlo proportion with exact value and bounds where known.
    Estimate {
        #[arg(long, default_value = "pc-large-degree")]
        spec: String,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        q: Option<String>,
        /// Sample over F_{q^b}.
        #[arg(long)]
        b: Option<u32>,
        #[arg(long, default_value_t = 100_000)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `M` for the whole algebra, `GL` for invertible matrices.
        #[arg(long, default_value = "M")]
        target: String,
        /// Compare table over `c,q,b;c,q,b;...` for the primary-cyclic family.
        #[arg(long)]
        instances: Option<String>,
    },
    /// Fitting split, polynomials and primary components of a matrix.
    Decompose {
        /// `d FIELD : entries`, a JSON matrix, or `-` for stdin.
        matrix: String,
    },
    /// Membership of a matrix over F_{q^b} in the large-degree primary-cyclic set.
    PcTest {
        matrix: String,
        /// Tower `q^b/q`, e.g. `4/2`.
        #[arg(long)]
        tower: String,
    },
    /// Run a named verification suite.
    Verify {
        suite: String,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// What a finished run produced, before it is written anywhere.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Produced {
    subcommand: &'static str,
    parameters: Map<String, Value>,
    seed: Option<u64>,
    statement: &'static str,
    result: Value,
    verdict: Option<Verdict>,
    table: String,
    csv: Option<(Vec<&'static str>, Vec<Vec<String>>)>,
}

fn code_for(v: Option<Verdict>) -> i32 {
    match v {
        Some(Verdict::Violated) => EXIT_VIOLATION,
        Some(Verdict::Inconclusive) => EXIT_INCONCLUSIVE,
        _ => EXIT_OK,
    }
}

fn error_code(e: &CliError) -> i32 {
    match e {
        CliError::Core(Error::NiViolation { .. }) => EXIT_VIOLATION,
        _ => EXIT_USAGE,
    }
}

pub fn resolve_budget(flag: Option<u128>) -> Result<u128> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var("NICENSUS_BUDGET") {
        Ok(s) => s.trim().parse().map_err(|_| CliError::Usage(format!("NICENSUS_BUDGET must be an integer, found `{s}`"))),
        Err(_) => Ok(par::DEFAULT_BUDGET),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
            };
        }
    };
    match execute(&cli) {
        Ok(o) => o,
        Err(e) => Outcome { code: error_code(&e), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let budget = resolve_budget(cli.budget)?;
    if cli.threads == Some(0) {
        return Err(CliError::Usage("--threads must be positive".into()));
    }
    let produced = par::in_pool(cli.threads, || dispatch(&cli.command, budget))??;
    let manifest = RunManifest::new(produced.subcommand, produced.parameters, produced.seed, produced.statement, &produced.result);
    let doc = document(&manifest, produced.result);
    let pretty = serde_json::to_string_pretty(&doc)? + "\n";
    if let Some(path) = &cli.json {
        std::fs::write(path, &pretty)?;
    }
    if let Some(path) = &cli.csv {
        let (header, rows) = produced
            .csv
            .ok_or_else(|| CliError::Usage(format!("{} has no CSV form", produced.subcommand)))?;
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(&header)?;
        for row in rows {
            w.write_record(&row)?;
        }
        w.flush()?;
    }
    let code = code_for(produced.verdict);
    Ok(if cli.table {
        Outcome { code, stdout: produced.table, stderr: serde_json::to_string(&manifest.to_json())? + "\n" }
    } else {
        Outcome { code, stdout: pretty, stderr: String::new() }
    })
}

fn params(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn frac(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn read_matrix(arg: &str) -> Result<Mat> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        parse_matrix_input(&s)
    } else {
        parse_matrix_input(arg)
    }
}

fn dispatch(cmd: &Command, budget: u128) -> Result<Produced> {
    match cmd {
        Command::Census { spec, d, q, flag_check } => census(spec, *d, q, *flag_check, budget),
        Command::Quokka { c, q, b, r } => quokka(*c, *q, *b, *r),
        Command::Estimate { spec, d, q, b, n, seed, target, instances } => match instances {
            Some(list) => estimate_compare(list, *n, *seed, budget),
            None => {
                let d = d.ok_or_else(|| CliError::Usage("estimate needs --d (or --instances)".into()))?;
                let q = q.as_deref().ok_or_else(|| CliError::Usage("estimate needs --q (or --instances)".into()))?;
                estimate(spec, d, q, *b, *n, *seed, target, budget)
            }
        },
        Command::Decompose { matrix } => decompose(matrix),
        Command::PcTest { matrix, tower } => pc_test(matrix, tower),
        Command::Verify { suite, n, seed } => verify(suite, *n, *seed, budget),
    }
}

fn census(name: &str, d: usize, q: &str, flag_check: bool, budget: u128) -> Result<Produced> {
    if d == 0 {
        return Err(CliError::Usage("--d must be positive".into()));
    }
    let field = parse_field(q)?;
    let spec = builtin_spec(name, &field)?;
    let c = par::census(spec.as_ref(), &field, d, budget)?;
    let mut result = json::flag_census(&c, spec.as_ref());
    let mut ok = c.identity_holds() && c.counts_hold() && c.closed_form_mismatches(spec.as_ref()).is_empty();
    if flag_check {
        let flag = skew_flag(&field, d);
        let by_def = ni_by_definition(spec.as_ref(), &field, d, &flag, budget)?;
        let counted: Vec<u64> = c.per_i.iter().map(|r| u64::try_from(&r.n_i).unwrap_or(u64::MAX)).collect();
        ok &= by_def == counted;
        result["flag_check"] = json!({ "flag": json::mat(&flag), "n_i_by_definition": by_def, "matches": by_def == counted });
    }
    let mut table = format!("{} on M({d},{}):\n  i  |N_i|  |GL(i)|  |N(i)|  |N_i|/|GL(i)|  weight\n", c.spec, c.q);
    let mut rows = Vec::new();
    for r in &c.per_i {
        let p = r.proportion();
        let w = flag_weight(d, r.i, c.q);
        table += &format!("  {}  {}  {}  {}  {}  {}\n", r.i, r.n_i, r.gl_i, r.n_of_i, frac(&p), frac(&w));
        rows.push(vec![
            r.i.to_string(),
            r.n_i.to_string(),
            r.gl_i.to_string(),
            r.n_of_i.to_string(),
            p.numer().to_string(),
            p.denom().to_string(),
            w.numer().to_string(),
            w.denom().to_string(),
        ]);
    }
    table += &format!(
        "|N| = {}; |N|/|GL| = {}; flag sum = {}; identity {}; counts {}\n",
        c.n_total,
        frac(&c.lhs),
        frac(&c.rhs),
        if c.identity_holds() { "holds" } else { "FAILS" },
        if c.counts_hold() { "hold" } else { "FAIL" },
    );
    Ok(Produced {
        subcommand: "census",
        parameters: params(&[
            ("spec", json!(name)),
            ("d", json!(d)),
            ("q", json!(field_descriptor(&field))),
            ("flag_check", json!(flag_check)),
        ]),
        seed: None,
        statement: "flag-sum-identity",
        result,
        verdict: Some(if ok { Verdict::Holds } else { Verdict::Violated }),
        table,
        csv: Some((vec!["i", "n_i", "gl_i", "n_of_i", "proportion_num", "proportion_den", "weight_num", "weight_den"], rows)),
    })
}

/// Enclosure of `(1/r)(1 - 2 q^{-br/2})`.
fn per_r_lower(q: u64, b: u32, r: usize) -> Interval {
    let one = Interval::from_u64(1);
    let rr = Interval::from_u64(r as u64);
    let tail = Interval::from_u64(2).div(Interval::root_pow(q, b * r as u32, 1));
    one.sub(tail).div(rr)
}

fn quokka(c: usize, q: u64, b: u32, r: Option<usize>) -> Result<Produced> {
    if c == 0 || b == 0 {
        return Err(CliError::Usage("--c and --b must be positive".into()));
    }
    Field::with_size(q)?;
    let sheet = BoundSheet::new(c, q, b);
    let mut result = json::bound_sheet(&sheet);
    let mut table = format!("c = {c}, q = {q}, b = {b}\n  r  |N(c,q,b,r)|/|GL|  per-r bounds\n");
    let mut rows = Vec::new();
    for (rr, v) in &sheet.exact_by_r {
        let lower = per_r_lower(q, b, *rr);
        let holds = pc_r_bounds_hold(q, b, *rr, v);
        table += &format!("  {rr}  {}  {}\n", frac(v), if holds { "hold" } else { "FAIL" });
        rows.push(vec![
            c.to_string(),
            q.to_string(),
            b.to_string(),
            rr.to_string(),
            v.numer().to_string(),
            v.denom().to_string(),
            lower.lo.to_string(),
            frac(&Rational::new(1.into(), (*rr as u64).into())),
            holds.to_string(),
        ]);
    }
    table += &format!("total over r > c/2: {}\n", frac(&sheet.exact_total));
    if let (Some(l), Some(u)) = (sheet.lower, sheet.upper) {
        table += &format!("GL band: ({}, {}] -> {:?} / {:?}\n", l.lo, u.hi, sheet.band_lower, sheet.band_upper);
    }
    table += &format!("|N|/|M(c,q^b)| = {}", frac(&sheet.thm_exact));
    if let (Some(t), Some(v)) = (sheet.thm_bound, sheet.thm) {
        table += &format!(" vs lower bound {} -> {v}", t.hi);
    }
    table.push('\n');
    if let Some(r) = r {
        let single = quokka_pc_single(c, q, b, r)?;
        let total = quokka_pc_r(c, q, b, r)?;
        result["r_detail"] = json!({
            "r": r,
            "r_cycle_proportion": json::rational(&r_cycle_proportion(c, r)?),
            "single_f": json::rational(&single),
            "irr_count_not_t": json::big(&irr_count_not_t(b * r as u32, q)),
            "total": json::rational(&total),
            "lower_bound": json::interval(per_r_lower(q, b, r)),
            "upper_bound": json::rational(&Rational::new(1.into(), (r as u64).into())),
            "bounds_hold": pc_r_bounds_hold(q, b, r, &total),
        });
        table += &format!("r = {r}: per f {}, total {}\n", frac(&single), frac(&total));
    }
    let verdicts = [sheet.band_lower, sheet.band_upper, sheet.thm];
    let verdict = worst(
        verdicts
            .iter()
            .flatten()
            .copied()
            .chain(std::iter::once(if sheet.per_r_bounds { Verdict::Holds } else { Verdict::Violated })),
    );
    Ok(Produced {
        subcommand: "quokka",
        parameters: params(&[("c", json!(c)), ("q", json!(q)), ("b", json!(b)), ("r", json!(r))]),
        seed: None,
        statement: "large-degree-primary-cyclic-gl-proportion",
        result,
        verdict: Some(verdict),
        table,
        csv: Some((vec!["c", "q", "b", "r", "exact_num", "exact_den", "lower_bound", "upper_bound", "bounds_hold"], rows)),
    })
}

const ESTIMATE_HEADER: [&str; 9] = ["instance", "n", "estimate", "ci_low", "ci_high", "exact_num", "exact_den", "bound", "verdict"];

fn estimate_rows(instance: &str, r: &nicensus_core::estimate::ProportionReport) -> Vec<Vec<String>> {
    let (num, den) = r.exact.as_ref().map_or((String::new(), String::new()), |x| (x.numer().to_string(), x.denom().to_string()));
    let base = vec![instance.to_string(), r.n.to_string(), r.estimate.to_string(), r.ci_low.to_string(), r.ci_high.to_string(), num, den];
    if r.bounds.is_empty() {
        let mut row = base;
        row.extend([String::new(), String::new()]);
        return vec![row];
    }
    r.bounds
        .iter()
        .map(|(b, v)| {
            let mut row = base.clone();
            // the endpoint a sample has to clear
            let edge = match b.direction {
                Direction::Lower => b.value.hi,
                Direction::Upper => b.value.lo,
            };
            row.extend([edge.to_string(), v.as_str().to_string()]);
            row
        })
        .collect()
}

fn parse_instances(list: &str) -> Result<Vec<(usize, u64, u32)>> {
    list.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let parts: Vec<&str> = item.split(',').map(str::trim).collect();
            let bad = || CliError::Usage(format!("instance `{item}` is not `c,q,b`"));
            if parts.len() != 3 {
                return Err(bad());
            }
            Ok((parts[0].parse().map_err(|_| bad())?, parts[1].parse().map_err(|_| bad())?, parts[2].parse().map_err(|_| bad())?))
        })
        .collect()
}

fn estimate_compare(list: &str, n: u64, seed: u64, budget: u128) -> Result<Produced> {
    let instances = parse_instances(list)?;
    let rows: Vec<CompareRow> = compare(&instances, n, seed, budget)?;
    let mut table = String::from("instance  estimate  [ci_low, ci_high]  exact  bound  verdict\n");
    let mut csv_rows = Vec::new();
    for row in &rows {
        let r = &row.report;
        table += &format!(
            "{}  {:.6}  [{:.6}, {:.6}]  {}  {}  {}\n",
            row.instance(),
            r.estimate,
            r.ci_low,
            r.ci_high,
            frac(row.exact()),
            row.bound.map_or("-".to_string(), |b| format!("{:.6}", b.hi)),
            row.verdict()
        );
        csv_rows.extend(estimate_rows(&row.instance(), r));
    }
    Ok(Produced {
        subcommand: "estimate",
        parameters: params(&[("instances", json!(list)), ("n", json!(n))]),
        seed: Some(seed),
        statement: "primary-cyclic-algebra-proportion",
        result: json!({ "rows": rows.iter().map(CompareRow::to_json).collect::<Vec<_>>() }),
        verdict: Some(worst(rows.iter().map(CompareRow::verdict))),
        table,
        csv: Some((ESTIMATE_HEADER.to_vec(), csv_rows)),
    })
}

/// `b` with `name == "pc-large-degree(b)"`.
fn pc_degree(name: &str) -> Option<u32> {
    name.strip_prefix("pc-large-degree(")?.strip_suffix(')')?.trim().parse().ok()
}

/// `q` with `q^b == size`.
fn root(size: u64, b: u32) -> Option<u64> {
    (2..=size).find(|&q| q.checked_pow(b) == Some(size))
}

/// Exact proportion and theory bounds for `spec` on `M(d, q)` or `GL(d, q)`.
fn exact_and_bounds(spec: &dyn NiSpec, name: &str, field: &Field, d: usize, target: Target, budget: u128) -> Result<(Option<Rational>, Vec<NamedBound>)> {
    let q = field.size();
    if let Some((b, q0)) = pc_degree(name).and_then(|b| root(q, b).map(|q0| (b, q0))) {
        return Ok(match target {
            Target::Algebra => {
                let bounds = thm_pc_m_bound(d, q0, b)
                    .ok()
                    .map(|value| NamedBound { name: "algebra-lower-bound".into(), value, direction: Direction::Lower })
                    .into_iter()
                    .collect();
                (Some(thm_pc_m_exact(d, q0, b)), bounds)
            }
            Target::General => {
                let mut bounds = Vec::new();
                if d >= 2 {
                    let (lo, hi) = ngl_band(d, q0, b);
                    bounds.push(NamedBound { name: "gl-band-lower".into(), value: lo, direction: Direction::Lower });
                    bounds.push(NamedBound { name: "gl-band-upper".into(), value: hi, direction: Direction::Upper });
                }
                (Some(ngl_exact(d, q0, b)), bounds)
            }
        });
    }
    let closed: Option<Vec<Rational>> = (0..=d).map(|i| spec.closed_form_ni(d, i, q)).collect();
    if let Some(cf) = closed {
        let exact = match target {
            Target::General => cf[d].clone(),
            Target::Algebra => omega(d as u32, q) * cf.iter().enumerate().map(|(i, p)| flag_weight(d, i, q) * p).sum::<Rational>(),
        };
        return Ok((Some(exact), Vec::new()));
    }
    if par::algebra_within(q, d, budget).is_ok() {
        let c = par::census(spec, field, d, budget)?;
        let exact = match target {
            Target::General => c.per_i[d].proportion(),
            Target::Algebra => c.proportion_of_algebra(),
        };
        return Ok((Some(exact), Vec::new()));
    }
    Ok((None, Vec::new()))
}

#[allow(clippy::too_many_arguments)]
fn estimate(name: &str, d: usize, q: &str, b: Option<u32>, n: u64, seed: u64, target: &str, budget: u128) -> Result<Produced> {
    if d == 0 {
        return Err(CliError::Usage("--d must be positive".into()));
    }
    let target = match target {
        "M" | "m" => Target::Algebra,
        "GL" | "gl" => Target::General,
        t => return Err(CliError::Usage(format!("--target must be M or GL, found `{t}`"))),
    };
    let base = parse_field(q)?;
    let (field, name) = match b {
        Some(b) => {
            if b == 0 {
                return Err(CliError::Usage("--b must be positive".into()));
            }
            let size = base.size().checked_pow(b).ok_or_else(|| CliError::Usage("q^b is too large".into()))?;
            let field = Field::with_size(size)?;
            let name = if name == "pc-large-degree" { format!("pc-large-degree({b})") } else { name.to_string() };
            if pc_degree(&name).is_some_and(|x| x != b) {
                return Err(CliError::Usage(format!("spec `{name}` disagrees with --b {b}")));
            }
            (field, name)
        }
        None if name == "pc-large-degree" => (base, "pc-large-degree(1)".to_string()),
        None => (base, name.to_string()),
    };
    let spec = builtin_spec(&name, &field)?;
    let (exact, bounds) = exact_and_bounds(spec.as_ref(), &name, &field, d, target, budget)?;
    let cfg = SampleConfig { seed, n, target };
    let pred = |x: &Mat| spec.member(x);
    let report = par::monte_carlo(&pred, d, &field, &cfg, budget, exact, bounds)?;
    let tname = if target == Target::Algebra { "M" } else { "GL" };
    let instance = format!("{name}:{tname}({d},{})", field.size());
    let mut table = format!(
        "{instance}: {} of {} ({:.6}), 99% interval [{:.6}, {:.6}]\n",
        report.hits, report.n, report.estimate, report.ci_low, report.ci_high
    );
    if let Some(x) = &report.exact {
        table += &format!("exact {} ≈ {:.6}, inside interval: {}\n", frac(x), enclose(x).mid(), report.ci_contains(x));
    }
    for (bd, v) in &report.bounds {
        table += &format!("{} {:.6}: {v}\n", bd.name, bd.value.mid());
    }
    let mut result = json::proportion_report(&report);
    result["instance"] = json!(instance);
    Ok(Produced {
        subcommand: "estimate",
        parameters: params(&[
            ("spec", json!(name)),
            ("d", json!(d)),
            ("q", json!(field_descriptor(&field))),
            ("target", json!(tname)),
            ("n", json!(n)),
        ]),
        seed: Some(seed),
        statement: "monte-carlo-proportion",
        verdict: report.worst_verdict(),
        csv: Some((ESTIMATE_HEADER.to_vec(), estimate_rows(&instance, &report))),
        result,
        table,
    })
}

fn decompose(arg: &str) -> Result<Produced> {
    let x = read_matrix(arg)?;
    let result = json::decomposition(&x)?;
    let split = x.fitting_decompose();
    let table = format!(
        "{x}\ncharpoly {}\nminpoly {}\ndim V_inv = {}, dim V_nil = {}\n",
        x.charpoly(),
        x.minpoly(),
        split.inv_dim(),
        split.nil_dim()
    );
    Ok(Produced {
        subcommand: "decompose",
        parameters: params(&[("matrix", json!(x.to_string()))]),
        seed: None,
        statement: "invertible-nilpotent-decomposition",
        result,
        verdict: None,
        table,
        csv: None,
    })
}

fn pc_test(arg: &str, tower: &str) -> Result<Produced> {
    let tw = parse_tower(tower)?;
    let x = read_matrix(arg)?;
    if x.field() != tw.ext() {
        return Err(Error::FieldMismatch.into());
    }
    let m = tw.pc_membership(&x)?;
    let cross = tw.pc_membership_blowup(&x)?;
    let mut result = json::pc_membership(&m);
    result["tower"] = json!(tw.to_string());
    result["blowup_route_agrees"] = json!(cross == m);
    let table = match (&m.witness_f, &m.witness_g, m.r) {
        (Some(f), Some(g), Some(r)) => format!("member: f = {f}, g = {g}, r = {r}\n"),
        _ => "not a member\n".to_string(),
    };
    Ok(Produced {
        subcommand: "pc-test",
        parameters: params(&[("matrix", json!(x.to_string())), ("tower", json!(tw.to_string()))]),
        seed: None,
        statement: "large-degree-primary-cyclic-membership",
        result,
        verdict: Some(if cross == m { Verdict::Holds } else { Verdict::Violated }),
        table,
        csv: None,
    })
}

fn verify(name: &str, n: Option<u64>, seed: Option<u64>, budget: u128) -> Result<Produced> {
    let defaults = SuiteOptions::default();
    let opts = SuiteOptions { budget, n: n.unwrap_or(defaults.n), seed: seed.unwrap_or(defaults.seed) };
    let (canonical, statement) = suites::lookup(name)?;
    let report = suites::run_suite(canonical, &opts)?;
    let mut table = String::new();
    for c in &report.checks {
        let tag = match c.verdict {
            Verdict::Holds => "PASS",
            Verdict::Violated => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        };
        table += &format!("{tag} {}: {}\n", c.label, c.detail);
    }
    let rows = report.checks.iter().map(|c| vec![report.suite.clone(), c.label.clone(), c.verdict.as_str().to_string(), c.detail.clone()]).collect();
    Ok(Produced {
        subcommand: "verify",
        parameters: params(&[("suite", json!(canonical)), ("n", json!(opts.n))]),
        seed: Some(opts.seed),
        statement,
        verdict: Some(report.verdict()),
        result: report.to_json(),
        table,
        csv: Some((vec!["suite", "check", "verdict", "detail"], rows)),
    })
}
