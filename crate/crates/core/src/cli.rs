//! The `posassoc` command line.
//!
//! Every subcommand except `enumerate` writes one JSON run report to stdout:
//! `{"command", "input", "result", "witnesses", "stats", "output"?}`.
//! Exit status is 0 on pass, 1 when witnesses were found and 2 on usage or
//! data errors (diagnostic on stderr). Worker count comes from `--workers`,
//! else `POSASSOC_WORKERS`, else the number of cores.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::analysis::{abc_scan, harris_criterion, pa_check, sahi_scan, AbcWitness, PaViolation, SahiReport};
use crate::cube::{EventJson, IncreasingEvent};
use crate::fui::{self, FuiRealization, RealizationJson};
use crate::measures::{fixed_point_measure, AnyMeasure, FkgViolation, Measure, MeasureJson, ProductMeasure};
use crate::monotone::{enumerate_increasing, EnumConfig};
use crate::rational::{self, Rational};

pub const WORKERS_ENV: &str = "POSASSOC_WORKERS";

#[derive(Parser, Debug)]
#[command(name = "posassoc", version, about = "Exact checks of positive association on the Boolean cube")]
struct Cli {
    /// Scan threads [default: number of cores]
    #[arg(long, global = true, env = WORKERS_ENV)]
    workers: Option<usize>,
    /// Print a one-line summary instead of the JSON report
    #[arg(long, global = true)]
    quiet: bool,
    /// Leave out timing and worker count so reports are byte-identical
    #[arg(long, global = true)]
    reproducible: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List every increasing event on n coordinates, or count them
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        include_empty: bool,
        #[arg(long)]
        include_full: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Test every pair of increasing events for positive correlation
    CheckPa {
        #[arg(long)]
        measure: PathBuf,
    },
    /// Test the positive lattice condition
    CheckFkg {
        #[arg(long)]
        measure: PathBuf,
    },
    /// Search for triples with AB, AC independent of C, B but B, C dependent
    CheckAbc {
        #[arg(long)]
        measure: PathBuf,
        /// Report at most K witnesses (all are counted)
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Compare independence with disjointness of affecting coordinates
    HarrisCheck {
        #[arg(long)]
        p: String,
        #[arg(long)]
        event_a: PathBuf,
        #[arg(long)]
        event_b: PathBuf,
    },
    /// Minimize the three-event expression over a product-measure grid
    SahiScan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        grid: String,
    },
    /// Law of the fixed-point indicators of a uniform permutation
    FixedPointMeasure {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Realize a lattice-condition measure by increasing functions of Bernoullis
    RealizeFui {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exact law of a realization
    Pushforward {
        #[arg(long)]
        realization: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Built-in realizations
    Fixture {
        #[command(subcommand)]
        which: Fixture,
    },
    /// Seeded random realization
    RandomFui {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum Fixture {
    /// X1 = Y1 Y2, X2 = Y1 Y3, X3 = Y2 Y3
    Footnote2 {
        #[arg(long, default_value = "1/2,1/2,1/2")]
        q: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Count,
}

#[derive(Serialize, Default, Debug)]
struct Stats {
    #[serde(skip_serializing_if = "Option::is_none")]
    pairs_scanned: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    triples_scanned: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid_points: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    evaluations: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    total_witnesses: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    underlying: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_ms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    workers: Option<usize>,
}

#[derive(Serialize, Debug)]
struct RunReport {
    command: &'static str,
    input: Value,
    result: &'static str,
    witnesses: Vec<Value>,
    stats: Stats,
    #[serde(skip_serializing_if = "Option::is_none")]
    output: Option<Value>,
}

struct Outcome {
    command: &'static str,
    input: Value,
    witnesses: Vec<Value>,
    stats: Stats,
    output: Option<Value>,
    summary: String,
}

impl Outcome {
    fn new(command: &'static str, input: Value) -> Outcome {
        Outcome { command, input, witnesses: Vec::new(), stats: Stats::default(), output: None, summary: String::new() }
    }
}

/// Runs the command line and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                return 2;
            }
            let _ = write!(out, "{rendered}");
            return 0;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> anyhow::Result<i32> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = cli.workers {
        anyhow::ensure!(k > 0, "--workers must be positive");
        builder = builder.num_threads(k);
    }
    let pool = builder.build().context("starting worker pool")?;

    if let Command::Enumerate { n, include_empty, include_full, format } = cli.command {
        let cfg = EnumConfig { n, include_empty, include_full };
        let stream = enumerate_increasing(&cfg)?;
        match format {
            Format::Count => writeln!(out, "{}", stream.remaining())?,
            Format::Json => {
                let mut buf = std::io::BufWriter::new(out);
                for e in stream {
                    serde_json::to_writer(&mut buf, &e.to_json())?;
                    buf.write_all(b"\n")?;
                }
                buf.flush()?;
            }
        }
        return Ok(0);
    }

    let start = Instant::now();
    let outcome = pool.install(|| dispatch(&cli.command))?;
    let wall_ms = start.elapsed().as_millis() as u64;

    let result = if outcome.witnesses.is_empty() { "pass" } else { "violations" };
    let mut stats = outcome.stats;
    if !cli.reproducible {
        stats.wall_ms = Some(wall_ms);
        stats.workers = Some(pool.current_num_threads());
    }
    if cli.quiet {
        writeln!(out, "{}: {} ({})", outcome.command, result, outcome.summary)?;
    } else {
        let report = RunReport {
            command: outcome.command,
            input: outcome.input,
            result,
            witnesses: outcome.witnesses,
            stats,
            output: outcome.output,
        };
        serde_json::to_writer(&mut *out, &report)?;
        writeln!(out)?;
    }
    Ok(if result == "pass" { 0 } else { 1 })
}

fn dispatch(cmd: &Command) -> anyhow::Result<Outcome> {
    match cmd {
        Command::Enumerate { .. } => unreachable!("handled before dispatch"),
        Command::CheckPa { measure } => {
            let (m, input) = read_measure(measure)?;
            let report = pa_check(&m.table())?;
            let mut o = Outcome::new("check-pa", input);
            o.stats.pairs_scanned = Some(report.pairs_scanned);
            o.summary = format!("{} pairs scanned", report.pairs_scanned);
            o.witnesses = report.violation.iter().map(pa_json).collect();
            Ok(o)
        }
        Command::CheckFkg { measure } => {
            let (m, input) = read_measure(measure)?;
            let table = m.table();
            let mut o = Outcome::new("check-fkg", input);
            o.stats.pairs_scanned = Some(incomparable_pairs(table.dim()));
            o.witnesses = table.check_fkg().iter().map(fkg_json).collect();
            o.summary = match table.check_fkg() {
                Some(v) => format!("fails at {v}"),
                None => "lattice condition holds".into(),
            };
            Ok(o)
        }
        Command::CheckAbc { measure, limit } => {
            let (m, input) = read_measure(measure)?;
            let report = abc_scan(&m.table(), *limit)?;
            let mut o = Outcome::new("check-abc", input);
            o.stats.triples_scanned = Some(report.triples_scanned);
            o.stats.total_witnesses = Some(report.total_witnesses);
            o.summary = format!("{} witnesses in {} triples", report.total_witnesses, report.triples_scanned);
            o.witnesses = report.witnesses.iter().map(abc_json).collect();
            Ok(o)
        }
        Command::HarrisCheck { p, event_a, event_b } => {
            let params = rational::parse_list(p)?;
            let m = ProductMeasure::new(params.clone())?;
            let (a, da) = read_event(event_a)?;
            let (b, db) = read_event(event_b)?;
            let outcome = harris_criterion(&m, &a, &b)?;
            let ab = a.intersect(&b)?;
            let input = json!({ "p": format_list(&params), "event_a": da, "event_b": db });
            let mut o = Outcome::new("harris-check", input);
            o.stats.pairs_scanned = Some(1);
            let detail = json!({
                "independent": outcome.independent,
                "z_disjoint": outcome.z_disjoint,
                "z_a": a.z_set().coords(),
                "z_b": b.z_set().coords(),
                "p_a": rational::format(&m.prob(&a)?),
                "p_b": rational::format(&m.prob(&b)?),
                "p_ab": rational::format(&m.prob(&ab)?),
            });
            if !outcome.agrees() {
                o.witnesses.push(detail.clone());
            }
            o.summary = format!("independent={} z_disjoint={}", outcome.independent, outcome.z_disjoint);
            o.output = Some(detail);
            Ok(o)
        }
        Command::SahiScan { n, grid } => {
            let grid = rational::parse_list(grid)?;
            let scan = sahi_scan(*n, &grid)?;
            let mut o = Outcome::new("sahi-scan", json!({ "n": n, "grid": format_list(&grid) }));
            o.stats.triples_scanned = Some(scan.triples);
            o.stats.grid_points = Some(scan.grid_points);
            o.stats.evaluations = Some(scan.evaluations());
            o.witnesses = scan.negatives.iter().map(sahi_json).collect();
            o.summary = format!(
                "minimum {} over {} evaluations",
                rational::format(&scan.minimum.value),
                scan.evaluations()
            );
            o.output = Some(json!({ "minimum": sahi_json(&scan.minimum) }));
            Ok(o)
        }
        Command::FixedPointMeasure { n, out } => {
            let m = fixed_point_measure(*n)?;
            let j = to_value(&MeasureJson::from(&m))?;
            write_json(out.as_deref(), &j)?;
            let mut o = Outcome::new("fixed-point-measure", json!({ "n": n }));
            o.summary = format!("{} atoms", m.weights().iter().filter(|w| !num_traits::Zero::is_zero(*w)).count());
            o.output = Some(j);
            Ok(o)
        }
        Command::RealizeFui { measure, out } => {
            let (m, input) = read_measure(measure)?;
            let t = fui::build_thresholds(&m.table())?;
            let r = fui::discretize(&t)?;
            let j = to_value(&r.to_json())?;
            write_json(Some(out), &j)?;
            let mut o = Outcome::new("realize-fui", input);
            o.stats.underlying = Some(r.m());
            o.summary = format!("{} underlying Bernoullis", r.m());
            o.output = Some(j);
            Ok(o)
        }
        Command::Pushforward { realization, out } => {
            let (r, input) = read_realization(realization)?;
            let law = r.pushforward()?;
            let j = to_value(&MeasureJson::from(&law))?;
            write_json(out.as_deref(), &j)?;
            let mut o = Outcome::new("pushforward", input);
            o.stats.underlying = Some(r.m());
            o.summary = format!("law on {} coordinates from {} Bernoullis", r.n(), r.m());
            o.output = Some(j);
            Ok(o)
        }
        Command::Fixture { which: Fixture::Footnote2 { q, out } } => {
            let q = rational::parse_list(q)?;
            anyhow::ensure!(q.len() == 3, "--q needs exactly three parameters, got {}", q.len());
            let [q1, q2, q3]: [Rational; 3] = q.clone().try_into().expect("length checked");
            let r = fui::footnote2_fixture(q1, q2, q3)?;
            realization_outcome("fixture", json!({ "name": "footnote2", "q": format_list(&q) }), &r, out.as_deref())
        }
        Command::RandomFui { n, m, seed, out } => {
            let r = fui::random_fui(*n, *m, *seed)?;
            realization_outcome("random-fui", json!({ "n": n, "m": m, "seed": seed }), &r, out.as_deref())
        }
    }
}

/// Emits the realization and its law.
fn realization_outcome(
    command: &'static str,
    input: Value,
    r: &FuiRealization,
    out: Option<&Path>,
) -> anyhow::Result<Outcome> {
    let j = to_value(&r.to_json())?;
    write_json(out, &j)?;
    let law = r.pushforward()?;
    let mut o = Outcome::new(command, input);
    o.stats.underlying = Some(r.m());
    o.summary = format!("{} coordinates from {} Bernoullis", r.n(), r.m());
    o.output = Some(json!({ "realization": j, "law": to_value(&MeasureJson::from(&law))? }));
    Ok(o)
}

/// Number of unordered incomparable pairs of points in `{0,1}^n`.
fn incomparable_pairs(n: usize) -> u64 {
    let total = 1u64 << n;
    let comparable = 3u64.pow(n as u32); // ordered pairs x ⊆ y, diagonal included
    (total * total - (2 * comparable - total)) / 2
}

fn to_value<T: Serialize>(t: &T) -> anyhow::Result<Value> {
    Ok(serde_json::to_value(t)?)
}

fn format_list(v: &[Rational]) -> Vec<String> {
    v.iter().map(rational::format).collect()
}

fn event_value(e: &IncreasingEvent) -> Value {
    serde_json::to_value(e.to_json()).expect("event JSON serializes")
}

fn pa_json(v: &PaViolation) -> Value {
    json!({
        "a": event_value(&v.a),
        "b": event_value(&v.b),
        "p_a": rational::format(&v.p_a),
        "p_b": rational::format(&v.p_b),
        "p_ab": rational::format(&v.p_ab),
    })
}

fn fkg_json(v: &FkgViolation) -> Value {
    json!({
        "a": v.a.coords(),
        "b": v.b.coords(),
        "w_a_w_b": rational::format(&v.lhs),
        "w_join_w_meet": rational::format(&v.rhs),
    })
}

fn abc_json(w: &AbcWitness) -> Value {
    let p = &w.probs;
    json!({
        "a": event_value(&w.a),
        "b": event_value(&w.b),
        "c": event_value(&w.c),
        "probs": {
            "a": rational::format(&p.a),
            "b": rational::format(&p.b),
            "c": rational::format(&p.c),
            "ab": rational::format(&p.ab),
            "ac": rational::format(&p.ac),
            "bc": rational::format(&p.bc),
            "abc": rational::format(&p.abc),
        },
    })
}

fn sahi_json(r: &SahiReport) -> Value {
    json!({
        "a": event_value(&r.a),
        "b": event_value(&r.b),
        "c": event_value(&r.c),
        "p_star": format_list(&r.p_star),
        "value": rational::format(&r.value),
    })
}

/// File contents plus `{"path", "sha256"}`.
fn read_input(path: &Path) -> anyhow::Result<(String, Value)> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let digest = hex::encode(Sha256::digest(&bytes));
    let text = String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))?;
    Ok((text, json!({ "path": path.display().to_string(), "sha256": digest })))
}

fn read_measure(path: &Path) -> anyhow::Result<(AnyMeasure, Value)> {
    let (text, digest) = read_input(path)?;
    let m = AnyMeasure::parse(&text).with_context(|| format!("parsing measure {}", path.display()))?;
    Ok((m, json!({ "measure": digest })))
}

fn read_event(path: &Path) -> anyhow::Result<(IncreasingEvent, Value)> {
    let (text, digest) = read_input(path)?;
    let j: EventJson = serde_json::from_str(&text).with_context(|| format!("parsing event {}", path.display()))?;
    Ok((IncreasingEvent::from_json(&j)?, digest))
}

fn read_realization(path: &Path) -> anyhow::Result<(FuiRealization, Value)> {
    let (text, digest) = read_input(path)?;
    let j: RealizationJson =
        serde_json::from_str(&text).with_context(|| format!("parsing realization {}", path.display()))?;
    Ok((FuiRealization::from_json(&j)?, json!({ "realization": digest })))
}

fn write_json(path: Option<&Path>, v: &Value) -> anyhow::Result<()> {
    if let Some(path) = path {
        let mut text = serde_json::to_string(v)?;
        text.push('\n');
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut argv = vec!["posassoc"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn incomparable_pair_counts() {
        assert_eq!(incomparable_pairs(1), 0);
        assert_eq!(incomparable_pairs(2), 1);
        // 8 points: 28 pairs, 19 comparable off-diagonal
        assert_eq!(incomparable_pairs(3), 9);
    }

    #[test]
    fn enumerate_count() {
        let (code, out, _) = run_args(&["enumerate", "--n", "3", "--include-empty", "--include-full", "--format", "count"]);
        assert_eq!((code, out.as_str()), (0, "20\n"));
        let (_, out, _) = run_args(&["enumerate", "--n", "2"]);
        assert_eq!(out, "{\"n\":2,\"min\":[[1,2]]}\n{\"n\":2,\"min\":[[1]]}\n{\"n\":2,\"min\":[[2]]}\n{\"n\":2,\"min\":[[1],[2]]}\n");
    }

    #[test]
    fn usage_errors_exit_2() {
        let (code, _, err) = run_args(&["check-pa"]);
        assert_eq!(code, 2);
        assert!(err.contains("--measure"));
        let (code, _, err) = run_args(&["check-pa", "--measure", "/nonexistent/m.json"]);
        assert_eq!(code, 2);
        assert!(err.contains("reading"));
        let (code, _, _) = run_args(&["enumerate", "--n", "7", "--format", "count"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn quiet_summary() {
        let (code, out, _) = run_args(&["--quiet", "sahi-scan", "--n", "1", "--grid", "1/2"]);
        assert_eq!(code, 0);
        assert_eq!(out, "sahi-scan: pass (minimum 0/1 over 4 evaluations)\n");
    }

    #[test]
    fn reproducible_drops_timing() {
        let (_, out, _) = run_args(&["--reproducible", "--workers", "2", "fixed-point-measure", "--n", "2"]);
        assert!(!out.contains("wall_ms") && !out.contains("workers"));
        let (_, out, _) = run_args(&["--workers", "2", "fixed-point-measure", "--n", "2"]);
        assert!(out.contains("\"wall_ms\"") && out.contains("\"workers\":2"));
    }
}
