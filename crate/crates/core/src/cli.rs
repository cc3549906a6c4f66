//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 for invalid configurations (including
//! unparsable arguments), 3 when a collocation solve fails, 1 for I/O errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{invalid, Error, Result};
use crate::experiments::io::{fmt_float, write_csv, write_csv_to, write_json, write_json_to};
use crate::experiments::{registry, run, sweep, ErrorReport, ExampleId, ExampleKind, ExperimentConfig, Vary};
use crate::nodes::NodeFamily;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "multinode-fde", version, about = "Caputo derivatives and Bagley-Torvik collocation with the multinode Shepard operator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Approximate a Caputo derivative (deriv-* examples).
    Derivative(RunArgs),
    /// Solve a boundary value problem (bvp-* examples).
    Bvp(RunArgs),
    /// Solve an initial value problem (ivp-* examples).
    Ivp(RunArgs),
    /// Run an example for each value of one parameter.
    Sweep(SweepArgs),
    /// List the available examples.
    List,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Example id, see `list`.
    #[arg(long)]
    pub example: String,
    /// Node family: equispaced, mixed-ec or mixed-emc.
    #[arg(long, default_value = "mixed-ec")]
    pub nodes: String,
    /// Number of equispaced nodes.
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of break points of the mixed families.
    #[arg(long)]
    pub ne: Option<usize>,
    /// Degree of the local interpolants.
    #[arg(long)]
    pub d: Option<usize>,
    /// Overlap index of the equispaced covering.
    #[arg(long)]
    pub q: Option<usize>,
    /// Exponent of the multinode basis (even).
    #[arg(long, default_value_t = 4)]
    pub mu: u32,
    /// Fractional order, or a comma-separated list.
    #[arg(long)]
    pub alpha: Option<String>,
    /// Frequency of ivp-3.
    #[arg(long)]
    pub omega: Option<f64>,
    /// Candidate count of the mock-Chebyshev selection.
    #[arg(long)]
    pub ns: Option<usize>,
    /// Number of evaluation points.
    #[arg(long, default_value_t = 100)]
    pub grid: usize,
    /// Output file; reports go to standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Record wall-clock run times (makes output non-reproducible).
    #[arg(long)]
    pub runtime: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Parameter to vary: d, alpha, nodes, n, ne, q or omega.
    #[arg(long)]
    pub vary: String,
    /// Comma-separated values of the varied parameter.
    #[arg(long)]
    pub values: String,
}

fn parse_alphas(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| invalid(format!("cannot parse alpha `{v}`"))))
        .collect()
}

impl RunArgs {
    /// One configuration per requested α.
    pub fn configs(&self) -> Result<Vec<ExperimentConfig>> {
        let id: ExampleId = self.example.parse()?;
        let family: NodeFamily = self.nodes.parse()?;
        if self.mu == 0 || !self.mu.is_multiple_of(2) {
            return Err(invalid(format!("mu must be a positive even integer, got {}", self.mu)));
        }
        let alphas = match &self.alpha {
            Some(s) => parse_alphas(s)?,
            None => id.example().alphas,
        };
        let mut base = ExperimentConfig::new(id, family);
        if let Some(d) = self.d {
            base.d = d;
        }
        base.n = self.n;
        base.n_e = self.ne;
        base.q = self.q;
        base.mu = self.mu;
        if self.omega.is_some() {
            base.omega = self.omega;
        }
        base.n_s = self.ns;
        base.grid = self.grid;
        base.record_runtime = self.runtime;
        Ok(alphas.into_iter().map(|a| base.clone().with_alpha(a)).collect())
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_solver_failure() {
        EXIT_SOLVER
    } else if matches!(innermost(e), Error::Io(_)) {
        EXIT_IO
    } else {
        EXIT_INVALID
    }
}

fn innermost(e: &Error) -> &Error {
    match e {
        Error::Context { source, .. } => innermost(source),
        e => e,
    }
}

fn emit(reports: &[ErrorReport], args: &RunArgs, stdout: &mut dyn Write) -> Result<()> {
    match (&args.out, args.format) {
        (Some(path), Format::Csv) => write_csv(reports, path).map_err(|e| e.context(format!("writing {}", path.display())))?,
        (Some(path), Format::Json) => write_json(reports, path).map_err(|e| e.context(format!("writing {}", path.display())))?,
        (None, Format::Csv) => write_csv_to(reports, &mut *stdout)?,
        (None, Format::Json) => write_json_to(reports, &mut *stdout)?,
    }
    if args.out.is_some() {
        for r in reports {
            writeln!(stdout, "{}", summary_line(r))?;
        }
    }
    Ok(())
}

/// One-line summary of a report.
pub fn summary_line(r: &ErrorReport) -> String {
    let c = &r.config;
    let mut line = format!(
        "{} {} d={} n={} alpha={} mean_error={}",
        c.example_id,
        c.node_family,
        c.d,
        r.resolved.n,
        fmt_float(c.alpha),
        fmt_float(r.mean_error)
    );
    if let Some(q) = r.resolved.q {
        line += &format!(" q={q}");
    }
    if let Some(w) = c.omega {
        line += &format!(" omega={}", fmt_float(w));
    }
    if let Some(k) = r.cond {
        line += &format!(" cond={}", fmt_float(k));
    }
    if let Some(res) = r.residual {
        line += &format!(" residual={}", fmt_float(res));
    }
    for note in &r.notes {
        line += &format!(" [{note}]");
    }
    line
}

fn list(stdout: &mut dyn Write) -> Result<()> {
    for ex in registry() {
        let alphas: Vec<String> = ex.alphas.iter().map(|&a| fmt_float(a)).collect();
        writeln!(
            stdout,
            "{:<12} {:<10} alpha={} d={}..{}  {}",
            ex.id,
            ex.kind().as_str(),
            alphas.join(","),
            ex.d_range.0,
            ex.d_range.1,
            ex.description
        )?;
    }
    Ok(())
}

fn check_kind(cmd: ExampleKind, args: &RunArgs) -> Result<()> {
    let id: ExampleId = args.example.parse()?;
    if id.kind() != cmd {
        return Err(invalid(format!("{id} is a {} example, not {}", id.kind().as_str(), cmd.as_str())));
    }
    Ok(())
}

fn execute(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let (kind, args) = match cli.command {
        Command::List => return list(stdout),
        Command::Sweep(s) => {
            let vary = Vary::parse(&s.vary, &s.values)?;
            let mut reports = Vec::new();
            let mut failure = None;
            for base in s.run.configs()? {
                let out = sweep(&base, &vary);
                reports.extend(out.reports);
                if let Some(e) = out.failure {
                    failure = Some(e);
                    break;
                }
            }
            emit(&reports, &s.run, stdout)?;
            return match failure {
                Some(e) => {
                    writeln!(stderr, "sweep stopped after {} reports", reports.len())?;
                    Err(e)
                }
                None => Ok(()),
            };
        }
        Command::Derivative(a) => (ExampleKind::Derivative, a),
        Command::Bvp(a) => (ExampleKind::Boundary, a),
        Command::Ivp(a) => (ExampleKind::Initial, a),
    };
    check_kind(kind, &args)?;
    let reports = args.configs()?.iter().map(run).collect::<Result<Vec<_>>>()?;
    emit(&reports, &args, stdout)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(stderr, "{text}") } else { write!(stdout, "{text}") };
            return code;
        }
    };
    match execute(cli, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_cli(std::iter::once("multinode-fde").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn list_shows_every_example() {
        let (code, out, _) = call(&["list"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 12);
        assert!(out.contains("bvp-6") && out.contains("alpha=1.5000000000000000e0"));
    }

    #[test]
    fn bvp_to_stdout() {
        let (code, out, err) = call(&["bvp", "--example", "bvp-1", "--nodes", "equispaced", "--n", "8", "--d", "3", "--q", "2"]);
        assert_eq!(code, 0, "{err}");
        assert_eq!(out.lines().count(), 102);
        let summary: Vec<&str> = out.lines().last().unwrap().split(',').collect();
        assert_eq!(summary[3], "8");
        assert!(summary[10].parse::<f64>().unwrap() < 1e-12);
        // 17 significant digits
        assert_eq!(summary[11].split('e').next().unwrap().len(), 18);
    }

    #[test]
    fn alpha_list_and_json() {
        let (code, out, _) =
            call(&["derivative", "--example", "deriv-sin", "--d", "3", "--ne", "3", "--alpha", "0.5,1.5", "--format", "json"]);
        assert_eq!(code, 0);
        let reports = crate::experiments::io::read_json_from(out.as_bytes()).unwrap();
        assert_eq!(reports.len(), 2);
        assert_eq!(reports[1].config.alpha, 1.5);
        assert!(out.contains("\"alpha\": 5.0000000000000000e-1"));
    }

    #[test]
    fn invalid_configurations_exit_2() {
        for args in [
            &["bvp", "--example", "ivp-1"][..],
            &["bvp", "--example", "bvp-9"],
            &["bvp", "--example", "bvp-1", "--nodes", "chebyshev"],
            &["bvp", "--example", "bvp-1", "--mu", "3"],
            &["bvp", "--example", "bvp-1", "--alpha", "1.2"],
            &["derivative", "--example", "deriv-sin", "--alpha", "1.0"],
            &["derivative", "--example", "deriv-sin", "--alpha", "x"],
            &["ivp", "--example", "ivp-3", "--nodes", "equispaced", "--n", "5", "--d", "3", "--q", "3"],
            &["sweep", "--example", "ivp-2", "--vary", "mu", "--values", "2"],
            &["frobnicate"],
            &["bvp", "--n", "8"],
        ] {
            let (code, _, err) = call(args);
            assert_eq!(code, EXIT_INVALID, "{args:?}: {err}");
            assert!(!err.is_empty());
        }
    }

    #[test]
    fn sweep_with_out_file_and_partial_failure() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sweep.csv");
        let p = path.to_str().unwrap();
        let (code, out, _) =
            call(&["sweep", "--example", "bvp-6", "--nodes", "mixed-emc", "--vary", "d", "--values", "3,4", "--out", p]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 2);
        assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 1 + 2 * 101);

        let (code, _, err) = call(&[
            "sweep", "--example", "ivp-2", "--nodes", "equispaced", "--n", "20", "--vary", "d", "--values", "3,25", "--out", p,
        ]);
        assert_eq!(code, EXIT_INVALID);
        assert!(err.contains("after 1 reports"));
        assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 1 + 101);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Singular { cond: 1e20 }), EXIT_SOLVER);
        assert_eq!(exit_code(&Error::RankDeficient { cond: 1e20 }.context("x")), EXIT_SOLVER);
        assert_eq!(exit_code(&invalid("x")), EXIT_INVALID);
        let (code, _, _) = call(&["bvp", "--example", "bvp-1", "--out", "/nonexistent/dir/x.csv"]);
        assert_eq!(code, EXIT_IO);
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("sweep"));
    }
}
