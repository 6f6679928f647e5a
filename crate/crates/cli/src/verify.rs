use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Args;
use orlicz_qha::verify::{run as run_suite, SuiteConfig, VerificationReport};
use serde_json::json;

use crate::input::{print_json, read_text, Failure};

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite config JSON.
    config: PathBuf,
    /// Directory for `<config stem>.json` and `<config stem>.csv`.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Fock truncation.
    #[arg(long)]
    n_fock: Option<usize>,
    /// Grid points per axis.
    #[arg(long)]
    grid_n: Option<usize>,
    /// Grid half-width `L`.
    #[arg(long)]
    extent: Option<f64>,
    /// Grid points per axis of the second resolution.
    #[arg(long)]
    refined_n: Option<usize>,
    #[arg(long)]
    slack: Option<f64>,
    /// Multiplies every explicit bound; values below one should fail.
    #[arg(long)]
    bound_scale: Option<f64>,
}

impl VerifyArgs {
    fn config(&self) -> Result<SuiteConfig, Failure> {
        let text = read_text(&self.config)?;
        let mut cfg = SuiteConfig::from_json(&text).map_err(|e| Failure::input(format!("{}: {e}", self.config.display())))?;
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(t) = self.trials {
            cfg.trials = t;
        }
        if let Some(n) = self.n_fock {
            cfg.grid.n_fock = n;
        }
        if let Some(n) = self.grid_n {
            cfg.grid.n = n;
        }
        if let Some(l) = self.extent {
            cfg.grid.extent = l;
        }
        if let Some(n) = self.refined_n {
            cfg.grid.refined_n = Some(n);
        }
        if let Some(s) = self.slack {
            cfg.slack = s;
        }
        if let Some(b) = self.bound_scale {
            cfg.bound_scale = b;
        }
        cfg.validate().map_err(|e| Failure::input(e.to_string()))?;
        Ok(cfg)
    }
}

fn write_report(rep: &VerificationReport, dir: &Path, stem: &str) -> Result<(PathBuf, PathBuf), Failure> {
    let io = |p: &Path, e: std::io::Error| Failure::input(format!("{}: {e}", p.display()));
    fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let json_path = dir.join(format!("{stem}.json"));
    let csv_path = dir.join(format!("{stem}.csv"));
    fs::write(&json_path, rep.to_json()).map_err(|e| io(&json_path, e))?;
    let file = File::create(&csv_path).map_err(|e| io(&csv_path, e))?;
    rep.write_csv(BufWriter::new(file))?;
    Ok((json_path, csv_path))
}

fn summary_json(rep: &VerificationReport) -> serde_json::Value {
    json!({
        "suite": rep.suite,
        "seed": rep.seed,
        "trials": rep.trials,
        "summary": rep.summary,
    })
}

/// Exit 0 when every gating check passes and the self-test fails, 1 otherwise,
/// 2 when the config cannot be used.
pub fn run(args: VerifyArgs) -> Result<ExitCode, Failure> {
    let cfg = args.config()?;
    let rep = run_suite(&cfg).map_err(|e| Failure::input(format!("{}: {e}", args.config.display())))?;
    let stem = args.config.file_stem().and_then(|s| s.to_str()).unwrap_or("report");
    let (json_path, csv_path) = write_report(&rep, &args.out, stem)?;
    let mut out = summary_json(&rep);
    out["json"] = json!(json_path);
    out["csv"] = json!(csv_path);
    print_json(&out);
    Ok(if rep.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Report JSON written by `verify`.
    report: PathBuf,
    /// Also list the failing non-self-test records.
    #[arg(long)]
    failures: bool,
    /// Exit 1 when the report did not pass.
    #[arg(long)]
    check: bool,
}

pub fn report(args: ReportArgs) -> Result<ExitCode, Failure> {
    let rep = VerificationReport::from_json(&read_text(&args.report)?)?;
    let mut out = summary_json(&rep);
    if args.failures {
        out["failures"] = json!(rep.records.iter().filter(|r| !r.self_test && !r.pass).collect::<Vec<_>>());
    }
    print_json(&out);
    Ok(if args.check && !rep.passed() { ExitCode::from(1) } else { ExitCode::SUCCESS })
}
