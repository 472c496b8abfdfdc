//! `klab`: runs verification suites for the (k,a)-generalized Laguerre
//! operator from a TOML configuration.

mod config;
mod report;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use rayon::prelude::*;

use config::{apply_override, RunConfig};
use report::Report;
use suites::{run_suite, Ctx};

#[derive(Debug, Parser)]
#[command(name = "klab", version, about = "Verification suites for the (k,a)-generalized Laguerre operator")]
struct Cli {
    /// TOML configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    /// run only this suite (comma-separated list allowed); overrides the config
    #[arg(long)]
    suite: Option<String>,
    /// worker threads
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// output directory; overrides the config
    #[arg(long)]
    out: Option<PathBuf>,
    /// base seed; overrides the config
    #[arg(long)]
    seed: Option<u64>,
    /// `section.key=value`, repeatable
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

const EXIT_FAILED: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn load(cli: &Cli) -> Result<RunConfig> {
    let mut table = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            toml::from_str::<toml::Table>(&text).with_context(|| format!("{} is not valid TOML", path.display()))?
        }
        None => toml::Table::new(),
    };
    for o in &cli.overrides {
        apply_override(&mut table, o)?;
    }
    if let Some(s) = &cli.suite {
        let names = s.split(',').map(|n| toml::Value::String(n.trim().to_string())).collect();
        apply_override(&mut table, "suite.names=[]")?;
        table["suite"].as_table_mut().expect("section created above").insert("names".into(), toml::Value::Array(names));
    }
    if let Some(seed) = cli.seed {
        apply_override(&mut table, &format!("ensemble.base_seed={seed}"))?;
    }
    if let Some(out) = &cli.out {
        let dir = toml::Value::String(out.display().to_string());
        apply_override(&mut table, "output.dir=\"\"")?;
        table["output"].as_table_mut().expect("section created above").insert("dir".into(), dir);
    }
    RunConfig::from_table(table)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("LAB_LOG_LEVEL", "warn")).init();
    let cli = Cli::parse();
    let rc = match load(&cli) {
        Ok(rc) => rc,
        Err(e) => {
            eprintln!("klab: {e:#}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let cfg = rc.geometry().expect("validated");
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.max(1)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("klab: cannot start {} workers: {e}", cli.jobs);
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let ctx = Ctx { cfg, rc: &rc };
    let names = rc.selected_suites();
    log::info!("running {names:?} on {}", cfg.label());
    let suites = pool.install(|| names.par_iter().map(|n| run_suite(n, &ctx)).collect::<Vec<_>>());
    let report = Report::new(&rc, cfg.label(), suites);
    let dir = PathBuf::from(&rc.output.dir);
    if let Err(e) = report.write(&dir) {
        eprintln!("klab: cannot write report: {e:#}");
        return ExitCode::from(EXIT_FAILED);
    }
    print!("{}", report.summary_text());
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        for s in &report.suites {
            for id in s.failing() {
                eprintln!("klab: failed: {id}");
            }
        }
        ExitCode::from(EXIT_FAILED)
    }
}
