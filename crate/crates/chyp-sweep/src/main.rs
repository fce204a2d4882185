//! Command-line front end: `sweep`, `check`, `tables` and `census`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use chyp::quadrangle::Params;
use chyp_sweep::census::{run_census, verdict};
use chyp_sweep::check::check_tuple;
use chyp_sweep::filter;
use chyp_sweep::record::RowWriter;
use chyp_sweep::tables::verify_tables;
use chyp_sweep::{run_sweep, SweepConfig, SweepError};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(version, about = "Sweep, census and table verification for the M(n,l,k,p) family")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every tuple with n in [n-min, n-max] and emit the accepted ones.
    Sweep(Common),
    /// Full report for one tuple.
    Check {
        n: i64,
        l: i64,
        k: i64,
        p: i64,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Re-derive the bundled reference tables.
    Tables(Common),
    /// Long census run with checkpointing; emits a JSON summary.
    Census {
        /// Checkpoint file, created or resumed.
        #[arg(long, default_value = "census-checkpoint.json")]
        checkpoint: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

/// Flags shared by all subcommands; they override the config file and the environment.
#[derive(Args)]
struct Common {
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n_min: Option<i64>,
    #[arg(long)]
    n_max: Option<i64>,
    #[arg(long)]
    margin: Option<f64>,
    #[arg(long)]
    marginal_band: Option<f64>,
    /// Worker threads, or `auto`.
    #[arg(long)]
    threads: Option<String>,
    /// `csv` or `jsonl`.
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated list of `integer_tau`, `real_hyperbolic`, `extremes`.
    #[arg(long)]
    filter: Option<String>,
    #[arg(long)]
    z_seed: Option<f64>,
    #[arg(long)]
    verify_identities: bool,
}

impl Common {
    fn resolve(&self, defaults: SweepConfig) -> Result<SweepConfig, SweepError> {
        let mut cfg = match &self.config {
            Some(path) => {
                let mut c = defaults;
                let text = std::fs::read_to_string(path)
                    .map_err(|e| SweepError::Config(format!("cannot read {}: {e}", path.display())))?;
                c.apply_text(&text)?;
                c
            }
            None => defaults,
        };
        cfg.apply_env()?;
        let pairs: [(&str, Option<String>); 8] = [
            ("n_min", self.n_min.map(|v| v.to_string())),
            ("n_max", self.n_max.map(|v| v.to_string())),
            ("margin", self.margin.map(|v| v.to_string())),
            ("marginal_band", self.marginal_band.map(|v| v.to_string())),
            ("threads", self.threads.clone()),
            ("format", self.format.clone()),
            ("filter", self.filter.clone()),
            ("z_seed", self.z_seed.map(|v| v.to_string())),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                cfg.set(key, &v)?;
            }
        }
        if let Some(out) = &self.out {
            cfg.output = Some(out.clone());
        }
        if self.verify_identities {
            cfg.verify_identities = true;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn output(cfg: &SweepConfig) -> Result<Box<dyn Write>, SweepError> {
    Ok(match &cfg.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn sweep(cfg: &SweepConfig) -> Result<(), SweepError> {
    let out = run_sweep(cfg)?;
    let mut w = RowWriter::new(output(cfg)?, cfg.format)?;
    for r in filter::apply(&out.records, &cfg.filters) {
        w.write(&r)?;
    }
    w.finish()?.flush()?;
    let s = &out.summary;
    eprintln!(
        "n in [{}, {}]: {} accepted, {} with integer tau, {} marginal, {} near misses, {} evaluation errors, {:.2}s",
        cfg.n_min,
        cfg.n_max,
        s.total_accepted,
        s.integer_tau_count,
        s.marginal_count,
        s.near_miss_count,
        s.tuple_error_count,
        s.wall_time.as_secs_f64()
    );
    for (p, e) in &out.tuple_errors {
        eprintln!("evaluation error {p:?}: {e}");
    }
    if !out.violations.is_empty() {
        return Err(SweepError::Property(out.violations.join("; ")));
    }
    Ok(())
}

fn check(params: Params, json: bool, cfg: &SweepConfig) -> Result<(), SweepError> {
    let report = check_tuple(params, cfg);
    let mut w = output(cfg)?;
    if json {
        serde_json::to_writer_pretty(&mut w, &report)?;
        writeln!(w)?;
    } else {
        write!(w, "{}", report.render_text())?;
    }
    w.flush()?;
    if report.accepted && (!report.toledo_agrees() || report.laws.as_deref() != Some("ok")) {
        return Err(SweepError::Property(format!("{params:?}: laws or Toledo values disagree")));
    }
    Ok(())
}

fn tables(cfg: &SweepConfig) -> Result<(), SweepError> {
    let report = verify_tables(cfg)?;
    let mut w = output(cfg)?;
    writeln!(
        w,
        "extremes: {} rows, real-hyperbolic: {} rows (filter gives {}), n = 101: {} rows",
        report.extremes_rows, report.real_hyperbolic_rows, report.real_hyperbolic_filtered, report.n101_rows
    )?;
    for (e, (count, taus)) in &report.n101_groups {
        let taus: Vec<String> = taus.iter().map(|t| num_rational::Ratio::new(*t, 3).to_string()).collect();
        writeln!(w, "n = 101, e = {e}: {count} tuples, tau {}", taus.join(", "))?;
    }
    for d in &report.diffs {
        writeln!(w, "DIFF {d}")?;
    }
    w.flush()?;
    if report.passed() {
        Ok(())
    } else {
        Err(SweepError::Mismatch(format!("{} table differences", report.diffs.len())))
    }
}

fn census(cfg: &SweepConfig, checkpoint: &std::path::Path) -> Result<(), SweepError> {
    let state = run_census(cfg, checkpoint, |n, s| {
        eprintln!("n = {n}: {} accepted so far", s.summary.total_accepted);
    })?;
    let v = verdict(&state.summary, cfg.n_min, cfg.n_max);
    let mut w = output(cfg)?;
    serde_json::to_writer_pretty(&mut w, &serde_json::json!({ "summary": state.summary, "verdict": v, "violations": state.violations }))?;
    writeln!(w)?;
    w.flush()?;
    if !state.violations.is_empty() {
        return Err(SweepError::Property(format!("{} violations", state.violations.len())));
    }
    match v {
        Some(v) if !v.counts_match => Err(SweepError::Mismatch(format!(
            "census counts {} / {} differ from {} / {}",
            v.total_accepted, v.integer_tau_count, v.expected_total, v.expected_integer_tau
        ))),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<(), SweepError> {
    match cli.command {
        Command::Sweep(common) => sweep(&common.resolve(SweepConfig::default())?),
        Command::Check { n, l, k, p, json, common } => {
            let defaults = SweepConfig { n_min: n.max(3), n_max: n.max(3), ..SweepConfig::default() };
            check(Params::new(n, l, k, p), json, &common.resolve(defaults)?)
        }
        Command::Tables(common) => tables(&common.resolve(SweepConfig::default())?),
        Command::Census { checkpoint, common } => {
            let defaults = SweepConfig { n_min: 3, n_max: chyp_sweep::census::FULL_CENSUS_N_MAX, ..SweepConfig::default() };
            census(&common.resolve(defaults)?, &checkpoint)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
