use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ridematch::mechanisms::oracle::{run_oracle_suite, Fault, MAX_EXHAUSTIVE};
use ridematch::reporting::{
    compare_table, read_config, round_rows, summarize, sweep_rows, write_comparison_csv, write_config, write_csv,
    write_rounds_csv, NO_AXIS,
};
use ridematch::{run_simulation, run_sweep, Config, Mechanism, SweepAxis};

#[derive(Parser, Debug)]
#[command(
    name = "ridematch",
    version,
    about = "Simulate a two-sided rideshare market under several matching mechanisms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one simulation and write summary.csv and rounds.csv.
    Run {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = Mechanism::from_str)]
        mechanism: Option<Mechanism>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run all four mechanisms on the same populations for each seed.
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "1..9", value_parser = parse_seeds)]
        seeds: Seeds,
    },
    /// Vary one parameter across values, seeds and mechanisms.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = SweepAxis::from_str)]
        axis: SweepAxis,
        /// Comma-separated axis values.
        #[arg(long, required = true, value_delimiter = ',', value_parser = finite)]
        values: Vec<f64>,
        #[arg(long, default_value = "1..9", value_parser = parse_seeds)]
        seeds: Seeds,
        /// Comma-separated mechanisms.
        #[arg(long, default_value = "da", value_delimiter = ',', value_parser = Mechanism::from_str)]
        mechanism: Vec<Mechanism>,
    },
    /// Cross-check the matching and assignment solvers against exhaustive search.
    OracleCheck {
        #[arg(long, default_value_t = 200, value_parser = positive_count)]
        instances: usize,
        /// Largest side of a random instance.
        #[arg(long, default_value_t = 6, value_parser = max_side)]
        max_side: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, hide = true, value_enum, default_value_t = InjectedFault::None)]
        inject_fault: InjectedFault,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum InjectedFault {
    None,
    PessimalDa,
    IdentityAssignment,
}

impl From<InjectedFault> for Fault {
    fn from(f: InjectedFault) -> Self {
        match f {
            InjectedFault::None => Fault::None,
            InjectedFault::PessimalDa => Fault::PessimalDa,
            InjectedFault::IdentityAssignment => Fault::IdentityAssignment,
        }
    }
}

/// Settings shared by the simulation subcommands. Anything left unset falls
/// back to the config file, then to the built-in defaults.
#[derive(Args, Debug)]
struct Common {
    /// JSON file with SimConfig fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, env = "RIDEMATCH_OUT", default_value = "out")]
    out: PathBuf,
    #[arg(long, value_parser = positive_count)]
    drivers: Option<usize>,
    #[arg(long, value_parser = positive_count)]
    passengers: Option<usize>,
    #[arg(long, value_parser = positive_count)]
    rounds: Option<usize>,
    #[arg(long, value_parser = non_negative)]
    w_time: Option<f64>,
    #[arg(long, value_parser = non_negative)]
    w_income: Option<f64>,
    #[arg(long, value_parser = non_negative)]
    w_prox: Option<f64>,
    #[arg(long, value_parser = non_negative)]
    w_center: Option<f64>,
    #[arg(long, value_parser = non_negative)]
    wait_threshold: Option<f64>,
    #[arg(long, value_parser = finite)]
    gamma_mean: Option<f64>,
    #[arg(long, value_parser = non_negative)]
    gamma_sd: Option<f64>,
    #[arg(long, value_parser = positive)]
    grid_sd: Option<f64>,
}

impl Common {
    fn resolve(&self) -> Result<Config> {
        let mut cfg = match &self.config {
            Some(path) => read_config(path)?,
            None => Config::default(),
        };
        set(&mut cfg.n_drivers, self.drivers);
        set(&mut cfg.n_passengers, self.passengers);
        set(&mut cfg.n_rounds, self.rounds);
        set(&mut cfg.weights.w_t, self.w_time);
        set(&mut cfg.weights.w_i, self.w_income);
        set(&mut cfg.weights.w_prox, self.w_prox);
        set(&mut cfg.weights.w_center, self.w_center);
        set(&mut cfg.wait_threshold, self.wait_threshold);
        set(&mut cfg.agent_cfg.gamma_mean, self.gamma_mean);
        set(&mut cfg.agent_cfg.gamma_sd, self.gamma_sd);
        set(&mut cfg.grid.sample_sd, self.grid_sd);
        cfg.validate().context("invalid configuration")?;
        Ok(cfg)
    }

    fn out_dir(&self) -> Result<&Path> {
        fs::create_dir_all(&self.out).with_context(|| format!("creating --out directory {}", self.out.display()))?;
        Ok(&self.out)
    }
}

fn set<T>(field: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *field = v;
    }
}

#[derive(Clone, Debug)]
struct Seeds(Vec<u64>);

/// Accepts `a..b` (inclusive) or a comma-separated list.
fn parse_seeds(s: &str) -> Result<Seeds, String> {
    let seeds: Vec<u64> = if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| format!("bad range start `{a}`"))?;
        let b: u64 = b.trim().parse().map_err(|_| format!("bad range end `{b}`"))?;
        if a > b {
            return Err(format!("empty range {a}..{b}"));
        }
        (a..=b).collect()
    } else {
        s.split(',')
            .map(|t| t.trim().parse().map_err(|_| format!("bad seed `{t}`")))
            .collect::<Result<_, _>>()?
    };
    Ok(Seeds(seeds))
}

fn positive_count(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn max_side(s: &str) -> Result<usize, String> {
    let n = positive_count(s)?;
    if n > MAX_EXHAUSTIVE {
        return Err(format!("exhaustive checks are capped at {MAX_EXHAUSTIVE}"));
    }
    Ok(n)
}

fn finite(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if !v.is_finite() {
        return Err("must be finite".into());
    }
    Ok(v)
}

fn non_negative(s: &str) -> Result<f64, String> {
    let v = finite(s)?;
    if v < 0.0 {
        return Err("must be non-negative".into());
    }
    Ok(v)
}

fn positive(s: &str) -> Result<f64, String> {
    let v = finite(s)?;
    if v <= 0.0 {
        return Err("must be positive".into());
    }
    Ok(v)
}

fn cmd_run(common: &Common, mechanism: Option<Mechanism>, seed: Option<u64>) -> Result<()> {
    let mut cfg = common.resolve()?;
    set(&mut cfg.mechanism, mechanism);
    set(&mut cfg.seed, seed);
    let out = common.out_dir()?;

    let summary = run_simulation(&cfg)?;
    let summary_path = out.join("summary.csv");
    write_csv(&[summarize(&summary, NO_AXIS, 0.0)], &summary_path)?;
    write_rounds_csv(&round_rows(&summary), &out.join("rounds.csv"))?;
    write_config(&cfg, &out.join("config.json"))?;
    print!("{}", fs::read_to_string(&summary_path)?);
    Ok(())
}

fn cmd_compare(common: &Common, seeds: &Seeds) -> Result<()> {
    let cfg = common.resolve()?;
    let out = common.out_dir()?;

    // A sweep over a single no-op value is exactly the paired comparison.
    let cells = run_sweep(&cfg, SweepAxis::WI, &[cfg.weights.w_i], &seeds.0, &Mechanism::ALL)?;
    let rows: Vec<_> = cells.iter().map(|c| summarize(&c.summary, NO_AXIS, 0.0)).collect();
    write_csv(&rows, &out.join("summary.csv"))?;
    let table = compare_table(&rows)?;
    let path = out.join("comparison.csv");
    write_comparison_csv(&table, &path)?;
    write_config(&cfg, &out.join("config.json"))?;
    print!("{}", fs::read_to_string(&path)?);
    Ok(())
}

fn cmd_sweep(common: &Common, axis: SweepAxis, values: &[f64], seeds: &Seeds, mechanisms: &[Mechanism]) -> Result<()> {
    if values.is_empty() {
        bail!("--values needs at least one value");
    }
    let cfg = common.resolve()?;
    let out = common.out_dir()?;
    let cells = run_sweep(&cfg, axis, values, &seeds.0, mechanisms).context("--values")?;
    let path = out.join("sweep.csv");
    write_csv(&sweep_rows(&cells), &path)?;
    write_config(&cfg, &out.join("config.json"))?;
    println!("wrote {} rows to {}", cells.len(), path.display());
    Ok(())
}

fn cmd_oracle_check(instances: usize, max_side: usize, seed: u64, fault: Fault) -> Result<()> {
    let report = run_oracle_suite(instances, max_side, seed, fault)?;
    println!(
        "stable matching: {} checked, {} failed",
        report.stability_checked,
        report.stability_failures.len()
    );
    println!(
        "assignment: {} checked, {} failed",
        report.assignment_checked,
        report.assignment_failures.len()
    );
    if !report.passed() {
        let list = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        bail!(
            "oracle mismatch; stable matching seeds [{}], assignment seeds [{}]",
            list(&report.stability_failures),
            list(&report.assignment_failures)
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let result = match Cli::parse().command {
        Command::Run {
            common,
            mechanism,
            seed,
        } => cmd_run(&common, mechanism, seed),
        Command::Compare { common, seeds } => cmd_compare(&common, &seeds),
        Command::Sweep {
            common,
            axis,
            values,
            seeds,
            mechanism,
        } => cmd_sweep(&common, axis, &values, &seeds, &mechanism),
        Command::OracleCheck {
            instances,
            max_side,
            seed,
            inject_fault,
        } => cmd_oracle_check(instances, max_side, seed, inject_fault.into()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
