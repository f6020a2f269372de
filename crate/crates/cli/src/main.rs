use std::path::{Path, PathBuf};
use std::process::ExitCode as ProcessExit;

use clap::{Parser, Subcommand, ValueEnum};

use baro_cli::config::{parse_config, ConstantsConfig, ExperimentConfig, ProfileName, SweepConfig};
use baro_cli::runner::{default_threads, run_experiment};
use baro_cli::verify::{
    suite_inequalities, suite_lemma_lbpick, suite_lemma_sat, suite_lp_equivalence,
};
use baro_cli::{report, CliError};

/// Simulation lab for online knapsack selection under random order with
/// bursty adversarial windows.
#[derive(Parser)]
#[command(name = "baro", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ProfileArg {
    Paper,
    Practical,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a seeded batch experiment from a JSON config; writes per-trial
    /// trace CSVs and a summary JSON.
    Run {
        config: PathBuf,
        /// Output directory (default `out`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (default: available parallelism).
        #[arg(long)]
        threads: Option<usize>,
        /// Override the constants profile from the config.
        #[arg(long)]
        profile: Option<ProfileArg>,
    },
    /// Run a verification suite: lp-equivalence, lemma-sat, lemma-lbpick,
    /// inequalities, or all.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Randomized case count where the suite takes one.
        #[arg(long)]
        cases: Option<usize>,
    },
    /// Run a cross-product sweep from a JSON config with grids over k,
    /// gamma, and pattern; writes a matrix CSV.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        profile: Option<ProfileArg>,
    },
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn apply_profile(cfg: &mut ExperimentConfig, profile: Option<ProfileArg>) {
    if let Some(p) = profile {
        cfg.constants = ConstantsConfig::Profile {
            profile: match p {
                ProfileArg::Paper => ProfileName::Paper,
                ProfileArg::Practical => ProfileName::Practical,
            },
        };
    }
}

fn cmd_run(
    config: &Path,
    out: Option<PathBuf>,
    threads: Option<usize>,
    profile: Option<ProfileArg>,
) -> Result<(), CliError> {
    let mut cfg: ExperimentConfig = parse_config(&read_file(config)?)?;
    apply_profile(&mut cfg, profile);
    let resolved = cfg.resolve()?;
    let output = run_experiment(&resolved, threads.unwrap_or_else(default_threads))?;
    let dir = out.unwrap_or_else(|| PathBuf::from("out"));
    report::write_run_reports(&dir, &cfg, &output)?;
    match output.ratio.ratio_mean {
        Some(r) => println!(
            "{} trials, ro value {:.6}, opt {:.6}, ratio {:.6}",
            output.ratio.trials, output.ratio.ro_value_mean, output.ratio.opt_ro, r
        ),
        None => println!(
            "{} trials, ro value {:.6}, benchmark zero (ratio not applicable)",
            output.ratio.trials, output.ratio.ro_value_mean
        ),
    }
    println!("reports written to {}", dir.display());
    Ok(())
}

fn cmd_verify(suite: &str, seed: u64, cases: Option<usize>) -> Result<(), CliError> {
    let outcomes = match suite {
        "lp-equivalence" => vec![suite_lp_equivalence(cases.unwrap_or(1000), seed)],
        "lemma-sat" => vec![suite_lemma_sat(cases.unwrap_or(10_000), seed)],
        "lemma-lbpick" => vec![suite_lemma_lbpick(cases.unwrap_or(10_000), seed)],
        "inequalities" => vec![suite_inequalities(seed, 100_000, cases.unwrap_or(100_000))],
        "all" => vec![
            suite_lp_equivalence(cases.unwrap_or(1000), seed),
            suite_lemma_sat(cases.unwrap_or(10_000), seed),
            suite_lemma_lbpick(cases.unwrap_or(10_000), seed),
            suite_inequalities(seed, 100_000, 100_000),
        ],
        other => {
            return Err(CliError::config(format!(
                "unknown suite '{other}' (expected lp-equivalence, lemma-sat, lemma-lbpick, inequalities, all)"
            )))
        }
    };
    let mut failed = 0u64;
    for o in &outcomes {
        println!("{}", o.summary_line());
        failed += o.fail;
    }
    if failed > 0 {
        return Err(CliError::invariant(format!("{failed} case(s) failed")));
    }
    Ok(())
}

fn cmd_sweep(
    config: &Path,
    out: Option<PathBuf>,
    threads: Option<usize>,
    profile: Option<ProfileArg>,
) -> Result<(), CliError> {
    let sweep: SweepConfig = parse_config(&read_file(config)?)?;
    let threads = threads.unwrap_or_else(default_threads);
    let mut rows = Vec::new();
    for mut cfg in sweep.grid()? {
        apply_profile(&mut cfg, profile);
        let resolved = cfg.resolve()?;
        let output = run_experiment(&resolved, threads)?;
        let row = report::sweep_row(&cfg, &output.ratio);
        println!("{row}");
        rows.push(row);
    }
    let dir = out.unwrap_or_else(|| PathBuf::from("out"));
    report::write_sweep_csv(&dir, &rows)?;
    println!(
        "sweep matrix written to {}",
        dir.join("sweep.csv").display()
    );
    Ok(())
}

fn main() -> ProcessExit {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Run {
            config,
            out,
            threads,
            profile,
        } => cmd_run(&config, out, threads, profile),
        Cmd::Verify { suite, seed, cases } => cmd_verify(&suite, seed, cases),
        Cmd::Sweep {
            config,
            out,
            threads,
            profile,
        } => cmd_sweep(&config, out, threads, profile),
    };
    match result {
        Ok(()) => ProcessExit::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ProcessExit::from(e.exit as u8)
        }
    }
}
