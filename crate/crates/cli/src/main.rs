use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use skycov_cli::output::write_outputs;
use skycov_cli::{estimate_cost, preset, presets, run_grid, Scenario};

#[derive(Parser)]
#[command(name = "skycov", version, about = "Coverage and handover experiments for UAV users of a cellular network")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario file.
    Run {
        config: PathBuf,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Check a scenario file, or a preset, and estimate its cost.
    Validate {
        #[arg(required_unless_present = "preset")]
        config: Option<PathBuf>,
        #[arg(long, conflicts_with = "config")]
        preset: Option<String>,
    },
    /// Run every scenario of a preset.
    Figure {
        id: String,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// List the bundled presets.
    ListPresets,
}

#[derive(Args, Clone)]
struct RunOpts {
    /// Override the Monte Carlo seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the Monte Carlo sample count.
    #[arg(long)]
    samples: Option<usize>,
    /// Output directory.
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    workers: Option<usize>,
}

/// A config problem; maps to exit code 1.
#[derive(Debug)]
struct ConfigFailure(String);

impl std::fmt::Display for ConfigFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigFailure {}

fn load(path: &Path) -> anyhow::Result<Scenario> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Scenario::parse(&text).map_err(|d| ConfigFailure(format!("{}:\n{d}", path.display())).into())
}

fn apply(mut s: Scenario, opts: &RunOpts) -> anyhow::Result<Scenario> {
    if let Some(seed) = opts.seed {
        s.mc.seed = seed;
    }
    if let Some(n) = opts.samples {
        s.mc.samples = n;
    }
    let problems = s.validate();
    if !problems.is_empty() {
        return Err(ConfigFailure(problems.join("\n")).into());
    }
    Ok(s)
}

fn init_pool(workers: Option<usize>) -> anyhow::Result<usize> {
    if let Some(n) = workers {
        if n == 0 {
            return Err(ConfigFailure("--workers must be at least 1".into()).into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(rayon::current_num_threads())
}

/// Runs and writes one scenario; returns its number of failed rows.
fn execute(s: &Scenario, out: &Path, workers: usize) -> anyhow::Result<usize> {
    let t0 = Instant::now();
    let rows = run_grid(s);
    let total_ms = t0.elapsed().as_secs_f64() * 1e3;
    let (csv, _) = write_outputs(out, s, &rows, total_ms, workers)?;
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    println!("{}: {} rows, {} failed, {:.1} s -> {}", s.name, rows.len(), failed, total_ms / 1e3, csv.display());
    for r in rows.iter().filter(|r| r.error.is_some()) {
        eprintln!("  {} = {}: {}", s.sweep.param.name(), r.x, r.error.as_deref().unwrap_or(""));
    }
    Ok(failed)
}

fn report(s: &Scenario) {
    let c = estimate_cost(s);
    println!(
        "{s}: ok; estimated {:.0} s single-core ({:.0} s analytic, {:.0} s simulation)",
        c.total(),
        c.analytic_s,
        c.mc_s
    );
}

fn real_main(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Run { config, opts } => {
            let s = apply(load(&config)?, &opts)?;
            let workers = init_pool(opts.workers)?;
            let failed = execute(&s, &opts.out, workers)?;
            Ok(if failed > 0 { ExitCode::from(2) } else { ExitCode::SUCCESS })
        }
        Command::Validate { config, preset: id } => {
            let scenarios = match (config, id) {
                (Some(path), _) => vec![load(&path)?],
                (None, Some(id)) => {
                    let p = preset(&id).ok_or_else(|| ConfigFailure(format!("unknown preset `{id}`")))?;
                    p.scenarios().map_err(ConfigFailure)?
                }
                (None, None) => bail!("give a scenario file or --preset"),
            };
            for s in &scenarios {
                report(s);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Figure { id, opts } => {
            let p = preset(&id).ok_or_else(|| ConfigFailure(format!("unknown preset `{id}`; see list-presets")))?;
            let scenarios = p
                .scenarios()
                .map_err(ConfigFailure)?
                .into_iter()
                .map(|s| apply(s, &opts))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let workers = init_pool(opts.workers)?;
            let mut failed = 0;
            for s in &scenarios {
                failed += execute(s, &opts.out, workers)?;
            }
            Ok(if failed > 0 { ExitCode::from(2) } else { ExitCode::SUCCESS })
        }
        Command::ListPresets => {
            for p in presets() {
                println!("{:<8} {:>3} runs, budget {:>5.0} s  {}", p.id, p.runs.len(), p.budget_s, p.description);
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match real_main(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
