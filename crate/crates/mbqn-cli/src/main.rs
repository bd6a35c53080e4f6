//! Batch front end: compatibility queries, the capacity experiment, and
//! plotting. Exit codes: 0 for a compatible verdict (or plain success),
//! 1 for an incompatible verdict, 2 for any error.

mod plot;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use mbqn::report;
use mbqn::sim::{DEFAULT_SIZES, DEFAULT_TRIALS};
use mbqn::{
    gk_compatible, parse_task_list, partial_compatible, worst_case_compatible, Error,
    ExperimentConfig, Measure, PlacementRole, SupplementPlan, Task, TopologyFamily, TopologySpec,
    Verdict,
};

#[derive(Parser)]
#[command(name = "mbqn", version, about = "Graph-state network task compatibility and capacity experiments")]
struct Cli {
    /// Worker threads for the experiment (0 = one per core)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a set of tasks is compatible on a topology
    Check {
        /// Resource state: path:N, ring:N, triangle, or custom:FILE
        #[arg(long)]
        topology: TopologySpec,
        /// Comma-separated task list, e.g. 1->3,5->6
        #[arg(long)]
        tasks: String,
        /// worst_case, gk:K, or partial:DT (partial takes exactly two tasks)
        #[arg(long, default_value = "worst_case")]
        mode: CheckMode,
    },
    /// Run the sequential-arrival capacity experiment
    Simulate {
        /// Topology family swept over the sizes (path or ring)
        #[arg(long, default_value = "path")]
        topology: TopologyFamily,
        /// Network sizes to sweep
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_SIZES)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Admission measures, e.g. baseline,worst_case,gk:1
        #[arg(long, value_delimiter = ',', default_values_t = [Measure::Baseline, Measure::WorstCase, Measure::Gk(1)])]
        measure: Vec<Measure>,
        /// Feed every measure the same task sequence per trial
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        shared_streams: bool,
        /// Output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Render mean curves with standard-error bands from simulate's CSV
    Plot {
        /// Stats CSV produced by `simulate`
        stats: PathBuf,
        /// Output SVG file
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum CheckMode {
    WorstCase,
    Gk(usize),
    Partial(u64),
}

impl FromStr for CheckMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        if s == "worst_case" {
            return Ok(CheckMode::WorstCase);
        }
        if let Some(k) = s.strip_prefix("gk:").and_then(|k| k.parse().ok()) {
            return Ok(CheckMode::Gk(k));
        }
        if let Some(dt) = s.strip_prefix("partial:").and_then(|dt| dt.parse().ok()) {
            return Ok(CheckMode::Partial(dt));
        }
        Err(Error::InvalidConfig(format!(
            "unknown mode `{s}` (expected worst_case, gk:K, or partial:DT)"
        )))
    }
}

fn main() -> ExitCode {
    // Die quietly when the consumer of stdout goes away (mbqn ... | head),
    // like other line-oriented tools, instead of panicking on EPIPE.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }

    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .context("installing the worker pool")?;
    }
    match cli.command {
        Command::Check { topology, tasks, mode } => cmd_check(&topology, &tasks, mode),
        Command::Simulate { topology, sizes, trials, seed, measure, shared_streams, out, format } => {
            let cfg = ExperimentConfig {
                family: topology,
                sizes,
                trials,
                seed,
                measures: measure,
                shared_streams,
            };
            cmd_simulate(&cfg, out.as_deref(), format)
        }
        Command::Plot { stats, out } => cmd_plot(&stats, &out),
    }
}

fn cmd_check(topology: &TopologySpec, tasks: &str, mode: CheckMode) -> anyhow::Result<ExitCode> {
    let g = topology.build()?;
    let tasks = parse_task_list(tasks)?;
    let compatible = match mode {
        CheckMode::WorstCase => {
            let verdict = worst_case_compatible(&g, &tasks, None)?;
            print_verdict(&tasks, &verdict);
            verdict.is_compatible()
        }
        CheckMode::Gk(k) => {
            let (verdict, plan) = gk_compatible(&g, &tasks, k, None)?;
            print_verdict(&tasks, &verdict);
            if let Some(plan) = &plan {
                print_plan(&tasks, plan);
            }
            verdict.is_compatible()
        }
        CheckMode::Partial(dt) => {
            let [a, b] = tasks[..] else {
                bail!("partial:DT works on exactly two tasks, got {}", tasks.len());
            };
            let ok = partial_compatible(&g, a, b, dt)?;
            let answer = if ok { "yes" } else { "no" };
            println!("partial-compatible within dt={dt}: {answer}");
            ok
        }
    };
    Ok(if compatible { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn print_verdict(tasks: &[Task], verdict: &Verdict) {
    match verdict {
        Verdict::Compatible { witness } => {
            println!("compatible");
            for (task, path) in tasks.iter().zip(&witness.paths) {
                let route =
                    path.iter().map(ToString::to_string).collect::<Vec<_>>().join("-");
                println!("  {task} via {route}");
            }
        }
        Verdict::Incompatible { violation } => println!("incompatible: {violation}"),
    }
}

fn print_plan(tasks: &[Task], plan: &SupplementPlan) {
    if plan.placements.is_empty() {
        println!("  no supplemental EPR pairs needed");
        return;
    }
    println!("  supplement plan, cost {}:", plan.cost());
    for placement in &plan.placements {
        let (u, v) = placement.edge;
        match placement.role {
            PlacementRole::ChainLink { task_index } => {
                println!("    chain link ({u},{v}) serving {}", tasks[task_index]);
            }
            PlacementRole::Fission => println!("    fission of ({u},{v})"),
        }
    }
}

fn cmd_simulate(cfg: &ExperimentConfig, out: Option<&std::path::Path>, format: Format) -> anyhow::Result<ExitCode> {
    let records = mbqn::run_experiment(cfg)?;
    let rendered = match format {
        Format::Csv => report::to_csv(&records),
        Format::Json => report::to_json(&records)?,
    };
    match out {
        Some(path) => std::fs::write(path, rendered)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{rendered}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_plot(stats: &std::path::Path, out: &std::path::Path) -> anyhow::Result<ExitCode> {
    let text = std::fs::read_to_string(stats)
        .with_context(|| format!("reading {}", stats.display()))?;
    let records = report::from_csv(&text)?;
    if records.is_empty() {
        bail!("{} holds no records to plot", stats.display());
    }
    plot::render(&records, out)?;
    Ok(ExitCode::SUCCESS)
}
