use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::Args;
use signgate::simulation::{report_csv, run_scenario, ScenarioFile};

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Scenario file (TOML).
    #[arg(long)]
    scenario: PathBuf,
    /// Override the replicate count of the file.
    #[arg(long)]
    replicates: Option<usize>,
    /// Override the master seed of the file.
    #[arg(long, env = "SIGNGATE_SEED")]
    seed: Option<u64>,
    /// Worker threads for replicates.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Report CSV path; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also draw the report as an SVG point plot.
    #[arg(long)]
    plot: Option<PathBuf>,
}

pub fn run(args: SimulateArgs) -> Result<()> {
    let path = &args.scenario;
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut file = ScenarioFile::from_toml_str(&text)
        .with_context(|| format!("invalid scenario file {}", path.display()))?;
    if let Some(n) = args.replicates {
        anyhow::ensure!(n > 0, "--replicates must be at least 1");
        file.replicates = n;
    }
    if let Some(seed) = args.seed {
        file.seed = seed;
    }
    let start = Instant::now();
    let mut reports = Vec::new();
    for sc in file.scenarios()? {
        let rep = run_scenario(&sc, args.workers)?;
        eprintln!(
            "{}: {} replicates of m = {} ({:.1?} so far)",
            rep.scenario_id,
            sc.replicates,
            sc.m,
            start.elapsed()
        );
        reports.push(rep);
    }
    crate::emit(args.output.as_deref(), &report_csv(&reports))?;
    if let Some(p) = &args.plot {
        let svg = crate::plot::report_svg(&file.name, file.alpha_s, &reports);
        fs::write(p, svg).with_context(|| format!("cannot write {}", p.display()))?;
    }
    Ok(())
}
