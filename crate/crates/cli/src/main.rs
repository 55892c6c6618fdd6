//! `kdvh`: batch driver for KdVH/KdV experiments.
//!
//! Every run reads an optional TOML file over the experiment's defaults,
//! applies command line overrides and writes `<name>.csv` plus
//! `<name>.meta.json` into the output directory.
//!
//! Exit status: 0 on success, 1 on configuration or usage errors, 2 when the
//! numerics fail.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kdvh::harness::{
    aa_study, ap_sweep, error_growth, operators_check, operators_table, phase_portrait, solitary_waves,
    solve, write_artifacts, Experiment, Provenance, RunConfig, Table,
};
use kdvh::imex::{find_method, registry_json};
use kdvh::relaxation::RelaxationLog;
use kdvh::Error;

#[derive(Parser)]
#[command(name = "kdvh", version, about = "Structure-preserving solvers for the hyperbolized KdV system")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Operator audits
    Operators {
        #[command(subcommand)]
        action: OperatorsAction,
    },
    /// Integrate one KdV or KdVH run and write the final state
    Solve(Overrides),
    /// Asymptotic-preserving τ-sweep against a KdV reference
    ApTable(Overrides),
    /// Δt-convergence against solitary-wave references at small τ
    AaStudy(Overrides),
    /// Long-time error growth with and without relaxation
    ErrorGrowth(Overrides),
    /// Petviashvili solitary-wave profiles for several τ
    SolitaryWave(Overrides),
    /// Traveling-wave phase plane: vector field, equilibria and orbits
    PhasePortrait(Overrides),
    /// Print the registered ImEx methods and their properties as JSON
    Methods,
}

#[derive(Subcommand)]
enum OperatorsAction {
    /// Check the SBP identities of every operator on a grid
    Check(Overrides),
}

#[derive(Clone, Copy, ValueEnum)]
enum Toggle {
    On,
    Off,
}

#[derive(Args, Default)]
struct Overrides {
    /// TOML file overriding the experiment defaults
    #[arg(long, short)]
    config: Option<PathBuf>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    /// Number of grid points
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    method: Option<String>,
    /// Accuracy order of the upwind operators
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    t_final: Option<f64>,
    #[arg(long, value_enum)]
    relaxation: Option<Toggle>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Base name of the output files
    #[arg(long)]
    name: Option<String>,
}

impl Overrides {
    fn resolve(&self, experiment: Experiment) -> Result<RunConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                RunConfig::from_toml(experiment, &text)?
            }
            None => RunConfig::preset(experiment),
        };
        if let Some(tau) = self.tau {
            cfg.tau = tau;
            // a single τ on the command line narrows a sweep to it
            if matches!(experiment, Experiment::AaStudy | Experiment::ErrorGrowth) {
                cfg.sweep.taus = vec![tau];
            }
        }
        if let Some(dt) = self.dt {
            cfg.dt = dt;
            if experiment == Experiment::AaStudy {
                cfg.sweep.dts = vec![dt];
            }
        }
        if let Some(n) = self.n {
            cfg.grid.n = n;
        }
        if let Some(m) = &self.method {
            cfg.method = find_method(m)?.name;
            if matches!(experiment, Experiment::AaStudy | Experiment::ErrorGrowth) {
                cfg.sweep.methods = vec![cfg.method.clone()];
            }
        }
        if let Some(q) = self.order {
            cfg.operator.order = q;
        }
        if let Some(t) = self.t_final {
            cfg.t_final = t;
        }
        if let Some(r) = self.relaxation {
            cfg.relaxation = matches!(r, Toggle::On);
        }
        if let Some(out) = &self.out {
            cfg.out = out.clone();
        }
        if let Some(name) = &self.name {
            cfg.name = name.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn emit<S: serde::Serialize>(
    cfg: &RunConfig,
    experiment: Experiment,
    suffix: &str,
    table: &Table,
    summary: &S,
) -> Result<(), Error> {
    let name = format!("{}{suffix}", cfg.name);
    let (csv, meta) = write_artifacts(&cfg.out, &name, table, &Provenance::new(experiment, cfg), summary)?;
    println!("wrote {} and {}", csv.display(), meta.display());
    Ok(())
}

fn sig3(x: Option<f64>) -> String {
    x.map_or_else(|| "-".into(), |x| format!("{x:.2e}"))
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Methods => {
            println!("{}", registry_json()?);
        }
        Command::Operators {
            action: OperatorsAction::Check(o),
        } => {
            let e = Experiment::OperatorsCheck;
            let cfg = o.resolve(e)?;
            let reports = operators_check(&cfg)?;
            emit(&cfg, e, "", &operators_table(&reports), &reports)?;
            for r in &reports {
                println!(
                    "{:<10} q={:<3} n={:<5} {}",
                    r.kind.to_string(),
                    r.accuracy_order,
                    r.n,
                    if r.passed { "ok" } else { "FAILED" }
                );
            }
            if let Some(bad) = reports.iter().find(|r| !r.passed) {
                return Err(Error::SbpIdentity(format!(
                    "{} operator of order {} on n = {}",
                    bad.kind, bad.accuracy_order, bad.n
                )));
            }
        }
        Command::Solve(o) => {
            let e = Experiment::Solve;
            let cfg = o.resolve(e)?;
            let result = if cfg.relaxation {
                fs::create_dir_all(&cfg.out)?;
                let path = cfg.out.join(format!("{}_relaxation.csv", cfg.name));
                let file = std::io::BufWriter::new(fs::File::create(&path)?);
                let mut log = RelaxationLog::new(file)?;
                let r = solve(&cfg, Some(&mut log))?;
                println!("wrote {}", path.display());
                r
            } else {
                solve::<std::io::Sink>(&cfg, None)?
            };
            emit(&cfg, e, "", &result.table, &result.summary)?;
            println!(
                "t = {}, steps = {}, energy drift = {:.3e}",
                result.summary.t, result.summary.stats.steps, result.summary.energy_drift
            );
        }
        Command::ApTable(o) => {
            let e = Experiment::ApTable;
            let cfg = o.resolve(e)?;
            let sweep = ap_sweep(&cfg)?;
            emit(&cfg, e, "", &sweep.table(), &sweep)?;
            println!("{}", sweep.method);
            println!("{:>8} {:>9} {:>6} {:>9} {:>6} {:>9} {:>6}", "tau", "err_u", "eoc", "err_v", "eoc", "err_w", "eoc");
            for r in &sweep.rows {
                println!(
                    "{:>8.0e} {:>9} {:>6} {:>9} {:>6} {:>9} {:>6}",
                    r.tau,
                    sig3(Some(r.err_u)),
                    r.eoc_u.map_or("-".into(), |x| format!("{x:.2}")),
                    sig3(Some(r.err_v)),
                    r.eoc_v.map_or("-".into(), |x| format!("{x:.2}")),
                    sig3(Some(r.err_w)),
                    r.eoc_w.map_or("-".into(), |x| format!("{x:.2}")),
                );
            }
        }
        Command::AaStudy(o) => {
            let e = Experiment::AaStudy;
            let cfg = o.resolve(e)?;
            let study = aa_study(&cfg)?;
            emit(&cfg, e, "", &study.table(), &study)?;
            for c in &study.curves {
                println!(
                    "{:<18} tau={:<6.0e} slopes u={:>5} v={:>5} w={:>5}",
                    c.method,
                    c.tau,
                    c.slopes[0].map_or("-".into(), |x| format!("{x:.2}")),
                    c.slopes[1].map_or("-".into(), |x| format!("{x:.2}")),
                    c.slopes[2].map_or("-".into(), |x| format!("{x:.2}")),
                );
            }
        }
        Command::ErrorGrowth(o) => {
            let e = Experiment::ErrorGrowth;
            let cfg = o.resolve(e)?;
            let growth = error_growth(&cfg)?;
            emit(&cfg, e, "", &growth.table(), &growth)?;
            for s in &growth.series {
                println!(
                    "{:<12} {:<10} relaxation={:<5} slope={:>5} max drift={:.2e}",
                    s.method,
                    s.tau.map_or("kdv".into(), |t| format!("tau={t:.0e}")),
                    s.relaxation,
                    s.slope.map_or("-".into(), |x| format!("{x:.2}")),
                    s.max_drift,
                );
            }
        }
        Command::SolitaryWave(o) => {
            let e = Experiment::SolitaryWave;
            let cfg = o.resolve(e)?;
            let waves = solitary_waves(&cfg)?;
            emit(&cfg, e, "", &waves.table(), &waves)?;
            for p in std::iter::once(&waves.limit).chain(&waves.profiles) {
                println!(
                    "tau={:<5} peak={:.6} max|u - soliton|={:.3e} residual={:.1e} iterations={}",
                    p.tau, p.peak, p.distance_to_soliton, p.residual, p.iterations
                );
            }
        }
        Command::PhasePortrait(o) => {
            let e = Experiment::PhasePortrait;
            let cfg = o.resolve(e)?;
            let pp = phase_portrait(&cfg)?;
            emit(&cfg, e, "", &pp.field_table(), &pp)?;
            emit(&cfg, e, "_orbits", &pp.orbit_table(), &pp.orbits)?;
            println!(
                "origin saddle: {}, crest center: {}",
                pp.equilibria.origin.saddle, pp.equilibria.crest.center
            );
            for o in &pp.orbits {
                println!("{:<15} {:?} H drift {:.1e}", o.label, o.orbit.classification, o.orbit.h_drift);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}
