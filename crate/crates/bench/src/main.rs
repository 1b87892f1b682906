use std::path::PathBuf;
use std::process::ExitCode;
use std::time::SystemTime;

use clap::{Parser, Subcommand};

use qapbench::commands::{cmd_classical, cmd_gen, cmd_grover, cmd_report, cmd_shells, cmd_sweep};
use qapbench::{resolve_workers, with_workers, write_metadata, BenchError, ExperimentConfig, Result};

#[derive(Parser, Debug)]
#[command(name = "qapbench", version, about = "NV-QWOA versus classical heuristics on random QAP instances")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Flat JSON experiment config; flags below override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Comma-separated problem sizes.
    #[arg(long, global = true, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (falls back to QAPBENCH_WORKERS).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Largest depth tried by the sweep.
    #[arg(long, global = true)]
    p_max: Option<usize>,
    /// Mean OSP the sweep must reach.
    #[arg(long, global = true)]
    threshold: Option<f64>,
    /// Measurement shots per depth.
    #[arg(long, global = true)]
    shots: Option<usize>,
    /// Instances per size.
    #[arg(long, global = true)]
    instances: Option<usize>,
    #[arg(long, global = true)]
    gls_restarts: Option<usize>,
    #[arg(long, global = true)]
    mmas_runs: Option<usize>,
    #[arg(long, global = true)]
    mmas_ants: Option<usize>,
    #[arg(long, global = true)]
    mmas_rho: Option<f64>,
    #[arg(long, global = true)]
    mmas_max_iters: Option<u64>,
    /// Circuit evaluations allowed per (instance, depth) tuning.
    #[arg(long, global = true)]
    nm_max_evals: Option<usize>,
    #[arg(long, global = true)]
    no_gls: bool,
    #[arg(long, global = true)]
    no_mmas: bool,
    /// Tune every depth from the default start instead of the previous depth.
    #[arg(long, global = true)]
    cold_start: bool,
    /// Allow n = 10.
    #[arg(long, global = true)]
    long_run: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate instances and cache their optima.
    Gen,
    /// Depth sweep to the mean-OSP threshold.
    Sweep,
    /// MMAS and greedy local search runs.
    Classical,
    /// Grover iteration counts.
    Grover,
    /// Shell probabilities around the optimum.
    Shells {
        /// Also write the tuned final states as binary snapshots.
        #[arg(long)]
        snapshots: bool,
    },
    /// Aggregate all results into figure-ready tables.
    Report,
}

impl Cli {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        macro_rules! set {
            ($($flag:ident => $field:ident),* $(,)?) => {
                $(if let Some(v) = self.$flag.clone() { cfg.$field = v.into(); })*
            };
        }
        set!(
            sizes => sizes,
            seed => master_seed,
            out => out_dir,
            p_max => p_max,
            threshold => osp_threshold,
            shots => shots,
            instances => instances_per_size,
            gls_restarts => gls_restarts,
            mmas_runs => mmas_runs,
            mmas_rho => mmas_rho,
            mmas_max_iters => mmas_max_iters,
            nm_max_evals => nm_max_evals,
        );
        if self.workers.is_some() {
            cfg.workers = self.workers;
        }
        if self.mmas_ants.is_some() {
            cfg.mmas_ants = self.mmas_ants;
        }
        cfg.run_gls &= !self.no_gls;
        cfg.run_mmas &= !self.no_mmas;
        cfg.warm_start &= !self.cold_start;
        cfg.long_run |= self.long_run;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(cli: &Cli) -> Result<()> {
    let cfg = cli.config()?;
    let workers = resolve_workers(&cfg)?;
    let started = SystemTime::now();
    let name = match cli.command {
        Command::Gen => "gen",
        Command::Sweep => "sweep",
        Command::Classical => "classical",
        Command::Grover => "grover",
        Command::Shells { .. } => "shells",
        Command::Report => "report",
    };
    with_workers(workers, || -> Result<()> {
        match cli.command {
            Command::Gen => {
                let ids = cmd_gen(&cfg)?;
                println!("wrote {} instances under {}", ids.len(), cfg.out_dir.display());
            }
            Command::Sweep => {
                let report = cmd_sweep(&cfg)?;
                for s in &report.summary {
                    match (s.p_star, s.mean_osp_at_p_star) {
                        (Some(p), Some(osp)) => println!(
                            "n = {}: p* = {p} (mean OSP {osp:.4}), NV-QWOA evaluations {}",
                            s.n,
                            s.shots * p
                        ),
                        _ => eprintln!(
                            "n = {}: UNCONVERGED, mean OSP stayed below {} up to p = {}",
                            s.n, cfg.osp_threshold, cfg.p_max
                        ),
                    }
                }
            }
            Command::Classical => {
                let report = cmd_classical(&cfg)?;
                for s in &report.summary {
                    println!(
                        "n = {} {:>4}: solve probability {:.4}, mean N_f {:.1} (sd {:.1})",
                        s.n, s.solver, s.solve_probability, s.mean_evals, s.sd_evals
                    );
                }
            }
            Command::Grover => {
                for r in cmd_grover(&cfg)? {
                    println!("n = {} N = {} M = {}: k = {} (closed form {})", r.n, r.N, r.M, r.k_exact, r.k_paper_formula);
                }
            }
            Command::Shells { snapshots } => {
                let report = cmd_shells(&cfg, snapshots)?;
                println!("wrote {} shell rows", report.shells.len());
            }
            Command::Report => {
                let report = cmd_report(&cfg)?;
                if let Some(fit) = &report.quartic_fit {
                    println!("p* ≈ {:.6} · n⁴ over n = {} (rms {:.3})", fit.coefficient, fit.sizes, fit.rms_residual);
                }
                println!("report tables written to {}", cfg.out_dir.join("report").display());
            }
        }
        Ok(())
    })??;
    write_metadata(&cfg, name, workers, started)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &BenchError) -> u8 {
    e.exit_code() as u8
}
