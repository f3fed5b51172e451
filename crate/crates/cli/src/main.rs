use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tdsofdm::analysis::BerPoint;
use tdsofdm::harness::{
    dump_response, mc_point, run_criterion, run_mc_ber, run_str_baseline, run_theory, write_curve, write_with_sidecar,
    BerCurve, Link, ScenarioConfig,
};

#[derive(Parser, Debug)]
#[command(name = "tdsofdm", version, about = "TDS-OFDM sampling-phase link simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analytic SER/BER and the exponential surrogate per phase and Eb/N0
    Theory(Common),
    /// Monte-Carlo SER/BER per phase and Eb/N0
    Simulate(Common),
    /// Choose the sampling phase from the roll-off band power and compare
    /// it with the timing loop and the grid search
    Criterion(Common),
    /// Equivalent response magnitude per phase
    Response(Common),
    /// Run the timing-recovery loop and measure BER at its phase
    StrBaseline(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// Scenario file (TOML)
    #[arg(long)]
    config: PathBuf,
    /// Replace the Eb/N0 sweep (dB, comma separated)
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    ebn0: Option<Vec<f64>>,
    /// Replace the phase list (symbol periods, comma separated)
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    epsilon: Option<Vec<f64>>,
    #[arg(long)]
    seed: Option<u64>,
    /// CSV output; a JSON sidecar is written next to it. Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn load(&self) -> tdsofdm::Result<ScenarioConfig> {
        let mut cfg = ScenarioConfig::load(&self.config)?;
        if let Some(e) = &self.ebn0 {
            cfg.sweep.ebn0_db = e.clone();
            cfg.sweep.reference_ebn0_db = None;
        }
        if let Some(e) = &self.epsilon {
            cfg.phase.epsilon = e.clone();
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn emit_curve(out: Option<&Path>, curve: &BerCurve, cfg: &ScenarioConfig) -> tdsofdm::Result<()> {
    match out {
        Some(p) => {
            write_curve(p, curve, cfg)?;
        }
        None => print!("{}", curve.to_csv()),
    }
    Ok(())
}

fn run(cli: &Cli) -> tdsofdm::Result<bool> {
    match &cli.command {
        Command::Theory(c) => {
            let cfg = c.load()?;
            let curve = run_theory(&cfg)?;
            emit_curve(c.out.as_deref(), &curve, &cfg)?;
            Ok(false)
        }
        Command::Simulate(c) => {
            let cfg = c.load()?;
            let curve = run_mc_ber(&cfg)?;
            emit_curve(c.out.as_deref(), &curve, &cfg)?;
            for p in curve.points.iter().filter(|p| p.budget_exhausted) {
                eprintln!(
                    "warning: frame budget exhausted at eps {} Eb/N0 {} dB ({} errors)",
                    p.epsilon, p.ebn0_db, p.error_count
                );
            }
            Ok(curve.flagged())
        }
        Command::Criterion(c) => {
            let cfg = c.load()?;
            let report = run_criterion(&cfg)?;
            let mut points: Vec<BerPoint> = Vec::new();
            if let Some(o) = &report.oracle {
                points.extend(o.points.iter().map(|(_, p)| p.clone()));
            } else {
                points.extend(report.criterion_point.clone());
            }
            points.extend(report.str_point.clone());
            let curve = BerCurve {
                points,
                fingerprint: report.fingerprint.clone(),
                wall_time_s: report.wall_time_s,
            };
            match &c.out {
                Some(p) => {
                    write_with_sidecar(p, &curve.to_csv(), &cfg, &report, report.flagged())?;
                    print!("{}", report.summary());
                }
                None => {
                    eprint!("{}", report.summary());
                    print!("{}", curve.to_csv());
                }
            }
            Ok(report.flagged())
        }
        Command::Response(c) => {
            let cfg = c.load()?;
            let table = dump_response(&cfg, &cfg.phase.epsilon)?;
            match &c.out {
                Some(p) => {
                    write_with_sidecar(p, &table.to_csv(), &cfg, &table, false)?;
                }
                None => print!("{}", table.to_csv()),
            }
            Ok(false)
        }
        Command::StrBaseline(c) => {
            let cfg = c.load()?;
            let profile = cfg.profile()?;
            let ebn0 = cfg.reference_ebn0_db();
            let outcome = run_str_baseline(&cfg, &profile, ebn0)?;
            let link = Link::new(&cfg, &profile, outcome.epsilon)?;
            let point = mc_point(&cfg, &link, ebn0, 0, cfg.sweep.ebn0_db.len() as u64)?;
            eprintln!(
                "str loop: eps {:+.6} (raw {:+.6} symbols), converged {} at frame {:?}",
                outcome.epsilon, outcome.raw_offset, outcome.converged, outcome.converged_at
            );
            let flagged = !outcome.converged || point.budget_exhausted;
            let curve = BerCurve {
                points: vec![point],
                fingerprint: cfg.fingerprint()?,
                wall_time_s: 0.0,
            };
            match &c.out {
                Some(p) => {
                    write_with_sidecar(p, &curve.to_csv(), &cfg, &(&outcome, &curve), flagged)?;
                }
                None => print!("{}", curve.to_csv()),
            }
            Ok(flagged)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("non-convergence flags present");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
