use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::info;

use gaitfuse::model::parse_log_with;
use gaitfuse::report::plot_data;
use gaitfuse::stream::StreamServer;
use gaitfuse::synth::TruthSidecar;
use gaitfuse::{analyze, generate, serialize_log, AnalysisConfig, GaitError, GaitProfile, GaitReport};

/// Spatial-temporal gait parameters from in-shoe IMU and pressure logs.
#[derive(Parser)]
#[command(name = "gaitfuse", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a CSV log and write a report.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        /// key=value config file; defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        output: PathBuf,
        /// Per-sample CSV of the smoothed curves, foot-flat flags and events.
        #[arg(long)]
        plot_data: Option<PathBuf>,
    },
    /// Write a synthetic log plus a ground-truth sidecar (<output>.truth.toml).
    Generate {
        /// normal, stroke-left or stroke-right.
        #[arg(long)]
        profile: String,
        /// Seconds.
        #[arg(long)]
        duration: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: PathBuf,
    },
    /// Accept CSV rows over TCP and write a report per flushed session.
    Stream {
        #[arg(long)]
        listen: String,
        #[arg(long)]
        output_dir: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn load_config(path: Option<&Path>) -> Result<AnalysisConfig, GaitError> {
    match path {
        Some(p) => AnalysisConfig::load(p),
        None => Ok(AnalysisConfig::default()),
    }
}

fn sidecar_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".truth.toml");
    PathBuf::from(s)
}

fn run(cli: Cli) -> Result<(), GaitError> {
    match cli.command {
        Command::Analyze {
            input,
            config,
            output,
            plot_data: plot,
        } => {
            let cfg = load_config(config.as_deref())?;
            let bytes = std::fs::read(&input)?;
            let session = parse_log_with(&bytes, &cfg.ingest_options())?;
            let analysis = analyze(&session, &cfg)?;
            let report = GaitReport::new(&session, &analysis);
            report.check_consistency()?;
            std::fs::write(&output, report.to_toml()?)?;
            if let Some(p) = plot {
                std::fs::write(p, plot_data(&analysis))?;
            }
            info!("{} events, {} diagnostics", report.events.len(), report.diagnostics.len());
        }
        Command::Generate {
            profile,
            duration,
            seed,
            output,
        } => {
            let profile = GaitProfile::named(&profile)?.with_seed(seed);
            let (session, truth) = generate(&profile, duration)?;
            std::fs::write(&output, serialize_log(&session))?;
            let sidecar = TruthSidecar {
                duration_s: duration,
                profile,
                truth,
            };
            std::fs::write(sidecar_path(&output), sidecar.to_toml()?)?;
        }
        Command::Stream {
            listen,
            output_dir,
            config,
        } => {
            let cfg = load_config(config.as_deref())?;
            StreamServer::bind(listen.as_str(), output_dir, cfg)?.run()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 3 })
        }
    }
}
