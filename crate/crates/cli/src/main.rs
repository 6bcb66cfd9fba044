//! `amoebakit`: run a scenario file and write `report.json` and `figure.svg`.
//!
//! Exit codes: 0 when every requested verdict passes, 2 when one fails,
//! 1 on input errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use amoeba_core::exec::with_threads;
use amoeba_core::scenario::{run, Mode, Scenario, ScenarioError};
use amoeba_core::Exec;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "amoebakit", version, about = "Amoebas, spines and amoeba intersections of bivariate Laurent polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Newton polytopes, normal fans and the mixed volume
    Newton(RunArgs),
    /// Raster amoeba with complement components and their orders
    Amoeba(RunArgs),
    /// Spine from Ronkin coefficients
    Spine(RunArgs),
    /// Tropical curves of the coefficient valuations and their stable intersection
    Tropical(RunArgs),
    /// Intersection of two amoebas, reported without requesting verdicts
    Intersect(RunArgs),
    /// Intersection of two amoebas with every verdict requested
    Verify(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Scenario JSON file
    #[arg(long)]
    input: PathBuf,
    /// Output directory for report.json and figure.svg
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    resolution: Option<usize>,
    /// Angle samples per raster line
    #[arg(long)]
    angles: Option<usize>,
    /// Quadrature points per torus axis for Ronkin integrals
    #[arg(long)]
    quad: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated, strictly decreasing neighbourhood sizes for the spine retraction experiment
    #[arg(long, value_delimiter = ',')]
    epsilon_list: Option<Vec<f64>>,
    /// Treat measure-zero amoebas by dilation and skip the dimension check
    #[arg(long)]
    degenerate_mode: bool,
    /// Vertex merge radius in cells
    #[arg(long)]
    merge_radius: Option<f64>,
    /// Resolution factor of vertex refinement patches
    #[arg(long)]
    refine_factor: Option<usize>,
    /// Worker threads (0 uses all cores)
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Run without the worker pool
    #[arg(long)]
    sequential: bool,
}

impl Command {
    fn split(self) -> (Mode, RunArgs) {
        match self {
            Command::Newton(a) => (Mode::Newton, a),
            Command::Amoeba(a) => (Mode::Amoeba, a),
            Command::Spine(a) => (Mode::Spine, a),
            Command::Tropical(a) => (Mode::Tropical, a),
            Command::Intersect(a) => (Mode::Intersect, a),
            Command::Verify(a) => (Mode::Verify, a),
        }
    }
}

fn load(args: &RunArgs, mode: Mode) -> Result<Scenario, String> {
    let text = fs::read_to_string(&args.input).map_err(|e| format!("cannot read {}: {e}", args.input.display()))?;
    let mut s = Scenario::from_json(&text).map_err(|e| e.to_string())?;
    if let Some(m) = s.mode {
        if m != mode {
            log::warn!("scenario mode {} overridden by subcommand {}", m.name(), mode.name());
        }
    }
    if let Some(r) = args.resolution {
        s.resolution = r;
    }
    if let Some(a) = args.angles {
        s.angle_samples = a;
    }
    if let Some(q) = args.quad {
        s.quad_n = q;
    }
    if let Some(seed) = args.seed {
        s.seed = seed;
    }
    if let Some(e) = &args.epsilon_list {
        s.epsilons = Some(e.clone());
    }
    if args.degenerate_mode {
        s.degenerate = true;
    }
    if let Some(r) = args.merge_radius {
        s.merge_radius = Some(r);
    }
    if let Some(k) = args.refine_factor {
        s.refine_factor = Some(k);
    }
    Ok(s)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let (mode, args) = Cli::parse().command.split();
    let scenario = match load(&args, mode) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let exec = if args.sequential { Exec::Sequential } else { Exec::Parallel };
    let threads = if args.threads == 0 { std::thread::available_parallelism().map_or(1, |n| n.get()) } else { args.threads };
    let output = match with_threads(threads, || run(&scenario, mode, exec)) {
        Ok(o) => o,
        Err(e @ (ScenarioError::Parse { .. } | ScenarioError::Invalid(_))) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = fs::create_dir_all(&args.out)
        .and_then(|_| fs::write(args.out.join("report.json"), output.report_text()))
        .and_then(|_| fs::write(args.out.join("figure.svg"), &output.svg))
    {
        eprintln!("error: cannot write to {}: {e}", args.out.display());
        return ExitCode::from(1);
    }
    // intersect reports verdicts without requesting them
    let label = if mode == Mode::Intersect { "fail (reported only)" } else { "FAIL" };
    if let Some(verdicts) = output.report["verdicts"].as_array() {
        for v in verdicts {
            let status = v["status"].as_str().unwrap_or("?");
            if status == "fail" {
                eprintln!("{label} {}: {} ({})", v["id"].as_str().unwrap_or(""), v["anchor"].as_str().unwrap_or(""), v["detail"].as_str().unwrap_or(""));
            }
        }
    }
    if output.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}
