//! `shotdim`: shot-chart spatial analysis from the command line.
//!
//! Exit codes: 0 success, 1 fatal input error, 2 configuration error.

mod points;

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use shotdim::{
    estimate_d2, estimate_d2_auto, generate_synthetic, run_analysis, write_shots_csv,
    AnalysisConfig, AnalysisReport, Error, FitOptions, Format, Outcome, PairCountOptions, PointSet,
    SyntheticSpec,
};

#[derive(Parser)]
#[command(
    name = "shotdim",
    version,
    about = "Spatial bias, court equity and correlation dimension of shot charts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full analysis and write report.json plus plot data.
    Analyze(AnalyzeArgs),
    /// Generate a synthetic shot chart in the canonical CSV schema.
    Synth(SynthArgs),
    /// Correlation dimension of a two-column point file.
    D2(D2Args),
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_parser = ["csv", "jsonl"])]
    format: String,
    /// `key = value` configuration file.
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    scan_alpha: Option<f64>,
    #[arg(long)]
    bin_width: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
}

#[derive(Args)]
struct SynthArgs {
    /// JSON synthetic-chart specification.
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: u64,
    /// Feet per location unit in the written file.
    #[arg(long, default_value_t = 0.1)]
    unit_scale: f64,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("range").required(true).args(["r1", "auto_range"]))]
struct D2Args {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, requires = "r2")]
    r1: Option<f64>,
    #[arg(long, requires = "r1")]
    r2: Option<f64>,
    /// Fit between pair-distance percentiles instead of a fixed range.
    #[arg(long)]
    auto_range: bool,
    #[arg(long, default_value_t = shotdim::fractal::DEFAULT_N_RADII)]
    n_radii: usize,
    #[arg(long, default_value_t = shotdim::fractal::DEFAULT_P_LO)]
    p_lo: f64,
    #[arg(long, default_value_t = shotdim::fractal::DEFAULT_P_HI)]
    p_hi: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

enum Failure {
    Input(String),
    Config(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_config() {
            Failure::Config(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

fn analyze(a: AnalyzeArgs) -> Result<(), Failure> {
    let text = fs::read_to_string(&a.config)
        .map_err(|e| Failure::Config(format!("cannot read config {}: {e}", a.config.display())))?;
    let mut cfg = AnalysisConfig::parse(&text).map_err(|e| Failure::Config(e.to_string()))?;
    cfg.seed = a.seed;
    if let Some(v) = a.alpha {
        cfg.alpha = v;
    }
    if let Some(v) = a.scan_alpha {
        cfg.scan.alpha = v;
    }
    if let Some(v) = a.bin_width {
        cfg.scan.bin_width_ft = v;
    }
    if let Some(v) = a.trials {
        cfg.trials = v;
    }
    cfg.validate().map_err(|e| Failure::Config(e.to_string()))?;
    let format: Format = a.format.parse()?;
    let report = run_analysis(&a.input, format, &cfg, &a.out)?;
    print_summary(&report);
    println!("report written to {}", a.out.join("report.json").display());
    Ok(())
}

fn print_summary(r: &AnalysisReport) {
    println!(
        "ingest: {} accepted, {} rejected",
        r.ingest.accepted, r.ingest.rejected
    );
    for (region, t) in &r.bias_tests {
        match t {
            Outcome::Ok(t) => println!(
                "bias {region}: outer fraction {:.4} vs baseline {:.4}, p = {:.3e}{}",
                t.p_hat,
                t.baseline,
                t.p_value,
                if t.significant { " *" } else { "" }
            ),
            Outcome::Skipped(why) => println!("bias {region}: skipped ({why})"),
        }
    }
    for (region, f) in &r.fractal {
        if let Outcome::Ok(f) = f {
            println!(
                "d2 {region}: observed {:.3}, baseline [{:.3}, {:.3}], reduction {:.3}",
                f.observed.d2, f.baseline.lo, f.baseline.hi, f.reduction
            );
        }
    }
    if let Outcome::Ok(s) = &r.scan {
        let at: Vec<String> = s
            .flagged
            .iter()
            .map(|d| format!("{}", d.distance_ft))
            .collect();
        println!(
            "discontinuities (ft): {}",
            if at.is_empty() {
                "none".into()
            } else {
                at.join(", ")
            }
        );
    }
    for w in &r.warnings {
        eprintln!("warning: {w}");
    }
}

fn synth(a: SynthArgs) -> Result<(), Failure> {
    let text = fs::read_to_string(&a.spec)
        .map_err(|e| Failure::Config(format!("cannot read spec {}: {e}", a.spec.display())))?;
    let mut spec: SyntheticSpec = serde_json::from_str(&text)
        .map_err(|e| Failure::Config(format!("bad spec {}: {e}", a.spec.display())))?;
    spec.seed = a.seed;
    let shots = generate_synthetic(&spec, &shotdim::CourtModel::default())?;
    let file = File::create(&a.out)
        .map_err(|e| Failure::Input(format!("cannot create {}: {e}", a.out.display())))?;
    write_shots_csv(&shots, a.unit_scale, BufWriter::new(file))?;
    println!("wrote {} shots to {}", shots.len(), a.out.display());
    Ok(())
}

fn d2(a: D2Args) -> Result<(), Failure> {
    let text = fs::read_to_string(&a.input)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", a.input.display())))?;
    let pts = PointSet::new(points::parse_points(&text).map_err(Failure::Input)?)?;
    let pairs = PairCountOptions {
        seed: a.seed,
        ..PairCountOptions::default()
    };
    let fit = match (a.r1, a.r2) {
        (Some(r1), Some(r2)) => estimate_d2(&pts, r1, r2, a.n_radii, &pairs)?,
        _ => estimate_d2_auto(
            &pts,
            &FitOptions {
                n_radii: a.n_radii,
                p_lo: a.p_lo,
                p_hi: a.p_hi,
                pairs,
            },
        )?,
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&fit).expect("fit serializes")
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Synth(a) => synth(a),
        Command::D2(a) => d2(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Config(m)) => {
            eprintln!("config error: {m}");
            ExitCode::from(2)
        }
    }
}
