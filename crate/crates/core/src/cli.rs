//! The `tvp` command-line front end.
//!
//! Exit codes: 0 on success, 2 when a result was written but a solve did not
//! converge (or the selected grid point came from one), 1 on errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::denoise::{denoise, DenoiseParams, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::grid::ImageGrid;
use crate::io::{self, ImageFile};
use crate::lp::PExponent;
use crate::trainer::{
    self, build_training_ground, compute_alpha_max_certified, ReportStatus, StrategyConfig,
    TrainingPairSet, SCHEMA_VERSION,
};

const DEFAULT_ALPHA_TOL: f64 = 1e-4;

#[derive(Debug, Parser)]
#[command(name = "tvp", version, about = "l^p-anisotropic TV denoising and certified (alpha, p) training")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Denoise one image; writes the result and `<out>.json` diagnostics.
    Denoise(DenoiseArgs),
    /// Learn (alpha, p) from noisy/clean pairs; writes report.json and landscape.csv.
    Train(TrainArgs),
    /// Compute alpha_U and its bracket certificate.
    AlphaMax(AlphaMaxArgs),
    /// Sweep the assessment over a training ground, without selection.
    Landscape(LandscapeArgs),
    /// Block-average an image at resolution K (given or chosen from epsilon).
    Relax(RelaxArgs),
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Solver tolerance on the normalized primal-dual residual.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long = "max-iter", default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
}

impl SolverArgs {
    fn params(&self) -> DenoiseParams {
        DenoiseParams::lp(1.0, PExponent::TWO)
            .with_tol(self.tol)
            .with_max_iter(self.max_iter)
    }
}

#[derive(Debug, Args)]
pub struct DenoiseArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub alpha: f64,
    /// Exponent in [1, inf]; `inf` is accepted.
    #[arg(long, default_value = "2")]
    pub p: PExponent,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// Noisy images, one per pair.
    #[arg(long, num_args = 1.., required = true)]
    pub noisy: Vec<PathBuf>,
    /// Clean images, in the same order.
    #[arg(long, num_args = 1.., required = true)]
    pub clean: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub pairs: PairArgs,
    /// Target accuracy; runs relax -> alpha_U -> level -> sweep.
    #[arg(long, required_unless_present = "level")]
    pub epsilon: Option<f64>,
    /// Sweep this level directly instead of deriving it from epsilon.
    #[arg(long)]
    pub level: Option<u64>,
    /// Largest level the epsilon pipeline may sweep.
    #[arg(long = "max-level", default_value_t = 64)]
    pub max_level: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AlphaMaxArgs {
    pub input: PathBuf,
    /// Relative width of the final bisection bracket.
    #[arg(long, default_value_t = DEFAULT_ALPHA_TOL)]
    pub tol: f64,
    #[arg(long = "max-iter", default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    /// Where to write the JSON certificate.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LandscapeArgs {
    #[command(flatten)]
    pub pairs: PairArgs,
    #[arg(long)]
    pub level: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// CSV output path.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RelaxArgs {
    pub input: PathBuf,
    /// Blocks per axis, K.
    #[arg(long, conflicts_with = "epsilon", required_unless_present = "epsilon")]
    pub level: Option<usize>,
    /// Pick the smallest K with ||u^K - u|| <= epsilon / 4.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

/// Parses `std::env::args` and runs.
pub fn main_from_env() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors share code 1 with other failures; 2 means "not converged"
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

/// Runs one command; `Ok(false)` means "written, but not converged".
pub fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Denoise(a) => run_denoise(a),
        Command::Train(a) => run_train(a),
        Command::AlphaMax(a) => run_alpha_max(a),
        Command::Landscape(a) => run_landscape(a),
        Command::Relax(a) => run_relax(a),
    }
}

#[derive(Serialize)]
struct DenoiseDiagnostics {
    schema_version: u32,
    alpha: f64,
    p: PExponent,
    iterations: usize,
    residual: f64,
    converged: bool,
    tv: f64,
    fidelity: f64,
    energy: f64,
    duality_gap: f64,
    /// True when the written file had to be rounded to integer samples.
    quantized: bool,
}

fn read_file(path: &Path) -> Result<ImageFile> {
    io::read_image_file(path).map_err(|e| match e {
        Error::Io(err) => Error::InvalidInput(format!("{}: {err}", path.display())),
        Error::Parse { offset, message } => Error::Parse {
            offset,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}

fn read_grid(path: &Path) -> Result<ImageGrid> {
    Ok(read_file(path)?.into_grid())
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn write_like(input: &ImageFile, grid: &ImageGrid, out: &Path) -> Result<bool> {
    let is_pgm = out
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("pgm"));
    if !is_pgm {
        io::write_image(grid, out)?;
        return Ok(false);
    }
    let (maxval, encoding) = match input {
        ImageFile::Pgm(p) => (p.maxval, p.encoding),
        ImageFile::Text(_) => (if grid.max() <= 255.5 { 255 } else { 65535 }, io::PgmEncoding::Binary),
    };
    let q = io::quantize(grid, maxval);
    let lossy = q.values() != grid.values();
    io::write_pgm(
        &io::Pgm {
            grid: q,
            maxval,
            encoding,
        },
        out,
    )?;
    Ok(lossy)
}

fn run_denoise(a: &DenoiseArgs) -> Result<bool> {
    let input = read_file(&a.input)?;
    let params = a.solver.params().at(a.alpha, crate::lp::AnisotropicMetric::lp(a.p));
    let r = denoise(input.grid(), &params)?;
    let quantized = write_like(&input, &r.u, &a.out)?;
    let diag = DenoiseDiagnostics {
        schema_version: SCHEMA_VERSION,
        alpha: a.alpha,
        p: a.p,
        iterations: r.iterations,
        residual: r.residual,
        converged: r.converged,
        tv: r.tv_value,
        fidelity: r.fidelity,
        energy: r.energy(a.alpha),
        duality_gap: r.duality_gap,
        quantized,
    };
    io::write_json(&diag, &with_suffix(&a.out, ".json"))?;
    println!(
        "alpha={} p={} iterations={} residual={:e} converged={}",
        a.alpha, a.p, r.iterations, r.residual, r.converged
    );
    Ok(r.converged)
}

fn read_pairs(p: &PairArgs) -> Result<TrainingPairSet> {
    if p.noisy.len() != p.clean.len() {
        return Err(Error::InvalidArgument(format!(
            "{} noisy but {} clean images",
            p.noisy.len(),
            p.clean.len()
        )));
    }
    let mut pairs = Vec::with_capacity(p.noisy.len());
    for (n, c) in p.noisy.iter().zip(&p.clean) {
        pairs.push((read_grid(n)?, read_grid(c)?));
    }
    TrainingPairSet::new(pairs)
}

/// `alpha_U` shared by all pairs: the largest per-pair value.
fn shared_alpha_max(pairs: &TrainingPairSet, solver: &DenoiseParams) -> Result<f64> {
    let mut best = 0.0_f64;
    for (noisy, _) in pairs.pairs() {
        let c = compute_alpha_max_certified(noisy, DEFAULT_ALPHA_TOL, solver)?;
        best = best.max(c.alpha_max);
    }
    Ok(best)
}

fn run_train(a: &TrainArgs) -> Result<bool> {
    let pairs = read_pairs(&a.pairs)?;
    let solver = a.solver.params();
    fs::create_dir_all(&a.out)?;
    let report = match a.level {
        Some(level) => {
            let alpha_max = shared_alpha_max(&pairs, &solver)?;
            let ground = build_training_ground(alpha_max, level)?;
            trainer::train(&pairs, &ground, &solver, a.workers)?
        }
        None => {
            let epsilon = a.epsilon.expect("clap enforces epsilon or level");
            let [(noisy, clean)] = pairs.pairs() else {
                return Err(Error::InvalidArgument(
                    "the epsilon pipeline takes one pair; use --level for several".into(),
                ));
            };
            let config = StrategyConfig {
                solver,
                workers: a.workers,
                alpha_tol: DEFAULT_ALPHA_TOL,
                max_level: a.max_level,
            };
            let outcome = trainer::run_practical_strategy(clean, noisy, epsilon, &config)?;
            io::write_json(&outcome.certificate, &a.out.join("certificate.json"))?;
            outcome.report
        }
    };
    io::write_landscape(&report.records, &a.out.join("landscape.csv"))?;
    io::write_json(&report, &a.out.join("report.json"))?;
    println!(
        "argmin alpha={} p={} assessment={} level={} points={}",
        report.argmin_alpha,
        report.argmin_p,
        report.min_value,
        report.level,
        report.records.len()
    );
    Ok(report.status == ReportStatus::Ok)
}

fn run_alpha_max(a: &AlphaMaxArgs) -> Result<bool> {
    let u = read_grid(&a.input)?;
    let solver = DenoiseParams::lp(1.0, PExponent::INFINITY).with_max_iter(a.max_iter);
    let cert = compute_alpha_max_certified(&u, a.tol, &solver)?;
    if let Some(out) = &a.out {
        io::write_json(&cert, out)?;
    }
    println!("{}", cert.alpha_max);
    Ok(true)
}

fn run_landscape(a: &LandscapeArgs) -> Result<bool> {
    let pairs = read_pairs(&a.pairs)?;
    let solver = a.solver.params();
    let alpha_max = shared_alpha_max(&pairs, &solver)?;
    let ground = build_training_ground(alpha_max, a.level)?;
    let records = trainer::landscape(&pairs, &ground, &solver, a.workers)?;
    io::write_landscape(&records, &a.out)?;
    println!("{} points", records.len());
    Ok(records.iter().all(|r| r.converged))
}

fn run_relax(a: &RelaxArgs) -> Result<bool> {
    let u = read_grid(&a.input)?;
    let k = match (a.level, a.epsilon) {
        (Some(k), _) => k,
        (None, Some(eps)) => trainer::choose_resolution(&u, eps)?,
        (None, None) => unreachable!("clap enforces level or epsilon"),
    };
    let relaxed = trainer::relax_image(&u, k)?;
    io::write_image(&relaxed, &a.out)?;
    println!("K={k} distance={}", relaxed.l2_distance(&u));
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn parses_flags() {
        let cli = Cli::try_parse_from([
            "tvp", "denoise", "in.pgm", "--alpha", "0.5", "--p", "inf", "--tol", "1e-7", "--max-iter", "10",
            "--out", "o.pgm",
        ])
        .unwrap();
        match cli.command {
            Command::Denoise(a) => {
                assert!(a.p.is_infinite());
                assert_eq!(a.solver.max_iter, 10);
            }
            _ => panic!(),
        }
        assert!(Cli::try_parse_from(["tvp", "relax", "x", "--out", "y"]).is_err());
        assert!(Cli::try_parse_from(["tvp", "train", "--noisy", "a", "--clean", "b", "--out", "d"]).is_err());
    }
}
