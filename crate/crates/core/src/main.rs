//! `hypelastic`: simulate, construct, analyse, verify and plot.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage error.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hypelastic::analysis::{blow_up_run, quantization_report};
use hypelastic::elastica::{
    asymptotically_geodesic_disk_raw, asymptotically_geodesic_halfplane_raw, classify,
    construct_lambda_figure_eight, energy_asymptotically_geodesic, figure_eight_energy, measured_energy,
};
use hypelastic::flow::{
    run, symmetry_monitor, BoundaryCondition, ClampedData, DtPolicy, FlowConfig, GradientKind, Symmetry, Termination,
};
use hypelastic::geometry::{elastic_energy, phi_inv, Model, SampledCurve, SpeedWeight, Topology};
use hypelastic::io::{
    read_archive, read_curve, render_svg, verify_paths, write_archive, write_curve, Provenance, QuantizationDigest,
    RunSummary, SvgOptions, DEFAULT_DELTA, DEFAULT_EPS,
};

/// Directory used when `--out` is not given.
const OUT_ENV: &str = "HYPELASTIC_OUT";

#[derive(Parser)]
#[command(name = "hypelastic", version, about = "Elastic flow of curves in the hyperbolic plane")]
struct Cli {
    /// Output directory; defaults to $HYPELASTIC_OUT, then the current directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for the randomized checks.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the elastic flow and write a run archive.
    Simulate(SimulateArgs),
    /// Construct stationary curves.
    #[command(subcommand)]
    Elastica(ElasticaCommand),
    /// Blow up a stored run at a singular parameter.
    Blowup(BlowupArgs),
    /// Check stored runs against the flow and analysis invariants.
    Verify(VerifyArgs),
    /// Render a curve or run as SVG.
    Plot(PlotArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Fixed,
    AdaptiveEnergyGuard,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpeedArg {
    Euclidean,
    Hyperbolic,
}

#[derive(Clone, Copy, ValueEnum)]
enum GradientArg {
    FirstVariation,
    DiscreteEnergy,
}

#[derive(Args)]
struct SimulateArgs {
    /// `lambda-eight:λ`, `clamped-symmetric:FILE` or `file:FILE`.
    #[arg(long)]
    initial: String,
    #[arg(long)]
    t_end: f64,
    #[arg(long = "n", default_value_t = 128)]
    n_nodes: usize,
    #[arg(long, default_value_t = 1e-3)]
    dt_initial: f64,
    #[arg(long, value_enum, default_value = "adaptive-energy-guard")]
    dt_policy: PolicyArg,
    #[arg(long, default_value_t = 25)]
    reparam_every: usize,
    #[arg(long, value_enum, default_value = "hyperbolic")]
    reparam_speed: SpeedArg,
    #[arg(long, default_value_t = 1e-3)]
    singular_eps: f64,
    #[arg(long, default_value_t = 1000)]
    frame_every: usize,
    #[arg(long, default_value_t = 0.1)]
    guard_c0: f64,
    #[arg(long)]
    max_steps: Option<u64>,
    #[arg(long, value_enum, default_value = "discrete-energy")]
    gradient: GradientArg,
    /// Half-width of the singular windows in the stored quantization digest.
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    delta: f64,
}

#[derive(Subcommand)]
enum ElasticaCommand {
    /// Symmetric λ-figure-eight by shooting.
    FigureEight {
        #[arg(long)]
        lambda: f64,
        #[arg(long = "n", default_value_t = 512)]
        n_nodes: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Free asymptotically geodesic elastica truncated to `|s| ≤ s_max`.
    AsymptoticallyGeodesic {
        #[arg(long, default_value_t = 20.0)]
        s_max: f64,
        #[arg(long = "n", default_value_t = 4001)]
        n_nodes: usize,
        #[arg(long, default_value = "disk")]
        model: String,
    },
    /// Classify the λ-constrained elastica with peak curvature² `kappa0_sq`.
    Classify {
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        kappa0_sq: f64,
    },
}

#[derive(Args)]
struct BlowupArgs {
    /// Run archive directory.
    #[arg(long)]
    run: PathBuf,
    /// Singular parameter.
    #[arg(long)]
    x: f64,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    delta: f64,
    #[arg(long, default_value_t = DEFAULT_EPS)]
    eps: f64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run archive directories.
    runs: Vec<PathBuf>,
}

#[derive(Args)]
struct PlotArgs {
    /// Curve CSV file.
    #[arg(long, conflicts_with = "run", required_unless_present = "run")]
    curve: Option<PathBuf>,
    /// Run archive directory.
    #[arg(long)]
    run: Option<PathBuf>,
    /// Overlay this many frames (spread over the run) instead of only the last.
    #[arg(long)]
    frames: Option<usize>,
    /// SVG file name inside the output directory.
    #[arg(long, default_value = "plot.svg")]
    name: String,
    #[arg(long, default_value_t = 600)]
    size: u32,
}

enum CliError {
    Usage(String),
    Runtime(String),
}

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Runtime(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn out_dir(cli: Option<&Path>) -> PathBuf {
    cli.map(Path::to_path_buf)
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn print_json<T: Serialize>(v: &T) -> CliResult<()> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    std::io::stdout().write_all(s.as_bytes())?;
    Ok(())
}

fn load_curve(path: &str) -> CliResult<SampledCurve> {
    let f = File::open(path).map_err(|e| CliError::Runtime(format!("{path}: {e}")))?;
    let c = read_curve(BufReader::new(f)).map_err(|e| CliError::Runtime(format!("{path}: {e}")))?;
    Ok(match c.model {
        Model::Disk => c,
        Model::HalfPlane => c.map_nodes(Model::Disk, phi_inv)?,
    })
}

/// Initial curve, boundary condition and clamped data for an `--initial` description.
fn resolve_initial(initial_arg: &str, n: usize) -> CliResult<(SampledCurve, BoundaryCondition, Option<ClampedData>)> {
    let (kind, arg) = initial_arg
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("--initial {initial_arg:?}: expected KIND:VALUE")))?;
    match kind {
        "lambda-eight" => {
            let lambda: f64 =
                arg.parse().map_err(|_| CliError::Usage(format!("--initial {initial_arg:?}: λ is not a number")))?;
            let n8 = n.next_multiple_of(4).max(32);
            let f = construct_lambda_figure_eight(lambda, 1e-10, n8)?;
            Ok((f.curve, BoundaryCondition::Closed, None))
        }
        "clamped-symmetric" => {
            let c = load_curve(arg)?;
            let r = symmetry_monitor(&c, Symmetry::S2Prime)?;
            if r > 1e-10 {
                return Err(CliError::Runtime(format!("{arg}: curve is not mirror symmetric (residual {r:e})")));
            }
            let d = ClampedData::from_curve(&c)?;
            Ok((c, BoundaryCondition::Clamped, Some(d)))
        }
        "file" => {
            let c = load_curve(arg)?;
            match c.topology {
                Topology::Closed => Ok((c, BoundaryCondition::Closed, None)),
                Topology::Open => {
                    let d = ClampedData::from_curve(&c)?;
                    Ok((c, BoundaryCondition::Clamped, Some(d)))
                }
            }
        }
        _ => Err(CliError::Usage(format!("--initial {initial_arg:?}: unknown kind {kind:?}"))),
    }
}

fn simulate(a: &SimulateArgs, out: &Path) -> CliResult<ExitCode> {
    let started = Instant::now();
    let (initial, bc, clamped_data) = resolve_initial(&a.initial, a.n_nodes)?;
    let config = FlowConfig {
        n_nodes: if bc == BoundaryCondition::Closed && a.initial.starts_with("lambda-eight") {
            initial.len()
        } else {
            a.n_nodes
        },
        dt_initial: a.dt_initial,
        dt_policy: match a.dt_policy {
            PolicyArg::Fixed => DtPolicy::Fixed,
            PolicyArg::AdaptiveEnergyGuard => DtPolicy::AdaptiveEnergyGuard,
        },
        t_end: a.t_end,
        bc,
        clamped_data,
        reparam_every: a.reparam_every,
        singular_eps: a.singular_eps,
        frame_every: a.frame_every,
        reparam_speed: match a.reparam_speed {
            SpeedArg::Euclidean => SpeedWeight::Euclidean,
            SpeedArg::Hyperbolic => SpeedWeight::Hyperbolic,
        },
        guard_c0: a.guard_c0,
        max_steps: a.max_steps,
        gradient: match a.gradient {
            GradientArg::FirstVariation => GradientKind::FirstVariation,
            GradientArg::DiscreteEnergy => GradientKind::DiscreteEnergy,
        },
    };
    config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let flow = run(&config, &initial)?;
    let digest = match quantization_report(&flow, flow.initial_energy(), config.singular_eps, a.delta) {
        Ok(r) => Some(QuantizationDigest::from_report(&r, config.singular_eps, a.delta)),
        Err(e) => {
            eprintln!("quantization digest skipped: {e}");
            None
        }
    };
    let summary = RunSummary::new(&flow, &a.initial, digest);
    let provenance = Provenance {
        tool_version: env!("CARGO_PKG_VERSION").into(),
        wall_time_seconds: started.elapsed().as_secs_f64(),
        command: std::env::args().collect(),
    };
    write_archive(out, &flow, &summary, &provenance)?;
    eprintln!(
        "{}: t = {}, E = {:.8}, max|γ| = {:.6}, {} steps",
        flow.termination.as_str(),
        flow.last().t,
        flow.last().energy,
        flow.last().max_abs,
        flow.stats.accepted_steps
    );
    Ok(match flow.termination {
        Termination::StepFailure => ExitCode::from(1),
        _ => ExitCode::SUCCESS,
    })
}

fn write_curve_file(path: &Path, c: &SampledCurve) -> CliResult<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let f = File::create(path).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
    let mut w = BufWriter::new(f);
    write_curve(&mut w, c)?;
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct FigureEightReport {
    lambda: f64,
    modulus: f64,
    kappa0_sq: f64,
    quarter_length: f64,
    energy_closed_form: f64,
    energy_quadrature: f64,
    shooting_residual: f64,
    curve_file: PathBuf,
}

#[derive(Serialize)]
struct GeodesicReport {
    model: &'static str,
    s_max: f64,
    energy_closed_form: f64,
    energy_quadrature: f64,
    curve_file: PathBuf,
}

fn elastica(cmd: &ElasticaCommand, out: &Path) -> CliResult<ExitCode> {
    match *cmd {
        ElasticaCommand::FigureEight { lambda, n_nodes, tol } => {
            let f = construct_lambda_figure_eight(lambda, tol, n_nodes)?;
            let path = out.join(format!("figure_eight_{lambda}.csv"));
            write_curve_file(&path, &f.curve)?;
            print_json(&FigureEightReport {
                lambda,
                modulus: f.params.modulus,
                kappa0_sq: f.params.kappa0_sq,
                quarter_length: f.quarter_length,
                energy_closed_form: figure_eight_energy(&f.params),
                energy_quadrature: measured_energy(&f),
                shooting_residual: f.shooting_residual,
                curve_file: path,
            })?;
        }
        ElasticaCommand::AsymptoticallyGeodesic { s_max, n_nodes, ref model } => {
            let model = Model::parse(model).ok_or_else(|| CliError::Usage(format!("unknown model {model:?}")))?;
            let raw = match model {
                Model::Disk => asymptotically_geodesic_disk_raw,
                Model::HalfPlane => asymptotically_geodesic_halfplane_raw,
            };
            let nodes = (0..n_nodes).map(|i| raw(-s_max + 2.0 * s_max * i as f64 / (n_nodes - 1) as f64)).collect();
            let c = SampledCurve::new(model, Topology::Open, nodes, (-s_max, s_max))?;
            let path = out.join(format!("asymptotically_geodesic_{}.csv", model.as_str()));
            write_curve_file(&path, &c)?;
            print_json(&GeodesicReport {
                model: model.as_str(),
                s_max,
                energy_closed_form: energy_asymptotically_geodesic(0.0),
                energy_quadrature: elastic_energy(&c)?,
                curve_file: path,
            })?;
        }
        ElasticaCommand::Classify { lambda, kappa0_sq } => print_json(&classify(lambda, kappa0_sq)?)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn blowup(a: &BlowupArgs, out: &Path) -> CliResult<ExitCode> {
    let archive = read_archive(&a.run)?;
    let b = blow_up_run(&archive.run, a.x, a.delta, a.eps)?;
    let path = out.join(format!("blowup_{}.csv", a.x));
    write_curve_file(&path, b.curve())?;
    print_json(&b)?;
    Ok(ExitCode::SUCCESS)
}

fn plot(a: &PlotArgs, out: &Path) -> CliResult<ExitCode> {
    let curves: Vec<SampledCurve> = match (&a.curve, &a.run) {
        (Some(p), _) => vec![load_curve(&p.to_string_lossy())?],
        (None, Some(r)) => {
            let archive = read_archive(r)?;
            let frames = &archive.run.frames;
            let k = a.frames.unwrap_or(1).clamp(1, frames.len());
            // k frames evenly spread, always ending with the last
            (0..k)
                .map(|j| {
                    let idx = if k == 1 { frames.len() - 1 } else { j * (frames.len() - 1) / (k - 1) };
                    frames[idx].curve().clone()
                })
                .collect()
        }
        (None, None) => return Err(CliError::Usage("plot needs --curve or --run".into())),
    };
    let refs: Vec<&SampledCurve> = curves.iter().collect();
    let svg = render_svg(&refs, &SvgOptions { size: a.size, ..Default::default() });
    std::fs::create_dir_all(out)?;
    let path = out.join(&a.name);
    std::fs::write(&path, svg).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
    eprintln!("wrote {}", path.display());
    Ok(ExitCode::SUCCESS)
}

fn verify(a: &VerifyArgs, seed: u64) -> CliResult<ExitCode> {
    let report = verify_paths(&a.runs, seed)?;
    print_json(&report)?;
    Ok(if report.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = out_dir(cli.out.as_deref());
    let result = match &cli.command {
        Command::Simulate(a) => simulate(a, &out),
        Command::Elastica(c) => elastica(c, &out),
        Command::Blowup(a) => blowup(a, &out),
        Command::Verify(a) => verify(a, cli.seed),
        Command::Plot(a) => plot(a, &out),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
