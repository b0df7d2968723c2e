//! Run archives: a directory holding `summary.json`, `energies.csv`, `frames.csv` and
//! `provenance.json`. Everything except the provenance is a function of the run alone.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::QuantizationReport;
use crate::flow::{FlowConfig, FlowFrame, FlowRun, RunStats, SymmetryResiduals, Termination};
use crate::geometry::{signed_curvature, Model, SampledCurve, Vec2};

use super::curve_csv::{num, parse};
use super::IoError;

pub const SUMMARY_FILE: &str = "summary.json";
pub const ENERGIES_FILE: &str = "energies.csv";
pub const FRAMES_FILE: &str = "frames.csv";
pub const PROVENANCE_FILE: &str = "provenance.json";

const ENERGY_COLUMNS: [&str; 17] = [
    "frame",
    "step",
    "t",
    "energy",
    "hyp_length",
    "euc_length",
    "grad_norm_sq",
    "max_abs",
    "dt",
    "dt_bound",
    "dissipation_rate",
    "s1",
    "s2",
    "s2prime",
    "origin",
    "clamp_position",
    "clamp_tangent",
];

/// Stored claims about the singular limit, re-derived by `verify`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantizationDigest {
    pub eps: f64,
    pub delta: f64,
    pub singular_params: Vec<f64>,
    pub count: usize,
    pub per_singularity_energy: Vec<f64>,
    pub residual_energy: f64,
    /// `E(γ₀) − 8m`.
    pub budget: f64,
    pub tolerance: f64,
    pub budget_ok: bool,
    pub inconclusive: bool,
}

impl QuantizationDigest {
    pub fn from_report(r: &QuantizationReport, eps: f64, delta: f64) -> Self {
        QuantizationDigest {
            eps,
            delta,
            singular_params: r.singular_params.clone(),
            count: r.count,
            per_singularity_energy: r.per_singularity_energy.clone(),
            residual_energy: r.residual_energy,
            budget: r.initial_energy - 8.0 * r.count as f64,
            tolerance: r.tolerance,
            budget_ok: r.budget_ok,
            inconclusive: r.inconclusive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub tool: String,
    pub version: String,
    /// Initial-data description as given on the command line.
    pub initial: String,
    pub config: FlowConfig,
    pub domain: (f64, f64),
    pub termination: Termination,
    pub stats: RunStats,
    pub frame_count: usize,
    pub initial_energy: f64,
    pub final_energy: f64,
    pub final_hyp_length: f64,
    pub final_euc_length: f64,
    pub final_grad_norm_sq: f64,
    pub final_max_abs: f64,
    pub quantization: Option<QuantizationDigest>,
}

impl RunSummary {
    pub fn new(run: &FlowRun, initial: &str, quantization: Option<QuantizationDigest>) -> Self {
        let last = run.last();
        RunSummary {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            initial: initial.to_string(),
            config: run.config.clone(),
            domain: run.frames[0].curve().domain,
            termination: run.termination,
            stats: run.stats.clone(),
            frame_count: run.frames.len(),
            initial_energy: run.initial_energy(),
            final_energy: last.energy,
            final_hyp_length: last.hyp_length,
            final_euc_length: last.euc_length,
            final_grad_norm_sq: last.grad_norm_sq,
            final_max_abs: last.max_abs,
            quantization,
        }
    }
}

/// Run-dependent but input-independent facts, kept apart so the other files stay reproducible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool_version: String,
    pub wall_time_seconds: f64,
    pub command: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunArchive {
    pub dir: PathBuf,
    pub summary: RunSummary,
    pub run: FlowRun,
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn parse_opt(s: &str) -> Result<Option<f64>, IoError> {
    if s.is_empty() {
        Ok(None)
    } else {
        parse(s).map(Some)
    }
}

pub fn write_energies<W: Write>(w: W, frames: &[FlowFrame]) -> Result<(), IoError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(ENERGY_COLUMNS)?;
    for (k, f) in frames.iter().enumerate() {
        let s = f.symmetry_residuals.unwrap_or_default();
        out.write_record([
            k.to_string(),
            f.step.to_string(),
            num(f.t),
            num(f.energy),
            num(f.hyp_length),
            num(f.euc_length),
            num(f.grad_norm_sq),
            num(f.max_abs),
            num(f.dt),
            num(f.dt_bound),
            opt(f.dissipation_rate),
            opt(s.s1),
            opt(s.s2),
            opt(s.s2prime),
            opt(s.origin),
            opt(f.clamp_errors.map(|c| c.0)),
            opt(f.clamp_errors.map(|c| c.1)),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Per-frame scalars; the curves are attached separately.
pub fn read_energies<R: std::io::Read>(r: R) -> Result<Vec<FlowFrame>, IoError> {
    let mut rd = csv::Reader::from_reader(r);
    if rd.headers()?.iter().collect::<Vec<_>>() != ENERGY_COLUMNS {
        return Err(IoError::Format("unexpected energies header".into()));
    }
    let mut frames = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        let c = |i: usize| rec.get(i).unwrap_or("");
        let sym = SymmetryResiduals { s1: parse_opt(c(11))?, s2: parse_opt(c(12))?, s2prime: parse_opt(c(13))?, origin: parse_opt(c(14))? };
        let has_sym = sym.s1.is_some() || sym.s2.is_some() || sym.s2prime.is_some();
        let clamp = match (parse_opt(c(15))?, parse_opt(c(16))?) {
            (Some(a), Some(b)) => Some((a, b)),
            _ => None,
        };
        frames.push(FlowFrame {
            step: parse(c(1))?,
            t: parse(c(2))?,
            energy: parse(c(3))?,
            hyp_length: parse(c(4))?,
            euc_length: parse(c(5))?,
            grad_norm_sq: parse(c(6))?,
            max_abs: parse(c(7))?,
            dt: parse(c(8))?,
            dt_bound: parse(c(9))?,
            dissipation_rate: parse_opt(c(10))?,
            symmetry_residuals: has_sym.then_some(sym),
            clamp_errors: clamp,
            curve: None,
        });
    }
    Ok(frames)
}

/// `t,node,x,y,kappa` rows for every frame.
pub fn write_frames<W: Write>(w: W, frames: &[FlowFrame]) -> Result<(), IoError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["t", "node", "x", "y", "kappa"])?;
    for f in frames {
        let c = f.curve();
        let kappa = signed_curvature(c)?;
        for (i, (p, k)) in c.nodes.iter().zip(&kappa).enumerate() {
            out.write_record([num(f.t), i.to_string(), num(p.x), num(p.y), num(*k)])?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Node lists grouped by consecutive equal `t`.
pub fn read_frames<R: std::io::Read>(r: R) -> Result<Vec<(f64, Vec<Vec2>)>, IoError> {
    let mut rd = csv::Reader::from_reader(r);
    if rd.headers()?.iter().collect::<Vec<_>>() != ["t", "node", "x", "y", "kappa"] {
        return Err(IoError::Format("frames header must be t,node,x,y,kappa".into()));
    }
    let mut out: Vec<(f64, Vec<Vec2>)> = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        let t: f64 = parse(&rec[0])?;
        let node: usize = parse(&rec[1])?;
        let p = Vec2::new(parse(&rec[2])?, parse(&rec[3])?);
        match out.last_mut() {
            Some((t0, nodes)) if t0.to_bits() == t.to_bits() => {
                if node != nodes.len() {
                    return Err(IoError::Format(format!("frame at t = {t}: node {node} out of order")));
                }
                nodes.push(p);
            }
            _ => {
                if node != 0 {
                    return Err(IoError::Format(format!("frame at t = {t} does not start at node 0")));
                }
                out.push((t, vec![p]));
            }
        }
    }
    Ok(out)
}

fn create(path: &Path) -> Result<BufWriter<File>, IoError> {
    File::create(path).map(BufWriter::new).map_err(|e| IoError::File { path: path.to_path_buf(), source: e })
}

fn open(path: &Path) -> Result<BufReader<File>, IoError> {
    File::open(path).map(BufReader::new).map_err(|e| IoError::File { path: path.to_path_buf(), source: e })
}

fn with_path<T>(path: &Path, r: Result<T, IoError>) -> Result<T, IoError> {
    r.map_err(|e| match e {
        IoError::File { .. } => e,
        other => IoError::Corrupt { path: path.to_path_buf(), reason: other.to_string() },
    })
}

/// Write all archive files into `dir`, creating it if needed.
pub fn write_archive(dir: &Path, run: &FlowRun, summary: &RunSummary, provenance: &Provenance) -> Result<(), IoError> {
    std::fs::create_dir_all(dir).map_err(|e| IoError::File { path: dir.to_path_buf(), source: e })?;
    let mut s = create(&dir.join(SUMMARY_FILE))?;
    serde_json::to_writer_pretty(&mut s, summary)?;
    s.write_all(b"\n")?;
    s.flush()?;
    write_energies(create(&dir.join(ENERGIES_FILE))?, &run.frames)?;
    write_frames(create(&dir.join(FRAMES_FILE))?, &run.frames)?;
    let mut p = create(&dir.join(PROVENANCE_FILE))?;
    serde_json::to_writer_pretty(&mut p, provenance)?;
    p.write_all(b"\n")?;
    p.flush()?;
    Ok(())
}

/// Read an archive back; the run's frames carry their curves.
pub fn read_archive(dir: &Path) -> Result<RunArchive, IoError> {
    let sp = dir.join(SUMMARY_FILE);
    let summary: RunSummary = with_path(&sp, serde_json::from_reader(open(&sp)?).map_err(IoError::from))?;
    let ep = dir.join(ENERGIES_FILE);
    let mut frames = with_path(&ep, read_energies(open(&ep)?))?;
    let fp = dir.join(FRAMES_FILE);
    let curves = with_path(&fp, read_frames(open(&fp)?))?;
    if curves.len() != frames.len() {
        return Err(IoError::Corrupt {
            path: fp,
            reason: format!("{} curves for {} frames", curves.len(), frames.len()),
        });
    }
    let topo = summary.config.bc.topology();
    for (f, (t, nodes)) in frames.iter_mut().zip(curves) {
        if t.to_bits() != f.t.to_bits() {
            return Err(IoError::Corrupt { path: fp.clone(), reason: format!("frame time {t} does not match {}", f.t) });
        }
        let c = SampledCurve::new(Model::Disk, topo, nodes, summary.domain)
            .map_err(|e| IoError::Corrupt { path: fp.clone(), reason: e.to_string() })?;
        f.curve = Some(c);
    }
    let run = FlowRun {
        config: summary.config.clone(),
        frames,
        termination: summary.termination,
        stats: summary.stats.clone(),
    };
    Ok(RunArchive { dir: dir.to_path_buf(), summary, run })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::presets::{vertical_clamp_data, vertically_clamped_drop};
    use crate::flow::{run, BoundaryCondition};

    fn short_run() -> FlowRun {
        let c = vertically_clamped_drop(1.0, 0.8, 64).unwrap();
        let config = FlowConfig {
            n_nodes: 64,
            t_end: 1e-3,
            bc: BoundaryCondition::Clamped,
            clamped_data: Some(vertical_clamp_data()),
            frame_every: 20,
            ..Default::default()
        };
        run(&config, &c).unwrap()
    }

    #[test]
    fn archive_round_trip_is_exact() {
        let r = short_run();
        let dir = tempfile::tempdir().unwrap();
        let summary = RunSummary::new(&r, "test", None);
        let prov = Provenance { tool_version: "x".into(), wall_time_seconds: 0.5, command: vec![] };
        write_archive(dir.path(), &r, &summary, &prov).unwrap();
        let back = read_archive(dir.path()).unwrap();
        assert_eq!(back.summary, summary);
        assert_eq!(back.run, r);
    }

    #[test]
    fn corrupt_energies_name_the_file() {
        let r = short_run();
        let dir = tempfile::tempdir().unwrap();
        let prov = Provenance { tool_version: "x".into(), wall_time_seconds: 0.0, command: vec![] };
        write_archive(dir.path(), &r, &RunSummary::new(&r, "test", None), &prov).unwrap();
        std::fs::write(dir.path().join(ENERGIES_FILE), "frame,step\n0,zero\n").unwrap();
        let err = read_archive(dir.path()).unwrap_err().to_string();
        assert!(err.contains(ENERGIES_FILE), "{err}");
    }
}
