//! Command-line front end.
//!
//! Each subcommand has a typed parameter struct with defaults. A JSON config
//! file is merged over the defaults, then `--set key=value` overrides (dotted
//! keys reach nested fields, values parse as JSON or fall back to strings),
//! and the result is deserialized strictly so unknown or mistyped keys fail.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::correlator::{wightman_ee, wightman_ee_euclidean, wightman_ee_residue, SpacetimeInterval};
use crate::detector1d::{excitation_rate_exact, excitation_rate_smallv, excitation_rate_weak_g, DetectorSpec1D};
use crate::detector3d::{
    cutoff_prefactor, eta_min, excitation_rate_3d_cutoff, excitation_rate_3d_exact, rate_to_si, CutoffSpec,
    DetectorSpec3D,
};
use crate::error::{Error, Result};
use crate::experiment::hydrogen::hydrogen_dipole_2s3p;
use crate::experiment::planner::{plan_batch, plan_experiment, ExperimentScenario, MediumInput, ScenarioConfig};
use crate::quadrature::QuadratureConfig;
use crate::surface::{beam_average_suppression, efolding_length, min_velocity, min_velocity_nonrelativistic, suppression_at_distance};
use crate::units::UnitSystem;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "GINZBURG_THREADS";

pub mod exit {
    pub const OK: i32 = 0;
    pub const OTHER: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const NOT_CONVERGED: i32 = 3;
    pub const INFEASIBLE: i32 = 4;
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_)
        | Error::Domain(_)
        | Error::InvalidMedium(_)
        | Error::Units(_)
        | Error::OpticalData { .. }
        | Error::Json(_)
        | Error::Csv(_)
        | Error::Calibration(_)
        | Error::Coincidence => exit::CONFIG,
        Error::NotConverged(_) => exit::NOT_CONVERGED,
        Error::Infeasible(_) | Error::ResonanceSingularity { .. } | Error::MediumCone => exit::INFEASIBLE,
        Error::Io(_) => exit::OTHER,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Dispersion,
    Correlator,
    Rate1d,
    Rate3d,
    Surface,
    Experiment,
    Sweep,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Dispersion => "dispersion",
            Command::Correlator => "correlator",
            Command::Rate1d => "rate1d",
            Command::Rate3d => "rate3d",
            Command::Surface => "surface",
            Command::Experiment => "experiment",
            Command::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct CommonArgs {
    /// JSON parameter file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Parameter override, repeatable: --set key=value (dotted keys allowed).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Also write a plot-ready CSV (x column plus one column per series).
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// n(κ), k(κ) and phase velocity of the medium.
    Dispersion(CommonArgs),
    /// E-field Wightman function on a (Δt, Δx) grid.
    Correlator(CommonArgs),
    /// 1D detector rates against velocity.
    Rate1d(CommonArgs),
    /// 3D detector rate with optional cutoff.
    Rate3d(CommonArgs),
    /// Evanescent lengths, threshold velocity and suppression factors.
    Surface(CommonArgs),
    /// End-to-end count-rate estimate for a beam scenario.
    Experiment(CommonArgs),
    /// Experiment planner over a velocity grid.
    Sweep(CommonArgs),
}

#[derive(Debug, Parser)]
#[command(name = "ginzburg", version, about = "Correlators, detector rates and experiment planning for a dissipative dielectric")]
struct Cli {
    #[command(subcommand)]
    sub: Sub,
}

/// A parsed invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub args: CommonArgs,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig { command, args: CommonArgs::default() }
    }

    pub fn with_set(mut self, kv: &str) -> Self {
        self.args.overrides.push(kv.to_string());
        self
    }

    pub fn with_format(mut self, f: Format) -> Self {
        self.args.format = f;
        self
    }

    pub fn with_out(mut self, p: impl Into<PathBuf>) -> Self {
        self.args.out = Some(p.into());
        self
    }

    pub fn with_config(mut self, p: impl Into<PathBuf>) -> Self {
        self.args.config = Some(p.into());
        self
    }
}

// ---------------------------------------------------------------- parameters

fn silicon() -> MediumInput {
    MediumInput::Calibrated { omega_res: 3.3, n0: 3.4, n_res_real: 6.8 }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DispersionParams {
    pub medium: MediumInput,
    #[serde(rename = "kappa_min_eV")]
    pub kappa_min: f64,
    #[serde(rename = "kappa_max_eV")]
    pub kappa_max: f64,
    pub points: usize,
}

impl Default for DispersionParams {
    fn default() -> Self {
        DispersionParams { medium: silicon(), kappa_min: 0.1, kappa_max: 8.0, points: 80 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrelatorMethod {
    Direct,
    Residue,
    Euclidean,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrelatorParams {
    pub medium: MediumInput,
    /// Δt values (eV⁻¹); the grid is the product with `dx`.
    pub dt: Vec<f64>,
    pub dx: Vec<f64>,
    pub method: CorrelatorMethod,
    pub quadrature: QuadratureConfig,
}

impl Default for CorrelatorParams {
    fn default() -> Self {
        CorrelatorParams {
            medium: MediumInput::Params(crate::medium::MediumParams::new(1.0, 0.5, 0.4).expect("valid")),
            dt: vec![0.0, 0.3],
            dx: vec![0.5, 1.0, 2.0],
            method: CorrelatorMethod::Residue,
            quadrature: QuadratureConfig::default().with_tolerances(1e-8, 1e-12),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rate1dParams {
    pub medium: MediumInput,
    #[serde(rename = "gap_eV")]
    pub gap: f64,
    pub lambda: f64,
    pub velocities: Vec<f64>,
    pub quadrature: QuadratureConfig,
}

impl Default for Rate1dParams {
    fn default() -> Self {
        Rate1dParams {
            medium: MediumInput::Params(crate::medium::MediumParams::new(1.0, 0.3, 0.004).expect("valid")),
            gap: 0.5,
            lambda: 1.0,
            velocities: vec![0.001, 0.002, 0.005, 0.01],
            quadrature: QuadratureConfig::default().with_tolerances(1e-8, 1e-300),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rate3dParams {
    pub medium: MediumInput,
    #[serde(rename = "gap_eV")]
    pub gap: f64,
    /// Defaults to the hydrogen 2s → 3p elements.
    #[serde(rename = "dipoles_ea0", default)]
    pub dipoles: Option<[f64; 3]>,
    #[serde(rename = "velocity_c")]
    pub velocity: f64,
    #[serde(rename = "cutoff_eV", default)]
    pub cutoff: Option<f64>,
    pub units: UnitSystem,
    /// Evaluate the full (κ, η) integral instead of the closed form.
    pub exact: bool,
    pub quadrature: QuadratureConfig,
}

impl Default for Rate3dParams {
    fn default() -> Self {
        Rate3dParams {
            medium: silicon(),
            gap: 1.9,
            dipoles: None,
            velocity: 0.25,
            cutoff: Some(22.4),
            units: UnitSystem::Si,
            exact: false,
            quadrature: QuadratureConfig::default().with_tolerances(1e-6, 1e-300),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceParams {
    pub medium: MediumInput,
    #[serde(rename = "gap_eV")]
    pub gap: f64,
    #[serde(rename = "cutoff_eV")]
    pub cutoff: f64,
    #[serde(rename = "k_z_eV")]
    pub k_z: Vec<f64>,
    pub distances_nm: Vec<f64>,
    pub hole_radii_mm: Vec<f64>,
}

impl Default for SurfaceParams {
    fn default() -> Self {
        SurfaceParams {
            medium: silicon(),
            gap: 1.9,
            cutoff: 22.4,
            k_z: vec![5.0, 10.0, 15.0, 22.4, 30.0],
            distances_nm: vec![0.0, 2.0, 5.0, 9.0, 20.0],
            hole_radii_mm: vec![0.1, 0.5, 1.0],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VelocityGrid {
    pub from: f64,
    pub to: f64,
    pub step: f64,
}

impl VelocityGrid {
    pub fn values(&self) -> Result<Vec<f64>> {
        if !(self.step > 0.0) || !(self.to >= self.from) {
            return Err(Error::Config(format!("bad velocity grid {self:?}")));
        }
        let n = ((self.to - self.from) / self.step + 1e-9).floor() as usize + 1;
        Ok((0..n).map(|i| self.from + i as f64 * self.step).collect())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepParams {
    pub scenario: ScenarioConfig,
    pub velocity: VelocityGrid,
}

impl Default for SweepParams {
    fn default() -> Self {
        SweepParams {
            scenario: ScenarioConfig::paper_default(),
            velocity: VelocityGrid { from: 0.20, to: 0.30, step: 0.01 },
        }
    }
}

// ------------------------------------------------------------ config merging

fn merge(base: &mut Value, over: Value) {
    match (base, over) {
        (Value::Object(b), Value::Object(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) if slot.is_object() && v.is_object() => merge(slot, v),
                    _ => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (b, o) => *b = o,
    }
}

fn apply_override(root: &mut Value, kv: &str) -> Result<()> {
    let (key, raw) = kv
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override {kv:?} is not key=value")))?;
    if key.is_empty() {
        return Err(Error::Config(format!("override {kv:?} has an empty key")));
    }
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut node = root;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let obj = node
            .as_object_mut()
            .ok_or_else(|| Error::Config(format!("override {key:?}: {part:?} is not inside an object")))?;
        if i + 1 == parts.len() {
            obj.insert(part.to_string(), value);
            return Ok(());
        }
        node = obj.entry(part.to_string()).or_insert_with(|| Value::Object(Map::new()));
        if node.is_null() {
            *node = Value::Object(Map::new());
        }
    }
    Ok(())
}

/// Defaults ← config file ← overrides, then strict deserialization.
pub fn resolve_params<P: Serialize + DeserializeOwned + Default>(args: &CommonArgs) -> Result<P> {
    let mut v = serde_json::to_value(P::default())?;
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let file: Value =
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        merge(&mut v, file);
    }
    for kv in &args.overrides {
        apply_override(&mut v, kv)?;
    }
    serde_json::from_value(v).map_err(|e| Error::Config(format!("parameters: {e}")))
}

// ------------------------------------------------------------------- output

/// A computed table: column names plus rows, or a JSON document.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub json: Value,
    /// Converged flag over every row.
    pub converged: bool,
    /// Physics said no (e.g. below threshold); output is still written.
    pub infeasible: bool,
}

impl Output {
    fn table(columns: &[&str], rows: Vec<Vec<String>>, json: Value) -> Self {
        Output {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows,
            json,
            converged: true,
            infeasible: false,
        }
    }
}

fn num(x: f64) -> String {
    format!("{x:?}")
}

/// Renders the output with a provenance header.
pub fn render(command: Command, params: &Value, out: &Output, format: Format) -> Result<String> {
    let mut s = String::new();
    match format {
        Format::Csv => {
            s.push_str(&format!("# ginzburg {VERSION}\n# subcommand: {}\n", command.name()));
            s.push_str(&format!("# parameters: {}\n", serde_json::to_string(params)?));
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&out.columns)?;
            for r in &out.rows {
                w.write_record(r)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
            s.push_str(&String::from_utf8(bytes).expect("csv output is UTF-8"));
        }
        Format::Json => {
            let doc = json!({
                "provenance": {"tool": "ginzburg", "version": VERSION, "subcommand": command.name(), "parameters": params},
                "result": out.json,
            });
            s.push_str(&serde_json::to_string_pretty(&doc)?);
            s.push('\n');
        }
    }
    Ok(s)
}

/// CSV with the x column followed by one column per series.
pub fn emit_plot_data<W: Write>(x_label: &str, x: &[f64], series: &[(&str, Vec<f64>)], w: W) -> Result<()> {
    for (label, ys) in series {
        if ys.len() != x.len() {
            return Err(Error::Domain(format!("series {label:?} has {} points, x has {}", ys.len(), x.len())));
        }
    }
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec![x_label.to_string()];
    header.extend(series.iter().map(|(l, _)| l.to_string()));
    out.write_record(&header)?;
    if !series.is_empty() {
        for (i, xi) in x.iter().enumerate() {
            let mut rec = vec![num(*xi)];
            rec.extend(series.iter().map(|(_, ys)| num(ys[i])));
            out.write_record(&rec)?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn emit_plot_file(path: &Path, x_label: &str, x: &[f64], series: &[(&str, Vec<f64>)]) -> Result<()> {
    let f = std::fs::File::create(path)?;
    emit_plot_data(x_label, x, series, std::io::BufWriter::new(f))
}

// --------------------------------------------------------------- subcommands

fn run_dispersion(p: &DispersionParams) -> Result<Output> {
    let m = p.medium.resolve()?;
    if p.points < 2 || !(p.kappa_max > p.kappa_min) || !(p.kappa_min >= 0.0) {
        return Err(Error::Config("dispersion needs points >= 2 and 0 <= kappa_min < kappa_max".into()));
    }
    let mut rows = Vec::new();
    let mut js = Vec::new();
    for i in 0..p.points {
        let kappa = p.kappa_min + (p.kappa_max - p.kappa_min) * i as f64 / (p.points - 1) as f64;
        let n = m.refractive_index(kappa)?;
        let k = m.complex_wavenumber(kappa)?;
        let vp = m.phase_velocity(kappa)?;
        rows.push(vec![num(kappa), num(n.re), num(n.im), num(k.re), num(k.im), num(vp)]);
        js.push(json!({"kappa": kappa, "n_re": n.re, "n_im": n.im, "k_re": k.re, "k_im": k.im, "phase_velocity": vp}));
    }
    Ok(Output::table(&["kappa_eV", "n_re", "n_im", "k_re_eV", "k_im_eV", "phase_velocity_c"], rows, Value::Array(js)))
}

fn run_correlator(p: &CorrelatorParams) -> Result<Output> {
    let m = p.medium.resolve()?;
    p.quadrature.validate()?;
    let grid: Vec<(f64, f64)> = p.dt.iter().flat_map(|&t| p.dx.iter().map(move |&x| (t, x))).collect();
    let vals = grid
        .par_iter()
        .map(|&(t, x)| {
            let iv = SpacetimeInterval::new(t, x)?;
            match p.method {
                CorrelatorMethod::Direct => wightman_ee(&iv, &m, &p.quadrature),
                CorrelatorMethod::Residue => wightman_ee_residue(&iv, &m, &p.quadrature),
                CorrelatorMethod::Euclidean => {
                    let w = wightman_ee_euclidean(&iv, &m, &p.quadrature)?;
                    Ok(crate::quadrature::RegulatedValue {
                        value: num_complex::Complex64::new(w, 0.0),
                        epsilon_used: 0.0,
                        error: 0.0,
                        converged: true,
                    })
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = Output::table(&["dt", "dx", "re_w", "im_w", "eps_used", "converged"], Vec::new(), Value::Null);
    let mut js = Vec::new();
    for (&(t, x), w) in grid.iter().zip(&vals) {
        out.converged &= w.converged;
        out.rows.push(vec![num(t), num(x), num(w.value.re), num(w.value.im), num(w.epsilon_used), w.converged.to_string()]);
        js.push(json!({"dt": t, "dx": x, "re_w": w.value.re, "im_w": w.value.im, "eps_used": w.epsilon_used, "error": w.error, "converged": w.converged}));
    }
    out.json = Value::Array(js);
    Ok(out)
}

fn run_rate1d(p: &Rate1dParams) -> Result<Output> {
    let m = p.medium.resolve()?;
    p.quadrature.validate()?;
    let rows = p
        .velocities
        .par_iter()
        .map(|&v| {
            let d = DetectorSpec1D::new(p.gap, p.lambda, v)?;
            Ok((
                v,
                excitation_rate_exact(&d, &m, &p.quadrature)?,
                excitation_rate_smallv(&d, &m, &p.quadrature)?,
                excitation_rate_weak_g(&d, &m)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = Output::table(
        &["v", "omega", "rate_exact", "rate_smallv", "rate_weakG", "err_estimate"],
        Vec::new(),
        Value::Null,
    );
    let mut js = Vec::new();
    for (v, e, s, w) in rows {
        out.converged &= e.converged && s.converged;
        out.rows.push(vec![num(v), num(p.gap), num(e.value), num(s.value), num(w.value), num(e.error_estimate)]);
        js.push(json!({"v": v, "omega": p.gap, "exact": e, "small_velocity": s, "weak_dissipation": w}));
    }
    out.json = Value::Array(js);
    Ok(out)
}

fn run_rate3d(p: &Rate3dParams) -> Result<Output> {
    let m = p.medium.resolve()?;
    let dipoles = p.dipoles.unwrap_or_else(|| hydrogen_dipole_2s3p().dipoles);
    let d = DetectorSpec3D::new(p.gap, dipoles, p.velocity)?;
    let cut = match p.cutoff {
        Some(k) => CutoffSpec::at(k)?,
        None => CutoffSpec::none(),
    };
    let rate = if p.exact {
        excitation_rate_3d_exact(&d, &m, &cut, &p.quadrature)?
    } else {
        excitation_rate_3d_cutoff(&d, &m, &cut)?
    };
    let si = rate_to_si(&rate, p.velocity)?;
    let (eta, pre) = match (p.cutoff, p.velocity != 0.0) {
        (Some(k), true) => {
            let e = eta_min(p.gap, &m, p.velocity, k)?;
            (e, cutoff_prefactor(e))
        }
        _ => (f64::NAN, f64::NAN),
    };
    let value = match p.units {
        UnitSystem::NaturalEv => rate.value,
        UnitSystem::Si => si.per_second,
    };
    let per_cm = si.per_cm.unwrap_or(f64::NAN);
    let mut out = Output::table(
        &["v", "gap_eV", "k_max_eV", "eta_min", "cutoff_prefactor", "rate", "rate_units", "rate_per_cm", "method", "converged"],
        Vec::new(),
        Value::Null,
    );
    let unit_label = match p.units {
        UnitSystem::NaturalEv => "eV",
        UnitSystem::Si => "1/s",
    };
    let method = serde_json::to_value(rate.method)?.as_str().unwrap_or("").to_string();
    out.converged = rate.converged;
    out.rows.push(vec![
        num(p.velocity),
        num(p.gap),
        num(p.cutoff.unwrap_or(f64::NAN)),
        num(eta),
        num(pre),
        num(value),
        unit_label.into(),
        num(per_cm),
        method,
        rate.converged.to_string(),
    ]);
    out.json = json!({
        "rate": rate, "rate_per_s": si.per_second, "rate_per_cm": si.per_cm,
        "eta_min": p.cutoff.map(|_| eta), "cutoff_prefactor": p.cutoff.map(|_| pre), "dipoles_ea0": dipoles,
    });
    Ok(out)
}

fn run_surface(p: &SurfaceParams) -> Result<Output> {
    let m = p.medium.resolve()?;
    let mut rows = Vec::new();
    let mut ells = Vec::new();
    for &k in &p.k_z {
        let l = efolding_length(k, &m)?;
        rows.push(vec!["efolding_length_nm".into(), num(k), num(l)]);
        ells.push(json!({"k_z": k, "ell_nm": l}));
    }
    let v_min = min_velocity(p.gap, &m, p.cutoff)?;
    let v_nr = min_velocity_nonrelativistic(p.gap, &m, p.cutoff)?;
    rows.push(vec!["v_min".into(), num(p.cutoff), num(v_min)]);
    rows.push(vec!["v_min_nonrelativistic".into(), num(p.cutoff), num(v_nr)]);
    let ell = efolding_length(p.cutoff, &m)?;
    let mut plate = Vec::new();
    for &d in &p.distances_nm {
        let s = suppression_at_distance(d, ell)?;
        rows.push(vec!["plate_suppression".into(), num(d), num(s)]);
        plate.push(json!({"distance_nm": d, "suppression": s}));
    }
    let mut hole = Vec::new();
    for &r in &p.hole_radii_mm {
        let s = beam_average_suppression(r, ell)?;
        rows.push(vec!["hole_suppression".into(), num(r), num(s)]);
        hole.push(json!({"radius_mm": r, "suppression": s}));
    }
    let js = json!({
        "efolding": ells, "v_min": v_min, "v_min_nonrelativistic": v_nr, "ell_at_cutoff_nm": ell,
        "plate": plate, "hole": hole,
    });
    Ok(Output::table(&["quantity", "x", "value"], rows, js))
}

fn run_experiment(p: &ScenarioConfig, base: Option<&Path>) -> Result<Output> {
    let (s, fit) = p.resolve(base)?;
    let r = plan_experiment(&s)?;
    let cols: Vec<&str> = crate::experiment::PlanReport::CSV_HEADER.split(',').collect();
    let row = r.csv_row().split(',').map(str::to_string).collect();
    let mut out = Output::table(&cols, vec![row], json!({"report": r, "fit": fit}));
    out.infeasible = !r.feasible;
    Ok(out)
}

fn run_sweep(p: &SweepParams, base: Option<&Path>, plot: Option<&Path>) -> Result<Output> {
    let (s, _) = p.scenario.resolve(base)?;
    let scenarios = p
        .velocity
        .values()?
        .into_iter()
        .map(|v| Ok(ExperimentScenario { detector: s.detector.with_velocity(v)?, ..s }))
        .collect::<Result<Vec<_>>>()?;
    let reports = plan_batch(&scenarios).into_iter().collect::<Result<Vec<_>>>()?;
    let cols: Vec<&str> = crate::experiment::PlanReport::CSV_HEADER.split(',').collect();
    let rows = reports.iter().map(|r| r.csv_row().split(',').map(str::to_string).collect()).collect();
    if let Some(path) = plot {
        let x: Vec<f64> = reports.iter().map(|r| r.scenario.detector.velocity).collect();
        let series = [
            ("bulk_rate_per_cm", reports.iter().map(|r| r.bulk_rate_per_cm).collect()),
            ("excited_per_s_per_cm", reports.iter().map(|r| r.excited_per_s_per_cm).collect()),
        ];
        emit_plot_file(path, "velocity_c", &x, &series)?;
    }
    Ok(Output::table(&cols, rows, serde_json::to_value(&reports)?))
}

/// Resolved parameters and computed output for an invocation.
pub fn execute(cfg: &RunConfig) -> Result<(Value, Output)> {
    let a = &cfg.args;
    let base = a.config.as_deref().and_then(Path::parent);
    let plot = a.plot.as_deref();
    fn go<P: Serialize + DeserializeOwned + Default>(a: &CommonArgs, f: impl FnOnce(&P) -> Result<Output>) -> Result<(Value, Output)> {
        let p: P = resolve_params(a)?;
        let out = f(&p)?;
        Ok((serde_json::to_value(&p)?, out))
    }
    match cfg.command {
        Command::Dispersion => go(a, run_dispersion),
        Command::Correlator => go(a, run_correlator),
        Command::Rate1d => go(a, run_rate1d),
        Command::Rate3d => go(a, run_rate3d),
        Command::Surface => go(a, run_surface),
        Command::Experiment => go(a, |p: &ScenarioWrapper| run_experiment(&p.0, base)),
        Command::Sweep => go(a, |p: &SweepParams| run_sweep(p, base, plot)),
    }
}

/// The experiment parameters are the scenario document itself.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(transparent)]
struct ScenarioWrapper(ScenarioConfig);

impl Default for ScenarioWrapper {
    fn default() -> Self {
        ScenarioWrapper(ScenarioConfig::paper_default())
    }
}

/// Runs an invocation, writing output only when the computation succeeded.
/// Returns the exit status.
pub fn run(cfg: &RunConfig) -> i32 {
    let result = execute(cfg).and_then(|(params, out)| {
        let text = render(cfg.command, &params, &out, cfg.args.format)?;
        match &cfg.args.out {
            Some(p) => std::fs::write(p, text)?,
            None => std::io::stdout().write_all(text.as_bytes())?,
        }
        Ok(out)
    });
    match result {
        Ok(out) if !out.converged => {
            eprintln!("warning: some values did not converge");
            exit::NOT_CONVERGED
        }
        Ok(out) if out.infeasible => {
            eprintln!("infeasible: detector below the excitation threshold");
            exit::INFEASIBLE
        }
        Ok(_) => exit::OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .parse()
            .map_err(|_| Error::Config(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs. Returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::CONFIG } else { exit::OK };
            let _ = e.print();
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return exit::CONFIG;
    }
    let (command, args) = match cli.sub {
        Sub::Dispersion(a) => (Command::Dispersion, a),
        Sub::Correlator(a) => (Command::Correlator, a),
        Sub::Rate1d(a) => (Command::Rate1d, a),
        Sub::Rate3d(a) => (Command::Rate3d, a),
        Sub::Surface(a) => (Command::Surface, a),
        Sub::Experiment(a) => (Command::Experiment, a),
        Sub::Sweep(a) => (Command::Sweep, a),
    };
    run(&RunConfig { command, args })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn csv_rows(text: &str) -> Vec<Vec<String>> {
        let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
        csv::Reader::from_reader(body.as_bytes())
            .records()
            .map(|r| r.unwrap().iter().map(str::to_string).collect())
            .collect()
    }

    #[test]
    fn overrides_are_typed_and_dotted() {
        let a = CommonArgs { overrides: vec!["gap_eV=2.0".into(), "medium.n0=3.5".into()], ..Default::default() };
        let p: Rate3dParams = resolve_params(&a).unwrap();
        assert_eq!(p.gap, 2.0);
        assert!(matches!(p.medium, MediumInput::Calibrated { n0, .. } if n0 == 3.5));
        let bad = CommonArgs { overrides: vec!["gap_eV=fast".into()], ..Default::default() };
        assert!(matches!(resolve_params::<Rate3dParams>(&bad), Err(Error::Config(_))));
        let unknown = CommonArgs { overrides: vec!["colour=red".into()], ..Default::default() };
        assert!(resolve_params::<Rate3dParams>(&unknown).is_err());
        let malformed = CommonArgs { overrides: vec!["gap_eV".into()], ..Default::default() };
        assert!(resolve_params::<Rate3dParams>(&malformed).is_err());
    }

    #[test]
    fn config_file_merges_under_overrides() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(&path, r#"{"gap_eV": 1.5, "velocity_c": 0.3}"#).unwrap();
        let a = CommonArgs { config: Some(path), overrides: vec!["velocity_c=0.28".into()], ..Default::default() };
        let p: Rate3dParams = resolve_params(&a).unwrap();
        assert_eq!((p.gap, p.velocity), (1.5, 0.28));
    }

    #[test]
    fn rate3d_default_row_has_per_cm_rate() {
        let (params, out) = execute(&RunConfig::new(Command::Rate3d)).unwrap();
        let text = render(Command::Rate3d, &params, &out, Format::Csv).unwrap();
        assert!(text.starts_with(&format!("# ginzburg {VERSION}")));
        let rows = csv_rows(&text);
        assert_eq!(rows.len(), 1);
        let per_cm: f64 = rows[0][7].parse().unwrap();
        assert!(per_cm > 1e-5 && per_cm < 1e-2);
    }

    #[test]
    fn sweep_rows_are_monotone_and_ordered() {
        let (_, out) = execute(&RunConfig::new(Command::Sweep)).unwrap();
        assert_eq!(out.rows.len(), 11);
        let v: Vec<f64> = out.rows.iter().map(|r| r[0].parse().unwrap()).collect();
        assert!(v.windows(2).all(|w| w[1] > w[0]));
        let rate: Vec<f64> = out.rows.iter().map(|r| r[6].parse().unwrap()).collect();
        assert!(rate.windows(2).all(|w| w[1] >= w[0]));
        assert_eq!(rate[0], 0.0);
        assert!(rate[10] > 0.0);
    }

    #[test]
    fn outputs_are_byte_identical_across_runs() {
        for cmd in [Command::Dispersion, Command::Surface, Command::Rate3d, Command::Sweep, Command::Experiment] {
            for f in [Format::Csv, Format::Json] {
                let cfg = RunConfig::new(cmd).with_format(f);
                let (p1, o1) = execute(&cfg).unwrap();
                let (p2, o2) = execute(&cfg).unwrap();
                assert_eq!(render(cmd, &p1, &o1, f).unwrap(), render(cmd, &p2, &o2, f).unwrap());
            }
        }
    }

    #[test]
    fn exit_codes() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("o.csv");
        let o = out.to_str().unwrap();
        assert_eq!(main_with_args(["ginzburg", "rate3d", "--bogus", "--out", o]), exit::CONFIG);
        assert!(!out.exists());
        assert_eq!(main_with_args(["ginzburg", "rate3d", "--set", "gap_eV=x", "--out", o]), exit::CONFIG);
        assert!(!out.exists());
        assert_eq!(main_with_args(["ginzburg", "surface", "--set", "cutoff_eV=3.0", "--out", o]), exit::INFEASIBLE);
        assert!(!out.exists());
        assert_eq!(main_with_args(["ginzburg", "experiment", "--set", "detector.velocity_c=0.2", "--out", o]), exit::INFEASIBLE);
        assert!(out.exists());
        assert_eq!(main_with_args(["ginzburg", "rate3d", "--out", o]), exit::OK);
    }

    #[test]
    fn plot_data_shapes() {
        let mut buf = Vec::new();
        emit_plot_data("x", &[], &[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "x\n");
        let mut buf = Vec::new();
        emit_plot_data("x", &[1.0, 2.0, 3.0], &[("y", vec![2.0, 4.0, 6.0])], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 4);
        assert!(emit_plot_data("x", &[1.0], &[("y", vec![])], Vec::new()).is_err());
    }

    #[test]
    fn velocity_grid_count() {
        let g = VelocityGrid { from: 0.2, to: 0.3, step: 0.01 };
        assert_eq!(g.values().unwrap().len(), 11);
        assert!(VelocityGrid { from: 0.3, to: 0.2, step: 0.01 }.values().is_err());
    }

    #[test]
    fn units_label_tracks_choice() {
        let cfg = RunConfig::new(Command::Rate3d).with_set("units=\"natural_ev\"");
        let (_, out) = execute(&cfg).unwrap();
        assert_eq!(out.rows[0][6], "eV");
        let natural: f64 = out.rows[0][5].parse().unwrap();
        let (_, si) = execute(&RunConfig::new(Command::Rate3d)).unwrap();
        let per_s: f64 = si.rows[0][5].parse().unwrap();
        assert!((crate::units::energy_to_angular_frequency(natural) - per_s).abs() <= 1e-12 * per_s);
    }
}
