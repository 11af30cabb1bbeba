//! Fidelity sweeps over dissipation rate, decoupling order and coherent
//! amplitude, engine cross-validation and phase-space path dumps.
//!
//! Every grid point starts from `|00⟩⟨00| ⊗ |β⟩⟨β|`, runs the order-`k`
//! symmetrized sequence for the configured phase and scores the reduced state
//! against `exp(−iφJ_y²)|00⟩`. Points are independent and evaluated in parallel;
//! results are reassembled in grid order, so output is identical across runs.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{evolve_reduced, ReducedPropagationInput};
use crate::error::{invalid, Error, Result};
use crate::fock;
use crate::joint::JointState;
use crate::oracle::{self, IntegratorConfig};
use crate::pulse::{
    circular_circuit, path_to_csv, step_circuit, symmetrized_sequence, CircuitKind, Orientation, SequenceSpec,
    MAX_ORDER,
};
use crate::qubit::{gate_fidelity_for, QubitState, ENTANGLING_PHASE};

/// Shape-check slack for fidelity comparisons.
pub const SHAPE_SLACK: f64 = 1e-9;
/// Default engine-agreement tolerance on `|ΔF|` and reduced-state elements.
pub const CROSS_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Analytic,
    Oracle,
    Both,
}

impl Engine {
    fn runs_analytic(self) -> bool {
        matches!(self, Engine::Analytic | Engine::Both)
    }

    fn runs_oracle(self) -> bool {
        matches!(self, Engine::Oracle | Engine::Both)
    }
}

impl std::str::FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(Engine::Analytic),
            "oracle" => Ok(Engine::Oracle),
            "both" => Ok(Engine::Both),
            other => Err(invalid("engine", format!("expected analytic|oracle|both, got `{other}`"))),
        }
    }
}

/// 21 evenly spaced ratios on `[0, 0.1]`.
pub fn default_kappa_grid() -> Vec<f64> {
    (0..=20).map(|i| i as f64 * 0.005).collect()
}

/// Sweep description; every field has a default so partial files are accepted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// Dissipation rates in units of the drive amplitude.
    pub kappa_over_alpha0: Vec<f64>,
    /// Decoupling orders; order `k` uses `2^k` circuits.
    pub orders: Vec<u32>,
    /// Coherent amplitudes as `[re, im]`.
    pub betas: Vec<[f64; 2]>,
    /// Target phase `φ` of `exp(−iφJ_y²)`.
    pub phase: f64,
    pub circuit: CircuitKind,
    /// Drive amplitude; sets the time unit.
    pub alpha0: f64,
    pub engine: Engine,
    /// Extra Fock levels above the truncation rule for the oracle.
    pub fock_margin: usize,
    /// Fixed Fock dimension overriding the truncation rule.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fock_dim: Option<usize>,
    /// Largest allowed engine disagreement.
    pub cross_tolerance: f64,
    pub integrator: IntegratorConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            kappa_over_alpha0: default_kappa_grid(),
            orders: vec![0, 1, 2],
            betas: vec![[2.0, 0.0], [5.0, 0.0]],
            phase: ENTANGLING_PHASE,
            circuit: CircuitKind::Step,
            alpha0: 1.0,
            engine: Engine::Analytic,
            fock_margin: 0,
            fock_dim: None,
            cross_tolerance: CROSS_TOLERANCE,
            integrator: IntegratorConfig::default(),
        }
    }
}

impl SweepConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("sweep config is always representable")
    }

    pub fn validate(&self) -> Result<()> {
        if self.kappa_over_alpha0.is_empty() || self.orders.is_empty() || self.betas.is_empty() {
            return Err(Error::Config("kappa_over_alpha0, orders and betas must be non-empty".into()));
        }
        if let Some(bad) = self.kappa_over_alpha0.iter().find(|k| !(k.is_finite() && **k >= 0.0)) {
            return Err(invalid("kappa_over_alpha0", format!("must be finite and >= 0, got {bad}")));
        }
        if let Some(bad) = self.orders.iter().find(|&&k| k > MAX_ORDER) {
            return Err(invalid("orders", format!("order {bad} exceeds {MAX_ORDER}")));
        }
        if self.betas.iter().flatten().any(|x| !x.is_finite()) {
            return Err(invalid("betas", "must be finite"));
        }
        if !(self.phase.is_finite() && self.phase > 0.0) {
            return Err(invalid("phase", format!("must be > 0, got {}", self.phase)));
        }
        if !(self.alpha0.is_finite() && self.alpha0 > 0.0) {
            return Err(invalid("alpha0", format!("must be > 0, got {}", self.alpha0)));
        }
        if !(self.cross_tolerance.is_finite() && self.cross_tolerance > 0.0) {
            return Err(invalid("cross_tolerance", format!("must be > 0, got {}", self.cross_tolerance)));
        }
        if self.fock_dim == Some(0) {
            return Err(invalid("fock_dim", "must be >= 1"));
        }
        self.integrator.validate()
    }

    /// Fock dimension the oracle uses for amplitude `beta`.
    pub fn fock_dim_for(&self, beta: C64) -> usize {
        self.fock_dim.unwrap_or_else(|| fock::min_fock_dim(beta) + self.fock_margin)
    }

    /// Grid in output order: `betas` as listed, then ascending `k` and `κ/α₀`.
    fn grid(&self) -> Vec<(C64, u32, f64)> {
        let mut orders = self.orders.clone();
        orders.sort_unstable();
        orders.dedup();
        let mut kappas = self.kappa_over_alpha0.clone();
        kappas.sort_by(f64::total_cmp);
        kappas.dedup();
        let mut out = Vec::new();
        for b in &self.betas {
            for &k in &orders {
                for &r in &kappas {
                    out.push((C64::new(b[0], b[1]), k, r));
                }
            }
        }
        out
    }

    fn header(&self) -> String {
        let mut out = String::from("# symgate sweep\n");
        for line in self.to_toml().lines() {
            let _ = writeln!(out, "# {line}");
        }
        out
    }
}

/// One engine's result at one grid point.
#[derive(Debug, Clone)]
pub struct PointOutcome {
    pub fidelity: f64,
    /// Reduced qubit state, computational basis.
    pub state: QubitState,
    pub wall_time: Duration,
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub kappa_ratio: f64,
    pub order: u32,
    pub beta: C64,
    pub analytic: Option<Result<PointOutcome>>,
    pub oracle: Option<Result<PointOutcome>>,
}

impl SweepRow {
    fn both(&self) -> Option<(&PointOutcome, &PointOutcome)> {
        match (&self.analytic, &self.oracle) {
            (Some(Ok(a)), Some(Ok(o))) => Some((a, o)),
            _ => None,
        }
    }

    /// `|F_analytic − F_oracle|` when both engines succeeded.
    pub fn fidelity_delta(&self) -> Option<f64> {
        self.both().map(|(a, o)| (a.fidelity - o.fidelity).abs())
    }

    /// Largest element difference between the two reduced states.
    pub fn max_element_diff(&self) -> Option<f64> {
        self.both().map(|(a, o)| crate::qubit::max_abs(&(a.state.rho - o.state.rho)))
    }

    pub fn errors(&self) -> impl Iterator<Item = (&'static str, &Error)> {
        let a = self.analytic.as_ref().and_then(|r| r.as_ref().err()).map(|e| ("analytic", e));
        let o = self.oracle.as_ref().and_then(|r| r.as_ref().err()).map(|e| ("oracle", e));
        a.into_iter().chain(o)
    }

    fn label(&self) -> String {
        format!("kappa_ratio={} k={} beta={}{:+}i", self.kappa_ratio, self.order, self.beta.re, self.beta.im)
    }
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub config: SweepConfig,
    pub rows: Vec<SweepRow>,
}

fn fmt_f(x: f64) -> String {
    format!("{x:.12}")
}

impl SweepResult {
    /// Fidelity table `kappa_ratio,k,beta_re,beta_im,F,engine`; failed points carry `error:<code>` in `F`.
    pub fn to_csv(&self) -> String {
        let mut out = self.config.header();
        out.push_str("kappa_ratio,k,beta_re,beta_im,F,engine\n");
        for row in &self.rows {
            for (name, cell) in [("analytic", &row.analytic), ("oracle", &row.oracle)] {
                let Some(cell) = cell else { continue };
                let f = match cell {
                    Ok(p) => fmt_f(p.fidelity),
                    Err(e) => format!("error:{}", e.code()),
                };
                let _ = writeln!(
                    out,
                    "{:.6},{},{:.6},{:.6},{},{}",
                    row.kappa_ratio, row.order, row.beta.re, row.beta.im, f, name
                );
            }
        }
        out
    }

    /// `(κ/α₀, F)` for one curve, skipping failed points.
    pub fn curve(&self, engine: Engine, beta: C64, order: u32) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.beta == beta && r.order == order)
            .filter_map(|r| {
                let cell = match engine {
                    Engine::Oracle => &r.oracle,
                    _ => &r.analytic,
                };
                cell.as_ref().and_then(|c| c.as_ref().ok()).map(|p| (r.kappa_ratio, p.fidelity))
            })
            .collect()
    }

    /// Violations of the curve-shape properties: `F = 1` at `κ = 0`, `F`
    /// non-increasing in `κ`, and `F(k+1) ≥ F(k)` at every `κ > 0`.
    pub fn shape_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut orders = self.config.orders.clone();
        orders.sort_unstable();
        orders.dedup();
        for engine in [Engine::Analytic, Engine::Oracle] {
            let ran = match engine {
                Engine::Analytic => self.config.engine.runs_analytic(),
                _ => self.config.engine.runs_oracle(),
            };
            if !ran {
                continue;
            }
            for b in &self.config.betas {
                let beta = C64::new(b[0], b[1]);
                let curves: Vec<(u32, Vec<(f64, f64)>)> =
                    orders.iter().map(|&k| (k, self.curve(engine, beta, k))).collect();
                for (k, curve) in &curves {
                    for &(r, f) in curve {
                        if r == 0.0 && (f - 1.0).abs() > SHAPE_SLACK {
                            out.push(format!("{engine:?} beta={beta} k={k}: F={f} at kappa=0"));
                        }
                    }
                    for w in curve.windows(2) {
                        if w[1].1 > w[0].1 + SHAPE_SLACK {
                            out.push(format!(
                                "{engine:?} beta={beta} k={k}: F rises from {} to {} between kappa {} and {}",
                                w[0].1, w[1].1, w[0].0, w[1].0
                            ));
                        }
                    }
                }
                for pair in curves.windows(2) {
                    let ((k0, lo), (k1, hi)) = (&pair[0], &pair[1]);
                    if k1 != &(k0 + 1) {
                        continue;
                    }
                    for &(r, f_lo) in lo {
                        if r == 0.0 {
                            continue;
                        }
                        if let Some(&(_, f_hi)) = hi.iter().find(|p| p.0 == r) {
                            if f_hi < f_lo - SHAPE_SLACK {
                                out.push(format!(
                                    "{engine:?} beta={beta} kappa={r}: F(k={k1})={f_hi} < F(k={k0})={f_lo}"
                                ));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn failed_points(&self) -> Vec<String> {
        self.rows
            .iter()
            .flat_map(|r| r.errors().map(move |(engine, e)| format!("{} [{engine}]: {e}", r.label())))
            .collect()
    }
}

fn schedule_for(cfg: &SweepConfig, order: u32) -> Result<crate::pulse::PulseSchedule> {
    symmetrized_sequence(&SequenceSpec::new(cfg.circuit, cfg.alpha0, order, cfg.phase)?)
}

fn run_analytic(cfg: &SweepConfig, beta: C64, order: u32, ratio: f64) -> Result<PointOutcome> {
    let start = Instant::now();
    let schedule = schedule_for(cfg, order)?;
    let t = schedule.duration();
    let input =
        ReducedPropagationInput { rho0: QubitState::computational(0)?, beta, schedule, kappa: ratio * cfg.alpha0 };
    let state = evolve_reduced(&input, t)?;
    let fidelity = gate_fidelity_for(cfg.phase, &state)?;
    Ok(PointOutcome { fidelity, state, wall_time: start.elapsed() })
}

fn run_oracle(cfg: &SweepConfig, beta: C64, order: u32, ratio: f64) -> Result<PointOutcome> {
    let start = Instant::now();
    let schedule = schedule_for(cfg, order)?;
    let n = cfg.fock_dim_for(beta);
    let rho0 = JointState::coherent_product(&QubitState::computational(0)?, beta, n)?;
    let prop = oracle::evolve_master(&rho0, &schedule, ratio * cfg.alpha0, &cfg.integrator)?;
    let state = oracle::reduced_state(&prop.state)?;
    let fidelity = gate_fidelity_for(cfg.phase, &state)?;
    Ok(PointOutcome { fidelity, state, wall_time: start.elapsed() })
}

/// Evaluate every grid point with the configured engine(s).
///
/// Engine failures are stored in their row; the sweep itself only fails on an
/// invalid configuration.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let rows = cfg
        .grid()
        .into_par_iter()
        .map(|(beta, order, ratio)| {
            let analytic = cfg.engine.runs_analytic().then(|| run_analytic(cfg, beta, order, ratio));
            let oracle = cfg.engine.runs_oracle().then(|| run_oracle(cfg, beta, order, ratio));
            for e in analytic.iter().chain(oracle.iter()).filter_map(|r| r.as_ref().err()) {
                log::warn!("point kappa_ratio={ratio} k={order} beta={beta} failed: {e}");
            }
            SweepRow { kappa_ratio: ratio, order, beta, analytic, oracle }
        })
        .collect();
    Ok(SweepResult { config: cfg.clone(), rows })
}

/// Per-point engine comparison.
#[derive(Debug, Clone)]
pub struct CrossReport {
    pub sweep: SweepResult,
    pub tolerance: f64,
}

impl CrossReport {
    pub fn max_fidelity_delta(&self) -> f64 {
        self.sweep.rows.iter().filter_map(SweepRow::fidelity_delta).fold(0.0, f64::max)
    }

    pub fn max_element_diff(&self) -> f64 {
        self.sweep.rows.iter().filter_map(SweepRow::max_element_diff).fold(0.0, f64::max)
    }

    /// Points whose disagreement exceeds the tolerance.
    pub fn breaches(&self) -> Vec<String> {
        self.sweep
            .rows
            .iter()
            .filter_map(|r| {
                let (df, de) = (r.fidelity_delta()?, r.max_element_diff()?);
                (df > self.tolerance || de > self.tolerance)
                    .then(|| format!("{}: |dF|={df:.3e} max element diff={de:.3e}", r.label()))
            })
            .collect()
    }

    /// `kappa_ratio,k,beta_re,beta_im,F_analytic,F_oracle,abs_dF,max_element_diff`.
    pub fn to_csv(&self) -> String {
        let mut out = self.sweep.config.header();
        out.push_str("kappa_ratio,k,beta_re,beta_im,F_analytic,F_oracle,abs_dF,max_element_diff\n");
        let cell = |c: &Option<Result<PointOutcome>>| match c {
            Some(Ok(p)) => fmt_f(p.fidelity),
            Some(Err(e)) => format!("error:{}", e.code()),
            None => String::new(),
        };
        let opt = |x: Option<f64>| x.map(|v| format!("{v:.3e}")).unwrap_or_default();
        for r in &self.sweep.rows {
            let _ = writeln!(
                out,
                "{:.6},{},{:.6},{:.6},{},{},{},{}",
                r.kappa_ratio,
                r.order,
                r.beta.re,
                r.beta.im,
                cell(&r.analytic),
                cell(&r.oracle),
                opt(r.fidelity_delta()),
                opt(r.max_element_diff())
            );
        }
        out
    }

    /// First engine error if any point failed, otherwise a breach error if any point disagrees.
    pub fn check(&self) -> Result<()> {
        if let Some((row, (engine, e))) = self.sweep.rows.iter().find_map(|r| r.errors().next().map(|x| (r, x))) {
            log::error!("{} [{engine}] failed", row.label());
            return Err(e.clone());
        }
        let breaches = self.breaches();
        if breaches.is_empty() {
            Ok(())
        } else {
            Err(Error::CrossValidation(breaches.join("; ")))
        }
    }
}

/// Run both engines on the grid without judging the result.
pub fn cross_report(cfg: &SweepConfig) -> Result<CrossReport> {
    if cfg.engine != Engine::Both {
        return Err(invalid("engine", "cross-validation needs engine = \"both\""));
    }
    let sweep = run_sweep(cfg)?;
    Ok(CrossReport { tolerance: cfg.cross_tolerance, sweep })
}

/// Run both engines and fail on any engine error or tolerance breach.
pub fn cross_validate(cfg: &SweepConfig) -> Result<CrossReport> {
    let report = cross_report(cfg)?;
    report.check()?;
    Ok(report)
}

/// Files written by [`emit_paths`] and the end-point gap of each path.
#[derive(Debug, Clone)]
pub struct PathDump {
    pub files: Vec<PathBuf>,
    /// `|ξ₊(T)|` for `C` then `C̄`.
    pub closure_gaps: [f64; 2],
}

/// Write the phase-space path of `C` and `C̄` as `<kind>_C.csv` and `<kind>_Cbar.csv`.
pub fn emit_paths(
    kind: CircuitKind,
    alpha0: f64,
    tau: f64,
    kappa: f64,
    samples: usize,
    dir: &Path,
) -> Result<PathDump> {
    std::fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    let mut gaps = [0.0; 2];
    for (i, o) in [Orientation::Forward, Orientation::Reversed].into_iter().enumerate() {
        let s = match kind {
            CircuitKind::Step => step_circuit(alpha0, tau, o)?,
            CircuitKind::Circular => circular_circuit(alpha0, tau, o)?,
        };
        let path = s.phase_space_path(kappa, samples)?;
        gaps[i] = path.last().map(|p| p.z.norm()).unwrap_or(0.0);
        let file = dir.join(format!("{kind}_{o}.csv"));
        std::fs::write(&file, path_to_csv(&path))?;
        files.push(file);
    }
    Ok(PathDump { files, closure_gaps: gaps })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(engine: Engine) -> SweepConfig {
        SweepConfig {
            kappa_over_alpha0: vec![0.0, 0.05],
            orders: vec![0, 1],
            betas: vec![[0.0, 0.0]],
            engine,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn default_config_round_trips_through_toml() {
        let cfg = SweepConfig::default();
        let back = SweepConfig::from_toml_str(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(cfg.kappa_over_alpha0.len(), 21);
        let partial = SweepConfig::from_toml_str("engine = \"both\"\norders = [1]\n").unwrap();
        assert_eq!(partial.engine, Engine::Both);
        assert_eq!(partial.betas, cfg.betas);
    }

    #[test]
    fn config_validation() {
        assert!(SweepConfig::from_toml_str("phase = -1.0").is_err());
        assert!(SweepConfig::from_toml_str("kappa_over_alpha0 = [-0.1]").is_err());
        assert!(SweepConfig::from_toml_str("unknown = 1").is_err());
        assert!(matches!(SweepConfig::from_toml_str("orders = []"), Err(Error::Config(_))));
    }

    #[test]
    fn analytic_sweep_properties() {
        let cfg = SweepConfig {
            kappa_over_alpha0: vec![0.0, 0.02, 0.05],
            betas: vec![[2.0, 0.0], [5.0, 0.0]],
            ..SweepConfig::default()
        };
        let res = run_sweep(&cfg).unwrap();
        assert_eq!(res.rows.len(), 2 * 3 * 3);
        assert!(res.shape_violations().is_empty(), "{:?}", res.shape_violations());
        for r in &res.rows {
            let f = r.analytic.as_ref().unwrap().as_ref().unwrap().fidelity;
            assert!((0.0..=1.0).contains(&f));
            if r.kappa_ratio == 0.0 {
                assert!((f - 1.0).abs() < 1e-9);
            }
        }
        let f0 = |b: f64| res.curve(Engine::Analytic, C64::new(b, 0.0), 0)[2].1;
        assert!(f0(5.0) < f0(2.0));
    }

    #[test]
    fn rows_follow_grid_order_and_csv_is_deterministic() {
        let cfg = SweepConfig {
            kappa_over_alpha0: vec![0.05, 0.0, 0.01],
            orders: vec![1, 0],
            betas: vec![[2.0, 0.0]],
            ..SweepConfig::default()
        };
        let a = run_sweep(&cfg).unwrap();
        let keys: Vec<(u32, f64)> = a.rows.iter().map(|r| (r.order, r.kappa_ratio)).collect();
        assert_eq!(keys, vec![(0, 0.0), (0, 0.01), (0, 0.05), (1, 0.0), (1, 0.01), (1, 0.05)]);
        let b = run_sweep(&cfg).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        let csv = a.to_csv();
        assert!(csv.lines().any(|l| l == "kappa_ratio,k,beta_re,beta_im,F,engine"));
        assert!(csv.lines().filter(|l| !l.starts_with('#')).count() == 7);
    }

    #[test]
    fn cross_validation_on_small_grid() {
        let report = cross_validate(&small(Engine::Both)).unwrap();
        assert!(report.max_fidelity_delta() < 1e-6);
        let zero = report.sweep.rows.iter().filter(|r| r.kappa_ratio == 0.0);
        assert!(zero.into_iter().all(|r| r.fidelity_delta().unwrap() < 1e-9));
        assert!(report.to_csv().contains("abs_dF"));
    }

    #[test]
    fn undersized_truncation_is_reported() {
        let cfg = SweepConfig { betas: vec![[2.0, 0.0]], fock_dim: Some(12), ..small(Engine::Both) };
        assert!(matches!(cross_validate(&cfg), Err(Error::TruncationOverflow { .. })));
        let res = run_sweep(&cfg).unwrap();
        assert!(res.to_csv().contains("error:truncation_overflow"));
        assert!(!res.failed_points().is_empty());
    }

    #[test]
    fn cross_validation_needs_both_engines() {
        assert!(cross_validate(&small(Engine::Analytic)).is_err());
    }

    #[test]
    fn path_files() {
        let dir = tempfile::tempdir().unwrap();
        let dump = emit_paths(CircuitKind::Step, 1.0, 0.5, 0.0, 41, dir.path()).unwrap();
        assert_eq!(dump.files.len(), 2);
        assert!(dump.closure_gaps.iter().all(|g| *g < 1e-12));
        let text = std::fs::read_to_string(&dump.files[0]).unwrap();
        assert!(text.starts_with("t,re,im\n"));
        let lossy = emit_paths(CircuitKind::Circular, 1.0, 0.5, 0.2, 41, dir.path()).unwrap();
        let s = circular_circuit(1.0, 0.5, Orientation::Forward).unwrap();
        let xi = crate::analytic::coefficients(&s, 0.2, s.duration()).unwrap().xi_plus;
        assert!((lossy.closure_gaps[0] - xi.norm()).abs() < 1e-12);
    }
}
