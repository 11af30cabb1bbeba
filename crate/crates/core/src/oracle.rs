//! Brute-force reference engine: the master equation
//!
//! ```text
//! ∂ₜρ = −i[H(t), ρ] + κ(aρa† − ½{a†a, ρ}),   H(t) = (α(t) a + α*(t) a†) ⊗ J_y
//! ```
//!
//! integrated with fixed-step RK4 on the truncated joint space in the
//! computational qubit basis. Steps never straddle a segment boundary, and a
//! result is accepted only when runs at `dt` and `dt/2` agree to the configured
//! tolerance. Nothing here uses the block structure of the `J_y` eigenbasis.
//!
//! The state is a dense matrix; the generator is applied through its Kronecker
//! structure (four non-zeros per row of `H`, one per row of `a`), which keeps a
//! right-hand-side evaluation at `O(M²)` for `M = 4N`.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::fock;
use crate::joint::{JointState, HERMITIAN_TOL, PSD_FLOOR, TOP_LEVEL_TOL, TRACE_TOL};
use crate::linalg::expm;
use crate::pulse::{Orientation, PulseSchedule, PulseSegment};
use crate::qubit::{jy_matrix, Basis, QubitState};

pub use crate::fock::coherent_state;

const I: C64 = C64::new(0.0, 1.0);
const ZERO: C64 = C64::new(0.0, 0.0);

/// Fixed-step RK4 settings.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorConfig {
    /// Initial step; capped at a tenth of the shortest segment.
    pub dt: f64,
    /// Largest accepted max-element difference between the `dt` and `dt/2` runs.
    pub tolerance: f64,
    /// How many times `dt` may be reduced before giving up.
    pub max_refinements: u32,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self { dt: 4e-3, tolerance: 1e-8, max_refinements: 6 }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(invalid("dt", format!("must be > 0, got {}", self.dt)));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(invalid("tolerance", format!("must be > 0, got {}", self.tolerance)));
        }
        Ok(())
    }

    fn effective_dt(&self, s: &PulseSchedule) -> f64 {
        let shortest = s.segments().iter().map(PulseSegment::duration).fold(f64::INFINITY, f64::min);
        self.dt.min(shortest / 10.0)
    }
}

/// Which generator to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dynamics {
    /// Full Lindblad evolution.
    Master,
    /// Zero-jump branch `ρ̇ = −i(H̃ρ − ρH̃†)` with `H̃ = H − (iκ/2)a†a`; trace decays.
    NoJump,
}

/// Certified result of an RK4 propagation.
#[derive(Debug, Clone)]
pub struct Propagation {
    pub state: JointState,
    /// Step size of the returned (finer) run.
    pub dt: f64,
    /// Step-doubling error estimate for the returned run, in max-element norm.
    pub error_estimate: f64,
    pub steps: usize,
}

/// `H(t) = (α a + α* a†) ⊗ J_y` as a dense `4N × 4N` matrix (qubit-major).
pub fn build_hamiltonian(s: &PulseSchedule, t: f64, n: usize) -> Result<DMatrix<C64>> {
    let alpha = s.alpha(t)?;
    Ok(hamiltonian_for(alpha, n))
}

fn hamiltonian_for(alpha: C64, n: usize) -> DMatrix<C64> {
    let a = fock::annihilation(n);
    let osc = &a * alpha + a.adjoint() * alpha.conj();
    let jy = jy_matrix();
    let jy = DMatrix::from_fn(4, 4, |i, j| jy[(i, j)]);
    jy.kronecker(&osc)
}

/// Applies the Lindblad (or no-jump) generator to a column-major `M×M` matrix.
///
/// Inputs must be Hermitian: the commutator is formed as `X − X†` with `X = Hρ`,
/// so Hermiticity of every stage is exact by construction.
/// Off-diagonal entries of `B = αa + α*a†`: `up[k] = B[k, k+1]`, `down[k] = B[k, k−1]`.
struct Coupling {
    up: Vec<C64>,
    down: Vec<C64>,
}

struct Scratch {
    sum: Vec<C64>,
    diff: Vec<C64>,
    bs: Vec<C64>,
    bd: Vec<C64>,
    hc: Vec<C64>,
    out: Vec<C64>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        let v = |len| vec![ZERO; len];
        Self { sum: v(n), diff: v(n), bs: v(n), bd: v(n), hc: v(4 * n), out: v(4 * n) }
    }
}

/// `y = B v` for the tridiagonal `B`.
#[inline]
fn tridiag(cp: &Coupling, v: &[C64], y: &mut [C64]) {
    let n = v.len();
    if n == 1 {
        y[0] = ZERO;
        return;
    }
    y[0] = cp.up[0] * v[1];
    for k in 1..n - 1 {
        y[k] = cp.up[k] * v[k + 1] + cp.down[k] * v[k - 1];
    }
    y[n - 1] = cp.down[n - 1] * v[n - 2];
}

struct Generator {
    n: usize,
    m: usize,
    kappa: f64,
    dynamics: Dynamics,
    sqrt: Vec<f64>,
}

impl Generator {
    fn new(n: usize, kappa: f64, dynamics: Dynamics) -> Self {
        Self {
            n,
            m: 4 * n,
            kappa,
            dynamics,
            sqrt: (0..=n).map(|k| (k as f64).sqrt()).collect(),
        }
    }

    /// Visits the upper-triangle generator entries `(r ≤ c, c)` as
    /// `f(c, r, value, &mut a[r,c], &mut b[r,c])`; the rest follow by Hermiticity.
    ///
    /// The commutator is `−i(X − X†)` with `X = Hρ`, so the output is Hermitian for
    /// Hermitian input. Column `c` of `X` is `H ρ[:,c]`; column `c` of `X†` is
    /// `(ρH)[:,c]`, a combination of the four `ρ` columns coupled to `c` by `H`.
    fn for_each_entry<F>(&self, alpha: C64, rho: &[C64], a: &mut [C64], b: &mut [C64], f: F)
    where
        F: Fn(usize, usize, C64, &mut C64, &mut C64) + Sync,
    {
        let m = self.m;
        let coupling = self.coupling(alpha);
        a.par_chunks_mut(m).zip(b.par_chunks_mut(m)).enumerate().for_each_init(
            || Scratch::new(self.n),
            |scratch, (c, (ca, cb))| {
                self.column(c, &coupling, rho, scratch);
                let rows = c + 1;
                for (r, ((&v, ar), br)) in scratch.out[..rows].iter().zip(ca.iter_mut()).zip(cb.iter_mut()).enumerate() {
                    f(c, r, v, ar, br);
                }
            },
        );
    }

    fn coupling(&self, alpha: C64) -> Coupling {
        let n = self.n;
        Coupling {
            up: (0..n).map(|k| if k + 1 < n { alpha * self.sqrt[k + 1] } else { ZERO }).collect(),
            down: (0..n).map(|k| alpha.conj() * self.sqrt[k]).collect(),
        }
    }

    /// Rows `0..=c` of generator column `c` into `scratch.out`.
    fn column(&self, c: usize, cp: &Coupling, rho: &[C64], scratch: &mut Scratch) {
        let (n, m) = (self.n, self.m);
        let rows = c + 1;
        // Row range of qubit block q that lies in the upper triangle.
        let block = |q: usize| q * n..((q + 1) * n).min(rows).max(q * n);
        let (qc, nc) = (c / n, c % n);
        let col = |j: usize| &rho[j * m..(j + 1) * m];
        let rc = col(c);
        let Scratch { sum, diff, bs, bd, hc, out } = scratch;

        // X[:,c] = H ρ[:,c]. With qubit blocks v₀..v₃ and B = αa + α*a†, the J_y rows
        // give x₀ = −iB(v₁+v₂), x₃ = iB(v₁+v₂) and x₁ = x₂ = iB(v₀−v₃).
        for k in 0..n {
            sum[k] = rc[n + k] + rc[2 * n + k];
            diff[k] = rc[k] - rc[3 * n + k];
        }
        tridiag(cp, sum, bs);
        tridiag(cp, diff, bd);

        // X†[:,c] = (ρH)[:,c] = Σ_j ρ[:,j] H[j,c] over the J_y partners of qc and the
        // oscillator neighbours nc ± 1, using B[nc−1, nc] = α√nc and B[nc+1, nc] = α*√(nc+1).
        // The two J_y partners of qc share the oscillator coefficient: column c of X†
        // is jy·(u·(ρ[:,p]±ρ[:,p']) at nc−1 + d·(…) at nc+1).
        let (p0, p1, sign, jy) = match qc {
            0 => (1, 2, 1.0, I),
            3 => (1, 2, 1.0, -I),
            _ => (0, 3, -1.0, -I),
        };
        hc[..rows].fill(ZERO);
        let mut neighbour = |j: usize, w: C64| {
            let w = jy * w;
            let (u, v) = (&col(p0 * n + j)[..rows], &col(p1 * n + j)[..rows]);
            for ((h, &x), &y) in hc[..rows].iter_mut().zip(u).zip(v) {
                *h += w * (x + y * sign);
            }
        };
        if nc > 0 {
            neighbour(nc - 1, cp.up[nc - 1]);
        }
        if nc + 1 < n {
            neighbour(nc + 1, cp.down[nc + 1]);
        }

        // −i(X − X†) with X blocks (−i bs, i bd, i bd, i bs).
        let blocks: [(&[C64], C64); 4] = [(bs, -I), (bd, I), (bd, I), (bs, I)];
        for (q, (src, phase)) in blocks.iter().enumerate() {
            let range = block(q);
            for ((o, &x), &h) in out[range.clone()].iter_mut().zip(src.iter()).zip(&hc[range]) {
                let comm = *phase * x - h;
                *o = C64::new(comm.im, -comm.re);
            }
        }

        if self.kappa == 0.0 {
            return;
        }
        let half = 0.5 * self.kappa;
        let jumps = self.dynamics == Dynamics::Master && nc + 1 < n;
        let wc = self.kappa * self.sqrt[nc + 1];
        for q in 0..4 {
            let base = q * n;
            let len = block(q).len();
            for k in 0..len {
                out[base + k] -= rc[base + k] * (half * (k + nc) as f64);
            }
            if jumps {
                // κ (aρa†)[r, c] = κ √(n_r+1) √(n_c+1) ρ[r+1, c+1]
                let next = col(c + 1);
                for k in 0..len.min(n - 1) {
                    out[base + k] += next[base + k + 1] * (wc * self.sqrt[k + 1]);
                }
            }
        }
    }

    #[cfg(test)]
    fn apply(&self, alpha: C64, rho: &[C64], out: &mut [C64]) {
        let mut unused = vec![ZERO; rho.len()];
        self.for_each_entry(alpha, rho, out, &mut unused, |_, _, v, o, _| *o = v);
        mirror_upper(out, self.m);
    }
}

struct Rk4 {
    gen: Generator,
    state: Vec<C64>,
    y: Vec<C64>,
    next: Vec<C64>,
    acc: Vec<C64>,
}

impl Rk4 {
    fn new(gen: Generator, state: Vec<C64>) -> Self {
        let len = gen.m * gen.m;
        debug_assert_eq!(state.len(), len);
        let zeros = || vec![ZERO; len];
        Self { gen, state, y: zeros(), next: zeros(), acc: zeros() }
    }

    fn step(&mut self, alphas: [C64; 3], h: f64) {
        // Classical RK4 weights and stage offsets.
        const W: [f64; 4] = [1.0, 2.0, 2.0, 1.0];
        const C: [f64; 4] = [0.5, 0.5, 1.0, 0.0];
        let stage_alpha = [alphas[0], alphas[1], alphas[1], alphas[2]];
        let m = self.gen.m;
        for s in 0..4 {
            let input = if s == 0 { &self.state } else { &self.y };
            let (w, cs, start) = (h * W[s] / 6.0, h * C[s], &self.state);
            self.gen.for_each_entry(stage_alpha[s], input, &mut self.acc, &mut self.next, |c, r, k, acc, next| {
                let base = start[r + c * m];
                *acc = if s == 0 { base } else { *acc } + k * w;
                *next = base + k * cs;
            });
            if s < 3 {
                mirror_upper(&mut self.next, m);
            }
            std::mem::swap(&mut self.y, &mut self.next);
        }
        mirror_upper(&mut self.acc, m);
        std::mem::swap(&mut self.state, &mut self.acc);
    }
}

/// Fills the strict lower triangle of a column-major `m × m` matrix from the upper one.
fn mirror_upper(a: &mut [C64], m: usize) {
    for c in 0..m {
        for r in c + 1..m {
            a[r + c * m] = a[c + r * m].conj();
        }
    }
}

fn hermiticity_error(rho: &[C64], m: usize) -> f64 {
    let mut worst = 0.0f64;
    for c in 0..m {
        for r in 0..=c {
            worst = worst.max((rho[r + c * m] - rho[c + r * m].conj()).norm());
        }
    }
    worst
}

fn top_population(rho: &[C64], n: usize) -> f64 {
    let m = 4 * n;
    (0..4).map(|q| rho[(q * n + n - 1) * (m + 1)].re).sum()
}

/// One RK4 pass at a fixed (segment-aligned) step, no certificate.
pub fn evolve_fixed_step(
    rho0: &JointState,
    s: &PulseSchedule,
    kappa: f64,
    dynamics: Dynamics,
    dt: f64,
) -> Result<(JointState, usize)> {
    if !(kappa.is_finite() && kappa >= 0.0) {
        return Err(invalid("kappa", format!("must be >= 0, got {kappa}")));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(invalid("dt", format!("must be > 0, got {dt}")));
    }
    let start = rho0.in_basis(Basis::Computational);
    start.check_truncation()?;
    let herm = start.hermiticity_error();
    if herm > HERMITIAN_TOL {
        return Err(Error::InvalidState(format!("initial joint state not Hermitian ({herm:e})")));
    }
    let n = start.fock_dim();
    let m = 4 * n;
    let mut rk = Rk4::new(Generator::new(n, kappa, dynamics), start.matrix().as_slice().to_vec());
    let mut steps = 0;
    for seg in s.segments() {
        let count = (seg.duration() / dt * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        let h = seg.duration() / count as f64;
        for i in 0..count {
            let u = i as f64 * h;
            let alphas = [seg.alpha_local(u), seg.alpha_local(u + 0.5 * h), seg.alpha_local(u + h)];
            rk.step(alphas, h);
        }
        steps += count;
        let herm = hermiticity_error(&rk.state, m);
        if herm > HERMITIAN_TOL {
            return Err(Error::NumericalConsistency(format!("Hermiticity lost during propagation ({herm:e})")));
        }
        let top = top_population(&rk.state, n);
        if top > TOP_LEVEL_TOL {
            return Err(Error::TruncationOverflow {
                detail: format!("top Fock level population {top:e} at N={n} during propagation"),
            });
        }
    }
    let out = JointState::from_matrix(DMatrix::from_vec(m, m, rk.state), n, Basis::Computational)?;
    if dynamics == Dynamics::Master {
        let tr = out.trace();
        if (tr - 1.0).norm() > TRACE_TOL {
            return Err(Error::NumericalConsistency(format!("trace drifted to {tr}")));
        }
    }
    Ok((out.in_basis(rho0.basis()), steps))
}

/// Error of the `dt/2` run is `|coarse − fine| / (2⁴ − 1)` for a fourth-order method.
const RICHARDSON: f64 = 15.0;

fn certified(
    rho0: &JointState,
    s: &PulseSchedule,
    kappa: f64,
    dynamics: Dynamics,
    cfg: &IntegratorConfig,
) -> Result<Propagation> {
    cfg.validate()?;
    let mut dt = probe_step(rho0, s, kappa, dynamics, cfg)?;
    let (mut coarse, _) = evolve_fixed_step(rho0, s, kappa, dynamics, dt)?;
    let mut last = f64::INFINITY;
    for _ in 0..=cfg.max_refinements {
        let (fine, steps) = evolve_fixed_step(rho0, s, kappa, dynamics, dt / 2.0)?;
        last = crate::linalg::max_abs_diff(coarse.matrix(), fine.matrix()) / RICHARDSON;
        if last <= cfg.tolerance {
            log::debug!("RK4 certified at dt={:.3e} (diff {last:.2e}, {steps} steps)", dt / 2.0);
            return Ok(Propagation { state: fine, dt: dt / 2.0, error_estimate: last, steps });
        }
        let predicted = dt * (0.5 * cfg.tolerance / last).powf(0.25);
        if predicted >= 0.45 * dt {
            dt /= 2.0;
            coarse = fine;
        } else {
            dt = predicted;
            coarse = evolve_fixed_step(rho0, s, kappa, dynamics, dt)?.0;
        }
    }
    Err(Error::ConvergenceFailure { dt, achieved: last, tolerance: cfg.tolerance })
}

/// Starting step from a cheap `4h` vs `2h` pair over the whole schedule, with
/// `h = effective_dt`. Never exceeds `h`.
fn probe_step(
    rho0: &JointState,
    s: &PulseSchedule,
    kappa: f64,
    dynamics: Dynamics,
    cfg: &IntegratorConfig,
) -> Result<f64> {
    let h = cfg.effective_dt(s);
    let (a, _) = evolve_fixed_step(rho0, s, kappa, dynamics, 4.0 * h)?;
    let (b, _) = evolve_fixed_step(rho0, s, kappa, dynamics, 2.0 * h)?;
    let est = crate::linalg::max_abs_diff(a.matrix(), b.matrix()) / RICHARDSON;
    if est <= 0.0 {
        return Ok(h);
    }
    // Coarse step of the first certified pair; its fine half targets 0.5·tol.
    Ok(h.min(4.0 * h * (0.5 * cfg.tolerance / est).powf(0.25)))
}

/// Lindblad propagation to the end of the schedule, certified by step halving.
pub fn evolve_master(
    rho0: &JointState,
    s: &PulseSchedule,
    kappa: f64,
    cfg: &IntegratorConfig,
) -> Result<Propagation> {
    certified(rho0, s, kappa, Dynamics::Master, cfg)
}

/// Unnormalized zero-jump propagation (any schedule, including circular segments).
pub fn evolve_nojump(
    rho0: &JointState,
    s: &PulseSchedule,
    kappa: f64,
    cfg: &IntegratorConfig,
) -> Result<Propagation> {
    certified(rho0, s, kappa, Dynamics::NoJump, cfg)
}

/// Ordered product of `exp(−iH̃ⱼτⱼ)` over constant segments, `H̃ = H − (iκ/2)a†a`.
pub fn nojump_propagator(s: &PulseSchedule, kappa: f64, n: usize) -> Result<DMatrix<C64>> {
    if !s.is_piecewise_constant() {
        return Err(Error::UnsupportedSchedule(
            "nojump_propagator needs piecewise-constant drive; use evolve_nojump".into(),
        ));
    }
    if !(kappa.is_finite() && kappa >= 0.0) {
        return Err(invalid("kappa", format!("must be >= 0, got {kappa}")));
    }
    let damping = DMatrix::<C64>::identity(4, 4).kronecker(&fock::number(n)) * C64::new(0.0, -0.5 * kappa);
    let mut u = DMatrix::<C64>::identity(4 * n, 4 * n);
    for seg in s.segments() {
        let h = hamiltonian_for(seg.alpha_local(0.0), n) + &damping;
        u = expm(&(h * (-I * seg.duration()))) * u;
    }
    Ok(u)
}

/// Product forms of the no-jump propagator of step circuits, exact to first order in `κ`.
///
/// `Single` is one circuit, `Double` the `[C, C̄]` pair; `tau` is the per-circuit pulse length.
/// With `loop_damping` the form carries the `exp(−(κ/2) J_y² ∫|∫α|²)` factor produced by the
/// enclosed loop; without it the form has only the displacement and `a†a` factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FirstOrderForm {
    Single(Orientation),
    Double,
}

pub fn first_order_product(
    form: FirstOrderForm,
    alpha0: f64,
    tau: f64,
    kappa: f64,
    n: usize,
    loop_damping: bool,
) -> Result<DMatrix<C64>> {
    if !(alpha0 > 0.0 && tau > 0.0 && kappa >= 0.0) {
        return Err(invalid("alpha0/tau/kappa", format!("got {alpha0}, {tau}, {kappa}")));
    }
    let jy = jy_matrix();
    let jy = DMatrix::from_fn(4, 4, |i, j| jy[(i, j)]);
    let jy2 = &jy * &jy;
    let id_q = DMatrix::<C64>::identity(4, 4);
    let id_o = DMatrix::<C64>::identity(n, n);
    let a = fock::annihilation(n);
    let x = (&a + a.adjoint()) * C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let p = (a.adjoint() - &a) * C64::new(0.0, std::f64::consts::FRAC_1_SQRT_2);
    let circuits = match form {
        FirstOrderForm::Single(_) => 1.0,
        FirstOrderForm::Double => 2.0,
    };
    let area = 2.0 * alpha0 * alpha0 * tau * tau * circuits;
    let gate = expm(&(jy2.kronecker(&id_o) * C64::new(0.0, -area)));
    let decay = expm(&(id_q.kronecker(&fock::number(n)) * C64::new(-2.0 * kappa * tau * circuits, 0.0)));
    let mut out = gate;
    if loop_damping {
        // ∫|∫α|² over one square loop is (10/3) α₀² τ³.
        let w = -(5.0 / 3.0) * kappa * alpha0 * alpha0 * tau.powi(3) * circuits;
        out *= expm(&(jy2.kronecker(&id_o) * C64::new(w, 0.0)));
    }
    if let FirstOrderForm::Single(o) = form {
        let sign = match o {
            Orientation::Forward => 1.0,
            Orientation::Reversed => -1.0,
        };
        let g = std::f64::consts::SQRT_2 * kappa * alpha0 * tau * tau * sign;
        out = out * expm(&(jy.kronecker(&x) * C64::new(-g, 0.0))) * expm(&(jy.kronecker(&p) * C64::new(g, 0.0)));
    }
    Ok(out * decay)
}

/// Relative Frobenius residual `‖(U − V)P‖ / ‖UP‖` on the oscillator levels below `cut`.
pub fn low_fock_residual(u: &DMatrix<C64>, v: &DMatrix<C64>, n: usize, cut: usize) -> f64 {
    let cols: Vec<usize> = (0..4).flat_map(|q| (0..cut.min(n)).map(move |k| q * n + k)).collect();
    let (mut num, mut den) = (0.0, 0.0);
    for &c in &cols {
        for r in 0..u.nrows() {
            num += (u[(r, c)] - v[(r, c)]).norm_sqr();
            den += u[(r, c)].norm_sqr();
        }
    }
    (num / den).sqrt()
}

/// Reduced qubit state, unprojected.
pub fn partial_trace_osc(rho: &JointState) -> QubitState {
    rho.partial_trace_osc()
}

/// Reduced qubit state mapped onto the state set.
///
/// The raw partial trace must already satisfy the joint-state tolerances (trace
/// `1e−8`, eigenvalue floor `−1e−7`); the result is Hermitized, negative
/// eigenvalues are set to zero and the trace is renormalized.
pub fn reduced_state(rho: &JointState) -> Result<QubitState> {
    let raw = rho.partial_trace_osc();
    let herm = raw.hermiticity_error();
    if herm > HERMITIAN_TOL {
        return Err(Error::NumericalConsistency(format!("reduced state not Hermitian ({herm:e})")));
    }
    let tr = raw.trace();
    if (tr - 1.0).norm() > TRACE_TOL {
        return Err(Error::NumericalConsistency(format!("reduced trace {tr}")));
    }
    let h = (raw.rho + raw.rho.adjoint()) * C64::new(0.5, 0.0);
    let eig = nalgebra::SymmetricEigen::new(h);
    if let Some(min) = eig.eigenvalues.iter().copied().reduce(f64::min) {
        if min < PSD_FLOOR {
            return Err(Error::NumericalConsistency(format!("reduced state eigenvalue {min:e}")));
        }
    }
    let clipped = eig.eigenvalues.map(|l| l.max(0.0));
    let total: f64 = clipped.sum();
    let d = crate::qubit::Mat4::from_diagonal(&clipped.map(|l| C64::new(l / total, 0.0)));
    let v = eig.eigenvectors;
    QubitState::new(v * d * v.adjoint(), raw.basis)
}
