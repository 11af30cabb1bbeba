//! Closed-form solution of the damped qubit-oscillator master equation.
//!
//! In the `J_y` eigenbasis the joint state splits into oscillator blocks
//! `ρ_{ll'}` that evolve independently. Their evolution map is a product of
//! displacement-type exponentials of left and right ladder superoperators,
//! a scalar phase `exp(−iA^{ll'})` and the pure relaxation channel:
//!
//! ```text
//! Λ^{ll'}(t) = e^{−iA} e^{−ilξ₊* a_L†} e^{−i(l'ξ₊ + Δξ₋) a_L} e^{il'ξ₊ a_R} e^{i(lξ₊* − Δξ₋*) a_R†} e^{L_th t}
//! ξ±(t)      = e^{∓κt/2} ∫₀ᵗ α(t') e^{±κt'/2} dt'
//! A^{ll'}(t) = iκll' ∫₀ᵗ |ξ₊|² − i ∫₀ᵗ (l² α ξ₊* + l'² α* ξ₊)
//! ```
//!
//! with `Δ = l − l'`, `a_L ρ = aρ` and right operators composing in reverse
//! (`e^{x a_R} e^{y a_R†} ρ = ρ e^{y a†} e^{x a}`). For a coherent oscillator
//! input the oscillator trace is elementary and the reduced qubit state obeys
//!
//! ```text
//! ρ^{ll'}(t) = e^{−iA^{ll'}} e^{ll'|ξ₊|²} e^{−iΔ(βξ₋ + β*ξ₋*) e^{−κt/2}} ρ^{ll'}(0).
//! ```

use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{invalid, Error, Result};
use crate::fock;
use crate::joint::JointState;
use crate::linalg::expm;
use crate::pulse::PulseSchedule;
use crate::quad;
use crate::qubit::{Basis, Mat4, QubitState, JY_EIGENVALUES};

/// Relative tolerance requested from the quadrature of the `A` integrals.
pub const QUAD_REL_TOL: f64 = 1e-12;
/// Worst accepted relative quadrature error.
pub const QUAD_ACCEPT_TOL: f64 = 1e-10;
/// Largest anti-Hermitian residue tolerated before re-Hermitization.
pub const HERMITIZE_TOL: f64 = 1e-9;
/// Largest drift of a `J_y`-diagonal factor away from 1.
pub const DIAGONAL_TOL: f64 = 1e-10;

const I: C64 = C64::new(0.0, 1.0);

/// Coefficients of the exact solution at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionCoefficients {
    pub t: f64,
    pub kappa: f64,
    pub xi_plus: C64,
    pub xi_minus: C64,
    /// `∫₀ᵗ |ξ₊|² dt'`.
    pub xi_plus_sq_integral: f64,
    /// `∫₀ᵗ α ξ₊* dt'`.
    pub drive_overlap: C64,
    /// `A^{ll'}` indexed by `J_y` basis positions.
    pub a: Mat4,
}

impl SolutionCoefficients {
    /// `A^{ll'}` for explicit eigenvalues.
    pub fn a_for(&self, l: f64, lp: f64) -> C64 {
        a_entry(self.kappa, self.xi_plus_sq_integral, self.drive_overlap, l, lp)
    }

    /// Full multiplicative factor applied to `ρ^{ll'}(0)` for coherent input `β`.
    pub fn reduced_factor(&self, beta: C64, l: f64, lp: f64) -> C64 {
        let delta = l - lp;
        let drift = beta * self.xi_minus + (beta * self.xi_minus).conj();
        let exponent = -I * self.a_for(l, lp) + l * lp * self.xi_plus.norm_sqr()
            - I * delta * drift * (-0.5 * self.kappa * self.t).exp();
        exponent.exp()
    }

    /// `κ = 0` geometric phase `Θ` with `exp(−iA^{l0}) = exp(−iΘl²)`.
    pub fn geometric_phase(&self) -> f64 {
        self.drive_overlap.im
    }
}

fn a_entry(kappa: f64, sq: f64, overlap: C64, l: f64, lp: f64) -> C64 {
    I * (kappa * l * lp * sq) - I * (overlap * (l * l) + overlap.conj() * (lp * lp))
}

fn check_kappa(kappa: f64) -> Result<()> {
    if kappa.is_finite() && kappa >= 0.0 {
        Ok(())
    } else {
        Err(invalid("kappa", format!("must be finite and >= 0, got {kappa}")))
    }
}

fn check_time(s: &PulseSchedule, t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 && t <= s.duration() * (1.0 + 4.0 * f64::EPSILON) {
        Ok(())
    } else {
        Err(Error::TimeOutOfRange { t, total: s.duration() })
    }
}

/// `ξ±`, the two `A` integrals and the `A^{ll'}` table at time `t`.
///
/// `ξ±` are closed-form; `∫|ξ₊|²` and `∫αξ₊*` use adaptive Gauss–Legendre
/// quadrature per segment with the closed-form `ξ₊` inside the integrand.
pub fn coefficients(s: &PulseSchedule, kappa: f64, t: f64) -> Result<SolutionCoefficients> {
    check_kappa(kappa)?;
    check_time(s, t)?;
    let t = t.min(s.duration());
    let rate = -0.5 * kappa;
    let mut xi = C64::new(0.0, 0.0);
    let mut sq = 0.0;
    let mut overlap = C64::new(0.0, 0.0);
    for (seg, &start) in s.segments().iter().zip(s.starts()) {
        let h = (t - start).min(seg.duration());
        let xi0 = xi;
        let integrand = |u: f64| {
            let x = xi0 * (rate * u).exp() + seg.filtered_local(u, rate);
            [C64::new(x.norm_sqr(), 0.0), seg.alpha_local(u) * x.conj()]
        };
        let (val, err) = quad::integrate(integrand, 0.0, h, QUAD_REL_TOL, 1e-300)?;
        let scale = val[0].norm().max(val[1].norm());
        if err > QUAD_ACCEPT_TOL * scale.max(1e-300) && err > 1e-15 {
            return Err(Error::QuadratureNonConvergence {
                a: start,
                b: start + h,
                achieved: err,
                wanted: QUAD_ACCEPT_TOL * scale,
            });
        }
        sq += val[0].re;
        overlap += val[1];
        xi = xi0 * (rate * h).exp() + seg.filtered_local(h, rate);
        if start + seg.duration() >= t {
            break;
        }
    }
    let xi_minus = s.filtered_integral(t, 0.5 * kappa)?;
    let a = Mat4::from_fn(|i, j| a_entry(kappa, sq, overlap, JY_EIGENVALUES[i], JY_EIGENVALUES[j]));
    Ok(SolutionCoefficients {
        t,
        kappa,
        xi_plus: xi,
        xi_minus,
        xi_plus_sq_integral: sq,
        drive_overlap: overlap,
        a,
    })
}

/// CSV of `ξ±` and selected `A^{ll'}` entries on `samples` uniform times.
pub fn coefficient_table(s: &PulseSchedule, kappa: f64, samples: usize) -> Result<String> {
    if samples < 2 {
        return Err(invalid("samples", "need at least 2 samples"));
    }
    let mut out = String::from(
        "t,re_xi_plus,im_xi_plus,re_xi_minus,im_xi_minus,re_a_2_0,im_a_2_0,re_a_2_-2,im_a_2_-2,re_a_2_2,im_a_2_2\n",
    );
    for i in 0..samples {
        let t = if i + 1 == samples { s.duration() } else { s.duration() * i as f64 / (samples - 1) as f64 };
        let c = coefficients(s, kappa, t)?;
        let (a20, a2m2, a22) = (c.a_for(2.0, 0.0), c.a_for(2.0, -2.0), c.a_for(2.0, 2.0));
        let _ = writeln!(
            out,
            "{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}",
            t, c.xi_plus.re, c.xi_plus.im, c.xi_minus.re, c.xi_minus.im, a20.re, a20.im, a2m2.re, a2m2.im, a22.re,
            a22.im
        );
    }
    Ok(out)
}

/// Apply `Σ_k (sign)^k a^k ρ a†^k / k!`, i.e. `e^{±K₋}` with `K₋ρ = aρa†`.
fn exp_lowering(rho: &DMatrix<C64>, sign: f64) -> DMatrix<C64> {
    let n = rho.nrows();
    let sqrt: Vec<f64> = (0..n).map(|k| (k as f64).sqrt()).collect();
    let mut term = rho.clone();
    let mut acc = rho.clone();
    for k in 1..n {
        let mut next = DMatrix::zeros(n, n);
        let w = sign / k as f64;
        for c in 0..n - 1 {
            for r in 0..n - 1 {
                next[(r, c)] = term[(r + 1, c + 1)] * (sqrt[r + 1] * sqrt[c + 1] * w);
            }
        }
        acc += &next;
        term = next;
    }
    acc
}

/// Amplitude damping `e^{L_th t}` with `L_th ρ = κ(aρa† − ½{a†a, ρ})`.
///
/// Evaluated as `e^{−K₋} e^{−(κt/2)N₀} e^{K₋}` where `N₀ρ = a†aρ + ρa†a`
/// multiplies entry `(m, n)` by `e^{−κt(m+n)/2}`. The truncated space is
/// invariant under every factor, so the channel is exact at any `N`; the
/// alternating outer factors lose roughly `e^{⟨a†a⟩}` ulps to cancellation.
pub fn relax_channel(rho: &DMatrix<C64>, kappa: f64, t: f64) -> Result<DMatrix<C64>> {
    check_kappa(kappa)?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(invalid("t", format!("must be >= 0, got {t}")));
    }
    if rho.nrows() != rho.ncols() || rho.nrows() == 0 {
        return Err(Error::InvalidState("oscillator matrix must be square and non-empty".into()));
    }
    let top = fock::top_population(rho);
    if top.abs() > crate::joint::TOP_LEVEL_TOL {
        log::warn!("relax_channel: top Fock population {top:e} at N={}", rho.nrows());
    }
    let gt = kappa * t;
    if gt == 0.0 {
        return Ok(rho.clone());
    }
    let mut mid = exp_lowering(rho, 1.0);
    let n = rho.nrows();
    for c in 0..n {
        for r in 0..n {
            mid[(r, c)] *= (-0.5 * gt * (r + c) as f64).exp();
        }
    }
    Ok(exp_lowering(&mid, -1.0))
}

/// Apply the full evolution map `Λ(t)` to a joint state, block by block.
///
/// The result is returned in the input's basis.
pub fn apply_lambda(state: &JointState, s: &PulseSchedule, kappa: f64, t: f64) -> Result<JointState> {
    state.check_truncation()?;
    let coeff = coefficients(s, kappa, t)?;
    let n = state.fock_dim();
    let a = fock::annihilation(n);
    let ad = fock::creation(n);
    let jy = state.in_basis(Basis::JyEigen);
    let mut out = jy.clone();
    let (xp, xm) = (coeff.xi_plus, coeff.xi_minus);
    for (i, &l) in JY_EIGENVALUES.iter().enumerate() {
        for (j, &lp) in JY_EIGENVALUES.iter().enumerate() {
            let delta = l - lp;
            let relaxed = relax_channel(&jy.block(i, j), kappa, coeff.t)?;
            let p = -I * l * xp.conj();
            let q = -I * (xp * lp + xm * delta);
            let x = I * lp * xp;
            let y = I * (xp.conj() * l - xm.conj() * delta);
            let left = expm(&(&ad * p)) * expm(&(&a * q));
            let right = expm(&(&ad * y)) * expm(&(&a * x));
            let phase = (-I * coeff.a[(i, j)]).exp();
            out.set_block(i, j, &((left * relaxed * right) * phase));
        }
    }
    Ok(out.in_basis(state.basis()))
}

/// Qubit state, coherent oscillator amplitude, drive and damping rate.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedPropagationInput {
    pub rho0: QubitState,
    pub beta: C64,
    pub schedule: PulseSchedule,
    pub kappa: f64,
}

/// Reduced qubit state at time `t` for a coherent oscillator input.
///
/// The result is in the basis of `input.rho0`.
pub fn evolve_reduced(input: &ReducedPropagationInput, t: f64) -> Result<QubitState> {
    input.rho0.validate()?;
    let coeff = coefficients(&input.schedule, input.kappa, t)?;
    reduced_from_coefficients(&input.rho0, input.beta, &coeff)
}

/// Element-wise application of the reduced-dynamics factor.
pub fn reduced_from_coefficients(
    rho0: &QubitState,
    beta: C64,
    coeff: &SolutionCoefficients,
) -> Result<QubitState> {
    let start = rho0.to_jy_basis();
    let mut rho = Mat4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            let factor = coeff.reduced_factor(beta, JY_EIGENVALUES[i], JY_EIGENVALUES[j]);
            if i == j && (factor - 1.0).norm() > DIAGONAL_TOL {
                return Err(Error::NumericalConsistency(format!(
                    "diagonal factor {i} drifted to {factor}"
                )));
            }
            rho[(i, j)] = factor * start.rho[(i, j)];
        }
    }
    let deviation = crate::qubit::max_abs(&(rho - rho.adjoint()));
    if deviation > HERMITIZE_TOL {
        return Err(Error::NumericalConsistency(format!("reduced state anti-Hermitian part {deviation:e}")));
    }
    log::trace!("evolve_reduced: re-Hermitizing, deviation {deviation:e}");
    let rho = (rho + rho.adjoint()) * C64::new(0.5, 0.0);
    Ok(QubitState { rho, basis: Basis::JyEigen }.in_basis(rho0.basis))
}
