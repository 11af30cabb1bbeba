//! Two-qubit operators: the collective `J_y = σ_y⊗𝟙 + 𝟙⊗σ_y`, its eigenbasis,
//! ideal gate targets `exp(−iφ J_y²)` and the gate fidelity.
//!
//! Computational basis order is `|00⟩, |01⟩, |10⟩, |11⟩`. With
//! `|±y⟩ = (|0⟩ ± i|1⟩)/√2`, the `J_y` eigenbasis is fixed as
//!
//! | index | `l` | vector |
//! |-------|-----|--------|
//! | 0 | +2 | `|+y+y⟩` |
//! | 1 |  0 | `(|+y−y⟩ + |−y+y⟩)/√2` |
//! | 2 |  0 | `(|+y−y⟩ − |−y+y⟩)/√2` |
//! | 3 | −2 | `|−y−y⟩` |
//!
//! and `ρ^{ll'}` elements are indexed by these positions.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt::Write as _;

use nalgebra::{Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub type Mat4 = Matrix4<C64>;
pub type Vec4 = Vector4<C64>;

/// `l` values of the `J_y` eigenbasis, in basis order.
pub const JY_EIGENVALUES: [f64; 4] = [2.0, 0.0, 0.0, -2.0];

/// Target phase producing the maximally entangling gate on `|00⟩`.
pub const ENTANGLING_PHASE: f64 = PI / 8.0;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const PSD_FLOOR: f64 = -1e-10;

const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn sigma_y() -> nalgebra::Matrix2<C64> {
    nalgebra::Matrix2::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0))
}

/// `J_y = σ_y⊗𝟙 + 𝟙⊗σ_y` in the computational basis.
pub fn jy_matrix() -> Mat4 {
    let sy = sigma_y();
    let id = nalgebra::Matrix2::<C64>::identity();
    sy.kronecker(&id) + id.kronecker(&sy)
}

/// Which basis a 4×4 operator is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Computational,
    JyEigen,
}

impl Basis {
    pub fn tag(self) -> &'static str {
        match self {
            Basis::Computational => "computational",
            Basis::JyEigen => "jy-eigen",
        }
    }
}

/// The fixed eigenbasis of `J_y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JyBasis {
    /// Columns are eigenvectors in the computational basis; `ρ_jy = V† ρ V`.
    pub transform: Mat4,
    pub eigenvalues: [f64; 4],
}

impl JyBasis {
    pub fn new() -> Self {
        let s = FRAC_1_SQRT_2;
        let plus = nalgebra::Vector2::new(c(s, 0.0), c(0.0, s));
        let minus = nalgebra::Vector2::new(c(s, 0.0), c(0.0, -s));
        let pp = plus.kronecker(&plus);
        let pm = plus.kronecker(&minus);
        let mp = minus.kronecker(&plus);
        let mm = minus.kronecker(&minus);
        let sym = (pm + mp) * c(s, 0.0);
        let anti = (pm - mp) * c(s, 0.0);
        let transform = Mat4::from_columns(&[pp, sym, anti, mm]);
        Self { transform, eigenvalues: JY_EIGENVALUES }
    }
}

impl Default for JyBasis {
    fn default() -> Self {
        Self::new()
    }
}

/// A two-qubit density matrix tagged with its basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    pub rho: Mat4,
    pub basis: Basis,
}

impl QubitState {
    /// Wrap a matrix after checking Hermiticity, unit trace and positivity.
    pub fn new(rho: Mat4, basis: Basis) -> Result<Self> {
        let s = Self { rho, basis };
        s.validate()?;
        Ok(s)
    }

    pub fn from_pure(psi: &Vec4, basis: Basis) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        let psi = psi.unscale(norm);
        Self::new(psi * psi.adjoint(), basis)
    }

    /// `|b₁b₂⟩⟨b₁b₂|` for a computational basis label `0..4`.
    pub fn computational(index: usize) -> Result<Self> {
        if index >= 4 {
            return Err(Error::InvalidState(format!("basis index {index} out of range")));
        }
        let mut rho = Mat4::zeros();
        rho[(index, index)] = c(1.0, 0.0);
        Ok(Self { rho, basis: Basis::Computational })
    }

    pub fn maximally_mixed() -> Self {
        Self { rho: Mat4::identity() * c(0.25, 0.0), basis: Basis::Computational }
    }

    pub fn hermiticity_error(&self) -> f64 {
        max_abs(&(self.rho - self.rho.adjoint()))
    }

    pub fn trace(&self) -> C64 {
        self.rho.trace()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (self.rho + self.rho.adjoint()) * c(0.5, 0.0);
        SymmetricEigen::new(herm).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn validate(&self) -> Result<()> {
        let h = self.hermiticity_error();
        if h > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {h:e})")));
        }
        let tr = self.trace();
        if (tr - 1.0).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let min = self.min_eigenvalue();
        if min < PSD_FLOOR {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    pub fn to_jy_basis(&self) -> Self {
        match self.basis {
            Basis::JyEigen => *self,
            Basis::Computational => {
                let v = JyBasis::new().transform;
                Self { rho: v.adjoint() * self.rho * v, basis: Basis::JyEigen }
            }
        }
    }

    pub fn from_jy_basis(&self) -> Self {
        match self.basis {
            Basis::Computational => *self,
            Basis::JyEigen => {
                let v = JyBasis::new().transform;
                Self { rho: v * self.rho * v.adjoint(), basis: Basis::Computational }
            }
        }
    }

    pub fn in_basis(&self, basis: Basis) -> Self {
        match basis {
            Basis::Computational => self.from_jy_basis(),
            Basis::JyEigen => self.to_jy_basis(),
        }
    }

    /// Von Neumann entropy of the first qubit's reduced state.
    pub fn single_qubit_entropy(&self) -> f64 {
        let rho = self.from_jy_basis().rho;
        let mut red = nalgebra::Matrix2::<C64>::zeros();
        for a in 0..2 {
            for b in 0..2 {
                red[(a, b)] = rho[(2 * a, 2 * b)] + rho[(2 * a + 1, 2 * b + 1)];
            }
        }
        let herm = (red + red.adjoint()) * c(0.5, 0.0);
        SymmetricEigen::new(herm)
            .eigenvalues
            .iter()
            .filter(|&&p| p > 1e-300)
            .map(|&p| -p * p.ln())
            .sum()
    }

    /// CSV with a `# basis=<tag>` line, then `row,col,re,im` for all 16 entries row-major.
    pub fn to_csv(&self) -> String {
        let mut out = format!("# basis={}\nrow,col,re,im\n", self.basis.tag());
        for r in 0..4 {
            for col in 0..4 {
                let z = self.rho[(r, col)];
                let _ = writeln!(out, "{r},{col},{:.17e},{:.17e}", z.re, z.im);
            }
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let head = lines.next().ok_or_else(|| Error::InvalidState("empty CSV".into()))?;
        let basis = match head.trim().strip_prefix("# basis=") {
            Some("computational") => Basis::Computational,
            Some("jy-eigen") => Basis::JyEigen,
            _ => return Err(Error::InvalidState(format!("bad basis header `{head}`"))),
        };
        if lines.next().map(str::trim) != Some("row,col,re,im") {
            return Err(Error::InvalidState("missing column header".into()));
        }
        let mut rho = Mat4::zeros();
        let mut seen = 0;
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            let bad = || Error::InvalidState(format!("bad CSV row `{line}`"));
            if f.len() != 4 {
                return Err(bad());
            }
            let r: usize = f[0].parse().map_err(|_| bad())?;
            let col: usize = f[1].parse().map_err(|_| bad())?;
            if r >= 4 || col >= 4 {
                return Err(bad());
            }
            rho[(r, col)] = c(f[2].parse().map_err(|_| bad())?, f[3].parse().map_err(|_| bad())?);
            seen += 1;
        }
        if seen != 16 {
            return Err(Error::InvalidState(format!("expected 16 entries, got {seen}")));
        }
        Self::new(rho, basis)
    }
}

/// Ideal gate `exp(−iφ J_y²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateTarget {
    pub phase: f64,
    /// Computational-basis unitary.
    pub unitary: Mat4,
}

/// `exp(−iφ J_y²)` from the spectral decomposition of `J_y`.
pub fn ideal_gate(phase: f64) -> GateTarget {
    let basis = JyBasis::new();
    let diag = Vec4::from_iterator(basis.eigenvalues.iter().map(|l| C64::from_polar(1.0, -phase * l * l)));
    let unitary = basis.transform * Mat4::from_diagonal(&diag) * basis.transform.adjoint();
    GateTarget { phase, unitary }
}

/// `|Ψ⟩ = exp(−iφ J_y²)|00⟩`.
pub fn target_state(phase: f64) -> Vec4 {
    ideal_gate(phase).unitary.column(0).into_owned()
}

/// `F = ⟨Ψ|ρ|Ψ⟩` with `|Ψ⟩ = exp(−iφ J_y²)|00⟩`.
pub fn gate_fidelity_for(phase: f64, state: &QubitState) -> Result<f64> {
    state.validate()?;
    let rho = state.from_jy_basis().rho;
    let psi = target_state(phase);
    let f = (psi.adjoint() * rho * psi)[(0, 0)];
    if f.im.abs() > 1e-12 {
        return Err(Error::NumericalConsistency(format!("fidelity has imaginary part {:e}", f.im)));
    }
    Ok(f.re.clamp(0.0, 1.0))
}

/// Fidelity against the maximally entangled target `exp(−iπ/8 J_y²)|00⟩`.
pub fn gate_fidelity(state: &QubitState) -> Result<f64> {
    gate_fidelity_for(ENTANGLING_PHASE, state)
}

pub fn max_abs(m: &Mat4) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_state(entries: &[f64]) -> QubitState {
        // ρ = G G† / tr for an arbitrary complex G.
        let g = Mat4::from_iterator((0..16).map(|i| c(entries[2 * i], entries[2 * i + 1])));
        let m = g * g.adjoint();
        let tr = m.trace();
        QubitState::new(m / tr, Basis::Computational).unwrap()
    }

    #[test]
    fn jy_spectrum() {
        let jy = jy_matrix();
        assert!(max_abs(&(jy - jy.adjoint())) == 0.0);
        assert!(jy.trace().norm() < 1e-15);
        let mut ev: Vec<f64> = SymmetricEigen::new(jy).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (a, b) in ev.iter().zip([2.0, 0.0, 0.0, -2.0]) {
            assert!((a - b).abs() < 1e-14);
        }
        let mut ev2: Vec<f64> = SymmetricEigen::new(jy * jy).eigenvalues.iter().copied().collect();
        ev2.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in ev2.iter().zip([0.0, 0.0, 4.0, 4.0]) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn basis_diagonalizes_jy() {
        let b = JyBasis::new();
        let v = b.transform;
        assert!(max_abs(&(v.adjoint() * v - Mat4::identity())) < 1e-14);
        let d = v.adjoint() * jy_matrix() * v;
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j { b.eigenvalues[i] } else { 0.0 };
                assert!((d[(i, j)] - c(expected, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn ket00_weights_in_jy_basis() {
        let s = QubitState::computational(0).unwrap().to_jy_basis();
        let w: Vec<f64> = (0..4).map(|i| s.rho[(i, i)].re).collect();
        // l-resolved: 1/4 at l=+2, 1/2 at l=0 (all on the symmetric vector), 1/4 at l=−2.
        let expected = [0.25, 0.5, 0.0, 0.25];
        for (a, b) in w.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn maximally_mixed_is_basis_independent() {
        let m = QubitState::maximally_mixed();
        assert!(max_abs(&(m.to_jy_basis().rho - m.rho)) < 1e-15);
    }

    #[test]
    fn ideal_gate_cases() {
        assert!(max_abs(&(ideal_gate(0.0).unitary - Mat4::identity())) < 1e-15);
        assert!(max_abs(&(ideal_gate(PI / 2.0).unitary - Mat4::identity())) < 1e-13);
        let g = ideal_gate(0.731).unitary;
        assert!(max_abs(&(g.adjoint() * g - Mat4::identity())) < 1e-14);
        // Against a direct Padé exponential of −iφJ_y².
        let jy = jy_matrix();
        let direct = (jy * jy * c(0.0, -0.731)).exp();
        assert!(max_abs(&(g - direct)) < 1e-13);
    }

    #[test]
    fn entangling_target_is_maximally_entangled() {
        let psi = target_state(ENTANGLING_PHASE);
        let s = QubitState::from_pure(&psi, Basis::Computational).unwrap();
        assert!((s.single_qubit_entropy() - 2f64.ln()).abs() < 1e-10);
        assert!((gate_fidelity(&s).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn fidelity_of_mixed_state() {
        let f = gate_fidelity(&QubitState::maximally_mixed()).unwrap();
        assert!((f - 0.25).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_states() {
        let mut m = Mat4::identity() * c(0.25, 0.0);
        m[(0, 1)] = c(0.1, 0.0);
        assert!(QubitState::new(m, Basis::Computational).is_err());
        assert!(QubitState::new(Mat4::identity(), Basis::Computational).is_err());
        let mut neg = Mat4::zeros();
        neg[(0, 0)] = c(1.5, 0.0);
        neg[(1, 1)] = c(-0.5, 0.0);
        assert!(QubitState::new(neg, Basis::Computational).is_err());
        let bogus = QubitState { rho: Mat4::identity(), basis: Basis::Computational };
        assert!(gate_fidelity(&bogus).is_err());
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let s = QubitState::from_pure(&target_state(0.3), Basis::Computational).unwrap().to_jy_basis();
        let back = QubitState::from_csv(&s.to_csv()).unwrap();
        assert_eq!(back.basis, Basis::JyEigen);
        assert!(max_abs(&(back.rho - s.rho)) < 1e-16);
        assert!(QubitState::from_csv("# basis=foo\nrow,col,re,im\n").is_err());
        assert!(QubitState::from_csv("# basis=computational\nrow,col,re,im\n0,0,1,0\n").is_err());
    }

    proptest! {
        #[test]
        fn jy_round_trip(entries in proptest::collection::vec(-1.0f64..1.0, 32)) {
            let s = random_state(&entries);
            let back = s.to_jy_basis().from_jy_basis();
            prop_assert!(max_abs(&(back.rho - s.rho)) < 1e-13);
            prop_assert!(back.validate().is_ok());
        }

        #[test]
        fn fidelity_is_bounded(entries in proptest::collection::vec(-1.0f64..1.0, 32), phase in 0.0f64..3.0) {
            let f = gate_fidelity_for(phase, &random_state(&entries)).unwrap();
            prop_assert!((0.0..=1.0).contains(&f));
        }
    }
}
