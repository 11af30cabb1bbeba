//! Joint qubit ⊗ oscillator density matrices.
//!
//! Index layout is qubit-major: row `q·N + n` is qubit basis vector `q` with
//! `n` oscillator quanta, so block `(q, q')` is the `N×N` oscillator operator
//! `⟨q|ρ|q'⟩`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock;
use crate::qubit::{Basis, JyBasis, Mat4, QubitState};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-8;
pub const PSD_FLOOR: f64 = -1e-7;
pub const TOP_LEVEL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    rho: DMatrix<C64>,
    fock_dim: usize,
    basis: Basis,
}

impl JointState {
    pub fn from_matrix(rho: DMatrix<C64>, fock_dim: usize, basis: Basis) -> Result<Self> {
        if fock_dim == 0 || rho.nrows() != 4 * fock_dim || rho.ncols() != 4 * fock_dim {
            return Err(Error::InvalidState(format!(
                "joint matrix is {}x{}, expected {}x{}",
                rho.nrows(),
                rho.ncols(),
                4 * fock_dim,
                4 * fock_dim
            )));
        }
        Ok(Self { rho, fock_dim, basis })
    }

    /// `ρ_q ⊗ ρ_osc`, in the qubit state's basis.
    pub fn product(qubits: &QubitState, osc: &DMatrix<C64>) -> Result<Self> {
        let n = osc.nrows();
        if osc.ncols() != n {
            return Err(Error::InvalidState("oscillator matrix not square".into()));
        }
        let q = DMatrix::from_fn(4, 4, |i, j| qubits.rho[(i, j)]);
        Self::from_matrix(q.kronecker(osc), n, qubits.basis)
    }

    pub fn coherent_product(qubits: &QubitState, beta: C64, fock_dim: usize) -> Result<Self> {
        Self::product(qubits, &fock::coherent_density(beta, fock_dim)?)
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.rho
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.rho
    }

    pub fn fock_dim(&self) -> usize {
        self.fock_dim
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn block(&self, q: usize, qp: usize) -> DMatrix<C64> {
        let n = self.fock_dim;
        self.rho.view((q * n, qp * n), (n, n)).into_owned()
    }

    pub fn set_block(&mut self, q: usize, qp: usize, block: &DMatrix<C64>) {
        let n = self.fock_dim;
        self.rho.view_mut((q * n, qp * n), (n, n)).copy_from(block);
    }

    /// Trace over the oscillator.
    pub fn partial_trace_osc(&self) -> QubitState {
        let mut out = Mat4::zeros();
        for q in 0..4 {
            for qp in 0..4 {
                let n = self.fock_dim;
                out[(q, qp)] = (0..n).map(|k| self.rho[(q * n + k, qp * n + k)]).sum();
            }
        }
        QubitState { rho: out, basis: self.basis }
    }

    /// Trace over the qubits.
    pub fn oscillator_state(&self) -> DMatrix<C64> {
        let n = self.fock_dim;
        let mut out = DMatrix::zeros(n, n);
        for q in 0..4 {
            out += self.rho.view((q * n, q * n), (n, n));
        }
        out
    }

    /// Total population of the highest retained Fock level.
    pub fn top_fock_population(&self) -> f64 {
        let n = self.fock_dim;
        (0..4).map(|q| self.rho[(q * n + n - 1, q * n + n - 1)].re).sum()
    }

    pub fn trace(&self) -> C64 {
        self.rho.trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let m = &self.rho;
        let mut worst = 0.0f64;
        for j in 0..m.ncols() {
            for i in 0..=j {
                worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.rho + self.rho.adjoint()) * C64::new(0.5, 0.0);
        SymmetricEigen::new(herm).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn check_truncation(&self) -> Result<()> {
        let top = self.top_fock_population();
        if top > TOP_LEVEL_TOL {
            return Err(Error::TruncationOverflow {
                detail: format!("top Fock level population {top:e} at N={}", self.fock_dim),
            });
        }
        Ok(())
    }

    /// Hermiticity, trace, positivity floor and truncation health.
    pub fn validate(&self) -> Result<()> {
        let h = self.hermiticity_error();
        if h > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("joint state not Hermitian ({h:e})")));
        }
        let tr = self.trace();
        if (tr - 1.0).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("joint trace {tr}")));
        }
        let min = self.min_eigenvalue();
        if min < PSD_FLOOR {
            return Err(Error::InvalidState(format!("joint state eigenvalue {min:e}")));
        }
        self.check_truncation()
    }

    /// Rewrite the qubit factor in `basis`: blocks mix as `V† ρ V` with `V` the `J_y` transform.
    pub fn in_basis(&self, basis: Basis) -> Self {
        if basis == self.basis {
            return self.clone();
        }
        let v = JyBasis::new().transform;
        // to J_y: ρ'_{ij} = Σ_ab conj(V_ai) V_bj ρ_ab ; back: with V†.
        let m = match basis {
            Basis::JyEigen => v,
            Basis::Computational => v.adjoint(),
        };
        let blocks: Vec<DMatrix<C64>> =
            (0..16).map(|k| self.block(k / 4, k % 4)).collect();
        let mut out = Self { rho: DMatrix::zeros(self.rho.nrows(), self.rho.ncols()), fock_dim: self.fock_dim, basis };
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = DMatrix::zeros(self.fock_dim, self.fock_dim);
                for a in 0..4 {
                    for b in 0..4 {
                        let w = m[(a, i)].conj() * m[(b, j)];
                        if w.norm() > 0.0 {
                            acc += &blocks[a * 4 + b] * w;
                        }
                    }
                }
                out.set_block(i, j, &acc);
            }
        }
        out
    }

    /// Half the trace norm of the difference.
    pub fn trace_distance(&self, other: &Self) -> Result<f64> {
        if self.fock_dim != other.fock_dim {
            return Err(Error::InvalidState("trace distance between different truncations".into()));
        }
        let other = other.in_basis(self.basis);
        let d = &self.rho - &other.rho;
        let herm = (&d + d.adjoint()) * C64::new(0.5, 0.0);
        Ok(0.5 * SymmetricEigen::new(herm).eigenvalues.iter().map(|x| x.abs()).sum::<f64>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::target_state;

    #[test]
    fn product_partial_trace() {
        let q = QubitState::from_pure(&target_state(0.4), Basis::Computational).unwrap();
        let j = JointState::coherent_product(&q, C64::new(1.0, 0.5), 30).unwrap();
        j.validate().unwrap();
        let back = j.partial_trace_osc();
        assert!(crate::qubit::max_abs(&(back.rho - q.rho)) < 1e-12);
        assert!((j.oscillator_state().trace() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn entangled_state_reduces_to_mixed_block() {
        // (|00⟩|0⟩ + |01⟩|1⟩ + |10⟩|2⟩ + |11⟩|3⟩)/2
        let n = 6;
        let mut psi = nalgebra::DVector::<C64>::zeros(4 * n);
        for q in 0..4 {
            psi[q * n + q] = C64::new(0.5, 0.0);
        }
        let j = JointState::from_matrix(&psi * psi.adjoint(), n, Basis::Computational).unwrap();
        let red = j.partial_trace_osc();
        assert!(crate::qubit::max_abs(&(red.rho - QubitState::maximally_mixed().rho)) < 1e-15);
    }

    #[test]
    fn basis_change_round_trip() {
        let q = QubitState::from_pure(&target_state(0.9), Basis::Computational).unwrap();
        let j = JointState::coherent_product(&q, C64::new(0.3, 0.0), 24).unwrap();
        let jy = j.in_basis(Basis::JyEigen);
        let direct = JointState::coherent_product(&q.to_jy_basis(), C64::new(0.3, 0.0), 24).unwrap();
        assert!(crate::linalg::max_abs_diff(jy.matrix(), direct.matrix()) < 1e-14);
        let back = jy.in_basis(Basis::Computational);
        assert!(crate::linalg::max_abs_diff(back.matrix(), j.matrix()) < 1e-14);
        assert!(j.trace_distance(&jy).unwrap() < 1e-13);
    }

    #[test]
    fn truncation_health() {
        let q = QubitState::computational(0).unwrap();
        let top = fock::fock_density(9, 10);
        let j = JointState::product(&q, &top).unwrap();
        assert!(matches!(j.check_truncation(), Err(Error::TruncationOverflow { .. })));
        assert!(JointState::from_matrix(DMatrix::zeros(5, 5), 2, Basis::Computational).is_err());
    }
}
