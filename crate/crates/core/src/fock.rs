//! Truncated Fock-space operators and coherent states.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Largest acceptable norm deficit of a truncated coherent state.
pub const COHERENT_NORM_DEFICIT: f64 = 1e-10;

/// Smallest truncation accepted for a coherent amplitude: `⌈|β|² + 6|β| + 20⌉`.
pub fn min_fock_dim(beta: C64) -> usize {
    let b = beta.norm();
    (b * b + 6.0 * b + 20.0).ceil() as usize
}

/// Lowering operator `a` on levels `0..n`.
pub fn annihilation(n: usize) -> DMatrix<C64> {
    let mut a = DMatrix::zeros(n, n);
    for k in 0..n.saturating_sub(1) {
        a[(k, k + 1)] = C64::new(((k + 1) as f64).sqrt(), 0.0);
    }
    a
}

pub fn creation(n: usize) -> DMatrix<C64> {
    annihilation(n).adjoint()
}

pub fn number(n: usize) -> DMatrix<C64> {
    DMatrix::from_diagonal(&DVector::from_iterator(n, (0..n).map(|k| C64::new(k as f64, 0.0))))
}

/// Normalized truncated `|β⟩`; amplitudes `e^{−|β|²/2} βⁿ/√n!`.
pub fn coherent_state(beta: C64, n: usize) -> Result<DVector<C64>> {
    let need = min_fock_dim(beta);
    if n < need {
        return Err(Error::TruncationOverflow {
            detail: format!("coherent amplitude |β|={:.3} needs N >= {need}, got {n}", beta.norm()),
        });
    }
    let mut v = DVector::zeros(n);
    let mut amp = C64::new((-0.5 * beta.norm_sqr()).exp(), 0.0);
    for k in 0..n {
        if k > 0 {
            amp *= beta / (k as f64).sqrt();
        }
        v[k] = amp;
    }
    let norm = v.norm();
    let deficit = 1.0 - norm * norm;
    if deficit > COHERENT_NORM_DEFICIT {
        return Err(Error::TruncationOverflow {
            detail: format!("coherent state norm deficit {deficit:e} at N={n}"),
        });
    }
    Ok(v.unscale(norm))
}

pub fn coherent_density(beta: C64, n: usize) -> Result<DMatrix<C64>> {
    let v = coherent_state(beta, n)?;
    Ok(&v * v.adjoint())
}

pub fn fock_density(level: usize, n: usize) -> DMatrix<C64> {
    let mut rho = DMatrix::zeros(n, n);
    rho[(level, level)] = C64::new(1.0, 0.0);
    rho
}

/// Population of the highest retained level.
pub fn top_population(rho: &DMatrix<C64>) -> f64 {
    let n = rho.nrows();
    rho[(n - 1, n - 1)].re
}

/// `|⟨ψ|ρ|ψ⟩|` for a normalized `ψ`.
pub fn overlap(psi: &DVector<C64>, rho: &DMatrix<C64>) -> f64 {
    (psi.adjoint() * rho * psi)[(0, 0)].re
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_and_norm() {
        let v = coherent_state(C64::new(0.0, 0.0), 20).unwrap();
        assert_eq!(v[0], C64::new(1.0, 0.0));
        assert!(v.iter().skip(1).all(|z| z.norm() == 0.0));
        let b = coherent_state(C64::new(1.2, -0.7), 40).unwrap();
        assert!((b.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn coherent_mean_field() {
        let n = 40;
        let v = coherent_state(C64::new(2.0, 0.0), n).unwrap();
        let mean = (v.adjoint() * annihilation(n) * &v)[(0, 0)];
        assert!((mean - C64::new(2.0, 0.0)).norm() < 1e-8);
        // Independent check: amplitudes from the closed form without recursion.
        let mut fact = 1.0f64;
        for k in 0..10 {
            if k > 0 {
                fact *= k as f64;
            }
            let expected = (-2.0f64).exp() * 2f64.powi(k as i32) / fact.sqrt();
            assert!((v[k].re - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn truncation_rule() {
        assert_eq!(min_fock_dim(C64::new(0.0, 0.0)), 20);
        assert_eq!(min_fock_dim(C64::new(2.0, 0.0)), 36);
        assert_eq!(min_fock_dim(C64::new(5.0, 0.0)), 75);
        assert!(matches!(coherent_state(C64::new(2.0, 0.0), 20), Err(Error::TruncationOverflow { .. })));
    }

    #[test]
    fn ladder_commutator_below_edge() {
        let n = 12;
        let a = annihilation(n);
        let comm = &a * creation(n) - creation(n) * &a;
        for k in 0..n - 1 {
            assert!((comm[(k, k)] - C64::new(1.0, 0.0)).norm() < 1e-14);
        }
        assert!((number(n) - creation(n) * &a).iter().all(|z| z.norm() < 1e-14));
    }
}
