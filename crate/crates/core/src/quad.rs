//! Adaptive Gauss–Legendre quadrature for vector-valued complex integrands.
//!
//! Each panel is integrated with a fixed-order rule and compared against the
//! sum over its two halves; panels whose difference exceeds their share of the
//! tolerance are bisected.

use std::sync::OnceLock;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const ORDER: usize = 12;
const MAX_DEPTH: u32 = 40;

fn rule() -> &'static [(f64, f64); ORDER] {
    static RULE: OnceLock<[(f64, f64); ORDER]> = OnceLock::new();
    RULE.get_or_init(legendre_rule::<ORDER>)
}

/// Nodes and weights on `[-1, 1]` by Newton iteration on `P_n`.
fn legendre_rule<const N: usize>() -> [(f64, f64); N] {
    let mut out = [(0.0, 0.0); N];
    let n = N as f64;
    for (i, slot) in out.iter_mut().enumerate() {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=N {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        *slot = (x, 2.0 / ((1.0 - x * x) * dp * dp));
    }
    out
}

fn panel<const K: usize>(f: &impl Fn(f64) -> [C64; K], a: f64, b: f64) -> [C64; K] {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = [C64::new(0.0, 0.0); K];
    for &(x, w) in rule() {
        let v = f(mid + half * x);
        for (s, v) in acc.iter_mut().zip(v) {
            *s += v * (w * half);
        }
    }
    acc
}

fn max_diff<const K: usize>(x: &[C64; K], y: &[C64; K]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

/// Integrate `f` over `[a, b]` to `max(abs_tol, rel_tol·|I|)` per component.
///
/// Returns the integral and the accumulated error estimate.
pub fn integrate<const K: usize>(
    f: impl Fn(f64) -> [C64; K],
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<([C64; K], f64)> {
    if b <= a {
        return Ok(([C64::new(0.0, 0.0); K], 0.0));
    }
    let whole = panel(&f, a, b);
    let scale = whole.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let tol = abs_tol.max(rel_tol * scale);
    let mut total = [C64::new(0.0, 0.0); K];
    let mut err = 0.0;
    let mut stack = vec![(a, b, whole, 0u32)];
    while let Some((lo, hi, est, depth)) = stack.pop() {
        let m = 0.5 * (lo + hi);
        let left = panel(&f, lo, m);
        let right = panel(&f, m, hi);
        let mut refined = left;
        for (r, v) in refined.iter_mut().zip(right) {
            *r += v;
        }
        let diff = max_diff(&est, &refined);
        let share = tol * (hi - lo) / (b - a);
        if diff <= share || diff <= 1e-15 * scale.max(f64::MIN_POSITIVE) {
            for (t, v) in total.iter_mut().zip(refined) {
                *t += v;
            }
            err += diff;
        } else if depth >= MAX_DEPTH {
            return Err(Error::QuadratureNonConvergence { a: lo, b: hi, achieved: diff, wanted: share });
        } else {
            stack.push((m, hi, right, depth + 1));
            stack.push((lo, m, left, depth + 1));
        }
    }
    Ok((total, err))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let w: f64 = rule().iter().map(|p| p.1).sum();
        assert!((w - 2.0).abs() < 1e-14);
        // ∫₋₁¹ x^22 = 2/23
        let v: f64 = rule().iter().map(|&(x, w)| w * x.powi(22)).sum();
        assert!((v - 2.0 / 23.0).abs() < 1e-14);
    }

    #[test]
    fn oscillatory_integral() {
        // ∫₀^10 e^{i 7 x} dx
        let (v, _) = integrate(|x| [C64::new(0.0, 7.0 * x).exp()], 0.0, 10.0, 1e-12, 0.0).unwrap();
        let exact = (C64::new(0.0, 70.0).exp() - 1.0) / C64::new(0.0, 7.0);
        assert!((v[0] - exact).norm() < 1e-12);
    }

    #[test]
    fn reports_non_convergence() {
        let r = integrate(|x: f64| [C64::new(1.0 / x.abs().sqrt().max(1e-300), 0.0)], -1.0, 1.0, 1e-14, 0.0);
        assert!(matches!(r, Err(Error::QuadratureNonConvergence { .. })));
    }
}
