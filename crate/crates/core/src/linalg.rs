use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

/// Largest entry modulus of `a − b`.
pub fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn max_abs(a: &DMatrix<C64>) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Frobenius norm.
pub fn frobenius(a: &DMatrix<C64>) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Dense matrix exponential (scaling and squaring Padé).
pub fn expm(a: &DMatrix<C64>) -> DMatrix<C64> {
    a.clone().exp()
}
