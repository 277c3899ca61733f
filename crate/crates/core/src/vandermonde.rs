//! Vandermonde interpolation systems `Σ_j a_j x_i^j = f_i`.

use num_complex::Complex64;

/// Solves `Σ_j a_j x_i^j = f_i` for `a` by Newton divided differences
/// followed by conversion to monomial form (Björck–Pereyra). The nodes must
/// be pairwise distinct.
pub fn solve(nodes: &[Complex64], rhs: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(nodes.len(), rhs.len(), "system must be square");
    let n = nodes.len();
    let mut c = rhs.to_vec();
    for k in 0..n.saturating_sub(1) {
        for i in (k + 1..n).rev() {
            c[i] = (c[i] - c[i - 1]) / (nodes[i] - nodes[i - k - 1]);
        }
    }
    for k in (0..n.saturating_sub(1)).rev() {
        for i in k..n - 1 {
            let next = c[i + 1];
            c[i] -= nodes[k] * next;
        }
    }
    c
}

/// Largest `|Σ_j a_j x_i^j - f_i|` over the rows.
pub fn residual(nodes: &[Complex64], coeffs: &[Complex64], rhs: &[Complex64]) -> f64 {
    nodes
        .iter()
        .zip(rhs)
        .map(|(&x, &f)| (horner(coeffs, x) - f).norm())
        .fold(0.0, f64::max)
}

pub fn horner(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * x + a)
}
