//! Gauss–Hermite quadrature nodes and weights via Golub–Welsch.
//!
//! The rule integrates ∫ e^(−x²) f(x) dx ≈ Σ w_k f(x_k). The companion
//! matrix of the Hermite recurrence is symmetric tridiagonal with zero
//! diagonal and off-diagonal √(k/2); nodes are its eigenvalues and each
//! weight is √π times the squared first component of the eigenvector.

use nalgebra::DMatrix;

/// Nodes (ascending) and weights of the order-`n` Gauss–Hermite rule.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature order must be at least 1");
    if n == 1 {
        return (vec![0.0], vec![std::f64::consts::PI.sqrt()]);
    }
    let mut companion = DMatrix::<f64>::zeros(n, n);
    for k in 0..n - 1 {
        let off = ((k as f64 + 1.0) * 0.5).sqrt();
        companion[(k, k + 1)] = off;
        companion[(k + 1, k)] = off;
    }
    let eig = companion.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let first = eig.eigenvectors[(0, k)];
            (
                eig.eigenvalues[k],
                first * first * std::f64::consts::PI.sqrt(),
            )
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// Quadrature grid for averaging over a detuning δ ~ Normal(0, σ):
/// returns (δ_k, normalized weights summing to one).
pub fn gaussian_average_grid(n: usize, sigma: f64) -> (Vec<f64>, Vec<f64>) {
    let (nodes, weights) = gauss_hermite(n);
    let total: f64 = weights.iter().sum();
    let deltas = nodes
        .iter()
        .map(|x| std::f64::consts::SQRT_2 * sigma * x)
        .collect();
    let normalized = weights.iter().map(|w| w / total).collect();
    (deltas, normalized)
}
