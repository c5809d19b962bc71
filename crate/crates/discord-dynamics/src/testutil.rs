//! Shared fixtures for unit tests.

use crate::qmat::{CMat4, DensityMatrix};
use num_complex::Complex64;

/// |Φ+⟩⟨Φ+|.
pub(crate) fn bell_phi_plus() -> DensityMatrix {
    let h = Complex64::new(0.5, 0.0);
    let mut m = CMat4::zeros();
    m[(0, 0)] = h;
    m[(0, 3)] = h;
    m[(3, 0)] = h;
    m[(3, 3)] = h;
    DensityMatrix::new(m).unwrap()
}

pub(crate) const MEASURED_EPS: f64 = 7.35e-3;

pub(crate) const MEASURED_RE: [[f64; 4]; 4] = [
    [0.21, 0.01, -0.01, -0.54],
    [0.01, -0.21, 0.50, 0.02],
    [-0.01, 0.50, -0.17, 0.01],
    [-0.54, 0.02, 0.01, 0.17],
];

pub(crate) const MEASURED_IM: [[f64; 4]; 4] = [
    [0.00, 0.02, -0.02, 0.11],
    [-0.02, 0.00, -0.15, 0.01],
    [0.02, 0.15, 0.00, -0.02],
    [-0.11, -0.01, 0.02, 0.00],
];

/// Per-element half-widths quoted with the tomography matrix, in ε units.
pub(crate) const MEASURED_ERR: [[f64; 4]; 4] = [
    [0.03, 0.01, 0.03, 0.08],
    [0.01, 0.03, 0.08, 0.01],
    [0.03, 0.08, 0.03, 0.02],
    [0.08, 0.01, 0.02, 0.03],
];

/// Tomography-style nearly maximally mixed state with small coherences.
pub(crate) fn measured_like_state() -> DensityMatrix {
    let mut m = CMat4::identity() * Complex64::new(0.25, 0.0);
    for i in 0..4 {
        for j in 0..4 {
            m[(i, j)] += Complex64::new(MEASURED_RE[i][j], MEASURED_IM[i][j]) * MEASURED_EPS;
        }
    }
    DensityMatrix::new(m).unwrap()
}
