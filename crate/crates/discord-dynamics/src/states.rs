//! Construction and recognition of the state family used throughout:
//! the thermal equilibrium state and Bell-diagonal states
//! ρ = (1/4)(𝟙 + Σ c_i σ_i ⊗ σ_i).
//!
//! In the level basis a Bell-diagonal state is
//!
//! ```text
//! diag = (1+c₃, 1−c₃, 1−c₃, 1+c₃)/4
//! ρ₁₄ = (c₁−c₂)/4      ρ₂₃ = (c₁+c₂)/4
//! ```
//!
//! with every other entry zero. Its eigenvalues in the Bell basis are the
//! four numbers (1−c₁−c₂−c₃)/4, (1−c₁+c₂+c₃)/4, (1+c₁−c₂+c₃)/4,
//! (1+c₁+c₂−c₃)/4; physicality means all of them are non-negative.
//!
//! The engine always stores full density matrices. Deviation matrices
//! (ρ − 𝟙/4)/ε are a display convention only, handled at the output layer.

use crate::qmat::{CMat4, DensityMatrix, StateError};
use num_complex::Complex64;
use thiserror::Error;

/// Bell-basis eigenvalues may undershoot zero by at most this much.
pub const PHYSICALITY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Error)]
pub enum StateFamilyError {
    #[error("unphysical Bell-diagonal coefficients: eigenvalue {0:.3e} < 0")]
    Unphysical(f64),
    #[error("thermal polarization {0} outside (0, 1/4)")]
    BadPolarization(f64),
    #[error(transparent)]
    State(#[from] StateError),
}

/// The (c₁, c₂, c₃) triple parameterizing a Bell-diagonal state.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BellDiagonalCoeffs {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl BellDiagonalCoeffs {
    /// Validates physicality (all Bell-basis eigenvalues ≥ −1e-12).
    pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self, StateFamilyError> {
        let c = Self { c1, c2, c3 };
        let min = c
            .bell_eigenvalues()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min < -PHYSICALITY_SLACK {
            return Err(StateFamilyError::Unphysical(min));
        }
        Ok(c)
    }

    /// The four Bell-basis eigenvalues of the corresponding state.
    /// Callers decide pass/fail; see [`PHYSICALITY_SLACK`].
    pub fn bell_eigenvalues(&self) -> [f64; 4] {
        let Self { c1, c2, c3 } = *self;
        [
            0.25 * (1.0 - c1 - c2 - c3),
            0.25 * (1.0 - c1 + c2 + c3),
            0.25 * (1.0 + c1 - c2 + c3),
            0.25 * (1.0 + c1 + c2 - c3),
        ]
    }

    /// Builds the full density matrix of Eq. ρ = (1/4)(𝟙 + Σ c_i σ_iσ_i).
    pub fn to_density(&self) -> DensityMatrix {
        let Self { c1, c2, c3 } = *self;
        let re = |x: f64| Complex64::new(x, 0.0);
        let mut m = CMat4::zeros();
        m[(0, 0)] = re(0.25 * (1.0 + c3));
        m[(1, 1)] = re(0.25 * (1.0 - c3));
        m[(2, 2)] = re(0.25 * (1.0 - c3));
        m[(3, 3)] = re(0.25 * (1.0 + c3));
        m[(0, 3)] = re(0.25 * (c1 - c2));
        m[(3, 0)] = re(0.25 * (c1 - c2));
        m[(1, 2)] = re(0.25 * (c1 + c2));
        m[(2, 1)] = re(0.25 * (c1 + c2));
        DensityMatrix::new(m).expect("physical coefficients always give a valid state")
    }

    /// Reads (c₁, c₂, c₃) = (r₁₁, r₂₂, r₃₃) off an arbitrary state and
    /// reports the Frobenius norm of what the Bell-diagonal model drops.
    pub fn from_density(rho: &DensityMatrix) -> (Self, f64) {
        let [c1, c2, c3] = rho.pauli_expansion().diagonal_correlations();
        // diagonal entries of a PSD matrix in the Bell basis are ≥ 0, so the
        // extracted triple is always physical up to rounding
        let c = Self { c1, c2, c3 };
        let model = c.to_density();
        let mut frob = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                frob += (rho.entry(i, j) - model.entry(i, j)).norm_sqr();
            }
        }
        (c, frob.sqrt())
    }

    /// Whether `rho` is Bell-diagonal to within `tol` (Frobenius).
    pub fn recognize(rho: &DensityMatrix, tol: f64) -> Option<Self> {
        let (c, residual) = Self::from_density(rho);
        (residual <= tol).then_some(c)
    }
}

/// Default Frobenius tolerance for Bell-diagonal recognition of
/// tomography-scale matrices, 0.05·ε.
pub fn recognition_tol(epsilon: f64) -> f64 {
    0.05 * epsilon
}

/// Thermal polarization of the electron spin, ε = gβ_eB₀/8k_BT.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ThermalParams {
    pub epsilon: f64,
}

impl ThermalParams {
    pub fn new(epsilon: f64) -> Result<Self, StateFamilyError> {
        if !(epsilon > 0.0 && epsilon < 0.25) {
            return Err(StateFamilyError::BadPolarization(epsilon));
        }
        Ok(Self { epsilon })
    }
}

/// Thermal equilibrium state ρ₀ = 𝟙/4 − ε σ_z ⊗ 𝟙
/// = diag(1/4−ε, 1/4−ε, 1/4+ε, 1/4+ε).
pub fn thermal_state(p: &ThermalParams) -> DensityMatrix {
    let mut m = CMat4::zeros();
    let lo = Complex64::new(0.25 - p.epsilon, 0.0);
    let hi = Complex64::new(0.25 + p.epsilon, 0.0);
    m[(0, 0)] = lo;
    m[(1, 1)] = lo;
    m[(2, 2)] = hi;
    m[(3, 3)] = hi;
    DensityMatrix::new(m).expect("thermal state is always valid")
}
