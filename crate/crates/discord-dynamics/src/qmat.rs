//! Dense 4×4 (and 2×2) complex Hermitian matrix core.
//!
//! The four basis levels of the electron–nuclear system are ordered as
//!
//! ```text
//! 1 = |e↑,n↑⟩   2 = |e↑,n↓⟩   3 = |e↓,n↑⟩   4 = |e↓,n↓⟩
//! ```
//!
//! so the full space factors as electron ⊗ nucleus with level index
//! `2a + b` (`a`, `b` ∈ {0, 1}, 0 = spin up). Subsystem A is the electron,
//! subsystem B the nucleus. The selective transitions are
//! MW2: 1↔3, MW1: 2↔4, RF1: 1↔2, RF2: 3↔4; `EFlip` drives both electron
//! transitions at once (σ_x ⊗ 𝟙 for a π rotation).
//!
//! All rotations use the convention U = exp[−i(θ/2)(cos φ σ_x + sin φ σ_y)],
//! i.e. φ = 0 is a pure x rotation.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use thiserror::Error;

pub type CMat2 = Matrix2<Complex64>;
pub type CMat4 = Matrix4<Complex64>;

/// Maximum allowed |m − m†| entry for a state.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Maximum allowed |Tr ρ − 1|.
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues may undershoot zero by at most this much.
pub const POSITIVITY_SLACK: f64 = 1e-10;
/// Maximum allowed |u†u − 𝟙| entry for a unitary.
pub const UNITARITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Error)]
pub enum StateError {
    #[error("matrix is not Hermitian (max |m - m†| = {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix trace {0} is not 1")]
    NonUnitTrace(f64),
    #[error("matrix has negative eigenvalue {0:.3e}")]
    NotPositive(f64),
    #[error("matrix is not unitary (max |u†u - 1| = {0:.3e})")]
    NotUnitary(f64),
}

/// Tensor factor selector for two-qubit operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Subsystem {
    /// Electron spin (first factor).
    A,
    /// Nuclear spin (second factor).
    B,
}

/// Selective-transition channels of the four-level system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Channel {
    Mw1,
    Mw2,
    Rf1,
    Rf2,
    /// Broadband electron flip addressing both EPR transitions.
    EFlip,
}

impl Channel {
    /// Zero-based level pair driven by the channel; `None` for [`Channel::EFlip`].
    pub fn subspace(self) -> Option<(usize, usize)> {
        match self {
            Channel::Mw2 => Some((0, 2)),
            Channel::Mw1 => Some((1, 3)),
            Channel::Rf1 => Some((0, 1)),
            Channel::Rf2 => Some((2, 3)),
            Channel::EFlip => None,
        }
    }
}

impl std::fmt::Display for Channel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Channel::Mw1 => "MW1",
            Channel::Mw2 => "MW2",
            Channel::Rf1 => "RF1",
            Channel::Rf2 => "RF2",
            Channel::EFlip => "E-FLIP",
        };
        f.write_str(s)
    }
}

const Z: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// 2×2 Pauli matrix σ_i with σ_0 = 𝟙.
pub fn pauli(i: usize) -> CMat2 {
    let im = Complex64::new(0.0, 1.0);
    match i {
        0 => CMat2::new(ONE, Z, Z, ONE),
        1 => CMat2::new(Z, ONE, ONE, Z),
        2 => CMat2::new(Z, -im, im, Z),
        3 => CMat2::new(ONE, Z, Z, -ONE),
        _ => panic!("pauli index {i} out of range"),
    }
}

/// Kronecker product a ⊗ b in the level ordering above.
pub fn kron2(a: &CMat2, b: &CMat2) -> CMat4 {
    let mut m = CMat4::zeros();
    for ia in 0..2 {
        for ja in 0..2 {
            for ib in 0..2 {
                for jb in 0..2 {
                    m[(2 * ia + ib, 2 * ja + jb)] = a[(ia, ja)] * b[(ib, jb)];
                }
            }
        }
    }
    m
}

fn max_abs_dev_from_hermitian<const N: usize>(m: &nalgebra::SMatrix<Complex64, N, N>) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..N {
        for j in 0..N {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Ascending eigenvalues of a Hermitian 4×4 matrix.
pub fn hermitian_eigenvalues4(m: &CMat4) -> [f64; 4] {
    let eig = m.symmetric_eigen();
    let mut ev = [0.0; 4];
    for (k, v) in eig.eigenvalues.iter().enumerate() {
        ev[k] = *v;
    }
    ev.sort_by(f64::total_cmp);
    ev
}

/// Ascending eigenvalues of a Hermitian 2×2 matrix, in closed form.
pub fn hermitian_eigenvalues2(m: &CMat2) -> [f64; 2] {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let mid = 0.5 * (a + d);
    let h = (0.25 * (a - d) * (a - d) + m[(0, 1)].norm_sqr()).sqrt();
    [mid - h, mid + h]
}

fn entropy_of_spectrum(ev: &[f64]) -> f64 {
    let mut s = 0.0;
    for &lambda in ev {
        // clip into [0, 1]; 0·log 0 ≡ 0
        let l = lambda.clamp(0.0, 1.0);
        if l > 0.0 {
            s -= l * l.log2();
        }
    }
    s
}

/// A validated 4×4 density matrix of the full electron–nuclear system.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: CMat4,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity before wrapping.
    pub fn new(m: CMat4) -> Result<Self, StateError> {
        let dev = max_abs_dev_from_hermitian(&m);
        if dev > HERMITICITY_TOL {
            return Err(StateError::NotHermitian(dev));
        }
        let tr = m.trace().re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(StateError::NonUnitTrace(tr));
        }
        let ev = hermitian_eigenvalues4(&m);
        if ev[0] < -POSITIVITY_SLACK {
            return Err(StateError::NotPositive(ev[0]));
        }
        Ok(Self { m })
    }

    /// The maximally mixed state 𝟙/4.
    pub fn maximally_mixed() -> Self {
        Self {
            m: CMat4::identity() * Complex64::new(0.25, 0.0),
        }
    }

    pub fn matrix(&self) -> &CMat4 {
        &self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.m[(i, j)]
    }

    /// Ascending spectrum.
    pub fn eigenvalues(&self) -> [f64; 4] {
        hermitian_eigenvalues4(&self.m)
    }

    /// Von Neumann entropy −Tr[ρ log₂ ρ] in bits; lies in [0, 2].
    pub fn entropy_bits(&self) -> f64 {
        entropy_of_spectrum(&self.eigenvalues())
    }

    /// Traces out the complement of `keep`, returning the reduced state.
    pub fn partial_trace(&self, keep: Subsystem) -> ReducedDensityMatrix {
        let mut r = CMat2::zeros();
        match keep {
            Subsystem::A => {
                for a in 0..2 {
                    for ap in 0..2 {
                        r[(a, ap)] = self.m[(2 * a, 2 * ap)] + self.m[(2 * a + 1, 2 * ap + 1)];
                    }
                }
            }
            Subsystem::B => {
                for b in 0..2 {
                    for bp in 0..2 {
                        r[(b, bp)] = self.m[(b, bp)] + self.m[(2 + b, 2 + bp)];
                    }
                }
            }
        }
        ReducedDensityMatrix { m: r }
    }

    /// Coefficients r_ij = Tr[ρ (σ_i ⊗ σ_j)] of the Pauli product expansion.
    pub fn pauli_expansion(&self) -> PauliVector {
        let mut r = [[0.0; 4]; 4];
        for (i, row) in r.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                let op = kron2(&pauli(i), &pauli(j));
                *slot = (self.m * op).trace().re;
            }
        }
        PauliVector { r }
    }

    /// Conjugation ρ ↦ UρU†. Rejects `u` that is not unitary to within
    /// [`UNITARITY_TOL`]; trace and spectrum are preserved.
    pub fn conjugate(&self, u: &CMat4) -> Result<Self, StateError> {
        let dev = (u.adjoint() * u - CMat4::identity())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        if dev > UNITARITY_TOL {
            return Err(StateError::NotUnitary(dev));
        }
        Self::new(u * self.m * u.adjoint())
    }
}

/// A validated 2×2 reduced density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedDensityMatrix {
    m: CMat2,
}

impl ReducedDensityMatrix {
    pub fn new(m: CMat2) -> Result<Self, StateError> {
        let dev = max_abs_dev_from_hermitian(&m);
        if dev > HERMITICITY_TOL {
            return Err(StateError::NotHermitian(dev));
        }
        let tr = m.trace().re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(StateError::NonUnitTrace(tr));
        }
        let ev = hermitian_eigenvalues2(&m);
        if ev[0] < -POSITIVITY_SLACK {
            return Err(StateError::NotPositive(ev[0]));
        }
        Ok(Self { m })
    }

    pub fn matrix(&self) -> &CMat2 {
        &self.m
    }

    pub fn eigenvalues(&self) -> [f64; 2] {
        hermitian_eigenvalues2(&self.m)
    }

    /// Von Neumann entropy in bits; lies in [0, 1].
    pub fn entropy_bits(&self) -> f64 {
        entropy_of_spectrum(&self.eigenvalues())
    }
}

/// Von Neumann entropy of a full system state, in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    rho.entropy_bits()
}

/// Pauli product coefficients r_ij = Tr[ρ (σ_i ⊗ σ_j)], σ_0 = 𝟙.
///
/// For any Hermitian unit-trace ρ: r_00 = 1 and |r_ij| ≤ 1, and
/// ρ = (1/4) Σ_ij r_ij σ_i ⊗ σ_j reconstructs the input exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliVector {
    r: [[f64; 4]; 4],
}

impl PauliVector {
    pub fn coefficient(&self, i: usize, j: usize) -> f64 {
        self.r[i][j]
    }

    /// The diagonal correlation coefficients (r_11, r_22, r_33).
    pub fn diagonal_correlations(&self) -> [f64; 3] {
        [self.r[1][1], self.r[2][2], self.r[3][3]]
    }

    /// The 3×3 correlation block r_ij for i, j ≥ 1.
    pub fn correlation_block(&self) -> nalgebra::Matrix3<f64> {
        nalgebra::Matrix3::from_fn(|i, j| self.r[i + 1][j + 1])
    }

    /// Local Bloch vectors (r_i0) and (r_0j) of the two subsystems.
    pub fn bloch_vectors(&self) -> ([f64; 3], [f64; 3]) {
        (
            [self.r[1][0], self.r[2][0], self.r[3][0]],
            [self.r[0][1], self.r[0][2], self.r[0][3]],
        )
    }

    /// Rebuilds (1/4) Σ_ij r_ij σ_i ⊗ σ_j.
    pub fn reconstruct(&self) -> CMat4 {
        let mut m = CMat4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m += kron2(&pauli(i), &pauli(j)) * Complex64::new(0.25 * self.r[i][j], 0.0);
            }
        }
        m
    }
}

/// Unitary for a selective two-level rotation embedded in the 4×4 space.
///
/// The driven pair evolves under exp[−i(θ/2)(cos φ σ_x + sin φ σ_y)] while
/// the remaining levels are untouched; `EFlip` rotates both electron
/// transitions simultaneously (the 2×2 rotation acting on the electron
/// factor).
pub fn embed_rotation(channel: Channel, theta: f64, phi: f64) -> CMat4 {
    let half = 0.5 * theta;
    let c = Complex64::new(half.cos(), 0.0);
    // -i sin(θ/2) (cos φ σ_x + sin φ σ_y) as explicit 2×2 entries
    let off01 = Complex64::new(-half.sin() * phi.sin(), -half.sin() * phi.cos());
    let off10 = Complex64::new(half.sin() * phi.sin(), -half.sin() * phi.cos());
    let u2 = CMat2::new(c, off01, off10, c);
    match channel.subspace() {
        Some((i, j)) => {
            let mut u = CMat4::identity();
            u[(i, i)] = u2[(0, 0)];
            u[(i, j)] = u2[(0, 1)];
            u[(j, i)] = u2[(1, 0)];
            u[(j, j)] = u2[(1, 1)];
            u
        }
        None => kron2(&u2, &pauli(0)),
    }
}
