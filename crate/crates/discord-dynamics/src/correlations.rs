//! Correlation quantifiers for two-qubit states.
//!
//! All entropic quantities are in bits (log₂). The measured-side
//! convention follows D_B: the projective measurement acts on subsystem B
//! (the nucleus) unless stated otherwise; discord is asymmetric, so the
//! A-side variant is exposed through an explicit subsystem argument.
//!
//! * mutual information I = S(ρ_A) + S(ρ_B) − S(ρ_AB)
//! * classical correlation C_B = max over projective bases on B of
//!   S(ρ_A) − Σ_k p_k S(ρ_A^k)
//! * quantum discord D_B = I − C_B
//! * geometric discord 𝒟² = 2 min_{χ∈Ω₀} Tr(ρ − χ)², which for
//!   Bell-diagonal states reduces to (Σc_i² − max c_i²)/2
//!
//! The measurement basis is parameterized on the Bloch sphere as
//! |Θ∥⟩ = cos θ|0⟩ + e^{iφ} sin θ|1⟩, |Θ⊥⟩ = e^{−iφ} sin θ|0⟩ − cos θ|1⟩
//! with θ ∈ [0, π/2], φ ∈ [0, 2π). The maximization runs a coarse grid
//! followed by a derivative-free compass refinement; the objective is a
//! smooth trigonometric surface, so the default 64×128 grid always lands
//! in the global basin for two-qubit states.

use crate::qmat::{hermitian_eigenvalues2, CMat2, DensityMatrix, StateError, Subsystem};
use crate::states::{BellDiagonalCoeffs, StateFamilyError};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

pub const LN_2: f64 = std::f64::consts::LN_2;

#[derive(Debug, Clone, Error)]
pub enum CorrelationError {
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Family(#[from] StateFamilyError),
    #[error("optimizer config invalid: {0}")]
    BadConfig(String),
    #[error("coefficient {name} = {value} outside the Taylor domain |c| <= 0.1")]
    TaylorOutOfRange { name: &'static str, value: f64 },
    #[error("critical time undefined for non-positive c3 magnitude {0}")]
    DegenerateCriticalTime(f64),
    #[error("dephasing time must be positive, got {0}")]
    BadDephasingTime(f64),
    #[error("element errors must be symmetric and non-negative")]
    BadElementErrors,
    #[error("error-bar sampling needs at least 100 samples, got {0}")]
    TooFewSamples(usize),
}

/// Projective measurement basis on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MeasurementBasis {
    /// Polar half-angle in [0, π/2].
    pub theta: f64,
    /// Azimuth in [0, 2π).
    pub phi: f64,
}

impl MeasurementBasis {
    /// Amplitudes of |Θ∥⟩ and |Θ⊥⟩.
    fn vectors(&self) -> [[Complex64; 2]; 2] {
        let (s, c) = (self.theta.sin(), self.theta.cos());
        let e = Complex64::new(self.phi.cos(), self.phi.sin());
        [
            [Complex64::new(c, 0.0), e * s],
            [e.conj() * s, Complex64::new(-c, 0.0)],
        ]
    }

    /// Bloch direction of Π∥, (sin 2θ cos φ, sin 2θ sin φ, cos 2θ).
    fn direction(&self) -> [f64; 3] {
        let t2 = 2.0 * self.theta;
        [
            t2.sin() * self.phi.cos(),
            t2.sin() * self.phi.sin(),
            t2.cos(),
        ]
    }

    /// Basis whose Π∥ points along `n` (unit vector).
    fn from_direction(n: [f64; 3]) -> Self {
        Self {
            theta: 0.5 * n[2].clamp(-1.0, 1.0).acos(),
            phi: n[1].atan2(n[0]).rem_euclid(2.0 * std::f64::consts::PI),
        }
    }
}

/// Grid-plus-refinement settings for the measurement optimization.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerConfig {
    pub grid_theta: usize,
    pub grid_phi: usize,
    /// Refinement stops once basis-angle steps drop below this (radians).
    pub refine_tol: f64,
    pub max_refine_iters: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            grid_theta: 64,
            grid_phi: 128,
            refine_tol: 1e-10,
            max_refine_iters: 200,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<(), CorrelationError> {
        if self.grid_theta < 8 || self.grid_phi < 8 {
            return Err(CorrelationError::BadConfig(format!(
                "grid {}x{} below the 8-point minimum",
                self.grid_theta, self.grid_phi
            )));
        }
        if !(self.refine_tol > 0.0) {
            return Err(CorrelationError::BadConfig(format!(
                "refine_tol {} must be positive",
                self.refine_tol
            )));
        }
        Ok(())
    }
}

fn xlog2(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

/// Binary-entropy-complement of a Bloch length:
/// [(1+x)/2]·log₂(1+x) + [(1−x)/2]·log₂(1−x), with 0·log 0 ≡ 0.
fn bloch_information(x: f64) -> f64 {
    0.5 * (xlog2(1.0 + x) + xlog2(1.0 - x))
}

/// Mutual information I(ρ) = S(ρ_A) + S(ρ_B) − S(ρ_AB) in bits.
pub fn mutual_information(rho: &DensityMatrix) -> f64 {
    rho.partial_trace(Subsystem::A).entropy_bits() + rho.partial_trace(Subsystem::B).entropy_bits()
        - rho.entropy_bits()
}

/// Unnormalized conditional state of the kept subsystem after projecting
/// the measured one onto `v`; returns (p_k, p_k·ρ_kept^k).
fn conditional_unnormalized(
    rho: &DensityMatrix,
    measured: Subsystem,
    v: &[Complex64; 2],
) -> (f64, CMat2) {
    let m = rho.matrix();
    let mut out = CMat2::zeros();
    match measured {
        Subsystem::B => {
            for a in 0..2 {
                for ap in 0..2 {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for b in 0..2 {
                        for bp in 0..2 {
                            acc += v[b].conj() * m[(2 * a + b, 2 * ap + bp)] * v[bp];
                        }
                    }
                    out[(a, ap)] = acc;
                }
            }
        }
        Subsystem::A => {
            for b in 0..2 {
                for bp in 0..2 {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for a in 0..2 {
                        for ap in 0..2 {
                            acc += v[a].conj() * m[(2 * a + b, 2 * ap + bp)] * v[ap];
                        }
                    }
                    out[(b, bp)] = acc;
                }
            }
        }
    }
    (out.trace().re, out)
}

fn entropy_of_conditional(p: f64, unnormalized: &CMat2) -> f64 {
    let scale = Complex64::new(1.0 / p, 0.0);
    let normalized = unnormalized * scale;
    let ev = hermitian_eigenvalues2(&normalized);
    let mut s = 0.0;
    for lambda in ev {
        s -= xlog2(lambda.clamp(0.0, 1.0));
    }
    s
}

/// S(ρ_kept) − Σ_k p_k S(ρ_kept^k) for the basis {|Θ∥⟩, |Θ⊥⟩} on `measured`.
/// Branches with p_k = 0 contribute nothing.
fn accessible_information(
    rho: &DensityMatrix,
    measured: Subsystem,
    kept_entropy: f64,
    basis: &MeasurementBasis,
) -> f64 {
    let mut cond = 0.0;
    for v in basis.vectors() {
        let (p, m) = conditional_unnormalized(rho, measured, &v);
        if p > 1e-15 {
            cond += p * entropy_of_conditional(p, &m);
        }
    }
    kept_entropy - cond
}

fn other(side: Subsystem) -> Subsystem {
    match side {
        Subsystem::A => Subsystem::B,
        Subsystem::B => Subsystem::A,
    }
}

/// Orthonormal pair spanning the tangent plane of the unit sphere at `n`.
fn tangent_frame(n: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    // cross with the axis least aligned with n
    let axis = if n[0].abs() <= n[1].abs() && n[0].abs() <= n[2].abs() {
        [1.0, 0.0, 0.0]
    } else if n[1].abs() <= n[2].abs() {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let mut u = [
        n[1] * axis[2] - n[2] * axis[1],
        n[2] * axis[0] - n[0] * axis[2],
        n[0] * axis[1] - n[1] * axis[0],
    ];
    let norm = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
    for c in &mut u {
        *c /= norm;
    }
    let v = [
        n[1] * u[2] - n[2] * u[1],
        n[2] * u[0] - n[0] * u[2],
        n[0] * u[1] - n[1] * u[0],
    ];
    (u, v)
}

/// Classical correlation with the projective measurement on `measured`.
///
/// Coarse grid scan followed by compass refinement from the best grid
/// point; returns the maximum and its argmax basis.
pub fn classical_correlation_on(
    rho: &DensityMatrix,
    measured: Subsystem,
    cfg: &OptimizerConfig,
) -> Result<(f64, MeasurementBasis), CorrelationError> {
    cfg.validate()?;
    let kept_entropy = rho.partial_trace(other(measured)).entropy_bits();

    let dtheta = std::f64::consts::FRAC_PI_2 / (cfg.grid_theta - 1) as f64;
    let dphi = 2.0 * std::f64::consts::PI / cfg.grid_phi as f64;

    let mut best = f64::NEG_INFINITY;
    let mut arg = MeasurementBasis {
        theta: 0.0,
        phi: 0.0,
    };
    for i in 0..cfg.grid_theta {
        for j in 0..cfg.grid_phi {
            let basis = MeasurementBasis {
                theta: i as f64 * dtheta,
                phi: j as f64 * dphi,
            };
            let val = accessible_information(rho, measured, kept_entropy, &basis);
            if val > best {
                best = val;
                arg = basis;
            }
        }
    }

    // derivative-free local refinement: pattern search over the Bloch
    // direction of Π∥ in the tangent plane of the sphere, with step
    // re-expansion. Working on the sphere avoids the degenerate poles of
    // the (θ, φ) chart, where axis-aligned moves stall.
    let mut n = arg.direction();
    let step0 = 0.5 * dtheta.max(dphi);
    let mut step = step0;
    let mut iters = 0;
    while step > cfg.refine_tol && iters < cfg.max_refine_iters {
        iters += 1;
        let (u, v) = tangent_frame(n);
        let (cos_s, sin_s) = (step.cos(), step.sin());
        let mut improved = false;
        for k in 0..8 {
            let alpha = k as f64 * std::f64::consts::FRAC_PI_4;
            let (ca, sa) = (alpha.cos(), alpha.sin());
            let mut cand = [0.0; 3];
            let mut norm = 0.0;
            for (i, c) in cand.iter_mut().enumerate() {
                *c = n[i] * cos_s + (u[i] * ca + v[i] * sa) * sin_s;
                norm += *c * *c;
            }
            let norm = norm.sqrt();
            for c in &mut cand {
                *c /= norm;
            }
            let basis = MeasurementBasis::from_direction(cand);
            let val = accessible_information(rho, measured, kept_entropy, &basis);
            if val > best {
                best = val;
                arg = basis;
                n = cand;
                improved = true;
            }
        }
        if improved {
            step = (2.0 * step).min(step0);
        } else {
            step *= 0.5;
        }
    }

    Ok((best.max(0.0), arg))
}

/// Classical correlation C_B (measurement on the nucleus).
pub fn classical_correlation(
    rho: &DensityMatrix,
    cfg: &OptimizerConfig,
) -> Result<(f64, MeasurementBasis), CorrelationError> {
    classical_correlation_on(rho, Subsystem::B, cfg)
}

/// Quantum discord with the measurement on `measured`; I − C, allowed to
/// dip to −1e-6 by optimizer slack.
pub fn quantum_discord_on(
    rho: &DensityMatrix,
    measured: Subsystem,
    cfg: &OptimizerConfig,
) -> Result<f64, CorrelationError> {
    let (c, _) = classical_correlation_on(rho, measured, cfg)?;
    Ok(mutual_information(rho) - c)
}

/// Quantum discord D_B.
pub fn quantum_discord(
    rho: &DensityMatrix,
    cfg: &OptimizerConfig,
) -> Result<f64, CorrelationError> {
    quantum_discord_on(rho, Subsystem::B, cfg)
}

/// Closed-form classical correlation of a Bell-diagonal state:
/// with χ = max|c_i|, C = [(1+χ)/2]log₂(1+χ) + [(1−χ)/2]log₂(1−χ).
pub fn classical_correlation_analytic_bell(c: &BellDiagonalCoeffs) -> f64 {
    let chi = c.c1.abs().max(c.c2.abs()).max(c.c3.abs());
    bloch_information(chi)
}

/// Closed-form mutual information of a Bell-diagonal state,
/// 2 + Σ_k λ_k log₂ λ_k over the Bell-basis eigenvalues.
pub fn mutual_information_analytic_bell(c: &BellDiagonalCoeffs) -> f64 {
    2.0 + c.bell_eigenvalues().into_iter().map(xlog2).sum::<f64>()
}

/// Closed-form quantum discord of a Bell-diagonal state.
pub fn discord_analytic_bell(c: &BellDiagonalCoeffs) -> f64 {
    mutual_information_analytic_bell(c) - classical_correlation_analytic_bell(c)
}

/// Geometric discord 𝒟² of a Bell-diagonal state,
/// (c₁² + c₂² + c₃² − max c_i²)/2.
pub fn geometric_discord_analytic(c: &BellDiagonalCoeffs) -> f64 {
    let sq = [c.c1 * c.c1, c.c2 * c.c2, c.c3 * c.c3];
    let max = sq.into_iter().fold(0.0, f64::max);
    0.5 * (sq.iter().sum::<f64>() - max)
}

/// Geometric discord by direct minimization of 2·Tr(ρ − χ)² over the
/// restricted classical family: Bell-diagonal χ with exactly one nonzero
/// coefficient t ∈ [−1, 1] per axis (closed-form inner minimum via a
/// quadratic fit on matrix evaluations, outer minimum over the axes).
///
/// Serves as the independent verification route for
/// [`geometric_discord_analytic`].
pub fn geometric_discord_restricted_numeric(c: &BellDiagonalCoeffs) -> f64 {
    let rho = c.to_density();
    let distance_sq = |chi: &DensityMatrix| {
        let mut frob = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                frob += (rho.entry(i, j) - chi.entry(i, j)).norm_sqr();
            }
        }
        2.0 * frob
    };
    let axis_state = |axis: usize, t: f64| {
        let (c1, c2, c3) = match axis {
            0 => (t, 0.0, 0.0),
            1 => (0.0, t, 0.0),
            _ => (0.0, 0.0, t),
        };
        BellDiagonalCoeffs { c1, c2, c3 }.to_density()
    };
    let mut outer = f64::INFINITY;
    for axis in 0..3 {
        // q(t) is an exact quadratic in t; probe at −1, 0, 1 and evaluate
        // the clamped vertex directly
        let qm = distance_sq(&axis_state(axis, -1.0));
        let q0 = distance_sq(&axis_state(axis, 0.0));
        let qp = distance_sq(&axis_state(axis, 1.0));
        let a = 0.5 * (qp + qm) - q0;
        let b = 0.5 * (qp - qm);
        let t_star = if a > 0.0 {
            (-b / (2.0 * a)).clamp(-1.0, 1.0)
        } else {
            0.0
        };
        let q_star = distance_sq(&axis_state(axis, t_star));
        outer = outer.min(q_star.min(qm.min(qp)));
    }
    outer
}

/// Geometric discord of a state with vanishing local Bloch vectors, from
/// the singular values σ of the 3×3 Pauli correlation block:
/// (Σσ² − σ_max²)/2. Exact for Bell-diagonal states in any local frame;
/// for nearly Bell-diagonal tomography matrices the dropped Bloch terms
/// enter only at second order.
pub fn geometric_discord_zero_bloch(rho: &DensityMatrix) -> f64 {
    let t = rho.pauli_expansion().correlation_block();
    let sv = t.svd(false, false).singular_values;
    let total: f64 = sv.iter().map(|s| s * s).sum();
    let max = sv.iter().map(|s| s * s).fold(0.0, f64::max);
    0.5 * (total - max)
}

/// Small-coefficient expansion of the correlations of the c₁ = 0 family.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TaylorCorrelations {
    pub mutual_bits: f64,
    pub classical_bits: f64,
    pub discord_bits: f64,
    /// Set when an input magnitude exceeds 0.05 and the quadratic
    /// truncation starts to degrade.
    pub beyond_recommended: bool,
}

/// Taylor-approximated correlations for c₁ = 0, |c₂|, |c₃| ≪ 1:
/// I = (c₃² + c₂²)/(2 ln 2), C = max(c₂², c₃²)/(2 ln 2),
/// D = min(c₂², c₃²)/(2 ln 2).
///
/// Inputs above 0.1 in magnitude are rejected; above 0.05 the result is
/// flagged `beyond_recommended`.
pub fn taylor_correlations(c2: f64, c3: f64) -> Result<TaylorCorrelations, CorrelationError> {
    for (name, value) in [("c2", c2), ("c3", c3)] {
        if value.abs() > 0.1 {
            return Err(CorrelationError::TaylorOutOfRange { name, value });
        }
    }
    let (s2, s3) = (c2 * c2, c3 * c3);
    Ok(TaylorCorrelations {
        mutual_bits: (s2 + s3) / (2.0 * LN_2),
        classical_bits: s2.max(s3) / (2.0 * LN_2),
        discord_bits: s2.min(s3) / (2.0 * LN_2),
        beyond_recommended: c2.abs() > 0.05 || c3.abs() > 0.05,
    })
}

/// Critical time of the sudden transition, t_c = √(−ln|c₃/c₂(0)|)·T.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CriticalTime {
    pub t_ns: f64,
    /// Set when |c₂(0)| ≤ |c₃|: the classical-decoherence interval is
    /// empty and t_c = 0.
    pub degenerate: bool,
}

/// Solves c₂(t_c) = c₃ for Gaussian decay with time constant
/// `t_dephase_ns`; magnitudes are used throughout.
pub fn critical_time(
    c2_0: f64,
    c3: f64,
    t_dephase_ns: f64,
) -> Result<CriticalTime, CorrelationError> {
    if !(t_dephase_ns > 0.0) {
        return Err(CorrelationError::BadDephasingTime(t_dephase_ns));
    }
    let (a2, a3) = (c2_0.abs(), c3.abs());
    if a3 <= 0.0 {
        return Err(CorrelationError::DegenerateCriticalTime(a3));
    }
    if a3 >= a2 {
        return Ok(CriticalTime {
            t_ns: 0.0,
            degenerate: true,
        });
    }
    Ok(CriticalTime {
        t_ns: (-(a3 / a2).ln()).sqrt() * t_dephase_ns,
        degenerate: false,
    })
}

/// Per-element absolute half-widths for the real and imaginary parts of a
/// measured density matrix; symmetric under transpose.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ElementErrors {
    half_widths: [[f64; 4]; 4],
}

impl ElementErrors {
    pub fn new(half_widths: [[f64; 4]; 4]) -> Result<Self, CorrelationError> {
        for (i, row) in half_widths.iter().enumerate() {
            for (j, &w) in row.iter().enumerate() {
                if w < 0.0 || w != half_widths[j][i] {
                    return Err(CorrelationError::BadElementErrors);
                }
            }
        }
        Ok(Self { half_widths })
    }

    pub fn zeros() -> Self {
        Self {
            half_widths: [[0.0; 4]; 4],
        }
    }

    pub fn scaled(&self, factor: f64) -> Result<Self, CorrelationError> {
        let mut h = self.half_widths;
        for row in &mut h {
            for v in row.iter_mut() {
                *v *= factor;
            }
        }
        Self::new(h)
    }

    pub fn half_width(&self, i: usize, j: usize) -> f64 {
        self.half_widths[i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.half_widths.iter().flatten().all(|&w| w == 0.0)
    }
}

/// Half-width error bars on (I, C, D) from element perturbation.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ErrorBars {
    pub mutual_bits: f64,
    pub classical_bits: f64,
    pub discord_bits: f64,
}

/// Maximum deviation of the correlations over `n_samples` matrices whose
/// elements are drawn uniformly within the quoted half-widths, then
/// re-Hermitized, eigenvalue-clipped to positivity and trace-renormalized.
/// Deterministic for a fixed `seed`.
pub fn correlation_error_bars(
    rho: &DensityMatrix,
    errs: &ElementErrors,
    n_samples: usize,
    seed: u64,
    cfg: &OptimizerConfig,
) -> Result<ErrorBars, CorrelationError> {
    correlation_error_bars_on(rho, Subsystem::B, errs, n_samples, seed, cfg)
}

/// [`correlation_error_bars`] with the measurement on a chosen subsystem.
pub fn correlation_error_bars_on(
    rho: &DensityMatrix,
    measured: Subsystem,
    errs: &ElementErrors,
    n_samples: usize,
    seed: u64,
    cfg: &OptimizerConfig,
) -> Result<ErrorBars, CorrelationError> {
    if n_samples < 100 {
        return Err(CorrelationError::TooFewSamples(n_samples));
    }
    cfg.validate()?;
    let base_i = mutual_information(rho);
    let (base_c, _) = classical_correlation_on(rho, measured, cfg)?;
    let base_d = base_i - base_c;

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut worst = ErrorBars {
        mutual_bits: 0.0,
        classical_bits: 0.0,
        discord_bits: 0.0,
    };
    if errs.is_zero() {
        return Ok(worst);
    }
    for _ in 0..n_samples {
        let mut m = *rho.matrix();
        for i in 0..4 {
            for j in 0..4 {
                let w = errs.half_width(i, j);
                let dre = rng.gen_range(-1.0..=1.0) * w;
                let dim = rng.gen_range(-1.0..=1.0) * w;
                m[(i, j)] += Complex64::new(dre, dim);
            }
        }
        let perturbed = repair_to_state(&m)?;
        let i_s = mutual_information(&perturbed);
        let (c_s, _) = classical_correlation_on(&perturbed, measured, cfg)?;
        let d_s = i_s - c_s;
        worst.mutual_bits = worst.mutual_bits.max((i_s - base_i).abs());
        worst.classical_bits = worst.classical_bits.max((c_s - base_c).abs());
        worst.discord_bits = worst.discord_bits.max((d_s - base_d).abs());
    }
    Ok(worst)
}

/// Hermitize, clip negative eigenvalues to zero and renormalize the trace.
fn repair_to_state(m: &crate::qmat::CMat4) -> Result<DensityMatrix, CorrelationError> {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let mut rebuilt = crate::qmat::CMat4::zeros();
    let mut trace = 0.0;
    for k in 0..4 {
        let lambda = eig.eigenvalues[k].max(0.0);
        trace += lambda;
        let v = eig.eigenvectors.column(k);
        for i in 0..4 {
            for j in 0..4 {
                rebuilt[(i, j)] += v[i] * v[j].conj() * Complex64::new(lambda, 0.0);
            }
        }
    }
    rebuilt /= Complex64::new(trace, 0.0);
    // symmetrize away the last rounding in the reconstruction
    let rebuilt = (rebuilt + rebuilt.adjoint()) * Complex64::new(0.5, 0.0);
    Ok(DensityMatrix::new(rebuilt)?)
}

/// Closed-form correlations attached to a report when the state is
/// recognizably Bell-diagonal.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AnalyticBellColumns {
    pub mutual_bits: f64,
    pub classical_bits: f64,
    pub discord_bits: f64,
    pub geo_discord: f64,
}

/// Full correlation report for one state.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CorrelationReport {
    pub mutual_bits: f64,
    pub classical_bits: f64,
    pub discord_bits: f64,
    pub geo_discord: f64,
    pub optimum: MeasurementBasis,
    pub bell_coeffs: BellDiagonalCoeffs,
    pub bell_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub err_mutual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub err_classical: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub err_discord: Option<f64>,
    /// Present when bell_residual is inside the recognition tolerance.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analytic: Option<AnalyticBellColumns>,
}

/// Error-bar request accompanying a report.
#[derive(Debug, Clone)]
pub struct ErrorBarSpec<'a> {
    pub errs: &'a ElementErrors,
    pub n_samples: usize,
    pub seed: u64,
}

/// Computes the numeric-path report; analytic columns are attached when
/// the Bell-diagonal residual is within `analytic_tol`.
pub fn report(
    rho: &DensityMatrix,
    cfg: &OptimizerConfig,
    analytic_tol: f64,
    error_bars: Option<ErrorBarSpec<'_>>,
) -> Result<CorrelationReport, CorrelationError> {
    report_on(rho, Subsystem::B, cfg, analytic_tol, error_bars)
}

/// [`report`] with the projective measurement on a chosen subsystem;
/// discord is asymmetric, so the two sides generally differ.
pub fn report_on(
    rho: &DensityMatrix,
    measured: Subsystem,
    cfg: &OptimizerConfig,
    analytic_tol: f64,
    error_bars: Option<ErrorBarSpec<'_>>,
) -> Result<CorrelationReport, CorrelationError> {
    let mutual = mutual_information(rho);
    let (classical, optimum) = classical_correlation_on(rho, measured, cfg)?;
    let (coeffs, residual) = BellDiagonalCoeffs::from_density(rho);
    let analytic = (residual <= analytic_tol).then(|| AnalyticBellColumns {
        mutual_bits: mutual_information_analytic_bell(&coeffs),
        classical_bits: classical_correlation_analytic_bell(&coeffs),
        discord_bits: discord_analytic_bell(&coeffs),
        geo_discord: geometric_discord_analytic(&coeffs),
    });
    let bars = match error_bars {
        Some(spec) => Some(correlation_error_bars_on(
            rho,
            measured,
            spec.errs,
            spec.n_samples,
            spec.seed,
            cfg,
        )?),
        None => None,
    };
    Ok(CorrelationReport {
        mutual_bits: mutual,
        classical_bits: classical,
        discord_bits: mutual - classical,
        geo_discord: geometric_discord_zero_bloch(rho),
        optimum,
        bell_coeffs: coeffs,
        bell_residual: residual,
        err_mutual: bars.map(|b| b.mutual_bits),
        err_classical: bars.map(|b| b.classical_bits),
        err_discord: bars.map(|b| b.discord_bits),
        analytic,
    })
}
