//! Five-pulse preparation of the Bell-diagonal initial state from thermal
//! equilibrium:
//!
//! ```text
//! MW2(θ₁) → τ₁ → RF1(θ₂) → τ₂ → RF2(π/2) → RF1(π/2) → MW2(π)
//! ```
//!
//! The two waiting periods are long against the relevant dephasing times,
//! so the coherences created by the first two pulses decay off before the
//! next pulse arrives. The RF1 π/2 pulse has a finite length during which
//! the just-created (3,4) coherence decays by the calibration factor f;
//! f = cos θ₂ makes the final state exactly Bell-diagonal with
//!
//! ```text
//! c₁ = 0     c₂ = 4ε sin²(θ₁/2) cos θ₂     c₃ = 4ε cos²(θ₁/2)
//! ```
//!
//! [`run_prep`] executes the stages deterministically: rotations are
//! instantaneous, each waiting period applies the closed-form ensemble
//! envelopes (Gaussian exp[−(Δt/T*)²] per dephasing class plus the
//! homogeneous exp(−Δt/T₂e) on electron-flip coherences) to the
//! coherences alive during it, and pulse durations contribute only their
//! explicit damping factor. No detuning grids are involved; every
//! coherence here is created fresh at a pulse, which is exactly the
//! regime where per-interval envelopes are the ensemble average.

use super::{flips, CoherenceDamping, DynamicsError, PhysicsParams, PulseEvent, PulseSequence};
use crate::qmat::{embed_rotation, CMat4, Channel, DensityMatrix};
use crate::states::{thermal_state, BellDiagonalCoeffs, ThermalParams};
use num_complex::Complex64;

const HALF_PI: f64 = std::f64::consts::FRAC_PI_2;
const PI: f64 = std::f64::consts::PI;

/// Angles, damping and timing of the five-pulse preparation.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PrepParams {
    /// Electron flip angle θ₁ (radians).
    pub theta1: f64,
    /// Nuclear compensation angle θ₂ (radians).
    pub theta2: f64,
    /// Damping of the (3,4) coherence during the RF1 π/2 pulse;
    /// `None` selects cos θ₂, the Bell-diagonality condition.
    pub f: Option<f64>,
    pub tau1_ns: f64,
    pub tau2_ns: f64,
    /// Length of the RF π/2 pulse.
    pub rf_pi2_ns: f64,
}

impl Default for PrepParams {
    fn default() -> Self {
        Self {
            theta1: 0.70 * PI,
            theta2: 0.28 * PI,
            f: None,
            tau1_ns: 1_000.0,
            tau2_ns: 200_000.0,
            rf_pi2_ns: 5_000.0,
        }
    }
}

impl PrepParams {
    pub fn effective_f(&self) -> f64 {
        self.f.unwrap_or_else(|| self.theta2.cos())
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        let f = self.effective_f();
        if !(0.0..=1.0).contains(&f) {
            return Err(DynamicsError::BadParams(format!(
                "damping factor f = {f} outside [0, 1]"
            )));
        }
        if self.tau1_ns < 0.0 || self.tau2_ns < 0.0 || self.rf_pi2_ns < 0.0 {
            return Err(DynamicsError::BadParams(
                "preparation delays must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

/// The preparation laid out as a pulse sequence, readout at the end.
pub fn prep_sequence(p: &PrepParams) -> PulseSequence {
    let t_rf2 = p.tau1_ns + p.tau2_ns;
    let t_mw2 = t_rf2 + p.rf_pi2_ns;
    PulseSequence {
        events: vec![
            PulseEvent::instant(0.0, Channel::Mw2, p.theta1),
            PulseEvent::instant(p.tau1_ns, Channel::Rf1, p.theta2),
            PulseEvent::instant(t_rf2, Channel::Rf2, HALF_PI),
            PulseEvent {
                at_ns: t_rf2,
                channel: Channel::Rf1,
                theta: HALF_PI,
                phi: 0.0,
                duration_ns: p.rf_pi2_ns,
                damping: Some(CoherenceDamping {
                    row: 2,
                    col: 3,
                    factor: p.effective_f(),
                }),
            },
            PulseEvent::instant(t_mw2, Channel::Mw2, PI),
        ],
        readout_times: vec![t_mw2],
    }
}

/// One intermediate state of the preparation.
#[derive(Debug, Clone)]
pub struct PrepStage {
    pub label: &'static str,
    pub state: DensityMatrix,
}

/// Result of executing the preparation.
#[derive(Debug, Clone)]
pub struct PrepOutcome {
    /// Intermediate states: after the dephased waits, after RF2 π/2,
    /// after RF1 π/2 (with damping), after the final MW2 π.
    pub stages: Vec<PrepStage>,
    pub final_state: DensityMatrix,
}

impl PrepOutcome {
    /// Extracted coefficients and Bell-diagonal residual of the final state.
    pub fn final_coeffs(&self) -> (BellDiagonalCoeffs, f64) {
        BellDiagonalCoeffs::from_density(&self.final_state)
    }
}

/// Closed-form ensemble envelope for a waiting period: coherences keep
/// populations, electron-flip elements lose exp[−(Δt/T₂e*)²]·exp(−Δt/T₂e),
/// nuclear-flip elements lose exp[−(Δt/T₂n*)²].
fn apply_wait_envelopes(m: &mut CMat4, dt_ns: f64, p: &PhysicsParams) {
    if dt_ns <= 0.0 {
        return;
    }
    let ge = (-(dt_ns / p.t2e_star_ns) * (dt_ns / p.t2e_star_ns)).exp() * (-dt_ns / p.t2e_ns).exp();
    let gn = (-(dt_ns / p.t2n_star_ns) * (dt_ns / p.t2n_star_ns)).exp();
    for i in 0..4 {
        for j in 0..4 {
            let (eflip, nflip) = flips(i, j);
            let mut g = 1.0;
            if eflip {
                g *= ge;
            }
            if nflip {
                g *= gn;
            }
            m[(i, j)] *= Complex64::new(g, 0.0);
        }
    }
}

fn rotate(m: &mut CMat4, channel: Channel, theta: f64) {
    let u = embed_rotation(channel, theta, 0.0);
    *m = u * *m * u.adjoint();
}

/// Deterministic stage-by-stage execution of the preparation on the
/// thermal state for polarization `physics.epsilon`.
pub fn run_prep(prep: &PrepParams, physics: &PhysicsParams) -> Result<PrepOutcome, DynamicsError> {
    prep.validate()?;
    physics.validate()?;
    let thermal = thermal_state(
        &ThermalParams::new(physics.epsilon)
            .map_err(|e| DynamicsError::BadParams(e.to_string()))?,
    );
    let mut m = *thermal.matrix();

    rotate(&mut m, Channel::Mw2, prep.theta1);
    apply_wait_envelopes(&mut m, prep.tau1_ns, physics);
    rotate(&mut m, Channel::Rf1, prep.theta2);
    apply_wait_envelopes(&mut m, prep.tau2_ns, physics);
    let after_waits = DensityMatrix::new(m)?;

    rotate(&mut m, Channel::Rf2, HALF_PI);
    let after_rf2 = DensityMatrix::new(m)?;

    // the (3,4) coherence decays by f during the finite RF1 π/2 pulse;
    // the coherence the pulse itself creates is not damped
    let f = Complex64::new(prep.effective_f(), 0.0);
    m[(2, 3)] *= f;
    m[(3, 2)] *= f;
    rotate(&mut m, Channel::Rf1, HALF_PI);
    let after_rf1 = DensityMatrix::new(m)?;

    rotate(&mut m, Channel::Mw2, PI);
    let final_state = DensityMatrix::new(m)?;

    Ok(PrepOutcome {
        stages: vec![
            PrepStage {
                label: "after dephased waits",
                state: after_waits,
            },
            PrepStage {
                label: "after RF2 pi/2",
                state: after_rf2,
            },
            PrepStage {
                label: "after RF1 pi/2 (damped)",
                state: after_rf1,
            },
            PrepStage {
                label: "after final MW2 pi",
                state: final_state.clone(),
            },
        ],
        final_state,
    })
}

/// Closed-form deviation matrices (ρ − 𝟙/4)/ε predicted for the four
/// recorded stages, assuming the waits dephase completely.
pub fn stage_predictions(prep: &PrepParams) -> [CMat4; 4] {
    let re = |x: f64| Complex64::new(x, 0.0);
    let im = |x: f64| Complex64::new(0.0, x);
    let (t1, t2, f) = (prep.theta1, prep.theta2, prep.effective_f());
    let cos_t1 = t1.cos();
    let sin_half1_sq = (0.5 * t1).sin().powi(2);
    let cos_half1_sq = (0.5 * t1).cos().powi(2);
    let sin_half2_sq = (0.5 * t2).sin().powi(2);
    let cos_half2_sq = (0.5 * t2).cos().powi(2);

    let mut s1 = CMat4::zeros();
    s1[(0, 0)] = re(-sin_half2_sq - cos_t1 * cos_half2_sq);
    s1[(1, 1)] = re(-cos_half2_sq - cos_t1 * sin_half2_sq);
    s1[(2, 2)] = re(cos_t1);
    s1[(3, 3)] = re(1.0);

    let mut s2 = s1;
    s2[(2, 2)] = re(cos_half1_sq);
    s2[(3, 3)] = re(cos_half1_sq);
    s2[(2, 3)] = im(-sin_half1_sq);
    s2[(3, 2)] = im(sin_half1_sq);

    let mut s3 = CMat4::zeros();
    s3[(0, 0)] = re(-cos_half1_sq);
    s3[(1, 1)] = re(-cos_half1_sq);
    s3[(2, 2)] = re(cos_half1_sq);
    s3[(3, 3)] = re(cos_half1_sq);
    s3[(0, 1)] = im(t2.cos() * sin_half1_sq);
    s3[(1, 0)] = im(-t2.cos() * sin_half1_sq);
    s3[(2, 3)] = im(-sin_half1_sq * f);
    s3[(3, 2)] = im(sin_half1_sq * f);

    let mut s4 = CMat4::zeros();
    s4[(0, 0)] = re(cos_half1_sq);
    s4[(1, 1)] = re(-cos_half1_sq);
    s4[(2, 2)] = re(-cos_half1_sq);
    s4[(3, 3)] = re(cos_half1_sq);
    s4[(0, 3)] = re(-sin_half1_sq * f);
    s4[(3, 0)] = re(-sin_half1_sq * f);
    s4[(1, 2)] = re(t2.cos() * sin_half1_sq);
    s4[(2, 1)] = re(t2.cos() * sin_half1_sq);

    [s1, s2, s3, s4]
}

/// Deviation matrix (ρ − 𝟙/4)/ε of a state.
pub fn deviation_matrix(rho: &DensityMatrix, epsilon: f64) -> CMat4 {
    let mut d = *rho.matrix();
    for i in 0..4 {
        d[(i, i)] -= Complex64::new(0.25, 0.0);
    }
    d / Complex64::new(epsilon, 0.0)
}
