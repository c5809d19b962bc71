//! Time evolution under inhomogeneous dephasing, pulse-sequence
//! construction and execution, decay fitting and transition detection.
//!
//! The noise model is static per ensemble member: each member sees fixed
//! resonance-frequency shifts δ_e ~ Normal(0, √2/T₂e*) and
//! δ_n ~ Normal(0, √2/T₂n*), so the ensemble-averaged coherence envelope
//! is exp[−(t/T*)²]. Averaging uses tensor-product Gauss–Hermite grids
//! (order 64 by default; a disabled grid pins its δ to zero). On top of
//! the static shifts, an exponential exp(−t/T₂e) acts on every
//! electron-flip coherence as the homogeneous (non-refocusable) envelope.
//!
//! Element (i, j) accumulates phase at rate δ_e·(s_e(i)−s_e(j))/2 +
//! δ_n·(s_n(i)−s_n(j))/2 with s = ±1 for spin up/down, i.e.
//!
//! ```text
//! rate(1,4) = δe + δn     rate(2,3) = δe − δn
//! rate(1,3) = rate(2,4) = δe
//! rate(1,2) = rate(3,4) = δn
//! ```
//!
//! Pulses are instantaneous rotations placed on a timeline; a nonzero
//! event duration only occupies time (no free phase evolution inside it)
//! and may carry one explicit coherence-damping factor, which is how the
//! finite RF pulse of the preparation sequence is modeled.

pub mod hermite;
mod prep;

pub use prep::{
    deviation_matrix, prep_sequence, run_prep, stage_predictions, PrepOutcome, PrepParams,
    PrepStage,
};

use crate::qmat::{embed_rotation, CMat4, Channel, DensityMatrix, StateError};
use crate::states::BellDiagonalCoeffs;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum DynamicsError {
    #[error("invalid physics parameters: {0}")]
    BadParams(String),
    #[error("invalid pulse sequence: {0}")]
    InvalidSequence(String),
    #[error("gaussian fit needs {0}")]
    FitInput(String),
    #[error("gaussian fit is degenerate (no decay in the data)")]
    DegenerateFit,
    #[error("no |c2|/|c3| crossing inside the trajectory")]
    NoTransitionFound,
    #[error(transparent)]
    State(#[from] StateError),
}

/// Decoherence time constants and the thermal polarization.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhysicsParams {
    /// Effective Gaussian dephasing time of electron-flip coherences (ns).
    pub t2e_star_ns: f64,
    /// Homogeneous electron coherence time (ns).
    pub t2e_ns: f64,
    /// Nuclear Gaussian dephasing time (ns).
    pub t2n_star_ns: f64,
    /// Thermal polarization ε.
    pub epsilon: f64,
}

impl Default for PhysicsParams {
    fn default() -> Self {
        Self {
            t2e_star_ns: 175.0,
            t2e_ns: 120_000.0,
            t2n_star_ns: 24_000.0,
            epsilon: 7.35e-3,
        }
    }
}

impl PhysicsParams {
    pub fn validate(&self) -> Result<(), DynamicsError> {
        for (name, v) in [
            ("t2e_star_ns", self.t2e_star_ns),
            ("t2e_ns", self.t2e_ns),
            ("t2n_star_ns", self.t2n_star_ns),
        ] {
            if !(v > 0.0) {
                return Err(DynamicsError::BadParams(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if !(self.epsilon > 0.0 && self.epsilon < 0.25) {
            return Err(DynamicsError::BadParams(format!(
                "epsilon {} outside (0, 1/4)",
                self.epsilon
            )));
        }
        Ok(())
    }

    /// The default separation of time scales; violating it is legal but
    /// worth a warning.
    pub fn regime_warning(&self) -> Option<String> {
        (!(self.t2e_star_ns < self.t2n_star_ns && self.t2n_star_ns < self.t2e_ns)).then(|| {
            format!(
                "time scales not in the expected order t2e* ({}) < t2n* ({}) < t2e ({})",
                self.t2e_star_ns, self.t2n_star_ns, self.t2e_ns
            )
        })
    }
}

/// Explicit damping of one coherence (and its conjugate) attached to a
/// pulse event, modeling decay during the finite pulse.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CoherenceDamping {
    pub row: usize,
    pub col: usize,
    pub factor: f64,
}

/// A timed selective rotation.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PulseEvent {
    pub at_ns: f64,
    pub channel: Channel,
    pub theta: f64,
    pub phi: f64,
    /// Time the pulse occupies on the timeline. The rotation itself is
    /// instantaneous at `at_ns`.
    pub duration_ns: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub damping: Option<CoherenceDamping>,
}

impl PulseEvent {
    pub fn instant(at_ns: f64, channel: Channel, theta: f64) -> Self {
        Self {
            at_ns,
            channel,
            theta,
            phi: 0.0,
            duration_ns: 0.0,
            damping: None,
        }
    }

    fn end_ns(&self) -> f64 {
        self.at_ns + self.duration_ns
    }
}

/// Time-ordered pulses plus the times at which the averaged state is
/// recorded.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PulseSequence {
    pub events: Vec<PulseEvent>,
    pub readout_times: Vec<f64>,
}

impl PulseSequence {
    pub fn validate(&self) -> Result<(), DynamicsError> {
        for pair in self.events.windows(2) {
            if pair[1].at_ns < pair[0].end_ns() {
                return Err(DynamicsError::InvalidSequence(format!(
                    "events overlap: one ends at {} ns, the next starts at {} ns",
                    pair[0].end_ns(),
                    pair[1].at_ns
                )));
            }
        }
        for e in &self.events {
            if e.at_ns < 0.0 || e.duration_ns < 0.0 {
                return Err(DynamicsError::InvalidSequence(format!(
                    "event at {} ns with duration {} ns",
                    e.at_ns, e.duration_ns
                )));
            }
            if let Some(d) = e.damping {
                if d.row > 3 || d.col > 3 || d.row == d.col || !(0.0..=1.0).contains(&d.factor) {
                    return Err(DynamicsError::InvalidSequence(format!(
                        "bad damping spec {d:?}"
                    )));
                }
            }
        }
        for pair in self.readout_times.windows(2) {
            if pair[1] <= pair[0] {
                return Err(DynamicsError::InvalidSequence(
                    "readout times must be strictly increasing".into(),
                ));
            }
        }
        if let Some(&first) = self.readout_times.first() {
            if first < 0.0 {
                return Err(DynamicsError::InvalidSequence(
                    "readout before t = 0".into(),
                ));
            }
        }
        for &t in &self.readout_times {
            for e in &self.events {
                if t > e.at_ns && t < e.end_ns() {
                    return Err(DynamicsError::InvalidSequence(format!(
                        "readout at {t} ns falls inside the pulse at {} ns",
                        e.at_ns
                    )));
                }
            }
        }
        Ok(())
    }

    /// Total span covered by events and readouts.
    pub fn end_ns(&self) -> f64 {
        let ev = self
            .events
            .iter()
            .map(PulseEvent::end_ns)
            .fold(0.0, f64::max);
        let ro = self.readout_times.last().copied().unwrap_or(0.0);
        ev.max(ro)
    }
}

/// Two-flip decoupling block: electron π flips at τ and 3τ, readout at 4τ.
pub fn dd_two_flip(tau_ns: f64) -> Result<PulseSequence, DynamicsError> {
    if !(tau_ns > 0.0) {
        return Err(DynamicsError::InvalidSequence(format!(
            "tau must be positive, got {tau_ns}"
        )));
    }
    Ok(PulseSequence {
        events: vec![
            PulseEvent::instant(tau_ns, Channel::EFlip, std::f64::consts::PI),
            PulseEvent::instant(3.0 * tau_ns, Channel::EFlip, std::f64::consts::PI),
        ],
        readout_times: vec![4.0 * tau_ns],
    })
}

/// Repeated two-flip blocks (flips at offsets τ₄ and 3τ₄ within each 4τ₄
/// block) with a uniform readout grid of `samples_per_block` points per
/// block, plus the t = 0 point.
pub fn dd_revival(
    tau4_ns: f64,
    n_blocks: usize,
    samples_per_block: usize,
) -> Result<PulseSequence, DynamicsError> {
    if !(tau4_ns > 0.0) || n_blocks == 0 || samples_per_block == 0 {
        return Err(DynamicsError::InvalidSequence(format!(
            "bad revival parameters: tau4 = {tau4_ns}, blocks = {n_blocks}, samples = {samples_per_block}"
        )));
    }
    let mut events = Vec::with_capacity(2 * n_blocks);
    for k in 0..n_blocks {
        let base = 4.0 * tau4_ns * k as f64;
        events.push(PulseEvent::instant(
            base + tau4_ns,
            Channel::EFlip,
            std::f64::consts::PI,
        ));
        events.push(PulseEvent::instant(
            base + 3.0 * tau4_ns,
            Channel::EFlip,
            std::f64::consts::PI,
        ));
    }
    let step = 4.0 * tau4_ns / samples_per_block as f64;
    let readout_times = (0..=n_blocks * samples_per_block)
        .map(|j| j as f64 * step)
        .collect();
    Ok(PulseSequence {
        events,
        readout_times,
    })
}

/// Gauss–Hermite averaging setup; a disabled grid pins its detuning to 0.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EnsembleModel {
    pub quadrature_order: usize,
    pub electron_grid: bool,
    pub nuclear_grid: bool,
}

impl Default for EnsembleModel {
    fn default() -> Self {
        Self {
            quadrature_order: 64,
            electron_grid: true,
            nuclear_grid: true,
        }
    }
}

impl EnsembleModel {
    pub fn validate(&self) -> Result<(), DynamicsError> {
        if self.quadrature_order < 8 {
            return Err(DynamicsError::BadParams(format!(
                "quadrature order {} below the minimum of 8",
                self.quadrature_order
            )));
        }
        Ok(())
    }

    /// Electron detuning spread, √2/T₂e*.
    pub fn sigma_e(&self, p: &PhysicsParams) -> f64 {
        std::f64::consts::SQRT_2 / p.t2e_star_ns
    }

    /// Nuclear detuning spread, √2/T₂n*.
    pub fn sigma_n(&self, p: &PhysicsParams) -> f64 {
        std::f64::consts::SQRT_2 / p.t2n_star_ns
    }
}

/// Spin-down flags per level; level = 2a + b.
const ELECTRON_DOWN: [bool; 4] = [false, false, true, true];
const NUCLEAR_DOWN: [bool; 4] = [false, true, false, true];

fn spin_sign(down: bool) -> f64 {
    if down {
        -1.0
    } else {
        1.0
    }
}

/// Whether element (i, j) connects different electron (nuclear) states.
pub(crate) fn flips(i: usize, j: usize) -> (bool, bool) {
    (
        ELECTRON_DOWN[i] != ELECTRON_DOWN[j],
        NUCLEAR_DOWN[i] != NUCLEAR_DOWN[j],
    )
}

/// Per-element multiplicative map for free evolution over `dt`:
/// coherence (i, j) picks up exp(−i·Δ_ij·dt) with the detuning rates in
/// the module docs, and exp(−dt/T₂e) if it is an electron-flip element.
/// Populations are untouched.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseMap {
    factors: CMat4,
}

impl PhaseMap {
    pub fn apply(&self, m: &mut CMat4) {
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] *= self.factors[(i, j)];
            }
        }
    }

    pub fn factor(&self, i: usize, j: usize) -> Complex64 {
        self.factors[(i, j)]
    }
}

pub fn free_phase_factors(dt_ns: f64, delta_e: f64, delta_n: f64, p: &PhysicsParams) -> PhaseMap {
    let mut factors = CMat4::zeros();
    let homogeneous = (-dt_ns / p.t2e_ns).exp();
    for i in 0..4 {
        for j in 0..4 {
            let rate_e = 0.5 * (spin_sign(ELECTRON_DOWN[i]) - spin_sign(ELECTRON_DOWN[j]));
            let rate_n = 0.5 * (spin_sign(NUCLEAR_DOWN[i]) - spin_sign(NUCLEAR_DOWN[j]));
            let rate = delta_e * rate_e + delta_n * rate_n;
            let phase = Complex64::new(0.0, -rate * dt_ns).exp();
            let (eflip, _) = flips(i, j);
            factors[(i, j)] = if eflip { phase * homogeneous } else { phase };
        }
    }
    PhaseMap { factors }
}

/// One recorded point of an averaged evolution.
#[derive(Debug, Clone)]
pub struct TrajectorySample {
    pub t_ns: f64,
    pub state: DensityMatrix,
    pub coeffs: BellDiagonalCoeffs,
    /// Frobenius distance of `state` from its Bell-diagonal model.
    pub residual: f64,
}

/// Averaged states at the readout times of a sequence.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
}

impl Trajectory {
    fn from_states(times: &[f64], states: Vec<CMat4>) -> Result<Self, DynamicsError> {
        let mut samples = Vec::with_capacity(states.len());
        for (&t_ns, m) in times.iter().zip(states) {
            let state = DensityMatrix::new(m)?;
            let (coeffs, residual) = BellDiagonalCoeffs::from_density(&state);
            samples.push(TrajectorySample {
                t_ns,
                state,
                coeffs,
                residual,
            });
        }
        Ok(Self { samples })
    }
}

/// Pure Gaussian coefficient flow: c₁, c₂ scaled by exp[−(t/T₂e*)²], c₃
/// unchanged. No homogeneous or nuclear terms enter this model.
pub fn evolve_coeffs_analytic(
    c0: &BellDiagonalCoeffs,
    t_ns: f64,
    p: &PhysicsParams,
) -> BellDiagonalCoeffs {
    let g = (-(t_ns / p.t2e_star_ns) * (t_ns / p.t2e_star_ns)).exp();
    BellDiagonalCoeffs {
        c1: c0.c1 * g,
        c2: c0.c2 * g,
        c3: c0.c3,
    }
}

/// Trajectory of the analytic coefficient flow over `times`.
pub fn trajectory_from_analytic(
    c0: &BellDiagonalCoeffs,
    times: &[f64],
    p: &PhysicsParams,
) -> Trajectory {
    let samples = times
        .iter()
        .map(|&t_ns| {
            let coeffs = evolve_coeffs_analytic(c0, t_ns, p);
            TrajectorySample {
                t_ns,
                state: coeffs.to_density(),
                coeffs,
                residual: 0.0,
            }
        })
        .collect();
    Trajectory { samples }
}

/// Runs `seq` on `rho0` for every (δe, δn) quadrature node and averages
/// the recorded states with the Gauss–Hermite weights.
///
/// Within one node the evolution is: free phase accumulation between the
/// end of one pulse and the start of the next, an instantaneous rotation
/// (preceded by the event's explicit damping factor, if any) at each
/// pulse, and no phase accumulation during a pulse's `duration`.
/// Node states are accumulated in fixed grid order, so the result is
/// bit-stable.
pub fn run_sequence(
    seq: &PulseSequence,
    rho0: &DensityMatrix,
    model: &EnsembleModel,
    p: &PhysicsParams,
) -> Result<Trajectory, DynamicsError> {
    seq.validate()?;
    model.validate()?;
    p.validate()?;

    let order = model.quadrature_order;
    let (de, we) = if model.electron_grid {
        hermite::gaussian_average_grid(order, model.sigma_e(p))
    } else {
        (vec![0.0], vec![1.0])
    };
    let (dn, wn) = if model.nuclear_grid {
        hermite::gaussian_average_grid(order, model.sigma_n(p))
    } else {
        (vec![0.0], vec![1.0])
    };

    // unitaries are node-independent; build once
    let rotations: Vec<CMat4> = seq
        .events
        .iter()
        .map(|e| embed_rotation(e.channel, e.theta, e.phi))
        .collect();

    let mut acc: Vec<CMat4> = vec![CMat4::zeros(); seq.readout_times.len()];
    let mut total_weight = 0.0;
    for (&delta_e, &w_e) in de.iter().zip(&we) {
        for (&delta_n, &w_n) in dn.iter().zip(&wn) {
            let weight = w_e * w_n;
            total_weight += weight;
            let mut m = *rho0.matrix();
            let mut cursor = 0.0;
            let mut next_event = 0;
            for (k, &t) in seq.readout_times.iter().enumerate() {
                // process every pulse scheduled up to and including t
                while next_event < seq.events.len() && seq.events[next_event].at_ns <= t {
                    let e = &seq.events[next_event];
                    if e.at_ns > cursor {
                        free_phase_factors(e.at_ns - cursor, delta_e, delta_n, p).apply(&mut m);
                    }
                    if let Some(d) = e.damping {
                        let f = Complex64::new(d.factor, 0.0);
                        m[(d.row, d.col)] *= f;
                        m[(d.col, d.row)] *= f;
                    }
                    let u = &rotations[next_event];
                    m = u * m * u.adjoint();
                    cursor = e.end_ns();
                    next_event += 1;
                }
                if t > cursor {
                    free_phase_factors(t - cursor, delta_e, delta_n, p).apply(&mut m);
                    cursor = t;
                }
                acc[k] += m * Complex64::new(weight, 0.0);
            }
        }
    }

    let scale = Complex64::new(1.0 / total_weight, 0.0);
    let averaged = acc.into_iter().map(|m| m * scale).collect();
    Trajectory::from_states(&seq.readout_times, averaged)
}

/// Least-squares fit of y = A·exp[−(t/T)²] through linearization
/// ln y = ln A − t²/T², weighted by y²; returns T.
pub fn fit_gaussian_decay(ts_ns: &[f64], ys: &[f64]) -> Result<f64, DynamicsError> {
    if ts_ns.len() != ys.len() || ts_ns.len() < 4 {
        return Err(DynamicsError::FitInput(
            "at least 4 matching (t, y) points".into(),
        ));
    }
    if ys.iter().any(|&y| !(y > 0.0)) {
        return Err(DynamicsError::FitInput("strictly positive y values".into()));
    }
    let w: Vec<f64> = ys.iter().map(|y| y * y).collect();
    let x: Vec<f64> = ts_ns.iter().map(|t| t * t).collect();
    let z: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let wsum: f64 = w.iter().sum();
    let xbar = w.iter().zip(&x).map(|(w, x)| w * x).sum::<f64>() / wsum;
    let zbar = w.iter().zip(&z).map(|(w, z)| w * z).sum::<f64>() / wsum;
    let mut num = 0.0;
    let mut den = 0.0;
    for k in 0..x.len() {
        num += w[k] * (x[k] - xbar) * (z[k] - zbar);
        den += w[k] * (x[k] - xbar) * (x[k] - xbar);
    }
    if den <= 0.0 {
        return Err(DynamicsError::FitInput("distinct time points".into()));
    }
    let slope = num / den;
    if slope >= 0.0 {
        return Err(DynamicsError::DegenerateFit);
    }
    Ok((-1.0 / slope).sqrt())
}

/// Linear-interpolated crossing time of |c₂(t)| and |c₃(t)|.
///
/// Returns 0 when |c₂(0)| ≤ |c₃(0)| and [`DynamicsError::NoTransitionFound`]
/// when the envelopes never cross inside the trajectory.
pub fn detect_transition_time(traj: &Trajectory) -> Result<f64, DynamicsError> {
    let gap: Vec<(f64, f64)> = traj
        .samples
        .iter()
        .map(|s| (s.t_ns, s.coeffs.c2.abs() - s.coeffs.c3.abs()))
        .collect();
    match gap.first() {
        None => Err(DynamicsError::NoTransitionFound),
        Some(&(_, first)) if first <= 0.0 => Ok(0.0),
        _ => {
            for pair in gap.windows(2) {
                let (t0, d0) = pair[0];
                let (t1, d1) = pair[1];
                if d1 <= 0.0 {
                    return Ok(t0 + (t1 - t0) * d0 / (d0 - d1));
                }
            }
            Err(DynamicsError::NoTransitionFound)
        }
    }
}
