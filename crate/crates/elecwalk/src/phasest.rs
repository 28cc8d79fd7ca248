//! Exact phase estimation simulation on the walk operator.
//!
//! Two paths compute the all-zeros-ancilla outcome: a spectral-kernel path
//! that works in the eigenbasis with the closed-form inverse-QFT kernel,
//! and an explicit-circuit path that averages powers of U directly. The
//! circuit path is the oracle for the kernel shortcut; they agree to
//! machine precision.

use nalgebra::DVector;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::ledger::{CostLedger, Phase};
use crate::walk::{C64, EdgeState, WalkOperator};

#[derive(Debug, Error)]
pub enum PhaseEstimationError {
    #[error("input state is not normalized (norm {0})")]
    NonNormalizedInput(f64),
    #[error("hypothesis check failed: {0}")]
    HypothesisViolated(String),
    #[error("t must be at least 1")]
    BadAncillaCount,
}

/// One eigencomponent of a phase estimation run.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PeComponent {
    pub theta: f64,
    /// |a_k|^2, the squared overlap of the input with eigenvector k.
    pub weight: f64,
    /// mu_k^2, the all-zeros kernel value at theta_k.
    pub kernel: f64,
}

#[derive(Debug, Clone)]
pub struct PhaseEstimationResult {
    pub t: u32,
    pub p_zero: f64,
    /// Renormalized post-measurement state conditioned on the 0^t outcome;
    /// absent when p_zero is (numerically) zero.
    pub post_state: Option<EdgeState>,
    pub components: Vec<PeComponent>,
}

/// Complex amplitude ⟨0^t|w⟩ of the inverse-QFT estimator applied to an
/// eigenvalue e^{2i theta}: (1/T) sum_{j<T} e^{2ij theta} with T = 2^t.
pub fn kernel_amplitude(theta: f64, t: u32) -> C64 {
    let big_t = 1u64 << t;
    let phase = 2.0 * theta;
    let num = C64::new(0.0, phase * big_t as f64).exp() - C64::new(1.0, 0.0);
    let den = C64::new(0.0, phase).exp() - C64::new(1.0, 0.0);
    if den.norm() < 1e-14 {
        return C64::new(1.0, 0.0);
    }
    num / den / C64::new(big_t as f64, 0.0)
}

fn check_normalized(input: &EdgeState) -> Result<(), PhaseEstimationError> {
    let n = input.norm();
    if (n - 1.0).abs() > 1e-8 {
        return Err(PhaseEstimationError::NonNormalizedInput(n));
    }
    Ok(())
}

/// Spectral-kernel simulation of t-bit phase estimation, conditioned on the
/// all-zeros ancilla outcome. Charges 2^t walk steps.
pub fn pe_zero_outcome(
    w: &WalkOperator,
    input: &EdgeState,
    t: u32,
    ledger: &mut CostLedger,
    phase: Phase,
) -> Result<PhaseEstimationResult, PhaseEstimationError> {
    if t == 0 {
        return Err(PhaseEstimationError::BadAncillaCount);
    }
    check_normalized(input)?;
    ledger.charge(phase, 1u64 << t);
    let comps = w.components(input);
    let mut post = EdgeState::zeros(w.dim());
    let mut p_zero = 0.0;
    let mut components = Vec::with_capacity(comps.len());
    for (k, a) in comps.iter().enumerate() {
        let theta = w.phases()[k];
        let mu = kernel_amplitude(theta, t);
        let coeff = a * mu;
        p_zero += coeff.norm_sqr();
        components.push(PeComponent {
            theta,
            weight: a.norm_sqr(),
            kernel: mu.norm_sqr(),
        });
        post.add_scaled(coeff, &w.eigenvector(k));
    }
    let post_state = if p_zero > 1e-300 {
        Some(post.normalized())
    } else {
        None
    };
    Ok(PhaseEstimationResult {
        t,
        p_zero,
        post_state,
        components,
    })
}

/// Explicit-circuit oracle: the unnormalized conditional state on the edge
/// register after the 0^t outcome is (1/T) sum_{j<T} U^j |input>.
pub fn pe_zero_outcome_circuit(
    w: &WalkOperator,
    input: &EdgeState,
    t: u32,
    ledger: &mut CostLedger,
    phase: Phase,
) -> Result<PhaseEstimationResult, PhaseEstimationError> {
    if t == 0 {
        return Err(PhaseEstimationError::BadAncillaCount);
    }
    check_normalized(input)?;
    let big_t = 1u64 << t;
    ledger.charge(phase, big_t);
    let uc = w.u.map(|x| C64::new(x, 0.0));
    let mut acc: DVector<C64> = DVector::zeros(w.dim());
    let mut cur = input.amps.clone();
    for _ in 0..big_t {
        acc += &cur;
        cur = &uc * cur;
    }
    acc /= C64::new(big_t as f64, 0.0);
    let p_zero = acc.norm_squared();
    let post_state = if p_zero > 1e-300 {
        Some(EdgeState { amps: acc }.normalized())
    } else {
        None
    };
    Ok(PhaseEstimationResult {
        t,
        p_zero,
        post_state,
        components: Vec::new(),
    })
}

/// One row of the verification report for the phase-estimation lemma.
#[derive(Debug, Clone, Serialize)]
pub struct PeNewRow {
    pub t: u32,
    pub p_prime: f64,
    pub excess: f64,
    /// C / 2^t, the unit the excess is measured against.
    pub excess_unit: f64,
    pub trace_distance: f64,
    /// sqrt(C / (p' 2^t)), the unit the trace distance is measured against.
    pub td_unit: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PeNewReport {
    pub p: f64,
    pub c: f64,
    pub rows: Vec<PeNewRow>,
    /// max over t of excess / (C/2^t)
    pub gamma_hat: f64,
    /// max over t of trace_distance / sqrt(C/(p' 2^t))
    pub gamma_prime_hat: f64,
}

/// Verify the spectral-leakage phase-estimation bound for a state whose
/// eps-projections approach sqrt(p)|phi> linearly in eps with constant C.
///
/// Prechecks the hypothesis on the eps-grid {2^-k} first, then reports the
/// empirical constants across `t_range`.
pub fn verify_lemma_pe_new(
    w: &WalkOperator,
    input: &EdgeState,
    phi: &EdgeState,
    c: f64,
    t_range: std::ops::RangeInclusive<u32>,
) -> Result<PeNewReport, PhaseEstimationError> {
    check_normalized(input)?;
    let p0 = w.spectral_projection(input, 1e-12);
    let p = p0.norm().powi(2);
    // P_0 input must align with sqrt(p) phi
    let aligned = {
        let mut diff = p0.clone();
        diff.add_scaled(C64::new(-p.sqrt(), 0.0), phi);
        diff.norm()
    };
    if aligned > 1e-8 {
        return Err(PhaseEstimationError::HypothesisViolated(format!(
            "P_0 input differs from sqrt(p) phi by {aligned:e}"
        )));
    }
    for k in 0..=20u32 {
        let eps = 0.5f64.powi(k as i32);
        let proj = w.spectral_projection(input, eps);
        let mut diff = proj;
        diff.add_scaled(C64::new(-p.sqrt(), 0.0), phi);
        let lhs = diff.norm();
        if lhs > eps * c + 1e-9 {
            return Err(PhaseEstimationError::HypothesisViolated(format!(
                "||P_eps psi - sqrt(p) phi|| = {lhs:e} exceeds eps*C = {:e} at eps = {eps:e}",
                eps * c
            )));
        }
    }
    let mut rows = Vec::new();
    let mut gamma_hat: f64 = 0.0;
    let mut gamma_prime_hat: f64 = 0.0;
    let mut scratch = CostLedger::new();
    for t in t_range {
        let res = pe_zero_outcome(w, input, t, &mut scratch, Phase::Sampling)?;
        let excess = res.p_zero - p;
        let excess_unit = c / (1u64 << t) as f64;
        let post = res.post_state.as_ref().expect("p' >= p > 0");
        let overlap = phi.inner(post).norm_sqr().min(1.0);
        let trace_distance = (1.0 - overlap).sqrt();
        let td_unit = (c / (res.p_zero * (1u64 << t) as f64)).sqrt();
        gamma_hat = gamma_hat.max(excess / excess_unit);
        gamma_prime_hat = gamma_prime_hat.max(trace_distance / td_unit);
        rows.push(PeNewRow {
            t,
            p_prime: res.p_zero,
            excess,
            excess_unit,
            trace_distance,
            td_unit,
        });
    }
    Ok(PeNewReport {
        p,
        c,
        rows,
        gamma_hat,
        gamma_prime_hat,
    })
}

/// How amplitude estimation is simulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AmplitudeMode {
    /// Return the true probability; deterministic control-flow testing.
    Exact,
    /// True probability plus uniform noise bounded by the accuracy.
    Noisy,
    /// Median of repeated simulated-measurement means.
    Sampling,
}

/// Estimate an amplitude `p_true` to additive `accuracy`.
///
/// The sampling path takes the median of `reps` independent means, each of
/// ceil(4/accuracy^2) simulated measurements; walk-step charging for the
/// quantum cost model is done by the caller.
pub fn amplitude_estimate(
    p_true: f64,
    accuracy: f64,
    mode: AmplitudeMode,
    reps: u32,
    rng: &mut ChaCha8Rng,
) -> f64 {
    match mode {
        AmplitudeMode::Exact => p_true,
        AmplitudeMode::Noisy => {
            let delta = rng.random_range(-accuracy..=accuracy);
            (p_true + delta).clamp(0.0, 1.0)
        }
        AmplitudeMode::Sampling => {
            let shots = (4.0 / (accuracy * accuracy)).ceil() as u64;
            let mut means: Vec<f64> = (0..reps.max(1))
                .map(|_| {
                    let mut hits = 0u64;
                    for _ in 0..shots {
                        if rng.random::<f64>() < p_true {
                            hits += 1;
                        }
                    }
                    hits as f64 / shots as f64
                })
                .collect();
            means.sort_by(|a, b| a.partial_cmp(b).unwrap());
            means[means.len() / 2]
        }
    }
}
