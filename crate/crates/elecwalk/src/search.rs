//! Search and estimation algorithms built on the simulated walk: finding
//! the start-edge parameter eta, estimating effective resistance, finding a
//! marked vertex (simple and log-sampled variants), and the unknown-total-
//! weight schedule.
//!
//! Every quantum step is charged to a [`CostLedger`]. Phase estimation "for
//! time T" uses t = ceil(log2 T) + guard bits ancillas and charges 2^t walk
//! steps; amplitude estimation to additive accuracy `acc` with `reps`
//! repetitions charges reps * ceil(1/acc) * 2^t.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::augment::{augment, AugmentError, AugmentedGraph};
use crate::electric::{self, ElectricError};
use crate::graph::{Distribution, Graph, GraphError};
use crate::ledger::{CostLedger, Phase};
use crate::phasest::{
    amplitude_estimate, pe_zero_outcome, pe_zero_outcome_circuit, AmplitudeMode,
    PhaseEstimationError,
};
use crate::walk::{
    build_walk_operator_with_cap, start_state, EdgeState, WalkError, DEFAULT_DIMENSION_CAP,
};

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("no convergence: eta reached {eta} ({reason})")]
    NoConvergence { eta: f64, reason: String },
    #[error("trial budget exhausted after {trials} trials")]
    TrialBudgetExceeded { trials: u32 },
    #[error("interval search diverged: x reached {x} without amplitude halving")]
    IntervalSearchDiverged { x: f64 },
    #[error("bad sampling interval [{a}, {b}]")]
    BadInterval { a: f64, b: f64 },
    #[error("walk-step budget {budget} exhausted")]
    GlobalBudgetExceeded { budget: u64 },
    #[error("marked set is empty")]
    EmptyMarkedSet,
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Augment(#[from] AugmentError),
    #[error(transparent)]
    Electric(#[from] ElectricError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    PhaseEstimation(#[from] PhaseEstimationError),
}

/// Tunables shared by all algorithms.
#[derive(Debug, Clone)]
pub struct SearchParams {
    /// How amplitude estimation is simulated.
    pub amplitude_mode: AmplitudeMode,
    /// Use the explicit-circuit phase estimation oracle instead of the
    /// spectral kernel (slow; for cross-validation).
    pub circuit_oracle: bool,
    /// Median-of repetitions for each amplitude estimation call.
    pub ae_reps: u32,
    /// Extra ancilla bits beyond ceil(log2 T).
    pub guard_bits: u32,
    /// Sampling-loop trial cap multiplier. Each measurement trial succeeds
    /// with probability ~ p' * (flow mass on marked edges), empirically
    /// 0.1..0.2 at the operating point, so the cap must leave room for a
    /// few dozen trials.
    pub trial_cap_factor: u32,
    /// Abort find_eta once eta exceeds this.
    pub eta_cap: f64,
    /// Per-run walk-step budget; charges that would exceed it abort the run.
    pub budget: Option<u64>,
    /// Hard cap for the unknown-W schedule's total ledger.
    pub global_budget: u64,
    /// Edge-basis dimension cap for the dense eigendecomposition.
    pub dimension_cap: usize,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            amplitude_mode: AmplitudeMode::Sampling,
            circuit_oracle: false,
            ae_reps: 3,
            guard_bits: 2,
            trial_cap_factor: 40,
            eta_cap: 1e9,
            budget: None,
            global_budget: 1 << 36,
            dimension_cap: DEFAULT_DIMENSION_CAP,
        }
    }
}

/// Result of a marked-vertex search.
#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    /// Base-graph index of the found marked vertex.
    pub found: Option<usize>,
    pub found_name: Option<String>,
    pub trials: u32,
    /// eta tilde from the find-eta stage.
    pub eta: f64,
    /// Sampling interval endpoints (a = b = x for the simple method).
    pub a: f64,
    pub b: f64,
    pub ledger: CostLedger,
}

fn ceil_log2(x: u64) -> u32 {
    debug_assert!(x >= 1);
    64 - (x - 1).leading_zeros()
}

fn t_bits(time: u64, guard: u32) -> u32 {
    (ceil_log2(time.max(1)) + guard).max(1)
}

fn ae_cost(t: u32, accuracy: f64, reps: u32) -> u64 {
    reps.max(1) as u64 * (1.0 / accuracy).ceil() as u64 * (1u64 << t)
}

fn check_budget(params: &SearchParams, ledger: &CostLedger, cost: u64) -> Result<(), SearchError> {
    if let Some(b) = params.budget {
        if ledger.total().saturating_add(cost) > b {
            return Err(SearchError::GlobalBudgetExceeded { budget: b });
        }
    }
    Ok(())
}

/// One phase-estimation-plus-amplitude-estimation probe on G'(eta, x);
/// returns the amplitude estimate of the 0^t outcome probability.
#[allow(clippy::too_many_arguments)]
fn probe_amplitude(
    g: &Graph,
    sigma: &Distribution,
    eta: f64,
    x: f64,
    time: u64,
    accuracy: f64,
    params: &SearchParams,
    ledger: &mut CostLedger,
    phase: Phase,
    rng: &mut ChaCha8Rng,
) -> Result<f64, SearchError> {
    let t = t_bits(time, params.guard_bits);
    if t >= 40 {
        return Err(SearchError::BadParameter(format!(
            "phase estimation time {time} needs {t} ancilla bits"
        )));
    }
    let cost = ae_cost(t, accuracy, params.ae_reps);
    check_budget(params, ledger, cost)?;
    let aug = augment(g, sigma, eta, x)?;
    let walk = build_walk_operator_with_cap(&aug, params.dimension_cap)?;
    let start = start_state(&aug);
    let pe = if params.circuit_oracle {
        pe_zero_outcome_circuit(&walk, &start, t, ledger, phase)?
    } else {
        pe_zero_outcome(&walk, &start, t, ledger, phase)?
    };
    // pe charged 2^t; charge the remaining amplitude-estimation repetitions
    ledger.charge(phase, cost - (1u64 << t));
    let p_zero = pe.p_zero.clamp(0.0, 1.0);
    Ok(amplitude_estimate(p_zero, accuracy, params.amplitude_mode, params.ae_reps, rng))
}

/// Sample an edge from the post-measurement state and return the base-graph
/// marked vertex it exposes, if any.
fn measure_marked_vertex(
    aug: &AugmentedGraph,
    post: &EdgeState,
    rng: &mut ChaCha8Rng,
) -> Option<usize> {
    let probs = post.probabilities();
    let total: f64 = probs.iter().sum();
    if total <= 0.0 {
        return None;
    }
    let mut r = rng.random::<f64>() * total;
    let mut chosen = probs.len() - 1;
    for (e, p) in probs.iter().enumerate() {
        if r < *p {
            chosen = e;
            break;
        }
        r -= p;
    }
    let edge = &aug.graph.edges()[chosen];
    for endpoint in [edge.a, edge.b] {
        if aug.marked.contains(&endpoint) {
            if aug.x > 0.0 {
                // tail vertex: report its base marked vertex
                if let Some(t) = aug.tails.iter().find(|t| t.tail == endpoint) {
                    return aug.base_of(t.base);
                }
            } else {
                return aug.base_of(endpoint);
            }
        }
    }
    None
}

/// One measurement trial: phase estimation, simulated 0^t outcome, edge
/// measurement, membership check. Charges 2^t steps.
#[allow(clippy::too_many_arguments)]
fn probe_trial(
    g: &Graph,
    sigma: &Distribution,
    eta: f64,
    x: f64,
    time: u64,
    params: &SearchParams,
    ledger: &mut CostLedger,
    phase: Phase,
    rng: &mut ChaCha8Rng,
) -> Result<Option<usize>, SearchError> {
    let t = t_bits(time, params.guard_bits);
    if t >= 40 {
        return Err(SearchError::BadParameter(format!(
            "phase estimation time {time} needs {t} ancilla bits"
        )));
    }
    check_budget(params, ledger, 1u64 << t)?;
    let aug = augment(g, sigma, eta, x)?;
    let walk = build_walk_operator_with_cap(&aug, params.dimension_cap)?;
    let start = start_state(&aug);
    let pe = if params.circuit_oracle {
        pe_zero_outcome_circuit(&walk, &start, t, ledger, phase)?
    } else {
        pe_zero_outcome(&walk, &start, t, ledger, phase)?
    };
    if rng.random::<f64>() >= pe.p_zero {
        return Ok(None); // ancilla outcome was not 0^t
    }
    match pe.post_state {
        Some(post) => Ok(measure_marked_vertex(&aug, &post, rng)),
        None => Ok(None),
    }
}

fn check_reachable(g: &Graph, sigma: &Distribution) -> Result<(), SearchError> {
    if g.marked().is_empty() {
        return Err(SearchError::EmptyMarkedSet);
    }
    let marked: Vec<usize> = g.marked().iter().copied().collect();
    let reach = g.reachable_from(&marked);
    for u in sigma.support() {
        if !reach[u] {
            return Err(SearchError::NoConvergence {
                eta: 0.0,
                reason: format!("source vertex {} cannot reach the marked set", g.name(u)),
            });
        }
    }
    Ok(())
}

/// Output of the eta-doubling stage.
#[derive(Debug, Clone, Copy)]
pub struct EtaEstimate {
    pub eta: f64,
    /// The amplitude estimate that stopped the doubling, approximately
    /// eta / R_{s',M}.
    pub a_tilde: f64,
}

/// Double eta from 1/W~ until the estimated amplitude eta/R_{s',M} exceeds
/// 1/2. On success eta/R_{s',M}(eta) lands in [3/8, 1].
pub fn find_eta(
    g: &Graph,
    sigma: &Distribution,
    w_bound: f64,
    params: &SearchParams,
    ledger: &mut CostLedger,
    rng: &mut ChaCha8Rng,
) -> Result<EtaEstimate, SearchError> {
    if !(w_bound > 0.0) || !w_bound.is_finite() {
        return Err(SearchError::BadParameter(format!(
            "total-weight bound must be positive, got {w_bound}"
        )));
    }
    check_reachable(g, sigma)?;
    let mut eta = 1.0 / w_bound;
    loop {
        let time = (eta * w_bound + 1.0).sqrt().ceil() as u64;
        let probe = probe_amplitude(
            g,
            sigma,
            eta,
            0.0,
            time,
            0.125,
            params,
            ledger,
            Phase::FindEta,
            rng,
        )?;
        if probe > 0.5 {
            return Ok(EtaEstimate {
                eta,
                a_tilde: probe,
            });
        }
        eta *= 2.0;
        if eta > params.eta_cap {
            return Err(SearchError::NoConvergence {
                eta,
                reason: "amplitude never exceeded 1/2; marked set unreachable or weight bound \
                         far too large"
                    .into(),
            });
        }
    }
}

/// Resistance estimate with diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct ResistanceOutcome {
    pub r_hat: f64,
    /// eta used in the final refinement round.
    pub eta: f64,
    /// Final amplitude estimate eta / (eta + R).
    pub a_tilde: f64,
    pub ledger: CostLedger,
}

fn invert_amplitude(eta: f64, a_tilde: f64) -> f64 {
    let a = a_tilde.clamp(1e-6, 1.0 - 1e-12);
    eta * (1.0 - a) / a
}

/// Estimate R_{s,M} to multiplicative accuracy eps for a point source at
/// `s`, using find_eta plus two refinement rounds at eta ~ R.
pub fn estimate_resistance(
    g: &Graph,
    s: usize,
    w_bound: f64,
    eps: f64,
    params: &SearchParams,
    ledger: &mut CostLedger,
    rng: &mut ChaCha8Rng,
) -> Result<ResistanceOutcome, SearchError> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(SearchError::BadParameter(format!(
            "eps must lie in (0, 1/2), got {eps}"
        )));
    }
    let sigma = Distribution::point(g, s)?;
    let mut local = CostLedger::new();
    let res = (|| {
        let e0 = find_eta(g, &sigma, w_bound, params, &mut local, rng)?;
        let r0 = invert_amplitude(e0.eta, e0.a_tilde).max(e0.eta / 64.0);
        // calibration round: pull eta within ~20% of R before the final
        // eps-accuracy inversion (the inversion's sensitivity is eta/a^2)
        let time = ((r0 * w_bound + 1.0).sqrt() * 8.0).ceil() as u64;
        let cal = probe_amplitude(
            g,
            &sigma,
            r0,
            0.0,
            time,
            1.0 / 32.0,
            params,
            &mut local,
            Phase::Refinement,
            rng,
        )?;
        let r1 = invert_amplitude(r0, cal).max(r0 / 64.0);
        let time = ((r1 * w_bound + 1.0).sqrt() * 8.0 / eps).ceil() as u64;
        let fin = probe_amplitude(
            g,
            &sigma,
            r1,
            0.0,
            time,
            eps / 8.0,
            params,
            &mut local,
            Phase::Refinement,
            rng,
        )?;
        Ok(ResistanceOutcome {
            r_hat: invert_amplitude(r1, fin),
            eta: r1,
            a_tilde: fin,
            ledger: CostLedger::new(),
        })
    })();
    ledger.merge(&local);
    res.map(|mut o| {
        o.ledger = local;
        o
    })
}

/// Algorithm with quadratic |M| dependence: set x = eta and repeat
/// measurement trials at time sqrt(eta W~) m^2.
pub fn find_marked_simple(
    g: &Graph,
    sigma: &Distribution,
    m_bound: usize,
    w_bound: f64,
    params: &SearchParams,
    ledger: &mut CostLedger,
    rng: &mut ChaCha8Rng,
) -> Result<SearchOutcome, SearchError> {
    if g.marked().is_empty() {
        return Err(SearchError::EmptyMarkedSet);
    }
    if m_bound < g.marked().len() {
        return Err(SearchError::BadParameter(format!(
            "marked-count bound {m_bound} is below |M| = {}",
            g.marked().len()
        )));
    }
    let mut local = CostLedger::new();
    let res = (|| {
        let e = find_eta(g, sigma, w_bound, params, &mut local, rng)?;
        let eta = e.eta;
        let x = eta;
        let m2 = (m_bound * m_bound) as u64;
        let time = ((eta * w_bound + 1.0).sqrt().ceil() as u64).saturating_mul(m2);
        let cap = params.trial_cap_factor.max(1) * m_bound as u32;
        for trial in 1..=cap {
            if let Some(v) = probe_trial(
                g,
                sigma,
                eta,
                x,
                time,
                params,
                &mut local,
                Phase::Sampling,
                rng,
            )? {
                return Ok(SearchOutcome {
                    found: Some(v),
                    found_name: Some(g.name(v).to_string()),
                    trials: trial,
                    eta,
                    a: x,
                    b: x,
                    ledger: CostLedger::new(),
                });
            }
        }
        Err(SearchError::TrialBudgetExceeded { trials: cap })
    })();
    ledger.merge(&local);
    res.map(|mut o| {
        o.ledger = local;
        o
    })
}

/// Draw x in [a, b] with density 1/(x ln(b/a)) via the inverse CDF.
pub fn sample_log_uniform(a: f64, b: f64, rng: &mut ChaCha8Rng) -> Result<f64, SearchError> {
    if !(a > 0.0 && b > a) || !b.is_finite() {
        return Err(SearchError::BadInterval { a, b });
    }
    let u: f64 = rng.random();
    Ok(a * (b / a).powf(u))
}

/// Full search: find eta, locate the interval [a, b] where the amplitude
/// halves as x doubles, then sample x log-uniformly and measure.
pub fn find_marked(
    g: &Graph,
    sigma: &Distribution,
    w_bound: f64,
    params: &SearchParams,
    ledger: &mut CostLedger,
    rng: &mut ChaCha8Rng,
) -> Result<SearchOutcome, SearchError> {
    let mut local = CostLedger::new();
    let res = (|| {
        let e = find_eta(g, sigma, w_bound, params, &mut local, rng)?;
        let eta = e.eta;
        let a_lo = eta;
        let time_int = (eta * w_bound + 1.0).sqrt().ceil() as u64;
        let base = probe_amplitude(
            g,
            sigma,
            eta,
            a_lo,
            time_int,
            0.125,
            params,
            &mut local,
            Phase::Interval,
            rng,
        )?;
        let a0 = base;
        let cap_x = 64.0 * eta * g.vertex_count() as f64;
        let mut x = 2.0 * a_lo;
        let b_hi = loop {
            let p = probe_amplitude(
                g,
                sigma,
                eta,
                x,
                time_int,
                0.125,
                params,
                &mut local,
                Phase::Interval,
                rng,
            )?;
            // 2/3 threshold: guarantees R(b)/R(a) in [1.5, 3] in exact mode
            if p <= a0 * 2.0 / 3.0 {
                break x;
            }
            x *= 2.0;
            if x > cap_x {
                return Err(SearchError::IntervalSearchDiverged { x });
            }
        };
        let l = (b_hi / a_lo).log2().max(1.0);
        let time_samp = ((eta * w_bound + 1.0).sqrt() * l * l).ceil() as u64;
        let cap = (params.trial_cap_factor.max(1) as f64 * l.ceil()) as u32;
        for trial in 1..=cap {
            let x = sample_log_uniform(a_lo, b_hi, rng)?;
            if let Some(v) = probe_trial(
                g,
                sigma,
                eta,
                x,
                time_samp,
                params,
                &mut local,
                Phase::Sampling,
                rng,
            )? {
                return Ok(SearchOutcome {
                    found: Some(v),
                    found_name: Some(g.name(v).to_string()),
                    trials: trial,
                    eta,
                    a: a_lo,
                    b: b_hi,
                    ledger: CostLedger::new(),
                });
            }
        }
        Err(SearchError::TrialBudgetExceeded { trials: cap })
    })();
    ledger.merge(&local);
    res.map(|mut o| {
        o.ledger = local;
        o
    })
}

/// The weight-guess grid {W_min, 2 W_min, ...} capped at T^2 / R_min.
pub fn w_grid(t: u64, r_min: f64, w_min: f64) -> Vec<f64> {
    let cap = (t as f64) * (t as f64) / r_min;
    let mut grid = Vec::new();
    let mut w = w_min;
    while w <= cap * (1.0 + 1e-12) {
        grid.push(w);
        w *= 2.0;
    }
    grid
}

/// Lower estimate of the walk steps find_eta must charge for weight guess
/// `w_bound` before eta can reach 3/8 of the resistance lower bound. Used
/// to skip schedule entries whose budget T cannot cover even that; a
/// heuristic (it assumes the amplitude does not cross 1/2 before
/// eta ~ 3 R_min / 8), so it only ever skips work, never fakes success.
fn find_eta_cost_floor(w_bound: f64, r_min: f64, params: &SearchParams) -> u64 {
    let mut eta = 1.0 / w_bound;
    let mut cost = 0u64;
    loop {
        let time = (eta * w_bound + 1.0).sqrt().ceil() as u64;
        cost = cost.saturating_add(ae_cost(t_bits(time, params.guard_bits), 0.125, params.ae_reps));
        if eta >= 0.375 * r_min || eta > params.eta_cap {
            return cost;
        }
        eta *= 2.0;
    }
}

/// Search without a known total weight: for doubling budgets T, try each
/// weight guess on the grid with a per-run budget of T walk steps.
///
/// `r_min` and `w_min` default to 1/d_sigma and d_sigma.
pub fn find_marked_unknown_w(
    g: &Graph,
    sigma: &Distribution,
    r_min: Option<f64>,
    w_min: Option<f64>,
    params: &SearchParams,
    ledger: &mut CostLedger,
    rng: &mut ChaCha8Rng,
) -> Result<SearchOutcome, SearchError> {
    check_reachable(g, sigma)?;
    let d_s = electric::d_sigma(g, sigma)?;
    let r_min = r_min.unwrap_or(1.0 / d_s);
    let w_min = w_min.unwrap_or(d_s);
    if !(r_min > 0.0 && w_min > 0.0) {
        return Err(SearchError::BadParameter(
            "resistance and weight lower bounds must be positive".into(),
        ));
    }
    let mut total = CostLedger::new();
    let mut t: u64 = 1;
    loop {
        for w_bound in w_grid(t, r_min, w_min) {
            if find_eta_cost_floor(w_bound, r_min, params) > t {
                continue;
            }
            let mut sub = params.clone();
            sub.budget = Some(t);
            let mut local = CostLedger::new();
            match find_marked(g, sigma, w_bound, &sub, &mut local, rng) {
                Ok(mut outcome) => {
                    total.merge(&local);
                    ledger.merge(&total);
                    outcome.ledger = total;
                    return Ok(outcome);
                }
                Err(
                    SearchError::GlobalBudgetExceeded { .. }
                    | SearchError::TrialBudgetExceeded { .. }
                    | SearchError::IntervalSearchDiverged { .. }
                    | SearchError::NoConvergence { .. },
                ) => {
                    total.merge(&local);
                }
                Err(other) => {
                    total.merge(&local);
                    ledger.merge(&total);
                    return Err(other);
                }
            }
            if total.total() > params.global_budget {
                ledger.merge(&total);
                return Err(SearchError::GlobalBudgetExceeded {
                    budget: params.global_budget,
                });
            }
        }
        t = t.saturating_mul(2);
        if t == u64::MAX {
            ledger.merge(&total);
            return Err(SearchError::GlobalBudgetExceeded {
                budget: params.global_budget,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use rand::SeedableRng;

    fn exact_params() -> SearchParams {
        SearchParams {
            amplitude_mode: AmplitudeMode::Exact,
            ..SearchParams::default()
        }
    }

    fn p3() -> (Graph, Distribution) {
        let g = build_graph(&[("s", "a", 1.0), ("t", "a", 1.0)], &["t"]).unwrap();
        let d = Distribution::point(&g, g.index_of("s").unwrap()).unwrap();
        (g, d)
    }

    #[test]
    fn find_eta_p3() {
        let (g, d) = p3();
        let mut ledger = CostLedger::new();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let e = find_eta(&g, &d, 2.0, &exact_params(), &mut ledger, &mut rng).unwrap();
        assert!((1.0..=4.0).contains(&e.eta), "eta = {}", e.eta);
        // R_{s',M} = eta + 2 by the series law
        assert!(e.eta / (e.eta + 2.0) >= 0.375 - 0.05);
        assert!(ledger.total() > 0);
        assert_eq!(ledger.total(), ledger.find_eta);
    }

    #[test]
    fn find_eta_p2_and_star() {
        let g = build_graph(&[("s", "t", 1.0)], &["t"]).unwrap();
        let d = Distribution::point(&g, g.index_of("s").unwrap()).unwrap();
        let mut ledger = CostLedger::new();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let e = find_eta(&g, &d, 1.0, &exact_params(), &mut ledger, &mut rng).unwrap();
        assert!((0.5..=2.0).contains(&e.eta), "eta = {}", e.eta);

        let star = build_graph(
            &[("c", "l1", 1.0), ("c", "l2", 1.0), ("c", "l3", 1.0)],
            &["l1", "l2", "l3"],
        )
        .unwrap();
        let d = Distribution::point(&star, star.index_of("c").unwrap()).unwrap();
        let e = find_eta(&star, &d, 3.0, &exact_params(), &mut ledger, &mut rng).unwrap();
        // R = 1/3
        assert!((1.0 / 6.0..=4.0 / 3.0).contains(&e.eta), "eta = {}", e.eta);
    }

    #[test]
    fn find_eta_unreachable_marked_set() {
        let g = build_graph(&[("s", "a", 1.0), ("u", "m", 1.0)], &["m"]).unwrap();
        let d = Distribution::point(&g, g.index_of("s").unwrap()).unwrap();
        let mut ledger = CostLedger::new();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(matches!(
            find_eta(&g, &d, 2.0, &exact_params(), &mut ledger, &mut rng),
            Err(SearchError::NoConvergence { .. })
        ));
    }

    #[test]
    fn resistance_p3_and_cycle() {
        let (g, _) = p3();
        let s = g.index_of("s").unwrap();
        let mut ledger = CostLedger::new();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let out =
            estimate_resistance(&g, s, 2.0, 0.1, &exact_params(), &mut ledger, &mut rng).unwrap();
        assert!((out.r_hat - 2.0).abs() <= 0.2, "r_hat = {}", out.r_hat);

        let c4 = build_graph(
            &[
                ("s", "a", 1.0),
                ("a", "t", 1.0),
                ("t", "b", 1.0),
                ("b", "s", 1.0),
            ],
            &["t"],
        )
        .unwrap();
        let s = c4.index_of("s").unwrap();
        let out =
            estimate_resistance(&c4, s, 4.0, 0.1, &exact_params(), &mut ledger, &mut rng).unwrap();
        assert!((out.r_hat - 1.0).abs() <= 0.1, "r_hat = {}", out.r_hat);
    }

    #[test]
    fn resistance_sampling_mode_mostly_accurate() {
        let (g, _) = p3();
        let s = g.index_of("s").unwrap();
        let mut hits = 0;
        for seed in 0..20 {
            let mut ledger = CostLedger::new();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let out = estimate_resistance(
                &g,
                s,
                2.0,
                0.1,
                &SearchParams::default(),
                &mut ledger,
                &mut rng,
            )
            .unwrap();
            if (out.r_hat - 2.0).abs() <= 0.2 {
                hits += 1;
            }
        }
        assert!(hits >= 14, "only {hits}/20 within tolerance");
    }

    #[test]
    fn simple_search_finds_marked_vertex() {
        let (g, d) = p3();
        let t = g.index_of("t").unwrap();
        let mut successes = 0;
        for seed in 0..30 {
            let mut ledger = CostLedger::new();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            if let Ok(out) = find_marked_simple(
                &g,
                &d,
                1,
                2.0,
                &SearchParams::default(),
                &mut ledger,
                &mut rng,
            ) {
                assert_eq!(out.found, Some(t));
                successes += 1;
            }
        }
        assert!(successes >= 27, "only {successes}/30 succeeded");
    }

    #[test]
    fn simple_search_rejects_bad_m_bound() {
        let (g, d) = p3();
        let mut ledger = CostLedger::new();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert!(matches!(
            find_marked_simple(
                &g,
                &d,
                0,
                2.0,
                &SearchParams::default(),
                &mut ledger,
                &mut rng
            ),
            Err(SearchError::BadParameter(_))
        ));
    }

    #[test]
    fn log_uniform_sampling_statistics() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let (a, b) = (1.0, 4.0);
        let n = 100_000;
        let mut below_two = 0;
        let mut samples: Vec<f64> = Vec::with_capacity(n);
        for _ in 0..n {
            let x = sample_log_uniform(a, b, &mut rng).unwrap();
            assert!((a..=b).contains(&x));
            if x <= 2.0 {
                below_two += 1;
            }
            samples.push(x);
        }
        // CDF at 2 is ln2/ln4 = 1/2
        let cdf = below_two as f64 / n as f64;
        assert!((cdf - 0.5).abs() < 0.01, "cdf(2) = {cdf}");
        samples.sort_by(|p, q| p.partial_cmp(q).unwrap());
        let median = samples[n / 2];
        assert!(((median - 2.0) / 2.0).abs() < 0.02, "median = {median}");

        assert!(matches!(
            sample_log_uniform(2.0, 2.0, &mut rng),
            Err(SearchError::BadInterval { .. })
        ));
        // near-degenerate interval returns ~a
        let x = sample_log_uniform(1.0, 1.0 + 1e-12, &mut rng).unwrap();
        assert!((x - 1.0).abs() < 1e-9);
    }

    #[test]
    fn full_search_p3() {
        let (g, d) = p3();
        let t = g.index_of("t").unwrap();
        let mut successes = 0;
        for seed in 0..30 {
            let mut ledger = CostLedger::new();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            if let Ok(out) = find_marked(
                &g,
                &d,
                2.0,
                &SearchParams::default(),
                &mut ledger,
                &mut rng,
            ) {
                assert_eq!(out.found, Some(t));
                assert!(out.b / out.a <= 8.0, "b/a = {}", out.b / out.a);
                successes += 1;
            }
        }
        assert!(successes >= 27, "only {successes}/30 succeeded");
    }

    #[test]
    fn full_search_star_returns_a_leaf() {
        let star = build_graph(
            &[("c", "l1", 1.0), ("c", "l2", 1.0), ("c", "l3", 1.0)],
            &["l1", "l2", "l3"],
        )
        .unwrap();
        let d = Distribution::point(&star, star.index_of("c").unwrap()).unwrap();
        let mut ledger = CostLedger::new();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let out = find_marked(
            &star,
            &d,
            3.0,
            &SearchParams::default(),
            &mut ledger,
            &mut rng,
        )
        .unwrap();
        assert!(star.is_marked(out.found.unwrap()));
    }

    #[test]
    fn w_grid_matches_schedule() {
        assert_eq!(w_grid(4, 1.0, 1.0), vec![1.0, 2.0, 4.0, 8.0, 16.0]);
        assert!(w_grid(1, 4.0, 8.0).is_empty());
    }

    #[test]
    fn unknown_w_finds_marked_vertex() {
        let (g, d) = p3();
        let t = g.index_of("t").unwrap();
        let mut ledger = CostLedger::new();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let out = find_marked_unknown_w(
            &g,
            &d,
            None,
            None,
            &SearchParams::default(),
            &mut ledger,
            &mut rng,
        )
        .unwrap();
        assert_eq!(out.found, Some(t));
        assert_eq!(ledger.total(), out.ledger.total());
    }

    #[test]
    fn ledgers_are_deterministic() {
        let (g, d) = p3();
        let run = || {
            let mut ledger = CostLedger::new();
            let mut rng = ChaCha8Rng::seed_from_u64(42);
            let out = find_marked(
                &g,
                &d,
                2.0,
                &SearchParams::default(),
                &mut ledger,
                &mut rng,
            )
            .unwrap();
            (out.found, out.trials, ledger.total())
        };
        assert_eq!(run(), run());
    }
}
