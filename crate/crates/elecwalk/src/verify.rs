//! Verification suite: every structural claim the simulator relies on is
//! checked against the classical electrical-network oracle on fixtures and
//! randomized instances, producing one report per claim.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::augment::{augment, resistance_curve, AugmentedGraph};
use crate::electric::{d_sigma, effective_resistance, hitting_time};
use crate::error::Error;
use crate::families;
use crate::graph::{build_graph, Distribution, Graph, Side};
use crate::ledger::CostLedger;
use crate::phasest::{pe_zero_outcome, pe_zero_outcome_circuit, verify_lemma_pe_new};
use crate::search::{
    estimate_resistance, find_marked, find_marked_unknown_w, SearchParams,
};
use crate::walk::{
    build_walk_operator, electrical_flow_state, start_state, EdgeState, WalkOperator, C64,
};
use crate::ledger::Phase;

/// Outcome of one verification check.
#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub name: String,
    pub passed: bool,
    /// Measured constants and summary statistics.
    pub details: serde_json::Value,
    /// First failing instance, when any.
    pub witness: Option<String>,
}

impl LemmaReport {
    fn pass(name: &str, details: serde_json::Value) -> Self {
        LemmaReport {
            name: name.to_string(),
            passed: true,
            details,
            witness: None,
        }
    }

    fn fail(name: &str, details: serde_json::Value, witness: String) -> Self {
        LemmaReport {
            name: name.to_string(),
            passed: false,
            details,
            witness: Some(witness),
        }
    }
}

/// The state |psi_v| spread over the edges incident to `v`.
fn vertex_state(g: &Graph, v: usize) -> EdgeState {
    let d = g.weighted_degree(v).unwrap();
    let mut amps = vec![0.0; g.edge_count()];
    for &e in g.incident_edges(v) {
        amps[e] = (g.edges()[e].weight / d).sqrt();
    }
    EdgeState::from_real(&amps)
}

fn point_source(g: &Graph, v: usize) -> Vec<f64> {
    let mut s = vec![0.0; g.vertex_count()];
    s[v] = 1.0;
    s
}

/// A small random augmented instance for the spectral checks.
fn random_instance(rng: &mut ChaCha8Rng) -> Result<(Graph, Distribution, f64, f64), Error> {
    let na = rng.random_range(2..6);
    let nb = rng.random_range(2..6);
    let marked = rng.random_range(1..=na.min(2));
    let g = families::random_connected_bipartite(na, nb, 0.35, marked, rng);
    let sigma = if rng.random::<f64>() < 0.5 {
        families::random_sigma(&g, rng)?
    } else {
        families::default_start(&g)?
    };
    let eta = 0.25 * 16f64.powf(rng.random::<f64>());
    let x = if rng.random::<f64>() < 0.5 {
        0.0
    } else {
        rng.random_range(0.1..2.0)
    };
    Ok((g, sigma, eta, x))
}

/// Fixture resistances: series, parallel, star.
pub fn check_electric_fixtures() -> LemmaReport {
    let name = "electric_fixtures";
    let cases: Vec<(&str, Graph, &str, f64)> = vec![
        (
            "p3_series",
            build_graph(&[("s", "a", 1.0), ("t", "a", 1.0)], &["t"]).unwrap(),
            "s",
            2.0,
        ),
        (
            "cycle4_parallel",
            build_graph(
                &[
                    ("s", "a", 1.0),
                    ("a", "t", 1.0),
                    ("t", "b", 1.0),
                    ("b", "s", 1.0),
                ],
                &["t"],
            )
            .unwrap(),
            "s",
            1.0,
        ),
        (
            "star_parallel",
            build_graph(
                &[("c", "l1", 1.0), ("c", "l2", 1.0), ("c", "l3", 1.0)],
                &["l1", "l2", "l3"],
            )
            .unwrap(),
            "c",
            1.0 / 3.0,
        ),
    ];
    let mut rows = Vec::new();
    for (label, g, s, expected) in &cases {
        let s = g.index_of(s).unwrap();
        let r = effective_resistance(g, &point_source(g, s), g.marked()).unwrap();
        let err = (r - expected).abs();
        rows.push(json!({"case": label, "resistance": r, "error": err}));
        if err > 1e-9 {
            return LemmaReport::fail(
                name,
                json!({ "rows": rows }),
                format!("{label}: R = {r}, expected {expected}"),
            );
        }
    }
    LemmaReport::pass(name, json!({ "rows": rows }))
}

/// HT_{s,t} + HT_{t,s} = 2 R_{s,t} W and HT_{pi,M} = 2 R_{pi,M} W on
/// random connected bipartite graphs with side-A marked sets.
pub fn check_hitting_time_identities(instances: usize, seed: u64) -> LemmaReport {
    let name = "hitting_time_identities";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_rel = 0f64;
    for i in 0..instances {
        let na = rng.random_range(2..8);
        let nb = rng.random_range(2..8);
        let marked = rng.random_range(1..=na.min(3));
        let g = families::random_connected_bipartite(na, nb, 0.4, marked, &mut rng);
        if g.vertex_count() > 20 {
            continue;
        }
        // singleton identity between the first marked vertex and some other
        let t = *g.marked().iter().next().unwrap();
        let s = (0..g.vertex_count()).find(|v| !g.is_marked(*v)).unwrap();
        let m_t = std::collections::BTreeSet::from([t]);
        let m_s = std::collections::BTreeSet::from([s]);
        let ht_st = hitting_time(&g, &point_source(&g, s), &m_t).unwrap();
        let ht_ts = hitting_time(&g, &point_source(&g, t), &m_s).unwrap();
        let r = effective_resistance(&g, &point_source(&g, s), &m_t).unwrap();
        let w = g.total_weight();
        let rel = (ht_st + ht_ts - 2.0 * r * w).abs() / (2.0 * r * w);
        max_rel = max_rel.max(rel);
        if rel > 1e-8 {
            return LemmaReport::fail(
                name,
                json!({"instance": i, "relative_error": rel}),
                format!("singleton identity violated on instance {i} (rel {rel:e})"),
            );
        }
        // stationary identity with the generator's side-A marked set
        let sigma = Distribution::stationary_a(&g);
        let ht = hitting_time(&g, sigma.as_slice(), g.marked()).unwrap();
        let r = effective_resistance(&g, sigma.as_slice(), g.marked()).unwrap();
        let rel = (ht - 2.0 * r * w).abs() / ht.max(1e-300);
        max_rel = max_rel.max(rel);
        if rel > 1e-8 {
            return LemmaReport::fail(
                name,
                json!({"instance": i, "relative_error": rel}),
                format!("stationary identity violated on instance {i} (rel {rel:e})"),
            );
        }
    }
    LemmaReport::pass(name, json!({"instances": instances, "max_relative_error": max_rel}))
}

/// || U_A U_B |Phi> - |Phi> || on one instance.
pub fn flow_state_residual(w: &WalkOperator, phi: &EdgeState) -> f64 {
    let mut diff = w.apply(phi);
    diff.add_scaled(C64::new(-1.0, 0.0), phi);
    diff.norm()
}

/// The electrical flow state is a 1-eigenvector of the walk operator.
pub fn check_flow_state_eigenvector(instances: usize, seed: u64) -> LemmaReport {
    let name = "flow_state_eigenvector";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_res = 0f64;
    for i in 0..instances {
        let (g, sigma, eta, x) = match random_instance(&mut rng) {
            Ok(v) => v,
            Err(_) => continue,
        };
        let aug = augment(&g, &sigma, eta, x).unwrap();
        let sol = aug.solve().unwrap();
        let phi = electrical_flow_state(&aug, &sol.flow, sol.resistance).unwrap();
        let w = build_walk_operator(&aug).unwrap();
        let res = flow_state_residual(&w, &phi);
        max_res = max_res.max(res);
        if res > 1e-10 {
            return LemmaReport::fail(
                name,
                json!({"instance": i, "residual": res}),
                format!("instance {i}: ||U phi - phi|| = {res:e}"),
            );
        }
    }
    LemmaReport::pass(name, json!({"instances": instances, "max_residual": max_res}))
}

/// Check the voltage-bound projection inequality on one augmented instance;
/// returns a witness string on violation.
pub fn phi_part2_violation(aug: &AugmentedGraph, w: &WalkOperator, phi: &EdgeState) -> Option<String> {
    let sol = aug.solve().unwrap();
    let g = &aug.graph;
    let r = sol.resistance;
    let d_start = g.weighted_degree(aug.start).unwrap();
    let mut sum = 0.0;
    for v in g.vertices_on(Side::A) {
        let d = g.weighted_degree(v).unwrap();
        sum += sol.potential.v[v] * sol.potential.v[v] * d;
    }
    let c = (sum / (r * r * d_start)).sqrt();
    let start = start_state(aug);
    for k in 0..=20u32 {
        let eps = 0.5f64.powi(k as i32);
        let mut lhs = w.spectral_projection(&start, eps);
        lhs.add_scaled(C64::new(1.0 / (r * d_start).sqrt(), 0.0), phi);
        let lhs = lhs.norm();
        if lhs > eps * c + 1e-9 {
            return Some(format!(
                "||P_eps psi + phi/sqrt(Rd)|| = {lhs:e} > eps*C = {:e} at eps = 2^-{k}",
                eps * c
            ));
        }
    }
    None
}

/// Effective-spectral-gap inequality for a state in the span of the active
/// side-A vertex states.
fn esg_violation(
    aug: &AugmentedGraph,
    w: &WalkOperator,
    rng: &mut ChaCha8Rng,
) -> Option<String> {
    let g = &aug.graph;
    let active = |v: usize| v != aug.start && !aug.marked.contains(&v);
    let mut psi = EdgeState::zeros(g.edge_count());
    for v in g.vertices_on(Side::A).filter(|&v| active(v)) {
        let c = rng.random::<f64>() - 0.5;
        psi.add_scaled(C64::new(c, 0.0), &vertex_state(g, v));
    }
    let norm = psi.norm();
    if norm < 1e-12 {
        return None;
    }
    // Pi_B psi = psi - sum over active side-B vertex states
    let mut pb = psi.clone();
    for v in g.vertices_on(Side::B).filter(|&v| active(v)) {
        let vs = vertex_state(g, v);
        let overlap = vs.inner(&psi);
        pb.add_scaled(-overlap, &vs);
    }
    for k in 0..=20u32 {
        let eps = 0.5f64.powi(k as i32);
        let lhs = w.spectral_projection(&pb, eps).norm();
        if lhs > eps * norm + 1e-9 {
            return Some(format!(
                "||P_eps Pi_B psi|| = {lhs:e} > eps ||psi|| = {:e} at eps = 2^-{k}",
                eps * norm
            ));
        }
    }
    None
}

/// The projection bound (voltage form) and the effective-spectral-gap
/// inequality on an eps-grid over random instances.
pub fn check_projection_bounds(instances: usize, seed: u64) -> LemmaReport {
    let name = "projection_bounds";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..instances {
        let (g, sigma, eta, x) = match random_instance(&mut rng) {
            Ok(v) => v,
            Err(_) => continue,
        };
        let aug = augment(&g, &sigma, eta, x).unwrap();
        let sol = aug.solve().unwrap();
        let phi = electrical_flow_state(&aug, &sol.flow, sol.resistance).unwrap();
        let w = build_walk_operator(&aug).unwrap();
        if let Some(witness) = phi_part2_violation(&aug, &w, &phi) {
            return LemmaReport::fail(name, json!({"instance": i}), format!("part 2 on instance {i}: {witness}"));
        }
        if let Some(witness) = esg_violation(&aug, &w, &mut rng) {
            return LemmaReport::fail(name, json!({"instance": i}), format!("spectral gap on instance {i}: {witness}"));
        }
    }
    LemmaReport::pass(name, json!({"instances": instances, "eps_grid": "2^-k, k=0..20"}))
}

/// Phase-estimation excess and trace-distance scaling on the P3 fixture,
/// plus kernel-vs-circuit agreement.
pub fn check_phase_estimation() -> LemmaReport {
    let name = "phase_estimation_bounds";
    let g = build_graph(&[("s", "a", 1.0), ("t", "a", 1.0)], &["t"]).unwrap();
    let sigma = Distribution::point(&g, g.index_of("s").unwrap()).unwrap();
    let eta = 2.0;
    let aug = augment(&g, &sigma, eta, 0.0).unwrap();
    let sol = aug.solve().unwrap();
    let w = build_walk_operator(&aug).unwrap();
    let phi = electrical_flow_state(&aug, &sol.flow, sol.resistance).unwrap();
    // the hypothesis state is -|Phi>: P_0 |psi_s'> points along the negative
    // flow state under the A->B sign convention
    let mut minus_phi = phi.clone();
    minus_phi.amps.iter_mut().for_each(|a| *a = -*a);
    // C from the voltage bound
    let d_start = aug.graph.weighted_degree(aug.start).unwrap();
    let mut sum = 0.0;
    for v in aug.graph.vertices_on(Side::A) {
        sum += sol.potential.v[v].powi(2) * aug.graph.weighted_degree(v).unwrap();
    }
    let c = (sum / (sol.resistance * sol.resistance * d_start)).sqrt();
    let start = start_state(&aug);
    let report = match verify_lemma_pe_new(&w, &start, &minus_phi, c, 2..=10) {
        Ok(r) => r,
        Err(e) => {
            return LemmaReport::fail(name, json!({}), format!("hypothesis precheck: {e}"));
        }
    };
    let p_expected = eta / sol.resistance;
    if (report.p - p_expected).abs() > 1e-9 {
        return LemmaReport::fail(
            name,
            json!({"p": report.p}),
            format!("p = {} but eta/R = {p_expected}", report.p),
        );
    }
    let mut prev = f64::INFINITY;
    for row in &report.rows {
        if row.excess <= 0.0 || row.excess >= prev {
            return LemmaReport::fail(
                name,
                serde_json::to_value(&report).unwrap(),
                format!("excess not positive-decreasing at t = {}", row.t),
            );
        }
        prev = row.excess;
    }
    // kernel path against the explicit circuit
    let mut scratch = CostLedger::new();
    for t in 1..=6 {
        let a = pe_zero_outcome(&w, &start, t, &mut scratch, Phase::Sampling).unwrap();
        let b = pe_zero_outcome_circuit(&w, &start, t, &mut scratch, Phase::Sampling).unwrap();
        if (a.p_zero - b.p_zero).abs() > 1e-9 {
            return LemmaReport::fail(
                name,
                json!({"t": t, "kernel": a.p_zero, "circuit": b.p_zero}),
                format!("kernel/circuit mismatch at t = {t}"),
            );
        }
    }
    LemmaReport::pass(
        name,
        json!({
            "p": report.p,
            "c": report.c,
            "gamma_hat": report.gamma_hat,
            "gamma_prime_hat": report.gamma_prime_hat,
        }),
    )
}

/// dR/dx = q(x) and the concave-increment bound on random multi-marked
/// instances.
pub fn check_resistance_curve(instances: usize, seed: u64) -> LemmaReport {
    let name = "resistance_curve";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_fd_rel = 0f64;
    for i in 0..instances {
        let na = rng.random_range(3..7);
        let nb = rng.random_range(2..6);
        let marked = rng.random_range(2..=na.min(3));
        let g = families::random_connected_bipartite(na, nb, 0.4, marked, &mut rng);
        let sigma = match families::random_sigma(&g, &mut rng) {
            Ok(s) => s,
            Err(_) => continue,
        };
        let eta = rng.random_range(0.5..2.0);
        let xs = [0.1, 0.5, 1.0, 2.0, 4.0];
        let pts = resistance_curve(&g, &sigma, eta, &xs).unwrap();
        for p in &pts {
            // central finite difference of R at p.x
            let h = 1e-5;
            let lo = resistance_curve(&g, &sigma, eta, &[p.x - h]).unwrap()[0].resistance;
            let hi = resistance_curve(&g, &sigma, eta, &[p.x + h]).unwrap()[0].resistance;
            let fd = (hi - lo) / (2.0 * h);
            let rel = (fd - p.q).abs() / p.q.max(1e-300);
            max_fd_rel = max_fd_rel.max(rel);
            if rel > 1e-6 {
                return LemmaReport::fail(
                    name,
                    json!({"instance": i, "x": p.x, "fd": fd, "q": p.q}),
                    format!("dR/dx mismatch at x = {} on instance {i} (rel {rel:e})", p.x),
                );
            }
            // concave increments: R(x+y) <= R(x) + y q(x)
            for y in [0.3, 1.0, 3.0] {
                let ry = resistance_curve(&g, &sigma, eta, &[p.x + y]).unwrap()[0].resistance;
                if ry > p.resistance + y * p.q + 1e-9 {
                    return LemmaReport::fail(
                        name,
                        json!({"instance": i, "x": p.x, "y": y}),
                        format!("R(x+y) > R(x) + y q(x) on instance {i}"),
                    );
                }
            }
            // sanity: 1/|M| <= q <= 1
            let m = g.marked().len() as f64;
            if p.q < 1.0 / m - 1e-9 || p.q > 1.0 + 1e-9 {
                return LemmaReport::fail(
                    name,
                    json!({"instance": i, "x": p.x, "q": p.q}),
                    format!("q out of [1/|M|, 1] on instance {i}"),
                );
            }
        }
    }
    LemmaReport::pass(name, json!({"instances": instances, "max_fd_relative_error": max_fd_rel}))
}

fn resistance_fixtures() -> Vec<(&'static str, Graph, &'static str)> {
    vec![
        (
            "p3",
            build_graph(&[("s", "a", 1.0), ("t", "a", 1.0)], &["t"]).unwrap(),
            "s",
        ),
        (
            "cycle4",
            build_graph(
                &[
                    ("s", "a", 1.0),
                    ("a", "t", 1.0),
                    ("t", "b", 1.0),
                    ("b", "s", 1.0),
                ],
                &["t"],
            )
            .unwrap(),
            "s",
        ),
        ("star4", families::star(4, 4), "c"),
        ("path12", families::path(12), "v0"),
        ("grid3x3", families::grid2d(3, 3), "g0_0"),
    ]
}

/// Quantum resistance estimation against the oracle over seeded runs, and
/// the 1/eps^2 ledger scaling.
pub fn check_resistance_estimation(seed: u64) -> LemmaReport {
    let name = "resistance_estimation";
    let params = SearchParams::default();
    let mut rows = Vec::new();
    for (label, g, s) in resistance_fixtures() {
        let s = g.index_of(s).unwrap();
        let r_true = effective_resistance(&g, &point_source(&g, s), g.marked()).unwrap();
        let w = g.total_weight();
        let mut hits = 0;
        for k in 0..20u64 {
            let mut ledger = CostLedger::new();
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k + 1))
                ;
            let out = estimate_resistance(&g, s, w, 0.1, &params, &mut ledger, &mut rng).unwrap();
            if (out.r_hat - r_true).abs() <= 0.1 * r_true {
                hits += 1;
            }
        }
        rows.push(json!({"fixture": label, "hits": hits, "r_true": r_true}));
        if hits < 14 {
            return LemmaReport::fail(
                name,
                json!({ "rows": rows }),
                format!("{label}: only {hits}/20 runs within 10%"),
            );
        }
    }
    // ledger scaling in eps on the p3 fixture
    let g = build_graph(&[("s", "a", 1.0), ("t", "a", 1.0)], &["t"]).unwrap();
    let s = g.index_of("s").unwrap();
    let mut totals = Vec::new();
    for eps in [0.2, 0.1, 0.05] {
        let mut ledger = CostLedger::new();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        estimate_resistance(&g, s, 2.0, eps, &SearchParams::default(), &mut ledger, &mut rng)
            .unwrap();
        totals.push(ledger.total());
    }
    let mut ratios = Vec::new();
    for i in 1..totals.len() {
        let ratio = totals[i] as f64 / totals[i - 1] as f64;
        ratios.push(ratio);
        if !(2.0..=8.0).contains(&ratio) {
            return LemmaReport::fail(
                name,
                json!({"rows": rows, "ledger_totals": totals, "ratios": ratios}),
                format!("ledger ratio {ratio} outside [2, 8] (predicted 4)"),
            );
        }
    }
    LemmaReport::pass(name, json!({"rows": rows, "ledger_totals": totals, "ratios": ratios}))
}

fn slope_of_log_log(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Marked-vertex search: success rates on fixtures, path-family ledger
/// scaling, and star-family |M| dependence.
pub fn check_search(seed: u64) -> LemmaReport {
    let name = "marked_vertex_search";
    let params = SearchParams::default();
    let mut rows = Vec::new();
    let fixtures: Vec<(&str, Graph)> = vec![
        (
            "p3",
            build_graph(&[("s", "a", 1.0), ("t", "a", 1.0)], &["t"]).unwrap(),
        ),
        ("star3", families::star(3, 3)),
        ("path8", families::path(8)),
    ];
    for (label, g) in &fixtures {
        let sigma = families::default_start(g).unwrap();
        let w = g.total_weight();
        let mut hits = 0;
        for k in 0..100u64 {
            let mut ledger = CostLedger::new();
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (1000 + k));
            if let Ok(out) = find_marked(g, &sigma, w, &params, &mut ledger, &mut rng) {
                if out.found.map(|v| g.is_marked(v)).unwrap_or(false) {
                    hits += 1;
                }
            }
        }
        rows.push(json!({"fixture": label, "hits": hits}));
        if hits < 90 {
            return LemmaReport::fail(
                name,
                json!({ "rows": rows }),
                format!("{label}: only {hits}/100 successes"),
            );
        }
    }
    // path-family scaling: ledger vs n should be ~linear on log-log axes
    let mut points = Vec::new();
    for n in [8usize, 12, 16, 24, 32, 48, 64, 96, 128] {
        let g = families::path(n);
        let sigma = Distribution::point(&g, g.index_of("v0").unwrap()).unwrap();
        let w = g.total_weight();
        let mut total = 0u64;
        let reps = 3;
        for k in 0..reps {
            let mut ledger = CostLedger::new();
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (2000 + k));
            let _ = find_marked(&g, &sigma, w, &params, &mut ledger, &mut rng);
            total += ledger.total();
        }
        points.push((n as f64, total as f64 / reps as f64));
    }
    let slope = slope_of_log_log(&points);
    if (slope - 1.0).abs() > 0.15 {
        return LemmaReport::fail(
            name,
            json!({"rows": rows, "path_points": points, "path_slope": slope}),
            format!("path-family slope {slope} outside 1.0 +- 0.15"),
        );
    }
    // star-family |M| dependence relative to |M| = 2
    let mut star_rows = Vec::new();
    let mut baseline = 0.0;
    let mut c_fit = 0f64;
    for m in [2usize, 4, 8, 16] {
        let g = families::star(16, m);
        let sigma = Distribution::point(&g, g.index_of("c").unwrap()).unwrap();
        let w = g.total_weight();
        let mut total = 0u64;
        let reps = 3;
        for k in 0..reps {
            let mut ledger = CostLedger::new();
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (3000 + k));
            let _ = find_marked(&g, &sigma, w, &params, &mut ledger, &mut rng);
            total += ledger.total();
        }
        let avg = total as f64 / reps as f64;
        if m == 2 {
            baseline = avg;
        } else {
            let growth = (avg / baseline) / (m as f64).log2().powi(3);
            c_fit = c_fit.max(growth);
        }
        star_rows.push(json!({"marked": m, "ledger": avg}));
    }
    LemmaReport::pass(
        name,
        json!({
            "rows": rows,
            "path_points": points,
            "path_slope": slope,
            "star_rows": star_rows,
            "star_log3_constant": c_fit,
        }),
    )
}

/// Degree bounds R >= 1/d_sigma >= 1/W, the stationary equality case, and
/// the unknown-W schedule overhead.
pub fn check_degree_bounds(instances: usize, seed: u64) -> LemmaReport {
    let name = "degree_bounds";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..instances {
        let na = rng.random_range(2..7);
        let nb = rng.random_range(2..7);
        let marked = rng.random_range(1..=na.min(2));
        let g = families::random_connected_bipartite(na, nb, 0.4, marked, &mut rng);
        let sigma = match families::random_sigma(&g, &mut rng) {
            Ok(s) => s,
            Err(_) => continue,
        };
        let r = effective_resistance(&g, sigma.as_slice(), g.marked()).unwrap();
        let ds = d_sigma(&g, &sigma).unwrap();
        let w = g.total_weight();
        if r < 1.0 / ds - 1e-9 || 1.0 / ds < 1.0 / w - 1e-12 {
            return LemmaReport::fail(
                name,
                json!({"instance": i, "r": r, "d_sigma": ds, "w": w}),
                format!("bound chain violated on instance {i}"),
            );
        }
        // stationary distribution: the second inequality is an equality
        let st = Distribution::stationary_a(&g);
        let ds_st = d_sigma(&g, &st).unwrap();
        if (1.0 / ds_st - 1.0 / w).abs() > 1e-12 {
            return LemmaReport::fail(
                name,
                json!({"instance": i, "d_sigma": ds_st, "w": w}),
                format!("stationary equality violated on instance {i}"),
            );
        }
    }
    // non-stationary distributions are strictly above 1/W
    let g = families::path(6);
    let sigma = Distribution::point(&g, 0).unwrap();
    let slack = 1.0 / d_sigma(&g, &sigma).unwrap() - 1.0 / g.total_weight();
    if slack <= 1e-12 {
        return LemmaReport::fail(
            name,
            json!({"slack": slack}),
            "point distribution did not separate from 1/W".into(),
        );
    }
    // unknown-W overhead on the p3 fixture
    let g = build_graph(&[("s", "a", 1.0), ("t", "a", 1.0)], &["t"]).unwrap();
    let sigma = Distribution::point(&g, g.index_of("s").unwrap()).unwrap();
    let params = SearchParams::default();
    let mut known = CostLedger::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let known_out = find_marked(&g, &sigma, 2.0, &params, &mut known, &mut rng);
    let mut unknown = CostLedger::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unknown_out =
        find_marked_unknown_w(&g, &sigma, None, None, &params, &mut unknown, &mut rng);
    let ratio = unknown.total() as f64 / known.total().max(1) as f64;
    let ok = known_out.is_ok() && unknown_out.is_ok() && ratio <= 8.0;
    let details = json!({
        "instances": instances,
        "known_ledger": known.total(),
        "unknown_ledger": unknown.total(),
        "ratio": ratio,
    });
    if !ok {
        return LemmaReport::fail(
            name,
            details,
            format!("unknown-W overhead ratio {ratio} (limit 8)"),
        );
    }
    LemmaReport::pass(name, details)
}

/// Identical seeds give identical outcomes and ledgers.
pub fn check_determinism(seed: u64) -> LemmaReport {
    let name = "determinism";
    let g = families::star(3, 3);
    let sigma = families::default_start(&g).unwrap();
    let run = || {
        let mut ledger = CostLedger::new();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let out = find_marked(&g, &sigma, 3.0, &SearchParams::default(), &mut ledger, &mut rng);
        (
            out.as_ref().ok().and_then(|o| o.found),
            out.as_ref().ok().map(|o| o.trials),
            ledger.total(),
        )
    };
    let (a, b) = (run(), run());
    if a != b {
        return LemmaReport::fail(
            name,
            json!({"first": format!("{a:?}"), "second": format!("{b:?}")}),
            "same seed produced different outcomes".into(),
        );
    }
    LemmaReport::pass(name, json!({"outcome": format!("{a:?}")}))
}

/// Run the whole verification suite.
pub fn run_all(seed: u64) -> Vec<LemmaReport> {
    vec![
        check_electric_fixtures(),
        check_hitting_time_identities(50, seed),
        check_flow_state_eigenvector(100, seed.wrapping_add(1)),
        check_projection_bounds(100, seed.wrapping_add(2)),
        check_phase_estimation(),
        check_resistance_curve(50, seed.wrapping_add(3)),
        check_resistance_estimation(seed.wrapping_add(4)),
        check_search(seed.wrapping_add(5)),
        check_degree_bounds(200, seed.wrapping_add(6)),
        check_determinism(seed.wrapping_add(7)),
    ]
}
