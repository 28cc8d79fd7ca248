//! Classical electrical-network solver.
//!
//! This is the brute-force oracle for everything the quantum pipeline
//! claims: potentials, flows, effective resistance, hitting times, and the
//! degree-based lower bounds. Marked vertices are grounded at zero volts by
//! eliminating their rows and columns from the Laplacian (Dirichlet
//! conditions); the reduced system is solved by a dense direct
//! factorization.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::graph::{Distribution, Graph};

#[derive(Debug, Error, PartialEq)]
pub enum ElectricError {
    #[error("marked set is empty")]
    EmptyMarkedSet,
    #[error("source vertex {name} cannot reach the marked set")]
    UnreachableMarkedSet { name: String },
    #[error("distribution has zero support")]
    ZeroSupport,
    #[error("linear solve failed: {0}")]
    SolveFailed(String),
}

/// Vertex voltages, grounded to zero on the marked set.
#[derive(Debug, Clone)]
pub struct Potential {
    pub v: Vec<f64>,
}

/// Signed flow per edge, positive in the stored A→B direction.
#[derive(Debug, Clone)]
pub struct Flow {
    pub f: Vec<f64>,
}

fn check_reachability(
    g: &Graph,
    source: &[f64],
    marked: &BTreeSet<usize>,
) -> Result<Vec<bool>, ElectricError> {
    if marked.is_empty() {
        return Err(ElectricError::EmptyMarkedSet);
    }
    let marked_vec: Vec<usize> = marked.iter().copied().collect();
    let reach = g.reachable_from(&marked_vec);
    for (v, &p) in source.iter().enumerate() {
        if p > 0.0 && !reach[v] && !marked.contains(&v) {
            return Err(ElectricError::UnreachableMarkedSet {
                name: g.name(v).to_string(),
            });
        }
    }
    Ok(reach)
}

/// Solve the grounded Laplacian system `L v = source` with `v = 0` on the
/// marked set. Source mass sitting on a marked vertex is dropped (it enters
/// the network at zero potential and contributes no flow).
pub fn solve_potentials(
    g: &Graph,
    source: &[f64],
    marked: &BTreeSet<usize>,
) -> Result<Potential, ElectricError> {
    let reach = check_reachability(g, source, marked)?;
    let free: Vec<usize> = (0..g.vertex_count())
        .filter(|v| !marked.contains(v) && reach[*v])
        .collect();
    let mut pos = vec![usize::MAX; g.vertex_count()];
    for (i, &v) in free.iter().enumerate() {
        pos[v] = i;
    }
    let n = free.len();
    let mut lap = DMatrix::<f64>::zeros(n, n);
    for e in g.edges() {
        let (pa, pb) = (pos[e.a], pos[e.b]);
        if pa != usize::MAX {
            lap[(pa, pa)] += e.weight;
        }
        if pb != usize::MAX {
            lap[(pb, pb)] += e.weight;
        }
        if pa != usize::MAX && pb != usize::MAX {
            lap[(pa, pb)] -= e.weight;
            lap[(pb, pa)] -= e.weight;
        }
    }
    let rhs = DVector::from_iterator(n, free.iter().map(|&v| source[v]));
    let sol = lap
        .clone()
        .cholesky()
        .map(|ch| ch.solve(&rhs))
        .or_else(|| lap.clone().lu().solve(&rhs))
        .ok_or_else(|| ElectricError::SolveFailed("singular reduced Laplacian".into()))?;
    let residual = (&lap * &sol - &rhs).norm();
    let scale = rhs.norm().max(1e-300);
    if residual / scale > 1e-10 {
        return Err(ElectricError::SolveFailed(format!(
            "residual {residual:e} too large"
        )));
    }
    let mut v = vec![0.0; g.vertex_count()];
    for (i, &vi) in free.iter().enumerate() {
        v[vi] = sol[i];
    }
    Ok(Potential { v })
}

/// Edgewise compatible flow `f_e = (v_a - v_b) w_e`.
pub fn electrical_flow(g: &Graph, potential: &Potential) -> Flow {
    let f = g
        .edges()
        .iter()
        .map(|e| (potential.v[e.a] - potential.v[e.b]) * e.weight)
        .collect();
    Flow { f }
}

/// Flow energy: sum over edges of f^2 / w.
pub fn flow_energy(g: &Graph, flow: &Flow) -> f64 {
    g.edges()
        .iter()
        .zip(&flow.f)
        .map(|(e, f)| f * f / e.weight)
        .sum()
}

/// Net flow out of `v` in the oriented edge basis (A-side positive out).
pub fn net_outflow(g: &Graph, flow: &Flow, v: usize) -> f64 {
    let mut out = 0.0;
    for &e in g.incident_edges(v) {
        let edge = &g.edges()[e];
        if edge.a == v {
            out += flow.f[e];
        } else {
            out -= flow.f[e];
        }
    }
    out
}

/// Effective resistance between the source distribution and the marked set:
/// the energy of the electrical flow.
pub fn effective_resistance(
    g: &Graph,
    source: &[f64],
    marked: &BTreeSet<usize>,
) -> Result<f64, ElectricError> {
    let pot = solve_potentials(g, source, marked)?;
    let flow = electrical_flow(g, &pot);
    Ok(flow_energy(g, &flow))
}

/// One full electrical solution for a (graph, source, marked) instance.
#[derive(Debug, Clone)]
pub struct ElectricSolution {
    pub potential: Potential,
    pub flow: Flow,
    pub resistance: f64,
}

pub fn solve(
    g: &Graph,
    source: &[f64],
    marked: &BTreeSet<usize>,
) -> Result<ElectricSolution, ElectricError> {
    let potential = solve_potentials(g, source, marked)?;
    let flow = electrical_flow(g, &potential);
    let resistance = flow_energy(g, &flow);
    Ok(ElectricSolution {
        potential,
        flow,
        resistance,
    })
}

/// Expected number of classical random-walk steps from `sigma` to the
/// marked set. Test oracle only.
pub fn hitting_time(
    g: &Graph,
    sigma: &[f64],
    marked: &BTreeSet<usize>,
) -> Result<f64, ElectricError> {
    check_reachability(g, sigma, marked)?;
    let free: Vec<usize> = (0..g.vertex_count())
        .filter(|v| !marked.contains(v))
        .collect();
    let mut pos = vec![usize::MAX; g.vertex_count()];
    for (i, &v) in free.iter().enumerate() {
        pos[v] = i;
    }
    let n = free.len();
    // (I - P) h = 1 over unmarked vertices, h = 0 on the marked set
    let mut m = DMatrix::<f64>::identity(n, n);
    for (i, &v) in free.iter().enumerate() {
        let d = g.weighted_degree(v).unwrap();
        if d == 0.0 {
            continue;
        }
        for &e in g.incident_edges(v) {
            let u = g.other_endpoint(e, v);
            if pos[u] != usize::MAX {
                m[(i, pos[u])] -= g.edges()[e].weight / d;
            }
        }
    }
    let rhs = DVector::from_element(n, 1.0);
    let sol = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| ElectricError::SolveFailed("singular hitting-time system".into()))?;
    let mut ht = 0.0;
    for (i, &v) in free.iter().enumerate() {
        ht += sigma[v] * sol[i];
    }
    Ok(ht)
}

/// Harmonic-type weighted degree of a distribution: 1/d_sigma = sum sigma_u^2/d_u.
pub fn d_sigma(g: &Graph, sigma: &Distribution) -> Result<f64, ElectricError> {
    let mut inv = 0.0;
    let mut any = false;
    for u in sigma.support() {
        any = true;
        let d = g.weighted_degree(u).unwrap();
        if d == 0.0 {
            return Err(ElectricError::UnreachableMarkedSet {
                name: g.name(u).to_string(),
            });
        }
        inv += sigma.prob(u) * sigma.prob(u) / d;
    }
    if !any {
        return Err(ElectricError::ZeroSupport);
    }
    Ok(1.0 / inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    fn p3() -> (Graph, usize, usize, usize) {
        let g = build_graph(&[("s", "a", 1.0), ("t", "a", 1.0)], &["t"]).unwrap();
        let s = g.index_of("s").unwrap();
        let a = g.index_of("a").unwrap();
        let t = g.index_of("t").unwrap();
        (g, s, a, t)
    }

    fn point_source(g: &Graph, v: usize) -> Vec<f64> {
        let mut s = vec![0.0; g.vertex_count()];
        s[v] = 1.0;
        s
    }

    fn cycle4() -> Graph {
        build_graph(
            &[
                ("s", "a", 1.0),
                ("a", "t", 1.0),
                ("t", "b", 1.0),
                ("b", "s", 1.0),
            ],
            &["t"],
        )
        .unwrap()
    }

    fn star3() -> Graph {
        build_graph(
            &[("c", "l1", 1.0), ("c", "l2", 1.0), ("c", "l3", 1.0)],
            &["l1", "l2", "l3"],
        )
        .unwrap()
    }

    #[test]
    fn p3_series_potentials() {
        let (g, s, a, t) = p3();
        let pot = solve_potentials(&g, &point_source(&g, s), g.marked()).unwrap();
        assert!((pot.v[s] - 2.0).abs() < 1e-12);
        assert!((pot.v[a] - 1.0).abs() < 1e-12);
        assert!(pot.v[t].abs() < 1e-12);
    }

    #[test]
    fn p2_potentials() {
        let g = build_graph(&[("s", "t", 1.0)], &["t"]).unwrap();
        let s = g.index_of("s").unwrap();
        let pot = solve_potentials(&g, &point_source(&g, s), g.marked()).unwrap();
        assert!((pot.v[s] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cycle4_symmetric_potentials() {
        let g = cycle4();
        let s = g.index_of("s").unwrap();
        let pot = solve_potentials(&g, &point_source(&g, s), g.marked()).unwrap();
        assert!((pot.v[s] - 1.0).abs() < 1e-12);
        assert!((pot.v[g.index_of("a").unwrap()] - 0.5).abs() < 1e-12);
        assert!((pot.v[g.index_of("b").unwrap()] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn p3_flow_and_energy() {
        let (g, s, _, _) = p3();
        let sol = solve(&g, &point_source(&g, s), g.marked()).unwrap();
        // edges stored (s,a) and (t,a); net flow s -> a -> t
        assert!((sol.flow.f[0] - 1.0).abs() < 1e-12);
        assert!((sol.flow.f[1] + 1.0).abs() < 1e-12);
        assert!((sol.resistance - 2.0).abs() < 1e-12);
    }

    #[test]
    fn cycle4_flow_splits_evenly() {
        let g = cycle4();
        let s = g.index_of("s").unwrap();
        let sol = solve(&g, &point_source(&g, s), g.marked()).unwrap();
        for f in &sol.flow.f {
            assert!((f.abs() - 0.5).abs() < 1e-12);
        }
        assert!((sol.resistance - 1.0).abs() < 1e-12);
    }

    #[test]
    fn star_flow_and_resistance() {
        let g = star3();
        let c = g.index_of("c").unwrap();
        let sol = solve(&g, &point_source(&g, c), g.marked()).unwrap();
        for f in &sol.flow.f {
            assert!((f - 1.0 / 3.0).abs() < 1e-12);
        }
        assert!((sol.resistance - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn flow_conservation_at_unmarked_vertices() {
        let g = cycle4();
        let s = g.index_of("s").unwrap();
        let sol = solve(&g, &point_source(&g, s), g.marked()).unwrap();
        for v in 0..g.vertex_count() {
            if g.is_marked(v) {
                continue;
            }
            let expected = if v == s { 1.0 } else { 0.0 };
            let out = net_outflow(&g, &sol.flow, v);
            assert!((out - expected).abs() < 1e-9, "vertex {v}");
        }
    }

    #[test]
    fn hitting_times_p2_p3() {
        let g = build_graph(&[("s", "t", 1.0)], &["t"]).unwrap();
        let s = g.index_of("s").unwrap();
        assert!((hitting_time(&g, &point_source(&g, s), g.marked()).unwrap() - 1.0).abs() < 1e-12);

        let (g, s, _, t) = p3();
        let ht_st = hitting_time(&g, &point_source(&g, s), g.marked()).unwrap();
        assert!((ht_st - 4.0).abs() < 1e-12);
        // reverse direction: marked {s}
        let marked_s: BTreeSet<usize> = [s].into();
        let ht_ts = hitting_time(&g, &point_source(&g, t), &marked_s).unwrap();
        assert!((ht_ts - 4.0).abs() < 1e-12);
        let r = effective_resistance(&g, &point_source(&g, s), g.marked()).unwrap();
        let w = g.total_weight();
        assert!((ht_st + ht_ts - 2.0 * r * w).abs() < 1e-10);
    }

    #[test]
    fn stationary_hitting_identity_p3() {
        let (g, _, _, _) = p3();
        let sigma = Distribution::stationary_a(&g);
        let ht = hitting_time(&g, sigma.as_slice(), g.marked()).unwrap();
        let r = effective_resistance(&g, sigma.as_slice(), g.marked()).unwrap();
        let w = g.total_weight();
        assert!((ht - 2.0 * r * w).abs() / ht < 1e-8);
    }

    #[test]
    fn d_sigma_values() {
        let (g, s, _, _) = p3();
        let delta = Distribution::point(&g, s).unwrap();
        assert!((d_sigma(&g, &delta).unwrap() - 1.0).abs() < 1e-12);
        // stationary on A side of P3: 1/d_sigma = 1/2 = 1/W
        let st = Distribution::stationary_a(&g);
        let ds = d_sigma(&g, &st).unwrap();
        assert!((1.0 / ds - 1.0 / g.total_weight()).abs() < 1e-12);
    }

    #[test]
    fn unreachable_and_empty_marked_errors() {
        let g = build_graph(&[("s", "a", 1.0), ("u", "v", 1.0)], &["a"]).unwrap();
        let u = g.index_of("u").unwrap();
        assert!(matches!(
            solve_potentials(&g, &{
                let mut s = vec![0.0; g.vertex_count()];
                s[u] = 1.0;
                s
            }, g.marked()),
            Err(ElectricError::UnreachableMarkedSet { .. })
        ));
        let empty = BTreeSet::new();
        let s = g.index_of("s").unwrap();
        assert_eq!(
            solve_potentials(
                &g,
                &{
                    let mut src = vec![0.0; g.vertex_count()];
                    src[s] = 1.0;
                    src
                },
                &empty
            )
            .unwrap_err(),
            ElectricError::EmptyMarkedSet
        );
    }
}
