//! Property-based checks of the electrical-network core: conservation,
//! energy minimality, degree bounds, curve monotonicity, and sampling.

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use elecwalk::augment::resistance_curve;
use elecwalk::electric::{d_sigma, effective_resistance, net_outflow, solve};
use elecwalk::families;
use elecwalk::graph::{build_graph, Graph};
use elecwalk::phasest::kernel_amplitude;
use elecwalk::search::sample_log_uniform;

fn random_instance(na: usize, nb: usize, marked: usize, seed: u64) -> (Graph, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = families::random_connected_bipartite(na, nb, 0.4, marked.min(na), &mut rng);
    (g, rng)
}

fn point_source(g: &Graph, v: usize) -> Vec<f64> {
    let mut s = vec![0.0; g.vertex_count()];
    s[v] = 1.0;
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn electrical_flow_conserves_current(
        na in 2usize..6, nb in 2usize..6, marked in 1usize..3, seed in 0u64..1u64 << 48
    ) {
        let (g, _) = random_instance(na, nb, marked, seed);
        let s = (0..g.vertex_count()).find(|v| !g.is_marked(*v)).unwrap();
        let sol = solve(&g, &point_source(&g, s), g.marked()).unwrap();
        for v in 0..g.vertex_count() {
            if g.is_marked(v) {
                continue;
            }
            let expected = if v == s { 1.0 } else { 0.0 };
            let out = net_outflow(&g, &sol.flow, v);
            prop_assert!((out - expected).abs() < 1e-9, "vertex {v}: outflow {out}");
        }
        // unit current enters the marked set in total
        let into_marked: f64 = g.marked().iter().map(|&k| -net_outflow(&g, &sol.flow, k)).sum();
        prop_assert!((into_marked - 1.0).abs() < 1e-9);
    }

    #[test]
    fn electrical_flow_minimizes_energy(
        na in 2usize..6, nb in 2usize..6, marked in 1usize..3, seed in 0u64..1u64 << 48
    ) {
        // Thomson's principle: any other unit flow (here: the electrical flow
        // of a weight-perturbed copy) has at least the electrical energy.
        use rand::Rng as _;
        let (g, mut rng) = random_instance(na, nb, marked, seed);
        let s = (0..g.vertex_count()).find(|v| !g.is_marked(*v)).unwrap();
        let r = effective_resistance(&g, &point_source(&g, s), g.marked()).unwrap();

        let edges: Vec<(String, String, f64)> = g
            .edges()
            .iter()
            .map(|e| {
                let factor = rng.random_range(0.5..2.0);
                (g.name(e.a).to_string(), g.name(e.b).to_string(), e.weight * factor)
            })
            .collect();
        let marked_names: Vec<String> =
            g.marked().iter().map(|&k| g.name(k).to_string()).collect();
        let g2 = build_graph(&edges, &marked_names).unwrap();
        let s2 = g2.index_of(g.name(s)).unwrap();
        let sol2 = solve(&g2, &point_source(&g2, s2), g2.marked()).unwrap();

        // measure the perturbed-optimal flow against the original weights
        let mut weight_of: BTreeMap<(String, String), f64> = BTreeMap::new();
        for e in g.edges() {
            weight_of.insert((g.name(e.a).to_string(), g.name(e.b).to_string()), e.weight);
        }
        let mut energy = 0.0;
        for (e, f) in g2.edges().iter().zip(&sol2.flow.f) {
            let w = weight_of[&(g2.name(e.a).to_string(), g2.name(e.b).to_string())];
            energy += f * f / w;
        }
        prop_assert!(energy >= r - 1e-9, "competing flow energy {energy} < R = {r}");
    }

    #[test]
    fn degree_bound_chain_holds(
        na in 2usize..6, nb in 2usize..6, marked in 1usize..3, seed in 0u64..1u64 << 48
    ) {
        let (g, mut rng) = random_instance(na, nb, marked, seed);
        let sigma = match families::random_sigma(&g, &mut rng) {
            Ok(s) => s,
            Err(_) => return Ok(()),
        };
        let r = effective_resistance(&g, sigma.as_slice(), g.marked()).unwrap();
        let ds = d_sigma(&g, &sigma).unwrap();
        let w = g.total_weight();
        prop_assert!(r >= 1.0 / ds - 1e-9);
        prop_assert!(1.0 / ds >= 1.0 / w - 1e-12);
    }

    #[test]
    fn resistance_curve_monotone_and_lipschitz(
        na in 2usize..6, nb in 2usize..6, marked in 2usize..4, seed in 0u64..1u64 << 48
    ) {
        let (g, mut rng) = random_instance(na, nb, marked, seed);
        let sigma = match families::random_sigma(&g, &mut rng) {
            Ok(s) => s,
            Err(_) => return Ok(()),
        };
        let xs = [0.0, 0.25, 0.5, 1.0, 2.0, 4.0];
        let pts = resistance_curve(&g, &sigma, 1.0, &xs).unwrap();
        for w in pts.windows(2) {
            prop_assert!(w[1].resistance >= w[0].resistance - 1e-12, "R not nondecreasing");
            // q <= 1 bounds the growth: R(x + dx) <= R(x) + dx
            let dx = w[1].x - w[0].x;
            prop_assert!(w[1].resistance <= w[0].resistance + dx + 1e-9);
        }
    }

    #[test]
    fn log_uniform_stays_in_interval(
        a in 1e-3f64..1e3, ratio in 1.0001f64..1e4, seed in 0u64..1u64 << 48
    ) {
        let b = a * ratio;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..16 {
            let x = sample_log_uniform(a, b, &mut rng).unwrap();
            prop_assert!(x >= a && x <= b, "{x} outside [{a}, {b}]");
        }
    }

    #[test]
    fn pe_kernel_is_subunit(theta in -1.5f64..1.5, t in 1u32..12) {
        let mu = kernel_amplitude(theta, t).norm();
        prop_assert!(mu <= 1.0 + 1e-12, "|mu({theta}, {t})| = {mu}");
    }

    #[test]
    fn doubled_graphs_are_bipartite_with_twice_the_vertices(
        n in 3usize..7, extra in 0usize..4, seed in 0u64..1u64 << 48
    ) {
        use rand::Rng as _;
        // random connected graph with at least one odd cycle
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut present: std::collections::BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut edges: Vec<(String, String, f64)> = Vec::new();
        let add = |present: &mut BTreeSet<(usize, usize)>,
                       edges: &mut Vec<(String, String, f64)>,
                       i: usize,
                       j: usize,
                       w: f64| {
            let key = (i.min(j), i.max(j));
            if i != j && present.insert(key) {
                edges.push((format!("v{i}"), format!("v{j}"), w));
            }
        };
        for i in 0..n {
            let w = rng.random_range(0.5..2.0);
            add(&mut present, &mut edges, i, (i + 1) % n, w);
        }
        if n % 2 == 0 {
            add(&mut present, &mut edges, 0, 2, 1.0); // force an odd cycle
        }
        for _ in 0..extra {
            let i = rng.random_range(0..n);
            let j = rng.random_range(0..n);
            let w = rng.random_range(0.5..2.0);
            add(&mut present, &mut edges, i, j, w);
        }
        let sigma: BTreeMap<String, f64> = BTreeMap::from([("v1".to_string(), 1.0)]);
        let (g, d) = match elecwalk::bipartite_double(&edges, &["v0".to_string()], &sigma) {
            Ok(v) => v,
            // the random extras can make the graph bipartite after all; then
            // doubling is not applicable and build_graph must succeed instead
            Err(_) => {
                build_graph(&edges, &["v0".to_string()]).unwrap();
                return Ok(());
            }
        };
        prop_assert_eq!(g.vertex_count(), 2 * n);
        prop_assert_eq!(g.marked().len(), 2);
        let total: f64 = (0..g.vertex_count()).map(|v| d.prob(v)).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }
}
