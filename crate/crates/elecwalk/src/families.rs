//! Built-in graph families used as experiment fixtures: paths, cycles,
//! stars, 2D grids, and random connected bipartite graphs.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{build_graph, Distribution, Graph, GraphError, Side};

/// Path on n vertices v0 - v1 - ... - v(n-1), unit weights, last vertex
/// marked. n >= 2.
pub fn path(n: usize) -> Graph {
    assert!(n >= 2, "path needs at least 2 vertices");
    let edges: Vec<(String, String, f64)> = (0..n - 1)
        .map(|i| (format!("v{i}"), format!("v{}", i + 1), 1.0))
        .collect();
    build_graph(&edges, &[format!("v{}", n - 1)]).unwrap()
}

/// Even cycle on n vertices, unit weights, vertex opposite v0 marked.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 4 && n % 2 == 0, "cycle needs an even n >= 4");
    let edges: Vec<(String, String, f64)> = (0..n)
        .map(|i| (format!("v{i}"), format!("v{}", (i + 1) % n), 1.0))
        .collect();
    build_graph(&edges, &[format!("v{}", n / 2)]).unwrap()
}

/// Star with `leaves` leaves, unit weights, the first `marked` leaves marked.
pub fn star(leaves: usize, marked: usize) -> Graph {
    assert!(leaves >= 1 && marked >= 1 && marked <= leaves);
    let edges: Vec<(String, String, f64)> = (0..leaves)
        .map(|i| ("c".to_string(), format!("l{i}"), 1.0))
        .collect();
    let marked: Vec<String> = (0..marked).map(|i| format!("l{i}")).collect();
    build_graph(&edges, &marked).unwrap()
}

/// rows x cols grid, unit weights, far corner marked.
pub fn grid2d(rows: usize, cols: usize) -> Graph {
    assert!(rows >= 2 && cols >= 2);
    let name = |r: usize, c: usize| format!("g{r}_{c}");
    let mut edges: Vec<(String, String, f64)> = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((name(r, c), name(r, c + 1), 1.0));
            }
            if r + 1 < rows {
                edges.push((name(r, c), name(r + 1, c), 1.0));
            }
        }
    }
    build_graph(&edges, &[name(rows - 1, cols - 1)]).unwrap()
}

/// Random connected bipartite graph with `na` side-A and `nb` side-B
/// vertices, random weights in [0.5, 2], and `marked` marked vertices
/// drawn from side A (so the stationary hitting-time identity applies
/// exactly).
pub fn random_connected_bipartite(
    na: usize,
    nb: usize,
    extra_edge_prob: f64,
    marked: usize,
    rng: &mut ChaCha8Rng,
) -> Graph {
    assert!(na >= 1 && nb >= 1 && marked >= 1 && marked <= na);
    let a = |i: usize| format!("a{i}");
    let b = |j: usize| format!("b{j}");
    let mut present = vec![vec![false; nb]; na];
    let mut edges: Vec<(String, String, f64)> = Vec::new();
    // spanning backbone alternating between the sides
    for k in 0..na.max(nb) {
        let i = k.min(na - 1);
        let j = k.min(nb - 1);
        present[i][j] = true;
        if k + 1 < na.max(nb) {
            present[(k + 1).min(na - 1)][j] = true;
        }
    }
    for i in 0..na {
        for j in 0..nb {
            if !present[i][j] && rng.random::<f64>() < extra_edge_prob {
                present[i][j] = true;
            }
        }
    }
    for (i, row) in present.iter().enumerate() {
        for (j, &on) in row.iter().enumerate() {
            if on {
                edges.push((a(i), b(j), rng.random_range(0.5..2.0)));
            }
        }
    }
    // marked vertices: a random side-A subset of the requested size
    let mut pool: Vec<usize> = (0..na).collect();
    for k in 0..marked {
        let pick = rng.random_range(k..pool.len());
        pool.swap(k, pick);
    }
    let marked_names: Vec<String> = pool[..marked].iter().map(|&i| a(i)).collect();
    build_graph(&edges, &marked_names).unwrap()
}

/// Random distribution supported on unmarked side-A vertices.
pub fn random_sigma(g: &Graph, rng: &mut ChaCha8Rng) -> Result<Distribution, GraphError> {
    let mut probs = vec![0.0; g.vertex_count()];
    let mut total = 0.0;
    for v in g.vertices_on(Side::A) {
        if !g.is_marked(v) {
            let p = rng.random::<f64>();
            probs[v] = p;
            total += p;
        }
    }
    if total <= 0.0 {
        return Err(GraphError::InvalidDistribution {
            reason: "no unmarked side-A vertex to carry probability".into(),
        });
    }
    for p in probs.iter_mut() {
        *p /= total;
    }
    Distribution::new(g, probs)
}

/// Point distribution at the first unmarked side-A vertex.
pub fn default_start(g: &Graph) -> Result<Distribution, GraphError> {
    let v = g
        .vertices_on(Side::A)
        .find(|&v| !g.is_marked(v))
        .ok_or_else(|| GraphError::InvalidDistribution {
            reason: "no unmarked side-A vertex for the start".into(),
        })?;
    Distribution::point(g, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn path_structure() {
        let g = path(8);
        assert_eq!(g.vertex_count(), 8);
        assert_eq!(g.edge_count(), 7);
        assert_eq!(g.marked().len(), 1);
        assert!((g.total_weight() - 7.0).abs() < 1e-12);
    }

    #[test]
    fn cycle_and_star_and_grid() {
        let c = cycle(8);
        assert_eq!(c.edge_count(), 8);
        let s = star(5, 3);
        assert_eq!(s.marked().len(), 3);
        let gr = grid2d(3, 4);
        assert_eq!(gr.vertex_count(), 12);
        assert_eq!(gr.edge_count(), 3 * 3 + 2 * 4);
    }

    #[test]
    fn random_bipartite_is_connected_with_a_side_marked() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let na = rng.random_range(2..8);
            let nb = rng.random_range(2..8);
            let m = rng.random_range(1..=na.min(2));
            let g = random_connected_bipartite(na, nb, 0.3, m, &mut rng);
            let reach = g.reachable_from(&[0]);
            assert!(reach.iter().all(|&r| r), "graph not connected");
            assert_eq!(g.marked().len(), m);
            for &k in g.marked() {
                assert_eq!(g.side(k), Side::A);
            }
        }
    }

    #[test]
    fn random_sigma_is_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let g = random_connected_bipartite(5, 4, 0.4, 1, &mut rng);
        let d = random_sigma(&g, &mut rng).unwrap();
        let sum: f64 = (0..g.vertex_count()).map(|v| d.prob(v)).sum();
        assert!((sum - 1.0).abs() < 1e-12);
        for u in d.support() {
            assert!(!g.is_marked(u));
        }
    }
}
