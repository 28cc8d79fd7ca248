//! Weighted bipartite graphs with vertex roles and a directed A→B edge basis.
//!
//! Edge weights are conductances; the total weight `W` is the sum of all
//! edge weights. Every edge is stored oriented from side A to side B and all
//! flow signs downstream follow that orientation.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("edge ({u}, {v}) has non-positive or non-finite weight {w}")]
    NonPositiveWeight { u: String, v: String, w: f64 },
    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: String, v: String },
    #[error("self-loop at vertex {u}")]
    SelfLoop { u: String },
    #[error("graph is not bipartite (odd cycle through vertex {witness})")]
    NotBipartite { witness: String },
    #[error("unknown vertex {name}")]
    UnknownVertex { name: String },
    #[error("invalid distribution: {reason}")]
    InvalidDistribution { reason: String },
}

/// Which part of the bipartition a vertex belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// A directed edge from a vertex on side A to a vertex on side B.
#[derive(Debug, Clone, Copy)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub weight: f64,
}

/// Validated weighted bipartite graph with a marked vertex subset.
#[derive(Debug, Clone)]
pub struct Graph {
    names: Vec<String>,
    sides: Vec<Side>,
    edges: Vec<Edge>,
    marked: BTreeSet<usize>,
    incident: Vec<Vec<usize>>,
    index: HashMap<String, usize>,
}

impl Graph {
    pub(crate) fn from_parts(
        names: Vec<String>,
        sides: Vec<Side>,
        edges: Vec<Edge>,
        marked: BTreeSet<usize>,
    ) -> Self {
        let mut incident = vec![Vec::new(); names.len()];
        for (e, edge) in edges.iter().enumerate() {
            incident[edge.a].push(e);
            incident[edge.b].push(e);
        }
        let index = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        Graph {
            names,
            sides,
            edges,
            marked,
            incident,
            index,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn side(&self, v: usize) -> Side {
        self.sides[v]
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn marked(&self) -> &BTreeSet<usize> {
        &self.marked
    }

    pub fn is_marked(&self, v: usize) -> bool {
        self.marked.contains(&v)
    }

    /// Edge indices incident to `v`.
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn other_endpoint(&self, edge: usize, v: usize) -> usize {
        let e = &self.edges[edge];
        if e.a == v {
            e.b
        } else {
            e.a
        }
    }

    /// Total weight, recomputed from the edge list on every call.
    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    pub fn weighted_degree(&self, v: usize) -> Result<f64, GraphError> {
        if v >= self.names.len() {
            return Err(GraphError::UnknownVertex {
                name: format!("#{v}"),
            });
        }
        Ok(self.incident[v].iter().map(|&e| self.edges[e].weight).sum())
    }

    pub fn vertices_on(&self, side: Side) -> impl Iterator<Item = usize> + '_ {
        (0..self.names.len()).filter(move |&v| self.sides[v] == side)
    }

    /// Vertices reachable from `start` by BFS.
    pub fn reachable_from(&self, start: &[usize]) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count()];
        let mut queue: VecDeque<usize> = start.iter().copied().collect();
        for &v in start {
            seen[v] = true;
        }
        while let Some(v) = queue.pop_front() {
            for &e in &self.incident[v] {
                let u = self.other_endpoint(e, v);
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        seen
    }
}

fn validate_edge_list<S: AsRef<str>>(edge_list: &[(S, S, f64)]) -> Result<(), GraphError> {
    let mut seen: HashSet<(String, String)> = HashSet::new();
    for (u, v, w) in edge_list {
        let (u, v) = (u.as_ref(), v.as_ref());
        if u == v {
            return Err(GraphError::SelfLoop { u: u.to_string() });
        }
        if !w.is_finite() || *w <= 0.0 {
            return Err(GraphError::NonPositiveWeight {
                u: u.to_string(),
                v: v.to_string(),
                w: *w,
            });
        }
        let key = if u < v {
            (u.to_string(), v.to_string())
        } else {
            (v.to_string(), u.to_string())
        };
        if !seen.insert(key) {
            return Err(GraphError::DuplicateEdge {
                u: u.to_string(),
                v: v.to_string(),
            });
        }
    }
    Ok(())
}

/// Build a validated bipartite graph from an undirected edge list.
///
/// Vertices are indexed in order of first appearance. Sides are assigned by
/// 2-coloring each component, anchoring the first vertex of a component to
/// side A. Returns `NotBipartite` if any component has an odd cycle; the
/// caller then goes through [`bipartite_double`] instead.
pub fn build_graph<S: AsRef<str>>(
    edge_list: &[(S, S, f64)],
    marked: &[S],
) -> Result<Graph, GraphError> {
    validate_edge_list(edge_list)?;
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut adj: Vec<Vec<usize>> = Vec::new();
    let mut intern = |name: &str, adj: &mut Vec<Vec<usize>>| -> usize {
        *index.entry(name.to_string()).or_insert_with(|| {
            names.push(name.to_string());
            adj.push(Vec::new());
            names.len() - 1
        })
    };
    let mut raw_edges = Vec::new();
    for (u, v, w) in edge_list {
        let ui = intern(u.as_ref(), &mut adj);
        let vi = intern(v.as_ref(), &mut adj);
        adj[ui].push(vi);
        adj[vi].push(ui);
        raw_edges.push((ui, vi, *w));
    }
    // 2-coloring
    let n = names.len();
    let mut color: Vec<Option<Side>> = vec![None; n];
    for root in 0..n {
        if color[root].is_some() {
            continue;
        }
        color[root] = Some(Side::A);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let next = match color[v].unwrap() {
                Side::A => Side::B,
                Side::B => Side::A,
            };
            for &u in &adj[v] {
                match color[u] {
                    None => {
                        color[u] = Some(next);
                        queue.push_back(u);
                    }
                    Some(c) if c != next => {
                        return Err(GraphError::NotBipartite {
                            witness: names[u].clone(),
                        });
                    }
                    _ => {}
                }
            }
        }
    }
    let sides: Vec<Side> = color.into_iter().map(|c| c.unwrap()).collect();
    let edges = raw_edges
        .into_iter()
        .map(|(u, v, w)| {
            let (a, b) = if sides[u] == Side::A { (u, v) } else { (v, u) };
            Edge { a, b, weight: w }
        })
        .collect();
    let mut marked_set = BTreeSet::new();
    for m in marked {
        let m = m.as_ref();
        let idx = index
            .get(m)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex {
                name: m.to_string(),
            })?;
        marked_set.insert(idx);
    }
    Ok(Graph::from_parts(names, sides, edges, marked_set))
}

/// Initial probability distribution over vertices, supported on side A.
#[derive(Debug, Clone)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    pub fn new(g: &Graph, probs: Vec<f64>) -> Result<Self, GraphError> {
        if probs.len() != g.vertex_count() {
            return Err(GraphError::InvalidDistribution {
                reason: format!(
                    "length {} does not match vertex count {}",
                    probs.len(),
                    g.vertex_count()
                ),
            });
        }
        let mut sum = 0.0;
        for (v, &p) in probs.iter().enumerate() {
            if !(p >= 0.0) || !p.is_finite() {
                return Err(GraphError::InvalidDistribution {
                    reason: format!("negative or non-finite probability at {}", g.name(v)),
                });
            }
            if p > 0.0 && g.side(v) == Side::B {
                return Err(GraphError::InvalidDistribution {
                    reason: format!("support on side-B vertex {}", g.name(v)),
                });
            }
            sum += p;
        }
        if (sum - 1.0).abs() > 1e-12 {
            return Err(GraphError::InvalidDistribution {
                reason: format!("probabilities sum to {sum}, not 1"),
            });
        }
        Ok(Distribution { probs })
    }

    pub fn point(g: &Graph, v: usize) -> Result<Self, GraphError> {
        let mut probs = vec![0.0; g.vertex_count()];
        probs[v] = 1.0;
        Distribution::new(g, probs)
    }

    pub fn from_map(g: &Graph, map: &BTreeMap<String, f64>) -> Result<Self, GraphError> {
        let mut probs = vec![0.0; g.vertex_count()];
        for (name, &p) in map {
            let v = g
                .index_of(name)
                .ok_or_else(|| GraphError::UnknownVertex { name: name.clone() })?;
            probs[v] = p;
        }
        Distribution::new(g, probs)
    }

    /// The side-A stationary distribution sigma_u = d_u / W.
    pub fn stationary_a(g: &Graph) -> Self {
        let w = g.total_weight();
        let mut probs = vec![0.0; g.vertex_count()];
        for v in g.vertices_on(Side::A) {
            probs[v] = g.weighted_degree(v).unwrap() / w;
        }
        Distribution { probs }
    }

    pub fn prob(&self, v: usize) -> f64 {
        self.probs[v]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    /// Vertices with strictly positive probability.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(v, _)| v)
    }
}

/// Double an arbitrary (typically non-bipartite) graph into a bipartite one.
///
/// Every vertex `x` becomes `(x.0)` on side A and `(x.1)` on side B; each
/// base edge `xy` yields the two edges `(x.0, y.1)` and `(y.0, x.1)`. The
/// marked set lifts to both copies of each marked vertex and `sigma` lifts
/// onto the side-A copies.
pub fn bipartite_double<S: AsRef<str>>(
    edge_list: &[(S, S, f64)],
    marked: &[S],
    sigma: &BTreeMap<String, f64>,
) -> Result<(Graph, Distribution), GraphError> {
    validate_edge_list(edge_list)?;
    let mut doubled: Vec<(String, String, f64)> = Vec::new();
    for (u, v, w) in edge_list {
        let (u, v) = (u.as_ref(), v.as_ref());
        doubled.push((format!("{u}.0"), format!("{v}.1"), *w));
        doubled.push((format!("{v}.0"), format!("{u}.1"), *w));
    }
    let mut lifted_marked = Vec::new();
    for m in marked {
        lifted_marked.push(format!("{}.0", m.as_ref()));
        lifted_marked.push(format!("{}.1", m.as_ref()));
    }
    let g = build_graph(&doubled, &lifted_marked)?;
    // the x.0 copies always 2-color onto side A because every doubled edge
    // joins a .0 name to a .1 name
    let mut lifted_sigma = BTreeMap::new();
    for (name, &p) in sigma {
        if g.index_of(&format!("{name}.0")).is_none() {
            return Err(GraphError::UnknownVertex { name: name.clone() });
        }
        lifted_sigma.insert(format!("{name}.0"), p);
    }
    let dist = Distribution::from_map(&g, &lifted_sigma)?;
    Ok((g, dist))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Graph {
        build_graph(&[("s", "a", 1.0), ("t", "a", 1.0)], &["t"]).unwrap()
    }

    #[test]
    fn single_edge_graph() {
        let g = build_graph(&[("s", "t", 1.0)], &["t"]).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.total_weight(), 1.0);
        assert_eq!(g.side(g.index_of("s").unwrap()), Side::A);
        assert_eq!(g.side(g.index_of("t").unwrap()), Side::B);
    }

    #[test]
    fn p3_is_bipartite_path() {
        let g = p3();
        assert_eq!(g.total_weight(), 2.0);
        assert_eq!(g.side(g.index_of("s").unwrap()), Side::A);
        assert_eq!(g.side(g.index_of("t").unwrap()), Side::A);
        assert_eq!(g.side(g.index_of("a").unwrap()), Side::B);
    }

    #[test]
    fn triangle_reported_non_bipartite() {
        let err = build_graph(
            &[("u", "v", 1.0), ("v", "w", 1.0), ("w", "u", 1.0)],
            &[] as &[&str],
        )
        .unwrap_err();
        assert!(matches!(err, GraphError::NotBipartite { .. }));
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(
            build_graph(&[("u", "v", -1.0)], &[] as &[&str]),
            Err(GraphError::NonPositiveWeight { .. })
        ));
        assert!(matches!(
            build_graph(&[("u", "u", 1.0)], &[] as &[&str]),
            Err(GraphError::SelfLoop { .. })
        ));
        assert!(matches!(
            build_graph(&[("u", "v", 1.0), ("v", "u", 2.0)], &[] as &[&str]),
            Err(GraphError::DuplicateEdge { .. })
        ));
    }

    #[test]
    fn weighted_degrees() {
        let g = p3();
        assert_eq!(g.weighted_degree(g.index_of("a").unwrap()).unwrap(), 2.0);
        assert_eq!(g.weighted_degree(g.index_of("s").unwrap()).unwrap(), 1.0);
        let star = build_graph(
            &[("c", "l1", 1.0), ("c", "l2", 1.0), ("c", "l3", 1.0)],
            &[] as &[&str],
        )
        .unwrap();
        assert_eq!(
            star.weighted_degree(star.index_of("c").unwrap()).unwrap(),
            3.0
        );
        assert!(g.weighted_degree(99).is_err());
    }

    #[test]
    fn doubling_triangle() {
        let sigma = BTreeMap::from([("u".to_string(), 1.0)]);
        let (g, dist) = bipartite_double(
            &[("u", "v", 1.0), ("v", "w", 1.0), ("w", "u", 1.0)],
            &["w"],
            &sigma,
        )
        .unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.total_weight(), 6.0);
        assert_eq!(g.marked().len(), 2);
        assert_eq!(dist.prob(g.index_of("u.0").unwrap()), 1.0);
    }

    #[test]
    fn doubling_p2_gives_two_disjoint_p2s() {
        let sigma = BTreeMap::from([("s".to_string(), 1.0)]);
        let (g, _) = bipartite_double(&[("s", "t", 1.0)], &["t"], &sigma).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.total_weight(), 2.0);
    }

    #[test]
    fn distribution_rejects_side_b_support() {
        let g = p3();
        let a = g.index_of("a").unwrap();
        let mut probs = vec![0.0; 3];
        probs[a] = 1.0;
        assert!(matches!(
            Distribution::new(&g, probs),
            Err(GraphError::InvalidDistribution { .. })
        ));
    }

    #[test]
    fn stationary_a_sums_to_one() {
        let g = p3();
        let d = Distribution::stationary_a(&g);
        let sum: f64 = g.vertices_on(Side::A).map(|v| d.prob(v)).sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert_eq!(d.prob(g.index_of("s").unwrap()), 0.5);
    }
}
