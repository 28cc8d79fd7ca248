//! Augmented graph construction: an extra start vertex s' encoding the
//! initial distribution, plus optional tail vertices of resistance x hanging
//! off each marked vertex.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::electric::{self, ElectricError, ElectricSolution};
use crate::graph::{Distribution, Edge, Graph, GraphError, Side};

#[derive(Debug, Error)]
pub enum AugmentError {
    #[error("eta must be strictly positive, got {0}")]
    NonPositiveEta(f64),
    #[error("x must be nonnegative, got {0}")]
    NegativeX(f64),
    #[error("marked set is empty")]
    EmptyMarkedSet,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A tail vertex k' attached to a marked vertex k with weight 1/x.
#[derive(Debug, Clone, Copy)]
pub struct TailEdge {
    /// Marked base vertex k, as an index into the augmented graph.
    pub base: usize,
    /// Tail vertex k'.
    pub tail: usize,
    /// Index of the (k, k') edge in the augmented graph.
    pub edge: usize,
}

/// The graph G'(eta, x): base graph plus start vertex s' and, when x > 0,
/// one tail vertex per marked vertex. The marked set of the augmented graph
/// is M' (the tails) when x > 0 and M itself when x = 0.
#[derive(Debug, Clone)]
pub struct AugmentedGraph {
    pub graph: Graph,
    pub eta: f64,
    pub x: f64,
    /// Index of s' in the augmented graph.
    pub start: usize,
    /// Marked set of the augmented graph (M' or M).
    pub marked: BTreeSet<usize>,
    pub tails: Vec<TailEdge>,
    /// Augmented vertex index -> base vertex index, None for s' and tails.
    pub base_vertex: Vec<Option<usize>>,
}

fn unique_name(taken: &mut BTreeSet<String>, base: &str) -> String {
    let mut name = format!("{base}'");
    while taken.contains(&name) {
        name.push('\'');
    }
    taken.insert(name.clone());
    name
}

/// Build G'(eta, x).
///
/// s' goes on side B with an edge of weight sigma_u/eta to every vertex in
/// the support of sigma, so that d_{s'} = 1/eta. With x = 0 no tail
/// vertices are added and M' is identified with M.
pub fn augment(
    g: &Graph,
    sigma: &Distribution,
    eta: f64,
    x: f64,
) -> Result<AugmentedGraph, AugmentError> {
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(AugmentError::NonPositiveEta(eta));
    }
    if x < 0.0 || !x.is_finite() {
        return Err(AugmentError::NegativeX(x));
    }
    if g.marked().is_empty() {
        return Err(AugmentError::EmptyMarkedSet);
    }
    let n = g.vertex_count();
    let mut names: Vec<String> = (0..n).map(|v| g.name(v).to_string()).collect();
    let mut taken: BTreeSet<String> = names.iter().cloned().collect();
    let mut sides: Vec<Side> = (0..n).map(|v| g.side(v)).collect();
    let mut edges: Vec<Edge> = g.edges().to_vec();
    let mut base_vertex: Vec<Option<usize>> = (0..n).map(Some).collect();

    let start = names.len();
    names.push(unique_name(&mut taken, "s"));
    sides.push(Side::B);
    base_vertex.push(None);
    for u in sigma.support() {
        edges.push(Edge {
            a: u,
            b: start,
            weight: sigma.prob(u) / eta,
        });
    }

    let mut tails = Vec::new();
    let marked: BTreeSet<usize> = if x > 0.0 {
        let mut mprime = BTreeSet::new();
        for &k in g.marked() {
            let tail = names.len();
            names.push(unique_name(&mut taken, g.name(k)));
            sides.push(match g.side(k) {
                Side::A => Side::B,
                Side::B => Side::A,
            });
            base_vertex.push(None);
            let edge = edges.len();
            edges.push(match g.side(k) {
                Side::A => Edge {
                    a: k,
                    b: tail,
                    weight: 1.0 / x,
                },
                Side::B => Edge {
                    a: tail,
                    b: k,
                    weight: 1.0 / x,
                },
            });
            tails.push(TailEdge { base: k, tail, edge });
            mprime.insert(tail);
        }
        mprime
    } else {
        g.marked().clone()
    };

    let graph = Graph::from_parts(names, sides, edges, marked.clone());
    Ok(AugmentedGraph {
        graph,
        eta,
        x,
        start,
        marked,
        tails,
        base_vertex,
    })
}

impl AugmentedGraph {
    /// Unit point source at s'.
    pub fn start_source(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.graph.vertex_count()];
        s[self.start] = 1.0;
        s
    }

    /// Electrical solution for unit current from s' to the marked set.
    pub fn solve(&self) -> Result<ElectricSolution, ElectricError> {
        electric::solve(&self.graph, &self.start_source(), &self.marked)
    }

    /// Squared-flow mass through the tail edges, q(x). For x = 0 the tails
    /// do not exist and the net inflow at each marked vertex stands in.
    pub fn tail_flow_q(&self, flow: &crate::electric::Flow) -> f64 {
        if self.x > 0.0 {
            self.tails
                .iter()
                .map(|t| {
                    let f = flow.f[t.edge];
                    f * f
                })
                .sum()
        } else {
            self.marked
                .iter()
                .map(|&k| {
                    let inflow = -electric::net_outflow(&self.graph, flow, k);
                    inflow * inflow
                })
                .sum()
        }
    }

    /// Map an augmented vertex back to its base-graph vertex, if it has one.
    pub fn base_of(&self, v: usize) -> Option<usize> {
        self.base_vertex[v]
    }
}

/// One sample point of the resistance curve x -> (R_{s',M'}(x), q(x)).
#[derive(Debug, Clone, Copy)]
pub struct CurvePoint {
    pub x: f64,
    pub resistance: f64,
    pub q: f64,
}

/// Evaluate R_{s',M'}(x) and q(x) over an ascending grid of x values.
pub fn resistance_curve(
    g: &Graph,
    sigma: &Distribution,
    eta: f64,
    x_values: &[f64],
) -> Result<Vec<CurvePoint>, crate::error::Error> {
    let mut out = Vec::with_capacity(x_values.len());
    for &x in x_values {
        let aug = augment(g, sigma, eta, x)?;
        let sol = aug.solve()?;
        let q = aug.tail_flow_q(&sol.flow);
        out.push(CurvePoint {
            x,
            resistance: sol.resistance,
            q,
        });
    }
    Ok(out)
}
