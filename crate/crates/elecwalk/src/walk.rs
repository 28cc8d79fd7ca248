//! Quantum walk operator on the edge space of an augmented graph.
//!
//! The Hilbert space has one basis vector per directed edge. U_A and U_B
//! are block reflections over the side-A and side-B vertex neighborhoods,
//! with the diffusion suppressed at the start vertex and the marked set.
//! Everything is dense and exact: the walk operator is a real orthogonal
//! matrix and its spectrum is recovered from the symmetric part
//! (U + U^T)/2, whose eigenspaces are paired into rotation planes by the
//! skew part. This avoids a general complex eigensolver and keeps the
//! eigenvector matrix orthonormal even in degenerate eigenspaces.

use nalgebra::{Complex, DMatrix, DVector};
use thiserror::Error;

use crate::augment::AugmentedGraph;
use crate::electric::Flow;
use crate::graph::Side;

pub type C64 = Complex<f64>;

/// Default cap on the edge-basis dimension for dense eigendecomposition.
pub const DEFAULT_DIMENSION_CAP: usize = 4096;

#[derive(Debug, Error)]
pub enum WalkError {
    #[error("edge basis dimension {dim} exceeds the dense eigendecomposition cap {cap}")]
    DimensionOverflow { dim: usize, cap: usize },
    #[error("eigendecomposition failed: {0}")]
    Eigen(String),
    #[error("effective resistance is zero (all source mass on the marked set)")]
    ZeroResistance,
    #[error("input state is not normalized (norm {0})")]
    NonNormalizedInput(f64),
}

/// Complex amplitude vector over the ordered A→B edge basis.
#[derive(Debug, Clone)]
pub struct EdgeState {
    pub amps: DVector<C64>,
}

impl EdgeState {
    pub fn zeros(dim: usize) -> Self {
        EdgeState {
            amps: DVector::from_element(dim, C64::new(0.0, 0.0)),
        }
    }

    pub fn from_real(v: &[f64]) -> Self {
        EdgeState {
            amps: DVector::from_iterator(v.len(), v.iter().map(|&x| C64::new(x, 0.0))),
        }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// ⟨self|other⟩ with the convention of conjugating `self`.
    pub fn inner(&self, other: &EdgeState) -> C64 {
        self.amps.dotc(&other.amps)
    }

    pub fn normalized(&self) -> EdgeState {
        let n = self.norm();
        EdgeState {
            amps: self.amps.map(|a| a / n),
        }
    }

    pub fn add_scaled(&mut self, coeff: C64, other: &EdgeState) {
        self.amps.axpy(coeff, &other.amps, C64::new(1.0, 0.0));
    }

    /// Probability of measuring each edge in the computational basis.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// The walk operator U = U_A U_B with its eigendecomposition.
///
/// Eigenphases are reported as theta in (-pi/2, pi/2], half the argument of
/// the eigenvalue e^{2i theta}.
#[derive(Debug, Clone)]
pub struct WalkOperator {
    pub u_a: DMatrix<f64>,
    pub u_b: DMatrix<f64>,
    pub u: DMatrix<f64>,
    phases: Vec<f64>,
    vectors: DMatrix<C64>,
}

fn reflection_for_side(aug: &AugmentedGraph, side: Side) -> DMatrix<f64> {
    let g = &aug.graph;
    let dim = g.edge_count();
    let mut m = DMatrix::<f64>::identity(dim, dim);
    for v in g.vertices_on(side) {
        if v == aug.start || aug.marked.contains(&v) {
            continue;
        }
        let inc = g.incident_edges(v);
        if inc.is_empty() {
            continue;
        }
        let d: f64 = inc.iter().map(|&e| g.edges()[e].weight).sum();
        // D_v = I - 2 |psi_v><psi_v| on the block of edges incident to v
        for &e1 in inc {
            for &e2 in inc {
                let w1 = g.edges()[e1].weight;
                let w2 = g.edges()[e2].weight;
                m[(e1, e2)] -= 2.0 * (w1 * w2).sqrt() / d;
            }
        }
    }
    m
}

pub fn build_walk_operator(aug: &AugmentedGraph) -> Result<WalkOperator, WalkError> {
    build_walk_operator_with_cap(aug, DEFAULT_DIMENSION_CAP)
}

pub fn build_walk_operator_with_cap(
    aug: &AugmentedGraph,
    cap: usize,
) -> Result<WalkOperator, WalkError> {
    let dim = aug.graph.edge_count();
    if dim > cap {
        return Err(WalkError::DimensionOverflow { dim, cap });
    }
    let u_a = reflection_for_side(aug, Side::A);
    let u_b = reflection_for_side(aug, Side::B);
    let u = &u_a * &u_b;
    let (phases, vectors) = eigendecompose_orthogonal(&u)?;
    Ok(WalkOperator {
        u_a,
        u_b,
        u,
        phases,
        vectors,
    })
}

/// Eigendecomposition of a real orthogonal matrix into unit-circle
/// eigenvalues e^{2i theta} with an orthonormal complex eigenbasis.
fn eigendecompose_orthogonal(u: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<C64>), WalkError> {
    let n = u.nrows();
    if n == 0 {
        return Ok((Vec::new(), DMatrix::zeros(0, 0)));
    }
    let sym = (u + u.transpose()) * 0.5;
    let skew = (u - u.transpose()) * 0.5;
    let se = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].partial_cmp(&se.eigenvalues[j]).unwrap());

    let mut phases: Vec<f64> = Vec::with_capacity(n);
    let mut cols: Vec<DVector<C64>> = Vec::with_capacity(n);

    let mut idx = 0;
    while idx < n {
        // cluster of (numerically) equal cos(2 theta) eigenvalues
        let mut end = idx + 1;
        while end < n
            && se.eigenvalues[order[end]] - se.eigenvalues[order[end - 1]] < 1e-8
        {
            end += 1;
        }
        let members = &order[idx..end];
        let m = members.len();
        let cos2t = members.iter().map(|&k| se.eigenvalues[k]).sum::<f64>() / m as f64;
        let basis = DMatrix::<f64>::from_columns(
            &members
                .iter()
                .map(|&k| se.eigenvectors.column(k).into_owned())
                .collect::<Vec<_>>(),
        );
        let skew_block = basis.transpose() * &skew * &basis;
        let sin2t = skew_block.norm() / (m as f64).sqrt();
        if sin2t < 1e-8 {
            // real eigenvalue +-1; columns are eigenvectors already
            let theta = if cos2t >= 0.0 {
                0.0
            } else {
                std::f64::consts::FRAC_PI_2
            };
            for &k in members {
                phases.push(theta);
                cols.push(se.eigenvectors.column(k).map(|x| C64::new(x, 0.0)));
            }
        } else {
            // rotation planes: J = skew/sin is a complex structure on the cluster
            let j = skew_block / sin2t;
            let pairs = pair_basis(&j, m)?;
            let theta = 0.5 * sin2t.atan2(cos2t);
            let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
            for (x, jx) in pairs {
                let real = &basis * &x;
                let imag = &basis * &jx;
                let plus = DVector::from_iterator(
                    n,
                    real.iter()
                        .zip(imag.iter())
                        .map(|(&r, &i)| C64::new(r * inv_sqrt2, -i * inv_sqrt2)),
                );
                let minus = plus.map(|c| c.conj());
                phases.push(theta);
                cols.push(plus);
                phases.push(-theta);
                cols.push(minus);
            }
        }
        idx = end;
    }

    // refine each phase with a Rayleigh quotient and canonicalize to (-pi/2, pi/2]
    let uc = u.map(|x| C64::new(x, 0.0));
    for (k, col) in cols.iter().enumerate() {
        let image = &uc * col;
        let lambda = col.dotc(&image);
        let mut theta = lambda.arg() * 0.5;
        if theta <= -std::f64::consts::FRAC_PI_2 + 1e-15 {
            theta = std::f64::consts::FRAC_PI_2;
        }
        phases[k] = theta;
        let residual = (&image - col * lambda).norm();
        if residual > 1e-9 {
            return Err(WalkError::Eigen(format!(
                "eigenvector residual {residual:e} at phase {theta}"
            )));
        }
    }

    let vectors = DMatrix::from_columns(&cols);
    // orthonormality of the full eigenbasis
    let gram = vectors.adjoint() * &vectors;
    let dev = (&gram - DMatrix::<C64>::identity(n, n)).norm();
    if dev > 1e-9 {
        return Err(WalkError::Eigen(format!(
            "eigenbasis deviates from unitary by {dev:e}"
        )));
    }

    // deterministic order: ascending theta
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| phases[i].partial_cmp(&phases[j]).unwrap());
    let phases_sorted: Vec<f64> = order.iter().map(|&i| phases[i]).collect();
    let vectors_sorted = DMatrix::from_columns(
        &order
            .iter()
            .map(|&i| vectors.column(i).into_owned())
            .collect::<Vec<_>>(),
    );
    Ok((phases_sorted, vectors_sorted))
}

/// Build an orthonormal basis of rotation planes {x, Jx} for a complex
/// structure J (orthogonal, skew, J^2 = -I) on R^m.
fn pair_basis(
    j: &DMatrix<f64>,
    m: usize,
) -> Result<Vec<(DVector<f64>, DVector<f64>)>, WalkError> {
    if m % 2 != 0 {
        return Err(WalkError::Eigen(format!(
            "odd rotation cluster of size {m}"
        )));
    }
    let mut pairs: Vec<(DVector<f64>, DVector<f64>)> = Vec::with_capacity(m / 2);
    for seed in 0..m {
        if pairs.len() == m / 2 {
            break;
        }
        let mut z = DVector::<f64>::zeros(m);
        z[seed] = 1.0;
        for (x, jx) in &pairs {
            let cx = x.dot(&z);
            let cj = jx.dot(&z);
            z -= x * cx + jx * cj;
        }
        let norm = z.norm();
        if norm < 1e-6 {
            continue;
        }
        let x = z / norm;
        let mut jx = j * &x;
        let jn = jx.norm();
        if (jn - 1.0).abs() > 1e-6 {
            return Err(WalkError::Eigen(format!(
                "complex structure drifted from orthogonal (|Jx| = {jn})"
            )));
        }
        jx /= jn;
        pairs.push((x, jx));
    }
    if pairs.len() != m / 2 {
        return Err(WalkError::Eigen(
            "could not complete rotation-plane basis".into(),
        ));
    }
    Ok(pairs)
}

impl WalkOperator {
    pub fn dim(&self) -> usize {
        self.u.nrows()
    }

    /// Eigenphases theta_k, ascending, with eigenvalue e^{2i theta_k}.
    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn eigenvector(&self, k: usize) -> EdgeState {
        EdgeState {
            amps: self.vectors.column(k).into_owned(),
        }
    }

    pub fn apply(&self, state: &EdgeState) -> EdgeState {
        let uc = self.u.map(|x| C64::new(x, 0.0));
        EdgeState {
            amps: &uc * &state.amps,
        }
    }

    /// ⟨u_k|state⟩ for each eigenvector.
    pub fn components(&self, state: &EdgeState) -> Vec<C64> {
        (0..self.dim())
            .map(|k| self.vectors.column(k).dotc(&state.amps))
            .collect()
    }

    /// Project onto the span of eigenvectors with |theta| <= eps.
    pub fn spectral_projection(&self, state: &EdgeState, eps: f64) -> EdgeState {
        let comps = self.components(state);
        let mut out = EdgeState::zeros(self.dim());
        for (k, c) in comps.iter().enumerate() {
            if self.phases[k].abs() <= eps {
                out.add_scaled(*c, &self.eigenvector(k));
            }
        }
        out
    }
}

/// The electrical flow state |Phi>: amplitude f_e / sqrt(R w_e) per edge.
pub fn electrical_flow_state(
    aug: &AugmentedGraph,
    flow: &Flow,
    resistance: f64,
) -> Result<EdgeState, WalkError> {
    if resistance <= 0.0 {
        return Err(WalkError::ZeroResistance);
    }
    let amps: Vec<f64> = aug
        .graph
        .edges()
        .iter()
        .zip(&flow.f)
        .map(|(e, f)| f / (resistance * e.weight).sqrt())
        .collect();
    Ok(EdgeState::from_real(&amps))
}

/// The start state |psi_{s'}> = sum_u sqrt(sigma_u) |s'u>.
pub fn start_state(aug: &AugmentedGraph) -> EdgeState {
    let g = &aug.graph;
    let d: f64 = g
        .incident_edges(aug.start)
        .iter()
        .map(|&e| g.edges()[e].weight)
        .sum();
    let mut amps = vec![0.0; g.edge_count()];
    for &e in g.incident_edges(aug.start) {
        amps[e] = (g.edges()[e].weight / d).sqrt();
    }
    EdgeState::from_real(&amps)
}
