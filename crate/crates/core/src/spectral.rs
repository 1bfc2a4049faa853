//! Largest eigenvalues of `A(G)`, `Q(G) = D(G) + A(G)` and their quotient
//! matrices.
//!
//! Nonnegative matrices go through shifted power iteration on `M + cI` with
//! `c = 1 + max diagonal entry`, which makes the Perron root strictly dominant
//! in modulus even for bipartite graphs. Anything else, or a power iteration
//! that fails to settle, falls back to cyclic Jacobi.

use std::fmt;

use thiserror::Error;

use crate::graph::{Graph, VertexSet};

/// Tolerance on successive Rayleigh estimates in power iteration.
pub const EIGEN_TOL: f64 = 1e-12;
/// Power iteration gives up after this many steps and hands over to Jacobi.
pub const MAX_POWER_STEPS: usize = 100_000;
/// Residual bound per unit of dimension: `‖Mx − λx‖ ≤ RESIDUAL_TOL · dim`.
pub const RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("matrix has no rows")]
    EmptyMatrix,
    #[error("row {row} has {len} entries, expected {dim}")]
    NotSquare { row: usize, len: usize, dim: usize },
    #[error("entries ({0},{1}) and ({1},{0}) differ")]
    NotSymmetric(usize, usize),
    #[error("non-finite entry at ({0},{1})")]
    NonFinite(usize, usize),
    #[error("alpha must be 0 or 1, got {0}")]
    InvalidAlpha(u32),
    #[error("graph is disconnected; the Perron vector is not positive")]
    Disconnected,
    #[error("parts do not partition the vertex set: {0}")]
    NotAPartition(String),
}

/// Which member of the `αD(G) + A(G)` family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatrixKind {
    /// `α = 0`: the adjacency matrix.
    Adjacency,
    /// `α = 1`: the signless Laplacian.
    SignlessLaplacian,
}

impl MatrixKind {
    pub const BOTH: [MatrixKind; 2] = [MatrixKind::Adjacency, MatrixKind::SignlessLaplacian];

    pub fn from_alpha(alpha: u32) -> Result<Self, SpectralError> {
        match alpha {
            0 => Ok(MatrixKind::Adjacency),
            1 => Ok(MatrixKind::SignlessLaplacian),
            other => Err(SpectralError::InvalidAlpha(other)),
        }
    }

    pub fn alpha(self) -> u32 {
        match self {
            MatrixKind::Adjacency => 0,
            MatrixKind::SignlessLaplacian => 1,
        }
    }
}

/// Dense symmetric matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, SpectralError> {
        let dim = rows.len();
        if dim == 0 {
            return Err(SpectralError::EmptyMatrix);
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != dim {
                return Err(SpectralError::NotSquare { row: i, len: r.len(), dim });
            }
            for (j, &x) in r.iter().enumerate() {
                if !x.is_finite() {
                    return Err(SpectralError::NonFinite(i, j));
                }
                if x != rows[j][i] {
                    return Err(SpectralError::NotSymmetric(i, j));
                }
            }
        }
        Ok(SymMatrix { dim, data: rows.concat() })
    }

    /// Builds a symmetric matrix from its upper triangle.
    fn from_upper(dim: usize, entry: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in i..dim {
                let x = entry(i, j);
                data[i * dim + j] = x;
                data[j * dim + i] = x;
            }
        }
        SymMatrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.row(i).iter().sum()).collect()
    }

    fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|&x| x >= 0.0)
    }

    fn check_finite(&self) -> Result<(), SpectralError> {
        match self.data.iter().position(|x| !x.is_finite()) {
            Some(p) => Err(SpectralError::NonFinite(p / self.dim, p % self.dim)),
            None => Ok(()),
        }
    }

    pub fn mul_vec(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    /// `‖Mx − λx‖₂`.
    pub fn residual(&self, value: f64, x: &[f64]) -> f64 {
        let mut y = vec![0.0; self.dim];
        self.mul_vec(x, &mut y);
        y.iter().zip(x).map(|(a, b)| (a - value * b).powi(2)).sum::<f64>().sqrt()
    }
}

impl fmt::Display for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            let row: Vec<String> = self.row(i).iter().map(|x| format!("{x}")).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Largest eigenvalue with a unit eigenvector and its explicit residual.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralResult {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
}

pub fn adjacency_matrix(g: &Graph) -> SymMatrix {
    SymMatrix::from_upper(g.order(), |i, j| g.has_edge(i, j) as u8 as f64)
}

pub fn signless_laplacian(g: &Graph) -> SymMatrix {
    SymMatrix::from_upper(g.order(), |i, j| {
        if i == j {
            g.degree(i) as f64
        } else {
            g.has_edge(i, j) as u8 as f64
        }
    })
}

/// `αD(G) + A(G)` for `α ∈ {0, 1}`.
pub fn alpha_matrix(g: &Graph, alpha: u32) -> Result<SymMatrix, SpectralError> {
    Ok(graph_matrix(g, MatrixKind::from_alpha(alpha)?))
}

pub fn graph_matrix(g: &Graph, kind: MatrixKind) -> SymMatrix {
    match kind {
        MatrixKind::Adjacency => adjacency_matrix(g),
        MatrixKind::SignlessLaplacian => signless_laplacian(g),
    }
}

fn normalize(x: &mut [f64]) -> f64 {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
    norm
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn power_iteration(m: &SymMatrix) -> Option<SpectralResult> {
    let dim = m.dim;
    let shift = 1.0 + (0..dim).map(|i| m.get(i, i)).fold(f64::NEG_INFINITY, f64::max);
    let tol = RESIDUAL_TOL * dim as f64;
    let mut x = vec![1.0 / (dim as f64).sqrt(); dim];
    let mut y = vec![0.0; dim];
    let mut previous = f64::NAN;
    for _ in 0..MAX_POWER_STEPS {
        m.mul_vec(&x, &mut y);
        let estimate = dot(&x, &y);
        if (estimate - previous).abs() <= EIGEN_TOL * estimate.abs().max(1.0) {
            let residual = y.iter().zip(&x).map(|(a, b)| (a - estimate * b).powi(2)).sum::<f64>().sqrt();
            if residual <= tol {
                return Some(SpectralResult { value: estimate, vector: x, residual });
            }
        }
        previous = estimate;
        for (yi, xi) in y.iter_mut().zip(&x) {
            *yi += shift * xi;
        }
        if normalize(&mut y) == 0.0 {
            return None;
        }
        std::mem::swap(&mut x, &mut y);
    }
    None
}

/// Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues in ascending order with matching unit eigenvectors.
pub fn jacobi_eigen(m: &SymMatrix) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = m.dim;
    let mut a = m.data.clone();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].powi(2))
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = order
        .iter()
        .map(|&i| (0..n).map(|k| v[k * n + i]).collect())
        .collect();
    (values, vectors)
}

fn jacobi_largest(m: &SymMatrix) -> SpectralResult {
    let (values, mut vectors) = jacobi_eigen(m);
    let value = *values.last().expect("nonempty matrix");
    let vector = vectors.pop().expect("nonempty matrix");
    let residual = m.residual(value, &vector);
    SpectralResult { value, vector, residual }
}

/// The largest eigenvalue of `m`; for nonnegative `m` this is its spectral
/// radius. The vector is oriented so its entries sum to a nonnegative value.
pub fn largest_eigenvalue(m: &SymMatrix) -> Result<SpectralResult, SpectralError> {
    if m.dim == 0 {
        return Err(SpectralError::EmptyMatrix);
    }
    m.check_finite()?;
    let mut result = if m.is_nonnegative() {
        power_iteration(m).unwrap_or_else(|| jacobi_largest(m))
    } else {
        jacobi_largest(m)
    };
    if result.vector.iter().sum::<f64>() < 0.0 {
        result.vector.iter_mut().for_each(|x| *x = -*x);
    }
    Ok(result)
}

/// `λ_α(G)`: `ρ(G)` for the adjacency kind, `q(G)` for the signless
/// Laplacian. The null graph has spectral radius 0.
pub fn spectral_radius(g: &Graph, kind: MatrixKind) -> f64 {
    if g.order() == 0 {
        return 0.0;
    }
    largest_eigenvalue(&graph_matrix(g, kind))
        .expect("graph matrices are finite and nonempty")
        .value
}

pub fn rho(g: &Graph) -> f64 {
    spectral_radius(g, MatrixKind::Adjacency)
}

pub fn q(g: &Graph) -> f64 {
    spectral_radius(g, MatrixKind::SignlessLaplacian)
}

/// The unit positive eigenvector of `αD(G) + A(G)` for connected `g`.
pub fn perron_vector(g: &Graph, kind: MatrixKind) -> Result<SpectralResult, SpectralError> {
    if !g.is_connected() {
        return Err(SpectralError::Disconnected);
    }
    largest_eigenvalue(&graph_matrix(g, kind))
}

/// Average-row-sum quotient of `αD(G) + A(G)` over a vertex partition.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientMatrix {
    dim: usize,
    entries: Vec<f64>,
    part_sizes: Vec<usize>,
    equitable: bool,
}

impl QuotientMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.dim).map(<[f64]>::to_vec).collect()
    }

    pub fn part_sizes(&self) -> &[usize] {
        &self.part_sizes
    }

    /// Exact: every block had constant integer row sums.
    pub fn is_equitable(&self) -> bool {
        self.equitable
    }

    /// Largest eigenvalue of the (generally nonsymmetric) quotient.
    ///
    /// Block totals are symmetric, so `|V_i| b_ij = |V_j| b_ji` and the
    /// diagonal similarity `S = P^{1/2} B P^{-1/2}` (P = part sizes) is a
    /// symmetric matrix with the same spectrum.
    pub fn largest_eigenvalue(&self) -> Result<f64, SpectralError> {
        let sizes: Vec<f64> = self.part_sizes.iter().map(|&s| s as f64).collect();
        let sym = SymMatrix::from_upper(self.dim, |i, j| {
            self.entry(i, j) * (sizes[i] / sizes[j]).sqrt()
        });
        Ok(largest_eigenvalue(&sym)?.value)
    }
}

impl fmt::Display for QuotientMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let row: Vec<String> = row.iter().map(|x| format!("{x}")).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

pub fn quotient_matrix(
    g: &Graph,
    parts: &[VertexSet],
    kind: MatrixKind,
) -> Result<QuotientMatrix, SpectralError> {
    let n = g.order();
    let mut part_of = vec![usize::MAX; n];
    for (p, part) in parts.iter().enumerate() {
        if part.is_empty() {
            return Err(SpectralError::NotAPartition(format!("part {p} is empty")));
        }
        for v in part.iter() {
            if v >= n {
                return Err(SpectralError::NotAPartition(format!("vertex {v} out of range")));
            }
            if part_of[v] != usize::MAX {
                return Err(SpectralError::NotAPartition(format!("vertex {v} in two parts")));
            }
            part_of[v] = p;
        }
    }
    if let Some(v) = part_of.iter().position(|&p| p == usize::MAX) {
        return Err(SpectralError::NotAPartition(format!("vertex {v} uncovered")));
    }

    let dim = parts.len();
    let mut totals = vec![0u64; dim * dim];
    let mut equitable = true;
    for (i, part) in parts.iter().enumerate() {
        let mut first_row: Option<Vec<u64>> = None;
        for v in part.iter() {
            let mut sums = vec![0u64; dim];
            for w in g.neighbors(v) {
                sums[part_of[w]] += 1;
            }
            if kind == MatrixKind::SignlessLaplacian {
                sums[i] += g.degree(v) as u64;
            }
            for (j, s) in sums.iter().enumerate() {
                totals[i * dim + j] += s;
            }
            match &first_row {
                None => first_row = Some(sums),
                Some(r) => equitable &= *r == sums,
            }
        }
    }
    let entries = totals
        .iter()
        .enumerate()
        .map(|(idx, &t)| t as f64 / parts[idx / dim].len() as f64)
        .collect();
    Ok(QuotientMatrix {
        dim,
        entries,
        part_sizes: parts.iter().map(VertexSet::len).collect(),
        equitable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, copies, disjoint_union, join};

    fn k(n: usize) -> Graph {
        complete(n).unwrap()
    }

    #[test]
    fn matrices_of_small_graphs() {
        let a = adjacency_matrix(&k(2));
        assert_eq!(a, SymMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap());
        let two = copies(2, &k(1)).unwrap();
        assert!(adjacency_matrix(&two).row_sums().iter().all(|&s| s == 0.0));
        let q2 = signless_laplacian(&k(2));
        assert_eq!(q2, SymMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap());
        let q3 = signless_laplacian(&k(3));
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(q3.get(i, j), if i == j { 2.0 } else { 1.0 });
            }
        }
        let g = join(&k(2), &disjoint_union(&k(1), &k(3)));
        assert_eq!(signless_laplacian(&g).trace(), 2.0 * g.size() as f64);
    }

    #[test]
    fn alpha_selects_matrix() {
        assert_eq!(alpha_matrix(&k(3), 0).unwrap(), adjacency_matrix(&k(3)));
        assert_eq!(alpha_matrix(&k(3), 1).unwrap(), signless_laplacian(&k(3)));
        let two = copies(2, &k(1)).unwrap();
        assert!(alpha_matrix(&two, 1).unwrap().row_sums().iter().all(|&s| s == 0.0));
        assert_eq!(alpha_matrix(&k(3), 2), Err(SpectralError::InvalidAlpha(2)));
    }

    #[test]
    fn complete_graph_radii() {
        for n in 1..=12 {
            assert!((rho(&k(n)) - (n as f64 - 1.0)).abs() < 1e-9);
            assert!((q(&k(n)) - (2.0 * n as f64 - 2.0)).abs() < 1e-9);
        }
        let zero = SymMatrix::from_rows(&[vec![0.0; 3], vec![0.0; 3], vec![0.0; 3]]).unwrap();
        assert_eq!(largest_eigenvalue(&zero).unwrap().value, 0.0);
    }

    #[test]
    fn bipartite_graphs_converge() {
        // path P_3 = K_1 ∨ 2K_1
        let p3 = join(&k(1), &copies(2, &k(1)).unwrap());
        let r = perron_vector(&p3, MatrixKind::Adjacency).unwrap();
        assert!((r.value - 2f64.sqrt()).abs() < 1e-10);
        assert!((r.vector[0] - 2f64.sqrt() * r.vector[1]).abs() < 1e-9);
        assert!((r.vector[1] - r.vector[2]).abs() < 1e-9);
        // even cycle C_6: rho = 2 exactly
        let c6 = Graph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        assert!((rho(&c6) - 2.0).abs() < 1e-10);
        assert!((q(&c6) - 4.0).abs() < 1e-10);
    }

    #[test]
    fn perron_vector_of_complete_graph_is_uniform() {
        let r = perron_vector(&k(5), MatrixKind::SignlessLaplacian).unwrap();
        for x in &r.vector {
            assert!((x - 1.0 / 5f64.sqrt()).abs() < 1e-10);
        }
        let two = copies(2, &k(2)).unwrap();
        assert_eq!(perron_vector(&two, MatrixKind::Adjacency), Err(SpectralError::Disconnected));
    }

    #[test]
    fn jacobi_handles_indefinite_matrices() {
        let m = SymMatrix::from_rows(&[vec![-3.0, 1.0], vec![1.0, -1.0]]).unwrap();
        let r = largest_eigenvalue(&m).unwrap();
        // eigenvalues -2 ± sqrt(2)
        assert!((r.value - (-2.0 + 2f64.sqrt())).abs() < 1e-12);
        assert!(r.residual < 1e-12);
    }

    #[test]
    fn matrix_validation() {
        assert_eq!(SymMatrix::from_rows(&[]), Err(SpectralError::EmptyMatrix));
        assert_eq!(
            SymMatrix::from_rows(&[vec![0.0, 1.0], vec![2.0, 0.0]]),
            Err(SpectralError::NotSymmetric(0, 1))
        );
        assert_eq!(
            SymMatrix::from_rows(&[vec![f64::NAN]]),
            Err(SpectralError::NonFinite(0, 0))
        );
        assert!(matches!(
            SymMatrix::from_rows(&[vec![0.0], vec![0.0, 1.0]]),
            Err(SpectralError::NotSquare { row: 0, .. })
        ));
    }

    #[test]
    fn singleton_partition_reproduces_matrix() {
        let g = join(&k(2), &disjoint_union(&k(1), &k(3)));
        let parts: Vec<VertexSet> = (0..g.order()).map(|v| VertexSet::new([v])).collect();
        for kind in MatrixKind::BOTH {
            let quot = quotient_matrix(&g, &parts, kind).unwrap();
            assert!(quot.is_equitable());
            let full = graph_matrix(&g, kind);
            for i in 0..g.order() {
                for j in 0..g.order() {
                    assert_eq!(quot.entry(i, j), full.get(i, j));
                }
            }
        }
    }

    #[test]
    fn partition_errors() {
        let g = k(3);
        let bad = [VertexSet::new([0, 1]), VertexSet::new([1, 2])];
        assert!(matches!(
            quotient_matrix(&g, &bad, MatrixKind::Adjacency),
            Err(SpectralError::NotAPartition(_))
        ));
        let missing = [VertexSet::new([0, 1])];
        assert!(quotient_matrix(&g, &missing, MatrixKind::Adjacency).is_err());
        let empty = [VertexSet::new([0, 1, 2]), VertexSet::empty()];
        assert!(quotient_matrix(&g, &empty, MatrixKind::Adjacency).is_err());
    }

    #[test]
    fn non_equitable_partition_detected() {
        // path 0-1-2 with parts {0,1} | {2}: rows into part 1 are 0 and 1
        let p = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let quot = quotient_matrix(
            &p,
            &[VertexSet::new([0, 1]), VertexSet::new([2])],
            MatrixKind::Adjacency,
        )
        .unwrap();
        assert!(!quot.is_equitable());
        assert_eq!(quot.rows(), vec![vec![1.0, 0.5], vec![1.0, 0.0]]);
    }
}
