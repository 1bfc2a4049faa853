//! The extremal graphs `H(n,δ,k) = K_δ ∨ ((δ−k+1)K_1 ∪ K_{n−2δ+k−1})`, their
//! relatives `H_s` and `H'_s`, and the threshold cubics whose largest roots
//! are `ρ(H)` and `q(H)`.

use std::fmt;

use thiserror::Error;

use crate::graph::{complete, copies, disjoint_union, join, Graph, VertexSet};
use crate::spectral::{self, quotient_matrix, MatrixKind, SpectralError};

/// Default bound on pairwise disagreement between the three threshold routes.
pub const CONSISTENCY_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("k = {k} must be below delta = {delta}")]
    KNotBelowDelta { k: usize, delta: usize },
    #[error("order n = {n} is too small; need n >= {min}")]
    OrderTooSmall { n: usize, min: usize },
    #[error("separator size s = {s} must be at least {min}")]
    SeparatorTooSmall { s: usize, min: usize },
    #[error("separator size s = {s} must be below delta = {delta}")]
    SeparatorNotBelowDelta { s: usize, delta: usize },
    #[error("k = {k} and n = {n} must have the same parity")]
    Parity { n: usize, k: usize },
}

/// Integer parameters `(n, δ, k)` and an optional separator size `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExtremalParams {
    pub n: usize,
    pub delta: usize,
    pub k: usize,
    pub s: Option<usize>,
}

impl ExtremalParams {
    pub fn new(n: usize, delta: usize, k: usize) -> Self {
        ExtremalParams { n, delta, k, s: None }
    }

    pub fn with_s(self, s: usize) -> Self {
        ExtremalParams { s: Some(s), ..self }
    }

    /// `δ > k` and `n > 2δ − k + 1`.
    pub fn validate(&self) -> Result<(), ParamError> {
        if self.k >= self.delta {
            return Err(ParamError::KNotBelowDelta { k: self.k, delta: self.delta });
        }
        let min = 2 * self.delta - self.k + 2;
        if self.n < min {
            return Err(ParamError::OrderTooSmall { n: self.n, min });
        }
        Ok(())
    }

    pub fn parity_ok(&self) -> bool {
        self.n % 2 == self.k % 2
    }

    pub fn validate_with_parity(&self) -> Result<(), ParamError> {
        self.validate()?;
        if !self.parity_ok() {
            return Err(ParamError::Parity { n: self.n, k: self.k });
        }
        Ok(())
    }

    /// Sizes of (out copy, independent part, big clique) in `H(n,δ,k)`.
    pub fn part_sizes(&self) -> [usize; 3] {
        let [a, b, c] = hs_sizes(self.n, self.delta, self.k);
        [a, b, c]
    }
}

impl fmt::Display for ExtremalParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} delta={} k={}", self.n, self.delta, self.k)?;
        if let Some(s) = self.s {
            write!(f, " s={s}")?;
        }
        Ok(())
    }
}

fn hs_sizes(n: usize, s: usize, k: usize) -> [usize; 3] {
    [s, s + 1 - k, n + k + 1 - 2 * s - 2]
}

/// `K_s ∨ (K_{n_1} ∪ … ∪ K_{n_t})`. Part sizes of zero are rejected by the
/// callers; here an empty inner list gives `K_s`.
pub fn join_of_cliques(s: usize, inner: &[usize]) -> Graph {
    let mut rest: Option<Graph> = None;
    for &m in inner {
        let clique = complete(m).expect("inner clique sizes are positive");
        rest = Some(match rest {
            None => clique,
            Some(r) => disjoint_union(&r, &clique),
        });
    }
    match (s, rest) {
        (0, Some(r)) => r,
        (0, None) => Graph::edgeless(0),
        (s, None) => complete(s).expect("s > 0"),
        (s, Some(r)) => join(&complete(s).expect("s > 0"), &r),
    }
}

/// `H(n,δ,k)`. Vertices `0..δ` form the out copy, the next `δ−k+1` the
/// independent part, the rest the big clique.
pub fn build_h(p: &ExtremalParams) -> Result<Graph, ParamError> {
    p.validate()?;
    Ok(build_hs_unchecked(p.n, p.delta, p.k))
}

fn build_hs_unchecked(n: usize, s: usize, k: usize) -> Graph {
    let [out, indep, big] = hs_sizes(n, s, k);
    let inner = disjoint_union(&copies(indep, &complete(1).unwrap()).unwrap(), &complete(big).unwrap());
    join(&complete(out).unwrap(), &inner)
}

/// `H_s = K_s ∨ ((s−k+1)K_1 ∪ K_{n−2s+k−1})`.
pub fn build_hs(n: usize, s: usize, k: usize) -> Result<Graph, ParamError> {
    let min_s = k.max(1);
    if s < min_s {
        return Err(ParamError::SeparatorTooSmall { s, min: min_s });
    }
    let min_n = 2 * s + 2 - k;
    if n < min_n {
        return Err(ParamError::OrderTooSmall { n, min: min_n });
    }
    Ok(build_hs_unchecked(n, s, k))
}

/// The three parts (out copy, independent part, big clique) of `H_s`.
pub fn hs_partition(n: usize, s: usize, k: usize) -> [VertexSet; 3] {
    let [a, b, _] = hs_sizes(n, s, k);
    [
        VertexSet::range(0, a),
        VertexSet::range(a, a + b),
        VertexSet::range(a + b, n),
    ]
}

/// Which lower bound on `n` to impose on `H'_s` grids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HPrimeBound {
    /// `n ≥ s + (s−k+2)(δ−s+1)`, as stated with the `H'_s` comparison.
    #[default]
    Comparison,
    /// `n ≥ δ + (s−k+2)(δ−s+1)`, the variant displayed in the case analysis.
    CaseAnalysis,
}

impl HPrimeBound {
    pub fn min_order(self, delta: usize, s: usize, k: usize) -> usize {
        let lead = match self {
            HPrimeBound::Comparison => s,
            HPrimeBound::CaseAnalysis => delta,
        };
        lead + (s + 2 - k) * (delta + 1 - s)
    }
}

/// `H'_s = K_s ∨ ((s−k+1)K_{δ−s+1} ∪ K_{n−s−(s−k+1)(δ−s+1)})`.
pub fn build_hprime(n: usize, delta: usize, s: usize, k: usize) -> Result<Graph, ParamError> {
    let min_s = k.max(1);
    if s < min_s {
        return Err(ParamError::SeparatorTooSmall { s, min: min_s });
    }
    if s >= delta {
        return Err(ParamError::SeparatorNotBelowDelta { s, delta });
    }
    let min_n = HPrimeBound::Comparison.min_order(delta, s, k);
    if n < min_n {
        return Err(ParamError::OrderTooSmall { n, min: min_n });
    }
    let small = delta + 1 - s;
    let count = s + 1 - k;
    let mut inner = vec![small; count];
    inner.push(n - s - count * small);
    Ok(join_of_cliques(s, &inner))
}

/// Monic cubic `x³ + a x² + b x + c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicPoly {
    coeffs: [f64; 4],
}

impl CubicPoly {
    pub fn monic(a: f64, b: f64, c: f64) -> Self {
        CubicPoly { coeffs: [1.0, a, b, c] }
    }

    /// Coefficients of `x³, x², x, 1`.
    pub fn coefficients(&self) -> [f64; 4] {
        self.coeffs
    }

    pub fn eval(&self, x: f64) -> f64 {
        let [d, a, b, c] = self.coeffs;
        ((d * x + a) * x + b) * x + c
    }

    fn derivative(&self, x: f64) -> f64 {
        let [d, a, b, _] = self.coeffs;
        (3.0 * d * x + 2.0 * a) * x + b
    }

    /// Largest real root.
    ///
    /// The Cauchy bound `1 + max|coefficient|` brackets every root from
    /// above. The critical points split the line into monotone pieces; the
    /// piece holding the largest root is bisected and the result is polished
    /// with Newton steps that are kept only while they stay in the bracket.
    pub fn largest_real_root(&self) -> f64 {
        let [_, a, b, c] = self.coeffs;
        let bound = 1.0 + a.abs().max(b.abs()).max(c.abs());
        // roots of 3x² + 2ax + b
        let disc = a * a - 3.0 * b;
        let (lo, hi) = if disc > 0.0 {
            let r = disc.sqrt();
            // numerically stable pair
            let q = -(a + a.signum() * r);
            let (c1, c2) = if q == 0.0 {
                (-r / 3.0, r / 3.0)
            } else {
                let x1 = q / 3.0;
                let x2 = b / q;
                (x1.min(x2), x1.max(x2))
            };
            if self.eval(c2) <= 0.0 {
                (c2, bound)
            } else {
                (-bound, c1)
            }
        } else {
            (-bound, bound)
        };
        let (mut lo, mut hi) = (lo, hi);
        while hi - lo > 1e-15 * hi.abs().max(1.0) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.eval(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..4 {
            let d = self.derivative(x);
            if d == 0.0 {
                break;
            }
            let next = x - self.eval(x) / d;
            if !(lo..=hi).contains(&next) || self.eval(next).abs() >= self.eval(x).abs() {
                break;
            }
            x = next;
        }
        x
    }
}

impl fmt::Display for CubicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [_, a, b, c] = self.coeffs;
        write!(f, "x^3 {:+} x^2 {:+} x {:+}", a, b, c)
    }
}

/// Integer coefficients `[1, a, b, c]` of the adjacency threshold cubic.
pub fn f_coefficients(p: &ExtremalParams) -> [i64; 4] {
    let (n, d, k) = (p.n as i64, p.delta as i64, p.k as i64);
    [
        1,
        -(n + k - d - 3),
        -(n + d * d - k * d + k - 2),
        -2 * d.pow(3) + (n + 3 * k - 4) * d * d + (n + 3 * k - n * k - k * k - 2) * d,
    ]
}

/// Integer coefficients `[1, a, b, c]` of the signless Laplacian threshold cubic.
pub fn g_coefficients(p: &ExtremalParams) -> [i64; 4] {
    let (n, d, k) = (p.n as i64, p.delta as i64, p.k as i64);
    [
        1,
        -(3 * n - d + 2 * k - 6),
        2 * n * n + (d + 2 * k - 8) * n - 4 * d * d + 4 * (k - 1) * d - 4 * k + 8,
        -2 * d.pow(3) + (4 * n + 4 * k - 10) * d * d
            - (2 * n * n + (4 * k - 10) * n + 2 * k * k - 10 * k + 12) * d,
    ]
}

fn to_cubic(c: [i64; 4]) -> CubicPoly {
    CubicPoly::monic(c[1] as f64, c[2] as f64, c[3] as f64)
}

/// The cubic whose largest root is `ρ(H(n,δ,k))`.
pub fn f_poly(p: &ExtremalParams) -> CubicPoly {
    to_cubic(f_coefficients(p))
}

/// The cubic whose largest root is `q(H(n,δ,k))`.
pub fn g_poly(p: &ExtremalParams) -> CubicPoly {
    to_cubic(g_coefficients(p))
}

pub fn largest_real_root(c: &CubicPoly) -> f64 {
    c.largest_real_root()
}

/// Threshold values computed three ways each.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdReport {
    pub params: ExtremalParams,
    pub rho_root: f64,
    pub rho_quotient: f64,
    pub rho_dense: f64,
    pub q_root: f64,
    pub q_quotient: f64,
    pub q_dense: f64,
    pub max_discrepancy: f64,
}

impl ThresholdReport {
    pub fn rho(&self) -> f64 {
        self.rho_root
    }

    pub fn q(&self) -> f64 {
        self.q_root
    }

    pub fn value(&self, kind: MatrixKind) -> f64 {
        match kind {
            MatrixKind::Adjacency => self.rho_root,
            MatrixKind::SignlessLaplacian => self.q_root,
        }
    }

    /// One `key=value` record on a single line.
    pub fn to_record(&self) -> String {
        let p = &self.params;
        format!(
            "n={} delta={} k={} rho_root={:.12} rho_quotient={:.12} rho_dense={:.12} \
             q_root={:.12} q_quotient={:.12} q_dense={:.12} max_discrepancy={:.3e}",
            p.n,
            p.delta,
            p.k,
            self.rho_root,
            self.rho_quotient,
            self.rho_dense,
            self.q_root,
            self.q_quotient,
            self.q_dense,
            self.max_discrepancy
        )
    }
}

impl fmt::Display for ThresholdReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_record())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThresholdError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("threshold routes disagree by {:.3e} (tolerance {tolerance:e}): {report}", report.max_discrepancy)]
    Inconsistent { report: Box<ThresholdReport>, tolerance: f64 },
}

fn spread(values: [f64; 3]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    max - min
}

pub fn thresholds(p: &ExtremalParams) -> Result<ThresholdReport, ThresholdError> {
    thresholds_with_tolerance(p, CONSISTENCY_TOL)
}

/// Computes `ρ(H)` and `q(H)` from the cubic, from the 3×3 equitable quotient
/// and from the full matrix, failing when any two routes disagree by more
/// than `tolerance`.
pub fn thresholds_with_tolerance(
    p: &ExtremalParams,
    tolerance: f64,
) -> Result<ThresholdReport, ThresholdError> {
    let h = build_h(p)?;
    let parts = hs_partition(p.n, p.delta, p.k);
    let quotient = |kind| -> Result<f64, SpectralError> {
        quotient_matrix(&h, &parts, kind)?.largest_eigenvalue()
    };
    let mut report = ThresholdReport {
        params: *p,
        rho_root: f_poly(p).largest_real_root(),
        rho_quotient: quotient(MatrixKind::Adjacency)?,
        rho_dense: spectral::rho(&h),
        q_root: g_poly(p).largest_real_root(),
        q_quotient: quotient(MatrixKind::SignlessLaplacian)?,
        q_dense: spectral::q(&h),
        max_discrepancy: 0.0,
    };
    report.max_discrepancy = spread([report.rho_root, report.rho_quotient, report.rho_dense])
        .max(spread([report.q_root, report.q_quotient, report.q_dense]));
    if report.max_discrepancy > tolerance {
        return Err(ThresholdError::Inconsistent { report: Box::new(report), tolerance });
    }
    Ok(report)
}

/// Structural test for `g ≅ H(n,δ,k)`: exactly δ universal vertices, and
/// deleting them leaves cliques whose sizes are `δ−k+1` ones and one
/// `n−2δ+k−1`. When that last size is 1 the two kinds of singleton coincide.
pub fn recognize_extremal(g: &Graph, p: &ExtremalParams) -> bool {
    if p.validate().is_err() || g.order() != p.n {
        return false;
    }
    let n = p.n;
    let universal: Vec<usize> = (0..n).filter(|&v| g.degree(v) == n - 1).collect();
    if universal.len() != p.delta {
        return false;
    }
    let rest = g.remove_vertices(&VertexSet::new(universal)).expect("in range");
    let comps = rest.components();
    if !comps.iter().all(|c| rest.is_clique(c)) {
        return false;
    }
    let mut sizes: Vec<usize> = comps.iter().map(Vec::len).collect();
    sizes.sort_unstable();
    let [_, indep, big] = p.part_sizes();
    let mut expected = vec![1; indep];
    expected.push(big);
    expected.sort_unstable();
    sizes == expected
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{q, rho};

    fn p(n: usize, d: usize, k: usize) -> ExtremalParams {
        ExtremalParams::new(n, d, k)
    }

    #[test]
    fn h_shapes() {
        let h = build_h(&p(8, 1, 0)).unwrap();
        assert_eq!(h.order(), 8);
        assert_eq!(h.min_degree(), 1);
        let h = build_h(&p(7, 2, 1)).unwrap();
        assert_eq!(h.size(), 14);
        let h = build_h(&p(12, 3, 1)).unwrap();
        assert_eq!(h.min_degree(), 3);
        assert_eq!((0..12).filter(|&v| h.degree(v) == 11).count(), 3);
    }

    #[test]
    fn h_parameter_errors() {
        assert_eq!(build_h(&p(8, 1, 1)), Err(ParamError::KNotBelowDelta { k: 1, delta: 1 }));
        assert_eq!(build_h(&p(5, 3, 0)), Err(ParamError::OrderTooSmall { n: 5, min: 8 }));
        assert!(build_h(&p(8, 3, 0)).is_ok());
    }

    #[test]
    fn hs_matches_h_and_partition_sizes() {
        assert_eq!(build_hs(8, 1, 0).unwrap(), build_h(&p(8, 1, 0)).unwrap());
        assert_eq!(build_hs(13, 3, 1).unwrap(), build_h(&p(13, 3, 1)).unwrap());
        let parts = hs_partition(10, 3, 0);
        assert_eq!(parts.each_ref().map(VertexSet::len), [3, 4, 3]);
        assert_eq!(build_hs(10, 3, 0).unwrap().order(), 10);
        assert!(matches!(build_hs(10, 0, 0), Err(ParamError::SeparatorTooSmall { .. })));
        assert!(matches!(build_hs(10, 1, 2), Err(ParamError::SeparatorTooSmall { .. })));
        assert!(matches!(build_hs(7, 4, 0), Err(ParamError::OrderTooSmall { .. })));
    }

    #[test]
    fn hprime_shape() {
        let g = build_hprime(14, 3, 2, 1).unwrap();
        let expected = join_of_cliques(2, &[2, 2, 8]);
        assert_eq!(g, expected);
        assert_eq!(g.min_degree(), 3);
        assert_eq!(
            build_hprime(20, 3, 3, 1),
            Err(ParamError::SeparatorNotBelowDelta { s: 3, delta: 3 })
        );
        // bound for (δ,s,k) = (3,2,1): 2 + 3·2 = 8
        assert!(build_hprime(8, 3, 2, 1).is_ok());
        assert_eq!(build_hprime(7, 3, 2, 1), Err(ParamError::OrderTooSmall { n: 7, min: 8 }));
        assert_eq!(HPrimeBound::CaseAnalysis.min_order(3, 2, 1), 9);
    }

    #[test]
    fn f_and_g_coefficients() {
        assert_eq!(f_coefficients(&p(8, 1, 0)), [1, -4, -7, 8]);
        assert_eq!(g_coefficients(&p(8, 1, 0))[1], -17);
        // x² coefficients track the displayed closed forms
        for (n, d, k) in [(11, 2, 1), (20, 3, 0), (15, 3, 1)] {
            let pp = p(n, d, k);
            assert_eq!(f_coefficients(&pp)[1], -((n + k) as i64 - d as i64 - 3));
            assert_eq!(g_coefficients(&pp)[1], -(3 * n as i64 - d as i64 + 2 * k as i64 - 6));
        }
    }

    #[test]
    fn cubic_roots() {
        let c = CubicPoly::monic(-6.0, 11.0, -6.0);
        assert!((c.largest_real_root() - 3.0).abs() < 1e-10);
        assert!(CubicPoly::monic(0.0, 0.0, 0.0).largest_real_root().abs() < 1e-10);
        // double root on top: (x−2)²(x+1) = x³ − 3x² + 4
        assert!((CubicPoly::monic(-3.0, 0.0, 4.0).largest_real_root() - 2.0).abs() < 1e-7);
        // one real root: x³ + x + 1 has root ≈ −0.6823278038
        let r = CubicPoly::monic(0.0, 1.0, 1.0).largest_real_root();
        assert!((r + 0.682_327_803_828_019_3).abs() < 1e-10);
        // largest root sits left of a positive local minimum: (x+3)(x²+1)
        let r = CubicPoly::monic(3.0, 1.0, 3.0).largest_real_root();
        assert!((r + 3.0).abs() < 1e-10);
    }

    #[test]
    fn f_root_matches_dense_radius() {
        let pp = p(8, 1, 0);
        let h = build_h(&pp).unwrap();
        let f = f_poly(&pp);
        assert!((f.largest_real_root() - rho(&h)).abs() < 1e-8);
        assert!(f.eval(rho(&h)).abs() < 1e-6);
        assert!(g_poly(&pp).eval(q(&h)).abs() < 1e-6);
    }

    #[test]
    fn threshold_cross_check() {
        let r = thresholds(&p(8, 1, 0)).unwrap();
        assert!(r.max_discrepancy <= 1e-7);
        let r = thresholds(&p(12, 2, 0)).unwrap();
        assert!((r.q_root - r.q_dense).abs() <= 1e-7);
        assert!((r.q_quotient - r.q_dense).abs() <= 1e-7);
        assert!(r.to_record().starts_with("n=12 delta=2 k=0 rho_root="));
    }

    #[test]
    fn extremal_quotient_matrices() {
        for (n, d, k) in [(8, 1, 0), (13, 3, 1), (20, 2, 0)] {
            let pp = p(n, d, k);
            let h = build_h(&pp).unwrap();
            let parts = hs_partition(n, d, k);
            let (n, d, k) = (n as f64, d as f64, k as f64);
            let a = quotient_matrix(&h, &parts, MatrixKind::Adjacency).unwrap();
            assert!(a.is_equitable());
            assert_eq!(
                a.rows(),
                vec![
                    vec![d - 1.0, d - k + 1.0, n - 2.0 * d + k - 1.0],
                    vec![d, 0.0, 0.0],
                    vec![d, 0.0, n - 2.0 * d + k - 2.0],
                ]
            );
            let qm = quotient_matrix(&h, &parts, MatrixKind::SignlessLaplacian).unwrap();
            assert!(qm.is_equitable());
            assert_eq!(
                qm.rows(),
                vec![
                    vec![n + d - 2.0, d - k + 1.0, n - 2.0 * d + k - 1.0],
                    vec![d, d, 0.0],
                    vec![d, 0.0, 2.0 * n - 3.0 * d + 2.0 * k - 4.0],
                ]
            );
        }
    }

    #[test]
    fn recognizer_basics() {
        let pp = p(8, 1, 0);
        let h = build_h(&pp).unwrap();
        assert!(recognize_extremal(&h, &pp));
        assert!(!recognize_extremal(&complete(8).unwrap(), &pp));
        let perm = [3, 7, 0, 5, 1, 6, 2, 4];
        assert!(recognize_extremal(&h.permuted(&perm).unwrap(), &pp));
        assert!(!recognize_extremal(&h, &p(8, 1, 1)));
        assert!(!recognize_extremal(&h, &p(9, 1, 0)));
    }

    #[test]
    fn recognizer_degenerate_big_clique_of_one() {
        // n − 2δ + k − 1 = 1: (n,δ,k) = (6,2,0) gives K_2 ∨ 4K_1
        let pp = p(6, 2, 0);
        let h = build_h(&pp).unwrap();
        assert_eq!(h, join(&complete(2).unwrap(), &copies(4, &complete(1).unwrap()).unwrap()));
        assert!(recognize_extremal(&h, &pp));
        assert!(!recognize_extremal(&h.with_edge(2, 3).unwrap(), &pp));
    }
}
