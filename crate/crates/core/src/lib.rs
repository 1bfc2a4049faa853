//! Spectral sufficient conditions for k-factor-criticality of graphs with a
//! fixed minimum degree.
//!
//! A graph is *k-factor-critical* when deleting any `k` vertices leaves a
//! graph with a perfect matching. Among graphs of order `n` and minimum degree
//! `δ > k`, any graph whose spectral radius `ρ` (or signless Laplacian spectral
//! radius `q`) reaches that of
//! `H(n,δ,k) = K_δ ∨ ((δ−k+1)K_1 ∪ K_{n−2δ+k−1})` is k-factor-critical unless it
//! is `H(n,δ,k)` itself, provided `n` is large enough.
//!
//! The crate builds the extremal graphs, computes the two thresholds by three
//! independent routes, decides k-factor-criticality two ways, and ships the
//! harnesses that search for counterexamples at desk scale.

pub mod criticality;
pub mod extremal;
pub mod graph;
pub mod graph6;
pub mod spectral;
pub mod verifier;

pub use criticality::{
    is_kfc_matching, is_kfc_tutte, max_matching, CriticalityCertificate, CriticalityError,
    MatchingResult, TutteOptions, Witness,
};
pub use extremal::{
    build_h, build_hprime, build_hs, f_poly, g_poly, largest_real_root, recognize_extremal,
    thresholds, CubicPoly, ExtremalParams, ParamError, ThresholdError, ThresholdReport,
};
pub use graph::{complete, copies, disjoint_union, join, Graph, GraphError, VertexSet};
pub use graph6::{emit_graph6, emit_graph6_string, parse_graph6, Graph6Error};
pub use spectral::{
    adjacency_matrix, alpha_matrix, largest_eigenvalue, perron_vector, q, quotient_matrix, rho,
    signless_laplacian, spectral_radius, MatrixKind, QuotientMatrix, SpectralError,
    SpectralResult, SymMatrix,
};
pub use verifier::{
    generate_corpus, verify_lemma_grid, verify_sharpness, verify_theorem, BoundMode, CorpusFilter,
    CorpusSource, CorpusSpec, Lemma, LemmaGridConfig, LemmaReport, VerificationReport,
    VerifyOptions, Which,
};
