//! Desk-scale empirical checks of the spectral criticality theorems and the
//! lemmas behind them: graph corpora, counterexample search, sharpness, and
//! lemma grids.

use std::fmt;
use std::fs;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::criticality::{is_kfc_matching, is_kfc_tutte, CriticalityError, TutteOptions, Witness};
use crate::extremal::{
    build_h, build_hprime, build_hs, join_of_cliques, recognize_extremal, thresholds_with_tolerance,
    ExtremalParams, HPrimeBound, ParamError, ThresholdError, CONSISTENCY_TOL,
};
use crate::graph::{Graph, VertexSet};
use crate::graph6::{emit_graph6_string, parse_graph6, Graph6Error};
use crate::spectral::{perron_vector, spectral_radius, MatrixKind};

/// Slack on the "`≥` threshold" comparison so graphs that attain the
/// threshold exactly are not lost to rounding.
pub const THRESHOLD_SLACK: f64 = 1e-9;
/// Largest order accepted by exhaustive labelled enumeration.
pub const MAX_EXHAUSTIVE_ORDER: usize = 7;
/// Rejection-sampling attempts allowed per accepted random graph.
pub const MAX_ATTEMPTS_PER_GRAPH: u64 = 1_000_000;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("exhaustive enumeration is limited to n <= {MAX_EXHAUSTIVE_ORDER}, got {0}")]
    ExhaustiveTooLarge(usize),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("graph6 line {line}: {source}")]
    Graph6 { line: usize, source: Graph6Error },
    #[error("edge probabilities must satisfy 0 <= p_min <= p_max <= 1")]
    BadProbability,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CorpusSource {
    /// Every labelled graph on `n` vertices.
    Exhaustive { n: usize },
    /// One graph6 record per non-empty line of a file.
    Graph6File(PathBuf),
    /// One graph6 record per non-empty line.
    Graph6Text(String),
    /// `G(n, p)` with `p` drawn uniformly from `[p_min, p_max]` per sample.
    Random { n: usize, p_min: f64, p_max: f64, count: usize, seed: u64 },
    /// `base` with between 1 and `max_flips` random vertex pairs toggled.
    Perturbed { base: Graph, max_flips: usize, count: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CorpusFilter {
    /// Keep only graphs whose minimum degree is exactly this.
    pub min_degree: Option<usize>,
    /// Keep only connected (`true`) or disconnected (`false`) graphs.
    pub connected: Option<bool>,
}

impl CorpusFilter {
    pub fn accepts(&self, g: &Graph) -> bool {
        self.min_degree.is_none_or(|d| g.min_degree() == d)
            && self.connected.is_none_or(|c| g.is_connected() == c)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSpec {
    pub source: CorpusSource,
    pub filter: CorpusFilter,
}

pub type Corpus = Box<dyn Iterator<Item = Graph> + Send>;

fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for j in 1..n {
        for i in 0..j {
            if mask >> bit & 1 == 1 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    Graph::from_edges(n, edges).expect("mask edges are simple")
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for j in 1..n {
        for i in 0..j {
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, edges).expect("sampled edges are simple")
}

fn parse_lines(text: &str) -> Result<Vec<Graph>, CorpusError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            parse_graph6(l.trim().as_bytes()).map_err(|source| CorpusError::Graph6 { line: i + 1, source })
        })
        .collect()
}

/// A deterministic stream of graphs satisfying `spec.filter`.
///
/// Random sources yield `count` accepted graphs unless a single graph needs
/// more than [`MAX_ATTEMPTS_PER_GRAPH`] draws, in which case the stream ends
/// early.
pub fn generate_corpus(spec: &CorpusSpec) -> Result<Corpus, CorpusError> {
    let filter = spec.filter;
    let stream: Corpus = match &spec.source {
        &CorpusSource::Exhaustive { n } => {
            if n > MAX_EXHAUSTIVE_ORDER {
                return Err(CorpusError::ExhaustiveTooLarge(n));
            }
            let pairs = n * n.saturating_sub(1) / 2;
            Box::new((0..1u64 << pairs).map(move |m| graph_from_mask(n, m)).filter(move |g| filter.accepts(g)))
        }
        CorpusSource::Graph6File(path) => {
            let text = fs::read_to_string(path)
                .map_err(|source| CorpusError::Io { path: path.clone(), source })?;
            Box::new(parse_lines(&text)?.into_iter().filter(move |g| filter.accepts(g)))
        }
        CorpusSource::Graph6Text(text) => {
            Box::new(parse_lines(text)?.into_iter().filter(move |g| filter.accepts(g)))
        }
        &CorpusSource::Random { n, p_min, p_max, count, seed } => {
            if !(0.0..=1.0).contains(&p_min) || !(p_min..=1.0).contains(&p_max) {
                return Err(CorpusError::BadProbability);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut produced = 0;
            Box::new(std::iter::from_fn(move || {
                if produced == count {
                    return None;
                }
                for _ in 0..MAX_ATTEMPTS_PER_GRAPH {
                    let p = p_min + (p_max - p_min) * rng.gen::<f64>();
                    let g = random_graph(&mut rng, n, p);
                    if filter.accepts(&g) {
                        produced += 1;
                        return Some(g);
                    }
                }
                None
            }))
        }
        CorpusSource::Perturbed { base, max_flips, count, seed } => {
            let (base, max_flips, count) = (base.clone(), (*max_flips).max(1), *count);
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let n = base.order();
            let mut produced = 0;
            Box::new(std::iter::from_fn(move || {
                if produced == count || n < 2 {
                    return None;
                }
                for _ in 0..MAX_ATTEMPTS_PER_GRAPH {
                    let flips = rng.gen_range(1..=max_flips);
                    let mut g = base.clone();
                    for _ in 0..flips {
                        let u = rng.gen_range(0..n);
                        let v = (u + rng.gen_range(1..n)) % n;
                        g = g.with_toggled(u, v).expect("distinct in-range pair");
                    }
                    if filter.accepts(&g) {
                        produced += 1;
                        return Some(g);
                    }
                }
                None
            }))
        }
    };
    Ok(stream)
}

/// Which spectral theorem is being checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Which {
    Rho,
    Q,
}

impl Which {
    pub fn kind(self) -> MatrixKind {
        match self {
            Which::Rho => MatrixKind::Adjacency,
            Which::Q => MatrixKind::SignlessLaplacian,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Which::Rho => "rho",
            Which::Q => "q",
        }
    }
}

impl FromStr for Which {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rho" => Ok(Which::Rho),
            "q" => Ok(Which::Q),
            other => Err(format!("expected `rho` or `q`, got `{other}`")),
        }
    }
}

impl fmt::Display for Which {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Lower bound on `n` imposed before a theorem run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundMode {
    /// `n ≥ 4δ+3` for ρ, `n ≥ 9δ−2k+12` for q.
    #[default]
    Strict,
    /// For `k ≥ 1`: `n ≥ 4δ+1` for ρ, `n ≥ 9δ−2k` for q. Same as strict for `k = 0`.
    Relaxed,
    /// Only what is needed to build `H(n,δ,k)`. Findings are exploratory.
    Exploratory,
}

impl BoundMode {
    /// The smallest admissible `n`, or `None` when no bound applies.
    pub fn min_order(self, which: Which, delta: usize, k: usize) -> Option<usize> {
        let strict = match which {
            Which::Rho => 4 * delta + 3,
            Which::Q => (9 * delta + 12).saturating_sub(2 * k),
        };
        match self {
            BoundMode::Strict => Some(strict),
            BoundMode::Relaxed if k == 0 => Some(strict),
            BoundMode::Relaxed => Some(match which {
                Which::Rho => 4 * delta + 1,
                Which::Q => (9 * delta).saturating_sub(2 * k),
            }),
            BoundMode::Exploratory => None,
        }
    }
}

impl FromStr for BoundMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(BoundMode::Strict),
            "relaxed" => Ok(BoundMode::Relaxed),
            "exploratory" => Ok(BoundMode::Exploratory),
            other => Err(format!("unknown bound mode `{other}`")),
        }
    }
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error(transparent)]
    Threshold(#[from] ThresholdError),
    #[error(transparent)]
    Criticality(#[from] CriticalityError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub mode: BoundMode,
    pub slack: f64,
    pub consistency_tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { mode: BoundMode::Strict, slack: THRESHOLD_SLACK, consistency_tol: CONSISTENCY_TOL }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub params: ExtremalParams,
    pub which: Which,
    pub mode: BoundMode,
    pub graphs_tested: usize,
    pub above_threshold: usize,
    pub critical_above: usize,
    pub extremal_hits: usize,
    /// graph6 strings of graphs above the threshold that are neither
    /// k-factor-critical nor the extremal graph.
    pub counterexamples: Vec<String>,
    pub threshold_used: f64,
}

impl VerificationReport {
    pub fn counts_consistent(&self) -> bool {
        self.above_threshold == self.critical_above + self.extremal_hits + self.counterexamples.len()
    }

    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.params;
        writeln!(f, "theorem={} n={} delta={} k={} mode={:?}", self.which, p.n, p.delta, p.k, self.mode)?;
        writeln!(f, "threshold={:.12}", self.threshold_used)?;
        writeln!(f, "graphs_tested={}", self.graphs_tested)?;
        writeln!(f, "above_threshold={}", self.above_threshold)?;
        writeln!(f, "critical_above={}", self.critical_above)?;
        writeln!(f, "extremal_hits={}", self.extremal_hits)?;
        writeln!(f, "counterexamples={}", self.counterexamples.len())?;
        for c in &self.counterexamples {
            writeln!(f, "counterexample {c}")?;
        }
        write!(f, "status={}", if self.passed() { "pass" } else { "fail" })
    }
}

/// Checks the theorem hypotheses on `p` for `which` under `mode`.
pub fn check_hypotheses(p: &ExtremalParams, which: Which, mode: BoundMode) -> Result<(), VerifyError> {
    p.validate_with_parity()?;
    if let Some(min) = mode.min_order(which, p.delta, p.k) {
        if p.n < min {
            return Err(VerifyError::Hypothesis(format!(
                "n = {} is below the {:?} bound {} for theorem {}",
                p.n, mode, min, which
            )));
        }
    }
    Ok(())
}

enum Outcome {
    Skipped,
    Below,
    Critical,
    Extremal,
    Counterexample(String),
}

fn classify(g: &Graph, p: &ExtremalParams, kind: MatrixKind, cutoff: f64) -> Result<Outcome, CriticalityError> {
    if g.order() != p.n || g.min_degree() != p.delta {
        return Ok(Outcome::Skipped);
    }
    if spectral_radius(g, kind) < cutoff {
        return Ok(Outcome::Below);
    }
    if is_kfc_matching(g, p.k)?.verdict {
        Ok(Outcome::Critical)
    } else if recognize_extremal(g, p) {
        Ok(Outcome::Extremal)
    } else {
        Ok(Outcome::Counterexample(emit_graph6_string(g)))
    }
}

#[cfg(feature = "parallel")]
fn classify_chunk(
    chunk: &[Graph],
    p: &ExtremalParams,
    kind: MatrixKind,
    cutoff: f64,
) -> Result<Vec<Outcome>, CriticalityError> {
    use rayon::prelude::*;
    chunk.par_iter().map(|g| classify(g, p, kind, cutoff)).collect()
}

#[cfg(not(feature = "parallel"))]
fn classify_chunk(
    chunk: &[Graph],
    p: &ExtremalParams,
    kind: MatrixKind,
    cutoff: f64,
) -> Result<Vec<Outcome>, CriticalityError> {
    chunk.iter().map(|g| classify(g, p, kind, cutoff)).collect()
}

/// Runs the theorem over `graphs`. Graphs of the wrong order or whose
/// minimum degree is not exactly δ are ignored. Every remaining graph whose
/// spectral value reaches the threshold (less `opts.slack`) must be
/// k-factor-critical or isomorphic to `H(n,δ,k)`; anything else is recorded as a
/// counterexample.
pub fn verify_theorem(
    graphs: impl IntoIterator<Item = Graph>,
    p: &ExtremalParams,
    which: Which,
    opts: &VerifyOptions,
) -> Result<VerificationReport, VerifyError> {
    check_hypotheses(p, which, opts.mode)?;
    let kind = which.kind();
    let threshold = thresholds_with_tolerance(p, opts.consistency_tol)?.value(kind);
    let cutoff = threshold - opts.slack;
    let mut report = VerificationReport {
        params: *p,
        which,
        mode: opts.mode,
        graphs_tested: 0,
        above_threshold: 0,
        critical_above: 0,
        extremal_hits: 0,
        counterexamples: Vec::new(),
        threshold_used: threshold,
    };
    let mut iter = graphs.into_iter();
    loop {
        let chunk: Vec<Graph> = iter.by_ref().take(4096).collect();
        if chunk.is_empty() {
            break;
        }
        for outcome in classify_chunk(&chunk, p, kind, cutoff)? {
            if !matches!(outcome, Outcome::Skipped) {
                report.graphs_tested += 1;
            }
            match outcome {
                Outcome::Skipped | Outcome::Below => {}
                Outcome::Critical => report.critical_above += 1,
                Outcome::Extremal => report.extremal_hits += 1,
                Outcome::Counterexample(g6) => report.counterexamples.push(g6),
            }
        }
    }
    report.above_threshold = report.critical_above + report.extremal_hits + report.counterexamples.len();
    Ok(report)
}

/// Re-runs the individual checks on a recorded counterexample. True when the
/// failure reproduces.
pub fn reproduce_counterexample(
    graph6: &str,
    p: &ExtremalParams,
    which: Which,
    slack: f64,
) -> Result<bool, VerifyError> {
    let g = parse_graph6(graph6.as_bytes())
        .map_err(|e| VerifyError::Hypothesis(format!("stored graph6 does not parse: {e}")))?;
    let threshold = thresholds_with_tolerance(p, CONSISTENCY_TOL)?.value(which.kind());
    let outcome = classify(&g, p, which.kind(), threshold - slack)?;
    Ok(matches!(outcome, Outcome::Counterexample(_)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SharpnessReport {
    pub params: ExtremalParams,
    /// The odd-component witness found for `H(n,δ,k)`, if any.
    pub witness: Option<VertexSet>,
    pub odd_components: usize,
    pub rho_gap: f64,
    pub q_gap: f64,
    pub sharp: bool,
}

/// `H(n,δ,k)` must fail k-factor-criticality through its out copy (leaving
/// `δ−k+2` odd components) while attaining both thresholds.
pub fn sharpness_report(p: &ExtremalParams) -> Result<SharpnessReport, VerifyError> {
    p.validate_with_parity()?;
    let h = build_h(p)?;
    let report = thresholds_with_tolerance(p, CONSISTENCY_TOL)?;
    let rho_gap = (spectral_radius(&h, MatrixKind::Adjacency) - report.rho()).abs();
    let q_gap = (spectral_radius(&h, MatrixKind::SignlessLaplacian) - report.q()).abs();
    let cert = is_kfc_tutte(&h, p.k, TutteOptions::default())?;
    let out_copy = VertexSet::range(0, p.delta);
    let witness = match cert.witness {
        Some(Witness::Tutte(s)) => Some(s),
        _ => None,
    };
    let odd_components = h.remove_vertices(&out_copy)?.odd_components();
    let sharp = witness.as_ref() == Some(&out_copy)
        && odd_components == p.delta - p.k + 2
        && rho_gap <= CONSISTENCY_TOL
        && q_gap <= CONSISTENCY_TOL;
    Ok(SharpnessReport { params: *p, witness, odd_components, rho_gap, q_gap, sharp })
}

pub fn verify_sharpness(p: &ExtremalParams) -> Result<bool, VerifyError> {
    Ok(sharpness_report(p)?.sharp)
}

impl From<crate::graph::GraphError> for VerifyError {
    fn from(e: crate::graph::GraphError) -> Self {
        VerifyError::Hypothesis(e.to_string())
    }
}

/// The lemma-level checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Lemma {
    /// `ρ(H_s) < ρ(H(n,δ,k))` for `k ≥ 1`, `s ≥ δ+1`, `n ≥ 4δ+3`.
    H1,
    /// `ρ(H'_s) < ρ(H)` and `q(H'_s) < q(H)` for `k ≤ s < δ`.
    H2,
    /// `q(H_s) < q(H(n,δ,k))` for `k ≥ 1`, `s ≥ δ+1`, `n ≥ 9δ−2k+12`.
    H3,
    /// Perron entries increase with inner clique size in `K_s ∨ (K_{n_1} ∪ … ∪ K_{n_t})`.
    Sp,
    /// Rotating edges toward the larger Perron entry increases `λ_α`.
    Ge,
    /// Adding an edge to a connected graph increases `ρ` and `q`.
    Inequit,
}

impl Lemma {
    pub const ALL: [Lemma; 6] = [Lemma::H1, Lemma::H2, Lemma::H3, Lemma::Sp, Lemma::Ge, Lemma::Inequit];

    pub fn name(self) -> &'static str {
        match self {
            Lemma::H1 => "h1",
            Lemma::H2 => "h2",
            Lemma::H3 => "h3",
            Lemma::Sp => "sp",
            Lemma::Ge => "ge",
            Lemma::Inequit => "inequit",
        }
    }
}

impl FromStr for Lemma {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Lemma::ALL
            .into_iter()
            .find(|l| l.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown lemma `{s}` (expected one of h1, h2, h3, sp, ge, inequit)"))
    }
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaGridConfig {
    pub deltas: RangeInclusive<usize>,
    /// How far past each lemma's smallest admissible `n` the grid extends.
    pub extra_n: usize,
    /// Also run the `H_s` grids at `k = 0`, where the inequality is not
    /// claimed and does fail near `s = (n−2)/2` (e.g. `n=12, δ=2, s=5`).
    pub include_k_zero: bool,
    pub hprime_bound: HPrimeBound,
    /// Valid randomized trials for `sp`, `ge` and `inequit`.
    pub trials: usize,
    pub seed: u64,
    /// Largest order for randomized connected graphs.
    pub max_order: usize,
    /// Required strict margin in the grid inequalities.
    pub margin: f64,
    /// Required strict increase in the randomized monotonicity checks.
    pub increase: f64,
}

impl Default for LemmaGridConfig {
    fn default() -> Self {
        LemmaGridConfig {
            deltas: 1..=3,
            extra_n: 8,
            include_k_zero: false,
            hprime_bound: HPrimeBound::Comparison,
            trials: 500,
            seed: 1,
            max_order: 12,
            margin: 1e-9,
            increase: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    pub lemma: Lemma,
    pub cases: usize,
    pub violations: Vec<String>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for LemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lemma={} cases={} violations={}", self.lemma, self.cases, self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "violation {v}")?;
        }
        write!(f, "status={}", if self.passed() { "pass" } else { "fail" })
    }
}

pub fn verify_lemma_grid(lemma: Lemma, cfg: &LemmaGridConfig) -> LemmaReport {
    let mut report = LemmaReport { lemma, cases: 0, violations: Vec::new() };
    match lemma {
        Lemma::H1 => hs_grid(cfg, Which::Rho, &mut report),
        Lemma::H3 => hs_grid(cfg, Which::Q, &mut report),
        Lemma::H2 => hprime_grid(cfg, &mut report),
        Lemma::Sp => perron_ordering_trials(cfg, &mut report),
        Lemma::Ge => rotation_trials(cfg, &mut report),
        Lemma::Inequit => edge_addition_trials(cfg, &mut report),
    }
    report
}

fn hs_grid(cfg: &LemmaGridConfig, which: Which, report: &mut LemmaReport) {
    let kind = which.kind();
    for delta in cfg.deltas.clone().filter(|&d| d >= 1) {
        for k in usize::from(!cfg.include_k_zero)..delta {
            let start = BoundMode::Strict.min_order(which, delta, k).expect("strict bound");
            for n in start..=start + cfg.extra_n {
                let base = spectral_radius(
                    &build_h(&ExtremalParams::new(n, delta, k)).expect("grid respects H bounds"),
                    kind,
                );
                let s_max = (n + k - 2) / 2;
                for s in (delta + 1).max(k)..=s_max {
                    let hs = build_hs(n, s, k).expect("s within (n+k-2)/2");
                    let value = spectral_radius(&hs, kind);
                    report.cases += 1;
                    if value >= base - cfg.margin {
                        report.violations.push(format!(
                            "n={n} delta={delta} k={k} s={s}: {which}(H_s)={value:.12} vs {which}(H)={base:.12}"
                        ));
                    }
                }
            }
        }
    }
}

fn hprime_grid(cfg: &LemmaGridConfig, report: &mut LemmaReport) {
    for delta in cfg.deltas.clone() {
        for k in 0..delta {
            for s in k.max(1)..delta {
                let start = cfg.hprime_bound.min_order(delta, s, k).max(2 * delta - k + 2);
                for n in start..=start + cfg.extra_n {
                    let h = build_h(&ExtremalParams::new(n, delta, k)).expect("n above H bound");
                    let hp = build_hprime(n, delta, s, k).expect("n above the H' bound");
                    for kind in MatrixKind::BOTH {
                        let (a, b) = (spectral_radius(&hp, kind), spectral_radius(&h, kind));
                        report.cases += 1;
                        if a >= b - cfg.margin {
                            report.violations.push(format!(
                                "n={n} delta={delta} s={s} k={k} alpha={}: H'_s={a:.12} vs H={b:.12}",
                                kind.alpha()
                            ));
                        }
                    }
                }
            }
        }
    }
}

/// Random tree plus independent extra edges: always connected.
fn random_connected(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let p: f64 = rng.gen_range(0.05..0.7);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut g = Graph::edgeless(n);
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        g = g.with_edge(order[i], parent).expect("tree edge is new");
    }
    for j in 1..n {
        for i in 0..j {
            if !g.has_edge(i, j) && rng.gen_bool(p) {
                g = g.with_edge(i, j).expect("checked absent");
            }
        }
    }
    g
}

fn perron_ordering_trials(cfg: &LemmaGridConfig, report: &mut LemmaReport) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for trial in 0..cfg.trials {
        let s = rng.gen_range(1..=4);
        let t = rng.gen_range(2..=4);
        let mut inner: Vec<usize> = (0..t).map(|_| rng.gen_range(1..=5)).collect();
        inner.sort_unstable();
        let g = join_of_cliques(s, &inner);
        let mut starts = vec![s];
        for &m in &inner {
            starts.push(starts.last().unwrap() + m);
        }
        for kind in MatrixKind::BOTH {
            let x = perron_vector(&g, kind).expect("joins are connected").vector;
            report.cases += 1;
            // orbit equality inside the out copy and inside each inner copy
            let mut blocks = vec![(0, s)];
            blocks.extend(starts.windows(2).map(|w| (w[0], w[1])));
            let orbit_ok = blocks
                .iter()
                .all(|&(a, b)| x[a..b].iter().all(|&v| (v - x[a]).abs() <= 1e-8));
            let entries: Vec<f64> = starts[..t].iter().map(|&a| x[a]).collect();
            let ordered = entries.windows(2).all(|w| w[0] <= w[1] + 1e-9);
            if !orbit_ok || !ordered {
                report.violations.push(format!(
                    "trial={trial} s={s} inner={inner:?} alpha={}: entries {entries:?} orbit_ok={orbit_ok}",
                    kind.alpha()
                ));
            }
        }
    }
}

fn rotation_trials(cfg: &LemmaGridConfig, report: &mut LemmaReport) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let max_n = cfg.max_order.max(3);
    let mut attempts = 0usize;
    while report.cases < cfg.trials && attempts < cfg.trials * 1000 {
        attempts += 1;
        let n = rng.gen_range(3..=max_n);
        let g = random_connected(&mut rng, n);
        let kind = MatrixKind::BOTH[rng.gen_range(0..2)];
        let perron = perron_vector(&g, kind).expect("connected");
        let a = rng.gen_range(0..n);
        let b = (a + rng.gen_range(1..n)) % n;
        let (u, v) = if perron.vector[a] >= perron.vector[b] { (a, b) } else { (b, a) };
        let candidates: Vec<usize> =
            g.neighbors(v).filter(|&w| w != u && !g.has_edge(u, w)).collect();
        if candidates.is_empty() {
            continue;
        }
        let mut moved: Vec<usize> = candidates.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        if moved.is_empty() {
            moved.push(*candidates.choose(&mut rng).expect("nonempty"));
        }
        let moved = VertexSet::new(moved);
        let rotated = g.rotate_edges(v, u, &moved).expect("rotation targets are fresh");
        if !rotated.is_connected() {
            continue;
        }
        let after = spectral_radius(&rotated, kind);
        report.cases += 1;
        if after <= perron.value + cfg.increase {
            report.violations.push(format!(
                "{} u={u} v={v} moved={moved} alpha={}: {:.12} -> {after:.12}",
                emit_graph6_string(&g),
                kind.alpha(),
                perron.value
            ));
        }
    }
}

fn edge_addition_trials(cfg: &LemmaGridConfig, report: &mut LemmaReport) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let max_n = cfg.max_order.clamp(3, 10);
    let mut attempts = 0usize;
    while report.cases < cfg.trials && attempts < cfg.trials * 1000 {
        attempts += 1;
        let n = rng.gen_range(3..=max_n);
        let g = random_connected(&mut rng, n);
        let non_edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| !g.has_edge(u, v))
            .collect();
        let Some(&(u, v)) = non_edges.choose(&mut rng) else { continue };
        let bigger = g.with_edge(u, v).expect("non-edge");
        report.cases += 1;
        for kind in MatrixKind::BOTH {
            let (before, after) = (spectral_radius(&g, kind), spectral_radius(&bigger, kind));
            if after <= before + cfg.increase {
                report.violations.push(format!(
                    "{} + {u}{v} alpha={}: {before:.12} -> {after:.12}",
                    emit_graph6_string(&g),
                    kind.alpha()
                ));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::complete;

    fn count(spec: &CorpusSpec) -> usize {
        generate_corpus(spec).unwrap().count()
    }

    #[test]
    fn exhaustive_counts() {
        let all = CorpusSpec { source: CorpusSource::Exhaustive { n: 4 }, filter: CorpusFilter::default() };
        assert_eq!(count(&all), 64);
        let err = generate_corpus(&CorpusSpec { source: CorpusSource::Exhaustive { n: 8 }, ..all.clone() });
        assert!(matches!(err, Err(CorpusError::ExhaustiveTooLarge(8))));
    }

    #[test]
    fn random_corpus_is_deterministic() {
        let spec = CorpusSpec {
            source: CorpusSource::Random { n: 12, p_min: 0.5, p_max: 0.5, count: 1000, seed: 7 },
            filter: CorpusFilter::default(),
        };
        let a: Vec<Graph> = generate_corpus(&spec).unwrap().collect();
        let b: Vec<Graph> = generate_corpus(&spec).unwrap().collect();
        assert_eq!(a.len(), 1000);
        assert_eq!(a, b);
    }

    #[test]
    fn graph6_text_corpus_filters() {
        let text = format!("{}\n", emit_graph6_string(&complete(5).unwrap()));
        let spec = CorpusSpec {
            source: CorpusSource::Graph6Text(text),
            filter: CorpusFilter { min_degree: Some(4), connected: None },
        };
        assert_eq!(count(&spec), 1);
        let bad = CorpusSpec { source: CorpusSource::Graph6Text("D~{\nxx\n".into()), filter: CorpusFilter::default() };
        assert!(matches!(generate_corpus(&bad), Err(CorpusError::Graph6 { line: 2, .. })));
        let missing = CorpusSpec {
            source: CorpusSource::Graph6File("/nonexistent/graphs.g6".into()),
            filter: CorpusFilter::default(),
        };
        assert!(matches!(generate_corpus(&missing), Err(CorpusError::Io { .. })));
    }

    #[test]
    fn hypothesis_checks() {
        let p = ExtremalParams::new(8, 1, 0);
        assert!(check_hypotheses(&p, Which::Rho, BoundMode::Strict).is_ok());
        assert!(check_hypotheses(&p, Which::Q, BoundMode::Strict).is_err());
        let p = ExtremalParams::new(7, 1, 1);
        assert!(check_hypotheses(&p, Which::Rho, BoundMode::Strict).is_err());
        let p = ExtremalParams::new(9, 2, 1);
        assert!(check_hypotheses(&p, Which::Rho, BoundMode::Strict).is_err());
        assert!(check_hypotheses(&p, Which::Rho, BoundMode::Relaxed).is_ok());
        let p = ExtremalParams::new(22, 1, 0);
        assert!(check_hypotheses(&p, Which::Q, BoundMode::Strict).is_ok());
        let p = ExtremalParams::new(7, 2, 1);
        assert!(check_hypotheses(&p, Which::Rho, BoundMode::Relaxed).is_err());
        assert!(check_hypotheses(&p, Which::Rho, BoundMode::Exploratory).is_ok());
        let p = ExtremalParams::new(8, 2, 1);
        assert!(check_hypotheses(&p, Which::Rho, BoundMode::Exploratory).is_err());
    }

    #[test]
    fn extremal_graph_lands_on_its_own_threshold() {
        let p = ExtremalParams::new(8, 1, 0);
        let opts = VerifyOptions { mode: BoundMode::Exploratory, ..Default::default() };
        let r = verify_theorem([build_h(&p).unwrap()], &p, Which::Rho, &opts).unwrap();
        assert_eq!((r.above_threshold, r.extremal_hits), (1, 1));
        assert!(r.passed() && r.counts_consistent());

        let r = verify_theorem([complete(8).unwrap()], &p, Which::Rho, &opts).unwrap();
        // K_8 has minimum degree 7, so it is outside the class
        assert_eq!(r.graphs_tested, 0);
    }

    #[test]
    fn sharpness_small_cases() {
        for (n, d, k) in [(8, 1, 0), (12, 2, 0), (9, 2, 1)] {
            let r = sharpness_report(&ExtremalParams::new(n, d, k)).unwrap();
            assert!(r.sharp, "{r:?}");
            assert_eq!(r.odd_components, d - k + 2);
        }
    }

    #[test]
    fn lemma_names_parse() {
        for l in Lemma::ALL {
            assert_eq!(l.name().parse::<Lemma>().unwrap(), l);
        }
        assert!("h4".parse::<Lemma>().is_err());
    }
}
