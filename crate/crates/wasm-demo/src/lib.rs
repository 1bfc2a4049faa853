//! Browser bindings for the demo page in `www/`. Every export returns a JSON
//! string; errors surface as a thrown JavaScript string.

use factorcrit::{
    build_h, emit_graph6_string, is_kfc_tutte, parse_graph6, perron_vector, q, rho, thresholds,
    BoundMode, ExtremalParams, Graph, MatrixKind, TutteOptions, Which,
};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest order the demo decides criticality for; the odd-component search
/// is exponential in `n`.
pub const MAX_ANALYZE_ORDER: usize = 16;

#[derive(Debug, Serialize, PartialEq)]
pub struct CurvePoint {
    pub n: usize,
    pub rho: f64,
    pub q: f64,
    /// `n ≡ k (mod 2)`, required for k-factor-criticality at all.
    pub parity_ok: bool,
    pub rho_bound_ok: bool,
    pub q_bound_ok: bool,
}

#[derive(Debug, Serialize)]
pub struct ExtremalView {
    pub graph6: String,
    pub order: usize,
    pub edges: Vec<(usize, usize)>,
    /// 0 for the out copy `K_δ`, 1 for the `δ−k+1` isolated vertices, 2 for the big clique.
    pub part: Vec<u8>,
    pub perron: Vec<f64>,
    pub rho: f64,
    pub q: f64,
    pub witness: Option<Vec<usize>>,
}

#[derive(Debug, Serialize)]
pub struct GraphView {
    pub order: usize,
    pub size: usize,
    pub min_degree: usize,
    pub connected: bool,
    pub rho: f64,
    pub q: f64,
    pub edges: Vec<(usize, usize)>,
    pub k: usize,
    pub critical: bool,
    pub witness_kind: Option<&'static str>,
    pub witness: Option<Vec<usize>>,
    pub odd_components: Option<usize>,
}

pub fn curve(delta: usize, k: usize, n_max: usize) -> Result<Vec<CurvePoint>, String> {
    let start = (2 * delta + 2).saturating_sub(k);
    let mut points = Vec::new();
    for n in start..=n_max {
        let p = ExtremalParams::new(n, delta, k);
        let report = thresholds(&p).map_err(|e| e.to_string())?;
        let bound = |which| BoundMode::Strict.min_order(which, delta, k).is_none_or(|m| n >= m);
        points.push(CurvePoint {
            n,
            rho: report.rho(),
            q: report.q(),
            parity_ok: p.parity_ok(),
            rho_bound_ok: bound(Which::Rho),
            q_bound_ok: bound(Which::Q),
        });
    }
    Ok(points)
}

pub fn extremal(n: usize, delta: usize, k: usize) -> Result<ExtremalView, String> {
    let p = ExtremalParams::new(n, delta, k);
    let h = build_h(&p).map_err(|e| e.to_string())?;
    let [out_copy, isolated, _] = p.part_sizes();
    let part = (0..n)
        .map(|v| match v {
            v if v < out_copy => 0,
            v if v < out_copy + isolated => 1,
            _ => 2,
        })
        .collect();
    let perron = perron_vector(&h, MatrixKind::Adjacency).map_err(|e| e.to_string())?.vector;
    let witness = if p.parity_ok() && n <= MAX_ANALYZE_ORDER {
        let cert = is_kfc_tutte(&h, k, TutteOptions::default()).map_err(|e| e.to_string())?;
        cert.witness.map(|w| w.set().as_slice().to_vec())
    } else {
        None
    };
    Ok(ExtremalView {
        graph6: emit_graph6_string(&h),
        order: n,
        edges: h.edges().to_vec(),
        part,
        perron,
        rho: rho(&h),
        q: q(&h),
        witness,
    })
}

pub fn analyze(graph6: &str, k: usize) -> Result<GraphView, String> {
    let g: Graph = parse_graph6(graph6.trim().as_bytes()).map_err(|e| e.to_string())?;
    if g.order() > MAX_ANALYZE_ORDER {
        return Err(format!("order {} exceeds the demo limit of {MAX_ANALYZE_ORDER}", g.order()));
    }
    let cert = is_kfc_tutte(&g, k, TutteOptions::default()).map_err(|e| e.to_string())?;
    let witness = cert.witness.as_ref().map(|w| w.set().as_slice().to_vec());
    let odd_components = cert
        .witness
        .as_ref()
        .map(|w| g.remove_vertices(w.set()).expect("witness in range").odd_components());
    Ok(GraphView {
        order: g.order(),
        size: g.size(),
        min_degree: g.min_degree(),
        connected: g.is_connected(),
        rho: rho(&g),
        q: q(&g),
        edges: g.edges().to_vec(),
        k,
        critical: cert.verdict,
        witness_kind: cert.witness.as_ref().map(|w| w.kind()),
        witness,
        odd_components,
    })
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsValue> {
    r.and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string()))
        .map_err(|e| JsValue::from_str(&e))
}

/// `ρ(H(n,δ,k))` and `q(H(n,δ,k))` for every admissible `n` up to `n_max`.
#[wasm_bindgen]
pub fn threshold_curve(delta: usize, k: usize, n_max: usize) -> Result<String, JsValue> {
    to_js(curve(delta, k, n_max))
}

/// `H(n,δ,k)` with its Perron vector and odd-component witness.
#[wasm_bindgen]
pub fn extremal_graph(n: usize, delta: usize, k: usize) -> Result<String, JsValue> {
    to_js(extremal(n, delta, k))
}

/// Spectral data and k-factor-criticality of one graph6 string.
#[wasm_bindgen]
pub fn analyze_graph6(graph6: &str, k: usize) -> Result<String, JsValue> {
    to_js(analyze(graph6, k))
}
