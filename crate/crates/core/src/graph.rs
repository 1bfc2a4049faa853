//! Simple undirected graphs on vertices `0..n`.
//!
//! Adjacency is kept twice: as packed bitset rows (cheap membership tests and
//! masked traversals) and as a sorted edge list (cheap iteration).

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("a graph needs at least one vertex")]
    Empty,
    #[error("number of copies must be positive")]
    ZeroCopies,
    #[error("vertex {vertex} out of range for a graph of order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge {0}-{1} listed twice")]
    DuplicateEdge(usize, usize),
    #[error("permutation of length {len} does not match order {order}")]
    BadPermutation { len: usize, order: usize },
}

/// Sorted, duplicate-free set of vertex indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new(vertices: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = vertices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    pub fn empty() -> Self {
        VertexSet(Vec::new())
    }

    /// The contiguous block `start..end`.
    pub fn range(start: usize, end: usize) -> Self {
        VertexSet((start..end).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    /// Largest member, if any.
    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::new(iter)
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    order: usize,
    words: usize,
    rows: Vec<u64>,
    edges: Vec<(usize, usize)>,
}

fn words_for(order: usize) -> usize {
    order.div_ceil(64).max(1)
}

fn bits(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(w, &word)| {
        let mut rest = word;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(w * 64 + b)
        })
    })
}

impl Graph {
    /// Edgeless graph on `order` vertices. Order 0 gives the null graph, which
    /// only arises from deleting every vertex.
    pub fn edgeless(order: usize) -> Self {
        let words = words_for(order);
        Graph {
            order,
            words,
            rows: vec![0; order * words],
            edges: Vec::new(),
        }
    }

    pub fn from_edges(
        order: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut g = Graph::edgeless(order);
        for (u, v) in edges {
            for x in [u, v] {
                if x >= order {
                    return Err(GraphError::VertexOutOfRange { vertex: x, order });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if g.has_edge(u, v) {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            g.set_bit(u, v);
            g.set_bit(v, u);
        }
        g.rebuild_edges();
        Ok(g)
    }

    fn set_bit(&mut self, u: usize, v: usize) {
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
    }

    fn clear_bit(&mut self, u: usize, v: usize) {
        self.rows[u * self.words + v / 64] &= !(1 << (v % 64));
    }

    fn rebuild_edges(&mut self) {
        let mut edges = Vec::new();
        for u in 0..self.order {
            edges.extend(bits(self.row(u)).filter(|&v| u < v).map(|v| (u, v)));
        }
        self.edges = edges;
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub(crate) fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.order && v < self.order && self.row(u)[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.order).map(|v| self.degree(v)).collect()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        bits(self.row(v))
    }

    pub fn neighborhood(&self, v: usize) -> VertexSet {
        VertexSet(self.neighbors(v).collect())
    }

    /// Minimum degree; 0 for the null graph.
    pub fn min_degree(&self) -> usize {
        (0..self.order).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.order).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// A copy of the graph with `uv` added.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        self.check_pair(u, v)?;
        if self.has_edge(u, v) {
            return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
        }
        let mut g = self.clone();
        g.set_bit(u, v);
        g.set_bit(v, u);
        g.rebuild_edges();
        Ok(g)
    }

    /// A copy of the graph with the pair `uv` toggled.
    pub fn with_toggled(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        self.check_pair(u, v)?;
        let mut g = self.clone();
        if g.has_edge(u, v) {
            g.clear_bit(u, v);
            g.clear_bit(v, u);
        } else {
            g.set_bit(u, v);
            g.set_bit(v, u);
        }
        g.rebuild_edges();
        Ok(g)
    }

    /// Replaces the edges `vw` (`w` in `moved`) by `uw`.
    pub fn rotate_edges(&self, v: usize, u: usize, moved: &VertexSet) -> Result<Graph, GraphError> {
        self.check_pair(u, v)?;
        let mut g = self.clone();
        for w in moved.iter() {
            if w >= self.order {
                return Err(GraphError::VertexOutOfRange { vertex: w, order: self.order });
            }
            if w == u {
                return Err(GraphError::SelfLoop(u));
            }
            if g.has_edge(u, w) {
                return Err(GraphError::DuplicateEdge(u.min(w), u.max(w)));
            }
            g.clear_bit(v, w);
            g.clear_bit(w, v);
            g.set_bit(u, w);
            g.set_bit(w, u);
        }
        g.rebuild_edges();
        Ok(g)
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<(), GraphError> {
        for x in [u, v] {
            if x >= self.order {
                return Err(GraphError::VertexOutOfRange { vertex: x, order: self.order });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        Ok(())
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Graph, GraphError> {
        let bad = || GraphError::BadPermutation { len: perm.len(), order: self.order };
        if perm.len() != self.order {
            return Err(bad());
        }
        let mut seen = vec![false; self.order];
        for &p in perm {
            if p >= self.order || seen[p] {
                return Err(bad());
            }
            seen[p] = true;
        }
        Graph::from_edges(self.order, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
    }

    /// Induced subgraph on the complement of `removed`, relabelled
    /// contiguously in increasing vertex order.
    pub fn remove_vertices(&self, removed: &VertexSet) -> Result<Graph, GraphError> {
        if let Some(v) = removed.max() {
            if v >= self.order {
                return Err(GraphError::VertexOutOfRange { vertex: v, order: self.order });
            }
        }
        let kept: Vec<usize> = (0..self.order).filter(|&v| !removed.contains(v)).collect();
        Ok(self.induced(&kept))
    }

    /// Induced subgraph on `kept` (assumed sorted and in range).
    pub(crate) fn induced(&self, kept: &[usize]) -> Graph {
        let mut g = Graph::edgeless(kept.len());
        for (i, &u) in kept.iter().enumerate() {
            for (j, &v) in kept.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.set_bit(i, j);
                    g.set_bit(j, i);
                }
            }
        }
        g.rebuild_edges();
        g
    }

    /// Connected components as sorted vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order];
        let mut out = Vec::new();
        for start in 0..self.order {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.order > 0 && self.components().len() == 1
    }

    /// Number of components with an odd number of vertices.
    pub fn odd_components(&self) -> usize {
        self.components().iter().filter(|c| c.len() % 2 == 1).count()
    }

    /// `odd_components` of the graph with the vertices in `removed` deleted,
    /// without materialising the subgraph.
    pub(crate) fn odd_components_without(&self, removed: &[usize]) -> usize {
        let mut alive = vec![0u64; self.words];
        for v in 0..self.order {
            alive[v / 64] |= 1 << (v % 64);
        }
        for &v in removed {
            alive[v / 64] &= !(1 << (v % 64));
        }
        let mut odd = 0;
        let mut stack = Vec::new();
        loop {
            let Some(start) = bits(&alive).next() else { break };
            alive[start / 64] &= !(1 << (start % 64));
            stack.push(start);
            let mut count = 0usize;
            while let Some(v) = stack.pop() {
                count += 1;
                let row = self.row(v);
                for w in 0..self.words {
                    let mut fresh = row[w] & alive[w];
                    alive[w] &= !fresh;
                    while fresh != 0 {
                        let b = fresh.trailing_zeros() as usize;
                        fresh &= fresh - 1;
                        stack.push(w * 64 + b);
                    }
                }
            }
            odd += count % 2;
        }
        odd
    }

    /// True when every pair of distinct vertices in `vs` is adjacent.
    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter()
            .enumerate()
            .all(|(i, &u)| vs[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("order", &self.order)
            .field("edges", &self.edges)
            .finish()
    }
}

/// The complete graph `K_n`.
pub fn complete(n: usize) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(GraphError::Empty);
    }
    let mut g = Graph::edgeless(n);
    for u in 0..n {
        for v in 0..n {
            if u != v {
                g.set_bit(u, v);
            }
        }
    }
    g.rebuild_edges();
    Ok(g)
}

/// `g1 ∪ g2`; vertices of `g2` are shifted by `g1.order()`.
pub fn disjoint_union(g1: &Graph, g2: &Graph) -> Graph {
    let offset = g1.order;
    let mut g = Graph::edgeless(g1.order + g2.order);
    for &(u, v) in &g1.edges {
        g.set_bit(u, v);
        g.set_bit(v, u);
    }
    for &(u, v) in &g2.edges {
        g.set_bit(u + offset, v + offset);
        g.set_bit(v + offset, u + offset);
    }
    g.rebuild_edges();
    g
}

/// `g1 ∨ g2`: the disjoint union plus every edge between the two sides.
pub fn join(g1: &Graph, g2: &Graph) -> Graph {
    let mut g = disjoint_union(g1, g2);
    for u in 0..g1.order {
        for v in g1.order..g.order {
            g.set_bit(u, v);
            g.set_bit(v, u);
        }
    }
    g.rebuild_edges();
    g
}

/// `k` vertex-disjoint copies of `g`.
pub fn copies(k: usize, g: &Graph) -> Result<Graph, GraphError> {
    if k == 0 {
        return Err(GraphError::ZeroCopies);
    }
    let mut out = g.clone();
    for _ in 1..k {
        out = disjoint_union(&out, g);
    }
    Ok(out)
}
