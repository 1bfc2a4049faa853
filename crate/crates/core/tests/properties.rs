use factorcrit::*;
use proptest::prelude::*;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut it = bits.into_iter();
            for j in 1..n {
                for i in 0..j {
                    if it.next().unwrap() {
                        edges.push((i, j));
                    }
                }
            }
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

/// A random graph with the path `0-1-…-(n−1)` added, so always connected.
fn connected_graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    graph_strategy(max_n).prop_filter("at least three vertices", |g| g.order() >= 3).prop_map(|g| {
        let mut h = g.clone();
        for v in 1..g.order() {
            if !h.has_edge(v - 1, v) {
                h = h.with_edge(v - 1, v).unwrap();
            }
        }
        h
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn join_adds_orders_sizes_and_all_cross_edges(a in graph_strategy(8), b in graph_strategy(8)) {
        let j = join(&a, &b);
        prop_assert_eq!(j.order(), a.order() + b.order());
        prop_assert_eq!(j.size(), a.size() + b.size() + a.order() * b.order());
        let u = disjoint_union(&a, &b);
        prop_assert_eq!(u.size(), a.size() + b.size());
        prop_assert_eq!(u.components().len(), a.components().len() + b.components().len());
    }

    #[test]
    fn graph6_roundtrips(g in graph_strategy(40)) {
        let bytes = emit_graph6(&g);
        let back = parse_graph6(&bytes).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(emit_graph6(&back), bytes);
    }

    #[test]
    fn component_orders_partition_the_vertices(g in graph_strategy(16)) {
        let comps = g.components();
        prop_assert_eq!(comps.iter().map(Vec::len).sum::<usize>(), g.order());
        prop_assert_eq!(g.odd_components(), comps.iter().filter(|c| c.len() % 2 == 1).count());
        prop_assert_eq!(g.is_connected(), comps.len() == 1);
    }

    #[test]
    fn handshake_and_degree_bounds(g in graph_strategy(16)) {
        prop_assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.size());
        let r = rho(&g);
        prop_assert!(r <= g.max_degree() as f64 + 1e-9);
        prop_assert!(r + 1e-9 >= 2.0 * g.size() as f64 / g.order() as f64);
        prop_assert!(q(&g) <= 2.0 * g.max_degree() as f64 + 1e-9);
    }

    #[test]
    fn adding_an_edge_to_a_connected_graph_raises_both_radii(g in graph_strategy(10), pick in any::<prop::sample::Index>()) {
        prop_assume!(g.is_connected());
        let n = g.order();
        let missing: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !g.has_edge(i, j))
            .collect();
        prop_assume!(!missing.is_empty());
        let (u, v) = missing[pick.index(missing.len())];
        let h = g.with_edge(u, v).unwrap();
        prop_assert!(rho(&h) > rho(&g) + 1e-10);
        prop_assert!(q(&h) > q(&g) + 1e-10);
    }

    #[test]
    fn rotating_edges_toward_the_larger_perron_entry_raises_the_radius(
        g in connected_graph_strategy(10),
        a in any::<prop::sample::Index>(),
        b in any::<prop::sample::Index>(),
        picks in proptest::collection::vec(any::<bool>(), 10),
    ) {
        let n = g.order();
        let (a, b) = (a.index(n), b.index(n));
        prop_assume!(a != b);
        for kind in MatrixKind::BOTH {
            let x = perron_vector(&g, kind).unwrap().vector;
            let (u, v) = if x[a] >= x[b] { (a, b) } else { (b, a) };
            let movable: Vec<usize> = g
                .neighbors(v)
                .filter(|&w| w != u && !g.has_edge(u, w))
                .collect();
            let moved: VertexSet = movable.iter().zip(&picks).filter(|(_, &p)| p).map(|(&w, _)| w).collect();
            if moved.is_empty() {
                continue;
            }
            let h = g.rotate_edges(v, u, &moved).unwrap();
            prop_assert!(spectral_radius(&h, kind) > spectral_radius(&g, kind) + 1e-10);
        }
    }

    #[test]
    fn deciders_agree_and_witnesses_hold(g in graph_strategy(9), k in 0usize..10) {
        prop_assume!(k <= g.order());
        let a = is_kfc_matching(&g, k).unwrap();
        let b = is_kfc_tutte(&g, k, TutteOptions::default()).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert!(a.witness_holds(&g));
        prop_assert!(b.witness_holds(&g));
        if g.order() % 2 != k % 2 {
            prop_assert!(!a.verdict);
        }
    }
}
