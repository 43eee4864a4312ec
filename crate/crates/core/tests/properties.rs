use std::collections::BTreeSet;

use proptest::prelude::*;
use theta_epsa::generate::{self, SeededRng};
use theta_epsa::{
    edge_cover_exact, edge_ep_pipeline, edge_hitting_from_vertex, edge_packing_exact, exact_treewidth,
    extract_subtrees, has_model, r_good_partition, to_nice, verify_decomposition, verify_packing,
    vertex_cover_exact, vertex_hitting_recursive, Budget, MarkedTree, MultiGraph, PipelineOutcome, Vertex,
};

fn multigraph(max_n: u32, max_m: usize) -> impl Strategy<Value = MultiGraph> {
    (2..=max_n).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 1..n), 0..=max_m).prop_map(move |pairs| {
            let mut g = MultiGraph::new();
            for v in 0..n {
                g.add_vertex(v);
            }
            for (u, d) in pairs {
                g.add_edge(u, (u + d) % n).unwrap();
            }
            g
        })
    })
}

fn marked_tree() -> impl Strategy<Value = MarkedTree> {
    (2usize..=30, any::<u64>(), 20usize..=100)
        .prop_map(|(n, seed, p)| generate::random_marked_tree(n, p, &mut SeededRng::new(seed)).unwrap())
}

/// Width of the best elimination order over all permutations.
fn brute_treewidth(g: &MultiGraph) -> usize {
    fn go(adj: &[BTreeSet<usize>], alive: &mut Vec<bool>, width: usize, best: &mut usize) {
        if width >= *best {
            return;
        }
        if alive.iter().all(|a| !a) {
            *best = width;
            return;
        }
        for v in 0..adj.len() {
            if !alive[v] {
                continue;
            }
            let live: Vec<usize> = adj[v].iter().copied().filter(|&w| alive[w]).collect();
            let mut next = adj.to_vec();
            for &a in &live {
                for &b in &live {
                    if a != b {
                        next[a].insert(b);
                    }
                }
            }
            alive[v] = false;
            go(&next, alive, width.max(live.len()), best);
            alive[v] = true;
        }
    }
    let verts: Vec<Vertex> = g.vertices().collect();
    let idx = |v: Vertex| verts.binary_search(&v).unwrap();
    let mut adj = vec![BTreeSet::new(); verts.len()];
    for (_, u, v) in g.edges() {
        adj[idx(u)].insert(idx(v));
        adj[idx(v)].insert(idx(u));
    }
    let mut best = usize::MAX;
    go(&adj, &mut vec![true; verts.len()], 0, &mut best);
    if verts.is_empty() { 0 } else { best }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn good_partition_conditions(t in marked_tree(), r in 1usize..=5) {
        prop_assume!(t.mu() >= 2 * r);
        let p = r_good_partition(&t, r).unwrap();
        prop_assert_eq!(p.check(&t), Ok(()));
        prop_assert_eq!(p.first.mu() + p.second.mu(), t.mu());
    }

    #[test]
    fn extraction_gives_disjoint_rich_subtrees(t in marked_tree(), r in 1usize..=3, k in 1usize..=4) {
        prop_assume!(t.mu() >= 2 * k * r);
        let parts = extract_subtrees(&t, k, r).unwrap();
        prop_assert_eq!(parts.len(), k);
        let mut seen = BTreeSet::new();
        let mut marks = BTreeSet::new();
        for p in &parts {
            prop_assert!(p.mu() >= r);
            prop_assert!(p.tree.is_connected());
            for e in p.tree.edge_ids() {
                prop_assert!(seen.insert(e));
            }
            for &m in &p.marks {
                prop_assert!(marks.insert(m));
            }
        }
    }

    #[test]
    fn text_formats_round_trip(g in multigraph(8, 12), t in marked_tree()) {
        prop_assert_eq!(MultiGraph::parse(&g.to_edge_list()).unwrap(), g);
        prop_assert_eq!(MarkedTree::parse(&t.to_text()).unwrap(), t);
    }

    #[test]
    fn treewidth_is_optimal_and_witnessed(g in multigraph(7, 14)) {
        let (w, d) = exact_treewidth(&g).unwrap();
        prop_assert_eq!(w, brute_treewidth(&g));
        prop_assert_eq!(verify_decomposition(&g, &d), Ok(()));
        let nice = to_nice(&d).unwrap();
        prop_assert_eq!(nice.check(), Ok(()));
        prop_assert_eq!(verify_decomposition(&g, &nice.decomposition), Ok(()));
        prop_assert_eq!(nice.decomposition.width(), d.width());
    }

    #[test]
    fn packing_at_most_covering(g in multigraph(8, 12), r in 2usize..=3) {
        let b = Budget::default();
        prop_assert!(edge_packing_exact(&g, r, &b).unwrap().0 <= edge_cover_exact(&g, r, &b).unwrap().0);
    }

    #[test]
    fn edge_numbers_add_over_blocks(a in multigraph(5, 8), b in multigraph(5, 8), r in 2usize..=3) {
        // glue a copy of `b` onto vertex 0 of `a`
        let shift = 100;
        let mut g = a.clone();
        for (_, u, v) in b.edges() {
            let m = |x: Vertex| if x == 0 { 0 } else { x + shift };
            g.add_edge(m(u), m(v)).unwrap();
        }
        let bud = Budget::default();
        let nu = |h: &MultiGraph| edge_packing_exact(h, r, &bud).unwrap().0;
        let tau = |h: &MultiGraph| edge_cover_exact(h, r, &bud).unwrap().0;
        prop_assert_eq!(nu(&g), nu(&a) + nu(&b));
        prop_assert_eq!(tau(&g), tau(&a) + tau(&b));
    }

    #[test]
    fn pipeline_returns_verified_objects(g in multigraph(8, 14), k in 1usize..=3, r in 2usize..=3) {
        match edge_ep_pipeline(&g, k, r, &Budget::default()).unwrap() {
            PipelineOutcome::Packing(w) => {
                prop_assert_eq!(w.len(), k);
                prop_assert_eq!(verify_packing(&g, &w, Some(r)), Ok(()));
            }
            PipelineOutcome::Cover(c) => {
                prop_assert!(!has_model(&g.remove_edges(&c.edges).unwrap(), r).unwrap());
                prop_assert!(c.packed < k);
            }
        }
    }

    #[test]
    fn recursive_cover_hits_and_is_not_below_optimum(g in multigraph(8, 12), r in 2usize..=3) {
        let b = Budget::default();
        let rc = vertex_hitting_recursive(&g, r, &b).unwrap();
        prop_assert!(!has_model(&g.remove_vertices(&rc.vertices).unwrap(), r).unwrap());
        prop_assert!(rc.vertices.len() >= vertex_cover_exact(&g, r, &b).unwrap().0);
    }

    #[test]
    fn vertex_to_edge_translation(g in multigraph(8, 12), r in 2usize..=3, k in 1usize..=3) {
        prop_assume!(g.max_neighbor_degree() < 2 * k * r);
        let (_, x) = vertex_cover_exact(&g, r, &Budget::default()).unwrap();
        let y = edge_hitting_from_vertex(&g, &x, k, r).unwrap();
        prop_assert!(y.len() <= g.max_degree() * x.len());
        prop_assert!(!has_model(&g.remove_edges(&y).unwrap(), r).unwrap());
    }
}
