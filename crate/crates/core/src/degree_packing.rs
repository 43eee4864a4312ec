//! Edge-disjoint θ_r packings built around a vertex with many neighbors,
//! and their combination over blocks.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiGraph};
use crate::marked_tree::{extract_subtrees, MarkedTree};
use crate::model::{has_model, verify_packing, Disjointness, PackingWitness, ThetaModelCertificate};
use crate::oracle::{edge_packing_exact, Budget};

/// `k` edge-disjoint θ_r certificates in a biconnected graph having a vertex
/// with at least `2kr` distinct neighbors.
///
/// The high-degree vertex `v` forms one side of every model. The other sides
/// are edge-disjoint subtrees of a Steiner tree for `N(v)` in `g - v`, each
/// holding at least `r` neighbors of `v`.
pub fn pack_via_high_degree(g: &MultiGraph, k: usize, r: usize) -> Result<PackingWitness> {
    if r < 2 || k == 0 {
        return Err(Error::InvalidParameter(format!("need k >= 1 and r >= 2, got k={k}, r={r}")));
    }
    if !g.is_biconnected() {
        return Err(Error::NotBiconnected);
    }
    let v = g.max_neighbor_degree_vertex().expect("biconnected graphs are nonempty");
    let nbrs = g.neighbors(v);
    if nbrs.len() < 2 * k * r {
        return Err(Error::Precondition(format!(
            "max neighbor count {} is below 2kr = {}",
            nbrs.len(),
            2 * k * r
        )));
    }
    let rest = g.remove_vertices(&BTreeSet::from([v]))?;
    let steiner = rest.minimal_spanning_subtree(&nbrs)?;
    let tree = MarkedTree::new(steiner, nbrs, None)?;
    let links = g.adjacency().remove(&v).unwrap_or_default();

    let mut certificates = Vec::with_capacity(k);
    for part in extract_subtrees(&tree, k, r)? {
        // marks are ordered by id, and adjacency by edge id
        let cross: BTreeSet<EdgeId> = part
            .marks
            .iter()
            .take(r)
            .map(|&m| {
                links
                    .iter()
                    .find(|&&(w, _)| w == m)
                    .map(|&(_, e)| e)
                    .expect("marked vertices are neighbors")
            })
            .collect();
        certificates.push(ThetaModelCertificate {
            r,
            part1: vec![v],
            part2: part.tree.vertices().collect(),
            inner1: Vec::new(),
            inner2: part.tree.edge_ids().collect(),
            cross: cross.into_iter().collect(),
        });
    }
    let witness = PackingWitness { certificates, disjointness: Disjointness::Edge };
    verify_packing(g, &witness, Some(r))
        .map_err(|d| Error::Invariant(format!("constructed packing rejected: {d}")))?;
    Ok(witness)
}

/// Block-by-block packing: blocks are visited in decreasing edge count and
/// each contributes up to the residual demand, through the high-degree
/// construction or the exact oracle. Returns `k` certificates when that many
/// were found, otherwise `None`.
pub fn pack_componentwise(
    g: &MultiGraph,
    k: usize,
    r: usize,
    budget: &Budget,
) -> Result<Option<PackingWitness>> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    let certificates = pack_blocks(g, k, r, budget)?;
    Ok((certificates.len() >= k)
        .then_some(PackingWitness { certificates, disjointness: Disjointness::Edge }))
}

/// Up to `k` edge-disjoint certificates gathered over the blocks of `g`.
pub(crate) fn pack_blocks(
    g: &MultiGraph,
    k: usize,
    r: usize,
    budget: &Budget,
) -> Result<Vec<ThetaModelCertificate>> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!("r must be at least 2, got {r}")));
    }
    let mut out = Vec::new();
    for block in blocks_by_size(g) {
        let residual = k - out.len();
        if residual == 0 {
            break;
        }
        out.extend(pack_block(&block, residual, r, budget)?);
    }
    Ok(out)
}

/// Blocks in decreasing edge count, ties by smallest edge id.
pub(crate) fn blocks_by_size(g: &MultiGraph) -> Vec<MultiGraph> {
    let mut blocks = g.biconnected_components();
    blocks.sort_by_key(|b| std::cmp::Reverse(b.edge_count()));
    blocks
}

fn pack_block(
    block: &MultiGraph,
    demand: usize,
    r: usize,
    budget: &Budget,
) -> Result<Vec<ThetaModelCertificate>> {
    if block.edge_count() < r {
        return Ok(Vec::new());
    }
    let by_degree = block.max_neighbor_degree() / (2 * r);
    if by_degree >= demand {
        return Ok(pack_via_high_degree(block, demand, r)?.certificates);
    }
    if budget.admits(block) {
        let (_, w) = edge_packing_exact(block, r, budget)?;
        return Ok(w.certificates.into_iter().take(demand).collect());
    }
    if by_degree > 0 {
        return Ok(pack_via_high_degree(block, by_degree, r)?.certificates);
    }
    if !has_model(block, r)? {
        return Ok(Vec::new());
    }
    budget.check(block).map(|_| Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Vertex;
    use crate::model::verify_model;

    fn wheel(rim: u32) -> MultiGraph {
        let mut edges: Vec<(Vertex, Vertex)> = (1..=rim).map(|i| (0, i)).collect();
        edges.extend((1..=rim).map(|i| (i, i % rim + 1)));
        MultiGraph::from_edges(&edges).unwrap()
    }

    fn k2n(n: u32) -> MultiGraph {
        let edges: Vec<_> = (2..2 + n).flat_map(|x| [(0, x), (1, x)]).collect();
        MultiGraph::from_edges(&edges).unwrap()
    }

    #[test]
    fn wheel_gives_hub_certificate() {
        for r in 2..=4 {
            let g = wheel(2 * r as u32);
            let w = pack_via_high_degree(&g, 1, r).unwrap();
            assert_eq!(w.len(), 1);
            assert_eq!(w.certificates[0].part1, vec![0]);
            verify_model(&g, &w.certificates[0]).unwrap();
        }
    }

    #[test]
    fn complete_bipartite_packs_k() {
        for (k, r) in [(1, 2), (2, 2), (3, 2), (2, 3)] {
            let g = k2n((2 * k * r) as u32);
            let w = pack_via_high_degree(&g, k, r).unwrap();
            assert_eq!(w.len(), k);
            for c in &w.certificates {
                assert_eq!(c.part1, vec![0]);
                assert_eq!(c.cross.len(), r);
            }
            verify_packing(&g, &w, Some(r)).unwrap();
        }
        // cross-check against the exact oracle on the smallest case
        let g = k2n(4);
        let (nu, _) = edge_packing_exact(&g, 2, &Budget::default()).unwrap();
        assert!(nu >= 1);
    }

    #[test]
    fn preconditions() {
        let path = MultiGraph::from_edges(&[(0, 1), (1, 2)]).unwrap();
        assert_eq!(pack_via_high_degree(&path, 1, 2), Err(Error::NotBiconnected));
        assert!(matches!(pack_via_high_degree(&wheel(3), 1, 2), Err(Error::Precondition(_))));
        assert!(pack_via_high_degree(&wheel(4), 1, 1).is_err());
    }

    #[test]
    fn two_wheels_at_a_cut_vertex() {
        let r = 2;
        let a = wheel(4);
        let mut g = a.clone();
        // second wheel: hub 10, rim 11..14, glued at rim vertex 1 = 11
        let rename = |x: Vertex| if x == 1 { 1 } else { x + 10 };
        for (_, u, v) in a.edges() {
            g.add_edge(rename(u), rename(v)).unwrap();
        }
        let w = pack_componentwise(&g, 2, r, &Budget::default()).unwrap().unwrap();
        assert_eq!(w.len(), 2);
        verify_packing(&g, &w, Some(r)).unwrap();
        // each W_4 block packs two edge-disjoint cycles
        assert_eq!(pack_componentwise(&g, 4, r, &Budget::default()).unwrap().unwrap().len(), 4);
        assert!(pack_componentwise(&g, 5, r, &Budget::default()).unwrap().is_none());
    }

    #[test]
    fn forest_packs_nothing() {
        let g = MultiGraph::from_edges(&[(0, 1), (1, 2), (1, 3), (5, 6)]).unwrap();
        assert_eq!(pack_componentwise(&g, 1, 2, &Budget::default()).unwrap(), None);
    }

    #[test]
    fn single_theta_block() {
        let g = MultiGraph::from_edges(&[(0, 1), (0, 1), (0, 1)]).unwrap();
        let w = pack_componentwise(&g, 1, 3, &Budget::default()).unwrap().unwrap();
        assert_eq!(w.len(), 1);
        verify_model(&g, &w.certificates[0]).unwrap();
    }
}
