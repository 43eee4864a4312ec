//! Dense re-indexing of a [`MultiGraph`] with bitmask sets, used by the
//! exponential searches.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiGraph, Vertex};

pub(crate) type Mask = u128;
pub(crate) const MASK_BITS: usize = 128;

pub(crate) fn bit(i: usize) -> Mask {
    1 << i
}

pub(crate) fn ones(mask: Mask) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

pub(crate) fn count(mask: Mask) -> usize {
    mask.count_ones() as usize
}

/// Index-based view: vertex `i` is the `i`-th smallest vertex id and edge `j`
/// the `j`-th smallest edge id, so index order agrees with id order.
#[derive(Debug, Clone)]
pub(crate) struct Dense {
    pub verts: Vec<Vertex>,
    pub edge_ids: Vec<EdgeId>,
    pub ends: Vec<(usize, usize)>,
    /// `(neighbor, edge)` pairs in edge order.
    pub adj: Vec<Vec<(usize, usize)>>,
    pub incident: Vec<Mask>,
}

impl Dense {
    pub fn new(g: &MultiGraph) -> Result<Self> {
        if g.vertex_count() > MASK_BITS || g.edge_count() > MASK_BITS {
            return Err(Error::Scale(format!(
                "dense search supports at most {MASK_BITS} vertices and edges, got {} and {}",
                g.vertex_count(),
                g.edge_count()
            )));
        }
        let verts: Vec<Vertex> = g.vertices().collect();
        let index = |v: Vertex| verts.binary_search(&v).expect("endpoint is a vertex");
        let mut edge_ids = Vec::new();
        let mut ends = Vec::new();
        let mut adj = vec![Vec::new(); verts.len()];
        let mut incident = vec![0; verts.len()];
        for (j, (e, u, v)) in g.edges().enumerate() {
            let (a, b) = (index(u), index(v));
            edge_ids.push(e);
            ends.push((a, b));
            adj[a].push((b, j));
            adj[b].push((a, j));
            incident[a] |= bit(j);
            incident[b] |= bit(j);
        }
        Ok(Self { verts, edge_ids, ends, adj, incident })
    }

    pub fn n(&self) -> usize {
        self.verts.len()
    }

    pub fn m(&self) -> usize {
        self.edge_ids.len()
    }

    pub fn all_vertices(&self) -> Mask {
        low_bits(self.n())
    }

    pub fn all_edges(&self) -> Mask {
        low_bits(self.m())
    }

    pub fn vertex_index(&self, v: Vertex) -> Option<usize> {
        self.verts.binary_search(&v).ok()
    }

    pub fn edge_index(&self, e: EdgeId) -> Option<usize> {
        self.edge_ids.binary_search(&e).ok()
    }

    pub fn vertex_ids(&self, mask: Mask) -> BTreeSet<Vertex> {
        ones(mask).map(|i| self.verts[i]).collect()
    }

    pub fn edge_id_set(&self, mask: Mask) -> BTreeSet<EdgeId> {
        ones(mask).map(|j| self.edge_ids[j]).collect()
    }

    /// Endpoints of the edges in `edges`.
    pub fn span(&self, edges: Mask) -> Mask {
        ones(edges).fold(0, |m, j| {
            let (a, b) = self.ends[j];
            m | bit(a) | bit(b)
        })
    }

    /// Edges with both endpoints in `verts`, restricted to `allowed`.
    pub fn inside(&self, verts: Mask, allowed: Mask) -> Mask {
        ones(allowed)
            .filter(|&j| {
                let (a, b) = self.ends[j];
                verts & bit(a) != 0 && verts & bit(b) != 0
            })
            .fold(0, |m, j| m | bit(j))
    }

    /// Neighbor mask of every vertex using only `allowed` edges.
    pub fn neighbor_masks(&self, allowed: Mask) -> Vec<Mask> {
        let mut nb = vec![0; self.n()];
        for j in ones(allowed) {
            let (a, b) = self.ends[j];
            nb[a] |= bit(b);
            nb[b] |= bit(a);
        }
        nb
    }
}

pub(crate) fn low_bits(k: usize) -> Mask {
    if k >= MASK_BITS {
        Mask::MAX
    } else {
        (1 << k) - 1
    }
}

/// Whether `set` induces a connected subgraph under the neighbor masks.
/// The empty set counts as connected.
pub(crate) fn is_connected_in(set: Mask, nb: &[Mask]) -> bool {
    if set == 0 {
        return true;
    }
    let start = set & set.wrapping_neg();
    let mut reached = start;
    let mut frontier = start;
    while frontier != 0 {
        let mut next = 0;
        for i in ones(frontier) {
            next |= nb[i];
        }
        next &= set & !reached;
        reached |= next;
        frontier = next;
    }
    reached == set
}

/// Calls `visit` on every connected subset of `within` that contains `seed`
/// and has at most `max_size` vertices, each exactly once. Returning `false`
/// from `visit` stops the enumeration.
pub(crate) fn for_each_connected_set(
    seed: usize,
    within: Mask,
    nb: &[Mask],
    max_size: usize,
    visit: &mut dyn FnMut(Mask) -> bool,
) -> bool {
    fn grow(
        set: Mask,
        frontier: Mask,
        excluded: Mask,
        within: Mask,
        nb: &[Mask],
        max_size: usize,
        visit: &mut dyn FnMut(Mask) -> bool,
    ) -> bool {
        if !visit(set) {
            return false;
        }
        if count(set) >= max_size {
            return true;
        }
        let mut excluded = excluded;
        for v in ones(frontier & !excluded) {
            let grown = set | bit(v);
            let next_frontier = (frontier | nb[v]) & within & !grown;
            if !grow(grown, next_frontier, excluded, within, nb, max_size, visit) {
                return false;
            }
            excluded |= bit(v);
        }
        true
    }
    if within & bit(seed) == 0 || max_size == 0 {
        return true;
    }
    let start = bit(seed);
    grow(start, nb[seed] & within & !start, 0, within, nb, max_size, visit)
}

/// Disjoint-set forest over edge-induced subgraphs, used for cyclomatic
/// numbers.
pub(crate) fn cyclomatic(dense: &Dense, edges: Mask) -> usize {
    let mut parent: Vec<usize> = (0..dense.n()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut dependent = 0;
    for j in ones(edges) {
        let (a, b) = dense.ends[j];
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            dependent += 1;
        } else {
            parent[ra] = rb;
        }
    }
    dependent
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn connected_sets_of_a_path_are_intervals() {
        let g = MultiGraph::from_edges(&[(0, 1), (1, 2), (2, 3)]).unwrap();
        let d = Dense::new(&g).unwrap();
        let nb = d.neighbor_masks(d.all_edges());
        let mut seen = Vec::new();
        for s in 0..4 {
            let within = d.all_vertices() & !low_bits(s);
            for_each_connected_set(s, within, &nb, 4, &mut |m| {
                seen.push(m);
                true
            });
        }
        seen.sort();
        // 4 + 3 + 2 + 1 intervals
        assert_eq!(seen.len(), 10);
        seen.dedup();
        assert_eq!(seen.len(), 10);
    }

    #[test]
    fn connected_sets_respect_size_cap_and_completeness() {
        // K4: every nonempty subset is connected.
        let g = MultiGraph::from_edges(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let d = Dense::new(&g).unwrap();
        let nb = d.neighbor_masks(d.all_edges());
        let mut n = 0;
        for_each_connected_set(0, d.all_vertices(), &nb, 2, &mut |_| {
            n += 1;
            true
        });
        assert_eq!(n, 4);
        let mut n = 0;
        for_each_connected_set(0, d.all_vertices(), &nb, 4, &mut |_| {
            n += 1;
            true
        });
        assert_eq!(n, 8);
    }

    #[test]
    fn cyclomatic_counts_independent_cycles() {
        let g = MultiGraph::from_edges(&[(0, 1), (0, 1), (0, 1), (1, 2), (2, 0)]).unwrap();
        let d = Dense::new(&g).unwrap();
        assert_eq!(cyclomatic(&d, d.all_edges()), 3);
        assert_eq!(cyclomatic(&d, 0b00011), 1);
    }
}
