//! Exact (exponential-time) packing and covering numbers for θ_r models.
//!
//! All four oracles work from the list of inclusion-minimal models: every
//! model contains a minimal one, so a maximum packing may use minimal models
//! only and a set hits every model iff it hits every minimal model. Edge
//! quantities are computed block by block, vertex quantities component by
//! component.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::dense::{count, cyclomatic, ones, Dense, Mask};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiGraph, Vertex};
use crate::model::{certificate_for, minimal_models, Disjointness, MinimalModel, PackingWitness, MODEL_CAP};

/// Size limits for the exact searches. An instance is in budget when it is
/// within the vertex limit or within the edge limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_vertices: usize,
    pub max_edges: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self { max_vertices: 12, max_edges: 24 }
    }
}

impl Budget {
    pub fn new(max_vertices: usize, max_edges: usize) -> Result<Self> {
        if max_vertices == 0 || max_edges == 0 {
            return Err(Error::InvalidParameter("budget limits must be positive".into()));
        }
        Ok(Self { max_vertices, max_edges })
    }

    pub fn admits(&self, g: &MultiGraph) -> bool {
        g.vertex_count() <= self.max_vertices || g.edge_count() <= self.max_edges
    }

    pub fn check(&self, g: &MultiGraph) -> Result<()> {
        if self.admits(g) {
            Ok(())
        } else {
            Err(Error::Scale(format!(
                "{} vertices and {} edges exceed the budget of {} vertices or {} edges",
                g.vertex_count(),
                g.edge_count(),
                self.max_vertices,
                self.max_edges
            )))
        }
    }
}

struct Prepared {
    dense: Dense,
    models: Vec<MinimalModel>,
}

fn prepare(g: &MultiGraph, r: usize, budget: &Budget) -> Result<Prepared> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!("r must be at least 2, got {r}")));
    }
    budget.check(g)?;
    let dense = Dense::new(g)?;
    let models = minimal_models(&dense, r, MODEL_CAP)?;
    Ok(Prepared { dense, models })
}

/// Groups model indices by a partition of the vertex or edge index space.
fn group_by(models: &[MinimalModel], key: impl Fn(&MinimalModel) -> usize) -> Vec<Vec<usize>> {
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (i, m) in models.iter().enumerate() {
        groups.entry(key(m)).or_default().push(i);
    }
    groups.into_values().collect()
}

fn block_groups(g: &MultiGraph, p: &Prepared) -> Vec<Vec<usize>> {
    let blocks = g.block_edge_sets();
    let mut block_of = vec![0; p.dense.m()];
    for (b, edges) in blocks.iter().enumerate() {
        for &e in edges {
            block_of[p.dense.edge_index(e).expect("edge of g")] = b;
        }
    }
    group_by(&p.models, |m| block_of[m.edges.trailing_zeros() as usize])
}

fn component_groups(g: &MultiGraph, p: &Prepared) -> Vec<Vec<usize>> {
    let comps = g.connected_components();
    let mut comp_of = vec![0; p.dense.n()];
    for (c, vs) in comps.iter().enumerate() {
        for &v in vs {
            comp_of[p.dense.vertex_index(v).expect("vertex of g")] = c;
        }
    }
    group_by(&p.models, |m| comp_of[m.verts.trailing_zeros() as usize])
}

/// ν′: maximum number of edge-disjoint θ_r models, with a witness.
pub fn edge_packing_exact(g: &MultiGraph, r: usize, budget: &Budget) -> Result<(usize, PackingWitness)> {
    let p = prepare(g, r, budget)?;
    let mut chosen = Vec::new();
    for group in block_groups(g, &p) {
        let sets: Vec<Mask> = group.iter().map(|&i| p.models[i].edges).collect();
        let dense = &p.dense;
        let picked = max_disjoint(&sets, &|alive_union| cyclomatic(dense, alive_union) / (r - 1));
        chosen.extend(picked.into_iter().map(|k| group[k]));
    }
    witness(&p, chosen, r, Disjointness::Edge)
}

/// ν: maximum number of vertex-disjoint θ_r models, with a witness.
pub fn vertex_packing_exact(
    g: &MultiGraph,
    r: usize,
    budget: &Budget,
) -> Result<(usize, PackingWitness)> {
    let p = prepare(g, r, budget)?;
    let mut chosen = Vec::new();
    for group in component_groups(g, &p) {
        let sets: Vec<Mask> = group.iter().map(|&i| p.models[i].verts).collect();
        // Each minimal model has at least two vertices (r edges on two
        // vertices), and vertex-disjoint models are edge-disjoint.
        let min_size = sets.iter().map(|&s| count(s)).min().unwrap_or(2);
        let edge_of: Vec<Mask> = group.iter().map(|&i| p.models[i].edges).collect();
        let dense = &p.dense;
        let bound = |alive_union: Mask| {
            let edges = sets
                .iter()
                .zip(&edge_of)
                .filter(|(s, _)| *s & !alive_union == 0)
                .fold(0, |m, (_, e)| m | e);
            (count(alive_union) / min_size).min(cyclomatic(dense, edges) / (r - 1))
        };
        let picked = max_disjoint(&sets, &bound);
        chosen.extend(picked.into_iter().map(|k| group[k]));
    }
    witness(&p, chosen, r, Disjointness::Vertex)
}

/// τ′: minimum number of edges meeting every θ_r model, with a witness.
pub fn edge_cover_exact(g: &MultiGraph, r: usize, budget: &Budget) -> Result<(usize, BTreeSet<EdgeId>)> {
    let p = prepare(g, r, budget)?;
    let mut cover: Mask = 0;
    for group in block_groups(g, &p) {
        let sets: Vec<Mask> = group.iter().map(|&i| p.models[i].edges).collect();
        cover |= min_hitting_set(&sets);
    }
    Ok((count(cover), p.dense.edge_id_set(cover)))
}

/// τ: minimum number of vertices meeting every θ_r model, with a witness.
pub fn vertex_cover_exact(g: &MultiGraph, r: usize, budget: &Budget) -> Result<(usize, BTreeSet<Vertex>)> {
    let p = prepare(g, r, budget)?;
    let mut cover: Mask = 0;
    for group in component_groups(g, &p) {
        let sets: Vec<Mask> = group.iter().map(|&i| p.models[i].verts).collect();
        cover |= min_hitting_set(&sets);
    }
    Ok((count(cover), p.dense.vertex_ids(cover)))
}

fn witness(
    p: &Prepared,
    mut chosen: Vec<usize>,
    r: usize,
    disjointness: Disjointness,
) -> Result<(usize, PackingWitness)> {
    chosen.sort_unstable();
    let certificates = chosen
        .iter()
        .map(|&i| certificate_for(&p.dense, &p.models[i], r))
        .collect::<Result<Vec<_>>>()?;
    Ok((certificates.len(), PackingWitness { certificates, disjointness }))
}

/// Maximum family of pairwise disjoint sets, by branch and bound on the
/// smallest uncovered element: either some set containing it is taken, or
/// the element is discarded. `bound` gives an upper bound on how many
/// disjoint sets fit inside a union of alive sets.
pub(crate) fn max_disjoint(sets: &[Mask], bound: &dyn Fn(Mask) -> usize) -> Vec<usize> {
    struct Search<'a> {
        sets: &'a [Mask],
        bound: &'a dyn Fn(Mask) -> usize,
        best: Vec<usize>,
        current: Vec<usize>,
    }
    impl Search<'_> {
        fn run(&mut self, alive: Vec<usize>) {
            if self.current.len() > self.best.len() {
                self.best = self.current.clone();
            }
            let union = alive.iter().fold(0, |m, &i| m | self.sets[i]);
            if union == 0 || self.current.len() + (self.bound)(union) <= self.best.len() {
                return;
            }
            let pivot = union & union.wrapping_neg();
            for &i in alive.iter().filter(|&&i| self.sets[i] & pivot != 0) {
                let rest: Vec<usize> = alive
                    .iter()
                    .copied()
                    .filter(|&j| self.sets[j] & self.sets[i] == 0)
                    .collect();
                self.current.push(i);
                self.run(rest);
                self.current.pop();
            }
            let rest: Vec<usize> = alive.into_iter().filter(|&j| self.sets[j] & pivot == 0).collect();
            self.run(rest);
        }
    }
    let mut search = Search { sets, bound, best: Vec::new(), current: Vec::new() };
    search.run((0..sets.len()).collect());
    search.best
}

/// Minimum hitting set by iterative deepening on the size; each level
/// branches on the elements of a smallest unhit set.
pub(crate) fn min_hitting_set(sets: &[Mask]) -> Mask {
    fn disjoint_lower_bound(sets: &[Mask], unhit: &[usize]) -> usize {
        let mut taken: Mask = 0;
        let mut n = 0;
        let mut order = unhit.to_vec();
        order.sort_by_key(|&i| count(sets[i]));
        for i in order {
            if sets[i] & taken == 0 {
                taken |= sets[i];
                n += 1;
            }
        }
        n
    }
    fn search(sets: &[Mask], unhit: &[usize], forbidden: Mask, budget: usize, chosen: Mask) -> Option<Mask> {
        if unhit.is_empty() {
            return Some(chosen);
        }
        if budget == 0 || disjoint_lower_bound(sets, unhit) > budget {
            return None;
        }
        let &target = unhit
            .iter()
            .min_by_key(|&&i| count(sets[i] & !forbidden))
            .expect("nonempty");
        let mut forbidden = forbidden;
        for x in ones(sets[target] & !forbidden) {
            let rest: Vec<usize> = unhit.iter().copied().filter(|&i| sets[i] >> x & 1 == 0).collect();
            if rest.iter().all(|&i| sets[i] & !(forbidden | 1 << x) != 0) {
                if let Some(found) = search(sets, &rest, forbidden, budget - 1, chosen | 1 << x) {
                    return Some(found);
                }
            }
            forbidden |= 1 << x;
        }
        None
    }
    let unhit: Vec<usize> = (0..sets.len()).collect();
    let mut k = disjoint_lower_bound(sets, &unhit);
    loop {
        if let Some(found) = search(sets, &unhit, 0, k, 0) {
            return found;
        }
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k_n(n: u32) -> MultiGraph {
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                e.push((i, j));
            }
        }
        MultiGraph::from_edges(&e).unwrap()
    }

    /// Brute force over all sub-families of a small list.
    fn brute_max_disjoint(sets: &[Mask]) -> usize {
        let mut best = 0;
        for pick in 0u32..1 << sets.len() {
            let mut union = 0;
            let mut ok = true;
            for (i, &s) in sets.iter().enumerate() {
                if pick >> i & 1 == 1 {
                    ok &= union & s == 0;
                    union |= s;
                }
            }
            if ok {
                best = best.max(pick.count_ones() as usize);
            }
        }
        best
    }

    fn brute_min_hitting(sets: &[Mask], universe: usize) -> usize {
        (0u32..1 << universe)
            .filter(|&h| sets.iter().all(|&s| s & h as Mask != 0))
            .map(|h| h.count_ones() as usize)
            .min()
            .unwrap_or(0)
    }

    #[test]
    fn set_packing_and_hitting_match_brute_force() {
        let families: Vec<Vec<Mask>> = vec![
            vec![0b0011, 0b0110, 0b1100, 0b1001],
            vec![0b111, 0b100, 0b011000, 0b110000, 0b1000001],
            vec![0b1, 0b10, 0b100, 0b1000],
            vec![0b110110, 0b011011, 0b101101, 0b000111, 0b111000],
        ];
        for sets in families {
            let got = max_disjoint(&sets, &|u| count(u));
            assert_eq!(got.len(), brute_max_disjoint(&sets));
            let h = min_hitting_set(&sets);
            assert!(sets.iter().all(|&s| s & h != 0));
            assert_eq!(count(h), brute_min_hitting(&sets, 8));
        }
    }

    #[test]
    fn k4_and_k5_values() {
        let b = Budget::default();
        assert_eq!(edge_packing_exact(&k_n(4), 2, &b).unwrap().0, 1);
        assert_eq!(edge_cover_exact(&k_n(4), 2, &b).unwrap().0, 3);
        assert_eq!(edge_packing_exact(&k_n(5), 2, &b).unwrap().0, 3);
        assert_eq!(edge_cover_exact(&k_n(5), 2, &b).unwrap().0, 6);
        assert_eq!(vertex_packing_exact(&k_n(5), 2, &b).unwrap().0, 1);
        assert_eq!(vertex_cover_exact(&k_n(4), 2, &b).unwrap().0, 2);
    }

    #[test]
    fn theta_values() {
        let b = Budget::default();
        let theta6 = MultiGraph::from_edges(&[(0, 1); 6]).unwrap();
        let (n, w) = edge_packing_exact(&theta6, 3, &b).unwrap();
        assert_eq!(n, 2);
        assert_eq!(w.disjointness, Disjointness::Edge);
        assert_eq!(edge_cover_exact(&theta6, 3, &b).unwrap().0, 4);
        assert_eq!(vertex_packing_exact(&theta6, 3, &b).unwrap().0, 1);
        assert_eq!(vertex_cover_exact(&theta6, 3, &b).unwrap().0, 1);
    }

    #[test]
    fn forest_values_are_zero() {
        let b = Budget::default();
        let f = MultiGraph::from_edges(&[(0, 1), (1, 2), (3, 4)]).unwrap();
        assert_eq!(edge_packing_exact(&f, 2, &b).unwrap().0, 0);
        assert!(edge_cover_exact(&f, 2, &b).unwrap().1.is_empty());
        assert_eq!(vertex_packing_exact(&f, 3, &b).unwrap().0, 0);
        assert!(vertex_cover_exact(&f, 3, &b).unwrap().1.is_empty());
    }

    #[test]
    fn budget_is_enforced() {
        let big = k_n(8); // 8 vertices fits the vertex limit
        let tight = Budget::new(5, 10).unwrap();
        assert!(matches!(edge_packing_exact(&big, 2, &tight), Err(Error::Scale(_))));
        assert!(Budget::new(0, 3).is_err());
        assert!(edge_packing_exact(&big, 1, &Budget::default()).is_err());
    }
}
