//! Graph families and seeded random instances.
//!
//! Randomness comes from SplitMix64 (state advanced by
//! `0x9e3779b97f4a7c15`, output mixed with `0xbf58476d1ce4e5b9` and
//! `0x94d049bb133111eb`), seeded with the raw 64-bit seed. Bounded draws use
//! the multiply-shift map `(x * n) >> 64` on the 64-bit output `x`, so every
//! generator is reproducible from the seed alone.

use std::collections::BTreeSet;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::graph::{MultiGraph, Vertex};
use crate::marked_tree::MarkedTree;

/// Seeded generator with the draws the generators need.
#[derive(Debug, Clone)]
pub struct SeededRng(SplitMix64);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self(SplitMix64::from_seed(seed.to_le_bytes()))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform-ish draw from `0..n`; `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "empty range");
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    /// Draw from `lo..=hi`.
    pub fn between(&mut self, lo: usize, hi: usize) -> usize {
        lo + self.below(hi - lo + 1)
    }

    /// True with probability `num / den`.
    pub fn chance(&mut self, num: usize, den: usize) -> bool {
        self.below(den) < num
    }

    /// Fisher-Yates from the back.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}

/// Two vertices joined by `r` parallel edges.
pub fn theta(r: usize) -> Result<MultiGraph> {
    if r == 0 {
        return Err(Error::InvalidParameter("theta needs r >= 1".into()));
    }
    MultiGraph::from_edges(&vec![(0, 1); r])
}

pub fn cycle(n: usize) -> Result<MultiGraph> {
    if n < 3 {
        return Err(Error::InvalidParameter("cycle needs n >= 3".into()));
    }
    let n = n as Vertex;
    MultiGraph::from_edges(&(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
}

pub fn clique(n: usize) -> Result<MultiGraph> {
    if n == 0 {
        return Err(Error::InvalidParameter("clique needs n >= 1".into()));
    }
    let n = n as Vertex;
    let mut g = MultiGraph::from_edges(&(0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect::<Vec<_>>())?;
    g.add_vertex(0);
    Ok(g)
}

/// Hub 0 joined to every vertex of the rim cycle `1..=rim`; spokes first.
pub fn wheel(rim: usize) -> Result<MultiGraph> {
    if rim < 3 {
        return Err(Error::InvalidParameter("wheel needs a rim of at least 3".into()));
    }
    let rim = rim as Vertex;
    let mut edges: Vec<(Vertex, Vertex)> = (1..=rim).map(|i| (0, i)).collect();
    edges.extend((1..=rim).map(|i| (i, i % rim + 1)));
    MultiGraph::from_edges(&edges)
}

/// Planar wall with `height` rows of `width` bricks: a `height x 2*width`
/// grid keeping horizontal edges and every other vertical edge, with
/// dangling vertices pruned and vertices renumbered row by row.
pub fn wall(height: usize, width: usize) -> Result<MultiGraph> {
    if height < 1 || width < 1 {
        return Err(Error::InvalidParameter("wall needs height and width >= 1".into()));
    }
    let rows = height + 1;
    let cols = 2 * width + 2;
    let id = |i: usize, j: usize| (i * cols + j) as Vertex;
    let mut g = MultiGraph::new();
    for i in 0..rows {
        for j in 0..cols - 1 {
            g.add_edge(id(i, j), id(i, j + 1))?;
        }
        if i + 1 < rows {
            for j in (0..cols).filter(|j| (i + j) % 2 == 0) {
                g.add_edge(id(i, j), id(i + 1, j))?;
            }
        }
    }
    loop {
        let leaves: BTreeSet<Vertex> = g.vertices().filter(|&v| g.degree(v) <= 1).collect();
        if leaves.is_empty() {
            break;
        }
        g = g.remove_vertices(&leaves)?;
    }
    Ok(relabel(&g))
}

/// Renumbers vertices `0..n` in id order and edges `0..m` in id order.
pub fn relabel(g: &MultiGraph) -> MultiGraph {
    let verts: Vec<Vertex> = g.vertices().collect();
    let index = |v: Vertex| verts.binary_search(&v).expect("endpoint is a vertex") as Vertex;
    let mut out = MultiGraph::new();
    for i in 0..verts.len() {
        out.add_vertex(i as Vertex);
    }
    for (_, u, v) in g.edges() {
        out.add_edge(index(u), index(v)).expect("no self-loops in the source");
    }
    out
}

/// Hamiltonian cycle through a shuffled vertex order plus `chords` random
/// extra edges (parallel edges allowed). Always biconnected.
pub fn random_biconnected(n: usize, chords: usize, rng: &mut SeededRng) -> Result<MultiGraph> {
    if n < 3 {
        return Err(Error::InvalidParameter("random-biconnected needs n >= 3".into()));
    }
    let mut order: Vec<Vertex> = (0..n as Vertex).collect();
    rng.shuffle(&mut order);
    let mut g = MultiGraph::new();
    for i in 0..n {
        g.add_edge(order[i], order[(i + 1) % n])?;
    }
    for _ in 0..chords {
        let (u, v) = distinct_pair(n, rng);
        g.add_edge(u, v)?;
    }
    Ok(g)
}

/// `m` edges between uniformly drawn distinct endpoints on `n` vertices,
/// all vertices kept.
pub fn random_multigraph(n: usize, m: usize, rng: &mut SeededRng) -> Result<MultiGraph> {
    if n < 2 && m > 0 {
        return Err(Error::InvalidParameter("edges need at least two vertices".into()));
    }
    let mut g = MultiGraph::new();
    for v in 0..n as Vertex {
        g.add_vertex(v);
    }
    for _ in 0..m {
        let (u, v) = distinct_pair(n, rng);
        g.add_edge(u, v)?;
    }
    Ok(g)
}

fn distinct_pair(n: usize, rng: &mut SeededRng) -> (Vertex, Vertex) {
    let u = rng.below(n);
    let mut v = rng.below(n - 1);
    if v >= u {
        v += 1;
    }
    (u as Vertex, v as Vertex)
}

/// Random recursive tree: vertex `i` attaches to a uniform earlier vertex.
pub fn random_tree(n: usize, rng: &mut SeededRng) -> Result<MultiGraph> {
    if n == 0 {
        return Err(Error::InvalidParameter("tree needs n >= 1".into()));
    }
    let mut g = MultiGraph::new();
    g.add_vertex(0);
    for i in 1..n {
        g.add_edge(rng.below(i) as Vertex, i as Vertex)?;
    }
    Ok(g)
}

/// Random tree on `n` vertices, each marked with probability `percent`%,
/// rooted at a uniform vertex.
pub fn random_marked_tree(n: usize, percent: usize, rng: &mut SeededRng) -> Result<MarkedTree> {
    let tree = random_tree(n, rng)?;
    let marks = tree.vertices().filter(|_| rng.chance(percent, 100)).collect();
    let root = rng.below(n) as Vertex;
    MarkedTree::new(tree, marks, Some(root))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // first outputs of SplitMix64 seeded with 0
        let mut rng = SeededRng::new(0);
        assert_eq!(rng.next_u64(), 0xe220a8397b1dcdaf);
        assert_eq!(rng.next_u64(), 0x6e789e6aa1b965f4);
    }

    #[test]
    fn bounded_draws_stay_in_range() {
        let mut rng = SeededRng::new(42);
        for n in 1..50 {
            assert!(rng.below(n) < n);
        }
        let mut v: Vec<u32> = (0..20).collect();
        rng.shuffle(&mut v);
        let mut sorted = v.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..20).collect::<Vec<_>>());
    }

    #[test]
    fn families() {
        let t = theta(5).unwrap();
        assert_eq!((t.vertex_count(), t.edge_count()), (2, 5));
        let w = wheel(6).unwrap();
        assert_eq!(w.degree(0), 6);
        assert_eq!(w.edge_count(), 12);
        assert_eq!(clique(5).unwrap().edge_count(), 10);
        assert_eq!(clique(1).unwrap().vertex_count(), 1);
        assert_eq!(cycle(7).unwrap().edge_count(), 7);
        assert!(cycle(2).is_err());
    }

    #[test]
    fn walls_are_subcubic_and_biconnected() {
        for (h, w) in [(1, 1), (2, 3), (3, 3), (4, 2)] {
            let g = wall(h, w).unwrap();
            assert!(g.max_degree() <= 3);
            assert!(g.vertices().all(|v| g.degree(v) >= 2));
            assert!(g.is_biconnected(), "wall {h}x{w}");
        }
        // one brick is a 6-cycle
        let one = wall(1, 1).unwrap();
        assert_eq!((one.vertex_count(), one.edge_count()), (6, 6));
    }

    #[test]
    fn random_biconnected_is_fixed_by_seed() {
        let a = random_biconnected(10, 5, &mut SeededRng::new(7)).unwrap();
        let b = random_biconnected(10, 5, &mut SeededRng::new(7)).unwrap();
        assert_eq!(a, b);
        assert!(a.is_biconnected());
        assert_eq!(a.biconnected_components().len(), 1);
        let c = random_biconnected(10, 5, &mut SeededRng::new(8)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn random_trees_are_trees() {
        let mut rng = SeededRng::new(1);
        for n in 1..30 {
            let t = random_marked_tree(n, 50, &mut rng).unwrap();
            assert_eq!(t.tree.edge_count() + 1, n);
        }
    }
}
