//! Hitting sets: recursive vertex covers from balanced separations, their
//! translation to edge covers, the packing-or-cover pipeline, and gap
//! reports.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::degree_packing::{blocks_by_size, pack_blocks};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiGraph, Vertex};
use crate::model::{has_model, Disjointness, PackingWitness};
use crate::oracle::{edge_cover_exact, edge_packing_exact, vertex_cover_exact, vertex_packing_exact, Budget};
use crate::treewidth::separation_triple_exact;

/// Output of [`vertex_hitting_recursive`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecursiveCover {
    pub vertices: BTreeSet<Vertex>,
    /// Packing number of the input graph.
    pub packing: usize,
    /// Deepest recursion level reached, the top call being level 1.
    pub depth: usize,
    /// Longest chain of nested calls whose graphs pack at least two models.
    pub balanced_depth: usize,
}

/// A vertex set meeting every θ_r model: separate the graph in a balanced
/// way, keep the separator, and recurse on both sides.
pub fn vertex_hitting_recursive(g: &MultiGraph, r: usize, budget: &Budget) -> Result<RecursiveCover> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!("r must be at least 2, got {r}")));
    }
    let (packing, _) = vertex_packing_exact(g, r, budget)?;
    let mut out = RecursiveCover { vertices: BTreeSet::new(), packing, depth: 0, balanced_depth: 0 };
    let (depth, balanced) = recurse(g, r, budget, packing, &mut out.vertices)?;
    out.depth = depth;
    out.balanced_depth = balanced;

    let limit = levels_for(packing);
    if out.balanced_depth > limit {
        return Err(Error::Invariant(format!(
            "{} balanced levels for packing number {packing}, expected at most {limit}",
            out.balanced_depth
        )));
    }
    let rest = g.remove_vertices(&out.vertices)?;
    if has_model(&rest, r)? {
        return Err(Error::Invariant("recursive cover misses a model".into()));
    }
    Ok(out)
}

/// `ceil(log_{3/2} k) + 1`. Each balanced level shrinks the packing
/// number to at most two thirds.
fn levels_for(k: usize) -> usize {
    let mut levels = 0;
    let mut reach = 1.0f64;
    while reach < k as f64 {
        reach *= 1.5;
        levels += 1;
    }
    levels + 1
}

fn recurse(
    g: &MultiGraph,
    r: usize,
    budget: &Budget,
    packing: usize,
    cover: &mut BTreeSet<Vertex>,
) -> Result<(usize, usize)> {
    if packing == 0 {
        return Ok((0, 0));
    }
    let triple = separation_triple_exact(g, r, budget)?;
    cover.extend(triple.separator.iter().copied());
    let mut depth = 0;
    let mut balanced = 0;
    for (side, nu) in [(&triple.side1, triple.side1_packing), (&triple.side2, triple.side2_packing)] {
        let (d, b) = recurse(&g.induced(side)?, r, budget, nu, cover)?;
        depth = depth.max(d);
        balanced = balanced.max(b);
    }
    Ok((depth + 1, balanced + usize::from(packing >= 2)))
}

/// Every edge incident to `x`. Fails when `g` has a vertex with at least
/// `2kr` neighbors (such graphs pack `k` models instead) or when the result
/// misses a model, which happens exactly when `x` is not a hitting set.
pub fn edge_hitting_from_vertex(
    g: &MultiGraph,
    x: &BTreeSet<Vertex>,
    k: usize,
    r: usize,
) -> Result<BTreeSet<EdgeId>> {
    if k == 0 || r < 2 {
        return Err(Error::InvalidParameter(format!("need k >= 1 and r >= 2, got k={k}, r={r}")));
    }
    if let Some(&v) = x.iter().find(|v| !g.has_vertex(**v)) {
        return Err(Error::UnknownVertex(v));
    }
    let degree = g.max_neighbor_degree();
    if degree >= 2 * k * r {
        return Err(Error::Precondition(format!(
            "a vertex has {degree} >= 2kr = {} neighbors",
            2 * k * r
        )));
    }
    let y: BTreeSet<EdgeId> = g
        .edges()
        .filter(|&(_, u, v)| x.contains(&u) || x.contains(&v))
        .map(|(e, _, _)| e)
        .collect();
    if has_model(&g.remove_edges(&y)?, r)? {
        return Err(Error::NotHitting { r });
    }
    Ok(y)
}

/// How the vertex hitting set behind an edge cover was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverSource {
    Exact,
    Recursive,
}

/// Edge hitting set returned by the pipeline, with the vertex set it came
/// from and the number of models packed before giving up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCover {
    pub r: usize,
    pub edges: BTreeSet<EdgeId>,
    pub vertices: BTreeSet<Vertex>,
    pub source: CoverSource,
    pub packed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PipelineOutcome {
    Packing(PackingWitness),
    Cover(EdgeCover),
}

/// Either `k` edge-disjoint θ_r models or an edge set meeting all of them.
/// The vertex hitting set comes from the exact oracle.
pub fn edge_ep_pipeline(g: &MultiGraph, k: usize, r: usize, budget: &Budget) -> Result<PipelineOutcome> {
    edge_ep_pipeline_with(g, k, r, budget, CoverSource::Exact)
}

/// [`edge_ep_pipeline`] choosing how the vertex hitting set is computed.
///
/// Blocks are packed greedily, largest first. When fewer than `k` models
/// are found, a vertex hitting set `X` is computed per connected component
/// and the cover consists of the edges at `X` lying in blocks that contain
/// a model. Both outcomes are checked before returning.
pub fn edge_ep_pipeline_with(
    g: &MultiGraph,
    k: usize,
    r: usize,
    budget: &Budget,
    source: CoverSource,
) -> Result<PipelineOutcome> {
    if k == 0 || r < 2 {
        return Err(Error::InvalidParameter(format!("need k >= 1 and r >= 2, got k={k}, r={r}")));
    }
    let certificates = pack_blocks(g, k, r, budget)?;
    let packed = certificates.len();
    if packed >= k {
        let w = PackingWitness { certificates, disjointness: Disjointness::Edge };
        crate::model::verify_packing(g, &w, Some(r))
            .map_err(|d| Error::Invariant(format!("pipeline packing rejected: {d}")))?;
        return Ok(PipelineOutcome::Packing(w));
    }

    let cover = hitting_cover(g, r, budget, source)?;
    Ok(PipelineOutcome::Cover(EdgeCover { packed, ..cover }))
}

/// Edge set meeting every θ_r model: a vertex hitting set `X` per connected
/// component, then the edges at `X` inside blocks that contain a model.
/// Checked before returning; `packed` is left at zero.
pub fn hitting_cover(g: &MultiGraph, r: usize, budget: &Budget, source: CoverSource) -> Result<EdgeCover> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!("r must be at least 2, got {r}")));
    }
    let mut vertices = BTreeSet::new();
    for comp in g.connected_components() {
        let h = g.induced(&comp)?;
        if !has_model(&h, r)? {
            continue;
        }
        let x = match source {
            CoverSource::Exact => vertex_cover_exact(&h, r, budget)?.1,
            CoverSource::Recursive => vertex_hitting_recursive(&h, r, budget)?.vertices,
        };
        vertices.extend(x);
    }
    let mut edges = BTreeSet::new();
    for block in blocks_by_size(g) {
        if block.edge_count() >= r && has_model(&block, r)? {
            edges.extend(
                block
                    .edges()
                    .filter(|&(_, u, v)| vertices.contains(&u) || vertices.contains(&v))
                    .map(|(e, _, _)| e),
            );
        }
    }
    if has_model(&g.remove_edges(&edges)?, r)? {
        return Err(Error::Invariant("cover misses a model".into()));
    }
    Ok(EdgeCover { r, edges, vertices, source, packed: 0 })
}

/// Which growth rate the vertex-gap function is given.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "quadratic-in-k")]
    QuadraticInK,
    #[serde(rename = "quartic-in-k")]
    QuarticInK,
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quadratic-in-k" | "quadratic" => Ok(Self::QuadraticInK),
            "quartic-in-k" | "quartic" => Ok(Self::QuarticInK),
            _ => Err(Error::InvalidParameter(format!("unknown variant {s:?}"))),
        }
    }
}

/// Constants of the reported bound. `a` and `alpha` shape the polylog
/// factor, `c` is the geometric ratio of the recursion, and `k0` is the
/// threshold above which the ratio condition is assumed; it is reported
/// only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    #[serde(rename = "A")]
    pub a: f64,
    pub alpha: f64,
    pub c: f64,
    pub k0: u64,
    pub variant: Variant,
}

impl Default for BoundParams {
    fn default() -> Self {
        Self { a: 1.0, alpha: 1.0, c: 0.9, k0: 1, variant: Variant::QuadraticInK }
    }
}

impl BoundParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0 && self.alpha >= 0.0 && self.c > 0.0 && self.c < 1.0) {
            return Err(Error::InvalidParameter(
                "bound parameters need A > 0, alpha >= 0 and 0 < c < 1".into(),
            ));
        }
        Ok(())
    }

    /// Treewidth threshold forcing `k` vertex-disjoint models.
    pub fn h(&self, k: usize, r: usize) -> f64 {
        if k == 0 {
            return 0.0;
        }
        let (k, r) = (k as f64, r as f64);
        let poly = self.a * (2.0 * k * k * r * r).log2().powf(self.alpha);
        match self.variant {
            Variant::QuadraticInK => 4.0 * k * r * r * poly,
            Variant::QuarticInK => 2.0 * k * k * k * r * poly,
        }
    }

    /// Vertex gap: `h` times the geometric series in `c`.
    pub fn f(&self, k: usize, r: usize) -> f64 {
        self.h(k, r) / (1.0 - self.c)
    }

    /// Edge gap claimed for packing number `k`: `2kr * f(k)`, rounded up
    /// after absorbing floating-point noise.
    pub fn edge_bound(&self, k: usize, r: usize) -> u64 {
        let x = 2.0 * k as f64 * r as f64 * self.f(k, r);
        (x - 1e-9 * x.max(1.0)).ceil() as u64
    }
}

/// Exact edge packing and covering numbers next to the pipeline's cover and
/// the claimed bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub r: usize,
    pub k_packed: usize,
    pub tau_e: usize,
    pub cover_size: usize,
    pub bound_claimed: u64,
    pub violation: bool,
    pub bound_params: BoundParams,
}

/// Runs the pipeline with demand one above the exact edge packing number, so
/// it must return a cover, and compares that cover with the bound.
pub fn gap_report(g: &MultiGraph, r: usize, params: &BoundParams, budget: &Budget) -> Result<GapReport> {
    params.validate()?;
    let (k_packed, _) = edge_packing_exact(g, r, budget)?;
    let (tau_e, _) = edge_cover_exact(g, r, budget)?;
    let cover_size = match edge_ep_pipeline(g, k_packed + 1, r, budget)? {
        PipelineOutcome::Cover(c) => c.edges.len(),
        PipelineOutcome::Packing(_) => {
            return Err(Error::Invariant("packed more models than the exact maximum".into()))
        }
    };
    let bound_claimed = params.edge_bound(k_packed, r);
    Ok(GapReport {
        r,
        k_packed,
        tau_e,
        cover_size,
        bound_claimed,
        violation: cover_size as u64 > bound_claimed || k_packed > tau_e,
        bound_params: *params,
    })
}
