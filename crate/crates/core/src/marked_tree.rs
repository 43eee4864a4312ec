//! Marked trees, r-good partitions, and extraction of edge-disjoint marked
//! subtrees.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiGraph, Vertex};

/// A tree whose vertices carry 0/1 marks; `marks` holds the vertices marked 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedTree {
    pub tree: MultiGraph,
    pub marks: BTreeSet<Vertex>,
    pub root: Option<Vertex>,
}

impl MarkedTree {
    pub fn new(tree: MultiGraph, marks: BTreeSet<Vertex>, root: Option<Vertex>) -> Result<Self> {
        if tree.is_empty() {
            return Err(Error::InvalidParameter("a tree needs at least one vertex".into()));
        }
        if !tree.is_connected() || tree.edge_count() + 1 != tree.vertex_count() {
            return Err(Error::InvalidParameter("graph is not a tree".into()));
        }
        if let Some(&v) = marks.iter().find(|v| !tree.has_vertex(**v)) {
            return Err(Error::UnknownVertex(v));
        }
        if let Some(v) = root.filter(|v| !tree.has_vertex(*v)) {
            return Err(Error::UnknownVertex(v));
        }
        Ok(Self { tree, marks, root })
    }

    /// Single vertex, no edges.
    pub fn singleton(v: Vertex, marked: bool) -> Self {
        let mut tree = MultiGraph::new();
        tree.add_vertex(v);
        let marks = if marked { BTreeSet::from([v]) } else { BTreeSet::new() };
        Self { tree, marks, root: Some(v) }
    }

    /// Number of marked vertices.
    pub fn mu(&self) -> usize {
        self.marks.len()
    }

    /// Parses an edge list with extra `marks: id id ...` and `root: id`
    /// lines. Vertices on the marks line must occur in the tree.
    pub fn parse(text: &str) -> Result<Self> {
        let mut edges = String::new();
        let mut marks = BTreeSet::new();
        let mut root = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.trim();
            let ids = |rest: &str| {
                rest.split_whitespace()
                    .map(|s| {
                        s.parse::<Vertex>().map_err(|_| Error::Parse {
                            line,
                            message: format!("expected a vertex id, found {s:?}"),
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            };
            if let Some(rest) = body.strip_prefix("marks:") {
                marks.extend(ids(rest)?);
                edges.push('\n');
            } else if let Some(rest) = body.strip_prefix("root:") {
                match ids(rest)?.as_slice() {
                    [v] => root = Some(*v),
                    _ => {
                        return Err(Error::Parse {
                            line,
                            message: "root line takes exactly one id".into(),
                        })
                    }
                }
                edges.push('\n');
            } else {
                edges.push_str(raw);
                edges.push('\n');
            }
        }
        Self::new(MultiGraph::parse(&edges)?, marks, root)
    }

    pub fn to_text(&self) -> String {
        let mut out = self.tree.to_edge_list();
        let marks: Vec<String> = self.marks.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "marks: {}", marks.join(" "));
        if let Some(root) = self.root {
            let _ = writeln!(out, "root: {root}");
        }
        out
    }
}

/// The pair produced by [`r_good_partition`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodPartition {
    pub first: MarkedTree,
    pub second: MarkedTree,
    pub r: usize,
}

/// Which of the four defining conditions a pair fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionDefect {
    NotSubtree(u8),
    EdgesNotPartitioned,
    FirstMarkCount(usize),
    RootMissing,
    MarksNotSplit,
}

impl GoodPartition {
    /// Checks conditions (i)-(iv) against the tree that was split.
    pub fn check(&self, original: &MarkedTree) -> Result<(), PartitionDefect> {
        let host = &original.tree;
        for (tag, part) in [(1u8, &self.first), (2, &self.second)] {
            let t = &part.tree;
            let edges_ok = t
                .edges()
                .all(|(e, u, v)| host.endpoints(e).ok() == Some((u, v)));
            let verts_ok = t.vertices().all(|v| host.has_vertex(v));
            let tree_ok = !t.is_empty() && t.is_connected() && t.edge_count() + 1 == t.vertex_count();
            if !(edges_ok && verts_ok && tree_ok) {
                return Err(PartitionDefect::NotSubtree(tag));
            }
        }
        let e1: BTreeSet<EdgeId> = self.first.tree.edge_ids().collect();
        let e2: BTreeSet<EdgeId> = self.second.tree.edge_ids().collect();
        let all: BTreeSet<EdgeId> = host.edge_ids().collect();
        if !e1.is_disjoint(&e2) || &e1 | &e2 != all {
            return Err(PartitionDefect::EdgesNotPartitioned);
        }
        let mu1 = self.first.mu();
        if mu1 < self.r || mu1 > 2 * self.r {
            return Err(PartitionDefect::FirstMarkCount(mu1));
        }
        if let Some(root) = original.root {
            if !self.second.tree.has_vertex(root) {
                return Err(PartitionDefect::RootMissing);
            }
        }
        let m1 = &self.first.marks;
        let m2 = &self.second.marks;
        let placed = m1.iter().all(|v| self.first.tree.has_vertex(*v))
            && m2.iter().all(|v| self.second.tree.has_vertex(*v));
        if !placed || !m1.is_disjoint(m2) || (m1 | m2) != original.marks {
            return Err(PartitionDefect::MarksNotSplit);
        }
        Ok(())
    }
}

/// Splits a marked tree with at least `2r` marks into two edge-disjoint
/// subtrees: the first holds between `r` and `2r` of the marks, the second
/// contains the root and the remaining marks.
pub fn r_good_partition(t: &MarkedTree, r: usize) -> Result<GoodPartition> {
    if r == 0 {
        return Err(Error::InvalidParameter("r must be positive".into()));
    }
    let root = t
        .root
        .ok_or_else(|| Error::Precondition("marked tree has no root".into()))?;
    if t.mu() < 2 * r {
        return Err(Error::Precondition(format!(
            "need at least {} marked vertices, found {}",
            2 * r,
            t.mu()
        )));
    }
    let (first, second) = split(&t.tree, &t.marks, root, r)?;
    Ok(GoodPartition {
        first: MarkedTree { root: None, ..first },
        second: MarkedTree { root: Some(root), ..second },
        r,
    })
}

fn split(
    tree: &MultiGraph,
    marks: &BTreeSet<Vertex>,
    root: Vertex,
    r: usize,
) -> Result<(MarkedTree, MarkedTree)> {
    let mu = marks.len();
    if mu < 2 * r {
        return Err(Error::Invariant(format!("recursion reached {mu} < 2r marks")));
    }
    if mu == 2 * r {
        let first = MarkedTree { tree: tree.clone(), marks: marks.clone(), root: None };
        return Ok((first, MarkedTree::singleton(root, false)));
    }

    let arms = arms(tree, root);
    match arms.as_slice() {
        [] => Err(Error::Invariant("single vertex with more than 2r marks".into())),
        [(u, link, _)] => {
            // Root is a leaf: split the rest at the neighbor and hang the root
            // back onto the second part.
            let rest = tree.remove_vertices(&BTreeSet::from([root]))?;
            let rest_marks = marks.iter().copied().filter(|&x| x != root).collect();
            let (first, mut second) = split(&rest, &rest_marks, *u, r)?;
            second.tree.insert_edge(*link, root, *u)?;
            if marks.contains(&root) {
                second.marks.insert(root);
            }
            Ok((first, second))
        }
        _ => {
            let measure = |comp: &BTreeSet<Vertex>| comp.intersection(marks).count();
            if let Some((u, _, comp)) = arms.iter().find(|(_, _, c)| measure(c) > 2 * r) {
                // A heavy arm: split it alone, rooted at its attachment vertex,
                // and give everything outside it to the second part.
                let sub = tree.induced(comp)?;
                let sub_marks = comp.intersection(marks).copied().collect();
                let (first, inner_second) = split(&sub, &sub_marks, *u, r)?;
                let outside: BTreeSet<Vertex> = tree.vertex_set().difference(comp).copied().collect();
                let second = merge(tree, marks, &inner_second, &outside, &sub)?;
                return Ok((first, second));
            }
            if let Some((u, _, comp)) = arms
                .iter()
                .find(|(_, _, c)| (r..=2 * r).contains(&measure(c)))
            {
                let first_tree = tree.induced(comp)?;
                let first_marks: BTreeSet<Vertex> = comp.intersection(marks).copied().collect();
                let mut second_verts: BTreeSet<Vertex> =
                    tree.vertex_set().difference(comp).copied().collect();
                second_verts.insert(*u);
                let second_edges: BTreeSet<EdgeId> = tree
                    .edge_ids()
                    .filter(|e| !first_tree.has_edge(*e))
                    .collect();
                let second = MarkedTree {
                    tree: tree.edge_subgraph(&second_edges)?,
                    marks: marks.difference(&first_marks).copied().collect(),
                    root: None,
                };
                let first = MarkedTree { tree: first_tree, marks: first_marks, root: None };
                return Ok((first, second));
            }
            // Every arm is light: take the shortest prefix of arms (ascending
            // attachment id) reaching r marks, joined through the root.
            let mut total = 0;
            let mut first_verts = BTreeSet::from([root]);
            for (_, _, comp) in &arms {
                total += measure(comp);
                first_verts.extend(comp.iter().copied());
                if total >= r {
                    break;
                }
            }
            let first_tree = tree.induced(&first_verts)?;
            let first_marks: BTreeSet<Vertex> = first_verts
                .iter()
                .copied()
                .filter(|&x| x != root && marks.contains(&x))
                .collect();
            let second_edges: BTreeSet<EdgeId> = tree
                .edge_ids()
                .filter(|e| !first_tree.has_edge(*e))
                .collect();
            let mut second_tree = tree.edge_subgraph(&second_edges)?;
            second_tree.add_vertex(root);
            let second = MarkedTree {
                tree: second_tree,
                marks: marks.difference(&first_marks).copied().collect(),
                root: None,
            };
            Ok((MarkedTree { tree: first_tree, marks: first_marks, root: None }, second))
        }
    }
}

/// The components of `tree - root` as `(attachment vertex, connecting edge,
/// vertex set)`, ordered by attachment vertex id.
fn arms(tree: &MultiGraph, root: Vertex) -> Vec<(Vertex, EdgeId, BTreeSet<Vertex>)> {
    let without = tree
        .remove_vertices(&BTreeSet::from([root]))
        .expect("root is a vertex");
    let comps = without.connected_components();
    let mut out: Vec<_> = tree
        .adjacency()
        .remove(&root)
        .unwrap_or_default()
        .into_iter()
        .map(|(u, e)| {
            let comp = comps
                .iter()
                .find(|c| c.contains(&u))
                .expect("neighbor lies in a component")
                .clone();
            (u, e, comp)
        })
        .collect();
    out.sort_by_key(|(u, _, _)| *u);
    out
}

/// Second part for the heavy-arm case: the arm's own second part plus
/// everything of `tree` outside the arm.
fn merge(
    tree: &MultiGraph,
    marks: &BTreeSet<Vertex>,
    inner_second: &MarkedTree,
    outside: &BTreeSet<Vertex>,
    arm: &MultiGraph,
) -> Result<MarkedTree> {
    let edges: BTreeSet<EdgeId> = tree
        .edge_ids()
        .filter(|e| !arm.has_edge(*e) || inner_second.tree.has_edge(*e))
        .collect();
    let mut t = tree.edge_subgraph(&edges)?;
    for &v in inner_second.tree.vertex_set() {
        t.add_vertex(v);
    }
    let mut m: BTreeSet<Vertex> = outside.intersection(marks).copied().collect();
    m.extend(inner_second.marks.iter().copied());
    Ok(MarkedTree { tree: t, marks: m, root: None })
}

/// `k` pairwise edge-disjoint subtrees each holding at least `r` marks,
/// obtained by peeling off `k - 1` first parts and keeping the remainder.
pub fn extract_subtrees(t: &MarkedTree, k: usize, r: usize) -> Result<Vec<MarkedTree>> {
    if k == 0 || r == 0 {
        return Err(Error::InvalidParameter("k and r must be positive".into()));
    }
    if t.mu() < 2 * k * r {
        return Err(Error::Precondition(format!(
            "need at least {} marked vertices, found {}",
            2 * k * r,
            t.mu()
        )));
    }
    let mut rest = t.clone();
    if rest.root.is_none() {
        rest.root = rest.tree.vertices().next();
    }
    let mut out = Vec::with_capacity(k);
    for _ in 1..k {
        let part = r_good_partition(&rest, r)?;
        out.push(part.first);
        rest = part.second;
    }
    out.push(rest);
    Ok(out)
}
