//! Tree decompositions: exact treewidth for small graphs, verification, nice
//! form, and balanced separations with respect to a packing number.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiGraph, Vertex};
use crate::oracle::{vertex_packing_exact, Budget};

/// Largest graph accepted by [`exact_treewidth`] unless a limit is given.
pub const DEFAULT_TREEWIDTH_LIMIT: usize = 14;

pub type NodeId = u32;

/// A tree `shape` whose nodes carry bags of host vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub shape: MultiGraph,
    pub bags: BTreeMap<NodeId, BTreeSet<Vertex>>,
}

/// Violated decomposition condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecompositionDefect {
    NotATree,
    MissingBag(NodeId),
    StrayBag(NodeId),
    UnknownVertex(Vertex),
    VertexUncovered(Vertex),
    EdgeUncovered(EdgeId),
    NotConnected(Vertex),
}

impl fmt::Display for DecompositionDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotATree => write!(f, "shape is not a tree"),
            Self::MissingBag(t) => write!(f, "node {t} has no bag"),
            Self::StrayBag(t) => write!(f, "bag given for unknown node {t}"),
            Self::UnknownVertex(v) => write!(f, "bag holds vertex {v} not in the graph"),
            Self::VertexUncovered(v) => write!(f, "vertex {v} is in no bag"),
            Self::EdgeUncovered(e) => write!(f, "edge {e} has no bag containing both endpoints"),
            Self::NotConnected(v) => write!(f, "bags containing vertex {v} do not form a subtree"),
        }
    }
}

impl TreeDecomposition {
    /// Largest bag size minus one; decompositions with only empty bags have
    /// width 0.
    pub fn width(&self) -> usize {
        self.bags.values().map(BTreeSet::len).max().unwrap_or(0).saturating_sub(1)
    }

    fn is_tree(&self) -> bool {
        !self.shape.is_empty()
            && self.shape.is_connected()
            && self.shape.edge_count() + 1 == self.shape.vertex_count()
    }
}

/// Checks the three decomposition conditions for `g`.
pub fn verify_decomposition(g: &MultiGraph, d: &TreeDecomposition) -> Result<(), DecompositionDefect> {
    if !d.is_tree() {
        return Err(DecompositionDefect::NotATree);
    }
    if let Some(t) = d.shape.vertices().find(|t| !d.bags.contains_key(t)) {
        return Err(DecompositionDefect::MissingBag(t));
    }
    if let Some(&t) = d.bags.keys().find(|t| !d.shape.has_vertex(**t)) {
        return Err(DecompositionDefect::StrayBag(t));
    }
    for bag in d.bags.values() {
        if let Some(&v) = bag.iter().find(|v| !g.has_vertex(**v)) {
            return Err(DecompositionDefect::UnknownVertex(v));
        }
    }
    for v in g.vertices() {
        if !d.bags.values().any(|b| b.contains(&v)) {
            return Err(DecompositionDefect::VertexUncovered(v));
        }
    }
    for (e, u, v) in g.edges() {
        if !d.bags.values().any(|b| b.contains(&u) && b.contains(&v)) {
            return Err(DecompositionDefect::EdgeUncovered(e));
        }
    }
    for v in g.vertices() {
        let holding: BTreeSet<NodeId> =
            d.bags.iter().filter(|(_, b)| b.contains(&v)).map(|(&t, _)| t).collect();
        let sub = d.shape.induced(&holding).expect("bag nodes are shape nodes");
        if !sub.is_connected() {
            return Err(DecompositionDefect::NotConnected(v));
        }
    }
    Ok(())
}

/// Treewidth with an optimal decomposition, for graphs of at most
/// [`DEFAULT_TREEWIDTH_LIMIT`] vertices.
pub fn exact_treewidth(g: &MultiGraph) -> Result<(usize, TreeDecomposition)> {
    exact_treewidth_within(g, DEFAULT_TREEWIDTH_LIMIT)
}

/// Treewidth by dynamic programming over sets of eliminated vertices: the
/// cost of eliminating `v` after the set `S` is the number of uneliminated
/// vertices reachable from `v` through `S`.
pub fn exact_treewidth_within(g: &MultiGraph, limit: usize) -> Result<(usize, TreeDecomposition)> {
    let n = g.vertex_count();
    if n > limit || n > 30 {
        return Err(Error::Scale(format!(
            "exact treewidth handles at most {} vertices, got {n}",
            limit.min(30)
        )));
    }
    let verts: Vec<Vertex> = g.vertices().collect();
    let mut nb = vec![0u32; n];
    for (_, u, v) in g.edges() {
        let (a, b) = (index_of(&verts, u), index_of(&verts, v));
        nb[a] |= 1 << b;
        nb[b] |= 1 << a;
    }
    let full: u32 = if n == 0 { 0 } else { (1u32 << n) - 1 };
    let reach = |s: u32, v: usize| -> u32 {
        // vertices outside s + v adjacent to the component of v within s + v
        let mut seen = 1u32 << v;
        let mut frontier = seen;
        let mut out = 0u32;
        while frontier != 0 {
            let mut next = 0u32;
            let mut f = frontier;
            while f != 0 {
                let i = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= nb[i];
            }
            next &= !seen;
            out |= next & !s;
            let inner = next & s;
            seen |= next;
            frontier = inner;
        }
        out & !(1u32 << v)
    };

    let size = 1usize << n;
    let mut best = vec![u8::MAX; size];
    let mut choice = vec![0u8; size];
    best[0] = 0;
    for s in 1..size as u32 {
        let mut bits = s;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let prev = s & !(1 << v);
            let cost = best[prev as usize].max(reach(prev, v).count_ones() as u8);
            if cost < best[s as usize] {
                best[s as usize] = cost;
                choice[s as usize] = v as u8;
            }
        }
    }

    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = choice[s as usize] as usize;
        order.push(v);
        s &= !(1 << v);
    }
    order.reverse();
    let d = from_elimination(&verts, &order, reach);
    Ok((best[full as usize] as usize, d))
}

fn index_of(verts: &[Vertex], v: Vertex) -> usize {
    verts.binary_search(&v).expect("endpoint is a vertex")
}

/// Decomposition from an elimination order: node `i` holds the `i`-th
/// eliminated vertex and its later neighbors in the fill-in graph, and hangs
/// below the node of the earliest eliminated of those neighbors.
fn from_elimination(verts: &[Vertex], order: &[usize], reach: impl Fn(u32, usize) -> u32) -> TreeDecomposition {
    let n = order.len();
    let mut shape = MultiGraph::new();
    let mut bags = BTreeMap::new();
    if n == 0 {
        shape.add_vertex(0);
        bags.insert(0, BTreeSet::new());
        return TreeDecomposition { shape, bags };
    }
    let mut position = vec![0; verts.len()];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut eliminated = 0u32;
    for (i, &v) in order.iter().enumerate() {
        let later = reach(eliminated, v);
        let mut bag = BTreeSet::from([verts[v]]);
        let mut parent = None::<usize>;
        let mut bits = later;
        while bits != 0 {
            let w = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            bag.insert(verts[w]);
            parent = Some(parent.map_or(position[w], |p| p.min(position[w])));
        }
        shape.add_vertex(i as NodeId);
        bags.insert(i as NodeId, bag);
        let parent = parent.or((i + 1 < n).then_some(n - 1));
        if let Some(p) = parent {
            shape.add_vertex(p as NodeId);
            shape.add_edge(i as NodeId, p as NodeId).expect("distinct nodes");
        }
        eliminated |= 1 << v;
    }
    TreeDecomposition { shape, bags }
}

/// Node kinds of a nice decomposition. Introduce and forget name the vertex
/// added to or removed from the child's bag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "vertex")]
pub enum NodeKind {
    Base,
    Introduce(Vertex),
    Forget(Vertex),
    Join,
}

impl NodeKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Base => "base",
            Self::Introduce(_) => "introduce",
            Self::Forget(_) => "forget",
            Self::Join => "join",
        }
    }
}

/// Rooted decomposition whose nodes are base leaves with empty bags,
/// introduce or forget nodes differing from their only child by one vertex,
/// or join nodes with two children of equal bags. The root bag is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    pub decomposition: TreeDecomposition,
    pub root: NodeId,
    pub kinds: BTreeMap<NodeId, NodeKind>,
    pub children: BTreeMap<NodeId, Vec<NodeId>>,
}

impl NiceTreeDecomposition {
    pub fn bag(&self, t: NodeId) -> &BTreeSet<Vertex> {
        &self.decomposition.bags[&t]
    }

    /// Nodes with every child before its parent.
    pub fn post_order(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.kinds.len());
        let mut stack = vec![(self.root, false)];
        while let Some((t, done)) = stack.pop() {
            if done {
                out.push(t);
            } else {
                stack.push((t, true));
                for &c in self.children[&t].iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    /// Checks the node-kind rules; the message names the offending node.
    pub fn check(&self) -> Result<(), String> {
        if !self.bag(self.root).is_empty() {
            return Err(format!("root {} has a nonempty bag", self.root));
        }
        if self.decomposition.shape.max_degree() > 3 {
            return Err("a node has more than three tree neighbors".into());
        }
        for (&t, kind) in &self.kinds {
            let kids = &self.children[&t];
            let bag = self.bag(t);
            let ok = match (*kind, kids.as_slice()) {
                (NodeKind::Base, []) => bag.is_empty(),
                (NodeKind::Introduce(u), [c]) => {
                    let cb = self.bag(*c);
                    !cb.contains(&u) && bag.contains(&u) && bag.len() == cb.len() + 1 && cb.is_subset(bag)
                }
                (NodeKind::Forget(u), [c]) => {
                    let cb = self.bag(*c);
                    cb.contains(&u) && !bag.contains(&u) && cb.len() == bag.len() + 1 && bag.is_subset(cb)
                }
                (NodeKind::Join, [a, b]) => self.bag(*a) == bag && self.bag(*b) == bag,
                _ => false,
            };
            if !ok {
                return Err(format!("node {t} violates the {} rule", kind.name()));
            }
        }
        Ok(())
    }
}

/// Converts a decomposition into nice form of the same width, rooted at its
/// lowest node id.
pub fn to_nice(d: &TreeDecomposition) -> Result<NiceTreeDecomposition> {
    if !d.is_tree() || d.shape.vertices().any(|t| !d.bags.contains_key(&t)) {
        return Err(Error::InvalidParameter("malformed tree decomposition".into()));
    }
    let adj = d.shape.adjacency();
    let mut b = NiceBuilder::default();
    let start = d.shape.vertices().next().expect("tree is nonempty");

    // children lists from a traversal rooted at `start`
    let mut kids: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    let mut order = vec![start];
    let mut seen = BTreeSet::from([start]);
    let mut i = 0;
    while i < order.len() {
        let t = order[i];
        i += 1;
        let mut cs: Vec<NodeId> = adj[&t].iter().map(|&(c, _)| c).filter(|c| seen.insert(*c)).collect();
        cs.sort_unstable();
        order.extend(cs.iter().copied());
        kids.insert(t, cs);
    }
    let mut top: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    for &t in order.iter().rev() {
        let bag = &d.bags[&t];
        let tops: Vec<NodeId> = kids[&t]
            .iter()
            .map(|c| b.chain(top[c], &d.bags[c], bag))
            .collect();
        let node = match tops.as_slice() {
            [] => {
                let base = b.node(BTreeSet::new(), NodeKind::Base, vec![]);
                b.chain(base, &BTreeSet::new(), bag)
            }
            [only] => *only,
            [first, rest @ ..] => rest.iter().fold(*first, |acc, &x| b.node(bag.clone(), NodeKind::Join, vec![acc, x])),
        };
        top.insert(t, node);
    }
    let root = b.chain(top[&start], &d.bags[&start], &BTreeSet::new());
    Ok(b.finish(root))
}

#[derive(Default)]
struct NiceBuilder {
    bags: BTreeMap<NodeId, BTreeSet<Vertex>>,
    kinds: BTreeMap<NodeId, NodeKind>,
    children: BTreeMap<NodeId, Vec<NodeId>>,
}

impl NiceBuilder {
    fn node(&mut self, bag: BTreeSet<Vertex>, kind: NodeKind, children: Vec<NodeId>) -> NodeId {
        let id = self.bags.len() as NodeId;
        self.bags.insert(id, bag);
        self.kinds.insert(id, kind);
        self.children.insert(id, children);
        id
    }

    /// Forget the vertices of `from` missing in `to`, then introduce the new
    /// ones, in increasing id order. Returns the node with bag `to`.
    fn chain(&mut self, mut at: NodeId, from: &BTreeSet<Vertex>, to: &BTreeSet<Vertex>) -> NodeId {
        let mut bag = from.clone();
        for &u in from.difference(to) {
            bag.remove(&u);
            at = self.node(bag.clone(), NodeKind::Forget(u), vec![at]);
        }
        for &u in to.difference(from) {
            bag.insert(u);
            at = self.node(bag.clone(), NodeKind::Introduce(u), vec![at]);
        }
        at
    }

    fn finish(self, root: NodeId) -> NiceTreeDecomposition {
        let mut shape = MultiGraph::new();
        for (&t, cs) in &self.children {
            shape.add_vertex(t);
            for &c in cs {
                shape.add_edge(c, t).expect("distinct nodes");
            }
        }
        NiceTreeDecomposition {
            decomposition: TreeDecomposition { shape, bags: self.bags },
            root,
            kinds: self.kinds,
            children: self.children,
        }
    }
}

#[derive(Serialize)]
struct NodeJson<'a> {
    id: NodeId,
    bag: &'a BTreeSet<Vertex>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kind: Option<&'static str>,
}

#[derive(Serialize)]
struct DecompositionJson<'a> {
    nodes: Vec<NodeJson<'a>>,
    edges: Vec<[NodeId; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    root: Option<NodeId>,
}

/// `{"nodes": [{"id", "bag", "kind"?}], "edges": [[a, b]], "root"?}`.
pub fn decomposition_json(d: &TreeDecomposition, nice: Option<&NiceTreeDecomposition>) -> serde_json::Value {
    let doc = DecompositionJson {
        nodes: d
            .bags
            .iter()
            .map(|(&id, bag)| NodeJson { id, bag, kind: nice.map(|n| n.kinds[&id].name()) })
            .collect(),
        edges: d.shape.edges().map(|(_, a, b)| [a, b]).collect(),
        root: nice.map(|n| n.root),
    };
    serde_json::to_value(doc).expect("plain data serializes")
}

/// A split of the vertex set into `side1`, `separator`, `side2` with no edge
/// between the sides, together with the packing numbers of both sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationTriple {
    pub side1: BTreeSet<Vertex>,
    pub separator: BTreeSet<Vertex>,
    pub side2: BTreeSet<Vertex>,
    /// Upper bound on the separator size: treewidth plus one.
    pub bound: usize,
    /// Packing number of the whole graph.
    pub packing: usize,
    pub side1_packing: usize,
    pub side2_packing: usize,
}

/// Balanced separation with respect to a packing number `oracle`, read off
/// a nice decomposition of minimum width.
///
/// For each node `t`, `H_t` is the set of vertices appearing strictly below
/// the bag of `t`, and `p(t)` the oracle value of `G[H_t]`. The lowest node
/// with `3p > 2k` is a forget or join node; the side below it becomes
/// `side1`. Every node-kind identity of `p` is checked on the way.
pub fn separation_triple(
    g: &MultiGraph,
    r: usize,
    oracle: &mut dyn FnMut(&MultiGraph) -> Result<usize>,
) -> Result<SeparationTriple> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!("r must be at least 2, got {r}")));
    }
    let k = oracle(g)?;
    if k == 0 {
        return Err(Error::Precondition("graph has no model to separate".into()));
    }
    let (tw, d) = exact_treewidth(g)?;
    let nice = to_nice(&d)?;

    let mut below: HashMap<NodeId, BTreeSet<Vertex>> = HashMap::new();
    let mut hidden: HashMap<NodeId, BTreeSet<Vertex>> = HashMap::new();
    let mut memo: HashMap<BTreeSet<Vertex>, usize> = HashMap::new();
    let mut p: HashMap<NodeId, usize> = HashMap::new();
    let mut eval = |set: &BTreeSet<Vertex>, oracle: &mut dyn FnMut(&MultiGraph) -> Result<usize>| -> Result<usize> {
        if let Some(&v) = memo.get(set) {
            return Ok(v);
        }
        let v = if set.is_empty() { 0 } else { oracle(&g.induced(set)?)? };
        memo.insert(set.clone(), v);
        Ok(v)
    };
    let broken = |t: NodeId, what: &str| Error::Invariant(format!("node {t}: {what}"));

    let mut critical = Vec::new();
    for t in nice.post_order() {
        let kids = &nice.children[&t];
        let mut all = nice.bag(t).clone();
        for c in kids {
            all.extend(below[c].iter().copied());
        }
        let h: BTreeSet<Vertex> = all.difference(nice.bag(t)).copied().collect();
        let value = eval(&h, oracle)?;
        let child_p: Vec<usize> = kids.iter().map(|c| p[c]).collect();
        if child_p.iter().any(|&c| c > value) {
            return Err(broken(t, "packing value decreases toward the root"));
        }
        match (nice.kinds[&t], child_p.as_slice()) {
            (NodeKind::Base, _) if value != 0 => return Err(broken(t, "base value is not zero")),
            (NodeKind::Introduce(_), [c]) if value != *c => {
                return Err(broken(t, "introduce changes the value"))
            }
            (NodeKind::Join, [a, b]) if value != a + b => {
                return Err(broken(t, "join value is not the sum of its children"))
            }
            _ => {}
        }
        if 3 * value > 2 * k && child_p.iter().all(|&c| 3 * c <= 2 * k) {
            critical.push(t);
        }
        below.insert(t, all);
        hidden.insert(t, h);
        p.insert(t, value);
    }
    if p[&nice.root] != k {
        return Err(broken(nice.root, "root value differs from the packing number"));
    }
    let [t] = critical.as_slice() else {
        return Err(Error::Invariant(format!("expected one critical node, found {}", critical.len())));
    };
    let t = *t;
    let kids = &nice.children[&t];
    let (separator, child) = match nice.kinds[&t] {
        NodeKind::Forget(_) => (nice.bag(kids[0]).clone(), kids[0]),
        NodeKind::Join => {
            let c = *kids
                .iter()
                .find(|c| 3 * p[c] >= k)
                .ok_or_else(|| broken(t, "no join child carries a third of the packing"))?;
            (nice.bag(t).clone(), c)
        }
        other => return Err(broken(t, &format!("critical node is a {} node", other.name()))),
    };
    let side1 = hidden[&child].clone();
    let side2: BTreeSet<Vertex> = g
        .vertices()
        .filter(|v| !side1.contains(v) && !separator.contains(v))
        .collect();
    if g.edges().any(|(_, u, v)| {
        (side1.contains(&u) && side2.contains(&v)) || (side1.contains(&v) && side2.contains(&u))
    }) {
        return Err(broken(t, "an edge joins the two sides"));
    }
    if separator.len() > tw + 1 || !side1.is_disjoint(&separator) {
        return Err(broken(t, "separator is too large or overlaps a side"));
    }
    let side1_packing = p[&child];
    let side2_packing = eval(&side2, oracle)?;
    if side1_packing + side2_packing > k {
        return Err(broken(t, "side packings exceed the total"));
    }
    Ok(SeparationTriple {
        side1,
        separator,
        side2,
        bound: tw + 1,
        packing: k,
        side1_packing,
        side2_packing,
    })
}

/// [`separation_triple`] with the exact vertex-disjoint packing oracle.
pub fn separation_triple_exact(g: &MultiGraph, r: usize, budget: &Budget) -> Result<SeparationTriple> {
    separation_triple(g, r, &mut |h| vertex_packing_exact(h, r, budget).map(|(n, _)| n))
}
