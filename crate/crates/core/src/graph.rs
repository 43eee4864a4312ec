//! Multigraphs with stable edge identities.
//!
//! Every algorithm in the crate acts on [`MultiGraph`]. Edge ids survive
//! subgraph extraction, so a certificate computed on a block or an induced
//! subgraph can be checked against the host graph without translation.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};

pub type Vertex = u32;
pub type EdgeId = u32;

/// Undirected multigraph without self-loops.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MultiGraph {
    vertices: BTreeSet<Vertex>,
    /// Endpoints are stored with the smaller id first.
    edges: BTreeMap<EdgeId, (Vertex, Vertex)>,
}

impl MultiGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from an edge list; edge `i` of the slice gets id `i`.
    pub fn from_edges(edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut g = Self::new();
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, v: Vertex) {
        self.vertices.insert(v);
    }

    /// Adds an edge with the next free id (one past the current maximum).
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<EdgeId> {
        let id = self.edges.keys().next_back().map_or(0, |&e| e + 1);
        self.insert_edge(id, u, v)?;
        Ok(id)
    }

    /// Adds an edge under an explicit id. Fails on self-loops and id reuse.
    pub fn insert_edge(&mut self, id: EdgeId, u: Vertex, v: Vertex) -> Result<()> {
        if u == v {
            return Err(Error::SelfLoop { line: 0, vertex: u });
        }
        if self.edges.contains_key(&id) {
            return Err(Error::InvalidParameter(format!("duplicate edge id {id}")));
        }
        self.vertices.insert(u);
        self.vertices.insert(v);
        self.edges.insert(id, (u.min(v), u.max(v)));
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.vertices.iter().copied()
    }

    pub fn vertex_set(&self) -> &BTreeSet<Vertex> {
        &self.vertices
    }

    /// Edges in increasing id order as `(id, u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, Vertex, Vertex)> + '_ {
        self.edges.iter().map(|(&e, &(u, v))| (e, u, v))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.keys().copied()
    }

    pub fn has_vertex(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    pub fn has_edge(&self, e: EdgeId) -> bool {
        self.edges.contains_key(&e)
    }

    pub fn endpoints(&self, e: EdgeId) -> Result<(Vertex, Vertex)> {
        self.edges.get(&e).copied().ok_or(Error::UnknownEdge(e))
    }

    /// Edges incident to `v`, in id order.
    pub fn incident_edges(&self, v: Vertex) -> Vec<EdgeId> {
        self.edges()
            .filter(|&(_, a, b)| a == v || b == v)
            .map(|(e, _, _)| e)
            .collect()
    }

    /// Degree counting parallel edges separately.
    pub fn degree(&self, v: Vertex) -> usize {
        self.edges.values().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn neighbors(&self, v: Vertex) -> BTreeSet<Vertex> {
        self.edges
            .values()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Number of distinct neighbors, `|N(v)|`.
    pub fn neighbor_count(&self, v: Vertex) -> usize {
        self.neighbors(v).len()
    }

    /// Maximum multiplicity degree, 0 on the empty graph.
    pub fn max_degree(&self) -> usize {
        let mut deg: BTreeMap<Vertex, usize> = BTreeMap::new();
        for &(u, v) in self.edges.values() {
            *deg.entry(u).or_default() += 1;
            *deg.entry(v).or_default() += 1;
        }
        deg.values().copied().max().unwrap_or(0)
    }

    /// Maximum number of distinct neighbors over all vertices.
    pub fn max_neighbor_degree(&self) -> usize {
        self.adjacency()
            .values()
            .map(|adj| adj.iter().map(|&(w, _)| w).collect::<BTreeSet<_>>().len())
            .max()
            .unwrap_or(0)
    }

    /// Lowest-id vertex whose neighbor count is maximal.
    pub fn max_neighbor_degree_vertex(&self) -> Option<Vertex> {
        let mut best: Option<(usize, Vertex)> = None;
        for v in self.vertices() {
            let d = self.neighbor_count(v);
            if best.is_none_or(|(bd, _)| d > bd) {
                best = Some((d, v));
            }
        }
        best.map(|(_, v)| v)
    }

    /// Adjacency lists `(neighbor, edge id)` sorted by edge id. Every vertex
    /// has an entry, isolated ones an empty list.
    pub fn adjacency(&self) -> BTreeMap<Vertex, Vec<(Vertex, EdgeId)>> {
        let mut adj: BTreeMap<Vertex, Vec<(Vertex, EdgeId)>> =
            self.vertices.iter().map(|&v| (v, Vec::new())).collect();
        for (&e, &(u, v)) in &self.edges {
            adj.get_mut(&u).expect("endpoint present").push((v, e));
            adj.get_mut(&v).expect("endpoint present").push((u, e));
        }
        adj
    }

    /// Vertex sets of the connected components, ordered by smallest vertex.
    pub fn connected_components(&self) -> Vec<BTreeSet<Vertex>> {
        let adj = self.adjacency();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &s in &self.vertices {
            if !seen.insert(s) {
                continue;
            }
            let mut comp = BTreeSet::from([s]);
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &(w, _) in &adj[&u] {
                    if seen.insert(w) {
                        comp.insert(w);
                        queue.push_back(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// True for graphs with at most one component (the empty graph included).
    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Connected, at least two vertices, no cut vertex. A bundle of parallel
    /// edges on two vertices counts as biconnected.
    pub fn is_biconnected(&self) -> bool {
        self.vertex_count() >= 2
            && self.is_connected()
            && self.biconnected_components().len() == 1
    }

    /// Subgraph induced by `keep`; unknown vertices are an error.
    pub fn induced(&self, keep: &BTreeSet<Vertex>) -> Result<Self> {
        if let Some(&v) = keep.iter().find(|v| !self.vertices.contains(v)) {
            return Err(Error::UnknownVertex(v));
        }
        Ok(Self {
            vertices: keep.clone(),
            edges: self
                .edges
                .iter()
                .filter(|(_, (u, v))| keep.contains(u) && keep.contains(v))
                .map(|(&e, &uv)| (e, uv))
                .collect(),
        })
    }

    /// Subgraph formed by the given edges and their endpoints.
    pub fn edge_subgraph(&self, keep: &BTreeSet<EdgeId>) -> Result<Self> {
        let mut g = Self::new();
        for &e in keep {
            let (u, v) = self.endpoints(e)?;
            g.vertices.insert(u);
            g.vertices.insert(v);
            g.edges.insert(e, (u, v));
        }
        Ok(g)
    }

    /// Deletes vertices together with their incident edges.
    pub fn remove_vertices(&self, drop: &BTreeSet<Vertex>) -> Result<Self> {
        if let Some(&v) = drop.iter().find(|v| !self.vertices.contains(v)) {
            return Err(Error::UnknownVertex(v));
        }
        let keep = self.vertices.difference(drop).copied().collect();
        self.induced(&keep)
    }

    /// Deletes edges; all vertices are kept.
    pub fn remove_edges(&self, drop: &BTreeSet<EdgeId>) -> Result<Self> {
        if let Some(&e) = drop.iter().find(|e| !self.edges.contains_key(e)) {
            return Err(Error::UnknownEdge(e));
        }
        let mut g = self.clone();
        g.edges.retain(|e, _| !drop.contains(e));
        Ok(g)
    }

    /// Contracts `e`. The merged vertex keeps the smaller endpoint id; edges
    /// that would become self-loops are dropped, parallel edges are kept.
    pub fn contract_edge(&self, e: EdgeId) -> Result<Self> {
        let (keep, gone) = self.endpoints(e)?;
        let mut g = Self::new();
        for &v in &self.vertices {
            if v != gone {
                g.vertices.insert(v);
            }
        }
        for (&id, &(u, v)) in &self.edges {
            let u = if u == gone { keep } else { u };
            let v = if v == gone { keep } else { v };
            if u != v {
                g.edges.insert(id, (u.min(v), u.max(v)));
            }
        }
        Ok(g)
    }

    /// Edge partition into blocks (maximal biconnected subgraphs). Bridges
    /// are their own two-vertex blocks and isolated vertices are omitted.
    /// Blocks are ordered by their smallest edge id.
    pub fn biconnected_components(&self) -> Vec<MultiGraph> {
        let blocks = self.block_edge_sets();
        blocks
            .into_iter()
            .map(|edges| self.edge_subgraph(&edges).expect("edges taken from self"))
            .collect()
    }

    /// Edge ids of every block, ordered by smallest edge id.
    pub fn block_edge_sets(&self) -> Vec<BTreeSet<EdgeId>> {
        let adj = self.adjacency();
        let mut disc: BTreeMap<Vertex, usize> = BTreeMap::new();
        let mut low: BTreeMap<Vertex, usize> = BTreeMap::new();
        let mut edge_stack: Vec<EdgeId> = Vec::new();
        let mut blocks = Vec::new();
        let mut time = 0usize;

        // Iterative Tarjan; frames are (vertex, edge used to enter, next adj index).
        for &root in &self.vertices {
            if disc.contains_key(&root) {
                continue;
            }
            disc.insert(root, time);
            low.insert(root, time);
            time += 1;
            let mut stack: Vec<(Vertex, Option<EdgeId>, usize)> = vec![(root, None, 0)];
            while let Some(frame) = stack.last_mut() {
                let (u, via, idx) = *frame;
                if idx < adj[&u].len() {
                    frame.2 += 1;
                    let (w, e) = adj[&u][idx];
                    if Some(e) == via {
                        continue;
                    }
                    if let Some(&dw) = disc.get(&w) {
                        if dw < disc[&u] {
                            edge_stack.push(e);
                            let l = low[&u].min(dw);
                            low.insert(u, l);
                        }
                    } else {
                        edge_stack.push(e);
                        disc.insert(w, time);
                        low.insert(w, time);
                        time += 1;
                        stack.push((w, Some(e), 0));
                    }
                } else {
                    stack.pop();
                    if let Some(&(parent, _, _)) = stack.last() {
                        let lu = low[&u];
                        if lu < low[&parent] {
                            low.insert(parent, lu);
                        }
                        if lu >= disc[&parent] {
                            let via = via.expect("non-root frame has an entry edge");
                            let mut block = BTreeSet::new();
                            while let Some(f) = edge_stack.pop() {
                                block.insert(f);
                                if f == via {
                                    break;
                                }
                            }
                            blocks.push(block);
                        }
                    }
                }
            }
        }
        blocks.sort_by_key(|b| *b.iter().next().expect("blocks are nonempty"));
        blocks
    }

    /// Inclusion-minimal subtree spanning `terminals`: a BFS tree grown from
    /// the smallest terminal (lowest edge id first) with non-terminal leaves
    /// pruned repeatedly.
    pub fn minimal_spanning_subtree(&self, terminals: &BTreeSet<Vertex>) -> Result<MultiGraph> {
        let Some(&start) = terminals.iter().next() else {
            return Err(Error::Precondition("terminal set is empty".into()));
        };
        if let Some(&v) = terminals.iter().find(|v| !self.vertices.contains(v)) {
            return Err(Error::UnknownVertex(v));
        }
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let adj = self.adjacency();
        let mut tree = MultiGraph::new();
        tree.add_vertex(start);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &(w, e) in &adj[&u] {
                if !tree.has_vertex(w) {
                    tree.insert_edge(e, u, w)?;
                    queue.push_back(w);
                }
            }
        }
        loop {
            let adj = tree.adjacency();
            let leaves: BTreeSet<Vertex> = adj
                .iter()
                .filter(|(v, a)| a.len() <= 1 && !terminals.contains(v))
                .map(|(&v, _)| v)
                .collect();
            if leaves.is_empty() {
                break;
            }
            tree = tree.remove_vertices(&leaves)?;
        }
        Ok(tree)
    }

    /// Parses the edge-list format: one `u v` pair per line, `#` comments,
    /// an optional `p <n> <m>` header, and single-id lines declaring
    /// isolated vertices. Edge ids follow line order starting at 0.
    pub fn parse(text: &str) -> Result<Self> {
        let mut g = Self::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = body.split_whitespace().collect();
            if fields[0] == "p" {
                continue;
            }
            let parse_id = |s: &str| {
                s.parse::<Vertex>().map_err(|_| Error::Parse {
                    line,
                    message: format!("expected an unsigned vertex id, found {s:?}"),
                })
            };
            match fields.as_slice() {
                [v] => g.add_vertex(parse_id(v)?),
                [u, v] => {
                    let (u, v) = (parse_id(u)?, parse_id(v)?);
                    if u == v {
                        return Err(Error::SelfLoop { line, vertex: u });
                    }
                    g.add_edge(u, v)?;
                }
                _ => {
                    return Err(Error::Parse {
                        line,
                        message: format!("expected `u v`, found {body:?}"),
                    })
                }
            }
        }
        Ok(g)
    }

    /// Serializes as an edge list sorted by edge id, followed by one line per
    /// isolated vertex.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (_, u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        let touched: BTreeSet<Vertex> = self.edges.values().flat_map(|&(u, v)| [u, v]).collect();
        for v in self.vertices.difference(&touched) {
            let _ = writeln!(out, "{v}");
        }
        out
    }
}
