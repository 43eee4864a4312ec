//! Browser bindings for the theta-epsa demo page.
//!
//! Each operation has a plain `*_json` function returning a JSON string,
//! which the `#[wasm_bindgen]` exports wrap.

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::{json, Value};
use theta_epsa::generate::{self, SeededRng};
use theta_epsa::{
    edge_ep_pipeline, r_good_partition, separation_triple_exact, Budget, MarkedTree, MultiGraph,
    PipelineOutcome, Vertex,
};
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct GraphView {
    vertices: Vec<Vertex>,
    edges: Vec<[u32; 3]>,
}

fn view(g: &MultiGraph) -> GraphView {
    GraphView {
        vertices: g.vertices().collect(),
        edges: g.edges().map(|(e, u, v)| [e, u, v]).collect(),
    }
}

fn tree_view(t: &MarkedTree) -> Value {
    json!({ "graph": view(&t.tree), "marks": t.marks, "root": t.root })
}

fn text(e: impl ToString) -> String {
    e.to_string()
}

/// Edge list of a generated family member.
pub fn generate_text(family: &str, size: usize, seed: u64) -> Result<String, String> {
    let g = match family {
        "theta" => generate::theta(size),
        "cycle" => generate::cycle(size),
        "clique" => generate::clique(size),
        "wheel" => generate::wheel(size),
        "wall" => generate::wall(size, size),
        "random-biconnected" => generate::random_biconnected(size, size / 2, &mut SeededRng::new(seed)),
        other => return Err(format!("unknown family {other:?}")),
    }
    .map_err(text)?;
    Ok(g.to_edge_list())
}

/// Runs the packing-or-cover pipeline on an edge list.
pub fn pipeline_json(graph: &str, k: usize, r: usize) -> Result<String, String> {
    let g = MultiGraph::parse(graph).map_err(text)?;
    let result = match edge_ep_pipeline(&g, k, r, &Budget::default()).map_err(text)? {
        PipelineOutcome::Packing(w) => json!({
            "branch": "packing",
            "certificates": w.certificates,
        }),
        PipelineOutcome::Cover(c) => json!({
            "branch": "cover",
            "edges": c.edges,
            "vertices": c.vertices,
            "packed": c.packed,
        }),
    };
    Ok(json!({ "graph": view(&g), "result": result }).to_string())
}

/// Splits a random marked tree into a part holding `r..=2r` marks and the rest.
pub fn partition_json(n: usize, percent: usize, r: usize, seed: u64) -> Result<String, String> {
    let mut rng = SeededRng::new(seed);
    let t = generate::random_marked_tree(n, percent.min(100), &mut rng).map_err(text)?;
    let p = r_good_partition(&t, r).map_err(text)?;
    let first: BTreeSet<u32> = p.first.tree.edge_ids().collect();
    Ok(json!({
        "tree": tree_view(&t),
        "first": tree_view(&p.first),
        "second": tree_view(&p.second),
        "first_edges": first,
        "checked": p.check(&t).is_ok(),
    })
    .to_string())
}

/// Balanced separation of an edge list with respect to vertex-disjoint θ_r
/// packings.
pub fn separation_json(graph: &str, r: usize) -> Result<String, String> {
    let g = MultiGraph::parse(graph).map_err(text)?;
    let s = separation_triple_exact(&g, r, &Budget::default()).map_err(text)?;
    Ok(json!({ "graph": view(&g), "triple": s }).to_string())
}

#[wasm_bindgen]
pub fn generate(family: &str, size: usize, seed: u32) -> Result<String, JsValue> {
    generate_text(family, size, seed.into()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn pipeline(graph: &str, k: usize, r: usize) -> Result<String, JsValue> {
    pipeline_json(graph, k, r).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn partition(n: usize, percent: usize, r: usize, seed: u32) -> Result<String, JsValue> {
    partition_json(n, percent, r, seed.into()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn separation(graph: &str, r: usize) -> Result<String, JsValue> {
    separation_json(graph, r).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn pipeline_on_a_wheel_packs() {
        let g = generate_text("wheel", 4, 0).unwrap();
        let v = parse(&pipeline_json(&g, 1, 2).unwrap());
        assert_eq!(v["result"]["branch"], "packing");
        assert_eq!(v["graph"]["vertices"].as_array().unwrap().len(), 5);
    }

    #[test]
    fn pipeline_on_a_cycle_covers() {
        let g = generate_text("cycle", 5, 0).unwrap();
        let v = parse(&pipeline_json(&g, 2, 2).unwrap());
        assert_eq!(v["result"]["branch"], "cover");
    }

    #[test]
    fn partition_is_checked() {
        let v = parse(&partition_json(20, 80, 2, 3).unwrap());
        assert_eq!(v["checked"], true);
        assert!(partition_json(3, 0, 2, 3).is_err());
    }

    #[test]
    fn separation_of_two_triangles() {
        let v = parse(&separation_json("0 1\n1 2\n2 0\n2 3\n3 4\n4 5\n5 3\n", 2).unwrap());
        assert_eq!(v["triple"]["packing"], 2);
        assert!(separation_json("0 1\n", 2).is_err());
        assert!(generate_text("star", 3, 0).is_err());
    }
}
