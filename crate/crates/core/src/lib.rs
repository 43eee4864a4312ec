//! Certified packing and covering of θ_r minor models in multigraphs.

mod dense;
pub mod degree_packing;
pub mod error;
pub mod generate;
pub mod graph;
pub mod hitting;
pub mod marked_tree;
pub mod model;
pub mod oracle;
pub mod treewidth;

pub use degree_packing::{pack_componentwise, pack_via_high_degree};
pub use error::{Error, Result};
pub use generate::SeededRng;
pub use graph::{EdgeId, MultiGraph, Vertex};
pub use hitting::{
    edge_ep_pipeline, edge_ep_pipeline_with, edge_hitting_from_vertex, gap_report, hitting_cover, vertex_hitting_recursive,
    BoundParams, CoverSource, EdgeCover, GapReport, PipelineOutcome, RecursiveCover, Variant,
};
pub use marked_tree::{extract_subtrees, r_good_partition, GoodPartition, MarkedTree, PartitionDefect};
pub use model::{
    find_model, has_model, is_model, verify_model, verify_packing, Disjointness, ModelDefect,
    PackingDefect, PackingWitness, ThetaModelCertificate,
};
pub use oracle::{edge_cover_exact, edge_packing_exact, vertex_cover_exact, vertex_packing_exact, Budget};
pub use treewidth::{
    decomposition_json, exact_treewidth, exact_treewidth_within, separation_triple,
    separation_triple_exact, to_nice, verify_decomposition, DecompositionDefect, NiceTreeDecomposition,
    NodeKind, SeparationTriple, TreeDecomposition,
};
