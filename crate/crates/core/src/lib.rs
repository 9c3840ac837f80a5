//! Complexes of directed forests and their symmetric quotients.
//!
//! A directed graph G gives rise to a simplicial complex whose vertices are
//! the edges of G and whose faces are the edge sets forming directed
//! forests. This crate builds those complexes, computes their exact integer
//! homology through Smith normal form, verifies shelling orders for graphs
//! with a complete source, evaluates closed-form homotopy types for string
//! and cycle families, and computes the homology of the quotient of the
//! complete-graph complex by the vertex-permuting action, both directly from
//! its cell structure and through the filtration spectral sequence.

#![forbid(unsafe_code)]

pub mod complex;
pub mod family;
pub mod graph;
pub mod homology;
pub mod matrix;
pub mod quotient;
pub mod shelling;
pub mod snf;

pub use complex::{
    cycle_independence_complex, forest_complex, path_independence_complex, purity_criterion,
    ComplexError, SimplicialComplex,
};
pub use family::{
    c_homotopy, delta_cycle_homotopy, delta_string_homotopy, is_essentially_tree, l_homotopy,
    reduce_essential_tree, FamilyError, HomotopyType, LHomotopy, TreeReduction,
};
pub use graph::{
    complete_double_graph, double_cycle_graph, double_string_graph, enumerate_forest_subsets,
    forest_subsets_by_size, is_directed_forest, parse_graph, string_with_tail, DirectedGraph,
    EdgeSubset, GraphError,
};
pub use homology::{
    chain_complex_of, homology, plain_chain_complex, relative_homology, ChainComplexZ,
    GradedHomology, HomologyError, HomologyGroup,
};
pub use shelling::{
    facet_label, has_complete_source, homology_facets, shelling_order, shelling_order_exists,
    verify_shelling, verify_shelling_with, FacetLabel, ShellingError, ShellingReport,
};
pub use snf::{rank_over_q, smith_normal_form, snf_diagonal, snf_rank, SnfError, SnfResult};
