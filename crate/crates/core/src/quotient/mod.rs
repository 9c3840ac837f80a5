//! Quotient of the forest complex of the complete double graph by the
//! symmetric group permuting vertices: cells, boundary, direct homology, and
//! the filtration spectral sequence pipeline.

mod cells;
mod forest;
mod spectral;

pub use cells::{
    boundary_cell, cell_chain_complex, cell_chain_complex_with, enumerate_cells,
    enumerate_cells_with, quotient_homology, quotient_homology_with, CellBasis, CellLimits,
    QuotientCellComplex,
};
pub use forest::{
    admissible_forest_table, canonical_labeled, canonical_unlabeled, forest_symmetry_group,
    forest_symmetry_group_guarded, forests_on, forests_with_edges, is_admissible,
    permutation_is_even, rooted_trees, AdmissibleForestTable, CanonTree, EdgeSymmetryGroup,
    LabeledForest, QuotientError, UnlabeledForest, SYMMETRY_EDGE_GUARD, TABLE_GUARD,
};
pub use spectral::{
    d1_page, d1_page_with, e1_homology, e1_homology_with, filtration_entry,
    filtration_entry_by_forests, filtration_entry_of, labeling_complex, labeling_homology,
    verify_diagonal_concentration, E1Page, LabelingComplex,
};
