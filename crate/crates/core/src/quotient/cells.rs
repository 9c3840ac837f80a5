//! The cell structure of the quotient of the forest complex of the complete
//! double graph by the vertex-permuting symmetric group action.
//!
//! Cells are canonical edge-labeled forests on n unlabeled vertices; a cell
//! with p+1 distinct label values has dimension p. The boundary either
//! merges two adjacent label values or deletes the edges carrying the top
//! label, with alternating signs; faces are canonicalized and coincident
//! faces accumulate their coefficients.

use std::collections::{BTreeMap, HashSet};

use crate::homology::{homology, ChainComplexZ, GradedHomology};
use crate::matrix::SparseIntMatrix;

use super::forest::{
    canonical_labeled, forests_on, LabeledForest, QuotientError, UnlabeledForest,
};

/// Guards for quotient-cell enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellLimits {
    pub max_n: usize,
    pub max_cells: usize,
}

impl Default for CellLimits {
    fn default() -> Self {
        CellLimits {
            max_n: 7,
            max_cells: 2_000_000,
        }
    }
}

/// Cells of the quotient complex grouped by dimension, each group sorted in
/// canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellBasis {
    pub n: usize,
    pub by_dim: Vec<Vec<LabeledForest>>,
}

impl CellBasis {
    pub fn total_cells(&self) -> usize {
        self.by_dim.iter().map(|g| g.len()).sum()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.by_dim.iter().map(|g| g.len()).collect()
    }

    pub fn index_of(&self, cell: &LabeledForest) -> Option<usize> {
        self.by_dim
            .get(cell.dim())?
            .binary_search(cell)
            .ok()
    }

    /// One line per cell: `dim | canonical_string`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (dim, group) in self.by_dim.iter().enumerate() {
            for cell in group {
                out.push_str(&format!("{dim} | {cell}\n"));
            }
        }
        out
    }
}

/// All labelings of one forest's edges that are surjections onto
/// {1, ..., m} for some m, canonicalized and deduplicated.
pub(crate) fn cells_of_forest(forest: &UnlabeledForest) -> Vec<LabeledForest> {
    let (n, edges) = forest.representative();
    let k = edges.len();
    let mut seen: HashSet<LabeledForest> = HashSet::new();
    if k == 0 {
        return Vec::new();
    }
    let mut labels = vec![0u32; k];
    // every surjection onto {1..m} is its own labeling (the order of label
    // values is the order of forests in the chain), so enumerate all of
    // them, pruning branches that can no longer cover the missing values
    fn assign(
        pos: usize,
        m: u32,
        used_mask: u32,
        labels: &mut Vec<u32>,
        n: usize,
        edges: &[(usize, usize)],
        seen: &mut HashSet<LabeledForest>,
    ) {
        let k = labels.len();
        let missing = (m as usize) - (used_mask.count_ones() as usize);
        if missing > k - pos {
            return;
        }
        if pos == k {
            let cell =
                canonical_labeled(n, edges, labels).expect("representative is a forest");
            seen.insert(cell);
            return;
        }
        for value in 1..=m {
            labels[pos] = value;
            assign(
                pos + 1,
                m,
                used_mask | (1 << (value - 1)),
                labels,
                n,
                edges,
                seen,
            );
        }
    }
    for m in 1..=k as u32 {
        assign(0, m, 0, &mut labels, n, &edges, &mut seen);
    }
    let mut out: Vec<LabeledForest> = seen.into_iter().collect();
    out.sort();
    out
}

/// Enumerate the cells of the quotient complex on n vertices.
pub fn enumerate_cells(n: usize) -> Result<CellBasis, QuotientError> {
    enumerate_cells_with(n, CellLimits::default())
}

pub fn enumerate_cells_with(n: usize, limits: CellLimits) -> Result<CellBasis, QuotientError> {
    if n < 2 {
        return Err(QuotientError::TooSmall { n });
    }
    if n > limits.max_n {
        return Err(QuotientError::CellGuard {
            n,
            max_n: limits.max_n,
        });
    }
    let mut by_dim: Vec<Vec<LabeledForest>> = Vec::new();
    let mut total = 0usize;
    for forest in forests_on(n) {
        for cell in cells_of_forest(&forest) {
            let d = cell.dim();
            if by_dim.len() <= d {
                by_dim.resize(d + 1, Vec::new());
            }
            by_dim[d].push(cell);
            total += 1;
            if total > limits.max_cells {
                return Err(QuotientError::CellBudget {
                    max_cells: limits.max_cells,
                });
            }
        }
    }
    for group in &mut by_dim {
        group.sort();
        group.dedup();
    }
    Ok(CellBasis { n, by_dim })
}

/// Signed faces of a cell under the full boundary operator: the label-merge
/// terms and the top-label deletion term, canonicalized and accumulated.
pub fn boundary_cell(cell: &LabeledForest) -> Vec<(LabeledForest, i64)> {
    let mut acc: BTreeMap<LabeledForest, i64> = BTreeMap::new();
    for (face, coeff) in merge_faces(cell) {
        *acc.entry(face).or_insert(0) += coeff;
    }
    if let Some(face) = deletion_face(cell) {
        // the deletion term is the i = p+1 summand with sign (-1)^{2p+2} = +1
        *acc.entry(face).or_insert(0) += 1;
    }
    acc.into_iter().filter(|&(_, c)| c != 0).collect()
}

/// The label-merge part of the boundary (the truncated boundary operator):
/// for i = 1..p, merge label values i and i+1, with sign (-1)^{p+i+1}.
pub(crate) fn merge_faces(cell: &LabeledForest) -> Vec<(LabeledForest, i64)> {
    let p = cell.dim();
    let (n, labeled_edges) = cell.representative();
    let edges: Vec<(usize, usize)> = labeled_edges.iter().map(|&(u, v, _)| (u, v)).collect();
    let mut out = Vec::new();
    for i in 1..=p {
        let merged: Vec<u32> = labeled_edges
            .iter()
            .map(|&(_, _, l)| if l > i as u32 { l - 1 } else { l })
            .collect();
        let face = canonical_labeled(n, &edges, &merged).expect("merge keeps the forest");
        let sign = if (p + i + 1) % 2 == 0 { 1 } else { -1 };
        out.push((face, sign));
    }
    out
}

/// The top-label deletion face (absent for 0-cells, where the boundary is
/// zero in the unaugmented complex).
pub(crate) fn deletion_face(cell: &LabeledForest) -> Option<LabeledForest> {
    let p = cell.dim();
    if p == 0 {
        return None;
    }
    let top = cell.n_labels();
    let (n, labeled_edges) = cell.representative();
    let mut edges = Vec::new();
    let mut labels = Vec::new();
    for &(u, v, l) in &labeled_edges {
        if l != top {
            edges.push((u, v));
            labels.push(l);
        }
    }
    Some(canonical_labeled(n, &edges, &labels).expect("sub-forest is a forest"))
}

/// The quotient cell complex as a chain complex (unaugmented, degree 0 =
/// 0-cells), together with its basis.
#[derive(Debug, Clone)]
pub struct QuotientCellComplex {
    pub basis: CellBasis,
    pub complex: ChainComplexZ,
}

pub fn cell_chain_complex(n: usize) -> Result<QuotientCellComplex, QuotientError> {
    cell_chain_complex_with(n, CellLimits::default())
}

pub fn cell_chain_complex_with(
    n: usize,
    limits: CellLimits,
) -> Result<QuotientCellComplex, QuotientError> {
    let basis = enumerate_cells_with(n, limits)?;
    let dims = basis.by_dim.len();
    let ranks: Vec<usize> = basis.counts();
    let mut boundaries = Vec::new();
    for d in 1..dims {
        let mut triplets = Vec::new();
        for (col, cell) in basis.by_dim[d].iter().enumerate() {
            for (face, coeff) in boundary_cell(cell) {
                let row = basis
                    .index_of(&face)
                    .expect("boundary face is an enumerated cell");
                triplets.push((row, col, coeff));
            }
        }
        boundaries.push(SparseIntMatrix::from_triplets(
            ranks[d - 1],
            ranks[d],
            triplets,
        ));
    }
    let complex = ChainComplexZ::new(ranks, boundaries, 0)?;
    Ok(QuotientCellComplex { basis, complex })
}

/// Reduced integer homology of the quotient complex, computed directly from
/// its cell chain complex.
pub fn quotient_homology(n: usize) -> Result<GradedHomology, QuotientError> {
    quotient_homology_with(n, CellLimits::default())
}

pub fn quotient_homology_with(
    n: usize,
    limits: CellLimits,
) -> Result<GradedHomology, QuotientError> {
    let QuotientCellComplex { complex, .. } = cell_chain_complex_with(n, limits)?;
    Ok(homology(&complex.augmented())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient::forest::canonical_unlabeled;

    #[test]
    fn x2_is_a_point() {
        let basis = enumerate_cells(2).unwrap();
        assert_eq!(basis.counts(), vec![1]);
        assert!(quotient_homology(2).unwrap().is_trivial());
    }

    #[test]
    fn x3_cell_counts_and_euler_characteristic() {
        let basis = enumerate_cells(3).unwrap();
        // 0-cells: single edge, all-1 path, all-1 star; 1-cells: path (1,2),
        // path (2,1), star (1,2)
        assert_eq!(basis.counts(), vec![3, 3]);
        let chi_reduced: i64 = -1 + 3 - 3;
        assert_eq!(chi_reduced, -1); // consistent with X_3 being a circle
    }

    #[test]
    fn x3_is_a_circle() {
        let h = quotient_homology(3).unwrap();
        assert_eq!(h, GradedHomology::single_free(1, 1));
    }

    #[test]
    fn x4_euler_characteristic_matches_sphere() {
        let basis = enumerate_cells(4).unwrap();
        let mut chi: i64 = -1;
        for (d, count) in basis.counts().iter().enumerate() {
            chi += if d % 2 == 0 { *count as i64 } else { -(*count as i64) };
        }
        assert_eq!(chi, 1); // X_4 is a 2-sphere
    }

    #[test]
    fn boundary_of_labeled_path() {
        // path with labels (1,2): one merge face and one deletion face
        let cell = canonical_labeled(3, &[(0, 1), (1, 2)], &[1, 2]).unwrap();
        let faces = boundary_cell(&cell);
        assert_eq!(faces.len(), 2);
        let all_ones = canonical_labeled(3, &[(0, 1), (1, 2)], &[1, 1]).unwrap();
        let single = canonical_labeled(3, &[(0, 1)], &[1]).unwrap();
        // p = 1: merge sign (-1)^{1+1+1} = -1, deletion sign +1
        let lookup: BTreeMap<_, _> = faces.into_iter().collect();
        assert_eq!(lookup.get(&all_ones), Some(&-1));
        // deletion drops one vertex's worth of edges but keeps n = 3
        assert_eq!(single.n_vertices(), 3);
        assert_eq!(lookup.get(&single), Some(&1));
    }

    #[test]
    fn boundary_squares_to_zero_for_x5() {
        let qc = cell_chain_complex(5).unwrap();
        assert!(qc.complex.verify_boundary_square().is_ok());
    }

    #[test]
    fn boundary_commutes_with_canonicalization() {
        // compute the boundary from differently-labeled concrete
        // representatives of the same cell and compare
        let reps: [(usize, Vec<(usize, usize)>, Vec<u32>); 3] = [
            (4, vec![(0, 1), (1, 2), (1, 3)], vec![1, 2, 2]),
            (4, vec![(3, 2), (2, 1), (2, 0)], vec![1, 2, 2]),
            (4, vec![(1, 0), (0, 3), (0, 2)], vec![5, 9, 9]),
        ];
        let cells: Vec<LabeledForest> = reps
            .iter()
            .map(|(n, e, l)| canonical_labeled(*n, e, l).unwrap())
            .collect();
        assert_eq!(cells[0], cells[1]);
        assert_eq!(cells[0], cells[2]);
        let b0 = boundary_cell(&cells[0]);
        for c in &cells[1..] {
            assert_eq!(boundary_cell(c), b0);
        }
    }

    #[test]
    fn guard_rejects_large_n() {
        assert!(matches!(
            enumerate_cells(8),
            Err(QuotientError::CellGuard { n: 8, .. })
        ));
        assert!(enumerate_cells_with(5, CellLimits { max_n: 4, max_cells: 10 }).is_err());
    }

    #[test]
    fn cells_respect_vertex_count() {
        // the same labeled edge set on different n gives different cells
        let on3 = canonical_labeled(3, &[(0, 1)], &[1]).unwrap();
        let on4 = canonical_labeled(4, &[(0, 1)], &[1]).unwrap();
        assert_ne!(on3, on4);
        assert_eq!(on3.n_vertices(), 3);
        assert_eq!(on4.n_vertices(), 4);
    }

    #[test]
    fn dump_shape() {
        let basis = enumerate_cells(3).unwrap();
        let dump = basis.dump();
        assert_eq!(dump.lines().count(), basis.total_cells());
        assert!(dump.lines().all(|l| l.contains(" | ")));
        assert_eq!(basis.dump(), dump);
    }

    #[test]
    fn forest_cells_match_manual_count_for_three_vertices() {
        // forests on 3 vertices: empty, single edge, path, star
        let path = canonical_unlabeled(3, &[(0, 1), (1, 2)]).unwrap().0;
        let star = canonical_unlabeled(3, &[(0, 1), (0, 2)]).unwrap().0;
        assert_eq!(cells_of_forest(&path).len(), 3); // (1,1), (1,2), (2,1)
        assert_eq!(cells_of_forest(&star).len(), 2); // (1,1), (1,2)~(2,1)
    }
}
