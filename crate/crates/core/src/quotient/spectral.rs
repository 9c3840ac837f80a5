//! The filtration spectral sequence of the quotient complex: per-forest
//! labeling complexes, the first page concentrated on the (k-1, k) diagonal,
//! its differential, and the resulting homology pipeline.
//!
//! Filtration level k holds the cells whose forest has at most k edges; the
//! relative chain complex of consecutive levels splits as a direct sum over
//! forests with exactly k edges of the labeling complex E_T (the boundary
//! with the top-label deletion term dropped). Rationally each E_T carries at
//! most one unit of homology, in degree k-1, present exactly when the edge
//! symmetry group is alternating; the page differential acts on those
//! generators by signed orbit counts.

use std::collections::BTreeMap;

use crate::homology::{
    homology, quotient_complex, sub_complex, ChainComplexZ, GradedHomology, HomologyGroup,
};
use crate::matrix::SparseIntMatrix;

use super::cells::{cell_chain_complex_with, cells_of_forest, merge_faces, CellLimits};
use super::forest::{
    forest_symmetry_group, forests_on, forests_with_edges, permutation_is_even, LabeledForest,
    QuotientError, UnlabeledForest,
};

/// The labeling complex of one forest: degree-p basis is the canonical cells
/// with p+1 label values on this forest, boundary is the truncated (merge
/// only) operator. Unaugmented; its homology is nonreduced.
pub struct LabelingComplex {
    pub basis: Vec<Vec<LabeledForest>>,
    pub complex: ChainComplexZ,
}

pub fn labeling_complex(t: &UnlabeledForest) -> Result<LabelingComplex, QuotientError> {
    let k = t.edge_count();
    let cells = cells_of_forest(t);
    let mut basis: Vec<Vec<LabeledForest>> = vec![Vec::new(); k];
    for cell in cells {
        basis[cell.dim()].push(cell);
    }
    for group in &mut basis {
        group.sort();
    }
    let ranks: Vec<usize> = basis.iter().map(|g| g.len()).collect();
    let mut boundaries = Vec::new();
    for d in 1..k {
        let mut triplets = Vec::new();
        for (col, cell) in basis[d].iter().enumerate() {
            let mut acc: BTreeMap<LabeledForest, i64> = BTreeMap::new();
            for (face, coeff) in merge_faces(cell) {
                *acc.entry(face).or_insert(0) += coeff;
            }
            for (face, coeff) in acc {
                if coeff == 0 {
                    continue;
                }
                let row = basis[d - 1]
                    .binary_search(&face)
                    .expect("merge face is a labeling of the same forest");
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
    Ok(LabelingComplex { basis, complex })
}

/// Nonreduced homology of the labeling complex of `t`.
pub fn labeling_homology(t: &UnlabeledForest) -> Result<GradedHomology, QuotientError> {
    let lc = labeling_complex(t)?;
    Ok(homology(&lc.complex)?)
}

/// First page of the filtration spectral sequence, restricted to its only
/// potentially nonzero diagonal: for each edge count k the admissible
/// forests, and the differential between consecutive diagonals.
#[derive(Debug, Clone)]
pub struct E1Page {
    pub n: usize,
    /// by_k[k-1]: admissible forests with k edges, canonical order.
    pub by_k: Vec<Vec<UnlabeledForest>>,
    /// d1[i] maps the k = i+2 basis to the k = i+1 basis.
    pub d1: Vec<SparseIntMatrix>,
}

impl E1Page {
    /// The page as a chain complex (degree p = k-1).
    pub fn into_complex(self) -> Result<ChainComplexZ, QuotientError> {
        let ranks: Vec<usize> = self.by_k.iter().map(|g| g.len()).collect();
        Ok(ChainComplexZ::new(ranks, self.d1, 0)?)
    }

    /// Triplet dump: `k | row_forest | col_forest | coefficient`, where the
    /// column forest has k edges.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, m) in self.d1.iter().enumerate() {
            let k = i + 2;
            for (row, col, value) in m.triplets() {
                out.push_str(&format!(
                    "{k} | {} | {} | {value}\n",
                    self.by_k[i][row], self.by_k[i + 1][col]
                ));
            }
        }
        out
    }
}

/// Compute the first-page differential from the orbit formula: for an
/// admissible forest T and an edge orbit with representative a such that
/// T minus a is admissible, the coefficient on e_{T\a} is the sign of the
/// reordering that reads T's reference order with a moved last, times the
/// index of the a-stabilizer's restriction inside the symmetry group of
/// T \ a.
pub fn d1_page(n: usize) -> Result<E1Page, QuotientError> {
    d1_page_with(n, CellLimits::default())
}

pub fn d1_page_with(n: usize, limits: CellLimits) -> Result<E1Page, QuotientError> {
    if n < 2 {
        return Err(QuotientError::TooSmall { n });
    }
    if n > limits.max_n {
        return Err(QuotientError::CellGuard {
            n,
            max_n: limits.max_n,
        });
    }
    let mut by_k: Vec<Vec<UnlabeledForest>> = Vec::new();
    for k in 1..n {
        let admissible: Vec<UnlabeledForest> = forests_with_edges(n, k)
            .into_iter()
            .filter_map(|f| match forest_symmetry_group(&f) {
                Ok(g) => g.is_alternating().then_some(Ok(f)),
                Err(e) => Some(Err(e)),
            })
            .collect::<Result<_, _>>()?;
        by_k.push(admissible);
    }
    let mut d1 = Vec::new();
    for i in 1..by_k.len() {
        let sources = &by_k[i]; // k = i+1 edges
        let targets = &by_k[i - 1]; // k = i edges
        let k = i + 1;
        let mut triplets: Vec<(usize, usize, i64)> = Vec::new();
        for (col, t) in sources.iter().enumerate() {
            let (nv, edges) = t.representative();
            debug_assert_eq!(nv, n);
            let group = forest_symmetry_group(t)?;
            for orbit in group.edge_orbits() {
                let a = orbit[0];
                let removed: Vec<(usize, usize)> = edges
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != a)
                    .map(|(_, &e)| e)
                    .collect();
                let (reduced, edge_map) =
                    super::forest::canonical_unlabeled(n, &removed)
                        .expect("forest minus an edge is a forest");
                let Ok(row) = targets.binary_search(&reduced) else {
                    continue; // target not admissible
                };
                let reduced_group = forest_symmetry_group(&reduced)?;
                let stab = group.stabilizer_order(a);
                debug_assert_eq!(stab, group.order() / orbit.len());
                assert_eq!(
                    reduced_group.order() % stab,
                    0,
                    "stabilizer restriction must embed in the reduced symmetry group"
                );
                let multiplicity = (reduced_group.order() / stab) as i64;
                // permutation that reads the old reference order through the
                // new one, with the removed edge last
                let mut perm = vec![0usize; k];
                for j in 0..k {
                    perm[j] = if j == a {
                        k - 1
                    } else {
                        let j_reduced = if j > a { j - 1 } else { j };
                        edge_map[j_reduced]
                    };
                }
                let sign = if permutation_is_even(&perm) { 1 } else { -1 };
                triplets.push((row, col, sign * multiplicity));
            }
        }
        d1.push(SparseIntMatrix::from_triplets(
            targets.len(),
            sources.len(),
            triplets,
        ));
    }
    Ok(E1Page { n, by_k, d1 })
}

/// Check that the first page is integrally concentrated on the diagonal:
/// every labeling complex has homology only in its top degree, one free unit
/// when the forest is admissible and nothing otherwise.
pub fn verify_diagonal_concentration(n: usize) -> Result<(), QuotientError> {
    for forest in forests_on(n) {
        let k = forest.edge_count();
        if k == 0 {
            continue;
        }
        let h = labeling_homology(&forest)?;
        let admissible = forest_symmetry_group(&forest)?.is_alternating();
        for (degree, group) in h.nontrivial() {
            let expected_here =
                degree == (k - 1) as i64 && admissible && *group == HomologyGroup::free(1);
            if !expected_here {
                return Err(QuotientError::DiagonalHypothesis {
                    forest: forest.to_string(),
                    k,
                    degree,
                });
            }
        }
        if admissible && h.group((k - 1) as i64) != HomologyGroup::free(1) {
            return Err(QuotientError::DiagonalHypothesis {
                forest: forest.to_string(),
                k,
                degree: (k - 1) as i64,
            });
        }
    }
    Ok(())
}

/// Reduced integer homology of the quotient complex through the spectral
/// sequence: verify the diagonal concentration, then take homology of the
/// single complex formed by the diagonal entries.
pub fn e1_homology(n: usize) -> Result<GradedHomology, QuotientError> {
    e1_homology_with(n, CellLimits::default())
}

pub fn e1_homology_with(n: usize, limits: CellLimits) -> Result<GradedHomology, QuotientError> {
    verify_diagonal_concentration(n)?;
    let page = d1_page_with(n, limits)?;
    let h = homology(&page.into_complex()?)?;
    // the complex computes unreduced homology; the quotient space is
    // connected, so degree 0 must be exactly Z, and reduced homology drops it
    assert_eq!(
        h.group(0),
        HomologyGroup::free(1),
        "quotient space must be connected"
    );
    Ok(GradedHomology::from_pairs(
        h.nontrivial()
            .filter(|&(d, _)| d != 0)
            .map(|(d, g)| (d, g.clone())),
    ))
}

/// Relative homology of consecutive filtration levels, computed from the
/// full cell chain complex by restricting to cells with at most k edges and
/// quotienting by those with fewer.
pub fn filtration_entry(n: usize, k: usize) -> Result<GradedHomology, QuotientError> {
    let qc = cell_chain_complex_with(n, CellLimits::default())?;
    filtration_entry_of(&qc, k)
}

/// Same, reusing an already-built cell chain complex.
pub fn filtration_entry_of(
    qc: &super::cells::QuotientCellComplex,
    k: usize,
) -> Result<GradedHomology, QuotientError> {
    let keep_le: Vec<Vec<bool>> = qc
        .basis
        .by_dim
        .iter()
        .map(|group| group.iter().map(|c| c.edge_count() <= k).collect())
        .collect();
    let level = sub_complex(&qc.complex, &keep_le)?;
    let filtered: Vec<Vec<&LabeledForest>> = qc
        .basis
        .by_dim
        .iter()
        .map(|group| group.iter().filter(|c| c.edge_count() <= k).collect())
        .collect();
    let keep_eq: Vec<Vec<bool>> = filtered
        .iter()
        .map(|group| group.iter().map(|c| c.edge_count() == k).collect())
        .collect();
    let relative = quotient_complex(&level, &keep_eq)?;
    Ok(homology(&relative)?)
}

/// The same entry assembled from the per-forest labeling complexes.
pub fn filtration_entry_by_forests(n: usize, k: usize) -> Result<GradedHomology, QuotientError> {
    let mut acc = GradedHomology::trivial();
    for forest in forests_with_edges(n, k) {
        acc = acc.direct_sum(&labeling_homology(&forest)?);
    }
    Ok(acc)
}
