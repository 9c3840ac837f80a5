//! Exact-integer chain complexes and reduced/relative simplicial homology.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::complex::SimplicialComplex;
use crate::matrix::SparseIntMatrix;
use crate::snf::{snf_diagonal, SnfError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("boundary matrix {index} has shape {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    ShapeMismatch {
        index: usize,
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("boundary operators do not compose to zero between degrees {degree} and {}", degree + 2)]
    BoundarySquareNonzero { degree: i64 },
    #[error("selected basis elements do not span a subcomplex (degree {degree}, column {column})")]
    NotSubcomplex { degree: i64, column: usize },
    #[error("mask length {got} does not match complex length {expected}")]
    MaskMismatch { got: usize, expected: usize },
    #[error("second complex is not a subcomplex: face {face:?} missing from ambient complex")]
    NotASubcomplexFace { face: Vec<usize> },
    #[error(transparent)]
    Snf(#[from] SnfError),
}

/// A finitely generated chain complex of free abelian groups.
///
/// `boundaries[i]` maps internal degree i+1 to internal degree i and has
/// shape `ranks[i]` x `ranks[i+1]`. `degree_offset` converts internal to
/// reported degrees: a reduced simplicial complex stores its augmentation as
/// internal degree 0 and uses offset -1.
#[derive(Debug, Clone)]
pub struct ChainComplexZ {
    ranks: Vec<usize>,
    boundaries: Vec<SparseIntMatrix>,
    degree_offset: i64,
}

impl ChainComplexZ {
    pub fn new(
        ranks: Vec<usize>,
        boundaries: Vec<SparseIntMatrix>,
        degree_offset: i64,
    ) -> Result<Self, HomologyError> {
        assert_eq!(
            boundaries.len(),
            ranks.len().saturating_sub(1),
            "need one boundary per adjacent degree pair"
        );
        for (i, b) in boundaries.iter().enumerate() {
            if b.rows() != ranks[i] || b.cols() != ranks[i + 1] {
                return Err(HomologyError::ShapeMismatch {
                    index: i,
                    rows: b.rows(),
                    cols: b.cols(),
                    expected_rows: ranks[i],
                    expected_cols: ranks[i + 1],
                });
            }
        }
        let complex = ChainComplexZ {
            ranks,
            boundaries,
            degree_offset,
        };
        complex.verify_boundary_square()?;
        Ok(complex)
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn boundary(&self, i: usize) -> &SparseIntMatrix {
        &self.boundaries[i]
    }

    pub fn boundaries(&self) -> &[SparseIntMatrix] {
        &self.boundaries
    }

    pub fn degree_offset(&self) -> i64 {
        self.degree_offset
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn verify_boundary_square(&self) -> Result<(), HomologyError> {
        for i in 0..self.boundaries.len().saturating_sub(1) {
            let product = self.boundaries[i].multiply(&self.boundaries[i + 1]);
            if !product.is_zero() {
                return Err(HomologyError::BoundarySquareNonzero {
                    degree: i as i64 + self.degree_offset,
                });
            }
        }
        Ok(())
    }

    /// Add an augmentation: a new bottom degree of rank 1, with the all-ones
    /// map out of the old degree 0, shifting the offset down. Homology of the
    /// result is reduced homology of the original.
    pub fn augmented(&self) -> ChainComplexZ {
        let mut ranks = Vec::with_capacity(self.ranks.len() + 1);
        ranks.push(1);
        ranks.extend_from_slice(&self.ranks);
        let mut boundaries = Vec::with_capacity(self.boundaries.len() + 1);
        if let Some(&old_zero) = self.ranks.first() {
            boundaries.push(SparseIntMatrix::from_triplets(
                1,
                old_zero,
                (0..old_zero).map(|c| (0usize, c, 1i64)),
            ));
        }
        boundaries.extend(self.boundaries.iter().cloned());
        ChainComplexZ {
            ranks,
            boundaries,
            degree_offset: self.degree_offset - 1,
        }
        // augmentation ∘ ∂_1 = 0 because every column of a simplicial or
        // cellular ∂_1 sums to zero; new() is not re-run here, callers build
        // augmented complexes only from already-validated ones
    }
}

/// One homology group: free rank plus torsion coefficients in
/// divisibility-chain order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub betti: usize,
    pub torsion: Vec<u64>,
}

impl HomologyGroup {
    pub fn trivial() -> Self {
        HomologyGroup {
            betti: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(betti: usize) -> Self {
        HomologyGroup {
            betti,
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Direct sum, renormalizing the torsion coefficients into a chain.
    pub fn direct_sum(&self, other: &HomologyGroup) -> HomologyGroup {
        let mut torsion: Vec<u64> = self
            .torsion
            .iter()
            .chain(other.torsion.iter())
            .copied()
            .collect();
        torsion = normalize_torsion(&torsion);
        HomologyGroup {
            betti: self.betti + other.betti,
            torsion,
        }
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Rewrite a multiset of torsion coefficients into divisibility-chain order
/// (the invariant-factor normal form of the direct sum).
pub fn normalize_torsion(coefficients: &[u64]) -> Vec<u64> {
    let mut primes: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for &c in coefficients {
        assert!(c >= 2, "torsion coefficient must be >= 2");
        let mut rest = c;
        let mut p = 2u64;
        while p * p <= rest {
            if rest % p == 0 {
                let mut e = 0;
                while rest % p == 0 {
                    rest /= p;
                    e += 1;
                }
                primes.entry(p).or_default().push(e);
            }
            p += 1;
        }
        if rest > 1 {
            primes.entry(rest).or_default().push(1);
        }
    }
    let chain_len = primes.values().map(|v| v.len()).max().unwrap_or(0);
    for exps in primes.values_mut() {
        exps.sort_unstable_by(|a, b| b.cmp(a)); // descending
    }
    // invariant factors from the largest down, then reverse into ascending
    let mut factors: Vec<u64> = (0..chain_len)
        .map(|i| {
            primes
                .iter()
                .filter_map(|(&p, exps)| exps.get(i).map(|&e| p.pow(e)))
                .product()
        })
        .collect();
    factors.reverse();
    factors
}

/// Graded homology with trivial groups omitted; equality is equality of the
/// nontrivial parts.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct GradedHomology {
    groups: BTreeMap<i64, HomologyGroup>,
}

impl GradedHomology {
    pub fn trivial() -> Self {
        GradedHomology::default()
    }

    pub fn from_pairs<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (i64, HomologyGroup)>,
    {
        let groups = pairs
            .into_iter()
            .filter(|(_, g)| !g.is_trivial())
            .collect();
        GradedHomology { groups }
    }

    /// Convenience constructor for a free group in a single degree.
    pub fn single_free(degree: i64, betti: usize) -> Self {
        GradedHomology::from_pairs([(degree, HomologyGroup::free(betti))])
    }

    pub fn group(&self, degree: i64) -> HomologyGroup {
        self.groups
            .get(&degree)
            .cloned()
            .unwrap_or_else(HomologyGroup::trivial)
    }

    pub fn betti(&self, degree: i64) -> usize {
        self.groups.get(&degree).map_or(0, |g| g.betti)
    }

    pub fn nontrivial(&self) -> impl Iterator<Item = (i64, &HomologyGroup)> {
        self.groups.iter().map(|(&d, g)| (d, g))
    }

    pub fn is_trivial(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.groups.values().all(|g| g.is_free())
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.groups.keys().next_back().copied()
    }

    pub fn insert(&mut self, degree: i64, group: HomologyGroup) {
        if !group.is_trivial() {
            self.groups.insert(degree, group);
        }
    }

    pub fn direct_sum(&self, other: &GradedHomology) -> GradedHomology {
        let degrees: std::collections::BTreeSet<i64> = self
            .groups
            .keys()
            .chain(other.groups.keys())
            .copied()
            .collect();
        GradedHomology::from_pairs(
            degrees
                .into_iter()
                .map(|d| (d, self.group(d).direct_sum(&other.group(d)))),
        )
    }

    /// Shift every degree up by `by` (suspension acts as shift by 1).
    pub fn shifted(&self, by: i64) -> GradedHomology {
        GradedHomology {
            groups: self.groups.iter().map(|(&d, g)| (d + by, g.clone())).collect(),
        }
    }

    /// Restrict to degrees >= 0 (drop the degree -1 bookkeeping group of the
    /// empty complex).
    pub fn nonnegative_part(&self) -> GradedHomology {
        GradedHomology {
            groups: self
                .groups
                .iter()
                .filter(|(&d, _)| d >= 0)
                .map(|(&d, g)| (d, g.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for GradedHomology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.groups.is_empty() {
            return write!(f, "trivial");
        }
        let parts: Vec<String> = self
            .groups
            .iter()
            .map(|(d, g)| format!("H_{d} = {g}"))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// The reduced simplicial chain complex of `k`: degree-d basis is
/// `k.faces(d)` in stored order, boundary alternates over vertex removal,
/// and the augmentation is included (offset -1).
pub fn chain_complex_of(k: &SimplicialComplex) -> ChainComplexZ {
    plain_chain_complex(k).augmented()
}

/// The unaugmented simplicial chain complex of `k` (offset 0).
pub fn plain_chain_complex(k: &SimplicialComplex) -> ChainComplexZ {
    let dims = k.dim().map_or(0, |d| d + 1);
    let ranks: Vec<usize> = (0..dims).map(|d| k.face_count(d)).collect();
    let mut boundaries = Vec::new();
    for d in 1..dims {
        let mut triplets = Vec::new();
        for (col, face) in k.faces(d).iter().enumerate() {
            for skip in 0..face.len() {
                let mut sub = face.clone();
                sub.remove(skip);
                let row = k
                    .face_index(&sub)
                    .expect("complex is downward closed");
                let sign = if skip % 2 == 0 { 1 } else { -1 };
                triplets.push((row, col, sign));
            }
        }
        boundaries.push(SparseIntMatrix::from_triplets(
            k.face_count(d - 1),
            k.face_count(d),
            triplets,
        ));
    }
    ChainComplexZ::new(ranks, boundaries, 0).expect("simplicial boundary squares to zero")
}

/// Homology of a chain complex via Smith normal form: for each degree,
/// betti = rank C_d - rank ∂_d - rank ∂_{d+1}, torsion = nontrivial
/// invariant factors of ∂_{d+1}.
pub fn homology(c: &ChainComplexZ) -> Result<GradedHomology, HomologyError> {
    c.verify_boundary_square()?;
    let n = c.len();
    let mut rank = vec![0usize; n.saturating_sub(1)];
    let mut torsion: Vec<Vec<u64>> = vec![Vec::new(); n.saturating_sub(1)];
    for (i, b) in c.boundaries().iter().enumerate() {
        let diag = snf_diagonal(b)?;
        rank[i] = diag.iter().filter(|v| !num_traits::Zero::is_zero(*v)).count();
        torsion[i] = diag
            .iter()
            .filter(|v| {
                !num_traits::Zero::is_zero(*v) && !num_traits::One::is_one(*v)
            })
            .map(|v| v.to_u64().expect("torsion coefficient fits in u64"))
            .collect();
    }
    let mut pairs = Vec::new();
    for d in 0..n {
        let out_rank = if d == 0 { 0 } else { rank[d - 1] };
        let in_rank = if d < rank.len() { rank[d] } else { 0 };
        let betti = c.ranks()[d] - out_rank - in_rank;
        let tors = if d < torsion.len() {
            torsion[d].clone()
        } else {
            Vec::new()
        };
        pairs.push((
            d as i64 + c.degree_offset(),
            HomologyGroup {
                betti,
                torsion: tors,
            },
        ));
    }
    Ok(GradedHomology::from_pairs(pairs))
}

/// Restrict to the selected basis elements, which must span a subcomplex
/// (the boundary of anything kept stays inside the kept span).
pub fn sub_complex(c: &ChainComplexZ, keep: &[Vec<bool>]) -> Result<ChainComplexZ, HomologyError> {
    masked_complex(c, keep, true)
}

/// Quotient by the non-selected basis elements, which must span a
/// subcomplex.
pub fn quotient_complex(
    c: &ChainComplexZ,
    keep: &[Vec<bool>],
) -> Result<ChainComplexZ, HomologyError> {
    masked_complex(c, keep, false)
}

fn masked_complex(
    c: &ChainComplexZ,
    keep: &[Vec<bool>],
    keep_is_closed: bool,
) -> Result<ChainComplexZ, HomologyError> {
    if keep.len() != c.len() {
        return Err(HomologyError::MaskMismatch {
            got: keep.len(),
            expected: c.len(),
        });
    }
    for (d, mask) in keep.iter().enumerate() {
        if mask.len() != c.ranks()[d] {
            return Err(HomologyError::MaskMismatch {
                got: mask.len(),
                expected: c.ranks()[d],
            });
        }
    }
    // closure check: boundary of the closed side must stay on the closed side
    for i in 0..c.boundaries().len() {
        let b = c.boundary(i);
        for col in 0..b.cols() {
            let col_selected = keep[i + 1][col];
            let col_is_closed_side = col_selected == keep_is_closed;
            if !col_is_closed_side {
                continue;
            }
            for &(row, _) in b.column(col) {
                let row_is_closed_side = keep[i][row] == keep_is_closed;
                if !row_is_closed_side {
                    return Err(HomologyError::NotSubcomplex {
                        degree: i as i64 + 1 + c.degree_offset(),
                        column: col,
                    });
                }
            }
        }
    }
    let kept_indices: Vec<Vec<usize>> = keep
        .iter()
        .map(|mask| {
            mask.iter()
                .enumerate()
                .filter_map(|(i, &k)| k.then_some(i))
                .collect()
        })
        .collect();
    let ranks: Vec<usize> = kept_indices.iter().map(|v| v.len()).collect();
    let boundaries: Vec<SparseIntMatrix> = (0..c.boundaries().len())
        .map(|i| {
            c.boundary(i)
                .restrict(&kept_indices[i], &kept_indices[i + 1])
        })
        .collect();
    ChainComplexZ::new(ranks, boundaries, c.degree_offset())
}

/// Relative homology H_*(K, L) of a simplicial pair: homology of the
/// quotient chain complex C(K)/C(L). Unaugmented, so an empty L gives
/// unreduced absolute homology.
pub fn relative_homology(
    k: &SimplicialComplex,
    l: &SimplicialComplex,
) -> Result<GradedHomology, HomologyError> {
    let dims = k.dim().map_or(0, |d| d + 1);
    for d in 0..l.dim().map_or(0, |d| d + 1) {
        for face in l.faces(d) {
            if !k.contains(face) {
                return Err(HomologyError::NotASubcomplexFace { face: face.clone() });
            }
        }
    }
    let c = plain_chain_complex(k);
    let keep: Vec<Vec<bool>> = (0..dims)
        .map(|d| k.faces(d).iter().map(|f| !l.contains(f)).collect())
        .collect();
    homology(&quotient_complex(&c, &keep)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{forest_complex, SimplicialComplex};
    use crate::graph::{complete_double_graph, double_cycle_graph};

    fn triangle_boundary() -> SimplicialComplex {
        SimplicialComplex::from_faces(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    #[test]
    fn single_edge_is_contractible() {
        let k = SimplicialComplex::from_faces(2, vec![vec![0, 1]]).unwrap();
        let h = homology(&chain_complex_of(&k)).unwrap();
        assert!(h.is_trivial());
    }

    #[test]
    fn triangle_boundary_is_a_circle() {
        let h = homology(&chain_complex_of(&triangle_boundary())).unwrap();
        assert_eq!(h, GradedHomology::single_free(1, 1));
    }

    #[test]
    fn empty_complex_has_degree_minus_one_homology() {
        let k = SimplicialComplex::empty(0);
        let h = homology(&chain_complex_of(&k)).unwrap();
        assert_eq!(h.group(-1), HomologyGroup::free(1));
        assert!(h.nonnegative_part().is_trivial());
    }

    #[test]
    fn boundary_squares_to_zero_on_delta_c5() {
        let k = forest_complex(&double_cycle_graph(5).unwrap());
        let c = chain_complex_of(&k);
        assert!(c.verify_boundary_square().is_ok());
    }

    #[test]
    fn delta_g4_homology() {
        let k = forest_complex(&complete_double_graph(4));
        let h = homology(&chain_complex_of(&k)).unwrap();
        assert_eq!(h, GradedHomology::single_free(2, 27));
    }

    #[test]
    fn relative_of_pair_with_itself_vanishes() {
        let k = triangle_boundary();
        let h = relative_homology(&k, &k).unwrap();
        assert!(h.is_trivial());
    }

    #[test]
    fn relative_triangle_mod_boundary() {
        let solid = SimplicialComplex::from_faces(3, vec![vec![0, 1, 2]]).unwrap();
        let h = relative_homology(&solid, &triangle_boundary()).unwrap();
        assert_eq!(h, GradedHomology::single_free(2, 1));
    }

    #[test]
    fn relative_rejects_non_subcomplex() {
        let k = triangle_boundary();
        let l = SimplicialComplex::from_faces(3, vec![vec![0, 1, 2]]).unwrap();
        assert!(matches!(
            relative_homology(&k, &l),
            Err(HomologyError::NotASubcomplexFace { .. })
        ));
    }

    #[test]
    fn bad_boundary_is_reported_not_panicked() {
        // two basis elements in degree 0, two in degree 1, bogus maps
        let b1 = SparseIntMatrix::from_triplets(2, 2, vec![(0, 0, 1), (1, 1, 1)]);
        let b2 = SparseIntMatrix::from_triplets(2, 1, vec![(0, 0, 1)]);
        let err = ChainComplexZ::new(vec![2, 2, 1], vec![b1, b2], 0).unwrap_err();
        assert!(matches!(err, HomologyError::BoundarySquareNonzero { .. }));
    }

    #[test]
    fn homology_invariant_under_relabeling() {
        let k = forest_complex(&complete_double_graph(3));
        let h0 = homology(&chain_complex_of(&k)).unwrap();
        // a few fixed permutations of the 6 vertices
        for perm in [
            vec![5, 4, 3, 2, 1, 0],
            vec![1, 2, 3, 4, 5, 0],
            vec![3, 0, 4, 1, 5, 2],
        ] {
            let relabeled = k.relabel(&perm).unwrap();
            assert_eq!(homology(&chain_complex_of(&relabeled)).unwrap(), h0);
        }
    }

    #[test]
    fn torsion_normalization() {
        assert_eq!(normalize_torsion(&[2, 4]), vec![2, 4]);
        assert_eq!(normalize_torsion(&[4, 2]), vec![2, 4]);
        assert_eq!(normalize_torsion(&[2, 3]), vec![6]);
        assert_eq!(normalize_torsion(&[2, 4, 3]), vec![2, 12]);
        assert_eq!(normalize_torsion(&[]), Vec::<u64>::new());
    }

    #[test]
    fn display_formats() {
        assert_eq!(HomologyGroup::free(2).to_string(), "Z^2");
        assert_eq!(
            HomologyGroup {
                betti: 0,
                torsion: vec![2]
            }
            .to_string(),
            "Z/2"
        );
        assert_eq!(HomologyGroup::trivial().to_string(), "0");
    }
}
