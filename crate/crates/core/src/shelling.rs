//! Shelling orders for forest complexes of graphs with a complete source,
//! and a generic shelling verifier.

use std::collections::HashSet;

use thiserror::Error;

use crate::complex::SimplicialComplex;
use crate::graph::{is_forest_indices, visit_forest_subsets, DirectedGraph, EdgeSubset};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShellingError {
    #[error("graph has no complete source")]
    NoCompleteSource,
    #[error("edge set {indices:?} is not a spanning-tree facet of the forest complex")]
    NotAFacet { indices: Vec<usize> },
    #[error("order is not a permutation of the complex's facets")]
    NotAFacetPermutation,
    #[error("complex is not pure")]
    NotPure,
    #[error("facet count {count} exceeds guard {max} (raise the guard to override)")]
    TooManyFacets { count: usize, max: usize },
    #[error("search budget exhausted after visiting {visited} states")]
    SearchBudget { visited: usize },
}

pub const DEFAULT_FACET_GUARD: usize = 10_000;

/// Label of a spanning-tree facet: the weakly increasing sequence of edge
/// sources. A vertex appears once per out-edge used by the tree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FacetLabel(Vec<usize>);

impl FacetLabel {
    pub fn sources(&self) -> &[usize] {
        &self.0
    }
}

impl std::fmt::Display for FacetLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Smallest vertex with an out-edge to every other vertex, if any.
pub fn has_complete_source(g: &DirectedGraph) -> Option<usize> {
    let n = g.n_vertices();
    let mut out_count = vec![0usize; n];
    for &(u, _) in g.edges() {
        out_count[u] += 1;
    }
    // out-degree n-1 is necessary and sufficient (no duplicates, no loops)
    (0..n).find(|&v| out_count[v] == n.saturating_sub(1) && n >= 1)
}

/// The label of a full-dimensional facet (a spanning tree with n-1 edges).
pub fn facet_label(g: &DirectedGraph, facet: &EdgeSubset) -> Result<FacetLabel, ShellingError> {
    let n = g.n_vertices();
    if facet.len() + 1 != n || !is_forest_indices(g, facet.indices()) {
        return Err(ShellingError::NotAFacet {
            indices: facet.indices().to_vec(),
        });
    }
    let mut sources: Vec<usize> = facet.indices().iter().map(|&e| g.edge(e).0).collect();
    sources.sort_unstable();
    Ok(FacetLabel(sources))
}

/// All spanning-tree facets of the forest complex of `g`, ordered by
/// (label, edge list) lexicographically. This ordering is a shelling order
/// whenever `g` has a complete source.
pub fn shelling_order(g: &DirectedGraph) -> Result<Vec<EdgeSubset>, ShellingError> {
    if has_complete_source(g).is_none() {
        return Err(ShellingError::NoCompleteSource);
    }
    let n = g.n_vertices();
    let mut facets: Vec<(FacetLabel, EdgeSubset)> = Vec::new();
    visit_forest_subsets(g, Some(n - 1), |s| {
        if s.len() + 1 == n {
            let subset = EdgeSubset::new(g, s.to_vec()).expect("enumerator yields valid subsets");
            let label = facet_label(g, &subset).expect("spanning forest is a facet");
            facets.push((label, subset));
        }
    });
    facets.sort();
    Ok(facets.into_iter().map(|(_, f)| f).collect())
}

/// Facets of the forest complex of the complete double graph whose label
/// avoids vertex 0, i.e. spanning trees in which vertex 0 is a leaf. These
/// index the top homology classes; there are (n-1)^(n-1) of them.
pub fn homology_facets(n: usize) -> Vec<EdgeSubset> {
    assert!(n >= 2, "homology facets need n >= 2");
    let g = crate::graph::complete_double_graph(n);
    let mut out = Vec::new();
    visit_forest_subsets(&g, Some(n - 1), |s| {
        if s.len() + 1 == n && s.iter().all(|&e| g.edge(e).0 != 0) {
            out.push(EdgeSubset::new(&g, s.to_vec()).unwrap());
        }
    });
    out
}

/// Per-facet bitsets over the complex's vertices.
struct FacetBits {
    words: usize,
    bits: Vec<Vec<u64>>,
    sizes: Vec<usize>,
}

impl FacetBits {
    fn new(n_vertices: usize, facets: &[Vec<usize>]) -> Self {
        let words = n_vertices.div_ceil(64).max(1);
        let bits = facets
            .iter()
            .map(|f| {
                let mut w = vec![0u64; words];
                for &v in f {
                    w[v / 64] |= 1 << (v % 64);
                }
                w
            })
            .collect();
        FacetBits {
            words,
            bits,
            sizes: facets.iter().map(|f| f.len()).collect(),
        }
    }

    fn intersection_size(&self, a: usize, b: usize) -> usize {
        (0..self.words)
            .map(|w| (self.bits[a][w] & self.bits[b][w]).count_ones() as usize)
            .sum()
    }

    /// The unique element of a \ b, assuming |a \ b| == 1.
    fn single_difference(&self, a: usize, b: usize) -> usize {
        for w in 0..self.words {
            let diff = self.bits[a][w] & !self.bits[b][w];
            if diff != 0 {
                return w * 64 + diff.trailing_zeros() as usize;
            }
        }
        unreachable!("difference is empty");
    }

    /// Does a \ b intersect the vertex set `mask`?
    fn difference_hits(&self, a: usize, b: usize, mask: &[u64]) -> bool {
        (0..self.words).any(|w| self.bits[a][w] & !self.bits[b][w] & mask[w] != 0)
    }
}

/// Verify the shelling condition: for every pair i < k there are j < k and
/// x in F_k with F_i ∩ F_k ⊆ F_j ∩ F_k = F_k \ {x}.
///
/// Equivalent form used here: let X_k be the vertices x of F_k such that
/// F_k \ {x} is contained in some earlier facet; the condition for (i, k)
/// is that F_k \ F_i meets X_k.
pub fn verify_shelling(
    k: &SimplicialComplex,
    order: &[Vec<usize>],
) -> Result<bool, ShellingError> {
    verify_shelling_with(k, order, 1, DEFAULT_FACET_GUARD).map(|r| r.is_shelling)
}

/// Verification verdict plus the facets whose entire boundary is covered by
/// earlier facets; when the order is a shelling, those facets generate the
/// top homology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShellingReport {
    pub is_shelling: bool,
    pub first_violation: Option<(usize, usize)>,
    pub spanning_facets: Vec<usize>,
}

pub fn verify_shelling_with(
    k: &SimplicialComplex,
    order: &[Vec<usize>],
    threads: usize,
    max_facets: usize,
) -> Result<ShellingReport, ShellingError> {
    if !k.is_pure() {
        return Err(ShellingError::NotPure);
    }
    let facets = k.facets();
    if facets.len() > max_facets {
        return Err(ShellingError::TooManyFacets {
            count: facets.len(),
            max: max_facets,
        });
    }
    let sorted_order: Vec<Vec<usize>> = order
        .iter()
        .map(|f| {
            let mut s = f.clone();
            s.sort_unstable();
            s
        })
        .collect();
    {
        let mut a: Vec<&Vec<usize>> = facets.iter().collect();
        let mut b: Vec<&Vec<usize>> = sorted_order.iter().collect();
        a.sort();
        b.sort();
        if a != b {
            return Err(ShellingError::NotAFacetPermutation);
        }
    }
    let t = sorted_order.len();
    if t <= 1 {
        return Ok(ShellingReport {
            is_shelling: true,
            first_violation: None,
            spanning_facets: Vec::new(),
        });
    }
    let bits = FacetBits::new(k.n_vertices(), &sorted_order);
    let facet_size = bits.sizes[0];

    let check_k = |kk: usize| -> (Option<(usize, usize)>, bool) {
        // X_kk as a vertex mask
        let mut x_mask = vec![0u64; bits.words];
        let mut covered = 0usize;
        for j in 0..kk {
            if bits.intersection_size(j, kk) == facet_size - 1 {
                let x = bits.single_difference(kk, j);
                let word = x / 64;
                let bit = 1u64 << (x % 64);
                if x_mask[word] & bit == 0 {
                    x_mask[word] |= bit;
                    covered += 1;
                }
            }
        }
        for i in 0..kk {
            if !bits.difference_hits(kk, i, &x_mask) {
                return (Some((i, kk)), covered == facet_size);
            }
        }
        (None, covered == facet_size)
    };

    let mut violation: Option<(usize, usize)> = None;
    let mut spanning = Vec::new();
    if threads <= 1 {
        for kk in 1..t {
            let (v, full) = check_k(kk);
            if violation.is_none() {
                violation = v;
            }
            if full {
                spanning.push(kk);
            }
        }
    } else {
        let results: Vec<(usize, Option<(usize, usize)>, bool)> = std::thread::scope(|scope| {
            let chunk = t.div_ceil(threads).max(1);
            let mut handles = Vec::new();
            for start in (1..t).step_by(chunk) {
                let end = (start + chunk).min(t);
                let check = &check_k;
                handles.push(scope.spawn(move || {
                    (start..end)
                        .map(|kk| {
                            let (v, full) = check(kk);
                            (kk, v, full)
                        })
                        .collect::<Vec<_>>()
                }));
            }
            let mut all = Vec::new();
            for h in handles {
                all.extend(h.join().expect("verification worker panicked"));
            }
            all
        });
        let mut sorted = results;
        sorted.sort_by_key(|&(kk, _, _)| kk);
        for (kk, v, full) in sorted {
            if violation.is_none() {
                violation = v;
            }
            if full {
                spanning.push(kk);
            }
        }
    }
    Ok(ShellingReport {
        is_shelling: violation.is_none(),
        first_violation: violation,
        spanning_facets: spanning,
    })
}

const SEARCH_FACET_GUARD: usize = 26;
const SEARCH_STATE_BUDGET: usize = 60_000_000;

/// Exhaustive backtracking over facet orders: does any shelling order exist?
///
/// Whether a facet can legally come next depends only on the *set* of facets
/// already placed, so the search memoizes dead sets and is bounded by the
/// number of reachable prefix sets rather than t!.
pub fn shelling_order_exists(k: &SimplicialComplex) -> Result<bool, ShellingError> {
    if !k.is_pure() {
        return Err(ShellingError::NotPure);
    }
    let facets = k.facets();
    let t = facets.len();
    if t > SEARCH_FACET_GUARD {
        return Err(ShellingError::TooManyFacets {
            count: t,
            max: SEARCH_FACET_GUARD,
        });
    }
    if t <= 1 {
        return Ok(true);
    }
    let bits = FacetBits::new(k.n_vertices(), &facets);
    let facet_size = bits.sizes[0];
    let full_mask: u64 = if t == 64 { u64::MAX } else { (1u64 << t) - 1 };

    // can facet f be appended when `placed` is the set already shelled?
    let attachable = |placed: u64, f: usize| -> bool {
        let mut x_mask = vec![0u64; bits.words];
        let mut any = false;
        for j in 0..t {
            if placed >> j & 1 == 0 {
                continue;
            }
            if bits.intersection_size(j, f) == facet_size - 1 {
                let x = bits.single_difference(f, j);
                x_mask[x / 64] |= 1 << (x % 64);
                any = true;
            }
        }
        if !any {
            return false;
        }
        for i in 0..t {
            if placed >> i & 1 == 1 && !bits.difference_hits(f, i, &x_mask) {
                return false;
            }
        }
        true
    };

    let mut dead: HashSet<u64> = HashSet::new();
    let mut visited = 0usize;
    fn search(
        placed: u64,
        count: usize,
        t: usize,
        full: u64,
        attachable: &dyn Fn(u64, usize) -> bool,
        dead: &mut HashSet<u64>,
        visited: &mut usize,
    ) -> Result<bool, ShellingError> {
        if placed == full {
            return Ok(true);
        }
        *visited += 1;
        if *visited > SEARCH_STATE_BUDGET {
            return Err(ShellingError::SearchBudget { visited: *visited });
        }
        for f in 0..t {
            if placed >> f & 1 == 1 {
                continue;
            }
            if count > 0 && !attachable(placed, f) {
                continue;
            }
            let next = placed | (1 << f);
            if dead.contains(&next) {
                continue;
            }
            if search(next, count + 1, t, full, attachable, dead, visited)? {
                return Ok(true);
            }
            dead.insert(next);
        }
        Ok(false)
    }
    search(0, 0, t, full_mask, &attachable, &mut dead, &mut visited)
}
