//! Abstract simplicial complexes with integer vertices, the complex of
//! directed forests of a graph, and the independence complexes of paths and
//! cycles.
//!
//! Every complex implicitly contains the empty face; `faces_by_dim` stores
//! only the nonempty faces, each as a sorted vertex list, lexicographically
//! sorted within each dimension. That makes structural equality coincide with
//! equality of complexes and makes boundary-matrix column order
//! deterministic.

use std::collections::HashSet;

use thiserror::Error;

use crate::graph::{visit_forest_subsets, DirectedGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("face {face:?} has vertex {vertex} out of range (complex has {n_vertices} vertices)")]
    VertexOutOfRange {
        face: Vec<usize>,
        vertex: usize,
        n_vertices: usize,
    },
    #[error("face {face:?} has repeated vertices")]
    RepeatedVertex { face: Vec<usize> },
    #[error("{face:?} is not a maximal face of the complex")]
    NotAFacet { face: Vec<usize> },
    #[error("relabeling {perm:?} is not a permutation of 0..{n_vertices}")]
    BadPermutation { perm: Vec<usize>, n_vertices: usize },
    #[error("cycle independence complex needs n >= 3, got {0}")]
    CycleTooSmall(usize),
    #[error("purity criterion guard exceeded: {n_vertices} vertices > {max}")]
    PurityGuard { n_vertices: usize, max: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimplicialComplex {
    n_vertices: usize,
    faces_by_dim: Vec<Vec<Vec<usize>>>,
}

impl SimplicialComplex {
    /// The complex with the given vertex set and no nonempty faces.
    pub fn empty(n_vertices: usize) -> Self {
        SimplicialComplex {
            n_vertices,
            faces_by_dim: Vec::new(),
        }
    }

    /// Build from an arbitrary family of faces, adding all subsets so the
    /// result is downward closed. Input faces may be unsorted.
    pub fn from_faces<I>(n_vertices: usize, faces: I) -> Result<Self, ComplexError>
    where
        I: IntoIterator<Item = Vec<usize>>,
    {
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut stack: Vec<Vec<usize>> = Vec::new();
        for mut face in faces {
            face.sort_unstable();
            if face.windows(2).any(|w| w[0] == w[1]) {
                return Err(ComplexError::RepeatedVertex { face });
            }
            if let Some(&v) = face.iter().find(|&&v| v >= n_vertices) {
                return Err(ComplexError::VertexOutOfRange {
                    vertex: v,
                    face,
                    n_vertices,
                });
            }
            if !face.is_empty() && seen.insert(face.clone()) {
                stack.push(face);
            }
        }
        // downward closure
        while let Some(face) = stack.pop() {
            if face.len() >= 2 {
                for skip in 0..face.len() {
                    let mut sub = face.clone();
                    sub.remove(skip);
                    if seen.insert(sub.clone()) {
                        stack.push(sub);
                    }
                }
            }
        }
        let dim_bound = seen.iter().map(|f| f.len()).max().unwrap_or(0);
        let mut faces_by_dim: Vec<Vec<Vec<usize>>> = vec![Vec::new(); dim_bound];
        for face in seen {
            let d = face.len() - 1;
            faces_by_dim[d].push(face);
        }
        for group in &mut faces_by_dim {
            group.sort_unstable();
        }
        Ok(SimplicialComplex {
            n_vertices,
            faces_by_dim,
        })
    }

    /// Fast path for families already known to be downward closed, grouped by
    /// size and sorted (as produced by the forest enumerator).
    pub(crate) fn from_closed_sorted(n_vertices: usize, faces_by_dim: Vec<Vec<Vec<usize>>>) -> Self {
        let complex = SimplicialComplex {
            n_vertices,
            faces_by_dim,
        };
        debug_assert!(complex.is_downward_closed());
        complex
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Dimension of the complex, or None when there are no nonempty faces.
    pub fn dim(&self) -> Option<usize> {
        if self.faces_by_dim.is_empty() {
            None
        } else {
            Some(self.faces_by_dim.len() - 1)
        }
    }

    pub fn faces(&self, dim: usize) -> &[Vec<usize>] {
        self.faces_by_dim.get(dim).map_or(&[], |g| g.as_slice())
    }

    pub fn face_count(&self, dim: usize) -> usize {
        self.faces(dim).len()
    }

    pub fn face_counts(&self) -> Vec<usize> {
        self.faces_by_dim.iter().map(|g| g.len()).collect()
    }

    pub fn total_faces(&self) -> usize {
        self.faces_by_dim.iter().map(|g| g.len()).sum()
    }

    pub fn contains(&self, face: &[usize]) -> bool {
        if face.is_empty() {
            return true;
        }
        self.faces(face.len() - 1)
            .binary_search_by(|f| f.as_slice().cmp(face))
            .is_ok()
    }

    /// Position of a face within its dimension's sorted list.
    pub(crate) fn face_index(&self, face: &[usize]) -> Option<usize> {
        self.faces(face.len().checked_sub(1)?)
            .binary_search_by(|f| f.as_slice().cmp(face))
            .ok()
    }

    /// All maximal faces, in (dimension, lexicographic) order.
    pub fn facets(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for d in 0..self.faces_by_dim.len() {
            let above: HashSet<Vec<usize>> = self
                .faces(d + 1)
                .iter()
                .flat_map(|f| {
                    (0..f.len()).map(move |skip| {
                        let mut sub = f.clone();
                        sub.remove(skip);
                        sub
                    })
                })
                .collect();
            for face in self.faces(d) {
                if !above.contains(face) {
                    out.push(face.clone());
                }
            }
        }
        out
    }

    /// True iff all maximal faces share the top dimension.
    pub fn is_pure(&self) -> bool {
        let Some(top) = self.dim() else { return true };
        self.facets().iter().all(|f| f.len() == top + 1)
    }

    /// Reduced Euler characteristic: sum over nonempty faces of (-1)^dim,
    /// minus 1 for the empty face.
    pub fn euler_characteristic(&self) -> i64 {
        let mut chi: i64 = -1;
        for (d, group) in self.faces_by_dim.iter().enumerate() {
            let c = group.len() as i64;
            chi += if d % 2 == 0 { c } else { -c };
        }
        chi
    }

    /// Simplicial join: vertices of `other` are shifted past ours, faces are
    /// all unions of a face here (or empty) and a face there (or empty).
    pub fn join(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let shift = self.n_vertices;
        let n = shift + other.n_vertices;
        let dim_bound = self.faces_by_dim.len() + other.faces_by_dim.len();
        let mut faces_by_dim: Vec<Vec<Vec<usize>>> = vec![Vec::new(); dim_bound];
        let empty = vec![Vec::new()];
        let left = |d: Option<usize>| -> &[Vec<usize>] {
            match d {
                None => &empty,
                Some(d) => self.faces(d),
            }
        };
        for da in std::iter::once(None).chain((0..self.faces_by_dim.len()).map(Some)) {
            for a in left(da) {
                for db in std::iter::once(None).chain((0..other.faces_by_dim.len()).map(Some)) {
                    if da.is_none() && db.is_none() {
                        continue;
                    }
                    let bs: &[Vec<usize>] = match db {
                        None => &empty,
                        Some(d) => other.faces(d),
                    };
                    for b in bs {
                        let mut face = a.clone();
                        face.extend(b.iter().map(|&v| v + shift));
                        faces_by_dim[face.len() - 1].push(face);
                    }
                }
            }
        }
        while faces_by_dim.last().map_or(false, |g| g.is_empty()) {
            faces_by_dim.pop();
        }
        for group in &mut faces_by_dim {
            group.sort_unstable();
        }
        SimplicialComplex::from_closed_sorted(n, faces_by_dim)
    }

    /// Apply a vertex permutation: vertex v becomes perm[v].
    pub fn relabel(&self, perm: &[usize]) -> Result<SimplicialComplex, ComplexError> {
        let n = self.n_vertices;
        let mut hit = vec![false; n];
        let valid = perm.len() == n && perm.iter().all(|&p| p < n && !std::mem::replace(&mut hit[p], true));
        if !valid {
            return Err(ComplexError::BadPermutation {
                perm: perm.to_vec(),
                n_vertices: n,
            });
        }
        let mut faces_by_dim = self.faces_by_dim.clone();
        for group in &mut faces_by_dim {
            for face in group.iter_mut() {
                for v in face.iter_mut() {
                    *v = perm[*v];
                }
                face.sort_unstable();
            }
            group.sort_unstable();
        }
        Ok(SimplicialComplex {
            n_vertices: n,
            faces_by_dim,
        })
    }

    /// Remove maximal faces (each checked to be maximal, so the result is
    /// still downward closed).
    pub fn remove_facets(&self, facets: &[Vec<usize>]) -> Result<SimplicialComplex, ComplexError> {
        let maximal: HashSet<Vec<usize>> = self.facets().into_iter().collect();
        let mut doomed: Vec<HashSet<&[usize]>> = vec![HashSet::new(); self.faces_by_dim.len()];
        for face in facets {
            let mut sorted = face.clone();
            sorted.sort_unstable();
            if !maximal.contains(&sorted) {
                return Err(ComplexError::NotAFacet { face: face.clone() });
            }
            let d = sorted.len() - 1;
            let idx = self
                .face_index(&sorted)
                .expect("maximal face is present");
            doomed[d].insert(self.faces_by_dim[d][idx].as_slice());
        }
        let mut faces_by_dim: Vec<Vec<Vec<usize>>> = self
            .faces_by_dim
            .iter()
            .enumerate()
            .map(|(d, group)| {
                group
                    .iter()
                    .filter(|f| !doomed[d].contains(f.as_slice()))
                    .cloned()
                    .collect()
            })
            .collect();
        while faces_by_dim.last().map_or(false, |g: &Vec<Vec<usize>>| g.is_empty()) {
            faces_by_dim.pop();
        }
        Ok(SimplicialComplex {
            n_vertices: self.n_vertices,
            faces_by_dim,
        })
    }

    /// Golden-file dump: one face per line as comma-separated vertex ids,
    /// dimensions in increasing order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for group in &self.faces_by_dim {
            for face in group {
                let line: Vec<String> = face.iter().map(|v| v.to_string()).collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
        }
        out
    }

    pub fn is_downward_closed(&self) -> bool {
        for d in 1..self.faces_by_dim.len() {
            for face in self.faces(d) {
                for skip in 0..face.len() {
                    let mut sub = face.clone();
                    sub.remove(skip);
                    if !self.contains(&sub) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// The complex of directed forests of `g`: vertices are the edge indices of
/// `g` and faces are the edge sets that form directed forests.
pub fn forest_complex(g: &DirectedGraph) -> SimplicialComplex {
    let mut faces_by_dim: Vec<Vec<Vec<usize>>> = Vec::new();
    visit_forest_subsets(g, None, |s| {
        if s.is_empty() {
            return;
        }
        let d = s.len() - 1;
        if faces_by_dim.len() <= d {
            faces_by_dim.resize(d + 1, Vec::new());
        }
        faces_by_dim[d].push(s.to_vec());
    });
    // DFS emits each cardinality class in lexicographic order already
    SimplicialComplex::from_closed_sorted(g.edge_count(), faces_by_dim)
}

/// The independence complex of the path on n vertices: faces are the subsets
/// of 0..n containing no two consecutive integers.
pub fn path_independence_complex(n: usize) -> SimplicialComplex {
    let mut faces_by_dim: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    fn rec(
        n: usize,
        start: usize,
        current: &mut Vec<usize>,
        faces_by_dim: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if !current.is_empty() {
            let d = current.len() - 1;
            if faces_by_dim.len() <= d {
                faces_by_dim.resize(d + 1, Vec::new());
            }
            faces_by_dim[d].push(current.clone());
        }
        for v in start..n {
            if current.last().map_or(false, |&last| v == last + 1) {
                continue;
            }
            current.push(v);
            rec(n, v + 1, current, faces_by_dim);
            current.pop();
        }
    }
    rec(n, 0, &mut current, &mut faces_by_dim);
    SimplicialComplex::from_closed_sorted(n, faces_by_dim)
}

/// The independence complex of the cycle on n vertices (n >= 3): faces are
/// subsets of Z_n containing no two cyclically adjacent elements.
pub fn cycle_independence_complex(n: usize) -> Result<SimplicialComplex, ComplexError> {
    if n < 3 {
        return Err(ComplexError::CycleTooSmall(n));
    }
    let mut faces_by_dim: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    fn rec(
        n: usize,
        start: usize,
        current: &mut Vec<usize>,
        faces_by_dim: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if !current.is_empty() {
            let d = current.len() - 1;
            if faces_by_dim.len() <= d {
                faces_by_dim.resize(d + 1, Vec::new());
            }
            faces_by_dim[d].push(current.clone());
        }
        for v in start..n {
            if current.last().map_or(false, |&last| v == last + 1) {
                continue;
            }
            // wraparound adjacency: n-1 conflicts with 0
            if v == n - 1 && current.first() == Some(&0) {
                continue;
            }
            current.push(v);
            rec(n, v + 1, current, faces_by_dim);
            current.pop();
        }
    }
    rec(n, 0, &mut current, &mut faces_by_dim);
    Ok(SimplicialComplex::from_closed_sorted(n, faces_by_dim))
}

const PURITY_GUARD: usize = 14;

/// Structural test that the forest complex of `g` is pure of full dimension,
/// i.e. every maximal directed forest has n-1 edges, without building the
/// complex.
///
/// Returns false exactly when there are two vertex-disjoint subtrees T1, T2
/// of g, rooted at x1, x2, with the whole in-neighborhood S(x_i) inside
/// V(T_i). The search runs over pairs of disjoint vertex subsets, with the
/// per-subset root validity memoized, so it is exponential in n and guarded.
pub fn purity_criterion(g: &DirectedGraph) -> Result<bool, ComplexError> {
    let n = g.n_vertices();
    if n > PURITY_GUARD {
        return Err(ComplexError::PurityGuard {
            n_vertices: n,
            max: PURITY_GUARD,
        });
    }
    if n == 0 {
        return Ok(true);
    }
    let in_mask: Vec<u32> = (0..n)
        .map(|v| {
            g.in_neighbors(v)
                .into_iter()
                .fold(0u32, |m, u| m | (1 << u))
        })
        .collect();
    let out_adj: Vec<u32> = {
        let mut adj = vec![0u32; n];
        for &(u, v) in g.edges() {
            adj[u] |= 1 << v;
        }
        adj
    };
    // valid[mask]: does mask admit a root x in mask with S(x) inside mask and
    // all of mask reachable from x within mask?
    let full = (1u32 << n) - 1;
    let mut valid = vec![false; (full as usize) + 1];
    for mask in 1u32..=full {
        let mut m = mask;
        'roots: while m != 0 {
            let x = m.trailing_zeros() as usize;
            m &= m - 1;
            if in_mask[x] & !mask != 0 {
                continue;
            }
            // BFS within mask from x
            let mut reached = 1u32 << x;
            let mut frontier = reached;
            while frontier != 0 {
                let mut next = 0u32;
                let mut f = frontier;
                while f != 0 {
                    let v = f.trailing_zeros() as usize;
                    f &= f - 1;
                    next |= out_adj[v] & mask & !reached;
                }
                reached |= next;
                frontier = next;
            }
            if reached == mask {
                valid[mask as usize] = true;
                break 'roots;
            }
        }
    }
    // two disjoint valid subsets witness non-purity
    for a in 1u32..=full {
        if !valid[a as usize] {
            continue;
        }
        let rest = full & !a;
        // enumerate nonempty submasks of rest
        let mut b = rest;
        while b != 0 {
            if valid[b as usize] {
                return Ok(false);
            }
            b = (b - 1) & rest;
        }
    }
    Ok(true)
}
