//! Canonical forms for directed forests on unlabeled vertices, with and
//! without edge labels, plus forest enumeration, edge symmetry groups,
//! admissibility, and the admissible-forest count table.
//!
//! A rooted tree is canonicalized bottom-up with children sorted by their
//! canonical form; a forest is the sorted multiset of its trees. Two forests
//! get equal canonical structures exactly when they are isomorphic, and the
//! canonical structure induces a fixed edge order (preorder over sorted
//! trees) that serves as the reference bijection for all sign computations.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuotientError {
    #[error("edge set is not a directed forest")]
    NotAForest,
    #[error("one label per edge required: {edges} edges, {labels} labels")]
    LabelMismatch { edges: usize, labels: usize },
    #[error("symmetry group guard exceeded: {k} edges > {max}")]
    SymmetryGuard { k: usize, max: usize },
    #[error("table guard exceeded: n_max {n_max} > {max}")]
    TableGuard { n_max: usize, max: usize },
    #[error("cell enumeration guard exceeded: n = {n} > {max_n} (override to proceed)")]
    CellGuard { n: usize, max_n: usize },
    #[error("cell budget exceeded: more than {max_cells} cells")]
    CellBudget { max_cells: usize },
    #[error("need n >= 2 for quotient cells, got {n}")]
    TooSmall { n: usize },
    #[error(
        "E^1 entries are not concentrated on the diagonal: forest {forest} with {k} edges has nontrivial homology in degree {degree}"
    )]
    DiagonalHypothesis {
        forest: String,
        k: usize,
        degree: i64,
    },
    #[error(transparent)]
    Homology(#[from] crate::homology::HomologyError),
}

/// Canonical rooted tree: children sorted ascending by their own canonical
/// form. Derived ordering is the canonical total order on trees.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonTree {
    children: Vec<CanonTree>,
}

impl CanonTree {
    pub fn leaf() -> Self {
        CanonTree {
            children: Vec::new(),
        }
    }

    fn from_children(mut children: Vec<CanonTree>) -> Self {
        children.sort();
        CanonTree { children }
    }

    pub fn children(&self) -> &[CanonTree] {
        &self.children
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(CanonTree::size).sum::<usize>()
    }

    pub fn edge_count(&self) -> usize {
        self.size() - 1
    }
}

impl fmt::Display for CanonTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for c in &self.children {
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Isomorphism class of a directed forest on a fixed number of unlabeled
/// vertices; isolated vertices are leaf trees.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnlabeledForest {
    trees: Vec<CanonTree>, // sorted ascending
}

impl UnlabeledForest {
    pub fn from_trees(mut trees: Vec<CanonTree>) -> Self {
        trees.sort();
        UnlabeledForest { trees }
    }

    pub fn trees(&self) -> &[CanonTree] {
        &self.trees
    }

    pub fn n_vertices(&self) -> usize {
        self.trees.iter().map(CanonTree::size).sum()
    }

    pub fn edge_count(&self) -> usize {
        self.trees.iter().map(CanonTree::edge_count).sum()
    }

    /// Concrete representative: vertex ids assigned in preorder over the
    /// sorted trees, edges in the canonical reference order (the edge to a
    /// child precedes the edges inside that child's subtree).
    pub fn representative(&self) -> (usize, Vec<(usize, usize)>) {
        let mut edges = Vec::with_capacity(self.edge_count());
        let mut next = 0usize;
        for tree in &self.trees {
            rep_tree(tree, &mut next, &mut edges);
        }
        (next, edges)
    }
}

fn rep_tree(tree: &CanonTree, next: &mut usize, edges: &mut Vec<(usize, usize)>) {
    let me = *next;
    *next += 1;
    for child in &tree.children {
        let child_id = *next;
        edges.push((me, child_id));
        rep_tree(child, next, edges);
    }
}

impl fmt::Display for UnlabeledForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.trees {
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Canonicalize a concrete directed forest given as (vertex count, edges).
/// Also returns, for each input edge position, its index in the canonical
/// reference edge order.
pub fn canonical_unlabeled(
    n: usize,
    edges: &[(usize, usize)],
) -> Result<(UnlabeledForest, Vec<usize>), QuotientError> {
    let structure = ForestStructure::build(n, edges)?;
    let mut canon_roots: Vec<(CanonTree, Vec<usize>)> = structure
        .roots
        .iter()
        .map(|&r| canon_unlabeled_rec(r, &structure))
        .collect();
    canon_roots.sort_by(|a, b| a.0.cmp(&b.0));
    let mut edge_map = vec![usize::MAX; edges.len()];
    let mut position = 0usize;
    let mut trees = Vec::with_capacity(canon_roots.len());
    for (tree, order) in canon_roots {
        for input_idx in order {
            edge_map[input_idx] = position;
            position += 1;
        }
        trees.push(tree);
    }
    debug_assert!(edge_map.iter().all(|&p| p != usize::MAX));
    Ok((UnlabeledForest { trees }, edge_map))
}

struct ForestStructure {
    children: Vec<Vec<(usize, usize)>>, // (child vertex, input edge index)
    roots: Vec<usize>,
}

impl ForestStructure {
    fn build(n: usize, edges: &[(usize, usize)]) -> Result<Self, QuotientError> {
        let mut children: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        let mut indeg = vec![0u8; n];
        for (idx, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n || u == v {
                return Err(QuotientError::NotAForest);
            }
            if indeg[v] > 0 {
                return Err(QuotientError::NotAForest);
            }
            indeg[v] = 1;
            children[u].push((v, idx));
        }
        // acyclicity: every vertex must be reachable from some root
        let roots: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = roots.clone();
        for &r in &roots {
            seen[r] = true;
        }
        let mut count = roots.len();
        while let Some(v) = stack.pop() {
            for &(c, _) in &children[v] {
                if !seen[c] {
                    seen[c] = true;
                    count += 1;
                    stack.push(c);
                }
            }
        }
        if count != n {
            return Err(QuotientError::NotAForest);
        }
        Ok(ForestStructure { children, roots })
    }
}

fn canon_unlabeled_rec(v: usize, s: &ForestStructure) -> (CanonTree, Vec<usize>) {
    let mut kids: Vec<(CanonTree, Vec<usize>, usize)> = s.children[v]
        .iter()
        .map(|&(c, edge_idx)| {
            let (tree, order) = canon_unlabeled_rec(c, s);
            (tree, order, edge_idx)
        })
        .collect();
    kids.sort_by(|a, b| a.0.cmp(&b.0));
    let mut order = Vec::new();
    let mut children = Vec::with_capacity(kids.len());
    for (tree, sub_order, edge_idx) in kids {
        order.push(edge_idx);
        order.extend(sub_order);
        children.push(tree);
    }
    (CanonTree { children }, order)
}

/// Canonical rooted tree with edge labels (label of the edge into each
/// child); children sorted by (label, subtree).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabeledCanonTree {
    children: Vec<(u32, LabeledCanonTree)>,
}

impl LabeledCanonTree {
    fn size(&self) -> usize {
        1 + self.children.iter().map(|(_, c)| c.size()).sum::<usize>()
    }

    fn strip(&self) -> CanonTree {
        CanonTree::from_children(self.children.iter().map(|(_, c)| c.strip()).collect())
    }
}

impl fmt::Display for LabeledCanonTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (label, c) in &self.children {
            write!(f, "{label}{c}")?;
        }
        write!(f, ")")
    }
}

/// A cell of the quotient complex: an isomorphism class of edge-labeled
/// directed forests whose label image is exactly {1, ..., n_labels}.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabeledForest {
    trees: Vec<LabeledCanonTree>, // sorted ascending
    n_labels: u32,
}

impl LabeledForest {
    pub fn n_labels(&self) -> u32 {
        self.n_labels
    }

    /// Cell dimension: number of labels minus one.
    pub fn dim(&self) -> usize {
        self.n_labels as usize - 1
    }

    pub fn n_vertices(&self) -> usize {
        self.trees.iter().map(|t| t.size()).sum()
    }

    pub fn edge_count(&self) -> usize {
        self.n_vertices() - self.trees.len()
    }

    pub fn underlying(&self) -> UnlabeledForest {
        UnlabeledForest::from_trees(self.trees.iter().map(|t| t.strip()).collect())
    }

    /// Concrete representative: (vertex count, labeled edges in preorder).
    pub fn representative(&self) -> (usize, Vec<(usize, usize, u32)>) {
        let mut edges = Vec::new();
        let mut next = 0usize;
        for tree in &self.trees {
            rep_labeled(tree, &mut next, &mut edges);
        }
        (next, edges)
    }
}

fn rep_labeled(tree: &LabeledCanonTree, next: &mut usize, edges: &mut Vec<(usize, usize, u32)>) {
    let me = *next;
    *next += 1;
    for (label, child) in &tree.children {
        let child_id = *next;
        edges.push((me, child_id, *label));
        rep_labeled(child, next, edges);
    }
}

impl fmt::Display for LabeledForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.trees {
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Canonicalize a labeled forest. Labels are first normalized to an initial
/// segment 1..=m by the unique order-preserving relabeling.
pub fn canonical_labeled(
    n: usize,
    edges: &[(usize, usize)],
    labels: &[u32],
) -> Result<LabeledForest, QuotientError> {
    if edges.len() != labels.len() {
        return Err(QuotientError::LabelMismatch {
            edges: edges.len(),
            labels: labels.len(),
        });
    }
    let structure = ForestStructure::build(n, edges)?;
    let mut distinct: Vec<u32> = labels.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let normalized: Vec<u32> = labels
        .iter()
        .map(|l| (distinct.binary_search(l).unwrap() + 1) as u32)
        .collect();
    let mut trees: Vec<LabeledCanonTree> = structure
        .roots
        .iter()
        .map(|&r| canon_labeled_rec(r, &structure, &normalized))
        .collect();
    trees.sort();
    Ok(LabeledForest {
        trees,
        n_labels: distinct.len() as u32,
    })
}

fn canon_labeled_rec(v: usize, s: &ForestStructure, labels: &[u32]) -> LabeledCanonTree {
    let mut children: Vec<(u32, LabeledCanonTree)> = s.children[v]
        .iter()
        .map(|&(c, edge_idx)| (labels[edge_idx], canon_labeled_rec(c, s, labels)))
        .collect();
    children.sort();
    LabeledCanonTree { children }
}

/// All canonical rooted trees with the given number of vertices, ascending.
pub fn rooted_trees(size: usize) -> Vec<CanonTree> {
    fn build(size: usize, memo: &mut HashMap<usize, Vec<CanonTree>>) -> Vec<CanonTree> {
        if let Some(v) = memo.get(&size) {
            return v.clone();
        }
        let result = if size == 1 {
            vec![CanonTree::leaf()]
        } else {
            // catalog of all smaller trees, in a fixed total order
            let catalog: Vec<CanonTree> = (1..size).flat_map(|s| build(s, memo)).collect();
            let mut out = Vec::new();
            let mut chosen: Vec<CanonTree> = Vec::new();
            multisets_of_total(&catalog, size - 1, 0, &mut chosen, &mut |children| {
                out.push(CanonTree::from_children(children.to_vec()));
            });
            out.sort();
            out
        };
        memo.insert(size, result.clone());
        result
    }
    build(size, &mut HashMap::new())
}

/// All forests (multisets of rooted trees, isolated vertices included) on
/// exactly n vertices, in canonical order.
pub fn forests_on(n: usize) -> Vec<UnlabeledForest> {
    let catalog: Vec<CanonTree> = (1..=n).flat_map(rooted_trees).collect();
    let mut out = Vec::new();
    let mut chosen: Vec<CanonTree> = Vec::new();
    multisets_of_total(&catalog, n, 0, &mut chosen, &mut |trees| {
        out.push(UnlabeledForest::from_trees(trees.to_vec()));
    });
    out.sort();
    out
}

/// Forests on n vertices with exactly k edges.
pub fn forests_with_edges(n: usize, k: usize) -> Vec<UnlabeledForest> {
    forests_on(n)
        .into_iter()
        .filter(|f| f.edge_count() == k)
        .collect()
}

/// Enumerate multisets from `catalog` (chosen with non-decreasing index)
/// whose sizes sum to exactly `total`.
fn multisets_of_total(
    catalog: &[CanonTree],
    total: usize,
    min_index: usize,
    chosen: &mut Vec<CanonTree>,
    sink: &mut impl FnMut(&[CanonTree]),
) {
    if total == 0 {
        sink(chosen);
        return;
    }
    for i in min_index..catalog.len() {
        let s = catalog[i].size();
        if s > total {
            continue;
        }
        chosen.push(catalog[i].clone());
        multisets_of_total(catalog, total - s, i, chosen, sink);
        chosen.pop();
    }
}

pub const SYMMETRY_EDGE_GUARD: usize = 8;

/// The image of Aut(T) in the symmetric group on T's edges, relative to the
/// canonical reference edge order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSymmetryGroup {
    k: usize,
    elements: Vec<Vec<usize>>, // sorted, each a permutation of 0..k
}

impl EdgeSymmetryGroup {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Vec<usize>] {
        &self.elements
    }

    pub fn contains_identity(&self) -> bool {
        self.elements.iter().any(|p| p.iter().enumerate().all(|(i, &x)| i == x))
    }

    /// All elements even?
    pub fn is_alternating(&self) -> bool {
        self.elements.iter().all(|p| permutation_is_even(p))
    }

    /// Orbits of edge positions under the group, each sorted, ordered by
    /// minimum element.
    pub fn edge_orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.k];
        let mut orbits = Vec::new();
        for start in 0..self.k {
            if seen[start] {
                continue;
            }
            let mut orbit: Vec<usize> = self
                .elements
                .iter()
                .map(|p| p[start])
                .collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &e in &orbit {
                seen[e] = true;
            }
            orbits.push(orbit);
        }
        orbits
    }

    /// Order of the stabilizer of one edge position.
    pub fn stabilizer_order(&self, edge: usize) -> usize {
        self.elements.iter().filter(|p| p[edge] == edge).count()
    }

    /// Closure under composition and inverses (diagnostic; the construction
    /// guarantees it).
    pub fn is_closed(&self) -> bool {
        use std::collections::HashSet;
        let set: HashSet<&[usize]> = self.elements.iter().map(|p| p.as_slice()).collect();
        for a in &self.elements {
            let mut inv = vec![0usize; self.k];
            for (i, &x) in a.iter().enumerate() {
                inv[x] = i;
            }
            if !set.contains(inv.as_slice()) {
                return false;
            }
            for b in &self.elements {
                let composed: Vec<usize> = (0..self.k).map(|i| a[b[i]]).collect();
                if !set.contains(composed.as_slice()) {
                    return false;
                }
            }
        }
        true
    }
}

pub fn permutation_is_even(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    let mut transpositions = 0usize;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0usize;
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            v = p[v];
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions % 2 == 0
}

/// Compute the edge symmetry group of a forest (guarded by edge count).
///
/// Automorphisms permute isomorphic trees and act within trees by permuting
/// isomorphic child subtrees; both show up as block permutations of the
/// canonical edge order, which is how the group is generated here. Isolated
/// vertices carry no edges and are ignored.
pub fn forest_symmetry_group(t: &UnlabeledForest) -> Result<EdgeSymmetryGroup, QuotientError> {
    forest_symmetry_group_guarded(t, SYMMETRY_EDGE_GUARD)
}

pub fn forest_symmetry_group_guarded(
    t: &UnlabeledForest,
    max_edges: usize,
) -> Result<EdgeSymmetryGroup, QuotientError> {
    let k = t.edge_count();
    if k > max_edges {
        return Err(QuotientError::SymmetryGuard { k, max: max_edges });
    }
    // blocks at forest level: each non-isolated tree occupies a contiguous
    // range of edge positions, with no leading root edge
    let nontrivial: Vec<&CanonTree> = t.trees().iter().filter(|t| t.edge_count() > 0).collect();
    let mut blocks = Vec::new();
    let mut offset = 0usize;
    for tree in &nontrivial {
        blocks.push(Block {
            offset,
            len: tree.edge_count(),
            tree: (*tree).clone(),
            leading_edge: false,
        });
        offset += tree.edge_count();
    }
    debug_assert_eq!(offset, k);
    let mut memo: HashMap<CanonTree, Vec<Vec<usize>>> = HashMap::new();
    let mut elements = block_autos(&blocks, k, &mut memo);
    elements.sort();
    elements.dedup();
    Ok(EdgeSymmetryGroup { k, elements })
}

struct Block {
    offset: usize,
    len: usize,
    tree: CanonTree,
    leading_edge: bool,
}

/// Edge automorphisms of a single canonical tree, positions 0..edge_count.
fn tree_edge_autos(tree: &CanonTree, memo: &mut HashMap<CanonTree, Vec<Vec<usize>>>) -> Vec<Vec<usize>> {
    if let Some(v) = memo.get(tree) {
        return v.clone();
    }
    let k = tree.edge_count();
    let mut blocks = Vec::new();
    let mut offset = 0usize;
    for child in tree.children() {
        blocks.push(Block {
            offset,
            len: child.size(), // root edge + child's own edges
            tree: child.clone(),
            leading_edge: true,
        });
        offset += child.size();
    }
    debug_assert_eq!(offset, k);
    let result = block_autos(&blocks, k, memo);
    memo.insert(tree.clone(), result.clone());
    result
}

/// All edge permutations generated by permuting identical blocks and acting
/// inside each block by its tree's own automorphisms.
fn block_autos(
    blocks: &[Block],
    total_len: usize,
    memo: &mut HashMap<CanonTree, Vec<Vec<usize>>>,
) -> Vec<Vec<usize>> {
    // runs of identical trees are contiguous because inputs are sorted
    let mut runs: Vec<(usize, usize)> = Vec::new(); // (start block, end block)
    let mut i = 0;
    while i < blocks.len() {
        let mut j = i + 1;
        while j < blocks.len() && blocks[j].tree == blocks[i].tree {
            j += 1;
        }
        runs.push((i, j));
        i = j;
    }
    let inner: Vec<Vec<Vec<usize>>> = blocks
        .iter()
        .map(|b| tree_edge_autos(&b.tree, memo))
        .collect();

    let mut results = Vec::new();
    let identity: Vec<usize> = (0..total_len).collect();
    let mut current = identity;
    compose_runs(blocks, &runs, &inner, 0, &mut current, &mut results);
    results
}

fn compose_runs(
    blocks: &[Block],
    runs: &[(usize, usize)],
    inner: &[Vec<Vec<usize>>],
    run_idx: usize,
    current: &mut Vec<usize>,
    results: &mut Vec<Vec<usize>>,
) {
    if run_idx == runs.len() {
        results.push(current.clone());
        return;
    }
    let (start, end) = runs[run_idx];
    let members: Vec<usize> = (start..end).collect();
    // all assignments: permutation pi of the run plus an inner automorphism
    // per member
    permutations(&members, &mut |pi| {
        // choice[i] indexes into inner[members[i]]'s automorphism list
        let mut choice = vec![0usize; members.len()];
        loop {
            for (slot, &b) in members.iter().enumerate() {
                let src = &blocks[b];
                let dst = &blocks[pi[slot]];
                let auto = &inner[b][choice[slot]];
                if src.leading_edge {
                    current[src.offset] = dst.offset;
                    for e in 0..src.len - 1 {
                        current[src.offset + 1 + e] = dst.offset + 1 + auto[e];
                    }
                } else {
                    for e in 0..src.len {
                        current[src.offset + e] = dst.offset + auto[e];
                    }
                }
            }
            compose_runs(blocks, runs, inner, run_idx + 1, current, results);
            // odometer over inner choices
            let mut pos = 0;
            loop {
                if pos == members.len() {
                    return;
                }
                choice[pos] += 1;
                if choice[pos] < inner[members[pos]].len() {
                    break;
                }
                choice[pos] = 0;
                pos += 1;
            }
        }
    });
}

/// Call `f` with every permutation of `items`.
fn permutations(items: &[usize], f: &mut impl FnMut(&[usize])) {
    let mut buf = items.to_vec();
    fn heap(n: usize, buf: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if n <= 1 {
            f(buf);
            return;
        }
        for i in 0..n {
            heap(n - 1, buf, f);
            if n % 2 == 0 {
                buf.swap(i, n - 1);
            } else {
                buf.swap(0, n - 1);
            }
        }
    }
    let n = buf.len();
    heap(n, &mut buf, f);
}

/// Admissible means every edge symmetry is an even permutation.
pub fn is_admissible(t: &UnlabeledForest) -> Result<bool, QuotientError> {
    Ok(forest_symmetry_group(t)?.is_alternating())
}

pub const TABLE_GUARD: usize = 8;

/// Counts of admissible forests with k edges on n vertices, for
/// 1 <= k < n_max and 1 <= n <= n_max.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleForestTable {
    n_max: usize,
    counts: Vec<Vec<u64>>, // counts[k-1][n-1]
}

impl AdmissibleForestTable {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn get(&self, k: usize, n: usize) -> u64 {
        assert!(k >= 1 && n >= 1 && n <= self.n_max, "table index out of range");
        if k > self.counts.len() {
            return 0;
        }
        self.counts[k - 1][n - 1]
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.counts
    }
}

/// Build the f_{k,n} table up to n_max (guarded).
pub fn admissible_forest_table(n_max: usize) -> Result<AdmissibleForestTable, QuotientError> {
    if n_max > TABLE_GUARD {
        return Err(QuotientError::TableGuard {
            n_max,
            max: TABLE_GUARD,
        });
    }
    let k_max = n_max.saturating_sub(1).max(1);
    let mut counts = vec![vec![0u64; n_max]; k_max];
    for n in 1..=n_max {
        for forest in forests_on(n) {
            let k = forest.edge_count();
            if k == 0 {
                continue;
            }
            if is_admissible(&forest)? {
                counts[k - 1][n - 1] += 1;
            }
        }
    }
    Ok(AdmissibleForestTable { n_max, counts })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn canon(n: usize, edges: &[(usize, usize)]) -> UnlabeledForest {
        canonical_unlabeled(n, edges).unwrap().0
    }

    #[test]
    fn path_labelings_are_distinct_but_star_labelings_merge() {
        // path a->b->c labeled (1,2) vs (2,1): distinct cells
        let p12 = canonical_labeled(3, &[(0, 1), (1, 2)], &[1, 2]).unwrap();
        let p21 = canonical_labeled(3, &[(0, 1), (1, 2)], &[2, 1]).unwrap();
        assert_ne!(p12, p21);
        // 2-star labeled (1,1): same under either vertex naming
        let s_a = canonical_labeled(3, &[(0, 1), (0, 2)], &[1, 1]).unwrap();
        let s_b = canonical_labeled(3, &[(2, 0), (2, 1)], &[1, 1]).unwrap();
        assert_eq!(s_a, s_b);
        // and the star's (1,2) equals its (2,1)
        let s12 = canonical_labeled(3, &[(0, 1), (0, 2)], &[1, 2]).unwrap();
        let s21 = canonical_labeled(3, &[(0, 1), (0, 2)], &[2, 1]).unwrap();
        assert_eq!(s12, s21);
    }

    #[test]
    fn label_normalization_is_order_preserving() {
        let sparse_labels = canonical_labeled(3, &[(0, 1), (1, 2)], &[10, 700]).unwrap();
        let dense_labels = canonical_labeled(3, &[(0, 1), (1, 2)], &[1, 2]).unwrap();
        assert_eq!(sparse_labels, dense_labels);
    }

    #[test]
    fn canonical_form_is_relabeling_invariant() {
        // the 4-vertex "Y": root with one child that has two children
        let a = canon(4, &[(0, 1), (1, 2), (1, 3)]);
        let b = canon(4, &[(3, 2), (2, 0), (2, 1)]);
        assert_eq!(a, b);
        let c = canon(4, &[(0, 1), (0, 2), (2, 3)]);
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_non_forests() {
        assert!(canonical_unlabeled(2, &[(0, 1), (1, 0)]).is_err());
        assert!(canonical_unlabeled(3, &[(0, 2), (1, 2)]).is_err());
        assert!(canonical_unlabeled(2, &[(0, 0)]).is_err());
    }

    #[test]
    fn representative_round_trips() {
        let f = canon(6, &[(0, 1), (1, 2), (3, 4)]);
        let (n, edges) = f.representative();
        assert_eq!(n, 6);
        assert_eq!(edges.len(), 3);
        assert_eq!(canon(n, &edges), f);
    }

    #[test]
    fn edge_map_points_into_reference_order() {
        let (forest, map) = canonical_unlabeled(4, &[(2, 3), (0, 1), (1, 2)]).unwrap();
        // the forest is the 4-path; reference order is root-down
        let (_, ref_edges) = forest.representative();
        assert_eq!(ref_edges, vec![(0, 1), (1, 2), (2, 3)]);
        // input edge (0,1) is the path's top edge, so it maps to position 0
        assert_eq!(map[1], 0);
        assert_eq!(map[2], 1);
        assert_eq!(map[0], 2);
    }

    #[test]
    fn rooted_tree_counts() {
        // A000081: rooted trees on n unlabeled nodes
        let expected = [1usize, 1, 2, 4, 9, 20, 48, 115];
        for (i, &count) in expected.iter().enumerate() {
            assert_eq!(rooted_trees(i + 1).len(), count, "size {}", i + 1);
        }
    }

    #[test]
    fn forest_counts() {
        // forests on n nodes = rooted trees on n+1 nodes
        for n in 1..=7usize {
            assert_eq!(forests_on(n).len(), rooted_trees(n + 1).len(), "n = {n}");
        }
    }

    #[test]
    fn path_is_rigid_star_is_symmetric() {
        let path = canon(4, &[(0, 1), (1, 2), (2, 3)]);
        let g = forest_symmetry_group(&path).unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.contains_identity());

        let star = canon(4, &[(0, 1), (0, 2), (0, 3)]);
        let g = forest_symmetry_group(&star).unwrap();
        assert_eq!(g.order(), 6); // full S_3 on the edges
        assert!(g.is_closed());
        assert!(!g.is_alternating()); // contains transpositions
    }

    #[test]
    fn two_identical_paths_have_one_involution() {
        // two disjoint directed 3-edge paths: 8 vertices, 6 edges
        let f = canon(
            8,
            &[(0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (6, 7)],
        );
        let g = forest_symmetry_group(&f).unwrap();
        assert_eq!(g.order(), 2);
        let swap = g
            .elements()
            .iter()
            .find(|p| !p.iter().enumerate().all(|(i, &x)| i == x))
            .unwrap();
        // the involution is a product of three disjoint transpositions
        let mut moved: Vec<(usize, usize)> = swap
            .iter()
            .enumerate()
            .filter(|&(i, &x)| i < x)
            .map(|(i, &x)| (i, x))
            .collect();
        moved.sort();
        assert_eq!(moved.len(), 3);
        // three disjoint transpositions form an odd permutation, so this
        // forest is the standard inadmissible torsion witness
        assert!(!permutation_is_even(swap));
        assert!(!is_admissible(&f).unwrap());
    }

    #[test]
    fn admissibility_small_cases() {
        let single = canon(2, &[(0, 1)]);
        assert!(is_admissible(&single).unwrap());
        let star2 = canon(3, &[(0, 1), (0, 2)]);
        assert!(!is_admissible(&star2).unwrap());
    }

    #[test]
    fn symmetry_guard() {
        let big_star = canon(
            10,
            &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6), (0, 7), (0, 8), (0, 9)],
        );
        assert!(matches!(
            forest_symmetry_group(&big_star),
            Err(QuotientError::SymmetryGuard { k: 9, .. })
        ));
    }

    #[test]
    fn orbits_and_stabilizers() {
        let star = canon(4, &[(0, 1), (0, 2), (0, 3)]);
        let g = forest_symmetry_group(&star).unwrap();
        assert_eq!(g.edge_orbits(), vec![vec![0, 1, 2]]);
        assert_eq!(g.stabilizer_order(0), 2);
    }

    #[test]
    fn table_matches_known_values() {
        let table = admissible_forest_table(6).unwrap();
        let expected: [[u64; 6]; 5] = [
            [0, 1, 1, 1, 1, 1],
            [0, 0, 1, 1, 1, 1],
            [0, 0, 0, 2, 3, 3],
            [0, 0, 0, 0, 4, 7],
            [0, 0, 0, 0, 0, 8],
        ];
        for k in 1..=5usize {
            for n in 1..=6usize {
                assert_eq!(
                    table.get(k, n),
                    expected[k - 1][n - 1],
                    "f_{{{k},{n}}}"
                );
            }
        }
    }

    #[test]
    fn table_guard() {
        assert!(matches!(
            admissible_forest_table(9),
            Err(QuotientError::TableGuard { .. })
        ));
    }

    #[test]
    fn display_strings() {
        let f = canon(3, &[(0, 1), (1, 2)]);
        assert_eq!(f.to_string(), "((()))");
        let lf = canonical_labeled(3, &[(0, 1), (1, 2)], &[1, 2]).unwrap();
        assert_eq!(lf.to_string(), "(1(2()))");
    }
}
