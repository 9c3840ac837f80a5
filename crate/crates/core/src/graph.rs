//! Directed graphs, directed-forest recognition, and enumeration of all
//! directed-forest edge subsets.
//!
//! Edge identity is positional: an edge is referred to by its index into the
//! graph's edge list, and every face-like object downstream (simplices of the
//! forest complex, shelling facets) is a sorted set of edge indices.

use thiserror::Error;

/// Errors from graph construction, parsing, and edge-subset validation.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("empty graph file: missing vertex-count header")]
    MissingHeader,
    #[error("line {line}: cannot parse {text:?} as \"u v\"")]
    Malformed { line: usize, text: String },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: duplicate edge {from} -> {to}")]
    DuplicateEdge {
        line: usize,
        from: usize,
        to: usize,
    },
    #[error("line {line}: vertex {vertex} out of range (graph has {n_vertices} vertices)")]
    VertexOutOfRange {
        line: usize,
        vertex: usize,
        n_vertices: usize,
    },
    #[error("double cycle graph needs n >= 3, got {0}")]
    CycleTooSmall(usize),
    #[error("double string graph needs n >= 1, got {0}")]
    StringTooSmall(usize),
    #[error("edge subset indices must be strictly increasing")]
    SubsetNotSorted,
    #[error("edge index {index} out of range (graph has {n_edges} edges)")]
    EdgeOutOfRange { index: usize, n_edges: usize },
}

/// A finite directed graph without self-loops or duplicate edges.
///
/// Vertices are `0..n_vertices`; the edge list order is part of the identity
/// of the graph, since edges are addressed by index everywhere else.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DirectedGraph {
    n_vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl DirectedGraph {
    pub fn new(n_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        // line numbers are meaningless for programmatic construction; use the
        // edge position (1-based) so messages stay useful
        for (i, &(u, v)) in edges.iter().enumerate() {
            let line = i + 1;
            if u == v {
                return Err(GraphError::SelfLoop { line, vertex: u });
            }
            for &w in [u, v].iter() {
                if w >= n_vertices {
                    return Err(GraphError::VertexOutOfRange {
                        line,
                        vertex: w,
                        n_vertices,
                    });
                }
            }
            if edges[..i].contains(&(u, v)) {
                return Err(GraphError::DuplicateEdge {
                    line,
                    from: u,
                    to: v,
                });
            }
        }
        Ok(DirectedGraph { n_vertices, edges })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, index: usize) -> (usize, usize) {
        self.edges[index]
    }

    pub fn has_edge(&self, source: usize, target: usize) -> bool {
        self.edges.contains(&(source, target))
    }

    /// In-neighborhood S(v): all u with an edge u -> v.
    pub fn in_neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter(|&&(_, t)| t == v)
            .map(|&(s, _)| s)
            .collect()
    }
}

/// Parse the graph file format: first non-comment line is the vertex count,
/// each following non-empty line is `u v` for a directed edge u -> v.
/// `#` starts a comment line. Edge index equals the order of appearance.
pub fn parse_graph(text: &str) -> Result<DirectedGraph, GraphError> {
    let mut n_vertices: Option<usize> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        match n_vertices {
            None => {
                let n = content.parse::<usize>().map_err(|_| GraphError::Malformed {
                    line,
                    text: raw.to_string(),
                })?;
                n_vertices = Some(n);
            }
            Some(n) => {
                let mut it = content.split_whitespace();
                let (u, v) = match (it.next(), it.next(), it.next()) {
                    (Some(a), Some(b), None) => {
                        let parse = |s: &str| {
                            s.parse::<usize>().map_err(|_| GraphError::Malformed {
                                line,
                                text: raw.to_string(),
                            })
                        };
                        (parse(a)?, parse(b)?)
                    }
                    _ => {
                        return Err(GraphError::Malformed {
                            line,
                            text: raw.to_string(),
                        })
                    }
                };
                if u == v {
                    return Err(GraphError::SelfLoop { line, vertex: u });
                }
                for &w in [u, v].iter() {
                    if w >= n {
                        return Err(GraphError::VertexOutOfRange {
                            line,
                            vertex: w,
                            n_vertices: n,
                        });
                    }
                }
                if edges.contains(&(u, v)) {
                    return Err(GraphError::DuplicateEdge {
                        line,
                        from: u,
                        to: v,
                    });
                }
                edges.push((u, v));
            }
        }
    }
    let n = n_vertices.ok_or(GraphError::MissingHeader)?;
    Ok(DirectedGraph {
        n_vertices: n,
        edges,
    })
}

/// The complete double directed graph G_n: one edge in each direction between
/// any pair of vertices, n(n-1) edges total, ordered lexicographically by
/// (source, target).
pub fn complete_double_graph(n: usize) -> DirectedGraph {
    let mut edges = Vec::with_capacity(n.saturating_mul(n.saturating_sub(1)));
    for i in 0..n {
        for j in 0..n {
            if i != j {
                edges.push((i, j));
            }
        }
    }
    DirectedGraph {
        n_vertices: n,
        edges,
    }
}

/// The double directed cycle C_n on vertices Z_n, edges (i -> i+1) and
/// (i+1 -> i) for each i, 2n edges total.
pub fn double_cycle_graph(n: usize) -> Result<DirectedGraph, GraphError> {
    if n < 3 {
        return Err(GraphError::CycleTooSmall(n));
    }
    let mut edges = Vec::with_capacity(2 * n);
    for i in 0..n {
        let j = (i + 1) % n;
        edges.push((i, j));
        edges.push((j, i));
    }
    Ok(DirectedGraph {
        n_vertices: n,
        edges,
    })
}

/// The double directed string L_n on n+1 vertices: edges (i -> i+1) and
/// (i+1 -> i) for i in 0..n, 2n edges total. Edge 2i is (i -> i+1), edge
/// 2i+1 is (i+1 -> i).
pub fn double_string_graph(n: usize) -> Result<DirectedGraph, GraphError> {
    if n < 1 {
        return Err(GraphError::StringTooSmall(n));
    }
    let mut edges = Vec::with_capacity(2 * n);
    for i in 0..n {
        edges.push((i, i + 1));
        edges.push((i + 1, i));
    }
    Ok(DirectedGraph {
        n_vertices: n + 1,
        edges,
    })
}

/// The string with tail on n+2 vertices: L_n plus one extra vertex n+1 with a
/// single edge (n+1 -> n) into the end of the string, 2n+1 edges total.
pub fn string_with_tail(n: usize) -> Result<DirectedGraph, GraphError> {
    let base = double_string_graph(n)?;
    let mut edges = base.edges;
    edges.push((n + 1, n));
    Ok(DirectedGraph {
        n_vertices: n + 2,
        edges,
    })
}

/// A sorted set of edge indices into a fixed graph; a candidate face of the
/// forest complex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeSubset {
    indices: Vec<usize>,
}

impl EdgeSubset {
    pub fn new(graph: &DirectedGraph, indices: Vec<usize>) -> Result<Self, GraphError> {
        if !indices.windows(2).all(|w| w[0] < w[1]) {
            return Err(GraphError::SubsetNotSorted);
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= graph.edge_count()) {
            return Err(GraphError::EdgeOutOfRange {
                index: bad,
                n_edges: graph.edge_count(),
            });
        }
        Ok(EdgeSubset { indices })
    }

    pub(crate) fn from_sorted(indices: Vec<usize>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        EdgeSubset { indices }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// True iff the subgraph spanned by the edge subset is a directed forest:
/// every vertex has in-degree at most 1 and the underlying undirected
/// multigraph is acyclic (so an antiparallel pair already counts as a cycle).
pub fn is_directed_forest(graph: &DirectedGraph, subset: &EdgeSubset) -> bool {
    is_forest_indices(graph, subset.indices())
}

pub(crate) fn is_forest_indices(graph: &DirectedGraph, indices: &[usize]) -> bool {
    let n = graph.n_vertices();
    let mut indeg = vec![0u8; n];
    let mut uf = UnionFind::new(n);
    for &e in indices {
        let (u, v) = graph.edge(e);
        if indeg[v] > 0 {
            return false;
        }
        indeg[v] = 1;
        if !uf.union(u, v) {
            return false;
        }
    }
    true
}

/// Union-find with undo, used by the backtracking forest enumerator.
struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    // (child_root, parent_root) merges in order, for rollback
    trail: Vec<(usize, usize)>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
            trail: Vec::new(),
        }
    }

    fn find(&self, mut x: usize) -> usize {
        // no path compression so that unions can be undone
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    /// Returns false (and does nothing) if x and y are already connected.
    fn union(&mut self, x: usize, y: usize) -> bool {
        let (mut rx, mut ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        if self.size[rx] < self.size[ry] {
            std::mem::swap(&mut rx, &mut ry);
        }
        self.parent[ry] = rx;
        self.size[rx] += self.size[ry];
        self.trail.push((ry, rx));
        true
    }

    fn undo(&mut self) {
        let (child, parent) = self.trail.pop().expect("undo without union");
        self.parent[child] = child;
        self.size[parent] -= self.size[child];
    }
}

/// Visit every edge subset of `graph` that is a directed forest, including
/// the empty subset, in lexicographic order of the sorted index sequences.
///
/// The enumeration backtracks and only ever extends forests, which is exact
/// because forests form a downward-closed family. `max_size` caps the
/// cardinality of visited subsets (a forest never exceeds n-1 edges anyway).
pub fn visit_forest_subsets<F: FnMut(&[usize])>(
    graph: &DirectedGraph,
    max_size: Option<usize>,
    mut f: F,
) {
    let cap = max_size
        .unwrap_or(usize::MAX)
        .min(graph.n_vertices().saturating_sub(1));
    let mut indeg = vec![0u8; graph.n_vertices()];
    let mut uf = UnionFind::new(graph.n_vertices());
    let mut current: Vec<usize> = Vec::new();
    visit_rec(graph, cap, 0, &mut current, &mut indeg, &mut uf, &mut f);
}

fn visit_rec<F: FnMut(&[usize])>(
    graph: &DirectedGraph,
    cap: usize,
    start: usize,
    current: &mut Vec<usize>,
    indeg: &mut Vec<u8>,
    uf: &mut UnionFind,
    f: &mut F,
) {
    f(current);
    if current.len() >= cap {
        return;
    }
    for e in start..graph.edge_count() {
        let (u, v) = graph.edge(e);
        if indeg[v] > 0 {
            continue;
        }
        if !uf.union(u, v) {
            continue;
        }
        indeg[v] = 1;
        current.push(e);
        visit_rec(graph, cap, e + 1, current, indeg, uf, f);
        current.pop();
        indeg[v] = 0;
        uf.undo();
    }
}

/// All directed-forest edge subsets (including the empty one) in
/// lexicographic order.
pub fn enumerate_forest_subsets(
    graph: &DirectedGraph,
    max_size: Option<usize>,
) -> Vec<EdgeSubset> {
    let mut out = Vec::new();
    visit_forest_subsets(graph, max_size, |s| {
        out.push(EdgeSubset::from_sorted(s.to_vec()))
    });
    out
}

/// Forest subsets grouped by cardinality; within each group the order is
/// lexicographic.
pub fn forest_subsets_by_size(
    graph: &DirectedGraph,
    max_size: Option<usize>,
) -> Vec<Vec<EdgeSubset>> {
    let cap = max_size
        .unwrap_or(usize::MAX)
        .min(graph.n_vertices().saturating_sub(1));
    let mut groups: Vec<Vec<EdgeSubset>> = vec![Vec::new(); cap + 1];
    visit_forest_subsets(graph, max_size, |s| {
        groups[s.len()].push(EdgeSubset::from_sorted(s.to_vec()))
    });
    while groups.len() > 1 && groups.last().map_or(false, |g| g.is_empty()) {
        groups.pop();
    }
    groups
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Oracle: the root/unique-directed-path definition of a directed forest.
    /// The vertex set splits into components such that each component has a
    /// root r with a unique directed path from r to every vertex of the
    /// component, and no edges join components. Equivalently: in-degree of a
    /// root is 0, every other vertex is reached from exactly one root by
    /// exactly one path.
    fn is_forest_by_root_paths(graph: &DirectedGraph, indices: &[usize]) -> bool {
        let n = graph.n_vertices();
        let edges: Vec<(usize, usize)> = indices.iter().map(|&e| graph.edge(e)).collect();
        let roots: Vec<usize> = (0..n)
            .filter(|&v| edges.iter().all(|&(_, t)| t != v))
            .collect();
        // count directed paths from each root to each vertex by DFS over all
        // simple walks; forests are small in tests, so brute force is fine
        let mut path_counts = vec![0usize; n];
        for &r in &roots {
            let mut stack = vec![r];
            while let Some(v) = stack.pop() {
                path_counts[v] += 1;
                if path_counts[v] > 2 * n {
                    return false; // cycle blew up the walk count
                }
                for &(s, t) in &edges {
                    if s == v {
                        stack.push(t);
                    }
                }
            }
        }
        path_counts.iter().all(|&c| c == 1)
    }

    #[test]
    fn parse_basic() {
        let g = parse_graph("3\n0 1\n1 0").unwrap();
        assert_eq!(g.n_vertices(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 0)]);
    }

    #[test]
    fn parse_comments_and_blanks() {
        let g = parse_graph("# graph\n3\n\n0 1 # forward\n1 2\n").unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn parse_self_loop() {
        assert_eq!(
            parse_graph("2\n0 0"),
            Err(GraphError::SelfLoop { line: 2, vertex: 0 })
        );
    }

    #[test]
    fn parse_duplicate_edge() {
        assert_eq!(
            parse_graph("3\n0 1\n0 1"),
            Err(GraphError::DuplicateEdge {
                line: 3,
                from: 0,
                to: 1
            })
        );
    }

    #[test]
    fn parse_out_of_range() {
        assert!(matches!(
            parse_graph("2\n0 5"),
            Err(GraphError::VertexOutOfRange { line: 2, vertex: 5, .. })
        ));
    }

    #[test]
    fn parse_malformed() {
        assert!(matches!(
            parse_graph("3\n0"),
            Err(GraphError::Malformed { line: 2, .. })
        ));
        assert_eq!(parse_graph("# nothing\n"), Err(GraphError::MissingHeader));
    }

    #[test]
    fn complete_graph_edge_counts() {
        assert_eq!(complete_double_graph(3).edge_count(), 6);
        assert_eq!(complete_double_graph(1).edge_count(), 0);
        assert_eq!(complete_double_graph(4).edge_count(), 12);
    }

    #[test]
    fn cycle_graph() {
        assert_eq!(double_cycle_graph(5).unwrap().edge_count(), 10);
        assert_eq!(double_cycle_graph(2), Err(GraphError::CycleTooSmall(2)));
        // C_3 equals G_3 as a graph (same edge set, not necessarily same order)
        let c3 = double_cycle_graph(3).unwrap();
        let g3 = complete_double_graph(3);
        let mut a = c3.edges().to_vec();
        let mut b = g3.edges().to_vec();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn string_graphs() {
        let l3 = double_string_graph(3).unwrap();
        assert_eq!((l3.n_vertices(), l3.edge_count()), (4, 6));
        let t3 = string_with_tail(3).unwrap();
        assert_eq!((t3.n_vertices(), t3.edge_count()), (5, 7));
        let l1 = double_string_graph(1).unwrap();
        assert_eq!((l1.n_vertices(), l1.edge_count()), (2, 2));
        assert_eq!(double_string_graph(0), Err(GraphError::StringTooSmall(0)));
    }

    #[test]
    fn forest_recognition() {
        let g3 = complete_double_graph(3);
        let idx = |s, t| g3.edges().iter().position(|&e| e == (s, t)).unwrap();
        let sub = |pairs: &[(usize, usize)]| {
            let mut v: Vec<usize> = pairs.iter().map(|&(s, t)| idx(s, t)).collect();
            v.sort();
            EdgeSubset::new(&g3, v).unwrap()
        };
        assert!(is_directed_forest(&g3, &sub(&[(0, 1), (0, 2)])));
        assert!(!is_directed_forest(&g3, &sub(&[(0, 1), (2, 1)])));
        assert!(!is_directed_forest(&g3, &sub(&[(0, 1), (1, 2), (2, 0)])));
        // antiparallel pair is a cycle in the underlying multigraph
        assert!(!is_directed_forest(&g3, &sub(&[(0, 1), (1, 0)])));
    }

    #[test]
    fn edge_subset_validation() {
        let g = complete_double_graph(3);
        assert_eq!(
            EdgeSubset::new(&g, vec![2, 1]),
            Err(GraphError::SubsetNotSorted)
        );
        assert!(matches!(
            EdgeSubset::new(&g, vec![0, 17]),
            Err(GraphError::EdgeOutOfRange { index: 17, .. })
        ));
    }

    #[test]
    fn g3_forest_counts() {
        // oracle: brute force over all C(6,2)=15 two-subsets
        let g3 = complete_double_graph(3);
        let mut two = 0;
        for a in 0..6 {
            for b in (a + 1)..6 {
                if is_forest_indices(&g3, &[a, b]) {
                    two += 1;
                }
            }
        }
        assert_eq!(two, 9); // = 3^{3-1} rooted labeled trees on 3 vertices

        let by_size = forest_subsets_by_size(&g3, None);
        assert_eq!(by_size[1].len(), 6); // every single edge is a forest
        assert_eq!(by_size[2].len(), 9);
        assert_eq!(by_size.len(), 3); // no forest has 3 edges on 3 vertices
    }

    #[test]
    fn c5_forest_sizes() {
        let c5 = double_cycle_graph(5).unwrap();
        let by_size = forest_subsets_by_size(&c5, None);
        assert_eq!(by_size.len(), 5); // maximum forest size 4
        assert!(!by_size[4].is_empty());
    }

    #[test]
    fn spanning_tree_counts_are_n_to_n_minus_1() {
        // |forest subsets of size n-1 in G_n| = n^{n-1}
        for n in 2..=5usize {
            let g = complete_double_graph(n);
            let facets = forest_subsets_by_size(&g, Some(n - 1))
                .pop()
                .unwrap()
                .len();
            assert_eq!(facets, n.pow(n as u32 - 1), "n = {n}");
        }
    }

    #[test]
    fn enumeration_is_lexicographic_and_deterministic() {
        let g = complete_double_graph(3);
        let all = enumerate_forest_subsets(&g, None);
        assert_eq!(all[0].indices(), &[] as &[usize]);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        assert_eq!(all, enumerate_forest_subsets(&g, None));
    }

    #[test]
    fn max_size_caps_enumeration() {
        let g = complete_double_graph(4);
        let capped = enumerate_forest_subsets(&g, Some(2));
        assert!(capped.iter().all(|s| s.len() <= 2));
        let full = enumerate_forest_subsets(&g, None);
        let expect: Vec<_> = full.iter().filter(|s| s.len() <= 2).cloned().collect();
        assert_eq!(capped, expect);
    }

    #[test]
    fn indegree_acyclicity_matches_root_path_definition() {
        // exhaustive over all edge subsets of the named families with <= 5
        // vertices
        let mut graphs = vec![
            complete_double_graph(2),
            complete_double_graph(3),
            complete_double_graph(4),
            double_cycle_graph(3).unwrap(),
            double_cycle_graph(4).unwrap(),
            double_cycle_graph(5).unwrap(),
            double_string_graph(1).unwrap(),
            double_string_graph(2).unwrap(),
            double_string_graph(3).unwrap(),
            double_string_graph(4).unwrap(),
            string_with_tail(1).unwrap(),
            string_with_tail(2).unwrap(),
            string_with_tail(3).unwrap(),
        ];
        // one irregular graph for good measure
        graphs.push(DirectedGraph::new(5, vec![(0, 1), (1, 2), (3, 2), (4, 0), (1, 0)]).unwrap());
        for g in &graphs {
            let m = g.edge_count();
            assert!(m <= 12, "exhaustive subset test only for small graphs");
            for mask in 0u32..(1 << m) {
                let indices: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
                assert_eq!(
                    is_forest_indices(g, &indices),
                    is_forest_by_root_paths(g, &indices),
                    "graph {:?}, subset {:?}",
                    g.edges(),
                    indices
                );
            }
        }
    }

    #[test]
    fn forests_are_downward_closed() {
        let g = complete_double_graph(4);
        let all = enumerate_forest_subsets(&g, None);
        let present: std::collections::HashSet<&[usize]> =
            all.iter().map(|s| s.indices()).collect();
        for s in &all {
            for drop in 0..s.len() {
                let mut sub = s.indices().to_vec();
                sub.remove(drop);
                assert!(present.contains(sub.as_slice()));
            }
        }
    }
}
