//! Closed-form homotopy types for the path/cycle independence complexes and
//! the forest complexes of double strings and cycles, plus the recursive
//! homology engine for graphs that are essentially trees.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::graph::DirectedGraph;
use crate::homology::{GradedHomology, HomologyGroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("formula needs n >= {min}, got {n}")]
    TooSmall { n: usize, min: usize },
    #[error("graph is not essentially a tree")]
    NotEssentiallyTree,
}

/// Homotopy type of a complex that is either contractible or a wedge of
/// spheres; the multiset of sphere dimensions is stored sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomotopyType {
    Point,
    WedgeOfSpheres(Vec<usize>),
}

impl HomotopyType {
    pub fn sphere(dim: usize) -> Self {
        HomotopyType::WedgeOfSpheres(vec![dim])
    }

    pub fn wedge(mut dims: Vec<usize>) -> Self {
        assert!(!dims.is_empty(), "empty wedge is disallowed; use Point");
        dims.sort_unstable();
        HomotopyType::WedgeOfSpheres(dims)
    }

    /// Reduced homology of the wedge: one Z per sphere, in its dimension.
    pub fn homology(&self) -> GradedHomology {
        match self {
            HomotopyType::Point => GradedHomology::trivial(),
            HomotopyType::WedgeOfSpheres(dims) => {
                let mut h = GradedHomology::trivial();
                let distinct: BTreeSet<usize> = dims.iter().copied().collect();
                for d in distinct {
                    let count = dims.iter().filter(|&&x| x == d).count();
                    h.insert(d as i64, HomologyGroup::free(count));
                }
                h
            }
        }
    }
}

impl fmt::Display for HomotopyType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomotopyType::Point => write!(f, "point"),
            HomotopyType::WedgeOfSpheres(dims) => {
                let parts: Vec<String> = dims.iter().map(|d| format!("S^{d}")).collect();
                write!(f, "{}", parts.join(" v "))
            }
        }
    }
}

/// Homotopy type of the path independence complex, with its generating
/// simplex (0-based vertices) when it is a sphere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LHomotopy {
    pub homotopy: HomotopyType,
    pub generator: Option<Vec<usize>>,
}

/// Path independence complex on n vertices:
/// S^{k-1} if n = 3k, a point if n = 3k+1, S^k if n = 3k+2.
/// Generators: vertices {2, 5, ..., 3k-1} resp. {2, 5, ..., 3k+2}, 1-based.
pub fn l_homotopy(n: usize) -> LHomotopy {
    assert!(n >= 1, "l_homotopy needs n >= 1");
    let k = n / 3;
    match n % 3 {
        0 => LHomotopy {
            homotopy: HomotopyType::sphere(k - 1),
            generator: Some((0..k).map(|i| 3 * i + 1).collect()),
        },
        1 => LHomotopy {
            homotopy: HomotopyType::Point,
            generator: None,
        },
        _ => LHomotopy {
            homotopy: HomotopyType::sphere(k),
            generator: Some((0..=k).map(|i| 3 * i + 1).collect()),
        },
    }
}

/// Forest complex of the double string L_n:
/// S^{2k-1} if n = 3k, S^{2k} if n = 3k+1, a point if n = 3k+2.
pub fn delta_string_homotopy(n: usize) -> HomotopyType {
    assert!(n >= 1, "delta_string_homotopy needs n >= 1");
    let k = n / 3;
    match n % 3 {
        0 => HomotopyType::sphere(2 * k - 1),
        1 => HomotopyType::sphere(2 * k),
        _ => HomotopyType::Point,
    }
}

/// Cycle independence complex on n vertices (n >= 3):
/// S^{k-1} v S^{k-1} if n = 3k, S^{k-1} if n = 3k+1, S^k if n = 3k+2.
pub fn c_homotopy(n: usize) -> Result<HomotopyType, FamilyError> {
    if n < 3 {
        return Err(FamilyError::TooSmall { n, min: 3 });
    }
    let k = n / 3;
    Ok(match n % 3 {
        0 => HomotopyType::wedge(vec![k - 1, k - 1]),
        1 => HomotopyType::sphere(k - 1),
        _ => HomotopyType::sphere(k),
    })
}

/// Forest complex of the double cycle C_n (n >= 3):
/// S^{2k-1} v S^{2k-1} v S^{3k-2} v S^{3k-2} if n = 3k,
/// S^{2k} v S^{3k-1} v S^{3k-1} if n = 3k+1,
/// S^{2k} v S^{3k} v S^{3k} if n = 3k+2.
pub fn delta_cycle_homotopy(n: usize) -> Result<HomotopyType, FamilyError> {
    if n < 3 {
        return Err(FamilyError::TooSmall { n, min: 3 });
    }
    let k = n / 3;
    Ok(match n % 3 {
        0 => HomotopyType::wedge(vec![2 * k - 1, 2 * k - 1, 3 * k - 2, 3 * k - 2]),
        1 => HomotopyType::wedge(vec![2 * k, 3 * k - 1, 3 * k - 1]),
        _ => HomotopyType::wedge(vec![2 * k, 3 * k, 3 * k]),
    })
}

/// True iff collapsing every antiparallel edge pair to one undirected edge
/// turns the graph into a tree on its whole vertex set.
pub fn is_essentially_tree(g: &DirectedGraph) -> bool {
    let n = g.n_vertices();
    if n == 0 {
        return false;
    }
    let und: BTreeSet<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&(u, v)| (u.min(v), u.max(v)))
        .collect();
    if und.len() != n - 1 {
        return false;
    }
    // connectivity on n-1 undirected edges implies tree
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(a, b) in &und {
            let other = if a == v {
                b
            } else if b == v {
                a
            } else {
                continue;
            };
            if !seen[other] {
                seen[other] = true;
                stack.push(other);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Outcome of the recursive reduction: either the full graded (free)
/// homology of the forest complex, or an explicit refusal when none of the
/// reduction rules applies to some intermediate graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeReduction {
    Homology(GradedHomology),
    Irreducible,
}

/// Recursive homology computation for graphs that are essentially trees.
///
/// Candidate moves per step, in deterministic priority order: cone rule (a
/// sink whose only in-edge makes the complex a cone), pendant double edge
/// (suspension), then the in-star rules with an out-edge / in-edge / double
/// edge at the shared head. The cone rule is terminal; the other rules
/// recurse on strictly smaller graphs, and a candidate whose recursion gets
/// stuck is abandoned for the next one, so `Irreducible` means no sequence
/// of rule applications reaches the base case. A graph with no edges is the
/// base case, whose complex {∅} carries one unit of homology in degree -1
/// so that suspensions shift correctly; reported predictions for nonempty
/// graphs live in degrees >= 0.
pub fn reduce_essential_tree(g: &DirectedGraph) -> Result<TreeReduction, FamilyError> {
    if !is_essentially_tree(g) {
        return Err(FamilyError::NotEssentiallyTree);
    }
    Ok(match reduce(g) {
        Some(h) => TreeReduction::Homology(h),
        None => TreeReduction::Irreducible,
    })
}

fn scaled(h: &GradedHomology, m: usize) -> GradedHomology {
    let mut acc = GradedHomology::trivial();
    for _ in 0..m {
        acc = acc.direct_sum(h);
    }
    acc
}

fn reduce(g: &DirectedGraph) -> Option<GradedHomology> {
    let n = g.n_vertices();
    if g.edge_count() == 0 {
        // homology of {∅}: a single unit in degree -1
        return Some(GradedHomology::single_free(-1, 1));
    }
    let in_edges = |x: usize| -> Vec<usize> { g.in_neighbors(x) };
    let out_edges = |x: usize| -> Vec<usize> {
        g.edges()
            .iter()
            .filter(|&&(s, _)| s == x)
            .map(|&(_, t)| t)
            .collect()
    };

    // cone rule: S(x) = {y}, no out-edges at x; terminal, no recursion
    for x in 0..n {
        if in_edges(x).len() == 1 && out_edges(x).is_empty() {
            return Some(GradedHomology::trivial());
        }
    }

    // pendant double edge: edges at x are exactly the pair with y; the
    // complex is the suspension of the graph without x and without the
    // in-edges of y
    for x in 0..n {
        let ins = in_edges(x);
        let outs = out_edges(x);
        if ins.len() == 1 && outs.len() == 1 && ins[0] == outs[0] {
            let y = ins[0];
            let reduced = remove(g, &[x], |&(s, t)| t == y && s != x);
            if let Some(h) = reduce(&reduced) {
                return Some(h.shifted(1));
            }
        }
    }

    // in-star rules: x_1..x_k each with the single edge x_i -> y, and y's
    // remaining edges all shared with one vertex z
    for y in 0..n {
        let star: Vec<usize> = (0..n)
            .filter(|&x| x != y && in_edges(x).is_empty() && out_edges(x) == vec![y])
            .collect();
        let k = star.len();
        if k == 0 {
            continue;
        }
        let other_ins: Vec<usize> = in_edges(y)
            .into_iter()
            .filter(|u| !star.contains(u))
            .collect();
        let other_outs = out_edges(y);
        match (other_ins.as_slice(), other_outs.as_slice()) {
            // out-edge at the head: wedge of k-1 suspensions of G minus star
            ([], [_z]) => {
                let tilde = remove(g, &star, |_| false);
                if let Some(h) = reduce(&tilde) {
                    return Some(scaled(&h.shifted(1), k - 1));
                }
            }
            // in-edge at the head: wedge of k suspensions of G minus star
            // and head
            ([_z], []) => {
                let mut gone = star.clone();
                gone.push(y);
                let prime = remove(g, &gone, |_| false);
                if let Some(h) = reduce(&prime) {
                    return Some(scaled(&h.shifted(1), k));
                }
            }
            // double edge at the head:
            // H_t = H_{t-1}(G') + (k-1) * H_{t-1}(G~)
            ([z1], [z2]) if z1 == z2 => {
                let z = *z1;
                let mut gone = star.clone();
                gone.push(y);
                let prime = remove(g, &gone, |_| false);
                let prime_h = reduce(&prime);
                let tilde_h = if k >= 2 {
                    let tilde = remove(g, &star, |&(s, t)| t == y && s == z);
                    reduce(&tilde)
                } else {
                    Some(GradedHomology::trivial()) // multiplicity 0 below
                };
                if let (Some(hp), Some(ht)) = (prime_h, tilde_h) {
                    return Some(hp.shifted(1).direct_sum(&scaled(&ht.shifted(1), k - 1)));
                }
            }
            _ => {}
        }
    }

    None
}

/// Induced subgraph on the complement of `drop_vertices`, minus any edge
/// matching `drop_edge`; vertex ids are compacted preserving order.
fn remove(
    g: &DirectedGraph,
    drop_vertices: &[usize],
    drop_edge: impl Fn(&(usize, usize)) -> bool,
) -> DirectedGraph {
    let n = g.n_vertices();
    let mut map = vec![usize::MAX; n];
    let mut next = 0;
    for v in 0..n {
        if !drop_vertices.contains(&v) {
            map[v] = next;
            next += 1;
        }
    }
    let edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .filter(|&&(s, t)| map[s] != usize::MAX && map[t] != usize::MAX)
        .filter(|e| !drop_edge(e))
        .map(|&(s, t)| (map[s], map[t]))
        .collect();
    DirectedGraph::new(next, edges).expect("subgraph of a valid graph is valid")
}
