//! Balanced separators and r-separator families on the underlying
//! undirected graph.
//!
//! A single call to [`build_separator`] returns a vertex set whose removal
//! leaves every component with at most 8/9 of the input's vertices. A
//! [`SeparatorFamily`] repeats such cuts until every component has at most
//! `r` vertices; that post-condition is what the recursive algorithms rely
//! on, and it is cheap to verify by a component sweep.
//!
//! Cuts come from a BFS spanning tree: the fundamental cycle of a sampled
//! non-tree edge, falling back to a median BFS level when the graph is a
//! tree or no sampled cycle balances. Ties between cycles go to the one
//! minimizing the larger side, then to the smallest non-tree arc id. The
//! empirical size bound checked by the harness (10 * n / sqrt(r) on grids)
//! is a test-suite choice, not a theorem.

use crate::graph::{components_excluding, GraphError, PlanarGraph, VertexId};
use crate::meter::SpaceMeter;

/// Vertex set whose removal leaves components of at most `component_bound`
/// vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatorFamily {
    /// Sorted, deduplicated members.
    pub members: Vec<VertexId>,
    pub component_bound: usize,
}

impl SeparatorFamily {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn member_flags(&self, n: usize) -> Vec<bool> {
        let mut flags = vec![false; n];
        for &v in &self.members {
            flags[v] = true;
        }
        flags
    }
}

/// Largest component size after removing `removed`; 0 for an empty rest.
pub fn max_component_excluding(g: &PlanarGraph, removed: &[bool]) -> usize {
    components_excluding(g, removed)
        .iter()
        .map(|c| c.len())
        .max()
        .unwrap_or(0)
}

const CYCLE_SAMPLES: usize = 32;

/// One candidate cut of a component, restricted to the component.
struct Cut {
    vertices: Vec<VertexId>,
    /// Largest piece of the component after removing the cut.
    max_piece: usize,
}

struct BfsTree {
    parent: Vec<Option<(VertexId, usize)>>,
    depth: Vec<usize>,
    /// Vertices level by level, concatenated in visit order.
    order: Vec<VertexId>,
    level_starts: Vec<usize>,
    non_tree_arcs: Vec<usize>,
}

/// BFS over the undirected adjacency restricted to `in_comp` vertices.
fn bfs_tree(
    adj: &[Vec<(VertexId, usize)>],
    in_comp: &[bool],
    root: VertexId,
) -> BfsTree {
    let n = adj.len();
    let mut parent = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    let mut order = vec![root];
    let mut level_starts = vec![0usize];
    depth[root] = 0;
    let mut head = 0;
    let mut current_level = 0;
    let mut used_arcs = Vec::new();
    while head < order.len() {
        let v = order[head];
        head += 1;
        if depth[v] > current_level {
            current_level = depth[v];
            level_starts.push(head - 1);
        }
        for &(w, arc) in &adj[v] {
            if !in_comp[w] || w == v {
                continue;
            }
            if depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                parent[w] = Some((v, arc));
                order.push(w);
                used_arcs.push(arc);
            }
        }
    }
    // Non-tree arcs: arcs inside the component not used by the tree.
    let mut is_tree = std::collections::HashSet::new();
    for a in used_arcs {
        is_tree.insert(a);
    }
    let mut non_tree = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for v in &order {
        for &(w, arc) in &adj[*v] {
            if in_comp[w] && w != *v && !is_tree.contains(&arc) && seen.insert(arc) {
                non_tree.push(arc);
            }
        }
    }
    non_tree.sort_unstable();
    BfsTree {
        parent,
        depth,
        order,
        level_starts,
        non_tree_arcs: non_tree,
    }
}

/// Vertices of the fundamental cycle closed by `arc` over the tree.
fn fundamental_cycle(tree: &BfsTree, g: &PlanarGraph, arc: usize) -> Vec<VertexId> {
    let a = g.arc(arc);
    let (mut u, mut v) = (a.src, a.dst);
    let mut left = Vec::new();
    let mut right = Vec::new();
    while tree.depth[u] > tree.depth[v] {
        left.push(u);
        u = tree.parent[u].unwrap().0;
    }
    while tree.depth[v] > tree.depth[u] {
        right.push(v);
        v = tree.parent[v].unwrap().0;
    }
    while u != v {
        left.push(u);
        right.push(v);
        u = tree.parent[u].unwrap().0;
        v = tree.parent[v].unwrap().0;
    }
    left.push(u);
    left.extend(right.into_iter().rev());
    left
}

/// Largest piece of the component after removing `cut`.
fn evaluate_cut(
    adj: &[Vec<(VertexId, usize)>],
    comp: &[VertexId],
    in_comp: &[bool],
    cut: &[VertexId],
    scratch: &mut [u32],
    stamp: &mut u32,
) -> usize {
    *stamp += 1;
    let removed_stamp = *stamp;
    for &v in cut {
        scratch[v] = removed_stamp;
    }
    *stamp += 1;
    let visit_stamp = *stamp;
    let mut best = 0;
    let mut queue = Vec::new();
    for &s in comp {
        if scratch[s] >= removed_stamp {
            continue;
        }
        queue.clear();
        queue.push(s);
        scratch[s] = visit_stamp;
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            for &(w, _) in &adj[v] {
                if in_comp[w] && scratch[w] < removed_stamp && w != v {
                    scratch[w] = visit_stamp;
                    queue.push(w);
                }
            }
        }
        best = best.max(queue.len());
    }
    best
}

/// Best cut of one component: sampled fundamental cycles first, median BFS
/// level as fallback.
fn best_cut(
    g: &PlanarGraph,
    adj: &[Vec<(VertexId, usize)>],
    comp: &[VertexId],
    scratch: &mut [u32],
    stamp: &mut u32,
) -> Cut {
    let mut in_comp = vec![false; g.vertex_count()];
    for &v in comp {
        in_comp[v] = true;
    }
    let root = comp[0];
    let tree = bfs_tree(adj, &in_comp, root);

    // Median BFS level: remove the level containing the middle vertex of
    // the BFS order; both sides stay below half the component.
    let mid = comp.len() / 2;
    let mut level_of_mid = tree.level_starts.len() - 1;
    for (lvl, &start) in tree.level_starts.iter().enumerate() {
        let end = tree
            .level_starts
            .get(lvl + 1)
            .copied()
            .unwrap_or(tree.order.len());
        if mid >= start && mid < end {
            level_of_mid = lvl;
            break;
        }
    }
    let start = tree.level_starts[level_of_mid];
    let end = tree
        .level_starts
        .get(level_of_mid + 1)
        .copied()
        .unwrap_or(tree.order.len());
    let level_cut: Vec<VertexId> = tree.order[start..end].to_vec();
    let level_max = evaluate_cut(adj, comp, &in_comp, &level_cut, scratch, stamp);

    // Sampled fundamental cycles, evenly spread over the non-tree arcs in
    // arc-id order.
    let mut best_cycle: Option<Cut> = None;
    let count = tree.non_tree_arcs.len();
    if count > 0 {
        let samples = CYCLE_SAMPLES.min(count);
        for k in 0..samples {
            let idx = k * count / samples;
            let arc = tree.non_tree_arcs[idx];
            let cycle = fundamental_cycle(&tree, g, arc);
            let max_piece = evaluate_cut(adj, comp, &in_comp, &cycle, scratch, stamp);
            let better = match &best_cycle {
                None => true,
                Some(b) => max_piece < b.max_piece,
            };
            if better {
                best_cycle = Some(Cut { vertices: cycle, max_piece });
            }
        }
    }

    // A cycle that balances to 8/9 of the component wins; otherwise take
    // whichever candidate leaves the smaller largest piece.
    let bound_8_9 = |size: usize| size * 9 <= comp.len() * 8;
    match best_cycle {
        Some(c) if bound_8_9(c.max_piece) || c.max_piece <= level_max => c,
        _ => Cut {
            vertices: level_cut,
            max_piece: level_max,
        },
    }
}

/// Returns a vertex set whose removal leaves every component of the
/// underlying undirected graph with at most 8n/9 vertices.
pub fn build_separator(g: &PlanarGraph) -> Vec<VertexId> {
    if g.vertex_count() < 2 {
        return Vec::new();
    }
    let bound = g.vertex_count() * 8 / 9;
    build_family_to_bound(g, bound.max(1), &SpaceMeter::new())
}

/// Builds an r-separator family: after removing the returned set, every
/// component of the underlying undirected graph has at most `r` vertices.
pub fn build_separator_family(
    g: &PlanarGraph,
    r: usize,
    meter: &SpaceMeter,
) -> Result<SeparatorFamily, GraphError> {
    if r < 1 {
        return Err(GraphError::BadParameter("separator bound r must be >= 1".into()));
    }
    let members = build_family_to_bound(g, r, meter);
    Ok(SeparatorFamily {
        members,
        component_bound: r,
    })
}

fn build_family_to_bound(g: &PlanarGraph, r: usize, meter: &SpaceMeter) -> Vec<VertexId> {
    let n = g.vertex_count();
    let _charge = meter.alloc(3 * n as u64);
    let adj = g.undirected_adjacency();
    let mut removed = vec![false; n];
    let mut scratch = vec![0u32; n];
    let mut stamp = 0u32;
    loop {
        let comps = components_excluding(g, &removed);
        let oversized: Vec<&Vec<VertexId>> = comps.iter().filter(|c| c.len() > r).collect();
        if oversized.is_empty() {
            break;
        }
        for comp in oversized {
            if r == 1 {
                // Every vertex of a connected component of size >= 2 has a
                // neighbor; the whole component goes into the family.
                for &v in comp {
                    removed[v] = true;
                }
                continue;
            }
            let cut = best_cut(g, &adj, comp, &mut scratch, &mut stamp);
            debug_assert!(!cut.vertices.is_empty());
            for v in cut.vertices {
                removed[v] = true;
            }
        }
    }
    let mut members: Vec<VertexId> = (0..n).filter(|&v| removed[v]).collect();
    members.sort_unstable();
    members
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Arc, ArcEnd, PlanarGraph};

    fn path_graph(n: usize) -> PlanarGraph {
        let arcs: Vec<Arc> = (0..n - 1).map(|i| Arc::new(i, i + 1, 1)).collect();
        let mut rotation = vec![Vec::new(); n];
        for i in 0..n - 1 {
            rotation[i].push(ArcEnd::src(i));
            rotation[i + 1].push(ArcEnd::dst(i));
        }
        PlanarGraph::new(n, arcs, rotation, None, 1000).unwrap()
    }

    fn isolated(n: usize) -> PlanarGraph {
        PlanarGraph::new(n, Vec::new(), vec![Vec::new(); n], None, 1).unwrap()
    }

    /// k x k grid with one arc per lattice edge (right and down).
    pub fn grid(k: usize) -> PlanarGraph {
        let at = |r: usize, c: usize| r * k + c;
        let mut arcs = Vec::new();
        for r in 0..k {
            for c in 0..k {
                if c + 1 < k {
                    arcs.push(Arc::new(at(r, c), at(r, c + 1), 1));
                }
                if r + 1 < k {
                    arcs.push(Arc::new(at(r, c), at(r + 1, c), 1));
                }
            }
        }
        // Rotation per vertex: E, S, W, N in lattice terms.
        let mut rotation = vec![Vec::new(); k * k];
        let mut arc_at = std::collections::HashMap::new();
        for (id, a) in arcs.iter().enumerate() {
            arc_at.insert((a.src, a.dst), id);
        }
        for r in 0..k {
            for c in 0..k {
                let v = at(r, c);
                let mut row = Vec::new();
                if c + 1 < k {
                    row.push(ArcEnd::src(arc_at[&(v, at(r, c + 1))]));
                }
                if r + 1 < k {
                    row.push(ArcEnd::src(arc_at[&(v, at(r + 1, c))]));
                }
                if c > 0 {
                    row.push(ArcEnd::dst(arc_at[&(at(r, c - 1), v)]));
                }
                if r > 0 {
                    row.push(ArcEnd::dst(arc_at[&(at(r - 1, c), v)]));
                }
                rotation[v] = row;
            }
        }
        PlanarGraph::new(k * k, arcs, rotation, None, 1000).unwrap()
    }

    #[test]
    fn path_of_nine_is_split() {
        let g = path_graph(9);
        let s = build_separator(&g);
        assert!(!s.is_empty());
        let mut removed = vec![false; 9];
        for &v in &s {
            removed[v] = true;
        }
        assert!(max_component_excluding(&g, &removed) <= 8);
    }

    #[test]
    fn isolated_vertices_need_no_separator() {
        let g = isolated(2);
        assert!(build_separator(&g).is_empty());
    }

    #[test]
    fn grid_separator_respects_bound() {
        let g = grid(10);
        let s = build_separator(&g);
        let mut removed = vec![false; 100];
        for &v in &s {
            removed[v] = true;
        }
        assert!(max_component_excluding(&g, &removed) <= 89);
    }

    #[test]
    fn family_r_equals_n_is_empty() {
        let g = grid(4);
        let f = build_separator_family(&g, 16, &SpaceMeter::new()).unwrap();
        assert!(f.is_empty());
    }

    #[test]
    fn family_r_one_leaves_singletons() {
        let g = path_graph(5);
        let f = build_separator_family(&g, 1, &SpaceMeter::new()).unwrap();
        let flags = f.member_flags(5);
        assert_eq!(max_component_excluding(&g, &flags), 1);
    }

    #[test]
    fn family_bound_zero_is_rejected() {
        let g = grid(3);
        assert!(build_separator_family(&g, 0, &SpaceMeter::new()).is_err());
    }

    #[test]
    fn grid_family_meets_bound_and_empirical_size() {
        let g = grid(16);
        let f = build_separator_family(&g, 64, &SpaceMeter::new()).unwrap();
        let flags = f.member_flags(256);
        assert!(max_component_excluding(&g, &flags) <= 64);
        // Generous empirical bound: 10 n / sqrt(r).
        assert!(f.len() <= 10 * 256 / 8, "family size {}", f.len());
    }

    #[test]
    fn family_is_deterministic() {
        let g = grid(12);
        let a = build_separator_family(&g, 20, &SpaceMeter::new()).unwrap();
        let b = build_separator_family(&g, 20, &SpaceMeter::new()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn different_bounds_each_satisfied() {
        let g = grid(12);
        for r in [10, 40, 100] {
            let f = build_separator_family(&g, r, &SpaceMeter::new()).unwrap();
            let flags = f.member_flags(g.vertex_count());
            assert!(max_component_excluding(&g, &flags) <= r);
        }
    }
}
