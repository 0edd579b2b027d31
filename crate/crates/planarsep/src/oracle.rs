//! Independent brute-force reference implementations.
//!
//! Everything here depends only on the graph types, never on the separator
//! machinery or the recursive algorithms it checks, so oracle agreement is
//! meaningful evidence. None of these are meant to be fast.

use crate::graph::{Color, GraphError, Part, PlanarGraph, VertexId};

/// Result of the reference shortest-path computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleDist {
    Finite(i64),
    Unreachable,
    /// A negative cycle lies on some source-to-target walk.
    NegativeCycle,
}

/// Full relaxation shortest distance: |V| rounds plus one detection round.
pub fn oracle_shortest_path(g: &PlanarGraph, s: VertexId, t: VertexId) -> OracleDist {
    let n = g.vertex_count();
    let mut dist: Vec<Option<i64>> = vec![None; n];
    dist[s] = Some(0);
    for _ in 0..n {
        let mut changed = false;
        for a in g.arcs() {
            if let Some(d) = dist[a.src] {
                let cand = d + a.weight;
                if dist[a.dst].map_or(true, |old| cand < old) {
                    dist[a.dst] = Some(cand);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    // Detection round: vertices still improving sit on or behind a negative
    // cycle. The flag matters only if such a vertex reaches t.
    let mut tainted = vec![false; n];
    for a in g.arcs() {
        if let Some(d) = dist[a.src] {
            if dist[a.dst].map_or(true, |old| d + a.weight < old) {
                tainted[a.dst] = true;
            }
        }
    }
    let mut queue: Vec<VertexId> = (0..n).filter(|&v| tainted[v]).collect();
    let adj = g.out_adjacency();
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        for &arc in &adj[v] {
            let w = g.arc(arc).dst;
            if !tainted[w] {
                tainted[w] = true;
                queue.push(w);
            }
        }
    }
    if tainted[t] {
        OracleDist::NegativeCycle
    } else {
        match dist[t] {
            Some(d) => OracleDist::Finite(d),
            None => OracleDist::Unreachable,
        }
    }
}

/// True iff the graph contains any negative-weight directed cycle.
/// All-zero seeding makes every cycle visible regardless of reachability.
pub fn oracle_negative_cycle(g: &PlanarGraph) -> bool {
    let n = g.vertex_count();
    let mut dist = vec![0i64; n];
    for _ in 0..n {
        let mut changed = false;
        for a in g.arcs() {
            let cand = dist[a.src] + a.weight;
            if cand < dist[a.dst] {
                dist[a.dst] = cand;
                changed = true;
            }
        }
        if !changed {
            return false;
        }
    }
    for a in g.arcs() {
        if dist[a.src] + a.weight < dist[a.dst] {
            return true;
        }
    }
    false
}

/// Plain DFS reachability, ignoring weights and colors.
pub fn oracle_reach(g: &PlanarGraph, s: VertexId, t: VertexId) -> bool {
    if s == t {
        return true;
    }
    let adj = g.out_adjacency();
    let mut seen = vec![false; g.vertex_count()];
    let mut stack = vec![s];
    seen[s] = true;
    while let Some(v) = stack.pop() {
        for &arc in &adj[v] {
            let w = g.arc(arc).dst;
            if w == t {
                return true;
            }
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    false
}

/// Alternating-path reachability over the product state space
/// (vertex, next expected color). Accepts on arcs into `t` whose color is
/// `last`. A zero-length path never accepts, even when `s == t`.
pub fn oracle_redblue(
    g: &PlanarGraph,
    s: VertexId,
    t: VertexId,
    init: Color,
    last: Color,
) -> Result<bool, GraphError> {
    let n = g.vertex_count();
    let adj = g.out_adjacency();
    for (id, a) in g.arcs().iter().enumerate() {
        if a.color.is_none() {
            return Err(GraphError::MissingColor { arc: id });
        }
    }
    let state = |v: VertexId, c: Color| -> usize { 2 * v + c.value() as usize };
    let mut seen = vec![false; 2 * n];
    let mut queue = vec![(s, init)];
    seen[state(s, init)] = true;
    let mut head = 0;
    while head < queue.len() {
        let (v, expect) = queue[head];
        head += 1;
        for &arc in &adj[v] {
            let a = g.arc(arc);
            if a.color != Some(expect) {
                continue;
            }
            if a.dst == t && expect == last {
                return Ok(true);
            }
            let next = (a.dst, expect.flip());
            if !seen[state(next.0, next.1)] {
                seen[state(next.0, next.1)] = true;
                queue.push(next);
            }
        }
    }
    Ok(false)
}

/// Odd directed closed walk: reachability from (v, even) to (v, odd) in the
/// parity product for any v. Decomposing walks into cycles makes this
/// equivalent to the existence of an odd directed cycle.
pub fn oracle_odd_cycle(g: &PlanarGraph) -> bool {
    let n = g.vertex_count();
    let adj = g.out_adjacency();
    for v in 0..n {
        let mut seen = vec![false; 2 * n];
        let mut stack = vec![(v, 0u8)];
        seen[2 * v] = true;
        while let Some((u, p)) = stack.pop() {
            for &arc in &adj[u] {
                let w = g.arc(arc).dst;
                let q = 1 - p;
                if w == v && q == 1 {
                    return true;
                }
                if !seen[2 * w + q as usize] {
                    seen[2 * w + q as usize] = true;
                    stack.push((w, q));
                }
            }
        }
    }
    false
}

/// Even-length s-t path in a DAG via parity-product reachability. In a DAG
/// every directed walk is a simple path, so this is exact.
pub fn oracle_even_path(g: &PlanarGraph, s: VertexId, t: VertexId) -> bool {
    let n = g.vertex_count();
    let adj = g.out_adjacency();
    let mut seen = vec![false; 2 * n];
    let mut stack = vec![(s, 0u8)];
    seen[2 * s] = true;
    while let Some((u, p)) = stack.pop() {
        if u == t && p == 0 {
            return true;
        }
        for &arc in &adj[u] {
            let w = g.arc(arc).dst;
            let q = 1 - p;
            if !seen[2 * w + q as usize] {
                seen[2 * w + q as usize] = true;
                stack.push((w, q));
            }
        }
    }
    false
}

/// Exhaustive even-path check over all simple s-t paths; ground truth for
/// small instances (guards at n <= 16).
pub fn exhaustive_even_path(g: &PlanarGraph, s: VertexId, t: VertexId) -> bool {
    assert!(g.vertex_count() <= 16, "exhaustive search is capped at n = 16");
    let adj = g.out_adjacency();
    fn dfs(
        g: &PlanarGraph,
        adj: &[Vec<usize>],
        v: VertexId,
        t: VertexId,
        visited: u32,
        len: usize,
        found_even: &mut bool,
    ) {
        if *found_even {
            return;
        }
        if v == t && len % 2 == 0 {
            *found_even = true;
            return;
        }
        for &arc in &adj[v] {
            let w = g.arc(arc).dst;
            if visited & (1 << w) == 0 {
                dfs(g, adj, w, t, visited | (1 << w), len + 1, found_even);
            }
        }
    }
    let mut found = false;
    dfs(g, &adj, s, t, 1 << s, 0, &mut found);
    found
}

/// Number of distinct s-t paths in a DAG.
pub fn count_st_paths(g: &PlanarGraph, s: VertexId, t: VertexId) -> Result<u64, GraphError> {
    let order = g.topological_order()?;
    let adj = g.out_adjacency();
    let mut count = vec![0u64; g.vertex_count()];
    count[s] = 1;
    for &v in &order {
        if count[v] == 0 {
            continue;
        }
        for &arc in &adj[v] {
            let w = g.arc(arc).dst;
            count[w] += count[v];
        }
    }
    Ok(count[t])
}

/// Number of s-t paths in a colored DAG that start with color `init`,
/// alternate, and end with color `last`.
pub fn count_alternating_paths(
    g: &PlanarGraph,
    s: VertexId,
    t: VertexId,
    init: Color,
    last: Color,
) -> Result<u64, GraphError> {
    let order = g.topological_order()?;
    let adj = g.out_adjacency();
    let n = g.vertex_count();
    // walks[state]: number of alternating prefixes from (s, init) that sit
    // at `vertex` expecting `color` next.
    let state = |v: VertexId, c: Color| -> usize { 2 * v + c.value() as usize };
    let mut walks = vec![0u64; 2 * n];
    walks[state(s, init)] = 1;
    let mut accepted = 0u64;
    for &v in &order {
        for c in [Color::Red, Color::Blue] {
            let w0 = walks[state(v, c)];
            if w0 == 0 {
                continue;
            }
            for &arc in &adj[v] {
                let a = g.arc(arc);
                if a.color != Some(c) {
                    continue;
                }
                if a.dst == t && c == last {
                    accepted += w0;
                }
                walks[state(a.dst, c.flip())] += w0;
            }
        }
    }
    Ok(accepted)
}

/// Maximum bipartite matching by augmenting paths; returns the matched arc
/// ids and whether the matching is perfect.
pub fn oracle_matching(g: &PlanarGraph) -> Result<(bool, Vec<usize>), GraphError> {
    let part = g.part().ok_or(GraphError::NotBipartite)?;
    let n = g.vertex_count();
    let a_side: Vec<VertexId> = (0..n).filter(|&v| part[v] == Part::A).collect();
    let b_count = n - a_side.len();
    // Adjacency from A to B via arc ids, ignoring stored arc direction.
    let mut adj: Vec<Vec<(VertexId, usize)>> = vec![Vec::new(); n];
    for (id, arc) in g.arcs().iter().enumerate() {
        if part[arc.src] == part[arc.dst] {
            return Err(GraphError::NotBipartite);
        }
        let (a, b) = if part[arc.src] == Part::A {
            (arc.src, arc.dst)
        } else {
            (arc.dst, arc.src)
        };
        adj[a].push((b, id));
    }
    let mut match_of: Vec<Option<(VertexId, usize)>> = vec![None; n];
    fn try_augment(
        a: VertexId,
        adj: &[Vec<(VertexId, usize)>],
        match_of: &mut [Option<(VertexId, usize)>],
        visited: &mut [bool],
    ) -> bool {
        for &(b, arc) in &adj[a] {
            if visited[b] {
                continue;
            }
            visited[b] = true;
            let free = match match_of[b] {
                None => true,
                Some((a2, _)) => try_augment(a2, adj, match_of, visited),
            };
            if free {
                match_of[b] = Some((a, arc));
                match_of[a] = Some((b, arc));
                return true;
            }
        }
        false
    }
    let mut size = 0;
    for &a in &a_side {
        let mut visited = vec![false; n];
        if try_augment(a, &adj, &mut match_of, &mut visited) {
            size += 1;
        }
    }
    let arcs: Vec<usize> = a_side
        .iter()
        .filter_map(|&a| match_of[a].map(|(_, arc)| arc))
        .collect();
    let perfect = size == a_side.len() && size == b_count;
    Ok((perfect, arcs))
}

/// All perfect matchings as sets of arc ids (each sorted). Capped at n = 16.
pub fn enumerate_perfect_matchings(g: &PlanarGraph) -> Result<Vec<Vec<usize>>, GraphError> {
    assert!(g.vertex_count() <= 16, "matching enumeration capped at n = 16");
    let part = g.part().ok_or(GraphError::NotBipartite)?;
    let n = g.vertex_count();
    let a_side: Vec<VertexId> = (0..n).filter(|&v| part[v] == Part::A).collect();
    let b_side: Vec<VertexId> = (0..n).filter(|&v| part[v] == Part::B).collect();
    let mut out = Vec::new();
    if a_side.len() != b_side.len() {
        return Ok(out);
    }
    let mut adj: Vec<Vec<(VertexId, usize)>> = vec![Vec::new(); n];
    for (id, arc) in g.arcs().iter().enumerate() {
        let (a, b) = if part[arc.src] == Part::A {
            (arc.src, arc.dst)
        } else {
            (arc.dst, arc.src)
        };
        adj[a].push((b, id));
    }
    fn rec(
        a_side: &[VertexId],
        adj: &[Vec<(VertexId, usize)>],
        i: usize,
        used_b: &mut u32,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == a_side.len() {
            let mut m = chosen.clone();
            m.sort_unstable();
            out.push(m);
            return;
        }
        for &(b, arc) in &adj[a_side[i]] {
            if *used_b & (1 << b) == 0 {
                *used_b |= 1 << b;
                chosen.push(arc);
                rec(a_side, adj, i + 1, used_b, chosen, out);
                chosen.pop();
                *used_b &= !(1 << b);
            }
        }
    }
    let mut chosen = Vec::new();
    let mut used = 0u32;
    rec(&a_side, &adj, 0, &mut used, &mut chosen, &mut out);
    out.sort();
    out.dedup();
    Ok(out)
}

/// True iff some perfect matching uses an even number of red arcs.
/// Enumeration ground truth, capped at n = 16.
pub fn oracle_epm(g: &PlanarGraph) -> Result<bool, GraphError> {
    let matchings = enumerate_perfect_matchings(g)?;
    for m in matchings {
        let reds = m
            .iter()
            .filter(|&&arc| g.arc(arc).color == Some(Color::Red))
            .count();
        if reds % 2 == 0 {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Strongly connected components by Kosaraju's two-pass sweep, as sorted
/// vertex lists ordered by smallest member.
pub fn oracle_scc(g: &PlanarGraph) -> Vec<Vec<VertexId>> {
    let n = g.vertex_count();
    let adj = g.out_adjacency();
    let mut radj: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    for a in g.arcs() {
        radj[a.dst].push(a.src);
    }
    // First pass: finish order on the forward graph (iterative DFS).
    let mut finish = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        seen[start] = true;
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            if *i < adj[v].len() {
                let w = g.arc(adj[v][*i]).dst;
                *i += 1;
                if !seen[w] {
                    seen[w] = true;
                    stack.push((w, 0));
                }
            } else {
                finish.push(v);
                stack.pop();
            }
        }
    }
    // Second pass: reverse graph in reverse finish order.
    let mut comp = vec![usize::MAX; n];
    let mut comps: Vec<Vec<VertexId>> = Vec::new();
    for &start in finish.iter().rev() {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut members = vec![start];
        comp[start] = id;
        let mut head = 0;
        while head < members.len() {
            let v = members[head];
            head += 1;
            for &w in &radj[v] {
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    members.push(w);
                }
            }
        }
        members.sort_unstable();
        comps.push(members);
    }
    comps.sort_by_key(|c| c[0]);
    comps
}

/// BFS two-colorability of the whole undirected graph.
pub fn oracle_bipartite(g: &PlanarGraph) -> bool {
    let n = g.vertex_count();
    let adj = g.undirected_adjacency();
    let mut color: Vec<Option<u8>> = vec![None; n];
    for start in 0..n {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(0);
        let mut queue = vec![start];
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            for &(w, _) in &adj[v] {
                if w == v {
                    return false; // self-loop
                }
                match color[w] {
                    None => {
                        color[w] = Some(1 - color[v].unwrap());
                        queue.push(w);
                    }
                    Some(c) => {
                        if c == color[v].unwrap() {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// Neighborhood of a vertex set in the underlying undirected graph.
pub fn neighborhood(g: &PlanarGraph, set: &[VertexId]) -> Vec<VertexId> {
    let mut in_set = vec![false; g.vertex_count()];
    for &v in set {
        in_set[v] = true;
    }
    let mut out = vec![false; g.vertex_count()];
    for a in g.arcs() {
        if in_set[a.src] && !in_set[a.dst] {
            out[a.dst] = true;
        }
        if in_set[a.dst] && !in_set[a.src] {
            out[a.src] = true;
        }
    }
    (0..g.vertex_count()).filter(|&v| out[v]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Arc, ArcEnd};

    fn two_vertices(arcs: Vec<Arc>) -> PlanarGraph {
        let mut rotation = vec![Vec::new(); 2];
        for (id, a) in arcs.iter().enumerate() {
            rotation[a.src].push(ArcEnd::src(id));
            rotation[a.dst].push(ArcEnd::dst(id));
        }
        PlanarGraph::new(2, arcs, rotation, None, 1000).unwrap()
    }

    fn triangle(weights: [i64; 3]) -> PlanarGraph {
        let arcs = vec![
            Arc::new(0, 1, weights[0]),
            Arc::new(1, 2, weights[1]),
            Arc::new(2, 0, weights[2]),
        ];
        let rotation = vec![
            vec![ArcEnd::src(0), ArcEnd::dst(2)],
            vec![ArcEnd::src(1), ArcEnd::dst(0)],
            vec![ArcEnd::src(2), ArcEnd::dst(1)],
        ];
        PlanarGraph::new(3, arcs, rotation, None, 1000).unwrap()
    }

    #[test]
    fn shortest_path_basics() {
        let g = two_vertices(vec![Arc::new(0, 1, 5)]);
        assert_eq!(oracle_shortest_path(&g, 0, 0), OracleDist::Finite(0));
        assert_eq!(oracle_shortest_path(&g, 0, 1), OracleDist::Finite(5));
        assert_eq!(oracle_shortest_path(&g, 1, 0), OracleDist::Unreachable);
    }

    #[test]
    fn negative_cycle_flagged() {
        let g = triangle([1, 1, -3]);
        assert!(oracle_negative_cycle(&g));
        assert_eq!(oracle_shortest_path(&g, 0, 2), OracleDist::NegativeCycle);
        let clean = triangle([1, 1, 1]);
        assert!(!oracle_negative_cycle(&clean));
    }

    #[test]
    fn redblue_two_step() {
        let g = {
            let arcs = vec![
                Arc::colored(0, 1, 1, Color::Red),
                Arc::colored(1, 2, 1, Color::Blue),
            ];
            let rotation = vec![
                vec![ArcEnd::src(0)],
                vec![ArcEnd::dst(0), ArcEnd::src(1)],
                vec![ArcEnd::dst(1)],
            ];
            PlanarGraph::new(3, arcs, rotation, None, 10).unwrap()
        };
        assert!(oracle_redblue(&g, 0, 2, Color::Red, Color::Blue).unwrap());
        assert!(!oracle_redblue(&g, 0, 1, Color::Red, Color::Blue).unwrap());
    }

    #[test]
    fn odd_cycle_detection() {
        assert!(oracle_odd_cycle(&triangle([1, 1, 1])));
        // 4-cycle
        let arcs = vec![
            Arc::new(0, 1, 1),
            Arc::new(1, 2, 1),
            Arc::new(2, 3, 1),
            Arc::new(3, 0, 1),
        ];
        let mut rotation = vec![Vec::new(); 4];
        for (id, a) in arcs.iter().enumerate() {
            rotation[a.src].push(ArcEnd::src(id));
            rotation[a.dst].push(ArcEnd::dst(id));
        }
        let g = PlanarGraph::new(4, arcs, rotation, None, 10).unwrap();
        assert!(!oracle_odd_cycle(&g));
    }

    #[test]
    fn even_path_two_step() {
        let arcs = vec![Arc::new(0, 1, 1), Arc::new(1, 2, 1)];
        let mut rotation = vec![Vec::new(); 3];
        for (id, a) in arcs.iter().enumerate() {
            rotation[a.src].push(ArcEnd::src(id));
            rotation[a.dst].push(ArcEnd::dst(id));
        }
        let g = PlanarGraph::new(3, arcs, rotation, None, 10).unwrap();
        assert!(oracle_even_path(&g, 0, 2));
        assert!(!oracle_even_path(&g, 0, 1));
        assert!(exhaustive_even_path(&g, 0, 2));
        assert!(!exhaustive_even_path(&g, 0, 1));
    }

    #[test]
    fn matching_on_k2_and_path() {
        let k2 = {
            let arcs = vec![Arc::new(0, 1, 1)];
            let rotation = vec![vec![ArcEnd::src(0)], vec![ArcEnd::dst(0)]];
            PlanarGraph::new(2, arcs, rotation, Some(vec![Part::A, Part::B]), 10).unwrap()
        };
        assert!(oracle_matching(&k2).unwrap().0);
        let k2_blue = {
            let arcs = vec![Arc::colored(0, 1, 1, Color::Blue)];
            let rotation = vec![vec![ArcEnd::src(0)], vec![ArcEnd::dst(0)]];
            PlanarGraph::new(2, arcs, rotation, Some(vec![Part::A, Part::B]), 10).unwrap()
        };
        assert!(oracle_epm(&k2_blue).unwrap());
        // a1 - b - a2: no perfect matching.
        let p3 = {
            let arcs = vec![Arc::new(0, 1, 1), Arc::new(1, 2, 1)];
            let rotation = vec![
                vec![ArcEnd::src(0)],
                vec![ArcEnd::dst(0), ArcEnd::src(1)],
                vec![ArcEnd::dst(1)],
            ];
            PlanarGraph::new(3, arcs, rotation, Some(vec![Part::A, Part::B, Part::A]), 10)
                .unwrap()
        };
        assert!(!oracle_matching(&p3).unwrap().0);
        assert_eq!(neighborhood(&p3, &[0, 2]), vec![1]);
    }

    #[test]
    fn epm_k2_red_is_false() {
        let arcs = vec![Arc::colored(0, 1, 1, Color::Red)];
        let rotation = vec![vec![ArcEnd::src(0)], vec![ArcEnd::dst(0)]];
        let g = PlanarGraph::new(2, arcs, rotation, Some(vec![Part::A, Part::B]), 10).unwrap();
        assert!(!oracle_epm(&g).unwrap());
    }

    #[test]
    fn scc_of_triangle_and_path() {
        assert_eq!(oracle_scc(&triangle([1, 1, 1])), vec![vec![0, 1, 2]]);
        let arcs = vec![Arc::new(0, 1, 1), Arc::new(1, 2, 1)];
        let mut rotation = vec![Vec::new(); 3];
        for (id, a) in arcs.iter().enumerate() {
            rotation[a.src].push(ArcEnd::src(id));
            rotation[a.dst].push(ArcEnd::dst(id));
        }
        let g = PlanarGraph::new(3, arcs, rotation, None, 10).unwrap();
        assert_eq!(oracle_scc(&g).len(), 3);
    }
}
