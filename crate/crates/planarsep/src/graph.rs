//! Directed planar multigraphs with an explicit combinatorial embedding.
//!
//! A graph is stored as an arc list plus a *rotation system*: for every
//! vertex, the cyclic order of incident arc-ends. Each arc contributes one
//! end at its source and one at its destination. The rotation system is part
//! of the input; this module never computes embeddings, it only consumes
//! them (face tracing, duals, induced subgraphs).
//!
//! Orientation convention: rotations are read counterclockwise. Mirrored
//! inputs (all rotations reversed) are equally valid embeddings.

use std::fmt;

pub type VertexId = usize;
pub type ArcId = usize;

/// Arc color used by the alternating-path problems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    /// Numeric value: Red = 0, Blue = 1.
    pub fn value(self) -> u8 {
        match self {
            Color::Red => 0,
            Color::Blue => 1,
        }
    }

    pub fn flip(self) -> Color {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Color::Red => write!(f, "R"),
            Color::Blue => write!(f, "B"),
        }
    }
}

/// Bipartition label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Part {
    A,
    B,
}

impl Part {
    pub fn other(self) -> Part {
        match self {
            Part::A => Part::B,
            Part::B => Part::A,
        }
    }
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Part::A => write!(f, "A"),
            Part::B => write!(f, "B"),
        }
    }
}

/// Which end of an arc an `ArcEnd` refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum End {
    Src,
    Dst,
}

/// One of the two ends of an arc. Arc-ends are the atoms of the rotation
/// system and of face walks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArcEnd {
    pub arc: ArcId,
    pub end: End,
}

impl ArcEnd {
    pub fn src(arc: ArcId) -> ArcEnd {
        ArcEnd { arc, end: End::Src }
    }

    pub fn dst(arc: ArcId) -> ArcEnd {
        ArcEnd { arc, end: End::Dst }
    }

    /// The opposite end of the same arc.
    pub fn twin(self) -> ArcEnd {
        ArcEnd {
            arc: self.arc,
            end: match self.end {
                End::Src => End::Dst,
                End::Dst => End::Src,
            },
        }
    }

    /// Dense index in `0..2m`: src end is `2*arc`, dst end is `2*arc + 1`.
    pub fn index(self) -> usize {
        2 * self.arc
            + match self.end {
                End::Src => 0,
                End::Dst => 1,
            }
    }

    pub fn from_index(i: usize) -> ArcEnd {
        ArcEnd {
            arc: i / 2,
            end: if i % 2 == 0 { End::Src } else { End::Dst },
        }
    }
}

impl fmt::Display for ArcEnd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.end {
            End::Src => write!(f, "{}s", self.arc),
            End::Dst => write!(f, "{}d", self.arc),
        }
    }
}

/// A directed arc with integer weight and optional color.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    pub src: VertexId,
    pub dst: VertexId,
    pub weight: i64,
    pub color: Option<Color>,
}

impl Arc {
    pub fn new(src: VertexId, dst: VertexId, weight: i64) -> Arc {
        Arc {
            src,
            dst,
            weight,
            color: None,
        }
    }

    pub fn colored(src: VertexId, dst: VertexId, weight: i64, color: Color) -> Arc {
        Arc {
            src,
            dst,
            weight,
            color: Some(color),
        }
    }

    /// Vertex hosting the given end.
    pub fn endpoint(&self, end: End) -> VertexId {
        match end {
            End::Src => self.src,
            End::Dst => self.dst,
        }
    }
}

/// Structural errors raised while building a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphError {
    VertexOutOfRange { arc: ArcId, vertex: VertexId },
    RotationVertexCount { expected: usize, got: usize },
    RotationUnknownArc { vertex: VertexId, arc: ArcId },
    PartLength { expected: usize, got: usize },
    EmptyGraph,
    Disconnected,
    NotEmbedded,
    MissingColor { arc: ArcId },
    NotBipartite,
    HasDirectedCycle,
    Overflow,
    NoPath,
    BadParameter(String),
    Internal(String),
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::VertexOutOfRange { arc, vertex } => {
                write!(f, "arc {} references vertex {} out of range", arc, vertex)
            }
            GraphError::RotationVertexCount { expected, got } => {
                write!(f, "rotation table has {} rows, expected {}", got, expected)
            }
            GraphError::RotationUnknownArc { vertex, arc } => {
                write!(f, "rotation of vertex {} references unknown arc {}", vertex, arc)
            }
            GraphError::PartLength { expected, got } => {
                write!(f, "part labels cover {} vertices, expected {}", got, expected)
            }
            GraphError::EmptyGraph => write!(f, "graph has no vertices"),
            GraphError::Disconnected => write!(f, "graph is not connected"),
            GraphError::NotEmbedded => write!(f, "rotation system is not a valid embedding"),
            GraphError::MissingColor { arc } => write!(f, "arc {} has no color", arc),
            GraphError::NotBipartite => write!(f, "graph is not labeled bipartite"),
            GraphError::HasDirectedCycle => write!(f, "graph contains a directed cycle"),
            GraphError::Overflow => write!(f, "integer overflow in weight arithmetic"),
            GraphError::NoPath => write!(f, "no path between the requested vertices"),
            GraphError::BadParameter(msg) => write!(f, "bad parameter: {}", msg),
            GraphError::Internal(msg) => write!(f, "internal invariant violated: {}", msg),
        }
    }
}

impl std::error::Error for GraphError {}

/// An invariant violated by a graph, as reported by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// An arc-end is missing from, duplicated in, or placed at the wrong
    /// vertex of the rotation system.
    RotationCoverage { arc_end: ArcEnd, detail: String },
    /// |weight| exceeds the graph's weight bound.
    WeightBound { arc: ArcId, weight: i64, bound: i64 },
    /// A connected component fails v - e + f = 2.
    Euler {
        component_min_vertex: VertexId,
        vertices: usize,
        edges: usize,
        faces: usize,
    },
    /// An arc joins two vertices of the same part label.
    Bipartite { arc: ArcId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RotationCoverage { arc_end, detail } => {
                write!(f, "rotation coverage violated at end {}: {}", arc_end, detail)
            }
            Violation::WeightBound { arc, weight, bound } => {
                write!(f, "arc {} weight {} exceeds bound {}", arc, weight, bound)
            }
            Violation::Euler {
                component_min_vertex,
                vertices,
                edges,
                faces,
            } => write!(
                f,
                "component at vertex {}: v={} e={} f={} fails v-e+f=2",
                component_min_vertex, vertices, edges, faces
            ),
            Violation::Bipartite { arc } => {
                write!(f, "arc {} joins two vertices of the same part", arc)
            }
        }
    }
}

/// A directed multigraph with a per-vertex rotation system.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanarGraph {
    vertex_count: usize,
    arcs: Vec<Arc>,
    rotation: Vec<Vec<ArcEnd>>,
    part: Option<Vec<Part>>,
    weight_bound: i64,
}

/// Default weight bound: n^3, clamped to at least 1.
pub fn default_weight_bound(n: usize) -> i64 {
    let n = n as i64;
    n.saturating_mul(n).saturating_mul(n).max(1)
}

impl PlanarGraph {
    /// Builds a graph, checking only structural well-formedness (ids in
    /// range, rotation rows matching the vertex count). Deeper invariants
    /// are the business of [`validate`].
    pub fn new(
        vertex_count: usize,
        arcs: Vec<Arc>,
        rotation: Vec<Vec<ArcEnd>>,
        part: Option<Vec<Part>>,
        weight_bound: i64,
    ) -> Result<PlanarGraph, GraphError> {
        if vertex_count == 0 {
            return Err(GraphError::EmptyGraph);
        }
        for (id, arc) in arcs.iter().enumerate() {
            if arc.src >= vertex_count {
                return Err(GraphError::VertexOutOfRange { arc: id, vertex: arc.src });
            }
            if arc.dst >= vertex_count {
                return Err(GraphError::VertexOutOfRange { arc: id, vertex: arc.dst });
            }
        }
        if rotation.len() != vertex_count {
            return Err(GraphError::RotationVertexCount {
                expected: vertex_count,
                got: rotation.len(),
            });
        }
        for (v, row) in rotation.iter().enumerate() {
            for e in row {
                if e.arc >= arcs.len() {
                    return Err(GraphError::RotationUnknownArc { vertex: v, arc: e.arc });
                }
            }
        }
        if let Some(p) = &part {
            if p.len() != vertex_count {
                return Err(GraphError::PartLength {
                    expected: vertex_count,
                    got: p.len(),
                });
            }
        }
        Ok(PlanarGraph {
            vertex_count,
            arcs,
            rotation,
            part,
            weight_bound,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, id: ArcId) -> &Arc {
        &self.arcs[id]
    }

    pub fn rotation(&self, v: VertexId) -> &[ArcEnd] {
        &self.rotation[v]
    }

    pub fn rotations(&self) -> &[Vec<ArcEnd>] {
        &self.rotation
    }

    pub fn part(&self) -> Option<&[Part]> {
        self.part.as_deref()
    }

    pub fn part_of(&self, v: VertexId) -> Option<Part> {
        self.part.as_ref().map(|p| p[v])
    }

    pub fn weight_bound(&self) -> i64 {
        self.weight_bound
    }

    /// Vertex hosting the given arc-end.
    pub fn end_vertex(&self, e: ArcEnd) -> VertexId {
        self.arcs[e.arc].endpoint(e.end)
    }

    /// Out-arcs of `v`, in arc-id order. O(m); intended for small graphs
    /// and one-off scans. Hot paths should build an adjacency index once.
    pub fn out_arcs(&self, v: VertexId) -> impl Iterator<Item = (ArcId, &Arc)> {
        self.arcs
            .iter()
            .enumerate()
            .filter(move |(_, a)| a.src == v)
    }

    /// Forward adjacency lists indexed by source vertex.
    pub fn out_adjacency(&self) -> Vec<Vec<ArcId>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (id, a) in self.arcs.iter().enumerate() {
            adj[a.src].push(id);
        }
        adj
    }

    /// Undirected adjacency: for each vertex, the (neighbor, arc) pairs of
    /// all incident arcs regardless of direction. Loops appear once.
    pub fn undirected_adjacency(&self) -> Vec<Vec<(VertexId, ArcId)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (id, a) in self.arcs.iter().enumerate() {
            adj[a.src].push((a.dst, id));
            if a.src != a.dst {
                adj[a.dst].push((a.src, id));
            }
        }
        adj
    }

    /// Copy with every arc reversed. End tags in the rotation swap roles so
    /// the embedding is untouched.
    pub fn reversed(&self) -> PlanarGraph {
        let mut g = self.clone();
        for a in &mut g.arcs {
            std::mem::swap(&mut a.src, &mut a.dst);
        }
        for row in &mut g.rotation {
            for e in row.iter_mut() {
                *e = e.twin();
            }
        }
        g
    }

    /// Copy with the given arcs reversed (by id), embedding untouched.
    pub fn with_arcs_reversed(&self, arc_ids: &[ArcId]) -> PlanarGraph {
        let mut flip = vec![false; self.arcs.len()];
        for &a in arc_ids {
            flip[a] = true;
        }
        let mut g = self.clone();
        for (id, a) in g.arcs.iter_mut().enumerate() {
            if flip[id] {
                std::mem::swap(&mut a.src, &mut a.dst);
            }
        }
        for row in &mut g.rotation {
            for e in row.iter_mut() {
                if flip[e.arc] {
                    *e = e.twin();
                }
            }
        }
        g
    }

    /// Copy with all weights replaced by `w`.
    pub fn with_unit_weights(&self, w: i64) -> PlanarGraph {
        let mut g = self.clone();
        for a in &mut g.arcs {
            a.weight = w;
        }
        g.weight_bound = g.weight_bound.max(w.abs()).max(1);
        g
    }

    /// Connected components of the underlying undirected graph, each as a
    /// sorted vertex list, ordered by smallest contained vertex.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        components_excluding(self, &vec![false; self.vertex_count])
    }

    /// True if the underlying undirected graph is connected.
    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Kahn topological check; `Err(HasDirectedCycle)` on cyclic input.
    pub fn topological_order(&self) -> Result<Vec<VertexId>, GraphError> {
        let mut indeg = vec![0usize; self.vertex_count];
        for a in &self.arcs {
            indeg[a.dst] += 1;
        }
        let adj = self.out_adjacency();
        let mut queue: Vec<VertexId> = (0..self.vertex_count).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.vertex_count);
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            order.push(v);
            for &id in &adj[v] {
                let w = self.arcs[id].dst;
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push(w);
                }
            }
        }
        if order.len() == self.vertex_count {
            Ok(order)
        } else {
            Err(GraphError::HasDirectedCycle)
        }
    }
}

/// Components of the undirected graph after removing flagged vertices.
/// Each component is sorted; components are ordered by their minimum vertex.
pub fn components_excluding(g: &PlanarGraph, removed: &[bool]) -> Vec<Vec<VertexId>> {
    let adj = g.undirected_adjacency();
    let mut comp = vec![usize::MAX; g.vertex_count()];
    let mut comps: Vec<Vec<VertexId>> = Vec::new();
    for start in 0..g.vertex_count() {
        if removed[start] || comp[start] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut members = vec![start];
        comp[start] = id;
        let mut head = 0;
        while head < members.len() {
            let v = members[head];
            head += 1;
            for &(w, _) in &adj[v] {
                if !removed[w] && comp[w] == usize::MAX {
                    comp[w] = id;
                    members.push(w);
                }
            }
        }
        members.sort_unstable();
        comps.push(members);
    }
    comps
}

/// Checks that every arc-end appears exactly once, at the vertex hosting it.
/// Returns the rotation position of every end on success.
fn rotation_positions(g: &PlanarGraph) -> Result<Vec<(VertexId, usize)>, Vec<Violation>> {
    let m = g.arc_count();
    let mut pos: Vec<Option<(VertexId, usize)>> = vec![None; 2 * m];
    let mut violations = Vec::new();
    for v in 0..g.vertex_count() {
        for (i, &e) in g.rotation(v).iter().enumerate() {
            let host = g.end_vertex(e);
            if host != v {
                violations.push(Violation::RotationCoverage {
                    arc_end: e,
                    detail: format!("listed at vertex {} but belongs to vertex {}", v, host),
                });
                continue;
            }
            if pos[e.index()].is_some() {
                violations.push(Violation::RotationCoverage {
                    arc_end: e,
                    detail: "listed twice".to_string(),
                });
                continue;
            }
            pos[e.index()] = Some((v, i));
        }
    }
    let mut out = Vec::with_capacity(2 * m);
    for i in 0..2 * m {
        match pos[i] {
            Some(p) => out.push(p),
            None => violations.push(Violation::RotationCoverage {
                arc_end: ArcEnd::from_index(i),
                detail: "missing from every rotation".to_string(),
            }),
        }
    }
    if violations.is_empty() {
        Ok(out)
    } else {
        Err(violations)
    }
}

/// Face walks of the embedding. `faces[i]` lists the arc-ends of face `i`
/// in walk order; `face_of_end[e.index()]` locates an end's face.
#[derive(Clone, Debug)]
pub struct FaceTrace {
    pub faces: Vec<Vec<ArcEnd>>,
    pub face_of_end: Vec<usize>,
}

impl FaceTrace {
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }
}

/// Traces all face walks. The successor of arc-end `x` in its face is the
/// rotation-successor of `x.twin()` (next-of-twin rule).
pub fn trace_faces(g: &PlanarGraph) -> Result<FaceTrace, GraphError> {
    let pos = rotation_positions(g).map_err(|_| GraphError::NotEmbedded)?;
    let m = g.arc_count();
    let next = |e: ArcEnd| -> ArcEnd {
        let t = e.twin();
        let (v, i) = pos[t.index()];
        let row = g.rotation(v);
        row[(i + 1) % row.len()]
    };
    let mut face_of_end = vec![usize::MAX; 2 * m];
    let mut faces = Vec::new();
    for start in 0..2 * m {
        if face_of_end[start] != usize::MAX {
            continue;
        }
        let id = faces.len();
        let mut walk = Vec::new();
        let mut e = ArcEnd::from_index(start);
        loop {
            face_of_end[e.index()] = id;
            walk.push(e);
            e = next(e);
            if e.index() == start {
                break;
            }
        }
        faces.push(walk);
    }
    Ok(FaceTrace { faces, face_of_end })
}

/// Runs every invariant check and returns the violations found (empty means
/// valid): rotation coverage, weight bounds, per-component Euler counts, and
/// the bipartite check when part labels are present.
pub fn validate(g: &PlanarGraph) -> Vec<Violation> {
    let mut violations = Vec::new();

    let rotation_ok = match rotation_positions(g) {
        Ok(_) => true,
        Err(mut v) => {
            violations.append(&mut v);
            false
        }
    };

    for (id, a) in g.arcs().iter().enumerate() {
        if a.weight.abs() > g.weight_bound() {
            violations.push(Violation::WeightBound {
                arc: id,
                weight: a.weight,
                bound: g.weight_bound(),
            });
        }
    }

    if rotation_ok {
        if let Ok(trace) = trace_faces(g) {
            let comps = g.components();
            // Map each face to the component of any of its ends.
            let mut comp_of_vertex = vec![usize::MAX; g.vertex_count()];
            for (ci, comp) in comps.iter().enumerate() {
                for &v in comp {
                    comp_of_vertex[v] = ci;
                }
            }
            let mut faces_per_comp = vec![0usize; comps.len()];
            for walk in &trace.faces {
                let v = g.end_vertex(walk[0]);
                faces_per_comp[comp_of_vertex[v]] += 1;
            }
            let mut edges_per_comp = vec![0usize; comps.len()];
            for a in g.arcs() {
                edges_per_comp[comp_of_vertex[a.src]] += 1;
            }
            for (ci, comp) in comps.iter().enumerate() {
                let v = comp.len();
                let e = edges_per_comp[ci];
                let f = faces_per_comp[ci];
                // An isolated vertex traces no walk; its single face is the
                // whole plane and the check is vacuous.
                if e > 0 && (v + f) as i64 - e as i64 != 2 {
                    violations.push(Violation::Euler {
                        component_min_vertex: comp[0],
                        vertices: v,
                        edges: e,
                        faces: f,
                    });
                }
            }
        }
    }

    if g.part().is_some() {
        for (id, a) in g.arcs().iter().enumerate() {
            if g.part_of(a.src) == g.part_of(a.dst) {
                violations.push(Violation::Bipartite { arc: id });
            }
        }
    }

    violations
}

/// Per-arc weights for the two directions of a primal edge: `fwd` belongs
/// to the arc as stored (src -> dst), `bwd` to the opposite direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DirPair {
    pub fwd: i64,
    pub bwd: i64,
}

#[derive(Clone, Debug)]
pub struct DualArc {
    pub src_face: usize,
    pub dst_face: usize,
    pub weight: i64,
}

/// Directed dual of an embedded graph: one vertex per face, one pair of
/// opposite arcs per primal edge. Dual arc `2i` crosses primal arc `i` in
/// its stored direction, dual arc `2i + 1` in the opposite direction.
#[derive(Clone, Debug)]
pub struct DualGraph {
    pub face_count: usize,
    pub dual_arcs: Vec<DualArc>,
    /// primal arc id -> (dual arc for fwd direction, dual arc for bwd).
    pub primal_map: Vec<(ArcId, ArcId)>,
    planar: PlanarGraph,
}

impl DualGraph {
    /// The dual as a planar graph in its own right, with the two arcs of
    /// each pair embedded side by side. Arc ids coincide with dual arc ids.
    pub fn as_planar_graph(&self) -> &PlanarGraph {
        &self.planar
    }
}

/// Builds the directed dual of a connected embedded graph. For the primal
/// arc `(u, v)` the dual arc `2i` runs from the face right of the arc to the
/// face left of it and carries `weights[i].fwd`; dual arc `2i + 1` is its
/// reverse and carries `weights[i].bwd`.
pub fn build_directed_dual(
    g: &PlanarGraph,
    weights: &[DirPair],
) -> Result<DualGraph, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    if weights.len() != g.arc_count() {
        return Err(GraphError::BadParameter(format!(
            "{} weight pairs for {} arcs",
            weights.len(),
            g.arc_count()
        )));
    }
    let trace = trace_faces(g)?;
    let face_count = trace.face_count();
    let mut dual_arcs = Vec::with_capacity(2 * g.arc_count());
    let mut primal_map = Vec::with_capacity(g.arc_count());
    let mut bound: i64 = 1;
    for i in 0..g.arc_count() {
        // Face traversing the arc forward lies to its left.
        let left = trace.face_of_end[ArcEnd::src(i).index()];
        let right = trace.face_of_end[ArcEnd::dst(i).index()];
        dual_arcs.push(DualArc {
            src_face: right,
            dst_face: left,
            weight: weights[i].fwd,
        });
        dual_arcs.push(DualArc {
            src_face: left,
            dst_face: right,
            weight: weights[i].bwd,
        });
        bound = bound.max(weights[i].fwd.abs()).max(weights[i].bwd.abs());
        primal_map.push((2 * i, 2 * i + 1));
    }

    // Embed the dual: walk each face; each boundary end contributes the two
    // ends of its edge's dual pair, incoming arc first. This places the two
    // opposite arcs of a pair side by side, which keeps the surface a sphere.
    let mut rotation: Vec<Vec<ArcEnd>> = vec![Vec::new(); face_count];
    for (fid, walk) in trace.faces.iter().enumerate() {
        for &e in walk {
            let i = e.arc;
            match e.end {
                // This face is left of arc i: hosts head of dual 2i and
                // tail of dual 2i+1.
                End::Src => {
                    rotation[fid].push(ArcEnd::dst(2 * i));
                    rotation[fid].push(ArcEnd::src(2 * i + 1));
                }
                // Right of arc i: hosts tail of dual 2i, head of dual 2i+1.
                End::Dst => {
                    rotation[fid].push(ArcEnd::dst(2 * i + 1));
                    rotation[fid].push(ArcEnd::src(2 * i));
                }
            }
        }
    }
    let arcs: Vec<Arc> = dual_arcs
        .iter()
        .map(|d| Arc::new(d.src_face, d.dst_face, d.weight))
        .collect();
    let planar = PlanarGraph::new(face_count, arcs, rotation, None, bound)?;
    Ok(DualGraph {
        face_count,
        dual_arcs,
        primal_map,
        planar,
    })
}

/// An induced subgraph together with the maps back to the parent graph.
#[derive(Clone, Debug)]
pub struct Induced {
    pub graph: PlanarGraph,
    /// subgraph vertex -> parent vertex
    pub orig_vertex: Vec<VertexId>,
    /// subgraph arc -> parent arc
    pub orig_arc: Vec<ArcId>,
}

impl Induced {
    /// parent vertex -> subgraph vertex, for vertices in the subgraph.
    pub fn vertex_index(&self, parent_n: usize) -> Vec<Option<VertexId>> {
        let mut idx = vec![None; parent_n];
        for (sub, &orig) in self.orig_vertex.iter().enumerate() {
            idx[orig] = Some(sub);
        }
        idx
    }
}

/// Subgraph induced by a set of vertices. Arcs survive when both endpoints
/// are kept; each surviving rotation keeps its original cyclic order, so the
/// result is embedded the same way.
pub fn induced_subgraph(g: &PlanarGraph, vertices: &[VertexId]) -> Result<Induced, GraphError> {
    let mut keep = vec![false; g.vertex_count()];
    for &v in vertices {
        if v >= g.vertex_count() {
            return Err(GraphError::VertexOutOfRange { arc: usize::MAX, vertex: v });
        }
        keep[v] = true;
    }
    let mut orig_vertex: Vec<VertexId> = Vec::new();
    let mut new_vertex = vec![usize::MAX; g.vertex_count()];
    for v in 0..g.vertex_count() {
        if keep[v] {
            new_vertex[v] = orig_vertex.len();
            orig_vertex.push(v);
        }
    }
    let mut orig_arc: Vec<ArcId> = Vec::new();
    let mut new_arc = vec![usize::MAX; g.arc_count()];
    let mut arcs = Vec::new();
    for (id, a) in g.arcs().iter().enumerate() {
        if keep[a.src] && keep[a.dst] {
            new_arc[id] = orig_arc.len();
            orig_arc.push(id);
            arcs.push(Arc {
                src: new_vertex[a.src],
                dst: new_vertex[a.dst],
                weight: a.weight,
                color: a.color,
            });
        }
    }
    let mut rotation = Vec::with_capacity(orig_vertex.len());
    for &v in &orig_vertex {
        let row: Vec<ArcEnd> = g
            .rotation(v)
            .iter()
            .filter(|e| new_arc[e.arc] != usize::MAX)
            .map(|e| ArcEnd { arc: new_arc[e.arc], end: e.end })
            .collect();
        rotation.push(row);
    }
    let part = g
        .part()
        .map(|p| orig_vertex.iter().map(|&v| p[v]).collect());
    let graph = PlanarGraph::new(
        orig_vertex.len(),
        arcs,
        rotation,
        part,
        g.weight_bound(),
    )?;
    Ok(Induced {
        graph,
        orig_vertex,
        orig_arc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Directed triangle 0->1->2->0 with a consistent rotation.
    pub fn triangle() -> PlanarGraph {
        let arcs = vec![Arc::new(0, 1, 1), Arc::new(1, 2, 1), Arc::new(2, 0, 1)];
        let rotation = vec![
            vec![ArcEnd::src(0), ArcEnd::dst(2)],
            vec![ArcEnd::src(1), ArcEnd::dst(0)],
            vec![ArcEnd::src(2), ArcEnd::dst(1)],
        ];
        PlanarGraph::new(3, arcs, rotation, None, 27).unwrap()
    }

    fn single_arc() -> PlanarGraph {
        let arcs = vec![Arc::new(0, 1, 5)];
        let rotation = vec![vec![ArcEnd::src(0)], vec![ArcEnd::dst(0)]];
        PlanarGraph::new(2, arcs, rotation, None, 8).unwrap()
    }

    /// 2x2 grid: a 4-cycle 0-1-3-2-0 embedded as a square.
    fn square() -> PlanarGraph {
        // 0--1
        // |  |
        // 2--3
        let arcs = vec![
            Arc::new(0, 1, 1), // top
            Arc::new(1, 3, 1), // right
            Arc::new(3, 2, 1), // bottom
            Arc::new(2, 0, 1), // left
        ];
        let rotation = vec![
            vec![ArcEnd::src(0), ArcEnd::dst(3)],
            vec![ArcEnd::src(1), ArcEnd::dst(0)],
            vec![ArcEnd::src(3), ArcEnd::dst(2)],
            vec![ArcEnd::src(2), ArcEnd::dst(1)],
        ];
        PlanarGraph::new(4, arcs, rotation, None, 64).unwrap()
    }

    #[test]
    fn triangle_is_valid_with_two_faces() {
        let g = triangle();
        assert!(validate(&g).is_empty());
        let t = trace_faces(&g).unwrap();
        assert_eq!(t.face_count(), 2);
        assert!(t.faces.iter().all(|f| f.len() == 3));
    }

    #[test]
    fn single_arc_is_valid_with_one_face() {
        let g = single_arc();
        assert!(validate(&g).is_empty());
        let t = trace_faces(&g).unwrap();
        assert_eq!(t.face_count(), 1);
        assert_eq!(t.faces[0].len(), 2);
    }

    #[test]
    fn square_has_inner_and_outer_face() {
        let g = square();
        assert!(validate(&g).is_empty());
        let t = trace_faces(&g).unwrap();
        // Hand enumeration: the inner square walk and the outer walk.
        assert_eq!(t.face_count(), 2);
        assert!(t.faces.iter().all(|f| f.len() == 4));
    }

    #[test]
    fn missing_rotation_end_is_flagged() {
        let arcs = vec![Arc::new(0, 1, 1)];
        let rotation = vec![vec![ArcEnd::src(0)], vec![]];
        let g = PlanarGraph::new(2, arcs, rotation, None, 8).unwrap();
        let v = validate(&g);
        assert!(matches!(v[0], Violation::RotationCoverage { .. }));
    }

    #[test]
    fn weight_bound_is_flagged() {
        let arcs = vec![Arc::new(0, 1, 100)];
        let rotation = vec![vec![ArcEnd::src(0)], vec![ArcEnd::dst(0)]];
        let g = PlanarGraph::new(2, arcs, rotation, None, 8).unwrap();
        let v = validate(&g);
        assert!(v.iter().any(|x| matches!(x, Violation::WeightBound { .. })));
    }

    #[test]
    fn bipartite_check_flags_same_part_arc() {
        let arcs = vec![Arc::new(0, 1, 1)];
        let rotation = vec![vec![ArcEnd::src(0)], vec![ArcEnd::dst(0)]];
        let part = Some(vec![Part::A, Part::A]);
        let g = PlanarGraph::new(2, arcs, rotation, part, 8).unwrap();
        let v = validate(&g);
        assert!(v.iter().any(|x| matches!(x, Violation::Bipartite { .. })));
    }

    #[test]
    fn faces_partition_all_ends() {
        let g = triangle();
        let t = trace_faces(&g).unwrap();
        let total: usize = t.faces.iter().map(|f| f.len()).sum();
        assert_eq!(total, 2 * g.arc_count());
        assert!(t.face_of_end.iter().all(|&f| f != usize::MAX));
    }

    #[test]
    fn dual_of_single_edge_is_two_loops() {
        let g = single_arc();
        let w = vec![DirPair { fwd: 1, bwd: 0 }];
        let d = build_directed_dual(&g, &w).unwrap();
        assert_eq!(d.face_count, 1);
        assert_eq!(d.dual_arcs.len(), 2);
        assert!(d.dual_arcs.iter().all(|a| a.src_face == a.dst_face));
        assert!(validate(d.as_planar_graph()).is_empty());
    }

    #[test]
    fn dual_of_triangle_joins_two_faces() {
        let g = triangle();
        let w = vec![DirPair { fwd: 1, bwd: 0 }; 3];
        let d = build_directed_dual(&g, &w).unwrap();
        assert_eq!(d.face_count, 2);
        assert_eq!(d.dual_arcs.len(), 6);
        assert!(validate(d.as_planar_graph()).is_empty());
        for i in 0..3 {
            let f = &d.dual_arcs[2 * i];
            let b = &d.dual_arcs[2 * i + 1];
            assert_eq!(f.src_face, b.dst_face);
            assert_eq!(f.dst_face, b.src_face);
            assert_ne!(f.src_face, f.dst_face);
        }
    }

    #[test]
    fn dual_of_square_matches_edge_count() {
        let g = square();
        let w = vec![DirPair { fwd: 1, bwd: 1 }; 4];
        let d = build_directed_dual(&g, &w).unwrap();
        assert_eq!(d.face_count, 2);
        assert_eq!(d.dual_arcs.len(), 8);
        assert!(validate(d.as_planar_graph()).is_empty());
    }

    #[test]
    fn dual_face_count_recovers_primal_vertices() {
        for g in [triangle(), square(), single_arc()] {
            let w = vec![DirPair { fwd: 1, bwd: 1 }; g.arc_count()];
            let d = build_directed_dual(&g, &w).unwrap();
            let t = trace_faces(d.as_planar_graph()).unwrap();
            // The side-by-side pair embedding adds one two-sided face per
            // primal edge; the rest are the primal vertices.
            assert_eq!(t.face_count() - g.arc_count(), g.vertex_count());
        }
    }

    #[test]
    fn induced_identity_and_single_vertex() {
        let g = triangle();
        let all: Vec<usize> = (0..3).collect();
        let sub = induced_subgraph(&g, &all).unwrap();
        assert_eq!(sub.graph, g);
        let one = induced_subgraph(&g, &[1]).unwrap();
        assert_eq!(one.graph.vertex_count(), 1);
        assert_eq!(one.graph.arc_count(), 0);
    }

    #[test]
    fn induced_pair_keeps_joining_arc() {
        let g = triangle();
        let sub = induced_subgraph(&g, &[0, 1]).unwrap();
        assert_eq!(sub.graph.vertex_count(), 2);
        assert_eq!(sub.graph.arc_count(), 1);
        assert_eq!(sub.orig_arc, vec![0]);
    }

    #[test]
    fn reversed_preserves_embedding() {
        let g = triangle();
        let r = g.reversed();
        assert!(validate(&r).is_empty());
        assert_eq!(r.arc(0).src, 1);
        assert_eq!(r.arc(0).dst, 0);
        let rr = r.reversed();
        assert_eq!(rr, g);
    }

    #[test]
    fn topological_order_detects_cycle() {
        assert!(triangle().topological_order().is_err());
        assert!(single_arc().topological_order().is_ok());
    }
}
