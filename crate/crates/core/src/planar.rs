//! Plane graphs stored as rotation systems.
//!
//! Every vertex carries the clockwise cyclic order of its neighbours. A dart
//! `(u, v)` is one direction of the edge `uv`, and the face to the left of it
//! continues with `(v, w)` where `w` follows `u` in the rotation of `v`. Face
//! boundaries are the orbits of that successor map.
//!
//! Graphs are immutable once built; every surgery returns a fresh, fully
//! re-validated graph.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

pub type Vertex = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dart {
    pub tail: Vertex,
    pub head: Vertex,
}

impl Dart {
    pub fn new(tail: Vertex, head: Vertex) -> Self {
        Dart { tail, head }
    }

    pub fn reversed(self) -> Self {
        Dart::new(self.head, self.tail)
    }
}

impl fmt::Display for Dart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.tail, self.head)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(Vertex),
    #[error("vertex {0} lists {1} but {1} does not list {0}")]
    Asymmetric(Vertex, Vertex),
    #[error("vertex {0} lists neighbour {1} more than once")]
    MultiEdge(Vertex, Vertex),
    #[error("vertex {0} lists itself as a neighbour")]
    Loop(Vertex),
    #[error("outer dart {0} is not a dart of the graph")]
    BadOuterDart(Dart),
    #[error("graph has edges but no outer dart")]
    MissingOuterDart,
    #[error("rotation system is not a sphere embedding: component of vertex {vertex} has V - E + F = {euler}")]
    NotSphere { vertex: Vertex, euler: i64 },
    #[error("vertex {0} does not lie on the given face")]
    NotOnFace(Vertex),
    #[error("vertices {0} and {1} are already adjacent")]
    AlreadyAdjacent(Vertex, Vertex),
    #[error("identifying {0} and {1} would create a parallel edge to {2}")]
    WouldCreateMultiEdge(Vertex, Vertex, Vertex),
    #[error("the cycle bounds a face")]
    FacialCycle,
    #[error("the vertex sequence is not a cycle of the graph")]
    NotACycle,
}

/// Old-to-new vertex renumbering produced by a surgery. `None` marks a vertex
/// that no longer exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexMap {
    map: Vec<Option<Vertex>>,
}

impl VertexMap {
    pub fn identity(n: usize) -> Self {
        VertexMap {
            map: (0..n).map(Some).collect(),
        }
    }

    pub fn from_vec(map: Vec<Option<Vertex>>) -> Self {
        VertexMap { map }
    }

    pub(crate) fn set(&mut self, old: Vertex, new: Option<Vertex>) {
        self.map[old] = new;
    }

    /// New-to-old lookup for maps that are injective on surviving vertices.
    pub fn inverse(&self, new_len: usize) -> Vec<Vertex> {
        let mut inv = vec![usize::MAX; new_len];
        for (old, m) in self.map.iter().enumerate() {
            if let Some(new) = *m {
                if inv[new] == usize::MAX {
                    inv[new] = old;
                }
            }
        }
        inv
    }

    pub fn get(&self, old: Vertex) -> Option<Vertex> {
        self.map.get(old).copied().flatten()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &VertexMap) -> VertexMap {
        VertexMap {
            map: self
                .map
                .iter()
                .map(|m| m.and_then(|v| next.get(v)))
                .collect(),
        }
    }
}

/// One orbit of the face-successor map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceWalk {
    darts: Vec<Dart>,
}

impl FaceWalk {
    pub fn darts(&self) -> &[Dart] {
        &self.darts
    }

    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    /// Boundary vertices in walk order (with repetitions at cut vertices).
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.darts.iter().map(|d| d.tail)
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.darts.iter().any(|d| d.tail == v)
    }

    pub fn contains_dart(&self, d: Dart) -> bool {
        self.darts.contains(&d)
    }

    /// The boundary as a cycle, when no vertex repeats.
    pub fn as_cycle(&self) -> Option<CycleRef> {
        let verts: Vec<Vertex> = self.vertices().collect();
        let distinct: HashSet<Vertex> = verts.iter().copied().collect();
        if verts.len() >= 3 && distinct.len() == verts.len() {
            Some(CycleRef::new(verts))
        } else {
            None
        }
    }
}

/// A cycle given as a cyclic vertex sequence. Equality is on the stored
/// sequence; use [`CycleRef::canonical`] to compare up to rotation and
/// reflection.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleRef {
    vertices: Vec<Vertex>,
}

impl CycleRef {
    pub fn new(vertices: Vec<Vertex>) -> Self {
        CycleRef { vertices }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    pub fn position(&self, v: Vertex) -> Option<usize> {
        self.vertices.iter().position(|&x| x == v)
    }

    /// `i`-th vertex, indices taken cyclically.
    pub fn at(&self, i: isize) -> Vertex {
        let n = self.vertices.len() as isize;
        self.vertices[i.rem_euclid(n) as usize]
    }

    pub fn sorted_vertices(&self) -> Vec<Vertex> {
        let mut v = self.vertices.clone();
        v.sort_unstable();
        v
    }

    /// Rotated to start at the smallest vertex, oriented so that the second
    /// vertex is smaller than the last.
    pub fn canonical(&self) -> CycleRef {
        let n = self.vertices.len();
        if n == 0 {
            return self.clone();
        }
        let start = (0..n).min_by_key(|&i| self.vertices[i]).unwrap();
        let fwd: Vec<Vertex> = (0..n).map(|k| self.vertices[(start + k) % n]).collect();
        let bwd: Vec<Vertex> = (0..n).map(|k| self.vertices[(start + n - k) % n]).collect();
        CycleRef::new(if n < 3 || fwd[1] <= bwd[1] { fwd } else { bwd })
    }

    pub fn reversed(&self) -> CycleRef {
        let mut v = self.vertices.clone();
        v.reverse();
        CycleRef::new(v)
    }

    /// Darts `(c_i, c_{i+1})` in sequence order.
    pub fn darts(&self) -> impl Iterator<Item = Dart> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| Dart::new(self.vertices[i], self.vertices[(i + 1) % n]))
    }
}

impl fmt::Display for CycleRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// All faces of a graph plus a dart-to-face lookup.
#[derive(Clone, Debug)]
pub struct Faces {
    walks: Vec<FaceWalk>,
    offsets: Vec<usize>,
    dart_face: Vec<usize>,
    outer: Option<usize>,
}

impl Faces {
    pub fn walks(&self) -> &[FaceWalk] {
        &self.walks
    }

    pub fn len(&self) -> usize {
        self.walks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walks.is_empty()
    }

    pub fn get(&self, i: usize) -> &FaceWalk {
        &self.walks[i]
    }

    pub fn outer_index(&self) -> Option<usize> {
        self.outer
    }

    pub fn outer(&self) -> Option<&FaceWalk> {
        self.outer.map(|i| &self.walks[i])
    }

    /// Index of the face to the left of `d`.
    pub fn face_of(&self, g: &RotationGraph, d: Dart) -> Option<usize> {
        let pos = g.position(d.tail, d.head)?;
        Some(self.dart_face[self.offsets[d.tail] + pos])
    }
}

/// A simple plane graph given by its rotation system and a designated outer
/// face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationGraph {
    rot: Vec<Vec<Vertex>>,
    outer: Option<Dart>,
    edges: usize,
}

impl RotationGraph {
    /// Validates and builds a graph: ids in range, no loops, no repeated
    /// neighbours, symmetric adjacency, a genus-0 rotation on every
    /// component, and an existing outer dart whenever there are edges.
    pub fn build(rotations: Vec<Vec<Vertex>>, outer: Option<Dart>) -> Result<Self, GraphError> {
        let n = rotations.len();
        let mut degree_sum = 0usize;
        for (u, rot) in rotations.iter().enumerate() {
            let mut seen = HashSet::with_capacity(rot.len());
            for &v in rot {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange(v));
                }
                if v == u {
                    return Err(GraphError::Loop(u));
                }
                if !seen.insert(v) {
                    return Err(GraphError::MultiEdge(u, v));
                }
            }
            degree_sum += rot.len();
        }
        for (u, rot) in rotations.iter().enumerate() {
            for &v in rot {
                if !rotations[v].contains(&u) {
                    return Err(GraphError::Asymmetric(u, v));
                }
            }
        }
        let g = RotationGraph {
            rot: rotations,
            outer,
            edges: degree_sum / 2,
        };
        match outer {
            Some(d) => {
                if d.tail >= n || g.position(d.tail, d.head).is_none() {
                    return Err(GraphError::BadOuterDart(d));
                }
            }
            None if g.edges > 0 => return Err(GraphError::MissingOuterDart),
            None => {}
        }
        g.check_sphere()?;
        Ok(g)
    }

    fn check_sphere(&self) -> Result<(), GraphError> {
        let faces = self.faces();
        let comp = self.component_ids();
        let ncomp = comp.iter().copied().max().map_or(0, |m| m + 1);
        let mut v_count = vec![0i64; ncomp];
        let mut e2_count = vec![0i64; ncomp];
        let mut f_count = vec![0i64; ncomp];
        for v in 0..self.n() {
            v_count[comp[v]] += 1;
            e2_count[comp[v]] += self.rot[v].len() as i64;
        }
        for w in faces.walks() {
            f_count[comp[w.darts[0].tail]] += 1;
        }
        for c in 0..ncomp {
            if e2_count[c] == 0 {
                continue; // isolated vertex
            }
            let euler = v_count[c] - e2_count[c] / 2 + f_count[c];
            if euler != 2 {
                let vertex = comp.iter().position(|&x| x == c).unwrap();
                return Err(GraphError::NotSphere { vertex, euler });
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.rot.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges
    }

    /// `(|V|, |E|)`, the key of the pair ordering.
    pub fn size(&self) -> (usize, usize) {
        (self.n(), self.edges)
    }

    pub fn rotation(&self, v: Vertex) -> &[Vertex] {
        &self.rot[v]
    }

    pub fn rotations(&self) -> &[Vec<Vertex>] {
        &self.rot
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.rot[v].len()
    }

    pub fn outer_dart(&self) -> Option<Dart> {
        self.outer
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.rot[u].contains(&v)
    }

    /// Index of `u` in the rotation of `v`.
    pub fn position(&self, v: Vertex, u: Vertex) -> Option<usize> {
        self.rot.get(v)?.iter().position(|&x| x == u)
    }

    /// Cyclic successor of `u` in the rotation of `v`.
    pub fn succ(&self, v: Vertex, u: Vertex) -> Option<Vertex> {
        let r = &self.rot[v];
        self.position(v, u).map(|i| r[(i + 1) % r.len()])
    }

    /// Cyclic predecessor of `u` in the rotation of `v`.
    pub fn pred(&self, v: Vertex, u: Vertex) -> Option<Vertex> {
        let r = &self.rot[v];
        self.position(v, u).map(|i| r[(i + r.len() - 1) % r.len()])
    }

    /// Face successor of a dart.
    pub fn next_in_face(&self, d: Dart) -> Dart {
        let w = self
            .succ(d.head, d.tail)
            .expect("dart of a validated graph has a reverse");
        Dart::new(d.head, w)
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.edges);
        for u in 0..self.n() {
            for &v in &self.rot[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// All darts in `(tail, head)` order.
    pub fn darts(&self) -> Vec<Dart> {
        let mut out = Vec::with_capacity(2 * self.edges);
        for u in 0..self.n() {
            let mut heads = self.rot[u].clone();
            heads.sort_unstable();
            out.extend(heads.into_iter().map(|v| Dart::new(u, v)));
        }
        out
    }

    /// Face tracing. Faces come ordered by their smallest dart and each walk
    /// starts at that dart.
    pub fn faces(&self) -> Faces {
        let mut offsets = Vec::with_capacity(self.n() + 1);
        let mut acc = 0;
        for r in &self.rot {
            offsets.push(acc);
            acc += r.len();
        }
        offsets.push(acc);
        let unset = usize::MAX;
        let mut dart_face = vec![unset; acc];
        let mut walks = Vec::new();
        for start in self.darts() {
            let idx = offsets[start.tail] + self.position(start.tail, start.head).unwrap();
            if dart_face[idx] != unset {
                continue;
            }
            let face_id = walks.len();
            let mut darts = Vec::new();
            let mut d = start;
            loop {
                let i = offsets[d.tail] + self.position(d.tail, d.head).unwrap();
                dart_face[i] = face_id;
                darts.push(d);
                d = self.next_in_face(d);
                if d == start {
                    break;
                }
            }
            walks.push(FaceWalk { darts });
        }
        let outer = self
            .outer
            .map(|d| dart_face[offsets[d.tail] + self.position(d.tail, d.head).unwrap()]);
        Faces {
            walks,
            offsets,
            dart_face,
            outer,
        }
    }

    /// The face containing `d`.
    pub fn face_walk(&self, d: Dart) -> FaceWalk {
        let mut darts = vec![d];
        let mut cur = self.next_in_face(d);
        while cur != d {
            darts.push(cur);
            cur = self.next_in_face(cur);
        }
        FaceWalk { darts }
    }

    pub fn outer_face(&self) -> Option<FaceWalk> {
        self.outer.map(|d| self.face_walk(d))
    }

    /// Same graph with the outer face moved to the face of `d`.
    pub fn with_outer(&self, d: Dart) -> Result<RotationGraph, GraphError> {
        if d.tail >= self.n() || !self.has_edge(d.tail, d.head) {
            return Err(GraphError::BadOuterDart(d));
        }
        let mut g = self.clone();
        g.outer = Some(d);
        Ok(g)
    }

    /// Component index per vertex, numbered by smallest member.
    pub fn component_ids(&self) -> Vec<usize> {
        let n = self.n();
        let mut comp = vec![usize::MAX; n];
        let mut next = 0;
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.rot[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = next;
                        queue.push_back(v);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        self.component_ids().iter().all(|&c| c == 0)
    }

    /// Some triangle `(a, b, c)` with `a < b < c`, lexicographically first.
    pub fn find_triangle(&self) -> Option<[Vertex; 3]> {
        for (a, b) in self.edges() {
            let mut common: Vec<Vertex> = self.rot[a]
                .iter()
                .copied()
                .filter(|&c| c > b && self.rot[b].contains(&c))
                .collect();
            common.sort_unstable();
            if let Some(&c) = common.first() {
                return Some([a, b, c]);
            }
        }
        None
    }

    pub fn contains_triangle(&self) -> bool {
        self.find_triangle().is_some()
    }

    /// Every cycle of length `3..=max_len`, once each, in canonical form,
    /// sorted by length then vertex sequence.
    pub fn find_short_cycles(&self, max_len: usize) -> Vec<CycleRef> {
        let mut out = Vec::new();
        let mut path = Vec::with_capacity(max_len);
        let mut on_path = vec![false; self.n()];
        for s in 0..self.n() {
            path.push(s);
            on_path[s] = true;
            self.extend_cycles(s, max_len, &mut path, &mut on_path, &mut out);
            on_path[s] = false;
            path.pop();
        }
        out.sort_by(|a, b| {
            a.len()
                .cmp(&b.len())
                .then_with(|| a.vertices().cmp(b.vertices()))
        });
        out
    }

    fn extend_cycles(
        &self,
        start: Vertex,
        max_len: usize,
        path: &mut Vec<Vertex>,
        on_path: &mut [bool],
        out: &mut Vec<CycleRef>,
    ) {
        let last = *path.last().unwrap();
        for &v in &self.rot[last] {
            if v == start && path.len() >= 3 && path[1] < last {
                out.push(CycleRef::new(path.clone()));
            }
            if v > start && !on_path[v] && path.len() < max_len {
                path.push(v);
                on_path[v] = true;
                self.extend_cycles(start, max_len, path, on_path, out);
                on_path[v] = false;
                path.pop();
            }
        }
    }

    /// Whether the vertex sequence is a cycle of this graph.
    pub fn is_cycle(&self, k: &CycleRef) -> bool {
        let verts = k.vertices();
        let distinct: HashSet<Vertex> = verts.iter().copied().collect();
        verts.len() >= 3
            && distinct.len() == verts.len()
            && verts.iter().all(|&v| v < self.n())
            && k.darts().all(|d| self.has_edge(d.tail, d.head))
    }

    /// True iff the darts of `k` in one of its two directions form a whole
    /// face orbit.
    pub fn is_facial(&self, k: &CycleRef) -> bool {
        if !self.is_cycle(k) {
            return false;
        }
        [k.clone(), k.reversed()].iter().any(|c| {
            let first = Dart::new(c.at(0), c.at(1));
            let walk = self.face_walk(first);
            walk.len() == c.len() && c.darts().zip(walk.darts().iter()).all(|(a, &b)| a == b)
        })
    }

    /// True iff `k` has no chord.
    pub fn is_induced(&self, k: &CycleRef) -> bool {
        let verts = k.vertices();
        let n = verts.len();
        for i in 0..n {
            for j in (i + 2)..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                if self.has_edge(verts[i], verts[j]) {
                    return false;
                }
            }
        }
        true
    }

    /// Removes a vertex set and compacts ids. The outer dart is kept when
    /// both its ends survive; otherwise the smallest surviving dart takes
    /// its place.
    pub fn delete_vertices(
        &self,
        set: &[Vertex],
    ) -> Result<(RotationGraph, VertexMap), GraphError> {
        let mut removed = vec![false; self.n()];
        for &v in set {
            if v >= self.n() {
                return Err(GraphError::VertexOutOfRange(v));
            }
            removed[v] = true;
        }
        let mut rot = self.rot.clone();
        for (v, r) in rot.iter_mut().enumerate() {
            if removed[v] {
                r.clear();
            } else {
                r.retain(|&u| !removed[u]);
            }
        }
        let outer = self.outer.filter(|d| !removed[d.tail] && !removed[d.head]);
        compact(rot, outer, &removed)
    }

    /// Induced subgraph on `keep`, with the restricted rotation.
    pub fn induced(&self, keep: &[Vertex]) -> Result<(RotationGraph, VertexMap), GraphError> {
        let keep_set: HashSet<Vertex> = keep.iter().copied().collect();
        let drop: Vec<Vertex> = (0..self.n()).filter(|v| !keep_set.contains(v)).collect();
        self.delete_vertices(&drop)
    }

    /// Adds edge `uw` across face `f`, splitting it in two. Uses the first
    /// corner of each vertex along the walk.
    pub fn add_edge_in_face(
        &self,
        u: Vertex,
        w: Vertex,
        f: &FaceWalk,
    ) -> Result<RotationGraph, GraphError> {
        let cu = corner_on_face(f, u)?;
        let cw = corner_on_face(f, w)?;
        self.add_edge_at(u, Some(cu), w, Some(cw))
    }

    /// Adds edge `uw` with `w` placed right after `after_u` in the rotation
    /// of `u` and `u` right after `after_w` in the rotation of `w`. `None`
    /// is only allowed for an isolated endpoint.
    pub fn add_edge_at(
        &self,
        u: Vertex,
        after_u: Option<Vertex>,
        w: Vertex,
        after_w: Option<Vertex>,
    ) -> Result<RotationGraph, GraphError> {
        if u == w {
            return Err(GraphError::Loop(u));
        }
        if self.has_edge(u, w) {
            return Err(GraphError::AlreadyAdjacent(u, w));
        }
        let mut rot = self.rot.clone();
        for (a, b, after) in [(u, w, after_u), (w, u, after_w)] {
            match after {
                Some(x) if rot[a].contains(&x) => insert_after(&mut rot[a], x, b),
                None if rot[a].is_empty() => rot[a].push(b),
                _ => return Err(GraphError::NotOnFace(a)),
            }
        }
        let outer = self.outer.or(Some(Dart::new(u, w)));
        RotationGraph::build(rot, outer)
    }

    /// Merges `u` and `w`, which must share face `f`, into one vertex.
    /// The merged vertex keeps `u`'s id before compaction.
    pub fn identify_in_face(
        &self,
        u: Vertex,
        w: Vertex,
        f: &FaceWalk,
    ) -> Result<(RotationGraph, VertexMap), GraphError> {
        self.identify_merging(u, w, f, &[])
    }

    /// Like [`identify_in_face`](Self::identify_in_face) but the listed
    /// common neighbours are allowed: their two parallel edges must bound a
    /// face of length two after identification, and are merged into one.
    pub fn identify_merging(
        &self,
        u: Vertex,
        w: Vertex,
        f: &FaceWalk,
        shared: &[Vertex],
    ) -> Result<(RotationGraph, VertexMap), GraphError> {
        let cu = corner_on_face(f, u)?;
        let cw = corner_on_face(f, w)?;
        if u == w {
            return Err(GraphError::Loop(u));
        }
        if self.has_edge(u, w) {
            return Err(GraphError::AlreadyAdjacent(u, w));
        }
        for &x in &self.rot[u] {
            if self.rot[w].contains(&x) && !shared.contains(&x) {
                return Err(GraphError::WouldCreateMultiEdge(u, w, x));
            }
        }
        // Virtual edge uw inserted at both corners, then contracted.
        let iu = self.position(u, cu).unwrap() + 1;
        let iw = self.position(w, cw).unwrap() + 1;
        let mut merged = rotate_from(&self.rot[u], iu);
        merged.extend(rotate_from(&self.rot[w], iw));
        let mut rot = self.rot.clone();
        rot[u] = merged;
        rot[w].clear();
        for r in rot.iter_mut() {
            for x in r.iter_mut() {
                if *x == w {
                    *x = u;
                }
            }
        }
        for &x in shared {
            if rot[u].contains(&x) {
                collapse_adjacent_duplicate(&mut rot[u], x)
                    .map_err(|_| GraphError::WouldCreateMultiEdge(u, w, x))?;
                collapse_adjacent_duplicate(&mut rot[x], u)
                    .map_err(|_| GraphError::WouldCreateMultiEdge(u, w, x))?;
            }
        }
        let outer = self.outer.map(|d| {
            Dart::new(
                if d.tail == w { u } else { d.tail },
                if d.head == w { u } else { d.head },
            )
        });
        let mut removed = vec![false; self.n()];
        removed[w] = true;
        let (g, map) = compact(rot, outer, &removed)?;
        let mut map = map.map;
        map[w] = map[u];
        Ok((g, VertexMap::from_vec(map)))
    }

    /// Cuts along a non-facial cycle. Returns the closed disk on the outer
    /// face's side of `k` (where `k` becomes a face and the outer face is
    /// unchanged) and the closed disk on the other side (with `k` as its
    /// outer face). Components not containing `k` stay with the outside.
    pub fn split_at_cycle(&self, k: &CycleRef) -> Result<CycleSplit, GraphError> {
        if !self.is_cycle(k) {
            return Err(GraphError::NotACycle);
        }
        if self.is_facial(k) {
            return Err(GraphError::FacialCycle);
        }
        let n = self.n();
        let len = k.len();
        let mut on_k = vec![false; n];
        for &v in k.vertices() {
            on_k[v] = true;
        }
        // Neighbours of each cycle vertex strictly on the forward side (to
        // the left of the darts (k_i, k_{i+1})) and on the backward side.
        let mut fwd_nb: Vec<Vec<Vertex>> = Vec::with_capacity(len);
        let mut bwd_nb: Vec<Vec<Vertex>> = Vec::with_capacity(len);
        for i in 0..len {
            let (prev, cur, next) = (k.at(i as isize - 1), k.at(i as isize), k.at(i as isize + 1));
            let r = &self.rot[cur];
            let ip = self.position(cur, prev).unwrap();
            let mut fwd = Vec::new();
            let mut bwd = Vec::new();
            let mut in_fwd = true;
            for step in 1..r.len() {
                let x = r[(ip + step) % r.len()];
                if x == next {
                    in_fwd = false;
                    continue;
                }
                if in_fwd {
                    fwd.push(x);
                } else {
                    bwd.push(x);
                }
            }
            fwd_nb.push(fwd);
            bwd_nb.push(bwd);
        }
        let fwd_side = flood(self, &on_k, fwd_nb.iter().flatten().copied());
        let bwd_side = flood(self, &on_k, bwd_nb.iter().flatten().copied());
        if fwd_side.iter().zip(&bwd_side).any(|(a, b)| *a && *b) {
            return Err(GraphError::NotSphere {
                vertex: k.at(0),
                euler: 0,
            });
        }
        let comp = self.component_ids();
        let k_comp = comp[k.at(0)];
        // Which side holds the outer face.
        let outside_is_fwd = match self.outer {
            Some(d) if comp[d.tail] == k_comp => {
                let side_of = |d: Dart| -> Option<bool> {
                    if !on_k[d.tail] {
                        return Some(fwd_side[d.tail]);
                    }
                    let i = k.position(d.tail).unwrap();
                    if d.head == k.at(i as isize + 1) {
                        Some(true)
                    } else if d.head == k.at(i as isize - 1) {
                        Some(false)
                    } else if fwd_nb[i].contains(&d.head) {
                        Some(true)
                    } else if bwd_nb[i].contains(&d.head) {
                        Some(false)
                    } else {
                        None
                    }
                };
                side_of(d).unwrap_or(false)
            }
            _ => false,
        };
        let (out_side, in_side, out_nb, in_nb) = if outside_is_fwd {
            (&fwd_side, &bwd_side, &fwd_nb, &bwd_nb)
        } else {
            (&bwd_side, &fwd_side, &bwd_nb, &fwd_nb)
        };

        let build_part =
            |side: &[bool], nb: &[Vec<Vertex>], include_other_comps: bool, outer: Option<Dart>| {
                let mut keep = vec![false; n];
                for v in 0..n {
                    keep[v] = on_k[v] || side[v] || (include_other_comps && comp[v] != k_comp);
                }
                let mut rot = vec![Vec::new(); n];
                for v in 0..n {
                    if !keep[v] {
                        continue;
                    }
                    if let Some(i) = k.position(v) {
                        let (prev, next) = (k.at(i as isize - 1), k.at(i as isize + 1));
                        let r = &self.rot[v];
                        let ip = self.position(v, prev).unwrap();
                        let keep_nb: HashSet<Vertex> =
                            nb[i].iter().copied().chain([prev, next]).collect();
                        rot[v] = (0..r.len())
                            .map(|s| r[(ip + s) % r.len()])
                            .filter(|x| keep_nb.contains(x))
                            .collect();
                    } else {
                        rot[v] = self.rot[v].clone();
                    }
                }
                let removed: Vec<bool> = keep.iter().map(|&x| !x).collect();
                compact(rot, outer, &removed)
            };

        let (outside, outside_map) = build_part(out_side, out_nb, true, self.outer)?;
        let inner_outer = if outside_is_fwd {
            Dart::new(k.at(0), k.at(1))
        } else {
            Dart::new(k.at(1), k.at(0))
        };
        let (inside, inside_map) = build_part(in_side, in_nb, false, Some(inner_outer))?;
        Ok(CycleSplit {
            outside,
            outside_map,
            inside,
            inside_map,
        })
    }
}

/// Result of [`RotationGraph::split_at_cycle`].
#[derive(Clone, Debug)]
pub struct CycleSplit {
    pub outside: RotationGraph,
    pub outside_map: VertexMap,
    pub inside: RotationGraph,
    pub inside_map: VertexMap,
}

fn flood(g: &RotationGraph, blocked: &[bool], seeds: impl Iterator<Item = Vertex>) -> Vec<bool> {
    let mut seen = vec![false; g.n()];
    let mut queue = VecDeque::new();
    for s in seeds {
        if !blocked[s] && !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &v in g.rotation(u) {
            if !blocked[v] && !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

/// For the first visit of `v` on the walk, the vertex the walk arrives
/// from. The corner sits right after it in the rotation of `v`.
fn corner_on_face(f: &FaceWalk, v: Vertex) -> Result<Vertex, GraphError> {
    f.darts()
        .iter()
        .find(|d| d.head == v)
        .map(|d| d.tail)
        .ok_or(GraphError::NotOnFace(v))
}

fn insert_after(rot: &mut Vec<Vertex>, after: Vertex, x: Vertex) {
    let i = rot.iter().position(|&y| y == after).unwrap();
    rot.insert(i + 1, x);
}

pub(crate) fn rotate_from(r: &[Vertex], start: usize) -> Vec<Vertex> {
    let n = r.len();
    (0..n).map(|k| r[(start + k) % n]).collect()
}

/// Removes one of two cyclically adjacent copies of `x`. Fails if the two
/// copies are not adjacent.
pub(crate) fn collapse_adjacent_duplicate(r: &mut Vec<Vertex>, x: Vertex) -> Result<(), ()> {
    let pos: Vec<usize> = r
        .iter()
        .enumerate()
        .filter(|(_, &y)| y == x)
        .map(|(i, _)| i)
        .collect();
    match pos.as_slice() {
        [_] => Ok(()),
        [a, b] => {
            let n = r.len();
            if b - a == 1 || (*a == 0 && *b == n - 1) {
                r.remove(*b);
                Ok(())
            } else {
                Err(())
            }
        }
        _ => Err(()),
    }
}

/// Drops the marked vertices, renumbers the rest in order and builds.
pub(crate) fn compact(
    rot: Vec<Vec<Vertex>>,
    outer: Option<Dart>,
    removed: &[bool],
) -> Result<(RotationGraph, VertexMap), GraphError> {
    let mut map = vec![None; rot.len()];
    let mut next = 0;
    for (v, &gone) in removed.iter().enumerate() {
        if !gone {
            map[v] = Some(next);
            next += 1;
        }
    }
    let mut new_rot = Vec::with_capacity(next);
    for (v, r) in rot.into_iter().enumerate() {
        if removed[v] {
            continue;
        }
        let mapped: Option<Vec<Vertex>> = r.iter().map(|&u| map[u]).collect();
        new_rot.push(mapped.ok_or(GraphError::VertexOutOfRange(v))?);
    }
    let mut outer = outer.and_then(|d| Some(Dart::new(map[d.tail]?, map[d.head]?)));
    if outer.is_none() {
        outer = first_dart(&new_rot);
    }
    let g = RotationGraph::build(new_rot, outer)?;
    Ok((g, VertexMap::from_vec(map)))
}

fn first_dart(rot: &[Vec<Vertex>]) -> Option<Dart> {
    rot.iter()
        .enumerate()
        .find_map(|(u, r)| r.iter().min().map(|&v| Dart::new(u, v)))
}

/// Rotation system from a straight-line drawing: neighbours sorted
/// clockwise by angle. The outer dart is put on the clockwise-traversed
/// face, which is the unbounded one.
pub fn from_drawing(
    coords: &[(f64, f64)],
    edges: &[(Vertex, Vertex)],
) -> Result<RotationGraph, GraphError> {
    let n = coords.len();
    let mut rot: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    for &(u, v) in edges {
        if u >= n || v >= n {
            return Err(GraphError::VertexOutOfRange(u.max(v)));
        }
        rot[u].push(v);
        rot[v].push(u);
    }
    for (u, r) in rot.iter_mut().enumerate() {
        let (ux, uy) = coords[u];
        r.sort_by(|&a, &b| {
            let ta = (coords[a].1 - uy).atan2(coords[a].0 - ux);
            let tb = (coords[b].1 - uy).atan2(coords[b].0 - ux);
            tb.partial_cmp(&ta).unwrap()
        });
    }
    let provisional = RotationGraph::build(rot, first_dart_vec(n, edges))?;
    let faces = provisional.faces();
    let outer = faces
        .walks()
        .iter()
        .filter(|w| {
            let area: f64 = w
                .darts()
                .iter()
                .map(|d| {
                    let (x1, y1) = coords[d.tail];
                    let (x2, y2) = coords[d.head];
                    x1 * y2 - x2 * y1
                })
                .sum();
            area < 0.0
        })
        .map(|w| w.darts()[0])
        .min();
    provisional.with_outer(outer.unwrap_or_else(|| provisional.darts()[0]))
}

fn first_dart_vec(_n: usize, edges: &[(Vertex, Vertex)]) -> Option<Dart> {
    edges.first().map(|&(u, v)| Dart::new(u, v))
}

/// Vertex set of the outer face.
pub fn outer_vertices(g: &RotationGraph) -> BTreeSet<Vertex> {
    g.outer_face()
        .map(|f| f.vertices().collect())
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn c4() -> RotationGraph {
        RotationGraph::build(
            vec![vec![1, 3], vec![2, 0], vec![3, 1], vec![0, 2]],
            Some(Dart::new(0, 1)),
        )
        .unwrap()
    }

    fn cycle(n: usize) -> RotationGraph {
        let rot = (0..n).map(|i| vec![(i + n - 1) % n, (i + 1) % n]).collect();
        RotationGraph::build(rot, Some(Dart::new(0, 1))).unwrap()
    }

    fn cube() -> RotationGraph {
        let coords = [
            (-2.0, -2.0),
            (2.0, -2.0),
            (2.0, 2.0),
            (-2.0, 2.0),
            (-1.0, -1.0),
            (1.0, -1.0),
            (1.0, 1.0),
            (-1.0, 1.0),
        ];
        let edges = [
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 0),
            (4, 5),
            (5, 6),
            (6, 7),
            (7, 4),
            (0, 4),
            (1, 5),
            (2, 6),
            (3, 7),
        ];
        from_drawing(&coords, &edges).unwrap()
    }

    #[test]
    fn four_cycle_builds_with_two_faces() {
        let g = c4();
        assert_eq!(g.size(), (4, 4));
        let faces = g.faces();
        assert_eq!(faces.len(), 2);
        assert!(faces.walks().iter().all(|w| w.len() == 4));
        assert_eq!(
            faces.get(faces.outer_index().unwrap()).darts()[0],
            Dart::new(0, 1)
        );
    }

    #[test]
    fn build_rejects_malformed_rotations() {
        assert_eq!(
            RotationGraph::build(vec![vec![1], vec![]], Some(Dart::new(0, 1))),
            Err(GraphError::Asymmetric(0, 1))
        );
        assert_eq!(
            RotationGraph::build(vec![vec![1, 1], vec![0]], Some(Dart::new(0, 1))),
            Err(GraphError::MultiEdge(0, 1))
        );
        assert_eq!(
            RotationGraph::build(vec![vec![0]], None),
            Err(GraphError::Loop(0))
        );
        assert_eq!(
            RotationGraph::build(vec![vec![1], vec![0]], Some(Dart::new(1, 2))),
            Err(GraphError::BadOuterDart(Dart::new(1, 2)))
        );
        assert_eq!(
            RotationGraph::build(vec![vec![1], vec![0]], None),
            Err(GraphError::MissingOuterDart)
        );
    }

    #[test]
    fn k4_with_a_bad_rotation_is_not_a_sphere() {
        // K4 with all rotations ascending is a torus embedding.
        let rot = vec![vec![1, 2, 3], vec![0, 2, 3], vec![0, 1, 3], vec![0, 1, 2]];
        assert!(matches!(
            RotationGraph::build(rot, Some(Dart::new(0, 1))),
            Err(GraphError::NotSphere { .. })
        ));
    }

    #[test]
    fn cube_faces_and_cycles() {
        let g = cube();
        assert_eq!(g.size(), (8, 12));
        let faces = g.faces();
        assert_eq!(faces.len(), 6);
        assert!(faces.walks().iter().all(|w| w.len() == 4));
        let outer: BTreeSet<_> = outer_vertices(&g);
        assert_eq!(outer, [0, 1, 2, 3].into_iter().collect());
        assert_eq!(g.find_short_cycles(4).len(), 6);
        let six: Vec<_> = g
            .find_short_cycles(6)
            .into_iter()
            .filter(|c| c.len() == 6)
            .collect();
        assert_eq!(six.len(), 16);
        // 12 hexagons are two adjacent squares (the shared edge is a chord);
        // the 4 around the body diagonals are induced.
        assert_eq!(six.iter().filter(|c| g.is_induced(c)).count(), 4);
        assert!(six.iter().all(|c| !g.is_facial(c)));
    }

    #[test]
    fn c5_has_one_short_cycle() {
        let g = cycle(5);
        let cycles = g.find_short_cycles(5);
        assert_eq!(cycles, vec![CycleRef::new(vec![0, 1, 2, 3, 4])]);
        assert!(g.is_facial(&cycles[0]));
        assert!(g.is_induced(&cycles[0]));
    }

    #[test]
    fn chord_in_hexagon_splits_face() {
        let g = cycle(6);
        let faces = g.faces();
        let inner = faces
            .walks()
            .iter()
            .enumerate()
            .find(|(i, _)| Some(*i) != faces.outer_index())
            .unwrap()
            .1
            .clone();
        let h = g.add_edge_in_face(0, 3, &inner).unwrap();
        let mut lens: Vec<usize> = h.faces().walks().iter().map(|w| w.len()).collect();
        lens.sort();
        assert_eq!(lens, vec![4, 4, 6]);
        assert_eq!(h.outer_face().unwrap().len(), 6);
        assert!(!h.is_induced(&CycleRef::new(vec![0, 1, 2, 3, 4, 5])));
        assert_eq!(
            g.add_edge_in_face(0, 1, &inner),
            Err(GraphError::AlreadyAdjacent(0, 1))
        );
    }

    #[test]
    fn identify_opposite_corners_of_a_square_needs_merging() {
        let g = cube();
        let faces = g.faces();
        let inner_face = faces
            .walks()
            .iter()
            .find(|w| w.vertices().all(|v| v >= 4))
            .unwrap()
            .clone();
        let verts: Vec<Vertex> = inner_face.vertices().collect();
        let (a, c) = (verts[0], verts[2]);
        assert!(matches!(
            g.identify_in_face(a, c, &inner_face),
            Err(GraphError::WouldCreateMultiEdge(..))
        ));
        let (h, map) = g
            .identify_merging(a, c, &inner_face, &[verts[1], verts[3]])
            .unwrap();
        assert_eq!(h.size(), (7, 10));
        assert_eq!(map.get(a), map.get(c));
        assert!(!h.contains_triangle());
    }

    #[test]
    fn split_cube_along_a_hexagon() {
        let g = cube();
        let k = g
            .find_short_cycles(6)
            .into_iter()
            .find(|c| c.len() == 6 && g.is_induced(c))
            .unwrap();
        let split = g.split_at_cycle(&k).unwrap();
        assert_eq!(split.outside.n(), 7);
        assert_eq!(split.inside.n(), 7);
        assert_eq!(split.outside.num_edges() + split.inside.num_edges(), 12 + 6);
        let inner_outer = split.inside.outer_face().unwrap();
        assert_eq!(inner_outer.len(), 6);
        assert_eq!(
            outer_vertices(&split.outside),
            outer_vertices(&g)
                .iter()
                .map(|&v| split.outside_map.get(v).unwrap())
                .collect()
        );
        let face = g.faces().get(0).as_cycle().unwrap();
        assert_eq!(g.split_at_cycle(&face).err(), Some(GraphError::FacialCycle));
    }

    #[test]
    fn delete_keeps_outer_face() {
        let g = cube();
        let (h, map) = g.delete_vertices(&[6]).unwrap();
        assert_eq!(h.size(), (7, 9));
        assert_eq!(map.get(6), None);
        assert_eq!(map.get(7), Some(6));
        assert_eq!(h.outer_face().unwrap().len(), 4);
    }

    #[test]
    fn canonical_cycle_form() {
        let c = CycleRef::new(vec![5, 2, 9, 1]);
        assert_eq!(c.canonical().vertices(), &[1, 5, 2, 9]);
        assert_eq!(c.reversed().canonical(), c.canonical());
    }
}
