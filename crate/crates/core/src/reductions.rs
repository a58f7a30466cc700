//! Reducible configurations for valid pairs.
//!
//! Each reduction turns a valid pair into one or two strictly smaller valid
//! pairs and knows how to lift colourings of the children back to the
//! parent. Detection is attempted in a fixed priority order
//! (R1 > R2 > R3 > R4 > R5 > R6). The safety arguments of the later
//! reductions assume the earlier ones found nothing, and the places where
//! that assumption matters are checked at runtime and reported as
//! [`ReductionError::ProofOrderViolation`].
//!
//! | kind | configuration | children |
//! |------|---------------|----------|
//! | R1  | interior vertex of degree at most 2 | delete it |
//! | R2  | non-facial 4- or 5-cycle | outside, then inside |
//! | R3  | cut vertex or disconnected interior | add one edge |
//! | R4  | induced 6-cycle other than the outer one | outside plus a long diagonal, then inside |
//! | R5  | 4-face other than the outer one | identify two opposite corners |
//! | R5t | the 7-vertex terminal case of R5 | coloured directly |
//! | R6  | 5-face with four consecutive interior cubic vertices whose outer neighbours are interior | delete four, add one edge, identify two |

use std::cell::OnceCell;
use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::planar::{
    compact, rotate_from, CycleRef, Dart, Faces, GraphError, RotationGraph, Vertex, VertexMap,
};
use crate::validity::{pair_less, Color, Coloring, InvalidPair, ValidPair, COLORS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReductionKind {
    R1InteriorLowDegree,
    R2SeparatingShortCycle,
    R3CutRepair,
    R4InducedSixCycle,
    R5FourCycle,
    R5tTerminal,
    R6Pentagon,
}

impl ReductionKind {
    pub const ALL: [ReductionKind; 7] = [
        ReductionKind::R1InteriorLowDegree,
        ReductionKind::R2SeparatingShortCycle,
        ReductionKind::R3CutRepair,
        ReductionKind::R4InducedSixCycle,
        ReductionKind::R5FourCycle,
        ReductionKind::R5tTerminal,
        ReductionKind::R6Pentagon,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            ReductionKind::R1InteriorLowDegree => "R1",
            ReductionKind::R2SeparatingShortCycle => "R2",
            ReductionKind::R3CutRepair => "R3",
            ReductionKind::R4InducedSixCycle => "R4",
            ReductionKind::R5FourCycle => "R5",
            ReductionKind::R5tTerminal => "R5t",
            ReductionKind::R6Pentagon => "R6",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.tag() == tag)
    }
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("{kind}: reduction order violated: {detail}")]
    ProofOrderViolation { kind: ReductionKind, detail: String },
    #[error("R3: no vertex pair at distance two from the attachment (cut vertex {cut:?})")]
    NoEligibleVertexPair { cut: Option<Vertex> },
    #[error("{kind}: surgery failed: {source}")]
    Surgery {
        kind: ReductionKind,
        source: GraphError,
    },
    #[error("{kind}: child is not a valid pair: {reason}")]
    InvalidChild {
        kind: ReductionKind,
        reason: InvalidPair,
    },
    #[error("{kind}: child {child:?} is not smaller than parent {parent:?}")]
    NotSmaller {
        kind: ReductionKind,
        child: (usize, usize),
        parent: (usize, usize),
    },
    #[error("{kind}: lift failed: {detail}")]
    LiftFailed { kind: ReductionKind, detail: String },
}

fn violation(kind: ReductionKind, detail: impl Into<String>) -> ReductionError {
    ReductionError::ProofOrderViolation {
        kind,
        detail: detail.into(),
    }
}

fn surgery(kind: ReductionKind) -> impl Fn(GraphError) -> ReductionError {
    move |source| ReductionError::Surgery { kind, source }
}

/// Cached per-pair data shared by the detectors.
pub struct Scan<'a> {
    pair: &'a ValidPair,
    on_c: Vec<bool>,
    faces: Faces,
    cycles: OnceCell<Vec<CycleRef>>,
}

impl<'a> Scan<'a> {
    pub fn new(pair: &'a ValidPair) -> Self {
        Scan {
            pair,
            on_c: pair.on_outer(),
            faces: pair.graph().faces(),
            cycles: OnceCell::new(),
        }
    }

    fn g(&self) -> &RotationGraph {
        self.pair.graph()
    }

    fn short_cycles(&self) -> &[CycleRef] {
        self.cycles.get_or_init(|| self.g().find_short_cycles(6))
    }

    /// Smallest interior vertex of degree at most 2.
    pub fn detect_r1(&self) -> Option<Vertex> {
        (0..self.g().n()).find(|&v| !self.on_c[v] && self.g().degree(v) <= 2)
    }

    /// Lexicographically smallest non-facial cycle of length 4 or 5.
    pub fn detect_r2(&self) -> Option<CycleRef> {
        self.short_cycles()
            .iter()
            .filter(|c| c.len() <= 5 && !self.g().is_facial(c))
            .min_by_key(|c| c.sorted_vertices())
            .cloned()
    }

    pub fn detect_r3(&self) -> Result<Option<CutRepair>, ReductionError> {
        detect_cut_repair(self.pair, &self.on_c, &self.faces)
    }

    /// Smallest induced 6-cycle other than the outer cycle, labelled so
    /// that `v1` is interior with the fewest neighbours on the outer side of
    /// the cycle.
    pub fn detect_r4(&self) -> Result<Option<SixCycle>, ReductionError> {
        let c_set: HashSet<Vertex> = self.pair.outer_cycle().vertices().iter().copied().collect();
        let best = self
            .short_cycles()
            .iter()
            .filter(|k| k.len() == 6 && self.g().is_induced(k))
            .filter(|k| k.vertices().iter().any(|v| !c_set.contains(v)))
            .min_by_key(|k| k.sorted_vertices());
        let Some(k) = best else { return Ok(None) };
        let facial = self.g().is_facial(k);
        let outside_degree: Vec<usize> = if facial {
            k.vertices().iter().map(|&v| self.g().degree(v)).collect()
        } else {
            let split = self
                .g()
                .split_at_cycle(k)
                .map_err(surgery(ReductionKind::R4InducedSixCycle))?;
            k.vertices()
                .iter()
                .map(|&v| split.outside.degree(split.outside_map.get(v).unwrap()))
                .collect()
        };
        let start = (0..6)
            .filter(|&i| !self.on_c[k.vertices()[i]])
            .min_by_key(|&i| (outside_degree[i], k.vertices()[i]))
            .expect("an induced cycle other than the outer one has an interior vertex");
        let (a, b) = (k.at(start as isize + 1), k.at(start as isize - 1));
        let step: isize = if a <= b { 1 } else { -1 };
        let labels: Vec<Vertex> = (0..6).map(|i| k.at(start as isize + step * i)).collect();
        Ok(Some(SixCycle {
            cycle: CycleRef::new(labels),
            facial,
        }))
    }

    /// Smallest 4-face other than the outer face, as `[v1, v2, v3, v4]`
    /// with `v3` interior.
    pub fn detect_r5(&self) -> Option<[Vertex; 4]> {
        let outer = self.faces.outer_index();
        self.faces
            .walks()
            .iter()
            .enumerate()
            .filter(|(i, w)| Some(*i) != outer && w.len() == 4)
            .filter_map(|(_, w)| w.as_cycle())
            .filter_map(|k| {
                let v3 = k
                    .vertices()
                    .iter()
                    .copied()
                    .filter(|&v| !self.on_c[v])
                    .min()?;
                let i = k.position(v3).unwrap() as isize;
                let v1 = k.at(i + 2);
                let (p, q) = (k.at(i + 1), k.at(i + 3));
                Some((k.sorted_vertices(), [v1, p.min(q), v3, p.max(q)]))
            })
            .min()
            .map(|(_, labels)| labels)
    }

    /// Smallest 5-face with a labelling `v1..v5` where `v1..v4` are
    /// interior of degree 3 and their neighbours off the face are interior.
    pub fn detect_r6(&self) -> Option<Pentagon> {
        let g = self.g();
        let outer = self.faces.outer_index();
        let mut best: Option<(Vec<Vertex>, Pentagon)> = None;
        for (fi, w) in self.faces.walks().iter().enumerate() {
            if Some(fi) == outer || w.len() != 5 {
                continue;
            }
            let Some(k) = w.as_cycle() else { continue };
            let key = k.sorted_vertices();
            if best.as_ref().is_some_and(|(bk, _)| *bk < key) {
                continue;
            }
            for start in 0..5isize {
                for step in [1isize, -1] {
                    let v: Vec<Vertex> = (0..5).map(|i| k.at(start + step * i)).collect();
                    let mut x = [0; 4];
                    let ok = (0..4).all(|i| {
                        if self.on_c[v[i]] || g.degree(v[i]) != 3 {
                            return false;
                        }
                        let prev = v[(i + 4) % 5];
                        let next = v[i + 1];
                        match g.rotation(v[i]).iter().find(|&&y| y != prev && y != next) {
                            Some(&xi) if !self.on_c[xi] => {
                                x[i] = xi;
                                true
                            }
                            _ => false,
                        }
                    });
                    if !ok {
                        continue;
                    }
                    let cand = Pentagon {
                        v: [v[0], v[1], v[2], v[3], v[4]],
                        x,
                    };
                    let better = match &best {
                        None => true,
                        Some((bk, bp)) => (&key, cand.v) < (bk, bp.v),
                    };
                    if better {
                        best = Some((key.clone(), cand));
                    }
                }
            }
        }
        best.map(|(_, p)| p)
    }
}

/// R3 parameters: the new edge `v1 v2`, each end given with the
/// neighbour it is inserted after.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutRepair {
    pub cut: Option<Vertex>,
    pub v1: Vertex,
    pub after1: Option<Vertex>,
    pub v2: Vertex,
    pub after2: Option<Vertex>,
}

/// R4 parameters: the cycle labelled `v1..v6`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SixCycle {
    pub cycle: CycleRef,
    pub facial: bool,
}

/// R6 parameters: face `v1..v5` and outside neighbours `x1..x4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pentagon {
    pub v: [Vertex; 5],
    pub x: [Vertex; 4],
}

fn detect_cut_repair(
    pair: &ValidPair,
    on_c: &[bool],
    faces: &Faces,
) -> Result<Option<CutRepair>, ReductionError> {
    let g = pair.graph();
    let comp = g.component_ids();
    let c0 = pair.outer_cycle().vertices()[0];
    let main = comp[c0];

    // Disconnected: attach the component of the smallest stray vertex.
    if let Some(stray) = (0..g.n()).find(|&v| comp[v] != main) {
        let outer = faces.outer_index();
        let (v1, after1) = faces
            .walks()
            .iter()
            .enumerate()
            .filter(|(i, w)| Some(*i) != outer && comp[w.darts()[0].tail] == main)
            .flat_map(|(_, w)| w.darts().iter().map(|d| (d.head, d.tail)))
            .min()
            .expect("the outer cycle has an inner face");
        let after2 = g.rotation(stray).first().copied();
        return Ok(Some(CutRepair {
            cut: None,
            v1,
            after1: Some(after1),
            v2: stray,
            after2,
        }));
    }

    for c in articulation_points(g) {
        // Components of G - c; the one holding the rest of the outer cycle
        // stays with G1.
        let mut label = vec![usize::MAX; g.n()];
        label[c] = usize::MAX - 1;
        let mut parts = 0;
        for s in 0..g.n() {
            if label[s] != usize::MAX {
                continue;
            }
            let mut stack = vec![s];
            label[s] = parts;
            while let Some(u) = stack.pop() {
                for &w in g.rotation(u) {
                    if label[w] == usize::MAX {
                        label[w] = parts;
                        stack.push(w);
                    }
                }
            }
            parts += 1;
        }
        let outer_part = pair
            .outer_cycle()
            .vertices()
            .iter()
            .find(|&&v| v != c)
            .map(|&v| label[v])
            .unwrap();
        let Some(g2_part) = (0..g.n())
            .filter(|&v| v != c && label[v] != outer_part)
            .map(|v| label[v])
            .next()
        else {
            continue;
        };
        let in_g2 = |v: Vertex| v != c && label[v] == g2_part;
        let g2_size = 1 + (0..g.n()).filter(|&v| in_g2(v)).count();
        if g2_size < 4 {
            continue;
        }
        // A corner at c from a G1 neighbour to a G2 neighbour.
        let rot = g.rotation(c);
        let Some(i) = (0..rot.len()).find(|&i| !in_g2(rot[i]) && in_g2(rot[(i + 1) % rot.len()]))
        else {
            continue;
        };
        let walk = g.face_walk(Dart::new(rot[i], c));
        let far = |v: Vertex| v != c && !g.has_edge(v, c);
        let darts = walk.darts();
        let len = darts.len();
        // darts[len-1] = (c, b) is the last step; darts[0] = (a, c).
        let pick = |want_g2: bool| {
            (0..len).find_map(|j| {
                let d = darts[j];
                let ok = far(d.tail) && in_g2(d.tail) == want_g2;
                ok.then(|| (d.tail, darts[(j + len - 1) % len].tail))
            })
        };
        match (pick(false), pick(true)) {
            (Some((v1, a1)), Some((v2, a2))) => {
                return Ok(Some(CutRepair {
                    cut: Some(c),
                    v1,
                    after1: Some(a1),
                    v2,
                    after2: Some(a2),
                }))
            }
            _ => return Err(ReductionError::NoEligibleVertexPair { cut: Some(c) }),
        }
    }
    let _ = on_c;
    Ok(None)
}

/// Cut vertices in increasing order.
pub fn articulation_points(g: &RotationGraph) -> Vec<Vertex> {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut is_cut = vec![false; n];
    let mut time = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        // Iterative DFS: (vertex, parent, next rotation index).
        let mut stack: Vec<(Vertex, Option<Vertex>, usize)> = vec![(root, None, 0)];
        disc[root] = time;
        low[root] = time;
        time += 1;
        let mut root_children = 0;
        while let Some(&mut (u, parent, ref mut idx)) = stack.last_mut() {
            if *idx < g.degree(u) {
                let w = g.rotation(u)[*idx];
                *idx += 1;
                if Some(w) == parent {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    if u == root {
                        root_children += 1;
                    }
                    stack.push((w, Some(u), 0));
                } else {
                    low[u] = low[u].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(p) = parent {
                    low[p] = low[p].min(low[u]);
                    if p != root && low[u] >= disc[p] {
                        is_cut[p] = true;
                    }
                }
            }
        }
        if root_children >= 2 {
            is_cut[root] = true;
        }
    }
    (0..n).filter(|&v| is_cut[v]).collect()
}

enum Plan {
    Single { child: ValidPair, lift: SingleLift },
    Split(Box<SplitPlan>),
    Direct(Coloring),
}

enum SingleLift {
    Deleted { map: VertexMap, v: Vertex },
    Identity,
    Merged { map: VertexMap },
    Pentagon { map: VertexMap, cfg: Pentagon },
}

struct SplitPlan {
    outside: ValidPair,
    outside_map: VertexMap,
    inside: RotationGraph,
    inside_map: VertexMap,
    cycle: CycleRef,
}

/// A detected configuration together with its children and lift data.
pub struct Reduction {
    kind: ReductionKind,
    verts: Vec<Vertex>,
    parent_size: (usize, usize),
    plan: Plan,
}

impl fmt::Debug for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Reduction")
            .field("kind", &self.kind)
            .field("verts", &self.verts)
            .field("child_sizes", &self.child_sizes())
            .finish()
    }
}

impl Reduction {
    pub fn kind(&self) -> ReductionKind {
        self.kind
    }

    /// Configuration vertices in parent ids, in labelling order.
    pub fn verts(&self) -> &[Vertex] {
        &self.verts
    }

    /// Sizes of the child instances (the second child of a split is known
    /// before its boundary colours are).
    pub fn child_sizes(&self) -> Vec<(usize, usize)> {
        match &self.plan {
            Plan::Single { child, .. } => vec![child.size()],
            Plan::Split(s) => vec![s.outside.size(), s.inside.size()],
            Plan::Direct(_) => vec![],
        }
    }

    /// The child to colour first, if any.
    pub fn first_child(&self) -> Option<&ValidPair> {
        match &self.plan {
            Plan::Single { child, .. } => Some(child),
            Plan::Split(s) => Some(&s.outside),
            Plan::Direct(_) => None,
        }
    }

    /// For two-child reductions: the inside instance, with its boundary
    /// taken from the colouring of the first child.
    pub fn second_child(&self, first: &Coloring) -> Result<Option<ValidPair>, ReductionError> {
        let Plan::Split(s) = &self.plan else {
            return Ok(None);
        };
        let inv = s.inside_map.inverse(s.inside.n());
        let child = ValidPair::from_lookup(s.inside.clone(), |v| {
            first.get(s.outside_map.get(inv[v]).unwrap())
        })
        .map_err(|reason| {
            violation(self.kind, format!("inside instance is not valid: {reason}"))
        })?;
        check_smaller(self.kind, child.size(), self.parent_size)?;
        Ok(Some(child))
    }

    /// Combines child colourings into a colouring of the parent and checks
    /// that it is proper and keeps the boundary.
    pub fn lift(
        &self,
        parent: &ValidPair,
        children: &[Coloring],
    ) -> Result<Coloring, ReductionError> {
        let g = parent.graph();
        let fail = |detail: String| ReductionError::LiftFailed {
            kind: self.kind,
            detail,
        };
        let colors: Vec<Color> = match &self.plan {
            Plan::Direct(c) => c.as_slice().to_vec(),
            Plan::Single { lift, .. } => {
                let child = children
                    .first()
                    .ok_or_else(|| fail("missing child colouring".into()))?;
                match lift {
                    SingleLift::Identity => child.as_slice().to_vec(),
                    SingleLift::Merged { map } => {
                        (0..g.n()).map(|v| child.get(map.get(v).unwrap())).collect()
                    }
                    SingleLift::Deleted { map, v } => {
                        lift_deleted(g, *v, child, map).as_slice().to_vec()
                    }
                    SingleLift::Pentagon { map, cfg } => lift_pentagon(g, cfg, child, map)
                        .ok_or_else(|| fail("no completion of the pentagon".into()))?
                        .as_slice()
                        .to_vec(),
                }
            }
            Plan::Split(s) => {
                let (outside, inside) = match children {
                    [a, b, ..] => (a, b),
                    _ => return Err(fail("missing child colouring".into())),
                };
                (0..g.n())
                    .map(|v| match s.outside_map.get(v) {
                        Some(o) => outside.get(o),
                        None => inside.get(s.inside_map.get(v).unwrap()),
                    })
                    .collect()
            }
        };
        let col = Coloring::new(colors).map_err(|e| fail(e.to_string()))?;
        if !parent.accepts(&col) {
            return Err(fail(format!(
                "lifted colouring rejected: conflict {:?}",
                col.first_conflict(g)
            )));
        }
        Ok(col)
    }

    /// The separating cycle of a split, in parent ids.
    pub fn split_cycle(&self) -> Option<&CycleRef> {
        match &self.plan {
            Plan::Split(s) => Some(&s.cycle),
            _ => None,
        }
    }
}

fn check_smaller(
    kind: ReductionKind,
    child: (usize, usize),
    parent: (usize, usize),
) -> Result<(), ReductionError> {
    if pair_less(child, parent) {
        Ok(())
    } else {
        Err(ReductionError::NotSmaller {
            kind,
            child,
            parent,
        })
    }
}

/// Child pair on `graph` whose boundary copies the parent's through `map`.
fn child_pair(
    kind: ReductionKind,
    parent: &ValidPair,
    graph: RotationGraph,
    map: &VertexMap,
) -> Result<ValidPair, ReductionError> {
    let mut colors = vec![0; graph.n()];
    for (v, c) in parent.boundary().iter() {
        if let Some(x) = map.get(v) {
            colors[x] = c;
        }
    }
    let child = ValidPair::from_lookup(graph, |v| colors[v]).map_err(|reason| match reason {
        InvalidPair::Triangle(t) => violation(kind, format!("child contains triangle {t:?}")),
        reason => ReductionError::InvalidChild { kind, reason },
    })?;
    check_smaller(kind, child.size(), parent.size())?;
    Ok(child)
}

/// Smallest colour missing from the coloured neighbours of `v`.
fn smallest_free(
    g: &RotationGraph,
    v: Vertex,
    color_of: impl Fn(Vertex) -> Color,
) -> Option<Color> {
    let used: Vec<Color> = g.rotation(v).iter().map(|&u| color_of(u)).collect();
    COLORS.into_iter().find(|c| !used.contains(c))
}

/// R1 lift: copy the child colouring and give `v` the smallest colour not
/// used by its neighbours.
pub fn lift_deleted(g: &RotationGraph, v: Vertex, child: &Coloring, map: &VertexMap) -> Coloring {
    let mut colors: Vec<Color> = (0..g.n())
        .map(|u| map.get(u).map_or(0, |c| child.get(c)))
        .collect();
    colors[v] = smallest_free(g, v, |u| colors[u]).expect("at most two coloured neighbours");
    Coloring::new(colors).expect("colours in range")
}

/// R6 lift core: colours for `v1..v4` from the colours of `x1`, `x4`,
/// `v5` and the merged `x2 = x3`, searched smallest first.
pub fn pentagon_completion(x1: Color, x4: Color, v5: Color, x23: Color) -> Option<[Color; 4]> {
    for c1 in COLORS.into_iter().filter(|&c| c != x1 && c != v5) {
        for c4 in COLORS
            .into_iter()
            .filter(|&c| c != x4 && c != v5 && c != c1)
        {
            for c2 in COLORS.into_iter().filter(|&c| c != c1 && c != x23) {
                if let Some(c3) = COLORS.into_iter().find(|&c| c != c2 && c != x23 && c != c4) {
                    return Some([c1, c2, c3, c4]);
                }
            }
        }
    }
    None
}

fn lift_pentagon(
    g: &RotationGraph,
    cfg: &Pentagon,
    child: &Coloring,
    map: &VertexMap,
) -> Option<Coloring> {
    let at = |v: Vertex| child.get(map.get(v).unwrap());
    let [v1, v2, v3, v4, v5] = cfg.v;
    let [x1, x2, _x3, x4] = cfg.x;
    let fill = pentagon_completion(at(x1), at(x4), at(v5), at(x2))?;
    let mut colors: Vec<Color> = (0..g.n())
        .map(|u| map.get(u).map_or(0, |c| child.get(c)))
        .collect();
    for (v, c) in [v1, v2, v3, v4].into_iter().zip(fill) {
        colors[v] = c;
    }
    Coloring::new(colors).ok()
}

/// R1: delete an interior vertex of degree at most 2.
pub fn apply_r1(p: &ValidPair, v: Vertex) -> Result<Reduction, ReductionError> {
    let kind = ReductionKind::R1InteriorLowDegree;
    let (g, map) = p.graph().delete_vertices(&[v]).map_err(surgery(kind))?;
    let child = child_pair(kind, p, g, &map)?;
    Ok(Reduction {
        kind,
        verts: vec![v],
        parent_size: p.size(),
        plan: Plan::Single {
            child,
            lift: SingleLift::Deleted { map, v },
        },
    })
}

fn split_plan(
    kind: ReductionKind,
    p: &ValidPair,
    cycle: &CycleRef,
    outside: RotationGraph,
    outside_map: VertexMap,
    inside: RotationGraph,
    inside_map: VertexMap,
) -> Result<Box<SplitPlan>, ReductionError> {
    let outside_pair = child_pair(kind, p, outside, &outside_map)?;
    if !pair_less(inside.size(), p.size()) {
        return Err(ReductionError::NotSmaller {
            kind,
            child: inside.size(),
            parent: p.size(),
        });
    }
    Ok(Box::new(SplitPlan {
        outside: outside_pair,
        outside_map,
        inside,
        inside_map,
        cycle: cycle.clone(),
    }))
}

/// R2: solve outside a separating short cycle, then inside it.
pub fn apply_r2(p: &ValidPair, k: &CycleRef) -> Result<Reduction, ReductionError> {
    let kind = ReductionKind::R2SeparatingShortCycle;
    let split = p.graph().split_at_cycle(k).map_err(surgery(kind))?;
    let plan = split_plan(
        kind,
        p,
        k,
        split.outside,
        split.outside_map,
        split.inside,
        split.inside_map,
    )?;
    Ok(Reduction {
        kind,
        verts: k.vertices().to_vec(),
        parent_size: p.size(),
        plan: Plan::Split(plan),
    })
}

/// R3: add the edge `v1 v2` across the common face.
pub fn apply_r3(p: &ValidPair, cr: &CutRepair) -> Result<Reduction, ReductionError> {
    let kind = ReductionKind::R3CutRepair;
    let g = p
        .graph()
        .add_edge_at(cr.v1, cr.after1, cr.v2, cr.after2)
        .map_err(surgery(kind))?;
    let identity = VertexMap::identity(g.n());
    let child = child_pair(kind, p, g, &identity)?;
    let mut verts = vec![cr.v1, cr.v2];
    verts.extend(cr.cut);
    Ok(Reduction {
        kind,
        verts,
        parent_size: p.size(),
        plan: Plan::Single {
            child,
            lift: SingleLift::Identity,
        },
    })
}

/// Face of `g` bounded by `k` other than the outer face.
fn inner_face_of(g: &RotationGraph, k: &CycleRef) -> Option<crate::planar::FaceWalk> {
    let outer = g.outer_face();
    [Dart::new(k.at(0), k.at(1)), Dart::new(k.at(1), k.at(0))]
        .into_iter()
        .map(|d| g.face_walk(d))
        .find(|w| {
            w.len() == k.len()
                && Some(w) != outer.as_ref()
                && k.vertices().iter().all(|&v| w.contains_vertex(v))
        })
}

fn cycle_graph(k: &CycleRef, n_parent: usize) -> Result<(RotationGraph, VertexMap), GraphError> {
    let len = k.len();
    let rot = (0..len)
        .map(|i| vec![(i + len - 1) % len, (i + 1) % len])
        .collect();
    let g = RotationGraph::build(rot, Some(Dart::new(0, 1)))?;
    let mut map = vec![None; n_parent];
    for (i, &v) in k.vertices().iter().enumerate() {
        map[v] = Some(i);
    }
    Ok((g, VertexMap::from_vec(map)))
}

/// R4: add the diagonal `v1 v4` on the outer side of the 6-cycle, solve
/// that, then solve the inside with the inherited (now valid) colouring.
pub fn apply_r4(p: &ValidPair, six: &SixCycle) -> Result<Reduction, ReductionError> {
    let kind = ReductionKind::R4InducedSixCycle;
    let k = &six.cycle;
    let (v1, v4) = (k.at(0), k.at(3));
    let g = p.graph();
    let (outside, outside_map, inside, inside_map) = if six.facial {
        let (inside, inside_map) = cycle_graph(k, g.n()).map_err(surgery(kind))?;
        (g.clone(), VertexMap::identity(g.n()), inside, inside_map)
    } else {
        let s = g.split_at_cycle(k).map_err(surgery(kind))?;
        (s.outside, s.outside_map, s.inside, s.inside_map)
    };
    let mapped = CycleRef::new(
        k.vertices()
            .iter()
            .map(|&v| outside_map.get(v).unwrap())
            .collect(),
    );
    let face = inner_face_of(&outside, &mapped).ok_or(ReductionError::Surgery {
        kind,
        source: GraphError::NotOnFace(v1),
    })?;
    let (m1, m4) = (outside_map.get(v1).unwrap(), outside_map.get(v4).unwrap());
    let with_chord = outside
        .add_edge_in_face(m1, m4, &face)
        .map_err(surgery(kind))?;
    if let Some(t) = with_chord.find_triangle() {
        return Err(violation(kind, format!("diagonal creates triangle {t:?}")));
    }
    let plan = split_plan(kind, p, k, with_chord, outside_map, inside, inside_map)?;
    Ok(Reduction {
        kind,
        verts: k.vertices().to_vec(),
        parent_size: p.size(),
        plan: Plan::Split(plan),
    })
}

/// R5: identify `v1` with `v3` across the 4-face; falls through to the
/// terminal case when that would put a chord on the outer cycle.
pub fn apply_r5(p: &ValidPair, labels: [Vertex; 4]) -> Result<Reduction, ReductionError> {
    let kind = ReductionKind::R5FourCycle;
    let [v1, v2, v3, v4] = labels;
    let g = p.graph();
    let face =
        inner_face_of(g, &CycleRef::new(labels.to_vec())).ok_or(ReductionError::Surgery {
            kind,
            source: GraphError::NotOnFace(v1),
        })?;
    let (merged, map) = match g.identify_merging(v1, v3, &face, &[v2, v4]) {
        Ok(r) => r,
        Err(GraphError::WouldCreateMultiEdge(_, _, x)) => {
            return Err(violation(
                kind,
                format!("{v1} and {v3} share the extra neighbour {x}"),
            ))
        }
        Err(e) => return Err(surgery(kind)(e)),
    };
    if let Some(t) = merged.find_triangle() {
        return Err(violation(
            kind,
            format!("identification creates triangle {t:?}"),
        ));
    }
    let outer = merged.outer_face().and_then(|f| f.as_cycle());
    let induced = outer.as_ref().is_some_and(|c| merged.is_induced(c));
    if !induced {
        return terminal_r5(p, labels);
    }
    let child = child_pair(kind, p, merged, &map)?;
    Ok(Reduction {
        kind,
        verts: labels.to_vec(),
        parent_size: p.size(),
        plan: Plan::Single {
            child,
            lift: SingleLift::Merged { map },
        },
    })
}

/// R5 terminal case: the graph is a 6-cycle plus one vertex joined to
/// three alternate cycle vertices. Some opposite pair `(a, b)` of the
/// cycle has distinct colours with `b` adjacent to the centre; the centre
/// takes the colour of `a`.
fn terminal_r5(p: &ValidPair, labels: [Vertex; 4]) -> Result<Reduction, ReductionError> {
    let kind = ReductionKind::R5tTerminal;
    let g = p.graph();
    let c = p.outer_cycle();
    let v3 = labels[2];
    let expected = c.len() == 6 && g.n() == 7 && g.degree(v3) == 3;
    if !expected {
        return Err(violation(
            kind,
            format!("outer cycle loses inducedness but the graph is not the 7-vertex terminal case (n = {}, |C| = {})", g.n(), c.len()),
        ));
    }
    let b = p.boundary();
    let pick = (0..6isize).find_map(|i| {
        let (a, bb) = (c.at(i), c.at(i + 3));
        let adjacent = g.has_edge(v3, bb) && !g.has_edge(v3, a);
        (adjacent && b.color_of(a) != b.color_of(bb)).then(|| b.color_of(a).unwrap())
    });
    let color = pick.ok_or_else(|| violation(kind, "no opposite pair with distinct colours"))?;
    let colors: Vec<Color> = (0..g.n())
        .map(|v| {
            if v == v3 {
                color
            } else {
                b.color_of(v).unwrap()
            }
        })
        .collect();
    let col = Coloring::new(colors).expect("colours in range");
    if !p.accepts(&col) {
        return Err(violation(kind, "terminal colouring is not proper"));
    }
    Ok(Reduction {
        kind,
        verts: labels.to_vec(),
        parent_size: p.size(),
        plan: Plan::Direct(col),
    })
}

/// R6: delete `v1..v4`, join `x1 x4` and identify `x2` with `x3`, all in
/// the region the deleted vertices occupied.
pub fn apply_r6(p: &ValidPair, cfg: &Pentagon) -> Result<Reduction, ReductionError> {
    let kind = ReductionKind::R6Pentagon;
    let g = p.graph();
    let [v1, v2, v3, v4, v5] = cfg.v;
    let [x1, x2, x3, x4] = cfg.x;
    let xs: HashSet<Vertex> = cfg.x.iter().copied().collect();
    if xs.len() != 4 {
        return Err(violation(
            kind,
            format!("outside neighbours {:?} are not distinct", cfg.x),
        ));
    }
    if g.has_edge(x2, x3) {
        return Err(violation(
            kind,
            format!("{x2} and {x3} are adjacent (4-cycle)"),
        ));
    }
    if g.has_edge(x1, x4) {
        return Err(violation(
            kind,
            format!("{x1} and {x4} are already adjacent"),
        ));
    }
    let shared: Vec<Vertex> = g
        .rotation(x2)
        .iter()
        .copied()
        .filter(|&y| g.has_edge(x3, y))
        .collect();

    let mut rot: Vec<Vec<Vertex>> = g.rotations().to_vec();
    let replace = |r: &mut Vec<Vertex>, from: Vertex, to: Vertex| {
        for y in r.iter_mut() {
            if *y == from {
                *y = to;
            }
        }
    };
    // x1 x4 goes into the slots left by v1 and v4.
    replace(&mut rot[x1], v1, x4);
    replace(&mut rot[x4], v4, x1);
    // x2 and x3 are glued at the slots left by v2 and v3.
    let i2 = g.position(x2, v2).unwrap();
    let i3 = g.position(x3, v3).unwrap();
    let mut merged = rotate_from(&rot[x2], i2 + 1);
    merged.pop();
    let mut tail = rotate_from(&rot[x3], i3 + 1);
    tail.pop();
    merged.extend(tail);
    rot[x2] = merged;
    rot[x3].clear();
    for r in rot.iter_mut() {
        replace(r, x3, x2);
    }
    rot[v5].retain(|&y| y != v1 && y != v4);
    for v in [v1, v2, v3, v4] {
        rot[v].clear();
    }
    for &y in &shared {
        let bad = || {
            violation(
                kind,
                format!("common neighbour {y} of {x2} and {x3} does not close a face"),
            )
        };
        crate::planar::collapse_adjacent_duplicate(&mut rot[x2], y).map_err(|_| bad())?;
        crate::planar::collapse_adjacent_duplicate(&mut rot[y], x2).map_err(|_| bad())?;
    }
    let mut removed = vec![false; g.n()];
    for v in [v1, v2, v3, v4, x3] {
        removed[v] = true;
    }
    let (child_graph, mut map) = compact(rot, g.outer_dart(), &removed).map_err(surgery(kind))?;
    map.set(x3, map.get(x2));
    if let Some(t) = child_graph.find_triangle() {
        return Err(violation(kind, format!("child contains triangle {t:?}")));
    }
    let child = child_pair(kind, p, child_graph, &map)?;
    Ok(Reduction {
        kind,
        verts: vec![v1, v2, v3, v4, v5, x1, x2, x3, x4],
        parent_size: p.size(),
        plan: Plan::Single {
            child,
            lift: SingleLift::Pentagon { map, cfg: *cfg },
        },
    })
}

/// Public single-shot detectors, each building its own scan.
pub fn detect_r1(p: &ValidPair) -> Option<Vertex> {
    Scan::new(p).detect_r1()
}

pub fn detect_r2(p: &ValidPair) -> Option<CycleRef> {
    Scan::new(p).detect_r2()
}

pub fn detect_r3(p: &ValidPair) -> Result<Option<CutRepair>, ReductionError> {
    Scan::new(p).detect_r3()
}

pub fn detect_r4(p: &ValidPair) -> Result<Option<SixCycle>, ReductionError> {
    Scan::new(p).detect_r4()
}

pub fn detect_r5(p: &ValidPair) -> Option<[Vertex; 4]> {
    Scan::new(p).detect_r5()
}

pub fn detect_r6(p: &ValidPair) -> Option<Pentagon> {
    Scan::new(p).detect_r6()
}

/// First applicable reduction in priority order, applied.
pub fn find_reduction(p: &ValidPair) -> Result<Option<Reduction>, ReductionError> {
    let scan = Scan::new(p);
    if let Some(v) = scan.detect_r1() {
        return apply_r1(p, v).map(Some);
    }
    if let Some(k) = scan.detect_r2() {
        return apply_r2(p, &k).map(Some);
    }
    if let Some(cr) = scan.detect_r3()? {
        return apply_r3(p, &cr).map(Some);
    }
    if let Some(six) = scan.detect_r4()? {
        return apply_r4(p, &six).map(Some);
    }
    if let Some(labels) = scan.detect_r5() {
        return apply_r5(p, labels).map(Some);
    }
    if let Some(cfg) = scan.detect_r6() {
        return apply_r6(p, &cfg).map(Some);
    }
    Ok(None)
}

/// Every reduction kind whose detector fires on `p`, ignoring priority.
pub fn firing_kinds(p: &ValidPair) -> Result<Vec<ReductionKind>, ReductionError> {
    let scan = Scan::new(p);
    let mut out = Vec::new();
    if scan.detect_r1().is_some() {
        out.push(ReductionKind::R1InteriorLowDegree);
    }
    if scan.detect_r2().is_some() {
        out.push(ReductionKind::R2SeparatingShortCycle);
    }
    if scan.detect_r3()?.is_some() {
        out.push(ReductionKind::R3CutRepair);
    }
    if scan.detect_r4()?.is_some() {
        out.push(ReductionKind::R4InducedSixCycle);
    }
    if scan.detect_r5().is_some() {
        out.push(ReductionKind::R5FourCycle);
    }
    if scan.detect_r6().is_some() {
        out.push(ReductionKind::R6Pentagon);
    }
    Ok(out)
}
