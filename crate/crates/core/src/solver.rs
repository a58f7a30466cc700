//! Precolouring extension for valid pairs and the top-level 3-colouring
//! driver for triangle-free plane graphs.

use std::fmt;

use thiserror::Error;

use crate::discharging;
use crate::oracle::brute_force_3color;
use crate::planar::{Dart, RotationGraph, Vertex};
use crate::reductions::{find_reduction, ReductionError, ReductionKind};
use crate::validity::{Color, Coloring, InvalidPair, ValidPair, COLORS};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    /// Hand small instances to the backtracking oracle.
    pub use_brute_base: bool,
    pub brute_base_max_vertices: usize,
    pub emit_trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            use_brute_base: true,
            brute_base_max_vertices: 9,
            emit_trace: false,
        }
    }
}

impl SolverConfig {
    /// Reductions all the way down to bare cycles.
    pub fn reductions_only() -> Self {
        SolverConfig {
            use_brute_base: false,
            ..Self::default()
        }
    }

    pub fn with_trace(mut self) -> Self {
        self.emit_trace = true;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub depth: usize,
    pub kind: ReductionKind,
    pub verts: Vec<Vertex>,
    pub child_sizes: Vec<(usize, usize)>,
}

/// Reductions in the order they were applied (pre-order).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn count(&self, kind: ReductionKind) -> usize {
        self.steps.iter().filter(|s| s.kind == kind).count()
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, s) in self.steps.iter().enumerate() {
            write!(f, "step {k} depth {} kind {} verts", s.depth, s.kind)?;
            for v in &s.verts {
                write!(f, " {v}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("no reducible configuration found in a pair of size {size:?}\n{report}")]
    NoReductionFound {
        size: (usize, usize),
        report: String,
    },
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error("oracle found no extension of a valid pair of size {0:?}")]
    OracleFailed((usize, usize)),
    #[error("extension is not proper or changes the boundary (size {0:?})")]
    BadExtension((usize, usize)),
    #[error("graph contains the triangle {0:?}")]
    TriangleFound([Vertex; 3]),
    #[error("block face is not a valid outer cycle: {0}")]
    BlockRoot(InvalidPair),
}

/// Extends the boundary colouring of `p` to all of its graph.
pub fn extend(p: &ValidPair, cfg: &SolverConfig) -> Result<(Coloring, Trace), SolveError> {
    let mut trace = Trace::default();
    let c = extend_at(p, cfg, 0, &mut trace)?;
    Ok((c, trace))
}

fn extend_at(
    p: &ValidPair,
    cfg: &SolverConfig,
    depth: usize,
    trace: &mut Trace,
) -> Result<Coloring, SolveError> {
    let g = p.graph();
    let coloring = if p.is_bare_cycle() {
        let colors = (0..g.n())
            .map(|v| p.boundary().color_of(v).unwrap())
            .collect();
        Coloring::new(colors).expect("boundary colours are in range")
    } else if cfg.use_brute_base && g.n() <= cfg.brute_base_max_vertices {
        brute_force_3color(g, Some(&p.precoloring())).ok_or(SolveError::OracleFailed(p.size()))?
    } else {
        let red = find_reduction(p)?.ok_or_else(|| SolveError::NoReductionFound {
            size: p.size(),
            report: discharging::audit(g, p.outer_cycle()),
        })?;
        if cfg.emit_trace {
            trace.steps.push(TraceStep {
                depth,
                kind: red.kind(),
                verts: red.verts().to_vec(),
                child_sizes: red.child_sizes(),
            });
        }
        let mut children = Vec::with_capacity(2);
        if let Some(first) = red.first_child() {
            children.push(extend_at(first, cfg, depth + 1, trace)?);
        }
        if let Some(first) = children.first() {
            if let Some(second) = red.second_child(first)? {
                children.push(extend_at(&second, cfg, depth + 1, trace)?);
            }
        }
        red.lift(p, &children)?
    };
    if !p.accepts(&coloring) {
        return Err(SolveError::BadExtension(p.size()));
    }
    Ok(coloring)
}

/// Proper 3-colouring of a triangle-free plane graph.
pub fn three_color(g: &RotationGraph, cfg: &SolverConfig) -> Result<(Coloring, Trace), SolveError> {
    if let Some(t) = g.find_triangle() {
        return Err(SolveError::TriangleFound(t));
    }
    let mut trace = Trace::default();
    let colors = color_graph(g, cfg, &mut trace)?;
    let c = Coloring::new(colors).expect("every vertex coloured");
    if !c.is_proper(g) {
        return Err(SolveError::BadExtension(g.size()));
    }
    Ok((c, trace))
}

fn color_graph(
    g: &RotationGraph,
    cfg: &SolverConfig,
    trace: &mut Trace,
) -> Result<Vec<Color>, SolveError> {
    let n = g.n();
    // Peel vertices of degree at most 2, remembering the order.
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut peeled = vec![false; n];
    let mut stack = Vec::new();
    let mut queue: Vec<Vertex> = (0..n).rev().filter(|&v| deg[v] <= 2).collect();
    while let Some(v) = queue.pop() {
        if peeled[v] {
            continue;
        }
        peeled[v] = true;
        stack.push(v);
        for &u in g.rotation(v) {
            if !peeled[u] {
                deg[u] -= 1;
                if deg[u] == 2 {
                    queue.push(u);
                }
            }
        }
    }

    let mut colors = vec![0; n];
    let core: Vec<Vertex> = (0..n).filter(|&v| !peeled[v]).collect();
    if !core.is_empty() {
        let (h, map) = g.induced(&core).expect("induced subgraph of a plane graph");
        let inv = map.inverse(h.n());
        let core_colors = color_min_degree_three(&h, cfg, trace)?;
        for (i, c) in core_colors.into_iter().enumerate() {
            colors[inv[i]] = c;
        }
    }
    for &v in stack.iter().rev() {
        let used: Vec<Color> = g.rotation(v).iter().map(|&u| colors[u]).collect();
        colors[v] = COLORS
            .into_iter()
            .find(|c| !used.contains(c))
            .expect("at most two neighbours were coloured first");
    }
    Ok(colors)
}

/// Colours a graph of minimum degree at least 3 block by block.
fn color_min_degree_three(
    g: &RotationGraph,
    cfg: &SolverConfig,
    trace: &mut Trace,
) -> Result<Vec<Color>, SolveError> {
    let n = g.n();
    let blocks = biconnected_blocks(g);
    let mut colors = vec![0u8; n];
    let mut done = vec![false; n];
    let mut pending: Vec<bool> = vec![true; blocks.len()];
    let mut remaining = blocks.len();
    while remaining > 0 {
        // A pending block touching the coloured part, else the first pending.
        let next = (0..blocks.len())
            .filter(|&b| pending[b])
            .find(|&b| blocks[b].iter().any(|&v| done[v]))
            .or_else(|| (0..blocks.len()).find(|&b| pending[b]))
            .unwrap();
        pending[next] = false;
        remaining -= 1;
        let block = &blocks[next];
        let (h, map) = g.induced(block).expect("induced subgraph of a plane graph");
        let inv = map.inverse(h.n());
        let mut local = Coloring::new(color_block(&h, cfg, trace)?).expect("colours in range");
        if let Some(i) = (0..h.n()).find(|&i| done[inv[i]]) {
            local.permute_to(i, colors[inv[i]]);
        }
        for i in 0..h.n() {
            colors[inv[i]] = local.get(i);
            done[inv[i]] = true;
        }
    }
    Ok(colors)
}

fn color_block(
    h: &RotationGraph,
    cfg: &SolverConfig,
    trace: &mut Trace,
) -> Result<Vec<Color>, SolveError> {
    if (0..h.n()).any(|v| h.degree(v) <= 2) {
        return color_graph(h, cfg, trace);
    }
    let faces = h.faces();
    let face = faces
        .walks()
        .iter()
        .filter(|w| w.len() <= 5)
        .min_by_key(|w| (w.len(), w.darts()[0]))
        .expect(
            "a plane graph of minimum degree 3 without triangles has a face of length at most 5",
        );
    let d: Dart = face.darts()[0];
    let rooted = h.with_outer(d).expect("dart of the graph");
    let cycle = rooted
        .outer_face()
        .and_then(|f| f.as_cycle())
        .ok_or(SolveError::BlockRoot(InvalidPair::OuterNotCycle))?;
    let pattern: &[Color] = if cycle.len() == 4 {
        &[1, 2, 1, 2]
    } else {
        &[1, 2, 1, 2, 3]
    };
    let pos = |v: Vertex| cycle.position(v).map_or(0, |i| pattern[i]);
    let pair = ValidPair::from_lookup(rooted, pos).map_err(SolveError::BlockRoot)?;
    let (c, sub) = extend(&pair, cfg)?;
    trace.steps.extend(sub.steps);
    Ok(c.as_slice().to_vec())
}

/// Vertex sets of the 2-connected blocks (and bridges), each sorted, in
/// order of discovery by a depth-first search from vertex 0.
pub fn biconnected_blocks(g: &RotationGraph) -> Vec<Vec<Vertex>> {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut edge_stack: Vec<(Vertex, Vertex)> = Vec::new();
    let mut blocks = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        if g.degree(root) == 0 {
            blocks.push(vec![root]);
            disc[root] = time;
            time += 1;
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        let mut stack: Vec<(Vertex, Option<Vertex>, usize)> = vec![(root, None, 0)];
        while let Some(&mut (u, parent, ref mut idx)) = stack.last_mut() {
            if *idx < g.degree(u) {
                let w = g.rotation(u)[*idx];
                *idx += 1;
                if Some(w) == parent {
                    continue;
                }
                if disc[w] == usize::MAX {
                    edge_stack.push((u, w));
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, Some(u), 0));
                } else if disc[w] < disc[u] {
                    edge_stack.push((u, w));
                    low[u] = low[u].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(p) = parent {
                    low[p] = low[p].min(low[u]);
                    if low[u] >= disc[p] {
                        let mut verts = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            verts.push(e.0);
                            verts.push(e.1);
                            if e == (p, u) {
                                break;
                            }
                        }
                        verts.sort_unstable();
                        verts.dedup();
                        blocks.push(verts);
                    }
                }
            }
        }
    }
    blocks
}
