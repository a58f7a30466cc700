//! Triangle-free plane graph families for testing and benchmarking.
//!
//! Named families come from straight-line drawings; `random_insertion`
//! grows a 5-cycle by inserting paths of length 2 or 3 across faces, which
//! keeps the graph 2-connected, triangle-free and plane by construction.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::planar::{from_drawing, GraphError, RotationGraph, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GenSpec {
    Cycle(usize),
    Prism(usize),
    Grid(usize, usize),
    HexPatch(usize),
    Cube,
    Dodecahedron,
    RandomInsertion { n: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("parameters out of range: {0}")]
    SpecOutOfRange(String),
    #[error("cannot parse generator spec: {0}")]
    BadSpec(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl GenSpec {
    pub fn family(&self) -> &'static str {
        match self {
            GenSpec::Cycle(_) => "cycle",
            GenSpec::Prism(_) => "prism",
            GenSpec::Grid(..) => "grid",
            GenSpec::HexPatch(_) => "hexpatch",
            GenSpec::Cube => "cube",
            GenSpec::Dodecahedron => "dodecahedron",
            GenSpec::RandomInsertion { .. } => "random_insertion",
        }
    }

    fn check(&self) -> Result<(), GenError> {
        let bad = |msg: &str| Err(GenError::SpecOutOfRange(format!("{self}: {msg}")));
        match *self {
            GenSpec::Cycle(n) if n < 4 => bad("cycle needs n >= 4"),
            GenSpec::Prism(n) if n < 4 => bad("prism needs n >= 4"),
            GenSpec::Grid(a, b) if a < 2 || b < 2 => bad("grid needs both sides >= 2"),
            GenSpec::HexPatch(r) if r < 1 => bad("hexpatch needs radius >= 1"),
            GenSpec::RandomInsertion { n, .. } if n < 5 => bad("random_insertion needs n >= 5"),
            _ => Ok(()),
        }
    }
}

/// Manifest form: `gen <family> <params> <seed>`. Families without a seed
/// write `0`; families without parameters write `-`.
impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (params, seed) = match *self {
            GenSpec::Cycle(n) | GenSpec::Prism(n) | GenSpec::HexPatch(n) => (n.to_string(), 0),
            GenSpec::Grid(a, b) => (format!("{a}x{b}"), 0),
            GenSpec::Cube | GenSpec::Dodecahedron => ("-".to_string(), 0),
            GenSpec::RandomInsertion { n, seed } => (n.to_string(), seed),
        };
        write!(f, "gen {} {} {}", self.family(), params, seed)
    }
}

impl FromStr for GenSpec {
    type Err = GenError;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let bad = || GenError::BadSpec(line.to_string());
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 4 || toks[0] != "gen" {
            return Err(bad());
        }
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
        let seed: u64 = toks[3].parse().map_err(|_| bad())?;
        let spec = match toks[1] {
            "cycle" => GenSpec::Cycle(num(toks[2])?),
            "prism" => GenSpec::Prism(num(toks[2])?),
            "hexpatch" => GenSpec::HexPatch(num(toks[2])?),
            "grid" => {
                let (a, b) = toks[2].split_once('x').ok_or_else(bad)?;
                GenSpec::Grid(num(a)?, num(b)?)
            }
            "cube" => GenSpec::Cube,
            "dodecahedron" => GenSpec::Dodecahedron,
            "random_insertion" => GenSpec::RandomInsertion {
                n: num(toks[2])?,
                seed,
            },
            _ => return Err(bad()),
        };
        Ok(spec)
    }
}

/// Builds the graph for a spec.
pub fn generate(spec: GenSpec) -> Result<RotationGraph, GenError> {
    spec.check()?;
    let g = match spec {
        GenSpec::Cycle(n) => cycle(n)?,
        GenSpec::Prism(n) => prism(n)?,
        GenSpec::Grid(a, b) => grid(a, b)?,
        GenSpec::HexPatch(r) => hexpatch(r)?,
        GenSpec::Cube => prism(4)?,
        GenSpec::Dodecahedron => dodecahedron()?,
        GenSpec::RandomInsertion { n, seed } => random_insertion(n, seed)?,
    };
    Ok(g)
}

fn polar(r: f64, angle: f64) -> (f64, f64) {
    (r * angle.cos(), r * angle.sin())
}

fn cycle(n: usize) -> Result<RotationGraph, GraphError> {
    let coords: Vec<_> = (0..n)
        .map(|i| polar(1.0, 2.0 * PI * i as f64 / n as f64))
        .collect();
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    from_drawing(&coords, &edges)
}

/// Outer ring `0..n`, inner ring `n..2n`, spokes `i -- n+i`.
fn prism(n: usize) -> Result<RotationGraph, GraphError> {
    let mut coords = Vec::with_capacity(2 * n);
    for ring in [2.0, 1.0] {
        coords.extend((0..n).map(|i| polar(ring, 2.0 * PI * i as f64 / n as f64)));
    }
    let mut edges = Vec::with_capacity(3 * n);
    for i in 0..n {
        edges.push((i, (i + 1) % n));
        edges.push((n + i, n + (i + 1) % n));
        edges.push((i, n + i));
    }
    from_drawing(&coords, &edges)
}

/// `a` rows by `b` columns; vertex `r * b + c`.
fn grid(a: usize, b: usize) -> Result<RotationGraph, GraphError> {
    let mut coords = Vec::with_capacity(a * b);
    let mut edges = Vec::new();
    for r in 0..a {
        for c in 0..b {
            coords.push((c as f64, r as f64));
            if c + 1 < b {
                edges.push((r * b + c, r * b + c + 1));
            }
            if r + 1 < a {
                edges.push((r * b + c, (r + 1) * b + c));
            }
        }
    }
    from_drawing(&coords, &edges)
}

/// Hexagons within distance `r - 1` of a central hexagon.
fn hexpatch(r: usize) -> Result<RotationGraph, GraphError> {
    let rr = r as i64 - 1;
    let mut coords: Vec<(f64, f64)> = Vec::new();
    let mut keys: Vec<(i64, i64)> = Vec::new();
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    let mut vertex_at = |p: (f64, f64), coords: &mut Vec<(f64, f64)>| -> Vertex {
        let key = ((p.0 * 1000.0).round() as i64, (p.1 * 1000.0).round() as i64);
        if let Some(i) = keys.iter().position(|&k| k == key) {
            return i;
        }
        keys.push(key);
        coords.push(p);
        coords.len() - 1
    };
    let sqrt3 = 3f64.sqrt();
    for q in -rr..=rr {
        for s in (-rr).max(-q - rr)..=rr.min(-q + rr) {
            // Pointy-top axial coordinates.
            let cx = sqrt3 * (q as f64 + s as f64 / 2.0);
            let cy = 1.5 * s as f64;
            let corners: Vec<Vertex> = (0..6)
                .map(|k| {
                    vertex_at(
                        polar_from((cx, cy), 1.0, PI / 6.0 + PI / 3.0 * k as f64),
                        &mut coords,
                    )
                })
                .collect();
            for k in 0..6 {
                let (u, v) = (corners[k], corners[(k + 1) % 6]);
                let e = (u.min(v), u.max(v));
                if !edges.contains(&e) {
                    edges.push(e);
                }
            }
        }
    }
    from_drawing(&coords, &edges)
}

fn polar_from(center: (f64, f64), r: f64, angle: f64) -> (f64, f64) {
    (center.0 + r * angle.cos(), center.1 + r * angle.sin())
}

/// Schlegel drawing: outer pentagon `0..5`, middle 10-cycle `5..15`, inner
/// pentagon `15..20`.
fn dodecahedron() -> Result<RotationGraph, GraphError> {
    let mut coords = Vec::with_capacity(20);
    let base = PI / 2.0;
    coords.extend((0..5).map(|i| polar(3.0, base + 2.0 * PI * i as f64 / 5.0)));
    coords.extend((0..10).map(|j| polar(2.0, base + 2.0 * PI * j as f64 / 10.0)));
    coords.extend((0..5).map(|i| polar(1.0, base + 2.0 * PI * (2 * i + 1) as f64 / 10.0)));
    let mut edges = Vec::with_capacity(30);
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, 5 + 2 * i));
        edges.push((5 + 2 * i + 1, 15 + i));
        edges.push((15 + i, 15 + (i + 1) % 5));
    }
    for j in 0..10 {
        edges.push((5 + j, 5 + (j + 1) % 10));
    }
    from_drawing(&coords, &edges)
}

/// Grows a 5-cycle to `n` vertices. Each step picks a face and two of its
/// vertices that are at least two apart along the face and non-adjacent
/// in the graph, and joins them by a new path through one or two fresh
/// vertices drawn inside that face.
fn random_insertion(n: usize, seed: u64) -> Result<RotationGraph, GraphError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = cycle(5)?;
    while g.n() < n {
        let faces = g.faces();
        let mut choices = Vec::new();
        for (fi, w) in faces.walks().iter().enumerate() {
            let verts: Vec<Vertex> = w.vertices().collect();
            let len = verts.len();
            for i in 0..len {
                for j in (i + 2)..len {
                    if j - i > len - 2 || g.has_edge(verts[i], verts[j]) {
                        continue;
                    }
                    choices.push((fi, verts[i], verts[j]));
                }
            }
        }
        if choices.is_empty() {
            break;
        }
        let (fi, u, w) = choices[rng.gen_range(0..choices.len())];
        let fresh = if n - g.n() >= 2 && rng.gen_bool(0.5) {
            2
        } else {
            1
        };
        let with_edge = g.add_edge_in_face(u, w, faces.get(fi))?;
        g = subdivide(&with_edge, u, w, fresh)?;
    }
    Ok(g)
}

/// Replaces edge `uw` by a path through `k` new vertices.
fn subdivide(
    g: &RotationGraph,
    u: Vertex,
    w: Vertex,
    k: usize,
) -> Result<RotationGraph, GraphError> {
    let mut rot: Vec<Vec<Vertex>> = g.rotations().to_vec();
    let first = rot.len();
    let path: Vec<Vertex> = std::iter::once(u)
        .chain(first..first + k)
        .chain(std::iter::once(w))
        .collect();
    for i in 1..=k {
        rot.push(vec![path[i - 1], path[i + 1]]);
    }
    for x in rot[u].iter_mut() {
        if *x == w {
            *x = path[1];
        }
    }
    for x in rot[w].iter_mut() {
        if *x == u {
            *x = path[k];
        }
    }
    let outer = g.outer_dart().map(|d| {
        if (d.tail, d.head) == (u, w) {
            crate::planar::Dart::new(u, path[1])
        } else if (d.tail, d.head) == (w, u) {
            crate::planar::Dart::new(w, path[k])
        } else {
            d
        }
    });
    RotationGraph::build(rot, outer)
}

/// The named corpus: cycles 4..=12, prisms 4..=8, grids 2..=4 by 2..=4,
/// hex patches of radius 1 and 2, the cube and the dodecahedron.
pub fn named_corpus() -> Vec<GenSpec> {
    let mut out = Vec::new();
    out.extend((4..=12).map(GenSpec::Cycle));
    out.extend((4..=8).map(GenSpec::Prism));
    for a in 2..=4 {
        for b in 2..=4 {
            out.push(GenSpec::Grid(a, b));
        }
    }
    out.extend((1..=2).map(GenSpec::HexPatch));
    out.push(GenSpec::Cube);
    out.push(GenSpec::Dodecahedron);
    out
}

/// `random_insertion(n, seed)` for every `n` in `sizes` and seeds `0..seeds`.
pub fn random_corpus(sizes: std::ops::RangeInclusive<usize>, seeds: u64) -> Vec<GenSpec> {
    sizes
        .flat_map(|n| (0..seeds).map(move |seed| GenSpec::RandomInsertion { n, seed }))
        .collect()
}
