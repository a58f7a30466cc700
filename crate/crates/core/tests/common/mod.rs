#![allow(dead_code)]

use trifree::generate::{generate, named_corpus, random_corpus, GenSpec};
use trifree::planar::RotationGraph;
use trifree::validity::{is_valid_boundary, Color, ValidPair};

/// Named fixtures followed by the random corpus.
pub fn corpus(sizes: std::ops::RangeInclusive<usize>, seeds: u64) -> Vec<(GenSpec, RotationGraph)> {
    named_corpus()
        .into_iter()
        .chain(random_corpus(sizes, seeds))
        .map(|s| (s, generate(s).expect("corpus spec generates")))
        .collect()
}

/// Every colour tuple of length `k` that is a valid boundary colouring.
pub fn valid_boundaries(k: usize) -> Vec<Vec<Color>> {
    let mut out = Vec::new();
    for code in 0..3usize.pow(k as u32) {
        let mut x = code;
        let t: Vec<Color> = (0..k)
            .map(|_| {
                let c = (x % 3) as Color + 1;
                x /= 3;
                c
            })
            .collect();
        if is_valid_boundary(&t) == Ok(true) {
            out.push(t);
        }
    }
    out
}

/// `g` re-rooted at each face of length at most 6 bounded by an induced
/// cycle, one embedding per face.
pub fn induced_face_roots(g: &RotationGraph) -> Vec<RotationGraph> {
    g.faces()
        .walks()
        .iter()
        .filter(|w| w.len() <= 6)
        .filter_map(|w| {
            let k = w.as_cycle()?;
            g.is_induced(&k)
                .then(|| g.with_outer(w.darts()[0]).unwrap())
        })
        .collect()
}

/// All valid pairs on the rooted graph `g`.
pub fn valid_pairs(g: &RotationGraph) -> Vec<ValidPair> {
    let c = g.outer_face().unwrap().as_cycle().unwrap();
    valid_boundaries(c.len())
        .into_iter()
        .filter_map(|cols| ValidPair::from_lookup(g.clone(), |v| cols[c.position(v).unwrap()]).ok())
        .collect()
}

pub fn is_two_connected(g: &RotationGraph) -> bool {
    g.n() >= 3 && g.is_connected() && trifree::reductions::articulation_points(g).is_empty()
}

fn polar(r: f64, i: usize, k: usize) -> (f64, f64) {
    let a = 2.0 * std::f64::consts::PI * i as f64 / k as f64;
    (r * a.cos(), r * a.sin())
}

/// `rings` concentric `k`-cycles joined by spokes, outermost ring `0..k`.
/// Every ring strictly between the outermost and innermost separates.
pub fn web(k: usize, rings: usize) -> RotationGraph {
    let mut coords = Vec::new();
    let mut edges = Vec::new();
    for ring in 0..rings {
        coords.extend((0..k).map(|i| polar((rings - ring) as f64, i, k)));
        for i in 0..k {
            edges.push((ring * k + i, ring * k + (i + 1) % k));
            if ring + 1 < rings {
                edges.push((ring * k + i, (ring + 1) * k + i));
            }
        }
    }
    trifree::planar::from_drawing(&coords, &edges).unwrap()
}

/// A `k`-cycle of radius 20 with a flattened hexagonal prism inside that
/// shares only vertex 0 with it.
pub fn prism_on_cycle(k: usize) -> RotationGraph {
    let ring = |r: f64, i: usize| {
        let a = std::f64::consts::PI * i as f64 / 3.0;
        (18.0 + r * a.cos(), 0.5 * r * a.sin())
    };
    let mut coords: Vec<(f64, f64)> = (0..k).map(|i| polar(20.0, i, k)).collect();
    coords.extend((1..6).map(|i| ring(2.0, i)));
    coords.extend((0..6).map(|i| ring(1.0, i)));
    let outer = [0, k, k + 1, k + 2, k + 3, k + 4];
    let mut edges: Vec<(usize, usize)> = (0..k).map(|i| (i, (i + 1) % k)).collect();
    for i in 0..6 {
        edges.push((outer[i], outer[(i + 1) % 6]));
        edges.push((k + 5 + i, k + 5 + (i + 1) % 6));
        edges.push((outer[i], k + 5 + i));
    }
    trifree::planar::from_drawing(&coords, &edges).unwrap()
}

/// A `k`-cycle with a disjoint hexagonal prism floating inside it.
pub fn prism_in_cycle(k: usize) -> RotationGraph {
    let ring = generate(GenSpec::Cycle(k)).unwrap();
    let prism = generate(GenSpec::Prism(6)).unwrap();
    let mut rot: Vec<Vec<usize>> = ring.rotations().to_vec();
    rot.extend(
        prism
            .rotations()
            .iter()
            .map(|r| r.iter().map(|&u| u + k).collect()),
    );
    RotationGraph::build(rot, ring.outer_dart()).unwrap()
}

/// Adds random edges across faces until no two vertices on a common face
/// can be joined without a triangle or a parallel edge.
pub fn densify(g: &RotationGraph, seed: u64) -> RotationGraph {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut g = g.clone();
    loop {
        let faces = g.faces();
        let mut options = Vec::new();
        for (fi, w) in faces.walks().iter().enumerate() {
            let vs: Vec<usize> = w.vertices().collect();
            for i in 0..vs.len() {
                for j in i + 1..vs.len() {
                    let (u, v) = (vs[i], vs[j]);
                    if u != v
                        && !g.has_edge(u, v)
                        && !g.rotation(u).iter().any(|&x| g.has_edge(x, v))
                    {
                        options.push((fi, u, v));
                    }
                }
            }
        }
        if options.is_empty() {
            return g;
        }
        let (fi, u, v) = options[rng.gen_range(0..options.len())];
        g = g
            .add_edge_in_face(u, v, faces.get(fi))
            .expect("both ends lie on the face");
    }
}
