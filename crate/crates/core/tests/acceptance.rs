//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p trifree --test acceptance -- --nocapture` to see
//! the report.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use trifree::discharging::{initial_charges, redistribute};
use trifree::format::parse_coloring;
use trifree::oracle::brute_force_3color;
use trifree::planar::{CycleRef, Dart, GraphError, RotationGraph, Vertex};
use trifree::reductions::{find_reduction, Reduction, ReductionError, ReductionKind};
use trifree::solver::{extend, three_color, SolveError, SolverConfig};
use trifree::validity::{is_valid_boundary, Color, ValidPair};

struct Outcome {
    id: usize,
    name: &'static str,
    pass: bool,
    detail: String,
}

impl Outcome {
    fn line(&self) -> String {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        format!("[{verdict}] {}. {}: {}", self.id, self.name, self.detail)
    }
}

fn secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}

fn outer_cycle(g: &RotationGraph) -> CycleRef {
    g.outer_face().unwrap().as_cycle().unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let corpus = common::corpus(8..=16, 200);
    let cfg = SolverConfig::default();
    let failures: Vec<String> = corpus
        .par_iter()
        .filter_map(|(spec, g)| {
            let (c, _) = match three_color(g, &cfg) {
                Ok(r) => r,
                Err(e) => return Some(format!("{spec}: {e}")),
            };
            // Verify through the colouring file format, as the CLI does.
            let back = parse_coloring(&c.to_string(), g.n()).ok()?;
            back.first_conflict(g)
                .map(|(u, v)| format!("{spec}: edge {u} {v}"))
        })
        .collect();
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed < Duration::from_secs(60);
    Outcome {
        id: 1,
        name: "three_color on the full corpus",
        pass,
        detail: format!(
            "{}/{} graphs coloured and verified in {} (limit 60s){}",
            corpus.len() - failures.len(),
            corpus.len(),
            secs(elapsed),
            failures
                .first()
                .map(|f| format!("; first failure {f}"))
                .unwrap_or_default()
        ),
    }
}

#[derive(Default)]
struct ExtendStats {
    pairs: usize,
    agree: usize,
    proof_order: usize,
    no_reduction: usize,
    failures: Vec<String>,
}

fn run_exhaustive_extension() -> (ExtendStats, Duration) {
    let start = Instant::now();
    let corpus: Vec<_> = common::corpus(8..=14, 200)
        .into_iter()
        .filter(|(_, g)| g.n() <= 14 && common::is_two_connected(g))
        .collect();
    let cfg = SolverConfig::reductions_only();
    let per_graph: Vec<ExtendStats> = corpus
        .par_iter()
        .map(|(spec, g)| {
            let mut s = ExtendStats::default();
            for root in common::induced_face_roots(g) {
                for p in common::valid_pairs(&root) {
                    s.pairs += 1;
                    let oracle = brute_force_3color(p.graph(), Some(&p.precoloring()));
                    match extend(&p, &cfg) {
                        Ok((c, _)) if p.accepts(&c) && oracle.is_some() => s.agree += 1,
                        Ok(_) => s
                            .failures
                            .push(format!("{spec}: oracle or check disagrees")),
                        Err(e) => {
                            match &e {
                                SolveError::Reduction(ReductionError::ProofOrderViolation {
                                    ..
                                }) => s.proof_order += 1,
                                SolveError::NoReductionFound { .. } => s.no_reduction += 1,
                                _ => {}
                            }
                            s.failures.push(format!(
                                "{spec}: {}",
                                e.to_string().lines().next().unwrap_or("")
                            ));
                        }
                    }
                }
            }
            s
        })
        .collect();
    let mut total = ExtendStats::default();
    for s in per_graph {
        total.pairs += s.pairs;
        total.agree += s.agree;
        total.proof_order += s.proof_order;
        total.no_reduction += s.no_reduction;
        total.failures.extend(s.failures);
    }
    (total, start.elapsed())
}

fn criterion_2(stats: &ExtendStats, elapsed: Duration) -> Outcome {
    let pass = stats.pairs > 0 && stats.agree == stats.pairs && elapsed < Duration::from_secs(600);
    Outcome {
        id: 2,
        name: "extend without brute-force base on every valid boundary",
        pass,
        detail: format!(
            "{}/{} valid pairs extended and oracle-confirmed in {} (limit 600s){}",
            stats.agree,
            stats.pairs,
            secs(elapsed),
            stats
                .failures
                .first()
                .map(|f| format!("; first failure {f}"))
                .unwrap_or_default()
        ),
    }
}

fn criterion_3() -> Outcome {
    let corpus = common::corpus(8..=16, 200);
    let mut bad = Vec::new();
    for (spec, g) in &corpus {
        let init = initial_charges(g).total();
        let fin = redistribute(g, &outer_cycle(g)).total();
        if init != -24 || fin != init {
            bad.push(format!("{spec}: initial {init}/3, final {fin}/3"));
        }
    }
    Outcome {
        id: 3,
        name: "discharging totals",
        pass: bad.is_empty(),
        detail: format!(
            "{}/{} graphs with initial total -24/3 and exact conservation{}",
            corpus.len() - bad.len(),
            corpus.len(),
            bad.first()
                .map(|f| format!("; first failure {f}"))
                .unwrap_or_default()
        ),
    }
}

/// Oracle-colours the children of `r`, lifts, and returns the children for
/// further descent.
fn lift_with_oracle(p: &ValidPair, r: &Reduction) -> Result<Vec<ValidPair>, String> {
    let oracle = |c: &ValidPair| {
        brute_force_3color(c.graph(), Some(&c.precoloring())).ok_or("oracle failed on a child")
    };
    let mut kids = Vec::new();
    let mut colourings = Vec::new();
    if let Some(c) = r.first_child() {
        colourings.push(oracle(c)?);
        kids.push(c.clone());
    }
    if let Some(first) = colourings.first().cloned() {
        if let Some(c) = r.second_child(&first).map_err(|e| e.to_string())? {
            colourings.push(oracle(&c)?);
            kids.push(c);
        }
    }
    let lifted = r.lift(p, &colourings).map_err(|e| e.to_string())?;
    if !p.accepts(&lifted) {
        return Err("lifted colouring rejected".into());
    }
    Ok(kids)
}

fn criterion_4() -> Outcome {
    let mut sources: Vec<RotationGraph> = common::corpus(8..=12, 20)
        .into_iter()
        .map(|(_, g)| g)
        .collect();
    for k in 4..=6 {
        for rings in 3..=4 {
            sources.push(common::web(k, rings));
        }
        sources.push(common::prism_on_cycle(k));
        sources.push(common::prism_in_cycle(k));
    }
    let results: Vec<(BTreeMap<ReductionKind, usize>, Vec<String>)> = sources
        .par_iter()
        .map(|g| {
            let mut counts = BTreeMap::new();
            let mut errors = Vec::new();
            let mut stack: Vec<ValidPair> = common::induced_face_roots(g)
                .iter()
                .flat_map(common::valid_pairs)
                .collect();
            while let Some(p) = stack.pop() {
                match find_reduction(&p) {
                    Ok(Some(r)) => {
                        *counts.entry(r.kind()).or_insert(0) += 1;
                        match lift_with_oracle(&p, &r) {
                            Ok(kids) => stack.extend(kids),
                            Err(e) => errors.push(format!("{}: {e}", r.kind())),
                        }
                    }
                    Ok(None) => {}
                    Err(e) => errors.push(e.to_string()),
                }
            }
            (counts, errors)
        })
        .collect();
    let mut counts: BTreeMap<ReductionKind, usize> =
        ReductionKind::ALL.iter().map(|&k| (k, 0)).collect();
    let mut errors = Vec::new();
    for (c, e) in results {
        for (k, n) in c {
            *counts.get_mut(&k).unwrap() += n;
        }
        errors.extend(e);
    }
    let enough = counts.values().all(|&n| n >= 100);
    let summary: Vec<String> = counts.iter().map(|(k, n)| format!("{k}={n}")).collect();
    Outcome {
        id: 4,
        name: "lift soundness per reduction kind",
        pass: enough && errors.is_empty(),
        detail: format!(
            "instances {} (each needs >= 100), lift failures {}{}",
            summary.join(" "),
            errors.len(),
            errors
                .first()
                .map(|f| format!("; first failure {f}"))
                .unwrap_or_default()
        ),
    }
}

fn criterion_5(stats: &ExtendStats) -> Outcome {
    Outcome {
        id: 5,
        name: "proof-order safety",
        pass: stats.proof_order == 0 && stats.no_reduction == 0 && stats.pairs > 0,
        detail: format!(
            "ProofOrderViolation {} and NoReductionFound {} over {} pairs",
            stats.proof_order, stats.no_reduction, stats.pairs
        ),
    }
}

fn criterion_6() -> Outcome {
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for k in [5usize, 6] {
        for code in 0..3usize.pow(k as u32) {
            let mut x = code;
            let t: Vec<Color> = (0..k)
                .map(|_| {
                    let c = (x % 3) as Color + 1;
                    x /= 3;
                    c
                })
                .collect();
            let proper = (0..k).all(|i| t[i] != t[(i + 1) % k]);
            let opposite_differ = k < 6 || (0..k).any(|i| t[i] != t[(i + 3) % k]);
            let expected = proper && opposite_differ;
            let got = is_valid_boundary(&t) == Ok(true);
            checked += 1;
            if got != expected {
                mismatches.push(format!("{t:?}"));
            }
        }
    }
    Outcome {
        id: 6,
        name: "validity characterisation",
        pass: mismatches.is_empty() && checked == 243 + 729,
        detail: format!(
            "{checked} tuples checked, {} mismatches{}",
            mismatches.len(),
            mismatches
                .first()
                .map(|f| format!("; first {f}"))
                .unwrap_or_default()
        ),
    }
}

/// Rotation to the smallest vertex, direction with the smaller second
/// vertex.
fn canonical_cycle(seq: &[Vertex]) -> Vec<Vertex> {
    let n = seq.len();
    let i = (0..n).min_by_key(|&i| seq[i]).unwrap();
    let fwd: Vec<Vertex> = (0..n).map(|j| seq[(i + j) % n]).collect();
    let bwd: Vec<Vertex> = (0..n).map(|j| seq[(i + n - j) % n]).collect();
    fwd.min(bwd)
}

fn brute_cycles(g: &RotationGraph, max_len: usize) -> BTreeSet<Vec<Vertex>> {
    fn go(
        g: &RotationGraph,
        max_len: usize,
        path: &mut Vec<Vertex>,
        out: &mut BTreeSet<Vec<Vertex>>,
    ) {
        let last = *path.last().unwrap();
        if path.len() >= 3 && g.has_edge(last, path[0]) {
            out.insert(canonical_cycle(path));
        }
        if path.len() == max_len {
            return;
        }
        for u in 0..g.n() {
            if g.has_edge(last, u) && !path.contains(&u) {
                path.push(u);
                go(g, max_len, path, out);
                path.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    for s in 0..g.n() {
        go(g, max_len, &mut vec![s], &mut out);
    }
    out
}

/// Face orbits by direct simulation of the successor rule, each rotated to
/// start at its smallest dart.
fn brute_faces(g: &RotationGraph) -> BTreeSet<Vec<(Vertex, Vertex)>> {
    let mut seen = BTreeSet::new();
    let mut faces = BTreeSet::new();
    for u in 0..g.n() {
        for &v in g.rotation(u) {
            if seen.contains(&(u, v)) {
                continue;
            }
            let mut walk = Vec::new();
            let (mut a, mut b) = (u, v);
            while seen.insert((a, b)) {
                walk.push((a, b));
                let r = g.rotation(b);
                let i = r.iter().position(|&x| x == a).unwrap();
                (a, b) = (b, r[(i + 1) % r.len()]);
            }
            let k = (0..walk.len()).min_by_key(|&i| walk[i]).unwrap();
            walk.rotate_left(k);
            faces.insert(walk);
        }
    }
    faces
}

fn criterion_7() -> Outcome {
    let corpus: Vec<_> = common::corpus(8..=12, 200)
        .into_iter()
        .filter(|(_, g)| g.n() <= 12)
        .collect();
    let bad: Vec<String> = corpus
        .par_iter()
        .filter_map(|(spec, g)| {
            let ours: BTreeSet<Vec<Vertex>> = g
                .find_short_cycles(6)
                .iter()
                .map(|c| canonical_cycle(c.vertices()))
                .collect();
            if ours != brute_cycles(g, 6) {
                return Some(format!("{spec}: short cycles differ"));
            }
            let traced: BTreeSet<Vec<(Vertex, Vertex)>> = g
                .faces()
                .walks()
                .iter()
                .map(|w| {
                    let mut d: Vec<(Vertex, Vertex)> =
                        w.darts().iter().map(|d| (d.tail, d.head)).collect();
                    let k = (0..d.len()).min_by_key(|&i| d[i]).unwrap();
                    d.rotate_left(k);
                    d
                })
                .collect();
            let brute = brute_faces(g);
            let euler = g.n() as i64 - g.num_edges() as i64 + brute.len() as i64;
            if traced != brute || euler != 2 {
                return Some(format!("{spec}: faces differ or V - E + F = {euler}"));
            }
            let facial: BTreeSet<Vec<Vertex>> = brute
                .iter()
                .map(|f| f.iter().map(|d| d.0).collect::<Vec<_>>())
                .filter(|vs| vs.iter().collect::<BTreeSet<_>>().len() == vs.len())
                .map(|vs| canonical_cycle(&vs))
                .collect();
            for c in g.find_short_cycles(6) {
                if g.is_facial(&c) != facial.contains(&canonical_cycle(c.vertices())) {
                    return Some(format!("{spec}: is_facial wrong on {c}"));
                }
            }
            None
        })
        .collect();
    Outcome {
        id: 7,
        name: "structural oracles",
        pass: bad.is_empty(),
        detail: format!(
            "{}/{} graphs with n <= 12 agree on cycles, faces and facial cycles{}",
            corpus.len() - bad.len(),
            corpus.len(),
            bad.first()
                .map(|f| format!("; first failure {f}"))
                .unwrap_or_default()
        ),
    }
}

fn groetzsch_edges() -> Vec<(Vertex, Vertex)> {
    let mut e = Vec::new();
    for i in 0..5 {
        e.push((i, (i + 1) % 5));
        e.push((5 + i, (i + 4) % 5));
        e.push((5 + i, (i + 1) % 5));
        e.push((10, 5 + i));
    }
    e
}

fn k5_edges() -> Vec<(Vertex, Vertex)> {
    (0..5)
        .flat_map(|i| (i + 1..5).map(move |j| (i, j)))
        .collect()
}

/// Builds `edges` with neighbour lists shuffled by `rng` (or ascending).
fn with_rotation(
    n: usize,
    edges: &[(Vertex, Vertex)],
    rng: Option<&mut ChaCha8Rng>,
) -> Result<RotationGraph, GraphError> {
    let mut rot = vec![Vec::new(); n];
    for &(u, v) in edges {
        rot[u].push(v);
        rot[v].push(u);
    }
    for r in rot.iter_mut() {
        r.sort_unstable();
    }
    if let Some(rng) = rng {
        for r in rot.iter_mut() {
            r.shuffle(rng);
        }
    }
    let d = Dart::new(edges[0].0, edges[0].1);
    RotationGraph::build(rot, Some(d))
}

fn criterion_8() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for (name, n, edges) in [("Groetzsch", 11, groetzsch_edges()), ("K5", 5, k5_edges())] {
        let mut rejected = 0;
        let tries = 200;
        for t in 0..tries {
            let r = with_rotation(n, &edges, if t == 0 { None } else { Some(&mut rng) });
            if matches!(r, Err(GraphError::NotSphere { .. })) {
                rejected += 1;
            }
        }
        pass &= rejected == tries;
        notes.push(format!("{name} NotSphere {rejected}/{tries} rotations"));
    }
    // A pentagon with one chord closing a triangle 0-1-2.
    let coords = [
        (0.0, 10.0),
        (9.5, 3.1),
        (5.9, -8.1),
        (-5.9, -8.1),
        (-9.5, 3.1),
    ];
    let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)];
    let g = trifree::planar::from_drawing(&coords, &edges).unwrap();
    match three_color(&g, &SolverConfig::default()) {
        Err(SolveError::TriangleFound(t)) => {
            let witness =
                g.has_edge(t[0], t[1]) && g.has_edge(t[1], t[2]) && g.has_edge(t[2], t[0]);
            pass &= witness;
            notes.push(format!(
                "triangle witness {t:?} {}",
                if witness { "checked" } else { "NOT a triangle" }
            ));
        }
        other => {
            pass = false;
            notes.push(format!(
                "triangle input not rejected: {:?}",
                other.map(|r| r.0)
            ));
        }
    }
    Outcome {
        id: 8,
        name: "negative controls",
        pass,
        detail: notes.join(", "),
    }
}

#[test]
fn acceptance_suite() {
    let (stats, ext_time) = run_exhaustive_extension();
    let outcomes = vec![
        criterion_1(),
        criterion_2(&stats, ext_time),
        criterion_3(),
        criterion_4(),
        criterion_5(&stats),
        criterion_6(),
        criterion_7(),
        criterion_8(),
    ];
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed: Vec<usize> = outcomes.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
