//! Charges on vertices and faces, kept exactly in thirds.
//!
//! Every vertex starts with `deg - 4` and every face with `len - 4`. Each
//! face other than the outer one then sends `1/3` to every incident vertex
//! of degree 2, and to every incident vertex of degree 3 off the outer
//! cycle. Each outer-cycle vertex sends `1/3` to each 5-face tied to it.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::planar::{CycleRef, Faces, RotationGraph, Vertex};

/// Charges multiplied by 3. Faces are indexed as in [`RotationGraph::faces`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChargeLedger {
    pub vertex: Vec<i64>,
    pub face: Vec<i64>,
}

impl ChargeLedger {
    pub fn total(&self) -> i64 {
        self.vertex.iter().sum::<i64>() + self.face.iter().sum::<i64>()
    }
}

pub fn initial_charges(g: &RotationGraph) -> ChargeLedger {
    initial_with(g, &g.faces())
}

fn initial_with(g: &RotationGraph, faces: &Faces) -> ChargeLedger {
    ChargeLedger {
        vertex: (0..g.n()).map(|v| 3 * (g.degree(v) as i64 - 4)).collect(),
        face: faces
            .walks()
            .iter()
            .map(|w| 3 * (w.len() as i64 - 4))
            .collect(),
    }
}

/// Indices of the 5-faces tied to `z`: faces other than the outer one that
/// avoid `z` and contain a degree-3 neighbour of `z` off the outer cycle.
pub fn tied_faces(g: &RotationGraph, c: &CycleRef, z: Vertex) -> Vec<usize> {
    tied_with(g, &g.faces(), c, z)
}

fn tied_with(g: &RotationGraph, faces: &Faces, c: &CycleRef, z: Vertex) -> Vec<usize> {
    let outer = faces.outer_index();
    faces
        .walks()
        .iter()
        .enumerate()
        .filter(|(i, w)| Some(*i) != outer && w.len() == 5 && !w.contains_vertex(z))
        .filter(|(_, w)| {
            g.rotation(z)
                .iter()
                .any(|&u| !c.contains(u) && g.degree(u) == 3 && w.contains_vertex(u))
        })
        .map(|(i, _)| i)
        .collect()
}

fn receives(g: &RotationGraph, c: &CycleRef, v: Vertex) -> bool {
    let d = g.degree(v);
    d == 2 || (d == 3 && !c.contains(v))
}

/// Final charges after both rules.
pub fn redistribute(g: &RotationGraph, c: &CycleRef) -> ChargeLedger {
    redistribute_with(g, &g.faces(), c)
}

fn redistribute_with(g: &RotationGraph, faces: &Faces, c: &CycleRef) -> ChargeLedger {
    let mut ledger = initial_with(g, faces);
    let outer = faces.outer_index();
    for (i, w) in faces.walks().iter().enumerate() {
        if Some(i) == outer {
            continue;
        }
        let incident: BTreeSet<Vertex> = w.vertices().collect();
        for v in incident.into_iter().filter(|&v| receives(g, c, v)) {
            ledger.face[i] -= 1;
            ledger.vertex[v] += 1;
        }
    }
    for &z in c.vertices() {
        for q in tied_with(g, faces, c, z) {
            ledger.vertex[z] -= 1;
            ledger.face[q] += 1;
        }
    }
    ledger
}

/// Line-oriented report of initial and final charges, notes on every
/// negative element off the outer face, and the total.
pub fn audit(g: &RotationGraph, c: &CycleRef) -> String {
    let faces = g.faces();
    let init = initial_with(g, &faces);
    let fin = redistribute_with(g, &faces, c);
    let outer = faces.outer_index();
    let mut out = String::new();
    for v in 0..g.n() {
        let _ = writeln!(
            out,
            "V {v} init {}/3 final {}/3",
            init.vertex[v], fin.vertex[v]
        );
    }
    for (i, w) in faces.walks().iter().enumerate() {
        let _ = writeln!(
            out,
            "F {i} len {} init {}/3 final {}/3",
            w.len(),
            init.face[i],
            fin.face[i]
        );
    }
    for v in (0..g.n()).filter(|&v| !c.contains(v) && fin.vertex[v] < 0) {
        let hint = if g.degree(v) <= 2 {
            "interior vertex of degree at most 2 (R1)"
        } else {
            "vertex repeated on a face (R3)"
        };
        let _ = writeln!(out, "note V {v} negative: degree {}, {hint}", g.degree(v));
    }
    for (i, w) in faces.walks().iter().enumerate() {
        if Some(i) == outer || fin.face[i] >= 0 {
            continue;
        }
        let senders = init.face[i] - fin.face[i];
        let hint = match w.len() {
            4 => "4-face other than the outer one (R5)",
            5 => "5-face with at least four receiving vertices (R6 or a tie)",
            _ => "face of length at least 6 cannot go negative",
        };
        let _ = writeln!(
            out,
            "note F {i} negative: len {}, net sent {senders}/3, {hint}",
            w.len()
        );
    }
    if let Some(o) = outer {
        let k = c.len() as i64;
        let c_final: i64 = c.vertices().iter().map(|&v| fin.vertex[v]).sum();
        let _ = writeln!(
            out,
            "note outer len {k} final {}/3, cycle vertices final {c_final}/3, lower bound on the total {}/3",
            fin.face[o],
            -10 - 2 * k
        );
    }
    let _ = writeln!(out, "TOTAL {}/3", fin.total());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, GenSpec};

    fn outer_cycle(g: &RotationGraph) -> CycleRef {
        g.outer_face().unwrap().as_cycle().unwrap()
    }

    #[test]
    fn euler_totals() {
        for spec in [
            GenSpec::Dodecahedron,
            GenSpec::Cube,
            GenSpec::Cycle(6),
            GenSpec::Grid(3, 4),
        ] {
            let g = generate(spec).unwrap();
            assert_eq!(initial_charges(&g).total(), -24, "{spec}");
            let c = outer_cycle(&g);
            assert_eq!(redistribute(&g, &c).total(), -24, "{spec}");
        }
    }

    #[test]
    fn dodecahedron_interior_vertices_end_at_zero() {
        let g = generate(GenSpec::Dodecahedron).unwrap();
        let init = initial_charges(&g);
        assert_eq!(init.vertex.iter().sum::<i64>(), -60);
        assert_eq!(init.face.iter().sum::<i64>(), 36);
        let c = outer_cycle(&g);
        let fin = redistribute(&g, &c);
        for v in (0..20).filter(|&v| !c.contains(v)) {
            assert_eq!(fin.vertex[v], 0);
        }
    }

    #[test]
    fn c6_vertices_receive_one_third() {
        let g = generate(GenSpec::Cycle(6)).unwrap();
        let c = outer_cycle(&g);
        let fin = redistribute(&g, &c);
        assert!(fin.vertex.iter().all(|&x| x == -5));
    }

    #[test]
    fn tied_faces_in_dodecahedron() {
        let g = generate(GenSpec::Dodecahedron).unwrap();
        let c = outer_cycle(&g);
        let faces = g.faces();
        for &z in c.vertices() {
            let tied = tied_faces(&g, &c, z);
            // z's interior neighbour lies on three faces; two of them hold z.
            assert_eq!(tied.len(), 1, "z = {z}");
            for q in tied {
                assert!(!faces.get(q).contains_vertex(z));
            }
        }
        let cube = generate(GenSpec::Cube).unwrap();
        let cc = outer_cycle(&cube);
        assert!(cc
            .vertices()
            .iter()
            .all(|&z| tied_faces(&cube, &cc, z).is_empty()));
    }

    #[test]
    fn degree_four_neighbour_is_not_tied() {
        // Hang a pendant vertex off z's interior neighbour so it has degree 4.
        let g = generate(GenSpec::Dodecahedron).unwrap();
        let c = outer_cycle(&g);
        let z = c.vertices()[0];
        let u = *g.rotation(z).iter().find(|&&u| !c.contains(u)).unwrap();
        let mut rot = g.rotations().to_vec();
        rot.push(Vec::new());
        let g = RotationGraph::build(rot, g.outer_dart()).unwrap();
        let w = g.n() - 1;
        let g = g.add_edge_at(u, Some(g.rotation(u)[0]), w, None).unwrap();
        assert_eq!(g.degree(u), 4);
        assert!(tied_faces(&g, &c, z).is_empty());
    }

    #[test]
    fn audit_ends_with_total() {
        let g = generate(GenSpec::Cube).unwrap();
        let report = audit(&g, &outer_cycle(&g));
        assert!(report.ends_with("TOTAL -24/3\n"));
        assert_eq!(report.lines().filter(|l| l.starts_with("V ")).count(), 8);
        assert_eq!(report.lines().filter(|l| l.starts_with("F ")).count(), 6);
    }
}
