//! Exhaustive 3-colouring by backtracking, used as ground truth.

use crate::planar::{RotationGraph, Vertex};
use crate::validity::{Color, Coloring, COLORS};

struct Search<'a> {
    g: &'a RotationGraph,
    color: Vec<u8>,
    // banned[v][c] counts coloured neighbours of v using colour c + 1.
    banned: Vec<[u32; 3]>,
    order: Vec<Vertex>,
}

impl<'a> Search<'a> {
    fn new(g: &'a RotationGraph, partial: Option<&[Option<Color>]>) -> Option<Self> {
        let n = g.n();
        let mut s = Search {
            g,
            color: vec![0; n],
            banned: vec![[0; 3]; n],
            order: Vec::new(),
        };
        for v in 0..n {
            match partial.and_then(|p| p.get(v).copied().flatten()) {
                Some(c) => {
                    if !COLORS.contains(&c) || s.banned[v][(c - 1) as usize] > 0 {
                        return None;
                    }
                    s.assign(v, c);
                }
                None => s.order.push(v),
            }
        }
        Some(s)
    }

    fn assign(&mut self, v: Vertex, c: Color) {
        self.color[v] = c;
        for &u in self.g.rotation(v) {
            self.banned[u][(c - 1) as usize] += 1;
        }
    }

    fn unassign(&mut self, v: Vertex) {
        let c = self.color[v];
        self.color[v] = 0;
        for &u in self.g.rotation(v) {
            self.banned[u][(c - 1) as usize] -= 1;
        }
    }

    /// No uncoloured neighbour of `v` is left without a colour.
    fn neighbours_alive(&self, v: Vertex) -> bool {
        self.g
            .rotation(v)
            .iter()
            .all(|&u| self.color[u] != 0 || self.banned[u].contains(&0))
    }

    fn first(&mut self, i: usize) -> bool {
        if i == self.order.len() {
            return true;
        }
        let v = self.order[i];
        for c in COLORS {
            if self.banned[v][(c - 1) as usize] > 0 {
                continue;
            }
            self.assign(v, c);
            if self.neighbours_alive(v) && self.first(i + 1) {
                return true;
            }
            self.unassign(v);
        }
        false
    }

    fn count(&mut self, i: usize) -> u64 {
        if i == self.order.len() {
            return 1;
        }
        let v = self.order[i];
        let mut total = 0;
        for c in COLORS {
            if self.banned[v][(c - 1) as usize] > 0 {
                continue;
            }
            self.assign(v, c);
            if self.neighbours_alive(v) {
                total += self.count(i + 1);
            }
            self.unassign(v);
        }
        total
    }
}

/// A proper 3-colouring extending `partial`, or `None`. Vertices are tried
/// in id order and colours from 1 upwards, so the answer is the
/// lexicographically first extension.
pub fn brute_force_3color(
    g: &RotationGraph,
    partial: Option<&[Option<Color>]>,
) -> Option<Coloring> {
    let mut s = Search::new(g, partial)?;
    if !s.first(0) {
        return None;
    }
    Some(Coloring::new(s.color).expect("search only assigns 1..=3"))
}

/// Number of proper 3-colourings extending `partial`.
pub fn count_extensions(g: &RotationGraph, partial: Option<&[Option<Color>]>) -> u64 {
    match Search::new(g, partial) {
        Some(mut s) => s.count(0),
        None => 0,
    }
}
