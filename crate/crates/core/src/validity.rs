//! Boundary colourings, valid pairs and the order used for induction.
//!
//! A proper colouring of a cycle of length at most 5 is always valid. A
//! proper colouring of a 6-cycle is valid when at least one of the three
//! opposite pairs `(0,3)`, `(1,4)`, `(2,5)` gets two different colours.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::planar::{CycleRef, RotationGraph, Vertex};

/// A colour in `{1, 2, 3}`.
pub type Color = u8;

pub const COLORS: [Color; 3] = [1, 2, 3];

/// Total map from vertices to colours.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coloring {
    colors: Vec<Color>,
}

impl Coloring {
    pub fn new(colors: Vec<Color>) -> Result<Self, ValidityError> {
        if let Some((v, &c)) = colors.iter().enumerate().find(|(_, c)| !COLORS.contains(c)) {
            return Err(ValidityError::BadColor(v, c));
        }
        Ok(Coloring { colors })
    }

    pub fn get(&self, v: Vertex) -> Color {
        self.colors[v]
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn as_slice(&self) -> &[Color] {
        &self.colors
    }

    /// First edge with equal colours at both ends.
    pub fn first_conflict(&self, g: &RotationGraph) -> Option<(Vertex, Vertex)> {
        g.edges()
            .into_iter()
            .find(|&(u, v)| self.colors[u] == self.colors[v])
    }

    pub fn is_proper(&self, g: &RotationGraph) -> bool {
        self.colors.len() == g.n() && self.first_conflict(g).is_none()
    }

    /// Renames colours so that `v` gets `target`; the other two colours are
    /// swapped accordingly (a transposition, or the identity).
    pub fn permute_to(&mut self, v: Vertex, target: Color) {
        let current = self.colors[v];
        if current == target {
            return;
        }
        for c in self.colors.iter_mut() {
            if *c == current {
                *c = target;
            } else if *c == target {
                *c = current;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidityError {
    #[error("vertex {0} has colour {1}, expected 1, 2 or 3")]
    BadColor(Vertex, Color),
    #[error("colouring is not proper on the cycle: positions {0} and {1} share a colour")]
    NotProper(usize, usize),
    #[error("cycle has {0} vertices but {1} colours were given")]
    LengthMismatch(usize, usize),
}

/// Colours of the outer cycle, listed in cycle order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryColoring {
    cycle: CycleRef,
    colors: Vec<Color>,
}

impl BoundaryColoring {
    pub fn new(cycle: CycleRef, colors: Vec<Color>) -> Result<Self, ValidityError> {
        if cycle.len() != colors.len() {
            return Err(ValidityError::LengthMismatch(cycle.len(), colors.len()));
        }
        for (i, &c) in colors.iter().enumerate() {
            if !COLORS.contains(&c) {
                return Err(ValidityError::BadColor(cycle.vertices()[i], c));
            }
        }
        check_proper(&colors)?;
        Ok(BoundaryColoring { cycle, colors })
    }

    pub fn cycle(&self) -> &CycleRef {
        &self.cycle
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn color_of(&self, v: Vertex) -> Option<Color> {
        self.cycle.position(v).map(|i| self.colors[i])
    }

    pub fn is_valid(&self) -> bool {
        valid_cycle_colors(&self.colors)
    }

    /// `(vertex, colour)` pairs in cycle order.
    pub fn iter(&self) -> impl Iterator<Item = (Vertex, Color)> + '_ {
        self.cycle
            .vertices()
            .iter()
            .copied()
            .zip(self.colors.iter().copied())
    }
}

fn check_proper(colors: &[Color]) -> Result<(), ValidityError> {
    let n = colors.len();
    for i in 0..n {
        let j = (i + 1) % n;
        if n > 1 && colors[i] == colors[j] {
            return Err(ValidityError::NotProper(i, j));
        }
    }
    Ok(())
}

fn valid_cycle_colors(colors: &[Color]) -> bool {
    match colors.len() {
        0..=5 => true,
        6 => (0..3).any(|i| colors[i] != colors[i + 3]),
        _ => false,
    }
}

/// Validity of a colour sequence around a cycle. Errors if it is not proper.
pub fn is_valid_boundary(colors: &[Color]) -> Result<bool, ValidityError> {
    check_proper(colors)?;
    Ok(valid_cycle_colors(colors))
}

/// Why a graph and boundary do not form a valid pair.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvalidPair {
    #[error("graph contains the triangle {0:?}")]
    Triangle([Vertex; 3]),
    #[error("graph has no outer face")]
    NoOuterFace,
    #[error("outer face is not bounded by a cycle")]
    OuterNotCycle,
    #[error("outer cycle has length {0}, expected 4, 5 or 6")]
    OuterLength(usize),
    #[error("outer cycle is not induced")]
    NotInduced,
    #[error("boundary colouring does not match the outer cycle")]
    BoundaryMismatch,
    #[error("boundary coloring not valid")]
    BoundaryNotValid,
}

/// Checks every valid-pair condition and reports the first that fails.
pub fn is_valid_pair(g: &RotationGraph, b: &BoundaryColoring) -> Result<(), InvalidPair> {
    if let Some(t) = g.find_triangle() {
        return Err(InvalidPair::Triangle(t));
    }
    let outer = g.outer_face().ok_or(InvalidPair::NoOuterFace)?;
    let cycle = outer.as_cycle().ok_or(InvalidPair::OuterNotCycle)?;
    if !(4..=6).contains(&cycle.len()) {
        return Err(InvalidPair::OuterLength(cycle.len()));
    }
    if !g.is_induced(&cycle) {
        return Err(InvalidPair::NotInduced);
    }
    if cycle.len() != b.cycle().len() || cycle.vertices().iter().any(|&v| b.color_of(v).is_none()) {
        return Err(InvalidPair::BoundaryMismatch);
    }
    let ordered: Vec<Color> = cycle
        .vertices()
        .iter()
        .map(|&v| b.color_of(v).unwrap())
        .collect();
    match is_valid_boundary(&ordered) {
        Ok(true) => Ok(()),
        Ok(false) => Err(InvalidPair::BoundaryNotValid),
        Err(_) => Err(InvalidPair::BoundaryMismatch),
    }
}

/// A plane triangle-free graph with an induced outer cycle of length at
/// most 6 and a valid colouring of it. The boundary is stored in outer-face
/// walk order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidPair {
    graph: RotationGraph,
    boundary: BoundaryColoring,
}

impl ValidPair {
    pub fn new(graph: RotationGraph, boundary: BoundaryColoring) -> Result<Self, InvalidPair> {
        is_valid_pair(&graph, &boundary)?;
        let cycle = graph.outer_face().unwrap().as_cycle().unwrap();
        let colors = cycle
            .vertices()
            .iter()
            .map(|&v| boundary.color_of(v).unwrap())
            .collect();
        let boundary = BoundaryColoring::new(cycle, colors).expect("checked proper above");
        Ok(ValidPair { graph, boundary })
    }

    /// Builds the pair from a colour lookup on the outer cycle.
    pub fn from_lookup(
        graph: RotationGraph,
        color: impl Fn(Vertex) -> Color,
    ) -> Result<Self, InvalidPair> {
        let outer = graph.outer_face().ok_or(InvalidPair::NoOuterFace)?;
        let cycle = outer.as_cycle().ok_or(InvalidPair::OuterNotCycle)?;
        let colors: Vec<Color> = cycle.vertices().iter().map(|&v| color(v)).collect();
        let b = BoundaryColoring::new(cycle, colors).map_err(|_| InvalidPair::BoundaryMismatch)?;
        ValidPair::new(graph, b)
    }

    pub fn graph(&self) -> &RotationGraph {
        &self.graph
    }

    pub fn boundary(&self) -> &BoundaryColoring {
        &self.boundary
    }

    pub fn outer_cycle(&self) -> &CycleRef {
        self.boundary.cycle()
    }

    pub fn size(&self) -> (usize, usize) {
        self.graph.size()
    }

    /// Membership mask of the outer cycle.
    pub fn on_outer(&self) -> Vec<bool> {
        let mut mask = vec![false; self.graph.n()];
        for &v in self.outer_cycle().vertices() {
            mask[v] = true;
        }
        mask
    }

    /// True when the graph is exactly its outer cycle.
    pub fn is_bare_cycle(&self) -> bool {
        let k = self.outer_cycle().len();
        self.graph.n() == k && self.graph.num_edges() == k
    }

    /// Boundary colours as a partial colouring of the whole graph.
    pub fn precoloring(&self) -> Vec<Option<Color>> {
        let mut partial = vec![None; self.graph.n()];
        for (v, c) in self.boundary.iter() {
            partial[v] = Some(c);
        }
        partial
    }

    /// Whether `c` is proper and agrees with the boundary.
    pub fn accepts(&self, c: &Coloring) -> bool {
        c.is_proper(&self.graph) && self.boundary.iter().all(|(v, col)| c.get(v) == col)
    }
}

/// Strict order on pair sizes `(|V|, |E|)`: fewer vertices, or as many
/// vertices and more edges.
pub fn pair_less(a: (usize, usize), b: (usize, usize)) -> bool {
    a.0 < b.0 || (a.0 == b.0 && a.1 > b.1)
}

/// The same order as a total comparison, smallest first.
pub fn pair_cmp(a: (usize, usize), b: (usize, usize)) -> Ordering {
    a.0.cmp(&b.0).then(b.1.cmp(&a.1))
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, c) in self.colors.iter().enumerate() {
            writeln!(f, "c {v} {c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::Dart;

    fn cycle_graph(n: usize) -> RotationGraph {
        let rot = (0..n).map(|i| vec![(i + n - 1) % n, (i + 1) % n]).collect();
        RotationGraph::build(rot, Some(Dart::new(0, 1))).unwrap()
    }

    #[test]
    fn short_cycles_always_valid() {
        assert_eq!(is_valid_boundary(&[1, 2, 1, 2, 3]), Ok(true));
        assert_eq!(is_valid_boundary(&[1, 2, 1, 2]), Ok(true));
    }

    #[test]
    fn hexagon_validity() {
        assert_eq!(is_valid_boundary(&[1, 2, 3, 1, 2, 3]), Ok(false));
        assert_eq!(is_valid_boundary(&[1, 2, 1, 2, 1, 3]), Ok(true));
        assert_eq!(
            is_valid_boundary(&[1, 1, 2, 3, 1, 2]),
            Err(ValidityError::NotProper(0, 1))
        );
        assert_eq!(
            is_valid_boundary(&[1, 2, 3, 1, 2, 1]),
            Err(ValidityError::NotProper(5, 0))
        );
    }

    #[test]
    fn pair_order() {
        assert!(pair_less((5, 5), (6, 7)));
        assert!(pair_less((6, 8), (6, 7)));
        assert!(!pair_less((6, 7), (6, 7)));
        assert!(!pair_less((6, 7), (6, 8)));
        assert_eq!(pair_cmp((6, 8), (6, 7)), Ordering::Less);
    }

    #[test]
    fn hexagon_pair() {
        let g = cycle_graph(6);
        let cyc = g.outer_face().unwrap().as_cycle().unwrap();
        let b = BoundaryColoring::new(cyc.clone(), vec![1, 2, 1, 2, 1, 3]).unwrap();
        let p = ValidPair::new(g.clone(), b).unwrap();
        assert!(p.is_bare_cycle());
        let bad = BoundaryColoring::new(cyc, vec![1, 2, 3, 1, 2, 3]).unwrap();
        assert_eq!(is_valid_pair(&g, &bad), Err(InvalidPair::BoundaryNotValid));
    }

    #[test]
    fn chorded_outer_cycle_is_rejected() {
        // Hexagon with chord 0-3 drawn inside; outer face is still the hexagon.
        let rot = vec![
            vec![5, 3, 1],
            vec![0, 2],
            vec![1, 3],
            vec![2, 0, 4],
            vec![3, 5],
            vec![4, 0],
        ];
        let g = RotationGraph::build(rot, Some(Dart::new(1, 0))).unwrap();
        let outer = g.outer_face().unwrap();
        assert_eq!(outer.len(), 6, "{outer:?}");
        let cyc = outer.as_cycle().unwrap();
        let b = BoundaryColoring::new(cyc, vec![1, 2, 1, 2, 1, 3]).unwrap();
        assert_eq!(is_valid_pair(&g, &b), Err(InvalidPair::NotInduced));
    }

    #[test]
    fn permute_colors() {
        let mut c = Coloring::new(vec![1, 2, 3, 1]).unwrap();
        c.permute_to(0, 3);
        assert_eq!(c.as_slice(), &[3, 2, 1, 3]);
    }
}
