//! Plain-text graph and colouring files.
//!
//! ```text
//! pg 1
//! n 4
//! r 0 2 3 1
//! r 1 2 0 2
//! r 2 2 1 3
//! r 3 2 2 0
//! outer 1 0
//! color 0 1
//! ```
//!
//! `r v d u1 .. ud` lists the neighbours of `v` in clockwise order and
//! `outer u v` names a dart on the outer face. `color` lines are optional;
//! when present they must colour exactly the outer cycle. Blank lines and
//! lines starting with `#` are ignored. Colouring files hold `c v col`
//! lines, one per vertex.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::planar::{Dart, GraphError, RotationGraph, Vertex};
use crate::validity::{BoundaryColoring, Color, Coloring, ValidityError, COLORS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("color lines do not match the outer cycle")]
    BoundaryNotOuterCycle,
    #[error(transparent)]
    Boundary(#[from] ValidityError),
}

/// A parse failure with its 1-based line and column (column 0 when the
/// error concerns the file as a whole).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Self {
        ParseError {
            line,
            col,
            kind: ParseErrorKind::Syntax(msg.into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFile {
    pub graph: RotationGraph,
    pub boundary: Option<BoundaryColoring>,
}

type Token<'a> = (usize, &'a str);

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn number(line: usize, tok: Token<'_>) -> Result<usize, ParseError> {
    tok.1.parse().map_err(|_| {
        ParseError::syntax(
            line,
            tok.0,
            format!("expected a non-negative integer, found `{}`", tok.1),
        )
    })
}

fn arity(line: usize, toks: &[Token<'_>], want: usize) -> Result<(), ParseError> {
    if toks.len() == want {
        Ok(())
    } else {
        let col = toks
            .get(want)
            .map_or(toks.last().map_or(1, |t| t.0 + t.1.len()), |t| t.0);
        Err(ParseError::syntax(
            line,
            col,
            format!(
                "`{}` takes {} fields, found {}",
                toks[0].1,
                want - 1,
                toks.len() - 1
            ),
        ))
    }
}

/// Where each `r` line and each neighbour token sits.
struct Positions {
    r_line: Vec<usize>,
    nbr_cols: Vec<Vec<usize>>,
    outer_line: usize,
    n_line: usize,
}

impl Positions {
    fn locate(&self, e: GraphError) -> ParseError {
        let (line, col) = match e {
            GraphError::NotSphere { vertex, .. } => (self.r_line[vertex], 1),
            GraphError::BadOuterDart(_) | GraphError::MissingOuterDart => {
                (self.outer_line.max(self.n_line), 1)
            }
            _ => (0, 0),
        };
        ParseError {
            line,
            col,
            kind: ParseErrorKind::Graph(e),
        }
    }
}

/// Parses a graph file and validates the embedding and any boundary
/// colouring.
pub fn parse(text: &str) -> Result<GraphFile, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));

    let (hl, header) = lines
        .next()
        .ok_or_else(|| ParseError::syntax(1, 1, "empty file, expected `pg 1`"))?;
    let ht = tokens(header);
    if ht.len() != 2 || ht[0].1 != "pg" || ht[1].1 != "1" {
        return Err(ParseError::syntax(hl, 1, "expected header `pg 1`"));
    }
    let (nl, nline) = lines
        .next()
        .ok_or_else(|| ParseError::syntax(hl + 1, 1, "expected `n <count>`"))?;
    let nt = tokens(nline);
    if nt[0].1 != "n" {
        return Err(ParseError::syntax(nl, nt[0].0, "expected `n <count>`"));
    }
    arity(nl, &nt, 2)?;
    let n = number(nl, nt[1])?;

    let mut rot: Vec<Option<Vec<Vertex>>> = vec![None; n];
    let mut pos = Positions {
        r_line: vec![0; n],
        nbr_cols: vec![Vec::new(); n],
        outer_line: 0,
        n_line: nl,
    };
    let mut outer: Option<Dart> = None;
    let mut colors: Vec<(usize, usize, Vertex, Color)> = Vec::new();

    for (ln, line) in lines {
        let toks = tokens(line);
        let vertex = |tok: Token<'_>| -> Result<Vertex, ParseError> {
            let v = number(ln, tok)?;
            if v >= n {
                return Err(ParseError {
                    line: ln,
                    col: tok.0,
                    kind: ParseErrorKind::Graph(GraphError::VertexOutOfRange(v)),
                });
            }
            Ok(v)
        };
        match toks[0].1 {
            "r" => {
                if toks.len() < 3 {
                    return Err(ParseError::syntax(
                        ln,
                        toks[0].0,
                        "expected `r <v> <d> <u1> .. <ud>`",
                    ));
                }
                let v = vertex(toks[1])?;
                let d = number(ln, toks[2])?;
                arity(ln, &toks, 3 + d)?;
                if rot[v].is_some() {
                    return Err(ParseError::syntax(
                        ln,
                        toks[1].0,
                        format!("second rotation line for vertex {v}"),
                    ));
                }
                let mut nbrs = Vec::with_capacity(d);
                for &tok in &toks[3..] {
                    let u = vertex(tok)?;
                    let kind = if u == v {
                        Some(GraphError::Loop(v))
                    } else if nbrs.contains(&u) {
                        Some(GraphError::MultiEdge(v, u))
                    } else {
                        None
                    };
                    if let Some(e) = kind {
                        return Err(ParseError {
                            line: ln,
                            col: tok.0,
                            kind: ParseErrorKind::Graph(e),
                        });
                    }
                    nbrs.push(u);
                }
                pos.r_line[v] = ln;
                pos.nbr_cols[v] = toks[3..].iter().map(|t| t.0).collect();
                rot[v] = Some(nbrs);
            }
            "outer" => {
                arity(ln, &toks, 3)?;
                if outer.is_some() {
                    return Err(ParseError::syntax(ln, 1, "second `outer` line"));
                }
                outer = Some(Dart::new(vertex(toks[1])?, vertex(toks[2])?));
                pos.outer_line = ln;
            }
            "color" => {
                arity(ln, &toks, 3)?;
                let v = vertex(toks[1])?;
                let c = number(ln, toks[2])?;
                if !COLORS.iter().any(|&k| k as usize == c) {
                    return Err(ParseError::syntax(
                        ln,
                        toks[2].0,
                        format!("colour must be 1, 2 or 3, found {c}"),
                    ));
                }
                if colors.iter().any(|&(_, _, u, _)| u == v) {
                    return Err(ParseError::syntax(
                        ln,
                        toks[1].0,
                        format!("second colour for vertex {v}"),
                    ));
                }
                colors.push((ln, toks[1].0, v, c as Color));
            }
            other => {
                return Err(ParseError::syntax(
                    ln,
                    toks[0].0,
                    format!("unknown line type `{other}`"),
                ))
            }
        }
    }

    let rotations: Vec<Vec<Vertex>> = rot
        .into_iter()
        .enumerate()
        .map(|(v, r)| {
            r.ok_or_else(|| ParseError::syntax(0, 0, format!("no rotation line for vertex {v}")))
        })
        .collect::<Result<_, _>>()?;
    for (u, r) in rotations.iter().enumerate() {
        for (i, &v) in r.iter().enumerate() {
            if !rotations[v].contains(&u) {
                return Err(ParseError {
                    line: pos.r_line[u],
                    col: pos.nbr_cols[u][i],
                    kind: ParseErrorKind::Graph(GraphError::Asymmetric(u, v)),
                });
            }
        }
    }
    let graph = RotationGraph::build(rotations, outer).map_err(|e| pos.locate(e))?;

    let boundary = if colors.is_empty() {
        None
    } else {
        let first = colors[0].0;
        let mismatch = || ParseError {
            line: first,
            col: 1,
            kind: ParseErrorKind::BoundaryNotOuterCycle,
        };
        let cycle = graph
            .outer_face()
            .and_then(|f| f.as_cycle())
            .ok_or_else(mismatch)?;
        if colors.len() != cycle.len() || colors.iter().any(|&(_, _, v, _)| !cycle.contains(v)) {
            return Err(mismatch());
        }
        let ordered = cycle
            .vertices()
            .iter()
            .map(|&v| colors.iter().find(|x| x.2 == v).unwrap().3)
            .collect();
        Some(
            BoundaryColoring::new(cycle, ordered).map_err(|e| ParseError {
                line: first,
                col: 1,
                kind: ParseErrorKind::Boundary(e),
            })?,
        )
    };
    Ok(GraphFile { graph, boundary })
}

/// Canonical text: rotations by vertex, the outer dart, colours by vertex.
pub fn serialize(g: &RotationGraph, boundary: Option<&BoundaryColoring>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "pg 1");
    let _ = writeln!(out, "n {}", g.n());
    for v in 0..g.n() {
        let _ = write!(out, "r {v} {}", g.degree(v));
        for u in g.rotation(v) {
            let _ = write!(out, " {u}");
        }
        out.push('\n');
    }
    if let Some(d) = g.outer_dart() {
        let _ = writeln!(out, "outer {} {}", d.tail, d.head);
    }
    if let Some(b) = boundary {
        let mut pairs: Vec<(Vertex, Color)> = b.iter().collect();
        pairs.sort_unstable();
        for (v, c) in pairs {
            let _ = writeln!(out, "color {v} {c}");
        }
    }
    out
}

impl fmt::Display for GraphFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize(&self.graph, self.boundary.as_ref()))
    }
}

/// Parses `c v col` lines into a colouring of `n` vertices.
pub fn parse_coloring(text: &str, n: usize) -> Result<Coloring, ParseError> {
    let mut colors: Vec<Option<Color>> = vec![None; n];
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let toks = tokens(line);
        if toks.is_empty() || toks[0].1.starts_with('#') {
            continue;
        }
        if toks[0].1 != "c" {
            return Err(ParseError::syntax(
                ln,
                toks[0].0,
                format!("expected `c <v> <colour>`, found `{}`", toks[0].1),
            ));
        }
        arity(ln, &toks, 3)?;
        let v = number(ln, toks[1])?;
        if v >= n {
            return Err(ParseError {
                line: ln,
                col: toks[1].0,
                kind: ParseErrorKind::Graph(GraphError::VertexOutOfRange(v)),
            });
        }
        let c = number(ln, toks[2])?;
        if !COLORS.iter().any(|&k| k as usize == c) {
            return Err(ParseError::syntax(
                ln,
                toks[2].0,
                format!("colour must be 1, 2 or 3, found {c}"),
            ));
        }
        if colors[v].replace(c as Color).is_some() {
            return Err(ParseError::syntax(
                ln,
                toks[1].0,
                format!("second colour for vertex {v}"),
            ));
        }
    }
    let total = colors
        .iter()
        .enumerate()
        .map(|(v, c)| {
            c.ok_or_else(|| ParseError::syntax(0, 0, format!("no colour for vertex {v}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Coloring::new(total).expect("colours checked while parsing"))
}
