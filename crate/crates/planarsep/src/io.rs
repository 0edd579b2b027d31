//! Reading and writing the line-oriented `plgr 1` graph format.
//!
//! ```text
//! plgr 1
//! n <vertex count>
//! part <vertex> <A|B>               # optional, labeled graphs only
//! a <arc_id> <src> <dst> <weight> <R|B|->
//! rot <vertex> <end>...             # end = "<arc_id>s" | "<arc_id>d"
//! cross <arc_i> <arc_j>             # drawn graphs only, no rot lines
//! ```
//!
//! `#` starts a comment. Vertex and arc ids are dense and 0-based. Drawn
//! files list their `cross` lines so that each arc's mentions appear in
//! order along the arc; a pair of arcs crosses at most once.

use std::fmt;
use std::io::{BufRead, Write};

use crate::graph::{
    default_weight_bound, validate, Arc, ArcEnd, Color, End, GraphError, Part, PlanarGraph,
};
use crate::redblue::DrawnGraph;

/// Which kind of graph a stream is expected to contain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FileKind {
    Planar,
    Drawn,
}

/// A parsed graph file.
#[derive(Clone, Debug)]
pub enum GraphFile {
    Planar(PlanarGraph),
    Drawn(DrawnGraph),
}

#[derive(Debug)]
pub enum ParseError {
    Io(std::io::Error),
    /// Syntax or semantic error with a 1-based line number.
    Line { line: usize, msg: String },
    /// The graph parsed but violates structural or embedding invariants.
    Invalid(String),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Io(e) => write!(f, "io error: {}", e),
            ParseError::Line { line, msg } => write!(f, "line {}: {}", line, msg),
            ParseError::Invalid(msg) => write!(f, "invalid graph: {}", msg),
        }
    }
}

impl std::error::Error for ParseError {}

impl From<std::io::Error> for ParseError {
    fn from(e: std::io::Error) -> ParseError {
        ParseError::Io(e)
    }
}

fn line_err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Line { line, msg: msg.into() }
}

struct RawArc {
    src: usize,
    dst: usize,
    weight: i64,
    color: Option<Color>,
}

/// Parses a graph from a reader. `kind` selects the expected shape; drawn
/// graphs carry `cross` lines and no rotations.
pub fn read_graph<R: BufRead>(reader: R, kind: FileKind) -> Result<GraphFile, ParseError> {
    let mut n: Option<usize> = None;
    let mut arcs: Vec<Option<RawArc>> = Vec::new();
    let mut parts: Vec<(usize, Part)> = Vec::new();
    let mut rotations: Vec<(usize, Vec<ArcEnd>, usize)> = Vec::new();
    let mut crossings: Vec<(usize, usize, usize)> = Vec::new();
    let mut saw_header = false;

    for (idx, line) in reader.lines().enumerate() {
        let lno = idx + 1;
        let line = line?;
        let text = match line.find('#') {
            Some(p) => &line[..p],
            None => &line[..],
        };
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if !saw_header {
            if tokens != ["plgr", "1"] {
                return Err(line_err(lno, "expected header `plgr 1`"));
            }
            saw_header = true;
            continue;
        }
        match tokens[0] {
            "n" => {
                if tokens.len() != 2 {
                    return Err(line_err(lno, "usage: n <count>"));
                }
                let count: usize = tokens[1]
                    .parse()
                    .map_err(|_| line_err(lno, "bad vertex count"))?;
                if count == 0 {
                    return Err(line_err(lno, "vertex count must be positive"));
                }
                if n.replace(count).is_some() {
                    return Err(line_err(lno, "duplicate n line"));
                }
            }
            "part" => {
                if tokens.len() != 3 {
                    return Err(line_err(lno, "usage: part <vertex> <A|B>"));
                }
                let v: usize = tokens[1].parse().map_err(|_| line_err(lno, "bad vertex id"))?;
                let p = match tokens[2] {
                    "A" => Part::A,
                    "B" => Part::B,
                    _ => return Err(line_err(lno, "part must be A or B")),
                };
                parts.push((v, p));
            }
            "a" => {
                if tokens.len() != 6 {
                    return Err(line_err(lno, "usage: a <id> <src> <dst> <weight> <R|B|->"));
                }
                let id: usize = tokens[1].parse().map_err(|_| line_err(lno, "bad arc id"))?;
                let src: usize = tokens[2].parse().map_err(|_| line_err(lno, "bad src"))?;
                let dst: usize = tokens[3].parse().map_err(|_| line_err(lno, "bad dst"))?;
                let weight: i64 = tokens[4].parse().map_err(|_| line_err(lno, "bad weight"))?;
                let color = match tokens[5] {
                    "R" => Some(Color::Red),
                    "B" => Some(Color::Blue),
                    "-" => None,
                    _ => return Err(line_err(lno, "color must be R, B or -")),
                };
                if id >= arcs.len() {
                    arcs.resize_with(id + 1, || None);
                }
                if arcs[id].is_some() {
                    return Err(line_err(lno, format!("duplicate arc id {}", id)));
                }
                arcs[id] = Some(RawArc { src, dst, weight, color });
            }
            "rot" => {
                if tokens.len() < 2 {
                    return Err(line_err(lno, "usage: rot <vertex> <end>..."));
                }
                let v: usize = tokens[1].parse().map_err(|_| line_err(lno, "bad vertex id"))?;
                let mut row = Vec::with_capacity(tokens.len() - 2);
                for t in &tokens[2..] {
                    let (num, tag) = t.split_at(t.len() - 1);
                    let arc: usize = num.parse().map_err(|_| line_err(lno, "bad arc-end"))?;
                    let end = match tag {
                        "s" => End::Src,
                        "d" => End::Dst,
                        _ => return Err(line_err(lno, "arc-end must end in s or d")),
                    };
                    row.push(ArcEnd { arc, end });
                }
                rotations.push((v, row, lno));
            }
            "cross" => {
                if tokens.len() != 3 {
                    return Err(line_err(lno, "usage: cross <arc_i> <arc_j>"));
                }
                let i: usize = tokens[1].parse().map_err(|_| line_err(lno, "bad arc id"))?;
                let j: usize = tokens[2].parse().map_err(|_| line_err(lno, "bad arc id"))?;
                crossings.push((i, j, lno));
            }
            other => {
                return Err(line_err(lno, format!("unknown directive `{}`", other)));
            }
        }
    }

    if !saw_header {
        return Err(line_err(1, "missing `plgr 1` header"));
    }
    let n = n.ok_or_else(|| line_err(1, "missing n line"))?;

    let mut dense_arcs = Vec::with_capacity(arcs.len());
    for (id, a) in arcs.into_iter().enumerate() {
        match a {
            Some(raw) => dense_arcs.push(Arc {
                src: raw.src,
                dst: raw.dst,
                weight: raw.weight,
                color: raw.color,
            }),
            None => {
                return Err(ParseError::Invalid(format!("arc id {} missing (ids must be dense)", id)))
            }
        }
    }

    let part = if parts.is_empty() {
        None
    } else {
        let mut labels = vec![None; n];
        for (v, p) in parts {
            if v >= n {
                return Err(ParseError::Invalid(format!("part vertex {} out of range", v)));
            }
            labels[v] = Some(p);
        }
        if labels.iter().any(|l| l.is_none()) {
            return Err(ParseError::Invalid("part labels must cover every vertex".into()));
        }
        Some(labels.into_iter().map(|l| l.unwrap()).collect())
    };

    match kind {
        FileKind::Planar => {
            if !crossings.is_empty() {
                return Err(ParseError::Invalid("cross lines in a planar graph file".into()));
            }
            let mut rows: Vec<Vec<ArcEnd>> = vec![Vec::new(); n];
            let mut seen = vec![false; n];
            for (v, row, lno) in rotations {
                if v >= n {
                    return Err(line_err(lno, format!("rot vertex {} out of range", v)));
                }
                if seen[v] {
                    return Err(line_err(lno, format!("duplicate rot line for vertex {}", v)));
                }
                seen[v] = true;
                rows[v] = row;
            }
            let g = PlanarGraph::new(n, dense_arcs, rows, part, default_weight_bound(n))
                .map_err(|e| ParseError::Invalid(e.to_string()))?;
            let violations = validate(&g);
            if !violations.is_empty() {
                return Err(ParseError::Invalid(violations[0].to_string()));
            }
            Ok(GraphFile::Planar(g))
        }
        FileKind::Drawn => {
            if !rotations.is_empty() {
                return Err(ParseError::Invalid("rot lines in a drawn graph file".into()));
            }
            let rows = vec![Vec::new(); n];
            let g = PlanarGraph::new(n, dense_arcs, rows, part, default_weight_bound(n))
                .map_err(|e| ParseError::Invalid(e.to_string()))?;
            let mut pairs = Vec::with_capacity(crossings.len());
            for (i, j, lno) in crossings {
                if i >= g.arc_count() || j >= g.arc_count() {
                    return Err(line_err(lno, "cross references unknown arc"));
                }
                pairs.push((i, j));
            }
            DrawnGraph::new(g, pairs)
                .map(GraphFile::Drawn)
                .map_err(|e: GraphError| ParseError::Invalid(e.to_string()))
        }
    }
}

/// Canonical writer; `read_graph . write_graph` is the identity and the
/// output is byte-stable.
pub fn write_graph<W: Write>(file: &GraphFile, w: &mut W) -> std::io::Result<()> {
    match file {
        GraphFile::Planar(g) => write_planar(g, w),
        GraphFile::Drawn(d) => write_drawn(d, w),
    }
}

pub fn write_planar<W: Write>(g: &PlanarGraph, w: &mut W) -> std::io::Result<()> {
    writeln!(w, "plgr 1")?;
    writeln!(w, "n {}", g.vertex_count())?;
    if let Some(p) = g.part() {
        for (v, part) in p.iter().enumerate() {
            writeln!(w, "part {} {}", v, part)?;
        }
    }
    for (id, a) in g.arcs().iter().enumerate() {
        let c = match a.color {
            Some(Color::Red) => "R",
            Some(Color::Blue) => "B",
            None => "-",
        };
        writeln!(w, "a {} {} {} {} {}", id, a.src, a.dst, a.weight, c)?;
    }
    for v in 0..g.vertex_count() {
        let row = g.rotation(v);
        if row.is_empty() {
            continue;
        }
        write!(w, "rot {}", v)?;
        for e in row {
            write!(w, " {}", e)?;
        }
        writeln!(w)?;
    }
    Ok(())
}

pub fn write_drawn<W: Write>(d: &DrawnGraph, w: &mut W) -> std::io::Result<()> {
    let g = &d.graph;
    writeln!(w, "plgr 1")?;
    writeln!(w, "n {}", g.vertex_count())?;
    if let Some(p) = g.part() {
        for (v, part) in p.iter().enumerate() {
            writeln!(w, "part {} {}", v, part)?;
        }
    }
    for (id, a) in g.arcs().iter().enumerate() {
        let c = match a.color {
            Some(Color::Red) => "R",
            Some(Color::Blue) => "B",
            None => "-",
        };
        writeln!(w, "a {} {} {} {} {}", id, a.src, a.dst, a.weight, c)?;
    }
    for &(i, j) in &d.crossings {
        writeln!(w, "cross {} {}", i, j)?;
    }
    Ok(())
}

/// Serializes to a string (canonical form).
pub fn to_string(file: &GraphFile) -> String {
    let mut buf = Vec::new();
    write_graph(file, &mut buf).expect("write to Vec cannot fail");
    String::from_utf8(buf).expect("plgr output is ascii")
}

/// Parses from a string.
pub fn from_str(text: &str, kind: FileKind) -> Result<GraphFile, ParseError> {
    read_graph(std::io::Cursor::new(text.as_bytes()), kind)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file_parses() {
        let text = "plgr 1\nn 2\na 0 0 1 1 R\nrot 0 0s\nrot 1 0d\n";
        let g = match from_str(text, FileKind::Planar).unwrap() {
            GraphFile::Planar(g) => g,
            _ => panic!("expected planar"),
        };
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.arc_count(), 1);
        assert_eq!(g.arc(0).color, Some(Color::Red));
    }

    #[test]
    fn round_trip_is_byte_stable() {
        let text = "plgr 1\n# a comment\nn 2\na 0 0 1 1 R\nrot 0 0s\nrot 1 0d\n";
        let f = from_str(text, FileKind::Planar).unwrap();
        let once = to_string(&f);
        let twice = to_string(&from_str(&once, FileKind::Planar).unwrap());
        assert_eq!(once, twice);
    }

    #[test]
    fn duplicate_arc_id_is_rejected() {
        let text = "plgr 1\nn 2\na 0 0 1 1 R\na 0 1 0 1 B\n";
        let err = from_str(text, FileKind::Planar).unwrap_err();
        assert!(err.to_string().contains("duplicate arc id"));
    }

    #[test]
    fn invalid_rotation_is_rejected() {
        let text = "plgr 1\nn 2\na 0 0 1 1 -\nrot 0 0s\n";
        let err = from_str(text, FileKind::Planar).unwrap_err();
        assert!(err.to_string().contains("rotation coverage"));
    }

    #[test]
    fn drawn_file_with_crossing() {
        let text = "plgr 1\nn 4\na 0 0 2 1 -\na 1 1 3 1 -\ncross 0 1\n";
        let d = match from_str(text, FileKind::Drawn).unwrap() {
            GraphFile::Drawn(d) => d,
            _ => panic!("expected drawn"),
        };
        assert_eq!(d.crossings.len(), 1);
        assert_eq!(d.per_arc[0], vec![0]);
        assert_eq!(d.per_arc[1], vec![0]);
    }
}
