//! Text and JSON formats.
//!
//! Point sets:
//!
//! ```text
//! # comment
//! n=7 d=1
//! 0
//! 4
//! ```
//!
//! one point per line with comma-separated coordinates after an `n=… d=…`
//! header, or the rank list `{"n":7,"d":1,"ranks":[0,4]}`.
//!
//! Collision graphs: an edge list (`u v` rank pairs after a `# n=… d=…
//! seed=…` header) or the DIMACS form (`c` comment lines, `p edge N M`,
//! 1-based `e u v` lines in vertex order).

use std::fmt::Write as _;

use crate::containers::{CollisionGraph, Graph};
use crate::error::{Error, Result};
use crate::grid::{GridParams, GridPoint, PointSet};

/// Strips a trailing `#` comment and surrounding whitespace.
fn content(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

/// Parses `n=7 d=1` (commas, spaces and `key = value` spacing tolerated).
fn parse_header(text: &str, line: usize) -> Result<GridParams> {
    let mut n = None;
    let mut d = None;
    let normalized = text.replace(" = ", "=").replace("= ", "=").replace(" =", "=");
    for token in normalized.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| Error::parse(line, format!("expected key=value in header, found '{token}'")))?;
        let parsed: u64 =
            value.parse().map_err(|_| Error::parse(line, format!("header value '{value}' is not an integer")))?;
        match key {
            "n" => n = Some(parsed),
            "d" => d = Some(u32::try_from(parsed).map_err(|_| Error::parse(line, "d too large"))?),
            other => return Err(Error::parse(line, format!("unknown header key '{other}'"))),
        }
    }
    match (n, d) {
        (Some(n), Some(d)) => GridParams::new(n, d).map_err(|e| Error::parse(line, e.to_string())),
        _ => Err(Error::parse(line, "header must give both n and d")),
    }
}

/// Reads the point-set text format. Duplicate points are rejected.
pub fn parse_points(text: &str) -> Result<PointSet> {
    let mut grid = None;
    let mut ranks = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = content(raw);
        if body.is_empty() {
            continue;
        }
        let Some(g) = grid else {
            grid = Some(parse_header(body, line)?);
            continue;
        };
        let coords = body
            .split(',')
            .map(|c| c.trim().parse::<u64>().map_err(|_| Error::parse(line, format!("bad coordinate '{}'", c.trim()))))
            .collect::<Result<Vec<_>>>()?;
        let point = GridPoint::new(coords, &g).map_err(|e| Error::parse(line, e.to_string()))?;
        ranks.push((g.rank(&point)?, line));
    }
    let grid = grid.ok_or_else(|| Error::parse(text.lines().count().max(1), "missing 'n=… d=…' header"))?;
    ranks.sort_unstable();
    if let Some(w) = ranks.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(Error::parse(w[0].1.max(w[1].1), "duplicate point"));
    }
    PointSet::from_ranks(grid, ranks.into_iter().map(|(r, _)| r))
}

/// Writes the point-set text format in rank order.
pub fn write_points(set: &PointSet) -> String {
    let g = set.grid();
    let mut out = format!("n={} d={}\n", g.n(), g.d());
    for p in set.points() {
        let coords: Vec<String> = p.coords().iter().map(u64::to_string).collect();
        out.push_str(&coords.join(","));
        out.push('\n');
    }
    out
}

pub fn parse_rank_json(text: &str) -> Result<PointSet> {
    Ok(serde_json::from_str(text)?)
}

pub fn write_rank_json(set: &PointSet) -> String {
    serde_json::to_string(set).expect("point sets always serialize")
}

/// Accepts either format, choosing JSON when the first non-blank character
/// is `{`.
pub fn parse_point_file(text: &str) -> Result<PointSet> {
    if text.trim_start().starts_with('{') {
        parse_rank_json(text)
    } else {
        parse_points(text)
    }
}

fn graph_header(cg: &CollisionGraph) -> String {
    let seed: Vec<String> = cg.seed.ranks().iter().map(u64::to_string).collect();
    format!("n={} d={} seed={}", cg.grid.n(), cg.grid.d(), seed.join(","))
}

fn parse_graph_header(text: &str, line: usize) -> Result<(GridParams, Vec<u64>)> {
    let (grid_part, seed_part) =
        text.split_once("seed=").ok_or_else(|| Error::parse(line, "header must contain 'seed='"))?;
    let grid = parse_header(grid_part, line)?;
    let seed = seed_part
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u64>().map_err(|_| Error::parse(line, format!("bad seed rank '{t}'"))))
        .collect::<Result<Vec<_>>>()?;
    Ok((grid, seed))
}

/// Rebuilds a collision graph from its header and rank-encoded edges,
/// checking that the edges match the seed.
fn rebuild(
    grid: GridParams,
    seed: Vec<u64>,
    rank_edges: &[(u64, u64, usize)],
    header_line: usize,
) -> Result<CollisionGraph> {
    let seed = PointSet::from_ranks(grid, seed).map_err(|e| Error::parse(header_line, e.to_string()))?;
    let vertices = seed.complement();
    let mut edges = Vec::with_capacity(rank_edges.len());
    for &(a, b, line) in rank_edges {
        let ia = vertices.ranks().binary_search(&a).map_err(|_| Error::parse(line, format!("{a} is not a vertex")))?;
        let ib = vertices.ranks().binary_search(&b).map_err(|_| Error::parse(line, format!("{b} is not a vertex")))?;
        if ia == ib {
            return Err(Error::parse(line, "loop edge"));
        }
        edges.push((ia, ib));
    }
    let graph = Graph::with_labels(vertices.into_ranks(), &edges)?;
    Ok(CollisionGraph { grid, seed, graph })
}

/// `u v` per line, vertices as grid ranks.
pub fn write_edge_list(cg: &CollisionGraph) -> String {
    let mut out = format!("# {}\n", graph_header(cg));
    for (a, b) in cg.rank_edges() {
        writeln!(out, "{a} {b}").expect("write to string");
    }
    out
}

pub fn parse_edge_list(text: &str) -> Result<CollisionGraph> {
    let mut header = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if let Some(comment) = trimmed.strip_prefix('#') {
            if header.is_none() && comment.contains("seed=") {
                header = Some((parse_graph_header(comment.trim(), line)?, line));
            }
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        let mut it = trimmed.split_whitespace();
        let mut next = || -> Result<u64> {
            it.next()
                .ok_or_else(|| Error::parse(line, "expected two ranks"))?
                .parse()
                .map_err(|_| Error::parse(line, "rank is not an integer"))
        };
        let (a, b) = (next()?, next()?);
        if it.next().is_some() {
            return Err(Error::parse(line, "expected exactly two ranks"));
        }
        edges.push((a, b, line));
    }
    let ((grid, seed), header_line) = header.ok_or_else(|| Error::parse(1, "missing '# n=… d=… seed=…' header"))?;
    rebuild(grid, seed, &edges, header_line)
}

/// DIMACS edge format with the grid and seed in a `c` line.
pub fn write_dimacs(cg: &CollisionGraph) -> String {
    let g = &cg.graph;
    let mut out = format!("c {}\np edge {} {}\n", graph_header(cg), g.vertex_count(), g.edge_count());
    for (a, b) in g.edges() {
        writeln!(out, "e {} {}", a + 1, b + 1).expect("write to string");
    }
    out
}

pub fn parse_dimacs(text: &str) -> Result<CollisionGraph> {
    let mut header = None;
    let mut problem: Option<(usize, usize, usize)> = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut it = raw.split_whitespace();
        match it.next() {
            None => {}
            Some("c") => {
                let rest = raw.trim_start()[1..].trim();
                if header.is_none() && rest.contains("seed=") {
                    header = Some((parse_graph_header(rest, line)?, line));
                }
            }
            Some("p") => {
                let fields: Vec<&str> = it.collect();
                if fields.len() != 3 || fields[0] != "edge" {
                    return Err(Error::parse(line, "expected 'p edge N M'"));
                }
                let num =
                    |s: &str| s.parse::<usize>().map_err(|_| Error::parse(line, format!("'{s}' is not an integer")));
                problem = Some((num(fields[1])?, num(fields[2])?, line));
            }
            Some("e") => {
                let (vertices, _, _) = problem.ok_or_else(|| Error::parse(line, "edge before 'p edge' line"))?;
                let fields: Vec<&str> = it.collect();
                if fields.len() != 2 {
                    return Err(Error::parse(line, "expected 'e u v'"));
                }
                let mut ends = [0usize; 2];
                for (k, f) in fields.iter().enumerate() {
                    let v: usize = f.parse().map_err(|_| Error::parse(line, format!("'{f}' is not an integer")))?;
                    if v == 0 || v > vertices {
                        return Err(Error::parse(line, format!("vertex {v} outside 1..={vertices}")));
                    }
                    ends[k] = v - 1;
                }
                edges.push((ends[0], ends[1], line));
            }
            Some(other) => return Err(Error::parse(line, format!("unknown line type '{other}'"))),
        }
    }
    let ((grid, seed), header_line) = header.ok_or_else(|| Error::parse(1, "missing 'c n=… d=… seed=…' line"))?;
    let (vertices, m, p_line) = problem.ok_or_else(|| Error::parse(1, "missing 'p edge N M' line"))?;
    let seed_set = PointSet::from_ranks(grid, seed.clone()).map_err(|e| Error::parse(header_line, e.to_string()))?;
    let labels = seed_set.complement().into_ranks();
    if labels.len() != vertices {
        return Err(Error::parse(p_line, format!("{vertices} vertices declared, the seed leaves {}", labels.len())));
    }
    let rank_edges: Vec<(u64, u64, usize)> = edges.iter().map(|&(a, b, l)| (labels[a], labels[b], l)).collect();
    let cg = rebuild(grid, seed, &rank_edges, header_line)?;
    if cg.graph.edge_count() != m {
        return Err(Error::parse(p_line, format!("{m} edges declared, {} found", cg.graph.edge_count())));
    }
    Ok(cg)
}
