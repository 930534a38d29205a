//! Line-oriented text formats.
//!
//! ```text
//! # comment
//! p em <n> <m> <k>        p tkpm <n> <m> <k>
//! e <u> <v> <r|b>         e <u> <v> <weight>
//! ```
//!
//! Matchings are a single line `m <count> <edge-id>...`.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Color, EmInstance, Graph, Matching, TkpmInstance};

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn num<T: FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| perr(line, format!("expected {what}, found `{tok}`")))
}

fn parse_graph<L>(
    text: &str,
    kind: &str,
    mut label: impl FnMut(&str, usize) -> Result<L>,
) -> Result<(Graph<L>, usize)> {
    let mut recs = records(text);
    let (hline, header) = recs.next().ok_or_else(|| perr(1, "missing `p` header"))?;
    if header.len() != 5 || header[0] != "p" || header[1] != kind {
        return Err(perr(hline, format!("malformed header, expected `p {kind} <n> <m> <k>`")));
    }
    let n: usize = num(header[2], hline, "vertex count")?;
    let m: usize = num(header[3], hline, "edge count")?;
    let k: usize = num(header[4], hline, "k")?;

    let mut edges = Vec::with_capacity(m);
    let mut lines = Vec::with_capacity(m);
    let mut last_line = hline;
    for (line, toks) in recs {
        last_line = line;
        if toks[0] != "e" {
            return Err(perr(line, format!("unexpected record `{}`", toks[0])));
        }
        if toks.len() != 4 {
            return Err(perr(line, "edge record needs exactly 3 fields"));
        }
        if edges.len() == m {
            return Err(perr(line, format!("more edge records than the {m} declared")));
        }
        let u: usize = num(toks[1], line, "vertex id")?;
        let v: usize = num(toks[2], line, "vertex id")?;
        for x in [u, v] {
            if x >= n {
                return Err(perr(line, format!("vertex id {x} out of range (n = {n})")));
            }
        }
        edges.push((u, v, label(toks[3], line)?));
        lines.push(line);
    }
    if edges.len() != m {
        return Err(perr(
            last_line,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    let g = Graph::new(n, edges);
    if let Err(v) = g.validate() {
        let at = match v {
            crate::graph::Violation::SelfLoop { edge }
            | crate::graph::Violation::ParallelEdge { edge, .. }
            | crate::graph::Violation::VertexOutOfRange { edge, .. } => lines[edge],
        };
        return Err(perr(at, v.to_string()));
    }
    Ok((g, k))
}

pub fn parse_em(text: &str) -> Result<EmInstance> {
    let (graph, k) = parse_graph(text, "em", |tok, line| match tok {
        "r" => Ok(Color::Red),
        "b" => Ok(Color::Blue),
        _ => Err(perr(line, format!("expected color `r` or `b`, found `{tok}`"))),
    })?;
    Ok(EmInstance { graph, k })
}

pub fn parse_tkpm(text: &str) -> Result<TkpmInstance> {
    let (graph, k) = parse_graph(text, "tkpm", |tok, line| num(tok, line, "non-negative weight"))?;
    Ok(TkpmInstance { graph, k })
}

pub fn write_em(inst: &EmInstance) -> String {
    let g = &inst.graph;
    let mut s = format!("p em {} {} {}\n", g.vertex_count(), g.edge_count(), inst.k);
    for e in g.edges() {
        let c = if e.label.is_red() { 'r' } else { 'b' };
        let _ = writeln!(s, "e {} {} {}", e.u, e.v, c);
    }
    s
}

pub fn write_tkpm(inst: &TkpmInstance) -> String {
    let g = &inst.graph;
    let mut s = format!("p tkpm {} {} {}\n", g.vertex_count(), g.edge_count(), inst.k);
    for e in g.edges() {
        let _ = writeln!(s, "e {} {} {}", e.u, e.v, e.label);
    }
    s
}

/// Parses the first non-comment line of `text` as `m <count> <edge-id>...`.
///
/// Ids are checked against `edge_count`.
pub fn parse_matching(text: &str, edge_count: usize) -> Result<Matching> {
    let (line, toks) = records(text)
        .next()
        .ok_or_else(|| perr(1, "missing `m` record"))?;
    if toks[0] != "m" || toks.len() < 2 {
        return Err(perr(line, "malformed matching, expected `m <count> <edge-id>...`"));
    }
    let count: usize = num(toks[1], line, "edge count")?;
    if toks.len() - 2 != count {
        return Err(perr(
            line,
            format!("declares {count} edges, lists {}", toks.len() - 2),
        ));
    }
    let mut ids = Vec::with_capacity(count);
    for tok in &toks[2..] {
        let id: usize = num(tok, line, "edge id")?;
        if id >= edge_count {
            return Err(perr(line, format!("edge id {id} out of range ({edge_count} edges)")));
        }
        ids.push(id);
    }
    let m = Matching::new(ids);
    if m.len() != count {
        return Err(perr(line, "duplicate edge id"));
    }
    Ok(m)
}
