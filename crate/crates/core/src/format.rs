//! Text formats: graph6 (short header only) and plain edge lists.
//!
//! graph6 layout: one header byte `63 + n`, then the upper triangle of the
//! adjacency matrix in column order `x(0,1), x(0,2), x(1,2), x(0,3), ...`,
//! packed big-endian into 6-bit groups, zero-padded, each group offset by 63.

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const GRAPH6_MAX_ORDER: usize = 62;

fn g6_error(offset: usize, message: impl Into<String>) -> Error {
    Error::Graph6 { offset, message: message.into() }
}

/// Parses one canonical graph6 line. A single trailing `\n` or `\r\n` is accepted.
pub fn parse_graph6(line: &str) -> Result<Graph> {
    let line = line.strip_suffix('\n').unwrap_or(line);
    let line = line.strip_suffix('\r').unwrap_or(line);
    let bytes = line.as_bytes();
    let Some(&head) = bytes.first() else {
        return Err(g6_error(0, "empty input"));
    };
    if head == 126 {
        return Err(g6_error(0, "long-form header (n > 62) is not supported"));
    }
    if !(63..126).contains(&head) {
        return Err(g6_error(0, format!("byte {head} is not a valid size header")));
    }
    let n = (head - 63) as usize;
    let bit_count = n * n.saturating_sub(1) / 2;
    let body_len = bit_count.div_ceil(6);
    for (i, &b) in bytes.iter().enumerate().skip(1) {
        if !(63..=126).contains(&b) {
            return Err(g6_error(i, format!("byte {b} outside printable range 63..=126")));
        }
        if i > body_len {
            return Err(g6_error(i, "trailing data after adjacency bits"));
        }
    }
    if bytes.len() < 1 + body_len {
        return Err(g6_error(bytes.len(), format!("expected {body_len} adjacency bytes")));
    }

    let bit = |k: usize| -> bool {
        let group = bytes[1 + k / 6] - 63;
        group >> (5 - k % 6) & 1 == 1
    };
    for k in bit_count..body_len * 6 {
        if bit(k) {
            return Err(g6_error(1 + k / 6, "non-zero padding bits"));
        }
    }
    let mut g = Graph::empty(n);
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                g.set(i, j);
            }
            k += 1;
        }
    }
    Ok(g)
}

pub fn to_graph6(g: &Graph) -> Result<String> {
    let n = g.order();
    if n > GRAPH6_MAX_ORDER {
        return Err(Error::UnsupportedSize(n));
    }
    let bit_count = n * n.saturating_sub(1) / 2;
    let mut groups = vec![0u8; bit_count.div_ceil(6)];
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if g.has_edge(i, j) {
                groups[k / 6] |= 1 << (5 - k % 6);
            }
            k += 1;
        }
    }
    let mut out = String::with_capacity(1 + groups.len());
    out.push((63 + n as u8) as char);
    out.extend(groups.into_iter().map(|b| (b + 63) as char));
    Ok(out)
}

/// Parses a text holding exactly one edge-list graph.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut graphs = parse_edge_list_stream(text)?;
    match graphs.len() {
        1 => Ok(graphs.pop().unwrap_or_else(|| unreachable!())),
        0 => Err(Error::EdgeList { line: 1, message: "missing vertex count".into() }),
        _ => Err(Error::EdgeList {
            line: 1,
            message: format!("expected one graph, found {}", graphs.len()),
        }),
    }
}

/// Parses a sequence of edge-list graphs. A line with a single token starts a
/// new graph with that many vertices; a line with two tokens adds an edge to
/// the current graph. Blank lines and lines starting with `#` are skipped.
pub fn parse_edge_list_stream(text: &str) -> Result<Vec<Graph>> {
    struct Pending {
        n: usize,
        edges: Vec<(usize, usize)>,
    }
    let mut done = Vec::new();
    let mut current: Option<Pending> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |message: String| Error::EdgeList { line, message };
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<usize> = trimmed
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| err(format!("invalid integer {t:?}"))))
            .collect::<Result<_>>()?;
        match *tokens.as_slice() {
            [n] => {
                if let Some(p) = current.take() {
                    done.push(Graph::from_edges(p.n, p.edges)?);
                }
                current = Some(Pending { n, edges: Vec::new() });
            }
            [u, v] => {
                let Some(p) = current.as_mut() else {
                    return Err(err("edge before vertex count".into()));
                };
                if u >= p.n || v >= p.n {
                    return Err(err(format!("vertex id out of range 0..{}", p.n)));
                }
                if u == v {
                    return Err(err(format!("self-loop at vertex {u}")));
                }
                p.edges.push((u, v));
            }
            _ => return Err(err(format!("expected 1 or 2 integers, found {}", tokens.len()))),
        }
    }
    if let Some(p) = current {
        done.push(Graph::from_edges(p.n, p.edges)?);
    }
    Ok(done)
}

/// Vertex count on the first line, then one `u v` line per edge in canonical order.
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("{}\n", g.order());
    for e in g.edges() {
        out.push_str(&format!("{} {}\n", e.u(), e.v()));
    }
    out
}
