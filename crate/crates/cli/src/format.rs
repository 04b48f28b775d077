//! Plain-text graph and partition files.
//!
//! Graph file: a header `p <n> <m>` followed by `m` lines `<u> <v>` with
//! 0-based vertices. Blank lines and anything after `#` are ignored.
//! Partition file: one line of `r`/`b` characters, one per vertex.

use oddcluster::model::Side;
use oddcluster::Graph;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

fn numbers(line: usize, fields: &[&str]) -> Result<Vec<usize>, ParseError> {
    fields
        .iter()
        .map(|f| {
            f.parse()
                .map_err(|_| err(line, format!("expected a non-negative integer, got {f:?}")))
        })
        .collect()
}

pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges = Vec::new();
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        match header {
            None => {
                if fields.len() != 3 || fields[0] != "p" {
                    return Err(err(line, "expected header `p <n> <m>`"));
                }
                let v = numbers(line, &fields[1..])?;
                header = Some((v[0], v[1], line));
            }
            Some((n, m, _)) => {
                if fields.len() != 2 {
                    return Err(err(line, "expected an edge `<u> <v>`"));
                }
                let v = numbers(line, &fields)?;
                if edges.len() == m {
                    return Err(err(line, format!("more than the declared {m} edges")));
                }
                if let Some(&x) = v.iter().find(|&&x| x >= n) {
                    return Err(err(
                        line,
                        format!("vertex {x} out of range for {n} vertices"),
                    ));
                }
                if v[0] == v[1] {
                    return Err(err(line, format!("self-loop at {}", v[0])));
                }
                edges.push((v[0], v[1], line));
            }
        }
    }
    let (n, m, hline) = header.ok_or_else(|| err(last.max(1), "missing header `p <n> <m>`"))?;
    if edges.len() != m {
        return Err(err(
            hline,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    let mut seen = std::collections::HashSet::new();
    for &(u, v, line) in &edges {
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(err(line, format!("repeated edge {u}-{v}")));
        }
    }
    Graph::new(n, edges.iter().map(|&(u, v, _)| (u, v))).map_err(|e| err(hline, e.to_string()))
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("p {} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn parse_partition(text: &str, n: usize) -> Result<Vec<Side>, ParseError> {
    let mut found: Option<(usize, &str)> = None;
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        if found.is_some() {
            return Err(err(i + 1, "partition must be a single line"));
        }
        found = Some((i + 1, content));
    }
    let (line, content) = found.unwrap_or((1, ""));
    let sides = content
        .chars()
        .enumerate()
        .map(|(i, c)| match c {
            'r' => Ok(Side::Red),
            'b' => Ok(Side::Blue),
            other => Err(err(
                line,
                format!("character {} is {other:?}, expected r or b", i + 1),
            )),
        })
        .collect::<Result<Vec<_>, _>>()?;
    if sides.len() != n {
        return Err(err(
            line,
            format!("{} entries for {n} vertices", sides.len()),
        ));
    }
    Ok(sides)
}
