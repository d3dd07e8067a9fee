//! Bipartite graphs and the `.graph` format: a header line `n m`, then one
//! edge `xi yj` per line (1-based indices). `#` starts a comment.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    x_count: usize,
    y_count: usize,
    /// 0-based (x, y) pairs.
    edges: BTreeSet<(usize, usize)>,
}

impl BipartiteGraph {
    /// Edges are 0-based here; rejects duplicates and out-of-range indices.
    pub fn new(x_count: usize, y_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut set = BTreeSet::new();
        for &(i, j) in edges {
            if i >= x_count || j >= y_count {
                return Err(Error::Precondition(format!(
                    "edge x{} y{} out of range for n = {x_count}, m = {y_count}",
                    i + 1,
                    j + 1
                )));
            }
            if !set.insert((i, j)) {
                return Err(Error::Precondition(format!("duplicate edge x{} y{}", i + 1, j + 1)));
            }
        }
        Ok(Self {
            x_count,
            y_count,
            edges: set,
        })
    }

    pub fn x_count(&self) -> usize {
        self.x_count
    }

    pub fn y_count(&self) -> usize {
        self.y_count
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        self.edges.contains(&(x, y))
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.x_count, self.y_count);
        for &(i, j) in &self.edges {
            let _ = writeln!(s, "x{} y{}", i + 1, j + 1);
        }
        s
    }
}

pub fn parse_graph_file(text: &str) -> Result<BipartiteGraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let column_of = |k: usize| raw.find(fields[k]).map_or(1, |c| c + 1);
        if fields.len() != 2 {
            return Err(Error::parse(line_no, 1, "expected exactly two fields"));
        }
        match header {
            None => {
                let parse = |k: usize| {
                    fields[k]
                        .parse::<usize>()
                        .map_err(|_| Error::parse(line_no, column_of(k), "expected a vertex count"))
                };
                header = Some((parse(0)?, parse(1)?));
            }
            Some((n, m)) => {
                let vertex = |k: usize, prefix: char, bound: usize| -> Result<usize> {
                    let f = fields[k];
                    let idx = f
                        .strip_prefix(prefix)
                        .and_then(|s| s.parse::<usize>().ok())
                        .ok_or_else(|| {
                            Error::parse(line_no, column_of(k), format!("expected `{prefix}<index>`, found `{f}`"))
                        })?;
                    if idx == 0 || idx > bound {
                        return Err(Error::parse(
                            line_no,
                            column_of(k),
                            format!("index {f} out of range 1..={bound}"),
                        ));
                    }
                    Ok(idx - 1)
                };
                let e = (vertex(0, 'x', n)?, vertex(1, 'y', m)?);
                if !edges.insert(e) {
                    return Err(Error::parse(line_no, 1, format!("duplicate edge {content}")));
                }
            }
        }
    }
    let (n, m) = header.ok_or_else(|| Error::parse(1, 1, "missing `n m` header"))?;
    let edges: Vec<_> = edges.into_iter().collect();
    BipartiteGraph::new(n, m, &edges)
}
