// SPDX-License-Identifier: Apache-2.0
//! Text formats for graphs. Node labels are 1-based on disk.
//!
//! * edge list: optional `# p=<nodes>` header, then `i j` per line;
//! * CPDAG: same, with a third column `d` (directed `i → j`) or `u`;
//! * adjacency CSV: `p` rows of `p` comma-separated weights.

use std::fmt::Write as _;
use std::path::Path;

use super::{Cpdag, Dag, WeightedAdjacency};
use crate::error::{Error, Result};
use crate::io::{header_value, read_string, write_string};

struct EdgeLine {
    line: u64,
    from: usize,
    to: usize,
    flag: Option<char>,
}

fn parse_edge_lines(text: &str, origin: &Path, want_flag: bool) -> Result<(Option<usize>, Vec<EdgeLine>)> {
    let err = |line: u64, msg: String| Error::Parse { path: origin.to_path_buf(), line, msg };
    let mut p = None;
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k as u64 + 1;
        let t = raw.trim();
        if t.is_empty() {
            continue;
        }
        if t.starts_with('#') {
            if let Some(v) = header_value(t, "p") {
                p = Some(v.parse().map_err(|_| err(line, format!("bad node count '{v}'")))?);
            }
            continue;
        }
        let fields: Vec<&str> = t.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()).collect();
        let expected = if want_flag { 3 } else { 2 };
        if fields.len() != expected {
            return Err(err(line, format!("expected {expected} fields, found {}", fields.len())));
        }
        let node = |s: &str| -> Result<usize> {
            match s.parse::<usize>() {
                Ok(v) if v >= 1 => Ok(v - 1),
                _ => Err(err(line, format!("'{s}' is not a 1-based node label"))),
            }
        };
        let flag = if want_flag {
            match fields[2] {
                "d" => Some('d'),
                "u" => Some('u'),
                other => return Err(err(line, format!("edge flag '{other}' is not d or u"))),
            }
        } else {
            None
        };
        out.push(EdgeLine { line, from: node(fields[0])?, to: node(fields[1])?, flag });
    }
    Ok((p, out))
}

fn resolve_p(header: Option<usize>, hint: Option<usize>, lines: &[EdgeLine]) -> usize {
    header
        .or(hint)
        .unwrap_or_else(|| lines.iter().map(|e| e.from.max(e.to) + 1).max().unwrap_or(0))
}

impl Dag {
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("# p={}\n", self.p());
        for (i, j) in self.edges() {
            let _ = writeln!(s, "{} {}", i + 1, j + 1);
        }
        s
    }

    /// Parses an edge list. `p_hint` is used when the text has no header;
    /// failing both, the largest label fixes the node count.
    pub fn parse_edge_list(text: &str, origin: &Path, p_hint: Option<usize>) -> Result<Dag> {
        let (header, lines) = parse_edge_lines(text, origin, false)?;
        let p = resolve_p(header, p_hint, &lines);
        let mut g = Dag::empty(p);
        for e in &lines {
            if e.from >= p || e.to >= p {
                return Err(Error::Parse { path: origin.to_path_buf(), line: e.line, msg: format!("node outside 1..={p}") });
            }
            g.try_add_edge(e.from, e.to).map_err(|err| Error::Parse {
                path: origin.to_path_buf(),
                line: e.line,
                msg: err.to_string(),
            })?;
        }
        Ok(g)
    }

    pub fn read_edge_list(path: &Path, p_hint: Option<usize>) -> Result<Dag> {
        Self::parse_edge_list(&read_string(path)?, path, p_hint)
    }

    pub fn write_edge_list(&self, path: &Path) -> Result<()> {
        write_string(path, &self.to_edge_list())
    }

    pub fn write_adjacency_csv(&self, path: &Path) -> Result<()> {
        self.to_weighted().write_csv(path)
    }
}

impl Cpdag {
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("# p={}\n", self.p());
        for (i, j) in self.directed_edges() {
            let _ = writeln!(s, "{} {} d", i + 1, j + 1);
        }
        for (i, j) in self.undirected_edges() {
            let _ = writeln!(s, "{} {} u", i + 1, j + 1);
        }
        s
    }

    pub fn parse_edge_list(text: &str, origin: &Path, p_hint: Option<usize>) -> Result<Cpdag> {
        let (header, lines) = parse_edge_lines(text, origin, true)?;
        let p = resolve_p(header, p_hint, &lines);
        let pick = |flag: char| -> Vec<(usize, usize)> {
            lines.iter().filter(|e| e.flag == Some(flag)).map(|e| (e.from, e.to)).collect()
        };
        Cpdag::from_edges(p, &pick('d'), &pick('u')).map_err(|e| Error::Parse {
            path: origin.to_path_buf(),
            line: 0,
            msg: e.to_string(),
        })
    }

    pub fn write_edge_list(&self, path: &Path) -> Result<()> {
        write_string(path, &self.to_edge_list())
    }
}

impl WeightedAdjacency {
    pub fn to_csv(&self) -> String {
        let p = self.p();
        let mut s = String::new();
        for i in 0..p {
            let row: Vec<String> = (0..p).map(|j| format!("{}", self.get(i, j))).collect();
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }

    pub fn parse_csv(text: &str, origin: &Path) -> Result<WeightedAdjacency> {
        let mut values = Vec::new();
        let mut rows = 0;
        for (k, raw) in text.lines().enumerate() {
            let t = raw.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            for f in t.split(',') {
                let v: f64 = f.trim().parse().map_err(|_| Error::Parse {
                    path: origin.to_path_buf(),
                    line: k as u64 + 1,
                    msg: format!("'{f}' is not a number"),
                })?;
                values.push(v);
            }
            rows += 1;
        }
        WeightedAdjacency::new(rows, values)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_string(path, &self.to_csv())
    }
}
