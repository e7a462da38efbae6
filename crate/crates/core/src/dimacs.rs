//! DIMACS edge-list format for undirected graphs:
//!
//! ```text
//! c optional comment
//! p edge <vertices> <edges>
//! e <u> <v>
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::reductions::Graph;

pub fn parse(text: &str) -> Result<Graph> {
    let mut header: Option<(u32, usize)> = None;
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let mut fields = line.split_whitespace();
        match fields.next() {
            None | Some("c") => {}
            Some("p") => {
                if header.is_some() {
                    return Err(Error::Format(format!("line {lineno}: duplicate 'p' line")));
                }
                if fields.next() != Some("edge") {
                    return Err(Error::Format(format!(
                        "line {lineno}: expected 'p edge <vertices> <edges>'"
                    )));
                }
                let n = number(fields.next(), lineno, "vertex count")?;
                let m = number(fields.next(), lineno, "edge count")?;
                header = Some((n, m as usize));
            }
            Some("e") => {
                let Some((n, _)) = header else {
                    return Err(Error::Format(format!("line {lineno}: 'e' before 'p' line")));
                };
                let u = number(fields.next(), lineno, "edge endpoint")?;
                let v = number(fields.next(), lineno, "edge endpoint")?;
                for x in [u, v] {
                    if x == 0 || x > n {
                        return Err(Error::Format(format!(
                            "line {lineno}: vertex {x} outside 1..={n}"
                        )));
                    }
                }
                if u == v {
                    return Err(Error::Format(format!("line {lineno}: loop at vertex {u}")));
                }
                edges.push((u, v));
            }
            Some(other) => {
                return Err(Error::Format(format!(
                    "line {lineno}: unknown line type '{other}'"
                )))
            }
        }
    }
    let (n, m) = header.ok_or_else(|| Error::Format("missing 'p edge' line".into()))?;
    if edges.len() != m {
        return Err(Error::Format(format!(
            "edge count: header declares {m}, found {} 'e' lines",
            edges.len()
        )));
    }
    Graph::new(n, edges)
}

fn number(field: Option<&str>, lineno: usize, what: &str) -> Result<u32> {
    let field = field.ok_or_else(|| Error::Format(format!("line {lineno}: missing {what}")))?;
    field
        .parse()
        .map_err(|_| Error::Format(format!("line {lineno}: {what} '{field}' is not a number")))
}

pub fn write(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.vertex_count(), g.edges().len());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "e {u} {v}");
    }
    out
}
