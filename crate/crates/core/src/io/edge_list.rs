//! Whitespace-separated edge lists: `source target [weight]` per line.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{EdgeRecord, Graph, GraphBuilder};

fn is_comment(line: &str) -> bool {
    line.starts_with('#') || line.starts_with('%')
}

/// Parse edge-list text. `origin` only labels error messages.
///
/// A weight column is always validated; it is used only when `weighted` is
/// set, otherwise every edge counts 1.
pub fn parse_edge_list(text: &str, origin: &Path, directed: bool, weighted: bool) -> Result<Graph> {
    let _ = directed; // both orientations fold into one undirected edge
    let mut builder = GraphBuilder::new();
    let mut records = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || is_comment(line) {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let (source, target, weight) = match fields.as_slice() {
            [s, t] => (*s, *t, 1.0),
            [s, t, w] => {
                let w: f64 = w
                    .parse()
                    .map_err(|_| Error::parse(origin, line_no, format!("non-numeric weight {w:?}")))?;
                (*s, *t, w)
            }
            _ => {
                return Err(Error::parse(
                    origin,
                    line_no,
                    format!("expected `source target [weight]`, found {} fields", fields.len()),
                ))
            }
        };
        if !(weight.is_finite() && weight > 0.0) {
            return Err(Error::parse(
                origin,
                line_no,
                format!("weight must be positive, got {weight}"),
            ));
        }
        let record = EdgeRecord::new(source, target, if weighted { weight } else { 1.0 });
        builder
            .add_record(&record)
            .map_err(|e| Error::parse(origin, line_no, e.to_string()))?;
        records += 1;
    }
    if records == 0 {
        return Err(Error::parse(origin, 0, "edge list contains no edges"));
    }
    Ok(builder.build())
}

pub fn load_edge_list(path: impl AsRef<Path>, directed: bool, weighted: bool) -> Result<Graph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(&text, path, directed, weighted)
}

/// Render every edge once as `source target weight`. Weights use the
/// shortest round-trip representation, so reloading reproduces them exactly.
/// Isolated nodes have no edge-list form and are dropped.
pub fn format_edge_list(g: &Graph) -> String {
    let names = g.node_names();
    let mut out = String::new();
    for (i, j, w) in g.edges() {
        let _ = writeln!(out, "{} {} {}", names[i], names[j], w);
    }
    out
}

pub fn write_edge_list(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_edge_list(g)).map_err(|e| Error::io(path, e))
}
