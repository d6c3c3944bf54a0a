//! Non-overlapping reference communities keyed by node name.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroundTruth {
    // (node name, community label) in first-seen order, names unique
    entries: Vec<(String, String)>,
    index: HashMap<String, usize>,
}

impl GroundTruth {
    pub fn new() -> Self {
        Self::default()
    }

    /// Assign `name` to `label`. Repeating an identical assignment is a
    /// no-op; a second, different label is an overlap and fails.
    pub fn insert(&mut self, name: &str, label: &str) -> Result<()> {
        if let Some(&at) = self.index.get(name) {
            let existing = &self.entries[at].1;
            if existing == label {
                return Ok(());
            }
            return Err(Error::Format(format!(
                "node {name:?} appears in two communities ({existing:?} and {label:?})"
            )));
        }
        self.index.insert(name.to_string(), self.entries.len());
        self.entries.push((name.to_string(), label.to_string()));
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn label(&self, name: &str) -> Option<&str> {
        self.index.get(name).map(|&i| self.entries[i].1.as_str())
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(n, l)| (n.as_str(), l.as_str()))
    }

    pub fn community_count(&self) -> usize {
        let mut labels: Vec<&str> = self.entries.iter().map(|(_, l)| l.as_str()).collect();
        labels.sort_unstable();
        labels.dedup();
        labels.len()
    }

    /// Fraction of the graph's nodes that carry a label.
    pub fn coverage(&self, g: &Graph) -> f64 {
        if g.node_count() == 0 {
            return 0.0;
        }
        let labeled = g.node_names().iter().filter(|n| self.index.contains_key(*n)).count();
        labeled as f64 / g.node_count() as f64
    }

    /// Labeled names that are not nodes of `g`, in first-seen order.
    pub fn unresolved<'a>(&'a self, g: &Graph) -> Vec<&'a str> {
        let names = g.name_index();
        self.entries
            .iter()
            .map(|(n, _)| n.as_str())
            .filter(|n| !names.contains_key(n))
            .collect()
    }

    /// Total partition of `g`'s nodes. Unlabeled nodes become singletons;
    /// labeled names missing from the graph are an error listing them.
    pub fn resolve(&self, g: &Graph) -> Result<Partition> {
        let missing = self.unresolved(g);
        if !missing.is_empty() {
            return Err(Error::Dataset(format!(
                "ground truth names {} node(s) not in the graph: {}",
                missing.len(),
                missing.join(", ")
            )));
        }
        Ok(Partition::from_labels(g.node_names().iter().enumerate().map(
            |(i, n)| match self.label(n) {
                Some(l) => (Some(l), 0),
                None => (None, i),
            },
        )))
    }

    /// `g` with every labeled-but-absent name appended as an isolated node, so
    /// that `resolve` covers the whole reference set.
    pub fn extend_graph(&self, g: &Graph) -> Graph {
        g.with_isolated_nodes(self.unresolved(g))
    }
}

/// Parse either `node label` pairs (every line has exactly two fields) or one
/// community per line with whitespace-separated members. `#` and `%` start
/// comment lines.
pub fn parse_ground_truth(text: &str, origin: &Path) -> Result<GroundTruth> {
    let lines: Vec<(usize, Vec<&str>)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !(l.is_empty() || l.starts_with('#') || l.starts_with('%')))
        .map(|(i, l)| (i, l.split_whitespace().collect()))
        .collect();
    if lines.is_empty() {
        return Err(Error::parse(origin, 0, "ground truth file is empty"));
    }
    let pairs = lines.iter().all(|(_, f)| f.len() == 2);
    let mut gt = GroundTruth::new();
    for (community, (line_no, fields)) in lines.iter().enumerate() {
        let result = if pairs {
            gt.insert(fields[0], fields[1])
        } else {
            let label = community.to_string();
            fields.iter().try_for_each(|m| gt.insert(m, &label))
        };
        result.map_err(|e| Error::parse(origin, *line_no, e.to_string()))?;
    }
    Ok(gt)
}

pub fn load_ground_truth(path: impl AsRef<Path>) -> Result<GroundTruth> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_ground_truth(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, EdgeRecord};

    fn parse(text: &str) -> Result<GroundTruth> {
        parse_ground_truth(text, Path::new("mem"))
    }

    #[test]
    fn pair_format() {
        let gt = parse("a 0\nb 0\nc 1\n").unwrap();
        assert_eq!(gt.community_count(), 2);
        assert_eq!(gt.label("c"), Some("1"));
    }

    #[test]
    fn community_per_line() {
        let gt = parse("a b\nc\n").unwrap();
        assert_eq!(gt.label("a"), Some("0"));
        assert_eq!(gt.label("b"), Some("0"));
        assert_eq!(gt.label("c"), Some("1"));
        let gt = parse("a\tb\tc\n# next\nd\te\n").unwrap();
        assert_eq!(gt.community_count(), 2);
    }

    #[test]
    fn overlap_rejected() {
        assert!(matches!(parse("a 0\na 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(parse("a b c\nc d\n").is_err());
        // restating the same membership is fine
        assert_eq!(parse("a 0\na 0\n").unwrap().len(), 1);
    }

    #[test]
    fn resolve_against_graph() {
        let g = build_graph(&[EdgeRecord::unit("a", "b"), EdgeRecord::unit("b", "c")], false).unwrap();
        let gt = parse("a x\nb x\n").unwrap();
        assert!((gt.coverage(&g) - 2.0 / 3.0).abs() < 1e-15);
        let p = gt.resolve(&g).unwrap();
        assert_eq!(p.labels(), &[0, 0, 1]);

        let gt = parse("a x\nzz y\nqq y\n").unwrap();
        let err = gt.resolve(&g).unwrap_err().to_string();
        assert!(err.contains("zz") && err.contains("qq"), "{err}");
        let wide = gt.extend_graph(&g);
        assert_eq!(wide.node_count(), 5);
        assert_eq!(gt.resolve(&wide).unwrap().labels(), &[0, 1, 2, 3, 3]);
    }
}
