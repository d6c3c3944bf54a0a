//! Undirected weighted simple graph over dense node ids.
//!
//! Node ids are assigned in first-appearance order and the original string
//! names are kept for output. Self-loops are dropped at construction and
//! parallel (or opposite-direction) records are merged by summing weights.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};

/// One raw edge as read from a file. Direction is only meaningful when the
/// input is declared directed; either way both directions are aggregated.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeRecord {
    pub source: String,
    pub target: String,
    pub weight: f64,
}

impl EdgeRecord {
    pub fn new(source: impl Into<String>, target: impl Into<String>, weight: f64) -> Self {
        EdgeRecord {
            source: source.into(),
            target: target.into(),
            weight,
        }
    }

    pub fn unit(source: impl Into<String>, target: impl Into<String>) -> Self {
        Self::new(source, target, 1.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    node_names: Vec<String>,
    adjacency: Vec<Vec<(usize, f64)>>,
    total_weight: f64,
    edge_count: usize,
}

impl Graph {
    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// `2m`: every undirected edge weight counted twice.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn node_names(&self) -> &[String] {
        &self.node_names
    }

    pub fn node_name(&self, i: usize) -> Result<&str> {
        self.check(i)?;
        Ok(&self.node_names[i])
    }

    /// Linear scan; loaders keep their own index while building.
    pub fn node_id(&self, name: &str) -> Option<usize> {
        self.node_names.iter().position(|n| n == name)
    }

    pub fn name_index(&self) -> HashMap<&str, usize> {
        self.node_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect()
    }

    /// Weighted degree `k_i`.
    pub fn degree(&self, i: usize) -> Result<f64> {
        self.check(i)?;
        Ok(sorted_sum(self.adjacency[i].iter().map(|&(_, w)| w)))
    }

    /// Neighbors sorted by ascending id.
    pub fn neighbors(&self, i: usize) -> Result<&[(usize, f64)]> {
        self.check(i)?;
        Ok(&self.adjacency[i])
    }

    /// Unchecked neighbor access for hot loops inside the crate.
    pub(crate) fn adj(&self, i: usize) -> &[(usize, f64)] {
        &self.adjacency[i]
    }

    pub(crate) fn degrees(&self) -> Vec<f64> {
        self.adjacency
            .iter()
            .map(|row| sorted_sum(row.iter().map(|&(_, w)| w)))
            .collect()
    }

    /// Weight of edge (i, j), or `None` when not adjacent.
    pub fn weight(&self, i: usize, j: usize) -> Option<f64> {
        let row = self.adjacency.get(i)?;
        row.binary_search_by_key(&j, |&(n, _)| n).ok().map(|pos| row[pos].1)
    }

    /// Undirected edges as `(i, j, w)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().filter(move |&&(j, _)| j > i).map(move |&(j, w)| (i, j, w)))
    }

    /// Same topology with every weight replaced by 1.
    pub fn unweighted(&self) -> Graph {
        let adjacency: Vec<Vec<(usize, f64)>> = self
            .adjacency
            .iter()
            .map(|row| row.iter().map(|&(j, _)| (j, 1.0)).collect())
            .collect();
        let total_weight = (2 * self.edge_count) as f64;
        Graph {
            node_names: self.node_names.clone(),
            adjacency,
            total_weight,
            edge_count: self.edge_count,
        }
    }

    /// Copy of the graph with the named nodes appended as isolated nodes
    /// (names already present are ignored).
    pub fn with_isolated_nodes<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> Graph {
        let mut g = self.clone();
        let mut known: HashMap<String, usize> = self
            .node_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        for name in names {
            if !known.contains_key(name) {
                known.insert(name.to_string(), g.node_names.len());
                g.node_names.push(name.to_string());
                g.adjacency.push(Vec::new());
            }
        }
        g
    }

    fn check(&self, i: usize) -> Result<()> {
        if i < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                id: i,
                node_count: self.node_count(),
            })
        }
    }
}

/// Incremental construction. Nodes may be declared explicitly (for isolated
/// nodes or formats with node blocks) or implicitly by edges.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    names: Vec<String>,
    index: HashMap<String, usize>,
    // every contribution to an unordered pair, summed in sorted order at build
    // time so the result does not depend on record order
    pairs: BTreeMap<(usize, usize), Vec<f64>>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn add_node(&mut self, name: &str) -> Result<usize> {
        validate_name(name)?;
        Ok(self.intern(name))
    }

    pub fn add_record(&mut self, record: &EdgeRecord) -> Result<()> {
        for name in [&record.source, &record.target] {
            validate_name(name).map_err(|_| {
                Error::Graph(format!(
                    "malformed node id in record {} -> {} ({})",
                    describe(&record.source),
                    describe(&record.target),
                    record.weight
                ))
            })?;
        }
        if !(record.weight.is_finite() && record.weight > 0.0) {
            return Err(Error::Graph(format!(
                "non-positive weight {} in record {} -> {}",
                record.weight, record.source, record.target
            )));
        }
        let s = self.intern(&record.source);
        let t = self.intern(&record.target);
        if s != t {
            let key = (s.min(t), s.max(t));
            self.pairs.entry(key).or_default().push(record.weight);
        }
        Ok(())
    }

    pub fn build(self) -> Graph {
        let n = self.names.len();
        let mut adjacency: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for ((i, j), mut weights) in self.pairs {
            weights.sort_by(f64::total_cmp);
            let w: f64 = weights.iter().sum();
            adjacency[i].push((j, w));
            adjacency[j].push((i, w));
        }
        let mut edge_count = 0;
        for row in &mut adjacency {
            row.sort_by_key(|&(j, _)| j);
            edge_count += row.len();
        }
        let total_weight = 2.0
            * sorted_sum(
                adjacency
                    .iter()
                    .enumerate()
                    .flat_map(|(i, row)| row.iter().filter(move |&&(j, _)| j > i).map(|&(_, w)| w)),
            );
        Graph {
            node_names: self.names,
            adjacency,
            total_weight,
            edge_count: edge_count / 2,
        }
    }

    fn intern(&mut self, name: &str) -> usize {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        id
    }
}

/// Sum in ascending order, so the result does not depend on node ids.
fn sorted_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    v.iter().sum()
}

fn validate_name(name: &str) -> Result<()> {
    if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c.is_control()) {
        Err(Error::Graph(format!("malformed node id {}", describe(name))))
    } else {
        Ok(())
    }
}

fn describe(name: &str) -> String {
    format!("{name:?}")
}

/// Build an undirected simple graph from raw records.
///
/// For directed input the weights of `a -> b` and `b -> a` are summed into a
/// single undirected edge; for undirected input parallel records are summed.
/// Both cases therefore reduce to summing every record on an unordered pair.
pub fn build_graph(records: &[EdgeRecord], directed_input: bool) -> Result<Graph> {
    let _ = directed_input;
    if records.is_empty() {
        return Err(Error::Graph("empty record set".into()));
    }
    let mut builder = GraphBuilder::new();
    for r in records {
        builder.add_record(r)?;
    }
    Ok(builder.build())
}
