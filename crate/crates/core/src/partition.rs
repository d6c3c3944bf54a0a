use std::collections::HashMap;
use std::hash::Hash;

/// Total assignment of nodes to communities, numbered `0..community_count`
/// in order of first appearance.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    labels: Vec<usize>,
    community_count: usize,
}

impl Partition {
    /// Canonicalize arbitrary labels.
    pub fn from_labels<L: Eq + Hash>(raw: impl IntoIterator<Item = L>) -> Self {
        let mut map: HashMap<L, usize> = HashMap::new();
        let labels: Vec<usize> = raw
            .into_iter()
            .map(|l| {
                let next = map.len();
                *map.entry(l).or_insert(next)
            })
            .collect();
        Partition {
            community_count: map.len(),
            labels,
        }
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            labels: (0..n).collect(),
            community_count: n,
        }
    }

    pub fn all_in_one(n: usize) -> Self {
        Partition {
            labels: vec![0; n],
            community_count: usize::from(n > 0),
        }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn community_count(&self) -> usize {
        self.community_count
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.community_count];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    /// Members of each community, ascending.
    pub fn communities(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.community_count];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l].push(i);
        }
        out
    }
}
