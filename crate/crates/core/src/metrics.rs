//! Partition quality: Newman–Girvan modularity and normalized mutual
//! information.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Modularity,
    Nmi,
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetricKind::Modularity => "modularity",
            MetricKind::Nmi => "nmi",
        })
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "modularity" | "q" => Ok(MetricKind::Modularity),
            "nmi" => Ok(MetricKind::Nmi),
            other => Err(Error::InvalidParameter(format!("unknown metric {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricValue {
    pub kind: MetricKind,
    pub value: f64,
    /// Communities in the evaluated partition (and in the reference, for NMI).
    pub communities: usize,
    pub reference_communities: Option<usize>,
    pub node_count: usize,
}

/// Weighted modularity `Σ_c [w_c / m − (d_c / 2m)²]`, with `w_c` the
/// intra-community weight counted once and `d_c` the community's total degree.
/// A graph with no edges has modularity 0.
pub fn modularity(g: &Graph, p: &Partition) -> Result<f64> {
    modularity_with_resolution(g, p, 1.0)
}

pub(crate) fn modularity_with_resolution(g: &Graph, p: &Partition, resolution: f64) -> Result<f64> {
    let n = g.node_count();
    if p.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: p.len(),
        });
    }
    let two_m = g.total_weight();
    if two_m == 0.0 {
        return Ok(0.0);
    }
    let c = p.community_count();
    let mut internal = vec![0.0; c];
    let mut total = vec![0.0; c];
    for i in 0..n {
        let ci = p.label(i);
        for &(j, w) in g.adj(i) {
            total[ci] += w;
            if p.label(j) == ci {
                // each internal edge is seen from both ends
                internal[ci] += w;
            }
        }
    }
    let q = internal
        .iter()
        .zip(&total)
        .map(|(&inside, &deg)| inside / two_m - resolution * (deg / two_m).powi(2))
        .sum();
    Ok(q)
}

fn entropy(counts: &[usize], n: f64) -> f64 {
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// `2 I(A;B) / (H(A) + H(B))` with natural logarithms. Two trivial partitions
/// score 1; exactly one trivial partition scores 0.
pub fn nmi(a: &Partition, b: &Partition) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    let n = a.len();
    if n == 0 {
        return Ok(1.0);
    }
    let (ka, kb) = (a.community_count(), b.community_count());
    let mut table = vec![0usize; ka * kb];
    for i in 0..n {
        table[a.label(i) * kb + b.label(i)] += 1;
    }
    let rows = a.sizes();
    let cols = b.sizes();
    let nf = n as f64;
    let (ha, hb) = (entropy(&rows, nf), entropy(&cols, nf));

    if ha == 0.0 && hb == 0.0 {
        return Ok(1.0);
    }
    if ha == 0.0 || hb == 0.0 {
        return Ok(0.0);
    }
    // identical up to relabeling: one nonzero cell per row and per column
    if ka == kb && table.iter().filter(|&&c| c > 0).count() == ka {
        return Ok(1.0);
    }

    let mut terms = Vec::new();
    for r in 0..ka {
        for c in 0..kb {
            let nij = table[r * kb + c];
            if nij == 0 {
                continue;
            }
            let nij = nij as f64;
            terms.push(nij / nf * (nf * nij / (rows[r] as f64 * cols[c] as f64)).ln());
        }
    }
    // summing in sorted order makes nmi(a, b) == nmi(b, a) bit for bit
    terms.sort_by(f64::total_cmp);
    let mi: f64 = terms.iter().sum();
    Ok((2.0 * mi / (ha + hb)).clamp(0.0, 1.0))
}

pub const BRUTE_FORCE_MAX_NODES: usize = 10;

/// Exhaustive search over every set partition (restricted growth strings).
/// Ties keep the first partition in enumeration order, which starts from the
/// all-in-one partition.
pub fn brute_force_best_modularity(g: &Graph) -> Result<(Partition, f64)> {
    let n = g.node_count();
    if n > BRUTE_FORCE_MAX_NODES {
        return Err(Error::InvalidParameter(format!(
            "exhaustive modularity search supports at most {BRUTE_FORCE_MAX_NODES} nodes, got {n}"
        )));
    }
    let mut rgs = vec![0usize; n];
    let mut best = (Partition::all_in_one(n), modularity(g, &Partition::all_in_one(n))?);
    while next_rgs(&mut rgs) {
        let p = Partition::from_labels(rgs.iter().copied());
        let q = modularity(g, &p)?;
        if q > best.1 {
            best = (p, q);
        }
    }
    Ok(best)
}

/// Advance a restricted growth string in place; false after the last one.
fn next_rgs(a: &mut [usize]) -> bool {
    let n = a.len();
    for i in (1..n).rev() {
        let max_prefix = a[..i].iter().copied().max().unwrap_or(0);
        if a[i] <= max_prefix {
            a[i] += 1;
            for x in &mut a[i + 1..] {
                *x = 0;
            }
            return true;
        }
    }
    false
}
