//! Benchmark harness: run one method over a parameter sweep on a dataset and
//! score every point.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Deserializer, Serialize};

use crate::baselines::{girvan_newman, label_propagation, louvain, spectral_ncut, RngSeed};
use crate::error::{Error, Result};
use crate::io::Dataset;
use crate::metrics::{modularity, nmi, MetricKind, MetricValue};
use crate::partition::Partition;
use crate::shift::{gaussian_kernel, graph_to_distance, medoid_shift, rms};
use crate::similarity::SimilarityMode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Rms,
    MedoidShift,
    Louvain,
    LabelPropagation,
    GirvanNewman,
    Spectral,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Rms,
        Method::MedoidShift,
        Method::Louvain,
        Method::LabelPropagation,
        Method::GirvanNewman,
        Method::Spectral,
    ];

    pub fn is_stochastic(self) -> bool {
        matches!(self, Method::Louvain | Method::LabelPropagation | Method::Spectral)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Rms => "rms",
            Method::MedoidShift => "medoid-shift",
            Method::Louvain => "louvain",
            Method::LabelPropagation => "label-propagation",
            Method::GirvanNewman => "girvan-newman",
            Method::Spectral => "spectral",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL.into_iter().find(|m| m.as_str() == s).ok_or_else(|| {
            let known: Vec<&str> = Method::ALL.iter().map(|m| m.as_str()).collect();
            Error::InvalidParameter(format!("unknown method {s:?} (expected one of {})", known.join(", ")))
        })
    }
}

/// A list of integer parameter values, written as a single integer, an array,
/// or an inclusive range string `"3..10"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sweep(pub Vec<u64>);

impl FromStr for Sweep {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("bad sweep {s:?}, expected N, \"A..B\" or a list"));
        let values = match s.split_once("..") {
            Some((a, b)) => {
                let a: u64 = a.trim().parse().map_err(|_| bad())?;
                let b: u64 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
                if a > b {
                    return Err(bad());
                }
                (a..=b).collect()
            }
            None => s
                .split(',')
                .map(|t| t.trim().parse().map_err(|_| bad()))
                .collect::<Result<Vec<u64>>>()?,
        };
        Ok(Sweep(values))
    }
}

impl<'de> Deserialize<'de> for Sweep {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            One(u64),
            Many(Vec<u64>),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::One(v) => Ok(Sweep(vec![v])),
            Raw::Many(v) => Ok(Sweep(v)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

fn default_resolution() -> f64 {
    1.0
}

fn default_max_sweeps() -> usize {
    100
}

/// One method on one dataset, possibly sweeping `k`, `num_clusters` and
/// `seeds`. Parameters that do not apply to the method are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    /// Label used in diagnostics; defaults to `dataset/method`.
    #[serde(default)]
    pub name: Option<String>,
    pub dataset: String,
    pub method: Method,
    #[serde(default)]
    pub metrics: Vec<MetricKind>,
    /// Neighborhood sizes (rms).
    #[serde(default)]
    pub k: Option<Sweep>,
    /// Cluster counts (spectral).
    #[serde(default)]
    pub num_clusters: Option<Sweep>,
    /// Similarity for rms; weighted graphs default to edge weights, others to
    /// common neighbors.
    #[serde(default)]
    pub similarity: Option<SimilarityMode>,
    #[serde(default = "default_resolution")]
    pub resolution: f64,
    /// Seeds for stochastic methods; defaults to `[0]`.
    #[serde(default)]
    pub seeds: Option<Sweep>,
    #[serde(default = "default_max_sweeps")]
    pub max_sweeps: usize,
    /// Girvan–Newman: stop at the first snapshot with this many communities.
    #[serde(default)]
    pub target: Option<usize>,
    /// Girvan–Newman: unit edge lengths.
    #[serde(default)]
    pub ignore_weights: bool,
}

impl ExperimentSpec {
    pub fn new(dataset: impl Into<String>, method: Method) -> Self {
        ExperimentSpec {
            name: None,
            dataset: dataset.into(),
            method,
            metrics: Vec::new(),
            k: None,
            num_clusters: None,
            similarity: None,
            resolution: default_resolution(),
            seeds: None,
            max_sweeps: default_max_sweeps(),
            target: None,
            ignore_weights: false,
        }
    }

    pub fn label(&self) -> String {
        self.name
            .clone()
            .unwrap_or_else(|| format!("{}/{}", self.dataset, self.method))
    }

    fn fail(&self, message: impl Into<String>) -> Error {
        Error::Experiment {
            spec: self.label(),
            message: message.into(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.method;
        let only = |set: bool, param: &str, allowed: &[Method]| {
            if set && !allowed.contains(&m) {
                Err(self.fail(format!("`{param}` is not a parameter of {m}")))
            } else {
                Ok(())
            }
        };
        only(self.k.is_some(), "k", &[Method::Rms])?;
        only(self.similarity.is_some(), "similarity", &[Method::Rms])?;
        only(self.num_clusters.is_some(), "num_clusters", &[Method::Spectral])?;
        only(
            self.resolution != default_resolution(),
            "resolution",
            &[Method::Louvain],
        )?;
        only(
            self.max_sweeps != default_max_sweeps(),
            "max_sweeps",
            &[Method::LabelPropagation],
        )?;
        only(self.target.is_some(), "target", &[Method::GirvanNewman])?;
        only(self.ignore_weights, "ignore_weights", &[Method::GirvanNewman])?;
        if self.seeds.is_some() && !m.is_stochastic() {
            return Err(self.fail(format!("{m} is deterministic and takes no seeds")));
        }
        for (name, sweep) in [
            ("k", &self.k),
            ("num_clusters", &self.num_clusters),
            ("seeds", &self.seeds),
        ] {
            if sweep.as_ref().is_some_and(|s| s.0.is_empty()) {
                return Err(self.fail(format!("`{name}` sweep is empty")));
            }
        }
        match m {
            Method::Rms => {
                let k = self.k.as_ref().ok_or_else(|| self.fail("rms needs `k`"))?;
                if k.0.contains(&0) {
                    return Err(self.fail("k must be at least 1"));
                }
            }
            Method::Spectral => {
                let c = self
                    .num_clusters
                    .as_ref()
                    .ok_or_else(|| self.fail("spectral needs `num_clusters`"))?;
                if c.0.iter().any(|&v| v < 2) {
                    return Err(self.fail("num_clusters must be at least 2"));
                }
            }
            Method::Louvain if !(self.resolution.is_finite() && self.resolution > 0.0) => {
                return Err(self.fail("resolution must be positive"));
            }
            Method::LabelPropagation if self.max_sweeps == 0 => {
                return Err(self.fail("max_sweeps must be at least 1"));
            }
            Method::GirvanNewman if self.target == Some(0) => {
                return Err(self.fail("target must be at least 1"));
            }
            _ => {}
        }
        Ok(())
    }

    fn seeds(&self) -> Vec<Option<u64>> {
        if self.method.is_stochastic() {
            self.seeds
                .as_ref()
                .map_or(vec![Some(0)], |s| s.0.iter().copied().map(Some).collect())
        } else {
            vec![None]
        }
    }

    fn structural(&self) -> Vec<Option<u64>> {
        let sweep = match self.method {
            Method::Rms => self.k.as_ref(),
            Method::Spectral => self.num_clusters.as_ref(),
            _ => None,
        };
        sweep.map_or(vec![None], |s| s.0.iter().copied().map(Some).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordKind {
    /// One parameter point.
    Point,
    /// The point with the best selection metric.
    Best,
    /// Average over seeds at one structural parameter.
    Mean,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub dataset: String,
    pub method: Method,
    pub record: RecordKind,
    /// `key=value` pairs joined with `;`.
    pub params: String,
    /// Community count (mean over seeds for a mean record).
    pub communities: f64,
    /// Community sizes in label order; empty for mean records.
    pub sizes: Vec<usize>,
    pub metrics: Vec<MetricValue>,
    /// Algorithm time only, excluding loading and scoring.
    pub runtime_ms: Option<f64>,
    /// Label propagation: whether it settled before `max_sweeps`.
    pub converged: Option<bool>,
    /// The partition behind a point or best record.
    #[serde(skip)]
    pub partition: Option<Partition>,
}

impl ExperimentResult {
    pub fn metric(&self, kind: MetricKind) -> Option<f64> {
        self.metrics.iter().find(|m| m.kind == kind).map(|m| m.value)
    }

    /// `params` with the record kind prefixed for best and mean records.
    pub fn params_label(&self) -> String {
        match self.record {
            RecordKind::Point => self.params.clone(),
            RecordKind::Best => format!("best:{}", self.params),
            RecordKind::Mean => format!("mean:{}", self.params),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    /// Record wall-clock runtime. Off gives byte-reproducible output.
    pub record_runtime: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { record_runtime: true }
    }
}

struct Point {
    structural: Option<u64>,
    seed: Option<u64>,
    partition: Partition,
    runtime_ms: f64,
    converged: Option<bool>,
    selection: f64,
    metrics: Vec<MetricValue>,
}

fn run_once(
    spec: &ExperimentSpec,
    ds: &Dataset,
    structural: Option<u64>,
    seed: Option<u64>,
) -> Result<(Partition, Option<bool>)> {
    let g = &ds.graph;
    let seed = RngSeed(seed.unwrap_or(0));
    let n = |v: Option<u64>| v.unwrap_or(0) as usize;
    Ok(match spec.method {
        Method::Rms => {
            let weighted = g.edges().any(|(_, _, w)| w != 1.0);
            let mode = spec.similarity.unwrap_or(if weighted {
                SimilarityMode::Weighted
            } else {
                SimilarityMode::CommonNeighbor
            });
            (rms(g, mode, n(structural))?.partition, None)
        }
        Method::MedoidShift => (medoid_shift(&graph_to_distance(g), gaussian_kernel), None),
        Method::Louvain => (louvain(g, spec.resolution, seed)?, None),
        Method::LabelPropagation => {
            let r = label_propagation(g, seed, spec.max_sweeps)?;
            (r.partition, Some(r.converged))
        }
        Method::GirvanNewman => {
            let (_, p) = if spec.ignore_weights {
                girvan_newman(&g.unweighted(), spec.target)?
            } else {
                girvan_newman(g, spec.target)?
            };
            (p, None)
        }
        Method::Spectral => (spectral_ncut(g, n(structural), seed)?, None),
    })
}

fn score(kind: MetricKind, ds: &Dataset, p: &Partition) -> Result<MetricValue> {
    let (value, reference) = match kind {
        MetricKind::Modularity => (modularity(&ds.graph, p)?, None),
        MetricKind::Nmi => {
            let gt = ds
                .ground_truth
                .as_ref()
                .ok_or_else(|| Error::Dataset(format!("{} has no ground truth for nmi", ds.name)))?;
            (nmi(p, gt)?, Some(gt.community_count()))
        }
    };
    Ok(MetricValue {
        kind,
        value,
        communities: p.community_count(),
        reference_communities: reference,
        node_count: p.len(),
    })
}

fn params_string(spec: &ExperimentSpec, structural: Option<u64>, seed: Option<u64>) -> String {
    let mut parts = Vec::new();
    match spec.method {
        Method::Rms => {
            parts.push(format!("k={}", structural.unwrap_or(0)));
            if let Some(s) = spec.similarity {
                parts.push(format!("similarity={s}"));
            }
        }
        Method::Spectral => parts.push(format!("num_clusters={}", structural.unwrap_or(0))),
        Method::Louvain => parts.push(format!("resolution={}", spec.resolution)),
        Method::LabelPropagation => parts.push(format!("max_sweeps={}", spec.max_sweeps)),
        Method::GirvanNewman => {
            if let Some(t) = spec.target {
                parts.push(format!("target={t}"));
            }
            if spec.ignore_weights {
                parts.push("unweighted".to_string());
            }
        }
        Method::MedoidShift => parts.push("kernel=gaussian".to_string()),
    }
    if let Some(s) = seed {
        parts.push(format!("seed={s}"));
    }
    if parts.is_empty() {
        "default".to_string()
    } else {
        parts.join(";")
    }
}

/// Metric used to pick the best point: NMI with ground truth, else modularity.
pub fn selection_metric(ds: &Dataset) -> MetricKind {
    if ds.ground_truth.is_some() {
        MetricKind::Nmi
    } else {
        MetricKind::Modularity
    }
}

/// Run `spec` on an already loaded dataset.
///
/// Emits one point record per (structural parameter, seed), in sweep order;
/// then, when more than one seed was run, a mean record per structural value;
/// then, when more than one point was run, the best point (ties go to the
/// smallest parameters).
pub fn run_experiment(spec: &ExperimentSpec, ds: &Dataset, options: RunOptions) -> Result<Vec<ExperimentResult>> {
    spec.validate()?;
    let metrics = if spec.metrics.is_empty() {
        vec![selection_metric(ds)]
    } else {
        let mut m = spec.metrics.clone();
        m.sort();
        m.dedup();
        m
    };
    if metrics.contains(&MetricKind::Nmi) && ds.ground_truth.is_none() {
        return Err(spec.fail(format!("nmi requested but {} has no ground truth", ds.name)));
    }
    let selector = selection_metric(ds);
    let wrap = |e: Error| spec.fail(e.to_string());

    let mut points = Vec::new();
    for structural in spec.structural() {
        for seed in spec.seeds() {
            let start = Instant::now();
            let (partition, converged) = run_once(spec, ds, structural, seed).map_err(wrap)?;
            let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
            let selection = score(selector, ds, &partition).map_err(wrap)?.value;
            let metrics = metrics
                .iter()
                .map(|&k| score(k, ds, &partition))
                .collect::<Result<Vec<_>>>()
                .map_err(wrap)?;
            points.push(Point {
                structural,
                seed,
                partition,
                runtime_ms,
                converged,
                selection,
                metrics,
            });
        }
    }

    let runtime = |ms: f64| options.record_runtime.then_some(ms);
    let record = |p: &Point, kind: RecordKind| ExperimentResult {
        dataset: ds.name.clone(),
        method: spec.method,
        record: kind,
        params: params_string(spec, p.structural, p.seed),
        communities: p.partition.community_count() as f64,
        sizes: p.partition.sizes(),
        metrics: p.metrics.clone(),
        runtime_ms: runtime(p.runtime_ms),
        converged: p.converged,
        partition: Some(p.partition.clone()),
    };

    let mut out: Vec<ExperimentResult> = points.iter().map(|p| record(p, RecordKind::Point)).collect();

    let seeds = spec.seeds();
    if seeds.len() > 1 {
        for chunk in points.chunks(seeds.len()) {
            let count = chunk.len() as f64;
            let mean = |f: &dyn Fn(&Point) -> f64| chunk.iter().map(f).sum::<f64>() / count;
            let communities = mean(&|p| p.partition.community_count() as f64);
            let metrics = (0..metrics.len())
                .map(|i| MetricValue {
                    value: mean(&|p| p.metrics[i].value),
                    communities: communities.round() as usize,
                    ..chunk[0].metrics[i].clone()
                })
                .collect();
            let mut params = params_string(spec, chunk[0].structural, None);
            let listed: Vec<String> = seeds.iter().flatten().map(u64::to_string).collect();
            params = if params == "default" {
                format!("seeds={}", listed.join(","))
            } else {
                format!("{params};seeds={}", listed.join(","))
            };
            out.push(ExperimentResult {
                dataset: ds.name.clone(),
                method: spec.method,
                record: RecordKind::Mean,
                params,
                communities,
                sizes: Vec::new(),
                metrics,
                runtime_ms: runtime(mean(&|p| p.runtime_ms)),
                converged: chunk
                    .iter()
                    .map(|p| p.converged)
                    .collect::<Option<Vec<bool>>>()
                    .map(|c| c.iter().all(|&x| x)),
                partition: None,
            });
        }
    }

    if points.len() > 1 {
        let best = points
            .iter()
            .reduce(|best, p| {
                let better = p.selection > best.selection
                    || (p.selection == best.selection && (p.structural, p.seed) < (best.structural, best.seed));
                if better {
                    p
                } else {
                    best
                }
            })
            .expect("at least two points");
        out.push(record(best, RecordKind::Best));
    }
    Ok(out)
}
