//! Dataset manifest: where each benchmark corpus lives, how to parse it and
//! the checksum it must match before use.

use std::env;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::edge_list::load_edge_list;
use super::gml::load_gml;
use super::ground_truth::{load_ground_truth, GroundTruth};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

/// Overrides the directory dataset paths are resolved against.
pub const DATA_DIR_ENV: &str = "COMMDET_DATA_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetFormat {
    #[serde(alias = "edge-list")]
    Edgelist,
    Gml,
}

impl fmt::Display for DatasetFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DatasetFormat::Edgelist => "edgelist",
            DatasetFormat::Gml => "gml",
        })
    }
}

impl FromStr for DatasetFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edgelist" | "edge-list" => Ok(DatasetFormat::Edgelist),
            "gml" => Ok(DatasetFormat::Gml),
            other => Err(Error::InvalidParameter(format!("unknown graph format {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetEntry {
    pub name: String,
    /// Graph file, relative to the data directory.
    pub path: PathBuf,
    pub format: DatasetFormat,
    #[serde(default)]
    pub directed: bool,
    #[serde(default)]
    pub weighted: bool,
    /// Separate ground-truth file; GML node values are used when absent.
    #[serde(default)]
    pub ground_truth: Option<PathBuf>,
    #[serde(default)]
    pub ground_truth_sha256: Option<String>,
    /// Where the file comes from (documentation only).
    #[serde(default)]
    pub source: String,
    /// Lower-case hex SHA-256 of the graph file. Entries without one cannot
    /// be loaded.
    #[serde(default)]
    pub sha256: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestFile {
    #[serde(default, rename = "dataset")]
    datasets: Vec<DatasetEntry>,
}

/// A loaded corpus, ready for the experiment harness.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub name: String,
    pub graph: Graph,
    /// Reference partition over every node of `graph`.
    pub ground_truth: Option<Partition>,
}

impl Dataset {
    /// Attach a ground truth, appending labeled-but-absent names to the graph
    /// as isolated nodes.
    pub fn new(name: impl Into<String>, graph: Graph, truth: Option<&GroundTruth>) -> Result<Self> {
        let (graph, ground_truth) = match truth {
            Some(gt) => {
                let graph = gt.extend_graph(&graph);
                let p = gt.resolve(&graph)?;
                (graph, Some(p))
            }
            None => (graph, None),
        };
        Ok(Dataset {
            name: name.into(),
            graph,
            ground_truth,
        })
    }
}

#[derive(Debug, Clone)]
pub struct DatasetManifest {
    entries: Vec<DatasetEntry>,
    data_dir: PathBuf,
}

/// 1-based line of a byte offset.
fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

fn verify(path: &Path, expected: Option<&str>, name: &str) -> Result<()> {
    let Some(expected) = expected else {
        return Err(Error::Dataset(format!(
            "{name}: no pinned sha256 for {}; refusing to load an unverified file",
            path.display()
        )));
    };
    let found = sha256_file(path)?;
    if !found.eq_ignore_ascii_case(expected) {
        return Err(Error::Checksum {
            path: path.to_path_buf(),
            expected: expected.to_string(),
            found,
        });
    }
    Ok(())
}

impl DatasetManifest {
    /// Parse manifest text. Relative dataset paths resolve against `data_dir`.
    pub fn parse(text: &str, origin: &Path, data_dir: impl Into<PathBuf>) -> Result<Self> {
        let file: ManifestFile = toml::from_str(text).map_err(|e| {
            let line = e.span().map_or(0, |s| line_of(text, s.start));
            Error::parse(origin, line, e.message().to_string())
        })?;
        let mut seen = std::collections::HashSet::new();
        for d in &file.datasets {
            if !seen.insert(d.name.as_str()) {
                return Err(Error::parse(origin, 0, format!("dataset {:?} listed twice", d.name)));
            }
        }
        Ok(DatasetManifest {
            entries: file.datasets,
            data_dir: data_dir.into(),
        })
    }

    /// Read a manifest. The data directory is `$COMMDET_DATA_DIR` when set,
    /// otherwise the manifest's own directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let data_dir = match env::var_os(DATA_DIR_ENV) {
            Some(dir) => PathBuf::from(dir),
            None => path.parent().map(Path::to_path_buf).unwrap_or_default(),
        };
        Self::parse(&text, path, data_dir)
    }

    pub fn with_data_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.data_dir = dir.into();
        self
    }

    pub fn data_dir(&self) -> &Path {
        &self.data_dir
    }

    pub fn entries(&self) -> &[DatasetEntry] {
        &self.entries
    }

    pub fn entry(&self, name: &str) -> Result<&DatasetEntry> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| Error::Dataset(format!("{name:?} is not in the manifest")))
    }

    pub fn resolve_path(&self, p: &Path) -> PathBuf {
        self.data_dir.join(p)
    }

    /// Whether the graph file for `name` is present on disk.
    pub fn is_available(&self, name: &str) -> bool {
        self.entry(name).is_ok_and(|e| self.resolve_path(&e.path).is_file())
    }

    /// Verify checksums, then load the graph and its ground truth.
    pub fn load_dataset(&self, name: &str) -> Result<Dataset> {
        let entry = self.entry(name)?;
        let path = self.resolve_path(&entry.path);
        if !path.is_file() {
            return Err(Error::Dataset(format!(
                "{name} unavailable: {} not found (see scripts/fetch_datasets.sh)",
                path.display()
            )));
        }
        verify(&path, entry.sha256.as_deref(), name)?;
        let (graph, embedded) = match entry.format {
            DatasetFormat::Edgelist => (load_edge_list(&path, entry.directed, entry.weighted)?, None),
            DatasetFormat::Gml => load_gml(&path)?,
        };
        let graph = if entry.weighted { graph } else { graph.unweighted() };
        let truth = match &entry.ground_truth {
            Some(gt) => {
                let gt_path = self.resolve_path(gt);
                verify(&gt_path, entry.ground_truth_sha256.as_deref(), name)?;
                Some(load_ground_truth(&gt_path)?)
            }
            None => embedded,
        };
        Dataset::new(name, graph, truth.as_ref())
    }
}
