//! End-to-end experiments.
//!
//! Every task turns one or two corpora into tables (CSV or JSON), Unmasking
//! curves and figures where applicable, and a manifest recording the
//! configuration, seeds, input checksums and output checksums. A run is fully
//! determined by its inputs, spec and seed.

mod model;
mod pipeline;
mod tables;
mod tasks;

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::corpus::{Corpus, CorpusError};
use crate::features::{FeatureConfig, FeatureError};
use crate::learn::{ForestConfig, LearnError};
use crate::unmasking::{curve_csv, UnmaskingConfig, UnmaskingCurve, UnmaskingError};

pub use model::{corpus_vocabulary, export_features, labelled, predict_corpus, select, train_model, LabelScheme};
pub use tables::{score_table, Cell, ScoreRow, Table};
pub use tasks::{
    run_hyperpartisan_binary, run_hyperpartisan_omission, run_orientation, run_satire, run_unmasking_suite,
    run_veracity, ClassificationResult, OmissionResult, OmissionRow, OrderingCheck, OrientationResult,
    SatireResult, ShareRow, SlopeRow, UnmaskingSuite, VeracityResult, RUBIN_REFERENCE,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Features(#[from] FeatureError),
    #[error(transparent)]
    Learn(#[from] LearnError),
    #[error(transparent)]
    Unmasking(#[from] UnmaskingError),
    #[error("corpus lacks articles for: {0}")]
    MissingCategories(String),
    #[error("task {0} needs a corpus")]
    NoCorpus(Task),
    #[error("assertion failed: {0}")]
    Assertion(String),
    #[error("config: {0}")]
    Config(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl HarnessError {
    /// 1 usage, 2 data, 3 assertion or leakage.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) | HarnessError::NoCorpus(_) => 1,
            HarnessError::Assertion(_)
            | HarnessError::Learn(LearnError::TestLeak(_) | LearnError::Leakage { .. }) => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    HyperpartisanOmission,
    HyperpartisanBinary,
    #[serde(rename = "orientation_3class")]
    Orientation3Class,
    VeracityGeneric,
    VeracityOrientationSpecific,
    Satire,
    UnmaskOrientations,
    UnmaskSatire,
}

impl Task {
    pub const ALL: [Task; 8] = [
        Task::HyperpartisanOmission,
        Task::HyperpartisanBinary,
        Task::Orientation3Class,
        Task::VeracityGeneric,
        Task::VeracityOrientationSpecific,
        Task::Satire,
        Task::UnmaskOrientations,
        Task::UnmaskSatire,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Task::HyperpartisanOmission => "hyperpartisan_omission",
            Task::HyperpartisanBinary => "hyperpartisan_binary",
            Task::Orientation3Class => "orientation_3class",
            Task::VeracityGeneric => "veracity_generic",
            Task::VeracityOrientationSpecific => "veracity_orientation_specific",
            Task::Satire => "satire",
            Task::UnmaskOrientations => "unmask_orientations",
            Task::UnmaskSatire => "unmask_satire",
        }
    }

    pub fn is_unmasking(self) -> bool {
        matches!(self, Task::UnmaskOrientations | Task::UnmaskSatire)
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Task::ALL.into_iter().find(|t| t.as_str() == s).ok_or_else(|| {
            let names: Vec<&str> = Task::ALL.iter().map(|t| t.as_str()).collect();
            format!("unknown task {s:?} (expected one of {})", names.join(", "))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureModel {
    Style,
    Topic,
}

impl FeatureModel {
    pub fn as_str(self) -> &'static str {
        match self {
            FeatureModel::Style => "style",
            FeatureModel::Topic => "topic",
        }
    }
}

impl FromStr for FeatureModel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "style" => Ok(FeatureModel::Style),
            "topic" => Ok(FeatureModel::Topic),
            _ => Err(format!("unknown feature model {s:?} (expected style|topic)")),
        }
    }
}

/// How the two wing classifiers of the orientation-specific veracity task
/// are combined into one row.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    /// Merge both wings' predictions per fold, then evaluate.
    #[default]
    Pooled,
    /// Evaluate each wing separately and average their metrics.
    Averaged,
}

/// Feature selection knobs shared by the style and topic models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Selection {
    pub ngram_min: usize,
    pub ngram_max: usize,
    pub min_doc_fraction: f64,
    pub min_categories: usize,
}

impl Default for Selection {
    fn default() -> Self {
        let d = FeatureConfig::style();
        Self {
            ngram_min: d.ngram_min,
            ngram_max: d.ngram_max,
            min_doc_fraction: d.min_doc_fraction,
            min_categories: d.min_categories,
        }
    }
}

impl Selection {
    pub fn feature_config(&self, model: FeatureModel) -> FeatureConfig {
        let base = match model {
            FeatureModel::Style => FeatureConfig::style(),
            FeatureModel::Topic => FeatureConfig::topic(),
        };
        FeatureConfig {
            ngram_min: self.ngram_min,
            ngram_max: self.ngram_max,
            min_doc_fraction: self.min_doc_fraction,
            min_categories: self.min_categories,
            ..base
        }
    }
}

/// Tunables of all experiments; loadable from TOML, every field optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HarnessConfig {
    /// Publisher-disjoint folds for the cross-validated tasks.
    pub folds: usize,
    pub selection: Selection,
    pub forest: ForestConfig,
    pub unmasking: UnmaskingConfig,
    pub veracity_aggregation: Aggregation,
    /// Test share of the satire split.
    pub satire_test_fraction: f64,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        Self {
            folds: 3,
            selection: Selection::default(),
            forest: ForestConfig::default(),
            unmasking: UnmaskingConfig::default(),
            veracity_aggregation: Aggregation::Pooled,
            satire_test_fraction: 0.25,
        }
    }
}

impl HarnessConfig {
    pub fn from_toml(raw: &str) -> Result<Self, HarnessError> {
        let cfg: Self = toml::from_str(raw).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let raw = std::fs::read_to_string(path).map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&raw)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.folds < 2 {
            return Err(HarnessError::Config(format!("folds must be at least 2, got {}", self.folds)));
        }
        if !(self.satire_test_fraction > 0.0 && self.satire_test_fraction < 1.0) {
            return Err(HarnessError::Config(format!(
                "satire_test_fraction must lie in (0, 1), got {}",
                self.satire_test_fraction
            )));
        }
        if self.forest.trees == 0 {
            return Err(HarnessError::Config("forest.trees must be positive".into()));
        }
        self.unmasking
            .validate()
            .map_err(|e| HarnessError::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub task: Task,
    /// Feature models to evaluate; unmasking tasks ignore this.
    pub features: Vec<FeatureModel>,
    pub seed: u64,
    pub config: HarnessConfig,
    /// Deliberately let test documents into vocabulary construction.
    #[serde(skip)]
    pub inject_leak: bool,
}

impl ExperimentSpec {
    pub fn new(task: Task, seed: u64) -> Self {
        Self {
            task,
            features: vec![FeatureModel::Style, FeatureModel::Topic],
            seed,
            config: HarnessConfig::default(),
            inject_leak: false,
        }
    }
}

/// An input file as recorded in the manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputFile {
    pub role: String,
    pub path: String,
    pub sha256: String,
    pub articles: usize,
}

impl InputFile {
    pub fn new(role: &str, path: &Path, corpus: &Corpus) -> Result<Self, HarnessError> {
        let bytes = std::fs::read(path).map_err(|source| {
            HarnessError::Corpus(CorpusError::Io {
                path: path.to_path_buf(),
                source,
            })
        })?;
        Ok(Self {
            role: role.to_string(),
            path: path.display().to_string(),
            sha256: sha256_hex(&bytes),
            articles: corpus.len(),
        })
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputFile {
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub task: Task,
    pub features: Vec<FeatureModel>,
    pub seed: u64,
    pub config: HarnessConfig,
    pub inputs: Vec<InputFile>,
    pub notes: BTreeMap<String, String>,
    pub outputs: Vec<OutputFile>,
    pub results: serde_json::Value,
}

/// Output format for tables.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TableFormat {
    #[default]
    Csv,
    Json,
}

/// Everything an experiment produced, before it is written out.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub task: Task,
    pub tables: Vec<Table>,
    pub curves: Vec<UnmaskingCurve>,
    pub figure: Option<String>,
    /// Headline numbers and assertion outcomes, echoed into the manifest.
    pub results: serde_json::Value,
    pub notes: BTreeMap<String, String>,
}

impl ExperimentOutput {
    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    /// Write tables, curves, figure and manifest into `dir`; returns the
    /// paths written, manifest last.
    pub fn write(
        &self,
        dir: &Path,
        format: TableFormat,
        spec: &ExperimentSpec,
        inputs: &[InputFile],
    ) -> Result<Vec<PathBuf>, HarnessError> {
        std::fs::create_dir_all(dir).map_err(|source| HarnessError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        let mut files: Vec<(String, String)> = vec![];
        for t in &self.tables {
            match format {
                TableFormat::Csv => files.push((format!("{}.csv", t.name), t.to_csv())),
                TableFormat::Json => files.push((format!("{}.json", t.name), t.to_json())),
            }
        }
        for c in &self.curves {
            files.push((format!("{}_{}_vs_{}.csv", self.task, c.labels.0, c.labels.1), curve_csv(c)));
        }
        if let Some(svg) = &self.figure {
            files.push((format!("{}.svg", self.task), svg.clone()));
        }
        let mut written = vec![];
        let mut outputs = vec![];
        for (name, body) in files {
            let path = dir.join(&name);
            write_file(&path, &body)?;
            outputs.push(OutputFile {
                file: name,
                sha256: sha256_hex(body.as_bytes()),
            });
            written.push(path);
        }
        let manifest = Manifest {
            tool: format!("newsstyle {}", env!("CARGO_PKG_VERSION")),
            task: self.task,
            features: spec.features.clone(),
            seed: spec.seed,
            config: spec.config.clone(),
            inputs: inputs.to_vec(),
            notes: self.notes.clone(),
            outputs,
            results: self.results.clone(),
        };
        let path = dir.join(format!("{}.manifest.json", self.task));
        let mut body = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        body.push('\n');
        write_file(&path, &body)?;
        written.push(path);
        Ok(written)
    }
}

fn write_file(path: &Path, body: &str) -> Result<(), HarnessError> {
    std::fs::write(path, body).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Run one experiment. `satire` is the satire/real corpus; the satire task
/// falls back to `corpus` when it is absent.
pub fn run_experiment(
    spec: &ExperimentSpec,
    corpus: Option<&Corpus>,
    satire: Option<&Corpus>,
) -> Result<ExperimentOutput, HarnessError> {
    spec.config.validate()?;
    let main = || corpus.ok_or(HarnessError::NoCorpus(spec.task));
    match spec.task {
        Task::HyperpartisanOmission => Ok(run_hyperpartisan_omission(main()?, spec)?.output()),
        Task::HyperpartisanBinary => Ok(run_hyperpartisan_binary(main()?, spec)?.output(spec.task)),
        Task::Orientation3Class => Ok(run_orientation(main()?, spec)?.output()),
        Task::VeracityGeneric | Task::VeracityOrientationSpecific => Ok(run_veracity(main()?, spec)?.output(spec)),
        Task::Satire => {
            let c = satire.or(corpus).ok_or(HarnessError::NoCorpus(spec.task))?;
            Ok(run_satire(c, spec)?.output(spec.task))
        }
        Task::UnmaskOrientations | Task::UnmaskSatire => Ok(run_unmasking_suite(main()?, satire, spec)?.output(spec.task)),
    }
}
