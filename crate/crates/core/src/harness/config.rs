use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{
    dataset_correlation_experiment, knn_experiment, lipschitz_check_experiment, sbm_correlation_experiment,
    CorrelationReport, KnnReport, LipschitzReport, SbmCorrelationConfig, SbmReport,
};
use crate::error::{DidmError, Result};
use crate::graph_model::{load_tudataset, Dataset};
use crate::mpnn::{Family, ModelSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Knn,
    SbmCorrelate,
    DatasetCorrelate,
    LipschitzCheck,
}

/// Which node attributes a loaded dataset carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttributeMode {
    /// Attributes and one-hot node labels from the files.
    #[default]
    Native,
    Degrees,
    NormalizedDegrees,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetSource {
    pub root: PathBuf,
    pub name: String,
    #[serde(default)]
    pub attributes: AttributeMode,
}

impl DatasetSource {
    pub fn load(&self) -> Result<Dataset> {
        let ds = load_tudataset(&self.root, &self.name)?;
        match self.attributes {
            AttributeMode::Native => Ok(ds),
            AttributeMode::Degrees => ds.with_degree_attributes(false),
            AttributeMode::NormalizedDegrees => ds.with_degree_attributes(true),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub family: Family,
    pub hidden: usize,
    pub layers: usize,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig { family: Family::GinMeanpool, hidden: 16, layers: 2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Seeds {
    pub split: u64,
    pub model: u64,
    pub graph: u64,
}

/// Everything one experiment run depends on. Serialized into the `# config:` line of
/// every CSV it writes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub dataset: Option<DatasetSource>,
    /// Block-model sweep; its seeds and model fields are overridden by `seeds` and `model`.
    pub sbm: Option<SbmCorrelationConfig>,
    pub depth: usize,
    pub model: ModelConfig,
    pub seeds: Seeds,
    pub splits: usize,
    pub train_fraction: f64,
    pub models: usize,
    pub pairs: usize,
    pub anchor: usize,
    pub output_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind) -> Self {
        ExperimentConfig {
            kind,
            dataset: None,
            sbm: None,
            depth: 2,
            model: ModelConfig::default(),
            seeds: Seeds::default(),
            splits: 10,
            train_fraction: 0.9,
            models: 100,
            pairs: 100,
            anchor: 0,
            output_dir: None,
        }
    }

    /// Checks that the configuration is complete and its input paths exist.
    pub fn validate(&self) -> Result<()> {
        let needs_dataset = self.kind != ExperimentKind::SbmCorrelate;
        match (&self.dataset, needs_dataset) {
            (None, true) => {
                return Err(DidmError::InvalidArgument(format!("{:?} needs a dataset", self.kind)));
            }
            (Some(src), _) if !src.root.exists() => return Err(DidmError::MissingFile(src.root.clone())),
            _ => {}
        }
        Ok(())
    }

    /// The JSON used in the `# config:` header line.
    pub fn header(&self) -> String {
        serde_json::to_string(self).expect("plain struct serializes")
    }

    fn sbm_config(&self) -> SbmCorrelationConfig {
        let base = self.sbm.clone().unwrap_or_default();
        SbmCorrelationConfig {
            family: self.model.family,
            hidden: self.model.hidden,
            layers: self.model.layers,
            depth: self.depth,
            model_seed: self.seeds.model,
            graph_seed: self.seeds.graph,
            ..base
        }
    }

    fn output_file(&self) -> Option<PathBuf> {
        let name = match self.kind {
            ExperimentKind::Knn => "knn.csv",
            ExperimentKind::SbmCorrelate => "sbm_correlation.csv",
            ExperimentKind::DatasetCorrelate => "dataset_correlation.csv",
            ExperimentKind::LipschitzCheck => "lipschitz_check.csv",
        };
        self.output_dir.as_deref().map(|d| d.join(name))
    }

    /// Runs the experiment and, when `output_dir` is set, writes its CSV there.
    pub fn run(&self) -> Result<ExperimentOutcome> {
        self.validate()?;
        let outcome = match self.kind {
            ExperimentKind::Knn => {
                let ds = self.dataset.as_ref().unwrap().load()?;
                ExperimentOutcome::Knn(knn_experiment(&ds, self.depth, self.splits, self.train_fraction, self.seeds.split)?)
            }
            ExperimentKind::SbmCorrelate => ExperimentOutcome::Sbm(sbm_correlation_experiment(&self.sbm_config())?),
            ExperimentKind::DatasetCorrelate => {
                let ds = self.dataset.as_ref().unwrap().load()?;
                let model = ModelSpec {
                    family: self.model.family,
                    layers: self.model.layers,
                    hidden: self.model.hidden,
                    attr_dim: ds.attr_dim,
                    out_dim: self.model.hidden,
                    seed: self.seeds.model,
                }
                .build()?;
                ExperimentOutcome::Correlation(dataset_correlation_experiment(&ds, self.anchor, &model, self.depth)?)
            }
            ExperimentKind::LipschitzCheck => {
                let ds = self.dataset.as_ref().unwrap().load()?;
                ExperimentOutcome::Lipschitz(lipschitz_check_experiment(
                    &ds,
                    self.depth,
                    self.models,
                    self.pairs,
                    self.model.hidden,
                    self.seeds.model,
                )?)
            }
        };
        if let Some(path) = self.output_file() {
            outcome.write_csv(&path, &self.header())?;
        }
        Ok(outcome)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExperimentOutcome {
    Knn(KnnReport),
    Sbm(SbmReport),
    Correlation(CorrelationReport),
    Lipschitz(LipschitzReport),
}

impl ExperimentOutcome {
    pub fn write_csv(&self, path: &Path, config: &str) -> Result<()> {
        match self {
            ExperimentOutcome::Knn(r) => r.write_csv(path, config),
            ExperimentOutcome::Sbm(r) => r.write_csv(path, config),
            ExperimentOutcome::Correlation(r) => r.write_csv(path, config),
            ExperimentOutcome::Lipschitz(r) => r.write_csv(path, config),
        }
    }
}
