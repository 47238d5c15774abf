use serde::{Deserialize, Serialize};

use crate::ensemble::EnsembleSpec;
use crate::error::Result;
use crate::metrics::CorrelationReport;
use crate::regress::ModelKind;

use super::config::{RunConfig, Track};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MemberStatus {
    Ok,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberReport {
    pub name: String,
    /// Embedding provenance, e.g. `tfidf` or `external:labse`.
    pub source: String,
    /// `None` for fit-free (raw cosine) members.
    pub regressor: Option<ModelKind>,
    /// ElasticNet strength actually used.
    pub alpha: Option<f64>,
    pub status: MemberStatus,
    pub error: Option<String>,
    pub dev: Option<CorrelationReport>,
    pub test: Option<CorrelationReport>,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergedCount {
    pub language: String,
    pub pairs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataSizes {
    pub train: Option<usize>,
    pub dev: usize,
    pub test: usize,
    /// Per-language contributions to a merged cross-lingual training set.
    pub merged_from: Vec<MergedCount>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleReport {
    /// Covers surviving members only.
    pub spec: EnsembleSpec,
    pub dev: Option<CorrelationReport>,
    pub test: Option<CorrelationReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub total_ms: u128,
}

/// Predictions kept in memory alongside a report; not serialized.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunPredictions {
    pub dev: Vec<f64>,
    pub test: Vec<f64>,
    /// `(dev, test)` per member, `None` for failed members.
    pub members: Vec<Option<(Vec<f64>, Vec<f64>)>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub track: Track,
    pub language: String,
    pub config: RunConfig,
    pub sizes: DataSizes,
    pub members: Vec<MemberReport>,
    pub ensemble: EnsembleReport,
    pub timing: Option<Timing>,
    #[serde(skip)]
    pub predictions: RunPredictions,
}

impl RunReport {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn member(&self, name: &str) -> Option<&MemberReport> {
        self.members.iter().find(|m| m.name == name)
    }

    pub fn dev_spearman(&self) -> Option<f64> {
        self.ensemble.dev.as_ref().and_then(|r| r.spearman)
    }

    pub fn test_spearman(&self) -> Option<f64> {
        self.ensemble.test.as_ref().and_then(|r| r.spearman)
    }
}
