//! Weighted and uniform averaging of member predictions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regress::clip_unit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightRule {
    DevWeighted,
    Uniform,
}

impl fmt::Display for WeightRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeightRule::DevWeighted => "dev_weighted",
            WeightRule::Uniform => "uniform",
        })
    }
}

impl FromStr for WeightRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dev_weighted" | "weighted" => Ok(WeightRule::DevWeighted),
            "uniform" | "average" => Ok(WeightRule::Uniform),
            other => Err(Error::Config(format!("unknown ensemble rule `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub member_names: Vec<String>,
    /// Dev Spearman per member; `None` where undefined.
    pub dev_scores: Vec<Option<f64>>,
    pub weights: Vec<f64>,
    pub rule: WeightRule,
}

impl EnsembleSpec {
    pub fn len(&self) -> usize {
        self.member_names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.member_names.is_empty()
    }
}

/// Equal weights for every member.
pub fn uniform_spec(members: &[String], dev_scores: &[Option<f64>]) -> Result<EnsembleSpec> {
    if members.is_empty() {
        return Err(Error::Empty("ensemble members"));
    }
    if dev_scores.len() != members.len() {
        return Err(Error::Alignment {
            expected: members.len(),
            actual: dev_scores.len(),
        });
    }
    let w = 1.0 / members.len() as f64;
    Ok(EnsembleSpec {
        member_names: members.to_vec(),
        dev_scores: dev_scores.to_vec(),
        weights: vec![w; members.len()],
        rule: WeightRule::Uniform,
    })
}

/// Weights proportional to dev Spearman clamped at zero.
///
/// Undefined scores count as zero. When nothing is positive the spec falls
/// back to uniform weights and records `Uniform` as its rule.
pub fn dev_weighted_spec(members: &[String], dev_scores: &[Option<f64>]) -> Result<EnsembleSpec> {
    let uniform = uniform_spec(members, dev_scores)?;
    let clamped: Vec<f64> = dev_scores
        .iter()
        .map(|s| s.filter(|v| v.is_finite()).unwrap_or(0.0).max(0.0))
        .collect();
    let total: f64 = clamped.iter().sum();
    if total <= 0.0 {
        return Ok(uniform);
    }
    Ok(EnsembleSpec {
        weights: clamped.iter().map(|v| v / total).collect(),
        rule: WeightRule::DevWeighted,
        ..uniform
    })
}

/// Element-wise weighted sum, then clipped to `[0, 1]`.
pub fn combine(spec: &EnsembleSpec, predictions: &[Vec<f64>]) -> Result<Vec<f64>> {
    if predictions.len() != spec.weights.len() {
        return Err(Error::Alignment {
            expected: spec.weights.len(),
            actual: predictions.len(),
        });
    }
    let Some(first) = predictions.first() else {
        return Err(Error::Empty("ensemble predictions"));
    };
    let n = first.len();
    if let Some(bad) = predictions.iter().find(|p| p.len() != n) {
        return Err(Error::Alignment {
            expected: n,
            actual: bad.len(),
        });
    }
    let mut out = vec![0.0; n];
    for (w, pred) in spec.weights.iter().zip(predictions) {
        for (o, p) in out.iter_mut().zip(pred) {
            *o += w * p;
        }
    }
    clip_unit(&out)
}
