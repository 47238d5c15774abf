//! Cosine similarity and per-pair regression features.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::PairDataset;
use crate::error::{Error, Result};
use crate::featurize::{EmbeddingSet, Provenance};

/// Cosine of the angle between `a` and `b`; 0 if either has zero norm.
pub fn cosine(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let (mut dot, mut na, mut nb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return Ok(0.0);
    }
    Ok((dot / (na.sqrt() * nb.sqrt())).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureMode {
    /// `[cos]`
    CosineOnly,
    /// `[cos, |a-b|_0.., (a*b)_0..]`
    Rich,
}

impl fmt::Display for FeatureMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FeatureMode::CosineOnly => "cosine_only",
            FeatureMode::Rich => "rich",
        })
    }
}

impl FromStr for FeatureMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cosine_only" | "cosine" => Ok(FeatureMode::CosineOnly),
            "rich" => Ok(FeatureMode::Rich),
            other => Err(Error::Config(format!("unknown feature mode `{other}`"))),
        }
    }
}

/// Row-major feature matrix aligned with a dataset's pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct PairFeatures {
    pub provenance: Provenance,
    pub feature_names: Vec<String>,
    pub n_rows: usize,
    pub data: Vec<f64>,
    pub cosine_col: usize,
}

impl PairFeatures {
    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let w = self.n_features();
        &self.data[i * w..(i + 1) * w]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.n_features().max(1))
    }

    pub fn cosines(&self) -> Vec<f64> {
        self.rows().map(|r| r[self.cosine_col]).collect()
    }

    /// Header is the feature names; one row per pair.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(&self.feature_names)?;
        for row in self.rows() {
            wtr.write_record(row.iter().map(|v| v.to_string()))?;
        }
        wtr.flush().map_err(|e| Error::io("<features>", e))?;
        Ok(())
    }
}

pub fn feature_names(mode: FeatureMode, dim: usize) -> Vec<String> {
    let mut names = vec!["cos".to_string()];
    if mode == FeatureMode::Rich {
        names.extend((0..dim).map(|i| format!("absdiff_{i}")));
        names.extend((0..dim).map(|i| format!("prod_{i}")));
    }
    names
}

fn pair_row(a: &[f64], b: &[f64], mode: FeatureMode) -> Result<Vec<f64>> {
    let cos = cosine(a, b)?;
    Ok(match mode {
        FeatureMode::CosineOnly => vec![cos],
        FeatureMode::Rich => {
            let mut row = Vec::with_capacity(1 + 2 * a.len());
            row.push(cos);
            row.extend(a.iter().zip(b).map(|(x, y)| (x - y).abs()));
            row.extend(a.iter().zip(b).map(|(x, y)| x * y));
            row
        }
    })
}

pub fn build_pair_features(
    dataset: &PairDataset,
    emb: &EmbeddingSet,
    mode: FeatureMode,
) -> Result<PairFeatures> {
    let rows: Vec<Vec<f64>> = dataset
        .pairs()
        .par_iter()
        .map(|p| {
            let (a, b) = emb.pair(&p.pair_id)?;
            pair_row(a, b, mode)
        })
        .collect::<Result<_>>()?;
    let feature_names = feature_names(mode, emb.dim());
    Ok(PairFeatures {
        provenance: emb.provenance().clone(),
        n_rows: rows.len(),
        data: rows.into_iter().flatten().collect(),
        feature_names,
        cosine_col: 0,
    })
}
