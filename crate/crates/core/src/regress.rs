//! Linear regressors: least squares via SVD and ElasticNet via cyclic
//! coordinate descent, plus prediction clipping.
//!
//! ElasticNet minimizes, over standardized features `Xs` and centered `yc`,
//!
//! ```text
//! (1/2n) ||yc - Xs b||^2 + alpha * (l1_ratio ||b||_1 + (1 - l1_ratio)/2 ||b||_2^2)
//! ```
//!
//! and reports coefficients and intercept on the original feature scale.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector, SVD};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pairsim::PairFeatures;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Ols,
    ElasticNet,
}

impl ModelKind {
    /// Short tag used in member names.
    pub fn tag(&self) -> &'static str {
        match self {
            ModelKind::Ols => "lr",
            ModelKind::ElasticNet => "en",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Ols => "ols",
            ModelKind::ElasticNet => "elasticnet",
        })
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ols" => Ok(ModelKind::Ols),
            "elasticnet" => Ok(ModelKind::ElasticNet),
            other => Err(Error::Format(format!("unknown model kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitModel {
    pub kind: ModelKind,
    pub intercept: f64,
    pub coefficients: Vec<f64>,
    pub feature_means: Vec<f64>,
    pub feature_scales: Vec<f64>,
    pub alpha: f64,
    pub l1_ratio: f64,
    pub n_iters_used: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElasticNetParams {
    pub alpha: f64,
    pub l1_ratio: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for ElasticNetParams {
    fn default() -> Self {
        ElasticNetParams {
            alpha: 0.1,
            l1_ratio: 0.5,
            tol: 1e-6,
            max_iter: 1000,
        }
    }
}

impl ElasticNetParams {
    fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(Error::Hyperparameter(format!(
                "alpha {} must be >= 0",
                self.alpha
            )));
        }
        if !(0.0..=1.0).contains(&self.l1_ratio) {
            return Err(Error::Hyperparameter(format!(
                "l1_ratio {} outside [0, 1]",
                self.l1_ratio
            )));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::Hyperparameter(format!(
                "tol {} must be > 0",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::Hyperparameter("max_iter must be >= 1".into()));
        }
        Ok(())
    }
}

/// Row-major features into a dense matrix.
pub fn feature_matrix(features: &PairFeatures) -> DMatrix<f64> {
    DMatrix::from_row_slice(features.n_rows, features.n_features(), &features.data)
}

fn check_xy(x: &DMatrix<f64>, y: &[f64]) -> Result<()> {
    if x.nrows() != y.len() {
        return Err(Error::Alignment {
            expected: x.nrows(),
            actual: y.len(),
        });
    }
    if x.nrows() < 2 {
        return Err(Error::TooFewRows {
            needed: 2,
            got: x.nrows(),
        });
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::Validation(
            "non-finite value in regression input".into(),
        ));
    }
    Ok(())
}

fn column_means(x: &DMatrix<f64>) -> Vec<f64> {
    let n = x.nrows() as f64;
    x.column_iter().map(|c| c.sum() / n).collect()
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Least squares with a free intercept; rank-deficient designs get the
/// minimum-norm coefficient vector.
pub fn fit_ols(x: &DMatrix<f64>, y: &[f64]) -> Result<FitModel> {
    check_xy(x, y)?;
    let means = column_means(x);
    let y_mean = mean(y);
    let mut centered = x.clone();
    for (j, mut col) in centered.column_iter_mut().enumerate() {
        col.add_scalar_mut(-means[j]);
    }
    let yc = DVector::from_iterator(y.len(), y.iter().map(|v| v - y_mean));

    let coefficients = if x.ncols() == 0 {
        Vec::new()
    } else {
        let svd = SVD::try_new(centered, true, true, f64::EPSILON, 0)
            .ok_or_else(|| Error::Validation("SVD did not converge".into()))?;
        let sigma_max = svd.singular_values.max();
        let cutoff = sigma_max * f64::EPSILON * x.nrows().max(x.ncols()) as f64;
        let b = svd
            .solve(&yc, cutoff)
            .map_err(|e| Error::Validation(e.to_string()))?;
        b.iter().copied().collect::<Vec<f64>>()
    };
    let intercept = y_mean
        - means
            .iter()
            .zip(&coefficients)
            .map(|(m, b)| m * b)
            .sum::<f64>();
    Ok(FitModel {
        kind: ModelKind::Ols,
        intercept,
        feature_scales: vec![1.0; coefficients.len()],
        coefficients,
        feature_means: means,
        alpha: 0.0,
        l1_ratio: 0.0,
        n_iters_used: 1,
        converged: true,
    })
}

/// `sign(z) * max(|z| - t, 0)`
#[inline]
pub fn soft_threshold(z: f64, t: f64) -> f64 {
    if z > t {
        z - t
    } else if z < -t {
        z + t
    } else {
        0.0
    }
}

pub fn fit_elasticnet(x: &DMatrix<f64>, y: &[f64], params: &ElasticNetParams) -> Result<FitModel> {
    fit_elasticnet_inner(x, y, params, None)
}

/// As [`fit_elasticnet`], also returning the objective before the first
/// sweep and after every sweep.
pub fn fit_elasticnet_traced(
    x: &DMatrix<f64>,
    y: &[f64],
    params: &ElasticNetParams,
) -> Result<(FitModel, Vec<f64>)> {
    let mut trace = Vec::new();
    let model = fit_elasticnet_inner(x, y, params, Some(&mut trace))?;
    Ok((model, trace))
}

fn fit_elasticnet_inner(
    x: &DMatrix<f64>,
    y: &[f64],
    params: &ElasticNetParams,
    mut trace: Option<&mut Vec<f64>>,
) -> Result<FitModel> {
    params.validate()?;
    check_xy(x, y)?;
    let n = x.nrows();
    let p = x.ncols();
    let nf = n as f64;
    let means = column_means(x);
    let y_mean = mean(y);

    // standardized columns; constant columns keep scale 1 and stay at zero
    let mut scales = vec![1.0; p];
    let mut active = vec![true; p];
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(p);
    for (j, col) in x.column_iter().enumerate() {
        let var = col.iter().map(|v| (v - means[j]).powi(2)).sum::<f64>() / nf;
        let sd = var.sqrt();
        if sd > 1e-12 * means[j].abs().max(1.0) {
            scales[j] = sd;
        } else {
            active[j] = false;
        }
        cols.push(col.iter().map(|v| (v - means[j]) / scales[j]).collect());
    }
    let sq_norms: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|v| v * v).sum::<f64>() / nf)
        .collect();

    let l1 = params.alpha * params.l1_ratio;
    let l2 = params.alpha * (1.0 - params.l1_ratio);
    let objective = |r: &[f64], b: &[f64]| {
        let loss = r.iter().map(|v| v * v).sum::<f64>() / (2.0 * nf);
        let pen_l1: f64 = b.iter().map(|v| v.abs()).sum();
        let pen_l2: f64 = b.iter().map(|v| v * v).sum();
        loss + l1 * pen_l1 + 0.5 * l2 * pen_l2
    };

    let mut b = vec![0.0; p];
    let mut resid: Vec<f64> = y.iter().map(|v| v - y_mean).collect();
    if let Some(t) = trace.as_deref_mut() {
        t.push(objective(&resid, &b));
    }

    let mut converged = false;
    let mut sweeps = 0;
    while sweeps < params.max_iter {
        sweeps += 1;
        let mut max_change = 0.0f64;
        for j in 0..p {
            if !active[j] {
                continue;
            }
            let col = &cols[j];
            let old = b[j];
            let rho =
                col.iter().zip(&resid).map(|(a, r)| a * r).sum::<f64>() / nf + sq_norms[j] * old;
            let new = soft_threshold(rho, l1) / (sq_norms[j] + l2);
            let delta = new - old;
            if delta != 0.0 {
                for (r, a) in resid.iter_mut().zip(col) {
                    *r -= a * delta;
                }
                b[j] = new;
                max_change = max_change.max(delta.abs());
            }
        }
        if let Some(t) = trace.as_deref_mut() {
            t.push(objective(&resid, &b));
        }
        if max_change < params.tol {
            converged = true;
            break;
        }
    }

    let coefficients: Vec<f64> = b.iter().zip(&scales).map(|(c, s)| c / s).collect();
    let intercept = y_mean
        - means
            .iter()
            .zip(&coefficients)
            .map(|(m, c)| m * c)
            .sum::<f64>();
    Ok(FitModel {
        kind: ModelKind::ElasticNet,
        intercept,
        coefficients,
        feature_means: means,
        feature_scales: scales,
        alpha: params.alpha,
        l1_ratio: params.l1_ratio,
        n_iters_used: sweeps,
        converged,
    })
}

/// `intercept + X b` on the original scale. No clipping.
pub fn predict(model: &FitModel, x: &DMatrix<f64>) -> Result<Vec<f64>> {
    if x.ncols() != model.coefficients.len() {
        return Err(Error::DimMismatch {
            left: model.coefficients.len(),
            right: x.ncols(),
        });
    }
    Ok(x.row_iter()
        .map(|row| {
            model.intercept
                + row
                    .iter()
                    .zip(&model.coefficients)
                    .map(|(v, b)| v * b)
                    .sum::<f64>()
        })
        .collect())
}

/// Clamp every prediction into `[0, 1]`.
pub fn clip_unit(preds: &[f64]) -> Result<Vec<f64>> {
    preds
        .iter()
        .map(|&p| {
            if p.is_finite() {
                Ok(p.clamp(0.0, 1.0))
            } else {
                Err(Error::Validation(format!("non-finite prediction {p}")))
            }
        })
        .collect()
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(f64::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

impl FitModel {
    /// Flat `key=value` lines; floats use shortest round-trip formatting.
    pub fn to_kv(&self) -> String {
        format!(
            "kind={}\nalpha={}\nl1_ratio={}\nintercept={}\ncoefficients={}\nfeature_means={}\nfeature_scales={}\nn_iters_used={}\nconverged={}\n",
            self.kind,
            self.alpha,
            self.l1_ratio,
            self.intercept,
            join(&self.coefficients),
            join(&self.feature_means),
            join(&self.feature_scales),
            self.n_iters_used,
            self.converged,
        )
    }

    pub fn from_kv(text: &str) -> Result<Self> {
        let mut fields = std::collections::HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Format(format!("model line {}: expected key=value", i + 1))
            })?;
            fields.insert(k.trim(), v.trim());
        }
        let get = |k: &str| {
            fields
                .get(k)
                .copied()
                .ok_or_else(|| Error::Format(format!("model is missing `{k}`")))
        };
        let num = |k: &str| -> Result<f64> {
            get(k)?
                .parse()
                .map_err(|_| Error::Format(format!("model field `{k}` is not a number")))
        };
        let list = |k: &str| -> Result<Vec<f64>> {
            let raw = get(k)?;
            if raw.is_empty() {
                return Ok(Vec::new());
            }
            raw.split(',')
                .map(|v| {
                    v.trim().parse().map_err(|_| {
                        Error::Format(format!("model field `{k}` has bad entry `{v}`"))
                    })
                })
                .collect()
        };
        let model = FitModel {
            kind: get("kind")?.parse()?,
            alpha: num("alpha")?,
            l1_ratio: num("l1_ratio")?,
            intercept: num("intercept")?,
            coefficients: list("coefficients")?,
            feature_means: list("feature_means")?,
            feature_scales: list("feature_scales")?,
            n_iters_used: get("n_iters_used")?
                .parse()
                .map_err(|_| Error::Format("bad n_iters_used".into()))?,
            converged: get("converged")?
                .parse()
                .map_err(|_| Error::Format("bad converged flag".into()))?,
        };
        let p = model.coefficients.len();
        if model.feature_means.len() != p || model.feature_scales.len() != p {
            return Err(Error::Format("model vectors differ in length".into()));
        }
        Ok(model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_kv()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        FitModel::from_kv(&text)
    }
}
