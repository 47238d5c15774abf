//! End-to-end runs for the three track protocols.
//!
//! | track | training data            | members                         | ensemble       |
//! |-------|--------------------------|---------------------------------|----------------|
//! | A     | own train split          | each source x {ElasticNet, OLS} | dev-weighted   |
//! | B     | none                     | raw cosine per source           | uniform        |
//! | C     | other languages, merged  | each source x {ElasticNet, OLS} | uniform        |
//!
//! A member that fails (missing embeddings, degenerate fit) is reported with
//! weight 0 and the run carries on as long as one member survives.

mod config;
mod report;
mod scatter;

use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::corpus::{
    load_dataset_with, merge_train_sets, write_predictions, GoldColumn, LoadOptions, PairDataset,
    Split,
};
use crate::ensemble::{combine, dev_weighted_spec, uniform_spec, WeightRule};
use crate::error::{Error, Result};
use crate::featurize::{fit_ppmi, load_external_embeddings, ppmi_embed, tfidf_embed, EmbeddingSet};
use crate::metrics::{spearman, CorrelationReport};
use crate::pairsim::{build_pair_features, FeatureMode};
use crate::regress::{
    clip_unit, feature_matrix, fit_elasticnet, fit_ols, predict, ElasticNetParams, ModelKind,
};
use crate::tokenize::{fit_vocab, tokenize};

pub use config::{MergeSource, RunConfig, SourceSpec, Track, DEFAULT_ALPHA_GRID};
pub use report::{
    DataSizes, EnsembleReport, MemberReport, MemberStatus, MergedCount, RunPredictions, RunReport,
    Timing,
};
pub use scatter::{emit_scatter, scatter_svg};

/// Validate `cfg` and run its track.
pub fn run(cfg: &RunConfig) -> Result<RunReport> {
    match cfg.track {
        Track::A => run_track_a(cfg),
        Track::B => run_track_b(cfg),
        Track::C => run_track_c(cfg),
    }
}

fn expect_track(cfg: &RunConfig, track: Track) -> Result<()> {
    if cfg.track != track {
        return Err(Error::Config(format!(
            "config is for track {}, not track {track}",
            cfg.track
        )));
    }
    cfg.validate()
}

fn load_split(path: &Path, language: &str, split: Split, gold: GoldColumn) -> Result<PairDataset> {
    load_dataset_with(path, &LoadOptions::new(language, split, gold))
}

fn required(p: &Option<std::path::PathBuf>) -> Result<&Path> {
    p.as_deref()
        .ok_or_else(|| Error::Config("missing data path".into()))
}

/// Supervised run: own training data, dev-weighted ensemble by default.
pub fn run_track_a(cfg: &RunConfig) -> Result<RunReport> {
    expect_track(cfg, Track::A)?;
    let start = Instant::now();
    let train = load_split(
        required(&cfg.train)?,
        &cfg.language,
        Split::Train,
        GoldColumn::Required,
    )?;
    let dev = load_split(
        required(&cfg.dev)?,
        &cfg.language,
        Split::Dev,
        GoldColumn::Required,
    )?;
    let test = load_split(
        required(&cfg.test)?,
        &cfg.language,
        Split::Test,
        GoldColumn::Optional,
    )?;
    run_supervised(cfg, &train, &dev, &test, Vec::new(), start)
}

/// Cross-lingual run: train on a merge of other languages' training sets.
pub fn run_track_c(cfg: &RunConfig) -> Result<RunReport> {
    expect_track(cfg, Track::C)?;
    let start = Instant::now();
    let sources = cfg
        .merge
        .iter()
        .map(|m| load_split(&m.path, &m.language, Split::Train, GoldColumn::Required))
        .collect::<Result<Vec<_>>>()?;
    let merged = merge_train_sets(&sources, &cfg.language)?;
    let own_prefix = format!("{}:", cfg.language);
    if let Some(p) = merged
        .pairs()
        .iter()
        .find(|p| p.pair_id.starts_with(&own_prefix))
    {
        return Err(Error::Integrity(format!(
            "merged training set contains target-language pair `{}`",
            p.pair_id
        )));
    }
    let merged_from = sources
        .iter()
        .map(|s| MergedCount {
            language: s.language().to_string(),
            pairs: s.len(),
        })
        .collect();
    let dev = load_split(
        required(&cfg.dev)?,
        &cfg.language,
        Split::Dev,
        GoldColumn::Optional,
    )?;
    let test = load_split(
        required(&cfg.test)?,
        &cfg.language,
        Split::Test,
        GoldColumn::Optional,
    )?;
    run_supervised(cfg, &merged, &dev, &test, merged_from, start)
}

/// Unsupervised run: cosine per source mapped to `[0, 1]`, averaged.
pub fn run_track_b(cfg: &RunConfig) -> Result<RunReport> {
    expect_track(cfg, Track::B)?;
    let start = Instant::now();
    let dev_full = load_split(
        required(&cfg.dev)?,
        &cfg.language,
        Split::Dev,
        GoldColumn::Optional,
    )?;
    let test_full = load_split(
        required(&cfg.test)?,
        &cfg.language,
        Split::Test,
        GoldColumn::Optional,
    )?;
    // featurization only ever sees unlabelled copies
    let dev = dev_full.without_gold();
    let test = test_full.without_gold();

    let fit_corpus: Vec<Vec<String>> = dev
        .sentences()
        .chain(test.sentences())
        .map(tokenize)
        .collect();
    let members: Vec<Member> = cfg
        .sources
        .par_iter()
        .map(|source| {
            let outcome = embed_source(source, &fit_corpus, &[&dev, &test], cfg).and_then(|sets| {
                let dev_pred = cosine_scores(&dev, &sets[0])?;
                let test_pred = cosine_scores(&test, &sets[1])?;
                Ok((dev_pred, test_pred, None))
            });
            Member {
                name: source.label().to_string(),
                source: source_provenance(source),
                regressor: None,
                outcome,
            }
        })
        .collect();
    finish(cfg, members, &dev_full, &test_full, None, Vec::new(), start)
}

fn cosine_scores(dataset: &PairDataset, emb: &EmbeddingSet) -> Result<Vec<f64>> {
    let feats = build_pair_features(dataset, emb, FeatureMode::CosineOnly)?;
    let mapped: Vec<f64> = feats.cosines().iter().map(|c| (c + 1.0) / 2.0).collect();
    clip_unit(&mapped)
}

fn source_provenance(source: &SourceSpec) -> String {
    match source {
        SourceSpec::Tfidf => "tfidf".into(),
        SourceSpec::Ppmi => "ppmi".into(),
        SourceSpec::External { name, .. } => format!("external:{name}"),
    }
}

/// One embedding set per dataset in `datasets`, in order.
fn embed_source(
    source: &SourceSpec,
    fit_corpus: &[Vec<String>],
    datasets: &[&PairDataset],
    cfg: &RunConfig,
) -> Result<Vec<Arc<EmbeddingSet>>> {
    match source {
        SourceSpec::Tfidf => {
            let vocab = fit_vocab(fit_corpus, cfg.min_df)?;
            datasets
                .iter()
                .map(|ds| tfidf_embed(ds, &vocab).map(Arc::new))
                .collect()
        }
        SourceSpec::Ppmi => {
            let vocab = fit_vocab(fit_corpus, cfg.min_df)?;
            let model = fit_ppmi(fit_corpus, &vocab, cfg.ppmi_window)?;
            datasets
                .iter()
                .map(|ds| ppmi_embed(ds, &model).map(Arc::new))
                .collect()
        }
        SourceSpec::External { name, paths } => {
            let mut set: Option<EmbeddingSet> = None;
            for path in paths {
                let part = load_external_embeddings(path, name)?;
                match set.as_mut() {
                    Some(s) => s.extend(part)?,
                    None => set = Some(part),
                }
            }
            let set = Arc::new(set.ok_or_else(|| Error::Config(format!("no files for `{name}`")))?);
            for ds in datasets {
                set.check_covers(ds)?;
            }
            Ok(vec![set; datasets.len()])
        }
    }
}

struct Member {
    name: String,
    source: String,
    regressor: Option<ModelKind>,
    /// `(dev predictions, test predictions, ElasticNet alpha used)`
    outcome: Result<(Vec<f64>, Vec<f64>, Option<f64>)>,
}

struct SourceMatrices {
    train: DMatrix<f64>,
    dev: DMatrix<f64>,
    test: DMatrix<f64>,
}

fn run_supervised(
    cfg: &RunConfig,
    train: &PairDataset,
    dev: &PairDataset,
    test: &PairDataset,
    merged_from: Vec<MergedCount>,
    start: Instant,
) -> Result<RunReport> {
    let train_gold = train
        .gold()
        .ok_or_else(|| Error::Validation("training set has no gold scores".into()))?;
    let mode = cfg.feature_mode();
    let fit_corpus: Vec<Vec<String>> = train.sentences().map(tokenize).collect();

    let matrices: Vec<Result<SourceMatrices>> = cfg
        .sources
        .par_iter()
        .map(|source| {
            let sets = embed_source(source, &fit_corpus, &[train, dev, test], cfg)?;
            let m = |ds: &PairDataset, emb: &EmbeddingSet| {
                build_pair_features(ds, emb, mode).map(|f| feature_matrix(&f))
            };
            Ok(SourceMatrices {
                train: m(train, &sets[0])?,
                dev: m(dev, &sets[1])?,
                test: m(test, &sets[2])?,
            })
        })
        .collect();

    let jobs: Vec<(usize, ModelKind)> = (0..cfg.sources.len())
        .flat_map(|i| [(i, ModelKind::ElasticNet), (i, ModelKind::Ols)])
        .collect();
    let members: Vec<Member> = jobs
        .par_iter()
        .map(|&(i, kind)| {
            let source = &cfg.sources[i];
            let outcome = match &matrices[i] {
                Ok(mats) => fit_member(kind, mats, train_gold, dev.gold(), cfg),
                Err(e) => Err(Error::Validation(format!("embedding source failed: {e}"))),
            };
            Member {
                name: format!("{}+{}", source.label(), kind.tag()),
                source: source_provenance(source),
                regressor: Some(kind),
                outcome,
            }
        })
        .collect();
    finish(
        cfg,
        members,
        dev,
        test,
        Some(train.len()),
        merged_from,
        start,
    )
}

fn fit_member(
    kind: ModelKind,
    mats: &SourceMatrices,
    train_gold: &[f64],
    dev_gold: Option<&[f64]>,
    cfg: &RunConfig,
) -> Result<(Vec<f64>, Vec<f64>, Option<f64>)> {
    let model = match kind {
        ModelKind::Ols => fit_ols(&mats.train, train_gold)?,
        ModelKind::ElasticNet => match &cfg.alpha_grid {
            None => fit_elasticnet(&mats.train, train_gold, &cfg.elasticnet)?,
            Some(grid) => {
                let gold = dev_gold.ok_or_else(|| {
                    Error::Config("alpha grid search needs dev gold scores".into())
                })?;
                let mut best: Option<(f64, crate::regress::FitModel)> = None;
                for &alpha in grid {
                    let params = ElasticNetParams {
                        alpha,
                        ..cfg.elasticnet
                    };
                    let model = fit_elasticnet(&mats.train, train_gold, &params)?;
                    let preds = clip_unit(&predict(&model, &mats.dev)?)?;
                    let score = spearman(&preds, gold)?
                        .spearman
                        .unwrap_or(f64::NEG_INFINITY);
                    // strict improvement only: ties keep the earlier grid entry
                    if best.as_ref().is_none_or(|(s, _)| score > *s) {
                        best = Some((score, model));
                    }
                }
                best.map(|(_, m)| m)
                    .ok_or_else(|| Error::Config("empty alpha grid".into()))?
            }
        },
    };
    let dev_pred = clip_unit(&predict(&model, &mats.dev)?)?;
    let test_pred = clip_unit(&predict(&model, &mats.test)?)?;
    let alpha = (kind == ModelKind::ElasticNet).then_some(model.alpha);
    Ok((dev_pred, test_pred, alpha))
}

fn evaluate(preds: &[f64], gold: Option<&[f64]>) -> Option<CorrelationReport> {
    gold.and_then(|g| spearman(preds, g).ok())
}

fn finish(
    cfg: &RunConfig,
    members: Vec<Member>,
    dev: &PairDataset,
    test: &PairDataset,
    train_size: Option<usize>,
    merged_from: Vec<MergedCount>,
    start: Instant,
) -> Result<RunReport> {
    let mut reports = Vec::with_capacity(members.len());
    let mut member_preds = Vec::with_capacity(members.len());
    for m in members {
        let (status, error, dev_r, test_r, alpha, preds) = match m.outcome {
            Ok((d, t, alpha)) => (
                MemberStatus::Ok,
                None,
                evaluate(&d, dev.gold()),
                evaluate(&t, test.gold()),
                alpha,
                Some((d, t)),
            ),
            Err(e) => (
                MemberStatus::Failed,
                Some(e.to_string()),
                None,
                None,
                None,
                None,
            ),
        };
        reports.push(MemberReport {
            name: m.name,
            source: m.source,
            regressor: m.regressor,
            alpha,
            status,
            error,
            dev: dev_r,
            test: test_r,
            weight: 0.0,
        });
        member_preds.push(preds);
    }

    let survivors: Vec<usize> = (0..reports.len())
        .filter(|&i| member_preds[i].is_some())
        .collect();
    if survivors.is_empty() {
        let reasons: Vec<String> = reports
            .iter()
            .map(|r| format!("{}: {}", r.name, r.error.as_deref().unwrap_or("?")))
            .collect();
        return Err(Error::Validation(format!(
            "every ensemble member failed ({})",
            reasons.join("; ")
        )));
    }
    let names: Vec<String> = survivors.iter().map(|&i| reports[i].name.clone()).collect();
    let dev_scores: Vec<Option<f64>> = survivors
        .iter()
        .map(|&i| reports[i].dev.as_ref().and_then(|r| r.spearman))
        .collect();
    let spec = match cfg.weight_rule() {
        WeightRule::DevWeighted => dev_weighted_spec(&names, &dev_scores)?,
        WeightRule::Uniform => uniform_spec(&names, &dev_scores)?,
    };
    for (&i, &w) in survivors.iter().zip(&spec.weights) {
        reports[i].weight = w;
    }
    let (dev_members, test_members): (Vec<Vec<f64>>, Vec<Vec<f64>>) = survivors
        .iter()
        .map(|&i| member_preds[i].clone().expect("survivor"))
        .unzip();
    let dev_pred = combine(&spec, &dev_members)?;
    let test_pred = combine(&spec, &test_members)?;

    let report = RunReport {
        track: cfg.track,
        language: cfg.language.clone(),
        config: cfg.clone(),
        sizes: DataSizes {
            train: train_size,
            dev: dev.len(),
            test: test.len(),
            merged_from,
        },
        members: reports,
        ensemble: EnsembleReport {
            spec,
            dev: evaluate(&dev_pred, dev.gold()),
            test: evaluate(&test_pred, test.gold()),
        },
        timing: cfg.record_timing.then(|| Timing {
            total_ms: start.elapsed().as_millis(),
        }),
        predictions: RunPredictions {
            dev: dev_pred,
            test: test_pred,
            members: member_preds,
        },
    };
    if let Some(dir) = &cfg.output {
        write_outputs(&report, dir, dev, test)?;
    }
    Ok(report)
}

fn file_safe(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_alphanumeric() || "-_+.".contains(c) {
                c
            } else {
                '_'
            }
        })
        .collect()
}

/// `report.json`, ensemble and member prediction files, and scatter plots
/// for every split that has gold scores.
pub fn write_outputs(
    report: &RunReport,
    dir: &Path,
    dev: &PairDataset,
    test: &PairDataset,
) -> Result<()> {
    let members_dir = dir.join("members");
    std::fs::create_dir_all(&members_dir).map_err(|e| Error::io(&members_dir, e))?;
    let report_path = dir.join("report.json");
    std::fs::write(&report_path, report.to_json()?).map_err(|e| Error::io(&report_path, e))?;

    let preds = &report.predictions;
    write_predictions(dev, &preds.dev, dir.join("dev_predictions.csv"))?;
    write_predictions(test, &preds.test, dir.join("test_predictions.csv"))?;
    for (m, p) in report.members.iter().zip(&preds.members) {
        if let Some((d, t)) = p {
            let stem = file_safe(&m.name);
            write_predictions(dev, d, members_dir.join(format!("{stem}.dev.csv")))?;
            write_predictions(test, t, members_dir.join(format!("{stem}.test.csv")))?;
        }
    }
    if let Some(gold) = dev.gold() {
        emit_scatter(gold, &preds.dev, dir.join("scatter_dev.csv"))?;
    }
    if let Some(gold) = test.gold() {
        emit_scatter(gold, &preds.test, dir.join("scatter_test.csv"))?;
    }
    Ok(())
}
