use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use strel::corpus::{
    load_dataset_with, merge_train_sets, read_predictions, write_dataset, GoldColumn, LoadOptions,
    PairDataset, Split,
};
use strel::featurize::{fit_ppmi, ppmi_embed, tfidf_embed, DEFAULT_WINDOW};
use strel::metrics::spearman;
use strel::pairsim::{build_pair_features, FeatureMode};
use strel::pipeline::{emit_scatter, run, MergeSource, RunConfig, Track};
use strel::tokenize::{fit_vocab, tokenize};
use strel::{Error, Result};

#[derive(Parser)]
#[command(
    name = "strel",
    version,
    about = "Semantic textual relatedness pipelines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Tfidf,
    Ppmi,
}

#[derive(Subcommand)]
enum Command {
    /// Embed a dataset with TF-IDF or PPMI and write the embedding TSV.
    Featurize {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_enum)]
        method: Method,
        /// Datasets whose sentences fit the vocabulary (default: --data).
        #[arg(long = "fit")]
        fit: Vec<PathBuf>,
        #[arg(long, default_value_t = 1)]
        min_df: usize,
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        vocab_out: Option<PathBuf>,
        /// Also write the pair feature matrix as CSV.
        #[arg(long)]
        features_out: Option<PathBuf>,
        #[arg(long, default_value = "rich")]
        mode: FeatureMode,
    },
    /// Merge other languages' training sets for a cross-lingual target.
    MergeTrain {
        #[arg(long)]
        target: String,
        /// `lang=path`, repeatable.
        #[arg(long = "source", required = true)]
        sources: Vec<MergeSource>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a track protocol from a key = value config file.
    Run {
        #[arg(long)]
        track: Track,
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output` from the config.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Spearman correlation of predictions against gold, aligned by PairID.
    Evaluate {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        pred: PathBuf,
    },
    /// Gold-vs-prediction scatter CSV and SVG, aligned by PairID.
    Scatter {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn load(path: &PathBuf, gold: GoldColumn) -> Result<PairDataset> {
    load_dataset_with(path, &LoadOptions::infer(path, gold))
}

/// Gold scores and predictions in gold-file order.
fn aligned(gold_path: &PathBuf, pred_path: &PathBuf) -> Result<(Vec<f64>, Vec<f64>)> {
    let gold = load(gold_path, GoldColumn::Required)?;
    let preds = read_predictions(pred_path)?;
    if preds.len() != gold.len() {
        return Err(Error::Alignment {
            expected: gold.len(),
            actual: preds.len(),
        });
    }
    let by_id: HashMap<&str, f64> = preds.iter().map(|(id, v)| (id.as_str(), *v)).collect();
    if by_id.len() != preds.len() {
        return Err(Error::Integrity("duplicate PairID in predictions".into()));
    }
    let pred =
        gold.pairs()
            .iter()
            .map(|p| {
                by_id.get(p.pair_id.as_str()).copied().ok_or_else(|| {
                    Error::Coverage(format!("no prediction for pair `{}`", p.pair_id))
                })
            })
            .collect::<Result<Vec<_>>>()?;
    Ok((gold.gold().expect("required").to_vec(), pred))
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Featurize {
            data,
            method,
            fit,
            min_df,
            window,
            out,
            vocab_out,
            features_out,
            mode,
        } => {
            let ds = load(&data, GoldColumn::Ignore)?;
            let fit_sets = if fit.is_empty() {
                vec![ds.clone()]
            } else {
                fit.iter()
                    .map(|p| load(p, GoldColumn::Ignore))
                    .collect::<Result<Vec<_>>>()?
            };
            let corpus: Vec<Vec<String>> = fit_sets
                .iter()
                .flat_map(|d| d.sentences())
                .map(tokenize)
                .collect();
            let vocab = fit_vocab(&corpus, min_df)?;
            if let Some(path) = vocab_out {
                vocab.save(path)?;
            }
            let emb = match method {
                Method::Tfidf => tfidf_embed(&ds, &vocab)?,
                Method::Ppmi => ppmi_embed(&ds, &fit_ppmi(&corpus, &vocab, window)?)?,
            };
            emb.save(&out)?;
            if let Some(path) = features_out {
                let feats = build_pair_features(&ds, &emb, mode)?;
                let file = std::fs::File::create(&path).map_err(|e| Error::Io {
                    path: path.clone(),
                    source: e,
                })?;
                feats.write_csv(std::io::BufWriter::new(file))?;
            }
            eprintln!(
                "{} vectors of dim {} -> {}",
                emb.len(),
                emb.dim(),
                out.display()
            );
        }
        Command::MergeTrain {
            target,
            sources,
            out,
        } => {
            let sets = sources
                .iter()
                .map(|s| {
                    load_dataset_with(
                        &s.path,
                        &LoadOptions::new(&s.language, Split::Train, GoldColumn::Required),
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            let merged = merge_train_sets(&sets, &target)?;
            write_dataset(&merged, &out)?;
            for s in &sets {
                eprintln!("{}: {}", s.language(), s.len());
            }
            eprintln!("merged: {} -> {}", merged.len(), out.display());
        }
        Command::Run {
            track,
            config,
            output,
        } => {
            let mut cfg = RunConfig::load(&config)?;
            if cfg.track != track {
                return Err(Error::Config(format!(
                    "--track {track} but {} declares track {}",
                    config.display(),
                    cfg.track
                )));
            }
            if output.is_some() {
                cfg.output = output;
            }
            let report = run(&cfg)?;
            print!("{}", report.to_json()?);
        }
        Command::Evaluate { gold, pred } => {
            let (g, p) = aligned(&gold, &pred)?;
            let report = spearman(&p, &g)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&report).map_err(Error::from)?
            );
        }
        Command::Scatter { gold, pred, out } => {
            let (g, p) = aligned(&gold, &pred)?;
            let svg = emit_scatter(&g, &p, &out)?;
            eprintln!("{} points -> {}, {}", g.len(), out.display(), svg.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
