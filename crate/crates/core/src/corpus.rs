//! Sentence-pair datasets in the `PairID,Text[,Score]` CSV layout.
//!
//! Input files carry a `PairID` column, a `Text` column holding both sentences
//! joined by a separator (a newline inside the quoted field, or a tab), and an
//! optional `Score` column with relatedness in `[0, 1]`. Pair order is kept
//! exactly as read so that prediction files line up row for row.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Dev,
    Test,
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Split::Train => "train",
            Split::Dev => "dev",
            Split::Test => "test",
        })
    }
}

impl FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "train" => Ok(Split::Train),
            "dev" => Ok(Split::Dev),
            "test" => Ok(Split::Test),
            other => Err(Error::Config(format!("unknown split `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentencePair {
    pub pair_id: String,
    pub sentence_a: String,
    pub sentence_b: String,
}

impl SentencePair {
    pub fn new(
        pair_id: impl Into<String>,
        sentence_a: impl Into<String>,
        sentence_b: impl Into<String>,
    ) -> Self {
        SentencePair {
            pair_id: pair_id.into(),
            sentence_a: sentence_a.into(),
            sentence_b: sentence_b.into(),
        }
    }
}

/// An ordered, validated collection of sentence pairs for one language and split.
///
/// Immutable once built; every constructor path goes through [`PairDataset::new`].
#[derive(Debug, Clone, PartialEq)]
pub struct PairDataset {
    language: String,
    split: Split,
    pairs: Vec<SentencePair>,
    gold: Option<Vec<f64>>,
}

impl PairDataset {
    pub fn new(
        language: impl Into<String>,
        split: Split,
        pairs: Vec<SentencePair>,
        gold: Option<Vec<f64>>,
    ) -> Result<Self> {
        let mut seen = HashSet::with_capacity(pairs.len());
        for pair in &pairs {
            if pair.pair_id.is_empty() {
                return Err(Error::Validation("empty pair id".into()));
            }
            if !seen.insert(pair.pair_id.as_str()) {
                return Err(Error::Integrity(format!(
                    "duplicate pair id `{}`",
                    pair.pair_id
                )));
            }
            if pair.sentence_a.trim().is_empty() || pair.sentence_b.trim().is_empty() {
                return Err(Error::Row {
                    pair_id: pair.pair_id.clone(),
                    message: "empty sentence".into(),
                });
            }
        }
        if let Some(gold) = &gold {
            if gold.len() != pairs.len() {
                return Err(Error::Alignment {
                    expected: pairs.len(),
                    actual: gold.len(),
                });
            }
            for (pair, &score) in pairs.iter().zip(gold) {
                check_unit_score(score).map_err(|message| Error::Row {
                    pair_id: pair.pair_id.clone(),
                    message,
                })?;
            }
        }
        Ok(PairDataset {
            language: language.into(),
            split,
            pairs,
            gold,
        })
    }

    pub fn language(&self) -> &str {
        &self.language
    }

    pub fn split(&self) -> Split {
        self.split
    }

    pub fn pairs(&self) -> &[SentencePair] {
        &self.pairs
    }

    pub fn gold(&self) -> Option<&[f64]> {
        self.gold.as_deref()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Both sentences of every pair, in pair order (`a` then `b`).
    pub fn sentences(&self) -> impl Iterator<Item = &str> {
        self.pairs
            .iter()
            .flat_map(|p| [p.sentence_a.as_str(), p.sentence_b.as_str()])
    }

    /// The same pairs with the gold column removed.
    pub fn without_gold(&self) -> PairDataset {
        PairDataset {
            gold: None,
            ..self.clone()
        }
    }
}

fn check_unit_score(score: f64) -> std::result::Result<(), String> {
    if !score.is_finite() || !(0.0..=1.0).contains(&score) {
        Err(format!("score {score} outside [0, 1]"))
    } else {
        Ok(())
    }
}

/// Whether the `Score` column is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GoldColumn {
    /// Column must exist.
    Required,
    /// Read when present.
    Optional,
    /// Never read, even when present.
    Ignore,
}

#[derive(Debug, Clone)]
pub struct LoadOptions {
    pub language: String,
    pub split: Split,
    pub gold: GoldColumn,
    /// Tried in order; the first one found in a row splits it.
    pub separators: Vec<String>,
}

impl LoadOptions {
    pub fn new(language: impl Into<String>, split: Split, gold: GoldColumn) -> Self {
        LoadOptions {
            language: language.into(),
            split,
            gold,
            separators: vec!["\n".to_string(), "\t".to_string()],
        }
    }

    /// Guess language and split from a `<lang>_<split>.csv` style file name.
    /// Unknown splits default to `test`.
    pub fn infer(path: &Path, gold: GoldColumn) -> Self {
        let stem = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("und")
            .to_string();
        let mut parts = stem.split(['_', '-', '.']);
        let language = parts.next().filter(|s| !s.is_empty()).unwrap_or("und");
        let split = parts
            .find_map(|p| p.parse::<Split>().ok())
            .unwrap_or(Split::Test);
        LoadOptions::new(language, split, gold)
    }
}

/// Load a dataset, inferring language and split from the file name.
pub fn load_dataset(path: impl AsRef<Path>, has_gold: bool) -> Result<PairDataset> {
    let path = path.as_ref();
    let gold = if has_gold {
        GoldColumn::Required
    } else {
        GoldColumn::Ignore
    };
    load_dataset_with(path, &LoadOptions::infer(path, gold))
}

pub fn load_dataset_with(path: impl AsRef<Path>, opts: &LoadOptions) -> Result<PairDataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_dataset(file, opts)
}

/// Parse a dataset from any reader. See [`load_dataset_with`].
pub fn read_dataset<R: std::io::Read>(reader: R, opts: &LoadOptions) -> Result<PairDataset> {
    if opts.separators.is_empty() || opts.separators.iter().any(|s| s.is_empty()) {
        return Err(Error::Config(
            "sentence separators must be non-empty".into(),
        ));
    }
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let column = |name: &str| {
        headers.iter().position(|h| {
            h.trim()
                .trim_start_matches('\u{feff}')
                .eq_ignore_ascii_case(name)
        })
    };
    let id_col = column("PairID").ok_or_else(|| Error::Format("missing column `PairID`".into()))?;
    let text_col = column("Text").ok_or_else(|| Error::Format("missing column `Text`".into()))?;
    let score_col = match opts.gold {
        GoldColumn::Required => {
            Some(column("Score").ok_or_else(|| Error::Format("missing column `Score`".into()))?)
        }
        GoldColumn::Optional => column("Score"),
        GoldColumn::Ignore => None,
    };

    let mut pairs = Vec::new();
    let mut gold = score_col.map(|_| Vec::new());
    for record in rdr.records() {
        let record = record?;
        let pair_id = record.get(id_col).unwrap_or("").trim().to_string();
        let text = record
            .get(text_col)
            .ok_or_else(|| Error::Format(format!("row {pair_id}: missing `Text` field")))?;
        let (a, b) = split_text(text, &opts.separators).ok_or_else(|| Error::Row {
            pair_id: pair_id.clone(),
            message: "no sentence separator in `Text`".into(),
        })?;
        if let (Some(col), Some(gold)) = (score_col, gold.as_mut()) {
            let raw = record.get(col).unwrap_or("").trim();
            let score: f64 = raw.parse().map_err(|_| Error::Row {
                pair_id: pair_id.clone(),
                message: format!("unparseable score `{raw}`"),
            })?;
            check_unit_score(score).map_err(Error::Validation)?;
            gold.push(score);
        }
        pairs.push(SentencePair::new(pair_id, a, b));
    }
    PairDataset::new(opts.language.clone(), opts.split, pairs, gold)
}

fn split_text<'t>(text: &'t str, separators: &[String]) -> Option<(&'t str, &'t str)> {
    separators
        .iter()
        .find_map(|sep| text.split_once(sep.as_str()))
        .map(|(a, b)| (a.trim(), b.trim()))
}

/// Build a cross-lingual training set from other languages' training splits.
///
/// Pair ids become `<lang>:<id>`; pairs keep the order of `sources`.
pub fn merge_train_sets(sources: &[PairDataset], target_language: &str) -> Result<PairDataset> {
    if sources.is_empty() {
        return Err(Error::Config("merge list is empty".into()));
    }
    for src in sources {
        if src.split != Split::Train {
            return Err(Error::Config(format!(
                "merge source `{}` is a {} split, not train",
                src.language, src.split
            )));
        }
        if src.language == target_language {
            return Err(Error::Config(format!(
                "merge source language `{}` equals the target language",
                src.language
            )));
        }
    }
    let with_gold = sources.iter().filter(|s| s.gold.is_some()).count();
    if with_gold != 0 && with_gold != sources.len() {
        return Err(Error::Validation(
            "merge sources mix labelled and unlabelled sets".into(),
        ));
    }

    let total = sources.iter().map(PairDataset::len).sum();
    let mut pairs = Vec::with_capacity(total);
    let mut gold = (with_gold != 0).then(|| Vec::with_capacity(total));
    for src in sources {
        pairs.extend(src.pairs.iter().map(|p| SentencePair {
            pair_id: format!("{}:{}", src.language, p.pair_id),
            sentence_a: p.sentence_a.clone(),
            sentence_b: p.sentence_b.clone(),
        }));
        if let (Some(out), Some(src_gold)) = (gold.as_mut(), src.gold.as_ref()) {
            out.extend_from_slice(src_gold);
        }
    }
    // duplicate prefixed ids surface as an integrity error here
    PairDataset::new(target_language, Split::Train, pairs, gold)
}

/// Render a score with nine significant digits.
pub fn format_score(value: f64) -> String {
    if value == 0.0 || !value.is_finite() {
        return format!("{value}");
    }
    let exponent = value.abs().log10().floor() as i32;
    let decimals = (8 - exponent).max(0) as usize;
    format!("{value:.decimals$}")
}

/// Write a `PairID,Pred_Score` file aligned with `dataset`.
pub fn write_predictions(
    dataset: &PairDataset,
    preds: &[f64],
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_predictions_to(dataset, preds, file)
}

pub fn write_predictions_to<W: std::io::Write>(
    dataset: &PairDataset,
    preds: &[f64],
    writer: W,
) -> Result<()> {
    if preds.len() != dataset.len() {
        return Err(Error::Alignment {
            expected: dataset.len(),
            actual: preds.len(),
        });
    }
    for (pair, &p) in dataset.pairs.iter().zip(preds) {
        check_unit_score(p)
            .map_err(|m| Error::Validation(format!("prediction for {}: {m}", pair.pair_id)))?;
    }
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["PairID", "Pred_Score"])?;
    for (pair, &p) in dataset.pairs.iter().zip(preds) {
        wtr.write_record([pair.pair_id.as_str(), format_score(p).as_str()])?;
    }
    wtr.flush().map_err(|e| Error::io("<predictions>", e))?;
    Ok(())
}

/// Read a `PairID,Pred_Score` file in row order.
pub fn read_predictions(path: impl AsRef<Path>) -> Result<Vec<(String, f64)>> {
    let path = path.as_ref();
    let mut rdr = csv::Reader::from_path(path)?;
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim().eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::Format(format!("missing column `{name}`")))
    };
    let id_col = col("PairID")?;
    let score_col = col("Pred_Score")?;
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let id = record.get(id_col).unwrap_or("").to_string();
        let raw = record.get(score_col).unwrap_or("");
        let score = raw.trim().parse::<f64>().map_err(|_| Error::Row {
            pair_id: id.clone(),
            message: format!("unparseable prediction `{raw}`"),
        })?;
        out.push((id, score));
    }
    Ok(out)
}

/// Write a dataset back out in the input layout, sentences joined by a newline.
pub fn write_dataset(dataset: &PairDataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut wtr = csv::Writer::from_path(path)?;
    match &dataset.gold {
        Some(gold) => {
            wtr.write_record(["PairID", "Text", "Score"])?;
            for (pair, score) in dataset.pairs.iter().zip(gold) {
                let text = format!("{}\n{}", pair.sentence_a, pair.sentence_b);
                wtr.write_record([pair.pair_id.as_str(), text.as_str(), &score.to_string()])?;
            }
        }
        None => {
            wtr.write_record(["PairID", "Text"])?;
            for pair in &dataset.pairs {
                let text = format!("{}\n{}", pair.sentence_a, pair.sentence_b);
                wtr.write_record([pair.pair_id.as_str(), text.as_str()])?;
            }
        }
    }
    wtr.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}
