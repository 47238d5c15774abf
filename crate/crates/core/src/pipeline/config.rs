//! Run configuration as a flat `key = value` file.
//!
//! ```text
//! # supervised English run
//! track = a
//! language = eng
//! train = data/eng_train.csv
//! dev = data/eng_dev.csv
//! test = data/eng_test.csv
//! source = tfidf
//! source = ppmi
//! source = external:labse=emb/eng_labse.tsv
//! output = out/eng_a
//! ```
//!
//! `source` and `merge` may repeat. Relative paths resolve against the
//! directory holding the config file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ensemble::WeightRule;
use crate::error::{Error, Result};
use crate::featurize::DEFAULT_WINDOW;
use crate::pairsim::FeatureMode;
use crate::regress::ElasticNetParams;

pub const DEFAULT_ALPHA_GRID: [f64; 3] = [0.01, 0.1, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Track {
    A,
    B,
    C,
}

impl fmt::Display for Track {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Track::A => "a",
            Track::B => "b",
            Track::C => "c",
        })
    }
}

impl FromStr for Track {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(Track::A),
            "b" => Ok(Track::B),
            "c" => Ok(Track::C),
            other => Err(Error::Config(format!("unknown track `{other}`"))),
        }
    }
}

/// Where sentence embeddings come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum SourceSpec {
    Tfidf,
    Ppmi,
    /// Precomputed vectors; several files are merged into one set.
    External {
        name: String,
        paths: Vec<PathBuf>,
    },
}

impl SourceSpec {
    pub fn label(&self) -> &str {
        match self {
            SourceSpec::Tfidf => "tfidf",
            SourceSpec::Ppmi => "ppmi",
            SourceSpec::External { name, .. } => name,
        }
    }

    fn resolve(self, base: &Path) -> Self {
        match self {
            SourceSpec::External { name, paths } => SourceSpec::External {
                name,
                paths: paths.into_iter().map(|p| base.join(p)).collect(),
            },
            other => other,
        }
    }
}

impl fmt::Display for SourceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SourceSpec::Tfidf => f.write_str("tfidf"),
            SourceSpec::Ppmi => f.write_str("ppmi"),
            SourceSpec::External { name, paths } => {
                let joined: Vec<String> = paths.iter().map(|p| p.display().to_string()).collect();
                write!(f, "external:{name}={}", joined.join(","))
            }
        }
    }
}

impl FromStr for SourceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "tfidf" => Ok(SourceSpec::Tfidf),
            "ppmi" => Ok(SourceSpec::Ppmi),
            other => {
                let rest = other
                    .strip_prefix("external:")
                    .ok_or_else(|| Error::Config(format!("unknown source `{other}`")))?;
                let (name, paths) = rest.split_once('=').ok_or_else(|| {
                    Error::Config(format!(
                        "external source `{other}` needs `name=path[,path]`"
                    ))
                })?;
                let name = name.trim();
                let paths: Vec<PathBuf> = paths
                    .split(',')
                    .map(str::trim)
                    .filter(|p| !p.is_empty())
                    .map(PathBuf::from)
                    .collect();
                if name.is_empty() || paths.is_empty() {
                    return Err(Error::Config(format!(
                        "incomplete external source `{other}`"
                    )));
                }
                Ok(SourceSpec::External {
                    name: name.to_string(),
                    paths,
                })
            }
        }
    }
}

impl From<SourceSpec> for String {
    fn from(s: SourceSpec) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for SourceSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// One other-language training set for a cross-lingual run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergeSource {
    pub language: String,
    pub path: PathBuf,
}

impl FromStr for MergeSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (language, path) = s
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("merge entry `{s}` needs `lang=path`")))?;
        let (language, path) = (language.trim(), path.trim());
        if language.is_empty() || path.is_empty() {
            return Err(Error::Config(format!("incomplete merge entry `{s}`")));
        }
        Ok(MergeSource {
            language: language.to_string(),
            path: PathBuf::from(path),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub track: Track,
    pub language: String,
    pub train: Option<PathBuf>,
    pub dev: Option<PathBuf>,
    pub test: Option<PathBuf>,
    pub merge: Vec<MergeSource>,
    pub sources: Vec<SourceSpec>,
    /// Defaults to `rich` for tracks A and C; track B always scores raw cosine.
    pub feature_mode: Option<FeatureMode>,
    pub elasticnet: ElasticNetParams,
    /// Alphas to try for ElasticNet members, picked by dev Spearman.
    pub alpha_grid: Option<Vec<f64>>,
    pub min_df: usize,
    pub ppmi_window: usize,
    /// Overrides the track's default weighting rule.
    pub ensemble: Option<WeightRule>,
    pub output: Option<PathBuf>,
    pub seed: u64,
    /// Adds wall-clock timings to the report, which makes it non-reproducible.
    pub record_timing: bool,
}

impl RunConfig {
    pub fn new(track: Track, language: impl Into<String>) -> Self {
        RunConfig {
            track,
            language: language.into(),
            train: None,
            dev: None,
            test: None,
            merge: Vec::new(),
            sources: Vec::new(),
            feature_mode: None,
            elasticnet: ElasticNetParams::default(),
            alpha_grid: None,
            min_df: 1,
            ppmi_window: DEFAULT_WINDOW,
            ensemble: None,
            output: None,
            seed: 0,
            record_timing: false,
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or_else(|| Path::new(""));
        RunConfig::parse(&text, base)
    }

    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut track = None;
        let mut language = None;
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "track" => track = Some(value.parse::<Track>()?),
                "language" => language = Some(value.to_string()),
                _ => entries.push((i + 1, key.to_string(), value.to_string())),
            }
        }
        let track = track.ok_or_else(|| Error::Config("missing `track`".into()))?;
        let language = language.ok_or_else(|| Error::Config("missing `language`".into()))?;
        let mut cfg = RunConfig::new(track, language);

        let path = |v: &str| Some(base_dir.join(v));
        for (line, key, value) in entries {
            let bad = |what: &str| Error::Config(format!("line {line}: bad {what} `{value}`"));
            match key.as_str() {
                "train" => cfg.train = path(&value),
                "dev" => cfg.dev = path(&value),
                "test" => cfg.test = path(&value),
                "output" => cfg.output = path(&value),
                "source" => cfg
                    .sources
                    .push(value.parse::<SourceSpec>()?.resolve(base_dir)),
                "merge" => {
                    let mut m: MergeSource = value.parse()?;
                    m.path = base_dir.join(m.path);
                    cfg.merge.push(m);
                }
                "feature_mode" => cfg.feature_mode = Some(value.parse()?),
                "alpha" => cfg.elasticnet.alpha = value.parse().map_err(|_| bad("alpha"))?,
                "l1_ratio" => {
                    cfg.elasticnet.l1_ratio = value.parse().map_err(|_| bad("l1_ratio"))?
                }
                "tol" => cfg.elasticnet.tol = value.parse().map_err(|_| bad("tol"))?,
                "max_iter" => {
                    cfg.elasticnet.max_iter = value.parse().map_err(|_| bad("max_iter"))?
                }
                "alpha_grid" => {
                    cfg.alpha_grid = match value.as_str() {
                        "off" | "false" | "none" => None,
                        "default" | "true" | "on" => Some(DEFAULT_ALPHA_GRID.to_vec()),
                        list => Some(
                            list.split(',')
                                .map(|v| v.trim().parse::<f64>())
                                .collect::<std::result::Result<_, _>>()
                                .map_err(|_| bad("alpha_grid"))?,
                        ),
                    }
                }
                "min_df" => cfg.min_df = value.parse().map_err(|_| bad("min_df"))?,
                "ppmi_window" => cfg.ppmi_window = value.parse().map_err(|_| bad("ppmi_window"))?,
                "ensemble" => cfg.ensemble = Some(value.parse()?),
                "seed" => cfg.seed = value.parse().map_err(|_| bad("seed"))?,
                "record_timing" => {
                    cfg.record_timing = value.parse().map_err(|_| bad("record_timing"))?
                }
                other => return Err(Error::Config(format!("line {line}: unknown key `{other}`"))),
            }
        }
        Ok(cfg)
    }

    /// Render back to the `key = value` format. Paths are written as stored.
    pub fn to_text(&self) -> String {
        let mut out = format!("track = {}\nlanguage = {}\n", self.track, self.language);
        let mut push = |k: &str, v: String| out.push_str(&format!("{k} = {v}\n"));
        for (k, p) in [
            ("train", &self.train),
            ("dev", &self.dev),
            ("test", &self.test),
        ] {
            if let Some(p) = p {
                push(k, p.display().to_string());
            }
        }
        for m in &self.merge {
            push("merge", format!("{}={}", m.language, m.path.display()));
        }
        for s in &self.sources {
            push("source", s.to_string());
        }
        if let Some(mode) = self.feature_mode {
            push("feature_mode", mode.to_string());
        }
        push("alpha", self.elasticnet.alpha.to_string());
        push("l1_ratio", self.elasticnet.l1_ratio.to_string());
        push("tol", self.elasticnet.tol.to_string());
        push("max_iter", self.elasticnet.max_iter.to_string());
        if let Some(grid) = &self.alpha_grid {
            let g: Vec<String> = grid.iter().map(f64::to_string).collect();
            push("alpha_grid", g.join(","));
        }
        push("min_df", self.min_df.to_string());
        push("ppmi_window", self.ppmi_window.to_string());
        if let Some(rule) = self.ensemble {
            push("ensemble", rule.to_string());
        }
        if let Some(o) = &self.output {
            push("output", o.display().to_string());
        }
        push("seed", self.seed.to_string());
        push("record_timing", self.record_timing.to_string());
        out
    }

    pub fn feature_mode(&self) -> FeatureMode {
        match self.track {
            Track::B => FeatureMode::CosineOnly,
            Track::A | Track::C => self.feature_mode.unwrap_or(FeatureMode::Rich),
        }
    }

    pub fn weight_rule(&self) -> WeightRule {
        self.ensemble.unwrap_or(match self.track {
            Track::A => WeightRule::DevWeighted,
            Track::B | Track::C => WeightRule::Uniform,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let need = |p: &Option<PathBuf>, what: &str| {
            p.as_ref()
                .map(|_| ())
                .ok_or_else(|| Error::Config(format!("track {} needs a `{what}` file", self.track)))
        };
        if self.language.is_empty() {
            return Err(Error::Config("empty language".into()));
        }
        if self.sources.is_empty() {
            return Err(Error::Config("no embedding sources configured".into()));
        }
        need(&self.dev, "dev")?;
        need(&self.test, "test")?;
        match self.track {
            Track::A => {
                need(&self.train, "train")?;
                if !self.merge.is_empty() {
                    return Err(Error::Config(
                        "track a does not merge other languages".into(),
                    ));
                }
            }
            Track::B => {
                if self.train.is_some() || !self.merge.is_empty() {
                    return Err(Error::Config(
                        "track b runs without labelled training data".into(),
                    ));
                }
            }
            Track::C => {
                if self.train.is_some() {
                    return Err(Error::Config(
                        "track c trains only on merged other-language sets; drop `train`".into(),
                    ));
                }
                if self.merge.is_empty() {
                    return Err(Error::Config(
                        "track c needs at least one `merge` source".into(),
                    ));
                }
                if let Some(m) = self.merge.iter().find(|m| m.language == self.language) {
                    return Err(Error::Config(format!(
                        "merge source `{}` is the target language",
                        m.language
                    )));
                }
            }
        }
        if let Some(grid) = &self.alpha_grid {
            if grid.is_empty() || grid.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
                return Err(Error::Config(
                    "alpha_grid entries must be finite and >= 0".into(),
                ));
            }
        }
        if self.min_df == 0 || self.ppmi_window == 0 {
            return Err(Error::Config("min_df and ppmi_window must be >= 1".into()));
        }
        Ok(())
    }
}
