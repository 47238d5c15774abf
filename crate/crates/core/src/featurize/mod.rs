//! Sentence embeddings: TF-IDF, PPMI, and externally computed vectors.
//!
//! Every route produces an [`EmbeddingSet`] keyed by `<pair_id>#a` and
//! `<pair_id>#b`. External vectors arrive as a TSV file:
//!
//! ```text
//! #dim 3
//! p1#a<TAB>0.1<TAB>0.2<TAB>0.3
//! p1#b<TAB>0.0<TAB>0.5<TAB>0.1
//! ```

mod ppmi;
mod tfidf;

use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::PairDataset;
use crate::error::{Error, Result};

pub use ppmi::{fit_ppmi, ppmi_embed, PpmiModel, DEFAULT_WINDOW};
pub use tfidf::{tfidf_embed, TfidfModel};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Provenance {
    Tfidf,
    Ppmi,
    External(String),
}

impl Provenance {
    /// Short label used in member names: `tfidf`, `ppmi`, or the external name.
    pub fn label(&self) -> &str {
        match self {
            Provenance::Tfidf => "tfidf",
            Provenance::Ppmi => "ppmi",
            Provenance::External(name) => name,
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Tfidf => f.write_str("tfidf"),
            Provenance::Ppmi => f.write_str("ppmi"),
            Provenance::External(name) => write!(f, "external:{name}"),
        }
    }
}

impl FromStr for Provenance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tfidf" => Ok(Provenance::Tfidf),
            "ppmi" => Ok(Provenance::Ppmi),
            _ => match s.strip_prefix("external:") {
                Some(name) if !name.is_empty() => Ok(Provenance::External(name.to_string())),
                _ => Err(Error::Config(format!("unknown embedding provenance `{s}`"))),
            },
        }
    }
}

impl From<Provenance> for String {
    fn from(p: Provenance) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for Provenance {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// `<pair_id>#a` or `<pair_id>#b`.
pub fn sentence_key(pair_id: &str, side: Side) -> String {
    match side {
        Side::A => format!("{pair_id}#a"),
        Side::B => format!("{pair_id}#b"),
    }
}

/// Dense sentence vectors of one fixed dimension, in insertion order.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingSet {
    provenance: Provenance,
    dim: usize,
    keys: Vec<String>,
    vectors: Vec<Vec<f64>>,
    index: HashMap<String, usize>,
}

impl EmbeddingSet {
    pub fn new(provenance: Provenance, dim: usize) -> Self {
        EmbeddingSet {
            provenance,
            dim,
            keys: Vec::new(),
            vectors: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[String] {
        &self.keys
    }

    pub fn get(&self, key: &str) -> Option<&[f64]> {
        self.index.get(key).map(|&i| self.vectors[i].as_slice())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.keys
            .iter()
            .zip(&self.vectors)
            .map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn insert(&mut self, key: impl Into<String>, vector: Vec<f64>) -> Result<()> {
        let key = key.into();
        if vector.len() != self.dim {
            return Err(Error::DimMismatch {
                left: self.dim,
                right: vector.len(),
            });
        }
        if vector.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation(format!(
                "non-finite value in vector `{key}`"
            )));
        }
        if self.index.contains_key(&key) {
            return Err(Error::Integrity(format!("duplicate embedding key `{key}`")));
        }
        self.index.insert(key.clone(), self.keys.len());
        self.keys.push(key);
        self.vectors.push(vector);
        Ok(())
    }

    /// Absorb another set of the same provenance and dimension.
    pub fn extend(&mut self, other: EmbeddingSet) -> Result<()> {
        if other.dim != self.dim {
            return Err(Error::DimMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        for (key, vector) in other.keys.into_iter().zip(other.vectors) {
            self.insert(key, vector)?;
        }
        Ok(())
    }

    /// Both sentence vectors for a pair.
    pub fn pair(&self, pair_id: &str) -> Result<(&[f64], &[f64])> {
        let a = sentence_key(pair_id, Side::A);
        let b = sentence_key(pair_id, Side::B);
        match (self.get(&a), self.get(&b)) {
            (Some(va), Some(vb)) => Ok((va, vb)),
            (None, _) => Err(Error::Coverage(a)),
            (_, None) => Err(Error::Coverage(b)),
        }
    }

    /// Fails with a coverage error naming the first pair that lacks a vector.
    pub fn check_covers(&self, dataset: &PairDataset) -> Result<()> {
        dataset
            .pairs()
            .iter()
            .try_for_each(|p| self.pair(&p.pair_id).map(|_| ()))
    }

    pub fn write_tsv<W: Write>(&self, out: W) -> Result<()> {
        let mut out = std::io::BufWriter::new(out);
        let io = |e| Error::io("<embeddings>", e);
        writeln!(out, "#dim {}", self.dim).map_err(io)?;
        for (key, vector) in self.iter() {
            write!(out, "{key}").map_err(io)?;
            for v in vector {
                write!(out, "\t{v}").map_err(io)?;
            }
            writeln!(out).map_err(io)?;
        }
        out.flush().map_err(io)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_tsv(file)
    }

    pub fn read_tsv<R: BufRead>(input: R, provenance: Provenance) -> Result<Self> {
        let io = |e| Error::io("<embeddings>", e);
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("line 1: missing `#dim D` header".into()))?
            .map_err(io)?;
        let dim = header
            .trim_end_matches('\r')
            .strip_prefix("#dim ")
            .and_then(|d| d.trim().parse::<usize>().ok())
            .filter(|&d| d > 0)
            .ok_or_else(|| Error::Format(format!("line 1: bad header `{header}`")))?;
        let mut set = EmbeddingSet::new(provenance, dim);
        for (i, line) in lines.enumerate() {
            let lineno = i + 2;
            let line = line.map_err(io)?;
            let line = line.trim_end_matches('\r');
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split('\t');
            let key = fields.next().unwrap_or_default();
            if key.is_empty() {
                return Err(Error::Format(format!("line {lineno}: empty key")));
            }
            let values = fields
                .map(|f| {
                    f.trim().parse::<f64>().map_err(|_| {
                        Error::Format(format!("line {lineno}: unparseable value `{f}`"))
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            if values.len() != dim {
                return Err(Error::Format(format!(
                    "line {lineno}: expected {dim} values, found {}",
                    values.len()
                )));
            }
            if values.iter().any(|v| !v.is_finite()) {
                return Err(Error::Validation(format!(
                    "line {lineno}: non-finite value for `{key}`"
                )));
            }
            if set.index.contains_key(key) {
                return Err(Error::Integrity(format!(
                    "line {lineno}: duplicate key `{key}`"
                )));
            }
            set.insert(key, values)?;
        }
        Ok(set)
    }
}

/// Load an embedding TSV written by the extraction script (or by [`EmbeddingSet::save`]).
pub fn load_external_embeddings(path: impl AsRef<Path>, name: &str) -> Result<EmbeddingSet> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    EmbeddingSet::read_tsv(BufReader::new(file), Provenance::External(name.to_string()))
}

/// Scale to unit Euclidean norm; zero vectors stay zero.
pub fn l2_normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

/// Embed both sentences of every pair with `f`, in dataset order.
pub(crate) fn embed_pairs<F>(
    dataset: &PairDataset,
    provenance: Provenance,
    dim: usize,
    f: F,
) -> Result<EmbeddingSet>
where
    F: Fn(&str) -> Vec<f64> + Sync,
{
    let rows: Vec<(Vec<f64>, Vec<f64>)> = dataset
        .pairs()
        .par_iter()
        .map(|p| (f(&p.sentence_a), f(&p.sentence_b)))
        .collect();
    let mut set = EmbeddingSet::new(provenance, dim);
    for (pair, (a, b)) in dataset.pairs().iter().zip(rows) {
        set.insert(sentence_key(&pair.pair_id, Side::A), a)?;
        set.insert(sentence_key(&pair.pair_id, Side::B), b)?;
    }
    Ok(set)
}
