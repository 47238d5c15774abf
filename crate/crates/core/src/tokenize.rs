//! Tokenization and vocabulary fitting shared by the TF-IDF and PPMI featurizers.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::{BufRead, Write};
use std::path::Path;

use unicode_general_category::get_general_category;

use crate::error::{Error, Result};

fn is_punctuation(c: char) -> bool {
    get_general_category(c).abbreviation().starts_with('P')
}

/// Lowercase, split on whitespace, strip leading and trailing punctuation.
///
/// The same rule applies to every language; scripts without case pass through
/// unchanged.
pub fn tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split_whitespace()
        .map(|tok| tok.trim_matches(is_punctuation))
        .filter(|tok| !tok.is_empty())
        .map(str::to_owned)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
    doc_freq: Vec<usize>,
    n_docs: usize,
}

impl Vocabulary {
    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    /// Document frequency by column id.
    pub fn doc_freq_at(&self, column: usize) -> usize {
        self.doc_freq[column]
    }

    pub fn doc_freq(&self, term: &str) -> Option<usize> {
        self.index_of(term).map(|i| self.doc_freq[i])
    }

    fn from_parts(terms: Vec<String>, doc_freq: Vec<usize>, n_docs: usize) -> Self {
        let index = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Vocabulary {
            terms,
            index,
            doc_freq,
            n_docs,
        }
    }

    /// `#n_docs N` header, then `term<TAB>doc_freq` per line in column order.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> Result<()> {
        let io = |e| Error::io("<vocabulary>", e);
        writeln!(out, "#n_docs {}", self.n_docs).map_err(io)?;
        for (term, df) in self.terms.iter().zip(&self.doc_freq) {
            writeln!(out, "{term}\t{df}").map_err(io)?;
        }
        Ok(())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_tsv(std::io::BufWriter::new(file))
    }

    pub fn read_tsv<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("vocabulary file is empty".into()))?
            .map_err(|e| Error::io("<vocabulary>", e))?;
        let n_docs = header
            .strip_prefix("#n_docs ")
            .and_then(|n| n.trim().parse::<usize>().ok())
            .ok_or_else(|| Error::Format(format!("bad vocabulary header `{header}`")))?;
        let mut terms = Vec::new();
        let mut doc_freq = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let line = line.map_err(|e| Error::io("<vocabulary>", e))?;
            let (term, df) = line.split_once('\t').ok_or_else(|| {
                Error::Format(format!("line {}: expected term<TAB>df", lineno + 2))
            })?;
            let df: usize = df
                .trim()
                .parse()
                .map_err(|_| Error::Format(format!("line {}: bad doc freq", lineno + 2)))?;
            if df == 0 || df > n_docs {
                return Err(Error::Validation(format!(
                    "doc freq {df} for `{term}` outside 1..={n_docs}"
                )));
            }
            terms.push(term.to_string());
            doc_freq.push(df);
        }
        let vocab = Vocabulary::from_parts(terms, doc_freq, n_docs);
        if vocab.index.len() != vocab.terms.len() {
            return Err(Error::Integrity("duplicate vocabulary term".into()));
        }
        Ok(vocab)
    }
}

/// Keep terms appearing in at least `min_df` documents, sorted lexicographically.
pub fn fit_vocab<D: AsRef<[String]>>(corpus: &[D], min_df: usize) -> Result<Vocabulary> {
    if corpus.is_empty() {
        return Err(Error::Empty("vocabulary corpus"));
    }
    if min_df == 0 {
        return Err(Error::Hyperparameter("min_df must be at least 1".into()));
    }
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for doc in corpus {
        let distinct: HashSet<&str> = doc.as_ref().iter().map(String::as_str).collect();
        for term in distinct {
            *counts.entry(term).or_default() += 1;
        }
    }
    let (terms, doc_freq): (Vec<String>, Vec<usize>) = counts
        .into_iter()
        .filter(|&(_, df)| df >= min_df)
        .map(|(t, df)| (t.to_string(), df))
        .unzip();
    if terms.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    Ok(Vocabulary::from_parts(terms, doc_freq, corpus.len()))
}
