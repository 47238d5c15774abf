use crate::corpus::PairDataset;
use crate::error::{Error, Result};
use crate::tokenize::{tokenize, Vocabulary};

use super::{embed_pairs, l2_normalize, EmbeddingSet, Provenance};

/// Smoothed inverse document frequencies over a fitted vocabulary.
#[derive(Debug, Clone)]
pub struct TfidfModel {
    vocab: Vocabulary,
    idf: Vec<f64>,
}

impl TfidfModel {
    pub fn new(vocab: Vocabulary) -> Result<Self> {
        if vocab.is_empty() {
            return Err(Error::EmptyVocabulary);
        }
        let n = vocab.n_docs() as f64;
        let idf = (0..vocab.len())
            .map(|i| ((1.0 + n) / (1.0 + vocab.doc_freq_at(i) as f64)).ln() + 1.0)
            .collect();
        Ok(TfidfModel { vocab, idf })
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn idf(&self) -> &[f64] {
        &self.idf
    }

    /// Raw term counts times idf, L2-normalized. Unknown tokens are skipped.
    pub fn transform(&self, text: &str) -> Vec<f64> {
        let mut v = vec![0.0; self.vocab.len()];
        for tok in tokenize(text) {
            if let Some(i) = self.vocab.index_of(&tok) {
                v[i] += 1.0;
            }
        }
        v.iter_mut().zip(&self.idf).for_each(|(x, idf)| *x *= idf);
        l2_normalize(&mut v);
        v
    }
}

pub fn tfidf_embed(dataset: &PairDataset, vocab: &Vocabulary) -> Result<EmbeddingSet> {
    let model = TfidfModel::new(vocab.clone())?;
    embed_pairs(dataset, Provenance::Tfidf, vocab.len(), |s| {
        model.transform(s)
    })
}
