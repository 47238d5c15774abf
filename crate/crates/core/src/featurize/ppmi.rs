use std::collections::BTreeMap;

use crate::corpus::PairDataset;
use crate::error::{Error, Result};
use crate::tokenize::{tokenize, Vocabulary};

use super::{embed_pairs, l2_normalize, EmbeddingSet, Provenance};

pub const DEFAULT_WINDOW: usize = 2;

/// Positive PMI word vectors over a symmetric within-sentence window.
///
/// Rows are sparse: `(context column, value)` sorted by column, strictly
/// positive values only.
#[derive(Debug, Clone)]
pub struct PpmiModel {
    vocab: Vocabulary,
    rows: Vec<Vec<(usize, f64)>>,
    window: usize,
}

impl PpmiModel {
    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn row(&self, term_index: usize) -> &[(usize, f64)] {
        &self.rows[term_index]
    }

    /// PPMI between two terms; 0 when either is unknown or they never co-occur.
    pub fn value(&self, word: &str, context: &str) -> f64 {
        let (Some(w), Some(c)) = (self.vocab.index_of(word), self.vocab.index_of(context)) else {
            return 0.0;
        };
        self.rows[w]
            .binary_search_by_key(&c, |&(col, _)| col)
            .map(|i| self.rows[w][i].1)
            .unwrap_or(0.0)
    }

    /// Mean of the PPMI rows of in-vocabulary tokens, L2-normalized.
    pub fn sentence_vector(&self, tokens: &[String]) -> Vec<f64> {
        let mut v = vec![0.0; self.vocab.len()];
        let mut n = 0usize;
        for tok in tokens {
            if let Some(i) = self.vocab.index_of(tok) {
                n += 1;
                for &(col, val) in &self.rows[i] {
                    v[col] += val;
                }
            }
        }
        if n > 0 {
            v.iter_mut().for_each(|x| *x /= n as f64);
        }
        l2_normalize(&mut v);
        v
    }
}

pub fn fit_ppmi<D: AsRef<[String]>>(
    corpus: &[D],
    vocab: &Vocabulary,
    window: usize,
) -> Result<PpmiModel> {
    if corpus.is_empty() {
        return Err(Error::Empty("PPMI corpus"));
    }
    if window == 0 {
        return Err(Error::Hyperparameter(
            "PPMI window must be at least 1".into(),
        ));
    }

    let mut cooc: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for doc in corpus {
        let ids: Vec<Option<usize>> = doc.as_ref().iter().map(|t| vocab.index_of(t)).collect();
        for (i, &wi) in ids.iter().enumerate() {
            let Some(wi) = wi else { continue };
            for &wj in ids.iter().skip(i + 1).take(window) {
                if let Some(wj) = wj {
                    *cooc.entry((wi, wj)).or_default() += 1.0;
                    *cooc.entry((wj, wi)).or_default() += 1.0;
                }
            }
        }
    }

    let mut counts = vec![0.0; vocab.len()];
    for (&(w, _), &n) in &cooc {
        counts[w] += n;
    }
    let total: f64 = counts.iter().sum();

    let mut rows = vec![Vec::new(); vocab.len()];
    for (&(w, c), &n) in &cooc {
        let pmi = ((n * total) / (counts[w] * counts[c])).ln();
        if pmi > 0.0 {
            rows[w].push((c, pmi));
        }
    }
    Ok(PpmiModel {
        vocab: vocab.clone(),
        rows,
        window,
    })
}

pub fn ppmi_embed(dataset: &PairDataset, model: &PpmiModel) -> Result<EmbeddingSet> {
    embed_pairs(dataset, Provenance::Ppmi, model.vocab.len(), |s| {
        model.sentence_vector(&tokenize(s))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tokenize::fit_vocab;

    fn toks(raw: &[&str]) -> Vec<Vec<String>> {
        raw.iter().map(|d| tokenize(d)).collect()
    }

    #[test]
    fn two_token_corpus() {
        let corpus = toks(&["a b"]);
        let vocab = fit_vocab(&corpus, 1).unwrap();
        let m = fit_ppmi(&corpus, &vocab, 1).unwrap();
        // cooc(a,b) = cooc(b,a) = 1, total 2, counts 1 and 1: ln(1 * 2 / (1 * 1))
        let expected = 2.0f64.ln();
        assert!((m.value("a", "b") - expected).abs() < 1e-12);
        assert!((m.value("b", "a") - expected).abs() < 1e-12);
        assert_eq!(m.value("a", "a"), 0.0);
    }

    #[test]
    fn never_cooccurring_is_absent() {
        let corpus = toks(&["a b", "c d"]);
        let vocab = fit_vocab(&corpus, 1).unwrap();
        let m = fit_ppmi(&corpus, &vocab, 1).unwrap();
        assert_eq!(m.value("a", "c"), 0.0);
        let a = vocab.index_of("a").unwrap();
        let c = vocab.index_of("c").unwrap();
        assert!(m.row(a).iter().all(|&(col, v)| col != c && v > 0.0));
    }

    #[test]
    fn window_limits_reach() {
        let corpus = toks(&["a b c d"]);
        let vocab = fit_vocab(&corpus, 1).unwrap();
        let m = fit_ppmi(&corpus, &vocab, 1).unwrap();
        assert_eq!(m.value("a", "c"), 0.0);
        let m = fit_ppmi(&corpus, &vocab, 2).unwrap();
        assert!(m.value("a", "c") > 0.0);
    }

    #[test]
    fn duplicated_tokens_average_out() {
        let corpus = toks(&["a b c", "b c d", "a d"]);
        let vocab = fit_vocab(&corpus, 1).unwrap();
        let m = fit_ppmi(&corpus, &vocab, 2).unwrap();
        let one = m.sentence_vector(&tokenize("a"));
        let two = m.sentence_vector(&tokenize("a a"));
        assert_eq!(one, two);
        let norm: f64 = one.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn oov_sentence_is_zero() {
        let corpus = toks(&["a b"]);
        let vocab = fit_vocab(&corpus, 1).unwrap();
        let m = fit_ppmi(&corpus, &vocab, 2).unwrap();
        assert!(m
            .sentence_vector(&tokenize("x y z"))
            .iter()
            .all(|&v| v == 0.0));
    }

    #[test]
    fn rejects_bad_input() {
        let corpus = toks(&["a b"]);
        let vocab = fit_vocab(&corpus, 1).unwrap();
        assert!(matches!(
            fit_ppmi(&corpus, &vocab, 0),
            Err(Error::Hyperparameter(_))
        ));
        let empty: Vec<Vec<String>> = vec![];
        assert!(fit_ppmi(&empty, &vocab, 2).is_err());
    }
}
