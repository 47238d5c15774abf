//! Seeded synthetic sentence-pair corpora.
//!
//! Real benchmark data is not bundled, so tests and examples run on
//! generated pairs whose gold relatedness is a noisy monotone function of
//! lexical overlap. [`SyntheticEncoder`] stands in for a pretrained sentence
//! encoder and produces embedding files in the external TSV layout.

use std::collections::HashSet;

use rand::distr::weighted::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::corpus::{PairDataset, SentencePair, Split};
use crate::featurize::{sentence_key, EmbeddingSet, Provenance, Side};
use crate::tokenize::tokenize;

/// Track A training-set sizes per language.
pub const TRACK_A_TRAIN_SIZES: [(&str, usize); 9] = [
    ("arq", 1261),
    ("amh", 992),
    ("eng", 5500),
    ("hau", 1736),
    ("kin", 778),
    ("mar", 1200),
    ("ary", 924),
    ("esp", 1562),
    ("tel", 1170),
];

/// Cross-lingual training plan: target, the five Track A sources merged for
/// it, and the merged training size listed with the plan.
pub const TRACK_C_MERGE_PLAN: [(&str, [&str; 5], usize); 12] = [
    ("afr", ["amh", "eng", "esp", "arq", "ary"], 10239),
    ("arq", ["amh", "hau", "esp", "eng", "ary"], 10714),
    ("amh", ["eng", "hau", "esp", "arq", "ary"], 10983),
    ("eng", ["arq", "ary", "mar", "esp", "tel"], 6117),
    ("hau", ["amh", "esp", "arq", "ary", "eng"], 10239),
    ("hin", ["esp", "eng", "mar", "ary", "tel"], 10356),
    ("ind", ["ary", "eng", "mar", "esp", "tel"], 5356),
    ("kin", ["amh", "esp", "ary", "arq", "eng"], 10239),
    ("arb", ["amh", "eng", "arq", "esp", "ary"], 10239),
    ("ary", ["amh", "hau", "eng", "esp", "arq"], 11051),
    ("pan", ["arq", "esp", "mar", "eng", "tel"], 10693),
    ("esp", ["arq", "ary", "mar", "eng", "tel"], 10055),
];

pub fn track_a_train_size(language: &str) -> Option<usize> {
    TRACK_A_TRAIN_SIZES
        .iter()
        .find(|(l, _)| *l == language)
        .map(|&(_, n)| n)
}

/// A training split of exactly `n` trivially distinct pairs.
pub fn sized_train_set(language: &str, n: usize) -> PairDataset {
    let pairs = (0..n)
        .map(|i| {
            SentencePair::new(
                format!("{language}_train_{i:05}"),
                format!("first sentence {i}"),
                format!("second sentence {i}"),
            )
        })
        .collect();
    PairDataset::new(language, Split::Train, pairs, Some(vec![0.5; n]))
        .expect("generated pairs are valid")
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf29ce484222325u64, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x100000001b3)
    })
}

const ONSETS: [&str; 14] = [
    "k", "m", "t", "s", "n", "r", "b", "d", "l", "g", "w", "y", "z", "h",
];
const VOWELS: [&str; 5] = ["a", "e", "i", "o", "u"];

/// A shared lexicon with Zipf-like word frequencies.
#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    lexicon: Vec<String>,
    weights: WeightedIndex<f64>,
    pub noise: f64,
    pub min_len: usize,
    pub max_len: usize,
}

impl SyntheticCorpus {
    pub fn new(vocab_size: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut seen = HashSet::new();
        let mut lexicon = Vec::with_capacity(vocab_size);
        while lexicon.len() < vocab_size {
            let syllables = rng.random_range(2..=3);
            let word: String = (0..syllables)
                .map(|_| {
                    format!(
                        "{}{}",
                        ONSETS.choose(&mut rng).unwrap(),
                        VOWELS.choose(&mut rng).unwrap()
                    )
                })
                .collect();
            if seen.insert(word.clone()) {
                lexicon.push(word);
            }
        }
        let weights = WeightedIndex::new((0..vocab_size).map(|i| 1.0 / (i as f64 + 1.0).powf(0.8)))
            .expect("positive weights");
        SyntheticCorpus {
            lexicon,
            weights,
            noise: 0.08,
            min_len: 6,
            max_len: 12,
        }
    }

    pub fn with_noise(mut self, noise: f64) -> Self {
        self.noise = noise;
        self
    }

    pub fn lexicon(&self) -> &[String] {
        &self.lexicon
    }

    fn word(&self, rng: &mut ChaCha8Rng) -> String {
        self.lexicon[self.weights.sample(rng)].clone()
    }

    fn render(words: &[String]) -> String {
        let mut text = words.join(" ");
        if let Some(first) = text.get(..1) {
            text.replace_range(..1, &first.to_uppercase());
        }
        text.push('.');
        text
    }

    /// `n` pairs with ids `<language>_<split>_<i>` and gold relatedness.
    ///
    /// Gold is `sqrt(jaccard(a, b))` plus Gaussian noise, clamped to `[0, 1]`.
    pub fn dataset(&self, language: &str, split: Split, n: usize, seed: u64) -> PairDataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let noise = Normal::new(0.0, self.noise.max(0.0)).expect("finite noise");
        let mut pairs = Vec::with_capacity(n);
        let mut gold = Vec::with_capacity(n);
        for i in 0..n {
            let len = rng.random_range(self.min_len..=self.max_len);
            let a: Vec<String> = (0..len).map(|_| self.word(&mut rng)).collect();
            let keep: f64 = rng.random();
            let mut b: Vec<String> = a
                .iter()
                .map(|w| {
                    if rng.random::<f64>() < keep {
                        w.clone()
                    } else {
                        self.word(&mut rng)
                    }
                })
                .collect();
            let extra = rng.random_range(0..=2);
            b.extend((0..extra).map(|_| self.word(&mut rng)));
            b.shuffle(&mut rng);

            let sa: HashSet<&String> = a.iter().collect();
            let sb: HashSet<&String> = b.iter().collect();
            let jaccard = sa.intersection(&sb).count() as f64 / sa.union(&sb).count() as f64;
            let score = (jaccard.sqrt() + noise.sample(&mut rng)).clamp(0.0, 1.0);

            pairs.push(SentencePair::new(
                format!("{language}_{split}_{i:04}"),
                Self::render(&a),
                Self::render(&b),
            ));
            gold.push(score);
        }
        PairDataset::new(language, split, pairs, Some(gold)).expect("generated pairs are valid")
    }

    /// An encoder over this lexicon with `dim`-dimensional outputs.
    pub fn encoder(&self, name: &str, dim: usize, noise: f64, seed: u64) -> SyntheticEncoder {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, 1.0).unwrap();
        let word_vectors = self
            .lexicon
            .iter()
            .map(|w| {
                (
                    w.clone(),
                    (0..dim).map(|_| normal.sample(&mut rng)).collect(),
                )
            })
            .collect();
        SyntheticEncoder {
            name: name.to_string(),
            dim,
            noise,
            seed,
            word_vectors,
        }
    }
}

/// Bag-of-words random-projection encoder with per-sentence noise.
#[derive(Debug, Clone)]
pub struct SyntheticEncoder {
    pub name: String,
    pub dim: usize,
    pub noise: f64,
    seed: u64,
    word_vectors: std::collections::HashMap<String, Vec<f64>>,
}

impl SyntheticEncoder {
    /// Deterministic in `(seed, key, text)`.
    pub fn encode(&self, key: &str, text: &str) -> Vec<f64> {
        let mut v = vec![0.0; self.dim];
        for tok in tokenize(text) {
            if let Some(w) = self.word_vectors.get(&tok) {
                v.iter_mut().zip(w).for_each(|(a, b)| *a += b);
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ fnv1a(key.as_bytes()));
        let normal = Normal::new(0.0, self.noise.max(0.0)).unwrap();
        v.iter_mut()
            .for_each(|x| *x = *x / norm + normal.sample(&mut rng));
        v
    }

    /// Vectors for both sentences of every pair in `datasets`.
    pub fn embed(&self, datasets: &[&PairDataset]) -> EmbeddingSet {
        let mut set = EmbeddingSet::new(Provenance::External(self.name.clone()), self.dim);
        for ds in datasets {
            for p in ds.pairs() {
                for (side, text) in [(Side::A, &p.sentence_a), (Side::B, &p.sentence_b)] {
                    let key = sentence_key(&p.pair_id, side);
                    let v = self.encode(&key, text);
                    set.insert(key, v).expect("keys are unique per dataset");
                }
            }
        }
        set
    }
}
