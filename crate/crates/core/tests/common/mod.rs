#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use strel::corpus::{write_dataset, PairDataset, Split};
use strel::pipeline::{MergeSource, RunConfig, SourceSpec, Track};
use strel::synthetic::SyntheticCorpus;

pub struct Fixture {
    pub train: PairDataset,
    pub dev: PairDataset,
    pub test: PairDataset,
    pub cfg: RunConfig,
}

fn write(ds: &PairDataset, root: &Path) -> PathBuf {
    let path = root.join(format!("{}_{}.csv", ds.language(), ds.split()));
    write_dataset(ds, &path).unwrap();
    path
}

/// Track A on eng with tfidf, ppmi and `encoders` synthetic external sources.
pub fn track_a(
    root: &Path,
    corpus: &SyntheticCorpus,
    sizes: (usize, usize, usize),
    encoders: &[(&str, usize, f64)],
    seed: u64,
) -> Fixture {
    let train = corpus.dataset("eng", Split::Train, sizes.0, seed + 100);
    let dev = corpus.dataset("eng", Split::Dev, sizes.1, seed + 200);
    let test = corpus.dataset("eng", Split::Test, sizes.2, seed + 300);
    let mut cfg = RunConfig::new(Track::A, "eng");
    cfg.train = Some(write(&train, root));
    cfg.dev = Some(write(&dev, root));
    cfg.test = Some(write(&test, root));
    cfg.sources = vec![SourceSpec::Tfidf, SourceSpec::Ppmi];
    for (i, &(name, dim, noise)) in encoders.iter().enumerate() {
        let path = root.join(format!("{name}.tsv"));
        corpus
            .encoder(name, dim, noise, seed + 7 + i as u64)
            .embed(&[&train, &dev, &test])
            .save(&path)
            .unwrap();
        cfg.sources.push(SourceSpec::External {
            name: name.to_string(),
            paths: vec![path],
        });
    }
    Fixture {
        train,
        dev,
        test,
        cfg,
    }
}

/// Track B on `language` with the given sources; external sources get a
/// synthetic encoder each.
pub fn track_b(
    root: &Path,
    corpus: &SyntheticCorpus,
    language: &str,
    n: usize,
    encoders: &[&str],
) -> RunConfig {
    let dev = corpus.dataset(language, Split::Dev, n, 41);
    let test = corpus.dataset(language, Split::Test, n, 42);
    let mut cfg = RunConfig::new(Track::B, language);
    cfg.dev = Some(write(&dev, root));
    cfg.test = Some(write(&test, root));
    cfg.sources = vec![SourceSpec::Tfidf, SourceSpec::Ppmi];
    for (i, name) in encoders.iter().enumerate() {
        let path = root.join(format!("{name}.tsv"));
        corpus
            .encoder(name, 16, 0.05, 50 + i as u64)
            .embed(&[&dev, &test])
            .save(&path)
            .unwrap();
        cfg.sources.push(SourceSpec::External {
            name: name.to_string(),
            paths: vec![path],
        });
    }
    cfg
}

/// Track C on `target` trained on `from`; tfidf, ppmi and one encoder.
pub fn track_c(
    root: &Path,
    corpus: &SyntheticCorpus,
    target: &str,
    from: &[&str],
    n: usize,
) -> RunConfig {
    let mut cfg = RunConfig::new(Track::C, target);
    let mut all = Vec::new();
    for (i, lang) in from.iter().enumerate() {
        let ds = corpus.dataset(lang, Split::Train, n, 60 + i as u64);
        cfg.merge.push(MergeSource {
            language: lang.to_string(),
            path: write(&ds, root),
        });
        all.push(ds);
    }
    let dev = corpus.dataset(target, Split::Dev, n, 70);
    let test = corpus.dataset(target, Split::Test, n, 71);
    cfg.dev = Some(write(&dev, root));
    cfg.test = Some(write(&test, root));
    let merged = strel::corpus::merge_train_sets(&all, target).unwrap();
    let path = root.join("enc.tsv");
    corpus
        .encoder("enc", 16, 0.05, 72)
        .embed(&[&merged, &dev, &test])
        .save(&path)
        .unwrap();
    cfg.sources = vec![
        SourceSpec::Tfidf,
        SourceSpec::Ppmi,
        SourceSpec::External {
            name: "enc".into(),
            paths: vec![path],
        },
    ];
    cfg
}

/// Every file under `dir`, keyed by relative path.
pub fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).unwrap().display().to_string();
                out.insert(rel, std::fs::read(&p).unwrap());
            }
        }
    }
    out
}
