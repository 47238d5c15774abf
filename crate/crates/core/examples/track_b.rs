//! Unsupervised run: cosine similarity per source, mapped to [0, 1] and
//! averaged. No training data is read.

use strel::corpus::{write_dataset, Split};
use strel::pipeline::{run, RunConfig, SourceSpec, Track};
use strel::synthetic::SyntheticCorpus;

fn main() -> strel::Result<()> {
    let dir = tempfile::tempdir().expect("temp dir");
    let root = dir.path();
    let corpus = SyntheticCorpus::new(300, 8);
    let dev = corpus.dataset("hin", Split::Dev, 120, 4);
    let test = corpus.dataset("hin", Split::Test, 120, 5);
    write_dataset(&dev, root.join("hin_dev.csv"))?;
    write_dataset(&test, root.join("hin_test.csv"))?;
    let enc = root.join("enc.tsv");
    corpus
        .encoder("enc", 24, 0.2, 3)
        .embed(&[&dev, &test])
        .save(&enc)?;

    let mut cfg = RunConfig::new(Track::B, "hin");
    cfg.dev = Some(root.join("hin_dev.csv"));
    cfg.test = Some(root.join("hin_test.csv"));
    cfg.sources = vec![
        SourceSpec::Tfidf,
        SourceSpec::Ppmi,
        SourceSpec::External {
            name: "enc".into(),
            paths: vec![enc],
        },
    ];
    let report = run(&cfg)?;
    for m in &report.members {
        println!(
            "{:<6} dev {:.4} weight {:.4}",
            m.name,
            m.dev.as_ref().unwrap().spearman.unwrap(),
            m.weight
        );
    }
    println!(
        "average dev {:.4}, test {:.4}",
        report.dev_spearman().unwrap(),
        report.test_spearman().unwrap()
    );
    Ok(())
}
