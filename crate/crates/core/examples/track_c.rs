//! Cross-lingual run: the target language has no training data, so the
//! regressors are fit on other languages' merged training sets.

use strel::corpus::{write_dataset, Split};
use strel::pipeline::{run, MergeSource, RunConfig, SourceSpec, Track};
use strel::synthetic::SyntheticCorpus;

fn main() -> strel::Result<()> {
    let dir = tempfile::tempdir().expect("temp dir");
    let root = dir.path();
    let corpus = SyntheticCorpus::new(300, 9);

    let mut cfg = RunConfig::new(Track::C, "afr");
    for (i, lang) in ["eng", "esp", "amh"].iter().enumerate() {
        let path = root.join(format!("{lang}_train.csv"));
        write_dataset(
            &corpus.dataset(lang, Split::Train, 150, 20 + i as u64),
            &path,
        )?;
        cfg.merge.push(MergeSource {
            language: lang.to_string(),
            path,
        });
    }
    let dev = corpus.dataset("afr", Split::Dev, 100, 30);
    let test = corpus.dataset("afr", Split::Test, 100, 31).without_gold();
    write_dataset(&dev, root.join("afr_dev.csv"))?;
    write_dataset(&test, root.join("afr_test.csv"))?;
    cfg.dev = Some(root.join("afr_dev.csv"));
    cfg.test = Some(root.join("afr_test.csv"));
    cfg.sources = vec![SourceSpec::Tfidf, SourceSpec::Ppmi];
    cfg.output = Some(root.join("out"));

    let report = run(&cfg)?;
    for m in &report.sizes.merged_from {
        println!("train from {}: {} pairs", m.language, m.pairs);
    }
    for m in &report.members {
        println!(
            "{:<9} dev {:.4} weight {:.3}",
            m.name,
            m.dev.as_ref().unwrap().spearman.unwrap(),
            m.weight
        );
    }
    println!(
        "average dev {:.4}; test has no gold: {:?}",
        report.dev_spearman().unwrap(),
        report.ensemble.test
    );
    let preds =
        std::fs::read_to_string(root.join("out/test_predictions.csv")).expect("predictions");
    println!("{}", preds.lines().take(3).collect::<Vec<_>>().join("\n"));
    Ok(())
}
