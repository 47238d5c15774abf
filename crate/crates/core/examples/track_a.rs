//! Supervised run: four embedding sources, ElasticNet and least squares on
//! each, members weighted by dev Spearman.

use strel::corpus::{write_dataset, Split};
use strel::pipeline::{run, RunConfig};
use strel::synthetic::SyntheticCorpus;

fn main() -> strel::Result<()> {
    let dir = tempfile::tempdir().expect("temp dir");
    let root = dir.path();
    let corpus = SyntheticCorpus::new(300, 7);
    let train = corpus.dataset("eng", Split::Train, 400, 1);
    let dev = corpus.dataset("eng", Split::Dev, 150, 2);
    let test = corpus.dataset("eng", Split::Test, 150, 3);
    for ds in [&train, &dev, &test] {
        write_dataset(ds, root.join(format!("eng_{}.csv", ds.split())))?;
    }
    for (name, noise, seed) in [("enc-a", 0.15, 10), ("enc-b", 0.30, 11)] {
        corpus
            .encoder(name, 32, noise, seed)
            .embed(&[&train, &dev, &test])
            .save(root.join(format!("{name}.tsv")))?;
    }

    let config = "\
track = a
language = eng
train = eng_train.csv
dev = eng_dev.csv
test = eng_test.csv
source = tfidf
source = ppmi
source = external:enc-a=enc-a.tsv
source = external:enc-b=enc-b.tsv
output = out
";
    std::fs::write(root.join("eng_a.conf"), config).expect("write config");
    let report = run(&RunConfig::load(root.join("eng_a.conf"))?)?;

    println!("{:<12} {:>8} {:>8}", "member", "dev", "weight");
    for m in &report.members {
        let dev = m.dev.as_ref().and_then(|r| r.spearman).unwrap_or(f64::NAN);
        println!("{:<12} {dev:>8.4} {:>8.4}", m.name, m.weight);
    }
    println!("{:<12} {:>8.4}", "ensemble", report.dev_spearman().unwrap());
    println!("test ensemble {:.4}", report.test_spearman().unwrap());
    let mut files: Vec<_> = std::fs::read_dir(root.join("out"))
        .expect("output")
        .map(|e| e.unwrap().file_name())
        .collect();
    files.sort();
    println!("outputs: {files:?}");
    Ok(())
}
