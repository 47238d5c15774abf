use std::path::Path;
use std::process::{Command, Output};

use strel::corpus::{load_dataset, read_predictions, write_dataset, Split};
use strel::featurize::load_external_embeddings;
use strel::synthetic::SyntheticCorpus;

fn strel(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strel"))
        .args(args)
        .current_dir(cwd)
        .output()
        .unwrap()
}

fn ok(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn data(root: &Path) {
    let corpus = SyntheticCorpus::new(80, 1);
    for (lang, split, n, seed) in [
        ("eng", Split::Train, 80, 1),
        ("eng", Split::Dev, 30, 2),
        ("eng", Split::Test, 30, 3),
        ("esp", Split::Train, 25, 4),
        ("amh", Split::Train, 15, 5),
    ] {
        write_dataset(
            &corpus.dataset(lang, split, n, seed),
            root.join(format!("{lang}_{split}.csv")),
        )
        .unwrap();
    }
}

#[test]
fn featurize_writes_loadable_embeddings() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    data(root);
    for method in ["tfidf", "ppmi"] {
        let out = format!("{method}.tsv");
        ok(&strel(
            &[
                "featurize",
                "--data",
                "eng_dev.csv",
                "--method",
                method,
                "--fit",
                "eng_train.csv",
                "--out",
                &out,
                "--vocab-out",
                "vocab.tsv",
                "--features-out",
                "feats.csv",
                "--mode",
                "cosine_only",
            ],
            root,
        ));
        let emb = load_external_embeddings(root.join(&out), method).unwrap();
        emb.check_covers(&load_dataset(root.join("eng_dev.csv"), true).unwrap())
            .unwrap();
        let feats = std::fs::read_to_string(root.join("feats.csv")).unwrap();
        assert_eq!(feats.lines().next(), Some("cos"));
        assert_eq!(feats.lines().count(), 31);
    }
    assert!(std::fs::read_to_string(root.join("vocab.tsv"))
        .unwrap()
        .starts_with("#n_docs 160\n"));
}

#[test]
fn merge_train_concatenates() {
    let dir = tempfile::tempdir().unwrap();
    data(dir.path());
    ok(&strel(
        &[
            "merge-train",
            "--target",
            "afr",
            "--source",
            "esp=esp_train.csv",
            "--source",
            "amh=amh_train.csv",
            "--out",
            "afr_train.csv",
        ],
        dir.path(),
    ));
    let text = std::fs::read_to_string(dir.path().join("afr_train.csv")).unwrap();
    assert!(text.contains("esp:esp_train_0000"));
    let bad = strel(
        &[
            "merge-train",
            "--target",
            "esp",
            "--source",
            "esp=esp_train.csv",
            "--out",
            "x.csv",
        ],
        dir.path(),
    );
    assert!(!bad.status.success());
}

#[test]
fn run_evaluate_scatter() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    data(root);
    std::fs::write(
        root.join("a.conf"),
        "# supervised\ntrack = a\nlanguage = eng\ntrain = eng_train.csv\ndev = eng_dev.csv\ntest = eng_test.csv\nsource = tfidf\nsource = ppmi\noutput = out\n",
    )
    .unwrap();
    let report = ok(&strel(&["run", "--track", "a", "--config", "a.conf"], root));
    let json: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert_eq!(json["members"].as_array().unwrap().len(), 4);
    let dev_rho = json["ensemble"]["dev"]["spearman"].as_f64().unwrap();

    // rows in a different order still align by PairID
    let mut preds = read_predictions(root.join("out/dev_predictions.csv")).unwrap();
    preds.reverse();
    let body: String = preds.iter().map(|(id, v)| format!("{id},{v}\n")).collect();
    std::fs::write(
        root.join("shuffled.csv"),
        format!("PairID,Pred_Score\n{body}"),
    )
    .unwrap();
    let eval = ok(&strel(
        &[
            "evaluate",
            "--gold",
            "eng_dev.csv",
            "--pred",
            "shuffled.csv",
        ],
        root,
    ));
    let eval: serde_json::Value = serde_json::from_str(&eval).unwrap();
    assert!((eval["spearman"].as_f64().unwrap() - dev_rho).abs() < 1e-6);

    ok(&strel(
        &[
            "scatter",
            "--gold",
            "eng_dev.csv",
            "--pred",
            "shuffled.csv",
            "--out",
            "sc.csv",
        ],
        root,
    ));
    assert!(root.join("sc.svg").exists());

    let short: String = preds
        .iter()
        .skip(1)
        .map(|(id, v)| format!("{id},{v}\n"))
        .collect();
    std::fs::write(
        root.join("short.csv"),
        format!("PairID,Pred_Score\n{short}"),
    )
    .unwrap();
    let err = strel(
        &["evaluate", "--gold", "eng_dev.csv", "--pred", "short.csv"],
        root,
    );
    assert!(!err.status.success());
}

#[test]
fn run_rejects_track_mismatch_and_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("b.conf"),
        "track = b\nlanguage = eng\ndev = d.csv\ntest = t.csv\nsource = tfidf\n",
    )
    .unwrap();
    let out = strel(&["run", "--track", "a", "--config", "b.conf"], dir.path());
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("track"));
    std::fs::write(
        dir.path().join("x.conf"),
        "track = b\nlanguage = eng\ncolour = blue\n",
    )
    .unwrap();
    let out = strel(&["run", "--track", "b", "--config", "x.conf"], dir.path());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown key `colour`"));
}
