//! The external embedding file is the hand-off point from out-of-process
//! encoders, so its contract is tested from the outside.

use std::io::Cursor;

use strel::corpus::{PairDataset, SentencePair, Split};
use strel::featurize::{load_external_embeddings, EmbeddingSet, Provenance};
use strel::pairsim::{build_pair_features, FeatureMode};
use strel::Error;

fn fixture(n: usize) -> PairDataset {
    let pairs = (0..n)
        .map(|i| {
            SentencePair::new(
                format!("eng_dev_{i:04}"),
                format!("left {i}"),
                format!("right {i}"),
            )
        })
        .collect();
    PairDataset::new("eng", Split::Dev, pairs, None).unwrap()
}

/// What an extractor writes: header, then one tab-separated line per sentence.
fn extractor_output(ds: &PairDataset, dim: usize) -> String {
    let mut out = format!("#dim {dim}\n");
    for (i, p) in ds.pairs().iter().enumerate() {
        for (side, shift) in [("a", 0.0), ("b", 0.5)] {
            let vals: Vec<String> = (0..dim)
                .map(|d| format!("{:.6}", (i * dim + d) as f64 * 0.01 + shift))
                .collect();
            out.push_str(&format!("{}#{side}\t{}\n", p.pair_id, vals.join("\t")));
        }
    }
    out
}

fn parse(text: &str) -> strel::Result<EmbeddingSet> {
    EmbeddingSet::read_tsv(Cursor::new(text), Provenance::External("enc".into()))
}

#[test]
fn ten_pair_fixture_loads_with_full_coverage() {
    let ds = fixture(10);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("eng_dev.enc.tsv");
    std::fs::write(&path, extractor_output(&ds, 4)).unwrap();
    let emb = load_external_embeddings(&path, "enc").unwrap();
    assert_eq!(emb.len(), 20);
    assert_eq!(emb.dim(), 4);
    assert_eq!(emb.provenance().to_string(), "external:enc");
    emb.check_covers(&ds).unwrap();
    let feats = build_pair_features(&ds, &emb, FeatureMode::Rich).unwrap();
    assert_eq!((feats.n_rows, feats.n_features()), (10, 9));
}

#[test]
fn saved_file_reloads_identically() {
    let emb = parse(&extractor_output(&fixture(3), 5)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.tsv");
    emb.save(&path).unwrap();
    let first = std::fs::read(&path).unwrap();
    let again = load_external_embeddings(&path, "enc").unwrap();
    assert_eq!(again, emb);
    again.save(&path).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), first);
}

#[test]
fn malformed_files() {
    let cases = [
        ("", "empty"),
        ("eng_1#a\t1\n", "missing header"),
        ("#dim x\n", "bad dim"),
        ("#dim 2\neng_1#a\t1\t2\t3\n", "too many values"),
        ("#dim 2\neng_1#a\t1\tabc\n", "not a number"),
        ("#dim 2\neng_1#a 1 2\n", "space separated"),
    ];
    for (text, what) in cases {
        match parse(text) {
            Err(Error::Format(_)) => {}
            other => panic!("{what}: expected format error, got {other:?}"),
        }
    }
    assert!(matches!(
        parse("#dim 1\nk#a\t1\nk#a\t2\n"),
        Err(Error::Integrity(_))
    ));
    assert!(matches!(
        parse("#dim 1\nk#a\tNaN\n"),
        Err(Error::Validation(_))
    ));
    assert!(matches!(
        parse("#dim 1\nk#a\tinf\n"),
        Err(Error::Validation(_))
    ));
}

#[test]
fn error_names_the_line() {
    let err = parse("#dim 2\neng_1#a\t1\t2\neng_1#b\t1\n").unwrap_err();
    assert!(err.to_string().contains("line 3"), "{err}");
}

#[test]
fn missing_side_is_a_coverage_error() {
    let ds = fixture(2);
    let text = extractor_output(&ds, 2);
    let without_last: String = text.lines().take(4).map(|l| format!("{l}\n")).collect();
    let emb = parse(&without_last).unwrap();
    match emb.check_covers(&ds) {
        Err(Error::Coverage(msg)) => assert!(msg.contains("eng_dev_0001#b"), "{msg}"),
        other => panic!("{other:?}"),
    }
}
