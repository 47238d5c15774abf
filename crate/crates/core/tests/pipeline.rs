mod common;

use strel::corpus::{write_dataset, PairDataset, Split};
use strel::ensemble::WeightRule;
use strel::featurize::{sentence_key, EmbeddingSet, Provenance, Side, TfidfModel};
use strel::metrics::spearman;
use strel::pairsim::cosine;
use strel::pipeline::{run, MemberStatus, RunConfig, RunReport, SourceSpec, Track};
use strel::synthetic::SyntheticCorpus;
use strel::tokenize::{fit_vocab, tokenize};
use strel::Error;

fn dev_rho(report: &RunReport, name: &str) -> f64 {
    report
        .member(name)
        .unwrap()
        .dev
        .as_ref()
        .unwrap()
        .spearman
        .unwrap()
}

/// Replace gold with the TF-IDF cosine under `model`.
fn with_tfidf_gold(ds: &PairDataset, model: &TfidfModel) -> PairDataset {
    let gold = ds
        .pairs()
        .iter()
        .map(|p| {
            let c = cosine(
                &model.transform(&p.sentence_a),
                &model.transform(&p.sentence_b),
            )
            .unwrap();
            c.clamp(0.0, 1.0)
        })
        .collect();
    PairDataset::new(ds.language(), ds.split(), ds.pairs().to_vec(), Some(gold)).unwrap()
}

#[test]
fn tfidf_members_recover_tfidf_gold() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = SyntheticCorpus::new(40, 3);
    let raw_train = corpus.dataset("eng", Split::Train, 300, 1);
    let docs: Vec<Vec<String>> = raw_train.sentences().map(tokenize).collect();
    let model = TfidfModel::new(fit_vocab(&docs, 1).unwrap()).unwrap();

    let mut cfg = RunConfig::new(Track::A, "eng");
    for (slot, split, seed) in [
        (0, Split::Train, 1),
        (1, Split::Dev, 2),
        (2, Split::Test, 3),
    ] {
        let ds = with_tfidf_gold(&corpus.dataset("eng", split, 300, seed), &model);
        let path = dir.path().join(format!("{split}.csv"));
        write_dataset(&ds, &path).unwrap();
        *[&mut cfg.train, &mut cfg.dev, &mut cfg.test][slot] = Some(path);
    }
    cfg.sources = vec![SourceSpec::Tfidf];
    let report = run(&cfg).unwrap();
    assert_eq!(report.members.len(), 2);
    for name in ["tfidf+en", "tfidf+lr"] {
        assert!(
            dev_rho(&report, name) >= 0.99,
            "{name}: {}",
            dev_rho(&report, name)
        );
    }
    let total: f64 = report.members.iter().map(|m| m.weight).sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn track_a_report_shape() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = SyntheticCorpus::new(120, 5);
    let mut fx = common::track_a(dir.path(), &corpus, (150, 60, 60), &[("enc", 8, 0.05)], 2);
    fx.cfg.output = Some(dir.path().join("out"));
    let report = run(&fx.cfg).unwrap();
    let names: Vec<&str> = report.members.iter().map(|m| m.name.as_str()).collect();
    assert_eq!(
        names,
        ["tfidf+en", "tfidf+lr", "ppmi+en", "ppmi+lr", "enc+en", "enc+lr"]
    );
    assert_eq!(report.ensemble.spec.rule, WeightRule::DevWeighted);
    assert_eq!(report.sizes.train, Some(fx.train.len()));
    assert!(report.timing.is_none());

    // ensemble numbers agree with the written files
    let out = dir.path().join("out");
    let dev_pred = strel::corpus::read_predictions(out.join("dev_predictions.csv")).unwrap();
    let values: Vec<f64> = dev_pred.iter().map(|(_, v)| *v).collect();
    let rho = spearman(&values, fx.dev.gold().unwrap())
        .unwrap()
        .spearman
        .unwrap();
    assert!((rho - report.dev_spearman().unwrap()).abs() < 1e-6);
    assert!(out.join("members/enc+lr.test.csv").exists());
    assert!(out.join("scatter_test.svg").exists());

    let json = std::fs::read_to_string(out.join("report.json")).unwrap();
    let back = RunReport::from_json(&json).unwrap();
    assert_eq!(back.members, report.members);
    assert_eq!(back.config, report.config);
}

#[test]
fn record_timing_adds_timing() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = SyntheticCorpus::new(60, 5);
    let mut fx = common::track_a(dir.path(), &corpus, (60, 30, 30), &[], 2);
    fx.cfg.record_timing = true;
    assert!(run(&fx.cfg).unwrap().timing.is_some());
}

#[test]
fn uncovered_source_fails_its_members_only() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = SyntheticCorpus::new(80, 6);
    let mut fx = common::track_a(dir.path(), &corpus, (80, 40, 40), &[], 3);
    let partial = dir.path().join("partial.tsv");
    corpus
        .encoder("partial", 4, 0.1, 1)
        .embed(&[&fx.train, &fx.dev])
        .save(&partial)
        .unwrap();
    fx.cfg.sources.push(SourceSpec::External {
        name: "partial".into(),
        paths: vec![partial],
    });
    let report = run(&fx.cfg).unwrap();
    for name in ["partial+en", "partial+lr"] {
        let m = report.member(name).unwrap();
        assert_eq!(m.status, MemberStatus::Failed);
        assert_eq!(m.weight, 0.0);
        assert!(
            m.error.as_deref().unwrap().contains("eng_test_0000#a"),
            "{:?}",
            m.error
        );
    }
    assert_eq!(report.ensemble.spec.member_names.len(), 4);
    let total: f64 = report.members.iter().map(|m| m.weight).sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn all_members_failing_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = SyntheticCorpus::new(80, 6);
    let mut fx = common::track_a(dir.path(), &corpus, (40, 20, 20), &[], 3);
    fx.cfg.sources = vec![SourceSpec::External {
        name: "none".into(),
        paths: vec![dir.path().join("missing.tsv")],
    }];
    let err = run(&fx.cfg).unwrap_err();
    assert!(
        err.to_string().contains("every ensemble member failed"),
        "{err}"
    );
}

#[test]
fn alpha_grid_picks_a_grid_value() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = SyntheticCorpus::new(80, 7);
    let mut fx = common::track_a(dir.path(), &corpus, (120, 50, 50), &[], 4);
    fx.cfg.alpha_grid = Some(vec![0.5, 0.001, 0.02]);
    let report = run(&fx.cfg).unwrap();
    for m in report.members.iter().filter(|m| m.name.ends_with("+en")) {
        assert!([0.5, 0.001, 0.02].contains(&m.alpha.unwrap()));
    }
    // a grid of identical alphas keeps the first
    fx.cfg.alpha_grid = Some(vec![0.1, 0.1]);
    let tied = run(&fx.cfg).unwrap();
    fx.cfg.alpha_grid = None;
    let plain = run(&fx.cfg).unwrap();
    assert_eq!(tied.members, plain.members);
}

#[test]
fn track_b_uniform_cosine_members() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = SyntheticCorpus::new(100, 8);
    let cfg = common::track_b(dir.path(), &corpus, "kin", 50, &["e1", "e2"]);
    let report = run(&cfg).unwrap();
    assert_eq!(report.members.len(), 4);
    assert!(report
        .members
        .iter()
        .all(|m| m.weight == 0.25 && m.regressor.is_none()));
    assert_eq!(report.sizes.train, None);
    // track B ignores the configured feature mode
    assert_eq!(cfg.feature_mode(), strel::pairsim::FeatureMode::CosineOnly);
}

#[test]
fn track_b_duplicate_sources_equal_one_source() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = SyntheticCorpus::new(100, 9);
    let mut cfg = common::track_b(dir.path(), &corpus, "kin", 40, &["e1"]);
    let e1 = cfg.sources.pop().unwrap();
    let SourceSpec::External { paths, .. } = &e1 else {
        unreachable!()
    };
    cfg.sources = vec![e1.clone()];
    let single = run(&cfg).unwrap();
    cfg.sources.push(SourceSpec::External {
        name: "e1-copy".into(),
        paths: paths.clone(),
    });
    let double = run(&cfg).unwrap();
    for (a, b) in single.predictions.dev.iter().zip(&double.predictions.dev) {
        assert!((a - b).abs() < 1e-15);
    }
}

#[test]
fn track_b_monotone_members_keep_spearman() {
    // two sources whose cosines are cos(t) and cos(t / 2) of the same angle
    let dir = tempfile::tempdir().unwrap();
    let corpus = SyntheticCorpus::new(100, 10);
    let mut cfg = common::track_b(dir.path(), &corpus, "kin", 40, &[]);
    let load = |p: &std::path::PathBuf, split| {
        strel::corpus::load_dataset_with(
            p,
            &strel::corpus::LoadOptions::new("kin", split, strel::corpus::GoldColumn::Required),
        )
        .unwrap()
    };
    let dev = load(cfg.dev.as_ref().unwrap(), Split::Dev);
    let test = load(cfg.test.as_ref().unwrap(), Split::Test);
    let mut sources = Vec::new();
    for (name, shrink) in [("full", 1.0), ("half", 0.5)] {
        let mut set = EmbeddingSet::new(Provenance::External(name.into()), 2);
        for ds in [&dev, &test] {
            for (i, p) in ds.pairs().iter().enumerate() {
                let t = std::f64::consts::PI * ((i * 37) % 101) as f64 / 101.0 * shrink;
                set.insert(sentence_key(&p.pair_id, Side::A), vec![1.0, 0.0])
                    .unwrap();
                set.insert(sentence_key(&p.pair_id, Side::B), vec![t.cos(), t.sin()])
                    .unwrap();
            }
        }
        let path = dir.path().join(format!("{name}.tsv"));
        set.save(&path).unwrap();
        sources.push(SourceSpec::External {
            name: name.into(),
            paths: vec![path],
        });
    }
    cfg.sources = sources;
    let report = run(&cfg).unwrap();
    let ens = report.dev_spearman().unwrap();
    for m in &report.members {
        assert!((m.dev.as_ref().unwrap().spearman.unwrap() - ens).abs() < 1e-12);
    }
}

#[test]
fn track_c_trains_on_merged_sources() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = SyntheticCorpus::new(100, 11);
    let cfg = common::track_c(dir.path(), &corpus, "afr", &["eng", "esp"], 40);
    let report = run(&cfg).unwrap();
    assert_eq!(report.members.len(), 6);
    assert_eq!(report.ensemble.spec.rule, WeightRule::Uniform);
    assert_eq!(report.sizes.train, Some(80));
    let langs: Vec<&str> = report
        .sizes
        .merged_from
        .iter()
        .map(|m| m.language.as_str())
        .collect();
    assert_eq!(langs, ["eng", "esp"]);
    assert!(report.members.iter().all(|m| m.status == MemberStatus::Ok));
}

#[test]
fn track_c_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = SyntheticCorpus::new(60, 12);
    let mut cfg = common::track_c(dir.path(), &corpus, "afr", &["eng"], 20);
    let mut own = cfg.merge[0].clone();
    own.language = "afr".into();
    cfg.merge.push(own);
    assert!(matches!(run(&cfg), Err(Error::Config(_))));
    cfg.merge.clear();
    assert!(matches!(run(&cfg), Err(Error::Config(_))));
}

#[test]
fn track_c_external_must_cover_merged_ids() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = SyntheticCorpus::new(60, 13);
    let mut cfg = common::track_c(dir.path(), &corpus, "afr", &["eng"], 20);
    // keys under the unprefixed source ids do not match the merged `eng:` ids
    let eng = corpus.dataset("eng", Split::Train, 20, 60);
    let path = dir.path().join("enc.tsv");
    let mut set = corpus.encoder("enc", 4, 0.0, 1).embed(&[&eng]);
    let dev = corpus.dataset("afr", Split::Dev, 20, 70);
    let test = corpus.dataset("afr", Split::Test, 20, 71);
    set.extend(corpus.encoder("enc", 4, 0.0, 1).embed(&[&dev, &test]))
        .unwrap();
    set.save(&path).unwrap();
    let report = run(&cfg).unwrap();
    assert!(report
        .members
        .iter()
        .filter(|m| m.source == "external:enc")
        .all(|m| m.status == MemberStatus::Failed));
    cfg.sources.truncate(2);
    assert!(run(&cfg)
        .unwrap()
        .members
        .iter()
        .all(|m| m.status == MemberStatus::Ok));
}

#[test]
fn wrong_track_entry_point() {
    let cfg = RunConfig::new(Track::B, "eng");
    assert!(matches!(
        strel::pipeline::run_track_a(&cfg),
        Err(Error::Config(_))
    ));
}
