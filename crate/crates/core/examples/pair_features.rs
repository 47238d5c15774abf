//! Turn sentence embeddings into per-pair feature rows.

use strel::corpus::Split;
use strel::featurize::tfidf_embed;
use strel::pairsim::{build_pair_features, FeatureMode};
use strel::synthetic::SyntheticCorpus;
use strel::tokenize::{fit_vocab, tokenize};

fn main() -> strel::Result<()> {
    let corpus = SyntheticCorpus::new(30, 5);
    let ds = corpus.dataset("eng", Split::Train, 3, 6);
    let docs: Vec<Vec<String>> = ds.sentences().map(tokenize).collect();
    let vocab = fit_vocab(&docs, 1)?;
    let emb = tfidf_embed(&ds, &vocab)?;

    let cos = build_pair_features(&ds, &emb, FeatureMode::CosineOnly)?;
    for ((p, c), g) in ds.pairs().iter().zip(cos.cosines()).zip(ds.gold().unwrap()) {
        println!("{} cos = {c:.4} gold = {g:.4}", p.pair_id);
    }
    let rich = build_pair_features(&ds, &emb, FeatureMode::Rich)?;
    println!(
        "rich mode: {} features per pair ({} .. {})",
        rich.n_features(),
        rich.feature_names[0],
        rich.feature_names.last().unwrap()
    );
    rich.write_csv(std::io::sink())?;
    Ok(())
}
