//! Round-trip externally computed sentence vectors through the embedding TSV.
//!
//! The file starts with `#dim D`, then one `key<TAB>v1 ... vD` line per
//! sentence, keyed `<pair_id>#a` / `<pair_id>#b`.

use strel::corpus::Split;
use strel::featurize::load_external_embeddings;
use strel::synthetic::SyntheticCorpus;

fn main() -> strel::Result<()> {
    let dir = tempfile::tempdir().expect("temp dir");
    let corpus = SyntheticCorpus::new(100, 3);
    let dev = corpus.dataset("eng", Split::Dev, 4, 4);

    let encoder = corpus.encoder("toy-encoder", 6, 0.05, 9);
    let path = dir.path().join("eng_dev.toy.tsv");
    encoder.embed(&[&dev]).save(&path)?;
    let text = std::fs::read_to_string(&path).expect("written");
    for line in text.lines().take(3) {
        println!("{}", &line[..line.len().min(72)]);
    }

    let emb = load_external_embeddings(&path, "toy-encoder")?;
    emb.check_covers(&dev)?;
    println!(
        "{} vectors, dim {}, provenance {}",
        emb.len(),
        emb.dim(),
        emb.provenance()
    );

    std::fs::write(&path, "#dim 2\neng_dev_0000#a\t0.1\n").expect("write");
    match load_external_embeddings(&path, "broken") {
        Err(e) => println!("malformed file rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
