//! Load a dataset from CSV, then build a cross-lingual training set by
//! merging other languages' training splits.

use strel::corpus::{load_dataset, merge_train_sets, write_dataset, Split};
use strel::synthetic::{sized_train_set, SyntheticCorpus, TRACK_C_MERGE_PLAN};

fn main() -> strel::Result<()> {
    let dir = tempfile::tempdir().expect("temp dir");

    let corpus = SyntheticCorpus::new(200, 1);
    let eng = corpus.dataset("eng", Split::Dev, 5, 2);
    let path = dir.path().join("eng_dev.csv");
    write_dataset(&eng, &path)?;
    let back = load_dataset(&path, true)?;
    println!(
        "{} -> {} pairs, language {}, split {}",
        path.display(),
        back.len(),
        back.language(),
        back.split()
    );
    let first = &back.pairs()[0];
    println!(
        "  {}: {:?} / {:?} = {:.3}",
        first.pair_id,
        first.sentence_a,
        first.sentence_b,
        back.gold().unwrap()[0]
    );

    let (target, sources, _) = TRACK_C_MERGE_PLAN[3];
    let sets: Vec<_> = sources
        .iter()
        .map(|l| sized_train_set(l, strel::synthetic::track_a_train_size(l).unwrap()))
        .collect();
    let merged = merge_train_sets(&sets, target)?;
    println!("merged training set for {target}:");
    for s in &sets {
        println!("  {:>4} {:>5}", s.language(), s.len());
    }
    println!(
        "  total {}, first id {}",
        merged.len(),
        merged.pairs()[0].pair_id
    );
    Ok(())
}
