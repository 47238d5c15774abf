//! Dev-weighted and uniform combinations of member predictions.

use strel::ensemble::{combine, dev_weighted_spec, uniform_spec};

fn main() -> strel::Result<()> {
    let names: Vec<String> = ["tfidf+en", "tfidf+lr", "labse+en"]
        .map(String::from)
        .to_vec();
    let dev = [Some(0.62), Some(-0.05), Some(0.80)];
    let preds = vec![vec![0.2, 0.7], vec![0.9, 0.1], vec![0.4, 0.8]];

    let weighted = dev_weighted_spec(&names, &dev)?;
    for (n, w) in weighted.member_names.iter().zip(&weighted.weights) {
        println!("{n:>9}: {w:.4}");
    }
    println!("weighted: {:?}", combine(&weighted, &preds)?);
    let uniform = uniform_spec(&names, &dev)?;
    println!("uniform:  {:?}", combine(&uniform, &preds)?);

    let all_bad = dev_weighted_spec(&names, &[Some(-0.1), None, Some(0.0)])?;
    println!(
        "no positive dev score -> rule {:?}, weights {:?}",
        all_bad.rule, all_bad.weights
    );
    Ok(())
}
