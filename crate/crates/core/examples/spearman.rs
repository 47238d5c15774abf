//! Tie-aware Spearman correlation.

use strel::metrics::{average_ranks, spearman};

fn main() -> strel::Result<()> {
    let gold = [0.9, 0.1, 0.5, 0.5, 0.7];
    let pred = [0.8, 0.2, 0.4, 0.6, 0.6];
    println!("ranks(gold) = {:?}", average_ranks(&gold));
    println!("ranks(pred) = {:?}", average_ranks(&pred));
    let r = spearman(&pred, &gold)?;
    println!(
        "rho = {:.4}, n = {}, tie groups = {:?}",
        r.spearman.unwrap(),
        r.n,
        r.tie_groups
    );

    let constant = [0.5; 5];
    println!(
        "against a constant: {:?}",
        spearman(&constant, &gold)?.spearman
    );
    Ok(())
}
