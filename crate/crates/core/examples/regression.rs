//! Least squares versus ElasticNet on a small problem with a useless column.

use nalgebra::DMatrix;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use strel::regress::{clip_unit, fit_elasticnet_traced, fit_ols, predict, ElasticNetParams};

fn main() -> strel::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 60;
    let x = DMatrix::from_fn(n, 3, |_, _| rng.random_range(-1.0..1.0));
    let y: Vec<f64> = (0..n)
        .map(|i| 0.5 + 0.3 * x[(i, 0)] - 0.2 * x[(i, 1)] + rng.random_range(-0.05..0.05))
        .collect();

    let ols = fit_ols(&x, &y)?;
    println!(
        "ols        b0 = {:.4}, b = {:.4?}",
        ols.intercept, ols.coefficients
    );
    for alpha in [0.001, 0.01, 0.1] {
        let params = ElasticNetParams {
            alpha,
            ..Default::default()
        };
        let (en, objective) = fit_elasticnet_traced(&x, &y, &params)?;
        println!(
            "en a={alpha:<5} b0 = {:.4}, b = {:.4?}, {} sweeps, objective {:.5} -> {:.5}",
            en.intercept,
            en.coefficients,
            en.n_iters_used,
            objective[0],
            objective.last().unwrap()
        );
    }
    let preds = clip_unit(&predict(&ols, &x)?)?;
    println!(
        "clipped predictions lie in [{:.3}, {:.3}]",
        preds.iter().cloned().fold(1.0, f64::min),
        preds.iter().cloned().fold(0.0, f64::max)
    );
    Ok(())
}
