//! Greedy unitary kernel quadrature on the sinusoid benchmark.

use kqforge::bench::gen_dataset;
use kqforge::measures::{eval_model_on, metrics};
use kqforge::solvers::{ukq_greedy, FinalWeights, UkqConfig};
use kqforge::FeatureSpec;

pub fn run_example() -> kqforge::Result<Vec<(usize, f64)>> {
    let train = gen_dataset(100, 0.1, 11)?;
    let test = gen_dataset(100, 0.1, 12)?;
    let features = FeatureSpec::ridge(1)?;
    let mut out = Vec::new();
    for p in [4, 16, 64] {
        let mut cfg = UkqConfig::new(p, 100, 5);
        // greedy selection uses uniform weights; refit them by ridge regression
        cfg.final_weights = FinalWeights::Regression { ridge: 1e-4 };
        let mu = ukq_greedy(&train, &features, &cfg)?;
        let pred: Vec<f64> = eval_model_on(&mu, &features, &test)?.iter().map(|z| z.re).collect();
        let m = metrics(&pred, test.targets())?;
        println!("p = {p:>2}: test rmse {:.4}, max error {:.4}", m.rmse, m.max_err);
        out.push((p, m.rmse));
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> kqforge::Result<()> {
    run_example().map(|_| ())
}
