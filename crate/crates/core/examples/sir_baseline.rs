//! Sampling importance resampling from the empirical ridgelet spectrum.

use kqforge::bench::gen_dataset;
use kqforge::measures::{eval_model_on, metrics};
use kqforge::sir::{sir_sample, SirConfig, SirWeights};
use kqforge::FeatureSpec;

pub fn run_example() -> kqforge::Result<Vec<(usize, f64)>> {
    let train = gen_dataset(100, 0.1, 11)?;
    let test = gen_dataset(100, 0.1, 12)?;
    let features = FeatureSpec::ridge(1)?;
    let mut out = Vec::new();
    for p in [4, 16, 64] {
        let mut cfg = SirConfig::new(p, 1000, 5);
        cfg.weight_mode = SirWeights::Regression { ridge: 1e-4 };
        let mu = sir_sample(&train, &features, &cfg)?;
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
