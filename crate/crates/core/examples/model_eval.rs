//! Atomic parameter measures and the models they define.
//!
//! Builds a real ridge network `S[μ](x) = Σ w_j σ(a_j x − b_j)` and a complex
//! Fourier model, evaluates both, and scores the ridge model on noisy data.

use kqforge::bench::gen_dataset;
use kqforge::measures::{eval_model, eval_model_on, metrics, tv_norm};
use kqforge::{AtomicMeasure, FeatureSpec, Mode, C64};

pub struct Summary {
    pub ridge_at_zero: f64,
    pub fourier_at_one: C64,
    pub tv: f64,
    pub rmse: f64,
}

pub fn run_example() -> kqforge::Result<Summary> {
    let ridge = FeatureSpec::ridge(1)?;
    // three hidden units, parameters (a, b)
    let mu = AtomicMeasure::from_real(
        &[1.5, -0.8, 0.4],
        vec![vec![6.0, 1.5], vec![-6.0, 1.5], vec![3.0, 0.0]],
    )?;
    let at_zero = eval_model(&mu, &ridge, &[0.0])?.re;
    println!("S[mu](0) = {at_zero:.6}, TV = {}", tv_norm(&mu));

    let fourier = FeatureSpec::fourier(1)?;
    let nu = AtomicMeasure::from_parts(
        &[C64::new(0.5, 0.0), C64::new(0.0, -0.5)],
        vec![vec![std::f64::consts::PI], vec![-std::f64::consts::PI]],
        Mode::Complex,
    )?;
    let at_one = eval_model(&nu, &fourier, &[1.0])?;
    println!("Fourier model at x = 1: {at_one:.6}");

    let data = gen_dataset(100, 0.1, 7)?;
    let pred: Vec<f64> = eval_model_on(&mu, &ridge, &data)?.iter().map(|z| z.re).collect();
    let m = metrics(&pred, data.targets())?;
    println!("ridge model on sin(2πx) data: rmse {:.4}, max error {:.4}", m.rmse, m.max_err);

    Ok(Summary {
        ridge_at_zero: at_zero,
        fourier_at_one: at_one,
        tv: tv_norm(&mu),
        rmse: m.rmse,
    })
}

#[allow(dead_code)]
fn main() -> kqforge::Result<()> {
    run_example().map(|_| ())
}
