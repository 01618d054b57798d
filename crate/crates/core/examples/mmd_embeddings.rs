//! Kernel mean embeddings of parameter measures.
//!
//! Compares two measures under a Gaussian kernel on parameter space, then
//! under the empirical unitary kernel, where the embedding inner product is
//! the empirical L² inner product of the models.

use kqforge::bench::gen_dataset;
use kqforge::kernels::{inner_measures, make_empirical_target, mmd2, mmd2_to_target, EmpiricalMode};
use kqforge::measures::{eval_model_on, tv_norm};
use kqforge::{AtomicMeasure, FeatureSpec, KernelSpec, KmeElement, C64};

pub struct Summary {
    pub gaussian_mmd2: f64,
    pub isometry_gap: f64,
    pub target_mmd2: f64,
}

pub fn run_example() -> kqforge::Result<Summary> {
    let mu = AtomicMeasure::from_real(&[0.6, 0.4], vec![vec![1.0, 0.0], vec![-1.0, 0.5]])?;
    let nu = AtomicMeasure::from_real(&[1.0], vec![vec![0.2, 0.2]])?;

    let gauss = KernelSpec::gaussian_v(1.0)?;
    let d = mmd2(&gauss, &mu, &nu)?;
    println!("Gaussian MMD²(mu, nu) = {d:.6}; TV(mu - nu) = {}", tv_norm(&mu.difference(&nu)));

    let data = gen_dataset(50, 0.1, 3)?;
    let features = FeatureSpec::ridge(1)?;
    let unitary = KernelSpec::empirical_unitary(data.clone(), features.clone())?;
    let lhs = inner_measures(&unitary, &mu, &nu)?;
    let s_mu = eval_model_on(&mu, &features, &data)?;
    let s_nu = eval_model_on(&nu, &features, &data)?;
    let rhs: C64 = s_mu.iter().zip(&s_nu).map(|(a, b)| a.conj() * b).sum::<C64>() / data.len() as f64;
    println!("<U[mu], U[nu]> = {:.6}, empirical L² = {:.6}", lhs.re, rhs.re);

    // distance of U[mu] to the embedding of the data
    let target = make_empirical_target(&data, &unitary, EmpiricalMode::Raw)?;
    let h = KmeElement::new(mu, unitary)?;
    let j = 2.0 * mmd2_to_target(&h, &target)?.value;
    println!("||U[mu] - T||² = {j:.6}");

    Ok(Summary {
        gaussian_mmd2: d,
        isometry_gap: (lhs - rhs).norm(),
        target_mmd2: j,
    })
}

#[allow(dead_code)]
fn main() -> kqforge::Result<()> {
    run_example().map(|_| ())
}
