//! Admissibility of the Gaussian-derivative pair and ridgelet reconstruction.
//!
//! The dual `ρ = σ / c_adm` makes `S[R[f; ρ]] = f`. This example computes
//! `c_adm` by quadrature and reconstructs a ridge function from its spectrum
//! on a Riemann grid.

use kqforge::features::{admissibility_constant, gaussian_derivative};
use kqforge::FeatureSpec;

pub struct Summary {
    pub c_adm: f64,
    pub max_error: f64,
}

pub fn run_example() -> kqforge::Result<Summary> {
    let c = admissibility_constant(gaussian_derivative, gaussian_derivative, 1)?;
    println!("c_adm = {c:.12} (2π = {:.12})", 2.0 * std::f64::consts::PI);

    let features = FeatureSpec::ridge(1)?;
    let f = |x: f64| gaussian_derivative(0.5 * x - 0.2);

    let hx = 0.05;
    let xs: Vec<f64> = (0..=480).map(|i| -12.0 + hx * i as f64).collect();
    let step = 0.1;
    let axis: Vec<f64> = (0..=100).map(|i| -5.0 + step * i as f64).collect();
    let mut spectrum = Vec::new();
    for &a in &axis {
        for &b in &axis {
            let mut r = 0.0;
            for &x in &xs {
                r += f(x) * features.eval_dual(&[x], &[a, b])?.re;
            }
            spectrum.push((a, b, r * hx * step * step));
        }
    }

    let mut max_error = 0.0f64;
    for k in 0..=20 {
        let x = -1.0 + 0.1 * k as f64;
        let s: f64 = spectrum.iter().map(|&(a, b, w)| w * gaussian_derivative(a * x - b)).sum();
        max_error = max_error.max((s - f(x)).abs());
    }
    println!("reconstruction on [-1, 1]: max error {max_error:.4}");
    Ok(Summary { c_adm: c, max_error })
}

#[allow(dead_code)]
fn main() -> kqforge::Result<()> {
    run_example().map(|_| ())
}
