//! Ridge least squares for output weights at fixed atom locations.

use nalgebra::{DMatrix, DVector};

use crate::features::FeatureSpec;
use crate::kernels::solve_spd;
use crate::measures::{AtomicMeasure, Dataset, Mode};
use crate::{Error, Result, C64};

/// Weights minimizing `Σ_i |Σ_j w_j φ(x_i; v_j) − y_i|² + nε‖w‖²`.
pub fn fit_weights_regression<P: AsRef<[f64]>>(
    locations: &[P],
    features: &FeatureSpec,
    dataset: &Dataset,
    ridge: f64,
) -> Result<Vec<C64>> {
    if locations.is_empty() {
        return Err(Error::Argument("regression needs at least one atom".into()));
    }
    if !(ridge >= 0.0 && ridge.is_finite()) {
        return Err(Error::Argument(format!("ridge must be finite and ≥ 0, got {ridge}")));
    }
    let n = dataset.len();
    let p = locations.len();
    let mut phi = DMatrix::from_element(n, p, C64::new(0.0, 0.0));
    for (j, v) in locations.iter().enumerate() {
        for (i, x) in dataset.inputs().iter().enumerate() {
            phi[(i, j)] = features.eval(x, v.as_ref())?;
        }
    }
    let singular = || {
        Error::Numerical(format!(
            "normal equations are singular at ridge {ridge}; use a positive ridge ε"
        ))
    };
    let shift = n as f64 * ridge;
    match features.mode() {
        Mode::Real => {
            let phi = phi.map(|z| z.re);
            let mut a = phi.transpose() * &phi;
            for j in 0..p {
                a[(j, j)] += shift;
            }
            let y = DVector::from_column_slice(dataset.targets());
            let rhs = phi.transpose() * y;
            let w = solve_spd(a, &rhs).ok_or_else(singular)?;
            Ok(w.iter().map(|&x| C64::new(x, 0.0)).collect())
        }
        Mode::Complex => {
            let mut a = phi.adjoint() * &phi;
            for j in 0..p {
                a[(j, j)] += C64::new(shift, 0.0);
            }
            let y = DVector::from_iterator(n, dataset.targets().iter().map(|&t| C64::new(t, 0.0)));
            let rhs = phi.adjoint() * y;
            let max_diag = (0..p).map(|j| a[(j, j)].re).fold(0.0, f64::max);
            let chol = a.cholesky().ok_or_else(singular)?;
            let l = chol.l_dirty();
            let min_pivot = (0..p).map(|j| l[(j, j)].norm_sqr()).fold(f64::INFINITY, f64::min);
            if !(min_pivot > 1e-13 * max_diag.max(f64::MIN_POSITIVE)) {
                return Err(singular());
            }
            Ok(chol.solve(&rhs).iter().copied().collect())
        }
    }
}

/// Atomic measure at `locations` with regression weights.
pub fn regression_measure(
    locations: Vec<Vec<f64>>,
    features: &FeatureSpec,
    dataset: &Dataset,
    ridge: f64,
) -> Result<AtomicMeasure> {
    let w = fit_weights_regression(&locations, features, dataset, ridge)?;
    AtomicMeasure::from_parts(&w, locations, features.mode())
}
