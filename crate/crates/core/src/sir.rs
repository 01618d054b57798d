//! Sampling-importance-resampling baseline.
//!
//! Candidates `(a, b)` are drawn from a scaled normal proposal, weighted by
//! `|R[f](a, b)| / Q(a, b)` where `R[f]` is the empirical ridgelet spectrum of
//! the data, and `p` of them are kept by weighted sampling without
//! replacement.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::features::{FeatureFamily, FeatureSpec};
use crate::measures::{AtomicMeasure, Dataset, Mode};
use crate::rng::{hash64, substream};
use crate::solvers::regression::fit_weights_regression;
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SirWeights {
    /// `w_j = R[f](v_j) / p`.
    SpectrumOverP,
    Regression { ridge: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SirConfig {
    pub p: usize,
    pub p_prime: usize,
    pub scale_a: f64,
    pub scale_b: f64,
    pub seed: u64,
    pub weight_mode: SirWeights,
}

impl SirConfig {
    pub fn new(p: usize, p_prime: usize, seed: u64) -> Self {
        Self {
            p,
            p_prime,
            scale_a: 5.0,
            scale_b: 5.0,
            seed,
            weight_mode: SirWeights::SpectrumOverP,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.p == 0 || self.p > self.p_prime {
            return Err(Error::Argument(format!(
                "need 1 ≤ p ≤ p′ (p = {}, p′ = {})",
                self.p, self.p_prime
            )));
        }
        if !(self.scale_a > 0.0 && self.scale_b > 0.0) {
            return Err(Error::Argument("proposal scales must be positive".into()));
        }
        Ok(())
    }
}

/// Empirical ridgelet transform `2^m (1/n) Σ_i y_i ρ(a·x_i − b)` for inputs in `[−1, 1]^m`.
pub fn ridgelet_spectrum(dataset: &Dataset, features: &FeatureSpec, a: &[f64], b: f64) -> Result<f64> {
    if features.family() != FeatureFamily::Ridge {
        return Err(Error::Config("the ridgelet spectrum needs ridge features".into()));
    }
    let mut v = a.to_vec();
    v.push(b);
    let m = features.input_dim();
    let mut acc = 0.0;
    for (x, y) in dataset.inputs().iter().zip(dataset.targets()) {
        acc += y * features.eval_dual(x, &v)?.conj().re;
    }
    Ok(2f64.powi(m as i32) * acc / dataset.len() as f64)
}

/// Draws `p` distinct indices with successive-sampling probabilities
/// proportional to `weights` (exponential keys `ln(u_j)/w_j`, largest kept).
///
/// Indices are returned in decreasing key order. Zero weights are never drawn.
pub fn weighted_sample_without_replacement(weights: &[f64], p: usize, seed: u64) -> Result<Vec<usize>> {
    if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
        return Err(Error::Argument(format!("sampling weight {w} is not a finite nonnegative number")));
    }
    let positive = weights.iter().filter(|&&w| w > 0.0).count();
    if positive < p {
        return Err(Error::Argument(format!(
            "cannot draw {p} items without replacement from {positive} positive weights"
        )));
    }
    let mut keyed: Vec<(f64, usize)> = weights
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 0.0)
        .map(|(j, &w)| {
            let u: f64 = substream(seed, &[j as u64]).random();
            // u ∈ [0, 1); map to (0, 1] so the log is finite
            ((1.0 - u).ln() / w, j)
        })
        .collect();
    keyed.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));
    Ok(keyed.into_iter().take(p).map(|(_, j)| j).collect())
}

fn normal_logpdf(x: f64, scale: f64) -> f64 {
    -0.5 * (x / scale).powi(2) - scale.ln() - 0.5 * (2.0 * PI).ln()
}

/// A proposal draw with its log density.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub location: Vec<f64>,
    pub log_density: f64,
    pub spectrum: f64,
}

/// The `p′` proposal candidates with their spectra.
pub fn sir_candidates(dataset: &Dataset, features: &FeatureSpec, config: &SirConfig) -> Result<Vec<Candidate>> {
    let m = features.input_dim();
    (0..config.p_prime)
        .map(|j| {
            let mut rng = substream(config.seed, &[0, j as u64]);
            let mut location = Vec::with_capacity(m + 1);
            let mut log_density = 0.0;
            for k in 0..=m {
                let scale = if k < m { config.scale_a } else { config.scale_b };
                let z: f64 = StandardNormal.sample(&mut rng);
                location.push(scale * z);
                log_density += normal_logpdf(scale * z, scale);
            }
            let spectrum = ridgelet_spectrum(dataset, features, &location[..m], location[m])?;
            Ok(Candidate {
                location,
                log_density,
                spectrum,
            })
        })
        .collect()
}

/// Runs SIR and returns `p` atoms at distinct candidate locations.
pub fn sir_sample(dataset: &Dataset, features: &FeatureSpec, config: &SirConfig) -> Result<AtomicMeasure> {
    config.validate()?;
    let candidates = sir_candidates(dataset, features, config)?;
    if candidates.iter().all(|c| c.spectrum == 0.0) {
        return Err(Error::Argument("degenerate target: the ridgelet spectrum vanishes at every candidate".into()));
    }
    // Importance weights |R|/Q, rescaled by the largest log-weight to avoid overflow.
    let log_w: Vec<f64> = candidates
        .iter()
        .map(|c| {
            if c.spectrum == 0.0 {
                f64::NEG_INFINITY
            } else {
                c.spectrum.abs().ln() - c.log_density
            }
        })
        .collect();
    let top = log_w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = log_w.iter().map(|l| (l - top).exp()).collect();
    let picked = weighted_sample_without_replacement(&weights, config.p, hash64(config.seed, &[1]))?;
    let locations: Vec<Vec<f64>> = picked.iter().map(|&j| candidates[j].location.clone()).collect();
    let w: Vec<C64> = match config.weight_mode {
        SirWeights::SpectrumOverP => picked
            .iter()
            .map(|&j| C64::new(candidates[j].spectrum / config.p as f64, 0.0))
            .collect(),
        SirWeights::Regression { ridge } => fit_weights_regression(&locations, features, dataset, ridge)?,
    };
    AtomicMeasure::from_parts(&w, locations, Mode::Real)
}
