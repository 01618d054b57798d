//! Greedy empirical unitary kernel quadrature.
//!
//! Atoms are added one at a time from `q` fresh proposal draws. Appending `v`
//! to `j − 1` chosen atoms under uniform weights `1/j` changes the squared
//! empirical MMD by a positive multiple of
//!
//! ```text
//! Re Σ_{l<j} Σ_i conj(φ(x_i; v_l)) φ(x_i; v) + ½ Σ_i |φ(x_i; v)|² − j Re Σ_i y_i φ(x_i; v)
//! ```
//!
//! so the default rule picks the candidate minimizing this bracket.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::regression::fit_weights_regression;
use crate::features::FeatureSpec;
use crate::measures::{AtomicMeasure, Dataset};
use crate::rng::substream;
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreedySign {
    /// Pick the candidate that decreases the MMD the most.
    Minimize,
    /// Pick the arg-max of the bracket.
    MaximizeAsPrinted,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FinalWeights {
    Uniform,
    Regression { ridge: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct UkqConfig {
    pub p: usize,
    pub q: usize,
    pub seed: u64,
    pub greedy_sign: GreedySign,
    pub final_weights: FinalWeights,
    /// Standard deviation of the isotropic normal proposal (1 for `N(0, I)`).
    pub proposal_scale: f64,
}

impl UkqConfig {
    pub fn new(p: usize, q: usize, seed: u64) -> Self {
        Self {
            p,
            q,
            seed,
            greedy_sign: GreedySign::Minimize,
            final_weights: FinalWeights::Uniform,
            proposal_scale: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.p == 0 || self.q == 0 {
            return Err(Error::Argument(format!("p and q must be ≥ 1 (p = {}, q = {})", self.p, self.q)));
        }
        if !(self.proposal_scale > 0.0 && self.proposal_scale.is_finite()) {
            return Err(Error::Argument("proposal scale must be positive".into()));
        }
        Ok(())
    }
}

/// Draw from the proposal for candidate `t` of step `j` (step 1 has one candidate).
pub fn proposal_draw(config: &UkqConfig, dim: usize, step: usize, t: usize) -> Vec<f64> {
    let mut rng = substream(config.seed, &[step as u64, t as u64]);
    draw_normal(&mut rng, dim, config.proposal_scale)
}

fn draw_normal<R: Rng>(rng: &mut R, dim: usize, scale: f64) -> Vec<f64> {
    (0..dim)
        .map(|_| scale * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng))
        .collect()
}

/// The candidates scored at step `j ≥ 2`.
pub fn step_candidates(config: &UkqConfig, dim: usize, step: usize) -> Vec<Vec<f64>> {
    (0..config.q).map(|t| proposal_draw(config, dim, step, t)).collect()
}

/// Bracket value of each candidate, given the feature sum `Σ_{l<j} φ(x_i; v_l)`.
pub fn greedy_scores(
    dataset: &Dataset,
    features: &FeatureSpec,
    chosen_sum: &[C64],
    step: usize,
    candidates: &[Vec<f64>],
) -> Result<Vec<f64>> {
    candidates
        .iter()
        .map(|v| {
            let col = features.eval_column(dataset.inputs(), v)?;
            Ok(bracket(&col, chosen_sum, dataset.targets(), step))
        })
        .collect()
}

fn bracket(col: &[C64], chosen_sum: &[C64], y: &[f64], step: usize) -> f64 {
    let mut cross = 0.0;
    let mut self_term = 0.0;
    let mut data = 0.0;
    for ((phi, a), &yi) in col.iter().zip(chosen_sum).zip(y) {
        cross += (a.conj() * phi).re;
        self_term += phi.norm_sqr();
        data += yi * phi.re;
    }
    cross + 0.5 * self_term - step as f64 * data
}

/// Greedy UKQ; returns `p` atoms with uniform or regression weights.
pub fn ukq_greedy(dataset: &Dataset, features: &FeatureSpec, config: &UkqConfig) -> Result<AtomicMeasure> {
    config.validate()?;
    if dataset.input_dim() != features.input_dim() {
        return Err(Error::Config("dataset and features disagree on input dimension".into()));
    }
    let dim = features.param_dim();
    let first = proposal_draw(config, dim, 1, 0);
    let mut chosen_sum = features.eval_column(dataset.inputs(), &first)?;
    let mut locations = vec![first];
    for j in 2..=config.p {
        let candidates = step_candidates(config, dim, j);
        let scores = greedy_scores(dataset, features, &chosen_sum, j, &candidates)?;
        let pick = select(&scores, config.greedy_sign);
        let col = features.eval_column(dataset.inputs(), &candidates[pick])?;
        for (a, phi) in chosen_sum.iter_mut().zip(col) {
            *a += phi;
        }
        locations.push(candidates[pick].clone());
    }
    let weights = match config.final_weights {
        FinalWeights::Uniform => vec![C64::new(1.0 / config.p as f64, 0.0); config.p],
        FinalWeights::Regression { ridge } => fit_weights_regression(&locations, features, dataset, ridge)?,
    };
    AtomicMeasure::from_parts(&weights, locations, features.mode())
}

/// Index of the extreme score; the first index wins ties.
fn select(scores: &[f64], sign: GreedySign) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        let better = match sign {
            GreedySign::Minimize => s < scores[best],
            GreedySign::MaximizeAsPrinted => s > scores[best],
        };
        if better {
            best = i;
        }
    }
    best
}
