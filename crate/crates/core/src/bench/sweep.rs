use std::time::Instant;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use super::config::{ExperimentSpec, Method, WeightSetting};
use super::rates::{median_curves, rate_fit, RateFit};
use crate::features::FeatureSpec;
use crate::kernels::{make_empirical_target, mmd2_to_target, EmpiricalMode, KernelSpec, KmeElement};
use crate::measures::{eval_model_on, metrics, AtomicMeasure, Dataset, Mode};
use crate::rng::{hash64, label_id, substream};
use crate::sir::{sir_sample, SirConfig, SirWeights};
use crate::solvers::gkq::{gkq_run, GkqConfig, Update, VertexSource};
use crate::solvers::regression::regression_measure;
use crate::solvers::ukq::{ukq_greedy, FinalWeights, GreedySign, UkqConfig};
use crate::{Error, Result};

/// `x_i ~ Uni[−1, 1]`, `y_i = sin(2πx_i) + ξ_i`, `ξ_i ~ N(0, noise_sd²)`.
pub fn gen_dataset(n: usize, noise_sd: f64, seed: u64) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::Argument("dataset size must be ≥ 1".into()));
    }
    let noise = Normal::new(0.0, noise_sd).map_err(|e| Error::Argument(e.to_string()))?;
    let mut rng = substream(seed, &[label_id("dataset")]);
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for _ in 0..n {
        let x: f64 = rng.random_range(-1.0..=1.0);
        let xi = noise.sample(&mut rng);
        xs.push(x);
        ys.push((2.0 * std::f64::consts::PI * x).sin() + xi);
    }
    Dataset::from_columns(&xs, &ys)
}

/// One `(method, p, seed)` result. Failed runs carry `error` and NaN metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub method: Method,
    pub p: usize,
    pub seed: usize,
    pub rmse_train: f64,
    pub rmse_test: f64,
    pub max_err_test: f64,
    pub mmd2: Option<f64>,
    pub wall_time_ms: Option<f64>,
    pub error: Option<String>,
}

/// Rate fit of the median curve of one metric for one method.
#[derive(Debug, Clone, PartialEq)]
pub struct FitRow {
    pub method: Method,
    pub metric: &'static str,
    pub fit: RateFit,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunReport {
    /// Sorted by `(method, p, seed)`.
    pub rows: Vec<Row>,
    pub fits: Vec<FitRow>,
}

impl RunReport {
    pub fn fit(&self, method: Method, metric: &str) -> Option<RateFit> {
        self.fits
            .iter()
            .find(|f| f.method == method && f.metric == metric)
            .map(|f| f.fit)
    }

    /// Fits over `p ≥ min_p` of the median `max_err_test` and `rmse_test` curves.
    pub fn with_fits(mut self, min_p: usize) -> Self {
        self.fits = compute_fits(&self.rows, min_p);
        self
    }
}

type Metric = fn(&Row) -> f64;

pub(crate) fn compute_fits(rows: &[Row], min_p: usize) -> Vec<FitRow> {
    let mut fits = Vec::new();
    let metrics: [(&'static str, Metric); 2] = [("max_err_test", |r| r.max_err_test), ("rmse_test", |r| r.rmse_test)];
    for (name, metric) in metrics {
        for (method, curve) in median_curves(rows, metric) {
            let pts: Vec<(f64, f64)> = curve
                .iter()
                .filter(|(p, _)| *p >= min_p)
                .map(|&(p, e)| (p as f64, e))
                .collect();
            if let Ok(fit) = rate_fit(&pts) {
                fits.push(FitRow { method, metric: name, fit });
            }
        }
    }
    fits.sort_by(|a, b| (a.method, a.metric).cmp(&(b.method, b.metric)));
    fits
}

/// Atoms produced by one method run plus the MMD to the empirical target, when defined.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub measure: AtomicMeasure,
    pub mmd2: Option<f64>,
}

fn lattice(size: usize, half_width: f64) -> Vec<Vec<f64>> {
    let step = if size > 1 { 2.0 * half_width / (size - 1) as f64 } else { 0.0 };
    let axis: Vec<f64> = (0..size).map(|i| if size > 1 { -half_width + step * i as f64 } else { 0.0 }).collect();
    axis.iter()
        .flat_map(|&a| axis.iter().map(move |&b| vec![a, b]))
        .collect()
}

fn unique_locations(measure: &AtomicMeasure) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in measure.locations() {
        if !out.iter().any(|u| u.as_slice() == v) {
            out.push(v.to_vec());
        }
    }
    out
}

/// Runs one method at one `p` on a training set.
pub fn run_single(spec: &ExperimentSpec, method: Method, p: usize, train: &Dataset, seed: u64) -> Result<RunOutput> {
    let features = FeatureSpec::ridge(1)?;
    match method {
        Method::Sir => {
            let s = &spec.sir;
            let mut cfg = SirConfig::new(p, s.p_prime.max(p), seed);
            cfg.scale_a = s.scale_a;
            cfg.scale_b = s.scale_b;
            cfg.weight_mode = match s.weights {
                WeightSetting::Regression => SirWeights::Regression { ridge: s.ridge },
                WeightSetting::Native => SirWeights::SpectrumOverP,
            };
            Ok(RunOutput {
                measure: sir_sample(train, &features, &cfg)?,
                mmd2: None,
            })
        }
        Method::Ukq => {
            let s = &spec.ukq;
            let mut cfg = UkqConfig::new(p, s.q, seed);
            cfg.proposal_scale = s.proposal_scale;
            if s.maximize_as_printed {
                cfg.greedy_sign = GreedySign::MaximizeAsPrinted;
            }
            cfg.final_weights = match s.weights {
                WeightSetting::Regression => FinalWeights::Regression { ridge: s.ridge },
                WeightSetting::Native => FinalWeights::Uniform,
            };
            let measure = ukq_greedy(train, &features, &cfg)?;
            let mmd2 = unitary_mmd2(train, &features, &measure)?;
            Ok(RunOutput {
                measure,
                mmd2: Some(mmd2),
            })
        }
        Method::GkqGrid => {
            let s = &spec.gkq_grid;
            let kernel = KernelSpec::empirical_unitary(train.clone(), features.clone())?;
            let target = make_empirical_target(train, &kernel, EmpiricalMode::Raw)?;
            let mut cfg = GkqConfig::new(s.lambda, p, VertexSource::Grid(lattice(s.grid_size, s.half_width)));
            cfg.seed = seed;
            cfg.line_search = s.line_search;
            if s.fully_corrective {
                cfg.update = Update::FullyCorrective;
            }
            let state = gkq_run(&cfg, &target, &kernel, None)?;
            let measure = match s.weights {
                WeightSetting::Native => state.element.into_measure(),
                WeightSetting::Regression => {
                    let locs = unique_locations(state.element.measure());
                    if locs.is_empty() {
                        state.element.into_measure()
                    } else {
                        regression_measure(locs, &features, train, s.ridge)?
                    }
                }
            };
            let mmd2 = unitary_mmd2(train, &features, &measure)?;
            Ok(RunOutput {
                measure,
                mmd2: Some(mmd2),
            })
        }
    }
}

/// `‖U[μ] − T‖²` for the raw empirical target of the training data.
fn unitary_mmd2(train: &Dataset, features: &FeatureSpec, measure: &AtomicMeasure) -> Result<f64> {
    let kernel = KernelSpec::empirical_unitary(train.clone(), features.clone())?;
    let target = make_empirical_target(train, &kernel, EmpiricalMode::Raw)?;
    let h = KmeElement::new(measure.clone(), kernel)?;
    Ok((2.0 * mmd2_to_target(&h, &target)?.value).max(0.0))
}

fn real_predictions(measure: &AtomicMeasure, features: &FeatureSpec, data: &Dataset) -> Result<Vec<f64>> {
    Ok(eval_model_on(measure, features, data)?.iter().map(|z| z.re).collect())
}

fn evaluate(
    spec: &ExperimentSpec,
    method: Method,
    p: usize,
    seed_index: usize,
    train: &Dataset,
    test: &Dataset,
) -> Row {
    let run_seed = hash64(spec.base_seed, &[label_id(method.id()), p as u64, seed_index as u64]);
    let start = Instant::now();
    let result = run_single(spec, method, p, train, run_seed).and_then(|out| {
        let features = FeatureSpec::ridge(1)?;
        debug_assert_eq!(out.measure.mode(), Mode::Real);
        let train_m = metrics(&real_predictions(&out.measure, &features, train)?, train.targets())?;
        let test_m = metrics(&real_predictions(&out.measure, &features, test)?, test.targets())?;
        Ok((train_m, test_m, out.mmd2))
    });
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let wall_time_ms = spec.record_timing.then_some(elapsed);
    match result {
        Ok((train_m, test_m, mmd2)) => Row {
            method,
            p,
            seed: seed_index,
            rmse_train: train_m.rmse,
            rmse_test: test_m.rmse,
            max_err_test: test_m.max_err,
            mmd2,
            wall_time_ms,
            error: None,
        },
        Err(e) => Row {
            method,
            p,
            seed: seed_index,
            rmse_train: f64::NAN,
            rmse_test: f64::NAN,
            max_err_test: f64::NAN,
            mmd2: None,
            wall_time_ms,
            error: Some(e.to_string()),
        },
    }
}

/// Train and test sets for seed index `s`; independent of method and `p`.
pub fn seed_datasets(spec: &ExperimentSpec, seed_index: usize) -> Result<(Dataset, Dataset)> {
    let s = seed_index as u64;
    let train = gen_dataset(spec.n_train, spec.noise_sd, hash64(spec.base_seed, &[label_id("train"), s]))?;
    let test = gen_dataset(spec.n_test, spec.noise_sd, hash64(spec.base_seed, &[label_id("test"), s]))?;
    Ok((train, test))
}

/// Runs every `(method, p, seed)` of the spec and fits decay rates.
pub fn sweep(spec: &ExperimentSpec) -> Result<RunReport> {
    spec.validate()?;
    let datasets = (0..spec.seeds)
        .map(|s| seed_datasets(spec, s))
        .collect::<Result<Vec<_>>>()?;
    let mut methods = spec.methods.clone();
    methods.sort();
    methods.dedup();
    let mut p_grid = spec.p_grid.clone();
    p_grid.sort_unstable();
    p_grid.dedup();
    let jobs: Vec<(Method, usize, usize)> = methods
        .iter()
        .flat_map(|&m| {
            p_grid
                .iter()
                .flat_map(move |&p| (0..spec.seeds).map(move |s| (m, p, s)))
        })
        .collect();
    let rows: Vec<Row> = jobs
        .par_iter()
        .map(|&(m, p, s)| {
            let (train, test) = &datasets[s];
            evaluate(spec, m, p, s, train, test)
        })
        .collect();
    Ok(RunReport { rows, fits: Vec::new() }.with_fits(spec.fit_min_p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noiseless_examples() {
        let d = gen_dataset(50, 0.0, 3).unwrap();
        for (x, y) in d.inputs().iter().zip(d.targets()) {
            assert!((y - (2.0 * std::f64::consts::PI * x[0]).sin()).abs() < 1e-15);
            assert!((-1.0..=1.0).contains(&x[0]));
        }
        assert_eq!((2.0 * std::f64::consts::PI * 0.25f64).sin(), 1.0);
    }

    #[test]
    fn dataset_is_deterministic() {
        assert_eq!(gen_dataset(10, 0.1, 1).unwrap(), gen_dataset(10, 0.1, 1).unwrap());
        assert_ne!(gen_dataset(10, 0.1, 1).unwrap(), gen_dataset(10, 0.1, 2).unwrap());
    }

    #[test]
    fn empty_method_list_gives_empty_report() {
        let spec = ExperimentSpec {
            methods: vec![],
            ..ExperimentSpec::default()
        };
        let r = sweep(&spec).unwrap();
        assert!(r.rows.is_empty() && r.fits.is_empty());
    }

    #[test]
    fn single_run_gives_single_row() {
        let spec = ExperimentSpec {
            methods: vec![Method::Ukq],
            p_grid: vec![4],
            seeds: 1,
            ..ExperimentSpec::default()
        };
        let r = sweep(&spec).unwrap();
        assert_eq!(r.rows.len(), 1);
        let row = &r.rows[0];
        assert!(row.error.is_none());
        assert!(row.mmd2.is_some() && row.wall_time_ms.is_none());
    }

    #[test]
    fn lattice_covers_square() {
        let l = lattice(3, 2.0);
        assert_eq!(l.len(), 9);
        assert_eq!(l[0], vec![-2.0, -2.0]);
        assert_eq!(l[8], vec![2.0, 2.0]);
    }
}
