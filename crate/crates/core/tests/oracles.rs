//! Numerical checks against independent oracles.

use kqforge::bench::{self, gen_dataset, rate_fit, ExperimentSpec, Method};
use kqforge::features::gaussian_derivative;
use kqforge::kernels::{gram, make_empirical_target, mmd2_to_target, EmpiricalMode};
use kqforge::measures::{eval_model, eval_model_on, metrics};
use kqforge::sir::weighted_sample_without_replacement;
use kqforge::solvers::{
    fw_vertex, gkq_run, line_search_eta, regression_measure, ukq_greedy, FinalWeights, GkqConfig, UkqConfig, Update,
    VertexSource,
};
use kqforge::{AtomicMeasure, Dataset, FeatureSpec, KernelSpec, KmeElement, Mode, TargetFunctional, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Neumaier-compensated sum.
fn comp_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for x in xs {
        let t = s + x;
        c += if s.abs() >= x.abs() { (s - t) + x } else { (x - t) + s };
        s = t;
    }
    s + c
}

#[test]
fn fourier_model_matches_compensated_resummation() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f = FeatureSpec::fourier(2).unwrap();
    for _ in 0..20 {
        let w: Vec<C64> = (0..5).map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let locs: Vec<Vec<f64>> = (0..5).map(|_| vec![rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)]).collect();
        let x = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
        let mu = AtomicMeasure::from_parts(&w, locs.clone(), Mode::Complex).unwrap();
        let got = eval_model(&mu, &f, &x).unwrap();
        let phase = |v: &[f64]| -(x[0] * v[0] + x[1] * v[1]);
        let re = comp_sum(w.iter().zip(&locs).map(|(w, v)| w.re * phase(v).cos() - w.im * phase(v).sin()));
        let im = comp_sum(w.iter().zip(&locs).map(|(w, v)| w.re * phase(v).sin() + w.im * phase(v).cos()));
        assert!((got - C64::new(re, im)).norm() <= 1e-12, "{got} vs {re}+{im}i");
    }
}

#[test]
fn metrics_match_compensated_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let pred: Vec<f64> = (0..100).map(|_| rng.random_range(-3.0..3.0)).collect();
    let y: Vec<f64> = (0..100).map(|_| rng.random_range(-3.0..3.0)).collect();
    let m = metrics(&pred, &y).unwrap();
    let rmse = (comp_sum(pred.iter().zip(&y).map(|(a, b)| (a - b) * (a - b))) / 100.0).sqrt();
    let max = pred.iter().zip(&y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!((m.rmse - rmse).abs() <= 1e-12);
    assert_eq!(m.max_err, max);
}

#[test]
fn ridge_feature_uses_analytic_admissibility() {
    let c = 2.0 * std::f64::consts::PI;
    let f = FeatureSpec::ridge(1).unwrap();
    for (x, a, b) in [(0.3, 1.7, -0.4), (-0.9, -2.2, 0.8), (0.0, 5.0, 1.0)] {
        let dual = f.eval_dual(&[x], &[a, b]).unwrap().re;
        assert!((dual - gaussian_derivative(a * x - b) / c).abs() <= 1e-9);
        assert_eq!(f.eval(&[x], &[a, b]).unwrap().re, gaussian_derivative(a * x - b));
    }
}

/// S[R[f; ρ]] on a Riemann grid over [−5, 5]² reproduces a ridge function.
/// The `a` integrand decays like |a|⁻³, so the truncation error grows with
/// `a₀`; a low-frequency ridge keeps it well inside the tolerance.
#[test]
fn ridgelet_reconstruction_smoke_test() {
    let c = FeatureSpec::ridge(1).unwrap().admissibility().unwrap();
    let (a0, b0) = (0.5, 0.2);
    let target = |x: f64| gaussian_derivative(a0 * x - b0);
    // transform by the trapezoid rule on [−12, 12]
    let hx = 0.05;
    let xs: Vec<f64> = (0..=480).map(|i| -12.0 + hx * i as f64).collect();
    let fx: Vec<f64> = xs.iter().map(|&x| target(x)).collect();
    let step = 0.1;
    let axis: Vec<f64> = (0..=100).map(|i| -5.0 + step * i as f64).collect();
    let mut spectrum = Vec::with_capacity(axis.len() * axis.len());
    for &a in &axis {
        for &b in &axis {
            let r: f64 = xs.iter().zip(&fx).map(|(&x, &y)| y * gaussian_derivative(a * x - b) / c).sum::<f64>() * hx;
            spectrum.push((a, b, r * step * step));
        }
    }
    let mut worst = 0.0f64;
    for k in 0..=40 {
        let x = -1.0 + 0.05 * k as f64;
        let s: f64 = spectrum.iter().map(|&(a, b, w)| w * gaussian_derivative(a * x - b)).sum();
        worst = worst.max((s - target(x)).abs());
    }
    assert!(worst <= 0.05, "max reconstruction error {worst}");
}

#[test]
fn gram_matrices_are_numerically_psd() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pts: Vec<Vec<f64>> = (0..20).map(|_| vec![rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)]).collect();
    let xs: Vec<f64> = (0..30).map(|_| rng.random_range(-1.0..1.0)).collect();
    let data = Dataset::from_columns(&xs, &vec![0.0; 30]).unwrap();
    let kernels = [
        KernelSpec::gaussian_v(0.7).unwrap(),
        KernelSpec::empirical_unitary(data.clone(), FeatureSpec::ridge(1).unwrap()).unwrap(),
        KernelSpec::empirical_unitary(data, FeatureSpec::fourier(1).unwrap()).unwrap(),
    ];
    for k in &kernels {
        let pts: Vec<Vec<f64>> = match k.point_dim() {
            Some(1) => pts.iter().map(|p| vec![p[0]]).collect(),
            _ => pts.clone(),
        };
        let g = gram(k, &pts).unwrap();
        let eig = g.symmetric_eigen();
        let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(min >= -1e-9, "min eigenvalue {min}");
    }
}

#[test]
fn smoothed_target_recovers_generating_embedding() {
    let f = FeatureSpec::ridge(1).unwrap();
    let mu = AtomicMeasure::from_real(&[0.8, -0.5], vec![vec![2.0, 0.3], vec![-1.5, -0.2]]).unwrap();
    let xs: Vec<f64> = (0..10).map(|i| -0.9 + 0.2 * i as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| eval_model(&mu, &f, &[x]).unwrap().re).collect();
    let data = Dataset::from_columns(&xs, &ys).unwrap();
    let k = KernelSpec::empirical_unitary(data.clone(), f).unwrap();
    let mode = EmpiricalMode::Smoothed {
        data_kernel: KernelSpec::gaussian_x(0.1).unwrap(),
        ridge: Some(1e-8),
    };
    let t = make_empirical_target(&data, &k, mode).unwrap();
    let h = KmeElement::new(mu, k).unwrap();
    for v in [[1.0, 0.0], [-2.0, 0.5], [0.5, -1.0], [3.0, 2.0]] {
        let d = (t.eval(&v).unwrap() - h.eval(&v).unwrap()).norm();
        assert!(d <= 5e-3, "probe {v:?}: {d}");
    }
}

#[test]
fn dataset_noise_has_requested_spread() {
    let d = gen_dataset(100_000, 0.1, 17).unwrap();
    let r: Vec<f64> = d
        .inputs()
        .iter()
        .zip(d.targets())
        .map(|(x, y)| y - (2.0 * std::f64::consts::PI * x[0]).sin())
        .collect();
    let mean = comp_sum(r.iter().copied()) / r.len() as f64;
    let sd = (comp_sum(r.iter().map(|e| (e - mean) * (e - mean))) / (r.len() - 1) as f64).sqrt();
    assert!((0.098..=0.102).contains(&sd), "sd {sd}");
}

#[test]
fn weighted_sampling_frequencies() {
    let mut counts = [0usize; 3];
    let trials = 100_000;
    for s in 0..trials {
        counts[weighted_sample_without_replacement(&[1.0, 2.0, 3.0], 1, s as u64).unwrap()[0]] += 1;
    }
    for (c, expect) in counts.iter().zip([1.0 / 6.0, 2.0 / 6.0, 3.0 / 6.0]) {
        let freq = *c as f64 / trials as f64;
        assert!((freq - expect).abs() <= 0.01, "{freq} vs {expect}");
    }
}

#[test]
fn rate_fit_matches_closed_form_ols() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let pts: Vec<(f64, f64)> = [2.0f64, 4.0, 8.0, 16.0, 32.0, 64.0]
        .iter()
        .map(|&p| (p, 1.3 * p.powf(-0.6) * (1.0 + rng.random_range(-0.2..0.2))))
        .collect();
    let fit = rate_fit(&pts).unwrap();
    let lx: Vec<f64> = pts.iter().map(|p| p.0.log10()).collect();
    let ly: Vec<f64> = pts.iter().map(|p| p.1.log10()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (comp_sum(lx.iter().copied()) / n, comp_sum(ly.iter().copied()) / n);
    let sxy = comp_sum(lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)));
    let sxx = comp_sum(lx.iter().map(|x| (x - mx) * (x - mx)));
    let slope = sxy / sxx;
    assert!((fit.slope - slope).abs() <= 1e-10);
    assert!((fit.intercept - (my - slope * mx)).abs() <= 1e-10);
}

fn lattice_200() -> Vec<Vec<f64>> {
    (0..20)
        .flat_map(|i| (0..10).map(move |j| vec![-2.0 + 4.0 * i as f64 / 19.0, -2.0 + 4.0 * j as f64 / 9.0]))
        .collect()
}

fn grid_instance(seed: u64) -> (KernelSpec, TargetFunctional) {
    let k = KernelSpec::gaussian_v(1.0).unwrap();
    let grid = lattice_200();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w: Vec<f64> = (0..4).map(|_| rng.random_range(-0.45..0.45)).collect();
    let locs = (0..4).map(|_| grid[rng.random_range(0..200)].clone()).collect();
    let h = KmeElement::new(AtomicMeasure::from_real(&w, locs).unwrap(), k.clone()).unwrap();
    (k, TargetFunctional::exact(h).unwrap())
}

#[test]
fn gkq_rate_bound_and_fully_corrective_dominance() {
    let lambda = 2.0;
    for seed in 0..5 {
        let (k, t) = grid_instance(seed);
        let cs = gkq_run(&GkqConfig::new(lambda, 64, VertexSource::Grid(lattice_200())), &t, &k, None).unwrap();
        let mut cfg = GkqConfig::new(lambda, 64, VertexSource::Grid(lattice_200()));
        cfg.update = Update::FullyCorrective;
        let fc = gkq_run(&cfg, &t, &k, None).unwrap();
        for (a, b) in cs.objective_trace.iter().zip(&fc.objective_trace).skip(1) {
            let p = a.iteration as f64;
            assert!(a.objective <= 8.0 * lambda * lambda / (p + 2.0));
            assert!(b.objective <= a.objective + 1e-10, "p = {p}: {} > {}", b.objective, a.objective);
        }
    }
}

#[test]
fn line_search_never_loses_to_default_step() {
    let lambda = 2.0;
    let grid = lattice_200();
    for seed in 10..13 {
        let (k, t) = grid_instance(seed);
        let mut h = KmeElement::zero(k.clone(), Mode::Real);
        for j in 1..=30 {
            let c = fw_vertex(&t, &h, &grid, lambda).unwrap();
            let s = KmeElement::section(k.clone(), c.location.clone(), C64::new(c.weight, 0.0)).unwrap();
            let step = |eta: f64| h.scaled(C64::new(1.0 - eta, 0.0)).add_scaled(&s, C64::new(eta, 0.0)).unwrap();
            let eta = line_search_eta(&h, &s, &t).unwrap();
            let searched = mmd2_to_target(&step(eta), &t).unwrap().value;
            let default = mmd2_to_target(&step(2.0 / (2.0 + j as f64)), &t).unwrap().value;
            assert!(searched <= default + 1e-12);
            h = step(eta);
        }
    }
}

#[test]
fn regression_weights_beat_uniform_on_training_data() {
    let f = FeatureSpec::ridge(1).unwrap();
    for seed in 0..5 {
        let data = gen_dataset(100, 0.1, seed).unwrap();
        let mut cfg = UkqConfig::new(8, 50, seed);
        cfg.final_weights = FinalWeights::Uniform;
        let uniform = ukq_greedy(&data, &f, &cfg).unwrap();
        let locs: Vec<Vec<f64>> = uniform.locations().map(|v| v.to_vec()).collect();
        let fitted = regression_measure(locs, &f, &data, 1e-10).unwrap();
        let rmse = |m: &AtomicMeasure| {
            let pred: Vec<f64> = eval_model_on(m, &f, &data).unwrap().iter().map(|z| z.re).collect();
            metrics(&pred, data.targets()).unwrap().rmse
        };
        assert!(rmse(&fitted) <= rmse(&uniform) + 1e-9);
    }
}

#[test]
fn sir_reaches_the_noise_floor() {
    let spec = ExperimentSpec {
        methods: vec![Method::Sir],
        p_grid: vec![64],
        fit_min_p: 64,
        ..ExperimentSpec::default()
    };
    let report = bench::sweep(&spec).unwrap();
    assert_eq!(report.rows.len(), 10);
    let rmse: Vec<f64> = report.rows.iter().map(|r| r.rmse_test).collect();
    assert!(bench::median(&rmse) <= 0.2);
}
