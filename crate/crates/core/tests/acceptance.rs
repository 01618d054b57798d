//! Acceptance criteria AC1–AC10. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use kqforge::bench::{self, ExperimentSpec, Method};
use kqforge::features::{admissibility_constant, gaussian_derivative};
use kqforge::kernels::{inner_measures, make_empirical_target, mmd2, EmpiricalMode};
use kqforge::measures::{eval_model_on, tv_norm};
use kqforge::solvers::{gkq_run, step_candidates, ukq_greedy, FinalWeights, GkqConfig, UkqConfig, VertexSource};
use kqforge::{AtomicMeasure, Dataset, FeatureSpec, KernelSpec, KmeElement, TargetFunctional, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn within(limit: Duration, start: Instant) -> (bool, String) {
    let t = start.elapsed();
    (t < limit, format!("{:.2}s of {:.0}s", t.as_secs_f64(), limit.as_secs_f64()))
}

fn random_measure(rng: &mut ChaCha8Rng, max_atoms: usize, dim: usize, spread: f64) -> AtomicMeasure {
    let k = rng.random_range(1..=max_atoms);
    let w: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
    let locs = (0..k)
        .map(|_| (0..dim).map(|_| rng.random_range(-spread..spread)).collect())
        .collect();
    AtomicMeasure::from_real(&w, locs).unwrap()
}

fn uniform_dataset(rng: &mut ChaCha8Rng, n: usize) -> Dataset {
    let xs: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let ys: Vec<f64> = xs.iter().map(|x| (2.0 * std::f64::consts::PI * x).sin()).collect();
    Dataset::from_columns(&xs, &ys).unwrap()
}

fn gauss(v: &[f64], w: &[f64], h: f64) -> f64 {
    let d2: f64 = v.iter().zip(w).map(|(a, b)| (a - b) * (a - b)).sum();
    (-d2 / (2.0 * h * h)).exp()
}

fn ac1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let data = uniform_dataset(&mut rng, 50);
    let features = FeatureSpec::ridge(1).unwrap();
    let k = KernelSpec::empirical_unitary(data.clone(), features.clone()).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let mu = random_measure(&mut rng, 10, 2, 3.0);
        let nu = random_measure(&mut rng, 10, 2, 3.0);
        let lhs = inner_measures(&k, &mu, &nu).unwrap();
        let smu = eval_model_on(&mu, &features, &data).unwrap();
        let snu = eval_model_on(&nu, &features, &data).unwrap();
        let rhs: C64 = smu.iter().zip(&snu).map(|(a, b)| a.conj() * b).sum::<C64>() / 50.0;
        worst = worst.max((lhs - rhs).norm() / (1.0 + lhs.norm() + rhs.norm()));
    }
    let (fast, t) = within(Duration::from_secs(1), start);
    outcome(worst <= 1e-10 && fast, format!("max scaled error {worst:.2e}, {t}"))
}

fn ac2() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let k = KernelSpec::gaussian_v(0.8).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let h = KmeElement::new(random_measure(&mut rng, 8, 2, 2.0), k.clone()).unwrap();
        let mu = random_measure(&mut rng, 8, 2, 2.0);
        let lhs = h.inner(&KmeElement::new(mu.clone(), k.clone()).unwrap()).unwrap();
        let rhs: C64 = mu
            .weights()
            .zip(mu.locations())
            .map(|(w, v)| w * h.eval(v).unwrap().conj())
            .sum();
        worst = worst.max((lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1e-300));
    }
    let (fast, t) = within(Duration::from_secs(1), start);
    outcome(worst <= 1e-10 && fast, format!("max relative error {worst:.2e}, {t}"))
}

fn ac3() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let h = 1.3;
    let k = KernelSpec::gaussian_v(h).unwrap();
    let (mut worst, mut worst_self) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let mu = random_measure(&mut rng, 6, 2, 2.0);
        let nu = random_measure(&mut rng, 6, 2, 2.0);
        // merged atoms of μ − ν, expanded by hand
        let mut atoms: Vec<(f64, Vec<f64>)> = mu.weights().zip(mu.locations()).map(|(w, v)| (w.re, v.to_vec())).collect();
        atoms.extend(nu.weights().zip(nu.locations()).map(|(w, v)| (-w.re, v.to_vec())));
        let mut oracle = 0.0;
        for (wa, va) in &atoms {
            for (wb, vb) in &atoms {
                oracle += wa * wb * gauss(va, vb, h);
            }
        }
        worst = worst.max((mmd2(&k, &mu, &nu).unwrap() - oracle).abs());
        worst_self = worst_self.max(mmd2(&k, &mu, &mu).unwrap());
    }
    let (fast, t) = within(Duration::from_secs(1), start);
    outcome(
        worst <= 1e-12 && worst_self <= 1e-12 && fast,
        format!("identity error {worst:.2e}, mmd2(mu,mu) {worst_self:.2e}, {t}"),
    )
}

fn ac4() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let k = KernelSpec::gaussian_v(1.0).unwrap();
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..100 {
        let mu = random_measure(&mut rng, 10, 2, 2.0);
        let zero = AtomicMeasure::empty(mu.mode());
        worst = worst.max(mmd2(&k, &mu, &zero).unwrap().sqrt() - tv_norm(&mu));
    }
    let (fast, t) = within(Duration::from_secs(1), start);
    outcome(worst <= 1e-10 && fast, format!("max(sqrt mmd2 - tv) {worst:.3e}, {t}"))
}

/// 20 × 10 lattice on [−2, 2]².
fn grid200() -> Vec<Vec<f64>> {
    let mut g = Vec::with_capacity(200);
    for i in 0..20 {
        for j in 0..10 {
            g.push(vec![-2.0 + 4.0 * i as f64 / 19.0, -2.0 + 4.0 * j as f64 / 9.0]);
        }
    }
    g
}

/// Shared AC5/AC6 target: two positive atoms on distinct grid nodes with one
/// dominant weight, so `TV(μ°) < 1.5‖h°‖` and `‖h°‖ ≤ 2`.
fn instance(seed: u64, k: &KernelSpec, grid: &[Vec<f64>]) -> (KmeElement, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(500 + seed);
    let i = rng.random_range(0..grid.len());
    let mut j = rng.random_range(0..grid.len() - 1);
    if j >= i {
        j += 1;
    }
    let w = [rng.random_range(0.5..1.0), rng.random_range(0.1..0.3)];
    let mu = AtomicMeasure::from_real(&w, vec![grid[i].clone(), grid[j].clone()]).unwrap();
    let tv = tv_norm(&mu);
    (KmeElement::new(mu, k.clone()).unwrap(), tv)
}

fn instance_kernel() -> KernelSpec {
    KernelSpec::gaussian_v(0.5).unwrap()
}

fn ac5() -> (Outcome, Outcome) {
    let start = Instant::now();
    let lambda = 2.0;
    let k = instance_kernel();
    let grid = grid200();
    let (mut ok, mut tight_ok, mut worst_ratio) = (true, true, 0.0f64);
    for seed in 0..5u64 {
        let (h_star, _) = instance(seed, &k, &grid);
        ok &= h_star.norm2().unwrap().sqrt() <= lambda;
        let target = TargetFunctional::exact(h_star).unwrap();
        let cfg = GkqConfig::new(lambda, 64, VertexSource::Grid(grid.clone()));
        let state = gkq_run(&cfg, &target, &k, None).unwrap();
        for e in &state.objective_trace[1..] {
            let p = e.iteration as f64;
            let bound = 8.0 * lambda * lambda / (p + 2.0);
            ok &= e.objective <= bound;
            tight_ok &= e.objective <= 2.0 * lambda * lambda / (p + 2.0);
            worst_ratio = worst_ratio.max(e.objective / bound);
        }
    }
    let (fast, t) = within(Duration::from_secs(10), start);
    (
        outcome(ok && fast, format!("max J_p/(8λ²/(p+2)) {worst_ratio:.3}, {t}")),
        outcome(tight_ok, "informational: J_p ≤ 2λ²/(p+2)"),
    )
}

fn ac6() -> Outcome {
    let start = Instant::now();
    let k = instance_kernel();
    let grid = grid200();
    let mut ratios = Vec::new();
    let mut slopes = Vec::new();
    let mut interior = true;
    for seed in 0..5u64 {
        let (h_star, tv) = instance(seed, &k, &grid);
        let lambda = 1.5 * h_star.norm2().unwrap().sqrt();
        interior &= tv < lambda;
        let target = TargetFunctional::exact(h_star).unwrap();
        let mut cfg = GkqConfig::new(lambda, 64, VertexSource::Grid(grid.clone()));
        cfg.line_search = true;
        let state = gkq_run(&cfg, &target, &k, None).unwrap();
        // roundoff can leave the objective a hair below zero once converged
        let obj: Vec<f64> = state.objective_trace.iter().map(|e| e.objective.max(1e-300)).collect();
        ratios.push(obj[64] / obj[8]);
        let pts: Vec<(f64, f64)> = (1..=64).map(|p| (p as f64, obj[p].ln())).collect();
        let (mx, my) = pts.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0 / 64.0, a.1 + b.1 / 64.0));
        let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
        slopes.push(sxy / sxx);
    }
    let ratio = bench::median(&ratios);
    let slope = bench::median(&slopes);
    let (fast, t) = within(Duration::from_secs(10), start);
    outcome(
        interior && ratio <= 0.05 && slope < 0.0 && fast,
        format!("median J64/J8 {ratio:.3e}, median log-slope {slope:.3}, targets interior: {interior}, {t}"),
    )
}

fn ac7() -> (Outcome, Duration) {
    let start = Instant::now();
    let spec = ExperimentSpec::default();
    let report = bench::sweep(&spec).unwrap();
    let elapsed = start.elapsed();
    let at64 = |m: Method| {
        let v: Vec<f64> = report.rows.iter().filter(|r| r.method == m && r.p == 64).map(|r| r.rmse_test).collect();
        bench::median(&v)
    };
    let (ukq64, sir64) = (at64(Method::Ukq), at64(Method::Sir));
    let s_sir = report.fit(Method::Sir, "max_err_test").map_or(f64::NAN, |f| f.slope);
    let s_ukq = report.fit(Method::Ukq, "max_err_test").map_or(f64::NAN, |f| f.slope);
    let i = ukq64 <= 0.15 && sir64 <= 0.20;
    let ii = (-0.8..=-0.25).contains(&s_sir);
    let iii = s_ukq <= s_sir - 0.2;
    let fast = elapsed < Duration::from_secs(120);
    let tag = |b: bool| if b { "ok" } else { "FAIL" };
    (
        outcome(
            i && ii && iii && fast,
            format!(
                "(i) {} rmse@64 ukq {ukq64:.4} sir {sir64:.4}; (ii) {} sir slope {s_sir:.3}; (iii) {} ukq slope {s_ukq:.3} vs ≤ {:.3}; {:.1}s of 120s",
                tag(i),
                tag(ii),
                tag(iii),
                s_sir - 0.2,
                elapsed.as_secs_f64()
            ),
        ),
        elapsed,
    )
}

/// ∫ 2π|ζ| e^{−ζ²} dζ by composite Simpson on [0, 12], doubled.
fn analytic_admissibility() -> f64 {
    let n = 200_000;
    let (a, b) = (0.0, 12.0);
    let h = (b - a) / n as f64;
    let f = |z: f64| 2.0 * std::f64::consts::PI * z * (-z * z).exp();
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    2.0 * s * h / 3.0
}

fn ac8() -> Outcome {
    let oracle = analytic_admissibility();
    let start = Instant::now();
    let c = admissibility_constant(gaussian_derivative, gaussian_derivative, 1).unwrap();
    let rel = (c - oracle).abs() / oracle;
    let (fast, t) = within(Duration::from_secs(1), start);
    outcome(rel <= 1e-6 && fast, format!("c = {c:.10}, oracle {oracle:.10}, rel {rel:.2e}, {t}"))
}

fn ac9() -> Outcome {
    let start = Instant::now();
    let features = FeatureSpec::ridge(1).unwrap();
    let mut agree = 0;
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(900 + seed);
        let xs: Vec<f64> = (0..30).map(|_| rng.random_range(-1.0..1.0)).collect();
        let ys: Vec<f64> = xs.iter().map(|x| (2.0 * std::f64::consts::PI * x).sin() + rng.random_range(-0.1..0.1)).collect();
        let data = Dataset::from_columns(&xs, &ys).unwrap();
        let mut cfg = UkqConfig::new(2, 3, seed);
        cfg.final_weights = FinalWeights::Uniform;
        let chosen = ukq_greedy(&data, &features, &cfg).unwrap();
        let locs: Vec<Vec<f64>> = chosen.locations().map(|v| v.to_vec()).collect();
        // ‖U[μ] − T‖² = (1/n) Σ |S[μ](x_i) − y_i|² for the uniform two-atom measure
        let loss = |v: &[f64]| -> f64 {
            let mu = AtomicMeasure::from_real(&[0.5, 0.5], vec![locs[0].clone(), v.to_vec()]).unwrap();
            let s = eval_model_on(&mu, &features, &data).unwrap();
            s.iter().zip(&ys).map(|(a, y)| (a.re - y).powi(2) + a.im.powi(2)).sum::<f64>() / 30.0
        };
        let cands = step_candidates(&cfg, 2, 2);
        let best = cands
            .iter()
            .enumerate()
            .min_by(|a, b| loss(a.1).total_cmp(&loss(b.1)).then(a.0.cmp(&b.0)))
            .map(|(_, v)| v.clone())
            .unwrap();
        if best == locs[1] {
            agree += 1;
        }
        // the unitary-kernel target agrees with the residual form
        if seed == 0 {
            let k = KernelSpec::empirical_unitary(data.clone(), features.clone()).unwrap();
            let t = make_empirical_target(&data, &k, EmpiricalMode::Raw).unwrap();
            let mu = AtomicMeasure::from_real(&[0.5, 0.5], locs.clone()).unwrap();
            let h = KmeElement::new(mu, k).unwrap();
            let j = 2.0 * kqforge::kernels::mmd2_to_target(&h, &t).unwrap().value;
            assert!((j - loss(&locs[1])).abs() < 1e-10);
        }
    }
    let (fast, t) = within(Duration::from_secs(2), start);
    outcome(agree == 20 && fast, format!("{agree}/20 instances match, {t}"))
}

fn ac10(ac7_time: Duration) -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let start = Instant::now();
    let mut outputs = Vec::new();
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        let status = Command::new(env!("CARGO_BIN_EXE_kqforge"))
            .args(["sweep", "--out"])
            .arg(&out)
            .output()
            .unwrap();
        if !status.status.success() {
            return outcome(false, format!("sweep failed: {}", String::from_utf8_lossy(&status.stderr)));
        }
        outputs.push(std::fs::read(out.join("report.csv")).unwrap());
    }
    let per_run = start.elapsed() / 2;
    let same = outputs[0] == outputs[1];
    let fast = per_run < 2 * ac7_time;
    outcome(
        same && fast,
        format!(
            "report.csv identical: {same}, {:.1}s per invocation vs AC7 {:.1}s",
            per_run.as_secs_f64(),
            ac7_time.as_secs_f64()
        ),
    )
}

fn main() {
    let mut lines: Vec<(String, Outcome)> = Vec::new();
    let mut stdout = std::io::stdout();
    let mut record = |name: &str, o: Outcome, gate: bool, lines: &mut Vec<(String, Outcome)>| {
        let status = match (gate, o.pass) {
            (true, true) => "PASS",
            (true, false) => "FAIL",
            (false, true) => "info: holds",
            (false, false) => "info: does not hold",
        };
        writeln!(stdout, "{name} {status}: {}", o.detail).unwrap();
        stdout.flush().unwrap();
        if gate {
            lines.push((name.to_string(), o));
        }
    };
    record("AC1", ac1(), true, &mut lines);
    record("AC2", ac2(), true, &mut lines);
    record("AC3", ac3(), true, &mut lines);
    record("AC4", ac4(), true, &mut lines);
    let (a5, a5_tight) = ac5();
    record("AC5", a5, true, &mut lines);
    record("AC5 (2λ²/(p+2))", a5_tight, false, &mut lines);
    record("AC6", ac6(), true, &mut lines);
    let (a7, t7) = ac7();
    record("AC7", a7, true, &mut lines);
    record("AC8", ac8(), true, &mut lines);
    record("AC9", ac9(), true, &mut lines);
    record("AC10", ac10(t7), true, &mut lines);
    let failed: Vec<&str> = lines.iter().filter(|(_, o)| !o.pass).map(|(n, _)| n.as_str()).collect();
    println!("{} of {} criteria pass", lines.len() - failed.len(), lines.len());
    if !failed.is_empty() {
        eprintln!("failed: {}", failed.join(", "));
        std::process::exit(1);
    }
}
