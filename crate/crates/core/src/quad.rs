//! Composite Gauss–Legendre quadrature.

use crate::{Error, Result, C64};

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds an `order`-point rule by Newton iteration on the Legendre polynomial.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "quadrature order must be positive");
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let n = order as f64;
        for i in 0..order.div_ceil(2) {
            // Tricomi initial guess for the i-th root from the right.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(order, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(order, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[order - 1 - i] = x;
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Integral of `f` over `[lo, hi]` split into `panels` equal pieces.
    pub fn composite<F>(&self, f: F, lo: f64, hi: f64, panels: usize) -> f64
    where
        F: Fn(f64) -> f64,
    {
        let h = (hi - lo) / panels as f64;
        let mut total = 0.0;
        for k in 0..panels {
            let mid = lo + (k as f64 + 0.5) * h;
            let half = 0.5 * h;
            let mut s = 0.0;
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                s += w * f(mid + half * x);
            }
            total += half * s;
        }
        total
    }

    /// Complex-valued counterpart of [`GaussLegendre::composite`].
    pub fn composite_complex<F>(&self, f: F, lo: f64, hi: f64, panels: usize) -> C64
    where
        F: Fn(f64) -> C64,
    {
        let h = (hi - lo) / panels as f64;
        let mut total = C64::new(0.0, 0.0);
        for k in 0..panels {
            let mid = lo + (k as f64 + 0.5) * h;
            let half = 0.5 * h;
            let mut s = C64::new(0.0, 0.0);
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                s += f(mid + half * x) * *w;
            }
            total += s * half;
        }
        total
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Doubles the panel count of a composite rule on `[lo, hi]` until two
/// successive estimates differ by less than `tol`.
///
/// Fails with [`Error::Numerical`] when the last change still exceeds `fail_tol`.
pub fn integrate_refined<F>(
    rule: &GaussLegendre,
    f: F,
    lo: f64,
    hi: f64,
    tol: f64,
    fail_tol: f64,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mut panels = 4;
    let mut prev = rule.composite(&f, lo, hi, panels);
    let mut change = f64::INFINITY;
    for _ in 0..10 {
        panels *= 2;
        let next = rule.composite(&f, lo, hi, panels);
        change = (next - prev).abs();
        prev = next;
        if change < tol {
            return Ok(prev);
        }
    }
    if change <= fail_tol {
        Ok(prev)
    } else {
        Err(Error::Numerical(format!(
            "quadrature on [{lo}, {hi}] did not converge (last change {change:e})"
        )))
    }
}
