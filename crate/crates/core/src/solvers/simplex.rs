//! `min ½θᵀGθ − bᵀθ` over the probability simplex.

use nalgebra::{DMatrix, DVector};

const MAX_ITERATIONS: usize = 10_000;
const GAP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexSolution {
    pub theta: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
    /// `false` when the iteration cap was hit; `theta` is then the best iterate seen.
    pub converged: bool,
}

pub(crate) fn quadratic(g: &DMatrix<f64>, b: &[f64], theta: &[f64]) -> f64 {
    let n = theta.len();
    let mut q = 0.0;
    for i in 0..n {
        let mut row = 0.0;
        for j in 0..n {
            row += g[(i, j)] * theta[j];
        }
        q += theta[i] * (0.5 * row - b[i]);
    }
    q
}

/// Euclidean projection onto `{θ ≥ 0, Σθ = 1}` (sort-based).
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut tau = 0.0;
    for (k, &uk) in u.iter().enumerate() {
        cumsum += uk;
        let t = (cumsum - 1.0) / (k + 1) as f64;
        if uk - t > 0.0 {
            tau = t;
        }
    }
    v.iter().map(|&x| (x - tau).max(0.0)).collect()
}

/// Accelerated projected gradient (FISTA with function-value restart), step
/// `1/L` with `L` the largest absolute row sum of `G`. Stops when the duality
/// gap `⟨∇, θ⟩ − minᵢ ∇ᵢ`, an upper bound on the suboptimality, falls below
/// `GAP_TOL · max(1, L)`.
///
/// `warm` (if given) is projected onto the simplex first.
pub fn simplex_qp(g: &DMatrix<f64>, b: &[f64], warm: Option<&[f64]>) -> SimplexSolution {
    let n = b.len();
    assert_eq!(g.shape(), (n, n), "gram/linear term size mismatch");
    assert!(n >= 1, "simplex QP needs at least one vertex");
    let theta = match warm {
        Some(w) => project_simplex(w),
        None => vec![1.0 / n as f64; n],
    };
    if n == 1 {
        return SimplexSolution {
            objective: quadratic(g, b, &[1.0]),
            theta: vec![1.0],
            iterations: 0,
            converged: true,
        };
    }
    let lip = g.row_iter().map(|r| r.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max);
    if lip <= f64::MIN_POSITIVE {
        // Linear objective: the best vertex is optimal.
        let best = (0..n).fold(0, |k, i| if b[i] > b[k] { i } else { k });
        let mut theta = vec![0.0; n];
        theta[best] = 1.0;
        return SimplexSolution {
            objective: quadratic(g, b, &theta),
            theta,
            iterations: 0,
            converged: true,
        };
    }
    let step = 1.0 / lip;
    let tol = GAP_TOL * lip.max(1.0);
    let b = DVector::from_column_slice(b);
    let value = |x: &DVector<f64>, gx: &DVector<f64>| x.dot(&(0.5 * gx - &b));
    let mut x = DVector::from_vec(theta);
    let mut gx = g * &x;
    let mut fx = value(&x, &gx);
    let mut y = x.clone();
    let mut t = 1.0f64;
    for it in 1..=MAX_ITERATIONS {
        let grad_y = g * &y - &b;
        let trial: Vec<f64> = y.iter().zip(grad_y.iter()).map(|(v, d)| v - step * d).collect();
        let next = DVector::from_vec(project_simplex(&trial));
        let g_next = g * &next;
        let f_next = value(&next, &g_next);
        if f_next > fx && t > 1.0 {
            // momentum overshot: restart from the current iterate
            y.copy_from(&x);
            t = 1.0;
            continue;
        }
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        y = &next + ((t - 1.0) / t_next) * (&next - &x);
        t = t_next;
        let improved = f_next <= fx;
        if improved {
            x = next;
            gx = g_next;
            fx = f_next;
        }
        let grad = &gx - &b;
        let gap = x.dot(&grad) - grad.min();
        if gap <= tol {
            return SimplexSolution {
                theta: x.iter().copied().collect(),
                objective: fx,
                iterations: it,
                converged: true,
            };
        }
    }
    SimplexSolution {
        theta: x.iter().copied().collect(),
        objective: fx,
        iterations: MAX_ITERATIONS,
        converged: false,
    }
}
