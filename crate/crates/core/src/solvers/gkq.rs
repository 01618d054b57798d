//! Conditional-gradient kernel quadrature over the MMD ball.
//!
//! The linear subproblem is solved over the extreme points
//! `±λ K(·, v) / √K(v, v)` for `v` in a finite candidate set: an explicit grid
//! (exact over the grid) or `q` fresh standard-normal draws per iteration.
//! Iterates are kept as convex combinations of the collected vertices, so
//! every `h_j` stays inside the ball of radius `λ`.

use std::collections::HashMap;

use nalgebra::DMatrix;
use rand_distr::{Distribution, StandardNormal};

use super::simplex::{quadratic, simplex_qp, SimplexSolution};
use crate::kernels::{mmd2_to_target, KernelSpec, KmeElement, TargetFunctional};
use crate::measures::{Atom, AtomicMeasure, Mode};
use crate::rng::substream;
use crate::{Error, Result, C64};

/// Candidate `v` are skipped when `K(v, v)` is at or below this value.
const MIN_DIAGONAL: f64 = 1e-24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Update {
    /// `h ← h + η (s − h)`.
    ConvexStep,
    /// Re-optimize over the convex hull of all vertices collected so far.
    FullyCorrective,
}

#[derive(Debug, Clone, PartialEq)]
pub enum VertexSource {
    /// Exhaustive search over a fixed point list.
    Grid(Vec<Vec<f64>>),
    /// `q` standard-normal candidates on `ℝ^dim` per iteration.
    Sampled { q: usize, dim: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GkqConfig {
    /// Radius of the MMD ball.
    pub lambda: f64,
    /// Oracle quality `α`. Informational: grids realize `α = 0`, sampling does not certify one.
    pub quality: f64,
    pub line_search: bool,
    pub update: Update,
    pub vertex_source: VertexSource,
    pub iterations: usize,
    pub seed: u64,
}

impl GkqConfig {
    pub fn new(lambda: f64, iterations: usize, vertex_source: VertexSource) -> Self {
        Self {
            lambda,
            quality: 0.0,
            line_search: false,
            update: Update::ConvexStep,
            vertex_source,
            iterations,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::Argument(format!("λ must be positive, got {}", self.lambda)));
        }
        if !(self.quality >= 0.0) {
            return Err(Error::Argument(format!("quality α must be ≥ 0, got {}", self.quality)));
        }
        if self.iterations == 0 {
            return Err(Error::Argument("at least one iteration is required".into()));
        }
        match &self.vertex_source {
            VertexSource::Grid(g) if g.is_empty() => Err(Error::Argument("vertex grid is empty".into())),
            VertexSource::Sampled { q: 0, .. } => Err(Error::Argument("q must be at least 1".into())),
            VertexSource::Sampled { dim: 0, .. } => Err(Error::Argument("sampling dimension must be positive".into())),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEntry {
    pub iteration: usize,
    pub objective: f64,
    pub shifted: bool,
}

#[derive(Debug, Clone)]
pub struct QuadratureState {
    /// Final iterate `h_p`.
    pub element: KmeElement,
    /// Locations and coefficients of the vertices `s_j` that were kept.
    pub vertex_atoms: Vec<Atom>,
    /// Objective before the first iteration (index 0) and after each iteration.
    pub objective_trace: Vec<TraceEntry>,
    /// Step size `η_j` used (or proposed, for fully corrective updates) at each iteration.
    pub step_sizes: Vec<f64>,
    /// Fully corrective solves that hit the iteration cap.
    pub unconverged_corrections: usize,
}

impl QuadratureState {
    pub fn measure(&self) -> &AtomicMeasure {
        self.element.measure()
    }

    pub fn final_objective(&self) -> f64 {
        self.objective_trace.last().map_or(f64::NAN, |t| t.objective)
    }
}

/// Extreme point `weight · K(·, location)` chosen by the linear oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexChoice {
    pub index: usize,
    pub positive: bool,
    pub weight: f64,
    pub location: Vec<f64>,
    /// `Re⟨s, h − T⟩` at the chosen vertex.
    pub score: f64,
}

/// Minimizes `c_v · Re(h(v) − T(v))` over candidates and both signs of
/// `c_v = ±λ/√K(v,v)`. Ties go to the smaller index, then to the `+` sign.
fn select_vertex(residual: &[f64], diag: &[f64], lambda: f64) -> Option<(usize, bool, f64, f64)> {
    let mut best: Option<(usize, bool, f64, f64)> = None;
    for (i, (&r, &k)) in residual.iter().zip(diag).enumerate() {
        if !(k > MIN_DIAGONAL) {
            continue;
        }
        let c = lambda / k.sqrt();
        for (positive, coef) in [(true, c), (false, -c)] {
            let score = coef * r;
            if best.is_none_or(|b| score < b.3) {
                best = Some((i, positive, coef, score));
            }
        }
    }
    best
}

/// Linear minimization oracle over scaled kernel sections at `candidates`.
pub fn fw_vertex<P: AsRef<[f64]>>(
    target: &TargetFunctional,
    current: &KmeElement,
    candidates: &[P],
    lambda: f64,
) -> Result<VertexChoice> {
    if candidates.is_empty() {
        return Err(Error::Argument("no candidates for the vertex search".into()));
    }
    let kernel = current.kernel();
    let mut residual = Vec::with_capacity(candidates.len());
    let mut diag = Vec::with_capacity(candidates.len());
    for v in candidates {
        let v = v.as_ref();
        residual.push((current.eval(v)? - target.eval(v)?).re);
        diag.push(kernel.eval(v, v)?.re);
    }
    let (index, positive, weight, score) = select_vertex(&residual, &diag, lambda)
        .ok_or_else(|| Error::Numerical("every candidate has a non-positive kernel diagonal".into()))?;
    Ok(VertexChoice {
        index,
        positive,
        weight,
        location: candidates[index].as_ref().to_vec(),
        score,
    })
}

/// Exact minimizer of `J(h + η(s − h))` over `η ∈ [0, 1]`.
pub fn line_search_eta(current: &KmeElement, vertex: &KmeElement, target: &TargetFunctional) -> Result<f64> {
    let hh = current.norm2()?;
    let ss = vertex.norm2()?;
    let hs = current.inner(vertex)?.re;
    let ht = target.inner_from(current)?.re;
    let st = target.inner_from(vertex)?.re;
    let num = hh - hs - ht + st;
    let den = hh - 2.0 * hs + ss;
    Ok(clamp_step(num, den, hh + ss))
}

fn clamp_step(num: f64, den: f64, scale: f64) -> f64 {
    if den <= 1e-14 * scale.max(f64::MIN_POSITIVE) {
        0.0
    } else {
        (num / den).clamp(0.0, 1.0)
    }
}

/// Simplex weights minimizing `½θᵀGθ − Re(b)ᵀθ`, `G` the vertex gram and
/// `b_i = ⟨s_i, T⟩`.
pub fn fully_corrective(vertices: &[KmeElement], target: &TargetFunctional) -> Result<SimplexSolution> {
    if vertices.is_empty() {
        return Err(Error::Argument("fully corrective step needs at least one vertex".into()));
    }
    let n = vertices.len();
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = vertices[i].inner(&vertices[j])?.re;
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    let b = vertices
        .iter()
        .map(|s| target.inner_from(s).map(|z| z.re))
        .collect::<Result<Vec<_>>>()?;
    Ok(simplex_qp(&g, &b, None))
}

/// Vertex bookkeeping: `h = Σ_i β_i s_i` with cached gram and target terms.
struct VertexBasis<'a> {
    kernel: &'a KernelSpec,
    target: &'a TargetFunctional,
    vertices: Vec<KmeElement>,
    gram: DMatrix<f64>,
    b: Vec<f64>,
    beta: Vec<f64>,
    /// `s_i(v)` over the grid, one column per vertex (grid mode only).
    grid_cols: Vec<Vec<C64>>,
}

impl<'a> VertexBasis<'a> {
    fn new(kernel: &'a KernelSpec, target: &'a TargetFunctional, h0: KmeElement) -> Self {
        Self {
            kernel,
            target,
            vertices: vec![h0],
            gram: DMatrix::zeros(0, 0),
            b: Vec::new(),
            beta: vec![1.0],
            grid_cols: Vec::new(),
        }
    }

    /// Registers vertex 0 (the initial element) or a new extreme point.
    fn register(&mut self, grid: Option<&[Vec<f64>]>) -> Result<()> {
        let k = self.b.len();
        let s = &self.vertices[k];
        let mut g = DMatrix::zeros(k + 1, k + 1);
        g.view_mut((0, 0), (k, k)).copy_from(&self.gram);
        for i in 0..=k {
            let v = self.vertices[i].inner(s)?.re;
            g[(i, k)] = v;
            g[(k, i)] = v;
        }
        self.gram = g;
        self.b.push(self.target.inner_from(s)?.re);
        if let Some(grid) = grid {
            let col = grid.iter().map(|v| s.eval(v)).collect::<Result<Vec<_>>>()?;
            self.grid_cols.push(col);
        }
        Ok(())
    }

    fn push(&mut self, s: KmeElement, grid: Option<&[Vec<f64>]>) -> Result<usize> {
        self.vertices.push(s);
        self.beta.push(0.0);
        self.register(grid)?;
        Ok(self.vertices.len() - 1)
    }

    fn objective(&self, beta: &[f64]) -> f64 {
        quadratic(&self.gram, &self.b, beta) + 0.5 * self.target.norm2().unwrap_or(0.0)
    }

    fn eval_current(&self, v: &[f64]) -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for (s, &beta) in self.vertices.iter().zip(&self.beta) {
            if beta != 0.0 {
                acc += s.eval(v)? * beta;
            }
        }
        Ok(acc)
    }

    fn element(&self) -> KmeElement {
        let mode = self
            .vertices
            .iter()
            .map(|s| s.measure().mode())
            .fold(Mode::Real, |m, n| if n == Mode::Complex { Mode::Complex } else { m });
        let mut measure = AtomicMeasure::empty(mode);
        for (s, &beta) in self.vertices.iter().zip(&self.beta) {
            if beta != 0.0 {
                measure = measure.concat(&s.measure().scaled(C64::new(beta, 0.0)));
            }
        }
        KmeElement::new(measure, self.kernel.clone()).expect("vertices share the kernel")
    }
}

/// Runs `p` conditional-gradient iterations from `h0` (the zero element when `None`).
pub fn gkq_run(
    config: &GkqConfig,
    target: &TargetFunctional,
    kernel: &KernelSpec,
    h0: Option<KmeElement>,
) -> Result<QuadratureState> {
    config.validate()?;
    if target.kernel() != kernel {
        return Err(Error::Config("target embedding uses a different kernel".into()));
    }
    let h0 = h0.unwrap_or_else(|| KmeElement::zero(kernel.clone(), Mode::Real));
    if h0.kernel() != kernel {
        return Err(Error::Config("initial element uses a different kernel".into()));
    }
    let lambda = config.lambda;
    if h0.norm2()?.sqrt() > lambda * (1.0 + 1e-9) {
        return Err(Error::Argument("initial element lies outside the ball of radius λ".into()));
    }
    let shifted = target.norm2().is_none();
    let grid = match &config.vertex_source {
        VertexSource::Grid(g) => Some(g.as_slice()),
        VertexSource::Sampled { .. } => None,
    };
    let (grid_target, grid_diag) = match grid {
        Some(g) => (
            g.iter().map(|v| target.eval(v)).collect::<Result<Vec<_>>>()?,
            g.iter().map(|v| kernel.eval(v, v).map(|z| z.re)).collect::<Result<Vec<_>>>()?,
        ),
        None => (Vec::new(), Vec::new()),
    };

    let mut basis = VertexBasis::new(kernel, target, h0);
    basis.register(grid)?;
    let mut seen: HashMap<(usize, bool), usize> = HashMap::new();
    let mut trace = vec![TraceEntry {
        iteration: 0,
        objective: basis.objective(&basis.beta),
        shifted,
    }];
    let mut steps = Vec::with_capacity(config.iterations);
    let mut unconverged = 0;

    for j in 1..=config.iterations {
        // Linear oracle.
        let vertex_index = match &config.vertex_source {
            VertexSource::Grid(g) => {
                let residual: Vec<f64> = (0..g.len())
                    .map(|c| {
                        let h: C64 = basis
                            .grid_cols
                            .iter()
                            .zip(&basis.beta)
                            .map(|(col, &beta)| col[c] * beta)
                            .sum();
                        (h - grid_target[c]).re
                    })
                    .collect();
                let (idx, positive, coef, _) = select_vertex(&residual, &grid_diag, lambda).ok_or_else(|| {
                    Error::Numerical("every grid point has a non-positive kernel diagonal".into())
                })?;
                match seen.get(&(idx, positive)) {
                    Some(&k) => k,
                    None => {
                        let s = KmeElement::section(kernel.clone(), g[idx].clone(), C64::new(coef, 0.0))?;
                        let k = basis.push(s, grid)?;
                        seen.insert((idx, positive), k);
                        k
                    }
                }
            }
            VertexSource::Sampled { q, dim } => {
                let candidates: Vec<Vec<f64>> = (0..*q)
                    .map(|t| {
                        let mut rng = substream(config.seed, &[j as u64, t as u64]);
                        (0..*dim).map(|_| StandardNormal.sample(&mut rng)).collect()
                    })
                    .collect();
                let mut residual = Vec::with_capacity(*q);
                let mut diag = Vec::with_capacity(*q);
                for v in &candidates {
                    residual.push((basis.eval_current(v)? - target.eval(v)?).re);
                    diag.push(kernel.eval(v, v)?.re);
                }
                let (idx, _, coef, _) = select_vertex(&residual, &diag, lambda).ok_or_else(|| {
                    Error::Numerical("every sampled candidate has a non-positive kernel diagonal".into())
                })?;
                let s = KmeElement::section(kernel.clone(), candidates[idx].clone(), C64::new(coef, 0.0))?;
                basis.push(s, None)?
            }
        };

        // Step size.
        let n = basis.beta.len();
        let mut dir = basis.beta.clone();
        dir[vertex_index] -= 1.0; // h − s
        let eta = if config.line_search {
            let g = &basis.gram;
            let mut num = 0.0;
            let mut den = 0.0;
            let mut scale = 0.0;
            for a in 0..n {
                let mut gd = 0.0;
                let mut gb = 0.0;
                for c in 0..n {
                    gd += g[(a, c)] * dir[c];
                    gb += g[(a, c)] * basis.beta[c];
                }
                num += dir[a] * (gb - basis.b[a]);
                den += dir[a] * gd;
                scale += g[(a, a)].abs();
            }
            clamp_step(num, den, scale)
        } else {
            2.0 / (2.0 + j as f64)
        };
        steps.push(eta);

        // Update.
        match config.update {
            Update::ConvexStep => {
                for (beta, d) in basis.beta.iter_mut().zip(&dir) {
                    *beta -= eta * d;
                }
            }
            Update::FullyCorrective => {
                let sol = simplex_qp(&basis.gram, &basis.b, Some(&basis.beta));
                if !sol.converged {
                    unconverged += 1;
                }
                if basis.objective(&sol.theta) <= basis.objective(&basis.beta) {
                    basis.beta = sol.theta;
                }
            }
        }
        trace.push(TraceEntry {
            iteration: j,
            objective: basis.objective(&basis.beta),
            shifted,
        });
    }

    let vertex_atoms = basis
        .vertices
        .iter()
        .skip(1)
        .flat_map(|s| s.measure().atoms().iter().cloned())
        .collect();
    let element = basis.element();
    // Re-evaluate the final objective by gram expansion of the output element.
    let final_obj = mmd2_to_target(&element, target)?;
    if let Some(last) = trace.last_mut() {
        if (last.objective - final_obj.value).abs() > 1e-8 * (1.0 + final_obj.value.abs()) {
            return Err(Error::Numerical(format!(
                "objective bookkeeping drifted: {} vs {}",
                last.objective, final_obj.value
            )));
        }
    }
    Ok(QuadratureState {
        element,
        vertex_atoms,
        objective_trace: trace,
        step_sizes: steps,
        unconverged_corrections: unconverged,
    })
}
