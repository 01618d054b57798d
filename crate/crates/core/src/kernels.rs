//! Kernels on parameter space, kernel mean embeddings and MMD.
//!
//! Inner products are conjugate-linear in the first argument. For an
//! embedding `h = Σ_j w_j K(·, v_j)` this gives
//!
//! ```text
//! ⟨h₁, h₂⟩ = Σ_{j,l} conj(w¹_j) w²_l K(v¹_j, v²_l),    h(v) = ⟨K(·, v), h⟩ = Σ_j w_j K(v, v_j).
//! ```
//!
//! The empirical unitary kernel over a dataset `{x_i}` is
//! `U(v, v') = (1/n) Σ_i conj(φ(x_i; v)) φ(x_i; v')`, the `L²(P_n)` inner
//! product of two feature functions. It makes `⟨U[μ], U[ν]⟩ = ⟨S[μ], S[ν]⟩_{L²(P_n)}`.

use std::sync::Arc;

use nalgebra::DMatrix;

use crate::features::FeatureSpec;
use crate::measures::{AtomicMeasure, Dataset, Mode};
use crate::{Error, Result, C64};

/// Tolerance below zero accepted for a squared norm before it is reported.
pub const PSD_SLACK: f64 = 1e-10;

/// Dataset and feature map backing an empirical unitary kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryKernel {
    dataset: Dataset,
    features: FeatureSpec,
}

impl UnitaryKernel {
    pub fn dataset(&self) -> &Dataset {
        &self.dataset
    }

    pub fn features(&self) -> &FeatureSpec {
        &self.features
    }

    /// `(φ(x_1; v), …, φ(x_n; v))`.
    pub fn feature_column(&self, v: &[f64]) -> Result<Vec<C64>> {
        self.features.eval_column(self.dataset.inputs(), v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum KernelSpec {
    /// `exp(−‖v − v'‖² / (2γ²))` on parameter space.
    GaussianV { bandwidth: f64 },
    EmpiricalUnitary(Arc<UnitaryKernel>),
    /// Gaussian kernel on input space, used to smooth empirical targets.
    GaussianX { bandwidth: f64 },
}

impl KernelSpec {
    pub fn gaussian_v(bandwidth: f64) -> Result<Self> {
        check_bandwidth(bandwidth)?;
        Ok(Self::GaussianV { bandwidth })
    }

    pub fn gaussian_x(bandwidth: f64) -> Result<Self> {
        check_bandwidth(bandwidth)?;
        Ok(Self::GaussianX { bandwidth })
    }

    pub fn empirical_unitary(dataset: Dataset, features: FeatureSpec) -> Result<Self> {
        if dataset.input_dim() != features.input_dim() {
            return Err(Error::Config(format!(
                "dataset inputs have dimension {}, features expect {}",
                dataset.input_dim(),
                features.input_dim()
            )));
        }
        Ok(Self::EmpiricalUnitary(Arc::new(UnitaryKernel { dataset, features })))
    }

    pub fn unitary(&self) -> Option<&Arc<UnitaryKernel>> {
        match self {
            Self::EmpiricalUnitary(u) => Some(u),
            _ => None,
        }
    }

    /// Dimension of the points this kernel accepts, when fixed.
    pub fn point_dim(&self) -> Option<usize> {
        self.unitary().map(|u| u.features.param_dim())
    }

    /// `K(v, v')`.
    pub fn eval(&self, v: &[f64], w: &[f64]) -> Result<C64> {
        match self {
            Self::GaussianV { bandwidth } | Self::GaussianX { bandwidth } => {
                if v.len() != w.len() {
                    return Err(Error::Config(format!(
                        "kernel arguments have dimensions {} and {}",
                        v.len(),
                        w.len()
                    )));
                }
                let d2: f64 = v.iter().zip(w).map(|(a, b)| (a - b) * (a - b)).sum();
                Ok(C64::new((-d2 / (2.0 * bandwidth * bandwidth)).exp(), 0.0))
            }
            Self::EmpiricalUnitary(u) => {
                let dim = u.features.param_dim();
                if v.len() != dim || w.len() != dim {
                    return Err(Error::Config(format!(
                        "unitary kernel expects parameters of dimension {dim}, got {} and {}",
                        v.len(),
                        w.len()
                    )));
                }
                let mut acc = C64::new(0.0, 0.0);
                for x in u.dataset.inputs() {
                    acc += u.features.eval_unchecked(x, v).conj() * u.features.eval_unchecked(x, w);
                }
                Ok(acc / u.dataset.len() as f64)
            }
        }
    }
}

fn check_bandwidth(bandwidth: f64) -> Result<()> {
    if bandwidth > 0.0 && bandwidth.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("bandwidth must be positive, got {bandwidth}")))
    }
}

/// `K(v, v')`.
pub fn eval_kernel(kernel: &KernelSpec, v: &[f64], w: &[f64]) -> Result<C64> {
    kernel.eval(v, w)
}

/// Hermitian matrix `G[i][j] = K(v_i, v_j)`.
pub fn gram<P: AsRef<[f64]>>(kernel: &KernelSpec, points: &[P]) -> Result<DMatrix<C64>> {
    if points.is_empty() {
        return Err(Error::Argument("gram matrix of an empty point set".into()));
    }
    let n = points.len();
    let mut g = DMatrix::from_element(n, n, C64::new(0.0, 0.0));
    for i in 0..n {
        for j in i..n {
            let k = kernel.eval(points[i].as_ref(), points[j].as_ref())?;
            g[(i, j)] = k;
            g[(j, i)] = k.conj();
        }
    }
    Ok(g)
}

/// `G[i][j] = K(u_i, v_j)`.
pub fn cross_gram<P: AsRef<[f64]>, Q: AsRef<[f64]>>(
    kernel: &KernelSpec,
    left: &[P],
    right: &[Q],
) -> Result<DMatrix<C64>> {
    let mut g = DMatrix::from_element(left.len(), right.len(), C64::new(0.0, 0.0));
    for (i, u) in left.iter().enumerate() {
        for (j, v) in right.iter().enumerate() {
            g[(i, j)] = kernel.eval(u.as_ref(), v.as_ref())?;
        }
    }
    Ok(g)
}

/// RKHS element `h = Σ_j w_j K(·, v_j)`, the embedding of an atomic measure.
#[derive(Debug, Clone, PartialEq)]
pub struct KmeElement {
    measure: AtomicMeasure,
    kernel: KernelSpec,
}

impl KmeElement {
    pub fn new(measure: AtomicMeasure, kernel: KernelSpec) -> Result<Self> {
        if let Some(dim) = kernel.point_dim() {
            if let Some(v) = measure.locations().find(|v| v.len() != dim) {
                return Err(Error::Config(format!(
                    "atom of dimension {} under a kernel on dimension {dim}",
                    v.len()
                )));
            }
        }
        Ok(Self { measure, kernel })
    }

    pub fn zero(kernel: KernelSpec, mode: Mode) -> Self {
        Self {
            measure: AtomicMeasure::empty(mode),
            kernel,
        }
    }

    /// Scaled kernel section `c · K(·, v)`.
    pub fn section(kernel: KernelSpec, v: Vec<f64>, c: C64) -> Result<Self> {
        let mode = if c.im == 0.0 { Mode::Real } else { Mode::Complex };
        let measure = AtomicMeasure::from_parts(&[c], vec![v], mode)?;
        Self::new(measure, kernel)
    }

    pub fn measure(&self) -> &AtomicMeasure {
        &self.measure
    }

    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    pub fn into_measure(self) -> AtomicMeasure {
        self.measure
    }

    /// `h(v) = Σ_j w_j K(v, v_j)`.
    pub fn eval(&self, v: &[f64]) -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for a in self.measure.atoms() {
            acc += a.weight * self.kernel.eval(v, &a.location)?;
        }
        Ok(acc)
    }

    fn check_same_kernel(&self, other: &Self) -> Result<()> {
        if self.kernel == other.kernel {
            Ok(())
        } else {
            Err(Error::Config("inner product of elements under different kernels".into()))
        }
    }

    /// `⟨self, other⟩` by gram expansion.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.check_same_kernel(other)?;
        inner_measures(&self.kernel, &self.measure, &other.measure)
    }

    /// `‖h‖²`, clamped at zero within [`PSD_SLACK`].
    pub fn norm2(&self) -> Result<f64> {
        norm2_measure(&self.kernel, &self.measure)
    }

    /// `self + c · other`.
    pub fn add_scaled(&self, other: &Self, c: C64) -> Result<Self> {
        self.check_same_kernel(other)?;
        Ok(Self {
            measure: self.measure.concat(&other.measure.scaled(c)),
            kernel: self.kernel.clone(),
        })
    }

    pub fn scaled(&self, c: C64) -> Self {
        Self {
            measure: self.measure.scaled(c),
            kernel: self.kernel.clone(),
        }
    }
}

/// `K[μ](v) = Σ_j w_j K(v, v_j)`.
pub fn kme_eval(h: &KmeElement, v: &[f64]) -> Result<C64> {
    h.eval(v)
}

pub fn inner(h1: &KmeElement, h2: &KmeElement) -> Result<C64> {
    h1.inner(h2)
}

pub fn norm2(h: &KmeElement) -> Result<f64> {
    h.norm2()
}

/// `⟨K[μ], K[ν]⟩` under `kernel`.
pub fn inner_measures(kernel: &KernelSpec, mu: &AtomicMeasure, nu: &AtomicMeasure) -> Result<C64> {
    let mut acc = C64::new(0.0, 0.0);
    for a in mu.atoms() {
        let mut row = C64::new(0.0, 0.0);
        for b in nu.atoms() {
            row += b.weight * kernel.eval(&a.location, &b.location)?;
        }
        acc += a.weight.conj() * row;
    }
    Ok(acc)
}

fn norm2_measure(kernel: &KernelSpec, mu: &AtomicMeasure) -> Result<f64> {
    let mut acc = 0.0;
    let mut scale = 0.0;
    for a in mu.atoms() {
        for b in mu.atoms() {
            let t = a.weight.conj() * b.weight * kernel.eval(&a.location, &b.location)?;
            acc += t.re;
            scale += t.norm();
        }
    }
    clamp_norm2(acc, scale)
}

/// Clamps tiny negative squared norms; `scale` is the sum of absolute terms.
pub(crate) fn clamp_norm2(value: f64, scale: f64) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -PSD_SLACK * scale.max(1.0) {
        Ok(0.0)
    } else {
        Err(Error::Numerical(format!(
            "squared norm {value:e} is negative beyond tolerance; kernel is not numerically PSD"
        )))
    }
}

/// `MMD²[μ, ν] = ‖K[μ] − K[ν]‖²`.
pub fn mmd2(kernel: &KernelSpec, mu: &AtomicMeasure, nu: &AtomicMeasure) -> Result<f64> {
    norm2_measure(kernel, &mu.difference(nu))
}

/// How an empirical target is built from the data.
#[derive(Debug, Clone, PartialEq)]
pub enum EmpiricalMode {
    /// Coefficients `y_i / n`.
    Raw,
    /// Targets replaced by the Tikhonov-smoothed fit `ŷ = G_k α`,
    /// `(G_k + nεI) α = y`. `ridge = None` picks `ε = 1e−6 · trace(G_k) / n`.
    Smoothed { data_kernel: KernelSpec, ridge: Option<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum TargetKind {
    /// Embedding of a known atomic measure.
    ExactAtomic(KmeElement),
    /// `T(v) = (1/n) Σ_i ŷ_i conj(φ(x_i; v))` under an empirical unitary kernel.
    Empirical {
        kernel: KernelSpec,
        mode: EmpiricalMode,
        /// Interpolation coefficients `α` (smoothed mode only).
        alpha: Option<Vec<f64>>,
        /// Effective targets `ŷ` at the data points.
        fitted: Vec<f64>,
    },
}

/// Evaluable representation of the target embedding `K[μ°]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetFunctional {
    kind: TargetKind,
    norm2: Option<f64>,
}

impl TargetFunctional {
    pub fn exact(element: KmeElement) -> Result<Self> {
        let n2 = element.norm2()?;
        Ok(Self {
            kind: TargetKind::ExactAtomic(element),
            norm2: Some(n2),
        })
    }

    pub fn kind(&self) -> &TargetKind {
        &self.kind
    }

    pub fn kernel(&self) -> &KernelSpec {
        match &self.kind {
            TargetKind::ExactAtomic(h) => h.kernel(),
            TargetKind::Empirical { kernel, .. } => kernel,
        }
    }

    /// `‖T‖²` when known.
    pub fn norm2(&self) -> Option<f64> {
        self.norm2
    }

    /// `T(v) = ⟨K(·, v), T⟩`.
    pub fn eval(&self, v: &[f64]) -> Result<C64> {
        match &self.kind {
            TargetKind::ExactAtomic(h) => h.eval(v),
            TargetKind::Empirical { kernel, fitted, .. } => {
                let u = kernel.unitary().expect("empirical targets hold a unitary kernel");
                let col = u.feature_column(v)?;
                let n = fitted.len() as f64;
                Ok(col
                    .iter()
                    .zip(fitted)
                    .map(|(phi, y)| phi.conj() * *y)
                    .sum::<C64>()
                    / n)
            }
        }
    }

    /// `⟨h, T⟩ = Σ_j conj(w_j) T(v_j)`.
    pub fn inner_from(&self, h: &KmeElement) -> Result<C64> {
        if h.kernel() != self.kernel() {
            return Err(Error::Config("element and target use different kernels".into()));
        }
        match &self.kind {
            TargetKind::ExactAtomic(t) => h.inner(t),
            TargetKind::Empirical { .. } => {
                let mut acc = C64::new(0.0, 0.0);
                for a in h.measure().atoms() {
                    acc += a.weight.conj() * self.eval(&a.location)?;
                }
                Ok(acc)
            }
        }
    }
}

/// Builds the empirical target `U[S†[f̂]]` for an empirical unitary kernel.
///
/// The dataset must share its inputs with the kernel's dataset.
pub fn make_empirical_target(
    dataset: &Dataset,
    kernel: &KernelSpec,
    mode: EmpiricalMode,
) -> Result<TargetFunctional> {
    let u = kernel.unitary().ok_or_else(|| {
        Error::Config("empirical targets require an empirical unitary kernel".into())
    })?;
    if u.dataset().inputs() != dataset.inputs() {
        return Err(Error::Config(
            "target dataset inputs differ from the unitary kernel's dataset".into(),
        ));
    }
    let n = dataset.len() as f64;
    let (alpha, fitted) = match &mode {
        EmpiricalMode::Raw => (None, dataset.targets().to_vec()),
        EmpiricalMode::Smoothed { data_kernel, ridge } => {
            let (alpha, fitted) = smooth_targets(dataset, data_kernel, *ridge)?;
            (Some(alpha), fitted)
        }
    };
    let norm2 = fitted.iter().map(|y| y * y).sum::<f64>() / n;
    Ok(TargetFunctional {
        kind: TargetKind::Empirical {
            kernel: kernel.clone(),
            mode,
            alpha,
            fitted,
        },
        norm2: Some(norm2),
    })
}

/// Solves `(G_k + nεI) α = y` and returns `(α, G_k α)`.
fn smooth_targets(
    dataset: &Dataset,
    data_kernel: &KernelSpec,
    ridge: Option<f64>,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if !matches!(data_kernel, KernelSpec::GaussianX { .. }) {
        return Err(Error::Config("smoothed targets need a GaussianX data kernel".into()));
    }
    let n = dataset.len();
    let g = gram(data_kernel, dataset.inputs())?.map(|z| z.re);
    let eps = ridge.unwrap_or(1e-6 * g.trace() / n as f64);
    if !(eps >= 0.0) {
        return Err(Error::Argument(format!("ridge must be nonnegative, got {eps}")));
    }
    let mut a = g.clone();
    for i in 0..n {
        a[(i, i)] += n as f64 * eps;
    }
    let y = nalgebra::DVector::from_column_slice(dataset.targets());
    let alpha = solve_spd(a, &y).ok_or_else(|| {
        Error::Numerical(format!(
            "interpolation system is singular at ridge {eps}; use a positive ridge ε"
        ))
    })?;
    let fitted = &g * &alpha;
    Ok((alpha.as_slice().to_vec(), fitted.as_slice().to_vec()))
}

/// Cholesky solve that treats near-zero pivots as singular.
pub(crate) fn solve_spd(
    a: DMatrix<f64>,
    b: &nalgebra::DVector<f64>,
) -> Option<nalgebra::DVector<f64>> {
    let max_diag = a.diagonal().iter().cloned().fold(0.0, f64::max);
    let chol = a.cholesky()?;
    let l = chol.l_dirty();
    let min_pivot = (0..l.nrows()).map(|i| l[(i, i)] * l[(i, i)]).fold(f64::INFINITY, f64::min);
    if !(min_pivot > 1e-13 * max_diag.max(f64::MIN_POSITIVE)) {
        return None;
    }
    Some(chol.solve(b))
}

/// Value of `½‖h − T‖²`, or of `½‖h‖² − Re⟨h, T⟩` when `‖T‖²` is unknown.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Objective {
    pub value: f64,
    /// `true` when the constant `½‖T‖²` is missing from `value`.
    pub shifted: bool,
}

pub fn mmd2_to_target(h: &KmeElement, target: &TargetFunctional) -> Result<Objective> {
    let hh = h.norm2()?;
    let ht = target.inner_from(h)?.re;
    Ok(match target.norm2() {
        Some(tt) => Objective {
            value: 0.5 * hh - ht + 0.5 * tt,
            shifted: false,
        },
        None => Objective {
            value: 0.5 * hh - ht,
            shifted: true,
        },
    })
}
