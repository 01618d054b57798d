//! Feature maps `φ(x; v)` and their pseudo-inverse duals `φ†(x; v)`.
//!
//! Two families are supported:
//!
//! * **Fourier**: `φ(x; ξ) = exp(−i x·ξ)`, dual `exp(+i x·ξ)`, parameter space `ℝ^m`.
//! * **Ridge**: `φ(x; a, b) = σ(a·x − b)` with `σ(t) = −t e^{−t²/2}` (the first
//!   derivative of the Gaussian bump), dual `ρ(a·x − b)` with `ρ = σ / c_adm`.
//!   Parameters are stored as `[a_1, …, a_m, b]`.
//!
//! `c_adm` normalizes the pair `(σ, ρ)` so that `∫ σ̂(ζ) conj(ρ̂(ζ)) |ζ|^{−m} dζ = 1`,
//! with the Fourier convention `ĝ(ζ) = ∫ g(t) e^{−iζt} dt`. Under that
//! normalization the ridgelet transform with `ρ` inverts the ridge model.

use crate::quad::{integrate_refined, GaussLegendre};
use crate::measures::Mode;
use crate::{Error, Result, C64};

/// `σ(t) = −t e^{−t²/2}`.
pub fn gaussian_derivative(t: f64) -> f64 {
    -t * (-0.5 * t * t).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureFamily {
    Fourier,
    Ridge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSpec {
    family: FeatureFamily,
    input_dim: usize,
    /// Admissibility constant of the ridge pair, when computed.
    c_adm: Option<f64>,
}

impl FeatureSpec {
    pub fn fourier(input_dim: usize) -> Result<Self> {
        if input_dim == 0 {
            return Err(Error::Config("input dimension must be at least 1".into()));
        }
        Ok(Self {
            family: FeatureFamily::Fourier,
            input_dim,
            c_adm: None,
        })
    }

    /// Ridge features with the Gaussian-derivative activation.
    ///
    /// For `m = 1` the dual normalization is computed here; for `m > 1` the
    /// spec is built without it and [`FeatureSpec::eval_dual`] reports a state
    /// error.
    pub fn ridge(input_dim: usize) -> Result<Self> {
        let mut spec = Self::ridge_unnormalized(input_dim)?;
        if input_dim == 1 {
            spec.c_adm = Some(admissibility_constant(
                gaussian_derivative,
                gaussian_derivative,
                1,
            )?);
        }
        Ok(spec)
    }

    /// Ridge features without a dual normalization.
    pub fn ridge_unnormalized(input_dim: usize) -> Result<Self> {
        if input_dim == 0 {
            return Err(Error::Config("input dimension must be at least 1".into()));
        }
        Ok(Self {
            family: FeatureFamily::Ridge,
            input_dim,
            c_adm: None,
        })
    }

    pub fn family(&self) -> FeatureFamily {
        self.family
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    /// Dimension of a parameter point `v`.
    pub fn param_dim(&self) -> usize {
        match self.family {
            FeatureFamily::Fourier => self.input_dim,
            FeatureFamily::Ridge => self.input_dim + 1,
        }
    }

    /// Mode of the feature values (ridge features are real).
    pub fn mode(&self) -> Mode {
        match self.family {
            FeatureFamily::Fourier => Mode::Complex,
            FeatureFamily::Ridge => Mode::Real,
        }
    }

    pub fn admissibility(&self) -> Option<f64> {
        self.c_adm
    }

    fn check(&self, x: &[f64], v: &[f64]) -> Result<()> {
        if x.len() != self.input_dim {
            return Err(Error::Config(format!(
                "input has dimension {}, features expect {}",
                x.len(),
                self.input_dim
            )));
        }
        if v.len() != self.param_dim() {
            return Err(Error::Config(format!(
                "parameter has dimension {}, features expect {}",
                v.len(),
                self.param_dim()
            )));
        }
        Ok(())
    }

    /// `a·x − b` for ridge parameters, `x·ξ` for Fourier parameters.
    #[inline]
    fn phase(&self, x: &[f64], v: &[f64]) -> f64 {
        let dot: f64 = x.iter().zip(v).map(|(xi, vi)| xi * vi).sum();
        match self.family {
            FeatureFamily::Fourier => dot,
            FeatureFamily::Ridge => dot - v[self.input_dim],
        }
    }

    /// `φ(x; v)`.
    pub fn eval(&self, x: &[f64], v: &[f64]) -> Result<C64> {
        self.check(x, v)?;
        Ok(self.eval_unchecked(x, v))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, x: &[f64], v: &[f64]) -> C64 {
        let t = self.phase(x, v);
        match self.family {
            FeatureFamily::Fourier => C64::from_polar(1.0, -t),
            FeatureFamily::Ridge => C64::new(gaussian_derivative(t), 0.0),
        }
    }

    /// `φ(x; v)` for every row of `inputs`.
    pub fn eval_column(&self, inputs: &[Vec<f64>], v: &[f64]) -> Result<Vec<C64>> {
        inputs.iter().map(|x| self.eval(x, v)).collect()
    }

    /// `φ†(x; v)`.
    pub fn eval_dual(&self, x: &[f64], v: &[f64]) -> Result<C64> {
        self.check(x, v)?;
        let t = self.phase(x, v);
        match self.family {
            FeatureFamily::Fourier => Ok(C64::from_polar(1.0, t)),
            FeatureFamily::Ridge => {
                let c = self.c_adm.ok_or_else(|| {
                    Error::State(format!(
                        "dual ridge feature needs the admissibility constant (not computed for m = {})",
                        self.input_dim
                    ))
                })?;
                Ok(C64::new(gaussian_derivative(t) / c, 0.0))
            }
        }
    }
}

/// `φ(x; v)`.
pub fn eval_feature(spec: &FeatureSpec, x: &[f64], v: &[f64]) -> Result<C64> {
    spec.eval(x, v)
}

/// `φ†(x; v)`.
pub fn eval_dual_feature(spec: &FeatureSpec, x: &[f64], v: &[f64]) -> Result<C64> {
    spec.eval_dual(x, v)
}

/// Half-width of the `t` window used for numerical Fourier transforms.
const TIME_HALF_WIDTH: f64 = 16.0;
/// Frequency truncation; the Gaussian-derivative integrand is below 2π·8·e^{−64} beyond it.
const FREQ_HALF_WIDTH: f64 = 8.0;

/// `ĝ(ζ) = ∫ g(t) e^{−iζt} dt` on `|t| ≤ 16`.
pub fn fourier_transform<G: Fn(f64) -> f64>(g: G, zeta: f64, rule: &GaussLegendre) -> C64 {
    rule.composite_complex(
        |t| C64::from_polar(g(t), -zeta * t),
        -TIME_HALF_WIDTH,
        TIME_HALF_WIDTH,
        64,
    )
}

/// `c = ∫ σ̂(ζ) conj(ρ̂_raw(ζ)) |ζ|^{−m} dζ`.
///
/// Both transforms are computed numerically, so `σ` and `ρ_raw` need to be
/// negligible outside `|t| ≤ 16` and to vanish on average (`σ̂(0) = 0`).
/// Only `m = 1` is supported.
pub fn admissibility_constant<S, R>(sigma: S, rho_raw: R, m: usize) -> Result<f64>
where
    S: Fn(f64) -> f64,
    R: Fn(f64) -> f64,
{
    if m != 1 {
        return Err(Error::Config(format!(
            "admissibility quadrature is implemented for m = 1 only (got m = {m})"
        )));
    }
    let inner = GaussLegendre::new(20);
    let outer = GaussLegendre::new(16);
    let integrand = |zeta: f64| {
        let s = fourier_transform(&sigma, zeta, &inner);
        let r = fourier_transform(&rho_raw, zeta, &inner);
        (s * r.conj()).re / zeta.abs().powi(m as i32)
    };
    // Split at ζ = 0 where the integrand has a kink.
    let neg = integrate_refined(&outer, integrand, -FREQ_HALF_WIDTH, 0.0, 1e-10, 1e-8)?;
    let pos = integrate_refined(&outer, integrand, 0.0, FREQ_HALF_WIDTH, 1e-10, 1e-8)?;
    Ok(neg + pos)
}
