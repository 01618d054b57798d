//! Kernel quadrature for parameter distributions.
//!
//! A model of the form `S[μ](x) = ∫ φ(x; v) dμ(v)` is approximated by a finite
//! atomic measure `μ_p = Σ w_j δ_{v_j}`. The quality of the approximation is
//! measured by the maximum mean discrepancy (MMD) between kernel mean
//! embeddings of `μ_p` and the target measure, computed on parameter space.
//!
//! | Module | Purpose |
//! |--------|---------|
//! | [`measures`] | atomic measures, datasets, model evaluation, error metrics |
//! | [`features`] | Fourier and ridge feature maps, their duals, admissibility |
//! | [`kernels`] | parameter-space kernels, embeddings, MMD, empirical targets |
//! | [`solvers`] | conditional-gradient quadrature, greedy unitary quadrature, weight fitting |
//! | [`sir`] | sampling-importance-resampling baseline from the ridgelet spectrum |
//! | [`bench`] | experiment configuration, sweeps, rate fits, CSV/SVG output |

// `!(x > y)` comparisons are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod error;
pub mod features;
pub mod kernels;
pub mod measures;
pub mod quad;
pub mod rng;
pub mod sir;
pub mod solvers;

pub use error::{Error, Result};
pub use features::{FeatureFamily, FeatureSpec};
pub use kernels::{KernelSpec, KmeElement, TargetFunctional};
pub use measures::{Atom, AtomicMeasure, Dataset, Mode};

/// Complex scalar used for weights and feature values throughout the crate.
pub type C64 = num_complex::Complex64;
