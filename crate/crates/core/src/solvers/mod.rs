//! Quadrature solvers.
//!
//! * [`gkq`]: conditional gradient (Frank–Wolfe) over the MMD ball
//!   `D(λ) = {K[μ] : ‖K[μ]‖ ≤ λ}`, with optional line search and a fully
//!   corrective update.
//! * [`ukq`]: greedy empirical unitary kernel quadrature with uniform weights.
//! * [`simplex`]: the simplex-constrained QP behind the fully corrective step.
//! * [`regression`]: least-squares output weights for fixed atom locations.

pub mod gkq;
pub mod regression;
pub mod simplex;
pub mod ukq;

pub use gkq::{
    fully_corrective, fw_vertex, gkq_run, line_search_eta, GkqConfig, QuadratureState, TraceEntry, Update,
    VertexChoice, VertexSource,
};
pub use regression::{fit_weights_regression, regression_measure};
pub use simplex::{simplex_qp, SimplexSolution};
pub use ukq::{step_candidates, greedy_scores, proposal_draw, ukq_greedy, FinalWeights, GreedySign, UkqConfig};
