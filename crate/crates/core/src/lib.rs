//! A real economy driven by a nonlinear multiplier-accelerator, coupled to a
//! stock market where fundamentalists switch between an optimistic and a
//! pessimistic belief.
//!
//! The crate covers the whole analysis pipeline of the resulting
//! three-dimensional map:
//!
//! * [`model`]: the map itself, the share of optimists and the adjustment functions;
//! * [`equilibria`]: unbiased and biased steady states, comparative-statics sweeps;
//! * [`stability`]: Jacobians, Farebrother conditions, scenario labels, the beta mirror map;
//! * [`dynamics`]: orbits, attractor classification, bifurcation diagrams, basins, Lyapunov exponents;
//! * [`stochastic`]: noisy demand, returns, kurtosis grids and autocorrelations.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the aliases below
//! fix the precision for the common case.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cubic;
pub mod dynamics;
pub mod equilibria;
pub mod error;
pub mod model;
pub mod presets;
pub mod roots;
pub mod scalar;
pub mod stability;
pub mod stochastic;

pub use error::{Error, Result};
pub use model::{advance, logistic, step, Axis, ModelParams, SigmoidSpec, State};
pub use scalar::{linspace, Scalar};

pub type Params = ModelParams<f64>;
pub type Params32 = ModelParams<f32>;
pub type State64 = State<f64>;
pub type State32 = State<f32>;
pub type Sigmoid = SigmoidSpec<f64>;
pub type SteadyStates = equilibria::SteadyStateSet<f64>;
pub type Report = stability::StabilityReport<f64>;
pub type Attractor = dynamics::AttractorClass<f64>;
