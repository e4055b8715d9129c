//! Theil T, Theil L and Atkinson inequality indices for gamma populations.
//!
//! For X ~ Gamma(α, λ) the crate provides
//!
//! | Quantity | Theil T | Theil L | Atkinson |
//! |----------|---------|---------|----------|
//! | population index | ψ(α) + 1/α − ln α | ln α − ψ(α) | 1 − e^ψ(α)/α |
//! | bias of the plug-in estimator, sample size n | ln(nα) − 1/(nα) − ψ(nα) | ψ(nα) − ln(nα) | (e^ψ(α) − Γⁿ(α+1/n)/Γⁿ(α)) / α |
//!
//! together with the sample estimators, corrected versions that subtract
//! the bias evaluated at the maximum likelihood shape, and a seeded Monte
//! Carlo harness ([`simulation`]) that measures relative bias and MSE over a
//! grid of shapes and sample sizes.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`, which is what the simulation and
//! the CLI use.
//!
//! ```
//! use gamma_inequality::{estimators, mle, model, GammaParams64, Sample64};
//!
//! let params = GammaParams64::with_shape(2.0).unwrap();
//! let truth = model::theil_t_population(&params).unwrap();
//! let bias = model::bias_theil_t(&params, 20).unwrap();
//! assert!(truth > 0.0 && bias < 0.0);
//!
//! let sample = Sample64::from_slice(&[12.0, 30.5, 7.25, 18.0]).unwrap();
//! let alpha_hat = mle::fit_shape(&sample).unwrap().alpha_hat;
//! let corrected = estimators::corrected_theil_t(&sample, alpha_hat).unwrap();
//! assert!(corrected > estimators::theil_t_hat(&sample));
//! ```

pub mod cli;
pub mod error;
pub mod estimators;
pub mod io;
pub mod mle;
pub mod model;
pub mod scalar;
pub mod simulation;
pub mod special;
pub mod stream;

pub use error::{Error, Result};
pub use estimators::{CorrectedEstimates, CorrectionUnavailable, EstimateReport, Sample};
pub use mle::MleResult;
pub use model::{GammaParams, IndexKind, PopulationValues};
pub use scalar::Real;
pub use simulation::{Estimator, SamplingRate, SimConfig, SimSummary};
pub use stream::RngStream;

pub type GammaParams64 = GammaParams<f64>;
pub type PopulationValues64 = PopulationValues<f64>;
pub type Sample64 = Sample<f64>;
pub type EstimateReport64 = EstimateReport<f64>;
pub type MleResult64 = MleResult<f64>;

pub type GammaParams32 = GammaParams<f32>;
pub type PopulationValues32 = PopulationValues<f32>;
pub type Sample32 = Sample<f32>;
pub type EstimateReport32 = EstimateReport<f32>;
pub type MleResult32 = MleResult<f32>;
