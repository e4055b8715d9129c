//! Plug-in inequality estimators and their bias-corrected versions.

use std::fmt;

use crate::error::{check_positive, Error, Result};
use crate::mle::{fit_shape, MleResult};
use crate::model::{bias_atkinson, bias_theil_l, bias_theil_t, GammaParams};
use crate::Real;

/// Above this n·α̂ every correction term is below ~1e-8 in absolute value and
/// the report flags the fit as near-degenerate.
pub const NEAR_DEGENERATE_N_ALPHA: f64 = 1e8;

/// A non-empty collection of strictly positive, finite observations.
///
/// The caller's order is kept for [`Sample::observations`]. Sums are always
/// accumulated over an ascending copy, so every estimate is independent of
/// the order the observations arrived in.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample<T> {
    observations: Vec<T>,
    sorted: Vec<T>,
    mean: T,
}

impl<T: Real> Sample<T> {
    pub fn new(observations: Vec<T>) -> Result<Self> {
        if observations.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some((index, &x)) = observations
            .iter()
            .enumerate()
            .find(|(_, &x)| !(x > T::zero() && x.is_finite()))
        {
            return Err(Error::InvalidObservation {
                index,
                value: x.to_f64().unwrap_or(f64::NAN),
            });
        }
        let mut sorted = observations.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("validated finite"));
        let sum = sorted.iter().fold(T::zero(), |acc, &x| acc + x);
        let mean = sum / T::from_count(sorted.len());
        Ok(Self {
            observations,
            sorted,
            mean,
        })
    }

    pub fn from_slice(observations: &[T]) -> Result<Self> {
        Self::new(observations.to_vec())
    }

    pub fn observations(&self) -> &[T] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    // Never true; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn mean(&self) -> T {
        self.mean
    }

    pub fn geometric_mean(&self) -> T {
        let mean_log = self.sorted.iter().fold(T::zero(), |acc, &x| acc + x.ln())
            / T::from_count(self.len());
        mean_log.exp()
    }

    /// Σ w_i (ln x_i − ln x̄) and Σ (ln x_i − ln x̄), with w_i = x_i / Σ x.
    ///
    /// Centering on ln x̄ makes both exactly zero whenever the stored mean
    /// equals the common value, in particular for n = 1.
    fn centered_log_sums(&self) -> (T, T) {
        let log_mean = self.mean.ln();
        let mut weighted = T::zero();
        let mut plain = T::zero();
        for &x in &self.sorted {
            let d = x.ln() - log_mean;
            weighted = weighted + x * d;
            plain = plain + d;
        }
        (weighted, plain)
    }
}

/// T̂_T = Σ X_i ln X_i / Σ X_i − ln Σ X_i + ln n.
pub fn theil_t_hat<T: Real>(sample: &Sample<T>) -> T {
    let (weighted, _) = sample.centered_log_sums();
    let total = sample.mean * T::from_count(sample.len());
    (weighted / total).max(T::zero())
}

/// T̂_L = ln X̄ − (1/n) Σ ln X_i, the mean log deviation.
pub fn theil_l_hat<T: Real>(sample: &Sample<T>) -> T {
    let (_, plain) = sample.centered_log_sums();
    (-plain / T::from_count(sample.len())).max(T::zero())
}

/// Â = 1 − GM / AM = 1 − exp(−T̂_L).
pub fn atkinson_hat<T: Real>(sample: &Sample<T>) -> T {
    -(-theil_l_hat(sample)).exp_m1()
}

fn shape_params<T: Real>(alpha_hat: T) -> Result<GammaParams<T>> {
    GammaParams::with_shape(check_positive("alpha_hat", alpha_hat)?)
}

/// T̂_T minus its bias at the fitted shape.
pub fn corrected_theil_t<T: Real>(sample: &Sample<T>, alpha_hat: T) -> Result<T> {
    Ok(theil_t_hat(sample) - bias_theil_t(&shape_params(alpha_hat)?, sample.len())?)
}

/// T̂_L minus its bias at the fitted shape.
pub fn corrected_theil_l<T: Real>(sample: &Sample<T>, alpha_hat: T) -> Result<T> {
    Ok(theil_l_hat(sample) - bias_theil_l(&shape_params(alpha_hat)?, sample.len())?)
}

/// Â minus its bias at the fitted shape.
pub fn corrected_atkinson<T: Real>(sample: &Sample<T>, alpha_hat: T) -> Result<T> {
    Ok(atkinson_hat(sample) - bias_atkinson(&shape_params(alpha_hat)?, sample.len())?)
}

/// Bias-corrected estimates together with the shape fit behind them.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrectedEstimates<T> {
    pub fit: MleResult<T>,
    pub theil_t: T,
    pub theil_l: T,
    pub atkinson: T,
    /// n·α̂ is so large the corrections are numerically negligible.
    pub near_degenerate: bool,
}

/// Point estimates for one sample, optionally with corrections.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimateReport<T> {
    pub n: usize,
    pub theil_t_hat: T,
    pub theil_l_hat: T,
    pub atkinson_hat: T,
    pub corrected: Option<CorrectedEstimates<T>>,
}

impl<T: Real> EstimateReport<T> {
    pub fn alpha_hat(&self) -> Option<T> {
        self.corrected.as_ref().map(|c| c.fit.alpha_hat)
    }

    pub fn theil_t_corrected(&self) -> Option<T> {
        self.corrected.as_ref().map(|c| c.theil_t)
    }

    pub fn theil_l_corrected(&self) -> Option<T> {
        self.corrected.as_ref().map(|c| c.theil_l)
    }

    pub fn atkinson_corrected(&self) -> Option<T> {
        self.corrected.as_ref().map(|c| c.atkinson)
    }
}

/// Returned by [`estimate_all`] when a correction was requested but the
/// shape could not be fitted. Carries the uncorrected estimates.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrectionUnavailable<T> {
    pub report: EstimateReport<T>,
    pub reason: Error,
}

impl<T> fmt::Display for CorrectionUnavailable<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "correction unavailable: {}", self.reason)
    }
}

impl<T: fmt::Debug> std::error::Error for CorrectionUnavailable<T> {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.reason)
    }
}

/// Computes all three estimators and, if asked, the corrected versions using
/// the maximum likelihood shape.
pub fn estimate_all<T: Real>(
    sample: &Sample<T>,
    apply_correction: bool,
) -> std::result::Result<EstimateReport<T>, CorrectionUnavailable<T>> {
    let theil_t = theil_t_hat(sample);
    let theil_l = theil_l_hat(sample);
    let mut report = EstimateReport {
        n: sample.len(),
        theil_t_hat: theil_t,
        theil_l_hat: theil_l,
        atkinson_hat: -(-theil_l).exp_m1(),
        corrected: None,
    };
    if !apply_correction {
        return Ok(report);
    }
    match correct(sample, &report) {
        Ok(c) => {
            report.corrected = Some(c);
            Ok(report)
        }
        Err(reason) => Err(CorrectionUnavailable { report, reason }),
    }
}

fn correct<T: Real>(sample: &Sample<T>, report: &EstimateReport<T>) -> Result<CorrectedEstimates<T>> {
    let fit = fit_shape(sample)?;
    let params = GammaParams::with_shape(fit.alpha_hat)?;
    let n = sample.len();
    Ok(CorrectedEstimates {
        theil_t: report.theil_t_hat - bias_theil_t(&params, n)?,
        theil_l: report.theil_l_hat - bias_theil_l(&params, n)?,
        atkinson: report.atkinson_hat - bias_atkinson(&params, n)?,
        near_degenerate: T::from_count(n) * fit.alpha_hat > T::lit(NEAR_DEGENERATE_N_ALPHA),
        fit,
    })
}
