//! Maximum likelihood fit of the gamma shape.
//!
//! The profile score equation is ln α − ψ(α) = s with
//! s = ln X̄ − mean(ln X). Its left side decreases strictly from +∞ to 0,
//! so every s > 0 has exactly one root.

use crate::error::{Error, Result};
use crate::estimators::{theil_l_hat, Sample};
use crate::special::{log_minus_digamma, recip_minus_trigamma};
use crate::Real;

/// Gaps below this are indistinguishable from an all-equal sample.
pub const DEGENERATE_GAP: f64 = 1e-12;
/// Target for |ln α̂ − ψ(α̂) − s|, floored at a few ulps of s.
pub const RESIDUAL_TOL: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 100;

const MAX_NEWTON: usize = 30;
const STEP_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MleResult<T> {
    pub alpha_hat: T,
    /// α̂ / X̄. Not used by any index.
    pub rate_hat: T,
    pub iterations: usize,
    /// Final |ln α̂ − ψ(α̂) − s|.
    pub residual: T,
}

/// s = ln X̄ − (1/n) Σ ln X_i. Identical to the Theil L estimate.
pub fn log_moment_gap<T: Real>(sample: &Sample<T>) -> T {
    theil_l_hat(sample)
}

/// Fits the gamma shape of `sample` by maximum likelihood.
pub fn fit_shape<T: Real>(sample: &Sample<T>) -> Result<MleResult<T>> {
    let gap = log_moment_gap(sample);
    if sample.len() < 2 {
        return Err(Error::DegenerateSample { gap: 0.0 });
    }
    let root = solve_shape(gap)?;
    Ok(MleResult {
        rate_hat: root.alpha_hat / sample.mean(),
        ..root
    })
}

/// Solves ln α − ψ(α) = `gap` for α. `rate_hat` in the result is 1.
pub fn solve_shape<T: Real>(gap: T) -> Result<MleResult<T>> {
    if gap.is_nan() || gap < T::lit(DEGENERATE_GAP) || !gap.is_finite() {
        return Err(Error::DegenerateSample {
            gap: gap.to_f64().unwrap_or(f64::NAN),
        });
    }
    let tol = T::lit(RESIDUAL_TOL).max(T::epsilon() * T::lit(64.0) * gap.max(T::one()));
    let f = |u: T| -> Result<T> { Ok(log_minus_digamma(u.exp())? - gap) };

    // Newton on u = ln α: f'(u) = α (1/α − ψ'(α)).
    let mut u = initial_guess(gap).ln();
    let mut fu = f(u)?;
    let mut iterations = 0;
    let mut stalled = 0;
    while iterations < MAX_NEWTON && fu.abs() > tol {
        iterations += 1;
        let alpha = u.exp();
        let slope = alpha * recip_minus_trigamma(alpha)?;
        let step = fu / slope;
        let next = u - step;
        let f_next = match f(next) {
            Ok(v) if v.is_finite() && next.is_finite() => v,
            _ => break,
        };
        if f_next.abs() >= fu.abs() {
            stalled += 1;
        } else {
            stalled = 0;
        }
        u = next;
        fu = f_next;
        if stalled >= 3 || step.abs() <= T::lit(STEP_TOL) {
            break;
        }
    }
    if fu.abs() > tol {
        let (u_b, f_b, used) = bisect(&f, u, tol, MAX_ITERATIONS - iterations)?;
        u = u_b;
        fu = f_b;
        iterations += used;
    }
    if fu.abs() > tol {
        return Err(Error::NoConvergence {
            iterations,
            residual: fu.abs().to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(MleResult {
        alpha_hat: u.exp(),
        rate_hat: T::one(),
        iterations,
        residual: fu.abs(),
    })
}

/// Closed-form approximation (3 − s + √((s − 3)² + 24 s)) / (12 s).
pub fn initial_guess<T: Real>(gap: T) -> T {
    let three = T::lit(3.0);
    (three - gap + ((gap - three).powi(2) + T::lit(24.0) * gap).sqrt()) / (T::lit(12.0) * gap)
}

// Bisection on u = ln α over a bracket grown outward from `start`.
fn bisect<T: Real>(
    f: &impl Fn(T) -> Result<T>,
    start: T,
    tol: T,
    budget: usize,
) -> Result<(T, T, usize)> {
    let limit = T::max_value().ln() - T::one();
    let mut width = T::one();
    let mut lo = start - width;
    let mut hi = start + width;
    // f is decreasing in u: need f(lo) > 0 > f(hi).
    while f(lo)? <= T::zero() {
        width = width + width;
        lo = (start - width).max(-limit);
        if lo <= -limit {
            break;
        }
    }
    while f(hi)? >= T::zero() {
        width = width + width;
        hi = (start + width).min(limit);
        if hi >= limit {
            break;
        }
    }
    let mut used = 0;
    let mut mid = T::lit(0.5) * (lo + hi);
    let mut fm = f(mid)?;
    while used < budget && fm.abs() > tol {
        used += 1;
        if fm > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
        mid = T::lit(0.5) * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        fm = f(mid)?;
    }
    Ok((mid, fm, used))
}
