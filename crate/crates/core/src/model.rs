//! Gamma population model: exact index values, finite-sample expectations
//! of the plug-in estimators, their biases, and a sampler.
//!
//! Every closed form depends on the shape only. The rate is carried in
//! [`GammaParams`] for sampling but never read by the index formulas.

use std::fmt;

use rand::Rng;
use rand_distr::{Distribution, Open01, StandardNormal};

use crate::error::{check_positive, Error, Result};
use crate::estimators::Sample;
use crate::special::{digamma, log_gamma_ratio_scaled, log_minus_digamma};
use crate::Real;

/// Largest sample size accepted by the closed forms.
pub const MAX_N: usize = 1 << 31;

/// Shape/rate parameters of Gamma(α, λ) with density ∝ x^(α−1) e^(−λx).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaParams<T> {
    shape: T,
    rate: T,
}

impl<T: Real> GammaParams<T> {
    pub fn new(shape: T, rate: T) -> Result<Self> {
        Ok(Self {
            shape: check_positive("shape", shape)?,
            rate: check_positive("rate", rate)?,
        })
    }

    /// Gamma(α, 1).
    pub fn with_shape(shape: T) -> Result<Self> {
        Self::new(shape, T::one())
    }

    pub fn shape(&self) -> T {
        self.shape
    }

    pub fn rate(&self) -> T {
        self.rate
    }

    pub fn mean(&self) -> T {
        self.shape / self.rate
    }
}

/// The three inequality indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndexKind {
    TheilT,
    TheilL,
    Atkinson,
}

impl IndexKind {
    pub const ALL: [IndexKind; 3] = [IndexKind::TheilT, IndexKind::TheilL, IndexKind::Atkinson];

    pub fn name(self) -> &'static str {
        match self {
            IndexKind::TheilT => "theil_t",
            IndexKind::TheilL => "theil_l",
            IndexKind::Atkinson => "atkinson",
        }
    }
}

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Population values of all three indices for one gamma model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PopulationValues<T> {
    pub theil_t: T,
    pub theil_l: T,
    pub atkinson: T,
}

impl<T: Copy> PopulationValues<T> {
    pub fn get(&self, kind: IndexKind) -> T {
        match kind {
            IndexKind::TheilT => self.theil_t,
            IndexKind::TheilL => self.theil_l,
            IndexKind::Atkinson => self.atkinson,
        }
    }
}

fn check_n<T: Real>(n: usize) -> Result<T> {
    if n == 0 || n > MAX_N {
        return Err(Error::Domain {
            name: "n",
            requirement: "an integer in [1, 2^31]",
            value: n as f64,
        });
    }
    Ok(T::from_count(n))
}

/// T_T = ψ(α) + 1/α − ln α.
pub fn theil_t_population<T: Real>(params: &GammaParams<T>) -> Result<T> {
    let a = params.shape;
    // Equal to 1/α − (ln α − ψ(α)); the stable difference keeps digits at large α.
    Ok(a.recip() - log_minus_digamma(a)?)
}

/// T_L = ln α − ψ(α).
pub fn theil_l_population<T: Real>(params: &GammaParams<T>) -> Result<T> {
    log_minus_digamma(params.shape)
}

/// A = 1 − exp(ψ(α)) / α.
pub fn atkinson_population<T: Real>(params: &GammaParams<T>) -> Result<T> {
    // exp(ψ(α))/α = exp(−T_L)
    Ok(-(-theil_l_population(params)?).exp_m1())
}

pub fn population_values<T: Real>(params: &GammaParams<T>) -> Result<PopulationValues<T>> {
    Ok(PopulationValues {
        theil_t: theil_t_population(params)?,
        theil_l: theil_l_population(params)?,
        atkinson: atkinson_population(params)?,
    })
}

pub fn population<T: Real>(params: &GammaParams<T>, kind: IndexKind) -> Result<T> {
    match kind {
        IndexKind::TheilT => theil_t_population(params),
        IndexKind::TheilL => theil_l_population(params),
        IndexKind::Atkinson => atkinson_population(params),
    }
}

/// E(T̂_T) = ψ(α) + 1/α + ln n − 1/(nα) − ψ(nα).
pub fn expected_theil_t<T: Real>(params: &GammaParams<T>, n: usize) -> Result<T> {
    let nf = check_n::<T>(n)?;
    let a = params.shape;
    let na = nf * a;
    Ok(digamma(a)? + a.recip() + nf.ln() - na.recip() - digamma(na)?)
}

/// E(T̂_L) = ψ(nα) − ln n − ψ(α).
pub fn expected_theil_l<T: Real>(params: &GammaParams<T>, n: usize) -> Result<T> {
    let nf = check_n::<T>(n)?;
    let a = params.shape;
    Ok(digamma(nf * a)? - nf.ln() - digamma(a)?)
}

/// E(Â) = 1 − Γⁿ(α + 1/n) / (α Γⁿ(α)).
pub fn expected_atkinson<T: Real>(params: &GammaParams<T>, n: usize) -> Result<T> {
    check_n::<T>(n)?;
    let a = params.shape;
    Ok(-(log_gamma_ratio_scaled(a, n)? - a.ln()).exp_m1())
}

pub fn expectation<T: Real>(params: &GammaParams<T>, n: usize, kind: IndexKind) -> Result<T> {
    match kind {
        IndexKind::TheilT => expected_theil_t(params, n),
        IndexKind::TheilL => expected_theil_l(params, n),
        IndexKind::Atkinson => expected_atkinson(params, n),
    }
}

/// Bias(T̂_T) = ln(nα) − 1/(nα) − ψ(nα). Strictly negative.
pub fn bias_theil_t<T: Real>(params: &GammaParams<T>, n: usize) -> Result<T> {
    let na = check_n::<T>(n)? * params.shape;
    Ok(log_minus_digamma(na)? - na.recip())
}

/// Bias(T̂_L) = ψ(nα) − ln(nα). Strictly negative.
pub fn bias_theil_l<T: Real>(params: &GammaParams<T>, n: usize) -> Result<T> {
    let na = check_n::<T>(n)? * params.shape;
    Ok(-log_minus_digamma(na)?)
}

/// Bias(Â) = (1/α) [exp(ψ(α)) − Γⁿ(α + 1/n) / Γⁿ(α)]. Non-positive.
pub fn bias_atkinson<T: Real>(params: &GammaParams<T>, n: usize) -> Result<T> {
    check_n::<T>(n)?;
    let a = params.shape;
    let psi = digamma(a)?;
    let ratio = log_gamma_ratio_scaled(a, n)?;
    // e^ψ − e^r = −e^ψ (e^(r−ψ) − 1)
    Ok(-(psi - a.ln()).exp() * (ratio - psi).exp_m1())
}

pub fn bias<T: Real>(params: &GammaParams<T>, n: usize, kind: IndexKind) -> Result<T> {
    match kind {
        IndexKind::TheilT => bias_theil_t(params, n),
        IndexKind::TheilL => bias_theil_l(params, n),
        IndexKind::Atkinson => bias_atkinson(params, n),
    }
}

/// Draws i.i.d. Gamma(shape, rate) variates.
///
/// Marsaglia–Tsang squeeze/rejection for shape ≥ 1. For shape < 1 a
/// Gamma(shape + 1) draw is scaled by U^(1/shape).
#[derive(Clone, Copy, Debug)]
pub struct GammaSampler<T> {
    params: GammaParams<T>,
    d: T,
    c: T,
    boost: Option<T>,
}

impl<T> GammaSampler<T>
where
    T: Real,
    StandardNormal: Distribution<T>,
    Open01: Distribution<T>,
{
    pub fn new(params: GammaParams<T>) -> Self {
        let a = params.shape;
        let (base, boost) = if a < T::one() {
            (a + T::one(), Some(a.recip()))
        } else {
            (a, None)
        };
        let d = base - T::lit(1.0 / 3.0);
        let c = (T::lit(9.0) * d).sqrt().recip();
        Self { params, d, c, boost }
    }

    fn standard<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        let one = T::one();
        let half = T::lit(0.5);
        loop {
            let x: T = StandardNormal.sample(rng);
            let t = one + self.c * x;
            if t <= T::zero() {
                continue;
            }
            let v = t * t * t;
            let u: T = Open01.sample(rng);
            let x2 = x * x;
            if u < one - T::lit(0.0331) * x2 * x2 {
                return self.d * v;
            }
            if u.ln() < half * x2 + self.d * (one - v + v.ln()) {
                return self.d * v;
            }
        }
    }

    /// One draw; always strictly positive and finite.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        loop {
            let mut g = self.standard(rng);
            if let Some(inv_shape) = self.boost {
                let u: T = Open01.sample(rng);
                g = g * u.powf(inv_shape);
            }
            let x = g / self.params.rate;
            // Underflow to zero is only reachable for shapes far below any
            // used here; redraw rather than emit a non-positive value.
            if x > T::zero() && x.is_finite() {
                return x;
            }
        }
    }
}

/// Draws a sample of `count` i.i.d. Gamma(shape, rate) observations.
pub fn sample_gamma<T, R>(params: &GammaParams<T>, count: usize, rng: &mut R) -> Result<Sample<T>>
where
    T: Real,
    R: Rng + ?Sized,
    StandardNormal: Distribution<T>,
    Open01: Distribution<T>,
{
    if count == 0 {
        return Err(Error::EmptySample);
    }
    let sampler = GammaSampler::new(*params);
    Sample::new((0..count).map(|_| sampler.draw(rng)).collect())
}
