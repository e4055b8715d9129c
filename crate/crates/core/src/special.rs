//! Log-gamma, digamma and trigamma on the positive half-line.
//!
//! All three use the same scheme: shift the argument upward with the
//! recurrence until it is large enough for the Stirling-type asymptotic
//! series to be accurate to a few ulps, then evaluate the series. There is
//! no reflection formula; non-positive arguments are rejected.

use crate::error::{check_positive, Result};
use crate::Real;

/// Below this the digamma/trigamma series is not used directly.
const PSI_SHIFT: f64 = 10.0;
/// Below this the Stirling series for ln Γ is not used directly.
const LGAMMA_SHIFT: f64 = 15.0;

/// ½ ln(2π)
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

// Bernoulli-number coefficients B_2k / (2k (2k-1)) of the Stirling series,
// k = 1..7.
const STIRLING: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
];

// B_2k / (2k), k = 1..5: ln x - ψ(x) ~ 1/(2x) + Σ B_2k / (2k x^2k).
const DIGAMMA: [f64; 5] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
];

// B_2k, k = 1..5: ψ'(x) ~ 1/x + 1/(2x²) + Σ B_2k / x^(2k+1).
const TRIGAMMA: [f64; 5] = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0];

/// Evaluates Σ c_k t^k for k = 1..=len, i.e. a polynomial without constant term.
#[inline]
fn series<T: Real>(coeffs: &[f64], t: T) -> T {
    let mut acc = T::zero();
    for &c in coeffs.iter().rev() {
        acc = (acc + T::lit(c)) * t;
    }
    acc
}

fn stirling<T: Real>(z: T) -> T {
    let half = T::lit(0.5);
    let inv = z.recip();
    (z - half) * z.ln() - z + T::lit(HALF_LN_2PI) + inv * series(&STIRLING[1..], inv * inv) + T::lit(STIRLING[0]) * inv
}

/// Natural log of the gamma function, ln Γ(x), for x > 0.
pub fn ln_gamma<T: Real>(x: T) -> Result<T> {
    let x = check_positive("x", x)?;
    let shift = T::lit(LGAMMA_SHIFT);
    if x >= shift {
        return Ok(stirling(x));
    }
    // Γ(x) = Γ(x + k) / (x (x+1) ... (x+k-1))
    let mut z = x;
    let mut prod = T::one();
    while z < shift {
        prod = prod * z;
        z = z + T::one();
    }
    Ok(stirling(z) - prod.ln())
}

/// Digamma ψ(x) = d/dx ln Γ(x), for x > 0.
pub fn digamma<T: Real>(x: T) -> Result<T> {
    let mut z = check_positive("x", x)?;
    let shift = T::lit(PSI_SHIFT);
    let mut acc = T::zero();
    while z < shift {
        acc = acc - z.recip();
        z = z + T::one();
    }
    Ok(acc + z.ln() - asymptotic_log_minus_digamma(z))
}

/// Trigamma ψ'(x), for x > 0.
pub fn trigamma<T: Real>(x: T) -> Result<T> {
    let mut z = check_positive("x", x)?;
    let shift = T::lit(PSI_SHIFT);
    let mut acc = T::zero();
    while z < shift {
        acc = acc + (z * z).recip();
        z = z + T::one();
    }
    Ok(acc + z.recip() - asymptotic_recip_minus_trigamma(z))
}

// Valid for z >= PSI_SHIFT.
fn asymptotic_log_minus_digamma<T: Real>(z: T) -> T {
    let inv = z.recip();
    T::lit(0.5) * inv + series(&DIGAMMA, inv * inv)
}

// Valid for z >= PSI_SHIFT.
fn asymptotic_recip_minus_trigamma<T: Real>(z: T) -> T {
    let inv = z.recip();
    let inv2 = inv * inv;
    -(T::lit(0.5) * inv2 + inv * series(&TRIGAMMA, inv2))
}

/// ln x − ψ(x), evaluated without cancellation for large x.
///
/// Strictly positive and decreasing on (0, ∞), behaving like 1/(2x) at
/// infinity. This is the left-hand side of the gamma shape score equation
/// and, negated, the finite-sample bias of the Theil L estimator.
pub fn log_minus_digamma<T: Real>(x: T) -> Result<T> {
    let x = check_positive("x", x)?;
    if x >= T::lit(PSI_SHIFT) {
        Ok(asymptotic_log_minus_digamma(x))
    } else {
        Ok(x.ln() - digamma(x)?)
    }
}

/// 1/x − ψ'(x), the derivative of [`log_minus_digamma`]. Strictly negative.
pub fn recip_minus_trigamma<T: Real>(x: T) -> Result<T> {
    let x = check_positive("x", x)?;
    if x >= T::lit(PSI_SHIFT) {
        Ok(asymptotic_recip_minus_trigamma(x))
    } else {
        Ok(x.recip() - trigamma(x)?)
    }
}

/// ln Γ(x + h) − ln Γ(x) for x > 0, h ≥ 0, without subtracting two
/// large log-gamma values.
pub fn ln_gamma_diff<T: Real>(x: T, h: T) -> Result<T> {
    let mut z = check_positive("x", x)?;
    if h.is_nan() || h < T::zero() || !h.is_finite() {
        return Err(crate::Error::Domain {
            name: "h",
            requirement: "non-negative and finite",
            value: h.to_f64().unwrap_or(f64::NAN),
        });
    }
    let shift = T::lit(LGAMMA_SHIFT);
    // Γ(z + h)/Γ(z) = [Γ(z + k + h)/Γ(z + k)] / Π_j (1 + h/(z + j))
    let mut acc = T::zero();
    while z < shift {
        acc = acc - (h / z).ln_1p();
        z = z + T::one();
    }
    let half = T::lit(0.5);
    let zh = z + h;
    let main = (z - half) * (h / z).ln_1p() + h * zh.ln() - h;
    let tail = |w: T| {
        let inv = w.recip();
        T::lit(STIRLING[0]) * inv + inv * series(&STIRLING[1..], inv * inv)
    };
    Ok(acc + main + (tail(zh) - tail(z)))
}

/// n · (ln Γ(α + 1/n) − ln Γ(α)), the logarithm of Γⁿ(α + 1/n) / Γⁿ(α).
///
/// Never forms Γⁿ, which overflows for moderate n.
pub fn log_gamma_ratio_scaled<T: Real>(alpha: T, n: usize) -> Result<T> {
    let alpha = check_positive("alpha", alpha)?;
    if n == 0 {
        return Err(crate::Error::Domain {
            name: "n",
            requirement: "a positive integer",
            value: 0.0,
        });
    }
    let nf = T::from_count(n);
    Ok(nf * ln_gamma_diff(alpha, nf.recip())?)
}
