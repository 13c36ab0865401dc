// Approximation coefficients below are kept exactly as published.
#![allow(clippy::excessive_precision)]

//! Standard-normal numerics: CDF, quantile function, and the inverse-CDF
//! tail bound used by the finite-regret analyses.
//!
//! The CDF is evaluated through a rational-Chebyshev approximation of the
//! complementary error function (Cody's three-regime scheme), good to a few
//! ulps over the whole double range. The quantile uses Acklam's rational
//! approximation refined by one Halley step against the CDF, which brings
//! the round-trip error below 1e-9 everywhere it matters.

use crate::error::{Error, Result};

/// A probability value, guaranteed to lie in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability(f64);

impl Probability {
    pub const ZERO: Probability = Probability(0.0);
    pub const HALF: Probability = Probability(0.5);
    pub const ONE: Probability = Probability(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || !(0.0..=1.0).contains(&value) {
            return Err(Error::invalid(format!(
                "probability must lie in [0, 1], got {value}"
            )));
        }
        Ok(Probability(value))
    }

    /// Wraps a value that is mathematically guaranteed to be a probability,
    /// clamping away sub-ulp excursions outside [0, 1].
    pub(crate) fn from_math(value: f64) -> Self {
        debug_assert!(
            !value.is_nan() && (-1e-12..=1.0 + 1e-12).contains(&value),
            "not a probability: {value}"
        );
        Probability(value.clamp(0.0, 1.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl std::fmt::Display for Probability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

// Cody-style rational approximations for erf/erfc.
// Region 1: |x| <= 0.46875, erf(x) = x * R1(x^2).
const ERF_A: [f64; 4] = [
    3.16112374387056560e0,
    1.13864154151050156e2,
    3.77485237685302021e2,
    3.20937758913846947e3,
];
const ERF_A_LEAD: f64 = 1.85777706184603153e-1;
const ERF_B: [f64; 4] = [
    2.36012909523441209e1,
    2.44024637934444173e2,
    1.28261652607737228e3,
    2.84423683343917062e3,
];

// Region 2: 0.46875 < x <= 4, erfc(x) = exp(-x^2) * R2(x).
const ERFC_C: [f64; 8] = [
    5.64188496988670089e-1,
    8.88314979438837594e0,
    6.61191906371416295e1,
    2.98635138197400131e2,
    8.81952221241769090e2,
    1.71204761263407058e3,
    2.05107837782607147e3,
    1.23033935479799725e3,
];
const ERFC_C_LEAD: f64 = 2.15311535474403846e-8;
const ERFC_D: [f64; 8] = [
    1.57449261107098347e1,
    1.17693950891312499e2,
    5.37181101862009858e2,
    1.62138957456669019e3,
    3.29079923573345963e3,
    4.36261909014324716e3,
    3.43936767414372164e3,
    1.23033935480374942e3,
];

// Region 3: x > 4, erfc(x) = exp(-x^2)/x * (1/sqrt(pi) - R3(1/x^2)).
const ERFC_P: [f64; 5] = [
    3.05326634961232344e-1,
    3.60344899949804439e-1,
    1.25781726111229246e-1,
    1.60837851487422766e-2,
    6.58749161529837803e-4,
];
const ERFC_P_LEAD: f64 = 1.63153871373020978e-2;
const ERFC_Q: [f64; 4] = [
    2.56852019228982242e0,
    1.87295284992346047e0,
    5.27905102951428412e-1,
    6.05183413124413191e-2,
];
const ERFC_Q_LAST: f64 = 2.33520497626869185e-3;

const FRAC_1_SQRT_PI: f64 = 5.64189583547756287e-1;

fn erf_small(x: f64) -> f64 {
    let z = x * x;
    let mut num = ERF_A_LEAD * z;
    let mut den = z;
    for i in 0..3 {
        num = (num + ERF_A[i]) * z;
        den = (den + ERF_B[i]) * z;
    }
    x * (num + ERF_A[3]) / (den + ERF_B[3])
}

fn erfc_mid(y: f64) -> f64 {
    let mut num = ERFC_C_LEAD * y;
    let mut den = y;
    for i in 0..7 {
        num = (num + ERFC_C[i]) * y;
        den = (den + ERFC_D[i]) * y;
    }
    (-y * y).exp() * (num + ERFC_C[7]) / (den + ERFC_D[7])
}

fn erfc_tail(y: f64) -> f64 {
    let z = 1.0 / (y * y);
    let mut num = ERFC_P_LEAD * z;
    let mut den = z;
    for i in 0..4 {
        num = (num + ERFC_P[i]) * z;
        den = (den + ERFC_Q[i]) * z;
    }
    let r = z * (num + ERFC_P[4]) / (den + ERFC_Q_LAST);
    (-y * y).exp() * (FRAC_1_SQRT_PI - r) / y
}

/// Complementary error function, |relative error| < 1e-15 for y >= 0.
fn erfc(x: f64) -> f64 {
    let y = x.abs();
    let pos = if y <= 0.46875 {
        1.0 - erf_small(y)
    } else if y <= 4.0 {
        erfc_mid(y)
    } else if y * y > 745.0 {
        0.0
    } else {
        erfc_tail(y)
    };
    if x < 0.0 {
        2.0 - pos
    } else {
        pos
    }
}

/// Standard normal CDF without the argument check; callers guarantee a
/// finite argument.
pub(crate) fn phi(z: f64) -> f64 {
    debug_assert!(!z.is_nan());
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Standard normal cumulative distribution function.
pub fn std_normal_cdf(z: f64) -> Result<Probability> {
    if !z.is_finite() {
        return Err(Error::invalid(format!("cdf argument must be finite, got {z}")));
    }
    Ok(Probability::from_math(phi(z)))
}

// Acklam's rational approximation of the standard normal quantile.
const QTL_A: [f64; 6] = [
    -3.969683028665376e1,
    2.209460984245205e2,
    -2.759285104469687e2,
    1.383577518672690e2,
    -3.066479806614716e1,
    2.506628277459239e0,
];
const QTL_B: [f64; 5] = [
    -5.447609879822406e1,
    1.615858368580409e2,
    -1.556989798598866e2,
    6.680131188771972e1,
    -1.328068155288572e1,
];
const QTL_C: [f64; 6] = [
    -7.784894002430293e-3,
    -3.223964580411365e-1,
    -2.400758277161838e0,
    -2.549732539343734e0,
    4.374664141464968e0,
    2.938163982698783e0,
];
const QTL_D: [f64; 4] = [
    7.784695709041462e-3,
    3.224671290700398e-1,
    2.445134137142996e0,
    3.754408661907416e0,
];
const QTL_P_LOW: f64 = 0.02425;

fn quantile_approx(p: f64) -> f64 {
    if p < QTL_P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((QTL_C[0] * q + QTL_C[1]) * q + QTL_C[2]) * q + QTL_C[3]) * q + QTL_C[4]) * q
            + QTL_C[5])
            / ((((QTL_D[0] * q + QTL_D[1]) * q + QTL_D[2]) * q + QTL_D[3]) * q + 1.0)
    } else if p <= 1.0 - QTL_P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((QTL_A[0] * r + QTL_A[1]) * r + QTL_A[2]) * r + QTL_A[3]) * r + QTL_A[4]) * r
            + QTL_A[5])
            * q
            / (((((QTL_B[0] * r + QTL_B[1]) * r + QTL_B[2]) * r + QTL_B[3]) * r + QTL_B[4]) * r
                + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((QTL_C[0] * q + QTL_C[1]) * q + QTL_C[2]) * q + QTL_C[3]) * q + QTL_C[4]) * q
            + QTL_C[5])
            / ((((QTL_D[0] * q + QTL_D[1]) * q + QTL_D[2]) * q + QTL_D[3]) * q + 1.0)
    }
}

/// Quantile for a raw probability in [0, 1]; 0 and 1 map to the infinite
/// sentinels. Used on hot paths where the argument is already validated.
pub(crate) fn quantile(p: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&p));
    if p == 0.0 {
        return f64::NEG_INFINITY;
    }
    if p == 1.0 {
        return f64::INFINITY;
    }
    let x = quantile_approx(p);
    // One Halley step against the CDF. Skipped in the far tails where
    // exp(x^2/2) would overflow and the raw approximation is already far
    // more accurate than anything downstream can observe.
    if x * x >= 1400.0 {
        return x;
    }
    let e = phi(x) - p;
    let u = e * (2.0 * std::f64::consts::PI).sqrt() * (0.5 * x * x).exp();
    x - u / (1.0 + 0.5 * x * u)
}

/// Standard normal quantile function; satisfies |cdf(quantile(p)) - p| <= 1e-9.
pub fn std_normal_quantile(p: Probability) -> f64 {
    quantile(p.value())
}

/// The tail bound sqrt(-2 ln alpha), an upper bound on the quantile at
/// 1 - alpha for alpha in [0.5, 1].
pub fn quantile_upper_bound(alpha: Probability) -> Result<f64> {
    let a = alpha.value();
    if a <= 0.0 {
        return Err(Error::invalid("tail-bound level must be positive"));
    }
    Ok((-2.0 * a.ln()).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_at_zero_is_half() {
        assert_eq!(std_normal_cdf(0.0).unwrap().value(), 0.5);
    }

    #[test]
    fn cdf_frozen_values() {
        // High-precision references; the series/continued-fraction oracle in
        // tests/oracle_stats.rs cross-checks the same points independently.
        assert!((std_normal_cdf(1.0).unwrap().value() - 0.841344746068543).abs() < 1e-12);
        assert!((std_normal_cdf(-6.0).unwrap().value() - 9.865876450376946e-10).abs() < 1e-18);
        assert!((std_normal_cdf(-6.0).unwrap().value() - 9.87e-10).abs() < 1e-12);
    }

    #[test]
    fn cdf_rejects_non_finite() {
        assert!(std_normal_cdf(f64::NAN).is_err());
        assert!(std_normal_cdf(f64::INFINITY).is_err());
    }

    #[test]
    fn quantile_at_half_is_zero() {
        assert_eq!(std_normal_quantile(Probability::HALF), 0.0);
    }

    #[test]
    fn quantile_frozen_values() {
        let q975 = std_normal_quantile(Probability::new(0.975).unwrap());
        assert!((q975 - 1.959963984540054).abs() < 1e-9);
        let q99 = std_normal_quantile(Probability::new(0.99).unwrap());
        assert!((q99 - 2.326347874040841).abs() < 1e-9);
    }

    #[test]
    fn quantile_sentinels() {
        assert_eq!(std_normal_quantile(Probability::ZERO), f64::NEG_INFINITY);
        assert_eq!(std_normal_quantile(Probability::ONE), f64::INFINITY);
    }

    #[test]
    fn probability_rejects_out_of_range() {
        assert!(Probability::new(-0.1).is_err());
        assert!(Probability::new(1.1).is_err());
        assert!(Probability::new(f64::NAN).is_err());
        assert!(Probability::new(0.0).is_ok());
        assert!(Probability::new(1.0).is_ok());
    }

    #[test]
    fn tail_bound_values() {
        assert_eq!(quantile_upper_bound(Probability::ONE).unwrap(), 0.0);
        let half = quantile_upper_bound(Probability::HALF).unwrap();
        assert!((half - (2.0 * 2.0_f64.ln()).sqrt()).abs() < 1e-15);
        assert!((half - 1.17741).abs() < 1e-5);
        let p7 = quantile_upper_bound(Probability::new(0.7).unwrap()).unwrap();
        assert!((p7 - (-2.0 * 0.7_f64.ln()).sqrt()).abs() < 1e-15);
        assert!((p7 - 0.844600).abs() < 1e-6);
        assert!(quantile_upper_bound(Probability::ZERO).is_err());
    }

    #[test]
    fn quantile_symmetry() {
        for &p in &[0.001, 0.01, 0.1, 0.25, 0.4, 0.49] {
            let lo = std_normal_quantile(Probability::new(p).unwrap());
            let hi = std_normal_quantile(Probability::new(1.0 - p).unwrap());
            assert!((lo + hi).abs() < 1e-9, "asymmetry at p={p}: {lo} vs {hi}");
        }
    }

    #[test]
    fn cdf_quantile_round_trip() {
        for i in 0..=1200 {
            let z = -6.0 + i as f64 * 0.01;
            let p = phi(z);
            let back = quantile(p);
            assert!((back - z).abs() < 1e-6, "round trip failed at z={z}: {back}");
        }
    }
}
