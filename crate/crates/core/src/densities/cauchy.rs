//! Scale Cauchy densities `p_s(x) = s / (π (x² + s²))` and the closed form of
//! their (A, H) α-divergence.

use super::{sample_on_grid, DensityPair, DiscreteDensity};
use crate::divergences::mn_alpha_div;
use crate::error::{Error, Result};
use crate::means::{check_positive, WeightedMeanSpec};
use crate::scalar::Scalar;

fn cauchy_pdf<T: Scalar>(s: T, x: T) -> T {
    s / (T::PI() * (x * x + s * s))
}

/// Cauchy density of scale `s` sampled on a trapezoid grid of `n` (odd, ≥ 3)
/// points over `[-half_width, half_width]`.
pub fn cauchy_grid<T: Scalar>(s: T, half_width: T, n: usize) -> Result<DiscreteDensity<T>> {
    if !(s > T::zero() && s.is_finite()) || !(half_width > T::zero() && half_width.is_finite()) {
        return Err(Error::BadGridSpec(format!(
            "scale {} and half width {} must be positive",
            s, half_width
        )));
    }
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::BadGridSpec(format!(
            "grid needs an odd number >= 3 of points, got {}",
            n
        )));
    }
    let mut d = sample_on_grid(-half_width, half_width, n, |x| cauchy_pdf(s, x))?;
    // exact symmetry about the centre node
    let mid = n / 2;
    let values: Vec<T> = (0..n)
        .map(|i| d.values()[if i > mid { n - 1 - i } else { i }])
        .collect();
    d = d.with_values(values)?;
    Ok(d)
}

/// `I^{A,H}_α[p_{s1} : p_{s2}]` over the whole real line.
///
/// The integral of the weighted harmonic mean reduces to a single Cauchy-type
/// integral, giving `(1 - sqrt(s1 s2 / (((1-α)s1 + α s2)(α s1 + (1-α) s2)))) / (α(1-α))`.
pub fn cauchy_ah_alpha_closed_form<T: Scalar>(s1: T, s2: T, alpha: T) -> Result<T> {
    check_positive(s1)?;
    check_positive(s2)?;
    if !(alpha > T::zero() && alpha < T::one()) {
        return Err(Error::AlphaOutOfOpenInterval(crate::scalar::to_f64(alpha)));
    }
    if s1 == s2 {
        return Ok(T::zero());
    }
    let one = T::one();
    let beta = one - alpha;
    let ratio = s1 * s2 / ((beta * s1 + alpha * s2) * (alpha * s1 + beta * s2));
    // 1 - sqrt(r) = (1 - r) / (1 + sqrt(r)) avoids cancellation for nearby scales
    Ok((one - ratio) / (one + ratio.sqrt()) / (alpha * beta))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CauchyComparison<T> {
    pub closed_form: T,
    pub quadrature: T,
    pub abs_error: T,
    pub rel_error: T,
}

/// Closed form against the (A, H) mean-difference divergence evaluated on two
/// trapezoid grids.
pub fn cauchy_ah_alpha_quadrature<T: Scalar>(
    s1: T,
    s2: T,
    alpha: T,
    half_width: T,
    n: usize,
) -> Result<CauchyComparison<T>> {
    let closed_form = cauchy_ah_alpha_closed_form(s1, s2, alpha)?;
    let pair = DensityPair::new(
        cauchy_grid(s1, half_width, n)?,
        cauchy_grid(s2, half_width, n)?,
    )?;
    let quadrature = mn_alpha_div(
        &WeightedMeanSpec::arithmetic(),
        &WeightedMeanSpec::harmonic(),
        alpha,
        &pair,
    )?
    .value;
    let abs_error = (closed_form - quadrature).abs();
    let rel_error = if closed_form == T::zero() {
        abs_error
    } else {
        abs_error / closed_form.abs()
    };
    Ok(CauchyComparison {
        closed_form,
        quadrature,
        abs_error,
        rel_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_mass_matches_truncated_cdf() {
        let d = cauchy_grid(1.0f64, 50.0, 2001).unwrap();
        let tail = 2.0 * (0.5 - 50f64.atan() / std::f64::consts::PI);
        assert!((d.mass() - (1.0 - tail)).abs() < 1e-4);
        assert!((d.mass() - 1.0).abs() < 0.013);
    }

    #[test]
    fn grid_is_symmetric_with_expected_peak() {
        let s = 0.7f64;
        let d = cauchy_grid(s, 20.0, 401).unwrap();
        let v = d.values();
        for i in 0..v.len() {
            assert_eq!(v[i], v[v.len() - 1 - i]);
        }
        assert!((v[200] - 1.0 / (std::f64::consts::PI * s)).abs() < 1e-15);
    }

    #[test]
    fn grid_spec_errors() {
        assert!(cauchy_grid(1.0f64, 10.0, 4).is_err());
        assert!(cauchy_grid(1.0f64, 10.0, 1).is_err());
        assert!(cauchy_grid(-1.0f64, 10.0, 5).is_err());
        assert!(cauchy_grid(1.0f64, 0.0, 5).is_err());
    }

    #[test]
    fn closed_form_values() {
        // mpmath quadrature of the (A,H) integrand over the real line
        let cases = [
            (1.0, 2.0, 0.5, 0.228_763_833_671_746_5),
            (0.5, 3.0, 0.25, 1.337_233_870_584_772_4),
            (1.0, 2.0, 0.3, 0.231_890_531_861_960_65),
        ];
        for (s1, s2, a, want) in cases {
            let got: f64 = cauchy_ah_alpha_closed_form(s1, s2, a).unwrap();
            assert!(
                (got - want).abs() <= 1e-12 * want,
                "{} {} {}: {}",
                s1,
                s2,
                a,
                got
            );
        }
        assert_eq!(cauchy_ah_alpha_closed_form(2.0f64, 2.0, 0.7).unwrap(), 0.0);
        let a = cauchy_ah_alpha_closed_form(1.0f64, 2.0, 0.3).unwrap();
        let b = cauchy_ah_alpha_closed_form(2.0f64, 1.0, 0.7).unwrap();
        assert!((a - b).abs() <= 1e-14 * a);
        assert!(cauchy_ah_alpha_closed_form(1.0f64, 2.0, 1.0).is_err());
    }
}
