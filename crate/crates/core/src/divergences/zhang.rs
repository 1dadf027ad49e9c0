//! Zhang's `(A, M^ρ)` α_A-divergences and the homogeneous `(α_A, β_A)` family,
//! evaluated directly from their own formulas in the α_A convention.

use super::LIMIT_EPS;
use crate::densities::DensityPair;
use crate::error::{Error, Result};
use crate::means::{check_strict_comparability, default_grid, power_mean_unchecked, Generator};
use crate::scalar::{lit, to_f64, CompensatedSum, Scalar};

fn check_open_amari<T: Scalar>(alpha_a: T) -> Result<()> {
    if alpha_a > -T::one() && alpha_a < T::one() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "alpha_A {} outside (-1, 1)",
            alpha_a
        )))
    }
}

/// `D^ρ_1` per point: `p - q - (ρ(p) - ρ(q)) / ρ'(q)`.
fn zhang_one<T: Scalar>(rho: &Generator<T>, p: T, q: T) -> T {
    if p == q {
        return T::zero();
    }
    p - q - (rho.eval(p) - rho.eval(q)) / rho.derivative(q)
}

/// `D^ρ_{α_A}[p:q]` for `α_A ∈ [-1, 1]`; the endpoints use the closed forms
/// `D^ρ_1[p:q]` and `D^ρ_{-1}[p:q] = D^ρ_1[q:p]`.
pub fn zhang_rho_alpha_div<T: Scalar>(
    rho: &Generator<T>,
    alpha_a: T,
    pair: &DensityPair<T>,
) -> Result<T> {
    if !(alpha_a >= -T::one() && alpha_a <= T::one()) {
        return Err(Error::Domain(format!(
            "alpha_A {} outside [-1, 1]",
            alpha_a
        )));
    }
    check_strict_comparability(&Generator::identity(), rho, &default_grid())?.into_result()?;
    let one = T::one();
    let two = lit::<T>(2.0);
    // |α_A ∓ 1| ≤ 2ε ⇔ standard α within ε of {0, 1}
    let band = lit::<T>(2.0 * LIMIT_EPS);
    let mut acc = CompensatedSum::new();
    if (one - alpha_a).abs() <= band {
        for (w, p, q) in pair.points() {
            acc.add(w * zhang_one(rho, p, q));
        }
    } else if (one + alpha_a).abs() <= band {
        for (w, p, q) in pair.points() {
            acc.add(w * zhang_one(rho, q, p));
        }
    } else {
        let (wp, wq) = ((one - alpha_a) / two, (one + alpha_a) / two);
        let scale = lit::<T>(4.0) / (one - alpha_a * alpha_a);
        for (w, p, q) in pair.points() {
            let d = if p == q {
                T::zero()
            } else {
                wp * p + wq * q - rho.inverse(wp * rho.eval(p) + wq * rho.eval(q))
            };
            acc.add(w * d * scale);
        }
    }
    Ok(acc.value())
}

/// Zhang's homogeneous `(α_A, β_A)`-divergence for `α_A ∈ (-1, 1)`, `β_A ∈ (-1, 1]`.
pub fn zhang_alpha_beta_div<T: Scalar>(alpha_a: T, beta_a: T, pair: &DensityPair<T>) -> Result<T> {
    check_open_amari(alpha_a)?;
    if !(beta_a > -T::one() && beta_a <= T::one()) {
        return Err(Error::BetaOutOfRange(to_f64(beta_a)));
    }
    let one = T::one();
    let two = lit::<T>(2.0);
    let (wp, wq) = ((one - alpha_a) / two, (one + alpha_a) / two);
    let exponent = (one - beta_a) / two;
    let scale = lit::<T>(4.0) / (one - alpha_a * alpha_a) * (two / (one + beta_a));
    Ok(pair
        .points()
        .map(|(w, p, q)| {
            if p == q {
                T::zero()
            } else {
                w * (wp * p + wq * q - power_mean_unchecked(exponent, wq, p, q)) * scale
            }
        })
        .collect::<CompensatedSum<T>>()
        .value())
}
