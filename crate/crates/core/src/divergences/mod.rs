//! α-divergences between positive densities.
//!
//! For a pair of strictly comparable weighted means `M ≥ N` and `α ∈ (0, 1)`,
//!
//! ```text
//! I^{M,N}_α[p:q] = 1/(α(1-α)) Σ w (M_{1-α}(p,q) - N_{1-α}(p,q))
//! ```
//!
//! For quasi-arithmetic means `M^f`, `M^g` the limits `α → 1` and `α → 0` have the
//! closed forms `Σ w (E_f(p,q) - E_g(p,q))` and its reverse. Those closed forms
//! replace the mean-difference formula within [`LIMIT_EPS`] of the endpoints.

mod alpha;
mod entropy;
mod zhang;

pub use alpha::{AlphaConvention, AlphaParam};
pub use entropy::{fg_cross_entropy, fg_entropy, fg_jeffreys, fg_kl};
pub use zhang::{zhang_alpha_beta_div, zhang_rho_alpha_div};

use crate::densities::DensityPair;
use crate::error::{Error, Result};
use crate::means::{
    check_positive, check_strict_comparability, default_grid, Generator, WeightedMeanSpec,
};
use crate::scalar::{lit, to_f64, CompensatedSum, Scalar};

/// Distance from `{0, 1}` below which the closed-form limit divergences are used.
pub const LIMIT_EPS: f64 = 1e-6;

/// Value of a divergence together with per-point diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceResult<T> {
    pub value: T,
    pub limit_branch_used: bool,
    /// Smallest unweighted per-point integrand.
    pub min_integrand: T,
    /// Largest unweighted per-point integrand.
    pub max_integrand: T,
    pub n_points: usize,
}

impl<T: Scalar> DivergenceResult<T> {
    /// Floating-point slack allowed below zero: `1e-12 · n_points`.
    pub fn negative_tolerance(&self) -> T {
        lit::<T>(1e-12) * T::from_usize(self.n_points).unwrap()
    }

    /// Non-negativity up to rounding slack.
    pub fn is_nonnegative(&self) -> bool {
        self.value >= -self.negative_tolerance() && self.min_integrand >= -lit::<T>(1e-12)
    }
}

/// Sums `w · integrand(p, q)` and records integrand extrema.
pub(crate) fn accumulate<T: Scalar>(
    pair: &DensityPair<T>,
    limit_branch_used: bool,
    integrand: impl Fn(T, T) -> T,
) -> DivergenceResult<T> {
    let mut acc = CompensatedSum::new();
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for (w, p, q) in pair.points() {
        let d = integrand(p, q);
        lo = lo.min(d);
        hi = hi.max(d);
        acc.add(w * d);
    }
    DivergenceResult {
        value: acc.value(),
        limit_branch_used,
        min_integrand: lo,
        max_integrand: hi,
        n_points: pair.len(),
    }
}

fn near_zero<T: Scalar>(alpha: T) -> bool {
    alpha.abs() <= lit(LIMIT_EPS)
}

fn near_one<T: Scalar>(alpha: T) -> bool {
    (T::one() - alpha).abs() <= lit(LIMIT_EPS)
}

/// `i_1(a:b) = a log(a/b) + b - a`.
fn scalar_kl<T: Scalar>(a: T, b: T) -> T {
    if a == b {
        T::zero()
    } else {
        a * (a / b).ln() + b - a
    }
}

/// Scalar α-divergence `i_α(a:b)`, valid for every real α.
pub fn scalar_alpha_div<T: Scalar>(alpha: T, a: T, b: T) -> Result<T> {
    check_positive(a)?;
    check_positive(b)?;
    if !alpha.is_finite() {
        return Err(Error::Domain(format!("alpha {} is not finite", alpha)));
    }
    Ok(scalar_alpha_div_unchecked(alpha, a, b))
}

pub(crate) fn scalar_alpha_div_unchecked<T: Scalar>(alpha: T, a: T, b: T) -> T {
    if a == b {
        return T::zero();
    }
    if near_one(alpha) {
        return scalar_kl(a, b);
    }
    if near_zero(alpha) {
        return scalar_kl(b, a);
    }
    let beta = T::one() - alpha;
    let geo = (alpha * a.ln() + beta * b.ln()).exp();
    (alpha * a + beta * b - geo) / (alpha * beta)
}

/// Standard (extended) α-divergence `Σ w i_α(p:q)`.
pub fn standard_alpha_div<T: Scalar>(
    alpha: T,
    pair: &DensityPair<T>,
) -> Result<DivergenceResult<T>> {
    if !alpha.is_finite() {
        return Err(Error::Domain(format!("alpha {} is not finite", alpha)));
    }
    let limit = near_zero(alpha) || near_one(alpha);
    Ok(accumulate(pair, limit, |p, q| {
        scalar_alpha_div_unchecked(alpha, p, q)
    }))
}

/// `KL_e[p:q] = Σ w (p log(p/q) + q - p)`.
pub fn extended_kl<T: Scalar>(pair: &DensityPair<T>) -> T {
    accumulate(pair, true, scalar_kl).value
}

/// `(M, N)` α-divergence for `α ∈ (0, 1)`.
///
/// When both means are quasi-arithmetic the pair is certified strictly
/// comparable on the default grid first.
pub fn mn_alpha_div<T: Scalar>(
    m: &WeightedMeanSpec<T>,
    n: &WeightedMeanSpec<T>,
    alpha: T,
    pair: &DensityPair<T>,
) -> Result<DivergenceResult<T>> {
    if !(alpha > T::zero() && alpha < T::one()) {
        return Err(Error::AlphaOutOfOpenInterval(to_f64(alpha)));
    }
    if let (Some(f), Some(g)) = (m.generator(), n.generator()) {
        check_strict_comparability(&f, &g, &default_grid())?.into_result()?;
    }
    let beta = T::one() - alpha;
    let scale = (alpha * beta).recip();
    Ok(accumulate(pair, false, |p, q| {
        (m.eval_unchecked(beta, p, q) - n.eval_unchecked(beta, p, q)) * scale
    }))
}

/// A certified strictly comparable pair of quasi-arithmetic generators `(f, g)`.
#[derive(Debug, Clone)]
pub struct QaPair<T: Scalar> {
    f: Generator<T>,
    g: Generator<T>,
}

impl<T: Scalar> QaPair<T> {
    /// Certifies `f∘g⁻¹` strictly convex on the default grid.
    pub fn new(f: Generator<T>, g: Generator<T>) -> Result<Self> {
        check_strict_comparability(&f, &g, &default_grid())?.into_result()?;
        Ok(Self { f, g })
    }

    pub fn f(&self) -> &Generator<T> {
        &self.f
    }

    pub fn g(&self) -> &Generator<T> {
        &self.g
    }

    /// Per-point `E_f(p,q) - E_g(p,q)`.
    #[inline]
    pub fn i1_pointwise(&self, p: T, q: T) -> T {
        self.f.e_term(p, q) - self.g.e_term(p, q)
    }

    /// Per-point integrand of `I_α`, with the closed-form limits near the endpoints.
    #[inline]
    pub fn pointwise(&self, alpha: T, p: T, q: T) -> T {
        if near_one(alpha) {
            self.i1_pointwise(p, q)
        } else if near_zero(alpha) {
            self.i1_pointwise(q, p)
        } else {
            let beta = T::one() - alpha;
            (self.f.mean(beta, p, q) - self.g.mean(beta, p, q)) / (alpha * beta)
        }
    }

    pub fn alpha_div(&self, alpha: T, pair: &DensityPair<T>) -> Result<DivergenceResult<T>> {
        if !(alpha >= T::zero() && alpha <= T::one()) {
            return Err(Error::AlphaOutOfRange(to_f64(alpha)));
        }
        let limit = near_zero(alpha) || near_one(alpha);
        Ok(accumulate(pair, limit, |p, q| self.pointwise(alpha, p, q)))
    }
}

/// Quasi-arithmetic α-divergence `I^{f,g}_α[p:q]` for `α ∈ [0, 1]`.
pub fn qa_alpha_div<T: Scalar>(
    f: &Generator<T>,
    g: &Generator<T>,
    alpha: T,
    pair: &DensityPair<T>,
) -> Result<DivergenceResult<T>> {
    QaPair::new(f.clone(), g.clone())?.alpha_div(alpha, pair)
}
