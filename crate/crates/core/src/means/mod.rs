//! Weighted means on `(0, ∞)`: quasi-arithmetic means, power means, the `E_f`
//! sensitivity terms and the sampled strict-comparability certificate.
//!
//! Weighting convention: `M_α(x, y)` equals `x` at `α = 0` and `y` at `α = 1`.

mod comparability;
mod generator;

use std::fmt;
use std::sync::Arc;

pub use comparability::{
    check_strict_comparability, default_grid, log_grid, Comparability, DEFAULT_GRID_HI,
    DEFAULT_GRID_LO, DEFAULT_GRID_POINTS,
};
pub use generator::{Generator, ScalarFn};

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Scalar};

/// Below this `|r|` the power mean is the weighted geometric mean (with its
/// first-order correction in `r`, exact at `r = 0`).
pub const POWER_GEOMETRIC_THRESHOLD: f64 = 1e-8;
/// Below this `|r|` the power mean is evaluated in a log-space form.
pub const POWER_LOGSPACE_THRESHOLD: f64 = 1e-4;

pub fn check_positive<T: Scalar>(x: T) -> Result<()> {
    if x > T::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveInput(to_f64(x)))
    }
}

pub(crate) fn check_unit_alpha<T: Scalar>(alpha: T) -> Result<()> {
    if alpha >= T::zero() && alpha <= T::one() {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange(to_f64(alpha)))
    }
}

/// `f⁻¹((1-α) f(x) + α f(y))`.
pub fn qam_weighted<T: Scalar>(f: &Generator<T>, alpha: T, x: T, y: T) -> Result<T> {
    check_positive(x)?;
    check_positive(y)?;
    check_unit_alpha(alpha)?;
    let m = f.mean(alpha, x, y);
    if m.is_finite() {
        Ok(m)
    } else {
        Err(Error::Domain(format!(
            "generator {} could not invert at alpha={} x={} y={}",
            f.id(),
            alpha,
            x,
            y
        )))
    }
}

/// Weighted power mean `((1-α) x^r + α y^r)^{1/r}`, geometric for `r → 0`.
pub fn power_mean<T: Scalar>(r: T, alpha: T, x: T, y: T) -> Result<T> {
    check_positive(x)?;
    check_positive(y)?;
    check_unit_alpha(alpha)?;
    Ok(power_mean_unchecked(r, alpha, x, y))
}

pub(crate) fn power_mean_unchecked<T: Scalar>(r: T, alpha: T, x: T, y: T) -> T {
    if x == y {
        return x;
    }
    if alpha == T::zero() {
        return x;
    }
    if alpha == T::one() {
        return y;
    }
    let one = T::one();
    let m = if r.abs() <= lit(POWER_GEOMETRIC_THRESHOLD) {
        // geometric mean times its first-order correction in r
        let (lx, ly) = (x.ln(), y.ln());
        let d = ly - lx;
        let spread = alpha * (one - alpha) * d * d / lit(2.0);
        ((one - alpha) * lx + alpha * ly + r * spread).exp()
    } else if r.abs() < lit(POWER_LOGSPACE_THRESHOLD) {
        // log((1-α)e^a + αe^b) = log1p((1-α)expm1(a) + α expm1(b))
        let (a, b) = (r * x.ln(), r * y.ln());
        let s = ((one - alpha) * a.exp_m1() + alpha * b.exp_m1()).ln_1p();
        (s / r).exp()
    } else {
        let direct = ((one - alpha) * x.powf(r) + alpha * y.powf(r)).powf(r.recip());
        if direct.is_finite() && direct > T::zero() {
            direct
        } else {
            let (a, b) = (r * x.ln(), r * y.ln());
            let top = a.max(b);
            let s = ((one - alpha) * (a - top).exp() + alpha * (b - top).exp()).ln() + top;
            (s / r).exp()
        }
    };
    m.max(x.min(y)).min(x.max(y))
}

/// `E_f(p, q) = (f(q) - f(p)) / f'(p)`.
pub fn e_term<T: Scalar>(f: &Generator<T>, p: T, q: T) -> Result<T> {
    check_positive(p)?;
    check_positive(q)?;
    Ok(f.e_term(p, q))
}

/// `E_r(p, q)` for the power generator: `(q^r - p^r)/(r p^{r-1})`, or `p log(q/p)` at `r = 0`.
pub fn e_term_power<T: Scalar>(r: T, p: T, q: T) -> Result<T> {
    check_positive(p)?;
    check_positive(q)?;
    Ok(e_term_power_unchecked(r, p, q))
}

pub(crate) fn e_term_power_unchecked<T: Scalar>(r: T, p: T, q: T) -> T {
    if p == q {
        T::zero()
    } else if r == T::zero() {
        p * (q / p).ln()
    } else {
        // p ((q/p)^r - 1) / r, same value as (q^r - p^r)/(r p^{r-1})
        p * (r * (q / p).ln()).exp_m1() / r
    }
}

/// First-order expansion `p + α E_f(p, q)` of `M^f_α(p, q)` around `α = 0`.
pub fn taylor_qam_approx<T: Scalar>(f: &Generator<T>, alpha: T, p: T, q: T) -> Result<T> {
    check_positive(p)?;
    check_positive(q)?;
    Ok(p + alpha * f.e_term(p, q))
}

/// Closed-form weighted mean with a user-supplied body.
pub type MeanFn<T> = Arc<dyn Fn(T, T, T) -> T + Send + Sync>;

#[derive(Clone)]
pub enum MeanKind<T: Scalar> {
    QuasiArithmetic(Generator<T>),
    Power(T),
    /// Abstract weighted mean `(α, x, y) ↦ M_α(x, y)`.
    Custom {
        id: String,
        mean: MeanFn<T>,
    },
}

/// A weighted mean together with its declared structural properties.
#[derive(Clone)]
pub struct WeightedMeanSpec<T: Scalar> {
    pub kind: MeanKind<T>,
    pub symmetric: bool,
    pub homogeneous: bool,
}

impl<T: Scalar> fmt::Debug for WeightedMeanSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightedMeanSpec")
            .field("id", &self.id())
            .field("symmetric", &self.symmetric)
            .field("homogeneous", &self.homogeneous)
            .finish()
    }
}

impl<T: Scalar> WeightedMeanSpec<T> {
    /// Quasi-arithmetic mean; symmetric, homogeneous only for power/log generators.
    pub fn quasi_arithmetic(f: Generator<T>) -> Self {
        let homogeneous =
            matches!(f.id(), "identity" | "log" | "recip") || f.id().starts_with("pow:");
        Self {
            kind: MeanKind::QuasiArithmetic(f),
            symmetric: true,
            homogeneous,
        }
    }

    pub fn power(r: T) -> Self {
        Self {
            kind: MeanKind::Power(r),
            symmetric: true,
            homogeneous: true,
        }
    }

    pub fn arithmetic() -> Self {
        Self::power(T::one())
    }

    pub fn geometric() -> Self {
        Self::power(T::zero())
    }

    pub fn harmonic() -> Self {
        Self::power(-T::one())
    }

    pub fn custom(
        id: impl Into<String>,
        mean: impl Fn(T, T, T) -> T + Send + Sync + 'static,
        symmetric: bool,
        homogeneous: bool,
    ) -> Self {
        Self {
            kind: MeanKind::Custom {
                id: id.into(),
                mean: Arc::new(mean),
            },
            symmetric,
            homogeneous,
        }
    }

    pub fn id(&self) -> String {
        match &self.kind {
            MeanKind::QuasiArithmetic(f) => format!("qam[{}]", f.id()),
            MeanKind::Power(r) => format!("power[{}]", r),
            MeanKind::Custom { id, .. } => id.clone(),
        }
    }

    /// The quasi-arithmetic generator, when the mean has one.
    pub fn generator(&self) -> Option<Generator<T>> {
        match &self.kind {
            MeanKind::QuasiArithmetic(f) => Some(f.clone()),
            MeanKind::Power(r) => Some(Generator::power(*r)),
            MeanKind::Custom { .. } => None,
        }
    }

    /// `M_α(x, y)` without validation.
    #[inline]
    pub fn eval_unchecked(&self, alpha: T, x: T, y: T) -> T {
        match &self.kind {
            MeanKind::QuasiArithmetic(f) => f.mean(alpha, x, y),
            MeanKind::Power(r) => {
                if *r == T::one() {
                    if x == y {
                        x
                    } else {
                        (T::one() - alpha) * x + alpha * y
                    }
                } else {
                    power_mean_unchecked(*r, alpha, x, y)
                }
            }
            MeanKind::Custom { mean, .. } => mean(alpha, x, y),
        }
    }

    pub fn eval(&self, alpha: T, x: T, y: T) -> Result<T> {
        check_positive(x)?;
        check_positive(y)?;
        check_unit_alpha(alpha)?;
        let m = self.eval_unchecked(alpha, x, y);
        if m.is_finite() {
            Ok(m)
        } else {
            Err(Error::Domain(format!(
                "mean {} not finite at ({}, {})",
                self.id(),
                x,
                y
            )))
        }
    }
}
