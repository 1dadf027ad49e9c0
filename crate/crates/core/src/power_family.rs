//! Homogeneous `(r, s)`-power α-divergences.
//!
//! For `r > s` the weighted power means satisfy `P_r ≥ P_s`, and
//!
//! ```text
//! I^{r,s}_α[p:q] = 1/(α(1-α)) Σ w ((α p^r + (1-α) q^r)^{1/r} - (α p^s + (1-α) q^s)^{1/s})
//! ```
//!
//! with `α` weighting `p`. A zero exponent stands for the geometric mean
//! `p^α q^{1-α}`. The endpoints use `Σ w (E_r(p,q) - E_s(p,q))` and its reverse.
//!
//! Power means are homogeneous, so these divergences are Csiszár f-divergences
//! `Σ w p f_{r,s}(q/p)`.

use crate::densities::DensityPair;
use crate::divergences::{accumulate, DivergenceResult, LIMIT_EPS};
use crate::error::{Error, Result};
use crate::means::{check_positive, e_term_power_unchecked, power_mean_unchecked};
use crate::scalar::{lit, to_f64, CompensatedSum, Scalar};

/// Exponents `(r, s)` with `r > s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerPair<T> {
    r: T,
    s: T,
}

impl<T: Scalar> PowerPair<T> {
    pub fn new(r: T, s: T) -> Result<Self> {
        if !(r > s) || !r.is_finite() || !s.is_finite() {
            return Err(Error::BadPowerPair {
                r: to_f64(r),
                s: to_f64(s),
            });
        }
        Ok(Self { r, s })
    }

    pub fn r(&self) -> T {
        self.r
    }

    pub fn s(&self) -> T {
        self.s
    }

    /// Per-point integrand of `I^{r,s}_α[p:q]`.
    #[inline]
    pub fn pointwise(&self, alpha: T, p: T, q: T) -> T {
        let one = T::one();
        if p == q {
            T::zero()
        } else if (one - alpha).abs() <= lit(LIMIT_EPS) {
            e_term_power_unchecked(self.r, p, q) - e_term_power_unchecked(self.s, p, q)
        } else if alpha.abs() <= lit(LIMIT_EPS) {
            e_term_power_unchecked(self.r, q, p) - e_term_power_unchecked(self.s, q, p)
        } else {
            // weight α on p is weight 1-α on q
            let beta = one - alpha;
            power_mean_gap(self.r, self.s, beta, p, q) / (alpha * beta)
        }
    }
}

/// `e^x - 1 - x`, accurate for small `x`.
fn expm1_minus_x<T: Scalar>(x: T) -> T {
    if x.abs() >= lit(0.5) {
        return x.exp_m1() - x;
    }
    let mut term = x * x / lit(2.0);
    let mut sum = term;
    for k in 3..30 {
        term = term * x / lit(k as f64);
        let next = sum + term;
        if next == sum {
            break;
        }
        sum = next;
    }
    sum
}

/// `log(P_r(p, q) / G)` with `G = p^α q^β`, `β` the weight on `q`, `t = log(q/p)`.
fn log_power_over_geometric<T: Scalar>(r: T, beta: T, t: T) -> T {
    if r == T::zero() {
        return T::zero();
    }
    let alpha = T::one() - beta;
    // log(α e^a + β e^b) with αa + βb = 0
    let (a, b) = (-r * beta * t, r * alpha * t);
    (alpha * expm1_minus_x(a) + beta * expm1_minus_x(b)).ln_1p() / r
}

/// `P_r(p, q) - P_s(p, q)`, measured from the weighted geometric mean so the
/// shared first-order term never has to cancel.
fn power_mean_gap<T: Scalar>(r: T, s: T, beta: T, p: T, q: T) -> T {
    let u = q / p;
    let t = if u.is_normal() && u.is_finite() {
        u.ln()
    } else {
        q.ln() - p.ln()
    };
    let (lr, ls) = (
        log_power_over_geometric(r, beta, t),
        log_power_over_geometric(s, beta, t),
    );
    let gap = p * (beta * t + ls).exp() * (lr - ls).exp_m1();
    if gap.is_finite() {
        gap
    } else {
        power_mean_unchecked(r, beta, p, q) - power_mean_unchecked(s, beta, p, q)
    }
}

pub fn power_alpha_div<T: Scalar>(
    rs: &PowerPair<T>,
    alpha: T,
    pair: &DensityPair<T>,
) -> Result<DivergenceResult<T>> {
    if !(alpha >= T::zero() && alpha <= T::one()) {
        return Err(Error::AlphaOutOfRange(to_f64(alpha)));
    }
    let eps = lit::<T>(LIMIT_EPS);
    let limit = alpha <= eps || T::one() - alpha <= eps;
    Ok(accumulate(pair, limit, |p, q| rs.pointwise(alpha, p, q)))
}

/// A convex `f` with `f(1) = 0`, used through its perspective `p f(q/p)`.
pub trait CsiszarFunction<T: Scalar> {
    fn eval(&self, u: T) -> T;

    /// `p f(q/p)`. Extreme ratios are formed in log-space.
    fn perspective(&self, p: T, q: T) -> T {
        let u = q / p;
        if u > lit(1e100) || u < lit(1e-100) {
            p * self.eval((q.ln() - p.ln()).exp())
        } else {
            p * self.eval(u)
        }
    }
}

impl<T: Scalar, F: Fn(T) -> T> CsiszarFunction<T> for F {
    fn eval(&self, u: T) -> T {
        self(u)
    }
}

/// `f_{r,s}(u) = (P^r_α(1,u) - P^s_α(1,u)) / (α(1-α))`, weight `α` on the `1`.
#[derive(Debug, Clone, Copy)]
pub struct RsGenerator<T> {
    pub rs: PowerPair<T>,
    pub alpha: T,
}

impl<T: Scalar> RsGenerator<T> {
    pub fn new(rs: PowerPair<T>, alpha: T) -> Result<Self> {
        if !(alpha > T::zero() && alpha < T::one()) {
            return Err(Error::AlphaOutOfOpenInterval(to_f64(alpha)));
        }
        Ok(Self { rs, alpha })
    }
}

impl<T: Scalar> CsiszarFunction<T> for RsGenerator<T> {
    fn eval(&self, u: T) -> T {
        let one = T::one();
        let beta = one - self.alpha;
        power_mean_gap(self.rs.r, self.rs.s, beta, one, u) / (self.alpha * beta)
    }

    fn perspective(&self, p: T, q: T) -> T {
        let u = q / p;
        if u > lit(1e100) || u < lit(1e-100) {
            // homogeneity: p f(q/p) = (P_r(p,q) - P_s(p,q)) / (α(1-α))
            let beta = T::one() - self.alpha;
            power_mean_gap(self.rs.r, self.rs.s, beta, p, q) / (self.alpha * beta)
        } else {
            p * self.eval(u)
        }
    }
}

/// `f_{r,s}(u)` for `α ∈ (0, 1)`, `u > 0`.
pub fn csiszar_generator_rs<T: Scalar>(rs: &PowerPair<T>, alpha: T, u: T) -> Result<T> {
    check_positive(u)?;
    Ok(RsGenerator::new(*rs, alpha)?.eval(u))
}

/// Csiszár f-divergence `Σ w p f(q/p)`.
pub fn csiszar_div<T: Scalar>(f: &impl CsiszarFunction<T>, pair: &DensityPair<T>) -> T {
    pair.points()
        .map(|(w, p, q)| w * f.perspective(p, q))
        .collect::<CompensatedSum<T>>()
        .value()
}

/// Relative homogeneity defect `|I[λp:λq] - λ I[p:q]| / (λ I[p:q])`.
pub fn homogeneity_check<T: Scalar>(
    rs: &PowerPair<T>,
    alpha: T,
    pair: &DensityPair<T>,
    lambda: T,
) -> Result<T> {
    check_positive(lambda)?;
    let base = power_alpha_div(rs, alpha, pair)?.value;
    let scaled = power_alpha_div(rs, alpha, &pair.scaled(lambda)?)?.value;
    let target = lambda * base;
    if scaled == target {
        return Ok(T::zero());
    }
    Ok((scaled - target).abs() / target.abs())
}
