//! Strictly increasing generators of quasi-arithmetic means on `(0, ∞)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// Shared scalar function.
pub type ScalarFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

#[derive(Clone)]
enum Inverse<T> {
    Analytic(ScalarFn<T>),
    /// Bisection on a declared bracket `[lo, hi] ⊂ (0, ∞)`.
    Bisection {
        lo: T,
        hi: T,
    },
}

#[derive(Clone)]
enum Kind<T> {
    Identity,
    Log,
    /// `-1/u`, the increasing form of the harmonic generator.
    Recip,
    /// `sign(r) u^r`, `r != 0`.
    Power(T),
    Custom {
        eval: ScalarFn<T>,
        inverse: Inverse<T>,
        derivative: ScalarFn<T>,
    },
}

/// A strictly increasing, differentiable function `f: (0, ∞) → ℝ` together with
/// its inverse and derivative.
///
/// Decreasing generators are normalized to increasing ones; the induced mean is
/// unchanged because `M^{-f} = M^f`.
#[derive(Clone)]
pub struct Generator<T: Scalar> {
    id: String,
    kind: Kind<T>,
}

impl<T: Scalar> fmt::Debug for Generator<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Generator").field("id", &self.id).finish()
    }
}

impl<T: Scalar> Generator<T> {
    /// `f_A(u) = u`, arithmetic mean.
    pub fn identity() -> Self {
        Self {
            id: "identity".into(),
            kind: Kind::Identity,
        }
    }

    /// `f_G(u) = log u`, geometric mean.
    pub fn log() -> Self {
        Self {
            id: "log".into(),
            kind: Kind::Log,
        }
    }

    /// `f_H(u) = -1/u`, harmonic mean.
    pub fn recip() -> Self {
        Self {
            id: "recip".into(),
            kind: Kind::Recip,
        }
    }

    /// `pow_r(u) = sign(r) u^r`; `r = 0` yields [`Generator::log`].
    pub fn power(r: T) -> Self {
        if r == T::zero() {
            return Self::log();
        }
        if r == T::one() {
            return Self {
                id: "pow:1".into(),
                kind: Kind::Identity,
            };
        }
        Self {
            id: format!("pow:{}", r),
            kind: Kind::Power(r),
        }
    }

    /// User generator with analytic inverse and derivative.
    pub fn custom(
        id: impl Into<String>,
        eval: impl Fn(T) -> T + Send + Sync + 'static,
        inverse: impl Fn(T) -> T + Send + Sync + 'static,
        derivative: impl Fn(T) -> T + Send + Sync + 'static,
    ) -> Self {
        Self {
            id: id.into(),
            kind: Kind::Custom {
                eval: Arc::new(eval),
                inverse: Inverse::Analytic(Arc::new(inverse)),
                derivative: Arc::new(derivative),
            },
        }
    }

    /// User generator whose inverse is found by bisection on `[lo, hi]`.
    pub fn custom_bisection(
        id: impl Into<String>,
        eval: impl Fn(T) -> T + Send + Sync + 'static,
        derivative: impl Fn(T) -> T + Send + Sync + 'static,
        lo: T,
        hi: T,
    ) -> Result<Self> {
        if !(lo > T::zero() && hi > lo && hi.is_finite()) {
            return Err(Error::BadGridSpec(format!(
                "bisection bracket [{}, {}] must satisfy 0 < lo < hi < inf",
                lo, hi
            )));
        }
        Ok(Self {
            id: id.into(),
            kind: Kind::Custom {
                eval: Arc::new(eval),
                inverse: Inverse::Bisection { lo, hi },
                derivative: Arc::new(derivative),
            },
        })
    }

    /// Registry lookup: `identity`, `log`, `recip`, `pow:<r>`.
    pub fn from_id(id: &str) -> Result<Self> {
        match id.trim() {
            "identity" | "A" => Ok(Self::identity()),
            "log" | "G" => Ok(Self::log()),
            "recip" | "H" => Ok(Self::recip()),
            other => {
                let r = other
                    .strip_prefix("pow:")
                    .and_then(|r| r.parse::<T>().ok())
                    .filter(|r| r.is_finite())
                    .ok_or_else(|| Error::UnknownGenerator(other.to_string()))?;
                Ok(Self::power(r))
            }
        }
    }

    /// `a f + b` for `a > 0`; induces the same mean as `f`.
    pub fn affine(&self, a: T, b: T) -> Result<Self> {
        if !(a > T::zero()) {
            return Err(Error::Domain(format!(
                "affine scale {} must be positive",
                a
            )));
        }
        let (f1, f2, f3) = (self.clone(), self.clone(), self.clone());
        Ok(Self::custom(
            format!("{}*{}+{}", a, self.id, b),
            move |u| a * f1.eval(u) + b,
            move |v| f2.inverse((v - b) / a),
            move |u| a * f3.derivative(u),
        ))
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// True for generators affine in `u`; their comparability pairs are degenerate.
    pub fn is_affine(&self) -> bool {
        matches!(self.kind, Kind::Identity)
    }

    pub fn eval(&self, u: T) -> T {
        match &self.kind {
            Kind::Identity => u,
            Kind::Log => u.ln(),
            Kind::Recip => -u.recip(),
            Kind::Power(r) => {
                if *r > T::zero() {
                    u.powf(*r)
                } else {
                    -u.powf(*r)
                }
            }
            Kind::Custom { eval, .. } => eval(u),
        }
    }

    pub fn inverse(&self, v: T) -> T {
        match &self.kind {
            Kind::Identity => v,
            Kind::Log => v.exp(),
            Kind::Recip => -v.recip(),
            Kind::Power(r) => {
                if *r > T::zero() {
                    v.powf(r.recip())
                } else {
                    (-v).powf(r.recip())
                }
            }
            Kind::Custom { inverse, eval, .. } => match inverse {
                Inverse::Analytic(inv) => inv(v),
                Inverse::Bisection { lo, hi } => bisect(eval.as_ref(), v, *lo, *hi),
            },
        }
    }

    pub fn derivative(&self, u: T) -> T {
        match &self.kind {
            Kind::Identity => T::one(),
            Kind::Log => u.recip(),
            Kind::Recip => (u * u).recip(),
            Kind::Power(r) => r.abs() * u.powf(*r - T::one()),
            Kind::Custom { derivative, .. } => derivative(u),
        }
    }

    /// Weighted quasi-arithmetic mean `f⁻¹((1-α) f(x) + α f(y))` without input validation.
    ///
    /// Exactly reflexive and clamped to `[min(x,y), max(x,y)]`.
    #[inline]
    pub fn mean(&self, alpha: T, x: T, y: T) -> T {
        if x == y {
            return x;
        }
        if alpha == T::zero() {
            return x;
        }
        if alpha == T::one() {
            return y;
        }
        let m = match &self.kind {
            Kind::Identity => (T::one() - alpha) * x + alpha * y,
            _ => {
                let (fx, fy) = (self.eval(x), self.eval(y));
                self.inverse((T::one() - alpha) * fx + alpha * fy)
            }
        };
        if m.is_nan() {
            return m;
        }
        m.max(x.min(y)).min(x.max(y))
    }

    /// `E_f(p, q) = (f(q) - f(p)) / f'(p)` without input validation.
    #[inline]
    pub fn e_term(&self, p: T, q: T) -> T {
        if p == q {
            return T::zero();
        }
        match &self.kind {
            Kind::Identity => q - p,
            Kind::Log => p * (q / p).ln(),
            Kind::Recip => p - p * p / q,
            _ => (self.eval(q) - self.eval(p)) / self.derivative(p),
        }
    }
}

fn bisect<T: Scalar>(eval: &(dyn Fn(T) -> T + Send + Sync), target: T, lo: T, hi: T) -> T {
    let (mut lo, mut hi) = (lo, hi);
    let (flo, fhi) = (eval(lo), eval(hi));
    if target < flo || target > fhi {
        return T::nan();
    }
    if target == flo {
        return lo;
    }
    if target == fhi {
        return hi;
    }
    let tol = lit::<T>(1e-14);
    for _ in 0..400 {
        // geometric midpoint keeps wide positive brackets balanced
        let mid = (lo * hi).sqrt();
        let mid = if mid > lo && mid < hi {
            mid
        } else {
            (lo + hi) / lit(2.0)
        };
        if eval(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= tol * hi {
            break;
        }
    }
    (lo + hi) / lit(2.0)
}
