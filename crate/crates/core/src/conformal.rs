//! Bregman divergences and the conformal representation of `I₁`.
//!
//! With `F = f∘g⁻¹` strictly convex, the limit divergence is a conformal
//! Bregman divergence on the `g`-embedded values:
//!
//! ```text
//! I₁^{f,g}[p:q] = Σ w (1/f'(p)) B_F(g(q) : g(p))
//! ```
//!
//! The factor `1/f'(p)` is a point-dependent conformal weight. The induced
//! metric and connections of this representation are not computed here.

use crate::densities::DensityPair;
use crate::divergences::QaPair;
use crate::error::{Error, Result};
use crate::means::{check_positive, Generator, ScalarFn, WeightedMeanSpec};
use crate::scalar::{lit, to_f64, CompensatedSum, Scalar};
use std::fmt;
use std::sync::Arc;

/// A scalar convex function with its derivative.
#[derive(Clone)]
pub struct ConvexGenerator<T: Scalar> {
    id: String,
    eval: ScalarFn<T>,
    derivative: ScalarFn<T>,
}

impl<T: Scalar> fmt::Debug for ConvexGenerator<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("ConvexGenerator").field(&self.id).finish()
    }
}

impl<T: Scalar> ConvexGenerator<T> {
    pub fn new(
        id: impl Into<String>,
        eval: impl Fn(T) -> T + Send + Sync + 'static,
        derivative: impl Fn(T) -> T + Send + Sync + 'static,
    ) -> Self {
        Self {
            id: id.into(),
            eval: Arc::new(eval),
            derivative: Arc::new(derivative),
        }
    }

    pub fn square() -> Self {
        Self::new("square", |u: T| u * u, |u: T| u + u)
    }

    pub fn exp() -> Self {
        Self::new("exp", |u: T| u.exp(), |u: T| u.exp())
    }

    /// `F = f∘g⁻¹`, convex whenever `f` and `g` are strictly comparable.
    pub fn composed(f: &Generator<T>, g: &Generator<T>) -> Self {
        let id = format!("{}∘{}⁻¹", f.id(), g.id());
        let (f1, g1) = (f.clone(), g.clone());
        let (f2, g2) = (f.clone(), g.clone());
        Self::new(
            id,
            move |y| f1.eval(g1.inverse(y)),
            move |y| {
                let u = g2.inverse(y);
                f2.derivative(u) / g2.derivative(u)
            },
        )
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    #[inline]
    pub fn eval(&self, u: T) -> T {
        (self.eval)(u)
    }

    #[inline]
    pub fn derivative(&self, u: T) -> T {
        (self.derivative)(u)
    }
}

fn finite_or_domain<T: Scalar>(v: T, what: &str) -> Result<T> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Domain(format!("{} is not finite", what)))
    }
}

/// `B_F(x : y) = F(x) - F(y) - (x - y) F'(y)`.
pub fn bregman_div<T: Scalar>(big_f: &ConvexGenerator<T>, x: T, y: T) -> Result<T> {
    if x == y {
        return Ok(T::zero());
    }
    let v = big_f.eval(x) - big_f.eval(y) - (x - y) * big_f.derivative(y);
    finite_or_domain(v, &format!("B_{}({}:{})", big_f.id(), x, y))
}

/// `Σ w (1/f'(p)) B_{f∘g⁻¹}(g(q) : g(p))`.
pub fn conformal_i1<T: Scalar>(
    f: &Generator<T>,
    g: &Generator<T>,
    pair: &DensityPair<T>,
) -> Result<T> {
    QaPair::new(f.clone(), g.clone())?;
    let big_f = ConvexGenerator::composed(f, g);
    let mut acc = CompensatedSum::new();
    for (w, p, q) in pair.points() {
        let b = bregman_div(&big_f, g.eval(q), g.eval(p))?;
        acc.add(w * b / f.derivative(p));
    }
    Ok(acc.value())
}

/// `(N_α(F(p), F(q)) - F(M_α(p, q))) / (α(1-α))`, weight `α` on `q`.
pub fn skew_jensen_mn<T: Scalar>(
    big_f: &ConvexGenerator<T>,
    m: &WeightedMeanSpec<T>,
    n: &WeightedMeanSpec<T>,
    alpha: T,
    p: T,
    q: T,
) -> Result<T> {
    if !(alpha > T::zero() && alpha < T::one()) {
        return Err(Error::AlphaOutOfOpenInterval(to_f64(alpha)));
    }
    check_positive(p)?;
    check_positive(q)?;
    if p == q {
        return Ok(T::zero());
    }
    let (fp, fq) = (big_f.eval(p), big_f.eval(q));
    let nv = if n.generator().is_some_and(|g| g.is_affine()) {
        n.eval_unchecked(alpha, fp, fq)
    } else {
        n.eval(alpha, fp, fq)?
    };
    let v = (nv - big_f.eval(m.eval(alpha, p, q)?)) / (alpha * (T::one() - alpha));
    finite_or_domain(v, "skew (M,N)-Jensen divergence")
}

/// Numeric `α → 1⁻` limit of [`skew_jensen_mn`], by Richardson extrapolation.
pub fn skew_jensen_limit<T: Scalar>(
    big_f: &ConvexGenerator<T>,
    m: &WeightedMeanSpec<T>,
    n: &WeightedMeanSpec<T>,
    p: T,
    q: T,
) -> Result<T> {
    let h = lit::<T>(1e-5);
    let one = T::one();
    let j1 = skew_jensen_mn(big_f, m, n, one - h, p, q)?;
    let j2 = skew_jensen_mn(big_f, m, n, one - h - h, p, q)?;
    Ok(j1 + j1 - j2)
}

fn check_mn_args<T: Scalar>(
    g: &Generator<T>,
    big_f: &ConvexGenerator<T>,
    p: T,
    q: T,
) -> Result<(T, T)> {
    check_positive(p)?;
    check_positive(q)?;
    let (fp, fq) = (big_f.eval(p), big_f.eval(q));
    let needs_positive = !(g.is_affine());
    if !(fp.is_finite() && fq.is_finite())
        || (needs_positive && (fp <= T::zero() || fq <= T::zero()))
    {
        return Err(Error::Domain(format!(
            "{} does not map ({}, {}) into the domain of {}",
            big_f.id(),
            p,
            q,
            g.id()
        )));
    }
    Ok((fp, fq))
}

/// `(g(F(p)) - g(F(q)))/g'(F(q)) - ((f(p) - f(q))/f'(q)) F'(q)`.
pub fn mn_bregman<T: Scalar>(
    f: &Generator<T>,
    g: &Generator<T>,
    big_f: &ConvexGenerator<T>,
    p: T,
    q: T,
) -> Result<T> {
    let (fp, fq) = check_mn_args(g, big_f, p, q)?;
    if p == q {
        return Ok(T::zero());
    }
    let v = (g.eval(fp) - g.eval(fq)) / g.derivative(fq)
        - (f.eval(p) - f.eval(q)) / f.derivative(q) * big_f.derivative(q);
    finite_or_domain(v, "(M,N)-Bregman divergence")
}

/// `E_g(F(q), F(p)) - E_f(q, p) F'(q)`.
pub fn mn_bregman_e_terms<T: Scalar>(
    f: &Generator<T>,
    g: &Generator<T>,
    big_f: &ConvexGenerator<T>,
    p: T,
    q: T,
) -> Result<T> {
    let (fp, fq) = check_mn_args(g, big_f, p, q)?;
    let v = g.e_term(fq, fp) - f.e_term(q, p) * big_f.derivative(q);
    finite_or_domain(v, "(M,N)-Bregman divergence")
}

/// `(1/g'(F(q))) B_G(f(p) : f(q))` with `G = g∘F∘f⁻¹`.
pub fn mn_bregman_conformal<T: Scalar>(
    f: &Generator<T>,
    g: &Generator<T>,
    big_f: &ConvexGenerator<T>,
    p: T,
    q: T,
) -> Result<T> {
    let (_, fq) = check_mn_args(g, big_f, p, q)?;
    let (f1, g1, h1) = (f.clone(), g.clone(), big_f.clone());
    let (f2, g2, h2) = (f.clone(), g.clone(), big_f.clone());
    let big_g = ConvexGenerator::new(
        "g∘F∘f⁻¹",
        move |y| g1.eval(h1.eval(f1.inverse(y))),
        move |y| {
            let u = f2.inverse(y);
            g2.derivative(h2.eval(u)) * h2.derivative(u) / f2.derivative(u)
        },
    );
    Ok(bregman_div(&big_g, f.eval(p), f.eval(q))? / g.derivative(fq))
}

/// A point of the open probability simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint<T> {
    coords: Vec<T>,
}

impl<T: Scalar> SimplexPoint<T> {
    pub fn new(coords: Vec<T>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::Domain(
                "a simplex point needs at least two coordinates".into(),
            ));
        }
        if let Some(&c) = coords.iter().find(|c| !(**c > T::zero())) {
            return Err(Error::NonPositiveInput(to_f64(c)));
        }
        let total = coords
            .iter()
            .copied()
            .collect::<CompensatedSum<T>>()
            .value();
        if (total - T::one()).abs() > lit(1e-12) {
            return Err(Error::Domain(format!(
                "coordinates sum to {}, not 1",
                total
            )));
        }
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    /// Simplex dimension `d` (one less than the number of coordinates).
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }
}

/// Which point enters the normaliser `Λ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LambdaReading {
    /// `Λ(r) = Σ r_i / L'(r_i)`.
    #[default]
    SelfConsistent,
    /// `Λ = Σ p_i / L'(p_i)`.
    Literal,
}

/// `(1/Λ) Σ E_L(r_i, p_i)`.
///
/// Non-positive for strictly concave `L` (e.g. `log`), non-negative for
/// strictly convex `L`, zero iff `p = r`. Affine `L` gives zero everywhere
/// and is rejected.
pub fn geometric_divergence<T: Scalar>(
    l: &Generator<T>,
    p: &SimplexPoint<T>,
    r: &SimplexPoint<T>,
    reading: LambdaReading,
) -> Result<T> {
    if p.coords.len() != r.coords.len() {
        return Err(Error::DimensionMismatch(p.coords.len(), r.coords.len()));
    }
    if l.is_affine() {
        return Err(Error::DegenerateGenerator(l.id().to_string()));
    }
    let base = match reading {
        LambdaReading::SelfConsistent => r,
        LambdaReading::Literal => p,
    };
    let lambda = base
        .coords
        .iter()
        .map(|&x| x / l.derivative(x))
        .collect::<CompensatedSum<T>>()
        .value();
    let sum = p
        .coords
        .iter()
        .zip(&r.coords)
        .map(|(&pi, &ri)| l.e_term(ri, pi))
        .collect::<CompensatedSum<T>>()
        .value();
    Ok(sum / lambda)
}
