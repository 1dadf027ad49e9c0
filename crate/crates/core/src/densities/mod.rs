//! Positive densities on a finite support, carried with per-point base-measure
//! weights so that every integral becomes a finite weighted sum.
//!
//! Continuous densities are represented by sampling on a quadrature grid and
//! storing the quadrature weights; counting measure uses unit weights.

mod cauchy;
mod io;

use std::collections::HashSet;

pub use cauchy::{
    cauchy_ah_alpha_closed_form, cauchy_ah_alpha_quadrature, cauchy_grid, CauchyComparison,
};
pub use io::{
    load_density, parse_density, save_density, write_density, DensityFormat, LoadOptions, Loaded,
};

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, CompensatedSum, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDensity<T: Scalar> {
    support: Vec<String>,
    values: Vec<T>,
    weights: Vec<T>,
}

impl<T: Scalar> DiscreteDensity<T> {
    pub fn new(support: Vec<String>, values: Vec<T>, weights: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::BadGridSpec(
                "density needs at least one point".into(),
            ));
        }
        if support.len() != values.len() || weights.len() != values.len() {
            return Err(Error::MisalignedSupport(format!(
                "support/values/weights lengths {}/{}/{}",
                support.len(),
                values.len(),
                weights.len()
            )));
        }
        if let Some(row) = values
            .iter()
            .position(|&v| !(v > T::zero() && v.is_finite()))
        {
            return Err(Error::NonPositiveValue { row: row + 1 });
        }
        if let Some(row) = weights
            .iter()
            .position(|&w| !(w > T::zero() && w.is_finite()))
        {
            return Err(Error::NonPositiveWeight { row: row + 1 });
        }
        let mut seen = HashSet::with_capacity(support.len());
        for label in &support {
            if !seen.insert(label.as_str()) {
                return Err(Error::DuplicateSupportLabel(label.clone()));
            }
        }
        Ok(Self {
            support,
            values,
            weights,
        })
    }

    /// Counting measure on labels `0..n`.
    pub fn counting(values: Vec<T>) -> Result<Self> {
        let support = (0..values.len()).map(|i| i.to_string()).collect();
        let weights = vec![T::one(); values.len()];
        Self::new(support, values, weights)
    }

    /// Same support and weights, new values.
    pub fn with_values(&self, values: Vec<T>) -> Result<Self> {
        Self::new(self.support.clone(), values, self.weights.clone())
    }

    /// Pointwise scaling `λ p`.
    pub fn scaled(&self, lambda: T) -> Result<Self> {
        self.with_values(self.values.iter().map(|&v| v * lambda).collect())
    }

    pub fn support(&self) -> &[String] {
        &self.support
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `Σ w_i p_i`.
    pub fn mass(&self) -> T {
        self.values
            .iter()
            .zip(&self.weights)
            .map(|(&v, &w)| v * w)
            .collect::<CompensatedSum<T>>()
            .value()
    }
}

/// Two densities on the same support with the same base-measure weights.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityPair<T: Scalar> {
    pub p: DiscreteDensity<T>,
    pub q: DiscreteDensity<T>,
}

impl<T: Scalar> DensityPair<T> {
    pub fn new(p: DiscreteDensity<T>, q: DiscreteDensity<T>) -> Result<Self> {
        if p.len() != q.len() {
            return Err(Error::MisalignedSupport(format!(
                "lengths {} vs {}",
                p.len(),
                q.len()
            )));
        }
        if let Some(i) = (0..p.len()).find(|&i| p.support[i] != q.support[i]) {
            return Err(Error::MisalignedSupport(format!(
                "label {:?} vs {:?} at row {}",
                p.support[i],
                q.support[i],
                i + 1
            )));
        }
        if let Some(i) = (0..p.len()).find(|&i| p.weights[i] != q.weights[i]) {
            return Err(Error::MisalignedSupport(format!(
                "weight {} vs {} at row {}",
                to_f64(p.weights[i]),
                to_f64(q.weights[i]),
                i + 1
            )));
        }
        Ok(Self { p, q })
    }

    /// Two counting-measure densities.
    pub fn counting(p: Vec<T>, q: Vec<T>) -> Result<Self> {
        Self::new(DiscreteDensity::counting(p)?, DiscreteDensity::counting(q)?)
    }

    /// `[q : p]`.
    pub fn swapped(&self) -> Self {
        Self {
            p: self.q.clone(),
            q: self.p.clone(),
        }
    }

    /// `[λp : λq]`.
    pub fn scaled(&self, lambda: T) -> Result<Self> {
        Ok(Self {
            p: self.p.scaled(lambda)?,
            q: self.q.scaled(lambda)?,
        })
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// `(w_i, p_i, q_i)` triples.
    pub fn points(&self) -> impl Iterator<Item = (T, T, T)> + '_ {
        self.p
            .weights
            .iter()
            .zip(&self.p.values)
            .zip(&self.q.values)
            .map(|((&w, &p), &q)| (w, p, q))
    }
}

/// `Σ_i w_i · integrand(p_i, q_i)` with compensated accumulation.
pub fn integrate_pointwise<T: Scalar>(pair: &DensityPair<T>, integrand: impl Fn(T, T) -> T) -> T {
    pair.points()
        .map(|(w, p, q)| w * integrand(p, q))
        .collect::<CompensatedSum<T>>()
        .value()
}

/// Trapezoid nodes and weights on `[lo, hi]` with `n` points.
pub fn trapezoid_grid<T: Scalar>(lo: T, hi: T, n: usize) -> Result<(Vec<T>, Vec<T>)> {
    if n < 2 || !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::BadGridSpec(format!(
            "trapezoid grid [{}, {}] with {} points",
            lo, hi, n
        )));
    }
    let steps = T::from_usize(n - 1).unwrap();
    let h = (hi - lo) / steps;
    let nodes = (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                lo + h * T::from_usize(i).unwrap()
            }
        })
        .collect();
    let half = h / lit(2.0);
    let weights = (0..n)
        .map(|i| if i == 0 || i == n - 1 { half } else { h })
        .collect();
    Ok((nodes, weights))
}

/// Samples `density` on a trapezoid grid over `[lo, hi]`.
pub fn sample_on_grid<T: Scalar>(
    lo: T,
    hi: T,
    n: usize,
    density: impl Fn(T) -> T,
) -> Result<DiscreteDensity<T>> {
    let (nodes, weights) = trapezoid_grid(lo, hi, n)?;
    let values = nodes.iter().map(|&x| density(x)).collect();
    let support = nodes.iter().map(|x| x.to_string()).collect();
    DiscreteDensity::new(support, values, weights)
}
