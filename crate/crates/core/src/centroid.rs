//! Weighted centroids of positive densities under a quasi-arithmetic α-divergence.
//!
//! The objective `Σ_i w_i I_α[p_i : c]` separates over the support, so each
//! coordinate of `c` is a one-dimensional problem. Each sweep takes a damped
//! Newton step per coordinate in `log c` (finite-difference derivatives) and
//! backtracks until that coordinate's term does not increase. The minimiser of
//! each coordinate lies between the smallest and largest input value, and steps
//! are kept inside that bracket.

use crate::densities::{DensityPair, DiscreteDensity};
use crate::divergences::QaPair;
use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, CompensatedSum, Scalar};
use std::str::FromStr;

/// Which argument the centroid occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Side {
    /// `Σ w_i I[c : p_i]`
    Left,
    /// `Σ w_i I[p_i : c]`
    #[default]
    Right,
    /// sum of both sides
    Jeffreys,
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            "jeffreys" => Ok(Side::Jeffreys),
            other => Err(Error::Parse(format!("unknown side {:?}", other))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CentroidOptions<T> {
    pub alpha: T,
    pub side: Side,
    pub max_iter: usize,
    pub tol: T,
}

impl<T: Scalar> CentroidOptions<T> {
    pub fn new(alpha: T) -> Self {
        Self {
            alpha,
            side: Side::Right,
            max_iter: 500,
            tol: lit(1e-10),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CentroidReport<T: Scalar> {
    pub centroid: DiscreteDensity<T>,
    /// Objective before the first sweep and after each sweep.
    pub objective_trace: Vec<T>,
    pub iterations: usize,
    pub converged: bool,
}

impl<T: Scalar> CentroidReport<T> {
    pub fn objective(&self) -> T {
        *self.objective_trace.last().expect("trace is never empty")
    }
}

struct Problem<'a, T: Scalar> {
    qa: &'a QaPair<T>,
    alpha: T,
    side: Side,
    weights: &'a [T],
}

impl<T: Scalar> Problem<'_, T> {
    /// Objective restricted to one support point, without its base-measure weight.
    fn coordinate(&self, column: &[T], c: T) -> T {
        let mut acc = CompensatedSum::new();
        for (&w, &p) in self.weights.iter().zip(column) {
            let v = match self.side {
                Side::Right => self.qa.pointwise(self.alpha, p, c),
                Side::Left => self.qa.pointwise(self.alpha, c, p),
                Side::Jeffreys => {
                    self.qa.pointwise(self.alpha, p, c) + self.qa.pointwise(self.alpha, c, p)
                }
            };
            acc.add(w * v);
        }
        acc.value()
    }

    /// One damped Newton step in `t = log c`, clamped to `[lo, hi]`.
    fn step(&self, column: &[T], t: T, lo: T, hi: T) -> T {
        let h = lit::<T>(1e-4);
        let phi = |t: T| self.coordinate(column, t.exp());
        let f0 = phi(t);
        let (fp, fm) = (phi(t + h), phi(t - h));
        let grad = (fp - fm) / (h + h);
        let curv = (fp - f0 - f0 + fm) / (h * h);
        if grad == T::zero() {
            return t;
        }
        let mut delta = if curv > T::zero() {
            -grad / curv
        } else {
            // wrong curvature: fall back to a bounded descent step
            -grad.signum() * (hi - lo).max(h) * lit(0.5)
        };
        for _ in 0..60 {
            let cand = (t + delta).max(lo).min(hi);
            if cand != t && phi(cand) <= f0 {
                return cand;
            }
            delta = delta * lit(0.5);
        }
        t
    }
}

/// Objective `Σ_i w_i I_α` between each input and `c` on the requested side.
pub fn centroid_objective<T: Scalar>(
    qa: &QaPair<T>,
    densities: &[DiscreteDensity<T>],
    weights: &[T],
    alpha: T,
    side: Side,
    c: &[T],
) -> Result<T> {
    validate(densities, weights, alpha)?;
    if c.len() != densities[0].len() {
        return Err(Error::DimensionMismatch(c.len(), densities[0].len()));
    }
    let problem = Problem {
        qa,
        alpha,
        side,
        weights,
    };
    Ok(objective(
        &problem,
        &columns(densities),
        densities[0].weights(),
        c,
    ))
}

fn validate<T: Scalar>(densities: &[DiscreteDensity<T>], weights: &[T], alpha: T) -> Result<()> {
    let first = densities
        .first()
        .ok_or_else(|| Error::Domain("centroid needs at least one density".into()))?;
    if weights.len() != densities.len() {
        return Err(Error::DimensionMismatch(weights.len(), densities.len()));
    }
    if let Some(row) = weights
        .iter()
        .position(|&w| !(w > T::zero() && w.is_finite()))
    {
        return Err(Error::NonPositiveWeight { row });
    }
    if !(alpha >= T::zero() && alpha <= T::one()) {
        return Err(Error::AlphaOutOfRange(to_f64(alpha)));
    }
    for d in &densities[1..] {
        DensityPair::new(first.clone(), d.clone())?;
    }
    Ok(())
}

fn columns<T: Scalar>(densities: &[DiscreteDensity<T>]) -> Vec<Vec<T>> {
    (0..densities[0].len())
        .map(|k| densities.iter().map(|d| d.values()[k]).collect())
        .collect()
}

fn objective<T: Scalar>(problem: &Problem<'_, T>, cols: &[Vec<T>], mu: &[T], c: &[T]) -> T {
    cols.iter()
        .zip(mu)
        .zip(c)
        .map(|((col, &m), &ck)| m * problem.coordinate(col, ck))
        .collect::<CompensatedSum<T>>()
        .value()
}

/// Minimises `Σ_i w_i I_α[p_i : c]` (or the left/symmetrised objective) over positive `c`.
pub fn qa_centroid<T: Scalar>(
    qa: &QaPair<T>,
    densities: &[DiscreteDensity<T>],
    weights: &[T],
    opts: &CentroidOptions<T>,
) -> Result<CentroidReport<T>> {
    validate(densities, weights, opts.alpha)?;
    let problem = Problem {
        qa,
        alpha: opts.alpha,
        side: opts.side,
        weights,
    };
    let cols = columns(densities);
    let mu = densities[0].weights();
    let total_w = weights
        .iter()
        .copied()
        .collect::<CompensatedSum<T>>()
        .value();

    let brackets: Vec<(T, T)> = cols
        .iter()
        .map(|col| {
            let lo = col.iter().copied().fold(T::infinity(), T::min);
            let hi = col.iter().copied().fold(T::neg_infinity(), T::max);
            (lo, hi)
        })
        .collect();
    // start from the weighted arithmetic mean, which lies in the bracket
    let mut c: Vec<T> = cols
        .iter()
        .zip(&brackets)
        .map(|(col, &(lo, hi))| {
            let m = col
                .iter()
                .zip(weights)
                .map(|(&p, &w)| w * p)
                .collect::<CompensatedSum<T>>()
                .value()
                / total_w;
            m.max(lo).min(hi)
        })
        .collect();

    let mut trace = vec![objective(&problem, &cols, mu, &c)];
    let mut converged = trace[0] == T::zero();
    let mut iterations = 0;
    while !converged && iterations < opts.max_iter {
        iterations += 1;
        let before = c.clone();
        for (k, col) in cols.iter().enumerate() {
            let (lo, hi) = brackets[k];
            if lo < hi {
                let t = c[k].ln();
                let next = problem.step(col, t, lo.ln(), hi.ln());
                if next != t {
                    c[k] = next.exp().max(lo).min(hi);
                }
            }
        }
        let prev = *trace.last().unwrap();
        let cur = objective(&problem, &cols, mu, &c);
        if cur > prev {
            // rounding in the outer sum; no further progress is possible
            c = before;
            converged = true;
            break;
        }
        trace.push(cur);
        converged = prev - cur <= opts.tol * prev.abs() || cur == T::zero();
    }
    let centroid = densities[0].with_values(c)?;
    Ok(CentroidReport {
        centroid,
        objective_trace: trace,
        iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::means::Generator;
    use std::f64::consts::E;

    fn ag() -> QaPair<f64> {
        QaPair::new(Generator::identity(), Generator::log()).unwrap()
    }

    fn dens(v: Vec<f64>) -> DiscreteDensity<f64> {
        DiscreteDensity::counting(v).unwrap()
    }

    #[test]
    fn single_density_is_its_own_centroid() {
        let p = dens(vec![0.3, 2.0, 5.0]);
        let r = qa_centroid(
            &ag(),
            std::slice::from_ref(&p),
            &[1.0],
            &CentroidOptions::new(0.4),
        )
        .unwrap();
        assert_eq!(r.centroid.values(), p.values());
        assert_eq!(r.objective(), 0.0);
        assert!(r.converged);
        let r = qa_centroid(
            &ag(),
            &[p.clone(), p.clone()],
            &[1.0, 3.0],
            &CentroidOptions::new(0.4),
        )
        .unwrap();
        assert_eq!(r.centroid.values(), p.values());
    }

    #[test]
    fn right_kl_centroid_is_the_arithmetic_mean() {
        let (a, b) = (dens(vec![1.0]), dens(vec![E]));
        let r = qa_centroid(&ag(), &[a, b], &[0.5, 0.5], &CentroidOptions::new(1.0)).unwrap();
        assert!(r.converged);
        assert!((r.centroid.values()[0] - 0.5 * (1.0 + E)).abs() < 1e-7);
        assert!(r.objective_trace.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn left_kl_centroid_is_the_geometric_mean() {
        let (a, b) = (dens(vec![1.0, 2.0]), dens(vec![4.0, 0.5]));
        let mut opts = CentroidOptions::new(1.0);
        opts.side = Side::Left;
        let r = qa_centroid(&ag(), &[a, b], &[1.0, 1.0], &opts).unwrap();
        assert!((r.centroid.values()[0] - 2.0).abs() < 1e-7);
        assert!((r.centroid.values()[1] - 1.0).abs() < 1e-7);
    }

    #[test]
    fn trace_is_monotone_for_every_side() {
        let ds = vec![
            dens(vec![0.2, 3.0, 1.0]),
            dens(vec![1.5, 0.7, 9.0]),
            dens(vec![0.9, 2.2, 0.1]),
        ];
        let qa = QaPair::new(Generator::identity(), Generator::recip()).unwrap();
        for side in [Side::Left, Side::Right, Side::Jeffreys] {
            for alpha in [0.0, 0.3, 1.0] {
                let mut opts = CentroidOptions::new(alpha);
                opts.side = side;
                let r = qa_centroid(&qa, &ds, &[1.0, 2.0, 0.5], &opts).unwrap();
                assert!(r.objective_trace.windows(2).all(|w| w[1] <= w[0]));
                assert!(r.converged, "{:?} {}", side, alpha);
                let direct = centroid_objective(
                    &qa,
                    &ds,
                    &[1.0, 2.0, 0.5],
                    alpha,
                    side,
                    r.centroid.values(),
                )
                .unwrap();
                assert!((direct - r.objective()).abs() <= 1e-12 * direct.max(1.0));
            }
        }
    }

    #[test]
    fn input_validation() {
        let p = dens(vec![1.0, 2.0]);
        let q = dens(vec![1.0]);
        let opts = CentroidOptions::new(0.5);
        assert!(matches!(
            qa_centroid(&ag(), &[p.clone(), q], &[1.0, 1.0], &opts),
            Err(Error::MisalignedSupport(_))
        ));
        assert!(qa_centroid(&ag(), std::slice::from_ref(&p), &[1.0, 1.0], &opts).is_err());
        assert!(qa_centroid(&ag(), std::slice::from_ref(&p), &[0.0], &opts).is_err());
        assert!(qa_centroid(&ag(), &[], &[], &opts).is_err());
        assert_eq!("jeffreys".parse::<Side>().unwrap(), Side::Jeffreys);
        assert!("up".parse::<Side>().is_err());
    }
}
