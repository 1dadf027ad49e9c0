//! `(f, g)`-cross-entropy, entropy, Kullback-Leibler and Jeffreys divergences.
//!
//! `I_1^{f,g}[p:q] = h×(p:q) - h(p)` with the additive constant fixed to zero.

use super::QaPair;
use crate::densities::{DensityPair, DiscreteDensity};
use crate::means::Generator;
use crate::scalar::{CompensatedSum, Scalar};
use crate::Result;

fn cross_term<T: Scalar>(f: &Generator<T>, g: &Generator<T>, p: T, q: T) -> T {
    f.eval(q) / f.derivative(p) - g.eval(q) / g.derivative(p)
}

/// `Σ w (f(q)/f'(p) - g(q)/g'(p))`.
pub fn fg_cross_entropy<T: Scalar>(
    f: &Generator<T>,
    g: &Generator<T>,
    pair: &DensityPair<T>,
) -> Result<T> {
    QaPair::new(f.clone(), g.clone())?;
    Ok(pair
        .points()
        .map(|(w, p, q)| w * cross_term(f, g, p, q))
        .collect::<CompensatedSum<T>>()
        .value())
}

/// `Σ w (f(p)/f'(p) - g(p)/g'(p))`, the self cross-entropy.
pub fn fg_entropy<T: Scalar>(
    f: &Generator<T>,
    g: &Generator<T>,
    p: &DiscreteDensity<T>,
) -> Result<T> {
    Ok(p.weights()
        .iter()
        .zip(p.values())
        .map(|(&w, &v)| w * cross_term(f, g, v, v))
        .collect::<CompensatedSum<T>>()
        .value())
}

/// `KL_{f,g}[p:q] = h×(p:q) - h(p)`.
pub fn fg_kl<T: Scalar>(f: &Generator<T>, g: &Generator<T>, pair: &DensityPair<T>) -> Result<T> {
    Ok(fg_cross_entropy(f, g, pair)? - fg_entropy(f, g, &pair.p)?)
}

/// `KL_{f,g}[p:q] + KL_{f,g}[q:p]`.
pub fn fg_jeffreys<T: Scalar>(
    f: &Generator<T>,
    g: &Generator<T>,
    pair: &DensityPair<T>,
) -> Result<T> {
    Ok(fg_kl(f, g, pair)? + fg_kl(f, g, &pair.swapped())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divergences::{extended_kl, qa_alpha_div};
    use crate::Error;

    fn gen(id: &str) -> Generator<f64> {
        Generator::from_id(id).unwrap()
    }

    fn pair() -> DensityPair<f64> {
        DensityPair::counting(vec![0.4, 1.3, 2.2], vec![0.9, 0.6, 2.5]).unwrap()
    }

    #[test]
    fn shannon_cross_entropy_and_entropy() {
        let (a, g) = (gen("identity"), gen("log"));
        let pr = pair();
        let want: f64 = pr.points().map(|(w, p, q)| w * (q - p * q.ln())).sum();
        assert!((fg_cross_entropy(&a, &g, &pr).unwrap() - want).abs() < 1e-14);
        let want: f64 = pr.points().map(|(w, p, _)| w * (p - p * p.ln())).sum();
        assert!((fg_entropy(&a, &g, &pr.p).unwrap() - want).abs() < 1e-14);

        let one = DensityPair::counting(vec![1.0], vec![1.0]).unwrap();
        assert_eq!(fg_cross_entropy(&a, &g, &one).unwrap(), 1.0);
        assert_eq!(fg_entropy(&a, &g, &one.p).unwrap(), 1.0);
    }

    #[test]
    fn uniform_entropy_is_one_plus_log_n() {
        let n = 7;
        let p = DiscreteDensity::counting(vec![1.0 / n as f64; n]).unwrap();
        let h = fg_entropy(&gen("identity"), &gen("log"), &p).unwrap();
        assert!((h - (1.0 + (n as f64).ln())).abs() < 1e-14);
    }

    #[test]
    fn self_cross_entropy_is_entropy() {
        let pr = pair();
        let diag = DensityPair::new(pr.p.clone(), pr.p.clone()).unwrap();
        let (f, g) = (gen("identity"), gen("recip"));
        assert_eq!(
            fg_cross_entropy(&f, &g, &diag).unwrap(),
            fg_entropy(&f, &g, &pr.p).unwrap()
        );
    }

    #[test]
    fn kl_matches_limit_divergence() {
        let pr = pair();
        let (a, g) = (gen("identity"), gen("log"));
        let kl = fg_kl(&a, &g, &pr).unwrap();
        assert!((kl - extended_kl(&pr)).abs() <= 1e-13 * kl);
        let h = gen("recip");
        let kl = fg_kl(
            &a,
            &h,
            &DensityPair::counting(vec![2.0], vec![1.0]).unwrap(),
        )
        .unwrap();
        assert!((kl - 1.0).abs() < 1e-14);
        let kl = fg_kl(&a, &h, &pr).unwrap();
        let i1 = qa_alpha_div(&a, &h, 1.0, &pr).unwrap().value;
        assert!((kl - i1).abs() <= 1e-12 * i1);
    }

    #[test]
    fn jeffreys_is_symmetric() {
        let pr = pair();
        let (f, g) = (gen("pow:2"), gen("log"));
        assert_eq!(
            fg_jeffreys(&f, &g, &pr).unwrap(),
            fg_jeffreys(&f, &g, &pr.swapped()).unwrap()
        );
    }

    #[test]
    fn cross_entropy_requires_comparable_pair() {
        assert!(matches!(
            fg_cross_entropy(&gen("log"), &gen("identity"), &pair()),
            Err(Error::NotComparable(_))
        ));
    }
}
