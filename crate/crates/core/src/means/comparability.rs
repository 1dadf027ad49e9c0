//! Sampled certificate for strict comparability of two quasi-arithmetic means.
//!
//! `M^f_α ≥ M^g_α` with equality only on the diagonal holds when `h = f∘g⁻¹` is
//! strictly convex. The check below samples `h` on the image of a grid under `g`
//! and verifies the strict chord inequality on every adjacent triple. It is a
//! certificate on the samples, not a proof.

use super::Generator;
use crate::error::{ConvexityWitness, Error, Result};
use crate::scalar::{lit, to_f64, Scalar};

pub const DEFAULT_GRID_LO: f64 = 1e-3;
pub const DEFAULT_GRID_HI: f64 = 1e3;
pub const DEFAULT_GRID_POINTS: usize = 256;
const MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum Comparability {
    Comparable,
    NotComparable(ConvexityWitness),
}

impl Comparability {
    pub fn is_comparable(&self) -> bool {
        matches!(self, Comparability::Comparable)
    }

    /// Converts a failed certificate into [`Error::NotComparable`].
    pub fn into_result(self) -> Result<()> {
        match self {
            Comparability::Comparable => Ok(()),
            Comparability::NotComparable(w) => Err(Error::NotComparable(w)),
        }
    }
}

/// `n` logarithmically spaced points on `[lo, hi]`, endpoints included.
pub fn log_grid<T: Scalar>(lo: T, hi: T, n: usize) -> Vec<T> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    let last = T::from_usize(n - 1).unwrap();
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                (a + (b - a) * T::from_usize(i).unwrap() / last).exp()
            }
        })
        .collect()
}

/// 256 log-spaced points on `[1e-3, 1e3]`.
pub fn default_grid<T: Scalar>() -> Vec<T> {
    log_grid(
        lit(DEFAULT_GRID_LO),
        lit(DEFAULT_GRID_HI),
        DEFAULT_GRID_POINTS,
    )
}

pub fn check_strict_comparability<T: Scalar>(
    f: &Generator<T>,
    g: &Generator<T>,
    grid: &[T],
) -> Result<Comparability> {
    if grid.len() < 3 {
        return Err(Error::GridTooSmall(grid.len()));
    }
    if grid.iter().any(|&u| !(u > T::zero() && u.is_finite())) {
        return Err(Error::BadGridSpec(
            "grid points must be positive and finite".into(),
        ));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadGridSpec(
            "grid must be strictly increasing".into(),
        ));
    }

    let t: Vec<T> = grid.iter().map(|&u| g.eval(u)).collect();
    let h: Vec<T> = t.iter().map(|&v| f.eval(g.inverse(v))).collect();
    let margin = lit::<T>(MARGIN);

    for i in 0..grid.len() - 2 {
        let (a, b, c) = (t[i], t[i + 1], t[i + 2]);
        let (ha, hb, hc) = (h[i], h[i + 1], h[i + 2]);
        let witness = || ConvexityWitness {
            a: to_f64(a),
            b: to_f64(b),
            c: to_f64(c),
            ha: to_f64(ha),
            hb: to_f64(hb),
            hc: to_f64(hc),
        };
        if !(a < b && b < c) || !(ha.is_finite() && hb.is_finite() && hc.is_finite()) {
            return Ok(Comparability::NotComparable(witness()));
        }
        let chord = ((c - b) * ha + (b - a) * hc) / (c - a);
        if !(hb < chord - margin * hb.abs()) {
            return Ok(Comparability::NotComparable(witness()));
        }
    }
    Ok(Comparability::Comparable)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(id: &str) -> Generator<f64> {
        Generator::from_id(id).unwrap()
    }

    #[test]
    fn default_grid_shape() {
        let grid: Vec<f64> = default_grid();
        assert_eq!(grid.len(), 256);
        assert_eq!(grid[0], 1e-3);
        assert_eq!(grid[255], 1e3);
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn arithmetic_dominates_geometric() {
        let grid = log_grid(0.1, 10.0, 64);
        assert!(check_strict_comparability(&g("identity"), &g("log"), &grid)
            .unwrap()
            .is_comparable());
    }

    #[test]
    fn reversed_pair_yields_witness_above_chord() {
        let grid = log_grid(0.1, 10.0, 64);
        match check_strict_comparability(&g("log"), &g("identity"), &grid).unwrap() {
            Comparability::NotComparable(w) => {
                assert!(w.a < w.b && w.b < w.c);
                assert!(w.hb >= w.chord_at_b());
            }
            other => panic!("expected witness, got {:?}", other),
        }
    }

    #[test]
    fn square_over_identity_is_comparable() {
        // midpoint brute force on u ↦ u²
        let grid = log_grid(0.5, 8.0, 100);
        for w in grid.windows(2) {
            let m = 0.5 * (w[0] + w[1]);
            assert!(m * m < 0.5 * (w[0] * w[0] + w[1] * w[1]));
        }
        assert!(check_strict_comparability(&g("pow:2"), &g("pow:1"), &grid)
            .unwrap()
            .is_comparable());
    }

    #[test]
    fn same_generator_is_not_strict() {
        let grid: Vec<f64> = default_grid();
        assert!(!check_strict_comparability(&g("log"), &g("log"), &grid)
            .unwrap()
            .is_comparable());
    }

    #[test]
    fn grid_validation() {
        assert!(matches!(
            check_strict_comparability(&g("identity"), &g("log"), &[1.0, 2.0]),
            Err(Error::GridTooSmall(2))
        ));
        assert!(check_strict_comparability(&g("identity"), &g("log"), &[1.0, 3.0, 2.0]).is_err());
        assert!(check_strict_comparability(&g("identity"), &g("log"), &[-1.0, 3.0, 4.0]).is_err());
    }
}
