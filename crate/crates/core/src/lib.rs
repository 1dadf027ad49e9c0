//! Generalized α-divergences built from pairs of strictly comparable weighted
//! quasi-arithmetic means.
//!
//! The numerical core is generic over the scalar type (`f32` or `f64`); the
//! `*64` aliases below fix it to `f64`.

// `!(x > 0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod centroid;
pub mod cli;
pub mod conformal;
pub mod densities;
pub mod divergences;
pub mod error;
pub mod means;
pub mod power_family;
pub mod scalar;
pub mod selftest;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Generator64 = means::Generator<f64>;
pub type WeightedMeanSpec64 = means::WeightedMeanSpec<f64>;
pub type DiscreteDensity64 = densities::DiscreteDensity<f64>;
pub type DensityPair64 = densities::DensityPair<f64>;
pub type DivergenceResult64 = divergences::DivergenceResult<f64>;
pub type QaPair64 = divergences::QaPair<f64>;
pub type PowerPair64 = power_family::PowerPair<f64>;
pub type ConvexGenerator64 = conformal::ConvexGenerator<f64>;
pub type CentroidReport64 = centroid::CentroidReport<f64>;
