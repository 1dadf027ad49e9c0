use thiserror::Error;

/// Sampled triple `a < b < c` (in the transformed coordinate) at which
/// `h(b)` failed to lie strictly below the chord through `(a, h(a))` and `(c, h(c))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexityWitness {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub ha: f64,
    pub hb: f64,
    pub hc: f64,
}

impl ConvexityWitness {
    /// Value of the chord through `(a, h(a))`, `(c, h(c))` evaluated at `b`.
    pub fn chord_at_b(&self) -> f64 {
        ((self.c - self.b) * self.ha + (self.b - self.a) * self.hc) / (self.c - self.a)
    }
}

impl std::fmt::Display for ConvexityWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "a={} b={} c={} h(a)={} h(b)={} h(c)={} chord(b)={}",
            self.a,
            self.b,
            self.c,
            self.ha,
            self.hb,
            self.hc,
            self.chord_at_b()
        )
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-positive input: {0}")]
    NonPositiveInput(f64),
    #[error("alpha {0} outside [0, 1]")]
    AlphaOutOfRange(f64),
    #[error("alpha {0} outside the open interval (0, 1)")]
    AlphaOutOfOpenInterval(f64),
    #[error("comparability grid needs at least 3 strictly increasing positive points, got {0}")]
    GridTooSmall(usize),
    #[error("means are not strictly comparable: {0}")]
    NotComparable(ConvexityWitness),
    #[error("densities are not aligned: {0}")]
    MisalignedSupport(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("non-positive density value at row {row}")]
    NonPositiveValue { row: usize },
    #[error("non-positive base-measure weight at row {row}")]
    NonPositiveWeight { row: usize },
    #[error("duplicate support label {0:?}")]
    DuplicateSupportLabel(String),
    #[error("bad grid specification: {0}")]
    BadGridSpec(String),
    #[error("beta_A {0} outside (-1, 1]")]
    BetaOutOfRange(f64),
    #[error("power pair requires r > s, got r={r} s={s}")]
    BadPowerPair { r: f64, s: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("degenerate generator: {0}")]
    DegenerateGenerator(String),
    #[error("unknown generator id {0:?}")]
    UnknownGenerator(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
