use crate::scalar::{lit, Scalar};

/// Convention in which an α value is expressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaConvention {
    /// `α ∈ [0, 1]`.
    Standard,
    /// `α_A = 1 - 2α ∈ [-1, 1]`.
    Amari,
}

/// Divergence weight in either convention.
///
/// The value is stored in the convention it was created in; conversions are
/// computed on read, so switching conventions back and forth never changes the
/// stored bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaParam<T> {
    origin: T,
    origin_convention: AlphaConvention,
    convention: AlphaConvention,
}

impl<T: Scalar> AlphaParam<T> {
    pub fn standard(alpha: T) -> Self {
        Self {
            origin: alpha,
            origin_convention: AlphaConvention::Standard,
            convention: AlphaConvention::Standard,
        }
    }

    pub fn amari(alpha_a: T) -> Self {
        Self {
            origin: alpha_a,
            origin_convention: AlphaConvention::Amari,
            convention: AlphaConvention::Amari,
        }
    }

    pub fn convention(&self) -> AlphaConvention {
        self.convention
    }

    /// Same parameter, reported in another convention.
    pub fn to_convention(self, convention: AlphaConvention) -> Self {
        Self { convention, ..self }
    }

    /// Value in the current convention.
    pub fn value(&self) -> T {
        match self.convention {
            AlphaConvention::Standard => self.alpha(),
            AlphaConvention::Amari => self.alpha_amari(),
        }
    }

    /// `α`.
    pub fn alpha(&self) -> T {
        match self.origin_convention {
            AlphaConvention::Standard => self.origin,
            AlphaConvention::Amari => amari_to_standard(self.origin),
        }
    }

    /// `α_A`.
    pub fn alpha_amari(&self) -> T {
        match self.origin_convention {
            AlphaConvention::Amari => self.origin,
            AlphaConvention::Standard => standard_to_amari(self.origin),
        }
    }
}

/// `α_A = 1 - 2α`.
pub fn standard_to_amari<T: Scalar>(alpha: T) -> T {
    T::one() - lit::<T>(2.0) * alpha
}

/// `α = (1 - α_A) / 2`.
pub fn amari_to_standard<T: Scalar>(alpha_a: T) -> T {
    (T::one() - alpha_a) / lit(2.0)
}
