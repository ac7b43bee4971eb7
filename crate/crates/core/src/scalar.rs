//! Coefficient fields.
//!
//! Identities are checked over [`Rational`] where every operation is exact;
//! spectral work runs over `f64`. Complex coefficients only appear in the
//! three-dimensional frame calculus.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub type Rational = BigRational;

/// Default relative tolerance of the floating-point backend.
pub const TAU: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

impl Backend {
    pub fn as_str(self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        }
    }
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            other => Err(format!("unknown backend `{other}`")),
        }
    }
}

pub trait Scalar: Num + Neg<Output = Self> + Clone + Debug + Send + Sync + 'static {
    const BACKEND: Backend;

    fn from_i64(value: i64) -> Self;

    /// `num / den`; `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Magnitude as an `f64`, used for residual reporting and pivoting.
    fn magnitude(&self) -> f64;

    /// Zero test relative to `scale`: exact equality on the rational backend,
    /// `|x| <= TAU * max(scale, 1)` on the float backends.
    fn is_negligible(&self, scale: f64) -> bool;

    fn is_exact() -> bool {
        Self::BACKEND == Backend::Exact
    }
}

impl Scalar for Rational {
    const BACKEND: Backend = Backend::Exact;

    fn from_i64(value: i64) -> Self {
        BigRational::from_integer(BigInt::from(value))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn is_negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::Float;

    fn from_i64(value: i64) -> Self {
        value as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn is_negligible(&self, scale: f64) -> bool {
        self.abs() <= TAU * scale.max(1.0)
    }
}

impl Scalar for Complex64 {
    const BACKEND: Backend = Backend::Float;

    fn from_i64(value: i64) -> Self {
        Complex64::new(value as f64, 0.0)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn is_negligible(&self, scale: f64) -> bool {
        self.norm() <= TAU * scale.max(1.0)
    }
}

/// `n!` as a scalar.
pub fn factorial<S: Scalar>(n: usize) -> S {
    (1..=n as i64).fold(S::one(), |acc, k| acc * S::from_i64(k))
}

/// `(-1)^e` as a scalar.
pub fn sign_power<S: Scalar>(e: usize) -> S {
    if e % 2 == 0 {
        S::one()
    } else {
        -S::one()
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn is_one<S: Scalar>(s: &S) -> bool {
    (s.clone() - S::one()).is_negligible(1.0)
}
