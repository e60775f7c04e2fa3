//! Unital associative algebras and their concrete realizations.
//!
//! [`Element`] is the ring-level contract the convolution engine is written
//! against. Exact scalars (`i128`, `Ratio<i128>`) implement it so identities
//! can be checked without rounding; complex scalars, [`DenseMatrix`] and
//! [`DiagonalOperator`] additionally implement [`ComplexAlgebra`].
//!
//! Arithmetic between elements of different shape is an error, never an
//! implicit promotion.

mod dense;
mod diag;
pub mod json;

pub use dense::DenseMatrix;
pub use diag::{DiagShape, DiagonalOperator};

use std::fmt::Debug;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Default absolute tolerance for approximate comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("shape mismatch: {left} vs {right}")]
    ShapeMismatch { left: String, right: String },
    #[error("element is not invertible")]
    NonInvertible,
    #[error("inverse residual {residual:e} exceeds tolerance")]
    InverseResidual { residual: f64 },
    #[error("invalid element: {0}")]
    Invalid(String),
}

pub(crate) fn check_shape<S: PartialEq + Debug>(left: &S, right: &S) -> Result<(), AlgebraError> {
    if left == right {
        Ok(())
    } else {
        Err(AlgebraError::ShapeMismatch {
            left: format!("{left:?}"),
            right: format!("{right:?}"),
        })
    }
}

/// An element of a unital associative ring, with a distance used for approximate equality.
pub trait Element: Clone + Debug + Send + Sync {
    /// Dimension data that must agree for two elements to combine.
    type Shape: Clone + Debug + PartialEq + Send + Sync;

    fn shape(&self) -> Self::Shape;
    fn zero_of(shape: &Self::Shape) -> Self;
    /// The unit e.
    fn unit_of(shape: &Self::Shape) -> Self;
    /// The integer multiple v·e.
    fn from_integer(v: i64, shape: &Self::Shape) -> Self;

    fn try_add(&self, rhs: &Self) -> Result<Self, AlgebraError>;
    fn try_mul(&self, rhs: &Self) -> Result<Self, AlgebraError>;
    fn neg(&self) -> Self;

    fn try_sub(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        self.try_add(&rhs.neg())
    }

    /// Max-entry distance; zero exactly when the elements are equal.
    fn distance(&self, rhs: &Self) -> Result<f64, AlgebraError>;

    fn try_inverse(&self) -> Result<Self, AlgebraError>;

    fn approx_eq(&self, rhs: &Self, tol: f64) -> bool {
        matches!(self.distance(rhs), Ok(d) if d <= tol)
    }
}

/// Algebras over ℂ: elements admit complex scaling.
pub trait ComplexAlgebra: Element {
    fn scale(&self, c: Complex64) -> Self;
}

/// Square-matrix utilities shared by the dense and diagonal realizations.
pub trait MatrixLike {
    fn trace(&self) -> Complex64;
    fn determinant(&self) -> Complex64;
    fn operator_norm(&self) -> f64;
}

/// True iff distance(x·x, x) ≤ tol.
pub fn is_idempotent<E: Element>(x: &E, tol: f64) -> bool {
    match x.try_mul(x) {
        Ok(sq) => sq.approx_eq(x, tol),
        Err(_) => false,
    }
}

/// Inverts `x`; errors when it is singular or the two-sided residual exceeds [`DEFAULT_TOL`].
pub fn invert<E: Element>(x: &E) -> Result<E, AlgebraError> {
    x.try_inverse()
}

impl Element for Complex64 {
    type Shape = ();

    fn shape(&self) {}
    fn zero_of(_: &()) -> Self {
        Complex64::zero()
    }
    fn unit_of(_: &()) -> Self {
        Complex64::one()
    }
    fn from_integer(v: i64, _: &()) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn try_add(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        Ok(self + rhs)
    }
    fn try_mul(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        Ok(self * rhs)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn distance(&self, rhs: &Self) -> Result<f64, AlgebraError> {
        Ok((self - rhs).norm())
    }
    fn try_inverse(&self) -> Result<Self, AlgebraError> {
        if self.norm() == 0.0 {
            Err(AlgebraError::NonInvertible)
        } else {
            Ok(self.inv())
        }
    }
}

impl ComplexAlgebra for Complex64 {
    fn scale(&self, c: Complex64) -> Self {
        self * c
    }
}

impl Element for i128 {
    type Shape = ();

    fn shape(&self) {}
    fn zero_of(_: &()) -> Self {
        0
    }
    fn unit_of(_: &()) -> Self {
        1
    }
    fn from_integer(v: i64, _: &()) -> Self {
        v.into()
    }
    fn try_add(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        self.checked_add(*rhs)
            .ok_or_else(|| AlgebraError::Invalid("i128 overflow in addition".into()))
    }
    fn try_mul(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        self.checked_mul(*rhs)
            .ok_or_else(|| AlgebraError::Invalid("i128 overflow in multiplication".into()))
    }
    fn neg(&self) -> Self {
        -self
    }
    fn distance(&self, rhs: &Self) -> Result<f64, AlgebraError> {
        Ok(self.abs_diff(*rhs) as f64)
    }
    fn try_inverse(&self) -> Result<Self, AlgebraError> {
        match self {
            1 | -1 => Ok(*self),
            _ => Err(AlgebraError::NonInvertible),
        }
    }
}

impl Element for Ratio<i128> {
    type Shape = ();

    fn shape(&self) {}
    fn zero_of(_: &()) -> Self {
        Ratio::zero()
    }
    fn unit_of(_: &()) -> Self {
        Ratio::one()
    }
    fn from_integer(v: i64, _: &()) -> Self {
        Ratio::from_integer(v.into())
    }
    fn try_add(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        Ok(self + rhs)
    }
    fn try_mul(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        Ok(self * rhs)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn distance(&self, rhs: &Self) -> Result<f64, AlgebraError> {
        let d = (self - rhs).abs();
        Ok(if d.is_zero() {
            0.0
        } else {
            *d.numer() as f64 / *d.denom() as f64
        })
    }
    fn try_inverse(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            Err(AlgebraError::NonInvertible)
        } else {
            Ok(self.recip())
        }
    }
}
