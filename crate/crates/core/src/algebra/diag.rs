use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{
    check_shape, AlgebraError, ComplexAlgebra, DenseMatrix, Element, MatrixLike, DEFAULT_TOL,
};

/// Dimension and basis offset of a truncated diagonal operator.
///
/// Entry `i` acts on the basis vector `e_{offset + i}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct DiagShape {
    pub dim: usize,
    pub offset: u64,
}

impl DiagShape {
    /// # Panics
    /// If `dim` is zero or `offset` is not 0 or 1.
    pub fn new(dim: usize, offset: u64) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        assert!(offset <= 1, "offset must be 0 or 1");
        Self { dim, offset }
    }

    /// Basis indices k = offset .. offset + dim - 1.
    pub fn indices(&self) -> impl Iterator<Item = u64> {
        self.offset..self.offset + self.dim as u64
    }
}

/// A diagonal operator on the monomial basis window described by its shape.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalOperator {
    offset: u64,
    entries: Vec<Complex64>,
}

impl DiagonalOperator {
    pub fn new(offset: u64, entries: Vec<Complex64>) -> Result<Self, AlgebraError> {
        if entries.is_empty() {
            return Err(AlgebraError::Invalid("empty diagonal".into()));
        }
        if offset > 1 {
            return Err(AlgebraError::Invalid(format!(
                "offset {offset} is not 0 or 1"
            )));
        }
        Ok(Self { offset, entries })
    }

    /// Entry at basis index k is `f(k)`.
    pub fn from_fn(shape: DiagShape, f: impl FnMut(u64) -> Complex64) -> Self {
        Self {
            offset: shape.offset,
            entries: shape.indices().map(f).collect(),
        }
    }

    pub fn from_real(shape: DiagShape, mut f: impl FnMut(u64) -> f64) -> Self {
        Self::from_fn(shape, |k| Complex64::new(f(k), 0.0))
    }

    pub fn identity(shape: DiagShape) -> Self {
        Self::from_fn(shape, |_| Complex64::one())
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn offset(&self) -> u64 {
        self.offset
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Entry attached to basis vector e_k.
    pub fn at(&self, k: u64) -> Complex64 {
        self.entries[(k - self.offset) as usize]
    }

    /// (basis index, entry) pairs.
    pub fn iter(&self) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.offset + i as u64, v))
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            offset: self.offset,
            entries: self.entries.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        self.map(|v| v.powu(e))
    }

    /// Embeds as a dense matrix with the same diagonal.
    pub fn to_dense(&self) -> DenseMatrix {
        DenseMatrix::from_diagonal(&self.entries)
    }

    fn zip_with(
        &self,
        rhs: &Self,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self, AlgebraError> {
        check_shape(&self.shape(), &rhs.shape())?;
        Ok(Self {
            offset: self.offset,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }
}

impl Element for DiagonalOperator {
    type Shape = DiagShape;

    fn shape(&self) -> DiagShape {
        DiagShape {
            dim: self.entries.len(),
            offset: self.offset,
        }
    }

    fn zero_of(shape: &DiagShape) -> Self {
        Self::from_fn(*shape, |_| Complex64::zero())
    }

    fn unit_of(shape: &DiagShape) -> Self {
        Self::identity(*shape)
    }

    fn from_integer(v: i64, shape: &DiagShape) -> Self {
        Self::from_fn(*shape, |_| Complex64::new(v as f64, 0.0))
    }

    fn try_add(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        self.zip_with(rhs, |a, b| a + b)
    }

    fn try_mul(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        self.zip_with(rhs, |a, b| a * b)
    }

    fn neg(&self) -> Self {
        self.map(|v| -v)
    }

    fn distance(&self, rhs: &Self) -> Result<f64, AlgebraError> {
        check_shape(&self.shape(), &rhs.shape())?;
        Ok(self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    fn try_inverse(&self) -> Result<Self, AlgebraError> {
        if self.entries.iter().any(|v| v.norm() < 1e-300) {
            return Err(AlgebraError::NonInvertible);
        }
        let inv = self.map(|v| v.inv());
        let residual = inv.try_mul(self)?.distance(&Self::identity(self.shape()))?;
        if residual > DEFAULT_TOL {
            return Err(AlgebraError::InverseResidual { residual });
        }
        Ok(inv)
    }
}

impl ComplexAlgebra for DiagonalOperator {
    fn scale(&self, c: Complex64) -> Self {
        self.map(|v| v * c)
    }
}

impl MatrixLike for DiagonalOperator {
    fn trace(&self) -> Complex64 {
        self.entries.iter().sum()
    }

    fn determinant(&self) -> Complex64 {
        self.entries.iter().product()
    }

    fn operator_norm(&self) -> f64 {
        self.entries.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{invert, is_idempotent};

    fn diag(v: &[f64]) -> DiagonalOperator {
        DiagonalOperator::new(0, v.iter().map(|&x| Complex64::new(x, 0.0)).collect()).unwrap()
    }

    #[test]
    fn idempotence() {
        assert!(is_idempotent(&diag(&[1.0, 0.0, 1.0, 0.0]), 1e-9));
        assert!(!is_idempotent(&diag(&[2.0, 0.0]), 1e-9));
        assert!(is_idempotent(
            &DiagonalOperator::identity(DiagShape::new(5, 1)),
            1e-9
        ));
    }

    #[test]
    fn trace_det_norm() {
        assert_eq!(diag(&[1.0, -1.0, 2.0]).trace(), Complex64::new(2.0, 0.0));
        assert_eq!(
            diag(&[-1.0, 1.0, -1.0, 1.0]).determinant(),
            Complex64::new(1.0, 0.0)
        );
        assert_eq!(diag(&[3.0, 0.0, 5.0]).determinant(), Complex64::zero());
        assert_eq!(diag(&[1.0, -3.0, 2.0]).operator_norm(), 3.0);
        assert_eq!(diag(&[0.0, 0.0]).operator_norm(), 0.0);
    }

    #[test]
    fn inversion() {
        assert_eq!(invert(&diag(&[2.0, 4.0])).unwrap(), diag(&[0.5, 0.25]));
        assert_eq!(invert(&diag(&[1.0, 0.0])), Err(AlgebraError::NonInvertible));
    }

    #[test]
    fn mixed_shapes_rejected() {
        let a = DiagonalOperator::identity(DiagShape::new(3, 0));
        let b = DiagonalOperator::identity(DiagShape::new(3, 1));
        let c = DiagonalOperator::identity(DiagShape::new(4, 0));
        assert!(matches!(
            a.try_mul(&b),
            Err(AlgebraError::ShapeMismatch { .. })
        ));
        assert!(matches!(
            a.try_add(&c),
            Err(AlgebraError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn basis_indexing() {
        let d = DiagonalOperator::from_real(DiagShape::new(4, 1), |k| k as f64);
        assert_eq!(d.at(1), Complex64::new(1.0, 0.0));
        assert_eq!(d.at(4), Complex64::new(4.0, 0.0));
        assert_eq!(d.iter().next(), Some((1, Complex64::new(1.0, 0.0))));
    }
}
