use num_complex::Complex64;
use num_traits::{One, Zero};

use super::{check_shape, AlgebraError, ComplexAlgebra, Element, MatrixLike, DEFAULT_TOL};

/// Pivots smaller than this in modulus count as zero during elimination.
const PIVOT_TOL: f64 = 1e-12;

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    entries: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn new(n: usize, entries: Vec<Complex64>) -> Result<Self, AlgebraError> {
        if n == 0 || entries.len() != n * n {
            return Err(AlgebraError::Invalid(format!(
                "{} entries do not form a nonempty {n}x{n} matrix",
                entries.len()
            )));
        }
        Ok(Self { n, entries })
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "dimension must be positive");
        Self {
            n,
            entries: vec![Complex64::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = Complex64::one();
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(n >= 1, "dimension must be positive");
        let entries = (0..n * n).map(|idx| f(idx / n, idx % n)).collect();
        Self { n, entries }
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m.entries[i * m.n + i] = v;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: Complex64) {
        self.entries[row * self.n + col] = v;
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        (0..self.n).all(|r| (0..self.n).all(|c| r == c || self.get(r, c).norm() <= tol))
    }

    fn rows(&self) -> Vec<Vec<Complex64>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }
}

impl Element for DenseMatrix {
    type Shape = usize;

    fn shape(&self) -> usize {
        self.n
    }

    fn zero_of(shape: &usize) -> Self {
        Self::zeros(*shape)
    }

    fn unit_of(shape: &usize) -> Self {
        Self::identity(*shape)
    }

    fn from_integer(v: i64, shape: &usize) -> Self {
        Self::identity(*shape).scale(Complex64::new(v as f64, 0.0))
    }

    fn try_add(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        check_shape(&self.n, &rhs.n)?;
        Ok(Self {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    fn try_mul(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        check_shape(&self.n, &rhs.n)?;
        let n = self.n;
        let mut out = vec![Complex64::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * rhs.entries[k * n + j];
                }
            }
        }
        Ok(Self { n, entries: out })
    }

    fn neg(&self) -> Self {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    fn distance(&self, rhs: &Self) -> Result<f64, AlgebraError> {
        check_shape(&self.n, &rhs.n)?;
        Ok(self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Gauss-Jordan with partial pivoting, followed by a two-sided residual check.
    fn try_inverse(&self) -> Result<Self, AlgebraError> {
        let n = self.n;
        let mut a = self.rows();
        let mut inv = Self::identity(n).rows();
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))
                .expect("nonempty pivot range");
            if a[piv][col].norm() < PIVOT_TOL {
                return Err(AlgebraError::NonInvertible);
            }
            a.swap(col, piv);
            inv.swap(col, piv);
            let p = a[col][col].inv();
            for c in 0..n {
                a[col][c] *= p;
                inv[col][c] *= p;
            }
            for row in 0..n {
                if row == col {
                    continue;
                }
                let f = a[row][col];
                if f.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let (ac, ic) = (a[col][c], inv[col][c]);
                    a[row][c] -= f * ac;
                    inv[row][c] -= f * ic;
                }
            }
        }
        let inv = Self {
            n,
            entries: inv.into_iter().flatten().collect(),
        };
        let id = Self::identity(n);
        let residual = self
            .try_mul(&inv)?
            .distance(&id)?
            .max(inv.try_mul(self)?.distance(&id)?);
        if residual > DEFAULT_TOL {
            return Err(AlgebraError::InverseResidual { residual });
        }
        Ok(inv)
    }
}

impl ComplexAlgebra for DenseMatrix {
    fn scale(&self, c: Complex64) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|v| v * c).collect(),
        }
    }
}

impl MatrixLike for DenseMatrix {
    fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// LU elimination with partial pivoting; degenerate pivots give 0.
    fn determinant(&self) -> Complex64 {
        let n = self.n;
        let mut a = self.rows();
        let mut det = Complex64::one();
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))
                .expect("nonempty pivot range");
            if a[piv][col].norm() < PIVOT_TOL {
                return Complex64::zero();
            }
            if piv != col {
                a.swap(col, piv);
                det = -det;
            }
            let p = a[col][col];
            det *= p;
            let (top, rest) = a.split_at_mut(col + 1);
            let pivot_row = &top[col];
            for row in rest.iter_mut() {
                let f = row[col] / p;
                for (x, &v) in row[col..n].iter_mut().zip(&pivot_row[col..n]) {
                    *x -= f * v;
                }
            }
        }
        det
    }

    /// Maximum absolute row sum.
    fn operator_norm(&self) -> f64 {
        self.entries
            .chunks(self.n)
            .map(|row| row.iter().map(|v| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}
