//! JSON schema for matrix elements.
//!
//! ```json
//! {"kind":"diag","n":4,"offset":0,"entries":[[0,0],[1,0],[0,0],[1,0]]}
//! {"kind":"dense","n":2,"entries":[[1,0],[0,0],[0,0],[1,0]]}
//! ```
//!
//! Entries are `[re, im]` pairs; dense entries are row-major. Integral values
//! are written without a fractional part so exact constructions print exactly.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{AlgebraError, DenseMatrix, DiagonalOperator};

/// A float that serializes as an integer when it is one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v = if self.0 == 0.0 { 0.0 } else { self.0 };
        if v.is_finite() && v.fract() == 0.0 && v.abs() < 9.0e15 {
            s.serialize_i64(v as i64)
        } else {
            s.serialize_f64(v)
        }
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        f64::deserialize(d).map(Num)
    }
}

fn pair(z: Complex64) -> [Num; 2] {
    [Num(z.re), Num(z.im)]
}

fn unpair(p: &[Num; 2]) -> Complex64 {
    Complex64::new(p[0].0, p[1].0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ElementJson {
    #[serde(rename = "diag")]
    Diag {
        n: usize,
        offset: u64,
        entries: Vec<[Num; 2]>,
    },
    #[serde(rename = "dense")]
    Dense { n: usize, entries: Vec<[Num; 2]> },
}

impl From<&DiagonalOperator> for ElementJson {
    fn from(d: &DiagonalOperator) -> Self {
        ElementJson::Diag {
            n: d.dim(),
            offset: d.offset(),
            entries: d.entries().iter().copied().map(pair).collect(),
        }
    }
}

impl From<&DenseMatrix> for ElementJson {
    fn from(m: &DenseMatrix) -> Self {
        ElementJson::Dense {
            n: m.dim(),
            entries: m.entries().iter().copied().map(pair).collect(),
        }
    }
}

impl TryFrom<&ElementJson> for DiagonalOperator {
    type Error = AlgebraError;

    fn try_from(j: &ElementJson) -> Result<Self, AlgebraError> {
        match j {
            ElementJson::Diag { n, offset, entries } => {
                if entries.len() != *n {
                    return Err(AlgebraError::Invalid(format!(
                        "diag declares n = {n} but has {} entries",
                        entries.len()
                    )));
                }
                DiagonalOperator::new(*offset, entries.iter().map(unpair).collect())
            }
            ElementJson::Dense { .. } => Err(AlgebraError::Invalid(
                "expected a diag element, found dense".into(),
            )),
        }
    }
}

impl TryFrom<&ElementJson> for DenseMatrix {
    type Error = AlgebraError;

    fn try_from(j: &ElementJson) -> Result<Self, AlgebraError> {
        match j {
            ElementJson::Dense { n, entries } => {
                DenseMatrix::new(*n, entries.iter().map(unpair).collect())
            }
            ElementJson::Diag { .. } => Err(AlgebraError::Invalid(
                "expected a dense element, found diag".into(),
            )),
        }
    }
}
