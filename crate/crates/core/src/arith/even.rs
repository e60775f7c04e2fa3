//! Even functions mod d and their Ramanujan-Fourier coefficients.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_integer::Integer;
use rand::Rng;
use serde::Serialize;

use super::{divisors, ramanujan_sum, totient, ArithError};

const RECONSTRUCTION_TOL: f64 = 1e-9;
const EVENNESS_TOL: f64 = 1e-12;

/// An arithmetic function whose value at n depends only on gcd(n, d).
///
/// Stored by its values on the divisors of the modulus.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvenFunction {
    modulus: u64,
    values: BTreeMap<u64, Complex64>,
}

impl EvenFunction {
    /// Builds from values keyed by divisor; the keys must be exactly the divisors of `modulus`.
    pub fn from_divisor_values(
        modulus: u64,
        values: BTreeMap<u64, Complex64>,
    ) -> Result<Self, ArithError> {
        if modulus == 0 {
            return Err(ArithError::Zero);
        }
        if !values.keys().copied().eq(divisors(modulus)) {
            return Err(ArithError::BadDivisorKeys { modulus });
        }
        Ok(Self { modulus, values })
    }

    /// Samples `f` on the divisors of `modulus`; evenness holds by construction.
    pub fn from_fn(modulus: u64, mut f: impl FnMut(u64) -> Complex64) -> Self {
        let values = divisors(modulus).into_iter().map(|r| (r, f(r))).collect();
        Self { modulus, values }
    }

    /// Validates a full table `table[k-1] = α(k)` for k = 1..=modulus.
    pub fn from_table(modulus: u64, table: &[Complex64]) -> Result<Self, ArithError> {
        if modulus == 0 {
            return Err(ArithError::Zero);
        }
        assert_eq!(table.len() as u64, modulus, "table must cover 1..=modulus");
        for (i, &v) in table.iter().enumerate() {
            let n = i as u64 + 1;
            let g = n.gcd(&modulus);
            if (v - table[g as usize - 1]).norm() > EVENNESS_TOL {
                return Err(ArithError::NotEven { modulus, n, gcd: g });
            }
        }
        Ok(Self::from_fn(modulus, |r| table[r as usize - 1]))
    }

    /// Random small-integer values on each divisor, in `-bound..=bound`.
    pub fn random_integer<R: Rng + ?Sized>(modulus: u64, bound: i64, rng: &mut R) -> Self {
        Self::from_fn(modulus, |_| {
            Complex64::new(rng.gen_range(-bound..=bound) as f64, 0.0)
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn divisor_values(&self) -> &BTreeMap<u64, Complex64> {
        &self.values
    }

    /// α(n) = α(gcd(n, d)); n = 0 maps to the value at d.
    pub fn eval(&self, n: u64) -> Complex64 {
        self.values[&n.gcd(&self.modulus)]
    }

    /// The same function regarded as even mod a multiple of the modulus.
    pub fn lift(&self, multiple: u64) -> Self {
        assert!(
            multiple.is_multiple_of(self.modulus),
            "{multiple} is not a multiple of {}",
            self.modulus
        );
        Self::from_fn(multiple, |r| self.eval(r))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// ℛ(α)(r) = Σ_{δ|d} α(d/δ) c_δ(d/r), with no 1/d factor.
    DivisorSum,
    /// a(r) = (1/(d φ(r))) Σ_{k=1}^{d} α(k) c_r(k); reconstructs α.
    Orthogonal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RfCoefficients {
    pub modulus: u64,
    pub normalization: Normalization,
    pub coefficients: BTreeMap<u64, Complex64>,
}

impl RfCoefficients {
    pub fn get(&self, r: u64) -> Complex64 {
        self.coefficients[&r]
    }

    /// Σ_{r|d} a(r) c_r(n).
    pub fn expand(&self, n: u64) -> Complex64 {
        self.coefficients
            .iter()
            .map(|(&r, &a)| a * ramanujan_sum(r, n as i64) as f64)
            .sum()
    }
}

/// Both coefficient sets together with the residuals checked on the way out.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RfPair {
    pub divisor_sum: RfCoefficients,
    pub orthogonal: RfCoefficients,
    /// max_n |α(n) - Σ a(r) c_r(n)| over 1 ≤ n ≤ d.
    pub reconstruction_residual: f64,
    /// max_r |ℛ(α)(r) - d a(r)|.
    pub normalization_residual: f64,
}

pub fn rf_transform(alpha: &EvenFunction) -> Result<RfPair, ArithError> {
    let d = alpha.modulus;
    let divs = divisors(d);

    let divisor_sum: BTreeMap<u64, Complex64> = divs
        .iter()
        .map(|&r| {
            let v = divs
                .iter()
                .map(|&delta| alpha.eval(d / delta) * ramanujan_sum(delta, (d / r) as i64) as f64)
                .sum();
            (r, v)
        })
        .collect();

    let orthogonal: BTreeMap<u64, Complex64> = divs
        .iter()
        .map(|&r| {
            let s: Complex64 = (1..=d)
                .map(|k| alpha.eval(k) * ramanujan_sum(r, k as i64) as f64)
                .sum();
            (r, s / (d * totient(r)) as f64)
        })
        .collect();

    let orthogonal = RfCoefficients {
        modulus: d,
        normalization: Normalization::Orthogonal,
        coefficients: orthogonal,
    };
    let divisor_sum = RfCoefficients {
        modulus: d,
        normalization: Normalization::DivisorSum,
        coefficients: divisor_sum,
    };

    let reconstruction_residual = (1..=d)
        .map(|n| (alpha.eval(n) - orthogonal.expand(n)).norm())
        .fold(0.0, f64::max);
    if reconstruction_residual > RECONSTRUCTION_TOL {
        return Err(ArithError::Reconstruction {
            residual: reconstruction_residual,
        });
    }

    let scale = divisor_sum
        .coefficients
        .values()
        .map(|v| v.norm())
        .fold(1.0, f64::max);
    let normalization_residual = divs
        .iter()
        .map(|&r| (divisor_sum.get(r) - orthogonal.get(r) * d as f64).norm())
        .fold(0.0, f64::max);
    if normalization_residual > RECONSTRUCTION_TOL * scale {
        return Err(ArithError::NormalizationMismatch {
            residual: normalization_residual,
        });
    }

    Ok(RfPair {
        divisor_sum,
        orthogonal,
        reconstruction_residual,
        normalization_residual,
    })
}

/// Σ_{r|n} c_n(n/r) c_r(l); equals n when gcd(l, n) = 1 and 0 otherwise.
pub fn ramanujan_orthogonality(n: u64, l: i64) -> i64 {
    divisors(n)
        .into_iter()
        .map(|r| ramanujan_sum(n, (n / r) as i64) * ramanujan_sum(r, l))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn gcd4() -> EvenFunction {
        EvenFunction::from_fn(4, |r| c(r.gcd(&4) as f64))
    }

    #[test]
    fn gcd_example_orthogonal() {
        let pair = rf_transform(&gcd4()).unwrap();
        let expected = [(1, 2.0), (2, 1.0), (4, 0.5)];
        for (r, v) in expected {
            assert!((pair.orthogonal.get(r) - c(v)).norm() < 1e-12, "r = {r}");
        }
    }

    #[test]
    fn gcd_example_divisor_sum() {
        let pair = rf_transform(&gcd4()).unwrap();
        for (r, v) in [(1, 8.0), (2, 4.0), (4, 2.0)] {
            assert!((pair.divisor_sum.get(r) - c(v)).norm() < 1e-12, "r = {r}");
        }
        assert!(pair.normalization_residual < 1e-12);
    }

    #[test]
    fn constant_mod_one() {
        let pair = rf_transform(&EvenFunction::from_fn(1, |_| c(1.0))).unwrap();
        assert_eq!(pair.orthogonal.coefficients.len(), 1);
        assert!((pair.orthogonal.get(1) - c(1.0)).norm() < 1e-12);
    }

    #[test]
    fn orthogonal_matches_linear_solve() {
        // Solve Σ_r a(r) c_r(n) = α(n) over n | d directly by Gaussian elimination.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in [6u64, 12, 18, 30] {
            let alpha = EvenFunction::random_integer(d, 4, &mut rng);
            let divs = divisors(d);
            let k = divs.len();
            let mut m: Vec<Vec<f64>> = divs
                .iter()
                .map(|&n| {
                    let mut row: Vec<f64> = divs
                        .iter()
                        .map(|&r| ramanujan_sum(r, n as i64) as f64)
                        .collect();
                    row.push(alpha.eval(n).re);
                    row
                })
                .collect();
            for col in 0..k {
                let piv = (col..k)
                    .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
                    .unwrap();
                m.swap(col, piv);
                let pivot_row = m[col].clone();
                for (row, r) in m.iter_mut().enumerate() {
                    if row != col {
                        let f = r[col] / pivot_row[col];
                        for (x, &v) in r[col..=k].iter_mut().zip(&pivot_row[col..=k]) {
                            *x -= f * v;
                        }
                    }
                }
            }
            let pair = rf_transform(&alpha).unwrap();
            for (i, &r) in divs.iter().enumerate() {
                let solved = m[i][k] / m[i][i];
                assert!(
                    (pair.orthogonal.get(r).re - solved).abs() < 1e-9,
                    "d = {d}, r = {r}"
                );
            }
        }
    }

    #[test]
    fn table_validation() {
        let table: Vec<Complex64> = (1..=6u64).map(|k| c(k.gcd(&6) as f64)).collect();
        let f = EvenFunction::from_table(6, &table).unwrap();
        assert_eq!(f.eval(9), c(3.0));
        let bad: Vec<Complex64> = (1..=6u64).map(|k| c(k as f64)).collect();
        assert!(matches!(
            EvenFunction::from_table(6, &bad),
            Err(ArithError::NotEven { n: 4, gcd: 2, .. })
        ));
    }

    #[test]
    fn divisor_keys_checked() {
        let mut values = BTreeMap::new();
        values.insert(1, c(1.0));
        values.insert(3, c(1.0));
        assert_eq!(
            EvenFunction::from_divisor_values(4, values),
            Err(ArithError::BadDivisorKeys { modulus: 4 })
        );
    }

    #[test]
    fn orthogonality_examples() {
        assert_eq!(ramanujan_orthogonality(6, 5), 6);
        assert_eq!(ramanujan_orthogonality(6, 4), 0);
        assert_eq!(ramanujan_orthogonality(1, 1), 1);
    }

    #[test]
    fn orthogonality_exhaustive() {
        for n in 1..=100u64 {
            for l in 1..=n {
                let expected = if l.gcd(&n) == 1 { n as i64 } else { 0 };
                assert_eq!(
                    ramanujan_orthogonality(n, l as i64),
                    expected,
                    "n = {n}, l = {l}"
                );
            }
        }
    }
}
