//! Exact scalar number theory.
//!
//! Everything here works on machine integers with exact arithmetic. The only
//! floating point routine is [`ramanujan_sum_complex`], which evaluates the
//! root-of-unity definition and exists as an independent cross-check of the
//! divisor formula used by [`ramanujan_sum`].

mod even;

pub use even::{
    ramanujan_orthogonality, rf_transform, EvenFunction, Normalization, RfCoefficients, RfPair,
};

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

/// Largest integer accepted by [`factorize`].
pub const FACTOR_LIMIT: u64 = 1_000_000_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ArithError {
    #[error("argument must be a positive integer")]
    Zero,
    #[error("{0} exceeds the supported factorization range (at most 10^12)")]
    OutOfRange(u64),
    #[error("keys of an even function mod {modulus} must be exactly its divisors")]
    BadDivisorKeys { modulus: u64 },
    #[error("function is not even mod {modulus}: value at {n} differs from value at gcd {gcd}")]
    NotEven { modulus: u64, n: u64, gcd: u64 },
    #[error("Ramanujan-Fourier reconstruction residual {residual:e} exceeds 1e-9")]
    Reconstruction { residual: f64 },
    #[error("divisor-sum coefficients differ from modulus times orthogonal ones by {residual:e}")]
    NormalizationMismatch { residual: f64 },
}

/// Prime factorization in standard form: primes strictly increasing, exponents at least one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Factorization {
    pairs: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    pub fn is_one(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Reconstructs n as the product of p^a.
    pub fn value(&self) -> u64 {
        self.pairs.iter().map(|&(p, a)| p.pow(a)).product()
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.pairs.iter().map(|&(p, _)| p)
    }

    /// Prime powers p^a making up n, in increasing order of p.
    pub fn prime_powers(&self) -> impl Iterator<Item = u64> + '_ {
        self.pairs.iter().map(|&(p, a)| p.pow(a))
    }

    pub fn is_squarefree(&self) -> bool {
        self.pairs.iter().all(|&(_, a)| a == 1)
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> u32 {
        self.pairs.len() as u32
    }

    /// Number of divisors.
    pub fn tau(&self) -> u64 {
        self.pairs.iter().map(|&(_, a)| u64::from(a) + 1).product()
    }

    /// All divisors, sorted ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, a) in &self.pairs {
            let len = divs.len();
            let mut pk = 1;
            for _ in 0..a {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pairs.is_empty() {
            return write!(f, "1");
        }
        for (i, &(p, a)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if a == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{a}")?;
            }
        }
        Ok(())
    }
}

/// Deterministic trial division, limited to n <= 10^12.
pub fn factorize(n: u64) -> Result<Factorization, ArithError> {
    if n == 0 {
        return Err(ArithError::Zero);
    }
    if n > FACTOR_LIMIT {
        return Err(ArithError::OutOfRange(n));
    }
    let mut pairs = Vec::new();
    let mut rest = n;
    let mut push = |rest: &mut u64, p: u64| {
        let mut a = 0;
        while (*rest).is_multiple_of(p) {
            *rest /= p;
            a += 1;
        }
        if a > 0 {
            pairs.push((p, a));
        }
    };
    push(&mut rest, 2);
    push(&mut rest, 3);
    // 6k ± 1 wheel
    let mut p = 5;
    while p * p <= rest {
        push(&mut rest, p);
        push(&mut rest, p + 2);
        p += 6;
    }
    if rest > 1 {
        pairs.push((rest, 1));
    }
    Ok(Factorization { pairs })
}

/// Factorization of an argument the caller guarantees to be in range.
fn fact(n: u64) -> Factorization {
    match factorize(n) {
        Ok(f) => f,
        Err(e) => panic!("invalid argument {n}: {e}"),
    }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && fact(n).pairs == [(n, 1)]
}

/// Sorted divisors of n.
///
/// # Panics
/// If n is 0 or above [`FACTOR_LIMIT`]; the same holds for every scalar function below.
pub fn divisors(n: u64) -> Vec<u64> {
    fact(n).divisors()
}

/// Returns `(gcd(a, b), lcm(a, b))`.
pub fn euclid(a: u64, b: u64) -> (u64, u64) {
    a.gcd_lcm(&b)
}

pub fn mobius(n: u64) -> i64 {
    let f = fact(n);
    if !f.is_squarefree() {
        0
    } else if f.omega().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Euler's totient, computed as n * prod (1 - 1/p) with exact integer steps.
pub fn totient(n: u64) -> u64 {
    fact(n).primes().fold(n, |acc, p| acc / p * (p - 1))
}

/// Jordan's totient J_r(n) = n^r prod_{p | n} (1 - p^-r).
///
/// # Panics
/// On u128 overflow of n^r.
pub fn jordan_totient(r: u32, n: u64) -> u128 {
    assert!(r >= 1, "Jordan totient order must be positive");
    let f = fact(n);
    let mut acc = u128::from(n)
        .checked_pow(r)
        .unwrap_or_else(|| panic!("{n}^{r} overflows u128"));
    for p in f.primes() {
        let pr = u128::from(p).pow(r);
        acc = acc / pr * (pr - 1);
    }
    acc
}

/// Ramanujan sum c_n(j) by the divisor formula sum_{d | gcd(j, n)} d mu(n/d).
///
/// `j` may be any integer; it is reduced mod n.
pub fn ramanujan_sum(n: u64, j: i64) -> i64 {
    let r = j.rem_euclid(n as i64) as u64;
    let g = r.gcd(&n);
    let f = fact(n);
    f.divisors()
        .into_iter()
        .filter(|d| g.is_multiple_of(*d))
        .map(|d| d as i64 * mobius_of_cofactor(&f, d))
        .sum()
}

/// mu(n/d) for a divisor d of n, read off the factorization of n.
fn mobius_of_cofactor(f: &Factorization, d: u64) -> i64 {
    let mut sign = 1;
    let mut rest = d;
    for &(p, a) in f.pairs() {
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        match a - e {
            0 => {}
            1 => sign = -sign,
            _ => return 0,
        }
    }
    sign
}

/// Ramanujan sum evaluated as the sum of `j`-th powers of the primitive n-th roots of unity.
pub fn ramanujan_sum_complex(n: u64, j: i64) -> Complex64 {
    let r = j.rem_euclid(n as i64) as u64;
    (1..=n)
        .filter(|k| k.gcd(&n) == 1)
        .map(|k| Complex64::from_polar(1.0, TAU * ((r * k) % n) as f64 / n as f64))
        .sum()
}

/// Number of s-tuples of positive integers whose lcm is n: prod_k ((a_k+1)^s - a_k^s).
pub fn lcm_tuple_count(s: u32, n: u64) -> u128 {
    assert!(s >= 1, "tuple length must be positive");
    fact(n)
        .pairs()
        .iter()
        .map(|&(_, a)| {
            let a = u128::from(a);
            (a + 1).pow(s) - a.pow(s)
        })
        .product()
}

/// The named scalar functions used as weights throughout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarKind {
    /// Number of distinct prime factors.
    Omega,
    /// Number of divisors.
    Tau,
    /// nu_k(n) = n^k; k may be negative.
    Nu(i32),
    /// Dirichlet unit: 1 at n = 1, else 0.
    Epsilon,
    /// Constant one (nu_0).
    One,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarValue {
    Integer(i128),
    /// Produced by `Nu(k)` with k < 0, even when the value happens to be whole.
    Rational(Ratio<i128>),
}

impl ScalarValue {
    pub fn is_integer(&self) -> bool {
        matches!(self, ScalarValue::Integer(_))
    }

    pub fn to_ratio(self) -> Ratio<i128> {
        match self {
            ScalarValue::Integer(v) => Ratio::from_integer(v),
            ScalarValue::Rational(r) => r,
        }
    }
}

impl fmt::Display for ScalarValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarValue::Integer(v) => write!(f, "{v}"),
            ScalarValue::Rational(r) => write!(f, "{r}"),
        }
    }
}

pub fn standard_scalar(kind: ScalarKind, n: u64) -> ScalarValue {
    match kind {
        ScalarKind::Omega => ScalarValue::Integer(fact(n).omega().into()),
        ScalarKind::Tau => ScalarValue::Integer(fact(n).tau().into()),
        ScalarKind::Epsilon => ScalarValue::Integer(i128::from(n == 1)),
        ScalarKind::One => {
            fact(n);
            ScalarValue::Integer(1)
        }
        ScalarKind::Nu(k) => {
            fact(n);
            let pow = i128::from(n)
                .checked_pow(k.unsigned_abs())
                .unwrap_or_else(|| panic!("{n}^{k} overflows i128"));
            if k >= 0 {
                ScalarValue::Integer(pow)
            } else {
                ScalarValue::Rational(Ratio::new(1, pow))
            }
        }
    }
}

/// Solves j = k (mod n), j = l (mod m); returns the representative in [0, lcm(n, m)).
pub fn crt_solve(k: i64, n: u64, l: i64, m: u64) -> Option<u64> {
    assert!(n >= 1 && m >= 1, "moduli must be positive");
    let (n, m) = (i128::from(n), i128::from(m));
    let (k, l) = (i128::from(k), i128::from(l));
    let g = n.gcd(&m);
    let diff = l - k;
    if diff.rem_euclid(g) != 0 {
        return None;
    }
    let lcm = n / g * m;
    let m_red = m / g;
    // (n/g) t = diff/g (mod m/g)
    let inv = (n / g).extended_gcd(&m_red).x.rem_euclid(m_red.max(1));
    let t = ((diff / g).rem_euclid(m_red.max(1)) * inv).rem_euclid(m_red.max(1));
    Some((k + n * t).rem_euclid(lcm) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct_totient(n: u64) -> u64 {
        (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
    }

    #[test]
    fn factorize_examples() {
        assert!(factorize(1).unwrap().pairs().is_empty());
        assert_eq!(factorize(12).unwrap().pairs(), &[(2, 2), (3, 1)]);
        assert_eq!(factorize(97).unwrap().pairs(), &[(97, 1)]);
        assert_eq!(factorize(0), Err(ArithError::Zero));
        assert_eq!(
            factorize(FACTOR_LIMIT + 1),
            Err(ArithError::OutOfRange(FACTOR_LIMIT + 1))
        );
        let big = factorize(999_999_999_989).unwrap();
        assert_eq!(big.pairs(), &[(999_999_999_989, 1)]);
        assert_eq!(
            factorize(FACTOR_LIMIT).unwrap().pairs(),
            &[(2, 12), (5, 12)]
        );
    }

    #[test]
    fn factorization_reconstructs_and_is_sorted() {
        for n in 1..3000u64 {
            let f = factorize(n).unwrap();
            assert_eq!(f.value(), n);
            assert!(f.pairs().windows(2).all(|w| w[0].0 < w[1].0));
            for p in f.primes() {
                assert!((2..p).take_while(|d| d * d <= p).all(|d| p % d != 0));
            }
        }
    }

    #[test]
    fn divisors_sorted_and_complete() {
        for n in 1..500u64 {
            let brute: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
            assert_eq!(divisors(n), brute);
        }
    }

    #[test]
    fn euclid_examples() {
        assert_eq!(euclid(4, 6), (2, 12));
        assert_eq!(euclid(1, 35), (1, 35));
        assert_eq!(euclid(7, 7), (7, 7));
    }

    #[test]
    fn mobius_examples() {
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(12), 0);
    }

    #[test]
    fn totient_matches_direct_count() {
        assert_eq!(totient(1), 1);
        assert_eq!(totient(12), 4);
        assert_eq!(totient(13), 12);
        for n in 1..400 {
            assert_eq!(totient(n), direct_totient(n), "n = {n}");
        }
    }

    #[test]
    fn jordan_examples() {
        assert_eq!(jordan_totient(1, 12), 4);
        assert_eq!(jordan_totient(2, 6), 24);
        assert_eq!(jordan_totient(5, 1), 1);
        for n in 1..200 {
            assert_eq!(jordan_totient(1, n), u128::from(totient(n)));
        }
    }

    #[test]
    fn jordan_counts_primitive_pairs() {
        // J_2(n) = #{(a, b) mod n : gcd(a, b, n) = 1}
        for n in 1..40u64 {
            let count = (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .filter(|&(a, b)| a.gcd(&b).gcd(&n) == 1)
                .count() as u128;
            assert_eq!(jordan_totient(2, n), count);
        }
    }

    #[test]
    fn ramanujan_examples() {
        assert_eq!(ramanujan_sum(6, 6), 2);
        assert_eq!(ramanujan_sum(5, 1), -1);
        assert_eq!(ramanujan_sum(9, 3), -3);
        assert_eq!(ramanujan_sum(4, 2), -2);
        assert_eq!(ramanujan_sum(4, -2), -2);
        assert_eq!(ramanujan_sum(1, 0), 1);
    }

    #[test]
    fn ramanujan_divisor_formula_matches_roots_of_unity() {
        for n in 1..=60u64 {
            for j in -(n as i64)..(2 * n as i64) {
                let z = ramanujan_sum_complex(n, j);
                assert!((z.re - ramanujan_sum(n, j) as f64).abs() < 1e-9);
                assert!(z.im.abs() < 1e-9);
            }
        }
    }

    #[test]
    fn lcm_tuple_count_matches_brute_force() {
        assert_eq!(lcm_tuple_count(2, 4), 5);
        assert_eq!(lcm_tuple_count(3, 1), 1);
        assert_eq!(lcm_tuple_count(2, 12), 15);
        for n in 1..=60u64 {
            let divs = divisors(n);
            let pairs = divs
                .iter()
                .flat_map(|&a| divs.iter().map(move |&b| a.lcm(&b)))
                .filter(|&l| l == n)
                .count() as u128;
            assert_eq!(lcm_tuple_count(2, n), pairs, "s = 2, n = {n}");
            let mut triples = 0u128;
            for &a in &divs {
                for &b in &divs {
                    for &c in &divs {
                        triples += u128::from(a.lcm(&b).lcm(&c) == n);
                    }
                }
            }
            assert_eq!(lcm_tuple_count(3, n), triples, "s = 3, n = {n}");
            assert_eq!(lcm_tuple_count(1, n), 1);
        }
    }

    #[test]
    fn standard_scalars() {
        assert_eq!(
            standard_scalar(ScalarKind::Omega, 12),
            ScalarValue::Integer(2)
        );
        assert_eq!(standard_scalar(ScalarKind::Tau, 1), ScalarValue::Integer(1));
        assert_eq!(
            standard_scalar(ScalarKind::Nu(2), 5),
            ScalarValue::Integer(25)
        );
        assert_eq!(
            standard_scalar(ScalarKind::Epsilon, 1),
            ScalarValue::Integer(1)
        );
        assert_eq!(
            standard_scalar(ScalarKind::Epsilon, 7),
            ScalarValue::Integer(0)
        );
        assert_eq!(standard_scalar(ScalarKind::One, 7), ScalarValue::Integer(1));
        let v = standard_scalar(ScalarKind::Nu(-1), 4);
        assert!(!v.is_integer());
        assert_eq!(v.to_ratio(), Ratio::new(1, 4));
        assert!(!standard_scalar(ScalarKind::Nu(-2), 1).is_integer());
    }

    #[test]
    fn crt_examples() {
        assert_eq!(crt_solve(1, 2, 2, 3), Some(5));
        assert_eq!(crt_solve(0, 2, 1, 2), None);
        assert_eq!(crt_solve(3, 5, 3, 5), Some(3));
        assert_eq!(crt_solve(-1, 4, 7, 6), Some(7));
    }

    #[test]
    fn crt_matches_exhaustive_scan() {
        for n in 1..=40u64 {
            for m in 1..=40u64 {
                let lcm = n.lcm(&m);
                let mut scan = vec![None; (n * m) as usize];
                for j in 0..lcm {
                    let slot = &mut scan[((j % n) * m + j % m) as usize];
                    if slot.is_none() {
                        *slot = Some(j);
                    }
                }
                for k in 0..n {
                    for l in 0..m {
                        assert_eq!(
                            crt_solve(k as i64, n, l as i64, m),
                            scan[(k * m + l) as usize],
                            "{k} mod {n}, {l} mod {m}"
                        );
                    }
                }
            }
        }
    }
}
