//! Tabulated arithmetic functions with values in an algebra, and their products.
//!
//! All three products multiply in the same order: the value at the first
//! argument's index is the left factor, so for `f * g` the term is `f(k)·g(l)`.

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{is_idempotent, AlgebraError, DiagonalOperator, Element};
use crate::arith::factorize;
use crate::idempotent::IdempotentProvider;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConvError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("functions are tabulated to different lengths ({left} vs {right})")]
    LengthMismatch { left: u64, right: u64 },
    #[error("a function table needs at least one value")]
    Empty,
    #[error("value at n = {n} has a different shape from f(1)")]
    MixedShapes { n: u64 },
    #[error("leading value f(1) is not invertible")]
    NonInvertibleLeading,
    #[error("divisor sum Σ_{{k|n}} f(k) is not invertible at n = {n}")]
    NonInvertibleDivisorSum { n: u64 },
    #[error("conjugating element is not invertible")]
    NonInvertibleConjugator,
    #[error("computed inverse fails the {side} check f*g = I with residual {residual:e}")]
    InverseCheck { side: Side, residual: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// A function 1..=n_max → algebra, all values of one shape.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgFunction<E: Element> {
    shape: E::Shape,
    values: Vec<E>,
}

impl<E: Element> AlgFunction<E> {
    /// `values[i]` is f(i + 1).
    pub fn new(values: Vec<E>) -> Result<Self, ConvError> {
        let first = values.first().ok_or(ConvError::Empty)?;
        let shape = first.shape();
        if let Some(i) = values.iter().position(|v| v.shape() != shape) {
            return Err(ConvError::MixedShapes { n: i as u64 + 1 });
        }
        Ok(Self { shape, values })
    }

    pub fn from_fn(n_max: u64, f: impl FnMut(u64) -> E) -> Result<Self, ConvError> {
        Self::new((1..=n_max).map(f).collect())
    }

    /// The scalar function α lifted to n ↦ α(n)·e.
    pub fn lift(alpha: &AlgFunction<i128>, shape: &E::Shape) -> Self {
        let values = alpha
            .values
            .iter()
            .map(|&a| E::from_integer(to_i64(a), shape))
            .collect();
        Self {
            shape: shape.clone(),
            values,
        }
    }

    /// n ↦ α(n)·f(n).
    pub fn weighted(alpha: &AlgFunction<i128>, f: &Self) -> Result<Self, ConvError> {
        check_len(alpha.n_max(), f.n_max())?;
        let values = alpha
            .values
            .iter()
            .zip(&f.values)
            .map(|(&a, v)| E::from_integer(to_i64(a), &f.shape).try_mul(v))
            .collect::<Result<_, _>>()?;
        Ok(Self {
            shape: f.shape.clone(),
            values,
        })
    }

    pub fn n_max(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn shape(&self) -> &E::Shape {
        &self.shape
    }

    /// f(n) for 1 ≤ n ≤ n_max.
    pub fn get(&self, n: u64) -> &E {
        assert!(
            n >= 1 && n <= self.n_max(),
            "index {n} outside 1..={}",
            self.n_max()
        );
        &self.values[n as usize - 1]
    }

    pub fn values(&self) -> &[E] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &E)> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| (i as u64 + 1, v))
    }

    /// The same function restricted to 1..=n_max.
    pub fn truncate(&self, n_max: u64) -> Self {
        assert!(n_max >= 1 && n_max <= self.n_max());
        Self {
            shape: self.shape.clone(),
            values: self.values[..n_max as usize].to_vec(),
        }
    }

    /// Largest pointwise distance.
    pub fn distance(&self, other: &Self) -> Result<f64, ConvError> {
        check_len(self.n_max(), other.n_max())?;
        let mut worst = 0.0f64;
        for (a, b) in self.values.iter().zip(&other.values) {
            worst = worst.max(a.distance(b)?);
        }
        Ok(worst)
    }

    /// n ↦ f(n)·g(n).
    pub fn pointwise_mul(&self, other: &Self) -> Result<Self, ConvError> {
        check_len(self.n_max(), other.n_max())?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.try_mul(b))
            .collect::<Result<_, _>>()?;
        Ok(Self {
            shape: self.shape.clone(),
            values,
        })
    }
}

impl AlgFunction<i128> {
    /// Integer-valued scalar table.
    pub fn tabulate(n_max: u64, mut f: impl FnMut(u64) -> i128) -> Self {
        assert!(n_max >= 1, "n_max must be positive");
        Self {
            shape: (),
            values: (1..=n_max).map(&mut f).collect(),
        }
    }
}

fn to_i64(a: i128) -> i64 {
    i64::try_from(a).unwrap_or_else(|_| panic!("scalar weight {a} does not fit in i64"))
}

fn check_len(left: u64, right: u64) -> Result<(), ConvError> {
    if left == right {
        Ok(())
    } else {
        Err(ConvError::LengthMismatch { left, right })
    }
}

fn check_compatible<E: Element>(f: &AlgFunction<E>, g: &AlgFunction<E>) -> Result<(), ConvError> {
    check_len(f.n_max(), g.n_max())?;
    crate::algebra::check_shape(&f.shape, &g.shape)?;
    Ok(())
}

/// Sums f(k)·g(l) into slot `target(k, l)` for every pair the closure accepts.
fn accumulate<E: Element>(
    f: &AlgFunction<E>,
    g: &AlgFunction<E>,
    l_bound: impl Fn(u64) -> u64,
    target: impl Fn(u64, u64) -> Option<u64>,
) -> Result<AlgFunction<E>, ConvError> {
    check_compatible(f, g)?;
    let n_max = f.n_max();
    let mut out = vec![E::zero_of(&f.shape); n_max as usize];
    for k in 1..=n_max {
        for l in 1..=l_bound(k) {
            if let Some(n) = target(k, l) {
                let term = f.get(k).try_mul(g.get(l))?;
                let slot = &mut out[n as usize - 1];
                *slot = slot.try_add(&term)?;
            }
        }
    }
    Ok(AlgFunction {
        shape: f.shape.clone(),
        values: out,
    })
}

/// (f ∗ g)(n) = Σ_{kl=n} f(k)·g(l).
pub fn dirichlet_convolve<E: Element>(
    f: &AlgFunction<E>,
    g: &AlgFunction<E>,
) -> Result<AlgFunction<E>, ConvError> {
    let n_max = f.n_max();
    accumulate(f, g, |k| n_max / k, |k, l| Some(k * l))
}

/// (f □ g)(n) = Σ_{lcm(k,l)=n} f(k)·g(l).
pub fn lcm_convolve<E: Element>(
    f: &AlgFunction<E>,
    g: &AlgFunction<E>,
) -> Result<AlgFunction<E>, ConvError> {
    let n_max = f.n_max();
    accumulate(
        f,
        g,
        |_| n_max,
        |k, l| Some(k.lcm(&l)).filter(|&n| n <= n_max),
    )
}

/// (f ⊔ g)(n) = Σ_{kl=n, gcd(k,l)=1} f(k)·g(l).
pub fn unitary_convolve<E: Element>(
    f: &AlgFunction<E>,
    g: &AlgFunction<E>,
) -> Result<AlgFunction<E>, ConvError> {
    let n_max = f.n_max();
    accumulate(
        f,
        g,
        |k| n_max / k,
        |k, l| (k.gcd(&l) == 1).then_some(k * l),
    )
}

/// I(1) = e, I(n) = 0 otherwise; the identity for all three products.
pub fn dirichlet_identity<E: Element>(shape: &E::Shape, n_max: u64) -> AlgFunction<E> {
    assert!(n_max >= 1, "n_max must be positive");
    let mut values = vec![E::zero_of(shape); n_max as usize];
    values[0] = E::unit_of(shape);
    AlgFunction {
        shape: shape.clone(),
        values,
    }
}

/// Dirichlet inverse by the right-inverse recursion, verified on both sides within `tol`.
pub fn dirichlet_inverse<E: Element>(
    f: &AlgFunction<E>,
    tol: f64,
) -> Result<AlgFunction<E>, ConvError> {
    let lead_inv = f
        .get(1)
        .try_inverse()
        .map_err(|_| ConvError::NonInvertibleLeading)?;
    let n_max = f.n_max();
    let mut g: Vec<E> = Vec::with_capacity(n_max as usize);
    g.push(lead_inv.clone());
    for n in 2..=n_max {
        let mut acc = E::zero_of(&f.shape);
        for d in 2..=n {
            if n % d == 0 {
                acc = acc.try_add(&f.get(d).try_mul(&g[(n / d) as usize - 1])?)?;
            }
        }
        g.push(lead_inv.try_mul(&acc)?.neg());
    }
    verify_inverse(f, g, dirichlet_convolve, tol)
}

type Product<E> = fn(&AlgFunction<E>, &AlgFunction<E>) -> Result<AlgFunction<E>, ConvError>;

fn verify_inverse<E: Element>(
    f: &AlgFunction<E>,
    values: Vec<E>,
    product: Product<E>,
    tol: f64,
) -> Result<AlgFunction<E>, ConvError> {
    let g = AlgFunction {
        shape: f.shape.clone(),
        values,
    };
    let id = dirichlet_identity(&f.shape, f.n_max());
    let right = product(f, &g)?.distance(&id)?;
    if right > tol {
        return Err(ConvError::InverseCheck {
            side: Side::Right,
            residual: right,
        });
    }
    let left = product(&g, f)?.distance(&id)?;
    if left > tol {
        return Err(ConvError::InverseCheck {
            side: Side::Left,
            residual: left,
        });
    }
    Ok(g)
}

/// Inverse for the unitary product: g(n) = −f(1)⁻¹·Σ_{d‖n, d>1} f(d)·g(n/d).
pub fn unitary_inverse<E: Element>(
    f: &AlgFunction<E>,
    tol: f64,
) -> Result<AlgFunction<E>, ConvError> {
    let lead_inv = f
        .get(1)
        .try_inverse()
        .map_err(|_| ConvError::NonInvertibleLeading)?;
    let mut g: Vec<E> = Vec::with_capacity(f.n_max() as usize);
    g.push(lead_inv.clone());
    for n in 2..=f.n_max() {
        let mut acc = E::zero_of(&f.shape);
        for d in 2..=n {
            if n % d == 0 && d.gcd(&(n / d)) == 1 {
                acc = acc.try_add(&f.get(d).try_mul(&g[(n / d) as usize - 1])?)?;
            }
        }
        g.push(lead_inv.try_mul(&acc)?.neg());
    }
    verify_inverse(f, g, unitary_convolve, tol)
}

/// Inverse for the lcm product. Solving at n isolates (Σ_{k|n} f(k))·g(n), so every
/// divisor sum must be invertible, not just f(1).
pub fn lcm_inverse<E: Element>(f: &AlgFunction<E>, tol: f64) -> Result<AlgFunction<E>, ConvError> {
    let mut g: Vec<E> = Vec::with_capacity(f.n_max() as usize);
    for n in 1..=f.n_max() {
        let divs: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
        let mut lead = E::zero_of(&f.shape);
        for &k in &divs {
            lead = lead.try_add(f.get(k))?;
        }
        let lead_inv = lead
            .try_inverse()
            .map_err(|_| ConvError::NonInvertibleDivisorSum { n })?;
        let mut acc = E::zero_of(&f.shape);
        for &l in &divs[..divs.len() - 1] {
            for &k in &divs {
                if k.lcm(&l) == n {
                    acc = acc.try_add(&f.get(k).try_mul(&g[l as usize - 1])?)?;
                }
            }
        }
        let gn = if n == 1 {
            lead_inv
        } else {
            lead_inv.try_mul(&acc)?.neg()
        };
        g.push(gn);
    }
    verify_inverse(f, g, lcm_convolve, tol)
}

/// Outcome of a multiplicativity scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplicativityVerdict {
    pub multiplicative: bool,
    /// First failing coprime pair (n, m): f(nm) ≠ f(n)·f(m). Pairs with both
    /// factors above one are scanned first, by increasing product.
    pub counterexample: Option<(u64, u64)>,
    /// Whether f(n) equals the product of f over the prime powers of n, for every n.
    pub prime_power_reconstruction: bool,
    pub leading_idempotent: bool,
    pub max_residual: f64,
}

/// Checks f(nm) = f(n)·f(m) for coprime n, m with nm ≤ n_max, in both factor orders.
pub fn is_multiplicative<E: Element>(
    f: &AlgFunction<E>,
    tol: f64,
) -> Result<MultiplicativityVerdict, ConvError> {
    let n_max = f.n_max();
    let mut counterexample = None;
    let mut max_residual = 0.0f64;
    let mut check = |n: u64, m: u64| -> Result<(), ConvError> {
        let prod = f.get(n * m);
        let r = prod
            .distance(&f.get(n).try_mul(f.get(m))?)?
            .max(prod.distance(&f.get(m).try_mul(f.get(n))?)?);
        max_residual = max_residual.max(r);
        if r > tol && counterexample.is_none() {
            counterexample = Some((n, m));
        }
        Ok(())
    };
    for p in 6..=n_max {
        for n in 2..p {
            if n * n >= p {
                break;
            }
            if p % n == 0 && n.gcd(&(p / n)) == 1 {
                check(n, p / n)?;
            }
        }
    }
    for n in 1..=n_max {
        check(1, n)?;
    }

    let mut prime_power_reconstruction = true;
    for n in 2..=n_max {
        let fact = factorize(n).expect("table index in range");
        let mut acc: Option<E> = None;
        for q in fact.prime_powers() {
            acc = Some(match acc {
                None => f.get(q).clone(),
                Some(a) => a.try_mul(f.get(q))?,
            });
        }
        let r = f.get(n).distance(&acc.expect("n > 1 has a prime factor"))?;
        max_residual = max_residual.max(r);
        if r > tol {
            prime_power_reconstruction = false;
        }
    }

    let leading_idempotent = is_idempotent(f.get(1), tol);
    let multiplicative = counterexample.is_none() && prime_power_reconstruction;
    if multiplicative {
        assert!(
            leading_idempotent,
            "multiplicative function with non-idempotent f(1)"
        );
    }
    Ok(MultiplicativityVerdict {
        multiplicative,
        counterexample,
        prime_power_reconstruction,
        leading_idempotent,
        max_residual,
    })
}

/// n ↦ b·f(n)·b⁻¹.
pub fn conjugate<E: Element>(f: &AlgFunction<E>, b: &E) -> Result<AlgFunction<E>, ConvError> {
    crate::algebra::check_shape(&f.shape, &b.shape())?;
    let b_inv = b
        .try_inverse()
        .map_err(|_| ConvError::NonInvertibleConjugator)?;
    let values = f
        .values
        .iter()
        .map(|v| b.try_mul(v)?.try_mul(&b_inv))
        .collect::<Result<_, AlgebraError>>()?;
    Ok(AlgFunction {
        shape: f.shape.clone(),
        values,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LehmerReport {
    pub n_max: u64,
    pub j: i64,
    pub dim: usize,
    /// m where (ν₀∗α)(m)·(ν₀∗β)(m) ≠ (ν₀∗(α□β))(m) in exact arithmetic.
    pub scalar_failures: Vec<u64>,
    /// m where (ν₀∗αP_j)(m)·(ν₀∗βP_j)(m) differs from (ν₀∗(α□β)P_j)(m) beyond `tol`.
    pub operator_failures: Vec<u64>,
    pub operator_max_residual: f64,
    pub pass: bool,
}

/// Lehmer's identity (ν₀∗α)(ν₀∗β) = ν₀∗(α□β), as scalars and weighted by P_j on a diagonal realization.
pub fn lehmer_identity_check<P: IdempotentProvider + ?Sized>(
    alpha: &AlgFunction<i128>,
    beta: &AlgFunction<i128>,
    system: &P,
    j: i64,
    tol: f64,
) -> Result<LehmerReport, ConvError> {
    check_len(alpha.n_max(), beta.n_max())?;
    let n_max = alpha.n_max();
    let one = AlgFunction::tabulate(n_max, |_| 1);
    let box_ab = lcm_convolve(alpha, beta)?;

    let lhs = dirichlet_convolve(&one, alpha)?.pointwise_mul(&dirichlet_convolve(&one, beta)?)?;
    let rhs = dirichlet_convolve(&one, &box_ab)?;
    let scalar_failures: Vec<u64> = (1..=n_max).filter(|&m| lhs.get(m) != rhs.get(m)).collect();

    let shape = system.shape();
    let proj = AlgFunction::<DiagonalOperator>::from_fn(n_max, |n| system.projection(j, n))?;
    let one_e = AlgFunction::<DiagonalOperator>::lift(&one, &shape);
    let a_p = AlgFunction::weighted(alpha, &proj)?;
    let b_p = AlgFunction::weighted(beta, &proj)?;
    let ab_p = AlgFunction::weighted(&box_ab, &proj)?;
    let op_lhs =
        dirichlet_convolve(&one_e, &a_p)?.pointwise_mul(&dirichlet_convolve(&one_e, &b_p)?)?;
    let op_rhs = dirichlet_convolve(&one_e, &ab_p)?;
    let mut operator_failures = Vec::new();
    let mut operator_max_residual = 0.0f64;
    for m in 1..=n_max {
        let r = op_lhs.get(m).distance(op_rhs.get(m))?;
        operator_max_residual = operator_max_residual.max(r);
        if r > tol {
            operator_failures.push(m);
        }
    }

    let pass = operator_failures.is_empty() && scalar_failures.is_empty();
    Ok(LehmerReport {
        n_max,
        j,
        dim: shape.dim,
        scalar_failures,
        operator_failures,
        operator_max_residual,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{DenseMatrix, DiagShape};
    use crate::arith::{jordan_totient, lcm_tuple_count, mobius, totient};
    use crate::idempotent::IdempotentSystem;
    use num_complex::Complex64;

    fn scalar(n_max: u64, f: impl Fn(u64) -> i128) -> AlgFunction<i128> {
        AlgFunction::tabulate(n_max, f)
    }

    fn mu(n_max: u64) -> AlgFunction<i128> {
        scalar(n_max, |n| mobius(n).into())
    }

    fn phi(n_max: u64) -> AlgFunction<i128> {
        scalar(n_max, |n| totient(n).into())
    }

    fn one(n_max: u64) -> AlgFunction<i128> {
        scalar(n_max, |_| 1)
    }

    #[test]
    fn mobius_inversion() {
        let r = dirichlet_convolve(&mu(100), &one(100)).unwrap();
        assert_eq!(r, dirichlet_identity(&(), 100));
    }

    #[test]
    fn totient_divisor_sum() {
        let r = dirichlet_convolve(&phi(100), &one(100)).unwrap();
        assert_eq!(r, scalar(100, |n| n.into()));
    }

    #[test]
    fn identity_is_neutral_for_every_product() {
        let f = scalar(40, |n| (n * n) as i128 - 7);
        let id = dirichlet_identity(&(), 40);
        for op in [dirichlet_convolve::<i128>, lcm_convolve, unitary_convolve] {
            assert_eq!(op(&id, &f).unwrap(), f);
            assert_eq!(op(&f, &id).unwrap(), f);
        }
    }

    #[test]
    fn lcm_of_ones_counts_pairs() {
        let r = lcm_convolve(&one(60), &one(60)).unwrap();
        assert_eq!(*r.get(4), 5);
        for n in 1..=60 {
            assert_eq!(*r.get(n) as u128, lcm_tuple_count(2, n));
        }
    }

    #[test]
    fn lcm_of_totients_is_jordan() {
        let r = lcm_convolve(&phi(60), &phi(60)).unwrap();
        assert_eq!(*r.get(6), 24);
        for n in 1..=60 {
            assert_eq!(*r.get(n) as u128, jordan_totient(2, n));
        }
    }

    #[test]
    fn unitary_of_ones() {
        let r = unitary_convolve(&one(60), &one(60)).unwrap();
        assert_eq!(*r.get(12), 4);
        for n in 1..=60u64 {
            let pairs = (1..=n)
                .filter(|k| n % k == 0 && k.gcd(&(n / k)) == 1)
                .count();
            assert_eq!(*r.get(n), pairs as i128);
        }
    }

    #[test]
    fn unitary_at_prime_splits_only_trivially() {
        let f = scalar(13, |n| n as i128 + 3);
        let g = scalar(13, |n| 2 * n as i128 - 1);
        let r = unitary_convolve(&f, &g).unwrap();
        assert_eq!(*r.get(13), f.get(1) * g.get(13) + f.get(13) * g.get(1));
    }

    #[test]
    fn products_respect_factor_order() {
        // Non-commuting values: f(1)·g(2) ≠ g(2)·f(1).
        let a = DenseMatrix::new(
            2,
            [0.0, 1.0, 0.0, 0.0]
                .map(|x| Complex64::new(x, 0.0))
                .to_vec(),
        )
        .unwrap();
        let b = DenseMatrix::new(
            2,
            [0.0, 0.0, 1.0, 0.0]
                .map(|x| Complex64::new(x, 0.0))
                .to_vec(),
        )
        .unwrap();
        let z = DenseMatrix::zeros(2);
        let f = AlgFunction::new(vec![a.clone(), z.clone()]).unwrap();
        let g = AlgFunction::new(vec![z, b.clone()]).unwrap();
        let fg = dirichlet_convolve(&f, &g).unwrap();
        assert_eq!(fg.get(2), &a.try_mul(&b).unwrap());
        let gf = dirichlet_convolve(&g, &f).unwrap();
        assert_eq!(gf.get(2), &b.try_mul(&a).unwrap());
        assert_ne!(fg.get(2), gf.get(2));
    }

    #[test]
    fn inverse_of_one_is_mobius() {
        assert_eq!(dirichlet_inverse(&one(100), 0.0).unwrap(), mu(100));
        let id = dirichlet_identity::<i128>(&(), 30);
        assert_eq!(dirichlet_inverse(&id, 0.0).unwrap(), id);
    }

    #[test]
    fn inverse_needs_invertible_lead() {
        let f = scalar(10, |n| if n == 1 { 0 } else { 1 });
        assert_eq!(
            dirichlet_inverse(&f, 0.0),
            Err(ConvError::NonInvertibleLeading)
        );
    }

    #[test]
    fn unitary_inverse_of_one_is_liouville_star() {
        let g = unitary_inverse(&one(120), 0.0).unwrap();
        let expected = scalar(120, |n| {
            if factorize(n).unwrap().omega().is_multiple_of(2) {
                1
            } else {
                -1
            }
        });
        assert_eq!(g, expected);
    }

    #[test]
    fn lcm_inverse_round_trip() {
        use num_rational::Ratio;
        let f = AlgFunction::from_fn(60, |n| Ratio::from_integer(1 + (n % 3) as i128)).unwrap();
        let g = lcm_inverse(&f, 0.0).unwrap();
        let id = dirichlet_identity(&(), 60);
        assert_eq!(lcm_convolve(&f, &g).unwrap(), id);
        assert_eq!(lcm_convolve(&g, &f).unwrap(), id);
        let id_i = dirichlet_identity::<i128>(&(), 20);
        assert_eq!(lcm_inverse(&id_i, 0.0).unwrap(), id_i);
        // Σ_{k|2} f(k) = 0
        let bad = scalar(10, |n| if n == 2 { -1 } else { 1 });
        assert_eq!(
            lcm_inverse(&bad, 0.0),
            Err(ConvError::NonInvertibleDivisorSum { n: 2 })
        );
    }

    #[test]
    fn inverse_of_matrix_valued_function() {
        let shape = 3usize;
        let f = AlgFunction::from_fn(24, |n| {
            DenseMatrix::from_fn(shape, |r, c| {
                let v = if r == c {
                    1.0 + n as f64
                } else {
                    ((r + 2 * c) as f64 + n as f64).sin()
                };
                Complex64::new(v, 0.1 * c as f64)
            })
        })
        .unwrap();
        let g = dirichlet_inverse(&f, 1e-9).unwrap();
        let id = dirichlet_identity(&shape, 24);
        assert!(dirichlet_convolve(&f, &g).unwrap().distance(&id).unwrap() < 1e-9);
        assert!(dirichlet_convolve(&g, &f).unwrap().distance(&id).unwrap() < 1e-9);
    }

    #[test]
    fn multiplicativity_verdicts() {
        let v = is_multiplicative(&phi(120), 0.0).unwrap();
        assert!(v.multiplicative && v.leading_idempotent);
        let bad = scalar(30, |n| n as i128 + 1);
        let v = is_multiplicative(&bad, 0.0).unwrap();
        assert!(!v.multiplicative);
        assert_eq!(v.counterexample, Some((2, 3)));
        assert_eq!((bad.get(6), bad.get(2) * bad.get(3)), (&7, 12));
    }

    #[test]
    fn projections_are_multiplicative() {
        let sys = IdempotentSystem::exact(DiagShape::new(120, 0));
        for j in [0, 1, 5] {
            let f = AlgFunction::from_fn(60, |n| sys.projection(j, n)).unwrap();
            assert!(
                is_multiplicative(&f, 0.0).unwrap().multiplicative,
                "j = {j}"
            );
        }
    }

    #[test]
    fn conjugation() {
        let shape = DiagShape::new(8, 0);
        let sys = IdempotentSystem::exact(shape);
        let f = AlgFunction::from_fn(20, |n| sys.projection(1, n)).unwrap();
        let e = DiagonalOperator::identity(shape);
        assert_eq!(conjugate(&f, &e).unwrap(), f);
        let b = DiagonalOperator::from_real(shape, |k| 1.5 + k as f64);
        let g = conjugate(&f, &b).unwrap();
        assert!(is_multiplicative(&g, 1e-9).unwrap().multiplicative);
        let id = dirichlet_identity::<DiagonalOperator>(&shape, 20);
        assert!(conjugate(&id, &b).unwrap().distance(&id).unwrap() < 1e-12);
        let singular = DiagonalOperator::from_real(shape, |k| k as f64);
        assert_eq!(
            conjugate(&f, &singular),
            Err(ConvError::NonInvertibleConjugator)
        );
    }

    #[test]
    fn length_and_shape_mismatch() {
        assert!(matches!(
            dirichlet_convolve(&one(5), &one(6)),
            Err(ConvError::LengthMismatch { left: 5, right: 6 })
        ));
        let a = dirichlet_identity::<DiagonalOperator>(&DiagShape::new(4, 0), 5);
        let b = dirichlet_identity::<DiagonalOperator>(&DiagShape::new(4, 1), 5);
        assert!(matches!(
            lcm_convolve(&a, &b),
            Err(ConvError::Algebra(AlgebraError::ShapeMismatch { .. }))
        ));
        let mixed = AlgFunction::new(vec![
            DiagonalOperator::identity(DiagShape::new(2, 0)),
            DiagonalOperator::identity(DiagShape::new(3, 0)),
        ]);
        assert_eq!(mixed, Err(ConvError::MixedShapes { n: 2 }));
    }

    #[test]
    fn lehmer_examples() {
        let sys = IdempotentSystem::exact(DiagShape::new(64, 0));
        let r = lehmer_identity_check(&one(200), &one(200), &sys, 0, 0.0).unwrap();
        assert!(r.pass, "{r:?}");
        let eps = scalar(200, |n| (n == 1).into());
        let beta = scalar(200, |n| (n % 7) as i128 - 3);
        assert!(
            lehmer_identity_check(&eps, &beta, &sys, 2, 0.0)
                .unwrap()
                .pass
        );
        let r = lehmer_identity_check(&phi(200), &phi(200), &sys, 1, 0.0).unwrap();
        assert!(r.pass);
    }
}
