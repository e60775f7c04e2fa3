//! Arithmetic systems of idempotents realized as congruence indicators.
//!
//! On the monomial basis e_k the idempotent P_j(n) keeps exactly the e_k with
//! k ≡ j (mod n). The exact provider builds those 0/1 diagonals directly; the
//! DFT provider evaluates P_j(n) = (1/n) Σ_l ε_n^{-lj} S(n)^l in floating
//! point and serves only as an independent cross-check.

use num_complex::Complex64;
use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{DiagShape, DiagonalOperator, Element};
use crate::arith::{crt_solve, lcm_tuple_count, mobius};
use crate::conv::{lcm_convolve, unitary_convolve, AlgFunction, ConvError};
use crate::ramanujan::s_operator;

/// Largest level n·r the axiom checker will build.
pub const MAX_AXIOM_LEVEL: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IdempotentError {
    #[error("{n} does not divide {m}")]
    NotDivisor { n: u64, m: u64 },
    #[error("axiom sweep would reach level {level}, above the bound {MAX_AXIOM_LEVEL}")]
    LevelBound { level: u64 },
    #[error(transparent)]
    Conv(#[from] ConvError),
}

/// Anything that hands out P_j(n) on a fixed diagonal shape.
pub trait IdempotentProvider: Sync {
    fn shape(&self) -> DiagShape;
    /// P_j(n) for any integer j and level n ≥ 1.
    fn projection(&self, j: i64, n: u64) -> DiagonalOperator;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProviderMode {
    CongruenceExact,
    DftFloat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IdempotentSystem {
    shape: DiagShape,
    mode: ProviderMode,
}

impl IdempotentSystem {
    pub fn new(shape: DiagShape, mode: ProviderMode) -> Self {
        Self { shape, mode }
    }

    pub fn exact(shape: DiagShape) -> Self {
        Self::new(shape, ProviderMode::CongruenceExact)
    }

    pub fn dft(shape: DiagShape) -> Self {
        Self::new(shape, ProviderMode::DftFloat)
    }

    pub fn mode(&self) -> ProviderMode {
        self.mode
    }
}

impl IdempotentProvider for IdempotentSystem {
    fn shape(&self) -> DiagShape {
        self.shape
    }

    fn projection(&self, j: i64, n: u64) -> DiagonalOperator {
        assert!(n >= 1, "level must be positive");
        match self.mode {
            ProviderMode::CongruenceExact => {
                let r = j.rem_euclid(n as i64) as u64;
                DiagonalOperator::from_real(self.shape, |k| f64::from(u8::from(k % n == r)))
            }
            ProviderMode::DftFloat => dft_projection(self.shape, j, n),
        }
    }
}

fn dft_projection(shape: DiagShape, j: i64, n: u64) -> DiagonalOperator {
    let s = s_operator(n, shape);
    let mut power = DiagonalOperator::identity(shape);
    let mut acc = DiagonalOperator::zero_of(&shape);
    let r = j.rem_euclid(n as i64) as u64;
    for l in 0..n {
        let phase = Complex64::from_polar(
            1.0,
            -std::f64::consts::TAU * ((l * r) % n) as f64 / n as f64,
        );
        acc = acc.try_add(&power.map(|v| v * phase)).expect("same shape");
        power = power.try_mul(&s).expect("same shape");
    }
    acc.map(|v| v / n as f64)
}

/// Which defining property a check exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Axiom {
    /// P_i(n) P_j(n) = δ_ij P_j(n).
    #[serde(rename = "I")]
    Orthogonality,
    /// P_{j+n}(n) = P_j(n).
    #[serde(rename = "II")]
    Periodicity,
    /// P_j(n) = Σ_{k=1}^{r} P_{j+kn}(nr).
    #[serde(rename = "III")]
    Refinement,
    /// Σ_{j<n} P_j(n) = e.
    #[serde(rename = "completeness")]
    Completeness,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub n: u64,
    pub j: Option<i64>,
    pub r: Option<u64>,
    pub residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomSummary {
    pub dim: usize,
    pub offset: u64,
    pub n_limit: u64,
    pub r_max: u64,
    pub total: usize,
    pub failed: usize,
    pub max_residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
    pub summary: AxiomSummary,
}

impl AxiomReport {
    pub fn violations(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Checks axioms I–III and completeness for every n ≤ `n_limit`, j < n, r ≤ `r_max`.
pub fn verify_axioms<P: IdempotentProvider + ?Sized>(
    system: &P,
    n_limit: u64,
    r_max: u64,
    tol: f64,
) -> Result<AxiomReport, IdempotentError> {
    let level = n_limit.saturating_mul(r_max);
    if level > MAX_AXIOM_LEVEL {
        return Err(IdempotentError::LevelBound { level });
    }
    let shape = system.shape();
    let id = DiagonalOperator::identity(shape);
    let zero = DiagonalOperator::zero_of(&shape);
    let mut checks = Vec::new();
    let mut max_residual = 0.0f64;
    let mut record = |checks: &mut Vec<AxiomCheck>, axiom, n, j, r, residual: f64| {
        max_residual = max_residual.max(residual);
        checks.push(AxiomCheck {
            axiom,
            n,
            j,
            r,
            residual,
            pass: residual <= tol,
        });
    };
    let dist = |a: &DiagonalOperator, b: &DiagonalOperator| a.distance(b).expect("same shape");

    for n in 1..=n_limit {
        let level: Vec<DiagonalOperator> = (0..n as i64).map(|j| system.projection(j, n)).collect();
        for (j, pj) in level.iter().enumerate() {
            let mut worst = 0.0f64;
            for (i, pi) in level.iter().enumerate() {
                let prod = pi.try_mul(pj).expect("same shape");
                worst = worst.max(if i == j {
                    dist(&prod, pj)
                } else {
                    dist(&prod, &zero)
                });
            }
            record(
                &mut checks,
                Axiom::Orthogonality,
                n,
                Some(j as i64),
                None,
                worst,
            );

            let j = j as i64;
            let shifted = dist(&system.projection(j + n as i64, n), pj)
                .max(dist(&system.projection(j - n as i64, n), pj));
            record(&mut checks, Axiom::Periodicity, n, Some(j), None, shifted);

            for r in 1..=r_max {
                let mut sum = zero.clone();
                for k in 1..=r as i64 {
                    sum = sum
                        .try_add(&system.projection(j + k * n as i64, n * r))
                        .expect("same shape");
                }
                record(
                    &mut checks,
                    Axiom::Refinement,
                    n,
                    Some(j),
                    Some(r),
                    dist(&sum, pj),
                );
            }
        }
        let total = level
            .iter()
            .fold(zero.clone(), |acc, p| acc.try_add(p).expect("same shape"));
        record(
            &mut checks,
            Axiom::Completeness,
            n,
            None,
            None,
            dist(&total, &id),
        );
    }

    let failed = checks.iter().filter(|c| !c.pass).count();
    let summary = AxiomSummary {
        dim: shape.dim,
        offset: shape.offset,
        n_limit,
        r_max,
        total: checks.len(),
        failed,
        max_residual,
        pass: failed == 0,
    };
    Ok(AxiomReport { checks, summary })
}

/// Symbolic value of a product of two idempotents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Prediction {
    Zero,
    /// P_j(level).
    Projection {
        j: u64,
        level: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductLaw {
    pub predicted: Prediction,
    #[serde(skip)]
    pub numeric: DiagonalOperator,
    pub residual: f64,
    pub pass: bool,
}

fn materialize<P: IdempotentProvider + ?Sized>(system: &P, p: Prediction) -> DiagonalOperator {
    match p {
        Prediction::Zero => DiagonalOperator::zero_of(&system.shape()),
        Prediction::Projection { j, level } => system.projection(j as i64, level),
    }
}

fn compare<P: IdempotentProvider + ?Sized>(
    system: &P,
    predicted: Prediction,
    numeric: DiagonalOperator,
    tol: f64,
) -> ProductLaw {
    let residual = numeric
        .distance(&materialize(system, predicted))
        .expect("same shape");
    ProductLaw {
        predicted,
        numeric,
        residual,
        pass: residual <= tol,
    }
}

/// P_k(n)·P_l(m) against P_j(lcm(n, m)) with j from the CRT, or zero when gcd(n, m) ∤ l − k.
pub fn product_law<P: IdempotentProvider + ?Sized>(
    system: &P,
    k: i64,
    n: u64,
    l: i64,
    m: u64,
    tol: f64,
) -> ProductLaw {
    let predicted = match crt_solve(k, n, l, m) {
        Some(j) => Prediction::Projection {
            j,
            level: n.lcm(&m),
        },
        None => Prediction::Zero,
    };
    let numeric = system
        .projection(k, n)
        .try_mul(&system.projection(l, m))
        .expect("same shape");
    compare(system, predicted, numeric, tol)
}

/// P_j(n)·P_k(m) for n | m: P_k(m) when k ≡ j (mod n), zero otherwise.
pub fn divisor_product_law<P: IdempotentProvider + ?Sized>(
    system: &P,
    j: i64,
    n: u64,
    k: i64,
    m: u64,
    tol: f64,
) -> Result<ProductLaw, IdempotentError> {
    if n == 0 || !m.is_multiple_of(n) {
        return Err(IdempotentError::NotDivisor { n, m });
    }
    let predicted = if (k - j).rem_euclid(n as i64) == 0 {
        Prediction::Projection {
            j: k.rem_euclid(m as i64) as u64,
            level: m,
        }
    } else {
        Prediction::Zero
    };
    let numeric = system
        .projection(j, n)
        .try_mul(&system.projection(k, m))
        .expect("same shape");
    Ok(compare(system, predicted, numeric, tol))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedIdentityReport {
    pub j: i64,
    pub n_max: u64,
    pub dim: usize,
    /// max_n ‖(αP_j □ βP_j)(n) − (α□β)(n)P_j(n)‖
    pub lcm_residual: f64,
    /// max_n ‖(αP_j ⊔ βP_j)(n) − (α⊔β)(n)P_j(n)‖
    pub unitary_residual: f64,
    /// max_n ‖(P_j □ P_j)(n) − M_2(n)P_j(n)‖
    pub m2_residual: f64,
    /// max_n ‖(P_j ⊔ P_j)(n) − 2^ω(n) P_j(n)‖
    pub two_omega_residual: f64,
    pub pass: bool,
}

/// The weighted product identities for lcm and unitary products, plus their α = β = 1 cases.
pub fn weighted_product_identities<P: IdempotentProvider + ?Sized>(
    alpha: &AlgFunction<i128>,
    beta: &AlgFunction<i128>,
    system: &P,
    j: i64,
    tol: f64,
) -> Result<WeightedIdentityReport, IdempotentError> {
    let n_max = alpha.n_max();
    let proj = AlgFunction::<DiagonalOperator>::from_fn(n_max, |n| system.projection(j, n))?;
    let a_p = AlgFunction::weighted(alpha, &proj)?;
    let b_p = AlgFunction::weighted(beta, &proj)?;

    let lcm_lhs = lcm_convolve(&a_p, &b_p)?;
    let lcm_rhs = AlgFunction::weighted(&lcm_convolve(alpha, beta)?, &proj)?;
    let uni_lhs = unitary_convolve(&a_p, &b_p)?;
    let uni_rhs = AlgFunction::weighted(&unitary_convolve(alpha, beta)?, &proj)?;

    let m2 = AlgFunction::tabulate(n_max, |n| lcm_tuple_count(2, n) as i128);
    let two_omega = AlgFunction::tabulate(n_max, |n| {
        crate::arith::divisors(n)
            .into_iter()
            .map(|d| i128::from(mobius(d) != 0))
            .sum()
    });
    let m2_residual = lcm_convolve(&proj, &proj)?.distance(&AlgFunction::weighted(&m2, &proj)?)?;
    let two_omega_residual =
        unitary_convolve(&proj, &proj)?.distance(&AlgFunction::weighted(&two_omega, &proj)?)?;
    let lcm_residual = lcm_lhs.distance(&lcm_rhs)?;
    let unitary_residual = uni_lhs.distance(&uni_rhs)?;

    let pass = [
        lcm_residual,
        unitary_residual,
        m2_residual,
        two_omega_residual,
    ]
    .iter()
    .all(|&r| r <= tol);
    Ok(WeightedIdentityReport {
        j,
        n_max,
        dim: system.shape().dim,
        lcm_residual,
        unitary_residual,
        m2_residual,
        two_omega_residual,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::is_idempotent;

    fn exact(dim: usize) -> IdempotentSystem {
        IdempotentSystem::exact(DiagShape::new(dim, 0))
    }

    fn diag(v: &[f64]) -> DiagonalOperator {
        DiagonalOperator::new(0, v.iter().map(|&x| Complex64::new(x, 0.0)).collect()).unwrap()
    }

    #[test]
    fn projection_examples() {
        let sys = exact(4);
        assert_eq!(
            sys.projection(0, 1),
            DiagonalOperator::identity(DiagShape::new(4, 0))
        );
        assert_eq!(sys.projection(1, 2), diag(&[0.0, 1.0, 0.0, 1.0]));
        assert_eq!(sys.projection(5, 3), sys.projection(2, 3));
        assert_eq!(sys.projection(-1, 3), sys.projection(2, 3));
    }

    #[test]
    fn offset_one_basis() {
        let sys = IdempotentSystem::exact(DiagShape::new(4, 1));
        // basis e_1..e_4
        assert_eq!(
            sys.projection(0, 2).entries(),
            diag(&[0.0, 1.0, 0.0, 1.0]).entries()
        );
    }

    #[test]
    fn dft_matches_congruence() {
        let shape = DiagShape::new(64, 0);
        let (ex, fl) = (IdempotentSystem::exact(shape), IdempotentSystem::dft(shape));
        for n in 1..=24u64 {
            for j in 0..n as i64 {
                let d = ex.projection(j, n).distance(&fl.projection(j, n)).unwrap();
                assert!(d < 1e-9, "n = {n}, j = {j}: {d:e}");
            }
        }
    }

    #[test]
    fn axioms_hold_exactly() {
        let report = verify_axioms(&exact(64), 12, 6, 0.0).unwrap();
        assert!(report.summary.pass, "{:?}", report.violations().next());
        assert_eq!(report.summary.max_residual, 0.0);
        // 78 orthogonality + 78 periodicity + 78*6 refinement + 12 completeness
        assert_eq!(report.summary.total, 78 * 8 + 12);
    }

    #[test]
    fn axioms_hold_for_dft_provider() {
        let sys = IdempotentSystem::dft(DiagShape::new(48, 1));
        assert!(verify_axioms(&sys, 8, 3, 1e-9).unwrap().summary.pass);
    }

    #[test]
    fn level_one_completeness() {
        let report = verify_axioms(&exact(5), 1, 1, 0.0).unwrap();
        let c: Vec<_> = report
            .checks
            .iter()
            .filter(|c| c.axiom == Axiom::Completeness)
            .collect();
        assert_eq!(c.len(), 1);
        assert!(c[0].pass);
    }

    struct Corrupted(IdempotentSystem);

    impl IdempotentProvider for Corrupted {
        fn shape(&self) -> DiagShape {
            self.0.shape()
        }
        fn projection(&self, j: i64, n: u64) -> DiagonalOperator {
            let p = self.0.projection(j, n);
            if n == 3 && j.rem_euclid(3) == 1 {
                p.map(|v| v * 2.0)
            } else {
                p
            }
        }
    }

    #[test]
    fn corrupted_provider_is_caught() {
        let report = verify_axioms(&Corrupted(exact(24)), 6, 2, 1e-9).unwrap();
        assert!(!report.summary.pass);
        assert!(report
            .violations()
            .any(|c| c.axiom == Axiom::Orthogonality && c.n == 3 && c.j == Some(1)));
    }

    #[test]
    fn level_bound_enforced() {
        assert!(matches!(
            verify_axioms(&exact(4), MAX_AXIOM_LEVEL, 2, 0.0),
            Err(IdempotentError::LevelBound { .. })
        ));
    }

    #[test]
    fn product_law_examples() {
        let sys = exact(36);
        let p = product_law(&sys, 1, 2, 2, 3, 0.0);
        assert_eq!(p.predicted, Prediction::Projection { j: 5, level: 6 });
        assert!(p.pass);
        let z = product_law(&sys, 0, 2, 1, 2, 0.0);
        assert_eq!(z.predicted, Prediction::Zero);
        assert!(z.pass);
        for (n, m) in [(4u64, 9u64), (5, 7), (8, 3)] {
            let c = product_law(&sys, 3, n, 3, m, 0.0);
            assert_eq!(
                c.predicted,
                Prediction::Projection {
                    j: 3 % (n * m),
                    level: n * m
                }
            );
            assert!(c.pass);
        }
    }

    #[test]
    fn product_law_exhaustive() {
        for n in 1..=12u64 {
            for m in 1..=12u64 {
                let sys = exact((n.lcm(&m) * 3) as usize);
                for k in 0..n as i64 {
                    for l in 0..m as i64 {
                        assert!(product_law(&sys, k, n, l, m, 0.0).pass, "{k} {n} {l} {m}");
                    }
                }
            }
        }
    }

    #[test]
    fn divisor_product_examples() {
        let sys = exact(16);
        let a = divisor_product_law(&sys, 1, 2, 3, 4, 0.0).unwrap();
        assert_eq!(a.predicted, Prediction::Projection { j: 3, level: 4 });
        assert!(a.pass);
        let b = divisor_product_law(&sys, 0, 2, 3, 4, 0.0).unwrap();
        assert_eq!(b.predicted, Prediction::Zero);
        assert!(b.pass);
        for k in 0..6 {
            let c = divisor_product_law(&sys, 7, 1, k, 6, 0.0).unwrap();
            assert!(c.pass && c.predicted != Prediction::Zero);
        }
        assert_eq!(
            divisor_product_law(&sys, 0, 3, 0, 4, 0.0),
            Err(IdempotentError::NotDivisor { n: 3, m: 4 })
        );
    }

    #[test]
    fn weighted_identities() {
        let sys = exact(72);
        let one = AlgFunction::tabulate(24, |_| 1);
        let r = weighted_product_identities(&one, &one, &sys, 1, 0.0).unwrap();
        assert!(r.pass, "{r:?}");
        let a = AlgFunction::tabulate(24, |n| (n as i128 % 5) - 2);
        let b = AlgFunction::tabulate(24, |n| 3 - (n as i128 % 4));
        assert!(
            weighted_product_identities(&a, &b, &sys, 4, 0.0)
                .unwrap()
                .pass
        );
    }

    #[test]
    fn weighted_scalar_shadows() {
        let sys = exact(24);
        let one = AlgFunction::tabulate(12, |_| 1);
        let proj = AlgFunction::<DiagonalOperator>::from_fn(12, |n| sys.projection(2, n)).unwrap();
        let w = AlgFunction::weighted(&one, &proj).unwrap();
        let boxed = lcm_convolve(&w, &w).unwrap();
        assert_eq!(boxed.get(4), &sys.projection(2, 4).map(|v| v * 5.0));
        let uni = unitary_convolve(&w, &w).unwrap();
        assert_eq!(uni.get(12), &sys.projection(2, 12).map(|v| v * 4.0));
        assert_eq!(boxed.get(1), &sys.projection(2, 1));
    }

    #[test]
    fn projections_are_idempotent() {
        let sys = exact(30);
        for n in 1..10 {
            for j in -3..12 {
                assert!(is_idempotent(&sys.projection(j, n), 0.0));
            }
        }
    }
}
