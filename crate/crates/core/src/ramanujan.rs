//! Operator-valued Ramanujan sums C_j(n) and the divisor-class idempotents T_{r,j}(n).
//!
//! In the congruence realization every operator here is diagonal:
//! C_j(n) acts on e_m as c_n(m − j) and T_{r,j}(n) keeps e_m exactly when
//! gcd(m − j, n) = n/r. The identities below are therefore scalar Ramanujan-sum
//! identities in disguise, and each one is checked both ways.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_integer::Integer;
use serde_json::json;
use thiserror::Error;

use crate::algebra::{DiagShape, DiagonalOperator, Element};
use crate::arith::{
    divisors, factorize, mobius, ramanujan_sum, rf_transform, ArithError, EvenFunction,
};
use crate::idempotent::{IdempotentProvider, IdempotentSystem};
use crate::params;
use crate::report::{Erratum, IdentityReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RamanujanError {
    #[error("{r} does not divide {n}")]
    NotDivisor { r: u64, n: u64 },
    #[error("function is even mod {modulus}, which does not divide {n}")]
    NotEvenMod { modulus: u64, n: u64 },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Smallest multiple of n that is at least 32.
pub fn default_dim(n: u64) -> usize {
    assert!(n >= 1);
    (32u64.div_ceil(n) * n) as usize
}

/// S(n): entry ε_n^k on e_k.
pub fn s_operator(n: u64, shape: DiagShape) -> DiagonalOperator {
    assert!(n >= 1, "level must be positive");
    DiagonalOperator::from_fn(shape, |k| root_of_unity(k % n, n))
}

fn root_of_unity(k: u64, n: u64) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64)
}

fn sum(shape: DiagShape, terms: impl IntoIterator<Item = DiagonalOperator>) -> DiagonalOperator {
    terms
        .into_iter()
        .fold(DiagonalOperator::zero_of(&shape), |acc, t| {
            acc.try_add(&t).expect("same shape")
        })
}

fn scaled(p: &DiagonalOperator, c: f64) -> DiagonalOperator {
    p.map(|v| v * c)
}

fn dist(a: &DiagonalOperator, b: &DiagonalOperator) -> f64 {
    a.distance(b).expect("same shape")
}

/// C_j, T_{r,j} and S over the exact congruence system of a fixed shape.
#[derive(Debug, Clone, Copy)]
pub struct OperatorFamily {
    system: IdempotentSystem,
}

impl OperatorFamily {
    pub fn new(shape: DiagShape) -> Self {
        Self {
            system: IdempotentSystem::exact(shape),
        }
    }

    pub fn shape(&self) -> DiagShape {
        self.system.shape()
    }

    pub fn system(&self) -> &IdempotentSystem {
        &self.system
    }

    fn p(&self, j: i64, n: u64) -> DiagonalOperator {
        self.system.projection(j, n)
    }

    fn e(&self) -> DiagonalOperator {
        DiagonalOperator::identity(self.shape())
    }

    pub fn s(&self, n: u64) -> DiagonalOperator {
        s_operator(n, self.shape())
    }

    /// Σ_{gcd(k,n)=1, 1≤k≤n} ε_n^{-jk} S(n)^k, in floating point.
    pub fn c_roots(&self, j: i64, n: u64) -> DiagonalOperator {
        let s = self.s(n);
        let jr = j.rem_euclid(n as i64) as u64;
        sum(
            self.shape(),
            (1..=n).filter(|k| k.gcd(&n) == 1).map(|k| {
                let phase = root_of_unity((n - (jr * k) % n) % n, n);
                s.pow(k as u32).map(|v| v * phase)
            }),
        )
    }

    /// (μ∗ν₁P_j)(n) = Σ_{d|n} μ(n/d)·d·P_j(d). Integer entries, exact.
    pub fn c_mobius(&self, j: i64, n: u64) -> DiagonalOperator {
        sum(
            self.shape(),
            divisors(n)
                .into_iter()
                .filter(|d| mobius(n / d) != 0)
                .map(|d| scaled(&self.p(j, d), (mobius(n / d) * d as i64) as f64)),
        )
    }

    /// n ∏_{p^a ∥ n} (P_j(p^a) − p⁻¹P_j(p^{a−1})).
    pub fn c_product(&self, j: i64, n: u64) -> DiagonalOperator {
        let fact = factorize(n).expect("level in range");
        let mut acc = scaled(&self.e(), n as f64);
        for &(p, a) in fact.pairs() {
            let high = self.p(j, p.pow(a));
            let low = scaled(&self.p(j, p.pow(a - 1)), 1.0 / p as f64);
            acc = acc
                .try_mul(&high.try_sub(&low).expect("same shape"))
                .expect("same shape");
        }
        acc
    }

    /// C_j(n), from the exact construction.
    pub fn c_operator(&self, j: i64, n: u64) -> DiagonalOperator {
        self.c_mobius(j, n)
    }

    /// T_{r,j}(n) = Σ_{gcd(k,n)=n/r, 1≤k≤n} P_{k+j}(n).
    pub fn t_operator(&self, r: u64, j: i64, n: u64) -> Result<DiagonalOperator, RamanujanError> {
        if r == 0 || !n.is_multiple_of(r) {
            return Err(RamanujanError::NotDivisor { r, n });
        }
        let g = n / r;
        Ok(sum(
            self.shape(),
            (1..=n)
                .filter(|k| k.gcd(&n) == g)
                .map(|k| self.p(k as i64 + j, n)),
        ))
    }

    /// T_j(n) = T_{n,j}(n).
    pub fn t_top(&self, j: i64, n: u64) -> DiagonalOperator {
        self.t_operator(n, j, n).expect("n divides n")
    }

    /// Σ_{δ|n} μ(δ)P_j(δ).
    pub fn t_mobius(&self, j: i64, n: u64) -> DiagonalOperator {
        sum(
            self.shape(),
            divisors(n)
                .into_iter()
                .filter(|&d| mobius(d) != 0)
                .map(|d| scaled(&self.p(j, d), mobius(d) as f64)),
        )
    }

    /// ∏_{p|n} (e − P_j(p)).
    pub fn t_product(&self, j: i64, n: u64) -> DiagonalOperator {
        let e = self.e();
        factorize(n)
            .expect("level in range")
            .primes()
            .fold(e.clone(), |acc, p| {
                acc.try_mul(&e.try_sub(&self.p(j, p)).expect("same shape"))
                    .expect("same shape")
            })
    }

    fn params(&self, j: i64, n: u64) -> crate::report::Params {
        let s = self.shape();
        params! { "j" => j, "n" => n, "dim" => s.dim, "offset" => s.offset }
    }

    /// The three constructions of C_j(n) against each other and against c_n(m − j).
    pub fn c_constructions(&self, j: i64, n: u64, tol: f64) -> Vec<IdentityReport> {
        let exact = self.c_mobius(j, n);
        let oracle =
            DiagonalOperator::from_real(self.shape(), |m| ramanujan_sum(n, m as i64 - j) as f64);
        vec![
            IdentityReport::evaluate(
                "Σ_{gcd(k,n)=1} ε_n^{-jk} S(n)^k = (μ∗ν₁P_j)(n)",
                self.params(j, n),
                dist(&self.c_roots(j, n), &exact),
                tol,
            ),
            IdentityReport::evaluate(
                "n ∏_{p^a∥n} (P_j(p^a) − p⁻¹P_j(p^{a−1})) = (μ∗ν₁P_j)(n)",
                self.params(j, n),
                dist(&self.c_product(j, n), &exact),
                tol,
            ),
            IdentityReport::evaluate(
                "C_j(n)e_m = c_n(m − j)e_m",
                self.params(j, n),
                dist(&exact, &oracle),
                tol,
            ),
        ]
    }

    /// T_{n,j}(n) against its Möbius-sum and product forms.
    pub fn t_top_identities(&self, j: i64, n: u64, tol: f64) -> Vec<IdentityReport> {
        let t = self.t_top(j, n);
        let oracle = DiagonalOperator::from_real(self.shape(), |m| {
            f64::from(u8::from((m as i64 - j).unsigned_abs().gcd(&n) == 1))
        });
        vec![
            IdentityReport::evaluate(
                "T_{n,j}(n) = Σ_{δ|n} μ(δ)P_j(δ)",
                self.params(j, n),
                dist(&t, &self.t_mobius(j, n)),
                tol,
            ),
            IdentityReport::evaluate(
                "T_{n,j}(n) = ∏_{p|n} (e − P_j(p))",
                self.params(j, n),
                dist(&t, &self.t_product(j, n)),
                tol,
            ),
            IdentityReport::evaluate(
                "T_{n,j}(n)e_m = [gcd(m − j, n) = 1]e_m",
                self.params(j, n),
                dist(&t, &oracle),
                tol,
            ),
        ]
    }

    /// {T_{r,j}(n) : r | n} is a complete set of τ(n) orthogonal idempotents.
    pub fn t_decomposition(&self, j: i64, n: u64, tol: f64) -> Vec<IdentityReport> {
        let members: Vec<DiagonalOperator> = divisors(n)
            .into_iter()
            .map(|r| self.t_operator(r, j, n).expect("r divides n"))
            .collect();
        let total = sum(self.shape(), members.iter().cloned());
        let zero = DiagonalOperator::zero_of(&self.shape());
        let mut orth = 0.0f64;
        for (a, ta) in members.iter().enumerate() {
            for (b, tb) in members.iter().enumerate() {
                let prod = ta.try_mul(tb).expect("same shape");
                orth = orth.max(dist(&prod, if a == b { ta } else { &zero }));
            }
        }
        let tau = factorize(n).expect("level in range").tau();
        let mut count_params = self.params(j, n);
        count_params.insert("members".into(), json!(members.len()));
        count_params.insert("tau".into(), json!(tau));
        vec![
            IdentityReport::evaluate(
                "Σ_{r|n} T_{r,j}(n) = e",
                self.params(j, n),
                dist(&total, &self.e()),
                tol,
            ),
            IdentityReport::evaluate(
                "T_{r,j}(n)T_{r',j}(n) = δ_{rr'}T_{r,j}(n)",
                self.params(j, n),
                orth,
                tol,
            ),
            IdentityReport::boolean(
                "#{T_{r,j}(n) : r | n} = τ(n)",
                count_params,
                members.len() as u64 == tau,
            ),
        ]
    }

    /// C_j(n) = Σ_{r|n} c_n(n/r)T_{r,j}(n) and T_{n,j}(n) = (1/n)Σ_{r|n} c_n(n/r)C_j(r).
    pub fn c_t_transforms(&self, j: i64, n: u64, tol: f64) -> Vec<IdentityReport> {
        let divs = divisors(n);
        let weight = |r: u64| ramanujan_sum(n, (n / r) as i64) as f64;
        let forward = sum(
            self.shape(),
            divs.iter()
                .map(|&r| scaled(&self.t_operator(r, j, n).expect("r divides n"), weight(r))),
        );
        let backward = scaled(
            &sum(
                self.shape(),
                divs.iter()
                    .map(|&r| scaled(&self.c_operator(j, r), weight(r))),
            ),
            1.0 / n as f64,
        );
        vec![
            IdentityReport::evaluate(
                "C_j(n) = Σ_{r|n} c_n(n/r)T_{r,j}(n)",
                self.params(j, n),
                dist(&forward, &self.c_operator(j, n)),
                tol,
            ),
            IdentityReport::evaluate(
                "T_{n,j}(n) = (1/n) Σ_{r|n} c_n(n/r)C_j(r)",
                self.params(j, n),
                dist(&backward, &self.t_top(j, n)),
                tol,
            ),
        ]
    }

    /// Σ_{r|n} α(n/r)C_j(r) = Σ_{r|n} ℛ(α)(r)T_{r,j}(n) with ℛ(α)(r) = Σ_{δ|n} α(n/δ)c_δ(n/r).
    pub fn even_function_identity(
        &self,
        alpha: &EvenFunction,
        j: i64,
        n: u64,
        tol: f64,
    ) -> Result<IdentityReport, RamanujanError> {
        if n == 0 || !n.is_multiple_of(alpha.modulus()) {
            return Err(RamanujanError::NotEvenMod {
                modulus: alpha.modulus(),
                n,
            });
        }
        let alpha = alpha.lift(n);
        let rf = rf_transform(&alpha)?;
        let divs = divisors(n);
        let lhs = sum(
            self.shape(),
            divs.iter()
                .map(|&r| self.c_operator(j, r).map(|v| v * alpha.eval(n / r))),
        );
        let rhs = sum(
            self.shape(),
            divs.iter().map(|&r| {
                let c = rf.divisor_sum.get(r);
                self.t_operator(r, j, n)
                    .expect("r divides n")
                    .map(|v| v * c)
            }),
        );
        let mut params = self.params(j, n);
        params.insert(
            "alpha".into(),
            json!(alpha
                .divisor_values()
                .iter()
                .map(|(d, v)| (d.to_string(), [v.re, v.im]))
                .collect::<BTreeMap<_, _>>()),
        );
        Ok(IdentityReport::evaluate(
            "Σ_{r|n} α(n/r)C_j(r) = Σ_{r|n} ℛ(α)(r)T_{r,j}(n)",
            params,
            dist(&lhs, &rhs),
            tol,
        ))
    }

    /// The prime-power evaluations C_j(p^k) and T_{p^k,j}(p^k), with the literal
    /// "T_j(p^k) = 0 for k ≥ 2" logged as an erratum.
    pub fn prime_power_cases(
        &self,
        j: i64,
        p: u64,
        k: u32,
        tol: f64,
    ) -> (Vec<IdentityReport>, Option<Erratum>) {
        assert!(k >= 1);
        let q = p.pow(k);
        let c_closed = scaled(
            &self
                .p(j, q)
                .try_sub(&scaled(&self.p(j, q / p), 1.0 / p as f64))
                .expect("same shape"),
            q as f64,
        );
        let e_minus = self.e().try_sub(&self.p(j, p)).expect("same shape");
        let t = self.t_top(j, q);
        let mut reports = vec![
            IdentityReport::evaluate(
                "C_j(p^k) = p^k(P_j(p^k) − p⁻¹P_j(p^{k−1}))",
                self.params(j, q),
                dist(&self.c_operator(j, q), &c_closed),
                tol,
            ),
            IdentityReport::evaluate(
                "T_{p^k,j}(p^k) = e − P_j(p)",
                self.params(j, q),
                dist(&t, &e_minus),
                tol,
            ),
        ];
        // (μP_j)(p^k) is what vanishes for k ≥ 2.
        let mu_term = scaled(&self.p(j, q), mobius(q) as f64);
        if k >= 2 {
            reports.push(IdentityReport::evaluate(
                "μ(p^k)P_j(p^k) = 0 for k ≥ 2",
                self.params(j, q),
                dist(&mu_term, &DiagonalOperator::zero_of(&self.shape())),
                tol,
            ));
            let norm = t.entries().iter().map(|v| v.norm()).fold(0.0, f64::max);
            let erratum = Erratum {
                statement: "T_j(p^k) = 0 for k ≥ 2".into(),
                params: params! { "j" => j, "p" => p, "k" => k, "dim" => self.shape().dim },
                evaluations: [
                    ("max |T_j(p^k) entry|".to_string(), json!(norm)),
                    ("‖T_j(p^k) − (e − P_j(p))‖".to_string(), json!(dist(&t, &e_minus))),
                ]
                .into_iter()
                .collect(),
                holds: norm == 0.0,
                note: "T_j(p^k) selects m with gcd(m − j, p) = 1 for every k ≥ 1; the zero case belongs to the summand μ(p^k)P_j(p^k)".into(),
            };
            (reports, Some(erratum))
        } else {
            (reports, None)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::is_idempotent;
    use crate::conv::{is_multiplicative, AlgFunction};

    fn real(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    fn fam(dim: usize) -> OperatorFamily {
        OperatorFamily::new(DiagShape::new(dim, 0))
    }

    fn all_pass(r: &[IdentityReport]) -> bool {
        r.iter().all(|c| c.pass)
    }

    #[test]
    fn s_examples() {
        let shape = DiagShape::new(4, 0);
        assert_eq!(s_operator(1, shape), DiagonalOperator::identity(shape));
        assert!(
            dist(
                &s_operator(2, shape),
                &DiagonalOperator::new(0, real(&[1.0, -1.0, 1.0, -1.0])).unwrap()
            ) < 1e-15
        );
        let shape = DiagShape::new(16, 0);
        assert!(dist(&s_operator(4, shape).pow(2), &s_operator(2, shape)) < 1e-12);
        for n in 1..10 {
            assert!(
                dist(
                    &s_operator(n, shape).pow(n as u32),
                    &DiagonalOperator::identity(shape)
                ) < 1e-9
            );
        }
    }

    #[test]
    fn c_examples() {
        let f = fam(12);
        assert_eq!(f.c_operator(0, 6).at(6), Complex64::new(2.0, 0.0));
        assert_eq!(f.c_operator(0, 1), DiagonalOperator::identity(f.shape()));
        assert!(dist(&f.c_roots(0, 1), &DiagonalOperator::identity(f.shape())) < 1e-12);
        let f = fam(8);
        assert_eq!(f.c_operator(1, 4).at(3), Complex64::new(-2.0, 0.0));
    }

    #[test]
    fn c_constructions_agree() {
        let f = fam(2520);
        for n in 1..=30 {
            for j in 0..3 {
                let r = f.c_constructions(j, n, 1e-9);
                assert!(all_pass(&r), "{r:?}");
                assert_eq!(r[2].max_residual, 0.0);
            }
        }
    }

    #[test]
    fn float_construction_is_not_exact() {
        let r = fam(64).c_constructions(1, 12, 0.0);
        assert!(!r[0].pass);
        assert!(r[0].max_residual < 1e-9);
    }

    #[test]
    fn t_examples() {
        let f = fam(8);
        let t = f.t_operator(2, 0, 4).unwrap();
        let picked: Vec<u64> = t
            .iter()
            .filter(|(_, v)| v.re == 1.0)
            .map(|(k, _)| k)
            .collect();
        assert_eq!(picked, vec![2, 6]);
        assert_eq!(f.t_operator(1, 0, 4).unwrap(), f.system().projection(0, 4));
        let top: Vec<u64> = f
            .t_top(0, 4)
            .iter()
            .filter(|(_, v)| v.re == 1.0)
            .map(|(k, _)| k)
            .collect();
        assert_eq!(top, vec![1, 3, 5, 7]);
        assert_eq!(
            f.t_operator(3, 0, 4),
            Err(RamanujanError::NotDivisor { r: 3, n: 4 })
        );
    }

    #[test]
    fn t_identities_hold_exactly() {
        let f = fam(36);
        for n in [1, 2, 5, 6, 12, 30] {
            for j in 0..3 {
                let r = f.t_top_identities(j, n, 0.0);
                assert!(all_pass(&r), "{r:?}");
                let d = f.t_decomposition(j, n, 0.0);
                assert!(all_pass(&d), "{d:?}");
            }
        }
        assert_eq!(f.t_top(0, 1), DiagonalOperator::identity(f.shape()));
    }

    #[test]
    fn decomposition_member_counts() {
        let f = fam(24);
        let r = f.t_decomposition(0, 12, 0.0);
        assert_eq!(r[2].params["members"], json!(6));
        let r = f.t_decomposition(0, 7, 0.0);
        assert_eq!(r[2].params["members"], json!(2));
        for rr in divisors(12) {
            assert!(is_idempotent(&f.t_operator(rr, 0, 12).unwrap(), 0.0));
        }
    }

    #[test]
    fn transforms_hold() {
        let f = fam(36);
        for (j, n) in [(0, 6), (0, 1), (2, 4), (1, 30), (2, 12)] {
            let r = f.c_t_transforms(j, n, 1e-12);
            assert!(all_pass(&r), "{r:?}");
        }
    }

    #[test]
    fn even_function_identity_examples() {
        let f = fam(16);
        let g = EvenFunction::from_fn(4, |d| Complex64::new(d as f64, 0.0));
        assert!(f.even_function_identity(&g, 0, 4, 1e-9).unwrap().pass);
        let one = EvenFunction::from_fn(1, |_| Complex64::new(1.0, 0.0));
        let f6 = fam(36);
        assert!(f6.even_function_identity(&one, 0, 6, 1e-9).unwrap().pass);
        assert!(f6.even_function_identity(&one, 2, 1, 0.0).unwrap().pass);
        assert_eq!(
            f6.even_function_identity(&g, 0, 6, 1e-9),
            Err(RamanujanError::NotEvenMod { modulus: 4, n: 6 })
        );
    }

    #[test]
    fn prime_powers() {
        let f = fam(2520);
        for p in [2u64, 3, 5, 7] {
            for k in 1..=3 {
                if p.pow(k) > 2520 {
                    continue;
                }
                let (r, erratum) = f.prime_power_cases(1, p, k, 1e-9);
                assert!(all_pass(&r), "{r:?}");
                assert_eq!(
                    erratum.map(|e| e.holds),
                    if k >= 2 { Some(false) } else { None }
                );
            }
        }
    }

    #[test]
    fn c_and_t_are_multiplicative() {
        let f = fam(2520);
        for j in [0, 1, 5] {
            let c = AlgFunction::from_fn(30, |n| f.c_operator(j, n)).unwrap();
            let v = is_multiplicative(&c, 0.0).unwrap();
            assert!(v.multiplicative, "C_{j}: {v:?}");
            let t = AlgFunction::from_fn(30, |n| f.t_top(j, n)).unwrap();
            assert!(is_multiplicative(&t, 0.0).unwrap().multiplicative, "T_{j}");
        }
    }

    #[test]
    fn default_dims() {
        assert_eq!(default_dim(1), 32);
        assert_eq!(default_dim(5), 35);
        assert_eq!(default_dim(32), 32);
        assert_eq!(default_dim(40), 40);
    }
}
