//! The diagonal model on truncated spaces of analytic functions.
//!
//! H_R is modelled by the monomials e_0..e_{N−1}, H_0 (functions vanishing at
//! the origin) by e_1..e_N. On H_0 the map 𝒫(α) = Σ_n α(n)P_0(n) acts on e_m
//! as (ν₀∗α)(m), which ties the operator identities below to exact divisor sums.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::algebra::{DenseMatrix, DiagShape, DiagonalOperator, Element, MatrixLike};
use crate::arith::{divisors, factorize, jordan_totient, mobius, ramanujan_sum, totient};
use crate::conv::{dirichlet_convolve, lcm_convolve, AlgFunction, ConvError};
use crate::params;
use crate::report::{Erratum, IdentityReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error("𝒫(α) is only defined on the H_0 model (offset 1)")]
    OffsetZero,
    #[error("α is tabulated to {have}, the space needs {need}")]
    TooShort { need: u64, have: u64 },
    #[error("level must be at least 2, got {0}")]
    LevelTooSmall(u64),
    #[error("growth prefix must be at least 4, got {0}")]
    PrefixTooShort(u64),
    #[error(transparent)]
    Conv(#[from] ConvError),
}

/// A window of the monomial basis: e_offset .. e_{offset+dim−1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TruncatedSpace {
    pub dim: usize,
    pub offset: u64,
}

impl TruncatedSpace {
    /// e_0 .. e_{N−1}.
    pub fn hr(dim: usize) -> Self {
        Self { dim, offset: 0 }
    }

    /// e_1 .. e_N.
    pub fn h0(dim: usize) -> Self {
        Self { dim, offset: 1 }
    }

    pub fn shape(&self) -> DiagShape {
        DiagShape::new(self.dim, self.offset)
    }

    /// Largest basis index.
    pub fn top(&self) -> u64 {
        self.offset + self.dim as u64 - 1
    }
}

/// C_0(n) with entries c_n(m) and T_0(n) with entries [gcd(n, m) = 1].
pub fn c0_t0_diagonals(n: u64, space: TruncatedSpace) -> (DiagonalOperator, DiagonalOperator) {
    let shape = space.shape();
    let c0 = DiagonalOperator::from_real(shape, |m| ramanujan_sum(n, m as i64) as f64);
    let t0 = DiagonalOperator::from_real(shape, |m| f64::from(u8::from(m.gcd(&n) == 1)));
    (c0, t0)
}

/// det of C_0(n) restricted to e_1..e_N, computed three ways.
#[derive(Debug, Clone, PartialEq)]
pub struct DetC0 {
    pub n: u64,
    pub dim: u64,
    pub squarefree: bool,
    /// ∏_{k=1}^N c_n(k).
    pub direct: BigInt,
    /// ∏_{p|n} (−1)^{N−⌊N/p⌋}(p−1)^{⌊N/p⌋} for squarefree n, else 0.
    pub closed_form: BigInt,
    /// ∏_{p|n} (1−p)^{⌊N/p⌋} for squarefree n, else 0, as printed.
    pub literal_form: BigInt,
}

pub fn det_c0(n: u64, dim: u64) -> Result<DetC0, AnalyticError> {
    if n < 2 {
        return Err(AnalyticError::LevelTooSmall(n));
    }
    let fact = factorize(n).expect("level in range");
    let squarefree = fact.is_squarefree();
    let direct: BigInt = (1..=dim)
        .map(|k| BigInt::from(ramanujan_sum(n, k as i64)))
        .product();
    let (closed_form, literal_form) = if squarefree {
        let mut closed = BigInt::one();
        let mut literal = BigInt::one();
        for p in fact.primes() {
            let q = (dim / p) as u32;
            let sign = if (dim - dim / p).is_multiple_of(2) {
                1
            } else {
                -1
            };
            closed *= BigInt::from(sign) * BigInt::from(p - 1).pow(q);
            literal *= BigInt::from(1 - p as i64).pow(q);
        }
        (closed, literal)
    } else {
        (BigInt::zero(), BigInt::zero())
    };
    Ok(DetC0 {
        n,
        dim,
        squarefree,
        direct,
        closed_form,
        literal_form,
    })
}

fn big_residual(a: &BigInt, b: &BigInt) -> f64 {
    if a == b {
        0.0
    } else {
        let d: BigInt = a - b;
        d.to_string()
            .parse::<f64>()
            .map(f64::abs)
            .unwrap_or(f64::INFINITY)
    }
}

/// The determinant identity as a report, plus the printed form as an erratum when it disagrees.
pub fn det_c0_report(n: u64, dim: u64) -> Result<(IdentityReport, Option<Erratum>), AnalyticError> {
    let d = det_c0(n, dim)?;
    let mut p = params! { "n" => n, "dim" => dim, "squarefree" => d.squarefree };
    p.insert("det".into(), json!(d.direct.to_string()));
    let report = IdentityReport::evaluate(
        "∏_{k=1}^N c_n(k) = ∏_{p|n} (−1)^{N−⌊N/p⌋}(p−1)^{⌊N/p⌋} (squarefree n), 0 otherwise",
        p,
        big_residual(&d.direct, &d.closed_form),
        0.0,
    );
    let erratum = (d.literal_form != d.direct).then(|| Erratum {
        statement: "∏_{k=1}^N c_n(k) = ∏_{p|n} (1−p)^{⌊N/p⌋} if n is squarefree".into(),
        params: params! { "n" => n, "dim" => dim },
        evaluations: [
            ("direct".to_string(), json!(d.direct.to_string())),
            ("printed".to_string(), json!(d.literal_form.to_string())),
        ]
        .into_iter()
        .collect(),
        holds: false,
        note: "the printed form drops the sign (−1)^{N·ω(n)}".into(),
    });
    Ok((report, erratum))
}

/// Trace identities for C_0(n) and T_0(n) on e_1..e_N, with the printed middle expressions as errata.
pub fn trace_identities(
    n: u64,
    dim: u64,
) -> Result<(Vec<IdentityReport>, Vec<Erratum>), AnalyticError> {
    if n < 2 {
        return Err(AnalyticError::LevelTooSmall(n));
    }
    let fact = factorize(n).expect("level in range");
    let big_n = dim as i128;
    let floor = |d: u64| big_n / d as i128;

    assert!(dim >= 1, "truncation must keep at least e_1");
    let (c0, t0) = c0_t0_diagonals(n, TruncatedSpace::h0(dim as usize));
    let (tr_c, tr_t) = (c0.trace().re.round() as i128, t0.trace().re.round() as i128);
    let direct_c: i128 = (1..=dim).map(|k| ramanujan_sum(n, k as i64) as i128).sum();
    let coprime = (1..=dim).filter(|k| k.gcd(&n) == 1).count() as i128;
    let divisor_c: i128 = divisors(n)
        .into_iter()
        .map(|d| d as i128 * mobius(n / d) as i128 * floor(d))
        .sum();
    let mobius_t: i128 = divisors(n)
        .into_iter()
        .map(|r| mobius(r) as i128 * floor(r))
        .sum();

    let p = || params! { "n" => n, "dim" => dim };
    let resid = |a: i128, b: i128| (a - b).unsigned_abs() as f64;
    let reports = vec![
        IdentityReport::evaluate(
            "tr C_0(n)|_N = Σ_{d|n} dμ(n/d)⌊N/d⌋",
            p(),
            resid(tr_c, divisor_c).max(resid(direct_c, divisor_c)),
            0.0,
        ),
        IdentityReport::evaluate(
            "tr T_0(n)|_N = #{m ≤ N : gcd(m, n) = 1} = Σ_{r|n} μ(r)⌊N/r⌋",
            p(),
            resid(tr_t, mobius_t).max(resid(coprime, mobius_t)),
            0.0,
        ),
    ];

    let mut errata = Vec::new();
    let prime_power_c: i128 = fact
        .pairs()
        .iter()
        .map(|&(q, a)| {
            let hi = q.pow(a);
            let lo = q.pow(a - 1);
            hi as i128 * floor(hi) - lo as i128 * floor(lo)
        })
        .sum();
    if prime_power_c != direct_c {
        errata.push(Erratum {
            statement:
                "Σ_{k=1}^N c_n(k) = Σ_l (p_l^{a_l}⌊N/p_l^{a_l}⌋ − p_l^{a_l−1}⌊N/p_l^{a_l−1}⌋)"
                    .into(),
            params: p(),
            evaluations: [
                ("trace".to_string(), json!(direct_c)),
                ("printed middle".to_string(), json!(prime_power_c)),
            ]
            .into_iter()
            .collect(),
            holds: false,
            note: "the middle expression is additive over prime powers, the trace is not".into(),
        });
    }
    let left: i128 = (1..=n)
        .filter(|k| k.gcd(&n) == 1)
        .map(|k| Integer::div_floor(&(big_n - k as i128), &(n as i128)))
        .sum();
    let omega_form: i128 = big_n * fact.omega() as i128 - fact.primes().map(floor).sum::<i128>();
    if left != mobius_t || omega_form != mobius_t {
        errata.push(Erratum {
            statement: "Σ_{gcd(k,n)=1, k≤n} ⌊(N−k)/n⌋ = Nω(n) − Σ_{p|n}⌊N/p⌋ = Σ_{r|n} μ(r)⌊N/r⌋"
                .into(),
            params: p(),
            evaluations: [
                ("Σ ⌊(N−k)/n⌋".to_string(), json!(left)),
                ("Nω(n) − Σ ⌊N/p⌋".to_string(), json!(omega_form)),
                ("Σ μ(r)⌊N/r⌋".to_string(), json!(mobius_t)),
            ]
            .into_iter()
            .collect(),
            holds: false,
            note: "only the coprime count Σ μ(r)⌊N/r⌋ equals tr T_0(n)|_N".into(),
        });
    }
    Ok((reports, errata))
}

/// m ↦ Σ_{d|m} α(d).
pub fn nu0_transform<E: Element>(alpha: &AlgFunction<E>) -> Result<AlgFunction<E>, ConvError> {
    let one = AlgFunction::from_fn(alpha.n_max(), |_| E::unit_of(alpha.shape()))?;
    dirichlet_convolve(&one, alpha)
}

/// 𝒫(α) on H_0: entry (ν₀∗α)(m) at e_m.
pub fn p_operator(
    alpha: &AlgFunction<i128>,
    space: TruncatedSpace,
) -> Result<DiagonalOperator, AnalyticError> {
    if space.offset == 0 {
        return Err(AnalyticError::OffsetZero);
    }
    let need = space.top();
    if alpha.n_max() < need {
        return Err(AnalyticError::TooShort {
            need,
            have: alpha.n_max(),
        });
    }
    let t = nu0_transform(&alpha.truncate(need))?;
    Ok(DiagonalOperator::from_real(space.shape(), |m| {
        *t.get(m) as f64
    }))
}

/// θ: entry m at e_m.
pub fn theta(space: TruncatedSpace) -> DiagonalOperator {
    DiagonalOperator::from_real(space.shape(), |m| m as f64)
}

fn table_residual(a: &AlgFunction<i128>, b: &AlgFunction<i128>) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).unsigned_abs() as f64)
        .fold(0.0, f64::max)
}

pub fn phi_table(n_max: u64) -> AlgFunction<i128> {
    AlgFunction::tabulate(n_max, |n| totient(n).into())
}

pub fn mobius_table(n_max: u64) -> AlgFunction<i128> {
    AlgFunction::tabulate(n_max, |n| mobius(n).into())
}

pub fn epsilon_table(n_max: u64) -> AlgFunction<i128> {
    AlgFunction::tabulate(n_max, |n| (n == 1).into())
}

/// 𝒫 as an algebra map, and its values on ε, μ, φ and J_r (r ≤ 3), checked exactly on tables to `n_max`
/// and as operators on `space`.
pub fn p_operator_identities(
    space: TruncatedSpace,
    n_max: u64,
    pairs: &[(AlgFunction<i128>, AlgFunction<i128>)],
) -> Result<Vec<IdentityReport>, AnalyticError> {
    let mut out = Vec::new();
    let p = |extra: &[(&str, serde_json::Value)]| {
        let mut m = params! { "n_max" => n_max, "dim" => space.dim, "offset" => space.offset };
        for (k, v) in extra {
            m.insert((*k).to_string(), v.clone());
        }
        m
    };

    for (i, (a, b)) in pairs.iter().enumerate() {
        let (a, b) = (a.truncate(n_max), b.truncate(n_max));
        let lhs = nu0_transform(&lcm_convolve(&a, &b)?)?;
        let rhs = nu0_transform(&a)?.pointwise_mul(&nu0_transform(&b)?)?;
        out.push(IdentityReport::evaluate(
            "𝒫(α□β) = 𝒫(α)𝒫(β)",
            p(&[("pair", json!(i))]),
            table_residual(&lhs, &rhs),
            0.0,
        ));
    }

    let eps = nu0_transform(&epsilon_table(n_max))?;
    out.push(IdentityReport::evaluate(
        "𝒫(ε) = i_{H_0}",
        p(&[]),
        table_residual(&eps, &AlgFunction::tabulate(n_max, |_| 1)),
        0.0,
    ));
    let mu = nu0_transform(&mobius_table(n_max))?;
    out.push(IdentityReport::evaluate(
        "𝒫(μ) = e₁⊗e₁",
        p(&[]),
        table_residual(&mu, &epsilon_table(n_max)),
        0.0,
    ));

    let phi = phi_table(n_max);
    let mut power = phi.clone();
    for r in 1..=3u32 {
        if r > 1 {
            power = lcm_convolve(&power, &phi)?;
        }
        let jordan = AlgFunction::tabulate(n_max, |n| jordan_totient(r, n) as i128);
        let target = AlgFunction::tabulate(n_max, |m| (m as i128).pow(r));
        out.push(IdentityReport::evaluate(
            "J_r = φ □ … □ φ (r times)",
            p(&[("r", json!(r))]),
            table_residual(&power, &jordan),
            0.0,
        ));
        out.push(IdentityReport::evaluate(
            if r == 1 {
                "𝒫(φ) = θ"
            } else {
                "𝒫(J_r) = θ^r"
            },
            p(&[("r", json!(r))]),
            table_residual(&nu0_transform(&jordan)?, &target),
            0.0,
        ));
    }

    if space.offset == 1 {
        let top = space.top();
        let th = theta(space);
        for r in 1..=3u32 {
            let jordan = AlgFunction::tabulate(top, |n| jordan_totient(r, n) as i128);
            let residual = p_operator(&jordan, space)?
                .distance(&th.pow(r))
                .expect("same shape");
            out.push(IdentityReport::evaluate(
                "𝒫(J_r) = θ^r as diagonal operators",
                p(&[("r", json!(r))]),
                residual,
                0.0,
            ));
        }
    }
    Ok(out)
}

/// U, U*, I and θ as matrices on a truncated space. U and I drop the component past the top index.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftOperators {
    pub u: DenseMatrix,
    pub u_star: DenseMatrix,
    pub integration: DenseMatrix,
    pub theta: DenseMatrix,
}

pub fn shift_operators(space: TruncatedSpace) -> ShiftOperators {
    let n = space.dim;
    let k = |i: usize| space.offset + i as u64;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    ShiftOperators {
        u: DenseMatrix::from_fn(n, |r, c| if r == c + 1 { one } else { zero }),
        u_star: DenseMatrix::from_fn(n, |r, c| if r + 1 == c { one } else { zero }),
        integration: DenseMatrix::from_fn(n, |r, c| {
            if r == c + 1 {
                Complex64::new(1.0 / (k(c) + 1) as f64, 0.0)
            } else {
                zero
            }
        }),
        theta: DenseMatrix::from_fn(n, |r, c| {
            if r == c {
                Complex64::new(k(c) as f64, 0.0)
            } else {
                zero
            }
        }),
    }
}

/// Exact diagonal of I∘U*: 1/m at e_m, except 0 where U* leaves the window.
pub fn iu_star_diagonal(space: TruncatedSpace) -> Vec<Ratio<i128>> {
    (0..space.dim)
        .map(|i| {
            let m = space.offset + i as u64;
            if i == 0 || m == 0 {
                Ratio::zero()
            } else {
                Ratio::new(1, m as i128)
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IuCandidate {
    pub alpha: String,
    /// 𝒫(α) matches I∘U* at every 2 ≤ m ≤ n_max.
    pub matches_interior: bool,
    pub first_mismatch: Option<u64>,
    /// (ν₀∗α)(1).
    pub value_at_one: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IuStarReport {
    pub dim: usize,
    pub n_max: u64,
    /// max |(I·U*)_{mm} − 1/m| over 2 ≤ m ≤ dim, from the dense matrices.
    pub matrix_residual: f64,
    /// Whether the dense I·U* is diagonal.
    pub matrix_is_diagonal: bool,
    pub candidates: Vec<IuCandidate>,
    /// I∘U* e_1 = 0, while 1/m = 1 at m = 1.
    pub edge_value: String,
}

fn ratio_table(n_max: u64, f: impl Fn(u64) -> Ratio<i128>) -> AlgFunction<Ratio<i128>> {
    AlgFunction::from_fn(n_max, f).expect("non-empty table")
}

/// Which of μ∗ν₁ and μ∗ν_{−1} reproduces the diagonal of I∘U* on H_0.
pub fn iu_star_representation(
    space: TruncatedSpace,
    n_max: u64,
) -> Result<IuStarReport, AnalyticError> {
    if space.offset == 0 {
        return Err(AnalyticError::OffsetZero);
    }
    let ops = shift_operators(space);
    let iu = ops
        .integration
        .try_mul(&ops.u_star)
        .expect("same dimension");
    let exact = iu_star_diagonal(space);
    let matrix_residual = (1..space.dim)
        .map(|i| (iu.get(i, i) - Complex64::new(1.0 / (i as f64 + 1.0), 0.0)).norm())
        .fold(0.0, f64::max);

    let mu = ratio_table(n_max, |n| Ratio::from_integer(mobius(n).into()));
    let mut candidates = Vec::new();
    for (name, nu) in [
        (
            "μ∗ν₁",
            ratio_table(n_max, |n| Ratio::from_integer(n as i128)),
        ),
        ("μ∗ν₋₁", ratio_table(n_max, |n| Ratio::new(1, n as i128))),
    ] {
        let t = nu0_transform(&dirichlet_convolve(&mu, &nu)?)?;
        let first_mismatch = (2..=n_max).find(|&m| *t.get(m) != Ratio::new(1, m as i128));
        candidates.push(IuCandidate {
            alpha: name.into(),
            matches_interior: first_mismatch.is_none(),
            first_mismatch,
            value_at_one: t.get(1).to_string(),
        });
    }
    Ok(IuStarReport {
        dim: space.dim,
        n_max,
        matrix_residual,
        matrix_is_diagonal: iu.is_diagonal(0.0),
        candidates,
        edge_value: exact[0].to_string(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Continuity {
    PlausiblyContinuous,
    NotContinuous,
}

/// Finite-prefix view of |(ν₀∗α)(m)|^{1/m}. A heuristic, never a limsup.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthDiagnostic {
    pub prefix: u64,
    /// values[m−1] = |(ν₀∗α)(m)|^{1/m}.
    pub values: Vec<f64>,
    /// Max over ⌈M/2⌉ ≤ m ≤ M.
    pub indicator: f64,
    /// Max over ⌈M/4⌉ ≤ m ≤ ⌊M/2⌋, the same window for the half-length prefix.
    pub half_indicator: f64,
    /// The excess over 1 shrank by at least a quarter from the half prefix to the full prefix.
    pub shrinking: bool,
    pub classification: Continuity,
}

impl GrowthDiagnostic {
    /// CSV with header "m,root_value".
    pub fn to_csv(&self) -> String {
        let mut s = String::from("m,root_value\n");
        for (i, v) in self.values.iter().enumerate() {
            s.push_str(&format!("{},{}\n", i + 1, v));
        }
        s
    }
}

const CONTINUITY_SLACK: f64 = 1e-6;

pub fn growth_indicator(
    alpha: &AlgFunction<i128>,
    prefix: u64,
) -> Result<GrowthDiagnostic, AnalyticError> {
    if prefix < 4 {
        return Err(AnalyticError::PrefixTooShort(prefix));
    }
    if alpha.n_max() < prefix {
        return Err(AnalyticError::TooShort {
            need: prefix,
            have: alpha.n_max(),
        });
    }
    let t = nu0_transform(&alpha.truncate(prefix))?;
    let values: Vec<f64> = t
        .iter()
        .map(|(m, &v)| (v as f64).abs().powf(1.0 / m as f64))
        .collect();
    let window_max = |lo: u64, hi: u64| {
        values[lo as usize - 1..hi as usize]
            .iter()
            .copied()
            .fold(0.0, f64::max)
    };
    let indicator = window_max(prefix.div_ceil(2), prefix);
    let half_indicator = window_max(prefix.div_ceil(4), prefix / 2);
    let shrinking = indicator - 1.0 <= 0.75 * (half_indicator - 1.0);
    let classification = if indicator <= 1.0 + CONTINUITY_SLACK || shrinking {
        Continuity::PlausiblyContinuous
    } else {
        Continuity::NotContinuous
    };
    Ok(GrowthDiagnostic {
        prefix,
        values,
        indicator,
        half_indicator,
        shrinking,
        classification,
    })
}
