//! Algebra-valued arithmetic functions, arithmetic systems of idempotents and
//! operator-valued Ramanujan sums on truncated monomial bases.
//!
//! Modules, bottom-up:
//!
//! - [`arith`]: exact scalar number theory (Möbius, totients, Ramanujan sums, CRT, even functions).
//! - [`algebra`]: the algebra contract and its scalar, dense and diagonal realizations.
//! - [`conv`]: tabulated functions into an algebra and the Dirichlet, lcm and unitary products.
//! - [`idempotent`]: congruence idempotents P_j(n) and their axioms.
//! - [`ramanujan`]: C_j(n), T_{r,j}(n) and the identities relating them.
//! - [`analytic`]: the diagonal model on truncated analytic function spaces.
//! - [`report`] and [`suite`]: machine-readable identity reports and the named check suites.

pub mod algebra;
pub mod analytic;
pub mod arith;
pub mod conv;
pub mod idempotent;
pub mod ramanujan;
pub mod report;
pub mod suite;
