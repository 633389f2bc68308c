//! Exact and high-precision tools for the `q → 1` asymptotic expansion of
//! Ramanujan's `F(q) = Σ q^{m(m+1)/2} / (q)_m²`.
//!
//! Writing `q = e^{−s}`,
//!
//! ```text
//! F(e^{−s}) = √(s / (2π√5)) · e^{π²/(5s)} · R(s),    R(s) ~ 1 + Σ_{j≥1} b_j s^j
//! ```
//!
//! The coefficients `b_j` (and the exponential-form `c_j` with
//! `R = exp(Σ c_j s^j)`) are computed exactly in Q(i, 5^{1/4}), checked against
//! direct high-precision evaluation of `F`, and the divergence of the series is
//! measured.
//!
//! Modules:
//! - [`field`]: exact arithmetic in Q(i, 5^{1/4})
//! - [`sequences`]: Eulerian and Bernoulli numbers, `Li_{−n}`, `E_n`
//! - [`series`]: truncated series in `t = √s` with polynomial-in-`v` coefficients
//! - [`expansion`]: the exact `b_j` / `c_j` pipeline
//! - [`numeric`]: direct evaluation of `F`, `R` and the supporting identities
//! - [`divergence`]: growth diagnostics
//! - [`cli`]: the `unclosed` command-line front end

pub mod cli;
pub mod divergence;
pub mod error;
pub mod expansion;
pub mod field;
pub mod numeric;
pub mod real;
pub mod sequences;
pub mod series;

pub use error::{Error, Result};
pub use expansion::{compute_expansion, ExpansionResult};
pub use field::{FieldElem, Rational, SubfieldTag};
pub use real::{Complex, Real};
