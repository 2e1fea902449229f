//! Exact p-adic analysis: truncated `Q_p` arithmetic, clopen-ball measures on
//! `Z_p`, level-sum and Volkenborn integration, the Kubota–Leopoldt zeta
//! branches `ζ_{p,i}` and the p-adic Euler–Mascheroni constant `γ_p`.
//!
//! Every number is an exact residue with tracked precision; no floating point
//! is involved anywhere. The crate is organised bottom-up:
//!
//! * [`padic`]: [`PadicNumber`], Teichmüller decomposition, `log_p`, `exp_p`, powers.
//! * [`bernoulli`]: exact Bernoulli numbers, generalized Bernoulli numbers for
//!   powers of `ω`, unit moments and `Γ_p` at integers.
//! * [`measures`]: clopen sets and the Bernoulli, regularized, Haar and table measures.
//! * [`integration`]: Riemann level sums, Volkenborn integrals, Mahler coefficients.
//! * [`zeta`]: three evaluation routes for `ζ_{p,i}(s)` and their audit.
//! * [`mascheroni`]: five formulas for `γ_p` and their consensus.

pub mod bernoulli;
pub mod error;
pub mod integration;
pub(crate) mod levels;
pub mod mascheroni;
pub mod measures;
pub mod padic;
pub(crate) mod residue;
pub mod zeta;

pub use error::{Error, Result};
pub use padic::{PadicContext, PadicNumber};
