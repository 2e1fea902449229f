//! Truncated arithmetic in `Q_p` and the analytic primitives built on it.

mod analytic;
mod number;

pub use analytic::{
    exp_p, iwasawa_log, one_unit_part, one_unit_power, padic_binom, teichmuller, teichmuller_residue,
    unit_decompose, PowerMethod, UnitDecomposition,
};
pub use number::{is_prime, to_digits, PadicContext, PadicNumber, DEFAULT_RESIDUE_BUDGET, MAX_DIGITS};

pub(crate) use number::{ilog_p, ppow, ratio_valuation};
#[cfg(test)]
pub(crate) use number::vp_u64;
