//! The rescaled Heisenberg character `f(a) = η(q) Z(a, q)`, computed three
//! independent ways (perfect matchings, Zhu's recursion, and a literal graded
//! trace), plus the closed form for `h[-r] h[-1]^t 1`.

mod partition;
mod trace;
mod zhu;

pub use partition::char_pair_partition;
pub use trace::{char_trace_oracle, char_trace_oracle_bounded, TRACE_PRECISION_BOUND};
pub use zhu::{char_zhu, zhu_polynomial};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_arith::{double_factorial_odd, factorial, int_rat, rat, Rational};
use crate::qseries::{eisenstein_g, QSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    PairPartition,
    Zhu,
    TraceOracle,
    ClosedForm,
    LatticeClosedForm,
    LatticeZhu,
    HeisenbergLimit,
    LatticeLimit,
}

/// An f-image: a q-expansion with eta offset 0, tagged with its provenance.
#[derive(Debug, Clone, Serialize)]
pub struct CharacterResult {
    pub series: QSeries,
    pub provenance: Algorithm,
    /// Square-bracket weight of the input state, when it has one; the image
    /// is then quasi-modular of this weight.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub square_weight: Option<u64>,
}

impl CharacterResult {
    pub fn new(series: QSeries, provenance: Algorithm, square_weight: Option<u64>) -> Self {
        debug_assert!(series.eta_offset() == &Rational::from_integer(0.into()));
        Self {
            series,
            provenance,
            square_weight,
        }
    }
}

/// `2(-1)^{s+1} / ((s-1)!(t-1)!)` for the pair `{s, t}` with `s >= t`.
pub(crate) fn pair_scalar(s: u32, t: u32) -> Rational {
    let (s, t) = if s >= t { (s, t) } else { (t, s) };
    let sign = if s % 2 == 1 { 2 } else { -2 };
    rat(sign) / int_rat(factorial(s as u64 - 1) * factorial(t as u64 - 1))
}

/// `f(h[-r] h[-1]^t 1) = 2^{(t+1)/2} t (t-2)!! / (r-1)! · G_2^{(t-1)/2} G_{r+1}`.
pub fn f_closed_form(r: u64, t: u64, precision: usize) -> Result<CharacterResult> {
    for (name, v) in [("r", r), ("t", t)] {
        if v == 0 || v % 2 == 0 {
            return Err(Error::InvalidArgument(format!(
                "{name} must be odd and >= 1, got {v}"
            )));
        }
    }
    let scalar = int_rat(num_traits::pow(
        num_bigint::BigInt::from(2),
        ((t + 1) / 2) as usize,
    )) * rat(t as i64)
        * double_factorial_odd(t as i64 - 2)?
        / int_rat(factorial(r - 1));
    let series = eisenstein_g(2, precision)?
        .pow(((t - 1) / 2) as u32)
        .mul(&eisenstein_g(r + 1, precision)?)
        .scale(&scalar);
    Ok(CharacterResult::new(
        series,
        Algorithm::ClosedForm,
        Some(r + t),
    ))
}
