//! Round-bracket closed forms for `h[-1]^t 1`, `h(1) h[-1]^t 1` and
//! `(r-1)! h[-r] h[-1]^t 1`.

use num_bigint::BigInt;

use super::{FockState, Monomial};
use crate::error::{Error, Result};
use crate::exact_arith::{bernoulli, binomial, factorial, int_rat, rat, stirling_scaled, Rational};

fn require_odd(name: &str, v: u64) -> Result<()> {
    if v == 0 || v % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "{name} must be odd and >= 1, got {v}"
        )));
    }
    Ok(())
}

fn h1_power(e: u64) -> Monomial {
    Monomial {
        parts: vec![1; e as usize],
    }
}

/// `(2k)! / (k! (-24)^k)`
fn correction_factor(k: u64, shift: u64) -> Rational {
    let num = factorial(2 * k + shift);
    let den = factorial(k) * num_traits::pow(BigInt::from(-24), k as usize);
    Rational::new(num, den)
}

/// `h[-1]^t 1 = Σ_k C(t,2k) (2k)!/(k!(-24)^k) h(-1)^{t-2k} 1`.
pub fn h1_power_closed(t: u64) -> Result<FockState> {
    require_odd("t", t)?;
    Ok(FockState::from_terms((0..=t / 2).map(|k| {
        let c = int_rat(binomial(t, 2 * k)) * correction_factor(k, 0);
        (h1_power(t - 2 * k), c)
    })))
}

/// `h(1) h[-1]^t 1 = Σ_k C(t,2k+1) (2k+1)!/(k!(-24)^k) h(-1)^{t-2k-1} 1`.
pub fn annihilate_h1_power(t: u64) -> Result<FockState> {
    require_odd("t", t)?;
    Ok(FockState::from_terms((0..=(t - 1) / 2).map(|k| {
        let c = int_rat(binomial(t, 2 * k + 1)) * correction_factor(k, 1);
        (h1_power(t - 2 * k - 1), c)
    })))
}

/// `(r-1)! h[-r] h[-1]^t 1` in the round-bracket basis: a Stirling double
/// sum over `h(-n-1) h(-1)^{t-2k}` (finite since `n! S_r^{(n+1)}` vanishes
/// for `n >= r`) minus a Bernoulli correction on `h(-1)^{t-2k-1}`.
pub fn v_state_round(r: u64, t: u64) -> Result<FockState> {
    require_odd("r", r)?;
    require_odd("t", t)?;
    let mut out = FockState::zero();
    for k in 0..=t / 2 {
        let outer = int_rat(binomial(t, 2 * k)) * correction_factor(k, 0);
        let base = h1_power(t - 2 * k);
        for n in 0..r {
            let c = &outer * stirling_scaled(r, n);
            out.add_term(base.with_part(n as u32 + 1), c);
        }
    }
    let bern = bernoulli(r + 1) / rat(r as i64 + 1);
    for k in 0..=(t - 1) / 2 {
        let c = int_rat(binomial(t, 2 * k + 1)) * correction_factor(k, 1) * &bern;
        out.add_term(h1_power(t - 2 * k - 1), -c);
    }
    Ok(out)
}

/// Compares `h[-1]^t 1` against the generalized Hermite polynomial
/// `He_t^α(x) = Σ_k C(t,2k) (-α)^k (2k)!/(2^k k!) x^{t-2k}` at `α = 1/12`,
/// `x = h(-1)`.
pub fn hermite_check(t: u64) -> Result<bool> {
    let closed = h1_power_closed(t)?;
    let alpha = Rational::new(BigInt::from(1), BigInt::from(12));
    let hermite = FockState::from_terms((0..=t / 2).map(|k| {
        let c = int_rat(binomial(t, 2 * k))
            * num_traits::pow(-alpha.clone(), k as usize)
            * int_rat(factorial(2 * k))
            / int_rat(num_traits::pow(BigInt::from(2), k as usize) * factorial(k));
        (h1_power(t - 2 * k), c)
    }));
    Ok(closed == hermite)
}
