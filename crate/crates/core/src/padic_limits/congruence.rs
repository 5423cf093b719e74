//! Stage-to-stage congruences for the coefficients of `u_{r_a,t}`.
//!
//! The round-bracket expansion of `u_{r,t} = (1-p^r) v_{r,t}` has two kinds
//! of coefficients: Stirling terms on `h(-n-1) h(-1)^{t-2k}` and Bernoulli
//! terms on `h(-1)^{t-2k-1}`. Each is a stage-independent factor times a
//! stage-dependent one; the latter agree mod `p^{a+1}` between stages `a`
//! and `b >= a` (Euler's theorem, resp. Kummer's congruence).

use rayon::prelude::*;
use serde::Serialize;

use super::LimitSpec;
use crate::error::{Error, Result};
use crate::exact_arith::{
    bernoulli, binomial, factorial, int_rat, pow_big, rat, stirling_scaled, valuation,
    PadicValuation, Rational,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruenceReport {
    pub term: String,
    pub stages: [u32; 2],
    #[serde(serialize_with = "crate::qseries::json::ser_valuation")]
    pub observed_valuation: PadicValuation,
    pub required: i64,
    pub pass: bool,
}

impl CongruenceReport {
    fn new(term: String, a: u32, b: u32, diff: &Rational, p: u64, required: i64) -> Self {
        let observed_valuation = valuation(p, diff);
        Self {
            term,
            stages: [a, b],
            observed_valuation,
            required,
            pass: observed_valuation.at_least(required),
        }
    }
}

/// `1 - p^r`.
pub(crate) fn euler_factor(p: u64, r: u64) -> Rational {
    rat(1) - int_rat(pow_big(p, r))
}

/// `(2k+s)! / (k! (-24)^k)`.
fn correction(k: u64, s: u64) -> Rational {
    Rational::new(
        factorial(2 * k + s),
        factorial(k) * num_traits::pow(num_bigint::BigInt::from(-24), k as usize),
    )
}

/// `C(t,2k) (2k)!/(k!(-24)^k)`: the stage-independent part of a Stirling term.
pub(crate) fn stirling_fixed(t: u64, k: u64) -> Rational {
    int_rat(binomial(t, 2 * k)) * correction(k, 0)
}

/// `C(t,2k+1) (2k+1)!/(k!(-24)^k)`: the stage-independent part of a Bernoulli term.
pub(crate) fn kummer_fixed(t: u64, k: u64) -> Rational {
    int_rat(binomial(t, 2 * k + 1)) * correction(k, 1)
}

fn check_stages(spec: &LimitSpec, a: u32, b: u32) -> Result<()> {
    if a > b || b > spec.a_max {
        return Err(Error::InvalidArgument(format!(
            "stages must satisfy a <= b <= a_max = {}, got ({a}, {b})",
            spec.a_max
        )));
    }
    Ok(())
}

/// Fixed valuation of a factor; a vanishing factor counts as 0.
fn fixed_valuation(p: u64, x: &Rational) -> i64 {
    valuation(p, x).finite().unwrap_or(0)
}

/// Coefficient of `h(-n-1) h(-1)^{t-2k}` in `u_{r,t}` before collecting terms.
pub(crate) fn stirling_term(spec: &LimitSpec, r: u64, k: u64, n: u64) -> Rational {
    euler_factor(spec.p, r) * stirling_fixed(spec.t, k) * stirling_scaled(r, n)
}

/// Coefficient of `h(-1)^{t-2k-1}` in `u_{r,t}`.
pub(crate) fn kummer_term(spec: &LimitSpec, r: u64, k: u64) -> Rational {
    -(euler_factor(spec.p, r) * kummer_fixed(spec.t, k) * bernoulli(r + 1) / rat(r as i64 + 1))
}

/// Stirling term `(k, n)` at stages `a` and `b`, required to agree mod
/// `p^{a+x+1}` with `x = v_p(C(t,2k)(2k)!/(k!(-24)^k))`.
pub fn verify_stirling_congruence(
    spec: &LimitSpec,
    k: u64,
    n: u64,
    a: u32,
    b: u32,
) -> Result<CongruenceReport> {
    check_stages(spec, a, b)?;
    let p = spec.p;
    let x = fixed_valuation(p, &stirling_fixed(spec.t, k));
    let diff = stirling_term(spec, spec.r(a), k, n) - stirling_term(spec, spec.r(b), k, n);
    Ok(CongruenceReport::new(
        format!("stirling p={p} l={} t={} k={k} n={n}", spec.l, spec.t),
        a,
        b,
        &diff,
        p,
        a as i64 + x + 1,
    ))
}

/// Bernoulli term `k` at stages `a` and `b`, required to agree mod
/// `p^{a+y+1}` with `y = v_p(C(t,2k+1)(2k+1)!/(k!(-24)^k))`.
pub fn verify_kummer_congruence(
    spec: &LimitSpec,
    k: u64,
    a: u32,
    b: u32,
) -> Result<CongruenceReport> {
    check_stages(spec, a, b)?;
    if k > (spec.t - 1) / 2 {
        return Err(Error::InvalidArgument(format!(
            "Bernoulli term index k = {k} exceeds (t-1)/2 = {}",
            (spec.t - 1) / 2
        )));
    }
    let p = spec.p;
    let y = fixed_valuation(p, &kummer_fixed(spec.t, k));
    let diff = kummer_term(spec, spec.r(a), k) - kummer_term(spec, spec.r(b), k);
    Ok(CongruenceReport::new(
        format!("bernoulli p={p} l={} t={} k={k}", spec.l, spec.t),
        a,
        b,
        &diff,
        p,
        a as i64 + y + 1,
    ))
}

/// Every Stirling and Bernoulli term of `spec` for each stage pair. Stirling
/// terms run over `n < r_b`, past which both stages vanish.
pub fn congruence_reports(spec: &LimitSpec, pairs: &[(u32, u32)]) -> Result<Vec<CongruenceReport>> {
    let mut jobs: Vec<(u32, u32, u64, Option<u64>)> = Vec::new();
    for &(a, b) in pairs {
        check_stages(spec, a, b)?;
        for k in 0..=spec.t / 2 {
            for n in 0..spec.r(b) {
                jobs.push((a, b, k, Some(n)));
            }
        }
        for k in 0..=(spec.t - 1) / 2 {
            jobs.push((a, b, k, None));
        }
    }
    jobs.par_iter()
        .map(|&(a, b, k, n)| match n {
            Some(n) => verify_stirling_congruence(spec, k, n, a, b),
            None => verify_kummer_congruence(spec, k, a, b),
        })
        .collect()
}

/// The standard grid: `p ∈ {5, 7}`, admissible `l ∈ {1, 3}`, `t ∈ {1, 3}`,
/// stage pairs `(0,1)` and `(1,2)`.
pub fn congruence_grid() -> Vec<CongruenceReport> {
    let mut specs = Vec::new();
    for p in [5u64, 7] {
        for l in [1u64, 3] {
            for t in [1u64, 3] {
                if let Ok(spec) = LimitSpec::new(p, l, t, 2) {
                    specs.push(spec);
                }
            }
        }
    }
    specs
        .iter()
        .flat_map(|s| congruence_reports(s, &[(0, 1), (1, 2)]).expect("grid stages are in range"))
        .collect()
}
