//! Classical Eisenstein series in the normalization
//! `G_k = -B_k/(2k) + Σ σ_{k-1}(n) q^n`, and their p-adic counterparts `G*_k`
//! obtained as coefficientwise limits of `G_{k + p^a (p-1)}`.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::QSeries;
use crate::error::{Error, Result};
use crate::exact_arith::{
    bernoulli, check_prime, congruent_mod, pow_big, rat, sigma, sigma_star, valuation,
    PadicValuation, Rational,
};

pub fn eisenstein_g(k: u64, precision: usize) -> Result<QSeries> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "Eisenstein weight must be even and >= 2, got {k}"
        )));
    }
    let n = precision.max(1);
    let mut coeffs = Vec::with_capacity(n);
    coeffs.push(-bernoulli(k) / rat(2 * k as i64));
    coeffs.extend((1..n as u64).map(|m| sigma(k - 1, m)));
    Ok(QSeries::from_coeffs(coeffs))
}

/// `G_k`, with odd weights mapped to the zero series (as in Zhu's recursion,
/// where the odd Eisenstein series vanish identically).
pub fn eisenstein_g_or_zero(k: u64, precision: usize) -> QSeries {
    if k % 2 == 1 {
        QSeries::zero(precision)
    } else {
        eisenstein_g(k, precision).expect("even weight >= 2")
    }
}

/// How the stage producing the constant term of `G*_k` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stabilization {
    /// Stop at the first two consecutive stages agreeing mod `p^m`.
    Heuristic,
    /// Use stage `a = m + STRICT_STAGE_OFFSET`; Kummer's congruence then
    /// guarantees agreement with the limit mod `p^{a+1}`.
    Strict,
}

pub(crate) const STRICT_STAGE_OFFSET: u32 = 0;

#[derive(Debug, Clone, Copy)]
pub struct StarOptions {
    pub mode: Stabilization,
    /// Largest stage `a` the heuristic may reach before giving up.
    pub max_stage: u32,
}

impl Default for StarOptions {
    fn default() -> Self {
        Self {
            mode: Stabilization::Heuristic,
            max_stage: 6,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StageValue {
    pub stage: u32,
    pub weight: u64,
    #[serde(serialize_with = "crate::qseries::json::ser_rational")]
    pub value: Rational,
    /// `v_p(value_a - value_{a-1})`; absent for the first stage.
    #[serde(serialize_with = "crate::qseries::json::ser_opt_valuation")]
    pub diff_valuation: Option<PadicValuation>,
}

/// Record of how the constant term of `G*_k` was pinned down.
#[derive(Debug, Clone, Serialize)]
pub struct StarCertificate {
    pub p: u64,
    pub weight: u64,
    pub padic_precision: u32,
    pub mode: Stabilization,
    pub stages: Vec<StageValue>,
    pub stage_used: u32,
    /// The Rational reported as the constant term; congruent to the stage
    /// value mod `p^m`.
    #[serde(serialize_with = "crate::qseries::json::ser_rational")]
    pub representative: Rational,
}

/// Point of the p-adic weight space `Z_p × Z/(p-1)`, with the `Z_p` part
/// truncated mod `p^m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PadicWeight {
    pub p: u64,
    pub precision: u32,
    pub zp_part: String,
    pub tors_part: u64,
}

impl PadicWeight {
    pub fn from_integer(p: u64, m: u32, k: u64) -> Self {
        let modulus = pow_big(p, m as u64);
        let zp = BigInt::from(k) % &modulus;
        // X = lim Z/p^m(p-1)Z; for p = 2 the torsion part is trivial
        let tors = if p == 2 { 0 } else { k % (p - 1) };
        Self {
            p,
            precision: m,
            zp_part: zp.to_string(),
            tors_part: tors,
        }
    }
}

fn check_star_weight(p: u64, k: u64) -> Result<()> {
    check_prime(p)?;
    if p < 5 {
        return Err(Error::UnsupportedPrime(p));
    }
    if k < 2 || k % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "p-adic Eisenstein weight must be even and >= 2, got {k}"
        )));
    }
    if k % (p - 1) == 0 {
        return Err(Error::KummerHypothesis { p, l: k - 1 });
    }
    Ok(())
}

/// `-(1 - p^{k-1}) B_k / (2k)`, the Euler-factor-corrected Bernoulli term.
fn corrected_constant(p: u64, k: u64) -> Rational {
    let euler = Rational::one() - Rational::from_integer(pow_big(p, k - 1));
    -(euler * bernoulli(k)) / rat(2 * k as i64)
}

/// Exact value `-(1 - p^{k-1}) B_k / (2k)` at the base weight, which the
/// stage sequence converges to when `p - 1 ∤ k`.
pub fn star_constant_exact(p: u64, k: u64) -> Result<Rational> {
    check_star_weight(p, k)?;
    Ok(corrected_constant(p, k))
}

pub fn eisenstein_g_star(p: u64, k: u64, precision: usize, m: u32) -> Result<QSeries> {
    eisenstein_g_star_certified(p, k, precision, m, StarOptions::default()).map(|(s, _)| s)
}

/// `G*_k` for `p >= 5`, even `k` with `p - 1 ∤ k`.
///
/// Coefficients of `q^n` (n >= 1) are `σ*_{k-1}(n)`. The constant term is the
/// limit of `-(1 - p^{k_a - 1}) B_{k_a}/(2 k_a)` along `k_a = k + p^a (p-1)`:
/// stages are evaluated until the stabilization rule fires, and the exact
/// base-weight value is returned after checking it agrees with the stabilized
/// stage mod `p^m`.
pub fn eisenstein_g_star_certified(
    p: u64,
    k: u64,
    precision: usize,
    m: u32,
    opts: StarOptions,
) -> Result<(QSeries, StarCertificate)> {
    check_star_weight(p, k)?;
    if m == 0 {
        return Err(Error::InvalidArgument(
            "p-adic precision m must be >= 1".into(),
        ));
    }
    let stage_weight = |a: u32| k + p.pow(a) * (p - 1);
    let mut stages: Vec<StageValue> = Vec::new();
    let push_stage = |stages: &mut Vec<StageValue>, a: u32| {
        let w = stage_weight(a);
        let value = corrected_constant(p, w);
        let diff_valuation = stages
            .last()
            .map(|prev| valuation(p, &(&value - &prev.value)));
        stages.push(StageValue {
            stage: a,
            weight: w,
            value,
            diff_valuation,
        });
    };

    let stage_used = match opts.mode {
        Stabilization::Strict => {
            let target = m + STRICT_STAGE_OFFSET;
            for a in 0..=target {
                push_stage(&mut stages, a);
            }
            target
        }
        Stabilization::Heuristic => {
            push_stage(&mut stages, 0);
            let mut a = 0;
            loop {
                if a + 1 > opts.max_stage {
                    return Err(Error::NoConvergence(format!(
                        "G*_{k} constant term for p = {p} not stable mod p^{m} by stage {}",
                        opts.max_stage
                    )));
                }
                push_stage(&mut stages, a + 1);
                let n = stages.len();
                if congruent_mod(&stages[n - 1].value, &stages[n - 2].value, p, m as i64) {
                    break a + 1;
                }
                a += 1;
            }
        }
    };

    let representative = corrected_constant(p, k);
    let used = &stages[stage_used as usize].value;
    if !congruent_mod(&representative, used, p, m as i64) {
        return Err(Error::NoConvergence(format!(
            "stage {stage_used} value of G*_{k} disagrees with the base-weight value mod {p}^{m}"
        )));
    }

    let n = precision.max(1);
    let mut coeffs = Vec::with_capacity(n);
    coeffs.push(representative.clone());
    for j in 1..n as u64 {
        coeffs.push(sigma_star(p, k - 1, j)?);
    }
    let cert = StarCertificate {
        p,
        weight: k,
        padic_precision: m,
        mode: opts.mode,
        stages,
        stage_used,
        representative,
    };
    Ok((QSeries::from_coeffs(coeffs), cert))
}
