//! p-adic limits along `r_a = p^a (p-1) + l`: the rescaled states
//! `u_{r_a,t} = (1 - p^{r_a}) (r_a - 1)! h[-r_a] h[-1]^t 1`, their stagewise
//! congruences, the limit state mod `p^m`, and the limit character
//! `2^{(t+1)/2} t (t-2)!! G_2^{(t-1)/2} G*_{l+1}`.

mod congruence;

pub use congruence::{
    congruence_grid, congruence_reports, verify_kummer_congruence, verify_stirling_congruence,
    CongruenceReport,
};

use serde::Serialize;

use crate::characters::{f_closed_form, Algorithm, CharacterResult};
use crate::error::{Error, Result};
use crate::exact_arith::{
    check_prime, double_factorial_odd, factorial, int_rat, rat, residue_mod_prime_power, valuation,
    PadicValuation, Rational,
};
use crate::heisenberg_fock::{v_state_round, FockState};
use crate::qseries::{
    eisenstein_g, eisenstein_g_star_certified, PadicWeight, QSeries, StarCertificate, StarOptions,
};

use congruence::{euler_factor, kummer_fixed, stirling_fixed};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LimitSpec {
    pub p: u64,
    pub l: u64,
    pub t: u64,
    pub a_max: u32,
}

impl LimitSpec {
    /// Requires `p >= 5` prime, `l` and `t` odd and positive, and
    /// `l ≢ -1 (mod p-1)`.
    pub fn new(p: u64, l: u64, t: u64, a_max: u32) -> Result<Self> {
        check_prime(p)?;
        if p < 5 {
            return Err(Error::UnsupportedPrime(p));
        }
        for (name, v) in [("l", l), ("t", t)] {
            if v == 0 || v % 2 == 0 {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be odd and >= 1, got {v}"
                )));
            }
        }
        if (l + 1) % (p - 1) == 0 {
            return Err(Error::KummerHypothesis { p, l });
        }
        if p.checked_pow(a_max).is_none() {
            return Err(Error::InvalidArgument(format!(
                "a_max = {a_max} is out of range"
            )));
        }
        Ok(Self { p, l, t, a_max })
    }

    /// `r_a = p^a (p-1) + l`, always odd.
    pub fn r(&self, a: u32) -> u64 {
        self.p.pow(a) * (self.p - 1) + self.l
    }

    /// Weight `l + 1` of the limit form as a point of `Z_p × Z/(p-1)`.
    pub fn weight(&self, m: u32) -> PadicWeight {
        PadicWeight::from_integer(self.p, m, self.l + 1)
    }

    fn check_stage(&self, a: u32) -> Result<()> {
        if a > self.a_max {
            return Err(Error::InvalidArgument(format!(
                "stage {a} exceeds a_max = {}",
                self.a_max
            )));
        }
        Ok(())
    }
}

/// `u_{r_a,t} = (1 - p^{r_a}) v_{r_a,t}` in the round-bracket basis.
pub fn build_u_state(spec: &LimitSpec, a: u32) -> Result<FockState> {
    spec.check_stage(a)?;
    let r = spec.r(a);
    Ok(v_state_round(r, spec.t)?.scale(&euler_factor(spec.p, r)))
}

#[derive(Debug, Clone, Serialize)]
pub struct TermMargin {
    pub term: String,
    pub fixed_valuation: i64,
    /// `a + fixed_valuation + 1 - m`; nonnegative for a certified stage.
    pub margin: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitStateCertificate {
    pub p: u64,
    pub padic_precision: u32,
    pub stage_used: u32,
    pub r_used: u64,
    /// The materialized range of `n` in `h(-n-1) h(-1)^{t-2k}`; the limit has
    /// unbounded support and is reported only up to `r_used - 1`.
    pub n_range: [u64; 2],
    pub terms: Vec<TermMargin>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitState {
    #[serde(serialize_with = "ser_display")]
    pub state: FockState,
    pub certificate: LimitStateCertificate,
}

fn ser_display<S: serde::Serializer, T: std::fmt::Display>(
    x: &T,
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    ser.collect_str(x)
}

/// The limit state mod `p^m`: the stage `a` with `a + min(x, y) + 1 >= m`
/// over every term's fixed valuation, with coefficients reduced to
/// canonical residues in `[0, p^m)`.
pub fn limit_state(spec: &LimitSpec, m: u32) -> Result<LimitState> {
    limit_state_scaled(spec, m, 0)
}

/// [`limit_state`] with the Euler factor `1 - p^{r_a + shift}`.
pub(crate) fn limit_state_scaled(spec: &LimitSpec, m: u32, shift: u64) -> Result<LimitState> {
    if m == 0 {
        return Err(Error::InvalidArgument(
            "p-adic precision m must be >= 1".into(),
        ));
    }
    let p = spec.p;
    let t = spec.t;
    let mut fixed: Vec<(String, i64)> = Vec::new();
    for k in 0..=t / 2 {
        let x = valuation(p, &stirling_fixed(t, k)).finite().unwrap_or(0);
        fixed.push((format!("stirling k={k}"), x));
    }
    for k in 0..=(t - 1) / 2 {
        let y = valuation(p, &kummer_fixed(t, k)).finite().unwrap_or(0);
        fixed.push((format!("bernoulli k={k}"), y));
    }
    let min_fixed = fixed.iter().map(|(_, v)| *v).min().unwrap_or(0);
    let a = (m as i64 - 1 - min_fixed).max(0) as u32;
    if a > spec.a_max {
        return Err(Error::NoConvergence(format!(
            "precision p^{m} needs stage {a} but a_max = {}",
            spec.a_max
        )));
    }
    let r = spec.r(a);
    let stage = v_state_round(r, t)?.scale(&euler_factor(p, r + shift));
    let mut state = FockState::zero();
    for (mono, c) in stage.terms() {
        let res = residue_mod_prime_power(c, p, m).ok_or_else(|| {
            Error::NoConvergence(format!("coefficient {c} of {mono} is not {p}-integral"))
        })?;
        state.add_term(mono.clone(), int_rat(res));
    }
    let terms = fixed
        .into_iter()
        .map(|(term, v)| TermMargin {
            term,
            fixed_valuation: v,
            margin: a as i64 + v + 1 - m as i64,
        })
        .collect();
    Ok(LimitState {
        state,
        certificate: LimitStateCertificate {
            p,
            padic_precision: m,
            stage_used: a,
            r_used: r,
            n_range: [0, r - 1],
            terms,
        },
    })
}

/// One finite stage compared against the limit.
#[derive(Debug, Clone, Serialize)]
pub struct StageRow {
    pub stage: u32,
    pub r: u64,
    /// Minimum valuation of `stage - limit` over the stored coefficients.
    #[serde(serialize_with = "crate::qseries::json::ser_valuation")]
    pub observed_valuation: PadicValuation,
    pub required: i64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceCertificate {
    pub p: u64,
    pub l: u64,
    pub t: u64,
    pub padic_precision: u32,
    pub weight: PadicWeight,
    pub star: StarCertificate,
    /// Minimum valuation of the cofactor multiplying `G*_{l+1}`; stage `a`
    /// must agree with the limit to valuation `a + 1 + offset`.
    pub offset: i64,
    pub stages: Vec<StageRow>,
    pub weakly_increasing: bool,
    pub strictly_increasing: bool,
}

impl ConvergenceCertificate {
    pub fn all_pass(&self) -> bool {
        self.stages.iter().all(|s| s.pass) && self.weakly_increasing
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitResult {
    pub character: CharacterResult,
    pub certificate: ConvergenceCertificate,
}

/// Compares each `(a, r_a, stage)` with the limit series and tabulates the
/// valuations of the differences.
pub(crate) fn stage_table(
    p: u64,
    limit: &QSeries,
    offset: i64,
    stages: impl IntoIterator<Item = (u32, u64, QSeries)>,
) -> Result<(Vec<StageRow>, bool, bool)> {
    let mut rows = Vec::new();
    for (a, r, s) in stages {
        let observed_valuation = s.sub(limit)?.min_valuation(p);
        let required = a as i64 + 1 + offset;
        rows.push(StageRow {
            stage: a,
            r,
            observed_valuation,
            required,
            pass: observed_valuation.at_least(required),
        });
    }
    let weak = rows
        .windows(2)
        .all(|w| w[0].observed_valuation <= w[1].observed_valuation);
    let strict = rows.windows(2).all(|w| {
        w[0].observed_valuation < w[1].observed_valuation
            || w[0].observed_valuation == PadicValuation::Infinite
    });
    Ok((rows, weak, strict))
}

/// Finite-valued minimum valuation of a nonzero cofactor.
pub(crate) fn cofactor_offset(p: u64, cof: &QSeries) -> Result<i64> {
    cof.min_valuation(p)
        .finite()
        .ok_or_else(|| Error::InvalidArgument("cofactor of the limit vanishes".into()))
}

pub fn theorem1_limit(spec: &LimitSpec, precision: usize, m: u32) -> Result<LimitResult> {
    theorem1_limit_with(spec, precision, m, StarOptions::default())
}

/// `f(u_{l,t}) = 2^{(t+1)/2} t (t-2)!! G_2^{(t-1)/2} G*_{l+1}`, together with
/// the stage characters `(1 - p^{r_a}) (r_a - 1)! f(h[-r_a] h[-1]^t 1)` for
/// `a <= a_max` and their valuations against the limit.
pub fn theorem1_limit_with(
    spec: &LimitSpec,
    precision: usize,
    m: u32,
    opts: StarOptions,
) -> Result<LimitResult> {
    let (p, l, t) = (spec.p, spec.l, spec.t);
    let (gstar, star) = eisenstein_g_star_certified(p, l + 1, precision, m, opts)?;
    let scalar = int_rat(num_traits::pow(
        num_bigint::BigInt::from(2),
        ((t + 1) / 2) as usize,
    )) * rat(t as i64)
        * double_factorial_odd(t as i64 - 2)?;
    let cof = eisenstein_g(2, precision)?
        .pow(((t - 1) / 2) as u32)
        .scale(&scalar);
    let limit = cof.mul(&gstar);
    let offset = cofactor_offset(p, &cof)?;

    let stages = (0..=spec.a_max)
        .map(|a| {
            let r = spec.r(a);
            let f = f_closed_form(r, t, precision)?.series;
            let scale = euler_factor(p, r) * int_rat(factorial(r - 1));
            Ok((a, r, f.scale(&scale)))
        })
        .collect::<Result<Vec<_>>>()?;
    let (rows, weak, strict) = stage_table(p, &limit, offset, stages)?;

    Ok(LimitResult {
        character: CharacterResult::new(limit, Algorithm::HeisenbergLimit, Some(l + 1 + t)),
        certificate: ConvergenceCertificate {
            p,
            l,
            t,
            padic_precision: m,
            weight: spec.weight(m),
            star,
            offset,
            stages: rows,
            weakly_increasing: weak,
            strictly_increasing: strict,
        },
    })
}

/// Residues of a coefficient list mod `p^m`; `None` entries are not p-integral.
pub fn residues(series: &QSeries, p: u64, m: u32) -> Vec<Option<Rational>> {
    series
        .coeffs()
        .iter()
        .map(|c| residue_mod_prime_power(c, p, m).map(int_rat))
        .collect()
}
