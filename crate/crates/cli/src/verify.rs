//! Verification suites. Every check is an exact comparison or a valuation
//! bound; the report lists each one with its verdict.

use clap::ValueEnum;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use voa_char::characters::{char_pair_partition, char_trace_oracle, char_zhu, f_closed_form};
use voa_char::exact_arith::{factorial, int_rat, Rational};
use voa_char::heisenberg_fock::{
    annihilate_h1_power, h1_power_closed, hermite_check, v_state_round,
};
use voa_char::lattice::{
    enumerate_vectors, lattice_char_closed, lattice_char_zhu, theorem2_limit, DirectionSpec,
    Lattice,
};
use voa_char::padic_limits::{congruence_grid, theorem1_limit, LimitSpec};
use voa_char::{FockState, SquareWord};

use crate::commands::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Congruences,
    Oracles,
    ClosedForms,
    All,
}

#[derive(Debug, Serialize)]
struct Check {
    name: String,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool) -> Self {
        Self {
            name: name.into(),
            pass,
            detail: None,
        }
    }

    fn from_result(name: impl Into<String>, r: voa_char::Result<bool>) -> Self {
        match r {
            Ok(pass) => Self::new(name, pass),
            Err(e) => Self {
                name: name.into(),
                pass: false,
                detail: Some(e.to_string()),
            },
        }
    }
}

#[derive(Debug, Serialize)]
struct SuiteReport {
    suite: &'static str,
    pass: bool,
    checks: Vec<Check>,
}

impl SuiteReport {
    fn new(suite: &'static str, checks: Vec<Check>) -> Self {
        Self {
            suite,
            pass: checks.iter().all(|c| c.pass),
            checks,
        }
    }
}

/// Nonincreasing words of length `1..=max_len` with entries in `1..=max_entry`.
fn words(max_len: usize, max_entry: u32) -> Vec<Vec<u32>> {
    fn extend(prefix: &mut Vec<u32>, cap: u32, max_len: usize, out: &mut Vec<Vec<u32>>) {
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        if prefix.len() == max_len {
            return;
        }
        for k in 1..=cap {
            prefix.push(k);
            extend(prefix, k, max_len, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), max_entry, max_len, &mut out);
    out
}

fn oracles() -> SuiteReport {
    let mut checks = Vec::new();
    for (r, t) in [(1u64, 1u64), (3, 1), (1, 3)] {
        let name = format!("trace oracle = matchings for v_(r={r},t={t})/(r-1)! through q^8");
        checks.push(Check::from_result(
            name,
            (|| {
                let state = v_state_round(r, t)?.scale(&Rational::new(1.into(), factorial(r - 1)));
                let trace = char_trace_oracle(&state, 9)?.series;
                Ok(
                    trace
                        == char_pair_partition(&SquareWord::r_ones(r as u32, t as u32)?, 9).series,
                )
            })(),
        ));
    }
    for w in [vec![2, 2], vec![4, 2], vec![2, 1, 1], vec![1, 1, 1, 1]] {
        let name = format!("trace oracle = matchings for word {w:?} through q^8");
        checks.push(Check::from_result(
            name,
            (|| {
                let sw = SquareWord::new(w.clone())?;
                let trace = char_trace_oracle(&FockState::from_square_word(&sw), 9)?.series;
                Ok(trace == char_pair_partition(&sw, 9).series)
            })(),
        ));
    }
    let grid = words(6, 7);
    let bad: Vec<String> = grid
        .par_iter()
        .filter_map(|w| {
            let sw = SquareWord::new(w.clone()).ok()?;
            (char_pair_partition(&sw, 21).series != char_zhu(&sw, 21).series)
                .then(|| format!("{w:?}"))
        })
        .collect();
    checks.push(Check {
        name: format!(
            "matchings = recursion through q^20 on {} words (length <= 6, entries <= 7)",
            grid.len()
        ),
        pass: bad.is_empty(),
        detail: (!bad.is_empty()).then(|| bad.join(" ")),
    });

    let e8 = Lattice::e8();
    let roots: Vec<Vec<i64>> = enumerate_vectors(&e8, 1)
        .into_iter()
        .filter(|(_, h)| *h == 1)
        .map(|(v, _)| v)
        .collect();
    let boxed = box_scan_norm2(&e8, &[2, 4, 6, 5, 4, 3, 2, 3]);
    checks.push(Check {
        name: "E8 roots: enumeration = coordinate box scan".into(),
        pass: roots == boxed,
        detail: Some(format!("{} roots", roots.len())),
    });
    SuiteReport::new("oracles", checks)
}

/// Vectors of norm 2 with `|x_i| <= bound_i`, sorted.
fn box_scan_norm2(l: &Lattice, bound: &[i64]) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut x = vec![0i64; bound.len()];
    fn go(i: usize, x: &mut Vec<i64>, b: &[i64], l: &Lattice, out: &mut Vec<Vec<i64>>) {
        if i == b.len() {
            if l.inner(x, x) == 2 {
                out.push(x.clone());
            }
            return;
        }
        for v in -b[i]..=b[i] {
            x[i] = v;
            go(i + 1, x, b, l, out);
        }
    }
    go(0, &mut x, bound, l, &mut out);
    out.sort();
    out
}

fn closed_forms() -> SuiteReport {
    let mut checks = Vec::new();
    for r in [1u64, 3, 5, 7] {
        for t in [1u64, 3, 5] {
            let name = format!("closed form = matchings for h[-{r}] h[-1]^{t} through q^20");
            checks.push(Check::from_result(
                name,
                (|| {
                    let sw = SquareWord::r_ones(r as u32, t as u32)?;
                    Ok(f_closed_form(r, t, 21)?.series == char_pair_partition(&sw, 21).series)
                })(),
            ));
        }
    }
    for t in [1u64, 3, 5, 7, 9] {
        checks.push(Check::from_result(
            format!("Hermite identity t={t}"),
            hermite_check(t),
        ));
    }
    for t in [1u64, 3, 5] {
        checks.push(Check::from_result(
            format!("h[-1]^{t} closed form"),
            (|| {
                let iterated = (0..t).fold(FockState::vacuum(), |s, _| s.apply_square_mode(-1));
                let closed = h1_power_closed(t)?;
                Ok(closed == iterated && annihilate_h1_power(t)? == closed.apply_round_mode(1))
            })(),
        ));
        for r in [1u64, 3, 5] {
            checks.push(Check::from_result(
                format!("v_(r={r},t={t}) = (r-1)! h[-r] h[-1]^t 1"),
                (|| {
                    let direct = h1_power_closed(t)?
                        .apply_square_mode(-(r as i64))
                        .scale(&int_rat(factorial(r - 1)));
                    Ok(v_state_round(r, t)? == direct)
                })(),
            ));
        }
    }
    let e8 = Lattice::e8();
    let dir = DirectionSpec::first_basis_vector(&e8);
    for (r, t) in [(3u64, 1u64), (5, 1), (3, 3)] {
        let name = format!("E8 closed form = (r-1)! recursion for v_(r={r},t={t}) through q^4");
        checks.push(Check::from_result(
            name,
            (|| {
                let closed = lattice_char_closed(&e8, &dir, r, t, 5)?.character.series;
                let zhu = lattice_char_zhu(&e8, &dir, &SquareWord::r_ones(r as u32, t as u32)?, 5)?
                    .series;
                Ok(closed == zhu.scale(&int_rat(factorial(r - 1))))
            })(),
        ));
    }
    for (p, l, t) in [(5u64, 1u64, 1u64), (5, 1, 3), (7, 1, 1), (7, 3, 1)] {
        let name = format!(
            "Heisenberg limit stages converge (p={p}, l={l}, t={t}, mod p^2, through q^10)"
        );
        checks.push(Check::from_result(
            name,
            (|| {
                let spec = LimitSpec::new(p, l, t, 2)?;
                Ok(theorem1_limit(&spec, 11, 2)?.certificate.all_pass())
            })(),
        ));
    }
    checks.push(Check::from_result(
        "E8 limit stages converge (p=5, l=1, t=1, mod p^2, through q^4)",
        (|| {
            let spec = LimitSpec::new(5, 1, 1, 2)?;
            Ok(theorem2_limit(&e8, &dir, &spec, 5, 2)?
                .certificate
                .all_pass())
        })(),
    ));
    SuiteReport::new("closed-forms", checks)
}

fn congruences() -> SuiteReport {
    let checks = congruence_grid()
        .into_iter()
        .map(|r| Check {
            name: format!("{} stages {}..{}", r.term, r.stages[0], r.stages[1]),
            pass: r.pass,
            detail: Some(format!(
                "valuation {} >= {}",
                r.observed_valuation, r.required
            )),
        })
        .collect();
    SuiteReport::new("congruences", checks)
}

pub fn run(suite: Suite) -> Report {
    let suites: Vec<SuiteReport> = match suite {
        Suite::Oracles => vec![oracles()],
        Suite::ClosedForms => vec![closed_forms()],
        Suite::Congruences => vec![congruences()],
        Suite::All => vec![oracles(), closed_forms(), congruences()],
    };
    let pass = suites.iter().all(|s| s.pass);
    let mut text = String::new();
    for s in &suites {
        for c in &s.checks {
            text.push_str(&format!(
                "[{}] {}: {}",
                s.suite,
                if c.pass { "PASS" } else { "FAIL" },
                c.name
            ));
            if let Some(d) = &c.detail {
                text.push_str(&format!(" ({d})"));
            }
            text.push('\n');
        }
    }
    text.push_str(if pass {
        "all checks passed\n"
    } else {
        "some checks FAILED\n"
    });
    let json = json!({ "command": "verify", "pass": pass, "suites": serde_json::to_value(&suites).expect("serializes") });
    Report {
        json,
        text,
        ok: pass,
        failure: (!pass).then(|| "verification failed".to_string()),
    }
}
