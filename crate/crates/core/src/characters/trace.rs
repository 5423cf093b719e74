//! The character as a literal graded trace. For a monomial
//! `h(-n_1)...h(-n_k) 1` the vertex operator is `:Π ∂^{(n_i-1)} h(z):`, whose
//! zero mode is `Σ_{Σ m_i = 0} Π C(-m_i-1, n_i-1) :h(m_1)...h(m_k):`, all
//! `m_i != 0` because `h(0)` vanishes on the Fock space. Its trace on each
//! graded piece is read off a partition basis.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{Algorithm, CharacterResult};
use crate::error::{Error, Result};
use crate::exact_arith::{factorial, int_rat, rat, ratio, Rational};
use crate::heisenberg_fock::{FockState, Monomial};
use crate::qseries::{eta_power, QSeries};

/// Largest precision accepted by [`char_trace_oracle`]: traces through
/// degree 10, where the basis has `p(10) = 42` states.
pub const TRACE_PRECISION_BOUND: usize = 11;

/// Generalized binomial `C(x, j)` for integer `x`.
fn gen_binomial(x: i64, j: u64) -> Rational {
    let num = (0..j as i64).fold(Rational::one(), |acc, i| acc * rat(x - i));
    num / int_rat(factorial(j))
}

/// Partitions of `d` as monomials.
fn partitions(d: u64) -> Vec<Monomial> {
    fn go(rem: u64, max: u64, acc: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if rem == 0 {
            out.push(Monomial::new(acc.clone()).expect("positive parts"));
            return;
        }
        for part in (1..=max.min(rem)).rev() {
            acc.push(part as u32);
            go(rem - part, part, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(d, d, &mut Vec::new(), &mut out);
    out
}

/// Nonzero mode tuples summing to zero, with total annihilation at most
/// `degree`; keyed by the sorted tuple with the summed coefficient.
fn zero_mode_terms(parts: &[u32], degree: i64) -> HashMap<Vec<i64>, Rational> {
    fn go(
        parts: &[u32],
        degree: i64,
        idx: usize,
        sum: i64,
        lowered: i64,
        acc: &mut Vec<i64>,
        coeff: Rational,
        out: &mut HashMap<Vec<i64>, Rational>,
    ) {
        if idx == parts.len() {
            if sum == 0 {
                let mut key = acc.clone();
                key.sort_unstable();
                *out.entry(key).or_insert_with(Rational::zero) += coeff;
            }
            return;
        }
        let remaining = (parts.len() - idx - 1) as i64;
        let n = parts[idx] as u64;
        for m in -degree..=degree {
            if m == 0 {
                continue;
            }
            let lowered_next = lowered + m.max(0);
            if lowered_next > degree {
                continue;
            }
            // the remaining modes must bring the sum back to zero
            let s = sum + m;
            if s.abs() > remaining * degree {
                continue;
            }
            let c = gen_binomial(-m - 1, n - 1);
            if c.is_zero() {
                continue;
            }
            acc.push(m);
            go(
                parts,
                degree,
                idx + 1,
                s,
                lowered_next,
                acc,
                &coeff * c,
                out,
            );
            acc.pop();
        }
    }
    let mut out = HashMap::new();
    go(
        parts,
        degree,
        0,
        0,
        0,
        &mut Vec::new(),
        Rational::one(),
        &mut out,
    );
    out.retain(|_, c| !c.is_zero());
    out
}

/// `:h(m_1)...h(m_k): β` with annihilators applied first.
fn apply_normal_ordered(modes: &[i64], state: &FockState) -> FockState {
    let mut s = state.clone();
    for &m in modes.iter().filter(|&&m| m > 0) {
        s = s.apply_round_mode(m);
    }
    for &m in modes.iter().filter(|&&m| m < 0) {
        s = s.apply_round_mode(m);
    }
    s
}

fn graded_trace(state: &FockState, degree: u64) -> Rational {
    let basis = partitions(degree);
    let mut total = Rational::zero();
    for (mono, c) in state.terms() {
        if mono.is_vacuum() {
            total += c * rat(basis.len() as i64);
            continue;
        }
        for (modes, k) in zero_mode_terms(mono.parts(), degree as i64) {
            let tr: Rational = basis
                .iter()
                .map(|b| {
                    apply_normal_ordered(
                        &modes,
                        &FockState::from_monomial(b.clone(), Rational::one()),
                    )
                    .coeff(b)
                })
                .sum();
            total += c * k * tr;
        }
    }
    total
}

/// `f(s) = η(q) Σ_d Tr|_{V_d} o(s) q^{d - 1/24}` by explicit traces,
/// refusing precisions above [`TRACE_PRECISION_BOUND`].
pub fn char_trace_oracle(state: &FockState, precision: usize) -> Result<CharacterResult> {
    char_trace_oracle_bounded(state, precision, TRACE_PRECISION_BOUND)
}

/// [`char_trace_oracle`] with a caller-chosen cost bound.
pub fn char_trace_oracle_bounded(
    state: &FockState,
    precision: usize,
    bound: usize,
) -> Result<CharacterResult> {
    if precision > bound {
        return Err(Error::CostBound {
            requested: precision,
            bound,
        });
    }
    if precision == 0 {
        return Err(Error::InvalidArgument("precision must be positive".into()));
    }
    let traces: Vec<Rational> = (0..precision as u64)
        .into_par_iter()
        .map(|d| graded_trace(state, d))
        .collect();
    let z = QSeries::new(traces, ratio(-1, 24))?;
    let series = z.mul(&eta_power(1, precision));
    Ok(CharacterResult::new(series, Algorithm::TraceOracle, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::char_zhu;
    use crate::heisenberg_fock::SquareWord;
    use crate::qseries::eisenstein_g;

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..10).map(|d| partitions(d).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30]);
    }

    #[test]
    fn vacuum_gives_one() {
        let f = char_trace_oracle(&FockState::vacuum(), 8).unwrap();
        assert_eq!(f.series, QSeries::one(8));
    }

    #[test]
    fn conformal_vector_gives_derivative() {
        // ω = h(-1)^2/2 has o(ω) = L_0, so f(ω) = Σ σ_1(n) q^n = G_2 + 1/24
        let n = 8;
        let omega = FockState::from_monomial(Monomial::new(vec![1, 1]).unwrap(), ratio(1, 2));
        let f = char_trace_oracle(&omega, n).unwrap().series;
        let expected = eisenstein_g(2, n)
            .unwrap()
            .add(&QSeries::constant(ratio(1, 24), n))
            .unwrap();
        assert_eq!(f, expected);
    }

    #[test]
    fn matches_recursion_on_words() {
        let n = 7;
        for w in [
            vec![1, 1],
            vec![3, 1],
            vec![2, 2],
            vec![1, 1, 1, 1],
            vec![2, 1],
            vec![3],
        ] {
            let word = SquareWord::new(w.clone()).unwrap();
            let state = FockState::from_square_word(&word);
            assert_eq!(
                char_trace_oracle(&state, n).unwrap().series,
                char_zhu(&word, n).series,
                "{w:?}"
            );
        }
    }

    #[test]
    fn cost_bound_is_enforced() {
        assert!(matches!(
            char_trace_oracle(&FockState::vacuum(), TRACE_PRECISION_BOUND + 1),
            Err(Error::CostBound { .. })
        ));
    }
}
