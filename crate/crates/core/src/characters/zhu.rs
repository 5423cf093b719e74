//! Zhu's recursion in the square-bracket basis:
//!
//! `Z(h[-n] b) = δ_{n,1} Tr(o(h) o(b) q^{L_0 - c/24}) + Σ_{m>=1} 2(-1)^{m+1}/(m!(n-1)!) G_{n+m} Z(h[m] b)`
//!
//! with `[h[m], h[-k]] = m δ_{m,k}`. When the zero mode `o(h)` acts as a
//! scalar `x` (a lattice sector), the trace term is `x Z(b)` and the result
//! is a polynomial in `x`; on the plain Heisenberg space `x = 0`.

use std::collections::HashMap;

use num_traits::Zero;

use super::{pair_scalar, Algorithm, CharacterResult};
use crate::heisenberg_fock::SquareWord;
use crate::qseries::{eisenstein_g_or_zero, QSeries};

/// Coefficients `P_j` of `Z(word) = Σ_j P_j x^j`, normalized so the empty
/// word gives `P_0 = 1` (the sector's `q^{⟨α,α⟩/2}/η^d` factor is left to
/// the caller).
pub fn zhu_polynomial(word: &SquareWord, precision: usize) -> Vec<QSeries> {
    let mut memo = HashMap::new();
    recurse(word.indices(), precision, &mut memo)
}

fn add_poly(acc: &mut Vec<QSeries>, p: &[QSeries], precision: usize) {
    if acc.len() < p.len() {
        acc.resize(p.len(), QSeries::zero(precision));
    }
    for (a, b) in acc.iter_mut().zip(p) {
        *a = a.add(b).expect("offset 0");
    }
}

fn recurse(
    word: &[u32],
    precision: usize,
    memo: &mut HashMap<Vec<u32>, Vec<QSeries>>,
) -> Vec<QSeries> {
    if word.is_empty() {
        return vec![QSeries::one(precision)];
    }
    if let Some(v) = memo.get(word) {
        return v.clone();
    }
    let n = word[0];
    let rest = &word[1..];
    let mut out: Vec<QSeries> = vec![QSeries::zero(precision)];

    if n == 1 {
        // x · Z(b): shift the polynomial up one degree
        let inner = recurse(rest, precision, memo);
        let mut shifted = vec![QSeries::zero(precision)];
        shifted.extend(inner);
        add_poly(&mut out, &shifted, precision);
    }

    // h[m] b picks out each entry k_i = m of b with factor m
    for i in 0..rest.len() {
        if i > 0 && rest[i] == rest[i - 1] {
            continue;
        }
        let k = rest[i];
        let mult = rest.iter().filter(|&&x| x == k).count();
        let g = eisenstein_g_or_zero((n + k) as u64, precision);
        if g.is_zero() {
            continue;
        }
        let mut reduced = rest.to_vec();
        reduced.remove(i);
        let scalar = pair_scalar(n, k) * crate::exact_arith::rat(mult as i64);
        let factor = g.scale(&scalar);
        let inner = recurse(&reduced, precision, memo);
        let term: Vec<QSeries> = inner.iter().map(|p| p.mul(&factor)).collect();
        add_poly(&mut out, &term, precision);
    }

    while out.len() > 1 && out.last().is_some_and(QSeries::is_zero) {
        out.pop();
    }
    memo.insert(word.to_vec(), out.clone());
    out
}

/// Heisenberg character via the recursion (zero mode of `h` is `h(0) = 0`).
pub fn char_zhu(word: &SquareWord, precision: usize) -> CharacterResult {
    let poly = zhu_polynomial(word, precision);
    let series = poly
        .into_iter()
        .next()
        .unwrap_or_else(|| QSeries::zero(precision));
    debug_assert!(series.eta_offset().is_zero());
    CharacterResult::new(series, Algorithm::Zhu, Some(word.weight()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::char_pair_partition;
    use crate::exact_arith::rat;
    use crate::qseries::eisenstein_g;

    fn word(v: &[u32]) -> SquareWord {
        SquareWord::new(v.to_vec()).unwrap()
    }

    #[test]
    fn examples() {
        let n = 12;
        let g2 = eisenstein_g(2, n).unwrap();
        assert_eq!(char_zhu(&word(&[1, 1]), n).series, g2.scale(&rat(2)));
        assert_eq!(
            char_zhu(&word(&[3, 1]), n).series,
            eisenstein_g(4, n).unwrap()
        );
        assert_eq!(
            char_zhu(&word(&[1, 1, 1, 1]), n).series,
            g2.pow(2).scale(&rat(12))
        );
        assert!(char_zhu(&word(&[1, 1, 1]), n).series.is_zero());
    }

    #[test]
    fn polynomial_for_two_ones() {
        // Z_α(a[-1]^2 1) = x^2 + 2 G_2
        let n = 8;
        let p = zhu_polynomial(&word(&[1, 1]), n);
        assert_eq!(p.len(), 3);
        assert_eq!(p[0], eisenstein_g(2, n).unwrap().scale(&rat(2)));
        assert!(p[1].is_zero());
        assert_eq!(p[2], QSeries::one(n));
    }

    #[test]
    fn agrees_with_matchings_on_small_words() {
        // all words with up to 4 entries from 1..=5
        let n = 10;
        let mut words = vec![vec![]];
        for _ in 0..4 {
            let mut next = Vec::new();
            for w in &words {
                for k in 1..=5u32 {
                    let mut v: Vec<u32> = w.clone();
                    v.push(k);
                    next.push(v);
                }
            }
            words.extend(next.clone());
            words.dedup();
            words = {
                let mut s: Vec<Vec<u32>> = words
                    .into_iter()
                    .map(|mut v| {
                        v.sort();
                        v
                    })
                    .filter(|v| v.len() <= 4)
                    .collect();
                s.sort();
                s.dedup();
                s
            };
        }
        for w in words.into_iter().filter(|w| !w.is_empty()) {
            let w = word(&w);
            assert_eq!(
                char_zhu(&w, n).series,
                char_pair_partition(&w, n).series,
                "{w:?}"
            );
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_word() -> impl Strategy<Value = SquareWord> {
            prop::collection::vec(1u32..=7, 1..=6).prop_map(|v| SquareWord::new(v).unwrap())
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn recursion_agrees_with_matchings(w in arb_word()) {
                prop_assert_eq!(char_zhu(&w, 21).series, char_pair_partition(&w, 21).series);
            }

            #[test]
            fn odd_cardinality_vanishes(w in arb_word()) {
                prop_assume!(w.len() % 2 == 1);
                prop_assert!(char_zhu(&w, 8).series.is_zero());
                prop_assert!(char_pair_partition(&w, 8).series.is_zero());
            }

            #[test]
            fn image_has_no_eta_offset(w in arb_word()) {
                let c = char_zhu(&w, 6);
                prop_assert!(c.series.eta_offset().is_zero());
                prop_assert_eq!(c.square_weight, Some(w.weight()));
            }
        }
    }
}
