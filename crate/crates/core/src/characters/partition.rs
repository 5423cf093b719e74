use rayon::prelude::*;

use super::{pair_scalar, Algorithm, CharacterResult};
use crate::heisenberg_fock::SquareWord;
use crate::qseries::{eisenstein_g_or_zero, QSeries};

/// All perfect matchings of positions `0..n`, as lists of index pairs.
fn perfect_matchings(n: usize) -> Vec<Vec<(usize, usize)>> {
    fn go(rest: &[usize], acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        let Some((&first, tail)) = rest.split_first() else {
            out.push(acc.clone());
            return;
        };
        for (j, &partner) in tail.iter().enumerate() {
            let remaining: Vec<usize> = tail
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, &x)| x)
                .collect();
            acc.push((first, partner));
            go(&remaining, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if n % 2 == 0 {
        let idx: Vec<usize> = (0..n).collect();
        go(&idx, &mut Vec::new(), &mut out);
    }
    out
}

/// Sum over perfect matchings of the word of `Π 2(-1)^{s+1}/((s-1)!(t-1)!) G_{s+t}`.
/// Odd-length words have no matchings and give the zero series.
pub fn char_pair_partition(phi: &SquareWord, precision: usize) -> CharacterResult {
    let k = phi.indices();
    let matchings = perfect_matchings(k.len());
    let series = matchings
        .par_iter()
        .map(|m| {
            m.iter().fold(QSeries::one(precision), |acc, &(i, j)| {
                let (s, t) = (k[i], k[j]);
                let g = eisenstein_g_or_zero((s + t) as u64, precision);
                acc.mul(&g.scale(&pair_scalar(s, t)))
            })
        })
        .reduce(
            || QSeries::zero(precision),
            |a, b| a.add(&b).expect("offset 0"),
        );
    CharacterResult::new(series, Algorithm::PairPartition, Some(phi.weight()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::rat;
    use crate::qseries::eisenstein_g;

    fn word(v: &[u32]) -> SquareWord {
        SquareWord::new(v.to_vec()).unwrap()
    }

    #[test]
    fn matching_counts_are_double_factorials() {
        assert_eq!(perfect_matchings(0).len(), 1);
        assert_eq!(perfect_matchings(3).len(), 0);
        assert_eq!(perfect_matchings(4).len(), 3);
        assert_eq!(perfect_matchings(6).len(), 15);
        assert_eq!(perfect_matchings(8).len(), 105);
    }

    #[test]
    fn examples() {
        let n = 12;
        let g2 = eisenstein_g(2, n).unwrap();
        assert_eq!(
            char_pair_partition(&word(&[1, 1]), n).series,
            g2.scale(&rat(2))
        );
        assert!(char_pair_partition(&word(&[3]), n).series.is_zero());
        assert_eq!(
            char_pair_partition(&word(&[3, 1]), n).series,
            eisenstein_g(4, n).unwrap()
        );
        assert_eq!(
            char_pair_partition(&word(&[1, 1, 1, 1]), n).series,
            g2.pow(2).scale(&rat(12))
        );
    }

    #[test]
    fn odd_pair_sums_vanish() {
        assert!(char_pair_partition(&word(&[2, 1]), 8).series.is_zero());
    }
}
