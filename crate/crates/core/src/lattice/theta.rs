//! Weighted theta series `Θ_{Λ,s} = Σ_α ⟨a,α⟩^s q^{⟨α,α⟩/2}` and single
//! sector characters, with `a = α0/√norm0`.
//!
//! `⟨a,α⟩^j = ⟨α0,α⟩^j / norm0^{j/2}`; for odd `j` this is a rational
//! multiple of `1/√norm0`, carried separately as the surd part.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::{enumerate_vectors, DirectionSpec, Lattice};
use crate::error::{Error, Result};
use crate::exact_arith::{binomial, factorial, int_rat, Rational};
use crate::qseries::{eisenstein_g, eta_power, QSeries};

/// Multiplicities of `(⟨α,α⟩/2, ⟨α0,α⟩)` over the enumerated vectors; every
/// sector quantity depends on `α` only through this pair.
#[derive(Debug, Clone)]
pub(crate) struct Census {
    pub(crate) norm0: i64,
    pub(crate) counts: BTreeMap<(u64, i64), u64>,
}

impl Census {
    pub(crate) fn new(lattice: &Lattice, dir: &DirectionSpec, max_half_norm: u64) -> Self {
        let mut counts = BTreeMap::new();
        for (v, h) in enumerate_vectors(lattice, max_half_norm) {
            let ip = lattice.inner(&dir.alpha0, &v);
            *counts.entry((h, ip)).or_insert(0) += 1;
        }
        Self {
            norm0: dir.norm0,
            counts,
        }
    }
}

/// `⟨a,α⟩^j` as `(value, is_surd)`, meaning `value` or `value/√norm0`.
pub(crate) fn direction_power(ip: i64, j: u32, norm0: i64) -> (Rational, bool) {
    let num = num_traits::pow(BigInt::from(ip), j as usize);
    let den = num_traits::pow(BigInt::from(norm0), (j / 2) as usize);
    (Rational::new(num, den), j % 2 == 1)
}

#[derive(Debug, Clone, Serialize)]
pub struct ThetaSeries {
    pub series: QSeries,
    pub s: u32,
}

/// Even `s`: `Σ_α ⟨α0,α⟩^s / norm0^{s/2} q^{⟨α,α⟩/2}`; odd `s`: zero by the
/// `α ↦ -α` symmetry, without enumeration.
pub fn theta_weighted(
    lattice: &Lattice,
    dir: &DirectionSpec,
    s: u32,
    precision: usize,
) -> ThetaSeries {
    let series = if s % 2 == 1 || precision == 0 {
        QSeries::zero(precision.max(1))
    } else {
        let census = Census::new(lattice, dir, precision as u64 - 1);
        theta_from_census(&census, s, precision)
    };
    ThetaSeries { series, s }
}

/// `Θ_{Λ,t,k}`, the two-index name for `Θ_{Λ,t-2k-1}`.
pub fn theta_weighted_tk(
    lattice: &Lattice,
    dir: &DirectionSpec,
    t: u32,
    k: u32,
    precision: usize,
) -> Result<ThetaSeries> {
    if 2 * k + 1 > t {
        return Err(Error::InvalidArgument(format!(
            "need 2k+1 <= t, got t={t}, k={k}"
        )));
    }
    Ok(theta_weighted(lattice, dir, t - 2 * k - 1, precision))
}

pub(crate) fn theta_from_census(census: &Census, s: u32, precision: usize) -> QSeries {
    let mut coeffs = vec![Rational::zero(); precision];
    for (&(h, ip), &count) in &census.counts {
        if (h as usize) < precision {
            let (x, _) = direction_power(ip, s, census.norm0);
            coeffs[h as usize] += x * Rational::from_integer(count.into());
        }
    }
    QSeries::from_coeffs(coeffs)
}

/// `rational + surd/√norm0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurdSeries {
    pub rational: QSeries,
    pub surd: QSeries,
    pub norm0: i64,
}

impl SurdSeries {
    pub fn is_rational(&self) -> bool {
        self.surd.is_zero()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        debug_assert_eq!(self.norm0, other.norm0);
        Ok(Self {
            rational: self.rational.add(&other.rational)?,
            surd: self.surd.add(&other.surd)?,
            norm0: self.norm0,
        })
    }
}

/// `Z_α(a[-1]^t 1) = Σ_k C(t,2k) (2k)!/k! ⟨a,α⟩^{t-2k} G_2^k · q^{⟨α,α⟩/2}/η^d`.
pub fn sector_char_closed(
    lattice: &Lattice,
    dir: &DirectionSpec,
    alpha: &[i64],
    t: u32,
    precision: usize,
) -> Result<SurdSeries> {
    if alpha.len() != lattice.rank() {
        return Err(Error::Lattice("sector vector has the wrong rank".into()));
    }
    let h = (lattice.inner(alpha, alpha) / 2) as usize;
    let ip = lattice.inner(&dir.alpha0, alpha);
    let g2 = eisenstein_g(2, precision)?;
    let sector = eta_power(-(lattice.rank() as i64), precision).shift(h);
    let zero = QSeries::zero(precision).with_eta_offset(sector.eta_offset().clone())?;
    let mut rational = zero.clone();
    let mut surd = zero;
    for k in 0..=t / 2 {
        let c = int_rat(binomial(t as u64, 2 * k as u64) * factorial(2 * k as u64))
            / int_rat(factorial(k as u64));
        let (x, is_surd) = direction_power(ip, t - 2 * k, dir.norm0);
        let term = g2.pow(k).mul(&sector).scale(&(c * x));
        if is_surd {
            surd = surd.add(&term)?;
        } else {
            rational = rational.add(&term)?;
        }
    }
    Ok(SurdSeries {
        rational,
        surd,
        norm0: dir.norm0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::zhu_polynomial;
    use crate::exact_arith::rat;
    use crate::heisenberg_fock::SquareWord;

    fn e8() -> (Lattice, DirectionSpec) {
        let l = Lattice::e8();
        let d = DirectionSpec::first_basis_vector(&l);
        (l, d)
    }

    #[test]
    fn unweighted_theta_of_e8() {
        let (l, d) = e8();
        let th = theta_weighted(&l, &d, 0, 4).series;
        assert_eq!(th.coeffs(), &[rat(1), rat(240), rat(2160), rat(6720)]);
    }

    #[test]
    fn odd_weights_vanish() {
        let (l, d) = e8();
        for s in [1, 3, 5] {
            assert!(theta_weighted(&l, &d, s, 4).series.is_zero());
            // and the enumeration agrees
            let census = Census::new(&l, &d, 3);
            let raw: Rational = census
                .counts
                .iter()
                .map(|(&(_, ip), &c)| {
                    direction_power(ip, s, 2).0 * Rational::from_integer(c.into())
                })
                .sum();
            assert!(raw.is_zero());
        }
    }

    #[test]
    fn second_moment_of_roots() {
        // the roots form a spherical 2-design: Σ ⟨a,α⟩² = 240·2/8·⟨a,a⟩ = 60
        let (l, d) = e8();
        let th = theta_weighted(&l, &d, 2, 2).series;
        assert_eq!(th.coeffs()[0], rat(0));
        let direct: i64 = enumerate_vectors(&l, 1)
            .iter()
            .filter(|(_, h)| *h == 1)
            .map(|(v, _)| l.inner(&d.alpha0, v).pow(2))
            .sum();
        assert_eq!(th.coeffs()[1], Rational::new(direct.into(), 2.into()));
        assert_eq!(th.coeffs()[1], rat(60));
    }

    #[test]
    fn two_index_alias() {
        let (l, d) = e8();
        assert_eq!(
            theta_weighted_tk(&l, &d, 3, 0, 3).unwrap().series,
            theta_weighted(&l, &d, 2, 3).series
        );
        assert!(theta_weighted_tk(&l, &d, 3, 2, 3).is_err());
    }

    #[test]
    fn sector_examples() {
        let (l, d) = e8();
        let n = 5;
        let origin = vec![0; 8];
        let graded_dim = eta_power(-8, n);
        let s = sector_char_closed(&l, &d, &origin, 0, n).unwrap();
        assert_eq!(s.rational, graded_dim);
        assert!(s.is_rational());
        let s = sector_char_closed(&l, &d, &origin, 3, n).unwrap();
        assert!(s.rational.is_zero() && s.surd.is_zero());
        // t = 1 on α0 itself: ⟨a,α0⟩ = √2 = 2/√2
        let s = sector_char_closed(&l, &d, &d.alpha0, 1, n).unwrap();
        assert_eq!(s.surd, graded_dim.shift(1).scale(&rat(2)));
        assert!(s.rational.is_zero());
    }

    #[test]
    fn sector_closed_form_matches_recursion() {
        let (l, d) = e8();
        let n = 5;
        let vectors = enumerate_vectors(&l, 2);
        for t in 0..=5u32 {
            let poly = if t == 0 {
                vec![QSeries::one(n)]
            } else {
                zhu_polynomial(&SquareWord::new(vec![1; t as usize]).unwrap(), n)
            };
            for (alpha, h) in &vectors {
                let closed = sector_char_closed(&l, &d, alpha, t, n).unwrap();
                let ip = l.inner(&d.alpha0, alpha);
                let sector = eta_power(-8, n).shift(*h as usize);
                let mut rational = QSeries::zero(n)
                    .with_eta_offset(sector.eta_offset().clone())
                    .unwrap();
                let mut surd = rational.clone();
                for (j, p) in poly.iter().enumerate() {
                    let (x, is_surd) = direction_power(ip, j as u32, d.norm0);
                    let term = p.mul(&sector).scale(&x);
                    if is_surd {
                        surd = surd.add(&term).unwrap();
                    } else {
                        rational = rational.add(&term).unwrap();
                    }
                }
                assert_eq!(closed.rational, rational, "t={t} α={alpha:?}");
                assert_eq!(closed.surd, surd, "t={t} α={alpha:?}");
            }
        }
    }
}
