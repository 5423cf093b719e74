//! Characters of `v_{r,t} = (r-1)! a[-r] a[-1]^t 1` on the lattice VOA
//! `V_Λ` of an even unimodular `Λ`, both in closed form
//! `Z = 2t G_{r+1} Σ_k C(t-1,2k) (2k)!/k! G_2^k Θ_{Λ,t-2k-1} / η^d`
//! and by summing per-sector Zhu recursions, plus the p-adic limit.

use serde::Serialize;

use super::theta::{direction_power, theta_from_census, Census};
use super::{DirectionSpec, Lattice};
use crate::characters::{zhu_polynomial, Algorithm, CharacterResult};
use crate::error::{Error, Result};
use crate::exact_arith::{binomial, factorial, int_rat, rat, Rational};
use crate::heisenberg_fock::{v_state_round, FockState, SquareWord};
use crate::padic_limits::{
    cofactor_offset, stage_table, ConvergenceCertificate, LimitResult, LimitSpec,
};
use crate::qseries::{eisenstein_g, eisenstein_g_star_certified, eta_power, QSeries, StarOptions};

/// Same round-bracket expansion as the Heisenberg `v_{r,t}`: the `a(0)`
/// terms act as zero on the `e^0` sector.
pub fn lattice_state_round(r: u64, t: u64) -> Result<FockState> {
    if r < 3 {
        return Err(Error::InvalidArgument(format!(
            "lattice states need r >= 3, got {r}"
        )));
    }
    v_state_round(r, t)
}

#[derive(Debug, Clone, Serialize)]
pub struct LatticeCharacter {
    /// `Z(v_{r,t}, q)`, carrying the `η^{-d}` offset `-d/24`.
    pub raw: QSeries,
    /// `η^d Z(v_{r,t}, q)`.
    pub character: CharacterResult,
}

fn check_rt(r: u64, t: u64) -> Result<()> {
    for (name, v) in [("r", r), ("t", t)] {
        if v % 2 == 0 {
            return Err(Error::InvalidArgument(format!(
                "{name} must be odd, got {v}"
            )));
        }
    }
    if r < 3 {
        return Err(Error::InvalidArgument(format!(
            "lattice states need r >= 3, got {r}"
        )));
    }
    Ok(())
}

/// `Σ_k C(t-1,2k) (2k)!/k! G_2^k Θ_{Λ,t-2k-1}`.
fn theta_bracket(census: &Census, t: u64, precision: usize) -> Result<QSeries> {
    let g2 = eisenstein_g(2, precision)?;
    let mut acc = QSeries::zero(precision);
    for k in 0..=(t - 1) / 2 {
        let c = int_rat(binomial(t - 1, 2 * k) * factorial(2 * k)) / int_rat(factorial(k));
        let theta = theta_from_census(census, (t - 1 - 2 * k) as u32, precision);
        acc = acc.add(&g2.pow(k as u32).mul(&theta).scale(&c))?;
    }
    Ok(acc)
}

fn census_for(lattice: &Lattice, dir: &DirectionSpec, precision: usize) -> Result<Census> {
    if precision == 0 {
        return Err(Error::InvalidArgument("precision must be positive".into()));
    }
    Ok(Census::new(lattice, dir, precision as u64 - 1))
}

pub fn lattice_char_closed(
    lattice: &Lattice,
    dir: &DirectionSpec,
    r: u64,
    t: u64,
    precision: usize,
) -> Result<LatticeCharacter> {
    check_rt(r, t)?;
    let census = census_for(lattice, dir, precision)?;
    let bracket = theta_bracket(&census, t, precision)?;
    let d = lattice.rank() as i64;
    let raw = eisenstein_g(r + 1, precision)?
        .mul(&bracket)
        .scale(&rat(2 * t as i64))
        .mul(&eta_power(-d, precision));
    let f = raw.mul(&eta_power(d, precision));
    Ok(LatticeCharacter {
        raw,
        character: CharacterResult::new(f, Algorithm::LatticeClosedForm, Some(r + t)),
    })
}

/// `η^d Σ_α Z_α(word)`, where each sector runs the recursion with `o(a)`
/// acting as `⟨a,α⟩` and starts from `Z_α(1) = q^{⟨α,α⟩/2}/η^d`. Odd powers
/// of `⟨a,α⟩` must cancel across `±α`; a surviving surd part is an error.
pub fn lattice_char_zhu(
    lattice: &Lattice,
    dir: &DirectionSpec,
    word: &SquareWord,
    precision: usize,
) -> Result<CharacterResult> {
    let census = census_for(lattice, dir, precision)?;
    let poly = zhu_polynomial(word, precision);
    let d = lattice.rank() as i64;
    let eta_inv = eta_power(-d, precision);
    let zero = QSeries::zero(precision).with_eta_offset(eta_inv.eta_offset().clone())?;
    let mut rational = zero.clone();
    let mut surd = zero;
    for (&(h, ip), &count) in &census.counts {
        let sector = eta_inv.shift(h as usize);
        for (j, p) in poly.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let (x, is_surd) = direction_power(ip, j as u32, census.norm0);
            let term = p
                .mul(&sector)
                .scale(&(x * Rational::from_integer(count.into())));
            if is_surd {
                surd = surd.add(&term)?;
            } else {
                rational = rational.add(&term)?;
            }
        }
    }
    if !surd.is_zero() {
        return Err(Error::Lattice(
            "odd powers of ⟨a,α⟩ failed to cancel over ±α".into(),
        ));
    }
    let f = rational.mul(&eta_power(d, precision));
    Ok(CharacterResult::new(
        f,
        Algorithm::LatticeZhu,
        Some(word.weight()),
    ))
}

pub fn theorem2_limit(
    lattice: &Lattice,
    dir: &DirectionSpec,
    spec: &LimitSpec,
    precision: usize,
    m: u32,
) -> Result<LimitResult> {
    theorem2_limit_with(lattice, dir, spec, precision, m, StarOptions::default())
}

/// `2t G*_{l+1} Σ_k C(t-1,2k) (2k)!/k! G_2^k Θ_{Λ,t-2k-1}` for even unimodular
/// `Λ`, with the stage characters `(1 - p^{r_a}) η^d Z(v_{r_a,t})` checked
/// against it for `a <= a_max`.
pub fn theorem2_limit_with(
    lattice: &Lattice,
    dir: &DirectionSpec,
    spec: &LimitSpec,
    precision: usize,
    m: u32,
    opts: StarOptions,
) -> Result<LimitResult> {
    if !lattice.is_unimodular() {
        return Err(Error::Lattice(format!(
            "the limit theorem needs a unimodular lattice (determinant {})",
            lattice.determinant()
        )));
    }
    let (p, l, t) = (spec.p, spec.l, spec.t);
    let (gstar, star) = eisenstein_g_star_certified(p, l + 1, precision, m, opts)?;
    let census = census_for(lattice, dir, precision)?;
    let cof = theta_bracket(&census, t, precision)?.scale(&rat(2 * t as i64));
    let limit = cof.mul(&gstar);
    let offset = cofactor_offset(p, &cof)?;

    let stages = (0..=spec.a_max)
        .map(|a| {
            let r = spec.r(a);
            let euler = rat(1) - int_rat(crate::exact_arith::pow_big(p, r));
            let stage = eisenstein_g(r + 1, precision)?.mul(&cof).scale(&euler);
            Ok((a, r, stage))
        })
        .collect::<Result<Vec<_>>>()?;
    let (rows, weak, strict) = stage_table(p, &limit, offset, stages)?;

    Ok(LimitResult {
        character: CharacterResult::new(limit, Algorithm::LatticeLimit, Some(l + 1 + t)),
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::ratio;
    use crate::lattice::theta_weighted;
    use crate::qseries::eisenstein_g_star;

    fn e8() -> (Lattice, DirectionSpec) {
        let l = Lattice::e8();
        let d = DirectionSpec::first_basis_vector(&l);
        (l, d)
    }

    #[test]
    fn state_delegates_to_heisenberg() {
        assert_eq!(
            lattice_state_round(3, 1).unwrap(),
            v_state_round(3, 1).unwrap()
        );
        assert_eq!(
            lattice_state_round(5, 3).unwrap(),
            v_state_round(5, 3).unwrap()
        );
        assert!(lattice_state_round(1, 1).is_err());
    }

    #[test]
    fn closed_form_r3_t1() {
        let (l, d) = e8();
        let n = 4;
        let c = lattice_char_closed(&l, &d, 3, 1, n).unwrap();
        let theta = theta_weighted(&l, &d, 0, n).series;
        let expected = eisenstein_g(4, n).unwrap().mul(&theta).scale(&rat(2));
        assert_eq!(c.character.series, expected);
        assert_eq!(c.raw.eta_offset(), &ratio(-8, 24));
        assert_eq!(
            c.character.series.eta_offset(),
            &Rational::from_integer(0.into())
        );
    }

    #[test]
    fn closed_form_r3_t3() {
        let (l, d) = e8();
        let n = 4;
        let c = lattice_char_closed(&l, &d, 3, 3, n).unwrap();
        let th0 = theta_weighted(&l, &d, 0, n).series;
        let th2 = theta_weighted(&l, &d, 2, n).series;
        let g2 = eisenstein_g(2, n).unwrap();
        let inner = th2.add(&g2.mul(&th0).scale(&rat(2))).unwrap();
        let expected = eisenstein_g(4, n).unwrap().mul(&inner).scale(&rat(6));
        assert_eq!(c.character.series, expected);
    }

    #[test]
    fn zhu_examples() {
        let (l, d) = e8();
        let n = 4;
        let one = SquareWord::new(vec![1]).unwrap();
        assert!(lattice_char_zhu(&l, &d, &one, n).unwrap().series.is_zero());
        let two = SquareWord::new(vec![1, 1]).unwrap();
        let th0 = theta_weighted(&l, &d, 0, n).series;
        let th2 = theta_weighted(&l, &d, 2, n).series;
        let g2 = eisenstein_g(2, n).unwrap();
        assert_eq!(
            lattice_char_zhu(&l, &d, &two, n).unwrap().series,
            g2.mul(&th0).scale(&rat(2)).add(&th2).unwrap()
        );
    }

    #[test]
    fn closed_form_matches_sector_sums() {
        let (l, d) = e8();
        let n = 4;
        for (r, t) in [(3u64, 1u64), (5, 1), (3, 3)] {
            let closed = lattice_char_closed(&l, &d, r, t, n)
                .unwrap()
                .character
                .series;
            let word = SquareWord::r_ones(r as u32, t as u32).unwrap();
            let zhu = lattice_char_zhu(&l, &d, &word, n).unwrap().series;
            assert_eq!(closed, zhu.scale(&int_rat(factorial(r - 1))), "r={r} t={t}");
        }
    }

    #[test]
    fn lattice_limit_is_g2_star_times_theta() {
        let (l, d) = e8();
        let n = 4;
        let spec = LimitSpec::new(5, 1, 1, 2).unwrap();
        let res = theorem2_limit(&l, &d, &spec, n, 2).unwrap();
        let theta = theta_weighted(&l, &d, 0, n).series;
        let expected = eisenstein_g_star(5, 2, n, 2)
            .unwrap()
            .mul(&theta)
            .scale(&rat(2));
        assert_eq!(res.character.series, expected);
        assert_eq!(res.character.series.coeffs()[0], ratio(1, 3));
        assert!(res.certificate.all_pass(), "{:?}", res.certificate.stages);

        let spec = LimitSpec::new(7, 3, 1, 1).unwrap();
        let res = theorem2_limit(&l, &d, &spec, n, 2).unwrap();
        let expected = eisenstein_g_star(7, 4, n, 2)
            .unwrap()
            .mul(&theta)
            .scale(&rat(2));
        assert_eq!(res.character.series, expected);
    }

    #[test]
    fn lattice_limit_rejects_non_unimodular() {
        let a2 = Lattice::new(vec![vec![2, -1], vec![-1, 2]]).unwrap();
        let d = DirectionSpec::first_basis_vector(&a2);
        let spec = LimitSpec::new(5, 1, 1, 1).unwrap();
        assert!(matches!(
            theorem2_limit(&a2, &d, &spec, 3, 1),
            Err(Error::Lattice(_))
        ));
    }
}
