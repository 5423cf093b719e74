//! Truncated q-expansions over `Rational`.
//!
//! A [`QSeries`] stores `q^e · Σ_{n<N} a_n q^n`, where the overall exponent
//! `e` (the eta offset) is a multiple of `1/24`. It exists so that powers of
//! the Dedekind eta function can be carried exactly and their cancellation
//! checked.

mod eisenstein;
mod eta;
pub(crate) mod json;

pub use eisenstein::{
    eisenstein_g, eisenstein_g_or_zero, eisenstein_g_star, eisenstein_g_star_certified,
    star_constant_exact, PadicWeight, Stabilization, StageValue, StarCertificate, StarOptions,
};
pub use eta::{eta_power, euler_product};
pub use json::QSeriesJson;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact_arith::series::{mul_trunc, pow_trunc};
use crate::exact_arith::{rat, valuation, PadicValuation, Rational};

#[derive(Clone, Debug)]
pub struct QSeries {
    coeffs: Vec<Rational>,
    eta_offset: Rational,
}

/// Equal offsets and equal coefficients up to the smaller precision.
impl PartialEq for QSeries {
    fn eq(&self, other: &Self) -> bool {
        self.eta_offset == other.eta_offset
            && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a == b)
    }
}

fn check_offset(offset: &Rational) -> Result<()> {
    if (offset * rat(24)).is_integer() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "eta offset {offset} is not a multiple of 1/24"
        )))
    }
}

impl QSeries {
    pub fn new(coeffs: Vec<Rational>, eta_offset: Rational) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument(
                "series precision must be >= 1".into(),
            ));
        }
        check_offset(&eta_offset)?;
        Ok(Self { coeffs, eta_offset })
    }

    /// Series with zero eta offset. Panics on an empty coefficient vector.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "series precision must be >= 1");
        Self {
            coeffs,
            eta_offset: Rational::zero(),
        }
    }

    pub fn zero(precision: usize) -> Self {
        Self::from_coeffs(vec![Rational::zero(); precision.max(1)])
    }

    pub fn one(precision: usize) -> Self {
        Self::constant(Rational::one(), precision)
    }

    pub fn constant(c: Rational, precision: usize) -> Self {
        let mut s = Self::zero(precision);
        s.coeffs[0] = c;
        s
    }

    /// `c · q^k`.
    pub fn monomial(c: Rational, k: usize, precision: usize) -> Self {
        let mut s = Self::zero(precision);
        if k < s.coeffs.len() {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `q^(offset + n)`; `None` beyond the precision.
    pub fn coeff(&self, n: usize) -> Option<&Rational> {
        self.coeffs.get(n)
    }

    pub fn eta_offset(&self) -> &Rational {
        &self.eta_offset
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn with_eta_offset(mut self, offset: Rational) -> Result<Self> {
        check_offset(&offset)?;
        self.eta_offset = offset;
        Ok(self)
    }

    pub fn truncate(&self, precision: usize) -> Self {
        let n = precision.clamp(1, self.precision());
        Self {
            coeffs: self.coeffs[..n].to_vec(),
            eta_offset: self.eta_offset.clone(),
        }
    }

    fn same_offset(&self, other: &Self) -> Result<()> {
        if self.eta_offset == other.eta_offset {
            Ok(())
        } else {
            Err(Error::OffsetMismatch {
                left: self.eta_offset.to_string(),
                right: other.eta_offset.to_string(),
            })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_offset(other)?;
        let n = self.precision().min(other.precision());
        Ok(Self {
            coeffs: (0..n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect(),
            eta_offset: self.eta_offset.clone(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_offset(other)?;
        let n = self.precision().min(other.precision());
        Ok(Self {
            coeffs: (0..n).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect(),
            eta_offset: self.eta_offset.clone(),
        })
    }

    /// Product; offsets add, precision is the minimum of the operands'.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.precision().min(other.precision());
        Self {
            coeffs: mul_trunc(&self.coeffs, &other.coeffs, n),
            eta_offset: &self.eta_offset + &other.eta_offset,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            eta_offset: self.eta_offset.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&rat(-1))
    }

    pub fn pow(&self, e: u32) -> Self {
        Self {
            coeffs: pow_trunc(&self.coeffs, e as i64, self.precision()),
            eta_offset: &self.eta_offset * rat(e as i64),
        }
    }

    /// Multiplication by `q^k` with integral `k >= 0`; coefficients pushed
    /// past the precision are dropped.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.precision();
        let mut coeffs = vec![Rational::zero(); n];
        for i in 0..n.saturating_sub(k) {
            coeffs[i + k] = self.coeffs[i].clone();
        }
        Self {
            coeffs,
            eta_offset: self.eta_offset.clone(),
        }
    }

    /// Sum of series that share one offset; `None` for an empty iterator.
    pub fn sum<'a>(mut items: impl Iterator<Item = &'a QSeries>) -> Result<Option<Self>> {
        let Some(first) = items.next() else {
            return Ok(None);
        };
        let mut acc = first.clone();
        for s in items {
            acc = acc.add(s)?;
        }
        Ok(Some(acc))
    }

    /// Minimum p-adic valuation over the stored coefficients.
    pub fn min_valuation(&self, p: u64) -> PadicValuation {
        self.coeffs
            .iter()
            .map(|c| valuation(p, c))
            .min()
            .unwrap_or(PadicValuation::Infinite)
    }

    /// The offset written as `d/24`.
    pub(crate) fn offset_24ths(&self) -> BigInt {
        (&self.eta_offset * rat(24)).to_integer()
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.eta_offset.is_zero() {
            write!(f, "q^({}) * (", self.eta_offset)?;
        }
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = mag.is_one();
            match n {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !unit {
                        write!(f, "{mag}*")?;
                    }
                    if n == 1 {
                        f.write_str("q")?;
                    } else {
                        write!(f, "q^{n}")?;
                    }
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.precision())?;
        if !self.eta_offset.is_zero() {
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::ratio;

    fn series(v: &[i64]) -> QSeries {
        QSeries::from_coeffs(v.iter().map(|&x| rat(x)).collect())
    }

    #[test]
    fn difference_of_squares() {
        let a = series(&[1, 1, 0, 0]);
        let b = series(&[1, -1, 0, 0]);
        assert_eq!(a.mul(&b), series(&[1, 0, -1, 0]));
    }

    #[test]
    fn precision_is_minimum() {
        let a = series(&[1, 2, 3, 4, 5]);
        let b = series(&[1, 1, 1]);
        assert_eq!(a.add(&b).unwrap().precision(), 3);
        assert_eq!(a.mul(&b).precision(), 3);
        assert_eq!(a.pow(3).precision(), 5);
    }

    #[test]
    fn mismatched_offsets_are_rejected() {
        let a = series(&[1, 0]);
        let b = series(&[1, 0]).with_eta_offset(ratio(1, 24)).unwrap();
        assert!(matches!(a.add(&b), Err(Error::OffsetMismatch { .. })));
        assert_eq!(a.mul(&b).eta_offset(), &ratio(1, 24));
    }

    #[test]
    fn offsets_must_be_24ths() {
        assert!(series(&[1]).with_eta_offset(ratio(1, 7)).is_err());
        assert!(series(&[1]).with_eta_offset(ratio(-1, 3)).is_ok());
    }

    #[test]
    fn shift_and_display() {
        let s = series(&[1, -2, 0, 3]).shift(1);
        assert_eq!(s, series(&[0, 1, -2, 0]));
        assert_eq!(s.to_string(), "q - 2*q^2 + O(q^4)");
        assert_eq!(QSeries::zero(3).to_string(), "0 + O(q^3)");
    }

    #[test]
    fn zeroth_power_is_unit() {
        let g2 = eisenstein_g(2, 6).unwrap();
        assert_eq!(g2.pow(0), QSeries::one(6));
        assert_eq!(g2.pow(2).coeffs()[0], ratio(1, 576));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_series() -> impl Strategy<Value = QSeries> {
            prop::collection::vec((-20i64..20, 1i64..6), 6).prop_map(|v| {
                QSeries::from_coeffs(v.into_iter().map(|(n, d)| ratio(n, d)).collect())
            })
        }

        proptest! {
            #[test]
            fn ring_laws(a in arb_series(), b in arb_series(), c in arb_series()) {
                prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
                prop_assert_eq!(a.mul(&b.add(&c).unwrap()), a.mul(&b).add(&a.mul(&c)).unwrap());
                prop_assert_eq!(a.mul(&b), b.mul(&a));
                prop_assert_eq!(a.add(&b).unwrap().sub(&b).unwrap(), a);
            }
        }
    }
}
