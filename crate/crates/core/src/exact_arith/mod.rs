//! Exact scalars, p-adic valuations and the special numbers used throughout
//! the crate.
//!
//! Everything is computed over arbitrary-precision rationals; there is no
//! floating-point fallback anywhere.

pub(crate) mod series;
mod special;

pub use special::{
    bernoulli, double_factorial_odd, log_power_coeffs, sigma, sigma_star, stirling_scaled,
};

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision fraction, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int_rat(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// Renders `num/den`, or just `num` for integers.
pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    s.trim()
        .parse::<Rational>()
        .map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `p^e` as a big integer.
pub fn pow_big(p: u64, e: u64) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

/// p-adic valuation: a finite integer or `+inf` (the valuation of zero).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PadicValuation {
    Finite(i64),
    Infinite,
}

impl PadicValuation {
    pub fn is_infinite(self) -> bool {
        matches!(self, PadicValuation::Infinite)
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            PadicValuation::Finite(v) => Some(v),
            PadicValuation::Infinite => None,
        }
    }

    /// True when the valuation is at least `bound`.
    pub fn at_least(self, bound: i64) -> bool {
        match self {
            PadicValuation::Finite(v) => v >= bound,
            PadicValuation::Infinite => true,
        }
    }
}

impl PartialOrd for PadicValuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PadicValuation {
    fn cmp(&self, other: &Self) -> Ordering {
        use PadicValuation::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), Infinite) => Ordering::Less,
            (Infinite, Finite(_)) => Ordering::Greater,
            (Infinite, Infinite) => Ordering::Equal,
        }
    }
}

impl Add for PadicValuation {
    type Output = PadicValuation;

    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (PadicValuation::Finite(a), PadicValuation::Finite(b)) => PadicValuation::Finite(a + b),
            _ => PadicValuation::Infinite,
        }
    }
}

impl fmt::Display for PadicValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PadicValuation::Finite(v) => write!(f, "{v}"),
            PadicValuation::Infinite => f.write_str("inf"),
        }
    }
}

fn valuation_uint(p: u64, n: &BigUint) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigUint::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

pub fn valuation_int(p: u64, n: &BigInt) -> PadicValuation {
    if n.is_zero() {
        PadicValuation::Infinite
    } else {
        PadicValuation::Finite(valuation_uint(p, n.magnitude()))
    }
}

/// `v_p(numerator) - v_p(denominator)`, or `+inf` for zero.
pub fn valuation(p: u64, x: &Rational) -> PadicValuation {
    if x.is_zero() {
        return PadicValuation::Infinite;
    }
    PadicValuation::Finite(
        valuation_uint(p, x.numer().magnitude()) - valuation_uint(p, x.denom().magnitude()),
    )
}

/// Canonical residue of a p-integral rational modulo `p^m`, in `[0, p^m)`.
/// Returns `None` when `x` has negative valuation.
pub fn residue_mod_prime_power(x: &Rational, p: u64, m: u32) -> Option<BigInt> {
    let modulus = pow_big(p, m as u64);
    let den = x.denom().mod_floor(&modulus);
    let ext = den.extended_gcd(&modulus);
    if !ext.gcd.is_one() {
        return None;
    }
    let inv = ext.x.mod_floor(&modulus);
    Some((x.numer() * inv).mod_floor(&modulus))
}

/// `x ≡ y (mod p^m)` in the sense `v_p(x - y) >= m`.
pub fn congruent_mod(x: &Rational, y: &Rational, p: u64, m: i64) -> bool {
    valuation(p, &(x - y)).at_least(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(5, &ratio(1, 3)), PadicValuation::Finite(0));
        assert_eq!(valuation(5, &ratio(50, 3)), PadicValuation::Finite(2));
        assert_eq!(valuation(5, &ratio(3, 25)), PadicValuation::Finite(-2));
        assert_eq!(valuation(7, &rat(0)), PadicValuation::Infinite);
    }

    #[test]
    fn valuation_ordering_puts_infinity_last() {
        assert!(PadicValuation::Finite(1000) < PadicValuation::Infinite);
        assert!(PadicValuation::Finite(-3) < PadicValuation::Finite(2));
        assert!(PadicValuation::Infinite.at_least(i64::MAX));
    }

    #[test]
    fn residues() {
        // 1/3 mod 5: 3 * 2 = 6 = 1
        assert_eq!(
            residue_mod_prime_power(&ratio(1, 3), 5, 1),
            Some(BigInt::from(2))
        );
        assert_eq!(
            residue_mod_prime_power(&ratio(-1, 1), 5, 2),
            Some(BigInt::from(24))
        );
        assert_eq!(residue_mod_prime_power(&ratio(1, 5), 5, 2), None);
    }

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, 4), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
    }

    #[test]
    fn rational_rendering() {
        assert_eq!(format_rational(&ratio(-19, 720)), "-19/720");
        assert_eq!(format_rational(&ratio(4, 2)), "2");
        assert_eq!(parse_rational(" -6/4 ").unwrap(), ratio(-3, 2));
        assert!(parse_rational("1/0").is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_rat() -> impl Strategy<Value = Rational> {
            (-2000i64..2000, 1i64..2000).prop_map(|(n, d)| ratio(n, d))
        }

        proptest! {
            #[test]
            fn valuation_is_additive(x in small_rat(), y in small_rat(), p in prop::sample::select(vec![2u64, 3, 5, 7, 11])) {
                prop_assert_eq!(valuation(p, &(&x * &y)), valuation(p, &x) + valuation(p, &y));
            }

            #[test]
            fn lowest_terms(x in small_rat()) {
                prop_assert!(x.denom() > &BigInt::zero());
                prop_assert!(x.numer().gcd(x.denom()).is_one() || x.is_zero());
            }
        }
    }
}
