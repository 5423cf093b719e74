//! Dense truncated power-series kernels over `Rational`, shared by the
//! special-number code and `QSeries`.

use num_traits::{One, Zero};

use super::Rational;

pub(crate) fn mul_trunc(a: &[Rational], b: &[Rational], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Multiplicative inverse; `a[0]` must be nonzero.
pub(crate) fn inv_trunc(a: &[Rational], len: usize) -> Vec<Rational> {
    assert!(!a.is_empty() && !a[0].is_zero(), "series not invertible");
    let inv0 = a[0].recip();
    let mut out = vec![Rational::zero(); len];
    if len == 0 {
        return out;
    }
    out[0] = inv0.clone();
    for n in 1..len {
        let mut acc = Rational::zero();
        for k in 1..=n.min(a.len() - 1) {
            if !a[k].is_zero() {
                acc += &a[k] * &out[n - k];
            }
        }
        out[n] = -acc * &inv0;
    }
    out
}

/// Integer power by repeated squaring; negative exponents go through the
/// inverse.
pub(crate) fn pow_trunc(a: &[Rational], exp: i64, len: usize) -> Vec<Rational> {
    let base: Vec<Rational> = if exp < 0 {
        inv_trunc(a, len)
    } else {
        a.iter().take(len).cloned().collect()
    };
    let mut e = exp.unsigned_abs();
    let mut result = one(len);
    let mut sq = base;
    sq.resize(len, Rational::zero());
    while e > 0 {
        if e & 1 == 1 {
            result = mul_trunc(&result, &sq, len);
        }
        e >>= 1;
        if e > 0 {
            sq = mul_trunc(&sq, &sq, len);
        }
    }
    result
}

pub(crate) fn one(len: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); len];
    if len > 0 {
        v[0] = Rational::one();
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{rat, ratio};

    #[test]
    fn inverse_of_one_minus_q_is_geometric() {
        let a = vec![rat(1), rat(-1)];
        assert_eq!(inv_trunc(&a, 5), vec![rat(1); 5]);
    }

    #[test]
    fn negative_power_matches_inverse_of_power() {
        let a = vec![rat(2), ratio(1, 3), rat(-5)];
        let lhs = pow_trunc(&a, -3, 8);
        let rhs = inv_trunc(&pow_trunc(&a, 3, 8), 8);
        assert_eq!(lhs, rhs);
        assert_eq!(mul_trunc(&lhs, &pow_trunc(&a, 3, 8), 8), one(8));
    }
}
