use std::collections::HashMap;
use std::sync::{Mutex, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::series::{inv_trunc, pow_trunc};
use super::{binomial, check_prime, int_rat, ratio, Rational};
use crate::error::{Error, Result};

static BERNOULLI: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();

/// Bernoulli number `B_k` with the convention `B_1 = -1/2`.
///
/// Even-index values come from the tangent numbers (integer-only recurrence),
/// and the table is extended geometrically on demand.
pub fn bernoulli(k: u64) -> Rational {
    let k = k as usize;
    let cache = BERNOULLI.get_or_init(|| RwLock::new(Vec::new()));
    if let Some(b) = cache.read().unwrap().get(k) {
        return b.clone();
    }
    let mut table = cache.write().unwrap();
    if table.len() <= k {
        let target = (k + 1).max(2 * table.len()).max(64);
        *table = bernoulli_table(target);
    }
    table[k].clone()
}

fn bernoulli_table(len: usize) -> Vec<Rational> {
    let half = len / 2 + 1;
    // Tangent numbers T_1..T_half (Brent-Harvey in-place scheme).
    let mut tangent = vec![BigInt::zero(); half + 1];
    if half >= 1 {
        tangent[1] = BigInt::one();
    }
    for k in 2..=half {
        tangent[k] = &tangent[k - 1] * (k - 1);
    }
    for k in 2..=half {
        for j in k..=half {
            tangent[j] = &tangent[j - 1] * (j - k) + &tangent[j] * (j - k + 2);
        }
    }

    let mut out = vec![Rational::zero(); len];
    out[0] = Rational::one();
    if len > 1 {
        out[1] = ratio(-1, 2);
    }
    for j in 1..half {
        let idx = 2 * j;
        if idx >= len {
            break;
        }
        let four_j = num_traits::pow(BigInt::from(4), j);
        let num = &tangent[j] * (2 * j);
        let den = &four_j * (&four_j - 1u32);
        let mut b = Rational::new(num, den);
        if j % 2 == 0 {
            b = -b;
        }
        out[idx] = b;
    }
    out
}

static STIRLING: OnceLock<Mutex<HashMap<(u64, u64), BigInt>>> = OnceLock::new();

/// `n! S_r^{(n+1)} = Σ_{j=0}^{n} C(n,j) (-1)^{n+j} (j+1)^{r-1}`, the n-th
/// forward difference of `x^{r-1}` at `x = 1`. Vanishes for `n >= r`.
pub fn stirling_scaled(r: u64, n: u64) -> Rational {
    assert!(r >= 1, "stirling_scaled needs r >= 1");
    let cache = STIRLING.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&(r, n)) {
        return int_rat(v.clone());
    }
    let mut acc = BigInt::zero();
    for j in 0..=n {
        let term = binomial(n, j) * num_traits::pow(BigInt::from(j + 1), (r - 1) as usize);
        if (n + j) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    cache.lock().unwrap().insert((r, n), acc.clone());
    int_rat(acc)
}

/// `Σ_{d | n} d^k`.
pub fn sigma(k: u64, n: u64) -> Rational {
    assert!(n >= 1, "sigma needs n >= 1");
    int_rat(divisor_power_sum(k, n, |_| true))
}

/// `Σ_{d | n, p ∤ d} d^k`.
pub fn sigma_star(p: u64, k: u64, n: u64) -> Result<Rational> {
    check_prime(p)?;
    if n == 0 {
        return Err(Error::InvalidArgument("sigma_star needs n >= 1".into()));
    }
    Ok(int_rat(divisor_power_sum(k, n, |d| d % p != 0)))
}

fn divisor_power_sum(k: u64, n: u64, keep: impl Fn(u64) -> bool) -> BigInt {
    let mut acc = BigInt::zero();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            let e = n / d;
            if keep(d) {
                acc += num_traits::pow(BigInt::from(d), k as usize);
            }
            if e != d && keep(e) {
                acc += num_traits::pow(BigInt::from(e), k as usize);
            }
        }
        d += 1;
    }
    acc
}

/// `n!!` for odd `n` (and `(-1)!! = 1`).
pub fn double_factorial_odd(n: i64) -> Result<Rational> {
    if n < -1 || n % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "double_factorial_odd needs odd n >= -1, got {n}"
        )));
    }
    let mut acc = BigInt::one();
    let mut i = n;
    while i > 1 {
        acc *= i;
        i -= 2;
    }
    Ok(int_rat(acc))
}

static LOG_POWERS: OnceLock<Mutex<HashMap<i64, Vec<Rational>>>> = OnceLock::new();

/// Coefficients of `w^n, w^{n+1}, ..., w^{n+kmax}` in `(log(1+w))^n`.
///
/// Entry `j` is `Coeff_{w^{n+j}}`; for `n = -1` entry `k` is the constant
/// `c_k` of the `h[-1]` expansion.
pub fn log_power_coeffs(n: i64, kmax: usize) -> Vec<Rational> {
    let len = kmax + 1;
    let cache = LOG_POWERS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&n) {
        if v.len() >= len {
            return v[..len].to_vec();
        }
    }
    // log(1+w) = w * Σ_j (-1)^j w^j / (j+1)
    let base: Vec<Rational> = (0..len)
        .map(|j| ratio(if j % 2 == 0 { 1 } else { -1 }, j as i64 + 1))
        .collect();
    let coeffs = if n >= 0 {
        pow_trunc(&base, n, len)
    } else {
        inv_trunc(&pow_trunc(&base, -n, len), len)
    };
    cache.lock().unwrap().insert(n, coeffs.clone());
    coeffs
}
