use num_traits::Zero;

use super::QSeries;
use crate::exact_arith::series::pow_trunc;
use crate::exact_arith::{rat, ratio, Rational};

/// `Π_{n>=1} (1 - q^n)` to the given precision.
pub fn euler_product(precision: usize) -> QSeries {
    let n = precision.max(1);
    let mut coeffs = vec![Rational::zero(); n];
    coeffs[0] = rat(1);
    for k in 1..n {
        // multiply in place by (1 - q^k), high degrees first
        for i in (k..n).rev() {
            let t = coeffs[i - k].clone();
            coeffs[i] -= t;
        }
    }
    QSeries::from_coeffs(coeffs)
}

/// `η(q)^d = q^{d/24} Π (1 - q^n)^d`; negative `d` inverts the product exactly.
pub fn eta_power(d: i64, precision: usize) -> QSeries {
    let base = euler_product(precision);
    let coeffs = pow_trunc(base.coeffs(), d, base.precision());
    QSeries::from_coeffs(coeffs)
        .with_eta_offset(ratio(d, 24))
        .expect("d/24 is a multiple of 1/24")
}
