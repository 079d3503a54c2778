//! Exact rational helpers shared across modules.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

/// The crate-wide exact rational type. Masses, moments, variances and
/// Fourier coefficients never touch floating point until a report needs
/// a decimal rendering.
pub type Rational = num_rational::BigRational;

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// 2^(−k), the mass of a consistent leaf whose constraint system has rank k.
pub fn dyadic(k: usize) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k)
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// ⌈q⌉ for q ≥ 0.
pub fn ceil_nonnegative(q: &Rational) -> BigInt {
    debug_assert!(!q.is_negative());
    let (numer, denom) = (q.numer(), q.denom());
    (numer + denom - BigInt::one()) / denom
}

/// Render a float with the given number of significant digits, in plain
/// positional notation. Reports use 12; exact rationals display themselves.
pub fn significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn dyadic_masses() {
        assert_eq!(dyadic(0), integer(1));
        assert_eq!(dyadic(2), ratio(1, 4));
    }

    #[test]
    fn ceil_of_nonnegative_rationals() {
        assert_eq!(ceil_nonnegative(&ratio(9, 4)), BigInt::from(3));
        assert_eq!(ceil_nonnegative(&ratio(8, 4)), BigInt::from(2));
        assert_eq!(ceil_nonnegative(&Rational::zero()), BigInt::zero());
    }

    #[test]
    fn significant_digit_rendering() {
        assert_eq!(significant(2.354820044602, 12), "2.35482004460");
        assert_eq!(significant(0.8112781244591328, 12), "0.811278124459");
        assert_eq!(significant(0.0, 12), "0");
        assert_eq!(significant(-1.5, 3), "-1.50");
    }

    #[test]
    fn rational_display_is_reduced() {
        assert_eq!(ratio(4, 8).to_string(), "1/2");
        assert_eq!(ratio(6, 2).to_string(), "3");
        assert_eq!(ratio(-3, 2).to_string(), "-3/2");
    }
}
