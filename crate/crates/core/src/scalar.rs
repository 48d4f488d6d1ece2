//! Exact rational scalars.
//!
//! The base field is fixed to ℚ, represented by [`num_rational::BigRational`]:
//! always stored in lowest terms with a positive denominator, which is exactly
//! the canonical form we rely on for equality tests.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Scalar = BigRational;

/// The integer `n` as a scalar.
pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// The fraction `n/d` in lowest terms. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_integer(x: &Scalar) -> bool {
    x.is_integer()
}

/// Converts an integer-valued scalar to `i64`, if it fits.
pub fn scalar_to_i64(x: &Scalar) -> Option<i64> {
    if !x.is_integer() {
        return None;
    }
    x.to_integer().to_i64()
}

/// `base^exp` for a nonzero base (negative exponents invert).
pub fn rat_pow(base: &Scalar, exp: i64) -> Scalar {
    if exp == 0 {
        return Scalar::one();
    }
    let e = exp.unsigned_abs() as u32;
    let p = Scalar::new(base.numer().pow(e), base.denom().pow(e));
    if exp < 0 {
        assert!(!base.is_zero(), "zero base with negative exponent");
        p.recip()
    } else {
        p
    }
}

pub fn floor_int(x: &Scalar) -> BigInt {
    x.floor().to_integer()
}

pub fn ceil_int(x: &Scalar) -> BigInt {
    x.ceil().to_integer()
}

/// Canonical printing: `p` for integers, `p/q` otherwise, `-` for negatives.
pub fn format_scalar(x: &Scalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Absolute value.
pub fn abs(x: &Scalar) -> Scalar {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_sign() {
        let x = rat(2, -4);
        assert_eq!(x, rat(-1, 2));
        assert_eq!(format_scalar(&x), "-1/2");
        assert_eq!(format_scalar(&int(7)), "7");
    }

    #[test]
    fn pow_handles_negative_exponents() {
        assert_eq!(rat_pow(&int(2), -3), rat(1, 8));
        assert_eq!(rat_pow(&rat(-1, 2), 2), rat(1, 4));
        assert_eq!(rat_pow(&int(-1), -3), int(-1));
        assert_eq!(rat_pow(&int(5), 0), int(1));
    }

    #[test]
    fn integer_conversion() {
        assert_eq!(scalar_to_i64(&int(-9)), Some(-9));
        assert_eq!(scalar_to_i64(&rat(1, 2)), None);
    }
}
