//! Exact rational scalars.

use num::bigint::Sign;
use num::{BigInt, BigRational, Integer, One, Signed, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Renders `p/q`, or just `p` for integers.
pub fn render(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Renders a rational as a decimal rounded half away from zero to `digits` places.
pub fn render_decimal(value: &Rational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = value.abs() * Rational::from_integer(scale.clone());
    let rounded = (scaled + rat(1, 2)).floor().to_integer();
    let (whole, frac) = rounded.div_rem(&scale);
    let negative = value.is_negative() && !rounded.is_zero();
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(&whole.to_string());
    if digits > 0 {
        let frac = frac.to_string();
        out.push('.');
        out.extend(std::iter::repeat('0').take(digits - frac.len()));
        out.push_str(&frac);
    }
    out
}

/// Lossy conversion used only for display and the floating-point demonstration.
pub fn to_f64(value: &Rational) -> f64 {
    fn big_to_f64(x: &BigInt) -> f64 {
        let (sign, digits) = x.to_u64_digits();
        let mut acc = 0.0f64;
        for d in digits.iter().rev() {
            acc = acc * 18446744073709551616.0 + *d as f64;
        }
        if sign == Sign::Minus {
            -acc
        } else {
            acc
        }
    }
    // Shift both parts down so huge numerators and denominators do not overflow.
    let n = value.numer();
    let d = value.denom();
    let excess = (n.bits().max(d.bits()) as i64 - 1000).max(0) as u64;
    let n = n >> excess;
    let d = d >> excess;
    if d.is_zero() {
        return 0.0;
    }
    big_to_f64(&n) / big_to_f64(&d)
}
