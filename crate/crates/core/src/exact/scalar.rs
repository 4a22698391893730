use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational scalar, always in lowest terms with a
/// positive denominator. Zero is represented as 0/1.
pub type ExactScalar = BigRational;

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(n: i64) -> ExactScalar {
    ExactScalar::from_integer(BigInt::from(n))
}

/// num/den as a reduced rational. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> ExactScalar {
    ExactScalar::new(BigInt::from(num), BigInt::from(den))
}

/// Parses "n" or "n/d" (optionally signed) into a reduced rational.
pub fn parse_rational(s: &str) -> Result<ExactScalar> {
    let t = s.trim();
    t.parse::<BigRational>()
        .map_err(|e| Error::Parse(format!("invalid rational {t:?}: {e}")))
}

pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    acc
}

/// (2n-1)!! for the even Gaussian moments; `double_factorial(0) == 1`.
pub fn double_factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = n as i64;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
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

/// Rising product x(x+1)...(x+k-1); equals Gamma(x+k)/Gamma(x) for any
/// rational x where no factor crosses a pole.
pub fn rising(x: &ExactScalar, k: u32) -> ExactScalar {
    let mut acc = ExactScalar::one();
    for i in 0..k {
        acc *= x + rat(i as i64);
    }
    acc
}

/// Falling product x(x-1)...(x-k+1); vanishes at non-negative integers x < k.
pub fn falling(x: &ExactScalar, k: u32) -> ExactScalar {
    let mut acc = ExactScalar::one();
    for i in 0..k {
        acc *= x - rat(i as i64);
    }
    acc
}

/// Gamma(x+d)/Gamma(x) for integer d of either sign, as a rational product.
/// A zero value (numerator Gamma ratio crossing a pole of Gamma(x)) is
/// legitimate for d >= 0; panics only when a denominator factor vanishes.
pub fn gamma_ratio_int(x: &ExactScalar, d: i64) -> ExactScalar {
    if d >= 0 {
        rising(x, d as u32)
    } else {
        let v = rising(&(x + rat(d)), (-d) as u32);
        assert!(!v.is_zero(), "gamma ratio denominator crosses a pole");
        v.recip()
    }
}

/// Writes a scalar as "n" or "n/d"; round-trips through `parse_rational`.
pub fn to_fraction_string(x: &ExactScalar) -> String {
    x.to_string()
}

/// Decimal approximation for display; exact values stay rational everywhere
/// else.
pub fn to_f64(x: &ExactScalar) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if let Some(v) = num_traits::ToPrimitive::to_f64(x) {
        if !v.is_nan() {
            return v;
        }
    }
    // Numerator and denominator overflow f64 on their own: rescale by a power
    // of two so the quotient is computed near unit magnitude.
    let bits = x.numer().bits() as i64 - x.denom().bits() as i64;
    let shifted = if bits > 0 {
        x / ExactScalar::from_integer(BigInt::one() << bits as u64)
    } else {
        x * ExactScalar::from_integer(BigInt::one() << (-bits) as u64)
    };
    let base = num_traits::ToPrimitive::to_f64(&shifted).unwrap_or(f64::NAN);
    base * 2f64.powi(bits as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_form_and_roundtrip() {
        let x = ratio(6, -8);
        assert_eq!(x, ratio(-3, 4));
        assert_eq!(to_fraction_string(&x), "-3/4");
        assert_eq!(parse_rational("-3/4").unwrap(), x);
        assert_eq!(parse_rational("5").unwrap(), rat(5));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn zero_is_canonical() {
        let z = ratio(0, 7);
        assert!(z.is_zero());
        assert_eq!(z.denom(), &big(1));
    }

    #[test]
    fn factorial_helpers() {
        assert_eq!(factorial(0), big(1));
        assert_eq!(factorial(5), big(120));
        assert_eq!(double_factorial(5), big(15));
        assert_eq!(double_factorial(0), big(1));
        assert_eq!(binomial(6, 2), big(15));
        assert_eq!(binomial(3, 5), big(0));
    }

    #[test]
    fn rising_falling_products() {
        let half = ratio(1, 2);
        assert_eq!(rising(&half, 3), ratio(15, 8)); // 1/2 * 3/2 * 5/2
        assert_eq!(falling(&rat(4), 2), rat(12));
        assert!(falling(&rat(2), 5).is_zero());
        assert_eq!(gamma_ratio_int(&half, 2), ratio(3, 4));
        assert_eq!(gamma_ratio_int(&half, -1), rat(-2)); // 1/(x-1) at x=1/2
    }

    #[test]
    fn f64_conversion_handles_large_values() {
        // Both parts overflow f64 individually, ratio is exactly 200.
        let r = ExactScalar::new(factorial(200), factorial(199));
        assert_eq!(to_f64(&r), 200.0);
        assert_eq!(to_f64(&ratio(1, 3)), 1.0 / 3.0);
        assert!(to_f64(&ExactScalar::from_integer(factorial(200))).is_infinite());
    }
}
