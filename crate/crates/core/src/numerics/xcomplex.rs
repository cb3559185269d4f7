//! Extended-range complex numbers.
//!
//! Long derivative cocycles grow or shrink exponentially; after a few thousand
//! iterations of a quadratic map they leave the range of `f64`. [`XComplex`]
//! keeps a complex mantissa with modulus in `[1, 2)` and a separate `i64`
//! binary exponent, so products of millions of factors stay representable.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Number of significant bits in an `f64` mantissa.
pub const MANTISSA_BITS: i64 = 53;

/// `mantissa * 2^exponent`, with `1 <= |mantissa| < 2` or the value zero.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XComplex {
    mantissa: Complex64,
    exponent: i64,
}

impl XComplex {
    pub const ZERO: XComplex = XComplex { mantissa: Complex64::new(0.0, 0.0), exponent: 0 };
    pub const ONE: XComplex = XComplex { mantissa: Complex64::new(1.0, 0.0), exponent: 0 };

    /// Builds `mantissa * 2^exponent` and normalizes it.
    pub fn new(mantissa: Complex64, exponent: i64) -> Result<Self> {
        normalize(mantissa, exponent)
    }

    /// Converts a finite complex number.
    ///
    /// Panics if `z` is not finite; use [`XComplex::try_from_complex`] for
    /// values of unknown provenance.
    pub fn from_complex(z: Complex64) -> Self {
        Self::try_from_complex(z).expect("XComplex::from_complex requires a finite value")
    }

    pub fn try_from_complex(z: Complex64) -> Result<Self> {
        normalize(z, 0)
    }

    pub fn from_real(x: f64) -> Self {
        Self::from_complex(Complex64::new(x, 0.0))
    }

    pub fn mantissa(&self) -> Complex64 {
        self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.re == 0.0 && self.mantissa.im == 0.0
    }

    /// The value as an ordinary complex number; saturates to infinity or
    /// flushes to zero outside the `f64` range.
    pub fn to_complex(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        let e = self.exponent.clamp(-4000, 4000) as i32;
        Complex64::new(ldexp(self.mantissa.re, e), ldexp(self.mantissa.im, e))
    }

    /// `log2 |self|`, `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.exponent as f64 + self.mantissa.norm().log2()
    }

    /// `ln |self|`, `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        self.log2_abs() * std::f64::consts::LN_2
    }

    /// `|self|` as an `f64`, saturating.
    pub fn abs(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        ldexp(self.mantissa.norm(), self.exponent.clamp(-4000, 4000) as i32)
    }

    pub fn conj(&self) -> Self {
        XComplex { mantissa: self.mantissa.conj(), exponent: self.exponent }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // 1/m has modulus in (1/2, 1]; the exponent negation cannot overflow
        // for normalized values produced by this module.
        normalize(self.mantissa.inv(), -self.exponent).ok()
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::ZERO);
        }
        let exponent = self.exponent.checked_add(other.exponent).ok_or(Error::Overflow)?;
        normalize(self.mantissa * other.mantissa, exponent)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Ok(*self);
        }
        if self.is_zero() {
            return Ok(*other);
        }
        let (big, small) =
            if self.exponent >= other.exponent { (self, other) } else { (other, self) };
        let gap = big.exponent as i128 - small.exponent as i128;
        if gap > MANTISSA_BITS as i128 {
            return Ok(*big);
        }
        let shifted = small.mantissa * ldexp(1.0, -(gap as i32));
        normalize(big.mantissa + shifted, big.exponent)
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        let inv = other.recip().ok_or_else(|| Error::InvalidInput("division by zero".into()))?;
        self.checked_mul(&inv)
    }

    /// Distance between two values in units of the larger mantissa's last
    /// place, after aligning exponents. `None` if exponents differ by more
    /// than one (values are then not close in any useful sense).
    pub fn ulp_distance(&self, other: &Self) -> Option<f64> {
        if self.is_zero() && other.is_zero() {
            return Some(0.0);
        }
        if self.is_zero() || other.is_zero() || (self.exponent - other.exponent).abs() > 1 {
            return None;
        }
        let e = self.exponent.max(other.exponent);
        let a = self.mantissa * ldexp(1.0, (self.exponent - e) as i32);
        let b = other.mantissa * ldexp(1.0, (other.exponent - e) as i32);
        Some((a - b).norm() / (a.norm().max(b.norm()) * f64::EPSILON))
    }
}

/// Normalized product; exact in the exponent.
pub fn xc_mul(a: XComplex, b: XComplex) -> Result<XComplex> {
    a.checked_mul(&b)
}

/// Normalized sum; a summand more than [`MANTISSA_BITS`] binary orders of
/// magnitude below the other is dropped.
pub fn xc_add(a: XComplex, b: XComplex) -> Result<XComplex> {
    a.checked_add(&b)
}

fn normalize(m: Complex64, exponent: i64) -> Result<XComplex> {
    if !(m.re.is_finite() && m.im.is_finite()) {
        return Err(Error::Overflow);
    }
    if m.re == 0.0 && m.im == 0.0 {
        return Ok(XComplex::ZERO);
    }
    let k = binary_exponent(m.re.abs().max(m.im.abs()));
    let mut mantissa = Complex64::new(ldexp(m.re, -k), ldexp(m.im, -k));
    let mut k = k as i64;
    // max component now in [1, 2); the modulus is in [1, 2*sqrt 2)
    if mantissa.norm() >= 2.0 {
        mantissa = mantissa * 0.5;
        k += 1;
    }
    let exponent = exponent.checked_add(k).ok_or(Error::Overflow)?;
    Ok(XComplex { mantissa, exponent })
}

/// `floor(log2 x)` for finite positive `x`, exact (subnormals included).
fn binary_exponent(x: f64) -> i32 {
    let bits = x.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i32;
    if biased == 0 {
        // subnormal: rescale into the normal range first
        return binary_exponent(x * ldexp(1.0, 64)) - 64;
    }
    biased - 1023
}

/// `x * 2^n` without intermediate overflow for any `n` that lands in range.
pub(crate) fn ldexp(mut x: f64, mut n: i32) -> f64 {
    const STEP: i32 = 1000;
    while n > STEP {
        x *= pow2(STEP);
        n -= STEP;
        if x.is_infinite() {
            return x;
        }
    }
    while n < -STEP {
        x *= pow2(-STEP);
        n += STEP;
        if x == 0.0 {
            return x;
        }
    }
    if n < -1022 {
        // two steps keep the result exact until it genuinely goes subnormal
        x * pow2(-1022) * pow2(n + 1022)
    } else {
        x * pow2(n)
    }
}

fn pow2(n: i32) -> f64 {
    debug_assert!((-1022..=1023).contains(&n));
    f64::from_bits(((n + 1023) as u64) << 52)
}

impl Default for XComplex {
    fn default() -> Self {
        Self::ZERO
    }
}

impl From<Complex64> for XComplex {
    fn from(z: Complex64) -> Self {
        Self::from_complex(z)
    }
}

impl fmt::Debug for XComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i) * 2^{}", self.mantissa.re, self.mantissa.im, self.exponent)
    }
}

impl fmt::Display for XComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent.abs() < 1000 {
            let z = self.to_complex();
            return write!(f, "{}{:+}i", z.re, z.im);
        }
        // decimal scientific form with the exponent carried separately
        let log10 = self.exponent as f64 * std::f64::consts::LOG10_2;
        let e10 = log10.floor();
        let scaled = self.mantissa * 10f64.powf(log10 - e10);
        write!(f, "({}{:+}i)e{}", scaled.re, scaled.im, e10 as i64)
    }
}

// Operator forms panic on exponent overflow, which needs exponents near
// 2^63 and does not occur for finite orbit lengths.
impl Mul for XComplex {
    type Output = XComplex;
    fn mul(self, rhs: XComplex) -> XComplex {
        self.checked_mul(&rhs).expect("XComplex exponent overflow")
    }
}

impl Mul<Complex64> for XComplex {
    type Output = XComplex;
    fn mul(self, rhs: Complex64) -> XComplex {
        self * XComplex::from_complex(rhs)
    }
}

impl Add for XComplex {
    type Output = XComplex;
    fn add(self, rhs: XComplex) -> XComplex {
        self.checked_add(&rhs).expect("XComplex exponent overflow")
    }
}

impl Neg for XComplex {
    type Output = XComplex;
    fn neg(self) -> XComplex {
        XComplex { mantissa: -self.mantissa, exponent: self.exponent }
    }
}

impl Sub for XComplex {
    type Output = XComplex;
    fn sub(self, rhs: XComplex) -> XComplex {
        self + (-rhs)
    }
}

impl Div for XComplex {
    type Output = XComplex;
    fn div(self, rhs: XComplex) -> XComplex {
        self.checked_div(&rhs).expect("XComplex division by zero")
    }
}

impl PartialOrd for XComplex {
    /// Orders by modulus.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.log2_abs().partial_cmp(&other.log2_abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_product() {
        let p = xc_mul(XComplex::ONE, XComplex::ONE).unwrap();
        assert_eq!(p.mantissa(), c(1.0, 0.0));
        assert_eq!(p.exponent(), 0);
    }

    #[test]
    fn powers_of_base_are_exact() {
        let four = XComplex::from_real(4.0);
        assert_eq!(four.exponent(), 2);
        let p = xc_mul(four, four).unwrap();
        assert_eq!(p.mantissa(), c(1.0, 0.0));
        assert_eq!(p.exponent(), 4);
    }

    #[test]
    fn long_product_exponent_matches_closed_form() {
        // (-4)^(10^5) = 2^(2*10^5)
        let factor = XComplex::from_real(-4.0);
        let mut acc = XComplex::ONE;
        for _ in 0..100_000 {
            acc = xc_mul(acc, factor).unwrap();
        }
        assert_eq!(acc.exponent(), 200_000);
        assert_eq!(acc.mantissa().norm(), 1.0);
        assert_eq!(acc.mantissa().im, 0.0);
    }

    #[test]
    fn exponent_overflow_is_reported() {
        let big = XComplex::new(c(1.0, 0.0), i64::MAX - 1).unwrap();
        assert_eq!(xc_mul(big, big), Err(Error::Overflow));
    }

    #[test]
    fn additive_identity_and_small_sums() {
        let x = XComplex::from_complex(c(3.25, -1.5));
        assert_eq!(xc_add(x, XComplex::ZERO).unwrap(), x);
        assert_eq!(xc_add(XComplex::ZERO, x).unwrap(), x);
        let s = xc_add(XComplex::from_real(3.0), XComplex::from_real(5.0)).unwrap();
        assert_eq!(s.to_complex(), c(8.0, 0.0));
        assert_eq!(s.exponent(), 3);
    }

    #[test]
    fn swamped_addend_is_dropped() {
        let tiny = XComplex::new(c(1.0, 0.0), -2000).unwrap();
        let s = xc_add(XComplex::ONE, tiny).unwrap();
        assert_eq!(s, XComplex::ONE);
        let s = xc_add(tiny, XComplex::ONE).unwrap();
        assert_eq!(s, XComplex::ONE);
    }

    #[test]
    fn cancellation_renormalizes() {
        let a = XComplex::new(c(1.5, 0.0), 10).unwrap();
        let b = XComplex::new(c(-1.25, 0.0), 10).unwrap();
        let s = a + b;
        assert_eq!(s.to_complex(), c(256.0, 0.0));
        assert!((a + (-a)).is_zero());
    }

    #[test]
    fn subnormal_and_huge_inputs_normalize() {
        let tiny = XComplex::from_real(5e-324);
        assert_eq!(tiny.exponent(), -1074);
        assert_eq!(tiny.mantissa(), c(1.0, 0.0));
        let huge = XComplex::from_complex(c(f64::MAX, f64::MAX));
        assert!(huge.mantissa().norm() < 2.0 && huge.mantissa().norm() >= 1.0);
        assert!(XComplex::try_from_complex(c(f64::NAN, 0.0)).is_err());
        assert!(XComplex::try_from_complex(c(f64::INFINITY, 0.0)).is_err());
    }

    #[test]
    fn out_of_range_values_saturate_on_conversion() {
        let big = XComplex::new(c(1.0, 0.0), 5000).unwrap();
        assert!(big.to_complex().re.is_infinite());
        assert_eq!(big.recip().unwrap().to_complex(), c(0.0, 0.0));
        assert!((big.log2_abs() - 5000.0).abs() < 1e-12);
    }

    fn arb_x() -> impl Strategy<Value = XComplex> {
        (1.0f64..2.0, 0.0f64..std::f64::consts::TAU, -10_000i64..10_000).prop_map(
            |(r, theta, e)| XComplex::new(Complex64::from_polar(r, theta), e).unwrap(),
        )
    }

    proptest! {
        #[test]
        fn mantissa_stays_normalized(a in arb_x(), b in arb_x()) {
            for v in [a * b, a + b, a / b] {
                let m = v.mantissa().norm();
                prop_assert!(v.is_zero() || (1.0..2.0).contains(&m), "mantissa modulus {}", m);
            }
        }

        #[test]
        fn multiplication_is_exact_in_log_space(a in arb_x(), b in arb_x()) {
            let p = xc_mul(a, b).unwrap();
            let expected = a.log2_abs() + b.log2_abs();
            prop_assert!((p.log2_abs() - expected).abs() <= 1e-14 * (a.log2_abs().abs() + b.log2_abs().abs()).max(1.0));
        }

        #[test]
        fn multiplication_is_associative(a in arb_x(), b in arb_x(), c in arb_x()) {
            let left = (a * b) * c;
            let right = a * (b * c);
            let ulps = left.ulp_distance(&right).unwrap();
            prop_assert!(ulps <= 4.0, "{} ulps", ulps);
        }
    }
}
