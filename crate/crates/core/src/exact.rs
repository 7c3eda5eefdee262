//! Exact polynomial arithmetic over the integers.
//!
//! Every finite `f64` is a dyadic rational `m·2^e`. Bringing a set of them
//! to a common exponent turns them into integers, after which sums,
//! products and exact quotients involve no rounding at all.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

/// `v = mantissa · 2^exponent`, exactly.
pub(crate) fn decompose(v: f64) -> (i64, i32) {
    debug_assert!(v.is_finite());
    if v == 0.0 {
        return (0, 0);
    }
    let bits = v.to_bits();
    let sign = if bits >> 63 == 0 { 1 } else { -1 };
    let raw_exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = (bits & 0x000f_ffff_ffff_ffff) as i64;
    let (mantissa, exponent) = if raw_exp == 0 {
        (frac, -1074)
    } else {
        (frac | 0x0010_0000_0000_0000, raw_exp - 1075)
    };
    (sign * mantissa, exponent)
}

/// Smallest exponent needed to represent every value as an integer.
pub(crate) fn common_exponent(values: impl IntoIterator<Item = f64>) -> i32 {
    values
        .into_iter()
        .filter(|v| *v != 0.0)
        .map(|v| decompose(v).1)
        .min()
        .unwrap_or(0)
}

/// `v / 2^exponent` as an integer; `exponent` must not exceed the value's own.
pub(crate) fn to_scaled_int(v: f64, exponent: i32) -> BigInt {
    let (m, e) = decompose(v);
    debug_assert!(m == 0 || e >= exponent);
    BigInt::from(m) << ((e - exponent).max(0) as usize)
}

fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}

/// `a / b` rounded to an `f64` (to within one unit in the last place).
pub(crate) fn ratio(a: &BigInt, b: &BigInt) -> f64 {
    assert!(!b.is_zero(), "ratio with zero denominator");
    if a.is_zero() {
        return 0.0;
    }
    let negative = a.is_negative() != b.is_negative();
    let (a, b) = (a.abs(), b.abs());
    // Shift so the integer quotient carries about 66 significant bits.
    let shift = 66 + b.bits() as i64 - a.bits() as i64;
    let q = if shift >= 0 {
        (a << shift as usize) / b
    } else {
        a / (b << (-shift) as usize)
    };
    let v = ldexp(q.to_f64().expect("quotient fits in f64"), -shift);
    if negative {
        -v
    } else {
        v
    }
}

/// Integer-coefficient polynomial, ascending powers, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: BigInt, power: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); power];
        coeffs.push(c);
        Self::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// Exact quotient; panics if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &IntPoly) -> IntPoly {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return IntPoly::zero();
        }
        let dd = divisor.degree();
        assert!(self.degree() >= dd, "inexact polynomial division");
        let lead = &divisor.coeffs[dd];
        let mut rem = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); self.degree() - dd + 1];
        for k in (0..q.len()).rev() {
            let (factor, r) = rem[k + dd].div_rem(lead);
            assert!(r.is_zero(), "inexact polynomial division");
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &factor * dc;
            }
            q[k] = factor;
        }
        assert!(rem.iter().all(Zero::is_zero), "inexact polynomial division");
        IntPoly::new(q)
    }

    /// Greatest common divisor of the coefficients (zero for the zero
    /// polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn div_scalar(&self, d: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c / d).collect())
    }

    /// Drops a factor `s^k` from the bottom.
    pub fn shift_down(&self, k: usize) -> IntPoly {
        IntPoly::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    /// Number of leading zero coefficients (the multiplicity of the root
    /// at the origin).
    pub fn low_zeros(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decompose_round_trips() {
        for v in [1.0, -3.5, 15e3, 47e-9, 4.9e-324, f64::MAX] {
            let (m, e) = decompose(v);
            assert_eq!(m as f64 * 2f64.powi(e.max(-1022)) * 2f64.powi((e + 1022).min(0)), v);
        }
    }

    #[test]
    fn scaled_integers_are_exact() {
        let vals = [1.0 / 15e3, 47e-9, 10e-9];
        let e = common_exponent(vals);
        let ints: Vec<_> = vals.iter().map(|&v| to_scaled_int(v, e)).collect();
        for (i, &v) in ints.iter().zip(&vals) {
            assert_eq!(ratio(i, &(BigInt::from(1) << (-e) as usize)), v);
        }
    }

    #[test]
    fn ratio_rounds_correctly() {
        assert_eq!(ratio(&BigInt::from(1), &BigInt::from(3)), 1.0 / 3.0);
        assert_eq!(ratio(&BigInt::from(-10), &BigInt::from(4)), -2.5);
        let big = BigInt::from(7) << 2000usize;
        assert_eq!(ratio(&big, &(BigInt::from(2) << 2000usize)), 3.5);
    }

    #[test]
    fn exact_division_and_content() {
        let a = IntPoly::new(vec![BigInt::from(6), BigInt::from(4)]);
        let b = IntPoly::new(vec![BigInt::from(3), BigInt::from(0), BigInt::from(9)]);
        let p = &a * &b;
        assert_eq!(p.div_exact(&b), a);
        assert_eq!(p.content(), BigInt::from(6));
    }

    #[test]
    #[should_panic(expected = "inexact")]
    fn inexact_division_panics() {
        let a = IntPoly::new(vec![BigInt::from(1), BigInt::from(1)]);
        let b = IntPoly::new(vec![BigInt::from(2), BigInt::from(1)]);
        let _ = a.div_exact(&b);
    }
}
