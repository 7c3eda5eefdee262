//! Polynomials and rational functions in the Laplace variable `s`.
//!
//! Coefficients are stored in ascending powers of `s`. Transfer-function
//! coefficients carry powers of seconds, so a third-order filter in SI units
//! easily spans twenty decades between its constant and cubic terms; the
//! root finders below are bracketing methods for that reason.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::numeric::bisect;
use crate::{Error, Result};

/// Real-coefficient polynomial, ascending powers. The zero polynomial has no
/// stored coefficients; otherwise the highest stored coefficient is nonzero.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: impl Into<Vec<f64>>) -> Self {
        let mut coeffs = coeffs.into();
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    /// `c0 + c1·s`
    pub fn linear(c0: f64, c1: f64) -> Self {
        Self::new(vec![c0, c1])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `s^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    /// Horner evaluation.
    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c)
    }

    pub fn eval_real(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Sum of `|c_k|·r^k`, the magnitude scale of the terms at `|s| = r`.
    pub(crate) fn abs_eval(&self, r: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * r + c.abs())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect::<Vec<_>>(),
        )
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * k).collect::<Vec<_>>())
    }

    /// `p(t·s)`: multiplies the coefficient of `s^k` by `t^k`.
    pub fn scale_variable(&self, t: f64) -> Self {
        let mut tk = 1.0;
        let mut out = Vec::with_capacity(self.coeffs.len());
        for &c in &self.coeffs {
            out.push(c * tk);
            tk *= t;
        }
        Self::new(out)
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Drops leading coefficients smaller than `rel` times the largest one.
    pub fn trim_relative(&self, rel: f64) -> Self {
        let limit = rel * self.max_abs();
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.abs() <= limit) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Zeroes every coefficient smaller than `rel` times the largest one.
    pub fn chop(&self, rel: f64) -> Self {
        let limit = rel * self.max_abs();
        Self::new(
            self.coeffs
                .iter()
                .map(|&c| if c.abs() <= limit { 0.0 } else { c })
                .collect::<Vec<_>>(),
        )
    }

    /// Synthetic division by `(s - root)`: returns the quotient and remainder.
    pub fn div_linear(&self, root: f64) -> (Self, f64) {
        if self.coeffs.len() < 2 {
            return (Self::zero(), self.coeff(0));
        }
        let n = self.coeffs.len();
        let mut q = vec![0.0; n - 1];
        let mut carry = self.coeffs[n - 1];
        q[n - 2] = carry;
        for k in (1..n - 1).rev() {
            carry = self.coeffs[k] + root * carry;
            q[k - 1] = carry;
        }
        let rem = self.coeffs[0] + root * carry;
        (Self::new(q), rem)
    }

    /// Quotient of a division known to be exact; the remainder is discarded.
    pub fn div_exact(&self, divisor: &Polynomial) -> Self {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.is_zero() || self.degree() < divisor.degree() {
            return Self::zero();
        }
        let dd = divisor.degree();
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut q = vec![0.0; self.degree() - dd + 1];
        for k in (0..q.len()).rev() {
            let factor = rem[k + dd] / lead;
            q[k] = factor;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= factor * dc;
            }
        }
        Self::new(q)
    }

    /// Cauchy bound: every root satisfies `|r| < 1 + max |c_k / c_n|`.
    pub fn cauchy_bound(&self) -> f64 {
        let lead = self.leading();
        1.0 + self.coeffs[..self.coeffs.len().saturating_sub(1)]
            .iter()
            .fold(0.0, |m: f64, c| m.max((c / lead).abs()))
    }

    /// All real roots in ascending order, isolated between the real critical
    /// points and refined by bisection. Multiple roots are reported once.
    pub fn real_roots(&self) -> Vec<f64> {
        let mut p = self.clone();
        let mut roots = Vec::new();
        let mut has_origin = false;
        while p.coeffs.len() > 1 && p.coeffs[0] == 0.0 {
            p.coeffs.remove(0);
            has_origin = true;
        }
        if has_origin {
            roots.push(0.0);
        }
        match p.degree() {
            _ if p.is_zero() => {}
            0 => {}
            1 => roots.push(-p.coeffs[0] / p.coeffs[1]),
            _ => {
                let bound = p.cauchy_bound();
                let mut marks = vec![-bound];
                marks.extend(
                    p.derivative()
                        .real_roots()
                        .into_iter()
                        .filter(|c| c.abs() < bound),
                );
                marks.push(bound);
                for w in marks.windows(2) {
                    let (a, b) = (w[0], w[1]);
                    let (fa, fb) = (p.eval_real(a), p.eval_real(b));
                    if fa == 0.0 {
                        roots.push(a);
                    } else if fa.signum() != fb.signum() && fb != 0.0 {
                        let eval = |x: f64| Ok(p.eval_real(x));
                        if let Ok(r) = bisect(eval, a, b, 1e-15, 2000) {
                            roots.push(r);
                        }
                    }
                }
            }
        }
        roots.sort_by(f64::total_cmp);
        roots.dedup();
        roots
    }

    /// All complex roots, from the eigenvalues of the companion matrix of
    /// the frequency-scaled monic polynomial.
    pub fn roots(&self) -> Vec<Complex64> {
        let mut p = self.clone();
        let mut roots = Vec::new();
        while p.coeffs.len() > 1 && p.coeffs[0] == 0.0 {
            p.coeffs.remove(0);
            roots.push(Complex64::new(0.0, 0.0));
        }
        let n = p.degree();
        if p.is_zero() || n == 0 {
            return roots;
        }
        if n == 1 {
            roots.push(Complex64::new(-p.coeffs[0] / p.coeffs[1], 0.0));
            return roots;
        }
        // Geometric mean of root magnitudes brings the scaled roots near 1.
        let w0 = (p.coeffs[0] / p.leading()).abs().powf(1.0 / n as f64);
        let scaled = p.scale_variable(w0);
        let lead = scaled.leading();
        let mut companion = DMatrix::<f64>::zeros(n, n);
        for i in 1..n {
            companion[(i, i - 1)] = 1.0;
        }
        for i in 0..n {
            companion[(i, n - 1)] = -scaled.coeffs[i] / lead;
        }
        roots.extend(companion.complex_eigenvalues().iter().map(|z| z * w0));
        roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        roots
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect::<Vec<_>>())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect::<Vec<_>>())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

/// Overall sign of a [`RationalFunction`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Positive => 1.0,
            Sign::Negative => -1.0,
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

/// `H(s) = sign · num(s) / den(s)`.
///
/// Construction normalizes the denominator so its constant term is 1 (or,
/// when the constant term vanishes, so it is monic) and moves any negative
/// numerator lead into `sign`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
    sign: Sign,
}

/// Factors of a third-order denominator written as `(s + a)(s² + (ωn/Q)s + ωn²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandpassFactors {
    /// Magnitude of the real pole, rad/s.
    pub a: f64,
    pub omega_n: f64,
    pub q: f64,
    /// Signed ratio of the numerator and denominator leading coefficients.
    pub gain_scale: f64,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        Self::with_sign(num, den, Sign::Positive)
    }

    pub fn with_sign(num: Polynomial, den: Polynomial, sign: Sign) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidParameter("denominator is identically zero".into()));
        }
        let norm = if den.coeff(0) != 0.0 { den.coeff(0) } else { den.leading() };
        let mut num = num.scale(1.0 / norm);
        let den = den.scale(1.0 / norm);
        let mut sign = sign;
        if num.leading() < 0.0 {
            num = -&num;
            sign = -sign;
        }
        Ok(Self { num, den, sign })
    }

    pub fn constant(k: f64) -> Self {
        Self::new(Polynomial::constant(k), Polynomial::one()).expect("unit denominator")
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// Multiplies the whole function by a real constant.
    pub fn scale(&self, k: f64) -> Self {
        let mut out = self.clone();
        out.num = out.num.scale(k.abs());
        if k < 0.0 {
            out.sign = -out.sign;
        }
        out
    }

    pub fn negate(&self) -> Self {
        let mut out = self.clone();
        out.sign = -out.sign;
        out
    }

    /// `H(s)` at a complex frequency. Fails when the denominator vanishes to
    /// within rounding of its own terms.
    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        let d = self.den.eval(s);
        let scale = self.den.abs_eval(s.norm());
        if d.norm().is_nan() || d.norm() <= 4.0 * f64::EPSILON * scale {
            return Err(Error::PoleOnAxis { omega: s.im });
        }
        Ok(self.num.eval(s) / d * self.sign.value())
    }

    /// `H(jω)`.
    pub fn eval_jw(&self, omega: f64) -> Result<Complex64> {
        self.eval(Complex64::new(0.0, omega))
    }

    /// `H(j2πf)`.
    pub fn eval_hz(&self, f_hz: f64) -> Result<Complex64> {
        self.eval_jw(std::f64::consts::TAU * f_hz)
    }

    /// Splits a third-order denominator into its real pole and the quadratic
    /// carrying `ωn` and `Q`.
    pub fn bandpass_factors(&self) -> Result<BandpassFactors> {
        if self.den.degree() != 3 {
            return Err(Error::WrongDegree {
                expected: 3,
                actual: self.den.degree(),
            });
        }
        let (root, quad) = real_roots_cubic(&self.den)?;
        let (q0, q1, q2) = (quad.coeff(0), quad.coeff(1), quad.coeff(2));
        if q1 * q1 - 4.0 * q0 * q2 >= 0.0 {
            return Err(Error::RealQuadratic);
        }
        let omega_n = (q0 / q2).sqrt();
        Ok(BandpassFactors {
            a: -root,
            omega_n,
            q: omega_n / (q1 / q2),
            gain_scale: self.sign.value() * self.num.leading() / self.den.leading(),
        })
    }

    /// Removes every real zero/pole pair that agrees to within `rel_tol`
    /// relative. Functions without such a pair come back unchanged.
    pub fn cancel_pole_zero(&self, rel_tol: f64) -> Self {
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        let mut changed = false;
        'outer: loop {
            let poles = den.real_roots();
            for z in num.real_roots() {
                for &p in &poles {
                    if (z - p).abs() <= rel_tol * z.abs().max(p.abs()) {
                        num = num.div_linear(z).0;
                        den = den.div_linear(p).0;
                        changed = true;
                        continue 'outer;
                    }
                }
            }
            break;
        }
        if !changed {
            return self.clone();
        }
        Self::with_sign(num, den, self.sign).expect("deflated denominator is nonzero")
    }
}

/// Evaluates `p(s)`; see [`Polynomial::eval`].
pub fn poly_eval(p: &Polynomial, s: Complex64) -> Complex64 {
    p.eval(s)
}

/// Evaluates `H(jω)`; see [`RationalFunction::eval_jw`].
pub fn ratfunc_eval(h: &RationalFunction, omega: f64) -> Result<Complex64> {
    h.eval_jw(omega)
}

/// Real root of a cubic with positive coefficients, plus the deflated
/// quadratic (ascending, same leading coefficient as `p`).
///
/// The root is bracketed on `[-B, 0)` with `B` the Cauchy bound, bisected to
/// 1e-12 relative and polished with one Newton step.
pub fn real_roots_cubic(p: &Polynomial) -> Result<(f64, Polynomial)> {
    if p.degree() != 3 {
        return Err(Error::WrongDegree {
            expected: 3,
            actual: p.degree(),
        });
    }
    if p.coeffs().iter().any(|&c| c.is_nan() || c <= 0.0) {
        return Err(Error::NonPositiveCoefficients);
    }
    let lo = -p.cauchy_bound();
    let root = bisect(|x| Ok(p.eval_real(x)), lo, 0.0, 1e-12, 400)?;
    let slope = p.derivative().eval_real(root);
    let polished = if slope != 0.0 {
        root - p.eval_real(root) / slope
    } else {
        root
    };
    let root = if polished.is_finite() && polished < 0.0 && polished >= lo {
        polished
    } else {
        root
    };
    Ok((root, deflate_cubic(p, root)))
}

/// Quotient of `p / (s − root)`. The outer coefficients come from the two
/// ends of `p`; the middle one from whichever end loses fewer digits.
fn deflate_cubic(p: &Polynomial, root: f64) -> Polynomial {
    let c = p.coeffs();
    let q2 = c[3];
    let q0 = -c[0] / root;
    let forward = c[2] + root * q2;
    let backward = (q0 - c[1]) / root;
    let loss = |sum: f64, result: f64| sum / result.abs();
    let q1 = if loss(c[2].abs() + (root * q2).abs(), forward) <= loss(q0.abs() + c[1].abs(), q0 - c[1]) {
        forward
    } else {
        backward
    };
    Polynomial::new([q0, q1, q2])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_polynomial() {
        assert_eq!(poly_eval(&Polynomial::new([5.0]), c(0.0, 10.0)), c(5.0, 0.0));
    }

    #[test]
    fn identity_monomial() {
        assert_eq!(poly_eval(&Polynomial::new([0.0, 1.0]), c(0.0, 1.0)), c(0.0, 1.0));
    }

    #[test]
    fn horner_matches_term_sum() {
        let p = Polynomial::new([1.0, 2.0, 3.0]);
        let s = c(1.0, 1.0);
        let naive: Complex64 = p
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, &a)| s.powu(k as u32) * a)
            .sum();
        let got = p.eval(s);
        assert!((got - naive).norm() <= 1e-14 * naive.norm());
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let p = Polynomial::new([1.0, 0.0, 0.0]);
        assert_eq!(p.degree(), 0);
        assert!(Polynomial::new([0.0]).is_zero());
    }

    #[test]
    fn dc_gain_and_zero_at_origin() {
        let lp = RationalFunction::new(Polynomial::one(), Polynomial::linear(1.0, 1.0)).unwrap();
        assert_eq!(ratfunc_eval(&lp, 0.0).unwrap(), c(1.0, 0.0));
        let hp = RationalFunction::new(Polynomial::linear(0.0, 1.0), Polynomial::linear(1.0, 1.0))
            .unwrap();
        assert_eq!(ratfunc_eval(&hp, 0.0).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn pole_on_axis_is_an_error() {
        let h = RationalFunction::new(Polynomial::one(), Polynomial::new([1.0, 0.0, 1.0])).unwrap();
        assert!(matches!(h.eval_jw(1.0), Err(Error::PoleOnAxis { .. })));
        let integrator = RationalFunction::new(Polynomial::one(), Polynomial::linear(0.0, 1.0)).unwrap();
        assert!(integrator.eval_jw(0.0).is_err());
    }

    #[test]
    fn normalization_moves_sign_and_unit_constant() {
        let h = RationalFunction::new(Polynomial::new([0.0, -2.0]), Polynomial::new([4.0, 2.0]))
            .unwrap();
        assert_eq!(h.sign(), Sign::Negative);
        assert_eq!(h.num().coeffs(), &[0.0, 0.5]);
        assert_eq!(h.den().coeffs(), &[1.0, 0.5]);
        assert!(RationalFunction::new(Polynomial::one(), Polynomial::zero()).is_err());
    }

    #[test]
    fn cubic_constructed_factors() {
        let (r, q) = real_roots_cubic(&Polynomial::new([1.0, 2.0, 2.0, 1.0])).unwrap();
        assert!((r + 1.0).abs() < 1e-12);
        for (a, b) in q.coeffs().iter().zip([1.0, 1.0, 1.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn cubic_repeated_root() {
        let (r, q) = real_roots_cubic(&Polynomial::new([8.0, 12.0, 6.0, 1.0])).unwrap();
        assert!((r + 2.0).abs() < 1e-5, "root {r}");
        for (a, b) in q.coeffs().iter().zip([4.0, 4.0, 1.0]) {
            assert!((a - b).abs() < 1e-4, "{a} vs {b}");
        }
    }

    #[test]
    fn cubic_preconditions() {
        assert!(matches!(
            real_roots_cubic(&Polynomial::new([1.0, 1.0, 1.0])),
            Err(Error::WrongDegree { .. })
        ));
        assert!(matches!(
            real_roots_cubic(&Polynomial::new([1.0, -1.0, 1.0, 1.0])),
            Err(Error::NonPositiveCoefficients)
        ));
    }

    #[test]
    fn factors_of_unit_cubic() {
        let h = RationalFunction::new(Polynomial::linear(0.0, 1.0), Polynomial::new([1.0, 2.0, 2.0, 1.0]))
            .unwrap();
        let f = h.bandpass_factors().unwrap();
        assert!((f.a - 1.0).abs() < 1e-12);
        assert!((f.omega_n - 1.0).abs() < 1e-12);
        assert!((f.q - 1.0).abs() < 1e-12);
    }

    #[test]
    fn real_quadratic_rejected() {
        // (s+1)(s+2)(s+3)
        let h = RationalFunction::new(Polynomial::one(), Polynomial::new([6.0, 11.0, 6.0, 1.0])).unwrap();
        assert_eq!(h.bandpass_factors(), Err(Error::RealQuadratic));
    }

    #[test]
    fn exact_cancellation() {
        let zero3 = Polynomial::linear(3.0, 1.0);
        let num = &zero3 * &Polynomial::linear(0.0, 1.0);
        let den = &zero3 * &Polynomial::new([4.0, 1.0, 1.0]);
        let h = RationalFunction::new(num, den).unwrap().cancel_pole_zero(1e-9);
        let want = RationalFunction::new(Polynomial::linear(0.0, 1.0), Polynomial::new([4.0, 1.0, 1.0]))
            .unwrap();
        assert_eq!(h.num().degree(), 1);
        assert_eq!(h.den().degree(), 2);
        for (a, b) in h.num().coeffs().iter().zip(want.num().coeffs()) {
            assert!((a - b).abs() < 1e-12);
        }
        for (a, b) in h.den().coeffs().iter().zip(want.den().coeffs()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn no_cancellation_when_apart() {
        let h = RationalFunction::new(
            &Polynomial::linear(3.0, 1.0) * &Polynomial::linear(0.0, 1.0),
            &Polynomial::linear(3.1, 1.0) * &Polynomial::new([4.0, 1.0, 1.0]),
        )
        .unwrap();
        assert_eq!(h.cancel_pole_zero(1e-9), h);
    }

    #[test]
    fn real_roots_of_quartic() {
        // (s-1)(s+2)(s^2+1)
        let p = &(&Polynomial::linear(-1.0, 1.0) * &Polynomial::linear(2.0, 1.0))
            * &Polynomial::new([1.0, 0.0, 1.0]);
        let r = p.real_roots();
        assert_eq!(r.len(), 2);
        assert!((r[0] + 2.0).abs() < 1e-12 && (r[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn complex_roots_of_scaled_cubic() {
        // (s + 1e4)(s^2 + 1e3 s + 1e8), SI-like magnitudes
        let p = &Polynomial::linear(1e4, 1.0) * &Polynomial::new([1e8, 1e3, 1.0]);
        let roots = p.roots();
        assert_eq!(roots.len(), 3);
        let real: Vec<_> = roots.iter().filter(|z| z.im.abs() < 1e-6).collect();
        assert_eq!(real.len(), 1);
        assert!((real[0].re + 1e4).abs() < 1e-6);
        for z in roots.iter().filter(|z| z.im.abs() >= 1e-6) {
            assert!((z.norm() - 1e4).abs() < 1e-6);
        }
    }

    #[test]
    fn div_exact_recovers_factor() {
        let a = Polynomial::new([1.0, 3.0, 2.0]);
        let b = Polynomial::new([5.0, 0.5]);
        let q = (&a * &b).div_exact(&b);
        for (x, y) in q.coeffs().iter().zip(a.coeffs()) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}
