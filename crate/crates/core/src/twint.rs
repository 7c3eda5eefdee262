//! Closed-form model of the inverting bandpass Twin-T.
//!
//! Topology: `R1` and `C1` lead from the input to the two tee junctions
//! `x` and `y`; `C2` (from `x`) and `R2` (from `y`) return to the opamp's
//! virtual ground; `C3` (from `x`) and `R3` (from `y`) close the loop to
//! the opamp output. The result is
//!
//! ```text
//!            b2·s² + b1·s
//! H(s) = − ───────────────────────────
//!          a3·s³ + a2·s² + a1·s + 1
//! ```

use std::f64::consts::TAU;

use crate::mna::Netlist;
use crate::numeric::golden_max;
use crate::ratfunc::{Polynomial, RationalFunction, Sign};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwinTParams {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

/// Second-order form left after the special-case cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalBandpass {
    /// Magnitude at the peak.
    pub gain_a: f64,
    pub omega_n: f64,
    pub q: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakPoint {
    pub f_peak: f64,
    pub gain_db: f64,
    pub gain_linear: f64,
}

impl TwinTParams {
    pub fn new(r1: f64, r2: f64, r3: f64, c1: f64, c2: f64, c3: f64) -> Result<Self> {
        let p = Self { r1, r2, r3, c1, c2, c3 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.r1, self.r2, self.r3, self.c1, self.c2, self.c3];
        if all.iter().all(|v| *v > 0.0 && v.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "component values must be positive: {self:?}"
            )))
        }
    }

    /// Numerator `[0, b1, b2]` and denominator `[1, a1, a2, a3]`, ascending.
    pub fn coefficient_lists(&self) -> ([f64; 3], [f64; 4]) {
        let Self { r1, r2, r3, c1, c2, c3 } = *self;
        let b2 = r2 * r3 * c1 * c2 + r1 * r3 * c1 * (c2 + c3);
        let b1 = (r2 + r3) * c2 + r3 * c1;
        let a3 = r1 * r2 * r3 * c1 * c2 * c3;
        let a2 = r1 * (r2 + r3) * c2 * c3;
        let a1 = r1 * (c2 + c3);
        ([0.0, b1, b2], [1.0, a1, a2, a3])
    }

    /// The full third-order transfer function.
    pub fn transfer_function(&self) -> RationalFunction {
        let (num, den) = self.coefficient_lists();
        RationalFunction::with_sign(Polynomial::new(num), Polynomial::new(den), Sign::Negative)
            .expect("denominator constant term is 1")
    }

    /// Whether `R1 = R3` and `C1 = C3` to within 1e-9 relative.
    pub fn is_special_case(&self) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs());
        close(self.r1, self.r3) && close(self.c1, self.c3)
    }

    /// `A`, `ωn` and `Q` of the reduced second-order form. Only defined when
    /// `R1 = R3` and `C1 = C3`.
    pub fn canonical(&self) -> Result<CanonicalBandpass> {
        if !self.is_special_case() {
            return Err(Error::SpecialCaseViolation);
        }
        let Self { r1, r2, c1, c2, .. } = *self;
        Ok(CanonicalBandpass {
            gain_a: r2 / r1 + 1.0 + c1 / c2,
            omega_n: 1.0 / (r1 * r2 * c1 * c2).sqrt(),
            q: (r2 * c1 / (r1 * c2)).sqrt(),
        })
    }

    /// Circuit description for the nodal solver.
    pub fn netlist(&self) -> Netlist {
        Netlist::builder()
            .resistor("R1", "in", "x", self.r1)
            .capacitor("C1", "in", "y", self.c1)
            .capacitor("C2", "x", "vg", self.c2)
            .resistor("R2", "y", "vg", self.r2)
            .capacitor("C3", "x", "out", self.c3)
            .resistor("R3", "y", "out", self.r3)
            .opamp("O1", "0", "vg", "out")
            .input("in")
            .output("out")
            .build()
            .expect("fixed topology is valid")
    }
}

/// Closed-form coefficients; see [`TwinTParams::transfer_function`].
pub fn coefficients(p: &TwinTParams) -> RationalFunction {
    p.transfer_function()
}

/// See [`TwinTParams::canonical`].
pub fn canonical_special_case(p: &TwinTParams) -> Result<CanonicalBandpass> {
    p.canonical()
}

/// `R2` that puts `ωn` on `f_c` when `R3 = R1` and `C3 = C1`.
pub fn initial_r2(f_c: f64, r1: f64, c1: f64, c2: f64) -> f64 {
    let w = TAU * f_c;
    1.0 / (w * w * r1 * c1 * c2)
}

const SCAN_POINTS: usize = 512;

/// Maximum of `|H(j2πf)|` on `[f_lo, f_hi]`, to 1e-6 relative in frequency.
pub fn find_peak(h: &RationalFunction, f_lo: f64, f_hi: f64) -> Result<PeakPoint> {
    find_peak_with_tol(h, f_lo, f_hi, 1e-6)
}

/// Log-spaced coarse scan followed by golden-section refinement in
/// `log f` around the best scan point.
pub fn find_peak_with_tol(h: &RationalFunction, f_lo: f64, f_hi: f64, rel_tol: f64) -> Result<PeakPoint> {
    if !(f_lo > 0.0 && f_hi > f_lo && f_hi.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "peak search window [{f_lo}, {f_hi}] Hz"
        )));
    }
    let (l0, l1) = (f_lo.ln(), f_hi.ln());
    let step = (l1 - l0) / (SCAN_POINTS - 1) as f64;
    let log_f = |i: usize| if i == SCAN_POINTS - 1 { l1 } else { l0 + step * i as f64 };
    let mut best = (0, f64::NEG_INFINITY);
    for i in 0..SCAN_POINTS {
        let m = h.eval_hz(log_f(i).exp())?.norm();
        if m > best.1 {
            best = (i, m);
        }
    }
    if best.0 == 0 || best.0 == SCAN_POINTS - 1 {
        return Err(Error::BoundaryPeak { f_lo, f_hi });
    }
    let magnitude = |lf: f64| h.eval_hz(lf.exp()).map(|z| z.norm()).unwrap_or(0.0);
    // Relative frequency tolerance is an absolute tolerance in log f.
    let (a, b) = (log_f(best.0 - 1), log_f(best.0 + 1));
    let (lf, _) = golden_max(magnitude, a, b, rel_tol);
    let f_peak = lf.exp();
    let gain_linear = h.eval_hz(f_peak)?.norm();
    Ok(PeakPoint {
        f_peak,
        gain_db: 20.0 * gain_linear.log10(),
        gain_linear,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn band_200(r2: f64) -> TwinTParams {
        TwinTParams::new(15e3, r2, 15e3, 47e-9, 10e-9, 47e-9).unwrap()
    }

    #[test]
    fn unit_substitution() {
        let p = TwinTParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        let (num, den) = p.coefficient_lists();
        assert_eq!(num, [0.0, 3.0, 3.0]);
        assert_eq!(den, [1.0, 2.0, 2.0, 1.0]);
        let h = coefficients(&p);
        assert_eq!(h.sign(), Sign::Negative);
    }

    #[test]
    fn rejects_non_positive_parts() {
        assert!(TwinTParams::new(1.0, 0.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(TwinTParams::new(1.0, 1.0, 1.0, 1.0, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn symmetric_special_case() {
        let p = TwinTParams::new(2e3, 2e3, 2e3, 1e-8, 1e-8, 1e-8).unwrap();
        let c = canonical_special_case(&p).unwrap();
        assert!((c.q - 1.0).abs() < 1e-15);
        assert!((c.gain_a - 3.0).abs() < 1e-15);
    }

    #[test]
    fn special_case_violation() {
        let p = TwinTParams::new(15e3, 90e3, 14e3, 47e-9, 10e-9, 47e-9).unwrap();
        assert_eq!(canonical_special_case(&p), Err(Error::SpecialCaseViolation));
    }

    #[test]
    fn band_200_natural_frequency() {
        // 1/(2π·sqrt(15e3·89.8e3·47e-9·10e-9)) = 200.0265 Hz
        let c = canonical_special_case(&band_200(89.8e3)).unwrap();
        let f = c.omega_n / TAU;
        assert!((f - 200.0).abs() < 0.1, "{f}");
    }

    #[test]
    fn initial_r2_table_values() {
        let r = initial_r2(200.0, 15e3, 47e-9, 10e-9);
        assert!((r / 89.8e3 - 1.0).abs() < 1e-3, "{r}");
        let r = initial_r2(2000.0, 15e3, 4.7e-9, 470e-12);
        assert!((r / 191e3 - 1.0).abs() < 5e-3, "{r}");
        let r = initial_r2(700.0, 15e3, 10e-9, 1.5e-9);
        assert!((r / 230e3 - 1.0).abs() < 5e-3, "{r}");
    }

    #[test]
    fn initial_r2_hits_target() {
        for f_c in [57.0, 200.0, 3200.0, 12e3] {
            let r2 = initial_r2(f_c, 15e3, 10e-9, 1e-9);
            let p = TwinTParams::new(15e3, r2, 15e3, 10e-9, 1e-9, 10e-9).unwrap();
            let f = p.canonical().unwrap().omega_n / TAU;
            assert!((f / f_c - 1.0).abs() < 1e-9);
        }
    }

    fn biquad(f0: f64, q: f64, peak: f64) -> RationalFunction {
        let w = TAU * f0;
        RationalFunction::new(
            Polynomial::new([0.0, peak * w / q]),
            Polynomial::new([w * w, w / q, 1.0]),
        )
        .unwrap()
    }

    #[test]
    fn peak_of_classic_biquad() {
        let pk = find_peak(&biquad(1000.0, 5.0, 10.0), 100.0, 10e3).unwrap();
        assert!((pk.f_peak - 1000.0).abs() < 0.01, "{}", pk.f_peak);
        assert!((pk.gain_db - 20.0).abs() < 1e-3);
        assert!((pk.gain_db - 20.0 * pk.gain_linear.log10()).abs() < 1e-12);
    }

    #[test]
    fn peak_of_special_case() {
        let p = band_200(89.8e3);
        let c = p.canonical().unwrap();
        let pk = find_peak(&p.transfer_function(), 20.0, 2000.0).unwrap();
        assert!((pk.f_peak - c.omega_n / TAU).abs() < 0.01);
    }

    #[test]
    fn monotone_response_has_boundary_peak() {
        let h = RationalFunction::new(Polynomial::one(), Polynomial::linear(1.0, 1.0)).unwrap();
        assert!(matches!(find_peak(&h, 0.1, 10.0), Err(Error::BoundaryPeak { .. })));
    }

    #[test]
    fn netlist_shape() {
        let n = band_200(89.8e3).netlist();
        assert_eq!(n.elements().len(), 7);
        assert_eq!(n.node_count(), 5);
        assert_eq!(n.opamp_count(), 1);
    }
}
