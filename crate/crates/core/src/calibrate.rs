//! Two-trimmer calibration of the eight bandpass channels.
//!
//! Each channel's signal path is the input buffer (39k/33k), a resistive
//! ladder tap, the Twin-T section, and the output mixer (56k over the
//! channel's mixer resistor). Calibration alternates between the gain
//! trimmer `R3` and the frequency trimmer `R2` until the full-chain peak sits
//! on the band frequency at the target gain.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::numeric::bisect;
use crate::ratfunc::RationalFunction;
use crate::twint::{find_peak, initial_r2, PeakPoint, TwinTParams};
use crate::{Error, Result};

/// Fixed input-side resistor of every Twin-T section.
pub const R1: f64 = 15e3;
/// Lowest value the gain trimmer is allowed to reach.
pub const R3_MIN: f64 = 100.0;
/// Starting point of the gain trimmer.
pub const R3_START: f64 = 15e3;

const INPUT_GAIN: f64 = 39e3 / 33e3;
const MIXER_FEEDBACK: f64 = 56e3;
const LADDER_TOTAL: f64 = 3300.0 + 150.0 + 330.0;

/// Tap on the input ladder feeding a channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Attenuation {
    /// The 330 Ω tap.
    #[serde(rename = "LOW_330")]
    Low330,
    /// The 150 Ω + 330 Ω tap.
    #[serde(rename = "HIGH_480")]
    High480,
    /// No ladder; the signal enters the filter directly.
    #[serde(rename = "DIRECT")]
    Direct,
}

impl Attenuation {
    pub fn factor(self) -> f64 {
        match self {
            Attenuation::Low330 => 330.0 / LADDER_TOTAL,
            Attenuation::High480 => (150.0 + 330.0) / LADDER_TOTAL,
            Attenuation::Direct => 1.0,
        }
    }
}

fn default_r2_pot_max() -> f64 {
    100e3
}

fn default_r3_pot_max() -> f64 {
    20e3
}

fn default_pot_tolerance() -> f64 {
    0.1
}

/// Part values and signal routing of one bandpass channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub band_hz: f64,
    /// `C1 = C3`.
    pub c1_c3: f64,
    pub c2: f64,
    /// Fixed resistor in series with the frequency trimmer.
    pub r2_fixed: f64,
    #[serde(default = "default_r2_pot_max")]
    pub r2_pot_max: f64,
    #[serde(default = "default_r3_pot_max")]
    pub r3_pot_max: f64,
    pub attenuation: Attenuation,
    pub mixer_r: f64,
    #[serde(default)]
    pub inverted: bool,
    /// Fractional end-to-end tolerance of the trimmers. The search range of
    /// each trimmer extends this far past its nominal maximum.
    #[serde(default = "default_pot_tolerance")]
    pub pot_tolerance: f64,
}

impl ChannelSpec {
    pub fn new(
        band_hz: f64,
        c1_c3: f64,
        c2: f64,
        r2_fixed: f64,
        attenuation: Attenuation,
        mixer_r: f64,
    ) -> Self {
        Self {
            band_hz,
            c1_c3,
            c2,
            r2_fixed,
            r2_pot_max: default_r2_pot_max(),
            r3_pot_max: default_r3_pot_max(),
            attenuation,
            mixer_r,
            inverted: false,
            pot_tolerance: default_pot_tolerance(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [self.band_hz, self.c1_c3, self.c2, self.r2_fixed, self.mixer_r, self.r3_pot_max];
        let non_negative = [self.r2_pot_max, self.pot_tolerance];
        if positive.iter().all(|v| *v > 0.0 && v.is_finite())
            && non_negative.iter().all(|v| *v >= 0.0 && v.is_finite())
            && self.r3_pot_max > R3_MIN
        {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("channel spec {self:?}")))
        }
    }

    /// Nominal `R2` range: the fixed resistor plus the full trimmer.
    pub fn nominal_r2_range(&self) -> (f64, f64) {
        (self.r2_fixed, self.r2_fixed + self.r2_pot_max)
    }

    pub fn nominal_r3_range(&self) -> (f64, f64) {
        (R3_MIN, self.r3_pot_max)
    }

    /// `R2` range including the trimmer tolerance.
    pub fn r2_range(&self) -> (f64, f64) {
        (self.r2_fixed, self.r2_fixed + self.r2_pot_max * (1.0 + self.pot_tolerance))
    }

    pub fn r3_range(&self) -> (f64, f64) {
        (R3_MIN, self.r3_pot_max * (1.0 + self.pot_tolerance))
    }

    pub fn twin_t(&self, r2: f64, r3: f64) -> Result<TwinTParams> {
        TwinTParams::new(R1, r2, r3, self.c1_c3, self.c2, self.c1_c3)
    }
}

/// The eight bandpass channels with their factory part values.
pub fn default_specs() -> Vec<ChannelSpec> {
    use Attenuation::{High480, Low330};
    [
        (200.0, 47e-9, 10e-9, 68e3, High480, 39e3, true),
        (350.0, 22e-9, 4.7e-9, 91e3, Low330, 33e3, false),
        (500.0, 22e-9, 2.2e-9, 91e3, Low330, 33e3, true),
        (700.0, 10e-9, 1.5e-9, 150e3, Low330, 33e3, false),
        (1000.0, 10e-9, 910e-12, 150e3, Low330, 33e3, true),
        (1400.0, 4.7e-9, 910e-12, 150e3, Low330, 33e3, false),
        (2000.0, 4.7e-9, 470e-12, 150e3, Low330, 39e3, true),
        (3200.0, 2.2e-9, 470e-12, 68e3, High480, 33e3, false),
    ]
    .into_iter()
    .map(|(band, c1, c2, r2, att, mixer, inverted)| ChannelSpec {
        inverted,
        ..ChannelSpec::new(band, c1, c2, r2, att, mixer)
    })
    .collect()
}

/// A row of the printed part-value table: band, the frequency its `R'2`
/// was designed for, and the printed `R'2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrintedR2 {
    pub band_hz: f64,
    pub design_hz: f64,
    pub r2: f64,
}

/// Printed `R'2` values. The top band's value corresponds to 3.5 kHz.
pub const PRINTED_R2: [PrintedR2; 8] = [
    PrintedR2 { band_hz: 200.0, design_hz: 200.0, r2: 89.8e3 },
    PrintedR2 { band_hz: 350.0, design_hz: 350.0, r2: 133e3 },
    PrintedR2 { band_hz: 500.0, design_hz: 500.0, r2: 140e3 },
    PrintedR2 { band_hz: 700.0, design_hz: 700.0, r2: 230e3 },
    PrintedR2 { band_hz: 1000.0, design_hz: 1000.0, r2: 186e3 },
    PrintedR2 { band_hz: 1400.0, design_hz: 1400.0, r2: 201e3 },
    PrintedR2 { band_hz: 2000.0, design_hz: 2000.0, r2: 191e3 },
    PrintedR2 { band_hz: 3200.0, design_hz: 3500.0, r2: 133e3 },
];

/// Published calibration results: band, `R2`, `R3`, `Q`.
pub const PUBLISHED_CALIBRATION: [(f64, f64, f64, f64); 8] = [
    (200.0, 93e3, 13.98e3, 4.522),
    (350.0, 136.6e3, 14.04e3, 5.395),
    (500.0, 149.5e3, 13.15e3, 5.941),
    (700.0, 242e3, 12.41e3, 5.422),
    (1000.0, 199.5e3, 12.75e3, 5.989),
    (1400.0, 209.8e3, 12.74e3, 5.222),
    (2000.0, 200.5e3, 13.4e3, 6.946),
    (3200.0, 171.2e3, 11.3e3, 3.721),
];

/// Input buffer × ladder tap × mixer gain, with the slider at full volume.
pub fn chain_gain_constant(spec: &ChannelSpec) -> f64 {
    INPUT_GAIN * spec.attenuation.factor() * (MIXER_FEEDBACK / spec.mixer_r)
}

fn check_range(what: &'static str, value: f64, (min, max): (f64, f64)) -> Result<()> {
    if value >= min && value <= max {
        Ok(())
    } else {
        Err(Error::OutOfRange { what, value, min, max })
    }
}

/// Full-chain response of a channel, without its inversion.
pub fn chain_response(spec: &ChannelSpec, r2: f64, r3: f64) -> Result<RationalFunction> {
    check_range("R2", r2, spec.r2_range())?;
    check_range("R3", r3, spec.r3_range())?;
    Ok(spec
        .twin_t(r2, r3)?
        .transfer_function()
        .scale(chain_gain_constant(spec)))
}

/// Full-chain response of a channel, including its inversion.
pub fn channel_response(spec: &ChannelSpec, r2: f64, r3: f64) -> Result<RationalFunction> {
    let h = chain_response(spec, r2, r3)?;
    Ok(if spec.inverted { h.negate() } else { h })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationOptions {
    pub tol_freq_hz: f64,
    pub tol_gain_db: f64,
    pub max_iterations: usize,
    pub target_gain_db: f64,
}

impl Default for CalibrationOptions {
    fn default() -> Self {
        Self {
            tol_freq_hz: 0.05,
            tol_gain_db: 0.001,
            max_iterations: 100,
            target_gain_db: 6.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationResult {
    pub band_hz: f64,
    pub r2: f64,
    pub r3: f64,
    pub q: f64,
    pub f_peak: f64,
    pub gain_db: f64,
    pub iterations: usize,
    /// Both trimmers ended inside their nominal (tolerance-free) ranges.
    pub within_nominal_range: bool,
}

impl CalibrationResult {
    /// Measures a channel at the given trimmer settings.
    pub fn evaluate(spec: &ChannelSpec, r2: f64, r3: f64, iterations: usize) -> Result<Self> {
        let h = chain_response(spec, r2, r3)?;
        let pk = peak(spec, &h)?;
        let within = |v: f64, (lo, hi): (f64, f64)| v >= lo && v <= hi;
        Ok(Self {
            band_hz: spec.band_hz,
            r2,
            r3,
            q: h.bandpass_factors()?.q,
            f_peak: pk.f_peak,
            gain_db: pk.gain_db,
            iterations,
            within_nominal_range: within(r2, spec.nominal_r2_range())
                && within(r3, spec.nominal_r3_range()),
        })
    }
}

fn peak(spec: &ChannelSpec, h: &RationalFunction) -> Result<PeakPoint> {
    find_peak(h, spec.band_hz / 8.0, spec.band_hz * 8.0)
}

fn measure(spec: &ChannelSpec, r2: f64, r3: f64) -> Result<PeakPoint> {
    peak(spec, &chain_response(spec, r2, r3)?)
}

const SOLVE_REL_TOL: f64 = 1e-12;
const SOLVE_MAX_ITER: usize = 200;

/// Calibrates with default tolerances, starting from the estimated `R2`
/// and `R3 = 15 kΩ`.
pub fn calibrate_channel(spec: &ChannelSpec) -> Result<CalibrationResult> {
    calibrate_channel_with(spec, &CalibrationOptions::default(), None)
}

/// Alternating solve: `R3` for the target gain, then `R2` for the band
/// frequency, until both residuals are within tolerance. `seed` replaces
/// the starting `(R2, R3)`.
pub fn calibrate_channel_with(
    spec: &ChannelSpec,
    opts: &CalibrationOptions,
    seed: Option<(f64, f64)>,
) -> Result<CalibrationResult> {
    spec.validate()?;
    let (r2_lo, r2_hi) = spec.r2_range();
    let (r3_lo, r3_hi) = spec.r3_range();
    let (mut r2, mut r3) = seed.unwrap_or_else(|| {
        (initial_r2(spec.band_hz, R1, spec.c1_c3, spec.c2), R3_START)
    });
    r2 = r2.clamp(r2_lo, r2_hi);
    r3 = r3.clamp(r3_lo, r3_hi);

    let unreachable = |target| {
        move |e| match e {
            Error::NoBracket { .. } => Error::Unreachable { band: spec.band_hz, target },
            e => e,
        }
    };
    let converged = |pk: &PeakPoint| {
        (pk.f_peak - spec.band_hz).abs() <= opts.tol_freq_hz
            && (pk.gain_db - opts.target_gain_db).abs() <= opts.tol_gain_db
    };

    for iteration in 0..=opts.max_iterations {
        if converged(&measure(spec, r2, r3)?) {
            return CalibrationResult::evaluate(spec, r2, r3, iteration);
        }
        if iteration == opts.max_iterations {
            break;
        }
        r3 = bisect(
            |x| Ok(measure(spec, r2, x)?.gain_db - opts.target_gain_db),
            r3_lo,
            r3_hi,
            SOLVE_REL_TOL,
            SOLVE_MAX_ITER,
        )
        .map_err(unreachable("gain"))?;
        r2 = bisect(
            |x| Ok(measure(spec, x, r3)?.f_peak - spec.band_hz),
            r2_lo,
            r2_hi,
            SOLVE_REL_TOL,
            SOLVE_MAX_ITER,
        )
        .map_err(unreachable("frequency"))?;
    }
    Err(Error::NotConverged {
        band: spec.band_hz,
        iterations: opts.max_iterations,
    })
}

/// Calibrates every spec in parallel. Results are ordered by band; a failed
/// channel does not stop the others.
pub fn calibrate_all(specs: &[ChannelSpec]) -> Vec<Result<CalibrationResult>> {
    calibrate_all_with(specs, &CalibrationOptions::default())
}

pub fn calibrate_all_with(specs: &[ChannelSpec], opts: &CalibrationOptions) -> Vec<Result<CalibrationResult>> {
    let mut sorted = specs.to_vec();
    sorted.sort_by(|a, b| a.band_hz.total_cmp(&b.band_hz));
    sorted
        .par_iter()
        .map(|s| calibrate_channel_with(s, opts, None))
        .collect()
}
