//! The ten-channel bank: a lowpass end channel, eight calibrated bandpass
//! channels, a highpass end channel, and the mixer that sums them.

use std::collections::BTreeSet;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::calibrate::{self, calibrate_all, default_specs, Attenuation, ChannelSpec};
use crate::mna::{self, Netlist};
use crate::ratfunc::{Polynomial, RationalFunction};
use crate::{Error, Result};

pub const CHANNEL_COUNT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum FilterKind {
    Lowpass,
    Highpass,
}

/// Parts of the single-opamp third-order section, in signal order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SallenKeyComponents {
    pub r: [f64; 3],
    pub c: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SallenKeyConfig {
    pub kind: FilterKind,
    pub cutoff_hz: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<SallenKeyComponents>,
}

impl SallenKeyConfig {
    pub fn butterworth(kind: FilterKind, cutoff_hz: f64) -> Self {
        Self {
            kind,
            cutoff_hz,
            components: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cutoff_hz > 0.0 && self.cutoff_hz.is_finite()) {
            return Err(Error::InvalidParameter(format!("cutoff {} Hz", self.cutoff_hz)));
        }
        if let Some(k) = &self.components {
            if !k.r.iter().chain(&k.c).all(|v| *v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "Sallen-Key components must be positive: {k:?}"
                )));
            }
        }
        Ok(())
    }
}

/// Unity-gain third-order section: three series elements into a follower,
/// the middle shunt returning to the output and the outer two to ground.
/// The highpass is the RC dual of the lowpass.
pub fn sallen_key_netlist(kind: FilterKind, parts: &SallenKeyComponents) -> Result<Netlist> {
    let [r1, r2, r3] = parts.r;
    let [c1, c2, c3] = parts.c;
    let mut b = Netlist::builder();
    match kind {
        FilterKind::Lowpass => b
            .resistor("R1", "in", "n1", r1)
            .resistor("R2", "n1", "n2", r2)
            .resistor("R3", "n2", "n3", r3)
            .capacitor("C1", "n1", "0", c1)
            .capacitor("C2", "n2", "out", c2)
            .capacitor("C3", "n3", "0", c3),
        FilterKind::Highpass => b
            .capacitor("C1", "in", "n1", c1)
            .capacitor("C2", "n1", "n2", c2)
            .capacitor("C3", "n2", "n3", c3)
            .resistor("R1", "n1", "0", r1)
            .resistor("R2", "n2", "out", r2)
            .resistor("R3", "n3", "0", r3),
    };
    b.opamp("O1", "n3", "out", "out").input("in").output("out").build()
}

/// Explicit parts go through the nodal solver; otherwise a third-order
/// Butterworth response at `cutoff_hz`.
pub fn sallen_key_tf(cfg: &SallenKeyConfig) -> Result<RationalFunction> {
    cfg.validate()?;
    if let Some(parts) = &cfg.components {
        return mna::transfer_function(&sallen_key_netlist(cfg.kind, parts)?);
    }
    let t = 1.0 / (TAU * cfg.cutoff_hz);
    let den = Polynomial::new([1.0, 2.0 * t, 2.0 * t * t, t * t * t]);
    let num = match cfg.kind {
        FilterKind::Lowpass => Polynomial::one(),
        FilterKind::Highpass => Polynomial::new([0.0, 0.0, 0.0, t * t * t]),
    };
    RationalFunction::new(num, den)
}

fn default_end_mixer() -> f64 {
    33e3
}

/// One of the ten channels, with everything needed to compute its
/// full-chain response.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Channel {
    /// Sallen-Key end channel fed straight from the input buffer.
    End {
        filter: SallenKeyConfig,
        #[serde(default = "default_end_mixer")]
        mixer_r: f64,
    },
    /// Twin-T bandpass channel at fixed trimmer settings.
    Band { spec: ChannelSpec, r2: f64, r3: f64 },
}

impl Channel {
    pub fn end(filter: SallenKeyConfig) -> Self {
        Channel::End {
            filter,
            mixer_r: default_end_mixer(),
        }
    }

    /// Frequency used to check channel ordering.
    pub fn center_hz(&self) -> f64 {
        match self {
            Channel::End { filter, .. } => filter.cutoff_hz,
            Channel::Band { spec, .. } => spec.band_hz,
        }
    }

    /// Full-chain response, without inversion or slider.
    pub fn response(&self) -> Result<RationalFunction> {
        match self {
            Channel::End { filter, mixer_r } => {
                let direct = ChannelSpec::new(filter.cutoff_hz, 1.0, 1.0, 1.0, Attenuation::Direct, *mixer_r);
                Ok(sallen_key_tf(filter)?.scale(calibrate::chain_gain_constant(&direct)))
            }
            Channel::Band { spec, r2, r3 } => calibrate::chain_response(spec, *r2, *r3),
        }
    }
}

pub fn default_inversions() -> BTreeSet<usize> {
    [1, 3, 5, 7, 9].into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BankConfig {
    pub channels: Vec<Channel>,
    /// Indices of the channels whose input is sign-flipped.
    pub inverted: BTreeSet<usize>,
    pub slider_gains: Vec<f64>,
}

/// Bank description as read from JSON. Every field is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct BankFile {
    lowpass: Option<SallenKeyConfig>,
    highpass: Option<SallenKeyConfig>,
    bands: Option<Vec<BandEntry>>,
    inverted: Option<BTreeSet<usize>>,
    slider_gains: Option<Vec<f64>>,
}

/// A band with optional trimmer settings; missing settings are calibrated.
#[derive(Debug, Clone, Deserialize)]
struct BandEntry {
    #[serde(flatten)]
    spec: ChannelSpec,
    r2: Option<f64>,
    r3: Option<f64>,
}

impl BankConfig {
    /// Bank from explicit band trimmer settings, with the default end
    /// channels, inversions and sliders.
    pub fn from_bands(bands: impl IntoIterator<Item = (ChannelSpec, f64, f64)>) -> Result<Self> {
        let mut channels = vec![Channel::end(SallenKeyConfig::butterworth(FilterKind::Lowpass, 100.0))];
        channels.extend(bands.into_iter().map(|(spec, r2, r3)| Channel::Band { spec, r2, r3 }));
        channels.push(Channel::end(SallenKeyConfig::butterworth(FilterKind::Highpass, 7000.0)));
        let bank = Self {
            channels,
            inverted: default_inversions(),
            slider_gains: vec![1.0; CHANNEL_COUNT],
        };
        bank.validate()?;
        Ok(bank)
    }

    /// Default bands calibrated, Butterworth end channels at 100 Hz and
    /// 7 kHz, default inversions, all sliders at full volume.
    pub fn calibrated_default() -> Result<Self> {
        Self::calibrated(default_specs())
    }

    fn calibrated(specs: Vec<ChannelSpec>) -> Result<Self> {
        let results = calibrate_all(&specs);
        let mut sorted = specs;
        sorted.sort_by(|a, b| a.band_hz.total_cmp(&b.band_hz));
        let bands = sorted
            .into_iter()
            .zip(results)
            .map(|(s, r)| r.map(|r| (s, r.r2, r.r3)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_bands(bands)
    }

    /// Reads a JSON description; omitted fields take the defaults.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: BankFile = serde_json::from_str(text).map_err(|e| Error::InvalidBank(e.to_string()))?;
        let entries = match file.bands {
            Some(b) => b,
            None => default_specs()
                .into_iter()
                .map(|spec| BandEntry { spec, r2: None, r3: None })
                .collect(),
        };
        let mut to_calibrate: Vec<_> = entries
            .iter()
            .filter(|e| e.r2.is_none() || e.r3.is_none())
            .map(|e| e.spec)
            .collect();
        let solved = calibrate_all(&to_calibrate);
        to_calibrate.sort_by(|a, b| a.band_hz.total_cmp(&b.band_hz));
        let mut bands = Vec::with_capacity(entries.len());
        for e in &entries {
            let (r2, r3) = match (e.r2, e.r3) {
                (Some(r2), Some(r3)) => (r2, r3),
                _ => {
                    let k = to_calibrate
                        .iter()
                        .position(|s| s == &e.spec)
                        .expect("every incomplete entry was calibrated");
                    let r = solved[k].clone()?;
                    (e.r2.unwrap_or(r.r2), e.r3.unwrap_or(r.r3))
                }
            };
            bands.push((e.spec, r2, r3));
        }
        let mut bank = Self::from_bands(bands)?;
        if let Some(lp) = file.lowpass {
            bank.channels[0] = Channel::end(lp);
        }
        if let Some(hp) = file.highpass {
            bank.channels[CHANNEL_COUNT - 1] = Channel::end(hp);
        }
        if let Some(inv) = file.inverted {
            bank.inverted = inv;
        }
        if let Some(g) = file.slider_gains {
            bank.slider_gains = g;
        }
        bank.validate()?;
        Ok(bank)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidBank(m));
        if self.channels.len() != CHANNEL_COUNT {
            return bad(format!("expected {CHANNEL_COUNT} channels, got {}", self.channels.len()));
        }
        if !matches!(self.channels[0], Channel::End { filter, .. } if filter.kind == FilterKind::Lowpass)
            || !matches!(self.channels[CHANNEL_COUNT - 1], Channel::End { filter, .. } if filter.kind == FilterKind::Highpass)
        {
            return bad("first channel must be the lowpass and last the highpass".into());
        }
        if self.channels[1..CHANNEL_COUNT - 1].iter().any(|c| !matches!(c, Channel::Band { .. })) {
            return bad("channels 1 to 8 must be bandpass channels".into());
        }
        if !self.channels.windows(2).all(|w| w[0].center_hz() < w[1].center_hz()) {
            return bad("channels must be in increasing frequency order".into());
        }
        if let Some(i) = self.inverted.iter().find(|&&i| i >= CHANNEL_COUNT) {
            return bad(format!("inverted channel index {i} out of range"));
        }
        if self.slider_gains.len() != CHANNEL_COUNT
            || !self.slider_gains.iter().all(|g| (0.0..=1.0).contains(g))
        {
            return bad(format!("need {CHANNEL_COUNT} slider gains in [0, 1]"));
        }
        Ok(())
    }

    /// Inversion sign times slider gain for one channel.
    fn weight(&self, index: usize) -> f64 {
        let g = self.slider_gains[index];
        if self.inverted.contains(&index) {
            -g
        } else {
            g
        }
    }

    /// Channel response including inversion and slider.
    pub fn channel_tf(&self, index: usize) -> Result<RationalFunction> {
        let ch = self.channels.get(index).ok_or(Error::ChannelIndex(index))?;
        Ok(ch.response()?.scale(self.weight(index)))
    }

    fn responses(&self) -> Result<Vec<(RationalFunction, f64)>> {
        (0..self.channels.len())
            .map(|i| Ok((self.channels[i].response()?, self.weight(i))))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub f_hz: f64,
    pub magnitude_db: f64,
    pub phase_deg: f64,
    pub re: f64,
    pub im: f64,
}

impl SweepRow {
    pub fn new(f_hz: f64, z: Complex64) -> Self {
        Self {
            f_hz,
            magnitude_db: 20.0 * z.norm().log10(),
            phase_deg: z.arg().to_degrees(),
            re: z.re,
            im: z.im,
        }
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

fn check_freqs(freqs: &[f64]) -> Result<()> {
    let positive = freqs.iter().all(|f| *f > 0.0 && f.is_finite());
    if positive && freqs.windows(2).all(|w| w[0] < w[1]) {
        Ok(())
    } else {
        Err(Error::FrequencyOrder)
    }
}

/// Response of any transfer function at the given frequencies.
pub fn sweep(h: &RationalFunction, freqs: &[f64]) -> Result<SweepResult> {
    check_freqs(freqs)?;
    let rows = freqs
        .par_iter()
        .map(|&f| Ok(SweepRow::new(f, h.eval_hz(f)?)))
        .collect::<Result<_>>()?;
    Ok(SweepResult { rows })
}

fn weighted(h: &RationalFunction, w: f64, f: f64) -> Result<Complex64> {
    Ok(h.eval_hz(f)? * w)
}

/// One channel of the bank, with chain gain, inversion and slider.
pub fn channel_sweep(bank: &BankConfig, index: usize, freqs: &[f64]) -> Result<SweepResult> {
    check_freqs(freqs)?;
    let ch = bank.channels.get(index).ok_or(Error::ChannelIndex(index))?;
    let h = ch.response()?;
    let w = bank.weight(index);
    let rows = freqs
        .par_iter()
        .map(|&f| Ok(SweepRow::new(f, weighted(&h, w, f)?)))
        .collect::<Result<_>>()?;
    Ok(SweepResult { rows })
}

/// Mixer output: the complex sum of all channels, added in channel order.
pub fn summed_sweep(bank: &BankConfig, freqs: &[f64]) -> Result<SweepResult> {
    check_freqs(freqs)?;
    let parts = bank.responses()?;
    let rows = freqs
        .par_iter()
        .map(|&f| {
            let mut z = Complex64::new(0.0, 0.0);
            for (h, w) in &parts {
                z += weighted(h, *w, f)?;
            }
            Ok(SweepRow::new(f, z))
        })
        .collect::<Result<_>>()?;
    Ok(SweepResult { rows })
}

/// Max minus min of the magnitude over rows with `f_lo ≤ f ≤ f_hi`.
pub fn ripple_db(sweep: &SweepResult, f_lo: f64, f_hi: f64) -> Result<f64> {
    let band: Vec<f64> = sweep
        .rows
        .iter()
        .filter(|r| r.f_hz >= f_lo && r.f_hz <= f_hi)
        .map(|r| r.magnitude_db)
        .collect();
    if band.len() < 2 {
        return Err(Error::EmptyBand { f_lo, f_hi });
    }
    let max = band.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = band.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(max - min)
}

/// `n` log-spaced points from `f_lo` to `f_hi`, both included exactly.
pub fn log_space(f_lo: f64, f_hi: f64, n: usize) -> Vec<f64> {
    spaced(f_lo.ln(), f_hi.ln(), n, f_lo, f_hi, f64::exp)
}

/// `n` evenly spaced points from `f_lo` to `f_hi`, both included exactly.
pub fn linear_space(f_lo: f64, f_hi: f64, n: usize) -> Vec<f64> {
    spaced(f_lo, f_hi, n, f_lo, f_hi, |x| x)
}

fn spaced(a: f64, b: f64, n: usize, first: f64, last: f64, map: fn(f64) -> f64) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![first],
        _ => (0..n)
            .map(|i| match i {
                0 => first,
                i if i == n - 1 => last,
                i => map(a + (b - a) * i as f64 / (n - 1) as f64),
            })
            .collect(),
    }
}
