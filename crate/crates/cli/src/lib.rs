//! Command-line front end: transfer functions, sweeps, calibration reports
//! and the summed filterbank response.
//!
//! Every numeric field is printed in fixed-precision scientific notation so
//! that identical invocations produce identical bytes.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use twint_core::calibrate::{
    calibrate_all_with, default_specs, CalibrationOptions, CalibrationResult, PRINTED_R2, R1,
};
use twint_core::filterbank::{
    channel_sweep, default_inversions, linear_space, log_space, ripple_db, summed_sweep, sweep,
    BankConfig, Channel, SweepResult,
};
use twint_core::mna::{parse_netlist, transfer_function};
use twint_core::ratfunc::Polynomial;
use twint_core::twint::initial_r2;

pub const CSV_HEADER: &str = "f_hz,mag_db,phase_deg,re,im";

#[derive(Debug, Parser)]
#[command(name = "twint", version, about = "Twin-T bandpass filterbank analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the transfer function of a netlist with its poles and zeros.
    Tf {
        #[arg(long)]
        netlist: PathBuf,
    },
    /// Write a frequency sweep as CSV.
    Sweep(SweepArgs),
    /// Calibrate one band or all of them and print the trimmer settings.
    Calibrate {
        /// Band frequency in Hz, or `all`.
        #[arg(long, default_value = "all")]
        band: String,
        #[arg(long, default_value_t = 0.05)]
        tol_freq: f64,
        #[arg(long, default_value_t = 0.001)]
        tol_gain: f64,
        /// Emit JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Compare the computed R'2 of each band with the printed part values.
    Table1,
    /// Write the summed output of all ten channels as CSV and report ripple.
    Sum {
        /// `default`, `none`, or a comma-separated list of channel indices.
        #[arg(long, default_value = "default")]
        inversions: String,
        #[command(flatten)]
        grid: Grid,
        /// Bank description (JSON); omitted fields use the defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "source")]
pub struct Source {
    /// Circuit file.
    #[arg(long)]
    pub netlist: Option<PathBuf>,
    /// Calibrated bandpass channel, by band frequency in Hz.
    #[arg(long)]
    pub band: Option<f64>,
    /// Bank channel index, 0 (lowpass) to 9 (highpass).
    #[arg(long)]
    pub channel: Option<usize>,
}

#[derive(Debug, Args)]
pub struct Grid {
    #[arg(long, default_value_t = 20.0)]
    pub fmin: f64,
    #[arg(long, default_value_t = 20e3)]
    pub fmax: f64,
    #[arg(long, default_value_t = 1000)]
    pub points: usize,
    /// Space frequencies linearly instead of logarithmically.
    #[arg(long)]
    pub linear: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub grid: Grid,
    /// Bank description (JSON) for `--band` and `--channel`.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

/// Error that should exit with the usage status rather than the
/// computation status.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Runs one invocation. Returns the process exit status: 0 on success,
/// 1 on a computation error, 2 on a flag error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            if e.is::<UsageError>() {
                2
            } else {
                1
            }
        }
    }
}

fn execute(cmd: Command, out: &mut dyn Write) -> anyhow::Result<()> {
    match cmd {
        Command::Tf { netlist } => tf(&netlist, out),
        Command::Sweep(args) => sweep_cmd(args, out),
        Command::Calibrate {
            band,
            tol_freq,
            tol_gain,
            json,
        } => calibrate(&band, tol_freq, tol_gain, json, out),
        Command::Table1 => table1(out),
        Command::Sum {
            inversions,
            grid,
            config,
            out: path,
        } => sum(&inversions, &grid, config.as_deref(), &path, out),
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn poly_line(p: &Polynomial) -> String {
    p.coeffs()
        .iter()
        .map(|c| format!("{c:.12e}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn tf(path: &Path, out: &mut dyn Write) -> anyhow::Result<()> {
    let n = parse_netlist(&read(path)?)?;
    let h = transfer_function(&n)?;
    writeln!(out, "# ascending powers of s")?;
    writeln!(out, "sign: {:+.0}", h.sign().value())?;
    writeln!(out, "num: {}", poly_line(h.num()))?;
    writeln!(out, "den: {}", poly_line(h.den()))?;
    for (label, p) in [("zero", h.num()), ("pole", h.den())] {
        for z in p.roots() {
            writeln!(out, "{label}: {:.9e} {:+.9e}j", z.re, z.im)?;
        }
    }
    Ok(())
}

fn grid_freqs(g: &Grid) -> anyhow::Result<Vec<f64>> {
    if !(g.fmin > 0.0 && g.fmax > g.fmin && g.fmax.is_finite()) {
        return Err(usage(format!("need 0 < --fmin < --fmax, got {} and {}", g.fmin, g.fmax)));
    }
    if g.points < 2 {
        return Err(usage("--points must be at least 2"));
    }
    Ok(if g.linear {
        linear_space(g.fmin, g.fmax, g.points)
    } else {
        log_space(g.fmin, g.fmax, g.points)
    })
}

fn load_bank(config: Option<&Path>) -> anyhow::Result<BankConfig> {
    Ok(match config {
        Some(p) => BankConfig::from_json(&read(p)?)?,
        None => BankConfig::calibrated_default()?,
    })
}

/// CSV rendering: frequency to 10 significant digits, magnitude and the
/// real and imaginary parts to 6, phase to 4.
pub fn render_csv(s: &SweepResult) -> String {
    let mut text = String::from(CSV_HEADER);
    text.push('\n');
    for r in &s.rows {
        let _ = writeln!(
            text,
            "{:.9e},{:.5e},{:.3e},{:.5e},{:.5e}",
            r.f_hz, r.magnitude_db, r.phase_deg, r.re, r.im
        );
    }
    text
}

fn write_csv(path: &Path, s: &SweepResult) -> anyhow::Result<()> {
    fs::write(path, render_csv(s)).with_context(|| format!("writing {}", path.display()))
}

fn sweep_cmd(args: SweepArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let freqs = grid_freqs(&args.grid)?;
    let result = if let Some(path) = &args.source.netlist {
        let h = transfer_function(&parse_netlist(&read(path)?)?)?;
        sweep(&h, &freqs)?
    } else {
        let bank = load_bank(args.config.as_deref())?;
        let index = match (args.source.band, args.source.channel) {
            (Some(band), _) => bank
                .channels
                .iter()
                .position(|c| matches!(c, Channel::Band { spec, .. } if spec.band_hz == band))
                .ok_or_else(|| usage(format!("no bandpass channel at {band} Hz")))?,
            (_, Some(i)) if i < bank.channels.len() => i,
            (_, Some(i)) => return Err(usage(format!("--channel {i} is out of range 0..=9"))),
            _ => unreachable!("clap enforces one source"),
        };
        channel_sweep(&bank, index, &freqs)?
    };
    write_csv(&args.out, &result)?;
    writeln!(out, "wrote {} rows to {}", result.rows.len(), args.out.display())?;
    Ok(())
}

fn calibrate(band: &str, tol_freq: f64, tol_gain: f64, json: bool, out: &mut dyn Write) -> anyhow::Result<()> {
    let mut specs = default_specs();
    if band != "all" {
        let f: f64 = band
            .parse()
            .map_err(|_| usage(format!("--band must be a frequency or `all`, got `{band}`")))?;
        specs.retain(|s| s.band_hz == f);
        if specs.is_empty() {
            let known: Vec<_> = default_specs().iter().map(|s| s.band_hz.to_string()).collect();
            return Err(usage(format!("no band at {f} Hz; known bands: {}", known.join(", "))));
        }
    }
    if !(tol_freq > 0.0 && tol_gain > 0.0) {
        return Err(usage("tolerances must be positive"));
    }
    let opts = CalibrationOptions {
        tol_freq_hz: tol_freq,
        tol_gain_db: tol_gain,
        ..CalibrationOptions::default()
    };
    let results = calibrate_all_with(&specs, &opts);
    let ok: Vec<&CalibrationResult> = results.iter().flatten().collect();
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&ok)?)?;
    } else {
        writeln!(
            out,
            "{:>8} {:>14} {:>14} {:>10} {:>14} {:>11} {:>5} {:>8}",
            "band_hz", "r2_ohm", "r3_ohm", "q", "f_peak_hz", "gain_db", "iter", "nominal"
        )?;
        for r in &results {
            match r {
                Ok(r) => writeln!(
                    out,
                    "{:>8.1} {:>14.6e} {:>14.6e} {:>10.4} {:>14.6e} {:>11.6} {:>5} {:>8}",
                    r.band_hz, r.r2, r.r3, r.q, r.f_peak, r.gain_db, r.iterations, r.within_nominal_range
                )?,
                Err(e) => writeln!(out, "error: {e}")?,
            }
        }
    }
    let failed = results.iter().filter(|r| r.is_err()).count();
    if failed > 0 {
        bail!("{failed} band(s) failed to calibrate");
    }
    Ok(())
}

fn table1(out: &mut dyn Write) -> anyhow::Result<()> {
    writeln!(
        out,
        "{:>8} {:>10} {:>12} {:>12} {:>10}",
        "band_hz", "design_hz", "computed", "printed", "dev_pct"
    )?;
    for (row, spec) in PRINTED_R2.iter().zip(default_specs()) {
        let r2 = initial_r2(row.design_hz, R1, spec.c1_c3, spec.c2);
        writeln!(
            out,
            "{:>8.0} {:>10.0} {:>12.6e} {:>12.6e} {:>+10.4}",
            row.band_hz,
            row.design_hz,
            r2,
            row.r2,
            100.0 * (r2 / row.r2 - 1.0)
        )?;
    }
    Ok(())
}

/// Parses `default`, `none`, or a comma-separated index list.
pub fn parse_inversions(text: &str) -> anyhow::Result<BTreeSet<usize>> {
    match text.trim() {
        "default" => Ok(default_inversions()),
        "none" | "" => Ok(BTreeSet::new()),
        list => list
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| usage(format!("bad channel index `{t}` in --inversions")))
            })
            .collect(),
    }
}

fn sum(
    inversions: &str,
    grid: &Grid,
    config: Option<&Path>,
    path: &Path,
    out: &mut dyn Write,
) -> anyhow::Result<()> {
    let inverted = parse_inversions(inversions)?;
    let freqs = grid_freqs(grid)?;
    let mut bank = load_bank(config)?;
    bank.inverted = inverted;
    bank.validate().map_err(|e| usage(e.to_string()))?;
    let result = summed_sweep(&bank, &freqs)?;
    write_csv(path, &result)?;
    let ripple = ripple_db(&result, 200.0, 3200.0)?;
    writeln!(out, "ripple_db 200-3200 Hz: {ripple:.6e}")?;
    Ok(())
}
