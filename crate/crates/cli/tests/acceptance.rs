//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::TAU;
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twint_core::calibrate::{
    calibrate_all, chain_response, default_specs, PRINTED_R2, PUBLISHED_CALIBRATION, R1,
};
use twint_core::filterbank::{log_space, ripple_db, summed_sweep, BankConfig};
use twint_core::mna::{noninverting_variant, transfer_function};
use twint_core::ratfunc::{real_roots_cubic, Polynomial, RationalFunction};
use twint_core::twint::{find_peak, initial_r2, TwinTParams};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo.ln()..hi.ln()).exp()
}

fn random_twin_t(rng: &mut ChaCha8Rng) -> TwinTParams {
    let r = |rng: &mut ChaCha8Rng| log_uniform(rng, 100.0, 1e6);
    let c = |rng: &mut ChaCha8Rng| log_uniform(rng, 100e-12, 10e-6);
    TwinTParams::new(r(rng), r(rng), r(rng), c(rng), c(rng), c(rng)).unwrap()
}

/// Printed R'2 within 0.5% for every band.
fn printed_r2() -> Outcome {
    let mut worst = 0.0f64;
    for (row, spec) in PRINTED_R2.iter().zip(default_specs()) {
        let r2 = initial_r2(row.design_hz, R1, spec.c1_c3, spec.c2);
        worst = worst.max(rel(r2, row.r2));
    }
    outcome(worst <= 5e-3, format!("worst R'2 deviation {:.3}% (limit 0.5%)", 100.0 * worst))
}

/// All bands converge; R2, R3, Q within 2% of the published values; the
/// looser 1 Hz / 0.01 dB rule holds.
fn published_calibration() -> Outcome {
    let results = calibrate_all(&default_specs());
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    let mut loose_ok = true;
    for (r, &(band, r2, r3, q)) in results.iter().zip(&PUBLISHED_CALIBRATION) {
        let Ok(r) = r else {
            return outcome(false, format!("{band} Hz band failed: {:?}", r));
        };
        worst.0 = worst.0.max(rel(r.r2, r2));
        worst.1 = worst.1.max(rel(r.r3, r3));
        worst.2 = worst.2.max(rel(r.q, q));
        loose_ok &= (r.f_peak - band).abs() <= 1.0 && (r.gain_db - 6.5).abs() <= 0.01;
    }
    let pass = worst.0 <= 0.02 && worst.1 <= 0.02 && worst.2 <= 0.02 && loose_ok;
    outcome(
        pass,
        format!(
            "8/8 converged; worst R2 {:.2}%, R3 {:.2}%, Q {:.2}% (limit 2%); 1 Hz/0.01 dB rule {}",
            100.0 * worst.0,
            100.0 * worst.1,
            100.0 * worst.2,
            if loose_ok { "met" } else { "violated" }
        ),
    )
}

/// ωn from the factored denominator within 1 Hz of the band.
fn omega_n_claim() -> Outcome {
    let specs = default_specs();
    let mut worst = 0.0f64;
    for (spec, r) in specs.iter().zip(calibrate_all(&specs)) {
        let Ok(r) = r else {
            return outcome(false, format!("{} Hz band failed to calibrate", spec.band_hz));
        };
        let h = chain_response(spec, r.r2, r.r3).unwrap();
        let f = h.bandpass_factors().unwrap().omega_n / TAU;
        worst = worst.max((f - spec.band_hz).abs());
    }
    outcome(worst <= 1.0, format!("worst |ωn/2π − band| = {worst:.4} Hz (limit 1 Hz)"))
}

fn coefficient_error(a: &RationalFunction, b: &RationalFunction) -> Option<f64> {
    if a.sign() != b.sign() || a.num().degree() != b.num().degree() || a.den().degree() != b.den().degree() {
        return None;
    }
    let pairs = |x: &Polynomial, y: &Polynomial| {
        x.coeffs().iter().zip(y.coeffs()).map(|(p, q)| rel(*p, *q)).fold(0.0, f64::max)
    };
    Some(pairs(a.num(), b.num()).max(pairs(a.den(), b.den())))
}

/// Closed form equals the nodal solver on 100 random sets.
fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let p = random_twin_t(&mut rng);
        let mna = transfer_function(&p.netlist()).unwrap();
        match coefficient_error(&p.transfer_function(), &mna) {
            Some(e) => worst = worst.max(e),
            None => return outcome(false, format!("structure mismatch for {p:?}")),
        }
    }
    outcome(worst <= 1e-12, format!("worst coefficient error {worst:.2e} over 100 sets (limit 1e-12)"))
}

/// Cancellation leaves a second-order bandpass with peak A at ωn.
fn special_case() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut sets: Vec<TwinTParams> = default_specs()
        .iter()
        .map(|s| {
            let r2 = initial_r2(s.band_hz, R1, s.c1_c3, s.c2);
            TwinTParams::new(R1, r2, R1, s.c1_c3, s.c2, s.c1_c3).unwrap()
        })
        .collect();
    for _ in 0..50 {
        let p = random_twin_t(&mut rng);
        sets.push(TwinTParams { r3: p.r1, c3: p.c1, ..p });
    }
    let (mut gain_err, mut freq_err, mut search_err) = (0.0f64, 0.0f64, 0.0f64);
    for p in &sets {
        let canon = p.canonical().unwrap();
        let h = p.transfer_function().cancel_pole_zero(1e-6);
        if h.den().degree() != 2 || h.num().degree() != 1 {
            return outcome(false, format!("no second-order reduction for {p:?}"));
        }
        // A pure `k·s / (d2 s² + d1 s + d0)` peaks exactly at sqrt(d0/d2).
        let (n, d) = (h.num(), h.den());
        let w_peak = (d.coeff(0) / d.coeff(2)).sqrt();
        let residual_zero = n.coeff(0).abs() / (n.coeff(1).abs() * w_peak);
        freq_err = freq_err.max(rel(w_peak, canon.omega_n)).max(residual_zero);
        gain_err = gain_err.max(rel(h.eval_jw(w_peak).unwrap().norm(), canon.gain_a));
        let f = canon.omega_n / TAU;
        let pk = find_peak(&h, f / 10.0, f * 10.0).unwrap();
        search_err = search_err.max(rel(pk.f_peak, f));
    }
    outcome(
        gain_err <= 1e-9 && freq_err <= 1e-9,
        format!(
            "{} sets: peak gain vs A {gain_err:.2e}, peak ω vs ωn {freq_err:.2e} (limit 1e-9); numeric peak search agrees to {search_err:.1e}",
            sets.len()
        ),
    )
}

/// Swapped-input variant never drops below unity gain.
fn variant_floor() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let specs = default_specs();
    let mut sets: Vec<TwinTParams> = specs
        .iter()
        .zip(calibrate_all(&specs))
        .map(|(s, r)| s.twin_t(r.as_ref().unwrap().r2, r.unwrap().r3).unwrap())
        .collect();
    sets.extend((0..20).map(|_| random_twin_t(&mut rng)));
    let freqs = log_space(1.0, 100e3, 1000);
    let mut min = f64::INFINITY;
    for p in &sets {
        let v = transfer_function(&noninverting_variant(&p.netlist()).unwrap()).unwrap();
        for &f in &freqs {
            min = min.min(v.eval_hz(f).unwrap().norm());
        }
    }
    outcome(
        min >= 1.0 - 1e-6,
        format!("min |H| = {min:.9} over {} circuits × 1000 points (limit ≥ 1 − 1e-6)", sets.len()),
    )
}

/// Default inversions lower the summed-output ripple.
fn smoothing() -> Outcome {
    let bank = BankConfig::calibrated_default().unwrap();
    let freqs = log_space(20.0, 20e3, 1000);
    let with = ripple_db(&summed_sweep(&bank, &freqs).unwrap(), 200.0, 3200.0).unwrap();
    let mut plain = bank.clone();
    plain.inverted.clear();
    let without = ripple_db(&summed_sweep(&plain, &freqs).unwrap(), 200.0, 3200.0).unwrap();
    outcome(
        with < without,
        format!("ripple 200-3200 Hz: {with:.3} dB with inversions vs {without:.3} dB without"),
    )
}

/// Cubic factoring reconstructs 1000 random cubics.
fn factoring() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let a = log_uniform(&mut rng, 1e-2, 1e4);
        let wn = log_uniform(&mut rng, 1e-2, 1e4);
        let q = log_uniform(&mut rng, 0.51, 50.0);
        let cubic = &Polynomial::linear(a, 1.0) * &Polynomial::new([wn * wn, wn / q, 1.0]);
        let Ok((root, quad)) = real_roots_cubic(&cubic) else {
            return outcome(false, format!("factoring failed for {cubic:?}"));
        };
        let back = &Polynomial::linear(-root, 1.0) * &quad;
        for k in 0..4 {
            worst = worst.max(rel(back.coeff(k), cubic.coeff(k)));
        }
    }
    outcome(worst <= 1e-9, format!("worst coefficient error {worst:.2e} over 1000 cubics (limit 1e-9)"))
}

/// Two calibration runs print identical bytes.
fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_twint"))
            .args(["calibrate", "--band", "all"])
            .output()
            .expect("running the twint binary")
    };
    let (a, b) = (run(), run());
    let ok = a.status.success() && b.status.success() && a.stdout == b.stdout && !a.stdout.is_empty();
    outcome(ok, format!("two runs, {} bytes each, identical: {}", a.stdout.len(), a.stdout == b.stdout))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("printed R'2 values reproduced", printed_r2),
        ("published calibration reproduced", published_calibration),
        ("ωn within 1 Hz of target", omega_n_claim),
        ("closed form equals nodal analysis", oracle_equivalence),
        ("special-case reduction", special_case),
        ("noninverting variant ≥ unity", variant_floor),
        ("inversions smooth summed output", smoothing),
        ("cubic factoring round trip", factoring),
        ("calibration report determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {}: {} {name}: {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
