//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fail.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use optomech::backaction::{
    backaction_rate, backaction_rate_half_detuned, oscillation_amplitude, saturation_amplitude, threshold_power,
    transmission_modulation,
};
use optomech::coupling::{coupling_rate, coupling_ratio_hv, fit_exponential, numeric_g_check, Provenance, ShiftCurve};
use optomech::devices::{decay_constant, DEFAULT_EFFECTIVE_INDEX, SILICA_INDEX, SILICA_KERR, SIN_INDEX};
use optomech::mechanics::{
    effective_mass, snr_requirement, susceptibility, thermal_rms, thermal_spectrum, zero_point, RmsMethod,
};
use optomech::qba::{
    heisenberg_product_over_hbar2, qba_force_psd, qba_thermal_ratio, thermal_force_psd, RatioParameters,
};
use optomech::sensing::{fit_response, shot_noise_floor, ResponseCurve};
use optomech::units::{rate_from_mhz_per_nm, Hertz, RadPerSec, Sidedness, K_B};
use optomech::{
    CouplingGeometry, DriveCondition, MechanicalMode, Microcavity, NanoOscillator, Orientation, OscillatorKind,
    ProbeProfile, Readout,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn within(label: &str, value: f64, lo: f64, hi: f64) -> Check {
    let msg = format!("{label} = {value:.6e} in [{lo:.6e}, {hi:.6e}]");
    if value >= lo && value <= hi {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn all(parts: Vec<Check>) -> Check {
    let ok = parts.iter().all(Result::is_ok);
    let text = parts
        .into_iter()
        .map(|p| match p {
            Ok(s) => s,
            Err(s) => format!("FAILED {s}"),
        })
        .collect::<Vec<_>>()
        .join("; ");
    if ok {
        Ok(text)
    } else {
        Err(text)
    }
}

fn cavity_58um() -> Microcavity {
    Microcavity {
        major_radius: 30e-6,
        minor_radius: 3e-6,
        wavelength: 1.55e-6,
        index: SILICA_INDEX,
        effective_index: DEFAULT_EFFECTIVE_INDEX,
        kappa: RadPerSec::from_hz(4.9e6),
        mode_diameter: 3.5e-6,
        surface_field: 0.4,
        kerr_coefficient: SILICA_KERR,
        decay_length: Some(220e-9),
    }
}

fn string_25um() -> NanoOscillator {
    NanoOscillator {
        kind: OscillatorKind::String,
        length: 25e-6,
        width: 800e-9,
        thickness: 110e-9,
        density: 3100.0,
        stress: 0.9e9,
        refractive_index: SIN_INDEX,
        quality_factor: 5e4,
        mode_index: 1,
    }
}

fn random_cavity(rng: &mut ChaCha8Rng) -> Microcavity {
    let minor = rng.gen_range(1.5e-6..5e-6);
    Microcavity {
        major_radius: rng.gen_range(15e-6..60e-6),
        minor_radius: minor,
        wavelength: rng.gen_range(0.7e-6..1.7e-6),
        index: rng.gen_range(1.3..2.2),
        effective_index: rng.gen_range(1.2..1.5),
        kappa: RadPerSec::from_hz(10f64.powf(rng.gen_range(5.5..8.5))),
        mode_diameter: rng.gen_range(0.2..1.8) * minor,
        surface_field: rng.gen_range(0.1..1.0),
        kerr_coefficient: SILICA_KERR,
        decay_length: None,
    }
}

fn random_mode(rng: &mut ChaCha8Rng) -> MechanicalMode {
    MechanicalMode::new(
        RadPerSec::from_hz(10f64.powf(rng.gen_range(5.0..7.5))),
        10f64.powf(rng.gen_range(2.0..6.5)),
        10f64.powf(rng.gen_range(-16.0..-13.0)),
    )
    .unwrap()
}

fn decay_length() -> Check {
    let alpha = decay_constant(1550e-9, 1.45).map_err(|e| e.to_string())?;
    within("1/alpha (nm)", 1e9 / alpha, 234.0, 236.0)
}

fn horizontal_g() -> Check {
    let g = coupling_rate(
        &cavity_58um(),
        &string_25um(),
        &CouplingGeometry::new(0.0, Orientation::Horizontal),
    )
    .map_err(|e| e.to_string())?
    .g;
    within("g/2pi (MHz/nm)", g / (2.0 * PI) * 1e-15, 54.0, 66.0)
}

fn sheet_g() -> Check {
    let sheet = NanoOscillator {
        kind: OscillatorKind::Sheet,
        length: 40e-6,
        width: 50e-6,
        thickness: 30e-9,
        ..string_25um()
    };
    let g = coupling_rate(&cavity_58um(), &sheet, &CouplingGeometry::new(0.0, Orientation::Sheet))
        .map_err(|e| e.to_string())?
        .g;
    within("g/2pi (MHz/nm)", g / (2.0 * PI) * 1e-15, 36.0, 48.0)
}

fn hv_ratio() -> Check {
    let cav = cavity_58um();
    let ratio = coupling_ratio_hv(&cav);
    let (osc, h, v) = (
        string_25um(),
        CouplingGeometry::new(0.0, Orientation::Horizontal),
        CouplingGeometry::new(0.0, Orientation::Vertical),
    );
    let by_rates = coupling_rate(&cav, &osc, &h).unwrap().g / coupling_rate(&cav, &osc, &v).unwrap().g;
    all(vec![
        within("ratio", ratio, 10f64.sqrt() - 1e-15, 10f64.sqrt() + 1e-15),
        within("g_h/g_v rel. deviation", rel(by_rates, 10f64.sqrt()), 0.0, 1e-14),
        within("rounded", (ratio * 1000.0).round() / 1000.0, 3.162, 3.162),
    ])
}

fn readout_cavity() -> Microcavity {
    Microcavity {
        kappa: RadPerSec::from_hz(50e6),
        ..cavity_58um()
    }
}

fn readout_mode() -> MechanicalMode {
    MechanicalMode::new(RadPerSec::from_hz(8e6), 4e4, 4.9e-15).unwrap()
}

fn shot_noise() -> Check {
    let drive = DriveCondition::new(65e-6, 300.0, Readout::Pdh);
    let floor = shot_noise_floor(
        &readout_cavity(),
        rate_from_mhz_per_nm(3.8),
        &drive,
        RadPerSec::from_hz(8e6),
    )
    .map_err(|e| e.to_string())?;
    all(vec![
        within(
            "double-sided (m/rtHz)",
            floor.double_sided,
            1.5e-16 * 0.95,
            1.5e-16 * 1.05,
        ),
        within("PDH single-sided (m/rtHz)", floor.pdh(), 2.6e-16 * 0.95, 2.6e-16 * 1.05),
    ])
}

fn zero_point_level() -> Check {
    let zp = zero_point(&readout_mode());
    within(
        "sqrt(S_xx) single-sided (am/rtHz)",
        zp.asd(Sidedness::Single) * 1e18,
        820.0 * 0.97,
        820.0 * 1.03,
    )
}

fn thermal_rms_check() -> Check {
    let mode = MechanicalMode::new(RadPerSec::from_hz(10.74e6), 53_000.0, 3.6e-15).unwrap();
    let analytic = thermal_rms(&mode, 300.0, RmsMethod::Analytic).map_err(|e| e.to_string())?;
    let closed = (K_B * 300.0 / (mode.m_eff * mode.omega_m.0.powi(2))).sqrt();
    let numeric = thermal_rms(&mode, 300.0, RmsMethod::numeric(10.74e4, 10.74e8)).map_err(|e| e.to_string())?;
    all(vec![
        within("integrated x_rms (pm)", numeric * 1e12, 16.0 * 0.9, 16.0 * 1.1),
        within("analytic vs closed form rel.", rel(analytic, closed), 0.0, 0.0),
    ])
}

fn snr_condition() -> Check {
    let snr = snr_requirement(&readout_mode(), 300.0).map_err(|e| e.to_string())?;
    all(vec![
        within("2n (dB)", snr.db, 61.8, 62.0),
        within("margin over 60 dB", snr.db - 60.0, 0.0, f64::INFINITY),
    ])
}

fn stress_inversion() -> Check {
    let s = string_25um().infer_stress(Hertz(10.74e6));
    within("S (GPa)", s * 1e-9, 0.81, 0.99)
}

// Independent trapezoid evaluation of m⟨u²⟩/(∫u v0²)² for a Gaussian probe.
fn trapezoid_mass(osc: &NanoOscillator, l: f64, offset: f64, points: usize) -> f64 {
    let half = osc.length / 2.0;
    let h = osc.length / (points - 1) as f64;
    let (mut sq, mut ov) = (0.0, 0.0);
    for i in 0..points {
        let y = -half + i as f64 * h;
        let w = if i == 0 || i == points - 1 { 0.5 } else { 1.0 };
        let u = (PI * y / osc.length).cos();
        sq += w * u * u;
        ov += w * u * (-PI * ((y - offset) / l).powi(2)).exp() / l;
    }
    osc.physical_mass() * (sq * h / osc.length) / (ov * h).powi(2)
}

fn effective_mass_check() -> Check {
    let osc = string_25um();
    let m = osc.physical_mass();
    let delta = effective_mass(&osc, &ProbeProfile::delta(), 1).map_err(|e| e.to_string())?;
    let l_narrow = osc.length * 0.5e-4f64.sqrt() / PI;
    let narrow = effective_mass(&osc, &ProbeProfile::gaussian(l_narrow), 1).map_err(|e| e.to_string())?;

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let o = NanoOscillator {
            length: rng.gen_range(10e-6..60e-6),
            width: rng.gen_range(300e-9..1000e-9),
            thickness: rng.gen_range(30e-9..200e-9),
            ..string_25um()
        };
        let l = rng.gen_range(0.02..0.6) * o.length;
        let offset = rng.gen_range(-0.2..0.2) * o.length;
        let probe = ProbeProfile {
            center_offset: offset,
            ..ProbeProfile::gaussian(l)
        };
        let quad = effective_mass(&o, &probe, 1).map_err(|e| e.to_string())?;
        worst = worst.max(rel(quad, trapezoid_mass(&o, l, offset, 1_000_001)));
    }
    all(vec![
        within("delta probe m_eff/(m/2) - 1", rel(delta, m / 2.0), 0.0, 1e-9),
        within("narrow Gaussian m_eff/(m/2) - 1", rel(narrow, m / 2.0), 0.0, 1e-4),
        within("worst quadrature vs trapezoid rel.", worst, 0.0, 1e-8),
    ])
}

fn backaction_identity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let cav = random_cavity(&mut rng);
        let mode = random_mode(&mut rng);
        let g = rate_from_mhz_per_nm(rng.gen_range(0.01..50.0));
        let p = 10f64.powf(rng.gen_range(-7.0..-2.0));
        let drive = DriveCondition::new(p, 300.0, Readout::Homodyne).with_detuning(RadPerSec(cav.kappa.0 / 2.0));
        let full = backaction_rate(&cav, &mode, g, &drive).unwrap().0;
        let reduced = backaction_rate_half_detuned(&cav, &mode, g, p).0;
        worst = worst.max(rel(full, reduced));
    }
    let mut worst_thres: f64 = 0.0;
    for _ in 0..1000 {
        let cav = random_cavity(&mut rng);
        let mode = random_mode(&mut rng);
        let g = rate_from_mhz_per_nm(rng.gen_range(0.01..50.0));
        let pt = threshold_power(&cav, &mode, g).unwrap();
        let drive = DriveCondition::new(pt, 300.0, Readout::Homodyne).with_detuning(RadPerSec(cav.kappa.0 / 2.0));
        let gba = backaction_rate(&cav, &mode, g, &drive).unwrap().0;
        worst_thres = worst_thres.max(rel(gba, -mode.gamma_m.0));
    }
    all(vec![
        within("worst full vs reduced rel.", worst, 0.0, 1e-12),
        within("worst Gamma_ba(P_thres) + Gamma_m rel.", worst_thres, 0.0, 1e-9),
    ])
}

fn heisenberg() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let cav = random_cavity(&mut rng);
        let g = rate_from_mhz_per_nm(rng.gen_range(0.01..100.0));
        let drive = DriveCondition::new(10f64.powf(rng.gen_range(-8.0..-1.0)), 300.0, Readout::Homodyne);
        let w = RadPerSec::from_hz(10f64.powf(rng.gen_range(4.0..8.0)));
        let p = heisenberg_product_over_hbar2(&cav, g, &drive, w).unwrap();
        worst = worst.max(rel(p, 0.5));
    }
    within("worst |S_xx S_FF/hbar^2 - 1/2| rel.", worst, 0.0, 1e-12)
}

fn reference_qba_cavity() -> Microcavity {
    Microcavity {
        wavelength: 780e-9,
        kappa: RadPerSec::from_hz(4e6),
        decay_length: None,
        ..cavity_58um()
    }
}

fn qba_ratio() -> Check {
    let mode = MechanicalMode::new(RadPerSec::from_hz(1e6), 1e6, 15e-15).unwrap();
    let drive = DriveCondition::new(100e-6, 300.0, Readout::Homodyne);
    let ratio = qba_thermal_ratio(
        &reference_qba_cavity(),
        &mode,
        rate_from_mhz_per_nm(20.0),
        &drive,
        mode.omega_m,
    )
    .map_err(|e| e.to_string())?;
    let by_params = RatioParameters::REFERENCE.ratio();
    all(vec![
        within("ratio", ratio, 0.8, 1.2),
        within("device vs parameter form rel.", rel(ratio, by_params), 0.0, 1e-9),
    ])
}

fn response_cavity() -> Microcavity {
    Microcavity {
        wavelength: 1530e-9,
        ..cavity_58um()
    }
}

fn fit_round_trips() -> Check {
    let cav = cavity_58um();
    let osc = string_25um();
    let alpha = cav.alpha().unwrap();
    let xs: Vec<f64> = (0..21).map(|i| i as f64 * 0.25 / alpha).collect();
    let clean = ShiftCurve::from_model(&cav, &osc, Orientation::Horizontal, &xs).unwrap();
    let truth = 0.5 / alpha;
    let noiseless = fit_exponential(&clean).map_err(|e| e.to_string())?.decay_length;

    let normal = Normal::new(0.0, 0.01).unwrap();
    let mut worst_noisy: f64 = 0.0;
    for seed in 0..5 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = clean
            .points
            .iter()
            .map(|&(x, w)| (x, w * (1.0 + normal.sample(&mut rng))))
            .collect();
        let curve = ShiftCurve::new(pts, Provenance::Measured).unwrap();
        let d = fit_exponential(&curve).map_err(|e| e.to_string())?.decay_length;
        worst_noisy = worst_noisy.max(rel(d, truth));
    }

    let rcav = response_cavity();
    let mut worst_resp: f64 = 0.0;
    for (f_m, q, m, g) in [
        (10.74e6, 53_000.0, 3.6e-15, 5.0),
        (8e6, 4e4, 4.9e-15, 2.0),
        (12e6, 1e4, 1.2e-15, 8.0),
    ] {
        let mode = MechanicalMode::new(RadPerSec::from_hz(f_m), q, m).unwrap();
        let (gp, gq) = (rate_from_mhz_per_nm(g), rate_from_mhz_per_nm(0.7 * g));
        let a1 = optomech::sensing::response_coefficient(&rcav, m, gp, gq);
        let dip = (mode.omega_m.0.powi(2) + a1).sqrt() / (2.0 * PI);
        let span = 4.0 * (dip - f_m).max(f_m / q);
        let freqs: Vec<f64> = (0..801).map(|i| f_m - span + 2.0 * span * i as f64 / 800.0).collect();
        let curve = ResponseCurve::from_model(&rcav, &mode, gp, gq, &freqs).unwrap();
        let fit = fit_response(&curve, Some(&rcav), Some(m)).map_err(|e| e.to_string())?;
        for (got, want) in [
            (fit.a1, a1),
            (fit.omega_m.0, mode.omega_m.0),
            (fit.gamma_m.0, mode.gamma_m.0),
            (fit.g_eff.unwrap_or(f64::NAN), (gp * gq).sqrt()),
        ] {
            let e = rel(got, want);
            worst_resp = worst_resp.max(if e.is_nan() { f64::INFINITY } else { e });
        }
    }
    all(vec![
        within("noiseless decay length rel.", rel(noiseless, truth), 0.0, 1e-3),
        within("1% noise worst decay length rel. (5 seeds)", worst_noisy, 0.0, 0.05),
        within("noiseless response worst rel.", worst_resp, 0.0, 1e-3),
    ])
}

fn finite_difference() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let cav = random_cavity(&mut rng);
        let (osc, orientation) = match rng.gen_range(0..3) {
            0 => (string_25um(), Orientation::Horizontal),
            1 => (string_25um(), Orientation::Vertical),
            _ => (
                NanoOscillator {
                    kind: OscillatorKind::Sheet,
                    length: 40e-6,
                    width: 50e-6,
                    thickness: rng.gen_range(20e-9..100e-9),
                    ..string_25um()
                },
                Orientation::Sheet,
            ),
        };
        let alpha = cav.alpha().unwrap();
        let geom = CouplingGeometry::new(rng.gen_range(0.0..3.0) / alpha, orientation);
        let d = numeric_g_check(&cav, &osc, &geom, 1e-3 / alpha).map_err(|e| e.to_string())?;
        worst = worst.max(d);
    }
    within("worst |g_fd - g|/g", worst, 0.0, 1e-4)
}

fn saturation_and_modulation() -> Check {
    let cav = Microcavity {
        kappa: RadPerSec::from_hz(12e6),
        ..cavity_58um()
    };
    let mode = MechanicalMode::new(RadPerSec::from_hz(10.8e6), 7e4, 3.6e-15).unwrap();
    let g = rate_from_mhz_per_nm(0.6);
    let k = cav.kappa.0;
    let half = RadPerSec(k / 2.0);
    let a_sat = saturation_amplitude(&cav, g);
    let far = oscillation_amplitude(
        &cav,
        &mode,
        g,
        &DriveCondition::new(1e6 * threshold_power(&cav, &mode, g).unwrap(), 300.0, Readout::Homodyne)
            .with_detuning(half),
    )
    .unwrap()
    .amplitude;
    let mut worst_full: f64 = 0.0;
    for s in [1.0, 1.5, 3.0, 10.0] {
        let d = transmission_modulation(&cav, g, s * k / g, half).depth;
        worst_full = worst_full.max((d - 1.0).abs());
    }
    let tiny = transmission_modulation(&cav, g, 1e-9 * k / g, half).depth;
    all(vec![
        within("a_sat/((kappa/2)/g) - 1", rel(a_sat, k / 2.0 / g), 0.0, 0.0),
        within("amplitude at 1e6 x P_thres rel. to a_sat", rel(far, a_sat), 0.0, 1e-6),
        within("worst |depth - 1| for g a >= kappa", worst_full, 0.0, 0.0),
        within("depth at g a = 1e-9 kappa", tiny, 0.0, 1e-8),
    ])
}

fn property_suites() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let (mut mono, mut scaling, mut involution, mut fdt) = (0u32, 0u32, 0u32, 0u32);
    let cases = 10_000;
    for _ in 0..cases {
        let cav = random_cavity(&mut rng);
        let mode = random_mode(&mut rng);
        let alpha = cav.alpha().unwrap();
        let osc = string_25um();

        // Monotonicity: |Δω0| and g fall with separation; amplitude rises with power.
        let x1 = rng.gen_range(0.0..2.0) / alpha;
        let x2 = x1 + rng.gen_range(0.01..1.0) / alpha;
        let g1 = coupling_rate(&cav, &osc, &CouplingGeometry::new(x1, Orientation::Horizontal))
            .unwrap()
            .g;
        let g2 = coupling_rate(&cav, &osc, &CouplingGeometry::new(x2, Orientation::Horizontal))
            .unwrap()
            .g;
        let g = rate_from_mhz_per_nm(rng.gen_range(0.1..20.0));
        let pt = threshold_power(&cav, &mode, g).unwrap();
        let (p1, p2) = (pt * rng.gen_range(0.1..10.0), pt * rng.gen_range(0.1..10.0));
        let amp = |p: f64| {
            oscillation_amplitude(
                &cav,
                &mode,
                g,
                &DriveCondition::new(p, 300.0, Readout::Homodyne).with_detuning(RadPerSec(cav.kappa.0 / 2.0)),
            )
            .unwrap()
            .amplitude
        };
        let (lo, hi) = if p1 <= p2 { (p1, p2) } else { (p2, p1) };
        if g2 < g1 && amp(lo) <= amp(hi) {
            mono += 1;
        }

        // Scaling: ratio ∝ P Q / (T m_eff).
        let w = mode.omega_m;
        let p = 10f64.powf(rng.gen_range(-6.0..-3.0));
        let t = rng.gen_range(4.0..400.0);
        let k = rng.gen_range(1.5..5.0);
        let r0 = qba_thermal_ratio(&cav, &mode, g, &DriveCondition::new(p, t, Readout::Homodyne), w).unwrap();
        let rp = qba_thermal_ratio(&cav, &mode, g, &DriveCondition::new(k * p, t, Readout::Homodyne), w).unwrap();
        let rt = qba_thermal_ratio(&cav, &mode, g, &DriveCondition::new(p, k * t, Readout::Homodyne), w).unwrap();
        let heavier = MechanicalMode::new(w, mode.quality_factor(), k * mode.m_eff).unwrap();
        let rm = qba_thermal_ratio(&cav, &heavier, g, &DriveCondition::new(p, t, Readout::Homodyne), w).unwrap();
        let higher_q = MechanicalMode::new(w, k * mode.quality_factor(), mode.m_eff).unwrap();
        let rq = qba_thermal_ratio(&cav, &higher_q, g, &DriveCondition::new(p, t, Readout::Homodyne), w).unwrap();
        if rel(rp, k * r0) < 1e-12 && rel(rt, r0 / k) < 1e-12 && rel(rm, r0 / k) < 1e-12 && rel(rq, k * r0) < 1e-12 {
            scaling += 1;
        }

        // Sidedness involution on a short spectrum.
        let f0 = w.to_hertz().0;
        let freqs: Vec<f64> = (0..8).map(|i| f0 * (0.9 + 0.025 * i as f64)).collect();
        let s = thermal_spectrum(&mode, t, &freqs).unwrap();
        let back = s.to_sidedness(Sidedness::Single).to_sidedness(Sidedness::Double);
        if back == s {
            involution += 1;
        }

        // Fluctuation-dissipation: S_xx = |χ|² S_FF^th pointwise.
        let s_ff = thermal_force_psd(&mode, t).unwrap().value;
        let fdt_ok = freqs.iter().zip(s.values()).all(|(&f, &sxx)| {
            let chi = susceptibility(&mode, RadPerSec::from_hz(f)).norm_sqr();
            rel(sxx, chi * s_ff) < 1e-12
        });
        let ba = qba_force_psd(&cav, g, &DriveCondition::new(p, t, Readout::Homodyne), w)
            .unwrap()
            .value;
        if fdt_ok && ba > 0.0 {
            fdt += 1;
        }
    }
    let parts = [
        ("monotonicity", mono),
        ("scaling laws", scaling),
        ("sidedness involution", involution),
        ("FDT consistency", fdt),
    ];
    let text = parts
        .iter()
        .map(|(n, c)| format!("{n} {c}/{cases}"))
        .collect::<Vec<_>>()
        .join(", ");
    if parts.iter().all(|&(_, c)| c == cases) {
        Ok(text)
    } else {
        Err(text)
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let criteria: [Criterion; 17] = [
        ("decay length at 1550 nm", decay_length),
        ("horizontal coupling rate", horizontal_g),
        ("sheet coupling rate", sheet_g),
        ("horizontal/vertical ratio", hv_ratio),
        ("shot-noise floor", shot_noise),
        ("zero-point level", zero_point_level),
        ("thermal rms", thermal_rms_check),
        ("SNR condition", snr_condition),
        ("stress inversion", stress_inversion),
        ("effective mass", effective_mass_check),
        ("backaction identity and threshold", backaction_identity),
        ("Heisenberg product", heisenberg),
        ("QBA ratio at the reference set", qba_ratio),
        ("fit round trips", fit_round_trips),
        ("finite-difference gradient", finite_difference),
        ("saturation and modulation depth", saturation_and_modulation),
        ("randomized property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (tag, detail) = match check() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} {:>2} {name}: {detail} [{:.2?}]", i + 1, t.elapsed());
    }
    println!(
        "{} of {} criteria passed in {:.2?}",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
