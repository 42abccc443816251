//! Evaluates the analyses requested by a scenario into JSON sections and CSV
//! artifacts.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use optomech::backaction::{self, Regime};
use optomech::coupling::{self, fit_exponential, Provenance, ShiftCurve};
use optomech::devices::Microcavity;
use optomech::mechanics::{
    self, beta_inverse, effective_mass, snr_requirement, thermal_rms, thermal_spectrum, zero_point, MechanicalMode,
    ProbeProfile, RmsMethod,
};
use optomech::qba::{self, RatioParameters};
use optomech::sensing::{self, ResponseCurve};
use optomech::units::{parse_unit, RadPerSec, Sidedness, SpectralDensity};
use optomech::{io as model_io, DriveCondition};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde_json::{json, Map, Value};

use crate::config::{Analysis, Probe, Scenario};
use crate::error::CliError;

/// A CSV file produced by an analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub file_name: String,
    pub contents: String,
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub sections: Map<String, Value>,
    pub artifacts: Vec<Artifact>,
}

/// `{"value", "unit"}` with an SI value expressed in `unit`.
pub fn q(si_value: f64, unit: &str) -> Value {
    let (scale, _) = parse_unit(unit).expect("output unit is well-formed");
    json!({ "value": si_value / scale, "unit": unit })
}

fn dimensionless(v: f64) -> Value {
    json!({ "value": v, "unit": "1" })
}

fn labelled(v: f64, unit: &str) -> Value {
    json!({ "value": v, "unit": unit })
}

fn hz(rate: RadPerSec) -> Value {
    q(rate.to_hertz().0, "Hz")
}

fn rate_value(g: f64) -> Value {
    q(g / (2.0 * PI), "MHz/nm")
}

struct Context<'a> {
    s: &'a Scenario,
    base_dir: Option<&'a Path>,
}

impl Context<'_> {
    fn cavity(&self) -> &Microcavity {
        self.s.cavity.as_ref().expect("checked at parse time")
    }

    fn drive(&self) -> DriveCondition {
        let spec = self.s.drive.expect("checked at parse time");
        spec.resolve(self.s.cavity.as_ref())
    }

    fn temperature(&self) -> f64 {
        self.s.drive.map(|d| d.temperature).unwrap_or(300.0)
    }

    fn probe(&self) -> optomech::Result<ProbeProfile> {
        match (self.s.probe, &self.s.cavity) {
            (Probe::Cavity, Some(cav)) => ProbeProfile::for_cavity(cav),
            _ => Ok(ProbeProfile::delta()),
        }
    }

    fn mode(&self) -> optomech::Result<MechanicalMode> {
        match (&self.s.mode, &self.s.oscillator) {
            (Some(m), _) => MechanicalMode::new(m.frequency.to_angular(), m.quality_factor, m.m_eff),
            (None, Some(osc)) => MechanicalMode::from_oscillator(osc, &self.probe()?),
            (None, None) => unreachable!("checked at parse time"),
        }
    }

    fn g(&self) -> optomech::Result<f64> {
        if let Some(g) = self.s.coupling {
            return Ok(g);
        }
        let (cav, osc, geom) = (
            self.cavity(),
            self.s.oscillator.as_ref().expect("checked"),
            self.s.geometry.as_ref().expect("checked"),
        );
        Ok(coupling::coupling_rate(cav, osc, geom)?.g)
    }

    fn pump_probe(&self) -> optomech::Result<(f64, f64)> {
        let o = &self.s.options;
        match (o.g_pump, o.g_probe) {
            (Some(a), Some(b)) => Ok((a, b)),
            (Some(a), None) => Ok((a, a)),
            (None, Some(b)) => Ok((b, b)),
            (None, None) => {
                let g = self.g()?;
                Ok((g, g))
            }
        }
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.s.options.seed)
    }

    fn read_data(&self) -> Result<Option<String>, CliError> {
        let Some(rel) = &self.s.options.data else {
            return Ok(None);
        };
        let path = match self.base_dir {
            Some(dir) => dir.join(rel),
            None => rel.into(),
        };
        std::fs::read_to_string(&path)
            .map(Some)
            .map_err(|e| CliError::io(path.display(), e))
    }
}

fn spectrum_csv(name: &str, s: &SpectralDensity) -> Result<Artifact, CliError> {
    let mut buf = Vec::new();
    model_io::write_spectrum(&mut buf, s)?;
    Ok(Artifact {
        file_name: name.to_string(),
        contents: String::from_utf8(buf).expect("csv output is utf-8"),
    })
}

fn pairs_csv(name: &str, header: &str, rows: impl IntoIterator<Item = (f64, f64)>) -> Artifact {
    let mut contents = String::new();
    contents.push_str(header);
    contents.push('\n');
    for (a, b) in rows {
        let _ = writeln!(contents, "{a:e},{b:e}");
    }
    Artifact {
        file_name: name.to_string(),
        contents,
    }
}

fn add_noise(rng: &mut ChaCha8Rng, sigma: f64, v: f64) -> f64 {
    if sigma == 0.0 {
        return v;
    }
    let n = Normal::new(0.0, sigma).expect("sigma is finite and >= 0");
    v * (1.0 + n.sample(rng))
}

fn run_coupling(ctx: &Context, out: &mut Outcome) -> Result<(), CliError> {
    let cav = ctx.cavity();
    let osc = ctx.s.oscillator.as_ref().expect("checked");
    let geom = ctx.s.geometry.as_ref().expect("checked");
    let alpha = cav.alpha()?;
    let lengths = cav.sampling_lengths()?;
    let rate = coupling::coupling_rate(cav, osc, geom)?;
    let shift = coupling::frequency_shift(cav, osc, geom)?;
    let thin = coupling::frequency_shift_thin(cav, osc, geom)?;
    let fd = coupling::numeric_g_check(cav, osc, geom, 1e-3 / alpha)?;

    let mut m = Map::new();
    m.insert("orientation".into(), json!(geom.orientation.as_str()));
    m.insert("separation".into(), q(geom.separation, "nm"));
    m.insert("decay_length".into(), q(1.0 / alpha, "nm"));
    m.insert("mode_volume".into(), q(cav.mode_volume(), "m^3"));
    m.insert("finesse".into(), dimensionless(cav.finesse()));
    m.insert("roundtrip_time".into(), q(cav.roundtrip_time(), "ps"));
    m.insert("sampling_length_x".into(), q(lengths.lx, "um"));
    m.insert("sampling_length_y".into(), q(lengths.ly, "um"));
    m.insert("frequency_shift".into(), q(shift / (2.0 * PI), "GHz"));
    m.insert("frequency_shift_thin_film".into(), q(thin / (2.0 * PI), "GHz"));
    m.insert("g".into(), rate_value(rate.g));
    m.insert("finite_difference_deviation".into(), dimensionless(fd));
    m.insert(
        "horizontal_vertical_ratio".into(),
        dimensionless(coupling::coupling_ratio_hv(cav)),
    );
    m.insert(
        "standing_wave_period".into(),
        q(coupling::standing_wave_period(cav), "nm"),
    );
    out.sections.insert("coupling".into(), Value::Object(m));

    let xs = separations(ctx, alpha);
    let curve = ShiftCurve::from_model(cav, osc, geom.orientation, &xs)?;
    out.artifacts.push(pairs_csv(
        "shift_curve.csv",
        "x0_m,dfreq_hz",
        curve.points.iter().map(|&(x, w)| (x, w / (2.0 * PI))),
    ));
    Ok(())
}

fn separations(ctx: &Context, alpha: f64) -> Vec<f64> {
    if ctx.s.options.separations.is_empty() {
        (0..21).map(|i| i as f64 * 0.25 / alpha).collect()
    } else {
        ctx.s.options.separations.clone()
    }
}

fn mode_section(ctx: &Context, mode: &MechanicalMode) -> Result<Map<String, Value>, CliError> {
    let t = ctx.temperature();
    let mut m = Map::new();
    m.insert("frequency".into(), q(mode.omega_m.to_hertz().0, "MHz"));
    m.insert("linewidth".into(), hz(mode.gamma_m));
    m.insert("quality_factor".into(), dimensionless(mode.quality_factor()));
    m.insert("m_eff".into(), q(mode.m_eff, "pg"));
    m.insert("temperature".into(), q(t, "K"));
    if let Some(osc) = &ctx.s.oscillator {
        if ctx.s.mode.is_none() {
            m.insert("m_phys".into(), q(osc.physical_mass(), "pg"));
            m.insert("m_eff_over_m".into(), dimensionless(mode.m_eff / osc.physical_mass()));
            if let (Probe::Cavity, Some(cav)) = (ctx.s.probe, &ctx.s.cavity) {
                m.insert(
                    "beta_inverse".into(),
                    dimensionless(beta_inverse(cav.sampling_lengths()?.ly, osc.length)),
                );
            }
            let delta = effective_mass(osc, &ProbeProfile::delta(), osc.mode_index);
            if let Ok(md) = delta {
                m.insert("m_eff_point_probe".into(), q(md, "pg"));
            }
        }
        if let Some(f) = ctx.s.measured_frequency {
            m.insert("measured_frequency".into(), q(f.0, "MHz"));
            m.insert("inferred_stress".into(), q(osc.stress, "GPa"));
        } else {
            m.insert("stress".into(), q(osc.stress, "GPa"));
        }
    }
    Ok(m)
}

fn run_spectrum(ctx: &Context, out: &mut Outcome) -> Result<(), CliError> {
    let mode = ctx.mode()?;
    let t = ctx.temperature();
    let mut m = mode_section(ctx, &mode)?;
    let f0 = mode.omega_m.to_hertz().0;
    let zp = zero_point(&mode);
    let snr = snr_requirement(&mode, t)?;
    m.insert(
        "x_rms_analytic".into(),
        q(thermal_rms(&mode, t, RmsMethod::Analytic)?, "pm"),
    );
    m.insert(
        "x_rms_integrated".into(),
        q(thermal_rms(&mode, t, RmsMethod::numeric(f0 / 100.0, f0 * 100.0))?, "pm"),
    );
    m.insert(
        "thermal_peak_single_sided".into(),
        q(mechanics::thermal_peak_single_sided(&mode, t), "m^2/Hz"),
    );
    m.insert("x_zp".into(), q(zp.x_zp, "fm"));
    m.insert(
        "zero_point_asd_single_sided".into(),
        q(zp.asd(Sidedness::Single), "am/Hz^0.5"),
    );
    m.insert(
        "zero_point_asd_double_sided".into(),
        q(zp.asd(Sidedness::Double), "am/Hz^0.5"),
    );
    m.insert("phonon_occupation".into(), dimensionless(snr.occupation));
    m.insert("required_signal_to_background".into(), labelled(snr.db, "dB"));

    let grid = ctx.s.grid.as_ref().expect("checked");
    let spectrum = thermal_spectrum(&mode, t, &grid.frequencies())?.to_sidedness(Sidedness::Single);
    m.insert("x_rms_grid".into(), q(spectrum.variance().sqrt(), "pm"));
    out.sections.insert("spectrum".into(), Value::Object(m));
    out.artifacts.push(spectrum_csv("thermal_spectrum.csv", &spectrum)?);
    Ok(())
}

fn run_sensitivity(ctx: &Context, out: &mut Outcome) -> Result<(), CliError> {
    let cav = ctx.cavity();
    let mode = ctx.mode()?;
    let drive = ctx.drive();
    let g = ctx.g()?;
    let floor = sensing::shot_noise_floor(cav, g, &drive, mode.omega_m)?;
    let zp = zero_point(&mode);
    let snr = snr_requirement(&mode, drive.temperature)?;

    let mut m = Map::new();
    m.insert("g".into(), rate_value(g));
    m.insert("readout".into(), json!(drive.readout.as_str()));
    m.insert("input_power".into(), q(drive.input_power, "uW"));
    m.insert("analysis_frequency".into(), q(mode.omega_m.to_hertz().0, "MHz"));
    m.insert("shot_noise_double_sided".into(), q(floor.double_sided, "m/Hz^0.5"));
    m.insert(
        "shot_noise_single_sided_homodyne".into(),
        q(floor.homodyne(Sidedness::Single), "m/Hz^0.5"),
    );
    m.insert("shot_noise_single_sided_pdh".into(), q(floor.pdh(), "m/Hz^0.5"));
    m.insert(
        "shot_noise_floor".into(),
        q(floor.single_sided(drive.readout), "m/Hz^0.5"),
    );
    m.insert(
        "zero_point_asd_single_sided".into(),
        q(zp.asd(Sidedness::Single), "am/Hz^0.5"),
    );
    m.insert(
        "shot_noise_over_zero_point".into(),
        dimensionless(floor.single_sided(drive.readout) / zp.asd(Sidedness::Single)),
    );
    m.insert("required_signal_to_background".into(), labelled(snr.db, "dB"));

    let detector = match (ctx.s.options.background_asd, ctx.s.options.detector_asd) {
        (Some(target), _) => Some(sensing::detector_floor_for_background(
            target,
            floor.single_sided(drive.readout),
        )?),
        (None, d) => d,
    };
    if let Some(det) = detector {
        let freqs = match &ctx.s.grid {
            Some(grid) => grid.frequencies(),
            None => vec![mode.omega_m.to_hertz().0],
        };
        let budget = sensing::noise_budget(cav, &mode, g, &drive, &freqs, det)?;
        m.insert("detector_floor".into(), q(det, "am/Hz^0.5"));
        m.insert("background".into(), q(budget.background_psd().sqrt(), "am/Hz^0.5"));
        m.insert(
            "signal_to_background".into(),
            labelled(budget.signal_to_background_db, "dB"),
        );
        m.insert(
            "imprecision_over_zero_point".into(),
            dimensionless(budget.imprecision_over_zero_point),
        );
        if ctx.s.grid.is_some() {
            out.artifacts.push(spectrum_csv("noise_budget.csv", &budget.total)?);
        }
    }
    out.sections.insert("sensitivity".into(), Value::Object(m));
    Ok(())
}

fn synthetic_response(ctx: &Context, mode: &MechanicalMode) -> Result<ResponseCurve, CliError> {
    let (gp, gq) = ctx.pump_probe()?;
    let grid = ctx.s.grid.as_ref().expect("checked");
    let clean = ResponseCurve::from_model(ctx.cavity(), mode, gp, gq, &grid.frequencies())?;
    let mut rng = ctx.rng();
    let sigma = ctx.s.options.noise;
    let mut noisy = ResponseCurve::new(
        clean
            .points
            .iter()
            .map(|&(f, h)| (f, add_noise(&mut rng, sigma, h).abs().max(f64::MIN_POSITIVE)))
            .collect(),
    )?;
    noisy.g_pump = clean.g_pump;
    noisy.g_probe = clean.g_probe;
    Ok(noisy)
}

fn run_response(ctx: &Context, out: &mut Outcome) -> Result<(), CliError> {
    let cav = ctx.cavity();
    let mode = ctx.mode()?;
    let (gp, gq) = ctx.pump_probe()?;
    let a1 = sensing::response_coefficient(cav, mode.m_eff, gp, gq);
    let curve = synthetic_response(ctx, &mode)?;
    let (f_dip, h_dip) = curve
        .points
        .iter()
        .copied()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("grid has >= 2 points");

    let mut m = Map::new();
    m.insert("g_pump".into(), rate_value(gp));
    m.insert("g_probe".into(), rate_value(gq));
    m.insert("g_eff".into(), rate_value((gp * gq).sqrt()));
    m.insert("a1".into(), q(a1 / (4.0 * PI * PI), "Hz^2"));
    m.insert(
        "kerr_shift_per_watt".into(),
        q(sensing::kerr_shift(cav, 1.0) / (2.0 * PI), "kHz/W"),
    );
    m.insert("dip_frequency".into(), q(f_dip, "MHz"));
    m.insert("dip_depth".into(), dimensionless(h_dip));
    m.insert(
        "resonant_magnitude".into(),
        dimensionless(sensing::response_magnitude(cav, &mode, gp, gq, mode.omega_m)),
    );
    out.sections.insert("response".into(), Value::Object(m));
    out.artifacts
        .push(pairs_csv("response.csv", "freq_hz,h_mag", curve.points.iter().copied()));
    Ok(())
}

/// Fit report for a response curve.
pub fn response_fit_section(fit: &sensing::ResponseFit) -> Value {
    let mut m = Map::new();
    m.insert("a1".into(), q(fit.a1 / (4.0 * PI * PI), "Hz^2"));
    m.insert("omega_m_hz".into(), hz(fit.omega_m));
    m.insert("gamma_m_hz".into(), hz(fit.gamma_m));
    if let Some(g) = fit.g_eff {
        m.insert("g_eff_hz_per_nm".into(), q(g / (2.0 * PI), "Hz/nm"));
    }
    m.insert("residual".into(), dimensionless(fit.residual));
    Value::Object(m)
}

fn run_fit_response(ctx: &Context, out: &mut Outcome) -> Result<(), CliError> {
    let curve = match ctx.read_data()? {
        Some(text) => model_io::read_response_curve(text.as_bytes())?,
        None => synthetic_response(ctx, &ctx.mode()?)?,
    };
    let m_eff = ctx.mode().ok().map(|m| m.m_eff);
    let fit = sensing::fit_response(&curve, ctx.s.cavity.as_ref(), m_eff)?;
    let mut section = response_fit_section(&fit);
    if let (Some(gp), Some(gq), Value::Object(m)) = (curve.g_pump, curve.g_probe, &mut section) {
        m.insert("g_eff_true_hz_per_nm".into(), q((gp * gq).sqrt() / (2.0 * PI), "Hz/nm"));
    }
    if let Value::Object(m) = &mut section {
        m.insert("points".into(), labelled(curve.points.len() as f64, "1"));
    }
    out.sections.insert("fit-response".into(), section);
    Ok(())
}

/// Fit report for a frequency-shift curve.
pub fn shift_fit_section(fit: &coupling::ExpFit, points: usize) -> Value {
    json!({
        "amplitude": q(fit.amplitude / (2.0 * PI), "GHz"),
        "decay_length": q(fit.decay_length, "nm"),
        "field_decay_length": q(2.0 * fit.decay_length, "nm"),
        "residual_norm": q(fit.residual_norm / (2.0 * PI), "Hz"),
        "points": labelled(points as f64, "1"),
    })
}

fn run_fit_shift(ctx: &Context, out: &mut Outcome) -> Result<(), CliError> {
    let curve = match ctx.read_data()? {
        Some(text) => model_io::read_shift_curve(text.as_bytes())?,
        None => {
            let cav = ctx.cavity();
            let osc = ctx.s.oscillator.as_ref().expect("checked");
            let geom = ctx.s.geometry.as_ref().expect("checked");
            let xs = separations(ctx, cav.alpha()?);
            let clean = ShiftCurve::from_model(cav, osc, geom.orientation, &xs)?;
            let mut rng = ctx.rng();
            let sigma = ctx.s.options.noise;
            ShiftCurve::new(
                clean
                    .points
                    .iter()
                    .map(|&(x, w)| (x, add_noise(&mut rng, sigma, w).min(0.0)))
                    .collect(),
                Provenance::Model,
            )?
        }
    };
    let fit = fit_exponential(&curve)?;
    let mut section = shift_fit_section(&fit, curve.points.len());
    if let (Some(cav), Value::Object(m)) = (&ctx.s.cavity, &mut section) {
        m.insert("model_decay_length".into(), q(0.5 / cav.alpha()?, "nm"));
    }
    out.sections.insert("fit-shift".into(), section);
    Ok(())
}

/// Backaction summary and the linewidth sweep.
pub fn backaction_outcome(
    cav: &Microcavity,
    mode: &MechanicalMode,
    g: f64,
    drive: &DriveCondition,
    sweep_max: Option<f64>,
    sweep_points: usize,
) -> Result<(Value, Artifact), CliError> {
    let result = backaction::backaction(cav, mode, g, drive)?;
    let p_thres = backaction::threshold_power(cav, mode, g)?;
    let slope = backaction::linewidth_slope(cav, mode, drive.input_power);
    let half = drive.with_detuning(RadPerSec(cav.kappa.0 / 2.0));
    let osc = backaction::oscillation_amplitude(cav, mode, g, &half)?;

    let mut m = Map::new();
    m.insert("g".into(), rate_value(g));
    m.insert("detuning".into(), q(drive.detuning.to_hertz().0, "MHz"));
    m.insert(
        "detuning_over_kappa".into(),
        dimensionless(drive.detuning.0 / cav.kappa.0),
    );
    m.insert("gamma_ba_hz".into(), hz(result.gamma_ba));
    m.insert("gamma_total_hz".into(), hz(result.gamma_total));
    m.insert("regime".into(), json!(result.regime.as_str()));
    m.insert("p_thres_w".into(), q(p_thres, "W"));
    // ∂(Γ/2π)/∂((g/2π)²)
    m.insert("slope".into(), q(slope * 2.0 * PI, "nm^2/Hz"));
    m.insert("a_sat_m".into(), q(backaction::saturation_amplitude(cav, g), "m"));
    m.insert("oscillation_amplitude".into(), q(osc.amplitude, "nm"));
    m.insert("modulation_depth".into(), dimensionless(osc.transmission.depth));
    m.insert("transmission_swing".into(), dimensionless(osc.transmission.absolute()));
    if result.regime == Regime::AboveThreshold {
        m.insert(
            "net_gain_hz".into(),
            hz(RadPerSec(-(mode.gamma_m.0 + result.gamma_ba.0))),
        );
    }

    let g_zero = (mode.gamma_m.0 / slope.abs()).sqrt();
    let g_max = sweep_max.unwrap_or(if g_zero.is_finite() { 1.5 * g_zero } else { 2.0 * g });
    let n = sweep_points.max(2);
    let grid: Vec<f64> = (0..n).map(|i| g_max * i as f64 / (n - 1) as f64).collect();
    let pts = backaction::linewidth_vs_coupling(cav, mode, &half, &grid)?;
    let csv = pairs_csv(
        "linewidth.csv",
        "g2_hz2_per_nm2,gamma_total_hz",
        pts.iter()
            .map(|p| (p.g2 / (4.0 * PI * PI) * 1e-18, p.gamma_total.to_hertz().0)),
    );
    Ok((Value::Object(m), csv))
}

fn run_backaction(ctx: &Context, out: &mut Outcome) -> Result<(), CliError> {
    let (section, csv) = backaction_outcome(
        ctx.cavity(),
        &ctx.mode()?,
        ctx.g()?,
        &ctx.drive(),
        ctx.s.options.g_sweep_max,
        ctx.s.options.g_sweep_points,
    )?;
    out.sections.insert("backaction".into(), section);
    out.artifacts.push(csv);
    Ok(())
}

/// Force-noise summary at Ω = Ω_m.
pub fn qba_section(
    cav: &Microcavity,
    mode: &MechanicalMode,
    g: f64,
    drive: &DriveCondition,
) -> Result<Value, CliError> {
    let w = mode.omega_m;
    let th = qba::thermal_force_psd(mode, drive.temperature)?;
    let ba = qba::qba_force_psd(cav, g, drive, w)?;
    let ratio = qba::qba_thermal_ratio(cav, mode, g, drive, w)?;
    let params = RatioParameters {
        g_mhz_per_nm: g / (2.0 * PI) * 1e-15,
        kappa_mhz: cav.kappa.to_hertz().0 * 1e-6,
        m_eff_pg: mode.m_eff * 1e15,
        quality_factor: mode.quality_factor(),
        omega_m_mhz: w.to_hertz().0 * 1e-6,
        power_uw: drive.input_power * 1e6,
        wavelength_nm: cav.wavelength * 1e9,
        temperature_k: drive.temperature,
    };
    Ok(json!({
        "g": rate_value(g),
        "s_ff_th": q(th.value, "N^2/Hz"),
        "s_ff_qba": q(ba.value, "N^2/Hz"),
        "ratio": dimensionless(ratio),
        "ratio_power_law_estimate": dimensionless(params.scaling_product()),
        "heisenberg_product_over_hbar2": dimensionless(qba::heisenberg_product_over_hbar2(cav, g, drive, w)?),
        "flux_noise": q(qba::intracavity_flux_noise(cav, drive, w)?, "Hz"),
        "sidedness": Sidedness::Double.as_str(),
    }))
}

fn run_qba(ctx: &Context, out: &mut Outcome) -> Result<(), CliError> {
    let section = qba_section(ctx.cavity(), &ctx.mode()?, ctx.g()?, &ctx.drive())?;
    out.sections.insert("qba".into(), section);
    Ok(())
}

pub fn run_scenario(s: &Scenario, base_dir: Option<&Path>) -> Result<Outcome, CliError> {
    let ctx = Context { s, base_dir };
    let mut out = Outcome::default();
    for &a in &s.analyses {
        match a {
            Analysis::Coupling => run_coupling(&ctx, &mut out)?,
            Analysis::Spectrum => run_spectrum(&ctx, &mut out)?,
            Analysis::Sensitivity => run_sensitivity(&ctx, &mut out)?,
            Analysis::Response => run_response(&ctx, &mut out)?,
            Analysis::Backaction => run_backaction(&ctx, &mut out)?,
            Analysis::Qba => run_qba(&ctx, &mut out)?,
            Analysis::FitShift => run_fit_shift(&ctx, &mut out)?,
            Analysis::FitResponse => run_fit_response(&ctx, &mut out)?,
        }
    }
    Ok(out)
}

/// Mode, coupling rate and drive for the standalone subcommands.
pub fn resolve_inputs(s: &Scenario) -> Result<(Microcavity, MechanicalMode, f64, DriveCondition), CliError> {
    let ctx = Context { s, base_dir: None };
    let missing = |what: &str| CliError::Config {
        line: None,
        message: format!("scenario needs a `{what}` section"),
    };
    let cav = s.cavity.clone().ok_or_else(|| missing("cavity"))?;
    if s.drive.is_none() {
        return Err(missing("drive"));
    }
    if s.mode.is_none() && s.oscillator.is_none() {
        return Err(missing("mode"));
    }
    if s.coupling.is_none() && (s.oscillator.is_none() || s.geometry.is_none()) {
        return Err(missing("coupling"));
    }
    Ok((cav, ctx.mode()?, ctx.g()?, ctx.drive()))
}

pub fn resolve_mode(s: &Scenario) -> Result<MechanicalMode, CliError> {
    if s.mode.is_none() && s.oscillator.is_none() {
        return Err(CliError::Config {
            line: None,
            message: "scenario needs a `mode` section".into(),
        });
    }
    Ok(Context { s, base_dir: None }.mode()?)
}
