//! Shot-noise-limited readout, Kerr calibration response, pump-probe
//! interference and the fits that extract g, Ω_m and Γ_m from data.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::devices::Microcavity;
use crate::error::{Error, Result};
use crate::lsq::{levenberg_marquardt, LmOptions};
use crate::mechanics::{thermal_spectrum, zero_point, MechanicalMode};
use crate::units::{Dimension, RadPerSec, Sidedness, SpectralDensity, C, HBAR};

/// Amplitude penalty of single-sided Pound–Drever–Hall detection relative to
/// the double-sided quantum limit.
pub const PDH_PENALTY: f64 = 1.73;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Readout {
    Homodyne,
    Pdh,
}

impl Readout {
    pub fn as_str(self) -> &'static str {
        match self {
            Readout::Homodyne => "homodyne",
            Readout::Pdh => "pdh",
        }
    }
}

/// Input coupling of the probed optical mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingRegime {
    Critical,
    Under,
    Over,
}

impl CouplingRegime {
    pub fn as_str(self) -> &'static str {
        match self {
            CouplingRegime::Critical => "critical",
            CouplingRegime::Under => "under",
            CouplingRegime::Over => "over",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveCondition {
    /// Input power P_in (W).
    pub input_power: f64,
    /// Laser detuning Δ = ω − ω0.
    pub detuning: RadPerSec,
    /// Bath temperature (K).
    pub temperature: f64,
    pub readout: Readout,
    pub regime: CouplingRegime,
}

impl DriveCondition {
    /// Resonant, critically coupled drive.
    pub fn new(input_power: f64, temperature: f64, readout: Readout) -> Self {
        DriveCondition {
            input_power,
            detuning: RadPerSec(0.0),
            temperature,
            readout,
            regime: CouplingRegime::Critical,
        }
    }

    pub fn with_detuning(self, detuning: RadPerSec) -> Self {
        DriveCondition { detuning, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.input_power >= 0.0 && self.input_power.is_finite()) {
            return Err(Error::invalid("drive.input_power", "must be finite and >= 0"));
        }
        if !(self.temperature > 0.0 && self.temperature.is_finite()) {
            return Err(Error::invalid("drive.temperature", "must be finite and > 0"));
        }
        if !self.detuning.0.is_finite() {
            return Err(Error::invalid("drive.detuning", "must be finite"));
        }
        Ok(())
    }

    /// Input photon flux P_in/ħω0 (1/s).
    pub fn photon_flux(&self, cav: &Microcavity) -> f64 {
        self.input_power / (HBAR * cav.omega0())
    }

    pub(crate) fn require_critical(&self) -> Result<()> {
        match self.regime {
            CouplingRegime::Critical => Ok(()),
            CouplingRegime::Under => Err(Error::UnsupportedCoupling("under")),
            CouplingRegime::Over => Err(Error::UnsupportedCoupling("over")),
        }
    }
}

/// Shot-noise imprecision at one Fourier frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShotNoiseFloor {
    /// Double-sided quantum-limited amplitude density (m/√Hz).
    pub double_sided: f64,
}

impl ShotNoiseFloor {
    /// Amplitude density of an ideal quadrature readout.
    pub fn homodyne(&self, sidedness: Sidedness) -> f64 {
        match sidedness {
            Sidedness::Double => self.double_sided,
            Sidedness::Single => self.double_sided * 2f64.sqrt(),
        }
    }

    /// Single-sided amplitude density with PDH detection.
    pub fn pdh(&self) -> f64 {
        self.double_sided * PDH_PENALTY
    }

    /// Single-sided amplitude density of the given readout.
    pub fn single_sided(&self, readout: Readout) -> f64 {
        match readout {
            Readout::Homodyne => self.homodyne(Sidedness::Single),
            Readout::Pdh => self.pdh(),
        }
    }
}

/// √S = (κ/4g)(P_in/ħω0)^{−1/2}√(1+(2Ω/κ)²) for an impedance-matched cavity.
pub fn shot_noise_floor(cav: &Microcavity, g: f64, drive: &DriveCondition, omega: RadPerSec) -> Result<ShotNoiseFloor> {
    drive.require_critical()?;
    if !(g > 0.0) {
        return Err(Error::invalid("g", "must be positive"));
    }
    if drive.input_power == 0.0 {
        return Err(Error::ZeroPower);
    }
    drive.validate()?;
    let kappa = cav.kappa.0;
    let flux = drive.photon_flux(cav);
    let double_sided = kappa / (4.0 * g) / flux.sqrt() * (1.0 + (2.0 * omega.0 / kappa).powi(2)).sqrt();
    Ok(ShotNoiseFloor { double_sided })
}

/// Cavity resonance change δω0 = −ω0 n₂ δP/(n_eff A_mode) for a circulating
/// power change δP.
pub fn kerr_shift(cav: &Microcavity, delta_power: f64) -> f64 {
    -cav.omega0() * cav.kerr_coefficient * delta_power / (cav.effective_index * cav.mode_area())
}

/// (2πR n_eff² A_mode)/(c n₂ ω0²), the geometric part of the interference
/// coefficient; multiply by g_pump g_probe/m_eff to get a₁.
pub fn response_geometry_factor(cav: &Microcavity) -> f64 {
    let w0 = cav.omega0();
    2.0 * PI * cav.major_radius * cav.effective_index.powi(2) * cav.mode_area() / (C * cav.kerr_coefficient * w0 * w0)
}

/// Strength a₁ (rad²/s²) of the mechanical term relative to the Kerr response.
pub fn response_coefficient(cav: &Microcavity, m_eff: f64, g_pump: f64, g_probe: f64) -> f64 {
    g_pump * g_probe * response_geometry_factor(cav) / m_eff
}

/// Inverts a₁ for the effective force-response rate √(g_pump g_probe).
pub fn g_eff_from_coefficient(cav: &Microcavity, m_eff: f64, a1: f64) -> Result<f64> {
    if !(a1 > 0.0) {
        return Err(Error::invalid("a1", "g_eff needs an attractive (positive) coefficient"));
    }
    Ok((a1 * m_eff / response_geometry_factor(cav)).sqrt())
}

/// |1 + a₁/(Ω_m² − Ω² − iΩΓ_m)|.
pub fn interference_magnitude(a1: f64, omega_m: f64, gamma_m: f64, omega: f64) -> f64 {
    let d = Complex64::new(omega_m * omega_m - omega * omega, -omega * gamma_m);
    (1.0 + a1 / d).norm()
}

/// Pump-probe response normalised to the Kerr response.
pub fn response_magnitude(
    cav: &Microcavity,
    mode: &MechanicalMode,
    g_pump: f64,
    g_probe: f64,
    omega: RadPerSec,
) -> f64 {
    let a1 = response_coefficient(cav, mode.m_eff, g_pump, g_probe);
    interference_magnitude(a1, mode.omega_m.0, mode.gamma_m.0, omega.0)
}

/// Measured or synthetic |δω_tot/δω_Kerr| against modulation frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseCurve {
    /// (Ω/2π in Hz, magnitude).
    pub points: Vec<(f64, f64)>,
    /// Rates used to synthesise the curve, when known.
    pub g_pump: Option<f64>,
    pub g_probe: Option<f64>,
}

impl ResponseCurve {
    pub fn new(mut points: Vec<(f64, f64)>) -> Result<Self> {
        if points
            .iter()
            .any(|(f, h)| !(f.is_finite() && *f > 0.0 && h.is_finite() && *h > 0.0))
        {
            return Err(Error::invalid(
                "response",
                "frequencies and magnitudes must be finite and > 0",
            ));
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(ResponseCurve {
            points,
            g_pump: None,
            g_probe: None,
        })
    }

    pub fn from_model(
        cav: &Microcavity,
        mode: &MechanicalMode,
        g_pump: f64,
        g_probe: f64,
        frequencies: &[f64],
    ) -> Result<Self> {
        let points = frequencies
            .iter()
            .map(|&f| (f, response_magnitude(cav, mode, g_pump, g_probe, RadPerSec::from_hz(f))))
            .collect();
        let mut curve = ResponseCurve::new(points)?;
        curve.g_pump = Some(g_pump);
        curve.g_probe = Some(g_probe);
        Ok(curve)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseFit {
    /// a₁ (rad²/s²).
    pub a1: f64,
    pub omega_m: RadPerSec,
    pub gamma_m: RadPerSec,
    /// √(g_pump g_probe) (rad/s/m), present when a₁ > 0 and m_eff was given.
    pub g_eff: Option<f64>,
    /// Root-mean-square residual in H.
    pub residual: f64,
}

fn initial_guess(points: &[(f64, f64)]) -> Result<(f64, f64, f64)> {
    let n = points.len();
    let dev: Vec<f64> = points.iter().map(|(_, h)| (h - 1.0).abs()).collect();
    let (ipk, &peak) = dev
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .ok_or_else(|| Error::NoResonanceInWindow("empty curve".into()))?;
    if ipk == 0 || ipk == n - 1 {
        return Err(Error::NoResonanceInWindow(format!(
            "largest deviation sits at the window edge ({} Hz)",
            points[ipk].0
        )));
    }
    let half = peak / 2f64.sqrt();
    let left = (0..ipk).rev().find(|&i| dev[i] < half);
    let right = (ipk + 1..n).find(|&i| dev[i] < half);
    let (Some(l), Some(r)) = (left, right) else {
        return Err(Error::NoResonanceInWindow(
            "resonance is not bracketed by the frequency window".into(),
        ));
    };
    let w_pk = 2.0 * PI * points[ipk].0;
    let fwhm = 2.0 * PI * (points[r].0 - points[l].0);
    let gamma = (fwhm / 2.0).max(2.0 * PI * (points[ipk + 1].0 - points[ipk - 1].0) / 4.0);

    // The interference minimum lies on the far side of the resonance from
    // where the Kerr and mechanical responses add in phase.
    let dip_above = points[ipk..].iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let dip_below = points[..=ipk].iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let sign = if dip_above <= dip_below { 1.0 } else { -1.0 };
    let h_pk = points[ipk].1;
    let a1 = sign * ((h_pk * h_pk - 1.0).abs().sqrt().max(1e-3)) * w_pk * gamma;
    Ok((a1, w_pk, gamma))
}

/// Least-squares fit of the interference model to `curve`.
///
/// With `m_eff` and a cavity, the fitted a₁ is converted to g_eff.
pub fn fit_response(curve: &ResponseCurve, cav: Option<&Microcavity>, m_eff: Option<f64>) -> Result<ResponseFit> {
    let pts = &curve.points;
    if pts.len() < 10 {
        return Err(Error::NoResonanceInWindow(format!(
            "need >= 10 points, got {}",
            pts.len()
        )));
    }
    let (a0, w0, g0) = initial_guess(pts)?;
    let omegas: Vec<f64> = pts.iter().map(|p| 2.0 * PI * p.0).collect();
    let residuals = |p: &[f64]| -> Option<Vec<f64>> {
        if !(p[1] > 0.0 && p[2] > 0.0) {
            return None;
        }
        Some(
            omegas
                .iter()
                .zip(pts)
                .map(|(&w, &(_, h))| interference_magnitude(p[0], p[1], p[2], w) - h)
                .collect(),
        )
    };
    let opts = LmOptions {
        max_iterations: 400,
        step_tolerance: 1e-13,
        ..LmOptions::default()
    };

    let mut best: Option<(f64, [f64; 3])> = None;
    for &gscale in &[1.0, 0.5, 2.0, 0.2, 5.0] {
        for &ascale in &[1.0, 0.3, 3.0] {
            let x0 = [a0 * ascale, w0, g0 * gscale];
            let scale = [x0[0].abs(), x0[1], x0[2]];
            let Some(sol) = levenberg_marquardt(residuals, &x0, &scale, opts) else {
                continue;
            };
            let p = [sol.params[0], sol.params[1], sol.params[2]];
            let better = match best {
                None => true,
                Some((r, q)) => {
                    sol.residual_norm < r * (1.0 - 1e-9) || (sol.residual_norm <= r * (1.0 + 1e-9) && p[2] < q[2])
                }
            };
            if better {
                best = Some((sol.residual_norm, p));
            }
        }
    }
    let (rnorm, p) = best.ok_or_else(|| Error::IllConditioned("response fit did not start".into()))?;
    let g_eff = match (cav, m_eff) {
        (Some(c), Some(m)) if p[0] > 0.0 => Some(g_eff_from_coefficient(c, m, p[0])?),
        _ => None,
    };
    Ok(ResponseFit {
        a1: p[0],
        omega_m: RadPerSec(p[1]),
        gamma_m: RadPerSec(p[2]),
        g_eff,
        residual: rnorm / (pts.len() as f64).sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicG {
    /// Mean of √(S_ωω/S_xx) over the band (rad/s/m).
    pub g: f64,
    /// Standard deviation of the pointwise estimates.
    pub dispersion: f64,
    pub points: usize,
}

/// g = √(S_ωω/S_xx) averaged over Ω_m ± Γ_m.
pub fn dynamic_g(s_omega: &SpectralDensity, s_x: &SpectralDensity, mode: &MechanicalMode) -> Result<DynamicG> {
    if !s_omega.same_grid(s_x) {
        return Err(Error::GridMismatch("frequency grids differ".into()));
    }
    if s_omega.sidedness() != s_x.sidedness() {
        return Err(Error::GridMismatch(format!(
            "sidedness {} vs {}",
            s_omega.sidedness(),
            s_x.sidedness()
        )));
    }
    let f0 = mode.omega_m.to_hertz().0;
    let bw = mode.gamma_m.to_hertz().0;
    let est: Vec<f64> = s_omega
        .frequencies()
        .iter()
        .zip(s_omega.values().iter().zip(s_x.values()))
        .filter(|(f, (_, sx))| (**f - f0).abs() <= bw && **sx > 0.0)
        .map(|(_, (sw, sx))| (sw / sx).sqrt())
        .collect();
    if est.is_empty() {
        return Err(Error::NoResonanceInWindow(format!(
            "no grid points within {bw} Hz of {f0} Hz"
        )));
    }
    let n = est.len() as f64;
    let mean = est.iter().sum::<f64>() / n;
    let var = est.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    Ok(DynamicG {
        g: mean,
        dispersion: var.sqrt(),
        points: est.len(),
    })
}

/// Frequency-noise spectrum S_ωω = g² S_xx of a transduced displacement spectrum.
pub fn transduce(s_x: &SpectralDensity, g: f64) -> Result<SpectralDensity> {
    SpectralDensity::new(
        s_x.frequencies().to_vec(),
        s_x.values().iter().map(|v| g * g * v).collect(),
        s_x.sidedness(),
        s_x.unit() * Dimension::FREQUENCY.powi(2) / Dimension::AREA,
    )
}

/// Displacement-equivalent measurement record: Brownian signal over a flat
/// imprecision background.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseBudget {
    /// Signal plus background, single-sided (m²/Hz).
    pub total: SpectralDensity,
    /// Shot-noise imprecision, single-sided (m²/Hz).
    pub shot_psd: f64,
    /// Detector floor, single-sided (m²/Hz).
    pub detector_psd: f64,
    /// Thermal peak over background at Ω_m (dB).
    pub signal_to_background_db: f64,
    /// √background divided by the zero-point amplitude density.
    pub imprecision_over_zero_point: f64,
}

impl NoiseBudget {
    pub fn background_psd(&self) -> f64 {
        self.shot_psd + self.detector_psd
    }
}

/// Builds the single-sided budget. `detector_asd` is a flat displacement-
/// equivalent floor (m/√Hz). The shot floor is evaluated at Ω_m and held flat.
pub fn noise_budget(
    cav: &Microcavity,
    mode: &MechanicalMode,
    g: f64,
    drive: &DriveCondition,
    frequencies: &[f64],
    detector_asd: f64,
) -> Result<NoiseBudget> {
    if !(detector_asd >= 0.0 && detector_asd.is_finite()) {
        return Err(Error::invalid("detector_asd", "must be finite and >= 0"));
    }
    drive.validate()?;
    let shot_psd = shot_noise_floor(cav, g, drive, mode.omega_m)?
        .single_sided(drive.readout)
        .powi(2);
    let detector_psd = detector_asd * detector_asd;
    let background = shot_psd + detector_psd;
    let thermal = thermal_spectrum(mode, drive.temperature, frequencies)?.to_sidedness(Sidedness::Single);
    let total_values: Vec<f64> = thermal.values().par_iter().map(|v| v + background).collect();
    let total = SpectralDensity::new(frequencies.to_vec(), total_values, Sidedness::Single, thermal.unit())?;
    let peak = crate::mechanics::thermal_peak_single_sided(mode, drive.temperature);
    let zp = zero_point(mode).asd(Sidedness::Single);
    Ok(NoiseBudget {
        total,
        shot_psd,
        detector_psd,
        signal_to_background_db: 10.0 * (peak / background).log10(),
        imprecision_over_zero_point: background.sqrt() / zp,
    })
}

/// Detector floor that brings the total background to `target_asd` given a
/// shot-noise contribution `shot_asd` (both m/√Hz, same sidedness).
pub fn detector_floor_for_background(target_asd: f64, shot_asd: f64) -> Result<f64> {
    if shot_asd > target_asd {
        return Err(Error::invalid(
            "background",
            format!("shot noise {shot_asd:e} already exceeds the target {target_asd:e}"),
        ));
    }
    Ok((target_asd * target_asd - shot_asd * shot_asd).sqrt())
}
