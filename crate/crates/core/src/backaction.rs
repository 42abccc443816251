//! Dynamical backaction under detuned drive: damping or gain, threshold of
//! the parametric instability and the self-oscillation that follows.

use crate::devices::Microcavity;
use crate::error::{Error, Result};
use crate::mechanics::MechanicalMode;
use crate::sensing::DriveCondition;
use crate::units::{RadPerSec, HBAR};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Cooling,
    Amplification,
    Neutral,
    AboveThreshold,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Cooling => "cooling",
            Regime::Amplification => "amplification",
            Regime::Neutral => "neutral",
            Regime::AboveThreshold => "above_threshold",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackactionResult {
    /// Γ_ba; negative values are gain.
    pub gamma_ba: RadPerSec,
    /// Γ_m + Γ_ba, clipped at zero above threshold.
    pub gamma_total: RadPerSec,
    pub regime: Regime,
}

fn lorentzian(kappa: f64, d: f64) -> f64 {
    1.0 / (1.0 + 4.0 * d * d / (kappa * kappa))
}

/// Γ_ba = (g x_zp/κ)² (P_in/ħω0) · 8 L(Δ) · [L(Δ+Ω_m) − L(Δ−Ω_m)],
/// with L(d) = 1/(1 + 4d²/κ²).
pub fn backaction_rate(cav: &Microcavity, mode: &MechanicalMode, g: f64, drive: &DriveCondition) -> Result<RadPerSec> {
    drive.require_critical()?;
    drive.validate()?;
    let kappa = cav.kappa.0;
    let d = drive.detuning.0;
    let w = mode.omega_m.0;
    let pre = (g * mode.x_zp() / kappa).powi(2) * drive.photon_flux(cav);
    let bracket = lorentzian(kappa, d + w) - lorentzian(kappa, d - w);
    Ok(RadPerSec(pre * 8.0 * lorentzian(kappa, d) * bracket))
}

/// Γ_ba at Δ = +κ/2: −(g x_zp/κ)² (P_in/ħω0) · 8(Ω_m/κ)/(1 + 4Ω_m⁴/κ⁴).
pub fn backaction_rate_half_detuned(cav: &Microcavity, mode: &MechanicalMode, g: f64, input_power: f64) -> RadPerSec {
    let kappa = cav.kappa.0;
    let r = mode.omega_m.0 / kappa;
    let flux = input_power / (HBAR * cav.omega0());
    RadPerSec(-(g * mode.x_zp() / kappa).powi(2) * flux * 8.0 * r / (1.0 + 4.0 * r.powi(4)))
}

pub fn classify(gamma_m: f64, gamma_ba: f64) -> Regime {
    let total = gamma_m + gamma_ba;
    if total < 0.0 {
        Regime::AboveThreshold
    } else if gamma_ba > 0.0 {
        Regime::Cooling
    } else if gamma_ba < 0.0 {
        Regime::Amplification
    } else {
        Regime::Neutral
    }
}

pub fn backaction(
    cav: &Microcavity,
    mode: &MechanicalMode,
    g: f64,
    drive: &DriveCondition,
) -> Result<BackactionResult> {
    let gamma_ba = backaction_rate(cav, mode, g, drive)?;
    Ok(BackactionResult {
        gamma_ba,
        gamma_total: RadPerSec((mode.gamma_m.0 + gamma_ba.0).max(0.0)),
        regime: classify(mode.gamma_m.0, gamma_ba.0),
    })
}

/// Input power at which the Δ = +κ/2 gain cancels intrinsic damping:
/// (ħω0/4)(m_eff Γ_m Ω_m/ħ)(κ/g)²(κ/Ω_m)(1 + 4Ω_m⁴/κ⁴).
pub fn threshold_power(cav: &Microcavity, mode: &MechanicalMode, g: f64) -> Result<f64> {
    if !(g > 0.0) {
        return Err(Error::invalid("g", "must be positive"));
    }
    let kappa = cav.kappa.0;
    let w = mode.omega_m.0;
    let r = w / kappa;
    Ok(
        HBAR * cav.omega0() / 4.0 * (mode.m_eff * mode.gamma_m.0 * w / HBAR) * (kappa / g).powi(2) / r
            * (1.0 + 4.0 * r.powi(4)),
    )
}

/// ∂Γ_total/∂(g²) at Δ = +κ/2.
pub fn linewidth_slope(cav: &Microcavity, mode: &MechanicalMode, input_power: f64) -> f64 {
    backaction_rate_half_detuned(cav, mode, 1.0, input_power).0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinewidthPoint {
    /// g² (rad²/s²/m²).
    pub g2: f64,
    /// Total linewidth Γ_total (rad/s), clipped at zero above threshold.
    pub gamma_total: RadPerSec,
}

/// Γ_total for each rate in `g_grid` with the laser at Δ = +κ/2.
pub fn linewidth_vs_coupling(
    cav: &Microcavity,
    mode: &MechanicalMode,
    drive: &DriveCondition,
    g_grid: &[f64],
) -> Result<Vec<LinewidthPoint>> {
    drive.require_critical()?;
    drive.validate()?;
    let slope = linewidth_slope(cav, mode, drive.input_power);
    Ok(g_grid
        .iter()
        .map(|&g| LinewidthPoint {
            g2: g * g,
            gamma_total: RadPerSec((mode.gamma_m.0 + slope * g * g).max(0.0)),
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillationState {
    pub threshold_power: f64,
    /// Mechanical amplitude (m); zero at or below threshold.
    pub amplitude: f64,
    pub transmission: TransmissionSwing,
}

/// Amplitude (κ/2)/g at which the motion sweeps the cavity by its half-width.
pub fn saturation_amplitude(cav: &Microcavity, g: f64) -> f64 {
    cav.kappa.0 / 2.0 / g
}

/// Steady-state self-oscillation at Δ = +κ/2. Above threshold the amplitude
/// follows (κ/2)/g·√(1 − P_thres/P_in), a phenomenological interpolation
/// between onset and saturation.
pub fn oscillation_amplitude(
    cav: &Microcavity,
    mode: &MechanicalMode,
    g: f64,
    drive: &DriveCondition,
) -> Result<OscillationState> {
    drive.require_critical()?;
    drive.validate()?;
    let p_thres = threshold_power(cav, mode, g)?;
    let amplitude = if drive.input_power <= p_thres {
        0.0
    } else {
        saturation_amplitude(cav, g) * (1.0 - p_thres / drive.input_power).sqrt()
    };
    Ok(OscillationState {
        threshold_power: p_thres,
        amplitude,
        transmission: transmission_modulation(cav, g, amplitude, RadPerSec(cav.kappa.0 / 2.0)),
    })
}

/// Critically coupled transmission 1 − 1/(1 + 4δ²/κ²).
pub fn transmission(kappa: f64, detuning: f64) -> f64 {
    1.0 - lorentzian(kappa, detuning)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmissionSwing {
    pub t_min: f64,
    pub t_max: f64,
    /// (T_max − T_min)/T_max, the fractional modulation of the transmitted power.
    pub depth: f64,
}

impl TransmissionSwing {
    /// Swing relative to off-resonant transmission (T = 1).
    pub fn absolute(&self) -> f64 {
        self.t_max - self.t_min
    }
}

/// Quasi-static transmission swing while the detuning oscillates as
/// Δ + g·a·cos(Ω_m t).
pub fn transmission_modulation(cav: &Microcavity, g: f64, amplitude: f64, detuning: RadPerSec) -> TransmissionSwing {
    let kappa = cav.kappa.0;
    let a = (g * amplitude).abs();
    let (lo, hi) = (detuning.0 - a, detuning.0 + a);
    let t_ends = (transmission(kappa, lo), transmission(kappa, hi));
    // T(δ) is monotone on each side of δ = 0, so the extremes sit at the
    // sweep ends or at resonance when it is crossed.
    let t_max = t_ends.0.max(t_ends.1);
    let t_min = if lo <= 0.0 && hi >= 0.0 {
        0.0
    } else {
        t_ends.0.min(t_ends.1)
    };
    let depth = if t_max > 0.0 { (t_max - t_min) / t_max } else { 0.0 };
    TransmissionSwing { t_min, t_max, depth }
}
