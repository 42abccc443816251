//! Thermal and radiation-pressure force noise and their ratio.
//! All force spectral densities are double-sided.

use std::f64::consts::PI;

use crate::devices::Microcavity;
use crate::error::{Error, Result};
use crate::mechanics::MechanicalMode;
use crate::sensing::{shot_noise_floor, DriveCondition};
use crate::units::{RadPerSec, HBAR, K_B};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForceSource {
    Thermal,
    QuantumBackaction,
}

impl ForceSource {
    pub fn as_str(self) -> &'static str {
        match self {
            ForceSource::Thermal => "thermal",
            ForceSource::QuantumBackaction => "quantum_backaction",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceNoise {
    /// N²/Hz, double-sided.
    pub value: f64,
    pub source: ForceSource,
}

/// Langevin force density 2 m_eff Γ_m k_B T.
pub fn thermal_force_psd(mode: &MechanicalMode, temperature: f64) -> Result<ForceNoise> {
    if !(temperature >= 0.0) {
        return Err(Error::invalid("temperature", "must be >= 0"));
    }
    Ok(ForceNoise {
        value: 2.0 * mode.m_eff * mode.gamma_m.0 * K_B * temperature,
        source: ForceSource::Thermal,
    })
}

fn cavity_filter(cav: &Microcavity, omega: RadPerSec) -> f64 {
    1.0 / (1.0 + 4.0 * (omega.0 / cav.kappa.0).powi(2))
}

/// Intracavity photon-flux noise (P_in/ħω0)(F²/π²)·2/(1 + 4Ω²/κ²) in 1/s²/Hz.
pub fn intracavity_flux_noise(cav: &Microcavity, drive: &DriveCondition, omega: RadPerSec) -> Result<f64> {
    drive.require_critical()?;
    drive.validate()?;
    let f = cav.finesse();
    Ok(drive.photon_flux(cav) * f * f / (PI * PI) * 2.0 * cavity_filter(cav, omega))
}

/// Radiation-pressure force density 8(ħg/κ)²(P_in/ħω0)/(1 + 4Ω²/κ²).
pub fn qba_force_psd(cav: &Microcavity, g: f64, drive: &DriveCondition, omega: RadPerSec) -> Result<ForceNoise> {
    drive.require_critical()?;
    drive.validate()?;
    let value = 8.0 * (HBAR * g / cav.kappa.0).powi(2) * drive.photon_flux(cav) * cavity_filter(cav, omega);
    Ok(ForceNoise {
        value,
        source: ForceSource::QuantumBackaction,
    })
}

/// Same density from the flux noise, (ħ g τ_rt)² S_I.
pub fn qba_force_psd_from_flux(
    cav: &Microcavity,
    g: f64,
    drive: &DriveCondition,
    omega: RadPerSec,
) -> Result<ForceNoise> {
    let s_i = intracavity_flux_noise(cav, drive, omega)?;
    Ok(ForceNoise {
        value: (HBAR * g * cav.roundtrip_time()).powi(2) * s_i,
        source: ForceSource::QuantumBackaction,
    })
}

/// S_FF^qba/S_FF^th
/// = ħ/(m_eff Γ_m Ω)·(g/κ)²·(ħΩ/k_B T)·(P_in/ħω0)·4/(1 + 4Ω²/κ²).
pub fn qba_thermal_ratio(
    cav: &Microcavity,
    mode: &MechanicalMode,
    g: f64,
    drive: &DriveCondition,
    omega: RadPerSec,
) -> Result<f64> {
    drive.require_critical()?;
    drive.validate()?;
    let w = omega.0;
    Ok(HBAR / (mode.m_eff * mode.gamma_m.0 * w)
        * (g / cav.kappa.0).powi(2)
        * (HBAR * w / (K_B * drive.temperature))
        * drive.photon_flux(cav)
        * 4.0
        * cavity_filter(cav, omega))
}

/// Parameters of the ratio's scaling form, in laboratory units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioParameters {
    pub g_mhz_per_nm: f64,
    pub kappa_mhz: f64,
    pub m_eff_pg: f64,
    pub quality_factor: f64,
    pub omega_m_mhz: f64,
    pub power_uw: f64,
    pub wavelength_nm: f64,
    pub temperature_k: f64,
}

impl RatioParameters {
    /// The ultra-high-Q string outlook: 20 MHz/nm, 4 MHz, 15 pg, Q = 10⁶,
    /// 1 MHz, 100 µW, 780 nm, 300 K.
    pub const REFERENCE: RatioParameters = RatioParameters {
        g_mhz_per_nm: 20.0,
        kappa_mhz: 4.0,
        m_eff_pg: 15.0,
        quality_factor: 1e6,
        omega_m_mhz: 1.0,
        power_uw: 100.0,
        wavelength_nm: 780.0,
        temperature_k: 300.0,
    };

    /// Product of the power-law factors relative to [`Self::REFERENCE`].
    /// This is how the ratio scales when the cavity filter is ignored.
    pub fn scaling_product(&self) -> f64 {
        let r = RatioParameters::REFERENCE;
        (self.g_mhz_per_nm / r.g_mhz_per_nm).powi(2)
            * (r.kappa_mhz / self.kappa_mhz).powi(2)
            * (r.m_eff_pg / self.m_eff_pg)
            * (self.quality_factor / r.quality_factor)
            * (r.omega_m_mhz / self.omega_m_mhz)
            * (self.power_uw / r.power_uw)
            * (self.wavelength_nm / r.wavelength_nm)
            * (r.temperature_k / self.temperature_k)
    }

    /// Ratio at Ω = Ω_m evaluated directly.
    pub fn ratio(&self) -> f64 {
        let w = 2.0 * PI * self.omega_m_mhz * 1e6;
        let kappa = 2.0 * PI * self.kappa_mhz * 1e6;
        let g = 2.0 * PI * self.g_mhz_per_nm * 1e15;
        let m = self.m_eff_pg * 1e-15;
        let gamma = w / self.quality_factor;
        let omega0 = 2.0 * PI * crate::units::C / (self.wavelength_nm * 1e-9);
        let flux = self.power_uw * 1e-6 / (HBAR * omega0);
        HBAR / (m * gamma * w) * (g / kappa).powi(2) * (HBAR * w / (K_B * self.temperature_k)) * flux * 4.0
            / (1.0 + 4.0 * (w / kappa).powi(2))
    }

    /// Ratio from the reference value, the power-law factors and the ratio of
    /// cavity filters; identical to [`Self::ratio`].
    pub fn ratio_by_scaling(&self) -> f64 {
        let filter = |p: &RatioParameters| 1.0 / (1.0 + 4.0 * (p.omega_m_mhz / p.kappa_mhz).powi(2));
        RatioParameters::REFERENCE.ratio() * self.scaling_product() * filter(self) / filter(&RatioParameters::REFERENCE)
    }
}

/// S_xx^shot (double-sided, quantum-limited) × S_FF^qba, in units of ħ².
pub fn heisenberg_product_over_hbar2(
    cav: &Microcavity,
    g: f64,
    drive: &DriveCondition,
    omega: RadPerSec,
) -> Result<f64> {
    let sx = shot_noise_floor(cav, g, drive, omega)?.double_sided.powi(2);
    let sf = qba_force_psd(cav, g, drive, omega)?.value;
    Ok(sx * sf / (HBAR * HBAR))
}
