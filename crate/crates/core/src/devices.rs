//! Toroid microcavity and nanomechanical oscillator geometry.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::units::{Hertz, RadPerSec, C};

/// Bulk refractive index of silica.
pub const SILICA_INDEX: f64 = 1.45;
/// Effective index of a silica-guided whispering-gallery mode. Assumed value,
/// slightly below the bulk index.
pub const DEFAULT_EFFECTIVE_INDEX: f64 = 1.44;
/// Kerr coefficient of silica, 3e-16 cm²/W expressed in m²/W.
pub const SILICA_KERR: f64 = 3e-20;
/// Density assumed for LPCVD silicon nitride (kg/m³).
pub const DEFAULT_SIN_DENSITY: f64 = 3100.0;
/// Refractive index of silicon nitride.
pub const SIN_INDEX: f64 = 2.05;

/// Toroid microcavity geometry and the parameters of its optical mode.
#[derive(Debug, Clone, PartialEq)]
pub struct Microcavity {
    /// Major radius R (m).
    pub major_radius: f64,
    /// Minor radius r (m).
    pub minor_radius: f64,
    /// Vacuum wavelength λ (m).
    pub wavelength: f64,
    /// Material refractive index n.
    pub index: f64,
    /// Mode-averaged effective index n_eff.
    pub effective_index: f64,
    /// Energy decay rate κ.
    pub kappa: RadPerSec,
    /// Optical mode diameter (m).
    pub mode_diameter: f64,
    /// Fraction ξ of the peak field present at the surface.
    pub surface_field: f64,
    /// Kerr coefficient n₂ (m²/W).
    pub kerr_coefficient: f64,
    /// Measured field decay length 1/α (m). When absent, 1/α follows from n and λ.
    pub decay_length: Option<f64>,
}

impl Microcavity {
    pub fn validate(&self) -> Result<()> {
        if !(self.minor_radius > 0.0 && self.major_radius > self.minor_radius) {
            return Err(Error::invalid("cavity", "need R > r > 0"));
        }
        if self.index <= 1.0 {
            return Err(Error::NonEvanescent(self.index));
        }
        if !(self.surface_field > 0.0 && self.surface_field <= 1.0) {
            return Err(Error::invalid("cavity.surface_field", "need 0 < xi <= 1"));
        }
        if self.kappa.0 <= 0.0 {
            return Err(Error::invalid("cavity.kappa", "need kappa > 0"));
        }
        if !(self.mode_diameter > 0.0 && self.mode_diameter < 2.0 * self.minor_radius) {
            return Err(Error::invalid("cavity.mode_diameter", "need 0 < D_mode < 2r"));
        }
        if self.wavelength <= 0.0 || self.effective_index <= 0.0 {
            return Err(Error::invalid("cavity", "wavelength and n_eff must be positive"));
        }
        if let Some(l) = self.decay_length {
            if l <= 0.0 {
                return Err(Error::invalid("cavity.decay_length", "must be positive"));
            }
        }
        Ok(())
    }

    /// Optical angular frequency ω0 = 2πc/λ.
    pub fn omega0(&self) -> f64 {
        2.0 * PI * C / self.wavelength
    }

    /// Evanescent field decay constant α (1/m), from the measured decay
    /// length when given, otherwise from [`decay_constant`].
    pub fn alpha(&self) -> Result<f64> {
        match self.decay_length {
            Some(l) => Ok(1.0 / l),
            None => decay_constant(self.wavelength, self.index),
        }
    }

    /// V_cav = 2πR · π(D_mode/2)².
    pub fn mode_volume(&self) -> f64 {
        2.0 * PI * self.major_radius * self.mode_area()
    }

    /// Circular mode cross-section π(D_mode/2)².
    pub fn mode_area(&self) -> f64 {
        PI * (self.mode_diameter / 2.0).powi(2)
    }

    /// Finesse F = c/(n_eff R κ).
    pub fn finesse(&self) -> f64 {
        C / (self.effective_index * self.major_radius * self.kappa.0)
    }

    /// Round-trip time τ_rt = 2πR n_eff / c.
    pub fn roundtrip_time(&self) -> f64 {
        2.0 * PI * self.major_radius * self.effective_index / C
    }

    pub fn sampling_lengths(&self) -> Result<SamplingLengths> {
        Ok(sampling_lengths(self.major_radius, self.minor_radius, self.alpha()?))
    }
}

/// α = 2π√(n²−1)/λ.
pub fn decay_constant(wavelength: f64, index: f64) -> Result<f64> {
    if index <= 1.0 {
        return Err(Error::NonEvanescent(index));
    }
    Ok(2.0 * PI * (index * index - 1.0).sqrt() / wavelength)
}

/// Transverse lengths over which the curved evanescent field samples a
/// tangentially placed object.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingLengths {
    /// Across the minor circumference, √(πr/α).
    pub lx: f64,
    /// Along the propagation direction, √(πR/α).
    pub ly: f64,
}

pub fn sampling_lengths(major_radius: f64, minor_radius: f64, alpha: f64) -> SamplingLengths {
    SamplingLengths {
        lx: (PI * minor_radius / alpha).sqrt(),
        ly: (PI * major_radius / alpha).sqrt(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OscillatorKind {
    String,
    Sheet,
}

impl OscillatorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            OscillatorKind::String => "string",
            OscillatorKind::Sheet => "sheet",
        }
    }
}

/// Doubly clamped string or sheet. For sheets `length` and `width` are the
/// two lateral extents.
#[derive(Debug, Clone, PartialEq)]
pub struct NanoOscillator {
    pub kind: OscillatorKind,
    pub length: f64,
    pub width: f64,
    pub thickness: f64,
    /// Density ρ (kg/m³).
    pub density: f64,
    /// Tensile stress S (Pa).
    pub stress: f64,
    pub refractive_index: f64,
    pub quality_factor: f64,
    pub mode_index: u32,
}

impl NanoOscillator {
    pub fn validate(&self) -> Result<()> {
        if !(self.length > 0.0 && self.width > 0.0 && self.thickness > 0.0) {
            return Err(Error::invalid("oscillator", "dimensions must be positive"));
        }
        if self.density <= 0.0 {
            return Err(Error::invalid("oscillator.density", "must be positive"));
        }
        if self.quality_factor <= 1.0 {
            return Err(Error::invalid("oscillator.quality_factor", "need Q > 1"));
        }
        if self.mode_index == 0 {
            return Err(Error::invalid("oscillator.mode_index", "modes start at 1"));
        }
        if self.stress < 0.0 {
            return Err(Error::invalid("oscillator.stress", "must be non-negative"));
        }
        Ok(())
    }

    /// m = ρ t w L.
    pub fn physical_mass(&self) -> f64 {
        self.density * self.thickness * self.width * self.length
    }

    /// Stress-dominated string eigenfrequency f_n = (n/2L)√(S/ρ).
    pub fn string_mode_frequency(&self) -> Result<Hertz> {
        self.mode_frequency(self.mode_index)
    }

    pub fn mode_frequency(&self, n: u32) -> Result<Hertz> {
        if self.kind != OscillatorKind::String {
            return Err(Error::NotAString);
        }
        Ok(Hertz(
            f64::from(n) / (2.0 * self.length) * (self.stress / self.density).sqrt(),
        ))
    }

    /// Tensile stress implied by a measured fundamental frequency, S = ρ(2L f₁)².
    pub fn infer_stress(&self, measured_f1: Hertz) -> f64 {
        self.density * (2.0 * self.length * measured_f1.0).powi(2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// String tangential to the rim, parallel to the propagating mode.
    Horizontal,
    /// String perpendicular to the propagation direction.
    Vertical,
    Sheet,
}

impl Orientation {
    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::Horizontal => "horizontal",
            Orientation::Vertical => "vertical",
            Orientation::Sheet => "sheet",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingGeometry {
    /// Surface-to-surface separation x0 (m).
    pub separation: f64,
    pub orientation: Orientation,
    /// Lateral position in a standing-wave pattern as the phase 2k·y (rad).
    pub standing_wave_phase: f64,
}

impl CouplingGeometry {
    pub fn new(separation: f64, orientation: Orientation) -> Self {
        CouplingGeometry {
            separation,
            orientation,
            standing_wave_phase: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.separation >= 0.0) {
            return Err(Error::invalid("geometry.separation", "need x0 >= 0"));
        }
        Ok(())
    }
}
