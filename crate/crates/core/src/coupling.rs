//! Evanescent frequency shift and optomechanical coupling rates.
//!
//! Coordinates increase away from the cavity. Approaching a dielectric
//! red-shifts the mode, so Δω0 < 0 and g = ∂ω0/∂x0 > 0; the per-photon force
//! −ħg is attractive.

use std::f64::consts::PI;

use crate::devices::{CouplingGeometry, Microcavity, NanoOscillator, Orientation, OscillatorKind};
use crate::error::{Error, Result};
use crate::lsq::{levenberg_marquardt, LmOptions};
use crate::units::{RadPerSec, HBAR};

/// Linear coupling rate at a given separation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingRate {
    /// g in rad/s per m.
    pub g: f64,
    pub separation: f64,
    pub geometry: CouplingGeometry,
}

impl CouplingRate {
    /// g/2π in Hz/m.
    pub fn hz_per_m(&self) -> f64 {
        self.g / (2.0 * PI)
    }
}

/// Finite-thickness factor (1 − e^{−2αt})/(2α); tends to t for thin films.
pub fn thickness_factor(alpha: f64, thickness: f64) -> f64 {
    -(-2.0 * alpha * thickness).exp_m1() / (2.0 * alpha)
}

/// Area Ã of the oscillator seen by the evanescent field.
pub fn sampled_area(cav: &Microcavity, osc: &NanoOscillator, geom: &CouplingGeometry) -> Result<f64> {
    let lengths = cav.sampling_lengths()?;
    match (osc.kind, geom.orientation) {
        (OscillatorKind::String, Orientation::Horizontal) => Ok(osc.width * lengths.ly),
        (OscillatorKind::String, Orientation::Vertical) => Ok(osc.width * lengths.lx),
        (OscillatorKind::Sheet, Orientation::Sheet) => Ok(lengths.lx * lengths.ly),
        (kind, orientation) => Err(Error::GeometryMismatch {
            kind: kind.as_str(),
            orientation: orientation.as_str(),
        }),
    }
}

// Common factor (Ã/V)·[(1−e^{−2αt})/2α]·(n²−1)·ξ² shared by shift and rate.
fn overlap_factor(cav: &Microcavity, osc: &NanoOscillator, geom: &CouplingGeometry) -> Result<(f64, f64)> {
    let alpha = cav.alpha()?;
    let area = sampled_area(cav, osc, geom)?;
    let n2 = osc.refractive_index * osc.refractive_index;
    let factor =
        area / cav.mode_volume() * thickness_factor(alpha, osc.thickness) * (n2 - 1.0) * cav.surface_field.powi(2);
    Ok((alpha, factor))
}

fn shift_at(cav: &Microcavity, osc: &NanoOscillator, geom: &CouplingGeometry, x0: f64) -> Result<f64> {
    let (alpha, factor) = overlap_factor(cav, osc, geom)?;
    Ok(-0.5 * cav.omega0() * factor * (-2.0 * alpha * x0).exp())
}

/// Static cavity frequency shift Δω0 (rad/s) induced by the oscillator.
pub fn frequency_shift(cav: &Microcavity, osc: &NanoOscillator, geom: &CouplingGeometry) -> Result<f64> {
    geom.validate()?;
    shift_at(cav, osc, geom, geom.separation)
}

/// Thin-film approximation of [`frequency_shift`], replacing the
/// finite-thickness factor by t. Only accurate for 2αt ≪ 1.
pub fn frequency_shift_thin(cav: &Microcavity, osc: &NanoOscillator, geom: &CouplingGeometry) -> Result<f64> {
    geom.validate()?;
    let alpha = cav.alpha()?;
    let area = sampled_area(cav, osc, geom)?;
    let n2 = osc.refractive_index * osc.refractive_index;
    Ok(-0.5 * cav.omega0() * area * osc.thickness / cav.mode_volume()
        * (n2 - 1.0)
        * cav.surface_field.powi(2)
        * (-2.0 * alpha * geom.separation).exp())
}

/// Linear coupling rate g = ω0 α (Ã/V) [(1−e^{−2αt})/2α] (n²−1) ξ² e^{−2αx0}.
pub fn coupling_rate(cav: &Microcavity, osc: &NanoOscillator, geom: &CouplingGeometry) -> Result<CouplingRate> {
    geom.validate()?;
    let (alpha, factor) = overlap_factor(cav, osc, geom)?;
    Ok(CouplingRate {
        g: cav.omega0() * alpha * factor * (-2.0 * alpha * geom.separation).exp(),
        separation: geom.separation,
        geometry: *geom,
    })
}

/// Horizontal-to-vertical coupling ratio √(R/r).
pub fn coupling_ratio_hv(cav: &Microcavity) -> f64 {
    (cav.major_radius / cav.minor_radius).sqrt()
}

/// Relative deviation between a central finite difference of
/// [`frequency_shift`] with step `h` and the analytic [`coupling_rate`].
pub fn numeric_g_check(cav: &Microcavity, osc: &NanoOscillator, geom: &CouplingGeometry, h: f64) -> Result<f64> {
    let alpha = cav.alpha()?;
    if !(h > 0.0 && h < 1.0 / (10.0 * alpha)) {
        return Err(Error::invalid("h", format!("step must lie in (0, 1/(10α)), got {h:e}")));
    }
    let g = coupling_rate(cav, osc, geom)?.g;
    let x0 = geom.separation;
    let g_fd = (shift_at(cav, osc, geom, x0 + h)? - shift_at(cav, osc, geom, x0 - h)?) / (2.0 * h);
    Ok((g_fd - g).abs() / g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Model,
    Measured,
}

/// Frequency shift sampled against separation.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftCurve {
    /// (x0 in m, Δω0 in rad/s).
    pub points: Vec<(f64, f64)>,
    pub provenance: Provenance,
}

impl ShiftCurve {
    pub fn new(points: Vec<(f64, f64)>, provenance: Provenance) -> Result<Self> {
        if points.iter().any(|(x, y)| !(x.is_finite() && y.is_finite())) {
            return Err(Error::invalid("shift_curve", "non-finite sample"));
        }
        if points.iter().any(|(_, y)| *y > 0.0) {
            return Err(Error::invalid("shift_curve", "frequency shifts must be <= 0"));
        }
        Ok(ShiftCurve { points, provenance })
    }

    /// Samples [`frequency_shift`] at each separation.
    pub fn from_model(
        cav: &Microcavity,
        osc: &NanoOscillator,
        orientation: Orientation,
        separations: &[f64],
    ) -> Result<Self> {
        let points = separations
            .iter()
            .map(|&x| Ok((x, frequency_shift(cav, osc, &CouplingGeometry::new(x, orientation))?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ShiftCurve {
            points,
            provenance: Provenance::Model,
        })
    }
}

/// Result of fitting Δω0(x0) = A·e^{−x0/ℓ}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpFit {
    /// A in rad/s (negative for a red shift).
    pub amplitude: f64,
    /// ℓ in m; equals 1/(2α) for an evanescent intensity overlap.
    pub decay_length: f64,
    pub residual_norm: f64,
}

/// Fits A·e^{−x0/ℓ} by log-linear least squares followed by damped
/// Gauss–Newton refinement in the original domain.
pub fn fit_exponential(curve: &ShiftCurve) -> Result<ExpFit> {
    let mut pts = curve.points.clone();
    if pts.len() < 2 {
        return Err(Error::IllConditioned("need at least 2 points".into()));
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let x_min = pts[0].0;
    let x_max = pts[pts.len() - 1].0;
    if x_max - x_min <= 0.0 {
        return Err(Error::IllConditioned("all separations are equal".into()));
    }
    let sign = if pts[0].1 < 0.0 { -1.0 } else { 1.0 };
    if pts.iter().any(|(_, y)| *y == 0.0 || y.signum() != sign) {
        return Err(Error::IllConditioned("shifts must be non-zero and of one sign".into()));
    }

    // Log-domain initialisation, centred on the mean separation for conditioning.
    let n = pts.len() as f64;
    let x_mean = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let logs: Vec<f64> = pts.iter().map(|p| (p.1 * sign).ln()).collect();
    let l_mean = logs.iter().sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - x_mean).powi(2)).sum();
    let sxy: f64 = pts.iter().zip(&logs).map(|(p, l)| (p.0 - x_mean) * (l - l_mean)).sum();
    let slope = sxy / sxx;
    if !(slope < 0.0) {
        return Err(Error::IllConditioned(
            "shift magnitude does not decay with separation".into(),
        ));
    }
    let decay0 = -1.0 / slope;
    let amp0 = sign * (l_mean - slope * x_mean).exp();

    // Refine in the original domain with the amplitude referenced to x_min.
    let ref_amp0 = amp0 * (-(x_min) / decay0).exp();
    let residuals = |p: &[f64]| -> Option<Vec<f64>> {
        let (a, l) = (p[0], p[1]);
        if !(l > 0.0) {
            return None;
        }
        Some(pts.iter().map(|(x, y)| a * (-(x - x_min) / l).exp() - y).collect())
    };
    let sol = levenberg_marquardt(
        residuals,
        &[ref_amp0, decay0],
        &[ref_amp0.abs(), decay0],
        LmOptions::default(),
    )
    .ok_or_else(|| Error::IllConditioned("refinement left the model domain".into()))?;

    let (a_ref, decay) = (sol.params[0], sol.params[1]);
    Ok(ExpFit {
        amplitude: a_ref * (x_min / decay).exp(),
        decay_length: decay,
        residual_norm: sol.residual_norm,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandingWaveBranch {
    /// Δω0 ∝ (1 + cos 2ky): oscillator at an antinode for y = 0.
    Antinode,
    /// Δω0 ∝ (1 − cos 2ky): oscillator at a node for y = 0.
    Node,
}

/// Split-mode standing-wave profile of a scatterer-coupled resonator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandingWave {
    /// Peak shift Δω̄ (rad/s). No scattering model; supplied by the user.
    pub depth: RadPerSec,
    pub branch: StandingWaveBranch,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandingWaveShift {
    /// Δω0(y) in rad/s.
    pub shift: f64,
    /// g⁽¹⁾ = ∂Δω0/∂y (rad/s/m).
    pub first_derivative: f64,
    /// g⁽²⁾ = ∂²Δω0/∂y² (rad/s/m²).
    pub second_derivative: f64,
}

/// Guided wavenumber k = 2πn/λ.
pub fn guided_wavenumber(cav: &Microcavity) -> f64 {
    2.0 * PI * cav.index / cav.wavelength
}

/// Lateral period of the standing-wave pattern, λ/2n.
pub fn standing_wave_period(cav: &Microcavity) -> f64 {
    cav.wavelength / (2.0 * cav.index)
}

/// Δω0(y) = Δω̄(1 ± cos 2ky)/2 and its first two lateral derivatives.
pub fn standing_wave_shift(cav: &Microcavity, wave: &StandingWave, y: f64) -> StandingWaveShift {
    let k = guided_wavenumber(cav);
    let s = match wave.branch {
        StandingWaveBranch::Antinode => 1.0,
        StandingWaveBranch::Node => -1.0,
    };
    let d = wave.depth.0;
    let phase = 2.0 * k * y;
    StandingWaveShift {
        shift: 0.5 * d * (1.0 + s * phase.cos()),
        first_derivative: -s * d * k * phase.sin(),
        second_derivative: -2.0 * s * d * k * k * phase.cos(),
    }
}

/// Same as [`standing_wave_shift`] with the position given as the phase 2ky.
pub fn standing_wave_shift_at_phase(cav: &Microcavity, wave: &StandingWave, phase: f64) -> StandingWaveShift {
    standing_wave_shift(cav, wave, phase / (2.0 * guided_wavenumber(cav)))
}

/// Magnitude of the quadratic interaction energy per photon and phonon, ħ g⁽²⁾ y_zp²/2 (J).
pub fn quadratic_coupling_energy(g2: f64, y_zp: f64) -> f64 {
    HBAR * g2 * y_zp * y_zp / 2.0
}
