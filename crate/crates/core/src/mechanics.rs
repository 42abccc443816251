//! String mode shapes, probe-weighted effective mass and displacement spectra.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::devices::{Microcavity, NanoOscillator};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, Tolerance};
use crate::units::{Dimension, RadPerSec, Sidedness, SpectralDensity, HBAR, K_B};

/// Mode pattern u_n(y) with unit peak amplitude on y ∈ [−L/2, L/2]:
/// cos(nπy/L) for odd n, sin(nπy/L) for even n.
///
/// Only the fundamental is a measured shape; higher orders are the ideal
/// string extrapolation.
pub fn mode_shape(length: f64, n: u32, y: f64) -> Result<f64> {
    let half = length / 2.0;
    if y.abs() > half * (1.0 + 1e-12) {
        return Err(Error::OutOfDomain { y, half_length: half });
    }
    Ok(shape_normalized(n, y / length))
}

// u_n as a function of s = y/L ∈ [−1/2, 1/2].
fn shape_normalized(n: u32, s: f64) -> f64 {
    let arg = f64::from(n) * PI * s;
    if n % 2 == 1 {
        arg.cos()
    } else {
        arg.sin()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProbeShape {
    /// Gaussian intensity v0² = e^{−π y²/l²}/l, width set by the sampling length l.
    Gaussian { sampling_length: f64 },
    /// Point-like measurement, v0² = δ(y).
    Delta,
    /// Tabulated (y, v0²) samples, linearly interpolated and zero outside.
    Table(Vec<(f64, f64)>),
}

/// Optical intensity profile sampling the string, normalised to ∫v0² dy = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeProfile {
    pub shape: ProbeShape,
    /// Lateral offset of the profile center from the string center (m).
    pub center_offset: f64,
}

impl ProbeProfile {
    pub fn delta() -> Self {
        ProbeProfile {
            shape: ProbeShape::Delta,
            center_offset: 0.0,
        }
    }

    pub fn gaussian(sampling_length: f64) -> Self {
        ProbeProfile {
            shape: ProbeShape::Gaussian { sampling_length },
            center_offset: 0.0,
        }
    }

    /// Gaussian with the cavity's longitudinal sampling length l_y.
    pub fn for_cavity(cav: &Microcavity) -> Result<Self> {
        Ok(ProbeProfile::gaussian(cav.sampling_lengths()?.ly))
    }

    /// Normalises tabulated intensities so their trapezoid integral is 1.
    pub fn table(mut samples: Vec<(f64, f64)>, center_offset: f64) -> Result<Self> {
        samples.sort_by(|a, b| a.0.total_cmp(&b.0));
        if samples.len() < 2 || samples.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::invalid(
                "probe.table",
                "need >= 2 distinct, increasing positions",
            ));
        }
        if samples.iter().any(|(_, v)| !(*v >= 0.0 && v.is_finite())) {
            return Err(Error::invalid("probe.table", "intensities must be finite and >= 0"));
        }
        let norm: f64 = samples
            .windows(2)
            .map(|w| 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0))
            .sum();
        if norm <= 0.0 {
            return Err(Error::invalid("probe.table", "profile integrates to zero"));
        }
        for s in &mut samples {
            s.1 /= norm;
        }
        Ok(ProbeProfile {
            shape: ProbeShape::Table(samples),
            center_offset,
        })
    }
}

// ∫ u_n(y) v0(y)² dy over the string, in the normalised coordinate s = y/L.
fn overlap(length: f64, n: u32, probe: &ProbeProfile, tol: Tolerance) -> Result<f64> {
    let c = probe.center_offset / length;
    match &probe.shape {
        ProbeShape::Delta => {
            if c.abs() > 0.5 {
                return Ok(0.0);
            }
            Ok(shape_normalized(n, c))
        }
        ProbeShape::Gaussian { sampling_length } => {
            let w = sampling_length / length;
            if !(w > 0.0) {
                return Err(Error::invalid("probe.sampling_length", "must be positive"));
            }
            // v0² dy = e^{−π(s−c)²/w²}/w ds
            let f = |s: f64| shape_normalized(n, s) * (-PI * ((s - c) / w).powi(2)).exp() / w;
            let breaks: Vec<f64> = [-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0]
                .iter()
                .map(|k| c + k * w)
                .collect();
            Ok(integrate(f, -0.5, 0.5, &breaks, tol)?.value)
        }
        ProbeShape::Table(samples) => {
            let mut total = 0.0;
            for seg in samples.windows(2) {
                let (y0, v0) = seg[0];
                let (y1, v1) = seg[1];
                let (s0, s1) = (y0 / length + c, y1 / length + c);
                let (lo, hi) = (s0.max(-0.5), s1.min(0.5));
                if hi <= lo {
                    continue;
                }
                // Intensity per unit s is L·v0².
                let f = |s: f64| {
                    let t = (s - s0) / (s1 - s0);
                    shape_normalized(n, s) * (v0 + t * (v1 - v0)) * length
                };
                total += integrate(f, lo, hi, &[], tol)?.value;
            }
            Ok(total)
        }
    }
}

/// Mean squared mode amplitude along the string, (1/L)∫u_n² dy.
pub fn mean_square_amplitude(n: u32) -> Result<f64> {
    Ok(integrate(
        |s| shape_normalized(n, s).powi(2),
        -0.5,
        0.5,
        &[0.0],
        Tolerance::default(),
    )?
    .value)
}

/// m_eff = m ⟨u_n²⟩ / (∫u_n v0² dy)², evaluated by adaptive quadrature.
pub fn effective_mass(osc: &NanoOscillator, probe: &ProbeProfile, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("mode_index", "modes start at 1"));
    }
    let tol = Tolerance::default();
    let mean_sq = mean_square_amplitude(n)?;
    let ov = overlap(osc.length, n, probe, tol)?;
    let threshold = 1e-12 * mean_sq.sqrt();
    if ov.abs() < threshold {
        return Err(Error::DivergentMass {
            mode_index: n,
            overlap: ov,
            threshold,
        });
    }
    Ok(osc.physical_mass() * mean_sq / (ov * ov))
}

/// β⁻¹ = (π l_y/L)², the sampling length relative to the string length.
pub fn beta_inverse(sampling_length: f64, length: f64) -> f64 {
    (PI * sampling_length / length).powi(2)
}

/// m_eff/m of the fundamental under a centered Gaussian probe in reduced form,
/// ½ β⁻¹ / (∫_{−π/2}^{π/2} cos(u) e^{−πβu²} du)².
pub fn fundamental_mass_ratio(beta_inv: f64) -> Result<f64> {
    if beta_inv < 0.0 {
        return Err(Error::invalid("beta_inv", "must be >= 0"));
    }
    if beta_inv == 0.0 {
        return Ok(0.5);
    }
    let beta = 1.0 / beta_inv;
    let width = 1.0 / (PI * beta).sqrt();
    let breaks: Vec<f64> = [-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0]
        .iter()
        .map(|k| k * width)
        .collect();
    let i = integrate(
        |u| u.cos() * (-PI * beta * u * u).exp(),
        -PI / 2.0,
        PI / 2.0,
        &breaks,
        Tolerance::default(),
    )?
    .value;
    Ok(0.5 * beta_inv / (i * i))
}

/// A single mechanical resonance as seen by the optical probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MechanicalMode {
    pub omega_m: RadPerSec,
    /// Intrinsic damping Γ_m = Ω_m/Q.
    pub gamma_m: RadPerSec,
    pub m_eff: f64,
    /// Physical mass, when the geometry is known.
    pub m_phys: Option<f64>,
    pub mode_index: u32,
}

impl MechanicalMode {
    pub fn new(omega_m: RadPerSec, quality_factor: f64, m_eff: f64) -> Result<Self> {
        if !(omega_m.0 > 0.0) {
            return Err(Error::invalid("mode.omega_m", "must be positive"));
        }
        if !(quality_factor > 1.0) {
            return Err(Error::invalid("mode.quality_factor", "need Q > 1"));
        }
        if !(m_eff > 0.0) {
            return Err(Error::invalid("mode.m_eff", "must be positive"));
        }
        Ok(MechanicalMode {
            omega_m,
            gamma_m: RadPerSec(omega_m.0 / quality_factor),
            m_eff,
            m_phys: None,
            mode_index: 1,
        })
    }

    /// Mode `osc.mode_index` of a string, with its frequency from the stress
    /// and its mass weighted by `probe`.
    pub fn from_oscillator(osc: &NanoOscillator, probe: &ProbeProfile) -> Result<Self> {
        osc.validate()?;
        let omega = osc.string_mode_frequency()?.to_angular();
        let m_eff = effective_mass(osc, probe, osc.mode_index)?;
        let mut mode = MechanicalMode::new(omega, osc.quality_factor, m_eff)?;
        mode.m_phys = Some(osc.physical_mass());
        mode.mode_index = osc.mode_index;
        Ok(mode)
    }

    pub fn quality_factor(&self) -> f64 {
        self.omega_m.0 / self.gamma_m.0
    }

    /// Zero-point amplitude √(ħ/(2 m_eff Ω_m)).
    pub fn x_zp(&self) -> f64 {
        (HBAR / (2.0 * self.m_eff * self.omega_m.0)).sqrt()
    }
}

/// χ_m[Ω] = 1/(m_eff(Ω_m² − Ω² − iΩΓ_m)) in m/N.
pub fn susceptibility(mode: &MechanicalMode, omega: RadPerSec) -> Complex64 {
    let (wm, w, g) = (mode.omega_m.0, omega.0, mode.gamma_m.0);
    1.0 / (mode.m_eff * Complex64::new(wm * wm - w * w, -w * g))
}

fn thermal_psd_double(mode: &MechanicalMode, temperature: f64, f_hz: f64) -> f64 {
    let chi = susceptibility(mode, RadPerSec::from_hz(f_hz));
    2.0 * mode.m_eff * mode.gamma_m.0 * K_B * temperature * chi.norm_sqr()
}

/// Brownian displacement spectrum on `frequencies` (Hz), stored double-sided:
/// S_xx = 2 m_eff Γ_m k_B T |χ_m|² (single-sided is twice this).
pub fn thermal_spectrum(mode: &MechanicalMode, temperature: f64, frequencies: &[f64]) -> Result<SpectralDensity> {
    if !(temperature >= 0.0) {
        return Err(Error::invalid("temperature", "must be >= 0"));
    }
    let values: Vec<f64> = frequencies
        .par_iter()
        .map(|&f| thermal_psd_double(mode, temperature, f))
        .collect();
    SpectralDensity::new(
        frequencies.to_vec(),
        values,
        Sidedness::Double,
        Dimension::AREA / Dimension::FREQUENCY,
    )
}

/// Single-sided peak level 4 k_B T Q/(m_eff Ω_m³).
pub fn thermal_peak_single_sided(mode: &MechanicalMode, temperature: f64) -> f64 {
    4.0 * K_B * temperature * mode.quality_factor() / (mode.m_eff * mode.omega_m.0.powi(3))
}

/// Equipartition variance k_B T/(m_eff Ω_m²).
pub fn thermal_variance(mode: &MechanicalMode, temperature: f64) -> f64 {
    K_B * temperature / (mode.m_eff * mode.omega_m.0.powi(2))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RmsMethod {
    /// Closed-form Lorentzian integral.
    Analytic,
    /// Adaptive quadrature of the spectrum over the given band (Hz).
    Numeric { f_min: f64, f_max: f64 },
}

impl RmsMethod {
    pub fn numeric(f_min: f64, f_max: f64) -> Self {
        RmsMethod::Numeric { f_min, f_max }
    }
}

/// Thermal rms displacement (m).
pub fn thermal_rms(mode: &MechanicalMode, temperature: f64, method: RmsMethod) -> Result<f64> {
    match method {
        RmsMethod::Analytic => Ok(thermal_variance(mode, temperature).sqrt()),
        RmsMethod::Numeric { f_min, f_max } => {
            if !(f_min >= 0.0 && f_max > f_min) {
                return Err(Error::invalid("band", "need 0 <= f_min < f_max"));
            }
            let f0 = mode.omega_m.to_hertz().0;
            let hw = mode.gamma_m.to_hertz().0 / 2.0;
            let breaks: Vec<f64> = [-1e3, -1e2, -10.0, -3.0, -1.0, 0.0, 1.0, 3.0, 10.0, 1e2, 1e3]
                .iter()
                .map(|k| f0 + k * hw)
                .collect();
            // The integrand is tiny in absolute terms; integrate the spectrum
            // normalised to its peak and rescale.
            let peak = thermal_psd_double(mode, temperature, f0);
            if peak == 0.0 {
                return Ok(0.0);
            }
            let tol = Tolerance {
                absolute: 0.0,
                ..Tolerance::default()
            };
            let v = integrate(
                |f| 2.0 * thermal_psd_double(mode, temperature, f) / peak,
                f_min,
                f_max,
                &breaks,
                tol,
            )?
            .value
                * peak;
            Ok(v.sqrt())
        }
    }
}

/// Zero-point motion and the standard-quantum-limit level at resonance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroPoint {
    /// x_zp = √(ħ/(2 m_eff Ω_m)) (m).
    pub x_zp: f64,
    /// ħQ/(m_eff Ω_m²) (m²/Hz, double-sided).
    pub sql_psd_double: f64,
}

impl ZeroPoint {
    pub fn psd(&self, sidedness: Sidedness) -> f64 {
        match sidedness {
            Sidedness::Double => self.sql_psd_double,
            Sidedness::Single => 2.0 * self.sql_psd_double,
        }
    }

    /// Amplitude spectral density √S (m/√Hz).
    pub fn asd(&self, sidedness: Sidedness) -> f64 {
        self.psd(sidedness).sqrt()
    }
}

pub fn zero_point(mode: &MechanicalMode) -> ZeroPoint {
    let w = mode.omega_m.0;
    ZeroPoint {
        x_zp: mode.x_zp(),
        sql_psd_double: HBAR * mode.quality_factor() / (mode.m_eff * w * w),
    }
}

/// Signal-to-background needed to resolve motion at the zero-point level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrRequirement {
    /// n̄ = k_B T/(ħΩ_m).
    pub occupation: f64,
    /// PSD ratio 2n̄.
    pub psd_ratio: f64,
    /// Amplitude ratio √(2n̄).
    pub amplitude_ratio: f64,
    /// 10·log10(2n̄).
    pub db: f64,
}

pub fn snr_requirement(mode: &MechanicalMode, temperature: f64) -> Result<SnrRequirement> {
    if !(temperature >= 0.0) {
        return Err(Error::invalid("temperature", "must be >= 0"));
    }
    let occupation = K_B * temperature / (HBAR * mode.omega_m.0);
    let psd_ratio = 2.0 * occupation;
    Ok(SnrRequirement {
        occupation,
        psd_ratio,
        amplitude_ratio: psd_ratio.sqrt(),
        db: 10.0 * psd_ratio.log10(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::si_string;
    use crate::units::FrequencyGrid;
    use proptest::prelude::*;

    fn readout_mode() -> MechanicalMode {
        MechanicalMode::new(RadPerSec::from_hz(8e6), 4e4, 4.9e-15).unwrap()
    }

    #[test]
    fn mode_shape_examples() {
        let l = 25e-6;
        assert_eq!(mode_shape(l, 1, 0.0).unwrap(), 1.0);
        assert!(mode_shape(l, 1, l / 2.0).unwrap().abs() < 1e-15);
        assert!(mode_shape(l, 1, -l / 2.0).unwrap().abs() < 1e-15);
        assert_eq!(mode_shape(l, 2, 0.0).unwrap(), 0.0);
        assert!(matches!(mode_shape(l, 1, l), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn delta_probe_gives_half_mass() {
        let osc = si_string();
        let m = effective_mass(&osc, &ProbeProfile::delta(), 1).unwrap();
        assert!((m / osc.physical_mass() - 0.5).abs() < 1e-12);
        let m3 = effective_mass(&osc, &ProbeProfile::delta(), 3).unwrap();
        assert!((m3 / osc.physical_mass() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn antisymmetric_mode_diverges() {
        let osc = si_string();
        let probe = ProbeProfile::gaussian(4.5e-6);
        assert!(matches!(
            effective_mass(&osc, &probe, 2),
            Err(Error::DivergentMass { .. })
        ));
        assert!(matches!(
            effective_mass(&osc, &ProbeProfile::delta(), 2),
            Err(Error::DivergentMass { .. })
        ));
        // Off-center probing restores a finite mass.
        let shifted = ProbeProfile {
            center_offset: 3e-6,
            ..probe
        };
        assert!(effective_mass(&osc, &shifted, 2).is_ok());
    }

    #[test]
    fn short_string_beta_and_deviation() {
        let ly = (PI * 30e-6 * 220e-9f64).sqrt();
        let b = beta_inverse(ly, 15e-6);
        assert!((b - 0.91).abs() < 0.005, "{b}");
        let mut osc = si_string();
        osc.length = 15e-6;
        let ratio = effective_mass(&osc, &ProbeProfile::gaussian(ly), 1).unwrap() / osc.physical_mass();
        // About 16% above the point-probe value m/2 for the shortest strings.
        assert!(ratio > 0.55 && ratio < 0.62, "{ratio}");
        assert!((ratio - fundamental_mass_ratio(b).unwrap()).abs() < 1e-9 * ratio);
    }

    #[test]
    fn table_probe_matches_gaussian() {
        let osc = si_string();
        let l = 4.5e-6;
        let samples: Vec<(f64, f64)> = (-4000..=4000)
            .map(|i| {
                let y = i as f64 * 5e-9;
                (y, (-PI * (y / l).powi(2)).exp())
            })
            .collect();
        let table = ProbeProfile::table(samples, 0.0).unwrap();
        let a = effective_mass(&osc, &table, 1).unwrap();
        let b = effective_mass(&osc, &ProbeProfile::gaussian(l), 1).unwrap();
        assert!((a / b - 1.0).abs() < 1e-5, "{a} {b}");
    }

    #[test]
    fn susceptibility_limits() {
        let mode = readout_mode();
        let w = mode.omega_m.0;
        let dc = susceptibility(&mode, RadPerSec(0.0));
        assert_eq!(dc.im, 0.0);
        assert!((dc.re - 1.0 / (mode.m_eff * w * w)).abs() < 1e-12 * dc.re);
        let res = susceptibility(&mode, mode.omega_m);
        assert!(res.re.abs() < 1e-12 * res.norm());
        assert!((res.norm() - mode.quality_factor() / (mode.m_eff * w * w)).abs() < 1e-9 * res.norm());
        let hi = susceptibility(&mode, RadPerSec(1e4 * w));
        assert!((hi.norm() * mode.m_eff * (1e4 * w).powi(2) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn thermal_peak_and_zero_temperature() {
        let mode = readout_mode();
        let s = thermal_spectrum(&mode, 300.0, &[8e6]).unwrap();
        let single = s.to_sidedness(Sidedness::Single).values()[0];
        let peak = thermal_peak_single_sided(&mode, 300.0);
        assert!((single - peak).abs() < 1e-9 * peak);
        let cold = thermal_spectrum(&mode, 0.0, &[7e6, 8e6, 9e6]).unwrap();
        assert!(cold.values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn lorentzian_half_width() {
        let mode = readout_mode();
        let f0 = 8e6;
        let hw = mode.gamma_m.to_hertz().0 / 2.0;
        let s = thermal_spectrum(&mode, 300.0, &[f0, f0 + hw]).unwrap();
        assert!((s.values()[1] / s.values()[0] - 0.5).abs() < 1e-3);
    }

    #[test]
    fn room_temperature_rms() {
        let mode = MechanicalMode::new(RadPerSec::from_hz(10.74e6), 5.3e4, 3.6e-15).unwrap();
        let analytic = thermal_rms(&mode, 300.0, RmsMethod::Analytic).unwrap();
        assert!((analytic - 16e-12).abs() < 0.1 * 16e-12, "{analytic}");
        let numeric = thermal_rms(&mode, 300.0, RmsMethod::numeric(10.74e6 / 100.0, 10.74e8)).unwrap();
        assert!((numeric / analytic - 1.0).abs() < 1e-3);
        assert_eq!(thermal_rms(&mode, 0.0, RmsMethod::numeric(1e4, 1e9)).unwrap(), 0.0);
    }

    #[test]
    fn sampled_spectrum_variance_on_refined_grid() {
        let mode = MechanicalMode::new(RadPerSec::from_hz(10.74e6), 5.3e4, 3.6e-15).unwrap();
        let grid = FrequencyGrid::new(1.074e5, 1.074e9, 2000, crate::units::Spacing::Log).unwrap();
        let hw = mode.gamma_m.to_hertz().0;
        let f = grid.refined_around(10.74e6, 200.0 * hw, 40_001);
        let s = thermal_spectrum(&mode, 300.0, &f).unwrap();
        let v = s.variance();
        assert!(
            (v / thermal_variance(&mode, 300.0) - 1.0).abs() < 1e-2,
            "{}",
            v / thermal_variance(&mode, 300.0)
        );
    }

    #[test]
    fn zero_point_level() {
        let zp = zero_point(&readout_mode());
        let asd = zp.asd(Sidedness::Single);
        assert!((asd - 820e-18).abs() < 0.03 * 820e-18, "{asd}");
        assert!((zp.psd(Sidedness::Single) - 2.0 * zp.psd(Sidedness::Double)).abs() < 1e-45);
        let mut heavy = readout_mode();
        heavy.m_eff *= 2.0;
        assert!((zero_point(&heavy).x_zp * 2f64.sqrt() - zp.x_zp).abs() < 1e-12 * zp.x_zp);
    }

    #[test]
    fn snr_for_zero_point_resolution() {
        let r = snr_requirement(&readout_mode(), 300.0).unwrap();
        assert!((r.psd_ratio - 1.56e6).abs() < 0.01e6, "{}", r.psd_ratio);
        assert!((r.db - 61.9).abs() < 0.05, "{}", r.db);
        assert!(r.db > 60.0);
        assert_eq!(snr_requirement(&readout_mode(), 0.0).unwrap().psd_ratio, 0.0);
        let hot = snr_requirement(&readout_mode(), 600.0).unwrap();
        assert!((hot.occupation - 2.0 * r.occupation).abs() < 1e-9 * hot.occupation);
    }

    #[test]
    fn from_oscillator() {
        let osc = si_string();
        let mode = MechanicalMode::from_oscillator(&osc, &ProbeProfile::delta()).unwrap();
        assert!((mode.omega_m.to_hertz().0 - osc.string_mode_frequency().unwrap().0).abs() < 1e-6);
        assert_eq!(mode.m_phys, Some(osc.physical_mass()));
        assert!(mode.m_eff >= mode.m_phys.unwrap() / 2.0 * (1.0 - 1e-12));
    }

    proptest! {
        #[test]
        fn imaginary_part_positive(f in 1.0f64..1e9) {
            let chi = susceptibility(&readout_mode(), RadPerSec::from_hz(f));
            prop_assert!(chi.im > 0.0);
        }
    }

    #[test]
    fn mass_monotone_in_beta_inverse() {
        let mut prev = fundamental_mass_ratio(0.0).unwrap();
        for i in 1..=50 {
            let r = fundamental_mass_ratio(i as f64 / 50.0).unwrap();
            assert!(r >= prev - 1e-12, "{i}: {r} < {prev}");
            prev = r;
        }
        assert!((fundamental_mass_ratio(1e-6).unwrap() - 0.5).abs() < 1e-6);
    }
}
