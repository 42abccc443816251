//! Physical constants, dimension-checked quantities and spectral densities.
//!
//! Internally every model works in SI with plain `f64`; [`Quantity`] is used
//! where values cross a boundary (configuration, reports) and need their
//! dimension verified. Angular and ordinary frequencies share the SI
//! dimension s⁻¹, so they get separate newtypes ([`Hertz`], [`RadPerSec`])
//! and only convert through an explicit 2π.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Div, Mul};

use crate::error::{Error, Result};

/// Reduced Planck constant (J·s).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant (J/K).
pub const K_B: f64 = 1.380_649e-23;
/// Speed of light in vacuum (m/s).
pub const C: f64 = 299_792_458.0;

const BASE_NAMES: [&str; 5] = ["m", "kg", "s", "A", "K"];

/// Exponents of (m, kg, s, A, K), stored in half-steps so that amplitude
/// spectral densities (m/√Hz) are representable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Dimension {
    halves: [i8; 5],
}

impl Dimension {
    pub const DIMENSIONLESS: Dimension = Dimension::new(0, 0, 0, 0, 0);
    pub const LENGTH: Dimension = Dimension::new(1, 0, 0, 0, 0);
    pub const MASS: Dimension = Dimension::new(0, 1, 0, 0, 0);
    pub const TIME: Dimension = Dimension::new(0, 0, 1, 0, 0);
    pub const TEMPERATURE: Dimension = Dimension::new(0, 0, 0, 0, 1);
    pub const FREQUENCY: Dimension = Dimension::new(0, 0, -1, 0, 0);
    pub const AREA: Dimension = Dimension::new(2, 0, 0, 0, 0);
    pub const VOLUME: Dimension = Dimension::new(3, 0, 0, 0, 0);
    pub const FORCE: Dimension = Dimension::new(1, 1, -2, 0, 0);
    pub const ENERGY: Dimension = Dimension::new(2, 1, -2, 0, 0);
    pub const POWER: Dimension = Dimension::new(2, 1, -3, 0, 0);
    pub const PRESSURE: Dimension = Dimension::new(-1, 1, -2, 0, 0);
    pub const ACTION: Dimension = Dimension::new(2, 1, -1, 0, 0);
    pub const DENSITY: Dimension = Dimension::new(-3, 1, 0, 0, 0);
    /// Frequency per length, the dimension of an optomechanical coupling rate.
    pub const COUPLING_RATE: Dimension = Dimension::new(-1, 0, -1, 0, 0);

    pub const fn new(length: i8, mass: i8, time: i8, current: i8, temperature: i8) -> Self {
        Dimension {
            halves: [2 * length, 2 * mass, 2 * time, 2 * current, 2 * temperature],
        }
    }

    /// Exponents as real numbers, in (m, kg, s, A, K) order.
    pub fn exponents(&self) -> [f64; 5] {
        self.halves.map(|h| f64::from(h) / 2.0)
    }

    pub fn is_dimensionless(&self) -> bool {
        self.halves == [0; 5]
    }

    pub fn inverse(self) -> Self {
        Dimension {
            halves: self.halves.map(|h| -h),
        }
    }

    pub fn powi(self, n: i8) -> Self {
        Dimension {
            halves: self.halves.map(|h| h * n),
        }
    }

    /// Square root; fails if any exponent would become a quarter step.
    pub fn sqrt(self) -> Option<Self> {
        if self.halves.iter().any(|h| h % 2 != 0) {
            return None;
        }
        Some(Dimension {
            halves: self.halves.map(|h| h / 2),
        })
    }

    fn scaled_halves(self, halves_factor: f64) -> Option<Self> {
        let mut out = [0i8; 5];
        for (o, h) in out.iter_mut().zip(self.halves) {
            let v = f64::from(h) * halves_factor;
            if (v - v.round()).abs() > 1e-9 {
                return None;
            }
            *o = v.round() as i8;
        }
        Some(Dimension { halves: out })
    }
}

// Multiplying quantities adds their exponents.
impl Mul for Dimension {
    type Output = Dimension;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Dimension) -> Dimension {
        let mut halves = self.halves;
        for (h, r) in halves.iter_mut().zip(rhs.halves) {
            *h += r;
        }
        Dimension { halves }
    }
}

impl Div for Dimension {
    type Output = Dimension;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Dimension) -> Dimension {
        self * rhs.inverse()
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_dimensionless() {
            return write!(f, "1");
        }
        let mut first = true;
        for (name, h) in BASE_NAMES.iter().zip(self.halves) {
            if h == 0 {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if h == 2 {
                write!(f, "{name}")?;
            } else if h % 2 == 0 {
                write!(f, "{name}^{}", h / 2)?;
            } else {
                write!(f, "{name}^{}", f64::from(h) / 2.0)?;
            }
        }
        Ok(())
    }
}

/// A real value tagged with its SI dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    pub value: f64,
    pub dimension: Dimension,
}

impl Quantity {
    pub const fn new(value: f64, dimension: Dimension) -> Self {
        Quantity { value, dimension }
    }

    /// Builds a quantity from a value expressed in `unit`, e.g. `(4.9, "MHz")`.
    pub fn from_unit(value: f64, unit: &str) -> Result<Self> {
        let (scale, dimension) = parse_unit(unit)?;
        Ok(Quantity::new(value * scale, dimension))
    }

    /// Expresses the quantity in `unit`, checking that the dimensions agree.
    pub fn in_unit(&self, unit: &str) -> Result<f64> {
        let (scale, dimension) = parse_unit(unit)?;
        check_dimension(self, dimension)?;
        Ok(self.value / scale)
    }

    pub fn try_add(self, rhs: Quantity) -> Result<Quantity> {
        check_dimension(&rhs, self.dimension)?;
        Ok(Quantity::new(self.value + rhs.value, self.dimension))
    }

    pub fn try_sub(self, rhs: Quantity) -> Result<Quantity> {
        check_dimension(&rhs, self.dimension)?;
        Ok(Quantity::new(self.value - rhs.value, self.dimension))
    }

    pub fn powi(self, n: i8) -> Quantity {
        Quantity::new(self.value.powi(i32::from(n)), self.dimension.powi(n))
    }

    pub fn sqrt(self) -> Option<Quantity> {
        Some(Quantity::new(self.value.sqrt(), self.dimension.sqrt()?))
    }
}

impl Mul for Quantity {
    type Output = Quantity;
    fn mul(self, rhs: Quantity) -> Quantity {
        Quantity::new(self.value * rhs.value, self.dimension * rhs.dimension)
    }
}

impl Div for Quantity {
    type Output = Quantity;
    fn div(self, rhs: Quantity) -> Quantity {
        Quantity::new(self.value / rhs.value, self.dimension / rhs.dimension)
    }
}

pub fn check_dimension(q: &Quantity, expected: Dimension) -> Result<()> {
    if q.dimension == expected {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected,
            found: q.dimension,
        })
    }
}

fn base_unit(symbol: &str) -> Option<(f64, Dimension)> {
    let d = match symbol {
        "1" | "rad" => (1.0, Dimension::DIMENSIONLESS),
        "m" => (1.0, Dimension::LENGTH),
        "kg" => (1.0, Dimension::MASS),
        "g" => (1e-3, Dimension::MASS),
        "s" => (1.0, Dimension::TIME),
        "Hz" => (1.0, Dimension::FREQUENCY),
        "A" => (1.0, Dimension::new(0, 0, 0, 1, 0)),
        "K" => (1.0, Dimension::TEMPERATURE),
        "N" => (1.0, Dimension::FORCE),
        "J" => (1.0, Dimension::ENERGY),
        "W" => (1.0, Dimension::POWER),
        "Pa" => (1.0, Dimension::PRESSURE),
        _ => return None,
    };
    Some(d)
}

fn prefix_scale(c: char) -> Option<f64> {
    Some(match c {
        'a' => 1e-18,
        'f' => 1e-15,
        'p' => 1e-12,
        'n' => 1e-9,
        'u' | 'µ' | 'μ' => 1e-6,
        'm' => 1e-3,
        'c' => 1e-2,
        'k' => 1e3,
        'M' => 1e6,
        'G' => 1e9,
        'T' => 1e12,
        _ => return None,
    })
}

fn parse_symbol(symbol: &str) -> Result<(f64, Dimension)> {
    if let Some(b) = base_unit(symbol) {
        return Ok(b);
    }
    let mut chars = symbol.chars();
    if let Some(first) = chars.next() {
        if let (Some(p), Some((scale, dim))) = (prefix_scale(first), base_unit(chars.as_str())) {
            return Ok((p * scale, dim));
        }
    }
    Err(Error::UnknownUnit(symbol.to_string()))
}

/// Parses unit strings such as `MHz/nm`, `kg/m^3`, `m^2/W` or `m/Hz^0.5`.
///
/// Factors are separated by `*`, `·` or spaces; a `/` inverts the factor that
/// follows it. Returns the SI scale factor and dimension.
pub fn parse_unit(unit: &str) -> Result<(f64, Dimension)> {
    let unit = unit.trim();
    if unit.is_empty() {
        return Ok((1.0, Dimension::DIMENSIONLESS));
    }
    let mut scale = 1.0;
    let mut dim = Dimension::DIMENSIONLESS;
    let mut invert_next = false;
    let mut token = String::new();

    let mut flush = |token: &mut String, invert: bool| -> Result<()> {
        if token.is_empty() {
            return Ok(());
        }
        let (sym, exp) = match token.split_once('^') {
            Some((s, e)) => {
                let e: f64 = e
                    .trim_matches(|c| c == '(' || c == ')')
                    .parse()
                    .map_err(|_| Error::UnknownUnit(token.clone()))?;
                (s, e)
            }
            None => (token.as_str(), 1.0),
        };
        let (s, d) = parse_symbol(sym)?;
        let exp = if invert { -exp } else { exp };
        let d = d.scaled_halves(exp).ok_or_else(|| Error::UnknownUnit(token.clone()))?;
        scale *= s.powf(exp);
        dim = dim * d;
        token.clear();
        Ok(())
    };

    for c in unit.chars() {
        match c {
            '*' | '·' | ' ' => {
                flush(&mut token, invert_next)?;
                invert_next = false;
            }
            '/' => {
                flush(&mut token, invert_next)?;
                invert_next = true;
            }
            _ => token.push(c),
        }
    }
    flush(&mut token, invert_next)?;
    Ok((scale, dim))
}

/// Ordinary frequency f = Ω/2π.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Hertz(pub f64);

/// Angular frequency Ω in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct RadPerSec(pub f64);

impl Hertz {
    pub fn to_angular(self) -> RadPerSec {
        RadPerSec(2.0 * PI * self.0)
    }
}

impl RadPerSec {
    pub fn from_hz(f: f64) -> Self {
        Hertz(f).to_angular()
    }

    pub fn to_hertz(self) -> Hertz {
        Hertz(self.0 / (2.0 * PI))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Coupling rate in Hz/m from a value in rad/s/m.
pub fn rate_to_hz_per_m(g: f64) -> f64 {
    g / (2.0 * PI)
}

/// Coupling rate in rad/s/m from a value g/2π given in MHz/nm.
pub fn rate_from_mhz_per_nm(g_over_2pi: f64) -> f64 {
    2.0 * PI * g_over_2pi * 1e6 / 1e-9
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sidedness {
    Single,
    Double,
}

impl Sidedness {
    pub fn as_str(self) -> &'static str {
        match self {
            Sidedness::Single => "single",
            Sidedness::Double => "double",
        }
    }
}

impl fmt::Display for Sidedness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Power spectral density sampled on a grid of positive Fourier frequencies (Hz).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDensity {
    frequencies: Vec<f64>,
    values: Vec<f64>,
    sidedness: Sidedness,
    unit: Dimension,
}

impl SpectralDensity {
    /// `unit` is the dimension of the PSD itself (e.g. m²/Hz).
    pub fn new(frequencies: Vec<f64>, values: Vec<f64>, sidedness: Sidedness, unit: Dimension) -> Result<Self> {
        if frequencies.len() != values.len() {
            return Err(Error::MalformedSpectrum(format!(
                "{} frequencies but {} values",
                frequencies.len(),
                values.len()
            )));
        }
        if frequencies.is_empty() {
            return Err(Error::MalformedSpectrum("empty grid".into()));
        }
        if frequencies.iter().any(|f| !(f.is_finite() && *f > 0.0)) {
            return Err(Error::MalformedSpectrum("frequencies must be finite and > 0".into()));
        }
        if frequencies.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::MalformedSpectrum(
                "frequencies must be strictly increasing".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::MalformedSpectrum("non-finite PSD value".into()));
        }
        Ok(SpectralDensity {
            frequencies,
            values,
            sidedness,
            unit,
        })
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sidedness(&self) -> Sidedness {
        self.sidedness
    }

    pub fn unit(&self) -> Dimension {
        self.unit
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Rescales to the requested convention: single = 2 × double.
    pub fn to_sidedness(&self, target: Sidedness) -> SpectralDensity {
        let factor = match (self.sidedness, target) {
            (a, b) if a == b => 1.0,
            (Sidedness::Double, Sidedness::Single) => 2.0,
            _ => 0.5,
        };
        SpectralDensity {
            frequencies: self.frequencies.clone(),
            values: self.values.iter().map(|v| v * factor).collect(),
            sidedness: target,
            unit: self.unit,
        }
    }

    /// Variance of the underlying signal over the sampled band, by the
    /// trapezoid rule on the single-sided density.
    pub fn variance(&self) -> f64 {
        let single = self.to_sidedness(Sidedness::Single);
        single
            .frequencies
            .windows(2)
            .zip(single.values.windows(2))
            .map(|(f, v)| 0.5 * (v[0] + v[1]) * (f[1] - f[0]))
            .sum()
    }

    pub fn same_grid(&self, other: &SpectralDensity) -> bool {
        self.frequencies == other.frequencies
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// Frequency grid in Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyGrid {
    pub f_min: f64,
    pub f_max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl FrequencyGrid {
    pub fn new(f_min: f64, f_max: f64, points: usize, spacing: Spacing) -> Result<Self> {
        if points < 2 {
            return Err(Error::invalid("grid.points", "need at least 2 points"));
        }
        if !(f_min > 0.0 && f_max > f_min && f_max.is_finite()) {
            return Err(Error::invalid(
                "grid",
                format!("need 0 < f_min < f_max, got [{f_min}, {f_max}]"),
            ));
        }
        Ok(FrequencyGrid {
            f_min,
            f_max,
            points,
            spacing,
        })
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let n = self.points - 1;
        (0..self.points)
            .map(|i| {
                if i == n {
                    return self.f_max;
                }
                let t = i as f64 / n as f64;
                match self.spacing {
                    Spacing::Linear => self.f_min + t * (self.f_max - self.f_min),
                    Spacing::Log => self.f_min * (self.f_max / self.f_min).powf(t),
                }
            })
            .collect()
    }

    /// Frequencies of this grid merged with a dense linear band of
    /// `band_points` samples over `center ± halfwidth`.
    pub fn refined_around(&self, center: f64, halfwidth: f64, band_points: usize) -> Vec<f64> {
        let mut f = self.frequencies();
        let lo = (center - halfwidth).max(self.f_min);
        let hi = (center + halfwidth).min(self.f_max);
        if hi > lo && band_points >= 2 {
            let n = (band_points - 1) as f64;
            f.extend((0..band_points).map(|i| lo + (hi - lo) * i as f64 / n));
        }
        f.sort_by(f64::total_cmp);
        f.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn constants_are_codata() {
        assert_eq!(HBAR, 1.054571817e-34);
        assert_eq!(K_B, 1.380649e-23);
        assert_eq!(C, 299792458.0);
    }

    #[test]
    fn double_to_single_doubles_values() {
        let s = SpectralDensity::new(
            vec![1.0, 2.0],
            vec![1.0, 3.0],
            Sidedness::Double,
            Dimension::AREA / Dimension::FREQUENCY,
        )
        .unwrap();
        let single = s.to_sidedness(Sidedness::Single);
        assert_eq!(single.values(), &[2.0, 6.0]);
        assert_eq!(single.sidedness(), Sidedness::Single);
        assert_eq!(single.to_sidedness(Sidedness::Single), single);
        assert_eq!(single.to_sidedness(Sidedness::Double), s);
    }

    #[test]
    fn sql_level_sidedness() {
        // 2ħQ/(mΩ²) single-sided pairs with ħQ/(mΩ²) double-sided.
        let (q, m, w) = (4e4, 4.9e-15, 2.0 * PI * 8e6);
        let double = HBAR * q / (m * w * w);
        let s = SpectralDensity::new(
            vec![8e6],
            vec![double],
            Sidedness::Double,
            Dimension::AREA / Dimension::FREQUENCY,
        )
        .unwrap();
        let single = s.to_sidedness(Sidedness::Single).values()[0];
        assert!((single - 2.0 * HBAR * q / (m * w * w)).abs() <= 1e-15 * single);
    }

    #[test]
    fn malformed_spectra_rejected() {
        let d = Dimension::DIMENSIONLESS;
        assert!(SpectralDensity::new(vec![2.0, 1.0], vec![1.0, 1.0], Sidedness::Single, d).is_err());
        assert!(SpectralDensity::new(vec![0.0, 1.0], vec![1.0, 1.0], Sidedness::Single, d).is_err());
        assert!(SpectralDensity::new(vec![1.0], vec![1.0, 1.0], Sidedness::Single, d).is_err());
    }

    #[test]
    fn check_dimension_cases() {
        let f = Quantity::from_unit(6.5, "MHz").unwrap();
        assert!(check_dimension(&f, Dimension::FREQUENCY).is_ok());
        assert_eq!(f.value, 6.5e6);

        let hbar = Quantity::new(HBAR, Dimension::ACTION);
        let (_, js) = parse_unit("J*s").unwrap();
        assert!(check_dimension(&hbar, js).is_ok());

        let len = Quantity::from_unit(1.0, "m").unwrap();
        match check_dimension(&len, Dimension::FREQUENCY) {
            Err(Error::DimensionMismatch { expected, found }) => {
                assert_eq!(expected, Dimension::FREQUENCY);
                assert_eq!(found, Dimension::LENGTH);
            }
            other => panic!("expected mismatch, got {other:?}"),
        }
    }

    #[test]
    fn unit_parsing() {
        let (s, d) = parse_unit("MHz/nm").unwrap();
        assert!((s - 1e15).abs() < 1.0);
        assert_eq!(d, Dimension::COUPLING_RATE);
        let (s, d) = parse_unit("kg/m^3").unwrap();
        assert_eq!(s, 1.0);
        assert_eq!(d, Dimension::DENSITY);
        let (s, d) = parse_unit("pg").unwrap();
        assert!((s - 1e-15).abs() < 1e-30);
        assert_eq!(d, Dimension::MASS);
        let (_, d) = parse_unit("m/Hz^0.5").unwrap();
        assert_eq!(d.exponents(), [1.0, 0.0, 0.5, 0.0, 0.0]);
        let (s, d) = parse_unit("m^2/W").unwrap();
        assert_eq!(s, 1.0);
        assert_eq!(d, Dimension::AREA / Dimension::POWER);
        assert_eq!(parse_unit("GPa").unwrap().1, Dimension::PRESSURE);
        assert!(parse_unit("furlong").is_err());
    }

    #[test]
    fn mismatched_add_rejected() {
        let a = Quantity::from_unit(1.0, "m").unwrap();
        let b = Quantity::from_unit(1.0, "s").unwrap();
        assert!(a.try_add(b).is_err());
        assert_eq!(a.try_add(a).unwrap().value, 2.0);
    }

    #[test]
    fn angular_conversion_is_explicit() {
        let f = Hertz(8e6);
        let w = f.to_angular();
        assert!((w.0 - 2.0 * PI * 8e6).abs() < 1e-6);
        assert!((w.to_hertz().0 - 8e6).abs() < 1e-6);
    }

    #[test]
    fn grid_endpoints() {
        let g = FrequencyGrid::new(1e3, 1e7, 5, Spacing::Log).unwrap();
        let f = g.frequencies();
        assert_eq!(f[0], 1e3);
        assert_eq!(f[4], 1e7);
        assert!((f[2] - 1e5).abs() < 1e-6);
        assert!(FrequencyGrid::new(1.0, 2.0, 1, Spacing::Linear).is_err());
    }

    fn dim() -> impl Strategy<Value = Dimension> {
        prop::array::uniform5(-3i8..=3).prop_map(|e| Dimension::new(e[0], e[1], e[2], e[3], e[4]))
    }

    proptest! {
        #[test]
        fn dimensions_form_abelian_group(a in dim(), b in dim(), c in dim()) {
            prop_assert_eq!((a * b) * c, a * (b * c));
            prop_assert_eq!(a * b, b * a);
            prop_assert_eq!(a * a.inverse(), Dimension::DIMENSIONLESS);
            prop_assert_eq!((a / b) * b, a);
        }

        #[test]
        fn sidedness_round_trip(vals in prop::collection::vec(1e-30f64..1e-10, 1..20)) {
            let f: Vec<f64> = (1..=vals.len()).map(|i| i as f64).collect();
            let s = SpectralDensity::new(f, vals, Sidedness::Single, Dimension::DIMENSIONLESS).unwrap();
            let back = s.to_sidedness(Sidedness::Double).to_sidedness(Sidedness::Single);
            for (a, b) in back.values().iter().zip(s.values()) {
                prop_assert!((a - b).abs() <= 1e-15 * b.abs());
            }
        }
    }
}
