//! Scenario files: JSON with a `schema_version`, one object per model section.
//!
//! Numeric fields take either a bare number in the field's default unit or
//! `{"value": x, "unit": "..."}`, which is converted and dimension-checked.
//! Frequencies are ordinary frequencies (Hz); angular units are refused.

use std::f64::consts::PI;

use optomech::devices::{
    CouplingGeometry, Microcavity, NanoOscillator, Orientation, OscillatorKind, DEFAULT_EFFECTIVE_INDEX,
    DEFAULT_SIN_DENSITY, SILICA_INDEX, SILICA_KERR, SIN_INDEX,
};
use optomech::sensing::{CouplingRegime, DriveCondition, Readout};
use optomech::units::{check_dimension, parse_unit, FrequencyGrid, Hertz, Quantity, RadPerSec, Spacing};
use serde_json::{Map, Value};

use crate::error::CliError;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Analysis {
    Coupling,
    Spectrum,
    Sensitivity,
    Response,
    Backaction,
    Qba,
    FitShift,
    FitResponse,
}

impl Analysis {
    pub const ALL: [Analysis; 8] = [
        Analysis::Coupling,
        Analysis::Spectrum,
        Analysis::Sensitivity,
        Analysis::Response,
        Analysis::Backaction,
        Analysis::Qba,
        Analysis::FitShift,
        Analysis::FitResponse,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Analysis::Coupling => "coupling",
            Analysis::Spectrum => "spectrum",
            Analysis::Sensitivity => "sensitivity",
            Analysis::Response => "response",
            Analysis::Backaction => "backaction",
            Analysis::Qba => "qba",
            Analysis::FitShift => "fit-shift",
            Analysis::FitResponse => "fit-response",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Analysis::ALL.into_iter().find(|a| a.as_str() == s)
    }
}

/// Mechanical mode given directly rather than derived from the oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSpec {
    pub frequency: Hertz,
    pub quality_factor: f64,
    pub m_eff: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Probe {
    /// Gaussian with the cavity's sampling length.
    Cavity,
    Delta,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Detuning {
    Hz(f64),
    /// Multiple of κ.
    Kappa(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveSpec {
    pub input_power: f64,
    pub detuning: Detuning,
    pub temperature: f64,
    pub readout: Readout,
    pub regime: CouplingRegime,
}

impl DriveSpec {
    pub fn resolve(&self, cav: Option<&Microcavity>) -> DriveCondition {
        let detuning = match (self.detuning, cav) {
            (Detuning::Hz(f), _) => RadPerSec::from_hz(f),
            (Detuning::Kappa(k), Some(c)) => RadPerSec(k * c.kappa.0),
            (Detuning::Kappa(_), None) => RadPerSec(0.0),
        };
        DriveCondition {
            input_power: self.input_power,
            detuning,
            temperature: self.temperature,
            readout: self.readout,
            regime: self.regime,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Options {
    /// Flat detector floor, single-sided (m/√Hz).
    pub detector_asd: Option<f64>,
    /// Total background to reach, single-sided (m/√Hz); sets the detector floor.
    pub background_asd: Option<f64>,
    /// Pump and probe coupling rates g (rad/s/m).
    pub g_pump: Option<f64>,
    pub g_probe: Option<f64>,
    /// Relative Gaussian noise added to synthetic data.
    pub noise: f64,
    pub seed: u64,
    /// Separations sampled for the shift curve (m).
    pub separations: Vec<f64>,
    /// CSV with measured data for the fit analyses, relative to the scenario file.
    pub data: Option<String>,
    /// Largest g in the linewidth sweep (rad/s/m) and its number of points.
    pub g_sweep_max: Option<f64>,
    pub g_sweep_points: usize,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub analyses: Vec<Analysis>,
    pub cavity: Option<Microcavity>,
    pub oscillator: Option<NanoOscillator>,
    /// Measured fundamental frequency used to infer the string stress.
    pub measured_frequency: Option<Hertz>,
    pub geometry: Option<CouplingGeometry>,
    pub mode: Option<ModeSpec>,
    pub probe: Probe,
    /// Coupling rate g (rad/s/m) overriding the geometric estimate.
    pub coupling: Option<f64>,
    pub drive: Option<DriveSpec>,
    pub grid: Option<FrequencyGrid>,
    pub options: Options,
}

/// Locates the line of a key path like ["grid", "points"] in the raw text.
fn line_of(text: &str, path: &[&str]) -> Option<usize> {
    let mut pos = 0;
    let mut found = None;
    for seg in path {
        let needle = format!("\"{seg}\"");
        let mut search = pos;
        loop {
            let Some(rel) = text[search..].find(&needle) else {
                return found;
            };
            let at = search + rel;
            let after = text[at + needle.len()..].trim_start();
            if after.starts_with(':') {
                pos = at + needle.len();
                found = Some(text[..at].matches('\n').count() + 1);
                break;
            }
            search = at + needle.len();
        }
    }
    found
}

struct Ctx<'a> {
    text: &'a str,
}

impl<'a> Ctx<'a> {
    fn err(&self, path: &[&str], msg: impl Into<String>) -> CliError {
        CliError::Config {
            line: line_of(self.text, path),
            message: format!("{}: {}", path.join("."), msg.into()),
        }
    }

    fn section<'v>(
        &self,
        root: &'v Map<String, Value>,
        name: &str,
    ) -> Result<Option<&'v Map<String, Value>>, CliError> {
        match root.get(name) {
            None | Some(Value::Null) => Ok(None),
            Some(Value::Object(m)) => Ok(Some(m)),
            Some(_) => Err(self.err(&[name], "expected an object")),
        }
    }

    /// Reads a quantity in SI. `default_unit` also fixes the expected dimension.
    fn quantity(&self, sec: &Map<String, Value>, path: &[&str], default_unit: &str) -> Result<Option<f64>, CliError> {
        let key = path[path.len() - 1];
        let (_, dim) = parse_unit(default_unit).expect("valid default unit");
        let (value, unit) = match sec.get(key) {
            None | Some(Value::Null) => return Ok(None),
            Some(Value::Number(n)) => (n.as_f64().unwrap_or(f64::NAN), default_unit.to_string()),
            Some(Value::Object(o)) => {
                let v = o
                    .get("value")
                    .and_then(Value::as_f64)
                    .ok_or_else(|| self.err(path, "object form needs a numeric `value`"))?;
                let u = o
                    .get("unit")
                    .and_then(Value::as_str)
                    .ok_or_else(|| self.err(path, "object form needs a string `unit`"))?;
                (v, u.to_string())
            }
            Some(_) => return Err(self.err(path, "expected a number or {\"value\", \"unit\"}")),
        };
        if default_unit.contains("Hz") && unit.contains("rad") {
            return Err(self.err(
                path,
                format!("angular unit `{unit}` not accepted; give ordinary frequency in Hz"),
            ));
        }
        let q = Quantity::from_unit(value, &unit).map_err(|e| self.err(path, e.to_string()))?;
        check_dimension(&q, dim).map_err(|e| self.err(path, e.to_string()))?;
        if !q.value.is_finite() {
            return Err(self.err(path, "must be finite"));
        }
        Ok(Some(q.value))
    }

    fn required(&self, sec: &Map<String, Value>, path: &[&str], default_unit: &str) -> Result<f64, CliError> {
        self.quantity(sec, path, default_unit)?
            .ok_or_else(|| self.err(path, "required field missing"))
    }

    fn string<'v>(&self, sec: &'v Map<String, Value>, path: &[&str]) -> Result<Option<&'v str>, CliError> {
        match sec.get(path[path.len() - 1]) {
            None | Some(Value::Null) => Ok(None),
            Some(Value::String(s)) => Ok(Some(s)),
            Some(_) => Err(self.err(path, "expected a string")),
        }
    }

    fn count(&self, sec: &Map<String, Value>, path: &[&str]) -> Result<Option<u64>, CliError> {
        match sec.get(path[path.len() - 1]) {
            None | Some(Value::Null) => Ok(None),
            Some(v) => v
                .as_u64()
                .map(Some)
                .ok_or_else(|| self.err(path, "expected a non-negative integer")),
        }
    }
}

fn reject_unknown(ctx: &Ctx, sec: &Map<String, Value>, name: &str, known: &[&str]) -> Result<(), CliError> {
    for k in sec.keys() {
        if !known.contains(&k.as_str()) {
            return Err(ctx.err(
                &[name, k],
                format!("unknown field (expected one of: {})", known.join(", ")),
            ));
        }
    }
    Ok(())
}

fn parse_cavity(ctx: &Ctx, sec: &Map<String, Value>) -> Result<Microcavity, CliError> {
    const S: &str = "cavity";
    reject_unknown(
        ctx,
        sec,
        S,
        &[
            "major_radius",
            "minor_radius",
            "wavelength",
            "index",
            "effective_index",
            "kappa_hz",
            "mode_diameter",
            "surface_field",
            "kerr_coefficient",
            "decay_length",
        ],
    )?;
    let cav = Microcavity {
        major_radius: ctx.required(sec, &[S, "major_radius"], "m")?,
        minor_radius: ctx.required(sec, &[S, "minor_radius"], "m")?,
        wavelength: ctx.required(sec, &[S, "wavelength"], "m")?,
        index: ctx.quantity(sec, &[S, "index"], "1")?.unwrap_or(SILICA_INDEX),
        effective_index: ctx
            .quantity(sec, &[S, "effective_index"], "1")?
            .unwrap_or(DEFAULT_EFFECTIVE_INDEX),
        kappa: RadPerSec::from_hz(ctx.required(sec, &[S, "kappa_hz"], "Hz")?),
        mode_diameter: ctx.required(sec, &[S, "mode_diameter"], "m")?,
        surface_field: ctx.required(sec, &[S, "surface_field"], "1")?,
        kerr_coefficient: ctx
            .quantity(sec, &[S, "kerr_coefficient"], "m^2/W")?
            .unwrap_or(SILICA_KERR),
        decay_length: ctx.quantity(sec, &[S, "decay_length"], "m")?,
    };
    cav.validate().map_err(|e| ctx.err(&[S], e.to_string()))?;
    Ok(cav)
}

fn parse_oscillator(ctx: &Ctx, sec: &Map<String, Value>) -> Result<(NanoOscillator, Option<Hertz>), CliError> {
    const S: &str = "oscillator";
    reject_unknown(
        ctx,
        sec,
        S,
        &[
            "kind",
            "length",
            "width",
            "thickness",
            "density",
            "stress",
            "frequency_hz",
            "refractive_index",
            "quality_factor",
            "mode_index",
        ],
    )?;
    let kind = match ctx.string(sec, &[S, "kind"])?.unwrap_or("string") {
        "string" => OscillatorKind::String,
        "sheet" => OscillatorKind::Sheet,
        other => return Err(ctx.err(&[S, "kind"], format!("unknown kind `{other}` (string | sheet)"))),
    };
    let measured = ctx.quantity(sec, &[S, "frequency_hz"], "Hz")?.map(Hertz);
    let stress = ctx.quantity(sec, &[S, "stress"], "Pa")?;
    let mode_index = ctx.count(sec, &[S, "mode_index"])?.unwrap_or(1);
    let mode_index = u32::try_from(mode_index).map_err(|_| ctx.err(&[S, "mode_index"], "too large"))?;
    let mut osc = NanoOscillator {
        kind,
        length: ctx.required(sec, &[S, "length"], "m")?,
        width: ctx.required(sec, &[S, "width"], "m")?,
        thickness: ctx.required(sec, &[S, "thickness"], "m")?,
        density: ctx
            .quantity(sec, &[S, "density"], "kg/m^3")?
            .unwrap_or(DEFAULT_SIN_DENSITY),
        stress: stress.unwrap_or(0.0),
        refractive_index: ctx.quantity(sec, &[S, "refractive_index"], "1")?.unwrap_or(SIN_INDEX),
        quality_factor: ctx.quantity(sec, &[S, "quality_factor"], "1")?.unwrap_or(1e4),
        mode_index,
    };
    match (stress, measured) {
        (Some(_), _) => {}
        (None, Some(f)) => osc.stress = osc.infer_stress(f),
        (None, None) => {
            return Err(ctx.err(&[S], "give either `stress` or the measured fundamental `frequency_hz`"));
        }
    }
    osc.validate().map_err(|e| ctx.err(&[S], e.to_string()))?;
    Ok((osc, measured))
}

fn parse_geometry(ctx: &Ctx, sec: &Map<String, Value>) -> Result<CouplingGeometry, CliError> {
    const S: &str = "geometry";
    reject_unknown(ctx, sec, S, &["separation", "orientation", "standing_wave_phase"])?;
    let orientation = match ctx.string(sec, &[S, "orientation"])?.unwrap_or("horizontal") {
        "horizontal" => Orientation::Horizontal,
        "vertical" => Orientation::Vertical,
        "sheet" => Orientation::Sheet,
        other => {
            return Err(ctx.err(
                &[S, "orientation"],
                format!("unknown orientation `{other}` (horizontal | vertical | sheet)"),
            ))
        }
    };
    let mut geom = CouplingGeometry::new(ctx.quantity(sec, &[S, "separation"], "m")?.unwrap_or(0.0), orientation);
    if let Some(p) = ctx.quantity(sec, &[S, "standing_wave_phase"], "1")? {
        geom.standing_wave_phase = p;
    }
    geom.validate().map_err(|e| ctx.err(&[S], e.to_string()))?;
    Ok(geom)
}

fn parse_mode(ctx: &Ctx, sec: &Map<String, Value>) -> Result<(Option<ModeSpec>, Probe), CliError> {
    const S: &str = "mode";
    reject_unknown(ctx, sec, S, &["frequency_hz", "quality_factor", "m_eff", "probe"])?;
    let probe = match ctx.string(sec, &[S, "probe"])?.unwrap_or("cavity") {
        "cavity" | "gaussian" => Probe::Cavity,
        "delta" => Probe::Delta,
        other => return Err(ctx.err(&[S, "probe"], format!("unknown probe `{other}` (cavity | delta)"))),
    };
    let f = ctx.quantity(sec, &[S, "frequency_hz"], "Hz")?;
    let q = ctx.quantity(sec, &[S, "quality_factor"], "1")?;
    let m = ctx.quantity(sec, &[S, "m_eff"], "kg")?;
    let spec = match (f, q, m) {
        (Some(f), Some(q), Some(m)) => Some(ModeSpec {
            frequency: Hertz(f),
            quality_factor: q,
            m_eff: m,
        }),
        (None, None, None) => None,
        _ => {
            return Err(ctx.err(
                &[S],
                "an explicit mode needs all of frequency_hz, quality_factor and m_eff",
            ))
        }
    };
    Ok((spec, probe))
}

fn parse_drive(ctx: &Ctx, sec: &Map<String, Value>) -> Result<DriveSpec, CliError> {
    const S: &str = "drive";
    reject_unknown(
        ctx,
        sec,
        S,
        &[
            "input_power",
            "detuning_hz",
            "detuning_kappa",
            "temperature",
            "readout",
            "coupling",
        ],
    )?;
    let detuning = match (
        ctx.quantity(sec, &[S, "detuning_hz"], "Hz")?,
        ctx.quantity(sec, &[S, "detuning_kappa"], "1")?,
    ) {
        (Some(_), Some(_)) => {
            return Err(ctx.err(&[S, "detuning_kappa"], "give detuning_hz or detuning_kappa, not both"))
        }
        (Some(f), None) => Detuning::Hz(f),
        (None, Some(k)) => Detuning::Kappa(k),
        (None, None) => Detuning::Hz(0.0),
    };
    let readout = match ctx.string(sec, &[S, "readout"])?.unwrap_or("homodyne") {
        "homodyne" => Readout::Homodyne,
        "pdh" => Readout::Pdh,
        other => return Err(ctx.err(&[S, "readout"], format!("unknown readout `{other}` (homodyne | pdh)"))),
    };
    let regime = match ctx.string(sec, &[S, "coupling"])?.unwrap_or("critical") {
        "critical" => CouplingRegime::Critical,
        "under" => CouplingRegime::Under,
        "over" => CouplingRegime::Over,
        other => return Err(ctx.err(&[S, "coupling"], format!("unknown coupling `{other}`"))),
    };
    let spec = DriveSpec {
        input_power: ctx.quantity(sec, &[S, "input_power"], "W")?.unwrap_or(0.0),
        detuning,
        temperature: ctx.quantity(sec, &[S, "temperature"], "K")?.unwrap_or(300.0),
        readout,
        regime,
    };
    spec.resolve(None)
        .validate()
        .map_err(|e| ctx.err(&[S], e.to_string()))?;
    Ok(spec)
}

fn parse_grid(ctx: &Ctx, sec: &Map<String, Value>) -> Result<FrequencyGrid, CliError> {
    const S: &str = "grid";
    reject_unknown(ctx, sec, S, &["f_min_hz", "f_max_hz", "points", "spacing"])?;
    let f_min = ctx.required(sec, &[S, "f_min_hz"], "Hz")?;
    let f_max = ctx.required(sec, &[S, "f_max_hz"], "Hz")?;
    let points = ctx
        .count(sec, &[S, "points"])?
        .ok_or_else(|| ctx.err(&[S, "points"], "required field missing"))?;
    let spacing = match ctx.string(sec, &[S, "spacing"])?.unwrap_or("linear") {
        "linear" => Spacing::Linear,
        "log" => Spacing::Log,
        other => return Err(ctx.err(&[S, "spacing"], format!("unknown spacing `{other}` (linear | log)"))),
    };
    FrequencyGrid::new(f_min, f_max, points as usize, spacing).map_err(|e| ctx.err(&[S], e.to_string()))
}

fn parse_options(ctx: &Ctx, sec: &Map<String, Value>) -> Result<Options, CliError> {
    const S: &str = "options";
    reject_unknown(
        ctx,
        sec,
        S,
        &[
            "detector_asd",
            "background_asd",
            "g_pump_hz_per_m",
            "g_probe_hz_per_m",
            "noise",
            "seed",
            "separations",
            "data",
            "g_sweep_max_hz_per_m",
            "g_sweep_points",
            "note",
        ],
    )?;
    let rate = |key: &str| -> Result<Option<f64>, CliError> {
        Ok(ctx.quantity(sec, &[S, key], "Hz/m")?.map(|g| 2.0 * PI * g))
    };
    let separations = match sec.get("separations") {
        None | Some(Value::Null) => Vec::new(),
        Some(Value::Array(items)) => {
            let mut out = Vec::with_capacity(items.len());
            for (i, item) in items.iter().enumerate() {
                let mut m = Map::new();
                m.insert("x".into(), item.clone());
                let idx = i.to_string();
                out.push(
                    ctx.required(&m, &[S, "separations", &idx, "x"][..], "m")
                        .map_err(|_| ctx.err(&[S, "separations"], format!("entry {i} must be a length")))?,
                );
            }
            out
        }
        Some(_) => return Err(ctx.err(&[S, "separations"], "expected an array of lengths")),
    };
    let noise = ctx.quantity(sec, &[S, "noise"], "1")?.unwrap_or(0.0);
    if !(noise >= 0.0) {
        return Err(ctx.err(&[S, "noise"], "must be >= 0"));
    }
    Ok(Options {
        detector_asd: ctx.quantity(sec, &[S, "detector_asd"], "m/Hz^0.5")?,
        background_asd: ctx.quantity(sec, &[S, "background_asd"], "m/Hz^0.5")?,
        g_pump: rate("g_pump_hz_per_m")?,
        g_probe: rate("g_probe_hz_per_m")?,
        noise,
        seed: ctx.count(sec, &[S, "seed"])?.unwrap_or(0),
        separations,
        data: ctx.string(sec, &[S, "data"])?.map(str::to_string),
        g_sweep_max: rate("g_sweep_max_hz_per_m")?,
        g_sweep_points: ctx.count(sec, &[S, "g_sweep_points"])?.unwrap_or(21) as usize,
        note: ctx.string(sec, &[S, "note"])?.map(str::to_string),
    })
}

pub fn parse_scenario(text: &str) -> Result<Scenario, CliError> {
    let ctx = Ctx { text };
    let root: Value = serde_json::from_str(text).map_err(|e| CliError::Config {
        line: Some(e.line()),
        message: format!("invalid JSON: {e}"),
    })?;
    let Value::Object(root) = root else {
        return Err(CliError::Config {
            line: Some(1),
            message: "scenario must be a JSON object".into(),
        });
    };
    reject_unknown(
        &ctx,
        &root,
        "",
        &[
            "schema_version",
            "name",
            "description",
            "analysis",
            "cavity",
            "oscillator",
            "geometry",
            "mode",
            "coupling",
            "drive",
            "grid",
            "options",
        ],
    )
    .map_err(|e| match e {
        CliError::Config { line, message } => CliError::Config {
            line,
            message: message.trim_start_matches('.').to_string(),
        },
        other => other,
    })?;

    match root.get("schema_version").and_then(Value::as_u64) {
        Some(SCHEMA_VERSION) => {}
        Some(v) => {
            return Err(ctx.err(
                &["schema_version"],
                format!("unsupported version {v} (expected {SCHEMA_VERSION})"),
            ))
        }
        None => return Err(ctx.err(&["schema_version"], "required integer field missing")),
    }
    let name = ctx.string(&root, &["name"])?.unwrap_or("scenario").to_string();
    let description = ctx.string(&root, &["description"])?.unwrap_or("").to_string();

    let analyses = match root.get("analysis") {
        Some(Value::String(s)) => vec![s.clone()],
        Some(Value::Array(a)) => a
            .iter()
            .map(|v| {
                v.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| ctx.err(&["analysis"], "entries must be strings"))
            })
            .collect::<Result<_, _>>()?,
        _ => return Err(ctx.err(&["analysis"], "required: a name or a list of names")),
    };
    let analyses = analyses
        .iter()
        .map(|s| {
            Analysis::parse(s).ok_or_else(|| {
                let names: Vec<&str> = Analysis::ALL.iter().map(|a| a.as_str()).collect();
                ctx.err(
                    &["analysis"],
                    format!("unknown analysis `{s}` (one of: {})", names.join(", ")),
                )
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    if analyses.is_empty() {
        return Err(ctx.err(&["analysis"], "at least one analysis is required"));
    }

    let cavity = ctx
        .section(&root, "cavity")?
        .map(|s| parse_cavity(&ctx, s))
        .transpose()?;
    let (oscillator, measured_frequency) = match ctx.section(&root, "oscillator")? {
        Some(s) => {
            let (o, f) = parse_oscillator(&ctx, s)?;
            (Some(o), f)
        }
        None => (None, None),
    };
    let geometry = ctx
        .section(&root, "geometry")?
        .map(|s| parse_geometry(&ctx, s))
        .transpose()?;
    let (mode, probe) = match ctx.section(&root, "mode")? {
        Some(s) => parse_mode(&ctx, s)?,
        None => (None, Probe::Cavity),
    };
    let coupling = match ctx.section(&root, "coupling")? {
        Some(s) => {
            reject_unknown(&ctx, s, "coupling", &["g_hz_per_m"])?;
            Some(2.0 * PI * ctx.required(s, &["coupling", "g_hz_per_m"], "Hz/m")?)
        }
        None => None,
    };
    let drive = ctx.section(&root, "drive")?.map(|s| parse_drive(&ctx, s)).transpose()?;
    let grid = match root.get("grid") {
        Some(Value::Object(m)) if m.is_empty() => return Err(ctx.err(&["grid"], "grid section is empty")),
        _ => ctx.section(&root, "grid")?.map(|s| parse_grid(&ctx, s)).transpose()?,
    };
    let options = match ctx.section(&root, "options")? {
        Some(s) => parse_options(&ctx, s)?,
        None => Options {
            g_sweep_points: 21,
            ..Options::default()
        },
    };

    let scenario = Scenario {
        name,
        description,
        analyses,
        cavity,
        oscillator,
        measured_frequency,
        geometry,
        mode,
        probe,
        coupling,
        drive,
        grid,
        options,
    };
    check_requirements(&ctx, &scenario)?;
    Ok(scenario)
}

fn check_requirements(ctx: &Ctx, s: &Scenario) -> Result<(), CliError> {
    let need = |present: bool, analysis: Analysis, section: &str| -> Result<(), CliError> {
        if present {
            Ok(())
        } else {
            Err(CliError::Config {
                line: line_of(ctx.text, &["analysis"]),
                message: format!("analysis `{}` needs a `{section}` section", analysis.as_str()),
            })
        }
    };
    let has_mode = s.mode.is_some() || (s.oscillator.is_some() && (s.probe == Probe::Delta || s.cavity.is_some()));
    let has_g = s.coupling.is_some() || (s.cavity.is_some() && s.oscillator.is_some() && s.geometry.is_some());
    for &a in &s.analyses {
        match a {
            Analysis::Coupling => {
                need(s.cavity.is_some(), a, "cavity")?;
                need(s.oscillator.is_some(), a, "oscillator")?;
                need(s.geometry.is_some(), a, "geometry")?;
            }
            Analysis::Spectrum => {
                need(has_mode, a, "mode")?;
                need(s.grid.is_some(), a, "grid")?;
            }
            Analysis::Sensitivity | Analysis::Backaction | Analysis::Qba => {
                need(s.cavity.is_some(), a, "cavity")?;
                need(has_mode, a, "mode")?;
                need(has_g, a, "coupling")?;
                need(s.drive.is_some(), a, "drive")?;
            }
            Analysis::Response => {
                need(s.cavity.is_some(), a, "cavity")?;
                need(has_mode, a, "mode")?;
                need(has_g || s.options.g_pump.is_some(), a, "coupling")?;
                need(s.grid.is_some(), a, "grid")?;
            }
            Analysis::FitShift => {
                if s.options.data.is_none() {
                    need(s.cavity.is_some(), a, "cavity")?;
                    need(s.oscillator.is_some(), a, "oscillator")?;
                    need(s.geometry.is_some(), a, "geometry")?;
                }
            }
            Analysis::FitResponse => {
                if s.options.data.is_none() {
                    need(s.cavity.is_some(), a, "cavity")?;
                    need(has_mode, a, "mode")?;
                    need(has_g || s.options.g_pump.is_some(), a, "coupling")?;
                    need(s.grid.is_some(), a, "grid")?;
                }
            }
        }
    }
    Ok(())
}
