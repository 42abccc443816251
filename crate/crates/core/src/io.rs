//! CSV ingestion of measured curves and export of spectra.

use std::io::{Read, Write};

use crate::coupling::{Provenance, ShiftCurve};
use crate::error::{Error, Result};
use crate::sensing::ResponseCurve;
use crate::units::SpectralDensity;

fn read_pairs<R: Read>(reader: R, columns: [&str; 2]) -> Result<Vec<(f64, f64)>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let index = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| {
            Error::Csv(format!(
                "missing column `{name}` (found: {})",
                headers.iter().collect::<Vec<_>>().join(", ")
            ))
        })
    };
    let (ia, ib) = (index(columns[0])?, index(columns[1])?);
    let mut out = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = row + 2;
        let field = |i: usize, name: &str| -> Result<f64> {
            let raw = rec.get(i).unwrap_or("");
            raw.parse::<f64>()
                .map_err(|_| Error::Csv(format!("line {line}: `{name}` is not a number: {raw:?}")))
        };
        out.push((field(ia, columns[0])?, field(ib, columns[1])?));
    }
    Ok(out)
}

/// Reads `x0_m,dfreq_hz` rows. Shifts are given as Δω0/2π and stored in rad/s.
pub fn read_shift_curve<R: Read>(reader: R) -> Result<ShiftCurve> {
    let pairs = read_pairs(reader, ["x0_m", "dfreq_hz"])?;
    let points = pairs
        .into_iter()
        .map(|(x, df)| (x, 2.0 * std::f64::consts::PI * df))
        .collect();
    ShiftCurve::new(points, Provenance::Measured)
}

/// Reads `freq_hz,h_mag` rows.
pub fn read_response_curve<R: Read>(reader: R) -> Result<ResponseCurve> {
    ResponseCurve::new(read_pairs(reader, ["freq_hz", "h_mag"])?)
}

/// Writes `freq_hz,psd,unit,sidedness` rows.
pub fn write_spectrum<W: Write>(writer: W, spectrum: &SpectralDensity) -> Result<()> {
    let mut w = csv::WriterBuilder::new().from_writer(writer);
    w.write_record(["freq_hz", "psd", "unit", "sidedness"])?;
    let unit = spectrum.unit().to_string();
    for (f, v) in spectrum.frequencies().iter().zip(spectrum.values()) {
        w.write_record([
            f.to_string(),
            format!("{v:e}"),
            unit.clone(),
            spectrum.sidedness().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{Dimension, Sidedness};

    #[test]
    fn shift_curve_from_csv() {
        let data = "x0_m,dfreq_hz\n0.0,-1e9\n1e-7,-4e8\n";
        let c = read_shift_curve(data.as_bytes()).unwrap();
        assert_eq!(c.points.len(), 2);
        assert!((c.points[0].1 + 2.0 * std::f64::consts::PI * 1e9).abs() < 1e-3);
        assert_eq!(c.provenance, Provenance::Measured);
    }

    #[test]
    fn column_order_and_errors() {
        let c = read_response_curve("h_mag,freq_hz\n1.5,1e6\n".as_bytes()).unwrap();
        assert_eq!(c.points, vec![(1e6, 1.5)]);
        let e = read_response_curve("freq_hz,h\n1,2\n".as_bytes()).unwrap_err();
        assert!(matches!(e, Error::Csv(m) if m.contains("h_mag")));
        let e = read_response_curve("freq_hz,h_mag\n1,2\nx,3\n".as_bytes()).unwrap_err();
        assert!(matches!(e, Error::Csv(m) if m.contains("line 3")));
    }

    #[test]
    fn spectrum_round_trip() {
        let s = SpectralDensity::new(
            vec![1.0, 2.0],
            vec![1e-30, 2e-30],
            Sidedness::Single,
            Dimension::AREA / Dimension::FREQUENCY,
        )
        .unwrap();
        let mut buf = Vec::new();
        write_spectrum(&mut buf, &s).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("freq_hz,psd,unit,sidedness"));
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first[0], "1");
        assert_eq!(first[1].parse::<f64>().unwrap(), 1e-30);
        assert_eq!(first[3], "single");
    }
}
