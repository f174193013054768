//! Tabulated optical constants: `energy_eV,n,k` CSV with `#` comments.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::medium::MediumParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpticalRow {
    pub energy: f64,
    pub n_real: f64,
    pub n_imag: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpticalDataSet {
    pub rows: Vec<OpticalRow>,
    pub source: String,
}

impl OpticalDataSet {
    /// Checks energies strictly increasing, n > 0 and k ≥ 0.
    pub fn new(rows: Vec<OpticalRow>, source: impl Into<String>) -> Result<Self> {
        for (i, r) in rows.iter().enumerate() {
            check_row(r).map_err(|message| Error::OpticalData { line: i as u64 + 1, message })?;
            if i > 0 && !(r.energy > rows[i - 1].energy) {
                return Err(Error::OpticalData {
                    line: i as u64 + 1,
                    message: format!("energy {} not above the previous row", r.energy),
                });
            }
        }
        Ok(OpticalDataSet { rows, source: source.into() })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Writes the table in the format [`parse_optical_data`] reads. Floats use
    /// the shortest round-trip representation, so reloading is bit-exact.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# source: {}", self.source)?;
        writeln!(w, "energy_eV,n,k")?;
        for r in &self.rows {
            writeln!(w, "{:?},{:?},{:?}", r.energy, r.n_real, r.n_imag)?;
        }
        Ok(())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(f))
    }
}

fn check_row(r: &OpticalRow) -> std::result::Result<(), String> {
    if !r.energy.is_finite() || r.energy <= 0.0 {
        return Err(format!("energy must be positive, got {}", r.energy));
    }
    if !r.n_real.is_finite() || r.n_real <= 0.0 {
        return Err(format!("n must be positive, got {}", r.n_real));
    }
    if !r.n_imag.is_finite() || r.n_imag < 0.0 {
        return Err(format!("k must be >= 0, got {}", r.n_imag));
    }
    Ok(())
}

/// Parses CSV text; errors carry the 1-based line number in the input.
pub fn parse_optical_data<R: Read>(mut input: R, source: &str) -> Result<OpticalDataSet> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    // csv skips comment lines without counting them; map record index → file line
    let physical: Vec<u64> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim_start().starts_with('#') && !l.trim().is_empty())
        .map(|(i, _)| i as u64 + 1)
        .collect();
    let line_of = |record: u64| physical.get(record as usize).copied().unwrap_or(0);
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header = reader.headers()?.clone();
    let names: Vec<&str> = header.iter().collect();
    if names != ["energy_eV", "n", "k"] {
        let line = line_of(0);
        return Err(Error::OpticalData { line, message: format!("expected header energy_eV,n,k, got {names:?}") });
    }
    let mut rows = Vec::new();
    let mut prev: Option<f64> = None;
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map(|p| line_of(p.record())).unwrap_or(0);
            Error::OpticalData { line, message: e.to_string() }
        })?;
        let line = rec.position().map(|p| line_of(p.record())).unwrap_or(0);
        let bad = |message: String| Error::OpticalData { line, message };
        if rec.len() != 3 {
            return Err(bad(format!("expected 3 fields, got {}", rec.len())));
        }
        let field = |i: usize| -> Result<f64> {
            rec[i].parse::<f64>().map_err(|_| bad(format!("cannot parse {:?} as a number", &rec[i])))
        };
        let row = OpticalRow { energy: field(0)?, n_real: field(1)?, n_imag: field(2)? };
        check_row(&row).map_err(bad)?;
        if let Some(p) = prev {
            if !(row.energy > p) {
                return Err(bad(format!("energies must be strictly increasing ({} after {p})", row.energy)));
            }
        }
        prev = Some(row.energy);
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::OpticalData { line: 0, message: "no data rows".into() });
    }
    Ok(OpticalDataSet { rows, source: source.to_string() })
}

pub fn load_optical_data(path: impl AsRef<Path>) -> Result<OpticalDataSet> {
    let path = path.as_ref();
    let f = std::fs::File::open(path)?;
    parse_optical_data(f, &path.display().to_string())
}

/// n(ω) of the model medium at the given energies.
pub fn synthesize(m: &MediumParams, energies: &[f64], source: &str) -> Result<OpticalDataSet> {
    let rows = energies
        .iter()
        .map(|&e| {
            let n = m.refractive_index(e)?;
            Ok(OpticalRow { energy: e, n_real: n.re, n_imag: n.im.max(0.0) })
        })
        .collect::<Result<Vec<_>>>()?;
    OpticalDataSet::new(rows, source)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_input() {
        let err = parse_optical_data("energy_eV,n,k\n# nothing\n".as_bytes(), "t").unwrap_err();
        assert!(err.to_string().contains("no data rows"));
        assert!(parse_optical_data("".as_bytes(), "t").is_err());
    }

    #[test]
    fn single_row() {
        let d = parse_optical_data("# silicon\nenergy_eV,n,k\n1.5,3.67,0.005\n".as_bytes(), "t").unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.rows[0], OpticalRow { energy: 1.5, n_real: 3.67, n_imag: 0.005 });
    }

    #[test]
    fn errors_name_the_line() {
        let text = "energy_eV,n,k\n1.0,3.5,0.0\n# comment\n2.0,abc,0.1\n";
        match parse_optical_data(text.as_bytes(), "t") {
            Err(Error::OpticalData { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
        let text = "energy_eV,n,k\n2.0,3.5,0.0\n1.0,3.5,0.0\n";
        match parse_optical_data(text.as_bytes(), "t") {
            Err(Error::OpticalData { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("increasing"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_optical_data("energy_eV,n,k\n1.0,-3.5,0.0\n".as_bytes(), "t").is_err());
        assert!(parse_optical_data("energy_eV,n,k\n1.0,3.5,-0.1\n".as_bytes(), "t").is_err());
        assert!(parse_optical_data("e,n,k\n1.0,3.5,0.1\n".as_bytes(), "t").is_err());
        assert!(parse_optical_data("energy_eV,n,k\n1.0,3.5\n".as_bytes(), "t").is_err());
    }

    #[test]
    fn synthetic_round_trip_is_bit_exact() {
        let m = MediumParams::new(3.3, 10.72, 0.75).unwrap();
        let energies: Vec<f64> = (1..=60).map(|i| 0.1 * i as f64).collect();
        let d = synthesize(&m, &energies, "synthetic").unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("si.csv");
        d.save(&path).unwrap();
        let back = load_optical_data(&path).unwrap();
        assert_eq!(back.rows, d.rows);
    }
}
