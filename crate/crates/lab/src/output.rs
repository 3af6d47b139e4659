//! Time-series CSV and flat binary field dumps.
//!
//! Dump layout (little endian): the 4 bytes `BSQ1`, then `dim: u64`,
//! `n: u64`, `L: f64`, `ε: f64`, `time: f64`, then `η` followed by each
//! velocity component, every field as `n^dim` row-major `f64` values.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use boussinesq::diagnostics::EnergyReport;
use boussinesq::spectral_ops::{Field, Grid};
use boussinesq::systems::State;

use crate::error::{LabError, LabResult};

pub const CSV_COLUMNS: [&str; 13] = [
    "t",
    "hamiltonian",
    "E_s",
    "E",
    "total_E",
    "mass",
    "noncavitation_margin",
    "curl_norm",
    "eta_Hs",
    "vel_Hs",
    "eta_Xs",
    "vel_Xs",
    "status",
];

fn cell(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// One CSV record; `None` entries are left empty.
pub fn csv_record(r: &EnergyReport, status: &str) -> Vec<String> {
    let mut row: Vec<String> = [
        Some(r.time),
        r.hamiltonian,
        r.energy_s,
        r.quasilinear_e,
        r.total_e,
        Some(r.mass),
        Some(r.noncavitation_margin),
        r.curl_norm,
        Some(r.eta_hs),
        Some(r.vel_hs),
        Some(r.eta_xs),
        Some(r.vel_xs),
    ]
    .into_iter()
    .map(cell)
    .collect();
    row.push(status.to_string());
    row
}

pub fn write_csv(path: &Path, rows: &[(EnergyReport, String)]) -> LabResult<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(CSV_COLUMNS)?;
    for (r, status) in rows {
        w.write_record(csv_record(r, status))?;
    }
    w.flush()?;
    Ok(())
}


pub const DUMP_MAGIC: &[u8; 4] = b"BSQ1";

pub fn write_dump(path: &Path, s: &State, eps: f64) -> LabResult<()> {
    let g = s.grid();
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(DUMP_MAGIC)?;
    w.write_all(&(g.dim() as u64).to_le_bytes())?;
    w.write_all(&(g.n() as u64).to_le_bytes())?;
    for x in [g.length(), eps, s.time] {
        w.write_all(&x.to_le_bytes())?;
    }
    for f in std::iter::once(&s.eta).chain(&s.vel) {
        for x in f.values() {
            w.write_all(&x.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Inverse of [`write_dump`]; returns the state and `ε`.
pub fn read_dump(path: &Path) -> LabResult<(State, f64)> {
    let mut bytes = Vec::new();
    File::open(path)?.read_to_end(&mut bytes)?;
    let bad = |m: &str| LabError::Io(std::io::Error::new(std::io::ErrorKind::InvalidData, format!("{}: {m}", path.display())));
    if bytes.len() < 44 || &bytes[..4] != DUMP_MAGIC {
        return Err(bad("not a BSQ1 dump"));
    }
    let word = |i: usize| -> [u8; 8] { bytes[4 + 8 * i..12 + 8 * i].try_into().unwrap() };
    let dim = u64::from_le_bytes(word(0)) as usize;
    let n = u64::from_le_bytes(word(1)) as usize;
    let (length, eps, time) = (f64::from_le_bytes(word(2)), f64::from_le_bytes(word(3)), f64::from_le_bytes(word(4)));
    let g = Grid::new(dim, n, length).map_err(|e| bad(&e.to_string()))?;
    let body = &bytes[44..];
    if body.len() != 8 * (1 + dim) * g.len() {
        return Err(bad("truncated field data"));
    }
    let values: Vec<f64> = body.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    let fields: Vec<Field> = values.chunks(g.len()).map(|v| Field::new(&g, v.to_vec())).collect::<Result<_, _>>()?;
    let state = State::new(fields[0].clone(), fields[1..].to_vec(), time)?;
    Ok((state, eps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dump_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let g = Grid::new(2, 8, 3.0).unwrap();
        let s = State::new(
            Field::from_fn(&g, |x, y| x.sin() + y),
            vec![Field::from_fn(&g, |x, _| x), Field::from_fn(&g, |_, y| y.cos())],
            0.25,
        )
        .unwrap();
        let p = dir.path().join("f.bsq");
        write_dump(&p, &s, 0.1).unwrap();
        assert_eq!(std::fs::metadata(&p).unwrap().len(), 44 + 8 * 3 * 64);
        let (t, eps) = read_dump(&p).unwrap();
        assert_eq!(eps, 0.1);
        assert_eq!(t.time, 0.25);
        assert_eq!(t.sup_dist(&s), 0.0);
    }

    #[test]
    fn empty_cells_for_missing_quantities() {
        let r = EnergyReport { time: 0.5, mass: 1.0, ..Default::default() };
        let rec = csv_record(&r, "healthy");
        assert_eq!(rec.len(), CSV_COLUMNS.len());
        assert_eq!(rec[0], "0.5");
        assert_eq!(rec[1], "");
        assert_eq!(rec[12], "healthy");
    }
}
