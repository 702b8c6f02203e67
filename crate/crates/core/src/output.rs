//! CSV writers for trajectories and entanglement time series.
//!
//! Every file starts with one `#` comment line naming its schema, then a
//! header row. Rows are flushed as they are written so a run that aborts
//! leaves everything up to the failure on disk.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::entanglement::{EntanglementSummary, PairEntanglementRecord};
use crate::error::Result;
use crate::observables::TrajectoryRecord;

pub const TRAJECTORY_SCHEMA: &str = "# surrogate trajectory v1 (atomic units unless noted)";
pub const ENTANGLEMENT_SCHEMA: &str = "# surrogate bath entanglement v1";
pub const PAIRS_SCHEMA: &str = "# surrogate bath pair entanglement v1 (long format)";

fn open(path: &Path, schema: &str) -> Result<csv::Writer<BufWriter<File>>> {
    let mut f = BufWriter::new(File::create(path)?);
    writeln!(f, "{schema}")?;
    Ok(csv::Writer::from_writer(f))
}

fn num(x: f64) -> String {
    format!("{x:e}")
}

pub struct TrajectoryWriter {
    out: csv::Writer<BufWriter<File>>,
    n_pops: usize,
    cat: bool,
}

impl TrajectoryWriter {
    /// `n_pops` bath-population columns; `cat` adds n_coh, C2 and tr_rho_coh2.
    pub fn create(path: &Path, n_pops: usize, cat: bool) -> Result<Self> {
        let mut out = open(path, TRAJECTORY_SCHEMA)?;
        let mut header: Vec<String> = ["time_fs", "mean_R_au", "E_bare_au", "E_eff_au", "norm"]
            .into_iter()
            .map(String::from)
            .collect();
        header.extend((0..n_pops).map(|k| format!("pop_{k}")));
        if cat {
            header.extend(["n_coh", "C2", "tr_rho_coh2"].map(String::from));
        }
        out.write_record(&header)?;
        out.flush()?;
        Ok(TrajectoryWriter { out, n_pops, cat })
    }

    pub fn write(&mut self, rec: &TrajectoryRecord) -> Result<()> {
        let mut row = vec![
            num(rec.time_fs),
            num(rec.mean_r),
            num(rec.e_bare()),
            num(rec.e_eff()),
            num(rec.norm),
        ];
        row.extend((0..self.n_pops).map(|k| num(rec.populations.get(k).copied().unwrap_or(0.0))));
        if self.cat {
            for v in [rec.n_coh, rec.c2, rec.tr_rho_coh2] {
                row.push(v.map(num).unwrap_or_default());
            }
        }
        self.out.write_record(&row)?;
        self.out.flush()?;
        Ok(())
    }
}

pub struct EntanglementWriter {
    out: csv::Writer<BufWriter<File>>,
}

impl EntanglementWriter {
    pub fn create(path: &Path) -> Result<Self> {
        let mut out = open(path, ENTANGLEMENT_SCHEMA)?;
        out.write_record([
            "time_fs",
            "mean_lambda0",
            "entangled_fraction",
            "mean_eof",
            "mean_lambda0_all_pairs",
        ])?;
        out.flush()?;
        Ok(EntanglementWriter { out })
    }

    pub fn write(&mut self, time_fs: f64, s: &EntanglementSummary) -> Result<()> {
        self.out.write_record([
            num(time_fs),
            num(s.mean_lambda0),
            num(s.entangled_fraction),
            num(s.mean_eof),
            num(s.mean_lambda0_all),
        ])?;
        self.out.flush()?;
        Ok(())
    }
}

pub struct PairWriter {
    out: csv::Writer<BufWriter<File>>,
}

impl PairWriter {
    pub fn create(path: &Path) -> Result<Self> {
        let mut out = open(path, PAIRS_SCHEMA)?;
        out.write_record(["time_fs", "i", "j", "lambda0", "W1", "W2", "C", "E"])?;
        out.flush()?;
        Ok(PairWriter { out })
    }

    pub fn write(&mut self, time_fs: f64, records: &[PairEntanglementRecord]) -> Result<()> {
        for r in records {
            self.out.write_record([
                num(time_fs),
                r.i.to_string(),
                r.j.to_string(),
                num(r.lambda0),
                num(r.w1),
                num(r.w2),
                num(r.concurrence),
                num(r.eof),
            ])?;
        }
        self.out.flush()?;
        Ok(())
    }
}

/// Reads back a CSV written by this module: header names and numeric rows.
/// Empty cells become NaN.
pub fn read_table(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(path)?;
    let header = rdr.headers()?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        rows.push(rec.iter().map(|c| c.parse::<f64>().unwrap_or(f64::NAN)).collect());
    }
    Ok((header, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::EnergyParts;

    #[test]
    fn trajectory_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let rec = TrajectoryRecord {
            time_fs: 0.5,
            mean_r: 0.1 / 3.0,
            parts: EnergyParts {
                system: -0.0159,
                bath: 1e-6,
                coupling: -2e-6,
                interaction: 0.0,
            },
            norm: 1.0,
            populations: vec![0.9, 0.1],
            n_coh: Some(0.25),
            c2: None,
            tr_rho_coh2: Some(1e-3),
        };
        let mut w = TrajectoryWriter::create(&path, 2, true).unwrap();
        w.write(&rec).unwrap();
        drop(w);
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with(TRAJECTORY_SCHEMA));
        let (header, rows) = read_table(&path).unwrap();
        assert_eq!(header[1], "mean_R_au");
        assert_eq!(header.len(), 10);
        assert_eq!(rows[0][1], 0.1 / 3.0);
        assert_eq!(rows[0][3], rec.e_eff());
        assert!(rows[0][8].is_nan());
    }
}
