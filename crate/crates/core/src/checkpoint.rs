//! Binary checkpoints of spinor states.
//!
//! Layout (little endian): magic `SRGSPIN\0`, format version (u32),
//! configuration-ordering tag (u32), n_points (u64), r_min and r_max (f64),
//! n_modes and n_exc (u32), dim (u64), time in a.u. (f64), then
//! dim·n_points complex amplitudes as (re, im) f64 pairs.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::sync::Arc;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use num_complex::Complex64;

use crate::bath::ConfigurationSpace;
use crate::error::{Error, Result};
use crate::grid::SpatialGrid;
use crate::hamiltonian::SpinorState;

pub const MAGIC: [u8; 8] = *b"SRGSPIN\0";
pub const FORMAT_VERSION: u32 = 1;
/// Configurations sorted by popcount, then by bitmask value.
pub const ORDERING_POPCOUNT_VALUE: u32 = 1;

pub fn write_checkpoint<W: Write>(mut w: W, psi: &SpinorState<f64>, time_au: f64) -> Result<()> {
    let grid = psi.grid();
    let space = psi.space();
    w.write_all(&MAGIC)?;
    w.write_u32::<LittleEndian>(FORMAT_VERSION)?;
    w.write_u32::<LittleEndian>(ORDERING_POPCOUNT_VALUE)?;
    w.write_u64::<LittleEndian>(grid.n_points() as u64)?;
    w.write_f64::<LittleEndian>(grid.r_min())?;
    w.write_f64::<LittleEndian>(grid.r_max())?;
    w.write_u32::<LittleEndian>(space.n_modes() as u32)?;
    w.write_u32::<LittleEndian>(space.n_exc() as u32)?;
    w.write_u64::<LittleEndian>(space.dim() as u64)?;
    w.write_f64::<LittleEndian>(time_au)?;
    for a in psi.amplitudes() {
        w.write_f64::<LittleEndian>(a.re)?;
        w.write_f64::<LittleEndian>(a.im)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a checkpoint back; returns the state and its time in a.u.
pub fn read_checkpoint<R: Read>(mut r: R) -> Result<(SpinorState<f64>, f64)> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if magic != MAGIC {
        return Err(Error::Checkpoint("not a spinor checkpoint".into()));
    }
    let version = r.read_u32::<LittleEndian>()?;
    if version != FORMAT_VERSION {
        return Err(Error::Checkpoint(format!(
            "unsupported checkpoint version {version} (expected {FORMAT_VERSION})"
        )));
    }
    let ordering = r.read_u32::<LittleEndian>()?;
    if ordering != ORDERING_POPCOUNT_VALUE {
        return Err(Error::Checkpoint(format!("unknown configuration ordering {ordering}")));
    }
    let n_points = r.read_u64::<LittleEndian>()? as usize;
    let r_min = r.read_f64::<LittleEndian>()?;
    let r_max = r.read_f64::<LittleEndian>()?;
    let n_modes = r.read_u32::<LittleEndian>()? as usize;
    let n_exc = r.read_u32::<LittleEndian>()? as usize;
    let dim = r.read_u64::<LittleEndian>()? as usize;
    let time = r.read_f64::<LittleEndian>()?;
    let grid = Arc::new(SpatialGrid::new(r_min, r_max, n_points)?);
    let space = Arc::new(ConfigurationSpace::new(n_modes, n_exc)?);
    if space.dim() != dim {
        return Err(Error::Checkpoint(format!(
            "header dimension {dim} disagrees with C({n_modes}, <= {n_exc}) = {}",
            space.dim()
        )));
    }
    let len = dim
        .checked_mul(n_points)
        .ok_or_else(|| Error::Checkpoint("amplitude count overflows".into()))?;
    let mut amps = Vec::with_capacity(len);
    for _ in 0..len {
        let re = r.read_f64::<LittleEndian>()?;
        let im = r.read_f64::<LittleEndian>()?;
        amps.push(Complex64::new(re, im));
    }
    let mut probe = [0u8; 1];
    if r.read(&mut probe)? != 0 {
        return Err(Error::Checkpoint("trailing data after amplitudes".into()));
    }
    Ok((SpinorState::from_amplitudes(grid, space, amps)?, time))
}

pub fn save(path: &Path, psi: &SpinorState<f64>, time_au: f64) -> Result<()> {
    write_checkpoint(BufWriter::new(File::create(path)?), psi, time_au)
}

pub fn load(path: &Path) -> Result<(SpinorState<f64>, f64)> {
    read_checkpoint(BufReader::new(File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SpinorState<f64> {
        let grid = Arc::new(SpatialGrid::new(-0.4, 1.2, 16).unwrap());
        let space = Arc::new(ConfigurationSpace::new(5, 2).unwrap());
        let amps = (0..16 * space.dim())
            .map(|k| Complex64::new((k as f64 * 0.37).sin(), (k as f64 * 1.3).cos() / 3.0))
            .collect();
        SpinorState::from_amplitudes(grid, space, amps).unwrap()
    }

    #[test]
    fn round_trip_is_exact() {
        let psi = sample();
        let mut buf = Vec::new();
        write_checkpoint(&mut buf, &psi, 1234.5).unwrap();
        let (back, t) = read_checkpoint(buf.as_slice()).unwrap();
        assert_eq!(t, 1234.5);
        assert_eq!(back.amplitudes(), psi.amplitudes());
        assert_eq!(back.space().masks(), psi.space().masks());
        assert_eq!(**back.grid(), **psi.grid());
    }

    #[test]
    fn corrupted_headers_are_rejected() {
        let psi = sample();
        let mut buf = Vec::new();
        write_checkpoint(&mut buf, &psi, 0.0).unwrap();
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(matches!(read_checkpoint(bad.as_slice()), Err(Error::Checkpoint(_))));
        let mut bad = buf.clone();
        bad[8] = 9;
        assert!(matches!(read_checkpoint(bad.as_slice()), Err(Error::Checkpoint(_))));
        let mut bad = buf.clone();
        bad.push(0);
        assert!(matches!(read_checkpoint(bad.as_slice()), Err(Error::Checkpoint(_))));
        let short = &buf[..buf.len() - 4];
        assert!(read_checkpoint(short).is_err());
    }
}
