//! Binary dump/load of QE statevectors, used by CLI checkpointing.
//!
//! Layout (little endian): magic `QEDFSTV1`, qubit counts (3 x u32),
//! lengths in bohr (3 x f64), periodic flag (u8), n_band (u32), k-point
//! fractional coordinates (3 x f64), k-point weight (f64), then the raw
//! amplitude array as interleaved re/im f64 pairs.
//!
//! The loader rebuilds the grid from the header alone; the stored cell
//! carries no atoms.

use crate::error::{Error, Result};
use crate::lattice::{build_grid, Cell, KPoint};
use crate::qstate::QeState;
use num_complex::Complex64;
use std::io::{Read, Write};
use std::path::Path;

const MAGIC: &[u8; 8] = b"QEDFSTV1";

pub fn save_state(state: &QeState, path: &Path) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    f.write_all(MAGIC)?;
    for ax in 0..3 {
        f.write_all(&(state.grid().cell.qubits[ax]).to_le_bytes())?;
    }
    for ax in 0..3 {
        f.write_all(&state.grid().cell.lengths[ax].to_le_bytes())?;
    }
    f.write_all(&[state.grid().cell.periodic as u8])?;
    f.write_all(&(state.n_band() as u32).to_le_bytes())?;
    for ax in 0..3 {
        f.write_all(&state.kpoint().frac[ax].to_le_bytes())?;
    }
    f.write_all(&state.kpoint().weight.to_le_bytes())?;
    for a in state.amplitudes() {
        f.write_all(&a.re.to_le_bytes())?;
        f.write_all(&a.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn load_state(path: &Path) -> Result<QeState> {
    let mut f = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut magic = [0u8; 8];
    f.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Config(format!("{} is not a state dump", path.display())));
    }
    let mut u32buf = [0u8; 4];
    let mut f64buf = [0u8; 8];
    let mut read_u32 = |f: &mut dyn Read| -> Result<u32> {
        f.read_exact(&mut u32buf)?;
        Ok(u32::from_le_bytes(u32buf))
    };
    let qubits = [
        read_u32(&mut f)?,
        read_u32(&mut f)?,
        read_u32(&mut f)?,
    ];
    let mut read_f64 = |f: &mut dyn Read| -> Result<f64> {
        f.read_exact(&mut f64buf)?;
        Ok(f64::from_le_bytes(f64buf))
    };
    let lengths = [read_f64(&mut f)?, read_f64(&mut f)?, read_f64(&mut f)?];
    let mut flag = [0u8; 1];
    f.read_exact(&mut flag)?;
    let mut u32buf2 = [0u8; 4];
    f.read_exact(&mut u32buf2)?;
    let n_band = u32::from_le_bytes(u32buf2) as usize;
    let mut read_f64b = |f: &mut dyn Read| -> Result<f64> {
        let mut b = [0u8; 8];
        f.read_exact(&mut b)?;
        Ok(f64::from_le_bytes(b))
    };
    let frac = [read_f64b(&mut f)?, read_f64b(&mut f)?, read_f64b(&mut f)?];
    let weight = read_f64b(&mut f)?;
    let cell = Cell::new(lengths, qubits, vec![], flag[0] != 0)?;
    let grid = build_grid(&cell);
    let slots = n_band.next_power_of_two();
    let count = slots * grid.n_grid;
    let mut amps = Vec::with_capacity(count);
    for _ in 0..count {
        let re = read_f64b(&mut f)?;
        let im = read_f64b(&mut f)?;
        amps.push(Complex64::new(re, im));
    }
    QeState::from_raw(grid, KPoint::new(frac, weight), n_band, amps)
}
