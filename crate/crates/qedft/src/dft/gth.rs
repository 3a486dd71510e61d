//! Local part of GTH norm-conserving pseudopotentials.
//!
//! Radial form:
//!
//! ```text
//! v(r) = -Z erf(r / (sqrt(2) r_loc)) / r
//!        + exp(-(r/r_loc)^2 / 2) [c1 + c2 (r/r_loc)^2 + c3 (r/r_loc)^4 + c4 (r/r_loc)^6]
//! ```
//!
//! finite at the origin with value `-Z sqrt(2/pi)/r_loc + c1`. For periodic
//! cells the potential is assembled in reciprocal space from the analytic
//! transform with the G = 0 component set to zero (neutralizing-background
//! convention); non-periodic cells are evaluated directly in real space.

use crate::dft::PotentialField;
use crate::error::{Error, Result};
use crate::fft::GridFft;
use crate::lattice::{Atom, GridRef};
use num_complex::Complex64;
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GthParams {
    pub z_ion: f64,
    pub r_loc: f64,
    pub c: [f64; 4],
}

impl GthParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_loc > 0.0) {
            return Err(Error::Config(format!("r_loc must be positive, got {}", self.r_loc)));
        }
        Ok(())
    }
}

/// Species -> parameters table, loadable from the documented plain-text
/// format (`species z_ion r_loc c1 c2 c3 c4`, `#` comments).
#[derive(Debug, Clone)]
pub struct GthTable {
    map: HashMap<String, GthParams>,
}

impl GthTable {
    /// The parameters shipped with the crate (H and Li, one valence
    /// electron each, LDA).
    pub fn builtin() -> Self {
        Self::parse(include_str!("../../data/gth_lda.txt"))
            .expect("builtin pseudopotential table parses")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut map = HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 7 {
                return Err(Error::Config(format!(
                    "pseudopotential table line {}: expected 7 fields, got {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            let num = |s: &str| -> Result<f64> {
                s.parse::<f64>()
                    .map_err(|e| Error::Config(format!("line {}: bad number {s}: {e}", lineno + 1)))
            };
            let params = GthParams {
                z_ion: num(fields[1])?,
                r_loc: num(fields[2])?,
                c: [num(fields[3])?, num(fields[4])?, num(fields[5])?, num(fields[6])?],
            };
            params.validate()?;
            map.insert(fields[0].to_string(), params);
        }
        Ok(GthTable { map })
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn get(&self, species: &str) -> Result<&GthParams> {
        self.map.get(species).ok_or_else(|| {
            Error::Config(format!("no pseudopotential parameters for species {species}"))
        })
    }
}

/// Radial value of the local pseudopotential at distance `r` (bohr).
pub fn gth_local_real(p: &GthParams, r: f64) -> f64 {
    let a = p.r_loc;
    let coulomb = if r < 1e-10 {
        -p.z_ion * (2.0 / std::f64::consts::PI).sqrt() / a
    } else {
        -p.z_ion * libm::erf(r / (std::f64::consts::SQRT_2 * a)) / r
    };
    let x2 = (r / a) * (r / a);
    let poly = p.c[0] + x2 * (p.c[1] + x2 * (p.c[2] + x2 * p.c[3]));
    coulomb + (-0.5 * x2).exp() * poly
}

/// Analytic Fourier transform over all space, `integral v(r) e^{-iGr} d3r`,
/// valid for `G != 0`.
pub fn gth_local_gcoeff(p: &GthParams, g2: f64) -> f64 {
    let a = p.r_loc;
    let t = g2 * a * a;
    let gauss = (-0.5 * t).exp();
    let coulomb = -4.0 * std::f64::consts::PI * p.z_ion / g2;
    let prefac = (2.0 * std::f64::consts::PI).powf(1.5) * a.powi(3);
    let poly = p.c[0]
        + p.c[1] * (3.0 - t)
        + p.c[2] * (15.0 - 10.0 * t + t * t)
        + p.c[3] * (105.0 - 105.0 * t + 21.0 * t * t - t * t * t);
    gauss * (coulomb + prefac * poly)
}

/// Total local external potential of all atoms on the grid.
pub fn gth_local_potential(grid: &GridRef, atoms: &[Atom], table: &GthTable) -> Result<PotentialField> {
    for atom in atoms {
        table.get(&atom.species)?;
    }
    if grid.cell.periodic {
        periodic_potential(grid, atoms, table)
    } else {
        real_space_potential(grid, atoms, table)
    }
}

fn real_space_potential(grid: &GridRef, atoms: &[Atom], table: &GthTable) -> Result<PotentialField> {
    let mut values = vec![0.0; grid.n_grid];
    for atom in atoms {
        let p = table.get(&atom.species)?;
        for (idx, v) in values.iter_mut().enumerate() {
            let r = grid.distance(grid.point(idx), atom.position);
            *v += gth_local_real(p, r);
        }
    }
    PotentialField::new(grid.clone(), values)
}

fn periodic_potential(grid: &GridRef, atoms: &[Atom], table: &GthTable) -> Result<PotentialField> {
    let volume = grid.cell.volume();
    let n = grid.n;
    let mut coeffs = vec![Complex64::default(); grid.n_grid];
    let zero_idx = grid.index(n[0] / 2, n[1] / 2, n[2] / 2);
    for i in 0..n[0] {
        let gx = grid.gvecs[0][i];
        for j in 0..n[1] {
            let gy = grid.gvecs[1][j];
            for k in 0..n[2] {
                let idx = grid.index(i, j, k);
                if idx == zero_idx {
                    continue;
                }
                let gz = grid.gvecs[2][k];
                let g2 = gx * gx + gy * gy + gz * gz;
                let mut c = Complex64::default();
                for atom in atoms {
                    let p = table.get(&atom.species)?;
                    let phase = -(gx * atom.position[0]
                        + gy * atom.position[1]
                        + gz * atom.position[2]);
                    c += Complex64::from_polar(gth_local_gcoeff(p, g2) / volume, phase);
                }
                coeffs[idx] = c;
            }
        }
    }
    // V(r) = sum_G c_G e^{iGr}; the unitary inverse transform carries a
    // 1/sqrt(N) factor, so scale the coefficients up front.
    let scale = (grid.n_grid as f64).sqrt();
    for c in coeffs.iter_mut() {
        *c *= scale;
    }
    let fft = GridFft::shared(grid.n);
    fft.cqft_inverse(&mut coeffs);
    let values = coeffs.iter().map(|c| c.re).collect();
    PotentialField::new(grid.clone(), values)
}
