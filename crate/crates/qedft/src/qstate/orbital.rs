//! Orbital sets on a grid and the two initial-state families used by the
//! experiments: Slater-type orbitals and planewaves.

use crate::error::{Error, Result};
use crate::lattice::GridRef;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// A list of single-particle orbitals on a grid.
///
/// Orbitals are stored as unit l2 grid vectors `w(r) = sqrt(dV) psi(r)`, so
/// `sum_r |w(r)|^2 = 1` is the discrete form of `int |psi|^2 d^3r = 1`.
#[derive(Debug, Clone)]
pub struct OrbitalSet {
    pub grid: GridRef,
    orbitals: Vec<Vec<Complex64>>,
}

impl OrbitalSet {
    /// Wraps pre-built orbital vectors, checking each is normalized to 1
    /// within 1e-10.
    pub fn new(grid: GridRef, orbitals: Vec<Vec<Complex64>>) -> Result<Self> {
        if orbitals.is_empty() {
            return Err(Error::Config("orbital set cannot be empty".into()));
        }
        for (i, orb) in orbitals.iter().enumerate() {
            if orb.len() != grid.n_grid {
                return Err(Error::Mismatch(format!(
                    "orbital {i} has {} entries, grid has {}",
                    orb.len(),
                    grid.n_grid
                )));
            }
            let norm: f64 = orb.iter().map(|v| v.norm_sqr()).sum();
            if (norm - 1.0).abs() > 1e-10 {
                return Err(Error::Numerical(format!("orbital {i} has norm^2 {norm}, expected 1")));
            }
        }
        Ok(OrbitalSet { grid, orbitals })
    }

    pub fn len(&self) -> usize {
        self.orbitals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbitals.is_empty()
    }

    pub fn orbital(&self, i: usize) -> &[Complex64] {
        &self.orbitals[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<Complex64>> {
        self.orbitals.iter()
    }

    /// Gram matrix `<w_i|w_j>` of the set.
    pub fn gram(&self) -> DMatrix<Complex64> {
        let m = self.len();
        DMatrix::from_fn(m, m, |i, j| {
            self.orbitals[i]
                .iter()
                .zip(&self.orbitals[j])
                .map(|(a, b)| a.conj() * b)
                .sum()
        })
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let g = self.gram();
        let m = self.len();
        let mut worst = 0.0f64;
        for i in 0..m {
            for j in 0..m {
                let target = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::default() };
                worst = worst.max((g[(i, j)] - target).norm());
            }
        }
        worst
    }

    /// Gram-Schmidt orthonormalization (two passes), dropping nothing:
    /// fails if the set is linearly dependent.
    pub fn orthonormalized(&self) -> Result<Self> {
        let mut out: Vec<Vec<Complex64>> = Vec::with_capacity(self.len());
        for orb in &self.orbitals {
            let mut v = orb.clone();
            for _ in 0..2 {
                for prev in &out {
                    let ip: Complex64 = prev.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (x, p) in v.iter_mut().zip(prev) {
                        *x -= ip * p;
                    }
                }
            }
            let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-10 {
                return Err(Error::Numerical("linearly dependent orbital set".into()));
            }
            for x in v.iter_mut() {
                *x /= norm;
            }
            out.push(v);
        }
        OrbitalSet::new(self.grid.clone(), out)
    }
}

/// A Slater-type orbital exp[-q (|x-x0| + |y-y0| + |z-z0|)] with
/// minimum-image coordinate differences, normalized on the grid.
///
/// `q` is in 1/bohr and `center` in bohr.
pub fn slater_orbital(grid: &GridRef, center: [f64; 3], q: f64) -> Result<Vec<Complex64>> {
    if !(q > 0.0) {
        return Err(Error::Config(format!("slater exponent must be positive, got {q}")));
    }
    let mut vals = Vec::with_capacity(grid.n_grid);
    for idx in 0..grid.n_grid {
        let p = grid.point(idx);
        let d = grid.displacement(p, center);
        let arg = -q * (d[0].abs() + d[1].abs() + d[2].abs());
        vals.push(Complex64::new(arg.exp(), 0.0));
    }
    let norm: f64 = vals.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    for v in vals.iter_mut() {
        *v /= norm;
    }
    Ok(vals)
}

/// All integer K with K^2 <= `kmax_sq`, sorted by (K^2, lexicographic).
/// For `kmax_sq = 2` this yields the 19 lowest planewaves of a cubic cell.
pub fn planewave_k_list(kmax_sq: i64) -> Vec<[i64; 3]> {
    let kmax = (kmax_sq as f64).sqrt().floor() as i64;
    let mut out = Vec::new();
    for kx in -kmax..=kmax {
        for ky in -kmax..=kmax {
            for kz in -kmax..=kmax {
                if kx * kx + ky * ky + kz * kz <= kmax_sq {
                    out.push([kx, ky, kz]);
                }
            }
        }
    }
    out.sort_by_key(|k| (k[0] * k[0] + k[1] * k[1] + k[2] * k[2], k[0], k[1], k[2]));
    out
}

/// Planewave orbitals psi_K(r) = V^{-1/2} exp(2 pi i K . (r / L)); exactly
/// orthonormal on the grid for distinct K.
pub fn planewave_orbitals(grid: &GridRef, ks: &[[i64; 3]]) -> Result<OrbitalSet> {
    for (a, ka) in ks.iter().enumerate() {
        for kb in ks.iter().skip(a + 1) {
            if ka == kb {
                return Err(Error::Config(format!("duplicate planewave index {ka:?}")));
            }
        }
    }
    let amp = 1.0 / (grid.n_grid as f64).sqrt();
    let orbitals = ks
        .iter()
        .map(|k| {
            (0..grid.n_grid)
                .map(|idx| {
                    let p = grid.point(idx);
                    let phase = 2.0
                        * std::f64::consts::PI
                        * (k[0] as f64 * p[0] / grid.cell.lengths[0]
                            + k[1] as f64 * p[1] / grid.cell.lengths[1]
                            + k[2] as f64 * p[2] / grid.cell.lengths[2]);
                    Complex64::from_polar(amp, phase)
                })
                .collect()
        })
        .collect();
    OrbitalSet::new(grid.clone(), orbitals)
}
