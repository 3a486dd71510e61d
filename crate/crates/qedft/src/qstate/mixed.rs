//! Density matrices over the band ⊗ grid register, for channel and PITE
//! evolution.

use crate::error::{Error, Result};
use crate::lattice::{GridRef, KPoint};
use crate::qstate::QeState;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

/// Hermitian trace-one matrix over `(band label, grid point)` indices,
/// stored column-major: entry `(row, col)` is `data[col * dim + row]`.
#[derive(Debug, Clone)]
pub struct MixedState {
    grid: GridRef,
    kpoint: KPoint,
    n_band: usize,
    label_slots: usize,
    dim: usize,
    data: Vec<Complex64>,
}

impl MixedState {
    pub fn from_pure(psi: &QeState) -> Self {
        let dim = psi.amplitudes().len();
        let amps = psi.amplitudes();
        let mut data = vec![Complex64::default(); dim * dim];
        for col in 0..dim {
            let phase = amps[col].conj();
            if phase.norm_sqr() == 0.0 {
                continue;
            }
            let slice = &mut data[col * dim..(col + 1) * dim];
            for (slot, a) in slice.iter_mut().zip(amps) {
                *slot = a * phase;
            }
        }
        MixedState {
            grid: psi.grid().clone(),
            kpoint: psi.kpoint().clone(),
            n_band: psi.n_band(),
            label_slots: psi.label_slots(),
            dim,
            data,
        }
    }

    pub fn from_raw(
        grid: GridRef,
        kpoint: KPoint,
        n_band: usize,
        data: Vec<Complex64>,
    ) -> Result<Self> {
        let label_slots = n_band.next_power_of_two();
        let dim = label_slots * grid.n_grid;
        if data.len() != dim * dim {
            return Err(Error::Mismatch(format!(
                "matrix has {} entries, register dimension is {dim}",
                data.len()
            )));
        }
        Ok(MixedState { grid, kpoint, n_band, label_slots, dim, data })
    }

    pub fn grid(&self) -> &GridRef {
        &self.grid
    }

    pub fn kpoint(&self) -> &KPoint {
        &self.kpoint
    }

    pub fn n_band(&self) -> usize {
        self.n_band
    }

    pub fn label_slots(&self) -> usize {
        self.label_slots
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.data[col * self.dim + row]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn scale(&mut self, s: f64) {
        for v in self.data.iter_mut() {
            *v *= s;
        }
    }

    pub fn normalize(&mut self) -> Result<()> {
        let t = self.trace().re;
        if t <= 1e-300 {
            return Err(Error::Numerical(format!("trace {t} too small to normalize")));
        }
        self.scale(1.0 / t);
        Ok(())
    }

    /// Applies `f(col_index, column)` to every column, in parallel.
    pub fn map_columns<F>(&mut self, f: F)
    where
        F: Fn(usize, &mut [Complex64]) + Sync,
    {
        let dim = self.dim;
        self.data
            .par_chunks_exact_mut(dim)
            .enumerate()
            .for_each(|(c, col)| f(c, col));
    }

    /// In-place conjugate transpose.
    pub fn adjoint_in_place(&mut self) {
        let dim = self.dim;
        for col in 0..dim {
            let diag = col * dim + col;
            self.data[diag] = self.data[diag].conj();
            for row in col + 1..dim {
                let a = col * dim + row;
                let b = row * dim + col;
                let va = self.data[a].conj();
                let vb = self.data[b].conj();
                self.data[a] = vb;
                self.data[b] = va;
            }
        }
    }

    /// Replaces the matrix by its Hermitian part.
    pub fn hermitize(&mut self) {
        let dim = self.dim;
        for col in 0..dim {
            let diag = col * dim + col;
            self.data[diag] = Complex64::new(self.data[diag].re, 0.0);
            for row in col + 1..dim {
                let a = col * dim + row;
                let b = row * dim + col;
                let avg = 0.5 * (self.data[a] + self.data[b].conj());
                self.data[a] = avg;
                self.data[b] = avg.conj();
            }
        }
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let dim = self.dim;
        let mut worst = 0.0f64;
        for col in 0..dim {
            for row in col..dim {
                let d = (self.data[col * dim + row] - self.data[row * dim + col].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// `y = rho x`.
    pub fn matvec(&self, x: &[Complex64], y: &mut [Complex64]) {
        let dim = self.dim;
        y.iter_mut().for_each(|v| *v = Complex64::default());
        for (col, xc) in x.iter().enumerate() {
            if xc.norm_sqr() == 0.0 {
                continue;
            }
            let column = &self.data[col * dim..(col + 1) * dim];
            for (yo, m) in y.iter_mut().zip(column) {
                *yo += m * xc;
            }
        }
    }

    /// Largest eigenvalue of the trace-normalized matrix (the purity), by
    /// power iteration with an optional warm-start vector that is updated
    /// in place for reuse across steps.
    pub fn purity(&self, warm: Option<&mut Vec<Complex64>>) -> f64 {
        let dim = self.dim;
        let t = self.trace().re;
        let mut local;
        let v = match warm {
            Some(w) => {
                if w.len() != dim {
                    *w = uniform_start(dim);
                }
                w
            }
            None => {
                local = uniform_start(dim);
                &mut local
            }
        };
        let mut y = vec![Complex64::default(); dim];
        let mut lambda = 0.0;
        for _ in 0..500 {
            self.matvec(v, &mut y);
            let norm: f64 = y.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-300 {
                return 0.0;
            }
            for (a, b) in v.iter_mut().zip(&y) {
                *a = b / norm;
            }
            // Rayleigh quotient of the normalized vector.
            self.matvec(v, &mut y);
            let rq: f64 = v.iter().zip(&y).map(|(a, b)| (a.conj() * b).re).sum();
            if (rq - lambda).abs() < 1e-12 * rq.abs().max(1.0) {
                lambda = rq;
                break;
            }
            lambda = rq;
        }
        lambda / t
    }

    /// `<psi| rho |psi> / tr(rho)` against a pure QE state on the same
    /// register.
    pub fn fidelity_against(&self, psi: &QeState) -> Result<f64> {
        if psi.amplitudes().len() != self.dim {
            return Err(Error::Mismatch("state dimension differs from density matrix".into()));
        }
        let v = psi.amplitudes();
        let mut acc = Complex64::default();
        for col in 0..self.dim {
            let vc = v[col];
            if vc.norm_sqr() == 0.0 {
                continue;
            }
            let column = &self.data[col * self.dim..(col + 1) * self.dim];
            let mut partial = Complex64::default();
            for (m, vr) in column.iter().zip(v) {
                partial += vr.conj() * m;
            }
            acc += partial * vc;
        }
        Ok(acc.re / self.trace().re)
    }

    /// Grid marginal of the diagonal, `p(r) = sum_i rho(ir, ir)`, normalized
    /// by the trace so it sums to one.
    pub fn grid_marginal(&self) -> Vec<f64> {
        let n = self.grid.n_grid;
        let mut p = vec![0.0; n];
        for i in 0..self.n_band {
            for r in 0..n {
                let idx = i * n + r;
                p[r] += self.data[idx * self.dim + idx].re;
            }
        }
        let t: f64 = p.iter().sum();
        if t > 0.0 {
            for v in p.iter_mut() {
                *v /= t;
            }
        }
        p
    }

    /// Electron density carried by the diagonal, `p(r) n_elec / dV`.
    pub fn diagonal_density(&self, n_elec: f64) -> Vec<f64> {
        let mut p = self.grid_marginal();
        let scale = n_elec / self.grid.dv;
        for v in p.iter_mut() {
            *v *= scale;
        }
        p
    }

    pub fn to_dmatrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_column_slice(self.dim, self.dim, &self.data)
    }

    /// Hermiticity within 1e-10 and trace 1 within 1e-10. Positive
    /// semidefiniteness is checked separately by the dense test helpers.
    pub fn validate(&self) -> Result<()> {
        let h = self.hermiticity_defect();
        if h > 1e-10 {
            return Err(Error::Numerical(format!("hermiticity defect {h:.3e}")));
        }
        let t = self.trace();
        if (t.re - 1.0).abs() > 1e-10 || t.im.abs() > 1e-12 {
            return Err(Error::Numerical(format!("trace {t} deviates from 1")));
        }
        Ok(())
    }
}

fn uniform_start(dim: usize) -> Vec<Complex64> {
    // Deterministic start with all basis components present.
    (0..dim)
        .map(|i| Complex64::from_polar(1.0 / (dim as f64).sqrt(), 0.1 * i as f64))
        .collect()
}
