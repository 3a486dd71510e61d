//! Matrix-free application of the single-particle KS Hamiltonian
//! `H = |G + k|^2 / 2 + V(r)`: kinetic part in momentum space via the
//! centered transform, potential pointwise in real space.

use crate::dft::PotentialField;
use crate::fft::GridFft;
use crate::lattice::{GridRef, KPoint};
use num_complex::Complex64;
use std::sync::Arc;

pub struct KsHamiltonian {
    grid: GridRef,
    kinetic: Vec<f64>,
    potential: Vec<f64>,
    fft: Arc<GridFft>,
}

impl KsHamiltonian {
    pub fn new(grid: &GridRef, potential: &PotentialField, kpoint: &KPoint) -> Self {
        let k_cart = kpoint.cartesian(grid.cell.lengths);
        KsHamiltonian {
            grid: grid.clone(),
            kinetic: grid.kinetic_diag(k_cart),
            potential: potential.values().to_vec(),
            fft: GridFft::shared(grid.n),
        }
    }

    /// Kinetic-only Hamiltonian (V = 0).
    pub fn kinetic_only(grid: &GridRef, kpoint: &KPoint) -> Self {
        Self::new(grid, &PotentialField::zero(grid.clone()), kpoint)
    }

    pub fn dim(&self) -> usize {
        self.grid.n_grid
    }

    pub fn grid(&self) -> &GridRef {
        &self.grid
    }

    pub fn potential_values(&self) -> &[f64] {
        &self.potential
    }

    pub fn kinetic_values(&self) -> &[f64] {
        &self.kinetic
    }

    /// `out = H psi`.
    pub fn apply(&self, psi: &[Complex64], out: &mut [Complex64]) {
        debug_assert_eq!(psi.len(), self.dim());
        out.copy_from_slice(psi);
        self.fft.cqft_forward(out);
        for (v, t) in out.iter_mut().zip(&self.kinetic) {
            *v *= t;
        }
        self.fft.cqft_inverse(out);
        for ((v, p), x) in out.iter_mut().zip(&self.potential).zip(psi) {
            *v += p * x;
        }
    }

    pub fn expectation(&self, psi: &[Complex64]) -> f64 {
        let mut out = vec![Complex64::default(); self.dim()];
        self.apply(psi, &mut out);
        psi.iter().zip(&out).map(|(a, b)| (a.conj() * b).re).sum()
    }

    /// Kinetic-diagonal preconditioner `r(G) / (|G+k|^2/2 + shift)` applied
    /// in place.
    pub fn precondition(&self, r: &mut [Complex64], shift: f64) {
        self.fft.cqft_forward(r);
        for (v, t) in r.iter_mut().zip(&self.kinetic) {
            *v /= t + shift;
        }
        self.fft.cqft_inverse(r);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_grid, Cell};
    use crate::qstate::{planewave_k_list, planewave_orbitals};

    fn grid(len: f64, n: u32) -> GridRef {
        build_grid(&Cell::new([len; 3], [n; 3], vec![], true).unwrap())
    }

    #[test]
    fn planewave_is_kinetic_eigenvector() {
        let g = grid(6.0, 2);
        let h = KsHamiltonian::kinetic_only(&g, &KPoint::gamma());
        let set = planewave_orbitals(&g, &[[1, 0, -1]]).unwrap();
        let psi = set.orbital(0);
        let mut out = vec![Complex64::default(); g.n_grid];
        h.apply(psi, &mut out);
        let g1 = 2.0 * std::f64::consts::PI / 6.0;
        let expect = 0.5 * 2.0 * g1 * g1;
        for (o, p) in out.iter().zip(psi) {
            assert!((o - p * expect).norm() < 1e-12);
        }
    }

    #[test]
    fn planewave_eigenvalue_shifts_with_k() {
        let g = grid(6.0, 2);
        let kp = KPoint::new([0.25, 0.0, 0.0], 1.0);
        let h = KsHamiltonian::kinetic_only(&g, &kp);
        let set = planewave_orbitals(&g, &[[0, 0, 0]]).unwrap();
        let e = h.expectation(set.orbital(0));
        let kx = 2.0 * std::f64::consts::PI * 0.25 / 6.0;
        assert!((e - 0.5 * kx * kx).abs() < 1e-13);
    }

    #[test]
    fn hermiticity_on_random_vectors() {
        let g = grid(5.0, 2);
        let vals: Vec<f64> = (0..g.n_grid).map(|i| 0.3 * ((i * 7 % 13) as f64 - 6.0)).collect();
        let v = PotentialField::new(g.clone(), vals).unwrap();
        let h = KsHamiltonian::new(&g, &v, &KPoint::new([0.1, -0.2, 0.3], 1.0));
        let mk = |seed: u64| -> Vec<Complex64> {
            let mut s = seed;
            (0..g.n_grid)
                .map(|_| {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    let a = ((s >> 20) as f64 / (1u64 << 44) as f64) - 0.5;
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    let b = ((s >> 20) as f64 / (1u64 << 44) as f64) - 0.5;
                    Complex64::new(a, b)
                })
                .collect()
        };
        let a = mk(3);
        let b = mk(17);
        let mut ha = vec![Complex64::default(); g.n_grid];
        let mut hb = vec![Complex64::default(); g.n_grid];
        h.apply(&a, &mut ha);
        h.apply(&b, &mut hb);
        let lhs: Complex64 = a.iter().zip(&hb).map(|(x, y)| x.conj() * y).sum();
        let rhs: Complex64 = ha.iter().zip(&b).map(|(x, y)| x.conj() * y).sum();
        assert!((lhs - rhs).norm() < 1e-12 * lhs.norm().max(1.0));
    }
}
