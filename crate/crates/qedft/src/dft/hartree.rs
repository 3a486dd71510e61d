//! The Hartree potential by reciprocal-space Poisson solution:
//! `V_H(G) = 4 pi rho(G) / G^2`, with the G = 0 component set to zero.

use crate::dft::{DensityField, PotentialField};
use crate::fft::GridFft;
use num_complex::Complex64;

pub fn hartree_potential(rho: &DensityField) -> PotentialField {
    let grid = rho.grid().clone();
    let fft = GridFft::shared(grid.n);
    let mut work: Vec<Complex64> = rho.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft.cqft_forward(&mut work);
    let n = grid.n;
    let zero_idx = grid.index(n[0] / 2, n[1] / 2, n[2] / 2);
    for i in 0..n[0] {
        let gx = grid.gvecs[0][i];
        for j in 0..n[1] {
            let gy = grid.gvecs[1][j];
            for k in 0..n[2] {
                let idx = grid.index(i, j, k);
                if idx == zero_idx {
                    work[idx] = Complex64::default();
                    continue;
                }
                let gz = grid.gvecs[2][k];
                let g2 = gx * gx + gy * gy + gz * gz;
                work[idx] *= 4.0 * std::f64::consts::PI / g2;
            }
        }
    }
    fft.cqft_inverse(&mut work);
    let values = work.iter().map(|c| c.re).collect();
    PotentialField::new(grid, values).expect("hartree potential stays finite")
}

/// `E_H = (1/2) sum V_H rho dV`.
pub fn hartree_energy(rho: &DensityField, v_h: &PotentialField) -> f64 {
    0.5 * v_h.integral_against(rho)
}

/// The same energy assembled directly in reciprocal space,
/// `E_H = (dV/2) sum_{G != 0} 4 pi |rho_u(G)|^2 / G^2` with the unitary
/// transform convention. Second, independent route for validation.
pub fn hartree_energy_reciprocal(rho: &DensityField) -> f64 {
    let grid = rho.grid().clone();
    let fft = GridFft::shared(grid.n);
    let mut work: Vec<Complex64> = rho.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft.cqft_forward(&mut work);
    let n = grid.n;
    let zero_idx = grid.index(n[0] / 2, n[1] / 2, n[2] / 2);
    let mut acc = 0.0;
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
                acc += 4.0 * std::f64::consts::PI * work[idx].norm_sqr() / g2;
            }
        }
    }
    0.5 * acc * grid.dv
}
