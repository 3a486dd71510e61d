//! Dense assembly and exact propagators for small registers; these are the
//! reference operators that the Trotterized paths are tested against.

use crate::error::{Error, Result};
use crate::oracle::KsHamiltonian;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Largest register dimension the dense paths accept.
pub const DENSE_DIM_LIMIT: usize = 4096;

/// Column-by-column assembly of the Hamiltonian matrix.
pub fn dense_hamiltonian(h: &KsHamiltonian) -> Result<DMatrix<Complex64>> {
    let dim = h.dim();
    if dim > DENSE_DIM_LIMIT {
        return Err(Error::Unsupported(format!(
            "dense assembly limited to {DENSE_DIM_LIMIT} dimensions, grid has {dim}"
        )));
    }
    let mut mat = DMatrix::zeros(dim, dim);
    let mut unit = vec![Complex64::default(); dim];
    let mut col = vec![Complex64::default(); dim];
    for j in 0..dim {
        unit[j] = Complex64::new(1.0, 0.0);
        h.apply(&unit, &mut col);
        unit[j] = Complex64::default();
        for i in 0..dim {
            mat[(i, j)] = col[i];
        }
    }
    Ok(mat)
}

#[derive(Debug, Clone, Copy)]
pub enum PropagatorTime {
    /// `e^{-i tau H}`.
    Real(f64),
    /// `e^{-tau H}`.
    Imaginary(f64),
}

/// Exact propagator of a Hermitian matrix via eigendecomposition.
pub fn exact_propagator(h: &DMatrix<Complex64>, time: PropagatorTime) -> Result<DMatrix<Complex64>> {
    let dim = h.nrows();
    if dim != h.ncols() {
        return Err(Error::Mismatch("propagator needs a square matrix".into()));
    }
    if dim > DENSE_DIM_LIMIT {
        return Err(Error::Unsupported(format!(
            "exact propagator limited to {DENSE_DIM_LIMIT} dimensions, got {dim}"
        )));
    }
    let eig = h.clone().symmetric_eigen();
    let phase = |lambda: f64| -> Complex64 {
        match time {
            PropagatorTime::Real(tau) => Complex64::from_polar(1.0, -tau * lambda),
            PropagatorTime::Imaginary(tau) => Complex64::new((-tau * lambda).exp(), 0.0),
        }
    };
    let u = &eig.eigenvectors;
    let mut scaled = u.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        let f = phase(eig.eigenvalues[j]);
        for v in col.iter_mut() {
            *v *= f;
        }
    }
    Ok(&scaled * u.adjoint())
}

/// Sorted eigenvalues and eigenvectors of a dense Hermitian matrix.
pub fn sorted_eigen(h: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let eig = h.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let dim = h.nrows();
    let mut vecs = DMatrix::zeros(dim, dim);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &eig.eigenvectors.column(src));
    }
    (vals, vecs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dft::PotentialField;
    use crate::lattice::{build_grid, Cell, KPoint};

    fn small_h() -> KsHamiltonian {
        let grid = build_grid(&Cell::new([5.0, 5.0, 5.0], [2, 1, 0], vec![], true).unwrap());
        let vals: Vec<f64> = (0..grid.n_grid)
            .map(|idx| {
                let p = grid.point(idx);
                -1.2 * (-(p[0] - 2.5).powi(2) / 2.0).exp() + 0.1 * (p[1] * 0.8).sin()
            })
            .collect();
        let v = PotentialField::new(grid.clone(), vals).unwrap();
        KsHamiltonian::new(&grid, &v, &KPoint::gamma())
    }

    #[test]
    fn real_time_propagator_is_unitary() {
        let hd = dense_hamiltonian(&small_h()).unwrap();
        let u = exact_propagator(&hd, PropagatorTime::Real(0.37)).unwrap();
        let id = &u * u.adjoint();
        let dim = id.nrows();
        for i in 0..dim {
            for j in 0..dim {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((id[(i, j)] - Complex64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn imaginary_time_scales_eigenstates() {
        let hd = dense_hamiltonian(&small_h()).unwrap();
        let (vals, vecs) = sorted_eigen(&hd);
        let tau = 0.5;
        let prop = exact_propagator(&hd, PropagatorTime::Imaginary(tau)).unwrap();
        let v0 = vecs.column(0);
        let out = &prop * v0;
        let expect = (-tau * vals[0]).exp();
        for (o, v) in out.iter().zip(v0.iter()) {
            assert!((o - v * expect).norm() < 1e-10);
        }
    }

    #[test]
    fn agrees_with_scaling_and_squaring() {
        // Compare against a second dense method on a random Hermitian
        // matrix: Taylor series with scaling and squaring.
        let dim = 48;
        let mut seed = 0x1234_5678_u64;
        let mut rnd = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for i in 0..dim {
            for j in i..dim {
                let v = Complex64::new(rnd(), if i == j { 0.0 } else { rnd() });
                m[(i, j)] = v;
                m[(j, i)] = v.conj();
            }
        }
        let tau = 0.8;
        let viaeig = exact_propagator(&m, PropagatorTime::Real(tau)).unwrap();
        let viataylor = crate::testing::expm_taylor(&(&m * Complex64::new(0.0, -tau)));
        assert!((viaeig - viataylor).norm() < 1e-10);
    }
}
