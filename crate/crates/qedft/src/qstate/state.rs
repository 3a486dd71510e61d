//! The qubit-efficient statevector over the band-label ⊗ grid register.

use crate::error::{Error, Result};
use crate::fft::GridFft;
use crate::lattice::{GridRef, KPoint};
use crate::qstate::{MixedState, OrbitalSet};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::sync::Arc;

/// Complex amplitudes over `(band label, grid point)`. Band `i`, grid `r`
/// lives at linear index `i * n_grid + r`: the label register is the most
/// significant one. Labels at and above `n_band` are zero padding up to the
/// power-of-two label register size.
///
/// The encoded amplitude is `sqrt(dV / N_band) psi_i(r)`, so a valid state
/// has total norm 1 and its band blocks, each rescaled by `sqrt(N_band)`,
/// are mutually orthonormal.
#[derive(Debug, Clone)]
pub struct QeState {
    grid: GridRef,
    kpoint: KPoint,
    n_band: usize,
    label_slots: usize,
    amps: Vec<Complex64>,
    fft: Arc<GridFft>,
}

fn label_slots_for(n_band: usize) -> usize {
    n_band.next_power_of_two()
}

impl QeState {
    /// Encodes an orthonormal orbital set; fails with a Gram-matrix report
    /// when the set is not orthonormal within 1e-8.
    pub fn encode(orbitals: &OrbitalSet, kpoint: KPoint) -> Result<Self> {
        let defect = orbitals.orthonormality_defect();
        if defect > 1e-8 {
            return Err(Error::NonOrthonormal(format!(
                "gram matrix deviates from identity by {defect:.3e}; gram = {:.6}",
                orbitals.gram()
            )));
        }
        let n_band = orbitals.len();
        let label_slots = label_slots_for(n_band);
        let grid = orbitals.grid.clone();
        let n_grid = grid.n_grid;
        let scale = 1.0 / (n_band as f64).sqrt();
        let mut amps = vec![Complex64::default(); label_slots * n_grid];
        for (i, orb) in orbitals.iter().enumerate() {
            for (slot, v) in amps[i * n_grid..(i + 1) * n_grid].iter_mut().zip(orb) {
                *slot = v * scale;
            }
        }
        let fft = GridFft::shared(grid.n);
        Ok(QeState { grid, kpoint, n_band, label_slots, amps, fft })
    }

    /// Rebuilds a state from raw amplitudes (used by the binary loader and
    /// the test oracles). The padding blocks must be zero.
    pub fn from_raw(
        grid: GridRef,
        kpoint: KPoint,
        n_band: usize,
        amps: Vec<Complex64>,
    ) -> Result<Self> {
        let label_slots = label_slots_for(n_band);
        if amps.len() != label_slots * grid.n_grid {
            return Err(Error::Mismatch(format!(
                "amplitude vector length {} does not match {} label slots x {} grid points",
                amps.len(),
                label_slots,
                grid.n_grid
            )));
        }
        let pad: f64 = amps[n_band * grid.n_grid..].iter().map(|v| v.norm_sqr()).sum();
        if pad > 0.0 {
            return Err(Error::Numerical(format!("padding labels carry weight {pad:.3e}")));
        }
        let fft = GridFft::shared(grid.n);
        Ok(QeState { grid, kpoint, n_band, label_slots, amps, fft })
    }

    /// Extracts the orbitals back out of the register.
    pub fn decode(&self) -> OrbitalSet {
        let n_grid = self.grid.n_grid;
        let scale = (self.n_band as f64).sqrt();
        let orbitals = (0..self.n_band)
            .map(|i| {
                self.amps[i * n_grid..(i + 1) * n_grid]
                    .iter()
                    .map(|v| v * scale)
                    .collect()
            })
            .collect();
        OrbitalSet::new(self.grid.clone(), orbitals).expect("decoded blocks stay normalized")
    }

    pub fn grid(&self) -> &GridRef {
        &self.grid
    }

    pub fn kpoint(&self) -> &KPoint {
        &self.kpoint
    }

    pub fn set_kpoint(&mut self, k: KPoint) {
        self.kpoint = k;
    }

    pub fn n_band(&self) -> usize {
        self.n_band
    }

    pub fn label_slots(&self) -> usize {
        self.label_slots
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn band_block(&self, i: usize) -> &[Complex64] {
        let n = self.grid.n_grid;
        &self.amps[i * n..(i + 1) * n]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Full-register inner product `<self|other>`. For valid states this
    /// equals `(1/N_band) sum_i <psi_i^self|psi_i^other>`.
    pub fn inner(&self, other: &QeState) -> Result<Complex64> {
        self.check_compatible(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    fn check_compatible(&self, other: &QeState) -> Result<()> {
        if !self.grid.same_shape(&other.grid) || self.n_band != other.n_band {
            return Err(Error::Mismatch(
                "states differ in grid shape or band count".into(),
            ));
        }
        Ok(())
    }

    /// Multiplies every band block pointwise by a grid-indexed factor
    /// (a diagonal operator on the grid register).
    pub fn apply_grid_diag(&mut self, factors: &[Complex64]) {
        let n = self.grid.n_grid;
        debug_assert_eq!(factors.len(), n);
        for i in 0..self.n_band {
            for (a, f) in self.amps[i * n..(i + 1) * n].iter_mut().zip(factors) {
                *a *= f;
            }
        }
    }

    /// Centered Fourier transform of the grid register (band register
    /// untouched): position basis -> centered momentum basis.
    pub fn cqft_forward(&mut self) {
        let n = self.grid.n_grid;
        for i in 0..self.n_band {
            self.fft.cqft_forward(&mut self.amps[i * n..(i + 1) * n]);
        }
    }

    pub fn cqft_inverse(&mut self) {
        let n = self.grid.n_grid;
        for i in 0..self.n_band {
            self.fft.cqft_inverse(&mut self.amps[i * n..(i + 1) * n]);
        }
    }

    /// Diagonal density the register would be sampled at:
    /// `n_elec_per_band * N_band * |block_i(r)|^2 / dV` summed over bands.
    /// With two electrons per band this is the electron density rho(r).
    pub fn diagonal_density(&self, electrons_per_band: f64) -> Vec<f64> {
        let n = self.grid.n_grid;
        let mut rho = vec![0.0; n];
        for i in 0..self.n_band {
            for (d, a) in rho.iter_mut().zip(&self.amps[i * n..(i + 1) * n]) {
                *d += a.norm_sqr();
            }
        }
        let scale = electrons_per_band * self.n_band as f64 / self.grid.dv;
        for d in rho.iter_mut() {
            *d *= scale;
        }
        rho
    }

    /// Promotes the pure state to a density matrix.
    pub fn to_mixed(&self) -> MixedState {
        MixedState::from_pure(self)
    }

    /// Checks the state invariants: unit norm, zero padding, orthonormal
    /// rescaled blocks.
    pub fn validate(&self) -> Result<()> {
        let norm = self.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Numerical(format!("state norm {norm} deviates from 1")));
        }
        let n = self.grid.n_grid;
        let pad: f64 = self.amps[self.n_band * n..].iter().map(|v| v.norm_sqr()).sum();
        if pad != 0.0 {
            return Err(Error::Numerical(format!("padding labels carry weight {pad:.3e}")));
        }
        let defect = self.decode().orthonormality_defect();
        if defect > 1e-8 {
            return Err(Error::NonOrthonormal(format!("block orthonormality defect {defect:.3e}")));
        }
        Ok(())
    }
}

/// Per-orbital inner products `S_ij = <psi_i^a | psi_j^b>`, computed as
/// `N_band` times the block inner products. Preserved exactly by any unitary
/// acting on the grid register of both arguments.
pub fn overlap_matrix(a: &QeState, b: &QeState) -> Result<DMatrix<Complex64>> {
    if !a.grid.same_shape(&b.grid) || a.n_band != b.n_band {
        return Err(Error::Mismatch("overlap needs matching grids and band counts".into()));
    }
    let m = a.n_band;
    let scale = m as f64;
    Ok(DMatrix::from_fn(m, m, |i, j| {
        a.band_block(i)
            .iter()
            .zip(b.band_block(j))
            .map(|(x, y)| x.conj() * y)
            .sum::<Complex64>()
            * scale
    }))
}

/// Either a pure QE state or a density matrix, for fidelity readout.
pub enum StateRef<'a> {
    Pure(&'a QeState),
    Mixed(&'a MixedState),
}

impl<'a> From<&'a QeState> for StateRef<'a> {
    fn from(s: &'a QeState) -> Self {
        StateRef::Pure(s)
    }
}

impl<'a> From<&'a MixedState> for StateRef<'a> {
    fn from(s: &'a MixedState) -> Self {
        StateRef::Mixed(s)
    }
}

/// Fidelity of a state against a reference orbital set.
///
/// For a pure single-band state this is `|<psi_ref|psi>|^2`; for several
/// bands it is the projector overlap `(1/N) sum_ij |<ref_i|psi_j>|^2`, which
/// reaches 1 exactly when the spans coincide. For a density matrix it is
/// `<Psi_ref| rho |Psi_ref>` against the encoded reference, normalized by
/// the trace.
pub fn subspace_fidelity(state: StateRef<'_>, reference: &OrbitalSet) -> Result<f64> {
    if reference.orthonormality_defect() > 1e-8 {
        return Err(Error::NonOrthonormal("fidelity reference must be orthonormal".into()));
    }
    match state {
        StateRef::Pure(s) => {
            if reference.len() != s.n_band() {
                return Err(Error::Mismatch("reference band count differs from state".into()));
            }
            let decoded = s.decode();
            let m = s.n_band();
            let mut acc = 0.0;
            for i in 0..m {
                for j in 0..m {
                    let ip: Complex64 = reference
                        .orbital(i)
                        .iter()
                        .zip(decoded.orbital(j))
                        .map(|(a, b)| a.conj() * b)
                        .sum();
                    acc += ip.norm_sqr();
                }
            }
            Ok(acc / m as f64)
        }
        StateRef::Mixed(rho) => {
            let psi_ref = QeState::encode(reference, rho.kpoint().clone())?;
            rho.fidelity_against(&psi_ref)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_grid, Cell};
    use crate::qstate::{planewave_k_list, planewave_orbitals, slater_orbital};

    fn grid(len: f64, n: u32) -> GridRef {
        build_grid(&Cell::new([len; 3], [n; 3], vec![], true).unwrap())
    }

    fn planewave_state(n_modes: usize) -> QeState {
        let g = grid(6.0, 2);
        let ks = planewave_k_list(2);
        let set = planewave_orbitals(&g, &ks[..n_modes]).unwrap();
        QeState::encode(&set, KPoint::gamma()).unwrap()
    }

    #[test]
    fn single_orbital_norms() {
        let g = grid(9.0, 3);
        let orb = slater_orbital(&g, [4.5; 3], 0.6).unwrap();
        let set = OrbitalSet::new(g, vec![orb]).unwrap();
        let state = QeState::encode(&set, KPoint::gamma()).unwrap();
        assert!((state.norm() - 1.0).abs() < 1e-12);
        let block_norm: f64 = state.band_block(0).iter().map(|v| v.norm_sqr()).sum();
        assert!((block_norm - 1.0).abs() < 1e-12);
        state.validate().unwrap();
    }

    #[test]
    fn two_band_blocks_carry_half_weight_each() {
        let state = planewave_state(2);
        assert_eq!(state.label_slots(), 2);
        for i in 0..2 {
            let w: f64 = state.band_block(i).iter().map(|v| v.norm_sqr()).sum();
            assert!((w - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn three_bands_pad_to_four_slots() {
        let state = planewave_state(3);
        assert_eq!(state.label_slots(), 4);
        let n = state.grid().n_grid;
        assert!(state.amplitudes()[3 * n..].iter().all(|v| v.norm() == 0.0));
        state.validate().unwrap();
    }

    #[test]
    fn decode_encode_roundtrip() {
        let g = grid(7.0, 2);
        let a = slater_orbital(&g, [3.5, 3.5, 3.5], 0.9).unwrap();
        let b = slater_orbital(&g, [1.0, 3.5, 6.0], 0.9).unwrap();
        let set = OrbitalSet::new(g, vec![a, b]).unwrap().orthonormalized().unwrap();
        let state = QeState::encode(&set, KPoint::gamma()).unwrap();
        let back = state.decode();
        for i in 0..2 {
            for (x, y) in back.orbital(i).iter().zip(set.orbital(i)) {
                assert!((x - y).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn encode_rejects_non_orthonormal_sets() {
        let g = grid(7.0, 2);
        let a = slater_orbital(&g, [3.5; 3], 0.9).unwrap();
        let b = slater_orbital(&g, [3.5, 3.5, 4.4], 0.9).unwrap();
        let set = OrbitalSet::new(g, vec![a, b]).unwrap();
        match QeState::encode(&set, KPoint::gamma()) {
            Err(Error::NonOrthonormal(msg)) => assert!(msg.contains("gram")),
            other => panic!("expected NonOrthonormal, got {other:?}"),
        }
    }

    #[test]
    fn overlap_of_state_with_itself_is_identity() {
        let state = planewave_state(3);
        let s = overlap_matrix(&state, &state).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((s[(i, j)] - Complex64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn overlap_invariant_under_grid_unitary() {
        let mut a = planewave_state(3);
        let mut b = planewave_state(3);
        // Same diagonal unitary on the grid register of both states.
        let n = a.grid().n_grid;
        let phases: Vec<Complex64> = (0..n)
            .map(|r| Complex64::from_polar(1.0, 0.37 * r as f64))
            .collect();
        let before = overlap_matrix(&a, &b).unwrap();
        a.apply_grid_diag(&phases);
        b.apply_grid_diag(&phases);
        a.cqft_forward();
        b.cqft_forward();
        let after = overlap_matrix(&a, &b).unwrap();
        assert!((&before - &after).norm() < 1e-10);
    }

    #[test]
    fn fidelity_limits() {
        let g = grid(6.0, 2);
        let ks = planewave_k_list(1);
        let set = planewave_orbitals(&g, &ks[..1]).unwrap();
        let state = QeState::encode(&set, KPoint::gamma()).unwrap();
        let same = subspace_fidelity((&state).into(), &set).unwrap();
        assert!((same - 1.0).abs() < 1e-12);
        let other = planewave_orbitals(&g, &ks[1..2]).unwrap();
        let zero = subspace_fidelity((&state).into(), &other).unwrap();
        assert!(zero < 1e-13);
    }

    #[test]
    fn diagonal_density_integrates_to_electron_count() {
        let state = planewave_state(2);
        let rho = state.diagonal_density(2.0);
        let total: f64 = rho.iter().sum::<f64>() * state.grid().dv;
        assert!((total - 4.0).abs() < 1e-10, "2 bands x 2 electrons, got {total}");
    }
}
