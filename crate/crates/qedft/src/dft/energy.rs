//! Total-energy assembly: the Harris functional, the equivalent Kohn-Sham
//! expression at the output density, charge-transfer input densities, and
//! the variational scan over the ionicity parameter.

use crate::dft::{hartree_energy, hartree_potential, lda_xc, DensityField};
use crate::error::{Error, Result};

/// Decomposed non-self-consistent total energy
/// `E = E_band - E_H[rho_in] - sum V_XC[rho_in] rho_in dV + E_XC[rho_in]`.
///
/// The same algebra applied to an output density gives the Kohn-Sham total
/// energy; the two coincide at self-consistency.
#[derive(Debug, Clone)]
pub struct HarrisResult {
    /// `2 sum_occ eps_i` from whichever readout produced it (hartree).
    pub band_energy: f64,
    /// Hartree double counting `E_H[rho_in]`.
    pub hartree_dc: f64,
    /// XC double counting `sum V_XC[rho_in] rho_in dV`.
    pub xc_dc: f64,
    /// `E_XC[rho_in]`.
    pub e_xc: f64,
    /// `band - hartree_dc - xc_dc + e_xc`.
    pub total: f64,
    /// Ionicity of the input density, when the run scanned one.
    pub lambda: Option<f64>,
}

/// Evaluates the Harris functional at an input density, given the band
/// energy from any readout path.
pub fn harris_energy(band_energy: f64, rho_in: &DensityField, lambda: Option<f64>) -> HarrisResult {
    let v_h = hartree_potential(rho_in);
    let hartree_dc = hartree_energy(rho_in, &v_h);
    let xc = lda_xc(rho_in);
    let xc_dc = xc.potential.integral_against(rho_in);
    let total = band_energy - hartree_dc - xc_dc + xc.energy;
    HarrisResult { band_energy, hartree_dc, xc_dc, e_xc: xc.energy, total, lambda }
}

/// Kohn-Sham total energy at an output density: identical algebra with
/// `rho_out` in place of the input density.
pub fn ks_total_energy(band_energy: f64, rho_out: &DensityField) -> f64 {
    harris_energy(band_energy, rho_out, None).total
}

/// Charge-transfer input density
/// `rho_in(lambda) = sum_a (1 + s_a lambda) rho_a`, where `s_a` is the
/// per-atom transfer sign (+1 acceptor, -1 donor, 0 spectator). The total
/// integral is preserved whenever `sum_a s_a N_a = 0`.
///
/// Returns the field together with any flags raised (lambda outside [0, 1]
/// is allowed but flagged; weights that drive the density negative are
/// clamped and the total renormalized).
pub fn input_density(
    atom_densities: &[DensityField],
    transfer: &[f64],
    lambda: f64,
) -> Result<(DensityField, Vec<String>)> {
    if atom_densities.is_empty() {
        return Err(Error::Config("input density needs at least one atom density".into()));
    }
    if atom_densities.len() != transfer.len() {
        return Err(Error::Mismatch(format!(
            "{} atom densities but {} transfer signs",
            atom_densities.len(),
            transfer.len()
        )));
    }
    let mut warnings = Vec::new();
    if !(0.0..=1.0).contains(&lambda) {
        warnings.push(format!("ionicity lambda = {lambda} outside [0, 1]"));
    }
    let balance: f64 = atom_densities
        .iter()
        .zip(transfer)
        .map(|(rho, s)| s * rho.integral())
        .sum();
    if balance.abs() > 1e-8 {
        warnings.push(format!(
            "transfer signs do not balance (sum s_a N_a = {balance:.3e}); electron count varies with lambda"
        ));
    }
    let n_elec: f64 = atom_densities.iter().map(|d| d.integral()).sum();
    let grid = atom_densities[0].grid().clone();
    let mut out = DensityField::zero(grid.clone());
    let mut clamped = false;
    for (rho, s) in atom_densities.iter().zip(transfer) {
        if !rho.grid().same_shape(&grid) {
            return Err(Error::Mismatch("atom densities live on different grids".into()));
        }
        let w = 1.0 + s * lambda;
        if w < 0.0 {
            clamped = true;
        }
        out.axpy(w, rho);
    }
    if clamped {
        warnings.push("negative species weight clamped at zero; density renormalized".into());
        if balance.abs() < 1e-8 {
            out.renormalize_to(n_elec)?;
        }
    }
    Ok((out, warnings))
}

#[derive(Debug, Clone)]
pub struct VariationalScan {
    pub best_lambda: f64,
    pub best: HarrisResult,
    /// True when the maximum sits on an endpoint of the scan.
    pub boundary_maximum: bool,
    pub points: Vec<(f64, HarrisResult)>,
}

/// Runs the experiment closure at each lambda and returns the argmax of the
/// total energy (the Harris functional is anti-variational, so the best
/// input density maximizes it). Ties break toward smaller lambda.
pub fn variational_harris_scan<F>(lambdas: &[f64], mut eval: F) -> Result<VariationalScan>
where
    F: FnMut(f64) -> Result<HarrisResult>,
{
    if lambdas.is_empty() {
        return Err(Error::Config("variational scan needs at least one lambda".into()));
    }
    let mut points = Vec::with_capacity(lambdas.len());
    for &l in lambdas {
        points.push((l, eval(l)?));
    }
    let mut best_idx = 0;
    for (i, (_, r)) in points.iter().enumerate() {
        if r.total > points[best_idx].1.total + 1e-15 {
            best_idx = i;
        }
    }
    let boundary_maximum = best_idx == 0 || best_idx == points.len() - 1;
    Ok(VariationalScan {
        best_lambda: points[best_idx].0,
        best: points[best_idx].1.clone(),
        boundary_maximum,
        points,
    })
}
