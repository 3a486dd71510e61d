//! Spin-unpolarized LDA exchange-correlation: Dirac exchange plus the
//! Perdew-Wang 1992 correlation parameterization, and the polynomial fit of
//! `rho eps_xc(rho)` used by the interaction-kernel expansion.

use crate::dft::{DensityField, PotentialField};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Dirac exchange energy density per electron, `-(3/4)(3/pi)^(1/3) rho^(1/3)`.
fn eps_x(rho: f64) -> f64 {
    -0.75 * (3.0 / std::f64::consts::PI).cbrt() * rho.cbrt()
}

fn v_x(rho: f64) -> f64 {
    -(3.0 / std::f64::consts::PI).cbrt() * rho.cbrt()
}

/// PW92 correlation energy per electron and its derivative d eps_c / d rs,
/// unpolarized branch.
fn pw92(rs: f64) -> (f64, f64) {
    const A: f64 = 0.031_091;
    const ALPHA1: f64 = 0.213_70;
    const BETA1: f64 = 7.5957;
    const BETA2: f64 = 3.5876;
    const BETA3: f64 = 1.6382;
    const BETA4: f64 = 0.492_94;
    let srs = rs.sqrt();
    let q = 2.0 * A * (BETA1 * srs + BETA2 * rs + BETA3 * rs * srs + BETA4 * rs * rs);
    let dq = 2.0 * A * (0.5 * BETA1 / srs + BETA2 + 1.5 * BETA3 * srs + 2.0 * BETA4 * rs);
    let log_arg = 1.0 + 1.0 / q;
    let eps = -2.0 * A * (1.0 + ALPHA1 * rs) * log_arg.ln();
    let deps = -2.0 * A * ALPHA1 * log_arg.ln() + 2.0 * A * (1.0 + ALPHA1 * rs) * dq / (q * q + q);
    (eps, deps)
}

/// XC energy per electron at a single density.
pub fn eps_xc(rho: f64) -> f64 {
    if rho <= 1e-280 {
        return 0.0;
    }
    let rs = (3.0 / (4.0 * std::f64::consts::PI * rho)).cbrt();
    eps_x(rho) + pw92(rs).0
}

/// XC potential `d(rho eps_xc)/d rho` at a single density.
pub fn v_xc(rho: f64) -> f64 {
    if rho <= 1e-280 {
        return 0.0;
    }
    let rs = (3.0 / (4.0 * std::f64::consts::PI * rho)).cbrt();
    let (ec, dec) = pw92(rs);
    // d(rho ec)/d rho = ec - (rs/3) dec/drs.
    v_x(rho) + ec - rs / 3.0 * dec
}

#[derive(Debug, Clone)]
pub struct XcResult {
    /// `sum rho eps_xc dV` (hartree).
    pub energy: f64,
    pub potential: PotentialField,
    /// Energy per electron at each grid point.
    pub eps: Vec<f64>,
}

/// Evaluates LDA exchange-correlation on a density field. Zero-density
/// points contribute nothing.
pub fn lda_xc(rho: &DensityField) -> XcResult {
    let grid = rho.grid().clone();
    let mut eps = Vec::with_capacity(grid.n_grid);
    let mut pot = Vec::with_capacity(grid.n_grid);
    let mut energy = 0.0;
    for &r in rho.values() {
        let e = eps_xc(r);
        eps.push(e);
        pot.push(v_xc(r));
        energy += r * e;
    }
    energy *= grid.dv;
    XcResult {
        energy,
        potential: PotentialField::new(grid, pot).expect("finite xc potential"),
        eps,
    }
}

/// Polynomial approximation `rho eps_xc(rho) ~ sum_{alpha>=2} c_alpha rho^alpha`
/// over a density window. There is no linear term: at the expansion point the
/// exact XC potential is carried by the one-body part of the kernel.
#[derive(Debug, Clone)]
pub struct XcFit {
    /// Coefficients for alpha = 2, 3, ..., n_max.
    pub coeffs: Vec<f64>,
    pub rho_min: f64,
    pub rho_max: f64,
    /// Relative rms misfit over the sampled window.
    pub residual: f64,
}

impl XcFit {
    pub fn c2(&self) -> f64 {
        self.coeffs[0]
    }

    /// Evaluates the fitted `rho eps_xc` model.
    pub fn model(&self, rho: f64) -> f64 {
        let mut acc = 0.0;
        let mut power = rho * rho;
        for c in &self.coeffs {
            acc += c * power;
            power *= rho;
        }
        acc
    }
}

/// Least-squares fit of `rho eps_xc(rho)` on log-spaced samples in
/// `[rho_min, rho_max]` with basis `rho^2 .. rho^n_max`.
pub fn xc_poly_fit(rho_min: f64, rho_max: f64, n_max: usize, residual_tol: f64) -> Result<XcFit> {
    if !(rho_min > 0.0) || !(rho_max > rho_min) {
        return Err(Error::Config(format!(
            "xc fit range must satisfy 0 < rho_min < rho_max, got [{rho_min}, {rho_max}]"
        )));
    }
    if n_max < 2 {
        return Err(Error::Config("xc fit degree must be at least 2".into()));
    }
    let n_samples = 200;
    let n_terms = n_max - 1;
    let log_lo = rho_min.ln();
    let log_hi = rho_max.ln();
    let rhos: Vec<f64> = (0..n_samples)
        .map(|i| (log_lo + (log_hi - log_lo) * i as f64 / (n_samples - 1) as f64).exp())
        .collect();
    let mut design = DMatrix::zeros(n_samples, n_terms);
    let mut target = DVector::zeros(n_samples);
    for (i, &rho) in rhos.iter().enumerate() {
        target[i] = rho * eps_xc(rho);
        let mut power = rho * rho;
        for j in 0..n_terms {
            design[(i, j)] = power;
            power *= rho;
        }
    }
    let svd = design.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smin <= 0.0 || smax / smin > 1e12 {
        return Err(Error::Numerical(format!(
            "xc fit is ill-conditioned (condition {:.2e}); narrow the density range",
            smax / smin
        )));
    }
    let sol = svd
        .solve(&target, 1e-14)
        .map_err(|e| Error::Numerical(format!("xc fit solve failed: {e}")))?;
    let misfit = (&design * &sol) - &target;
    let residual = (misfit.norm_squared() / target.norm_squared()).sqrt();
    if residual > residual_tol {
        return Err(Error::Numerical(format!(
            "xc fit residual {residual:.3e} exceeds tolerance {residual_tol:.3e}"
        )));
    }
    Ok(XcFit {
        coeffs: sol.iter().copied().collect(),
        rho_min,
        rho_max,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_grid, Cell};

    #[test]
    fn zero_density_contributes_nothing() {
        let grid = build_grid(&Cell::new([4.0; 3], [1; 3], vec![], true).unwrap());
        let rho = DensityField::zero(grid);
        let xc = lda_xc(&rho);
        assert_eq!(xc.energy, 0.0);
        assert!(xc.potential.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn dirac_exchange_at_unit_density() {
        // Exchange-only part of eps at rho = 1: -(3/4)(3/pi)^(1/3).
        let expect = -0.75 * (3.0 / std::f64::consts::PI).cbrt();
        assert!((eps_x(1.0) - expect).abs() < 1e-15);
        // Full eps_xc is lower (correlation is negative).
        assert!(eps_xc(1.0) < expect);
    }

    #[test]
    fn potential_matches_finite_difference_of_energy_density() {
        // Centered difference of rho*eps_xc at 20 log-spaced densities.
        for i in 0..20 {
            let rho = 10f64.powf(-4.0 + 5.0 * i as f64 / 19.0);
            let h = rho * 1e-6;
            let f = |r: f64| r * eps_xc(r);
            let fd = (f(rho + h) - f(rho - h)) / (2.0 * h);
            let an = v_xc(rho);
            assert!(
                ((fd - an) / an).abs() < 1e-6,
                "rho={rho}: fd {fd} vs analytic {an}"
            );
        }
    }

    #[test]
    fn fit_recovers_exact_quadratic() {
        // Build a synthetic "xc" that is exactly c2 rho^2 by fitting the
        // residual of the model against itself: fit the real function, then
        // fit the model of that fit; coefficients must be reproduced.
        let fit = xc_poly_fit(1e-3, 0.2, 2, 1.0).unwrap();
        let refit_samples: Vec<(f64, f64)> = (0..50)
            .map(|i| {
                let rho = 1e-3 * (200.0f64).powf(i as f64 / 49.0);
                (rho, fit.c2() * rho * rho)
            })
            .collect();
        // Direct least squares on the synthetic quadratic data.
        let num: f64 = refit_samples.iter().map(|(r, y)| r * r * y).sum();
        let den: f64 = refit_samples.iter().map(|(r, _)| r.powi(4)).sum();
        assert!(((num / den) - fit.c2()).abs() < 1e-10 * fit.c2().abs());
    }

    #[test]
    fn degree_two_fit_reports_residual() {
        let fit = xc_poly_fit(1e-3, 0.2, 2, 0.9).unwrap();
        assert_eq!(fit.coeffs.len(), 1);
        assert!(fit.residual > 0.0 && fit.residual < 0.9, "residual {}", fit.residual);
        // c2 is negative: xc energy density is negative and convex-ish here.
        assert!(fit.c2() < 0.0);
    }

    #[test]
    fn bad_ranges_rejected() {
        assert!(xc_poly_fit(0.0, 0.1, 2, 1.0).is_err());
        assert!(xc_poly_fit(0.2, 0.1, 2, 1.0).is_err());
        assert!(xc_poly_fit(1e-3, 0.1, 1, 1.0).is_err());
    }
}
