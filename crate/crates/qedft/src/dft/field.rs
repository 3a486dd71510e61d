//! Real-valued grid functions: electron densities and local potentials.

use crate::error::{Error, Result};
use crate::lattice::GridRef;

/// Electron density in electrons/bohr^3, one value per grid point.
/// Values are non-negative and `sum rho dV` is the electron count.
#[derive(Debug, Clone)]
pub struct DensityField {
    grid: GridRef,
    values: Vec<f64>,
}

impl DensityField {
    pub fn new(grid: GridRef, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_grid {
            return Err(Error::Mismatch(format!(
                "density has {} values for a {}-point grid",
                values.len(),
                grid.n_grid
            )));
        }
        if let Some(v) = values.iter().find(|v| **v < 0.0 || !v.is_finite()) {
            return Err(Error::Numerical(format!("density value {v} is negative or non-finite")));
        }
        Ok(DensityField { grid, values })
    }

    pub fn zero(grid: GridRef) -> Self {
        let n = grid.n_grid;
        DensityField { grid, values: vec![0.0; n] }
    }

    pub fn grid(&self) -> &GridRef {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// `sum rho dV`, the electron count carried by the field.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.dv
    }

    /// Rescales so the integral equals `n_elec` exactly.
    pub fn renormalize_to(&mut self, n_elec: f64) -> Result<()> {
        let total = self.integral();
        if total <= 0.0 {
            return Err(Error::Numerical("cannot renormalize an empty density".into()));
        }
        let s = n_elec / total;
        for v in self.values.iter_mut() {
            *v *= s;
        }
        Ok(())
    }

    pub fn validate(&self, n_elec: f64) -> Result<()> {
        let total = self.integral();
        if (total - n_elec).abs() > 1e-8 {
            return Err(Error::Numerical(format!(
                "density integrates to {total}, expected {n_elec}"
            )));
        }
        Ok(())
    }

    /// `self += w * other`, clamping tiny negative round-off at zero.
    pub fn axpy(&mut self, w: f64, other: &DensityField) {
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a = (*a + w * b).max(0.0);
        }
    }

    /// L2 distance `sqrt(sum (a-b)^2 dV)` between two densities.
    pub fn l2_distance(&self, other: &DensityField) -> f64 {
        let s: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        (s * self.grid.dv).sqrt()
    }

    /// Integrated absolute difference `sum |a-b| dV` in electrons.
    pub fn l1_distance(&self, other: &DensityField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            * self.grid.dv
    }
}

/// Diagonal local potential in hartree, one value per grid point.
#[derive(Debug, Clone)]
pub struct PotentialField {
    grid: GridRef,
    values: Vec<f64>,
}

impl PotentialField {
    pub fn new(grid: GridRef, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_grid {
            return Err(Error::Mismatch(format!(
                "potential has {} values for a {}-point grid",
                values.len(),
                grid.n_grid
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!("potential value {v} is not finite")));
        }
        Ok(PotentialField { grid, values })
    }

    pub fn zero(grid: GridRef) -> Self {
        let n = grid.n_grid;
        PotentialField { grid, values: vec![0.0; n] }
    }

    pub fn grid(&self) -> &GridRef {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn add_assign(&mut self, other: &PotentialField) {
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += b;
        }
    }

    pub fn sub_assign(&mut self, other: &PotentialField) {
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a -= b;
        }
    }

    pub fn scale(&mut self, s: f64) {
        for a in self.values.iter_mut() {
            *a *= s;
        }
    }

    /// `sum V rho dV`.
    pub fn integral_against(&self, rho: &DensityField) -> f64 {
        self.values
            .iter()
            .zip(rho.values())
            .map(|(v, r)| v * r)
            .sum::<f64>()
            * self.grid.dv
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_abs_diff(&self, other: &PotentialField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Weighted blend `(1-s) self + s other`, used by interpolated
    /// Hamiltonians.
    pub fn blend(&self, other: &PotentialField, s: f64) -> PotentialField {
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (1.0 - s) * a + s * b)
            .collect();
        PotentialField { grid: self.grid.clone(), values }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_grid, Cell};

    fn grid() -> GridRef {
        build_grid(&Cell::new([4.0; 3], [1; 3], vec![], true).unwrap())
    }

    #[test]
    fn density_rejects_negative_values() {
        let g = grid();
        let mut vals = vec![0.1; g.n_grid];
        vals[3] = -1e-3;
        assert!(DensityField::new(g, vals).is_err());
    }

    #[test]
    fn integral_and_renormalize() {
        let g = grid();
        let mut rho = DensityField::new(g.clone(), vec![0.25; g.n_grid]).unwrap();
        rho.renormalize_to(2.0).unwrap();
        assert!((rho.integral() - 2.0).abs() < 1e-14);
        rho.validate(2.0).unwrap();
    }

    #[test]
    fn potential_blend_endpoints() {
        let g = grid();
        let a = PotentialField::new(g.clone(), vec![1.0; g.n_grid]).unwrap();
        let b = PotentialField::new(g.clone(), vec![3.0; g.n_grid]).unwrap();
        assert_eq!(a.blend(&b, 0.0).values()[0], 1.0);
        assert_eq!(a.blend(&b, 1.0).values()[0], 3.0);
        assert_eq!(a.blend(&b, 0.5).values()[0], 2.0);
    }
}
