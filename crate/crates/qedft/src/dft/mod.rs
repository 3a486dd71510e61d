//! Densities, local pseudopotentials, LDA exchange-correlation, the Hartree
//! potential, and the Harris / Kohn-Sham total-energy assembly.

mod atoms;
mod energy;
mod field;
mod gth;
mod hartree;
mod xc;

pub use atoms::{isolated_atom_density, load_density, save_density, AtomDensityCache};
pub use energy::{
    harris_energy, input_density, ks_total_energy, variational_harris_scan, HarrisResult,
    VariationalScan,
};
pub use field::{DensityField, PotentialField};
pub use gth::{gth_local_potential, gth_local_real, GthParams, GthTable};
pub use hartree::{hartree_energy, hartree_energy_reciprocal, hartree_potential};
pub use xc::{lda_xc, xc_poly_fit, XcFit, XcResult};

use crate::error::Result;
use crate::lattice::Atom;

/// `V_KS = V_ext + V_H[rho] + V_XC[rho]`, the pointwise sum of the three
/// potential builders.
pub fn ks_potential(
    rho: &DensityField,
    atoms: &[Atom],
    table: &GthTable,
) -> Result<PotentialField> {
    let v_ext = gth_local_potential(rho.grid(), atoms, table)?;
    let v_h = hartree_potential(rho);
    let xc = lda_xc(rho);
    let mut out = v_ext;
    out.add_assign(&v_h);
    out.add_assign(&xc.potential);
    Ok(out)
}
