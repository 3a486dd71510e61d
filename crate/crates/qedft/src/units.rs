//! Unit conversions. All internal quantities are Hartree atomic units.

/// CODATA 2018 Bohr radius in angstrom.
pub const BOHR_IN_ANGSTROM: f64 = 0.529_177_210_903;

/// CODATA 2018 Hartree energy in electronvolt.
pub const HARTREE_IN_EV: f64 = 27.211_386_245_988;

pub fn angstrom_to_bohr(x: f64) -> f64 {
    x / BOHR_IN_ANGSTROM
}

pub fn bohr_to_angstrom(x: f64) -> f64 {
    x * BOHR_IN_ANGSTROM
}

pub fn ev_to_hartree(e: f64) -> f64 {
    e / HARTREE_IN_EV
}

pub fn hartree_to_ev(e: f64) -> f64 {
    e * HARTREE_IN_EV
}

/// Inverse lengths: q in 1/angstrom to 1/bohr.
pub fn inv_angstrom_to_inv_bohr(q: f64) -> f64 {
    q * BOHR_IN_ANGSTROM
}
