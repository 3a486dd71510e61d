//! Independent reference implementations used by the test suites. Nothing
//! here shares code with the production paths it checks: the matrix
//! exponential is a Taylor series, the phase-estimation reference simulates
//! the full working register explicitly, and the lattice-sum reference
//! evaluates the periodic potential in real space.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Deterministic xorshift generator for test data.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(seed.wrapping_mul(0x9E3779B97F4A7C15) | 1)
    }

    pub fn next_f64(&mut self) -> f64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        (self.0 >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    }

    pub fn next_complex(&mut self) -> Complex64 {
        Complex64::new(self.next_f64(), self.next_f64())
    }

    pub fn complex_vec(&mut self, n: usize) -> Vec<Complex64> {
        (0..n).map(|_| self.next_complex()).collect()
    }

    /// Normalized random state vector.
    pub fn state_vec(&mut self, n: usize) -> Vec<Complex64> {
        let mut v = self.complex_vec(n);
        let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        for x in v.iter_mut() {
            *x /= norm;
        }
        v
    }
}

/// Matrix exponential by Taylor series with scaling and squaring; a second
/// dense route, independent of the eigendecomposition path.
pub fn expm_taylor(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let dim = a.nrows();
    let norm = a.amax();
    let scale_pow = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = a * Complex64::new(1.0 / (1u64 << scale_pow) as f64, 0.0);
    let mut result = DMatrix::<Complex64>::identity(dim, dim);
    let mut term = DMatrix::<Complex64>::identity(dim, dim);
    for order in 1..=24 {
        term = (&term * &scaled) / Complex64::new(order as f64, 0.0);
        result += &term;
        if term.amax() < 1e-18 {
            break;
        }
    }
    for _ in 0..scale_pow {
        result = &result * &result;
    }
    result
}

/// Random Hermitian positive-semidefinite matrix with unit trace and the
/// given rank.
pub fn random_density_matrix(dim: usize, rank: usize, seed: u64) -> DMatrix<Complex64> {
    let mut rng = TestRng::new(seed);
    let mut rho = DMatrix::<Complex64>::zeros(dim, dim);
    for _ in 0..rank {
        let v = rng.state_vec(dim);
        let w = rng.next_f64().abs() + 0.1;
        for i in 0..dim {
            for j in 0..dim {
                rho[(i, j)] += Complex64::new(w, 0.0) * v[i] * v[j].conj();
            }
        }
    }
    let tr: Complex64 = (0..dim).map(|i| rho[(i, i)]).sum();
    rho / tr
}

pub fn min_eigenvalue(m: &DMatrix<Complex64>) -> f64 {
    m.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

pub fn max_eigenvalue(m: &DMatrix<Complex64>) -> f64 {
    m.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Full-register phase-estimation reference: prepares
/// `(1/sqrt(N)) sum_s |s> U^s |psi>` by explicit construction and reads the
/// working register through the transform `|s> -> (1/sqrt(N)) sum_k
/// e^{2 pi i k s / N} |k>`, returning the outcome distribution Pr(k).
pub fn brute_force_qpe<F>(initial: &[Complex64], n_qpe: usize, apply_u: F) -> Vec<f64>
where
    F: Fn(&mut [Complex64]),
{
    let dim = initial.len();
    let mut evolved = initial.to_vec();
    // amps[k] accumulates sum_s omega^{ks} U^s |psi> / N.
    let mut amps: Vec<Vec<Complex64>> = vec![vec![Complex64::default(); dim]; n_qpe];
    for s in 0..n_qpe {
        if s > 0 {
            apply_u(&mut evolved);
        }
        for (k, amp) in amps.iter_mut().enumerate() {
            let phase = 2.0 * std::f64::consts::PI * (k * s % n_qpe) as f64 / n_qpe as f64;
            let w = Complex64::from_polar(1.0 / n_qpe as f64, phase);
            for (a, e) in amp.iter_mut().zip(&evolved) {
                *a += w * e;
            }
        }
    }
    amps.iter()
        .map(|amp| amp.iter().map(|a| a.norm_sqr()).sum())
        .collect()
}

/// Ewald potential of a unit point charge plus neutralizing background in a
/// periodic orthorhombic box, evaluated at displacement `d` from the charge.
/// Zero cell average by construction.
pub fn ewald_point_charge_potential(d: [f64; 3], lengths: [f64; 3], eta: f64) -> f64 {
    let volume = lengths[0] * lengths[1] * lengths[2];
    let mut real = 0.0;
    let shells = 4i64;
    for nx in -shells..=shells {
        for ny in -shells..=shells {
            for nz in -shells..=shells {
                let r = [
                    d[0] + nx as f64 * lengths[0],
                    d[1] + ny as f64 * lengths[1],
                    d[2] + nz as f64 * lengths[2],
                ];
                let dist = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
                debug_assert!(dist > 1e-10, "probe coincides with the charge");
                real += libm::erfc(eta * dist) / dist;
            }
        }
    }
    let mut recip = 0.0;
    let gshells = 10i64;
    for mx in -gshells..=gshells {
        for my in -gshells..=gshells {
            for mz in -gshells..=gshells {
                if mx == 0 && my == 0 && mz == 0 {
                    continue;
                }
                let g = [
                    2.0 * std::f64::consts::PI * mx as f64 / lengths[0],
                    2.0 * std::f64::consts::PI * my as f64 / lengths[1],
                    2.0 * std::f64::consts::PI * mz as f64 / lengths[2],
                ];
                let g2 = g[0] * g[0] + g[1] * g[1] + g[2] * g[2];
                let phase = g[0] * d[0] + g[1] * d[1] + g[2] * d[2];
                recip += 4.0 * std::f64::consts::PI / (volume * g2)
                    * (-g2 / (4.0 * eta * eta)).exp()
                    * phase.cos();
            }
        }
    }
    let background = -std::f64::consts::PI / (eta * eta * volume);
    real + recip + background
}

/// Real-space reference for the periodic GTH local potential of one atom:
/// the Coulomb tail is Ewald-summed, the short-range remainder is summed
/// over images, and the cell average is removed.
pub fn gth_periodic_reference(
    params: &crate::dft::GthParams,
    atom_pos: [f64; 3],
    probe: [f64; 3],
    lengths: [f64; 3],
) -> f64 {
    let a = params.r_loc;
    let z = params.z_ion;
    let volume = lengths[0] * lengths[1] * lengths[2];
    let d = [probe[0] - atom_pos[0], probe[1] - atom_pos[1], probe[2] - atom_pos[2]];
    // -Z/r part with compensating background.
    let coulomb = -z * ewald_point_charge_potential(d, lengths, 0.45);
    // Short-range remainder s(r) = Z erfc(r/(sqrt2 a))/r + gaussian poly;
    // probes never coincide with the atom, so r stays away from zero.
    let short = |r: f64| -> f64 {
        debug_assert!(r > 1e-10, "probe coincides with the atom");
        let erfc_part = z * libm::erfc(r / (std::f64::consts::SQRT_2 * a)) / r;
        let x2 = (r / a) * (r / a);
        let poly = params.c[0] + x2 * (params.c[1] + x2 * (params.c[2] + x2 * params.c[3]));
        erfc_part + (-0.5 * x2).exp() * poly
    };
    let mut short_sum = 0.0;
    let shells = 3i64;
    for nx in -shells..=shells {
        for ny in -shells..=shells {
            for nz in -shells..=shells {
                let r = [
                    d[0] + nx as f64 * lengths[0],
                    d[1] + ny as f64 * lengths[1],
                    d[2] + nz as f64 * lengths[2],
                ];
                short_sum += short((r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt());
            }
        }
    }
    // Cell average of the short-range lattice sum = integral of one image
    // over all space divided by the cell volume.
    let tau_pow = (2.0 * std::f64::consts::PI).powf(1.5);
    let short_integral = 2.0 * std::f64::consts::PI * z * a * a
        + tau_pow
            * a.powi(3)
            * (params.c[0] + 3.0 * params.c[1] + 15.0 * params.c[2] + 105.0 * params.c[3]);
    coulomb + short_sum - short_integral / volume
}
