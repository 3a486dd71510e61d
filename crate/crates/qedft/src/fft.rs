//! Centered Fourier transforms on the grid register.
//!
//! The forward transform maps the position basis to the centered-momentum
//! basis with the physics sign convention e^{-i G r}: after
//! [`GridFft::cqft_forward`], axis array index `j` holds the frequency
//! `m = j - N/2` (see [`crate::lattice::Grid`]). Both directions are unitary.
//!
//! For power-of-two axes the recentering is a single XOR permutation of the
//! linear index, applied after the per-axis FFTs.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

pub struct GridFft {
    n: [usize; 3],
    n_grid: usize,
    fwd: [Arc<dyn Fft<f64>>; 3],
    inv: [Arc<dyn Fft<f64>>; 3],
    center_mask: usize,
}

impl std::fmt::Debug for GridFft {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GridFft").field("n", &self.n).finish()
    }
}

fn plan_cache() -> &'static Mutex<HashMap<[usize; 3], Arc<GridFft>>> {
    static CACHE: OnceLock<Mutex<HashMap<[usize; 3], Arc<GridFft>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl GridFft {
    pub fn new(n: [usize; 3]) -> Self {
        assert!(n.iter().all(|&d| d.is_power_of_two()), "grid axes must be powers of two");
        let mut planner = FftPlanner::new();
        let fwd = std::array::from_fn(|ax| planner.plan_fft_forward(n[ax]));
        let inv = std::array::from_fn(|ax| planner.plan_fft_inverse(n[ax]));
        let (nx, ny, nz) = (n[0], n[1], n[2]);
        let bits = |d: usize| d.trailing_zeros() as usize;
        let center_mask = ((nx / 2) << (bits(ny) + bits(nz))) | ((ny / 2) << bits(nz)) | (nz / 2);
        GridFft { n, n_grid: nx * ny * nz, fwd, inv, center_mask }
    }

    /// Plans are cached per grid shape and shared between threads.
    pub fn shared(n: [usize; 3]) -> Arc<GridFft> {
        let mut cache = plan_cache().lock().unwrap();
        cache.entry(n).or_insert_with(|| Arc::new(GridFft::new(n))).clone()
    }

    pub fn n_grid(&self) -> usize {
        self.n_grid
    }

    fn fft_axis(&self, data: &mut [Complex64], axis: usize, inverse: bool) {
        let len = self.n[axis];
        if len == 1 {
            return;
        }
        let plan = if inverse { &self.inv[axis] } else { &self.fwd[axis] };
        let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];
        match axis {
            2 => {
                for line in data.chunks_exact_mut(len) {
                    plan.process_with_scratch(line, &mut scratch);
                }
            }
            _ => {
                let (nx, ny, nz) = (self.n[0], self.n[1], self.n[2]);
                let (count_outer, count_inner, stride) = if axis == 1 {
                    (nx, nz, nz)
                } else {
                    (1, ny * nz, ny * nz)
                };
                let block = len * stride;
                let mut line = vec![Complex64::default(); len];
                for outer in 0..count_outer {
                    let base_outer = outer * block;
                    for inner in 0..count_inner {
                        let base = base_outer + inner;
                        for (t, slot) in line.iter_mut().enumerate() {
                            *slot = data[base + t * stride];
                        }
                        plan.process_with_scratch(&mut line, &mut scratch);
                        for (t, v) in line.iter().enumerate() {
                            data[base + t * stride] = *v;
                        }
                    }
                }
            }
        }
    }

    /// Swap each index with `index XOR mask`; for power-of-two axes this is
    /// exactly the fftshift that recenters every axis.
    fn recenter(&self, data: &mut [Complex64]) {
        let m = self.center_mask;
        if m == 0 {
            return;
        }
        for idx in 0..data.len() {
            let partner = idx ^ m;
            if idx < partner {
                data.swap(idx, partner);
            }
        }
    }

    fn scale(&self, data: &mut [Complex64], s: f64) {
        for v in data.iter_mut() {
            *v *= s;
        }
    }

    /// Unitary centered transform, position -> centered momentum.
    pub fn cqft_forward(&self, data: &mut [Complex64]) {
        debug_assert_eq!(data.len(), self.n_grid);
        for ax in 0..3 {
            self.fft_axis(data, ax, false);
        }
        self.recenter(data);
        self.scale(data, 1.0 / (self.n_grid as f64).sqrt());
    }

    /// Unitary centered transform, centered momentum -> position.
    pub fn cqft_inverse(&self, data: &mut [Complex64]) {
        debug_assert_eq!(data.len(), self.n_grid);
        self.recenter(data);
        for ax in 0..3 {
            self.fft_axis(data, ax, true);
        }
        self.scale(data, 1.0 / (self.n_grid as f64).sqrt());
    }

    /// Unnormalized natural-order DFT (e^{-i}), used for circular
    /// convolutions; `backward` composed after it multiplies by N.
    pub fn dft_forward_natural(&self, data: &mut [Complex64]) {
        for ax in 0..3 {
            self.fft_axis(data, ax, false);
        }
    }

    pub fn dft_backward_natural(&self, data: &mut [Complex64]) {
        for ax in 0..3 {
            self.fft_axis(data, ax, true);
        }
    }

    /// Circular convolution (a * b)(r) = sum_d a(d) b(r - d) given the
    /// already-transformed kernel `a_hat` (natural order, unnormalized).
    pub fn convolve_with_transformed(&self, a_hat: &[Complex64], b: &mut [Complex64]) {
        self.dft_forward_natural(b);
        for (v, a) in b.iter_mut().zip(a_hat) {
            *v *= a;
        }
        self.dft_backward_natural(b);
        self.scale(b, 1.0 / self.n_grid as f64);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_grid, Cell};

    fn random_state(n: usize, seed: u64) -> Vec<Complex64> {
        // Small deterministic LCG; good enough for transform tests.
        let mut s = seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(1);
        let mut next = move || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        (0..n).map(|_| Complex64::new(next(), next())).collect()
    }

    #[test]
    fn roundtrip_is_identity() {
        let fft = GridFft::new([8, 4, 2]);
        let orig = random_state(64, 7);
        let mut data = orig.clone();
        fft.cqft_forward(&mut data);
        fft.cqft_inverse(&mut data);
        for (a, b) in data.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn unitarity() {
        let fft = GridFft::new([4, 4, 4]);
        let mut data = random_state(64, 3);
        let n0: f64 = data.iter().map(|v| v.norm_sqr()).sum();
        fft.cqft_forward(&mut data);
        let n1: f64 = data.iter().map(|v| v.norm_sqr()).sum();
        assert!((n0 - n1).abs() < 1e-13 * n0);
    }

    #[test]
    fn uniform_state_maps_to_zero_frequency() {
        let cell = Cell::new([4.0; 3], [2; 3], vec![], true).unwrap();
        let grid = build_grid(&cell);
        let fft = GridFft::new(grid.n);
        let mut data = vec![Complex64::new(1.0 / 8.0, 0.0); grid.n_grid];
        fft.cqft_forward(&mut data);
        // m = 0 sits at centered axis index N/2.
        let center = grid.index(2, 2, 2);
        for (idx, v) in data.iter().enumerate() {
            if idx == center {
                assert!((v.re - 1.0 / 8.0 * 8.0).abs() < 1e-12, "{v}");
            } else {
                assert!(v.norm() < 1e-13);
            }
        }
    }

    #[test]
    fn planewave_maps_to_its_frequency_index() {
        // exp(+2 pi i m0 j / N) concentrates at centered index m0 + N/2
        // under the e^{-iGr} forward convention.
        let n = 8usize;
        let fft = GridFft::new([n, 1, 1]);
        let m0: i64 = 3;
        let mut data: Vec<Complex64> = (0..n)
            .map(|j| {
                let ph = 2.0 * std::f64::consts::PI * m0 as f64 * j as f64 / n as f64;
                Complex64::from_polar(1.0 / (n as f64).sqrt(), ph)
            })
            .collect();
        fft.cqft_forward(&mut data);
        let expect = (m0 + n as i64 / 2) as usize;
        for (idx, v) in data.iter().enumerate() {
            if idx == expect {
                assert!((v.norm() - 1.0).abs() < 1e-12);
            } else {
                assert!(v.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn negative_frequency_lands_below_center() {
        let n = 8usize;
        let fft = GridFft::new([1, n, 1]);
        let m0: i64 = -2;
        let mut data: Vec<Complex64> = (0..n)
            .map(|j| {
                let ph = 2.0 * std::f64::consts::PI * m0 as f64 * j as f64 / n as f64;
                Complex64::from_polar(1.0, ph)
            })
            .collect();
        fft.cqft_forward(&mut data);
        let expect = (m0 + n as i64 / 2) as usize;
        let max_idx = data
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
            .unwrap()
            .0;
        assert_eq!(max_idx, expect);
    }

    #[test]
    fn convolution_matches_direct_sum() {
        let fft = GridFft::new([4, 2, 1]);
        let a = random_state(8, 11);
        let b = random_state(8, 12);
        let mut a_hat = a.clone();
        fft.dft_forward_natural(&mut a_hat);
        let mut out = b.clone();
        fft.convolve_with_transformed(&a_hat, &mut out);

        // Direct circular convolution on the (4,2,1) index set.
        let idx = |i: usize, j: usize| i * 2 + j;
        for i in 0..4 {
            for j in 0..2 {
                let mut acc = Complex64::default();
                for di in 0..4 {
                    for dj in 0..2 {
                        let bi = (i + 4 - di) % 4;
                        let bj = (j + 2 - dj) % 2;
                        acc += a[idx(di, dj)] * b[idx(bi, bj)];
                    }
                }
                assert!((acc - out[idx(i, j)]).norm() < 1e-12);
            }
        }
    }
}
