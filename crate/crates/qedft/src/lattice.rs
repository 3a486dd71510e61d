//! Simulation cells, uniform real-space grids, centered reciprocal vectors,
//! and k-point sampling for orthorhombic (in practice cubic) boxes.

use crate::error::{Error, Result};
use crate::units::angstrom_to_bohr;
use std::sync::Arc;

/// One atom: species label, position in bohr, ionic (valence) charge.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub species: String,
    pub position: [f64; 3],
    pub z_ion: f64,
}

/// Simulation box: side lengths in bohr, qubit count per axis
/// (2^n grid points along that axis), the atoms it contains, and whether
/// the box is treated as periodic.
///
/// A qubit count of 0 collapses an axis to a single point, which is how
/// one- and two-dimensional model systems are expressed; at least one axis
/// must keep a real extent.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub lengths: [f64; 3],
    pub qubits: [u32; 3],
    pub atoms: Vec<Atom>,
    pub periodic: bool,
}

impl Cell {
    pub fn new(lengths: [f64; 3], qubits: [u32; 3], atoms: Vec<Atom>, periodic: bool) -> Result<Self> {
        if lengths.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
            return Err(Error::Config(format!("cell lengths must be positive, got {lengths:?}")));
        }
        if qubits.iter().all(|&n| n == 0) {
            return Err(Error::Config("at least one axis needs a nonzero qubit count".into()));
        }
        if qubits.iter().any(|&n| n > 12) {
            return Err(Error::Config(format!("qubit count {qubits:?} too large to simulate")));
        }
        let mut cell = Cell { lengths, qubits, atoms, periodic };
        for atom in &mut cell.atoms {
            for ax in 0..3 {
                let l = cell.lengths[ax];
                let p = atom.position[ax];
                if cell.periodic {
                    atom.position[ax] = p.rem_euclid(l);
                } else if !(0.0..=l).contains(&p) {
                    return Err(Error::Config(format!(
                        "atom {} position {p} outside non-periodic box of length {l}",
                        atom.species
                    )));
                }
            }
        }
        Ok(cell)
    }

    /// Cubic box given in angstrom with equal qubit counts on each axis.
    pub fn cube_angstrom(length_ang: f64, n: u32, atoms: Vec<Atom>, periodic: bool) -> Result<Self> {
        let l = angstrom_to_bohr(length_ang);
        Cell::new([l, l, l], [n, n, n], atoms, periodic)
    }

    pub fn volume(&self) -> f64 {
        self.lengths[0] * self.lengths[1] * self.lengths[2]
    }

    pub fn is_cubic(&self) -> bool {
        let [a, b, c] = self.lengths;
        let eq = |x: f64, y: f64| (x - y).abs() < 1e-12 * x.max(y);
        eq(a, b) && eq(b, c) && self.qubits[0] == self.qubits[1] && self.qubits[1] == self.qubits[2]
    }

    /// Total valence electrons contributed by the atoms.
    pub fn n_elec(&self) -> f64 {
        self.atoms.iter().map(|a| a.z_ion).sum()
    }
}

/// A point of a Brillouin-zone sampling: fractional coordinates in
/// [-1/2, 1/2)^3 and a normalized weight. `path_coord` carries the
/// cumulative path length when the point comes from [`kpath`].
#[derive(Debug, Clone, PartialEq)]
pub struct KPoint {
    pub frac: [f64; 3],
    pub weight: f64,
    pub path_coord: Option<f64>,
}

impl KPoint {
    pub fn gamma() -> Self {
        KPoint { frac: [0.0; 3], weight: 1.0, path_coord: None }
    }

    pub fn new(frac: [f64; 3], weight: f64) -> Self {
        KPoint { frac, weight, path_coord: None }
    }

    /// Cartesian k in 1/bohr for an orthorhombic cell.
    pub fn cartesian(&self, lengths: [f64; 3]) -> [f64; 3] {
        [
            2.0 * std::f64::consts::PI * self.frac[0] / lengths[0],
            2.0 * std::f64::consts::PI * self.frac[1] / lengths[1],
            2.0 * std::f64::consts::PI * self.frac[2] / lengths[2],
        ]
    }

    pub fn is_gamma(&self) -> bool {
        self.frac.iter().all(|&f| f.abs() < 1e-14)
    }
}

/// Uniform real-space grid over a [`Cell`] plus its centered reciprocal
/// vectors.
///
/// Point `(i, j, k)` sits at `(i Lx/Nx, j Ly/Ny, k Lz/Nz)` and is stored at
/// linear index `(i * Ny + j) * Nz + k`, matching the register basis
/// `|i>|j>|k>` with the z axis on the least significant qubits.
///
/// Per axis the reciprocal vectors are `G_m = 2 pi m / L` with the centered
/// index `m` running over `-N/2 ..= N/2 - 1`; after the centered Fourier
/// transform, axis array index `j` holds `m = j - N/2`. The set is symmetric
/// about zero except for the unpaired most-negative index.
#[derive(Debug, Clone)]
pub struct Grid {
    pub cell: Cell,
    /// Points per axis, `2^qubits`.
    pub n: [usize; 3],
    pub n_grid: usize,
    /// Grid spacing per axis (bohr).
    pub spacing: [f64; 3],
    /// Volume element (bohr^3).
    pub dv: f64,
    /// Centered reciprocal vectors per axis, indexed in centered order.
    pub gvecs: [Vec<f64>; 3],
}

/// Shared handle to an immutable grid.
pub type GridRef = Arc<Grid>;

/// Builds the grid and centered G-vectors of a cell.
pub fn build_grid(cell: &Cell) -> GridRef {
    let n = [
        1usize << cell.qubits[0],
        1usize << cell.qubits[1],
        1usize << cell.qubits[2],
    ];
    let n_grid = n[0] * n[1] * n[2];
    let spacing = [
        cell.lengths[0] / n[0] as f64,
        cell.lengths[1] / n[1] as f64,
        cell.lengths[2] / n[2] as f64,
    ];
    let dv = cell.volume() / n_grid as f64;
    let gvecs = std::array::from_fn(|ax| {
        let nn = n[ax] as i64;
        (0..nn)
            .map(|j| 2.0 * std::f64::consts::PI * (j - nn / 2) as f64 / cell.lengths[ax])
            .collect()
    });
    Arc::new(Grid { cell: cell.clone(), n, n_grid, spacing, dv, gvecs })
}

impl Grid {
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n[1] + j) * self.n[2] + k
    }

    pub fn unravel(&self, idx: usize) -> [usize; 3] {
        let k = idx % self.n[2];
        let j = (idx / self.n[2]) % self.n[1];
        let i = idx / (self.n[1] * self.n[2]);
        [i, j, k]
    }

    /// Coordinates of a grid point in bohr.
    pub fn point(&self, idx: usize) -> [f64; 3] {
        let [i, j, k] = self.unravel(idx);
        [
            i as f64 * self.spacing[0],
            j as f64 * self.spacing[1],
            k as f64 * self.spacing[2],
        ]
    }

    /// Signed displacement from `b` to `a` per axis, minimum-image if the
    /// cell is periodic.
    pub fn displacement(&self, a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
        std::array::from_fn(|ax| {
            let mut d = a[ax] - b[ax];
            if self.cell.periodic {
                let l = self.cell.lengths[ax];
                d -= (d / l).round() * l;
            }
            d
        })
    }

    pub fn distance(&self, a: [f64; 3], b: [f64; 3]) -> f64 {
        let d = self.displacement(a, b);
        (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
    }

    /// `|G + k|^2 / 2` table in centered-index storage order.
    pub fn kinetic_diag(&self, k_cart: [f64; 3]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n_grid);
        for i in 0..self.n[0] {
            let gx = self.gvecs[0][i] + k_cart[0];
            for j in 0..self.n[1] {
                let gy = self.gvecs[1][j] + k_cart[1];
                for k in 0..self.n[2] {
                    let gz = self.gvecs[2][k] + k_cart[2];
                    out.push(0.5 * (gx * gx + gy * gy + gz * gz));
                }
            }
        }
        out
    }

    pub fn same_shape(&self, other: &Grid) -> bool {
        self.n == other.n && self.cell.lengths == other.cell.lengths
    }
}

/// Uniform Gamma-centered Monkhorst-Pack-style mesh. With `reduce` the mesh
/// is folded by the full cubic point group (which contains time reversal via
/// inversion), accumulating weights; this is only valid for cubic cells.
pub fn kpoint_mesh(cell: &Cell, counts: [usize; 3], reduce: bool) -> Result<Vec<KPoint>> {
    if counts.iter().any(|&c| c == 0) {
        return Err(Error::Config("k-mesh counts must be at least 1".into()));
    }
    if reduce && !cell.is_cubic() {
        return Err(Error::Symmetry(
            "k-mesh symmetry reduction is implemented for cubic cells only".into(),
        ));
    }
    let frac = |m: usize, n: usize| {
        let mut f = m as f64 / n as f64;
        if f >= 0.5 {
            f -= 1.0;
        }
        f
    };
    let mut pts = Vec::with_capacity(counts[0] * counts[1] * counts[2]);
    for a in 0..counts[0] {
        for b in 0..counts[1] {
            for c in 0..counts[2] {
                pts.push([frac(a, counts[0]), frac(b, counts[1]), frac(c, counts[2])]);
            }
        }
    }
    let total = pts.len() as f64;
    if !reduce {
        return Ok(pts.into_iter().map(|f| KPoint::new(f, 1.0 / total)).collect());
    }

    // Orbit representative under the 48 signed permutations of the
    // fractional coordinates: sort |f| descending after folding signs.
    let canon = |f: [f64; 3]| {
        let mut v: Vec<i64> = f.iter().map(|&x| (x.abs() * 1e9).round() as i64).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        (v[0], v[1], v[2])
    };
    let mut reps: Vec<([f64; 3], f64)> = Vec::new();
    let mut seen: std::collections::HashMap<(i64, i64, i64), usize> = std::collections::HashMap::new();
    for f in pts {
        let key = canon(f);
        match seen.get(&key) {
            Some(&i) => reps[i].1 += 1.0,
            None => {
                seen.insert(key, reps.len());
                reps.push((f, 1.0));
            }
        }
    }
    Ok(reps
        .into_iter()
        .map(|(f, count)| KPoint::new(f, count / total))
        .collect())
}

/// Evenly spaced k-points along straight segments between waypoints, with a
/// cumulative path-length coordinate (in 1/bohr) attached. Each segment
/// contributes `points_per_segment` points excluding its start; the first
/// waypoint opens the path.
pub fn kpath(
    cell: &Cell,
    waypoints: &[([f64; 3], &str)],
    points_per_segment: usize,
) -> Result<Vec<KPoint>> {
    if waypoints.len() < 2 {
        return Err(Error::Config("a k-path needs at least two waypoints".into()));
    }
    if points_per_segment == 0 {
        return Err(Error::Config("points_per_segment must be at least 1".into()));
    }
    let mut out = Vec::new();
    let mut coord = 0.0;
    let mut push = |frac: [f64; 3], coord: f64| {
        let mut kp = KPoint::new(frac, 1.0);
        kp.path_coord = Some(coord);
        out.push(kp);
    };
    push(waypoints[0].0, coord);
    for w in waypoints.windows(2) {
        let (a, b) = (w[0].0, w[1].0);
        let seg_cart: [f64; 3] = std::array::from_fn(|ax| {
            2.0 * std::f64::consts::PI * (b[ax] - a[ax]) / cell.lengths[ax]
        });
        let seg_len = (seg_cart[0].powi(2) + seg_cart[1].powi(2) + seg_cart[2].powi(2)).sqrt();
        if seg_len < 1e-14 {
            return Err(Error::Config("empty k-path segment (repeated waypoint)".into()));
        }
        for s in 1..=points_per_segment {
            let t = s as f64 / points_per_segment as f64;
            let frac = std::array::from_fn(|ax| a[ax] + t * (b[ax] - a[ax]));
            push(frac, coord + t * seg_len);
        }
        coord += seg_len;
    }
    // Path points are not a sampling mesh; normalize weights anyway so the
    // list satisfies the KPoint weight contract.
    let w = 1.0 / out.len() as f64;
    for kp in &mut out {
        kp.weight = w;
    }
    Ok(out)
}

/// The high-symmetry circuit used for cubic band structures:
/// Gamma - X - M - R - Gamma - M.
pub fn cubic_kpath_waypoints() -> Vec<([f64; 3], &'static str)> {
    vec![
        ([0.0, 0.0, 0.0], "G"),
        ([0.0, 0.0, 0.5], "X"),
        ([0.0, 0.5, 0.5], "M"),
        ([0.5, 0.5, 0.5], "R"),
        ([0.0, 0.0, 0.0], "G"),
        ([0.0, 0.5, 0.5], "M"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::angstrom_to_bohr;

    fn bare_cube(len: f64, n: u32) -> Cell {
        Cell::new([len; 3], [n; 3], vec![], true).unwrap()
    }

    #[test]
    fn grid_of_reference_box() {
        // 10 angstrom cube, 5 qubits per axis: 32 points per axis and
        // dv = V / 32768.
        let cell = Cell::cube_angstrom(10.0, 5, vec![], true).unwrap();
        let grid = build_grid(&cell);
        assert_eq!(grid.n, [32, 32, 32]);
        let l = angstrom_to_bohr(10.0);
        assert!((grid.dv - l.powi(3) / 32768.0).abs() < 1e-12);
        // Sum of dv over the grid recovers the cell volume.
        assert!((grid.dv * grid.n_grid as f64 - cell.volume()).abs() < 1e-9);
    }

    #[test]
    fn sixteen_cubed_grid() {
        let cell = Cell::cube_angstrom(3.5, 4, vec![], true).unwrap();
        let grid = build_grid(&cell);
        assert_eq!(grid.n, [16, 16, 16]);
        assert_eq!(grid.n_grid, 4096);
    }

    #[test]
    fn smallest_grid_points_and_gvecs() {
        let cell = bare_cube(1.0, 1);
        let grid = build_grid(&cell);
        assert_eq!(grid.n, [2, 2, 2]);
        let xs: Vec<f64> = (0..2).map(|i| grid.point(grid.index(i, 0, 0))[0]).collect();
        assert_eq!(xs, vec![0.0, 0.5]);
        let tau = 2.0 * std::f64::consts::PI;
        assert!((grid.gvecs[0][0] + tau).abs() < 1e-14);
        assert!(grid.gvecs[0][1].abs() < 1e-14);
    }

    #[test]
    fn gvec_symmetry_up_to_unpaired_index() {
        let grid = build_grid(&bare_cube(7.0, 3));
        let g = &grid.gvecs[0];
        assert_eq!(g.len(), 8);
        // Index 0 is the unpaired most-negative entry; the rest pair off
        // around the zero at index N/2.
        for j in 1..4 {
            assert!((g[4 + j] + g[4 - j]).abs() < 1e-13);
        }
        assert!(g[4].abs() < 1e-14);
        assert!(g[0] < g[7] && g[0].abs() > g[7].abs());
    }

    #[test]
    fn index_ordering_matches_registers() {
        let grid = build_grid(&bare_cube(4.0, 2));
        assert_eq!(grid.index(1, 2, 3), (1 * 4 + 2) * 4 + 3);
        assert_eq!(grid.unravel(grid.index(3, 0, 2)), [3, 0, 2]);
    }

    #[test]
    fn collapsed_axes_give_line_grid() {
        let cell = Cell::new([8.0, 4.0, 4.0], [3, 0, 0], vec![], true).unwrap();
        let grid = build_grid(&cell);
        assert_eq!(grid.n, [8, 1, 1]);
        assert_eq!(grid.gvecs[1], vec![0.0]);
        assert!((grid.dv - 8.0 * 4.0 * 4.0 / 8.0).abs() < 1e-13);
    }

    #[test]
    fn atom_wrapping_and_validation() {
        let atom = Atom { species: "H".into(), position: [11.0, -1.0, 2.0], z_ion: 1.0 };
        let cell = Cell::new([10.0; 3], [2; 3], vec![atom.clone()], true).unwrap();
        assert!((cell.atoms[0].position[0] - 1.0).abs() < 1e-12);
        assert!((cell.atoms[0].position[1] - 9.0).abs() < 1e-12);
        assert!(Cell::new([10.0; 3], [2; 3], vec![atom], false).is_err());
    }

    #[test]
    fn gamma_only_mesh() {
        let cell = bare_cube(5.0, 2);
        let mesh = kpoint_mesh(&cell, [1, 1, 1], false).unwrap();
        assert_eq!(mesh.len(), 1);
        assert!(mesh[0].is_gamma());
        assert!((mesh[0].weight - 1.0).abs() < 1e-15);
    }

    #[test]
    fn full_222_mesh() {
        let cell = bare_cube(5.0, 2);
        let mesh = kpoint_mesh(&cell, [2, 2, 2], false).unwrap();
        assert_eq!(mesh.len(), 8);
        for kp in &mesh {
            assert!((kp.weight - 0.125).abs() < 1e-15);
            for f in kp.frac {
                assert!((-0.5..0.5).contains(&f));
            }
        }
    }

    #[test]
    fn reduced_999_mesh_has_35_points() {
        let cell = bare_cube(5.0, 2);
        let mesh = kpoint_mesh(&cell, [9, 9, 9], true).unwrap();
        assert_eq!(mesh.len(), 35);
        let wsum: f64 = mesh.iter().map(|k| k.weight).sum();
        assert!((wsum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reduced_mesh_matches_full_for_symmetric_observable() {
        // Average a cubic-symmetric function of k over the mesh both ways.
        let cell = bare_cube(5.0, 2);
        let full = kpoint_mesh(&cell, [4, 4, 4], false).unwrap();
        let red = kpoint_mesh(&cell, [4, 4, 4], true).unwrap();
        let f = |k: &KPoint| {
            let c = k.cartesian(cell.lengths);
            let s2 = c[0] * c[0] + c[1] * c[1] + c[2] * c[2];
            s2 + 0.3 * s2 * s2
        };
        let a: f64 = full.iter().map(|k| k.weight * f(k)).sum();
        let b: f64 = red.iter().map(|k| k.weight * f(k)).sum();
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }

    #[test]
    fn reduction_rejects_noncubic() {
        let cell = Cell::new([5.0, 6.0, 5.0], [2; 3], vec![], true).unwrap();
        assert!(matches!(kpoint_mesh(&cell, [2, 2, 2], true), Err(Error::Symmetry(_))));
    }

    #[test]
    fn kpath_linear_interpolation() {
        let cell = bare_cube(5.0, 2);
        let pts = kpath(&cell, &[([0.0, 0.0, 0.0], "G"), ([0.0, 0.0, 0.5], "X")], 2).unwrap();
        assert_eq!(pts.len(), 3);
        assert_eq!(pts[1].frac, [0.0, 0.0, 0.25]);
        assert_eq!(pts[2].frac, [0.0, 0.0, 0.5]);
        let c = pts.last().unwrap().path_coord.unwrap();
        assert!((c - std::f64::consts::PI / 5.0).abs() < 1e-12);
    }

    #[test]
    fn kpath_single_point_segment() {
        let cell = bare_cube(5.0, 2);
        let pts = kpath(&cell, &[([0.0; 3], "G"), ([0.5, 0.0, 0.0], "X")], 1).unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[1].frac, [0.5, 0.0, 0.0]);
    }

    #[test]
    fn kpath_rejects_empty_segment() {
        let cell = bare_cube(5.0, 2);
        assert!(kpath(&cell, &[([0.0; 3], "G"), ([0.0; 3], "G")], 3).is_err());
    }
}
