//! Spatial discretization and register index bookkeeping.
//!
//! A [`GridSpec`] describes one spatial axis: a cell of length `L`
//! discretized into `N = 2^n_q` uniform points with spacing
//! `dx = L/N` and momentum step `dp = 2*pi/L`. A [`RegisterLayout`]
//! composes the electron position registers (one axis register per
//! electron per spatial dimension, all sharing the same grid) and an
//! optional nuclear configuration register into a single global index
//! space.
//!
//! Global index convention: electron axes are most significant, in
//! (electron, axis) order, and the nuclear register occupies the least
//! significant block, i.e.
//! `g = (((k_0 * N + k_1) * N + ...) << n_qn) + J`.
//! This makes nuclear-weight extraction a strided sum.

use crate::error::{Error, Result};

/// Discretization of one spatial axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    length: f64,
    qubit_count: u32,
    mass: f64,
}

impl GridSpec {
    /// Grid over a cell of length `length` (bohr) with `2^qubit_count`
    /// points, for a particle of mass `m_e = 1`.
    pub fn new(length: f64, qubit_count: u32) -> Result<Self> {
        Self::with_mass(length, qubit_count, 1.0)
    }

    pub fn with_mass(length: f64, qubit_count: u32, mass: f64) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "grid length must be positive and finite, got {length}"
            )));
        }
        if qubit_count == 0 || qubit_count >= usize::BITS {
            return Err(Error::InvalidParameter(format!(
                "qubit count must be in 1..{}, got {qubit_count}",
                usize::BITS
            )));
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "mass must be positive and finite, got {mass}"
            )));
        }
        Ok(Self {
            length,
            qubit_count,
            mass,
        })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn qubit_count(&self) -> u32 {
        self.qubit_count
    }

    /// Number of grid points `N = 2^n_q`.
    pub fn point_count(&self) -> usize {
        1usize << self.qubit_count
    }

    /// Grid spacing `dx = L/N`.
    pub fn spacing(&self) -> f64 {
        self.length / self.point_count() as f64
    }

    /// Momentum step `dp = 2*pi/L`.
    pub fn momentum_step(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.length
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Centered momentum index `s~ = s - N/2` in `{-N/2, ..., N/2-1}`.
    pub fn centered_index(&self, s: usize) -> i64 {
        s as i64 - (self.point_count() / 2) as i64
    }

    /// Position eigenvalue `x = k * dx` of grid index `k`.
    pub fn position_of(&self, k: usize) -> Result<f64> {
        if k >= self.point_count() {
            return Err(Error::IndexOutOfRange {
                what: "grid",
                index: k,
                len: self.point_count(),
            });
        }
        Ok(k as f64 * self.spacing())
    }

    /// Momentum eigenvalue `p = (s - N/2) * dp` of momentum bin `s`.
    pub fn momentum_of(&self, s: usize) -> Result<f64> {
        if s >= self.point_count() {
            return Err(Error::IndexOutOfRange {
                what: "momentum",
                index: s,
                len: self.point_count(),
            });
        }
        Ok(self.centered_index(s) as f64 * self.momentum_step())
    }

    /// Discrete kinetic energy `E_kin = s~^2 dp^2 / (2 m)` of momentum
    /// bin `s`.
    pub fn kinetic_energy(&self, s: usize) -> Result<f64> {
        let p = self.momentum_of(s)?;
        Ok(p * p / (2.0 * self.mass))
    }
}

/// Composition of electron axis registers and the nuclear register
/// into one global index space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegisterLayout {
    electron_count: usize,
    spatial_dimension: usize,
    grid: GridSpec,
    nuclear_qubits: u32,
    total_dimension: usize,
}

impl RegisterLayout {
    pub fn new(
        electron_count: usize,
        spatial_dimension: usize,
        grid: GridSpec,
        nuclear_qubits: u32,
    ) -> Result<Self> {
        if electron_count == 0 {
            return Err(Error::InvalidParameter(
                "electron count must be at least 1".into(),
            ));
        }
        if spatial_dimension != 1 && spatial_dimension != 3 {
            return Err(Error::InvalidParameter(format!(
                "spatial dimension must be 1 or 3, got {spatial_dimension}"
            )));
        }
        let axes = electron_count
            .checked_mul(spatial_dimension)
            .ok_or_else(|| Error::InvalidParameter("register size overflow".into()))?;
        let mut total = 1usize << nuclear_qubits;
        for _ in 0..axes {
            total = total
                .checked_mul(grid.point_count())
                .ok_or_else(|| Error::InvalidParameter("register size overflow".into()))?;
        }
        Ok(Self {
            electron_count,
            spatial_dimension,
            grid,
            nuclear_qubits,
            total_dimension: total,
        })
    }

    /// Layout with a single electron in one dimension and no nuclear
    /// register; the building block for 1D one-body oracles.
    pub fn single_axis(grid: GridSpec) -> Self {
        Self::new(1, 1, grid, 0).expect("single-axis layout is always valid")
    }

    pub fn electron_count(&self) -> usize {
        self.electron_count
    }

    pub fn spatial_dimension(&self) -> usize {
        self.spatial_dimension
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn nuclear_qubits(&self) -> u32 {
        self.nuclear_qubits
    }

    /// Number of nuclear basis states `2^n_qn` (1 when absent).
    pub fn nuclear_dimension(&self) -> usize {
        1usize << self.nuclear_qubits
    }

    pub fn has_nuclear_register(&self) -> bool {
        self.nuclear_qubits > 0
    }

    /// Total number of electron axis registers `n_e * d`.
    pub fn axis_count(&self) -> usize {
        self.electron_count * self.spatial_dimension
    }

    pub fn total_dimension(&self) -> usize {
        self.total_dimension
    }

    /// Stride of electron `electron`'s axis `axis` in the global index.
    pub fn axis_stride(&self, electron: usize, axis: usize) -> Result<usize> {
        if electron >= self.electron_count {
            return Err(Error::IndexOutOfRange {
                what: "electron",
                index: electron,
                len: self.electron_count,
            });
        }
        if axis >= self.spatial_dimension {
            return Err(Error::IndexOutOfRange {
                what: "axis",
                index: axis,
                len: self.spatial_dimension,
            });
        }
        let flat_axis = electron * self.spatial_dimension + axis;
        let n = self.grid.point_count();
        let mut stride = self.nuclear_dimension();
        for _ in flat_axis + 1..self.axis_count() {
            stride *= n;
        }
        Ok(stride)
    }

    /// Packs per-axis indices (electron-major, axis-minor) and the
    /// nuclear index into a global index.
    pub fn flatten(&self, axis_indices: &[usize], nuclear: usize) -> Result<usize> {
        if axis_indices.len() != self.axis_count() {
            return Err(Error::LengthMismatch {
                expected: self.axis_count(),
                got: axis_indices.len(),
            });
        }
        let n = self.grid.point_count();
        let mut g = 0usize;
        for &k in axis_indices {
            if k >= n {
                return Err(Error::IndexOutOfRange {
                    what: "grid",
                    index: k,
                    len: n,
                });
            }
            g = g * n + k;
        }
        if nuclear >= self.nuclear_dimension() {
            return Err(Error::IndexOutOfRange {
                what: "nuclear",
                index: nuclear,
                len: self.nuclear_dimension(),
            });
        }
        Ok((g << self.nuclear_qubits) + nuclear)
    }

    /// Inverse of [`flatten`](Self::flatten).
    pub fn unflatten(&self, global: usize) -> Result<(Vec<usize>, usize)> {
        if global >= self.total_dimension {
            return Err(Error::IndexOutOfRange {
                what: "global",
                index: global,
                len: self.total_dimension,
            });
        }
        let nuclear = global & (self.nuclear_dimension() - 1);
        let mut g = global >> self.nuclear_qubits;
        let n = self.grid.point_count();
        let mut axes = vec![0usize; self.axis_count()];
        for k in axes.iter_mut().rev() {
            *k = g % n;
            g /= n;
        }
        Ok((axes, nuclear))
    }

    /// Nuclear index of a global index.
    pub fn nuclear_index_of(&self, global: usize) -> usize {
        global & (self.nuclear_dimension() - 1)
    }

    /// Axis index of electron `electron`, axis `axis` within a global
    /// index, without allocating.
    pub fn axis_index_of(&self, global: usize, electron: usize, axis: usize) -> Result<usize> {
        let stride = self.axis_stride(electron, axis)?;
        Ok(global / stride % self.grid.point_count())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::prelude::*;

    fn grid_l10_n64() -> GridSpec {
        GridSpec::new(10.0, 6).unwrap()
    }

    #[test]
    fn spec_derived_quantities() {
        let g = grid_l10_n64();
        assert_eq!(g.point_count(), 64);
        assert_relative_eq!(g.spacing() * g.point_count() as f64, g.length());
        assert_relative_eq!(g.momentum_step() * g.length(), 2.0 * std::f64::consts::PI);
    }

    #[test]
    fn rejects_degenerate_parameters() {
        assert!(GridSpec::new(0.0, 6).is_err());
        assert!(GridSpec::new(-10.0, 6).is_err());
        assert!(GridSpec::new(10.0, 0).is_err());
        assert!(GridSpec::with_mass(10.0, 6, 0.0).is_err());
    }

    #[test]
    fn position_values() {
        let g = grid_l10_n64();
        assert_eq!(g.position_of(0).unwrap(), 0.0);
        assert_relative_eq!(g.position_of(32).unwrap(), 5.0);
        assert_relative_eq!(g.position_of(63).unwrap(), 9.84375);
        assert!(g.position_of(64).is_err());
    }

    #[test]
    fn positions_stay_inside_cell() {
        let g = grid_l10_n64();
        for k in 0..g.point_count() {
            let x = g.position_of(k).unwrap();
            assert!((0.0..g.length()).contains(&x));
        }
    }

    #[test]
    fn momentum_values() {
        let g = grid_l10_n64();
        let dp = 2.0 * std::f64::consts::PI / 10.0;
        assert_eq!(g.momentum_of(32).unwrap(), 0.0);
        assert_relative_eq!(g.momentum_of(0).unwrap(), -32.0 * dp);
        assert_relative_eq!(g.momentum_of(63).unwrap(), 31.0 * dp);
        assert!(g.momentum_of(64).is_err());
    }

    #[test]
    fn momenta_cover_centered_range_without_repeats() {
        let g = grid_l10_n64();
        let mut seen: Vec<i64> = (0..g.point_count())
            .map(|s| g.centered_index(s))
            .collect();
        seen.sort_unstable();
        let expected: Vec<i64> = (-32..32).collect();
        assert_eq!(seen, expected);
    }

    #[test]
    fn kinetic_energy_matches_formula() {
        let g = grid_l10_n64();
        let dp = g.momentum_step();
        assert_eq!(g.kinetic_energy(32).unwrap(), 0.0);
        assert_relative_eq!(g.kinetic_energy(36).unwrap(), 16.0 * dp * dp / 2.0);
    }

    #[test]
    fn layout_dimension_is_product_of_subregisters() {
        let g = GridSpec::new(10.0, 3).unwrap();
        let layout = RegisterLayout::new(2, 3, g, 2).unwrap();
        assert_eq!(layout.total_dimension(), 8usize.pow(6) * 4);
        assert_eq!(layout.axis_count(), 6);
    }

    #[test]
    fn flatten_follows_declared_convention() {
        let g = grid_l10_n64();
        let layout = RegisterLayout::new(1, 1, g, 2).unwrap();
        assert_eq!(layout.flatten(&[0], 0).unwrap(), 0);
        assert_eq!(layout.flatten(&[3], 1).unwrap(), 13);
    }

    #[test]
    fn flatten_unflatten_roundtrip_random() {
        let g = GridSpec::new(10.0, 2).unwrap();
        let layout = RegisterLayout::new(2, 3, g, 2).unwrap();
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..1000 {
            let axes: Vec<usize> = (0..layout.axis_count())
                .map(|_| rng.gen_range(0..4))
                .collect();
            let j = rng.gen_range(0..4);
            let g_idx = layout.flatten(&axes, j).unwrap();
            let (axes2, j2) = layout.unflatten(g_idx).unwrap();
            assert_eq!(axes, axes2);
            assert_eq!(j, j2);
        }
    }

    #[test]
    fn flatten_is_bijection_exhaustive() {
        // 4^3 axes * 4 nuclear = 2^8 <= 2^14; exhaustive round-trip.
        let g = GridSpec::new(5.0, 2).unwrap();
        let layout = RegisterLayout::new(3, 1, g, 2).unwrap();
        let mut seen = vec![false; layout.total_dimension()];
        for g_idx in 0..layout.total_dimension() {
            let (axes, j) = layout.unflatten(g_idx).unwrap();
            let back = layout.flatten(&axes, j).unwrap();
            assert_eq!(back, g_idx);
            assert!(!seen[g_idx]);
            seen[g_idx] = true;
        }
        assert!(seen.iter().all(|&b| b));
    }

    #[test]
    fn strides_match_unflatten() {
        let g = GridSpec::new(5.0, 2).unwrap();
        let layout = RegisterLayout::new(2, 3, g, 1).unwrap();
        let axes = [1, 3, 0, 2, 1, 3];
        let g_idx = layout.flatten(&axes, 1).unwrap();
        for e in 0..2 {
            for a in 0..3 {
                assert_eq!(
                    layout.axis_index_of(g_idx, e, a).unwrap(),
                    axes[e * 3 + a]
                );
            }
        }
        assert_eq!(layout.nuclear_index_of(g_idx), 1);
    }

    #[test]
    fn rejects_out_of_range_components() {
        let g = grid_l10_n64();
        let layout = RegisterLayout::new(1, 1, g, 1).unwrap();
        assert!(layout.flatten(&[64], 0).is_err());
        assert!(layout.flatten(&[0], 2).is_err());
        assert!(layout.flatten(&[0, 0], 0).is_err());
        assert!(layout.unflatten(layout.total_dimension()).is_err());
    }
}
