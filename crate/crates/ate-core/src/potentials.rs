//! Diagonal (position-basis) potential construction.
//!
//! Every potential in the time-dependent Hamiltonian is diagonal in
//! the position basis, so each term is cached as a real array over the
//! global index space of a layout. [`assemble_diagonal`] forms the
//! instantaneous potential as a weighted sum of terms, with the weight
//! of each term drawn from its schedule slot: slots `A1..A4` ramp on
//! with the schedule value, slots `A5`/`A6` ramp off as `1 - A`, and
//! `Fixed` terms keep weight one.

use crate::error::{Error, Result};
use crate::grid::{GridSpec, RegisterLayout};

/// Penalty (hartree) assigned to nuclear basis states beyond the
/// configured structure list, so the evolution depopulates them.
pub const UNUSED_CONFIG_PENALTY: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermKind {
    ExternalOnebody,
    ElectronElectron,
    ElectronNucleus,
    NucleusNucleus,
    InitialV0,
}

/// Which schedule function weights a term in the instantaneous
/// Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScheduleSlot {
    A1,
    A2,
    A3,
    A4,
    A5,
    A6,
    Fixed,
}

/// Values of the six schedule functions at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlotValues {
    pub a: [f64; 6],
}

impl SlotValues {
    /// All six slots share one schedule value.
    pub fn uniform(a: f64) -> Self {
        Self { a: [a; 6] }
    }

    /// Term weight for a slot: `A_i` for ramp-on slots, `1 - A_i` for
    /// the ramp-off slots `A5`/`A6`, `1` for fixed terms.
    pub fn weight(&self, slot: ScheduleSlot) -> f64 {
        match slot {
            ScheduleSlot::A1 => self.a[0],
            ScheduleSlot::A2 => self.a[1],
            ScheduleSlot::A3 => self.a[2],
            ScheduleSlot::A4 => self.a[3],
            ScheduleSlot::A5 => 1.0 - self.a[4],
            ScheduleSlot::A6 => 1.0 - self.a[5],
            ScheduleSlot::Fixed => 1.0,
        }
    }
}

/// One potential term with its diagonal cached over global indices.
#[derive(Debug, Clone)]
pub struct PotentialTerm {
    kind: TermKind,
    slot: ScheduleSlot,
    diagonal: Vec<f64>,
}

impl PotentialTerm {
    /// Wraps a raw global diagonal.
    pub fn from_global_diagonal(
        kind: TermKind,
        slot: ScheduleSlot,
        layout: &RegisterLayout,
        diagonal: Vec<f64>,
    ) -> Result<Self> {
        if diagonal.len() != layout.total_dimension() {
            return Err(Error::LengthMismatch {
                expected: layout.total_dimension(),
                got: diagonal.len(),
            });
        }
        if !diagonal.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite {
                what: "potential diagonal",
            });
        }
        Ok(Self {
            kind,
            slot,
            diagonal,
        })
    }

    /// One-body potential given per-axis 1D diagonals, summed over all
    /// electrons: `sum_l sum_axis v_axis(k_{l,axis})`.
    pub fn from_per_axis(
        kind: TermKind,
        slot: ScheduleSlot,
        layout: &RegisterLayout,
        per_axis: &[Vec<f64>],
    ) -> Result<Self> {
        let d = layout.spatial_dimension();
        if per_axis.len() != d {
            return Err(Error::LengthMismatch {
                expected: d,
                got: per_axis.len(),
            });
        }
        let n = layout.grid().point_count();
        for v in per_axis {
            if v.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: v.len(),
                });
            }
        }
        let mut diagonal = vec![0.0; layout.total_dimension()];
        for electron in 0..layout.electron_count() {
            for axis in 0..d {
                let stride = layout.axis_stride(electron, axis)?;
                for (g, out) in diagonal.iter_mut().enumerate() {
                    *out += per_axis[axis][g / stride % n];
                }
            }
        }
        Self::from_global_diagonal(kind, slot, layout, diagonal)
    }

    /// Pairwise soft-Coulomb electron-electron repulsion
    /// `sum_{l<l'} z^2 / sqrt(|r_l - r_l'|^2 + lambda^2)`.
    pub fn electron_electron_soft_coulomb(
        layout: &RegisterLayout,
        charge: f64,
        lambda: f64,
        slot: ScheduleSlot,
    ) -> Result<Self> {
        if lambda <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "softness lambda must be positive, got {lambda}"
            )));
        }
        let n_e = layout.electron_count();
        let d = layout.spatial_dimension();
        let grid = layout.grid();
        let n = grid.point_count();
        let positions: Vec<f64> = (0..n).map(|k| k as f64 * grid.spacing()).collect();
        let mut diagonal = vec![0.0; layout.total_dimension()];
        for l in 0..n_e {
            for lp in l + 1..n_e {
                let strides_l: Vec<usize> = (0..d)
                    .map(|a| layout.axis_stride(l, a).unwrap())
                    .collect();
                let strides_lp: Vec<usize> = (0..d)
                    .map(|a| layout.axis_stride(lp, a).unwrap())
                    .collect();
                for (g, out) in diagonal.iter_mut().enumerate() {
                    let mut r2 = 0.0;
                    for a in 0..d {
                        let dx = positions[g / strides_l[a] % n]
                            - positions[g / strides_lp[a] % n];
                        r2 += dx * dx;
                    }
                    *out += charge * charge / (r2 + lambda * lambda).sqrt();
                }
            }
        }
        Self::from_global_diagonal(TermKind::ElectronElectron, slot, layout, diagonal)
    }

    /// Nucleus-nucleus energy: depends only on the nuclear index `J`.
    /// States beyond the table get [`UNUSED_CONFIG_PENALTY`].
    pub fn nucleus_nucleus(
        layout: &RegisterLayout,
        table: &[f64],
        slot: ScheduleSlot,
    ) -> Result<Self> {
        if table.is_empty() {
            return Err(Error::InvalidParameter(
                "nucleus-nucleus table is empty".into(),
            ));
        }
        let n_j = layout.nuclear_dimension();
        if table.len() > n_j {
            return Err(Error::LengthMismatch {
                expected: n_j,
                got: table.len(),
            });
        }
        let diagonal = (0..layout.total_dimension())
            .map(|g| {
                let j = layout.nuclear_index_of(g);
                table.get(j).copied().unwrap_or(UNUSED_CONFIG_PENALTY)
            })
            .collect();
        Self::from_global_diagonal(TermKind::NucleusNucleus, slot, layout, diagonal)
    }

    pub fn kind(&self) -> TermKind {
        self.kind
    }

    pub fn slot(&self) -> ScheduleSlot {
        self.slot
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }
}

/// `1/2 m omega^2 (x - center)^2` over one axis.
pub fn harmonic_1d(grid: &GridSpec, omega: f64, center: f64) -> Vec<f64> {
    assert!(omega > 0.0, "harmonic frequency must be positive");
    let m = grid.mass();
    (0..grid.point_count())
        .map(|k| {
            let x = k as f64 * grid.spacing() - center;
            0.5 * m * omega * omega * x * x
        })
        .collect()
}

/// Independent harmonic diagonals per axis, wells centered at `L/2`.
pub fn anisotropic_harmonic(grid: &GridSpec, omegas: [f64; 3]) -> [Vec<f64>; 3] {
    let center = grid.length() / 2.0;
    omegas.map(|w| harmonic_1d(grid, w, center))
}

/// Soft-Coulomb interaction `Z1 Z2 / sqrt(r^2 + lambda^2)`.
pub fn soft_coulomb(z1: f64, z2: f64, lambda: f64, r: f64) -> Result<f64> {
    if lambda <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "softness lambda must be positive, got {lambda}"
        )));
    }
    Ok(z1 * z2 / (r * r + lambda * lambda).sqrt())
}

/// Electron potential of two unit-charge nuclei at `(L +- d)/2`
/// (softness 1), over one electron axis.
pub fn v_en_for_bondlength(grid: &GridSpec, bond_length: f64) -> Result<Vec<f64>> {
    let l = grid.length();
    if !(bond_length > 0.0 && bond_length < l) {
        return Err(Error::InvalidParameter(format!(
            "bond length must lie inside the cell (0, {l}), got {bond_length}"
        )));
    }
    let right = (l + bond_length) / 2.0;
    let left = (l - bond_length) / 2.0;
    (0..grid.point_count())
        .map(|k| {
            let x = k as f64 * grid.spacing();
            Ok(soft_coulomb(-1.0, 1.0, 1.0, x - right)? + soft_coulomb(-1.0, 1.0, 1.0, x - left)?)
        })
        .collect()
}

/// Nucleus-nucleus repulsion `1/sqrt(d_J^2 + 1)` per candidate bond
/// length.
pub fn v_nn_table(bond_lengths: &[f64]) -> Result<Vec<f64>> {
    if bond_lengths.is_empty() {
        return Err(Error::InvalidParameter("no bond lengths given".into()));
    }
    bond_lengths
        .iter()
        .map(|&d| soft_coulomb(1.0, 1.0, 1.0, d))
        .collect()
}

/// Weighted elementwise sum of term diagonals at the given slot
/// values.
pub fn assemble_diagonal(
    layout: &RegisterLayout,
    terms: &[PotentialTerm],
    values: &SlotValues,
) -> Result<Vec<f64>> {
    let mut out = vec![0.0; layout.total_dimension()];
    for term in terms {
        if term.diagonal.len() != out.len() {
            return Err(Error::LengthMismatch {
                expected: out.len(),
                got: term.diagonal.len(),
            });
        }
        let w = values.weight(term.slot);
        if w != 0.0 {
            for (o, v) in out.iter_mut().zip(&term.diagonal) {
                *o += w * v;
            }
        }
    }
    Ok(out)
}
