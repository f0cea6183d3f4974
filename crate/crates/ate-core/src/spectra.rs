//! Exact-diagonalization oracle for instantaneous spectra.
//!
//! The dense Hamiltonian uses the Fourier-spectral kinetic matrix
//! built from the same centered transform as the evolution engine, so
//! Trotterized output states are compared against the ground state of
//! the *same* discrete operator. The oracle is deliberately capped at
//! desk scale; see [`DEFAULT_DIMENSION_CAP`].

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{GridSpec, RegisterLayout};
use crate::statevector::CenteredDft;

/// Largest total dimension the dense oracle will diagonalize.
pub const DEFAULT_DIMENSION_CAP: usize = 4096;
/// Below this first gap the ground state counts as degenerate for
/// the adiabatic indicator.
pub const DEFAULT_GAP_FLOOR: f64 = 1e-8;
/// Eigenvalues within this distance of the lowest one are treated as
/// one ground eigenspace.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-6;
/// Sample count of the uniform schedule-value grid (256 intervals
/// plus endpoints).
pub const DEFAULT_A_GRID_POINTS: usize = 257;

/// Eigenpairs of the instantaneous Hamiltonian at one schedule value.
#[derive(Debug, Clone)]
pub struct SpectrumSlice {
    pub schedule_value: f64,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Unit-norm eigenvectors, one column per eigenvalue.
    pub eigenvectors: DMatrix<Complex64>,
}

impl SpectrumSlice {
    pub fn dimension(&self) -> usize {
        self.eigenvalues.len()
    }

    /// First excitation gap.
    pub fn gap(&self) -> f64 {
        self.eigenvalues[1] - self.eigenvalues[0]
    }

    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }
}

/// Operator whose matrix elements enter the adiabatic indicator;
/// either diagonal in the position basis or a full Hermitian matrix.
#[derive(Debug, Clone)]
pub enum Coupling {
    Diagonal(Vec<f64>),
    Matrix(DMatrix<Complex64>),
}

impl Coupling {
    fn apply(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        match self {
            Coupling::Diagonal(d) => {
                DVector::from_iterator(v.len(), v.iter().zip(d).map(|(a, &x)| a * x))
            }
            Coupling::Matrix(m) => m * v,
        }
    }
}

/// Kinetic operator of one axis in the position basis,
/// `T = F^dag diag(E_kin) F`, built column-by-column with the same
/// centered transform the evolution uses.
pub fn kinetic_matrix_1d(grid: &GridSpec) -> DMatrix<Complex64> {
    let n = grid.point_count();
    let mut dft = CenteredDft::new(n);
    let energies: Vec<f64> = (0..n).map(|s| grid.kinetic_energy(s).unwrap()).collect();
    let mut t = DMatrix::zeros(n, n);
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        col.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
        col[k] = Complex64::new(1.0, 0.0);
        dft.forward(&mut col);
        for (c, &e) in col.iter_mut().zip(&energies) {
            *c *= e;
        }
        dft.inverse(&mut col);
        for (row, &c) in col.iter().enumerate() {
            t[(row, k)] = c;
        }
    }
    t
}

/// Dense instantaneous Hamiltonian
/// `H = sum_axes T_axis + diag(potential) - transverse_weight * sum_l X_l`,
/// the `X_l` acting on the nuclear register.
pub fn dense_hamiltonian(
    layout: &RegisterLayout,
    potential: &[f64],
    transverse_weight: f64,
) -> Result<DMatrix<Complex64>> {
    dense_hamiltonian_capped(layout, potential, transverse_weight, DEFAULT_DIMENSION_CAP)
}

pub fn dense_hamiltonian_capped(
    layout: &RegisterLayout,
    potential: &[f64],
    transverse_weight: f64,
    cap: usize,
) -> Result<DMatrix<Complex64>> {
    let dim = layout.total_dimension();
    if dim > cap {
        return Err(Error::DimensionCap { dim, cap });
    }
    if potential.len() != dim {
        return Err(Error::LengthMismatch {
            expected: dim,
            got: potential.len(),
        });
    }
    let n = layout.grid().point_count();
    let t1 = kinetic_matrix_1d(layout.grid());
    let mut h = DMatrix::zeros(dim, dim);
    for electron in 0..layout.electron_count() {
        for axis in 0..layout.spatial_dimension() {
            let stride = layout.axis_stride(electron, axis)?;
            for g in 0..dim {
                let k = g / stride % n;
                let base = g - k * stride;
                for k2 in 0..n {
                    h[(g, base + k2 * stride)] += t1[(k, k2)];
                }
            }
        }
    }
    for (g, &v) in potential.iter().enumerate() {
        h[(g, g)] += Complex64::new(v, 0.0);
    }
    if transverse_weight != 0.0 {
        let w = Complex64::new(transverse_weight, 0.0);
        for g in 0..dim {
            for l in 0..layout.nuclear_qubits() {
                h[(g, g ^ (1 << l))] -= w;
            }
        }
    }
    Ok(h)
}

/// `diag(potential) + x_weight * sum_l X_l`; the schedule derivative
/// operator of the structure-search Hamiltonian.
pub fn diagonal_plus_transverse(
    layout: &RegisterLayout,
    potential: &[f64],
    x_weight: f64,
) -> Result<DMatrix<Complex64>> {
    let dim = layout.total_dimension();
    if potential.len() != dim {
        return Err(Error::LengthMismatch {
            expected: dim,
            got: potential.len(),
        });
    }
    let mut m = DMatrix::zeros(dim, dim);
    for (g, &v) in potential.iter().enumerate() {
        m[(g, g)] = Complex64::new(v, 0.0);
    }
    let w = Complex64::new(x_weight, 0.0);
    if x_weight != 0.0 {
        for g in 0..dim {
            for l in 0..layout.nuclear_qubits() {
                m[(g, g ^ (1 << l))] += w;
            }
        }
    }
    Ok(m)
}

/// Full eigendecomposition of a Hermitian matrix, eigenvalues
/// ascending.
pub fn eig_hermitian(h: &DMatrix<Complex64>) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    let dim = h.nrows();
    if h.ncols() != dim {
        return Err(Error::LengthMismatch {
            expected: dim,
            got: h.ncols(),
        });
    }
    let mut deviation = 0.0f64;
    let mut scale = 0.0f64;
    for i in 0..dim {
        for j in i..dim {
            deviation = deviation.max((h[(i, j)] - h[(j, i)].conj()).norm());
            scale = scale.max(h[(i, j)].norm());
        }
    }
    if deviation > 1e-10 * scale.max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    // Symmetrize away roundoff asymmetry before decomposing.
    let sym = h.map_with_location(|i, j, v| (v + h[(j, i)].conj()) * 0.5);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = DMatrix::zeros(dim, dim);
    for (col, &i) in order.iter().enumerate() {
        eigenvectors.set_column(col, &eig.eigenvectors.column(i));
    }
    Ok((eigenvalues, eigenvectors))
}

/// Diagonalizes `h` into a [`SpectrumSlice`] tagged with its schedule
/// value.
pub fn spectrum_slice(schedule_value: f64, h: &DMatrix<Complex64>) -> Result<SpectrumSlice> {
    let (eigenvalues, eigenvectors) = eig_hermitian(h)?;
    Ok(SpectrumSlice {
        schedule_value,
        eigenvalues,
        eigenvectors,
    })
}

/// Adiabatic indicator `f = max_{j>=1} |<psi_j|V|psi_gs>| / gap_j^2`.
pub fn adiabatic_indicator_f(
    slice: &SpectrumSlice,
    coupling: &Coupling,
    gap_floor: f64,
) -> Result<f64> {
    if slice.gap() <= gap_floor {
        return Err(Error::DegenerateSpectrum { gap: slice.gap() });
    }
    let gs = slice.eigenvectors.column(0).into_owned();
    let coupled = coupling.apply(&gs);
    let mut best = 0.0f64;
    for j in 1..slice.dimension() {
        let element = slice.eigenvectors.column(j).dotc(&coupled).norm();
        let gap = slice.eigenvalues[j] - slice.eigenvalues[0];
        best = best.max(element / (gap * gap));
    }
    Ok(best)
}

/// Lowest eigenvector together with the dimension of the ground
/// eigenspace (eigenvalues within `degeneracy_tol` of the lowest).
pub fn ground_state(
    slice: &SpectrumSlice,
    degeneracy_tol: f64,
) -> (DVector<Complex64>, usize) {
    let e0 = slice.eigenvalues[0];
    let multiplicity = slice
        .eigenvalues
        .iter()
        .take_while(|&&e| e - e0 <= degeneracy_tol)
        .count();
    (slice.eigenvectors.column(0).into_owned(), multiplicity)
}

/// One row of the indicator table: spectrum summary at a schedule
/// value.
#[derive(Debug, Clone, Copy)]
pub struct IndicatorPoint {
    pub schedule_value: f64,
    pub indicator: f64,
    pub gap: f64,
    pub ground_energy: f64,
    pub first_excited_energy: f64,
}

/// Evaluates `f(A)` on a uniform grid of `points` schedule values in
/// `[0, 1]`, diagonalizing slices in parallel. `build` maps a
/// schedule value to the instantaneous Hamiltonian and the coupling
/// operator.
pub fn indicator_grid<F>(build: F, points: usize, gap_floor: f64) -> Result<Vec<IndicatorPoint>>
where
    F: Fn(f64) -> Result<(DMatrix<Complex64>, Coupling)> + Sync,
{
    if points < 2 {
        return Err(Error::InvalidParameter(
            "indicator grid needs at least the two endpoints".into(),
        ));
    }
    (0..points)
        .into_par_iter()
        .map(|i| {
            let a = i as f64 / (points - 1) as f64;
            let (h, coupling) = build(a)?;
            let slice = spectrum_slice(a, &h)?;
            let indicator = adiabatic_indicator_f(&slice, &coupling, gap_floor)?;
            Ok(IndicatorPoint {
                schedule_value: a,
                indicator,
                gap: slice.gap(),
                ground_energy: slice.eigenvalues[0],
                first_excited_energy: slice.eigenvalues[1],
            })
        })
        .collect()
}

/// Largest indicator value over a grid.
pub fn max_indicator(points: &[IndicatorPoint]) -> f64 {
    points.iter().fold(0.0, |m, p| m.max(p.indicator))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::harmonic_1d;
    use crate::statevector::StateVector;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::prelude::*;

    fn random_hermitian(n: usize, seed: u64) -> DMatrix<Complex64> {
        let mut rng = StdRng::seed_from_u64(seed);
        let raw = DMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        });
        (&raw + raw.adjoint()) * Complex64::new(0.5, 0.0)
    }

    #[test]
    fn eig_diagonal_matrix() {
        let h = DMatrix::from_diagonal(&DVector::from_vec(vec![
            Complex64::new(3.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(2.0, 0.0),
        ]));
        let (vals, _) = eig_hermitian(&h).unwrap();
        assert_relative_eq!(vals[0], -1.0, epsilon = 1e-12);
        assert_relative_eq!(vals[1], 2.0, epsilon = 1e-12);
        assert_relative_eq!(vals[2], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn eig_pauli_x() {
        let mut h = DMatrix::zeros(2, 2);
        h[(0, 1)] = Complex64::new(1.0, 0.0);
        h[(1, 0)] = Complex64::new(1.0, 0.0);
        let (vals, vecs) = eig_hermitian(&h).unwrap();
        assert_relative_eq!(vals[0], -1.0, epsilon = 1e-12);
        assert_relative_eq!(vals[1], 1.0, epsilon = 1e-12);
        let inv = 1.0 / 2.0f64.sqrt();
        for (col, sign) in [(0, -1.0), (1, 1.0)] {
            let v = vecs.column(col);
            let ratio = v[1] / v[0];
            assert_abs_diff_eq!(ratio.re, sign, epsilon = 1e-12);
            assert_abs_diff_eq!(ratio.im, 0.0, epsilon = 1e-12);
            assert_relative_eq!(v[0].norm(), inv, epsilon = 1e-12);
        }
    }

    #[test]
    fn eig_reconstructs_random_hermitian() {
        let h = random_hermitian(64, 21);
        let (vals, vecs) = eig_hermitian(&h).unwrap();
        let diag = DMatrix::from_diagonal(&DVector::from_iterator(
            64,
            vals.iter().map(|&v| Complex64::new(v, 0.0)),
        ));
        let rebuilt = &vecs * diag * vecs.adjoint();
        let err = (&rebuilt - &h).norm();
        assert!(err <= 1e-8 * h.norm().max(1.0), "residual {err}");
        // Orthonormality of eigenvectors.
        let gram = vecs.adjoint() * &vecs;
        let identity = DMatrix::<Complex64>::identity(64, 64);
        assert!((gram - identity).norm() < 1e-8);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let mut h = random_hermitian(8, 22);
        h[(0, 3)] += Complex64::new(1e-6, 0.0);
        assert!(matches!(
            eig_hermitian(&h),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn free_particle_spectrum() {
        let grid = GridSpec::new(10.0, 4).unwrap();
        let layout = RegisterLayout::single_axis(grid);
        let h = dense_hamiltonian(&layout, &vec![0.0; 16], 0.0).unwrap();
        let slice = spectrum_slice(0.0, &h).unwrap();
        // Eigenvalues are the discrete kinetic energies, sorted.
        let mut expected: Vec<f64> = (0..16).map(|s| grid.kinetic_energy(s).unwrap()).collect();
        expected.sort_by(f64::total_cmp);
        for (got, want) in slice.eigenvalues.iter().zip(&expected) {
            assert_abs_diff_eq!(got, want, epsilon = 1e-10);
        }
        // Ground energy 0 with the uniform eigenvector.
        assert_abs_diff_eq!(slice.eigenvalues[0], 0.0, epsilon = 1e-12);
        let (gs, mult) = ground_state(&slice, DEFAULT_DEGENERACY_TOL);
        assert_eq!(mult, 1);
        let uniform = 1.0 / 4.0;
        for a in gs.iter() {
            assert_relative_eq!(a.norm(), uniform, epsilon = 1e-10);
        }
    }

    #[test]
    fn free_particle_two_electron_sums() {
        let grid = GridSpec::new(10.0, 2).unwrap();
        let layout = RegisterLayout::new(2, 1, grid, 0).unwrap();
        let h = dense_hamiltonian(&layout, &vec![0.0; 16], 0.0).unwrap();
        let (vals, _) = eig_hermitian(&h).unwrap();
        let mut expected = Vec::new();
        for s1 in 0..4 {
            for s2 in 0..4 {
                expected
                    .push(grid.kinetic_energy(s1).unwrap() + grid.kinetic_energy(s2).unwrap());
            }
        }
        expected.sort_by(f64::total_cmp);
        for (got, want) in vals.iter().zip(&expected) {
            assert_abs_diff_eq!(got, want, epsilon = 1e-10);
        }
    }

    #[test]
    fn parabolic_ground_energy_near_continuum() {
        let grid = GridSpec::new(10.0, 6).unwrap();
        let layout = RegisterLayout::single_axis(grid);
        let v = harmonic_1d(&grid, 1.0, 5.0);
        let h = dense_hamiltonian(&layout, &v, 0.0).unwrap();
        let slice = spectrum_slice(1.0, &h).unwrap();
        assert_abs_diff_eq!(slice.eigenvalues[0], 0.5, epsilon = 5e-3);
        assert_abs_diff_eq!(slice.gap(), 1.0, epsilon = 1e-3);
        let (_, mult) = ground_state(&slice, DEFAULT_DEGENERACY_TOL);
        assert_eq!(mult, 1);
    }

    #[test]
    fn oracle_kinetic_matches_evolution_engine() {
        // exp(-i H tau) at A = 0 via the spectral decomposition against
        // kinetic_step on a random state.
        let grid = GridSpec::new(10.0, 4).unwrap();
        let layout = RegisterLayout::single_axis(grid);
        let h = dense_hamiltonian(&layout, &vec![0.0; 16], 0.0).unwrap();
        let (vals, vecs) = eig_hermitian(&h).unwrap();
        let tau = 0.37;

        let mut rng = StdRng::seed_from_u64(23);
        let amps: Vec<Complex64> = (0..16)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let mut state = StateVector::from_amplitudes(layout, amps).unwrap();
        let psi = DVector::from_column_slice(state.amplitudes());

        let phases = DMatrix::from_diagonal(&DVector::from_iterator(
            16,
            vals.iter().map(|&e| Complex64::from_polar(1.0, -e * tau)),
        ));
        let expected = &vecs * phases * vecs.adjoint() * psi;

        state.kinetic_step(tau).unwrap();
        let got = DVector::from_column_slice(state.amplitudes());
        let overlap = expected.dotc(&got).norm_sqr();
        assert!(overlap >= 1.0 - 1e-9, "fidelity {overlap}");
        assert!((expected - got).norm() < 1e-9);
    }

    #[test]
    fn transverse_term_spectrum() {
        // One grid point per electron axis isolates the nuclear block:
        // spectrum of -Jx (X_1 + X_2) is (-2Jx, 0, 0, +2Jx).
        let grid = GridSpec::new(1.0, 1).unwrap();
        let layout = RegisterLayout::new(1, 1, grid, 2).unwrap();
        let dim = layout.total_dimension();
        let h = dense_hamiltonian(&layout, &vec![0.0; dim], 0.1).unwrap();
        let (vals, _) = eig_hermitian(&h).unwrap();
        assert_abs_diff_eq!(vals[0], -0.2, epsilon = 1e-10);
        assert_abs_diff_eq!(vals[1], 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(vals[2], 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(vals[3], 0.2, epsilon = 1e-10);
    }

    #[test]
    fn indicator_zero_for_identity_coupling() {
        let grid = GridSpec::new(10.0, 4).unwrap();
        let layout = RegisterLayout::single_axis(grid);
        let v = harmonic_1d(&grid, 1.0, 5.0);
        let h = dense_hamiltonian(&layout, &v, 0.0).unwrap();
        let slice = spectrum_slice(1.0, &h).unwrap();
        let f = adiabatic_indicator_f(
            &slice,
            &Coupling::Diagonal(vec![1.0; 16]),
            DEFAULT_GAP_FLOOR,
        )
        .unwrap();
        assert_abs_diff_eq!(f, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn indicator_scales_linearly_in_coupling() {
        let grid = GridSpec::new(10.0, 4).unwrap();
        let layout = RegisterLayout::single_axis(grid);
        let v = harmonic_1d(&grid, 1.0, 5.0);
        let h = dense_hamiltonian(&layout, &v, 0.0).unwrap();
        let slice = spectrum_slice(0.5, &h).unwrap();
        let f1 = adiabatic_indicator_f(&slice, &Coupling::Diagonal(v.clone()), DEFAULT_GAP_FLOOR)
            .unwrap();
        let scaled: Vec<f64> = v.iter().map(|&x| 3.0 * x).collect();
        let f3 =
            adiabatic_indicator_f(&slice, &Coupling::Diagonal(scaled), DEFAULT_GAP_FLOOR).unwrap();
        assert_relative_eq!(f3, 3.0 * f1, epsilon = 1e-10);
        assert!(f1 >= 0.0);
    }

    #[test]
    fn indicator_rejects_degenerate_ground_state() {
        let h = DMatrix::from_diagonal(&DVector::from_vec(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ]));
        let slice = spectrum_slice(0.0, &h).unwrap();
        let result =
            adiabatic_indicator_f(&slice, &Coupling::Diagonal(vec![1.0; 3]), DEFAULT_GAP_FLOOR);
        assert!(matches!(result, Err(Error::DegenerateSpectrum { .. })));
    }

    #[test]
    fn dimension_cap_enforced() {
        let grid = GridSpec::new(10.0, 6).unwrap();
        let layout = RegisterLayout::new(2, 1, grid, 0).unwrap();
        let dim = layout.total_dimension();
        assert!(matches!(
            dense_hamiltonian_capped(&layout, &vec![0.0; dim], 0.0, 1024),
            Err(Error::DimensionCap { .. })
        ));
    }

    #[test]
    fn indicator_grid_covers_endpoints() {
        let grid = GridSpec::new(10.0, 4).unwrap();
        let layout = RegisterLayout::single_axis(grid);
        let v = harmonic_1d(&grid, 1.0, 5.0);
        let points = indicator_grid(
            |a| {
                let diag: Vec<f64> = v.iter().map(|&x| a * x).collect();
                let h = dense_hamiltonian(&layout, &diag, 0.0)?;
                Ok((h, Coupling::Diagonal(v.clone())))
            },
            9,
            DEFAULT_GAP_FLOOR,
        )
        .unwrap();
        assert_eq!(points.len(), 9);
        assert_abs_diff_eq!(points[0].schedule_value, 0.0);
        assert_abs_diff_eq!(points[8].schedule_value, 1.0);
        assert!(points.iter().all(|p| p.indicator >= 0.0));
        assert!(max_indicator(&points) > 0.0);
    }
}
