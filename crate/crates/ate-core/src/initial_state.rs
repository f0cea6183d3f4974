//! Initial ground states: uniform superpositions, harmonic-orbital
//! Slater determinants, and the electron/nuclear product state.
//!
//! Orbitals come from numerical 1D diagonalization on the same grid
//! as the evolution (not analytic Hermite functions), so the Slater
//! state is the exact discrete ground state of the non-interacting
//! initial Hamiltonian.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{GridSpec, RegisterLayout};
use crate::potentials::harmonic_1d;
use crate::spectra::{dense_hamiltonian, spectrum_slice};
use crate::statevector::StateVector;

/// Orbitals of one axis: real 1D eigenfunctions on the grid, energies
/// ascending.
#[derive(Debug, Clone)]
pub struct AxisOrbitals {
    pub energies: Vec<f64>,
    /// One unit-norm orbital per energy, over the grid points.
    pub orbitals: Vec<Vec<f64>>,
}

/// Assembled one-electron orbitals of a separable harmonic well,
/// ordered by total energy.
#[derive(Debug, Clone)]
pub struct OrbitalSet {
    grid: GridSpec,
    axes: Vec<AxisOrbitals>,
    /// `(energy, per-axis quantum numbers)`, ascending in energy.
    levels: Vec<(f64, Vec<usize>)>,
}

impl OrbitalSet {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn spatial_dimension(&self) -> usize {
        self.axes.len()
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn energy(&self, level: usize) -> f64 {
        self.levels[level].0
    }

    pub fn axis(&self, axis: usize) -> &AxisOrbitals {
        &self.axes[axis]
    }

    /// Orbital value at a grid point given by per-axis indices.
    pub fn orbital_value(&self, level: usize, axis_indices: &[usize]) -> f64 {
        let quanta = &self.levels[level].1;
        quanta
            .iter()
            .zip(axis_indices)
            .zip(&self.axes)
            .map(|((&n, &k), axis)| axis.orbitals[n][k])
            .product()
    }
}

/// Uniform superposition over the whole register, the ground state of
/// the zero-potential Hamiltonian (and of the transverse field on the
/// nuclear part).
pub fn uniform_state(layout: RegisterLayout) -> StateVector {
    let dim = layout.total_dimension();
    let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
    StateVector::from_amplitudes(layout, vec![amp; dim])
        .expect("uniform amplitudes are valid")
}

/// Rotates an eigenvector to a real, sign-canonical orbital.
fn realize_orbital(column: &[Complex64]) -> Vec<f64> {
    let pivot = column
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
        .map(|(i, _)| i)
        .unwrap();
    let phase = column[pivot] / column[pivot].norm();
    let rotated: Vec<Complex64> = column.iter().map(|&a| a * phase.conj()).collect();
    let max_imag = rotated.iter().fold(0.0f64, |m, a| m.max(a.im.abs()));
    assert!(
        max_imag < 1e-8,
        "orbital of a real Hamiltonian has imaginary part {max_imag}"
    );
    rotated.iter().map(|a| a.re).collect()
}

/// Diagonalizes the harmonic one-electron Hamiltonian per axis (wells
/// centered at `L/2`) and assembles the `count` lowest product
/// orbitals ordered by total energy. Levels above `N/4` per axis are
/// refused: their discretization error grows too fast to trust.
pub fn harmonic_orbitals(grid: &GridSpec, omegas: &[f64], count: usize) -> Result<OrbitalSet> {
    let d = omegas.len();
    if d != 1 && d != 3 {
        return Err(Error::InvalidParameter(format!(
            "orbitals need 1 or 3 axis frequencies, got {d}"
        )));
    }
    let n = grid.point_count();
    if count == 0 || count > n / 4 {
        return Err(Error::InvalidParameter(format!(
            "orbital count must be in 1..={} for {n} grid points, got {count}",
            n / 4
        )));
    }
    let layout = RegisterLayout::single_axis(*grid);
    let center = grid.length() / 2.0;
    let mut axes = Vec::with_capacity(d);
    for &omega in omegas {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "axis frequency must be positive, got {omega}"
            )));
        }
        let h = dense_hamiltonian(&layout, &harmonic_1d(grid, omega, center), 0.0)?;
        let slice = spectrum_slice(0.0, &h)?;
        let keep = count.min(n);
        let energies = slice.eigenvalues[..keep].to_vec();
        let orbitals = (0..keep)
            .map(|i| realize_orbital(slice.eigenvectors.column(i).as_slice()))
            .collect();
        axes.push(AxisOrbitals { energies, orbitals });
    }

    // Enumerate per-axis quantum numbers and keep the lowest totals.
    let per_axis = axes[0].energies.len();
    let mut levels: Vec<(f64, Vec<usize>)> = Vec::new();
    let mut quanta = vec![0usize; d];
    loop {
        let energy: f64 = quanta
            .iter()
            .zip(&axes)
            .map(|(&nq, axis)| axis.energies[nq])
            .sum();
        levels.push((energy, quanta.clone()));
        // Odometer increment over d digits of base `per_axis`.
        let mut carry = true;
        for digit in quanta.iter_mut() {
            if carry {
                *digit += 1;
                if *digit == per_axis {
                    *digit = 0;
                } else {
                    carry = false;
                }
            }
        }
        if carry {
            break;
        }
    }
    levels.sort_by(|a, b| a.0.total_cmp(&b.0));
    levels.truncate(count);
    Ok(OrbitalSet { grid: *grid, axes, levels })
}

/// All permutations of `0..n` with parity, by recursive insertion.
fn permutations_with_sign(n: usize) -> Vec<(Vec<usize>, f64)> {
    let mut perms = vec![(Vec::new(), 1.0)];
    for element in 0..n {
        let mut next = Vec::with_capacity(perms.len() * (element + 1));
        for (perm, sign) in &perms {
            for slot in 0..=perm.len() {
                let mut inserted = perm.clone();
                inserted.insert(slot, element);
                // Each position moved from the end flips the parity.
                let flips = (perm.len() - slot) % 2;
                next.push((inserted, if flips == 1 { -sign } else { *sign }));
            }
        }
        perms = next;
    }
    perms
}

/// Antisymmetrized product of the `n_e` lowest orbitals:
/// `(n_e!)^{-1/2} det[phi_i(r_j)]` over the grid.
pub fn slater_state(orbitals: &OrbitalSet, layout: RegisterLayout) -> Result<StateVector> {
    let n_e = layout.electron_count();
    let d = layout.spatial_dimension();
    if layout.has_nuclear_register() {
        return Err(Error::InvalidParameter(
            "Slater construction targets the electron register; add the nuclear part afterwards"
                .into(),
        ));
    }
    if d != orbitals.spatial_dimension() || layout.grid() != orbitals.grid() {
        return Err(Error::LayoutMismatch);
    }
    if n_e > orbitals.level_count() {
        return Err(Error::InvalidParameter(format!(
            "need {n_e} orbitals, only {} available",
            orbitals.level_count()
        )));
    }
    // Orthonormality on the grid, per axis.
    for axis in &orbitals.axes {
        let mut deviation = 0.0f64;
        for (i, a) in axis.orbitals.iter().enumerate() {
            for (j, b) in axis.orbitals.iter().enumerate() {
                let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                deviation = deviation.max((dot - expected).abs());
            }
        }
        if deviation > 1e-8 {
            return Err(Error::NonOrthonormalOrbitals { deviation });
        }
    }

    let n = layout.grid().point_count();
    let perms = permutations_with_sign(n_e);
    let norm = 1.0 / (perms.len() as f64).sqrt();
    let dim = layout.total_dimension();
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    let mut axis_indices = vec![0usize; d];
    for (g, amp) in amps.iter_mut().enumerate() {
        // phi_i(r_l) for the positions encoded in this global index.
        let mut values = vec![0.0; n_e * n_e];
        for l in 0..n_e {
            let mut rest = g / n.pow((d * (n_e - 1 - l)) as u32);
            for a in (0..d).rev() {
                axis_indices[a] = rest % n;
                rest /= n;
            }
            for i in 0..n_e {
                values[i * n_e + l] = orbitals.orbital_value(i, &axis_indices);
            }
        }
        let mut total = 0.0;
        for (perm, sign) in &perms {
            let mut product = *sign;
            for (l, &i) in perm.iter().enumerate() {
                product *= values[i * n_e + l];
            }
            total += product;
        }
        *amp = Complex64::new(total * norm, 0.0);
    }
    StateVector::from_amplitudes(layout, amps)
}

/// Tensor product of an electron state with the uniform nuclear
/// register `|+>^{n_qn}`.
pub fn initial_product_state(electron_state: &StateVector, n_qn: u32) -> Result<StateVector> {
    let el = electron_state.layout();
    if el.has_nuclear_register() {
        return Err(Error::InvalidParameter(
            "electron state already carries a nuclear register".into(),
        ));
    }
    if n_qn == 0 {
        return Ok(electron_state.clone());
    }
    let layout = RegisterLayout::new(
        el.electron_count(),
        el.spatial_dimension(),
        *el.grid(),
        n_qn,
    )?;
    let n_j = 1usize << n_qn;
    let scale = 1.0 / (n_j as f64).sqrt();
    let mut amps = vec![Complex64::new(0.0, 0.0); layout.total_dimension()];
    for (e, &amp_el) in electron_state.amplitudes().iter().enumerate() {
        for j in 0..n_j {
            amps[(e << n_qn) + j] = amp_el * scale;
        }
    }
    StateVector::from_amplitudes(layout, amps)
}

/// Witness pair of distinct quantum-number triples with equal energy.
pub type Violation = ([usize; 3], [usize; 3]);

/// Result of the exact-arithmetic orbital-energy injectivity check.
#[derive(Debug, Clone)]
pub struct InjectivityReport {
    pub injective: bool,
    pub violations: Vec<Violation>,
}

/// Sign of `m * sqrt(w)` for integer `m` and positive integer `w`.
fn sign_times_sqrt(m: i128) -> i8 {
    match m {
        0 => 0,
        m if m > 0 => 1,
        _ => -1,
    }
}

/// Sign of `m1 sqrt(w1) + m2 sqrt(w2)`, exactly.
fn sign_of_sqrt_pair(m1: i128, w1: i128, m2: i128, w2: i128) -> i8 {
    let s1 = sign_times_sqrt(m1);
    let s2 = sign_times_sqrt(m2);
    if s1 == 0 {
        return s2;
    }
    if s2 == 0 || s1 == s2 {
        return s1;
    }
    // Opposite signs: compare squares.
    let lhs = m1 * m1 * w1;
    let rhs = m2 * m2 * w2;
    match lhs.cmp(&rhs) {
        std::cmp::Ordering::Greater => s1,
        std::cmp::Ordering::Less => s2,
        std::cmp::Ordering::Equal => 0,
    }
}

fn integer_sqrt(v: i128) -> Option<i128> {
    if v < 0 {
        return None;
    }
    let r = (v as f64).sqrt().round() as i128;
    for candidate in r.saturating_sub(2)..=r + 2 {
        if candidate >= 0 && candidate * candidate == v {
            return Some(candidate);
        }
    }
    None
}

/// Decides `m sqrt(d) == n` for integers, exactly.
fn sqrt_multiple_equals(m: i128, d: i128, n: i128) -> bool {
    if let Some(root) = integer_sqrt(d) {
        return m * root == n;
    }
    if m == 0 {
        return n == 0;
    }
    sign_times_sqrt(m) == sign_times_sqrt(n) && m * m * d == n * n
}

/// Decides `k0 sqrt(w0) + k1 sqrt(w1) + k2 sqrt(w2) == 0` exactly for
/// integer `k` and positive integer `w`.
fn sqrt_sum_is_zero(k: [i128; 3], w: [i128; 3]) -> bool {
    // lhs = k0 sqrt(w0) + k1 sqrt(w1) must equal rhs = -k2 sqrt(w2):
    // equal squares and equal signs.
    // lhs^2 = k0^2 w0 + k1^2 w1 + 2 k0 k1 sqrt(w0 w1); rhs^2 = k2^2 w2.
    let squares_equal = sqrt_multiple_equals(
        2 * k[0] * k[1],
        w[0] * w[1],
        k[2] * k[2] * w[2] - k[0] * k[0] * w[0] - k[1] * k[1] * w[1],
    );
    if !squares_equal {
        return false;
    }
    sign_of_sqrt_pair(k[0], w[0], k[1], w[1]) == sign_times_sqrt(-k[2])
}

/// Brute-force check that the anisotropic-well level energies
/// `eps(n) = sum_mu omega_mu (n_mu + 1/2)` are injective over
/// `0 <= n_mu <= n_max`, using exact integer arithmetic on the
/// difference vectors. Frequencies are given as squared integers
/// (`omega_mu = sqrt(omega_squared[mu])`), which covers the default
/// `(1, sqrt 2, sqrt 3)` and the isotropic `(1, 1, 1)` cases exactly.
pub fn epsilon_injectivity_check(omega_squared: [i64; 3], n_max: usize) -> Result<InjectivityReport> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    if omega_squared.iter().any(|&w| w <= 0) {
        return Err(Error::InvalidParameter(
            "squared frequencies must be positive integers".into(),
        ));
    }
    let w = omega_squared.map(|x| x as i128);
    let range = n_max as i128;
    let mut violations = Vec::new();
    for kx in -range..=range {
        for ky in -range..=range {
            for kz in -range..=range {
                let k = [kx, ky, kz];
                if k == [0, 0, 0] {
                    continue;
                }
                // Count each +-k pair once.
                if !matches!(
                    k.iter().find(|&&v| v != 0),
                    Some(&first) if first > 0
                ) {
                    continue;
                }
                if sqrt_sum_is_zero(k, w) {
                    let plus = k.map(|v| v.max(0) as usize);
                    let minus = k.map(|v| (-v).max(0) as usize);
                    violations.push((plus, minus));
                }
            }
        }
    }
    Ok(InjectivityReport {
        injective: violations.is_empty(),
        violations,
    })
}
