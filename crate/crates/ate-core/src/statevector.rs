//! Dense complex statevector over a [`RegisterLayout`] and the
//! primitive unitary steps of the split-operator evolution.
//!
//! Two primitives drive everything: multiplication by a diagonal phase
//! `exp(-i V dt)` in the position basis, and the kinetic step
//! `exp(-i T dt)` realized per electron axis as
//! `CQFT . U_kin(dt) . CQFT^dag` — a centered discrete Fourier
//! transform into momentum bins, a diagonal phase by the discrete
//! kinetic energies, and the transform back.
//!
//! The centered transform maps position amplitudes to momentum-bin
//! amplitudes with bins indexed so that `s~ = s - N/2`: a plane wave
//! of momentum `p^(s~)` lands in bin `s~`, and the uniform state lands
//! in the `s~ = 0` bin.

use std::io::{Read, Write};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::RegisterLayout;

const STATE_MAGIC: &[u8; 8] = b"ATESTATE";

fn planner() -> &'static Mutex<FftPlanner<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()))
}

/// Centered DFT between position amplitudes and momentum-bin
/// amplitudes on one `N`-point axis.
///
/// Forward: `b[s] = N^{-1/2} sum_k exp(-i p^(s~) x^(k)) a[k]`, with
/// `p^(s~) x^(k) = 2 pi k (s - N/2) / N`. Inverse is the adjoint.
/// Shared by the evolution engine and the dense-oracle kinetic matrix
/// so both use one definition of the discrete kinetic operator.
pub(crate) struct CenteredDft {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    scale: f64,
}

impl CenteredDft {
    pub fn new(n: usize) -> Self {
        let (fwd, inv) = {
            let mut p = planner().lock().unwrap();
            (p.plan_fft_forward(n), p.plan_fft_inverse(n))
        };
        let scratch_len = fwd
            .get_inplace_scratch_len()
            .max(inv.get_inplace_scratch_len());
        Self {
            n,
            fwd,
            inv,
            scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
            scale: 1.0 / (n as f64).sqrt(),
        }
    }

    /// The half-spectrum shift `s~ = s - N/2` is an alternating sign
    /// in position space.
    fn apply_parity(&self, buf: &mut [Complex64]) {
        buf.iter_mut().skip(1).step_by(2).for_each(|a| *a = -*a);
    }

    pub fn forward(&mut self, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len(), self.n);
        self.apply_parity(buf);
        self.fwd.process_with_scratch(buf, &mut self.scratch);
        buf.iter_mut().for_each(|a| *a *= self.scale);
    }

    pub fn inverse(&mut self, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len(), self.n);
        self.inv.process_with_scratch(buf, &mut self.scratch);
        buf.iter_mut().for_each(|a| *a *= self.scale);
        self.apply_parity(buf);
    }
}

/// Complex amplitude vector over the global index space of a layout.
#[derive(Debug, Clone)]
pub struct StateVector {
    layout: RegisterLayout,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Computational basis state `|global>`.
    pub fn basis_state(layout: RegisterLayout, global: usize) -> Result<Self> {
        if global >= layout.total_dimension() {
            return Err(Error::IndexOutOfRange {
                what: "global",
                index: global,
                len: layout.total_dimension(),
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); layout.total_dimension()];
        amps[global] = Complex64::new(1.0, 0.0);
        Ok(Self { layout, amps })
    }

    /// Wraps raw amplitudes, checking finiteness and normalizing.
    pub fn from_amplitudes(layout: RegisterLayout, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != layout.total_dimension() {
            return Err(Error::LengthMismatch {
                expected: layout.total_dimension(),
                got: amps.len(),
            });
        }
        if !amps.iter().all(|a| a.re.is_finite() && a.im.is_finite()) {
            return Err(Error::NonFinite { what: "amplitudes" });
        }
        let mut state = Self { layout, amps };
        let norm = state.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidParameter(
                "amplitude vector has zero norm".into(),
            ));
        }
        state.scale(1.0 / norm);
        Ok(state)
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn scale(&mut self, factor: f64) {
        self.amps.iter_mut().for_each(|a| *a *= factor);
    }

    /// Renormalizes to unit norm; a no-op up to roundoff after unitary
    /// steps.
    pub fn renormalize(&mut self) {
        let norm = self.norm();
        if norm > 0.0 {
            self.scale(1.0 / norm);
        }
    }

    /// `amp[x] <- exp(-i diag[x] tau) amp[x]`.
    pub fn apply_diagonal_phase(&mut self, diag: &[f64], tau: f64) -> Result<()> {
        if diag.len() != self.amps.len() {
            return Err(Error::LengthMismatch {
                expected: self.amps.len(),
                got: diag.len(),
            });
        }
        if !tau.is_finite() {
            return Err(Error::NonFinite { what: "duration" });
        }
        if !diag.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite {
                what: "diagonal potential",
            });
        }
        for (a, &v) in self.amps.iter_mut().zip(diag) {
            *a *= Complex64::from_polar(1.0, -v * tau);
        }
        Ok(())
    }

    /// Applies `f` to every fiber of the axis with the given stride.
    fn transform_axis_fibers(
        &mut self,
        stride: usize,
        mut f: impl FnMut(&mut [Complex64]),
    ) {
        let n = self.layout.grid().point_count();
        let block = n * stride;
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for outer in (0..self.amps.len()).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for (s, b) in buf.iter_mut().enumerate() {
                    *b = self.amps[base + s * stride];
                }
                f(&mut buf);
                for (s, b) in buf.iter().enumerate() {
                    self.amps[base + s * stride] = *b;
                }
            }
        }
    }

    /// Centered Fourier transform of one electron axis between the
    /// position and momentum-bin bases. `inverse` applies the adjoint
    /// (momentum bins back to positions). All other registers are
    /// untouched.
    pub fn centered_qft_axis(
        &mut self,
        electron: usize,
        axis: usize,
        inverse: bool,
    ) -> Result<()> {
        let stride = self.layout.axis_stride(electron, axis)?;
        let mut dft = CenteredDft::new(self.layout.grid().point_count());
        self.transform_axis_fibers(stride, |buf| {
            if inverse {
                dft.inverse(buf);
            } else {
                dft.forward(buf);
            }
        });
        Ok(())
    }

    /// Kinetic split-operator step `exp(-i T tau)`: every electron
    /// axis in turn is transformed to momentum bins, multiplied by
    /// `exp(-i E_kin(s~) tau)`, and transformed back.
    pub fn kinetic_step(&mut self, tau: f64) -> Result<()> {
        if !tau.is_finite() {
            return Err(Error::NonFinite { what: "duration" });
        }
        let grid = *self.layout.grid();
        let n = grid.point_count();
        let phases: Vec<Complex64> = (0..n)
            .map(|s| Complex64::from_polar(1.0, -grid.kinetic_energy(s).unwrap() * tau))
            .collect();
        let mut dft = CenteredDft::new(n);
        for electron in 0..self.layout.electron_count() {
            for axis in 0..self.layout.spatial_dimension() {
                let stride = self.layout.axis_stride(electron, axis)?;
                self.transform_axis_fibers(stride, |buf| {
                    dft.forward(buf);
                    for (b, ph) in buf.iter_mut().zip(&phases) {
                        *b *= ph;
                    }
                    dft.inverse(buf);
                });
            }
        }
        Ok(())
    }

    /// `<self|other>`.
    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        if self.layout != other.layout {
            return Err(Error::LayoutMismatch);
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Squared overlap `|<self|other>|^2`; insensitive to global phase.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        Ok(self.inner_product(other)?.norm_sqr())
    }

    /// Exchanges the full position sub-registers of electrons `i` and
    /// `j`.
    pub fn swap_electrons(&mut self, i: usize, j: usize) -> Result<()> {
        let n_e = self.layout.electron_count();
        if i == j {
            return Err(Error::InvalidParameter(
                "swap requires two distinct electrons".into(),
            ));
        }
        if i >= n_e || j >= n_e {
            return Err(Error::IndexOutOfRange {
                what: "electron",
                index: i.max(j),
                len: n_e,
            });
        }
        let d = self.layout.spatial_dimension();
        let n = self.layout.grid().point_count();
        let strides_i: Vec<usize> = (0..d)
            .map(|a| self.layout.axis_stride(i, a).unwrap())
            .collect();
        let strides_j: Vec<usize> = (0..d)
            .map(|a| self.layout.axis_stride(j, a).unwrap())
            .collect();
        for g in 0..self.amps.len() {
            let mut swapped = g;
            for a in 0..d {
                let ki = g / strides_i[a] % n;
                let kj = g / strides_j[a] % n;
                swapped = swapped + ki * strides_j[a] + kj * strides_i[a]
                    - ki * strides_i[a]
                    - kj * strides_j[a];
            }
            if swapped > g {
                self.amps.swap(g, swapped);
            }
        }
        Ok(())
    }

    /// Marginal probability `w_J` of each nuclear basis state.
    pub fn nuclear_weights(&self) -> Result<Vec<f64>> {
        if !self.layout.has_nuclear_register() {
            return Err(Error::NoNuclearRegister);
        }
        let n_j = self.layout.nuclear_dimension();
        let mut w = vec![0.0; n_j];
        for (g, a) in self.amps.iter().enumerate() {
            w[g & (n_j - 1)] += a.norm_sqr();
        }
        Ok(w)
    }

    /// Writes the state as a 16-byte header (magic `ATESTATE`, `u32`
    /// electron count, `u32` log2 total dimension) followed by
    /// little-endian `(re, im)` f64 pairs in global-index order.
    pub fn write_binary<W: Write>(&self, mut writer: W) -> Result<()> {
        writer.write_all(STATE_MAGIC)?;
        writer.write_all(&(self.layout.electron_count() as u32).to_le_bytes())?;
        let log2_dim = self.layout.total_dimension().trailing_zeros();
        writer.write_all(&log2_dim.to_le_bytes())?;
        for a in &self.amps {
            writer.write_all(&a.re.to_le_bytes())?;
            writer.write_all(&a.im.to_le_bytes())?;
        }
        Ok(())
    }

    /// Reads a state written by [`write_binary`](Self::write_binary),
    /// checking the header against `layout`.
    pub fn read_binary<R: Read>(mut reader: R, layout: RegisterLayout) -> Result<Self> {
        let mut magic = [0u8; 8];
        reader.read_exact(&mut magic)?;
        if &magic != STATE_MAGIC {
            return Err(Error::MalformedStateFile("bad magic".into()));
        }
        let mut word = [0u8; 4];
        reader.read_exact(&mut word)?;
        let n_e = u32::from_le_bytes(word);
        reader.read_exact(&mut word)?;
        let log2_dim = u32::from_le_bytes(word);
        if n_e as usize != layout.electron_count()
            || log2_dim != layout.total_dimension().trailing_zeros()
        {
            return Err(Error::MalformedStateFile(format!(
                "header ({n_e} electrons, 2^{log2_dim} amplitudes) does not match layout"
            )));
        }
        let mut amps = Vec::with_capacity(layout.total_dimension());
        let mut pair = [0u8; 16];
        for _ in 0..layout.total_dimension() {
            reader.read_exact(&mut pair)?;
            let re = f64::from_le_bytes(pair[..8].try_into().unwrap());
            let im = f64::from_le_bytes(pair[8..].try_into().unwrap());
            amps.push(Complex64::new(re, im));
        }
        if !amps.iter().all(|a| a.re.is_finite() && a.im.is_finite()) {
            return Err(Error::MalformedStateFile(
                "non-finite amplitudes".into(),
            ));
        }
        Ok(Self { layout, amps })
    }
}
