//! Annealing schedules: the linear ramp and the gap-adapted optimal
//! schedule.
//!
//! The optimal schedule solves `dA/ds = c / f(A)` by quadrature of the
//! separable form: `s(A) = (1/c) int_0^A f`, with `c = int_0^1 f`
//! falling out of the boundary conditions. The monotone `s(A)` table
//! is then inverted by piecewise-linear interpolation. No shooting or
//! time stepping is involved, and the endpoints are exact.

use crate::error::{Error, Result};
use crate::potentials::{ScheduleSlot, SlotValues};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleKind {
    Linear,
    Optimal,
    UserTable,
}

/// Monotone map from normalized time `s` in `[0, 1]` to the schedule
/// value `A` in `[0, 1]`.
#[derive(Debug, Clone)]
pub struct Schedule {
    kind: ScheduleKind,
    /// `(s, A)` samples; strictly increasing in `s`, non-decreasing in
    /// `A`, endpoints `(0, 0)` and `(1, 1)` exact.
    samples: Vec<(f64, f64)>,
    /// Adiabatic constant of the optimal kind.
    constant: Option<f64>,
}

impl Schedule {
    /// `A(s) = s`.
    pub fn linear() -> Self {
        Self {
            kind: ScheduleKind::Linear,
            samples: vec![(0.0, 0.0), (1.0, 1.0)],
            constant: None,
        }
    }

    /// Wraps a user-supplied monotone table.
    pub fn from_table(samples: Vec<(f64, f64)>) -> Result<Self> {
        Self::validate(&samples)?;
        Ok(Self {
            kind: ScheduleKind::UserTable,
            samples,
            constant: None,
        })
    }

    /// Builds the optimal schedule from a sampled indicator table
    /// `(A_i, f(A_i))` with `A_0 = 0` and `A_last = 1`.
    pub fn optimal(f_table: &[(f64, f64)]) -> Result<Self> {
        if f_table.len() < 2 {
            return Err(Error::ScheduleConstruction(
                "indicator table needs at least two samples".into(),
            ));
        }
        if (f_table[0].0 - 0.0).abs() > 1e-12 || (f_table.last().unwrap().0 - 1.0).abs() > 1e-12 {
            return Err(Error::ScheduleConstruction(
                "indicator table must cover A in [0, 1]".into(),
            ));
        }
        for w in f_table.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::ScheduleConstruction(
                    "indicator table must be strictly increasing in A".into(),
                ));
            }
        }
        if !f_table.iter().all(|&(_, f)| f.is_finite() && f > 0.0) {
            return Err(Error::ScheduleConstruction(
                "indicator must be positive and finite everywhere".into(),
            ));
        }
        // Cumulative trapezoid of f over A; c is the full integral.
        let mut cumulative = Vec::with_capacity(f_table.len());
        cumulative.push(0.0);
        let mut acc = 0.0;
        for w in f_table.windows(2) {
            acc += 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0);
            cumulative.push(acc);
        }
        let c = acc;
        let mut samples: Vec<(f64, f64)> = f_table
            .iter()
            .zip(&cumulative)
            .map(|(&(a, _), &cum)| (cum / c, a))
            .collect();
        samples[0] = (0.0, 0.0);
        *samples.last_mut().unwrap() = (1.0, 1.0);
        Self::validate(&samples)?;
        Ok(Self {
            kind: ScheduleKind::Optimal,
            samples,
            constant: Some(c),
        })
    }

    fn validate(samples: &[(f64, f64)]) -> Result<()> {
        if samples.len() < 2 {
            return Err(Error::ScheduleConstruction(
                "schedule table needs at least two samples".into(),
            ));
        }
        let first = samples[0];
        let last = *samples.last().unwrap();
        if first != (0.0, 0.0) || last != (1.0, 1.0) {
            return Err(Error::ScheduleConstruction(
                "schedule must run from (s, A) = (0, 0) to (1, 1)".into(),
            ));
        }
        for w in samples.windows(2) {
            if !(w[1].0 > w[0].0 && w[1].1 >= w[0].1) {
                return Err(Error::ScheduleConstruction(
                    "schedule table must be monotone".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    /// Adiabatic constant `c`; present only for the optimal kind.
    pub fn constant(&self) -> Option<f64> {
        self.constant
    }

    /// `A(s)` by monotone piecewise-linear interpolation, clamped to
    /// `[0, 1]`.
    pub fn value(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        if s >= 1.0 {
            return 1.0;
        }
        let idx = self.samples.partition_point(|&(si, _)| si <= s);
        // idx >= 1 because samples[0].0 = 0 < s.
        let (s0, a0) = self.samples[idx - 1];
        let (s1, a1) = self.samples[idx];
        let t = (s - s0) / (s1 - s0);
        (a0 + t * (a1 - a0)).clamp(0.0, 1.0)
    }
}

/// Piecewise-linear interpolation of an indicator table at `a`.
pub fn interpolate_indicator(f_table: &[(f64, f64)], a: f64) -> f64 {
    let a = a.clamp(f_table[0].0, f_table.last().unwrap().0);
    let idx = f_table
        .partition_point(|&(ai, _)| ai <= a)
        .min(f_table.len() - 1);
    if idx == 0 {
        return f_table[0].1;
    }
    let (a0, f0) = f_table[idx - 1];
    let (a1, f1) = f_table[idx];
    f0 + (a - a0) / (a1 - a0) * (f1 - f0)
}

/// Estimate of the adiabatic-time bound
/// `max_s f(A(s)) * dA/ds`, evaluated on a sample grid with
/// finite-difference derivatives. For the linear schedule this is
/// `max_A f(A)`; for the optimal schedule it equals `c` up to
/// discretization.
pub fn adiabatic_bound(schedule: &Schedule, f_table: &[(f64, f64)]) -> f64 {
    let s_grid: Vec<f64> = if schedule.samples().len() >= f_table.len() {
        schedule.samples().iter().map(|&(s, _)| s).collect()
    } else {
        let n = f_table.len();
        (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
    };
    let a_vals: Vec<f64> = s_grid.iter().map(|&s| schedule.value(s)).collect();
    let mut bound = 0.0f64;
    for i in 0..s_grid.len() {
        let (lo, hi) = match i {
            0 => (0, 1),
            i if i == s_grid.len() - 1 => (i - 1, i),
            i => (i - 1, i + 1),
        };
        let slope = (a_vals[hi] - a_vals[lo]) / (s_grid[hi] - s_grid[lo]);
        bound = bound.max(interpolate_indicator(f_table, a_vals[i]) * slope);
    }
    bound
}

/// Per-slot schedule assignment for the six schedule functions; all
/// slots share one schedule unless overridden.
#[derive(Debug, Clone)]
pub struct ScheduleSet {
    shared: Schedule,
    overrides: [Option<Schedule>; 6],
}

impl ScheduleSet {
    pub fn shared(schedule: Schedule) -> Self {
        Self {
            shared: schedule,
            overrides: Default::default(),
        }
    }

    pub fn with_override(mut self, slot: ScheduleSlot, schedule: Schedule) -> Result<Self> {
        let idx = match slot {
            ScheduleSlot::A1 => 0,
            ScheduleSlot::A2 => 1,
            ScheduleSlot::A3 => 2,
            ScheduleSlot::A4 => 3,
            ScheduleSlot::A5 => 4,
            ScheduleSlot::A6 => 5,
            ScheduleSlot::Fixed => {
                return Err(Error::InvalidParameter(
                    "fixed terms take no schedule".into(),
                ))
            }
        };
        self.overrides[idx] = Some(schedule);
        Ok(self)
    }

    pub fn shared_schedule(&self) -> &Schedule {
        &self.shared
    }

    /// The six schedule function values at normalized time `s`.
    pub fn slot_values(&self, s: f64) -> SlotValues {
        let mut a = [0.0; 6];
        for (i, slot) in a.iter_mut().enumerate() {
            *slot = match &self.overrides[i] {
                Some(schedule) => schedule.value(s),
                None => self.shared.value(s),
            };
        }
        SlotValues { a }
    }
}
