//! Figures of merit for the measurement-induced gate.

use rayon::prelude::*;

use crate::circuit::{homodyne_density, Resource};
use crate::error::{Error, Result};
use crate::grid::{lattice_correlate, trapezoid, Grid};
use crate::states::{GateSpec, TestState};
use crate::wavefunction::PositionWaveFunction;

/// `|<psi|phi>|` of the normalized states.
pub fn state_fidelity(psi: &PositionWaveFunction, phi: &PositionWaveFunction) -> Result<f64> {
    let a = psi.normalize()?;
    let b = phi.normalize()?;
    Ok(a.inner(&b)?.norm().min(1.0))
}

/// `sqrt(1 - F^2)`.
pub fn trace_distance(psi: &PositionWaveFunction, phi: &PositionWaveFunction) -> Result<f64> {
    let f = state_fidelity(psi, phi)?;
    Ok((1.0 - f * f).max(0.0).sqrt())
}

/// Numerator `int |psi|^2 A_q` and squared denominator `int |psi|^2 A_q^2`
/// of the per-outcome gate fidelity, `A_q(x) = exp(-(x+q)^2/2)`.
pub fn gate_fidelity_terms(psi: &PositionWaveFunction, q: f64) -> (f64, f64) {
    let grid = psi.grid();
    let (mut num, mut den) = (Vec::with_capacity(grid.n_points()), Vec::with_capacity(grid.n_points()));
    for (x, d) in grid.points().zip(psi.density()) {
        let a = (-(x + q) * (x + q) / 2.0).exp();
        num.push(d * a);
        den.push(d * a * a);
    }
    (trapezoid(&num, grid.dx()), trapezoid(&den, grid.dx()))
}

/// Fidelity between the circuit output and the ideal gate output for
/// outcome `q`. Depends only on `|psi|^2`.
pub fn gate_fidelity_q(psi: &PositionWaveFunction, q: f64) -> Result<f64> {
    psi.require_normalized()?;
    let (num, den) = gate_fidelity_terms(psi, q);
    if den <= 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok(num / den.sqrt())
}

/// Closed form for a coherent input displaced to `x0`:
/// `sqrt(2 sqrt(2) / 3) exp(-(q + x0)^2 / 12)`.
pub fn coherent_gate_fidelity(q: f64, x0: f64) -> f64 {
    (2.0 * 2f64.sqrt() / 3.0).sqrt() * (-(q + x0) * (q + x0) / 12.0).exp()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FidelityReport {
    /// `(q, F_q)` over the q-grid.
    pub per_q: Vec<(f64, f64)>,
    /// `int p(q) F_q dq`, with `p` induced by the 03 resource at the scored strength.
    pub average: f64,
    pub gate: GateSpec,
    pub test_state: Option<TestState>,
    pub warnings: Vec<String>,
}

/// Homodyne-averaged gate fidelity of the cubic gate with strength `a0`.
pub fn avg_gate_fidelity(psi: &PositionWaveFunction, a0: f64) -> Result<FidelityReport> {
    psi.require_normalized()?;
    let grid = psi.grid();
    let hd = homodyne_density(psi, &Resource::cubic(a0), grid)?;
    // A_q(x_k) for q on the same lattice: exp(-y^2/2) at y = x_k + q_j
    let n = grid.n_points();
    let y0 = 2.0 * grid.x_min();
    let (a1, a2): (Vec<f64>, Vec<f64>) = (0..2 * n - 1)
        .map(|m| {
            let y = y0 + m as f64 * grid.dx();
            let a = (-y * y / 2.0).exp();
            (a, a * a)
        })
        .unzip();
    let d = psi.density();
    let num = lattice_correlate(&d, &a1, grid.dx(), n);
    let den = lattice_correlate(&d, &a2, grid.dx(), n);
    let per_q = grid
        .points()
        .zip(num.iter().zip(&den))
        .map(|(q, (&a, &b))| if b > 0.0 { Ok((q, a / b.sqrt())) } else { Err(Error::ZeroNorm) })
        .collect::<Result<Vec<_>>>()?;
    let weighted: Vec<f64> = per_q.iter().zip(hd.density.values()).map(|((_, f), p)| f * p).collect();
    Ok(FidelityReport {
        per_q,
        average: trapezoid(&weighted, grid.dx()),
        gate: GateSpec::cubic(a0),
        test_state: None,
        warnings: hd.warning.into_iter().collect(),
    })
}

/// [`avg_gate_fidelity`] for a named test state.
pub fn avg_gate_fidelity_for(state: TestState, a0: f64, grid: &Grid) -> Result<FidelityReport> {
    let mut report = avg_gate_fidelity(&state.wavefunction(grid)?, a0)?;
    report.test_state = Some(state);
    Ok(report)
}

/// The three panels of the fidelity figure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    /// Vacuum input, `gamma` from 0 to 0.1 in steps of 0.005.
    Gamma,
    /// Squeezed input at `gamma = 0.1`, 0 to 9.5 dB in steps of 0.5 dB.
    Squeezing,
    /// Fock input at `gamma = 0.1`, `n = 0..=5`.
    Fock,
}

pub const SWEEP_GAMMA: f64 = 0.1;

impl SweepKind {
    pub fn name(&self) -> &'static str {
        match self {
            SweepKind::Gamma => "gamma",
            SweepKind::Squeezing => "squeezing",
            SweepKind::Fock => "fock",
        }
    }

    /// `(sweep parameter, test state, a0)` for every row.
    pub fn points(&self) -> Vec<(f64, TestState, f64)> {
        match self {
            SweepKind::Gamma => {
                (0..=20).map(|k| (0.005 * k as f64, TestState::Coherent(0.0), 0.005 * k as f64)).collect()
            }
            SweepKind::Squeezing => {
                (0..=19).map(|k| (0.5 * k as f64, TestState::Squeezed(0.5 * k as f64), SWEEP_GAMMA)).collect()
            }
            SweepKind::Fock => (0..=5).map(|n| (n as f64, TestState::Fock(n), SWEEP_GAMMA)).collect(),
        }
    }
}

impl std::str::FromStr for SweepKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gamma" => Ok(SweepKind::Gamma),
            "squeezing" => Ok(SweepKind::Squeezing),
            "fock" => Ok(SweepKind::Fock),
            _ => Err(Error::InvalidParameter(format!("unknown sweep {s:?}; expected gamma | squeezing | fock"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub parameter: f64,
    pub state: TestState,
    pub gamma: f64,
    pub average: f64,
}

/// Average gate fidelity for every point of the sweep, in sweep order.
pub fn fidelity_sweeps(kind: SweepKind, grid: &Grid) -> Result<Vec<SweepRow>> {
    kind.points()
        .into_par_iter()
        .map(|(parameter, state, gamma)| {
            avg_gate_fidelity_for(state, gamma, grid).map(|r| SweepRow { parameter, state, gamma, average: r.average })
        })
        .collect()
}
