//! Position-representation test states, ON resource states and the ideal
//! single-mode operations that act diagonally in `x`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use ndarray::Array2;
use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::special::{airy_ai, hermite_functions};
use crate::wavefunction::{PositionWaveFunction, BOUNDARY_LIMIT};

/// Target quadrature phase gate `exp(i strength x^order)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateSpec {
    order: u32,
    strength: f64,
}

impl GateSpec {
    pub fn new(order: u32, strength: f64) -> Result<Self> {
        if order < 1 {
            return Err(Error::InvalidParameter("gate order must be at least 1".into()));
        }
        if !strength.is_finite() {
            return Err(Error::InvalidParameter(format!("gate strength {strength} is not finite")));
        }
        Ok(GateSpec { order, strength })
    }

    pub fn cubic(strength: f64) -> Self {
        GateSpec { order: 3, strength }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }
}

/// `(|0> + a|N>) / sqrt(1 + |a|^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OnSpec {
    order: usize,
    a: C64,
}

impl OnSpec {
    pub fn new(order: usize, a: C64) -> Result<Self> {
        if order < 1 {
            return Err(Error::InvalidParameter("ON state order must be at least 1".into()));
        }
        Ok(OnSpec { order, a })
    }

    /// 03 state with `a = i sqrt(3) a0 / 2`, whose position bracket is
    /// `1 + i a0 (x^3 - 3x/2)`.
    pub fn cubic(a0: f64) -> Self {
        OnSpec { order: 3, a: C64::new(0.0, 3f64.sqrt() * a0 / 2.0) }
    }

    /// 04 state with `a = i sqrt(3/2) a0`, bracket `1 + i a0 (x^4 - 3x^2 + 3/4)`.
    pub fn quartic(a0: f64) -> Self {
        OnSpec { order: 4, a: C64::new(0.0, (1.5f64).sqrt() * a0) }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn a(&self) -> C64 {
        self.a
    }

    /// `c = (1 + |a|^2)^{-1/2}`.
    pub fn normalization(&self) -> f64 {
        (1.0 + self.a.norm_sqr()).sqrt().recip()
    }

    /// Wavefunction value at an arbitrary point.
    pub fn amplitude(&self, x: f64) -> C64 {
        let psi = hermite_functions(self.order, x);
        (C64::new(psi[0], 0.0) + self.a * psi[self.order]) * self.normalization()
    }
}

/// Which quadrature a squeezed vacuum is squeezed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqueezeAxis {
    /// `x` variance reduced by `10^{dB/10}`.
    Position,
    /// `p` variance reduced, `x` variance enlarged by `10^{dB/10}`.
    Momentum,
}

pub fn fock_wavefunction(n: usize, grid: &Grid) -> PositionWaveFunction {
    let psi = PositionWaveFunction::from_fn(*grid, |x| C64::new(hermite_functions(n, x)[n], 0.0));
    let norm = psi.norm_sqr();
    // analytic samples are kept as-is; the flag only records that the
    // state represents a normalized vector
    if (norm - 1.0).abs() <= crate::wavefunction::NORM_TOLERANCE {
        psi.assume_normalized().expect("checked above")
    } else {
        psi.normalize().expect("Fock samples are never identically zero")
    }
}

/// `pi^{-1/4} exp(-(x - x0)^2 / 2)`.
pub fn coherent_x_wavefunction(x0: f64, grid: &Grid) -> Result<PositionWaveFunction> {
    let pref = PI.powf(-0.25);
    let psi = PositionWaveFunction::from_fn(*grid, |x| {
        C64::new(pref * (-(x - x0) * (x - x0) / 2.0).exp(), 0.0)
    });
    psi.check_boundary(BOUNDARY_LIMIT)?;
    psi.assume_normalized()
}

/// `(s/pi)^{1/4} exp(-s x^2 / 2)` with `s = 10^{dB/10}` for position
/// squeezing and `s = 10^{-dB/10}` for momentum squeezing.
pub fn squeezed_vacuum_wavefunction(
    db: f64,
    axis: SqueezeAxis,
    grid: &Grid,
) -> Result<PositionWaveFunction> {
    if !(db >= 0.0 && db.is_finite()) {
        return Err(Error::InvalidParameter(format!("squeezing must be >= 0 dB, got {db}")));
    }
    let factor = 10f64.powf(db / 10.0);
    let s = match axis {
        SqueezeAxis::Position => factor,
        SqueezeAxis::Momentum => factor.recip(),
    };
    let pref = (s / PI).powf(0.25);
    let psi = PositionWaveFunction::from_fn(*grid, |x| C64::new(pref * (-s * x * x / 2.0).exp(), 0.0));
    psi.check_boundary(BOUNDARY_LIMIT)?;
    psi.assume_normalized()
}

pub fn on_wavefunction(spec: &OnSpec, grid: &Grid) -> Result<PositionWaveFunction> {
    let psi = PositionWaveFunction::from_fn(*grid, |x| spec.amplitude(x));
    psi.check_boundary(BOUNDARY_LIMIT)?;
    psi.assume_normalized()
}

/// `psi(x) -> psi(x) exp(i gamma x^N)`.
pub fn apply_phase_gate(psi: &PositionWaveFunction, gate: &GateSpec) -> PositionWaveFunction {
    let (n, g) = (gate.order() as i32, gate.strength());
    psi.map_unitary(|x, a| a * C64::from_polar(1.0, g * x.powi(n)))
}

/// `psi(x) -> exp(-(x+q)^2/2) psi(x)`; returns the unnormalized result and
/// its squared norm.
pub fn apply_damping(psi: &PositionWaveFunction, q: f64) -> (PositionWaveFunction, f64) {
    let out = psi.map_filter(|x, a| a * (-(x + q) * (x + q) / 2.0).exp());
    let n = out.norm_sqr();
    (out, n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    X,
    X2,
    P,
}

pub fn expectation(psi: &PositionWaveFunction, obs: Observable) -> Result<f64> {
    psi.require_normalized()?;
    let grid = psi.grid();
    match obs {
        Observable::X | Observable::X2 => {
            let pow = if obs == Observable::X { 1 } else { 2 };
            let w: Vec<f64> =
                grid.points().zip(psi.density()).map(|(x, d)| x.powi(pow) * d).collect();
            grid.integrate_real(&w)
        }
        Observable::P => Ok(momentum_mean(psi)),
    }
}

/// `<p>` from the discrete Fourier spectrum of the samples (Parseval form).
fn momentum_mean(psi: &PositionWaveFunction) -> f64 {
    let n = psi.amplitudes().len();
    let mut buf = psi.amplitudes().to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let dk = 2.0 * PI / (n as f64 * psi.grid().dx());
    let (mut num, mut den) = (0.0, 0.0);
    for (j, c) in buf.iter().enumerate() {
        let w = c.norm_sqr();
        let k = if 2 * j < n {
            j as f64
        } else if 2 * j == n {
            0.0
        } else {
            j as f64 - n as f64
        } * dk;
        num += k * w;
        den += w;
    }
    num / den
}

/// Axis specification `(min, max, points)` for a 2-D phase-space lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRange {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl AxisRange {
    pub fn new(min: f64, max: f64, points: usize) -> Result<Self> {
        Grid::new(min, max, points)?;
        Ok(AxisRange { min, max, points })
    }

    pub fn values(&self) -> Vec<f64> {
        let step = (self.max - self.min) / (self.points - 1) as f64;
        (0..self.points).map(|k| self.min + k as f64 * step).collect()
    }
}

/// Wigner function of the ideal cubic phase state on an `x`-by-`p` lattice,
/// `Ai(b0 (3 gamma x^2 - p))` with `b0 = (4 / 3 gamma)^{1/3}`.
///
/// The state is not normalizable, so the prefactor is fixed to 1 and only
/// the shape is meaningful. Rows index `x`, columns index `p`.
pub fn wigner_cubic(gamma: f64, xs: AxisRange, ps: AxisRange) -> Result<Array2<f64>> {
    if gamma == 0.0 || !gamma.is_finite() {
        return Err(Error::InvalidParameter("cubic Wigner function needs gamma != 0".into()));
    }
    let b0 = (4.0 / (3.0 * gamma)).cbrt();
    let (xv, pv) = (xs.values(), ps.values());
    Ok(Array2::from_shape_fn((xv.len(), pv.len()), |(i, j)| {
        airy_ai(b0 * (3.0 * gamma * xv[i] * xv[i] - pv[j]))
    }))
}

/// Named test-state families used throughout the figures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TestState {
    Fock(usize),
    /// `x`-displaced vacuum.
    Coherent(f64),
    /// Momentum-squeezed vacuum (x-quadrature broadened) in dB.
    Squeezed(f64),
}

impl TestState {
    pub fn wavefunction(&self, grid: &Grid) -> Result<PositionWaveFunction> {
        match *self {
            TestState::Fock(n) => {
                let psi = fock_wavefunction(n, grid);
                psi.check_boundary(BOUNDARY_LIMIT)?;
                Ok(psi)
            }
            TestState::Coherent(x0) => coherent_x_wavefunction(x0, grid),
            TestState::Squeezed(db) => squeezed_vacuum_wavefunction(db, SqueezeAxis::Momentum, grid),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            TestState::Fock(_) => "fock",
            TestState::Coherent(_) => "coherent",
            TestState::Squeezed(_) => "squeezed",
        }
    }

    pub fn parameter(&self) -> f64 {
        match *self {
            TestState::Fock(n) => n as f64,
            TestState::Coherent(x0) => x0,
            TestState::Squeezed(db) => db,
        }
    }
}

impl fmt::Display for TestState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestState::Fock(n) => write!(f, "fock:{n}"),
            other => write!(f, "{}:{}", other.kind(), other.parameter()),
        }
    }
}

pub const TEST_STATE_GRAMMAR: &str = "fock:<n> | coherent:<x0> | squeezed:<dB>";

impl FromStr for TestState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("cannot parse state '{s}'; expected {TEST_STATE_GRAMMAR}"));
        let (kind, value) = s.split_once(':').ok_or_else(bad)?;
        match kind.trim() {
            "fock" => value.trim().parse().map(TestState::Fock).map_err(|_| bad()),
            "coherent" => value.trim().parse().map(TestState::Coherent).map_err(|_| bad()),
            "squeezed" => {
                let db: f64 = value.trim().parse().map_err(|_| bad())?;
                if db < 0.0 {
                    return Err(bad());
                }
                Ok(TestState::Squeezed(db))
            }
            _ => Err(bad()),
        }
    }
}
