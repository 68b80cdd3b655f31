use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Tolerance on the squared norm for a state flagged as normalized.
pub const NORM_TOLERANCE: f64 = 1e-6;

/// Boundary density limit used by the constructors' grid check.
pub const BOUNDARY_LIMIT: f64 = 1e-12;

/// Complex amplitude samples `psi(x_k)` of a single-mode pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionWaveFunction {
    grid: Grid,
    amplitudes: Vec<C64>,
    normalized: bool,
}

impl PositionWaveFunction {
    /// Wraps raw samples; the result is flagged unnormalized.
    pub fn new(grid: Grid, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != grid.n_points() {
            return Err(Error::LengthMismatch { expected: grid.n_points(), got: amplitudes.len() });
        }
        Ok(PositionWaveFunction { grid, amplitudes, normalized: false })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> C64) -> Self {
        let amplitudes = grid.points().map(f).collect();
        PositionWaveFunction { grid, amplitudes, normalized: false }
    }

    /// Marks analytically normalized samples as such, after checking the
    /// quadrature norm.
    pub(crate) fn assume_normalized(mut self) -> Result<Self> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::BoundaryMass { mass: (1.0 - n).abs(), limit: NORM_TOLERANCE });
        }
        self.normalized = true;
        Ok(self)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn density(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        crate::grid::trapezoid(&self.density(), self.grid.dx())
    }

    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::ZeroNorm);
        }
        let s = n.sqrt().recip();
        Ok(PositionWaveFunction {
            grid: self.grid,
            amplitudes: self.amplitudes.iter().map(|a| a * s).collect(),
            normalized: true,
        })
    }

    pub fn require_normalized(&self) -> Result<()> {
        if self.normalized {
            Ok(())
        } else {
            Err(Error::NotNormalized)
        }
    }

    /// `<self|other>` by trapezoid quadrature.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let prod: Vec<C64> =
            self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).collect();
        self.grid.integrate(&prod)
    }

    /// `|psi|^2` at the two end points.
    pub fn boundary_density(&self) -> f64 {
        let n = self.amplitudes.len();
        self.amplitudes[0].norm_sqr().max(self.amplitudes[n - 1].norm_sqr())
    }

    pub fn check_boundary(&self, limit: f64) -> Result<()> {
        let mass = self.boundary_density();
        if mass > limit {
            return Err(Error::BoundaryMass { mass, limit });
        }
        Ok(())
    }

    /// Pointwise map `psi(x) -> f(x, psi(x))`, keeping the normalized flag.
    ///
    /// Only use with unit-modulus multipliers when the flag must stay valid.
    pub(crate) fn map_unitary(&self, f: impl Fn(f64, C64) -> C64) -> Self {
        PositionWaveFunction {
            grid: self.grid,
            amplitudes: self.grid.points().zip(&self.amplitudes).map(|(x, &a)| f(x, a)).collect(),
            normalized: self.normalized,
        }
    }

    /// Pointwise map whose result is flagged unnormalized.
    pub fn map_filter(&self, f: impl Fn(f64, C64) -> C64) -> Self {
        PositionWaveFunction {
            normalized: false,
            ..self.map_unitary(f)
        }
    }

    /// `psi(x) -> psi(x - shift)`, the action of `X(shift) = exp(-i shift p)`.
    pub fn translate(&self, shift: f64) -> Result<Self> {
        let amplitudes = self.grid.shifted(&self.amplitudes, -shift)?;
        Ok(PositionWaveFunction { grid: self.grid, amplitudes, normalized: false })
    }

    /// L2 distance between the normalized states after removing the
    /// relative global phase.
    pub fn phase_aligned_distance(&self, other: &Self) -> Result<f64> {
        let a = self.normalize()?;
        let b = other.normalize()?;
        let ov = a.inner(&b)?;
        let phase = if ov.norm() > 0.0 { ov / ov.norm() } else { C64::new(1.0, 0.0) };
        let diff: Vec<f64> = a
            .amplitudes
            .iter()
            .zip(&b.amplitudes)
            .map(|(x, y)| (x * phase - y).norm_sqr())
            .collect();
        Ok(crate::grid::trapezoid(&diff, a.grid.dx()).sqrt())
    }
}
