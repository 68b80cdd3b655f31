//! Uniform position lattice, trapezoid quadrature, interpolated translation
//! and inverse-CDF sampling of tabulated densities.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Half-width of the default symmetric grid.
pub const DEFAULT_X_MAX: f64 = 16.0;
/// Number of lattice points of the default grid.
pub const DEFAULT_N_POINTS: usize = 4096;

/// Number of samples used by the Lagrange stencil when translating
/// tabulated functions by a non-lattice offset.
pub const SHIFT_STENCIL: usize = 8;

/// Uniform 1-D lattice `x_k = x_min + k dx`, `k = 0..n_points`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Grid::symmetric(DEFAULT_X_MAX, DEFAULT_N_POINTS).expect("default grid is valid")
    }
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
            return Err(Error::InvalidGrid(format!(
                "need finite x_max > x_min, got [{x_min}, {x_max}]"
            )));
        }
        if n_points < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 points, got {n_points}"
            )));
        }
        Ok(Grid { x_min, x_max, n_points })
    }

    pub fn symmetric(x_max: f64, n_points: usize) -> Result<Self> {
        Grid::new(-x_max, x_max, n_points)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn is_symmetric(&self) -> bool {
        self.x_min == -self.x_max
    }

    #[inline]
    pub fn point(&self, k: usize) -> f64 {
        self.x_min + k as f64 * self.dx()
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        let dx = self.dx();
        (0..self.n_points).map(move |k| self.x_min + k as f64 * dx)
    }

    /// Same extent, twice the resolution (`2n - 1` points, so every old
    /// lattice point survives).
    pub fn refined(&self) -> Grid {
        Grid { n_points: 2 * self.n_points - 1, ..*self }
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n_points {
            return Err(Error::LengthMismatch { expected: self.n_points, got: len });
        }
        Ok(())
    }

    /// Trapezoid rule over the whole grid.
    pub fn integrate(&self, samples: &[C64]) -> Result<C64> {
        self.check_len(samples.len())?;
        let n = samples.len();
        let inner: C64 = samples[1..n - 1].iter().sum();
        Ok((inner + (samples[0] + samples[n - 1]) * 0.5) * self.dx())
    }

    pub fn integrate_real(&self, samples: &[f64]) -> Result<f64> {
        self.check_len(samples.len())?;
        Ok(trapezoid(samples, self.dx()))
    }

    /// Samples of `f(x_k + shift)` given samples of `f` on this grid.
    ///
    /// Lattice shifts move indices exactly; other offsets use a centred
    /// `SHIFT_STENCIL`-point Lagrange interpolant. `f` is taken to vanish
    /// off the grid.
    pub fn shifted(&self, samples: &[C64], shift: f64) -> Result<Vec<C64>> {
        self.check_len(samples.len())?;
        let n = self.n_points as isize;
        let s = shift / self.dx();
        let base = s.floor();
        let mut frac = s - base;
        let mut base = base as isize;
        if frac > 1.0 - 1e-12 {
            base += 1;
            frac = 0.0;
        }
        let at = |i: isize| -> C64 {
            if (0..n).contains(&i) {
                samples[i as usize]
            } else {
                C64::new(0.0, 0.0)
            }
        };
        if frac < 1e-12 {
            return Ok((0..n).map(|k| at(k + base)).collect());
        }
        let half = (SHIFT_STENCIL / 2) as isize;
        let offsets: Vec<isize> = (1 - half..=half).collect();
        let weights = lagrange_weights(&offsets, frac);
        Ok((0..n)
            .map(|k| {
                offsets
                    .iter()
                    .zip(&weights)
                    .map(|(&o, &w)| at(k + base + o) * w)
                    .sum()
            })
            .collect())
    }
}

pub(crate) fn trapezoid(samples: &[f64], dx: f64) -> f64 {
    let n = samples.len();
    if n < 2 {
        return 0.0;
    }
    let inner: f64 = samples[1..n - 1].iter().sum();
    (inner + 0.5 * (samples[0] + samples[n - 1])) * dx
}

/// True when `b` has the spacing of `a`, so `x_k + q_j` lies on the
/// lattice `a.x_min + b.x_min + (k + j) dx`.
pub(crate) fn shares_spacing(a: &Grid, b: &Grid) -> bool {
    (a.dx() - b.dx()).abs() <= 1e-12 * a.dx()
}

/// Trapezoid sums `out_j = sum_k w_k f_k profile[k + j]` for `j < n_out`,
/// with `profile.len() >= f.len() + n_out - 1`.
pub(crate) fn lattice_correlate(f: &[f64], profile: &[f64], dx: f64, n_out: usize) -> Vec<f64> {
    use rayon::prelude::*;
    let n = f.len();
    assert!(profile.len() + 1 >= n + n_out, "profile too short");
    let mut w: Vec<f64> = f.iter().map(|v| v * dx).collect();
    if n >= 2 {
        w[0] *= 0.5;
        w[n - 1] *= 0.5;
    } else {
        w.iter_mut().for_each(|v| *v = 0.0);
    }
    (0..n_out)
        .into_par_iter()
        .map(|j| w.iter().zip(&profile[j..j + n]).map(|(a, b)| a * b).sum())
        .collect()
}

/// Lagrange basis weights at `t` for integer nodes `offsets`.
fn lagrange_weights(offsets: &[isize], t: f64) -> Vec<f64> {
    offsets
        .iter()
        .map(|&j| {
            offsets
                .iter()
                .filter(|&&l| l != j)
                .map(|&l| (t - l as f64) / (j - l) as f64)
                .product()
        })
        .collect()
}

/// Non-negative samples of a (not necessarily normalized) density.
#[derive(Debug, Clone, PartialEq)]
pub struct DensitySamples {
    grid: Grid,
    values: Vec<f64>,
}

impl DensitySamples {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        grid.check_len(values.len())?;
        if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "density values must be finite and non-negative, found {bad}"
            )));
        }
        Ok(DensitySamples { grid, values })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mass(&self) -> f64 {
        trapezoid(&self.values, self.grid.dx())
    }

    /// Rescaled copy with unit trapezoid integral.
    pub fn normalized(&self) -> Result<Self> {
        let mass = self.mass();
        if mass <= 0.0 {
            return Err(Error::EmptyDensity);
        }
        Ok(DensitySamples {
            grid: self.grid,
            values: self.values.iter().map(|v| v / mass).collect(),
        })
    }

    pub fn mean(&self) -> f64 {
        let xs: Vec<f64> = self.grid.points().zip(&self.values).map(|(x, v)| x * v).collect();
        trapezoid(&xs, self.grid.dx()) / self.mass()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        let xs: Vec<f64> = self
            .grid
            .points()
            .zip(&self.values)
            .map(|(x, v)| (x - m) * (x - m) * v)
            .collect();
        trapezoid(&xs, self.grid.dx()) / self.mass()
    }

    /// Cumulative trapezoid integral at each lattice point, scaled to end at 1.
    fn cdf(&self) -> Result<Vec<f64>> {
        let dx = self.grid.dx();
        let mut cdf = Vec::with_capacity(self.values.len());
        let mut acc = 0.0;
        cdf.push(0.0);
        for w in self.values.windows(2) {
            acc += 0.5 * (w[0] + w[1]) * dx;
            cdf.push(acc);
        }
        if acc <= 0.0 {
            return Err(Error::EmptyDensity);
        }
        cdf.iter_mut().for_each(|c| *c /= acc);
        Ok(cdf)
    }
}

/// Inverse-CDF draw from a tabulated density; `u` in `[0, 1)`.
///
/// The CDF is the running trapezoid integral; inside a bin the inverse is
/// linear. Deterministic and non-decreasing in `u`.
pub fn sample_from_density(d: &DensitySamples, u: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::InvalidParameter(format!("u must lie in [0, 1), got {u}")));
    }
    let cdf = d.cdf()?;
    // first index with cdf > u, restricted so that a bin with positive width follows
    let idx = cdf.partition_point(|&c| c <= u);
    let hi = idx.clamp(1, cdf.len() - 1);
    let lo = hi - 1;
    let width = cdf[hi] - cdf[lo];
    let frac = if width > 0.0 { ((u - cdf[lo]) / width).clamp(0.0, 1.0) } else { 0.0 };
    Ok(d.grid.point(lo) + frac * d.grid.dx())
}
