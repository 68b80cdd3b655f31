//! Measurement-induced gate: the input is coupled to an ON resource,
//! the resource is measured by x-homodyne, and the outcome `q` leaves the
//! input filtered by `T1(q) = phi_r(x + q)`.
//!
//! With the 03 resource the filter is, up to constants,
//! `exp(-(x+q)^2/2) [1 + i a0 ((x+q)^3 - 3(x+q)/2)]`. Its unitarized form
//! (bracket replaced by the exponential of its first-order term) composed
//! with the feed-forward [`feed_forward`] equals `A_q exp(i a0 x^3)` exactly,
//! where `A_q = exp(-(x+q)^2/2)` is the damping operator. Both forms are
//! exposed; the raw filter is never swapped for the exponential silently.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{lattice_correlate, sample_from_density, shares_spacing, trapezoid, DensitySamples, Grid};
use crate::states::{apply_damping, apply_phase_gate, on_wavefunction, GateSpec, OnSpec};
use crate::wavefunction::PositionWaveFunction;

/// Minimum on-grid mass of `p(q)` before a coverage warning is raised.
pub const DENSITY_COVERAGE: f64 = 0.999;

/// Largest cubic-filter strength accepted by [`quartic_effective`].
pub const QUARTIC_MAX_A0: f64 = 0.1;

/// The resource mode's wavefunction.
#[derive(Debug, Clone, PartialEq)]
pub enum Resource {
    /// ON state evaluated analytically at any point.
    On(OnSpec),
    /// Samples on the input grid, shifted by interpolation; zero off-grid.
    Sampled(PositionWaveFunction),
}

impl Resource {
    pub fn cubic(a0: f64) -> Self {
        Resource::On(OnSpec::cubic(a0))
    }

    /// `phi_r(x_k + q)` on `grid`.
    pub fn shifted_samples(&self, grid: &Grid, q: f64) -> Result<Vec<C64>> {
        match self {
            Resource::On(spec) => Ok(grid.points().map(|x| spec.amplitude(x + q)).collect()),
            Resource::Sampled(phi) => {
                if phi.grid() != grid {
                    return Err(Error::GridMismatch);
                }
                grid.shifted(phi.amplitudes(), q)
            }
        }
    }
}

/// `T1(q) psi = phi_r(x + q) psi(x)`, unnormalized.
pub fn effective_operator(psi: &PositionWaveFunction, resource: &Resource, q: f64) -> Result<PositionWaveFunction> {
    let phi = resource.shifted_samples(psi.grid(), q)?;
    let amps = psi.amplitudes().iter().zip(&phi).map(|(a, f)| a * f).collect();
    PositionWaveFunction::new(*psi.grid(), amps)
}

/// Homodyne outcome probability density at a single `q`,
/// `int |psi(x)|^2 |phi_r(x + q)|^2 dx`.
pub fn homodyne_probability(psi: &PositionWaveFunction, resource: &Resource, q: f64) -> Result<f64> {
    let grid = psi.grid();
    let phi = resource.shifted_samples(grid, q)?;
    let integrand: Vec<f64> =
        psi.amplitudes().iter().zip(&phi).map(|(a, f)| a.norm_sqr() * f.norm_sqr()).collect();
    Ok(trapezoid(&integrand, grid.dx()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomodyneDensity {
    /// `p(q)` renormalized to unit integral over the q-grid.
    pub density: DensitySamples,
    /// On-grid integral of `p(q)` before renormalization.
    pub raw_mass: f64,
    pub warning: Option<String>,
}

/// `|phi_r|^2` on the lattice `x_min + q_min + m dx`, `m < n_x + n_q - 1`,
/// when the q-grid shares the x-grid spacing (and, for sampled resources,
/// its lattice).
fn lattice_profile(resource: &Resource, x_grid: &Grid, q_grid: &Grid) -> Result<Option<Vec<f64>>> {
    if !shares_spacing(x_grid, q_grid) {
        return Ok(None);
    }
    let len = x_grid.n_points() + q_grid.n_points() - 1;
    let dx = x_grid.dx();
    match resource {
        Resource::On(spec) => {
            let y0 = x_grid.x_min() + q_grid.x_min();
            Ok(Some((0..len).map(|m| spec.amplitude(y0 + m as f64 * dx).norm_sqr()).collect()))
        }
        Resource::Sampled(phi) => {
            if phi.grid() != x_grid {
                return Err(Error::GridMismatch);
            }
            let s = q_grid.x_min() / dx;
            let off = s.round();
            if (s - off).abs() > 1e-9 {
                return Ok(None);
            }
            let off = off as isize;
            let n = x_grid.n_points() as isize;
            Ok(Some(
                (0..len as isize)
                    .map(|m| {
                        let i = off + m;
                        if (0..n).contains(&i) {
                            phi.amplitudes()[i as usize].norm_sqr()
                        } else {
                            0.0
                        }
                    })
                    .collect(),
            ))
        }
    }
}

/// `p(q)` on every point of `q_grid`, renormalized on the grid.
///
/// A raw mass below [`DENSITY_COVERAGE`] yields a "q-grid too narrow"
/// warning rather than an error. When the q-grid shares the x spacing the
/// integrals reduce to one lattice correlation.
pub fn homodyne_density(psi: &PositionWaveFunction, resource: &Resource, q_grid: &Grid) -> Result<HomodyneDensity> {
    let values = match lattice_profile(resource, psi.grid(), q_grid)? {
        Some(profile) => lattice_correlate(&psi.density(), &profile, psi.grid().dx(), q_grid.n_points())
            .into_iter()
            .map(|p| p.max(0.0))
            .collect(),
        None => {
            let qs: Vec<f64> = q_grid.points().collect();
            qs.par_iter()
                .map(|&q| homodyne_probability(psi, resource, q).map(|p| p.max(0.0)))
                .collect::<Result<Vec<f64>>>()?
        }
    };
    let raw = DensitySamples::new(*q_grid, values)?;
    let raw_mass = raw.mass();
    let warning = (raw_mass < DENSITY_COVERAGE)
        .then(|| format!("q-grid too narrow: p(q) mass {raw_mass:.6} below {DENSITY_COVERAGE}"));
    Ok(HomodyneDensity { density: raw.normalized()?, raw_mass, warning })
}

fn cubic_bracket(y: f64) -> f64 {
    y * y * y - 1.5 * y
}

/// The 03 filter with its bracket exponentiated,
/// `exp(-(x+q)^2/2) exp(i a0 ((x+q)^3 - 3(x+q)/2))`.
pub fn unitarized_filter(psi: &PositionWaveFunction, q: f64, a0: f64) -> PositionWaveFunction {
    psi.map_filter(|x, a| {
        let y = x + q;
        a * C64::from_polar((-y * y / 2.0).exp(), a0 * cubic_bracket(y))
    })
}

/// `F_G = e^{i 3 a0 q/2} e^{-i a0 (3x^2 q + 3x q^2 + q^3)} e^{i 3 a0 x / 2}`.
pub fn feed_forward(psi: &PositionWaveFunction, q: f64, a0: f64) -> PositionWaveFunction {
    psi.map_unitary(|x, a| {
        let phase = 1.5 * a0 * q - a0 * (3.0 * x * x * q + 3.0 * x * q * q + q * q * q) + 1.5 * a0 * x;
        a * C64::from_polar(1.0, phase)
    })
}

/// Normalized `A_q exp(i a0 x^3) psi`, the ideal conditional output.
pub fn target_output(psi: &PositionWaveFunction, q: f64, a0: f64) -> Result<PositionWaveFunction> {
    apply_damping(&apply_phase_gate(psi, &GateSpec::cubic(a0)), q).0.normalize()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitOutcome {
    /// Homodyne outcome.
    pub q: f64,
    /// Normalized output of the unitarized filter and its corrections.
    pub output: PositionWaveFunction,
    /// Normalized output of the raw first-order filter with the same corrections.
    pub first_order_output: PositionWaveFunction,
    /// Squared norm of `T1(q) psi` with the raw, sampled resource.
    pub raw_norm_sqr: f64,
    /// `p(q)` over the q-grid.
    pub density: DensitySamples,
    /// Always true for deterministic runs.
    pub accepted: bool,
    /// `int p(q) dq` over the post-selection window.
    pub acceptance_mass: Option<f64>,
    pub warnings: Vec<String>,
}

fn check_input(psi: &PositionWaveFunction) -> Result<()> {
    psi.require_normalized()
}

/// Raw filtered state via the sampled resource, its squared norm, and the
/// density via the analytic resource.
fn filter_and_density(
    psi: &PositionWaveFunction,
    a0: f64,
    q_of: impl FnOnce(&DensitySamples) -> Result<f64>,
) -> Result<(f64, PositionWaveFunction, HomodyneDensity)> {
    let spec = OnSpec::cubic(a0);
    let hd = homodyne_density(psi, &Resource::On(spec), psi.grid())?;
    let q = q_of(&hd.density)?;
    let sampled = Resource::Sampled(on_wavefunction(&spec, psi.grid())?);
    let raw = effective_operator(psi, &sampled, q)?;
    Ok((q, raw, hd))
}

fn raw_first_order_output(raw: &PositionWaveFunction, spec: &OnSpec) -> PositionWaveFunction {
    // strip the ON normalization so the raw filter reads exp(-y^2/2) [1 + i a0 (...)]
    let scale = C64::new(std::f64::consts::PI.powf(0.25) / spec.normalization(), 0.0);
    raw.map_filter(|_, a| a * scale)
}

/// One run with dynamic feed-forward; `u` in `[0, 1)` selects the outcome
/// by inverse-CDF sampling of `p(q)`.
pub fn run_deterministic(psi: &PositionWaveFunction, a0: f64, u: f64) -> Result<CircuitOutcome> {
    check_input(psi)?;
    let (q, raw, hd) = filter_and_density(psi, a0, |d| sample_from_density(d, u))?;
    deterministic_from(psi, a0, q, raw, hd)
}

/// As [`run_deterministic`] with the outcome fixed to `q`.
pub fn run_deterministic_at(psi: &PositionWaveFunction, a0: f64, q: f64) -> Result<CircuitOutcome> {
    check_input(psi)?;
    let (q, raw, hd) = filter_and_density(psi, a0, |_| Ok(q))?;
    deterministic_from(psi, a0, q, raw, hd)
}

fn deterministic_from(
    psi: &PositionWaveFunction,
    a0: f64,
    q: f64,
    raw: PositionWaveFunction,
    hd: HomodyneDensity,
) -> Result<CircuitOutcome> {
    let raw_norm_sqr = raw.norm_sqr();
    if raw_norm_sqr == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let output = feed_forward(&unitarized_filter(psi, q, a0), q, a0).normalize()?;
    let first = raw_first_order_output(&raw, &OnSpec::cubic(a0));
    let first_order_output = feed_forward(&first, q, a0).normalize()?;
    Ok(CircuitOutcome {
        q,
        output,
        first_order_output,
        raw_norm_sqr,
        density: hd.density,
        accepted: true,
        acceptance_mass: None,
        warnings: hd.warning.into_iter().collect(),
    })
}

/// Acceptance window `q0 +- epsilon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PostSelectSpec {
    q0: f64,
    epsilon: f64,
}

impl PostSelectSpec {
    pub fn new(q0: f64, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) || !q0.is_finite() {
            return Err(Error::InvalidParameter(format!("window needs epsilon > 0, got {epsilon}")));
        }
        Ok(PostSelectSpec { q0, epsilon })
    }

    pub fn q0(&self) -> f64 {
        self.q0
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn contains(&self, q: f64) -> bool {
        (q - self.q0).abs() <= self.epsilon
    }
}

/// `int_{q0-eps}^{q0+eps} p(q) dq` by composite Simpson on the analytic
/// density, independent of the q-grid.
pub fn acceptance_mass(psi: &PositionWaveFunction, resource: &Resource, spec: &PostSelectSpec) -> Result<f64> {
    let width = 2.0 * spec.epsilon;
    let target_h = psi.grid().dx() / 2.0;
    let mut m = ((width / target_h).ceil() as usize).max(64);
    m += m % 2;
    let h = width / m as f64;
    let a = spec.q0 - spec.epsilon;
    let terms = (0..=m)
        .into_par_iter()
        .map(|k| {
            let w = if k == 0 || k == m {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            homodyne_probability(psi, resource, a + k as f64 * h).map(|p| w * p)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok((terms.iter().sum::<f64>() * h / 3.0).min(1.0))
}

/// Post-selected run: the input is translated by `-q0` (`psi(x) -> psi(x + q0)`),
/// the outcome is accepted iff it falls in the window, and the fixed
/// corrections `X(q0)` then `Z(3 a0 / 2)` replace the feed-forward.
pub fn run_postselected(psi: &PositionWaveFunction, a0: f64, spec: &PostSelectSpec, u: f64) -> Result<CircuitOutcome> {
    check_input(psi)?;
    postselected(psi, a0, spec, |d| sample_from_density(d, u))
}

/// As [`run_postselected`] with the outcome fixed to `q`.
pub fn run_postselected_at(psi: &PositionWaveFunction, a0: f64, spec: &PostSelectSpec, q: f64) -> Result<CircuitOutcome> {
    check_input(psi)?;
    postselected(psi, a0, spec, |_| Ok(q))
}

fn fixed_corrections(psi: &PositionWaveFunction, q0: f64, a0: f64) -> Result<PositionWaveFunction> {
    let shifted = psi.translate(q0)?;
    Ok(shifted.map_filter(|x, a| a * C64::from_polar(1.0, 1.5 * a0 * x)))
}

fn postselected(
    psi: &PositionWaveFunction,
    a0: f64,
    spec: &PostSelectSpec,
    q_of: impl FnOnce(&DensitySamples) -> Result<f64>,
) -> Result<CircuitOutcome> {
    let pre = if spec.q0 == 0.0 { psi.clone() } else { psi.translate(-spec.q0)?.normalize()? };
    let mass = acceptance_mass(&pre, &Resource::cubic(a0), spec)?;
    if mass <= 0.0 {
        return Err(Error::ZeroAcceptance);
    }
    let (q, raw, hd) = filter_and_density(&pre, a0, q_of)?;
    let raw_norm_sqr = raw.norm_sqr();
    if raw_norm_sqr == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let output = fixed_corrections(&unitarized_filter(&pre, q, a0), spec.q0, a0)?.normalize()?;
    let first = raw_first_order_output(&raw, &OnSpec::cubic(a0));
    let first_order_output = fixed_corrections(&first, spec.q0, a0)?.normalize()?;
    Ok(CircuitOutcome {
        q,
        output,
        first_order_output,
        raw_norm_sqr,
        density: hd.density,
        accepted: spec.contains(q),
        acceptance_mass: Some(mass),
        warnings: hd.warning.into_iter().collect(),
    })
}

/// Kernel of the squeezed-resource operator,
/// `exp(-(x/r + q)^2 / 2 + i a0 (x/r)^3)`, sampled on `grid`.
pub fn squeezed_effective(q: f64, r: f64, a0: f64, grid: &Grid) -> Result<Vec<C64>> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("squeezing factor r must be > 0, got {r}")));
    }
    Ok(grid
        .points()
        .map(|x| {
            let s = x / r;
            C64::from_polar((-(s + q) * (s + q) / 2.0).exp(), a0 * s * s * s)
        })
        .collect())
}

/// Quartic filter after outcome `q`: the raw first-order form
/// `exp(-y^2/2) [1 + i a0 (y^4 - 3y^2 + 3/4)] psi` and the resummed form
/// `exp(-beta y^2/2) exp(i a0 y^4) psi` with `y = x + q`,
/// `beta = 1 + 6 i a0`. The resummed form omits the constant `e^{i 3a0/4}`.
pub fn quartic_effective(
    psi: &PositionWaveFunction,
    q: f64,
    a0: f64,
) -> Result<(PositionWaveFunction, PositionWaveFunction)> {
    if a0.abs() > QUARTIC_MAX_A0 {
        return Err(Error::InvalidParameter(format!("|a0| must be at most {QUARTIC_MAX_A0}, got {a0}")));
    }
    let beta = C64::new(1.0, 6.0 * a0);
    let raw = psi.map_filter(|x, a| {
        let y = x + q;
        let y2 = y * y;
        a * (-y2 / 2.0).exp() * C64::new(1.0, a0 * (y2 * y2 - 3.0 * y2 + 0.75))
    });
    let exponentiated = psi.map_filter(|x, a| {
        let y = x + q;
        let y2 = y * y;
        a * (-beta * y2 / 2.0).exp() * C64::from_polar(1.0, a0 * y2 * y2)
    });
    Ok((raw, exponentiated))
}

/// `(1 + i gamma x^3 / n)^n psi`, unnormalized.
pub fn product_step(psi: &PositionWaveFunction, gamma: f64, n_steps: usize) -> Result<PositionWaveFunction> {
    if n_steps == 0 {
        return Err(Error::InvalidParameter("product expansion needs at least one step".into()));
    }
    let mut out = psi.map_filter(|_, a| a);
    for _ in 0..n_steps {
        out = out.map_filter(|x, a| a * C64::new(1.0, gamma * x * x * x / n_steps as f64));
    }
    Ok(out)
}

/// Second-order Taylor form `(1 + i gamma x^3 - gamma^2 x^6 / 2) psi`.
pub fn taylor_second_order(psi: &PositionWaveFunction, gamma: f64) -> PositionWaveFunction {
    psi.map_filter(|x, a| {
        let h = x * x * x;
        a * C64::new(1.0 - gamma * gamma * h * h / 2.0, gamma * h)
    })
}
