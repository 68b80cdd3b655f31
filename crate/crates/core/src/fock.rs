//! Truncated photon-number-basis states and evolutions for one and two modes.
//!
//! Evolutions exponentiate the truncated generator. Two-mode generators
//! that conserve a photon-number combination (total number for the beam
//! splitter, number difference for the two-mode squeezer) are exponentiated
//! block by block, which is exact for the truncated generator and keeps every
//! dense block no larger than one mode's cutoff.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::linalg::expm;
use crate::special::hermite_functions;
use crate::wavefunction::{PositionWaveFunction, BOUNDARY_LIMIT};

/// Default threshold on the population of the top two Fock levels.
pub const DEFAULT_TAIL_GUARD: f64 = 1e-10;
/// Default per-mode cutoff for preparation simulations.
pub const DEFAULT_CUTOFF: usize = 40;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Single-mode state `sum_n c_n |n>` for `n = 0..=cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    coeffs: Array1<C64>,
}

impl FockVector {
    pub fn from_coeffs(coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter("a Fock vector needs at least one level".into()));
        }
        Ok(FockVector { coeffs: Array1::from(coeffs) })
    }

    pub fn zeros(cutoff: usize) -> Self {
        FockVector { coeffs: Array1::zeros(cutoff + 1) }
    }

    pub fn basis(n: usize, cutoff: usize) -> Self {
        assert!(n <= cutoff, "level {n} above cutoff {cutoff}");
        let mut v = FockVector::zeros(cutoff);
        v.coeffs[n] = C64::new(1.0, 0.0);
        v
    }

    pub fn vacuum(cutoff: usize) -> Self {
        FockVector::basis(0, cutoff)
    }

    /// Analytic coherent-state coefficients `e^{-|a|^2/2} a^n / sqrt(n!)`.
    pub fn coherent(alpha: C64, cutoff: usize) -> Self {
        let mut coeffs = Vec::with_capacity(cutoff + 1);
        let mut c = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
        // large |alpha|: start from log-magnitudes to avoid underflow
        if alpha.norm_sqr() > 600.0 {
            let (r, phi) = alpha.to_polar();
            let mut log_fact = 0.0;
            for n in 0..=cutoff {
                if n > 0 {
                    log_fact += (n as f64).ln();
                }
                let log_mag = -r * r / 2.0 + n as f64 * r.ln() - 0.5 * log_fact;
                coeffs.push(C64::from_polar(log_mag.exp(), n as f64 * phi));
            }
            return FockVector { coeffs: Array1::from(coeffs) };
        }
        for n in 0..=cutoff {
            if n > 0 {
                c *= alpha / (n as f64).sqrt();
            }
            coeffs.push(c);
        }
        FockVector { coeffs: Array1::from(coeffs) }
    }

    pub fn cutoff(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &Array1<C64> {
        &self.coeffs
    }

    pub fn get(&self, n: usize) -> C64 {
        self.coeffs.get(n).copied().unwrap_or(ZERO)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if !(n > 0.0) {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scaled(C64::new(n.sqrt().recip(), 0.0)))
    }

    pub fn scaled(&self, s: C64) -> Self {
        FockVector { coeffs: self.coeffs.mapv(|c| c * s) }
    }

    /// Zero-padded or truncated copy with the given cutoff.
    pub fn with_cutoff(&self, cutoff: usize) -> Self {
        let mut out = FockVector::zeros(cutoff);
        for n in 0..=cutoff.min(self.cutoff()) {
            out.coeffs[n] = self.coeffs[n];
        }
        out
    }

    /// `<self|other>`; missing levels count as zero.
    pub fn inner(&self, other: &Self) -> C64 {
        self.coeffs.iter().zip(other.coeffs.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|<a|b>| / (|a| |b|)`.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        let (na, nb) = (self.norm_sqr(), other.norm_sqr());
        if na <= 0.0 || nb <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(self.inner(other).norm() / (na * nb).sqrt())
    }

    pub fn mean_photon_number(&self) -> f64 {
        let w: f64 = self.coeffs.iter().enumerate().map(|(n, c)| n as f64 * c.norm_sqr()).sum();
        w / self.norm_sqr()
    }

    /// Relative population of the top two levels.
    pub fn tail_mass(&self) -> f64 {
        let n = self.coeffs.len();
        let top: f64 = self.coeffs.iter().skip(n.saturating_sub(2)).map(|c| c.norm_sqr()).sum();
        top / self.norm_sqr().max(f64::MIN_POSITIVE)
    }

    pub fn check_guard(&self, guard: f64) -> Result<()> {
        let tail = self.tail_mass();
        if tail > guard {
            return Err(Error::Cutoff { tail, guard, cutoff: self.cutoff() });
        }
        Ok(())
    }

    pub fn apply(&self, op: &Array2<C64>) -> Self {
        FockVector { coeffs: op.dot(&self.coeffs) }
    }

    /// `<v|[a, a^dag]|v> / <v|v>` evaluated with the truncated operators.
    pub fn commutator_expectation(&self) -> f64 {
        let a = lowering(self.cutoff());
        let ad = a.t().mapv(|z| z.conj());
        let comm = a.dot(&ad) - ad.dot(&a);
        (self.inner(&self.apply(&comm)) / self.norm_sqr()).re
    }
}

/// Truncated lowering operator matrix.
pub fn lowering(cutoff: usize) -> Array2<C64> {
    let mut a = Array2::zeros((cutoff + 1, cutoff + 1));
    for n in 1..=cutoff {
        a[[n - 1, n]] = C64::new((n as f64).sqrt(), 0.0);
    }
    a
}

fn raising(cutoff: usize) -> Array2<C64> {
    lowering(cutoff).reversed_axes()
}

/// `(a v)_n = sqrt(n+1) v_{n+1}`; unnormalized.
pub fn annihilate(v: &FockVector) -> FockVector {
    let c = v.cutoff();
    let mut out = FockVector::zeros(c);
    for n in 0..c {
        out.coeffs[n] = v.coeffs[n + 1] * ((n + 1) as f64).sqrt();
    }
    out
}

/// `(a^dag v)_n = sqrt(n) v_{n-1}`; the level pushed past the cutoff is lost.
pub fn create(v: &FockVector) -> FockVector {
    let c = v.cutoff();
    let mut out = FockVector::zeros(c);
    for n in 1..=c {
        out.coeffs[n] = v.coeffs[n - 1] * (n as f64).sqrt();
    }
    out
}

/// `D(beta) = exp(beta a^dag - beta^* a)` on the truncated space.
pub fn displacement_matrix(beta: C64, cutoff: usize) -> Array2<C64> {
    let a = lowering(cutoff);
    let ad = raising(cutoff);
    expm(&(ad.mapv(|z| z * beta) - a.mapv(|z| z * beta.conj())))
}

pub fn displace(v: &FockVector, beta: C64) -> FockVector {
    if beta == ZERO {
        return v.clone();
    }
    v.apply(&displacement_matrix(beta, v.cutoff()))
}

/// `S(r) = exp(r (a^2 - a^dag^2) / 2)`; `r > 0` squeezes `x`.
pub fn single_mode_squeeze(v: &FockVector, r: f64) -> FockVector {
    if r == 0.0 {
        return v.clone();
    }
    let a = lowering(v.cutoff());
    let a2 = a.dot(&a);
    let ad2 = a2.t().to_owned();
    v.apply(&expm(&(a2 - ad2).mapv(|z| z * (r / 2.0))))
}

/// `sum_n c_n psi_n(x)` sampled on the grid.
pub fn fock_to_position(v: &FockVector, grid: &Grid) -> Result<PositionWaveFunction> {
    let cutoff = v.cutoff();
    let psi = PositionWaveFunction::from_fn(*grid, |x| {
        hermite_functions(cutoff, x)
            .iter()
            .zip(v.coeffs.iter())
            .map(|(h, c)| c * *h)
            .sum()
    });
    psi.check_boundary(BOUNDARY_LIMIT)?;
    if (v.norm_sqr() - 1.0).abs() < 1e-8 {
        psi.assume_normalized()
    } else {
        Ok(psi)
    }
}

/// Which mode of a two-mode state an operation addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    First,
    Second,
}

/// Two-mode state `sum c_{mn} |m>|n>`; rows index the first mode.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeFockVector {
    coeffs: Array2<C64>,
}

impl TwoModeFockVector {
    pub fn from_coeffs(coeffs: Array2<C64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter("empty two-mode coefficient matrix".into()));
        }
        Ok(TwoModeFockVector { coeffs })
    }

    pub fn zeros(cutoff1: usize, cutoff2: usize) -> Self {
        TwoModeFockVector { coeffs: Array2::zeros((cutoff1 + 1, cutoff2 + 1)) }
    }

    pub fn vacuum(cutoff1: usize, cutoff2: usize) -> Self {
        TwoModeFockVector::basis(0, 0, cutoff1, cutoff2)
    }

    pub fn basis(m: usize, n: usize, cutoff1: usize, cutoff2: usize) -> Self {
        let mut v = TwoModeFockVector::zeros(cutoff1, cutoff2);
        v.coeffs[[m, n]] = C64::new(1.0, 0.0);
        v
    }

    pub fn product(first: &FockVector, second: &FockVector) -> Self {
        let coeffs = Array2::from_shape_fn((first.cutoff() + 1, second.cutoff() + 1), |(m, n)| {
            first.coeffs[m] * second.coeffs[n]
        });
        TwoModeFockVector { coeffs }
    }

    pub fn cutoffs(&self) -> (usize, usize) {
        (self.coeffs.nrows() - 1, self.coeffs.ncols() - 1)
    }

    pub fn coeffs(&self) -> &Array2<C64> {
        &self.coeffs
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if !(n > 0.0) {
            return Err(Error::ZeroNorm);
        }
        Ok(TwoModeFockVector { coeffs: self.coeffs.mapv(|c| c / n.sqrt()) })
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.coeffs.iter().zip(other.coeffs.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        let (na, nb) = (self.norm_sqr(), other.norm_sqr());
        if na <= 0.0 || nb <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(self.inner(other).norm() / (na * nb).sqrt())
    }

    pub fn total_photon_number(&self) -> f64 {
        let w: f64 = self
            .coeffs
            .indexed_iter()
            .map(|((m, n), c)| (m + n) as f64 * c.norm_sqr())
            .sum();
        w / self.norm_sqr()
    }

    /// Relative population of the top two levels of the given mode.
    pub fn tail_mass(&self, mode: Mode) -> f64 {
        let (c1, c2) = self.cutoffs();
        let top: f64 = self
            .coeffs
            .indexed_iter()
            .filter(|((m, n), _)| match mode {
                Mode::First => m + 1 >= c1,
                Mode::Second => n + 1 >= c2,
            })
            .map(|(_, c)| c.norm_sqr())
            .sum();
        top / self.norm_sqr().max(f64::MIN_POSITIVE)
    }

    pub fn check_guard(&self, guard: f64) -> Result<()> {
        let (c1, c2) = self.cutoffs();
        for (mode, cutoff) in [(Mode::First, c1), (Mode::Second, c2)] {
            let tail = self.tail_mass(mode);
            if tail > guard {
                return Err(Error::Cutoff { tail, guard, cutoff });
            }
        }
        Ok(())
    }

    /// Applies a single-mode operator matrix to one mode.
    pub fn apply_to(&self, mode: Mode, op: &Array2<C64>) -> Self {
        let coeffs = match mode {
            Mode::First => op.dot(&self.coeffs),
            Mode::Second => self.coeffs.dot(&op.t()),
        };
        TwoModeFockVector { coeffs }
    }

    pub fn annihilate(&self, mode: Mode) -> Self {
        let c = match mode {
            Mode::First => self.cutoffs().0,
            Mode::Second => self.cutoffs().1,
        };
        self.apply_to(mode, &lowering(c))
    }

    pub fn create(&self, mode: Mode) -> Self {
        let c = match mode {
            Mode::First => self.cutoffs().0,
            Mode::Second => self.cutoffs().1,
        };
        self.apply_to(mode, &raising(c))
    }

    /// Reduced state of the first mode, tracing out the second.
    pub fn reduce_first(&self) -> DensityMatrix {
        let rho = self.coeffs.dot(&self.coeffs.t().mapv(|z| z.conj()));
        DensityMatrix { rho }
    }
}

/// Exponentiates a truncated two-mode generator that is block diagonal:
/// `blocks` lists basis states `(m, n)` of each invariant subspace and
/// `element(from, to)` gives the generator matrix element.
fn evolve_blocks(
    v: &TwoModeFockVector,
    blocks: Vec<Vec<(usize, usize)>>,
    element: impl Fn((usize, usize), (usize, usize)) -> C64,
) -> TwoModeFockVector {
    let (c1, c2) = v.cutoffs();
    let mut out = TwoModeFockVector::zeros(c1, c2);
    for basis in blocks {
        let amps: Vec<C64> = basis.iter().map(|&(m, n)| v.coeffs[[m, n]]).collect();
        if amps.iter().all(|a| *a == ZERO) {
            continue;
        }
        let d = basis.len();
        let gen = Array2::from_shape_fn((d, d), |(i, j)| element(basis[j], basis[i]));
        let evolved = expm(&gen).dot(&Array1::from(amps));
        for (k, &(m, n)) in basis.iter().enumerate() {
            out.coeffs[[m, n]] = evolved[k];
        }
    }
    out
}

/// `BS(theta, phi) = exp(theta (e^{i phi} a^dag b - e^{-i phi} a b^dag))`.
///
/// `phi = 0` is the real beam splitter `exp(theta (a^dag b - a b^dag))`,
/// which maps `a -> a cos(theta) + b sin(theta)`; `phi = pi/2` gives
/// `a -> a cos(theta) + i b sin(theta)`.
pub fn beamsplitter_with_phase(v: &TwoModeFockVector, theta: f64, phi: f64) -> TwoModeFockVector {
    let (c1, c2) = v.cutoffs();
    let blocks = (0..=c1 + c2)
        .map(|total| {
            (total.saturating_sub(c2)..=c1.min(total)).map(|m| (m, total - m)).collect()
        })
        .collect();
    let up = C64::from_polar(theta, phi);
    evolve_blocks(v, blocks, |(m, n), (m2, n2)| {
        // a^dag b: (m, n) -> (m+1, n-1)
        if m2 == m + 1 && n2 + 1 == n {
            up * (((m + 1) * n) as f64).sqrt()
        // -a b^dag: (m, n) -> (m-1, n+1)
        } else if m2 + 1 == m && n2 == n + 1 {
            -up.conj() * ((m * (n + 1)) as f64).sqrt()
        } else {
            ZERO
        }
    })
}

/// `BS(theta) = exp(theta (a^dag b - a b^dag))`.
pub fn beamsplitter(v: &TwoModeFockVector, theta: f64) -> TwoModeFockVector {
    beamsplitter_with_phase(v, theta, 0.0)
}

/// `S_2(r) = exp(r (a^dag b^dag - a b))`.
pub fn two_mode_squeeze(v: &TwoModeFockVector, r: f64) -> TwoModeFockVector {
    if r == 0.0 {
        return v.clone();
    }
    let (c1, c2) = v.cutoffs();
    let blocks = (-(c2 as isize)..=c1 as isize)
        .map(|d| {
            let n_lo = (-d).max(0) as usize;
            let n_hi = (c2 as isize).min(c1 as isize - d) as usize;
            (n_lo..=n_hi).map(|n| ((n as isize + d) as usize, n)).collect()
        })
        .collect();
    evolve_blocks(v, blocks, |(m, n), (m2, n2)| {
        if m2 == m + 1 && n2 == n + 1 {
            C64::new(r * (((m + 1) * (n + 1)) as f64).sqrt(), 0.0)
        } else if m2 + 1 == m && n2 + 1 == n {
            C64::new(-r * ((m * n) as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    })
}

/// Two-mode squeezed vacuum `sech r sum_n (tanh r)^n |n>|n>`.
pub fn tmss(r: f64, cutoff1: usize, cutoff2: usize) -> TwoModeFockVector {
    let mut v = TwoModeFockVector::zeros(cutoff1, cutoff2);
    let (sech, y) = (r.cosh().recip(), r.tanh());
    let mut c = sech;
    for n in 0..=cutoff1.min(cutoff2) {
        v.coeffs[[n, n]] = C64::new(c, 0.0);
        c *= y;
    }
    v
}

/// Contracts `mode` against `<outcome|`; returns the unnormalized residue of
/// the other mode and its squared norm relative to the input norm.
pub fn postselect(v: &TwoModeFockVector, mode: Mode, outcome: usize) -> Result<(FockVector, f64)> {
    let (c1, c2) = v.cutoffs();
    let residue: Vec<C64> = match mode {
        Mode::First if outcome <= c1 => v.coeffs.row(outcome).to_vec(),
        Mode::Second if outcome <= c2 => v.coeffs.column(outcome).to_vec(),
        _ => {
            return Err(Error::InvalidParameter(format!(
                "outcome {outcome} exceeds the cutoff of the measured mode"
            )))
        }
    };
    let residue = FockVector::from_coeffs(residue)?;
    let p = residue.norm_sqr() / v.norm_sqr();
    Ok((residue, p))
}

/// Single-mode density operator on a truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    rho: Array2<C64>,
}

impl DensityMatrix {
    pub fn pure(v: &FockVector) -> Self {
        let c = v.coeffs();
        DensityMatrix {
            rho: Array2::from_shape_fn((c.len(), c.len()), |(i, j)| c[i] * c[j].conj()),
        }
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.rho
    }

    pub fn trace(&self) -> f64 {
        self.rho.diag().iter().map(|z| z.re).sum()
    }

    /// `Tr rho^2 / (Tr rho)^2`.
    pub fn purity(&self) -> f64 {
        let t = self.trace();
        self.rho.iter().map(|z| z.norm_sqr()).sum::<f64>() / (t * t)
    }

    /// `sqrt(<phi|rho|phi>)` for normalized `rho` and `phi`.
    pub fn fidelity_with_pure(&self, phi: &FockVector) -> Result<f64> {
        let phi = phi.with_cutoff(self.rho.nrows() - 1);
        let n = phi.norm_sqr();
        if n <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        let rp = self.rho.dot(phi.coeffs());
        let v: C64 = phi.coeffs().iter().zip(rp.iter()).map(|(a, b)| a.conj() * b).sum();
        Ok((v.re / (n * self.trace())).max(0.0).sqrt())
    }
}
