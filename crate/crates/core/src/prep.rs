//! Optical preparation of the 03 resource state and the elementary
//! non-Gaussian building blocks (photon subtraction, photon addition,
//! displacement by a beam splitter).
//!
//! Pipeline: a two-mode squeezed vacuum with `y = tanh r`, the three-fold
//! subtraction filter `Y = (a + b1)(a + b2)(a + b3)` on the second arm, then a
//! vacuum projection of that same arm. The first arm is left in
//!
//! ```text
//! b1 b2 b3 |0> + y (b1 b2 + b2 b3 + b3 b1) |1> + sqrt(2) y^2 (b1 + b2 + b3) |2> + sqrt(6) y^3 |3>
//! ```
//!
//! With the `b_k` equal to `c` times the cube roots of `i` the `|1>` and
//! `|2>` terms cancel and the state is `|0> - i sqrt(6) (y/c)^3 |3>`.
//! Negating all three roots (the [`RootBranch::Negative`] branch) flips the
//! relative sign, which is what the target `a = i sqrt(3) a0 / 2` with
//! `a0 > 0` needs. In the rescaled convention where `sqrt(6)` and the sign are
//! folded into `c`, the amplitude ratio reads `i (y / c')^3` with
//! `c' = -c / 6^{1/6}`.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{
    beamsplitter, beamsplitter_with_phase, displacement_matrix, lowering, postselect, tmss,
    two_mode_squeeze, DensityMatrix, FockVector, Mode, TwoModeFockVector, DEFAULT_TAIL_GUARD,
};

/// Which set of cube roots the three displacement amplitudes use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootBranch {
    /// `c e^{i pi/6}, c e^{i 5pi/6}, c e^{i 3pi/2}`; product `i c^3`.
    Positive,
    /// The negated roots; product `-i c^3`.
    Negative,
}

/// Parameters of the 03 preparation: TMSS squeezing `r` and displacement
/// magnitude `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrepParams {
    r: f64,
    c: f64,
    branch: RootBranch,
}

impl PrepParams {
    pub fn new(r: f64, c: f64, branch: RootBranch) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter(format!("displacement magnitude c must be > 0, got {c}")));
        }
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::InvalidParameter(format!("squeezing r must be >= 0, got {r}")));
        }
        Ok(PrepParams { r, c, branch })
    }

    pub fn from_y(y: f64, c: f64, branch: RootBranch) -> Result<Self> {
        if !(0.0..1.0).contains(&y) {
            return Err(Error::InvalidParameter(format!("y = tanh r must lie in [0, 1), got {y}")));
        }
        PrepParams::new(y.atanh(), c, branch)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn y(&self) -> f64 {
        self.r.tanh()
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn branch(&self) -> RootBranch {
        self.branch
    }

    pub fn betas(&self) -> [C64; 3] {
        let sign = match self.branch {
            RootBranch::Positive => 1.0,
            RootBranch::Negative => -1.0,
        };
        [PI / 6.0, 5.0 * PI / 6.0, 3.0 * PI / 2.0].map(|phi| C64::from_polar(sign * self.c, phi))
    }

    /// Amplitude ratio `<3|psi> / <0|psi>` of the prepared state.
    pub fn amplitude_ratio(&self) -> C64 {
        let [b1, b2, b3] = self.betas();
        6f64.sqrt() * self.y().powi(3) / (b1 * b2 * b3)
    }
}

/// Unnormalized `<0|_2 (1 x Y) |TMSS>` (without the `sech r` prefactor) for
/// arbitrary `b_k`: coefficients of `|0>..|3>` on the first arm.
pub fn filtered_vacuum_projection(betas: [C64; 3], y: f64) -> [C64; 4] {
    let [b1, b2, b3] = betas;
    [
        b1 * b2 * b3,
        (b1 * b2 + b2 * b3 + b3 * b1) * y,
        (b1 + b2 + b3) * (2f64.sqrt() * y * y),
        C64::new(6f64.sqrt() * y.powi(3), 0.0),
    ]
}

/// Scales `v` to unit norm with a real, non-negative vacuum amplitude.
fn fix_phase(v: &FockVector) -> Result<FockVector> {
    let v = v.normalized()?;
    let c0 = v.get(0);
    if c0.norm() > 0.0 {
        Ok(v.scaled(c0.conj() / c0.norm()))
    } else {
        Ok(v)
    }
}

/// Closed-form prepared state on levels `0..=3`, normalized with a real
/// positive vacuum amplitude.
pub fn prepare_on3_ideal(params: &PrepParams) -> Result<FockVector> {
    let coeffs = filtered_vacuum_projection(params.betas(), params.y());
    fix_phase(&FockVector::from_coeffs(coeffs.to_vec())?)
}

/// How the subtraction filter is applied in the Fock simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterPath {
    /// `(a + b1)(a + b2)(a + b3)` as a ladder polynomial.
    Direct,
    /// `D(-b1) a D(b1 - b2) a D(b2 - b3) a D(b3)`, equal to the direct filter
    /// up to a scalar.
    DisplacedChain,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrepOutcome {
    /// Normalized first-arm state, real positive vacuum amplitude.
    pub state: FockVector,
    /// Probability of the vacuum projection given the filtered TMSS.
    pub success_probability: f64,
    /// Largest top-two-level population seen along the pipeline.
    pub tail_mass: f64,
    /// Cutoff-guard messages; empty when every stage stayed below the guard.
    pub warnings: Vec<String>,
}

fn filter_matrix(params: &PrepParams, cutoff: usize, path: FilterPath) -> Array2<C64> {
    let a = lowering(cutoff);
    let eye = Array2::<C64>::eye(cutoff + 1);
    let [b1, b2, b3] = params.betas();
    match path {
        FilterPath::Direct => {
            let f = |b: C64| &a + &eye.mapv(|z| z * b);
            f(b1).dot(&f(b2)).dot(&f(b3))
        }
        FilterPath::DisplacedChain => {
            let d = |b: C64| displacement_matrix(b, cutoff);
            d(-b1).dot(&a).dot(&d(b1 - b2)).dot(&a).dot(&d(b2 - b3)).dot(&a).dot(&d(b3))
        }
    }
}

/// Full Fock-space simulation of the preparation pipeline.
pub fn prepare_on3_circuit(params: &PrepParams, cutoff: usize, path: FilterPath) -> Result<PrepOutcome> {
    let mut warnings = Vec::new();
    let source = tmss(params.r(), cutoff, cutoff);
    let mut tail = source.tail_mass(Mode::Second);
    if let Err(e) = source.check_guard(DEFAULT_TAIL_GUARD) {
        warnings.push(format!("two-mode squeezed vacuum: {e}"));
    }
    let filtered = source.apply_to(Mode::Second, &filter_matrix(params, cutoff, path));
    tail = tail.max(filtered.tail_mass(Mode::Second));
    if let Err(e) = filtered.check_guard(DEFAULT_TAIL_GUARD) {
        warnings.push(format!("after subtraction filter: {e}"));
    }
    let (residue, p) = postselect(&filtered, Mode::Second, 0)?;
    if residue.norm_sqr() == 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok(PrepOutcome { state: fix_phase(&residue)?, success_probability: p, tail_mass: tail, warnings })
}

/// Chooses `c` (at the given `y`) so that the pipeline yields the 03 state
/// with `a = i sqrt(3) a0 / 2`, i.e. `sqrt(6) (y/c)^3 = sqrt(3) |a0| / 2`.
///
/// The branch follows the sign of `a0`. `a0 = 0` returns the vacuum recipe
/// (no squeezing, `c = 1`).
pub fn solve_prep_params(a0_target: f64, y: f64) -> Result<PrepParams> {
    if a0_target == 0.0 {
        return PrepParams::new(0.0, 1.0, RootBranch::Positive);
    }
    if !(y > 0.0 && y < 1.0) {
        return Err(Error::InvalidParameter(format!("y must lie in (0, 1), got {y}")));
    }
    let c = y * (2.0 * 2f64.sqrt() / a0_target.abs()).cbrt();
    let branch = if a0_target > 0.0 { RootBranch::Negative } else { RootBranch::Positive };
    PrepParams::from_y(y, c, branch)
}

fn check_small(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v <= 0.2) {
        return Err(Error::InvalidParameter(format!("{name} must lie in (0, 0.2], got {v}")));
    }
    Ok(())
}

/// Photon subtraction: `BS(theta)` with a vacuum ancilla, then a single
/// photon count in the ancilla. Returns the normalized conditional state
/// and the click probability.
///
/// Exactly, the conditional state is `cos(theta)^n a psi`, so the
/// fidelity deficit relative to the normalized `a psi` is at most
/// `K theta^2` with `K = Var(n) theta^2 / 8`, evaluated on `a psi`; the
/// probability is `theta^2 <n>` to leading order.
pub fn photon_subtract_bs(psi: &FockVector, theta: f64) -> Result<(FockVector, f64)> {
    check_small("theta", theta)?;
    if crate::fock::annihilate(psi).norm_sqr() == 0.0 {
        return Err(Error::NothingToSubtract);
    }
    let c = psi.cutoff();
    let joint = TwoModeFockVector::product(&psi.normalized()?, &FockVector::vacuum(c));
    let (out, p) = postselect(&beamsplitter(&joint, theta), Mode::Second, 1)?;
    Ok((out.normalized()?, p))
}

/// Photon addition: weak two-mode squeezing `S_2(r)` with a vacuum ancilla,
/// then a single photon count. The conditional state is
/// `a^dag cosh(r)^{-n} psi`; the probability is `r^2 (<n> + 1)` to leading
/// order.
pub fn photon_add_via_s2(psi: &FockVector, r: f64) -> Result<(FockVector, f64)> {
    check_small("r", r)?;
    let c = psi.cutoff();
    let joint = TwoModeFockVector::product(&psi.normalized()?, &FockVector::vacuum(c));
    let (out, p) = postselect(&two_mode_squeeze(&joint, r), Mode::Second, 1)?;
    Ok((out.normalized()?, p))
}

/// `|| (1 x a)|TMSS> - (y a^dag x 1)|TMSS> ||`.
pub fn tmss_arm_identity_residual(r: f64, cutoff: usize) -> f64 {
    let t = tmss(r, cutoff, cutoff);
    let lhs = t.annihilate(Mode::Second);
    let rhs = t.create(Mode::First);
    let y = r.tanh();
    lhs.coeffs()
        .iter()
        .zip(rhs.coeffs().iter())
        .map(|(a, b)| (a - b * y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DisplacementReport {
    /// Reduced output state of the signal mode.
    pub output: DensityMatrix,
    /// Target displacement `i z sin(theta)`.
    pub alpha: C64,
    /// `sqrt(<target|rho|target>)` with `target = D(alpha) psi`.
    pub fidelity: f64,
    pub purity: f64,
    /// Cutoff used for the coherent ancilla.
    pub ancilla_cutoff: usize,
}

/// Displacement by mixing with a strong coherent beam `|z>` on a weak beam
/// splitter and discarding the ancilla.
///
/// The coupler is the phase-`pi/2` beam splitter, which maps
/// `a -> a cos(theta) + i b sin(theta)`, so the signal is displaced by
/// `alpha = i z sin(theta)`. The signal cutoff is that of `psi`; pad `psi`
/// so that `D(alpha) psi` fits.
pub fn displace_by_bs(psi: &FockVector, z: C64, theta: f64) -> Result<DisplacementReport> {
    let psi = psi.normalized()?;
    let alpha = C64::new(0.0, 1.0) * z * theta.sin();
    let zn = z.norm();
    let ancilla_cutoff = (zn * zn + 12.0 * zn + 20.0).ceil() as usize;
    let ancilla = FockVector::coherent(z, ancilla_cutoff);
    ancilla.check_guard(DEFAULT_TAIL_GUARD)?;
    let joint = TwoModeFockVector::product(&psi, &ancilla);
    let out = beamsplitter_with_phase(&joint, theta, PI / 2.0);
    let rho = out.reduce_first();
    let target = crate::fock::displace(&psi, alpha);
    let fidelity = rho.fidelity_with_pure(&target)?;
    let purity = rho.purity();
    Ok(DisplacementReport { output: rho, alpha, fidelity, purity, ancilla_cutoff })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::annihilate;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn closed_form_with_generic_betas() {
        let v = filtered_vacuum_projection([c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)], 0.5);
        assert!((v[1] - c(5.5, 0.0)).norm() < 1e-15);
        assert!((v[0] - c(6.0, 0.0)).norm() < 1e-15);
        assert!((v[2] - c(6.0 * 2f64.sqrt() * 0.25, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn root_invariants() {
        for branch in [RootBranch::Positive, RootBranch::Negative] {
            for cc in [0.1, 1.0, 2.7] {
                let p = PrepParams::new(0.3, cc, branch).unwrap();
                let [b1, b2, b3] = p.betas();
                let sign = if branch == RootBranch::Positive { 1.0 } else { -1.0 };
                assert!((b1 * b2 * b3 - c(0.0, sign * cc.powi(3))).norm() < 1e-12 * cc.powi(3).max(1.0));
                assert!((b1 + b2 + b3).norm() < 1e-12 * cc.max(1.0));
                assert!((b1 * b2 + b2 * b3 + b3 * b1).norm() < 1e-12 * (cc * cc).max(1.0));
            }
        }
    }

    #[test]
    fn ideal_state_structure() {
        let p = PrepParams::from_y(0.5, 1.0, RootBranch::Positive).unwrap();
        let v = prepare_on3_ideal(&p).unwrap();
        assert!(v.get(1).norm() < 1e-12 && v.get(2).norm() < 1e-12);
        let ratio = v.get(3) / v.get(0);
        assert!((ratio - c(0.0, -(6f64.sqrt()) * 0.125)).norm() < 1e-12);
        let vac = prepare_on3_ideal(&PrepParams::new(0.0, 1.3, RootBranch::Positive).unwrap()).unwrap();
        assert_eq!(vac, FockVector::vacuum(3));
        assert!(PrepParams::new(0.5, 0.0, RootBranch::Positive).is_err());
    }

    #[test]
    fn solver_round_trip_and_scaling() {
        let p = solve_prep_params(0.1, 0.5).unwrap();
        let v = prepare_on3_ideal(&p).unwrap();
        let ratio = v.get(3) / v.get(0);
        assert!((ratio - c(0.0, 3f64.sqrt() * 0.05)).norm() < 1e-10);
        assert!((p.amplitude_ratio() - ratio).norm() < 1e-12);

        let bigger = solve_prep_params(0.2, 0.5).unwrap();
        assert!(bigger.c() < p.c());
        let (y1, y2) = (0.9, 0.99);
        let r = solve_prep_params(0.1, y2).unwrap().c() / solve_prep_params(0.1, y1).unwrap().c();
        assert!((r - y2 / y1).abs() < 1e-12);

        let vac = solve_prep_params(0.0, 0.5).unwrap();
        assert_eq!(prepare_on3_ideal(&vac).unwrap(), FockVector::vacuum(3));
        assert!(solve_prep_params(0.1, 1.0).is_err());
        let neg = prepare_on3_ideal(&solve_prep_params(-0.1, 0.5).unwrap()).unwrap();
        assert!((neg.get(3) / neg.get(0) - c(0.0, -(3f64.sqrt()) * 0.05)).norm() < 1e-10);
    }

    #[test]
    fn circuit_matches_closed_form() {
        let params = PrepParams::new(0.55, 1.0, RootBranch::Positive).unwrap();
        let ideal = prepare_on3_ideal(&params).unwrap().with_cutoff(40);
        let direct = prepare_on3_circuit(&params, 40, FilterPath::Direct).unwrap();
        assert!(direct.state.fidelity(&ideal).unwrap() >= 1.0 - 1e-6);
        assert!(direct.warnings.is_empty());
        assert!((0.0..=1.0).contains(&direct.success_probability));
        let chain = prepare_on3_circuit(&params, 40, FilterPath::DisplacedChain).unwrap();
        assert!(chain.state.fidelity(&direct.state).unwrap() >= 1.0 - 1e-8);

        let zero_r = PrepParams::new(0.0, 1.0, RootBranch::Positive).unwrap();
        let out = prepare_on3_circuit(&zero_r, 20, FilterPath::Direct).unwrap();
        assert!(out.state.fidelity(&FockVector::vacuum(20)).unwrap() > 1.0 - 1e-14);
    }

    #[test]
    fn brute_force_filter_on_random_betas() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..5 {
            let betas = [0, 1, 2].map(|_| c(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)));
            let r: f64 = rng.gen_range(0.1..0.6);
            let y = r.tanh();
            let t = tmss(r, 40, 40);
            // brute force: three ladder applications on the second arm
            let mut v = t.clone();
            for b in betas.iter().rev() {
                let av = v.annihilate(Mode::Second);
                v = TwoModeFockVector::from_coeffs(av.coeffs() + &v.coeffs().mapv(|z| z * b)).unwrap();
            }
            let (res, _) = postselect(&v, Mode::Second, 0).unwrap();
            let closed = filtered_vacuum_projection(betas, y);
            let sech = r.cosh().recip();
            for n in 0..=40 {
                let expected = if n < 4 { closed[n] * sech } else { c(0.0, 0.0) };
                assert!((res.get(n) - expected).norm() < 1e-10, "n={n}");
            }
        }
    }

    #[test]
    fn subtraction_element() {
        let (out, p) = photon_subtract_bs(&FockVector::basis(1, 10), 0.01).unwrap();
        assert!((out.fidelity(&FockVector::vacuum(10)).unwrap() - 1.0).abs() < 1e-14);
        assert!((p - 0.01f64.sin().powi(2)).abs() < 1e-14);

        let coh = FockVector::coherent(c(0.8, 0.0), 30);
        let theta = 0.01;
        let (out, p) = photon_subtract_bs(&coh, theta).unwrap();
        let target = annihilate(&coh);
        let f = out.fidelity(&target).unwrap();
        assert!(f >= 1.0 - 1e-3);
        assert!(1.0 - f <= theta * theta);
        assert!((p / (theta * theta * 0.64) - 1.0).abs() < 1e-3);
        assert_eq!(photon_subtract_bs(&FockVector::vacuum(5), 0.1), Err(Error::NothingToSubtract));
        assert!(photon_subtract_bs(&coh, 0.5).is_err());
    }

    #[test]
    fn addition_element() {
        let (out, p) = photon_add_via_s2(&FockVector::vacuum(10), 0.01).unwrap();
        assert!((out.fidelity(&FockVector::basis(1, 10)).unwrap() - 1.0).abs() < 1e-14);
        assert!((p / 1e-4 - 1.0).abs() < 1e-3);
        let coh = FockVector::coherent(c(0.5, 0.2), 30);
        let (out, p) = photon_add_via_s2(&coh, 0.02).unwrap();
        let target = crate::fock::create(&coh);
        assert!(1.0 - out.fidelity(&target).unwrap() <= 0.02 * 0.02);
        let n = coh.mean_photon_number();
        assert!((p / (0.02f64.powi(2) * (n + 1.0)) - 1.0).abs() < 2e-3);
        assert!(tmss_arm_identity_residual(0.55, 40) < 1e-10);
    }

    #[test]
    fn displacement_element() {
        let psi = prepare_on3_ideal(&solve_prep_params(0.1, 0.5).unwrap()).unwrap().with_cutoff(25);
        let vac = FockVector::vacuum(25);
        let rep = displace_by_bs(&vac, c(0.0, 0.0), 0.02).unwrap();
        assert!((rep.fidelity - 1.0).abs() < 1e-12 && (rep.purity - 1.0).abs() < 1e-12);

        let alpha = 0.3;
        let mut last = 0.0;
        for theta in [0.04, 0.02, 0.01] {
            // alpha = i z sin(theta)  =>  z = -i alpha / sin(theta)
            let z = c(0.0, -alpha / f64::sin(theta));
            let rep = displace_by_bs(&psi, z, theta).unwrap();
            assert!((rep.alpha - c(alpha, 0.0)).norm() < 1e-12);
            if theta == 0.02 {
                assert!(rep.fidelity >= 0.99);
            }
            assert!(rep.fidelity > last, "theta {theta}: {} <= {last}", rep.fidelity);
            last = rep.fidelity;
        }
    }
}
