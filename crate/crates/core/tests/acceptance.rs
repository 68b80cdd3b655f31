//! Acceptance criteria, one line per criterion. Runs at the default grid
//! (4096 points on [-16, 16]) and Fock cutoff 40.

use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64 as C64;

use ongate::circuit::{
    acceptance_mass, effective_operator, feed_forward, homodyne_density, homodyne_probability, product_step,
    quartic_effective, run_deterministic, run_postselected_at, target_output, taylor_second_order,
    unitarized_filter, PostSelectSpec, Resource,
};
use ongate::fock::{FockVector, DEFAULT_CUTOFF};
use ongate::grid::{DEFAULT_N_POINTS, DEFAULT_X_MAX};
use ongate::metrics::{
    avg_gate_fidelity_for, coherent_gate_fidelity, fidelity_sweeps, gate_fidelity_q, state_fidelity, SweepKind,
};
use ongate::prep::{
    displace_by_bs, photon_add_via_s2, photon_subtract_bs, prepare_on3_circuit, prepare_on3_ideal,
    solve_prep_params, tmss_arm_identity_residual, FilterPath,
};
use ongate::states::{apply_phase_gate, expectation, on_wavefunction, Observable};
use ongate::symplectic::{two_mode_squeezer_from_single_modes, SymplecticMatrix};
use ongate::{GateSpec, Grid, OnSpec, Result, TestState};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Result<Verdict> {
    Ok(Verdict { pass, detail })
}

fn grid() -> Grid {
    Grid::symmetric(DEFAULT_X_MAX, DEFAULT_N_POINTS).unwrap()
}

fn fock_family() -> Vec<TestState> {
    (0..=5).map(TestState::Fock).collect()
}

fn squeezed_family() -> Vec<TestState> {
    (0..=19).map(|k| TestState::Squeezed(0.5 * k as f64)).collect()
}

fn coherent_family() -> Vec<TestState> {
    (0..=5).map(|k| TestState::Coherent(-1.0 + 0.5 * k as f64)).collect()
}

fn figure_states() -> Vec<TestState> {
    let mut v = fock_family();
    v.extend(squeezed_family());
    v.extend(coherent_family());
    v
}

fn suite_states() -> [TestState; 4] {
    [TestState::Fock(0), TestState::Coherent(1.0), TestState::Squeezed(6.0), TestState::Fock(3)]
}

fn max_abs(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, f64::max)
}

fn closed_form_fidelity() -> Result<Verdict> {
    let g = grid();
    let mut worst: f64 = 0.0;
    for x0 in [-1.0, 0.0, 1.5] {
        let psi = TestState::Coherent(x0).wavefunction(&g)?;
        for k in 0..61 {
            let q = -3.0 + 0.1 * k as f64;
            worst = worst.max((gate_fidelity_q(&psi, q)? - coherent_gate_fidelity(q, x0)).abs());
        }
    }
    verdict(worst <= 1e-6, format!("max |F_q - closed form| = {worst:.2e} (<= 1e-6)"))
}

fn displacement_invariance() -> Result<Verdict> {
    let g = grid();
    let mut worst: f64 = 0.0;
    for gamma in [0.0, 0.05, 0.1] {
        let v = [-1.0, 0.0, 1.5]
            .iter()
            .map(|&x0| avg_gate_fidelity_for(TestState::Coherent(x0), gamma, &g).map(|r| r.average))
            .collect::<Result<Vec<_>>>()?;
        let spread = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - v.iter().cloned().fold(f64::INFINITY, f64::min);
        worst = worst.max(spread);
    }
    verdict(worst <= 1e-4, format!("max spread over x0 = {worst:.2e} (<= 1e-4)"))
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] > w[0])
}

fn fidelity_figure() -> Result<Verdict> {
    let g = grid();
    let fg: Vec<f64> = fidelity_sweeps(SweepKind::Gamma, &g)?.iter().map(|r| r.average).collect();
    let fsq: Vec<f64> = fidelity_sweeps(SweepKind::Squeezing, &g)?.iter().map(|r| r.average).collect();
    let fn_: Vec<f64> = fidelity_sweeps(SweepKind::Fock, &g)?.iter().map(|r| r.average).collect();
    let (lo, hi) = (fg.iter().cloned().fold(f64::INFINITY, f64::min), fg.iter().cloned().fold(0.0, f64::max));
    let band = fg.len() == 21 && lo >= 0.85 && hi <= 0.95;
    let (dsq, dn) = (strictly_decreasing(&fsq), strictly_decreasing(&fn_));
    verdict(
        band && dsq && dn,
        format!(
            "F_gamma in [{lo:.4}, {hi:.4}] (band [0.85, 0.95]); F_sq {:.4}->{:.4} decreasing={dsq}; F_n {:.4}->{:.4} decreasing={dn}",
            fsq[0],
            fsq[fsq.len() - 1],
            fn_[0],
            fn_[fn_.len() - 1]
        ),
    )
}

fn homodyne_morphology() -> Result<Verdict> {
    let g = grid();
    let r = Resource::cubic(0.1);
    let var = |fam: Vec<TestState>| -> Result<Vec<f64>> {
        fam.iter().map(|s| Ok(homodyne_density(&s.wavefunction(&g)?, &r, &g)?.density.variance())).collect()
    };
    let vf = var(fock_family())?;
    let vs = var(squeezed_family())?;
    let base = TestState::Coherent(0.0).wavefunction(&g)?;
    let mut shift_err: f64 = 0.0;
    for state in coherent_family() {
        let x0 = state.parameter();
        let psi = state.wavefunction(&g)?;
        for k in (0..=120).map(|k| -6.0 + 0.1 * k as f64) {
            let lhs = homodyne_probability(&psi, &r, k)?;
            let rhs = homodyne_probability(&base, &r, k + x0)?;
            shift_err = shift_err.max((lhs - rhs).abs());
        }
    }
    let (inc_f, inc_s) = (strictly_increasing(&vf), strictly_increasing(&vs));
    verdict(
        inc_f && inc_s && shift_err <= 1e-6,
        format!(
            "Var p(q): Fock {:.3}->{:.3} increasing={inc_f}, squeezed {:.3}->{:.3} increasing={inc_s}; shift identity err {shift_err:.2e} (<= 1e-6)",
            vf[0],
            vf[5],
            vs[0],
            vs[vs.len() - 1]
        ),
    )
}

fn composition_identity() -> Result<Verdict> {
    let g = grid();
    let mut worst: f64 = 0.0;
    for state in suite_states() {
        let psi = state.wavefunction(&g)?;
        for q in [-2.0, -1.0, 0.0, 1.0, 2.0] {
            for a0 in [0.01, 0.05, 0.1] {
                let out = feed_forward(&unitarized_filter(&psi, q, a0), q, a0);
                worst = worst.max(out.phase_aligned_distance(&target_output(&psi, q, a0)?)?);
            }
        }
        let run = run_deterministic(&psi, 0.1, 0.37)?;
        worst = worst.max(run.output.phase_aligned_distance(&target_output(&psi, run.q, 0.1)?)?);
    }
    verdict(worst <= 1e-8, format!("max L2 distance = {worst:.2e} (<= 1e-8)"))
}

fn postselection() -> Result<Verdict> {
    let g = grid();
    let r = Resource::cubic(0.1);
    let window = PostSelectSpec::new(0.0, 1e-2)?;
    let masses = figure_states()
        .iter()
        .map(|s| acceptance_mass(&s.wavefunction(&g)?, &r, &window))
        .collect::<Result<Vec<_>>>()?;
    let (lo, hi) = (masses.iter().cloned().fold(1.0, f64::min), masses.iter().cloned().fold(0.0, f64::max));
    let in_band = lo >= 2e-4 && hi <= 2e-2;

    let narrow = PostSelectSpec::new(0.0, 1e-3)?;
    let (mut centre, mut edge, mut infid): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for state in suite_states() {
        let psi = state.wavefunction(&g)?;
        let target = target_output(&psi, 0.0, 0.1)?;
        for q in [-1e-3, 0.0, 1e-3] {
            let run = run_postselected_at(&psi, 0.1, &narrow, q)?;
            infid = infid.max(1.0 - state_fidelity(&run.output, &target)?);
            let d = run.output.phase_aligned_distance(&target)?;
            if q == 0.0 {
                centre = centre.max(d);
            } else {
                edge = edge.max(d);
            }
        }
    }
    verdict(
        in_band && centre <= 1e-6 && infid <= 1e-4,
        format!(
            "mass in [{lo:.2e}, {hi:.2e}] (band [2e-4, 2e-2]); eps=1e-3 output: L2 at q0 {centre:.2e} (<= 1e-6), L2 at window edges {edge:.1e}, max infidelity over window {infid:.2e} (<= 1e-4)"
        ),
    )
}

fn resource_preparation() -> Result<Verdict> {
    let params = solve_prep_params(0.1, 0.5)?;
    let ideal = prepare_on3_ideal(&params)?;
    let direct = prepare_on3_circuit(&params, DEFAULT_CUTOFF, FilterPath::Direct)?;
    let chain = prepare_on3_circuit(&params, DEFAULT_CUTOFF, FilterPath::DisplacedChain)?;
    let doubled = prepare_on3_circuit(&params, 2 * DEFAULT_CUTOFF, FilterPath::Direct)?;
    let f = direct.state.fidelity(&ideal.with_cutoff(DEFAULT_CUTOFF))?;
    let f2 = doubled.state.fidelity(&ideal.with_cutoff(2 * DEFAULT_CUTOFF))?;
    let leak = direct.state.get(1).norm().max(direct.state.get(2).norm());
    let paths = max_abs(direct.state.coeffs().iter().zip(chain.state.coeffs()).map(|(a, b)| (a - b).norm()));
    let pass = f >= 1.0 - 1e-6 && leak <= 1e-8 && paths <= 1e-8 && (f2 - f).abs() < 1e-8;
    verdict(
        pass,
        format!(
            "1-F = {:.1e}; |c1|,|c2| <= {leak:.1e}; direct vs chain {paths:.1e}; cutoff doubling dF = {:.1e}",
            1.0 - f,
            (f2 - f).abs()
        ),
    )
}

fn element_checks() -> Result<Verdict> {
    let coh = FockVector::coherent(C64::new(0.8, 0.0), DEFAULT_CUTOFF);
    let (sub, _) = photon_subtract_bs(&coh, 0.01)?;
    let f_sub = sub.fidelity(&ongate::fock::annihilate(&coh))?;
    let identity = tmss_arm_identity_residual(0.55, DEFAULT_CUTOFF);
    let mut sym: f64 = 0.0;
    for r in [0.0, 0.25, 0.5, 1.0] {
        let built = two_mode_squeezer_from_single_modes(r)?;
        let block = SymplecticMatrix::two_mode_squeezer(r);
        sym = sym.max(max_abs((built.matrix() - block.matrix()).iter().map(|v| v.abs())));
    }
    let psi = prepare_on3_ideal(&solve_prep_params(0.1, 0.5)?)?.with_cutoff(25);
    let fids = [0.04, 0.02, 0.01]
        .iter()
        .map(|&theta: &f64| displace_by_bs(&psi, C64::new(0.0, -0.3 / theta.sin()), theta).map(|r| r.fidelity))
        .collect::<Result<Vec<_>>>()?;
    let pass = f_sub >= 1.0 - 1e-3 && identity <= 1e-10 && sym <= 1e-12 && fids[1] >= 0.99 && strictly_increasing(&fids);
    verdict(
        pass,
        format!(
            "subtraction F = {f_sub:.6}; TMSS arm identity {identity:.1e}; symplectic {sym:.1e}; displacement F(theta=0.04,0.02,0.01) = {:.5}, {:.5}, {:.5}",
            fids[0], fids[1], fids[2]
        ),
    )
}

fn propagation() -> Result<Verdict> {
    let g = grid();
    let gamma = 0.1;
    let (mut shift, mut modulus): (f64, f64) = (0.0, 0.0);
    for state in figure_states() {
        let psi = state.wavefunction(&g)?;
        let out = apply_phase_gate(&psi, &GateSpec::cubic(gamma));
        let expected = expectation(&psi, Observable::P)? + 3.0 * gamma * expectation(&psi, Observable::X2)?;
        shift = shift.max((expectation(&out, Observable::P)? - expected).abs());
        modulus = modulus.max(max_abs(psi.density().iter().zip(out.density()).map(|(a, b)| (a - b).abs() / a.max(1e-300))));
    }
    verdict(
        shift <= 1e-6 && modulus <= 1e-14,
        format!("<p> shift error {shift:.2e} (<= 1e-6); max relative |psi|^2 change {modulus:.1e}"),
    )
}

/// `||raw - aligned exponentiated|| / ||raw||`.
fn quartic_remainder(psi: &ongate::PositionWaveFunction, q: f64, a0: f64) -> Result<f64> {
    let g = psi.grid();
    let (raw, ex) = quartic_effective(psi, q, a0)?;
    let aligned = ex.map_filter(|_, a| a * C64::from_polar(1.0, 0.75 * a0));
    let diff: Vec<f64> = raw.amplitudes().iter().zip(aligned.amplitudes()).map(|(a, b)| (a - b).norm_sqr()).collect();
    Ok((g.integrate_real(&diff)? / raw.norm_sqr()).sqrt())
}

/// Leading-order remainder constant `||B^2 w|| / (2 ||w||)`, where
/// `w = exp(-(x+q)^2/2) psi` and `B(y) = y^4 - 3y^2 + 3/4`.
fn quartic_remainder_constant(psi: &ongate::PositionWaveFunction, q: f64) -> Result<f64> {
    let g = psi.grid();
    let (mut num, mut den) = (Vec::new(), Vec::new());
    for (x, d) in g.points().zip(psi.density()) {
        let y = x + q;
        let w = d * (-y * y).exp();
        let b = y.powi(4) - 3.0 * y * y + 0.75;
        num.push(w * b.powi(4) / 4.0);
        den.push(w);
    }
    Ok((g.integrate_real(&num)? / g.integrate_real(&den)?).sqrt())
}

fn quartic() -> Result<Verdict> {
    let g = grid();
    let mut pass = true;
    let mut parts = Vec::new();
    let vac = TestState::Fock(0).wavefunction(&g)?;
    for a0 in [1e-2, 3e-2] {
        let mut worst: f64 = 0.0;
        for q in [-1.0, -0.5, 0.0, 0.5, 1.0] {
            worst = worst.max(quartic_remainder(&vac, q, a0)?);
        }
        pass &= worst <= 10.0 * a0 * a0;
        parts.push(format!("vacuum, |q| <= 1, a0={a0}: rel diff {worst:.2e} (<= {:.0e})", 10.0 * a0 * a0));
    }
    let mut oracle: f64 = 0.0;
    for a0 in [1e-2, 3e-2] {
        for state in suite_states() {
            let psi = state.wavefunction(&g)?;
            for q in [-1.0, 0.0, 1.0] {
                let ratio = quartic_remainder(&psi, q, a0)? / (a0 * a0 * quartic_remainder_constant(&psi, q)?);
                oracle = oracle.max((ratio - 1.0).abs() / (5.0 * a0));
            }
        }
    }
    pass &= oracle <= 1.0;
    parts.push(format!("suite states vs second-order remainder: max |ratio - 1| / (5 a0) = {oracle:.2} (<= 1)"));
    let mut path: f64 = 0.0;
    for a0 in [1e-2, 3e-2, 0.1] {
        let phi = Resource::Sampled(on_wavefunction(&OnSpec::quartic(a0), &g)?);
        for state in suite_states() {
            let psi = state.wavefunction(&g)?;
            for q in [-1.3, 0.0, 0.77] {
                let via = effective_operator(&psi, &phi, q)?;
                path = path.max(via.phase_aligned_distance(&quartic_effective(&psi, q, a0)?.0)?);
            }
        }
    }
    pass &= path <= 1e-10;
    parts.push(format!("04-resource path {path:.1e} (<= 1e-10)"));
    verdict(pass, parts.join("; "))
}

fn product_expansion() -> Result<Verdict> {
    let g = grid();
    let gamma = 0.05;
    let mut worst: f64 = 0.0;
    for state in suite_states() {
        let psi = state.wavefunction(&g)?;
        let two = product_step(&psi, gamma, 2)?;
        let taylor = taylor_second_order(&psi, gamma);
        for (((x, a), t), p) in g.points().zip(two.amplitudes()).zip(taylor.amplitudes()).zip(psi.amplitudes()) {
            let h = x * x * x;
            let delta = p * (gamma * gamma * h * h / 4.0);
            let scale = (a.norm() + t.norm() + delta.norm()).max(f64::MIN_POSITIVE);
            worst = worst.max((a - t - delta).norm() / scale);
        }
    }
    let vac = TestState::Fock(0).wavefunction(&g)?;
    let f = state_fidelity(&product_step(&vac, gamma, 64)?, &apply_phase_gate(&vac, &GateSpec::cubic(gamma)))?;
    verdict(
        worst <= 1e-14 && f >= 0.999,
        format!("n=2 difference vs gamma^2 x^6/4: max relative {worst:.1e} (rounding); n=64 fidelity {f:.6} (>= 0.999)"),
    )
}

fn bookkeeping() -> Result<Verdict> {
    let g = grid();
    let (mut route, mut mass): (f64, f64) = (0.0, 0.0);
    let mut probs = Vec::new();
    for state in suite_states() {
        let psi = state.wavefunction(&g)?;
        for a0 in [0.0, 0.05, 0.1] {
            let hd = homodyne_density(&psi, &Resource::cubic(a0), &g)?;
            mass = mass.max((hd.raw_mass - 1.0).abs());
            for u in [0.05, 0.5, 0.93] {
                let run = run_deterministic(&psi, a0, u)?;
                let p = homodyne_probability(&psi, &Resource::cubic(a0), run.q)?;
                route = route.max((run.raw_norm_sqr - p).abs());
                mass = mass.max((run.density.mass() - 1.0).abs());
            }
        }
        probs.push(acceptance_mass(&psi, &Resource::cubic(0.1), &PostSelectSpec::new(0.0, 1e-2)?)?);
    }
    let prep = prepare_on3_circuit(&solve_prep_params(0.1, 0.5)?, DEFAULT_CUTOFF, FilterPath::Direct)?;
    probs.push(prep.success_probability);
    let coh = FockVector::coherent(C64::new(0.8, 0.0), DEFAULT_CUTOFF);
    probs.push(photon_subtract_bs(&coh, 0.01)?.1);
    probs.push(photon_add_via_s2(&coh, 0.01)?.1);
    let in_unit = probs.iter().all(|p| (0.0..=1.0).contains(p));
    verdict(
        route <= 1e-8 && mass <= 1e-6 && in_unit,
        format!("raw_norm^2 vs p(q) {route:.1e} (<= 1e-8); |mass - 1| {mass:.1e} (<= 1e-6); probabilities in [0,1]: {in_unit}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Verdict>); 12] = [
        ("closed-form coherent fidelity", closed_form_fidelity),
        ("displacement invariance of the average fidelity", displacement_invariance),
        ("fidelity figure bands and trends", fidelity_figure),
        ("homodyne density morphology", homodyne_morphology),
        ("feed-forward composition identity", composition_identity),
        ("post-selection mass and output", postselection),
        ("resource preparation", resource_preparation),
        ("optical element checks", element_checks),
        ("cubic-gate propagation properties", propagation),
        ("quartic first-order filter", quartic),
        ("product expansion", product_expansion),
        ("probability bookkeeping", bookkeeping),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (pass, detail) = match check() {
            Ok(v) => (v.pass, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "{} {:>2} {name}: {detail} [{:.1}s]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            t.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed in {:.1}s", criteria.len() - failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
