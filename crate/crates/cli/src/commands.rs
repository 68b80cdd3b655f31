//! One function per subcommand; each returns the artifacts it produced.

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use ongate::circuit::{
    effective_operator, homodyne_density, quartic_effective, run_deterministic, run_postselected, target_output,
    product_step, taylor_second_order, CircuitOutcome, PostSelectSpec, Resource,
};
use ongate::metrics::{fidelity_sweeps, state_fidelity, SweepKind};
use ongate::prep::{prepare_on3_circuit, prepare_on3_ideal, solve_prep_params, FilterPath};
use ongate::states::{apply_phase_gate, expectation, wigner_cubic, AxisRange, Observable};
use ongate::{GateSpec, Grid, OnSpec, PositionWaveFunction, Result, TestState};

use crate::output::{sig12, Artifact, Metadata};
use crate::range::StateRange;

pub struct Context {
    pub grid: Grid,
    pub cutoff: usize,
    pub seed: u64,
}

impl Context {
    pub fn meta(&self, command: &str) -> Metadata {
        Metadata {
            x_max: self.grid.x_max(),
            n_points: self.grid.n_points(),
            cutoff: self.cutoff,
            seed: self.seed,
            command: command.to_string(),
        }
    }
}

fn fields(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("json! object literal"),
    }
}

fn file_stem(state: &TestState) -> String {
    format!("{}_{}", state.kind(), state.parameter())
}

pub fn homodyne_dist(ctx: &Context, input: &StateRange, gamma: f64) -> Result<Vec<Artifact>> {
    let meta = ctx.meta(&format!("homodyne-dist --input {input} --gamma {gamma}"));
    input
        .states()
        .par_iter()
        .map(|state| {
            let psi = state.wavefunction(&ctx.grid)?;
            let hd = homodyne_density(&psi, &Resource::cubic(gamma), &ctx.grid)?;
            let rows: Vec<Vec<String>> = hd
                .density
                .grid()
                .points()
                .zip(hd.density.values())
                .map(|(q, p)| vec![sig12(q), sig12(*p)])
                .collect();
            if let Some(w) = &hd.warning {
                eprintln!("warning ({state}): {w}");
            }
            Ok(meta.csv(&format!("homodyne_{}", file_stem(state)), &["q", "p_q"], &rows))
        })
        .collect()
}

pub fn fidelity(ctx: &Context, kind: SweepKind) -> Result<Vec<Artifact>> {
    let meta = ctx.meta(&format!("fidelity --sweep {}", kind.name()));
    let rows = fidelity_sweeps(kind, &ctx.grid)?;
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| vec![sig12(r.parameter), r.state.to_string(), sig12(r.gamma), sig12(r.average)])
        .collect();
    let values: Vec<f64> = rows.iter().map(|r| r.average).collect();
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let name = format!("fidelity_{}", kind.name());
    let summary = json!({
        "sweep": kind.name(),
        "rows": rows.len(),
        "min": min,
        "max": max,
        "strictly_decreasing": values.windows(2).all(|w| w[1] < w[0]),
        "strictly_increasing": values.windows(2).all(|w| w[1] > w[0]),
    });
    Ok(vec![
        meta.csv(&name, &["parameter", "state", "gamma", "fidelity"], &table),
        meta.json(&format!("{name}_summary"), fields(summary)),
    ])
}

pub fn prep03(ctx: &Context, a0: f64, y: f64) -> Result<Vec<Artifact>> {
    let meta = ctx.meta(&format!("prep03 --a0 {a0} --y {y}"));
    let params = solve_prep_params(a0, y)?;
    let ideal = prepare_on3_ideal(&params)?;
    let run = |cutoff: usize| -> Result<_> {
        let out = prepare_on3_circuit(&params, cutoff, FilterPath::Direct)?;
        let f = out.state.fidelity(&ideal.with_cutoff(cutoff))?;
        Ok((out, f))
    };
    let (out, f) = run(ctx.cutoff)?;
    let (_, f2) = run(2 * ctx.cutoff)?;
    let mut m = fields(json!({
        "a0": a0,
        "y": params.y(),
        "r": params.r(),
        "c": params.c(),
        "vacuum": a0 == 0.0,
        "success_probability": out.success_probability,
        "fidelity_to_ideal": f,
        "cutoff_convergence_delta": f2 - f,
        "tail_mass": out.tail_mass,
        "warnings": out.warnings,
    }));
    for n in 0..4 {
        let c = out.state.get(n);
        m.insert(format!("c{n}_re"), c.re.into());
        m.insert(format!("c{n}_im"), c.im.into());
    }
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    Ok(vec![meta.json("prep03", m)])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Deterministic,
    Postselected,
}

fn moments(psi: &PositionWaveFunction) -> Result<(f64, f64, f64)> {
    let x = expectation(psi, Observable::X)?;
    let x2 = expectation(psi, Observable::X2)?;
    Ok((x, x2 - x * x, expectation(psi, Observable::P)?))
}

pub fn circuit(
    ctx: &Context,
    mode: Mode,
    input: TestState,
    a0: f64,
    q0: f64,
    epsilon: f64,
) -> Result<Vec<Artifact>> {
    let psi = input.wavefunction(&ctx.grid)?;
    let u: f64 = StdRng::seed_from_u64(ctx.seed).gen();
    let (name, out, target): (&str, CircuitOutcome, _) = match mode {
        Mode::Deterministic => {
            let out = run_deterministic(&psi, a0, u)?;
            let target = target_output(&psi, out.q, a0)?;
            ("deterministic", out, target)
        }
        Mode::Postselected => {
            let spec = PostSelectSpec::new(q0, epsilon)?;
            let out = run_postselected(&psi, a0, &spec, u)?;
            ("postselected", out, target_output(&psi, 0.0, a0)?)
        }
    };
    let meta = ctx.meta(&format!("circuit --mode {name} --input {input} --a0 {a0} --q0 {q0} --epsilon {epsilon}"));
    let (mean_x, var_x, mean_p) = moments(&out.output)?;
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    let m = fields(json!({
        "mode": name,
        "input": input.to_string(),
        "a0": a0,
        "u": u,
        "q": out.q,
        "accepted": out.accepted,
        "acceptance_mass": out.acceptance_mass,
        "raw_norm_sqr": out.raw_norm_sqr,
        "mean_x": mean_x,
        "var_x": var_x,
        "mean_p": mean_p,
        "fidelity_to_target": state_fidelity(&out.output, &target)?,
        "first_order_fidelity": state_fidelity(&out.first_order_output, &target)?,
        "warnings": out.warnings,
    }));
    Ok(vec![meta.json(&format!("circuit_{name}"), m)])
}

/// Offsets `c` along which `W(x, 3 gamma x^2 + c)` is compared across `x`.
const PARABOLA_OFFSETS: usize = 41;

pub fn wigner(ctx: &Context, gamma: f64, xs: AxisRange, ps: AxisRange) -> Result<Vec<Artifact>> {
    let meta = ctx.meta(&format!(
        "wigner --gamma {gamma} --xrange {}:{}:{} --prange {}:{}:{}",
        xs.min, xs.max, xs.points, ps.min, ps.max, ps.points
    ));
    let w = wigner_cubic(gamma, xs, ps)?;
    let (xv, pv) = (xs.values(), ps.values());
    let mut rows = Vec::with_capacity(xv.len() * pv.len());
    for (i, x) in xv.iter().enumerate() {
        for (j, p) in pv.iter().enumerate() {
            rows.push(vec![sig12(*x), sig12(*p), sig12(w[[i, j]])]);
        }
    }
    let offsets = AxisRange::new(ps.min, ps.max, PARABOLA_OFFSETS)?;
    let along = |x: f64| -> Result<Vec<f64>> {
        let shift = 3.0 * gamma * x * x;
        let p = AxisRange::new(offsets.min + shift, offsets.max + shift, offsets.points)?;
        Ok(wigner_cubic(gamma, AxisRange::new(x, x + 1.0, 2)?, p)?.row(0).to_vec())
    };
    let reference = along(0.0)?;
    let scale = reference.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut deviation: f64 = 0.0;
    for x in &xv {
        for (a, b) in along(*x)?.iter().zip(&reference) {
            deviation = deviation.max((a - b).abs());
        }
    }
    let summary = fields(json!({
        "gamma": gamma,
        "parabola_max_deviation": deviation,
        "parabola_constant": deviation <= 1e-10 * scale,
    }));
    Ok(vec![meta.csv("wigner", &["x", "p", "w"], &rows), meta.json("wigner_summary", summary)])
}

pub const QUARTIC_BOUND_FACTOR: f64 = 10.0;

pub fn quartic(ctx: &Context, a0: f64, q: f64, input: TestState) -> Result<Vec<Artifact>> {
    let meta = ctx.meta(&format!("quartic --a0 {a0} --q {q} --input {input}"));
    let psi = input.wavefunction(&ctx.grid)?;
    let (raw, ex) = quartic_effective(&psi, q, a0)?;
    // restore the constant phase the resummed form leaves out
    let aligned = ex.map_filter(|_, a| a * Complex64::from_polar(1.0, 0.75 * a0));
    let diff: Vec<f64> = raw.amplitudes().iter().zip(aligned.amplitudes()).map(|(a, b)| (a - b).norm_sqr()).collect();
    let relative = (ctx.grid.integrate_real(&diff)? / raw.norm_sqr()).sqrt();
    let via = effective_operator(&psi, &Resource::On(OnSpec::quartic(a0)), q)?;
    let path = via.phase_aligned_distance(&raw)?;
    let bound = QUARTIC_BOUND_FACTOR * a0 * a0;
    let m = fields(json!({
        "a0": a0,
        "q": q,
        "input": input.to_string(),
        "relative_difference": relative,
        "path_difference": path,
        "bound": bound,
        "within_bound": relative <= bound,
    }));
    Ok(vec![meta.json("quartic", m)])
}

pub fn accuracy(ctx: &Context, gamma: f64, steps: usize, input: TestState) -> Result<Vec<Artifact>> {
    let meta = ctx.meta(&format!("accuracy --gamma {gamma} --steps {steps} --input {input}"));
    let psi = input.wavefunction(&ctx.grid)?;
    let two = product_step(&psi, gamma, 2)?;
    let taylor = taylor_second_order(&psi, gamma);
    let (mut delta2, mut diff) = (0.0f64, 0.0f64);
    for (((x, a), t), p) in ctx.grid.points().zip(two.amplitudes()).zip(taylor.amplitudes()).zip(psi.amplitudes()) {
        let h = x * x * x;
        delta2 = delta2.max(gamma * gamma * h * h / 4.0 * p.norm());
        diff = diff.max((a - t).norm());
    }
    let gate = apply_phase_gate(&psi, &GateSpec::cubic(gamma));
    let m = fields(json!({
        "gamma": gamma,
        "steps": steps,
        "input": input.to_string(),
        "delta2_max": delta2,
        "difference_max": diff,
        "consistent": (diff - delta2).abs() <= 1e-12 * delta2.max(1.0),
        "product_gate_fidelity": state_fidelity(&product_step(&psi, gamma, steps)?, &gate)?,
    }));
    Ok(vec![meta.json("accuracy", m)])
}

pub const DEFAULT_GAMMA: f64 = 0.1;

/// Inputs of the three homodyne-distribution figures.
pub const FIGURE_INPUTS: [&str; 3] = ["fock:0..5", "squeezed:0..9.5", "coherent:-1..1.5"];

/// All figure data with the captioned parameter ranges.
pub fn defaults(ctx: &Context) -> Result<Vec<Artifact>> {
    let mut all = Vec::new();
    for spec in FIGURE_INPUTS {
        let range: StateRange = spec.parse().expect("built-in range");
        all.extend(homodyne_dist(ctx, &range, DEFAULT_GAMMA)?);
    }
    for kind in [SweepKind::Gamma, SweepKind::Squeezing, SweepKind::Fock] {
        all.extend(fidelity(ctx, kind)?);
    }
    Ok(all)
}
