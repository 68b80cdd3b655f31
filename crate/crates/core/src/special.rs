//! Hermite polynomials, harmonic-oscillator eigenfunctions and the Airy
//! function `Ai`.

use std::f64::consts::PI;

/// Physicists' Hermite polynomial `H_n(x)` by upward recurrence
/// `H_{n+1} = 2x H_n - 2n H_{n-1}`.
pub fn hermite(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Oscillator eigenfunctions `psi_0(x) ..= psi_{n_max}(x)` with
/// `psi_n(x) = pi^{-1/4} (2^n n!)^{-1/2} H_n(x) e^{-x^2/2}`.
///
/// Uses the normalized recurrence, so large `n` never overflows.
pub fn hermite_functions(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let psi0 = PI.powf(-0.25) * (-0.5 * x * x).exp();
    out.push(psi0);
    if n_max == 0 {
        return out;
    }
    out.push(std::f64::consts::SQRT_2 * x * psi0);
    for n in 1..n_max {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * x * out[n] - (nf / (nf + 1.0)).sqrt() * out[n - 1];
        out.push(next);
    }
    out
}

/// Single oscillator eigenfunction `psi_n(x)`.
pub fn hermite_function(n: usize, x: f64) -> f64 {
    hermite_functions(n, x)[n]
}

const AI0: f64 = 0.355_028_053_887_817_24;
/// `-Ai'(0)`
const AIP0: f64 = 0.258_819_403_792_806_8;

const MACLAURIN_MAX: f64 = 2.0;
const MACLAURIN_MIN: f64 = -4.0;
const STEPPING_MIN: f64 = -12.0;
const ASYMPTOTIC_MIN: f64 = 8.0;

/// Airy function of the first kind.
///
/// Maclaurin series on `[-4, 2]`, Taylor-series integration of `y'' = t y`
/// on `[-12, -4]` (seeded at `-4`) and on `[2, 8]` (seeded from the
/// asymptotic expansion at `8`, integrating towards the origin), and the
/// standard asymptotic expansions outside. Absolute error below `1e-12` on
/// `[-12, 12]`, relative error near `1e-13` for positive arguments.
pub fn airy_ai(t: f64) -> f64 {
    if t.is_nan() {
        return f64::NAN;
    }
    if t > ASYMPTOTIC_MIN {
        airy_asymptotic_positive(t).0
    } else if t > MACLAURIN_MAX {
        let (y, dy) = airy_asymptotic_positive(ASYMPTOTIC_MIN);
        taylor_steps(y, dy, ASYMPTOTIC_MIN, t)
    } else if t >= MACLAURIN_MIN {
        airy_maclaurin(t).0
    } else if t >= STEPPING_MIN {
        let (y, dy) = airy_maclaurin(MACLAURIN_MIN);
        taylor_steps(y, dy, MACLAURIN_MIN, t)
    } else {
        airy_asymptotic_negative(-t)
    }
}

/// `(Ai(t), Ai'(t))` from the two Maclaurin series.
fn airy_maclaurin(t: f64) -> (f64, f64) {
    let t3 = t * t * t;
    let (mut f, mut g) = (1.0, t);
    let (mut df, mut dg) = (0.0, 1.0);
    let (mut tf, mut tg) = (1.0, t);
    let mut k = 0.0;
    loop {
        tf *= t3 / ((3.0 * k + 2.0) * (3.0 * k + 3.0));
        tg *= t3 / ((3.0 * k + 3.0) * (3.0 * k + 4.0));
        f += tf;
        g += tg;
        // d/dt t^m = m t^{m-1}
        if t != 0.0 {
            df += tf * (3.0 * k + 3.0) / t;
            dg += tg * (3.0 * k + 4.0) / t;
        }
        k += 1.0;
        if tf.abs() < 1e-18 * f.abs().max(1.0) && tg.abs() < 1e-18 * g.abs().max(1.0) {
            break;
        }
    }
    (AI0 * f - AIP0 * g, AI0 * df - AIP0 * dg)
}

/// Integrate `y'' = t y` from `(y, y')` at `t0` to `t` in steps of `1/4`.
fn taylor_steps(mut y: f64, mut dy: f64, mut t0: f64, t: f64) -> f64 {
    const STEP: f64 = 0.25;
    while t0 != t {
        let h = (t - t0).clamp(-STEP, STEP);
        // Taylor coefficients of y about t0: a_{k+2} = (t0 a_k + a_{k-1}) / ((k+2)(k+1))
        let mut a = vec![y, dy, 0.5 * t0 * y];
        let (mut val, mut der) = (y + dy * h + a[2] * h * h, dy + 2.0 * a[2] * h);
        let mut hk = h * h;
        let mut k = 1;
        loop {
            let next = (t0 * a[k] + a[k - 1]) / ((k + 2) as f64 * (k + 1) as f64);
            a.push(next);
            let m = k + 2;
            der += m as f64 * next * hk;
            hk *= h;
            val += next * hk;
            k += 1;
            if (next * hk).abs() <= 1e-18 * val.abs() && k > 6 {
                break;
            }
        }
        y = val;
        dy = der;
        t0 = if (t - t0).abs() <= STEP { t } else { t0 + h };
    }
    y
}

/// Coefficients `u_k` of the Airy asymptotic expansions.
fn asymptotic_coefficients(count: usize) -> Vec<f64> {
    let mut u = Vec::with_capacity(count);
    u.push(1.0);
    for k in 1..count {
        let kf = k as f64;
        let prev = u[k - 1];
        u.push(
            prev * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
                / ((2.0 * kf - 1.0) * 216.0 * kf),
        );
    }
    u
}

/// `(Ai(t), Ai'(t))` for large positive `t`; the derivative series uses
/// `v_k = -u_k (6k + 1) / (6k - 1)`.
fn airy_asymptotic_positive(t: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * t.powf(1.5);
    let u = asymptotic_coefficients(40);
    let (mut sum, mut dsum) = (0.0, 0.0);
    let mut last = f64::INFINITY;
    let mut zk = 1.0;
    for (k, uk) in u.iter().enumerate() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let term = sign * uk / zk;
        if term.abs() > last {
            break;
        }
        let kf = k as f64;
        let vk = if k == 0 { 1.0 } else { -uk * (6.0 * kf + 1.0) / (6.0 * kf - 1.0) };
        sum += term;
        dsum += sign * vk / zk;
        last = term.abs();
        zk *= zeta;
    }
    let pre = (-zeta).exp() / (2.0 * PI.sqrt());
    (pre / t.powf(0.25) * sum, -pre * t.powf(0.25) * dsum)
}

fn airy_asymptotic_negative(z: f64) -> f64 {
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let u = asymptotic_coefficients(40);
    let (mut p, mut q) = (0.0, 0.0);
    let mut zk = 1.0;
    let mut last = f64::INFINITY;
    for (k, uk) in u.iter().enumerate() {
        let term = uk / zk;
        if term.abs() > last {
            break;
        }
        last = term.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        zk *= zeta;
    }
    let phase = zeta + PI / 4.0;
    (phase.sin() * p - phase.cos() * q) / (PI.sqrt() * z.powf(0.25))
}
