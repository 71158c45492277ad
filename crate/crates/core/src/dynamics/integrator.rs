//! Gragg-Bulirsch-Stoer extrapolation for autonomous first-order systems.

use crate::error::{Error, Result};

/// Step-size control settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GbsOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step; `0` picks `|t| / 8`.
    pub h0: f64,
    pub min_step: f64,
    pub max_steps: usize,
}

impl Default for GbsOptions {
    fn default() -> Self {
        GbsOptions {
            rtol: 1e-12,
            atol: 1e-12,
            h0: 0.0,
            min_step: 1e-12,
            max_steps: 100_000,
        }
    }
}

impl GbsOptions {
    pub fn with_tol(tol: f64) -> Self {
        GbsOptions {
            rtol: tol,
            atol: tol,
            ..Default::default()
        }
    }
}

/// Integration statistics.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct GbsStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

const SEQ: [usize; 8] = [2, 4, 6, 8, 10, 12, 14, 16];

fn midpoint<F: FnMut(&[f64], &mut [f64])>(
    f: &mut F,
    y: &[f64],
    dy0: &[f64],
    big_h: f64,
    n: usize,
    out: &mut [f64],
    stats: &mut GbsStats,
) {
    let d = y.len();
    let h = big_h / n as f64;
    let mut z0: Vec<f64> = y.to_vec();
    let mut z1: Vec<f64> = y.iter().zip(dy0).map(|(a, b)| a + h * b).collect();
    let mut dz = vec![0.0; d];
    for _ in 1..n {
        f(&z1, &mut dz);
        stats.evaluations += 1;
        for i in 0..d {
            let next = z0[i] + 2.0 * h * dz[i];
            z0[i] = z1[i];
            z1[i] = next;
        }
    }
    f(&z1, &mut dz);
    stats.evaluations += 1;
    for i in 0..d {
        out[i] = 0.5 * (z1[i] + z0[i] + h * dz[i]);
    }
}

/// Integrate `y' = f(y)` from `y0` over a signed duration `t`.
pub fn integrate<F>(mut f: F, y0: &[f64], t: f64, opts: &GbsOptions) -> Result<(Vec<f64>, GbsStats)>
where
    F: FnMut(&[f64], &mut [f64]),
{
    let d = y0.len();
    let mut stats = GbsStats::default();
    let mut y = y0.to_vec();
    if t == 0.0 {
        return Ok((y, stats));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::Integration("non-finite initial state".into()));
    }
    let dir = t.signum();
    let total = t.abs();
    let mut h = if opts.h0 > 0.0 { opts.h0.min(total) } else { total / 8.0 };
    let mut done = 0.0;
    let k = SEQ.len();
    let mut dy0 = vec![0.0; d];
    let mut steps = 0;
    while done < total {
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::Integration(format!("more than {} steps", opts.max_steps)));
        }
        let last = done + h >= total * (1.0 - 1e-14);
        let hs = if last { total - done } else { h };
        f(&y, &mut dy0);
        stats.evaluations += 1;
        let big_h = dir * hs;
        // prev holds T_{j-1, 0..j}, cur T_{j, 0..=j}
        let mut prev: Vec<Vec<f64>> = Vec::with_capacity(k);
        let mut cur: Vec<Vec<f64>> = Vec::with_capacity(k);
        for j in 0..k {
            let mut t0 = vec![0.0; d];
            midpoint(&mut f, &y, &dy0, big_h, SEQ[j], &mut t0, &mut stats);
            cur.clear();
            cur.push(t0);
            for m in 1..=j {
                let r = (SEQ[j] as f64 / SEQ[j - m] as f64).powi(2);
                let a = &cur[m - 1];
                let b = &prev[m - 1];
                let v: Vec<f64> = (0..d).map(|i| a[i] + (a[i] - b[i]) / (r - 1.0)).collect();
                cur.push(v);
            }
            std::mem::swap(&mut prev, &mut cur);
        }
        let best = &prev[k - 1];
        let lower = &prev[k - 2];
        let mut err = 0.0f64;
        for i in 0..d {
            let sc = opts.atol + opts.rtol * y[i].abs().max(best[i].abs());
            err = err.max((best[i] - lower[i]).abs() / sc);
        }
        if !err.is_finite() {
            stats.rejected += 1;
            h *= 0.2;
            if h < opts.min_step {
                return Err(Error::Integration("step size underflow".into()));
            }
            continue;
        }
        let fac = if err == 0.0 { 4.0 } else { (0.9 * err.powf(-1.0 / 15.0)).clamp(0.2, 4.0) };
        if err <= 1.0 {
            y.copy_from_slice(best);
            done += hs;
            stats.accepted += 1;
            if y.iter().any(|v| !v.is_finite()) {
                return Err(Error::Integration("non-finite state".into()));
            }
            if !last {
                h *= fac;
            } else {
                done = total;
            }
        } else {
            stats.rejected += 1;
            h = hs * fac;
            if h < opts.min_step {
                return Err(Error::Integration("step size underflow".into()));
            }
        }
    }
    Ok((y, stats))
}
