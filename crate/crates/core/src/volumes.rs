//! Volumes of ℓp balls in log space, the normalized volume exponent, and a
//! Monte Carlo estimator used as an independent check.
//!
//! `vol B_p^n(r) = rⁿ · 2ⁿ Γ(1 + 1/p)ⁿ / Γ(1 + n/p)` underflows a double by
//! `n ≈ 300`, so every quantity here is a base-2 logarithm.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::PNorm;
use crate::error::{Error, Result};
use crate::geometry::{norm_slice, LpVector};
use crate::specialfn::ln_gamma_positive;

pub const MAX_DIMENSION: usize = 100_000;
pub const MAX_MONTE_CARLO_DIMENSION: usize = 10;
pub const MIN_MONTE_CARLO_SAMPLES: u64 = 10_000;

/// Samples per independently seeded Monte Carlo chunk.
const CHUNK: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VolumeResult {
    pub log2_volume: f64,
    pub n: usize,
    pub p: PNorm,
    pub radius: f64,
}

fn log2_gamma(x: f64) -> f64 {
    ln_gamma_positive(x) / std::f64::consts::LN_2
}

fn check_dimension(n: usize) -> Result<()> {
    if (1..=MAX_DIMENSION).contains(&n) {
        Ok(())
    } else {
        Err(Error::domain("n", n as f64, "[1, 100000]"))
    }
}

/// `log₂ vol B_p^n(radius)`.
pub fn log2_ball_volume(n: usize, p: PNorm, radius: f64) -> Result<VolumeResult> {
    check_dimension(n)?;
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::domain("radius", radius, "(0, inf)"));
    }
    let pv = p.get();
    let nf = n as f64;
    let log2_volume =
        nf * radius.log2() + nf + nf * log2_gamma(1.0 + 1.0 / pv) - log2_gamma(1.0 + nf / pv);
    Ok(VolumeResult {
        log2_volume,
        n,
        p,
        radius,
    })
}

/// `(1/n)·log₂ vol B_p^n(n^{1/p})`, which tends to `b(p)`.
pub fn normalized_log_volume(n: usize, p: PNorm) -> Result<f64> {
    check_dimension(n)?;
    let pv = p.get();
    let nf = n as f64;
    // n·log₂(n^{1/p}) / n = log₂(n)/p, kept exact instead of going through the radius.
    Ok(nf.log2() / pv + 1.0 + log2_gamma(1.0 + 1.0 / pv) - log2_gamma(1.0 + nf / pv) / nf)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarloEstimate {
    /// Estimated `log₂ vol B_p^n`.
    pub log2_volume: f64,
    /// Standard error of `log2_volume` (delta method).
    pub std_error: f64,
    pub hits: u64,
    pub samples: u64,
}

/// Hit-or-miss estimate of `log₂ vol B_p^n` from uniform samples in
/// `[−1, 1]ⁿ`.
///
/// Samples are split into fixed chunks, each with its own ChaCha stream
/// derived from `seed`, so the estimate does not depend on thread count.
pub fn monte_carlo_volume(n: usize, p: PNorm, samples: u64, seed: u64) -> Result<MonteCarloEstimate> {
    if !(1..=MAX_MONTE_CARLO_DIMENSION).contains(&n) {
        return Err(Error::domain("n", n as f64, "[1, 10] for Monte Carlo"));
    }
    if samples < MIN_MONTE_CARLO_SAMPLES {
        return Err(Error::domain("samples", samples as f64, "[10000, inf)"));
    }
    let pv = p.get();
    let chunks = samples.div_ceil(CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk);
            let len = CHUNK.min(samples - chunk * CHUNK);
            let mut x = vec![0.0f64; n];
            let mut hits = 0u64;
            for _ in 0..len {
                x.iter_mut().for_each(|c| *c = rng.gen_range(-1.0..=1.0));
                let s: f64 = x.iter().map(|c| c.abs().powf(pv)).sum();
                if s <= 1.0 {
                    hits += 1;
                }
            }
            hits
        })
        .sum();

    let frac = hits as f64 / samples as f64;
    let se_frac = (frac * (1.0 - frac) / samples as f64).sqrt();
    Ok(MonteCarloEstimate {
        log2_volume: n as f64 + frac.log2(),
        std_error: se_frac / (frac * std::f64::consts::LN_2),
        hits,
        samples,
    })
}

/// `n^{−1/q}‖x‖_q − n^{−1/p}‖x‖_p`, non-negative for `p ≤ q` by the
/// power-mean inequality.
pub fn power_mean_check(x: &LpVector, p: PNorm, q: PNorm) -> Result<f64> {
    if p > q {
        return Err(Error::domain("p", p.get(), "[1, q] for the power-mean check"));
    }
    Ok(power_mean(x.coords(), q.get()) - power_mean(x.coords(), p.get()))
}

/// `n^{−1/p}‖x‖_p`.
pub(crate) fn power_mean(xs: &[f64], p: f64) -> f64 {
    norm_slice(xs, p) * (xs.len() as f64).powf(-1.0 / p)
}
