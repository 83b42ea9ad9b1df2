//! Property suites over every module, run as one seeded campaign.
//!
//! Each suite gets its own ChaCha stream derived from the campaign seed,
//! so results do not depend on scheduling. Suites run in parallel and the
//! report lists them in declaration order.

use std::f64::consts::FRAC_PI_2;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use superball::bounds::*;
use superball::geometry::*;
use superball::specialfn::{half_log2_pi, try_log2_gamma};
use superball::volumes::*;
use superball::{Angle, LpVector, PNorm};

use crate::format::fmt_num;

pub const DEFAULT_SEED: u64 = 0x5EED;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Quick,
    Full,
}

/// Deliberate defects for checking that the campaign catches them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Fault {
    /// Uses `2^{p/2 − 1}` in place of `2^{1 − p/2}` in the transfer inequality.
    TransferExponent,
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub seed: u64,
    pub level: Level,
    pub fault: Option<Fault>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: DEFAULT_SEED,
            level: Level::Quick,
            fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases_run: u64,
    pub failures: u64,
    pub first_counterexample: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suites: Vec<SuiteResult>,
    pub seed: u64,
    pub level: Level,
    pub elapsed_secs: f64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.failures == 0)
    }

    pub fn first_failure(&self) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.failures > 0)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            let status = if s.failures == 0 { "ok" } else { "FAIL" };
            out.push_str(&format!(
                "{status:<4} {:<36} {:>9} cases {:>6} failures\n",
                s.name, s.cases_run, s.failures
            ));
            if let Some(c) = &s.first_counterexample {
                out.push_str(&format!("     counterexample: {c}\n"));
            }
        }
        out.push_str(&format!(
            "seed {:#x}, level {:?}, {:.2}s: {}\n",
            self.seed,
            self.level,
            self.elapsed_secs,
            if self.passed() { "all suites passed" } else { "FAILED" }
        ));
        out
    }
}

struct Ctx {
    rng: ChaCha8Rng,
    level: Level,
    fault: Option<Fault>,
}

impl Ctx {
    fn count(&self, quick: u64, full: u64) -> u64 {
        match self.level {
            Level::Quick => quick,
            Level::Full => full,
        }
    }
}

struct Tally {
    name: &'static str,
    cases: u64,
    failures: u64,
    first: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            cases: 0,
            failures: 0,
            first: None,
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(describe());
            }
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name,
            cases_run: self.cases,
            failures: self.failures,
            first_counterexample: self.first,
        }
    }
}

type Suite = fn(&mut Ctx) -> SuiteResult;

const SUITES: &[Suite] = &[
    gamma_factorials,
    gamma_duplication,
    gamma_monotone,
    endpoint_identity,
    strict_improvement,
    continuity_stitch,
    optimizer_sanity,
    rankin_feasibility,
    kl_transfer_offset,
    continuity_across_two,
    transfer_inequality,
    superadditivity,
    twist_norm,
    twisted_code_pairs,
    lift_monotone,
    circle_chain_grid,
    monte_carlo_volume_agreement,
    volume_exponent_convergence,
    scaled_ball_containment,
    power_means,
];

pub fn run(options: VerifyOptions) -> VerificationReport {
    let start = Instant::now();
    let suites = SUITES
        .par_iter()
        .enumerate()
        .map(|(i, suite)| {
            let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
            rng.set_stream(i as u64);
            suite(&mut Ctx {
                rng,
                level: options.level,
                fault: options.fault,
            })
        })
        .collect();
    VerificationReport {
        suites,
        seed: options.seed,
        level: options.level,
        elapsed_secs: start.elapsed().as_secs_f64(),
    }
}

fn pn(p: f64) -> PNorm {
    PNorm::new(p).expect("suite parameters are in range")
}

fn gamma_factorials(_: &mut Ctx) -> SuiteResult {
    let mut t = Tally::new("specialfn.factorials");
    let mut log2_fact = 0.0f64;
    for k in 1..=30u32 {
        if k > 1 {
            log2_fact += f64::from(k - 1).log2();
        }
        let got = try_log2_gamma(f64::from(k)).expect("positive");
        t.check((got - log2_fact).abs() <= 1e-12 * log2_fact.max(1.0), || {
            format!("k={k}: log2_gamma={got}, log2((k-1)!)={log2_fact}")
        });
    }
    t.finish()
}

fn gamma_duplication(cx: &mut Ctx) -> SuiteResult {
    let mut t = Tally::new("specialfn.duplication");
    for _ in 0..100 {
        let x: f64 = cx.rng.gen_range(0.5..50.0);
        let lhs = try_log2_gamma(2.0 * x).expect("positive");
        let rhs = try_log2_gamma(x).expect("positive") + try_log2_gamma(x + 0.5).expect("positive")
            + (2.0 * x - 1.0)
            - half_log2_pi();
        t.check((lhs - rhs).abs() <= 1e-10, || format!("x={x}: {lhs} vs {rhs}"));
    }
    t.finish()
}

fn gamma_monotone(_: &mut Ctx) -> SuiteResult {
    let mut t = Tally::new("specialfn.monotone");
    let mut prev = try_log2_gamma(2.0).expect("positive");
    for i in 1..=1000 {
        let x = 2.0 + 0.1 * f64::from(i);
        let cur = try_log2_gamma(x).expect("positive");
        t.check(cur > prev, || format!("x={x}: {cur} <= {prev}"));
        prev = cur;
    }
    t.finish()
}

fn endpoint_identity(cx: &mut Ctx) -> SuiteResult {
    let mut t = Tally::new("bounds.endpoint_identity");
    let n = cx.count(50, 500);
    for i in 0..n {
        // Log-spaced over [2, 1e6].
        let p = 2.0 * (5e5f64).powf(i as f64 / (n - 1) as f64);
        let p = p.min(PNorm::MAX);
        let v = superball_exponent(pn(p), Angle::right()).expect("p >= 2");
        t.check((v + 1.0 / p).abs() <= 1e-12, || format!("p={p}: {v} vs {}", -1.0 / p));
    }
    t.finish()
}

fn strict_improvement(_: &mut Ctx) -> SuiteResult {
    let mut t = Tally::new("bounds.strict_improvement");
    for p in [2.0, 2.5, 3.0, 4.0, 8.0, 16.0, 64.0] {
        let v = minimize_superball(pn(p)).expect("p >= 2").value;
        t.check(v < -1.0 / p - 1e-6, || format!("p={p}: {v} not below {}", -1.0 / p));
    }
    t.finish()
}

fn continuity_stitch(_: &mut Ctx) -> SuiteResult {
    let mut t = Tally::new("bounds.continuity_stitch");
    let a = minimize_superball(pn(2.0)).expect("p = 2").value;
    let b = kl_transfer_bound(pn(2.0)).expect("p = 2").value;
    t.check((a - b).abs() <= 1e-12, || format!("{a} vs {b}"));
    t.finish()
}

fn optimizer_sanity(cx: &mut Ctx) -> SuiteResult {
    let mut t = Tally::new("bounds.optimizer_sanity");
    let per_p = cx.count(100, 1000);
    for p in [2.0, 2.5, 3.0, 4.0, 8.0, 64.0] {
        let best = minimize_superball(pn(p)).expect("p >= 2");
        for _ in 0..per_p {
            let theta: f64 = cx.rng.gen_range(THETA_SCAN_MIN..=FRAC_PI_2);
            let v = superball_exponent(pn(p), Angle::new(theta).expect("in range")).expect("p >= 2");
            t.check(best.value <= v, || {
                format!("p={p}: minimum {} above value {v} at theta={theta}", best.value)
            });
        }
    }
    t.finish()
}

fn rankin_feasibility(cx: &mut Ctx) -> SuiteResult {
    let mut t = Tally::new("bounds.rankin_feasibility");
    for _ in 0..cx.count(50, 200) {
        let p: f64 = cx.rng.gen_range(1.0..=2.0);
        let r = rankin_bound(pn(p)).expect("p <= 2");
        let (lo, hi) = rankin_interval(pn(p));
        let x = r.argmin.unwrap_or(f64::NAN);
        t.check(x >= lo && x <= hi, || format!("p={p}: 1/q*={x} outside [{lo}, {hi}]"));
    }
    t.finish()
}

fn kl_transfer_offset(cx: &mut Ctx) -> SuiteResult {
    let mut t = Tally::new("bounds.kl_transfer_offset");
    let want = kappa_kl() - b_exponent(pn(2.0));
    for _ in 0..cx.count(100, 1000) {
        let p: f64 = cx.rng.gen_range(1.0..=2.0);
        let got = kl_transfer_bound(pn(p)).expect("p <= 2").value - b_exponent(pn(p));
        t.check((got - want).abs() <= 1e-12, || format!("p={p}: {got} vs {want}"));
    }
    t.finish()
}

fn continuity_across_two(_: &mut Ctx) -> SuiteResult {
    let mut t = Tally::new("bounds.continuity_across_two");
    let at_two = best_upper_bound(pn(2.0)).value;
    for h in [1e-6, 1e-8, 1e-10] {
        let left = best_upper_bound(pn(2.0 - h)).value;
        let right = best_upper_bound(pn(2.0 + h)).value;
        t.check((left - at_two).abs() <= 1e-6 && (right - at_two).abs() <= 1e-6, || {
            format!("h={h}: left {left}, right {right}, at 2 {at_two}")
        });
    }
    t.finish()
}

fn faulty_transfer_margin(x: f64, y: f64, p: f64) -> f64 {
    let h = 0.5 * p;
    let sp = |v: f64| if v == 0.0 { 0.0 } else { v.abs().powf(h).copysign(v) };
    (sp(x) - sp(y)).abs() - (h - 1.0).exp2() * (x - y).abs().powf(h)
}

fn transfer_inequality(cx: &mut Ctx) -> SuiteResult {
    let mut t = Tally::new("geometry.transfer_inequality");
    for _ in 0..cx.count(10_000, 1_000_000) {
        let x: f64 = cx.rng.gen_range(-2.0..=2.0);
        let y: f64 = cx.rng.gen_range(-2.0..=2.0);
        let p: f64 = cx.rng.gen_range(2.0..=64.0);
        let margin = match cx.fault {
            Some(Fault::TransferExponent) => faulty_transfer_margin(x, y, p),
            None => transfer_margin(x, y, pn(p)).expect("p >= 2"),
        };
        t.check(margin >= -1e-10, || format!("x={x}, y={y}, p={p}: margin {margin}"));
    }
    t.finish()
}

fn superadditivity(cx: &mut Ctx) -> SuiteResult {
    let mut t = Tally::new("geometry.superadditivity");
    for _ in 0..cx.count(10_000, 100_000) {
        let w: f64 = cx.rng.gen_range(1e-9..10.0);
        let z: f64 = cx.rng.gen_range(1e-9..10.0);
        let p: f64 = cx.rng.gen_range(2.0..=64.0);
        let h = 0.5 * p;
        let lhs = (w + z).powf(h);
        let rhs = w.powf(h) + z.powf(h);
        t.check(lhs >= rhs * (1.0 - 1e-12), || format!("w={w}, z={z}, p={p}: {lhs} < {rhs}"));
    }
    t.finish()
}

fn twist_norm(cx: &mut Ctx) -> SuiteResult {
    let mut t = Tally::new("geometry.twist_norm");
    for _ in 0..cx.count(1_000, 10_000) {
        let n = cx.rng.gen_range(2..=8);
        let p: f64 = cx.rng.gen_range(2.0..=64.0);
        let q: f64 = cx.rng.gen_range(1.0..=p);
        let x = SphereSampler::new(n, pn(p)).sample(&mut cx.rng);
        let tw = twist(&x, pn(p), pn(q)).expect("q <= p");
        let norm = lp_norm(&tw, pn(q));
        t.check((norm - 1.0).abs() <= 1e-9, || format!("n={n}, p={p}, q={q}: norm {norm}"));
    }
    t.finish()
}

fn twisted_code_pairs(cx: &mut Ctx) -> SuiteResult {
    let mut t = Tally::new("geometry.twisted_code_pairs");
    let trials = cx.count(2_000, 20_000);
    for (n, p, d) in [(2, 4.0, 0.3), (3, 3.0, 0.4), (3, 6.0, 0.5), (4, 4.0, 0.6)] {
        let seed = cx.rng.gen();
        let code = greedy_code(&GreedyParams { n, p: pn(p), d, trials, seed }).expect("valid parameters");
        let twisted = code_twist(&code, pn(2.0)).expect("unit code, q <= p");
        let (xs, ts) = (code.points(), twisted.points());
        for i in 0..xs.len() {
            for j in i + 1..xs.len() {
                let before = lp_distance(&xs[i], &xs[j], pn(p)).expect("same dimension");
                let after = lp_distance(&ts[i], &ts[j], pn(2.0)).expect("same dimension");
                let floor = (1.0 - 0.5 * p).exp2() * before.powf(0.5 * p);
                t.check(after >= floor - 1e-9, || {
                    format!("n={n}, p={p}, seed={seed}, pair ({i},{j}): {after} < {floor}")
                });
            }
        }
    }
    t.finish()
}

fn lift_monotone(cx: &mut Ctx) -> SuiteResult {
    let mut t = Tally::new("geometry.lift_monotone");
    for _ in 0..cx.count(100, 1000) {
        let n = cx.rng.gen_range(2..=5);
        let p: f64 = cx.rng.gen_range(1.0..=16.0);
        let k = cx.rng.gen_range(2..=8);
        let sampler = SphereSampler::new(n, pn(p));
        let centers: Vec<LpVector> = (0..k)
            .map(|_| {
                let r: f64 = cx.rng.gen_range(0.0..=1.0);
                let dir = sampler.sample(&mut cx.rng);
                LpVector::new(dir.coords().iter().map(|c| c * r).collect()).expect("finite")
            })
            .collect();
        let lifted = lift_to_sphere(&centers, pn(p)).expect("centers inside the ball");
        let mut ok = true;
        for i in 0..k {
            for j in i + 1..k {
                let before = lp_distance(&centers[i], &centers[j], pn(p)).expect("same dimension");
                let after = lp_distance(&lifted.points()[i], &lifted.points()[j], pn(p)).expect("same dimension");
                ok &= after >= before - 1e-12;
            }
        }
        t.check(ok, || format!("n={n}, p={p}, {k} centers"));
    }
    t.finish()
}

/// Greedy planar codes against the circle bound for each `(p, d)` and seed.
pub fn circle_chain_cases(seeds: &[u64], trials: u64) -> Vec<(f64, f64, u64, Result<ChainCheck, String>)> {
    let mut grid = vec![];
    for p in [2.0, 3.0, 4.0, 6.0, 8.0] {
        for d in [0.2, 0.3, 0.5, 0.7, 0.9] {
            for &seed in seeds {
                grid.push((p, d, seed));
            }
        }
    }
    grid.into_par_iter()
        .map(|(p, d, seed)| {
            let check = greedy_code(&GreedyParams { n: 2, p: pn(p), d, trials, seed })
                .and_then(|code| circle_chain(&code, d))
                .map_err(|e| e.to_string());
            (p, d, seed, check)
        })
        .collect()
}

fn circle_chain_grid(cx: &mut Ctx) -> SuiteResult {
    let mut t = Tally::new("geometry.circle_chain");
    let seeds: Vec<u64> = (0..cx.count(1, 3)).map(|_| cx.rng.gen()).collect();
    let trials = cx.count(2_000, GreedyParams::DEFAULT_TRIALS);
    for (p, d, seed, check) in circle_chain_cases(&seeds, trials) {
        let ok = matches!(&check, Ok(c) if c.pass);
        t.check(ok, || format!("p={p}, d={d}, seed={seed}: {check:?}"));
    }
    t.finish()
}

fn monte_carlo_volume_agreement(cx: &mut Ctx) -> SuiteResult {
    let mut t = Tally::new("volumes.monte_carlo");
    let (dims, ps, samples): (&[usize], &[f64], u64) = match cx.level {
        Level::Quick => (&[1, 2, 3], &[1.0, 2.0, 4.0], 100_000),
        Level::Full => (&[1, 2, 3, 4, 5], &[1.0, 1.5, 2.0, 3.0, 4.0], 1_000_000),
    };
    for &n in dims {
        for &p in ps {
            let seed = cx.rng.gen();
            let est = monte_carlo_volume(n, pn(p), samples, seed).expect("n <= 10");
            let exact = log2_ball_volume(n, pn(p), 1.0).expect("n >= 1").log2_volume;
            let tol = (3.0 * est.std_error).max(1e-12);
            t.check((est.log2_volume - exact).abs() <= tol, || {
                format!(
                    "n={n}, p={p}, seed={seed}: estimate {} vs exact {exact} (3se = {tol})",
                    est.log2_volume
                )
            });
        }
    }
    t.finish()
}

fn volume_exponent_convergence(_: &mut Ctx) -> SuiteResult {
    let mut t = Tally::new("volumes.exponent_convergence");
    for i in 0..=28 {
        let p = 1.0 + 0.25 * f64::from(i);
        let r = (normalized_log_volume(10_000, pn(p)).expect("n in range") - b_exponent(pn(p))).abs();
        t.check(r < 2e-3, || format!("p={p}: residual {r}"));
    }
    t.finish()
}

fn scaled_ball_containment(cx: &mut Ctx) -> SuiteResult {
    let mut t = Tally::new("volumes.scaled_ball_containment");
    for _ in 0..cx.count(1_000, 10_000) {
        let n = cx.rng.gen_range(2..=10);
        let p: f64 = cx.rng.gen_range(1.0..=8.0);
        let q: f64 = cx.rng.gen_range(p..=8.0);
        let r: f64 = cx.rng.gen_range(0.0..=1.0);
        let nf = n as f64;
        let dir = SphereSampler::new(n, pn(q)).sample(&mut cx.rng);
        // n^{-1/q}‖x‖_q = r ≤ 1
        let x: Vec<f64> = dir.coords().iter().map(|c| c * r * nf.powf(1.0 / q)).collect();
        let x = LpVector::new(x).expect("finite");
        let inner = lp_norm(&x, pn(p)) * nf.powf(-1.0 / p);
        t.check(inner <= 1.0 + 1e-12, || format!("n={n}, p={p}, q={q}, r={r}: {inner}"));
    }
    t.finish()
}

fn power_means(cx: &mut Ctx) -> SuiteResult {
    let mut t = Tally::new("volumes.power_mean");
    for _ in 0..cx.count(10_000, 100_000) {
        let n = cx.rng.gen_range(1..=12);
        let p: f64 = cx.rng.gen_range(1.0..=8.0);
        let q: f64 = cx.rng.gen_range(p..=8.0);
        let x: Vec<f64> = (0..n).map(|_| cx.rng.gen_range(-5.0..=5.0)).collect();
        let x = LpVector::new(x).expect("finite");
        let gap = power_mean_check(&x, pn(p), pn(q)).expect("p <= q");
        t.check(gap >= -1e-12, || format!("x={:?}, p={p}, q={q}: {}", x.coords(), fmt_num(gap)));
    }
    t.finish()
}
