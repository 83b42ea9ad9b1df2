//! ℓp vectors, ℓp spherical codes, and the two maps that carry packings
//! onto Euclidean spherical codes:
//!
//! * the twist `x ↦ sgn(x)|x|^{p/q}`, which sends the unit ℓp sphere onto
//!   the unit ℓq sphere and turns separation `2d` into at least `2d^{p/q}`;
//! * the hemisphere lift `x ↦ (x, (1 − ‖x‖_p^p)^{1/p})`, which puts points
//!   of the unit ball on the unit sphere one dimension up without bringing
//!   any two closer.
//!
//! Codes are built greedily from seeded random candidates and serve as
//! lower-bound witnesses for `A_p(n, d)`. In the plane, the Euclidean
//! circle gives an exact upper bound through [`circle_code_capacity`].

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::bounds::PNorm;
use crate::error::{Error, Result};

/// Relative tolerance for sphere membership in [`LpCode`].
pub const SPHERE_TOL: f64 = 1e-9;

/// Absolute slack when the greedy builder compares a distance with `2d`.
pub const ACCEPT_SLACK: f64 = 1e-12;

/// Slack added before flooring in [`circle_code_capacity`], so `θ = 2π/k`
/// computed in floating point still admits `k` points.
const CAPACITY_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LpVector(Vec<f64>);

impl LpVector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() || coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::BadVector);
        }
        Ok(LpVector(coords))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    fn negated(&self) -> LpVector {
        LpVector(self.0.iter().map(|c| -c).collect())
    }
}

/// `(Σ|x_i|^p)^{1/p}`, factored through `max|x_i|` so large `p` cannot overflow.
pub(crate) fn norm_slice(xs: &[f64], p: f64) -> f64 {
    let m = xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if m == 0.0 {
        return 0.0;
    }
    if p == 2.0 {
        let s: f64 = xs.iter().map(|x| (x / m) * (x / m)).sum();
        return m * s.sqrt();
    }
    let s: f64 = xs.iter().map(|x| (x.abs() / m).powf(p)).sum();
    m * s.powf(1.0 / p)
}

pub(crate) fn distance_slice(a: &[f64], b: &[f64], p: f64) -> f64 {
    let m = a
        .iter()
        .zip(b)
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    if m == 0.0 {
        return 0.0;
    }
    let s: f64 = if p == 2.0 {
        a.iter().zip(b).map(|(x, y)| ((x - y) / m).powi(2)).sum()
    } else {
        a.iter().zip(b).map(|(x, y)| ((x - y).abs() / m).powf(p)).sum()
    };
    m * s.powf(1.0 / p)
}

pub fn lp_norm(x: &LpVector, p: PNorm) -> f64 {
    norm_slice(&x.0, p.get())
}

pub fn lp_distance(x: &LpVector, y: &LpVector, p: PNorm) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::Dimension {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    Ok(distance_slice(&x.0, &y.0, p.get()))
}

/// `sgn(x)|x|^e` with `sgn(0) = 0`.
fn signed_pow(x: f64, e: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.abs().powf(e).copysign(x)
    }
}

/// The coordinatewise twist `x_i ↦ sgn(x_i)|x_i|^{p/q}`, for `q ≤ p`.
/// Satisfies `‖twist(x)‖_q = ‖x‖_p^{p/q}`.
pub fn twist(x: &LpVector, p: PNorm, q: PNorm) -> Result<LpVector> {
    if q > p {
        return Err(Error::domain("q", q.get(), "[1, p] for the twist map"));
    }
    let e = p.get() / q.get();
    Ok(LpVector(x.0.iter().map(|&c| signed_pow(c, e)).collect()))
}

/// `|x* − y*| − 2^{1−p/2}·|x − y|^{p/2}` with `x* = sgn(x)|x|^{p/2}`.
/// Non-negative (up to rounding) for every `p ≥ 2`.
pub fn transfer_margin(x: f64, y: f64, p: PNorm) -> Result<f64> {
    let p = p.get();
    if p < 2.0 {
        return Err(Error::domain("p", p, "[2, 1e6] for the transfer inequality"));
    }
    let h = 0.5 * p;
    let lhs = (signed_pow(x, h) - signed_pow(y, h)).abs();
    let rhs = (1.0 - h).exp2() * (x - y).abs().powf(h);
    Ok(lhs - rhs)
}

/// A finite point set on the ℓp sphere of a given radius, with its minimum
/// pairwise distance cached at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct LpCode {
    p: PNorm,
    radius: f64,
    points: Vec<LpVector>,
    min_distance: Option<f64>,
}

impl LpCode {
    pub fn new(p: PNorm, radius: f64, points: Vec<LpVector>) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::domain("radius", radius, "(0, inf)"));
        }
        if let Some(first) = points.first() {
            let n = first.dim();
            for (index, x) in points.iter().enumerate() {
                if x.dim() != n {
                    return Err(Error::Dimension {
                        expected: n,
                        found: x.dim(),
                    });
                }
                let norm = lp_norm(x, p);
                if (norm - radius).abs() > SPHERE_TOL * radius {
                    return Err(Error::OffSphere {
                        index,
                        norm,
                        radius,
                    });
                }
            }
        }
        let min_distance = min_pairwise(&points, p.get());
        Ok(LpCode {
            p,
            radius,
            points,
            min_distance,
        })
    }

    pub fn p(&self) -> PNorm {
        self.p
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn points(&self) -> &[LpVector] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Ambient dimension, 0 for an empty code.
    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, LpVector::dim)
    }

    pub fn min_distance(&self) -> Result<f64> {
        self.min_distance.ok_or(Error::TooFewPoints(self.points.len()))
    }

    /// A new code with `x` appended; the minimum distance is updated
    /// against the existing points only.
    pub fn with_point(&self, x: LpVector) -> Result<LpCode> {
        let mut single = LpCode::new(self.p, self.radius, vec![x])?;
        if let Some(first) = self.points.first() {
            if first.dim() != single.dim() {
                return Err(Error::Dimension {
                    expected: first.dim(),
                    found: single.dim(),
                });
            }
        }
        let x = single.points.pop().expect("one point");
        let nearest = self
            .points
            .iter()
            .map(|y| distance_slice(&x.0, &y.0, self.p.get()))
            .fold(None, |m: Option<f64>, d| Some(m.map_or(d, |m| m.min(d))));
        let min_distance = match (self.min_distance, nearest) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (None, b) => b,
            (a, None) => a,
        };
        let mut points = self.points.clone();
        points.push(x);
        Ok(LpCode {
            p: self.p,
            radius: self.radius,
            points,
            min_distance,
        })
    }
}

fn min_pairwise(points: &[LpVector], p: f64) -> Option<f64> {
    let mut best: Option<f64> = None;
    for (i, x) in points.iter().enumerate() {
        for y in &points[i + 1..] {
            let d = distance_slice(&x.0, &y.0, p);
            best = Some(best.map_or(d, |b| b.min(d)));
        }
    }
    best
}

/// Twists a unit ℓp code onto the unit ℓq sphere (`q ≤ p`).
/// Separation `2d` becomes at least `2d^{p/q}`.
pub fn code_twist(code: &LpCode, q: PNorm) -> Result<LpCode> {
    if (code.radius - 1.0).abs() > 1e-12 {
        return Err(Error::domain("radius", code.radius, "{1} for code_twist"));
    }
    let points = code
        .points
        .iter()
        .map(|x| twist(x, code.p, q))
        .collect::<Result<Vec<_>>>()?;
    LpCode::new(q, 1.0, points)
}

/// Lifts centers in the unit ℓp ball of `ℝⁿ` to the unit ℓp sphere of
/// `ℝⁿ⁺¹` by appending `(1 − ‖x‖_p^p)^{1/p}`.
pub fn lift_to_sphere(centers: &[LpVector], p: PNorm) -> Result<LpCode> {
    let pv = p.get();
    let mut points = Vec::with_capacity(centers.len());
    for (index, x) in centers.iter().enumerate() {
        if let Some(first) = centers.first() {
            if x.dim() != first.dim() {
                return Err(Error::Dimension {
                    expected: first.dim(),
                    found: x.dim(),
                });
            }
        }
        let norm = lp_norm(x, p);
        if norm > 1.0 + SPHERE_TOL {
            return Err(Error::OffSphere {
                index,
                norm,
                radius: 1.0,
            });
        }
        let mut coords = x.0.clone();
        if norm > 1.0 {
            coords.iter_mut().for_each(|c| *c /= norm);
            coords.push(0.0);
        } else {
            let height = (1.0 - norm.powf(pv)).max(0.0).powf(1.0 / pv);
            coords.push(height);
        }
        points.push(LpVector(coords));
    }
    LpCode::new(p, 1.0, points)
}

/// Samples a uniformly distributed point of the unit ℓp sphere.
///
/// Each coordinate is drawn from the density `∝ exp(−|t|^p)` and the vector
/// is normalized. `|t|` is generated as `G^{1/p}·U` with `G ~ Gamma(1 + 1/p)`
/// and `U` uniform, which equals `Gamma(1/p)^{1/p}` in law and does not
/// underflow for large `p`.
#[derive(Debug, Clone)]
pub struct SphereSampler {
    p: f64,
    n: usize,
    gamma: Gamma<f64>,
}

impl SphereSampler {
    pub fn new(n: usize, p: PNorm) -> Self {
        let p = p.get();
        SphereSampler {
            p,
            n,
            gamma: Gamma::new(1.0 + 1.0 / p, 1.0).expect("shape in (1, 2]"),
        }
    }

    fn coordinate<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let g: f64 = self.gamma.sample(rng);
        let u: f64 = rng.gen();
        let t = g.powf(1.0 / self.p) * u;
        if rng.gen::<bool>() {
            t
        } else {
            -t
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> LpVector {
        loop {
            let mut v: Vec<f64> = (0..self.n).map(|_| self.coordinate(rng)).collect();
            let norm = norm_slice(&v, self.p);
            if norm > 0.0 && norm.is_finite() {
                v.iter_mut().for_each(|c| *c /= norm);
                return LpVector(v);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreedyParams {
    pub n: usize,
    pub p: PNorm,
    /// Target half-separation; accepted points are `≥ 2d` apart.
    pub d: f64,
    /// Consecutive random rejections before the code is declared maximal.
    pub trials: u64,
    pub seed: u64,
}

impl GreedyParams {
    pub const DEFAULT_TRIALS: u64 = 100_000;
}

/// Builds a greedy unit ℓp code with pairwise distance at least `2d`.
///
/// Candidates come from three sources, all deterministic given the seed:
///
/// 1. the antipode of every accepted point (saturates `d = 1`);
/// 2. in the plane, an arc walk from the first point that places each new
///    point at exactly distance `2d` from the previous one;
/// 3. uniform random points, until `trials` of them in a row are rejected.
///
/// The result is a lower-bound witness for `A_p(n, d)` up to
/// [`ACCEPT_SLACK`] in the distance comparison.
pub fn greedy_code(params: &GreedyParams) -> Result<LpCode> {
    let GreedyParams {
        n,
        p,
        d,
        trials,
        seed,
    } = *params;
    if n < 2 {
        return Err(Error::domain("n", n as f64, "[2, inf)"));
    }
    if !(d > 0.0 && d <= 1.0) {
        return Err(Error::domain("d", d, "(0, 1]"));
    }
    let pv = p.get();
    let target = 2.0 * d - ACCEPT_SLACK;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sampler = SphereSampler::new(n, p);

    let mut points: Vec<LpVector> = Vec::new();
    let fits = |points: &[LpVector], x: &LpVector| {
        points
            .iter()
            .all(|y| distance_slice(&x.0, &y.0, pv) >= target)
    };
    let try_push = |points: &mut Vec<LpVector>, x: LpVector| -> bool {
        if fits(points, &x) {
            let antipode = x.negated();
            points.push(x);
            if fits(points, &antipode) {
                points.push(antipode);
            }
            true
        } else {
            false
        }
    };

    let first = sampler.sample(&mut rng);
    if n == 2 {
        let start = first.0[1].atan2(first.0[0]);
        for x in arc_walk(start, pv, d) {
            if !try_push(&mut points, x) {
                break;
            }
        }
    } else {
        try_push(&mut points, first);
    }

    let mut rejections = 0;
    while rejections < trials {
        if try_push(&mut points, sampler.sample(&mut rng)) {
            rejections = 0;
        } else {
            rejections += 1;
        }
    }
    LpCode::new(p, 1.0, points)
}

/// The point of the unit ℓp circle in direction `phi`.
fn circle_point(phi: f64, p: f64) -> [f64; 2] {
    let v = [phi.cos(), phi.sin()];
    let norm = norm_slice(&v, p);
    [v[0] / norm, v[1] / norm]
}

/// Points on the unit ℓp circle starting at direction `start`, each at
/// distance `2d` (rounded up) from the previous, covering one turn.
///
/// Distance from a fixed point grows monotonically as the second point
/// moves toward its antipode, so each step is found by bisection on
/// `[0, π]`.
fn arc_walk(start: f64, p: f64, d: f64) -> Vec<LpVector> {
    let mut out = vec![];
    let mut phi = start;
    let mut current = circle_point(phi, p);
    out.push(LpVector(current.to_vec()));
    loop {
        let (mut lo, mut hi) = (0.0, PI);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if distance_slice(&circle_point(phi + mid, p), &current, p) >= 2.0 * d {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        phi += hi;
        if phi - start >= 2.0 * PI {
            break;
        }
        current = circle_point(phi, p);
        out.push(LpVector(current.to_vec()));
    }
    out
}

/// The largest number of points on a circle with pairwise angle at least
/// `θ`: `⌊2π/θ⌋`.
pub fn circle_code_capacity(theta: f64) -> Result<usize> {
    if !(theta > 0.0 && theta <= PI) {
        return Err(Error::domain("theta", theta, "(0, pi]"));
    }
    Ok((2.0 * PI / theta + CAPACITY_SLACK).floor() as usize)
}

/// Outcome of checking a planar ℓp code against the exact circle bound
/// after twisting it onto the Euclidean circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainCheck {
    /// `⌊2π/θ⌋` for `θ = 2·arcsin(d^{p/2})`.
    pub oracle: usize,
    pub count: usize,
    /// Minimum Euclidean distance after twisting, if at least two points.
    pub twisted_min_distance: Option<f64>,
    pub pass: bool,
}

/// Verifies `|code| ≤ A_2(2, d^{p/2})` and the pairwise twisted separation
/// for a planar unit ℓp code built at half-separation `d`, `p ≥ 2`.
pub fn circle_chain(code: &LpCode, d: f64) -> Result<ChainCheck> {
    let p = code.p().get();
    if p < 2.0 {
        return Err(Error::domain("p", p, "[2, 1e6] for the twist onto the circle"));
    }
    if code.dim() != 2 && !code.is_empty() {
        return Err(Error::Dimension {
            expected: 2,
            found: code.dim(),
        });
    }
    if !(d > 0.0 && d <= 1.0) {
        return Err(Error::domain("d", d, "(0, 1]"));
    }
    let shrunk = d.powf(0.5 * p).min(1.0);
    let oracle = circle_code_capacity(2.0 * shrunk.asin())?;
    let twisted = code_twist(code, PNorm::new(2.0)?)?;
    let twisted_min_distance = twisted.min_distance().ok();
    let separated = twisted_min_distance.is_none_or(|m| m >= 2.0 * shrunk - SPHERE_TOL);
    Ok(ChainCheck {
        oracle,
        count: code.len(),
        twisted_min_distance,
        pass: separated && code.len() <= oracle,
    })
}

/// Exported witness for a greedy code, with the planar chain check when
/// it applies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeWitness {
    pub n: usize,
    pub p: f64,
    pub d: f64,
    pub count: usize,
    pub seed: u64,
    pub oracle: Option<usize>,
    pub chain_pass: Option<bool>,
    pub points: Vec<Vec<f64>>,
}

impl CodeWitness {
    pub fn new(params: &GreedyParams, code: &LpCode, chain: Option<ChainCheck>) -> Self {
        CodeWitness {
            n: params.n,
            p: params.p.get(),
            d: params.d,
            count: code.len(),
            seed: params.seed,
            oracle: chain.map(|c| c.oracle),
            chain_pass: chain.map(|c| c.pass),
            points: code.points().iter().map(|x| x.coords().to_vec()).collect(),
        }
    }
}
