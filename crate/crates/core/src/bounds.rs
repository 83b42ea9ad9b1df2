//! Closed-form upper bounds on the packing exponent `γ_p` and the
//! one-dimensional optimizations that turn them into curves in `p`.
//!
//! For `p ≥ 2` the bound comes from mapping an ℓp code onto a Euclidean
//! spherical code and applying the Kabatiansky–Levenshtein exponent
//!
//! ```text
//! a(θ) = (1+s)/(2s) · log₂((1+s)/(2s)) − (1−s)/(2s) · log₂((1−s)/(2s)),   s = sin θ
//! γ_p ≤ inf_{0<θ<π/2}  a(θ) + (2/p) · log₂ sin(θ/2)
//! ```
//!
//! For `1 ≤ p < 2` the best bound is the smaller of Rankin's bound and
//! the Euclidean bound transported through the volume exponent `b(p)`.
//!
//! Each of `a(θ)`'s two terms is evaluated through `v = (1 − s)/(2s)` with
//! `1 − sin θ = 2 sin²((π/2 − θ)/2)`, so the exponent keeps full relative
//! precision as `θ → π/2`. That matters for large `p`, where the gain over
//! `−1/p` is of order `1/(p² ln p)`.

use std::f64::consts::{FRAC_PI_2, LN_2, LOG2_E};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::optimize::ScanGolden;
use crate::specialfn::{ln_gamma_positive, LN_4};

/// Lower end of the θ scan. `a(θ) → +∞` as `θ → 0`, so the minimum is
/// never near here.
pub const THETA_SCAN_MIN: f64 = 1e-6;

/// An ℓp exponent `p ∈ [1, 10⁶]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct PNorm(f64);

impl PNorm {
    pub const MIN: f64 = 1.0;
    pub const MAX: f64 = 1e6;

    pub fn new(p: f64) -> Result<Self> {
        if p.is_finite() && (Self::MIN..=Self::MAX).contains(&p) {
            Ok(PNorm(p))
        } else {
            Err(Error::domain("p", p, "[1, 1e6]"))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl fmt::Display for PNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// An angle `θ ∈ (0, π/2]` in radians.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Angle(f64);

impl Angle {
    pub fn new(theta: f64) -> Result<Self> {
        if theta.is_finite() && theta > 0.0 && theta <= FRAC_PI_2 {
            Ok(Angle(theta))
        } else {
            Err(Error::domain("theta", theta, "(0, pi/2]"))
        }
    }

    pub fn right() -> Self {
        Angle(FRAC_PI_2)
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Which bound produced a value. The declaration order is the tie-break
/// order for [`best_upper_bound`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// `inf_θ a(θ) + (2/p)·log₂ sin(θ/2)`, valid for `p ≥ 2`.
    New,
    /// Rankin's constrained bound for `1 ≤ p ≤ 2`.
    Rankin,
    /// `κ_KL − b(2) + b(p)` for `1 ≤ p ≤ 2`.
    KlTransfer,
    /// `−1/p` for `p ≥ 2`.
    Vdcs,
    /// Minimum over the methods applicable at `p`.
    Composite,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::New,
        Method::Rankin,
        Method::KlTransfer,
        Method::Vdcs,
        Method::Composite,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::New => "new",
            Method::Rankin => "rankin",
            Method::KlTransfer => "kl_transfer",
            Method::Vdcs => "vdcs",
            Method::Composite => "composite",
        }
    }

    /// Human-readable range of `p` where the method applies.
    pub fn regime(self) -> &'static str {
        match self {
            Method::New | Method::Vdcs => "p in [2, 1e6]",
            Method::Rankin | Method::KlTransfer => "p in [1, 2]",
            Method::Composite => "p in [1, 1e6]",
        }
    }

    pub fn applies_to(self, p: PNorm) -> bool {
        match self {
            Method::New | Method::Vdcs => p.get() >= 2.0,
            Method::Rankin | Method::KlTransfer => p.get() <= 2.0,
            Method::Composite => true,
        }
    }

    pub fn evaluate(self, p: PNorm) -> Result<ExponentBound> {
        match self {
            Method::New => minimize_superball(p),
            Method::Rankin => rankin_bound(p),
            Method::KlTransfer => kl_transfer_bound(p),
            Method::Vdcs => vdcs_bound(p),
            Method::Composite => Ok(best_upper_bound(p)),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown method {s:?}"))
    }
}

/// An upper bound on `γ_p`, in bits per dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentBound {
    pub p: PNorm,
    pub value: f64,
    pub method: Method,
    /// `θ*` for [`Method::New`], `1/q*` for [`Method::Rankin`].
    pub argmin: Option<f64>,
    /// The winning method when `method` is [`Method::Composite`].
    pub source: Option<Method>,
}

impl ExponentBound {
    fn plain(p: PNorm, value: f64, method: Method, argmin: Option<f64>) -> Self {
        ExponentBound {
            p,
            value,
            method,
            argmin,
            source: None,
        }
    }
}

/// `v = (1 − sin θ)/(2 sin θ)`, accurate near `θ = π/2`.
fn half_cosecant_gap(theta: f64) -> f64 {
    let eta = FRAC_PI_2 - theta;
    let one_minus_s = 2.0 * (0.5 * eta).sin().powi(2);
    let s = eta.cos();
    one_minus_s / (2.0 * s)
}

fn kl_exponent_raw(theta: f64) -> f64 {
    let v = half_cosecant_gap(theta);
    if v == 0.0 {
        return 0.0;
    }
    // u = 1 + v, so u·ln u = (1 + v)·ln1p(v).
    ((1.0 + v) * v.ln_1p() - v * v.ln()) / LN_2
}

fn superball_raw(p: f64, theta: f64) -> f64 {
    kl_exponent_raw(theta) + (2.0 / p) * (0.5 * theta).sin().log2()
}

/// The Kabatiansky–Levenshtein code exponent `a(θ)`; `a(π/2) = 0`.
pub fn kl_exponent(theta: Angle) -> f64 {
    kl_exponent_raw(theta.0)
}

/// `a(θ) + log₂ sin(θ/2)`, the Euclidean packing exponent at parameter `θ`.
pub fn sphere_exponent(theta: Angle) -> f64 {
    kl_exponent_raw(theta.0) + (0.5 * theta.0).sin().log2()
}

/// `a(θ) + (2/p)·log₂ sin(θ/2)` for `p ≥ 2`.
pub fn superball_exponent(p: PNorm, theta: Angle) -> Result<f64> {
    require_at_least_two(p)?;
    Ok(superball_raw(p.0, theta.0))
}

/// Minimizes [`superball_exponent`] over `θ ∈ [10⁻⁶, π/2]`.
pub fn minimize_superball(p: PNorm) -> Result<ExponentBound> {
    require_at_least_two(p)?;
    let pv = p.0;
    let m = ScanGolden::default().minimize(|t| superball_raw(pv, t), THETA_SCAN_MIN, FRAC_PI_2);
    Ok(ExponentBound::plain(p, m.value, Method::New, Some(m.x)))
}

/// The Euclidean optimum `κ_KL` (value) and `θ_KL` (argmin), computed once.
pub fn kl_constants() -> &'static ExponentBound {
    static KL: OnceLock<ExponentBound> = OnceLock::new();
    KL.get_or_init(|| minimize_superball(PNorm(2.0)).expect("p = 2 is in range"))
}

pub fn kappa_kl() -> f64 {
    kl_constants().value
}

pub fn theta_kl() -> f64 {
    kl_constants().argmin.expect("minimize_superball records its argmin")
}

fn b_raw(p: f64) -> f64 {
    1.0 + ln_gamma_positive(1.0 + 1.0 / p) / LN_2 + (p.log2() + LOG2_E) / p
}

/// `b(p) = lim (1/n)·log₂ vol B_p^n(n^{1/p}) = 1 + log₂Γ(1 + 1/p) + (1/p)·log₂(pe)`.
pub fn b_exponent(p: PNorm) -> f64 {
    b_raw(p.0)
}

/// Rankin's objective at `x = 1/q`.
fn rankin_objective(p: f64, b_p: f64, x: f64) -> f64 {
    (b_p - b_raw(1.0 / x)) - 1.0 + 1.0 / p + (x - 1.0 / p) * ((2.0 - x) / (1.0 - x)).log2()
}

/// The feasible interval for `1/q` in Rankin's bound.
pub fn rankin_interval(p: PNorm) -> (f64, f64) {
    (0.5, (1.0 + 1.0 / p.0) / 3.0)
}

/// Rankin's bound, minimized over `1/q ∈ [1/2, (1 + 1/p)/3]`; valid for `1 ≤ p ≤ 2`.
pub fn rankin_bound(p: PNorm) -> Result<ExponentBound> {
    if p.0 > 2.0 {
        return Err(Error::domain("p", p.0, "[1, 2] for the Rankin bound"));
    }
    let pv = p.0;
    let b_p = b_raw(pv);
    let (lo, hi) = rankin_interval(p);
    let m = ScanGolden::default().minimize(|x| rankin_objective(pv, b_p, x), lo, hi);
    Ok(ExponentBound::plain(p, m.value, Method::Rankin, Some(m.x)))
}

/// `κ_KL − b(2) + b(p)` for `1 ≤ p ≤ 2`.
pub fn kl_transfer_bound(p: PNorm) -> Result<ExponentBound> {
    if p.0 > 2.0 {
        return Err(Error::domain("p", p.0, "[1, 2] for the transferred bound"));
    }
    // Grouped so that p = 2 returns κ_KL bit for bit.
    let value = kappa_kl() + (b_raw(p.0) - b_raw(2.0));
    Ok(ExponentBound::plain(p, value, Method::KlTransfer, None))
}

/// The classical `−1/p` bound for `p ≥ 2`.
pub fn vdcs_bound(p: PNorm) -> Result<ExponentBound> {
    require_at_least_two(p)?;
    Ok(ExponentBound::plain(p, -1.0 / p.0, Method::Vdcs, None))
}

/// The smallest applicable bound at `p`, tagged [`Method::Composite`].
pub fn best_upper_bound(p: PNorm) -> ExponentBound {
    let candidates = if p.0 < 2.0 {
        [rankin_bound(p), kl_transfer_bound(p)]
    } else {
        [minimize_superball(p), vdcs_bound(p)]
    };
    let best = candidates
        .into_iter()
        .map(|c| c.expect("candidates are applicable for this p"))
        .reduce(|best, c| if c.value < best.value { c } else { best })
        .expect("two candidates");
    ExponentBound {
        method: Method::Composite,
        source: Some(best.method),
        ..best
    }
}

/// `−1/p − 1/(ln 4 · p² · ln p)`, the two leading terms of the bound as `p → ∞`.
pub fn asymptotic_large_p(p: PNorm) -> Result<f64> {
    let pv = p.0;
    if pv < 10.0 {
        return Err(Error::domain("p", pv, "[10, 1e6] for the large-p expansion"));
    }
    Ok(-1.0 / pv - 1.0 / (LN_4 * pv * pv * pv.ln()))
}

/// The bound at `p = 2 + ε` with `θ` frozen at `θ_KL`:
/// `κ_KL − (ε/(2+ε))·log₂ sin(θ_KL/2)`.
pub fn asymptotic_near_2(epsilon: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::domain("epsilon", epsilon, "[0, 1]"));
    }
    Ok(kappa_kl() - (epsilon / (2.0 + epsilon)) * (0.5 * theta_kl()).sin().log2())
}

/// `d/dp` of the fixed-`θ_KL` bound at `p = 2`: `−½·log₂ sin(θ_KL/2)`.
pub fn near_2_slope() -> f64 {
    -0.5 * (0.5 * theta_kl()).sin().log2()
}

fn require_at_least_two(p: PNorm) -> Result<()> {
    if p.0 < 2.0 {
        Err(Error::domain("p", p.0, "[2, 1e6]"))
    } else {
        Ok(())
    }
}
