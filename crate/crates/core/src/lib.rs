//! Upper bounds on the exponential rate of translative ℓp-ball packing
//! densities in high dimensions.
//!
//! All exponents are in bits per dimension: a value `g` means a packing
//! density of at most `2^{(g + o(1)) n}` in dimension `n`.
//!
//! | module | contents |
//! |--------|----------|
//! | [`specialfn`] | `log₂Γ` and entropy-style helpers |
//! | [`optimize`] | bracketed scan plus golden-section minimization |
//! | [`bounds`] | every closed-form bound and its optimized curve in `p` |
//! | [`geometry`] | ℓp vectors, spherical codes, the twist map and the hemisphere lift |
//! | [`volumes`] | ℓp-ball volumes, the volume exponent `b(p)`, Monte Carlo checks |

pub mod bounds;
pub mod error;
pub mod geometry;
pub mod optimize;
pub mod specialfn;
pub mod volumes;

pub use bounds::{Angle, ExponentBound, Method, PNorm};
pub use error::{Error, Result};
pub use geometry::{LpCode, LpVector};
