//! # pinlab
//!
//! A numerical laboratory for disordered pinning and copolymer models built
//! on heavy-tailed renewal processes.
//!
//! The crate computes, per disorder realization, exact log-domain recursions
//! for constrained partition functions; quenched free energies by replica
//! Monte Carlo with error bars; exact annealed free energies by root-finding
//! on the Laplace transform of the return law; critical-curve estimates with
//! honest brackets; and machine-checked evaluations of the
//! change-of-measure / fractional-moment machinery, including a feasibility
//! certificate for the coarse-graining constants.
//!
//! ## Layout
//!
//! | module | contents |
//! |--------|----------|
//! | [`renewal`] | return laws `K(n) ∝ φ(n)/n^{1+α}`, mass function `u(n)`, conditioned contacts, sampling |
//! | [`disorder`] | Gaussian / ±1 disorder, closed-form `Λ`, exponential tilting, reproducible fields |
//! | [`partition`] | constrained & free log-partition recursions, homogeneous and tilted-annealed variants |
//! | [`free_energy`] | quenched Monte Carlo estimates, annealed root-solves, `1/N` extrapolation, Jensen bounds |
//! | [`critical`] | critical-point bisection, slope scans, smoothing checks |
//! | [`bounds`] | entropy costs, Hölder bounds, basic estimate, coarse-graining certificate |
//! | [`verify`] | the machine-checkable criteria behind `pinlab verify` and the acceptance suite |
//!
//! ## Quick taste
//!
//! ```
//! use pinlab::renewal::{PhiKind, ReturnLaw, renewal_mass};
//!
//! // A finite-mean heavy tail: K(n) ∝ n^{-3}, truncated at 10^4.
//! let law = ReturnLaw::heavy_tailed(2.0, PhiKind::Constant(1.0), 10_000).unwrap();
//! let u = renewal_mass(&law, 2_000);
//! // Contact probabilities settle at 1/μ.
//! assert!((u.u(2_000) - 1.0 / law.mu()).abs() < 1e-3);
//! ```
//!
//! Everything is deterministic given `(seed, replica)`: disorder fields come
//! from a counter-mode stream ([`rng::RNG_ALGORITHM`]) and replica
//! aggregation is order-fixed, so results are bit-stable across thread
//! counts.

pub mod bounds;
pub mod critical;
pub mod disorder;
pub mod error;
pub mod free_energy;
pub mod numerics;
pub mod partition;
pub mod renewal;
pub mod rng;
pub mod verify;

pub use error::{Error, Result};
