//! Quenched free energies by Monte Carlo over disorder replicas, exact
//! annealed free energies by root-finding on the Laplace transform, and the
//! `1/N` finite-size extrapolation connecting them.
//!
//! Replicas get deterministic fields keyed by `(seed, replica)` and are
//! evaluated in parallel; aggregation runs in replica order with compensated
//! sums, so an estimate is bit-stable for a given replica set regardless of
//! thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::disorder::DisorderLaw;
use crate::error::{Error, Result};
use crate::numerics::{self, bisect_decreasing};
use crate::partition::Model;
use crate::renewal::ReturnLaw;
use crate::rng::RNG_ALGORITHM;

/// Default replica count for Monte Carlo estimates.
pub const DEFAULT_REPLICAS: usize = 256;

/// Default size ladder `2^10 .. 2^14` for finite-size extrapolation.
pub fn default_size_ladder() -> Vec<usize> {
    vec![1024, 2048, 4096, 8192, 16384]
}

/// A Monte Carlo estimate of `(1/N) E[ln Z^c_N]`, in nats per monomer.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FreeEnergyEstimate {
    pub model: String,
    pub coupling: f64,
    pub h: f64,
    pub n: usize,
    pub replicas: usize,
    pub seed: u64,
    pub value: f64,
    pub stderr: f64,
    /// Generator recorded so manifests can replay the estimate.
    pub rng_algorithm: String,
}

/// Quenched free energy: mean over replicas of `(1/N) ln Z^c_N`.
pub fn quenched_free_energy(
    law: &ReturnLaw,
    dlaw: &DisorderLaw,
    model: &Model,
    n: usize,
    replicas: usize,
    seed: u64,
) -> Result<FreeEnergyEstimate> {
    if n == 0 {
        return Err(Error::InvalidParameter("system size must be positive".into()));
    }
    if replicas < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 replicas, got {replicas}"
        )));
    }
    let per_replica: Vec<Result<f64>> = (0..replicas)
        .into_par_iter()
        .map(|r| {
            let field = dlaw.sample_field(n, seed, r as u64);
            let curve = model.constrained(law, &field, n)?;
            Ok(curve.last() / n as f64)
        })
        .collect();
    let mut values = Vec::with_capacity(replicas);
    for v in per_replica {
        values.push(v?);
    }
    let (value, stderr) = numerics::mean_and_stderr(&values);
    Ok(FreeEnergyEstimate {
        model: model.tag().as_str().to_string(),
        coupling: model.coupling(),
        h: model.h(),
        n,
        replicas,
        seed,
        value,
        stderr,
        rng_algorithm: RNG_ALGORITHM.to_string(),
    })
}

/// Which side of the transition an annealed solution sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    Localized,
    CriticalOrDelocalized,
}

/// Exact annealed free energy with the defect of its characteristic equation.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct AnnealedSolution {
    pub f_a: f64,
    pub residual: f64,
    pub regime: Regime,
}

/// Annealed pinning free energy: for `h > 0` the unique `F > 0` solving
/// `Σ_n K(n) e^{-Fn} = e^{-h}`; zero for `h <= 0`.
///
/// The bracket `[0, h + ln(1/K(1)) + 1]` provably contains the root: the
/// left side is 1 at `F = 0` and below `e^{-F} < e^{-h}` at the right end.
///
/// ```
/// use pinlab::free_energy::annealed_pinning;
/// use pinlab::renewal::ReturnLaw;
/// // Geometric test law K(n) = 2^{-n}: at h = ln 3 the root is F = ln 2.
/// let mass: Vec<f64> = (1..=60).map(|n| 0.5f64.powi(n)).collect();
/// let law = ReturnLaw::test_law(&mass).unwrap();
/// let sol = annealed_pinning(&law, 3f64.ln());
/// assert!((sol.f_a - 2f64.ln()).abs() < 1e-10);
/// ```
pub fn annealed_pinning(law: &ReturnLaw, h: f64) -> AnnealedSolution {
    if h <= 0.0 {
        return AnnealedSolution {
            f_a: 0.0,
            residual: 1.0 - (-h).exp(),
            regime: Regime::CriticalOrDelocalized,
        };
    }
    let log_lhs = |f: f64| law.log_laplace_shifted(|n| -f * n as f64);
    let hi = h + (1.0 / law.mass(1)).ln() + 1.0;
    let (root, _) = bisect_decreasing(|f| log_lhs(f) + h, 0.0, hi, 1e-13, 200);
    AnnealedSolution {
        f_a: root,
        residual: log_lhs(root).exp() - (-h).exp(),
        regime: Regime::Localized,
    }
}

/// Annealed copolymer free energy. Averaging the sign-integrated excursion
/// weight over the disorder cancels the `h_a(λ)` shift exactly, leaving the
/// per-gap weight `½(1 + e^{2λhn})`; for `h > 0` solve
/// `Σ_n K(n) ½(1 + e^{2λhn}) e^{-Fn} = 1` for `F > 0` (the left side exceeds
/// 1 at `F = 0`, so the root always exists for the truncated law).
pub fn annealed_copolymer(
    law: &ReturnLaw,
    dlaw: &DisorderLaw,
    lambda: f64,
    h: f64,
) -> Result<AnnealedSolution> {
    if !(lambda >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "copolymer coupling must be nonnegative, got {lambda}"
        )));
    }
    dlaw.log_mgf(-2.0 * lambda)?; // domain check
    let rate = 2.0 * lambda * h;
    if h <= 0.0 || lambda == 0.0 {
        let log_lhs0 = law.log_laplace_shifted(|n| {
            numerics::log_half_one_plus_exp(rate * n as f64)
        });
        return Ok(AnnealedSolution {
            f_a: 0.0,
            residual: log_lhs0.exp() - 1.0,
            regime: Regime::CriticalOrDelocalized,
        });
    }
    let log_lhs = |f: f64| {
        law.log_laplace_shifted(|n| {
            numerics::log_half_one_plus_exp(rate * n as f64) - f * n as f64
        })
    };
    let hi = rate + (1.0 / law.mass(1)).ln() + 1.0;
    let (root, _) = bisect_decreasing(&log_lhs, 0.0, hi, 1e-13, 200);
    Ok(AnnealedSolution {
        f_a: root,
        residual: log_lhs(root).exp() - 1.0,
        regime: Regime::Localized,
    })
}

/// Fit `value(N) = f_inf + a/N` by weighted least squares over at least
/// three sizes; returns the intercept and its standard error (inflated by
/// the fit residual). The `1/N` class is a convention — the convergence rate
/// is not pinned down theoretically, which output metadata should flag.
pub fn extrapolate(estimates: &[FreeEnergyEstimate]) -> Result<(f64, f64)> {
    if estimates.len() < 3 {
        return Err(Error::InsufficientData {
            need: 3,
            have: estimates.len(),
        });
    }
    let first = &estimates[0];
    for e in estimates {
        if e.model != first.model || e.coupling != first.coupling || e.h != first.h {
            return Err(Error::InvalidParameter(
                "extrapolation requires a common (model, coupling, h)".into(),
            ));
        }
    }
    let xs: Vec<f64> = estimates.iter().map(|e| 1.0 / e.n as f64).collect();
    let ys: Vec<f64> = estimates.iter().map(|e| e.value).collect();
    let sig: Vec<f64> = estimates.iter().map(|e| e.stderr).collect();
    let (intercept, _slope, err) = numerics::weighted_line_fit(&xs, &ys, &sig);
    Ok((intercept, err))
}

/// Asymptotic Jensen lower bound for the pinning model:
/// `F(β, cβ²)/β² >= (1/μ)(c - 1/(2μ))` as `β ↓ 0`.
pub fn jensen_pinning_bound(c: f64, mu: f64) -> f64 {
    assert!(mu > 0.0, "mean return time must be positive");
    (c - 1.0 / (2.0 * mu)) / mu
}

/// Asymptotic Jensen lower bound for the copolymer:
/// `F(λ, cλ)/λ² >= c - 1/2` as `λ ↓ 0`.
pub fn jensen_copolymer_bound(c: f64) -> f64 {
    c - 0.5
}
