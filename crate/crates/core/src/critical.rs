//! Critical-curve location and weak-coupling diagnostics.
//!
//! "F = 0" is not decidable numerically, so the transition is located by
//! bisecting on the bias `h` with a positivity cutoff `θ` (nats per monomer)
//! and 4σ decision margins: a point is called localized when the
//! extrapolated free energy clears `θ` by four standard errors, delocalized
//! when it sits below by the same margin, and otherwise the bisection leans
//! on the point estimate while recording that the call was soft. The
//! returned bracket is always honest.

use serde::{Deserialize, Serialize};

use crate::disorder::DisorderLaw;
use crate::error::{Error, Result};
use crate::free_energy::{self, quenched_free_energy, FreeEnergyEstimate};
use crate::numerics::bisect_decreasing;
use crate::partition::Model;
use crate::renewal::ReturnLaw;

/// Decision margin, in standard errors.
pub const DECISION_SIGMAS: f64 = 4.0;

/// Slack factor absorbing the smoothing inequality's `A → 1` prefactor and
/// estimation error at desk-scale couplings.
pub const SMOOTHING_SLACK: f64 = 1.5;

/// Search configuration for critical-point bisection.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Size ladder for finite-size extrapolation (at least three sizes).
    pub sizes: Vec<usize>,
    pub replicas: usize,
    /// Free-energy positivity cutoff `θ`, nats per monomer.
    pub threshold: f64,
    /// Bisection stops once the bracket is narrower than this.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            sizes: free_energy::default_size_ladder(),
            replicas: free_energy::DEFAULT_REPLICAS,
            threshold: 1e-4,
            tol: 1e-3,
            max_iter: 40,
            seed: 0,
        }
    }
}

/// Which model family a scan runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Pinning,
    Copolymer,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Pinning => "pinning",
            ModelKind::Copolymer => "copolymer",
        }
    }

    fn model(self, dlaw: &DisorderLaw, coupling: f64, h: f64) -> Result<Model> {
        match self {
            ModelKind::Pinning => Model::pinning(dlaw, coupling, h),
            ModelKind::Copolymer => Model::copolymer(dlaw, coupling, h),
        }
    }

    /// Upper end of the initial bracket: `Λ(β)` for pinning, `h_a(λ)` for
    /// the copolymer.
    pub fn bracket_top(self, dlaw: &DisorderLaw, coupling: f64) -> Result<f64> {
        match self {
            ModelKind::Pinning => dlaw.annealed_shift_pinning(coupling),
            ModelKind::Copolymer => dlaw.annealed_shift_copolymer(coupling),
        }
    }
}

/// How one bisection evaluation was classified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decision {
    Localized,
    Delocalized,
    /// Error bars straddle the cutoff; the point estimate leans localized.
    LeanLocalized,
    LeanDelocalized,
}

/// One bisection step: the probed bias and the extrapolated free energy.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct BisectionStep {
    pub h: f64,
    pub f: f64,
    pub err: f64,
    pub decision: Decision,
}

/// A located critical point with its honest bracket and per-step record.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CriticalPointEstimate {
    pub model: ModelKind,
    pub coupling: f64,
    pub h_c: f64,
    pub h_lo: f64,
    pub h_hi: f64,
    pub threshold: f64,
    pub diagnostics: Vec<BisectionStep>,
}

impl CriticalPointEstimate {
    pub fn bracket_width(&self) -> f64 {
        self.h_hi - self.h_lo
    }
}

/// Extrapolated free energy at a single `(coupling, h)`: ladder of quenched
/// estimates, then the `1/N` fit. Returns `(f_inf, stderr)`.
pub fn extrapolated_free_energy(
    law: &ReturnLaw,
    dlaw: &DisorderLaw,
    kind: ModelKind,
    coupling: f64,
    h: f64,
    cfg: &SearchConfig,
) -> Result<(f64, f64)> {
    let model = kind.model(dlaw, coupling, h)?;
    let estimates: Vec<FreeEnergyEstimate> = cfg
        .sizes
        .iter()
        .map(|&n| quenched_free_energy(law, dlaw, &model, n, cfg.replicas, cfg.seed))
        .collect::<Result<_>>()?;
    free_energy::extrapolate(&estimates)
}

fn classify(f: f64, err: f64, threshold: f64) -> Decision {
    let margin = DECISION_SIGMAS * err;
    if f - margin > threshold {
        Decision::Localized
    } else if f + margin < threshold {
        Decision::Delocalized
    } else if f > threshold {
        Decision::LeanLocalized
    } else {
        Decision::LeanDelocalized
    }
}

fn is_localized_side(d: Decision) -> bool {
    matches!(d, Decision::Localized | Decision::LeanLocalized)
}

/// Bisection on `h` for the critical bias `h_c(coupling)`.
///
/// Initial bracket `[0, Λ(β)]` (pinning) or `[0, h_a(λ)]` (copolymer). At
/// zero coupling the annealed reduction applies (`F_a(h) > 0` iff `h > 0`)
/// and `h_c = 0` is returned without Monte Carlo.
pub fn critical_point(
    law: &ReturnLaw,
    dlaw: &DisorderLaw,
    kind: ModelKind,
    coupling: f64,
    cfg: &SearchConfig,
) -> Result<CriticalPointEstimate> {
    if !(coupling >= 0.0) || !coupling.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "coupling must be nonnegative, got {coupling}"
        )));
    }
    if coupling == 0.0 {
        return Ok(CriticalPointEstimate {
            model: kind,
            coupling,
            h_c: 0.0,
            h_lo: -cfg.tol,
            h_hi: cfg.tol,
            threshold: cfg.threshold,
            diagnostics: Vec::new(),
        });
    }

    let mut h_lo = 0.0f64;
    let mut h_hi = kind.bracket_top(dlaw, coupling)?;
    let mut diagnostics = Vec::new();

    let eval = |h: f64, diagnostics: &mut Vec<BisectionStep>| -> Result<Decision> {
        let (f, err) = extrapolated_free_energy(law, dlaw, kind, coupling, h, cfg)?;
        let decision = classify(f, err, cfg.threshold);
        diagnostics.push(BisectionStep { h, f, err, decision });
        Ok(decision)
    };

    let lo_decision = eval(h_lo, &mut diagnostics)?;
    let hi_decision = eval(h_hi, &mut diagnostics)?;
    if lo_decision == Decision::Localized || hi_decision == Decision::Delocalized {
        let f_lo = diagnostics[0].f;
        let f_hi = diagnostics[1].f;
        return Err(Error::Bracket { f_lo, f_hi });
    }

    let mut iters = 0;
    while h_hi - h_lo > cfg.tol && iters < cfg.max_iter {
        let mid = 0.5 * (h_lo + h_hi);
        let decision = eval(mid, &mut diagnostics)?;
        if is_localized_side(decision) {
            h_hi = mid;
        } else {
            h_lo = mid;
        }
        iters += 1;
    }

    Ok(CriticalPointEstimate {
        model: kind,
        coupling,
        h_c: 0.5 * (h_lo + h_hi),
        h_lo,
        h_hi,
        threshold: cfg.threshold,
        diagnostics,
    })
}

/// The weak-coupling slope limit: `α/(2(1+α)μ)` for `h_c(β)/β²` (pinning),
/// `α/(2(1+α))` for `h_c(λ)/λ` (copolymer).
pub fn predicted_slope_limit(kind: ModelKind, alpha: f64, mu: f64) -> f64 {
    match kind {
        ModelKind::Pinning => alpha / (2.0 * (1.0 + alpha) * mu),
        ModelKind::Copolymer => alpha / (2.0 * (1.0 + alpha)),
    }
}

/// One row of a slope scan.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanRow {
    pub coupling: f64,
    pub h_lo: f64,
    pub h_c: f64,
    pub h_hi: f64,
    /// `h_c/β²` for pinning, `h_c/λ` for the copolymer.
    pub ratio: f64,
    pub predicted: f64,
}

/// Normalized critical-curve ratios along a descending coupling ladder.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SlopeScan {
    pub model: ModelKind,
    pub alpha: f64,
    pub mu: f64,
    pub predicted: f64,
    pub rows: Vec<ScanRow>,
    /// Whether `|ratio - predicted|` is nonincreasing along the scan.
    pub monotone_trend: bool,
}

/// Run [`critical_point`] along a descending ladder of couplings and compare
/// the normalized ratios to the universal limit.
pub fn slope_scan(
    law: &ReturnLaw,
    dlaw: &DisorderLaw,
    kind: ModelKind,
    couplings: &[f64],
    cfg: &SearchConfig,
) -> Result<SlopeScan> {
    if couplings.is_empty() {
        return Err(Error::InvalidParameter("empty coupling list".into()));
    }
    for w in couplings.windows(2) {
        if !(w[1] < w[0]) {
            return Err(Error::InvalidParameter(
                "couplings must be strictly descending".into(),
            ));
        }
    }
    if !(couplings[couplings.len() - 1] > 0.0) {
        return Err(Error::InvalidParameter("couplings must be positive".into()));
    }
    let alpha = law.alpha().ok_or_else(|| {
        Error::InvalidParameter("slope limits require a heavy-tailed production law".into())
    })?;
    let predicted = predicted_slope_limit(kind, alpha, law.mu());

    let mut rows = Vec::with_capacity(couplings.len());
    for &coupling in couplings {
        let est = critical_point(law, dlaw, kind, coupling, cfg)?;
        let ratio = match kind {
            ModelKind::Pinning => est.h_c / (coupling * coupling),
            ModelKind::Copolymer => est.h_c / coupling,
        };
        rows.push(ScanRow {
            coupling,
            h_lo: est.h_lo,
            h_c: est.h_c,
            h_hi: est.h_hi,
            ratio,
            predicted,
        });
    }
    let monotone_trend = rows
        .windows(2)
        .all(|w| (w[1].ratio - predicted).abs() <= (w[0].ratio - predicted).abs());

    Ok(SlopeScan {
        model: kind,
        alpha,
        mu: law.mu(),
        predicted,
        rows,
        monotone_trend,
    })
}

/// Outcome of one smoothing-inequality test point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    /// Error bars straddle the bound; not counted as a violation.
    Inconclusive,
    Violation,
}

/// One smoothing test point at displacement `t` from the estimated `h_c`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SmoothingPoint {
    pub t: f64,
    pub f: f64,
    pub err: f64,
    /// Quadratic bound including the slack factor and the `θ` numerical zero.
    pub bound: f64,
    pub verdict: Verdict,
}

/// Per-point report of the quadratic smoothing bound around `h_c`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SmoothingReport {
    pub model: ModelKind,
    pub coupling: f64,
    pub h_c: f64,
    pub slack: f64,
    pub points: Vec<SmoothingPoint>,
    pub violations: usize,
}

/// Test `F(h_c + t) <= (1+α)/2 · slack · t²/β²` (pinning; for the copolymer
/// the right side is `(1+α)/2 · slack · t²`) on a grid of displacements.
///
/// The positivity cutoff `θ` is added to the bound as the numerical zero, so
/// `t = 0` compares `F(h_c)` against the same cutoff that defined `h_c`.
/// The theorem's window is enforced by rejecting `|t| > 0.2 · coupling`.
pub fn smoothing_check(
    law: &ReturnLaw,
    dlaw: &DisorderLaw,
    kind: ModelKind,
    coupling: f64,
    hc_est: &CriticalPointEstimate,
    t_grid: &[f64],
    cfg: &SearchConfig,
) -> Result<SmoothingReport> {
    let alpha = law.alpha().ok_or_else(|| {
        Error::InvalidParameter("smoothing bound requires a heavy-tailed production law".into())
    })?;
    for &t in t_grid {
        if t.abs() > 0.2 * coupling {
            return Err(Error::InvalidParameter(format!(
                "displacement t = {t} outside the window |t| <= 0.2 * coupling"
            )));
        }
    }

    let quad = |t: f64| {
        let scale = match kind {
            ModelKind::Pinning => t * t / (coupling * coupling),
            ModelKind::Copolymer => t * t,
        };
        (1.0 + alpha) / 2.0 * SMOOTHING_SLACK * scale
    };

    let mut points = Vec::with_capacity(t_grid.len());
    let mut violations = 0;
    for &t in t_grid {
        let h = hc_est.h_c + t;
        let (f, err) = extrapolated_free_energy(law, dlaw, kind, coupling, h, cfg)?;
        let bound = quad(t) + cfg.threshold;
        let margin = DECISION_SIGMAS * err;
        let verdict = if f - margin > bound {
            Verdict::Violation
        } else if f + margin <= bound {
            Verdict::Pass
        } else {
            Verdict::Inconclusive
        };
        if verdict == Verdict::Violation {
            violations += 1;
        }
        points.push(SmoothingPoint {
            t,
            f,
            err,
            bound,
            verdict,
        });
    }

    Ok(SmoothingReport {
        model: kind,
        coupling,
        h_c: hc_est.h_c,
        slack: SMOOTHING_SLACK,
        points,
        violations,
    })
}

/// The slope bound recovered from the quadratic-compatibility argument: the
/// largest `L` keeping `A c² + B c + C >= 0` for all `c`, i.e. the root of
/// the discriminant `B² - 4AC` with `A = (1+α)/2`, `B = -(1+α)L - 1/μ`,
/// `C = (1+α)L²/2 + 1/(2μ²)`. Solved numerically as an independent route to
/// the pinning slope limit `α/(2(1+α)μ)`.
pub fn quadratic_reconciliation(alpha: f64, mu: f64) -> f64 {
    assert!(alpha > 0.0 && mu > 0.0);
    let discriminant = |l: f64| {
        let a = (1.0 + alpha) / 2.0;
        let b = -(1.0 + alpha) * l - 1.0 / mu;
        let c = (1.0 + alpha) * l * l / 2.0 + 1.0 / (2.0 * mu * mu);
        b * b - 4.0 * a * c
    };
    // The discriminant increases through zero in L; bisect its negation.
    let hi = 1.0 / mu + 1.0;
    debug_assert!(discriminant(0.0) < 0.0 && discriminant(hi) > 0.0);
    let (root, _) = bisect_decreasing(|l| -discriminant(l), 0.0, hi, 1e-14, 200);
    root
}
