//! Heavy-tailed return laws and the renewal machinery built on them.
//!
//! A [`ReturnLaw`] is the distribution of the gap between consecutive contact
//! points: `K(n) ∝ φ(n) / n^{1+α}` for `1 <= n <= n_max`, truncated and
//! renormalized so it sums to one. The slowly varying factor `φ` is either a
//! constant or a log-power `c·(1 + ln n)^p`; anything fancier cannot be
//! validated and is out of scope. Truncation error is estimated by an
//! integral bound and reported, not hidden.
//!
//! On top of the law the module computes the renewal mass function
//! `u(n) = P(n ∈ τ)` (which converges to `1/μ`), contact probabilities
//! conditioned on `{τ_q = N}`, the expected overlap of two independent
//! conditioned copies, gap sampling, and the Laplace transform used by the
//! annealed solvers.

use std::io::{self, Write};

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{self, CompensatedSum};
use crate::rng;

/// Slowly varying factor of a return law.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum PhiKind {
    /// `φ(n) = c`
    Constant(f64),
    /// `φ(n) = c · (1 + ln n)^p`, positive for every `n >= 1`
    LogPower { c: f64, p: f64 },
}

impl PhiKind {
    fn value(&self, n: f64) -> f64 {
        match *self {
            PhiKind::Constant(c) => c,
            PhiKind::LogPower { c, p } => c * (1.0 + n.ln()).powf(p),
        }
    }

    fn validate(&self) -> Result<()> {
        let c = match *self {
            PhiKind::Constant(c) => c,
            PhiKind::LogPower { c, p } => {
                if !p.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "log-power exponent must be finite, got {p}"
                    )));
                }
                c
            }
        };
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "slowly varying factor must be positive and finite, got {c}"
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
enum LawKind {
    HeavyTailed { alpha: f64, phi: PhiKind },
    /// Explicitly declared test law; exempt from the `mu > 1` invariant.
    Test,
}

/// Fraction of discarded tail mass above which the truncation warning fires.
pub const TAIL_WARNING_THRESHOLD: f64 = 1e-6;

/// A truncated, renormalized return-time distribution.
#[derive(Clone, Debug)]
pub struct ReturnLaw {
    kind: LawKind,
    n_max: usize,
    mass: Vec<f64>,     // mass[i] = K(i+1)
    log_mass: Vec<f64>, // ln K(n)
    cdf: Vec<f64>,      // cdf[i] = K(1) + ... + K(i+1)
    tail: Vec<f64>,     // tail[g] = P(tau_1 > g), g = 0..n_max
    mu: f64,
    normalization: f64,
    truncated_tail_mass: f64,
    tail_warning: bool,
}

impl ReturnLaw {
    /// Build `K(n) ∝ φ(n)/n^{1+α}` on `1..=n_max`, renormalized.
    ///
    /// The discarded tail `Σ_{n>n_max} φ(n)/n^{1+α}` is estimated by an
    /// integral bound; when it exceeds [`TAIL_WARNING_THRESHOLD`] of the
    /// total mass the law carries a warning flag.
    ///
    /// ```
    /// use pinlab::renewal::{PhiKind, ReturnLaw};
    /// let law = ReturnLaw::heavy_tailed(2.0, PhiKind::Constant(1.0), 10_000).unwrap();
    /// assert!(law.mu() > 1.3 && law.mu() < 1.4);
    /// assert!(!law.tail_warning());
    /// ```
    pub fn heavy_tailed(alpha: f64, phi: PhiKind, n_max: usize) -> Result<ReturnLaw> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "tail exponent must be positive, got {alpha}"
            )));
        }
        if n_max < 2 {
            return Err(Error::InvalidParameter(format!(
                "truncation horizon must be at least 2, got {n_max}"
            )));
        }
        phi.validate()?;

        let mut weights = Vec::with_capacity(n_max);
        for n in 1..=n_max {
            let x = n as f64;
            let w = phi.value(x) / x.powf(1.0 + alpha);
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "return weight at n = {n} is not positive and finite ({w})"
                )));
            }
            weights.push(w);
        }
        let total = numerics::sum(&weights);
        let tail_estimate = tail_integral(alpha, phi, n_max as f64);
        let discarded = tail_estimate / (total + tail_estimate);

        let mass: Vec<f64> = weights.iter().map(|w| w / total).collect();
        Ok(Self::from_mass(
            LawKind::HeavyTailed { alpha, phi },
            mass,
            total,
            discarded,
        ))
    }

    /// A declared test law from an explicit mass vector (renormalized).
    ///
    /// Test laws may be degenerate (`mu <= 1`), e.g. `K(1) = 1`; production
    /// laws never are.
    pub fn test_law(mass: &[f64]) -> Result<ReturnLaw> {
        if mass.len() < 1 {
            return Err(Error::InvalidParameter("empty mass vector".into()));
        }
        for (i, &m) in mass.iter().enumerate() {
            if !(m > 0.0) || !m.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "mass at n = {} must be positive and finite, got {m}",
                    i + 1
                )));
            }
        }
        let total = numerics::sum(mass);
        let normalized: Vec<f64> = mass.iter().map(|m| m / total).collect();
        Ok(Self::from_mass(LawKind::Test, normalized, total, 0.0))
    }

    /// Verification fixture: a deliberately unnormalized law, used to check
    /// that the verify suite catches normalization bugs. Not for production.
    #[doc(hidden)]
    pub fn test_law_unnormalized(mass: &[f64]) -> ReturnLaw {
        Self::from_mass(LawKind::Test, mass.to_vec(), 1.0, 0.0)
    }

    fn from_mass(kind: LawKind, mass: Vec<f64>, normalization: f64, discarded: f64) -> ReturnLaw {
        let n_max = mass.len();
        let log_mass: Vec<f64> = mass.iter().map(|m| m.ln()).collect();
        let mut cdf = Vec::with_capacity(n_max);
        let mut acc = CompensatedSum::new();
        for &m in &mass {
            acc.add(m);
            cdf.push(acc.value());
        }
        // Backward tail accumulation keeps small tails accurate.
        let mut tail = vec![0.0; n_max + 1];
        let mut tacc = CompensatedSum::new();
        for g in (0..n_max).rev() {
            tacc.add(mass[g]);
            tail[g] = tacc.value().min(1.0);
        }
        let mut macc = CompensatedSum::new();
        for (i, &m) in mass.iter().enumerate() {
            macc.add((i + 1) as f64 * m);
        }
        let mu = macc.value();
        ReturnLaw {
            kind,
            n_max,
            mass,
            log_mass,
            cdf,
            tail,
            mu,
            normalization,
            truncated_tail_mass: discarded,
            tail_warning: discarded > TAIL_WARNING_THRESHOLD,
        }
    }

    /// `K(n)`; zero outside `1..=n_max`.
    #[inline]
    pub fn mass(&self, n: usize) -> f64 {
        if n >= 1 && n <= self.n_max {
            self.mass[n - 1]
        } else {
            0.0
        }
    }

    /// `ln K(n)`; `-∞` outside the support.
    #[inline]
    pub fn log_mass(&self, n: usize) -> f64 {
        if n >= 1 && n <= self.n_max {
            self.log_mass[n - 1]
        } else {
            f64::NEG_INFINITY
        }
    }

    /// `P(τ_1 > g)` for the truncated law; 1 at `g = 0`, 0 for `g >= n_max`.
    #[inline]
    pub fn tail_prob(&self, g: usize) -> f64 {
        if g >= self.n_max {
            0.0
        } else {
            self.tail[g]
        }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Mean return time of the truncated law.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Tail exponent, if this is a heavy-tailed production law.
    pub fn alpha(&self) -> Option<f64> {
        match self.kind {
            LawKind::HeavyTailed { alpha, .. } => Some(alpha),
            LawKind::Test => None,
        }
    }

    pub fn phi(&self) -> Option<PhiKind> {
        match self.kind {
            LawKind::HeavyTailed { phi, .. } => Some(phi),
            LawKind::Test => None,
        }
    }

    pub fn is_test_law(&self) -> bool {
        matches!(self.kind, LawKind::Test)
    }

    /// The divisor applied when renormalizing the raw weights.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// Estimated fraction of mass discarded by truncation.
    pub fn truncated_tail_mass(&self) -> f64 {
        self.truncated_tail_mass
    }

    pub fn tail_warning(&self) -> bool {
        self.tail_warning
    }

    /// Laplace transform `Σ_n K(n) e^{-sn}`: 1 at `s = 0`, strictly
    /// decreasing in `s`.
    pub fn laplace(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "Laplace argument must be nonnegative, got {s}"
            )));
        }
        let mut acc = CompensatedSum::new();
        for (i, &m) in self.mass.iter().enumerate() {
            acc.add(m * (-s * (i + 1) as f64).exp());
        }
        Ok(acc.value())
    }

    /// `ln Σ_n K(n) e^{-sn}` for arguments of either sign (used by the
    /// annealed copolymer solver, where the integrand can grow).
    pub(crate) fn log_laplace_shifted<F: Fn(usize) -> f64>(&self, log_gap_weight: F) -> f64 {
        let mut max = f64::NEG_INFINITY;
        for n in 1..=self.n_max {
            let v = self.log_mass[n - 1] + log_gap_weight(n);
            if v > max {
                max = v;
            }
        }
        if max == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        let mut acc = CompensatedSum::new();
        for n in 1..=self.n_max {
            let v = self.log_mass[n - 1] + log_gap_weight(n);
            acc.add((v - max).exp());
        }
        max + acc.value().ln()
    }

    /// Serialize to the key-value text block used by config files and dumps.
    pub fn to_key_value_block(&self) -> String {
        let mut out = String::new();
        match &self.kind {
            LawKind::HeavyTailed { alpha, phi } => {
                out.push_str(&format!("alpha = {alpha}\n"));
                match phi {
                    PhiKind::Constant(c) => out.push_str(&format!("phi = constant:{c}\n")),
                    PhiKind::LogPower { c, p } => {
                        out.push_str(&format!("phi = log-power:{c}:{p}\n"))
                    }
                }
                out.push_str(&format!("n_max = {}\n", self.n_max));
                out.push_str("degenerate = false\n");
            }
            LawKind::Test => {
                out.push_str("kind = test\n");
                out.push_str(&format!("n_max = {}\n", self.n_max));
                out.push_str(&format!("degenerate = {}\n", self.mu <= 1.0));
                let entries: Vec<String> = self.mass.iter().map(|m| m.to_string()).collect();
                out.push_str(&format!("mass = {}\n", entries.join(",")));
            }
        }
        out
    }
}

/// Integral estimate of `Σ_{n>n_max} φ(n)/n^{1+α}`.
fn tail_integral(alpha: f64, phi: PhiKind, n_max: f64) -> f64 {
    match phi {
        PhiKind::Constant(c) => c / (alpha * n_max.powf(alpha)),
        PhiKind::LogPower { .. } => {
            // Substitute x = n_max e^y: n_max^{-α} ∫_0^∞ φ(n_max e^y) e^{-αy} dy,
            // integrated by Simpson on a range where e^{-αy} is negligible.
            let y_hi = 80.0 / alpha;
            let panels = 4000usize;
            let h = y_hi / panels as f64;
            let f = |y: f64| phi.value(n_max * y.exp()) * (-alpha * y).exp();
            let mut s = f(0.0) + f(y_hi);
            for i in 1..panels {
                let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                s += w * f(i as f64 * h);
            }
            (s * h / 3.0) / n_max.powf(alpha)
        }
    }
}

/// The renewal mass function `u(n) = P(n ∈ τ)` for `n = 0..=N`.
#[derive(Clone, Debug)]
pub struct RenewalMass {
    u: Vec<f64>,
    mu: f64,
}

impl RenewalMass {
    /// `u(n)`.
    #[inline]
    pub fn u(&self, n: usize) -> f64 {
        self.u[n]
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.u
    }

    /// Mean return time of the generating law.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// `(min, max)` of `u` over `lo..=hi`.
    pub fn min_max(&self, lo: usize, hi: usize) -> (f64, f64) {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for n in lo..=hi.min(self.u.len() - 1) {
            min = min.min(self.u[n]);
            max = max.max(self.u[n]);
        }
        (min, max)
    }

    /// Smallest constant with `1/(C·μ) <= u(n) <= C/μ` over the probe range:
    /// the max of `μ·u(n)` and `1/(μ·u(n))`. A numerical diagnostic, not a
    /// proven bound for the untruncated law.
    pub fn c1_diagnostic(&self, lo: usize, hi: usize) -> f64 {
        let (min, max) = self.min_max(lo.max(1), hi);
        (self.mu * max).max(1.0 / (self.mu * min))
    }
}

/// Solve the renewal equation `u(n) = Σ_m K(m) u(n-m)`, `u(0) = 1`.
///
/// Linear-domain with compensated inner sums; `O(N · min(N, n_max))`.
pub fn renewal_mass(law: &ReturnLaw, n: usize) -> RenewalMass {
    let mut u = Vec::with_capacity(n + 1);
    u.push(1.0);
    for i in 1..=n {
        let window = i.min(law.n_max());
        let mut acc = CompensatedSum::new();
        for m in 1..=window {
            acc.add(law.mass(m) * u[i - m]);
        }
        u.push(acc.value());
    }
    RenewalMass { u, mu: law.mu() }
}

/// Export `(n, K, u)` CSV columns for a law and its mass function.
pub fn export_mass_csv<W: Write>(law: &ReturnLaw, mass: &RenewalMass, w: &mut W) -> io::Result<()> {
    writeln!(w, "n,k,u")?;
    for n in 0..mass.len() {
        writeln!(w, "{},{},{}", n, law.mass(n), mass.u(n))?;
    }
    Ok(())
}

/// Sample one renewal trajectory: `{0} ∪ {τ_1, τ_2, ...} ∩ [0, n]`.
///
/// Gaps are i.i.d. draws from the law via inverse-CDF lookup, so the output
/// is deterministic given the stream state.
pub fn sample_renewal<R: RngCore>(law: &ReturnLaw, n: usize, stream: &mut R) -> Vec<usize> {
    let mut points = vec![0usize];
    let mut at = 0usize;
    loop {
        let gap = sample_gap(law, stream);
        if at + gap > n {
            break;
        }
        at += gap;
        points.push(at);
    }
    points
}

/// One gap draw from the law.
pub fn sample_gap<R: RngCore>(law: &ReturnLaw, stream: &mut R) -> usize {
    let u = rng::unit_closed_open(stream.next_u64());
    // First index with cdf > u.
    let idx = law.cdf.partition_point(|&c| c <= u);
    idx.min(law.n_max - 1) + 1
}

/// Contact probabilities conditioned on `{τ_q = N}`.
#[derive(Clone, Debug)]
pub struct ConditionedContacts {
    n: usize,
    q: usize,
    u_q: Vec<f64>, // u_q[i] = P(i+1 ∈ τ | τ_q = N), i = 0..N-1
    p_tau_q: f64,
}

impl ConditionedContacts {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// `P(τ_q = N)`.
    pub fn p_tau_q(&self) -> f64 {
        self.p_tau_q
    }

    /// `u_{N,q}(n) = P(n ∈ τ | τ_q = N)` for `1 <= n <= N`.
    #[inline]
    pub fn u(&self, n: usize) -> f64 {
        self.u_q[n - 1]
    }

    /// `Σ_{n=1}^N u_{N,q}(n)`; exactly `q` up to roundoff.
    pub fn total(&self) -> f64 {
        numerics::sum(&self.u_q)
    }

    /// `Σ_{n=1}^N u_{N,q}(n)²`, the conditioned expected overlap of two
    /// independent copies. At least 1, since the endpoint contributes 1.
    pub fn overlap_sum(&self) -> f64 {
        let mut acc = CompensatedSum::new();
        for &v in &self.u_q {
            acc.add(v * v);
        }
        acc.value()
    }
}

/// Default cap on the `(q+1)·(N+1)` DP table, in entries (~128 MiB of f64).
pub const DEFAULT_DP_BUDGET: usize = 1 << 24;

/// Conditioned contact probabilities via a `q × N` table of j-fold
/// convolutions of the return law.
pub fn conditioned_contacts(law: &ReturnLaw, q: usize, n: usize) -> Result<ConditionedContacts> {
    conditioned_contacts_with_budget(law, q, n, DEFAULT_DP_BUDGET)
}

/// As [`conditioned_contacts`], with an explicit memory budget in entries.
pub fn conditioned_contacts_with_budget(
    law: &ReturnLaw,
    q: usize,
    n: usize,
    budget: usize,
) -> Result<ConditionedContacts> {
    if q < 1 || q > n {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= q <= N, got q = {q}, N = {n}"
        )));
    }
    let required = (q + 1) * (n + 1);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }

    // rows[j][i] = P(τ_j = i)
    let width = n + 1;
    let mut rows = vec![0.0f64; (q + 1) * width];
    rows[0] = 1.0; // P(τ_0 = 0) = 1
    for j in 1..=q {
        let (prev_rows, row) = rows.split_at_mut(j * width);
        let prev = &prev_rows[(j - 1) * width..];
        for i in j..=n {
            let window = i.min(law.n_max());
            let mut acc = CompensatedSum::new();
            for m in 1..=window {
                let p = prev[i - m];
                if p > 0.0 {
                    acc.add(law.mass(m) * p);
                }
            }
            row[i] = acc.value();
        }
    }

    let p_tau_q = rows[q * width + n];
    if !(p_tau_q > 0.0) {
        return Err(Error::UnreachableConditioning { q, n });
    }

    // P(i ∈ τ, τ_q = N) = Σ_{j=1}^{q-1} P(τ_j = i) P(τ_{q-j} = N - i)
    let mut u_q = vec![0.0f64; n];
    for i in 1..n {
        let mut acc = CompensatedSum::new();
        for j in 1..q {
            let a = rows[j * width + i];
            if a > 0.0 {
                acc.add(a * rows[(q - j) * width + (n - i)]);
            }
        }
        u_q[i - 1] = acc.value() / p_tau_q;
    }
    u_q[n - 1] = 1.0; // conditioning forces a contact at N

    Ok(ConditionedContacts { n, q, u_q, p_tau_q })
}

/// Convenience wrapper: overlap sum for `(law, q, N)`.
pub fn overlap_sum(law: &ReturnLaw, q: usize, n: usize) -> Result<f64> {
    Ok(conditioned_contacts(law, q, n)?.overlap_sum())
}
