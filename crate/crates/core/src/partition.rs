//! Exact log-domain recursions for constrained and free partition functions,
//! per disorder realization.
//!
//! Everything is computed with max-shifted, compensated log-sum-exp, so
//! site weights as extreme as `|βω| = 50` cannot overflow. The constrained
//! recursion over the last contact `m` reads
//!
//! ```text
//! ln Z(n) = LSE_{m} [ ln Z(m) + ln K(n-m) + gap(m,n) ] + site(n)
//! ```
//!
//! where the pinning model puts its weight on sites (`site = βω_n - Λ(β) + h`,
//! no gap term) and the copolymer, with excursion signs integrated out, puts
//! it on gaps (`gap = ln ½(1 + e^{-2λ[Σω + ℓ(h_a - h)]})`, no site term).
//! Gaps longer than the law's truncation horizon are never consulted.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::disorder::{DisorderField, DisorderLaw};
use crate::error::{Error, Result};
use crate::numerics::{log_half_one_plus_exp, log_sum_exp, CompensatedSum};
use crate::renewal::ReturnLaw;

/// Pinning couplings plus the derived per-site shift `Λ(β)`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PinningParams {
    pub beta: f64,
    pub h: f64,
    /// `Λ(β)` of the disorder law, fixed at construction.
    pub log_mgf_beta: f64,
}

impl PinningParams {
    pub fn new(dlaw: &DisorderLaw, beta: f64, h: f64) -> Result<PinningParams> {
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "pinning coupling must be nonnegative, got {beta}"
            )));
        }
        if !h.is_finite() {
            return Err(Error::InvalidParameter(format!("bias must be finite, got {h}")));
        }
        Ok(PinningParams {
            beta,
            h,
            log_mgf_beta: dlaw.log_mgf(beta)?,
        })
    }

    /// `ln z_n = β ω_n - Λ(β) + h`
    #[inline]
    pub fn site_log_weight(&self, omega: f64) -> f64 {
        self.beta * omega - self.log_mgf_beta + self.h
    }
}

/// Copolymer couplings plus the derived annealed shift `h_a(λ)`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CopolymerParams {
    pub lambda: f64,
    pub h: f64,
    /// `h_a(λ) = Λ(-2λ)/(2λ)`; zero at `λ = 0` where the weight is constant.
    pub annealed_shift: f64,
}

impl CopolymerParams {
    pub fn new(dlaw: &DisorderLaw, lambda: f64, h: f64) -> Result<CopolymerParams> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "copolymer coupling must be nonnegative, got {lambda}"
            )));
        }
        if !h.is_finite() {
            return Err(Error::InvalidParameter(format!("bias must be finite, got {h}")));
        }
        let annealed_shift = if lambda == 0.0 {
            0.0
        } else {
            dlaw.annealed_shift_copolymer(lambda)?
        };
        Ok(CopolymerParams {
            lambda,
            h,
            annealed_shift,
        })
    }

    /// Sign-integrated excursion log-weight over the gap `(m, n]`.
    #[inline]
    pub fn gap_log_weight(&self, field: &DisorderField, m: usize, n: usize) -> f64 {
        let x = -2.0 * self.lambda
            * (field.range_sum(m, n) + (n - m) as f64 * (self.annealed_shift - self.h));
        log_half_one_plus_exp(x)
    }
}

/// Which Gibbs weight produced a curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelTag {
    Pinning,
    Copolymer,
    Homogeneous,
}

impl ModelTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelTag::Pinning => "pinning",
            ModelTag::Copolymer => "copolymer",
            ModelTag::Homogeneous => "homogeneous",
        }
    }
}

/// `ln Z^c_n` for `n = 0..=N` along one disorder realization.
#[derive(Clone, Debug)]
pub struct LogPartitionCurve {
    log_zc: Vec<f64>,
    tag: ModelTag,
}

impl LogPartitionCurve {
    /// `ln Z^c_n`.
    #[inline]
    pub fn log_zc(&self, n: usize) -> f64 {
        self.log_zc[n]
    }

    /// `ln Z^c_N` at the full system size.
    pub fn last(&self) -> f64 {
        *self.log_zc.last().unwrap()
    }

    /// System size `N`.
    pub fn size(&self) -> usize {
        self.log_zc.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.log_zc
    }

    pub fn tag(&self) -> ModelTag {
        self.tag
    }

    /// Debug export: `(n, log_zc)` CSV. Not a stable format.
    pub fn export_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "n,log_zc")?;
        for (n, v) in self.log_zc.iter().enumerate() {
            writeln!(w, "{n},{v}")?;
        }
        Ok(())
    }
}

/// Shared engine: `site(n)` is the per-contact log-weight, `gap(m, n)` the
/// per-excursion log-weight.
fn constrained_curve(
    law: &ReturnLaw,
    n: usize,
    tag: ModelTag,
    mut site: impl FnMut(usize) -> f64,
    mut gap: impl FnMut(usize, usize) -> f64,
) -> LogPartitionCurve {
    let mut log_zc = Vec::with_capacity(n + 1);
    log_zc.push(0.0);
    let window = law.n_max();
    let mut scratch: Vec<f64> = Vec::with_capacity(window.min(n.max(1)));
    for i in 1..=n {
        let lo = i.saturating_sub(window);
        scratch.clear();
        for m in lo..i {
            scratch.push(log_zc[m] + law.log_mass(i - m) + gap(m, i));
        }
        log_zc.push(log_sum_exp(&scratch) + site(i));
    }
    LogPartitionCurve { log_zc, tag }
}

fn check_field_length(field: &DisorderField, n: usize) -> Result<()> {
    if field.len() < n {
        return Err(Error::FieldTooShort {
            need: n,
            have: field.len(),
        });
    }
    Ok(())
}

/// Constrained pinning partition function along `field`, in log domain.
pub fn pinning_constrained(
    law: &ReturnLaw,
    field: &DisorderField,
    params: &PinningParams,
    n: usize,
) -> Result<LogPartitionCurve> {
    check_field_length(field, n)?;
    Ok(constrained_curve(
        law,
        n,
        ModelTag::Pinning,
        |i| params.site_log_weight(field.value(i)),
        |_, _| 0.0,
    ))
}

/// Constrained copolymer partition function (signs integrated out).
pub fn copolymer_constrained(
    law: &ReturnLaw,
    field: &DisorderField,
    params: &CopolymerParams,
    n: usize,
) -> Result<LogPartitionCurve> {
    check_field_length(field, n)?;
    Ok(constrained_curve(
        law,
        n,
        ModelTag::Copolymer,
        |_| 0.0,
        |m, i| params.gap_log_weight(field, m, i),
    ))
}

/// The copolymer in pinning parametrization: excursion signs integrated out
/// of the per-site weight `β ω_n - Λ(-β) + h`, giving the per-gap weight
/// `ln ½(1 + e^{Σ_{gap}(β ω_n - Λ(-β) + h)})`.
///
/// Substituting `ω → -ω`, `2λ → β`, `2λ h_cop → h` maps
/// [`copolymer_constrained`] onto this recursion exactly; the two routes are
/// kept separate as an equivariance oracle for the parametrization algebra.
pub fn copolymer_pinning_form(
    law: &ReturnLaw,
    field: &DisorderField,
    dlaw: &DisorderLaw,
    beta: f64,
    h: f64,
    n: usize,
) -> Result<LogPartitionCurve> {
    check_field_length(field, n)?;
    let lam_neg_beta = dlaw.log_mgf(-beta)?;
    Ok(constrained_curve(
        law,
        n,
        ModelTag::Copolymer,
        |_| 0.0,
        |m, i| {
            let x = beta * field.range_sum(m, i) + (i - m) as f64 * (h - lam_neg_beta);
            log_half_one_plus_exp(x)
        },
    ))
}

/// Homogeneous pinning: constant per-contact log-weight. Equals
/// `E[e^{w |τ ∩ [1,N]|} 1_{N ∈ τ}]` in log domain.
pub fn homogeneous_pinning(law: &ReturnLaw, log_weight: f64, n: usize) -> LogPartitionCurve {
    constrained_curve(
        law,
        n,
        ModelTag::Homogeneous,
        |_| log_weight,
        |_, _| 0.0,
    )
}

/// The annealed partition function under the exponentially tilted disorder:
/// a homogeneous model with per-contact log-weight
/// `Λ(β-δ) - Λ(β) - Λ(-δ) + h`. Returns `ln Ẽ[Z^c_N]`.
pub fn tilted_annealed_pinning(
    law: &ReturnLaw,
    dlaw: &DisorderLaw,
    beta: f64,
    delta: f64,
    h: f64,
    n: usize,
) -> Result<f64> {
    let w = tilted_site_log_weight(dlaw, beta, delta, h)?;
    Ok(homogeneous_pinning(law, w, n).last())
}

/// The tilted per-contact log-weight alone (`h - βδ` for Gaussian disorder).
pub fn tilted_site_log_weight(dlaw: &DisorderLaw, beta: f64, delta: f64, h: f64) -> Result<f64> {
    Ok(dlaw.log_mgf(beta - delta)? - dlaw.log_mgf(beta)? - dlaw.log_mgf(-delta)? + h)
}

/// Free (unconstrained) partition function from a constrained curve:
/// `ln Σ_n exp(ln Z^c_n + ln P(τ_1 > N - n))` with `P(τ_1 > 0) := 1`.
///
/// Valid for pinning and homogeneous curves; the copolymer's final
/// incomplete excursion carries a sign-integrated weight of its own, so it
/// is rejected here.
pub fn pinning_free(curve: &LogPartitionCurve, law: &ReturnLaw) -> Result<f64> {
    if curve.tag() == ModelTag::Copolymer {
        return Err(Error::InvalidParameter(
            "free partition function requires a pinning or homogeneous curve".into(),
        ));
    }
    let n = curve.size();
    let mut terms = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let gap = n - m;
        let tail = if gap == 0 { 1.0 } else { law.tail_prob(gap) };
        if tail > 0.0 {
            terms.push(curve.log_zc(m) + tail.ln());
        }
    }
    Ok(log_sum_exp(&terms))
}

/// A model with its parameter snapshot; the unit the Monte Carlo layer runs.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub enum Model {
    Pinning(PinningParams),
    Copolymer(CopolymerParams),
}

impl Model {
    pub fn pinning(dlaw: &DisorderLaw, beta: f64, h: f64) -> Result<Model> {
        Ok(Model::Pinning(PinningParams::new(dlaw, beta, h)?))
    }

    pub fn copolymer(dlaw: &DisorderLaw, lambda: f64, h: f64) -> Result<Model> {
        Ok(Model::Copolymer(CopolymerParams::new(dlaw, lambda, h)?))
    }

    pub fn tag(&self) -> ModelTag {
        match self {
            Model::Pinning(_) => ModelTag::Pinning,
            Model::Copolymer(_) => ModelTag::Copolymer,
        }
    }

    pub fn coupling(&self) -> f64 {
        match self {
            Model::Pinning(p) => p.beta,
            Model::Copolymer(p) => p.lambda,
        }
    }

    pub fn h(&self) -> f64 {
        match self {
            Model::Pinning(p) => p.h,
            Model::Copolymer(p) => p.h,
        }
    }

    /// Constrained log-partition curve for this model.
    pub fn constrained(
        &self,
        law: &ReturnLaw,
        field: &DisorderField,
        n: usize,
    ) -> Result<LogPartitionCurve> {
        match self {
            Model::Pinning(p) => pinning_constrained(law, field, p, n),
            Model::Copolymer(p) => copolymer_constrained(law, field, p, n),
        }
    }
}

/// Brute-force constrained partition function by enumerating every renewal
/// configuration on `{1..N}` that contains `N`. Exponential in `N`; the
/// independent oracle for small-system tests.
pub fn enumerate_constrained(
    law: &ReturnLaw,
    n: usize,
    site_weight: impl Fn(usize) -> f64,
    gap_weight: impl Fn(usize, usize) -> f64,
) -> f64 {
    assert!(n <= 20, "enumeration oracle is exponential in N");
    if n == 0 {
        return 1.0;
    }
    // Bitmask over interior contacts 1..N-1; N is always a contact.
    let mut total = CompensatedSum::new();
    let interior = n - 1;
    for mask in 0u64..(1u64 << interior) {
        let mut contacts = Vec::with_capacity(n);
        for i in 0..interior {
            if mask >> i & 1 == 1 {
                contacts.push(i + 1);
            }
        }
        contacts.push(n);
        let mut weight = 1.0;
        let mut prev = 0usize;
        for &c in &contacts {
            weight *= law.mass(c - prev) * site_weight(c) * gap_weight(prev, c);
            prev = c;
        }
        total.add(weight);
    }
    total.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::renewal::{renewal_mass, PhiKind};

    fn alpha2_law(n_max: usize) -> ReturnLaw {
        ReturnLaw::heavy_tailed(2.0, PhiKind::Constant(1.0), n_max).unwrap()
    }

    #[test]
    fn free_disorder_reduces_to_renewal_mass() {
        // β = 0, h = 0: every site weight is one, the recursion is the
        // renewal equation, so ln Z^c_n = ln u(n).
        let law = alpha2_law(256);
        let dlaw = DisorderLaw::Gaussian;
        let field = dlaw.sample_field(256, 3, 0);
        let params = PinningParams::new(&dlaw, 0.0, 0.0).unwrap();
        let curve = pinning_constrained(&law, &field, &params, 256).unwrap();
        let u = renewal_mass(&law, 256);
        for n in 0..=256 {
            assert!(
                (curve.log_zc(n) - u.u(n).ln()).abs() < 1e-13,
                "n = {n}: {} vs {}",
                curve.log_zc(n),
                u.u(n).ln()
            );
        }
    }

    #[test]
    fn single_step_and_two_step_enumeration() {
        let law = alpha2_law(64);
        let dlaw = DisorderLaw::Gaussian;
        let field = dlaw.sample_field(16, 17, 2);
        let (beta, h) = (0.4, 0.13);
        let params = PinningParams::new(&dlaw, beta, h).unwrap();

        // n = 1 with β = 0: ln Z^c_1 = ln K(1) + h.
        let p0 = PinningParams::new(&dlaw, 0.0, h).unwrap();
        let c0 = pinning_constrained(&law, &field, &p0, 1).unwrap();
        assert!((c0.log_zc(1) - (law.log_mass(1) + h)).abs() < 1e-14);

        // n = 2 generic: ln(K(2) z_2 + K(1)^2 z_1 z_2).
        let z = |i: usize| params.site_log_weight(field.value(i)).exp();
        let expected = (law.mass(2) * z(2) + law.mass(1).powi(2) * z(1) * z(2)).ln();
        let curve = pinning_constrained(&law, &field, &params, 2).unwrap();
        assert!((curve.log_zc(2) - expected).abs() < 1e-13);

        // And against the exponential-enumeration oracle for N up to 12.
        let oracle = enumerate_constrained(
            &law,
            12,
            |i| params.site_log_weight(field.value(i)).exp(),
            |_, _| 1.0,
        );
        let curve = pinning_constrained(&law, &field, &params, 12).unwrap();
        assert!((curve.log_zc(12) - oracle.ln()).abs() < 1e-12);
    }

    #[test]
    fn homogeneous_matches_beta_zero_bitwise() {
        let law = alpha2_law(128);
        let dlaw = DisorderLaw::Gaussian;
        let field = dlaw.sample_field(300, 9, 1);
        let h = 0.07;
        let params = PinningParams::new(&dlaw, 0.0, h).unwrap();
        let a = pinning_constrained(&law, &field, &params, 300).unwrap();
        let b = homogeneous_pinning(&law, h, 300);
        for n in 0..=300 {
            assert!((a.log_zc(n) - b.log_zc(n)).abs() < 1e-12);
        }
    }

    #[test]
    fn homogeneous_two_step_enumeration() {
        let law = ReturnLaw::test_law(&[0.5, 0.5]).unwrap();
        let w = 0.3f64;
        let curve = homogeneous_pinning(&law, w, 2);
        let expected = (law.mass(2) * w.exp() + law.mass(1).powi(2) * (2.0 * w).exp()).ln();
        assert!((curve.log_zc(2) - expected).abs() < 1e-14);
    }

    #[test]
    fn copolymer_weight_free_at_zero_coupling() {
        let law = alpha2_law(128);
        let dlaw = DisorderLaw::Gaussian;
        let field = dlaw.sample_field(200, 5, 0);
        let params = CopolymerParams::new(&dlaw, 0.0, 0.3).unwrap();
        let curve = copolymer_constrained(&law, &field, &params, 200).unwrap();
        let u = renewal_mass(&law, 200);
        for n in 0..=200 {
            assert!((curve.log_zc(n) - u.u(n).ln()).abs() < 1e-13);
        }
    }

    #[test]
    fn copolymer_small_systems_match_enumeration() {
        let law = alpha2_law(64);
        let dlaw = DisorderLaw::Gaussian;
        let field = dlaw.sample_field(16, 23, 0);
        let params = CopolymerParams::new(&dlaw, 0.35, 0.1).unwrap();

        // N = 1: single excursion.
        let curve = copolymer_constrained(&law, &field, &params, 1).unwrap();
        let expected = law.log_mass(1) + params.gap_log_weight(&field, 0, 1);
        assert!((curve.log_zc(1) - expected).abs() < 1e-14);

        // N = 2: K(2) w(0,2) + K(1)^2 w(0,1) w(1,2).
        let curve = copolymer_constrained(&law, &field, &params, 2).unwrap();
        let w = |m: usize, n: usize| params.gap_log_weight(&field, m, n).exp();
        let expected =
            (law.mass(2) * w(0, 2) + law.mass(1).powi(2) * w(0, 1) * w(1, 2)).ln();
        assert!((curve.log_zc(2) - expected).abs() < 1e-13);

        // N = 12 against the enumeration oracle.
        let oracle = enumerate_constrained(&law, 12, |_| 1.0, |m, n| w(m, n));
        let curve = copolymer_constrained(&law, &field, &params, 12).unwrap();
        assert!((curve.log_zc(12) - oracle.ln()).abs() < 1e-12);
    }

    #[test]
    fn tilted_annealed_gaussian_weight_is_h_minus_beta_delta() {
        let dlaw = DisorderLaw::Gaussian;
        let (beta, delta, h) = (0.2, 0.35, 0.01);
        let w = tilted_site_log_weight(&dlaw, beta, delta, h).unwrap();
        assert!((w - (h - beta * delta)).abs() < 1e-15);
        // δ = 0, h = 0 collapses to ln u(N).
        let law = alpha2_law(128);
        let u = renewal_mass(&law, 64);
        let v = tilted_annealed_pinning(&law, &dlaw, 0.3, 0.0, 0.0, 64).unwrap();
        assert!((v - u.u(64).ln()).abs() < 1e-12);
    }

    #[test]
    fn free_partition_function_cases() {
        let law = alpha2_law(512);
        let dlaw = DisorderLaw::Gaussian;

        // N = 0: empty system.
        let field = dlaw.sample_field(1, 1, 0);
        let params = PinningParams::new(&dlaw, 0.3, 0.1).unwrap();
        let c = pinning_constrained(&law, &field, &params, 0).unwrap();
        assert_eq!(pinning_free(&c, &law).unwrap(), 0.0);

        // Deterministic law: no tail mass beyond gap 1, free = constrained.
        let det = ReturnLaw::test_law(&[1.0]).unwrap();
        let field = dlaw.sample_field(32, 2, 0);
        let c = pinning_constrained(&det, &field, &params, 32).unwrap();
        assert!((pinning_free(&c, &det).unwrap() - c.last()).abs() < 1e-12);

        // β = 0, h = 0: last-renewal decomposition of certainty, ln Z_N = 0.
        let p0 = PinningParams::new(&dlaw, 0.0, 0.0).unwrap();
        let field = dlaw.sample_field(600, 3, 0);
        let c = pinning_constrained(&law, &field, &p0, 600).unwrap();
        assert!(pinning_free(&c, &law).unwrap().abs() < 1e-9);

        // Copolymer curves are rejected.
        let cp = CopolymerParams::new(&dlaw, 0.1, 0.0).unwrap();
        let cc = copolymer_constrained(&law, &field, &cp, 64).unwrap();
        assert!(pinning_free(&cc, &law).is_err());
    }

    #[test]
    fn monotone_in_h_and_stable_under_extreme_disorder() {
        let law = alpha2_law(128);
        let dlaw = DisorderLaw::Gaussian;
        let field = dlaw.sample_field(400, 77, 0);
        let mut prev = f64::NEG_INFINITY;
        for &h in &[-0.5, -0.1, 0.0, 0.1, 0.5] {
            let p = PinningParams::new(&dlaw, 0.25, h).unwrap();
            let v = pinning_constrained(&law, &field, &p, 400).unwrap().last();
            assert!(v > prev, "log Z must increase in h");
            prev = v;
        }

        // |βω| up to 50 must not overflow: synthetic ±100 field at β = 0.5.
        let big: Vec<f64> = (0..300)
            .map(|i| if i % 2 == 0 { 100.0 } else { -100.0 })
            .collect();
        let field = DisorderField::from_values(&big, DisorderLaw::Gaussian, 0, 0);
        let p = PinningParams::new(&dlaw, 0.5, 0.0).unwrap();
        let curve = pinning_constrained(&law, &field, &p, 300).unwrap();
        assert!(curve.values().iter().all(|v| v.is_finite()));
        let cp = CopolymerParams::new(&dlaw, 25.0, 0.0).unwrap();
        let curve = copolymer_constrained(&law, &field, &cp, 300).unwrap();
        assert!(curve.values().iter().all(|v| v.is_finite()));
    }

    #[test]
    fn curve_csv_export() {
        let law = ReturnLaw::test_law(&[1.0]).unwrap();
        let curve = homogeneous_pinning(&law, 0.0, 2);
        let mut buf = Vec::new();
        curve.export_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "n,log_zc\n0,0\n1,0\n2,0\n");
    }

    #[test]
    fn field_shorter_than_system_errors() {
        let law = alpha2_law(64);
        let dlaw = DisorderLaw::Gaussian;
        let field = dlaw.sample_field(10, 1, 0);
        let p = PinningParams::new(&dlaw, 0.1, 0.0).unwrap();
        assert!(matches!(
            pinning_constrained(&law, &field, &p, 11),
            Err(Error::FieldTooShort { .. })
        ));
    }
}
