//! Acceptance suite: every criterion prints one pass/fail line (visible with
//! `cargo test --test acceptance -- --nocapture`) and is asserted.

use pinlab::renewal::{PhiKind, ReturnLaw};
use pinlab::verify::{self, CheckResult};

fn assert_check(result: CheckResult) {
    println!("{}", result.line());
    assert!(result.passed, "{}", result.line());
}

#[test]
fn inv_law_normalization() {
    let law = ReturnLaw::heavy_tailed(2.0, PhiKind::Constant(1.0), 4096).unwrap();
    assert_check(verify::check_law_normalization(&law));
    // Log-power slowly varying factor obeys the same shape invariant.
    let lp = ReturnLaw::heavy_tailed(1.5, PhiKind::LogPower { c: 2.0, p: 1.0 }, 4096).unwrap();
    assert_check(verify::check_law_normalization(&lp));
}

#[test]
fn inv_conditioned_mass() {
    let law = ReturnLaw::heavy_tailed(2.0, PhiKind::Constant(1.0), 4096).unwrap();
    assert_check(verify::check_conditioned_mass(&law));
}

#[test]
fn inv_field_reproducibility() {
    assert_check(verify::check_field_reproducibility());
}

#[test]
fn inv_laplace_monotone() {
    let law = ReturnLaw::heavy_tailed(2.0, PhiKind::Constant(1.0), 4096).unwrap();
    assert_check(verify::check_laplace_monotone(&law));
}

#[test]
fn criterion_01_homogeneous_reduction() {
    assert_check(verify::c01_homogeneous_reduction());
}

#[test]
fn criterion_02_renewal_theorem() {
    assert_check(verify::c02_renewal_theorem());
}

#[test]
fn criterion_03_annealed_crosscheck() {
    assert_check(verify::c03_annealed_crosscheck());
}

#[test]
fn criterion_04_entropy_cost_mc() {
    assert_check(verify::c04_entropy_cost_mc());
}

#[test]
fn criterion_05_tilted_annealed_limit() {
    assert_check(verify::c05_tilted_annealed_limit());
}

#[test]
fn criterion_06_holder_dominance() {
    assert_check(verify::c06_holder_dominance());
}

#[test]
fn criterion_07_subcritical_moment() {
    assert_check(verify::c07_subcritical_moment());
}

#[test]
fn criterion_08_certificate_existence() {
    assert_check(verify::c08_certificate_existence());
}

#[test]
fn criterion_09_jensen_lower_bounds() {
    assert_check(verify::c09_jensen_lower_bounds());
}

#[test]
fn criterion_10_sandwich_bounds() {
    assert_check(verify::c10_sandwich_bounds());
}

#[test]
fn criterion_11_slope_trend() {
    assert_check(verify::c11_slope_trend());
}

#[test]
fn criterion_12_smoothing() {
    assert_check(verify::c12_smoothing());
}

#[test]
fn criterion_13_reparametrization() {
    assert_check(verify::c13_reparametrization());
}
