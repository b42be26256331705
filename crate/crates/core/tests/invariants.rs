//! Cross-module invariants and property tests.

use proptest::prelude::*;

use pinlab::bounds;
use pinlab::critical::{critical_point, quadratic_reconciliation, ModelKind, SearchConfig};
use pinlab::disorder::DisorderLaw;
use pinlab::free_energy::{annealed_pinning, quenched_free_energy};
use pinlab::numerics;
use pinlab::partition::{homogeneous_pinning, pinning_constrained, pinning_free, Model, PinningParams};
use pinlab::renewal::{conditioned_contacts, renewal_mass, sample_renewal, PhiKind, ReturnLaw};
use pinlab::rng::CounterStream;

fn alpha2_law(n_max: usize) -> ReturnLaw {
    ReturnLaw::heavy_tailed(2.0, PhiKind::Constant(1.0), n_max).unwrap()
}

#[test]
fn renewal_identity_recursion_vs_sampling() {
    // u(n) from the recursion matches Monte Carlo contact frequency within
    // 4 standard errors at ten spot-checked sites, 1e5 trajectories.
    let law = alpha2_law(64);
    let n = 64usize;
    let u = renewal_mass(&law, n);
    let trajectories = 100_000usize;
    let mut counts = vec![0usize; n + 1];
    let mut stream = CounterStream::new(2024, 0);
    for _ in 0..trajectories {
        for point in sample_renewal(&law, n, &mut stream) {
            counts[point] += 1;
        }
    }
    for &site in &[1usize, 2, 4, 8, 13, 21, 32, 44, 55, 64] {
        let freq = counts[site] as f64 / trajectories as f64;
        let expected = u.u(site);
        let se = (expected * (1.0 - expected) / trajectories as f64).sqrt();
        assert!(
            (freq - expected).abs() <= 4.0 * se,
            "site {site}: freq {freq} vs u {expected} (4se = {})",
            4.0 * se
        );
    }
}

#[test]
fn conditioned_overlap_scales_like_q_over_mu() {
    // Two independent conditioned copies overlap ~ q/mu when N ~ q mu.
    let law = alpha2_law(256);
    let q = 256usize;
    let n = (q as f64 * law.mu()).round() as usize;
    let overlap = conditioned_contacts(&law, q, n).unwrap().overlap_sum();
    let ratio = overlap / q as f64;
    let target = 1.0 / law.mu();
    assert!(
        (ratio - target).abs() < 0.1 * target,
        "overlap/q = {ratio} vs 1/mu = {target}"
    );
}

#[test]
fn gaussian_field_moments() {
    let field = DisorderLaw::Gaussian.sample_field(1_000_000, 77, 0);
    let n = field.len() as f64;
    let mean = field.prefix(field.len()) / n;
    assert!(mean.abs() < 4.0 / n.sqrt(), "mean {mean}");
    let mut sq = 0.0;
    for i in 1..=field.len() {
        sq += field.value(i) * field.value(i);
    }
    let var = sq / n - mean * mean;
    assert!((var - 1.0).abs() < 0.01, "variance {var}");

    // Tilted Gaussian: the sample mean sits at -delta within 4 sigma.
    let delta = 0.3;
    let tilted = DisorderLaw::Gaussian.tilted(delta).unwrap();
    let f = tilted.sample_field(1_000_000, 78, 0);
    let m = f.prefix(f.len()) / n;
    assert!((m + delta).abs() < 4.0 / n.sqrt(), "tilted mean {m}");
}

#[test]
fn small_t_cumulant_expansion() {
    // |Λ(t) - t²/2| <= |t|³ on |t| <= 0.1 for both base laws.
    for law in [DisorderLaw::Gaussian, DisorderLaw::Rademacher] {
        for i in -20..=20 {
            let t = i as f64 * 0.005;
            let dev = (law.log_mgf(t).unwrap() - 0.5 * t * t).abs();
            assert!(dev <= t.abs().powi(3) + 1e-15, "{law:?} at t={t}: dev {dev}");
        }
    }
}

#[test]
fn annealed_identity_replica_average() {
    // E[e^{βω - Λ(β)}] = 1, so the replica average of Z^c equals the
    // homogeneous value with weight h, within 4 MC standard errors.
    let law = alpha2_law(64);
    let dlaw = DisorderLaw::Gaussian;
    let (beta, h, n, replicas) = (0.15f64, 0.02f64, 64usize, 4096usize);
    let params = PinningParams::new(&dlaw, beta, h).unwrap();
    let samples: Vec<f64> = (0..replicas)
        .map(|r| {
            let field = dlaw.sample_field(n, 4, r as u64);
            pinning_constrained(&law, &field, &params, n).unwrap().last().exp()
        })
        .collect();
    let (mean, se) = numerics::mean_and_stderr(&samples);
    let homogeneous = homogeneous_pinning(&law, h, n).last().exp();
    assert!(
        (mean - homogeneous).abs() <= 4.0 * se,
        "replica mean {mean} vs homogeneous {homogeneous} (4se = {})",
        4.0 * se
    );
}

#[test]
fn free_constrained_gap_is_logarithmic() {
    // |ln Z_N - ln Z^c_N| = O(log N) in the localized phase, where the two
    // free energies coincide; the per-monomer gap vanishes. (Below h_c the
    // truncated law's constrained branch drifts linearly by construction.)
    let law = alpha2_law(4096);
    let dlaw = DisorderLaw::Gaussian;
    let params = PinningParams::new(&dlaw, 0.25, 0.05).unwrap();
    let field = dlaw.sample_field(4096, 8, 0);
    let mut previous_density_gap = f64::INFINITY;
    for &n in &[512usize, 1024, 2048, 4096] {
        let curve = pinning_constrained(&law, &field, &params, n).unwrap();
        let gap = (pinning_free(&curve, &law).unwrap() - curve.last()).abs();
        // Generous law-dependent constant: (1+α) ln N covers the tail decay.
        assert!(gap <= 3.0 * (n as f64).ln() + 1.0, "gap {gap} at N = {n}");
        let density_gap = gap / n as f64;
        assert!(density_gap < previous_density_gap + 1e-12);
        previous_density_gap = density_gap;
    }
}

#[test]
fn quenched_estimates_respect_boundary_floor() {
    // value >= -4 stderr - 2 C ln(N)/N with C from the polynomial tail.
    let law = alpha2_law(512);
    let dlaw = DisorderLaw::Gaussian;
    let c = 1.0 + law.alpha().unwrap();
    for &(beta, h) in &[(0.2f64, 0.0f64), (0.3, 0.01), (0.2, 0.02)] {
        let model = Model::pinning(&dlaw, beta, h).unwrap();
        for &n in &[256usize, 512] {
            let est = quenched_free_energy(&law, &dlaw, &model, n, 32, 15).unwrap();
            let floor = -4.0 * est.stderr - 2.0 * c * (n as f64).ln() / n as f64;
            assert!(
                est.value >= floor,
                "value {} below floor {floor} at beta={beta} h={h} N={n}",
                est.value
            );
        }
    }
}

#[test]
fn annealed_free_energy_monotone_convex_in_h() {
    let law = alpha2_law(2000);
    let hs: Vec<f64> = (0..=20).map(|i| -0.05 + 0.01 * i as f64).collect();
    let fs: Vec<f64> = hs.iter().map(|&h| annealed_pinning(&law, h).f_a).collect();
    for w in fs.windows(2) {
        assert!(w[1] >= w[0], "f_a must be nondecreasing");
    }
    for w in fs.windows(3) {
        assert!(w[0] + w[2] - 2.0 * w[1] >= -1e-10, "f_a must be convex");
    }
}

#[test]
fn threshold_robustness_of_critical_point() {
    // Halving θ moves h_c by less than the reported bracket width.
    let law = alpha2_law(256);
    let dlaw = DisorderLaw::Gaussian;
    let beta = 0.3f64;
    let base = SearchConfig {
        sizes: vec![128, 256, 512],
        replicas: 48,
        threshold: 1e-4,
        tol: 1.5e-3,
        max_iter: 8,
        seed: 99,
    };
    let halved = SearchConfig {
        threshold: 5e-5,
        ..base.clone()
    };
    let a = critical_point(&law, &dlaw, ModelKind::Pinning, beta, &base).unwrap();
    let b = critical_point(&law, &dlaw, ModelKind::Pinning, beta, &halved).unwrap();
    assert!(
        (a.h_c - b.h_c).abs() <= a.bracket_width(),
        "h_c moved {} vs width {}",
        (a.h_c - b.h_c).abs(),
        a.bracket_width()
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn log_mgf_is_convex(
        t1 in -3.0f64..3.0,
        span in 0.01f64..2.0,
        theta in 0.01f64..0.99,
        tilt in proptest::option::of(-0.8f64..0.8),
    ) {
        let law = match tilt {
            None => DisorderLaw::Gaussian,
            Some(d) => DisorderLaw::Rademacher.tilted(d).unwrap(),
        };
        let t2 = t1 + span;
        let mid = theta * t1 + (1.0 - theta) * t2;
        let lhs = law.log_mgf(mid).unwrap();
        let rhs = theta * law.log_mgf(t1).unwrap() + (1.0 - theta) * law.log_mgf(t2).unwrap();
        prop_assert!(lhs <= rhs + 1e-12);
    }

    #[test]
    fn laplace_transform_of_random_law_decreases(
        mass in proptest::collection::vec(0.01f64..1.0, 1..24),
        s in 0.0f64..4.0,
    ) {
        let law = ReturnLaw::test_law(&mass).unwrap();
        let at_zero = law.laplace(0.0).unwrap();
        prop_assert!((at_zero - 1.0).abs() < 1e-12);
        let lo = law.laplace(s).unwrap();
        let hi = law.laplace(s + 0.1).unwrap();
        prop_assert!(hi < lo);
    }

    #[test]
    fn reconciliation_matches_closed_form(
        alpha in 0.2f64..6.0,
        mu in 0.5f64..4.0,
    ) {
        let closed = alpha / (2.0 * (1.0 + alpha) * mu);
        prop_assert!((quadratic_reconciliation(alpha, mu) - closed).abs() < 1e-9);
    }

    #[test]
    fn basic_estimate_decays_iff_subcritical(
        zeta in 0.05f64..0.95,
        mu in 0.8f64..3.0,
        offset in -0.1f64..0.1,
    ) {
        let neutral = (1.0 - zeta) / (2.0 * mu);
        let c = neutral + offset;
        let v1 = bounds::basic_estimate(c, zeta, 10.0, mu);
        let v2 = bounds::basic_estimate(c, zeta, 20.0, mu);
        if offset < 0.0 {
            prop_assert!(v2 < v1);
        } else if offset > 0.0 {
            prop_assert!(v2 > v1);
        }
    }

    #[test]
    fn excursion_moment_uniformly_bounded_when_decaying(
        lambda in 0.0f64..0.6,
        zeta in 0.1f64..0.9,
        hfrac in 0.0f64..0.8,
        ell in 1usize..200,
    ) {
        // h = hfrac * (1 - zeta) * lambda keeps the exponent nonpositive for
        // Gaussian disorder: rate = 2λ²ζ(ζ - 1 + hfrac(1-ζ)) <= 0.
        let law = DisorderLaw::Gaussian;
        let h = hfrac * (1.0 - zeta) * lambda;
        let b = bounds::copolymer_excursion_moment(&law, lambda, h, zeta, ell).unwrap();
        prop_assert!(b.decaying);
        prop_assert!(b.bound <= 2f64.powf(1.0 - zeta) + 1e-12);
    }

    #[test]
    fn certificate_constants_satisfy_ordering(
        alpha in 1.3f64..5.0,
        mu in 0.9f64..3.0,
        eps_frac in 0.05f64..0.9,
        t in 1.0f64..1e4,
    ) {
        // ε below both precondition ceilings.
        let eps = eps_frac * (2.0 * (alpha - 1.0)).min(1.0).min(0.5);
        if let Ok(cert) = bounds::coarse_constants(alpha, mu, eps, t, 1.5) {
            prop_assert!(cert.zeta_eps > 1.0 / (1.0 + alpha) && cert.zeta_eps < 1.0);
            prop_assert!(cert.a_eps > cert.c_eps);
            prop_assert!(cert.series_exponent > 1.0);
            prop_assert!(cert.series_sum > 0.0);
        }
    }
}
