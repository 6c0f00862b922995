//! Property suites for the closed-form hypothesis algebra: threshold
//! ordering, the simplified-condition identity, interval membership of p'
//! and the Lambda ratios, GN exponent ranges, and the iteration limits.

use chemolab_core::hypothesis::{
    check_hypothesis, gn_exponents, h1_threshold, h2_threshold, interpolation_a1, lambda_tildes,
    moser_table, p_bar, p_prime, RkConvention,
};
use chemolab_core::params::{ModelParams, Sign};
use chemolab_core::rng::SplitMix64;
use proptest::prelude::*;

fn draw_params(rng: &mut SplitMix64) -> ModelParams {
    ModelParams {
        n: 3 + rng.below(6) as u32,
        m: rng.range(0.05, 4.0),
        a: rng.range(0.1, 5.0),
        b: rng.range(0.1, 5.0),
        alpha: rng.range(0.05, 6.0),
        beta: rng.range(1.0, 6.0),
        eta: rng.range(0.05, 4.0),
        sign: if rng.below(2) == 0 {
            Sign::Attractive
        } else {
            Sign::Repulsive
        },
    }
}

/// Inflate beta until alpha+beta clears the attractive threshold.
fn draw_params_with_h1(rng: &mut SplitMix64) -> ModelParams {
    let mut p = draw_params(rng);
    let threshold = h1_threshold(&p);
    if p.alpha + p.beta <= threshold {
        p.beta = (threshold - p.alpha + rng.range(0.1, 4.0)).max(1.0);
    }
    assert!(p.alpha + p.beta > h1_threshold(&p));
    p
}

#[test]
fn h2_never_exceeds_h1() {
    let mut rng = SplitMix64::new(0x5eed_0001);
    for _ in 0..10_000 {
        let p = draw_params(&mut rng);
        assert!(
            h2_threshold(&p) <= h1_threshold(&p) + 1e-15,
            "params {p:?}"
        );
    }
}

#[test]
fn eta_branch_equals_simplified_condition_for_m1_eta_alpha() {
    // With m = 1 and eta = alpha, the eta-branch predicate
    // alpha+beta > (2 eta l - m l - 2 eta)/(l-2) is algebraically equivalent
    // to alpha < 1 + 2 beta / n; the margins satisfy
    // 2 (alpha+beta - branch) = 2 beta - n (alpha - 1) exactly.
    let mut rng = SplitMix64::new(0x5eed_0002);
    for _ in 0..10_000 {
        let mut p = draw_params(&mut rng);
        p.m = 1.0;
        p.eta = p.alpha;
        let n = p.n as f64;
        let l = 2.0 * n / (n - 2.0);
        let branch = (2.0 * p.eta * l - p.m * l - 2.0 * p.eta) / (l - 2.0);
        let lhs = 2.0 * (p.alpha + p.beta - branch);
        let rhs = 2.0 * p.beta - n * (p.alpha - 1.0);
        let scale = lhs.abs().max(rhs.abs()).max(1.0);
        assert!((lhs - rhs).abs() <= 1e-12 * scale, "params {p:?}");
        // and the booleans agree away from the boundary
        if rhs.abs() > 1e-9 {
            assert_eq!(
                p.alpha + p.beta > branch,
                p.alpha < 1.0 + 2.0 * p.beta / n,
                "params {p:?}"
            );
        }
    }
}

#[test]
fn p_prime_and_lambda_membership_under_h1() {
    let mut rng = SplitMix64::new(0x5eed_0003);
    for _ in 0..10_000 {
        let p = draw_params_with_h1(&mut rng);
        let pbar = p_bar(&p).expect("H1 holds by construction");
        let p_exp = pbar + rng.range(0.0, 100.0) + 1e-9;
        let pp = p_prime(p_exp, p.alpha, p.beta)
            .unwrap_or_else(|e| panic!("{e} for {p:?} at p = {p_exp}"));
        assert!(pp > p.beta && pp < p_exp + p.alpha - 1.0);
        let t = lambda_tildes(p_exp, &p)
            .unwrap_or_else(|e| panic!("{e} for {p:?} at p = {p_exp}"));
        assert!(t.all_in_unit_interval());
    }
}

#[test]
fn interpolation_a1_stays_in_unit_interval() {
    let mut rng = SplitMix64::new(0x5eed_0004);
    for _ in 0..10_000 {
        let beta = rng.range(1.0, 6.0);
        let top = beta + rng.range(1e-6, 10.0);
        let p_prime_val = rng.range(beta, top);
        let a1 = interpolation_a1(p_prime_val, beta, top).unwrap();
        assert!((0.0..=1.0).contains(&a1));
    }
    // exact boundary values
    assert_eq!(interpolation_a1(2.0, 2.0, 7.0).unwrap(), 1.0);
    assert_eq!(interpolation_a1(7.0, 2.0, 7.0).unwrap(), 0.0);
}

#[test]
fn moser_limits_at_k40() {
    // q -> 2 and mu -> 2; r -> 1 and lambda -> l/(2(l-1)) for the geometric
    // exponent sequence (p_{k-1}/p_k -> 1/2).
    let families = [
        (3u32, 1.0, 2.0, 2.0, 1.0),
        (4, 2.0, 3.0, 2.0, 1.5),
        (5, 0.5, 3.2, 3.0, 0.8),
    ];
    for &(n, m, alpha, beta, eta) in &families {
        let p = ModelParams {
            n,
            m,
            a: 1.0,
            b: 1.0,
            alpha,
            beta,
            eta,
            sign: Sign::Attractive,
        };
        assert!(p.alpha + p.beta > h1_threshold(&p), "family {p:?} must satisfy the hypothesis");
        let rows = moser_table(&p, 40, RkConvention::PreviousExponent).unwrap();
        assert_eq!(rows.len(), 40);
        for row in &rows {
            assert!(row.mu1_k <= 2.0 && row.mu_eta_k <= 2.0 && row.mu0_k <= 2.0);
            let l = 2.0 * n as f64 / (n as f64 - 2.0);
            for q in [row.q1_k, row.q_eta_k, row.q0_k, row.r_k] {
                assert!((1.0..).contains(&q) && q < l);
            }
        }
        let last = rows.last().unwrap();
        let l = 2.0 * n as f64 / (n as f64 - 2.0);
        assert!((last.q1_k - 2.0).abs() < 0.1);
        assert!((last.q_eta_k - 2.0).abs() < 0.1);
        assert!((last.q0_k - 2.0).abs() < 0.1);
        assert!((last.r_k - 1.0).abs() < 0.1);
        assert!((last.mu1_k - 2.0).abs() < 0.1);
        assert!((last.mu_eta_k - 2.0).abs() < 0.1);
        assert!((last.mu0_k - 2.0).abs() < 0.1);
        // lambda recomputed from the tabulated exponents
        let gn = gn_exponents(last.q0_k, last.r_k, l).unwrap();
        let lambda_limit = l / (2.0 * (l - 1.0));
        assert!((gn.lambda - lambda_limit).abs() < 0.1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn gn_lambda_in_unit_interval_and_gamma_positive(
        r in 1.0f64..5.0,
        dq in 1e-6f64..4.0,
        dl in 1e-6f64..6.0,
    ) {
        let q = r + dq;
        let l = q + dl;
        if let Ok(gn) = gn_exponents(q, r, l) {
            prop_assert!(gn.lambda > 0.0 && gn.lambda < 1.0);
            prop_assert!(2.0 - gn.lambda * q > 0.0);
            prop_assert!(gn.gamma > 0.0);
        }
    }

    #[test]
    fn gn_gamma_continuous_in_q(
        r in 1.0f64..3.0,
        q0 in 1.5f64..4.0,
        l in 5.0f64..8.0,
    ) {
        // gamma = 2(1-lambda)q/(2-lambda q) has unbounded slope as
        // lambda q -> 2, so continuity is sampled on the quantified
        // interior 2 - lambda q >= 0.2 of the admissible set.
        let h = 1e-7;
        let a = gn_exponents(q0, r, l);
        let b = gn_exponents(q0 + h, r, l);
        if let (Ok(a), Ok(b)) = (a, b) {
            if 2.0 - a.lambda * a.q >= 0.2 && 2.0 - b.lambda * b.q >= 0.2 {
                prop_assert!((a.gamma - b.gamma).abs() < 1e-3);
            }
        }
    }

    #[test]
    fn report_margins_match_flags(
        m in 0.1f64..3.0,
        alpha in 0.1f64..5.0,
        beta in 1.0f64..5.0,
        eta in 0.1f64..3.0,
        n in 3u32..8,
    ) {
        let p = ModelParams { n, m, a: 1.0, b: 1.0, alpha, beta, eta, sign: Sign::Attractive };
        let report = check_hypothesis(&p);
        prop_assert_eq!(report.h1_holds, report.h1_margin > 0.0);
        prop_assert_eq!(report.h2_holds, report.h2_margin > 0.0);
        prop_assert!(report.h2_margin >= report.h1_margin);
        prop_assert!(report.l > 2.0);
        if report.h1_holds {
            prop_assert!(report.h2_holds);
        }
    }
}
