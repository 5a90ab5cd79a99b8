//! Independent oracles for the closed-form BER route.
//!
//! The conditional expressions are checked against a brute-force enumeration
//! of the detector decision regions (intervals of the real noise axis whose
//! probabilities are Gaussian CDF differences), and the quadrature-based
//! averages are checked against direct composite-Simpson integration of the
//! conditional error probability over the Gaussian cascade-amplitude
//! density. Neither oracle shares any code with the term tables or the
//! Gauss–Legendre machinery they validate.

#![allow(clippy::excessive_precision)] // frozen oracle digits

use approx::assert_relative_eq;
use uavris_core::{
    ber_average, ber_conditional, ber_upper, clt_stats, EvalMode, ImpairmentProfile,
    PowerAllocation, TermTable, User, VarianceTerms,
};

const SQRT_2: f64 = std::f64::consts::SQRT_2;
const PSI_2: f64 = 8.9220748109774566e-9;
const IOTA: f64 = 6.8095936577354467e-13;

/// Standard normal CDF, written against `libm::erfc` directly.
fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// P(lo < n < hi) for n ~ N(0, sigma²), with infinite endpoints allowed.
fn interval_prob(lo: f64, hi: f64, sigma: f64) -> f64 {
    if hi <= lo {
        0.0
    } else {
        normal_cdf(hi / sigma) - normal_cdf(lo / sigma)
    }
}

/// Exact direct-detection error probability of the far user for a fixed
/// effective amplitude `g`, enumerating the four equiprobable symbol pairs.
///
/// The decision statistic is `g·(a·s1 + b·s2) + n` and an error is a sign
/// flip relative to `s1`.
fn enumerate_far_user(g: f64, a: f64, b: f64, sigma: f64) -> f64 {
    let mut total = 0.0;
    for s1 in [-1.0, 1.0] {
        for s2 in [-1.0, 1.0] {
            let mean = g * (a * s1 + b * s2);
            let p = if s1 > 0.0 {
                interval_prob(f64::NEG_INFINITY, -mean, sigma)
            } else {
                interval_prob(-mean, f64::INFINITY, sigma)
            };
            total += 0.25 * p;
        }
    }
    total
}

/// Exact SIC error probability of the near user.
///
/// The first-stage decision partitions the noise axis at `n = -mean`; inside
/// each part the residual after replica subtraction is
/// `mean - g·a·ŝ1 + n`, and a second-stage error is again an interval
/// condition, so every joint outcome has a closed-form CDF probability.
fn enumerate_near_user(g: f64, a: f64, b: f64, sigma: f64) -> f64 {
    let mut total = 0.0;
    for s1 in [-1.0, 1.0] {
        for s2 in [-1.0, 1.0] {
            let mean = g * (a * s1 + b * s2);
            for s1_hat in [-1.0, 1.0] {
                let (region_lo, region_hi) = if s1_hat > 0.0 {
                    (-mean, f64::INFINITY)
                } else {
                    (f64::NEG_INFINITY, -mean)
                };
                let threshold = g * a * s1_hat - mean;
                let (err_lo, err_hi) = if s2 > 0.0 {
                    (f64::NEG_INFINITY, threshold)
                } else {
                    (threshold, f64::INFINITY)
                };
                total += 0.25
                    * interval_prob(region_lo.max(err_lo), region_hi.min(err_hi), sigma);
            }
        }
    }
    total
}

/// Fixed-amplitude cases spanning moderate to low error rates.
fn conditional_cases() -> Vec<(f64, f64)> {
    vec![(1.0e6, 120.0), (3.16e6, 164.0), (1.0e7, 40.0)]
}

#[test]
fn conditional_forms_match_region_enumeration_without_impairments() {
    let profile = ImpairmentProfile::ideal();
    for eps2 in [0.1, 0.2] {
        let alloc = PowerAllocation::new(eps2).unwrap();
        let (a, b) = (alloc.amp1(), alloc.amp2());
        for (p_s, lambda) in conditional_cases() {
            let vt =
                VarianceTerms::instantaneous(&profile, PSI_2, IOTA, p_s, lambda, &[], 1.0);
            let g = (PSI_2 * p_s * lambda).sqrt();
            let sigma = (0.5f64).sqrt();

            let table1 = TermTable::for_user(User::U1, &alloc, EvalMode::Consistent);
            let closed1 = ber_conditional(&table1, &vt, p_s, lambda).unwrap();
            assert_relative_eq!(
                closed1,
                enumerate_far_user(g, a, b, sigma),
                max_relative = 1e-11
            );

            let table2 = TermTable::for_user(User::U2, &alloc, EvalMode::Consistent);
            let closed2 = ber_conditional(&table2, &vt, p_s, lambda).unwrap();
            assert_relative_eq!(
                closed2,
                enumerate_near_user(g, a, b, sigma),
                max_relative = 1e-11
            );
        }
    }
}

#[test]
fn conditional_forms_match_region_enumeration_with_serving_distortion() {
    // With no interfering cells the distortion terms add a single Gaussian
    // variance ψ·P·λ·K_a², so the region enumeration stays exact.
    let profile = ImpairmentProfile::symmetric(0.15, 0, 1.0).unwrap();
    let alloc = PowerAllocation::new(0.2).unwrap();
    let (a, b) = (alloc.amp1(), alloc.amp2());
    for (p_s, lambda) in conditional_cases() {
        let vt = VarianceTerms::instantaneous(&profile, PSI_2, IOTA, p_s, lambda, &[], 1.0);
        let g = (PSI_2 * p_s * lambda).sqrt();
        let sigma_w = PSI_2 * p_s * lambda * profile.ka2() + 1.0;
        let sigma = (0.5 * sigma_w).sqrt();

        let table1 = TermTable::for_user(User::U1, &alloc, EvalMode::Consistent);
        let closed1 = ber_conditional(&table1, &vt, p_s, lambda).unwrap();
        assert_relative_eq!(
            closed1,
            enumerate_far_user(g, a, b, sigma),
            max_relative = 1e-11
        );

        let table2 = TermTable::for_user(User::U2, &alloc, EvalMode::Consistent);
        let closed2 = ber_conditional(&table2, &vt, p_s, lambda).unwrap();
        assert_relative_eq!(
            closed2,
            enumerate_near_user(g, a, b, sigma),
            max_relative = 1e-11
        );
    }
}

#[test]
fn single_stream_conditional_is_plain_bpsk() {
    let profile = ImpairmentProfile::ideal();
    let (p_s, lambda) = (2.0e6, 150.0);
    let vt = VarianceTerms::instantaneous(&profile, PSI_2, IOTA, p_s, lambda, &[], 1.0);
    let table = TermTable::single_stream(EvalMode::Consistent);
    let closed = ber_conditional(&table, &vt, p_s, lambda).unwrap();
    let g = (PSI_2 * p_s * lambda).sqrt();
    let direct = interval_prob(f64::NEG_INFINITY, -g, (0.5f64).sqrt());
    assert_relative_eq!(closed, direct, max_relative = 1e-11);
}

#[test]
fn published_conditional_variant_differs_from_enumeration() {
    // The verbatim published coefficients (linear amplitudes, no factor 2)
    // must stay a distinct evaluation route, not collapse into the exact one.
    let profile = ImpairmentProfile::ideal();
    let alloc = PowerAllocation::new(0.2).unwrap();
    let (p_s, lambda) = (1.0e6, 120.0);
    let vt = VarianceTerms::instantaneous(&profile, PSI_2, IOTA, p_s, lambda, &[], 1.0);
    let g = (PSI_2 * p_s * lambda).sqrt();
    let exact = enumerate_far_user(g, alloc.amp1(), alloc.amp2(), (0.5f64).sqrt());
    let table = TermTable::for_user(User::U1, &alloc, EvalMode::Paper);
    let printed = ber_conditional(&table, &vt, p_s, lambda).unwrap();
    assert!(
        (printed - exact).abs() / exact > 0.2,
        "published variant unexpectedly narrowed onto the exact form: {printed} vs {exact}"
    );
}

/// Composite Simpson rule with `n` (even) subintervals.
fn simpson<F: Fn(f64) -> f64>(lo: f64, hi: f64, n: usize, f: F) -> f64 {
    assert!(n >= 2 && n.is_multiple_of(2));
    let h = (hi - lo) / n as f64;
    let mut acc = f(lo) + f(hi);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(lo + i as f64 * h);
    }
    acc * h / 3.0
}

/// E[Q(k·|A|)] for A ~ N(m, s²), by direct integration of the Gaussian tail
/// function against the amplitude density, split at the |A| kink.
fn direct_q_average(k: f64, m: f64, s: f64) -> f64 {
    let q = |x: f64| 0.5 * libm::erfc(x / SQRT_2);
    let density = |a: f64| {
        let z = (a - m) / s;
        (-0.5 * z * z).exp() / (s * (2.0 * std::f64::consts::PI).sqrt())
    };
    let integrand = |a: f64| q(k * a.abs()) * density(a);
    let (lo, hi) = (m - 12.0 * s, m + 12.0 * s);
    let n = 1 << 15;
    if lo < 0.0 && hi > 0.0 {
        simpson(lo, 0.0, n, integrand) + simpson(0.0, hi, n, integrand)
    } else {
        simpson(lo, hi, n, integrand)
    }
}

/// Same signed sum as the quadrature route, with each term averaged by
/// [`direct_q_average`] instead of the MGF integral.
fn direct_average_ber(
    table: &TermTable,
    vt: &VarianceTerms,
    mean: f64,
    std_dev: f64,
    p_s: f64,
    psi: f64,
) -> f64 {
    let mut acc = 0.0;
    for term in &table.terms {
        let sigma_w = vt.sigma_w(term);
        let k = (2.0 * p_s * psi * term.zeta / sigma_w).sqrt();
        acc += term.sign * direct_q_average(k, mean, std_dev);
    }
    table.prefactor * acc
}

#[test]
fn quadrature_average_matches_direct_density_integration() {
    let alloc = PowerAllocation::new(0.2).unwrap();
    let cases = [
        (16, 3.16e5, ImpairmentProfile::ideal()),
        (16, 3.16e6, ImpairmentProfile::ideal()),
        (16, 3.16e6, ImpairmentProfile::symmetric(0.15, 3, 3.16e6).unwrap()),
        (64, 2.0e4, ImpairmentProfile::ideal()),
        (64, 3.16e5, ImpairmentProfile::symmetric(0.15, 3, 3.16e5).unwrap()),
    ];
    for (n_elements, p_s, profile) in cases {
        let stats = clt_stats(n_elements, EvalMode::Consistent);
        let vt = VarianceTerms::averaged(&stats, &profile, PSI_2, IOTA, p_s, 1.0);
        let std_dev = stats.variance.sqrt();
        for user in User::ALL {
            let table = TermTable::for_user(user, &alloc, EvalMode::Consistent);
            let via_mgf = ber_average(&table, &stats, &vt, p_s).unwrap();
            let via_density =
                direct_average_ber(&table, &vt, stats.mean, std_dev, p_s, PSI_2);
            assert_relative_eq!(via_mgf, via_density, max_relative = 1e-9, epsilon = 1e-13);
        }
        let single = TermTable::single_stream(EvalMode::Consistent);
        let via_mgf = ber_average(&single, &stats, &vt, p_s).unwrap();
        let via_density = direct_average_ber(&single, &vt, stats.mean, std_dev, p_s, PSI_2);
        assert_relative_eq!(via_mgf, via_density, max_relative = 1e-9, epsilon = 1e-13);
    }
}

#[test]
fn quadrature_average_matches_direct_density_integration_published_mode() {
    // The published bookkeeping changes the table entries and the second
    // moment inside σ_W, but the term-average identity is the same algebra.
    let alloc = PowerAllocation::new(0.2).unwrap();
    let profile = ImpairmentProfile::symmetric(0.15, 3, 1.0e6).unwrap();
    let stats = clt_stats(32, EvalMode::Paper);
    let p_s = 1.0e6;
    let vt = VarianceTerms::averaged(&stats, &profile, PSI_2, IOTA, p_s, 1.0);
    let std_dev = stats.variance.sqrt();
    for user in User::ALL {
        let table = TermTable::for_user(user, &alloc, EvalMode::Paper);
        let via_mgf = ber_average(&table, &stats, &vt, p_s).unwrap();
        let via_density = direct_average_ber(&table, &vt, stats.mean, std_dev, p_s, PSI_2);
        assert_relative_eq!(via_mgf, via_density, max_relative = 1e-9, epsilon = 1e-13);
    }
}

#[test]
fn upper_bound_dominates_average_for_positive_term_sets() {
    let profile = ImpairmentProfile::symmetric(0.15, 3, 1.0e5).unwrap();
    let alloc = PowerAllocation::new(0.2).unwrap();
    let stats = clt_stats(32, EvalMode::Consistent);
    for p_s in [1.0e4, 1.0e5, 1.0e6] {
        let vt = VarianceTerms::averaged(&stats, &profile, PSI_2, IOTA, p_s, 1.0);
        let table = TermTable::for_user(User::U1, &alloc, EvalMode::Consistent);
        let avg = ber_average(&table, &stats, &vt, p_s).unwrap();
        let bound = ber_upper(&table, &stats, &vt, p_s).unwrap();
        assert!(
            bound >= avg,
            "upper bound {bound} fell below the average {avg} at P = {p_s}"
        );
    }
}
