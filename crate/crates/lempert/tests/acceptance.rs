//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! with its measured runtime. Run with `--nocapture` to see the lines for
//! passing criteria too:
//!
//! ```bash
//! cargo test -p lempert --test acceptance -- --nocapture
//! ```

use num_complex::Complex64;
use std::time::Instant;

use lempert::bounds::{Direction, Quantity, Witness};
use lempert::discs::{self, GridParams, VerifyMode, VerifyOutcome};
use lempert::domains::{CPoint, DomainSpec, Grade, Modulus};
use lempert::fit::fit_exponent;
use lempert::lab::{self, DeltaRule, ExperimentConfig, ExperimentId};
use lempert::lower::{
    ball_lempert, projection_kr_lower, projection_lower, sqrt_trick_kr_lower, sqrt_trick_lower,
};
use lempert::sibony;
use lempert::upper::{
    kobayashi_royden_upper, kr_decomposed_upper, lempert_chain_upper, lempert_upper,
    ChainStrategy, Strategy, UpperOpts,
};
use lempert::Bound;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn report(criterion: &str, pass: bool, elapsed_s: f64, detail: &str) {
    println!(
        "criterion {criterion}: {} [{elapsed_s:.1}s] {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

fn eps_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let t = i as f64 / (n - 1) as f64;
            10f64.powf(hi.log10() + t * (lo.log10() - hi.log10()))
        })
        .collect()
}

/// 1. Exponent reproduction: for mu in {0.75, 1, 1.5, 2}, delta = eps/2,
///    eps in [1e-6, 1e-2] (9 points), the family upper bounds and the
///    square-root-substitution lower bounds each fit slope 1/(2 mu) +- 0.05
///    with R^2 >= 0.99.
#[test]
fn criterion_1_exponent_reproduction() {
    let t0 = Instant::now();
    let mut cfg = ExperimentConfig::new(ExperimentId::Exponents);
    cfg.mus = vec![0.75, 1.0, 1.5, 2.0];
    cfg.certified_only = true;
    let rep = lab::run_experiment(&cfg).expect("experiment runs");
    let mut pass = true;
    let mut detail = String::new();
    for f in &rep.fits {
        let expected = 0.5 / f.series.split("mu=").nth(1).unwrap().trim_end_matches(']').parse::<f64>().unwrap();
        let slope_ok = (f.fit.slope - expected).abs() <= 0.05;
        let r2_ok = f.fit.r_squared >= 0.99;
        if !(slope_ok && r2_ok && f.pass) {
            pass = false;
        }
        detail.push_str(&format!(
            "{}: slope {:.4} (expect {:.4}), R2 {:.6}; ",
            f.series, f.fit.slope, expected, f.fit.r_squared
        ));
    }
    let elapsed = t0.elapsed().as_secs_f64();
    report("1 (exponents)", pass && elapsed < 60.0, elapsed, &detail);
}

/// 2. Two-point-chain exponent: same sweep, the two-leg chain upper bounds
///    fit the chain exponent (1/mu clamped at 1) +- 0.05; at mu = 2 the
///    chain value at (eps, delta) = (0.01, 0.005) is <= 0.1.
#[test]
fn criterion_2_chain_exponent() {
    let t0 = Instant::now();
    let opts = UpperOpts::default();
    let mut pass = true;
    let mut detail = String::new();
    for &mu in &[0.75, 1.0, 1.5, 2.0] {
        let d = DomainSpec::g_plain(mu, 2).unwrap();
        let series: Vec<(f64, f64)> = eps_grid(1e-6, 1e-2, 9)
            .into_iter()
            .map(|eps| {
                let z = d.normal_point(0.5 * eps).unwrap();
                let w = d.normal_point(eps).unwrap();
                let chain =
                    lempert_chain_upper(&d, &z, &w, 2, ChainStrategy::Seeded, &opts).unwrap();
                (eps, chain.aggregate_ell)
            })
            .collect();
        let fit = fit_exponent(&series).unwrap();
        let expected = lab::expected_chain_slope(mu);
        if (fit.slope - expected).abs() > 0.05 {
            pass = false;
        }
        detail.push_str(&format!(
            "mu={mu}: slope {:.4} (expect {:.4}); ",
            fit.slope, expected
        ));
    }
    let d = DomainSpec::g_plain(2.0, 2).unwrap();
    let chain = lempert_chain_upper(
        &d,
        &d.normal_point(0.005).unwrap(),
        &d.normal_point(0.01).unwrap(),
        2,
        ChainStrategy::Seeded,
        &opts,
    )
    .unwrap();
    if !(chain.aggregate_ell <= 0.1) {
        pass = false;
    }
    detail.push_str(&format!("mu=2 chain(0.01, 0.005) = {:.6} <= 0.1", chain.aggregate_ell));
    let elapsed = t0.elapsed().as_secs_f64();
    report("2 (chain exponent)", pass && elapsed < 120.0, elapsed, &detail);
}

/// 3. Quasi-triangle-inequality violation at mu = 2: the ratio of the
///    certified single-disc lower bound to the two-leg chain upper bound
///    fits slope -0.25 +- 0.05 and grows by a factor >= 3 from eps = 1e-2
///    to eps = 1e-6.
#[test]
fn criterion_3_qti_violation() {
    let t0 = Instant::now();
    let cfg = ExperimentConfig::new(ExperimentId::Qti);
    let rep = lab::run_experiment(&cfg).expect("experiment runs");
    let fit = rep
        .fits
        .iter()
        .find(|f| f.series.starts_with("qti-ratio"))
        .expect("ratio fit present");
    let growth = rep
        .checks
        .iter()
        .find(|ch| ch.name.starts_with("ratio-growth"))
        .expect("growth check present");
    let pass = (fit.fit.slope + 0.25).abs() <= 0.05 && growth.pass;
    let elapsed = t0.elapsed().as_secs_f64();
    report(
        "3 (qti violation)",
        pass && elapsed < 120.0,
        elapsed,
        &format!("ratio slope {:.4} (expect -0.25); {}", fit.fit.slope, growth.detail),
    );
}

/// 4. Infinitesimal gap at mu = 2: metric lower bounds fit slope -0.75,
///    two-piece decomposition upper bounds fit slope -0.5; at eps = 0.01 the
///    decomposition bound equals 20 to 1e-9.
#[test]
fn criterion_4_infinitesimal_gap() {
    let t0 = Instant::now();
    let cfg = ExperimentConfig::new(ExperimentId::KrGap);
    let rep = lab::run_experiment(&cfg).expect("experiment runs");
    let low = rep
        .fits
        .iter()
        .find(|f| f.series.starts_with("kappa-lower"))
        .expect("lower fit");
    let up = rep
        .fits
        .iter()
        .find(|f| f.series.starts_with("kappa2-upper"))
        .expect("upper fit");
    let at001 = rep
        .checks
        .iter()
        .find(|ch| ch.name == "kappa2-at-0.01")
        .expect("point check");
    let pass = (low.fit.slope + 0.75).abs() <= 0.05
        && (up.fit.slope + 0.5).abs() <= 0.05
        && at001.pass;
    let elapsed = t0.elapsed().as_secs_f64();
    report(
        "4 (metric gap)",
        pass && elapsed < 60.0,
        elapsed,
        &format!(
            "kappa lower slope {:.4}, kappa^(2) upper slope {:.4}; {}",
            low.fit.slope, up.fit.slope, at001.detail
        ),
    );
}

/// 5. Exact pinch at mu = 1/2: the Mobius-product upper bound and the
///    projection lower bound agree to 1e-12 on 20 (delta, eps) pairs.
#[test]
fn criterion_5_exact_pinch() {
    let t0 = Instant::now();
    let d = DomainSpec::g_plain(0.5, 2).unwrap();
    let opts = UpperOpts::default();
    let mut worst = 0.0_f64;
    let mut rng = lempert::rng::seeded(505);
    for _ in 0..20 {
        let eps = 10f64.powf(lempert::rng::in_range(&mut rng, -5.0, -1.0));
        let delta = eps * lempert::rng::in_range(&mut rng, 0.05, 0.95);
        let z = d.normal_point(delta).unwrap();
        let w = d.normal_point(eps).unwrap();
        let upper = lempert_upper(&d, &z, &w, Strategy::ExplicitFamily, &opts).unwrap();
        let lower = projection_lower(&d, &z, &w).unwrap();
        assert!(upper.is_certified() && lower.is_certified());
        worst = worst.max((upper.value - lower.value).abs());
    }
    let elapsed = t0.elapsed().as_secs_f64();
    report(
        "5 (exact pinch)",
        worst <= 1e-12 && elapsed < 1.0,
        elapsed,
        &format!("worst |upper - lower| = {worst:.3e} over 20 pairs"),
    );
}

struct Instance {
    desc: String,
    bounds: Vec<Bound>,
}

/// 6. Sandwich property across the full grid: >= 500 instances; every
///    certified lower stays below every comparable certified upper, and
///    every numeric upper stays above the best certified lower - 1e-9.
#[test]
fn criterion_6_sandwich() {
    let t0 = Instant::now();
    let opts = UpperOpts::default();
    let mut instances: Vec<Instance> = Vec::new();
    let eps_list = eps_grid(1e-5, 1e-2, 5);

    let chain_bound = |chain: &lempert::Chain| -> Bound {
        Bound::new(
            Quantity::ell_m(2),
            chain.aggregate_ell,
            Direction::Upper,
            chain.grade(),
            Witness::Chain {
                chain: Box::new(chain.clone()),
            },
        )
        .unwrap()
    };

    // graph models: two-point data on the normal line
    let mut graph_domains: Vec<DomainSpec> = Vec::new();
    for &mu in &[0.75, 1.0, 1.5, 2.0] {
        graph_domains.push(DomainSpec::g_plain(mu, 2).unwrap());
        graph_domains.push(DomainSpec::g_tilde(mu, 2).unwrap());
    }
    for &mu in &[1.0, 1.5, 2.0] {
        graph_domains.push(DomainSpec::g_minus(mu).unwrap());
    }
    for p in [1.5, 2.0] {
        graph_domains.push(DomainSpec::g_psi(Modulus::power(p).unwrap(), 2).unwrap());
    }
    for d in &graph_domains {
        for &eps in &eps_list {
            for frac in [0.5, 0.75] {
                let delta = frac * eps;
                let z = d.normal_point(delta).unwrap();
                let w = d.normal_point(eps).unwrap();
                let mut bounds = vec![projection_lower(d, &z, &w).unwrap()];
                if let Ok(b) = sqrt_trick_lower(d, delta, eps) {
                    bounds.push(b);
                } else if matches!(d, DomainSpec::GMinus { .. }) {
                    // the tilde model contains the minus model, so its
                    // certified lower bounds transfer
                    let tilde = DomainSpec::g_tilde(d.mu().unwrap(), 2).unwrap();
                    bounds.push(sqrt_trick_lower(&tilde, delta, eps).unwrap());
                }
                if let Ok(b) = lempert_upper(d, &z, &w, Strategy::ExplicitFamily, &opts) {
                    bounds.push(b);
                }
                if let Ok(ch) = lempert_chain_upper(d, &z, &w, 2, ChainStrategy::Seeded, &opts) {
                    bounds.push(chain_bound(&ch));
                }
                instances.push(Instance {
                    desc: format!("{d:?} pair eps={eps:.1e} delta={delta:.1e}"),
                    bounds,
                });
            }
        }
    }

    // metric data at normal points
    let dirs = [
        vec![c(1.0, 0.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(1.0, 0.0)],
        vec![c(1.0, 0.0), c(1.0, 0.0)],
    ];
    for d in &graph_domains {
        for &eps in &eps_list {
            let p = d.normal_point(eps).unwrap();
            for x in &dirs {
                let mut bounds = vec![projection_kr_lower(d, &p, x).unwrap()];
                if x[1].norm() == 0.0 {
                    if let Ok(b) = sqrt_trick_kr_lower(d, eps) {
                        bounds.push(b);
                    } else if matches!(d, DomainSpec::GMinus { .. }) {
                        let tilde = DomainSpec::g_tilde(d.mu().unwrap(), 2).unwrap();
                        if let Ok(b) = sqrt_trick_kr_lower(&tilde, eps) {
                            bounds.push(b);
                        }
                    }
                }
                if let Ok(b) = kobayashi_royden_upper(d, &p, x, Strategy::ExplicitFamily, &opts) {
                    bounds.push(b);
                }
                if let Ok(b) = kr_decomposed_upper(d, &p, x, 2, &opts) {
                    bounds.push(b);
                }
                instances.push(Instance {
                    desc: format!("{d:?} metric eps={eps:.1e} x={x:?}"),
                    bounds,
                });
            }
        }
    }

    // product and ball geometry on random pairs
    let mut rng = lempert::rng::seeded(606);
    for kind in ["polydisc", "ball"] {
        let d = if kind == "polydisc" {
            DomainSpec::polydisc(2).unwrap()
        } else {
            DomainSpec::ball(2).unwrap()
        };
        for _ in 0..100 {
            let draw = |rng: &mut lempert::rng::SeededRng| {
                CPoint::new(vec![
                    lempert::rng::complex_in_disc_of(rng, 0.6),
                    lempert::rng::complex_in_disc_of(rng, 0.6),
                ])
                .unwrap()
            };
            let z = draw(&mut rng);
            let w = draw(&mut rng);
            if !d.contains(&z).unwrap() || !d.contains(&w).unwrap() || z == w {
                continue;
            }
            let bounds = vec![
                projection_lower(&d, &z, &w).unwrap(),
                lempert_upper(&d, &z, &w, Strategy::ExplicitFamily, &opts).unwrap(),
            ];
            instances.push(Instance {
                desc: format!("{kind} random pair"),
                bounds,
            });
        }
    }

    // numeric optimizer uppers against certified lowers
    let pd = DomainSpec::polydisc(2).unwrap();
    for k in 0..6 {
        let draw = |rng: &mut lempert::rng::SeededRng| {
            CPoint::new(vec![
                lempert::rng::complex_in_disc_of(rng, 0.35),
                lempert::rng::complex_in_disc_of(rng, 0.35),
            ])
            .unwrap()
        };
        let z = draw(&mut rng);
        let w = draw(&mut rng);
        if z == w {
            continue;
        }
        let mut popts = opts.clone();
        popts.restarts = 4;
        popts.seed = 900 + k;
        let bounds = vec![
            projection_lower(&pd, &z, &w).unwrap(),
            lempert_upper(&pd, &z, &w, Strategy::PolyOpt, &popts).unwrap(),
        ];
        instances.push(Instance {
            desc: "polydisc poly-opt".into(),
            bounds,
        });
    }

    // Sibony lower bounds against the metric uppers
    for &mu in &[1.5, 2.0] {
        let d = DomainSpec::g_plain(mu, 2).unwrap();
        for &eps in &eps_list {
            for x in &dirs[..2] {
                let p = d.normal_point(eps).unwrap();
                let mut bounds = Vec::new();
                if let Ok(b) = sibony::sibony_lower(mu, eps, x, None) {
                    bounds.push(b);
                }
                if let Ok(b) = kobayashi_royden_upper(&d, &p, x, Strategy::ExplicitFamily, &opts) {
                    bounds.push(b);
                }
                instances.push(Instance {
                    desc: format!("sibony mu={mu} eps={eps:.1e}"),
                    bounds,
                });
            }
        }
    }

    let mut comparisons = 0usize;
    let mut failures: Vec<String> = Vec::new();
    for inst in &instances {
        for lo in inst.bounds.iter().filter(|b| b.direction == Direction::Lower) {
            for up in inst.bounds.iter().filter(|b| b.direction == Direction::Upper) {
                if !Quantity::sandwich_comparable(&lo.quantity, &up.quantity) {
                    continue;
                }
                comparisons += 1;
                if lo.grade == Grade::Certified && up.grade == Grade::Certified {
                    if lo.value > up.value + 1e-12 {
                        failures.push(format!(
                            "{}: certified {} lower {:.6e} > certified {} upper {:.6e}",
                            inst.desc,
                            lo.quantity.short_name(),
                            lo.value,
                            up.quantity.short_name(),
                            up.value
                        ));
                    }
                }
                if up.grade == Grade::Numeric && lo.grade == Grade::Certified {
                    if up.value < lo.value - 1e-9 {
                        failures.push(format!(
                            "{}: numeric upper {:.6e} below certified lower {:.6e}",
                            inst.desc, up.value, lo.value
                        ));
                    }
                }
            }
        }
    }
    let elapsed = t0.elapsed().as_secs_f64();
    let pass = failures.is_empty() && instances.len() >= 500 && elapsed < 300.0;
    report(
        "6 (sandwich)",
        pass,
        elapsed,
        &format!(
            "{} instances, {} comparisons, {} violations{}",
            instances.len(),
            comparisons,
            failures.len(),
            failures
                .first()
                .map(|f| format!("; first: {f}"))
                .unwrap_or_default()
        ),
    );
}

/// 7. Containment certification: all eight disc families pass analytic
///    (where registered) and grid verification on 200 random in-region
///    draws each, with zero disagreements.
#[test]
fn criterion_7_containment() {
    let t0 = Instant::now();
    let grid = GridParams::default();
    let mut rng = lempert::rng::seeded(707);
    let mut disagreements = 0usize;
    let mut failures = 0usize;
    let mut total = 0usize;

    for fam in 1..=8 {
        for _ in 0..200 {
            total += 1;
            let (disc, domain, has_analytic) = match fam {
                1 => {
                    let mu = lempert::rng::in_range(&mut rng, 0.2, 2.0);
                    let re = lempert::rng::in_range(&mut rng, -0.9, -1e-3);
                    let im = lempert::rng::in_range(&mut rng, -0.3, 0.3);
                    (
                        discs::vertical(c(re, im), 2, None).unwrap(),
                        DomainSpec::g_plain(mu, 2).unwrap(),
                        true,
                    )
                }
                2 => {
                    let eps = 10f64.powf(lempert::rng::in_range(&mut rng, -6.0, -0.7));
                    (
                        discs::sqrt_disc(eps).unwrap(),
                        DomainSpec::g_plain(2.0, 2).unwrap(),
                        true,
                    )
                }
                3 => {
                    let mu = lempert::rng::in_range(&mut rng, 0.55, 2.0);
                    let eps = 10f64.powf(lempert::rng::in_range(&mut rng, -5.0, -1.4));
                    let lo = if mu > 1.0 { 1.0 - 1.0 / (2.0 * mu) } else { 0.01 };
                    let delta = eps * lempert::rng::in_range(&mut rng, lo + 1e-3, 0.999);
                    (
                        discs::first_degree(mu, eps, delta, 2).unwrap(),
                        DomainSpec::g_plain(mu, 2).unwrap(),
                        true,
                    )
                }
                4 => {
                    let mu = lempert::rng::in_range(&mut rng, 1.05, 2.0);
                    let eps = 10f64.powf(lempert::rng::in_range(&mut rng, -5.0, -2.0));
                    let s = 1.0 - 1.0 / (2.0 * mu);
                    let delta = s * eps * lempert::rng::in_range(&mut rng, 1e-3, 0.999);
                    let a0 = discs::second_degree_a0(mu).unwrap();
                    (
                        discs::second_degree(mu, eps, delta, a0, 2).unwrap(),
                        DomainSpec::g_plain(mu, 2).unwrap(),
                        false,
                    )
                }
                5 => {
                    let eps = lempert::rng::in_range(&mut rng, 1e-4, 0.9);
                    let delta = lempert::rng::in_range(&mut rng, 1e-4, 0.9);
                    let mu = lempert::rng::in_range(&mut rng, 0.1, 0.5);
                    (
                        discs::small_mu(eps, delta, 2).unwrap(),
                        DomainSpec::g_plain(mu, 2).unwrap(),
                        true,
                    )
                }
                6 => {
                    let eps = lempert::rng::in_range(&mut rng, 1e-4, 0.9);
                    let mu = lempert::rng::in_range(&mut rng, 0.55, 1.0);
                    (
                        discs::two_step_low(eps).unwrap(),
                        DomainSpec::g_plain(mu, 2).unwrap(),
                        true,
                    )
                }
                7 => {
                    let mu = lempert::rng::in_range(&mut rng, 1.05, 2.0);
                    let eps = 10f64.powf(lempert::rng::in_range(&mut rng, -6.0, -1.5));
                    (
                        discs::two_step_high(mu, eps).unwrap(),
                        DomainSpec::g_plain(mu, 2).unwrap(),
                        true,
                    )
                }
                _ => {
                    let mu = lempert::rng::in_range(&mut rng, 1.0, 2.0);
                    let eps = 10f64.powf(lempert::rng::in_range(&mut rng, -6.0, -1.0));
                    (
                        discs::minus_disc(mu, eps).unwrap(),
                        DomainSpec::g_minus(mu).unwrap(),
                        true,
                    )
                }
            };
            let grid_ok = discs::verify_containment(&disc, &domain, VerifyMode::Grid, &grid)
                .unwrap()
                .is_certified();
            if has_analytic {
                let analytic_ok =
                    discs::verify_containment(&disc, &domain, VerifyMode::Analytic, &grid)
                        .unwrap()
                        .is_certified();
                if analytic_ok != grid_ok {
                    disagreements += 1;
                }
                if !analytic_ok {
                    failures += 1;
                }
            }
            if !grid_ok {
                failures += 1;
            }
        }
    }
    let elapsed = t0.elapsed().as_secs_f64();
    let pass = disagreements == 0 && failures == 0 && elapsed < 120.0;
    report(
        "7 (containment)",
        pass,
        elapsed,
        &format!("{total} draws, {failures} failures, {disagreements} analytic/grid disagreements"),
    );
}

/// 8. Sibony: closed-form Levi values match finite differences to relative
///    1e-6 at 50 (mu, eps) pairs; the normal-direction sweep at mu = 2 fits
///    slope -(1 - 1/mu) +- 0.05; candidate admissibility sampling passes.
#[test]
fn criterion_8_sibony() {
    let t0 = Instant::now();
    let mut rng = lempert::rng::seeded(808);
    let mut worst_rel = 0.0_f64;
    for _ in 0..50 {
        let mu = lempert::rng::in_range(&mut rng, 1.1, 2.0);
        let eps = 10f64.powf(lempert::rng::in_range(&mut rng, -3.0, -1.3));
        let closed = sibony::f_branch_levi(mu, eps, c(-eps, 0.0));
        let z = CPoint::from_re(&[-eps, 0.0]).unwrap();
        let fd = sibony::levi_form_fd(
            &|p| sibony::f_branch(mu, eps, p.coord(0)),
            &z,
            &[c(1.0, 0.0), c(0.0, 0.0)],
            eps,
        )
        .unwrap();
        worst_rel = worst_rel.max((fd.value - closed).abs() / closed);
    }

    let series: Vec<(f64, f64)> = eps_grid(1e-6, 1e-2, 9)
        .into_iter()
        .map(|eps| {
            let v = sibony::sibony_lower(2.0, eps, &[c(1.0, 0.0), c(0.0, 0.0)], None)
                .unwrap()
                .value;
            (eps, v)
        })
        .collect();
    let fit = fit_exponent(&series).unwrap();
    let slope_ok = (fit.slope - (-0.5)).abs() <= 0.05;

    // admissibility: construction succeeds (raw <= 0 and collar dominance
    // sampled inside) and the Hessian sampling stays nonnegative
    let cand = sibony::sibony_candidate(2.0, 0.01, sibony::DEFAULT_GLUING_EXPONENT, None, 2);
    let min_eig = cand
        .as_ref()
        .ok()
        .map(|cd| sibony::candidate_min_hessian_eigenvalue(cd, 10_000).unwrap());
    let adm_ok = cand.is_ok() && min_eig.map_or(false, |m| m >= -1e-8);

    let elapsed = t0.elapsed().as_secs_f64();
    let pass = worst_rel < 1e-6 && slope_ok && adm_ok && elapsed < 120.0;
    report(
        "8 (sibony)",
        pass,
        elapsed,
        &format!(
            "FD worst rel {worst_rel:.3e}; sweep slope {:.4} (expect -0.5 +- 0.05); min Hessian eig {:?}",
            fit.slope, min_eig
        ),
    );
}

/// 9. Minus model: the two-leg chain at mu = 2, (eps, delta) = (0.01, 0.005)
///    equals 0.070711 to 1e-6 through verified minus-model discs; the
///    two-piece metric bound equals 17.071 to 1e-3.
#[test]
fn criterion_9_minus_model() {
    let t0 = Instant::now();
    let opts = UpperOpts::default();
    let d = DomainSpec::g_minus(2.0).unwrap();
    let z = d.normal_point(0.005).unwrap();
    let w = d.normal_point(0.01).unwrap();
    let chain = lempert_chain_upper(&d, &z, &w, 2, ChainStrategy::Seeded, &opts).unwrap();
    let chain_ok = (chain.aggregate_ell - 0.070711).abs() <= 1e-6
        && chain.grade() == Grade::Certified
        && chain.legs.iter().all(|l| {
            matches!(&l.witness, Witness::Disc { disc, .. }
                if disc.family_id() == Some(discs::FamilyId::F8))
        });
    let p = d.normal_point(0.01).unwrap();
    let two = kr_decomposed_upper(&d, &p, &[c(1.0, 0.0), c(0.0, 0.0)], 2, &opts).unwrap();
    let kappa_ok = (two.value - 17.071).abs() <= 1e-3 && two.is_certified();
    let elapsed = t0.elapsed().as_secs_f64();
    report(
        "9 (minus model)",
        chain_ok && kappa_ok && elapsed < 1.0,
        elapsed,
        &format!(
            "chain = {:.9} (expect 0.070711), kappa^(2) = {:.6} (expect 17.071)",
            chain.aggregate_ell, two.value
        ),
    );
}

/// 10. Polydisc oracle: the polynomial optimizer lands within 1e-3 of the
///     closed-form product value on 100 random pairs, while the projection
///     lower bound equals that value exactly.
#[test]
fn criterion_10_polydisc_oracle() {
    let t0 = Instant::now();
    let d = DomainSpec::polydisc(2).unwrap();
    let mut rng = lempert::rng::seeded(1010);
    let mut worst_gap = 0.0_f64;
    let mut worst_lower = 0.0_f64;
    let mut done = 0usize;
    while done < 100 {
        let draw = |rng: &mut lempert::rng::SeededRng| {
            CPoint::new(vec![
                lempert::rng::complex_in_disc_of(rng, 0.3),
                lempert::rng::complex_in_disc_of(rng, 0.3),
            ])
            .unwrap()
        };
        let z = draw(&mut rng);
        let w = draw(&mut rng);
        if z.dist(&w) < 1e-3 {
            continue;
        }
        done += 1;
        let oracle = (0..2)
            .map(|j| lempert::hyperbolic::mobius(z.coord(j), w.coord(j)).unwrap())
            .fold(0.0_f64, f64::max);
        let mut popts = UpperOpts::default();
        popts.restarts = 2;
        popts.poly_degree = 8;
        popts.seed = 4242 + done as u64;
        let numeric = lempert_upper(&d, &z, &w, Strategy::PolyOpt, &popts).unwrap();
        worst_gap = worst_gap.max((numeric.value - oracle).abs());
        let lower = projection_lower(&d, &z, &w).unwrap();
        worst_lower = worst_lower.max((lower.value - oracle).abs());
    }
    let elapsed = t0.elapsed().as_secs_f64();
    let pass = worst_gap <= 1e-3 && worst_lower == 0.0 && elapsed < 180.0;
    report(
        "10 (polydisc oracle)",
        pass,
        elapsed,
        &format!(
            "worst |poly-opt - oracle| = {worst_gap:.3e}, worst |projection - oracle| = {worst_lower:.1e}"
        ),
    );
}
