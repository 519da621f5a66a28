//! Experiment drivers: asymptotic exponent sweeps, the quasi-triangle-
//! inequality ratio scan, metric-gap and Sibony sweeps, the minus-model and
//! punctured-ball demonstrations, with CSV/JSON reporting.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::bounds::Witness;
use crate::domains::{CPoint, DomainSpec, Grade};
use crate::error::{Error, Result};
use crate::fit::{fit_exponent, SeriesFit};
use crate::lower::{ball_lempert, projection_lower, sqrt_trick_kr_lower, sqrt_trick_lower};
use crate::sibony;
use crate::upper::{
    self, ChainStrategy, Strategy, UpperOpts,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentId {
    Exponents,
    Qti,
    KrGap,
    Sibony,
    MinusModel,
    PuncturedDemo,
}

impl std::fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ExperimentId::Exponents => "exponents",
            ExperimentId::Qti => "qti",
            ExperimentId::KrGap => "kr-gap",
            ExperimentId::Sibony => "sibony",
            ExperimentId::MinusModel => "minus-model",
            ExperimentId::PuncturedDemo => "punctured-demo",
        };
        write!(f, "{s}")
    }
}

/// How delta is derived from eps along a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum DeltaRule {
    /// delta = eps * factor with factor in (0, 1).
    Fraction { factor: f64 },
    /// A fixed delta (must stay below every eps in the grid).
    Fixed { delta: f64 },
}

impl DeltaRule {
    pub fn half() -> Self {
        DeltaRule::Fraction { factor: 0.5 }
    }

    pub fn apply(&self, eps: f64) -> f64 {
        match *self {
            DeltaRule::Fraction { factor } => factor * eps,
            DeltaRule::Fixed { delta } => delta,
        }
    }

    /// Parse "eps/2", "eps*0.3" or a bare number.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim().replace(' ', "");
        if let Some(rest) = t.strip_prefix("eps/") {
            let d: f64 = rest
                .parse()
                .map_err(|_| Error::argument("bad delta rule divisor"))?;
            if !(d > 1.0) {
                return Err(Error::argument("delta rule divisor must exceed 1"));
            }
            return Ok(DeltaRule::Fraction { factor: 1.0 / d });
        }
        if let Some(rest) = t.strip_prefix("eps*") {
            let f: f64 = rest
                .parse()
                .map_err(|_| Error::argument("bad delta rule factor"))?;
            if !(f > 0.0 && f < 1.0) {
                return Err(Error::argument("delta rule factor must lie in (0, 1)"));
            }
            return Ok(DeltaRule::Fraction { factor: f });
        }
        let v: f64 = t
            .parse()
            .map_err(|_| Error::argument("delta rule must be eps/<k>, eps*<f> or a number"))?;
        if !(v > 0.0) {
            return Err(Error::argument("fixed delta must be positive"));
        }
        Ok(DeltaRule::Fixed { delta: v })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentId,
    pub mus: Vec<f64>,
    pub eps_min: f64,
    pub eps_max: f64,
    pub eps_count: usize,
    pub delta_rule: DeltaRule,
    pub seed: u64,
    pub certified_only: bool,
    pub out_csv: Option<PathBuf>,
    pub out_json: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentId) -> Self {
        let mus = match experiment {
            ExperimentId::Exponents => vec![0.4, 0.75, 1.0, 1.5, 2.0],
            ExperimentId::MinusModel => vec![1.0, 1.5, 2.0],
            _ => vec![2.0],
        };
        ExperimentConfig {
            experiment,
            mus,
            eps_min: 1e-6,
            eps_max: 1e-2,
            eps_count: 9,
            delta_rule: DeltaRule::half(),
            seed: 7,
            certified_only: false,
            out_csv: None,
            out_json: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps_min > 0.0 && self.eps_min < self.eps_max && self.eps_max < 1.0) {
            return Err(Error::argument("need 0 < eps_min < eps_max < 1"));
        }
        if self.eps_count < 3 {
            return Err(Error::argument("eps grid needs at least 3 points"));
        }
        if self.mus.is_empty() {
            return Err(Error::argument("at least one mu is required"));
        }
        for &eps in &self.eps_grid() {
            let d = self.delta_rule.apply(eps);
            if !(d > 0.0 && d < eps) {
                return Err(Error::argument(format!(
                    "delta rule gives delta = {d} outside (0, eps) at eps = {eps}"
                )));
            }
        }
        Ok(())
    }

    /// Log-spaced, strictly decreasing from eps_max to eps_min.
    pub fn eps_grid(&self) -> Vec<f64> {
        let n = self.eps_count;
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                10f64.powf(self.eps_max.log10() + t * (self.eps_min.log10() - self.eps_max.log10()))
            })
            .collect()
    }
}

/// One long-format result row; these are what the CSV carries.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Row {
    pub experiment: String,
    pub mu: f64,
    pub eps: f64,
    pub delta: f64,
    pub quantity: String,
    pub direction: String,
    pub grade: String,
    pub value: f64,
    pub family: String,
    /// Per-point local slope against the series' fitted intercept, blank for
    /// rows outside a fitted series.
    pub slope_contrib: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitSummary {
    pub series: String,
    pub fit: SeriesFit,
    pub expected_slope: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckSummary {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub experiment: ExperimentId,
    pub config: ExperimentConfig,
    pub fits: Vec<FitSummary>,
    pub checks: Vec<CheckSummary>,
    pub rows: Vec<Row>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.fits.iter().all(|f| f.pass) && self.checks.iter().all(|c| c.pass)
    }
}

fn grade_str(g: Grade) -> &'static str {
    match g {
        Grade::Certified => "certified",
        Grade::Numeric => "numeric",
    }
}

fn witness_family(w: &Witness) -> String {
    match w {
        Witness::Disc { disc, .. } => disc
            .family_id()
            .map(|id| id.to_string())
            .unwrap_or_else(|| match &disc.repr {
                crate::discs::DiscRepr::Polynomial { .. } => "poly".into(),
                crate::discs::DiscRepr::Mobius { .. } => "mobius".into(),
                _ => "disc".into(),
            }),
        Witness::Chain { chain } => {
            let names: Vec<String> = chain.legs.iter().map(|l| witness_family(&l.witness)).collect();
            names.join("+")
        }
        Witness::Decomposition { pieces } => {
            let names: Vec<String> = pieces.iter().map(|(_, b)| witness_family(&b.witness)).collect();
            names.join("+")
        }
        Witness::Projection { coordinate } => format!("proj[{coordinate}]"),
        Witness::Derivation { .. } => "sqrt-subst".into(),
        Witness::Candidate { .. } => "candidate".into(),
        Witness::Path { .. } => "path".into(),
        Witness::None => String::new(),
    }
}

/// Fill the slope-contribution column of a fitted series: the pointwise
/// (log v - intercept)/log eps.
fn annotate_series(rows: &mut [Row], quantity: &str, mu: f64, fit: &SeriesFit) {
    for r in rows.iter_mut() {
        if r.quantity == quantity && (r.mu - mu).abs() < 1e-12 && r.value > 0.0 {
            r.slope_contrib = Some((r.value.ln() - fit.intercept) / r.eps.ln());
        }
    }
}

fn collect_series(rows: &[Row], quantity: &str, mu: f64) -> Vec<(f64, f64)> {
    rows.iter()
        .filter(|r| r.quantity == quantity && (r.mu - mu).abs() < 1e-12 && r.value > 0.0)
        .map(|r| (r.eps, r.value))
        .collect()
}

/// The expected sweep exponent of the single-disc Lempert bound with
/// delta = c eps: 1 - (1 - 1/(2 mu))_+.
pub fn expected_ell_slope(mu: f64) -> f64 {
    1.0 - (1.0 - 1.0 / (2.0 * mu)).max(0.0)
}

/// The expected chain exponent: 1 - (1 - 1/mu)_+.
pub fn expected_chain_slope(mu: f64) -> f64 {
    1.0 - (1.0 - 1.0 / mu).max(0.0)
}

const SLOPE_TOL: f64 = 0.05;

// ---------------------------------------------------------------------------
// Individual experiments
// ---------------------------------------------------------------------------

fn exponents_experiment(cfg: &ExperimentConfig, opts: &UpperOpts) -> Result<Report> {
    let mut rows: Vec<Row> = Vec::new();
    let name = cfg.experiment.to_string();
    for &mu in &cfg.mus {
        let plain = DomainSpec::g_plain(mu, 2)?;
        let tilde = DomainSpec::g_tilde(mu, 2)?;
        for &eps in &cfg.eps_grid() {
            let delta = cfg.delta_rule.apply(eps);
            let z = plain.normal_point(delta)?;
            let w = plain.normal_point(eps)?;

            let upper = upper::lempert_upper(&plain, &z, &w, Strategy::ExplicitFamily, opts)?;
            rows.push(Row {
                experiment: name.clone(),
                mu,
                eps,
                delta,
                quantity: "ell".into(),
                direction: "upper".into(),
                grade: grade_str(upper.grade).into(),
                value: upper.value,
                family: witness_family(&upper.witness),
                slope_contrib: None,
            });

            let lower = if mu > 0.5 {
                sqrt_trick_lower(&tilde, delta, eps)?
            } else {
                projection_lower(&plain, &z, &w)?
            };
            rows.push(Row {
                experiment: name.clone(),
                mu,
                eps,
                delta,
                quantity: "ell".into(),
                direction: "lower".into(),
                grade: grade_str(lower.grade).into(),
                value: lower.value,
                family: witness_family(&lower.witness),
                slope_contrib: None,
            });

            if !cfg.certified_only {
                let mut light = opts.clone();
                light.restarts = 3;
                light.poly_degree = 4;
                light.grid = crate::discs::GridParams {
                    k_max: 12,
                    angles: 1024,
                    tau: 1e-12,
                };
                if let Ok(b) = upper::lempert_upper(&plain, &z, &w, Strategy::PolyOpt, &light) {
                    rows.push(Row {
                        experiment: name.clone(),
                        mu,
                        eps,
                        delta,
                        quantity: "ell-polyopt".into(),
                        direction: "upper".into(),
                        grade: grade_str(b.grade).into(),
                        value: b.value,
                        family: witness_family(&b.witness),
                        slope_contrib: None,
                    });
                }
            }
        }
    }

    let mut fits = Vec::new();
    let mut checks = Vec::new();
    for &mu in &cfg.mus {
        let expected = expected_ell_slope(mu);
        for (dir, series_name) in [("upper", "ell-upper"), ("lower", "ell-lower")] {
            let series: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| {
                    r.quantity == "ell" && r.direction == dir && (r.mu - mu).abs() < 1e-12
                })
                .map(|r| (r.eps, r.value))
                .collect();
            let fit = fit_exponent(&series)?;
            let pass = (fit.slope - expected).abs() <= SLOPE_TOL && fit.r_squared >= 0.99;
            annotate_series(&mut rows, "ell", mu, &fit);
            fits.push(FitSummary {
                series: format!("{series_name}[mu={mu}]"),
                fit,
                expected_slope: expected,
                tolerance: SLOPE_TOL,
                pass,
            });
        }
        // sandwich within the sweep
        let uppers = collect_series(&rows, "ell", mu);
        let lowers: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.quantity == "ell" && r.direction == "lower" && (r.mu - mu).abs() < 1e-12)
            .map(|r| (r.eps, r.value))
            .collect();
        let ok = uppers
            .iter()
            .zip(&lowers)
            .all(|(&(_, u), &(_, l))| l <= u + 1e-12);
        checks.push(CheckSummary {
            name: format!("sandwich[mu={mu}]"),
            pass: ok,
            detail: "every certified lower stays below the family upper".into(),
        });
    }

    Ok(Report {
        experiment: cfg.experiment,
        config: cfg.clone(),
        fits,
        checks,
        rows,
    })
}

/// The ratio table of the quasi-triangle-inequality scan:
/// (eps, certified single-disc lower, two-leg chain upper, ratio).
pub fn qti_ratio_scan(
    mu: f64,
    eps_grid: &[f64],
    delta_rule: DeltaRule,
    opts: &UpperOpts,
) -> Result<Vec<(f64, f64, f64, f64)>> {
    if !(mu > 1.0) {
        return Err(Error::argument(
            "the ratio diverges only for mu > 1 (exponent gap 1/(2 mu))",
        ));
    }
    let plain = DomainSpec::g_plain(mu, 2)?;
    let tilde = DomainSpec::g_tilde(mu, 2)?;
    let mut out = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        let delta = delta_rule.apply(eps);
        let z = plain.normal_point(delta)?;
        let w = plain.normal_point(eps)?;
        let lower = sqrt_trick_lower(&tilde, delta, eps)
            .map_err(|e| Error::computation(format!("lower bound failed at eps = {eps}: {e}")))?;
        let chain = upper::lempert_chain_upper(&plain, &z, &w, 2, ChainStrategy::Seeded, opts)
            .map_err(|e| Error::computation(format!("chain failed at eps = {eps}: {e}")))?;
        out.push((eps, lower.value, chain.aggregate_ell, lower.value / chain.aggregate_ell));
    }
    Ok(out)
}

fn qti_experiment(cfg: &ExperimentConfig, opts: &UpperOpts) -> Result<Report> {
    let name = cfg.experiment.to_string();
    let mut rows = Vec::new();
    let mut fits = Vec::new();
    let mut checks = Vec::new();
    for &mu in &cfg.mus {
        let grid = cfg.eps_grid();
        let table = qti_ratio_scan(mu, &grid, cfg.delta_rule, opts)?;
        let plain = DomainSpec::g_plain(mu, 2)?;
        for &(eps, lower, upper2, ratio) in &table {
            let delta = cfg.delta_rule.apply(eps);
            let z = plain.normal_point(delta)?;
            let w = plain.normal_point(eps)?;
            let ell_upper =
                upper::lempert_upper(&plain, &z, &w, Strategy::ExplicitFamily, opts)?;
            for (q, dir, v, fam) in [
                ("ell", "lower", lower, "sqrt-subst".to_string()),
                ("ell", "upper", ell_upper.value, witness_family(&ell_upper.witness)),
                ("ell^(2)", "upper", upper2, "chain".to_string()),
                ("qti-ratio", "value", ratio, String::new()),
            ] {
                rows.push(Row {
                    experiment: name.clone(),
                    mu,
                    eps,
                    delta,
                    quantity: q.into(),
                    direction: dir.into(),
                    grade: "certified".into(),
                    value: v,
                    family: fam,
                    slope_contrib: None,
                });
            }
        }
        let ratio_series: Vec<(f64, f64)> = table.iter().map(|&(e, _, _, r)| (e, r)).collect();
        let fit = fit_exponent(&ratio_series)?;
        let expected = -1.0 / (2.0 * mu);
        annotate_series(&mut rows, "qti-ratio", mu, &fit);
        fits.push(FitSummary {
            series: format!("qti-ratio[mu={mu}]"),
            fit: fit.clone(),
            expected_slope: expected,
            tolerance: SLOPE_TOL,
            pass: (fit.slope - expected).abs() <= SLOPE_TOL,
        });
        let first = table.first().expect("nonempty grid");
        let last = table.last().expect("nonempty grid");
        let growth = last.3 / first.3;
        checks.push(CheckSummary {
            name: format!("ratio-growth[mu={mu}]"),
            pass: growth >= 3.0,
            detail: format!(
                "ratio({:.1e})/ratio({:.1e}) = {:.3}",
                last.0, first.0, growth
            ),
        });
        let sandwich = rows
            .iter()
            .filter(|r| r.quantity == "ell" && (r.mu - mu).abs() < 1e-12)
            .collect::<Vec<_>>()
            .chunks(2)
            .all(|pair| match pair {
                [l, u] if l.direction == "lower" => l.value <= u.value + 1e-12,
                _ => true,
            });
        checks.push(CheckSummary {
            name: format!("row-sandwich[mu={mu}]"),
            pass: sandwich,
            detail: "single-disc lower <= single-disc upper on every row".into(),
        });
    }
    Ok(Report {
        experiment: cfg.experiment,
        config: cfg.clone(),
        fits,
        checks,
        rows,
    })
}

fn kr_gap_experiment(cfg: &ExperimentConfig, opts: &UpperOpts) -> Result<Report> {
    let name = cfg.experiment.to_string();
    let mut rows = Vec::new();
    let mut fits = Vec::new();
    let mut checks = Vec::new();
    let e1 = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    for &mu in &cfg.mus {
        if !(mu > 0.5) {
            return Err(Error::argument("metric-gap sweep needs mu > 1/2"));
        }
        let plain = DomainSpec::g_plain(mu, 2)?;
        let tilde = DomainSpec::g_tilde(mu, 2)?;
        for &eps in &cfg.eps_grid() {
            let p = plain.normal_point(eps)?;
            let lower = sqrt_trick_kr_lower(&tilde, eps)?;
            let single =
                upper::kobayashi_royden_upper(&plain, &p, &[e1, zero], Strategy::ExplicitFamily, opts)?;
            let two = upper::kr_decomposed_upper(&plain, &p, &[e1, zero], 2, opts)?;
            for (q, dir, v, g, fam) in [
                ("kappa", "lower", lower.value, lower.grade, "sqrt-subst".to_string()),
                ("kappa", "upper", single.value, single.grade, witness_family(&single.witness)),
                ("kappa^(2)", "upper", two.value, two.grade, witness_family(&two.witness)),
            ] {
                rows.push(Row {
                    experiment: name.clone(),
                    mu,
                    eps,
                    delta: f64::NAN,
                    quantity: q.into(),
                    direction: dir.into(),
                    grade: grade_str(g).into(),
                    value: v,
                    family: fam,
                    slope_contrib: None,
                });
            }
        }
        let lower_series: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.quantity == "kappa" && r.direction == "lower" && (r.mu - mu).abs() < 1e-12)
            .map(|r| (r.eps, r.value))
            .collect();
        let upper2_series: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.quantity == "kappa^(2)" && (r.mu - mu).abs() < 1e-12)
            .map(|r| (r.eps, r.value))
            .collect();
        let fit_low = fit_exponent(&lower_series)?;
        let fit_up = fit_exponent(&upper2_series)?;
        let exp_low = -(1.0 - 1.0 / (2.0 * mu));
        let exp_up = -(1.0 - 1.0 / mu);
        annotate_series(&mut rows, "kappa", mu, &fit_low);
        annotate_series(&mut rows, "kappa^(2)", mu, &fit_up);
        fits.push(FitSummary {
            series: format!("kappa-lower[mu={mu}]"),
            pass: (fit_low.slope - exp_low).abs() <= SLOPE_TOL,
            fit: fit_low,
            expected_slope: exp_low,
            tolerance: SLOPE_TOL,
        });
        fits.push(FitSummary {
            series: format!("kappa2-upper[mu={mu}]"),
            pass: (fit_up.slope - exp_up).abs() <= SLOPE_TOL,
            fit: fit_up,
            expected_slope: exp_up,
            tolerance: SLOPE_TOL,
        });
        if (mu - 2.0).abs() < 1e-12 {
            // proof arithmetic at eps = 0.01
            let p = plain.normal_point(0.01)?;
            let two = upper::kr_decomposed_upper(&plain, &p, &[e1, zero], 2, opts)?;
            checks.push(CheckSummary {
                name: "kappa2-at-0.01".into(),
                pass: (two.value - 20.0).abs() <= 1e-9,
                detail: format!("kappa^(2)(p_eps; (1,0)) = {:.12} (expect 20)", two.value),
            });
        }
    }
    Ok(Report {
        experiment: cfg.experiment,
        config: cfg.clone(),
        fits,
        checks,
        rows,
    })
}

fn sibony_experiment(cfg: &ExperimentConfig, _opts: &UpperOpts) -> Result<Report> {
    let name = cfg.experiment.to_string();
    let mut rows = Vec::new();
    let mut fits = Vec::new();
    let mut checks = Vec::new();
    let e1 = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    let e2 = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    for &mu in &cfg.mus {
        if !(mu > 1.0) {
            return Err(Error::argument("the Sibony sweep needs mu > 1"));
        }
        let mut worst_fd = 0.0_f64;
        for &eps in &cfg.eps_grid() {
            let lower = sibony::sibony_lower(mu, eps, &e1, None)?;
            let tangential = sibony::sibony_lower(mu, eps, &e2, None)?;
            let closed = sibony::f_branch_levi(mu, eps, Complex64::new(-eps, 0.0));
            let z = CPoint::from_re(&[-eps, 0.0])?;
            let fd = sibony::levi_form_fd(
                &|p| sibony::f_branch(mu, eps, p.coord(0)),
                &z,
                &e1,
                eps,
            )?;
            worst_fd = worst_fd.max((fd.value - closed).abs() / closed);
            for (q, v, fam) in [
                ("sibony", lower.value, "candidate"),
                ("sibony-tangential", tangential.value, "candidate"),
                ("levi-closed", closed, "f-branch"),
                ("levi-fd", fd.value, "f-branch"),
            ] {
                rows.push(Row {
                    experiment: name.clone(),
                    mu,
                    eps,
                    delta: f64::NAN,
                    quantity: q.into(),
                    direction: if q.starts_with("sibony") { "lower" } else { "value" }.into(),
                    grade: "numeric".into(),
                    value: v,
                    family: fam.into(),
                    slope_contrib: None,
                });
            }
        }
        let series: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.quantity == "sibony" && (r.mu - mu).abs() < 1e-12)
            .map(|r| (r.eps, r.value))
            .collect();
        let fit = fit_exponent(&series)?;
        let expected = -(1.0 - 1.0 / mu);
        annotate_series(&mut rows, "sibony", mu, &fit);
        fits.push(FitSummary {
            series: format!("sibony-normal[mu={mu}]"),
            pass: (fit.slope - expected).abs() <= SLOPE_TOL,
            fit,
            expected_slope: expected,
            tolerance: SLOPE_TOL,
        });
        checks.push(CheckSummary {
            name: format!("levi-fd-agreement[mu={mu}]"),
            pass: worst_fd < 1e-6,
            detail: format!("worst relative deviation {worst_fd:.3e}"),
        });
        // admissibility of the candidate at the coarsest eps
        let eps0 = cfg.eps_grid()[0];
        let cand = sibony::sibony_candidate(mu, eps0, sibony::DEFAULT_GLUING_EXPONENT, None, 2)?;
        let min_eig = sibony::candidate_min_hessian_eigenvalue(&cand, 10_000)?;
        checks.push(CheckSummary {
            name: format!("log-psh[mu={mu}]"),
            pass: min_eig >= -1e-8,
            detail: format!("min Hessian eigenvalue {min_eig:.3e}"),
        });
    }
    Ok(Report {
        experiment: cfg.experiment,
        config: cfg.clone(),
        fits,
        checks,
        rows,
    })
}

fn minus_model_experiment(cfg: &ExperimentConfig, opts: &UpperOpts) -> Result<Report> {
    let name = cfg.experiment.to_string();
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    let e1 = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    for &mu in &cfg.mus {
        if !(mu >= 1.0) {
            return Err(Error::argument("the minus model needs mu >= 1"));
        }
        let d = DomainSpec::g_minus(mu)?;
        for &eps in &cfg.eps_grid() {
            let delta = cfg.delta_rule.apply(eps);
            let z = d.normal_point(delta)?;
            let w = d.normal_point(eps)?;
            let chain = upper::lempert_chain_upper(&d, &z, &w, 2, ChainStrategy::Seeded, opts)?;
            let p = d.normal_point(eps)?;
            let two = upper::kr_decomposed_upper(&d, &p, &[e1, zero], 2, opts)?;
            let lower = projection_lower(&d, &z, &w)?;
            for (q, dir, v, g, fam) in [
                (
                    "ell^(2)",
                    "upper",
                    chain.aggregate_ell,
                    chain.grade(),
                    chain
                        .legs
                        .iter()
                        .map(|l| witness_family(&l.witness))
                        .collect::<Vec<_>>()
                        .join("+"),
                ),
                ("ell", "lower", lower.value, lower.grade, witness_family(&lower.witness)),
                ("kappa^(2)", "upper", two.value, two.grade, witness_family(&two.witness)),
            ] {
                rows.push(Row {
                    experiment: name.clone(),
                    mu,
                    eps,
                    delta,
                    quantity: q.into(),
                    direction: dir.into(),
                    grade: grade_str(g).into(),
                    value: v,
                    family: fam,
                    slope_contrib: None,
                });
            }
        }
        if (mu - 2.0).abs() < 1e-12 {
            let z = d.normal_point(0.005)?;
            let w = d.normal_point(0.01)?;
            let chain = upper::lempert_chain_upper(&d, &z, &w, 2, ChainStrategy::Seeded, opts)?;
            let expect = 2.0 * 0.005 / (2.0_f64.sqrt() * 0.1);
            checks.push(CheckSummary {
                name: "minus-chain-at-0.01".into(),
                pass: (chain.aggregate_ell - expect).abs() <= 1e-6,
                detail: format!(
                    "ell^(2) = {:.9} (expect {:.9})",
                    chain.aggregate_ell, expect
                ),
            });
            let p = d.normal_point(0.01)?;
            let two = upper::kr_decomposed_upper(&d, &p, &[e1, zero], 2, opts)?;
            let expect_k = (1.0 + 1.0 / 2.0_f64.sqrt()) * 10.0;
            checks.push(CheckSummary {
                name: "minus-kappa2-at-0.01".into(),
                pass: (two.value - expect_k).abs() <= 1e-3,
                detail: format!("kappa^(2) = {:.6} (expect {:.6})", two.value, expect_k),
            });
        }
    }
    Ok(Report {
        experiment: cfg.experiment,
        config: cfg.clone(),
        fits: Vec::new(),
        checks,
        rows,
    })
}

fn punctured_demo_experiment(cfg: &ExperimentConfig, opts: &UpperOpts) -> Result<Report> {
    let name = cfg.experiment.to_string();
    let ball = DomainSpec::ball(2)?;
    let domain = DomainSpec::punctured(ball, vec![CPoint::zero(2)])?;
    let mut rng = crate::rng::seeded(cfg.seed);
    let mut rows = Vec::new();
    let mut worst = 0.0_f64;
    let mut pair_idx = 0usize;
    while pair_idx < 20 {
        let draw = |rng: &mut crate::rng::SeededRng| -> CPoint {
            CPoint::new(vec![
                crate::rng::complex_in_disc_of(rng, 0.35),
                crate::rng::complex_in_disc_of(rng, 0.35),
            ])
            .expect("finite")
        };
        let z = draw(&mut rng);
        let w = draw(&mut rng);
        if z.norm() < 0.05 || w.norm() < 0.05 || z.dist(&w) < 0.05 {
            continue;
        }
        pair_idx += 1;
        let oracle = ball_lempert(&z, &w)?;
        let mut popts = opts.clone();
        popts.restarts = 6;
        popts.seed = cfg.seed.wrapping_add(pair_idx as u64);
        let numeric = upper::lempert_upper(&domain, &z, &w, Strategy::PolyOpt, &popts)?;
        worst = worst.max((numeric.value - oracle).abs());
        for (q, v, g) in [
            ("ell-numeric", numeric.value, grade_str(numeric.grade)),
            ("ell-oracle", oracle, "certified"),
        ] {
            rows.push(Row {
                experiment: name.clone(),
                mu: 0.0,
                eps: pair_idx as f64,
                delta: f64::NAN,
                quantity: q.into(),
                direction: "upper".into(),
                grade: g.into(),
                value: v,
                family: if q == "ell-numeric" { "poly" } else { "ball-geodesic" }.into(),
                slope_contrib: None,
            });
        }
    }
    let checks = vec![CheckSummary {
        name: "punctured-matches-ball".into(),
        pass: worst <= 1e-3,
        detail: format!("worst |numeric - oracle| = {worst:.3e} over 20 pairs"),
    }];
    Ok(Report {
        experiment: cfg.experiment,
        config: cfg.clone(),
        fits: Vec::new(),
        checks,
        rows,
    })
}

// ---------------------------------------------------------------------------
// Driver and reporting
// ---------------------------------------------------------------------------

/// Run the configured experiment and write the report files when paths are
/// set. Deterministic for a fixed config and seed.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let mut opts = UpperOpts::default();
    opts.seed = cfg.seed;
    let report = match cfg.experiment {
        ExperimentId::Exponents => exponents_experiment(cfg, &opts)?,
        ExperimentId::Qti => qti_experiment(cfg, &opts)?,
        ExperimentId::KrGap => kr_gap_experiment(cfg, &opts)?,
        ExperimentId::Sibony => sibony_experiment(cfg, &opts)?,
        ExperimentId::MinusModel => minus_model_experiment(cfg, &opts)?,
        ExperimentId::PuncturedDemo => punctured_demo_experiment(cfg, &opts)?,
    };
    if let Some(path) = &cfg.out_csv {
        write_csv(path, &report.rows)?;
    }
    if let Some(path) = &cfg.out_json {
        write_json(path, &report)?;
    }
    Ok(report)
}

pub fn csv_string(rows: &[Row]) -> Result<String> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record([
        "experiment",
        "mu",
        "eps",
        "delta",
        "quantity",
        "direction",
        "grade",
        "value",
        "family",
        "slope-contrib",
    ])
    .map_err(|e| Error::computation(format!("csv: {e}")))?;
    for r in rows {
        wtr.write_record([
            r.experiment.as_str(),
            &format_num(r.mu),
            &format_num(r.eps),
            &format_num(r.delta),
            r.quantity.as_str(),
            r.direction.as_str(),
            r.grade.as_str(),
            &format_num(r.value),
            r.family.as_str(),
            &r.slope_contrib.map(format_num).unwrap_or_default(),
        ])
        .map_err(|e| Error::computation(format!("csv: {e}")))?;
    }
    let bytes = wtr
        .into_inner()
        .map_err(|e| Error::computation(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::computation(format!("csv: {e}")))
}

fn format_num(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        format!("{v:.12e}")
    }
}

pub fn write_csv(path: &Path, rows: &[Row]) -> Result<()> {
    let s = csv_string(rows)?;
    let mut f = std::fs::File::create(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    f.write_all(s.as_bytes()).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })
}

pub fn write_json(path: &Path, report: &Report) -> Result<()> {
    let s = serde_json::to_string_pretty(report)?;
    std::fs::write(path, s).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })
}

/// Structural validation of a report JSON value against the shipped schema:
/// required keys with the right primitive shapes.
pub fn validate_report_json(v: &serde_json::Value) -> Result<()> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::argument("report must be an object"))?;
    for key in ["experiment", "config", "fits", "checks", "rows"] {
        if !obj.contains_key(key) {
            return Err(Error::argument(format!("report misses key '{key}'")));
        }
    }
    let rows = obj["rows"]
        .as_array()
        .ok_or_else(|| Error::argument("rows must be an array"))?;
    for r in rows {
        let ro = r
            .as_object()
            .ok_or_else(|| Error::argument("row must be an object"))?;
        for key in [
            "experiment",
            "mu",
            "eps",
            "delta",
            "quantity",
            "direction",
            "grade",
            "value",
            "family",
        ] {
            if !ro.contains_key(key) {
                return Err(Error::argument(format!("row misses key '{key}'")));
            }
        }
        if !ro["quantity"].is_string() || !ro["value"].is_number() && !ro["value"].is_null() {
            return Err(Error::argument("row fields have wrong types"));
        }
    }
    for f in obj["fits"]
        .as_array()
        .ok_or_else(|| Error::argument("fits must be an array"))?
    {
        for key in ["series", "fit", "expected_slope", "pass"] {
            if f.get(key).is_none() {
                return Err(Error::argument(format!("fit misses key '{key}'")));
            }
        }
    }
    Ok(())
}
