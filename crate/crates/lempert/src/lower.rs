//! Certified lower bounds: coordinate-projection contraction, the
//! square-root substitution with the Schwarz lemma (distance and
//! infinitesimal versions), and the localization combinator.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bounds::{Bound, Direction, Quantity, Witness};
use crate::domains::{check_dim, CPoint, DomainSpec, Grade, Modulus};
use crate::error::{Error, Result};

pub use crate::hyperbolic::mobius;

/// A modulus of continuity together with the derived quantities of the
/// square-root substitution: beta_eps solving psi(C beta^2) = eps and the
/// growth factor F(eps) = beta_eps / eps^{1/2}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulusOfContinuity {
    pub psi: Modulus,
    /// The constant in front of beta^2 coming from the tangential coordinate
    /// bound; 2 (n - 1) for dimension n.
    pub coord_constant: f64,
}

impl ModulusOfContinuity {
    pub fn new(psi: Modulus, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::argument("needs dimension >= 2"));
        }
        Ok(ModulusOfContinuity {
            psi,
            coord_constant: 2.0 * (dim as f64 - 1.0),
        })
    }

    /// Solve psi(C beta^2) = eps for beta by bisection to relative 1e-12.
    pub fn beta(&self, eps: f64) -> Result<f64> {
        if !(eps > 0.0) {
            return Err(Error::argument("eps must be positive"));
        }
        let c = self.coord_constant;
        let f = |b: f64| self.psi.eval(c * b * b) - eps;
        let mut lo = 0.0_f64;
        let mut hi = 1.0_f64;
        // grow hi until the bracket contains the root
        let mut guard = 0;
        while f(hi) < 0.0 {
            hi *= 2.0;
            guard += 1;
            if guard > 200 {
                return Err(Error::numeric("modulus solve failed to bracket"));
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) >= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-12 * hi {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// F(eps) = beta_eps / eps^{1/2}; tends to infinity as eps -> 0.
    pub fn growth_factor(&self, eps: f64) -> Result<f64> {
        Ok(self.beta(eps)? / eps.sqrt())
    }
}

/// Certified lower bound by contracting onto a coordinate disc: the maximum
/// over coordinates of the pseudohyperbolic distance of the projections.
/// Valid simultaneously for every chain length m.
///
/// Applies to any of the models (they all sit inside the unit polydisc).
/// On punctured domains the value is still valid but is graded Numeric, per
/// the demonstration-grade rule for those domains.
pub fn projection_lower(domain: &DomainSpec, z: &CPoint, w: &CPoint) -> Result<Bound> {
    check_dim(domain.dim(), z.dim())?;
    check_dim(domain.dim(), w.dim())?;
    if !domain.contains(z)? || !domain.contains(w)? {
        return Err(Error::argument("both points must lie inside the domain"));
    }
    if matches!(domain, DomainSpec::QuadImage { .. }) {
        // coordinates are not bounded by 1 there
        return Err(Error::capability(
            "projection bound needs a domain inside the unit polydisc",
        ));
    }
    let mut best = (0.0_f64, 0usize);
    for j in 0..z.dim() {
        let m = mobius(z.coord(j), w.coord(j))?;
        if m > best.0 {
            best = (m, j);
        }
    }
    let grade = if domain.certifiable() {
        Grade::Certified
    } else {
        Grade::Numeric
    };
    // valid for every chain length at once
    Bound::new(
        Quantity::ell_m(usize::MAX),
        best.0,
        Direction::Lower,
        grade,
        Witness::Projection { coordinate: best.1 },
    )
}

/// Certified lower bound on kappa^(m)(z; X) for every m by contracting onto
/// a coordinate disc: max_j |X_j| / (1 - |z_j|^2).
pub fn projection_kr_lower(
    domain: &DomainSpec,
    z: &CPoint,
    x: &[Complex64],
) -> Result<Bound> {
    check_dim(domain.dim(), z.dim())?;
    check_dim(domain.dim(), x.len())?;
    if !domain.contains(z)? {
        return Err(Error::argument("base point must lie inside the domain"));
    }
    if matches!(domain, DomainSpec::QuadImage { .. }) {
        return Err(Error::capability(
            "projection bound needs a domain inside the unit polydisc",
        ));
    }
    let mut best = (0.0_f64, 0usize);
    for j in 0..z.dim() {
        if z.coord(j).norm() >= 1.0 {
            return Err(Error::argument("point outside the unit polydisc"));
        }
        let v = x[j].norm() / (1.0 - z.coord(j).norm_sqr());
        if v > best.0 {
            best = (v, j);
        }
    }
    let grade = if domain.certifiable() {
        Grade::Certified
    } else {
        Grade::Numeric
    };
    Bound::new(
        Quantity::kappa_m(usize::MAX),
        best.0,
        Direction::Lower,
        grade,
        Witness::Projection { coordinate: best.1 },
    )
}

/// Which model the square-root substitution is running on, with the constants
/// it needs: the base point of the square root and the radius beta of the
/// restricted disc.
fn sqrt_trick_setup(domain: &DomainSpec, eps: f64) -> Result<(f64, f64, Vec<String>)> {
    match domain {
        DomainSpec::GTilde { mu, dim } | DomainSpec::GPlain { mu, dim } => {
            // The tilde model dominates the plain one from below, so the same
            // constants serve both. Tangential coordinates obey
            // |phi_j| <= 2 beta^2 on the beta-disc, so their mu-sum is below
            // (n-1) eps once (2 beta^2)^mu = eps.
            if !(*mu > 0.5) {
                return Err(Error::capability(
                    "square-root substitution needs mu > 1/2",
                ));
            }
            if !(eps <= 0.5) {
                return Err(Error::range("eps must be at most 1/2"));
            }
            let beta = (eps.powf(1.0 / mu) / 2.0).sqrt();
            if !(beta < 1.0) {
                return Err(Error::range("beta >= 1; eps too large"));
            }
            let base = (*dim as f64 - 1.0) * eps;
            let steps = vec![
                format!("(2 beta^2)^mu = eps with mu = {mu}: beta = {beta:.12e}"),
                format!(
                    "tangential coordinates stay below 2 beta^2 on the beta-disc, \
                     so the first coordinate lands in Re z < {base:.6e} + |Im z|^{mu}"
                ),
            ];
            Ok((base, beta, steps))
        }
        DomainSpec::GPsi { psi, dim } => {
            let moc = ModulusOfContinuity::new(psi.clone(), *dim)?;
            let beta = moc.beta(eps)?;
            if !(beta < 1.0) {
                return Err(Error::range("beta >= 1; eps too large"));
            }
            if !(eps <= 0.5) {
                return Err(Error::range("eps must be at most 1/2"));
            }
            let steps = vec![
                format!(
                    "psi(C beta^2) = eps with C = {}: beta = {beta:.12e}",
                    moc.coord_constant
                ),
                format!(
                    "the first coordinate lands in Re z < psi(|Im z| + C beta^2), \
                     whose real-axis bound is eps = {eps:.6e}"
                ),
            ];
            Ok((eps, beta, steps))
        }
        _ => Err(Error::capability(
            "square-root substitution applies to the tilde, plain and psi models",
        )),
    }
}

/// Certified lower bound for ell(p_delta, p_eps) on the graph models via the
/// square-root substitution:
///
///   ell >= beta * (sqrt(base + eps) - sqrt(base + delta))
///               / (sqrt(base + eps) + sqrt(base + delta)),
///
/// where `base` is the real-axis bound of the region the first coordinate is
/// trapped in ((n-1) eps for the tilde model, reproducing the two-dimensional
/// constants exactly).
pub fn sqrt_trick_lower(domain: &DomainSpec, delta: f64, eps: f64) -> Result<Bound> {
    if !(delta > 0.0 && delta < eps) {
        return Err(Error::argument("need 0 < delta < eps"));
    }
    let (base, beta, mut steps) = sqrt_trick_setup(domain, eps)?;
    let s_eps = (base + eps).sqrt();
    let s_delta = (base + delta).sqrt();
    let factor = (s_eps - s_delta) / (s_eps + s_delta);
    let value = beta * factor;
    steps.push(format!(
        "f(xi) = -(({base:.6e}) - xi)^(1/2) maps the region into the left half-plane; \
         f(-eps) = -{s_eps:.12e}, f(-delta) = -{s_delta:.12e}"
    ));
    steps.push(format!(
        "Schwarz-Pick on the restricted disc: alpha / beta >= \
         ({s_eps:.6e} - {s_delta:.6e}) / ({s_eps:.6e} + {s_delta:.6e}) = {factor:.12e}"
    ));
    steps.push(format!("bound = beta * factor = {value:.12e}"));
    Bound::new(
        Quantity::ell(),
        value,
        Direction::Lower,
        Grade::Certified,
        Witness::Derivation { steps },
    )
}

/// Certified lower bound for kappa(p_eps; (1, 0, ..., 0)) via the Schwarz
/// lemma applied to the Cayley transport of the square-root substitution.
/// The composition derivative evaluates to beta / (4 (base + eps)), i.e.
/// beta/(8 eps) on the two-dimensional tilde model.
pub fn sqrt_trick_kr_lower(domain: &DomainSpec, eps: f64) -> Result<Bound> {
    let (base, beta, mut steps) = sqrt_trick_setup(domain, eps)?;
    let s2 = base + eps; // square of the half-plane base point
    let value = beta / (4.0 * s2);
    steps.push(format!(
        "|f'(-eps)| = 1/(2 sqrt({s2:.6e})), Cayley derivative 1/(2 sqrt({s2:.6e}))"
    ));
    steps.push(format!(
        "Schwarz lemma: 1 >= beta |lambda| / (4 * {s2:.6e}), so kappa >= beta/(4*{s2:.6e}) = {value:.12e}"
    ));
    Bound::new(
        Quantity::kappa(),
        value,
        Direction::Lower,
        Grade::Certified,
        Witness::Derivation { steps },
    )
}

/// Localization combinator: a lower bound on ell_D(D cap V, D minus U) times
/// a lower bound on ell_{D cap U}(z, w) bounds ell_D(z, w) from below.
pub fn localize_lower(gap_lower: f64, inner_lower: f64) -> Result<f64> {
    if !(gap_lower > 0.0 && gap_lower <= 1.0) {
        return Err(Error::argument("gap factor must lie in (0, 1]"));
    }
    if !(inner_lower >= 0.0) || !inner_lower.is_finite() {
        return Err(Error::argument("inner bound must be finite and nonnegative"));
    }
    Ok(gap_lower * inner_lower)
}

/// Pseudohyperbolic-type distance of the unit ball,
/// m(z, w)^2 = 1 - (1 - ||z||^2)(1 - ||w||^2) / |1 - <z, w>|^2.
/// Equals the Lempert function of the ball.
pub fn ball_lempert(z: &CPoint, w: &CPoint) -> Result<f64> {
    check_dim(z.dim(), w.dim())?;
    if z.norm() >= 1.0 || w.norm() >= 1.0 {
        return Err(Error::argument("both points must lie in the open ball"));
    }
    let inner: Complex64 = z
        .coords()
        .iter()
        .zip(w.coords())
        .map(|(a, b)| a * b.conj())
        .sum();
    let one = Complex64::new(1.0, 0.0);
    let num = (1.0 - z.norm() * z.norm()) * (1.0 - w.norm() * w.norm());
    let den = (one - inner).norm_sqr();
    Ok((1.0 - num / den).max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pt(coords: &[(f64, f64)]) -> CPoint {
        CPoint::new(
            coords
                .iter()
                .map(|&(r, i)| Complex64::new(r, i))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn projection_examples() {
        let gt = DomainSpec::g_tilde(2.0, 2).unwrap();
        let b = projection_lower(
            &gt,
            &gt.normal_point(0.005).unwrap(),
            &gt.normal_point(0.01).unwrap(),
        )
        .unwrap();
        assert_abs_diff_eq!(b.value, 0.005 / 0.99995, epsilon = 1e-15);
        assert!(b.is_certified());

        let pd = DomainSpec::polydisc(2).unwrap();
        let b = projection_lower(&pd, &pt(&[(0.0, 0.0), (0.0, 0.0)]), &pt(&[(0.3, 0.0), (0.1, 0.0)]))
            .unwrap();
        assert_abs_diff_eq!(b.value, 0.3, epsilon = 1e-15);

        let same = pt(&[(0.2, 0.1), (0.0, 0.0)]);
        let b = projection_lower(&pd, &same, &same).unwrap();
        assert_eq!(b.value, 0.0);
    }

    #[test]
    fn sqrt_trick_frozen_values() {
        // independent recomputation of the derivation chain at mu = 2,
        // delta = 0.005, eps = 0.01 (two dimensions, base = eps)
        let gt = DomainSpec::g_tilde(2.0, 2).unwrap();
        let b = sqrt_trick_lower(&gt, 0.005, 0.01).unwrap();
        let beta = (0.01_f64.powf(0.5) / 2.0).sqrt();
        assert_abs_diff_eq!(beta, 0.223607, epsilon = 1e-6);
        let factor = (0.02_f64.sqrt() - 0.015_f64.sqrt()) / (0.02_f64.sqrt() + 0.015_f64.sqrt());
        assert_abs_diff_eq!(factor, 0.071797, epsilon = 1e-6);
        assert_abs_diff_eq!(b.value, beta * factor, epsilon = 1e-15);
        assert_abs_diff_eq!(b.value, 0.016054, epsilon = 1e-6);
        assert!(b.is_certified());

        // mu = 1.5
        let gt = DomainSpec::g_tilde(1.5, 2).unwrap();
        let b = sqrt_trick_lower(&gt, 0.005, 0.01).unwrap();
        let beta = (0.01_f64.powf(1.0 / 1.5) / 2.0).sqrt();
        assert_abs_diff_eq!(beta, 0.152342, epsilon = 1e-5);
        assert_abs_diff_eq!(b.value, beta * factor, epsilon = 1e-15);
        assert_abs_diff_eq!(b.value, 0.010938, epsilon = 1e-5);
    }

    #[test]
    fn sqrt_trick_degenerates_and_errors() {
        let gt = DomainSpec::g_tilde(2.0, 2).unwrap();
        assert!(sqrt_trick_lower(&gt, 0.01, 0.01).is_err());
        // vanishing as delta -> eps
        let b = sqrt_trick_lower(&gt, 0.01 - 1e-12, 0.01).unwrap();
        assert!(b.value < 1e-9);
        // monotone nondecreasing in eps - delta at fixed eps
        let mut last = -1.0;
        for k in 1..40 {
            let delta = 0.01 * (1.0 - k as f64 / 41.0);
            let v = sqrt_trick_lower(&gt, delta, 0.01).unwrap().value;
            assert!(v >= last);
            last = v;
        }
        // mu too small
        let g04 = DomainSpec::g_tilde(0.4, 2).unwrap();
        assert!(sqrt_trick_lower(&g04, 0.005, 0.01).is_err());
        // eps out of certified range
        assert!(sqrt_trick_lower(&gt, 0.3, 0.7).is_err());
    }

    #[test]
    fn sqrt_trick_kr_values() {
        let gt = DomainSpec::g_tilde(2.0, 2).unwrap();
        let b = sqrt_trick_kr_lower(&gt, 0.01).unwrap();
        let beta = (0.01_f64.powf(0.5) / 2.0).sqrt();
        assert_abs_diff_eq!(b.value, beta / 0.08, epsilon = 1e-12);
        assert_abs_diff_eq!(b.value, 2.795, epsilon = 1e-3);

        // slope of the sweep is 1/(2 mu) - 1 = -3/4 at mu = 2
        let vals: Vec<(f64, f64)> = (0..9)
            .map(|i| {
                let eps = 10f64.powf(-2.0 - 0.5 * i as f64);
                (eps, sqrt_trick_kr_lower(&gt, eps).unwrap().value)
            })
            .collect();
        let fit = crate::fit::fit_exponent(&vals).unwrap();
        assert_abs_diff_eq!(fit.slope, -0.75, epsilon = 1e-9);
    }

    #[test]
    fn sqrt_trick_on_psi_model() {
        let psi = Modulus::power(2.0).unwrap();
        let d = DomainSpec::g_psi(psi.clone(), 2).unwrap();
        let b = sqrt_trick_kr_lower(&d, 0.01).unwrap();
        assert!(b.value > 0.0);
        // beta solves (2 beta^2)^2 = eps here
        let moc = ModulusOfContinuity::new(psi, 2).unwrap();
        let beta = moc.beta(0.01).unwrap();
        assert_abs_diff_eq!((2.0 * beta * beta).powi(2), 0.01, epsilon = 1e-10);
        assert_abs_diff_eq!(b.value, beta / 0.08, epsilon = 1e-10);
        // increasing as eps decreases
        let b2 = sqrt_trick_kr_lower(&d, 0.001).unwrap();
        assert!(b2.value > b.value);
    }

    #[test]
    fn modulus_beta_monotone_and_growth_diverges() {
        let moc =
            ModulusOfContinuity::new(Modulus::power(1.7).unwrap(), 2).unwrap();
        let mut last_beta = 0.0;
        let mut last_growth = f64::INFINITY;
        for i in 0..12 {
            let eps = 10f64.powf(-1.0 - 0.5 * i as f64);
            let beta = moc.beta(eps).unwrap();
            let growth = moc.growth_factor(eps).unwrap();
            if i > 0 {
                assert!(beta < last_beta, "beta strictly increasing in eps");
                assert!(growth > last_growth, "F(eps) grows as eps decreases");
            }
            last_beta = beta;
            last_growth = growth;
        }
        assert!(last_growth > 10.0);
    }

    #[test]
    fn localization_product() {
        assert_abs_diff_eq!(localize_lower(0.3, 0.2).unwrap(), 0.06, epsilon = 1e-16);
        assert_abs_diff_eq!(localize_lower(1.0, 0.37).unwrap(), 0.37, epsilon = 1e-16);
        assert!(localize_lower(0.0, 0.2).is_err());
        assert!(localize_lower(1.5, 0.2).is_err());
    }

    #[test]
    fn localization_composed_with_projection_is_weaker() {
        // on the polydisc: the localized product bound never exceeds the
        // direct projection bound of the full domain
        let pd = DomainSpec::polydisc(2).unwrap();
        let mut rng = crate::rng::seeded(17);
        for _ in 0..50 {
            let r = crate::rng::in_range(&mut rng, 0.3, 0.8);
            let z = pt(&[
                (crate::rng::in_range(&mut rng, -0.4, 0.4) * r, 0.0),
                (crate::rng::in_range(&mut rng, -0.4, 0.4) * r, 0.0),
            ]);
            let w = pt(&[
                (crate::rng::in_range(&mut rng, -0.4, 0.4) * r, 0.0),
                (crate::rng::in_range(&mut rng, -0.4, 0.4) * r, 0.0),
            ]);
            // gap factor: points of V = (r/2) D^2 against the complement of
            // U = r D^2 differ by at least m(r/2, r) in some coordinate
            let gap = mobius(Complex64::new(r / 2.0, 0.0), Complex64::new(r, 0.0)).unwrap();
            let inner = projection_lower(&pd, &z, &w).unwrap().value;
            let product = localize_lower(gap, inner).unwrap();
            let direct = projection_lower(&pd, &z, &w).unwrap().value;
            assert!(product <= direct + 1e-15);
        }
    }

    #[test]
    fn ball_distance_formula() {
        let z = pt(&[(0.0, 0.0), (0.0, 0.0)]);
        let w = pt(&[(0.3, 0.0), (0.1, 0.0)]);
        let m = ball_lempert(&z, &w).unwrap();
        assert_abs_diff_eq!(m, w.norm(), epsilon = 1e-14);
        // symmetric
        assert_abs_diff_eq!(
            ball_lempert(&w, &z).unwrap(),
            m,
            epsilon = 1e-15
        );
        // one dimension reduces to the disc distance
        let a = pt(&[(0.5, 0.0)]);
        let b = pt(&[(0.6, 0.0)]);
        assert_abs_diff_eq!(
            ball_lempert(&a, &b).unwrap(),
            mobius(Complex64::new(0.5, 0.0), Complex64::new(0.6, 0.0)).unwrap(),
            epsilon = 1e-14
        );
    }
}
