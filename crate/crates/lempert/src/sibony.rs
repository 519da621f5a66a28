//! Sibony-metric lower bounds on the plain model via glued logarithmic
//! candidates: candidate construction with sampled admissibility, and Levi
//! form evaluation in closed form and by finite differences.

use num_complex::Complex64;
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Mutex;

use crate::bounds::{Bound, Direction, Quantity, Witness};
use crate::domains::{CPoint, DomainSpec, Grade};
use crate::error::{Error, Result};

/// Default gluing exponent. The collar comparison forces the radial branch
/// weight up to order eps^{-alpha/mu}, which costs a factor eps^{alpha/(2 mu)}
/// in the final bound; keeping alpha small keeps the measured exponent within
/// the expected window.
pub const DEFAULT_GLUING_EXPONENT: f64 = 0.1;

/// The inner profile f(z1) = eps^{2/mu} |(z1 + eps)/(z1 - eps)|^2.
pub fn f_branch(mu: f64, eps: f64, z1: Complex64) -> f64 {
    let ratio = (z1 + eps) / (z1 - eps);
    eps.powf(2.0 / mu) * ratio.norm_sqr()
}

/// Holomorphic factor g with f = |g|^2.
fn g_branch(mu: f64, eps: f64, z1: Complex64) -> Complex64 {
    eps.powf(1.0 / mu) * (z1 + eps) / (z1 - eps)
}

fn g_branch_derivative(mu: f64, eps: f64, z1: Complex64) -> Complex64 {
    // d/dz (z + e)/(z - e) = -2e/(z - e)^2
    let den = z1 - eps;
    eps.powf(1.0 / mu) * (-2.0 * eps) / (den * den)
}

/// Closed-form mixed second derivative of the inner profile:
/// 4 eps^2 eps^{2/mu} / |z1 - eps|^4; equals eps^{2/mu - 2}/4 at z1 = -eps.
pub fn f_branch_levi(mu: f64, eps: f64, z1: Complex64) -> f64 {
    let d = (z1 - Complex64::new(eps, 0.0)).norm_sqr();
    4.0 * eps * eps * eps.powf(2.0 / mu) / (d * d)
}

/// Scalar fields the Levi evaluator knows closed forms for.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "field", rename_all = "snake_case")]
pub enum ScalarField {
    /// z -> f(z1) as above.
    FBranch { mu: f64, eps: f64 },
    /// z -> ||z'||^2.
    TangentialNormSq,
    Constant { value: f64 },
}

impl ScalarField {
    pub fn eval(&self, z: &CPoint) -> f64 {
        match self {
            ScalarField::FBranch { mu, eps } => f_branch(*mu, *eps, z.coord(0)),
            ScalarField::TangentialNormSq => {
                let t = z.tangential_norm();
                t * t
            }
            ScalarField::Constant { value } => *value,
        }
    }

    fn closed_form_levi(&self, z: &CPoint, x: &[Complex64]) -> Option<f64> {
        match self {
            ScalarField::FBranch { mu, eps } => {
                Some(f_branch_levi(*mu, *eps, z.coord(0)) * x[0].norm_sqr())
            }
            ScalarField::TangentialNormSq => {
                Some(x[1..].iter().map(|c| c.norm_sqr()).sum())
            }
            ScalarField::Constant { .. } => Some(0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeviMethod {
    ClosedForm,
    FiniteDifference,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeviEvaluation {
    pub point: CPoint,
    pub direction: Vec<Complex64>,
    pub value: f64,
    pub method: LeviMethod,
}

/// Levi form of a registered scalar field in direction X, closed form where
/// one is known and central second differences otherwise.
pub fn levi_form(field: &ScalarField, z: &CPoint, x: &[Complex64]) -> Result<LeviEvaluation> {
    crate::domains::check_dim(z.dim(), x.len())?;
    if let Some(v) = field.closed_form_levi(z, x) {
        return Ok(LeviEvaluation {
            point: z.clone(),
            direction: x.to_vec(),
            value: v,
            method: LeviMethod::ClosedForm,
        });
    }
    levi_form_fd(&|p| field.eval(p), z, x, 1.0)
}

/// Central second differences of u restricted to the complex line z + zeta X,
/// Richardson-extrapolated once; step h = 1e-5 * scale.
pub fn levi_form_fd(
    u: &dyn Fn(&CPoint) -> f64,
    z: &CPoint,
    x: &[Complex64],
    scale: f64,
) -> Result<LeviEvaluation> {
    let shift = |zeta: Complex64| -> CPoint {
        CPoint::new(
            z.coords()
                .iter()
                .zip(x)
                .map(|(c, d)| c + d * zeta)
                .collect(),
        )
        .expect("finite shift")
    };
    let quarter_laplacian = |h: f64| -> f64 {
        let plus = u(&shift(Complex64::new(h, 0.0)));
        let minus = u(&shift(Complex64::new(-h, 0.0)));
        let iplus = u(&shift(Complex64::new(0.0, h)));
        let iminus = u(&shift(Complex64::new(0.0, -h)));
        let center = u(z);
        (plus + minus + iplus + iminus - 4.0 * center) / (4.0 * h * h)
    };
    let h = 1e-5 * scale;
    let a1 = quarter_laplacian(h);
    let a2 = quarter_laplacian(0.5 * h);
    let value = (4.0 * a2 - a1) / 3.0;
    if !value.is_finite() {
        return Err(Error::numeric("second differences produced non-finite values"));
    }
    Ok(LeviEvaluation {
        point: z.clone(),
        direction: x.to_vec(),
        value,
        method: LeviMethod::FiniteDifference,
    })
}

/// The glued candidate for the plain model: the two branches, the collar
/// radii, and the constants of the construction. The admitted test function
/// is exp(u) with
///
///   u = max(log(f(z1) + ||z'||^2), log(L ||z'||^{2+alpha})) - L'
///
/// on { ||z'|| <= c1 eps^{1/mu} } and log(L ||z'||^{2+alpha}) - L' outside the
/// inner collar radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateFunction {
    pub mu: f64,
    pub eps: f64,
    pub alpha: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub l: f64,
    pub l_prime: f64,
    pub dim: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Inner,
    Radial,
}

impl CandidateFunction {
    pub fn collar_inner_radius(&self) -> f64 {
        0.5 * self.c1 * self.eps.powf(1.0 / self.mu)
    }

    pub fn collar_outer_radius(&self) -> f64 {
        self.c1 * self.eps.powf(1.0 / self.mu)
    }

    fn b1(&self, z: &CPoint) -> f64 {
        let t = z.tangential_norm();
        (f_branch(self.mu, self.eps, z.coord(0)) + t * t).ln()
    }

    fn b2(&self, z: &CPoint) -> f64 {
        let t = z.tangential_norm();
        (self.l * t.powf(2.0 + self.alpha)).ln()
    }

    /// The glued exponent u(z) <= 0 and which branch is active.
    pub fn eval_u(&self, z: &CPoint) -> (f64, Branch) {
        let t = z.tangential_norm();
        if t <= self.collar_outer_radius() {
            let b1 = self.b1(z);
            let b2 = self.b2(z);
            if b1 >= b2 {
                (b1 - self.l_prime, Branch::Inner)
            } else {
                (b2 - self.l_prime, Branch::Radial)
            }
        } else {
            (self.b2(z) - self.l_prime, Branch::Radial)
        }
    }

    /// The candidate itself, exp(u); vanishes exactly at p_eps.
    pub fn eval(&self, z: &CPoint) -> f64 {
        self.eval_u(z).0.exp()
    }

    /// Distance of the point to the nearest branch seam, in log scale.
    pub fn seam_gap(&self, z: &CPoint) -> f64 {
        (self.b1(z) - self.b2(z)).abs()
    }

    /// Levi form of exp(u) at p_eps in direction X, from the closed forms of
    /// the inner branch: exp(-L') (f''(-eps) |X_1|^2 + ||X'||^2).
    pub fn levi_at_base(&self, x: &[Complex64]) -> f64 {
        let fpp = 0.25 * self.eps.powf(2.0 / self.mu - 2.0);
        let tan: f64 = x[1..].iter().map(|c| c.norm_sqr()).sum();
        (-self.l_prime).exp() * (fpp * x[0].norm_sqr() + tan)
    }

    /// Closed-form Levi form of the active branch of u at z (log of a norm
    /// square of a holomorphic map), as the full Hermitian matrix. Returns
    /// None on the seam.
    pub fn log_branch_hessian(&self, z: &CPoint) -> Option<Vec<Vec<Complex64>>> {
        let n = self.dim;
        let (_, branch) = self.eval_u(z);
        if self.seam_gap(z) < 1e-6 {
            return None;
        }
        match branch {
            Branch::Inner => {
                // u = log(|g(z1)|^2 + sum |z_j|^2) + const
                let g = g_branch(self.mu, self.eps, z.coord(0));
                let gp = g_branch_derivative(self.mu, self.eps, z.coord(0));
                let mut h = vec![g];
                h.extend_from_slice(&z.coords()[1..]);
                let mut d = vec![gp];
                d.extend(std::iter::repeat(Complex64::new(1.0, 0.0)).take(n - 1));
                let f: f64 = h.iter().map(|c| c.norm_sqr()).sum();
                let mut mat = vec![vec![Complex64::new(0.0, 0.0); n]; n];
                for j in 0..n {
                    for k in 0..n {
                        let diag = if j == k {
                            Complex64::new(d[j].norm_sqr(), 0.0)
                        } else {
                            Complex64::new(0.0, 0.0)
                        };
                        let grad = (h[j].conj() * d[j]) * (h[k] * d[k].conj());
                        mat[j][k] = (f * diag - grad) / (f * f);
                    }
                }
                Some(mat)
            }
            Branch::Radial => {
                // u = (2 + alpha)/2 log(sum_{j>=2} |z_j|^2) + const
                let t2: f64 = z.coords()[1..].iter().map(|c| c.norm_sqr()).sum();
                if t2 <= 0.0 {
                    return None;
                }
                let w = (2.0 + self.alpha) / 2.0;
                let mut mat = vec![vec![Complex64::new(0.0, 0.0); n]; n];
                for j in 1..n {
                    for k in 1..n {
                        let diag = if j == k {
                            Complex64::new(t2, 0.0)
                        } else {
                            Complex64::new(0.0, 0.0)
                        };
                        let grad = z.coord(j).conj() * z.coord(k);
                        mat[j][k] = w * (diag - grad) / (t2 * t2);
                    }
                }
                Some(mat)
            }
        }
    }
}

static C1_CACHE: Lazy<Mutex<HashMap<(u64, usize), f64>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// The largest c1 (by bisection on a sampled implication) such that points of
/// the plain model with ||z'|| <= c1 eps^{1/mu} satisfy Re z1 <= eps/2. The
/// implication is scale-free, so the result depends only on (mu, dim).
pub fn collar_constant(mu: f64, dim: usize) -> Result<f64> {
    if !(mu > 1.0) {
        return Err(Error::argument("collar constant needs mu > 1"));
    }
    let key = (mu.to_bits(), dim);
    if let Some(&c) = C1_CACHE.lock().unwrap().get(&key) {
        return Ok(c);
    }
    // In scaled variables w' = z'/eps^{1/mu} the constraint reads
    // (n-1) sup |w_j|^mu <= 1/2 with ||w'|| <= c1.
    let mut rng = crate::rng::seeded(0x51B0);
    let n1 = dim - 1;
    let mut sup_for = |c1: f64| -> f64 {
        let mut sup: f64 = 0.0;
        for _ in 0..4000 {
            // sample tangential vectors of norm <= c1
            let mut v: Vec<f64> = (0..2 * n1)
                .map(|_| crate::rng::in_range(&mut rng, -1.0, 1.0))
                .collect();
            let norm = v.iter().map(|t| t * t).sum::<f64>().sqrt().max(1e-12);
            let r = crate::rng::in_range(&mut rng, 0.0, 1.0).powf(1.0 / (2.0 * n1 as f64)) * c1;
            for t in v.iter_mut() {
                *t *= r / norm;
            }
            let s: f64 = (0..n1)
                .map(|j| {
                    let m2 = v[2 * j] * v[2 * j] + v[2 * j + 1] * v[2 * j + 1];
                    m2.sqrt().powf(mu)
                })
                .sum();
            sup = sup.max(s);
        }
        sup
    };
    let mut lo = 0.0;
    let mut hi = 1.0;
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if sup_for(mid) <= 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // stand a little inside the sampled threshold
    let c1 = 0.95 * lo;
    if !(c1 > 0.0) {
        return Err(Error::construction("collar constant search failed"));
    }
    C1_CACHE.lock().unwrap().insert(key, c1);
    Ok(c1)
}

/// Build the glued candidate and run its sampled admissibility checks
/// (u <= 0 on the model, branch dominance on the collar, nonnegative complex
/// Hessian of u away from the seams).
pub fn sibony_candidate(
    mu: f64,
    eps: f64,
    alpha: f64,
    c1: Option<f64>,
    dim: usize,
) -> Result<CandidateFunction> {
    if !(mu > 1.0 && mu <= 2.0) {
        return Err(Error::argument("candidate construction requires mu > 1"));
    }
    if !(eps > 0.0 && eps <= 0.25) {
        return Err(Error::argument("eps must lie in (0, 1/4]"));
    }
    if !(alpha > 0.0) {
        return Err(Error::argument("gluing exponent must be positive"));
    }
    if dim < 2 {
        return Err(Error::argument("needs dimension >= 2"));
    }
    let c1 = match c1 {
        Some(c) => c,
        None => collar_constant(mu, dim)?,
    };
    // On Re z1 <= eps/2 the Mobius-quotient modulus is at most 3, so
    // f <= 9 eps^{2/mu}; the tangential term adds c1^2 eps^{2/mu}.
    let c2 = 9.0 + c1 * c1;
    let c3 = (0.5 * c1).powf(2.0 + alpha);
    let l = c2 / c3 * eps.powf(-alpha / mu);
    let n1 = (dim - 1) as f64;
    let l_prime = (l * n1.sqrt().powf(2.0 + alpha)).ln();
    let cand = CandidateFunction {
        mu,
        eps,
        alpha,
        c1,
        c2,
        c3,
        l,
        l_prime,
        dim,
    };

    let domain = DomainSpec::g_plain(mu, dim)?;
    let mut rng = crate::rng::seeded(0x51B1);
    let mut checked = 0usize;
    while checked < 10_000 {
        let z = CPoint::new(
            (0..dim)
                .map(|_| crate::rng::complex_in_disc(&mut rng))
                .collect(),
        )?;
        if !domain.contains(&z)? {
            continue;
        }
        checked += 1;
        let (u, _) = cand.eval_u(&z);
        if u > 0.0 {
            return Err(Error::construction(format!(
                "candidate exceeds 0 at {z:?}: u = {u:.3e}"
            )));
        }
        let v = cand.eval(&z);
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::construction("candidate left the unit range"));
        }
    }

    // collar dominance: the radial branch majorizes the inner one there
    let lo = cand.collar_inner_radius();
    let hi = cand.collar_outer_radius();
    let mut checked = 0usize;
    while checked < 2_000 {
        let r = crate::rng::in_range(&mut rng, lo, hi);
        let mut tang: Vec<Complex64> = (0..dim - 1)
            .map(|_| crate::rng::complex_in_disc(&mut rng))
            .collect();
        let norm = tang.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt().max(1e-15);
        for t in tang.iter_mut() {
            *t = *t / norm * r;
        }
        let re1 = crate::rng::in_range(&mut rng, -0.9, 0.0);
        let im1 = crate::rng::in_range(&mut rng, -0.5, 0.5);
        let mut coords = vec![Complex64::new(re1, im1)];
        coords.extend(tang);
        let z = CPoint::new(coords)?;
        if !domain.contains(&z)? {
            continue;
        }
        checked += 1;
        if cand.b2(&z) < cand.b1(&z) {
            return Err(Error::construction(format!(
                "radial branch fails to dominate on the collar at {z:?}"
            )));
        }
    }

    Ok(cand)
}

/// Smallest eigenvalue of a Hermitian matrix given as Vec<Vec<Complex64>>;
/// closed form for n <= 2, Rayleigh sampling otherwise.
pub fn min_eigenvalue(mat: &[Vec<Complex64>]) -> f64 {
    let n = mat.len();
    if n == 1 {
        return mat[0][0].re;
    }
    if n == 2 {
        let a = mat[0][0].re;
        let d = mat[1][1].re;
        let b2 = mat[0][1].norm_sqr();
        let tr = a + d;
        let disc = ((a - d) * (a - d) + 4.0 * b2).sqrt();
        return 0.5 * (tr - disc);
    }
    let mut rng = crate::rng::seeded(0xE16);
    let mut min = f64::INFINITY;
    for _ in 0..200 {
        let v: Vec<Complex64> = (0..n).map(|_| crate::rng::complex_in_disc(&mut rng)).collect();
        let nv: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        if nv < 1e-12 {
            continue;
        }
        let mut q = 0.0;
        for j in 0..n {
            for k in 0..n {
                q += (mat[j][k] * v[j].conj() * v[k]).re;
            }
        }
        min = min.min(q / nv);
    }
    min
}

/// Sampled plurisubharmonicity of the candidate exponent away from seams:
/// the smallest observed Hessian eigenvalue over interior samples.
pub fn candidate_min_hessian_eigenvalue(cand: &CandidateFunction, samples: usize) -> Result<f64> {
    let domain = DomainSpec::g_plain(cand.mu, cand.dim)?;
    let mut rng = crate::rng::seeded(0x51B2);
    let mut min = f64::INFINITY;
    let mut checked = 0usize;
    let mut guard = 0usize;
    while checked < samples {
        guard += 1;
        if guard > 100 * samples {
            break;
        }
        let z = CPoint::new(
            (0..cand.dim)
                .map(|_| crate::rng::complex_in_disc(&mut rng))
                .collect(),
        )?;
        if !domain.contains(&z)? {
            continue;
        }
        // keep clear of the pole of the inner profile and of the seams
        if (z.coord(0) - cand.eps).norm() < 0.05 * cand.eps {
            continue;
        }
        let Some(h) = cand.log_branch_hessian(&z) else {
            continue;
        };
        checked += 1;
        min = min.min(min_eigenvalue(&h));
    }
    Ok(min)
}

/// Lower bound on the Sibony metric S(p_eps; X) of the plain model: the best
/// of the glued candidate and the bare tangential candidate ||z'||^2/(n-1).
/// Graded Numeric because admissibility is sampled, not proved.
pub fn sibony_lower(mu: f64, eps: f64, x: &[Complex64], alpha: Option<f64>) -> Result<Bound> {
    if x.is_empty() || x.iter().all(|c| c.norm() == 0.0) {
        return Err(Error::argument("direction must be nonzero"));
    }
    let dim = x.len();
    let alpha = alpha.unwrap_or(DEFAULT_GLUING_EXPONENT);
    let cand = sibony_candidate(mu, eps, alpha, None, dim)?;
    let glued = cand.levi_at_base(x).sqrt();
    let tangential = {
        let t: f64 = x[1..].iter().map(|c| c.norm_sqr()).sum();
        (t / (dim as f64 - 1.0)).sqrt()
    };
    let (value, description) = if glued >= tangential {
        (
            glued,
            format!(
                "glued candidate: L = {:.6e}, L' = {:.6e}, c1 = {:.6}, alpha = {}",
                cand.l, cand.l_prime, cand.c1, cand.alpha
            ),
        )
    } else {
        (tangential, "tangential candidate ||z'||^2/(n-1)".to_string())
    };
    Bound::new(
        Quantity::Sibony,
        value,
        Direction::Lower,
        Grade::Numeric,
        Witness::Candidate { description },
    )
}
