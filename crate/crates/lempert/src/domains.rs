//! Points of C^n and the model domains: membership with signed margin,
//! boundary gap / nearest point / inner normal, normal-line points, and the
//! quadratic normalization map used to reduce a pseudoconcave boundary point
//! to the standard quadric model.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of C^n. Dimension is fixed at construction and all components are
/// finite; constructors reject NaN and infinities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CPoint {
    coords: Vec<Complex64>,
}

impl CPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::argument("a point needs dimension n >= 1"));
        }
        if coords.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::argument("point components must be finite"));
        }
        Ok(CPoint { coords })
    }

    /// Point with the given real coordinates on the axes.
    pub fn from_re(res: &[f64]) -> Result<Self> {
        Self::new(res.iter().map(|&r| Complex64::new(r, 0.0)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        CPoint {
            coords: vec![Complex64::new(0.0, 0.0); dim.max(1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn coord(&self, j: usize) -> Complex64 {
        self.coords[j]
    }

    /// Euclidean norm of the coordinate vector.
    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Norm of the tangential part (z_2, ..., z_n).
    pub fn tangential_norm(&self) -> f64 {
        self.coords[1..]
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn dist(&self, other: &CPoint) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn sub(&self, other: &CPoint) -> Result<CPoint> {
        check_dim(self.dim(), other.dim())?;
        CPoint::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn add(&self, other: &CPoint) -> Result<CPoint> {
        check_dim(self.dim(), other.dim())?;
        CPoint::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> CPoint {
        CPoint {
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::argument(format!(
            "dimension mismatch: expected {expected}, got {got}"
        )));
    }
    Ok(())
}

/// A modulus of continuity x -> psi(x) with psi(x) = x * psi1(x), psi1
/// increasing and psi1(0+) = 0. Used as the boundary graph bound of the
/// `GPsi` model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Modulus {
    /// psi(x) = coeff * x^p with p > 1 (so psi1(x) = coeff * x^{p-1}).
    Power { p: f64, coeff: f64 },
}

impl Modulus {
    pub fn power(p: f64) -> Result<Self> {
        Self::power_scaled(p, 1.0)
    }

    pub fn power_scaled(p: f64, coeff: f64) -> Result<Self> {
        if !(p > 1.0) || !p.is_finite() {
            return Err(Error::argument("modulus exponent must satisfy p > 1"));
        }
        if !(coeff > 0.0) || !coeff.is_finite() {
            return Err(Error::argument("modulus coefficient must be positive"));
        }
        Ok(Modulus::Power { p, coeff })
    }

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Modulus::Power { p, coeff } => coeff * x.powf(p),
        }
    }

    /// The factor psi1 in psi(x) = x * psi1(x).
    pub fn psi1(&self, x: f64) -> f64 {
        match *self {
            Modulus::Power { p, coeff } => coeff * x.powf(p - 1.0),
        }
    }
}

/// Data of the quadratic normalization near a strictly pseudoconcave boundary
/// point: the degree-2 polynomial self-map of C^2
///
///   (z1, z2) -> (z1 + alpha1 z1^2 - alpha2 z2^2, z2)
///
/// together with the constants of the estimate chain and a validity radius on
/// which injectivity and the model inclusion were verified.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadNormalization {
    pub alpha1: f64,
    pub alpha2: Complex64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub radius: f64,
}

impl QuadNormalization {
    /// The polynomial map itself.
    pub fn apply(&self, z1: Complex64, z2: Complex64) -> (Complex64, Complex64) {
        (z1 + self.alpha1 * z1 * z1 - self.alpha2 * z2 * z2, z2)
    }
}

/// Coefficients of a real-valued quadratic form
/// q(z1, z2) = q1(z1) + q2(z1, z2) + Re(alpha2 z2^2) + h22 |z2|^2,
/// where q1(z1) = a (Re z1)^2 + b (Re z1)(Im z1) + c (Im z1)^2 and q2 is only
/// known through the bilinear bound |q2| <= c2_bound |z1||z2|.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadFormData {
    pub q1: [f64; 3],
    pub c2_bound: f64,
    pub alpha2: Complex64,
    /// Coefficient of |z2|^2; the normalization requires exactly -1.
    pub h22: f64,
}

impl QuadFormData {
    /// Worst-case value of the form over all q2 compatible with the bound.
    pub fn worst_case(&self, z1: Complex64, z2: Complex64) -> f64 {
        let [a, b, c] = self.q1;
        let q1 = a * z1.re * z1.re + b * z1.re * z1.im + c * z1.im * z1.im;
        q1 + self.c2_bound * z1.norm() * z2.norm()
            + (self.alpha2 * z2 * z2).re
            + self.h22 * z2.norm_sqr()
    }

    /// sup of q1 on the unit circle of C (largest eigenvalue of the real form).
    pub fn c1(&self) -> f64 {
        let [a, b, c] = self.q1;
        0.5 * ((a + c) + ((a - c) * (a - c) + b * b).sqrt())
    }
}

/// Construct the quadratic normalization for the given form data.
///
/// alpha1 is set to C1 + C2^2/2 + 1 and the inclusion
/// { Re w1 < |w2|^2 / 4 } given by the map is verified by sampling on shrinking
/// radii; the largest radius passing both the inclusion and the pairwise
/// injectivity check is kept.
pub fn normalize_quadratic(q: &QuadFormData) -> Result<QuadNormalization> {
    if (q.h22 + 1.0).abs() > 1e-12 {
        return Err(Error::argument(
            "quadratic form must have coefficient -1 on |z2|^2",
        ));
    }
    if q.c2_bound < 0.0 {
        return Err(Error::argument("bilinear bound must be nonnegative"));
    }
    let c1 = q.c1();
    let alpha1 = c1 + 0.5 * q.c2_bound * q.c2_bound + 1.0;
    let c3 = c1 + 0.5 * q.c2_bound * q.c2_bound + alpha1 + 1.0;
    let norm = QuadNormalization {
        alpha1,
        alpha2: q.alpha2,
        c1,
        c2: q.c2_bound,
        c3,
        radius: 0.0,
    };

    // Injectivity of w1 + alpha1 w1^2 - alpha2 w2^2 in the first slot needs
    // |w1 + w1'| < 1/alpha1; stay a factor 2 inside.
    let inj_radius = 0.25 / alpha1.max(1.0);

    let mut radius = 0.5_f64.min(inj_radius);
    for _ in 0..16 {
        if verify_quad_inclusion(&norm, q, radius, 100_000)
            && verify_quad_injectivity(&norm, radius, 2000)
        {
            return Ok(QuadNormalization { radius, ..norm });
        }
        radius *= 0.5;
    }
    Err(Error::construction(
        "no radius passed the sampled model inclusion for the quadratic map",
    ))
}

/// Sampled check: every w in rD^2 with Re w1 < |w2|^2/4 maps to a point where
/// Re z1 + q(z) < 0 (with q taken at its worst case).
fn verify_quad_inclusion(norm: &QuadNormalization, q: &QuadFormData, r: f64, n: usize) -> bool {
    let mut rng = crate::rng::seeded(0x51AD);
    let mut tested = 0usize;
    while tested < n {
        let w1 = crate::rng::complex_in_disc(&mut rng) * r;
        let w2 = crate::rng::complex_in_disc(&mut rng) * r;
        if w1.re >= 0.25 * w2.norm_sqr() {
            continue;
        }
        tested += 1;
        let (z1, z2) = norm.apply(w1, w2);
        if z1.re + q.worst_case(z1, z2) >= 0.0 {
            return false;
        }
    }
    true
}

/// Sampled pairwise-separation check of injectivity on rD^2.
fn verify_quad_injectivity(norm: &QuadNormalization, r: f64, n: usize) -> bool {
    let mut rng = crate::rng::seeded(0x1217);
    let pts: Vec<(Complex64, Complex64)> = (0..n)
        .map(|_| {
            (
                crate::rng::complex_in_disc(&mut rng) * r,
                crate::rng::complex_in_disc(&mut rng) * r,
            )
        })
        .collect();
    for (i, &(u1, u2)) in pts.iter().enumerate() {
        let (a1, a2) = norm.apply(u1, u2);
        for &(v1, v2) in &pts[i + 1..] {
            let (b1, b2) = norm.apply(v1, v2);
            let din = ((u1 - v1).norm_sqr() + (u2 - v2).norm_sqr()).sqrt();
            let dout = ((a1 - b1).norm_sqr() + (a2 - b2).norm_sqr()).sqrt();
            if dout < 0.25 * din {
                return false;
            }
        }
    }
    true
}

/// A model domain of C^n with an explicit defining function rho, D = {rho < 0}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum DomainSpec {
    PolyDisc {
        dim: usize,
    },
    Ball {
        dim: usize,
    },
    /// G_mu = { z in D^n : Re z1 < sum_{j>=2} |z_j|^mu }, 0 < mu <= 2.
    GPlain {
        mu: f64,
        dim: usize,
    },
    /// The tilde variant adds |Im z1|^mu to the right-hand side.
    GTilde {
        mu: f64,
        dim: usize,
    },
    /// G^-_mu = { z in D^2 : Re z1 < -|Im z1| + |z2|^mu }, mu >= 1.
    GMinus {
        mu: f64,
    },
    /// { z in D^n : Re z1 < psi(|Im z1| + ||z'||) } for a modulus psi.
    GPsi {
        psi: Modulus,
        dim: usize,
    },
    /// A base domain minus a finite set of exact points. Demonstration-grade:
    /// sampling cannot certify avoidance of a measure-zero set, so bounds on
    /// punctured domains are never graded Certified.
    Punctured {
        base: Box<DomainSpec>,
        excluded: Vec<CPoint>,
    },
    /// The normalized quadric model { w in rD^2 : Re w1 < |w2|^2 / 4 }
    /// produced by a quadratic normalization.
    QuadImage {
        quad: QuadNormalization,
        radius: f64,
    },
}

impl DomainSpec {
    pub fn polydisc(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::argument("dimension must be >= 1"));
        }
        Ok(DomainSpec::PolyDisc { dim })
    }

    pub fn ball(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::argument("dimension must be >= 1"));
        }
        Ok(DomainSpec::Ball { dim })
    }

    pub fn g_plain(mu: f64, dim: usize) -> Result<Self> {
        check_g_mu(mu)?;
        if dim < 2 {
            return Err(Error::argument("G_mu needs dimension >= 2"));
        }
        Ok(DomainSpec::GPlain { mu, dim })
    }

    pub fn g_tilde(mu: f64, dim: usize) -> Result<Self> {
        check_g_mu(mu)?;
        if dim < 2 {
            return Err(Error::argument("G~_mu needs dimension >= 2"));
        }
        Ok(DomainSpec::GTilde { mu, dim })
    }

    pub fn g_minus(mu: f64) -> Result<Self> {
        if !(mu >= 1.0) || !mu.is_finite() {
            return Err(Error::argument("G^-_mu requires mu >= 1"));
        }
        Ok(DomainSpec::GMinus { mu })
    }

    pub fn g_psi(psi: Modulus, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::argument("GPsi needs dimension >= 2"));
        }
        Ok(DomainSpec::GPsi { psi, dim })
    }

    pub fn punctured(base: DomainSpec, excluded: Vec<CPoint>) -> Result<Self> {
        for p in &excluded {
            check_dim(base.dim(), p.dim())?;
        }
        Ok(DomainSpec::Punctured {
            base: Box::new(base),
            excluded,
        })
    }

    pub fn quad_image(quad: QuadNormalization, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::argument("radius must be positive"));
        }
        Ok(DomainSpec::QuadImage { quad, radius })
    }

    pub fn dim(&self) -> usize {
        match self {
            DomainSpec::PolyDisc { dim }
            | DomainSpec::Ball { dim }
            | DomainSpec::GPlain { dim, .. }
            | DomainSpec::GTilde { dim, .. }
            | DomainSpec::GPsi { dim, .. } => *dim,
            DomainSpec::GMinus { .. } | DomainSpec::QuadImage { .. } => 2,
            DomainSpec::Punctured { base, .. } => base.dim(),
        }
    }

    pub fn mu(&self) -> Option<f64> {
        match self {
            DomainSpec::GPlain { mu, .. }
            | DomainSpec::GTilde { mu, .. }
            | DomainSpec::GMinus { mu } => Some(*mu),
            _ => None,
        }
    }

    /// Whether bounds on this domain may be graded Certified at all.
    pub fn certifiable(&self) -> bool {
        !matches!(self, DomainSpec::Punctured { .. })
    }

    /// Signed margin of the defining inequalities: the maximum of (lhs - rhs)
    /// over all of them, negative exactly on the inside.
    pub fn margin(&self, z: &CPoint) -> Result<f64> {
        check_dim(self.dim(), z.dim())?;
        let c = z.coords();
        let poly_margin = || {
            c.iter()
                .map(|w| w.norm() - 1.0)
                .fold(f64::NEG_INFINITY, f64::max)
        };
        Ok(match self {
            DomainSpec::PolyDisc { .. } => poly_margin(),
            DomainSpec::Ball { .. } => z.norm() - 1.0,
            DomainSpec::GPlain { mu, .. } => {
                let rhs: f64 = c[1..].iter().map(|w| w.norm().powf(*mu)).sum();
                poly_margin().max(c[0].re - rhs)
            }
            DomainSpec::GTilde { mu, .. } => {
                let rhs: f64 = c[0].im.abs().powf(*mu)
                    + c[1..].iter().map(|w| w.norm().powf(*mu)).sum::<f64>();
                poly_margin().max(c[0].re - rhs)
            }
            DomainSpec::GMinus { mu } => {
                let rhs = c[1].norm().powf(*mu) - c[0].im.abs();
                poly_margin().max(c[0].re - rhs)
            }
            DomainSpec::GPsi { psi, .. } => {
                let arg = c[0].im.abs() + z.tangential_norm();
                poly_margin().max(c[0].re - psi.eval(arg))
            }
            DomainSpec::Punctured { base, excluded } => {
                let base_margin = base.margin(z)?;
                let nearest = excluded
                    .iter()
                    .map(|e| z.dist(e))
                    .fold(f64::INFINITY, f64::min);
                base_margin.max(-nearest)
            }
            DomainSpec::QuadImage { radius, .. } => {
                let m0 = c[0].re - 0.25 * c[1].norm_sqr();
                m0.max(c[0].norm() - radius).max(c[1].norm() - radius)
            }
        })
    }

    /// Membership test; true iff all defining inequalities are strict.
    pub fn contains(&self, z: &CPoint) -> Result<bool> {
        Ok(self.margin(z)? < 0.0)
    }

    /// The point p + t n_p on the inner normal line at the distinguished
    /// boundary point (the origin for the G-type models).
    pub fn normal_point(&self, t: f64) -> Result<CPoint> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::argument("normal parameter must lie in (0, 1)"));
        }
        match self {
            DomainSpec::GPlain { dim, .. }
            | DomainSpec::GTilde { dim, .. }
            | DomainSpec::GPsi { dim, .. } => {
                let mut coords = vec![Complex64::new(0.0, 0.0); *dim];
                coords[0] = Complex64::new(-t, 0.0);
                CPoint::new(coords)
            }
            DomainSpec::GMinus { .. } | DomainSpec::QuadImage { .. } => {
                CPoint::new(vec![Complex64::new(-t, 0.0), Complex64::new(0.0, 0.0)])
            }
            _ => Err(Error::capability(
                "normal_point needs a model domain with a distinguished boundary point",
            )),
        }
    }
}

fn check_g_mu(mu: f64) -> Result<()> {
    if !(mu > 0.0 && mu <= 2.0) || !mu.is_finite() {
        return Err(Error::argument("G-model exponent requires 0 < mu <= 2"));
    }
    Ok(())
}

/// Certainty grade of a computed quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Grade {
    /// Follows an exact inequality chain with explicit constants.
    Certified,
    /// Produced by optimization and/or sampled verification.
    Numeric,
}

/// Boundary gap data at an interior point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundaryData {
    /// Euclidean distance to the complement.
    pub gap: f64,
    /// A nearest boundary point.
    pub nearest: CPoint,
    /// Unit inner normal at `nearest`.
    pub inner_normal: CPoint,
    pub grade: Grade,
}

/// Boundary gap, nearest boundary point and inner normal.
///
/// Closed forms for the polydisc and the ball; for the tilde model with
/// mu >= 1 a multi-start descent over the boundary graph (the complement is
/// convex near the origin, so the minimizer is unique there; away from that
/// neighborhood the best found point is returned with a Numeric grade).
pub fn boundary_data(domain: &DomainSpec, z: &CPoint) -> Result<BoundaryData> {
    check_dim(domain.dim(), z.dim())?;
    if !domain.contains(z)? {
        return Err(Error::argument("point must lie inside the domain"));
    }
    match domain {
        DomainSpec::PolyDisc { dim } => {
            let (j, worst) = z
                .coords()
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
                .expect("nonempty");
            let gap = 1.0 - worst.norm();
            let dir = if worst.norm() > 0.0 {
                worst / worst.norm()
            } else {
                Complex64::new(1.0, 0.0)
            };
            let mut nearest = z.coords().to_vec();
            nearest[j] = dir;
            let mut normal = vec![Complex64::new(0.0, 0.0); *dim];
            normal[j] = -dir;
            Ok(BoundaryData {
                gap,
                nearest: CPoint::new(nearest)?,
                inner_normal: CPoint::new(normal)?,
                grade: Grade::Certified,
            })
        }
        DomainSpec::Ball { dim } => {
            let r = z.norm();
            let dir = if r > 0.0 {
                z.scale(Complex64::new(1.0 / r, 0.0))
            } else {
                let mut coords = vec![Complex64::new(0.0, 0.0); *dim];
                coords[0] = Complex64::new(1.0, 0.0);
                CPoint::new(coords)?
            };
            Ok(BoundaryData {
                gap: 1.0 - r,
                nearest: dir.clone(),
                inner_normal: dir.scale(Complex64::new(-1.0, 0.0)),
                grade: Grade::Certified,
            })
        }
        DomainSpec::GTilde { mu, dim } => {
            if *mu < 1.0 {
                return Err(Error::capability(
                    "nearest-point query on the tilde model needs mu >= 1",
                ));
            }
            gtilde_boundary_data(*mu, *dim, z)
        }
        _ => Err(Error::capability(
            "boundary_data supports the polydisc, the ball and the tilde model",
        )),
    }
}

/// Distance to the graph { Re w1 = |Im w1|^mu + sum |w_j|^mu } by multi-start
/// coordinate descent over the graph parameters, compared against the
/// polydisc faces.
fn gtilde_boundary_data(mu: f64, dim: usize, z: &CPoint) -> Result<BoundaryData> {
    let zc = z.coords();

    // Graph parameters: v = Im w1 and w' in C^{n-1}.
    let graph_point = |params: &[f64]| -> Vec<Complex64> {
        let v = params[0];
        let mut w = vec![Complex64::new(0.0, 0.0); dim];
        let mut rhs = v.abs().powf(mu);
        for j in 1..dim {
            let wj = Complex64::new(params[2 * j - 1], params[2 * j]);
            rhs += wj.norm().powf(mu);
            w[j] = wj;
        }
        w[0] = Complex64::new(rhs, v);
        w
    };
    let objective = |params: &[f64]| -> f64 {
        let w = graph_point(params);
        w.iter()
            .zip(zc)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
    };

    let nparams = 2 * dim - 1;
    let mut starts: Vec<Vec<f64>> = Vec::new();
    // Start at the projection guess (keep tangential part, origin, and a pair
    // of sign perturbations of Im z1).
    let mut s0 = vec![0.0; nparams];
    s0[0] = zc[0].im;
    for j in 1..dim {
        s0[2 * j - 1] = zc[j].re;
        s0[2 * j] = zc[j].im;
    }
    starts.push(s0.clone());
    starts.push(vec![0.0; nparams]);
    let mut s2 = s0.clone();
    s2[0] = -zc[0].im - 0.1;
    starts.push(s2);
    let mut s3 = s0;
    s3[0] += 0.1;
    starts.push(s3);

    let mut best: Option<(f64, Vec<f64>)> = None;
    for s in &starts {
        let scale = vec![0.25 * (z.norm() + 1e-3); nparams];
        let r = crate::optim::nelder_mead(
            &objective,
            s,
            &scale,
            &crate::optim::NmOptions {
                max_iters: 400,
                tol: 1e-24,
            },
        );
        if best.as_ref().map_or(true, |(f, _)| r.fmin < *f) {
            best = Some((r.fmin, r.xmin));
        }
    }
    let (d2, params) = best.expect("at least one start");
    let mut gap = d2.sqrt();
    let w = graph_point(&params);
    let mut nearest = CPoint::new(w.clone())?;

    // Inner normal from the gradient of rho = Re w1 - |Im w1|^mu - sum |w_j|^mu.
    let v = params[0];
    let mut normal = vec![Complex64::new(0.0, 0.0); dim];
    normal[0] = Complex64::new(1.0, -mu * v.abs().powf(mu - 1.0) * v.signum());
    for j in 1..dim {
        let wj = w[j];
        let r = wj.norm();
        if r > 0.0 {
            normal[j] = -mu * r.powf(mu - 2.0) * wj;
        }
    }
    let nn = normal.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let mut inner = CPoint::new(normal)?.scale(Complex64::new(-1.0 / nn, 0.0));

    // Polydisc faces can be closer for points deep inside.
    let max_abs = zc.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if 1.0 - max_abs < gap {
        let pd = boundary_data(&DomainSpec::polydisc(dim)?, z)?;
        gap = pd.gap;
        nearest = pd.nearest;
        inner = pd.inner_normal;
    }

    // Uniqueness of the nearest point is only guaranteed near the origin.
    let grade = if z.norm() < 0.25 {
        Grade::Certified
    } else {
        Grade::Numeric
    };
    Ok(BoundaryData {
        gap,
        nearest,
        inner_normal: inner,
        grade,
    })
}
