//! One-sided estimates of invariants: direction, certainty grade and the
//! witness objects that justify them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::discs::{AnalyticDisc, ContainmentCertificate};
use crate::domains::{CPoint, Grade};
use crate::error::{Error, Result};
use crate::hyperbolic::atanh_safe;

/// Which invariant a bound refers to. `m = 1` is the plain Lempert function
/// or the Kobayashi-Royden metric; `m = usize::MAX` stands for the limit
/// over all chain lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "snake_case")]
pub enum Quantity {
    /// ell^(m): chain infimum of pseudohyperbolic leg values.
    Lempert { m: usize },
    /// l^(m) = sum of atanh legs; m = MAX is the Kobayashi distance.
    LempertLog { m: usize },
    /// kappa^(m): decomposition infimum; m = 1 is Kobayashi-Royden.
    KobayashiRoyden { m: usize },
    /// Busemann supplement: inf over m of kappa^(m).
    KobayashiBusemann,
    /// Integrated Kobayashi distance.
    KobayashiDistance,
    /// Sibony metric.
    Sibony,
}

impl Quantity {
    pub fn ell() -> Self {
        Quantity::Lempert { m: 1 }
    }
    pub fn ell_m(m: usize) -> Self {
        Quantity::Lempert { m }
    }
    pub fn kappa() -> Self {
        Quantity::KobayashiRoyden { m: 1 }
    }
    pub fn kappa_m(m: usize) -> Self {
        Quantity::KobayashiRoyden { m }
    }

    pub fn short_name(&self) -> String {
        match self {
            Quantity::Lempert { m: 1 } => "ell".into(),
            Quantity::Lempert { m } if *m == usize::MAX => "ell^(inf)".into(),
            Quantity::Lempert { m } => format!("ell^({m})"),
            Quantity::LempertLog { m: 1 } => "l".into(),
            Quantity::LempertLog { m } if *m == usize::MAX => "k".into(),
            Quantity::LempertLog { m } => format!("l^({m})"),
            Quantity::KobayashiRoyden { m: 1 } => "kappa".into(),
            Quantity::KobayashiRoyden { m } if *m == usize::MAX => "kappa-hat".into(),
            Quantity::KobayashiRoyden { m } => format!("kappa^({m})"),
            Quantity::KobayashiBusemann => "kappa-hat".into(),
            Quantity::KobayashiDistance => "k".into(),
            Quantity::Sibony => "S".into(),
        }
    }

    /// Upper bounds transfer to larger m (chains/decompositions can only
    /// improve), lower bounds to smaller m.
    pub fn upper_bound_applies_to(&self, other: &Quantity) -> bool {
        match (self, other) {
            (Quantity::Lempert { m: a }, Quantity::Lempert { m: b })
            | (Quantity::LempertLog { m: a }, Quantity::LempertLog { m: b })
            | (Quantity::KobayashiRoyden { m: a }, Quantity::KobayashiRoyden { m: b }) => b >= a,
            _ => self == other,
        }
    }

    /// Whether a lower bound on `lower` and an upper bound on `upper` pin a
    /// common quantity (the chain/decomposition index decreases values, so a
    /// lower at m_l meets an upper at m_u whenever m_u <= m_l). The Sibony
    /// metric is dominated by the Kobayashi-Royden metric.
    pub fn sandwich_comparable(lower: &Quantity, upper: &Quantity) -> bool {
        match (lower, upper) {
            (Quantity::Lempert { m: ml }, Quantity::Lempert { m: mu })
            | (Quantity::LempertLog { m: ml }, Quantity::LempertLog { m: mu })
            | (Quantity::KobayashiRoyden { m: ml }, Quantity::KobayashiRoyden { m: mu }) => {
                mu <= ml
            }
            (Quantity::Sibony, Quantity::KobayashiRoyden { m: 1 }) => true,
            _ => lower == upper,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Upper,
    Lower,
}

/// What justifies a bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A disc through the data: phi(0) = z and phi(alpha) = w (two-point)
    /// or alpha phi'(0) = X (infinitesimal).
    Disc {
        disc: AnalyticDisc,
        alpha: Complex64,
        certificate: Option<ContainmentCertificate>,
    },
    /// Chain of per-leg discs.
    Chain { chain: Box<Chain> },
    /// Vector decomposition X = sum X_j with per-piece bounds.
    Decomposition {
        pieces: Vec<(Vec<Complex64>, Bound)>,
    },
    /// Piecewise path with per-node metric bounds.
    Path {
        nodes: Vec<CPoint>,
        /// (parameter, kappa upper bound) samples along the path.
        samples: Vec<(f64, f64)>,
        integral: f64,
    },
    /// Holomorphic contraction onto a coordinate disc.
    Projection { coordinate: usize },
    /// Steps of an exact inequality chain, as human-readable equations with
    /// the evaluated constants.
    Derivation { steps: Vec<String> },
    /// Sibony candidate function.
    Candidate { description: String },
    None,
}

/// A one-sided estimate of an invariant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bound {
    pub quantity: Quantity,
    pub value: f64,
    pub direction: Direction,
    pub grade: Grade,
    /// Weak bounds come from the fallback comparison argument only.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub weak: bool,
    pub witness: Witness,
}

impl Bound {
    pub fn new(quantity: Quantity, value: f64, direction: Direction, grade: Grade, witness: Witness) -> Result<Self> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::numeric("bound values must be finite and nonnegative"));
        }
        if matches!(quantity, Quantity::Lempert { .. }) && value >= 1.0 {
            return Err(Error::numeric(
                "pseudohyperbolic quantities take values in [0, 1)",
            ));
        }
        Ok(Bound {
            quantity,
            value,
            direction,
            grade,
            weak: false,
            witness,
        })
    }

    /// A certified upper bound witnessed by a disc; validates the witness:
    /// the certificate must be analytic and the interpolation contract has
    /// to hold to 1e-10.
    pub fn certified_upper_disc(
        quantity: Quantity,
        value: f64,
        disc: AnalyticDisc,
        alpha: Complex64,
        certificate: ContainmentCertificate,
        contract: &InterpolationContract,
    ) -> Result<Self> {
        if !certificate.is_analytic() {
            return Err(Error::construction(
                "certified upper bounds need an analytic containment certificate",
            ));
        }
        contract.check(&disc, alpha, 1e-10)?;
        Bound::new(
            quantity,
            value,
            Direction::Upper,
            Grade::Certified,
            Witness::Disc {
                disc,
                alpha,
                certificate: Some(certificate),
            },
        )
    }

    pub fn is_certified(&self) -> bool {
        self.grade == Grade::Certified
    }
}

/// The endpoint data a witness disc must reproduce.
#[derive(Debug, Clone)]
pub enum InterpolationContract {
    /// phi(0) = z, phi(alpha) = w.
    TwoPoint { z: CPoint, w: CPoint },
    /// phi(0) = z, alpha phi'(0) = x.
    Infinitesimal { z: CPoint, x: Vec<Complex64> },
}

impl InterpolationContract {
    pub fn check(&self, disc: &AnalyticDisc, alpha: Complex64, tol: f64) -> Result<()> {
        match self {
            InterpolationContract::TwoPoint { z, w } => {
                let p0 = disc.eval(Complex64::new(0.0, 0.0))?;
                let pa = disc.eval(alpha)?;
                if p0.dist(z) > tol || pa.dist(w) > tol {
                    return Err(Error::construction(format!(
                        "witness disc misses its interpolation nodes by ({:.2e}, {:.2e})",
                        p0.dist(z),
                        pa.dist(w)
                    )));
                }
                Ok(())
            }
            InterpolationContract::Infinitesimal { z, x } => {
                let p0 = disc.eval(Complex64::new(0.0, 0.0))?;
                let d = disc.derivative(Complex64::new(0.0, 0.0))?;
                let dev: f64 = d
                    .iter()
                    .zip(x)
                    .map(|(dj, xj)| (alpha * dj - xj).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                if p0.dist(z) > tol || dev > tol * (1.0 + x.iter().map(|c| c.norm()).sum::<f64>()) {
                    return Err(Error::construction(format!(
                        "witness disc misses its derivative contract by {dev:.2e}"
                    )));
                }
                Ok(())
            }
        }
    }
}

/// Intermediate points with per-leg bounds realizing a chain upper bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chain {
    /// y_0 = z, ..., y_m = w.
    pub points: Vec<CPoint>,
    /// Upper bounds on ell(y_j, y_{j+1}).
    pub legs: Vec<Bound>,
    pub aggregate_ell: f64,
    pub aggregate_l: f64,
}

impl Chain {
    pub fn from_legs(points: Vec<CPoint>, legs: Vec<Bound>) -> Result<Self> {
        if points.len() != legs.len() + 1 {
            return Err(Error::argument("a chain of m legs needs m + 1 points"));
        }
        for leg in &legs {
            if leg.direction != Direction::Upper
                || !matches!(leg.quantity, Quantity::Lempert { m: 1 })
            {
                return Err(Error::argument("chain legs must be upper ell bounds"));
            }
        }
        let aggregate_ell = legs.iter().map(|b| b.value).sum();
        let aggregate_l = legs.iter().map(|b| atanh_safe(b.value)).sum();
        Ok(Chain {
            points,
            legs,
            aggregate_ell,
            aggregate_l,
        })
    }

    pub fn m(&self) -> usize {
        self.legs.len()
    }

    /// The whole chain is certified iff all legs are.
    pub fn grade(&self) -> Grade {
        if self.legs.iter().all(|l| l.is_certified()) {
            Grade::Certified
        } else {
            Grade::Numeric
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discs;

    #[test]
    fn lempert_values_stay_below_one() {
        assert!(Bound::new(
            Quantity::ell(),
            1.0,
            Direction::Upper,
            Grade::Numeric,
            Witness::None
        )
        .is_err());
        assert!(Bound::new(
            Quantity::LempertLog { m: 2 },
            3.7,
            Direction::Upper,
            Grade::Numeric,
            Witness::None
        )
        .is_ok());
    }

    #[test]
    fn certified_upper_requires_matching_nodes() {
        let disc = discs::sqrt_disc(0.01).unwrap();
        let domain = crate::domains::DomainSpec::g_plain(2.0, 2).unwrap();
        let cert = discs::verify_containment(
            &disc,
            &domain,
            discs::VerifyMode::Analytic,
            &discs::GridParams::default(),
        )
        .unwrap()
        .certificate()
        .unwrap();
        let z = CPoint::from_re(&[-0.01, 0.0]).unwrap();
        let w = CPoint::from_re(&[-0.005, 0.05]).unwrap();
        let alpha = Complex64::new(0.05, 0.0);
        let contract = InterpolationContract::TwoPoint {
            z: z.clone(),
            w: w.clone(),
        };
        assert!(Bound::certified_upper_disc(
            Quantity::ell(),
            0.05,
            disc.clone(),
            alpha,
            cert.clone(),
            &contract,
        )
        .is_ok());

        let bad = InterpolationContract::TwoPoint {
            z,
            w: CPoint::from_re(&[-0.004, 0.05]).unwrap(),
        };
        assert!(
            Bound::certified_upper_disc(Quantity::ell(), 0.05, disc, alpha, cert, &bad).is_err()
        );
    }

    #[test]
    fn chain_aggregates() {
        let z = CPoint::from_re(&[-0.01, 0.0]).unwrap();
        let q = CPoint::from_re(&[-0.005, 0.05]).unwrap();
        let w = CPoint::from_re(&[-0.005, 0.0]).unwrap();
        let leg = |v: f64| {
            Bound::new(
                Quantity::ell(),
                v,
                Direction::Upper,
                Grade::Numeric,
                Witness::None,
            )
            .unwrap()
        };
        let chain = Chain::from_legs(vec![z, q, w], vec![leg(0.05), leg(0.05)]).unwrap();
        assert!((chain.aggregate_ell - 0.1).abs() < 1e-15);
        assert!((chain.aggregate_l - 2.0 * 0.05_f64.atanh()).abs() < 1e-15);
        // per-leg atanh dominates the leg itself, and superadditivity of
        // atanh caps the sum by the atanh of the total
        assert!(chain.aggregate_l >= chain.aggregate_ell);
        assert!(chain.aggregate_l <= chain.aggregate_ell.atanh() + 1e-12);
    }
}
