//! Hyperbolic geometry of the unit disc: the pseudohyperbolic (Mobius)
//! distance, disc automorphisms and the Poincare distance.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pseudohyperbolic distance m(a, b) = |(a - b) / (1 - a conj(b))| on the
/// open unit disc.
pub fn mobius(a: Complex64, b: Complex64) -> Result<f64> {
    if a.norm() >= 1.0 || b.norm() >= 1.0 {
        return Err(Error::argument(
            "pseudohyperbolic distance needs both arguments in the open disc",
        ));
    }
    let denom = Complex64::new(1.0, 0.0) - a * b.conj();
    Ok(((a - b) / denom).norm())
}

/// Poincare distance tanh^{-1} of the pseudohyperbolic distance.
pub fn poincare(a: Complex64, b: Complex64) -> Result<f64> {
    Ok(mobius(a, b)?.atanh())
}

/// An automorphism of the unit disc, zeta -> (a + e^{i phi} zeta) / (1 + conj(a) e^{i phi} zeta).
///
/// Sends 0 to `a`; `phase` is e^{i phi} with |phase| = 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscAutomorphism {
    pub a: Complex64,
    pub phase: Complex64,
}

impl DiscAutomorphism {
    pub fn new(a: Complex64, phase: Complex64) -> Result<Self> {
        if a.norm() >= 1.0 {
            return Err(Error::argument("automorphism center must be in the disc"));
        }
        if (phase.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::argument("phase must be unimodular"));
        }
        Ok(DiscAutomorphism { a, phase })
    }

    /// The identity map.
    pub fn identity() -> Self {
        DiscAutomorphism {
            a: Complex64::new(0.0, 0.0),
            phase: Complex64::new(1.0, 0.0),
        }
    }

    /// Automorphism with T(0) = from and T(alpha) = to, where
    /// alpha = m(from, to) >= 0 is real.
    pub fn through(from: Complex64, to: Complex64) -> Result<(Self, f64)> {
        let alpha = mobius(from, to)?;
        if alpha == 0.0 {
            return Ok((
                DiscAutomorphism {
                    a: from,
                    phase: Complex64::new(1.0, 0.0),
                },
                0.0,
            ));
        }
        // T(z) = (from + phase z)/(1 + conj(from) phase z); solve T(alpha) = to.
        // phase = w / alpha where w is the preimage of `to` under z -> (from + z)/(1 + conj(from) z).
        let w = (to - from) / (Complex64::new(1.0, 0.0) - from.conj() * to);
        let phase = w / alpha;
        Ok((DiscAutomorphism { a: from, phase }, alpha))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let num = self.a + self.phase * z;
        let den = Complex64::new(1.0, 0.0) + self.a.conj() * self.phase * z;
        num / den
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let den = Complex64::new(1.0, 0.0) + self.a.conj() * self.phase * z;
        self.phase * (Complex64::new(1.0, 0.0) - self.a.norm_sqr()) / (den * den)
    }
}

/// atanh that tolerates arguments that drifted to 1 by rounding.
pub fn atanh_safe(x: f64) -> f64 {
    if x >= 1.0 {
        f64::INFINITY
    } else if x <= 0.0 {
        0.0
    } else {
        x.atanh()
    }
}
