//! Seeded RNG helpers. Every randomized routine takes its stream from an
//! explicit seed so results are reproducible across runs and thread counts.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn in_range(rng: &mut SeededRng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

/// Uniform point of the open unit disc (rejection-free polar sampling).
pub fn complex_in_disc(rng: &mut SeededRng) -> Complex64 {
    let r = rng.random_range(0.0..1.0_f64).sqrt() * (1.0 - 1e-12);
    let th = rng.random_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(r, th)
}

/// Uniform point of the disc of radius `r`.
pub fn complex_in_disc_of(rng: &mut SeededRng, r: f64) -> Complex64 {
    complex_in_disc(rng) * r
}
