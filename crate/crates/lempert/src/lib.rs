//! Certified and numerical bounds for holomorphic invariants on explicit
//! model domains in C^n: the Lempert function and its chain relaxations, the
//! Kobayashi-Royden and Kobayashi-Busemann metrics, the Kobayashi distance,
//! and the Sibony metric.
//!
//! The crate is organized around three layers:
//!
//! * [`domains`] and [`discs`]: the model domains with explicit defining
//!   functions, and analytic discs (closed-form families, polynomials,
//!   Mobius composites) with containment verification;
//! * [`upper`] and [`lower`]: upper-bound engines built from verified discs,
//!   chains, decompositions and paths, and certified lower bounds from
//!   coordinate projections and square-root substitution;
//! * [`sibony`], [`fit`] and [`lab`]: the Sibony-metric candidate machinery,
//!   log-log exponent fits, and the experiment drivers behind the CLI.

pub mod bounds;
pub mod discs;
pub mod domains;
pub mod error;
pub mod fit;
pub mod hyperbolic;
pub mod lab;
pub mod lower;
pub mod optim;
pub mod rng;
pub mod sibony;
pub mod upper;

pub use bounds::{Bound, Chain, Direction, Quantity, Witness};
pub use domains::{boundary_data, normalize_quadratic, BoundaryData, CPoint, DomainSpec, Grade};
pub use error::{Error, Result};
