//! Exact tropical differential algebra.
//!
//! Algebraic ODEs over truncated power series `K[[t]]`, where `K` is ℚ with a
//! trivial or `p`-adic valuation or the Eisenstein extension ℚ(ζ), ζ^(p−1) = −p,
//! are tropicalized with respect to the rank-2 valuation
//! `a₀tⁿ⁰ + ⋯ ↦ (n₀, v(a₀))`. Tropical power series carry the differential
//! `d_v(tⁿ) = v(n)tⁿ⁻¹`. The crate checks tropical solutions, computes initial
//! forms over the residue field and tropical radii of convergence, and ships a
//! harness comparing all of this against exact classical solutions.
//!
//! Everything on the exact path uses [`Rational`] (arbitrary precision). The
//! semiring layer in [`tropical`] is generic over the scalar type; the aliases
//! below fix it to rationals.

pub mod diffpoly;
pub mod error;
pub mod field;
pub mod gen;
pub mod initial;
pub mod io;
pub mod parser;
pub mod radius;
pub mod series;
pub mod tropical;
pub mod valuation;
pub mod verify;

pub use error::{Error, Result};

/// Exact rationals.
pub type Rational = num_rational::BigRational;

/// Element of 𝕋 = ℚ ∪ {∞}.
pub type TropNum = tropical::Tropical<Rational>;
/// Element of 𝕋₂ = ℚ² ∪ {∞}.
pub type Trop2 = tropical::TropicalPair<Rational>;

/// Floating-point instantiations, for display-time computations only.
pub type TropNumF64 = tropical::Tropical<f64>;
pub type Trop2F64 = tropical::TropicalPair<f64>;

pub use diffpoly::{DiffPoly, EvalReport, ExponentMatrix, KPoly, TropDiffPoly, TropPoly1};
pub use field::{FieldBackend, FieldElem, ResidueElem, ResidueField};
pub use initial::ResiduePoly;
pub use series::{BoolSeries, PowerSeries, TropSeries};
pub use tropical::{Semiring, Tropical, TropicalPair};
pub use valuation::NatValuation;

/// `n/d` as a [`Rational`].
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// The integer `n` as a [`Rational`].
pub fn qi(n: i64) -> Rational {
    Rational::from_integer(n.into())
}
