//! Integrated Legendre ("pipcir") polynomials Q_n(x) = −∫_x^1 L_{n−1}(t) dt,
//! their weighted orthogonality under 1/(1−x²), Christoffel–Darboux kernels,
//! the constrained least-squares extremal problem, Fourier–Q expansions and
//! orthogonal systems induced by Möbius changes of variable.
//!
//! Everything that can be computed exactly is computed over
//! arbitrary-precision rationals ([`Rational`], [`PolyExact`]). Floating-point
//! code (quadrature, roots, transformed weights) is generic over
//! [`FloatScalar`], with `f64` aliases for the common case.

pub mod approx;
pub mod error;
pub mod kernel;
pub mod legendre;
pub mod moebius;
pub mod pipcir;
pub mod poly;
pub mod quad;
pub mod rational;
pub mod scalar;
pub mod verdict;
pub mod verify;

pub use error::{Error, Result};
pub use legendre::LegendreTable;
pub use pipcir::{Family, QTable};
pub use poly::Poly;
pub use rational::Rational;
pub use scalar::{FloatScalar, Scalar};
pub use verdict::Verdict;

/// Exact polynomial over arbitrary-precision rationals.
pub type PolyExact = Poly<Rational>;
/// Polynomial with `f64` coefficients.
pub type PolyF64 = Poly<f64>;
/// Gauss–Legendre rule in double precision.
pub type QuadratureRuleF64 = quad::QuadratureRule<f64>;
