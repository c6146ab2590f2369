//! Exact symbolic construction of Lax representations for Benenti-class
//! separable systems, with checks of the resulting identities.

pub mod algebra;
pub mod benenti;
pub mod error;
pub mod lax;
pub mod verify;

pub use algebra::{poisson, CoeffPoly, Gradient, Monomial, Rational, SpectralPoly, VarTable};
pub use benenti::{hamiltonians, BenentiSpec, HamiltonianSet, SeparationPoint, SigmaTerm, Viete};
pub use error::{Error, Result};
pub use lax::{lax_l, lax_u, spectral_det, LaxMatrix, LaxSystem};
pub use verify::{CheckReport, Status};
