//! Exact arithmetic: rationals, localized multivariate polynomials, Laurent
//! polynomials in the spectral parameter, and the canonical Poisson bracket.

mod poisson;
mod poly;
mod rational;
mod spectral;
mod vars;

pub use poisson::{poisson, Gradient};
pub use poly::{CoeffPoly, Exponents, Monomial, TermRecord};
pub use rational::Rational;
pub use spectral::{SpectralPoly, SpectralRecord};
pub use vars::VarTable;
