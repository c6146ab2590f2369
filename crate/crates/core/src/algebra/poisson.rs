//! Canonical Poisson bracket over the `(q_i, p_i)` pairs of a [`VarTable`].

use super::poly::CoeffPoly;
use super::spectral::SpectralPoly;
use crate::error::{Error, Result};

/// `{a, b} = sum_i (da/dq_i db/dp_i - da/dp_i db/dq_i)`.
pub fn poisson(a: &CoeffPoly, b: &CoeffPoly) -> Result<CoeffPoly> {
    a.checked_add(b)?;
    let grad = Gradient::new(b)?;
    Ok(grad.bracket(a))
}

/// Partial derivatives of a fixed right-hand argument, reused across many
/// brackets `{ . , h}`.
#[derive(Debug, Clone)]
pub struct Gradient {
    pairs: Vec<(usize, usize)>,
    d_position: Vec<CoeffPoly>,
    d_momentum: Vec<CoeffPoly>,
}

impl Gradient {
    pub fn new(h: &CoeffPoly) -> Result<Self> {
        let pairs = h.vars().pairs().to_vec();
        if pairs.is_empty() {
            return Err(Error::NoPairing);
        }
        let d_position = pairs.iter().map(|&(q, _)| h.diff(q)).collect();
        let d_momentum = pairs.iter().map(|&(_, p)| h.diff(p)).collect();
        Ok(Gradient { pairs, d_position, d_momentum })
    }

    /// `{a, h}`; `a` must share the variable table of `h`.
    pub fn bracket(&self, a: &CoeffPoly) -> CoeffPoly {
        let mut acc = CoeffPoly::zero(a.vars());
        for (k, &(q, p)) in self.pairs.iter().enumerate() {
            if !self.d_momentum[k].is_zero() {
                let da = a.diff(q);
                if !da.is_zero() {
                    acc = &acc + &(&da * &self.d_momentum[k]);
                }
            }
            if !self.d_position[k].is_zero() {
                let da = a.diff(p);
                if !da.is_zero() {
                    acc = &acc - &(&da * &self.d_position[k]);
                }
            }
        }
        acc
    }

    /// `{A(l), h}` with `l` a passive parameter.
    pub fn bracket_spectral(&self, a: &SpectralPoly) -> SpectralPoly {
        a.map_coeffs(|c| self.bracket(c))
    }
}
