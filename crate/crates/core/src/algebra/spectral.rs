//! Laurent polynomials in the spectral parameter `l` with [`CoeffPoly`]
//! coefficients, and division by a monic polynomial in `l`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::poly::{CoeffPoly, TermRecord};
use super::rational::Rational;
use super::vars::{same_table, VarTable};
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct SpectralPoly {
    vars: Arc<VarTable>,
    coeffs: BTreeMap<i32, CoeffPoly>,
}

impl SpectralPoly {
    pub fn zero(vars: &Arc<VarTable>) -> Self {
        SpectralPoly { vars: Arc::clone(vars), coeffs: BTreeMap::new() }
    }

    /// `c * l^exp`.
    pub fn term(exp: i32, c: CoeffPoly) -> Self {
        let mut s = SpectralPoly::zero(c.vars());
        if !c.is_zero() {
            s.coeffs.insert(exp, c);
        }
        s
    }

    /// `l^exp` with unit coefficient.
    pub fn lambda_pow(vars: &Arc<VarTable>, exp: i32) -> Self {
        Self::term(exp, CoeffPoly::one(vars))
    }

    pub fn constant(c: CoeffPoly) -> Self {
        Self::term(0, c)
    }

    /// `sum_k c_k l^k` with rational `c_k`.
    pub fn from_rational_terms(vars: &Arc<VarTable>, terms: impl IntoIterator<Item = (i32, Rational)>) -> Self {
        let mut s = SpectralPoly::zero(vars);
        for (e, c) in terms {
            s.add_coeff(e, &CoeffPoly::constant(vars, c));
        }
        s
    }

    pub fn from_coeffs(vars: &Arc<VarTable>, coeffs: impl IntoIterator<Item = (i32, CoeffPoly)>) -> Result<Self> {
        let mut s = SpectralPoly::zero(vars);
        for (e, c) in coeffs {
            if !same_table(vars, c.vars()) {
                return Err(Error::VarTableMismatch);
            }
            s.add_coeff(e, &c);
        }
        Ok(s)
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero coefficients in ascending order of `l`-exponent.
    pub fn coeffs(&self) -> impl DoubleEndedIterator<Item = (i32, &CoeffPoly)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    pub fn coeff(&self, exp: i32) -> CoeffPoly {
        self.coeffs.get(&exp).cloned().unwrap_or_else(|| CoeffPoly::zero(&self.vars))
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    fn add_coeff(&mut self, exp: i32, c: &CoeffPoly) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(exp) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn ensure_same(&self, other: &SpectralPoly) -> Result<()> {
        if same_table(&self.vars, &other.vars) {
            Ok(())
        } else {
            Err(Error::VarTableMismatch)
        }
    }

    pub fn checked_add(&self, other: &SpectralPoly) -> Result<SpectralPoly> {
        self.ensure_same(other)?;
        let mut acc = self.clone();
        for (&e, c) in &other.coeffs {
            acc.add_coeff(e, c);
        }
        Ok(acc)
    }

    pub fn checked_sub(&self, other: &SpectralPoly) -> Result<SpectralPoly> {
        self.ensure_same(other)?;
        let mut acc = self.clone();
        for (&e, c) in &other.coeffs {
            acc.add_coeff(e, &-c);
        }
        Ok(acc)
    }

    pub fn checked_mul(&self, other: &SpectralPoly) -> Result<SpectralPoly> {
        self.ensure_same(other)?;
        let mut acc = SpectralPoly::zero(&self.vars);
        for (&ea, ca) in &self.coeffs {
            for (&eb, cb) in &other.coeffs {
                acc.add_coeff(ea + eb, &(ca * cb));
            }
        }
        Ok(acc)
    }

    /// Multiplies every coefficient by a `l`-free polynomial.
    pub fn scale_by(&self, c: &CoeffPoly) -> SpectralPoly {
        let mut out = SpectralPoly::zero(&self.vars);
        for (&e, a) in &self.coeffs {
            out.add_coeff(e, &(a * c));
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> SpectralPoly {
        self.map_coeffs(|a| a.scale(c))
    }

    /// Multiplication by `l^k`.
    pub fn shift(&self, k: i32) -> SpectralPoly {
        SpectralPoly {
            vars: Arc::clone(&self.vars),
            coeffs: self.coeffs.iter().map(|(&e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Applies `f` to every coefficient, pruning those that vanish.
    pub fn map_coeffs(&self, mut f: impl FnMut(&CoeffPoly) -> CoeffPoly) -> SpectralPoly {
        let mut out = SpectralPoly::zero(&self.vars);
        for (&e, c) in &self.coeffs {
            out.add_coeff(e, &f(c));
        }
        out
    }

    /// Keeps the terms whose exponent satisfies `keep`.
    pub fn filter_exps(&self, keep: impl Fn(i32) -> bool) -> SpectralPoly {
        SpectralPoly {
            vars: Arc::clone(&self.vars),
            coeffs: self.coeffs.iter().filter(|(&e, _)| keep(e)).map(|(&e, c)| (e, c.clone())).collect(),
        }
    }

    /// Coefficient-wise partial derivative in a phase-space variable.
    pub fn diff(&self, index: usize) -> SpectralPoly {
        self.map_coeffs(|c| c.diff(index))
    }

    pub fn eval(&self, point: &[f64], lambda: f64) -> Result<f64> {
        let mut sum = 0.0;
        for (&e, c) in &self.coeffs {
            if e < 0 && lambda == 0.0 {
                return Err(Error::ZeroLambda);
            }
            sum += c.eval(point)? * lambda.powi(e);
        }
        Ok(sum)
    }

    /// If this is `l^n + a_1 l^(n-1) + ... + a_n`, returns `n`.
    pub fn monic_degree(&self) -> Option<usize> {
        let max = self.max_exp()?;
        let lead = self.coeffs.get(&max)?;
        let monic = self.min_exp()? >= 0 && lead.as_constant().is_some_and(|c| c.is_one());
        monic.then_some(max as usize)
    }

    /// Splits `self = rem + divisor * plus` where `rem` has `l`-exponents in
    /// `[0, n)` and `plus` is a Laurent polynomial, `n` being the degree of the
    /// monic `divisor`.
    ///
    /// Nonnegative powers are reduced by the leading term of the divisor and
    /// negative powers by its constant term, which must then be a unit.
    pub fn divmod(&self, divisor: &SpectralPoly) -> Result<(SpectralPoly, SpectralPoly)> {
        self.ensure_same(divisor)?;
        let n = divisor
            .monic_degree()
            .ok_or_else(|| Error::NonMonicDivisor(divisor.to_string()))? as i32;

        let mut rest = self.clone();
        let mut plus = SpectralPoly::zero(&self.vars);

        // Highest powers first.
        while let Some(top) = rest.max_exp().filter(|&e| e >= n) {
            let c = rest.coeffs[&top].clone();
            let t = SpectralPoly::term(top - n, c);
            rest = &rest - &(&t * divisor);
            plus.add_coeff(top - n, &t.coeffs[&(top - n)]);
        }

        if rest.min_exp().is_some_and(|e| e < 0) {
            let a0 = divisor.coeff(0);
            let a0_inv = a0.unit_inverse().ok_or_else(|| Error::NonUnitConstantTerm(a0.to_string()))?;
            // Lowest powers first; each step raises the minimal exponent.
            while let Some(low) = rest.min_exp().filter(|&e| e < 0) {
                let c = &rest.coeffs[&low] * &a0_inv;
                let t = SpectralPoly::term(low, c);
                rest = &rest - &(&t * divisor);
                plus.add_coeff(low, &t.coeffs[&low]);
            }
        }

        debug_assert!(rest.min_exp().is_none_or(|e| e >= 0) && rest.max_exp().is_none_or(|e| e < n));
        Ok((plus, rest))
    }

    /// `[self / divisor]_+`.
    pub fn div_plus(&self, divisor: &SpectralPoly) -> Result<SpectralPoly> {
        Ok(self.divmod(divisor)?.0)
    }

    /// `self mod divisor`.
    pub fn rem(&self, divisor: &SpectralPoly) -> Result<SpectralPoly> {
        Ok(self.divmod(divisor)?.1)
    }

    pub fn to_records(&self) -> Vec<SpectralRecord> {
        self.coeffs
            .iter()
            .map(|(&lexp, c)| SpectralRecord { lexp, coeff: c.to_records() })
            .collect()
    }

    pub fn from_records(vars: &Arc<VarTable>, records: &[SpectralRecord]) -> Result<Self> {
        let mut s = SpectralPoly::zero(vars);
        for r in records {
            s.add_coeff(r.lexp, &CoeffPoly::from_records(vars, &r.coeff)?);
        }
        Ok(s)
    }

    pub fn from_json(vars: &Arc<VarTable>, value: &serde_json::Value) -> Result<Self> {
        let records: Vec<SpectralRecord> =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_records(vars, &records)
    }
}

/// One `l`-power of the canonical JSON form: `{"lexp": int, "coeff": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralRecord {
    pub lexp: i32,
    pub coeff: Vec<TermRecord>,
}

impl Serialize for SpectralPoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_records().serialize(serializer)
    }
}

impl PartialEq for SpectralPoly {
    fn eq(&self, other: &Self) -> bool {
        same_table(&self.vars, &other.vars) && self.coeffs == other.coeffs
    }
}

impl Eq for SpectralPoly {}

impl fmt::Debug for SpectralPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SpectralPoly({self})")
    }
}

/// Descending powers of `l`: `l^2 + (q1)*l + (q2)`.
impl fmt::Display for SpectralPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (k, (&e, c)) in self.coeffs.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let lam = match e {
                0 => String::new(),
                1 => "l".to_string(),
                e => format!("l^{e}"),
            };
            match (c.as_constant(), lam.is_empty()) {
                (_, true) => write!(f, "({c})")?,
                (Some(r), false) if r.is_one() => write!(f, "{lam}")?,
                _ => write!(f, "({c})*{lam}")?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a SpectralPoly> for &'a SpectralPoly {
    type Output = SpectralPoly;
    fn add(self, rhs: &SpectralPoly) -> SpectralPoly {
        self.checked_add(rhs).expect("spectral polynomials over different variable tables")
    }
}

impl<'a> Sub<&'a SpectralPoly> for &'a SpectralPoly {
    type Output = SpectralPoly;
    fn sub(self, rhs: &SpectralPoly) -> SpectralPoly {
        self.checked_sub(rhs).expect("spectral polynomials over different variable tables")
    }
}

impl<'a> Mul<&'a SpectralPoly> for &'a SpectralPoly {
    type Output = SpectralPoly;
    fn mul(self, rhs: &SpectralPoly) -> SpectralPoly {
        self.checked_mul(rhs).expect("spectral polynomials over different variable tables")
    }
}

impl Neg for &SpectralPoly {
    type Output = SpectralPoly;
    fn neg(self) -> SpectralPoly {
        SpectralPoly {
            vars: Arc::clone(&self.vars),
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl Neg for SpectralPoly {
    type Output = SpectralPoly;
    fn neg(self) -> SpectralPoly {
        -&self
    }
}

macro_rules! forward_owned_spectral {
    ($tr:ident, $method:ident) => {
        impl $tr<SpectralPoly> for SpectralPoly {
            type Output = SpectralPoly;
            fn $method(self, rhs: SpectralPoly) -> SpectralPoly {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a SpectralPoly> for SpectralPoly {
            type Output = SpectralPoly;
            fn $method(self, rhs: &SpectralPoly) -> SpectralPoly {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<SpectralPoly> for &'a SpectralPoly {
            type Output = SpectralPoly;
            fn $method(self, rhs: SpectralPoly) -> SpectralPoly {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_spectral!(Add, add);
forward_owned_spectral!(Sub, sub);
forward_owned_spectral!(Mul, mul);
