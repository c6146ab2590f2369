//! Sparse multivariate polynomials over the rationals, with negative exponents
//! permitted on the variables a [`VarTable`] marks as localized.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::rational::Rational;
use super::vars::{same_table, VarTable};
use crate::error::{Error, Result};

pub type Exponents = SmallVec<[i32; 9]>;

/// Exponent vector ordered graded-lexicographically: total degree first, then
/// the exponent of the earliest variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Exponents);

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial(SmallVec::from_elem(0, arity))
    }

    pub fn exps(&self) -> &[i32] {
        &self.0
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone)]
pub struct CoeffPoly {
    vars: Arc<VarTable>,
    terms: BTreeMap<Monomial, Rational>,
}

impl CoeffPoly {
    pub fn zero(vars: &Arc<VarTable>) -> Self {
        CoeffPoly { vars: Arc::clone(vars), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &Arc<VarTable>, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn one(vars: &Arc<VarTable>) -> Self {
        Self::constant(vars, Rational::one())
    }

    /// The variable at `index` to the first power.
    pub fn var(vars: &Arc<VarTable>, index: usize) -> Self {
        let mut exps = Monomial::one(vars.len());
        exps.0[index] = 1;
        let mut p = Self::zero(vars);
        p.terms.insert(exps, Rational::one());
        p
    }

    /// `c * x^exps`, validating arity and localization.
    pub fn monomial(vars: &Arc<VarTable>, exps: &[i32], c: Rational) -> Result<Self> {
        check_exponents(vars, exps)?;
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial(exps.iter().copied().collect()), c);
        }
        Ok(p)
    }

    pub fn from_terms(vars: &Arc<VarTable>, terms: impl IntoIterator<Item = (Vec<i32>, Rational)>) -> Result<Self> {
        let mut p = Self::zero(vars);
        for (exps, c) in terms {
            check_exponents(vars, &exps)?;
            p.add_term(Monomial(exps.into_iter().collect()), &c);
        }
        Ok(p)
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending term order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn coefficient(&self, exps: &[i32]) -> Rational {
        self.terms
            .get(&Monomial(exps.iter().copied().collect()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Highest total degree among the given variables over all terms.
    pub fn degree_in(&self, indices: &[usize]) -> Option<i64> {
        self.terms
            .keys()
            .map(|m| indices.iter().map(|&i| m.0[i] as i64).sum())
            .max()
    }

    /// Whether `index` occurs with a nonzero exponent somewhere.
    pub fn depends_on(&self, index: usize) -> bool {
        self.terms.keys().any(|m| m.0[index] != 0)
    }

    fn add_term(&mut self, m: Monomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn ensure_same(&self, other: &CoeffPoly) -> Result<()> {
        if same_table(&self.vars, &other.vars) {
            Ok(())
        } else {
            Err(Error::VarTableMismatch)
        }
    }

    pub fn checked_add(&self, other: &CoeffPoly) -> Result<CoeffPoly> {
        self.ensure_same(other)?;
        let (mut acc, small) = if self.len() >= other.len() { (self.clone(), other) } else { (other.clone(), self) };
        for (m, c) in &small.terms {
            acc.add_term(m.clone(), c);
        }
        Ok(acc)
    }

    pub fn checked_sub(&self, other: &CoeffPoly) -> Result<CoeffPoly> {
        self.ensure_same(other)?;
        let mut acc = self.clone();
        for (m, c) in &other.terms {
            acc.add_term(m.clone(), &-c);
        }
        Ok(acc)
    }

    pub fn checked_mul(&self, other: &CoeffPoly) -> Result<CoeffPoly> {
        self.ensure_same(other)?;
        let mut acc = CoeffPoly::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                acc.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        Ok(acc)
    }

    pub fn scale(&self, c: &Rational) -> CoeffPoly {
        if c.is_zero() {
            return CoeffPoly::zero(&self.vars);
        }
        CoeffPoly {
            vars: Arc::clone(&self.vars),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> CoeffPoly {
        let mut acc = CoeffPoly::one(&self.vars);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative with respect to the variable at `index`.
    pub fn diff(&self, index: usize) -> CoeffPoly {
        let mut out = CoeffPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[index];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.0[index] = e - 1;
            out.terms.insert(dm, c * &Rational::integer(e as i64));
        }
        out
    }

    /// Whether the polynomial is a nonzero rational times a monomial in the
    /// localized variables only, i.e. invertible in the ring.
    pub fn is_unit(&self) -> bool {
        self.unit_inverse().is_some()
    }

    pub fn unit_inverse(&self) -> Option<CoeffPoly> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        let only_localized = m.0.iter().enumerate().all(|(i, &e)| e == 0 || self.vars.is_localized(i));
        if !only_localized {
            return None;
        }
        let inv = Monomial(m.0.iter().map(|e| -e).collect());
        let mut out = CoeffPoly::zero(&self.vars);
        out.terms.insert(inv, c.recip()?);
        Some(out)
    }

    /// Floating-point evaluation; `point` assigns a value to every variable.
    pub fn eval(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.vars.len() {
            return Err(Error::PointArity { expected: self.vars.len(), got: point.len() });
        }
        let mut sum = 0.0;
        for (m, c) in &self.terms {
            let mut term = c.to_f64();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if e < 0 && point[i] == 0.0 {
                    return Err(Error::ZeroLocalized(self.vars.name(i).to_string()));
                }
                term *= point[i].powi(e);
            }
            sum += &term;
        }
        Ok(sum)
    }

    /// Exact evaluation at a rational point.
    pub fn eval_exact(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.vars.len() {
            return Err(Error::PointArity { expected: self.vars.len(), got: point.len() });
        }
        let mut sum = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e != 0 {
                    term *= &point[i].powi(e).ok_or_else(|| Error::ZeroLocalized(self.vars.name(i).to_string()))?;
                }
            }
            sum += &term;
        }
        Ok(sum)
    }

    /// Canonical serialization records in ascending term order.
    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .map(|(m, c)| TermRecord { exps: m.0.to_vec(), num: c.numer().to_string(), den: c.denom().to_string() })
            .collect()
    }

    pub fn from_records(vars: &Arc<VarTable>, records: &[TermRecord]) -> Result<Self> {
        let mut p = CoeffPoly::zero(vars);
        for r in records {
            check_exponents(vars, &r.exps)?;
            let c = Rational::from_parts(&r.num, &r.den)?;
            p.add_term(Monomial(r.exps.iter().copied().collect()), &c);
        }
        Ok(p)
    }

    pub fn from_json(vars: &Arc<VarTable>, value: &serde_json::Value) -> Result<Self> {
        let records: Vec<TermRecord> =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_records(vars, &records)
    }

    fn fmt_monomial(&self, m: &Monomial, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", self.vars.name(i))?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

fn check_exponents(vars: &VarTable, exps: &[i32]) -> Result<()> {
    if exps.len() != vars.len() {
        return Err(Error::ExponentArity { expected: vars.len(), got: exps.len() });
    }
    for (i, &e) in exps.iter().enumerate() {
        if e < 0 && !vars.is_localized(i) {
            return Err(Error::NegativeExponent(vars.name(i).to_string()));
        }
    }
    Ok(())
}

/// One term of the canonical JSON form: `{"exps": [...], "num": "..", "den": ".."}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub exps: Vec<i32>,
    pub num: String,
    pub den: String,
}

impl Serialize for CoeffPoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_records().serialize(serializer)
    }
}

impl PartialEq for CoeffPoly {
    fn eq(&self, other: &Self) -> bool {
        same_table(&self.vars, &other.vars) && self.terms == other.terms
    }
}

impl Eq for CoeffPoly {}

impl fmt::Debug for CoeffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoeffPoly({self})")
    }
}

/// Human-readable form, highest term first: `1/2*p1^2 - q1*q2^-1 + 3`.
impl fmt::Display for CoeffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                self.fmt_monomial(m, f)?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a CoeffPoly> for &'a CoeffPoly {
    type Output = CoeffPoly;
    fn add(self, rhs: &CoeffPoly) -> CoeffPoly {
        self.checked_add(rhs).expect("coefficient polynomials over different variable tables")
    }
}

impl<'a> Sub<&'a CoeffPoly> for &'a CoeffPoly {
    type Output = CoeffPoly;
    fn sub(self, rhs: &CoeffPoly) -> CoeffPoly {
        self.checked_sub(rhs).expect("coefficient polynomials over different variable tables")
    }
}

impl<'a> Mul<&'a CoeffPoly> for &'a CoeffPoly {
    type Output = CoeffPoly;
    fn mul(self, rhs: &CoeffPoly) -> CoeffPoly {
        self.checked_mul(rhs).expect("coefficient polynomials over different variable tables")
    }
}

impl Neg for &CoeffPoly {
    type Output = CoeffPoly;
    fn neg(self) -> CoeffPoly {
        CoeffPoly {
            vars: Arc::clone(&self.vars),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for CoeffPoly {
    type Output = CoeffPoly;
    fn neg(self) -> CoeffPoly {
        -&self
    }
}

macro_rules! forward_owned_poly {
    ($tr:ident, $method:ident) => {
        impl $tr<CoeffPoly> for CoeffPoly {
            type Output = CoeffPoly;
            fn $method(self, rhs: CoeffPoly) -> CoeffPoly {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a CoeffPoly> for CoeffPoly {
            type Output = CoeffPoly;
            fn $method(self, rhs: &CoeffPoly) -> CoeffPoly {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<CoeffPoly> for &'a CoeffPoly {
            type Output = CoeffPoly;
            fn $method(self, rhs: CoeffPoly) -> CoeffPoly {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_poly!(Add, add);
forward_owned_poly!(Sub, sub);
forward_owned_poly!(Mul, mul);
