//! Benenti-class systems in Viète coordinates.
//!
//! A system is fixed by the separation curve
//! `sigma(l) + H_1 l^(n-1) + ... + H_n = 1/2 l^m mu^2`. Basic potentials come
//! from the recursion matrix, kinetic parts from the metric `G_m` and the
//! Killing tensors `K_j`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{CoeffPoly, Rational, SpectralPoly, VarTable};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaTerm {
    pub gamma: i32,
    pub coeff: Rational,
}

/// `f(l) = l^m`, `g(l) = l^r`, `sigma(l) = sum c_gamma l^gamma`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpecJson", into = "SpecJson")]
pub struct BenentiSpec {
    pub n: usize,
    pub m: i32,
    pub r: i32,
    pub sigma: Vec<SigmaTerm>,
}

impl BenentiSpec {
    pub fn new(n: usize, m: i32, r: i32, sigma: Vec<SigmaTerm>) -> Result<Self> {
        let spec = BenentiSpec { n, m, r, sigma };
        spec.validate()?;
        Ok(spec)
    }

    /// Single-monomial potential `sigma = l^gamma`.
    pub fn monomial(n: usize, m: i32, r: i32, gamma: i32) -> Result<Self> {
        Self::new(n, m, r, vec![SigmaTerm { gamma, coeff: Rational::one() }])
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidSpec("n must be at least 1".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for t in &self.sigma {
            if !seen.insert(t.gamma) {
                return Err(Error::InvalidSpec(format!("repeated sigma exponent {}", t.gamma)));
            }
            if t.coeff.is_zero() {
                return Err(Error::InvalidSpec(format!("zero coefficient for sigma exponent {}", t.gamma)));
            }
        }
        Ok(())
    }

    /// Same system with the Lax parameter `g = l^r` replaced.
    pub fn with_r(&self, r: i32) -> Self {
        BenentiSpec { r, ..self.clone() }
    }

    pub fn sigma_poly(&self, vars: &Arc<VarTable>) -> SpectralPoly {
        SpectralPoly::from_rational_terms(vars, self.sigma.iter().map(|t| (t.gamma, t.coeff.clone())))
    }

    pub fn sigma_at(&self, lambda: f64) -> f64 {
        self.sigma.iter().map(|t| t.coeff.to_f64() * lambda.powi(t.gamma)).sum()
    }

    /// Whether any of `f`, `g`, `sigma` has a negative exponent.
    pub fn has_negative_powers(&self) -> bool {
        self.m < 0 || self.r < 0 || self.sigma.iter().any(|t| t.gamma < 0)
    }
}

impl fmt::Display for BenentiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} f=l^{} g=l^{} sigma=", self.n, self.m, self.r)?;
        if self.sigma.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.sigma.iter().enumerate() {
            if k > 0 {
                write!(f, "+")?;
            }
            if !t.coeff.is_one() {
                write!(f, "({})", t.coeff)?;
            }
            write!(f, "l^{}", t.gamma)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct SigmaJson {
    gamma: i32,
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct SpecJson {
    n: usize,
    m: i32,
    r: i32,
    sigma: Vec<SigmaJson>,
}

impl TryFrom<SpecJson> for BenentiSpec {
    type Error = Error;

    fn try_from(j: SpecJson) -> Result<Self> {
        let sigma = j
            .sigma
            .into_iter()
            .map(|s| Ok(SigmaTerm { gamma: s.gamma, coeff: Rational::from_parts(&s.num, &s.den)? }))
            .collect::<Result<Vec<_>>>()?;
        BenentiSpec::new(j.n, j.m, j.r, sigma)
    }
}

impl From<BenentiSpec> for SpecJson {
    fn from(s: BenentiSpec) -> Self {
        SpecJson {
            n: s.n,
            m: s.m,
            r: s.r,
            sigma: s
                .sigma
                .into_iter()
                .map(|t| SigmaJson { gamma: t.gamma, num: t.coeff.numer().to_string(), den: t.coeff.denom().to_string() })
                .collect(),
        }
    }
}

/// Viète phase space `(q_1..q_n, p_1..p_n)` plus the spectral-curve symbol `mu`.
#[derive(Debug, Clone)]
pub struct Viete {
    n: usize,
    vars: Arc<VarTable>,
}

impl Viete {
    pub fn new(n: usize) -> Self {
        Viete { n, vars: VarTable::viete(n) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn q_index(&self, i: usize) -> usize {
        i - 1
    }

    pub fn p_index(&self, i: usize) -> usize {
        self.n + i - 1
    }

    pub fn mu_index(&self) -> usize {
        2 * self.n
    }

    /// `q_i` for `1 <= i <= n`, with `q_0 = 1`.
    pub fn q(&self, i: usize) -> CoeffPoly {
        if i == 0 {
            CoeffPoly::one(&self.vars)
        } else {
            CoeffPoly::var(&self.vars, self.q_index(i))
        }
    }

    pub fn p(&self, i: usize) -> CoeffPoly {
        CoeffPoly::var(&self.vars, self.p_index(i))
    }

    pub fn mu(&self) -> CoeffPoly {
        CoeffPoly::var(&self.vars, self.mu_index())
    }

    pub fn constant(&self, c: Rational) -> CoeffPoly {
        CoeffPoly::constant(&self.vars, c)
    }

    /// `q_n^(-k)`.
    pub fn qn_pow(&self, k: i32) -> CoeffPoly {
        let mut exps = vec![0; self.vars.len()];
        exps[self.n - 1] = k;
        CoeffPoly::monomial(&self.vars, &exps, Rational::one()).expect("q_n is localized")
    }

    /// Packs numeric `(q, p)` (and optionally `mu`) into an evaluation point.
    pub fn point(&self, q: &[f64], p: &[f64], mu: f64) -> Vec<f64> {
        assert!(q.len() == self.n && p.len() == self.n);
        q.iter().chain(p).copied().chain(std::iter::once(mu)).collect()
    }
}

/// `V^(gamma)` as an `n`-vector of polynomials in `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PotentialVector(pub Vec<CoeffPoly>);

impl PotentialVector {
    pub fn entries(&self) -> &[CoeffPoly] {
        &self.0
    }

    /// `V_i`, 1-based.
    pub fn get(&self, i: usize) -> &CoeffPoly {
        &self.0[i - 1]
    }
}

/// `V^(0) = (0, ..., 0, -1)`.
pub fn seed_potential(viete: &Viete) -> PotentialVector {
    let n = viete.n();
    PotentialVector(
        (1..=n)
            .map(|k| if k == n { viete.constant(Rational::integer(-1)) } else { CoeffPoly::zero(viete.vars()) })
            .collect(),
    )
}

/// Multiplication by the recursion matrix: `(R V)_i = -q_i V_1 + V_(i+1)`.
pub fn recursion_step(viete: &Viete, v: &PotentialVector) -> PotentialVector {
    let n = viete.n();
    PotentialVector(
        (1..=n)
            .map(|i| {
                let head = -(&viete.q(i) * v.get(1));
                if i < n {
                    head + v.get(i + 1)
                } else {
                    head
                }
            })
            .collect(),
    )
}

/// Multiplication by `R^{-1}`: `(R^{-1} V)_1 = -V_n / q_n`,
/// `(R^{-1} V)_i = V_(i-1) - q_(i-1) V_n / q_n`.
pub fn inverse_recursion_step(viete: &Viete, v: &PotentialVector) -> PotentialVector {
    let n = viete.n();
    let vn_over_qn = v.get(n) * &viete.qn_pow(-1);
    PotentialVector(
        (1..=n)
            .map(|i| if i == 1 { -&vn_over_qn } else { v.get(i - 1) - &(&viete.q(i - 1) * &vn_over_qn) })
            .collect(),
    )
}

/// Basic potentials for a contiguous range of exponents, built by iterating
/// the recursion outward from `V^(0)`.
#[derive(Debug, Clone)]
pub struct Potentials {
    table: BTreeMap<i32, PotentialVector>,
}

impl Potentials {
    pub fn new(viete: &Viete, lo: i32, hi: i32) -> Self {
        let lo = lo.min(0);
        let hi = hi.max(0);
        let mut table = BTreeMap::new();
        let seed = seed_potential(viete);
        let mut v = seed.clone();
        for g in 1..=hi {
            v = recursion_step(viete, &v);
            table.insert(g, v.clone());
        }
        let mut v = seed.clone();
        for g in (lo..0).rev() {
            v = inverse_recursion_step(viete, &v);
            table.insert(g, v.clone());
        }
        table.insert(0, seed);
        Potentials { table }
    }

    pub fn get(&self, gamma: i32) -> &PotentialVector {
        self.table
            .get(&gamma)
            .unwrap_or_else(|| panic!("basic potential V^({gamma}) outside the precomputed range"))
    }
}

pub fn basic_potential(n: usize, gamma: i32) -> PotentialVector {
    let viete = Viete::new(n);
    basic_potential_in(&viete, gamma)
}

pub fn basic_potential_in(viete: &Viete, gamma: i32) -> PotentialVector {
    Potentials::new(viete, gamma, gamma).get(gamma).clone()
}

/// Square matrix of coefficient polynomials, 1-based accessors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: Vec<Vec<CoeffPoly>>,
}

impl PolyMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> CoeffPoly) -> Self {
        PolyMatrix { rows: (1..=n).map(|i| (1..=n).map(|k| f(i, k)).collect()).collect() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, k: usize) -> &CoeffPoly {
        &self.rows[i - 1][k - 1]
    }

    pub fn transpose(&self) -> PolyMatrix {
        PolyMatrix::from_fn(self.dim(), |i, k| self.get(k, i).clone())
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    pub fn matmul(&self, other: &PolyMatrix) -> PolyMatrix {
        let n = self.dim();
        PolyMatrix::from_fn(n, |i, k| {
            (1..=n).fold(CoeffPoly::zero(self.get(1, 1).vars()), |acc, s| acc + self.get(i, s) * other.get(s, k))
        })
    }

    pub fn eval(&self, point: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.rows.iter().map(|row| row.iter().map(|c| c.eval(point)).collect()).collect()
    }
}

fn metric_from(viete: &Viete, pots: &Potentials, m: i32) -> PolyMatrix {
    PolyMatrix::from_fn(viete.n(), |i, k| {
        -(0..k).fold(CoeffPoly::zero(viete.vars()), |acc, l| {
            acc + viete.q(k - l - 1) * pots.get(m + l as i32).get(i)
        })
    })
}

fn killing_from(viete: &Viete, pots: &Potentials, j: usize) -> PolyMatrix {
    let n = viete.n() as i32;
    PolyMatrix::from_fn(viete.n(), |i, k| {
        -(0..j).fold(CoeffPoly::zero(viete.vars()), |acc, l| {
            acc + viete.q(j - l - 1) * pots.get(n + l as i32 - k as i32).get(i)
        })
    })
}

/// Contravariant metric `(G_m)^{ik} = -sum_{l<k} q_(k-l-1) V_i^(m+l)`.
pub fn metric_g(n: usize, m: i32) -> PolyMatrix {
    let viete = Viete::new(n);
    let pots = Potentials::new(&viete, m, m + n as i32);
    metric_from(&viete, &pots, m)
}

/// Killing tensor `(K_j)^i_k = -sum_{l<j} q_(j-l-1) V_i^(n+l-k)`.
pub fn killing_k(n: usize, j: usize) -> Result<PolyMatrix> {
    if j == 0 || j > n {
        return Err(Error::IndexOutOfRange { index: j, n });
    }
    let viete = Viete::new(n);
    let pots = Potentials::new(&viete, 0, 2 * n as i32);
    Ok(killing_from(&viete, &pots, j))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamiltonianSet {
    pub kinetic: Vec<CoeffPoly>,
    pub potential: Vec<CoeffPoly>,
    pub h: Vec<CoeffPoly>,
}

impl HamiltonianSet {
    /// `H_k`, 1-based.
    pub fn get(&self, k: usize) -> &CoeffPoly {
        &self.h[k - 1]
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }
}

/// `H_j = 1/2 p^T (K_j G_m) p + sum_gamma c_gamma V_j^(gamma)`.
pub fn hamiltonians(spec: &BenentiSpec) -> HamiltonianSet {
    let viete = Viete::new(spec.n);
    hamiltonians_in(&viete, spec)
}

pub fn hamiltonians_in(viete: &Viete, spec: &BenentiSpec) -> HamiltonianSet {
    let n = spec.n;
    let gammas = spec.sigma.iter().map(|t| t.gamma);
    let lo = gammas.clone().chain([spec.m]).min().unwrap();
    let hi = gammas.chain([spec.m + n as i32, 2 * n as i32]).max().unwrap();
    let pots = Potentials::new(viete, lo, hi);
    let metric = metric_from(viete, &pots, spec.m);
    let half = Rational::new(1, 2);

    let mut kinetic = Vec::with_capacity(n);
    let mut potential = Vec::with_capacity(n);
    for j in 1..=n {
        let kg = killing_from(viete, &pots, j).matmul(&metric);
        let mut e = CoeffPoly::zero(viete.vars());
        for i in 1..=n {
            for k in 1..=n {
                e = e + kg.get(i, k) * &(viete.p(i) * viete.p(k));
            }
        }
        kinetic.push(e.scale(&half));
        let v = spec
            .sigma
            .iter()
            .fold(CoeffPoly::zero(viete.vars()), |acc, t| acc + pots.get(t.gamma).get(j).scale(&t.coeff));
        potential.push(v);
    }
    let h = kinetic.iter().zip(&potential).map(|(e, v)| e + v).collect();
    HamiltonianSet { kinetic, potential, h }
}

/// Numeric separation coordinates `(l_i, mu_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparationPoint {
    pub lambdas: Vec<f64>,
    pub mus: Vec<f64>,
}

impl SeparationPoint {
    pub fn new(lambdas: Vec<f64>, mus: Vec<f64>) -> Result<Self> {
        if lambdas.len() != mus.len() || lambdas.is_empty() {
            return Err(Error::DegeneratePoint(format!(
                "{} separation positions for {} momenta",
                lambdas.len(),
                mus.len()
            )));
        }
        for (i, a) in lambdas.iter().enumerate() {
            for b in &lambdas[i + 1..] {
                if a == b {
                    return Err(Error::DegeneratePoint(format!("repeated separation coordinate {a}")));
                }
            }
        }
        Ok(SeparationPoint { lambdas, mus })
    }

    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    /// `Delta_k = prod_{j != k} (l_k - l_j)`.
    pub fn delta(&self, k: usize) -> f64 {
        self.lambdas
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, l)| self.lambdas[k] - l)
            .product()
    }
}

/// Signed elementary symmetric polynomials `rho_0 = 1, rho_1, ..., rho_n`.
pub fn signed_elementary(lambdas: &[f64]) -> Vec<f64> {
    // coefficients of prod (x - l_i), highest power first
    let mut coeffs = vec![1.0];
    for &l in lambdas {
        let mut next = coeffs.clone();
        next.push(0.0);
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] -= &(l * c);
        }
        coeffs = next;
    }
    coeffs
}

/// `q_i = rho_i(l)`, `p_i = -sum_k l_k^(n-i) mu_k / Delta_k`.
pub fn viete_map(pt: &SeparationPoint) -> (Vec<f64>, Vec<f64>) {
    let n = pt.n();
    let rho = signed_elementary(&pt.lambdas);
    let q = rho[1..].to_vec();
    let p = (1..=n)
        .map(|i| {
            -(0..n)
                .map(|k| pt.lambdas[k].powi((n - i) as i32) * pt.mus[k] / pt.delta(k))
                .sum::<f64>()
        })
        .collect();
    (q, p)
}

/// [`viete_map`] in exact arithmetic.
pub fn viete_map_exact(lambdas: &[Rational], mus: &[Rational]) -> Result<(Vec<Rational>, Vec<Rational>)> {
    let n = lambdas.len();
    if mus.len() != n {
        return Err(Error::DegeneratePoint(format!("{n} separation positions for {} momenta", mus.len())));
    }
    let mut rho = vec![Rational::one()];
    for l in lambdas {
        let mut next = rho.clone();
        next.push(Rational::zero());
        for (k, c) in rho.iter().enumerate() {
            next[k + 1] -= &(l * c);
        }
        rho = next;
    }
    let mut weights = Vec::with_capacity(n);
    for k in 0..n {
        let delta = (0..n).filter(|&j| j != k).fold(Rational::one(), |acc, j| acc * (&lambdas[k] - &lambdas[j]));
        let inv = delta
            .recip()
            .ok_or_else(|| Error::DegeneratePoint(format!("repeated separation coordinate {}", lambdas[k])))?;
        weights.push(&mus[k] * &inv);
    }
    let p = (1..=n)
        .map(|i| -(0..n).fold(Rational::zero(), |acc, k| acc + lambdas[k].pow((n - i) as u32) * &weights[k]))
        .collect();
    Ok((rho[1..].to_vec(), p))
}

/// Condition number above which the oracle solve logs a warning.
pub const ORACLE_CONDITION_WARNING: f64 = 1e12;

/// Solves `sum_k H_k l_i^(n-k) = F(l_i, mu_i)` for the Hamiltonians, with
/// `F(x, y) = 1/2 f(x) y^2 - sigma(x)`.
pub fn oracle_hamiltonians(spec: &BenentiSpec, pt: &SeparationPoint) -> Result<Vec<f64>> {
    let n = spec.n;
    if pt.n() != n {
        return Err(Error::PointArity { expected: n, got: pt.n() });
    }
    if spec.has_negative_powers() && pt.lambdas.contains(&0.0) {
        return Err(Error::DegeneratePoint("zero separation coordinate with negative powers".into()));
    }
    let matrix: Vec<Vec<f64>> = pt
        .lambdas
        .iter()
        .map(|&l| (1..=n).map(|k| l.powi((n - k) as i32)).collect())
        .collect();
    let rhs: Vec<f64> = pt
        .lambdas
        .iter()
        .zip(&pt.mus)
        .map(|(&l, &mu)| 0.5 * l.powi(spec.m) * mu * mu - spec.sigma_at(l))
        .collect();
    let lu = Lu::factor(matrix)?;
    let cond = lu.condition_inf();
    if cond > ORACLE_CONDITION_WARNING {
        log::warn!("separation-relation system is ill-conditioned (cond ~ {cond:.3e})");
    }
    Ok(lu.solve(&rhs))
}

/// Dense LU with partial pivoting for the small oracle systems.
struct Lu {
    lu: Vec<Vec<f64>>,
    perm: Vec<usize>,
    norm_inf: f64,
}

impl Lu {
    fn factor(mut a: Vec<Vec<f64>>) -> Result<Self> {
        let n = a.len();
        let norm_inf = a.iter().map(|row| row.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max);
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
                .unwrap();
            if a[pivot][col].abs() <= f64::EPSILON * norm_inf {
                return Err(Error::DegeneratePoint("singular separation-relation system".into()));
            }
            a.swap(col, pivot);
            perm.swap(col, pivot);
            for row in col + 1..n {
                let factor = a[row][col] / a[col][col];
                a[row][col] = factor;
                for k in col + 1..n {
                    a[row][k] -= factor * a[col][k];
                }
            }
        }
        Ok(Lu { lu: a, perm, norm_inf })
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.len();
        let mut x: Vec<f64> = self.perm.iter().map(|&i| b[i]).collect();
        for i in 0..n {
            for k in 0..i {
                x[i] -= self.lu[i][k] * x[k];
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                x[i] -= self.lu[i][k] * x[k];
            }
            x[i] /= self.lu[i][i];
        }
        x
    }

    /// `||A||_inf ||A^{-1}||_inf`, inverse built column by column.
    fn condition_inf(&self) -> f64 {
        let n = self.lu.len();
        let mut row_sums = vec![0.0; n];
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            for (i, x) in self.solve(&e).into_iter().enumerate() {
                row_sums[i] += x.abs();
            }
        }
        self.norm_inf * row_sums.into_iter().fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn potentials_from_the_recursion() {
        let v = Viete::new(3);
        let zero = CoeffPoly::zero(v.vars());
        let minus_one = v.constant(rat(-1, 1));
        assert_eq!(basic_potential_in(&v, 0).0, vec![zero.clone(), zero.clone(), minus_one.clone()]);
        assert_eq!(basic_potential_in(&v, 3).0, vec![v.q(1), v.q(2), v.q(3)]);
        for gamma in 0..3 {
            let pot = basic_potential_in(&v, gamma);
            for k in 1..=3 {
                let expect = if k as i32 == 3 - gamma { minus_one.clone() } else { zero.clone() };
                assert_eq!(pot.get(k), &expect);
            }
        }

        let v2 = Viete::new(2);
        let inv = v2.qn_pow(-1);
        assert_eq!(basic_potential_in(&v2, -1).0, vec![inv.clone(), &v2.q(1) * &inv]);
        let (q1, q2) = (v2.q(1), v2.q(2));
        let q1cube = &q1 * &(&q1 * &q1);
        assert_eq!(
            basic_potential_in(&v2, 4).0,
            vec![&q1cube - &(&q1 * &q2).scale(&rat(2, 1)), &(&q1 * &q1) * &q2 - &q2 * &q2]
        );
    }

    #[test]
    fn recursion_is_invertible() {
        for n in 1..=5 {
            let v = Viete::new(n);
            let pots = Potentials::new(&v, -3, n as i32 + 3);
            for g in -3..=n as i32 + 3 {
                let p = pots.get(g);
                assert_eq!(&inverse_recursion_step(&v, &recursion_step(&v, p)), p);
                assert_eq!(&recursion_step(&v, &inverse_recursion_step(&v, p)), p);
            }
        }
    }

    #[test]
    fn flat_metric_and_identity_killing() {
        let g = metric_g(2, 0);
        let v = Viete::new(2);
        let zero = CoeffPoly::zero(v.vars());
        let one = CoeffPoly::one(v.vars());
        assert_eq!(g, PolyMatrix::from_fn(2, |i, k| match (i, k) {
            (1, 1) => zero.clone(),
            (2, 2) => v.q(1),
            _ => one.clone(),
        }));
        assert_eq!(metric_g(1, 0), PolyMatrix::from_fn(1, |_, _| CoeffPoly::one(Viete::new(1).vars())));
        for n in 1..=4 {
            let k1 = killing_k(n, 1).unwrap();
            let vn = Viete::new(n);
            assert_eq!(k1, PolyMatrix::from_fn(n, |i, k| if i == k { CoeffPoly::one(vn.vars()) } else { CoeffPoly::zero(vn.vars()) }));
        }
        assert_eq!(killing_k(2, 3), Err(Error::IndexOutOfRange { index: 3, n: 2 }));
        assert!(killing_k(2, 0).is_err());
    }

    #[test]
    fn metric_and_killing_products_are_symmetric() {
        for n in 1..=4 {
            for m in -3..=3 {
                let g = metric_g(n, m);
                assert!(g.is_symmetric(), "G_{m} for n={n}");
                for j in 1..=n {
                    assert!(killing_k(n, j).unwrap().matmul(&g).is_symmetric(), "K_{j} G_{m}, n={n}");
                }
            }
        }
    }

    #[test]
    fn one_degree_of_freedom() {
        let spec = BenentiSpec::monomial(1, 0, 0, 1).unwrap();
        let v = Viete::new(1);
        let h = hamiltonians(&spec);
        assert_eq!(h.get(1), &((&v.p(1) * &v.p(1)).scale(&rat(1, 2)) + v.q(1)));
    }

    #[test]
    fn viete_map_examples() {
        let pt = SeparationPoint::new(vec![2.0, 3.0], vec![1.0, 1.0]).unwrap();
        let (q, p) = viete_map(&pt);
        assert_eq!(q, vec![-5.0, 6.0]);
        assert_eq!(p, vec![-1.0, 0.0]);
        let r = |x: i64| Rational::integer(x);
        assert_eq!(
            viete_map_exact(&[r(2), r(3)], &[r(1), r(1)]).unwrap(),
            (vec![r(-5), r(6)], vec![r(-1), r(0)])
        );
        assert!(viete_map_exact(&[r(2), r(2)], &[r(1), r(1)]).is_err());
        let pt = SeparationPoint::new(vec![0.7], vec![-1.3]).unwrap();
        assert_eq!(viete_map(&pt), (vec![-0.7], vec![1.3]));
        assert!(SeparationPoint::new(vec![1.0, 1.0], vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn oracle_small_cases() {
        let spec = BenentiSpec::new(2, 0, 0, vec![]).unwrap();
        let pt = SeparationPoint::new(vec![2.0, 3.0], vec![1.0, 1.0]).unwrap();
        let h = oracle_hamiltonians(&spec, &pt).unwrap();
        assert!(h[0].abs() < 1e-15);
        assert!((h[1] - 0.5).abs() < 1e-15);

        let spec = BenentiSpec::monomial(1, 2, 0, 3).unwrap();
        let pt = SeparationPoint::new(vec![1.5], vec![0.4]).unwrap();
        let f = 0.5 * 1.5f64.powi(2) * 0.16 - 1.5f64.powi(3);
        assert_eq!(oracle_hamiltonians(&spec, &pt).unwrap(), vec![f]);
    }

    #[test]
    fn spec_validation_and_json() {
        assert!(BenentiSpec::monomial(0, 0, 0, 1).is_err());
        let dup = vec![SigmaTerm { gamma: 1, coeff: rat(1, 1) }, SigmaTerm { gamma: 1, coeff: rat(2, 1) }];
        assert!(BenentiSpec::new(2, 0, 0, dup).is_err());
        assert!(BenentiSpec::new(2, 0, 0, vec![SigmaTerm { gamma: 1, coeff: rat(0, 1) }]).is_err());

        let spec = BenentiSpec::new(2, -1, 0, vec![SigmaTerm { gamma: -2, coeff: rat(3, 4) }]).unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(json, r#"{"n":2,"m":-1,"r":0,"sigma":[{"gamma":-2,"num":"3","den":"4"}]}"#);
        assert_eq!(serde_json::from_str::<BenentiSpec>(&json).unwrap(), spec);
        assert!(serde_json::from_str::<BenentiSpec>(r#"{"n":0,"m":0,"r":0,"sigma":[]}"#).is_err());
    }
}
