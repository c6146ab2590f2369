//! Lax matrices `L = (v u; w -v)` and the companion matrices `U_k`.

use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::algebra::{CoeffPoly, Rational, SpectralPoly, VarTable};
use crate::benenti::{hamiltonians_in, BenentiSpec, HamiltonianSet, Potentials, Viete};
use crate::error::{Error, Result};

/// 2x2 matrix over Laurent polynomials in `l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaxMatrix {
    pub e11: SpectralPoly,
    pub e12: SpectralPoly,
    pub e21: SpectralPoly,
    pub e22: SpectralPoly,
}

impl LaxMatrix {
    pub fn new(e11: SpectralPoly, e12: SpectralPoly, e21: SpectralPoly, e22: SpectralPoly) -> Self {
        LaxMatrix { e11, e12, e21, e22 }
    }

    /// `(a b; c -a)`.
    pub fn traceless(a: SpectralPoly, b: SpectralPoly, c: SpectralPoly) -> Self {
        let d = -&a;
        LaxMatrix::new(a, b, c, d)
    }

    pub fn zero(vars: &Arc<VarTable>) -> Self {
        let z = SpectralPoly::zero(vars);
        LaxMatrix::new(z.clone(), z.clone(), z.clone(), z)
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        self.e11.vars()
    }

    pub fn entries(&self) -> [&SpectralPoly; 4] {
        [&self.e11, &self.e12, &self.e21, &self.e22]
    }

    pub fn map(&self, mut f: impl FnMut(&SpectralPoly) -> SpectralPoly) -> LaxMatrix {
        LaxMatrix::new(f(&self.e11), f(&self.e12), f(&self.e21), f(&self.e22))
    }

    pub fn try_map(&self, mut f: impl FnMut(&SpectralPoly) -> Result<SpectralPoly>) -> Result<LaxMatrix> {
        Ok(LaxMatrix::new(f(&self.e11)?, f(&self.e12)?, f(&self.e21)?, f(&self.e22)?))
    }

    pub fn is_zero(&self) -> bool {
        self.entries().iter().all(|e| e.is_zero())
    }

    pub fn trace(&self) -> SpectralPoly {
        &self.e11 + &self.e22
    }

    pub fn matmul(&self, o: &LaxMatrix) -> LaxMatrix {
        LaxMatrix::new(
            &self.e11 * &o.e11 + &self.e12 * &o.e21,
            &self.e11 * &o.e12 + &self.e12 * &o.e22,
            &self.e21 * &o.e11 + &self.e22 * &o.e21,
            &self.e21 * &o.e12 + &self.e22 * &o.e22,
        )
    }

    pub fn add(&self, o: &LaxMatrix) -> LaxMatrix {
        LaxMatrix::new(&self.e11 + &o.e11, &self.e12 + &o.e12, &self.e21 + &o.e21, &self.e22 + &o.e22)
    }

    pub fn sub(&self, o: &LaxMatrix) -> LaxMatrix {
        LaxMatrix::new(&self.e11 - &o.e11, &self.e12 - &o.e12, &self.e21 - &o.e21, &self.e22 - &o.e22)
    }

    /// `[self, o] = self o - o self`.
    pub fn commutator(&self, o: &LaxMatrix) -> LaxMatrix {
        self.matmul(o).sub(&o.matmul(self))
    }

    pub fn determinant(&self) -> SpectralPoly {
        &self.e11 * &self.e22 - &self.e12 * &self.e21
    }

    pub fn eval(&self, point: &[f64], lambda: f64) -> Result<[[f64; 2]; 2]> {
        Ok([
            [self.e11.eval(point, lambda)?, self.e12.eval(point, lambda)?],
            [self.e21.eval(point, lambda)?, self.e22.eval(point, lambda)?],
        ])
    }

    pub fn from_json(vars: &Arc<VarTable>, value: &serde_json::Value) -> Result<Self> {
        let entry = |key: &str| {
            let v = value.get(key).ok_or_else(|| Error::Parse(format!("missing matrix entry {key}")))?;
            SpectralPoly::from_json(vars, v)
        };
        Ok(LaxMatrix::new(entry("e11")?, entry("e12")?, entry("e21")?, entry("e22")?))
    }
}

impl Serialize for LaxMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("LaxMatrix", 4)?;
        s.serialize_field("e11", &self.e11)?;
        s.serialize_field("e12", &self.e12)?;
        s.serialize_field("e21", &self.e21)?;
        s.serialize_field("e22", &self.e22)?;
        s.end()
    }
}

/// `u(l) = sum_{k=0}^n q_k l^(n-k)` with `q_0 = 1`.
pub fn u_poly(n: usize) -> SpectralPoly {
    u_poly_in(&Viete::new(n))
}

pub fn u_poly_in(viete: &Viete) -> SpectralPoly {
    let n = viete.n();
    SpectralPoly::from_coeffs(viete.vars(), (0..=n).map(|k| ((n - k) as i32, viete.q(k))))
        .expect("single variable table")
}

/// `v(l) = sum_k [sum_{s<k} q_s (sum_j V_j^(r+k-s-1) p_j)] l^(n-k)`.
pub fn v_poly(n: usize, r: i32) -> SpectralPoly {
    let viete = Viete::new(n);
    let pots = Potentials::new(&viete, r, r + n as i32);
    v_poly_in(&viete, &pots, r)
}

fn v_poly_in(viete: &Viete, pots: &Potentials, r: i32) -> SpectralPoly {
    let n = viete.n();
    let contract = |gamma: i32| {
        let pot = pots.get(gamma);
        (1..=n).fold(CoeffPoly::zero(viete.vars()), |acc, j| acc + pot.get(j) * &viete.p(j))
    };
    let coeffs = (1..=n).map(|k| {
        let c = (0..k).fold(CoeffPoly::zero(viete.vars()), |acc, s| {
            acc + viete.q(s) * contract(r + k as i32 - s as i32 - 1)
        });
        ((n - k) as i32, c)
    });
    SpectralPoly::from_coeffs(viete.vars(), coeffs).expect("single variable table")
}

/// `w = w_E + w_V` together with the remainder of `F(l, v/g)` modulo `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WDecomposition {
    pub w: SpectralPoly,
    pub kinetic: SpectralPoly,
    pub potential: SpectralPoly,
    /// `F(l, v/g) mod u`, which should equal `sum_k H_k l^(n-k)`.
    pub remainder: SpectralPoly,
}

pub fn w_poly(spec: &BenentiSpec) -> Result<WDecomposition> {
    let viete = Viete::new(spec.n);
    let pots = potentials_for(&viete, spec);
    let u = u_poly_in(&viete);
    let v = v_poly_in(&viete, &pots, spec.r);
    w_from(&viete, spec, &u, &v)
}

fn potentials_for(viete: &Viete, spec: &BenentiSpec) -> Potentials {
    let n = spec.n as i32;
    Potentials::new(viete, spec.r, spec.r + n)
}

fn w_from(viete: &Viete, spec: &BenentiSpec, u: &SpectralPoly, v: &SpectralPoly) -> Result<WDecomposition> {
    let shift = 2 * spec.r - spec.m;
    // F = 1/2 f (v/g)^2 - sigma, split into its two parts.
    let f_kin = (v * v).shift(-shift).scale(&Rational::new(1, 2));
    let sigma = spec.sigma_poly(viete.vars());
    let (plus_kin, rem_kin) = f_kin.divmod(u)?;
    let (plus_pot, rem_pot) = sigma.divmod(u)?;
    let kinetic = plus_kin.shift(shift).scale(&Rational::integer(-2));
    let potential = plus_pot.shift(shift).scale(&Rational::integer(2));
    Ok(WDecomposition { w: &kinetic + &potential, kinetic, potential, remainder: rem_kin - rem_pot })
}

/// Everything needed for the Lax pair of one system, built once.
#[derive(Debug, Clone)]
pub struct LaxSystem {
    pub spec: BenentiSpec,
    pub viete: Viete,
    pub hamiltonians: HamiltonianSet,
    pub u: SpectralPoly,
    pub v: SpectralPoly,
    pub w: WDecomposition,
    pub l: LaxMatrix,
}

impl LaxSystem {
    pub fn build(spec: &BenentiSpec) -> Result<Self> {
        spec.validate()?;
        let viete = Viete::new(spec.n);
        let pots = potentials_for(&viete, spec);
        let u = u_poly_in(&viete);
        let v = v_poly_in(&viete, &pots, spec.r);
        let w = w_from(&viete, spec, &u, &v)?;
        let l = LaxMatrix::traceless(v.clone(), u.clone(), w.w.clone());
        let hamiltonians = hamiltonians_in(&viete, spec);
        Ok(LaxSystem { spec: spec.clone(), viete, hamiltonians, u, v, w, l })
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        self.viete.vars()
    }

    /// `t_k(l) = [u / l^(n-k+1)]_+ = sum_{s<k} q_s l^(k-1-s)`.
    pub fn t_poly(&self, k: usize) -> SpectralPoly {
        SpectralPoly::from_coeffs(self.vars(), (0..k).map(|s| ((k - 1 - s) as i32, self.viete.q(s))))
            .expect("single variable table")
    }

    /// `U_k = [B_k / u]_+` with `B_k = 1/2 l^(m-r) t_k L`.
    pub fn u_matrix(&self, k: usize) -> Result<LaxMatrix> {
        if k == 0 || k > self.spec.n {
            return Err(Error::IndexOutOfRange { index: k, n: self.spec.n });
        }
        let t = self.t_poly(k).shift(self.spec.m - self.spec.r).scale(&Rational::new(1, 2));
        let b = self.l.map(|e| &t * e);
        b.try_map(|e| e.div_plus(&self.u))
    }

    /// `sum_k H_k l^(n-k)`.
    pub fn hamiltonian_poly(&self) -> SpectralPoly {
        let n = self.spec.n;
        SpectralPoly::from_coeffs(self.vars(), (1..=n).map(|k| ((n - k) as i32, self.hamiltonians.get(k).clone())))
            .expect("single variable table")
    }

    /// `2 l^(2r-m) (-sum_k H_k l^(n-k) + 1/2 l^m mu^2 - sigma)`.
    pub fn expected_spectral_det(&self) -> SpectralPoly {
        let mu = self.viete.mu();
        let kinetic = SpectralPoly::term(self.spec.m, (&mu * &mu).scale(&Rational::new(1, 2)));
        let curve = kinetic - self.hamiltonian_poly() - self.spec.sigma_poly(self.vars());
        curve.shift(2 * self.spec.r - self.spec.m).scale(&Rational::integer(2))
    }
}

pub fn lax_l(spec: &BenentiSpec) -> Result<LaxMatrix> {
    Ok(LaxSystem::build(spec)?.l)
}

pub fn lax_u(spec: &BenentiSpec, k: usize) -> Result<LaxMatrix> {
    if k == 0 || k > spec.n {
        return Err(Error::IndexOutOfRange { index: k, n: spec.n });
    }
    LaxSystem::build(spec)?.u_matrix(k)
}

/// `det(L - l^r mu I)`, which is `-(v - l^r mu)(v + l^r mu) - u w` for traceless `L`.
pub fn spectral_det(l: &LaxMatrix, r: i32) -> Result<SpectralPoly> {
    let vars = l.vars();
    let mu_index = vars
        .index_of("mu")
        .ok_or_else(|| Error::InvalidVarTable("no spectral parameter mu in the variable table".into()))?;
    let g_mu = SpectralPoly::term(r, CoeffPoly::var(vars, mu_index));
    Ok((&l.e11 - &g_mu) * (&l.e22 - &g_mu) - &l.e12 * &l.e21)
}

/// 2x2 matrix with entries free of `l`.
pub type CoeffMatrix = [[CoeffPoly; 2]; 2];

pub fn coeff_identity(vars: &Arc<VarTable>) -> CoeffMatrix {
    let (o, z) = (CoeffPoly::one(vars), CoeffPoly::zero(vars));
    [[o.clone(), z.clone()], [z, o]]
}

pub fn coeff_zero(vars: &Arc<VarTable>) -> CoeffMatrix {
    let z = CoeffPoly::zero(vars);
    [[z.clone(), z.clone()], [z.clone(), z]]
}

fn lift(m: &CoeffMatrix) -> LaxMatrix {
    let s = |c: &CoeffPoly| SpectralPoly::constant(c.clone());
    LaxMatrix::new(s(&m[0][0]), s(&m[0][1]), s(&m[1][0]), s(&m[1][1]))
}

/// Inverse of `omega`, provided its determinant is a unit.
pub fn coeff_inverse(omega: &CoeffMatrix) -> Result<CoeffMatrix> {
    let det = &omega[0][0] * &omega[1][1] - &omega[0][1] * &omega[1][0];
    let inv = det
        .unit_inverse()
        .ok_or_else(|| Error::NotInvertible(format!("gauge determinant {det} is not a unit")))?;
    Ok([
        [&omega[1][1] * &inv, -(&omega[0][1] * &inv)],
        [-(&omega[1][0] * &inv), &omega[0][0] * &inv],
    ])
}

/// `L' = Omega L Omega^{-1}`, `U' = Omega U Omega^{-1} + Omega_t Omega^{-1}`.
pub fn gauge_transform(
    l: &LaxMatrix,
    u: &LaxMatrix,
    omega: &CoeffMatrix,
    omega_t: &CoeffMatrix,
) -> Result<(LaxMatrix, LaxMatrix)> {
    let inv = lift(&coeff_inverse(omega)?);
    let om = lift(omega);
    let l2 = om.matmul(l).matmul(&inv);
    let u2 = om.matmul(u).matmul(&inv).add(&lift(omega_t).matmul(&inv));
    Ok((l2, u2))
}
