//! Printed example systems: three-dimensional flat coordinates, the
//! Henon-Heiles case in Cartesian coordinates, and a non-flat system written
//! directly in Viete coordinates.

use crate::algebra::{CoeffPoly, Rational, SpectralPoly};
use crate::benenti::{BenentiSpec, SigmaTerm, Viete};
use crate::error::{Error, Result};
use crate::lax::LaxMatrix;

pub type M2 = [[f64; 2]; 2];

pub const EXAMPLE_IDS: [&str; 7] = ["ex1", "ex2_g0", "ex2_g1", "ex2_g2", "ex3_g0", "ex3_gm1", "ex3_g1"];

/// Reference data in the coordinates it was written in.
#[derive(Clone, Copy)]
pub enum Printed {
    /// Exact matrices over `(q, p)`; `[L, U_1, .., U_n]` and `[H_1, .., H_n]`.
    Viete {
        matrices: fn(&Viete, Text) -> Vec<LaxMatrix>,
        hamiltonians: fn(&Viete) -> Vec<CoeffPoly>,
    },
    /// Closed-form numerics in other coordinates `(x, y)`.
    Flat {
        to_viete: fn(&[f64]) -> (Vec<f64>, Vec<f64>),
        matrices: fn(&[f64], f64, Text) -> Vec<M2>,
        hamiltonians: fn(&[f64]) -> Vec<f64>,
    },
}

/// Which reading of the reference matrices to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Text {
    /// Exactly as typeset, misprints included.
    Verbatim,
    /// With the entries listed in [`Fixture::errata`] repaired.
    Corrected,
}

/// A misprinted entry: matrix (`"L"`, `"U1"`, ...) and position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Erratum {
    pub matrix: &'static str,
    pub entry: &'static str,
    pub note: &'static str,
}

#[derive(Clone)]
pub struct Fixture {
    pub id: &'static str,
    pub spec: BenentiSpec,
    pub printed: Printed,
    pub errata: &'static [Erratum],
}

const SWAPPED_U12: [Erratum; 2] = [
    Erratum { matrix: "U1", entry: "e12", note: "exchanged with the (1,2) entry of U2" },
    Erratum { matrix: "U2", entry: "e12", note: "exchanged with the (1,2) entry of U1" },
];

const EX2_G2_ERRATA: &[Erratum] = &[
    Erratum { matrix: "L", entry: "e21", note: "constant term reads x1 y1^2 / 2 instead of x2^2 y1^2 / 4" },
    Erratum { matrix: "U2", entry: "e21", note: "leading term reads +l^3 instead of -l^3" },
];
const EX3_G0_ERRATA: &[Erratum] = &[
    SWAPPED_U12[0],
    SWAPPED_U12[1],
    Erratum { matrix: "U2", entry: "e21", note: "l^-1 coefficient lacks the factor q1 on (p1 + q1 p2)^2" },
];
const EX3_G1_ERRATA: &[Erratum] = &[
    SWAPPED_U12[0],
    SWAPPED_U12[1],
    Erratum { matrix: "U2", entry: "e11", note: "l^-2 coefficient reads q2 p2 / 2 instead of q1 p2 / 2" },
];

pub fn fixture(id: &str) -> Result<Fixture> {
    let sigma = |gamma, c| vec![SigmaTerm { gamma, coeff: Rational::integer(c) }];
    let flat = |matrices, to_viete, hamiltonians| Printed::Flat { to_viete, matrices, hamiltonians };
    let viete = |matrices| Printed::Viete { matrices, hamiltonians: ex3_h };
    let (id, n, m, r, sig, printed, errata): (&'static str, _, _, _, _, _, &'static [Erratum]) = match id {
        "ex1" => ("ex1", 3, 0, 0, sigma(5, 1), flat(ex1_g0, ex1_map, ex1_h), &[]),
        "ex2_g0" => ("ex2_g0", 2, 1, 0, sigma(4, -1), flat(ex2_g0, ex2_map, ex2_h), &[]),
        "ex2_g1" => ("ex2_g1", 2, 1, 1, sigma(4, -1), flat(ex2_g1, ex2_map, ex2_h), &[]),
        "ex2_g2" => ("ex2_g2", 2, 1, 2, sigma(4, -1), flat(ex2_g2, ex2_map, ex2_h), EX2_G2_ERRATA),
        "ex3_g0" => ("ex3_g0", 2, -1, 0, sigma(-2, 1), viete(ex3_g0), EX3_G0_ERRATA),
        "ex3_gm1" => ("ex3_gm1", 2, -1, -1, sigma(-2, 1), viete(ex3_gm1), &[]),
        "ex3_g1" => ("ex3_g1", 2, -1, 1, sigma(-2, 1), viete(ex3_g1), EX3_G1_ERRATA),
        other => return Err(Error::UnknownExample(other.to_string())),
    };
    Ok(Fixture { id, spec: BenentiSpec::new(n, m, r, sig)?, printed, errata })
}

// ---- example 1: n = 3, f = 1, sigma = l^5, flat coordinates

fn ex1_map(z: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let [x1, x2, x3, y1, y2, y3] = [z[0], z[1], z[2], z[3], z[4], z[5]];
    (
        vec![x1, x2 + 0.25 * x1 * x1, x3 + 0.5 * x1 * x2],
        vec![y1 - 0.5 * x1 * y2 + (0.25 * x1 * x1 - 0.5 * x2) * y3, y2 - 0.5 * x1 * y3, y3],
    )
}

fn ex1_h(z: &[f64]) -> Vec<f64> {
    let [x1, x2, x3, y1, y2, y3] = [z[0], z[1], z[2], z[3], z[4], z[5]];
    vec![
        0.5 * y2 * y2 + y1 * y3 + 0.5 * x1.powi(3) - 1.5 * x1 * x2 + x3,
        y1 * y2 + 0.5 * x1 * y2 * y2 - 0.5 * x3 * y3 * y3 + 0.5 * x1 * y1 * y3 - 0.5 * x2 * y2 * y3
            + 3.0 / 16.0 * x1.powi(4)
            - x1 * x3
            - x2 * x2,
        0.5 * y1 * y1 + 0.125 * x1 * x1 * y2 * y2 + 0.125 * x2 * x2 * y3 * y3 + 0.5 * x1 * y1 * y2 + 0.5 * x2 * y1 * y3
            - (0.25 * x1 * x2 + x3) * y2 * y3
            + 0.75 * x1 * x1 * x3
            + 0.375 * x1.powi(3) * x2
            - x2 * x3
            - 0.5 * x1 * x2 * x2,
    ]
}

fn traceless(a: f64, b: f64, c: f64) -> M2 {
    [[a, b], [c, -a]]
}

fn ex1_g0(z: &[f64], l: f64, _: Text) -> Vec<M2> {
    let [x1, x2, x3, y1, y2, y3] = [z[0], z[1], z[2], z[3], z[4], z[5]];
    let v = -y3 * l * l - (y2 + 0.5 * x1 * y3) * l - y1 - 0.5 * x1 * y2 - 0.5 * x2 * y3;
    let u = l.powi(3) + x1 * l * l + (0.25 * x1 * x1 + x2) * l + x3 + 0.5 * x1 * x2;
    let w = 2.0 * l * l - (y3 * y3 + 2.0 * x1) * l - 2.0 * y2 * y3 + 1.5 * x1 * x1 - 2.0 * x2;
    vec![
        traceless(v, u, w),
        traceless(0.0, 0.5, 0.0),
        traceless(-0.5 * y3, 0.5 * l + 0.5 * x1, 1.0),
        traceless(
            -0.5 * y3 * l - 0.5 * y2 - 0.25 * x1 * y3,
            0.5 * l * l + 0.5 * x1 * l + 0.125 * x1 * x1 + 0.5 * x2,
            l - 0.5 * y3 * y3 - x1,
        ),
    ]
}

// ---- example 2: n = 2, f = l, sigma = -l^4, Cartesian coordinates

fn ex2_map(z: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let [x1, x2, y1, y2] = [z[0], z[1], z[2], z[3]];
    (vec![-x1, -0.25 * x2 * x2], vec![-y1, -2.0 * y2 / x2])
}

fn ex2_h(z: &[f64]) -> Vec<f64> {
    let [x1, x2, y1, y2] = [z[0], z[1], z[2], z[3]];
    vec![
        0.5 * y1 * y1 + 0.5 * y2 * y2 + x1.powi(3) + 0.5 * x1 * x2 * x2,
        0.5 * x2 * y1 * y2 - 0.5 * x1 * y2 * y2 + 0.25 * x1 * x1 * x2 * x2 + x2.powi(4) / 16.0,
    ]
}

fn ex2_u(z: &[f64], l: f64) -> f64 {
    l * l - z[0] * l - 0.25 * z[1] * z[1]
}

fn ex2_g0(z: &[f64], l: f64, _: Text) -> Vec<M2> {
    let [x1, x2, y1, y2] = [z[0], z[1], z[2], z[3]];
    let s = y2 / x2;
    let v = 2.0 * s * l + y1 - 2.0 * x1 * s;
    let w = -2.0 * l - (4.0 * s * s + 2.0 * x1) + (4.0 * x1 * s * s - 4.0 * y1 * s - 2.0 * x1 * x1 - 0.5 * x2 * x2) / l;
    vec![
        traceless(v, ex2_u(z, l), w),
        traceless(s, 0.5 * l, -1.0),
        traceless(s * l - x1 * s + 0.5 * y1, 0.5 * l * l - 0.5 * x1 * l, -l - 2.0 * s * s - x1),
    ]
}

fn ex2_g1(z: &[f64], l: f64, _: Text) -> Vec<M2> {
    let [x1, x2, y1, y2] = [z[0], z[1], z[2], z[3]];
    let v = y1 * l + 0.5 * x2 * y2;
    let w = -2.0 * l.powi(3) - 2.0 * x1 * l * l - (2.0 * x1 * x1 + 0.5 * x2 * x2) * l + y2 * y2;
    vec![
        traceless(v, ex2_u(z, l), w),
        traceless(0.0, 0.5, -l - 2.0 * x1),
        traceless(0.5 * y1, 0.5 * l - 0.5 * x1, -l * l - x1 * l - x1 * x1 - 0.5 * x2 * x2),
    ]
}

fn ex2_g2(z: &[f64], l: f64, text: Text) -> Vec<M2> {
    let [x1, x2, y1, y2] = [z[0], z[1], z[2], z[3]];
    let v = (x1 * y1 + 0.5 * x2 * y2) * l + 0.25 * x2 * x2 * y1;
    let w = -2.0 * l.powi(5) - 2.0 * x1 * l.powi(4) - (2.0 * x1 * x1 + 0.5 * x2 * x2) * l.powi(3)
        + (y1 * y1 + y2 * y2) * l * l
        + y1 * (x1 * y1 + x2 * y2) * l
        + match text {
            Text::Verbatim => 0.5 * x1 * y1 * y1,
            Text::Corrected => 0.25 * x2 * x2 * y1 * y1,
        };
    let lead = match text {
        Text::Verbatim => 1.0,
        Text::Corrected => -1.0,
    };
    vec![
        traceless(v, ex2_u(z, l), w),
        traceless(
            -0.5 * y1 / l,
            0.5 / l,
            -l * l - 2.0 * x1 * l - (3.0 * x1 * x1 + 0.5 * x2 * x2) - 0.5 * y1 * y1 / l,
        ),
        traceless(
            0.5 * x1 * y1 / l,
            0.5 - 0.5 * x1 / l,
            lead * l.powi(3) - x1 * l * l - (x1 * x1 + 0.5 * x2 * x2) * l + 0.5 * (y1 * y1 + y2 * y2 - x1 * x2 * x2)
                + 0.5 * x1 * y1 * y1 / l,
        ),
    ]
}

// ---- example 3: n = 2, f = 1/l, sigma = l^-2, written in Viete coordinates

struct Ex3 {
    q1: CoeffPoly,
    q2: CoeffPoly,
    p1: CoeffPoly,
    p2: CoeffPoly,
    /// `p_1 + q_1 p_2`
    pp: CoeffPoly,
    /// `1 / q_2`
    iq: CoeffPoly,
    one: CoeffPoly,
}

impl Ex3 {
    fn new(v: &Viete) -> Self {
        let (q1, q2, p1, p2) = (v.q(1), v.q(2), v.p(1), v.p(2));
        let pp = &p1 + &(&q1 * &p2);
        Ex3 { q1, q2, p1, p2, pp, iq: v.qn_pow(-1), one: CoeffPoly::one(v.vars()) }
    }

    fn c(&self, num: i64, den: i64) -> CoeffPoly {
        self.one.scale(&Rational::new(num, den))
    }

    fn iq(&self, k: u32) -> CoeffPoly {
        self.iq.pow(k)
    }

    fn lam(&self, terms: Vec<(i32, CoeffPoly)>) -> SpectralPoly {
        SpectralPoly::from_coeffs(self.one.vars(), terms).expect("single variable table")
    }

    fn u(&self) -> SpectralPoly {
        self.lam(vec![(2, self.one.clone()), (1, self.q1.clone()), (0, self.q2.clone())])
    }

    fn traceless(&self, a: SpectralPoly, b: SpectralPoly, c: SpectralPoly) -> LaxMatrix {
        LaxMatrix::traceless(a, b, c)
    }
}

fn ex3_h(v: &Viete) -> Vec<CoeffPoly> {
    let e = Ex3::new(v);
    let (q1, p1, p2, iq) = (&e.q1, &e.p1, &e.p2, &e.iq);
    let h = e.c(1, 2);
    let one_minus = &e.one - &(q1 * q1 * iq);
    let h1 = -(&h * &(p1 * p1 * iq)) - q1 * p1 * p2 * iq + &h * &one_minus * p2 * p2 - q1 * &e.iq(2);
    let h2 = -(&h * &(q1 * p1 * p1 * iq)) + &one_minus * p1 * p2 + (q1 - &(&h * &(q1 * q1 * q1 * iq))) * p2 * p2
        + iq
        - q1 * q1 * &e.iq(2);
    vec![h1, h2]
}

fn ex3_g0(v: &Viete, text: Text) -> Vec<LaxMatrix> {
    let e = Ex3::new(v);
    let (q1, p2, pp, iq) = (&e.q1, &e.p2, &e.pp, &e.iq);
    let h = e.c(1, 2);
    let l = e.traceless(
        e.lam(vec![(1, -p2), (0, -pp)]),
        e.u(),
        e.lam(vec![(0, -(pp * pp * iq) - &e.c(2, 1) * q1 * &e.iq(2)), (-1, &e.c(2, 1) * iq)]),
    );
    let mut u1_12 = e.lam(vec![(0, h.clone()), (-1, &h * q1)]);
    let mut u2_12 = e.lam(vec![(-1, h.clone())]);
    let u2_21 = match text {
        Text::Verbatim => pp * pp - e.c(2, 1),
        Text::Corrected => q1 * pp * pp - e.c(2, 1),
    };
    if text == Text::Corrected {
        std::mem::swap(&mut u1_12, &mut u2_12);
    }
    let u1 = e.traceless(
        e.lam(vec![(-1, -(&h * pp * iq))]),
        u1_12,
        e.lam(vec![(-1, -(&h * pp * pp * &e.iq(2) + &e.c(2, 1) * q1 * &e.iq(3))), (-2, e.iq(2))]),
    );
    let u2 = e.traceless(
        e.lam(vec![(-1, -(&h * q1 * pp * iq))]),
        u2_12,
        e.lam(vec![
            (-1, -(&h * &u2_21 * &e.iq(2) + &e.c(2, 1) * q1 * q1 * &e.iq(3))),
            (-2, q1 * &e.iq(2)),
        ]),
    );
    vec![l, u1, u2]
}

fn ex3_gm1(v: &Viete, _: Text) -> Vec<LaxMatrix> {
    let e = Ex3::new(v);
    let (q1, p1, p2, pp, iq) = (&e.q1, &e.p1, &e.p2, &e.pp, &e.iq);
    let h = e.c(1, 2);
    let two = e.c(2, 1);
    let l = e.traceless(
        e.lam(vec![(1, pp * iq), (0, q1 * pp * iq - p2)]),
        e.u(),
        e.lam(vec![
            (0, -(pp * pp * &e.iq(2))),
            (-1, -(q1 * pp * pp * &e.iq(2) - &two * &(p1 * p2 + q1 * p2 * p2) * iq)),
            (-2, -(&two * q1 * &e.iq(2))),
            (-3, &two * iq),
        ]),
    );
    let u1 = e.traceless(
        SpectralPoly::zero(v.vars()),
        e.lam(vec![(0, h.clone())]),
        e.lam(vec![
            (
                -1,
                (p1 * p2 + q1 * p2 * p2) * &e.iq(2) - &h * &(q1 * pp * pp + two.clone()) * &e.iq(3)
                    + &two * q1 * q1 * &e.iq(4),
            ),
            (-2, -(&two * q1 * &e.iq(3))),
            (-3, e.iq(2)),
        ]),
    );
    let u2 = e.traceless(
        e.lam(vec![(0, &h * pp * iq)]),
        e.lam(vec![(1, h.clone()), (0, &h * q1)]),
        e.lam(vec![
            (
                -1,
                q1 * p2 * pp * &e.iq(2) - &h * &(q1 * q1 * pp * pp + e.c(6, 1) * q1) * &e.iq(3)
                    + &two * q1 * q1 * q1 * &e.iq(4),
            ),
            (-2, e.iq(2) - &two * q1 * q1 * &e.iq(3)),
            (-3, q1 * &e.iq(2)),
        ]),
    );
    vec![l, u1, u2]
}

fn ex3_g1(v: &Viete, text: Text) -> Vec<LaxMatrix> {
    let e = Ex3::new(v);
    let (q1, q2, p1, p2, pp, iq) = (&e.q1, &e.q2, &e.p1, &e.p2, &e.pp, &e.iq);
    let h = e.c(1, 2);
    let two = e.c(2, 1);
    let l = e.traceless(
        e.lam(vec![(1, -p1), (0, q2 * p2)]),
        e.u(),
        e.lam(vec![
            (2, -(pp * pp * iq - p2 * p2 + &two * q1 * &e.iq(2))),
            (1, &two * p1 * p2 + q1 * p2 * p2 + &two * iq),
            (0, -(q2 * p2 * p2)),
        ]),
    );
    let mut u1_12 = e.lam(vec![(-2, &h * q1), (-1, h.clone())]);
    let mut u2_12 = e.lam(vec![(-2, h.clone())]);
    let u2_11 = match text {
        Text::Verbatim => &h * q2 * p2,
        Text::Corrected => &h * q1 * p2,
    };
    if text == Text::Corrected {
        std::mem::swap(&mut u1_12, &mut u2_12);
    }
    let u1 = e.traceless(
        e.lam(vec![(-2, &h * p2), (-1, -(&h * pp * iq))]),
        u1_12,
        e.lam(vec![(-1, (p1 * p2 + q1 * p2 * p2) * iq + e.iq(2)), (-2, -(&h * p2 * p2))]),
    );
    let inner = q1 * p1 - q2 * p2 + q1 * q1 * p2;
    let u2 = e.traceless(
        e.lam(vec![(-2, u2_11), (-1, -(&h * &inner * iq))]),
        u2_12,
        e.lam(vec![
            (-1, &h * p2 * &(&two * q1 * p1 + &two * q1 * q1 * p2 - q2 * p2) * iq + q1 * &e.iq(2)),
            (-2, -(&h * q1 * p2 * p2)),
        ]),
    );
    vec![l, u1, u2]
}
