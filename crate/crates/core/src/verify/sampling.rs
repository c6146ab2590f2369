//! Seeded random inputs. Every coordinate is drawn from `[-2, -0.5] U [0.5, 2]`,
//! which keeps clear of `q_n = 0` and `l = 0`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{CoeffPoly, Rational, SpectralPoly};
use crate::benenti::{SeparationPoint, SigmaTerm, Viete};
use crate::lax::CoeffMatrix;

pub type SampleRng = ChaCha8Rng;

/// Separation coordinates closer than this are resampled.
pub const MIN_SEPARATION: f64 = 0.1;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn coordinate(rng: &mut SampleRng) -> f64 {
    let magnitude = rng.gen_range(0.5..=2.0);
    if rng.gen_bool(0.5) {
        magnitude
    } else {
        -magnitude
    }
}

pub fn coordinates(rng: &mut SampleRng, len: usize) -> Vec<f64> {
    (0..len).map(|_| coordinate(rng)).collect()
}

pub fn separation_point(rng: &mut SampleRng, n: usize) -> SeparationPoint {
    let mut lambdas: Vec<f64> = Vec::with_capacity(n);
    while lambdas.len() < n {
        let l = coordinate(rng);
        if lambdas.iter().all(|x| (x - l).abs() >= MIN_SEPARATION) {
            lambdas.push(l);
        }
    }
    let mus = coordinates(rng, n);
    SeparationPoint::new(lambdas, mus).expect("distinct by construction")
}

/// Small nonzero rational `a/b` with `|a| <= 5`, `1 <= b <= 4`.
pub fn rational(rng: &mut SampleRng) -> Rational {
    let num = *[-5, -4, -3, -2, -1, 1, 2, 3, 4, 5].choose(rng).unwrap();
    Rational::new(num, rng.gen_range(1..=4))
}

/// Two to four distinct exponents in `[-3, n+3]` with random coefficients.
pub fn sigma(rng: &mut SampleRng, n: usize) -> Vec<SigmaTerm> {
    let mut gammas: Vec<i32> = (-3..=n as i32 + 3).collect();
    gammas.shuffle(rng);
    let count = rng.gen_range(2..=4);
    let mut terms: Vec<SigmaTerm> =
        gammas[..count].iter().map(|&gamma| SigmaTerm { gamma, coeff: rational(rng) }).collect();
    terms.sort_by_key(|t| t.gamma);
    terms
}

/// Random `c_0 + c_1 x` with `x` one of `1, q_i, p_i`.
pub fn coeff_poly(rng: &mut SampleRng, viete: &Viete) -> CoeffPoly {
    let n = viete.n();
    let x = match rng.gen_range(0..=2 * n) {
        0 => CoeffPoly::one(viete.vars()),
        i if i <= n => viete.q(i),
        i => viete.p(i - n),
    };
    CoeffPoly::constant(viete.vars(), rational(rng)) + x.scale(&rational(rng))
}

/// Upper-triangular gauge with unit determinant factors `c q_n^k` on the
/// diagonal, plus an arbitrary time derivative.
pub fn gauge(rng: &mut SampleRng, viete: &Viete) -> (CoeffMatrix, CoeffMatrix) {
    let mut diag = || viete.qn_pow(rng.gen_range(-1..=1)).scale(&rational(rng));
    let (a, d) = (diag(), diag());
    let omega = [[a, coeff_poly(rng, viete)], [CoeffPoly::zero(viete.vars()), d]];
    let omega_t = [
        [coeff_poly(rng, viete), coeff_poly(rng, viete)],
        [coeff_poly(rng, viete), coeff_poly(rng, viete)],
    ];
    (omega, omega_t)
}

/// Random Laurent polynomial in `l` with exponents in `[-4, 6]` whose
/// coefficients may carry `q_n^-1`.
pub fn dividend(rng: &mut SampleRng, viete: &Viete) -> SpectralPoly {
    let terms: Vec<(i32, CoeffPoly)> = (0..rng.gen_range(1..=5))
        .map(|_| {
            let c = coeff_poly(rng, viete) * coeff_poly(rng, viete) * viete.qn_pow(rng.gen_range(-1..=1));
            (rng.gen_range(-4..=6), c)
        })
        .collect();
    SpectralPoly::from_coeffs(viete.vars(), terms).expect("one variable table")
}

/// `l^n + a_1 l^(n-1) + ... + a_(n-1) l + c q_n`, monic with a unit constant term.
pub fn monic_divisor(rng: &mut SampleRng, viete: &Viete) -> SpectralPoly {
    let n = viete.n() as i32;
    let mut terms = vec![(n, CoeffPoly::one(viete.vars())), (0, viete.q(viete.n()).scale(&rational(rng)))];
    terms.extend((1..n).map(|e| (e, coeff_poly(rng, viete))));
    SpectralPoly::from_coeffs(viete.vars(), terms).expect("one variable table")
}
