use laxforge::algebra::{CoeffPoly, Gradient, Rational, SpectralPoly};
use laxforge::lax::{coeff_identity, coeff_inverse, coeff_zero, gauge_transform, u_poly, v_poly, w_poly, CoeffMatrix};
use laxforge::verify::{self, sampling};
use laxforge::{lax_l, lax_u, spectral_det, BenentiSpec, Error, LaxMatrix, LaxSystem, SeparationPoint, Viete};
use proptest::prelude::*;

fn monomial(n: usize, m: i32, r: i32, gamma: i32) -> BenentiSpec {
    BenentiSpec::monomial(n, m, r, gamma).unwrap()
}

fn lam(v: &Viete, terms: Vec<(i32, CoeffPoly)>) -> SpectralPoly {
    SpectralPoly::from_coeffs(v.vars(), terms).unwrap()
}

fn c(v: &Viete, num: i64, den: i64) -> CoeffPoly {
    v.constant(Rational::new(num, den))
}

#[test]
fn u_and_v_examples() {
    let v = Viete::new(2);
    let one = c(&v, 1, 1);
    assert_eq!(u_poly(2), lam(&v, vec![(2, one.clone()), (1, v.q(1)), (0, v.q(2))]));
    let v3 = Viete::new(3);
    assert_eq!(u_poly(3), lam(&v3, vec![(3, c(&v3, 1, 1)), (2, v3.q(1)), (1, v3.q(2)), (0, v3.q(3))]));

    let pp = &v.p(1) + &(&v.q(1) * &v.p(2));
    assert_eq!(v_poly(2, 0), lam(&v, vec![(1, -v.p(2)), (0, -pp)]));
    assert_eq!(v_poly(2, 1), lam(&v, vec![(1, -v.p(1)), (0, &v.q(2) * &v.p(2))]));
    let v1 = Viete::new(1);
    assert_eq!(v_poly(1, 0), lam(&v1, vec![(0, -v1.p(1))]));
}

#[test]
fn w_examples() {
    let v1 = Viete::new(1);
    assert_eq!(w_poly(&monomial(1, 0, 0, 1)).unwrap().w, lam(&v1, vec![(0, c(&v1, 2, 1))]));

    let v = Viete::new(2);
    let (q1, q2) = (v.q(1), v.q(2));
    let iq = v.qn_pow(-1);
    let pp = &v.p(1) + &(&q1 * &v.p(2));
    let expected = lam(
        &v,
        vec![
            (0, -(&(&pp * &pp) * &iq) - (&q1 * &v.qn_pow(-2)).scale(&Rational::integer(2))),
            (-1, iq.scale(&Rational::integer(2))),
        ],
    );
    let w = w_poly(&monomial(2, -1, 0, -2)).unwrap();
    assert_eq!(w.w, expected);
    assert_eq!(&w.kinetic + &w.potential, w.w);
    let _ = q2;
}

/// Example 2 with `g = l` in Cartesian coordinates `(x, y)`.
#[test]
fn w_matches_cartesian_form() {
    let spec = BenentiSpec::new(2, 1, 1, vec![laxforge::SigmaTerm { gamma: 4, coeff: Rational::integer(-1) }]).unwrap();
    let sys = LaxSystem::build(&spec).unwrap();
    let mut rng = sampling::rng(2);
    for _ in 0..10 {
        let z = sampling::coordinates(&mut rng, 4);
        let l = sampling::coordinate(&mut rng);
        let (x1, x2, y1, y2) = (z[0], z[1], z[2], z[3]);
        let q = [-x1, -0.25 * x2 * x2];
        let p = [-y1, -2.0 * y2 / x2];
        let got = sys.w.w.eval(&sys.viete.point(&q, &p, 0.0), l).unwrap();
        let want = -2.0 * l.powi(3) - 2.0 * x1 * l * l - (2.0 * x1 * x1 + 0.5 * x2 * x2) * l + y2 * y2;
        assert!(verify::deviation(got, want) <= 1e-9, "{got} vs {want}");
    }
}

#[test]
fn one_degree_of_freedom_pair() {
    let spec = monomial(1, 0, 0, 1);
    let v = Viete::new(1);
    let l = lax_l(&spec).unwrap();
    let expected = LaxMatrix::traceless(
        lam(&v, vec![(0, -v.p(1))]),
        lam(&v, vec![(1, c(&v, 1, 1)), (0, v.q(1))]),
        lam(&v, vec![(0, c(&v, 2, 1))]),
    );
    assert_eq!(l, expected);

    let half = LaxMatrix::traceless(SpectralPoly::zero(v.vars()), lam(&v, vec![(0, c(&v, 1, 2))]), SpectralPoly::zero(v.vars()));
    // U_1 = [L / 2u]_+ is constant only while w is: sigma = l^2 gives
    // w = 2(l - q1) and sigma = l^-1 puts negative powers into w
    for gamma in 0..=1 {
        assert_eq!(lax_u(&monomial(1, 0, 0, gamma), 1).unwrap(), half);
    }
    for gamma in [-1, 2] {
        assert!(!lax_u(&monomial(1, 0, 0, gamma), 1).unwrap().e21.is_zero());
    }
    assert_eq!(lax_u(&spec, 2), Err(Error::IndexOutOfRange { index: 2, n: 1 }));

    // mu^2 - p1^2 - 2 l - 2 q1
    let mu = v.mu();
    let det = lam(
        &v,
        vec![(1, c(&v, -2, 1)), (0, &mu * &mu - &v.p(1) * &v.p(1) - v.q(1).scale(&Rational::integer(2)))],
    );
    assert_eq!(spectral_det(&l, 0).unwrap(), det);
}

#[test]
fn first_flat_example_u1() {
    let u1 = lax_u(&monomial(3, 0, 0, 5), 1).unwrap();
    let v = Viete::new(3);
    let zero = SpectralPoly::zero(v.vars());
    assert_eq!(u1, LaxMatrix::traceless(zero.clone(), lam(&v, vec![(0, c(&v, 1, 2))]), zero));
}

#[test]
fn matrix_invariants_on_the_small_grid() {
    for spec in verify::small_grid() {
        let sys = LaxSystem::build(&spec).unwrap();
        let n = spec.n;
        assert!(sys.l.trace().is_zero(), "{spec}");
        assert_eq!(sys.l.e12.monic_degree(), Some(n), "{spec}");
        assert_eq!(sys.l.e12.coeff(0), sys.viete.q(n));
        for k in 1..=n {
            let u = sys.u_matrix(k).unwrap();
            assert!(u.trace().is_zero(), "{spec} U{k}");
            // closed form of [u / l^(n-k+1)]_+ against a division
            let (plus, _) = sys.u.divmod(&SpectralPoly::lambda_pow(sys.vars(), (n - k + 1) as i32)).unwrap();
            assert_eq!(sys.t_poly(k), plus, "{spec} t{k}");
        }
        // no term linear in mu
        let det = spectral_det(&sys.l, spec.r).unwrap();
        let mu = sys.viete.mu_index();
        for (_, coeff) in det.coeffs() {
            assert!(coeff.terms().all(|(m, _)| m.exps()[mu] != 1), "{spec}");
        }
    }
}

#[test]
fn spectral_determinant_of_the_nonflat_example() {
    let spec = monomial(2, -1, 0, -2);
    let sys = LaxSystem::build(&spec).unwrap();
    let v = &sys.viete;
    let (h1, h2) = (sys.hamiltonians.get(1), sys.hamiltonians.get(2));
    let mu = v.mu();
    // 2 l (-H1 l - H2 + mu^2 / (2l) - l^-2)
    let expected = lam(v, vec![(2, -h1.scale(&Rational::integer(2))), (1, -h2.scale(&Rational::integer(2))), (0, &mu * &mu), (-1, c(v, -2, 1))]);
    assert_eq!(spectral_det(&sys.l, 0).unwrap(), expected);
}

proptest! {
    /// `v` through the Viete map is the interpolation
    /// `sum_i g(l_i) mu_i prod_{k != i} (l - l_k) / (l_i - l_k)`.
    #[test]
    fn v_interpolates_the_momenta(n in 1..=4usize, r in -1..=2i32, seed in any::<u64>()) {
        let v = v_poly(n, r);
        let viete = Viete::new(n);
        let mut rng = sampling::rng(seed);
        let pt: SeparationPoint = sampling::separation_point(&mut rng, n);
        let (q, p) = laxforge::benenti::viete_map(&pt);
        let x = viete.point(&q, &p, 0.0);
        let l = sampling::coordinate(&mut rng);
        let mut want = 0.0;
        let mut scale = 0.0;
        for i in 0..n {
            let basis: f64 = (0..n).filter(|&k| k != i).map(|k| (l - pt.lambdas[k]) / (pt.lambdas[i] - pt.lambdas[k])).product();
            let term = pt.lambdas[i].powi(r) * pt.mus[i] * basis;
            want += term;
            scale += term.abs();
        }
        let got = v.eval(&x, l).unwrap();
        prop_assert!((got - want).abs() <= 1e-9 * scale.max(1.0), "{} vs {}", got, want);
    }
}

fn diag(v: &Viete, a: CoeffPoly, d: CoeffPoly) -> CoeffMatrix {
    [[a, CoeffPoly::zero(v.vars())], [CoeffPoly::zero(v.vars()), d]]
}

#[test]
fn gauge_examples() {
    let spec = monomial(2, -1, 0, -2);
    let sys = LaxSystem::build(&spec).unwrap();
    let v = &sys.viete;
    let u1 = sys.u_matrix(1).unwrap();

    let (l2, u2) = gauge_transform(&sys.l, &u1, &coeff_identity(v.vars()), &coeff_zero(v.vars())).unwrap();
    assert_eq!((l2, u2), (sys.l.clone(), u1.clone()));

    let k = Rational::new(-3, 2);
    let omega = diag(v, v.constant(k.clone()), v.constant(k.recip().unwrap()));
    let (l2, _) = gauge_transform(&sys.l, &u1, &omega, &coeff_zero(v.vars())).unwrap();
    let k2 = &k * &k;
    let expected = LaxMatrix::traceless(sys.l.e11.clone(), sys.l.e12.scale(&k2), sys.l.e21.scale(&k2.recip().unwrap()));
    assert_eq!(l2, expected);
    assert_eq!(spectral_det(&l2, 0).unwrap(), spectral_det(&sys.l, 0).unwrap());

    // rational upper-triangular
    let omega = [[c(v, 2, 3), c(v, -5, 4)], [CoeffPoly::zero(v.vars()), c(v, 7, 1)]];
    let (l2, _) = gauge_transform(&sys.l, &u1, &omega, &coeff_zero(v.vars())).unwrap();
    assert_eq!(spectral_det(&l2, 0).unwrap(), spectral_det(&sys.l, 0).unwrap());

    let singular = diag(v, v.q(1), c(v, 1, 1));
    assert!(matches!(coeff_inverse(&singular), Err(Error::NotInvertible(_))));
    assert!(gauge_transform(&sys.l, &u1, &singular, &coeff_zero(v.vars())).is_err());
}

/// With `Omega` depending on phase space and `Omega_t = {Omega, H_k}`, the
/// gauged pair satisfies the same Lax equation.
#[test]
fn gauge_preserves_the_lax_equation() {
    let mut rng = sampling::rng(17);
    for spec in [monomial(2, -1, 0, -2), monomial(2, 1, 1, 4), monomial(3, 0, 0, 5), monomial(3, -1, 2, -2)] {
        let sys = LaxSystem::build(&spec).unwrap();
        for k in 1..=spec.n {
            let (omega, _) = sampling::gauge(&mut rng, &sys.viete);
            let grad = Gradient::new(sys.hamiltonians.get(k)).unwrap();
            let omega_t = omega.clone().map(|row| row.map(|e| grad.bracket(&e)));
            let (l2, u2) = gauge_transform(&sys.l, &sys.u_matrix(k).unwrap(), &omega, &omega_t).unwrap();
            let report = verify::check_lax_equation_with(&spec, k, &l2, &u2, sys.hamiltonians.get(k));
            assert!(report.passed(), "{spec} k={k}: {:?}", report.witness);
            // dropping the time derivative of a shear is caught
            let shear = [[c(&sys.viete, 1, 1), sys.viete.q(1)], [CoeffPoly::zero(sys.vars()), c(&sys.viete, 1, 1)]];
            let (l3, u3) = gauge_transform(&sys.l, &sys.u_matrix(k).unwrap(), &shear, &coeff_zero(sys.vars())).unwrap();
            let broken = verify::check_lax_equation_with(&spec, k, &l3, &u3, sys.hamiltonians.get(k));
            assert!(!broken.passed(), "{spec} k={k}");
        }
    }
}

#[test]
fn random_gauges_preserve_the_curve() {
    for spec in verify::grid([1, 2, 3], &[-1, 1], &[0, 2]).into_iter().step_by(3) {
        let sys = LaxSystem::build(&spec).unwrap();
        let report = verify::check_gauge_invariance(&sys, 99, 5).unwrap();
        assert!(report.passed(), "{spec}");
    }
}

#[test]
fn remainder_and_bracket_lemmas_for_three_degrees_of_freedom() {
    for spec in verify::grid(1..=3, &[-2, 0, 2], &[-1, 0, 2]) {
        let sys = LaxSystem::build(&spec).unwrap();
        assert!(verify::check_remainder_identity(&sys).passed(), "{spec}");
        assert!(verify::check_bracket_symmetry(&sys).passed(), "{spec}");
    }
}

#[test]
fn lax_matrix_json_round_trip() {
    let sys = LaxSystem::build(&monomial(3, -1, 1, -3)).unwrap();
    for m in std::iter::once(sys.l.clone()).chain((1..=3).map(|k| sys.u_matrix(k).unwrap())) {
        let text = serde_json::to_string(&m).unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(["e11", "e12", "e21", "e22"].iter().all(|k| value.get(k).is_some()));
        let back = LaxMatrix::from_json(sys.vars(), &value).unwrap();
        assert_eq!(back, m);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}
