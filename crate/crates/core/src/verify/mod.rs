//! Machine checks of the structural identities: involutivity, Lax equations,
//! spectral curve, comparison with the printed examples, and numeric
//! agreement with the separation-coordinate oracle.

pub mod fixtures;
pub mod sampling;
pub mod sim;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{CoeffPoly, Gradient, Rational, SpectralPoly};
use crate::benenti::{oracle_hamiltonians, viete_map, viete_map_exact, BenentiSpec, Viete};
use crate::error::{Error, Result};
use crate::lax::{gauge_transform, spectral_det, LaxMatrix, LaxSystem};

pub use fixtures::{fixture, Erratum, Fixture, Printed, Text, EXAMPLE_IDS};
pub use sim::{simulate, SimulationConfig, TrajectoryReport, DEFAULT_PROBES, HENON_HEILES_START};

/// Relative tolerance for numeric evaluation of exact identities.
pub const NUMERIC_TOLERANCE: f64 = 1e-9;
/// Absolute tolerance for integrated drift at `dt = 1e-3`.
pub const DRIFT_TOLERANCE: f64 = 1e-8;
/// Residuals listed in a failing witness.
const WITNESS_LIMIT: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub spec: BenentiSpec,
    pub status: Status,
    pub witness: Option<Value>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Passes iff no residual was collected.
    fn symbolic(check: impl Into<String>, spec: &BenentiSpec, residuals: Residuals) -> Self {
        let status = if residuals.is_empty() { Status::Pass } else { Status::Fail };
        let witness = (!residuals.is_empty()).then(|| residuals.into_witness());
        CheckReport { check: check.into(), spec: spec.clone(), status, witness }
    }

    fn numeric(check: impl Into<String>, spec: &BenentiSpec, deviation: f64, tolerance: f64, points: usize) -> Self {
        let ok = deviation <= tolerance;
        CheckReport {
            check: check.into(),
            spec: spec.clone(),
            status: if ok { Status::Pass } else { Status::Fail },
            witness: Some(json!({ "max_deviation": deviation, "tolerance": tolerance, "points": points })),
        }
    }
}

/// Nonzero residuals gathered during a symbolic check.
#[derive(Default)]
struct Residuals {
    count: usize,
    shown: Vec<Value>,
}

impl Residuals {
    fn is_empty(&self) -> bool {
        self.count == 0
    }

    fn push(&mut self, location: String, residual: Value) {
        self.count += 1;
        if self.shown.len() < WITNESS_LIMIT {
            self.shown.push(json!({ "at": location, "residual": residual }));
        }
    }

    fn coeff(&mut self, location: String, r: &CoeffPoly) {
        if !r.is_zero() {
            self.push(location, serde_json::to_value(r).expect("serializable"));
        }
    }

    fn spectral(&mut self, location: String, r: &SpectralPoly) {
        if !r.is_zero() {
            self.push(location, serde_json::to_value(r).expect("serializable"));
        }
    }

    fn matrix(&mut self, location: &str, r: &LaxMatrix) {
        for (name, e) in ["e11", "e12", "e21", "e22"].iter().zip(r.entries()) {
            self.spectral(format!("{location} {name}"), e);
        }
    }

    fn into_witness(self) -> Value {
        json!({ "nonzero": self.count, "residuals": self.shown })
    }
}

/// `|a - b| / max(|b|, 1)`.
pub fn deviation(a: f64, b: f64) -> f64 {
    let d = (a - b).abs() / b.abs().max(1.0);
    if d.is_nan() {
        f64::INFINITY
    } else {
        d
    }
}

// ---- symbolic checks

pub fn check_involution(spec: &BenentiSpec) -> CheckReport {
    let hs = crate::benenti::hamiltonians(spec);
    check_involution_of(spec, &hs.h)
}

/// All brackets `{H_i, H_j}`, `i < j`, of the given functions.
pub fn check_involution_of(spec: &BenentiSpec, hs: &[CoeffPoly]) -> CheckReport {
    let mut residuals = Residuals::default();
    for j in 1..hs.len() {
        let grad = Gradient::new(&hs[j]).expect("Viete tables carry pairs");
        for i in 0..j {
            residuals.coeff(format!("{{H{}, H{}}}", i + 1, j + 1), &grad.bracket(&hs[i]));
        }
    }
    CheckReport::symbolic("involution", spec, residuals)
}

pub fn check_lax_equation(spec: &BenentiSpec, k: usize) -> Result<CheckReport> {
    let sys = LaxSystem::build(spec)?;
    let u = sys.u_matrix(k)?;
    Ok(check_lax_equation_with(spec, k, &sys.l, &u, sys.hamiltonians.get(k)))
}

/// `{L, H_k} - [U_k, L]`, with `l` a passive parameter in the bracket.
pub fn check_lax_equation_with(spec: &BenentiSpec, k: usize, l: &LaxMatrix, u: &LaxMatrix, h: &CoeffPoly) -> CheckReport {
    let grad = Gradient::new(h).expect("Viete tables carry pairs");
    let flow = l.map(|e| grad.bracket_spectral(e));
    let residual = flow.sub(&u.commutator(l));
    let mut residuals = Residuals::default();
    residuals.matrix(&format!("k={k}"), &residual);
    CheckReport::symbolic(format!("lax_equation[k={k}]"), spec, residuals)
}

/// Lax equations for every `k`, building `U_k` from one shared system.
pub fn check_lax_equations(sys: &LaxSystem) -> Result<Vec<CheckReport>> {
    (1..=sys.spec.n)
        .map(|k| {
            let u = sys.u_matrix(k)?;
            Ok(check_lax_equation_with(&sys.spec, k, &sys.l, &u, sys.hamiltonians.get(k)))
        })
        .collect()
}

pub fn check_spectral_curve(spec: &BenentiSpec) -> Result<CheckReport> {
    Ok(check_spectral_curve_in(&LaxSystem::build(spec)?))
}

pub fn check_spectral_curve_in(sys: &LaxSystem) -> CheckReport {
    check_spectral_curve_with(sys, &sys.l, &sys.hamiltonians.h)
}

/// `det(L - l^r mu) - 2 l^(2r-m) (-sum H_k l^(n-k) + 1/2 l^m mu^2 - sigma)`.
pub fn check_spectral_curve_with(sys: &LaxSystem, l: &LaxMatrix, hs: &[CoeffPoly]) -> CheckReport {
    let spec = &sys.spec;
    let mut other = sys.clone();
    other.hamiltonians.h = hs.to_vec();
    let det = spectral_det(l, spec.r).expect("Viete tables carry mu");
    let mut residuals = Residuals::default();
    residuals.spectral("curve".into(), &(det - other.expected_spectral_det()));
    CheckReport::symbolic("spectral_curve", spec, residuals)
}

/// The remainder of `F(l, v/g)` modulo `u` equals `sum_k H_k l^(n-k)`.
pub fn check_remainder_identity(sys: &LaxSystem) -> CheckReport {
    let mut residuals = Residuals::default();
    residuals.spectral("remainder".into(), &(&sys.w.remainder - &sys.hamiltonian_poly()));
    CheckReport::symbolic("remainder_identity", &sys.spec, residuals)
}

/// `{u(l), v(l')} = {u(l'), v(l)}`, compared coefficient by coefficient.
pub fn check_bracket_symmetry(sys: &LaxSystem) -> CheckReport {
    let n = sys.spec.n as i32;
    let mut residuals = Residuals::default();
    let bracket = |a: i32, b: i32| crate::algebra::poisson(&sys.u.coeff(a), &sys.v.coeff(b)).expect("pairs");
    for a in 0..=n {
        for b in 0..a {
            residuals.coeff(format!("l^{a} l'^{b}"), &(bracket(a, b) - bracket(b, a)));
        }
    }
    CheckReport::symbolic("bracket_symmetry", &sys.spec, residuals)
}

/// `det(L' - g mu)` equals `det(L - g mu)` for random gauges `Omega`.
pub fn check_gauge_invariance(sys: &LaxSystem, seed: u64, count: usize) -> Result<CheckReport> {
    let mut rng = sampling::rng(seed);
    let det = spectral_det(&sys.l, sys.spec.r)?;
    let u1 = sys.u_matrix(1)?;
    let mut residuals = Residuals::default();
    for trial in 0..count {
        let (omega, omega_t) = sampling::gauge(&mut rng, &sys.viete);
        let (l2, _) = gauge_transform(&sys.l, &u1, &omega, &omega_t)?;
        residuals.spectral(format!("gauge #{trial}"), &(spectral_det(&l2, sys.spec.r)? - det.clone()));
    }
    Ok(CheckReport::symbolic("gauge_invariance", &sys.spec, residuals))
}

/// Rebuilds `U_1, U_2` for two degrees of freedom from
/// `U_k = (a_k b_k; c_k -a_k) / (2u)` with
/// `a_k = (f/g) t_k v + {u, H_k}`, `b_k = (f/g) t_k u`,
/// `c_k = (f/g) t_k w - 2 {v, H_k}`, `t_1 = 1`, `t_2 = l + q_1`.
pub fn check_n2_closed_form(spec: &BenentiSpec) -> Result<CheckReport> {
    if spec.n != 2 {
        return Err(Error::InvalidSpec(format!("closed forms need n = 2, got n = {}", spec.n)));
    }
    let sys = LaxSystem::build(spec)?;
    let half = Rational::new(1, 2);
    let mut residuals = Residuals::default();
    for k in 1..=2 {
        let grad = Gradient::new(sys.hamiltonians.get(k)).expect("pairs");
        let t = sys.t_poly(k).shift(spec.m - spec.r);
        let a = &t * &sys.v + grad.bracket_spectral(&sys.u);
        let b = &t * &sys.u;
        let c = &t * &sys.w.w - grad.bracket_spectral(&sys.v).scale(&Rational::integer(2));
        let mut divide = |name: &str, x: &SpectralPoly| -> Result<SpectralPoly> {
            let (q, rem) = x.divmod(&sys.u)?;
            residuals.spectral(format!("k={k} {name} mod u"), &rem);
            Ok(q.scale(&half))
        };
        let closed = LaxMatrix::traceless(divide("a", &a)?, divide("b", &b)?, divide("c", &c)?);
        residuals.matrix(&format!("k={k} U"), &closed.sub(&sys.u_matrix(k)?));
    }
    Ok(CheckReport::symbolic("n2_closed_form", spec, residuals))
}

/// `b = (b mod a) + a [b/a]_+` on random instances with `n <= 4`, the
/// remainder confined to exponents `[0, n)`, and dividing the remainder again
/// giving a zero quotient.
pub fn check_division(seed: u64, count: usize) -> Result<CheckReport> {
    use rand::Rng;
    let mut rng = sampling::rng(seed);
    let mut residuals = Residuals::default();
    let mut n_max = 0;
    for i in 0..count {
        let n = rng.gen_range(1..=4);
        n_max = n_max.max(n);
        let viete = Viete::new(n);
        let a = sampling::monic_divisor(&mut rng, &viete);
        let b = sampling::dividend(&mut rng, &viete);
        let (plus, rem) = b.divmod(&a)?;
        residuals.spectral(format!("#{i} identity"), &(&b - &(&rem + &(&a * &plus))));
        if rem.min_exp().is_some_and(|e| e < 0) || rem.max_exp().is_some_and(|e| e >= n as i32) {
            residuals.spectral(format!("#{i} remainder degree"), &rem);
        }
        let (plus2, rem2) = rem.divmod(&a)?;
        residuals.spectral(format!("#{i} quotient of remainder"), &plus2);
        residuals.spectral(format!("#{i} remainder of remainder"), &(&rem2 - &rem));
    }
    let spec = BenentiSpec::monomial(n_max.max(1), 0, 0, 0)?;
    Ok(CheckReport::symbolic(format!("division[{count} instances]"), &spec, residuals))
}

// ---- numeric checks

/// Random `(q, p, mu)` point for `n` degrees of freedom.
pub fn random_point(rng: &mut sampling::SampleRng, viete: &Viete) -> Vec<f64> {
    let q = sampling::coordinates(rng, viete.n());
    let p = sampling::coordinates(rng, viete.n());
    viete.point(&q, &p, sampling::coordinate(rng))
}

/// Symbolic Hamiltonians pulled back through the Viete map against the
/// Vandermonde solve.
pub fn check_oracle(sys: &LaxSystem, seed: u64, points: usize) -> Result<CheckReport> {
    let mut rng = sampling::rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..points {
        let pt = sampling::separation_point(&mut rng, sys.spec.n);
        let expected = oracle_hamiltonians(&sys.spec, &pt)?;
        let (q, p) = viete_map(&pt);
        let x = sys.viete.point(&q, &p, 0.0);
        let mut dev = 0.0f64;
        for (h, e) in sys.hamiltonians.h.iter().zip(&expected) {
            dev = dev.max(deviation(h.eval(&x)?, *e));
        }
        if dev > NUMERIC_TOLERANCE / 100.0 {
            // Sampled floats are exact dyadic rationals, so the composition
            // can be evaluated exactly and rounded once. The float Viete
            // momenta of close separation coordinates cancel badly.
            let exact = |xs: &[f64]| xs.iter().map(|&x| Rational::from_f64(x).expect("finite sample")).collect::<Vec<_>>();
            let (q, p) = viete_map_exact(&exact(&pt.lambdas), &exact(&pt.mus))?;
            let x: Vec<Rational> = q.into_iter().chain(p).chain([Rational::zero()]).collect();
            dev = 0.0;
            for (h, e) in sys.hamiltonians.h.iter().zip(&expected) {
                dev = dev.max(deviation(h.eval_exact(&x)?.to_f64(), *e));
            }
        }
        worst = worst.max(dev);
    }
    Ok(CheckReport::numeric("oracle", &sys.spec, worst, NUMERIC_TOLERANCE, points))
}

fn matmul(a: &[[f64; 2]; 2], b: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mut c = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

/// Floating-point versions of the spectral-curve and Lax identities at
/// random points, using evaluated matrices rather than symbolic products.
pub fn check_numeric_coherence(sys: &LaxSystem, seed: u64, points: usize) -> Result<CheckReport> {
    let mut rng = sampling::rng(seed);
    let spec = &sys.spec;
    let us = (1..=spec.n).map(|k| sys.u_matrix(k)).collect::<Result<Vec<_>>>()?;
    let flows: Vec<LaxMatrix> = sys
        .hamiltonians
        .h
        .iter()
        .map(|h| {
            let g = Gradient::new(h).expect("pairs");
            sys.l.map(|e| g.bracket_spectral(e))
        })
        .collect();
    let mut worst = 0.0f64;
    for _ in 0..points {
        let x = random_point(&mut rng, &sys.viete);
        let lam = sampling::coordinate(&mut rng);
        let mu = x[sys.viete.mu_index()];
        let l = sys.l.eval(&x, lam)?;
        let g = lam.powi(spec.r);
        let det = (l[0][0] - g * mu) * (l[1][1] - g * mu) - l[0][1] * l[1][0];
        let hsum: f64 = sys
            .hamiltonians
            .h
            .iter()
            .enumerate()
            .map(|(k, h)| Ok(h.eval(&x)? * lam.powi((spec.n - k - 1) as i32)))
            .sum::<Result<f64>>()?;
        let curve = 2.0 * lam.powi(2 * spec.r - spec.m) * (-hsum + 0.5 * lam.powi(spec.m) * mu * mu - spec.sigma_at(lam));
        worst = worst.max(deviation(det, curve));
        for (u, flow) in us.iter().zip(&flows) {
            let (u, f) = (u.eval(&x, lam)?, flow.eval(&x, lam)?);
            let (ul, lu) = (matmul(&u, &l), matmul(&l, &u));
            for i in 0..2 {
                for j in 0..2 {
                    worst = worst.max(deviation(f[i][j], ul[i][j] - lu[i][j]));
                }
            }
        }
    }
    Ok(CheckReport::numeric("numeric_coherence", spec, worst, NUMERIC_TOLERANCE, points))
}

/// Compares the engine with a reference example at random points (and
/// symbolically when the example is written in Viete coordinates), using the
/// corrected reading of misprinted entries.
pub fn check_fixture(id: &str, seed: u64, points: usize) -> Result<CheckReport> {
    check_fixture_text(id, seed, points, Text::Corrected)
}

pub fn check_fixture_text(id: &str, seed: u64, points: usize, text: Text) -> Result<CheckReport> {
    let fx = fixture(id)?;
    let sys = LaxSystem::build(&fx.spec)?;
    let n = fx.spec.n;
    let mut engine = vec![sys.l.clone()];
    for k in 1..=n {
        engine.push(sys.u_matrix(k)?);
    }
    let names: Vec<String> = std::iter::once("L".to_string()).chain((1..=n).map(|k| format!("U{k}"))).collect();
    let mut rng = sampling::rng(seed);
    let mut worst = 0.0f64;
    let mut residuals = Residuals::default();

    match fx.printed {
        Printed::Viete { matrices, hamiltonians } => {
            let printed = matrices(&sys.viete, text);
            let hs = hamiltonians(&sys.viete);
            for ((name, e), p) in names.iter().zip(&engine).zip(&printed) {
                residuals.matrix(name, &e.sub(p));
            }
            for (k, (e, p)) in sys.hamiltonians.h.iter().zip(&hs).enumerate() {
                residuals.coeff(format!("H{}", k + 1), &(e - p));
            }
            for _ in 0..points {
                let x = random_point(&mut rng, &sys.viete);
                let lam = sampling::coordinate(&mut rng);
                for (e, p) in engine.iter().zip(&printed) {
                    let (a, b) = (e.eval(&x, lam)?, p.eval(&x, lam)?);
                    for i in 0..2 {
                        for j in 0..2 {
                            worst = worst.max(deviation(a[i][j], b[i][j]));
                        }
                    }
                }
                for (e, p) in sys.hamiltonians.h.iter().zip(&hs) {
                    worst = worst.max(deviation(e.eval(&x)?, p.eval(&x)?));
                }
            }
        }
        Printed::Flat { to_viete, matrices, hamiltonians } => {
            for _ in 0..points {
                let z = sampling::coordinates(&mut rng, 2 * n);
                let lam = sampling::coordinate(&mut rng);
                let (q, p) = to_viete(&z);
                let x = sys.viete.point(&q, &p, 0.0);
                for (e, b) in engine.iter().zip(matrices(&z, lam, text)) {
                    let a = e.eval(&x, lam)?;
                    for i in 0..2 {
                        for j in 0..2 {
                            worst = worst.max(deviation(a[i][j], b[i][j]));
                        }
                    }
                }
                for (e, b) in sys.hamiltonians.h.iter().zip(hamiltonians(&z)) {
                    worst = worst.max(deviation(e.eval(&x)?, b));
                }
            }
        }
    }

    let name = match text {
        Text::Corrected => format!("fixture[{id}]"),
        Text::Verbatim => format!("fixture[{id}, verbatim]"),
    };
    let mut report = CheckReport::numeric(name, &fx.spec, worst, NUMERIC_TOLERANCE, points);
    if text == Text::Corrected && !fx.errata.is_empty() {
        let w = report.witness.get_or_insert(Value::Null);
        w["errata_corrected"] = json!(fx.errata.iter().map(|e| format!("{} {}: {}", e.matrix, e.entry, e.note)).collect::<Vec<_>>());
    }
    if !residuals.is_empty() {
        report.status = Status::Fail;
        let mut w = report.witness.take().unwrap_or(Value::Null);
        w["symbolic"] = residuals.into_witness();
        report.witness = Some(w);
    }
    Ok(report)
}

/// Tolerance for [`check_printed_consistency`] on coordinates where the flow
/// is obtained by finite differences.
pub const FINITE_DIFFERENCE_TOLERANCE: f64 = 1e-6;

/// Whether the reference matrices satisfy the Lax equations and the spectral
/// curve on their own, using only their printed `L`, `U_k` and `H_k`.
///
/// In Viete coordinates this is symbolic. In other coordinates the flow
/// `z' = J grad H_k` and `dL/dt` are taken by central differences, which
/// requires those coordinates to be canonical.
pub fn check_printed_consistency(id: &str, text: Text, seed: u64, points: usize) -> Result<CheckReport> {
    let fx = fixture(id)?;
    let spec = &fx.spec;
    let sys = LaxSystem::build(spec)?;
    let name = format!("printed_consistency[{id}, {}]", if text == Text::Verbatim { "verbatim" } else { "corrected" });
    match fx.printed {
        Printed::Viete { matrices, hamiltonians } => {
            let m = matrices(&sys.viete, text);
            let hs = hamiltonians(&sys.viete);
            let mut residuals = Residuals::default();
            for k in 1..=spec.n {
                let r = check_lax_equation_with(spec, k, &m[0], &m[k], &hs[k - 1]);
                if let Some(w) = r.witness {
                    residuals.push(format!("lax k={k}"), w);
                }
            }
            if let Some(w) = check_spectral_curve_with(&sys, &m[0], &hs).witness {
                residuals.push("curve".into(), w);
            }
            Ok(CheckReport::symbolic(name, spec, residuals))
        }
        Printed::Flat { matrices, hamiltonians, .. } => {
            let mut rng = sampling::rng(seed);
            let n = spec.n;
            let eps = 1e-4;
            let shifted = |z: &[f64], dir: &[f64], s: f64| -> Vec<f64> { z.iter().zip(dir).map(|(a, b)| a + s * b).collect() };
            let mut worst = 0.0f64;
            for _ in 0..points {
                let z = sampling::coordinates(&mut rng, 2 * n);
                let lam = sampling::coordinate(&mut rng);
                let mu = sampling::coordinate(&mut rng);
                let m = matrices(&z, lam, text);
                let hs = hamiltonians(&z);

                let l = &m[0];
                let g = lam.powi(spec.r);
                let det = (l[0][0] - g * mu) * (l[1][1] - g * mu) - l[0][1] * l[1][0];
                let hsum: f64 = hs.iter().enumerate().map(|(k, h)| h * lam.powi((n - k - 1) as i32)).sum();
                let curve = 2.0 * lam.powi(2 * spec.r - spec.m) * (-hsum + 0.5 * lam.powi(spec.m) * mu * mu - spec.sigma_at(lam));
                worst = worst.max(deviation(det, curve));

                for k in 1..=n {
                    let grad: Vec<f64> = (0..2 * n)
                        .map(|i| {
                            let mut e = vec![0.0; 2 * n];
                            e[i] = eps;
                            (hamiltonians(&shifted(&z, &e, 1.0))[k - 1] - hamiltonians(&shifted(&z, &e, -1.0))[k - 1]) / (2.0 * eps)
                        })
                        .collect();
                    // z' = (dH/dy, -dH/dx)
                    let vel: Vec<f64> = grad[n..].iter().copied().chain(grad[..n].iter().map(|d| -d)).collect();
                    let ahead = matrices(&shifted(&z, &vel, eps), lam, text);
                    let behind = matrices(&shifted(&z, &vel, -eps), lam, text);
                    let u = &m[k];
                    let (ul, lu) = (matmul(u, l), matmul(l, u));
                    for i in 0..2 {
                        for j in 0..2 {
                            let dl = (ahead[0][i][j] - behind[0][i][j]) / (2.0 * eps);
                            worst = worst.max(deviation(dl, ul[i][j] - lu[i][j]));
                        }
                    }
                }
            }
            Ok(CheckReport::numeric(name, spec, worst, FINITE_DIFFERENCE_TOLERANCE, points))
        }
    }
}

// ---- grids and batteries

/// Single-monomial specs over `n`, `m`, `r` ranges with `gamma` in `[-3, n+3]`.
pub fn grid(ns: impl IntoIterator<Item = usize>, ms: &[i32], rs: &[i32]) -> Vec<BenentiSpec> {
    let mut out = Vec::new();
    for n in ns {
        for &m in ms {
            for &r in rs {
                for gamma in -3..=n as i32 + 3 {
                    out.push(BenentiSpec::monomial(n, m, r, gamma).expect("valid by construction"));
                }
            }
        }
    }
    out
}

/// `n <= 4`, `m in [-2, 2]`, `r in [-1, 2]`, `gamma in [-3, n+3]`.
pub fn full_grid() -> Vec<BenentiSpec> {
    grid(1..=4, &[-2, -1, 0, 1, 2], &[-1, 0, 1, 2])
}

/// `n <= 3`, `m in [-1, 1]`, `r in [-1, 1]`, `gamma in [-3, n+3]`.
pub fn small_grid() -> Vec<BenentiSpec> {
    grid(1..=3, &[-1, 0, 1], &[-1, 0, 1])
}

/// Specs with random multi-term potentials.
pub fn random_specs(seed: u64, count: usize) -> Vec<BenentiSpec> {
    use rand::Rng;
    let mut rng = sampling::rng(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=4);
            let m = rng.gen_range(-2..=2);
            let r = rng.gen_range(-1..=2);
            BenentiSpec::new(n, m, r, sampling::sigma(&mut rng, n)).expect("valid by construction")
        })
        .collect()
}

/// Which checks a battery runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Battery {
    pub symbolic: bool,
    pub gauge_trials: usize,
    pub numeric_points: usize,
}

impl Default for Battery {
    fn default() -> Self {
        Battery { symbolic: true, gauge_trials: 3, numeric_points: 20 }
    }
}

/// Runs every applicable check for one spec; a division failure is an error.
pub fn run_battery(spec: &BenentiSpec, seed: u64, battery: Battery) -> Result<Vec<CheckReport>> {
    let sys = LaxSystem::build(spec)?;
    let mut out = Vec::new();
    if battery.symbolic {
        out.push(check_involution_of(spec, &sys.hamiltonians.h));
        out.push(check_spectral_curve_in(&sys));
        out.extend(check_lax_equations(&sys)?);
        out.push(check_remainder_identity(&sys));
        if spec.n == 2 {
            out.push(check_n2_closed_form(spec)?);
        }
    }
    if battery.gauge_trials > 0 {
        out.push(check_gauge_invariance(&sys, seed, battery.gauge_trials)?);
    }
    if battery.numeric_points > 0 {
        out.push(check_oracle(&sys, seed, battery.numeric_points)?);
        out.push(check_numeric_coherence(&sys, seed, battery.numeric_points)?);
    }
    Ok(out)
}

/// Runs [`run_battery`] over many specs in parallel, preserving input order.
pub fn run_grid(specs: &[BenentiSpec], seed: u64, battery: Battery) -> Vec<Result<Vec<CheckReport>>> {
    specs
        .par_iter()
        .enumerate()
        .map(|(i, spec)| run_battery(spec, seed.wrapping_add(i as u64), battery))
        .collect()
}

/// Built-in negative controls: a sign-flipped Hamiltonian term and a
/// perturbed `U_1` must both be caught.
pub fn corrupted_reports() -> Result<Vec<CheckReport>> {
    let spec = fixture("ex3_g0")?.spec;
    let sys = LaxSystem::build(&spec)?;

    let mut hs = sys.hamiltonians.h.clone();
    hs[1] = flip_one_term(&hs[1]);
    let mut inv = check_involution_of(&spec, &hs);
    inv.check = "involution[corrupted H2]".into();

    let u1 = sys.u_matrix(1)?;
    let bump = SpectralPoly::constant(sys.viete.q(1));
    let bad = LaxMatrix::new(&u1.e11 + &bump, u1.e12.clone(), u1.e21.clone(), &u1.e22 - &bump);
    let mut lax = check_lax_equation_with(&spec, 1, &sys.l, &bad, sys.hamiltonians.get(1));
    lax.check = "lax_equation[k=1, corrupted U1]".into();
    Ok(vec![inv, lax])
}

/// Negates the leading term of a polynomial.
pub fn flip_one_term(h: &CoeffPoly) -> CoeffPoly {
    let (m, c) = h.terms().next_back().expect("nonzero polynomial");
    let flip = CoeffPoly::monomial(h.vars(), m.exps(), c.clone()).expect("existing monomial");
    h - &flip.scale(&Rational::integer(2))
}
