use std::collections::BTreeSet;

use laxforge::verify::{self, fixture, sampling, simulate, Printed, SimulationConfig, Text, EXAMPLE_IDS};
use laxforge::{BenentiSpec, CheckReport, Error, LaxSystem, Rational, SigmaTerm, Status};

const ENTRIES: [(&str, usize, usize); 4] = [("e11", 0, 0), ("e12", 0, 1), ("e21", 1, 0), ("e22", 1, 1)];

fn monomial(n: usize, m: i32, r: i32, gamma: i32) -> BenentiSpec {
    BenentiSpec::monomial(n, m, r, gamma).unwrap()
}

/// Entries where the verbatim reference differs from the engine, as
/// `(matrix, entry)` with the `e22` partner of a traceless `e11` folded in.
fn verbatim_mismatches(id: &str) -> BTreeSet<(String, &'static str)> {
    let fx = fixture(id).unwrap();
    let sys = LaxSystem::build(&fx.spec).unwrap();
    let n = fx.spec.n;
    let engine: Vec<_> = std::iter::once(sys.l.clone()).chain((1..=n).map(|k| sys.u_matrix(k).unwrap())).collect();
    let name = |i: usize| if i == 0 { "L".to_string() } else { format!("U{i}") };
    let mut out = BTreeSet::new();
    match fx.printed {
        Printed::Viete { matrices, .. } => {
            for (i, (e, p)) in engine.iter().zip(matrices(&sys.viete, Text::Verbatim)).enumerate() {
                let d = e.sub(&p);
                for ((entry, ..), r) in ENTRIES.iter().zip(d.entries()) {
                    if !r.is_zero() {
                        out.insert((name(i), if *entry == "e22" { "e11" } else { entry }));
                    }
                }
            }
        }
        Printed::Flat { to_viete, matrices, .. } => {
            let mut rng = sampling::rng(4);
            for _ in 0..10 {
                let z = sampling::coordinates(&mut rng, 2 * n);
                let lam = sampling::coordinate(&mut rng);
                let (q, p) = to_viete(&z);
                let x = sys.viete.point(&q, &p, 0.0);
                for (i, (e, b)) in engine.iter().zip(matrices(&z, lam, Text::Verbatim)).enumerate() {
                    let a = e.eval(&x, lam).unwrap();
                    for (entry, r, c) in ENTRIES {
                        if verify::deviation(a[r][c], b[r][c]) > verify::NUMERIC_TOLERANCE {
                            out.insert((name(i), if entry == "e22" { "e11" } else { entry }));
                        }
                    }
                }
            }
        }
    }
    out
}

#[test]
fn every_example_matches_its_corrected_reading() {
    for id in EXAMPLE_IDS {
        let report = verify::check_fixture(id, 7, 10).unwrap();
        assert!(report.passed(), "{id}: {:?}", report.witness);
        let dev = report.witness.as_ref().unwrap()["max_deviation"].as_f64().unwrap();
        assert!(dev <= 1e-9, "{id}: {dev}");
    }
}

#[test]
fn misprints_are_exactly_the_listed_errata() {
    for id in EXAMPLE_IDS {
        let fx = fixture(id).unwrap();
        let listed: BTreeSet<(String, &str)> = fx.errata.iter().map(|e| (e.matrix.to_string(), e.entry)).collect();
        assert_eq!(verbatim_mismatches(id), listed, "{id}");

        let verbatim = verify::check_fixture_text(id, 7, 10, Text::Verbatim).unwrap();
        assert_eq!(verbatim.passed(), fx.errata.is_empty(), "{id}");
    }
}

/// Independent of the engine: the printed matrices must satisfy their own
/// Lax equations and spectral curve, which the verbatim misprints break.
#[test]
fn printed_matrices_are_self_consistent_only_when_corrected() {
    for id in EXAMPLE_IDS {
        let fx = fixture(id).unwrap();
        let corrected = verify::check_printed_consistency(id, Text::Corrected, 3, 10).unwrap();
        assert!(corrected.passed(), "{id}: {:?}", corrected.witness);
        let verbatim = verify::check_printed_consistency(id, Text::Verbatim, 3, 10).unwrap();
        assert_eq!(verbatim.passed(), fx.errata.is_empty(), "{id}: {:?}", verbatim.witness);
    }
}

#[test]
fn unknown_example_is_an_error() {
    assert_eq!(fixture("ex4").err(), Some(Error::UnknownExample("ex4".into())));
    assert!(verify::check_fixture("ex2_g3", 1, 1).is_err());
}

#[test]
fn symbolic_checks_on_named_systems() {
    let ex2 = BenentiSpec::new(2, 1, 1, vec![SigmaTerm { gamma: 4, coeff: Rational::integer(-1) }]).unwrap();
    for spec in [monomial(2, -1, 0, -2), monomial(3, 0, 0, 5), monomial(1, 0, 0, 1), ex2.clone()] {
        assert!(verify::check_involution(&spec).passed(), "{spec}");
        assert!(verify::check_spectral_curve(&spec).unwrap().passed(), "{spec}");
        for k in 1..=spec.n {
            let r = verify::check_lax_equation(&spec, k).unwrap();
            assert!(r.passed() && r.witness.is_none(), "{spec} k={k}");
        }
    }
    for r in 0..=2 {
        assert!(verify::check_n2_closed_form(&ex2.with_r(r)).unwrap().passed());
    }
    assert!(verify::check_n2_closed_form(&monomial(2, -1, 0, -2)).unwrap().passed());
    assert!(verify::check_n2_closed_form(&monomial(2, 0, 0, 3)).unwrap().passed());
    assert!(verify::check_n2_closed_form(&monomial(3, 0, 0, 3)).is_err());
}

#[test]
fn negative_controls_fail_with_witnesses() {
    let reports = verify::corrupted_reports().unwrap();
    assert_eq!(reports.len(), 2);
    for r in &reports {
        assert_eq!(r.status, Status::Fail, "{}", r.check);
        let w = r.witness.as_ref().expect("witness");
        assert!(w["nonzero"].as_u64().unwrap() > 0);
        assert!(!w["residuals"].as_array().unwrap().is_empty());
    }
}

#[test]
fn division_battery() {
    let r = verify::check_division(1, 200).unwrap();
    assert!(r.passed(), "{:?}", r.witness);
}

#[test]
fn numeric_checks_on_a_few_specs() {
    for spec in verify::random_specs(8, 6) {
        let sys = LaxSystem::build(&spec).unwrap();
        assert!(verify::check_oracle(&sys, 1, 25).unwrap().passed(), "{spec}");
        assert!(verify::check_numeric_coherence(&sys, 1, 25).unwrap().passed(), "{spec}");
    }
}

#[test]
fn batteries_are_deterministic() {
    let specs = verify::grid([2], &[0], &[-1, 1]);
    let a = verify::run_grid(&specs, 42, verify::Battery::default());
    let b = verify::run_grid(&specs, 42, verify::Battery::default());
    let text = |rs: &[laxforge::Result<Vec<CheckReport>>]| serde_json::to_string(&rs.iter().map(|r| r.as_ref().unwrap()).collect::<Vec<_>>()).unwrap();
    assert_eq!(text(&a), text(&b));
    assert!(a.iter().flat_map(|r| r.as_ref().unwrap()).all(CheckReport::passed));
}

#[test]
fn report_and_spec_json() {
    let spec = BenentiSpec::new(
        2,
        -1,
        0,
        vec![SigmaTerm { gamma: -2, coeff: Rational::one() }, SigmaTerm { gamma: 3, coeff: Rational::new(-7, 3) }],
    )
    .unwrap();
    let text = serde_json::to_string(&spec).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["sigma"][1]["num"], "-7");
    assert_eq!(value["sigma"][1]["den"], "3");
    let back: BenentiSpec = serde_json::from_str(&text).unwrap();
    assert_eq!(back, spec);

    let report = verify::check_involution(&spec);
    let v = serde_json::to_value(&report).unwrap();
    assert_eq!(v["check"], "involution");
    assert_eq!(v["status"], "pass");
    assert!(v["witness"].is_null());
    assert_eq!(serde_json::from_value::<BenentiSpec>(v["spec"].clone()).unwrap(), spec);

    assert!(serde_json::from_str::<BenentiSpec>(r#"{"n":0,"m":0,"r":0,"sigma":[]}"#).is_err());
    assert!(serde_json::from_str::<BenentiSpec>(r#"{"n":1,"m":0,"r":0,"sigma":[{"gamma":1,"num":"0","den":"1"}]}"#).is_err());
}

fn henon_heiles() -> LaxSystem {
    LaxSystem::build(&fixture("ex2_g0").unwrap().spec).unwrap()
}

fn start() -> SimulationConfig {
    let (q, p) = verify::HENON_HEILES_START;
    SimulationConfig::new(q.to_vec(), p.to_vec())
}

#[test]
fn zero_length_run_has_zero_drift() {
    for spec in [monomial(2, -1, 0, -2), monomial(3, 0, 1, 2)] {
        let sys = LaxSystem::build(&spec).unwrap();
        let n = spec.n;
        let mut cfg = SimulationConfig::new(vec![0.7; n], vec![-0.4; n]);
        cfg.t_end = 0.0;
        let rep = simulate(&sys, &cfg).unwrap();
        assert_eq!(rep.steps, 0);
        assert!(rep.energy_drift.iter().all(|&d| d == 0.0));
        assert_eq!((rep.eigen_drift, rep.trace_drift), (0.0, 0.0));
    }
}

#[test]
fn vanishing_qn_is_a_singularity() {
    let sys = LaxSystem::build(&monomial(2, -1, 0, -2)).unwrap();
    let err = simulate(&sys, &SimulationConfig::new(vec![0.5, 0.0], vec![0.1, 0.2])).unwrap_err();
    assert!(matches!(err, Error::Singularity { time, .. } if time == 0.0), "{err}");
}

#[test]
fn invalid_simulation_parameters() {
    let sys = henon_heiles();
    let mut cfg = start();
    cfg.dt = 0.0;
    assert!(matches!(simulate(&sys, &cfg), Err(Error::InvalidSimulation(_))));
    let mut cfg = start();
    cfg.probes = vec![0.0];
    assert!(simulate(&sys, &cfg).is_err());
    let mut cfg = start();
    cfg.flow = 3;
    assert!(simulate(&sys, &cfg).is_err());
    assert!(simulate(&sys, &SimulationConfig::new(vec![0.1], vec![0.1])).is_err());
}

#[test]
fn short_runs_conserve_the_spectrum() {
    let sys = henon_heiles();
    for flow in 1..=2 {
        let mut cfg = start();
        cfg.t_end = 1.0;
        cfg.flow = flow;
        let rep = simulate(&sys, &cfg).unwrap();
        assert_eq!(rep.steps, 1000);
        assert!(rep.max_energy_drift() < 1e-10, "{:?}", rep.energy_drift);
        assert!(rep.eigen_drift < 1e-10 && rep.trace_drift < 1e-10);
        let v = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["energy_drift"].as_array().unwrap().len(), 2);
        assert_eq!(v["samples"].as_array().unwrap().len(), 3);
    }
}
