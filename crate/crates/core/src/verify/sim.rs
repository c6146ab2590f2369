//! Fourth-order Runge-Kutta integration of a Hamiltonian flow, monitoring the
//! integrals and the spectrum of `L` at fixed probe values of `l`.

use serde::Serialize;

use crate::algebra::CoeffPoly;
use crate::error::{Error, Result};
use crate::lax::LaxSystem;

pub const DEFAULT_PROBES: [f64; 3] = [1.5, -1.3, 2.7];

/// `(q0, p0)` on a bounded orbit of the `n = 2, f = l, sigma = -l^4` system.
/// Most starting points of this cubic potential escape or reach `q2 = 0`
/// well before `t = 10`.
pub const HENON_HEILES_START: ([f64; 2], [f64; 2]) = ([0.21, -0.0045], [-0.18, -0.06]);

/// Number of evenly spaced drift samples kept in a report.
const HISTORY_LEN: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationConfig {
    pub q0: Vec<f64>,
    pub p0: Vec<f64>,
    pub dt: f64,
    pub t_end: f64,
    pub probes: Vec<f64>,
    /// Index `k` of the flow generated by `H_k`.
    pub flow: usize,
}

impl SimulationConfig {
    pub fn new(q0: Vec<f64>, p0: Vec<f64>) -> Self {
        SimulationConfig { q0, p0, dt: 1e-3, t_end: 10.0, probes: DEFAULT_PROBES.to_vec(), flow: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DriftSample {
    pub t: f64,
    pub energy: f64,
    pub eigen: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryReport {
    pub t_end: f64,
    pub dt: f64,
    pub steps: usize,
    pub flow: usize,
    /// `max_t |H_k(t) - H_k(0)|` for each `k`.
    pub energy_drift: Vec<f64>,
    /// Largest eigenvalue deviation of `L(l*)` over probes and time.
    pub eigen_drift: f64,
    /// Same for `tr L(l*)^2`, computed from the evaluated matrix.
    pub trace_drift: f64,
    pub samples: Vec<f64>,
    pub history: Vec<DriftSample>,
}

impl TrajectoryReport {
    pub fn max_energy_drift(&self) -> f64 {
        self.energy_drift.iter().copied().fold(0.0, f64::max)
    }
}

struct Flow {
    n: usize,
    /// `dH/dp_i` then `-dH/dq_i`.
    rhs: Vec<CoeffPoly>,
}

impl Flow {
    fn new(sys: &LaxSystem, k: usize) -> Self {
        let h = sys.hamiltonians.get(k);
        let v = &sys.viete;
        let n = v.n();
        let mut rhs: Vec<CoeffPoly> = (1..=n).map(|i| h.diff(v.p_index(i))).collect();
        rhs.extend((1..=n).map(|i| -h.diff(v.q_index(i))));
        Flow { n, rhs }
    }

    fn eval(&self, state: &[f64], t: f64) -> Result<Vec<f64>> {
        let point = with_mu(state);
        self.rhs
            .iter()
            .map(|f| f.eval(&point).map_err(|e| singular(t, e.to_string())))
            .collect()
    }
}

fn with_mu(state: &[f64]) -> Vec<f64> {
    state.iter().copied().chain(std::iter::once(0.0)).collect()
}

fn singular(time: f64, reason: String) -> Error {
    Error::Singularity { time, reason }
}

/// Principal square root of a real number as `(re, im)`.
fn csqrt(z: f64) -> (f64, f64) {
    if z >= 0.0 {
        (z.sqrt(), 0.0)
    } else {
        (0.0, (-z).sqrt())
    }
}

struct Monitor<'a> {
    sys: &'a LaxSystem,
    probes: &'a [f64],
    h0: Vec<f64>,
    eig0: Vec<(f64, f64)>,
    tr0: Vec<f64>,
}

struct Observation {
    h: Vec<f64>,
    eig: Vec<(f64, f64)>,
    tr: Vec<f64>,
}

impl<'a> Monitor<'a> {
    fn observe(sys: &LaxSystem, probes: &[f64], state: &[f64], t: f64) -> Result<Observation> {
        let point = with_mu(state);
        let err = |e: Error| singular(t, e.to_string());
        let h = sys.hamiltonians.h.iter().map(|h| h.eval(&point).map_err(err)).collect::<Result<Vec<_>>>()?;
        let mut eig = Vec::with_capacity(probes.len());
        let mut tr = Vec::with_capacity(probes.len());
        for &l in probes {
            let m = sys.l.eval(&point, l).map_err(err)?;
            let (v, u, w) = (m[0][0], m[0][1], m[1][0]);
            eig.push(csqrt(v * v + u * w));
            let sq = [
                m[0][0] * m[0][0] + m[0][1] * m[1][0],
                m[1][0] * m[0][1] + m[1][1] * m[1][1],
            ];
            tr.push(sq[0] + sq[1]);
        }
        Ok(Observation { h, eig, tr })
    }

    fn new(sys: &'a LaxSystem, probes: &'a [f64], state: &[f64]) -> Result<Self> {
        let o = Self::observe(sys, probes, state, 0.0)?;
        Ok(Monitor { sys, probes, h0: o.h, eig0: o.eig, tr0: o.tr })
    }

    /// Per-Hamiltonian drift, eigenvalue drift, trace drift.
    fn drift(&self, state: &[f64], t: f64) -> Result<(Vec<f64>, f64, f64)> {
        let o = Self::observe(self.sys, self.probes, state, t)?;
        let dh = o.h.iter().zip(&self.h0).map(|(a, b)| (a - b).abs()).collect();
        let de = o
            .eig
            .iter()
            .zip(&self.eig0)
            .map(|(a, b)| (a.0 - b.0).hypot(a.1 - b.1))
            .fold(0.0, f64::max);
        let dt = o.tr.iter().zip(&self.tr0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        Ok((dh, de, dt))
    }
}

fn check_state(state: &[f64], n: usize, t: f64) -> Result<()> {
    if state.iter().any(|x| !x.is_finite()) {
        return Err(singular(t, "trajectory left every bounded region".into()));
    }
    if state[n - 1] == 0.0 {
        return Err(singular(t, format!("q{n} vanished")));
    }
    Ok(())
}

/// Integrates the `H_k` flow with classical RK4 and records drifts.
pub fn simulate(sys: &LaxSystem, config: &SimulationConfig) -> Result<TrajectoryReport> {
    let n = sys.spec.n;
    if config.q0.len() != n || config.p0.len() != n {
        return Err(Error::PointArity { expected: n, got: config.q0.len().max(config.p0.len()) });
    }
    if !(config.dt > 0.0 && config.dt.is_finite()) {
        return Err(Error::InvalidSimulation(format!("step size must be positive, got {}", config.dt)));
    }
    if !(config.t_end >= 0.0 && config.t_end.is_finite()) {
        return Err(Error::InvalidSimulation(format!("end time must be nonnegative, got {}", config.t_end)));
    }
    if let Some(&l) = config.probes.iter().find(|&&l| l == 0.0 || !l.is_finite()) {
        return Err(Error::InvalidSimulation(format!("probe value {l} is not allowed")));
    }
    if config.flow == 0 || config.flow > n {
        return Err(Error::IndexOutOfRange { index: config.flow, n });
    }

    let flow = Flow::new(sys, config.flow);
    let mut state: Vec<f64> = config.q0.iter().chain(&config.p0).copied().collect();
    check_state(&state, n, 0.0)?;
    let monitor = Monitor::new(sys, &config.probes, &state)?;

    let steps = if config.t_end == 0.0 { 0 } else { (config.t_end / config.dt - 1e-9).ceil() as usize };
    let stride = (steps / HISTORY_LEN).max(1);
    let mut energy_drift = vec![0.0f64; sys.hamiltonians.len()];
    let (mut eigen_drift, mut trace_drift) = (0.0f64, 0.0f64);
    let mut history = vec![DriftSample { t: 0.0, energy: 0.0, eigen: 0.0 }];
    let mut t = 0.0;

    let axpy = |x: &[f64], h: f64, k: &[f64]| -> Vec<f64> { x.iter().zip(k).map(|(a, b)| a + h * b).collect() };
    for step in 1..=steps {
        let h = if step == steps { config.t_end - t } else { config.dt };
        let k1 = flow.eval(&state, t)?;
        let k2 = flow.eval(&axpy(&state, h / 2.0, &k1), t + h / 2.0)?;
        let k3 = flow.eval(&axpy(&state, h / 2.0, &k2), t + h / 2.0)?;
        let k4 = flow.eval(&axpy(&state, h, &k3), t + h)?;
        for i in 0..2 * n {
            state[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        t = if step == steps { config.t_end } else { t + h };
        check_state(&state, flow.n, t)?;

        let (dh, de, dtr) = monitor.drift(&state, t)?;
        for (acc, d) in energy_drift.iter_mut().zip(&dh) {
            *acc = acc.max(*d);
        }
        eigen_drift = eigen_drift.max(de);
        trace_drift = trace_drift.max(dtr);
        if step % stride == 0 || step == steps {
            history.push(DriftSample { t, energy: dh.iter().copied().fold(0.0, f64::max), eigen: de });
        }
    }

    Ok(TrajectoryReport {
        t_end: config.t_end,
        dt: config.dt,
        steps,
        flow: config.flow,
        energy_drift,
        eigen_drift,
        trace_drift,
        samples: config.probes.clone(),
        history,
    })
}
