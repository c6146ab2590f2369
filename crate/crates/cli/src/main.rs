use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use laxforge::verify::{self, fixture, Battery, SimulationConfig, TrajectoryReport, EXAMPLE_IDS};
use laxforge::{BenentiSpec, CheckReport, Error, LaxMatrix, LaxSystem, Rational, SigmaTerm};
use serde_json::{json, Value};

/// Commuting Hamiltonians and Lax pairs for Benenti-class separable systems.
#[derive(Parser)]
#[command(name = "laxforge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Seed for every random sample; falls back to LAXFORGE_SEED, then 0.
    #[arg(long, env = "LAXFORGE_SEED", default_value_t = 0, global = true)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print H_1..H_n, L and U_1..U_n for a system.
    Build(SpecArgs),
    /// Run checks; exits 1 if any fails.
    Verify(VerifyArgs),
    /// Integrate a Hamiltonian flow with RK4 and report drifts.
    Simulate(SimulateArgs),
    /// Rebuild the reference examples and compare them with the printed matrices.
    Examples {
        #[arg(long, value_parser = example_id)]
        example: Option<String>,
    },
}

#[derive(Args, Clone, Default)]
struct SpecArgs {
    /// Degrees of freedom.
    #[arg(long)]
    n: Option<usize>,
    /// Exponent m of f = l^m.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
    f: i32,
    /// Exponent r of g = l^r.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
    g: i32,
    /// Potential as comma-separated `gamma:num/den` terms, e.g. "5:1" or "-2:1,3:-1/2".
    #[arg(long, allow_hyphen_values = true, value_parser = parse_sigma)]
    sigma: Option<SigmaList>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// One reference example.
    #[arg(long, value_parser = example_id, conflicts_with_all = ["grid", "corrupt", "n"])]
    example: Option<String>,
    /// A grid of single-monomial systems.
    #[arg(long, value_enum, conflicts_with_all = ["corrupt", "n"])]
    grid: Option<Grid>,
    /// Built-in negative controls, which must fail.
    #[arg(long, conflicts_with = "n")]
    corrupt: bool,
    /// Random points per numeric check.
    #[arg(long, default_value_t = 20)]
    points: usize,
    /// Random gauges per system.
    #[arg(long, default_value_t = 3)]
    gauge_trials: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Grid {
    /// n <= 3, m and r in [-1, 1].
    Small,
    /// n <= 4, m in [-2, 2], r in [-1, 2].
    Full,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Take the system from a reference example.
    #[arg(long, value_parser = example_id, conflicts_with = "n")]
    example: Option<String>,
    /// Initial positions, comma-separated.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_floats)]
    q0: Option<Floats>,
    /// Initial momenta, comma-separated.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_floats)]
    p0: Option<Floats>,
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    #[arg(long, default_value_t = 10.0)]
    t_end: f64,
    /// Values of l at which the spectrum of L is monitored.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_floats)]
    probes: Option<Floats>,
    /// Integrate the flow of H_k.
    #[arg(long, default_value_t = 1)]
    flow: usize,
}

fn example_id(s: &str) -> Result<String, String> {
    if EXAMPLE_IDS.contains(&s) {
        Ok(s.to_string())
    } else {
        Err(format!("expected one of {}", EXAMPLE_IDS.join(", ")))
    }
}

/// Wrapped so clap takes one comma-separated value rather than many.
#[derive(Clone, Default)]
struct SigmaList(Vec<SigmaTerm>);

#[derive(Clone)]
struct Floats(Vec<f64>);

fn parse_sigma(s: &str) -> Result<SigmaList, String> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|term| {
            let (gamma, coeff) = term.split_once(':').ok_or_else(|| format!("`{term}` is not `gamma:num/den`"))?;
            let gamma = gamma.trim().parse().map_err(|e| format!("exponent `{gamma}`: {e}"))?;
            let coeff: Rational = coeff.trim().parse().map_err(|e: Error| e.to_string())?;
            Ok(SigmaTerm { gamma, coeff })
        })
        .collect::<Result<_, _>>()
        .map(SigmaList)
}

fn parse_floats(s: &str) -> Result<Floats, String> {
    s.split(',').map(|x| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}"))).collect::<Result<_, _>>().map(Floats)
}

/// Outcomes other than success, mapped onto exit codes.
enum Failure {
    Checks,
    Usage(String),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonMonicDivisor(_)
            | Error::NonUnitConstantTerm(_)
            | Error::ZeroLocalized(_)
            | Error::ZeroLambda
            | Error::NotInvertible(_)
            | Error::Singularity { .. } => Failure::Runtime(e),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("write failed: {e}"))
    }
}

type Outcome = Result<(), Failure>;

impl SpecArgs {
    fn spec(&self) -> Result<BenentiSpec, Failure> {
        let n = self.n.ok_or_else(|| Failure::Usage("--n is required".into()))?;
        Ok(BenentiSpec::new(n, self.f, self.g, self.sigma.clone().unwrap_or_default().0)?)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = match &cli.command {
        Command::Build(args) => args.spec().and_then(|spec| build(&mut out, cli.format, &spec)),
        Command::Verify(args) => verify_cmd(&mut out, &cli, args),
        Command::Simulate(args) => simulate_cmd(&mut out, cli.format, args),
        Command::Examples { example } => examples(&mut out, &cli, example.as_deref()),
    };
    let flushed = out.flush();
    match (result, flushed) {
        (Ok(()), Ok(())) => ExitCode::SUCCESS,
        (Err(Failure::Checks), _) => ExitCode::from(1),
        (Err(Failure::Usage(msg)), _) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        (Err(Failure::Runtime(e)), _) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        (Ok(()), Err(e)) => {
            eprintln!("error: write failed: {e}");
            ExitCode::from(2)
        }
    }
}

// ---- build

fn build_document(sys: &LaxSystem) -> Result<Value, Failure> {
    let us = (1..=sys.spec.n).map(|k| sys.u_matrix(k)).collect::<laxforge::Result<Vec<_>>>()?;
    Ok(json!({
        "spec": sys.spec,
        "hamiltonians": sys.hamiltonians.h,
        "L": sys.l,
        "U": us,
    }))
}

fn write_matrix(out: &mut impl Write, name: &str, m: &LaxMatrix) -> io::Result<()> {
    writeln!(out, "{name}:")?;
    for (entry, e) in ["e11", "e12", "e21", "e22"].iter().zip(m.entries()) {
        writeln!(out, "  {entry} = {e}")?;
    }
    Ok(())
}

fn build(out: &mut impl Write, format: Format, spec: &BenentiSpec) -> Outcome {
    let sys = LaxSystem::build(spec)?;
    match format {
        Format::Json => writeln!(out, "{}", build_document(&sys)?)?,
        Format::Text => {
            writeln!(out, "system: {spec}")?;
            for (k, h) in sys.hamiltonians.h.iter().enumerate() {
                writeln!(out, "H{} = {h}", k + 1)?;
            }
            write_matrix(out, "L", &sys.l)?;
            for k in 1..=spec.n {
                write_matrix(out, &format!("U{k}"), &sys.u_matrix(k)?)?;
            }
        }
    }
    Ok(())
}

// ---- verify

fn write_report(out: &mut impl Write, format: Format, r: &CheckReport) -> io::Result<()> {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(r).expect("serializable")),
        Format::Text => {
            let status = if r.passed() { "PASS" } else { "FAIL" };
            let detail = match &r.witness {
                Some(w) if w.get("max_deviation").is_some() => format!(" (max deviation {})", w["max_deviation"]),
                Some(w) if !r.passed() => format!(" {w}"),
                _ => String::new(),
            };
            writeln!(out, "{status} {} [{}]{detail}", r.check, r.spec)
        }
    }
}

fn emit(out: &mut impl Write, format: Format, reports: &[CheckReport]) -> Outcome {
    for r in reports {
        write_report(out, format, r)?;
    }
    if reports.iter().all(CheckReport::passed) {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn example_reports(id: &str, seed: u64, battery: Battery) -> Result<Vec<CheckReport>, Failure> {
    let mut reports = vec![
        verify::check_fixture(id, seed, battery.numeric_points.max(10))?,
        verify::check_printed_consistency(id, verify::Text::Corrected, seed, battery.numeric_points.max(10))?,
    ];
    reports.extend(verify::run_battery(&fixture(id)?.spec, seed, battery)?);
    Ok(reports)
}

fn verify_cmd(out: &mut impl Write, cli: &Cli, args: &VerifyArgs) -> Outcome {
    let battery = Battery { symbolic: true, gauge_trials: args.gauge_trials, numeric_points: args.points };
    let seed = cli.seed;
    let reports = if args.corrupt {
        verify::corrupted_reports()?
    } else if let Some(id) = &args.example {
        example_reports(id, seed, battery)?
    } else if let Some(grid) = args.grid {
        let specs = match grid {
            Grid::Small => verify::small_grid(),
            Grid::Full => verify::full_grid(),
        };
        let mut reports = Vec::new();
        for r in verify::run_grid(&specs, seed, battery) {
            reports.extend(r?);
        }
        reports
    } else if args.spec.n.is_some() {
        verify::run_battery(&args.spec.spec()?, seed, battery)?
    } else {
        // everything that is quick: all examples and the division property
        let mut reports = Vec::new();
        for id in EXAMPLE_IDS {
            reports.extend(example_reports(id, seed, battery)?);
        }
        reports.push(verify::check_division(seed, 1000)?);
        reports
    };
    emit(out, cli.format, &reports)
}

// ---- simulate

fn simulate_cmd(out: &mut impl Write, format: Format, args: &SimulateArgs) -> Outcome {
    let spec = match &args.example {
        Some(id) => fixture(id)?.spec,
        None => args.spec.spec()?,
    };
    let bounded = (spec.n, spec.m, spec.sigma.as_slice())
        == (2, 1, &[SigmaTerm { gamma: 4, coeff: Rational::integer(-1) }][..]);
    let (q0, p0) = match (&args.q0, &args.p0) {
        (Some(q), Some(p)) => (q.0.clone(), p.0.clone()),
        (None, None) if bounded => {
            let (q, p) = verify::HENON_HEILES_START;
            (q.to_vec(), p.to_vec())
        }
        _ => return Err(Failure::Usage("--q0 and --p0 are required for this system".into())),
    };
    let sys = LaxSystem::build(&spec)?;
    let mut config = SimulationConfig::new(q0, p0);
    config.dt = args.dt;
    config.t_end = args.t_end;
    config.flow = args.flow;
    if let Some(p) = &args.probes {
        config.probes = p.0.clone();
    }
    let report = verify::simulate(&sys, &config)?;
    let ok = within_tolerance(&report);
    match format {
        Format::Json => writeln!(out, "{}", json!({ "spec": spec, "config": config, "report": report, "pass": ok }))?,
        Format::Text => {
            writeln!(out, "system: {spec}")?;
            writeln!(out, "flow H{}, dt = {}, t_end = {}, {} steps", report.flow, report.dt, report.t_end, report.steps)?;
            for (k, d) in report.energy_drift.iter().enumerate() {
                writeln!(out, "drift H{} = {d:.3e}", k + 1)?;
            }
            writeln!(out, "eigenvalue drift = {:.3e} at l* in {:?}", report.eigen_drift, report.samples)?;
            writeln!(out, "tr L^2 drift = {:.3e}", report.trace_drift)?;
            writeln!(out, "{}", if ok { "PASS" } else { "FAIL" })?;
        }
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn within_tolerance(r: &TrajectoryReport) -> bool {
    let tol = verify::DRIFT_TOLERANCE;
    r.max_energy_drift() <= tol && r.eigen_drift <= tol && r.trace_drift <= tol
}

// ---- examples

fn examples(out: &mut impl Write, cli: &Cli, only: Option<&str>) -> Outcome {
    let ids: Vec<&str> = only.map_or_else(|| EXAMPLE_IDS.to_vec(), |id| vec![id]);
    let mut all_pass = true;
    for id in ids {
        let fx = fixture(id)?;
        let sys = LaxSystem::build(&fx.spec)?;
        let report = verify::check_fixture(id, cli.seed, 10)?;
        all_pass &= report.passed();
        let errata: Vec<String> = fx.errata.iter().map(|e| format!("{} {}: {}", e.matrix, e.entry, e.note)).collect();
        match cli.format {
            Format::Json => {
                let mut doc = build_document(&sys)?;
                doc["example"] = json!(id);
                doc["errata"] = json!(errata);
                doc["check"] = serde_json::to_value(&report).expect("serializable");
                writeln!(out, "{doc}")?;
            }
            Format::Text => {
                writeln!(out, "== {id}")?;
                build(out, Format::Text, &fx.spec)?;
                for e in &errata {
                    writeln!(out, "erratum: {e}")?;
                }
                write_report(out, Format::Text, &report)?;
            }
        }
    }
    if all_pass {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}
