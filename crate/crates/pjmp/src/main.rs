//! Batch front end: enumerate the state space, compute the constants,
//! certify the variance bounds and cross-check the exact engine against
//! simulation, all driven by a JSON configuration.
//!
//! Exit codes: 0 success, 2 configuration error, 3 state-space capacity
//! exceeded, 4 at least one non-skipped check failed, 5 numerical breakdown.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pjmp::config::{CheckKind, OutputFormat, RunConfig, System};
use pjmp::constants::{compute_constants, ConstantsReport, Variant};
use pjmp::error::Result;
use pjmp::exact::{semigroup_apply, transition_row, variance_semigroup, Observable};
use pjmp::montecarlo::{
    chi_square_fit, empirical_distribution, estimate_from_counts, variance_from_counts,
};
use pjmp::verify::{Harness, InequalityReport};

#[derive(Parser)]
#[command(
    name = "pjmp",
    about = "Exact and Monte-Carlo analysis of a compact pure-jump neuron network with certified Poincaré-type variance bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the reachable state space and its recurrent domain.
    Enumerate(CommonArgs),
    /// Compute every constant entering the variance bounds.
    Constants(CommonArgs),
    /// Evaluate the inequality and identity checks and report margins.
    Verify(CommonArgs),
    /// Simulate paths and compare estimators against the exact engine.
    Simulate(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory for report files, or `-` to stream JSON lines to
    /// stdout.
    #[arg(long)]
    out: Option<String>,
    /// Worker threads; affects wall time only, never output bytes.
    #[arg(long)]
    workers: Option<usize>,
    /// Which constant set feeds the bounds.
    #[arg(long, value_enum, default_value_t = VariantArg::Both)]
    constants_variant: VariantArg,
    /// Output format for file outputs (overrides the config).
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Paper,
    Empirical,
    Both,
}

impl VariantArg {
    fn variants(self) -> Vec<Variant> {
        match self {
            VariantArg::Paper => vec![Variant::Paper],
            VariantArg::Empirical => vec![Variant::Empirical],
            VariantArg::Both => vec![Variant::Paper, Variant::Empirical],
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32> {
    let args = match &cli.command {
        Command::Enumerate(a) | Command::Constants(a) | Command::Verify(a) | Command::Simulate(a) => a,
    };
    if let Some(workers) = args.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build_global()
            .ok();
    }
    let config = RunConfig::from_path(&args.config)?;
    let sink = Sink::new(args, &config)?;
    match cli.command {
        Command::Enumerate(ref args) => run_enumerate(args, &config, sink),
        Command::Constants(ref args) => run_constants(args, &config, sink),
        Command::Verify(ref args) => run_verify(args, &config, sink),
        Command::Simulate(ref args) => run_simulate(args, &config, sink),
    }
}

/// Where report records go: a directory, stdout JSON lines, or nowhere
/// (summary printing only).
struct Sink {
    dir: Option<PathBuf>,
    stream_stdout: bool,
    format: OutputFormat,
}

impl Sink {
    fn new(args: &CommonArgs, config: &RunConfig) -> Result<Self> {
        let out = args.out.clone().or_else(|| config.output.dir.clone());
        let format = match args.format {
            Some(FormatArg::Json) => OutputFormat::Json,
            Some(FormatArg::Csv) => OutputFormat::Csv,
            None => config.output.format,
        };
        match out.as_deref() {
            Some("-") => Ok(Sink {
                dir: None,
                stream_stdout: true,
                format,
            }),
            Some(dir) => {
                fs::create_dir_all(dir)?;
                Ok(Sink {
                    dir: Some(PathBuf::from(dir)),
                    stream_stdout: false,
                    format,
                })
            }
            None => Ok(Sink {
                dir: None,
                stream_stdout: false,
                format,
            }),
        }
    }

    /// JSON-lines records go to stdout only in the default streaming format;
    /// `--format csv` switches the stream to the tabular artifacts instead.
    fn emit<T: Serialize>(&self, record: &T) -> Result<()> {
        if self.stream_stdout && self.format == OutputFormat::Json {
            let line = serde_json::to_string(record)?;
            println!("{line}");
        }
        Ok(())
    }

    fn stream_csv(&self, csv: &str) {
        if self.stream_stdout && self.format == OutputFormat::Csv {
            print!("{csv}");
        }
    }

    fn write_file(&self, name: &str, contents: &str) -> Result<()> {
        if let Some(dir) = &self.dir {
            fs::write(dir.join(name), contents)?;
        }
        Ok(())
    }
}

fn run_enumerate(_args: &CommonArgs, config: &RunConfig, sink: Sink) -> Result<i32> {
    let system = config.build_system()?;
    let space = &system.space;
    let recurrent = space.recurrent_indices();

    #[derive(Serialize)]
    struct StateRecord<'a> {
        record: &'a str,
        index: usize,
        potentials: Vec<f64>,
        recurrent: bool,
    }
    #[derive(Serialize)]
    struct EdgeRecord<'a> {
        record: &'a str,
        from: usize,
        neuron: usize,
        to: usize,
        rate: f64,
    }
    #[derive(Serialize)]
    struct Summary<'a> {
        record: &'a str,
        states: usize,
        recurrent: usize,
        closed_classes: usize,
    }

    let mut states_csv = String::from("index,recurrent");
    for j in 0..system.model.n() {
        states_csv.push_str(&format!(",x{j}"));
    }
    states_csv.push('\n');
    for (u, state) in space.states().iter().enumerate() {
        let pots = state.potentials();
        sink.emit(&StateRecord {
            record: "state",
            index: u,
            potentials: pots.clone(),
            recurrent: space.is_recurrent(u),
        })?;
        states_csv.push_str(&format!("{u},{}", space.is_recurrent(u)));
        for p in pots {
            states_csv.push_str(&format!(",{p}"));
        }
        states_csv.push('\n');
    }
    let mut edges_csv = String::from("from,neuron,to,rate\n");
    for u in 0..space.len() {
        let rates = system.model.intensities(space.state(u));
        for i in 0..system.model.n() {
            let v = space.jump_target(u, i);
            sink.emit(&EdgeRecord {
                record: "edge",
                from: u,
                neuron: i,
                to: v,
                rate: rates[i],
            })?;
            edges_csv.push_str(&format!("{u},{i},{v},{}\n", rates[i]));
        }
    }
    sink.emit(&Summary {
        record: "summary",
        states: space.len(),
        recurrent: recurrent.len(),
        closed_classes: space.closed_classes().len(),
    })?;
    sink.write_file("states.csv", &states_csv)?;
    sink.write_file("edges.csv", &edges_csv)?;
    sink.stream_csv(&(states_csv + &edges_csv));
    if !sink.stream_stdout {
        println!("states: {}, recurrent: {}", space.len(), recurrent.len());
        println!("closed classes: {}", space.closed_classes().len());
    }
    Ok(0)
}

fn constants_for(config: &RunConfig, system: &System) -> Result<ConstantsReport> {
    compute_constants(&system.model, &system.space, &system.q, &config.grid_options())
}

fn run_constants(args: &CommonArgs, config: &RunConfig, sink: Sink) -> Result<i32> {
    let system = config.build_system()?;
    let report = constants_for(config, &system)?;

    #[derive(Serialize)]
    struct FullReport<'a> {
        constants: &'a ConstantsReport,
        polynomials: Vec<pjmp::constants::RatePolynomials>,
    }
    let polynomials = args
        .constants_variant
        .variants()
        .into_iter()
        .map(|v| report.polynomials(v))
        .collect();
    let full = FullReport {
        constants: &report,
        polynomials,
    };
    let pretty = serde_json::to_string_pretty(&full)?;
    sink.write_file("constants.json", &pretty)?;
    if sink.stream_stdout {
        sink.emit(&full)?;
    } else {
        println!("{pretty}");
    }
    Ok(0)
}

fn margins_csv(reports: &[InequalityReport]) -> String {
    let mut csv =
        String::from("name,variant,f,x_index,t,lhs,rhs,margin,pass,skipped\n");
    for r in reports {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.name,
            r.constants_variant,
            r.instance.f,
            r.instance.x_index,
            r.instance.t,
            r.lhs,
            r.rhs,
            r.margin,
            r.pass,
            r.skipped
        ));
    }
    csv
}

fn run_verify(args: &CommonArgs, config: &RunConfig, sink: Sink) -> Result<i32> {
    let system = config.build_system()?;
    let constants = constants_for(config, &system)?;
    let mut harness = Harness::new(
        &system.model,
        &system.space,
        &system.q,
        &constants,
        config.engine.exp_tol,
    )?;
    harness.pass_rel_tol = config.engine.pass_rel_tol;
    let observables = config.build_observables(&system)?;
    let times = config.times.resolve()?;
    let variants = args.constants_variant.variants();
    let x0_index = system.space.index_of(&system.x0).expect("x0 enumerated");

    let mut reports: Vec<InequalityReport> = Vec::new();
    for kind in &config.checks {
        match kind {
            CheckKind::TheoremGeneral => {
                for (f_id, f) in &observables {
                    for &variant in &variants {
                        for &t in &times {
                            for x in 0..system.space.len() {
                                reports.push(harness.check_theorem_general(f, f_id, x, t, variant)?);
                            }
                        }
                    }
                }
            }
            CheckKind::TheoremRecurrent => {
                for (f_id, f) in &observables {
                    for &variant in &variants {
                        for &t in &times {
                            if t <= constants.t1 {
                                continue;
                            }
                            for &x in &harness.class.clone() {
                                reports.push(
                                    harness.check_theorem_recurrent(f, f_id, x, t, variant)?,
                                );
                            }
                        }
                    }
                }
            }
            CheckKind::Corollaries => {
                for (f_id, f) in &observables {
                    for &variant in &variants {
                        for &t in &times {
                            for x in 0..system.space.len() {
                                let (general, recurrent) =
                                    harness.check_corollaries(f, f_id, x, t, variant)?;
                                reports.push(general);
                                reports.push(recurrent);
                            }
                        }
                    }
                }
            }
            CheckKind::Invariant => {
                for (f_id, f) in &observables {
                    reports.push(harness.check_invariant_poincare(f, f_id)?);
                }
            }
            CheckKind::Identities => {
                let t = times[0];
                for (f_id, f) in &observables {
                    reports.extend(harness.check_identities(f, f_id, x0_index, t)?);
                }
            }
            CheckKind::MontecarloCrosscheck => {
                reports.extend(montecarlo_reports(config, &system, &observables)?);
            }
        }
    }

    for report in &reports {
        sink.emit(report)?;
    }
    let jsonl: Vec<String> = reports
        .iter()
        .map(|r| serde_json::to_string(r).expect("report serializes"))
        .collect();
    sink.write_file("reports.jsonl", &(jsonl.join("\n") + "\n"))?;
    sink.write_file("margins.csv", &margins_csv(&reports))?;
    sink.stream_csv(&margins_csv(&reports));

    let n_fail = reports.iter().filter(|r| r.failed()).count();
    let n_skipped = reports.iter().filter(|r| r.skipped).count();
    let n_pass = reports.len() - n_fail - n_skipped;
    let min_margin = reports
        .iter()
        .filter(|r| !r.skipped)
        .map(|r| r.margin)
        .fold(f64::INFINITY, f64::min);

    #[derive(Serialize)]
    struct VerifySummary<'a> {
        record: &'a str,
        checks: usize,
        passed: usize,
        failed: usize,
        skipped: usize,
        min_margin: f64,
    }
    let summary = VerifySummary {
        record: "summary",
        checks: reports.len(),
        passed: n_pass,
        failed: n_fail,
        skipped: n_skipped,
        min_margin,
    };
    sink.emit(&summary)?;
    if !sink.stream_stdout {
        println!(
            "checks: {}, passed: {}, failed: {}, skipped: {}, min margin: {:e}",
            reports.len(),
            n_pass,
            n_fail,
            n_skipped,
            min_margin
        );
    }
    Ok(if n_fail > 0 { 4 } else { 0 })
}

/// Monte-Carlo comparison rows shared by `verify --checks` and `simulate`.
#[derive(Serialize)]
struct McComparison {
    kind: String,
    f: String,
    t: f64,
    mc: f64,
    std_error: f64,
    exact: f64,
    z: f64,
    pass: bool,
}

#[derive(Serialize)]
struct ChiSquareRow {
    t: f64,
    statistic: f64,
    dof: usize,
    p_value: f64,
    pass: bool,
}

fn montecarlo_comparisons(
    config: &RunConfig,
    system: &System,
    observables: &[(String, Observable)],
) -> Result<(Vec<McComparison>, Vec<ChiSquareRow>)> {
    let x0_index = system.space.index_of(&system.x0).expect("x0 enumerated");
    let mut rows = Vec::new();
    let mut chi_rows = Vec::new();
    for (t_index, &t) in config.mc.times.iter().enumerate() {
        // One path set per horizon; every observable is evaluated on it.
        let seed = config.mc.seed.wrapping_add(t_index as u64);
        let counts = empirical_distribution(
            &system.model,
            &system.space,
            &system.x0,
            t,
            config.mc.n_paths,
            seed,
        )?;
        for (f_id, f) in observables {
            let est = estimate_from_counts(&counts, f, seed);
            let exact = semigroup_apply(&system.q, t, f, x0_index, config.engine.exp_tol)?;
            let z = (est.mean - exact).abs() / est.std_error.max(1e-300);
            rows.push(McComparison {
                kind: "mean".into(),
                f: f_id.clone(),
                t,
                mc: est.mean,
                std_error: est.std_error,
                exact,
                z,
                pass: (est.mean - exact).abs() <= 4.0 * est.std_error || est.std_error == 0.0,
            });
            let vest = variance_from_counts(&counts, f, seed);
            let vexact = variance_semigroup(&system.q, t, f, x0_index, config.engine.exp_tol)?;
            let vz = (vest.mean - vexact).abs() / vest.std_error.max(1e-300);
            rows.push(McComparison {
                kind: "variance".into(),
                f: f_id.clone(),
                t,
                mc: vest.mean,
                std_error: vest.std_error,
                exact: vexact,
                z: vz,
                pass: (vest.mean - vexact).abs() <= 4.0 * vest.std_error || vest.std_error == 0.0,
            });
        }
        let row = transition_row(&system.q, t, x0_index, config.engine.exp_tol)?;
        let (statistic, dof, p_value) = chi_square_fit(&counts, &row);
        chi_rows.push(ChiSquareRow {
            t,
            statistic,
            dof,
            p_value,
            pass: p_value >= 1e-3,
        });
    }
    Ok((rows, chi_rows))
}

fn montecarlo_reports(
    config: &RunConfig,
    system: &System,
    observables: &[(String, Observable)],
) -> Result<Vec<InequalityReport>> {
    let subset: Vec<(String, Observable)> = observables.iter().take(1).cloned().collect();
    let (rows, chi_rows) = montecarlo_comparisons(config, system, &subset)?;
    let mut reports = Vec::new();
    let hash = {
        use sha2::{Digest, Sha256};
        let canonical = serde_json::to_string(system.model.spec())?;
        Sha256::digest(canonical.as_bytes())
            .iter()
            .take(6)
            .map(|b| format!("{b:02x}"))
            .collect::<String>()
    };
    for row in rows {
        let lhs = (row.mc - row.exact).abs();
        let rhs = 4.0 * row.std_error;
        reports.push(InequalityReport {
            name: format!("montecarlo_{}", row.kind),
            instance: pjmp::verify::InstanceId {
                model: hash.clone(),
                f: row.f.clone(),
                x_index: 0,
                t: row.t,
            },
            constants_variant: "exact".into(),
            lhs,
            rhs_terms: vec![("four_std_errors".into(), rhs)],
            rhs,
            margin: rhs - lhs,
            pass: row.pass,
            skipped: false,
            notes: format!("mc = {}, exact = {}, z = {}", row.mc, row.exact, row.z),
        });
    }
    for chi in chi_rows {
        reports.push(InequalityReport {
            name: "montecarlo_law".into(),
            instance: pjmp::verify::InstanceId {
                model: hash.clone(),
                f: "distribution".into(),
                x_index: 0,
                t: chi.t,
            },
            constants_variant: "exact".into(),
            lhs: 1e-3,
            rhs_terms: vec![("p_value".into(), chi.p_value)],
            rhs: chi.p_value,
            margin: chi.p_value - 1e-3,
            pass: chi.pass,
            skipped: false,
            notes: format!("chi2 = {}, dof = {}", chi.statistic, chi.dof),
        });
    }
    Ok(reports)
}

fn run_simulate(_args: &CommonArgs, config: &RunConfig, sink: Sink) -> Result<i32> {
    let system = config.build_system()?;
    let mut observables = config.build_observables(&system)?;
    if observables.is_empty() {
        for j in 0..system.model.n() {
            observables.push((
                format!("coord_{j}"),
                Observable::coordinate(&system.space, j)?,
            ));
        }
    }
    let (rows, chi_rows) = montecarlo_comparisons(config, &system, &observables)?;

    #[derive(Serialize)]
    struct SimulateOutput<'a> {
        n_paths: usize,
        seed: u64,
        comparisons: &'a [McComparison],
        chi_square: &'a [ChiSquareRow],
    }
    let output = SimulateOutput {
        n_paths: config.mc.n_paths,
        seed: config.mc.seed,
        comparisons: &rows,
        chi_square: &chi_rows,
    };
    let pretty = serde_json::to_string_pretty(&output)?;
    sink.write_file("simulate.json", &pretty)?;
    let mut csv = String::from("kind,f,t,mc,std_error,exact,z,pass\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.kind, r.f, r.t, r.mc, r.std_error, r.exact, r.z, r.pass
        ));
    }
    sink.write_file("simulate.csv", &csv)?;
    sink.write_file("paths.csv", &path_dump(config, &system)?)?;
    if sink.stream_stdout {
        if sink.format == OutputFormat::Csv {
            print!("{csv}");
        } else {
            sink.emit(&output)?;
        }
    } else {
        println!("{pretty}");
    }
    let failed = rows.iter().any(|r| !r.pass) || chi_rows.iter().any(|c| !c.pass);
    Ok(if failed { 4 } else { 0 })
}

/// Debug dump of the first few estimator paths: one row per jump.
fn path_dump(config: &RunConfig, system: &System) -> Result<String> {
    let horizon = config.mc.times.iter().copied().fold(0.0f64, f64::max);
    let mut csv = String::from("path,time,neuron");
    for j in 0..system.model.n() {
        csv.push_str(&format!(",x{j}"));
    }
    csv.push('\n');
    for k in 0..config.mc.n_paths.min(10) {
        let mut rng = pjmp::montecarlo::substream(config.mc.seed, k as u64);
        let path = pjmp::montecarlo::sample_path(&system.model, &system.x0, horizon, &mut rng)?;
        for j in 0..path.n_jumps() {
            csv.push_str(&format!("{k},{},{}", path.jump_times[j], path.spiking_neuron[j]));
            for p in path.states[j].potentials() {
                csv.push_str(&format!(",{p}"));
            }
            csv.push('\n');
        }
    }
    Ok(csv)
}
