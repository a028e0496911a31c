use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use mixedbf::boundary::{default_level_family, extract_level};
use mixedbf::defcomplex::{weight_one_triviality, CEComplex, ComplexA, FinDimLieAlgebra, Module};
use mixedbf::graphs::{enumerate, ChiralGraph, ChiralVertex, EnumerateOptions};
use mixedbf::kernels::solve_lambda_constants;
use mixedbf::quadrature::QuadOptions;
use mixedbf::verify::identity_suite;
use mixedbf::weights::{anomaly_study, bulk_weight_sweep, TestInput, WeightResult};
use mixedbf::Error;

/// Environment variable fixing the worker thread count.
const THREADS_ENV: &str = "MIXEDBF_THREADS";

#[derive(Parser)]
#[command(
    name = "mixedbf",
    version,
    about = "Kernels, wheel weights and deformation complexes for mixed BF theory"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args, Default)]
struct Flags {
    /// Smallest heat-kernel scale of a sweep.
    #[arg(long, global = true)]
    epsilon_min: Option<f64>,
    /// Largest heat-kernel scale of a sweep.
    #[arg(long, global = true)]
    epsilon_max: Option<f64>,
    /// Propagator cutoff scales, comma separated.
    #[arg(long = "L", global = true, value_delimiter = ',')]
    l: Option<Vec<f64>>,
    /// Quadrature panels per decade of scale.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Relative quadrature tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed recorded in the manifest; every computation is deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// TOML or JSON run configuration; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the exact identity suite.
    Verify,
    /// Bulk wheel weights over a decade sequence of heat-kernel scales.
    Sweep,
    /// Anomaly weights with their eps -> 0 limits and bounds.
    Anomaly,
    /// Fit the boundary level coefficient on a family of fields.
    BoundaryLevel,
    /// Cohomology table of a Lie algebra.
    Cohomology,
    /// List the connected graphs on a multiset of vertices.
    Enumerate,
}

/// Everything a run depends on. Stored in every output manifest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RunConfig {
    /// Graph description, inline or as a file path; `wheel<n>` is a wheel of cubic vertices.
    graph: String,
    /// Shipped algebra name or TOML file path.
    algebra: String,
    /// Vertex labels for enumeration.
    vertices: Vec<String>,
    /// Distinguished edge of an anomaly study; all edges when absent.
    edge: Option<usize>,
    /// Defaults to `L 10^{-4}`, or `L 10^{-6}` for the level fit.
    epsilon_min: Option<f64>,
    /// Defaults to `L / 10`.
    epsilon_max: Option<f64>,
    l: Vec<f64>,
    seed: u64,
    quadrature: QuadOptions,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            graph: "wheel3".into(),
            algebra: "sl2".into(),
            vertices: vec!["cubic".into(), "cubic".into()],
            edge: None,
            epsilon_min: None,
            epsilon_max: None,
            l: vec![1.0],
            seed: 0,
            quadrature: QuadOptions::default(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Library(#[from] Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("verification failed")]
    Verification,
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification => 1,
            CliError::Usage(_)
            | CliError::Library(Error::Parse(_) | Error::Domain(_) | Error::Precondition(_)) => 2,
            CliError::Library(_) | CliError::Io(_) => 3,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn load_config(path: &Path) -> CliResult<RunConfig> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let is_json = path.extension().is_some_and(|e| e == "json");
    if is_json {
        // a report nests its manifest, which carries the run configuration under `config`
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| usage(format!("{}: line {}: {e}", path.display(), e.line())))?;
        let manifest = value.get("manifest").cloned().unwrap_or(value);
        let inner = manifest.get("config").cloned().unwrap_or(manifest);
        serde_json::from_value(inner).map_err(|e| usage(format!("{}: {e}", path.display())))
    } else {
        toml::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
    }
}

fn resolve(flags: &Flags) -> CliResult<RunConfig> {
    let mut c = match &flags.config {
        Some(p) => load_config(p)?,
        None => RunConfig::default(),
    };
    if flags.epsilon_min.is_some() {
        c.epsilon_min = flags.epsilon_min;
    }
    if flags.epsilon_max.is_some() {
        c.epsilon_max = flags.epsilon_max;
    }
    if let Some(x) = &flags.l {
        c.l = x.clone();
    }
    if let Some(x) = flags.grid {
        c.quadrature.panels_per_decade = x;
    }
    if let Some(x) = flags.tol {
        c.quadrature.tol = x;
    }
    if let Some(x) = flags.seed {
        c.seed = x;
    }
    validate(&c)?;
    Ok(c)
}

fn validate(c: &RunConfig) -> CliResult<()> {
    let q = &c.quadrature;
    if !(q.tol > 0.0 && q.abs_tol > 0.0) {
        return Err(usage("tolerances must be positive"));
    }
    if q.panels_per_decade == 0 || q.min_points == 0 || q.step == 0 || q.max_points < q.min_points {
        return Err(usage(
            "grid parameters must be positive with max_points >= min_points",
        ));
    }
    if c.l.is_empty() || c.l.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
        return Err(usage("every L must be positive and finite"));
    }
    let lo = c.epsilon_min.unwrap_or(f64::MIN_POSITIVE);
    let hi = c.epsilon_max.unwrap_or(f64::MAX);
    if !(lo > 0.0 && lo <= hi) {
        return Err(usage("need 0 < epsilon-min <= epsilon-max"));
    }
    if c.l
        .iter()
        .any(|&l| c.epsilon_min.is_some_and(|e| e >= l) || c.epsilon_max.is_some_and(|e| e >= l))
    {
        return Err(usage("the epsilon range must lie below every L"));
    }
    Ok(())
}

fn manifest(c: &RunConfig, command: &str) -> CliResult<serde_json::Value> {
    let (c1, c2) = solve_lambda_constants()?;
    Ok(json!({
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "lambda_constants": { "c1": c1.to_string(), "c2": c2.to_string() },
        "sign_convention": "edges carry z_target - z_source; forms ordered dzbar before dt per vertex",
        "config": c,
    }))
}

fn emit(out: &Option<PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn read_graph(spec: &str) -> CliResult<ChiralGraph> {
    if let Some(n) = spec.strip_prefix("wheel") {
        let n: usize = n
            .parse()
            .map_err(|_| usage(format!("bad wheel size in {spec:?}")))?;
        if n == 0 {
            return Err(usage("a wheel needs at least one vertex"));
        }
        return Ok(ChiralGraph::wheel(vec![ChiralVertex::cubic(); n]));
    }
    let text = if Path::new(spec).is_file() {
        fs::read_to_string(spec)?
    } else {
        spec.to_string()
    };
    let g = ChiralGraph::parse(&text)?;
    g.validate().map_err(usage)?;
    Ok(g)
}

/// Decade indices `k` with `eps = L 10^{-k}` inside `[epsilon_min, epsilon_max]`.
fn decades(c: &RunConfig, l: f64, default_depth: usize) -> (usize, usize) {
    let lo = c
        .epsilon_max
        .map_or(1.0, |e| (l / e).log10().round().max(1.0)) as usize;
    let hi = c
        .epsilon_min
        .map_or(default_depth as f64, |e| (l / e).log10().round())
        .max(lo as f64) as usize;
    (lo, hi)
}

fn csv_text(
    manifest: &serde_json::Value,
    rows: &[(f64, f64, String, WeightResult)],
) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "epsilon",
        "L",
        "graph_id",
        "value",
        "error_estimate",
        "value_imag",
    ])
    .map_err(|e| CliError::Io(e.into()))?;
    for (eps, l, id, r) in rows {
        w.write_record([
            format!("{eps:e}"),
            format!("{l:e}"),
            id.clone(),
            format!("{:e}", r.value),
            format!("{:e}", r.error_estimate),
            format!("{:e}", r.value_imag),
        ])
        .map_err(|e| CliError::Io(e.into()))?;
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| CliError::Io(e.into_error()))?)
        .expect("utf-8 csv");
    Ok(format!("# manifest: {manifest}\n{body}"))
}

fn cmd_verify(c: &RunConfig, out: &Option<PathBuf>) -> CliResult<()> {
    let checks = identity_suite();
    let failed = checks.iter().filter(|k| !k.passed).count();
    let mut text = String::new();
    for k in &checks {
        let status = if k.passed { "PASS" } else { "FAIL" };
        let detail = if k.detail.is_empty() {
            String::new()
        } else {
            format!(" [{}]", k.detail)
        };
        text.push_str(&format!("{status} {}{detail}\n", k.name));
    }
    text.push_str(&format!("{} checks, {failed} failed\n", checks.len()));
    match out {
        Some(p) => {
            let report =
                json!({ "manifest": manifest(c, "verify")?, "checks": checks, "failed": failed });
            fs::write(
                p,
                serde_json::to_string_pretty(&report).expect("serializable report"),
            )?;
            print!("{text}");
        }
        None => print!("{text}"),
    }
    if failed > 0 {
        return Err(CliError::Verification);
    }
    Ok(())
}

fn cmd_sweep(c: &RunConfig, out: &Option<PathBuf>) -> CliResult<()> {
    let g = read_graph(&c.graph)?;
    let inputs = TestInput::wheel_inputs(g.external_legs().len());
    let id = g.graph_id();
    let mut rows = Vec::new();
    for &l in &c.l {
        let (lo, hi) = decades(c, l, 4);
        for (k, (eps, w)) in bulk_weight_sweep(&g, l, hi, &inputs, &c.quadrature)?
            .into_iter()
            .enumerate()
        {
            if k + 1 >= lo {
                rows.push((eps, l, id.clone(), w));
            }
        }
    }
    emit(out, &csv_text(&manifest(c, "sweep")?, &rows)?)
}

fn cmd_anomaly(c: &RunConfig, out: &Option<PathBuf>) -> CliResult<()> {
    let g = read_graph(&c.graph)?;
    let inputs = TestInput::wheel_inputs(g.external_legs().len());
    let edges: Vec<usize> = match c.edge {
        Some(e) => vec![e],
        None => (0..g.edges.len()).collect(),
    };
    let mut studies = Vec::new();
    for &l in &c.l {
        let (_, hi) = decades(c, l, 4);
        for &e in &edges {
            let s = anomaly_study(&g, e, l, hi, &inputs, &c.quadrature)?;
            studies.push(json!({ "edge": e, "study": s }));
        }
    }
    let report = json!({ "manifest": manifest(c, "anomaly")?, "graph_id": g.graph_id(), "studies": studies });
    emit(
        out,
        &(serde_json::to_string_pretty(&report).expect("serializable report") + "\n"),
    )
}

fn cmd_boundary_level(c: &RunConfig, out: &Option<PathBuf>) -> CliResult<()> {
    let family = default_level_family();
    let mut fits = Vec::new();
    for &l in &c.l {
        let (_, hi) = decades(c, l, 6);
        let f = extract_level(l, hi, &family, &c.quadrature)?;
        fits.push(json!({
            "L": l,
            "c_an": [f.c_an.re, f.c_an.im],
            "residual": f.residual,
            "std_error": f.std_error,
            "functionals": f.functionals.iter().map(|x| [x.re, x.im]).collect::<Vec<_>>(),
            "weights": f.weights.iter().map(|(w, e)| json!({"value": [w.re, w.im], "error": e})).collect::<Vec<_>>(),
        }));
    }
    let report = json!({ "manifest": manifest(c, "boundary-level")?, "fits": fits });
    emit(
        out,
        &(serde_json::to_string_pretty(&report).expect("serializable report") + "\n"),
    )
}

fn load_algebra(spec: &str) -> CliResult<FinDimLieAlgebra> {
    if Path::new(spec).is_file() {
        Ok(FinDimLieAlgebra::load(Path::new(spec))?)
    } else {
        Ok(FinDimLieAlgebra::shipped(spec)?)
    }
}

fn cmd_cohomology(c: &RunConfig, out: &Option<PathBuf>) -> CliResult<()> {
    let g = load_algebra(&c.algebra)?;
    let trivial = CEComplex::new(&g, Module::Trivial);
    let adjoint = CEComplex::new(&g, Module::Adjoint);
    let a = ComplexA::new(&g);
    let square_zero = trivial.check_square_zero().is_ok()
        && adjoint.check_square_zero().is_ok()
        && a.check_square_zero().is_ok();
    let h_trivial = trivial.cohomology_dims()?;
    let h_adjoint = adjoint.cohomology_dims()?;
    let h_a = a.cohomology_dims()?;
    let weight_one = match weight_one_triviality(&g) {
        Ok(b) => json!(b),
        Err(Error::Precondition(m)) => json!(m),
        Err(e) => return Err(e.into()),
    };
    let row = |name: &str, dims: &[usize]| {
        let cells: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
        format!("{name:<24}{}\n", cells.join(" "))
    };
    let mut text = format!("algebra {} (dim {})\n", g.name, g.dim());
    text.push_str(&row("H(g; C)", &h_trivial));
    text.push_str(&row("H(g; g)", &h_adjoint));
    text.push_str(&row(&format!("H(A) from degree {}", a.min_degree), &h_a));
    text.push_str(&format!("d^2 = 0                 {square_zero}\n"));
    text.push_str(&format!("weight-one trivial      {weight_one}\n"));
    match out {
        Some(p) => {
            let report = json!({
                "manifest": manifest(c, "cohomology")?,
                "algebra": g.name,
                "trivial": h_trivial,
                "adjoint": h_adjoint,
                "complex_a": { "min_degree": a.min_degree, "dims": h_a },
                "square_zero": square_zero,
                "weight_one_trivial": weight_one,
            });
            fs::write(
                p,
                serde_json::to_string_pretty(&report).expect("serializable report"),
            )?;
            print!("{text}");
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_enumerate(c: &RunConfig, out: &Option<PathBuf>) -> CliResult<()> {
    let vertices = c
        .vertices
        .iter()
        .map(|l| {
            ChiralVertex::by_label(l).ok_or_else(|| usage(format!("unknown vertex label {l:?}")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let graphs = enumerate(&vertices, EnumerateOptions::default())?;
    let mut text = format!(
        "# {} connected graphs on [{}]\n",
        graphs.len(),
        c.vertices.join(", ")
    );
    for g in &graphs {
        let class = g
            .classify()
            .map(|k| k.to_string())
            .unwrap_or_else(|e| format!("error: {e}"));
        text.push_str(&format!(
            "graph {} betti={} class={class}\n",
            g.graph_id(),
            g.betti_number()
        ));
        for line in g.to_text().lines() {
            text.push_str(&format!("  {line}\n"));
        }
    }
    emit(out, &text)
}

fn run(cli: Cli) -> CliResult<()> {
    if let Ok(n) = std::env::var(THREADS_ENV) {
        let n: usize = n
            .parse()
            .map_err(|_| usage(format!("{THREADS_ENV} must be a positive integer")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| usage(e.to_string()))?;
    }
    let c = resolve(&cli.flags)?;
    let out = &cli.flags.out;
    match cli.command {
        Command::Verify => cmd_verify(&c, out),
        Command::Sweep => cmd_sweep(&c, out),
        Command::Anomaly => cmd_anomaly(&c, out),
        Command::BoundaryLevel => cmd_boundary_level(&c, out),
        Command::Cohomology => cmd_cohomology(&c, out),
        Command::Enumerate => cmd_enumerate(&c, out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::Verification) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
