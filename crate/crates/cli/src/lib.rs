//! Command-line front end: identity suites, root-of-unity representations and torus expressions.

pub mod config;
pub mod expr;
pub mod report;
pub mod scalar;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use skein_torus_core::embed::{run_identity_suite, run_suite_on, EmbedError, SigmaTable, SuiteId, SuiteOptions};
use skein_torus_core::exactalg::{Cyclo, CycloField};
use skein_torus_core::repbuild::{
    build_rep, classical_shadow, find_intertwiner, genericity_check, irreducibility_commutant, verify_cshadow,
    RepError, RepParams,
};
use skein_torus_core::sausage::SausageGraph;
use thiserror::Error;

use config::{load, parse_assignments, IdentitiesConfig, RepConfig, ScalarValue, SigmaConfig};
use expr::{parse_expression, Evaluator};
use report::*;
use scalar::{cyclo_text, parse_cyclo};

pub const THREADS_ENV: &str = "SKEIN_TORUS_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

impl From<RepError> for CliError {
    fn from(e: RepError) -> Self {
        CliError::Failed(e.to_string())
    }
}

impl From<EmbedError> for CliError {
    fn from(e: EmbedError) -> Self {
        CliError::Failed(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "skein-torus", version, about = "Exact skein algebra embeddings into quantum tori")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run identity suites S1..S11 on a sausage graph.
    Identities(IdentitiesArgs),
    /// Build a root-of-unity representation and check shadows, irreducibility and unicity.
    Rep(RepArgs),
    /// Evaluate a torus expression and print its canonical form.
    Sigma(SigmaArgs),
}

#[derive(Args, Debug)]
struct GraphArgs {
    #[arg(long)]
    genus: Option<u32>,
    /// Closed surface (default: one boundary component).
    #[arg(long)]
    closed: bool,
}

#[derive(Args, Debug)]
struct Output {
    /// Write the JSON report to PATH, or to stdout when PATH is omitted.
    #[arg(long, value_name = "PATH", num_args = 0..=1)]
    json: Option<Option<PathBuf>>,
    /// JSON file with the same fields as the flags; flags take precedence.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct IdentitiesArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// `all`, one suite id, or a comma-separated list.
    #[arg(long)]
    suite: Option<String>,
    /// Perturb one coefficient per suite (`A -> A^2`); every suite should then fail.
    #[arg(long)]
    mutate: bool,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct RepArgs {
    #[arg(long)]
    p: Option<u32>,
    #[command(flatten)]
    graph: GraphArgs,
    /// Shadow parameters, e.g. `a0=2,a1=5,c1=3`.
    #[arg(long)]
    x: Option<String>,
    /// Gauge scalars of the `E` operators, e.g. `a0=1,a1=-A`.
    #[arg(long)]
    y: Option<String>,
    /// Scalar of the boundary variable.
    #[arg(long)]
    boundary: Option<String>,
    /// Any of `shadows`, `irreducible`, `unicity` (default: all).
    #[arg(long, value_delimiter = ',')]
    checks: Option<Vec<String>>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct SigmaArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    expr: Option<String>,
    #[command(flatten)]
    out: Output,
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = init_threads().and_then(|()| match cli.cmd {
        Command::Identities(a) => cmd_identities(a, out),
        Command::Rep(a) => cmd_rep(a, out),
        Command::Sigma(a) => cmd_sigma(a, out),
    });
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got `{v}`")))?;
    // A second initialization in the same process keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn graph_of(genus: Option<u32>, closed: bool) -> Result<Arc<SausageGraph>, CliError> {
    let genus = genus.ok_or_else(|| CliError::Usage(String::from("--genus is required")))?;
    SausageGraph::build(genus, closed).map(Arc::new).map_err(|e| CliError::Usage(e.to_string()))
}

fn emit<T: Serialize>(json: &Option<Option<PathBuf>>, value: &T, human: String, out: &mut dyn Write) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Failed(e.to_string()))?;
    match json {
        Some(None) => writeln!(out, "{text}")?,
        Some(Some(path)) => {
            std::fs::write(path, text + "\n")?;
            write!(out, "{human}")?;
        }
        None => write!(out, "{human}")?,
    }
    Ok(())
}

fn config_or_default<T: Default + for<'de> serde::Deserialize<'de>>(o: &Output) -> Result<T, CliError> {
    match &o.config {
        Some(p) => load(p).map_err(CliError::Usage),
        None => Ok(T::default()),
    }
}

fn millis(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

fn cmd_identities(a: IdentitiesArgs, out: &mut dyn Write) -> Result<bool, CliError> {
    let cfg: IdentitiesConfig = config_or_default(&a.out)?;
    let g = graph_of(a.graph.genus.or(cfg.genus), a.graph.closed || cfg.closed.unwrap_or(false))?;
    let spec = a.suite.or(cfg.suite).ok_or_else(|| CliError::Usage(String::from("--suite is required")))?;
    let mutate = a.mutate || cfg.mutate.unwrap_or(false);
    let all = spec.trim().eq_ignore_ascii_case("all");
    let mut suites: Vec<SuiteId> = if all {
        SuiteId::ALL.to_vec()
    } else {
        spec.split(',')
            .map(|s| SuiteId::parse(s).ok_or_else(|| CliError::Usage(format!("unknown suite `{}`", s.trim()))))
            .collect::<Result<_, _>>()?
    };
    suites.sort();
    suites.dedup();
    let table = if mutate { None } else { Some(SigmaTable::build(&g)?) };
    let results: Vec<(SuiteId, u64, Result<_, EmbedError>)> = suites
        .par_iter()
        .map(|&s| {
            let t0 = Instant::now();
            let r = match &table {
                Some(t) => run_suite_on(s, t),
                None => run_identity_suite(s, &g, SuiteOptions { mutate: true }),
            };
            (s, millis(t0), r)
        })
        .collect();
    let mut report = IdentitiesJson { genus: g.genus(), closed: g.closed(), pass: true, suites: Vec::new(), skipped: Vec::new() };
    for (s, ms, r) in results {
        match r {
            Ok(r) => report.suites.push(SuiteJson::from_report(&r, ms)),
            Err(EmbedError::ConfigTooSmall { .. }) if all => report.skipped.push(s.name().to_string()),
            Err(e @ EmbedError::ConfigTooSmall { .. }) => return Err(CliError::Usage(e.to_string())),
            Err(e) => return Err(e.into()),
        }
    }
    report.pass = !report.suites.is_empty() && report.suites.iter().all(|s| s.pass);
    let mut human = String::new();
    for s in &report.suites {
        let ok = s.identities.iter().filter(|i| i.pass).count();
        human += &format!(
            "{:<4} {}  {}/{} identities  {} ms\n",
            s.suite,
            if s.pass { "PASS" } else { "FAIL" },
            ok,
            s.identities.len(),
            s.wall_time_ms
        );
        for i in s.identities.iter().filter(|i| !i.pass) {
            human += &format!("       failed {} ({} residual terms)\n", i.id, i.residual_terms);
        }
    }
    if !report.skipped.is_empty() {
        human += &format!("skipped (no configuration on {g}): {}\n", report.skipped.join(", "));
    }
    emit(&a.out.json, &report, human, out)?;
    Ok(report.pass)
}

fn scalar_of(v: &ScalarValue, field: &Arc<CycloField>) -> Result<Cyclo, CliError> {
    parse_cyclo(&v.text(), field).map_err(|e| CliError::Usage(e.to_string()))
}

fn fill(slots: &mut [Cyclo], map: &BTreeMap<String, ScalarValue>, g: &SausageGraph, field: &Arc<CycloField>) -> Result<(), CliError> {
    for (name, v) in map {
        let e = g.edge_index(name).map_err(|e| CliError::Usage(e.to_string()))?;
        if !g.is_internal(e) {
            return Err(CliError::Usage(format!("`{name}` is not an internal edge")));
        }
        slots[e] = scalar_of(v, field)?;
    }
    Ok(())
}

fn by_edge(g: &SausageGraph, v: &[Cyclo]) -> BTreeMap<String, String> {
    v.iter().enumerate().map(|(e, c)| (g.edge_name(e).to_string(), cyclo_text(c))).collect()
}

fn cmd_rep(a: RepArgs, out: &mut dyn Write) -> Result<bool, CliError> {
    let t0 = Instant::now();
    let mut cfg: RepConfig = config_or_default(&a.out)?;
    let g = graph_of(a.graph.genus.or(cfg.genus), a.graph.closed || cfg.closed.unwrap_or(false))?;
    let p = a.p.or(cfg.p).unwrap_or(3);
    let field = CycloField::new(p).map_err(|e| CliError::Usage(e.to_string()))?;
    if let Some(x) = &a.x {
        cfg.x.extend(parse_assignments(x).map_err(CliError::Usage)?);
    }
    if let Some(y) = &a.y {
        cfg.y.extend(parse_assignments(y).map_err(CliError::Usage)?);
    }
    if let Some(b) = a.boundary {
        cfg.boundary = Some(ScalarValue::Text(b));
    }
    let mut params = RepParams::standard(&g, &field);
    fill(&mut params.x, &cfg.x, &g, &field)?;
    fill(&mut params.y, &cfg.y, &g, &field)?;
    if let Some(b) = &cfg.boundary {
        params.boundary = scalar_of(b, &field)?;
    }
    let checks = a.checks.or(cfg.checks).unwrap_or_else(|| vec!["shadows".into(), "irreducible".into(), "unicity".into()]);
    for c in &checks {
        if !matches!(c.trim(), "shadows" | "irreducible" | "unicity") {
            return Err(CliError::Usage(format!("unknown check `{c}` (expected shadows, irreducible, unicity)")));
        }
    }
    let want = |name: &str| checks.iter().any(|c| c.trim() == name);

    if params.x.iter().chain(&params.y).any(Cyclo::is_zero) || params.boundary.is_zero() {
        return Err(CliError::Usage(String::from("parameters must be nonzero")));
    }
    let gen = genericity_check(&params.x, &params.boundary, &g, p)?;
    let mut report = RepJson {
        p,
        genus: g.genus(),
        closed: g.closed(),
        dim: (p as usize).pow(g.n_internal() as u32),
        x: by_edge(&g, &params.x),
        y: by_edge(&g, &params.y),
        boundary: cyclo_text(&params.boundary),
        genericity: GenericityJson { pass: gen.pass, failures: gen.failures.clone() },
        pass: gen.pass,
        checks: ChecksJson::default(),
        wall_time_ms: 0,
    };
    let mut human = format!("representation p = {p} on {g}: dimension {}\n", report.dim);
    if !gen.pass {
        human += &format!("genericity FAIL: {}\n", gen.failures.join(", "));
        report.wall_time_ms = millis(t0);
        emit(&a.out.json, &report, human, out)?;
        return Ok(false);
    }
    let r = build_rep(&g, &field, &params)?;
    let table = SigmaTable::build(&g)?;

    if want("shadows") {
        let ts = Instant::now();
        let traces: Vec<(String, Result<Cyclo, RepError>)> = g
            .catalogue()
            .par_iter()
            .map(|c| (c.label.clone(), classical_shadow(c, &r, &table)))
            .collect();
        let scalar_ok = traces.iter().all(|(_, t)| t.is_ok());
        let cs = verify_cshadow(&r, &table)?;
        let central = SuiteJson::from_report(&cs, millis(ts));
        let pass = scalar_ok && central.pass;
        human += &format!("shadows     {}  {} curves scalar", if pass { "PASS" } else { "FAIL" }, traces.iter().filter(|t| t.1.is_ok()).count());
        human += &format!(", {}/{} central power identities\n", central.identities.iter().filter(|i| i.pass).count(), central.identities.len());
        for i in central.identities.iter().filter(|i| !i.pass) {
            human += &format!("       failed {}: {}\n", i.id, i.detail.as_deref().unwrap_or(""));
        }
        let traces = traces
            .into_iter()
            .map(|(l, t)| (l, t.map(|c| cyclo_text(&c)).unwrap_or_else(|e| format!("error: {e}"))))
            .collect();
        report.pass &= pass;
        report.checks.shadows = Some(ShadowsJson { pass, traces, central_powers: central });
    }
    if want("irreducible") {
        let d = irreducibility_commutant(&r, &table)?;
        human += &format!("irreducible {}  commutant dimension {d}\n", if d == 1 { "PASS" } else { "FAIL" });
        report.pass &= d == 1;
        report.checks.irreducible = Some(IrreducibleJson { pass: d == 1, commutant_dim: d });
    }
    if want("unicity") {
        let u = unicity(&g, &field, &params, &r, &table)?;
        human += &format!(
            "unicity     {}  gauge-shifted intertwiner {}, mismatched scalar {}\n",
            if u.pass { "PASS" } else { "FAIL" },
            if u.intertwiner_found { "found" } else { "missing" },
            if u.mismatched_rejected { "rejected" } else { "accepted" }
        );
        report.pass &= u.pass;
        report.checks.unicity = Some(u);
    }
    report.wall_time_ms = millis(t0);
    emit(&a.out.json, &report, human, out)?;
    Ok(report.pass)
}

/// Gauge shift `x_e -> x_e (-A)^{j_e}`, `y_e -> y_e A^{2 m_e}` keeps every central power.
pub fn gauge_shift(params: &RepParams, field: &Arc<CycloField>, j: &[i64], m: &[i64]) -> RepParams {
    let minus_a = Cyclo::a_pow(field, 1).neg();
    let mut s = params.clone();
    for (e, x) in s.x.iter_mut().enumerate() {
        *x = x.mul(&minus_a.pow(j[e]).expect("unit"));
    }
    for (e, y) in s.y.iter_mut().enumerate() {
        *y = y.mul(&Cyclo::a_pow(field, 2 * m[e]));
    }
    s
}

fn unicity(
    g: &Arc<SausageGraph>,
    field: &Arc<CycloField>,
    params: &RepParams,
    r: &skein_torus_core::repbuild::Rep,
    table: &SigmaTable,
) -> Result<UnicityJson, CliError> {
    let n = g.n_internal();
    let j: Vec<i64> = (0..n as i64).map(|e| e + 1).collect();
    let m: Vec<i64> = (0..n as i64).map(|e| 2 * e + 1).collect();
    let shifted = gauge_shift(params, field, &j, &m);
    let r2 = build_rep(g, field, &shifted)?;
    let (found, dim) = match find_intertwiner(r, &r2, table) {
        Ok(Some(_)) => (true, 1),
        Ok(None) => (false, 0),
        Err(RepError::Reducible(k)) => (false, k),
        Err(e) => return Err(e.into()),
    };
    let mut other = params.clone();
    other.y[0] = other.y[0].mul(&Cyclo::from_int(field, 2));
    let r3 = build_rep(g, field, &other)?;
    let rejected = matches!(find_intertwiner(r, &r3, table), Ok(None));
    Ok(UnicityJson {
        pass: found && dim == 1 && rejected,
        gauge_x: by_edge(g, &shifted.x),
        gauge_y: by_edge(g, &shifted.y),
        intertwiner_found: found,
        solution_dim: dim,
        mismatched_rejected: rejected,
    })
}

fn cmd_sigma(a: SigmaArgs, out: &mut dyn Write) -> Result<bool, CliError> {
    let cfg: SigmaConfig = config_or_default(&a.out)?;
    let g = graph_of(a.graph.genus.or(cfg.genus), a.graph.closed || cfg.closed.unwrap_or(false))?;
    let src = a.expr.or(cfg.expr).ok_or_else(|| CliError::Usage(String::from("--expr is required")))?;
    let ast = parse_expression(&src, &g).map_err(|e| CliError::Usage(format!("expression {e}")))?;
    let x = Evaluator::new(&g).eval(&ast).map_err(|e| CliError::Failed(e.to_string()))?;
    let names = g.var_names();
    let terms = x
        .terms()
        .iter()
        .map(|(k, f)| TermJson {
            e: g.internal_edges().filter(|&e| k[e] != 0).map(|e| (g.edge_name(e).to_string(), k[e])).collect(),
            coeff: f.to_text(&names),
        })
        .collect();
    let text = x.to_text();
    let report = SigmaJson { genus: g.genus(), closed: g.closed(), expr: src, text: text.clone(), terms };
    emit(&a.out.json, &report, text + "\n", out)?;
    Ok(true)
}
