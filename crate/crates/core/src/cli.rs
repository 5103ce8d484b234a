//! Command-line front end behind the `rsp` binary.
//!
//! Exit codes: 0 success, 2 parse or configuration error, 3 invalid state,
//! 4 reproduction mismatch.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bloch::{
    geometric_discord, make_frame, ppt_min_eigenvalue, validate_state, TwoQubitState, Vec3, PPT_TOL, PSD_TOL,
};
use crate::error::RspError;
use crate::optimizer::{
    bob_alone_protocol, minimize_over_beta, optimal_g_over_povm, optimize_bistochastic_bell_diagonal,
    optimize_invariant, perturbed_isotropic, separable_optimal_fidelity, werner_invariant_protocol, OmegaClass,
    DEFAULT_BETA_GRID,
};
use crate::oracle::{compare_with_closed_form, restricted_quadratic_oracle, SearchConfig};
use crate::protocol::{
    average_g, fidelity_from_g, quadratic_fidelity, ChannelClass, DecodingChannel, DecodingPair, Encoding,
    CPTP_TOL, DEFAULT_NODES,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INVALID_STATE: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Rsp(#[from] RspError),
    #[error("{0}")]
    Usage(String),
    #[error("reproduction mismatch:\n{0}")]
    Mismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Rsp(RspError::InvalidState { .. }) => EXIT_INVALID_STATE,
            CliError::Mismatch(_) => EXIT_MISMATCH,
            _ => EXIT_PARSE,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Rsp(e.into())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "rsp", version, about = "Remote state preparation with one forward bit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a state file: positivity, PPT, Bell-diagonal form, discord.
    Validate { file: PathBuf },
    /// Optimise the averaged fidelity for one state and decoding class.
    Optimize(OptimizeArgs),
    /// Regenerate the reference tables and check them.
    Reproduce(ReproduceArgs),
    /// Optimal fidelity along a one-parameter family of states.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
#[group(id = "source", required = true, multiple = false)]
pub struct StateSource {
    /// JSON state file with fields `x`, `y`, `T`.
    #[arg(long, group = "source")]
    pub state: Option<PathBuf>,
    /// ρ(0, 0, −λI).
    #[arg(long, value_name = "LAMBDA", group = "source", allow_negative_numbers = true)]
    pub werner: Option<f64>,
    /// ρ(t ẑ, t ẑ, −λI).
    #[arg(long, num_args = 2, value_names = ["LAMBDA", "T"], group = "source", allow_negative_numbers = true)]
    pub dakic: Option<Vec<f64>>,
    /// ρ(0, 0, diag(t1, t2, t3)).
    #[arg(long, num_args = 3, value_names = ["T1", "T2", "T3"], group = "source", allow_negative_numbers = true)]
    pub bell: Option<Vec<f64>>,
}

impl StateSource {
    pub fn load(&self) -> CliResult<TwoQubitState> {
        if let Some(path) = &self.state {
            return read_state(path);
        }
        if let Some(l) = self.werner {
            return Ok(TwoQubitState::werner(l));
        }
        if let Some(v) = &self.dakic {
            return Ok(TwoQubitState::werner_with_marginals(v[0], v[1]));
        }
        if let Some(v) = &self.bell {
            let z = Vec3::zeros();
            return Ok(TwoQubitState::new(z, z, crate::Mat3::from_diagonal(&Vec3::new(v[0], v[1], v[2]))));
        }
        Err(CliError::Usage("no state given".into()))
    }
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub class: ChannelClass,
    #[command(flatten)]
    pub source: StateSource,
    /// Quadrature nodes on the target circle.
    #[arg(long, default_value_t = DEFAULT_NODES)]
    pub nodes: usize,
    /// Points on the half-sphere grid of plane normals.
    #[arg(long, default_value_t = DEFAULT_BETA_GRID)]
    pub beta_grid: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(long, default_value = "rsp-tables")]
    pub out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_NODES)]
    pub nodes: usize,
    #[arg(long, default_value_t = DEFAULT_BETA_GRID)]
    pub beta_grid: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    /// `ρ(t ẑ, t ẑ, −λI)` with `t` fixed by `--t`.
    Lambda,
    /// `ρ(t ẑ, t ẑ, −λI)` with `λ` fixed by `--lambda`.
    T,
    /// `diag(−⅓ − 2ε, −⅓ + ε/2, −⅓ + ε/2)`.
    Eps,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub param: SweepParam,
    #[arg(long, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub to: f64,
    /// Number of rows; 0 gives a header-only table.
    #[arg(long)]
    pub steps: usize,
    /// One or more classes, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub class: Vec<ChannelClass>,
    /// Fixed `λ` for `--param t`.
    #[arg(long, default_value_t = 0.2)]
    pub lambda: f64,
    /// Fixed `t` for `--param lambda`.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub t: f64,
    #[arg(long, default_value_t = DEFAULT_NODES)]
    pub nodes: usize,
    #[arg(long, default_value_t = DEFAULT_BETA_GRID)]
    pub beta_grid: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write each row's state as JSON into this directory.
    #[arg(long)]
    pub dump_states: Option<PathBuf>,
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        let _ = writeln!(stderr, "error: {e}");
        return e.exit_code();
    }
    match execute(&cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(CliError::Rsp(RspError::Io(e))) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// `RSP_THREADS` caps the worker pool.
fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var("RSP_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("RSP_THREADS must be a positive integer, got {value:?}")))?;
    if n == 0 {
        return Err(CliError::Usage("RSP_THREADS must be at least 1".into()));
    }
    // a pool configured earlier in the same process wins
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

pub fn execute(command: &Command, stdout: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Validate { file } => {
            let report = cmd_validate(&read_state(file)?);
            stdout.write_all(report.render().as_bytes())?;
            if report.valid {
                Ok(())
            } else {
                Err(RspError::InvalidState { min_eigenvalue: report.min_eigenvalue }.into())
            }
        }
        Command::Optimize(args) => {
            let text = cmd_optimize(args)?;
            emit(args.out.as_deref(), &text, stdout)
        }
        Command::Reproduce(args) => {
            let summary = cmd_reproduce(args)?;
            stdout.write_all(summary.text.as_bytes())?;
            if summary.mismatches.is_empty() {
                Ok(())
            } else {
                Err(CliError::Mismatch(summary.mismatches.join("\n")))
            }
        }
        Command::Sweep(args) => {
            let text = cmd_sweep(args)?;
            emit(args.out.as_deref(), &text, stdout)
        }
    }
}

fn emit(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn read_state(path: &Path) -> CliResult<TwoQubitState> {
    let text = std::fs::read_to_string(path)?;
    let state = TwoQubitState::from_json(&text)?;
    if !state.is_finite() {
        return Err(CliError::Usage(format!("{}: non-finite entries", path.display())));
    }
    Ok(state)
}

/// `x` with nine significant digits.
pub fn sig9(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-4..9).contains(&mag) {
        return format!("{x:.8e}");
    }
    let decimals = (8 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

fn header_comments(command: &str, run: &[(&str, String)]) -> String {
    let mut s = format!("# rsp {} {command}\n", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(
        s,
        "# defaults: n_nodes={DEFAULT_NODES} beta_grid={DEFAULT_BETA_GRID} psd_tol={PSD_TOL:e} ppt_tol={PPT_TOL:e} cptp_tol={CPTP_TOL:e}"
    );
    if !run.is_empty() {
        let parts: Vec<String> = run.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(s, "# run: {}", parts.join(" "));
    }
    s
}

fn csv_body(header: &[&str], rows: &[Vec<String>]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(RspError::from)?;
    for r in rows {
        w.write_record(r).map_err(RspError::from)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Rsp(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidateReport {
    pub valid: bool,
    pub min_eigenvalue: f64,
    pub trace: f64,
    pub ppt_min_eigenvalue: Option<f64>,
    pub entangled: Option<bool>,
    pub bell_diagonal: bool,
    pub discord: Option<f64>,
}

impl ValidateReport {
    pub fn summary(&self) -> String {
        if !self.valid {
            return "invalid state".into();
        }
        let mut s = if self.entangled == Some(true) { "entangled".to_string() } else { "separable".to_string() };
        if let Some(d) = self.discord {
            let _ = write!(s, ", discord {d:.5}");
        }
        s
    }

    pub fn render(&self) -> String {
        let opt = |v: Option<f64>| v.map(sig9).unwrap_or_else(|| "n/a".into());
        let mut s = String::new();
        let _ = writeln!(s, "valid: {}", self.valid);
        let _ = writeln!(s, "psd_margin: {}", sig9(self.min_eigenvalue));
        let _ = writeln!(s, "trace: {}", sig9(self.trace));
        let _ = writeln!(s, "ppt_min_eigenvalue: {}", opt(self.ppt_min_eigenvalue));
        let _ = writeln!(s, "entangled: {}", self.entangled.map_or("n/a".into(), |e| e.to_string()));
        let _ = writeln!(s, "bell_diagonal: {}", self.bell_diagonal);
        let _ = writeln!(s, "discord: {}", opt(self.discord));
        let _ = writeln!(s, "summary: {}", self.summary());
        s
    }
}

pub fn cmd_validate(state: &TwoQubitState) -> ValidateReport {
    let rep = validate_state(state, PSD_TOL);
    let bell = state.is_bell_diagonal(1e-12);
    if !rep.valid {
        return ValidateReport {
            valid: false,
            min_eigenvalue: rep.min_eigenvalue,
            trace: rep.trace,
            ppt_min_eigenvalue: None,
            entangled: None,
            bell_diagonal: bell,
            discord: None,
        };
    }
    let ppt = ppt_min_eigenvalue(state).ok();
    ValidateReport {
        valid: true,
        min_eigenvalue: rep.min_eigenvalue,
        trace: rep.trace,
        ppt_min_eigenvalue: ppt,
        entangled: ppt.map(|p| p < -PPT_TOL),
        bell_diagonal: bell,
        discord: if bell { geometric_discord(state).ok() } else { None },
    }
}

#[derive(Debug, Serialize)]
struct ChannelJson {
    t: [[f64; 3]; 3],
    v: [f64; 3],
}

impl From<&DecodingChannel> for ChannelJson {
    fn from(c: &DecodingChannel) -> Self {
        Self { t: [0, 1, 2].map(|i| [0, 1, 2].map(|j| c.t()[(i, j)])), v: arr(c.v()) }
    }
}

#[derive(Debug, Serialize)]
struct NodeJson {
    phi: f64,
    target: [f64; 3],
    omega: String,
    a_plus: f64,
    a: [f64; 3],
    r_dot_s: f64,
    fidelity: f64,
}

#[derive(Debug, Serialize)]
struct OptimizeJson {
    class: ChannelClass,
    f_star: f64,
    g_star: f64,
    beta_star: [f64; 3],
    n_nodes: usize,
    beta_grid: usize,
    planes_evaluated: usize,
    decoding_plus: ChannelJson,
    decoding_minus: ChannelJson,
    defaults: serde_json::Value,
    nodes: Vec<NodeJson>,
}

fn arr(v: &Vec3) -> [f64; 3] {
    [v[0], v[1], v[2]]
}

fn defaults_json() -> serde_json::Value {
    serde_json::json!({
        "n_nodes": DEFAULT_NODES,
        "beta_grid": DEFAULT_BETA_GRID,
        "psd_tol": PSD_TOL,
        "ppt_tol": PPT_TOL,
        "cptp_tol": CPTP_TOL,
    })
}

fn omega_label(c: OmegaClass) -> String {
    c.to_string()
}

pub fn cmd_optimize(args: &OptimizeArgs) -> CliResult<String> {
    let state = args.source.load()?;
    let res = minimize_over_beta(&state, args.class, args.beta_grid, args.nodes)?;
    let povm = optimal_g_over_povm(&state, &res.frame, &res.decoding, args.nodes)?;
    let nodes: Vec<NodeJson> = povm
        .nodes
        .iter()
        .map(|n| NodeJson {
            phi: n.phi,
            target: arr(&n.target),
            omega: omega_label(n.class),
            a_plus: n.encoding.a_plus(),
            a: arr(&n.encoding.a()),
            r_dot_s: n.value,
            fidelity: fidelity_from_g(n.value),
        })
        .collect();
    match args.format {
        Format::Json => {
            let report = OptimizeJson {
                class: res.class,
                f_star: res.f_star,
                g_star: res.g_star,
                beta_star: arr(&res.beta_star),
                n_nodes: args.nodes,
                beta_grid: args.beta_grid,
                planes_evaluated: res.planes_evaluated,
                decoding_plus: (&res.decoding.plus).into(),
                decoding_minus: (&res.decoding.minus).into(),
                defaults: defaults_json(),
                nodes,
            };
            Ok(serde_json::to_string_pretty(&report).map_err(RspError::from)? + "\n")
        }
        Format::Csv => {
            let b = res.beta_star;
            let mut s = header_comments(
                "optimize",
                &[
                    ("class", res.class.to_string()),
                    ("n_nodes", args.nodes.to_string()),
                    ("beta_grid", args.beta_grid.to_string()),
                ],
            );
            let _ = writeln!(s, "# F_star={} G_star={}", sig9(res.f_star), sig9(res.g_star));
            let _ = writeln!(s, "# beta_star={} {} {}", sig9(b[0]), sig9(b[1]), sig9(b[2]));
            let header = [
                "phi [rad]", "s_x [-]", "s_y [-]", "s_z [-]", "omega", "a_plus [-]", "a_x [-]", "a_y [-]", "a_z [-]",
                "r_dot_s [-]", "fidelity [-]",
            ];
            let rows: Vec<Vec<String>> = nodes
                .iter()
                .map(|n| {
                    let mut r = vec![sig9(n.phi)];
                    r.extend(n.target.iter().map(|v| sig9(*v)));
                    r.push(n.omega.clone());
                    r.push(sig9(n.a_plus));
                    r.extend(n.a.iter().map(|v| sig9(*v)));
                    r.push(sig9(n.r_dot_s));
                    r.push(sig9(n.fidelity));
                    r
                })
                .collect();
            Ok(s + &csv_body(&header, &rows)?)
        }
    }
}

/// One cross-check in a reproduced table.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub table: &'static str,
    pub label: String,
    pub value: f64,
    pub expected: f64,
    pub tolerance: f64,
    /// Only `value ≤ expected + 1e-9` and `expected − value ≤ tolerance` are required.
    pub one_sided: bool,
}

impl Check {
    pub fn passed(&self) -> bool {
        let diff = self.value - self.expected;
        if self.one_sided {
            diff <= 1e-9 && -diff <= self.tolerance
        } else {
            diff.abs() <= self.tolerance
        }
    }

    fn status(&self) -> String {
        if self.passed() { "ok" } else { "MISMATCH" }.into()
    }

    fn describe(&self) -> String {
        format!(
            "table {} [{}]: value {} expected {} diff {:.3e} tolerance {:.1e}",
            self.table,
            self.label,
            sig9(self.value),
            sig9(self.expected),
            self.value - self.expected,
            self.tolerance
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub file: &'static str,
    pub csv: String,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReproduceSummary {
    pub tables: Vec<Table>,
    pub text: String,
    pub mismatches: Vec<String>,
}

fn check_row(c: &Check, leading: Vec<String>) -> Vec<String> {
    let mut r = leading;
    r.extend([
        sig9(c.value),
        sig9(c.expected),
        sig9((c.value - c.expected).abs()),
        format!("{:e}", c.tolerance),
        c.status(),
    ]);
    r
}

const CHECK_COLUMNS: [&str; 5] = ["value [-]", "expected [-]", "abs_diff [-]", "tolerance [-]", "status"];

fn with_check_columns(lead: &[&'static str]) -> Vec<&'static str> {
    lead.iter().copied().chain(CHECK_COLUMNS).collect()
}

/// Table (a): the separable baseline, closed form, constructive and oracle.
pub fn table_baseline(nodes: usize) -> CliResult<Table> {
    let expected = 0.5 + 1.0 / std::f64::consts::PI;
    let frame = make_frame(&Vec3::z())?;
    let (strat, dec) = bob_alone_protocol(&frame)?;
    let constructive = fidelity_from_g(average_g(&TwoQubitState::werner(0.4), &frame, &strat, &dec, nodes)?);
    let oracle = compare_with_closed_form(&TwoQubitState::werner(1.0 / 3.0), ChannelClass::General, &SearchConfig::default())?;
    let mk = |label: &str, value: f64, tol: f64, one_sided: bool| Check {
        table: "a",
        label: label.into(),
        value,
        expected,
        tolerance: tol,
        one_sided,
    };
    let checks = vec![
        mk("closed form", separable_optimal_fidelity(), 1e-9, false),
        mk("constructive protocol", constructive, 1e-6, false),
        mk("oracle general, werner 1/3", fidelity_from_g(oracle.oracle_g), 2e-2, true),
    ];
    let rows: Vec<Vec<String>> = checks.iter().map(|c| check_row(c, vec![c.label.clone()])).collect();
    let csv = header_comments("reproduce a", &[("n_nodes", nodes.to_string())])
        + &csv_body(&with_check_columns(&["quantity"]), &rows)?;
    Ok(Table { name: "a", file: "table_a_baseline.csv", csv, checks })
}

/// Table (b): invariant-class optimum against `(1 + λ)/2`.
pub fn table_invariant(nodes: usize, beta_grid: usize) -> CliResult<Table> {
    let cases: [(&str, f64, f64); 4] = [
        ("werner", 0.1, 0.0),
        ("werner", 0.2, 0.0),
        ("marginals", 0.2, 0.4),
        ("werner", 1.0 / 3.0, 0.0),
    ];
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    let mut f = Vec::new();
    for (label, lambda, t) in cases {
        let st = TwoQubitState::werner_with_marginals(lambda, t);
        let entangled = crate::bloch::is_entangled(&st)?;
        let value = optimize_invariant(&st, nodes, beta_grid)?.f_star;
        f.push(value);
        let c = Check {
            table: "b",
            label: format!("{label} lambda={} t={}", sig9(lambda), sig9(t)),
            value,
            expected: 0.5 * (1.0 + lambda),
            tolerance: 1e-5,
            one_sided: false,
        };
        rows.push(check_row(&c, vec![label.into(), sig9(lambda), sig9(t), entangled.to_string()]));
        checks.push(c);
    }
    let margin = Check {
        table: "b",
        label: "separable lambda=1/3 minus entangled lambda=1/5 t=2/5".into(),
        value: f[3] - f[2],
        expected: 1.0 / 15.0,
        tolerance: 2e-5,
        one_sided: false,
    };
    rows.push(check_row(&margin, vec!["margin".into(), String::new(), String::new(), String::new()]));
    checks.push(margin);
    let csv = header_comments(
        "reproduce b",
        &[("class", "invariant".into()), ("n_nodes", nodes.to_string()), ("beta_grid", beta_grid.to_string())],
    ) + &csv_body(&with_check_columns(&["state", "lambda [-]", "t [-]", "entangled"]), &rows)?;
    Ok(Table { name: "b", file: "table_b_invariant.csv", csv, checks })
}

/// Table (c): isotropic versus perturbed Bell-diagonal states under spin decodings.
pub fn table_bistochastic(nodes: usize, beta_grid: usize) -> CliResult<Table> {
    let third = -1.0 / 3.0;
    let f_t1 = optimize_bistochastic_bell_diagonal(third, third, third)?;
    let mut checks = vec![Check {
        table: "c",
        label: "T1 closed form".into(),
        value: f_t1,
        expected: 2.0 / 3.0,
        tolerance: 1e-9,
        one_sided: false,
    }];
    let mut rows = vec![check_row(&checks[0], vec!["0".into(), "T1".into(), "closed form".into(), "false".into()])];
    for eps in [0.01, 0.04, 0.1] {
        let st = perturbed_isotropic(eps)?;
        let entangled = crate::bloch::is_entangled(&st)?;
        let expected = 2.0 / 3.0 - eps / 4.0;
        let closed = optimize_bistochastic_bell_diagonal(st.t[(0, 0)], st.t[(1, 1)], st.t[(2, 2)])?;
        let numeric = minimize_over_beta(&st, ChannelClass::Bistochastic, beta_grid, nodes)?.f_star;
        for (method, value, tol) in [("closed form", closed, 1e-9), ("optimiser", numeric, 1e-6)] {
            let c = Check {
                table: "c",
                label: format!("T2 eps={} {method}", sig9(eps)),
                value,
                expected,
                tolerance: tol,
                one_sided: false,
            };
            rows.push(check_row(&c, vec![sig9(eps), "T2".into(), method.into(), entangled.to_string()]));
            checks.push(c);
        }
    }
    let csv = header_comments(
        "reproduce c",
        &[("class", "bistochastic".into()), ("n_nodes", nodes.to_string()), ("beta_grid", beta_grid.to_string())],
    ) + &csv_body(&with_check_columns(&["eps [-]", "state", "method", "entangled"]), &rows)?;
    Ok(Table { name: "c", file: "table_c_bistochastic.csv", csv, checks })
}

/// Table (d): the quadratic figure `∫ (ŝ·r)²`. Only the fixed-guess value is
/// checked; restricted-protocol values are reported.
pub fn table_quadratic(nodes: usize) -> CliResult<Table> {
    let frame = make_frame(&Vec3::z())?;
    let guess = DecodingChannel::constant(&frame.e1)?;
    let guess_pair = DecodingPair::new(guess, guess)?;
    let unbiased = |_: &Vec3| Ok(Encoding::unbiased());
    let random_guess = quadratic_fidelity(&TwoQubitState::werner(1.0 / 3.0), &frame, &unbiased, &guess_pair, nodes)?;
    let check = Check {
        table: "d",
        label: "fixed pure guess".into(),
        value: random_guess,
        expected: 0.5,
        tolerance: 1e-9,
        one_sided: false,
    };
    let header = ["protocol", "state", "entangled", "P [-]", "asserted", "status"];
    let mut rows = vec![vec![
        "fixed pure guess".into(),
        "werner lambda=1/3".into(),
        "false".into(),
        sig9(random_guess),
        "true".into(),
        check.status(),
    ]];
    let (vn, flip_pair) = werner_invariant_protocol(&frame)?;
    for (label, st) in [
        ("werner lambda=1/3", TwoQubitState::werner(1.0 / 3.0)),
        ("marginals lambda=1/5 t=2/5", TwoQubitState::werner_with_marginals(0.2, 0.4)),
    ] {
        let entangled = crate::bloch::is_entangled(&st)?.to_string();
        let p = quadratic_fidelity(&st, &frame, &vn, &flip_pair, nodes)?;
        let oracle = restricted_quadratic_oracle(&st, &SearchConfig::default())?;
        for (proto, v) in [("von neumann, flip/identity", p), ("oracle over restricted class", oracle)] {
            rows.push(vec![proto.into(), label.into(), entangled.clone(), sig9(v), "false".into(), "reported".into()]);
        }
    }
    let csv = header_comments("reproduce d", &[("n_nodes", nodes.to_string())]) + &csv_body(&header, &rows)?;
    Ok(Table { name: "d", file: "table_d_quadratic.csv", csv, checks: vec![check] })
}

pub fn cmd_reproduce(args: &ReproduceArgs) -> CliResult<ReproduceSummary> {
    std::fs::create_dir_all(&args.out)?;
    let tables = vec![
        table_baseline(args.nodes)?,
        table_invariant(args.nodes, args.beta_grid)?,
        table_bistochastic(args.nodes, args.beta_grid)?,
        table_quadratic(args.nodes)?,
    ];
    let mut text = String::new();
    let mut mismatches = Vec::new();
    for t in &tables {
        let path = args.out.join(t.file);
        std::fs::write(&path, &t.csv)?;
        let failed: Vec<String> = t.checks.iter().filter(|c| !c.passed()).map(Check::describe).collect();
        let _ = writeln!(
            text,
            "table {}: {} ({} checks, {} mismatches)",
            t.name,
            path.display(),
            t.checks.len(),
            failed.len()
        );
        mismatches.extend(failed);
    }
    if mismatches.is_empty() {
        text.push_str("all checks passed\n");
    }
    Ok(ReproduceSummary { tables, text, mismatches })
}

/// Evenly spaced values including both ends; `steps = 1` gives `[from]`.
pub fn sweep_values(from: f64, to: f64, steps: usize) -> CliResult<Vec<f64>> {
    if !from.is_finite() || !to.is_finite() {
        return Err(CliError::Usage("sweep bounds must be finite".into()));
    }
    Ok(match steps {
        0 => Vec::new(),
        1 => vec![from],
        n => (0..n).map(|k| from + (to - from) * k as f64 / (n - 1) as f64).collect(),
    })
}

pub fn sweep_state(args: &SweepArgs, value: f64) -> CliResult<TwoQubitState> {
    Ok(match args.param {
        SweepParam::Lambda => TwoQubitState::werner_with_marginals(value, args.t),
        SweepParam::T => TwoQubitState::werner_with_marginals(args.lambda, value),
        SweepParam::Eps => perturbed_isotropic(value)?,
    })
}

pub fn cmd_sweep(args: &SweepArgs) -> CliResult<String> {
    let values = sweep_values(args.from, args.to, args.steps)?;
    let name = match args.param {
        SweepParam::Lambda => "lambda",
        SweepParam::T => "t",
        SweepParam::Eps => "eps",
    };
    let param_col = format!("{name} [-]");
    let class_cols: Vec<String> = args.class.iter().map(|c| format!("F_{c} [-]")).collect();
    let mut header: Vec<&str> = vec![&param_col, "entangled"];
    header.extend(class_cols.iter().map(String::as_str));
    if let Some(dir) = &args.dump_states {
        std::fs::create_dir_all(dir)?;
    }
    let mut rows = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        let st = sweep_state(args, v)?;
        let entangled = crate::bloch::is_entangled(&st)?;
        if let Some(dir) = &args.dump_states {
            std::fs::write(dir.join(format!("state_{i:04}.json")), st.to_json())?;
        }
        let mut row = vec![sig9(v), entangled.to_string()];
        for &class in &args.class {
            row.push(sig9(minimize_over_beta(&st, class, args.beta_grid, args.nodes)?.f_star));
        }
        rows.push(row);
    }
    let classes: Vec<String> = args.class.iter().map(ToString::to_string).collect();
    let mut run = vec![
        ("param", name.to_string()),
        ("classes", classes.join(",")),
        ("n_nodes", args.nodes.to_string()),
        ("beta_grid", args.beta_grid.to_string()),
    ];
    match args.param {
        SweepParam::Lambda => run.push(("t", sig9(args.t))),
        SweepParam::T => run.push(("lambda", sig9(args.lambda))),
        SweepParam::Eps => {}
    }
    Ok(header_comments("sweep", &run) + &csv_body(&header, &rows)?)
}
