//! Command-line front end for `padic-core`.
//!
//! [`run_command`] parses an argument vector, dispatches to the library and
//! writes either human-readable text or one JSON record per result. Exit codes:
//! `0` success, `1` a cross-check disagreed, `2` usage or domain error,
//! `3` no convergence within the level and residue caps.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use padic_core::bernoulli::{bernoulli_number, gen_bernoulli, Rational};
use padic_core::integration::{mahler_coefficients, volkenborn_mahler, volkenborn_riemann, ConvergenceReport, Integrand};
use padic_core::mascheroni::{gamma, gamma_consensus, GammaMethod, GammaResult};
use padic_core::measures::{
    additivity_check, ball_value_padic, parse_rational, seminorm, BernoulliMu1, ClopenBall, ClopenSet,
    HaarDistribution, Measure, QadicHaar, RegularizedBernoulli, TableMeasure,
};
use padic_core::padic::{unit_decompose, DEFAULT_RESIDUE_BUDGET};
use padic_core::zeta::{pairwise_agreement, zeta, zeta_all_branches, zeta_consistency, ZetaGrid, ZetaMethod};
use padic_core::{Error, PadicContext, PadicNumber};

pub const DEFAULT_LEVEL_CAP: u32 = 24;
pub const LEVEL_CAP_ENV: &str = "PADIC_LEVEL_CAP";

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "padic", version, about = "Exact p-adic measures, Volkenborn integrals, ζ_{p,i} and γ_p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// p-adic Euler–Mascheroni constant γ_p.
    Gamma {
        #[command(flatten)]
        common: CommonArgs,
        /// `all`, or a comma-separated list of A, B, B', C, D, E.
        #[arg(long, default_value = "all")]
        method: String,
    },
    /// Kubota–Leopoldt ζ_{p,i}(s) on one branch.
    Zeta {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, allow_negative_numbers = true)]
        branch: i64,
        /// Integer or `a/b`.
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        /// `all`, or a comma-separated list of haar, bernoulli, washington.
        #[arg(long, default_value = "all")]
        method: String,
    },
    /// Three-way zeta agreement over the default grid, with pole and special-value checks.
    ZetaAudit {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Volkenborn integral of x^n over Z_p (or its units).
    Volkenborn {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        moment: usize,
        #[arg(long)]
        units: bool,
        #[arg(long, value_enum, default_value_t = Route::Riemann)]
        route: Route,
    },
    /// Mahler coefficients of x^n and the Volkenborn integral they give.
    Mahler {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        moment: usize,
        #[arg(long)]
        units: bool,
        /// Window length; defaults to 2n + 2.
        #[arg(long)]
        count: Option<usize>,
    },
    /// Value, additivity and seminorm of a measure on a ball a + p^n Z_p.
    Measure {
        #[command(flatten)]
        common: CommonArgs,
        /// regularized | mu1 | haar | haar-q:Q | table
        #[arg(long, default_value = "regularized")]
        measure: String,
        /// Table file for `--measure table`.
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        level: u32,
        #[arg(long, default_value_t = 0)]
        residue: u64,
        /// Additivity is checked on levels 0..=depth.
        #[arg(long, default_value_t = 3)]
        additivity_depth: u32,
        /// Seminorm refinement depth; defaults to level + 2.
        #[arg(long)]
        depth: Option<u32>,
    },
    /// Bernoulli number B_n, exactly and p-adically.
    Bernoulli {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long = "n")]
        n: usize,
    },
    /// Generalized Bernoulli number B_{n,ω^-c}.
    GenBernoulli {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long = "n")]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        character: i64,
    },
    /// Teichmüller decomposition x = p^v ω(x) ⟨x⟩.
    Teichmuller {
        #[command(flatten)]
        common: CommonArgs,
        /// Integer or `a/b`.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
}

#[derive(Args, Debug, Clone)]
struct CommonArgs {
    #[arg(long, short = 'p')]
    prime: u32,
    /// Absolute precision: results are reported to O(p^k).
    #[arg(long, short = 'k')]
    precision: Option<u32>,
    /// Deepest level for enumerated sums; overrides PADIC_LEVEL_CAP.
    #[arg(long)]
    level_cap: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_RESIDUE_BUDGET)]
    residue_budget: u64,
    #[arg(long, value_enum, default_value_t = OutputMode::Text)]
    output: OutputMode,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputMode {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Route {
    Riemann,
    Mahler,
    Both,
}

/// Validated settings shared by every subcommand.
#[derive(Clone, Debug)]
pub struct CliConfig {
    pub context: PadicContext,
    /// Absolute precision `k`.
    pub precision: i64,
    pub output: OutputMode,
}

impl CliConfig {
    fn from_args(args: &CommonArgs, default_precision: u32, env_cap: Option<String>) -> Result<Self, Error> {
        let cap = match (args.level_cap, env_cap) {
            (Some(c), _) => c,
            (None, Some(s)) => s
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("{LEVEL_CAP_ENV}={s:?} is not a level")))?,
            (None, None) => DEFAULT_LEVEL_CAP,
        };
        let k = args.precision.unwrap_or(default_precision);
        let context = PadicContext::new(args.prime, k, cap)?.with_residue_budget(args.residue_budget);
        Ok(CliConfig { context, precision: k as i64, output: args.output })
    }

    fn prime(&self) -> u32 {
        self.context.prime()
    }
}

/// One result, as emitted in `--output json` mode.
#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    pub command: String,
    pub p: u32,
    pub method: String,
    pub value: PadicNumber,
    pub converged: bool,
    pub levels: u32,
    /// Command-specific labels (branch, s, n, ...).
    pub fields: Map<String, Value>,
}

impl Record {
    fn new(command: &str, method: impl Into<String>, value: PadicNumber, converged: bool, levels: u32) -> Self {
        Record {
            command: command.into(),
            p: value.prime(),
            method: method.into(),
            value,
            converged,
            levels,
            fields: Map::new(),
        }
    }

    fn with(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.fields.insert(key.into(), v.into());
        self
    }

    pub fn to_json(&self) -> Value {
        let mut obj = json!({
            "command": self.command,
            "p": self.p,
            "method": self.method,
            "valuation": self.value.valuation(),
            "digits": self.value.digits(),
            "precision": self.value.absolute_precision(),
            "converged": self.converged,
            "levels": self.levels,
            "value": self.value.to_string(),
        });
        let map = obj.as_object_mut().expect("object literal");
        for (k, v) in &self.fields {
            map.entry(k.clone()).or_insert_with(|| v.clone());
        }
        obj
    }

    /// Inverse of [`Record::to_json`] on one output line.
    pub fn parse(line: &str) -> Result<Self, String> {
        let v: Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
        let obj = v.as_object().ok_or("record is not an object")?;
        let str_field = |k: &str| obj.get(k).and_then(Value::as_str).map(str::to_owned).ok_or(format!("missing {k}"));
        let int_field = |k: &str| obj.get(k).and_then(Value::as_i64).ok_or(format!("missing {k}"));
        let p = u32::try_from(int_field("p")?).map_err(|e| e.to_string())?;
        let digits: Vec<u32> = obj
            .get("digits")
            .and_then(Value::as_array)
            .ok_or("missing digits")?
            .iter()
            .map(|d| d.as_u64().and_then(|d| u32::try_from(d).ok()).ok_or("bad digit"))
            .collect::<Result<_, _>>()?;
        let value = PadicNumber::from_digits(p, int_field("valuation")?, &digits, int_field("precision")?)
            .map_err(|e| e.to_string())?;
        const CORE: [&str; 9] = ["command", "p", "method", "valuation", "digits", "precision", "converged", "levels", "value"];
        let fields = obj.iter().filter(|(k, _)| !CORE.contains(&k.as_str())).map(|(k, v)| (k.clone(), v.clone())).collect();
        Ok(Record {
            command: str_field("command")?,
            p,
            method: str_field("method")?,
            value,
            converged: obj.get("converged").and_then(Value::as_bool).ok_or("missing converged")?,
            levels: u32::try_from(int_field("levels")?).map_err(|e| e.to_string())?,
            fields,
        })
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotSummable(_) | Error::LevelTooDeep { .. } | Error::InsufficientPrecision(_) => EXIT_NOT_CONVERGED,
        _ => EXIT_USAGE,
    }
}

/// Collects output lines and the worst status seen.
struct Session<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    mode: OutputMode,
    status: i32,
}

impl Session<'_> {
    fn text(&mut self, line: impl AsRef<str>) -> std::io::Result<()> {
        if self.mode == OutputMode::Text {
            writeln!(self.out, "{}", line.as_ref())?;
        }
        Ok(())
    }

    fn record(&mut self, r: Record) -> std::io::Result<()> {
        if !r.converged {
            self.flag(EXIT_NOT_CONVERGED);
        }
        if self.mode == OutputMode::Json {
            writeln!(self.out, "{}", r.to_json())?;
        }
        Ok(())
    }

    fn diagnostic(&mut self, what: &str, e: &Error) -> std::io::Result<()> {
        self.flag(exit_code(e));
        writeln!(self.err, "padic: {what}: {e}")
    }

    /// Keeps the most severe code: usage > not converged > mismatch.
    fn flag(&mut self, code: i32) {
        let rank = |c: i32| match c {
            EXIT_USAGE => 3,
            EXIT_NOT_CONVERGED => 2,
            EXIT_MISMATCH => 1,
            _ => 0,
        };
        if rank(code) > rank(self.status) {
            self.status = code;
        }
    }
}

/// Runs the CLI on `argv` (including the program name), reading `PADIC_LEVEL_CAP`
/// from the process environment.
pub fn run_command<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_command_with_env(argv, std::env::var(LEVEL_CAP_ENV).ok(), out, err)
}

/// [`run_command`] with an explicit value for `PADIC_LEVEL_CAP`.
pub fn run_command_with_env<I, T>(argv: I, level_cap_env: Option<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let help = matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion);
            let target: &mut dyn Write = if help { out } else { err };
            let _ = write!(target, "{}", e.render());
            return if help { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let (common, default_k) = match &cli.command {
        Command::Gamma { common, .. } => (common, 10),
        Command::Zeta { common, .. } => (common, 4),
        Command::ZetaAudit { common } => (common, 4),
        Command::Volkenborn { common, .. } | Command::Mahler { common, .. } => (common, 10),
        Command::Measure { common, .. } => (common, 10),
        Command::Bernoulli { common, .. } | Command::GenBernoulli { common, .. } => (common, 10),
        Command::Teichmuller { common, .. } => (common, 10),
    };
    let cfg = match CliConfig::from_args(common, default_k, level_cap_env) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "padic: {e}");
            return EXIT_USAGE;
        }
    };
    let mut session = Session { out, err, mode: cfg.output, status: EXIT_OK };
    let outcome = dispatch(&cli.command, &cfg, &mut session);
    match outcome {
        Ok(Ok(())) => session.status,
        Ok(Err(e)) => {
            let _ = writeln!(session.err, "padic: {e}");
            exit_code(&e)
        }
        Err(io) => {
            let _ = writeln!(session.err, "padic: output error: {io}");
            EXIT_USAGE
        }
    }
}

type Outcome = std::io::Result<Result<(), Error>>;

fn dispatch(cmd: &Command, cfg: &CliConfig, s: &mut Session) -> Outcome {
    match cmd {
        Command::Gamma { method, .. } => cmd_gamma(cfg, method, s),
        Command::Zeta { branch, s: arg, method, .. } => cmd_zeta(cfg, *branch, arg, method, s),
        Command::ZetaAudit { .. } => cmd_zeta_audit(cfg, s),
        Command::Volkenborn { moment, units, route, .. } => cmd_volkenborn(cfg, *moment, *units, *route, s),
        Command::Mahler { moment, units, count, .. } => cmd_mahler(cfg, *moment, *units, *count, s),
        Command::Measure { measure, table, level, residue, additivity_depth, depth, .. } => {
            cmd_measure(cfg, measure, table.as_ref(), *level, *residue, *additivity_depth, *depth, s)
        }
        Command::Bernoulli { n, .. } => cmd_bernoulli(cfg, *n, s),
        Command::GenBernoulli { n, character, .. } => cmd_gen_bernoulli(cfg, *n, *character, s),
        Command::Teichmuller { x, .. } => cmd_teichmuller(cfg, x, s),
    }
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return Ok(Err(e.into())),
        }
    };
}

fn parse_list<T: std::str::FromStr<Err = Error>>(spec: &str, all: &[T]) -> Result<Vec<T>, Error>
where
    T: Copy,
{
    if spec.eq_ignore_ascii_case("all") {
        return Ok(all.to_vec());
    }
    spec.split(',').map(|m| m.trim().parse()).collect()
}

fn parse_arg(s: &str) -> Result<Rational, Error> {
    parse_rational(s).map_err(Error::Parse)
}

fn status_word(converged: bool) -> &'static str {
    if converged {
        "converged"
    } else {
        "NOT CONVERGED"
    }
}

fn gamma_line(g: &GammaResult, p: u32) -> String {
    format!(
        "{:<11}γ_{p} = {}  [{} levels, {} terms, {}]",
        format!("[{}]", g.method.name()),
        g.value,
        g.levels,
        g.terms,
        status_word(g.converged)
    )
}

fn gamma_record(g: &GammaResult) -> Record {
    Record::new("gamma", g.method.name(), g.value.clone(), g.converged, g.levels).with("terms", g.terms)
}

fn cmd_gamma(cfg: &CliConfig, method: &str, s: &mut Session) -> Outcome {
    let p = cfg.prime();
    let k = cfg.precision;
    let methods = tri!(parse_list(method, &GammaMethod::ALL));
    if methods.len() == 1 {
        let g = tri!(gamma(methods[0], &cfg.context, k));
        s.text(gamma_line(&g, p))?;
        s.record(gamma_record(&g))?;
        return Ok(Ok(()));
    }
    let c = gamma_consensus(&cfg.context, k, &methods);
    for (m, r) in &c.results {
        match r {
            Ok(g) => {
                s.text(gamma_line(g, p))?;
                s.record(gamma_record(g))?;
            }
            Err(e) => s.diagnostic(&format!("gamma {}", m.name()), e)?,
        }
    }
    let unanimous = c.unanimous();
    if !unanimous && c.all_converged() {
        s.flag(EXIT_MISMATCH);
        for (a, b, v) in &c.disagreements {
            s.text(format!("  {} vs {}: agree to O({p}^{v})", a.name(), b.name()))?;
        }
    }
    if let Some(v) = &c.consensus {
        s.text(format!("{:<11}γ_{p} = {v}  [{}]", "[consensus]", if unanimous { "unanimous" } else { "partial" }))?;
        s.record(Record::new("gamma", "consensus", v.clone(), unanimous, 0))?;
    }
    match (c.matches_reference(), &c.reference) {
        (Some(true), Some(r)) => {
            let shared = r.absolute_precision().min(c.consensus.as_ref().map_or(0, |v| v.absolute_precision()));
            s.text(format!("reference: published digits match to O({p}^{shared})"))?;
        }
        (Some(false), _) => {
            s.flag(EXIT_MISMATCH);
            s.text("reference: MISMATCH with published digits")?;
        }
        _ => s.text("reference: none published for this prime")?,
    }
    Ok(Ok(()))
}

fn s_label(r: &Rational) -> String {
    r.to_string()
}

fn exact_padic(r: &Rational, p: u32, k: i64) -> PadicNumber {
    PadicNumber::from_ratio_abs(r, p, k + 64)
}

fn zeta_line(i: i64, s_text: &str, m: ZetaMethod, value: &PadicNumber, report: &ConvergenceReport, p: u32) -> String {
    format!(
        "{:<13}ζ_{{{p},{i}}}({s_text}) = {value}  [{} levels, {}]",
        format!("[{}]", m.name()),
        report.levels,
        status_word(report.converged)
    )
}

fn cmd_zeta(cfg: &CliConfig, branch: i64, s_arg: &str, method: &str, s: &mut Session) -> Outcome {
    let p = cfg.prime();
    let k = cfg.precision;
    let methods = tri!(parse_list(method, &ZetaMethod::ALL));
    let sr = tri!(parse_arg(s_arg));
    let sp = exact_padic(&sr, p, k);
    let label = s_label(&sr);
    let i = branch.rem_euclid(p as i64 - 1);
    let evals = if methods.len() == 1 {
        vec![(methods[0], zeta(methods[0], i, &sp, &cfg.context, k))]
    } else {
        let mut rows = tri!(zeta_all_branches(&[i], &sp, &methods, &cfg.context, k));
        rows.pop().map(|(_, e)| e).unwrap_or_default()
    };
    for (m, r) in &evals {
        match r {
            Ok(z) => {
                s.text(zeta_line(i, &label, *m, &z.value, &z.report, p))?;
                s.record(
                    Record::new("zeta", m.name(), z.value.clone(), z.report.converged, z.report.levels)
                        .with("branch", i)
                        .with("s", label.clone()),
                )?;
            }
            Err(e) => s.diagnostic(&format!("zeta {}", m.name()), e)?,
        }
    }
    if evals.len() > 1 {
        match pairwise_agreement(&evals) {
            Some(a) => {
                let a = a.min(k);
                s.text(format!("agreement: all methods agree to O({p}^{a})"))?;
                if a < k {
                    s.flag(EXIT_MISMATCH);
                }
            }
            None => s.text("agreement: not all methods produced a value")?,
        }
    }
    Ok(Ok(()))
}

fn cmd_zeta_audit(cfg: &CliConfig, s: &mut Session) -> Outcome {
    let p = cfg.prime();
    let k = cfg.precision;
    let audit = zeta_consistency(&cfg.context, &ZetaGrid::default_for(p), k);
    s.text(format!("zeta audit for p = {p} to O({p}^{k})"))?;
    for cell in &audit.cells {
        let i = cell.branch.index();
        let label = s_label(&cell.s);
        let verdict = match cell.agreement {
            Some(a) if a >= k => "agree".to_string(),
            Some(a) => format!("DISAGREE (O({p}^{a}))"),
            None => "FAILED".to_string(),
        };
        let shown = cell.evals.iter().find_map(|(_, r)| r.as_ref().ok());
        match shown {
            Some(z) => s.text(format!("i={i} s={label}: {} {verdict}", z.value))?,
            None => s.text(format!("i={i} s={label}: {verdict}"))?,
        }
        for (m, r) in &cell.evals {
            match r {
                Ok(z) => s.record(
                    Record::new("zeta-audit", m.name(), z.value.clone(), z.report.converged, z.report.levels)
                        .with("branch", i)
                        .with("s", label.clone()),
                )?,
                Err(e) => writeln!(s.err, "padic: zeta {} at i={i} s={label}: {e}", m.name())?,
            }
        }
    }
    for d in &audit.diagnostics {
        let i = d.branch.index();
        let got = match &d.inner {
            Ok(v) => v.to_string(),
            Err(e) => format!("error: {e}"),
        };
        s.text(format!("inner integral i={i} at s=1: {got} (expected {}) {}", d.expected, pass_word(d.ok())))?;
        if let Ok(v) = &d.inner {
            s.record(Record::new("zeta-audit", "inner", v.clone(), d.ok(), 0).with("branch", i).with("s", "1"))?;
        }
    }
    for sv in &audit.special_values {
        s.text(format!(
            "special value ζ_{{{p},{}}}({}) = {} {}",
            sv.branch.index(),
            1 - sv.n as i64,
            sv.expected,
            pass_word(sv.ok())
        ))?;
    }
    let passed = audit.passed();
    s.text(format!("audit: {}", pass_word(passed)))?;
    if !passed {
        s.flag(EXIT_MISMATCH);
    }
    Ok(Ok(()))
}

fn pass_word(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn moment_integrand(n: usize, units: bool) -> Integrand {
    let f = Integrand::monomial(n);
    if units {
        f.on_units()
    } else {
        f
    }
}

/// `B_n`, or `(1 − p^(n−1)) B_n` over the units.
fn exact_moment(n: usize, p: u32, units: bool) -> Rational {
    let b = bernoulli_number(n);
    if !units {
        return b;
    }
    let one = Rational::from_integer(1.into());
    let pr = Rational::from_integer(p.into());
    (one - pr.pow(n as i32 - 1)) * b
}

fn domain_label(units: bool) -> &'static str {
    if units {
        "_{Z_p^×}"
    } else {
        ""
    }
}

fn cmd_volkenborn(cfg: &CliConfig, n: usize, units: bool, route: Route, s: &mut Session) -> Outcome {
    let p = cfg.prime();
    let k = cfg.precision;
    let exact = exact_moment(n, p, units);
    let expected = PadicNumber::from_ratio_abs(&exact, p, k);
    let f = moment_integrand(n, units);
    let mut values = Vec::new();
    if matches!(route, Route::Riemann | Route::Both) {
        let r = tri!(volkenborn_riemann(&f, &cfg.context, k));
        s.text(format!(
            "∫{} x^{n} dx = {exact} ≡ {}  [riemann, {} levels, {}]",
            domain_label(units),
            r.value,
            r.levels,
            status_word(r.converged)
        ))?;
        s.record(Record::new("volkenborn", "riemann", r.value.clone(), r.converged, r.levels).with("n", n))?;
        values.push(r.value);
    }
    if matches!(route, Route::Mahler | Route::Both) {
        let coeffs = mahler_coefficients(&f, &cfg.context, 2 * n + 2, k);
        let v = tri!(volkenborn_mahler(&coeffs, k));
        s.text(format!("∫{} x^{n} dx = {exact} ≡ {v}  [mahler, {} coefficients]", domain_label(units), coeffs.len()))?;
        s.record(Record::new("volkenborn", "mahler", v.clone(), true, coeffs.len() as u32).with("n", n))?;
        values.push(v);
    }
    for v in &values {
        if v.truncate_abs(k) != expected || v.agreement(&expected) < k {
            s.flag(EXIT_MISMATCH);
            s.text(format!("MISMATCH: expected {expected}"))?;
        }
    }
    Ok(Ok(()))
}

fn cmd_mahler(cfg: &CliConfig, n: usize, units: bool, count: Option<usize>, s: &mut Session) -> Outcome {
    let k = cfg.precision;
    let count = count.unwrap_or(2 * n + 2);
    let f = moment_integrand(n, units);
    let coeffs = mahler_coefficients(&f, &cfg.context, count, k);
    for (j, a) in coeffs.iter().enumerate() {
        s.text(format!("a_{j} = {a}"))?;
        s.record(Record::new("mahler", "coefficient", a.clone(), true, count as u32).with("index", j).with("n", n))?;
    }
    let v = tri!(volkenborn_mahler(&coeffs, k));
    s.text(format!("∫{} x^{n} dx = {v}  [Σ (−1)^j a_j/(j+1) over {count} terms]", domain_label(units)))?;
    s.record(Record::new("mahler", "integral", v, true, count as u32).with("n", n))?;
    Ok(Ok(()))
}

fn load_measure(cfg: &CliConfig, name: &str, table: Option<&PathBuf>) -> Result<Box<dyn Measure>, Error> {
    let p = cfg.prime();
    let m: Box<dyn Measure> = match name {
        "regularized" => Box::new(RegularizedBernoulli { prime: p }),
        "mu1" => Box::new(BernoulliMu1 { prime: p }),
        "haar" => Box::new(HaarDistribution { prime: p }),
        "table" => {
            let path = table.ok_or_else(|| Error::Parse("--measure table needs --table FILE".into()))?;
            let t = TableMeasure::load(path)?;
            if t.domain_prime() != p {
                return Err(Error::PrimeMismatch(t.domain_prime(), p));
            }
            Box::new(t)
        }
        other => match other.strip_prefix("haar-q:") {
            Some(q) => {
                let q = q.parse().map_err(|_| Error::Parse(format!("bad value prime in {other:?}")))?;
                Box::new(QadicHaar::new(p, q)?)
            }
            None => return Err(Error::Parse(format!("unknown measure {other:?}"))),
        },
    };
    Ok(m)
}

#[allow(clippy::too_many_arguments)]
fn cmd_measure(
    cfg: &CliConfig,
    name: &str,
    table: Option<&PathBuf>,
    level: u32,
    residue: u64,
    additivity_depth: u32,
    depth: Option<u32>,
    s: &mut Session,
) -> Outcome {
    let p = cfg.prime();
    let k = cfg.precision;
    let m = tri!(load_measure(cfg, name, table));
    let q = m.value_prime();
    let ball = tri!(ClopenBall::new(p, level, residue));
    let exact = tri!(m.ball_value(&ball));
    let value = tri!(ball_value_padic(m.as_ref(), &ball, k));
    let ball_text = format!("{} + {p}^{level} Z_{p}", ball.residue);
    s.text(format!("{}({ball_text}) = {exact} ≡ {value}  in Q_{q}", m.name()))?;
    s.record(
        Record::new("measure", m.name(), value, true, level)
            .with("residue", ball.residue)
            .with("rational", exact.to_string()),
    )?;

    let top = match m.max_level() {
        Some(0) => None,
        Some(limit) => Some(additivity_depth.min(limit - 1)),
        None => Some(additivity_depth),
    };
    if let Some(top) = top {
        let mut balls = 0;
        let mut ok = true;
        for l in 0..=top {
            let rep = tri!(additivity_check(m.as_ref(), l));
            balls += rep.balls_checked;
            ok &= rep.passed();
        }
        s.text(format!("additivity: {} on levels 0..={top} ({balls} balls)", pass_word(ok)))?;
        if !ok {
            s.flag(EXIT_MISMATCH);
        }
    }

    if m.level_sum_only() {
        s.text("seminorm: not defined for a distribution")?;
    } else {
        let set = tri!(ClopenSet::ball(&cfg.context, ball));
        let mut d = depth.unwrap_or(level + 2);
        if let Some(limit) = m.max_level() {
            d = d.min(limit);
        }
        let est = tri!(seminorm(m.as_ref(), &set, d));
        let norm = match est.norm_exponent {
            Some(e) => format!("{q}^{e} = {}", est.value(q)),
            None => "0".into(),
        };
        s.text(format!(
            "seminorm ‖{ball_text}‖ = {norm}  [depth {}, {}]",
            est.depth,
            if est.exact { "exact" } else { "lower bound" }
        ))?;
    }
    Ok(Ok(()))
}

fn cmd_bernoulli(cfg: &CliConfig, n: usize, s: &mut Session) -> Outcome {
    let p = cfg.prime();
    let b = bernoulli_number(n);
    let v = PadicNumber::from_ratio_abs(&b, p, cfg.precision);
    s.text(format!("B_{n} = {b} ≡ {v}"))?;
    s.record(Record::new("bernoulli", "exact", v, true, 0).with("n", n).with("rational", b.to_string()))?;
    Ok(Ok(()))
}

fn cmd_gen_bernoulli(cfg: &CliConfig, n: usize, c: i64, s: &mut Session) -> Outcome {
    let p = cfg.prime();
    let k = cfg.precision;
    let prec = tri!(u32::try_from(k).map_err(|_| Error::InvalidContext("negative precision".into())));
    let v = tri!(gen_bernoulli(n, c, &cfg.context, prec));
    let c = c.rem_euclid(p as i64 - 1);
    s.text(format!("B_{{{n},ω^-{c}}} = {v}"))?;
    s.record(Record::new("gen-bernoulli", "teichmuller-sum", v, true, 0).with("n", n).with("character", c))?;
    Ok(Ok(()))
}

fn cmd_teichmuller(cfg: &CliConfig, x: &str, s: &mut Session) -> Outcome {
    let p = cfg.prime();
    let r = tri!(parse_arg(x));
    let k = tri!(u32::try_from(cfg.precision).map_err(|_| Error::InvalidContext("negative precision".into())));
    let xp = PadicNumber::from_ratio(&r, p, k);
    let d = tri!(unit_decompose(&xp));
    s.text(format!("x = {r} = {p}^{} · ω(x) · ⟨x⟩", d.valuation))?;
    s.text(format!("ω(x) = {}", d.teichmuller))?;
    s.text(format!("⟨x⟩ = {}", d.one_unit))?;
    s.record(Record::new("teichmuller", "omega", d.teichmuller, true, 0).with("x", r.to_string()).with("valuation_x", d.valuation))?;
    s.record(Record::new("teichmuller", "one-unit", d.one_unit, true, 0).with("x", r.to_string()).with("valuation_x", d.valuation))?;
    Ok(Ok(()))
}
