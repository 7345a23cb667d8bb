//! The `kahler` command line: argument parsing, command execution and
//! rendering. [`run`] does everything except touching the process, so
//! tests can call it directly.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use kahler_core::derivations::{
    chain_rule_samples, check_beck_t_derivation, check_leibniz, leibniz_samples, relation_compatibility,
};
use kahler_core::document::{parse_document, parse_w_elements, Document};
use kahler_core::kahler::kahler_of_algebra;
use kahler_core::module::RestrictedModule;
use kahler_core::polyring::{parse_poly, scan_identifiers, Field, MonomialOrder, PolyContext};
use kahler_core::report::{all_passed, Report};
use kahler_core::sample::{rng, SampleConfig};
use kahler_core::symmetric::{check_all_codifferential, check_alt_characterization, check_monad_laws, deriving_transform};
use kahler_core::wext::WAlgebra;
use kahler_core::Error;

pub const SCHEMA: u32 = 1;

pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const VALIDATION: i32 = 3;
    pub const RESOURCE: i32 = 4;
}

#[derive(Parser, Debug)]
#[command(name = "kahler", version, about = "Derivations, Kähler differentials and square-zero extensions")]
pub struct Cli {
    #[command(flatten)]
    pub session: SessionConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct SessionConfig {
    /// Coefficient field: `q` or `fp:<p>`.
    #[arg(long, global = true, default_value = "q")]
    pub field: Field,
    #[arg(long, global = true, default_value = "degrevlex")]
    pub order: MonomialOrder,
    #[arg(long, global = true, default_value_t = SampleConfig::default().seed)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = SampleConfig::default().samples as u64,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long = "max-degree", global = true, default_value_t = SampleConfig::default().max_degree)]
    pub max_degree: u32,
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
}

impl SessionConfig {
    pub fn sample_config(&self) -> SampleConfig {
        SampleConfig { seed: self.seed, samples: self.samples as usize, max_degree: self.max_degree, ..SampleConfig::default() }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the gradient of a polynomial.
    Diff {
        poly: String,
        /// Comma-separated variables; inferred from the input when omitted.
        #[arg(long, value_delimiter = ',')]
        vars: Option<Vec<String>>,
    },
    /// Print the Kähler module of an algebra and its universal derivation.
    Omega {
        file: PathBuf,
        #[arg(long)]
        algebra: Option<String>,
    },
    /// Run the codifferential, naturality, monad and alternative suites.
    Axioms {
        /// Comma-separated base variables.
        #[arg(long, value_delimiter = ',', default_value = "x,y,z")]
        vars: Vec<String>,
    },
    /// Validate a derivation block from a presentation file.
    CheckDerivation {
        file: PathBuf,
        #[arg(long)]
        derivation: Option<String>,
    },
    /// Square-zero extension commands.
    Wext {
        #[command(subcommand)]
        command: WextCommand,
    },
}

#[derive(Subcommand, Debug)]
pub enum WextCommand {
    /// Evaluate a polynomial at pairs `(a, m)` of W(A, M).
    Eval {
        file: PathBuf,
        /// Module `M`; may be omitted when the file declares exactly one.
        #[arg(long)]
        module: Option<String>,
        #[arg(long)]
        poly: String,
        /// Semicolon-separated pairs, e.g. `(x, (1, 0)); (y, (0, 1))`.
        #[arg(long)]
        args: String,
        /// Variables of the polynomial, one per pair.
        #[arg(long, value_delimiter = ',')]
        vars: Option<Vec<String>>,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: exit::OK, stdout, stderr: String::new() }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Arity { .. } => exit::USAGE,
        Error::Resource(_) => exit::RESOURCE,
        _ => exit::VALIDATION,
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let text = e.render().to_string();
            return if code == exit::OK {
                Outcome::ok(text)
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli) {
        Ok(out) => out,
        Err(CliError::Core(e)) => {
            let stderr = if cli.session.json {
                json(&ErrorPayload { schema: SCHEMA, error: e.to_string() })
            } else {
                format!("error: {e}\n")
            };
            Outcome { code: exit_code(&e), stdout: String::new(), stderr }
        }
        Err(CliError::Usage(msg)) => Outcome { code: exit::USAGE, stdout: String::new(), stderr: format!("error: {msg}\n") },
    }
}

enum CliError {
    Core(Error),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Serialize)]
struct ErrorPayload {
    schema: u32,
    error: String,
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn execute(cli: &Cli) -> CliResult<Outcome> {
    let s = &cli.session;
    match &cli.command {
        Command::Diff { poly, vars } => cmd_diff(s, poly, vars.as_deref()),
        Command::Omega { file, algebra } => cmd_omega(s, file, algebra.as_deref()),
        Command::Axioms { vars } => cmd_axioms(s, vars),
        Command::CheckDerivation { file, derivation } => cmd_check_derivation(s, file, derivation.as_deref()),
        Command::Wext { command: WextCommand::Eval { file, module, poly, args, vars } } => {
            cmd_wext_eval(s, file, module.as_deref(), poly, args, vars.as_deref())
        }
    }
}

fn read_document(s: &SessionConfig, file: &PathBuf) -> CliResult<Document> {
    let src = fs::read_to_string(file).map_err(|e| CliError::Usage(format!("{}: {e}", file.display())))?;
    Ok(parse_document(&src, s.field, s.order)?)
}

/// Picks the named entry, or the only one.
fn pick<'a, T>(items: &'a [T], name: Option<&str>, key: impl Fn(&T) -> &str, what: &str) -> CliResult<&'a T> {
    match name {
        Some(n) => items.iter().find(|t| key(t) == n).ok_or_else(|| CliError::Usage(format!("no {what} named `{n}`"))),
        None if items.len() == 1 => Ok(&items[0]),
        None if items.is_empty() => Err(CliError::Usage(format!("no {what} in the file"))),
        None => Err(CliError::Usage(format!("several {what}s in the file; choose one with --{what}"))),
    }
}

#[derive(Serialize)]
struct DiffOutput {
    schema: u32,
    field: String,
    vars: Vec<String>,
    input: String,
    gradient: Vec<String>,
}

pub fn cmd_diff_text(s: &SessionConfig, poly: &str, vars: Option<&[String]>) -> kahler_core::Result<(Vec<String>, String, Vec<String>)> {
    let vars = match vars {
        Some(v) => v.to_vec(),
        None => {
            let found = scan_identifiers(poly)?;
            if found.is_empty() {
                vec!["x".to_string()]
            } else {
                found
            }
        }
    };
    let ctx = PolyContext::new(vars.clone(), s.field, s.order)?;
    let p = parse_poly(&ctx, poly)?;
    let d = deriving_transform(&p);
    Ok((vars, p.to_string(), d.components().iter().map(ToString::to_string).collect()))
}

fn cmd_diff(s: &SessionConfig, poly: &str, vars: Option<&[String]>) -> CliResult<Outcome> {
    let (vars, input, gradient) = cmd_diff_text(s, poly, vars)?;
    if s.json {
        return Ok(Outcome::ok(json(&DiffOutput { schema: SCHEMA, field: s.field.to_string(), vars, input, gradient })));
    }
    Ok(Outcome::ok(format!("({})\n", gradient.join(", "))))
}

#[derive(Serialize)]
struct OmegaOutput {
    schema: u32,
    field: String,
    order: String,
    algebra: String,
    module: String,
    rank: usize,
    relations: Vec<Vec<String>>,
    d: Vec<Image>,
}

#[derive(Serialize)]
struct Image {
    var: String,
    image: Vec<String>,
}

fn cmd_omega(s: &SessionConfig, file: &PathBuf, name: Option<&str>) -> CliResult<Outcome> {
    let doc = read_document(s, file)?;
    let a = pick(&doc.algebras, name, |a| a.name(), "algebra")?;
    let om = kahler_of_algebra(a);
    if !s.json {
        return Ok(Outcome::ok(om.to_string()));
    }
    let m = om.module();
    let out = OmegaOutput {
        schema: SCHEMA,
        field: s.field.to_string(),
        order: s.order.to_string(),
        algebra: a.to_string(),
        module: m.name().to_string(),
        rank: m.rank(),
        relations: m.relations().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect(),
        d: a
            .ctx()
            .vars()
            .iter()
            .zip(om.universal().images())
            .map(|(v, img)| Image { var: v.clone(), image: img.rep().iter().map(ToString::to_string).collect() })
            .collect(),
    };
    Ok(Outcome::ok(json(&out)))
}

#[derive(Serialize)]
struct AxiomsOutput {
    schema: u32,
    field: String,
    vars: Vec<String>,
    config: SampleConfig,
    passed: bool,
    reports: Vec<AxiomReport>,
}

#[derive(Serialize)]
struct AxiomReport {
    #[serde(flatten)]
    report: Report,
    passed: bool,
}

/// The full axiom suite; the same seed always gives the same reports.
pub fn axiom_reports(s: &SessionConfig, vars: &[String]) -> kahler_core::Result<Vec<Report>> {
    let ctx = PolyContext::new(vars.to_vec(), s.field, MonomialOrder::DegRevLex)?;
    let cfg = s.sample_config();
    let mut reports = check_all_codifferential(&ctx, &cfg)?;
    reports.extend(check_monad_laws(&ctx, &cfg));
    reports.extend(check_alt_characterization(&ctx, &cfg));
    Ok(reports)
}

fn cmd_axioms(s: &SessionConfig, vars: &[String]) -> CliResult<Outcome> {
    let reports = axiom_reports(s, vars)?;
    let passed = all_passed(&reports);
    let out = AxiomsOutput {
        schema: SCHEMA,
        field: s.field.to_string(),
        vars: vars.to_vec(),
        config: s.sample_config(),
        passed,
        reports: reports.into_iter().map(|r| AxiomReport { passed: r.passed(), report: r }).collect(),
    };
    let text = json(&out);
    Ok(Outcome { code: if passed { exit::OK } else { exit::FAILURE }, stdout: text, stderr: String::new() })
}

#[derive(Serialize)]
struct CheckDerivationOutput {
    schema: u32,
    derivation: String,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Witness>,
    reports: Vec<AxiomReport>,
}

#[derive(Serialize)]
struct Witness {
    check: &'static str,
    relation: String,
    lhs: String,
    rhs: String,
}

fn cmd_check_derivation(s: &SessionConfig, file: &PathBuf, name: Option<&str>) -> CliResult<Outcome> {
    let doc = read_document(s, file)?;
    let decl = pick(&doc.derivations, name, |d| &d.name, "derivation")?;
    let target = RestrictedModule::plain(&decl.module);
    let mut out = CheckDerivationOutput {
        schema: SCHEMA,
        derivation: decl.name.clone(),
        passed: false,
        witness: None,
        reports: Vec::new(),
    };
    if let Some(w) = relation_compatibility(&decl.algebra, &target, &decl.images)? {
        out.witness = Some(Witness {
            check: "relation_compatibility",
            relation: w.relation.to_string(),
            lhs: w.lhs.to_string(),
            rhs: w.rhs.to_string(),
        });
        return Ok(Outcome { code: exit::FAILURE, stdout: json(&out), stderr: String::new() });
    }
    let d = decl.build()?;
    let cfg = s.sample_config();
    let mut g = rng(cfg.seed);
    let pairs = leibniz_samples(&decl.algebra, &mut g, &cfg, cfg.samples);
    let polys = chain_rule_samples(&decl.algebra, &mut g, &cfg, cfg.samples);
    let reports = vec![check_leibniz(&d, &pairs)?.with_seed(cfg.seed), check_beck_t_derivation(&d, &polys)?.with_seed(cfg.seed)];
    out.passed = all_passed(&reports);
    out.reports = reports.into_iter().map(|r| AxiomReport { passed: r.passed(), report: r }).collect();
    let code = if out.passed { exit::OK } else { exit::FAILURE };
    Ok(Outcome { code, stdout: json(&out), stderr: String::new() })
}

#[derive(Serialize)]
struct WextOutput {
    schema: u32,
    poly: String,
    vars: Vec<String>,
    args: Vec<String>,
    result: Pair,
}

#[derive(Serialize)]
struct Pair {
    a: String,
    m: Vec<String>,
}

fn cmd_wext_eval(
    s: &SessionConfig,
    file: &PathBuf,
    module: Option<&str>,
    poly: &str,
    args: &str,
    vars: Option<&[String]>,
) -> CliResult<Outcome> {
    let doc = read_document(s, file)?;
    let mut names: Vec<String> = doc.kahler.iter().map(|(n, _)| n.clone()).collect();
    names.extend(doc.modules.iter().map(|m| m.name().to_string()));
    let name = pick(&names, module, |n| n.as_str(), "module")?;
    let m = doc.module(name).expect("listed above");
    let w = WAlgebra::plain(m);
    let pairs = parse_w_elements(&w, args)?;
    let vars = match vars {
        Some(v) => v.to_vec(),
        None => {
            let found = scan_identifiers(poly)?;
            if found.is_empty() {
                (1..=pairs.len()).map(|i| format!("t{i}")).collect()
            } else {
                found
            }
        }
    };
    if vars.len() != pairs.len() {
        return Err(Error::Arity { expected: vars.len(), got: pairs.len() }.into());
    }
    let ctx = PolyContext::new(vars.clone(), s.field, s.order)?;
    let p = parse_poly(&ctx, poly)?;
    let r = w.beta_eval(&p, &pairs)?;
    if !s.json {
        return Ok(Outcome::ok(format!("{r}\n")));
    }
    let out = WextOutput {
        schema: SCHEMA,
        poly: p.to_string(),
        vars,
        args: pairs.iter().map(ToString::to_string).collect(),
        result: Pair { a: r.a.to_string(), m: r.m.rep().iter().map(ToString::to_string).collect() },
    };
    Ok(Outcome::ok(json(&out)))
}
