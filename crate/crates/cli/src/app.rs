use std::io::IsTerminal;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};
use superforms::berezin::{fourier_transform, AssumptionRecord, Distribution, FourierDirection, FourierSpace};
use superforms::equivariant::{self as eq, Element, LinearAction};
use superforms::suites::{run_all, run_suite, SUITES};
use superforms::superlinalg::BerVariant;
use superforms::Scalar;

use crate::dsl::{self, DslError, Evaluator, Value};

#[derive(Debug, Parser)]
#[command(name = "superforms", version, about = "Exact supergeometric calculus: Thom forms, localization, Berezin integrals")]
pub struct Cli {
    /// Emit the JSON envelope instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for the property suites. Giving it also zeroes `timing_ms`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write output to a file.
    #[arg(short = 'o', long = "output", global = true)]
    pub output: Option<PathBuf>,
    /// Show assumptions and timing in text output.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a script.
    Eval(EvalArgs),
    /// Mathai–Quillen Thom form of a linear action, with its certificates.
    Thom(PointArgs),
    /// Spf of an action and the Euler relation.
    Spf(PointArgs),
    /// Both sides of the localization formula.
    Localize(LocalizeArgs),
    /// Fourier transform of a script's last value, and the inverse check.
    Fourier(FourierArgs),
    /// Berezinian and supertrace of a script's last value.
    Ber(BerArgs),
    /// Run a property suite, or `all`.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Script file (`.sf`).
    pub file: Option<PathBuf>,
    /// Inline script.
    #[arg(short = 'e', long = "expr")]
    pub expr: Option<String>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub source: Source,
    /// Register an action preset before the script runs.
    #[arg(long)]
    pub action: Option<String>,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    /// Dimensions `k,l` of V = R^(k|l); 0,2 unless a full preset name
    /// is given.
    #[arg(long)]
    pub space: Option<String>,
    /// `rot`, `hyp`, `skew`, or a preset name such as `rot22`.
    #[arg(long, default_value = "rot")]
    pub action: String,
    /// A parameter of the action, optionally with a value: `z` or `z=2`.
    #[arg(long = "param")]
    pub params: Vec<String>,
}

#[derive(Debug, Args)]
pub struct LocalizeArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// The form to localize, as an expression in `theta`, `omega` = d_g β
    /// and `X`, e.g. `theta*(1 + omega)`.
    #[arg(long, default_value = "theta")]
    pub alpha: String,
    /// Values for parameters: `z=1`.
    #[arg(long = "point")]
    pub values: Vec<String>,
}

#[derive(Debug, Args)]
pub struct FourierArgs {
    #[command(flatten)]
    pub source: Source,
    /// `variable:dual` pairs, e.g. `xi:f`.
    #[arg(long = "var", required = true)]
    pub vars: Vec<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Variant {
    Standard,
    OneZero,
}

#[derive(Debug, Args)]
pub struct BerArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, value_enum, default_value = "standard")]
    pub variant: Variant,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Suite name, or `all`.
    pub suite: Option<String>,
    #[arg(long = "suite", conflicts_with = "suite")]
    pub suite_flag: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Fail,
    Error,
}

impl Status {
    fn word(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Parse(String),
    Engine(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Parse(_) => 2,
            Failure::Engine(_) => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Parse(_) => "parse",
            Failure::Engine(_) => "engine",
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Parse(m) | Failure::Engine(m) => m,
        }
    }

    fn from_dsl(e: &DslError, src: &str) -> Self {
        if e.is_engine() {
            Failure::Engine(e.render(src))
        } else {
            Failure::Parse(e.render(src))
        }
    }
}

fn engine_failure(e: impl std::fmt::Display) -> Failure {
    Failure::Engine(e.to_string())
}

struct Success {
    holds: bool,
    result: Json,
    assumptions: Vec<AssumptionRecord>,
    caveats: Vec<String>,
}

/// The rendered output of a run and its exit code.
pub struct Run {
    pub code: u8,
    pub status: Status,
    pub text: String,
}

pub fn run(cli: &Cli) -> Run {
    let start = Instant::now();
    let seed = cli.seed.unwrap_or(0);
    let outcome = match &cli.command {
        Command::Eval(a) => eval(a, seed),
        Command::Thom(a) => thom(a),
        Command::Spf(a) => spf(a),
        Command::Localize(a) => localize(a, seed),
        Command::Fourier(a) => fourier(a, seed),
        Command::Ber(a) => ber(a, seed),
        Command::Check(a) => check(a, seed),
    };
    let timing = if cli.seed.is_some() { 0 } else { start.elapsed().as_millis() as u64 };
    let (code, status, envelope) = match outcome {
        Ok(s) => {
            let status = if s.holds { Status::Ok } else { Status::Fail };
            let env = json!({
                "status": status.word(),
                "result": s.result,
                "assumptions": s.assumptions,
                "caveats": s.caveats,
                "timing_ms": timing,
            });
            (if s.holds { 0 } else { 1 }, status, env)
        }
        Err(f) => {
            let env = json!({
                "status": "error",
                "result": { "kind": f.kind(), "error": f.message() },
                "assumptions": [],
                "caveats": [],
                "timing_ms": timing,
            });
            (f.code(), Status::Error, env)
        }
    };
    let text = if cli.json {
        serde_json::to_string_pretty(&envelope).expect("serializable") + "\n"
    } else {
        render_text(&envelope, use_color(cli), cli.verbose > 0)
    };
    Run { code, status, text }
}

fn use_color(cli: &Cli) -> bool {
    match std::env::var("SUPERFORMS_COLOR").as_deref() {
        Ok("always") => true,
        Ok("never") => false,
        _ => cli.output.is_none() && std::io::stdout().is_terminal(),
    }
}

// ------------------------------------------------------------------ inputs

fn read_source(s: &Source) -> Result<String, Failure> {
    match (&s.file, &s.expr) {
        (_, Some(e)) => Ok(e.clone()),
        (Some(p), None) => {
            std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("cannot read {}: {}", p.display(), e)))
        }
        (None, None) => Err(Failure::Usage("give a script file or -e".into())),
    }
}

fn run_script(src: &str, mut ev: Evaluator) -> Result<(dsl::Outcome, Evaluator), Failure> {
    let program = dsl::parse(src).map_err(|e| Failure::Parse(e.render(src)))?;
    let diagnostics = ev.analyze(&program);
    if !diagnostics.is_empty() {
        let all: Vec<String> = diagnostics.iter().map(|d| d.render(src)).collect();
        return Err(Failure::Parse(all.join("\n")));
    }
    let out = ev.run(&program).map_err(|e| Failure::from_dsl(&e, src))?;
    Ok((out, ev))
}

fn parse_space(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::Usage(format!("--space expects k,l, found '{}'", s));
    let (k, l) = s.split_once([',', '|']).ok_or_else(bad)?;
    Ok((k.trim().parse().map_err(|_| bad())?, l.trim().parse().map_err(|_| bad())?))
}

fn preset(args: &PointArgs) -> Result<(String, LinearAction), Failure> {
    let space = args.space.as_deref().map(parse_space).transpose()?;
    let name = if LinearAction::PRESETS.contains(&args.action.as_str()) {
        args.action.clone()
    } else {
        let (k, l) = space.unwrap_or((0, 2));
        format!("{}{}{}", args.action, k, l)
    };
    let action = LinearAction::preset(&name).ok_or_else(|| {
        Failure::Usage(format!("no action '{}' on that space; presets: {}", args.action, LinearAction::PRESETS.join(", ")))
    })?;
    match space {
        Some(kl) if kl != (action.k(), action.l()) => {
            Err(Failure::Usage(format!("preset {} lives on R^({}|{})", name, action.k(), action.l())))
        }
        _ => Ok((name, action)),
    }
}

/// `X = Σ zₐ Gₐ` with the given parameters substituted.
fn point(action: &LinearAction, specs: &[String]) -> Result<Element, Failure> {
    let mut values = Vec::new();
    for s in specs {
        let (name, value) = match s.split_once('=') {
            Some((n, v)) => (n.trim(), Some(v.trim())),
            None => (s.trim(), None),
        };
        if !action.params().iter().any(|p| p == name) {
            return Err(Failure::Usage(format!(
                "unknown parameter '{}'; this action has {}",
                name,
                action.params().join(", ")
            )));
        }
        if let Some(v) = value {
            let v: Scalar = v.parse().map_err(|e| Failure::Usage(format!("bad value for {}: {}", name, e)))?;
            values.push((name.to_string(), v));
        }
    }
    let pairs: Vec<(&str, Scalar)> = values.iter().map(|(n, v)| (n.as_str(), v.clone())).collect();
    action.at(&action.generic(), &pairs).map_err(engine_failure)
}

fn element_text(action: &LinearAction, x: &Element) -> String {
    let terms: Vec<String> = action
        .generator_names()
        .iter()
        .zip(&x.0)
        .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
        .map(|(g, c)| if c.is_one() { g.clone() } else { format!("({})*{}", c, g) })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn point_json(name: &str, action: &LinearAction, x: &Element) -> Json {
    json!({
        "action": name,
        "space": format!("{}|{}", action.k(), action.l()),
        "generators": action.generator_names(),
        "point": x.0.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "element": element_text(action, x),
    })
}

// ---------------------------------------------------------------- commands

fn eval(a: &EvalArgs, seed: u64) -> Result<Success, Failure> {
    let src = read_source(&a.source)?;
    let ev = match &a.action {
        Some(p) => Evaluator::with_action(seed, p).ok_or_else(|| Failure::Usage(format!("unknown action '{}'", p)))?,
        None => Evaluator::new(seed),
    };
    let (out, _) = run_script(&src, ev)?;
    Ok(Success {
        holds: out.verified,
        result: json!({ "outputs": out.outputs_json() }),
        assumptions: out.assumptions,
        caveats: out.caveats,
    })
}

fn thom(a: &PointArgs) -> Result<Success, Failure> {
    let (name, action) = preset(a)?;
    let x = point(&action, &a.params)?;
    let th = eq::mathai_quillen_thom(&action, &x).map_err(engine_failure)?;
    let mut result = point_json(&name, &action, &x);
    result["thom"] = th.to_json();
    Ok(Success {
        holds: th.verified(),
        result,
        assumptions: th.log.records().to_vec(),
        caveats: th.caveat.iter().map(|c| c.to_string()).collect(),
    })
}

fn spf(a: &PointArgs) -> Result<Success, Failure> {
    let (name, action) = preset(a)?;
    let x = point(&action, &a.params)?;
    let e = eq::euler_form(&action, &x).map_err(engine_failure)?;
    let mut result = point_json(&name, &action, &x);
    result["euler"] = e.to_json();
    Ok(Success { holds: e.holds, result, assumptions: e.log.records().to_vec(), caveats: Vec::new() })
}

fn localize(a: &LocalizeArgs, seed: u64) -> Result<Success, Failure> {
    let (name, action) = preset(&a.point)?;
    let mut specs = a.point.params.clone();
    specs.extend(a.values.iter().cloned());
    let x = point(&action, &specs)?;
    let th = eq::mathai_quillen_thom(&action, &x).map_err(engine_failure)?;
    let omega = eq::beta_form(&action, &x).map_err(engine_failure)?.d_g_beta;
    let mut ev = Evaluator::with_action(seed, &name).expect("preset");
    for p in action.params() {
        ev.declare_param(p);
    }
    ev.bind("theta", Value::Form(th.theta.clone()));
    ev.bind("omega", Value::Form(omega));
    ev.bind("X", Value::Element(x.clone()));
    let expr = dsl::parse_expr(&a.alpha).map_err(|e| Failure::Parse(e.render(&a.alpha)))?;
    let alpha = match ev.eval_expr(&expr).map_err(|e| Failure::from_dsl(&e, &a.alpha))? {
        Value::Form(f) => f,
        v => return Err(Failure::Usage(format!("--alpha must be a form, found {}", v.text()))),
    };
    let l = eq::localize_linear(&alpha, &action, &x).map_err(engine_failure)?;
    let mut result = point_json(&name, &action, &x);
    result["alpha"] = json!(dsl::format_expr(&expr));
    result["localization"] = l.to_json();
    let mut assumptions = th.log.records().to_vec();
    assumptions.extend(l.log.records().iter().cloned());
    Ok(Success { holds: l.equal, result, assumptions, caveats: th.caveat.iter().map(|c| c.to_string()).collect() })
}

fn last_value(src: &str, seed: u64) -> Result<(Value, dsl::Outcome), Failure> {
    let (out, _) = run_script(src, Evaluator::new(seed))?;
    let v = out.last().cloned().ok_or_else(|| Failure::Usage("the script has no value".into()))?;
    Ok((v, out))
}

fn fourier(a: &FourierArgs, seed: u64) -> Result<Success, Failure> {
    let src = read_source(&a.source)?;
    let (v, out) = last_value(&src, seed)?;
    let Value::Form(phi) = v else {
        return Err(Failure::Usage(format!("expected a function, found {}", v.text())));
    };
    let mut vars = Vec::new();
    let mut duals = Vec::new();
    for pair in &a.vars {
        let (x, f) = pair.split_once(':').ok_or_else(|| Failure::Usage(format!("--var expects x:f, found '{}'", pair)))?;
        vars.push(x.trim().to_string());
        duals.push(f.trim().to_string());
    }
    let fwd = FourierSpace::new(&vars, &duals);
    let (hat, mut log) =
        fourier_transform(&Distribution::function(phi.clone()), FourierDirection::FunctionToDistribution, &fwd)
            .map_err(engine_failure)?;
    let (back, blog) = fourier_transform(&hat, FourierDirection::DistributionToFunction, &FourierSpace::new(&duals, &vars))
        .map_err(engine_failure)?;
    log.extend(blog);
    let back = back.flatten().rehome(phi.table()).map_err(engine_failure)?;
    let holds = back == phi;
    let mut assumptions = out.assumptions;
    assumptions.extend(log.records().iter().cloned());
    Ok(Success {
        holds,
        result: json!({
            "function": phi.render(),
            "transform": Value::Distribution(hat).to_json(),
            "inverse": back.render(),
            "inverse_holds": holds,
        }),
        assumptions,
        caveats: out.caveats,
    })
}

fn ber(a: &BerArgs, seed: u64) -> Result<Success, Failure> {
    let src = read_source(&a.source)?;
    let (v, out) = last_value(&src, seed)?;
    let Value::Matrix(m) = v else {
        return Err(Failure::Usage(format!("expected a matrix, found {}", v.text())));
    };
    let variant = match a.variant {
        Variant::Standard => BerVariant::Standard,
        Variant::OneZero => BerVariant::OneZero,
    };
    let b = m.berezinian(variant).map_err(engine_failure)?;
    Ok(Success {
        holds: true,
        result: json!({ "matrix": m.to_json(), "ber": b.render(), "str": m.supertrace().render() }),
        assumptions: out.assumptions,
        caveats: out.caveats,
    })
}

fn check(a: &CheckArgs, seed: u64) -> Result<Success, Failure> {
    let name = a.suite.as_deref().or(a.suite_flag.as_deref()).unwrap_or("all");
    let reports = if name == "all" {
        run_all(seed)
    } else {
        vec![run_suite(name, seed)
            .ok_or_else(|| Failure::Usage(format!("unknown suite '{}'; known: all, {}", name, SUITES.join(", "))))?]
    };
    let cases: usize = reports.iter().map(|r| r.cases).sum();
    let passed: usize = reports.iter().map(|r| r.passed).sum();
    Ok(Success {
        holds: cases == passed,
        result: json!({ "seed": seed, "cases": cases, "passed": passed, "suites": reports }),
        assumptions: Vec::new(),
        caveats: Vec::new(),
    })
}

// ------------------------------------------------------------------- text

/// Text output is a rendering of the JSON envelope: objects become
/// indented `key: value` lines, and any object carrying a `text` field is
/// shown by that field alone.
pub fn render_text(env: &Json, color: bool, verbose: bool) -> String {
    let status = env["status"].as_str().unwrap_or("error");
    let painted = match (color, status) {
        (false, s) => s.to_string(),
        (true, "ok") => format!("\x1b[32m{}\x1b[0m", status),
        (true, s) => format!("\x1b[31m{}\x1b[0m", s),
    };
    let mut out = format!("status: {}\n", painted);
    write_value(&mut out, "result", &env["result"], 0);
    for key in ["caveats", "assumptions"] {
        let empty = env[key].as_array().is_none_or(|a| a.is_empty());
        if !empty && (key == "caveats" || verbose) {
            write_value(&mut out, key, &env[key], 0);
        }
    }
    if verbose {
        out.push_str(&format!("timing_ms: {}\n", env["timing_ms"]));
    }
    out
}

fn scalar_text(v: &Json) -> Option<String> {
    match v {
        Json::String(s) => Some(s.clone()),
        Json::Null => Some("null".into()),
        Json::Bool(_) | Json::Number(_) => Some(v.to_string()),
        Json::Object(o) => o.get("text").and_then(|t| t.as_str()).map(|t| match o.get("source").and_then(|s| s.as_str()) {
            Some(src) => format!("{} = {}", src, t),
            None => t.to_string(),
        }),
        Json::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(format!("[{}]", a.iter().filter_map(scalar_text).collect::<Vec<_>>().join(", ")))
        }
        Json::Array(_) => None,
    }
}

fn write_value(out: &mut String, key: &str, v: &Json, depth: usize) {
    let pad = "  ".repeat(depth);
    if let Some(s) = scalar_text(v) {
        if s.contains('\n') {
            out.push_str(&format!("{}{}:\n", pad, key));
            for line in s.lines() {
                out.push_str(&format!("{}  {}\n", pad, line));
            }
        } else {
            out.push_str(&format!("{}{}: {}\n", pad, key, s));
        }
        return;
    }
    out.push_str(&format!("{}{}:\n", pad, key));
    match v {
        Json::Object(o) => {
            for (k, x) in o {
                write_value(out, k, x, depth + 1);
            }
        }
        Json::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                let label = x
                    .get("source")
                    .or_else(|| x.get("suite"))
                    .and_then(|s| s.as_str())
                    .map(str::to_string)
                    .unwrap_or_else(|| format!("- [{}]", i));
                write_value(out, &label, x, depth + 1);
            }
        }
        _ => {}
    }
}
