use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use num_traits::ToPrimitive;
use serde_json::{json, Value as Json};
use superforms::berezin::{
    fourier_transform, integrate_superspace, AssumptionLog, AssumptionRecord, Distribution, FourierDirection,
    FourierSpace, IntegrationSpec,
};
use superforms::equivariant::{self as eq, Element, LinearAction};
use superforms::grassmann::{Generator, Role};
use superforms::suites::{run_all, run_suite, SUITES};
use superforms::superlinalg::{BerVariant, SuperMatrix};
use superforms::{Parity, Scalar, SuperFn, VariableTable};

use super::ast::*;
use super::format::format_expr;
use super::DslError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Form(SuperFn),
    Element(Element),
    Matrix(SuperMatrix<Scalar>),
    Distribution(Distribution),
    /// The outcome of a verification, e.g. `localize`, `euler` or `check`.
    Report { kind: &'static str, holds: bool, data: Json },
}

impl Value {
    fn type_name(&self) -> &'static str {
        match self {
            Value::Form(_) => "form",
            Value::Element(_) => "Lie algebra element",
            Value::Matrix(_) => "matrix",
            Value::Distribution(_) => "distribution",
            Value::Report { .. } => "report",
        }
    }

    pub fn text(&self) -> String {
        match self {
            Value::Form(f) => f.render(),
            Value::Element(x) => render_element(x),
            Value::Matrix(m) => m.to_string(),
            Value::Distribution(d) => render_distribution(d),
            Value::Report { data, .. } => data.to_string(),
        }
    }

    pub fn to_json(&self) -> Json {
        match self {
            Value::Form(f) => json!({ "kind": "form", "text": f.render(), "value": f.to_json() }),
            Value::Element(x) => json!({
                "kind": "element",
                "text": render_element(x),
                "coefficients": x.0.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            }),
            Value::Matrix(m) => json!({ "kind": "matrix", "text": m.to_string(), "value": m.to_json() }),
            Value::Distribution(d) => json!({
                "kind": "distribution",
                "text": render_distribution(d),
                "prefactor": d.prefactor.to_string(),
                "measure": d.measure,
                "density": d.density.render(),
            }),
            Value::Report { kind, holds, data } => json!({ "kind": kind, "holds": holds, "value": data }),
        }
    }
}

fn coefficient_text(c: &Scalar) -> String {
    let s = c.to_string();
    if s.contains(' ') {
        format!("({})", s)
    } else {
        s
    }
}

fn render_element(x: &Element) -> String {
    let terms: Vec<String> = x
        .0
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(a, c)| if c.is_one() { format!("X{}", a) } else { format!("{}*X{}", coefficient_text(c), a) })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn render_distribution(d: &Distribution) -> String {
    if d.measure.is_empty() {
        return d.flatten().render();
    }
    format!("{} d({}) ({})", coefficient_text(&d.prefactor), d.measure.join(", "), d.density.render())
}

/// The value of one expression statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub line: usize,
    pub source: String,
    pub value: Value,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub outputs: Vec<Output>,
    pub assumptions: Vec<AssumptionRecord>,
    pub caveats: Vec<String>,
    /// False when some report or certificate came out negative.
    pub verified: bool,
}

impl Outcome {
    pub fn last(&self) -> Option<&Value> {
        self.outputs.last().map(|o| &o.value)
    }

    pub fn outputs_json(&self) -> Json {
        Json::Array(
            self.outputs
                .iter()
                .map(|o| {
                    let mut v = o.value.to_json();
                    v["line"] = json!(o.line);
                    v["source"] = json!(o.source);
                    v
                })
                .collect(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sym {
    Coordinate,
    Param,
    Let,
    Generator,
}

/// Script state: the coordinate table, the registered action, parameters
/// and `let` bindings. Statements are evaluated in order against it.
pub struct Evaluator {
    table: Arc<VariableTable>,
    action: Option<LinearAction>,
    params: BTreeSet<String>,
    lets: HashMap<String, Value>,
    seed: u64,
    log: AssumptionLog,
    caveats: Vec<String>,
    verified: bool,
}

impl Default for Evaluator {
    fn default() -> Self {
        Evaluator::new(0)
    }
}

type R<T> = Result<T, DslError>;

fn engine(span: Span) -> impl Fn(&dyn std::fmt::Display) -> DslError {
    move |e| DslError::Engine { span, message: e.to_string() }
}

fn type_err(span: Span, message: impl Into<String>) -> DslError {
    DslError::Type { span, message: message.into() }
}

fn resolve_err(span: Span, message: impl Into<String>) -> DslError {
    DslError::Resolve { span, message: message.into() }
}

macro_rules! eng {
    ($span:expr, $e:expr) => {
        $e.map_err(|e| engine($span)(&e))
    };
}

impl Evaluator {
    pub fn new(seed: u64) -> Self {
        Evaluator {
            table: VariableTable::new(Vec::new()).expect("empty table"),
            action: None,
            params: BTreeSet::new(),
            lets: HashMap::new(),
            seed,
            log: AssumptionLog::default(),
            caveats: Vec::new(),
            verified: true,
        }
    }

    /// An evaluator with `preset` already registered, as if the script
    /// began with `action preset;`.
    pub fn with_action(seed: u64, preset: &str) -> Option<Self> {
        let action = LinearAction::preset(preset)?;
        let mut e = Evaluator::new(seed);
        e.table = action.table().clone();
        e.action = Some(action);
        Some(e)
    }

    fn symbols(&self) -> HashMap<String, Sym> {
        let mut syms = HashMap::new();
        for g in self.table.generators() {
            syms.insert(g.name.clone(), Sym::Coordinate);
        }
        for p in &self.params {
            syms.insert(p.clone(), Sym::Param);
        }
        if let Some(a) = &self.action {
            for k in 0..a.generator_names().len() {
                syms.insert(format!("X{}", k), Sym::Generator);
            }
        }
        for l in self.lets.keys() {
            syms.insert(l.clone(), Sym::Let);
        }
        syms
    }

    /// Resolves every name in `program` against the current state without
    /// evaluating anything. Returns all diagnostics found.
    pub fn analyze(&self, program: &Program) -> Vec<DslError> {
        let mut syms = self.symbols();
        let mut has_action = self.action.is_some();
        let mut has_coords = !self.table.is_empty();
        let mut out = Vec::new();
        for s in &program.stmts {
            match &s.node {
                StmtKind::Decl { kind, names } => {
                    for n in names {
                        match (kind, syms.get(&n.node)) {
                            (DeclKind::Param, Some(Sym::Param)) => {}
                            (_, Some(_)) => out.push(resolve_err(n.span, format!("'{}' is already declared", n.node))),
                            (DeclKind::Param, None) => {
                                syms.insert(n.node.clone(), Sym::Param);
                            }
                            (_, None) => {
                                let dn = format!("d{}", n.node);
                                if syms.contains_key(&dn) {
                                    out.push(resolve_err(n.span, format!("differential '{}' is already declared", dn)));
                                }
                                syms.insert(n.node.clone(), Sym::Coordinate);
                                syms.insert(dn, Sym::Coordinate);
                                has_coords = true;
                            }
                        }
                    }
                }
                StmtKind::Action(p) => match LinearAction::preset(&p.node) {
                    None => out.push(resolve_err(
                        p.span,
                        format!("unknown action '{}'; known: {}", p.node, LinearAction::PRESETS.join(", ")),
                    )),
                    Some(_) if has_action => out.push(resolve_err(p.span, "only one action may be declared")),
                    Some(_) if has_coords => {
                        out.push(resolve_err(p.span, "an action must precede coordinate declarations"))
                    }
                    Some(a) => {
                        has_action = true;
                        has_coords = true;
                        for g in a.table().generators() {
                            syms.insert(g.name.clone(), Sym::Coordinate);
                        }
                        for k in 0..a.generator_names().len() {
                            syms.insert(format!("X{}", k), Sym::Generator);
                        }
                    }
                },
                StmtKind::Let { name, value } => {
                    analyze_expr(value, &syms, &mut out);
                    match syms.get(&name.node) {
                        None | Some(Sym::Let) => {
                            syms.insert(name.node.clone(), Sym::Let);
                        }
                        Some(_) => out.push(resolve_err(name.span, format!("'{}' is already declared", name.node))),
                    }
                }
                StmtKind::Check(suite) => {
                    if suite.node != "all" && !SUITES.contains(&suite.node.as_str()) {
                        out.push(resolve_err(
                            suite.span,
                            format!("unknown suite '{}'; known: all, {}", suite.node, SUITES.join(", ")),
                        ));
                    }
                }
                StmtKind::Expr(e) => analyze_expr(e, &syms, &mut out),
            }
        }
        out
    }

    /// Analyzes, then evaluates `program`. State persists across calls.
    pub fn run(&mut self, program: &Program) -> R<Outcome> {
        if let Some(e) = self.analyze(program).into_iter().next() {
            return Err(e);
        }
        let mut outputs = Vec::new();
        for s in &program.stmts {
            match &s.node {
                StmtKind::Decl { kind, names } => self.declare(*kind, names, s.span)?,
                StmtKind::Action(p) => {
                    let a = LinearAction::preset(&p.node).expect("analyzed");
                    self.table = a.table().clone();
                    self.action = Some(a);
                }
                StmtKind::Let { name, value } => {
                    let v = self.eval(value)?;
                    self.lets.insert(name.node.clone(), v);
                }
                StmtKind::Check(suite) => {
                    let value = self.check(&suite.node);
                    outputs.push(Output { line: s.span.line, source: format!("check {}", suite.node), value });
                }
                StmtKind::Expr(e) => {
                    let value = self.eval(e)?;
                    outputs.push(Output { line: s.span.line, source: format_expr(e), value });
                }
            }
        }
        Ok(Outcome {
            outputs,
            assumptions: self.log.records().to_vec(),
            caveats: self.caveats.clone(),
            verified: self.verified,
        })
    }

    /// Evaluates a single expression against the current state.
    pub fn eval_expr(&mut self, e: &Expr) -> R<Value> {
        let mut out = Vec::new();
        analyze_expr(e, &self.symbols(), &mut out);
        if let Some(err) = out.into_iter().next() {
            return Err(err);
        }
        self.eval(e)
    }

    pub fn declare_param(&mut self, name: &str) {
        self.params.insert(name.to_string());
    }

    /// Binds `name` as if by `let`.
    pub fn bind(&mut self, name: &str, value: Value) {
        self.lets.insert(name.to_string(), value);
    }

    pub fn action(&self) -> Option<&LinearAction> {
        self.action.as_ref()
    }

    fn declare(&mut self, kind: DeclKind, names: &[Ident], span: Span) -> R<()> {
        let parity = match kind {
            DeclKind::Param => {
                self.params.extend(names.iter().map(|n| n.node.clone()));
                return Ok(());
            }
            DeclKind::Even => Parity::Even,
            DeclKind::Odd => Parity::Odd,
        };
        let base = self.table.len();
        let mut extra: Vec<Generator> = names
            .iter()
            .map(|n| Generator { name: n.node.clone(), parity, role: Role::Coordinate })
            .collect();
        for (j, n) in names.iter().enumerate() {
            extra.push(Generator { name: format!("d{}", n.node), parity: parity.flip(), role: Role::Differential(base + j) });
        }
        self.table = eng!(span, self.table.extend(extra))?;
        Ok(())
    }

    fn check(&mut self, suite: &str) -> Value {
        let reports = if suite == "all" { run_all(self.seed) } else { vec![run_suite(suite, self.seed).expect("analyzed")] };
        let holds = reports.iter().all(|r| r.ok());
        self.verified &= holds;
        Value::Report { kind: "check", holds, data: json!(reports) }
    }

    fn form(&self, f: SuperFn) -> SuperFn {
        if Arc::ptr_eq(f.table(), &self.table) || !f.table().is_prefix_of(&self.table) {
            f
        } else {
            f.embed(&self.table).expect("prefix table")
        }
    }

    fn constant(&self, c: Scalar) -> Value {
        Value::Form(SuperFn::constant(&self.table, c))
    }

    fn eval(&mut self, e: &Expr) -> R<Value> {
        let span = e.span;
        match &e.node {
            ExprKind::Number(n) => Ok(self.constant(number(n))),
            ExprKind::Var(name) => self.lookup(name, span),
            ExprKind::Neg(inner) => match self.eval(inner)? {
                Value::Form(f) => Ok(Value::Form(f.neg())),
                Value::Element(x) => Ok(Value::Element(Element(x.0.iter().map(|c| -c).collect()))),
                Value::Matrix(m) => Ok(Value::Matrix(m.neg())),
                v => Err(type_err(span, format!("cannot negate a {}", v.type_name()))),
            },
            ExprKind::Binary(op, l, r) => {
                let (a, b) = (self.eval(l)?, self.eval(r)?);
                self.binary(*op, a, b, span)
            }
            ExprKind::Call { name, args, bindings } => self.call(&name.node, args, bindings.as_deref(), span),
        }
    }

    fn lookup(&self, name: &str, span: Span) -> R<Value> {
        if let Some(v) = self.lets.get(name) {
            return Ok(match v {
                Value::Form(f) => Value::Form(self.form(f.clone())),
                v => v.clone(),
            });
        }
        match name {
            "i" => return Ok(self.constant(Scalar::i())),
            "pi" => return Ok(self.constant(&Scalar::two_pi() * &Scalar::from_ratio(1, 2))),
            _ => {}
        }
        if self.params.contains(name) {
            return Ok(self.constant(Scalar::param(name)));
        }
        if let (Some(a), Some(k)) = (&self.action, name.strip_prefix('X').and_then(|k| k.parse::<usize>().ok())) {
            return Ok(Value::Element(a.basis_element(k)));
        }
        let f = SuperFn::var(&self.table, name).map_err(|_| resolve_err(span, format!("unknown identifier '{}'", name)))?;
        Ok(Value::Form(f))
    }

    fn unify(&self, a: SuperFn, b: SuperFn, span: Span) -> R<(SuperFn, SuperFn)> {
        let (a, b) = (self.form(a), self.form(b));
        if a.same_table(&b) {
            return Ok((a, b));
        }
        if a.table().is_prefix_of(b.table()) {
            return Ok((eng!(span, a.embed(b.table()))?, b));
        }
        if b.table().is_prefix_of(a.table()) {
            let b = eng!(span, b.embed(a.table()))?;
            return Ok((a, b));
        }
        if let Ok(a2) = a.rehome(b.table()) {
            return Ok((a2, b));
        }
        let b2 = b.rehome(a.table()).map_err(|_| type_err(span, "forms live on incompatible variable sets"))?;
        Ok((a, b2))
    }

    fn scalar_of(&self, v: &Value, span: Span) -> R<Scalar> {
        match v {
            Value::Form(f) => f.as_constant().ok_or_else(|| type_err(span, "expected a constant")),
            v => Err(type_err(span, format!("expected a constant, found a {}", v.type_name()))),
        }
    }

    fn integer_of(&self, v: &Value, span: Span) -> R<i64> {
        let c = self.scalar_of(v, span)?;
        c.as_rational()
            .filter(|r| r.is_integer())
            .and_then(|r| r.to_i64())
            .ok_or_else(|| type_err(span, format!("expected an integer, found {}", c)))
    }

    fn binary(&self, op: BinOp, a: Value, b: Value, span: Span) -> R<Value> {
        use Value::*;
        let mismatch = |a: &Value, b: &Value| {
            type_err(span, format!("'{}' is not defined for a {} and a {}", op.symbol(), a.type_name(), b.type_name()))
        };
        match (op, a, b) {
            (BinOp::Pow, base, exp) => {
                let n = self.integer_of(&exp, span)?;
                match base {
                    Form(f) if n >= 0 => Ok(Form(f.pow(n as u32))),
                    Form(f) => {
                        let c = f.as_constant().ok_or_else(|| type_err(span, "negative powers need a constant base"))?;
                        if c.is_zero() {
                            return Err(type_err(span, "division by zero"));
                        }
                        Ok(self.constant(c.powi(n)))
                    }
                    Matrix(m) if n >= 0 => {
                        let mut acc = SuperMatrix::identity(m.k(), m.l(), m.table());
                        for _ in 0..n {
                            acc = eng!(span, acc.mul(&m))?;
                        }
                        Ok(Matrix(acc))
                    }
                    other => Err(mismatch(&other, &exp)),
                }
            }
            (op, Form(f), Form(g)) => {
                let (f, g) = self.unify(f, g, span)?;
                Ok(Form(match op {
                    BinOp::Add => f.add(&g),
                    BinOp::Sub => f.sub(&g),
                    BinOp::Mul => f.mul(&g),
                    _ => {
                        let c = g.as_constant().ok_or_else(|| type_err(span, "division by a non-constant"))?;
                        f.scale(&c.inv().ok_or_else(|| type_err(span, "division by zero"))?)
                    }
                }))
            }
            (BinOp::Add, Element(x), Element(y)) => Ok(Element(eq::Element(zip(&x, &y, |a, b| a + b)))),
            (BinOp::Sub, Element(x), Element(y)) => Ok(Element(eq::Element(zip(&x, &y, |a, b| a - b)))),
            (BinOp::Mul, c @ Form(_), Element(x)) | (BinOp::Mul, Element(x), c @ Form(_)) => {
                let c = self.scalar_of(&c, span)?;
                Ok(Element(eq::Element(x.0.iter().map(|a| &c * a).collect())))
            }
            (BinOp::Div, Element(x), c @ Form(_)) => {
                let c = self.scalar_of(&c, span)?.inv().ok_or_else(|| type_err(span, "division by zero"))?;
                Ok(Element(eq::Element(x.0.iter().map(|a| &c * a).collect())))
            }
            (BinOp::Add, Matrix(m), Matrix(n)) => Ok(Matrix(eng!(span, m.add(&n))?)),
            (BinOp::Sub, Matrix(m), Matrix(n)) => Ok(Matrix(eng!(span, m.sub(&n))?)),
            (BinOp::Mul, Matrix(m), Matrix(n)) => Ok(Matrix(eng!(span, m.mul(&n))?)),
            (BinOp::Mul, Form(f), Matrix(m)) | (BinOp::Mul, Matrix(m), Form(f)) => {
                let f = self.form(f);
                let f = if f.same_table(&SuperFn::zero(m.table())) { f } else { eng!(span, f.rehome(m.table()))? };
                Ok(Matrix(m.mul_elem(&f)))
            }
            (_, a, b) => Err(mismatch(&a, &b)),
        }
    }

    fn require_action(&self, span: Span) -> R<LinearAction> {
        self.action.clone().ok_or_else(|| type_err(span, "no action is declared"))
    }

    fn element_arg(&mut self, e: &Expr) -> R<Element> {
        match self.eval(e)? {
            Value::Element(x) => Ok(x),
            v => Err(type_err(e.span, format!("expected a Lie algebra element, found a {}", v.type_name()))),
        }
    }

    fn form_arg(&mut self, e: &Expr) -> R<SuperFn> {
        match self.eval(e)? {
            Value::Form(f) => Ok(self.form(f)),
            v => Err(type_err(e.span, format!("expected a form, found a {}", v.type_name()))),
        }
    }

    fn matrix_arg(&mut self, e: &Expr) -> R<SuperMatrix<Scalar>> {
        match self.eval(e)? {
            Value::Matrix(m) => Ok(m),
            v => Err(type_err(e.span, format!("expected a matrix, found a {}", v.type_name()))),
        }
    }

    fn call(&mut self, name: &str, args: &[Expr], bindings: Option<&[Binding]>, span: Span) -> R<Value> {
        let vars = || -> Vec<String> { bindings.unwrap_or(&[]).iter().map(|b| b.var.node.clone()).collect() };
        let duals = || -> Vec<String> {
            bindings.unwrap_or(&[]).iter().filter_map(|b| b.dual.as_ref().map(|d| d.node.clone())).collect()
        };
        match name {
            "d" => {
                let f = self.form_arg(&args[0])?;
                Ok(Value::Form(eng!(span, eq::d(&f))?))
            }
            "iota" | "lie" | "dg" => {
                let action = self.require_action(span)?;
                let x = self.element_arg(&args[0])?;
                let f = self.form_arg(&args[1])?;
                let f = if f.table().is_prefix_of(&self.table) { f } else { eng!(span, f.rehome(&self.table))? };
                let v = eng!(span, eq::vector_field_of(&action, &x, f.table()))?;
                let r = match name {
                    "iota" => eq::iota(&f, &v),
                    "lie" => eq::lie(&f, &v),
                    _ => eq::d_g(&f, &v),
                };
                Ok(Value::Form(eng!(span, r)?))
            }
            "exp" => Ok(Value::Form(eng!(span, self.form_arg(&args[0])?.exp_even())?)),
            "sqrt" => Ok(Value::Form(eng!(span, self.form_arg(&args[0])?.sqrt_even())?)),
            "body" => {
                let f = self.form_arg(&args[0])?;
                Ok(self.constant(f.body()))
            }
            "int" => {
                let f = self.form_arg(&args[0])?;
                let r = eng!(span, integrate_superspace(&f, &IntegrationSpec::raw(&vars())))?;
                self.log.extend(r.log);
                Ok(Value::Form(r.value))
            }
            "fourier" => {
                let f = self.form_arg(&args[0])?;
                let space = FourierSpace::new(&vars(), &duals());
                let (d, log) = eng!(
                    span,
                    fourier_transform(&Distribution::function(f), FourierDirection::FunctionToDistribution, &space)
                )?;
                self.log.extend(log);
                Ok(Value::Distribution(d))
            }
            "ifourier" => {
                let input = match self.eval(&args[0])? {
                    Value::Distribution(d) => d,
                    Value::Form(f) => Distribution::function(f),
                    v => return Err(type_err(args[0].span, format!("expected a distribution, found a {}", v.type_name()))),
                };
                let space = FourierSpace::new(&vars(), &duals());
                let (d, log) = eng!(span, fourier_transform(&input, FourierDirection::DistributionToFunction, &space))?;
                self.log.extend(log);
                if d.measure.is_empty() {
                    let f = d.flatten();
                    return Ok(Value::Form(f.rehome(&self.table).unwrap_or(f)));
                }
                Ok(Value::Distribution(d))
            }
            "smat" => self.smat(args, span),
            "ber" => {
                let m = self.matrix_arg(&args[0])?;
                Ok(Value::Form(eng!(span, m.berezinian(BerVariant::Standard))?))
            }
            "str" => Ok(Value::Form(self.matrix_arg(&args[0])?.supertrace())),
            "spf" => {
                let action = self.require_action(span)?;
                let x = self.element_arg(&args[0])?;
                let (s, log) = eng!(span, eq::spf(&action, &x))?;
                self.log.extend(log);
                Ok(self.constant(s))
            }
            "thom" => {
                let action = self.require_action(span)?;
                let x = self.element_arg(&args[0])?;
                let th = eng!(span, eq::mathai_quillen_thom(&action, &x))?;
                self.log.extend(th.log.clone());
                if let Some(c) = th.caveat {
                    if !self.caveats.iter().any(|k| k == c) {
                        self.caveats.push(c.to_string());
                    }
                }
                self.verified &= th.verified();
                Ok(Value::Form(self.form(th.theta)))
            }
            "euler" => {
                let action = self.require_action(span)?;
                let x = self.element_arg(&args[0])?;
                let e = eng!(span, eq::euler_form(&action, &x))?;
                self.log.extend(e.log.clone());
                self.verified &= e.holds;
                Ok(Value::Report { kind: "euler", holds: e.holds, data: e.to_json() })
            }
            "beta" => {
                let action = self.require_action(span)?;
                let x = self.element_arg(&args[0])?;
                let b = eng!(span, eq::beta_form(&action, &x))?;
                Ok(Value::Form(self.form(b.beta)))
            }
            "localize" => {
                let action = self.require_action(span)?;
                let alpha = self.form_arg(&args[0])?;
                let x = self.element_arg(&args[1])?;
                let l = eng!(span, eq::localize_linear(&alpha, &action, &x))?;
                self.log.extend(l.log.clone());
                self.verified &= l.equal;
                Ok(Value::Report { kind: "localization", holds: l.equal, data: l.to_json() })
            }
            other => Err(resolve_err(span, format!("unknown function '{}'", other))),
        }
    }

    fn smat(&mut self, args: &[Expr], span: Span) -> R<Value> {
        let k = self.eval(&args[0])?;
        let k = self.integer_of(&k, args[0].span)?;
        let l = self.eval(&args[1])?;
        let l = self.integer_of(&l, args[1].span)?;
        if k < 0 || l < 0 {
            return Err(type_err(span, "block sizes must be nonnegative"));
        }
        let n = (k + l) as usize;
        if args.len() != 2 + n * n {
            return Err(type_err(span, format!("a ({}|{}) matrix needs {} entries, found {}", k, l, n * n, args.len() - 2)));
        }
        let mut entries = Vec::with_capacity(n * n);
        for a in &args[2..] {
            let f = self.form_arg(a)?;
            entries.push(if f.table().is_prefix_of(&self.table) { self.form(f) } else { eng!(a.span, f.rehome(&self.table))? });
        }
        let rows: Vec<Vec<SuperFn>> = entries.chunks(n).map(|r| r.to_vec()).collect();
        Ok(Value::Matrix(eng!(span, SuperMatrix::new(k as usize, l as usize, &self.table, rows))?))
    }
}

fn zip(x: &Element, y: &Element, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Vec<Scalar> {
    x.0.iter().zip(&y.0).map(|(a, b)| f(a, b)).collect()
}

/// Decimal literal to an exact rational.
fn number(text: &str) -> Scalar {
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    let ratio = format!("{}{}/1{}", int, frac, "0".repeat(frac.len()));
    ratio.parse().expect("digits")
}

fn analyze_expr(e: &Expr, syms: &HashMap<String, Sym>, out: &mut Vec<DslError>) {
    match &e.node {
        ExprKind::Number(_) => {}
        ExprKind::Var(v) => {
            if !CONSTANTS.contains(&v.as_str()) && !syms.contains_key(v) {
                out.push(resolve_err(e.span, format!("unknown identifier '{}'", v)));
            }
        }
        ExprKind::Neg(inner) => analyze_expr(inner, syms, out),
        ExprKind::Binary(_, l, r) => {
            analyze_expr(l, syms, out);
            analyze_expr(r, syms, out);
        }
        ExprKind::Call { name, args, bindings } => {
            for a in args {
                analyze_expr(a, syms, out);
            }
            let Some((arity, takes_bindings)) = builtin(&name.node) else {
                out.push(resolve_err(name.span, format!("unknown function '{}'", name.node)));
                return;
            };
            match arity {
                Some(n) if args.len() != n => out.push(resolve_err(
                    e.span,
                    format!("'{}' takes {} argument{}, found {}", name.node, n, if n == 1 { "" } else { "s" }, args.len()),
                )),
                None if args.len() < 2 => out.push(resolve_err(e.span, format!("'{}' needs block sizes", name.node))),
                _ => {}
            }
            match (takes_bindings, bindings) {
                (false, Some(b)) => out.push(resolve_err(b[0].var.span, format!("'{}' takes no variable list", name.node))),
                (true, None) => out.push(resolve_err(e.span, format!("'{}' needs a variable list after ';'", name.node))),
                (true, Some(bs)) => {
                    let dual_form = name.node != "int";
                    for b in bs {
                        let coord = if name.node == "ifourier" { b.dual.as_ref() } else { Some(&b.var) };
                        if let Some(c) = coord {
                            if syms.get(&c.node) != Some(&Sym::Coordinate) {
                                out.push(resolve_err(c.span, format!("'{}' is not a declared coordinate", c.node)));
                            }
                        }
                        match (&b.dual, dual_form) {
                            (None, true) => out.push(resolve_err(b.var.span, "expected 'variable: dual'")),
                            (Some(d), false) => out.push(resolve_err(d.span, "'int' takes plain variables")),
                            _ => {}
                        }
                    }
                }
                (false, None) => {}
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parser::parse;
    use super::*;

    fn run(src: &str) -> Outcome {
        Evaluator::new(0).run(&parse(src).unwrap()).unwrap()
    }

    fn text(src: &str) -> String {
        run(src).last().unwrap().text()
    }

    fn form(src: &str) -> SuperFn {
        match run(src).last().unwrap() {
            Value::Form(f) => f.clone(),
            v => panic!("{:?}", v),
        }
    }

    #[test]
    fn exponential_of_a_nilpotent() {
        let f = form("odd xi eta; exp(xi*eta)");
        let t = f.table().clone();
        let xi = SuperFn::var(&t, "xi").unwrap();
        let eta = SuperFn::var(&t, "eta").unwrap();
        assert_eq!(f, SuperFn::one(&t).add(&xi.mul(&eta)));
    }

    #[test]
    fn berezin_integral_call() {
        assert_eq!(form("odd xi eta; int(xi*eta; xi, eta)").as_constant(), Some(Scalar::from_i64(-1)));
        assert_eq!(form("odd xi eta; int(eta*xi; xi, eta)").as_constant(), Some(Scalar::from_i64(1)));
    }

    #[test]
    fn arithmetic_and_constants() {
        assert_eq!(text("2^-1 + 1/4"), "3/4");
        assert_eq!(text("-2^2"), "-4");
        assert_eq!(text("(1 + i)^2"), "2*i");
        assert_eq!(form("0.25").as_constant(), Some(Scalar::from_ratio(1, 4)));
        assert_eq!(form("2*pi").as_constant(), Some(Scalar::two_pi()));
    }

    #[test]
    fn let_bindings_and_later_declarations() {
        let f = form("odd xi; let a = 1 + xi; odd eta; a*eta");
        let t = f.table().clone();
        let (xi, eta) = (SuperFn::var(&t, "xi").unwrap(), SuperFn::var(&t, "eta").unwrap());
        assert_eq!(f, eta.add(&xi.mul(&eta)));
    }

    #[test]
    fn differentials() {
        let f = form("even x; odd xi; d(x*xi)");
        let t = f.table().clone();
        let v = |n: &str| SuperFn::var(&t, n).unwrap();
        assert_eq!(f, v("dx").mul(&v("xi")).add(&v("x").mul(&v("dxi"))));
    }

    #[test]
    fn worked_example_through_the_language() {
        let f = form("action rot02; param z; thom(z*X0)");
        let direct = eq::mathai_quillen_thom(&LinearAction::rotation_odd(), &LinearAction::rotation_odd().generic())
            .unwrap()
            .theta;
        assert_eq!(f, direct);
        let out = run("action rot02; param z; thom(z*X0)");
        assert_eq!(out.caveats.len(), 1);
        assert!(out.verified);
    }

    #[test]
    fn localization_and_euler_reports() {
        let out = run("action rot22; param z1 z2; let X = z1*X0 + z2*X1; localize(3*thom(X), X); euler(X)");
        assert!(out.verified);
        assert!(out.outputs.iter().all(|o| matches!(o.value, Value::Report { holds: true, .. })));
    }

    #[test]
    fn cartan_calls() {
        let f = form("action rot02; param z; dg(z*X0, dg(z*X0, xi*eta))");
        assert!(f.is_zero());
        let f = form("action rot02; iota(X0, dxi)");
        assert!(!f.is_zero());
    }

    #[test]
    fn supermatrices() {
        let s = |src: &str| src.parse::<Scalar>().unwrap();
        assert_eq!(form("param a b c; ber(smat(1, 1, a, 0, 0, b))").as_constant(), Some(s("a/b")));
        assert_eq!(form("param a b; str(smat(1, 1, a, 0, 0, b))").as_constant(), Some(s("a - b")));
        let f = form("odd t1 t2; ber(smat(1, 1, 1, t1, t2, 1)^2)");
        let g = form("odd t1 t2; ber(smat(1, 1, 1, t1, t2, 1))^2");
        assert_eq!(f, g);
    }

    #[test]
    fn fourier_round_trip() {
        let f = form("odd xi; param a b; ifourier(fourier(a + b*xi; xi: f); f: xi)");
        let g = form("odd xi; param a b; a + b*xi");
        assert_eq!(f, g);
    }

    #[test]
    fn resolution_errors() {
        let e = Evaluator::new(0);
        let p = parse("odd xi; xi + eta; foo(xi); exp(xi, xi); int(xi); action nope").unwrap();
        let errs = e.analyze(&p);
        assert_eq!(errs.len(), 5, "{:?}", errs);
        assert!(errs.iter().all(|e| matches!(e, DslError::Resolve { .. })));
        assert_eq!(errs[0].span().column, 14);
    }

    #[test]
    fn action_after_coordinates_is_rejected() {
        let errs = Evaluator::new(0).analyze(&parse("odd xi; action rot02").unwrap());
        assert_eq!(errs.len(), 1);
    }

    #[test]
    fn type_and_engine_errors() {
        let mut e = Evaluator::new(0);
        let err = e.run(&parse("odd xi; 1/xi").unwrap()).unwrap_err();
        assert!(matches!(err, DslError::Type { .. }));
        let mut e = Evaluator::new(0);
        let err = e.run(&parse("odd xi; exp(xi)").unwrap()).unwrap_err();
        assert!(err.is_engine());
        assert_eq!(err.span().column, 9);
    }

    #[test]
    fn check_statement() {
        let out = run("check moment");
        assert!(out.verified);
    }
}
