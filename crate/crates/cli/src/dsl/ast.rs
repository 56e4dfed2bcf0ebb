use std::fmt;

/// A source region: byte offset, 1-based line and column (in characters),
/// and length in bytes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Span {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
    pub len: usize,
}

impl Span {
    /// The smallest span covering `self` and `other`, assuming `other`
    /// does not start before `self`.
    pub fn to(self, other: Span) -> Span {
        Span { len: (other.offset + other.len).saturating_sub(self.offset), ..self }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// A node with its source span. Equality compares nodes only, so that a
/// reparsed program equals the original whatever its layout.
#[derive(Debug, Clone)]
pub struct Spanned<T> {
    pub node: T,
    pub span: Span,
}

impl<T: PartialEq> PartialEq for Spanned<T> {
    fn eq(&self, other: &Self) -> bool {
        self.node == other.node
    }
}

impl<T: Eq> Eq for Spanned<T> {}

pub type Ident = Spanned<String>;
pub type Expr = Spanned<ExprKind>;
pub type Stmt = Spanned<StmtKind>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

/// `var` or `var: dual` inside the binding list of `int` and `fourier`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Binding {
    pub var: Ident,
    pub dual: Option<Ident>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    /// Decimal literal as written, e.g. `3` or `0.25`.
    Number(String),
    Var(String),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call { name: Ident, args: Vec<Expr>, bindings: Option<Vec<Binding>> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeclKind {
    Even,
    Odd,
    Param,
}

impl DeclKind {
    pub fn keyword(self) -> &'static str {
        match self {
            DeclKind::Even => "even",
            DeclKind::Odd => "odd",
            DeclKind::Param => "param",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StmtKind {
    Decl { kind: DeclKind, names: Vec<Ident> },
    Action(Ident),
    Let { name: Ident, value: Expr },
    Check(Ident),
    Expr(Expr),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Program {
    pub stmts: Vec<Stmt>,
}

pub const KEYWORDS: [&str; 6] = ["even", "odd", "param", "action", "let", "check"];

/// Constants that cannot be rebound: the imaginary unit and π.
pub const CONSTANTS: [&str; 2] = ["i", "pi"];

/// Builtin functions with their argument counts (`None` for variadic)
/// and whether they take a binding list after `;`.
pub const BUILTINS: [(&str, Option<usize>, bool); 18] = [
    ("d", Some(1), false),
    ("iota", Some(2), false),
    ("lie", Some(2), false),
    ("dg", Some(2), false),
    ("exp", Some(1), false),
    ("sqrt", Some(1), false),
    ("body", Some(1), false),
    ("int", Some(1), true),
    ("fourier", Some(1), true),
    ("ifourier", Some(1), true),
    ("smat", None, false),
    ("ber", Some(1), false),
    ("str", Some(1), false),
    ("spf", Some(1), false),
    ("thom", Some(1), false),
    ("euler", Some(1), false),
    ("beta", Some(1), false),
    ("localize", Some(2), false),
];

pub fn builtin(name: &str) -> Option<(Option<usize>, bool)> {
    BUILTINS.iter().find(|(n, _, _)| *n == name).map(|(_, a, b)| (*a, *b))
}

pub fn is_reserved(name: &str) -> bool {
    KEYWORDS.contains(&name) || CONSTANTS.contains(&name) || builtin(name).is_some()
}
