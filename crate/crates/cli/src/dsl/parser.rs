use super::ast::*;
use super::lexer::{lex, Tok, Token};
use super::DslError;

pub fn parse(src: &str) -> Result<Program, DslError> {
    let toks = lex(src)?;
    Parser { toks, pos: 0 }.program()
}

/// Parses a single expression, e.g. a `--alpha` argument.
pub fn parse_expr(src: &str) -> Result<Expr, DslError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    p.expect(&Tok::Eof)?;
    Ok(e)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if &self.peek().tok == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok) -> Result<Token, DslError> {
        if &self.peek().tok == tok {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&format!("'{}'", describe_expected(tok))))
        }
    }

    fn unexpected(&self, wanted: &str) -> DslError {
        let t = self.peek();
        DslError::syntax(t.span, format!("expected {}, found {}", wanted, t.tok.describe()))
    }

    /// A fresh name: an identifier that is not reserved.
    fn name(&mut self) -> Result<Ident, DslError> {
        match self.peek().tok.clone() {
            Tok::Ident(s) if is_reserved(&s) => Err(DslError::ReservedWord { word: s, span: self.peek().span }),
            Tok::Ident(s) => {
                let span = self.bump().span;
                Ok(Spanned { node: s, span })
            }
            _ => Err(self.unexpected("a name")),
        }
    }

    fn program(&mut self) -> Result<Program, DslError> {
        let mut stmts = Vec::new();
        loop {
            while self.eat(&Tok::Semi) {}
            if self.peek().tok == Tok::Eof {
                return Ok(Program { stmts });
            }
            stmts.push(self.stmt()?);
            if !self.eat(&Tok::Semi) && self.peek().tok != Tok::Eof {
                return Err(self.unexpected("';'"));
            }
        }
    }

    fn stmt(&mut self) -> Result<Stmt, DslError> {
        let start = self.peek().span;
        let keyword = match &self.peek().tok {
            Tok::Ident(s) if KEYWORDS.contains(&s.as_str()) => Some(s.clone()),
            _ => None,
        };
        let node = match keyword.as_deref() {
            Some(kw @ ("even" | "odd" | "param")) => {
                self.bump();
                let kind = match kw {
                    "even" => DeclKind::Even,
                    "odd" => DeclKind::Odd,
                    _ => DeclKind::Param,
                };
                let mut names = vec![self.name()?];
                while matches!(&self.peek().tok, Tok::Ident(s) if !KEYWORDS.contains(&s.as_str())) {
                    names.push(self.name()?);
                }
                StmtKind::Decl { kind, names }
            }
            Some("action") => {
                self.bump();
                match self.peek().tok.clone() {
                    Tok::Ident(s) => {
                        let span = self.bump().span;
                        StmtKind::Action(Spanned { node: s, span })
                    }
                    _ => return Err(self.unexpected("an action name")),
                }
            }
            Some("let") => {
                self.bump();
                let name = self.name()?;
                self.expect(&Tok::Eq)?;
                let value = self.expr()?;
                StmtKind::Let { name, value }
            }
            Some("check") => {
                self.bump();
                match self.peek().tok.clone() {
                    Tok::Ident(s) => {
                        let span = self.bump().span;
                        StmtKind::Check(Spanned { node: s, span })
                    }
                    _ => return Err(self.unexpected("a suite name")),
                }
            }
            _ => StmtKind::Expr(self.expr()?),
        };
        let end = self.toks[self.pos.saturating_sub(1)].span;
        Ok(Spanned { node, span: start.to(end) })
    }

    fn expr(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.product()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.product()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    fn product(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, DslError> {
        if self.peek().tok == Tok::Minus {
            let start = self.bump().span;
            let inner = self.unary()?;
            let span = start.to(inner.span);
            return Ok(Spanned { node: ExprKind::Neg(Box::new(inner)), span });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, DslError> {
        let base = self.atom()?;
        if self.eat(&Tok::Caret) {
            // Right associative; the exponent may carry its own sign.
            let exp = self.unary()?;
            return Ok(binary(BinOp::Pow, base, exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, DslError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Number(n) => {
                self.bump();
                Ok(Spanned { node: ExprKind::Number(n), span: t.span })
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(&Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if KEYWORDS.contains(&name.as_str()) {
                    return Err(DslError::ReservedWord { word: name, span: t.span });
                }
                self.bump();
                if self.peek().tok == Tok::LParen {
                    return self.call(Spanned { node: name, span: t.span });
                }
                if builtin(&name).is_some() {
                    return Err(DslError::syntax(self.peek().span, format!("expected '(' after '{}'", name)));
                }
                Ok(Spanned { node: ExprKind::Var(name), span: t.span })
            }
            _ => Err(self.unexpected("an expression")),
        }
    }

    fn call(&mut self, name: Ident) -> Result<Expr, DslError> {
        self.expect(&Tok::LParen)?;
        let mut args = Vec::new();
        if !matches!(self.peek().tok, Tok::RParen | Tok::Semi) {
            args.push(self.expr()?);
            while self.eat(&Tok::Comma) {
                args.push(self.expr()?);
            }
        }
        let bindings = if self.eat(&Tok::Semi) {
            let mut bs = vec![self.binding()?];
            while self.eat(&Tok::Comma) {
                bs.push(self.binding()?);
            }
            Some(bs)
        } else {
            None
        };
        let close = self.expect(&Tok::RParen)?;
        let span = name.span.to(close.span);
        Ok(Spanned { node: ExprKind::Call { name, args, bindings }, span })
    }

    fn binding(&mut self) -> Result<Binding, DslError> {
        let var = self.name()?;
        let dual = if self.eat(&Tok::Colon) { Some(self.name()?) } else { None };
        Ok(Binding { var, dual })
    }
}

fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
    let span = lhs.span.to(rhs.span);
    Spanned { node: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span }
}

fn describe_expected(tok: &Tok) -> String {
    let d = tok.describe();
    d.trim_matches('\'').to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(src: &str) -> String {
        super::super::format::format_expr(&parse_expr(src).unwrap())
    }

    #[test]
    fn precedence() {
        assert_eq!(shape("1 + 2 * 3 ^ 2"), "1 + 2 * 3^2");
        assert_eq!(shape("(1 + 2) * 3"), "(1 + 2) * 3");
        assert_eq!(shape("-x^2"), "-x^2");
        assert_eq!(shape("(-x)^2"), "(-x)^2");
        assert_eq!(shape("2^3^2"), "2^3^2");
        assert_eq!(shape("(2^3)^2"), "(2^3)^2");
        assert_eq!(shape("a - (b - c)"), "a - (b - c)");
        assert_eq!(shape("a - b - c"), "a - b - c");
        assert_eq!(shape("x^-1"), "x^-1");
    }

    #[test]
    fn pow_is_right_associative() {
        let e = parse_expr("a^b^c").unwrap();
        match e.node {
            ExprKind::Binary(BinOp::Pow, l, r) => {
                assert_eq!(l.node, ExprKind::Var("a".into()));
                assert!(matches!(r.node, ExprKind::Binary(BinOp::Pow, _, _)));
            }
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        let e = parse_expr("-a^2").unwrap();
        assert!(matches!(e.node, ExprKind::Neg(_)));
        let e = parse_expr("-a*b").unwrap();
        assert!(matches!(e.node, ExprKind::Binary(BinOp::Mul, _, _)));
    }

    #[test]
    fn calls_with_bindings() {
        let e = parse_expr("int(xi*eta; xi, eta)").unwrap();
        match e.node {
            ExprKind::Call { name, args, bindings } => {
                assert_eq!(name.node, "int");
                assert_eq!(args.len(), 1);
                let b = bindings.unwrap();
                assert_eq!(b.iter().map(|b| b.var.node.as_str()).collect::<Vec<_>>(), ["xi", "eta"]);
            }
            other => panic!("{:?}", other),
        }
        let e = parse_expr("fourier(a + b*xi; xi: f)").unwrap();
        assert!(matches!(e.node, ExprKind::Call { bindings: Some(ref b), .. } if b[0].dual.is_some()));
    }

    #[test]
    fn statements() {
        let p = parse("odd xi eta; param z;\n# note\nlet w = exp(xi*eta); w").unwrap();
        assert!(matches!(parse("param z\nlet w = 1"), Err(DslError::Syntax { .. })));
        assert_eq!(p.stmts.len(), 4);
        assert!(matches!(&p.stmts[0].node, StmtKind::Decl { kind: DeclKind::Odd, names } if names.len() == 2));
        assert!(matches!(p.stmts[3].node, StmtKind::Expr(_)));
    }

    #[test]
    fn spans_point_into_source() {
        let src = "odd xi;\nexp(xi * 2)";
        let p = parse(src).unwrap();
        let s = &p.stmts[1];
        assert_eq!(&src[s.span.offset..s.span.offset + s.span.len], "exp(xi * 2)");
        assert_eq!((s.span.line, s.span.column), (2, 1));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let e = parse("odd xi;\nexp(xi *)").unwrap_err();
        assert!(matches!(e, DslError::Syntax { .. }));
        let s = e.span();
        assert_eq!((s.line, s.column), (2, 9));
        let e = parse("1 2").unwrap_err();
        assert_eq!(e.span().column, 3);
    }

    #[test]
    fn reserved_words() {
        assert!(matches!(parse("odd d;"), Err(DslError::ReservedWord { ref word, .. }) if word == "d"));
        assert!(matches!(parse("let exp = 1"), Err(DslError::ReservedWord { .. })));
        assert!(matches!(parse("1 + even"), Err(DslError::ReservedWord { .. })));
        assert!(matches!(parse("param i"), Err(DslError::ReservedWord { .. })));
    }

    #[test]
    fn builtin_needs_call() {
        assert!(matches!(parse("exp + 1"), Err(DslError::Syntax { .. })));
    }
}
