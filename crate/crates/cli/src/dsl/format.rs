//! Canonical printing: one statement per line, single spaces around binary
//! `+ - * /`, none around `^`, and only the parentheses the grammar needs.

use super::ast::*;

pub fn format_program(p: &Program) -> String {
    let mut out = String::new();
    for s in &p.stmts {
        out.push_str(&format_stmt(s));
        out.push('\n');
    }
    out
}

pub fn format_stmt(s: &Stmt) -> String {
    match &s.node {
        StmtKind::Decl { kind, names } => {
            let names: Vec<&str> = names.iter().map(|n| n.node.as_str()).collect();
            format!("{} {};", kind.keyword(), names.join(" "))
        }
        StmtKind::Action(a) => format!("action {};", a.node),
        StmtKind::Let { name, value } => format!("let {} = {};", name.node, format_expr(value)),
        StmtKind::Check(s) => format!("check {};", s.node),
        StmtKind::Expr(e) => format!("{};", format_expr(e)),
    }
}

pub fn format_expr(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(e, &mut out);
    out
}

fn prec(e: &Expr) -> u8 {
    match &e.node {
        ExprKind::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
        ExprKind::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
        ExprKind::Neg(_) => 3,
        ExprKind::Binary(BinOp::Pow, ..) => 4,
        _ => 5,
    }
}

fn write_wrapped(e: &Expr, parens: bool, out: &mut String) {
    if parens {
        out.push('(');
    }
    write_expr(e, out);
    if parens {
        out.push(')');
    }
}

fn write_expr(e: &Expr, out: &mut String) {
    match &e.node {
        ExprKind::Number(n) => out.push_str(n),
        ExprKind::Var(v) => out.push_str(v),
        ExprKind::Neg(inner) => {
            out.push('-');
            write_wrapped(inner, prec(inner) < 3, out);
        }
        ExprKind::Binary(BinOp::Pow, base, exp) => {
            write_wrapped(base, prec(base) <= 4, out);
            out.push('^');
            write_wrapped(exp, prec(exp) < 3, out);
        }
        ExprKind::Binary(op, l, r) => {
            let level = prec(e);
            write_wrapped(l, prec(l) < level, out);
            out.push(' ');
            out.push_str(op.symbol());
            out.push(' ');
            write_wrapped(r, prec(r) <= level, out);
        }
        ExprKind::Call { name, args, bindings } => {
            out.push_str(&name.node);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_expr(a, out);
            }
            if let Some(bs) = bindings {
                out.push_str("; ");
                let parts: Vec<String> = bs
                    .iter()
                    .map(|b| match &b.dual {
                        Some(d) => format!("{}: {}", b.var.node, d.node),
                        None => b.var.node.clone(),
                    })
                    .collect();
                out.push_str(&parts.join(", "));
            }
            out.push(')');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parser::parse;
    use super::*;

    #[test]
    fn round_trip() {
        let src = "odd xi eta;param z; # c\nlet w=exp( xi*eta ) ; -(w+1)*2^-(1)/3 - -z;int(w;xi,eta);fourier(w; xi:f, eta:g)";
        let p = parse(src).unwrap();
        let text = format_program(&p);
        let q = parse(&text).unwrap();
        assert_eq!(p, q);
        assert_eq!(format_program(&q), text);
    }

    #[test]
    fn minimal_parentheses() {
        let p = parse("((a)) + ((b * c)); (a + b) * c; a / (b * c); d(((x)))").unwrap();
        assert_eq!(format_program(&p), "a + b * c;\n(a + b) * c;\na / (b * c);\nd(x);\n");
    }

    #[test]
    fn comments_are_dropped() {
        let p = parse("# header\nodd xi; # trailing\nxi").unwrap();
        assert_eq!(format_program(&p), "odd xi;\nxi;\n");
    }
}
