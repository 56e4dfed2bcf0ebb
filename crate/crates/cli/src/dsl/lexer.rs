use super::ast::Span;
use super::DslError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Number(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Semi,
    Colon,
    Eq,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier '{}'", s),
            Tok::Number(s) => format!("number {}", s),
            Tok::Eof => "end of input".into(),
            t => format!("'{}'", t.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Caret => "^",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Colon => ":",
            Tok::Eq => "=",
            _ => "",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

pub fn lex(src: &str) -> Result<Vec<Token>, DslError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&(start, c)) = chars.peek() {
        let span_at = |len: usize| Span { offset: start, line, column: col, len };
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c == '#' {
            while let Some(&(_, c)) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut end = start;
            let mut n = 0;
            while let Some(&(i, c)) = chars.peek() {
                if !(c.is_ascii_alphanumeric() || c == '_') {
                    break;
                }
                end = i + c.len_utf8();
                n += 1;
                chars.next();
            }
            out.push(Token { tok: Tok::Ident(src[start..end].to_string()), span: span_at(end - start) });
            col += n;
            continue;
        }
        if c.is_ascii_digit() {
            let mut end = start;
            let mut seen_dot = false;
            while let Some(&(i, c)) = chars.peek() {
                if c == '.' && !seen_dot {
                    seen_dot = true;
                } else if !c.is_ascii_digit() {
                    break;
                }
                end = i + 1;
                chars.next();
            }
            let text = &src[start..end];
            if text.ends_with('.') {
                return Err(DslError::syntax(span_at(end - start), "a decimal point must be followed by digits"));
            }
            out.push(Token { tok: Tok::Number(text.to_string()), span: span_at(end - start) });
            col += end - start;
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            ':' => Tok::Colon,
            '=' => Tok::Eq,
            other => {
                return Err(DslError::syntax(span_at(other.len_utf8()), format!("unexpected character '{}'", other)))
            }
        };
        out.push(Token { tok, span: span_at(1) });
        chars.next();
        col += 1;
    }
    out.push(Token { tok: Tok::Eof, span: Span { offset: src.len(), line, column: col, len: 0 } });
    Ok(out)
}
