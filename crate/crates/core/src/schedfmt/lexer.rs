use super::diag::{Diagnostic, Span};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    /// Numeric literal; `integral` is set when it was written without a
    /// fraction or exponent.
    Number {
        value: f64,
        integral: bool,
    },
    LParen,
    RParen,
    Comma,
    Semi,
    Eq,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Number { .. } => "number".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::Semi => "';'".into(),
            Tok::Eq => "'='".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: Span,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    src: &'a str,
    line: usize,
    col: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, ch)| ch)
    }

    fn offset(&mut self) -> usize {
        self.chars.peek().map_or(self.src.len(), |&(i, _)| i)
    }

    fn bump(&mut self) -> Option<char> {
        let (_, ch) = self.chars.next()?;
        if ch == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(ch)
    }

    fn span(&self) -> Span {
        Span { line: self.line, col: self.col }
    }

    fn eat_digits(&mut self) -> usize {
        let mut n = 0;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
            n += 1;
        }
        n
    }
}

pub(crate) fn lex(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut cur = Cursor { chars: src.char_indices().peekable(), src, line: 1, col: 1 };
    let mut out = Vec::new();
    while let Some(ch) = cur.peek() {
        let span = cur.span();
        let single = match ch {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            ';' => Some(Tok::Semi),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(tok) = single {
            cur.bump();
            out.push(Token { tok, span });
            continue;
        }
        if ch.is_whitespace() {
            cur.bump();
        } else if ch == '#' {
            while cur.peek().is_some_and(|c| c != '\n') {
                cur.bump();
            }
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let start = cur.offset();
            while cur.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                cur.bump();
            }
            let end = cur.offset();
            out.push(Token { tok: Tok::Ident(src[start..end].to_string()), span });
        } else if ch.is_ascii_digit() || ch == '.' || ch == '-' || ch == '+' {
            out.push(Token { tok: number(&mut cur, span)?, span });
        } else {
            return Err(Diagnostic::error(span, format!("unexpected character '{ch}'")));
        }
    }
    out.push(Token { tok: Tok::Eof, span: cur.span() });
    Ok(out)
}

fn number(cur: &mut Cursor<'_>, span: Span) -> Result<Tok, Diagnostic> {
    let start = cur.offset();
    if matches!(cur.peek(), Some('-' | '+')) {
        cur.bump();
    }
    let mut digits = cur.eat_digits();
    let mut integral = true;
    if cur.peek() == Some('.') {
        cur.bump();
        integral = false;
        digits += cur.eat_digits();
    }
    if digits == 0 {
        return Err(Diagnostic::error(span, "malformed number"));
    }
    if matches!(cur.peek(), Some('e' | 'E')) {
        cur.bump();
        integral = false;
        if matches!(cur.peek(), Some('-' | '+')) {
            cur.bump();
        }
        if cur.eat_digits() == 0 {
            return Err(Diagnostic::error(span, "malformed exponent in number"));
        }
    }
    let end = cur.offset();
    let text = &cur.src[start..end];
    let value: f64 = text.parse().map_err(|_| Diagnostic::error(span, format!("malformed number '{text}'")))?;
    if !value.is_finite() {
        return Err(Diagnostic::error(span, format!("number '{text}' is out of range")));
    }
    Ok(Tok::Number { value, integral })
}
