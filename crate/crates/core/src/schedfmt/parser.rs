use super::ast::{Arg, Ctor, Program, SchemeKw, WindowDecl};
use super::diag::{Diagnostic, Span};
use super::lexer::{lex, Tok, Token};
use crate::builtins::{ERROR_BUILTINS, GROUP_BUILTINS, OPERATOR_BUILTINS};

/// Source positions of the parsed program's parts.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SourceMap {
    pub group: Span,
    pub dt: Span,
    pub errors: Vec<Span>,
    pub windows: Vec<WindowSpans>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct WindowSpans {
    pub keyword: Span,
    pub pulse: Option<Span>,
    pub hamiltonian: Span,
    pub cycles: Span,
}

/// A syntactically valid program with positions for later diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Parsed {
    pub program: Program,
    pub spans: SourceMap,
}

/// Parse a program whose operator references are builtins only.
pub fn parse(src: &str) -> Result<Parsed, Diagnostic> {
    parse_with(src, &[])
}

/// Parse a program that may also reference the named operators in `names`
/// (typically loaded from inline JSON).
pub fn parse_with(src: &str, names: &[String]) -> Result<Parsed, Diagnostic> {
    let tokens = lex(src)?;
    let mut p = Parser { tokens, pos: 0, names };
    p.program()
}

/// Parse a single constructor such as `collective_pauli(2)` or `pauli(1,x)`.
pub fn parse_ctor(src: &str) -> Result<Ctor, Diagnostic> {
    let tokens = lex(src)?;
    let mut p = Parser { tokens, pos: 0, names: &[] };
    let (ctor, _) = p.ctor()?;
    p.expect(|t| matches!(t, Tok::Eof), &["end of input"])?;
    Ok(ctor)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    names: &'a [String],
}

enum Kind {
    Group,
    Errors,
    Operator,
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> Diagnostic {
        let t = self.peek();
        let list: Vec<String> = expected.iter().map(|s| s.to_string()).collect();
        let mut d = Diagnostic::error(t.span, format!("expected {}, found {}", list.join(" or "), t.tok.describe()));
        d.expected = list;
        d
    }

    fn expect(&mut self, pred: impl Fn(&Tok) -> bool, expected: &[&str]) -> Result<Token, Diagnostic> {
        if pred(&self.peek().tok) {
            Ok(self.next())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<Span, Diagnostic> {
        let quoted = format!("'{kw}'");
        self.expect(|t| matches!(t, Tok::Ident(s) if s == kw), &[quoted.as_str()]).map(|t| t.span)
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn semi(&mut self) -> Result<(), Diagnostic> {
        self.expect(|t| matches!(t, Tok::Semi), &["';'"]).map(|_| ())
    }

    fn ident(&mut self, what: &str) -> Result<(String, Span), Diagnostic> {
        match self.peek().tok.clone() {
            Tok::Ident(s) => {
                let span = self.next().span;
                Ok((s, span))
            }
            _ => Err(self.unexpected(&[what])),
        }
    }

    fn program(&mut self) -> Result<Parsed, Diagnostic> {
        let mut spans = SourceMap::default();

        self.keyword("group")?;
        let (group, gspan) = self.ctor()?;
        self.resolve(&group, gspan, Kind::Group)?;
        spans.group = gspan;
        self.semi()?;

        self.keyword("dt")?;
        let dt = match self.peek().tok {
            Tok::Number { value, .. } => {
                spans.dt = self.next().span;
                value
            }
            _ => return Err(self.unexpected(&["number"])),
        };
        self.semi()?;

        let mut errors = Vec::new();
        if self.at_keyword("errors") {
            self.next();
            loop {
                let (ctor, span) = self.ctor()?;
                self.resolve(&ctor, span, Kind::Errors)?;
                errors.push(ctor);
                spans.errors.push(span);
                if matches!(self.peek().tok, Tok::Comma) {
                    self.next();
                } else {
                    break;
                }
            }
            self.semi()?;
        }

        let mut windows = Vec::new();
        loop {
            if matches!(self.peek().tok, Tok::Eof) {
                break;
            }
            if !self.at_keyword("window") {
                let expected: &[&str] = if windows.is_empty() && errors.is_empty() {
                    &["'errors'", "'window'", "end of input"]
                } else {
                    &["'window'", "end of input"]
                };
                return Err(self.unexpected(expected));
            }
            let (w, ws) = self.window()?;
            windows.push(w);
            spans.windows.push(ws);
        }
        Ok(Parsed { program: Program { group, dt, errors, windows }, spans })
    }

    fn window(&mut self) -> Result<(WindowDecl, WindowSpans), Diagnostic> {
        let mut ws = WindowSpans { keyword: self.keyword("window")?, ..Default::default() };
        let schemes: Vec<String> = SchemeKw::ALL.iter().map(|k| format!("'{}'", k.keyword())).collect();
        let scheme_refs: Vec<&str> = schemes.iter().map(String::as_str).collect();
        let scheme = match &self.peek().tok {
            Tok::Ident(s) => SchemeKw::from_keyword(s),
            _ => None,
        }
        .ok_or_else(|| self.unexpected(&scheme_refs))?;
        self.next();

        let key = scheme.hamiltonian_key();
        let mut pulse = None;
        let mut hamiltonian = None;
        while !self.at_keyword("cycles") {
            let (name, nspan) = match self.peek().tok.clone() {
                Tok::Ident(s) => (s, self.next().span),
                _ => {
                    let mut allowed = vec![format!("'{key}'"), "'cycles'".to_string()];
                    if scheme.needs_pulse() {
                        allowed.insert(0, "'P'".into());
                    }
                    let refs: Vec<&str> = allowed.iter().map(String::as_str).collect();
                    return Err(self.unexpected(&refs));
                }
            };
            let slot = if name == key {
                &mut hamiltonian
            } else if name == "P" && scheme.needs_pulse() {
                &mut pulse
            } else {
                return Err(Diagnostic::error(
                    nspan,
                    format!("binding '{name}' is not allowed in a {} window", scheme.keyword()),
                ));
            };
            if slot.is_some() {
                return Err(Diagnostic::error(nspan, format!("duplicate binding '{name}'")));
            }
            self.expect(|t| matches!(t, Tok::Eq), &["'='"])?;
            let (ctor, cspan) = self.ctor()?;
            self.resolve(&ctor, cspan, Kind::Operator)?;
            *slot = Some((ctor, cspan));
        }
        let cycles_span = self.keyword("cycles")?;
        let Some((hamiltonian, hspan)) = hamiltonian else {
            return Err(Diagnostic::error(
                cycles_span,
                format!("{} window is missing its '{key}' binding", scheme.keyword()),
            ));
        };
        if scheme.needs_pulse() && pulse.is_none() {
            return Err(Diagnostic::error(cycles_span, "twisted window is missing its 'P' binding"));
        }
        self.expect(|t| matches!(t, Tok::Eq), &["'='"])?;
        let cycles = match self.peek().tok {
            Tok::Number { value, integral: true } if value >= 0.0 && value <= u32::MAX as f64 => {
                ws.cycles = self.next().span;
                value as u64
            }
            _ => return Err(self.unexpected(&["integer"])),
        };
        self.semi()?;
        ws.hamiltonian = hspan;
        ws.pulse = pulse.as_ref().map(|(_, s)| *s);
        Ok((WindowDecl { scheme, pulse: pulse.map(|(c, _)| c), hamiltonian, cycles }, ws))
    }

    fn ctor(&mut self) -> Result<(Ctor, Span), Diagnostic> {
        let (name, span) = self.ident("constructor name")?;
        if !matches!(self.peek().tok, Tok::LParen) {
            return Ok((Ctor::bare(name), span));
        }
        self.next();
        let mut args = Vec::new();
        loop {
            let arg = match self.peek().tok.clone() {
                Tok::Number { value, .. } => Arg::Number(value),
                Tok::Ident(s) => Arg::Ident(s),
                _ => return Err(self.unexpected(&["number", "identifier"])),
            };
            self.next();
            args.push(arg);
            match self.peek().tok {
                Tok::Comma => {
                    self.next();
                }
                Tok::RParen => {
                    self.next();
                    break;
                }
                _ => return Err(self.unexpected(&["','", "')'"])),
            }
        }
        Ok((Ctor::call(name, args), span))
    }

    fn resolve(&self, ctor: &Ctor, span: Span, kind: Kind) -> Result<(), Diagnostic> {
        let (known, label): (Vec<&str>, &str) = match kind {
            Kind::Group => (GROUP_BUILTINS.to_vec(), "group builtin"),
            Kind::Errors => (ERROR_BUILTINS.to_vec(), "error-space builtin"),
            Kind::Operator => {
                let mut v = OPERATOR_BUILTINS.to_vec();
                v.extend(self.names.iter().map(String::as_str));
                (v, "operator")
            }
        };
        if known.contains(&ctor.name.as_str()) {
            Ok(())
        } else {
            Err(Diagnostic::error(span, format!("unknown {label} '{}'; available: {}", ctor.name, known.join(", "))))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drift_program() {
        let p = parse("group collective_pauli(2); dt 0.01; window drift_identity B=pauli(1,x) cycles=100;").unwrap();
        assert_eq!(p.program.group, Ctor::call("collective_pauli", vec![Arg::Number(2.0)]));
        assert_eq!(p.program.dt, 0.01);
        assert_eq!(p.program.windows.len(), 1);
        let w = &p.program.windows[0];
        assert_eq!(w.scheme, SchemeKw::DriftIdentity);
        assert_eq!(w.cycles, 100);
        assert_eq!(w.hamiltonian.to_string(), "pauli(1,x)");
        assert_eq!(p.spans.windows[0].hamiltonian, Span { line: 1, col: 61 });
    }

    #[test]
    fn empty_input_expects_group() {
        let err = parse("").unwrap_err();
        assert_eq!(err.span, Span { line: 1, col: 1 });
        assert!(err.message.contains("expected 'group'"));
        assert_eq!(err.expected, vec!["'group'"]);
    }

    #[test]
    fn twisted_needs_pulse() {
        let err = parse("group spin_echo; dt 1; window twisted A=zero cycles=1;").unwrap_err();
        assert!(err.message.contains("'P'"));
        let ok = parse("group spin_echo; dt 1; window twisted P=rot(1,y,0.3) A=zero cycles=2;").unwrap();
        assert!(ok.program.windows[0].pulse.is_some());
    }

    #[test]
    fn wrong_binding_for_scheme() {
        let err = parse("group spin_echo; dt 1; window slow B=zero cycles=1;").unwrap_err();
        assert!(err.message.contains("not allowed"));
        assert_eq!(err.span, Span { line: 1, col: 36 });
    }

    #[test]
    fn unknown_names_are_resolution_errors() {
        let err = parse("group nonsense(2); dt 1;").unwrap_err();
        assert!(err.message.contains("available: identity, spin_echo"));
        let err = parse("group spin_echo; dt 1; window slow A=my_op cycles=1;").unwrap_err();
        assert!(err.message.contains("unknown operator 'my_op'"));
        assert!(parse_with("group spin_echo; dt 1; window slow A=my_op cycles=1;", &["my_op".into()]).is_ok());
    }

    #[test]
    fn cycles_must_be_integer() {
        let err = parse("group spin_echo; dt 1; window slow A=zero cycles=1.5;").unwrap_err();
        assert_eq!(err.expected, vec!["integer"]);
    }

    #[test]
    fn errors_statement_and_comments() {
        let src = "# echo\ngroup spin_echo;\ndt 2.5e-1; # sub-interval\nerrors dephasing(1), independent(1);\n";
        let p = parse(src).unwrap();
        assert_eq!(p.program.errors.len(), 2);
        assert_eq!(p.spans.errors[1], Span { line: 4, col: 22 });
    }

    #[test]
    fn single_ctor() {
        assert_eq!(parse_ctor("spin_echo").unwrap(), Ctor::bare("spin_echo"));
        assert_eq!(
            parse_ctor("pauli(2, 1, z)").unwrap(),
            Ctor::call("pauli", vec![Arg::Number(2.0), Arg::Number(1.0), Arg::Ident("z".into())])
        );
        assert!(parse_ctor("pauli(1,").is_err());
        assert!(parse_ctor("a b").is_err());
    }
}
