use super::lexer::{tokenize, Tok, Token};
use super::{Diagnostic, DiagnosticKind, Equation, KappaExpr, KappaHint, KindSpec, OpDecl, Term};

/// Parses and validates one `kind` definition.
pub fn parse_kind(source: &str) -> Result<KindSpec, Diagnostic> {
    let tokens = tokenize(source)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        ops: Vec::new(),
        vars: Vec::new(),
    };
    let kind = p.kind()?;
    p.expect_eof()?;
    Ok(kind)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    ops: Vec<OpDecl>,
    vars: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn err(&self, at: &Token, kind: DiagnosticKind, message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            line: at.line,
            col: at.col,
            kind,
            message: message.into(),
        }
    }

    fn describe(tok: &Tok) -> String {
        match tok {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Nat(n) => format!("`{n}`"),
            Tok::Punct(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }

    fn expect_punct(&mut self, c: char) -> Result<Token, Diagnostic> {
        let t = self.peek().clone();
        if t.tok == Tok::Punct(c) {
            Ok(self.bump())
        } else {
            Err(self.err(
                &t,
                DiagnosticKind::Syntax,
                format!("expected `{c}`, found {}", Self::describe(&t.tok)),
            ))
        }
    }

    fn eat_punct(&mut self, c: char) -> bool {
        if self.peek().tok == Tok::Punct(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<Token, Diagnostic> {
        if self.is_keyword(kw) {
            Ok(self.bump())
        } else {
            let t = self.peek().clone();
            Err(self.err(
                &t,
                DiagnosticKind::Syntax,
                format!("expected `{kw}`, found {}", Self::describe(&t.tok)),
            ))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Token), Diagnostic> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Ident(s) => {
                let s = s.clone();
                self.bump();
                Ok((s, t))
            }
            other => Err(self.err(
                &t,
                DiagnosticKind::Syntax,
                format!("expected {what}, found {}", Self::describe(other)),
            )),
        }
    }

    fn expect_eof(&mut self) -> Result<(), Diagnostic> {
        let t = self.peek().clone();
        if t.tok == Tok::Eof {
            Ok(())
        } else {
            Err(self.err(
                &t,
                DiagnosticKind::Syntax,
                format!("unexpected {} after kind definition", Self::describe(&t.tok)),
            ))
        }
    }

    fn kind(&mut self) -> Result<KindSpec, Diagnostic> {
        self.expect_keyword("kind")?;
        let (name, _) = self.ident("kind name")?;
        self.expect_punct('{')?;

        while self.is_keyword("op") {
            self.bump();
            let (op, at) = self.ident("operation name")?;
            if self.ops.iter().any(|o| o.name == op) {
                return Err(self.err(
                    &at,
                    DiagnosticKind::DuplicateOp,
                    format!("operation `{op}` declared twice"),
                ));
            }
            self.expect_punct('/')?;
            let t = self.bump();
            let Tok::Nat(arity) = t.tok else {
                return Err(self.err(
                    &t,
                    DiagnosticKind::Syntax,
                    format!("expected arity, found {}", Self::describe(&t.tok)),
                ));
            };
            if arity > 8 {
                return Err(self.err(&t, DiagnosticKind::Syntax, "arity above 8 is not supported"));
            }
            self.expect_punct(';')?;
            self.ops.push(OpDecl {
                name: op,
                arity: arity as usize,
            });
        }

        self.expect_keyword("vars")?;
        while let Tok::Ident(v) = &self.peek().tok {
            let v = v.clone();
            let at = self.bump();
            if self.vars.contains(&v) {
                return Err(self.err(
                    &at,
                    DiagnosticKind::DuplicateVar,
                    format!("variable `{v}` declared twice"),
                ));
            }
            if self.ops.iter().any(|o| o.name == v) {
                return Err(self.err(
                    &at,
                    DiagnosticKind::DuplicateVar,
                    format!("variable `{v}` shadows an operation"),
                ));
            }
            self.vars.push(v);
        }
        self.expect_punct(';')?;

        let mut equations = Vec::new();
        while self.is_keyword("eq") {
            self.bump();
            let lhs = self.term()?;
            self.expect_punct('=')?;
            let rhs = self.term()?;
            self.expect_punct(';')?;
            equations.push(Equation { lhs, rhs });
        }

        let mut kappa = None;
        if self.is_keyword("kappa") {
            self.bump();
            if self.is_keyword("infinite") {
                self.bump();
                kappa = Some(KappaHint::Infinite);
            } else {
                kappa = Some(KappaHint::Expr(self.expr()?));
            }
            self.eat_punct(';');
        }

        let t = self.peek().clone();
        if t.tok != Tok::Punct('}') {
            let msg = match &t.tok {
                Tok::Ident(s) if s == "op" || s == "vars" => format!("`{s}` declaration out of order"),
                other => format!("expected `eq`, `kappa` or `}}`, found {}", Self::describe(other)),
            };
            return Err(self.err(&t, DiagnosticKind::Syntax, msg));
        }
        self.bump();

        Ok(KindSpec {
            name,
            ops: std::mem::take(&mut self.ops),
            vars: std::mem::take(&mut self.vars),
            equations,
            kappa,
        })
    }

    fn term(&mut self) -> Result<Term, Diagnostic> {
        let (name, at) = self.ident("term")?;
        if self.peek().tok == Tok::Punct('(') {
            let Some(op) = self.ops.iter().position(|o| o.name == name) else {
                return Err(self.err(
                    &at,
                    DiagnosticKind::UnknownOp,
                    format!("`{name}` is not a declared operation"),
                ));
            };
            self.bump();
            let mut args = Vec::new();
            if !self.eat_punct(')') {
                loop {
                    args.push(self.term()?);
                    if self.eat_punct(')') {
                        break;
                    }
                    self.expect_punct(',')?;
                }
            }
            let arity = self.ops[op].arity;
            if args.len() != arity {
                return Err(self.err(
                    &at,
                    DiagnosticKind::ArityMismatch,
                    format!("`{name}` takes {arity} argument(s) but is applied to {}", args.len()),
                ));
            }
            return Ok(Term::App(op, args));
        }
        if let Some(v) = self.vars.iter().position(|v| *v == name) {
            return Ok(Term::Var(v));
        }
        if let Some(op) = self.ops.iter().position(|o| o.name == name) {
            let arity = self.ops[op].arity;
            if arity != 0 {
                return Err(self.err(
                    &at,
                    DiagnosticKind::ArityMismatch,
                    format!("`{name}` takes {arity} argument(s) but is used as a constant"),
                ));
            }
            return Ok(Term::App(op, Vec::new()));
        }
        Err(self.err(
            &at,
            DiagnosticKind::UnboundVariable,
            format!("`{name}` is not in the `vars` list"),
        ))
    }

    // expr := sum; sum := prod (('+'|'-') prod)*; prod := pow ('*' pow)*;
    // pow := atom ('^' pow)?; atom := NAT | 'n' | '(' expr ')'
    fn expr(&mut self) -> Result<KappaExpr, Diagnostic> {
        let mut lhs = self.prod()?;
        loop {
            if self.eat_punct('+') {
                lhs = KappaExpr::Add(Box::new(lhs), Box::new(self.prod()?));
            } else if self.eat_punct('-') {
                lhs = KappaExpr::Sub(Box::new(lhs), Box::new(self.prod()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn prod(&mut self) -> Result<KappaExpr, Diagnostic> {
        let mut lhs = self.pow()?;
        while self.eat_punct('*') {
            lhs = KappaExpr::Mul(Box::new(lhs), Box::new(self.pow()?));
        }
        Ok(lhs)
    }

    fn pow(&mut self) -> Result<KappaExpr, Diagnostic> {
        let base = self.atom()?;
        if self.eat_punct('^') {
            Ok(KappaExpr::Pow(Box::new(base), Box::new(self.pow()?)))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<KappaExpr, Diagnostic> {
        let t = self.bump();
        match &t.tok {
            Tok::Nat(k) => Ok(KappaExpr::Nat(*k)),
            Tok::Ident(s) if s == "n" => Ok(KappaExpr::N),
            Tok::Punct('(') => {
                let e = self.expr()?;
                self.expect_punct(')')?;
                Ok(e)
            }
            other => Err(self.err(
                &t,
                DiagnosticKind::Syntax,
                format!("expected a kappa expression in `n`, found {}", Self::describe(other)),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn semilattice_source() {
        let k = parse_kind(
            "kind Semilattice { op join/2; vars x y z; eq join(x,y)=join(y,x); eq join(x,x)=x; \
             eq join(join(x,y),z)=join(x,join(y,z)); kappa 2^n-1 }",
        )
        .unwrap();
        assert_eq!(k.name(), "Semilattice");
        assert_eq!(k.ops().len(), 1);
        assert_eq!(k.equations().len(), 3);
        assert!(matches!(k.kappa_hint(), Some(KappaHint::Expr(_))));
    }

    #[test]
    fn pointed_source() {
        let k = parse_kind("kind Pointed { op base/0; vars; kappa n+1 }").unwrap();
        assert_eq!(
            k.ops(),
            &[OpDecl {
                name: "base".into(),
                arity: 0
            }]
        );
        assert!(k.equations().is_empty());
    }

    #[test]
    fn arity_mismatch_is_positioned() {
        let err = parse_kind("kind Bad { op f/2; vars x; eq f(x)=x }").unwrap_err();
        assert_eq!(err.kind, DiagnosticKind::ArityMismatch);
        assert_eq!((err.line, err.col), (1, 31));
    }

    #[test]
    fn nullary_ops_with_or_without_parens() {
        let a = parse_kind("kind P { op e/0; op m/2; vars x; eq m(x, e) = x; }").unwrap();
        let b = parse_kind("kind P { op e/0; op m/2; vars x; eq m(x, e()) = x; }").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn error_kinds() {
        let cases = [
            ("kind K { op f/1; op f/2; vars; }", DiagnosticKind::DuplicateOp),
            (
                "kind K { op f/1; vars x; eq f(y) = x; }",
                DiagnosticKind::UnboundVariable,
            ),
            ("kind K { op f/1; vars x; eq g(x) = x; }", DiagnosticKind::UnknownOp),
            ("kind K { op f/1; vars x x; }", DiagnosticKind::DuplicateVar),
            ("kind K { vars; kappa m }", DiagnosticKind::Syntax),
            ("kind K { op f/1; vars x; eq f(x) = x }", DiagnosticKind::Syntax),
            ("kind K { op f/1; vars x; } trailing", DiagnosticKind::Syntax),
            ("kind K { vars; op f/1; }", DiagnosticKind::Syntax),
        ];
        for (src, kind) in cases {
            let err = parse_kind(src).unwrap_err();
            assert_eq!(err.kind, kind, "{src}: {err}");
            assert_eq!(err.line, 1);
            assert!(err.col <= src.chars().count() + 1);
        }
    }
}
