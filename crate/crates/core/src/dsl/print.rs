use std::fmt::{self, Write};

use super::{KappaExpr, KappaHint, KindSpec, Term};

/// Canonical text for a kind. `parse_kind(&print_kind(k)) == Ok(k)`.
pub fn print_kind(spec: &KindSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "kind {} {{", spec.name);
    for op in &spec.ops {
        let _ = writeln!(out, "  op {}/{};", op.name, op.arity);
    }
    out.push_str("  vars");
    for v in &spec.vars {
        out.push(' ');
        out.push_str(v);
    }
    out.push_str(";\n");
    for eq in &spec.equations {
        let _ = writeln!(
            out,
            "  eq {} = {};",
            spec.display_term(&eq.lhs),
            spec.display_term(&eq.rhs)
        );
    }
    match &spec.kappa {
        Some(KappaHint::Infinite) => out.push_str("  kappa infinite\n"),
        Some(KappaHint::Expr(e)) => {
            let _ = writeln!(out, "  kappa {}", ExprDisplay(e, 0));
        }
        None => {}
    }
    out.push_str("}\n");
    out
}

pub(super) struct TermDisplay<'a> {
    pub kind: &'a KindSpec,
    pub term: &'a Term,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.term {
            Term::Var(v) => match self.kind.vars.get(*v) {
                Some(name) => f.write_str(name),
                None => write!(f, "x{v}"),
            },
            Term::App(op, args) => {
                f.write_str(&self.kind.ops[*op].name)?;
                if args.is_empty() {
                    return Ok(());
                }
                f.write_str("(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    TermDisplay {
                        kind: self.kind,
                        term: a,
                    }
                    .fmt(f)?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Prints with the minimal parentheses for context precedence `ctx`
/// (0 = sum, 1 = product, 2 = power base).
struct ExprDisplay<'a>(&'a KappaExpr, u8);

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = match self.0 {
            KappaExpr::Add(..) | KappaExpr::Sub(..) => 0,
            KappaExpr::Mul(..) => 1,
            KappaExpr::Pow(..) => 2,
            KappaExpr::N | KappaExpr::Nat(_) => 3,
        };
        let paren = prec < self.1;
        if paren {
            f.write_str("(")?;
        }
        match self.0 {
            KappaExpr::N => f.write_str("n")?,
            KappaExpr::Nat(k) => write!(f, "{k}")?,
            KappaExpr::Add(a, b) => write!(f, "{} + {}", ExprDisplay(a, 0), ExprDisplay(b, 1))?,
            KappaExpr::Sub(a, b) => write!(f, "{} - {}", ExprDisplay(a, 0), ExprDisplay(b, 1))?,
            KappaExpr::Mul(a, b) => write!(f, "{}*{}", ExprDisplay(a, 1), ExprDisplay(b, 2))?,
            KappaExpr::Pow(a, b) => write!(f, "{}^{}", ExprDisplay(a, 3), ExprDisplay(b, 2))?,
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_kind;
    use super::*;

    #[test]
    fn infinite_hint_printed() {
        let k = parse_kind("kind G { op e/0; vars; kappa infinite }").unwrap();
        assert!(print_kind(&k).contains("kappa infinite"));
    }

    #[test]
    fn no_equations_prints_empty_block() {
        let k = parse_kind("kind P { op base/0; vars; kappa n+1 }").unwrap();
        let text = print_kind(&k);
        assert!(!text.contains("eq "));
        assert_eq!(parse_kind(&text).unwrap(), k);
    }

    #[test]
    fn expression_parentheses_round_trip() {
        for src in [
            "n - (n - 1)",
            "(2^n)^2",
            "2^n^2",
            "(n + 1)*(n + 2)",
            "n*n - 1 + 3",
            "2*n",
        ] {
            let k = parse_kind(&format!("kind K {{ vars; kappa {src} }}")).unwrap();
            let printed = print_kind(&k);
            assert_eq!(parse_kind(&printed).unwrap(), k, "{src} -> {printed}");
        }
    }
}
