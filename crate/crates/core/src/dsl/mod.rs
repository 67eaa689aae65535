//! Textual definitions of structure kinds as equational signatures.
//!
//! ```text
//! kind Semilattice {
//!   op join/2;
//!   vars x y z;
//!   eq join(x, y) = join(y, x);
//!   eq join(x, x) = x;
//!   eq join(join(x, y), z) = join(x, join(y, z));
//!   kappa 2^n - 1
//! }
//! ```

mod lexer;
mod parser;
mod print;

use std::fmt;

use serde::Serialize;

pub use parser::parse_kind;
pub use print::print_kind;

/// An operation symbol with its arity. Nullary operations are constants.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct OpDecl {
    pub name: String,
    pub arity: usize,
}

/// A term over a kind's signature. Variables and operations are referenced
/// by their index in the owning [`KindSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(usize),
    App(usize, Vec<Term>),
}

impl Term {
    /// Bottom-up evaluation with `apply(op, args)` interpreting operations.
    ///
    /// Returns `None` when a variable is unbound in `env` or `apply` yields
    /// `None` (an undefined table cell during partial evaluation).
    pub fn eval_partial<F>(&self, env: &[usize], apply: &F) -> Option<usize>
    where
        F: Fn(usize, &[usize]) -> Option<usize>,
    {
        match self {
            Term::Var(v) => env.get(*v).copied(),
            Term::App(op, args) => {
                let mut vals = [0usize; 8];
                if args.len() <= vals.len() {
                    for (slot, a) in vals.iter_mut().zip(args) {
                        *slot = a.eval_partial(env, apply)?;
                    }
                    apply(*op, &vals[..args.len()])
                } else {
                    let vals = args
                        .iter()
                        .map(|a| a.eval_partial(env, apply))
                        .collect::<Option<Vec<_>>>()?;
                    apply(*op, &vals)
                }
            }
        }
    }

    /// Largest variable index occurring in the term, plus one.
    pub fn var_bound(&self) -> usize {
        match self {
            Term::Var(v) => v + 1,
            Term::App(_, args) => args.iter().map(Term::var_bound).max().unwrap_or(0),
        }
    }

    pub fn collect_vars(&self, out: &mut Vec<usize>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(*v);
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    /// Variables used by either side, in first-occurrence order.
    pub fn vars(&self) -> Vec<usize> {
        let mut vars = Vec::new();
        self.lhs.collect_vars(&mut vars);
        self.rhs.collect_vars(&mut vars);
        vars
    }
}

/// Closed-form cardinality bound in `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum KappaExpr {
    N,
    Nat(u64),
    Add(Box<KappaExpr>, Box<KappaExpr>),
    /// Truncated subtraction over the naturals.
    Sub(Box<KappaExpr>, Box<KappaExpr>),
    Mul(Box<KappaExpr>, Box<KappaExpr>),
    Pow(Box<KappaExpr>, Box<KappaExpr>),
}

impl KappaExpr {
    /// Value at `n`; `None` on overflow.
    pub fn eval(&self, n: u128) -> Option<u128> {
        Some(match self {
            KappaExpr::N => n,
            KappaExpr::Nat(k) => *k as u128,
            KappaExpr::Add(a, b) => a.eval(n)?.checked_add(b.eval(n)?)?,
            KappaExpr::Sub(a, b) => a.eval(n)?.saturating_sub(b.eval(n)?),
            KappaExpr::Mul(a, b) => a.eval(n)?.checked_mul(b.eval(n)?)?,
            KappaExpr::Pow(a, b) => {
                let e = u32::try_from(b.eval(n)?).ok()?;
                a.eval(n)?.checked_pow(e)?
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum KappaHint {
    Infinite,
    Expr(KappaExpr),
}

/// An equational signature: operation symbols, a shared variable list and
/// unoriented equations between terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KindSpec {
    name: String,
    ops: Vec<OpDecl>,
    vars: Vec<String>,
    equations: Vec<Equation>,
    kappa: Option<KappaHint>,
}

impl KindSpec {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ops(&self) -> &[OpDecl] {
        &self.ops
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn kappa_hint(&self) -> Option<&KappaHint> {
        self.kappa.as_ref()
    }

    pub fn op_index(&self, name: &str) -> Option<usize> {
        self.ops.iter().position(|o| o.name == name)
    }

    pub fn has_constants(&self) -> bool {
        self.ops.iter().any(|o| o.arity == 0)
    }

    /// The same signature and equations under another name.
    pub fn renamed(&self, name: impl Into<String>) -> KindSpec {
        KindSpec {
            name: name.into(),
            ..self.clone()
        }
    }

    /// The same kind with one equation removed.
    pub fn without_equation(&self, index: usize) -> KindSpec {
        let mut k = self.clone();
        k.equations.remove(index);
        k
    }

    /// Renders a term using this kind's symbol names.
    pub fn display_term<'a>(&'a self, term: &'a Term) -> impl fmt::Display + 'a {
        print::TermDisplay { kind: self, term }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagnosticKind {
    Lexical,
    Syntax,
    ArityMismatch,
    UnboundVariable,
    DuplicateOp,
    DuplicateVar,
    UnknownOp,
}

impl fmt::Display for DiagnosticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DiagnosticKind::Lexical => "lexical error",
            DiagnosticKind::Syntax => "syntax error",
            DiagnosticKind::ArityMismatch => "arity mismatch",
            DiagnosticKind::UnboundVariable => "unbound variable",
            DiagnosticKind::DuplicateOp => "duplicate operation",
            DiagnosticKind::DuplicateVar => "duplicate variable",
            DiagnosticKind::UnknownOp => "unknown operation",
        };
        f.write_str(s)
    }
}

/// A positioned parse failure. Lines and columns are 1-based; columns count
/// characters, not bytes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, thiserror::Error)]
#[error("{line}:{col}: {kind}: {message}")]
pub struct Diagnostic {
    pub line: usize,
    pub col: usize,
    pub kind: DiagnosticKind,
    pub message: String,
}
