use std::fmt;

use serde::{Serialize, Serializer};

use crate::dsl::{KappaHint, KindSpec};
use crate::error::{Error, Result};

/// A finite cardinal or the symbolic infinite one. Every natural is below
/// `Infinite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cardinal {
    Finite(usize),
    Infinite,
}

impl Cardinal {
    pub fn finite(self) -> Option<usize> {
        match self {
            Cardinal::Finite(n) => Some(n),
            Cardinal::Infinite => None,
        }
    }
}

impl fmt::Display for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinal::Finite(n) => write!(f, "{n}"),
            Cardinal::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for Cardinal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Cardinal::Finite(n) => s.serialize_u64(*n as u64),
            Cardinal::Infinite => s.serialize_str("infinite"),
        }
    }
}

/// Evaluates the kind's closure bound at `n`. Overflow is reported as
/// `Infinite`, which keeps the bound monotone.
pub fn kappa(kind: &KindSpec, n: Cardinal) -> Result<Cardinal> {
    let hint = kind
        .kappa_hint()
        .ok_or_else(|| Error::KappaUnavailable(kind.name().to_string()))?;
    Ok(match (hint, n) {
        (KappaHint::Infinite, _) | (_, Cardinal::Infinite) => Cardinal::Infinite,
        (KappaHint::Expr(e), Cardinal::Finite(n)) => match e.eval(n as u128) {
            Some(v) if v <= usize::MAX as u128 => Cardinal::Finite(v as usize),
            _ => Cardinal::Infinite,
        },
    })
}
