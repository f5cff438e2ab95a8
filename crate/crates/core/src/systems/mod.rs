//! System registry: which constants and constructors each notation system
//! admits, validity of ψ-terms, attribute maps and bounded enumeration.

mod attributes;
mod enumerate;
mod validity;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::terms::Const;

pub use attributes::{in_psi_class, m2, m_of, m_vec, p0, prec, root_of, s_of, MAttr};
pub use enumerate::{enumerate, enumerate_values, Enumeration};
pub use validity::{validate, validate_node};

/// One of the five notation systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SystemId {
    /// OT(Ω): the Bachmann–Howard system with ψ_Ω only.
    BH,
    /// OT(Π₃): ψ_σ^ν with ordinal superscripts and the constant 𝕂.
    Pi3,
    /// OT(Π_N) for N ≥ 3: vector superscripts of length N−2.
    PiN(u8),
    /// OT(Π¹₁): finite-function superscripts, 𝕊 < 𝕂 and successor regulars.
    Pi11,
    /// OT(𝕀): stable ordinals, daggers and the collapsed tops 𝕀[ρ].
    Stab,
}

impl SystemId {
    /// The big constant Λ that θ̃ is built over.
    pub fn lambda(self) -> Const {
        match self {
            SystemId::Stab => Const::BigI,
            _ => Const::BigK,
        }
    }

    pub fn constants(self) -> &'static [Const] {
        match self {
            SystemId::BH => &[Const::Omega],
            SystemId::Pi3 | SystemId::PiN(_) => &[Const::Omega, Const::BigK],
            SystemId::Pi11 => &[Const::Omega, Const::BigS, Const::BigK],
            SystemId::Stab => &[Const::Omega, Const::BigI],
        }
    }

    /// Position of a constant in the system's order, `None` if the
    /// constant does not belong to the system.
    pub fn const_rank(self, c: Const) -> Option<u8> {
        if !self.constants().contains(&c) {
            return None;
        }
        Some(match c {
            Const::Omega => 1,
            Const::BigS => 2,
            Const::BigK => 3,
            Const::BigI => 4,
        })
    }

    /// Length of the superscript vector for `PiN(n)`.
    pub fn vec_arity(self) -> Option<usize> {
        match self {
            SystemId::PiN(n) => Some(n as usize - 2),
            _ => None,
        }
    }

    pub fn uses_fn_index(self) -> bool {
        matches!(self, SystemId::Pi11 | SystemId::Stab)
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemId::BH => f.write_str("bh"),
            SystemId::Pi3 => f.write_str("pi3"),
            SystemId::PiN(n) => write!(f, "piN:{n}"),
            SystemId::Pi11 => f.write_str("pi11"),
            SystemId::Stab => f.write_str("stab"),
        }
    }
}

impl FromStr for SystemId {
    type Err = String;

    fn from_str(s: &str) -> Result<SystemId, String> {
        match s.to_ascii_lowercase().as_str() {
            "bh" => Ok(SystemId::BH),
            "pi3" => Ok(SystemId::Pi3),
            "pi11" => Ok(SystemId::Pi11),
            "stab" => Ok(SystemId::Stab),
            other => {
                let n = other
                    .strip_prefix("pin:")
                    .ok_or_else(|| format!("unknown system `{s}` (expected bh, pi3, piN:<n>, pi11 or stab)"))?;
                let n: u8 = n.parse().map_err(|_| format!("bad arity in `{s}`"))?;
                if !(3..=64).contains(&n) {
                    return Err(format!("piN arity must lie in 3..=64, got {n}"));
                }
                Ok(SystemId::PiN(n))
            }
        }
    }
}

/// Limits for enumeration and search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Maximal constructor count of an enumerated term.
    pub maxlen: u64,
    /// Maximal number of candidate terms an enumeration may examine.
    pub max_items: usize,
    /// Step limit for descent chains.
    pub fuel: u64,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget { maxlen: 5, max_items: 2_000_000, fuel: 1_000_000 }
    }
}

impl Budget {
    pub fn with_maxlen(maxlen: u64) -> Budget {
        Budget { maxlen, ..Budget::default() }
    }

    /// Parses `maxlen=5,fuel=1000,items=10000` (any subset, any order).
    pub fn parse_overrides(mut self, spec: &str) -> Result<Budget, Error> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, val) = item
                .split_once('=')
                .ok_or_else(|| Error::BudgetExceeded(format!("malformed budget entry `{item}`")))?;
            let bad = || Error::BudgetExceeded(format!("malformed budget value `{item}`"));
            match key.trim() {
                "maxlen" => self.maxlen = val.trim().parse().map_err(|_| bad())?,
                "fuel" => self.fuel = val.trim().parse().map_err(|_| bad())?,
                "items" | "max_items" => self.max_items = val.trim().parse().map_err(|_| bad())?,
                _ => return Err(Error::BudgetExceeded(format!("unknown budget key `{key}`"))),
            }
        }
        Ok(self)
    }
}

/// Outcome of [`validate`]: every violated rule with the path of the
/// offending subterm.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub ok: bool,
    pub reasons: Vec<(String, String)>,
}

impl Verdict {
    pub fn valid() -> Verdict {
        Verdict { ok: true, reasons: Vec::new() }
    }

    pub fn from_reasons(reasons: Vec<(String, String)>) -> Verdict {
        Verdict { ok: reasons.is_empty(), reasons }
    }

    pub fn has_rule(&self, rule: &str) -> bool {
        self.reasons.iter().any(|(r, _)| r == rule)
    }
}
