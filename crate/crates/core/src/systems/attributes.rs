//! Attributes of ψ-terms: the superscript `m`, its largest key `s`, the
//! Mahlo degree `m₂` of OT(Π₃), the threshold `p₀` and the collapse
//! ancestry `≺`.

use std::fmt;

use crate::collapse::uncollapse_atom;
use crate::error::{Error, Result};
use crate::order::{address, compare};
use crate::systems::SystemId;
use crate::terms::{Const, Node, OrdTerm, PsiIndex};

/// Value of a degree attribute: an ordinal term, or the reserved top
/// `ε_{𝕂+1}` which lies above every term and never occurs in notations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MAttr {
    Ord(OrdTerm),
    Top,
}

impl MAttr {
    /// `x < self`.
    pub fn above(&self, x: &OrdTerm, sys: SystemId) -> Result<bool> {
        match self {
            MAttr::Top => Ok(true),
            MAttr::Ord(m) => Ok(compare(sys, x, m)? == std::cmp::Ordering::Less),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, MAttr::Ord(t) if t.is_zero())
    }
}

impl fmt::Display for MAttr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MAttr::Ord(t) => write!(f, "{t}"),
            MAttr::Top => f.write_str("eps(K+1)"),
        }
    }
}

fn no_attr(attr: &'static str, t: &OrdTerm) -> Error {
    Error::NoAttribute { attr, term: t.to_string() }
}

/// The superscript of a ψ-term.
pub fn m_of(t: &OrdTerm) -> Result<PsiIndex> {
    match t.node() {
        Node::Psi(_, idx, _) => Ok(idx.clone()),
        _ => Err(no_attr("m", t)),
    }
}

/// `m₂`: `m₂(Ω) = 1`, `m₂(𝕂) = ε_{𝕂+1}`, `m₂(ψ_σ^ν(a)) = ν`.
pub fn m2(t: &OrdTerm, _sys: SystemId) -> Result<MAttr> {
    match t.node() {
        Node::Const(Const::Omega) => Ok(MAttr::Ord(OrdTerm::one())),
        Node::Const(Const::BigK) => Ok(MAttr::Top),
        Node::Psi(_, PsiIndex::None, _) => Ok(MAttr::Ord(OrdTerm::zero())),
        Node::Psi(_, PsiIndex::Ord(nu), _) => Ok(MAttr::Ord(nu.clone())),
        _ => Err(no_attr("m2", t)),
    }
}

/// The degree vector `(m₂, …, m_{N−1})` of OT(Π_N): `Ω ↦ (1, 0, …)`,
/// `𝕂 ↦ (0, …, 0, ε_{𝕂+1})`, a ψ-term to its superscript.
pub fn m_vec(t: &OrdTerm, sys: SystemId) -> Result<Vec<MAttr>> {
    let n = sys.vec_arity().ok_or_else(|| no_attr("m", t))?;
    let zero = MAttr::Ord(OrdTerm::zero());
    match t.node() {
        Node::Const(Const::Omega) => {
            let mut v = vec![zero; n];
            v[0] = MAttr::Ord(OrdTerm::one());
            Ok(v)
        }
        Node::Const(Const::BigK) => {
            let mut v = vec![zero; n];
            v[n - 1] = MAttr::Top;
            Ok(v)
        }
        Node::Psi(_, PsiIndex::None, _) => Ok(vec![zero; n]),
        Node::Psi(_, PsiIndex::Vec(v), _) if v.len() == n => Ok(v.iter().cloned().map(MAttr::Ord).collect()),
        _ => Err(no_attr("m", t)),
    }
}

/// `s(ψ_σ^f(a)) = max(supp(f))`, and 0 for an empty superscript.
pub fn s_of(t: &OrdTerm) -> Result<OrdTerm> {
    match t.node() {
        Node::Psi(_, PsiIndex::Fn(f), _) => Ok(f.max_key().cloned().unwrap_or_else(OrdTerm::zero)),
        Node::Psi(_, PsiIndex::None, _) => Ok(OrdTerm::zero()),
        _ => Err(no_attr("s", t)),
    }
}

/// End of the subscript chain: `σ` for `ψ_σ(…)` with σ not itself a
/// ψ-term, recursively.  Non-ψ terms are their own root.
pub fn root_of(t: &OrdTerm) -> OrdTerm {
    let mut cur = t.clone();
    loop {
        let next = match cur.node() {
            Node::Psi(s, ..) => s.clone(),
            _ => return cur,
        };
        if !next.is_psi() {
            return next;
        }
        cur = next;
    }
}

/// Whether `root_of` reaches a stable top: `𝕊` in OT(Π¹₁), some `α†` in
/// OT(𝕀).
fn rooted_at_stable(t: &OrdTerm, sys: SystemId) -> bool {
    if !t.is_psi() {
        return false;
    }
    let r = root_of(t);
    match sys {
        SystemId::Pi11 => r.is_const(Const::BigS),
        SystemId::Stab => matches!(r.node(), Node::Dagger(_)),
        _ => false,
    }
}

/// The threshold `p₀`.  Walking the subscript chain up to the ψ-term
/// whose subscript is the stable top gives that term's argument; terms
/// living in a collapsed zone of OT(𝕀) take `p₀` of their preimage;
/// other ψ-terms get 0.
pub fn p0(t: &OrdTerm, sys: SystemId) -> Result<OrdTerm> {
    if !t.is_psi() {
        return Err(no_attr("p0", t));
    }
    if sys == SystemId::Stab {
        if let Some(r) = address(sys, t).last() {
            let pre = uncollapse_atom(t, r, sys)?;
            return p0(&pre, sys);
        }
    }
    if !rooted_at_stable(t, sys) {
        return Ok(OrdTerm::zero());
    }
    let mut cur = t.clone();
    loop {
        let (s, a) = match cur.node() {
            Node::Psi(s, _, a) => (s.clone(), a.clone()),
            _ => unreachable!(),
        };
        if !s.is_psi() {
            return Ok(a);
        }
        cur = s;
    }
}

/// `r ≺ s`: s occurs in the subscript chain of r.
pub fn prec(r: &OrdTerm, s: &OrdTerm, _sys: SystemId) -> bool {
    let mut cur = r.clone();
    loop {
        let next = match cur.node() {
            Node::Psi(sub, ..) => sub.clone(),
            _ => return false,
        };
        if &next == s {
            return true;
        }
        cur = next;
    }
}

/// `ρ ∈ Ψ`: a ψ-term whose subscript chain ends at the stable top.
pub fn in_psi_class(t: &OrdTerm, sys: SystemId) -> bool {
    rooted_at_stable(t, sys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::parse;

    #[test]
    fn attributes_of_psi_terms() {
        let sys = SystemId::Pi11;
        let t = parse("psi(S, {1: K}; Om)", sys).unwrap();
        assert!(matches!(m_of(&t).unwrap(), PsiIndex::Fn(_)));
        assert_eq!(s_of(&t).unwrap(), OrdTerm::one());
        assert_eq!(p0(&t, sys).unwrap(), OrdTerm::konst(Const::Omega));
        let u = OrdTerm::psi(t.clone(), PsiIndex::None, OrdTerm::zero());
        assert_eq!(p0(&u, sys).unwrap(), OrdTerm::konst(Const::Omega));
        assert!(prec(&u, &t, sys));
        assert!(prec(&u, &OrdTerm::konst(Const::BigS), sys));
        assert!(!prec(&OrdTerm::konst(Const::Omega), &OrdTerm::konst(Const::BigK), sys));
        assert!(matches!(p0(&OrdTerm::konst(Const::BigS), sys), Err(Error::NoAttribute { .. })));
    }

    #[test]
    fn two_point_superscript_has_largest_key() {
        let sys = SystemId::Pi11;
        let t = parse("psi(S, {1: K, Om: 1}; 0)", sys).unwrap();
        assert_eq!(s_of(&t).unwrap(), OrdTerm::konst(Const::Omega));
    }

    #[test]
    fn degrees_of_constants() {
        let sys = SystemId::Pi3;
        assert_eq!(m2(&OrdTerm::konst(Const::Omega), sys).unwrap(), MAttr::Ord(OrdTerm::one()));
        assert_eq!(m2(&OrdTerm::konst(Const::BigK), sys).unwrap(), MAttr::Top);
        let v = m_vec(&OrdTerm::konst(Const::BigK), SystemId::PiN(4)).unwrap();
        assert_eq!(v, vec![MAttr::Ord(OrdTerm::zero()), MAttr::Top]);
    }
}
