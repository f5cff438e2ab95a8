//! Mostowski collapsing `α ↦ α[ρ/𝕊]` and its inverse.
//!
//! The map is the identity below the stable top 𝕊 that ρ descends from,
//! sends 𝕊 to ρ and the top of 𝕊's zone (𝕂 in OT(Π¹₁), 𝕀 or the
//! enclosing `𝕀[·]` in OT(𝕀)) to `ρ⁺` resp. `𝕀[ρ]`, and is otherwise
//! computed constructor by constructor.  Inside the values of finite
//! functions the constant Λ is part of the θ̃-notation, not an ordinal of
//! the zone, so it is left alone.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::finite_fn::FiniteFn;
use crate::hull::in_hull;
use crate::order::{address, compare};
use crate::systems::{in_psi_class, p0, root_of, SystemId};
use crate::terms::{Const, Mult, Node, OrdTerm, PsiIndex};

/// 𝕊 and the zone top for collapsing at ρ.
fn frame(rho: &OrdTerm, sys: SystemId) -> Result<(OrdTerm, OrdTerm)> {
    if !in_psi_class(rho, sys) {
        return Err(Error::BadRho(format!("{rho} does not descend from a stable top in {sys}")));
    }
    let s = root_of(rho);
    let top = match sys {
        SystemId::Pi11 => OrdTerm::konst(Const::BigK),
        _ => match address(sys, &s).last() {
            Some(r) => OrdTerm::from_node(Node::IOf(r.clone())),
            None => OrdTerm::konst(Const::BigI),
        },
    };
    Ok((s, top))
}

fn image_of_top(rho: &OrdTerm, sys: SystemId) -> OrdTerm {
    match sys {
        SystemId::Pi11 => OrdTerm::from_node(Node::NextReg(rho.clone())),
        _ => OrdTerm::from_node(Node::IOf(rho.clone())),
    }
}

/// `t ∈ M_ρ = H_{p₀(ρ)}(ρ)`.
pub fn in_domain(t: &OrdTerm, rho: &OrdTerm, sys: SystemId) -> Result<bool> {
    frame(rho, sys)?;
    let b = p0(rho, sys)?;
    in_hull(t, &b, rho, sys)
}

/// `t[ρ/𝕊]`; `OutOfDomain` unless `t ∈ M_ρ`.
pub fn collapse(t: &OrdTerm, rho: &OrdTerm, sys: SystemId) -> Result<OrdTerm> {
    if !in_domain(t, rho, sys)? {
        return Err(Error::OutOfDomain(format!("{t} is not in the domain of the collapse at {rho}")));
    }
    let (s, top) = frame(rho, sys)?;
    let cx = Collapse { rho, s: &s, top: &top, sys };
    cx.term(t)
}

struct Collapse<'a> {
    rho: &'a OrdTerm,
    s: &'a OrdTerm,
    top: &'a OrdTerm,
    sys: SystemId,
}

impl Collapse<'_> {
    fn term(&self, t: &OrdTerm) -> Result<OrdTerm> {
        stacker::maybe_grow(64 * 1024, 2 * 1024 * 1024, || {
            if t == self.s {
                return Ok(self.rho.clone());
            }
            if t == self.top {
                return Ok(image_of_top(self.rho, self.sys));
            }
            if compare(self.sys, t, self.s)? == Ordering::Less {
                return Ok(t.clone());
            }
            self.structural(t, false)
        })
    }

    /// Finite-function values: Λ stays, everything else collapses.
    fn value(&self, v: &OrdTerm) -> Result<OrdTerm> {
        match v.node() {
            Node::Const(c) if *c == self.sys.lambda() => Ok(v.clone()),
            Node::Zero => Ok(v.clone()),
            Node::Sum(_) | Node::ThetaTilde(..) => self.structural(v, true),
            _ => self.term(v),
        }
    }

    fn structural(&self, t: &OrdTerm, in_value: bool) -> Result<OrdTerm> {
        let f = |x: &OrdTerm| if in_value { self.value(x) } else { self.term(x) };
        let node = match t.node() {
            Node::Zero | Node::Const(_) => return Ok(t.clone()),
            Node::Sum(parts) => Node::Sum(
                parts
                    .iter()
                    .map(|(p, m)| {
                        let m = match m {
                            Mult::Ord(c) => Mult::Ord(self.value(c)?),
                            n => n.clone(),
                        };
                        Ok((f(p)?, m))
                    })
                    .collect::<Result<_>>()?,
            ),
            Node::Veblen(b, x) => Node::Veblen(f(b)?, f(x)?),
            Node::ThetaTilde(b, x) => Node::ThetaTilde(self.value(b)?, self.value(x)?),
            Node::Psi(s, idx, a) => Node::Psi(self.term(s)?, self.index(idx)?, self.term(a)?),
            Node::NextReg(b) => Node::NextReg(self.term(b)?),
            Node::Dagger(b) => Node::Dagger(self.term(b)?),
            Node::IOf(b) => Node::IOf(self.term(b)?),
        };
        Ok(OrdTerm::from_node(node))
    }

    fn index(&self, idx: &PsiIndex) -> Result<PsiIndex> {
        Ok(match idx {
            PsiIndex::None => PsiIndex::None,
            PsiIndex::Ord(v) => PsiIndex::Ord(self.term(v)?),
            PsiIndex::Vec(v) => PsiIndex::Vec(v.iter().map(|x| self.term(x)).collect::<Result<_>>()?),
            PsiIndex::Fn(f) => {
                let entries = f
                    .entries()
                    .iter()
                    .map(|(k, v)| Ok((self.term(k)?, self.value(v)?)))
                    .collect::<Result<Vec<_>>>()?;
                PsiIndex::Fn(FiniteFn::raw(entries, f.lambda()))
            }
        })
    }
}

/// Inverse of [`collapse`] on its image; `NotInImage` otherwise.
pub fn uncollapse(t: &OrdTerm, rho: &OrdTerm, sys: SystemId) -> Result<OrdTerm> {
    let (s, top) = frame(rho, sys)?;
    let ux = Uncollapse { rho, s: &s, top: &top, sys, strict: true };
    ux.term(t)
}

/// Preimage of an atom of ρ's zone, without the image check.  Used by
/// the comparison to order two atoms of the same zone.
pub(crate) fn uncollapse_atom(t: &OrdTerm, rho: &OrdTerm, sys: SystemId) -> Result<OrdTerm> {
    let (s, top) = frame(rho, sys)?;
    let ux = Uncollapse { rho, s: &s, top: &top, sys, strict: false };
    ux.term(t)
}

struct Uncollapse<'a> {
    rho: &'a OrdTerm,
    s: &'a OrdTerm,
    top: &'a OrdTerm,
    sys: SystemId,
    strict: bool,
}

impl Uncollapse<'_> {
    fn not_in_image(&self, t: &OrdTerm) -> Error {
        Error::NotInImage(format!("{t} is not the collapse at {} of any term", self.rho))
    }

    fn term(&self, t: &OrdTerm) -> Result<OrdTerm> {
        stacker::maybe_grow(64 * 1024, 2 * 1024 * 1024, || {
            if t == self.rho {
                return Ok(self.s.clone());
            }
            if *t == image_of_top(self.rho, self.sys) {
                return Ok(self.top.clone());
            }
            match t.node() {
                Node::Zero => Ok(t.clone()),
                Node::Sum(_) | Node::Veblen(..) | Node::ThetaTilde(..) => self.structural(t, false),
                _ => {
                    if address(self.sys, t).contains(self.rho) {
                        return self.structural(t, false);
                    }
                    if self.strict && compare(self.sys, t, self.rho)? != Ordering::Less {
                        return Err(self.not_in_image(t));
                    }
                    Ok(t.clone())
                }
            }
        })
    }

    fn value(&self, v: &OrdTerm) -> Result<OrdTerm> {
        match v.node() {
            Node::Const(c) if *c == self.sys.lambda() => Ok(v.clone()),
            Node::Zero => Ok(v.clone()),
            Node::Sum(_) | Node::ThetaTilde(..) => self.structural(v, true),
            _ => self.term(v),
        }
    }

    fn structural(&self, t: &OrdTerm, in_value: bool) -> Result<OrdTerm> {
        let f = |x: &OrdTerm| if in_value { self.value(x) } else { self.term(x) };
        let node = match t.node() {
            Node::Zero | Node::Const(_) => return Ok(t.clone()),
            Node::Sum(parts) => Node::Sum(
                parts
                    .iter()
                    .map(|(p, m)| {
                        let m = match m {
                            Mult::Ord(c) => Mult::Ord(self.value(c)?),
                            n => n.clone(),
                        };
                        Ok((f(p)?, m))
                    })
                    .collect::<Result<_>>()?,
            ),
            Node::Veblen(b, x) => Node::Veblen(f(b)?, f(x)?),
            Node::ThetaTilde(b, x) => Node::ThetaTilde(self.value(b)?, self.value(x)?),
            Node::Psi(s, idx, a) => Node::Psi(self.term(s)?, self.index(idx)?, self.term(a)?),
            Node::NextReg(b) => Node::NextReg(self.term(b)?),
            Node::Dagger(b) => Node::Dagger(self.term(b)?),
            Node::IOf(b) => Node::IOf(self.term(b)?),
        };
        Ok(OrdTerm::from_node(node))
    }

    fn index(&self, idx: &PsiIndex) -> Result<PsiIndex> {
        Ok(match idx {
            PsiIndex::None => PsiIndex::None,
            PsiIndex::Ord(v) => PsiIndex::Ord(self.term(v)?),
            PsiIndex::Vec(v) => PsiIndex::Vec(v.iter().map(|x| self.term(x)).collect::<Result<_>>()?),
            PsiIndex::Fn(f) => {
                let entries = f
                    .entries()
                    .iter()
                    .map(|(k, v)| Ok((self.term(k)?, self.value(v)?)))
                    .collect::<Result<Vec<_>>>()?;
                PsiIndex::Fn(FiniteFn::raw(entries, f.lambda()))
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::parse;

    fn t(sys: SystemId, s: &str) -> OrdTerm {
        parse(s, sys).unwrap()
    }

    #[test]
    fn pi11_clauses() {
        let sys = SystemId::Pi11;
        let rho = t(sys, "psi(S, {0: 1}; K)");
        assert_eq!(collapse(&t(sys, "S"), &rho, sys).unwrap(), rho);
        assert_eq!(collapse(&t(sys, "K"), &rho, sys).unwrap(), t(sys, &format!("reg+({rho})")));
        let small = t(sys, "psi(Om; 0)");
        assert_eq!(collapse(&small, &rho, sys).unwrap(), small);
        let big = t(sys, "psi(K; S)");
        let img = collapse(&big, &rho, sys).unwrap();
        assert_eq!(img, t(sys, &format!("psi(reg+({rho}); {rho})")));
        assert_eq!(uncollapse(&img, &rho, sys).unwrap(), big);
        assert_eq!(uncollapse(&rho, &rho, sys).unwrap(), t(sys, "S"));
        assert!(matches!(uncollapse(&t(sys, "S"), &rho, sys), Err(Error::NotInImage(_))));
    }

    #[test]
    fn domain_excludes_rho() {
        let sys = SystemId::Pi11;
        let rho = t(sys, "psi(S, {0: 1}; Om)");
        assert!(!in_domain(&rho, &rho, sys).unwrap());
        assert!(in_domain(&t(sys, "psi(Om; 0)"), &rho, sys).unwrap());
        assert!(in_domain(&t(sys, "K"), &rho, sys).unwrap());
        assert!(matches!(in_domain(&t(sys, "K"), &t(sys, "psi(Om; 0)"), sys), Err(Error::BadRho(_))));
        assert!(matches!(collapse(&rho, &rho, sys), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn stab_clauses() {
        let sys = SystemId::Stab;
        let rho = t(sys, "psi(dag(Om); Om)");
        assert_eq!(collapse(&t(sys, "I"), &rho, sys).unwrap(), t(sys, &format!("I[{rho}]")));
        assert_eq!(collapse(&t(sys, "dag(Om)"), &rho, sys).unwrap(), rho);
        assert_eq!(collapse(&t(sys, "dag(dag(Om))"), &rho, sys).unwrap(), t(sys, &format!("dag({rho})")));
    }
}
