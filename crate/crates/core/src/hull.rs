//! Support sets and Skolem-hull membership.
//!
//! `SC(α)` collects the strongly critical pieces α is built from by `+`,
//! `φ` and θ̃.  `K_δ(α)` collects the ψ-arguments that have to be available
//! to build α from the ordinals below δ, so that `α ∈ H_a(δ)` iff every
//! member of `K_δ(α)` is below `a`.  `hull_closure` computes the same hull
//! the slow way — as a fixed point over a finite universe — and exists only
//! to cross-check `in_hull`.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::finite_fn::FiniteFn;
use crate::order::{compare, le, lt};
use crate::systems::{enumerate, Budget, SystemId};
use crate::terms::{Mult, Node, OrdTerm};

pub type SupportSet = BTreeSet<OrdTerm>;

/// Strongly critical parts; constants and zero contribute nothing.
pub fn sc(t: &OrdTerm, _sys: SystemId) -> SupportSet {
    let mut out = SupportSet::new();
    sc_into(t, &mut out);
    out
}

fn sc_into(t: &OrdTerm, out: &mut SupportSet) {
    match t.node() {
        Node::Zero | Node::Const(_) => {}
        Node::Sum(parts) => {
            for (p, m) in parts {
                sc_into(p, out);
                if let Mult::Ord(c) = m {
                    sc_into(c, out);
                }
            }
        }
        Node::Veblen(b, x) | Node::ThetaTilde(b, x) => {
            sc_into(b, out);
            sc_into(x, out);
        }
        Node::Psi(..) | Node::NextReg(_) | Node::Dagger(_) | Node::IOf(_) => {
            out.insert(t.clone());
        }
    }
}

/// `SC_Λ(f)`: the keys together with the support of every value.
pub fn sc_fn(f: &FiniteFn, _sys: SystemId) -> SupportSet {
    let mut out = SupportSet::new();
    for (k, v) in f.entries() {
        out.insert(k.clone());
        sc_into(v, &mut out);
    }
    out
}

/// `E(α)`: the maximal ψ-subterms reachable through `+`, `φ`, θ̃ and the
/// unary successor / dagger / 𝕀[·] constructors.
pub fn e_set(t: &OrdTerm) -> SupportSet {
    let mut out = SupportSet::new();
    e_into(t, &mut out);
    out
}

fn e_into(t: &OrdTerm, out: &mut SupportSet) {
    match t.node() {
        Node::Zero | Node::Const(_) => {}
        Node::Sum(parts) => {
            for (p, m) in parts {
                e_into(p, out);
                if let Mult::Ord(c) = m {
                    e_into(c, out);
                }
            }
        }
        Node::Veblen(b, x) | Node::ThetaTilde(b, x) => {
            e_into(b, out);
            e_into(x, out);
        }
        Node::Psi(..) => {
            out.insert(t.clone());
        }
        Node::NextReg(b) | Node::Dagger(b) | Node::IOf(b) => e_into(b, out),
    }
}

/// Children a hull has to contain before it contains an atom: subscript,
/// superscript components and argument of a ψ-term, the base otherwise.
fn atom_components(t: &OrdTerm) -> Vec<OrdTerm> {
    match t.node() {
        Node::Psi(s, idx, a) => {
            let mut out = vec![s.clone(), a.clone()];
            out.extend(idx.components());
            out
        }
        Node::NextReg(b) | Node::Dagger(b) | Node::IOf(b) => vec![b.clone()],
        _ => Vec::new(),
    }
}

/// Walks the atoms of `t` that are at least δ.  `visit` sees each such
/// atom once and may stop the walk by returning `false`.
fn walk_above(
    t: &OrdTerm,
    delta: &OrdTerm,
    sys: SystemId,
    visit: &mut dyn FnMut(&OrdTerm) -> Result<bool>,
) -> Result<bool> {
    stacker::maybe_grow(64 * 1024, 2 * 1024 * 1024, || match t.node() {
        Node::Zero | Node::Const(_) => Ok(true),
        Node::Sum(parts) => {
            for (p, m) in parts {
                if !walk_above(p, delta, sys, visit)? {
                    return Ok(false);
                }
                if let Mult::Ord(c) = m {
                    if !walk_above(c, delta, sys, visit)? {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        Node::Veblen(b, x) | Node::ThetaTilde(b, x) => {
            Ok(walk_above(b, delta, sys, visit)? && walk_above(x, delta, sys, visit)?)
        }
        _ => {
            if lt(sys, t, delta)? {
                return Ok(true);
            }
            if !visit(t)? {
                return Ok(false);
            }
            for c in atom_components(t) {
                if !walk_above(&c, delta, sys, visit)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    })
}

/// `K_δ(α)`: arguments of the ψ-terms ≥ δ that α is built from.
pub fn k_set(delta: &OrdTerm, t: &OrdTerm, sys: SystemId) -> Result<SupportSet> {
    let mut out = SupportSet::new();
    walk_above(t, delta, sys, &mut |atom| {
        if let Node::Psi(_, _, a) = atom.node() {
            out.insert(a.clone());
        }
        Ok(true)
    })?;
    Ok(out)
}

/// `k_δ(α)`: the ψ-terms ≥ δ themselves.
pub fn k_small(delta: &OrdTerm, t: &OrdTerm, sys: SystemId) -> Result<SupportSet> {
    let mut out = SupportSet::new();
    walk_above(t, delta, sys, &mut |atom| {
        if atom.is_psi() {
            out.insert(atom.clone());
        }
        Ok(true)
    })?;
    Ok(out)
}

/// `G_δ(α)`: descend through ψ-terms whose subscript exceeds δ and
/// collect those collapsing at or below δ.
pub fn g_set(delta: &OrdTerm, t: &OrdTerm, sys: SystemId) -> Result<SupportSet> {
    let mut out = SupportSet::new();
    g_into(delta, t, sys, &mut out)?;
    Ok(out)
}

fn g_into(delta: &OrdTerm, t: &OrdTerm, sys: SystemId, out: &mut SupportSet) -> Result<()> {
    match t.node() {
        Node::Zero | Node::Const(_) => {}
        Node::Sum(parts) => {
            for (p, m) in parts {
                g_into(delta, p, sys, out)?;
                if let Mult::Ord(c) = m {
                    g_into(delta, c, sys, out)?;
                }
            }
        }
        Node::Veblen(b, x) | Node::ThetaTilde(b, x) => {
            g_into(delta, b, sys, out)?;
            g_into(delta, x, sys, out)?;
        }
        Node::Psi(pi, ..) => {
            if lt(sys, delta, pi)? {
                for c in atom_components(t) {
                    g_into(delta, &c, sys, out)?;
                }
            } else {
                out.insert(t.clone());
            }
        }
        Node::NextReg(_) | Node::Dagger(_) | Node::IOf(_) => {
            if lt(sys, t, delta)? {
                out.insert(t.clone());
            } else {
                for c in atom_components(t) {
                    g_into(delta, &c, sys, out)?;
                }
            }
        }
    }
    Ok(())
}

/// `t ∈ H_a(δ)`, decided as `K_δ(t) < a`.
pub fn in_hull(t: &OrdTerm, a: &OrdTerm, delta: &OrdTerm, sys: SystemId) -> Result<bool> {
    walk_above(t, delta, sys, &mut |atom| match atom.node() {
        Node::Psi(_, _, arg) => lt(sys, arg, a),
        _ => Ok(true),
    })
}

/// `t ∈ H_a(X)` for a finite generator set X: atoms in X are free, other
/// ψ-atoms need their argument below `a` and their components in the hull.
pub fn in_hull_gens(t: &OrdTerm, a: &OrdTerm, gens: &SupportSet, sys: SystemId) -> Result<bool> {
    stacker::maybe_grow(64 * 1024, 2 * 1024 * 1024, || match t.node() {
        Node::Zero | Node::Const(_) => Ok(true),
        Node::Sum(_) | Node::Veblen(..) | Node::ThetaTilde(..) => {
            for c in t.children() {
                if !in_hull_gens(&c, a, gens, sys)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        _ => {
            if gens.contains(t) {
                return Ok(true);
            }
            if let Node::Psi(_, _, arg) = t.node() {
                if !lt(sys, arg, a)? {
                    return Ok(false);
                }
            }
            for c in atom_components(t) {
                if !in_hull_gens(&c, a, gens, sys)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    })
}

/// The least set containing 0, the constants and `gens`, closed under the
/// system's constructors with ψ-arguments below `a`, restricted to the
/// valid terms of length ≤ `budget.maxlen`.
pub fn hull_closure(gens: &SupportSet, a: &OrdTerm, sys: SystemId, budget: &Budget) -> Result<SupportSet> {
    let universe = enumerate(sys, budget)?;
    hull_closure_in(&universe, gens, a, sys)
}

/// [`hull_closure`] over an explicit universe.
pub fn hull_closure_in(
    universe: &[OrdTerm],
    gens: &SupportSet,
    a: &OrdTerm,
    sys: SystemId,
) -> Result<SupportSet> {
    let mut set: SupportSet = gens.clone();
    for c in sys.constants() {
        set.insert(OrdTerm::konst(*c));
    }
    set.insert(OrdTerm::zero());
    let contained = |x: &OrdTerm, set: &SupportSet| -> bool {
        set.contains(x) || (!x.is_atom() && sc(x, sys).iter().all(|s| set.contains(s)) && is_value_like(x))
    };
    loop {
        let mut grew = false;
        for u in universe {
            if set.contains(u) {
                continue;
            }
            let ok = match u.node() {
                Node::Zero | Node::Const(_) => true,
                Node::Sum(_) | Node::Veblen(..) | Node::ThetaTilde(..) => u.children().iter().all(|c| set.contains(c)),
                Node::Psi(_, _, arg) => {
                    atom_components(u).iter().all(|c| contained(c, &set))
                        && compare(sys, arg, a)? == Ordering::Less
                }
                Node::NextReg(b) | Node::Dagger(b) | Node::IOf(b) => set.contains(b),
            };
            if ok {
                set.insert(u.clone());
                grew = true;
            }
        }
        if !grew {
            return Ok(set);
        }
    }
}

/// Finite-function values are not members of the term universe; they are
/// in the hull when their strongly critical parts are.
fn is_value_like(x: &OrdTerm) -> bool {
    x.subterms().iter().any(|s| matches!(s.node(), Node::ThetaTilde(..)) || matches!(s.node(), Node::Sum(p) if p.iter().any(|(_, m)| matches!(m, Mult::Ord(_)))))
        || x.is_zero()
}

/// Checks a closure result against the budget's item limit.
pub fn ensure_within(set: &SupportSet, budget: &Budget) -> Result<()> {
    if set.len() > budget.max_items {
        return Err(Error::BudgetExceeded(format!("closure has {} elements", set.len())));
    }
    Ok(())
}

/// Whether every member of `xs` is below `bound`.
pub fn all_below(xs: &SupportSet, bound: &OrdTerm, sys: SystemId) -> Result<bool> {
    for x in xs {
        if !lt(sys, x, bound)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether every member of `xs` is at most `bound`.
pub fn all_at_most(xs: &SupportSet, bound: &OrdTerm, sys: SystemId) -> Result<bool> {
    for x in xs {
        if !le(sys, x, bound)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::parse;

    fn t(sys: SystemId, s: &str) -> OrdTerm {
        parse(s, sys).unwrap()
    }

    #[test]
    fn sc_of_basic_terms() {
        let sys = SystemId::BH;
        assert!(sc(&t(sys, "0"), sys).is_empty());
        assert!(sc(&t(sys, "Om"), sys).is_empty());
        let p = t(sys, "psi(Om; 0)");
        assert_eq!(sc(&p, sys), [p.clone()].into_iter().collect());
        let phi = t(sys, "phi(psi(Om; 0), Om + psi(Om; 1))");
        assert_eq!(sc(&phi, sys).len(), 2);
    }

    #[test]
    fn k_set_unfolds_psi() {
        let sys = SystemId::BH;
        let x = t(sys, "psi(Om; psi(Om; 1))");
        let k = k_set(&OrdTerm::zero(), &x, sys).unwrap();
        let expect: SupportSet = [t(sys, "psi(Om; 1)"), t(sys, "1")].into_iter().collect();
        assert_eq!(k, expect);
        assert!(in_hull(&x, &t(sys, "Om"), &OrdTerm::zero(), sys).unwrap());
        assert!(!in_hull(&x, &t(sys, "psi(Om; 1)"), &OrdTerm::zero(), sys).unwrap());
        // everything below δ is a generator
        assert!(in_hull(&x, &OrdTerm::zero(), &t(sys, "Om"), sys).unwrap());
        assert!(in_hull(&t(sys, "Om"), &OrdTerm::zero(), &OrdTerm::zero(), sys).unwrap());
    }

    #[test]
    fn g_set_stops_at_small_subscripts() {
        let sys = SystemId::Pi3;
        let delta = t(sys, "Om");
        assert!(g_set(&delta, &OrdTerm::zero(), sys).unwrap().is_empty());
        let p = t(sys, "psi(Om; 1)");
        assert_eq!(g_set(&delta, &p, sys).unwrap(), [p.clone()].into_iter().collect());
        let q = t(sys, "psi(K; psi(Om; 1))");
        assert_eq!(g_set(&delta, &q, sys).unwrap(), [p].into_iter().collect());
    }
}
