//! The comparison relation of every system, plus the pair and vector
//! relations `(β, ν) < α` and `ν⃗ < α` on Λ-exponent normal forms.
//!
//! Sums compare lexicographically by parts, Veblen terms by the usual
//! three-case rule, and two ψ-terms by the four-case scheme: `β₁ < α₁`
//! holds for `β₁ = ψ_π^ξ(b)`, `α₁ = ψ_κ^ν(a)` iff one of
//!
//! 1. `π ≤ α₁`;
//! 2. `b < a`, `β₁ < κ` and `{π, b, ξ} ⊂ H_a(α₁)`;
//! 3. `b = a`, `π = κ`, `ξ ∈ H_a(α₁)` and `ξ < ν`;
//! 4. `a ≤ b` and `{κ, a, ν} ⊄ H_b(β₁)`.
//!
//! The Π¹₁ and 𝕀 systems additionally have *zones*: the atoms created by
//! collapsing at some ρ (`ρ⁺`, `ρ†`, `𝕀[ρ]` and ψ-terms built on them)
//! live in the interval just above their anchor ρ.  Atoms with different
//! anchors are ordered by their anchors; in the 𝕀 system two atoms of the
//! same zone are compared through the inverse collapse.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;

use crate::collapse::uncollapse_atom;
use crate::error::{Error, Result};
use crate::finite_fn::FiniteFn;
use crate::hull::in_hull;
use crate::systems::{root_of, SystemId};
use crate::terms::{sub_left, Const, Mult, Node, OrdTerm, PsiIndex};

type MemoKey = (SystemId, OrdTerm, OrdTerm);

const MEMO_LIMIT: usize = 1 << 21;

thread_local! {
    static MEMO: RefCell<HashMap<MemoKey, Ordering>> = RefCell::new(HashMap::new());
}

/// Total order of `sys` on valid terms.  Equality is structural identity
/// of normal forms; pairs the rules cannot order raise `InvalidTerm`.
pub fn compare(sys: SystemId, a: &OrdTerm, b: &OrdTerm) -> Result<Ordering> {
    if a == b {
        return Ok(Ordering::Equal);
    }
    let key = (sys, a.clone(), b.clone());
    if let Some(o) = MEMO.with(|m| m.borrow().get(&key).copied()) {
        return Ok(o);
    }
    let o = stacker::maybe_grow(64 * 1024, 4 * 1024 * 1024, || cmp_inner(sys, a, b))?;
    MEMO.with(|m| {
        let mut m = m.borrow_mut();
        if m.len() >= MEMO_LIMIT {
            m.clear();
        }
        m.insert(key, o);
        m.insert((sys, b.clone(), a.clone()), o.reverse());
    });
    Ok(o)
}

/// Drops this thread's comparison cache.
pub fn clear_cache() {
    MEMO.with(|m| m.borrow_mut().clear());
}

pub(crate) fn lt(sys: SystemId, a: &OrdTerm, b: &OrdTerm) -> Result<bool> {
    Ok(compare(sys, a, b)? == Ordering::Less)
}

pub(crate) fn le(sys: SystemId, a: &OrdTerm, b: &OrdTerm) -> Result<bool> {
    Ok(compare(sys, a, b)? != Ordering::Greater)
}

/// Stable merge sort by [`compare`] on a key.  Unlike `slice::sort_by` it
/// never panics on an inconsistent comparator; comparison errors are
/// returned instead.
pub fn sort_by_compare<T: Clone>(
    sys: SystemId,
    items: &mut Vec<T>,
    key: impl Fn(&T) -> &OrdTerm + Copy,
) -> Result<()> {
    if items.len() <= 1 {
        return Ok(());
    }
    let mid = items.len() / 2;
    let mut right = items.split_off(mid);
    sort_by_compare(sys, items, key)?;
    sort_by_compare(sys, &mut right, key)?;
    let left = std::mem::take(items);
    let (mut i, mut j) = (0, 0);
    items.reserve(left.len() + right.len());
    while i < left.len() && j < right.len() {
        if compare(sys, key(&right[j]), key(&left[i]))? == Ordering::Less {
            items.push(right[j].clone());
            j += 1;
        } else {
            items.push(left[i].clone());
            i += 1;
        }
    }
    items.extend_from_slice(&left[i..]);
    items.extend_from_slice(&right[j..]);
    Ok(())
}

fn invalid(a: &OrdTerm, b: &OrdTerm, why: &str) -> Error {
    Error::InvalidTerm(format!("cannot compare {a} with {b}: {why}"))
}

fn cmp_inner(sys: SystemId, a: &OrdTerm, b: &OrdTerm) -> Result<Ordering> {
    match (a.node(), b.node()) {
        (Node::Zero, _) => return Ok(Ordering::Less),
        (_, Node::Zero) => return Ok(Ordering::Greater),
        (Node::Sum(_), _) | (_, Node::Sum(_)) => return cmp_parts(sys, &a.parts(), &b.parts()),
        _ => {}
    }
    cmp_principal(sys, a, b)
}

fn cmp_parts(sys: SystemId, x: &[(OrdTerm, Mult)], y: &[(OrdTerm, Mult)]) -> Result<Ordering> {
    for i in 0.. {
        match (x.get(i), y.get(i)) {
            (Some((p, m)), Some((q, n))) => {
                let o = compare(sys, p, q)?;
                if o != Ordering::Equal {
                    return Ok(o);
                }
                let o = cmp_mult(sys, m, n)?;
                if o != Ordering::Equal {
                    return Ok(o);
                }
            }
            (None, Some(_)) => return Ok(Ordering::Less),
            (Some(_), None) => return Ok(Ordering::Greater),
            (None, None) => return Ok(Ordering::Equal),
        }
    }
    unreachable!()
}

fn cmp_mult(sys: SystemId, m: &Mult, n: &Mult) -> Result<Ordering> {
    match (m, n) {
        (Mult::Nat(a), Mult::Nat(b)) => Ok(a.cmp(b)),
        _ => compare(sys, &m.to_term(), &n.to_term()),
    }
}

fn cmp_principal(sys: SystemId, a: &OrdTerm, b: &OrdTerm) -> Result<Ordering> {
    match (a.node(), b.node()) {
        (Node::ThetaTilde(b1, x1), Node::ThetaTilde(b2, x2)) => cmp_binary(sys, a, b, (b1, x1), (b2, x2)),
        (Node::ThetaTilde(..), _) => cmp_tt_ordinary(sys, a, b),
        (_, Node::ThetaTilde(..)) => Ok(cmp_tt_ordinary(sys, b, a)?.reverse()),
        (Node::Veblen(b1, x1), Node::Veblen(b2, x2)) => cmp_binary(sys, a, b, (b1, x1), (b2, x2)),
        (Node::Veblen(s, x), _) => {
            // φ_s(x) < γ for a strongly critical γ iff s, x < γ.
            if lt(sys, s, b)? && lt(sys, x, b)? {
                Ok(Ordering::Less)
            } else {
                Ok(Ordering::Greater)
            }
        }
        (_, Node::Veblen(..)) => Ok(cmp_principal(sys, b, a)?.reverse()),
        _ => cmp_atom(sys, a, b),
    }
}

/// The common rule for `φ_{b1}(x1)` vs `φ_{b2}(x2)` and for θ̃-terms.
fn cmp_binary(
    sys: SystemId,
    a: &OrdTerm,
    b: &OrdTerm,
    (b1, x1): (&OrdTerm, &OrdTerm),
    (b2, x2): (&OrdTerm, &OrdTerm),
) -> Result<Ordering> {
    match compare(sys, b1, b2)? {
        Ordering::Less => Ok(if lt(sys, x1, b)? { Ordering::Less } else { Ordering::Greater }),
        Ordering::Equal => compare(sys, x1, x2),
        Ordering::Greater => Ok(if le(sys, a, x2)? { Ordering::Less } else { Ordering::Greater }),
    }
}

/// A θ̃-atom (always above Λ) against an ordinary principal term.
fn cmp_tt_ordinary(sys: SystemId, tt: &OrdTerm, q: &OrdTerm) -> Result<Ordering> {
    let lam = OrdTerm::konst(sys.lambda());
    if q.is_atom() || le(sys, q, &lam)? {
        Ok(Ordering::Greater)
    } else {
        Err(invalid(tt, q, "ordinary term above Λ inside a θ̃-normal form"))
    }
}

fn cmp_atom(sys: SystemId, a: &OrdTerm, b: &OrdTerm) -> Result<Ordering> {
    match sys {
        SystemId::BH | SystemId::Pi3 | SystemId::PiN(_) => cmp_atom_plain(sys, a, b),
        SystemId::Pi11 => cmp_atom_pi11(sys, a, b),
        SystemId::Stab => cmp_atom_stab(sys, a, b),
    }
}

fn const_rank(sys: SystemId, t: &OrdTerm, c: Const) -> Result<u8> {
    sys.const_rank(c)
        .ok_or_else(|| Error::InvalidTerm(format!("constant {t} does not belong to {sys}")))
}

/// Constants by rank, `ψ_σ(…) < c` iff `σ ≤ c`, ψ vs ψ by the four cases.
fn cmp_atom_plain(sys: SystemId, a: &OrdTerm, b: &OrdTerm) -> Result<Ordering> {
    match (a.node(), b.node()) {
        (Node::Const(c), Node::Const(d)) => Ok(const_rank(sys, a, *c)?.cmp(&const_rank(sys, b, *d)?)),
        (Node::Const(c), Node::Psi(s, ..)) => {
            const_rank(sys, a, *c)?;
            Ok(if le(sys, s, a)? { Ordering::Greater } else { Ordering::Less })
        }
        (Node::Psi(..), Node::Const(_)) => Ok(cmp_atom_plain(sys, b, a)?.reverse()),
        (Node::Psi(..), Node::Psi(..)) => four_case(sys, a, b),
        _ => Err(invalid(a, b, "constructor not available in this system")),
    }
}

/// Anchor of a Π¹₁ zone atom: `ρ⁺` and `ψ_{ρ⁺}(…)` belong to ρ.
fn anchor_pi11(t: &OrdTerm) -> Option<OrdTerm> {
    match t.node() {
        Node::NextReg(r) => Some(r.clone()),
        Node::Psi(s, ..) => match s.node() {
            Node::NextReg(r) => Some(r.clone()),
            _ => None,
        },
        _ => None,
    }
}

fn cmp_atom_pi11(sys: SystemId, a: &OrdTerm, b: &OrdTerm) -> Result<Ordering> {
    match (anchor_pi11(a), anchor_pi11(b)) {
        (Some(r), Some(s)) if r != s => compare(sys, &r, &s),
        (Some(_), Some(_)) => match (a.node(), b.node()) {
            (Node::NextReg(_), _) => Ok(Ordering::Greater),
            (_, Node::NextReg(_)) => Ok(Ordering::Less),
            _ => four_case(sys, a, b),
        },
        (Some(r), None) => Ok(if le(sys, b, &r)? { Ordering::Greater } else { Ordering::Less }),
        (None, Some(_)) => Ok(cmp_atom_pi11(sys, b, a)?.reverse()),
        (None, None) => cmp_atom_plain(sys, a, b),
    }
}

/// Whether a ψ-term's subscript chain ends in a successor-stable `α†`
/// (the class Ψ of the 𝕀 system).
pub(crate) fn is_stab_psi(t: &OrdTerm) -> bool {
    match t.node() {
        Node::Psi(s, ..) => matches!(s.node(), Node::Dagger(_)) || is_stab_psi(s),
        _ => false,
    }
}

/// Anchor of an atom of the 𝕀 system, `None` at top level.
pub(crate) fn anchor_stab(t: &OrdTerm) -> Option<OrdTerm> {
    match t.node() {
        Node::IOf(r) => Some(r.clone()),
        Node::Dagger(b) => {
            if is_stab_psi(b) {
                Some(b.clone())
            } else {
                anchor_stab(b)
            }
        }
        Node::Psi(s, ..) => match s.node() {
            Node::Const(_) => None,
            _ => anchor_stab(s),
        },
        _ => None,
    }
}

/// The chain of anchors, outermost first.
pub(crate) fn address(sys: SystemId, t: &OrdTerm) -> Vec<OrdTerm> {
    let anchor = match sys {
        SystemId::Pi11 => anchor_pi11(t),
        SystemId::Stab => anchor_stab(t),
        _ => None,
    };
    match anchor {
        None => Vec::new(),
        Some(r) => {
            let mut out = address(sys, &r);
            out.push(r);
            out
        }
    }
}

fn cmp_atom_stab(sys: SystemId, a: &OrdTerm, b: &OrdTerm) -> Result<Ordering> {
    let (x, y) = (address(sys, a), address(sys, b));
    let k = x.iter().zip(&y).take_while(|(p, q)| p == q).count();
    if k == x.len() && k == y.len() {
        if k == 0 {
            return cmp_stab_top(sys, a, b);
        }
        let r = &x[k - 1];
        let ua = uncollapse_atom(a, r, sys)?;
        let ub = uncollapse_atom(b, r, sys)?;
        return compare(sys, &ua, &ub);
    }
    if k == x.len() {
        return Ok(if le(sys, a, &y[k])? { Ordering::Less } else { Ordering::Greater });
    }
    if k == y.len() {
        return Ok(if le(sys, b, &x[k])? { Ordering::Greater } else { Ordering::Less });
    }
    compare(sys, &x[k], &y[k])
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum StabClass {
    PsiOmega,
    Omega,
    Middle,
    Top,
}

fn stab_class(t: &OrdTerm) -> Option<StabClass> {
    match t.node() {
        Node::Const(Const::Omega) => Some(StabClass::Omega),
        Node::Const(Const::BigI) => Some(StabClass::Top),
        Node::Psi(s, ..) if s.is_const(Const::Omega) => Some(StabClass::PsiOmega),
        Node::Psi(s, ..) if s.is_const(Const::BigI) => Some(StabClass::Middle),
        Node::Psi(..) if is_stab_psi(t) => Some(StabClass::Middle),
        Node::Dagger(_) => Some(StabClass::Middle),
        _ => None,
    }
}

fn cmp_stab_top(sys: SystemId, a: &OrdTerm, b: &OrdTerm) -> Result<Ordering> {
    let (Some(ca), Some(cb)) = (stab_class(a), stab_class(b)) else {
        return Err(invalid(a, b, "not a term of the 𝕀 system"));
    };
    if ca != cb {
        return Ok(ca.cmp(&cb));
    }
    match ca {
        StabClass::PsiOmega => four_case(sys, a, b),
        StabClass::Middle => cmp_stab_middle(sys, a, b),
        _ => Ok(Ordering::Equal),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Middle {
    /// `α†`
    Stable,
    /// `ψ_𝕀(a)`
    LimitStable,
    /// ψ-terms whose subscript chain ends in a stable
    Collapsed,
}

fn middle_kind(t: &OrdTerm) -> Middle {
    match t.node() {
        Node::Dagger(_) => Middle::Stable,
        Node::Psi(s, ..) if s.is_const(Const::BigI) => Middle::LimitStable,
        _ => Middle::Collapsed,
    }
}

/// Ordering of successor stables `α†`, limits of stables `ψ_𝕀(a)` and
/// the class Ψ of collapses lying just below their root stable.
fn cmp_stab_middle(sys: SystemId, a: &OrdTerm, b: &OrdTerm) -> Result<Ordering> {
    use Middle::*;
    match (middle_kind(a), middle_kind(b), a.node(), b.node()) {
        (Stable, Stable, Node::Dagger(x), Node::Dagger(y)) => compare(sys, x, y),
        (Stable, LimitStable, Node::Dagger(x), _) => {
            Ok(if lt(sys, x, b)? { Ordering::Less } else { Ordering::Greater })
        }
        (LimitStable, LimitStable, ..) => four_case(sys, a, b),
        (Collapsed, Stable | LimitStable, ..) => {
            Ok(if le(sys, &root_of(a), b)? { Ordering::Less } else { Ordering::Greater })
        }
        (Collapsed, Collapsed, ..) => {
            let (r, s) = (root_of(a), root_of(b));
            if r != s {
                compare(sys, &r, &s)
            } else {
                four_case(sys, a, b)
            }
        }
        _ => Ok(cmp_stab_middle(sys, b, a)?.reverse()),
    }
}

fn psi_parts(t: &OrdTerm) -> (&OrdTerm, &PsiIndex, &OrdTerm) {
    match t.node() {
        Node::Psi(s, i, a) => (s, i, a),
        _ => unreachable!("four_case on a non-ψ term"),
    }
}

/// Case 1 is decisive (`ψ_π(b) < π`), so it is tried in both directions
/// before the hull cases; those must then hold in exactly one direction.
fn four_case(sys: SystemId, a: &OrdTerm, b: &OrdTerm) -> Result<Ordering> {
    if le(sys, psi_parts(a).0, b)? {
        return Ok(Ordering::Less);
    }
    if le(sys, psi_parts(b).0, a)? {
        return Ok(Ordering::Greater);
    }
    match (psi_less(sys, a, b)?, psi_less(sys, b, a)?) {
        (true, false) => Ok(Ordering::Less),
        (false, true) => Ok(Ordering::Greater),
        (true, true) => Err(invalid(a, b, "the ψ-comparison holds in both directions")),
        (false, false) => Err(invalid(a, b, "no case of the ψ-comparison applies")),
    }
}

fn all_in_hull(sys: SystemId, ts: &[OrdTerm], a: &OrdTerm, delta: &OrdTerm) -> Result<bool> {
    for t in ts {
        if !in_hull(t, a, delta, sys)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `beta < alpha` for two ψ-terms by cases 2–4; case 1 is handled by
/// the caller.
fn psi_less(sys: SystemId, beta: &OrdTerm, alpha: &OrdTerm) -> Result<bool> {
    let (pi, xi, b) = psi_parts(beta);
    let (kappa, nu, a) = psi_parts(alpha);
    let ab = compare(sys, b, a)?;
    if ab == Ordering::Less && lt(sys, beta, kappa)? {
        let mut gens = vec![pi.clone(), b.clone()];
        gens.extend(xi.components());
        if all_in_hull(sys, &gens, a, alpha)? {
            return Ok(true);
        }
    }
    if ab == Ordering::Equal
        && pi == kappa
        && all_in_hull(sys, &xi.components(), a, alpha)?
        && index_less(sys, xi, nu)?
    {
        return Ok(true);
    }
    if ab != Ordering::Less {
        let mut gens = vec![kappa.clone(), a.clone()];
        gens.extend(nu.components());
        if !all_in_hull(sys, &gens, b, beta)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Order on superscripts of the same kind.  `None` is the least index.
pub fn index_less(sys: SystemId, x: &PsiIndex, y: &PsiIndex) -> Result<bool> {
    Ok(index_cmp(sys, x, y)? == Ordering::Less)
}

pub fn index_cmp(sys: SystemId, x: &PsiIndex, y: &PsiIndex) -> Result<Ordering> {
    match (x, y) {
        (PsiIndex::None, PsiIndex::None) => Ok(Ordering::Equal),
        (PsiIndex::Ord(u), PsiIndex::Ord(v)) => compare(sys, u, v),
        (PsiIndex::None, PsiIndex::Ord(_)) => Ok(Ordering::Less),
        (PsiIndex::Ord(_), PsiIndex::None) => Ok(Ordering::Greater),
        (PsiIndex::Vec(_), _) | (_, PsiIndex::Vec(_)) => {
            let u = vec_entries(x);
            let v = vec_entries(y);
            if u.len() != v.len() && !u.is_empty() && !v.is_empty() {
                return Err(Error::ArityMismatch { expected: u.len(), got: v.len() });
            }
            let n = u.len().max(v.len());
            let zero = OrdTerm::zero();
            for i in (0..n).rev() {
                let o = compare(sys, u.get(i).unwrap_or(&zero), v.get(i).unwrap_or(&zero))?;
                if o != Ordering::Equal {
                    return Ok(o);
                }
            }
            Ok(Ordering::Equal)
        }
        (PsiIndex::Fn(_), _) | (_, PsiIndex::Fn(_)) => {
            let f = fn_of(x, sys);
            let g = fn_of(y, sys);
            fn_cmp(sys, &f, &g)
        }
    }
}

fn vec_entries(x: &PsiIndex) -> Vec<OrdTerm> {
    match x {
        PsiIndex::Vec(v) => v.clone(),
        _ => Vec::new(),
    }
}

fn fn_of(x: &PsiIndex, sys: SystemId) -> FiniteFn {
    match x {
        PsiIndex::Fn(f) => f.clone(),
        _ => FiniteFn::empty(sys),
    }
}

/// Finite functions: `<^0_lx` when it decides the pair, otherwise the
/// plain lexicographic order at the least key where they differ.
pub fn fn_cmp(sys: SystemId, f: &FiniteFn, g: &FiniteFn) -> Result<Ordering> {
    if f == g {
        return Ok(Ordering::Equal);
    }
    let zero = OrdTerm::zero();
    if f.is_irreducible(sys)? && g.is_irreducible(sys)? {
        if f.lex_less(g, &zero, sys)? {
            return Ok(Ordering::Less);
        }
        if g.lex_less(f, &zero, sys)? {
            return Ok(Ordering::Greater);
        }
    }
    let mut keys: Vec<OrdTerm> = f.supp();
    for k in g.supp() {
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    sort_by_compare(sys, &mut keys, |k| k)?;
    for k in keys {
        let o = compare(sys, &f.get(&k), &g.get(&k))?;
        if o != Ordering::Equal {
            return Ok(o);
        }
    }
    Ok(Ordering::Equal)
}

/// The Λ-exponent normal form `α = Λ^{β₀}a₀ + ⋯` (largest exponent
/// first), each `a_i < Λ`, together with the segments `α_i` ending with
/// the i-th block.
pub(crate) fn lambda_blocks(alpha: &OrdTerm, sys: SystemId) -> Result<Vec<(OrdTerm, OrdTerm)>> {
    let lam = OrdTerm::konst(sys.lambda());
    let mut blocks: Vec<(OrdTerm, OrdTerm)> = Vec::new();
    let mut prefix: Vec<(OrdTerm, Mult)> = Vec::new();
    for (p, m) in alpha.parts() {
        let e = crate::terms::log_omega(&p);
        // e = Λ·β + r with every part of r below Λ
        let mut beta_parts = Vec::new();
        for (q, n) in e.parts() {
            if le(sys, &lam, &q)? {
                let l = crate::terms::log_omega(&q);
                let k = sub_left(&l, &lam, sys)?;
                beta_parts.push((crate::terms::omega_pow(&k, sys)?, n));
            }
        }
        let beta = OrdTerm::from_parts(beta_parts);
        prefix.push((p, m));
        match blocks.last_mut() {
            Some((b, seg)) if *b == beta => *seg = OrdTerm::from_parts(prefix.clone()),
            _ => blocks.push((beta, OrdTerm::from_parts(prefix.clone()))),
        }
    }
    Ok(blocks)
}

/// `(β, ν) < α`: some segment `α_i` with exponent `β_i` has `β < α_i` and
/// `ν < β_i`.
pub fn less_pair(pair: (&OrdTerm, &OrdTerm), alpha: &OrdTerm, sys: SystemId) -> Result<bool> {
    less_vec(&[pair.0.clone(), pair.1.clone()], alpha, 2, sys)
}

/// `ν⃗ < α` for a vector of arity `n`: `ν_k < α_i` and the rest below
/// `β_i`, recursively.
pub fn less_vec(v: &[OrdTerm], alpha: &OrdTerm, n: usize, sys: SystemId) -> Result<bool> {
    if v.len() != n {
        return Err(Error::ArityMismatch { expected: n, got: v.len() });
    }
    less_vec_inner(v, alpha, sys)
}

fn less_vec_inner(v: &[OrdTerm], alpha: &OrdTerm, sys: SystemId) -> Result<bool> {
    if v.len() == 1 {
        return lt(sys, &v[0], alpha);
    }
    for (beta, seg) in lambda_blocks(alpha, sys)? {
        if lt(sys, &v[0], &seg)? && less_vec_inner(&v[1..], &beta, sys)? {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::parse;

    fn cmp(sys: SystemId, a: &str, b: &str) -> Ordering {
        compare(sys, &parse(a, sys).unwrap(), &parse(b, sys).unwrap()).unwrap()
    }

    #[test]
    fn psi_below_omega() {
        assert_eq!(cmp(SystemId::BH, "psi(Om; 0)", "Om"), Ordering::Less);
        assert_eq!(cmp(SystemId::BH, "psi(Om; 0)", "psi(Om; 1)"), Ordering::Less);
        assert_eq!(cmp(SystemId::BH, "psi(Om; Om)", "psi(Om; 1)"), Ordering::Greater);
    }

    #[test]
    fn veblen_fixed_points() {
        let sys = SystemId::BH;
        assert_eq!(cmp(sys, "phi(1, 0)", "phi(0, phi(1,0) + 1)"), Ordering::Less);
        assert_eq!(cmp(sys, "phi(0, Om + 1)", "Om"), Ordering::Greater);
        assert_eq!(cmp(sys, "phi(0, 5)", "Om"), Ordering::Less);
        assert_eq!(cmp(sys, "phi(1, 0) + 1", "phi(1, 0)"), Ordering::Greater);
    }

    #[test]
    fn constants_by_rank() {
        assert_eq!(cmp(SystemId::Pi11, "S", "K"), Ordering::Less);
        assert_eq!(cmp(SystemId::Pi11, "Om", "S"), Ordering::Less);
        assert_eq!(cmp(SystemId::Pi3, "psi(K; 0)", "K"), Ordering::Less);
        assert_eq!(cmp(SystemId::Pi3, "psi(K; 0)", "Om"), Ordering::Greater);
        let bad = compare(SystemId::BH, &OrdTerm::konst(Const::BigK), &OrdTerm::konst(Const::Omega));
        assert!(matches!(bad, Err(Error::InvalidTerm(_))));
    }

    #[test]
    fn stab_chain() {
        let sys = SystemId::Stab;
        let rho = "psi(dag(Om); 0)";
        let chain = [
            rho.to_string(),
            format!("psi(dag({rho}); 0)"),
            format!("dag({rho})"),
            format!("psi(I[{rho}]; 0)"),
            format!("I[{rho}]"),
            "dag(Om)".to_string(),
            "I".to_string(),
        ];
        for w in chain.windows(2) {
            assert_eq!(cmp(sys, &w[0], &w[1]), Ordering::Less, "{} < {}", w[0], w[1]);
        }
    }

    #[test]
    fn pair_relation() {
        let sys = SystemId::Pi3;
        let t = |s: &str| parse(s, sys).unwrap();
        // Λ^1·1 = K: (0,0) < K
        assert!(less_pair((&t("0"), &t("0")), &t("K"), sys).unwrap());
        // Λ^ξ a + Λ^μ b with ξ = 2, μ = 1, a = 1, b = 2, c = 1
        let alpha = t("phi(0, K * 2) + K * 2");
        let beta = t("phi(0, K * 2) + K");
        assert!(less_pair((&beta, &t("0")), &alpha, sys).unwrap());
        assert!(!less_pair((&beta, &t("1")), &alpha, sys).unwrap());
        assert!(matches!(less_vec(&[t("0")], &alpha, 2, sys), Err(Error::ArityMismatch { .. })));
    }
}
