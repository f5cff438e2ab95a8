//! Normal-form arithmetic: sums, Veblen and θ / θ̃ iterates, the θ̃-view
//! of finite-function values and their segments.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use super::{Const, Mult, Node, OrdTerm, PsiIndex};
use crate::error::{Error, Result};
use crate::finite_fn::FiniteFn;
use crate::order::compare;
use crate::systems::SystemId;

/// Upper bound on explicit iterations performed by [`theta`] and
/// [`theta_tilde`] before they give up with `TooDeep`.
const UNFOLD_LIMIT: u64 = 4096;

fn lt(sys: SystemId, a: &OrdTerm, b: &OrdTerm) -> Result<bool> {
    Ok(compare(sys, a, b)? == Ordering::Less)
}

/// Ordinal sum `a + b` in Cantor normal form.
pub fn add(a: &OrdTerm, b: &OrdTerm, sys: SystemId) -> Result<OrdTerm> {
    if b.is_zero() {
        return Ok(a.clone());
    }
    if a.is_zero() {
        return Ok(b.clone());
    }
    let bp = b.parts();
    let lead = &bp[0].0;
    let mut out = Vec::new();
    let mut merged = None;
    for (p, m) in a.parts() {
        match compare(sys, &p, lead)? {
            Ordering::Greater => out.push((p, m)),
            Ordering::Equal => merged = Some(m),
            Ordering::Less => break,
        }
    }
    let mut rest = bp.into_iter();
    let (p0, m0) = rest.next().unwrap();
    let m0 = match merged {
        Some(m) => add_mult(&m, &m0, sys)?,
        None => m0,
    };
    out.push((p0, m0));
    out.extend(rest);
    Ok(OrdTerm::from_parts(out))
}

fn add_mult(m: &Mult, n: &Mult, sys: SystemId) -> Result<Mult> {
    Ok(match (m, n) {
        (Mult::Nat(a), Mult::Nat(b)) => Mult::Nat(a.saturating_add(*b)),
        _ => Mult::from_term(&add(&m.to_term(), &n.to_term(), sys)?),
    })
}

fn nsum_mult(m: &Mult, n: &Mult, sys: SystemId) -> Result<Mult> {
    Ok(match (m, n) {
        (Mult::Nat(a), Mult::Nat(b)) => Mult::Nat(a.saturating_add(*b)),
        _ => Mult::from_term(&natural_sum(&m.to_term(), &n.to_term(), sys)?),
    })
}

/// Hessenberg natural sum `a # b`: merge the parts of both normal forms.
pub fn natural_sum(a: &OrdTerm, b: &OrdTerm, sys: SystemId) -> Result<OrdTerm> {
    let (ap, bp) = (a.parts(), b.parts());
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(ap.len() + bp.len());
    while i < ap.len() && j < bp.len() {
        match compare(sys, &ap[i].0, &bp[j].0)? {
            Ordering::Greater => {
                out.push(ap[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push(bp[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                out.push((ap[i].0.clone(), nsum_mult(&ap[i].1, &bp[j].1, sys)?));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&ap[i..]);
    out.extend_from_slice(&bp[j..]);
    Ok(OrdTerm::from_parts(out))
}

/// `a + b = a # b`, written `a ∔ b` in the text.
pub fn is_dotted(a: &OrdTerm, b: &OrdTerm, sys: SystemId) -> Result<bool> {
    Ok(add(a, b, sys)? == natural_sum(a, b, sys)?)
}

/// Left subtraction: the unique `d` with `b + d = c`, for `b ≤ c`.
pub fn sub_left(c: &OrdTerm, b: &OrdTerm, sys: SystemId) -> Result<OrdTerm> {
    let (cp, bp) = (c.parts(), b.parts());
    let mut i = 0;
    while i < bp.len() && i < cp.len() && bp[i] == cp[i] {
        i += 1;
    }
    if i == bp.len() {
        return Ok(OrdTerm::from_parts(cp[i..].to_vec()));
    }
    let too_big = || Error::InvalidTerm(format!("cannot subtract {b} from {c}"));
    if i == cp.len() {
        return Err(too_big());
    }
    match compare(sys, &bp[i].0, &cp[i].0)? {
        Ordering::Less => Ok(OrdTerm::from_parts(cp[i..].to_vec())),
        Ordering::Greater => Err(too_big()),
        Ordering::Equal => {
            let (mb, mc) = (&bp[i].1, &cp[i].1);
            let diff = match (mb, mc) {
                (Mult::Nat(x), Mult::Nat(y)) if x < y => Mult::Nat(y - x),
                (Mult::Nat(_), Mult::Nat(_)) => return Err(too_big()),
                _ => {
                    let d = sub_left(&mc.to_term(), &mb.to_term(), sys)?;
                    if d.is_zero() {
                        return Err(too_big());
                    }
                    Mult::from_term(&d)
                }
            };
            // b's remaining parts are absorbed by the first copy of the part.
            let mut out = vec![(cp[i].0.clone(), diff)];
            out.extend_from_slice(&cp[i + 1..]);
            Ok(OrdTerm::from_parts(out))
        }
    }
}

/// `ω^x`.
pub fn omega_pow(x: &OrdTerm, sys: SystemId) -> Result<OrdTerm> {
    veblen(&OrdTerm::zero(), x, sys)
}

/// The exponent `e` with `p = ω^e` for an additive principal `p`.
pub(crate) fn log_omega(p: &OrdTerm) -> OrdTerm {
    match p.node() {
        Node::Veblen(b, x) if b.is_zero() => x.clone(),
        _ => p.clone(),
    }
}

/// `φ_b(x)` in normal form.
pub fn veblen(b: &OrdTerm, x: &OrdTerm, sys: SystemId) -> Result<OrdTerm> {
    if x.is_zero() && b.is_atom() {
        return Ok(b.clone());
    }
    match x.node() {
        _ if x.is_atom() => {
            if lt(sys, b, x)? {
                return Ok(x.clone());
            }
        }
        Node::Veblen(c, _) => {
            if lt(sys, b, c)? {
                return Ok(x.clone());
            }
        }
        _ => {}
    }
    Ok(OrdTerm::from_node(Node::Veblen(b.clone(), x.clone())))
}

/// `θ_c(a)`: the c-th iterate of `a ↦ ω^a`, using `θ_{c+d} = θ_c ∘ θ_d`
/// and `θ_{ω^e} = φ_e`.
pub fn theta(c: &OrdTerm, a: &OrdTerm, sys: SystemId) -> Result<OrdTerm> {
    let mut acc = a.clone();
    let mut steps = 0u64;
    for (p, m) in c.parts().into_iter().rev() {
        let e = log_omega(&p);
        let n = match m {
            Mult::Nat(n) => n,
            Mult::Ord(_) => return Err(Error::TooDeep(format!("θ with subscript {c}"))),
        };
        steps = steps.saturating_add(n);
        if steps > UNFOLD_LIMIT {
            return Err(Error::TooDeep(format!("θ with subscript {c}")));
        }
        for _ in 0..n {
            acc = veblen(&e, &acc, sys)?;
        }
    }
    Ok(acc)
}

/// One θ̃-part `θ̃_sub(arg)·coeff` of a finite-function value.  The
/// ordinary tail below Λ is the part with `sub = 1, arg = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TtPart {
    pub sub: OrdTerm,
    pub arg: OrdTerm,
    pub coeff: OrdTerm,
}

/// `θ̃_sub(arg)` for a principal subscript, with `θ̃_1(0) = 1` and
/// `θ̃_1(1) = Λ`.
pub fn tt_principal(sub: &OrdTerm, arg: &OrdTerm, sys: SystemId) -> OrdTerm {
    if sub.as_nat() == Some(1) {
        match arg.as_nat() {
            Some(0) => return OrdTerm::one(),
            Some(1) => return OrdTerm::konst(sys.lambda()),
            _ => {}
        }
    }
    OrdTerm::from_node(Node::ThetaTilde(sub.clone(), arg.clone()))
}

fn tt_parts_of_principal(p: &OrdTerm, sys: SystemId) -> Option<(OrdTerm, OrdTerm)> {
    match p.node() {
        Node::ThetaTilde(b, x) => Some((b.clone(), x.clone())),
        Node::Const(c) if *c == sys.lambda() => Some((OrdTerm::one(), OrdTerm::one())),
        _ => None,
    }
}

/// `θ̃_b(x)`, the b-th iterate of `ξ ↦ Λ^ξ` (iterate one is `Λ^ξ`).
pub fn theta_tilde(b: &OrdTerm, x: &OrdTerm, sys: SystemId) -> Result<OrdTerm> {
    // the argument must itself be a value: no ordinary part reaching Λ
    tt_view(x, sys)?;
    let mut acc = x.clone();
    let mut steps = 0u64;
    for (p, m) in b.parts().into_iter().rev() {
        let n = match m {
            Mult::Nat(n) => n,
            Mult::Ord(_) => return Err(Error::TooDeep(format!("θ̃ with subscript {b}"))),
        };
        steps = steps.saturating_add(n);
        if steps > UNFOLD_LIMIT {
            return Err(Error::TooDeep(format!("θ̃ with subscript {b}")));
        }
        for _ in 0..n {
            acc = tt_step(&p, &acc, sys)?;
        }
    }
    Ok(acc)
}

fn tt_step(p: &OrdTerm, x: &OrdTerm, sys: SystemId) -> Result<OrdTerm> {
    if x.is_principal() {
        if let Some((c, _)) = tt_parts_of_principal(x, sys) {
            if lt(sys, p, &c)? {
                return Ok(x.clone());
            }
        }
    }
    Ok(tt_principal(p, x, sys))
}

/// Decomposes a value `θ̃_{b_m}(ξ_m)a_m + ⋯ + θ̃_{b_0}(ξ_0)a_0` into its
/// parts, leading part first.
pub fn tt_view(v: &OrdTerm, sys: SystemId) -> Result<Vec<TtPart>> {
    let lam = OrdTerm::konst(sys.lambda());
    let mut out = Vec::new();
    let mut tail = Vec::new();
    for (p, m) in v.parts() {
        if let Some((sub, arg)) = tt_parts_of_principal(&p, sys) {
            if !tail.is_empty() {
                return Err(Error::NotPrincipal(format!("{v}: θ̃-part after the ordinary tail")));
            }
            out.push(TtPart { sub, arg, coeff: m.to_term() });
        } else {
            if compare(sys, &p, &lam)? != Ordering::Less {
                return Err(Error::NotPrincipal(format!("{v}: part {p} is not in θ̃-normal form")));
            }
            tail.push((p, m));
        }
    }
    if !tail.is_empty() {
        out.push(TtPart { sub: OrdTerm::one(), arg: OrdTerm::zero(), coeff: OrdTerm::from_parts(tail) });
    }
    Ok(out)
}

/// Inverse of [`tt_view`].
pub(crate) fn from_tt_view(parts: &[TtPart], sys: SystemId) -> OrdTerm {
    let mut out = Vec::new();
    for part in parts {
        if part.sub.as_nat() == Some(1) && part.arg.is_zero() {
            out.extend(part.coeff.parts());
        } else {
            out.push((tt_principal(&part.sub, &part.arg, sys), Mult::from_term(&part.coeff)));
        }
    }
    OrdTerm::from_parts(out)
}

/// Segments of a nonzero value, longest first, ending with `0`.
pub fn segments(x: &OrdTerm, sys: SystemId) -> Result<Vec<OrdTerm>> {
    if x.is_zero() {
        return Err(Error::ZeroArg);
    }
    let view = tt_view(x, sys)?;
    Ok((0..=view.len()).rev().map(|k| from_tt_view(&view[..k], sys)).collect())
}

/// Leading principal part of a nonzero value (without its coefficient).
pub fn head(x: &OrdTerm, sys: SystemId) -> Result<OrdTerm> {
    if x.is_zero() {
        return Err(Error::ZeroArg);
    }
    let view = tt_view(x, sys)?;
    let p = &view[0];
    Ok(principal_of(p, sys))
}

/// Last principal part of a nonzero value (without its coefficient).
pub fn tail(x: &OrdTerm, sys: SystemId) -> Result<OrdTerm> {
    if x.is_zero() {
        return Err(Error::ZeroArg);
    }
    let view = tt_view(x, sys)?;
    Ok(principal_of(view.last().unwrap(), sys))
}

fn principal_of(p: &TtPart, sys: SystemId) -> OrdTerm {
    tt_principal(&p.sub, &p.arg, sys)
}

/// Reads a principal value as `θ̃_b(ξ)`; `1` is `θ̃_1(0)`.
fn as_tt(z: &OrdTerm, sys: SystemId) -> Result<(OrdTerm, OrdTerm)> {
    if z.as_nat() == Some(1) {
        return Ok((OrdTerm::one(), OrdTerm::zero()));
    }
    tt_parts_of_principal(z, sys).ok_or_else(|| Error::NotPrincipal(z.to_string()))
}

/// `θ̃_{-c}(z)` for a principal value `z = θ̃_b(ξ)`.
pub fn theta_tilde_inv(c: &OrdTerm, z: &OrdTerm, sys: SystemId) -> Result<OrdTerm> {
    if c.is_zero() {
        return Ok(z.clone());
    }
    let (b, xi) = as_tt(z, sys)?;
    if compare(sys, &b, c)? != Ordering::Less {
        let d = sub_left(&b, c, sys)?;
        return theta_tilde(&d, &xi, sys);
    }
    if xi.is_zero() {
        return Ok(OrdTerm::zero());
    }
    let d = sub_left(c, &b, sys)?;
    theta_tilde_inv(&d, &head(&xi, sys)?, sys)
}

/// All subterms strictly below `bound`.
pub fn subterms_below(t: &OrdTerm, bound: &OrdTerm, sys: SystemId) -> Result<BTreeSet<OrdTerm>> {
    let mut out = BTreeSet::new();
    for s in t.subterms() {
        if compare(sys, &s, bound)? == Ordering::Less {
            out.insert(s);
        }
    }
    Ok(out)
}

/// `p·a` for a principal `p`.  Λ and θ̃-principals keep ordinal counts
/// (the value normal form); ordinary principals `ω^e` multiply out to
/// `Σ ω^{e+a_i}·n_i`.
fn scale_principal(p: &OrdTerm, a: &OrdTerm, sys: SystemId) -> Result<OrdTerm> {
    if let Some(n) = a.as_nat() {
        return Ok(if n == 0 { OrdTerm::zero() } else { OrdTerm::from_parts(vec![(p.clone(), Mult::Nat(n))]) });
    }
    if tt_parts_of_principal(p, sys).is_some() {
        return Ok(OrdTerm::from_parts(vec![(p.clone(), Mult::Ord(a.clone()))]));
    }
    let e = log_omega(p);
    let mut acc = OrdTerm::zero();
    for (q, m) in a.parts() {
        let ex = add(&e, &log_omega(&q), sys)?;
        let part = omega_pow(&ex, sys)?;
        let scaled = match m {
            Mult::Nat(n) => OrdTerm::from_parts(vec![(part, Mult::Nat(n))]),
            Mult::Ord(c) => scale_principal(&part, &c, sys)?,
        };
        acc = add(&acc, &scaled, sys)?;
    }
    Ok(acc)
}

/// `x·a`.
pub(crate) fn scale(x: &OrdTerm, a: &OrdTerm, sys: SystemId) -> Result<OrdTerm> {
    if x.is_zero() || a.is_zero() {
        return Ok(OrdTerm::zero());
    }
    let parts = x.parts();
    if parts.len() == 1 {
        let (p, m) = &parts[0];
        return match (m, a.as_nat()) {
            (Mult::Nat(k), Some(n)) => Ok(OrdTerm::from_parts(vec![(p.clone(), Mult::Nat(k.saturating_mul(n)))])),
            (Mult::Nat(1), None) => scale_principal(p, a, sys),
            _ => Err(Error::InvalidTerm(format!("unsupported product ({x}) * ({a})"))),
        };
    }
    // (p·k + r)·n = p·(k·n) + r for natural n ≥ 1.
    match a.as_nat() {
        Some(n) => {
            let (p, m) = &parts[0];
            let k = match m {
                Mult::Nat(k) => *k,
                Mult::Ord(_) => return Err(Error::InvalidTerm(format!("unsupported product ({x}) * ({a})"))),
            };
            let mut out = vec![(p.clone(), Mult::Nat(k.saturating_mul(n)))];
            out.extend_from_slice(&parts[1..]);
            Ok(OrdTerm::from_parts(out))
        }
        None => Err(Error::InvalidTerm(format!("unsupported product ({x}) * ({a})"))),
    }
}

/// Rewrites an arbitrary term bottom-up into normal form.  Idempotent.
pub fn normalize(t: &OrdTerm, sys: SystemId) -> Result<OrdTerm> {
    stacker::maybe_grow(64 * 1024, 2 * 1024 * 1024, || normalize_inner(t, sys))
}

fn normalize_inner(t: &OrdTerm, sys: SystemId) -> Result<OrdTerm> {
    Ok(match t.node() {
        Node::Zero | Node::Const(_) => t.clone(),
        Node::Sum(parts) => {
            let mut acc = OrdTerm::zero();
            for (p, m) in parts {
                let p = normalize(p, sys)?;
                let piece = match m {
                    Mult::Nat(n) => scale(&p, &OrdTerm::nat(*n), sys)?,
                    Mult::Ord(c) => scale(&p, &normalize(c, sys)?, sys)?,
                };
                acc = add(&acc, &piece, sys)?;
            }
            acc
        }
        Node::Veblen(b, x) => veblen(&normalize(b, sys)?, &normalize(x, sys)?, sys)?,
        Node::ThetaTilde(b, x) => theta_tilde(&normalize(b, sys)?, &normalize(x, sys)?, sys)?,
        Node::Psi(s, idx, a) => {
            let idx = normalize_index(idx, sys)?;
            OrdTerm::psi(normalize(s, sys)?, idx, normalize(a, sys)?)
        }
        Node::NextReg(b) => {
            let b = normalize(b, sys)?;
            if b.is_const(Const::BigS) {
                OrdTerm::konst(Const::BigK)
            } else {
                OrdTerm::from_node(Node::NextReg(b))
            }
        }
        Node::Dagger(b) => OrdTerm::from_node(Node::Dagger(normalize(b, sys)?)),
        Node::IOf(b) => OrdTerm::from_node(Node::IOf(normalize(b, sys)?)),
    })
}

pub(crate) fn normalize_index(idx: &PsiIndex, sys: SystemId) -> Result<PsiIndex> {
    Ok(match idx {
        PsiIndex::None => PsiIndex::None,
        PsiIndex::Ord(v) => {
            let v = normalize(v, sys)?;
            if v.is_zero() {
                PsiIndex::None
            } else {
                PsiIndex::Ord(v)
            }
        }
        PsiIndex::Vec(vs) => {
            let vs = vs.iter().map(|v| normalize(v, sys)).collect::<Result<Vec<_>>>()?;
            if vs.iter().all(OrdTerm::is_zero) {
                PsiIndex::None
            } else {
                PsiIndex::Vec(vs)
            }
        }
        PsiIndex::Fn(f) => {
            let mut entries = Vec::new();
            for (k, v) in f.entries() {
                entries.push((normalize(k, sys)?, normalize(v, sys)?));
            }
            let f = FiniteFn::from_entries(entries, sys)?;
            if f.is_empty() {
                PsiIndex::None
            } else {
                PsiIndex::Fn(f)
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::parse;

    fn p(s: &str) -> OrdTerm {
        parse(s, SystemId::Pi11).unwrap()
    }

    #[test]
    fn addition_absorbs_smaller_leading_parts() {
        let sys = SystemId::BH;
        let w = OrdTerm::omega();
        let w2 = omega_pow(&OrdTerm::nat(2), sys).unwrap();
        assert_eq!(add(&w, &w2, sys).unwrap(), w2);
        let s = add(&w2, &w, sys).unwrap();
        assert_eq!(s.parts().len(), 2);
        assert!(!is_dotted(&w, &w2, sys).unwrap());
        assert!(is_dotted(&w2, &w, sys).unwrap());
        assert_eq!(natural_sum(&w, &w2, sys).unwrap(), s);
    }

    #[test]
    fn left_subtraction_inverts_addition() {
        let sys = SystemId::BH;
        let w = OrdTerm::omega();
        let a = add(&w, &OrdTerm::nat(3), sys).unwrap();
        let c = add(&omega_pow(&OrdTerm::nat(2), sys).unwrap(), &OrdTerm::one(), sys).unwrap();
        let d = sub_left(&c, &a, sys).unwrap();
        assert_eq!(add(&a, &d, sys).unwrap(), c);
        assert!(sub_left(&a, &c, sys).is_err());
    }

    #[test]
    fn theta_unfolds_iterates() {
        let sys = SystemId::BH;
        assert_eq!(theta(&OrdTerm::zero(), &OrdTerm::omega(), sys).unwrap(), OrdTerm::omega());
        let ww = omega_pow(&OrdTerm::omega(), sys).unwrap();
        assert_eq!(theta(&OrdTerm::nat(2), &OrdTerm::one(), sys).unwrap(), ww);
        // θ_{ω^c}(a) = φ_c(a)
        let c = OrdTerm::nat(2);
        let wc = omega_pow(&c, sys).unwrap();
        assert_eq!(theta(&wc, &OrdTerm::one(), sys).unwrap(), veblen(&c, &OrdTerm::one(), sys).unwrap());
        let big = OrdTerm::nat(100_000);
        assert!(matches!(theta(&big, &OrdTerm::zero(), sys), Err(Error::TooDeep(_))));
    }

    #[test]
    fn theta_tilde_inverse_cases() {
        let sys = SystemId::Pi11;
        let x = p("t~(2, Om)");
        let b = OrdTerm::nat(2);
        assert_eq!(theta_tilde_inv(&b, &x, sys).unwrap(), p("Om"));
        let z = p("t~(2, 0)");
        assert_eq!(theta_tilde_inv(&OrdTerm::nat(3), &z, sys).unwrap(), OrdTerm::zero());
        // Head descent: θ̃_{-3}(θ̃_2(θ̃_5(Ω) + 1)) = θ̃_{-1}(θ̃_5(Ω)) = θ̃_4(Ω).
        let z = p("t~(2, t~(5, Om) + 1)");
        assert_eq!(theta_tilde_inv(&OrdTerm::nat(3), &z, sys).unwrap(), p("t~(4, Om)"));
        assert!(matches!(theta_tilde_inv(&OrdTerm::one(), &p("Om"), sys), Err(Error::NotPrincipal(_))));
    }

    #[test]
    fn segments_cut_at_parts() {
        let sys = SystemId::Pi11;
        let x = p("t~(3, 0) * 2 + t~(2, 0)");
        let segs = segments(&x, sys).unwrap();
        assert_eq!(segs, vec![x.clone(), p("t~(3,0) * 2"), OrdTerm::zero()]);
        assert_eq!(tail(&x, sys).unwrap(), p("t~(2,0)"));
        assert_eq!(head(&x, sys).unwrap(), p("t~(3,0)"));
        assert_eq!(segments(&OrdTerm::zero(), sys), Err(Error::ZeroArg));
    }

    #[test]
    fn lambda_is_theta_tilde_one_of_one() {
        let sys = SystemId::Pi11;
        assert_eq!(theta_tilde(&OrdTerm::one(), &OrdTerm::one(), sys).unwrap(), p("K"));
        assert_eq!(theta_tilde(&OrdTerm::one(), &OrdTerm::zero(), sys).unwrap(), OrdTerm::one());
        assert_eq!(theta_tilde(&OrdTerm::zero(), &p("Om"), sys).unwrap(), p("Om"));
    }
}
