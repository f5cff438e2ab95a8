//! The shared term grammar.
//!
//! Terms are immutable, reference-counted trees.  Each node caches its
//! constructor count and a structural hash, so equality tests on distinct
//! allocations are usually decided without walking the tree.

mod arith;
mod parse;
mod render;

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::finite_fn::FiniteFn;

pub use arith::{
    add, head, is_dotted, natural_sum, normalize, omega_pow, segments, sub_left, subterms_below,
    tail, theta, theta_tilde, theta_tilde_inv, tt_principal, tt_view, veblen, TtPart,
};
pub(crate) use arith::{log_omega, normalize_index, scale};
pub use parse::parse;
pub use render::{render, Style};

/// The named constants: Ω, 𝕊, 𝕂 and 𝕀.
///
/// The derived `Ord` is only a structural tie-break; the ordinal order of
/// constants is decided by [`crate::SystemId::const_rank`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Const {
    Omega,
    BigS,
    BigK,
    BigI,
}

impl Const {
    pub fn symbol(self) -> &'static str {
        match self {
            Const::Omega => "Om",
            Const::BigS => "S",
            Const::BigK => "K",
            Const::BigI => "I",
        }
    }
}

/// Repetition count of a sum part.
///
/// `Ord` counts only occur in the θ̃-normal form of finite-function values
/// (`θ̃_1(ξ)·a` with `ω ≤ a < Λ`); everywhere else counts are natural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Mult {
    Nat(u64),
    Ord(OrdTerm),
}

impl Mult {
    pub fn one() -> Mult {
        Mult::Nat(1)
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Mult::Nat(1))
    }

    /// The count as a term.
    pub fn to_term(&self) -> OrdTerm {
        match self {
            Mult::Nat(n) => OrdTerm::nat(*n),
            Mult::Ord(t) => t.clone(),
        }
    }

    /// Canonical count for a nonzero term: natural numbers become `Nat`.
    pub fn from_term(t: &OrdTerm) -> Mult {
        match t.as_nat() {
            Some(n) => Mult::Nat(n),
            None => Mult::Ord(t.clone()),
        }
    }
}

/// Superscript of a ψ-term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PsiIndex {
    None,
    Ord(OrdTerm),
    Vec(Vec<OrdTerm>),
    Fn(FiniteFn),
}

impl PsiIndex {
    pub fn is_none(&self) -> bool {
        matches!(self, PsiIndex::None)
    }

    /// Terms whose hull membership the index contributes: the ordinal
    /// superscript, the vector entries, or keys and value atoms of a
    /// finite function.
    pub fn components(&self) -> Vec<OrdTerm> {
        match self {
            PsiIndex::None => Vec::new(),
            PsiIndex::Ord(t) => vec![t.clone()],
            PsiIndex::Vec(v) => v.clone(),
            PsiIndex::Fn(f) => f.entries().iter().flat_map(|(k, v)| [k.clone(), v.clone()]).collect(),
        }
    }

    fn len(&self) -> u64 {
        match self {
            PsiIndex::None => 0,
            PsiIndex::Ord(t) => t.len(),
            PsiIndex::Vec(v) => v.iter().map(OrdTerm::len).sum(),
            PsiIndex::Fn(f) => f.entries().iter().map(|(k, v)| k.len() + v.len()).sum(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Zero,
    Const(Const),
    /// Parts strictly decreasing under the system order, each additive
    /// principal, equal parts merged into their count.
    Sum(Vec<(OrdTerm, Mult)>),
    Veblen(OrdTerm, OrdTerm),
    ThetaTilde(OrdTerm, OrdTerm),
    Psi(OrdTerm, PsiIndex, OrdTerm),
    NextReg(OrdTerm),
    Dagger(OrdTerm),
    IOf(OrdTerm),
}

impl Node {
    fn tag(&self) -> u8 {
        match self {
            Node::Zero => 0,
            Node::Const(_) => 1,
            Node::Sum(_) => 2,
            Node::Veblen(..) => 3,
            Node::ThetaTilde(..) => 4,
            Node::Psi(..) => 5,
            Node::NextReg(_) => 6,
            Node::Dagger(_) => 7,
            Node::IOf(_) => 8,
        }
    }
}

struct Inner {
    node: Node,
    len: u64,
    hash: u64,
}

/// An ordinal term.  Cloning is a reference-count bump.
#[derive(Clone)]
pub struct OrdTerm(Arc<Inner>);

impl OrdTerm {
    /// Wraps a node without normalizing it.  Use [`normalize`] or the
    /// arithmetic constructors to obtain normal forms.
    pub fn from_node(node: Node) -> OrdTerm {
        let len = node_len(&node);
        let mut h = DefaultHasher::new();
        node.tag().hash(&mut h);
        match &node {
            Node::Zero => {}
            Node::Const(c) => c.hash(&mut h),
            Node::Sum(parts) => {
                for (p, m) in parts {
                    p.hash_value().hash(&mut h);
                    match m {
                        Mult::Nat(n) => n.hash(&mut h),
                        Mult::Ord(t) => t.hash_value().hash(&mut h),
                    }
                }
            }
            Node::Veblen(b, x) | Node::ThetaTilde(b, x) => {
                b.hash_value().hash(&mut h);
                x.hash_value().hash(&mut h);
            }
            Node::Psi(s, idx, a) => {
                s.hash_value().hash(&mut h);
                idx.hash(&mut h);
                a.hash_value().hash(&mut h);
            }
            Node::NextReg(b) | Node::Dagger(b) | Node::IOf(b) => b.hash_value().hash(&mut h),
        }
        OrdTerm(Arc::new(Inner { node, len, hash: h.finish() }))
    }

    pub fn zero() -> OrdTerm {
        OrdTerm::from_node(Node::Zero)
    }

    pub fn konst(c: Const) -> OrdTerm {
        OrdTerm::from_node(Node::Const(c))
    }

    /// `1 = φ(0, 0)`.
    pub fn one() -> OrdTerm {
        OrdTerm::from_node(Node::Veblen(OrdTerm::zero(), OrdTerm::zero()))
    }

    /// `ω = φ(0, 1)`.
    pub fn omega() -> OrdTerm {
        OrdTerm::from_node(Node::Veblen(OrdTerm::zero(), OrdTerm::one()))
    }

    pub fn nat(n: u64) -> OrdTerm {
        match n {
            0 => OrdTerm::zero(),
            1 => OrdTerm::one(),
            _ => OrdTerm::from_node(Node::Sum(vec![(OrdTerm::one(), Mult::Nat(n))])),
        }
    }

    pub fn psi(sub: OrdTerm, index: PsiIndex, arg: OrdTerm) -> OrdTerm {
        OrdTerm::from_node(Node::Psi(sub, index, arg))
    }

    /// Builds a sum from parts already in normal order; a lone part with
    /// count one is returned as itself.
    pub fn from_parts(mut parts: Vec<(OrdTerm, Mult)>) -> OrdTerm {
        debug_assert!(parts.iter().all(|(p, m)| p.is_principal() && !matches!(m, Mult::Nat(0))));
        match parts.len() {
            0 => OrdTerm::zero(),
            1 if parts[0].1.is_one() => parts.pop().unwrap().0,
            _ => OrdTerm::from_node(Node::Sum(parts)),
        }
    }

    pub fn node(&self) -> &Node {
        &self.0.node
    }

    /// Constructor count.
    pub fn len(&self) -> u64 {
        self.0.len
    }

    pub fn hash_value(&self) -> u64 {
        self.0.hash
    }

    pub fn ptr_eq(&self, other: &OrdTerm) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.node(), Node::Zero)
    }

    pub fn is_const(&self, c: Const) -> bool {
        matches!(self.node(), Node::Const(d) if *d == c)
    }

    pub fn is_principal(&self) -> bool {
        !matches!(self.node(), Node::Zero | Node::Sum(_))
    }

    /// Strongly critical symbols: constants and the ψ / ⁺ / † / 𝕀[·] atoms.
    pub fn is_atom(&self) -> bool {
        matches!(
            self.node(),
            Node::Const(_) | Node::Psi(..) | Node::NextReg(_) | Node::Dagger(_) | Node::IOf(_)
        )
    }

    pub fn is_psi(&self) -> bool {
        matches!(self.node(), Node::Psi(..))
    }

    /// The additive decomposition: `[]` for zero, `[(self, 1)]` for a
    /// principal term.
    pub fn parts(&self) -> Vec<(OrdTerm, Mult)> {
        match self.node() {
            Node::Zero => Vec::new(),
            Node::Sum(p) => p.clone(),
            _ => vec![(self.clone(), Mult::one())],
        }
    }

    /// `Some(n)` when the term is the numeral `n`.
    pub fn as_nat(&self) -> Option<u64> {
        match self.node() {
            Node::Zero => Some(0),
            Node::Veblen(b, x) if b.is_zero() && x.is_zero() => Some(1),
            Node::Sum(p) if p.len() == 1 => match &p[0] {
                (q, Mult::Nat(n)) if q.as_nat() == Some(1) => Some(*n),
                _ => None,
            },
            _ => None,
        }
    }

    /// Immediate subterms (index components included, counts as terms).
    pub fn children(&self) -> Vec<OrdTerm> {
        match self.node() {
            Node::Zero | Node::Const(_) => Vec::new(),
            Node::Sum(parts) => {
                let mut out = Vec::new();
                for (p, m) in parts {
                    out.push(p.clone());
                    if let Mult::Ord(t) = m {
                        out.push(t.clone());
                    }
                }
                out
            }
            Node::Veblen(b, x) | Node::ThetaTilde(b, x) => vec![b.clone(), x.clone()],
            Node::Psi(s, idx, a) => {
                let mut out = vec![s.clone()];
                out.extend(idx.components());
                out.push(a.clone());
                out
            }
            Node::NextReg(b) | Node::Dagger(b) | Node::IOf(b) => vec![b.clone()],
        }
    }

    /// Every subterm including the term itself, without duplicates, in
    /// post-order (children before parents).
    pub fn subterms(&self) -> Vec<OrdTerm> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        let mut stack = vec![(self.clone(), false)];
        while let Some((t, expanded)) = stack.pop() {
            if expanded {
                if seen.insert(t.clone()) {
                    out.push(t);
                }
                continue;
            }
            if seen.contains(&t) {
                continue;
            }
            stack.push((t.clone(), true));
            for c in t.children().into_iter().rev() {
                stack.push((c, false));
            }
        }
        out
    }
}

fn node_len(node: &Node) -> u64 {
    match node {
        Node::Zero | Node::Const(_) => 1,
        Node::Sum(parts) => {
            1 + parts
                .iter()
                .map(|(p, m)| match m {
                    Mult::Nat(n) => p.len().saturating_mul(*n),
                    Mult::Ord(t) => p.len() + t.len(),
                })
                .fold(0u64, u64::saturating_add)
        }
        Node::Veblen(b, x) | Node::ThetaTilde(b, x) => 1 + b.len() + x.len(),
        Node::Psi(s, idx, a) => 1 + s.len() + idx.len() + a.len(),
        Node::NextReg(b) | Node::Dagger(b) | Node::IOf(b) => 1 + b.len(),
    }
}

// Deeply nested terms would otherwise be torn down recursively.
impl Drop for Inner {
    fn drop(&mut self) {
        let mut stack = Vec::new();
        take_children(&mut self.node, &mut stack);
        while let Some(t) = stack.pop() {
            if let Some(mut inner) = Arc::into_inner(t.0) {
                take_children(&mut inner.node, &mut stack);
            }
        }
    }
}

fn take_children(node: &mut Node, out: &mut Vec<OrdTerm>) {
    match std::mem::replace(node, Node::Zero) {
        Node::Zero | Node::Const(_) => {}
        Node::Sum(parts) => {
            for (p, m) in parts {
                out.push(p);
                if let Mult::Ord(t) = m {
                    out.push(t);
                }
            }
        }
        Node::Veblen(b, x) | Node::ThetaTilde(b, x) => {
            out.push(b);
            out.push(x);
        }
        Node::Psi(s, idx, a) => {
            out.push(s);
            out.push(a);
            match idx {
                PsiIndex::None => {}
                PsiIndex::Ord(t) => out.push(t),
                PsiIndex::Vec(v) => out.extend(v),
                PsiIndex::Fn(f) => {
                    for (k, v) in f.into_entries() {
                        out.push(k);
                        out.push(v);
                    }
                }
            }
        }
        Node::NextReg(b) | Node::Dagger(b) | Node::IOf(b) => out.push(b),
    }
}

impl PartialEq for OrdTerm {
    fn eq(&self, other: &OrdTerm) -> bool {
        if self.ptr_eq(other) {
            return true;
        }
        if self.0.hash != other.0.hash || self.0.len != other.0.len {
            return false;
        }
        stacker::maybe_grow(32 * 1024, 1024 * 1024, || self.0.node == other.0.node)
    }
}

impl Eq for OrdTerm {}

impl Hash for OrdTerm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash.hash(state);
    }
}

/// Structural order: length, then constructor tag, then children.  This
/// is *not* the ordinal order; it only gives sets and tie-breaks a
/// deterministic shape.
impl Ord for OrdTerm {
    fn cmp(&self, other: &OrdTerm) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        stacker::maybe_grow(32 * 1024, 1024 * 1024, || structural_cmp(self, other))
    }
}

impl PartialOrd for OrdTerm {
    fn partial_cmp(&self, other: &OrdTerm) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn structural_cmp(a: &OrdTerm, b: &OrdTerm) -> Ordering {
    a.len()
        .cmp(&b.len())
        .then(a.node().tag().cmp(&b.node().tag()))
        .then_with(|| match (a.node(), b.node()) {
            (Node::Const(c), Node::Const(d)) => c.cmp(d),
            (Node::Sum(p), Node::Sum(q)) => {
                for ((x, m), (y, n)) in p.iter().zip(q) {
                    let c = x.cmp(y).then_with(|| mult_structural(m, n));
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                p.len().cmp(&q.len())
            }
            (Node::Psi(s, i, x), Node::Psi(t, j, y)) => {
                s.cmp(t).then_with(|| index_structural(i, j)).then_with(|| x.cmp(y))
            }
            _ => a.children().cmp(&b.children()),
        })
}

fn mult_structural(m: &Mult, n: &Mult) -> Ordering {
    match (m, n) {
        (Mult::Nat(a), Mult::Nat(b)) => a.cmp(b),
        (Mult::Nat(_), Mult::Ord(_)) => Ordering::Less,
        (Mult::Ord(_), Mult::Nat(_)) => Ordering::Greater,
        (Mult::Ord(a), Mult::Ord(b)) => a.cmp(b),
    }
}

fn index_structural(i: &PsiIndex, j: &PsiIndex) -> Ordering {
    fn tag(i: &PsiIndex) -> u8 {
        match i {
            PsiIndex::None => 0,
            PsiIndex::Ord(_) => 1,
            PsiIndex::Vec(_) => 2,
            PsiIndex::Fn(_) => 3,
        }
    }
    tag(i).cmp(&tag(j)).then_with(|| i.components().cmp(&j.components()))
}

impl fmt::Display for OrdTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self, Style::Ascii))
    }
}

impl fmt::Debug for OrdTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self, Style::Ascii))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lengths_count_constructors() {
        assert_eq!(OrdTerm::zero().len(), 1);
        let t = OrdTerm::from_node(Node::Veblen(OrdTerm::zero(), OrdTerm::konst(Const::Omega)));
        assert_eq!(t.len(), 3);
        assert_eq!(OrdTerm::one().len(), 3);
        assert_eq!(OrdTerm::nat(3).len(), 10);
    }

    #[test]
    fn numerals_round_trip() {
        for n in 0..6 {
            assert_eq!(OrdTerm::nat(n).as_nat(), Some(n));
        }
        assert_eq!(OrdTerm::omega().as_nat(), None);
    }

    #[test]
    fn deep_terms_drop_without_recursion() {
        let mut t = OrdTerm::zero();
        for _ in 0..200_000 {
            t = OrdTerm::from_node(Node::Dagger(t));
        }
        assert_eq!(t.len(), 200_001);
        drop(t);
    }

    #[test]
    fn subterms_are_post_order_and_unique() {
        let one = OrdTerm::one();
        let subs = one.subterms();
        assert_eq!(subs.len(), 2);
        assert!(subs[0].is_zero());
        assert_eq!(subs[1], one);
    }
}
