//! Syntactic validity of terms, system by system.
//!
//! A term is valid when it is in normal form, every constructor and
//! constant belongs to the system, and every ψ-subterm satisfies its
//! system's side conditions:
//!
//! * **BH** — `ψ_Ω(a)` needs `a ∈ H_a(0)`, which rejects redundant
//!   notations such as `ψ_Ω(ψ_Ω(Ω))`.
//! * **Π₃** — `κ = ψ_σ^ν(b)` needs `{σ, ν, b} ⊂ H_b(κ)`, `ν < m₂(σ)`,
//!   `SC(ν) ⊂ κ` and `ν ≤ b`.
//! * **Π_N** — the superscript vector arises from `m(σ)` by one of the
//!   three constructor clauses (all zero, a step down at some k, or a
//!   tail below `ξ_k`), plus the hull condition.
//! * **Π¹₁** — `ψ_𝕊^g` has a one-point g with a value below `ε_{𝕂+1}`;
//!   `ψ_σ^g` for σ ∈ Ψ_𝕊 has g stepped down from `m(σ)` and
//!   `SC(g) ⊂ M_α`; atoms of a collapsed zone must be collapses of
//!   valid terms of `M_ρ`.
//! * **𝕀** — `ψ_𝕊^f` for a successor stable 𝕊 needs
//!   `SC(f) ⊂ H_a(SC(a))`; collapses below a Ψ-term step down as in Π¹₁
//!   with g irreducible; limits of stables are never subscripts.

use std::collections::HashSet;

use crate::collapse::{in_domain, uncollapse_atom};
use crate::error::Result;
use crate::finite_fn::{value_coefficients_ok, FiniteFn};
use crate::hull::{in_hull, in_hull_gens, sc, sc_fn};
use crate::order::{address, is_stab_psi, lambda_blocks, le, less_vec, lt};
use crate::systems::attributes::{in_psi_class, m2, m_vec, p0, MAttr};
use crate::systems::{SystemId, Verdict};
use crate::terms::{add, is_dotted, normalize, scale, sub_left, theta_tilde, Const, Mult, Node, OrdTerm, PsiIndex};

type Reasons = Vec<(String, String)>;

/// Checks `t` and all of its subterms.
pub fn validate(sys: SystemId, t: &OrdTerm) -> Verdict {
    let mut v = Validator { sys, reasons: Vec::new(), done: HashSet::new() };
    match normalize(t, sys) {
        Ok(n) if &n == t => {}
        Ok(_) => v.fail("normal-form", "$"),
        Err(e) => v.fail(&format!("normal-form:{}", e.kind()), "$"),
    }
    v.term(t, "$");
    Verdict::from_reasons(v.reasons)
}

/// Rules violated by the outermost constructor of `t` alone, assuming
/// its subterms are valid.
pub fn validate_node(sys: SystemId, t: &OrdTerm) -> Vec<String> {
    let mut v = Validator { sys, reasons: Vec::new(), done: HashSet::new() };
    v.node(t, "$");
    v.reasons.into_iter().map(|(r, _)| r).collect()
}

struct Validator {
    sys: SystemId,
    reasons: Reasons,
    done: HashSet<OrdTerm>,
}

impl Validator {
    fn fail(&mut self, rule: &str, path: &str) {
        self.reasons.push((rule.to_string(), path.to_string()));
    }

    /// Records a rule failure when `check` is false or errors.
    fn require(&mut self, rule: &str, path: &str, check: Result<bool>) {
        match check {
            Ok(true) => {}
            Ok(false) => self.fail(rule, path),
            Err(e) => self.fail(&format!("{rule}:{}", e.kind()), path),
        }
    }

    fn term(&mut self, t: &OrdTerm, path: &str) {
        if self.done.contains(t) {
            return;
        }
        stacker::maybe_grow(64 * 1024, 2 * 1024 * 1024, || {
            let before = self.reasons.len();
            match t.node() {
                Node::Sum(parts) => {
                    for (i, (p, m)) in parts.iter().enumerate() {
                        self.term(p, &format!("{path}.part[{i}]"));
                        if matches!(m, Mult::Ord(_)) {
                            self.fail("ordinal-count-outside-index", &format!("{path}.part[{i}]"));
                        }
                    }
                }
                Node::Veblen(b, x) => {
                    self.term(b, &format!("{path}.sub"));
                    self.term(x, &format!("{path}.arg"));
                }
                Node::ThetaTilde(..) => self.fail("theta-tilde-outside-index", path),
                Node::Psi(s, idx, a) => {
                    self.term(s, &format!("{path}.sub"));
                    self.term(a, &format!("{path}.arg"));
                    match idx {
                        PsiIndex::None => {}
                        PsiIndex::Ord(nu) => self.term(nu, &format!("{path}.nu")),
                        PsiIndex::Vec(vs) => {
                            for (i, x) in vs.iter().enumerate() {
                                self.term(x, &format!("{path}.nu[{i}]"));
                            }
                        }
                        PsiIndex::Fn(f) => self.finite_fn(f, &format!("{path}.f")),
                    }
                }
                Node::NextReg(b) | Node::Dagger(b) | Node::IOf(b) => self.term(b, &format!("{path}.base")),
                Node::Zero | Node::Const(_) => {}
            }
            self.node(t, path);
            if self.reasons.len() == before {
                self.done.insert(t.clone());
            }
        })
    }

    /// Keys are terms below Λ; values are θ̃-normal forms whose atoms are
    /// terms.
    fn finite_fn(&mut self, f: &FiniteFn, path: &str) {
        let lam = OrdTerm::konst(self.sys.lambda());
        for (i, (k, v)) in f.entries().iter().enumerate() {
            let kp = format!("{path}.key[{i}]");
            self.term(k, &kp);
            self.require("fn-key-below-lambda", &kp, lt(self.sys, k, &lam));
            let vp = format!("{path}.value[{i}]");
            self.require("fn-value-normal-form", &vp, value_coefficients_ok(v, self.sys));
            for s in sc(v, self.sys) {
                self.term(&s, &vp);
            }
        }
    }

    fn node(&mut self, t: &OrdTerm, path: &str) {
        let sys = self.sys;
        match t.node() {
            Node::Zero | Node::Sum(_) | Node::Veblen(..) | Node::ThetaTilde(..) => {}
            Node::Const(c) => {
                if sys.const_rank(*c).is_none() {
                    self.fail("constant-not-in-system", path);
                }
            }
            Node::NextReg(b) => {
                if sys != SystemId::Pi11 {
                    self.fail("constructor-not-in-system", path);
                } else if !in_psi_class(b, sys) {
                    self.fail("pi11-successor-base", path);
                }
            }
            Node::Dagger(b) => {
                if sys != SystemId::Stab {
                    self.fail("constructor-not-in-system", path);
                } else if !stab_dagger_base(b) {
                    self.fail("stab-dagger-base", path);
                } else {
                    self.zone(t, path);
                }
            }
            Node::IOf(b) => {
                if sys != SystemId::Stab {
                    self.fail("constructor-not-in-system", path);
                } else if !in_psi_class(b, sys) {
                    self.fail("stab-iof-base", path);
                } else {
                    self.zone(t, path);
                }
            }
            Node::Psi(s, idx, a) => match sys {
                SystemId::BH => self.psi_bh(t, s, idx, a, path),
                SystemId::Pi3 => self.psi_pi3(t, s, idx, a, path),
                SystemId::PiN(_) => self.psi_pin(t, s, idx, a, path),
                SystemId::Pi11 => self.psi_pi11(t, s, idx, a, path),
                SystemId::Stab => self.psi_stab(t, s, idx, a, path),
            },
        }
    }

    /// Atoms of a collapsed zone are valid when their preimage is a
    /// valid member of the collapse's domain.
    fn zone(&mut self, t: &OrdTerm, path: &str) {
        let sys = self.sys;
        let Some(r) = address(sys, t).last().cloned() else {
            return;
        };
        match uncollapse_atom(t, &r, sys) {
            Ok(pre) => {
                let v = validate(sys, &pre);
                if !v.ok {
                    self.fail("zone-preimage-invalid", path);
                }
                self.require("zone-preimage-in-domain", path, in_domain(&pre, &r, sys));
            }
            Err(e) => self.fail(&format!("zone-anchor:{}", e.kind()), path),
        }
    }

    fn hull_all(&mut self, rule: &str, path: &str, ts: &[OrdTerm], a: &OrdTerm, delta: &OrdTerm) {
        let sys = self.sys;
        let check = ts.iter().try_fold(true, |acc, x| Ok(acc && in_hull(x, a, delta, sys)?));
        self.require(rule, path, check);
    }

    fn psi_bh(&mut self, _t: &OrdTerm, s: &OrdTerm, idx: &PsiIndex, a: &OrdTerm, path: &str) {
        if !s.is_const(Const::Omega) {
            self.fail("bh-subscript-omega", path);
        }
        if !idx.is_none() {
            self.fail("bh-index-none", path);
        }
        let zero = OrdTerm::zero();
        self.require("bh-arg-in-hull", path, in_hull(a, a, &zero, SystemId::BH));
    }

    fn psi_pi3(&mut self, t: &OrdTerm, s: &OrdTerm, idx: &PsiIndex, b: &OrdTerm, path: &str) {
        let sys = self.sys;
        if !(s.is_const(Const::Omega) || s.is_const(Const::BigK) || s.is_psi()) {
            self.fail("pi3-subscript", path);
            return;
        }
        let nu = match idx {
            PsiIndex::None => OrdTerm::zero(),
            PsiIndex::Ord(nu) => nu.clone(),
            _ => {
                self.fail("pi3-index-kind", path);
                return;
            }
        };
        self.hull_all("pi3-hull", path, &[s.clone(), nu.clone(), b.clone()], b, t);
        let m = m2(s, sys).and_then(|m| m.above(&nu, sys));
        self.require("pi3-m2", path, m);
        let below = sc(&nu, sys).iter().try_fold(true, |acc, x| Ok(acc && lt(sys, x, t)?));
        self.require("pi3-sc-nu-below", path, below);
        self.require("pi3-nu-le-arg", path, le(sys, &nu, b));
    }

    fn psi_pin(&mut self, t: &OrdTerm, s: &OrdTerm, idx: &PsiIndex, b: &OrdTerm, path: &str) {
        let sys = self.sys;
        let n = sys.vec_arity().unwrap_or(0);
        let nu: Vec<OrdTerm> = match idx {
            PsiIndex::None => vec![OrdTerm::zero(); n],
            PsiIndex::Vec(v) if v.len() == n => v.clone(),
            _ => {
                self.fail("pin-index-arity", path);
                return;
            }
        };
        let xi = match m_vec(s, sys) {
            Ok(xi) => xi,
            Err(_) => {
                self.fail("pin-subscript", path);
                return;
            }
        };
        let mut gens = vec![s.clone(), b.clone()];
        gens.extend(nu.iter().cloned());
        self.hull_all("pin-hull", path, &gens, b, t);
        let shape = pin_shape_ok(&xi, &nu, b, s, sys);
        self.require("pin-index-shape", path, shape);
    }

    fn psi_pi11(&mut self, t: &OrdTerm, s: &OrdTerm, idx: &PsiIndex, a: &OrdTerm, path: &str) {
        let sys = self.sys;
        if matches!(s.node(), Node::NextReg(_)) {
            if !idx.is_none() {
                self.fail("pi11-index-none", path);
            }
            self.zone(t, path);
            return;
        }
        self.hull_all("pi11-hull", path, &[s.clone(), a.clone()], a, t);
        match s.node() {
            Node::Const(Const::Omega) | Node::Const(Const::BigK) => {
                if !idx.is_none() {
                    self.fail("pi11-index-none", path);
                }
            }
            Node::Const(Const::BigS) => {
                let g = match idx {
                    PsiIndex::Fn(g) if g.len() == 1 => g,
                    _ => {
                        self.fail("pi11-top-support", path);
                        return;
                    }
                };
                if !below_epsilon(&g.entries()[0].1) {
                    self.fail("pi11-top-value", path);
                }
                self.sc_in_m(t, g, "pi11-sc-g-in-m", path);
            }
            Node::Psi(..) if in_psi_class(s, sys) => {
                let g = fn_index(idx, sys);
                let f = fn_index(&m_index(s), sys);
                self.require("pi11-stepdown", path, stepdown_recipe(&f, &g, sys));
                self.sc_in_m(t, &g, "pi11-sc-g-in-m", path);
            }
            _ => self.fail("pi11-subscript", path),
        }
    }

    fn psi_stab(&mut self, t: &OrdTerm, s: &OrdTerm, idx: &PsiIndex, a: &OrdTerm, path: &str) {
        let sys = self.sys;
        if !address(sys, t).is_empty() {
            if is_limit_stable(s) {
                self.fail("stab-ls-subscript", path);
            }
            self.zone(t, path);
            return;
        }
        if is_limit_stable(s) {
            self.fail("stab-ls-subscript", path);
            return;
        }
        self.hull_all("stab-hull", path, &[s.clone(), a.clone()], a, t);
        match s.node() {
            Node::Const(Const::Omega) | Node::Const(Const::BigI) => {
                if !idx.is_none() {
                    self.fail("stab-index-none", path);
                }
            }
            Node::Dagger(_) => {
                let f = fn_index(idx, sys);
                if !matches!(idx, PsiIndex::None | PsiIndex::Fn(_)) {
                    self.fail("stab-index-kind", path);
                }
                let gens = sc(a, sys);
                let check = sc_fn(&f, sys)
                    .iter()
                    .try_fold(true, |acc, x| Ok(acc && in_hull_gens(x, a, &gens, sys)?));
                self.require("stab-top-sc-f", path, check);
            }
            Node::Psi(..) if in_psi_class(s, sys) => {
                let g = fn_index(idx, sys);
                let f = fn_index(&m_index(s), sys);
                self.require("stab-irreducible", path, g.is_irreducible(sys));
                self.require("stab-stepdown", path, stepdown_recipe(&f, &g, sys));
                self.sc_in_m(t, &g, "stab-sc-g-in-m", path);
            }
            _ => self.fail("stab-subscript", path),
        }
    }

    /// `SC(g) ⊂ M_α = H_{p₀(α)}(α)`.
    fn sc_in_m(&mut self, alpha: &OrdTerm, g: &FiniteFn, rule: &str, path: &str) {
        let sys = self.sys;
        let check = p0(alpha, sys).and_then(|b| {
            sc_fn(g, sys).iter().try_fold(true, |acc, x| Ok(acc && in_hull(x, &b, alpha, sys)?))
        });
        self.require(rule, path, check);
    }
}

fn m_index(s: &OrdTerm) -> PsiIndex {
    match s.node() {
        Node::Psi(_, idx, _) => idx.clone(),
        _ => PsiIndex::None,
    }
}

fn fn_index(idx: &PsiIndex, sys: SystemId) -> FiniteFn {
    match idx {
        PsiIndex::Fn(f) => f.clone(),
        _ => FiniteFn::empty(sys),
    }
}

/// `ψ_𝕀(a)` or `ψ_{𝕀[ρ]}(a)`: limits of stables.
fn is_limit_stable(t: &OrdTerm) -> bool {
    match t.node() {
        Node::Psi(s, ..) => s.is_const(Const::BigI) || matches!(s.node(), Node::IOf(_)),
        _ => false,
    }
}

/// `α†` exists for Ω, stables and the Ψ-terms below a stable.
fn stab_dagger_base(b: &OrdTerm) -> bool {
    b.is_const(Const::Omega) || matches!(b.node(), Node::Dagger(_)) || is_limit_stable(b) || is_stab_psi(b)
}

/// Values below `ε_{Λ+1}`: only θ̃₁, i.e. powers of Λ, occur.
fn below_epsilon(v: &OrdTerm) -> bool {
    v.subterms().iter().all(|s| match s.node() {
        Node::ThetaTilde(b, _) => b.as_nat() == Some(1),
        _ => true,
    })
}

/// g arises from `f = m(σ)` by stepping down: for some `c ∈ supp(f)` and
/// `d < c` with nothing of f or g strictly between, `g_d = f_d`,
/// `g(d) < f(d) + θ̃_{c−d}(f(c))·ω` and `g <^c f(c)`.  The empty g is
/// always allowed.
pub(crate) fn stepdown_recipe(f: &FiniteFn, g: &FiniteFn, sys: SystemId) -> Result<bool> {
    if g.is_empty() {
        return Ok(true);
    }
    let fkeys = f.supp();
    let gkeys = g.supp();
    for (i, c) in fkeys.iter().enumerate() {
        let p = if i > 0 { Some(fkeys[i - 1].clone()) } else { None };
        let mut lg = None;
        for k in &gkeys {
            if lt(sys, k, c)? {
                lg = Some(k.clone());
            }
        }
        let mut cands: Vec<OrdTerm> = Vec::new();
        if let Some(l) = &lg {
            if p.as_ref().map_or(Ok(true), |p| le(sys, p, l))? {
                cands.push(l.clone());
            }
        }
        match &p {
            Some(p) => cands.push(p.clone()),
            None if lg.is_none() && !c.is_zero() => cands.push(OrdTerm::zero()),
            None => {}
        }
        cands.dedup();
        for d in cands {
            if stepdown_at(f, g, c, &d, sys)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

fn stepdown_at(f: &FiniteFn, g: &FiniteFn, c: &OrdTerm, d: &OrdTerm, sys: SystemId) -> Result<bool> {
    if !lt(sys, d, c)? {
        return Ok(false);
    }
    if g.restrict_below(d, sys)? != f.restrict_below(d, sys)? {
        return Ok(false);
    }
    for k in g.supp() {
        if lt(sys, d, &k)? && lt(sys, &k, c)? {
            return Ok(false);
        }
    }
    let gap = sub_left(c, d, sys)?;
    let room = scale(&theta_tilde(&gap, &f.get(c), sys)?, &OrdTerm::omega(), sys)?;
    let bound = add(&f.get(d), &room, sys)?;
    if !lt(sys, &g.get(d), &bound)? {
        return Ok(false);
    }
    g.less_at(c, &f.get(c), sys)
}

/// The Π_N constructor clauses for `ν⃗` relative to `ξ⃗ = m(σ)`.
fn pin_shape_ok(xi: &[MAttr], nu: &[OrdTerm], a: &OrdTerm, sigma: &OrdTerm, sys: SystemId) -> Result<bool> {
    let n = nu.len();
    if nu.iter().all(OrdTerm::is_zero) {
        return Ok(true);
    }
    let same = |i: usize| matches!(&xi[i], MAttr::Ord(x) if *x == nu[i]);
    // step down at k: ν⃗ = (ξ₂, …, ξ_{k−1}, ξ_k ∔ Λ^{ξ_{k+1}}·c, 0, …, 0)
    for k in 0..n.saturating_sub(1) {
        let (MAttr::Ord(xk), MAttr::Ord(xk1)) = (&xi[k], &xi[k + 1]) else {
            continue;
        };
        if xk1.is_zero() || !(0..k).all(same) || !nu[k + 1..].iter().all(OrdTerm::is_zero) {
            continue;
        }
        let Ok(d) = sub_left(&nu[k], xk, sys) else {
            continue;
        };
        if d.is_zero() || add(xk, &d, sys)? != nu[k] || !is_dotted(xk, &d, sys)? {
            continue;
        }
        let blocks = lambda_blocks(&d, sys)?;
        if blocks.len() == 1 && blocks[0].0 == *xk1 && in_hull(&d, a, sigma, sys)? {
            return Ok(true);
        }
    }
    // μ⃗ * ν⃗ with (ν_k, …) < ξ_k
    for k in 0..n {
        if !(0..k).all(same) {
            continue;
        }
        let ok = match &xi[k] {
            MAttr::Top => true,
            MAttr::Ord(x) => less_vec(&nu[k..], x, n - k, sys)?,
        };
        if ok {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::parse;

    fn check(sys: SystemId, s: &str) -> Verdict {
        validate(sys, &parse(s, sys).unwrap())
    }

    #[test]
    fn bh_rules() {
        assert!(check(SystemId::BH, "psi(Om; 0)").ok);
        assert!(check(SystemId::BH, "psi(Om; psi(Om; 0))").ok);
        let v = check(SystemId::BH, "psi(Om; psi(Om; Om))");
        assert!(v.has_rule("bh-arg-in-hull"), "{v:?}");
        assert!(check(SystemId::BH, "K").has_rule("constant-not-in-system"));
    }

    #[test]
    fn pi3_rules() {
        let sys = SystemId::Pi3;
        assert!(check(sys, "psi(K; 0)").ok);
        assert!(check(sys, "psi(K, 1; 1)").ok);
        let v = check(sys, "psi(K, t~(0,2); 1)");
        assert!(v.has_rule("pi3-nu-le-arg"), "{v:?}");
        assert!(check(sys, "psi(Om, 1; 1)").has_rule("pi3-m2"));
    }

    #[test]
    fn theta_tilde_only_inside_values() {
        let v = check(SystemId::Pi11, "t~(1, Om)");
        assert!(v.has_rule("theta-tilde-outside-index"), "{v:?}");
    }

    #[test]
    fn pi11_top_and_stepdown() {
        let sys = SystemId::Pi11;
        assert!(check(sys, "psi(S, {0: K}; 0)").ok);
        assert!(check(sys, "psi(S; 0)").has_rule("pi11-top-support"));
        let rho = "psi(S, {0: K}; 0)";
        assert!(check(sys, &format!("psi({rho}; 1)")).ok);
        // ρ's own argument 0 is not below 0, so ρ is missing from the hull
        assert!(check(sys, &format!("psi({rho}; 0)")).has_rule("pi11-hull"));
        let v = check(sys, &format!("psi({rho}, {{0: K}}; 1)"));
        assert!(v.has_rule("pi11-stepdown"), "{v:?}");
    }

    #[test]
    fn stab_rules() {
        let sys = SystemId::Stab;
        assert!(check(sys, "psi(dag(Om); 0)").ok);
        assert!(check(sys, "dag(0)").has_rule("stab-dagger-base"));
        assert!(check(sys, "dag(I)").has_rule("stab-dagger-base"));
        assert!(check(sys, "psi(psi(I; 0); 0)").has_rule("stab-ls-subscript"));
        let rho = "psi(dag(Om); 0)";
        assert!(check(sys, &format!("dag({rho})")).ok);
        assert!(check(sys, &format!("I[{rho}]")).ok);
        assert!(check(sys, "I[Om]").has_rule("stab-iof-base"));
    }
}
