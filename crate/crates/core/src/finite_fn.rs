//! Finite functions `f : Λ → φ_Λ(0)` with finite support — the
//! superscripts of ψ in the Π¹₁ and 𝕀 systems — and their calculus:
//! restrictions, the domination relation `f <^c ξ`, special functions and
//! stepping down, irreducibility and the lexicographic order `<^b_lx`.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::order::{compare, sort_by_compare};
use crate::systems::SystemId;
use crate::terms::{
    add, segments, sub_left, tail, theta_tilde, theta_tilde_inv, tt_view, Const, Mult, OrdTerm,
};

/// A finite function, stored as its support with nonzero values, keys in
/// increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteFn {
    entries: Vec<(OrdTerm, OrdTerm)>,
    lambda: Const,
}

fn lt(sys: SystemId, a: &OrdTerm, b: &OrdTerm) -> Result<bool> {
    Ok(compare(sys, a, b)? == Ordering::Less)
}

impl FiniteFn {
    /// Entries exactly as given (unsorted, zeros kept); used by the parser
    /// before normalization.
    pub(crate) fn raw(entries: Vec<(OrdTerm, OrdTerm)>, lambda: Const) -> FiniteFn {
        FiniteFn { entries, lambda }
    }

    pub fn empty(sys: SystemId) -> FiniteFn {
        FiniteFn { entries: Vec::new(), lambda: sys.lambda() }
    }

    /// Canonical function from arbitrary entries: zero values are pruned,
    /// keys sorted; a repeated key is an error.
    pub fn from_entries(entries: Vec<(OrdTerm, OrdTerm)>, sys: SystemId) -> Result<FiniteFn> {
        let mut entries: Vec<_> = entries.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        sort_by_compare(sys, &mut entries, |e| &e.0)?;
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidTerm(format!("key {} occurs twice in a finite function", w[0].0)));
            }
        }
        Ok(FiniteFn { entries, lambda: sys.lambda() })
    }

    /// A one-point function `{c: v}` (empty when `v = 0`).
    pub fn singleton(c: OrdTerm, v: OrdTerm, sys: SystemId) -> FiniteFn {
        let entries = if v.is_zero() { Vec::new() } else { vec![(c, v)] };
        FiniteFn { entries, lambda: sys.lambda() }
    }

    pub fn entries(&self) -> &[(OrdTerm, OrdTerm)] {
        &self.entries
    }

    pub(crate) fn into_entries(self) -> Vec<(OrdTerm, OrdTerm)> {
        self.entries
    }

    pub fn lambda(&self) -> Const {
        self.lambda
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn supp(&self) -> Vec<OrdTerm> {
        self.entries.iter().map(|(k, _)| k.clone()).collect()
    }

    /// `f(c)`, zero off the support.
    pub fn get(&self, c: &OrdTerm) -> OrdTerm {
        self.entries.iter().find(|(k, _)| k == c).map(|(_, v)| v.clone()).unwrap_or_else(OrdTerm::zero)
    }

    pub fn max_key(&self) -> Option<&OrdTerm> {
        self.entries.last().map(|(k, _)| k)
    }

    /// `f_c`: the restriction to keys below `c`.
    pub fn restrict_below(&self, c: &OrdTerm, sys: SystemId) -> Result<FiniteFn> {
        let mut entries = Vec::new();
        for (k, v) in &self.entries {
            if lt(sys, k, c)? {
                entries.push((k.clone(), v.clone()));
            }
        }
        Ok(FiniteFn { entries, lambda: self.lambda })
    }

    /// `f^c`: the restriction to keys at or above `c`.
    pub fn restrict_from(&self, c: &OrdTerm, sys: SystemId) -> Result<FiniteFn> {
        let mut entries = Vec::new();
        for (k, v) in &self.entries {
            if !lt(sys, k, c)? {
                entries.push((k.clone(), v.clone()));
            }
        }
        Ok(FiniteFn { entries, lambda: self.lambda })
    }

    /// `g_c * f^c`.
    pub fn concat(g: &FiniteFn, f: &FiniteFn, c: &OrdTerm, sys: SystemId) -> Result<FiniteFn> {
        let mut entries = g.restrict_below(c, sys)?.entries;
        entries.extend(f.restrict_from(c, sys)?.entries);
        Ok(FiniteFn { entries, lambda: f.lambda })
    }

    /// The function with `c` remapped to `v` (removed when `v = 0`).
    pub fn with(&self, c: &OrdTerm, v: OrdTerm, sys: SystemId) -> Result<FiniteFn> {
        let mut entries: Vec<_> = self.entries.iter().filter(|(k, _)| k != c).cloned().collect();
        entries.push((c.clone(), v));
        FiniteFn::from_entries(entries, sys)
    }

    /// Keys above `c` in increasing order.
    fn keys_above(&self, c: &OrdTerm, sys: SystemId) -> Result<Vec<OrdTerm>> {
        let mut out = Vec::new();
        for (k, _) in &self.entries {
            if lt(sys, c, k)? {
                out.push(k.clone());
            }
        }
        Ok(out)
    }

    /// `f(c_max) = α + Λ` for some α.
    pub fn is_special(&self, sys: SystemId) -> Result<bool> {
        Ok(self.room_split(sys)?.is_some())
    }

    /// Splits the top value as `α + Λ`, returning α.
    fn room_split(&self, sys: SystemId) -> Result<Option<OrdTerm>> {
        let Some((_, top)) = self.entries.last() else {
            return Ok(None);
        };
        let lam = OrdTerm::konst(sys.lambda());
        let mut parts = top.parts();
        let Some((p, m)) = parts.pop() else {
            return Ok(None);
        };
        if p != lam {
            return Ok(None);
        }
        let rest = match m {
            Mult::Nat(1) => None,
            Mult::Nat(n) => Some(Mult::Nat(n - 1)),
            Mult::Ord(a) => {
                // Λ·a = Λ·a₀ + Λ only when a = a₀ + 1.
                let ap = a.parts();
                match ap.last() {
                    Some((q, _)) if q.as_nat() == Some(1) => Some(Mult::from_term(&drop_one(&a))),
                    _ => return Ok(None),
                }
            }
        };
        if let Some(m) = rest {
            parts.push((p, m));
        }
        Ok(Some(OrdTerm::from_parts(parts)))
    }

    /// `f′`: the special function with its top `Λ`-room removed.
    pub fn prime(&self, sys: SystemId) -> Result<FiniteFn> {
        let alpha = self.room_split(sys)?.ok_or_else(|| Error::NotSpecial(self.render()))?;
        let top = self.max_key().unwrap().clone();
        let mut entries = self.entries.clone();
        entries.pop();
        if !alpha.is_zero() {
            entries.push((top, alpha));
        }
        Ok(FiniteFn { entries, lambda: self.lambda })
    }

    /// Stepping down `h^b(g; a)` of a special function `g` below its top
    /// key.
    pub fn step_down(&self, b: &OrdTerm, a: &OrdTerm, sys: SystemId) -> Result<FiniteFn> {
        let alpha = self.room_split(sys)?.ok_or_else(|| Error::NotSpecial(self.render()))?;
        let cmax = self.max_key().unwrap().clone();
        if !lt(sys, b, &cmax)? {
            return Err(Error::BadCut(b.to_string()));
        }
        let mut chain = vec![b.clone()];
        for k in self.keys_above(b, sys)? {
            chain.push(k);
        }
        let n = chain.len() - 1;
        let mut acc = add(&alpha, a, sys)?;
        for i in (0..n).rev() {
            let c = sub_left(&chain[i + 1], &chain[i], sys)?;
            let lifted = theta_tilde(&c, &acc, sys)?;
            acc = add(&self.get(&chain[i]), &lifted, sys)?;
        }
        let lam = OrdTerm::konst(sys.lambda());
        let top = add(&acc, &lam, sys)?;
        let mut entries = self.restrict_below(b, sys)?.entries;
        entries.push((b.clone(), top));
        Ok(FiniteFn { entries, lambda: self.lambda })
    }

    /// `f <^c ξ`.
    pub fn less_at(&self, c: &OrdTerm, x: &OrdTerm, sys: SystemId) -> Result<bool> {
        let above = self.keys_above(c, sys)?;
        let at_c = self.get(c);
        if at_c.is_zero() && above.is_empty() {
            return Ok(true);
        }
        if x.is_zero() {
            return Ok(false);
        }
        let next = above.first();
        for mu in segments(x, sys)? {
            if !lt(sys, &at_c, &mu)? {
                continue;
            }
            match next {
                None => return Ok(true),
                Some(k) => {
                    let d = sub_left(k, c, sys)?;
                    let down = theta_tilde_inv(&d, &tail(&mu, sys)?, sys)?;
                    if self.less_at(k, &down, sys)? {
                        return Ok(true);
                    }
                }
            }
        }
        Ok(false)
    }

    /// Irreducibility: the tail of each value dominates the lift of the
    /// next one, recursively after merging the top two keys.
    pub fn is_irreducible(&self, sys: SystemId) -> Result<bool> {
        let mut f = self.clone();
        while f.entries.len() >= 2 {
            let n = f.entries.len();
            let (c, fc) = f.entries[n - 2].clone();
            let (cd, fcd) = f.entries[n - 1].clone();
            let d = sub_left(&cd, &c, sys)?;
            let lifted = theta_tilde(&d, &fcd, sys)?;
            if !lt(sys, &lifted, &tail(&fc, sys)?)? {
                return Ok(false);
            }
            let merged = add(&fc, &lifted, sys)?;
            f.entries.truncate(n - 2);
            f.entries.push((c, merged));
        }
        Ok(true)
    }

    /// `f <^b_lx g` for irreducible `f`, `g`.
    pub fn lex_less(&self, g: &FiniteFn, b: &OrdTerm, sys: SystemId) -> Result<bool> {
        if !self.is_irreducible(sys)? {
            return Err(Error::NotIrreducible(self.render()));
        }
        if !g.is_irreducible(sys)? {
            return Err(Error::NotIrreducible(g.render()));
        }
        self.lx(g, b, sys)
    }

    fn lx(&self, g: &FiniteFn, b: &OrdTerm, sys: SystemId) -> Result<bool> {
        let Some(c) = self.first_difference(g, b, sys)? else {
            return Ok(false);
        };
        let (fc, gc) = (self.get(&c), g.get(&c));
        if lt(sys, &fc, &gc)? {
            let mu = shortest_segment_above(&gc, &fc, sys)?;
            let tl_mu = tail(&mu, sys)?;
            for k in self.keys_above(&c, sys)? {
                let d = sub_left(&k, &c, sys)?;
                let lifted = theta_tilde(&d, &self.get(&k), sys)?;
                if compare(sys, &tl_mu, &lifted)? != Ordering::Greater && !self.lx(g, &k, sys)? {
                    return Ok(false);
                }
            }
            Ok(true)
        } else {
            let nu = shortest_segment_above(&fc, &gc, sys)?;
            let tl_nu = tail(&nu, sys)?;
            for k in g.keys_above(&c, sys)? {
                let d = sub_left(&k, &c, sys)?;
                let lifted = theta_tilde(&d, &g.get(&k), sys)?;
                if compare(sys, &tl_nu, &lifted)? != Ordering::Greater && self.lx(g, &k, sys)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }

    /// `min{c ≥ b : f(c) ≠ g(c)}`.
    fn first_difference(&self, g: &FiniteFn, b: &OrdTerm, sys: SystemId) -> Result<Option<OrdTerm>> {
        let mut keys: Vec<OrdTerm> = Vec::new();
        for (k, _) in self.entries.iter().chain(g.entries.iter()) {
            if !lt(sys, k, b)? && !keys.contains(k) {
                keys.push(k.clone());
            }
        }
        sort_by_compare(sys, &mut keys, |k| k)?;
        Ok(keys.into_iter().find(|k| self.get(k) != g.get(k)))
    }

    /// `f ≤ g` pointwise on the union of supports.
    pub fn pointwise_le(&self, g: &FiniteFn, sys: SystemId) -> Result<bool> {
        for (k, v) in &self.entries {
            if compare(sys, v, &g.get(k))? == Ordering::Greater {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether every value satisfies the coefficient conditions of finite
    /// functions: all coefficients but the last are 1, and the last may
    /// differ from 1 only on a part `Λ^ξ`.
    pub fn coefficients_ok(&self, sys: SystemId) -> Result<bool> {
        for (_, v) in &self.entries {
            if !value_coefficients_ok(v, sys)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn render(&self) -> String {
        let body: Vec<String> = self.entries.iter().map(|(k, v)| format!("{k}: {v}")).collect();
        format!("{{{}}}", body.join(", "))
    }
}

/// Coefficient condition on a single value.
pub fn value_coefficients_ok(v: &OrdTerm, sys: SystemId) -> Result<bool> {
    let view = tt_view(v, sys)?;
    let last = view.len().saturating_sub(1);
    for (i, part) in view.iter().enumerate() {
        let one = part.coeff.as_nat() == Some(1);
        if i < last && !one {
            return Ok(false);
        }
        if i == last && !one && part.sub.as_nat() != Some(1) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The shortest segment of `x` strictly above `y` (x > y assumed).
fn shortest_segment_above(x: &OrdTerm, y: &OrdTerm, sys: SystemId) -> Result<OrdTerm> {
    for mu in segments(x, sys)?.into_iter().rev() {
        if lt(sys, y, &mu)? {
            return Ok(mu);
        }
    }
    Ok(x.clone())
}

/// `a − 1` for a successor ordinal `a` (its last part is a numeral).
fn drop_one(a: &OrdTerm) -> OrdTerm {
    let mut parts = a.parts();
    if let Some((p, Mult::Nat(n))) = parts.pop() {
        if n > 1 {
            parts.push((p, Mult::Nat(n - 1)));
        }
    }
    OrdTerm::from_parts(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::parse;

    const SYS: SystemId = SystemId::Pi11;

    fn t(s: &str) -> OrdTerm {
        parse(s, SYS).unwrap()
    }

    fn f(pairs: &[(&str, &str)]) -> FiniteFn {
        FiniteFn::from_entries(pairs.iter().map(|(k, v)| (t(k), t(v))).collect(), SYS).unwrap()
    }

    #[test]
    fn restriction_and_concat() {
        let g = f(&[("0", "1"), ("2", "Om"), ("5", "K")]);
        let c = t("2");
        assert_eq!(g.restrict_below(&c, SYS).unwrap().supp(), vec![t("0")]);
        assert_eq!(g.restrict_from(&c, SYS).unwrap().supp(), vec![t("2"), t("5")]);
        assert_eq!(FiniteFn::concat(&g, &g, &c, SYS).unwrap(), g);
        let h = f(&[("1", "3"), ("7", "1")]);
        let cat = FiniteFn::concat(&h, &g, &c, SYS).unwrap();
        assert_eq!(cat.get(&t("1")), t("3"));
        assert_eq!(cat.get(&t("5")), t("K"));
        assert_eq!(cat.get(&t("7")), OrdTerm::zero());
        assert!(FiniteFn::empty(SYS).restrict_below(&c, SYS).unwrap().is_empty());
    }

    #[test]
    fn zero_values_are_pruned_and_duplicates_rejected() {
        assert!(f(&[("1", "0")]).is_empty());
        let dup = FiniteFn::from_entries(vec![(t("1"), t("1")), (t("1"), t("2"))], SYS);
        assert!(matches!(dup, Err(Error::InvalidTerm(_))));
    }

    #[test]
    fn special_and_prime() {
        let g = f(&[("1", "K")]);
        assert!(g.is_special(SYS).unwrap());
        let p = g.prime(SYS).unwrap();
        assert!(p.is_empty());
        assert!(matches!(p.prime(SYS), Err(Error::NotSpecial(_))));
        let ns = f(&[("1", "t~(1, 2)")]);
        assert!(!ns.is_special(SYS).unwrap());
        let two = f(&[("1", "Om"), ("3", "t~(2, 0) + K * 2")]);
        assert_eq!(two.prime(SYS).unwrap().get(&t("3")), t("t~(2, 0) + K"));
    }

    #[test]
    fn step_down_two_point_chain() {
        // g = {c: α + K}, b < c: h = {b: θ̃_{c−b}(α + a) + K}
        let g = f(&[("3", "t~(1, Om) + K")]);
        let h = g.step_down(&t("1"), &t("5"), SYS).unwrap();
        let expect = f(&[("1", "t~(2, t~(1, Om) + 5) + K")]);
        assert_eq!(h, expect);
        assert!(matches!(g.step_down(&t("3"), &t("1"), SYS), Err(Error::BadCut(_))));
        assert!(matches!(f(&[("3", "Om")]).step_down(&t("1"), &t("1"), SYS), Err(Error::NotSpecial(_))));
    }

    #[test]
    fn step_down_keeps_lower_part() {
        let g = f(&[("0", "Om"), ("2", "1"), ("4", "K")]);
        let h = g.step_down(&t("1"), &t("1"), SYS).unwrap();
        assert_eq!(h.restrict_below(&t("1"), SYS).unwrap(), g.restrict_below(&t("1"), SYS).unwrap());
        assert_eq!(h.max_key(), Some(&t("1")));
        // α₂ = 0 + 1, α₁ = 1 + θ̃_2(1) = θ̃_2(1), α₀ = θ̃_1(θ̃_2(1)) = θ̃_3(1)
        assert_eq!(h.get(&t("1")), t("t~(3, 1) + K"));
    }

    #[test]
    fn less_at_base_and_tightness() {
        let g = f(&[("2", "Om")]);
        assert!(g.less_at(&t("3"), &OrdTerm::zero(), SYS).unwrap());
        assert!(!g.less_at(&t("2"), &t("Om"), SYS).unwrap());
        assert!(g.less_at(&t("2"), &t("Om + 1"), SYS).unwrap());
    }

    #[test]
    fn irreducibility() {
        assert!(f(&[("1", "Om")]).is_irreducible(SYS).unwrap());
        // tl(f(1)) = 1 is not above θ̃_1(Ω)
        assert!(!f(&[("1", "1"), ("2", "Om")]).is_irreducible(SYS).unwrap());
        assert!(f(&[("1", "t~(1, Om + 1)"), ("2", "Om")]).is_irreducible(SYS).unwrap());
    }

    #[test]
    fn lexicographic_basics() {
        let x = f(&[("1", "Om")]);
        let y = f(&[("1", "Om + 1")]);
        let z = OrdTerm::zero();
        assert!(!x.lex_less(&x, &z, SYS).unwrap());
        assert!(x.lex_less(&y, &z, SYS).unwrap());
        assert!(!y.lex_less(&x, &z, SYS).unwrap());
        let bad = f(&[("1", "1"), ("2", "Om")]);
        assert!(matches!(bad.lex_less(&x, &z, SYS), Err(Error::NotIrreducible(_))));
    }
}
