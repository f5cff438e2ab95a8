//! Bounded enumeration of valid terms.
//!
//! Terms are generated stratum by stratum: every candidate of length L is
//! built from valid terms of smaller length with the normalizing
//! constructors, kept if its normal form has length exactly L, and then
//! validated.  Subterms of valid terms are valid, so nothing is missed.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::finite_fn::{value_coefficients_ok, FiniteFn};
use crate::order::sort_by_compare;
use crate::systems::{validate, Budget, SystemId};
use crate::terms::{add, normalize_index, theta_tilde, veblen, Node, OrdTerm, PsiIndex};

/// Valid terms up to a length bound, grouped by length.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub sys: SystemId,
    /// `strata[l]` holds the valid terms of length exactly `l`, in the
    /// structural order.
    pub strata: Vec<Vec<OrdTerm>>,
}

impl Enumeration {
    pub fn generate(sys: SystemId, budget: &Budget) -> Result<Enumeration> {
        let maxlen = budget.maxlen as usize;
        let mut g = Generator { sys, strata: vec![Vec::new(); maxlen + 1], values: vec![Vec::new(); maxlen + 1], seen: HashSet::new(), count: 0, budget };
        for l in 1..=maxlen {
            g.stratum(l)?;
        }
        Ok(Enumeration { sys, strata: g.strata })
    }

    pub fn len(&self) -> usize {
        self.strata.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All terms, shortest first.
    pub fn terms(&self) -> Vec<OrdTerm> {
        self.strata.iter().flatten().cloned().collect()
    }

    /// All terms in increasing order under the system's comparison.
    pub fn sorted(&self) -> Result<Vec<OrdTerm>> {
        let mut out = self.terms();
        sort_by_compare(self.sys, &mut out, |t| t)?;
        Ok(out)
    }
}

impl IntoIterator for Enumeration {
    type Item = OrdTerm;
    type IntoIter = std::vec::IntoIter<OrdTerm>;

    fn into_iter(self) -> Self::IntoIter {
        self.strata.into_iter().flatten().collect::<Vec<_>>().into_iter()
    }
}

/// Every valid term of length at most `budget.maxlen`, in increasing
/// order, each exactly once.
pub fn enumerate(sys: SystemId, budget: &Budget) -> Result<Vec<OrdTerm>> {
    Enumeration::generate(sys, budget)?.sorted()
}

/// θ̃-normal values of finite functions up to length `maxlen`, built from
/// the valid terms of the same bound.
pub fn enumerate_values(sys: SystemId, budget: &Budget) -> Result<Vec<OrdTerm>> {
    let maxlen = budget.maxlen as usize;
    let mut g = Generator { sys, strata: vec![Vec::new(); maxlen + 1], values: vec![Vec::new(); maxlen + 1], seen: HashSet::new(), count: 0, budget };
    for l in 1..=maxlen {
        g.stratum(l)?;
    }
    Ok(g.values.into_iter().flatten().collect())
}

struct Generator<'a> {
    sys: SystemId,
    strata: Vec<Vec<OrdTerm>>,
    values: Vec<Vec<OrdTerm>>,
    seen: HashSet<OrdTerm>,
    count: usize,
    budget: &'a Budget,
}

impl Generator<'_> {
    fn pool(&self, l: usize) -> &[OrdTerm] {
        self.strata.get(l).map_or(&[], Vec::as_slice)
    }

    fn stratum(&mut self, l: usize) -> Result<()> {
        let mut cands: Vec<OrdTerm> = Vec::new();
        if l == 1 {
            cands.push(OrdTerm::zero());
            cands.extend(self.sys.constants().iter().map(|c| OrdTerm::konst(*c)));
        }
        self.veblens(l, &mut cands)?;
        self.sums(l, &mut cands)?;
        self.unary(l, &mut cands);
        self.psis(l, &mut cands)?;
        let mut found = Vec::new();
        for c in cands {
            if c.len() as usize != l || self.seen.contains(&c) {
                continue;
            }
            self.seen.insert(c.clone());
            if validate(self.sys, &c).ok {
                found.push(c);
            }
        }
        found.sort();
        self.count += found.len();
        if self.count > self.budget.max_items {
            return Err(Error::BudgetExceeded(format!("more than {} terms", self.budget.max_items)));
        }
        self.strata[l] = found;
        if self.sys.uses_fn_index() {
            self.value_stratum(l)?;
        }
        Ok(())
    }

    fn veblens(&self, l: usize, out: &mut Vec<OrdTerm>) -> Result<()> {
        for lb in 1..l.saturating_sub(1) {
            let lx = l - 1 - lb;
            for b in self.pool(lb) {
                for x in self.pool(lx) {
                    if let Ok(t) = veblen(b, x, self.sys) {
                        if matches!(t.node(), Node::Veblen(..)) {
                            out.push(t);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn sums(&self, l: usize, out: &mut Vec<OrdTerm>) -> Result<()> {
        for lp in 1..l {
            for p in self.pool(lp).iter().filter(|p| p.is_principal()) {
                for lx in [l.saturating_sub(lp), l.saturating_sub(lp + 1)] {
                    if lx == 0 {
                        continue;
                    }
                    for x in self.pool(lx).iter().filter(|x| !x.is_zero()) {
                        if let Ok(t) = add(x, p, self.sys) {
                            out.push(t);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn unary(&self, l: usize, out: &mut Vec<OrdTerm>) {
        let ctors: &[fn(OrdTerm) -> Node] = match self.sys {
            SystemId::Pi11 => &[Node::NextReg],
            SystemId::Stab => &[Node::Dagger, Node::IOf],
            _ => &[],
        };
        if l < 2 {
            return;
        }
        for b in self.pool(l - 1) {
            for c in ctors {
                out.push(OrdTerm::from_node(c(b.clone())));
            }
        }
    }

    /// Superscripts of total length `li`.
    fn indices(&self, li: usize) -> Result<Vec<PsiIndex>> {
        if li == 0 {
            return Ok(vec![PsiIndex::None]);
        }
        let mut out = Vec::new();
        match self.sys {
            SystemId::BH => {}
            SystemId::Pi3 => {
                out.extend(self.pool(li).iter().filter(|x| !x.is_zero()).cloned().map(PsiIndex::Ord));
            }
            SystemId::PiN(_) => {
                let n = self.sys.vec_arity().unwrap_or(0);
                let mut acc = Vec::new();
                self.vectors(n, li, &mut Vec::new(), &mut acc);
                out.extend(acc.into_iter().filter(|v| v.iter().any(|x| !x.is_zero())).map(PsiIndex::Vec));
            }
            SystemId::Pi11 | SystemId::Stab => {
                let mut acc = Vec::new();
                self.functions(li, &mut Vec::new(), &mut acc);
                for entries in acc {
                    if let Ok(f) = FiniteFn::from_entries(entries, self.sys) {
                        if !f.is_empty() {
                            out.push(PsiIndex::Fn(f));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    fn vectors(&self, n: usize, budget: usize, cur: &mut Vec<OrdTerm>, out: &mut Vec<Vec<OrdTerm>>) {
        if cur.len() == n {
            if budget == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let rest = n - cur.len() - 1;
        for l in 1..=budget.saturating_sub(rest) {
            for x in self.pool(l) {
                cur.push(x.clone());
                self.vectors(n, budget - l, cur, out);
                cur.pop();
            }
        }
    }

    /// Entry lists whose key and value lengths sum to `budget`; keys are
    /// generated in increasing structural order to avoid repeats.
    fn functions(&self, budget: usize, cur: &mut Vec<(OrdTerm, OrdTerm)>, out: &mut Vec<Vec<(OrdTerm, OrdTerm)>>) {
        if budget == 0 {
            if !cur.is_empty() {
                out.push(cur.clone());
            }
            return;
        }
        for lk in 1..budget {
            for k in self.pool(lk) {
                if cur.last().is_some_and(|(p, _)| p >= k) {
                    continue;
                }
                for lv in 1..=budget - lk {
                    for v in self.values.get(lv).map_or(&[][..], Vec::as_slice) {
                        cur.push((k.clone(), v.clone()));
                        self.functions(budget - lk - lv, cur, out);
                        cur.pop();
                    }
                }
            }
        }
    }

    fn psis(&self, l: usize, out: &mut Vec<OrdTerm>) -> Result<()> {
        if l < 3 {
            return Ok(());
        }
        for ls in 1..l - 1 {
            for li in 0..l - 1 - ls {
                let la = l - 1 - ls - li;
                if la == 0 {
                    continue;
                }
                let subs: Vec<&OrdTerm> = self.pool(ls).iter().filter(|s| s.is_atom()).collect();
                if subs.is_empty() {
                    continue;
                }
                let idxs = self.indices(li)?;
                for s in &subs {
                    for idx in &idxs {
                        let Ok(idx) = normalize_index(idx, self.sys) else { continue };
                        for a in self.pool(la) {
                            out.push(OrdTerm::psi((*s).clone(), idx.clone(), a.clone()));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Finite-function values of length `l`: nonzero terms, θ̃-terms over
    /// shorter terms and values, and sums of those.
    fn value_stratum(&mut self, l: usize) -> Result<()> {
        let sys = self.sys;
        let mut cands: Vec<OrdTerm> = self.pool(l).iter().filter(|t| !t.is_zero()).cloned().collect();
        let shorter = |g: &Self, k: usize| -> Vec<OrdTerm> {
            let mut v: Vec<OrdTerm> = g.pool(k).to_vec();
            v.extend(g.values.get(k).cloned().unwrap_or_default());
            v
        };
        for lb in 1..l.saturating_sub(1) {
            let lx = l - 1 - lb;
            for b in self.pool(lb).iter().filter(|b| !b.is_zero()) {
                for x in shorter(self, lx) {
                    if let Ok(t) = theta_tilde(b, &x, sys) {
                        cands.push(t);
                    }
                }
            }
        }
        for lp in 1..l {
            for p in shorter(self, lp).iter().filter(|p| p.is_principal()) {
                for lx in [l.saturating_sub(lp), l.saturating_sub(lp + 1)] {
                    if lx == 0 {
                        continue;
                    }
                    for x in shorter(self, lx).iter().filter(|x| !x.is_zero()) {
                        if let Ok(t) = add(x, p, sys) {
                            cands.push(t);
                        }
                    }
                }
            }
        }
        let mut seen = HashSet::new();
        let mut found = Vec::new();
        for c in cands {
            if c.len() as usize != l || !seen.insert(c.clone()) {
                continue;
            }
            if matches!(value_coefficients_ok(&c, sys), Ok(true)) {
                found.push(c);
            }
        }
        found.sort();
        self.values[l] = found;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::{parse, Const};

    #[test]
    fn tiny_bh_universe() {
        let u = enumerate(SystemId::BH, &Budget::with_maxlen(2)).unwrap();
        assert_eq!(u, vec![OrdTerm::zero(), OrdTerm::konst(Const::Omega)]);
    }

    #[test]
    fn bh_universe_is_increasing_and_valid() {
        let sys = SystemId::BH;
        let u = enumerate(sys, &Budget::with_maxlen(5)).unwrap();
        for w in u.windows(2) {
            assert_eq!(crate::compare(sys, &w[0], &w[1]).unwrap(), std::cmp::Ordering::Less);
        }
        assert!(u.contains(&parse("psi(Om; 0)", sys).unwrap()));
        assert!(u.iter().all(|t| validate(sys, t).ok));
        let again = enumerate(sys, &Budget::with_maxlen(5)).unwrap();
        assert_eq!(u, again);
    }
}
