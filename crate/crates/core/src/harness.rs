//! Empirical checks over bounded universes.
//!
//! Every suite compares a production computation with an independent,
//! brute-force oracle and returns a [`Report`]; a counterexample is a
//! finding, never a panic.  Suites are deterministic in `(seed, budget)`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::collapse::{collapse, in_domain, uncollapse};
use crate::error::{Error, Result};
use crate::finite_fn::FiniteFn;
use crate::hull::{in_hull, sc, SupportSet};
use crate::order::compare;
use crate::systems::{enumerate, in_psi_class, validate, Budget, Enumeration, SystemId};
use crate::terms::{add, parse, veblen, Const, Node, OrdTerm, PsiIndex};

/// A counterexample: the terms involved and what went wrong.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub what: String,
    pub terms: Vec<OrdTerm>,
}

impl Finding {
    fn new(what: impl Into<String>, terms: &[&OrdTerm]) -> Finding {
        Finding { what: what.into(), terms: terms.iter().map(|t| (*t).clone()).collect() }
    }
}

/// Outcome of one suite.  `failures` is empty exactly when the suite
/// passed.
#[derive(Clone, Debug)]
pub struct Report {
    pub suite: String,
    pub sys: Option<SystemId>,
    pub universe_size: usize,
    /// Number of individual comparisons, round trips or instances checked.
    pub checked: u64,
    /// Named counters specific to the suite (longest chain, fewest pairs
    /// per collapse point, …).
    pub stats: Vec<(String, u64)>,
    pub failures: Vec<Finding>,
    pub elapsed: Duration,
}

/// At most this many findings are kept; `checked` still counts all.
const MAX_FINDINGS: usize = 50;

impl Report {
    fn new(suite: &str, sys: Option<SystemId>) -> Report {
        Report {
            suite: suite.to_string(),
            sys,
            universe_size: 0,
            checked: 0,
            stats: Vec::new(),
            failures: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn stat(&self, name: &str) -> Option<u64> {
        self.stats.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }

    fn set_stat(&mut self, name: &str, v: u64) {
        match self.stats.iter_mut().find(|(k, _)| k == name) {
            Some(slot) => slot.1 = v,
            None => self.stats.push((name.to_string(), v)),
        }
    }

    fn fail(&mut self, f: Finding) {
        if self.failures.len() < MAX_FINDINGS {
            self.failures.push(f);
        } else {
            let n = self.stat("dropped-findings").unwrap_or(0);
            self.set_stat("dropped-findings", n + 1);
        }
    }

    /// Records the outcome of a fallible check: `Err` is itself a finding.
    fn check(&mut self, what: &str, terms: &[&OrdTerm], outcome: Result<bool>) {
        self.checked += 1;
        match outcome {
            Ok(true) => {}
            Ok(false) => self.fail(Finding::new(what, terms)),
            Err(e) => self.fail(Finding::new(format!("{what}: {e}"), terms)),
        }
    }

    fn finish(mut self, start: Instant) -> Report {
        self.elapsed = start.elapsed();
        self
    }

    /// Human-readable record: a summary line, then one line per finding.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let status = if self.passed() { "pass" } else { "FAIL" };
        let sys = self.sys.map(|s| format!(" sys={s}")).unwrap_or_default();
        let _ = write!(
            s,
            "{status} {}{sys} size={} checked={} failures={}",
            self.suite,
            self.universe_size,
            self.checked,
            self.failures.len()
        );
        for (k, v) in &self.stats {
            let _ = write!(s, " {k}={v}");
        }
        let _ = writeln!(s, " elapsed-ms={}", self.elapsed.as_millis());
        for f in &self.failures {
            let terms: Vec<String> = f.terms.iter().map(|t| t.to_string()).collect();
            let _ = writeln!(s, "  ! {}: {}", f.what, terms.join(" | "));
        }
        s
    }

    /// One JSON object per report.  Elapsed time is left out so that the
    /// output is reproducible byte for byte.
    pub fn to_jsonl(&self) -> String {
        let failures: Vec<_> = self
            .failures
            .iter()
            .map(|f| json!({"what": f.what, "terms": f.terms.iter().map(|t| t.to_string()).collect::<Vec<_>>()}))
            .collect();
        let stats: serde_json::Map<String, serde_json::Value> =
            self.stats.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        json!({
            "suite": self.suite,
            "sys": self.sys.map(|s| s.to_string()),
            "size": self.universe_size,
            "checked": self.checked,
            "passed": self.passed(),
            "stats": stats,
            "failures": failures,
        })
        .to_string()
    }
}

/// `C^α(X)` inside the bounded universe: the least set containing 0, the
/// constants and `X ∩ α`, closed under `+`, `φ`, the successor-type
/// constructors and `ψ_σ^ν(a)` for `σ > α` with all components present.
pub fn closure_c(alpha: &OrdTerm, xs: &SupportSet, sys: SystemId, budget: &Budget) -> Result<SupportSet> {
    let universe = enumerate(sys, budget)?;
    closure_c_in(&universe, alpha, xs, sys)
}

/// [`closure_c`] over an explicit universe.
pub fn closure_c_in(universe: &[OrdTerm], alpha: &OrdTerm, xs: &SupportSet, sys: SystemId) -> Result<SupportSet> {
    let mut set: SupportSet = sys.constants().iter().map(|c| OrdTerm::konst(*c)).collect();
    set.insert(OrdTerm::zero());
    for x in xs {
        if compare(sys, x, alpha)? == Ordering::Less {
            set.insert(x.clone());
        }
    }
    // Values of finite functions are not terms of the universe; they count
    // as present once their strongly critical parts are.
    let has = |x: &OrdTerm, set: &SupportSet| set.contains(x) || (!x.is_atom() && sc(x, sys).is_subset(set));
    loop {
        let mut grew = false;
        for u in universe {
            if set.contains(u) {
                continue;
            }
            let ok = match u.node() {
                Node::Zero | Node::Const(_) => true,
                Node::Sum(_) | Node::Veblen(..) | Node::ThetaTilde(..) => u.children().iter().all(|c| set.contains(c)),
                Node::NextReg(b) | Node::Dagger(b) | Node::IOf(b) => set.contains(b),
                Node::Psi(s, idx, a) => {
                    compare(sys, s, alpha)? == Ordering::Greater
                        && set.contains(s)
                        && set.contains(a)
                        && idx.components().iter().all(|c| has(c, &set))
                }
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

/// Trichotomy on every pair and transitivity on every triple of the valid
/// universe.
pub fn check_linear_order(sys: SystemId, budget: &Budget) -> Result<Report> {
    let start = Instant::now();
    let universe = Enumeration::generate(sys, budget)?.terms();
    let mut r = check_linear_order_on(sys, &universe);
    r.elapsed = start.elapsed();
    Ok(r)
}

/// [`check_linear_order`] on an arbitrary corpus.  Comparison errors (for
/// instance on invalid terms) are reported as findings.
///
/// Transitivity is decided exactly: a complete antisymmetric relation on
/// n elements is transitive iff the numbers of elements below each element
/// are exactly 0, 1, …, n−1.  When that fails, a witnessing cycle is
/// searched for and reported.
pub fn check_linear_order_on(sys: SystemId, terms: &[OrdTerm]) -> Report {
    let start = Instant::now();
    let mut r = Report::new("linear-order", Some(sys));
    let mut uniq: Vec<OrdTerm> = Vec::new();
    let mut seen = BTreeSet::new();
    for t in terms {
        if seen.insert(t.clone()) {
            uniq.push(t.clone());
        }
    }
    let n = uniq.len();
    r.universe_size = n;
    // less[i][j]: uniq[i] < uniq[j]
    let mut less = vec![vec![false; n]; n];
    let mut total = true;
    for i in 0..n {
        r.checked += 1;
        match compare(sys, &uniq[i], &uniq[i]) {
            Ok(Ordering::Equal) => {}
            Ok(o) => r.fail(Finding::new(format!("reflexivity: compare gives {o:?}"), &[&uniq[i]])),
            Err(e) => r.fail(Finding::new(format!("compare error: {e}"), &[&uniq[i]])),
        }
        for j in i + 1..n {
            r.checked += 1;
            let (x, y) = (&uniq[i], &uniq[j]);
            match (compare(sys, x, y), compare(sys, y, x)) {
                (Ok(Ordering::Less), Ok(Ordering::Greater)) => less[i][j] = true,
                (Ok(Ordering::Greater), Ok(Ordering::Less)) => less[j][i] = true,
                (Ok(Ordering::Equal), _) | (_, Ok(Ordering::Equal)) => {
                    total = false;
                    r.fail(Finding::new("distinct terms compare equal", &[x, y]));
                }
                (Ok(a), Ok(b)) => {
                    total = false;
                    r.fail(Finding::new(format!("antisymmetry: {a:?} one way, {b:?} the other"), &[x, y]));
                }
                (Err(e), _) | (_, Err(e)) => {
                    total = false;
                    r.fail(Finding::new(format!("compare error: {e}"), &[x, y]));
                }
            }
        }
    }
    if total {
        let mut scores: Vec<usize> = (0..n).map(|j| (0..n).filter(|&i| less[i][j]).count()).collect();
        r.checked += n as u64;
        scores.sort_unstable();
        if scores.iter().enumerate().any(|(k, &s)| k != s) {
            match find_cycle(&less) {
                Some((a, b, c)) => r.fail(Finding::new("transitivity: cycle a < b < c < a", &[&uniq[a], &uniq[b], &uniq[c]])),
                None => r.fail(Finding::new("transitivity: score sequence is not 0..n", &[])),
            }
        }
    }
    r.finish(start)
}

/// A 3-cycle in a non-transitive tournament.
fn find_cycle(less: &[Vec<bool>]) -> Option<(usize, usize, usize)> {
    let n = less.len();
    for a in 0..n {
        for b in 0..n {
            if !less[a][b] {
                continue;
            }
            for c in 0..n {
                if less[b][c] && less[c][a] {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

/// How a descent chain picks its next element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stepper {
    /// The largest valid proper subterm that is below the current term.
    MaxSubtermBelow,
    /// A uniformly random element of the universe below the current term.
    RandomSmaller,
}

impl std::str::FromStr for Stepper {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Stepper, String> {
        match s {
            "max-subterm" | "max-proper-subterm-below" => Ok(Stepper::MaxSubtermBelow),
            "random" | "random-smaller" | "random-smaller-in-universe" => Ok(Stepper::RandomSmaller),
            _ => Err(format!("unknown stepper `{s}` (expected max-subterm or random)")),
        }
    }
}

/// Follows one strictly decreasing chain from `start`; returns its length
/// (number of steps).  Every step is re-checked with `compare`.
fn descend<F>(sys: SystemId, start: &OrdTerm, fuel: u64, mut next: F) -> Result<std::result::Result<u64, Finding>>
where
    F: FnMut(&OrdTerm) -> Result<Option<OrdTerm>>,
{
    let mut cur = start.clone();
    let mut steps = 0u64;
    while let Some(n) = next(&cur)? {
        if compare(sys, &n, &cur)? != Ordering::Less {
            return Ok(Err(Finding::new("descent step does not decrease", &[&cur, &n])));
        }
        steps += 1;
        if steps > fuel {
            return Ok(Err(Finding::new(format!("{}", Error::FuelExhausted(fuel)), &[start])));
        }
        cur = n;
    }
    Ok(Ok(steps))
}

fn max_subterm_below(sys: SystemId, t: &OrdTerm) -> Result<Option<OrdTerm>> {
    let mut best: Option<OrdTerm> = None;
    let subs: BTreeSet<OrdTerm> = t.subterms().into_iter().filter(|s| s != t).collect();
    for s in subs {
        if !validate(sys, &s).ok || compare(sys, &s, t)? != Ordering::Less {
            continue;
        }
        if best.as_ref().is_none_or(|b| compare(sys, b, &s).map(|o| o == Ordering::Less).unwrap_or(false)) {
            best = Some(s);
        }
    }
    Ok(best)
}

/// Descent chains from `start`.  With the subterm stepper one chain is
/// followed; with the random stepper `trials` chains through the valid
/// universe of `budget` are drawn.  Chains longer than `budget.fuel`
/// are reported as `FuelExhausted` findings.
pub fn check_descent(sys: SystemId, start: &OrdTerm, stepper: Stepper, trials: u32, seed: u64, budget: &Budget) -> Result<Report> {
    let clock = Instant::now();
    let universe = match stepper {
        Stepper::MaxSubtermBelow => Vec::new(),
        Stepper::RandomSmaller => Enumeration::generate(sys, budget)?.terms(),
    };
    let mut r = Report::new("descent", Some(sys));
    let mut walker = Walker::new(sys, &universe)?;
    walker.run(&mut r, start, stepper, trials, seed, budget.fuel)?;
    Ok(r.finish(clock))
}

/// Descent from every term of the valid universe with both steppers.
pub fn check_descent_universe(sys: SystemId, trials: u32, seed: u64, budget: &Budget) -> Result<Report> {
    let clock = Instant::now();
    let universe = Enumeration::generate(sys, budget)?.terms();
    let mut r = Report::new("descent", Some(sys));
    r.universe_size = universe.len();
    let mut walker = Walker::new(sys, &universe)?;
    for (i, t) in universe.iter().enumerate() {
        let s = seed.wrapping_add(i as u64);
        walker.run(&mut r, t, Stepper::MaxSubtermBelow, 1, s, budget.fuel)?;
        walker.run(&mut r, t, Stepper::RandomSmaller, trials, s, budget.fuel)?;
    }
    Ok(r.finish(clock))
}

/// Shared state for descent: the universe and, for each element, the
/// elements strictly below it.
struct Walker<'a> {
    sys: SystemId,
    universe: &'a [OrdTerm],
    below: Vec<Vec<usize>>,
}

impl<'a> Walker<'a> {
    fn new(sys: SystemId, universe: &'a [OrdTerm]) -> Result<Walker<'a>> {
        let n = universe.len();
        let mut below = vec![Vec::new(); n];
        for i in 0..n {
            for j in 0..n {
                if i != j && compare(sys, &universe[j], &universe[i])? == Ordering::Less {
                    below[i].push(j);
                }
            }
        }
        Ok(Walker { sys, universe, below })
    }

    fn smaller(&self, t: &OrdTerm) -> Result<Vec<usize>> {
        if let Some(i) = self.universe.iter().position(|u| u == t) {
            return Ok(self.below[i].clone());
        }
        let mut out = Vec::new();
        for (j, u) in self.universe.iter().enumerate() {
            if compare(self.sys, u, t)? == Ordering::Less {
                out.push(j);
            }
        }
        Ok(out)
    }

    fn run(&mut self, r: &mut Report, start: &OrdTerm, stepper: Stepper, trials: u32, seed: u64, fuel: u64) -> Result<()> {
        let sys = self.sys;
        let mut longest = r.stat("longest-chain").unwrap_or(0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let runs = if stepper == Stepper::MaxSubtermBelow { 1 } else { trials };
        for _ in 0..runs {
            r.checked += 1;
            let outcome = match stepper {
                Stepper::MaxSubtermBelow => descend(sys, start, fuel, |t| max_subterm_below(sys, t)),
                Stepper::RandomSmaller => descend(sys, start, fuel, |t| {
                    let cands = self.smaller(t)?;
                    Ok(cands.choose(&mut rng).map(|&j| self.universe[j].clone()))
                }),
            };
            match outcome {
                Ok(Ok(len)) => longest = longest.max(len),
                Ok(Err(f)) => r.fail(f),
                Err(e) => r.fail(Finding::new(format!("descent error: {e}"), &[start])),
            }
        }
        r.set_stat("longest-chain", longest);
        Ok(())
    }
}

/// `in_hull(t, a, δ)` against the closure oracle on every triple of the
/// valid universe.
pub fn check_hull_equiv(sys: SystemId, budget: &Budget) -> Result<Report> {
    let clock = Instant::now();
    let universe = enumerate(sys, budget)?;
    let mut r = Report::new("hull-equiv", Some(sys));
    r.universe_size = universe.len();
    for delta in &universe {
        let gens: SupportSet = universe
            .iter()
            .filter(|u| compare(sys, u, delta) == Ok(Ordering::Less))
            .cloned()
            .collect();
        for a in &universe {
            let hull = crate::hull::hull_closure_in(&universe, &gens, a, sys)?;
            for t in &universe {
                r.checked += 1;
                let oracle = hull.contains(t);
                match in_hull(t, a, delta, sys) {
                    Ok(v) if v == oracle => {}
                    Ok(v) => r.fail(Finding::new(format!("in_hull(t, a, δ) = {v}, closure says {oracle}"), &[t, a, delta])),
                    Err(e) => r.fail(Finding::new(format!("in_hull error: {e}"), &[t, a, delta])),
                }
            }
        }
    }
    Ok(r.finish(clock))
}

/// Collapse points `ρ ≺ 𝕊` of OT(Π¹₁) used by the isomorphism suite:
/// `ψ_𝕊^{d:v}(a)` over small pools and, below each of the first few,
/// `ψ_ρ(a)`.
pub fn collapse_points(sys: SystemId) -> Result<Vec<OrdTerm>> {
    let (top, keys, vals, args): (&str, &[&str], &[&str], &[&str]) = match sys {
        SystemId::Pi11 => (
            "S",
            &["0", "1", "2", "Om"],
            &["K", "K * 2", "t~(1, 2)"],
            &["0", "1", "Om", "S", "S + 1"],
        ),
        SystemId::Stab => ("dag(Om)", &["0", "1", "Om"], &["I", "I * 2", "t~(1, 2)"], &["0", "1", "Om", "dag(Om)"]),
        _ => return Ok(Vec::new()),
    };
    let mut out = Vec::new();
    for k in keys {
        for v in vals {
            for a in args {
                let t = parse(&format!("psi({top}, {{{k}: {v}}}; {a})"), sys)?;
                if validate(sys, &t).ok {
                    out.push(t);
                }
            }
        }
    }
    let base: Vec<OrdTerm> = out.iter().take(6).cloned().collect();
    for rho in base {
        for a in ["0", "1"] {
            let t = OrdTerm::psi(rho.clone(), PsiIndex::None, parse(a, sys)?);
            if validate(sys, &t).ok {
                out.push(t);
            }
        }
    }
    Ok(out)
}

/// The in-domain sample for a collapse point: every term of the universe
/// that lies in `M_ρ`.
fn domain_sample(universe: &[OrdTerm], rho: &OrdTerm, sys: SystemId) -> Result<Vec<OrdTerm>> {
    let mut out = Vec::new();
    for t in universe {
        if in_domain(t, rho, sys)? {
            out.push(t.clone());
        }
    }
    Ok(out)
}

/// Collapsing preserves `compare` exactly on in-domain pairs and is
/// inverted by `uncollapse`; collapsed terms stay valid.
pub fn check_collapse_iso(sys: SystemId, budget: &Budget, seed: u64, min_pairs: usize) -> Result<Report> {
    let clock = Instant::now();
    let mut r = Report::new("collapse-iso", Some(sys));
    let universe = Enumeration::generate(sys, budget)?.terms();
    r.universe_size = universe.len();
    let rhos = collapse_points(sys)?;
    r.set_stat("collapse-points", rhos.len() as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fewest = u64::MAX;
    for rho in &rhos {
        let dom = domain_sample(&universe, rho, sys)?;
        let mut images = Vec::with_capacity(dom.len());
        for t in &dom {
            r.checked += 1;
            match collapse(t, rho, sys) {
                Ok(c) => {
                    match uncollapse(&c, rho, sys) {
                        Ok(back) if &back == t => {}
                        Ok(back) => r.fail(Finding::new("uncollapse(collapse(t)) differs from t", &[t, rho, &back])),
                        Err(e) => r.fail(Finding::new(format!("uncollapse error: {e}"), &[t, rho, &c])),
                    }
                    let v = validate(sys, &c);
                    if !v.ok {
                        r.fail(Finding::new(format!("collapsed term is invalid: {:?}", v.reasons), &[t, rho, &c]));
                    }
                    images.push(Some(c));
                }
                Err(e) => {
                    r.fail(Finding::new(format!("collapse error: {e}"), &[t, rho]));
                    images.push(None);
                }
            }
        }
        let mut pairs: Vec<(usize, usize)> = (0..dom.len()).flat_map(|i| (i + 1..dom.len()).map(move |j| (i, j))).collect();
        if pairs.len() > 4 * min_pairs.max(1) {
            pairs.shuffle(&mut rng);
            pairs.truncate(4 * min_pairs.max(1));
        }
        fewest = fewest.min(pairs.len() as u64);
        for (i, j) in pairs {
            let (Some(ci), Some(cj)) = (&images[i], &images[j]) else { continue };
            r.checked += 1;
            match (compare(sys, &dom[i], &dom[j]), compare(sys, ci, cj)) {
                (Ok(a), Ok(b)) if a == b => {}
                (Ok(a), Ok(b)) => r.fail(Finding::new(format!("order not preserved: {a:?} before, {b:?} after"), &[&dom[i], &dom[j], rho])),
                (Err(e), _) | (_, Err(e)) => r.fail(Finding::new(format!("compare error: {e}"), &[&dom[i], &dom[j], rho])),
            }
        }
    }
    r.set_stat("fewest-pairs", if rhos.is_empty() { 0 } else { fewest });
    Ok(r.finish(clock))
}

/// Keys, arguments and values for the stepping-down suite.
fn stepdown_pools(sys: SystemId) -> Result<(Vec<OrdTerm>, Vec<OrdTerm>, Vec<OrdTerm>)> {
    let lam = if sys.lambda() == Const::BigI { "I" } else { "K" };
    let p = |xs: &[&str]| -> Result<Vec<OrdTerm>> { xs.iter().map(|x| parse(&x.replace('L', lam), sys)).collect() };
    let keys = p(&["0", "1", "2", "3", "phi(0, 1)", "Om"])?;
    let args = p(&["0", "1", "2", "phi(0, 1)", "Om", "Om + 1"])?;
    // Lower values must have tails above the lift of the top value for the
    // two-key functions to be irreducible, hence the large θ̃-terms.
    let vals = p(&["L", "L * 2", "t~(1, 2) + L", "t~(1, t~(1, 2))", "t~(phi(0, 1), 0)", "t~(Om, 1)"])?;
    Ok((keys, args, vals))
}

/// Special (hence irreducible) finite functions with at most two keys
/// over the pools.
pub fn special_functions(sys: SystemId) -> Result<Vec<FiniteFn>> {
    let (keys, _, vals) = stepdown_pools(sys)?;
    let specials: Vec<&OrdTerm> = vals
        .iter()
        .filter(|v| FiniteFn::singleton(OrdTerm::zero(), (*v).clone(), sys).is_special(sys).unwrap_or(false))
        .collect();
    let mut out = Vec::new();
    for (i, c) in keys.iter().enumerate() {
        for top in &specials {
            out.push(FiniteFn::from_entries(vec![(c.clone(), (*top).clone())], sys)?);
            for d in &keys[..i] {
                for v in &vals {
                    let f = FiniteFn::from_entries(vec![(d.clone(), v.clone()), (c.clone(), (*top).clone())], sys)?;
                    if f.is_irreducible(sys)? {
                        out.push(f);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Both stepping-down laws on every instance drawn from the pools.
///
/// (1) `h^b(h^e(g;a₀);a₁) ≤ (h^b(g;a))′` pointwise for `b < e < max supp g`
/// and `a₀, a₁ < a`.
///
/// (2) if `f <^d g′(d)` for some `d ∈ supp g`, `f` agrees with `g`
/// below `d`, and `b < d`, then `f_b = (h^b(g;a))_b` and
/// `f <^b (h^b(g;a))′(b)`.  The agreement below `d` is needed: without
/// it `f = {0: 𝕂}`, `g = {1: 𝕂}`, `b = a = 0` is a counterexample, since
/// `f <^1 0` holds vacuously while `(h^0(g;0))′(0) = 0`.
pub fn check_stepdown_props(sys: SystemId) -> Result<Report> {
    let clock = Instant::now();
    let mut r = Report::new("stepdown", Some(sys));
    let (keys, args, _) = stepdown_pools(sys)?;
    let gs = special_functions(sys)?;
    r.universe_size = gs.len();
    let lt = |x: &OrdTerm, y: &OrdTerm| compare(sys, x, y).map(|o| o == Ordering::Less);
    let mut first = 0u64;
    for g in &gs {
        let cmax = g.max_key().unwrap().clone();
        for b in &keys {
            if !lt(b, &cmax)? {
                continue;
            }
            for e in &keys {
                if !lt(b, e)? || !lt(e, &cmax)? {
                    continue;
                }
                for a in &args {
                    let big = g.step_down(b, a, sys).and_then(|h| h.prime(sys));
                    for a0 in &args {
                        for a1 in &args {
                            if !lt(a0, a)? || !lt(a1, a)? {
                                continue;
                            }
                            first += 1;
                            let outcome = (|| {
                                let lhs = g.step_down(e, a0, sys)?.step_down(b, a1, sys)?;
                                lhs.pointwise_le(big.as_ref().map_err(Clone::clone)?, sys)
                            })();
                            let label = format!("law 1 with g = {}, e = {e}, a0 = {a0}, a1 = {a1}", fn_text(g));
                            r.check(&label, &[b, a], outcome);
                        }
                    }
                }
            }
        }
    }
    r.set_stat("law1-instances", first);
    let mut second = 0u64;
    for g in &gs {
        let gp = g.prime(sys)?;
        for (d, _) in g.entries() {
            for f in &gs {
                let holds = f.less_at(d, &gp.get(d), sys);
                match holds {
                    Ok(true) => {}
                    Ok(false) => continue,
                    Err(e) => {
                        r.check("law 2 premise", &[d], Err(e));
                        continue;
                    }
                }
                if f.restrict_below(d, sys)? != g.restrict_below(d, sys)? {
                    continue;
                }
                for b in &keys {
                    if !lt(b, d)? {
                        continue;
                    }
                    for a in &args {
                        second += 1;
                        let outcome = (|| {
                            let h = g.step_down(b, a, sys)?;
                            if f.restrict_below(b, sys)? != h.restrict_below(b, sys)? {
                                return Ok(false);
                            }
                            f.less_at(b, &h.prime(sys)?.get(b), sys)
                        })();
                        let label = format!("law 2 with f = {}, g = {}, d = {d}", fn_text(f), fn_text(g));
                        r.check(&label, &[b, a], outcome);
                    }
                }
            }
        }
    }
    r.set_stat("law2-instances", second);
    Ok(r.finish(clock))
}

fn fn_text(f: &FiniteFn) -> String {
    let body: Vec<String> = f.entries().iter().map(|(k, v)| format!("{k}: {v}")).collect();
    format!("{{{}}}", body.join(", "))
}

/// `α₀ < α ⇔ ψ_Ω(α₀) < ψ_Ω(α)` for all universe terms whose ψ_Ω is valid.
pub fn check_psi_monotone(sys: SystemId, budget: &Budget) -> Result<Report> {
    let clock = Instant::now();
    let mut r = Report::new("psi-monotone", Some(sys));
    let universe = enumerate(sys, budget)?;
    r.universe_size = universe.len();
    let om = OrdTerm::konst(Const::Omega);
    let args: Vec<(OrdTerm, OrdTerm)> = universe
        .iter()
        .map(|a| (a.clone(), OrdTerm::psi(om.clone(), PsiIndex::None, a.clone())))
        .filter(|(_, p)| validate(sys, p).ok)
        .collect();
    r.set_stat("valid-arguments", args.len() as u64);
    for (a0, p0) in &args {
        for (a, p) in &args {
            let outcome = (|| Ok(compare(sys, a0, a)? == compare(sys, p0, p)?))();
            r.check("ψ_Ω does not preserve the order", &[a0, a], outcome);
        }
    }
    Ok(r.finish(clock))
}

/// No ψ-term jumps over a dagger: there is no `ψ_σ^f(a)` with
/// `ρ < ψ_σ^f(a) ≤ ρ† < σ` for a collapse point ρ.  Also checks the chain
/// `ρ < ψ_{ρ†}^g(b) < ρ† < 𝕀[ρ]` on the same universe.
pub fn check_jumpover(budget: &Budget) -> Result<Report> {
    let sys = SystemId::Stab;
    let clock = Instant::now();
    let mut r = Report::new("jumpover", Some(sys));
    let universe = Enumeration::generate(sys, budget)?.terms();
    r.universe_size = universe.len();
    let psis: Vec<&OrdTerm> = universe.iter().filter(|t| t.is_psi()).collect();
    let lt = |x: &OrdTerm, y: &OrdTerm| compare(sys, x, y).map(|o| o == Ordering::Less);
    let mut points = 0u64;
    for rho in universe.iter().filter(|t| in_psi_class(t, sys)) {
        points += 1;
        let dag = OrdTerm::from_node(Node::Dagger(rho.clone()));
        let iof = OrdTerm::from_node(Node::IOf(rho.clone()));
        r.check("ρ < ρ† < 𝕀[ρ]", &[rho], (|| Ok(lt(rho, &dag)? && lt(&dag, &iof)?))());
        for x in &psis {
            let Node::Psi(sigma, ..) = x.node() else { continue };
            let outcome = (|| Ok(!(lt(rho, x)? && !lt(&dag, x)? && lt(&dag, sigma)?)))();
            r.check("ψ-term between ρ and ρ†", &[rho, x], outcome);
            if sigma == &dag {
                let chain = (|| Ok(lt(rho, x)? && lt(x, &dag)?))();
                r.check("ρ < ψ_{ρ†}(…) < ρ†", &[rho, x], chain);
            }
        }
    }
    r.set_stat("collapse-points", points);
    Ok(r.finish(clock))
}

/// `ω_n(x)`: `ω_0(x) = x`, `ω_{n+1}(x) = ω^{ω_n(x)}`.
pub fn omega_tower(n: u32, x: &OrdTerm, sys: SystemId) -> Result<OrdTerm> {
    let mut t = x.clone();
    for _ in 0..n {
        t = veblen(&OrdTerm::zero(), &t, sys)?;
    }
    Ok(t)
}

/// `ψ_Ω(ω_n(Λ+1))` for `n = 0..=n_max`, where Λ is Ω for BH, 𝕂 for the
/// reflection systems and 𝕀 for OT(𝕀).
pub fn milestone_ladder(sys: SystemId, n_max: u32) -> Result<Vec<OrdTerm>> {
    let top = match sys {
        SystemId::BH => Const::Omega,
        other => other.lambda(),
    };
    let base = add(&OrdTerm::konst(top), &OrdTerm::one(), sys)?;
    (0..=n_max)
        .map(|n| Ok(OrdTerm::psi(OrdTerm::konst(Const::Omega), PsiIndex::None, omega_tower(n, &base, sys)?)))
        .collect()
}

/// The ladder is valid, strictly increasing and bounded by Ω.
pub fn check_ladder(sys: SystemId, n_max: u32) -> Result<Report> {
    let clock = Instant::now();
    let mut r = Report::new("ladder", Some(sys));
    let ladder = milestone_ladder(sys, n_max)?;
    r.universe_size = ladder.len();
    let om = OrdTerm::konst(Const::Omega);
    for (i, t) in ladder.iter().enumerate() {
        let v = validate(sys, t);
        r.checked += 1;
        if !v.ok {
            r.fail(Finding::new(format!("invalid: {:?}", v.reasons), &[t]));
        }
        r.check("not below Ω", &[t], compare(sys, t, &om).map(|o| o == Ordering::Less));
        if i > 0 {
            r.check("not increasing", &[&ladder[i - 1], t], compare(sys, &ladder[i - 1], t).map(|o| o == Ordering::Less));
        }
    }
    Ok(r.finish(clock))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str, sys: SystemId) -> OrdTerm {
        parse(s, sys).unwrap()
    }

    #[test]
    fn linear_order_reports_instead_of_panicking() {
        let sys = SystemId::BH;
        let good = check_linear_order(sys, &Budget::with_maxlen(4)).unwrap();
        assert!(good.passed(), "{}", good.to_text());
        let junk = vec![t("Om", sys), OrdTerm::psi(OrdTerm::zero(), PsiIndex::None, OrdTerm::zero())];
        let r = check_linear_order_on(sys, &junk);
        assert_eq!(r.universe_size, 2);
        let _ = r.to_text();
    }

    #[test]
    fn cycle_detection() {
        let less = vec![vec![false, true, false], vec![false, false, true], vec![true, false, false]];
        assert_eq!(find_cycle(&less), Some((0, 1, 2)));
    }

    #[test]
    fn descent_from_zero_is_empty() {
        let sys = SystemId::BH;
        let r = check_descent(sys, &OrdTerm::zero(), Stepper::MaxSubtermBelow, 1, 0, &Budget::with_maxlen(3)).unwrap();
        assert!(r.passed());
        assert_eq!(r.stat("longest-chain"), Some(0));
        let r = check_descent(sys, &t("psi(Om; 0)", sys), Stepper::MaxSubtermBelow, 1, 0, &Budget::with_maxlen(3)).unwrap();
        assert!(r.passed());
        assert_eq!(r.stat("longest-chain"), Some(1));
    }

    #[test]
    fn descent_reports_exhausted_fuel() {
        let sys = SystemId::BH;
        let budget = Budget { fuel: 0, ..Budget::with_maxlen(4) };
        let r = check_descent(sys, &t("psi(Om; 1)", sys), Stepper::RandomSmaller, 3, 1, &budget).unwrap();
        assert!(!r.passed());
        assert!(r.failures[0].what.contains("fuel"));
    }

    #[test]
    fn ladder_shape() {
        let l = milestone_ladder(SystemId::Pi3, 2).unwrap();
        assert_eq!(l[0], t("psi(Om; K + 1)", SystemId::Pi3));
        assert_eq!(l[1], t("psi(Om; phi(0, K + 1))", SystemId::Pi3));
        assert!(check_ladder(SystemId::BH, 3).unwrap().passed());
    }

    #[test]
    fn closure_is_antitone_in_alpha() {
        let sys = SystemId::Pi3;
        let budget = Budget::with_maxlen(4);
        let xs: SupportSet = [t("1", sys), t("psi(Om; 0)", sys)].into_iter().collect();
        let small = closure_c(&t("1", sys), &xs, sys, &budget).unwrap();
        let big = closure_c(&t("Om", sys), &xs, sys, &budget).unwrap();
        assert!(big.is_subset(&small));
        let empty = closure_c(&OrdTerm::zero(), &SupportSet::new(), sys, &budget).unwrap();
        assert!(empty.contains(&t("K", sys)) && empty.contains(&t("psi(Om; 0)", sys)));
    }

    #[test]
    fn jsonl_omits_time() {
        let r = check_ladder(SystemId::BH, 1).unwrap();
        let line = r.to_jsonl();
        assert!(!line.contains("elapsed"));
        assert_eq!(line, check_ladder(SystemId::BH, 1).unwrap().to_jsonl());
    }
}
