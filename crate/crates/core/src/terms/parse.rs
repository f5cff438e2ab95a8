//! Recursive-descent parser for the ASCII term grammar.
//!
//! ```text
//! expr    := term ('+' term)*
//! term    := primary ('*' primary)*
//! primary := '0' | <integer> | 'Om' | 'K' | 'S' | 'I' | 'I' '[' expr ']'
//!          | 'phi' '(' expr ',' expr ')' | 't~' '(' expr ',' expr ')'
//!          | 'th' '(' expr ',' expr ')'
//!          | 'psi' '(' expr [',' index] ';' expr ')'
//!          | 'reg+' '(' expr ')' | 'dag' '(' expr ')' | '(' expr ')'
//! index   := expr | '[' expr (',' expr)* ']' | '{' [expr ':' expr (',' expr ':' expr)*] '}'
//! ```
//!
//! Parsing evaluates as it goes, so the result is always in normal form for
//! the given system (sums are added, `th` is unfolded, `t~` and `phi` are
//! rewritten).  The Unicode symbols `Ω 𝕂 𝕊 𝕀 φ ψ` are accepted as aliases.

use super::arith::{add, normalize_index, scale, theta, theta_tilde, veblen};
use super::{Const, Node, OrdTerm, PsiIndex};
use crate::error::{Error, Result};
use crate::finite_fn::FiniteFn;
use crate::systems::SystemId;

/// Parses and normalizes a term for `sys`.
pub fn parse(text: &str, sys: SystemId) -> Result<OrdTerm> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0, sys };
    let t = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error(format!("unexpected `{}`", p.chars[p.pos])));
    }
    Ok(t)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    sys: SystemId,
}

impl Parser {
    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { col: self.pos + 1, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(d) => Err(self.error(format!("expected `{c}`, found `{d}`"))),
                None => Err(self.error(format!("expected `{c}`, found end of input"))),
            }
        }
    }

    /// Consumes `word` if the input continues with it.
    fn keyword(&mut self, word: &str) -> bool {
        self.skip_ws();
        let w: Vec<char> = word.chars().collect();
        if self.chars[self.pos..].starts_with(&w) {
            let next = self.chars.get(self.pos + w.len()).copied();
            let ident_like = w.last().is_some_and(|c| c.is_alphanumeric());
            if ident_like && next.is_some_and(|c| c.is_alphanumeric() || c == '_') {
                return false;
            }
            self.pos += w.len();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<OrdTerm> {
        stacker::maybe_grow(64 * 1024, 2 * 1024 * 1024, || {
            let mut acc = self.term()?;
            while self.eat('+') {
                let rhs = self.term()?;
                acc = add(&acc, &rhs, self.sys)?;
            }
            Ok(acc)
        })
    }

    fn term(&mut self) -> Result<OrdTerm> {
        let mut acc = self.primary()?;
        while self.eat('*') {
            let start = self.pos;
            let n = self.primary()?;
            if n.is_zero() {
                self.pos = start;
                return Err(self.error("count must be nonzero"));
            }
            acc = scale(&acc, &n, self.sys)?;
        }
        Ok(acc)
    }

    fn pair(&mut self) -> Result<(OrdTerm, OrdTerm)> {
        self.expect('(')?;
        let a = self.expr()?;
        self.expect(',')?;
        let b = self.expr()?;
        self.expect(')')?;
        Ok((a, b))
    }

    fn single(&mut self) -> Result<OrdTerm> {
        self.expect('(')?;
        let a = self.expr()?;
        self.expect(')')?;
        Ok(a)
    }

    fn primary(&mut self) -> Result<OrdTerm> {
        let sys = self.sys;
        let Some(c) = self.peek() else {
            return Err(self.error("unexpected end of input"));
        };
        if c.is_ascii_digit() {
            let start = self.pos;
            while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let digits: String = self.chars[start..self.pos].iter().collect();
            return digits.parse::<u64>().map(OrdTerm::nat).map_err(|_| {
                self.pos = start;
                self.error("numeral out of range")
            });
        }
        if self.eat('(') {
            let t = self.expr()?;
            self.expect(')')?;
            return Ok(t);
        }
        if self.keyword("phi") || self.keyword("φ") {
            let (b, x) = self.pair()?;
            return veblen(&b, &x, sys);
        }
        if self.keyword("t~") || self.keyword("θ̃") {
            let (b, x) = self.pair()?;
            return theta_tilde(&b, &x, sys);
        }
        if self.keyword("th") {
            let (b, x) = self.pair()?;
            return theta(&b, &x, sys);
        }
        if self.keyword("psi") || self.keyword("ψ") {
            return self.psi();
        }
        if self.keyword("reg+") {
            let b = self.single()?;
            return Ok(if b.is_const(Const::BigS) {
                OrdTerm::konst(Const::BigK)
            } else {
                OrdTerm::from_node(Node::NextReg(b))
            });
        }
        if self.keyword("dag") {
            let b = self.single()?;
            return Ok(OrdTerm::from_node(Node::Dagger(b)));
        }
        if self.keyword("Om") || self.keyword("Ω") {
            return Ok(OrdTerm::konst(Const::Omega));
        }
        if self.keyword("K") || self.keyword("𝕂") {
            return Ok(OrdTerm::konst(Const::BigK));
        }
        if self.keyword("S") || self.keyword("𝕊") {
            return Ok(OrdTerm::konst(Const::BigS));
        }
        if self.keyword("I") || self.keyword("𝕀") {
            if self.eat('[') {
                let r = self.expr()?;
                self.expect(']')?;
                return Ok(OrdTerm::from_node(Node::IOf(r)));
            }
            return Ok(OrdTerm::konst(Const::BigI));
        }
        Err(self.error(format!("unexpected `{c}`")))
    }

    fn psi(&mut self) -> Result<OrdTerm> {
        self.expect('(')?;
        let sub = self.expr()?;
        let index = if self.eat(',') { self.index()? } else { PsiIndex::None };
        self.expect(';')?;
        let arg = self.expr()?;
        self.expect(')')?;
        let index = normalize_index(&index, self.sys)?;
        Ok(OrdTerm::psi(sub, index, arg))
    }

    fn index(&mut self) -> Result<PsiIndex> {
        if self.eat('[') {
            let mut vs = vec![self.expr()?];
            while self.eat(',') {
                vs.push(self.expr()?);
            }
            self.expect(']')?;
            return Ok(PsiIndex::Vec(vs));
        }
        if self.eat('{') {
            let mut entries = Vec::new();
            if !self.eat('}') {
                loop {
                    let k = self.expr()?;
                    self.expect(':')?;
                    let v = self.expr()?;
                    entries.push((k, v));
                    if self.eat('}') {
                        break;
                    }
                    self.expect(',')?;
                }
            }
            return Ok(PsiIndex::Fn(FiniteFn::raw(entries, self.sys.lambda())));
        }
        Ok(PsiIndex::Ord(self.expr()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::{render, Style};

    #[test]
    fn parses_plain_psi() {
        let t = parse("psi(Om; 0)", SystemId::BH).unwrap();
        assert_eq!(
            t,
            OrdTerm::psi(OrdTerm::konst(Const::Omega), PsiIndex::None, OrdTerm::zero())
        );
    }

    #[test]
    fn parses_function_index() {
        let t = parse("psi(S, {Om: t~(1, 2)}; 0)", SystemId::Pi11).unwrap();
        match t.node() {
            Node::Psi(_, PsiIndex::Fn(f), _) => assert_eq!(f.entries().len(), 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_report_columns() {
        match parse("phi(0, Om", SystemId::BH) {
            Err(Error::Syntax { col, .. }) => assert_eq!(col, 10),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("psi(Om 0)", SystemId::BH), Err(Error::Syntax { .. })));
        assert!(matches!(parse("", SystemId::BH), Err(Error::Syntax { col: 1, .. })));
        assert!(matches!(parse("Om * 0", SystemId::BH), Err(Error::Syntax { .. })));
    }

    #[test]
    fn numerals_and_counts() {
        let sys = SystemId::BH;
        assert_eq!(parse("3", sys).unwrap(), OrdTerm::nat(3));
        assert_eq!(parse("1 + 1 + 1", sys).unwrap(), OrdTerm::nat(3));
        assert_eq!(render(&parse("Om * 2 + 3", sys).unwrap(), Style::Ascii), "Om * 2 + 3");
        assert_eq!(parse("1 + phi(0,1)", sys).unwrap(), OrdTerm::omega());
        assert_eq!(parse("phi(0,1) * phi(0,1)", sys).unwrap(), parse("phi(0, 2)", sys).unwrap());
    }

    #[test]
    fn keywords_do_not_swallow_identifiers() {
        assert!(parse("Omx", SystemId::BH).is_err());
        assert!(parse("Kappa", SystemId::Pi3).is_err());
    }
}
