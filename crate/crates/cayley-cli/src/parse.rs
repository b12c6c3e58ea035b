//! Bundle-expression grammar.
//!
//! ```text
//! expr   := term { "+" term }
//! term   := factor { "*" factor }
//! factor := atom { "(" int ")" | "[" int "]" }
//! atom   := "O" | base | "S{" int { "," int } "}" base | "W" int base
//!         | "Sym" int base | "R" | "E10" | "E16" | "K" | "(" expr ")"
//! base   := "U" | "U*" | "Q" | "Uperp" | "(" base ")"
//! ```
//!
//! A `*` written directly after `U` is always part of `U*`; put a space
//! before the tensor sign (`U * Q`).

use cayley::derived::{presets, PresetKind};
use cayley::schur::{expand, Base, BundleExpr, Preset};
use cayley::{FormalComplex, CG};

use crate::error::ParseError;

pub fn parse(text: &str) -> Result<BundleExpr, ParseError> {
    let mut p = Parser { src: text, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected input after expression"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.rest().chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{tok}'")))
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = start;
        if end < bytes.len() && bytes[end] == b'-' {
            end += 1;
        }
        let digits = end;
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
        if end == digits {
            return Err(self.error("expected an integer"));
        }
        let v = self.src[start..end].parse().map_err(|_| self.error("integer out of range"))?;
        self.pos = end;
        Ok(v)
    }

    fn expr(&mut self) -> Result<BundleExpr, ParseError> {
        let mut parts = vec![self.term()?];
        while self.eat("+") {
            parts.push(self.term()?);
        }
        Ok(if parts.len() == 1 { parts.pop().expect("one part") } else { BundleExpr::Sum(parts) })
    }

    fn term(&mut self) -> Result<BundleExpr, ParseError> {
        let mut parts = vec![self.factor()?];
        while self.eat("*") {
            parts.push(self.factor()?);
        }
        Ok(if parts.len() == 1 { parts.pop().expect("one part") } else { BundleExpr::Tensor(parts) })
    }

    fn factor(&mut self) -> Result<BundleExpr, ParseError> {
        let mut e = self.atom()?;
        loop {
            let save = self.pos;
            if self.eat("(") {
                match self.int() {
                    Ok(t) => {
                        self.expect(")")?;
                        e = BundleExpr::Twist(Box::new(e), t);
                    }
                    Err(_) => {
                        self.pos = save;
                        return Err(self.error("expected a twist '(int)' or an operator"));
                    }
                }
            } else if self.eat("[") {
                let m = self.int()?;
                self.expect("]")?;
                e = BundleExpr::Shift(Box::new(e), m);
            } else {
                return Ok(e);
            }
        }
    }

    fn base(&mut self) -> Result<Base, ParseError> {
        if self.eat("(") {
            let b = self.base()?;
            self.expect(")")?;
            return Ok(b);
        }
        self.try_base().ok_or_else(|| self.error("expected a base bundle U, U*, Q or Uperp"))
    }

    fn try_base(&mut self) -> Option<Base> {
        for (tok, b) in [("Uperp", Base::UPerp), ("U*", Base::UDual), ("U", Base::U), ("Q", Base::Q)] {
            if self.eat(tok) {
                return Some(b);
            }
        }
        None
    }

    fn atom(&mut self) -> Result<BundleExpr, ParseError> {
        let start = self.pos;
        if self.peek().is_none() {
            return Err(self.error("unexpected end of input"));
        }
        if self.eat("(") {
            let e = self.expr()?;
            self.expect(")")?;
            return Ok(e);
        }
        if self.eat("Sym") {
            let i = self.nonneg()?;
            return Ok(BundleExpr::Sym(i, Box::new(BundleExpr::Base(self.base()?))));
        }
        if self.eat("S{") {
            let at = self.pos;
            let mut w = vec![self.int()?];
            while self.eat(",") {
                w.push(self.int()?);
            }
            self.expect("}")?;
            if w.windows(2).any(|p| p[0] < p[1]) {
                return Err(ParseError::NotDominant { pos: at, weight: w });
            }
            return Ok(BundleExpr::Schur(w, Box::new(BundleExpr::Base(self.base()?))));
        }
        if let Some(b) = self.try_base() {
            return Ok(BundleExpr::Base(b));
        }
        for (tok, p) in [("E10", Preset::E10), ("E16", Preset::E16), ("R", Preset::R), ("K", Preset::K)] {
            if self.eat(tok) {
                return Ok(BundleExpr::Preset(p));
            }
        }
        if self.eat("O") {
            return Ok(BundleExpr::Structure);
        }
        if self.eat("W") {
            let i = self.nonneg()?;
            return Ok(BundleExpr::Wedge(i, Box::new(BundleExpr::Base(self.base()?))));
        }
        self.pos = start;
        self.skip_ws();
        Err(self.error("expected a bundle"))
    }

    fn nonneg(&mut self) -> Result<u32, ParseError> {
        let at = self.pos;
        let v = self.int()?;
        u32::try_from(v).map_err(|_| ParseError::Syntax { pos: at, msg: "expected a non-negative integer".into() })
    }
}

fn contains_complex(e: &BundleExpr) -> bool {
    match e {
        BundleExpr::Preset(_) | BundleExpr::Shift(..) => true,
        BundleExpr::Structure | BundleExpr::Base(_) => false,
        BundleExpr::Schur(_, x) | BundleExpr::Wedge(_, x) | BundleExpr::Sym(_, x) | BundleExpr::Twist(x, _) => {
            contains_complex(x)
        }
        BundleExpr::Sum(xs) | BundleExpr::Tensor(xs) => xs.iter().any(contains_complex),
    }
}

fn preset_kind(p: Preset) -> PresetKind {
    match p {
        Preset::R => PresetKind::R,
        Preset::K => PresetKind::K,
        Preset::E10 => PresetKind::E10,
        Preset::E16 => PresetKind::E16,
    }
}

/// Resolves an expression to a complex. Presets and shifts may be twisted
/// and shifted but not summed or tensored.
pub fn to_complex(e: &BundleExpr) -> Result<FormalComplex, ParseError> {
    if !contains_complex(e) {
        let s = expand(e, CG.ambient)?;
        let mut c = FormalComplex::from_sum(s);
        c.name = e.to_string();
        return Ok(c);
    }
    let mut c = match e {
        BundleExpr::Preset(p) => presets::by_kind(preset_kind(*p)),
        BundleExpr::Twist(x, t) => to_complex(x)?.twist(*t),
        BundleExpr::Shift(x, m) => to_complex(x)?.shift(*m),
        _ => return Err(ParseError::Unsupported(e.to_string())),
    };
    c.name = e.to_string();
    Ok(c)
}

/// Resolves an expression that must be a plain bundle.
pub fn to_bundle(e: &BundleExpr) -> Result<cayley::BundleSum, ParseError> {
    if let Some(pos) = shift_context(e) {
        return Err(ParseError::ShiftNotAllowed { what: pos });
    }
    Ok(expand(e, CG.ambient)?)
}

fn shift_context(e: &BundleExpr) -> Option<String> {
    match e {
        BundleExpr::Shift(..) => Some(e.to_string()),
        BundleExpr::Twist(x, _) => shift_context(x),
        BundleExpr::Sum(xs) | BundleExpr::Tensor(xs) => xs.iter().find_map(shift_context),
        _ => None,
    }
}

/// A collection file: one expression per line, `--- block` between
/// Lefschetz blocks, `#` comments.
#[derive(Debug, Clone)]
pub struct CollectionFile {
    pub objects: Vec<FormalComplex>,
    /// Block sizes when separators are present.
    pub blocks: Option<Vec<usize>>,
}

pub fn parse_collection(text: &str) -> Result<CollectionFile, ParseError> {
    let mut objects = Vec::new();
    let mut blocks = vec![0usize];
    let mut separated = false;
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with("---") {
            separated = true;
            blocks.push(0);
            continue;
        }
        let e = parse(line).map_err(|err| ParseError::Line { line: n + 1, inner: Box::new(err) })?;
        let c = to_complex(&e).map_err(|err| ParseError::Line { line: n + 1, inner: Box::new(err) })?;
        objects.push(c);
        *blocks.last_mut().expect("nonempty") += 1;
    }
    blocks.retain(|&b| b > 0);
    Ok(CollectionFile { objects, blocks: separated.then_some(blocks) })
}

/// The builtin collection as a file, blocks separated.
pub fn cg15_text() -> String {
    [
        "O", "U*", "W2 U*", "R", "S{2,1}U*", "--- block", "O(1)", "U*(1)", "W2 U*(1)", "R(1)", "--- block", "O(2)",
        "U*(2)", "W2 U*(2)", "--- block", "O(3)", "U*(3)", "W2 U*(3)",
    ]
    .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twist_binds_to_atom() {
        let e = parse("W2(U*)(1)").unwrap();
        assert_eq!(e, BundleExpr::Twist(Box::new(BundleExpr::Wedge(2, Box::new(BundleExpr::Base(Base::UDual)))), 1));
    }

    #[test]
    fn bad_base_is_positioned() {
        match parse("S{2,2}X") {
            Err(ParseError::Syntax { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("{other:?}"),
        }
    }
}
