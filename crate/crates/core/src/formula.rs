//! Modal formulas: syntax tree, parser, printer, Gödel numbering and the
//! syntactic operators ∼ (negation companion), ¬ᵏ (iterated negation) and ★
//! (negation-parity normal form).
//!
//! Formulas are immutable and shared. Equality is structural; the total order
//! is the Gödel-number order, so ordered collections iterate in code order.

use crate::coding::{GNumber, Grammar, LengthLex};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::{Arc, OnceLock};
use thiserror::Error;

/// Radix of modal Gödel numbers.
pub const BASE: u16 = 73;

pub(crate) const D_BOT: u16 = 1;
pub(crate) const D_TOP: u16 = 2;
pub(crate) const D_NOT: u16 = 3;
pub(crate) const D_BOX: u16 = 4;
pub(crate) const D_AND: u16 = 5;
pub(crate) const D_OR: u16 = 6;
pub(crate) const D_IMP: u16 = 7;
pub(crate) const D_VAR: u16 = 8;
pub(crate) const D_END: u16 = 72;

/// Digit of an identifier character: a-z, A-Z, 0-9, `_` map onto 9..=71.
pub(crate) fn char_digit(c: char) -> Option<u16> {
    let d = match c {
        'a'..='z' => 9 + (c as u16 - 'a' as u16),
        'A'..='Z' => 35 + (c as u16 - 'A' as u16),
        '0'..='9' => 61 + (c as u16 - '0' as u16),
        '_' => 71,
        _ => return None,
    };
    Some(d)
}

pub(crate) fn digit_char(d: u16) -> Option<char> {
    let c = match d {
        9..=34 => (b'a' + (d - 9) as u8) as char,
        35..=60 => (b'A' + (d - 35) as u8) as char,
        61..=70 => (b'0' + (d - 61) as u8) as char,
        71 => '_',
        _ => return None,
    };
    Some(c)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Bot,
    Top,
    Var(Arc<str>),
    Not(Formula),
    And(Formula, Formula),
    Or(Formula, Formula),
    Imp(Formula, Formula),
    Box(Formula),
}

#[derive(Debug)]
struct Node {
    kind: Kind,
    hash: u64,
    code_len: u32,
    size: u32,
    md: u32,
}

/// A modal formula over ⊥, ⊤, variables, ¬, ∧, ∨, → and □.
#[derive(Clone)]
pub struct Formula(Arc<Node>);

impl Formula {
    fn make(kind: Kind) -> Formula {
        let mut h = DefaultHasher::new();
        let (code_len, size, md) = match &kind {
            Kind::Bot => {
                0u8.hash(&mut h);
                (1, 1, 0)
            }
            Kind::Top => {
                1u8.hash(&mut h);
                (1, 1, 0)
            }
            Kind::Var(name) => {
                2u8.hash(&mut h);
                name.hash(&mut h);
                (name.chars().count() as u32 + 2, 1, 0)
            }
            Kind::Not(a) => {
                3u8.hash(&mut h);
                h.write_u64(a.0.hash);
                (a.0.code_len + 1, a.0.size + 1, a.0.md)
            }
            Kind::Box(a) => {
                4u8.hash(&mut h);
                h.write_u64(a.0.hash);
                (a.0.code_len + 1, a.0.size + 1, a.0.md + 1)
            }
            Kind::And(a, b) | Kind::Or(a, b) | Kind::Imp(a, b) => {
                let tag = match &kind {
                    Kind::And(..) => 5u8,
                    Kind::Or(..) => 6,
                    _ => 7,
                };
                tag.hash(&mut h);
                h.write_u64(a.0.hash);
                h.write_u64(b.0.hash);
                (a.0.code_len + b.0.code_len + 1, a.0.size + b.0.size + 1, a.0.md.max(b.0.md))
            }
        };
        Formula(Arc::new(Node { kind, hash: h.finish(), code_len, size, md }))
    }

    pub fn bot() -> Formula {
        static BOT: OnceLock<Formula> = OnceLock::new();
        BOT.get_or_init(|| Formula::make(Kind::Bot)).clone()
    }

    pub fn top() -> Formula {
        static TOP: OnceLock<Formula> = OnceLock::new();
        TOP.get_or_init(|| Formula::make(Kind::Top)).clone()
    }

    /// A propositional variable. Panics on names outside `[a-zA-Z][a-zA-Z0-9_]*`.
    pub fn var(name: &str) -> Formula {
        assert!(is_identifier(name), "invalid variable name {name:?}");
        Formula::make(Kind::Var(Arc::from(name)))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::make(Kind::Not(a))
    }

    pub fn boxed(a: Formula) -> Formula {
        Formula::make(Kind::Box(a))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::make(Kind::And(a, b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::make(Kind::Or(a, b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::make(Kind::Imp(a, b))
    }

    /// `a ↔ b`, sugar for `(a → b) ∧ (b → a)`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        self.0.size as usize
    }

    /// Modal depth.
    pub fn modal_depth(&self) -> usize {
        self.0.md as usize
    }

    /// Number of digits in the Gödel code.
    pub fn code_len(&self) -> usize {
        self.0.code_len as usize
    }

    pub fn is_box(&self) -> bool {
        matches!(self.kind(), Kind::Box(_))
    }

    pub fn box_arg(&self) -> Option<&Formula> {
        match self.kind() {
            Kind::Box(a) => Some(a),
            _ => None,
        }
    }

    pub fn not_arg(&self) -> Option<&Formula> {
        match self.kind() {
            Kind::Not(a) => Some(a),
            _ => None,
        }
    }

    /// ∼A: drop one leading negation, or add one.
    pub fn neg_companion(&self) -> Formula {
        match self.kind() {
            Kind::Not(a) => a.clone(),
            _ => Formula::not(self.clone()),
        }
    }

    /// ¬ᵏA.
    pub fn iterated_neg(&self, k: usize) -> Formula {
        (0..k).fold(self.clone(), |acc, _| Formula::not(acc))
    }

    /// Splits `¬ᵏB` (B not a negation) into `(k, B)`.
    pub fn strip_negations(&self) -> (usize, &Formula) {
        let mut k = 0;
        let mut cur = self;
        while let Kind::Not(a) = cur.kind() {
            k += 1;
            cur = a;
        }
        (k, cur)
    }

    /// A★: `B` if `A ≡ ¬ᵏB` with k even, `¬B` if k odd.
    pub fn star(&self) -> Formula {
        let (k, base) = self.strip_negations();
        if k % 2 == 0 {
            base.clone()
        } else {
            Formula::not(base.clone())
        }
    }

    /// Writes the Polish digit string of the formula.
    pub fn write_digits(&self, out: &mut Vec<u16>) {
        match self.kind() {
            Kind::Bot => out.push(D_BOT),
            Kind::Top => out.push(D_TOP),
            Kind::Var(name) => {
                out.push(D_VAR);
                out.extend(name.chars().map(|c| char_digit(c).expect("validated identifier")));
                out.push(D_END);
            }
            Kind::Not(a) => {
                out.push(D_NOT);
                a.write_digits(out);
            }
            Kind::Box(a) => {
                out.push(D_BOX);
                a.write_digits(out);
            }
            Kind::And(a, b) | Kind::Or(a, b) | Kind::Imp(a, b) => {
                out.push(match self.kind() {
                    Kind::And(..) => D_AND,
                    Kind::Or(..) => D_OR,
                    _ => D_IMP,
                });
                a.write_digits(out);
                b.write_digits(out);
            }
        }
    }

    pub fn digits(&self) -> Vec<u16> {
        let mut out = Vec::with_capacity(self.code_len());
        self.write_digits(&mut out);
        out
    }

    /// The Gödel number.
    pub fn gn(&self) -> GNumber {
        GNumber::from_digits(&self.digits(), BASE)
    }

    /// Decodes a complete digit string; `None` if it is not well formed.
    pub fn from_digits(digits: &[u16]) -> Option<Formula> {
        let mut pos = 0;
        let f = decode(digits, &mut pos)?;
        (pos == digits.len()).then_some(f)
    }

    pub fn from_gn(n: &GNumber) -> Option<Formula> {
        Formula::from_digits(&n.to_digits(BASE)?)
    }

    /// Propositional variables occurring in the formula, in code order.
    pub fn vars(&self) -> Vec<Formula> {
        let mut out = std::collections::BTreeSet::new();
        self.collect_vars(&mut out);
        out.into_iter().collect()
    }

    fn collect_vars(&self, out: &mut std::collections::BTreeSet<Formula>) {
        match self.kind() {
            Kind::Bot | Kind::Top => {}
            Kind::Var(_) => {
                out.insert(self.clone());
            }
            Kind::Not(a) | Kind::Box(a) => a.collect_vars(out),
            Kind::And(a, b) | Kind::Or(a, b) | Kind::Imp(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    // Lexicographic comparison of the (prefix-free) digit strings.
    fn lex_cmp(&self, other: &Formula) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        let head = |f: &Formula| match f.kind() {
            Kind::Bot => D_BOT,
            Kind::Top => D_TOP,
            Kind::Not(_) => D_NOT,
            Kind::Box(_) => D_BOX,
            Kind::And(..) => D_AND,
            Kind::Or(..) => D_OR,
            Kind::Imp(..) => D_IMP,
            Kind::Var(_) => D_VAR,
        };
        head(self).cmp(&head(other)).then_with(|| match (self.kind(), other.kind()) {
            (Kind::Var(x), Kind::Var(y)) => {
                let dx = x.chars().map(|c| char_digit(c).unwrap()).chain([D_END]);
                let dy = y.chars().map(|c| char_digit(c).unwrap()).chain([D_END]);
                dx.cmp(dy)
            }
            (Kind::Not(a), Kind::Not(b)) | (Kind::Box(a), Kind::Box(b)) => a.lex_cmp(b),
            (Kind::And(a1, b1), Kind::And(a2, b2))
            | (Kind::Or(a1, b1), Kind::Or(a2, b2))
            | (Kind::Imp(a1, b1), Kind::Imp(a2, b2)) => a1.lex_cmp(a2).then_with(|| b1.lex_cmp(b2)),
            _ => Ordering::Equal,
        })
    }
}

pub(crate) fn decode(d: &[u16], pos: &mut usize) -> Option<Formula> {
    let head = *d.get(*pos)?;
    *pos += 1;
    Some(match head {
        D_BOT => Formula::bot(),
        D_TOP => Formula::top(),
        D_NOT => Formula::not(decode(d, pos)?),
        D_BOX => Formula::boxed(decode(d, pos)?),
        D_AND | D_OR | D_IMP => {
            let a = decode(d, pos)?;
            let b = decode(d, pos)?;
            match head {
                D_AND => Formula::and(a, b),
                D_OR => Formula::or(a, b),
                _ => Formula::imp(a, b),
            }
        }
        D_VAR => {
            let mut name = String::new();
            loop {
                let x = *d.get(*pos)?;
                *pos += 1;
                if x == D_END {
                    break;
                }
                name.push(digit_char(x)?);
            }
            if !is_identifier(&name) {
                return None;
            }
            Formula::var(&name)
        }
        _ => return None,
    })
}

impl PartialEq for Formula {
    fn eq(&self, other: &Formula) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.hash == other.0.hash && self.0.code_len == other.0.code_len && self.0.kind == other.0.kind)
    }
}

impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl Ord for Formula {
    fn cmp(&self, other: &Formula) -> Ordering {
        self.0.code_len.cmp(&other.0.code_len).then_with(|| self.lex_cmp(other))
    }
}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Formula) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The grammar of modal digit strings, for enumeration in code order.
pub struct ModalGrammar {
    table: [Vec<(u16, Vec<ModalItem>)>; 3],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModalItem {
    Term,
    NameFirst,
    NameRest,
}

impl ModalGrammar {
    pub fn new() -> Self {
        use ModalItem::*;
        let term = vec![
            (D_BOT, vec![]),
            (D_TOP, vec![]),
            (D_NOT, vec![Term]),
            (D_BOX, vec![Term]),
            (D_AND, vec![Term, Term]),
            (D_OR, vec![Term, Term]),
            (D_IMP, vec![Term, Term]),
            (D_VAR, vec![NameFirst]),
        ];
        let first = (9..=60).map(|d| (d, vec![NameRest])).collect();
        let mut rest: Vec<(u16, Vec<ModalItem>)> = (9..=71).map(|d| (d, vec![NameRest])).collect();
        rest.push((D_END, vec![]));
        ModalGrammar { table: [term, first, rest] }
    }

    /// The infinite sequence ⟨ξ_t⟩ of all formulas in increasing code order.
    pub fn enumerate(&self) -> impl Iterator<Item = Formula> + '_ {
        // Keyword-spelled names are well formed for the grammar but not identifiers.
        LengthLex::new(self).filter_map(|d| Formula::from_digits(&d))
    }
}

impl Default for ModalGrammar {
    fn default() -> Self {
        Self::new()
    }
}

impl Grammar for ModalGrammar {
    type Item = ModalItem;
    fn start(&self) -> ModalItem {
        ModalItem::Term
    }
    fn choices(&self, item: ModalItem) -> &[(u16, Vec<ModalItem>)] {
        &self.table[item as usize]
    }
    fn min_len(&self, item: ModalItem) -> usize {
        match item {
            ModalItem::Term => 1,
            ModalItem::NameFirst => 2,
            ModalItem::NameRest => 1,
        }
    }
}

/// The first `n` formulas in code order.
pub fn enumerate(n: usize) -> Vec<Formula> {
    ModalGrammar::new().enumerate().take(n).collect()
}

/// Variable names: `[a-zA-Z][a-zA-Z0-9_]*`, minus the keywords `false`, `true`, `box`.
pub fn is_identifier(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic())
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !matches!(s, "false" | "true" | "box")
}

// ---------------------------------------------------------------------------
// Parsing and printing

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Not,
    Box,
    And,
    Or,
    Imp,
    Iff,
    LParen,
    RParen,
    False,
    True,
    Ident(String),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'~' | b'!' => {
                i += 1;
                Tok::Not
            }
            b'&' => {
                i += 1;
                Tok::And
            }
            b'|' => {
                i += 1;
                Tok::Or
            }
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            b'[' if bytes.get(i + 1) == Some(&b']') => {
                i += 2;
                Tok::Box
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 2;
                Tok::Imp
            }
            b'<' if src[i..].starts_with("<->") => {
                i += 3;
                Tok::Iff
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                match &src[start..i] {
                    "false" => Tok::False,
                    "true" => Tok::True,
                    "box" if bytes.get(i).is_some_and(|b| b.is_ascii_whitespace()) => Tok::Box,
                    id => Tok::Ident(id.to_string()),
                }
            }
            _ => return Err(ParseError { pos: i, msg: format!("unexpected character {:?}", c as char) }),
        };
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: &str) -> Result<T, ParseError> {
        Err(ParseError { pos: self.here(), msg: msg.to_string() })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.imp()?;
        while self.eat(&Tok::Iff) {
            let g = self.imp()?;
            f = Formula::iff(f, g);
        }
        Ok(f)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let f = self.or()?;
        if self.eat(&Tok::Imp) {
            let g = self.imp()?;
            return Ok(Formula::imp(f, g));
        }
        Ok(f)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.and()?;
        while self.eat(&Tok::Or) {
            f = Formula::or(f, self.and()?);
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.unary()?;
        while self.eat(&Tok::And) {
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.eat(&Tok::Not) {
            return Ok(Formula::not(self.unary()?));
        }
        if self.eat(&Tok::Box) {
            return Ok(Formula::boxed(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return self.err("unexpected end of input");
        };
        self.pos += 1;
        match tok {
            Tok::False => Ok(Formula::bot()),
            Tok::True => Ok(Formula::top()),
            Tok::Ident(id) if is_identifier(&id) => Ok(Formula::var(&id)),
            Tok::LParen => {
                let f = self.iff()?;
                if !self.eat(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                Ok(f)
            }
            _ => {
                self.pos -= 1;
                self.err("expected a formula")
            }
        }
    }
}

impl FromStr for Formula {
    type Err = ParseError;
    fn from_str(src: &str) -> Result<Formula, ParseError> {
        let mut p = Parser { toks: lex(src)?, pos: 0, end: src.len() };
        let f = p.iff()?;
        if p.pos != p.toks.len() {
            return p.err("trailing input");
        }
        Ok(f)
    }
}

/// Parses a formula, panicking on malformed input. Convenient in tests.
pub fn parse(src: &str) -> Formula {
    src.parse().unwrap_or_else(|e| panic!("{src:?}: {e}"))
}

// Binding strength used by the printer; higher binds tighter.
fn prec(f: &Formula) -> u8 {
    match f.kind() {
        Kind::Imp(..) => 1,
        Kind::Or(..) => 2,
        Kind::And(..) => 3,
        Kind::Not(_) | Kind::Box(_) => 4,
        _ => 5,
    }
}

fn write_at(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if prec(f) < min {
        out.write_str("(")?;
        write_at(f, 0, out)?;
        return out.write_str(")");
    }
    match f.kind() {
        Kind::Bot => out.write_str("false"),
        Kind::Top => out.write_str("true"),
        Kind::Var(n) => out.write_str(n),
        Kind::Not(a) => {
            out.write_str("~")?;
            write_at(a, 4, out)
        }
        Kind::Box(a) => {
            out.write_str("[]")?;
            write_at(a, 4, out)
        }
        Kind::And(a, b) => {
            write_at(a, 3, out)?;
            out.write_str(" & ")?;
            write_at(b, 4, out)
        }
        Kind::Or(a, b) => {
            write_at(a, 2, out)?;
            out.write_str(" | ")?;
            write_at(b, 3, out)
        }
        Kind::Imp(a, b) => {
            write_at(a, 2, out)?;
            out.write_str(" -> ")?;
            write_at(b, 1, out)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(self, 0, f)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_precedence_and_associativity() {
        let f = parse("~[]p & q | r -> s -> t");
        let p = Formula::var("p");
        let q = Formula::var("q");
        let want = Formula::imp(
            Formula::or(Formula::and(Formula::not(Formula::boxed(p)), q), Formula::var("r")),
            Formula::imp(Formula::var("s"), Formula::var("t")),
        );
        assert_eq!(f, want);
        assert_eq!(parse("a & b & c"), Formula::and(parse("a & b"), parse("c")));
        assert_eq!(parse("box p"), parse("[]p"));
        assert_eq!(parse("!p"), parse("~p"));
        assert_eq!(parse("p <-> q"), parse("(p -> q) & (q -> p)"));
        assert_eq!(parse("boxer"), Formula::var("boxer"));
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in ["", "p &", "(p", "p q", "[p", "1p", "p -> ", "box"] {
            assert!(bad.parse::<Formula>().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn prints_minimal_parentheses() {
        for src in ["(p -> q) -> r", "p -> q -> r", "~(p & q)", "[](p | q) & r", "p & (q & r)", "p | q & r"] {
            assert_eq!(parse(src).to_string(), src);
        }
    }

    #[test]
    fn companion_iteration_and_star() {
        let p = parse("p");
        assert_eq!(p.neg_companion(), parse("~p"));
        assert_eq!(parse("~p").neg_companion(), p);
        assert_eq!(parse("~~p").neg_companion(), parse("~p"));
        assert_eq!(p.iterated_neg(3), parse("~~~p"));
        assert_eq!(parse("~~~p").star(), parse("~p"));
        assert_eq!(parse("~~[]p").star(), parse("[]p"));
        assert_eq!(parse("[]p").star(), parse("[]p"));
    }

    #[test]
    fn code_order_matches_numeric_order() {
        let fs: Vec<Formula> =
            ["p", "~p", "[]p", "p & q", "false", "true", "~~q", "pq", "[]~p"].iter().map(|s| parse(s)).collect();
        for a in &fs {
            assert_eq!(Formula::from_gn(&a.gn()).as_ref(), Some(a));
            for b in &fs {
                assert_eq!(a.cmp(b), a.gn().cmp(&b.gn()), "{a} vs {b}");
            }
        }
        assert!(parse("p").gn() < parse("~p").gn());
        assert!(parse("~p").gn() < parse("[]p").gn());
    }

    #[test]
    fn enumeration_is_increasing_and_starts_with_constants() {
        let first = enumerate(12);
        assert_eq!(first[0], Formula::bot());
        assert_eq!(first[1], Formula::top());
        assert_eq!(first[2], parse("~false"));
        assert!(first.windows(2).all(|w| w[0].gn() < w[1].gn()));
    }

    #[test]
    fn enumeration_agrees_with_decoding_every_small_number() {
        // Every number below 73^3 decodes to at most one formula; the
        // enumeration must list exactly the decodable ones, in order.
        let bound = 73u64.pow(3);
        let want: Vec<Formula> = (1..bound).filter_map(|n| Formula::from_gn(&GNumber::from(n))).collect();
        let got: Vec<Formula> = ModalGrammar::new().enumerate().take_while(|f| f.code_len() <= 3).collect();
        assert_eq!(got, want);
    }
}
