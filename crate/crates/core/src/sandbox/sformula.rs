//! Sandbox formulas: propositional combinations of opaque atoms, provability
//! literals `Pr^R[φ]`, `Pr^A[φ]`, `Pr^†[φ]` and marker atoms.
//!
//! Coding is Polish notation over digits 1..=152 read in base 153:
//!
//! | digit    | meaning                                   |
//! |----------|-------------------------------------------|
//! | 1, 2     | ⊥, ⊤                                      |
//! | 3        | ¬                                         |
//! | 4, 5, 6  | `PrR`, `PrA`, `Pr` (†), followed by φ      |
//! | 7, 8, 9  | ∧, ∨, →                                   |
//! | 10       | atom start, then name characters, then 80 |
//! | 11..=15  | `lambda`, `alphaAll`, `alpha`, `betaAll`, `beta` |
//! | 16..=79  | characters a-z, A-Z, 0-9, `_`, `:`       |
//! | 80       | end of a name or numeral                  |
//! | 81..=152 | modal digit d written as 80 + d           |
//!
//! Markers carry a modal formula (shifted modal digits) and/or a numeral
//! (decimal characters, no leading zeros, closed by 80). A literal's code
//! contains the code of its argument, so every subterm has a smaller number.

use crate::coding::{GNumber, Grammar, LengthLex};
use crate::formula::{self, Formula};
use crate::prop::{PropView, Shape};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;
use thiserror::Error;

pub const BASE: u16 = 153;

const S_BOT: u16 = 1;
const S_TOP: u16 = 2;
const S_NEG: u16 = 3;
const S_PR_R: u16 = 4;
const S_PR_A: u16 = 5;
const S_PR_D: u16 = 6;
const S_AND: u16 = 7;
const S_OR: u16 = 8;
const S_IMP: u16 = 9;
const S_ATOM: u16 = 10;
const S_LAMBDA: u16 = 11;
const S_ALPHA_ALL: u16 = 12;
const S_ALPHA: u16 = 13;
const S_BETA_ALL: u16 = 14;
const S_BETA: u16 = 15;
const S_END: u16 = 80;
const MODAL_SHIFT: u16 = 80;

fn char_digit(c: char) -> Option<u16> {
    let d = match c {
        'a'..='z' => 16 + (c as u16 - 'a' as u16),
        'A'..='Z' => 42 + (c as u16 - 'A' as u16),
        '0'..='9' => 68 + (c as u16 - '0' as u16),
        '_' => 78,
        ':' => 79,
        _ => return None,
    };
    Some(d)
}

fn digit_char(d: u16) -> Option<char> {
    let c = match d {
        16..=41 => (b'a' + (d - 16) as u8) as char,
        42..=67 => (b'A' + (d - 42) as u8) as char,
        68..=77 => (b'0' + (d - 68) as u8) as char,
        78 => '_',
        79 => ':',
        _ => return None,
    };
    Some(c)
}

const RESERVED: [&str; 10] = ["false", "true", "PrR", "PrA", "Pr", "lambda", "alphaAll", "alpha", "betaAll", "beta"];

/// Atom names: `[a-zA-Z][a-zA-Z0-9_:]*`, minus the keywords of the syntax.
pub fn is_atom_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic())
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == ':')
        && !RESERVED.contains(&s)
}

/// Which witness-comparison predicate a literal stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PrKind {
    /// Rosser-style: φ before ¬φ.
    R,
    /// ★-normalised: φ★ before (¬φ)★.
    A,
    /// R on the image of the interpretation, A elsewhere.
    Dagger,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Marker {
    /// λ(j̄): "j is a value of h".
    Lambda(u64),
    /// ∀x α_B(x).
    AlphaAll(Formula),
    /// α_B(j̄).
    Alpha(Formula, u64),
    /// ∀x β_B(x).
    BetaAll(Formula),
    /// β_B(j̄).
    Beta(Formula, u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SKind {
    Bot,
    Top,
    Atom(Arc<str>),
    Neg(SFormula),
    And(SFormula, SFormula),
    Or(SFormula, SFormula),
    Imp(SFormula, SFormula),
    Pr(PrKind, SFormula),
    Marker(Marker),
}

#[derive(Debug)]
struct SNode {
    kind: SKind,
    digits: Vec<u16>,
    hash: u64,
}

/// An immutable, shared sandbox formula. Equality is code equality; the
/// order is Gödel-number order.
#[derive(Clone)]
pub struct SFormula(Arc<SNode>);

fn numeral(n: u64, out: &mut Vec<u16>) {
    out.extend(n.to_string().chars().map(|c| char_digit(c).expect("decimal digit")));
    out.push(S_END);
}

fn modal(b: &Formula, out: &mut Vec<u16>) {
    out.extend(b.digits().into_iter().map(|d| d + MODAL_SHIFT));
}

impl SFormula {
    fn make(kind: SKind) -> SFormula {
        let mut d = Vec::new();
        match &kind {
            SKind::Bot => d.push(S_BOT),
            SKind::Top => d.push(S_TOP),
            SKind::Atom(name) => {
                d.push(S_ATOM);
                d.extend(name.chars().map(|c| char_digit(c).expect("validated atom name")));
                d.push(S_END);
            }
            SKind::Neg(a) => {
                d.push(S_NEG);
                d.extend_from_slice(a.digits());
            }
            SKind::Pr(k, a) => {
                d.push(match k {
                    PrKind::R => S_PR_R,
                    PrKind::A => S_PR_A,
                    PrKind::Dagger => S_PR_D,
                });
                d.extend_from_slice(a.digits());
            }
            SKind::And(a, b) | SKind::Or(a, b) | SKind::Imp(a, b) => {
                d.push(match &kind {
                    SKind::And(..) => S_AND,
                    SKind::Or(..) => S_OR,
                    _ => S_IMP,
                });
                d.extend_from_slice(a.digits());
                d.extend_from_slice(b.digits());
            }
            SKind::Marker(m) => match m {
                Marker::Lambda(j) => {
                    d.push(S_LAMBDA);
                    numeral(*j, &mut d);
                }
                Marker::AlphaAll(b) | Marker::BetaAll(b) => {
                    d.push(if matches!(m, Marker::AlphaAll(_)) { S_ALPHA_ALL } else { S_BETA_ALL });
                    modal(b, &mut d);
                }
                Marker::Alpha(b, j) | Marker::Beta(b, j) => {
                    d.push(if matches!(m, Marker::Alpha(..)) { S_ALPHA } else { S_BETA });
                    modal(b, &mut d);
                    numeral(*j, &mut d);
                }
            },
        }
        let mut h = DefaultHasher::new();
        d.hash(&mut h);
        SFormula(Arc::new(SNode { kind, digits: d, hash: h.finish() }))
    }

    pub fn bot() -> SFormula {
        SFormula::make(SKind::Bot)
    }

    pub fn top() -> SFormula {
        SFormula::make(SKind::Top)
    }

    /// Panics on an invalid name; see [`is_atom_name`].
    pub fn atom(name: &str) -> SFormula {
        assert!(is_atom_name(name), "invalid atom name {name:?}");
        SFormula::make(SKind::Atom(name.into()))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: SFormula) -> SFormula {
        SFormula::make(SKind::Neg(a))
    }

    pub fn and(a: SFormula, b: SFormula) -> SFormula {
        SFormula::make(SKind::And(a, b))
    }

    pub fn or(a: SFormula, b: SFormula) -> SFormula {
        SFormula::make(SKind::Or(a, b))
    }

    pub fn imp(a: SFormula, b: SFormula) -> SFormula {
        SFormula::make(SKind::Imp(a, b))
    }

    pub fn iff(a: SFormula, b: SFormula) -> SFormula {
        SFormula::and(SFormula::imp(a.clone(), b.clone()), SFormula::imp(b, a))
    }

    pub fn pr(kind: PrKind, a: SFormula) -> SFormula {
        SFormula::make(SKind::Pr(kind, a))
    }

    /// `Pr^†[a]`.
    pub fn dagger(a: SFormula) -> SFormula {
        SFormula::pr(PrKind::Dagger, a)
    }

    pub fn marker(m: Marker) -> SFormula {
        SFormula::make(SKind::Marker(m))
    }

    pub fn lambda(j: u64) -> SFormula {
        SFormula::marker(Marker::Lambda(j))
    }

    pub fn kind(&self) -> &SKind {
        &self.0.kind
    }

    pub fn digits(&self) -> &[u16] {
        &self.0.digits
    }

    pub fn code_len(&self) -> usize {
        self.0.digits.len()
    }

    pub fn gn(&self) -> GNumber {
        GNumber::from_digits(self.digits(), BASE)
    }

    pub fn from_digits(d: &[u16]) -> Option<SFormula> {
        let mut pos = 0;
        let f = decode(d, &mut pos)?;
        (pos == d.len()).then_some(f)
    }

    pub fn from_gn(n: &GNumber) -> Option<SFormula> {
        SFormula::from_digits(&n.to_digits(BASE)?)
    }

    pub fn neg_arg(&self) -> Option<&SFormula> {
        match self.kind() {
            SKind::Neg(a) => Some(a),
            _ => None,
        }
    }

    /// The argument of a literal of the given kind.
    pub fn pr_arg(&self, kind: PrKind) -> Option<&SFormula> {
        match self.kind() {
            SKind::Pr(k, a) if *k == kind => Some(a),
            _ => None,
        }
    }

    /// `χ` if the formula is `¬Pr^†[χ]`.
    pub fn neg_dagger_arg(&self) -> Option<&SFormula> {
        self.neg_arg()?.pr_arg(PrKind::Dagger)
    }

    /// φ★: strips negations pairwise, keeping one if their number is odd.
    pub fn star(&self) -> SFormula {
        let mut k = 0;
        let mut cur = self;
        while let SKind::Neg(a) = cur.kind() {
            k += 1;
            cur = a;
        }
        if k % 2 == 0 {
            cur.clone()
        } else {
            SFormula::neg(cur.clone())
        }
    }

    /// Whether the formula is propositionally atomic (atom, literal, marker).
    pub fn is_atomic(&self) -> bool {
        matches!(self.kind(), SKind::Atom(_) | SKind::Pr(..) | SKind::Marker(_))
    }

    /// Propositional atoms (atoms, literals, markers) in first-occurrence order.
    pub fn prop_atoms(&self, out: &mut Vec<SFormula>) {
        match self.kind() {
            SKind::Bot | SKind::Top => {}
            SKind::Atom(_) | SKind::Pr(..) | SKind::Marker(_) => {
                if !out.contains(self) {
                    out.push(self.clone());
                }
            }
            SKind::Neg(a) => a.prop_atoms(out),
            SKind::And(a, b) | SKind::Or(a, b) | SKind::Imp(a, b) => {
                a.prop_atoms(out);
                b.prop_atoms(out);
            }
        }
    }
}

fn decode_numeral(d: &[u16], pos: &mut usize) -> Option<u64> {
    let mut s = String::new();
    loop {
        let x = *d.get(*pos)?;
        *pos += 1;
        if x == S_END {
            break;
        }
        let c = digit_char(x).filter(char::is_ascii_digit)?;
        s.push(c);
    }
    if s.is_empty() || (s.len() > 1 && s.starts_with('0')) {
        return None;
    }
    s.parse().ok()
}

fn decode_modal(d: &[u16], pos: &mut usize) -> Option<Formula> {
    let run: Vec<u16> = d[*pos..].iter().take_while(|&&x| x > MODAL_SHIFT).map(|&x| x - MODAL_SHIFT).collect();
    let mut p = 0;
    let f = formula::decode(&run, &mut p)?;
    *pos += p;
    Some(f)
}

fn decode(d: &[u16], pos: &mut usize) -> Option<SFormula> {
    let head = *d.get(*pos)?;
    *pos += 1;
    Some(match head {
        S_BOT => SFormula::bot(),
        S_TOP => SFormula::top(),
        S_NEG => SFormula::neg(decode(d, pos)?),
        S_PR_R => SFormula::pr(PrKind::R, decode(d, pos)?),
        S_PR_A => SFormula::pr(PrKind::A, decode(d, pos)?),
        S_PR_D => SFormula::pr(PrKind::Dagger, decode(d, pos)?),
        S_AND | S_OR | S_IMP => {
            let a = decode(d, pos)?;
            let b = decode(d, pos)?;
            SFormula::make(match head {
                S_AND => SKind::And(a, b),
                S_OR => SKind::Or(a, b),
                _ => SKind::Imp(a, b),
            })
        }
        S_ATOM => {
            let mut name = String::new();
            loop {
                let x = *d.get(*pos)?;
                *pos += 1;
                if x == S_END {
                    break;
                }
                name.push(digit_char(x)?);
            }
            if !is_atom_name(&name) {
                return None;
            }
            SFormula::atom(&name)
        }
        S_LAMBDA => SFormula::lambda(decode_numeral(d, pos)?),
        S_ALPHA_ALL => SFormula::marker(Marker::AlphaAll(decode_modal(d, pos)?)),
        S_BETA_ALL => SFormula::marker(Marker::BetaAll(decode_modal(d, pos)?)),
        S_ALPHA | S_BETA => {
            let b = decode_modal(d, pos)?;
            let j = decode_numeral(d, pos)?;
            SFormula::marker(if head == S_ALPHA { Marker::Alpha(b, j) } else { Marker::Beta(b, j) })
        }
        _ => return None,
    })
}

impl PartialEq for SFormula {
    fn eq(&self, other: &SFormula) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.hash == other.0.hash && self.0.digits == other.0.digits)
    }
}

impl Eq for SFormula {}

impl Hash for SFormula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl Ord for SFormula {
    fn cmp(&self, other: &SFormula) -> Ordering {
        self.code_len().cmp(&other.code_len()).then_with(|| self.digits().cmp(other.digits()))
    }
}

impl PartialOrd for SFormula {
    fn partial_cmp(&self, other: &SFormula) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PropView for SFormula {
    fn shape(&self) -> Shape<'_, SFormula> {
        match self.kind() {
            SKind::Bot => Shape::Const(false),
            SKind::Top => Shape::Const(true),
            SKind::Atom(_) | SKind::Pr(..) | SKind::Marker(_) => Shape::Atom,
            SKind::Neg(a) => Shape::Not(a),
            SKind::And(a, b) => Shape::And(a, b),
            SKind::Or(a, b) => Shape::Or(a, b),
            SKind::Imp(a, b) => Shape::Imp(a, b),
        }
    }
}

// ---------------------------------------------------------------------------
// Enumeration in code order

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SItem {
    Term,
    NameFirst,
    NameRest,
    Numeral,
    NumeralRest,
    Modal,
    ModalNameFirst,
    ModalNameRest,
}

/// The grammar of sandbox digit strings. It slightly over-generates (reserved
/// names, leading zeros); decoding filters those out.
pub struct SGrammar {
    table: Vec<Vec<(u16, Vec<SItem>)>>,
}

impl SGrammar {
    pub fn new() -> Self {
        use SItem::*;
        let term = vec![
            (S_BOT, vec![]),
            (S_TOP, vec![]),
            (S_NEG, vec![Term]),
            (S_PR_R, vec![Term]),
            (S_PR_A, vec![Term]),
            (S_PR_D, vec![Term]),
            (S_AND, vec![Term, Term]),
            (S_OR, vec![Term, Term]),
            (S_IMP, vec![Term, Term]),
            (S_ATOM, vec![NameFirst]),
            (S_LAMBDA, vec![Numeral]),
            (S_ALPHA_ALL, vec![Modal]),
            (S_ALPHA, vec![Modal, Numeral]),
            (S_BETA_ALL, vec![Modal]),
            (S_BETA, vec![Modal, Numeral]),
        ];
        let name_first = (16..=67).map(|d| (d, vec![NameRest])).collect();
        let mut name_rest: Vec<_> = (16..=79).map(|d| (d, vec![NameRest])).collect();
        name_rest.push((S_END, vec![]));
        let numeral = (68..=77).map(|d| (d, vec![NumeralRest])).collect();
        let mut numeral_rest: Vec<_> = (68..=77).map(|d| (d, vec![NumeralRest])).collect();
        numeral_rest.push((S_END, vec![]));
        let s = MODAL_SHIFT;
        let modal = vec![
            (s + formula::D_BOT, vec![]),
            (s + formula::D_TOP, vec![]),
            (s + formula::D_NOT, vec![Modal]),
            (s + formula::D_BOX, vec![Modal]),
            (s + formula::D_AND, vec![Modal, Modal]),
            (s + formula::D_OR, vec![Modal, Modal]),
            (s + formula::D_IMP, vec![Modal, Modal]),
            (s + formula::D_VAR, vec![ModalNameFirst]),
        ];
        let modal_first = (s + 9..=s + 60).map(|d| (d, vec![ModalNameRest])).collect();
        let mut modal_rest: Vec<_> = (s + 9..=s + 71).map(|d| (d, vec![ModalNameRest])).collect();
        modal_rest.push((s + formula::D_END, vec![]));
        SGrammar { table: vec![term, name_first, name_rest, numeral, numeral_rest, modal, modal_first, modal_rest] }
    }

    /// ⟨ξ_t⟩: every sandbox formula, once, in increasing code order.
    pub fn enumerate(&self) -> impl Iterator<Item = SFormula> + '_ {
        LengthLex::new(self).filter_map(|d| SFormula::from_digits(&d))
    }
}

impl Default for SGrammar {
    fn default() -> Self {
        Self::new()
    }
}

impl Grammar for SGrammar {
    type Item = SItem;
    fn start(&self) -> SItem {
        SItem::Term
    }
    fn choices(&self, item: SItem) -> &[(u16, Vec<SItem>)] {
        &self.table[item as usize]
    }
    fn min_len(&self, item: SItem) -> usize {
        match item {
            SItem::NameFirst | SItem::Numeral | SItem::ModalNameFirst => 2,
            _ => 1,
        }
    }
}

// ---------------------------------------------------------------------------
// Parsing and printing
//
//   φ ::= false | true | name | ~φ | φ & φ | φ | φ | φ -> φ | φ <-> φ | (φ)
//       | PrR[φ] | PrA[φ] | Pr[φ]
//       | lambda(n) | alphaAll[B] | alpha[B](n) | betaAll[B] | beta[B](n)
//       | f[B]                      (the image of the modal formula B)

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {pos}: {msg}")]
pub struct SParseError {
    pub pos: usize,
    pub msg: String,
}

struct Parser<'s> {
    src: &'s str,
    pos: usize,
}

impl<'s> Parser<'s> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, SParseError> {
        Err(SParseError { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), SParseError> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(format!("expected {s:?}"))
        }
    }

    fn iff(&mut self) -> Result<SFormula, SParseError> {
        let mut f = self.imp()?;
        while self.eat("<->") {
            let g = self.imp()?;
            f = SFormula::iff(f, g);
        }
        Ok(f)
    }

    fn imp(&mut self) -> Result<SFormula, SParseError> {
        let f = self.or()?;
        if self.eat("->") {
            return Ok(SFormula::imp(f, self.imp()?));
        }
        Ok(f)
    }

    fn or(&mut self) -> Result<SFormula, SParseError> {
        let mut f = self.and()?;
        while self.eat("|") {
            f = SFormula::or(f, self.and()?);
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<SFormula, SParseError> {
        let mut f = self.unary()?;
        while self.eat("&") {
            f = SFormula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<SFormula, SParseError> {
        if self.eat("~") {
            return Ok(SFormula::neg(self.unary()?));
        }
        self.primary()
    }

    fn word(&mut self) -> Option<&'s str> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        if !rest.starts_with(|c: char| c.is_ascii_alphabetic()) {
            return None;
        }
        let n = rest.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_' || c == ':')).unwrap_or(rest.len());
        self.pos += n;
        Some(&rest[..n])
    }

    fn numeral(&mut self) -> Result<u64, SParseError> {
        self.expect("(")?;
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let n = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        let Ok(v) = rest[..n].parse() else {
            return self.err("expected a number");
        };
        self.pos += n;
        self.expect(")")?;
        Ok(v)
    }

    /// A bracketed modal formula; `[]` inside it is the box.
    fn modal(&mut self) -> Result<Formula, SParseError> {
        self.expect("[")?;
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut i = start;
        loop {
            match bytes.get(i) {
                None => return self.err("unterminated '['"),
                Some(b'[') if bytes.get(i + 1) == Some(&b']') => i += 2,
                Some(b']') => break,
                Some(_) => i += 1,
            }
        }
        let f = self.src[start..i].parse::<Formula>().map_err(|e| SParseError { pos: start + e.pos, msg: e.msg })?;
        self.pos = i + 1;
        Ok(f)
    }

    fn bracketed(&mut self) -> Result<SFormula, SParseError> {
        self.expect("[")?;
        let f = self.iff()?;
        self.expect("]")?;
        Ok(f)
    }

    fn primary(&mut self) -> Result<SFormula, SParseError> {
        if self.eat("(") {
            let f = self.iff()?;
            self.expect(")")?;
            return Ok(f);
        }
        let at = self.pos;
        let Some(w) = self.word() else {
            return self.err("expected a formula");
        };
        Ok(match w {
            "false" => SFormula::bot(),
            "true" => SFormula::top(),
            "PrR" => SFormula::pr(PrKind::R, self.bracketed()?),
            "PrA" => SFormula::pr(PrKind::A, self.bracketed()?),
            "Pr" => SFormula::pr(PrKind::Dagger, self.bracketed()?),
            "lambda" => SFormula::lambda(self.numeral()?),
            "alphaAll" => SFormula::marker(Marker::AlphaAll(self.modal()?)),
            "betaAll" => SFormula::marker(Marker::BetaAll(self.modal()?)),
            "alpha" => {
                let b = self.modal()?;
                SFormula::marker(Marker::Alpha(b, self.numeral()?))
            }
            "beta" => {
                let b = self.modal()?;
                SFormula::marker(Marker::Beta(b, self.numeral()?))
            }
            "f" if self.src[self.pos..].starts_with('[') => super::image(&self.modal()?),
            name if is_atom_name(name) => SFormula::atom(name),
            _ => {
                self.pos = at;
                return self.err("expected a formula");
            }
        })
    }
}

impl FromStr for SFormula {
    type Err = SParseError;
    fn from_str(src: &str) -> Result<SFormula, SParseError> {
        let mut p = Parser { src, pos: 0 };
        let f = p.iff()?;
        p.skip_ws();
        if p.pos != src.len() {
            return p.err("trailing input");
        }
        Ok(f)
    }
}

/// Parses a sandbox formula, panicking on malformed input.
pub fn sparse(src: &str) -> SFormula {
    src.parse().unwrap_or_else(|e| panic!("{src:?}: {e}"))
}

fn prec(f: &SFormula) -> u8 {
    match f.kind() {
        SKind::Imp(..) => 1,
        SKind::Or(..) => 2,
        SKind::And(..) => 3,
        SKind::Neg(_) => 4,
        _ => 5,
    }
}

fn write_at(f: &SFormula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if prec(f) < min {
        out.write_str("(")?;
        write_at(f, 0, out)?;
        return out.write_str(")");
    }
    match f.kind() {
        SKind::Bot => out.write_str("false"),
        SKind::Top => out.write_str("true"),
        SKind::Atom(n) => out.write_str(n),
        SKind::Neg(a) => {
            out.write_str("~")?;
            write_at(a, 4, out)
        }
        SKind::And(a, b) => {
            write_at(a, 3, out)?;
            out.write_str(" & ")?;
            write_at(b, 4, out)
        }
        SKind::Or(a, b) => {
            write_at(a, 2, out)?;
            out.write_str(" | ")?;
            write_at(b, 3, out)
        }
        SKind::Imp(a, b) => {
            write_at(a, 2, out)?;
            out.write_str(" -> ")?;
            write_at(b, 1, out)
        }
        SKind::Pr(k, a) => {
            out.write_str(match k {
                PrKind::R => "PrR[",
                PrKind::A => "PrA[",
                PrKind::Dagger => "Pr[",
            })?;
            write_at(a, 0, out)?;
            out.write_str("]")
        }
        SKind::Marker(m) => match m {
            Marker::Lambda(j) => write!(out, "lambda({j})"),
            Marker::AlphaAll(b) => write!(out, "alphaAll[{b}]"),
            Marker::Alpha(b, j) => write!(out, "alpha[{b}]({j})"),
            Marker::BetaAll(b) => write!(out, "betaAll[{b}]"),
            Marker::Beta(b, j) => write!(out, "beta[{b}]({j})"),
        },
    }
}

impl fmt::Display for SFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(self, 0, f)
    }
}

impl fmt::Debug for SFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

impl Serialize for SFormula {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SFormula {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn print_parse_round_trip() {
        for src in [
            "false",
            "~PrR[a] & PrA[~~b]",
            "Pr[f:p] -> Pr[Pr[false]]",
            "lambda(3) | ~lambda(0)",
            "alphaAll[[]p -> ~q] & (alpha[[]p -> ~q](12) -> ~lambda(12))",
            "betaAll[false] & beta[[][]false](7)",
            "x:y_1 -> (a -> b) -> c",
        ] {
            let f = sparse(src);
            assert_eq!(f.to_string(), src);
            assert_eq!(SFormula::from_digits(f.digits()), Some(f.clone()));
            assert_eq!(SFormula::from_gn(&f.gn()), Some(f));
        }
    }

    #[test]
    fn image_sugar() {
        assert_eq!(sparse("f[[]p & ~false]"), sparse("Pr[f:p] & ~false"));
    }

    #[test]
    fn rejects_reserved_and_malformed() {
        for src in ["Pr", "lambda", "alpha[p]", "Pr[p", "f[[]p", "p q", "1a"] {
            assert!(src.parse::<SFormula>().is_err(), "{src}");
        }
    }

    #[test]
    fn star_parity() {
        let a = sparse("PrA[x]");
        assert_eq!(sparse("~~~~PrA[x]").star(), a);
        assert_eq!(sparse("~~~PrA[x]").star(), SFormula::neg(a));
    }

    #[test]
    fn subterms_have_smaller_codes() {
        let b = parse("[]p");
        let m = SFormula::marker(Marker::Alpha(b, 4));
        let f = SFormula::imp(m.clone(), SFormula::neg(SFormula::lambda(4)));
        assert!(m < f && SFormula::lambda(4) < f);
        assert!(sparse("p") < SFormula::dagger(sparse("p")));
    }

    #[test]
    fn enumeration_prefix() {
        let g = SGrammar::new();
        let first: Vec<SFormula> = g.enumerate().take(12).collect();
        let want: Vec<SFormula> = [
            "false",
            "true",
            "~false",
            "~true",
            "PrR[false]",
            "PrR[true]",
            "PrA[false]",
            "PrA[true]",
            "Pr[false]",
            "Pr[true]",
        ]
        .iter()
        .map(|s| sparse(s))
        .collect();
        assert_eq!(&first[..10], &want[..]);
        // Length 2 continues with the markers over a one-digit modal formula.
        assert_eq!(first[10], sparse("alphaAll[false]"));
        assert!(first.windows(2).all(|w| w[0] < w[1]));
    }

    // Oracle: brute-force decode of every digit string up to length 3.
    #[test]
    fn enumeration_matches_brute_force() {
        let mut want = Vec::new();
        for len in 1..=3usize {
            let total = 152usize.pow(len as u32);
            for n in 0..total {
                let mut d = Vec::with_capacity(len);
                let mut m = n;
                for _ in 0..len {
                    d.push((m % 152) as u16 + 1);
                    m /= 152;
                }
                d.reverse();
                if let Some(f) = SFormula::from_digits(&d) {
                    want.push(f);
                }
            }
        }
        let got: Vec<SFormula> =
            LengthLex::bounded(&SGrammar::new(), 3).filter_map(|d| SFormula::from_digits(&d)).collect();
        assert_eq!(got, want);
    }
}
