//! Gödel numbering shared by modal formulas and sandbox formulas.
//!
//! Every formula is written in prefix (Polish) notation as a string of digits
//! drawn from `1..base`; the Gödel number is that string read as a base-`base`
//! numeral. Because no digit is zero, numeric order coincides with
//! length-then-lexicographic order on digit strings, every proper subterm gets a
//! strictly smaller number, and the coding is injective (Polish notation is
//! uniquely readable). Numbers whose digit string is not a well-formed term are
//! simply skipped by enumeration.

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// A Gödel number. Ordered numerically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GNumber(pub BigUint);

impl GNumber {
    pub fn zero() -> Self {
        GNumber(BigUint::default())
    }

    pub fn from_digits(digits: &[u16], base: u16) -> Self {
        let mut n = BigUint::default();
        for &d in digits {
            n = n * BigUint::from(base) + BigUint::from(d);
        }
        GNumber(n)
    }

    /// Inverse of [`GNumber::from_digits`]; `None` if some digit would be zero.
    pub fn to_digits(&self, base: u16) -> Option<Vec<u16>> {
        let mut out: Vec<u16> = self.0.to_radix_le(u32::from(base)).into_iter().map(u16::from).collect();
        if out.contains(&0) {
            return None;
        }
        out.reverse();
        Some(out)
    }

    pub fn is_zero(&self) -> bool {
        self.0 == BigUint::default()
    }
}

impl fmt::Display for GNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for GNumber {
    type Err = num_bigint::ParseBigIntError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(GNumber(s.parse()?))
    }
}

impl From<u64> for GNumber {
    fn from(n: u64) -> Self {
        GNumber(BigUint::from(n))
    }
}

// Codes grow quickly, so they travel through JSON as decimal strings.
impl Serialize for GNumber {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A prefix grammar over digits, used to enumerate well-formed digit strings.
///
/// Items are grammar symbols still to be produced; `choices` lists, for an
/// item, each admissible next digit together with the items it leaves behind
/// (expanded left to right).
pub trait Grammar {
    type Item: Copy + Eq + fmt::Debug;
    fn start(&self) -> Self::Item;
    fn choices(&self, item: Self::Item) -> &[(u16, Vec<Self::Item>)];
    /// Length of the shortest digit string the item can produce.
    fn min_len(&self, item: Self::Item) -> usize;
}

fn feasible<G: Grammar>(g: &G, pending: &[G::Item], remaining: usize) -> bool {
    if pending.is_empty() {
        return remaining == 0;
    }
    pending.iter().map(|&i| g.min_len(i)).sum::<usize>() <= remaining
}

struct Frame<I> {
    // Items still to produce, top of stack last.
    pending: Vec<I>,
    next_choice: usize,
}

/// Lazy enumeration of all well-formed digit strings in increasing numeric order.
pub struct LengthLex<'g, G: Grammar> {
    g: &'g G,
    len: usize,
    frames: Vec<Frame<G::Item>>,
    digits: Vec<u16>,
    max_len: Option<usize>,
}

impl<'g, G: Grammar> LengthLex<'g, G> {
    pub fn new(g: &'g G) -> Self {
        let mut it = LengthLex { g, len: 0, frames: Vec::new(), digits: Vec::new(), max_len: None };
        it.next_length();
        it
    }

    /// Stop after all strings of length `max_len` have been produced.
    pub fn bounded(g: &'g G, max_len: usize) -> Self {
        let mut it = Self::new(g);
        it.max_len = Some(max_len);
        it
    }

    fn next_length(&mut self) {
        self.len += 1;
        self.frames.clear();
        self.digits.clear();
        self.frames.push(Frame { pending: vec![self.g.start()], next_choice: 0 });
    }
}

impl<G: Grammar> Iterator for LengthLex<'_, G> {
    type Item = Vec<u16>;

    fn next(&mut self) -> Option<Vec<u16>> {
        loop {
            if let Some(max) = self.max_len {
                if self.len > max {
                    return None;
                }
            }
            let Some(frame) = self.frames.last_mut() else {
                self.next_length();
                continue;
            };
            let depth = self.digits.len();
            let top = *frame.pending.last().expect("frames always hold pending items");
            let choices = self.g.choices(top);
            if frame.next_choice >= choices.len() {
                self.frames.pop();
                self.digits.pop();
                continue;
            }
            let (digit, push) = &choices[frame.next_choice];
            frame.next_choice += 1;
            let mut pending = frame.pending.clone();
            pending.pop();
            pending.extend(push.iter().rev());
            let remaining = self.len - depth - 1;
            if !feasible(self.g, &pending, remaining) {
                continue;
            }
            self.digits.push(*digit);
            if pending.is_empty() {
                let out = self.digits.clone();
                self.digits.pop();
                return Some(out);
            }
            self.frames.push(Frame { pending, next_choice: 0 });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Balanced "a" / "f x y" terms over digits 1 (leaf) and 2 (binary).
    struct Tiny {
        table: Vec<(u16, Vec<u8>)>,
    }

    impl Grammar for Tiny {
        type Item = u8;
        fn start(&self) -> u8 {
            0
        }
        fn choices(&self, _: u8) -> &[(u16, Vec<u8>)] {
            &self.table
        }
        fn min_len(&self, _: u8) -> usize {
            1
        }
    }

    fn well_formed(d: &[u16]) -> bool {
        let mut need = 1i64;
        for (i, &x) in d.iter().enumerate() {
            need += if x == 2 { 1 } else { -1 };
            if need == 0 && i + 1 != d.len() {
                return false;
            }
        }
        need == 0
    }

    #[test]
    fn enumeration_matches_brute_force_filter() {
        let g = Tiny { table: vec![(1, vec![]), (2, vec![0, 0])] };
        let got: Vec<Vec<u16>> = LengthLex::bounded(&g, 7).collect();
        let mut want = Vec::new();
        for len in 1..=7usize {
            for n in 0..(1u32 << len) {
                let d: Vec<u16> = (0..len).rev().map(|i| 1 + ((n >> i) & 1) as u16).collect();
                if well_formed(&d) {
                    want.push(d);
                }
            }
        }
        assert_eq!(got, want);
        let nums: Vec<GNumber> = got.iter().map(|d| GNumber::from_digits(d, 3)).collect();
        assert!(nums.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn digits_round_trip() {
        let d = vec![3, 1, 72, 9];
        let n = GNumber::from_digits(&d, 73);
        assert_eq!(n.to_digits(73), Some(d));
        assert_eq!(GNumber::from(73u64).to_digits(73), None);
    }
}
