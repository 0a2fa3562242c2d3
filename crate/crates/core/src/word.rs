//! Reduced words in the free group on `a` and `b`.
//!
//! Letters are ordered `a < A < b < B` (capitals are inverses). That order
//! fixes the ShortLex enumeration: words are listed by length, and words of
//! equal length lexicographically. Every index, metric and search order in
//! the crate is taken from this enumeration.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// One of the four letters `a`, `a⁻¹`, `b`, `b⁻¹`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Letter {
    A = 0,
    AInv = 1,
    B = 2,
    BInv = 3,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::A, Letter::AInv, Letter::B, Letter::BInv];

    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::AInv,
            Letter::AInv => Letter::A,
            Letter::B => Letter::BInv,
            Letter::BInv => Letter::B,
        }
    }

    /// `true` for `a⁻¹` and `b⁻¹`.
    pub fn is_inverse(self) -> bool {
        matches!(self, Letter::AInv | Letter::BInv)
    }

    /// 0 for the `a` generator, 1 for `b`.
    pub fn generator(self) -> usize {
        (self as usize) >> 1
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::AInv => 'A',
            Letter::B => 'b',
            Letter::BInv => 'B',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'a' => Some(Letter::A),
            'A' => Some(Letter::AInv),
            'b' => Some(Letter::B),
            'B' => Some(Letter::BInv),
            _ => None,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct FreeWord {
    letters: Vec<Letter>,
}

impl FreeWord {
    pub fn identity() -> FreeWord {
        FreeWord { letters: Vec::new() }
    }

    pub fn letter(l: Letter) -> FreeWord {
        FreeWord { letters: vec![l] }
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(raw: I) -> FreeWord {
        let mut letters: Vec<Letter> = Vec::new();
        for l in raw {
            if letters.last() == Some(&l.inverse()) {
                letters.pop();
            } else {
                letters.push(l);
            }
        }
        FreeWord { letters }
    }

    /// Builds a word from letters that are already reduced.
    fn from_reduced(letters: Vec<Letter>) -> FreeWord {
        debug_assert!(letters.windows(2).all(|p| p[0] != p[1].inverse()));
        FreeWord { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn multiply(&self, other: &FreeWord) -> FreeWord {
        let mut cancel = 0;
        let (l, r) = (&self.letters, &other.letters);
        while cancel < l.len().min(r.len()) && l[l.len() - 1 - cancel] == r[cancel].inverse() {
            cancel += 1;
        }
        let mut letters = Vec::with_capacity(l.len() + r.len() - 2 * cancel);
        letters.extend_from_slice(&l[..l.len() - cancel]);
        letters.extend_from_slice(&r[cancel..]);
        FreeWord::from_reduced(letters)
    }

    pub fn invert(&self) -> FreeWord {
        FreeWord::from_reduced(self.letters.iter().rev().map(|l| l.inverse()).collect())
    }

    /// `g · self · g⁻¹`.
    pub fn conjugate(&self, g: &FreeWord) -> FreeWord {
        g.multiply(self).multiply(&g.invert())
    }

    /// `self^n` for any integer `n`.
    pub fn pow(&self, n: i64) -> FreeWord {
        let base = if n < 0 { self.invert() } else { self.clone() };
        let mut out = FreeWord::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.multiply(&base);
        }
        out
    }

    /// Replaces every letter by the image of its generator (inverted for
    /// inverse letters) and reduces.
    pub fn substitute(&self, image_a: &FreeWord, image_b: &FreeWord) -> FreeWord {
        let (ia, ib) = (image_a.invert(), image_b.invert());
        let mut out = FreeWord::identity();
        for l in &self.letters {
            let piece = match l {
                Letter::A => image_a,
                Letter::AInv => &ia,
                Letter::B => image_b,
                Letter::BInv => &ib,
            };
            out = out.multiply(piece);
        }
        out
    }

    /// Exponent sums of `a` and `b`.
    pub fn exponent_sums(&self) -> [i64; 2] {
        let mut sums = [0i64; 2];
        for l in &self.letters {
            sums[l.generator()] += if l.is_inverse() { -1 } else { 1 };
        }
        sums
    }

    /// Position of this word in the ShortLex enumeration (identity = 0).
    pub fn shortlex_index(&self) -> u64 {
        let n = self.letters.len();
        if n == 0 {
            return 0;
        }
        let shorter: u64 = (0..n).map(words_of_length).sum();
        let mut rank = 0u64;
        let mut prev: Option<Letter> = None;
        for (i, &l) in self.letters.iter().enumerate() {
            let smaller = Letter::ALL[..l.index()]
                .iter()
                .filter(|c| prev.is_none_or(|p| **c != p.inverse()))
                .count() as u64;
            rank += smaller * 3u64.pow((n - 1 - i) as u32);
            prev = Some(l);
        }
        shorter + rank
    }

    /// Inverse of [`FreeWord::shortlex_index`].
    pub fn from_shortlex_index(mut index: u64) -> FreeWord {
        let mut len = 0usize;
        while index >= words_of_length(len) {
            index -= words_of_length(len);
            len += 1;
        }
        let mut letters = Vec::with_capacity(len);
        for i in 0..len {
            let block = 3u64.pow((len - 1 - i) as u32);
            let mut digit = index / block;
            index %= block;
            let prev = letters.last().copied();
            for c in Letter::ALL {
                if prev.is_some_and(|p: Letter| c == p.inverse()) {
                    continue;
                }
                if digit == 0 {
                    letters.push(c);
                    break;
                }
                digit -= 1;
            }
        }
        FreeWord::from_reduced(letters)
    }
}

/// Number of reduced words of length exactly `len`.
pub fn words_of_length(len: usize) -> u64 {
    if len == 0 {
        1
    } else {
        4 * 3u64.pow(len as u32 - 1)
    }
}

/// Number of reduced words of length at most `len`, identity included.
pub fn words_up_to_length(len: usize) -> u64 {
    (0..=len).map(words_of_length).sum()
}

/// The first `n` words in ShortLex order.
pub fn enumerate(n: usize) -> Vec<FreeWord> {
    ShortLex::new().take(n).collect()
}

/// All reduced words of length at most `len`, in ShortLex order.
pub fn ball(len: usize) -> Vec<FreeWord> {
    enumerate(words_up_to_length(len) as usize)
}

/// Infinite ShortLex iterator over reduced words, starting at the identity.
#[derive(Clone, Debug, Default)]
pub struct ShortLex {
    layer: Vec<FreeWord>,
    pos: usize,
}

impl ShortLex {
    pub fn new() -> ShortLex {
        ShortLex { layer: vec![FreeWord::identity()], pos: 0 }
    }
}

impl Iterator for ShortLex {
    type Item = FreeWord;

    fn next(&mut self) -> Option<FreeWord> {
        if self.pos == self.layer.len() {
            // Appending letters in order to a lex-sorted layer keeps it sorted.
            let mut next = Vec::with_capacity(self.layer.len() * 4);
            for w in &self.layer {
                for l in Letter::ALL {
                    if w.letters.last() != Some(&l.inverse()) {
                        let mut letters = w.letters.clone();
                        letters.push(l);
                        next.push(FreeWord::from_reduced(letters));
                    }
                }
            }
            self.layer = next;
            self.pos = 0;
        }
        self.pos += 1;
        Some(self.layer[self.pos - 1].clone())
    }
}

impl Ord for FreeWord {
    /// ShortLex: length first, then lexicographic in the letter order.
    fn cmp(&self, other: &FreeWord) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for FreeWord {
    fn partial_cmp(&self, other: &FreeWord) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("e");
        }
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FreeWord({self})")
    }
}

impl FromStr for FreeWord {
    type Err = Error;

    /// Accepts `a`, `A`, `b`, `B`; `""` and `"e"` denote the identity. The
    /// input is reduced, so `"aA"` parses to the identity.
    fn from_str(s: &str) -> Result<FreeWord, Error> {
        let s = s.trim();
        if s == "e" {
            return Ok(FreeWord::identity());
        }
        let letters = s
            .chars()
            .map(|c| Letter::from_char(c).ok_or_else(|| Error::Parse(format!("bad letter {c:?} in word {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FreeWord::reduce(letters))
    }
}

impl Serialize for FreeWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FreeWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<FreeWord, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand used throughout tests and examples. Panics on bad input.
pub fn w(s: &str) -> FreeWord {
    s.parse().expect("invalid word literal")
}

/// Parses a comma-separated list of words; empty input gives an empty list.
pub fn parse_word_list(s: &str) -> Result<Vec<FreeWord>, Error> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(str::parse)
        .collect()
}
