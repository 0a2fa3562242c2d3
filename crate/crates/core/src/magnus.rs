//! Truncated Magnus expansion and the bi-order it induces.
//!
//! A word is sent to a noncommutative power series in `A`, `B` by
//! `a ↦ 1 + A`, `a⁻¹ ↦ 1 − A + A² − …` (and likewise for `b`). A nontrivial
//! word is positive when the first nonzero coefficient of `series − 1` is
//! positive, monomials being ordered by degree and then lexicographically.
//! The leading monomial names the Archimedean class of the word.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::word::{FreeWord, Letter};

/// Largest degree a [`Monomial`] can carry.
pub const MAX_SUPPORTED_DEGREE: u32 = 63;

/// Degrees up to this use the dense machine-integer expansion.
const DENSE_LIMIT: u32 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip_if(self, flip: bool) -> Sign {
        if flip {
            -self
        } else {
            self
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Pos => '+',
            Sign::Neg => '-',
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Sign, Error> {
        match s {
            "+" => Ok(Sign::Pos),
            "-" | "−" => Ok(Sign::Neg),
            _ => Err(Error::Parse(format!("bad sign {s:?}"))),
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Sign, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

/// A word in the noncommuting variables `A` (bit 0) and `B` (bit 1). The
/// first variable is the most significant bit, so numeric order on `bits`
/// is lexicographic order with `A < B`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    degree: u8,
    bits: u64,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { degree: 0, bits: 0 };

    pub fn new(degree: u32, bits: u64) -> Monomial {
        assert!(degree <= MAX_SUPPORTED_DEGREE, "monomial degree too large");
        assert!(degree == 64 || bits >> degree == 0, "bits exceed degree");
        Monomial { degree: degree as u8, bits }
    }

    pub fn degree(self) -> u32 {
        self.degree as u32
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    /// Appends variable `var` (0 = `A`, 1 = `B`).
    pub fn push(self, var: u64) -> Monomial {
        Monomial::new(self.degree() + 1, (self.bits << 1) | var)
    }

    pub fn concat(self, other: Monomial) -> Monomial {
        Monomial::new(self.degree() + other.degree(), (self.bits << other.degree) | other.bits)
    }

    /// Variable at position `i` (0 = leftmost).
    pub fn var(self, i: u32) -> u64 {
        (self.bits >> (self.degree() - 1 - i)) & 1
    }

    /// All monomials of the given degree in the given order.
    pub fn of_degree(degree: u32, order: MonomialOrder) -> impl Iterator<Item = Monomial> {
        let count = 1u64 << degree;
        (0..count).map(move |i| match order {
            MonomialOrder::Standard => Monomial::new(degree, i),
            MonomialOrder::Swapped => Monomial::new(degree, count - 1 - i),
        })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 0 {
            return f.write_str("1");
        }
        for i in 0..self.degree() {
            f.write_str(if self.var(i) == 0 { "A" } else { "B" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monomial({self})")
    }
}

impl FromStr for Monomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Monomial, Error> {
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(Monomial::ONE);
        }
        if s.len() > MAX_SUPPORTED_DEGREE as usize {
            return Err(Error::Parse(format!("monomial {s:?} too long")));
        }
        let mut m = Monomial::ONE;
        for c in s.chars() {
            m = match c {
                'A' => m.push(0),
                'B' => m.push(1),
                _ => return Err(Error::Parse(format!("bad monomial variable {c:?}"))),
            };
        }
        Ok(m)
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Monomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Monomial, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Order on monomials: degree first, then lexicographic with `A < B`
/// (`Standard`) or `B < A` (`Swapped`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonomialOrder {
    #[default]
    Standard,
    Swapped,
}

impl MonomialOrder {
    pub fn cmp(self, x: Monomial, y: Monomial) -> Ordering {
        x.degree.cmp(&y.degree).then_with(|| match self {
            MonomialOrder::Standard => x.bits.cmp(&y.bits),
            MonomialOrder::Swapped => y.bits.cmp(&x.bits),
        })
    }

    pub fn swapped(self) -> MonomialOrder {
        match self {
            MonomialOrder::Standard => MonomialOrder::Swapped,
            MonomialOrder::Swapped => MonomialOrder::Standard,
        }
    }
}

/// Integer-coefficient series truncated above `degree`.
#[derive(Clone, PartialEq, Eq)]
pub struct MagnusSeries {
    degree: u32,
    coeffs: BTreeMap<Monomial, BigInt>,
}

impl MagnusSeries {
    pub fn one(degree: u32) -> MagnusSeries {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(Monomial::ONE, BigInt::one());
        MagnusSeries { degree, coeffs }
    }

    /// Series from explicit terms; zero coefficients and terms above the
    /// truncation degree are dropped.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigInt)>>(degree: u32, terms: I) -> MagnusSeries {
        let mut s = MagnusSeries { degree, coeffs: BTreeMap::new() };
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    /// Magnus expansion of `w` truncated at degree `degree`.
    pub fn expand(w: &FreeWord, degree: u32) -> MagnusSeries {
        assert!((1..=MAX_SUPPORTED_DEGREE).contains(&degree), "truncation degree out of range");
        let mut s = MagnusSeries::one(degree);
        for &l in w.letters() {
            s = s.times_letter(l);
        }
        s
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coefficient(&self, m: Monomial) -> BigInt {
        self.coeffs.get(&m).cloned().unwrap_or_default()
    }

    /// Nonzero terms in standard monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &BigInt)> {
        self.coeffs.iter().map(|(m, c)| (*m, c))
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if m.degree() > self.degree || c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(m).or_default();
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&m);
        }
    }

    fn times_letter(&self, l: Letter) -> MagnusSeries {
        let var = l.generator() as u64;
        let mut out = MagnusSeries { degree: self.degree, coeffs: BTreeMap::new() };
        for (&m, c) in &self.coeffs {
            let room = self.degree - m.degree();
            let mut cur = m;
            let mut coeff = c.clone();
            out.add_term(cur, coeff.clone());
            if l.is_inverse() {
                for _ in 0..room {
                    cur = cur.push(var);
                    coeff = -coeff;
                    out.add_term(cur, coeff.clone());
                }
            } else if room > 0 {
                out.add_term(cur.push(var), coeff);
            }
        }
        out
    }

    /// Product truncated at the smaller of the two degrees.
    pub fn mul_truncated(&self, other: &MagnusSeries) -> MagnusSeries {
        let degree = self.degree.min(other.degree);
        let mut out = MagnusSeries { degree, coeffs: BTreeMap::new() };
        for (&x, cx) in &self.coeffs {
            for (&y, cy) in &other.coeffs {
                if x.degree() + y.degree() <= degree {
                    out.add_term(x.concat(y), cx * cy);
                }
            }
        }
        out
    }

    /// First monomial of positive degree with a nonzero coefficient.
    pub fn leading(&self, order: MonomialOrder) -> Option<(Monomial, &BigInt)> {
        let lowest = self.coeffs.keys().find(|m| m.degree() > 0)?.degree();
        self.coeffs
            .iter()
            .filter(|(m, _)| m.degree() == lowest)
            .min_by(|(x, _), (y, _)| order.cmp(**x, **y))
            .map(|(m, c)| (*m, c))
    }
}

impl fmt::Display for MagnusSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.coeffs.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.degree() == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MagnusSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MagnusSeries[D={}]({self})", self.degree)
    }
}

fn dense_index(degree: u32, bits: u64) -> usize {
    ((1usize << degree) - 1) + bits as usize
}

/// Dense expansion with `i64` coefficients; `None` on overflow.
fn dense_expand(w: &FreeWord, degree: u32) -> Option<Vec<i64>> {
    let mut arr = vec![0i64; (1usize << (degree + 1)) - 1];
    arr[0] = 1;
    for &l in w.letters() {
        let var = l.generator() as u64;
        if l.is_inverse() {
            // new = old · (1 + X)⁻¹, i.e. new[mX] = old[mX] − new[m].
            for d in 1..=degree {
                for prefix in 0..(1u64 << (d - 1)) {
                    let src = arr[dense_index(d - 1, prefix)];
                    if src != 0 {
                        let dst = &mut arr[dense_index(d, (prefix << 1) | var)];
                        *dst = dst.checked_sub(src)?;
                    }
                }
            }
        } else {
            for d in (0..degree).rev() {
                for bits in 0..(1u64 << d) {
                    let src = arr[dense_index(d, bits)];
                    if src != 0 {
                        let dst = &mut arr[dense_index(d + 1, (bits << 1) | var)];
                        *dst = dst.checked_add(src)?;
                    }
                }
            }
        }
    }
    Some(arr)
}

/// Leading monomial of `expand(w, degree) − 1` and the sign of its
/// coefficient, or `None` if every coefficient up to `degree` vanishes.
pub fn leading_term_at(w: &FreeWord, degree: u32, order: MonomialOrder) -> Option<(Monomial, Sign)> {
    if degree <= DENSE_LIMIT {
        if let Some(arr) = dense_expand(w, degree) {
            for d in 1..=degree {
                for m in Monomial::of_degree(d, order) {
                    let c = arr[dense_index(d, m.bits())];
                    if c != 0 {
                        return Some((m, if c > 0 { Sign::Pos } else { Sign::Neg }));
                    }
                }
            }
            return None;
        }
    }
    let series = MagnusSeries::expand(w, degree);
    series
        .leading(order)
        .map(|(m, c)| (m, if c.is_positive() { Sign::Pos } else { Sign::Neg }))
}

/// How far the expansion is carried before giving up.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TruncationPolicy {
    /// Degree of the first attempt; doubled after each inconclusive one.
    pub initial_degree: u32,
    pub max_degree: u32,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy { initial_degree: 2, max_degree: 32 }
    }
}

impl TruncationPolicy {
    pub fn validate(&self) -> Result<(), Error> {
        if self.initial_degree == 0 || self.initial_degree > self.max_degree || self.max_degree > MAX_SUPPORTED_DEGREE {
            return Err(Error::InvalidDescriptor(format!(
                "degrees must satisfy 1 <= initial ({}) <= max ({}) <= {MAX_SUPPORTED_DEGREE}",
                self.initial_degree, self.max_degree
            )));
        }
        Ok(())
    }

    /// Leading term of `w`'s series under adaptive doubling.
    pub fn leading_term(&self, w: &FreeWord, order: MonomialOrder) -> Result<(Monomial, Sign), Error> {
        if w.is_identity() {
            return Err(Error::IdentityInput);
        }
        let mut degree = self.initial_degree.clamp(1, self.max_degree);
        loop {
            if let Some(t) = leading_term_at(w, degree, order) {
                return Ok(t);
            }
            if degree >= self.max_degree {
                return Err(Error::TruncationExceeded { word: w.clone(), max_degree: self.max_degree });
            }
            degree = (degree * 2).min(self.max_degree);
        }
    }
}

/// Archimedean class of a nontrivial element, named by its leading monomial.
/// `Ord` follows `≪`: the smaller class is the one of lesser magnitude.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArchClass {
    pub leading: Monomial,
    pub order: MonomialOrder,
}

impl Ord for ArchClass {
    fn cmp(&self, other: &ArchClass) -> Ordering {
        // A later monomial is a smaller class.
        self.order.cmp(other.leading, self.leading)
    }
}

impl PartialOrd for ArchClass {
    fn partial_cmp(&self, other: &ArchClass) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ArchClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.leading)
    }
}

/// Result of comparing two nontrivial elements by magnitude.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArchRel {
    MuchLess,
    Equivalent,
    MuchGreater,
}

impl ArchRel {
    pub fn from_ordering(o: Ordering) -> ArchRel {
        match o {
            Ordering::Less => ArchRel::MuchLess,
            Ordering::Equal => ArchRel::Equivalent,
            Ordering::Greater => ArchRel::MuchGreater,
        }
    }

    pub fn reverse(self) -> ArchRel {
        match self {
            ArchRel::MuchLess => ArchRel::MuchGreater,
            ArchRel::Equivalent => ArchRel::Equivalent,
            ArchRel::MuchGreater => ArchRel::MuchLess,
        }
    }
}

impl fmt::Display for ArchRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArchRel::MuchLess => "<<",
            ArchRel::Equivalent => "~~",
            ArchRel::MuchGreater => ">>",
        })
    }
}

/// A total bi-order on the free group, presented by its positive cone.
pub trait SignOracle: Send + Sync {
    /// Sign of a nontrivial word.
    fn sign(&self, w: &FreeWord) -> Result<Sign, Error>;

    fn label(&self) -> String;

    /// `u` versus `v`, via the sign of `u⁻¹v`.
    fn compare(&self, u: &FreeWord, v: &FreeWord) -> Result<Ordering, Error> {
        if u == v {
            return Ok(Ordering::Equal);
        }
        Ok(match self.sign(&u.invert().multiply(v))? {
            Sign::Pos => Ordering::Less,
            Sign::Neg => Ordering::Greater,
        })
    }

    fn abs(&self, w: &FreeWord) -> Result<FreeWord, Error> {
        if w.is_identity() || self.sign(w)? == Sign::Pos {
            Ok(w.clone())
        } else {
            Ok(w.invert())
        }
    }
}

/// An oracle that also names Archimedean classes by leading monomials.
pub trait ClassOracle: SignOracle {
    fn arch_class(&self, w: &FreeWord) -> Result<ArchClass, Error>;

    fn arch_cmp(&self, x: &FreeWord, y: &FreeWord) -> Result<ArchRel, Error> {
        Ok(ArchRel::from_ordering(self.arch_class(x)?.cmp(&self.arch_class(y)?)))
    }
}

impl<T: SignOracle + ?Sized> SignOracle for &T {
    fn sign(&self, w: &FreeWord) -> Result<Sign, Error> {
        (**self).sign(w)
    }
    fn label(&self) -> String {
        (**self).label()
    }
}

impl<T: ClassOracle + ?Sized> ClassOracle for &T {
    fn arch_class(&self, w: &FreeWord) -> Result<ArchClass, Error> {
        (**self).arch_class(w)
    }
}

/// The Magnus order itself, with either monomial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Magnus {
    pub order: MonomialOrder,
    pub policy: TruncationPolicy,
}

impl Magnus {
    pub fn new() -> Magnus {
        Magnus::default()
    }

    pub fn swapped() -> Magnus {
        Magnus { order: MonomialOrder::Swapped, ..Magnus::default() }
    }

    pub fn with_policy(mut self, policy: TruncationPolicy) -> Magnus {
        self.policy = policy;
        self
    }

    pub fn leading_term(&self, w: &FreeWord) -> Result<(Monomial, Sign), Error> {
        self.policy.leading_term(w, self.order)
    }
}

impl SignOracle for Magnus {
    fn sign(&self, w: &FreeWord) -> Result<Sign, Error> {
        Ok(self.leading_term(w)?.1)
    }

    fn label(&self) -> String {
        match self.order {
            MonomialOrder::Standard => "magnus".into(),
            MonomialOrder::Swapped => "magnus-swapped".into(),
        }
    }
}

impl ClassOracle for Magnus {
    fn arch_class(&self, w: &FreeWord) -> Result<ArchClass, Error> {
        Ok(ArchClass { leading: self.leading_term(w)?.0, order: self.order })
    }
}
