//! Finite approximations of positive cones.
//!
//! A [`PartialCone`] assigns signs to some reduced words of length at most
//! `L`. [`PartialCone::saturate`] closes the assignment under the cone rules
//! inside that ball:
//!
//! * R1: `w` and `w⁻¹` carry opposite signs (built into the storage);
//! * R2: two words of the same sign multiply to a word of that sign;
//! * R3 (bi-order mode): conjugating by a word of length at most `Lc` keeps
//!   the sign.
//!
//! Saturation is sound but not complete: a contradiction that only shows up
//! through words longer than `L` goes unnoticed, so a consistent result means
//! "consistent at length L" and nothing more.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::magnus::{Sign, SignOracle};
use crate::word::{ball, FreeWord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// R1 and R2 only.
    Left,
    /// R1, R2 and R3.
    #[default]
    Bi,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode, Error> {
        match s {
            "left" => Ok(Mode::Left),
            "bi" => Ok(Mode::Bi),
            other => Err(Error::Parse(format!("unknown mode {other:?}, expected bi or left"))),
        }
    }
}

/// The shortlex-smaller of `w` and `w⁻¹`.
pub fn canonical(w: &FreeWord) -> FreeWord {
    let inv = w.invert();
    if inv < *w {
        inv
    } else {
        w.clone()
    }
}

/// Length of the reduced product without building it.
fn product_len(u: &FreeWord, v: &FreeWord) -> usize {
    let (x, y) = (u.letters(), v.letters());
    let mut k = 0;
    while k < x.len() && k < y.len() && x[x.len() - 1 - k].inverse() == y[k] {
        k += 1;
    }
    x.len() + y.len() - 2 * k
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialCone {
    pub length_bound: usize,
    pub conj_bound: usize,
    pub mode: Mode,
    /// Keyed by canonical representative.
    signs: BTreeMap<FreeWord, Sign>,
    /// Assignments accepted without the clash check; saturate resolves them.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    preseeded: Vec<(FreeWord, Sign)>,
}

impl PartialCone {
    pub fn new(length_bound: usize, conj_bound: usize, mode: Mode) -> PartialCone {
        PartialCone { length_bound, conj_bound, mode, signs: BTreeMap::new(), preseeded: Vec::new() }
    }

    pub fn sign(&self, w: &FreeWord) -> Option<Sign> {
        if w.is_identity() {
            return None;
        }
        let c = canonical(w);
        let s = *self.signs.get(&c)?;
        Some(if c == *w { s } else { -s })
    }

    /// Records `s` for `w` and `-s` for `w⁻¹`.
    pub fn assert_sign(&mut self, w: &FreeWord, s: Sign) -> Result<(), Error> {
        if w.is_identity() {
            return Err(Error::IdentityInput);
        }
        if w.len() > self.length_bound {
            return Err(Error::LengthExceeded { word: w.clone(), bound: self.length_bound });
        }
        match self.sign(w) {
            Some(old) if old != s => Err(Error::ImmediateClash { word: w.clone() }),
            Some(_) => Ok(()),
            None => {
                let c = canonical(w);
                let cs = if c == *w { s } else { -s };
                self.signs.insert(c, cs);
                Ok(())
            }
        }
    }

    /// Builder form of [`assert_sign`](Self::assert_sign).
    pub fn with_sign(mut self, w: &FreeWord, s: Sign) -> Result<PartialCone, Error> {
        self.assert_sign(w, s)?;
        Ok(self)
    }

    /// Asserts `+` on every word of `positives` and `-` on every word of `negatives`.
    pub fn with_constraints(
        length_bound: usize,
        conj_bound: usize,
        mode: Mode,
        positives: &[FreeWord],
        negatives: &[FreeWord],
    ) -> Result<PartialCone, Error> {
        let mut c = PartialCone::new(length_bound, conj_bound, mode);
        for p in positives {
            c.assert_sign(p, Sign::Pos)?;
        }
        for n in negatives {
            c.assert_sign(n, Sign::Neg)?;
        }
        Ok(c)
    }

    /// Records an assignment without checking it against existing signs.
    /// A clash surfaces as a contradiction when the cone is saturated.
    pub fn preseed(&mut self, w: &FreeWord, s: Sign) -> Result<(), Error> {
        if w.is_identity() {
            return Err(Error::IdentityInput);
        }
        if w.len() > self.length_bound {
            return Err(Error::LengthExceeded { word: w.clone(), bound: self.length_bound });
        }
        self.preseeded.push((w.clone(), s));
        Ok(())
    }

    /// Every determined word with its sign, both `w` and `w⁻¹`, in ShortLex order.
    pub fn assignments(&self) -> Vec<(FreeWord, Sign)> {
        let mut out: Vec<(FreeWord, Sign)> = self
            .signs
            .iter()
            .flat_map(|(w, s)| [(w.clone(), *s), (w.invert(), -*s)])
            .collect();
        out.sort();
        out
    }

    /// Words known to be positive, in ShortLex order.
    pub fn positives(&self) -> Vec<FreeWord> {
        let mut out: Vec<FreeWord> = self
            .signs
            .iter()
            .map(|(w, s)| if *s == Sign::Pos { w.clone() } else { w.invert() })
            .collect();
        out.sort();
        out
    }

    /// Number of determined inverse pairs.
    pub fn determined_pairs(&self) -> usize {
        self.signs.len()
    }

    /// Total number of inverse pairs in the ball of radius `L`.
    pub fn total_pairs(&self) -> usize {
        (crate::word::words_up_to_length(self.length_bound) as usize - 1) / 2
    }

    pub fn is_complete(&self) -> bool {
        self.preseeded.is_empty() && self.determined_pairs() == self.total_pairs()
    }

    /// The ShortLex-first canonical word whose sign is not yet known.
    pub fn first_undetermined(&self) -> Option<FreeWord> {
        ball(self.length_bound)
            .into_iter()
            .skip(1)
            .find(|x| canonical(x) == *x && !self.signs.contains_key(x))
    }

    /// Closes the assignment under the rules of the current mode.
    pub fn saturate(&self) -> (PartialCone, SaturationReport) {
        Saturator::new(self).run()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// Assignment present in the input cone.
    Seed,
    /// R2: `word = premises[0] · premises[1]`.
    Product,
    /// R3: `word = g · premises[0] · g⁻¹` with `g = premises[1]`.
    Conjugate,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Seed => "seed",
            Rule::Product => "product",
            Rule::Conjugate => "conjugate",
        })
    }
}

/// One derived fact. For [`Rule::Product`] both premises carry `sign`; for
/// [`Rule::Conjugate`] the first premise carries `sign` and the second is the
/// conjugator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    pub word: FreeWord,
    pub sign: Sign,
    pub rule: Rule,
    pub premises: Vec<FreeWord>,
}

impl Derivation {
    /// Recomputes the derived word from the premises.
    pub fn conclusion(&self) -> Result<FreeWord, String> {
        match (self.rule, self.premises.as_slice()) {
            (Rule::Seed, []) => Ok(self.word.clone()),
            (Rule::Product, [u, v]) => Ok(u.multiply(v)),
            (Rule::Conjugate, [x, g]) => Ok(x.conjugate(g)),
            _ => Err(format!("malformed {} derivation of {}", self.rule, self.word)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Consistent,
    Contradiction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contradiction {
    /// A word forced to be both positive and negative.
    pub word: FreeWord,
    /// Seeds and derivations that force both signs, in derivation order.
    /// The last entry assigns the sign that clashes.
    pub trace: Vec<Derivation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturationReport {
    pub outcome: Outcome,
    /// New facts, in the order they were found.
    pub derived: Vec<Derivation>,
    pub contradiction: Option<Contradiction>,
}

impl SaturationReport {
    pub fn is_consistent(&self) -> bool {
        self.outcome == Outcome::Consistent
    }

    /// Replays every derivation against the input cone: each premise must
    /// already be known with the right sign, each conclusion must follow from
    /// its rule and stay inside the length bounds.
    pub fn replay(&self, input: &PartialCone) -> Result<(), String> {
        let mut known = Replay::new(input);
        for d in &self.derived {
            known.check(d)?;
        }
        if let Some(c) = &self.contradiction {
            let mut known = Replay::new(input);
            let (last, rest) = c.trace.split_last().ok_or("empty contradiction trace")?;
            for d in rest {
                known.check(d)?;
            }
            let opposite = known.sign(&last.word).map(|s| s != last.sign);
            known.check_premises(last)?;
            if last.word != c.word || opposite != Some(true) {
                return Err(format!("trace does not force {} both ways", c.word));
            }
        }
        Ok(())
    }
}

struct Replay<'a> {
    cone: &'a PartialCone,
    known: HashMap<FreeWord, Sign>,
}

impl<'a> Replay<'a> {
    fn new(cone: &'a PartialCone) -> Replay<'a> {
        let mut known = HashMap::new();
        for (w, s) in cone.assignments() {
            known.insert(w, s);
        }
        Replay { cone, known }
    }

    fn sign(&self, w: &FreeWord) -> Option<Sign> {
        self.known.get(w).copied()
    }

    fn check_premises(&self, d: &Derivation) -> Result<(), String> {
        let derived = d.conclusion()?;
        if derived != d.word || d.word.is_identity() || d.word.len() > self.cone.length_bound {
            return Err(format!("{} does not follow by {}", d.word, d.rule));
        }
        match d.rule {
            Rule::Seed => {
                let listed = self.cone.preseeded.iter().any(|(w, s)| *w == d.word && *s == d.sign);
                if !listed && self.sign(&d.word) != Some(d.sign) {
                    return Err(format!("{} is not a seed", d.word));
                }
            }
            Rule::Product => {
                for p in &d.premises {
                    if self.sign(p) != Some(d.sign) {
                        return Err(format!("premise {p} of {} lacks sign {}", d.word, d.sign));
                    }
                }
            }
            Rule::Conjugate => {
                if self.cone.mode != Mode::Bi || d.premises[1].len() > self.cone.conj_bound {
                    return Err(format!("conjugation step for {} not allowed", d.word));
                }
                if self.sign(&d.premises[0]) != Some(d.sign) {
                    return Err(format!("premise {} of {} lacks sign {}", d.premises[0], d.word, d.sign));
                }
            }
        }
        Ok(())
    }

    fn check(&mut self, d: &Derivation) -> Result<(), String> {
        self.check_premises(d)?;
        if self.sign(&d.word) == Some(-d.sign) {
            return Err(format!("{} already has the opposite sign", d.word));
        }
        self.known.insert(d.word.clone(), d.sign);
        self.known.insert(d.word.invert(), -d.sign);
        Ok(())
    }
}

/// Where a positive word came from: index into `derivations`.
type Origin = usize;

struct Saturator<'a> {
    input: &'a PartialCone,
    conjugators: Vec<FreeWord>,
    /// Sign of every known word, both orientations.
    known: HashMap<FreeWord, (Sign, Origin)>,
    positives: Vec<FreeWord>,
    /// Seeds first, then new facts.
    derivations: Vec<Derivation>,
    seeds: usize,
    queue: VecDeque<usize>,
    processed: Vec<usize>,
}

impl<'a> Saturator<'a> {
    fn new(input: &'a PartialCone) -> Saturator<'a> {
        let conjugators = match input.mode {
            Mode::Bi => ball(input.conj_bound).into_iter().skip(1).collect(),
            Mode::Left => Vec::new(),
        };
        Saturator {
            input,
            conjugators,
            known: HashMap::new(),
            positives: Vec::new(),
            derivations: Vec::new(),
            seeds: 0,
            queue: VecDeque::new(),
            processed: Vec::new(),
        }
    }

    /// Adds a fact in the orientation given by the derivation. Returns the
    /// clash when the word already has the opposite sign.
    fn add(&mut self, d: Derivation) -> Option<Contradiction> {
        match self.known.get(&d.word) {
            Some((s, _)) if *s == d.sign => None,
            Some(_) => Some(self.contradiction(d)),
            None => {
                let idx = self.derivations.len();
                let positive = if d.sign == Sign::Pos { d.word.clone() } else { d.word.invert() };
                self.known.insert(d.word.invert(), (-d.sign, idx));
                self.known.insert(d.word.clone(), (d.sign, idx));
                self.derivations.push(d);
                self.queue.push_back(self.positives.len());
                self.positives.push(positive);
                None
            }
        }
    }

    /// Expresses `u · v` (both positive) as a fact on the canonical side.
    fn product_fact(u: &FreeWord, v: &FreeWord) -> Derivation {
        let x = u.multiply(v);
        if canonical(&x) == x {
            Derivation { word: x, sign: Sign::Pos, rule: Rule::Product, premises: vec![u.clone(), v.clone()] }
        } else {
            Derivation {
                word: x.invert(),
                sign: Sign::Neg,
                rule: Rule::Product,
                premises: vec![v.invert(), u.invert()],
            }
        }
    }

    fn conjugate_fact(p: &FreeWord, g: &FreeWord) -> Derivation {
        let x = p.conjugate(g);
        if canonical(&x) == x {
            Derivation { word: x, sign: Sign::Pos, rule: Rule::Conjugate, premises: vec![p.clone(), g.clone()] }
        } else {
            Derivation {
                word: x.invert(),
                sign: Sign::Neg,
                rule: Rule::Conjugate,
                premises: vec![p.invert(), g.clone()],
            }
        }
    }

    fn contradiction(&self, clash: Derivation) -> Contradiction {
        let mut needed = vec![false; self.derivations.len()];
        let mut stack = vec![clash.word.clone()];
        match clash.rule {
            Rule::Seed => {}
            Rule::Product => stack.extend(clash.premises.iter().cloned()),
            Rule::Conjugate => stack.push(clash.premises[0].clone()),
        }
        while let Some(x) = stack.pop() {
            let Some((_, origin)) = self.known.get(&x) else { continue };
            if needed[*origin] {
                continue;
            }
            needed[*origin] = true;
            let d = &self.derivations[*origin];
            match d.rule {
                Rule::Seed => {}
                Rule::Product => stack.extend(d.premises.iter().cloned()),
                Rule::Conjugate => stack.push(d.premises[0].clone()),
            }
        }
        let mut trace: Vec<Derivation> =
            self.derivations.iter().zip(needed).filter(|(_, n)| *n).map(|(d, _)| d.clone()).collect();
        trace.push(clash.clone());
        Contradiction { word: clash.word, trace }
    }

    fn run(mut self) -> (PartialCone, SaturationReport) {
        let bound = self.input.length_bound;
        let mut seeds: Vec<(FreeWord, Sign)> = self.input.signs.iter().map(|(w, s)| (w.clone(), *s)).collect();
        seeds.extend(self.input.preseeded.iter().cloned());
        for (w, s) in seeds {
            let d = Derivation { word: w, sign: s, rule: Rule::Seed, premises: Vec::new() };
            if let Some(c) = self.add(d) {
                return self.finish(Some(c));
            }
        }
        self.seeds = self.derivations.len();

        while let Some(i) = self.queue.pop_front() {
            self.processed.push(i);
            let p = self.positives[i].clone();
            // R2 against everything processed so far, p itself included.
            for j in 0..self.processed.len() {
                let q = self.positives[self.processed[j]].clone();
                for (u, v) in [(&p, &q), (&q, &p)] {
                    let n = product_len(u, v);
                    if n == 0 || n > bound {
                        continue;
                    }
                    if let Some(c) = self.add(Self::product_fact(u, v)) {
                        return self.finish(Some(c));
                    }
                }
            }
            for k in 0..self.conjugators.len() {
                let g = &self.conjugators[k];
                if p.conjugate(g).len() > bound {
                    continue;
                }
                let fact = Self::conjugate_fact(&p, g);
                if let Some(c) = self.add(fact) {
                    return self.finish(Some(c));
                }
            }
        }
        self.finish(None)
    }

    fn finish(self, contradiction: Option<Contradiction>) -> (PartialCone, SaturationReport) {
        let mut cone = PartialCone::new(self.input.length_bound, self.input.conj_bound, self.input.mode);
        for d in &self.derivations {
            let c = canonical(&d.word);
            let s = if c == d.word { d.sign } else { -d.sign };
            cone.signs.insert(c, s);
        }
        let report = SaturationReport {
            outcome: if contradiction.is_some() { Outcome::Contradiction } else { Outcome::Consistent },
            derived: self.derivations[self.seeds.min(self.derivations.len())..].to_vec(),
            contradiction,
        };
        (cone, report)
    }
}

/// The fully determined cone read off a total order.
pub fn from_oracle<O: SignOracle + ?Sized>(
    oracle: &O,
    length_bound: usize,
    conj_bound: usize,
) -> Result<PartialCone, Error> {
    let mut c = PartialCone::new(length_bound, conj_bound, Mode::Bi);
    for x in ball(length_bound).into_iter().skip(1) {
        if canonical(&x) == x {
            let s = oracle.sign(&x)?;
            c.signs.insert(x, s);
        }
    }
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    /// Fully determined cones, consistent at length `L`, in search order.
    pub completions: Vec<PartialCone>,
    /// Search nodes visited (one per saturation).
    pub nodes: usize,
    /// True when the node budget ran out before the search finished.
    pub exhausted: bool,
}

/// Depth-first search over sign choices for the ShortLex-first undetermined
/// word, `+` before `-`, re-saturating at every node and pruning
/// contradictions.
pub fn enumerate_extensions(cone: &PartialCone, budget: usize) -> Census {
    let mut census = Census { completions: Vec::new(), nodes: 0, exhausted: false };
    let mut stack = vec![cone.clone()];
    while let Some(c) = stack.pop() {
        if census.nodes >= budget {
            census.exhausted = true;
            break;
        }
        census.nodes += 1;
        let (sat, report) = c.saturate();
        if !report.is_consistent() {
            continue;
        }
        match sat.first_undetermined() {
            None => census.completions.push(sat),
            Some(x) => {
                let mut minus = sat.clone();
                minus.signs.insert(x.clone(), Sign::Neg);
                let mut plus = sat;
                plus.signs.insert(x, Sign::Pos);
                stack.push(minus);
                stack.push(plus);
            }
        }
    }
    census
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::{family, reverse, FamilyOrder};
    use crate::word::w;

    fn cone(l: usize, lc: usize, pos: &[&str]) -> PartialCone {
        let p: Vec<FreeWord> = pos.iter().map(|s| w(s)).collect();
        PartialCone::with_constraints(l, lc, Mode::Bi, &p, &[]).unwrap()
    }

    #[test]
    fn assert_examples() {
        let mut c = PartialCone::new(3, 0, Mode::Bi);
        c.assert_sign(&w("a"), Sign::Pos).unwrap();
        assert_eq!(c.sign(&w("A")), Some(Sign::Neg));
        assert_eq!(
            c.assert_sign(&w("A"), Sign::Pos),
            Err(Error::ImmediateClash { word: w("A") })
        );
        assert!(matches!(c.assert_sign(&w("abAB"), Sign::Pos), Err(Error::LengthExceeded { .. })));
    }

    #[test]
    fn saturate_two_generators() {
        let c = cone(2, 2, &["a", "b"]);
        let (sat, report) = c.saturate();
        assert!(report.is_consistent());
        for x in ["aa", "bb", "ab", "ba"] {
            assert_eq!(sat.sign(&w(x)), Some(Sign::Pos), "{x}");
            assert_eq!(sat.sign(&w(x).invert()), Some(Sign::Neg));
        }
        // Ba is a conjugate of aB, so these two pairs are tied but free.
        assert_eq!(sat.sign(&w("aB")), None);
        assert_eq!(sat.sign(&w("Ba")), None);
        assert_eq!(sat.determined_pairs(), 6);
        report.replay(&c).unwrap();
    }

    #[test]
    fn preseeded_clash_is_reported() {
        let mut c = PartialCone::new(2, 0, Mode::Bi);
        c.preseed(&w("a"), Sign::Pos).unwrap();
        c.preseed(&w("A"), Sign::Pos).unwrap();
        let (_, report) = c.saturate();
        assert_eq!(report.outcome, Outcome::Contradiction);
        let con = report.contradiction.as_ref().unwrap();
        assert_eq!(canonical(&con.word), w("a"));
        report.replay(&c).unwrap();
    }

    #[test]
    fn derived_contradiction_has_replayable_trace() {
        // a > 1, b > 1 and ab < 1 cannot coexist.
        let c = PartialCone::with_constraints(2, 0, Mode::Left, &[w("a"), w("b")], &[w("ab")]).unwrap();
        let (_, report) = c.saturate();
        assert_eq!(report.outcome, Outcome::Contradiction);
        report.replay(&c).unwrap();
        // b · Ba = a.
        let c = PartialCone::with_constraints(2, 1, Mode::Bi, &[w("b"), w("Ba")], &[w("a")]).unwrap();
        let (_, report) = c.saturate();
        assert_eq!(report.outcome, Outcome::Contradiction);
        report.replay(&c).unwrap();
    }

    #[test]
    fn tampered_report_fails_replay() {
        let c = cone(2, 2, &["a", "b"]);
        let (_, mut report) = c.saturate();
        report.derived[0].premises.reverse();
        report.derived[0].premises[0] = w("B");
        assert!(report.replay(&c).is_err());
    }

    #[test]
    fn from_oracle_examples() {
        let m = FamilyOrder::magnus();
        let c = from_oracle(&m, 1, 0).unwrap();
        let got: Vec<String> = c.assignments().iter().map(|(x, s)| format!("{x}:{s}")).collect();
        assert_eq!(got, ["a:+", "A:-", "b:+", "B:-"]);
        let r = from_oracle(&reverse(&m), 1, 0).unwrap();
        assert_eq!(r.sign(&w("a")), Some(Sign::Neg));
        assert_eq!(r.sign(&w("B")), Some(Sign::Pos));
        let c2 = from_oracle(&m, 2, 0).unwrap();
        assert_eq!(c2.sign(&w("Ba")), Some(Sign::Pos));
        // aB = a·Ba·a⁻¹, so it shares the sign of Ba in every bi-order.
        assert_eq!(c2.sign(&w("aB")), Some(Sign::Pos));
        assert_eq!(c2.sign(&w("Ab")), Some(Sign::Neg));
        assert!(c2.is_complete());
    }

    #[test]
    fn family_cones_saturate_without_news() {
        for o in family() {
            let c = from_oracle(&o, 4, 2).unwrap();
            let (sat, report) = c.saturate();
            assert!(report.is_consistent(), "{}", o.label());
            assert!(report.derived.is_empty(), "{}", o.label());
            assert_eq!(sat, c);
        }
    }

    #[test]
    fn census_examples() {
        let empty = PartialCone::new(1, 1, Mode::Bi);
        assert_eq!(enumerate_extensions(&empty, 100).completions.len(), 4);
        let mut bad = PartialCone::new(2, 2, Mode::Bi);
        bad.preseed(&w("a"), Sign::Pos).unwrap();
        bad.preseed(&w("A"), Sign::Pos).unwrap();
        assert_eq!(enumerate_extensions(&bad, 100).completions.len(), 0);
        let left = PartialCone::with_constraints(2, 2, Mode::Left, &[w("a"), w("b")], &[]).unwrap();
        assert_eq!(enumerate_extensions(&left, 100).completions.len(), 4);
        let bi = cone(2, 2, &["a", "b"]);
        assert_eq!(enumerate_extensions(&bi, 100).completions.len(), 2);
    }

    #[test]
    fn census_budget_is_reported() {
        let empty = PartialCone::new(2, 2, Mode::Left);
        let c = enumerate_extensions(&empty, 3);
        assert!(c.exhausted);
        assert_eq!(c.nodes, 3);
    }

    #[test]
    fn monotone_in_bounds() {
        let small = cone(3, 1, &["a", "bA"]).saturate().0;
        let big = cone(4, 2, &["a", "bA"]).saturate().0;
        for (x, s) in small.assignments() {
            assert_eq!(big.sign(&x), Some(s));
        }
        let sat = cone(3, 1, &["a", "bA"]);
        for (x, s) in sat.assignments() {
            assert_eq!(small.sign(&x), Some(s));
        }
    }
}
