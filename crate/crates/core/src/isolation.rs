//! Non-isolation certificates: for a basic open set of orders (finitely many
//! positivity constraints satisfied by the Magnus order), exhibit a second
//! order in the same set that disagrees with Magnus on an explicit word.
//!
//! The search runs in two phases. The structured phase scans a fixed list of
//! transformed Magnus orders, each a genuine total bi-order. The fallback
//! phase asserts the opposite sign on a candidate word and saturates; a
//! consistent result only shows consistency up to the length bound.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cones::{from_oracle, Mode, PartialCone};
use crate::error::Error;
use crate::magnus::{ArchClass, ClassOracle, Magnus, Monomial, MonomialOrder, Sign, SignOracle};
use crate::transform::{
    convex_flip, monomial_swap, pullback, reverse, ConvexThreshold, FamilyOrder, NielsenMap, OrderDescriptor,
};
use crate::verify::Verifier;
use crate::word::{ball, FreeWord};

/// Positivity constraints `x₁, …, xₙ > 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BasicOpenSet {
    positives: Vec<FreeWord>,
}

impl BasicOpenSet {
    pub fn new(positives: Vec<FreeWord>) -> Result<BasicOpenSet, Error> {
        for (i, x) in positives.iter().enumerate() {
            if x.is_identity() {
                return Err(Error::IdentityInput);
            }
            if positives[..i].contains(&x.invert()) {
                return Err(Error::PreconditionFailed(format!("{x} and its inverse are both constraints")));
            }
        }
        let mut positives = positives;
        positives.dedup();
        Ok(BasicOpenSet { positives })
    }

    pub fn positives(&self) -> &[FreeWord] {
        &self.positives
    }

    pub fn is_empty(&self) -> bool {
        self.positives.is_empty()
    }

    /// True when `w` or `w⁻¹` is a constraint.
    pub fn mentions(&self, w: &FreeWord) -> bool {
        let inv = w.invert();
        self.positives.iter().any(|x| *x == *w || *x == inv)
    }
}

impl fmt::Display for BasicOpenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.positives.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Preferred witness words: for each constraint `x`, the word
/// `(a x a⁻¹)(b x b⁻¹)⁻¹`, then every word of length at most `length_bound`
/// in ShortLex order. Constraints, their inverses, the identity and repeats
/// are skipped.
pub fn witness_candidates(u: &BasicOpenSet, length_bound: usize) -> Vec<FreeWord> {
    let (a, b) = (crate::word::w("a"), crate::word::w("b"));
    let mut out: Vec<FreeWord> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let shaped = u.positives().iter().map(|x| x.conjugate(&a).multiply(&x.conjugate(&b).invert()));
    let plain = ball(length_bound).into_iter();
    for c in shaped.chain(plain) {
        if c.is_identity() || c.len() > length_bound || u.mentions(&c) || !seen.insert(c.clone()) {
            continue;
        }
        out.push(c);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedWord {
    pub word: FreeWord,
    pub sign: Sign,
}

/// One side of a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Side {
    /// A total bi-order of the Magnus family.
    Order { descriptor: OrderDescriptor },
    /// A sign assignment whose saturation is consistent at the certificate's bounds.
    Cone { assignments: Vec<SignedWord> },
}

impl Side {
    pub fn label(&self) -> String {
        match self {
            Side::Order { descriptor } => descriptor.to_string(),
            Side::Cone { assignments } => {
                let parts: Vec<String> = assignments.iter().map(|s| format!("{}:{}", s.word, s.sign)).collect();
                format!("cone{{{}}}", parts.join(", "))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    StructuredTransform,
    ConeSearch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignPair {
    pub base: Sign,
    pub alternative: Sign,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonIsolationCertificate {
    pub constraints: BasicOpenSet,
    pub length_bound: usize,
    pub conj_bound: usize,
    pub base: Side,
    pub alternative: Side,
    pub witness_word: FreeWord,
    pub method: Method,
    pub signs: SignPair,
}

/// Distinct classes of the nontrivial words of length at most `len`, in
/// increasing `≪` order, each with its ShortLex-first word and word count.
pub fn class_census<O: ClassOracle + ?Sized>(oracle: &O, len: usize) -> Result<Vec<(ArchClass, FreeWord, usize)>, Error> {
    let mut found: HashMap<ArchClass, (FreeWord, usize)> = HashMap::new();
    for x in ball(len).into_iter().skip(1) {
        let c = oracle.arch_class(&x)?;
        found.entry(c).or_insert_with(|| (x.clone(), 0)).1 += 1;
    }
    let mut out: Vec<(ArchClass, FreeWord, usize)> = found.into_iter().map(|(c, (w, n))| (c, w, n)).collect();
    out.sort_by_key(|r| r.0);
    Ok(out)
}

/// Word length scanned for class thresholds; the shortest words with a
/// degree-3 leading monomial have length 8.
pub const THRESHOLD_CENSUS_LENGTH: usize = 8;

/// Leading monomials of degree at most 3 realized by words up to
/// [`THRESHOLD_CENSUS_LENGTH`], in monomial order.
pub fn class_thresholds(order: MonomialOrder) -> Vec<Monomial> {
    static CACHE: OnceLock<[Vec<Monomial>; 2]> = OnceLock::new();
    let cache = CACHE.get_or_init(|| {
        let scan = |order: MonomialOrder| {
            let m = Magnus { order, ..Magnus::new() };
            let mut ms: Vec<Monomial> = Vec::new();
            // Words of length > 4 only add classes inside the commutator subgroup,
            // which the exponent sums detect cheaply.
            for x in ball(THRESHOLD_CENSUS_LENGTH).into_iter().skip(1) {
                if x.len() > 4 && x.exponent_sums() != [0, 0] {
                    continue;
                }
                let (lead, _) = m.leading_term(&x).expect("nontrivial word");
                if lead.degree() <= 3 && !ms.contains(&lead) {
                    ms.push(lead);
                }
            }
            ms.sort_by(|x, y| order.cmp(*x, *y));
            ms
        };
        [scan(MonomialOrder::Standard), scan(MonomialOrder::Swapped)]
    });
    match order {
        MonomialOrder::Standard => cache[0].clone(),
        MonomialOrder::Swapped => cache[1].clone(),
    }
}

/// Orders scanned by the structured phase, in scan order: reverse, monomial
/// swap, convex flips at each class threshold, reversed convex flips, then
/// Nielsen pullbacks of whitelist length at most 2.
pub fn structured_family() -> Vec<FamilyOrder> {
    let m = FamilyOrder::magnus();
    let thresholds = class_thresholds(MonomialOrder::Standard);
    let mut out = vec![reverse(&m), monomial_swap(&m).expect("base order")];
    out.extend(thresholds.iter().map(|t| convex_flip(&m, ConvexThreshold(*t))));
    out.extend(thresholds.iter().map(|t| reverse(&convex_flip(&m, ConvexThreshold(*t)))));
    out.extend(NielsenMap::all_up_to(2).into_iter().skip(1).map(|phi| pullback(&m, &phi)));
    out
}

/// Signs of every word in the ball, indexed by ShortLex index.
struct SignTable(Vec<Sign>);

impl SignTable {
    fn build(oracle: &FamilyOrder, len: usize) -> Result<SignTable, Error> {
        let words = ball(len);
        let signs: Result<Vec<Sign>, Error> =
            words.iter().map(|x| if x.is_identity() { Ok(Sign::Pos) } else { oracle.sign(x) }).collect();
        Ok(SignTable(signs?))
    }

    fn get(&self, x: &FreeWord) -> Sign {
        self.0[x.shortlex_index() as usize]
    }
}

/// Search state shared across many basic open sets at fixed bounds: sign
/// tables and saturation checks are computed once per order.
pub struct Searcher {
    pub length_bound: usize,
    pub conj_bound: usize,
    base: FamilyOrder,
    family: Vec<FamilyOrder>,
    base_table: OnceLock<Result<SignTable, Error>>,
    tables: Vec<OnceLock<Result<SignTable, Error>>>,
    /// Whether `from_oracle` then `saturate` is quiet, per order.
    base_sound: OnceLock<bool>,
    sound: Vec<OnceLock<bool>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Which {
    Base,
    Member(usize),
}

impl Searcher {
    pub fn new(length_bound: usize, conj_bound: usize) -> Searcher {
        let family = structured_family();
        let n = family.len();
        Searcher {
            length_bound,
            conj_bound,
            base: FamilyOrder::magnus(),
            family,
            base_table: OnceLock::new(),
            tables: (0..n).map(|_| OnceLock::new()).collect(),
            base_sound: OnceLock::new(),
            sound: (0..n).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn family(&self) -> &[FamilyOrder] {
        &self.family
    }

    fn order(&self, which: Which) -> &FamilyOrder {
        match which {
            Which::Base => &self.base,
            Which::Member(i) => &self.family[i],
        }
    }

    fn table(&self, which: Which) -> Result<&SignTable, Error> {
        let cell = match which {
            Which::Base => &self.base_table,
            Which::Member(i) => &self.tables[i],
        };
        cell.get_or_init(|| SignTable::build(self.order(which), self.length_bound)).as_ref().map_err(Clone::clone)
    }

    fn sound(&self, which: Which) -> bool {
        let cell = match which {
            Which::Base => &self.base_sound,
            Which::Member(i) => &self.sound[i],
        };
        *cell.get_or_init(|| match from_oracle(self.order(which), self.length_bound, self.conj_bound) {
            Ok(c) => {
                let (_, report) = c.saturate();
                report.is_consistent() && report.derived.is_empty()
            }
            Err(_) => false,
        })
    }

    fn check_constraints(&self, u: &BasicOpenSet) -> Result<(), Error> {
        let base = self.table(Which::Base)?;
        for x in u.positives() {
            if x.len() > self.length_bound {
                return Err(Error::PreconditionFailed(format!(
                    "constraint {x} is longer than the length bound {}",
                    self.length_bound
                )));
            }
            if base.get(x) != Sign::Pos {
                return Err(Error::PreconditionFailed(format!("constraint {x} is negative in the Magnus order")));
            }
        }
        Ok(())
    }

    /// Finds a certificate for `u`. `budget` caps the saturations tried in
    /// the fallback phase.
    pub fn search(&self, u: &BasicOpenSet, budget: usize) -> Result<NonIsolationCertificate, Error> {
        self.check_constraints(u)?;
        let base = self.table(Which::Base)?;
        let candidates = witness_candidates(u, self.length_bound);
        let certificate = |alternative: Side, witness: &FreeWord, method: Method, alt: Sign| NonIsolationCertificate {
            constraints: u.clone(),
            length_bound: self.length_bound,
            conj_bound: self.conj_bound,
            base: Side::Order { descriptor: self.base.descriptor().clone() },
            alternative,
            witness_word: witness.clone(),
            method,
            signs: SignPair { base: base.get(witness), alternative: alt },
        };

        for i in 0..self.family.len() {
            let table = self.table(Which::Member(i))?;
            if u.positives().iter().any(|x| table.get(x) != Sign::Pos) {
                continue;
            }
            let Some(wit) = candidates.iter().find(|c| table.get(c) != base.get(c)) else { continue };
            if !self.sound(Which::Base) || !self.sound(Which::Member(i)) {
                continue;
            }
            let alt = Side::Order { descriptor: self.family[i].descriptor().clone() };
            return Ok(certificate(alt, wit, Method::StructuredTransform, table.get(wit)));
        }

        let mut tried = 0;
        if self.sound(Which::Base) {
            for c in candidates.iter().take(budget) {
                tried += 1;
                let flipped = -base.get(c);
                let mut cone =
                    PartialCone::with_constraints(self.length_bound, self.conj_bound, Mode::Bi, u.positives(), &[])?;
                cone.assert_sign(c, flipped)?;
                let (sat, report) = cone.saturate();
                if report.is_consistent() && sat.sign(c) == Some(flipped) {
                    let mut assignments: Vec<SignedWord> =
                        u.positives().iter().map(|x| SignedWord { word: x.clone(), sign: Sign::Pos }).collect();
                    assignments.push(SignedWord { word: c.clone(), sign: flipped });
                    return Ok(certificate(Side::Cone { assignments }, c, Method::ConeSearch, flipped));
                }
            }
        }
        Err(Error::NotFound {
            constraints: u.positives().iter().map(ToString::to_string).collect::<Vec<_>>().join(", "),
            structured_tried: self.family.len(),
            candidates_tried: tried,
        })
    }
}

/// One-shot search; see [`Searcher::search`].
pub fn witness_nonisolation(
    u: &BasicOpenSet,
    length_bound: usize,
    conj_bound: usize,
    budget: usize,
) -> Result<NonIsolationCertificate, Error> {
    Searcher::new(length_bound, conj_bound).search(u, budget)
}

/// Every set of at most `n_max` Magnus-positive words of length at most
/// `len_max` (one word per inverse pair), smallest sets first.
pub fn enumerate_open_sets(n_max: usize, len_max: usize) -> Result<Vec<BasicOpenSet>, Error> {
    let m = Magnus::new();
    let mut pool = Vec::new();
    for x in ball(len_max).into_iter().skip(1) {
        if m.sign(&x)? == Sign::Pos {
            pool.push(x);
        }
    }
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    fn rec(pool: &[FreeWord], start: usize, left: usize, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(chosen.clone());
        if left == 0 {
            return;
        }
        for i in start..pool.len() {
            chosen.push(i);
            rec(pool, i + 1, left - 1, chosen, out);
            chosen.pop();
        }
    }
    let mut index_sets = Vec::new();
    rec(&pool, 0, n_max, &mut chosen, &mut index_sets);
    index_sets.sort_by_key(|s| s.len());
    for s in index_sets {
        out.push(BasicOpenSet { positives: s.iter().map(|i| pool[*i].clone()).collect() });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub constraints: BasicOpenSet,
    /// Present on success.
    pub certificate: Option<NonIsolationCertificate>,
    /// Search failure, verbatim.
    pub error: Option<String>,
    /// Verifier outcome, when verification was requested.
    pub verified: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub n_max: usize,
    pub len_max: usize,
    pub length_bound: usize,
    pub conj_bound: usize,
    pub budget: usize,
    pub total: usize,
    pub certified: usize,
    pub structured: usize,
    pub cone_search: usize,
    pub not_found: Vec<String>,
    pub verified: Option<usize>,
    pub entries: Vec<SweepEntry>,
}

impl SweepReport {
    /// Certified fraction as `"k/n"`.
    pub fn success_rate(&self) -> String {
        format!("{}/{}", self.certified, self.total)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepParams {
    pub n_max: usize,
    pub len_max: usize,
    pub length_bound: usize,
    pub conj_bound: usize,
    pub budget: usize,
    pub verify: bool,
}

impl SweepParams {
    pub fn new(n_max: usize, len_max: usize, length_bound: usize) -> SweepParams {
        SweepParams { n_max, len_max, length_bound, conj_bound: length_bound, budget: 64, verify: true }
    }
}

/// Runs the search on every enumerated basic open set, in parallel, with
/// results in enumeration order.
pub fn nonisolation_sweep(p: SweepParams) -> Result<SweepReport, Error> {
    let sets = enumerate_open_sets(p.n_max, p.len_max)?;
    let searcher = Searcher::new(p.length_bound, p.conj_bound);
    let verifier = Verifier::new();
    let entries: Vec<SweepEntry> = sets
        .into_par_iter()
        .map(|u| {
            let result = searcher.search(&u, p.budget);
            let verified = match (&result, p.verify) {
                (Ok(cert), true) => Some(verifier.verify(cert).valid),
                _ => None,
            };
            match result {
                Ok(cert) => SweepEntry { constraints: u, certificate: Some(cert), error: None, verified },
                Err(e) => SweepEntry { constraints: u, certificate: None, error: Some(e.to_string()), verified },
            }
        })
        .collect();
    let count = |m: Method| entries.iter().filter(|e| e.certificate.as_ref().is_some_and(|c| c.method == m)).count();
    Ok(SweepReport {
        n_max: p.n_max,
        len_max: p.len_max,
        length_bound: p.length_bound,
        conj_bound: p.conj_bound,
        budget: p.budget,
        total: entries.len(),
        certified: entries.iter().filter(|e| e.certificate.is_some()).count(),
        structured: count(Method::StructuredTransform),
        cone_search: count(Method::ConeSearch),
        not_found: entries.iter().filter_map(|e| e.error.clone()).collect(),
        verified: p.verify.then(|| entries.iter().filter(|e| e.verified == Some(true)).count()),
        entries,
    })
}

/// First-disagreement distance `2⁻ᵏ`, `k` the smallest ShortLex index at
/// which the two orders give different signs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderDistance {
    /// `None` when the orders agree on every word up to `bound`.
    pub exponent: Option<u64>,
    pub bound: usize,
    /// `"1/2^k"` written out as a fraction, or `"0"`.
    pub value: String,
}

impl OrderDistance {
    fn new(exponent: Option<u64>, bound: usize) -> OrderDistance {
        let value = match exponent {
            None => "0".to_string(),
            Some(k) => format!("1/{}", num_bigint::BigUint::from(2u8).pow(k as u32)),
        };
        OrderDistance { exponent, bound, value }
    }
}

impl PartialOrd for OrderDistance {
    fn partial_cmp(&self, other: &OrderDistance) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrderDistance {
    /// Larger exponent is a smaller distance; agreement is the smallest.
    fn cmp(&self, other: &OrderDistance) -> std::cmp::Ordering {
        match (self.exponent, other.exponent) {
            (None, None) => std::cmp::Ordering::Equal,
            (None, Some(_)) => std::cmp::Ordering::Less,
            (Some(_), None) => std::cmp::Ordering::Greater,
            (Some(a), Some(b)) => b.cmp(&a),
        }
    }
}

pub fn distance<A: SignOracle + ?Sized, B: SignOracle + ?Sized>(
    o1: &A,
    o2: &B,
    bound: usize,
) -> Result<OrderDistance, Error> {
    for (k, x) in ball(bound).into_iter().enumerate().skip(1) {
        if o1.sign(&x)? != o2.sign(&x)? {
            return Ok(OrderDistance::new(Some(k as u64), bound));
        }
    }
    Ok(OrderDistance::new(None, bound))
}
