//! Finite stages of the dynamical realization of a bi-ordered free group.
//!
//! A [`Stage`] embeds the first `N` words into the rationals preserving the
//! order; left multiplication by `g` then becomes a partial increasing map
//! `t(h) ↦ t(gh)`, which [`Stage::realize`] interpolates into a PL
//! homeomorphism. A [`ClassAtlas`] sends Archimedean classes to gaps of the
//! middle-thirds Cantor set, preserving `≪`.

use std::collections::HashMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::homeo::{fmt_q, q, q_string, RationalPLMap, Q};
use crate::magnus::{ArchClass, ClassOracle, Sign, SignOracle};
use crate::word::{ball, enumerate, FreeWord};

/// Order-preserving embedding of the first `N` ShortLex words into `Q`.
#[derive(Clone, Debug)]
pub struct Stage {
    pub order: String,
    words: Vec<FreeWord>,
    t: HashMap<FreeWord, Q>,
    /// Words sorted by the order, for neighbor lookups.
    sorted: Vec<FreeWord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedded {
    pub word: FreeWord,
    #[serde(with = "q_string")]
    pub value: Q,
}

impl Stage {
    /// Greedy insertion in ShortLex order: the identity goes to 0, each new
    /// word to the midpoint of its order-neighbors, or one past the extreme.
    pub fn build<O: SignOracle + ?Sized>(oracle: &O, n: usize) -> Result<Stage, Error> {
        let words = enumerate(n);
        let mut sorted: Vec<FreeWord> = Vec::with_capacity(n);
        let mut t: HashMap<FreeWord, Q> = HashMap::with_capacity(n);
        for x in &words {
            // First position whose word is greater than x.
            let (mut lo, mut hi) = (0, sorted.len());
            while lo < hi {
                let mid = (lo + hi) / 2;
                if oracle.compare(&sorted[mid], x)?.is_lt() {
                    lo = mid + 1;
                } else {
                    hi = mid;
                }
            }
            let value = match (lo.checked_sub(1).map(|i| &t[&sorted[i]]), sorted.get(lo).map(|w| &t[w])) {
                (None, None) => Q::zero(),
                (Some(a), None) => a + Q::one(),
                (None, Some(b)) => b - Q::one(),
                (Some(a), Some(b)) => (a + b) / Q::from_integer(2.into()),
            };
            t.insert(x.clone(), value);
            sorted.insert(lo, x.clone());
        }
        Ok(Stage { order: oracle.label(), words, t, sorted })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Stage elements in ShortLex order.
    pub fn words(&self) -> &[FreeWord] {
        &self.words
    }

    /// Stage elements in increasing order.
    pub fn sorted(&self) -> &[FreeWord] {
        &self.sorted
    }

    pub fn contains(&self, w: &FreeWord) -> bool {
        self.t.contains_key(w)
    }

    pub fn t(&self, w: &FreeWord) -> Option<&Q> {
        self.t.get(w)
    }

    pub fn embedding(&self) -> Vec<Embedded> {
        self.words.iter().map(|w| Embedded { word: w.clone(), value: self.t[w].clone() }).collect()
    }

    /// True when `t` is strictly increasing along the order.
    pub fn is_order_preserving(&self) -> bool {
        self.sorted.windows(2).all(|p| self.t[&p[0]] < self.t[&p[1]])
    }

    /// `[min t - 1, max t + 1]`; realizations are the identity outside it.
    pub fn bounding_interval(&self) -> (Q, Q) {
        let lo = self.sorted.first().map(|w| &self.t[w] - Q::one()).unwrap_or_else(|| -Q::one());
        let hi = self.sorted.last().map(|w| &self.t[w] + Q::one()).unwrap_or_else(Q::one);
        (lo, hi)
    }

    /// Affine map of the bounding interval onto `[0, 1]`.
    pub fn to_unit(&self, x: &Q) -> Q {
        let (lo, hi) = self.bounding_interval();
        (x - &lo) / (hi - lo)
    }

    /// `{(t(h), t(gh)) : h, gh in the stage}`, sorted by `t(h)`.
    pub fn control_points(&self, g: &FreeWord) -> Vec<(Q, Q)> {
        self.sorted
            .iter()
            .filter_map(|h| {
                let gh = g.multiply(h);
                self.t.get(&gh).map(|v| (self.t[h].clone(), v.clone()))
            })
            .collect()
    }

    /// PL interpolation of the control points, rescaled into `[0, 1]`.
    pub fn realize(&self, g: &FreeWord) -> Result<RationalPLMap, Error> {
        if g.is_identity() {
            return Ok(RationalPLMap::identity());
        }
        let cps = self.control_points(g);
        if cps.is_empty() {
            return Err(Error::EmptySupport { word: g.clone() });
        }
        let mut pts = vec![(Q::zero(), Q::zero())];
        pts.extend(cps.iter().map(|(x, y)| (self.to_unit(x), self.to_unit(y))));
        pts.push((Q::one(), Q::one()));
        RationalPLMap::new(pts)
    }

    /// `ρ(g₁g₂)(t(h)) = ρ(g₁)(ρ(g₂)(t(h)))` wherever `h, g₂h, g₁g₂h` are in the stage.
    pub fn check_homomorphism(&self, g1: &FreeWord, g2: &FreeWord) -> Result<HomomorphismReport, Error> {
        let points: Vec<&FreeWord> = self
            .words
            .iter()
            .filter(|h| {
                let g2h = g2.multiply(h);
                self.contains(&g2h) && self.contains(&g1.multiply(&g2h))
            })
            .collect();
        let mut report = HomomorphismReport {
            g1: g1.clone(),
            g2: g2.clone(),
            checked: points.len(),
            mismatches: 0,
            vacuous: points.is_empty(),
        };
        if points.is_empty() {
            return Ok(report);
        }
        let (f1, f2, f12) = (self.realize(g1)?, self.realize(g2)?, self.realize(&g1.multiply(g2))?);
        for h in points {
            let x = self.to_unit(&self.t[h]);
            if f12.eval(&x) != f1.eval(&f2.eval(&x)) {
                report.mismatches += 1;
            }
        }
        Ok(report)
    }

    /// For positive `g`: `t(gh) > t(h)` at every applicable `h`, and the
    /// realization is on or above the diagonal at its control points.
    pub fn check_positivity<O: SignOracle + ?Sized>(
        &self,
        oracle: &O,
        g: &FreeWord,
    ) -> Result<PositivityReport, Error> {
        if g.is_identity() || oracle.sign(g)? != Sign::Pos {
            return Err(Error::NotPositive { word: g.clone() });
        }
        let cps = self.control_points(g);
        let violations = cps.iter().filter(|(x, y)| y <= x).count();
        let map = self.realize(g)?;
        let below = map.breakpoints().iter().filter(|(x, y)| y < x).count();
        Ok(PositivityReport { word: g.clone(), checked: cps.len(), violations: violations + below })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomomorphismReport {
    pub g1: FreeWord,
    pub g2: FreeWord,
    pub checked: usize,
    pub mismatches: usize,
    /// No stage point had all three of `h, g₂h, g₁g₂h` inside the stage.
    pub vacuous: bool,
}

impl HomomorphismReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositivityReport {
    pub word: FreeWord,
    pub checked: usize,
    pub violations: usize,
}

impl PositivityReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Middle third removed from a construction interval of the Cantor set.
/// The address lists the left (`0`) or right (`2`) thirds taken on the way.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GapInterval {
    pub address: String,
    #[serde(with = "q_string")]
    pub left: Q,
    #[serde(with = "q_string")]
    pub right: Q,
}

impl GapInterval {
    /// True when `self` lies entirely to the left of `other`.
    pub fn precedes(&self, other: &GapInterval) -> bool {
        self.right <= other.left
    }
}

impl fmt::Display for GapInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", fmt_q(&self.left), fmt_q(&self.right))
    }
}

impl fmt::Debug for GapInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{self}", self.address)
    }
}

pub fn cantor_gap(address: &str) -> Result<GapInterval, Error> {
    let (mut lo, mut len) = (Q::zero(), Q::one());
    let third = q(1, 3);
    for c in address.chars() {
        len = &len * &third;
        match c {
            '0' => {}
            '2' => lo += &len * BigRational::from_integer(2.into()),
            other => return Err(Error::Parse(format!("gap address digit {other:?}, expected 0 or 2"))),
        }
    }
    let step = &len * &third;
    Ok(GapInterval { address: address.to_string(), left: &lo + &step, right: lo + step * BigRational::from_integer(2.into()) })
}

/// Shortest-address gap satisfying `keep`, addresses in ShortLex order.
fn first_gap(keep: impl Fn(&GapInterval) -> bool) -> GapInterval {
    let mut layer = vec![String::new()];
    loop {
        for a in &layer {
            let g = cantor_gap(a).expect("address over 0/2");
            if keep(&g) {
                return g;
            }
        }
        layer = layer.iter().flat_map(|a| [format!("{a}0"), format!("{a}2")]).collect();
    }
}

/// A gap strictly between `i` and `j`; the shortest address wins.
pub fn gap_between(i: &GapInterval, j: &GapInterval) -> Result<GapInterval, Error> {
    if !i.precedes(j) {
        return Err(Error::PreconditionFailed(format!("{i} does not precede {j}")));
    }
    Ok(first_gap(|g| i.precedes(g) && g.precedes(j)))
}

pub fn gap_left_of(j: &GapInterval) -> GapInterval {
    first_gap(|g| g.precedes(j))
}

pub fn gap_right_of(i: &GapInterval) -> GapInterval {
    first_gap(|g| i.precedes(g))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtlasEntry {
    pub class: ArchClass,
    /// ShortLex-first word of the class.
    pub representative: FreeWord,
    pub gap: GapInterval,
}

/// Classes of the words of length at most `L`, in increasing `≪` order, with
/// their gaps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassAtlas {
    pub length_bound: usize,
    pub entries: Vec<AtlasEntry>,
}

impl ClassAtlas {
    /// Assigns gaps to the sorted class list median-first: the middle class
    /// takes the root gap, then each half is filled the same way between its
    /// already placed neighbors.
    pub fn build<O: ClassOracle + ?Sized>(oracle: &O, length_bound: usize) -> Result<ClassAtlas, Error> {
        let mut reps: Vec<(ArchClass, FreeWord)> = Vec::new();
        for x in ball(length_bound).into_iter().skip(1) {
            let c = oracle.arch_class(&x)?;
            if !reps.iter().any(|(k, _)| *k == c) {
                reps.push((c, x));
            }
        }
        reps.sort_by_key(|r| r.0);
        let mut gaps: Vec<Option<GapInterval>> = vec![None; reps.len()];
        fill(&mut gaps, 0, reps.len(), None, None)?;
        let entries = reps
            .into_iter()
            .zip(gaps)
            .map(|((class, representative), gap)| AtlasEntry { class, representative, gap: gap.unwrap() })
            .collect();
        Ok(ClassAtlas { length_bound, entries })
    }

    pub fn tau(&self, class: &ArchClass) -> Option<&GapInterval> {
        self.entries.iter().find(|e| e.class == *class).map(|e| &e.gap)
    }

    /// `t(g)`: left endpoint of the gap of `g`'s class.
    pub fn t<O: ClassOracle + ?Sized>(&self, oracle: &O, g: &FreeWord) -> Result<Option<Q>, Error> {
        let c = oracle.arch_class(g)?;
        Ok(self.tau(&c).map(|gap| gap.left.clone()))
    }

    /// Gaps strictly increase along the class order and never overlap.
    pub fn is_order_isomorphism(&self) -> bool {
        self.entries.windows(2).all(|p| p[0].class < p[1].class && p[0].gap.precedes(&p[1].gap))
    }

    /// Image of each class under conjugation by `g`, as indices into the
    /// entries (`None` when the image class is not in the atlas).
    pub fn conjugation_action<O: ClassOracle + ?Sized>(
        &self,
        oracle: &O,
        g: &FreeWord,
    ) -> Result<Vec<Option<usize>>, Error> {
        self.entries
            .iter()
            .map(|e| {
                let c = oracle.arch_class(&e.representative.conjugate(g))?;
                Ok(self.entries.iter().position(|f| f.class == c))
            })
            .collect()
    }
}

fn fill(
    gaps: &mut [Option<GapInterval>],
    start: usize,
    end: usize,
    left: Option<&GapInterval>,
    right: Option<&GapInterval>,
) -> Result<(), Error> {
    if start >= end {
        return Ok(());
    }
    let mid = start + (end - start - 1) / 2;
    let g = match (left, right) {
        (None, None) => cantor_gap("")?,
        (Some(l), None) => gap_right_of(l),
        (None, Some(r)) => gap_left_of(r),
        (Some(l), Some(r)) => gap_between(l, r)?,
    };
    gaps[mid] = Some(g.clone());
    fill(gaps, start, mid, left, Some(&g))?;
    fill(gaps, mid + 1, end, Some(&g), right)
}
