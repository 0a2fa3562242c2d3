//! Ordered restricted wreath product `Z wr_Ω H` that fills a gap of `H`.
//!
//! Given a gap `(h′, h″)` of an ordered group `H` (`h′ ≪ h″` with no class in
//! between), let `M = {h : h h′ h⁻¹ ~ h′}` and let `Ω` be the left cosets of
//! `M`. Elements of `H₁` are written `h₀ · ∏ (z^{kᵢ})^{hᵢM}` where
//! `(z^k)^{hM}` stands for `h z^k h⁻¹`. The new generator `z = z^M` lands
//! strictly between the classes of `h′` and `h″`.
//!
//! Conjugation is `x^g = g x g⁻¹` throughout, both in the `≪`-rules and in
//! the product. With that convention the product moves the left factor's
//! cosets by `(h₀⁽²⁾)⁻¹` and the inverse moves cosets by `h₀`.

use std::collections::BTreeMap;
use std::fmt::Debug;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::group::{F2Group, OrderedGroup};
use crate::magnus::{ArchRel, Magnus, Sign};
use crate::word::{FreeWord, Letter};

/// Base group of the construction, with a designated gap.
pub trait WreathBase: OrderedGroup {
    /// Canonical label of a left coset of `M`.
    type Coset: Clone + Ord + Debug + Send + Sync;

    fn name(&self) -> &'static str;

    /// `(h′, h″)` with `h′ ≪ h″` and no class in between.
    fn gap_pair(&self) -> (Self::Elem, Self::Elem);

    fn coset_of(&self, h: &Self::Elem) -> Self::Coset;

    fn coset_rep(&self, c: &Self::Coset) -> Self::Elem;

    /// A random element from the generator ball of radius 3.
    fn sample(&self, rng: &mut ChaCha8Rng) -> Self::Elem;

    /// Membership in `M`, straight from its definition.
    fn in_m(&self, h: &Self::Elem) -> Result<bool, Error> {
        let (lo, _) = self.gap_pair();
        Ok(self.arch_cmp(&self.conjugate(&lo, h), &lo)? == ArchRel::Equivalent)
    }

    /// `h₁M = h₂M`, from the definition: `h₂⁻¹h₁ ∈ M`.
    fn coset_eq(&self, h1: &Self::Elem, h2: &Self::Elem) -> Result<bool, Error> {
        self.in_m(&self.multiply(&self.invert(h2), h1))
    }
}

/// Radius of the generator ball the instances sample from.
pub const SAMPLE_RADIUS: usize = 3;

/// `h₀ · ∏ (z^{k})^{c}` with nonzero exponents keyed by coset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WreathElement<E, C: Ord> {
    pub head: E,
    pub tail: BTreeMap<C, i64>,
}

/// Either a base element or a coset symbol `z^{hM}`, for `≪` comparisons.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Symbol<E, C> {
    Base(E),
    Z(C),
}

#[derive(Clone, Debug)]
pub struct Wreath<B> {
    pub base: B,
}

impl<B: WreathBase> Wreath<B> {
    pub fn new(base: B) -> Wreath<B> {
        Wreath { base }
    }

    /// The new generator `z = z^M`.
    pub fn z(&self) -> WreathElement<B::Elem, B::Coset> {
        let m = self.base.coset_of(&self.base.identity());
        WreathElement { head: self.base.identity(), tail: BTreeMap::from([(m, 1)]) }
    }

    pub fn embed(&self, h: B::Elem) -> WreathElement<B::Elem, B::Coset> {
        WreathElement { head: h, tail: BTreeMap::new() }
    }

    /// `h₀ · (z^k)^{hM}` for each listed `(h, k)`.
    pub fn element(&self, head: B::Elem, tail: &[(B::Elem, i64)]) -> WreathElement<B::Elem, B::Coset> {
        let mut t = BTreeMap::new();
        for (h, k) in tail {
            add_exponent(&mut t, self.base.coset_of(h), *k);
        }
        WreathElement { head, tail: t }
    }

    fn shift_cosets(
        &self,
        tail: &BTreeMap<B::Coset, i64>,
        g: &B::Elem,
        sign: i64,
    ) -> BTreeMap<B::Coset, i64> {
        let mut out = BTreeMap::new();
        for (c, k) in tail {
            let moved = self.base.coset_of(&self.base.multiply(g, &self.base.coset_rep(c)));
            add_exponent(&mut out, moved, sign * k);
        }
        out
    }

    /// Compares base elements and coset symbols by magnitude.
    pub fn cmp_ll(
        &self,
        u: &Symbol<B::Elem, B::Coset>,
        v: &Symbol<B::Elem, B::Coset>,
    ) -> Result<ArchRel, Error> {
        let (lo, hi) = self.base.gap_pair();
        match (u, v) {
            (Symbol::Base(x), Symbol::Base(y)) => self.base.arch_cmp(x, y),
            (Symbol::Z(c1), Symbol::Z(c2)) => {
                if c1 == c2 {
                    return Ok(ArchRel::Equivalent);
                }
                let l1 = self.base.conjugate(&lo, &self.base.coset_rep(c1));
                let l2 = self.base.conjugate(&lo, &self.base.coset_rep(c2));
                let rel = self.base.arch_cmp(&l1, &l2)?;
                if rel == ArchRel::Equivalent {
                    return Err(Error::PreconditionFailed(format!(
                        "cosets {c1:?} and {c2:?} differ but fix the same class"
                    )));
                }
                Ok(rel)
            }
            (Symbol::Base(h), Symbol::Z(c)) => {
                if self.base.is_identity(h) {
                    return Ok(ArchRel::MuchLess);
                }
                let rep = self.base.coset_rep(c);
                if self.base.arch_cmp(h, &self.base.conjugate(&hi, &rep))? == ArchRel::MuchLess {
                    Ok(ArchRel::MuchLess)
                } else if self.base.arch_cmp(h, &self.base.conjugate(&lo, &rep))? == ArchRel::MuchGreater {
                    Ok(ArchRel::MuchGreater)
                } else {
                    Err(Error::PreconditionFailed(format!("{h:?} sits inside the gap at {c:?}")))
                }
            }
            (Symbol::Z(_), Symbol::Base(_)) => Ok(self.cmp_ll(v, u)?.reverse()),
        }
    }

    /// The `≪`-largest coset symbol of the tail, with its exponent.
    pub fn top_coset(&self, x: &WreathElement<B::Elem, B::Coset>) -> Result<Option<(B::Coset, i64)>, Error> {
        let mut best: Option<(B::Coset, i64)> = None;
        for (c, k) in &x.tail {
            best = match best {
                None => Some((c.clone(), *k)),
                Some((b, bk)) => {
                    if self.cmp_ll(&Symbol::Z(c.clone()), &Symbol::Z(b.clone()))? == ArchRel::MuchGreater {
                        Some((c.clone(), *k))
                    } else {
                        Some((b, bk))
                    }
                }
            };
        }
        Ok(best)
    }

    /// Magnitude class of a nontrivial element as a symbol.
    fn class_symbol(&self, x: &WreathElement<B::Elem, B::Coset>) -> Result<Symbol<B::Elem, B::Coset>, Error> {
        match self.top_coset(x)? {
            None => Ok(Symbol::Base(x.head.clone())),
            Some((c, _)) => {
                let z = Symbol::Z(c);
                let h = Symbol::Base(x.head.clone());
                if self.cmp_ll(&h, &z)? == ArchRel::MuchGreater {
                    Ok(h)
                } else {
                    Ok(z)
                }
            }
        }
    }

    /// Random element: sampled head, up to three sampled cosets with
    /// exponents in `[-3, 3]`.
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> WreathElement<B::Elem, B::Coset> {
        let head = self.base.sample(rng);
        let mut tail = BTreeMap::new();
        for _ in 0..rng.gen_range(0..=3) {
            let c = self.base.coset_of(&self.base.sample(rng));
            let k = rng.gen_range(-3..=3);
            add_exponent(&mut tail, c, k);
        }
        WreathElement { head, tail }
    }
}

fn add_exponent<C: Ord>(tail: &mut BTreeMap<C, i64>, c: C, k: i64) {
    let e = tail.entry(c).or_insert(0);
    *e += k;
    if *e == 0 {
        tail.retain(|_, v| *v != 0);
    }
}

impl<B: WreathBase> OrderedGroup for Wreath<B> {
    type Elem = WreathElement<B::Elem, B::Coset>;

    fn identity(&self) -> Self::Elem {
        self.embed(self.base.identity())
    }

    fn multiply(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        let head = self.base.multiply(&x.head, &y.head);
        let mut tail = self.shift_cosets(&x.tail, &self.base.invert(&y.head), 1);
        for (c, k) in &y.tail {
            add_exponent(&mut tail, c.clone(), *k);
        }
        WreathElement { head, tail }
    }

    fn invert(&self, x: &Self::Elem) -> Self::Elem {
        WreathElement { head: self.base.invert(&x.head), tail: self.shift_cosets(&x.tail, &x.head, -1) }
    }

    fn is_identity(&self, x: &Self::Elem) -> bool {
        x.tail.is_empty() && self.base.is_identity(&x.head)
    }

    fn sign(&self, x: &Self::Elem) -> Result<Sign, Error> {
        if self.is_identity(x) {
            return Err(Error::IdentityInput);
        }
        match self.top_coset(x)? {
            None => self.base.sign(&x.head),
            Some((c, k)) => {
                let rel = self.cmp_ll(&Symbol::Base(x.head.clone()), &Symbol::Z(c))?;
                if rel == ArchRel::MuchGreater {
                    self.base.sign(&x.head)
                } else if k > 0 {
                    Ok(Sign::Pos)
                } else {
                    Ok(Sign::Neg)
                }
            }
        }
    }

    fn arch_cmp(&self, x: &Self::Elem, y: &Self::Elem) -> Result<ArchRel, Error> {
        if self.is_identity(x) || self.is_identity(y) {
            return Err(Error::IdentityInput);
        }
        self.cmp_ll(&self.class_symbol(x)?, &self.class_symbol(y)?)
    }
}

impl WreathBase for F2Group<Magnus> {
    type Coset = ();

    fn name(&self) -> &'static str {
        "f2-magnus"
    }

    fn gap_pair(&self) -> (FreeWord, FreeWord) {
        (FreeWord::letter(Letter::B), FreeWord::letter(Letter::A))
    }

    /// Conjugation fixes every Magnus class, so `M` is the whole group.
    fn coset_of(&self, _: &FreeWord) {}

    fn coset_rep(&self, _: &()) -> FreeWord {
        FreeWord::identity()
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> FreeWord {
        let len = rng.gen_range(0..=SAMPLE_RADIUS);
        FreeWord::reduce((0..len).map(|_| Letter::ALL[rng.gen_range(0..4)]))
    }
}

/// Element `(f, m)` of `Z wr Z`: finitely supported lamp values and a shift.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LampElem {
    pub lamps: BTreeMap<i64, i64>,
    pub shift: i64,
}

impl LampElem {
    /// `z_i`: one unit at position `i`.
    pub fn lamp(i: i64) -> LampElem {
        LampElem { lamps: BTreeMap::from([(i, 1)]), shift: 0 }
    }

    pub fn shift(m: i64) -> LampElem {
        LampElem { lamps: BTreeMap::new(), shift: m }
    }
}

/// Magnitude class in the lamplighter order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum LampClass {
    Shift,
    /// Lowest lit position; a higher position is a smaller class.
    Lamp(i64),
}

/// `Z wr Z` ordered by the shift first, then by the lowest lit lamp.
/// Conjugating by the shift moves lamp classes, so `M` is a proper subgroup.
#[derive(Clone, Copy, Debug, Default)]
pub struct Lamplighter;

impl Lamplighter {
    fn class(x: &LampElem) -> Option<LampClass> {
        if x.shift != 0 {
            Some(LampClass::Shift)
        } else {
            x.lamps.keys().next().map(|i| LampClass::Lamp(*i))
        }
    }
}

impl OrderedGroup for Lamplighter {
    type Elem = LampElem;

    fn identity(&self) -> LampElem {
        LampElem::default()
    }

    fn multiply(&self, x: &LampElem, y: &LampElem) -> LampElem {
        let mut lamps = x.lamps.clone();
        for (i, v) in &y.lamps {
            add_exponent(&mut lamps, i + x.shift, *v);
        }
        LampElem { lamps, shift: x.shift + y.shift }
    }

    fn invert(&self, x: &LampElem) -> LampElem {
        LampElem { lamps: x.lamps.iter().map(|(i, v)| (i - x.shift, -v)).collect(), shift: -x.shift }
    }

    fn sign(&self, x: &LampElem) -> Result<Sign, Error> {
        let lead = if x.shift != 0 { Some(x.shift) } else { x.lamps.values().next().copied() };
        match lead {
            None => Err(Error::IdentityInput),
            Some(v) if v > 0 => Ok(Sign::Pos),
            Some(_) => Ok(Sign::Neg),
        }
    }

    fn arch_cmp(&self, x: &LampElem, y: &LampElem) -> Result<ArchRel, Error> {
        let (cx, cy) = (Self::class(x).ok_or(Error::IdentityInput)?, Self::class(y).ok_or(Error::IdentityInput)?);
        Ok(match (cx, cy) {
            (LampClass::Shift, LampClass::Shift) => ArchRel::Equivalent,
            (LampClass::Shift, _) => ArchRel::MuchGreater,
            (_, LampClass::Shift) => ArchRel::MuchLess,
            (LampClass::Lamp(i), LampClass::Lamp(j)) => ArchRel::from_ordering(j.cmp(&i)),
        })
    }
}

impl WreathBase for Lamplighter {
    /// The shift of any representative.
    type Coset = i64;

    fn name(&self) -> &'static str {
        "lamplighter"
    }

    fn gap_pair(&self) -> (LampElem, LampElem) {
        (LampElem::lamp(1), LampElem::lamp(0))
    }

    fn coset_of(&self, h: &LampElem) -> i64 {
        h.shift
    }

    fn coset_rep(&self, c: &i64) -> LampElem {
        LampElem::shift(*c)
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> LampElem {
        let gens = [LampElem::shift(1), LampElem::shift(-1), LampElem::lamp(0), self.invert(&LampElem::lamp(0))];
        let len = rng.gen_range(0..=SAMPLE_RADIUS);
        (0..len).fold(self.identity(), |acc, _| self.multiply(&acc, &gens[rng.gen_range(0..4)]))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub checked: usize,
    pub violations: usize,
}

impl Tally {
    fn record(&mut self, ok: bool) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub samples: usize,
    pub seed: u64,
    pub associativity: Tally,
    pub identity: Tally,
    pub inverse: Tally,
    pub product_closure: Tally,
    pub conjugation: Tally,
    pub trichotomy: Tally,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        [self.associativity, self.identity, self.inverse, self.product_closure, self.conjugation, self.trichotomy]
            .iter()
            .all(Tally::passed)
    }
}

/// Group axioms and cone axioms of `P₁` on seeded random samples.
pub fn axiom_suite<B: WreathBase>(g: &Wreath<B>, samples: usize, seed: u64) -> Result<AxiomReport, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = AxiomReport {
        samples,
        seed,
        associativity: Tally::default(),
        identity: Tally::default(),
        inverse: Tally::default(),
        product_closure: Tally::default(),
        conjugation: Tally::default(),
        trichotomy: Tally::default(),
    };
    let e = g.identity();
    for _ in 0..samples {
        let (x, y, u) = (g.sample(&mut rng), g.sample(&mut rng), g.sample(&mut rng));
        r.associativity
            .record(g.multiply(&g.multiply(&x, &y), &u) == g.multiply(&x, &g.multiply(&y, &u)));
        r.identity.record(g.multiply(&e, &x) == x && g.multiply(&x, &e) == x);
        let xi = g.invert(&x);
        r.inverse.record(g.is_identity(&g.multiply(&x, &xi)) && g.invert(&xi) == x);
        if g.is_identity(&x) || g.is_identity(&y) {
            continue;
        }
        let (px, py) = (g.abs(&x)?, g.abs(&y)?);
        r.product_closure.record(g.sign(&g.multiply(&px, &py))? == Sign::Pos);
        r.conjugation.record(g.sign(&g.conjugate(&px, &u))? == Sign::Pos);
        r.trichotomy.record(g.sign(&x)? != g.sign(&xi)?);
    }
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapReport {
    pub instance: String,
    /// Powers checked on each side.
    pub n_max: u32,
    /// `h′ ≪ z`: `|z| · |h′|⁻ⁿ` positive for every checked `n`.
    pub lower: bool,
    /// `z ≪ h″`: `|h″| · |z|⁻ⁿ` positive for every checked `n`.
    pub upper: bool,
    /// No sampled base element lies strictly between `h′` and `h″`.
    pub base_gap_sampled: bool,
    pub sample_radius: usize,
}

impl GapReport {
    pub fn passed(&self) -> bool {
        self.lower && self.upper && self.base_gap_sampled
    }
}

/// `x ≪ y` by sign evaluations: `|y| · |x|⁻ⁿ > 1` for `n = 1..=n_max`.
pub fn much_less_by_signs<G: OrderedGroup>(g: &G, x: &G::Elem, y: &G::Elem, n_max: u32) -> Result<bool, Error> {
    if g.is_identity(x) || g.is_identity(y) {
        return Ok(false);
    }
    let (ax, ay) = (g.abs(x)?, g.abs(y)?);
    for n in 1..=n_max {
        let q = g.multiply(&ay, &g.pow(&ax, -(n as i64)));
        if g.is_identity(&q) || g.sign(&q)? != Sign::Pos {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Certifies `h′ ≪ z ≪ h″` in `H₁`.
pub fn gap_elimination_check<B: WreathBase>(g: &Wreath<B>, n_max: u32, seed: u64) -> Result<GapReport, Error> {
    let (lo, hi) = g.base.gap_pair();
    let z = g.z();
    let lower = much_less_by_signs(g, &g.embed(lo.clone()), &z, n_max)?;
    let upper = much_less_by_signs(g, &z, &g.embed(hi.clone()), n_max)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut base_gap_sampled = true;
    for _ in 0..1000 {
        let x = g.base.sample(&mut rng);
        if g.base.is_identity(&x) {
            continue;
        }
        if g.base.arch_cmp(&lo, &x)? == ArchRel::MuchLess && g.base.arch_cmp(&x, &hi)? == ArchRel::MuchLess {
            base_gap_sampled = false;
        }
    }
    Ok(GapReport {
        instance: g.base.name().to_string(),
        n_max,
        lower,
        upper,
        base_gap_sampled,
        sample_radius: SAMPLE_RADIUS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::w;

    fn f2() -> Wreath<F2Group<Magnus>> {
        Wreath::new(F2Group::new(Magnus::new()))
    }

    fn lamp() -> Wreath<Lamplighter> {
        Wreath::new(Lamplighter)
    }

    #[test]
    fn multiplication_examples() {
        let g = f2();
        let z = g.z();
        let z2 = g.multiply(&z, &z);
        assert_eq!(z2.tail, BTreeMap::from([((), 2)]));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let x = g.sample(&mut rng);
            assert!(g.is_identity(&g.multiply(&x, &g.invert(&x))));
            assert_eq!(g.multiply(&g.identity(), &x), x);
        }
        assert_eq!(g.invert(&z).tail, BTreeMap::from([((), -1)]));
        assert!(g.is_identity(&g.invert(&g.identity())));
    }

    #[test]
    fn coset_symbols_are_conjugates_of_z() {
        // (z^k)^{hM} is h z^k h⁻¹.
        let g = lamp();
        let t = LampElem::shift(2);
        let conj = g.conjugate(&g.z(), &g.embed(t.clone()));
        assert_eq!(conj, g.element(Lamplighter.identity(), &[(t, 1)]));
    }

    #[test]
    fn cmp_ll_examples() {
        let g = f2();
        assert_eq!(g.cmp_ll(&Symbol::Base(w("b")), &Symbol::Z(())).unwrap(), ArchRel::MuchLess);
        assert_eq!(g.cmp_ll(&Symbol::Base(w("a")), &Symbol::Z(())).unwrap(), ArchRel::MuchGreater);
        assert_eq!(g.cmp_ll(&Symbol::Z(()), &Symbol::Z(())).unwrap(), ArchRel::Equivalent);
        // In the lamplighter, conjugating by a positive shift moves z down.
        let l = lamp();
        assert_eq!(l.cmp_ll(&Symbol::Z(1), &Symbol::Z(0)).unwrap(), ArchRel::MuchLess);
        assert_eq!(l.cmp_ll(&Symbol::Base(LampElem::lamp(2)), &Symbol::Z(1)).unwrap(), ArchRel::MuchLess);
        assert_eq!(l.cmp_ll(&Symbol::Base(LampElem::lamp(1)), &Symbol::Z(1)).unwrap(), ArchRel::MuchGreater);
    }

    #[test]
    fn sign_examples() {
        let g = f2();
        assert_eq!(g.sign(&g.z()).unwrap(), Sign::Pos);
        assert_eq!(g.sign(&g.element(w("B"), &[(w(""), 1)])).unwrap(), Sign::Pos);
        assert_eq!(g.sign(&g.element(w("A"), &[(w(""), 1)])).unwrap(), Sign::Neg);
        assert_eq!(g.sign(&g.identity()), Err(Error::IdentityInput));
    }

    #[test]
    fn coset_labels_match_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let b = Lamplighter;
        for _ in 0..300 {
            let (x, y) = (b.sample(&mut rng), b.sample(&mut rng));
            assert_eq!(b.coset_eq(&x, &y).unwrap(), b.coset_of(&x) == b.coset_of(&y));
        }
        let f = F2Group::new(Magnus::new());
        for _ in 0..100 {
            let (x, y) = (f.sample(&mut rng), f.sample(&mut rng));
            assert!(f.coset_eq(&x, &y).unwrap());
        }
    }

    #[test]
    fn lamplighter_is_bi_ordered() {
        let b = Lamplighter;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let (x, y, g) = (b.sample(&mut rng), b.sample(&mut rng), b.sample(&mut rng));
            if b.is_identity(&x) || b.is_identity(&y) {
                continue;
            }
            let (px, py) = (b.abs(&x).unwrap(), b.abs(&y).unwrap());
            assert_eq!(b.sign(&b.multiply(&px, &py)).unwrap(), Sign::Pos);
            assert_eq!(b.sign(&b.conjugate(&px, &g)).unwrap(), Sign::Pos);
            assert_eq!(b.multiply(&b.multiply(&x, &y), &g), b.multiply(&x, &b.multiply(&y, &g)));
        }
    }

    #[test]
    fn axiom_suites_pass() {
        let r = axiom_suite(&f2(), 500, 11).unwrap();
        assert!(r.passed(), "{r:?}");
        let r = axiom_suite(&lamp(), 500, 11).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.conjugation.checked > 300);
    }

    #[test]
    fn gap_is_filled() {
        let r = gap_elimination_check(&f2(), 8, 0).unwrap();
        assert!(r.passed(), "{r:?}");
        let r = gap_elimination_check(&lamp(), 8, 0).unwrap();
        assert!(r.passed(), "{r:?}");
        let g = f2();
        assert!(!much_less_by_signs(&g, &g.z(), &g.z(), 8).unwrap());
    }
}
