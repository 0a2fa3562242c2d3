//! Order transformers: new bi-orders built from old ones.
//!
//! Every order in the Magnus family reduces to the same normal form: substitute
//! the word through an automorphism, read the leading monomial of its
//! expansion in some monomial order, then multiply the coefficient's sign by
//! a parity determined by that monomial (one flip per convex threshold it
//! reaches, one more if the order is reversed). [`OrderDescriptor`] is the
//! serialized recipe; [`FamilyOrder`] is the evaluated oracle.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::group::OrderedGroup;
use crate::magnus::{
    ArchClass, ArchRel, ClassOracle, Magnus, Monomial, MonomialOrder, Sign, SignOracle, TruncationPolicy,
};
use crate::word::{w, FreeWord};

/// Whitelisted Nielsen automorphisms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NielsenGenerator {
    /// `a ↔ b`
    Swap,
    /// `a ↦ a⁻¹`, `b ↦ b`
    InvA,
    /// `a ↦ ab`, `b ↦ b`
    RightMult,
}

impl NielsenGenerator {
    pub const ALL: [NielsenGenerator; 3] = [NielsenGenerator::Swap, NielsenGenerator::InvA, NielsenGenerator::RightMult];

    pub fn images(self) -> (FreeWord, FreeWord) {
        match self {
            NielsenGenerator::Swap => (w("b"), w("a")),
            NielsenGenerator::InvA => (w("A"), w("b")),
            NielsenGenerator::RightMult => (w("ab"), w("b")),
        }
    }

    /// Images of the inverse automorphism.
    pub fn inverse_images(self) -> (FreeWord, FreeWord) {
        match self {
            NielsenGenerator::RightMult => (w("aB"), w("b")),
            other => other.images(),
        }
    }

    pub fn apply(self, x: &FreeWord) -> FreeWord {
        let (ia, ib) = self.images();
        x.substitute(&ia, &ib)
    }
}

/// A composition `maps[0] ∘ maps[1] ∘ …` of whitelisted automorphisms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NielsenMap {
    pub maps: Vec<NielsenGenerator>,
}

impl NielsenMap {
    pub fn identity() -> NielsenMap {
        NielsenMap::default()
    }

    pub fn new(maps: Vec<NielsenGenerator>) -> NielsenMap {
        NielsenMap { maps }
    }

    pub fn apply(&self, x: &FreeWord) -> FreeWord {
        self.maps.iter().rev().fold(x.clone(), |acc, m| m.apply(&acc))
    }

    pub fn images(&self) -> (FreeWord, FreeWord) {
        (self.apply(&w("a")), self.apply(&w("b")))
    }

    /// Applies the inverse automorphism.
    pub fn apply_inverse(&self, x: &FreeWord) -> FreeWord {
        self.maps.iter().fold(x.clone(), |acc, m| {
            let (ia, ib) = m.inverse_images();
            acc.substitute(&ia, &ib)
        })
    }

    /// All compositions of at most `len` whitelist generators, shortest first.
    pub fn all_up_to(len: usize) -> Vec<NielsenMap> {
        let mut out = vec![NielsenMap::identity()];
        let mut layer = vec![Vec::new()];
        for _ in 0..len {
            let mut next = Vec::new();
            for prefix in &layer {
                for g in NielsenGenerator::ALL {
                    let mut maps: Vec<NielsenGenerator> = prefix.clone();
                    maps.push(g);
                    next.push(maps);
                }
            }
            out.extend(next.iter().cloned().map(NielsenMap::new));
            layer = next;
        }
        out
    }
}

/// A cut in the class order: `L(m₀)` is the set of elements whose leading
/// monomial is `m₀` or later, together with the identity. It is a convex
/// normal subgroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConvexThreshold(pub Monomial);

impl ConvexThreshold {
    pub fn parse(s: &str) -> Result<ConvexThreshold, Error> {
        Ok(ConvexThreshold(s.parse()?))
    }

    pub fn contains<O: ClassOracle>(&self, oracle: &O, x: &FreeWord) -> Result<bool, Error> {
        if x.is_identity() {
            return Ok(true);
        }
        let class = oracle.arch_class(x)?;
        Ok(class.order.cmp(class.leading, self.0).is_ge())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum BaseOrder {
    #[default]
    #[serde(rename = "magnus")]
    Magnus,
    #[serde(rename = "magnus-swapped")]
    MagnusSwapped,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum Transform {
    Reverse,
    ConvexFlip { threshold: Monomial },
    Pullback { maps: Vec<NielsenGenerator> },
    MonomialSwap,
}

fn default_degree() -> u32 {
    TruncationPolicy::default().initial_degree
}

fn default_max_degree() -> u32 {
    TruncationPolicy::default().max_degree
}

/// Serializable recipe for a family order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrderDescriptor {
    #[serde(default)]
    pub base: BaseOrder,
    #[serde(default = "default_degree")]
    pub degree: u32,
    #[serde(default = "default_max_degree")]
    pub max_degree: u32,
    #[serde(default)]
    pub transforms: Vec<Transform>,
}

impl Default for OrderDescriptor {
    fn default() -> Self {
        OrderDescriptor::magnus()
    }
}

impl OrderDescriptor {
    pub fn magnus() -> OrderDescriptor {
        OrderDescriptor {
            base: BaseOrder::Magnus,
            degree: default_degree(),
            max_degree: default_max_degree(),
            transforms: Vec::new(),
        }
    }

    pub fn magnus_swapped() -> OrderDescriptor {
        OrderDescriptor { base: BaseOrder::MagnusSwapped, ..OrderDescriptor::magnus() }
    }

    /// Parses `magnus`, `magnus-swapped` or a JSON descriptor string.
    pub fn parse_spec(s: &str) -> Result<OrderDescriptor, Error> {
        match s.trim() {
            "magnus" => Ok(OrderDescriptor::magnus()),
            "magnus-swapped" => Ok(OrderDescriptor::magnus_swapped()),
            json => serde_json::from_str(json).map_err(|e| Error::InvalidDescriptor(e.to_string())),
        }
    }

    pub fn build(&self) -> Result<FamilyOrder, Error> {
        FamilyOrder::from_descriptor(self)
    }
}

impl fmt::Display for OrderDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut label = match self.base {
            BaseOrder::Magnus => "magnus".to_string(),
            BaseOrder::MagnusSwapped => "magnus-swapped".to_string(),
        };
        for t in &self.transforms {
            label = match t {
                Transform::Reverse => format!("reverse({label})"),
                Transform::ConvexFlip { threshold } => format!("flip[{threshold}]({label})"),
                Transform::Pullback { maps } => {
                    let names: Vec<String> = maps
                        .iter()
                        .map(|m| serde_json::to_value(m).unwrap().as_str().unwrap().to_string())
                        .collect();
                    format!("pullback[{}]({label})", names.join("."))
                }
                Transform::MonomialSwap => format!("swap({label})"),
            };
        }
        f.write_str(&label)
    }
}

/// An evaluated member of the Magnus family.
#[derive(Clone, Debug)]
pub struct FamilyOrder {
    descriptor: OrderDescriptor,
    magnus: Magnus,
    images: Option<(FreeWord, FreeWord)>,
    flips: Vec<Monomial>,
    reversed: bool,
}

impl PartialEq for FamilyOrder {
    fn eq(&self, other: &FamilyOrder) -> bool {
        self.descriptor == other.descriptor
    }
}

impl FamilyOrder {
    pub fn magnus() -> FamilyOrder {
        FamilyOrder::from_descriptor(&OrderDescriptor::magnus()).expect("default descriptor is valid")
    }

    pub fn magnus_swapped() -> FamilyOrder {
        FamilyOrder::from_descriptor(&OrderDescriptor::magnus_swapped()).expect("default descriptor is valid")
    }

    pub fn from_descriptor(d: &OrderDescriptor) -> Result<FamilyOrder, Error> {
        let policy = TruncationPolicy { initial_degree: d.degree, max_degree: d.max_degree };
        policy.validate()?;
        let order = match d.base {
            BaseOrder::Magnus => MonomialOrder::Standard,
            BaseOrder::MagnusSwapped => MonomialOrder::Swapped,
        };
        let mut out = FamilyOrder {
            descriptor: OrderDescriptor { transforms: Vec::new(), ..d.clone() },
            magnus: Magnus { order, policy },
            images: None,
            flips: Vec::new(),
            reversed: false,
        };
        for t in &d.transforms {
            out = match t {
                Transform::Reverse => reverse(&out),
                Transform::ConvexFlip { threshold } => convex_flip(&out, ConvexThreshold(*threshold)),
                Transform::Pullback { maps } => pullback(&out, &NielsenMap::new(maps.clone())),
                Transform::MonomialSwap => monomial_swap(&out)?,
            };
        }
        Ok(out)
    }

    pub fn descriptor(&self) -> &OrderDescriptor {
        &self.descriptor
    }

    pub fn monomial_order(&self) -> MonomialOrder {
        self.magnus.order
    }

    pub fn policy(&self) -> TruncationPolicy {
        self.magnus.policy
    }

    /// Replaces the truncation policy, keeping the transform chain.
    pub fn with_policy(&self, policy: TruncationPolicy) -> Result<FamilyOrder, Error> {
        let mut d = self.descriptor.clone();
        d.degree = policy.initial_degree;
        d.max_degree = policy.max_degree;
        FamilyOrder::from_descriptor(&d)
    }

    fn effective(&self, x: &FreeWord) -> FreeWord {
        match &self.images {
            Some((ia, ib)) => x.substitute(ia, ib),
            None => x.clone(),
        }
    }

    fn push(&self, t: Transform) -> FamilyOrder {
        let mut out = self.clone();
        out.descriptor.transforms.push(t);
        out
    }

    /// Leading monomial of the substituted word and the resulting sign.
    pub fn evaluate(&self, x: &FreeWord) -> Result<(Monomial, Sign), Error> {
        if x.is_identity() {
            return Err(Error::IdentityInput);
        }
        let (m, s) = self.magnus.leading_term(&self.effective(x))?;
        let flips = self.flips.iter().filter(|t| self.magnus.order.cmp(m, **t).is_ge()).count();
        Ok((m, s.flip_if(self.reversed ^ (flips % 2 == 1))))
    }
}

impl SignOracle for FamilyOrder {
    fn sign(&self, x: &FreeWord) -> Result<Sign, Error> {
        Ok(self.evaluate(x)?.1)
    }

    fn label(&self) -> String {
        self.descriptor.to_string()
    }
}

impl ClassOracle for FamilyOrder {
    fn arch_class(&self, x: &FreeWord) -> Result<ArchClass, Error> {
        Ok(ArchClass { leading: self.evaluate(x)?.0, order: self.magnus.order })
    }
}

/// The opposite order: `P ↦ P⁻¹`.
pub fn reverse(o: &FamilyOrder) -> FamilyOrder {
    let mut out = o.push(Transform::Reverse);
    out.reversed = !out.reversed;
    out
}

/// Reverses the order on `L(m₀)` and keeps it elsewhere.
pub fn convex_flip(o: &FamilyOrder, t: ConvexThreshold) -> FamilyOrder {
    let mut out = o.push(Transform::ConvexFlip { threshold: t.0 });
    out.flips.push(t.0);
    out
}

/// `sign'(x) = sign(φ(x))`.
pub fn pullback(o: &FamilyOrder, phi: &NielsenMap) -> FamilyOrder {
    let mut out = o.push(Transform::Pullback { maps: phi.maps.clone() });
    let (pa, pb) = phi.images();
    out.images = Some((o.effective(&pa), o.effective(&pb)));
    out
}

/// Same expansion read with the other within-degree monomial order. Only
/// defined directly on a base Magnus order.
pub fn monomial_swap(o: &FamilyOrder) -> Result<FamilyOrder, Error> {
    if !o.descriptor.transforms.is_empty() {
        return Err(Error::InvalidDescriptor(
            "monomial_swap applies only to an untransformed Magnus order".into(),
        ));
    }
    let mut out = o.push(Transform::MonomialSwap);
    out.magnus.order = out.magnus.order.swapped();
    Ok(out)
}

/// Fixed list of family members used by the axiom suites and the metric.
pub fn family() -> Vec<FamilyOrder> {
    let m = FamilyOrder::magnus();
    let s = monomial_swap(&m).expect("base order");
    let th = |x: &str| ConvexThreshold::parse(x).unwrap();
    let nm = |maps: &[NielsenGenerator]| NielsenMap::new(maps.to_vec());
    vec![
        m.clone(),
        reverse(&m),
        s.clone(),
        reverse(&s),
        convex_flip(&m, th("B")),
        convex_flip(&m, th("AA")),
        convex_flip(&m, th("AAB")),
        convex_flip(&m, th("ABB")),
        reverse(&convex_flip(&m, th("AA"))),
        convex_flip(&s, th("BA")),
        pullback(&m, &nm(&[NielsenGenerator::Swap])),
        pullback(&m, &nm(&[NielsenGenerator::InvA])),
        pullback(&m, &nm(&[NielsenGenerator::RightMult])),
        pullback(&m, &nm(&[NielsenGenerator::RightMult, NielsenGenerator::Swap])),
        convex_flip(&pullback(&m, &nm(&[NielsenGenerator::InvA])), th("AA")),
    ]
}

/// Where the new infinite cyclic factor sits in a lexicographic extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ZPosition {
    /// `Z × H`: the new generator dominates every base element.
    Prepend,
    /// `H × Z`: the new generator is dominated by every nontrivial base element.
    Append,
}

/// Lexicographically ordered direct product of `Z = ⟨z⟩` with a base group.
/// Elements are `(z_exponent, body)`.
#[derive(Clone, Debug)]
pub struct LexExtension<G> {
    pub base: G,
    pub position: ZPosition,
}

pub fn lex_prepend_z<G: OrderedGroup>(base: G) -> LexExtension<G> {
    LexExtension { base, position: ZPosition::Prepend }
}

pub fn lex_append_z<G: OrderedGroup>(base: G) -> LexExtension<G> {
    LexExtension { base, position: ZPosition::Append }
}

impl<G: OrderedGroup> LexExtension<G> {
    /// The new generator `z`.
    pub fn z(&self) -> (i64, G::Elem) {
        (1, self.base.identity())
    }

    pub fn embed(&self, h: G::Elem) -> (i64, G::Elem) {
        (0, h)
    }

    /// True when the element's magnitude is decided by its `z` exponent.
    fn z_decides(&self, x: &(i64, G::Elem)) -> bool {
        match self.position {
            ZPosition::Prepend => x.0 != 0,
            ZPosition::Append => self.base.is_identity(&x.1),
        }
    }
}

impl<G: OrderedGroup> OrderedGroup for LexExtension<G> {
    type Elem = (i64, G::Elem);

    fn identity(&self) -> Self::Elem {
        (0, self.base.identity())
    }

    fn multiply(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        (x.0 + y.0, self.base.multiply(&x.1, &y.1))
    }

    fn invert(&self, x: &Self::Elem) -> Self::Elem {
        (-x.0, self.base.invert(&x.1))
    }

    fn sign(&self, x: &Self::Elem) -> Result<Sign, Error> {
        if self.is_identity(x) {
            return Err(Error::IdentityInput);
        }
        if self.z_decides(x) {
            Ok(if x.0 > 0 { Sign::Pos } else { Sign::Neg })
        } else {
            self.base.sign(&x.1)
        }
    }

    fn arch_cmp(&self, x: &Self::Elem, y: &Self::Elem) -> Result<ArchRel, Error> {
        if self.is_identity(x) || self.is_identity(y) {
            return Err(Error::IdentityInput);
        }
        // The z-decided elements form one class, on top or at the bottom.
        let extreme = match self.position {
            ZPosition::Prepend => ArchRel::MuchGreater,
            ZPosition::Append => ArchRel::MuchLess,
        };
        match (self.z_decides(x), self.z_decides(y)) {
            (true, true) => Ok(ArchRel::Equivalent),
            (true, false) => Ok(extreme),
            (false, true) => Ok(extreme.reverse()),
            (false, false) => self.base.arch_cmp(&x.1, &y.1),
        }
    }

    fn is_identity(&self, x: &Self::Elem) -> bool {
        x.0 == 0 && self.base.is_identity(&x.1)
    }
}
