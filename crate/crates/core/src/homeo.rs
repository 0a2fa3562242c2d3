//! Exact piecewise-linear homeomorphisms of `[0, 1]` and the tail order on them.
//!
//! A map `f` is in the cone `P` when some tail `[t, 1]`, `t < 1`, has
//! `f(x) ≥ x` throughout and `f(y) > y` somewhere. For a PL map this is
//! decided exactly: find the supremum of `{x : f(x) < x}`, then look for a
//! strict point to its right.

use std::cmp::Ordering;
use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Formats as `p/q`, or `p` for integers.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Result<Q, Error> {
    s.trim().parse::<Q>().map_err(|e| Error::Parse(format!("{s:?}: {e}")))
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod q_string {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(serde::de::Error::custom)
    }
}

/// Which quotient decides `f > g`. The crate uses [`LARGER_ABOVE_DIAGONAL`]:
/// `f > g` iff `g⁻¹ ∘ f ∈ P`, so a map above the diagonal near 1 is larger
/// than the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpConvention {
    /// `f > g` iff `g⁻¹ ∘ f ∈ P`.
    LargerAboveDiagonal,
    /// `f > g` iff `f⁻¹ ∘ g ∈ P`.
    LargerBelowDiagonal,
}

pub const LARGER_ABOVE_DIAGONAL: CmpConvention = CmpConvention::LargerAboveDiagonal;

/// Orientation-preserving PL bijection of `[0, 1]` with rational breakpoints,
/// stored without redundant (collinear) interior breakpoints.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalPLMap {
    points: Vec<(Q, Q)>,
}

impl RationalPLMap {
    pub fn identity() -> RationalPLMap {
        RationalPLMap { points: vec![(Q::zero(), Q::zero()), (Q::one(), Q::one())] }
    }

    /// Checks the breakpoints and drops collinear interior ones.
    pub fn new(points: Vec<(Q, Q)>) -> Result<RationalPLMap, Error> {
        let first = points.first().ok_or_else(|| Error::InvalidMap("no breakpoints".into()))?;
        let last = points.last().unwrap();
        if *first != (Q::zero(), Q::zero()) || *last != (Q::one(), Q::one()) {
            return Err(Error::InvalidMap("endpoints must be (0,0) and (1,1)".into()));
        }
        for p in points.windows(2) {
            if p[0].0 >= p[1].0 {
                return Err(Error::InvalidMap(format!("x not strictly increasing at {}", fmt_q(&p[1].0))));
            }
            if p[0].1 >= p[1].1 {
                return Err(Error::InvalidMap(format!("y not strictly increasing at x = {}", fmt_q(&p[1].0))));
            }
        }
        let mut out: Vec<(Q, Q)> = Vec::with_capacity(points.len());
        for p in points {
            while out.len() >= 2 {
                let (a, b) = (&out[out.len() - 2], &out[out.len() - 1]);
                if (&b.1 - &a.1) * (&p.0 - &b.0) == (&p.1 - &b.1) * (&b.0 - &a.0) {
                    out.pop();
                } else {
                    break;
                }
            }
            out.push(p);
        }
        Ok(RationalPLMap { points: out })
    }

    /// Parses `x:y` pairs separated by commas or whitespace, e.g. `0:0, 1/2:3/4, 1:1`.
    pub fn parse(s: &str) -> Result<RationalPLMap, Error> {
        let mut pts = Vec::new();
        for item in s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            let (x, y) = item.split_once(':').ok_or_else(|| Error::Parse(format!("expected x:y, got {item:?}")))?;
            pts.push((parse_q(x)?, parse_q(y)?));
        }
        RationalPLMap::new(pts)
    }

    pub fn from_ints(points: &[((i64, i64), (i64, i64))]) -> Result<RationalPLMap, Error> {
        RationalPLMap::new(points.iter().map(|((a, b), (c, d))| (q(*a, *b), q(*c, *d))).collect())
    }

    pub fn breakpoints(&self) -> &[(Q, Q)] {
        &self.points
    }

    pub fn is_identity(&self) -> bool {
        self.points.len() == 2
    }

    fn interpolate(pts: &[(Q, Q)], x: &Q, key: impl Fn(&(Q, Q)) -> (&Q, &Q)) -> Q {
        let i = pts.partition_point(|p| key(p).0 < x);
        if i < pts.len() && key(&pts[i]).0 == x {
            return key(&pts[i]).1.clone();
        }
        let (x0, y0) = key(&pts[i - 1]);
        let (x1, y1) = key(&pts[i]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    pub fn eval(&self, x: &Q) -> Q {
        assert!(!x.is_negative() && *x <= Q::one(), "argument outside [0, 1]");
        Self::interpolate(&self.points, x, |p| (&p.0, &p.1))
    }

    pub fn eval_inverse(&self, y: &Q) -> Q {
        assert!(!y.is_negative() && *y <= Q::one(), "argument outside [0, 1]");
        Self::interpolate(&self.points, y, |p| (&p.1, &p.0))
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &RationalPLMap) -> RationalPLMap {
        let mut xs: Vec<Q> = g.points.iter().map(|p| p.0.clone()).collect();
        xs.extend(self.points.iter().map(|p| g.eval_inverse(&p.0)));
        xs.sort();
        xs.dedup();
        let pts = xs.into_iter().map(|x| {
            let y = self.eval(&g.eval(&x));
            (x, y)
        });
        RationalPLMap::new(pts.collect()).expect("composition of homeomorphisms")
    }

    pub fn invert(&self) -> RationalPLMap {
        RationalPLMap { points: self.points.iter().map(|(x, y)| (y.clone(), x.clone())).collect() }
    }

    /// `h ∘ self ∘ h⁻¹`.
    pub fn conjugate(&self, h: &RationalPLMap) -> RationalPLMap {
        h.compose(self).compose(&h.invert())
    }

    pub fn tail(&self) -> TailAnalysis {
        TailAnalysis::of(self)
    }

    pub fn in_p(&self) -> bool {
        self.tail().strict_witness.is_some()
    }

    /// Compares under [`LARGER_ABOVE_DIAGONAL`]; `None` means incomparable.
    pub fn partial_cmp_tail(&self, g: &RationalPLMap) -> Option<Ordering> {
        self.partial_cmp_with(g, LARGER_ABOVE_DIAGONAL)
    }

    pub fn partial_cmp_with(&self, g: &RationalPLMap, convention: CmpConvention) -> Option<Ordering> {
        if self == g {
            return Some(Ordering::Equal);
        }
        let forward = g.invert().compose(self).in_p();
        let backward = self.invert().compose(g).in_p();
        let ord = match (forward, backward) {
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => return None,
            (true, true) => unreachable!("P and its inverse are disjoint"),
        };
        Some(match convention {
            CmpConvention::LargerAboveDiagonal => ord,
            CmpConvention::LargerBelowDiagonal => ord.reverse(),
        })
    }

    /// Breakpoints as CSV with a header line.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,y\n");
        for (x, y) in &self.points {
            writeln!(s, "{},{}", fmt_q(x), fmt_q(y)).unwrap();
        }
        s
    }

    /// Plot of the map against the diagonal.
    pub fn to_svg(&self, title: &str) -> String {
        use num_traits::ToPrimitive;
        let size = 400.0;
        let pad = 20.0;
        let px = |v: &Q| pad + v.to_f64().unwrap_or(0.0) * size;
        let py = |v: &Q| pad + (1.0 - v.to_f64().unwrap_or(0.0)) * size;
        let line: Vec<String> = self.points.iter().map(|(x, y)| format!("{:.3},{:.3}", px(x), py(y))).collect();
        let total = size + 2.0 * pad;
        let mut s = String::new();
        writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total}" height="{total}" viewBox="0 0 {total} {total}">"#).unwrap();
        writeln!(s, "<title>{}</title>", title.replace('&', "&amp;").replace('<', "&lt;")).unwrap();
        writeln!(s, r#"<rect x="{pad}" y="{pad}" width="{size}" height="{size}" fill="none" stroke="black"/>"#).unwrap();
        writeln!(s, r##"<line x1="{pad}" y1="{}" x2="{}" y2="{pad}" stroke="#999" stroke-dasharray="4"/>"##, pad + size, pad + size).unwrap();
        writeln!(s, r##"<polyline fill="none" stroke="#c00" stroke-width="2" points="{}"/>"##, line.join(" ")).unwrap();
        s.push_str("</svg>\n");
        s
    }

    /// A random map with up to `max_inner` interior breakpoints whose
    /// coordinates are multiples of `1/denominator`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, max_inner: usize, denominator: i64) -> RationalPLMap {
        let k = rng.gen_range(0..=max_inner.min(denominator as usize - 1));
        let pick = |rng: &mut R| {
            let mut v: Vec<i64> = Vec::new();
            while v.len() < k {
                let c = rng.gen_range(1..denominator);
                if !v.contains(&c) {
                    v.push(c);
                }
            }
            v.sort();
            v
        };
        let xs = pick(rng);
        let ys = pick(rng);
        let mut pts = vec![(Q::zero(), Q::zero())];
        pts.extend(xs.iter().zip(&ys).map(|(x, y)| (q(*x, denominator), q(*y, denominator))));
        pts.push((Q::one(), Q::one()));
        RationalPLMap::new(pts).expect("sorted distinct coordinates")
    }
}

impl fmt::Display for RationalPLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.points.iter().map(|(x, y)| format!("({},{})", fmt_q(x), fmt_q(y))).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for RationalPLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for RationalPLMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let pts: Vec<[String; 2]> = self.points.iter().map(|(x, y)| [fmt_q(x), fmt_q(y)]).collect();
        pts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalPLMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw: Vec<[String; 2]> = Vec::deserialize(d)?;
        let pts: Result<Vec<(Q, Q)>, Error> = raw.iter().map(|[x, y]| Ok((parse_q(x)?, parse_q(y)?))).collect();
        RationalPLMap::new(pts.map_err(serde::de::Error::custom)?).map_err(serde::de::Error::custom)
    }
}

/// Where a map dips below the diagonal, and a strict point above it further right.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailAnalysis {
    /// `sup {x : f(x) < x}`, or 0 when the map never dips below.
    #[serde(with = "q_string")]
    pub violation_sup: Q,
    /// Some `y > violation_sup` with `f(y) > y`.
    #[serde(with = "opt_q_string")]
    pub strict_witness: Option<Q>,
}

mod opt_q_string {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        x.as_ref().map(fmt_q).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
        let s: Option<String> = Option::deserialize(d)?;
        s.map(|s| parse_q(&s).map_err(serde::de::Error::custom)).transpose()
    }
}

impl TailAnalysis {
    pub fn of(f: &RationalPLMap) -> TailAnalysis {
        let pts = &f.points;
        let gap = |p: &(Q, Q)| &p.1 - &p.0;
        let mut sup = Q::zero();
        for s in pts.windows(2) {
            let (d0, d1) = (gap(&s[0]), gap(&s[1]));
            let end = if d1.is_negative() {
                Some(s[1].0.clone())
            } else if d0.is_negative() {
                // f - id crosses zero inside the segment.
                Some(&s[0].0 + (&s[1].0 - &s[0].0) * (-&d0) / (&d1 - &d0))
            } else {
                None
            };
            if let Some(e) = end {
                if e > sup {
                    sup = e;
                }
            }
        }
        let mut strict_witness = None;
        for s in pts.windows(2) {
            if s[1].0 <= sup {
                continue;
            }
            let lo = if s[0].0 > sup { s[0].0.clone() } else { sup.clone() };
            let mid = (&lo + &s[1].0) / Q::from_integer(BigInt::from(2));
            if f.eval(&mid) > mid {
                strict_witness = Some(mid);
                break;
            }
        }
        TailAnalysis { violation_sup: sup, strict_witness }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pl(s: &str) -> RationalPLMap {
        RationalPLMap::parse(s).unwrap()
    }

    #[test]
    fn compose_and_invert_examples() {
        let f = pl("0:0, 1/2:3/4, 1:1");
        assert_eq!(RationalPLMap::identity().compose(&f), f);
        assert_eq!(f.invert(), pl("0:0, 3/4:1/2, 1:1"));
        assert!(f.compose(&f.invert()).is_identity());
        assert!(f.invert().compose(&f).is_identity());
    }

    #[test]
    fn rejects_bad_breakpoints() {
        assert!(RationalPLMap::parse("0:0, 1/4:1/2, 1/2:1/2, 1:1").is_err());
        assert!(RationalPLMap::parse("0:0, 1/2:1/4").is_err());
        assert!(RationalPLMap::parse("0:0, 1/2:1/2, 1:1").unwrap().is_identity());
    }

    #[test]
    fn in_p_examples() {
        assert!(!RationalPLMap::identity().in_p());
        assert!(pl("0:0, 1/2:3/4, 1:1").in_p());
        let below = pl("0:0, 1/2:1/4, 1:1");
        assert!(!below.in_p());
        assert!(below.invert().in_p());
        let t = below.tail();
        assert_eq!(t.violation_sup, q(1, 1));
        // Crossing inside a segment.
        let cross = pl("0:0, 1/4:1/8, 3/4:7/8, 1:1");
        assert_eq!(cross.tail().violation_sup, q(1, 2));
        assert!(cross.in_p());
    }

    #[test]
    fn partial_cmp_examples() {
        let f = pl("0:0, 1/2:3/4, 1:1");
        let id = RationalPLMap::identity();
        assert_eq!(f.partial_cmp_tail(&f), Some(Ordering::Equal));
        assert_eq!(f.partial_cmp_tail(&id), Some(Ordering::Greater));
        assert_eq!(id.partial_cmp_tail(&f), Some(Ordering::Less));
        // Above the diagonal on [0, 1/2], identity on [1/2, 1].
        let early = pl("0:0, 1/4:3/8, 1/2:1/2, 1:1");
        assert_eq!(early.partial_cmp_tail(&id), Some(Ordering::Greater));
        assert_eq!(f.partial_cmp_with(&id, CmpConvention::LargerBelowDiagonal), Some(Ordering::Less));
    }

    #[test]
    fn cone_properties_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut members = Vec::new();
        while members.len() < 60 {
            let f = RationalPLMap::random(&mut rng, 4, 12);
            if f.in_p() {
                members.push(f);
            }
        }
        for f in &members {
            assert!(!f.invert().in_p());
            for g in members.iter().take(10) {
                assert!(f.compose(g).in_p(), "{f} ∘ {g}");
            }
            let h = RationalPLMap::random(&mut rng, 4, 12);
            assert!(f.conjugate(&h).in_p());
        }
    }

    #[test]
    fn partial_order_is_transitive_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..300 {
            let (f, g, h) = (
                RationalPLMap::random(&mut rng, 3, 8),
                RationalPLMap::random(&mut rng, 3, 8),
                RationalPLMap::random(&mut rng, 3, 8),
            );
            let fg = f.partial_cmp_tail(&g);
            assert_eq!(fg.map(Ordering::reverse), g.partial_cmp_tail(&f));
            if fg == Some(Ordering::Greater) && g.partial_cmp_tail(&h) == Some(Ordering::Greater) {
                assert_eq!(f.partial_cmp_tail(&h), Some(Ordering::Greater));
            }
        }
    }

    #[test]
    fn exports() {
        let f = pl("0:0, 1/2:3/4, 1:1");
        assert_eq!(f.to_csv(), "x,y\n0,0\n1/2,3/4\n1,1\n");
        assert!(f.to_svg("f").contains("<polyline"));
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"[["0","0"],["1/2","3/4"],["1","1"]]"#);
        assert_eq!(serde_json::from_str::<RationalPLMap>(&json).unwrap(), f);
    }
}
