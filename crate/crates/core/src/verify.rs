//! Independent certificate checker.
//!
//! Nothing here calls into the word, expansion, transform or saturation code
//! used by the search. Words are re-parsed from their text into signed letter
//! codes, Magnus coefficients are computed one monomial at a time by dynamic
//! programming, order descriptors are re-interpreted from their JSON fields,
//! and cone consistency is re-checked by a separate closure loop.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::isolation::{NonIsolationCertificate, Side};
use crate::magnus::Sign;
use crate::transform::{BaseOrder, NielsenGenerator, OrderDescriptor, Transform};

/// Letters as codes: `1 = a`, `-1 = a⁻¹`, `2 = b`, `-2 = b⁻¹`.
type Word = Vec<i8>;

fn parse(s: &str) -> Result<Word, String> {
    let mut out: Word = Vec::new();
    if s == "e" {
        return Ok(out);
    }
    for c in s.chars() {
        let code = match c {
            'a' => 1,
            'A' => -1,
            'b' => 2,
            'B' => -2,
            other => return Err(format!("bad letter {other:?} in {s:?}")),
        };
        push(&mut out, code);
    }
    Ok(out)
}

fn show(w: &Word) -> String {
    if w.is_empty() {
        return "e".into();
    }
    w.iter().map(|c| match c { 1 => 'a', -1 => 'A', 2 => 'b', _ => 'B' }).collect()
}

fn push(w: &mut Word, c: i8) {
    if w.last() == Some(&-c) {
        w.pop();
    } else {
        w.push(c);
    }
}

fn mul(x: &Word, y: &Word) -> Word {
    let mut out = x.clone();
    for c in y {
        push(&mut out, *c);
    }
    out
}

fn inv(x: &Word) -> Word {
    x.iter().rev().map(|c| -c).collect()
}

fn conj(x: &Word, g: &Word) -> Word {
    mul(&mul(g, x), &inv(g))
}

fn subst(x: &Word, ia: &Word, ib: &Word) -> Word {
    let (ja, jb) = (inv(ia), inv(ib));
    let mut out = Vec::new();
    for c in x {
        let img = match c {
            1 => ia,
            -1 => &ja,
            2 => ib,
            _ => &jb,
        };
        for d in img {
            push(&mut out, *d);
        }
    }
    out
}

/// Monomial as a variable sequence, `0 = A`, `1 = B`.
type Mono = Vec<u8>;

fn parse_mono(s: &str) -> Result<Mono, String> {
    s.chars()
        .map(|c| match c {
            'A' => Ok(0),
            'B' => Ok(1),
            other => Err(format!("bad monomial letter {other:?}")),
        })
        .collect()
}

/// Degree first, then lexicographic with `first` as the smaller variable.
fn mono_cmp(x: &Mono, y: &Mono, first: u8) -> Ordering {
    x.len().cmp(&y.len()).then_with(|| {
        let key = |v: &u8| if *v == first { 0 } else { 1 };
        x.iter().map(key).cmp(y.iter().map(key))
    })
}

/// Coefficient of `m` in the expansion of `w` under `a ↦ 1 + A`, `b ↦ 1 + B`.
fn coefficient(w: &Word, m: &Mono) -> Result<i128, String> {
    let d = m.len();
    let mut dp = vec![0i128; d + 1];
    dp[0] = 1;
    for c in w {
        let var = if c.abs() == 1 { 0u8 } else { 1u8 };
        let mut next = vec![0i128; d + 1];
        for (j, slot) in next.iter_mut().enumerate() {
            // The letter contributes var^k for k = 0..=j, matching m[j-k..j].
            let mut acc: i128 = 0;
            for k in 0..=j {
                if k > 0 && m[j - k] != var {
                    break;
                }
                let coef: i128 = if *c > 0 {
                    if k <= 1 { 1 } else { 0 }
                } else if k % 2 == 0 {
                    1
                } else {
                    -1
                };
                if coef != 0 {
                    let term = dp[j - k].checked_mul(coef).ok_or("coefficient overflow")?;
                    acc = acc.checked_add(term).ok_or("coefficient overflow")?;
                }
            }
            *slot = acc;
        }
        dp = next;
    }
    Ok(dp[d])
}

/// First monomial with a nonzero coefficient, and that coefficient's sign.
fn leading(w: &Word, first: u8, max_degree: u32) -> Result<(Mono, Sign), String> {
    if w.is_empty() {
        return Err("identity has no sign".into());
    }
    for d in 1..=max_degree as usize {
        let mut monos: Vec<Mono> =
            (0u64..1 << d).map(|bits| (0..d).map(|i| ((bits >> (d - 1 - i)) & 1) as u8).collect()).collect();
        monos.sort_by(|x, y| mono_cmp(x, y, first));
        for m in monos {
            let c = coefficient(w, &m)?;
            if c != 0 {
                return Ok((m, if c > 0 { Sign::Pos } else { Sign::Neg }));
            }
        }
    }
    Err(format!("{} has no nonzero term up to degree {max_degree}", show(w)))
}

fn generator_images(g: NielsenGenerator) -> (Word, Word) {
    match g {
        NielsenGenerator::Swap => (vec![2], vec![1]),
        NielsenGenerator::InvA => (vec![-1], vec![2]),
        NielsenGenerator::RightMult => (vec![1, 2], vec![2]),
    }
}

/// A descriptor re-read from its fields.
#[derive(Clone, Debug)]
struct Interpreted {
    first: u8,
    max_degree: u32,
    images: (Word, Word),
    flips: Vec<Mono>,
    reversed: bool,
}

impl Interpreted {
    fn new(d: &OrderDescriptor) -> Result<Interpreted, String> {
        let mut it = Interpreted {
            first: match d.base {
                BaseOrder::Magnus => 0,
                BaseOrder::MagnusSwapped => 1,
            },
            max_degree: d.max_degree.min(40),
            images: (vec![1], vec![2]),
            flips: Vec::new(),
            reversed: false,
        };
        for (i, t) in d.transforms.iter().enumerate() {
            match t {
                Transform::Reverse => it.reversed = !it.reversed,
                Transform::ConvexFlip { threshold } => it.flips.push(parse_mono(&threshold.to_string())?),
                Transform::MonomialSwap => {
                    if i != 0 {
                        return Err("monomial swap must come first".into());
                    }
                    it.first = 1 - it.first;
                }
                Transform::Pullback { maps } => {
                    let (ia, ib) = it.images.clone();
                    let (pa, pb) = compose_images(maps);
                    it.images = (subst(&pa, &ia, &ib), subst(&pb, &ia, &ib));
                }
            }
        }
        Ok(it)
    }

    fn sign(&self, x: &Word) -> Result<Sign, String> {
        let y = subst(x, &self.images.0, &self.images.1);
        let (m, s) = leading(&y, self.first, self.max_degree)?;
        let reached = self.flips.iter().filter(|t| mono_cmp(&m, t, self.first) != Ordering::Less).count();
        let flip = self.reversed ^ (reached % 2 == 1);
        Ok(if flip { -s } else { s })
    }
}

/// Images of `a` and `b` under `maps[0] ∘ maps[1] ∘ …`.
fn compose_images(maps: &[NielsenGenerator]) -> (Word, Word) {
    let (mut pa, mut pb): (Word, Word) = (vec![1], vec![2]);
    // Outermost map last: x ↦ maps[0](maps[1](… x)).
    for g in maps.iter().rev() {
        let (ga, gb) = generator_images(*g);
        let na = subst(&pa, &ga, &gb);
        let nb = subst(&pb, &ga, &gb);
        pa = na;
        pb = nb;
    }
    (pa, pb)
}

/// All reduced words of length 1..=n.
fn words(n: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer: Vec<Word> = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &layer {
            for c in [1i8, -1, 2, -2] {
                if w.last() != Some(&-c) {
                    let mut v = w.clone();
                    v.push(c);
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Checks a complete sign table against the cone rules within the bounds.
fn table_is_cone(signs: &HashMap<Word, Sign>, l: usize, lc: usize) -> Result<(), String> {
    let positives: Vec<&Word> = signs.iter().filter(|(_, s)| **s == Sign::Pos).map(|(w, _)| w).collect();
    for (w, s) in signs {
        if signs.get(&inv(w)) != Some(&-*s) {
            return Err(format!("{} and its inverse have the same sign", show(w)));
        }
    }
    for u in &positives {
        for v in &positives {
            let p = mul(u, v);
            if !p.is_empty() && p.len() <= l && signs.get(&p) != Some(&Sign::Pos) {
                return Err(format!("{}·{} is not positive", show(u), show(v)));
            }
        }
    }
    for g in words(lc) {
        for u in &positives {
            let c = conj(u, &g);
            if c.len() <= l && signs.get(&c) != Some(&Sign::Pos) {
                return Err(format!("conjugate of {} by {} is not positive", show(u), show(&g)));
            }
        }
    }
    Ok(())
}

/// Closure of a set of positive words; `Err` on a contradiction.
fn close(seeds: &[Word], l: usize, lc: usize) -> Result<HashSet<Word>, String> {
    let conjugators = words(lc);
    let mut all: HashSet<Word> = HashSet::new();
    let mut fresh: Vec<Word> = Vec::new();
    for s in seeds {
        if all.insert(s.clone()) {
            fresh.push(s.clone());
        }
    }
    while !fresh.is_empty() {
        let mut found: Vec<Word> = Vec::new();
        let old: Vec<Word> = all.iter().cloned().collect();
        for f in &fresh {
            for o in &old {
                for p in [mul(f, o), mul(o, f)] {
                    if !p.is_empty() && p.len() <= l {
                        found.push(p);
                    }
                }
            }
            for g in &conjugators {
                let c = conj(f, g);
                if c.len() <= l {
                    found.push(c);
                }
            }
        }
        fresh.clear();
        for x in found {
            if all.insert(x.clone()) {
                fresh.push(x);
            }
        }
    }
    for x in &all {
        if all.contains(&inv(x)) {
            return Err(format!("{} is forced both ways", show(x)));
        }
    }
    Ok(all)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub valid: bool,
    pub problems: Vec<String>,
}

/// What the verifier learned about one side.
enum Checked {
    Order(Interpreted),
    Cone(HashSet<Word>),
}

impl Checked {
    fn sign(&self, w: &Word) -> Result<Option<Sign>, String> {
        match self {
            Checked::Order(o) => o.sign(w).map(Some),
            Checked::Cone(p) => Ok(if p.contains(w) {
                Some(Sign::Pos)
            } else if p.contains(&inv(w)) {
                Some(Sign::Neg)
            } else {
                None
            }),
        }
    }
}

/// Certificate checker with a memo of order-side cone checks.
#[derive(Default)]
pub struct Verifier {
    orders: Mutex<HashMap<(String, usize, usize), Result<(), String>>>,
}

impl Verifier {
    pub fn new() -> Verifier {
        Verifier::default()
    }

    fn check_order(&self, d: &OrderDescriptor, l: usize, lc: usize) -> Result<Interpreted, String> {
        let it = Interpreted::new(d)?;
        let key = (serde_json::to_string(d).map_err(|e| e.to_string())?, l, lc);
        if let Some(r) = self.orders.lock().unwrap().get(&key) {
            return r.clone().map(|_| it);
        }
        let result = (|| {
            let mut signs = HashMap::new();
            for w in words(l) {
                signs.insert(w.clone(), it.sign(&w)?);
            }
            table_is_cone(&signs, l, lc)
        })();
        self.orders.lock().unwrap().insert(key, result.clone());
        result.map(|_| it)
    }

    fn check_side(&self, side: &Side, l: usize, lc: usize) -> Result<Checked, String> {
        match side {
            Side::Order { descriptor } => self.check_order(descriptor, l, lc).map(Checked::Order),
            Side::Cone { assignments } => {
                let mut seeds = Vec::new();
                for a in assignments {
                    let w = parse(&a.word.to_string())?;
                    if w.is_empty() || w.len() > l {
                        return Err(format!("assignment {} outside the length bound", show(&w)));
                    }
                    seeds.push(if a.sign == Sign::Pos { w.clone() } else { inv(&w) });
                }
                close(&seeds, l, lc).map(Checked::Cone)
            }
        }
    }

    pub fn verify(&self, cert: &NonIsolationCertificate) -> VerificationReport {
        let mut problems = Vec::new();
        let (l, lc) = (cert.length_bound, cert.conj_bound);
        let witness = match parse(&cert.witness_word.to_string()) {
            Ok(w) if !w.is_empty() && w.len() <= l => Some(w),
            Ok(w) => {
                problems.push(format!("witness {} is trivial or longer than {l}", show(&w)));
                None
            }
            Err(e) => {
                problems.push(e);
                None
            }
        };
        let constraints: Vec<Word> = cert
            .constraints
            .positives()
            .iter()
            .filter_map(|x| parse(&x.to_string()).map_err(|e| problems.push(e)).ok())
            .collect();
        if cert.signs.base == cert.signs.alternative {
            problems.push("claimed witness signs agree".into());
        }
        for (name, side, claimed) in
            [("base", &cert.base, cert.signs.base), ("alternative", &cert.alternative, cert.signs.alternative)]
        {
            let checked = match self.check_side(side, l, lc) {
                Ok(c) => c,
                Err(e) => {
                    problems.push(format!("{name}: {e}"));
                    continue;
                }
            };
            for x in &constraints {
                match checked.sign(x) {
                    Ok(Some(Sign::Pos)) => {}
                    Ok(_) => problems.push(format!("{name}: constraint {} is not positive", show(x))),
                    Err(e) => problems.push(format!("{name}: {e}")),
                }
            }
            if let Some(w) = &witness {
                match checked.sign(w) {
                    Ok(Some(s)) if s == claimed => {}
                    Ok(s) => problems.push(format!(
                        "{name}: witness {} has sign {}, certificate says {claimed}",
                        show(w),
                        s.map_or("unknown".to_string(), |s| s.to_string())
                    )),
                    Err(e) => problems.push(format!("{name}: {e}")),
                }
            }
        }
        VerificationReport { valid: problems.is_empty(), problems }
    }
}

/// One-shot verification.
pub fn verify(cert: &NonIsolationCertificate) -> VerificationReport {
    Verifier::new().verify(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isolation::{witness_nonisolation, BasicOpenSet, Searcher};
    use crate::magnus::{Magnus, SignOracle};
    use crate::transform::family;
    use crate::word::{ball, w};

    #[test]
    fn coefficients_match_expansion() {
        let m = Magnus::new();
        for x in ball(5).into_iter().skip(1) {
            let ours = leading(&parse(&x.to_string()).unwrap(), 0, 32).unwrap();
            let (lead, sign) = m.leading_term(&x).unwrap();
            assert_eq!(ours.1, sign, "{x}");
            assert_eq!(ours.0.len() as u32, lead.degree(), "{x}");
        }
        assert_eq!(coefficient(&parse("A").unwrap(), &vec![0, 0, 0]).unwrap(), -1);
        assert_eq!(coefficient(&parse("abAB").unwrap(), &vec![0, 1]).unwrap(), 1);
        assert_eq!(coefficient(&parse("abAB").unwrap(), &vec![1, 0]).unwrap(), -1);
    }

    #[test]
    fn interpreted_descriptors_match_family() {
        for o in family() {
            let it = Interpreted::new(o.descriptor()).unwrap();
            for x in ball(4).into_iter().skip(1) {
                assert_eq!(it.sign(&parse(&x.to_string()).unwrap()).unwrap(), o.sign(&x).unwrap(), "{} {x}", o.label());
            }
        }
    }

    #[test]
    fn accepts_search_output() {
        let u = BasicOpenSet::new(vec![w("a"), w("Ba")]).unwrap();
        let cert = witness_nonisolation(&u, 4, 2, 16).unwrap();
        let r = verify(&cert);
        assert!(r.valid, "{:?}", r.problems);
    }

    #[test]
    fn rejects_tampering() {
        let u = BasicOpenSet::new(vec![w("a")]).unwrap();
        let cert = witness_nonisolation(&u, 4, 2, 16).unwrap();
        let mut bad = cert.clone();
        bad.signs.alternative = -bad.signs.alternative;
        assert!(!verify(&bad).valid);
        let mut bad = cert.clone();
        bad.witness_word = w("a");
        assert!(!verify(&bad).valid);
        let mut bad = cert;
        bad.constraints = BasicOpenSet::new(vec![w("A")]).unwrap();
        assert!(!verify(&bad).valid);
    }

    #[test]
    fn checks_cone_sides() {
        let s = Searcher::new(3, 2);
        let u = BasicOpenSet::new(vec![w("a"), w("b")]).unwrap();
        let cert = s.search(&u, 16).unwrap();
        assert!(verify(&cert).valid);
        // A cone side that is inconsistent: a > 1, b > 1, ab < 1.
        let mut bad = cert.clone();
        bad.alternative = Side::Cone {
            assignments: vec![
                crate::isolation::SignedWord { word: w("a"), sign: Sign::Pos },
                crate::isolation::SignedWord { word: w("b"), sign: Sign::Pos },
                crate::isolation::SignedWord { word: w("ab"), sign: Sign::Neg },
            ],
        };
        bad.witness_word = w("ab");
        bad.signs.alternative = Sign::Neg;
        let r = verify(&bad);
        assert!(!r.valid);
        assert!(r.problems.iter().any(|p| p.contains("forced both ways")));
    }
}
