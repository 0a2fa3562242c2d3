//! Abstract ordered groups, used by the lexicographic extensions and the
//! wreath construction.

use std::cmp::Ordering;
use std::fmt::Debug;

use crate::error::Error;
use crate::magnus::{ArchRel, ClassOracle, Sign};
use crate::word::FreeWord;

/// A bi-ordered group that can also compare elements by magnitude (`≪`).
pub trait OrderedGroup: Sync {
    type Elem: Clone + Eq + Debug + Send + Sync;

    fn identity(&self) -> Self::Elem;
    fn multiply(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn invert(&self, x: &Self::Elem) -> Self::Elem;

    /// Sign of a nontrivial element.
    fn sign(&self, x: &Self::Elem) -> Result<Sign, Error>;

    /// Magnitude comparison of two nontrivial elements.
    fn arch_cmp(&self, x: &Self::Elem, y: &Self::Elem) -> Result<ArchRel, Error>;

    fn is_identity(&self, x: &Self::Elem) -> bool {
        *x == self.identity()
    }

    fn compare(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Ordering, Error> {
        let q = self.multiply(&self.invert(x), y);
        if self.is_identity(&q) {
            return Ok(Ordering::Equal);
        }
        Ok(match self.sign(&q)? {
            Sign::Pos => Ordering::Less,
            Sign::Neg => Ordering::Greater,
        })
    }

    fn abs(&self, x: &Self::Elem) -> Result<Self::Elem, Error> {
        if self.is_identity(x) || self.sign(x)? == Sign::Pos {
            Ok(x.clone())
        } else {
            Ok(self.invert(x))
        }
    }

    fn pow(&self, x: &Self::Elem, n: i64) -> Self::Elem {
        let base = if n < 0 { self.invert(x) } else { x.clone() };
        let mut out = self.identity();
        for _ in 0..n.unsigned_abs() {
            out = self.multiply(&out, &base);
        }
        out
    }

    /// `g · x · g⁻¹`.
    fn conjugate(&self, x: &Self::Elem, g: &Self::Elem) -> Self::Elem {
        self.multiply(&self.multiply(g, x), &self.invert(g))
    }
}

/// The free group under a class-aware bi-order.
#[derive(Clone, Debug)]
pub struct F2Group<O> {
    pub oracle: O,
}

impl<O: ClassOracle> F2Group<O> {
    pub fn new(oracle: O) -> Self {
        F2Group { oracle }
    }
}

impl<O: ClassOracle> OrderedGroup for F2Group<O> {
    type Elem = FreeWord;

    fn identity(&self) -> FreeWord {
        FreeWord::identity()
    }

    fn multiply(&self, x: &FreeWord, y: &FreeWord) -> FreeWord {
        x.multiply(y)
    }

    fn invert(&self, x: &FreeWord) -> FreeWord {
        x.invert()
    }

    fn sign(&self, x: &FreeWord) -> Result<Sign, Error> {
        self.oracle.sign(x)
    }

    fn arch_cmp(&self, x: &FreeWord, y: &FreeWord) -> Result<ArchRel, Error> {
        if x.is_identity() || y.is_identity() {
            return Err(Error::IdentityInput);
        }
        self.oracle.arch_cmp(x, y)
    }

    fn is_identity(&self, x: &FreeWord) -> bool {
        x.is_identity()
    }
}
