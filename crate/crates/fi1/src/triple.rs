//! Exact arithmetic in the monogenic free inverse semigroup.
//!
//! Elements are triples `(-a, p, b)` with `a, b >= 0`, `a + b >= 1` and
//! `-a <= p <= b`. The free generator is `(0, 1, 1)`; a triple corresponds
//! to the word `x^-a x^a x^b x^-b x^p`. Products are O(1):
//!
//! ```text
//! (-a1, p1, b1)(-a2, p2, b2) = (-max(a1, a2-p1), p1+p2, max(b1, b2+p1))
//! (-a, p, b)^-1 = (-(a+p), -p, b-p)
//! ```

use crate::error::{Fi1Error, Result};
use crate::word::{Sign, Word};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// An element of the monogenic free inverse semigroup in the triple model.
///
/// Stored as the non-negative left reach `a`, the displacement `p` and the
/// non-negative right reach `b`; the mathematical triple is `(-a, p, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Triple {
    a: i64,
    p: i64,
    b: i64,
}

/// Green's data of a triple: the R-class is the reach pair `(a, b)`, the
/// D-class is indexed by `a + b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct GreenData {
    pub rclass: (u64, u64),
    pub dindex: u64,
}

fn cadd(x: i64, y: i64) -> i64 {
    x.checked_add(y).expect("triple component overflow")
}

fn csub(x: i64, y: i64) -> i64 {
    x.checked_sub(y).expect("triple component overflow")
}

impl Triple {
    /// Builds `(-a, p, b)` from the reaches and displacement, validating the
    /// triple invariants.
    pub fn new(a: i64, p: i64, b: i64) -> Result<Self> {
        if a >= 0 && b >= 0 && a + b >= 1 && -a <= p && p <= b {
            Ok(Triple { a, p, b })
        } else {
            Err(Fi1Error::InvalidTriple(a, p, b))
        }
    }

    /// Parses the components as printed, i.e. `(-a, p, b)` with the first
    /// component non-positive.
    pub fn from_components(neg_a: i64, p: i64, b: i64) -> Result<Self> {
        if neg_a > 0 {
            return Err(Fi1Error::InvalidTriple(neg_a, p, b));
        }
        Self::new(-neg_a, p, b)
    }

    /// The free generator `x = (0, 1, 1)`.
    pub fn generator() -> Self {
        Triple { a: 0, p: 1, b: 1 }
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    /// Product in the triple model. Total on valid triples.
    pub fn mul(&self, rhs: &Triple) -> Triple {
        let a = self.a.max(csub(rhs.a, self.p));
        let p = cadd(self.p, rhs.p);
        let b = self.b.max(cadd(rhs.b, self.p));
        debug_assert!(-a <= p && p <= b, "product invariant violated");
        Triple { a, p, b }
    }

    /// Inverse: `(-a, p, b)^-1 = (-(a+p), -p, b-p)`.
    pub fn inv(&self) -> Triple {
        Triple {
            a: cadd(self.a, self.p),
            p: -self.p,
            b: csub(self.b, self.p),
        }
    }

    /// Idempotents are exactly the triples with zero displacement.
    pub fn is_idempotent(&self) -> bool {
        self.p == 0
    }

    /// Natural partial order: `u <= v` iff `u = (u u^-1) v`.
    ///
    /// Uses the component criterion (same displacement, both reaches at
    /// least as large); its agreement with the defining equation is checked
    /// exhaustively in the test suite.
    pub fn leq(&self, rhs: &Triple) -> bool {
        self.p == rhs.p && self.a >= rhs.a && self.b >= rhs.b
    }

    /// Natural partial order via the defining equation, kept as the slow
    /// reference route for the criterion check.
    pub fn leq_by_equation(&self, rhs: &Triple) -> bool {
        self.mul(&self.inv()).mul(rhs) == *self
    }

    pub fn green(&self) -> GreenData {
        GreenData {
            rclass: (self.a as u64, self.b as u64),
            dindex: (self.a + self.b) as u64,
        }
    }

    /// D-class index `a + b`.
    pub fn dindex(&self) -> u64 {
        (self.a + self.b) as u64
    }

    /// The automorphism induced by `x -> x^-1`: swaps the reaches and negates
    /// the displacement.
    pub fn mirror(&self) -> Triple {
        Triple {
            a: self.b,
            p: -self.p,
            b: self.a,
        }
    }

    /// The canonical word `x^-a x^a x^b x^-b x^p` over the given letter.
    pub fn canonical_word(&self, letter: &str) -> Word {
        let mut letters = Vec::new();
        for _ in 0..self.a {
            letters.push((letter.to_string(), Sign::Minus));
        }
        for _ in 0..self.a {
            letters.push((letter.to_string(), Sign::Plus));
        }
        for _ in 0..self.b {
            letters.push((letter.to_string(), Sign::Plus));
        }
        for _ in 0..self.b {
            letters.push((letter.to_string(), Sign::Minus));
        }
        let sign = if self.p >= 0 { Sign::Plus } else { Sign::Minus };
        for _ in 0..self.p.abs() {
            letters.push((letter.to_string(), sign));
        }
        Word::new(vec![letter.to_string()], letters).expect("canonical word is well-formed")
    }
}

/// Engine order: by D-index, then left reach, then displacement. Bounded
/// closures are reported in this order.
impl Ord for Triple {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.dindex(), self.a, self.p).cmp(&(other.dindex(), other.a, other.p))
    }
}

impl PartialOrd for Triple {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", -self.a, self.p, self.b)
    }
}

impl FromStr for Triple {
    type Err = Fi1Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Fi1Error::Parse(s.to_string(), "triple"))?;
        let parts: Vec<&str> = inner.split(',').collect();
        if parts.len() != 3 {
            return Err(Fi1Error::Parse(s.to_string(), "triple"));
        }
        let nums: Vec<i64> = parts
            .iter()
            .map(|p| p.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Fi1Error::Parse(s.to_string(), "triple"))?;
        Triple::from_components(nums[0], nums[1], nums[2])
    }
}

impl serde::Serialize for Triple {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        [-self.a, self.p, self.b].serialize(ser)
    }
}

impl<'de> serde::Deserialize<'de> for Triple {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = <[i64; 3]>::deserialize(de)?;
        Triple::from_components(raw[0], raw[1], raw[2]).map_err(serde::de::Error::custom)
    }
}

/// Evaluates a word letter-by-letter under an assignment of letters to
/// triples; inverse letters evaluate through [`Triple::inv`].
pub fn eval_word(w: &Word, assignment: &BTreeMap<String, Triple>) -> Result<Triple> {
    let mut acc: Option<Triple> = None;
    for (name, sign) in w.letters() {
        let base = assignment
            .get(name)
            .ok_or_else(|| Fi1Error::UnassignedLetter(name.clone()))?;
        let t = match sign {
            Sign::Plus => *base,
            Sign::Minus => base.inv(),
        };
        acc = Some(match acc {
            None => t,
            Some(prev) => prev.mul(&t),
        });
    }
    acc.ok_or(Fi1Error::EmptyWord)
}

/// Evaluates a word over a single-letter alphabet with the letter mapped to
/// the free generator; this is the canonical-form map of the semigroup.
pub fn canonical_form(w: &Word) -> Result<Triple> {
    let mut assignment = BTreeMap::new();
    for name in w.alphabet() {
        assignment.insert(name.clone(), Triple::generator());
    }
    eval_word(w, &assignment)
}

/// All triples with both reaches at most `max_reach`, in engine order.
pub fn triples_with_reach_at_most(max_reach: i64) -> Vec<Triple> {
    let mut out = Vec::new();
    for a in 0..=max_reach {
        for b in 0..=max_reach {
            if a + b == 0 {
                continue;
            }
            for p in -a..=b {
                out.push(Triple { a, p, b });
            }
        }
    }
    out.sort();
    out
}
