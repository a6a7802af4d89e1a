//! Exact finite descriptions of eventually periodic subsets of N0 x N0.
//!
//! Idempotents `(-a, 0, b)` are identified with points `(a, b)`, the pair
//! `(0, 0)` excluded. A description is a finite set of base cells plus a
//! finite set of rays (origin translated by multiples of a step along one
//! or both axes), with a declared common periodicity for the region beyond
//! the base box. Membership is O(cells + rays).
//!
//! Internally every primitive is a *quadrant* `{(oa + i*sa, ob + j*sb)}`
//! with steps possibly zero; meets (coordinatewise max) and restrictions
//! stay in quadrant form, which keeps the set algebra exact.

use crate::error::{Fi1Error, Result};
use crate::triple::Triple;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// A point of the idempotent semilattice: `(a, b)` stands for `(-a, 0, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "(u64, u64)", into = "(u64, u64)")]
pub struct IdemPoint {
    pub a: u64,
    pub b: u64,
}

impl IdemPoint {
    pub fn new(a: u64, b: u64) -> Result<Self> {
        if a + b >= 1 {
            Ok(IdemPoint { a, b })
        } else {
            Err(Fi1Error::InvalidPoint(a, b))
        }
    }

    pub fn to_triple(self) -> Triple {
        Triple::new(self.a as i64, 0, self.b as i64).expect("idempotent point is a valid triple")
    }

    /// Coordinatewise maximum, i.e. the meet of the two idempotents.
    pub fn meet(self, other: IdemPoint) -> IdemPoint {
        IdemPoint {
            a: self.a.max(other.a),
            b: self.b.max(other.b),
        }
    }

    /// `self` dominates `other` when both coordinates are at least as large,
    /// i.e. `self <= other` in the idempotent order.
    pub fn dominates(self, other: IdemPoint) -> bool {
        self.a >= other.a && self.b >= other.b
    }
}

impl TryFrom<(u64, u64)> for IdemPoint {
    type Error = Fi1Error;
    fn try_from(v: (u64, u64)) -> Result<Self> {
        IdemPoint::new(v.0, v.1)
    }
}

impl From<IdemPoint> for (u64, u64) {
    fn from(p: IdemPoint) -> Self {
        (p.a, p.b)
    }
}

impl fmt::Display for IdemPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    A,
    B,
    Both,
}

/// A ray: the origin translated by all multiples of `step` along the chosen
/// axis or axes (independently for `Both`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawRay")]
pub struct Ray {
    pub origin: IdemPoint,
    pub axis: Axis,
    pub step: u64,
}

#[derive(Deserialize)]
struct RawRay {
    origin: IdemPoint,
    axis: Axis,
    step: u64,
}

impl TryFrom<RawRay> for Ray {
    type Error = String;
    fn try_from(r: RawRay) -> std::result::Result<Self, String> {
        if r.step == 0 {
            return Err("ray step must be positive".to_string());
        }
        Ok(Ray {
            origin: r.origin,
            axis: r.axis,
            step: r.step,
        })
    }
}

/// Internal primitive: the grid `{(oa + i*sa, ob + j*sb) : i, j >= 0}`,
/// where a zero step pins the coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Quadrant {
    pub oa: u64,
    pub ob: u64,
    pub sa: u64,
    pub sb: u64,
}

impl Quadrant {
    fn contains(&self, p: IdemPoint) -> bool {
        axis_contains(self.oa, self.sa, p.a) && axis_contains(self.ob, self.sb, p.b)
    }
}

fn axis_contains(origin: u64, step: u64, v: u64) -> bool {
    if v < origin {
        return false;
    }
    if step == 0 {
        v == origin
    } else {
        (v - origin).is_multiple_of(step)
    }
}

/// Arithmetic progression `{start + i*step}`, a single point when `step = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Prog {
    start: u64,
    step: u64,
}

impl Prog {
    /// Drops all values below `t`; `None` when nothing remains.
    fn truncate(self, t: u64) -> Option<Prog> {
        if t <= self.start {
            return Some(self);
        }
        if self.step == 0 {
            return None;
        }
        let k = (t - self.start).div_ceil(self.step);
        Some(Prog {
            start: self.start + k * self.step,
            step: self.step,
        })
    }
}

/// `{max(x, y) : x in p, y in q}` as a union of progressions.
fn max_combine(p: Prog, q: Prog) -> Vec<Prog> {
    let mut out = Vec::new();
    if let Some(r) = p.truncate(q.start) {
        out.push(r);
    }
    if let Some(r) = q.truncate(p.start) {
        out.push(r);
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        a.max(b)
    } else {
        a / gcd(a, b) * b
    }
}

/// An eventually periodic subset of the idempotent semilattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPeriodicSet")]
pub struct PeriodicSet {
    pub cells: BTreeSet<IdemPoint>,
    pub rays: Vec<Ray>,
    pub period: u64,
}

#[derive(Deserialize)]
struct RawPeriodicSet {
    cells: BTreeSet<IdemPoint>,
    rays: Vec<Ray>,
    period: u64,
}

impl TryFrom<RawPeriodicSet> for PeriodicSet {
    type Error = String;
    fn try_from(r: RawPeriodicSet) -> std::result::Result<Self, String> {
        if r.period == 0 {
            return Err("declared period must be positive".to_string());
        }
        Ok(PeriodicSet {
            cells: r.cells,
            rays: r.rays,
            period: r.period,
        })
    }
}

impl PeriodicSet {
    pub fn new(cells: BTreeSet<IdemPoint>, rays: Vec<Ray>, period: u64) -> Self {
        assert!(period >= 1, "declared period must be positive");
        PeriodicSet {
            cells,
            rays,
            period,
        }
    }

    pub fn empty() -> Self {
        PeriodicSet {
            cells: BTreeSet::new(),
            rays: Vec::new(),
            period: 1,
        }
    }

    pub fn from_cells<I: IntoIterator<Item = IdemPoint>>(cells: I) -> Self {
        PeriodicSet {
            cells: cells.into_iter().collect(),
            rays: Vec::new(),
            period: 1,
        }
    }

    pub(crate) fn quadrants(&self) -> Vec<Quadrant> {
        let mut out: Vec<Quadrant> = self
            .cells
            .iter()
            .map(|c| Quadrant {
                oa: c.a,
                ob: c.b,
                sa: 0,
                sb: 0,
            })
            .collect();
        for r in &self.rays {
            let (sa, sb) = match r.axis {
                Axis::A => (r.step, 0),
                Axis::B => (0, r.step),
                Axis::Both => (r.step, r.step),
            };
            out.push(Quadrant {
                oa: r.origin.a,
                ob: r.origin.b,
                sa,
                sb,
            });
        }
        out
    }

    pub(crate) fn from_quadrants(quads: Vec<Quadrant>, period: u64) -> Self {
        let mut cells = BTreeSet::new();
        let mut rays = Vec::new();
        for q in dedup_quadrants(quads) {
            match (q.sa, q.sb) {
                (0, 0) => {
                    cells.insert(IdemPoint { a: q.oa, b: q.ob });
                }
                (s, 0) => rays.push(Ray {
                    origin: IdemPoint { a: q.oa, b: q.ob },
                    axis: Axis::A,
                    step: s,
                }),
                (0, s) => rays.push(Ray {
                    origin: IdemPoint { a: q.oa, b: q.ob },
                    axis: Axis::B,
                    step: s,
                }),
                (sa, sb) if sa == sb => rays.push(Ray {
                    origin: IdemPoint { a: q.oa, b: q.ob },
                    axis: Axis::Both,
                    step: sa,
                }),
                (sa, sb) => {
                    // Unequal steps fall outside the ray vocabulary. Tile the
                    // grid exactly with Both-rays of step lcm(sa, sb), one
                    // per residue within an lcm-by-lcm block.
                    let l = lcm(sa, sb);
                    for i in 0..(l / sa) {
                        for j in 0..(l / sb) {
                            rays.push(Ray {
                                origin: IdemPoint {
                                    a: q.oa + i * sa,
                                    b: q.ob + j * sb,
                                },
                                axis: Axis::Both,
                                step: l,
                            });
                        }
                    }
                }
            }
        }
        PeriodicSet {
            cells,
            rays,
            period: period.max(1),
        }
    }

    /// O(cells + rays) membership test.
    pub fn contains(&self, p: IdemPoint) -> bool {
        if self.cells.contains(&p) {
            return true;
        }
        self.quadrants().iter().any(|q| q.contains(p))
    }

    /// Union of descriptions; the declared period is the lcm of the inputs'.
    pub fn union(&self, other: &PeriodicSet) -> PeriodicSet {
        let mut cells = self.cells.clone();
        cells.extend(other.cells.iter().copied());
        let mut rays = self.rays.clone();
        rays.extend(other.rays.iter().copied());
        PeriodicSet {
            cells,
            rays,
            period: lcm(self.period, other.period),
        }
    }

    /// Largest coordinate appearing in a base cell or ray origin.
    pub fn base_extent(&self) -> u64 {
        let mut m = 0;
        for c in &self.cells {
            m = m.max(c.a).max(c.b);
        }
        for r in &self.rays {
            m = m.max(r.origin.a).max(r.origin.b);
        }
        m
    }

    /// All members within `[0, amax] x [0, bmax]`.
    pub fn points_within(&self, amax: u64, bmax: u64) -> BTreeSet<IdemPoint> {
        let mut out = BTreeSet::new();
        for q in self.quadrants() {
            let mut a = q.oa;
            while a <= amax {
                let mut b = q.ob;
                while b <= bmax {
                    if a + b >= 1 {
                        out.insert(IdemPoint { a, b });
                    }
                    if q.sb == 0 {
                        break;
                    }
                    b += q.sb;
                }
                if q.sa == 0 {
                    break;
                }
                a += q.sa;
            }
        }
        out
    }

    /// Members with no other member dominating them from below in both
    /// coordinates; these are the maximal idempotents. The result is an
    /// antichain, and it is finite because every non-origin ray point is
    /// dominated by its origin.
    pub fn maximal_elements(&self) -> Vec<IdemPoint> {
        let mut candidates: BTreeSet<IdemPoint> = self.cells.clone();
        for r in &self.rays {
            candidates.insert(r.origin);
        }
        let mut out: Vec<IdemPoint> = candidates
            .iter()
            .filter(|e| !candidates.iter().any(|o| o != *e && e.dominates(*o)))
            .copied()
            .collect();
        out.sort();
        out
    }

    /// Checks the periodicity condition on `[0, box_side]^2`: every member
    /// must keep both of its `q`-translates inside the set.
    pub fn verify_period(&self, q: u64, box_side: u64) -> Result<bool> {
        let need = self.base_extent() + 2 * q;
        if box_side < need {
            return Err(Fi1Error::BoxTooSmall {
                got: box_side,
                need,
            });
        }
        for p in self.points_within(box_side, box_side) {
            let ta = IdemPoint { a: p.a + q, b: p.b };
            let tb = IdemPoint { a: p.a, b: p.b + q };
            if !self.contains(ta) || !self.contains(tb) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Membership equivalence, decided on a box large enough for both
    /// descriptions' declared periods and base cells.
    pub fn membership_equal(&self, other: &PeriodicSet) -> bool {
        let side =
            2 * lcm(self.period, other.period) + self.base_extent().max(other.base_extent()) + 1;
        self.points_within(side, side) == other.points_within(side, side)
    }

    /// Meet closure: closes the description under coordinatewise maxima.
    /// Distributivity reduces this to meets of subsets of primitives, which
    /// stay in quadrant form.
    pub fn meet_closure(&self) -> PeriodicSet {
        let primitives = self.quadrants();
        let mut closed: Vec<Quadrant> = primitives.clone();
        // Meets of k primitives arise after k-1 binary rounds; n primitives
        // need at most n rounds to stabilize.
        for _ in 0..primitives.len() {
            let mut fresh = Vec::new();
            for q in &closed {
                for p in &primitives {
                    for m in meet_quadrants(*q, *p) {
                        if !closed.contains(&m) && !fresh.contains(&m) {
                            fresh.push(m);
                        }
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            closed.extend(fresh);
        }
        PeriodicSet::from_quadrants(closed, self.period)
    }

    /// Restriction to members dominating at least one corner (both
    /// coordinates at least the corner's). Exact on quadrants.
    pub fn restrict_dominating(&self, corners: &[IdemPoint]) -> PeriodicSet {
        let mut quads = Vec::new();
        for q in self.quadrants() {
            for c in corners {
                if let Some(r) = restrict_quadrant(q, *c) {
                    if !quads.contains(&r) {
                        quads.push(r);
                    }
                }
            }
        }
        PeriodicSet::from_quadrants(quads, self.period)
    }

    /// Splits the members that dominate no corner into a verdict: finitely
    /// many (listed exactly) or infinitely many (with an infinite witness
    /// family included in the difference).
    pub fn complement_of_domination(&self, corners: &[IdemPoint]) -> DominationComplement {
        let min_a = corners.iter().map(|c| c.a).min().unwrap_or(u64::MAX);
        let min_b = corners.iter().map(|c| c.b).min().unwrap_or(u64::MAX);
        let mut witness_rays: Vec<Ray> = Vec::new();
        for q in self.quadrants() {
            // A column with a below every corner's a-threshold escapes all
            // corners regardless of b, and dually for rows.
            if q.sb > 0 {
                let mut a = q.oa;
                loop {
                    if a >= min_a {
                        break;
                    }
                    witness_rays.push(Ray {
                        origin: IdemPoint { a, b: q.ob },
                        axis: Axis::B,
                        step: q.sb,
                    });
                    if q.sa == 0 {
                        break;
                    }
                    a += q.sa;
                }
            }
            if q.sa > 0 {
                let mut b = q.ob;
                loop {
                    if b >= min_b {
                        break;
                    }
                    witness_rays.push(Ray {
                        origin: IdemPoint { a: q.oa, b },
                        axis: Axis::A,
                        step: q.sa,
                    });
                    if q.sb == 0 {
                        break;
                    }
                    b += q.sb;
                }
            }
        }
        if !witness_rays.is_empty() {
            return DominationComplement::Infinite(PeriodicSet {
                cells: BTreeSet::new(),
                rays: witness_rays,
                period: self.period,
            });
        }
        // No escaping line: every escaping member sits in a bounded region.
        let max_a = corners.iter().map(|c| c.a).max().unwrap_or(0);
        let max_b = corners.iter().map(|c| c.b).max().unwrap_or(0);
        let amax = max_a.max(self.base_extent());
        let bmax = max_b.max(self.base_extent());
        let pts = self
            .points_within(amax + 1, bmax + 1)
            .into_iter()
            .filter(|p| !corners.iter().any(|c| p.dominates(*c)))
            .collect();
        DominationComplement::Finite(pts)
    }
}

/// Outcome of [`PeriodicSet::complement_of_domination`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DominationComplement {
    Finite(BTreeSet<IdemPoint>),
    Infinite(PeriodicSet),
}

fn dedup_quadrants(quads: Vec<Quadrant>) -> Vec<Quadrant> {
    let mut out: Vec<Quadrant> = Vec::new();
    for q in quads {
        if !out.contains(&q) {
            out.push(q);
        }
    }
    out
}

/// Coordinatewise-max meet of two quadrants, as a union of quadrants.
pub(crate) fn meet_quadrants(p: Quadrant, q: Quadrant) -> Vec<Quadrant> {
    let a_parts = max_combine(
        Prog {
            start: p.oa,
            step: p.sa,
        },
        Prog {
            start: q.oa,
            step: q.sa,
        },
    );
    let b_parts = max_combine(
        Prog {
            start: p.ob,
            step: p.sb,
        },
        Prog {
            start: q.ob,
            step: q.sb,
        },
    );
    let mut out = Vec::new();
    for ap in &a_parts {
        for bp in &b_parts {
            out.push(Quadrant {
                oa: ap.start,
                ob: bp.start,
                sa: ap.step,
                sb: bp.step,
            });
        }
    }
    dedup_quadrants(out)
}

/// Points of `q` dominating `corner`, again a quadrant (or nothing).
fn restrict_quadrant(q: Quadrant, corner: IdemPoint) -> Option<Quadrant> {
    let a = Prog {
        start: q.oa,
        step: q.sa,
    }
    .truncate(corner.a)?;
    let b = Prog {
        start: q.ob,
        step: q.sb,
    }
    .truncate(corner.b)?;
    Some(Quadrant {
        oa: a.start,
        ob: b.start,
        sa: a.step,
        sb: b.step,
    })
}

/// The exact idempotent semilattice of the monogenic subsemigroup generated
/// by a non-idempotent `u`: the meet closure of `{u^n u^-n, u^-n u^n}`.
///
/// For `u = (-a, p, b)` with `p > 0` this is
/// `{(a + m|p|, b + n|p|)} ∪ {(a + m|p|, b - |p|) : m >= 1}`; negative
/// displacement is handled through the mirror automorphism. The closed form
/// is checked against the brute-force meet closure in the test suite.
pub fn monogenic_idempotents(u: &Triple) -> Result<PeriodicSet> {
    if u.is_idempotent() {
        return Err(Fi1Error::IdempotentInput(u.to_string()));
    }
    let a = u.a() as u64;
    let b = u.b() as u64;
    let s = u.p().unsigned_abs();
    let mut rays = vec![Ray {
        origin: IdemPoint { a, b },
        axis: Axis::Both,
        step: s,
    }];
    if u.p() > 0 {
        rays.push(Ray {
            origin: IdemPoint { a: a + s, b: b - s },
            axis: Axis::A,
            step: s,
        });
    } else {
        rays.push(Ray {
            origin: IdemPoint { a: a - s, b: b + s },
            axis: Axis::B,
            step: s,
        });
    }
    Ok(PeriodicSet {
        cells: BTreeSet::new(),
        rays,
        period: s,
    })
}

/// The idempotent semilattice of the whole monogenic free inverse
/// semigroup: every point except `(0, 0)`.
pub fn full_semilattice() -> PeriodicSet {
    monogenic_idempotents(&Triple::generator()).expect("generator is non-idempotent")
}
