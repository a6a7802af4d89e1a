//! Decision procedures for inverse subsemigroups of the monogenic free
//! inverse semigroup.
//!
//! A subsemigroup is specified by finitely many non-idempotent generators
//! plus an optional eventually-periodic family of idempotent generators.
//! Everything reduces to *bounded closure*: since the D-index `a + b` never
//! decreases under multiplication, the elements of D-index at most `M` are
//! exactly the closure of the seeds of D-index at most `M` under products
//! pruned at `M`. That makes membership, the structure parameters, the
//! finite generating sets and the finiteness tests exact computations.

use crate::error::{Fi1Error, Result};
use crate::eset::{lcm, monogenic_idempotents, DominationComplement, IdemPoint, PeriodicSet};
use crate::triple::Triple;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Generating data for an inverse subsemigroup: non-idempotent generators
/// and an optional idempotent family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsemigroupSpec {
    gens: Vec<Triple>,
    idems: Option<PeriodicSet>,
}

impl SubsemigroupSpec {
    pub fn new(gens: Vec<Triple>, idems: Option<PeriodicSet>) -> Result<Self> {
        for g in &gens {
            if g.is_idempotent() {
                return Err(Fi1Error::IdempotentGenerator(g.to_string()));
            }
        }
        let mut deduped = Vec::new();
        for g in gens {
            if !deduped.contains(&g) {
                deduped.push(g);
            }
        }
        Ok(SubsemigroupSpec {
            gens: deduped,
            idems,
        })
    }

    /// Splits an arbitrary finite element set into a spec: non-idempotents
    /// become generators, idempotents become base cells, and `extra_idems`
    /// is united on top.
    pub fn from_elements<I: IntoIterator<Item = Triple>>(
        elements: I,
        extra_idems: Option<PeriodicSet>,
    ) -> Result<Self> {
        let mut gens = Vec::new();
        let mut cells = BTreeSet::new();
        for t in elements {
            if t.is_idempotent() {
                cells.insert(IdemPoint::new(t.a() as u64, t.b() as u64)?);
            } else {
                gens.push(t);
            }
        }
        let mut idems = if cells.is_empty() {
            None
        } else {
            Some(PeriodicSet::from_cells(cells))
        };
        if let Some(extra) = extra_idems {
            idems = Some(match idems {
                Some(s) => s.union(&extra),
                None => extra,
            });
        }
        SubsemigroupSpec::new(gens, idems)
    }

    pub fn gens(&self) -> &[Triple] {
        &self.gens
    }

    pub fn idems(&self) -> Option<&PeriodicSet> {
        self.idems.as_ref()
    }

    /// Generators and their inverses, in witness-search order.
    pub fn signed_gens(&self) -> Vec<Triple> {
        let mut out = self.gens.clone();
        out.extend(self.gens.iter().map(Triple::inv));
        let mut deduped = Vec::new();
        for g in out {
            if !deduped.contains(&g) {
                deduped.push(g);
            }
        }
        deduped
    }

    fn max_gen_dindex(&self) -> u64 {
        self.gens.iter().map(Triple::dindex).max().unwrap_or(0)
    }
}

impl<'de> Deserialize<'de> for SubsemigroupSpec {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            gens: Vec<Triple>,
            #[serde(default)]
            idems: Option<PeriodicSet>,
        }
        let raw = Raw::deserialize(de)?;
        SubsemigroupSpec::new(raw.gens, raw.idems).map_err(serde::de::Error::custom)
    }
}

/// Exactly the elements of the subsemigroup with D-index at most `max_d`.
///
/// Seeds are the generators, their inverses, and the idempotent family
/// members of D-index at most `max_d`; the closure under products prunes
/// anything whose D-index exceeds the bound, which is exact because the
/// D-index never decreases under multiplication.
pub fn bounded_closure(spec: &SubsemigroupSpec, max_d: u64) -> BTreeSet<Triple> {
    let mut set: BTreeSet<Triple> = BTreeSet::new();
    let mut queue: Vec<Triple> = Vec::new();
    let push = |t: Triple, set: &mut BTreeSet<Triple>, queue: &mut Vec<Triple>| {
        if t.dindex() <= max_d && set.insert(t) {
            queue.push(t);
        }
    };
    for g in &spec.gens {
        push(*g, &mut set, &mut queue);
        push(g.inv(), &mut set, &mut queue);
    }
    if let Some(idems) = &spec.idems {
        for p in idems.points_within(max_d, max_d) {
            if p.a + p.b <= max_d {
                push(p.to_triple(), &mut set, &mut queue);
            }
        }
    }
    while let Some(t) = queue.pop() {
        let known: Vec<Triple> = set.iter().copied().collect();
        for u in known {
            for prod in [t.mul(&u), u.mul(&t)] {
                if prod.dindex() <= max_d && set.insert(prod) {
                    queue.push(prod);
                }
            }
        }
    }
    set
}

/// Exact membership: reduce to the bounded closure at the element's own
/// D-index.
pub fn member(spec: &SubsemigroupSpec, t: &Triple) -> bool {
    bounded_closure(spec, t.dindex()).contains(t)
}

/// Bounded closure of the subsemigroup generated by all non-idempotent
/// elements. Its non-idempotent part agrees with the full closure's; only
/// idempotents can differ.
pub fn sbar_bounded_closure(spec: &SubsemigroupSpec, max_d: u64) -> BTreeSet<Triple> {
    let full = bounded_closure(spec, max_d);
    let mut set: BTreeSet<Triple> = full
        .iter()
        .filter(|t| !t.is_idempotent())
        .copied()
        .collect();
    let mut queue: Vec<Triple> = set.iter().copied().collect();
    while let Some(t) = queue.pop() {
        let known: Vec<Triple> = set.iter().copied().collect();
        for u in known {
            for prod in [t.mul(&u), u.mul(&t)] {
                if prod.dindex() <= max_d && set.insert(prod) {
                    queue.push(prod);
                }
            }
        }
    }
    set
}

/// Structure parameters of the subsemigroup generated by the non-idempotent
/// generators: extremal reaches, the displacement gcd, and witnesses of the
/// extremal shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StructureParams {
    pub a_min: u64,
    pub b_min: u64,
    pub p: u64,
    pub alpha: Triple,
    pub beta: Triple,
    pub n: u64,
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

/// Default cap for the iterative-deepening witness search.
pub const DEEPENING_CAP: u64 = 64;

/// Computes the structure parameters.
///
/// The extremal reaches come from the generators and their inverses alone:
/// both reaches of a product dominate the first factor's, so the minima over
/// the whole subsemigroup are attained on the generators. The witnesses
/// `alpha = (-a_min, p, b_alpha)` and `beta = (-a_beta, -p, b_min)` are found
/// by doubling the closure bound; existence is guaranteed but unbounded, so
/// the search errors out past the cap.
pub fn structure_params(spec: &SubsemigroupSpec) -> Result<StructureParams> {
    structure_params_capped(spec, DEEPENING_CAP)
}

pub fn structure_params_capped(spec: &SubsemigroupSpec, cap: u64) -> Result<StructureParams> {
    if spec.gens.is_empty() {
        return Err(Fi1Error::EmptyGenerators);
    }
    let signed = spec.signed_gens();
    let a_min = signed.iter().map(|g| g.a() as u64).min().unwrap();
    let b_min = signed.iter().map(|g| g.b() as u64).min().unwrap();
    let p = spec
        .gens
        .iter()
        .fold(0u64, |acc, g| gcd_u64(acc, g.p().unsigned_abs()));
    let mut bound = spec.max_gen_dindex().max(1);
    loop {
        let closure = bounded_closure(spec, bound);
        let alpha = closure
            .iter()
            .filter(|t| t.a() as u64 == a_min && t.p() == p as i64)
            .min_by_key(|t| t.b())
            .copied();
        let beta = closure
            .iter()
            .filter(|t| t.b() as u64 == b_min && t.p() == -(p as i64))
            .min_by_key(|t| t.a())
            .copied();
        if let (Some(alpha), Some(beta)) = (alpha, beta) {
            let n = beta.a() as u64 + alpha.b() as u64;
            return Ok(StructureParams {
                a_min,
                b_min,
                p,
                alpha,
                beta,
                n,
            });
        }
        if bound >= cap {
            return Err(Fi1Error::DeepeningCapExceeded(cap));
        }
        bound = (bound * 2).min(cap);
    }
}

/// Construction record for the finite covering of the idempotent
/// semilattice: the maximal idempotents of the ideal part, their
/// non-idempotent witnesses, the common period, the anchor covering
/// families, and the residue-slice maxima with their witnesses. `t1` is the
/// resulting finite witness set; together with the meet closure of the
/// idempotent generators its monogenic families cover the semilattice.
#[derive(Debug, Clone, Serialize)]
pub struct SemilatticeCover {
    pub maximal_idems: Vec<IdemPoint>,
    pub witnesses: Vec<Triple>,
    pub q: u64,
    pub anchor_families: PeriodicSet,
    pub slice_maxima: BTreeMap<String, Vec<IdemPoint>>,
    pub slice_witnesses: BTreeMap<String, Triple>,
    pub t1: BTreeSet<Triple>,
}

fn slice_key(i: usize, r: u64, s: u64) -> String {
    format!("{i}:{r}:{s}")
}

fn slice_witness_key(i: usize, r: u64, s: u64, e: IdemPoint) -> String {
    format!("{i}:{r}:{s}:{},{}", e.a, e.b)
}

/// First signed generator whose R-idempotent is dominated by `e`; the
/// product `e * g` is then a non-idempotent R-related to `e`.
fn witness_for(e: IdemPoint, signed: &[Triple]) -> Option<Triple> {
    for g in signed {
        let gg = g.mul(&g.inv());
        let corner = IdemPoint::new(gg.a() as u64, gg.b() as u64).expect("valid corner");
        if e.dominates(corner) {
            let w = e.to_triple().mul(g);
            debug_assert!(!w.is_idempotent());
            debug_assert_eq!(w.mul(&w.inv()), e.to_triple());
            return Some(w);
        }
    }
    None
}

fn antichain_minima(points: &BTreeSet<IdemPoint>) -> Vec<IdemPoint> {
    let mut out: Vec<IdemPoint> = points
        .iter()
        .filter(|e| !points.iter().any(|o| o != *e && e.dominates(*o)))
        .copied()
        .collect();
    out.sort();
    out
}

/// Builds and certifies a description of the idempotent semilattice of the
/// subsemigroup, returning the construction trace alongside.
pub fn semilattice_with_trace(
    spec: &SubsemigroupSpec,
    box_side: u64,
) -> Result<(PeriodicSet, SemilatticeCover)> {
    if spec.gens.is_empty() {
        return Err(Fi1Error::EmptyGenerators);
    }
    let need = 2 * spec.max_gen_dindex();
    if box_side < need {
        return Err(Fi1Error::BoxTooSmall {
            got: box_side,
            need,
        });
    }
    let signed = spec.signed_gens();
    let q = spec
        .gens
        .iter()
        .fold(1u64, |acc, g| lcm(acc, g.p().unsigned_abs()));

    // Idempotent generators enter through their meet closure.
    let idems_mc = spec.idems.as_ref().map(|s| s.meet_closure());

    // An idempotent belongs to the ideal generated by the non-idempotents
    // exactly when it dominates some generator's R-idempotent corner;
    // everything else is a meet of idempotent generators and lives in the
    // meet closure above. The covering recipe runs on the ideal part, where
    // every anchor has a witness.
    let corners = sbar_corners(spec);
    let ideal_points = |closure: &BTreeSet<Triple>| -> BTreeSet<IdemPoint> {
        closure
            .iter()
            .filter(|t| t.is_idempotent())
            .map(|t| IdemPoint::new(t.a() as u64, t.b() as u64).unwrap())
            .filter(|e| corners.iter().any(|c| e.dominates(*c)))
            .collect()
    };

    // The slice search box must fit inside the region the closure knows
    // completely, so widen until the anchors' extent plus two periods fits
    // (a wider closure can expose further anchors, hence the fixpoint loop;
    // certification still guards the final answer).
    let mut search_side = box_side;
    let (closure, ideal_box) = loop {
        let closure = bounded_closure(spec, 2 * search_side);
        let ideal_box = ideal_points(&closure);
        let extent = antichain_minima(&ideal_box)
            .iter()
            .map(|e| e.a.max(e.b))
            .max()
            .unwrap_or(0);
        if extent + 2 * q <= search_side || search_side >= 8 * box_side.max(1) {
            break (closure, ideal_box);
        }
        search_side = search_side.max(extent + 2 * q);
    };

    let maximal = antichain_minima(&ideal_box);
    let witnesses: Vec<Triple> = maximal
        .iter()
        .map(|e| witness_for(*e, &signed).expect("ideal-part idempotents have witnesses"))
        .collect();

    let mut anchor_families = PeriodicSet::empty();
    let mut t1: BTreeSet<Triple> = BTreeSet::new();
    for w in &witnesses {
        anchor_families = anchor_families.union(&monogenic_idempotents(w)?);
        t1.insert(*w);
    }

    // Residue slices relative to each anchor; the (0,0) residue is already
    // covered by the anchor's own family.
    let slice_side = maximal.iter().map(|e| e.a.max(e.b)).max().unwrap_or(0) + 2 * q;
    let mut slice_maxima: BTreeMap<String, Vec<IdemPoint>> = BTreeMap::new();
    let mut slice_witnesses: BTreeMap<String, Triple> = BTreeMap::new();
    let mut y_families = PeriodicSet::empty();
    for (i, anchor) in maximal.iter().enumerate() {
        for r in 0..q {
            for s in 0..q {
                if r == 0 && s == 0 {
                    continue;
                }
                let members: BTreeSet<IdemPoint> = ideal_box
                    .iter()
                    .filter(|e| {
                        e.a <= slice_side
                            && e.b <= slice_side
                            && e.dominates(*anchor)
                            && (e.a - anchor.a) % q == r
                            && (e.b - anchor.b) % q == s
                    })
                    .copied()
                    .collect();
                if members.is_empty() {
                    continue;
                }
                let maxima = antichain_minima(&members);
                slice_maxima.insert(slice_key(i, r, s), maxima.clone());
                for e in maxima {
                    let w = e.to_triple().mul(&witnesses[i]);
                    debug_assert!(!w.is_idempotent());
                    debug_assert_eq!(w.mul(&w.inv()), e.to_triple());
                    slice_witnesses.insert(slice_witness_key(i, r, s, e), w);
                    y_families = y_families.union(&monogenic_idempotents(&w)?);
                    t1.insert(w);
                }
            }
        }
    }

    let mut description = anchor_families.union(&y_families);
    if let Some(mc) = &idems_mc {
        description = description.union(mc);
    }

    // Certify point by point against exact membership on the box.
    for a in 0..=box_side {
        for b in 0..=box_side {
            if a + b == 0 {
                continue;
            }
            let p = IdemPoint::new(a, b)?;
            let in_s = closure.contains(&p.to_triple());
            if description.contains(p) != in_s {
                return Err(Fi1Error::CertificationFailed(a, b));
            }
        }
    }

    let trace = SemilatticeCover {
        maximal_idems: maximal,
        witnesses,
        q,
        anchor_families,
        slice_maxima,
        slice_witnesses,
        t1,
    };
    Ok((description, trace))
}

/// Certified description of the idempotents of the subsemigroup, as points.
pub fn idempotent_semilattice(spec: &SubsemigroupSpec, box_side: u64) -> Result<PeriodicSet> {
    semilattice_with_trace(spec, box_side).map(|(d, _)| d)
}

/// The finite generating data: `t1` covers the idempotent semilattice
/// through monogenic subsemigroups, `t2` is the full slice of D-index at
/// most `N`. For a spec without idempotent generators these generate the
/// subsemigroup outright; in general they generate it together with the
/// idempotent semilattice.
#[derive(Debug, Clone, Serialize)]
pub struct GeneratingData {
    pub trace: SemilatticeCover,
    pub t2: BTreeSet<Triple>,
    pub params: StructureParams,
}

pub fn finite_generators(spec: &SubsemigroupSpec) -> Result<GeneratingData> {
    let params = structure_params(spec)?;
    let idem_extent = spec
        .idems
        .as_ref()
        .map(|s| s.base_extent() + 2 * s.period)
        .unwrap_or(0);
    let box_side = (2 * spec.max_gen_dindex()).max(params.n).max(idem_extent);
    finite_generators_with_box(spec, box_side)
}

pub fn finite_generators_with_box(
    spec: &SubsemigroupSpec,
    box_side: u64,
) -> Result<GeneratingData> {
    let params = structure_params(spec)?;
    let (_, trace) = semilattice_with_trace(spec, box_side)?;
    let t2 = bounded_closure(spec, params.n);
    debug_assert!(t2.contains(&params.alpha) && t2.contains(&params.beta));
    Ok(GeneratingData { trace, t2, params })
}

/// All elements of the R-class `(a, b)` of the subsemigroup, for a class of
/// D-index above `N`, built purely from the class idempotent and the
/// witnesses `alpha`, `beta` by single-step displacement moves.
///
/// Each upward step multiplies by `beta^-1` or `alpha`, each downward step
/// by `alpha^-1` or `beta`, according to the displacement case split; every
/// product is checked to stay in the R-class.
pub fn rclass_slice(
    spec: &SubsemigroupSpec,
    params: &StructureParams,
    a: u64,
    b: u64,
) -> Result<Vec<Triple>> {
    if a + b <= params.n {
        return Err(Fi1Error::BoxTooSmall {
            got: a + b,
            need: params.n + 1,
        });
    }
    let eps = Triple::new(a as i64, 0, b as i64)?;
    if !member(spec, &eps) {
        return Err(Fi1Error::NotInSbar(a, b));
    }
    // The stepping argument lives in the ideal generated by the
    // non-idempotents; a class idempotent outside it (possible only with
    // idempotent-family generators) is alone in its R-class and carries no
    // reach decomposition over the extremal parameters.
    let in_ideal = sbar_corners(spec).iter().any(|c| {
        IdemPoint::new(a, b)
            .map(|e| e.dominates(*c))
            .unwrap_or(false)
    });
    if !in_ideal {
        return Err(Fi1Error::NotInSbar(a, b));
    }
    let p = params.p as i64;
    debug_assert!(p > 0);
    let x = ((a - params.a_min) / params.p) as i64;
    let y = ((b - params.b_min) / params.p) as i64;
    let a_beta = params.beta.a();
    let b_alpha = params.alpha.b();
    let alpha = params.alpha;
    let beta = params.beta;

    let mut out = vec![eps];
    // Climb the displacement ladder.
    let mut u = eps;
    let mut qd = 0i64;
    while qd < y {
        let qp = qd * p;
        let next = if -(a as i64) + a_beta <= qp {
            u.mul(&beta.inv())
        } else {
            u.mul(&alpha)
        };
        let expect = Triple::new(a as i64, (qd + 1) * p, b as i64)?;
        if next != expect {
            return Err(Fi1Error::CertificationFailed(a, b));
        }
        out.push(next);
        u = next;
        qd += 1;
    }
    // Descend it.
    let mut u = eps;
    let mut qd = 0i64;
    while qd > -x {
        let qp = qd * p;
        let next = if qp <= b as i64 - b_alpha {
            u.mul(&alpha.inv())
        } else {
            u.mul(&beta)
        };
        let expect = Triple::new(a as i64, (qd - 1) * p, b as i64)?;
        if next != expect {
            return Err(Fi1Error::CertificationFailed(a, b));
        }
        out.push(next);
        u = next;
        qd -= 1;
    }
    out.sort();
    Ok(out)
}

/// Verdict of the finiteness test: the complement of the ideal generated by
/// the non-idempotents is either a finite explicit set or contains an
/// infinite periodic family.
#[derive(Debug, Clone, PartialEq)]
pub enum SbarComplement {
    Finite(BTreeSet<Triple>),
    Infinite(PeriodicSet),
}

/// Corners `g g^-1` over the signed generators; an idempotent lies in the
/// non-idempotent-generated ideal exactly when it dominates one of them.
fn sbar_corners(spec: &SubsemigroupSpec) -> Vec<IdemPoint> {
    let mut out = Vec::new();
    for g in spec.signed_gens() {
        let gg = g.mul(&g.inv());
        let c = IdemPoint::new(gg.a() as u64, gg.b() as u64).expect("valid corner");
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

/// Description of the idempotents of the subsemigroup generated by the
/// non-idempotent elements.
pub fn sbar_semilattice(spec: &SubsemigroupSpec, box_side: u64) -> Result<PeriodicSet> {
    let es = idempotent_semilattice(spec, box_side)?;
    Ok(es.restrict_dominating(&sbar_corners(spec)))
}

/// Computes `S minus S-bar` exactly. The difference consists of idempotents
/// only, and an idempotent lies in `S-bar` exactly when it dominates some
/// generator's R-idempotent, so the verdict reduces to a domination
/// complement over the certified semilattice description.
pub fn sbar_complement(spec: &SubsemigroupSpec, box_side: u64) -> Result<SbarComplement> {
    let es = idempotent_semilattice(spec, box_side)?;
    match es.complement_of_domination(&sbar_corners(spec)) {
        DominationComplement::Finite(pts) => Ok(SbarComplement::Finite(
            pts.into_iter().map(IdemPoint::to_triple).collect(),
        )),
        DominationComplement::Infinite(fam) => Ok(SbarComplement::Infinite(fam)),
    }
}

/// Finite generation test: the subsemigroup is finitely generated exactly
/// when `S minus S-bar` is finite.
pub fn is_finitely_generated(spec: &SubsemigroupSpec, box_side: u64) -> Result<bool> {
    if spec.gens.is_empty() {
        return Err(Fi1Error::EmptyGenerators);
    }
    Ok(matches!(
        sbar_complement(spec, box_side)?,
        SbarComplement::Finite(_)
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eset::{Axis, Ray};

    fn t(neg_a: i64, p: i64, b: i64) -> Triple {
        Triple::from_components(neg_a, p, b).unwrap()
    }

    fn pt(a: u64, b: u64) -> IdemPoint {
        IdemPoint::new(a, b).unwrap()
    }

    fn spec_x() -> SubsemigroupSpec {
        SubsemigroupSpec::new(vec![Triple::generator()], None).unwrap()
    }

    fn spec_u() -> SubsemigroupSpec {
        SubsemigroupSpec::new(vec![t(-1, 2, 3)], None).unwrap()
    }

    /// The running non-finitely-generated example: the left-edge idempotents
    /// together with (-1, 2, 3).
    fn spec_example() -> SubsemigroupSpec {
        let left_edge = PeriodicSet::new(
            BTreeSet::new(),
            vec![Ray {
                origin: pt(1, 0),
                axis: Axis::A,
                step: 1,
            }],
            1,
        );
        SubsemigroupSpec::new(vec![t(-1, 2, 3)], Some(left_edge)).unwrap()
    }

    /// Independent oracle: canonical forms of all generator-symbol products
    /// of length at most `len`, pruned at the D-bound (sound because the
    /// D-index of a prefix never exceeds the full product's).
    fn product_oracle(symbols: &[Triple], max_d: u64, len: usize) -> BTreeSet<Triple> {
        let mut layer: BTreeSet<Triple> = symbols
            .iter()
            .filter(|t| t.dindex() <= max_d)
            .copied()
            .collect();
        let mut all = layer.clone();
        for _ in 1..len {
            let mut next = BTreeSet::new();
            for w in &layer {
                for s in symbols {
                    let prod = w.mul(s);
                    if prod.dindex() <= max_d && !all.contains(&prod) {
                        next.insert(prod);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            all.extend(next.iter().copied());
            layer = next;
        }
        all
    }

    fn oracle_symbols(spec: &SubsemigroupSpec, max_d: u64) -> Vec<Triple> {
        let mut symbols = spec.signed_gens();
        if let Some(idems) = spec.idems() {
            for p in idems.points_within(max_d, max_d) {
                if p.a + p.b <= max_d {
                    symbols.push(p.to_triple());
                }
            }
        }
        symbols
    }

    #[test]
    fn rejects_idempotent_generators() {
        assert!(SubsemigroupSpec::new(vec![t(-1, 0, 2)], None).is_err());
    }

    #[test]
    fn closure_of_x_at_low_bounds() {
        let c1 = bounded_closure(&spec_x(), 1);
        let expected: BTreeSet<Triple> = [t(0, 1, 1), t(-1, -1, 0), t(0, 0, 1), t(-1, 0, 0)]
            .into_iter()
            .collect();
        assert_eq!(c1, expected);
        assert_eq!(bounded_closure(&spec_x(), 2).len(), 13);
    }

    #[test]
    fn closure_of_example_at_three() {
        let c = bounded_closure(&spec_example(), 3);
        let expected: BTreeSet<Triple> = [t(-1, 0, 0), t(-2, 0, 0), t(-3, 0, 0)]
            .into_iter()
            .collect();
        assert_eq!(c, expected);
    }

    #[test]
    fn closure_matches_product_oracle() {
        for (spec, max_d) in [
            (spec_x(), 5),
            (spec_u(), 6),
            (spec_example(), 6),
            (SubsemigroupSpec::new(vec![t(0, 2, 2)], None).unwrap(), 6),
        ] {
            let symbols = oracle_symbols(&spec, max_d);
            let oracle = product_oracle(&symbols, max_d, 24);
            assert_eq!(bounded_closure(&spec, max_d), oracle);
        }
    }

    #[test]
    fn closure_monotone_in_bound() {
        for spec in [spec_x(), spec_u(), spec_example()] {
            for m in 1..6 {
                let small = bounded_closure(&spec, m);
                let large = bounded_closure(&spec, m + 1);
                assert!(small.is_subset(&large));
                let restricted: BTreeSet<Triple> =
                    large.iter().filter(|t| t.dindex() <= m).copied().collect();
                assert_eq!(small, restricted);
            }
        }
    }

    #[test]
    fn member_examples() {
        let spec = spec_example();
        assert!(!member(&spec, &t(0, 0, 1)));
        assert!(member(&spec, &t(-5, 0, 0)));
        assert!(member(&spec, &t(-1, 2, 3)));
    }

    #[test]
    fn structure_params_fixtures() {
        let p = structure_params(&spec_u()).unwrap();
        assert_eq!(
            (p.a_min, p.b_min, p.p, p.alpha, p.beta, p.n),
            (1, 1, 2, t(-1, 2, 3), t(-3, -2, 1), 6)
        );

        let p = structure_params(&spec_x()).unwrap();
        assert_eq!(
            (p.a_min, p.b_min, p.p, p.alpha, p.beta, p.n),
            (0, 0, 1, t(0, 1, 1), t(-1, -1, 0), 2)
        );

        let sq = SubsemigroupSpec::new(vec![t(0, 2, 2)], None).unwrap();
        let p = structure_params(&sq).unwrap();
        assert_eq!(
            (p.a_min, p.b_min, p.p, p.alpha, p.beta, p.n),
            (0, 0, 2, t(0, 2, 2), t(-2, -2, 0), 4)
        );
    }

    #[test]
    fn structure_params_needs_generators() {
        let empty = SubsemigroupSpec::new(vec![], None).unwrap();
        assert_eq!(structure_params(&empty), Err(Fi1Error::EmptyGenerators));
    }

    #[test]
    fn semilattice_of_x_is_everything() {
        let es = idempotent_semilattice(&spec_x(), 8).unwrap();
        for a in 0..=8u64 {
            for b in 0..=8u64 {
                if a + b >= 1 {
                    assert!(es.contains(pt(a, b)), "missing ({a},{b})");
                }
            }
        }
    }

    #[test]
    fn semilattice_of_example() {
        let es = idempotent_semilattice(&spec_example(), 10).unwrap();
        assert!(!es.contains(pt(2, 4)));
        assert!(es.contains(pt(4, 3)));
        assert!(es.contains(pt(7, 0)));
        assert!(es.contains(pt(3, 1)));
        assert!(!es.contains(pt(1, 1)));
        assert!(!es.contains(pt(2, 1)));
    }

    #[test]
    fn semilattice_box_too_small() {
        assert!(matches!(
            idempotent_semilattice(&spec_u(), 3),
            Err(Fi1Error::BoxTooSmall { .. })
        ));
    }

    #[test]
    fn finite_generators_on_monogenic_fixture() {
        let gens = finite_generators(&spec_u()).unwrap();
        assert!(gens.t2.contains(&t(-1, 2, 3)));
        assert!(gens.t2.contains(&t(-3, -2, 1)));
        assert_eq!(gens.trace.maximal_idems, vec![pt(1, 3), pt(3, 1)]);
        for (e, w) in gens.trace.maximal_idems.iter().zip(&gens.trace.witnesses) {
            assert_eq!(w.mul(&w.inv()), e.to_triple());
        }
    }

    #[test]
    fn finite_generators_generate_bounded_slices() {
        // T1 and T2 regenerate the subsemigroup (adjoining the certified
        // semilattice when idempotent generators are present).
        for (spec, box_side) in [(spec_x(), 8u64), (spec_u(), 10), (spec_example(), 10)] {
            let out = finite_generators_with_box(&spec, box_side).unwrap();
            let es = idempotent_semilattice(&spec, box_side).unwrap();
            let n = out.params.n;
            let mut t1t2: Vec<Triple> = out.trace.t1.iter().copied().collect();
            t1t2.extend(out.t2.iter().copied());
            let left = SubsemigroupSpec::from_elements(t1t2, Some(es.clone())).unwrap();
            let right_idems = match spec.idems() {
                Some(i) => i.union(&es),
                None => es,
            };
            let right = SubsemigroupSpec::new(spec.gens().to_vec(), Some(right_idems)).unwrap();
            for m in 1..=(2 * n).min(12) {
                assert_eq!(
                    bounded_closure(&left, m),
                    bounded_closure(&right, m),
                    "closure mismatch at M={m}"
                );
            }
        }
    }

    #[test]
    fn rclass_slice_examples() {
        let px = structure_params(&spec_x()).unwrap();
        let got = rclass_slice(&spec_x(), &px, 1, 2).unwrap();
        let expected = vec![t(-1, -1, 2), t(-1, 0, 2), t(-1, 1, 2), t(-1, 2, 2)];
        assert_eq!(got, expected);

        let pu = structure_params(&spec_u()).unwrap();
        let got = rclass_slice(&spec_u(), &pu, 3, 5).unwrap();
        let disps: Vec<i64> = got.iter().map(|t| t.p()).collect();
        assert_eq!(disps, vec![-2, 0, 2, 4]);

        // Single climbing step from the class idempotent: multiplying by
        // the inverse of beta lifts the displacement by one period.
        let eps = t(-3, 0, 5);
        assert_eq!(eps.mul(&pu.beta.inv()), t(-3, 2, 5));
    }

    #[test]
    fn rclass_slice_matches_closure_slice() {
        let spec = spec_u();
        let params = structure_params(&spec).unwrap();
        let closure = bounded_closure(&spec, 10);
        let rclasses: BTreeSet<(u64, u64)> = closure
            .iter()
            .filter(|t| t.dindex() > params.n)
            .map(|t| t.green().rclass)
            .collect();
        assert!(!rclasses.is_empty());
        for (a, b) in rclasses {
            let got = rclass_slice(&spec, &params, a, b).unwrap();
            let slice: Vec<Triple> = closure
                .iter()
                .filter(|t| t.green().rclass == (a, b))
                .copied()
                .collect();
            assert_eq!(got, slice, "R-class ({a},{b})");
            // Refined displacement bounds.
            let x = ((a - params.a_min) / params.p) as i64;
            let y = ((b - params.b_min) / params.p) as i64;
            for u in &got {
                let qd = u.p() / params.p as i64;
                assert!(-x <= qd && qd <= y);
            }
        }
    }

    #[test]
    fn rclass_slice_rejects_low_dindex() {
        let params = structure_params(&spec_u()).unwrap();
        assert!(rclass_slice(&spec_u(), &params, 1, 3).is_err());
    }

    #[test]
    fn rclass_slice_on_mixed_spec() {
        // Inside the ideal part the stepping set matches the closure slice;
        // a class idempotent outside it (the left-edge ray) is rejected.
        let spec = spec_example();
        let params = structure_params(&spec).unwrap();
        let closure = bounded_closure(&spec, 8);
        let got = rclass_slice(&spec, &params, 5, 3).unwrap();
        let slice: Vec<Triple> = closure
            .iter()
            .filter(|t| t.green().rclass == (5, 3))
            .copied()
            .collect();
        assert_eq!(got, slice);
        assert!(matches!(
            rclass_slice(&spec, &params, 7, 0),
            Err(Fi1Error::NotInSbar(7, 0))
        ));
    }

    #[test]
    fn sbar_complement_fixtures() {
        match sbar_complement(&spec_example(), 10).unwrap() {
            SbarComplement::Infinite(fam) => {
                assert!(fam.contains(pt(1, 0)));
                assert!(fam.contains(pt(6, 0)));
            }
            other => panic!("expected infinite complement, got {other:?}"),
        }

        match sbar_complement(&spec_x(), 8).unwrap() {
            SbarComplement::Finite(pts) => assert!(pts.is_empty()),
            other => panic!("expected empty complement, got {other:?}"),
        }

        // Adjoining (1,0) to the free generator changes nothing: it already
        // equals x^-1 x.
        let with_idem = SubsemigroupSpec::new(
            vec![Triple::generator()],
            Some(PeriodicSet::from_cells([pt(1, 0)])),
        )
        .unwrap();
        match sbar_complement(&with_idem, 8).unwrap() {
            SbarComplement::Finite(pts) => assert!(pts.is_empty()),
            other => panic!("expected empty complement, got {other:?}"),
        }
    }

    #[test]
    fn finite_generation_fixtures() {
        assert!(!is_finitely_generated(&spec_example(), 10).unwrap());
        assert!(is_finitely_generated(&spec_x(), 8).unwrap());
        let eu = idempotent_semilattice(&spec_u(), 10).unwrap();
        let with_own_idems = SubsemigroupSpec::new(vec![t(-1, 2, 3)], Some(eu)).unwrap();
        assert!(is_finitely_generated(&with_own_idems, 10).unwrap());
    }

    #[test]
    fn sbar_closure_is_ideal_slice() {
        // Products of closure elements with ideal elements stay in the
        // ideal's closure at the product's own D-bound.
        for spec in [spec_u(), spec_example()] {
            let s = bounded_closure(&spec, 6);
            let sbar = sbar_bounded_closure(&spec, 6);
            for x in &s {
                for y in &sbar {
                    for prod in [x.mul(y), y.mul(x)] {
                        let bound = prod.dindex();
                        assert!(
                            sbar_bounded_closure(&spec, bound).contains(&prod),
                            "ideal violated at {x} * {y}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn displacement_divisibility() {
        // Every element's displacement is a multiple of the gcd; the shape
        // bounds over the extremal reaches hold on the non-idempotent part
        // (idempotent generators may sit outside them).
        for spec in [spec_x(), spec_u(), spec_example()] {
            let params = structure_params(&spec).unwrap();
            for u in bounded_closure(&spec, 8) {
                assert_eq!(u.p().rem_euclid(params.p as i64), 0);
            }
            for u in sbar_bounded_closure(&spec, 8) {
                assert!(u.a() as u64 >= params.a_min && u.b() as u64 >= params.b_min);
                let n = u.a() as u64 - params.a_min;
                let m = u.b() as u64 - params.b_min;
                assert!(
                    -(n as i64) <= u.p() && u.p() <= m as i64,
                    "shape bound at {u}"
                );
                // Refined bound: offsets split into period multiples plus
                // residues, and the displacement quotient fits the multiples.
                let x = (n / params.p) as i64;
                let y = (m / params.p) as i64;
                let qd = u.p() / params.p as i64;
                assert!(-x <= qd && qd <= y, "refined bound at {u}");
            }
        }
    }
}
