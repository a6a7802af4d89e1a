//! Builders for presentations of inverse subsemigroups: truncated
//! Cayley-table presentations of the idempotent semilattice, the
//! amalgamated presentation linking it to the non-idempotent part, and the
//! conjugation presentation that needs only finitely many words over the
//! non-idempotent generators.
//!
//! The idempotent-indexed relation families are infinite; every builder
//! materializes them per idempotent box and reports what was omitted, so a
//! truncation is always visible in the output.

use crate::error::{Fi1Error, Result};
use crate::eset::IdemPoint;
use crate::stephen::{Presentation, ProbeInstance};
use crate::subsemigroup::{idempotent_semilattice, SubsemigroupSpec};
use crate::triple::{eval_word, Triple};
use crate::word::{Sign, Word};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// Letter names for the idempotent symbols `x_e`, the generator symbols
/// `y_a`, and any auxiliary letters a caller-supplied presentation brings.
#[derive(Debug, Clone, Serialize)]
pub struct SymbolTable {
    e_symbols: BTreeMap<IdemPoint, String>,
    a_symbols: Vec<(Triple, String)>,
    y_extra: BTreeSet<String>,
}

impl SymbolTable {
    /// Names every idempotent point in the box and every generator. A single
    /// generator is named `y`, several are `y0`, `y1`, ...
    pub fn for_spec(spec: &SubsemigroupSpec, box_side: u64) -> SymbolTable {
        let mut e_symbols = BTreeMap::new();
        for a in 0..=box_side {
            for b in 0..=box_side {
                if a + b == 0 {
                    continue;
                }
                let e = IdemPoint::new(a, b).unwrap();
                e_symbols.insert(e, format!("xa{a}b{b}"));
            }
        }
        let gens = spec.gens();
        let a_symbols = if gens.len() == 1 {
            vec![(gens[0], "y".to_string())]
        } else {
            gens.iter()
                .enumerate()
                .map(|(i, g)| (*g, format!("y{i}")))
                .collect()
        };
        SymbolTable {
            e_symbols,
            a_symbols,
            y_extra: BTreeSet::new(),
        }
    }

    pub fn with_extra<I: IntoIterator<Item = String>>(mut self, extra: I) -> SymbolTable {
        self.y_extra = extra.into_iter().collect();
        self
    }

    pub fn e_letter(&self, e: IdemPoint) -> Result<&str> {
        self.e_symbols
            .get(&e)
            .map(String::as_str)
            .ok_or(Fi1Error::MissingSymbol(e.a, e.b))
    }

    pub fn a_letter(&self, t: &Triple) -> Option<&str> {
        self.a_symbols
            .iter()
            .find(|(g, _)| g == t)
            .map(|(_, n)| n.as_str())
    }

    pub fn e_letters(&self) -> Vec<String> {
        self.e_symbols.values().cloned().collect()
    }

    pub fn a_letters(&self) -> Vec<String> {
        self.a_symbols.iter().map(|(_, n)| n.clone()).collect()
    }

    pub fn y_extra(&self) -> &BTreeSet<String> {
        &self.y_extra
    }

    pub fn point_of(&self, letter: &str) -> Option<IdemPoint> {
        self.e_symbols
            .iter()
            .find(|(_, n)| n.as_str() == letter)
            .map(|(e, _)| *e)
    }

    pub fn gen_of(&self, letter: &str) -> Option<Triple> {
        self.a_symbols
            .iter()
            .find(|(_, n)| n.as_str() == letter)
            .map(|(g, _)| *g)
    }

    /// Letter-to-point map for the idempotent symbols, as probe instances
    /// consume it.
    pub fn idempotent_labels(&self) -> BTreeMap<String, IdemPoint> {
        self.e_symbols
            .iter()
            .map(|(e, n)| (n.clone(), *e))
            .collect()
    }

    /// The canonical assignment: idempotent letters to their idempotents,
    /// generator letters to their generators.
    pub fn canonical_assignment(&self) -> BTreeMap<String, Triple> {
        let mut out = BTreeMap::new();
        for (e, n) in &self.e_symbols {
            out.insert(n.clone(), e.to_triple());
        }
        for (g, n) in &self.a_symbols {
            out.insert(n.clone(), *g);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    RCayley,
    QSbar,
    PLink,
    CConj,
    T1Idem,
    T2Elim,
}

/// How much of an infinite family a box materialized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TruncationReport {
    pub box_side: u64,
    pub emitted: u64,
    pub omitted: u64,
}

/// One named family of relations together with its truncation record.
#[derive(Debug, Clone, Serialize)]
pub struct RelationFamily {
    pub kind: FamilyKind,
    #[serde(serialize_with = "serialize_pairs")]
    pub pairs: Vec<(Word, Word)>,
    pub truncation: TruncationReport,
}

fn serialize_pairs<S: serde::Serializer>(
    pairs: &[(Word, Word)],
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    let raw: Vec<[String; 2]> = pairs
        .iter()
        .map(|(l, r)| [l.to_string(), r.to_string()])
        .collect();
    serde::Serialize::serialize(&raw, ser)
}

/// A built presentation plus its family-by-family truncation ledger.
#[derive(Debug, Clone)]
pub struct BuiltPresentation {
    pub presentation: Presentation,
    pub families: Vec<RelationFamily>,
    pub symbols: SymbolTable,
}

fn letter_word(parts: &[(&str, Sign)]) -> Word {
    let mut alphabet: Vec<String> = Vec::new();
    let mut letters = Vec::new();
    for (name, sign) in parts {
        if !alphabet.iter().any(|a| a == name) {
            alphabet.push((*name).to_string());
        }
        letters.push(((*name).to_string(), *sign));
    }
    Word::new(alphabet, letters).expect("builder words are non-empty and well-formed")
}

/// The Cayley-table relations `x_e x_f = x_ef` for all ordered pairs of box
/// idempotents whose meet stays in the box; escaping pairs are counted in
/// the truncation report.
pub fn cayley_relations(sym: &SymbolTable, box_side: u64) -> Result<RelationFamily> {
    let mut points = Vec::new();
    for a in 0..=box_side {
        for b in 0..=box_side {
            if a + b >= 1 {
                points.push(IdemPoint::new(a, b)?);
            }
        }
    }
    let mut pairs = Vec::new();
    let mut omitted = 0;
    for &e in &points {
        for &f in &points {
            let meet = e.meet(f);
            if meet.a > box_side || meet.b > box_side {
                omitted += 1;
                continue;
            }
            let lhs = letter_word(&[
                (sym.e_letter(e)?, Sign::Plus),
                (sym.e_letter(f)?, Sign::Plus),
            ]);
            let rhs = letter_word(&[(sym.e_letter(meet)?, Sign::Plus)]);
            pairs.push((lhs, rhs));
        }
    }
    Ok(RelationFamily {
        kind: FamilyKind::RCayley,
        truncation: TruncationReport {
            box_side,
            emitted: pairs.len() as u64,
            omitted,
        },
        pairs,
    })
}

/// Breadth-first search for the shortest word over the given signed symbols
/// whose product satisfies the target predicate, pruned at the D-bound.
/// Symbol order fixes the lexicographic tie-break.
fn shortest_word(
    symbols: &[(String, Sign, Triple)],
    max_d: u64,
    target: impl Fn(&Triple) -> bool,
) -> Option<Word> {
    let mut visited: BTreeSet<Triple> = BTreeSet::new();
    let mut queue: VecDeque<(Triple, Vec<(String, Sign)>)> = VecDeque::new();
    for (name, sign, value) in symbols {
        if value.dindex() > max_d || !visited.insert(*value) {
            continue;
        }
        let path = vec![(name.clone(), *sign)];
        if target(value) {
            return Some(word_from_path(path));
        }
        queue.push_back((*value, path));
    }
    while let Some((t, path)) = queue.pop_front() {
        for (name, sign, value) in symbols {
            let next = t.mul(value);
            if next.dindex() > max_d || !visited.insert(next) {
                continue;
            }
            let mut p = path.clone();
            p.push((name.clone(), *sign));
            if target(&next) {
                return Some(word_from_path(p));
            }
            queue.push_back((next, p));
        }
    }
    None
}

fn word_from_path(path: Vec<(String, Sign)>) -> Word {
    let mut alphabet = Vec::new();
    for (name, _) in &path {
        if !alphabet.iter().any(|a| a == name) {
            alphabet.push(name.clone());
        }
    }
    Word::new(alphabet, path).expect("search paths are non-empty")
}

fn signed_gen_symbols(spec: &SubsemigroupSpec, sym: &SymbolTable) -> Vec<(String, Sign, Triple)> {
    let mut out = Vec::new();
    for g in spec.gens() {
        let name = sym
            .a_letter(g)
            .expect("every generator is named")
            .to_string();
        out.push((name.clone(), Sign::Plus, *g));
        out.push((name, Sign::Minus, g.inv()));
    }
    out
}

/// A word over the generator letters representing the idempotent `e`, in
/// the shape `w1 w1^-1` (as the conjugation-presentation argument needs):
/// `w1` is the shortest word whose product is R-related to `e`, ties broken
/// lexicographically by letter order then sign.
pub fn idempotent_word(spec: &SubsemigroupSpec, e: IdemPoint, sym: &SymbolTable) -> Result<Word> {
    let symbols = signed_gen_symbols(spec, sym);
    let target = e.to_triple();
    let w1 = shortest_word(&symbols, e.a + e.b, |t| t.green().rclass == (e.a, e.b))
        .ok_or(Fi1Error::NotInSbar(e.a, e.b))?;
    let w = w1.concat(&w1.inverse());
    debug_assert_eq!(eval_word(&w, &sym.canonical_assignment()).unwrap(), target);
    Ok(w)
}

/// The amalgamated presentation: Cayley relations for the box idempotents,
/// the supplied relations for the non-idempotent part, and the linking
/// relations `w_e = x_e` for every box idempotent representable over the
/// generators.
pub fn amalgam_presentation(
    spec: &SubsemigroupSpec,
    sbar_pres: &Presentation,
    box_side: u64,
) -> Result<BuiltPresentation> {
    let sym = base_symbols(spec, sbar_pres, box_side)?;
    let r = cayley_relations(&sym, box_side)?;
    let q = RelationFamily {
        kind: FamilyKind::QSbar,
        pairs: sbar_pres.relations().to_vec(),
        truncation: TruncationReport {
            box_side,
            emitted: sbar_pres.relations().len() as u64,
            omitted: 0,
        },
    };
    let es = idempotent_semilattice(spec, box_side)?;
    let mut p_pairs = Vec::new();
    let mut skipped = 0;
    for e in es.points_within(box_side, box_side) {
        match idempotent_word(spec, e, &sym) {
            Ok(w) => {
                let rhs = letter_word(&[(sym.e_letter(e)?, Sign::Plus)]);
                p_pairs.push((w, rhs));
            }
            Err(Fi1Error::NotInSbar(..)) => skipped += 1,
            Err(other) => return Err(other),
        }
    }
    let p = RelationFamily {
        kind: FamilyKind::PLink,
        truncation: TruncationReport {
            box_side,
            emitted: p_pairs.len() as u64,
            omitted: skipped,
        },
        pairs: p_pairs,
    };

    let mut alphabet = sym.e_letters();
    for l in sbar_pres.alphabet() {
        if !alphabet.contains(l) {
            alphabet.push(l.clone());
        }
    }
    let mut relations = Vec::new();
    for fam in [&r, &q, &p] {
        relations.extend(fam.pairs.iter().cloned());
    }
    Ok(BuiltPresentation {
        presentation: Presentation::new(alphabet, relations)?,
        families: vec![r, q, p],
        symbols: sym,
    })
}

fn base_symbols(
    spec: &SubsemigroupSpec,
    sbar_pres: &Presentation,
    box_side: u64,
) -> Result<SymbolTable> {
    let sym = SymbolTable::for_spec(spec, box_side);
    for name in sym.e_letters() {
        if sbar_pres.alphabet().contains(&name) {
            return Err(Fi1Error::RelationLetter(name));
        }
    }
    let a_letters = sym.a_letters();
    for name in &a_letters {
        if !sbar_pres.alphabet().contains(name) {
            return Err(Fi1Error::RelationLetter(name.clone()));
        }
    }
    let extra: Vec<String> = sbar_pres
        .alphabet()
        .iter()
        .filter(|l| !a_letters.contains(l))
        .cloned()
        .collect();
    Ok(sym.with_extra(extra))
}

/// The conjugation presentation: Cayley relations, the conjugation action
/// `y_a^-e x_e y_a^e = x_(a^-e e a^e)`, the R-idempotent identifications
/// `y_a^e y_a^-e = x_(a^e a^-e)`, and the supplied relations with every
/// auxiliary letter eliminated through its defining word.
pub fn conjugation_presentation(
    spec: &SubsemigroupSpec,
    sbar_pres: &Presentation,
    sbar_assignment: &BTreeMap<String, Triple>,
    box_side: u64,
) -> Result<BuiltPresentation> {
    let sym = base_symbols(spec, sbar_pres, box_side)?;
    let r = cayley_relations(&sym, box_side)?;
    let es = idempotent_semilattice(spec, box_side)?;
    let es_points = es.points_within(box_side, box_side);

    let mut c_pairs = Vec::new();
    let mut c_omitted = 0;
    for g in spec.gens() {
        let y = sym.a_letter(g).expect("generator named").to_string();
        for eps in [Sign::Plus, Sign::Minus] {
            let (a_pos, a_neg) = match eps {
                Sign::Plus => (*g, g.inv()),
                Sign::Minus => (g.inv(), *g),
            };
            for &e in &es_points {
                let conj = a_neg.mul(&e.to_triple()).mul(&a_pos);
                assert!(conj.is_idempotent(), "conjugate of an idempotent");
                let cp = IdemPoint::new(conj.a() as u64, conj.b() as u64)?;
                if cp.a > box_side || cp.b > box_side {
                    c_omitted += 1;
                    continue;
                }
                assert!(
                    es.contains(cp),
                    "conjugate idempotent stays in the subsemigroup"
                );
                let lhs =
                    letter_word(&[(&y, eps.flip()), (sym.e_letter(e)?, Sign::Plus), (&y, eps)]);
                let rhs = letter_word(&[(sym.e_letter(cp)?, Sign::Plus)]);
                c_pairs.push((lhs, rhs));
            }
        }
    }
    let c = RelationFamily {
        kind: FamilyKind::CConj,
        truncation: TruncationReport {
            box_side,
            emitted: c_pairs.len() as u64,
            omitted: c_omitted,
        },
        pairs: c_pairs,
    };

    let mut t1_pairs = Vec::new();
    for g in spec.gens() {
        let y = sym.a_letter(g).expect("generator named").to_string();
        for eps in [Sign::Plus, Sign::Minus] {
            let val = match eps {
                Sign::Plus => g.mul(&g.inv()),
                Sign::Minus => g.inv().mul(g),
            };
            let p = IdemPoint::new(val.a() as u64, val.b() as u64)?;
            let lhs = letter_word(&[(&y, eps), (&y, eps.flip())]);
            let rhs = letter_word(&[(sym.e_letter(p)?, Sign::Plus)]);
            t1_pairs.push((lhs, rhs));
        }
    }
    let t1 = RelationFamily {
        kind: FamilyKind::T1Idem,
        truncation: TruncationReport {
            box_side,
            emitted: t1_pairs.len() as u64,
            omitted: 0,
        },
        pairs: t1_pairs,
    };

    // Eliminate auxiliary letters from the supplied relations by
    // substituting their defining words over the retained letters.
    let mut defs: BTreeMap<String, Word> = BTreeMap::new();
    for y1 in sym.y_extra() {
        let value = sbar_assignment
            .get(y1)
            .ok_or_else(|| Fi1Error::NoDefiningWord(y1.clone()))?;
        let word = defining_word(spec, &sym, &es_points, value)
            .ok_or_else(|| Fi1Error::NoDefiningWord(y1.clone()))?;
        defs.insert(y1.clone(), word);
    }
    let mut q_pairs = Vec::new();
    for (lhs, rhs) in sbar_pres.relations() {
        q_pairs.push((substitute(lhs, &defs), substitute(rhs, &defs)));
    }
    let q_elim = RelationFamily {
        kind: FamilyKind::T2Elim,
        truncation: TruncationReport {
            box_side,
            emitted: q_pairs.len() as u64,
            omitted: 0,
        },
        pairs: q_pairs,
    };

    let mut alphabet = sym.e_letters();
    alphabet.extend(sym.a_letters());
    let mut relations = Vec::new();
    for fam in [&r, &c, &q_elim, &t1] {
        relations.extend(fam.pairs.iter().cloned());
    }
    Ok(BuiltPresentation {
        presentation: Presentation::new(alphabet, relations)?,
        families: vec![r, c, q_elim, t1],
        symbols: sym,
    })
}

/// Shortest word over the retained letters (generators and box idempotent
/// symbols) evaluating to the element.
fn defining_word(
    spec: &SubsemigroupSpec,
    sym: &SymbolTable,
    es_points: &BTreeSet<IdemPoint>,
    value: &Triple,
) -> Option<Word> {
    let mut symbols = signed_gen_symbols(spec, sym);
    for &e in es_points {
        let name = sym.e_letter(e).ok()?.to_string();
        symbols.push((name, Sign::Plus, e.to_triple()));
    }
    shortest_word(&symbols, value.dindex(), |t| t == value)
}

fn substitute(w: &Word, defs: &BTreeMap<String, Word>) -> Word {
    let mut out: Option<Word> = None;
    for (name, sign) in w.letters() {
        let piece = match defs.get(name) {
            Some(d) => match sign {
                Sign::Plus => d.clone(),
                Sign::Minus => d.inverse(),
            },
            None => Word::from_letter(name, *sign).expect("letter is valid"),
        };
        out = Some(match out {
            None => piece,
            Some(acc) => acc.concat(&piece),
        });
    }
    out.expect("words are non-empty")
}

/// Checks sampled relations of a presentation under an assignment: both
/// sides must evaluate to the same element.
pub fn presentation_consistency_check(
    p: &Presentation,
    assignment: &BTreeMap<String, Triple>,
    sample: &[usize],
) -> Result<bool> {
    for &i in sample {
        let (lhs, rhs) = &p.relations()[i];
        if eval_word(lhs, assignment)? != eval_word(rhs, assignment)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rewrites a mixed word over idempotent and generator letters into a word
/// over the generator letters alone, following the amalgam argument: merge
/// adjacent idempotent letters through the Cayley relations, then absorb an
/// idempotent letter next to a generator letter into a linking word.
pub fn purify(
    word: &Word,
    spec: &SubsemigroupSpec,
    sym: &SymbolTable,
    assignment: &BTreeMap<String, Triple>,
) -> Result<Word> {
    #[derive(Clone)]
    enum L {
        E(IdemPoint),
        Y(String, Sign),
    }
    let mut letters: Vec<L> = Vec::new();
    for (name, sign) in word.letters() {
        match sym.point_of(name) {
            // Idempotent letters are self-inverse, so the sign drops.
            Some(e) => letters.push(L::E(e)),
            None => letters.push(L::Y(name.clone(), *sign)),
        }
    }
    loop {
        // Merge adjacent idempotent letters (one Cayley application).
        if let Some(i) = letters
            .windows(2)
            .position(|w| matches!((&w[0], &w[1]), (L::E(_), L::E(_))))
        {
            let (e, f) = match (&letters[i], &letters[i + 1]) {
                (L::E(e), L::E(f)) => (*e, *f),
                _ => unreachable!(),
            };
            letters.splice(i..=i + 1, [L::E(e.meet(f))]);
            continue;
        }
        // Absorb an idempotent letter with a generator neighbor.
        let pos = letters.iter().position(|l| matches!(l, L::E(_)));
        let Some(i) = pos else { break };
        let e = match &letters[i] {
            L::E(e) => *e,
            _ => unreachable!(),
        };
        if i + 1 < letters.len() {
            if let L::Y(name, sign) = letters[i + 1].clone() {
                // x_e y^d  ->  w_g y^d  with g = e meet (y^d y^-d).
                let y = assignment
                    .get(&name)
                    .ok_or_else(|| Fi1Error::UnassignedLetter(name.clone()))?;
                let yd = match sign {
                    Sign::Plus => *y,
                    Sign::Minus => y.inv(),
                };
                let f = yd.mul(&yd.inv());
                let g = e.meet(IdemPoint::new(f.a() as u64, f.b() as u64)?);
                let wg = idempotent_word(spec, g, sym)?;
                let repl: Vec<L> = wg
                    .letters()
                    .iter()
                    .map(|(n, s)| L::Y(n.clone(), *s))
                    .collect();
                letters.splice(i..=i, repl);
                continue;
            }
        }
        if i > 0 {
            if let L::Y(name, sign) = letters[i - 1].clone() {
                // y^d x_e  ->  y^d (w_g)^-1  with g = e meet (y^-d y^d).
                let y = assignment
                    .get(&name)
                    .ok_or_else(|| Fi1Error::UnassignedLetter(name.clone()))?;
                let yd = match sign {
                    Sign::Plus => *y,
                    Sign::Minus => y.inv(),
                };
                let f = yd.inv().mul(&yd);
                let g = e.meet(IdemPoint::new(f.a() as u64, f.b() as u64)?);
                let wg = idempotent_word(spec, g, sym)?.inverse();
                let repl: Vec<L> = wg
                    .letters()
                    .iter()
                    .map(|(n, s)| L::Y(n.clone(), *s))
                    .collect();
                letters.splice(i..=i, repl);
                continue;
            }
        }
        // The word is a single idempotent letter: expand it directly.
        let we = idempotent_word(spec, e, sym)?;
        let repl: Vec<L> = we
            .letters()
            .iter()
            .map(|(n, s)| L::Y(n.clone(), *s))
            .collect();
        letters.splice(i..=i, repl);
    }
    let flat: Vec<(String, Sign)> = letters
        .into_iter()
        .map(|l| match l {
            L::Y(n, s) => (n, s),
            L::E(_) => unreachable!("no idempotent letters remain"),
        })
        .collect();
    let mut alphabet = Vec::new();
    for (n, _) in &flat {
        if !alphabet.iter().any(|a| a == n) {
            alphabet.push(n.clone());
        }
    }
    Word::new(alphabet, flat)
}

/// The desk-scale probe instance over the free monogenic semigroup: the
/// Cayley relations on the box plus one linking relation for `f`, with the
/// generator named `y`.
pub fn fi1_probe_instance(
    box_side: u64,
    f: IdemPoint,
    g: IdemPoint,
    probe_word: &Word,
) -> Result<ProbeInstance> {
    let spec = SubsemigroupSpec::new(vec![Triple::generator()], None)?;
    let sym = SymbolTable::for_spec(&spec, box_side);
    let r = cayley_relations(&sym, box_side)?;
    let wf = idempotent_word(&spec, f, &sym)?;
    let p1 = (wf, letter_word(&[(sym.e_letter(f)?, Sign::Plus)]));
    let mut alphabet = sym.a_letters();
    alphabet.extend(sym.e_letters());
    let mut relations = r.pairs.clone();
    relations.push(p1);
    Ok(ProbeInstance {
        pres: Presentation::new(alphabet, relations)?,
        idempotent_labels: sym.idempotent_labels(),
        f,
        g,
        w: probe_word.clone(),
    })
}
