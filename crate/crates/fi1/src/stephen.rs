//! Stephen's procedure for inverse semigroup presentations.
//!
//! The state is a birooted inverse labeled graph. Starting from the linear
//! graph of a word, alternately applying complete determinations (folding)
//! and complete expansions converges (in the limit) to the Schutzenberger
//! graph of the word; its language is the set of words representing
//! elements above the word in the natural partial order, and mutual
//! language membership decides word equality.
//!
//! Folding first: the linear graph is generally nondeterministic, and
//! expansion requires a deterministic graph to trace walks on.

use crate::error::{Fi1Error, Result};
use crate::eset::IdemPoint;
use crate::unionfind::UnionFind;
use crate::word::{Sign, Word};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

/// An inverse semigroup presentation: an alphabet and a finite list of
/// defining word pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    alphabet: Vec<String>,
    relations: Vec<(Word, Word)>,
}

impl Presentation {
    pub fn new(alphabet: Vec<String>, relations: Vec<(Word, Word)>) -> Result<Self> {
        for (lhs, rhs) in &relations {
            for w in [lhs, rhs] {
                for (name, _) in w.letters() {
                    if !alphabet.iter().any(|a| a == name) {
                        return Err(Fi1Error::RelationLetter(name.clone()));
                    }
                }
            }
        }
        Ok(Presentation {
            alphabet,
            relations,
        })
    }

    /// The free presentation: no relations.
    pub fn free(alphabet: Vec<String>) -> Self {
        Presentation {
            alphabet,
            relations: Vec::new(),
        }
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn relations(&self) -> &[(Word, Word)] {
        &self.relations
    }
}

impl Serialize for Presentation {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw<'a> {
            alphabet: &'a [String],
            relations: Vec<[String; 2]>,
        }
        Raw {
            alphabet: &self.alphabet,
            relations: self
                .relations
                .iter()
                .map(|(l, r)| [l.to_string(), r.to_string()])
                .collect(),
        }
        .serialize(ser)
    }
}

impl<'de> serde::Deserialize<'de> for Presentation {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        struct Raw {
            alphabet: Vec<String>,
            relations: Vec<(String, String)>,
        }
        let raw = Raw::deserialize(de)?;
        let relations = raw
            .relations
            .iter()
            .map(|(l, r)| {
                Ok((
                    Word::parse_with_alphabet(l, &raw.alphabet)?,
                    Word::parse_with_alphabet(r, &raw.alphabet)?,
                ))
            })
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Presentation::new(raw.alphabet, relations).map_err(serde::de::Error::custom)
    }
}

/// Merge scheduling strategy for folding; the folded graph is independent
/// of the choice, which the confluence tests assert.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FoldSchedule {
    /// Sweep forward and apply every detected merge per pass.
    Batch,
    /// Apply only the last detected merge per pass.
    OneAtATime,
}

/// A birooted inverse labeled graph with union-find vertex identification.
/// Edges are stored once in the positive orientation; an edge `(u, x, v)`
/// also stands for `(v, x^-1, u)`.
#[derive(Debug, Clone)]
pub struct SchutzGraph {
    labels: Vec<String>,
    uf: UnionFind,
    edges: BTreeSet<(usize, u32, usize)>,
    root_a: usize,
    root_b: usize,
}

impl SchutzGraph {
    fn label_id(&mut self, name: &str) -> u32 {
        if let Some(i) = self.labels.iter().position(|l| l == name) {
            i as u32
        } else {
            self.labels.push(name.to_string());
            (self.labels.len() - 1) as u32
        }
    }

    pub fn label_names(&self) -> &[String] {
        &self.labels
    }

    pub fn roots(&self) -> (usize, usize) {
        (self.root_a, self.root_b)
    }

    /// Canonical vertex set (union-find representatives), sorted.
    pub fn vertices(&self) -> Vec<usize> {
        let mut g = self.clone();
        let mut set = BTreeSet::new();
        for v in 0..g.uf.len() {
            set.insert(g.uf.find(v));
        }
        set.into_iter().collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices().len()
    }

    /// Edges in positive orientation with label names, canonicalized.
    pub fn labeled_edges(&self) -> Vec<(usize, String, usize)> {
        self.edges
            .iter()
            .map(|&(s, l, t)| (s, self.labels[l as usize].clone(), t))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Every label name that occurs on some edge.
    pub fn edge_labels(&self) -> BTreeSet<String> {
        self.edges
            .iter()
            .map(|&(_, l, _)| self.labels[l as usize].clone())
            .collect()
    }

    fn canonicalize(&mut self) {
        let edges: Vec<(usize, u32, usize)> = self.edges.iter().copied().collect();
        self.edges.clear();
        for (s, l, t) in edges {
            let (s, t) = (self.uf.find(s), self.uf.find(t));
            self.edges.insert((s, l, t));
        }
        self.root_a = self.uf.find(self.root_a);
        self.root_b = self.uf.find(self.root_b);
    }

    /// Complete determination: merge targets of co-initial equally labeled
    /// edges (in both orientations) until the graph is deterministic.
    pub fn fold(self) -> SchutzGraph {
        self.fold_with(FoldSchedule::Batch)
    }

    pub fn fold_with(mut self, schedule: FoldSchedule) -> SchutzGraph {
        loop {
            self.canonicalize();
            let mut merges: Vec<(usize, usize)> = Vec::new();
            let mut out_seen: HashMap<(usize, u32), usize> = HashMap::new();
            let mut in_seen: HashMap<(usize, u32), usize> = HashMap::new();
            for &(s, l, t) in &self.edges {
                if let Some(&t0) = out_seen.get(&(s, l)) {
                    if t0 != t {
                        merges.push((t0, t));
                    }
                } else {
                    out_seen.insert((s, l), t);
                }
                if let Some(&s0) = in_seen.get(&(t, l)) {
                    if s0 != s {
                        merges.push((s0, s));
                    }
                } else {
                    in_seen.insert((t, l), s);
                }
            }
            if merges.is_empty() {
                return self;
            }
            match schedule {
                FoldSchedule::Batch => {
                    for (x, y) in merges {
                        self.uf.union(x, y);
                    }
                }
                FoldSchedule::OneAtATime => {
                    let (x, y) = *merges.last().unwrap();
                    self.uf.union(x, y);
                }
            }
        }
    }

    /// True when no two distinct edges share a source, label and sign.
    pub fn is_deterministic(&self) -> bool {
        let mut out_seen = BTreeSet::new();
        let mut in_seen = BTreeSet::new();
        for &(s, l, t) in &self.edges {
            if !out_seen.insert((s, l)) || !in_seen.insert((t, l)) {
                return false;
            }
        }
        true
    }

    /// Successor map for deterministic tracing: `(vertex, label, sign)` to
    /// the walk target.
    fn successors(&self) -> HashMap<(usize, u32, Sign), usize> {
        let mut map = HashMap::new();
        for &(s, l, t) in &self.edges {
            map.insert((s, l, Sign::Plus), t);
            map.insert((t, l, Sign::Minus), s);
        }
        map
    }

    /// Deterministically traces `w` from `start`; `None` when an edge is
    /// missing.
    pub fn trace_from(&self, start: usize, w: &Word) -> Option<usize> {
        let succ = self.successors();
        let mut cur = start;
        for (name, sign) in w.letters() {
            let l = self.labels.iter().position(|x| x == name)? as u32;
            cur = *succ.get(&(cur, l, *sign))?;
        }
        Some(cur)
    }

    /// Language membership: `w` labels a walk from the first root to the
    /// second.
    pub fn in_language(&self, w: &Word) -> bool {
        self.trace_from(self.root_a, w) == Some(self.root_b)
    }

    /// Rooted isomorphism of deterministic connected graphs, by
    /// simultaneous traversal from the roots.
    pub fn isomorphic_to(&self, other: &SchutzGraph) -> bool {
        if self.vertex_count() != other.vertex_count() || self.edges.len() != other.edges.len() {
            return false;
        }
        let mine = self.successors();
        let theirs = other.successors();
        let mut map: BTreeMap<usize, usize> = BTreeMap::new();
        let mut queue = vec![(self.root_a, other.root_a)];
        map.insert(self.root_a, other.root_a);
        let signs = [Sign::Plus, Sign::Minus];
        while let Some((u, v)) = queue.pop() {
            for (l, name) in self.labels.iter().enumerate() {
                let lo = other.labels.iter().position(|x| x == name);
                for sign in signs {
                    let a = mine.get(&(u, l as u32, sign));
                    let b = lo.and_then(|lo| theirs.get(&(v, lo as u32, sign)));
                    match (a, b) {
                        (None, None) => {}
                        (Some(&a), Some(&b)) => match map.get(&a) {
                            Some(&mapped) => {
                                if mapped != b {
                                    return false;
                                }
                            }
                            None => {
                                map.insert(a, b);
                                queue.push((a, b));
                            }
                        },
                        _ => return false,
                    }
                }
            }
        }
        map.get(&self.root_b) == Some(&other.root_b)
    }

    /// DOT rendering: one edge per inverse pair in positive orientation;
    /// the alpha root gets a double border, the beta root a bold one.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph schutzenberger {\n  rankdir=LR;\n");
        for v in self.vertices() {
            let mut attrs = Vec::new();
            if v == self.root_a {
                attrs.push("peripheries=2");
            }
            if v == self.root_b {
                attrs.push("style=bold");
            }
            if attrs.is_empty() {
                let _ = writeln!(out, "  \"{v}\";");
            } else {
                let _ = writeln!(out, "  \"{v}\" [{}];", attrs.join(", "));
            }
        }
        for &(s, l, t) in &self.edges {
            let _ = writeln!(
                out,
                "  \"{s}\" -> \"{t}\" [label=\"{}\"];",
                self.labels[l as usize]
            );
        }
        out.push_str("}\n");
        out
    }
}

/// The linear graph of a word: a path spelling the word, rooted at its ends.
pub fn linear_graph(w: &Word) -> SchutzGraph {
    let mut g = SchutzGraph {
        labels: Vec::new(),
        uf: UnionFind::new(),
        edges: BTreeSet::new(),
        root_a: 0,
        root_b: 0,
    };
    let mut cur = g.uf.make_set();
    g.root_a = cur;
    for (name, sign) in w.letters() {
        let next = g.uf.make_set();
        let l = g.label_id(name);
        match sign {
            Sign::Plus => g.edges.insert((cur, l, next)),
            Sign::Minus => g.edges.insert((next, l, cur)),
        };
        cur = next;
    }
    g.root_b = cur;
    g
}

/// One complete expansion: for every relation side pair and every vertex
/// pair joined by one side but not the other, adjoin the missing path. All
/// instances are gathered against the pre-expansion graph and then applied.
/// The input must be deterministic (folded) so walks trace uniquely.
pub fn expand(g: &SchutzGraph, pres: &Presentation) -> SchutzGraph {
    expand_counted(g, pres).0
}

fn expand_counted(g: &SchutzGraph, pres: &Presentation) -> (SchutzGraph, usize) {
    let vertices = g.vertices();
    let mut additions: Vec<(usize, Word, usize)> = Vec::new();
    for (lhs, rhs) in pres.relations() {
        for (r, s) in [(lhs, rhs), (rhs, lhs)] {
            for &a in &vertices {
                if let Some(b) = g.trace_from(a, r) {
                    if g.trace_from(a, s) != Some(b) {
                        let inst = (a, s.clone(), b);
                        if !additions.contains(&inst) {
                            additions.push(inst);
                        }
                    }
                }
            }
        }
    }
    let count = additions.len();
    let mut out = g.clone();
    for (a, s, b) in additions {
        let mut cur = a;
        let n = s.len();
        for (i, (name, sign)) in s.letters().iter().enumerate() {
            let next = if i + 1 == n { b } else { out.uf.make_set() };
            let l = out.label_id(name);
            match sign {
                Sign::Plus => out.edges.insert((cur, l, next)),
                Sign::Minus => out.edges.insert((next, l, cur)),
            };
            cur = next;
        }
    }
    (out, count)
}

/// Outcome of a bounded run of Stephen's procedure.
#[derive(Debug, Clone)]
pub struct StephenResult {
    pub graph: SchutzGraph,
    pub converged: bool,
    pub rounds_run: u64,
}

/// Runs at most `rounds` expansion/determination alternations starting from
/// the folded linear graph. Convergence means a full round added nothing;
/// the graph is then the Schutzenberger graph of the word.
pub fn stephen_limit(w: &Word, pres: &Presentation, rounds: u64) -> StephenResult {
    let mut g = linear_graph(w).fold();
    for k in 0..rounds {
        let (expanded, applied) = expand_counted(&g, pres);
        if applied == 0 {
            return StephenResult {
                graph: g,
                converged: true,
                rounds_run: k + 1,
            };
        }
        g = expanded.fold();
    }
    StephenResult {
        graph: g,
        converged: false,
        rounds_run: rounds,
    }
}

/// Three-valued word equality: mutual language membership decides equality
/// when both graphs converged; memberships only grow along the sequence, so
/// mutual membership before convergence already certifies equality, while
/// anything else stays unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Equal,
    Distinct,
    Unknown,
}

pub fn words_equal(pres: &Presentation, w: &Word, v: &Word, rounds: u64) -> Verdict {
    let rw = stephen_limit(w, pres, rounds);
    let rv = stephen_limit(v, pres, rounds);
    let mutual = rv.graph.in_language(w) && rw.graph.in_language(v);
    if mutual {
        Verdict::Equal
    } else if rw.converged && rv.converged {
        Verdict::Distinct
    } else {
        Verdict::Unknown
    }
}

/// A desk-scale probe instance: a presentation mixing ordinary letters with
/// letters naming idempotents, the reference idempotent `f`, the target `g`
/// strictly below it, and the probe word.
#[derive(Debug, Clone)]
pub struct ProbeInstance {
    pub pres: Presentation,
    pub idempotent_labels: BTreeMap<String, IdemPoint>,
    pub f: IdemPoint,
    pub g: IdemPoint,
    pub w: Word,
}

/// What the probe saw: every idempotent point that ever labeled an edge,
/// whether the target label appeared, and whether every seen label stays
/// above `f` in the idempotent order (i.e. its point is dominated by `f`'s).
#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub g_label_seen: bool,
    pub all_labels_above_f: bool,
    pub labels: BTreeSet<IdemPoint>,
    pub converged: bool,
    pub rounds_run: u64,
}

/// Runs Stephen's procedure on the probe word and collects idempotent edge
/// labels across every stage of the sequence.
pub fn idempotent_label_probe(instance: &ProbeInstance, rounds: u64) -> ProbeReport {
    let mut labels: BTreeSet<IdemPoint> = BTreeSet::new();
    let collect = |g: &SchutzGraph, labels: &mut BTreeSet<IdemPoint>| {
        for name in g.edge_labels() {
            if let Some(p) = instance.idempotent_labels.get(&name) {
                labels.insert(*p);
            }
        }
    };
    let mut g = linear_graph(&instance.w).fold();
    collect(&g, &mut labels);
    let mut converged = false;
    let mut rounds_run = rounds;
    for k in 0..rounds {
        let (expanded, applied) = expand_counted(&g, &instance.pres);
        if applied == 0 {
            converged = true;
            rounds_run = k + 1;
            break;
        }
        g = expanded.fold();
        collect(&g, &mut labels);
    }
    ProbeReport {
        g_label_seen: labels.contains(&instance.g),
        all_labels_above_f: labels.iter().all(|h| instance.f.dominates(*h)),
        labels,
        converged,
        rounds_run,
    }
}
