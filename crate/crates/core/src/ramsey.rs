//! Edge colorings of complete 3-graphs: monochromatic pattern checks, a
//! propagating search for colorings without a monochromatic pattern, and a
//! checkable deduction of `R(P; r) <= r + 6` for `2 <= r <= 7`.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{binom, triple_count, Hypergraph3, TripleId, MAX_VERTICES};
use crate::patterns::{catalog, contains, EdgeSignature, Pattern, PatternName};
use crate::turan::{lookup, LookupPolicy, Source, TableName};

/// Assignment of a color in `0..r` to every triple of `K_n`, indexed by
/// colex rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    n: usize,
    r: usize,
    assignment: Vec<u8>,
}

impl Coloring {
    pub fn new(n: usize, r: usize, assignment: Vec<u8>) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::VertexCount(n));
        }
        if r == 0 || r > u8::MAX as usize {
            return Err(Error::InvalidQuery(format!("color count {r} outside 1..=255")));
        }
        if assignment.len() != triple_count(n) {
            return Err(Error::InvalidQuery(format!(
                "coloring of K{n} needs {} entries, got {}",
                triple_count(n),
                assignment.len()
            )));
        }
        if let Some(&c) = assignment.iter().find(|&&c| c as usize >= r) {
            return Err(Error::InvalidQuery(format!("color {c} out of range for r={r}")));
        }
        Ok(Coloring { n, r, assignment })
    }

    /// Every triple gets color 0.
    pub fn monochrome(n: usize, r: usize) -> Result<Self> {
        Coloring::new(n, r, vec![0; triple_count(n.min(MAX_VERTICES))])
    }

    /// Colors each triple by `f` applied to its vertices.
    pub fn from_fn(n: usize, r: usize, mut f: impl FnMut([usize; 3]) -> u8) -> Result<Self> {
        let assignment = (0..triple_count(n.min(MAX_VERTICES)))
            .map(|rank| f(TripleId::from_rank_unchecked(rank).vertices()))
            .collect();
        Coloring::new(n, r, assignment)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn colors(&self) -> usize {
        self.r
    }

    pub fn assignment(&self) -> &[u8] {
        &self.assignment
    }

    pub fn color_of(&self, id: TripleId) -> u8 {
        self.assignment[id.rank()]
    }

    /// The 3-graph formed by the triples of color `c`.
    pub fn class(&self, c: u8) -> Hypergraph3 {
        let mut g = Hypergraph3::empty(self.n).expect("validated n");
        for (rank, &col) in self.assignment.iter().enumerate() {
            if col == c {
                g.set_raw(rank);
            }
        }
        g
    }
}

/// `ceil(C(n,3) / r)`: some color class has at least this many triples.
pub fn pigeonhole(n: usize, r: usize) -> u64 {
    assert!(r > 0, "pigeonhole needs at least one color");
    binom(n as u64, 3).div_ceil(r as u64)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonochromaticCopy {
    pub color: u8,
    /// Image of each pattern vertex.
    pub embedding: Vec<usize>,
}

/// First monochromatic copy of `pattern`, scanning colors in increasing
/// order.
pub fn check_coloring(coloring: &Coloring, pattern: &Pattern) -> Option<MonochromaticCopy> {
    (0..coloring.r as u8).find_map(|c| {
        contains(&coloring.class(c), pattern).map(|embedding| MonochromaticCopy { color: c, embedding })
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoringConfig {
    pub time_limit: Option<Duration>,
    pub node_limit: Option<u64>,
    /// Fix the color of `{0,1,2}` and introduce colors in first-use order.
    pub symmetry_breaking: bool,
}

impl Default for ColoringConfig {
    fn default() -> Self {
        ColoringConfig { time_limit: None, node_limit: None, symmetry_breaking: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColoringOutcome {
    Found(Coloring),
    NoneExists,
    Unknown,
}

struct ColorSearch {
    t: usize,
    w: usize,
    r: usize,
    pair: Vec<u64>,
    triple: Vec<u64>,
    has_triple: bool,
    generic: Option<Pattern>,
    n: usize,
    symmetry: bool,
    nodes: u64,
    node_limit: Option<u64>,
    deadline: Option<Instant>,
    limit_hit: bool,
}

#[derive(Clone)]
struct ColorState {
    assign: Vec<u8>,
    inc: Vec<u64>,
    blocked: Vec<u64>,
    used: usize,
}

const UNSET: u8 = u8::MAX;

#[inline]
fn bit(words: &[u64], i: usize) -> bool {
    words[i >> 6] >> (i & 63) & 1 == 1
}

impl ColorSearch {
    fn new(n: usize, r: usize, pattern: &Pattern, config: &ColoringConfig) -> Self {
        let t = triple_count(n);
        let w = t.div_ceil(64).max(1);
        let masks: Vec<u32> = (0..t).map(|i| TripleId::from_rank_unchecked(i).mask()).collect();
        let mut pair = vec![0u64; t * w];
        let mut triple = Vec::new();
        let mut generic = None;
        let mut has_triple = false;
        match pattern.signature() {
            Some(EdgeSignature::Two(k)) => {
                for a in 0..t {
                    for b in 0..t {
                        if a != b && (masks[a] & masks[b]).count_ones() as u8 == k {
                            pair[a * w + (b >> 6)] |= 1 << (b & 63);
                        }
                    }
                }
            }
            Some(sig @ EdgeSignature::Three(..)) => {
                has_triple = true;
                triple = vec![0u64; t * t * w];
                for a in 0..t {
                    for b in a + 1..t {
                        for c in 0..t {
                            if c != a && c != b && EdgeSignature::three(masks[a], masks[b], masks[c]) == sig {
                                triple[(a * t + b) * w + (c >> 6)] |= 1 << (c & 63);
                                triple[(b * t + a) * w + (c >> 6)] |= 1 << (c & 63);
                            }
                        }
                    }
                }
            }
            _ => generic = Some(pattern.clone()),
        }
        ColorSearch {
            t,
            w,
            r,
            pair,
            triple,
            has_triple,
            generic,
            n,
            symmetry: config.symmetry_breaking,
            nodes: 0,
            node_limit: config.node_limit,
            deadline: config.time_limit.map(|d| Instant::now() + d),
            limit_hit: false,
        }
    }

    fn blocked(&self, st: &ColorState, c: usize, u: usize) -> bool {
        bit(&st.blocked[c * self.w..(c + 1) * self.w], u)
    }

    /// Gives triple `u` color `c`; false if that completes the pattern.
    fn assign(&self, st: &mut ColorState, u: usize, c: usize) -> bool {
        let w = self.w;
        if let Some(p) = &self.generic {
            let mut class = Hypergraph3::empty(self.n).expect("validated n");
            for (rank, &col) in st.assign.iter().enumerate() {
                if col as usize == c {
                    class.set_raw(rank);
                }
            }
            class.set_raw(u);
            if contains(&class, p).is_some() {
                return false;
            }
        }
        let (inc, blocked) = (&st.inc[c * w..(c + 1) * w], c * w);
        if self.has_triple {
            for (wi, &word) in inc.iter().enumerate() {
                let mut word = word;
                while word != 0 {
                    let f = wi * 64 + word.trailing_zeros() as usize;
                    word &= word - 1;
                    let row = &self.triple[(u * self.t + f) * w..(u * self.t + f + 1) * w];
                    for i in 0..w {
                        st.blocked[blocked + i] |= row[i];
                    }
                }
            }
        }
        for i in 0..w {
            st.blocked[blocked + i] |= self.pair[u * w + i];
        }
        st.inc[c * w + (u >> 6)] |= 1 << (u & 63);
        st.assign[u] = c as u8;
        if c >= st.used {
            st.used = c + 1;
        }
        true
    }

    /// Forward checking and unit propagation over unassigned triples.
    fn propagate(&self, st: &mut ColorState) -> bool {
        loop {
            let mut forced = None;
            for u in 0..self.t {
                if st.assign[u] != UNSET {
                    continue;
                }
                let fresh = if self.symmetry { st.used < self.r } else { false };
                let pool = if self.symmetry { st.used } else { self.r };
                let mut allowed = (0..pool).filter(|&c| !self.blocked(st, c, u));
                let first = allowed.next();
                let more = allowed.next().is_some();
                match (first, more, fresh) {
                    (None, _, false) => return false,
                    (Some(c), false, false) if forced.is_none() => forced = Some((u, c)),
                    _ => {}
                }
            }
            match forced {
                Some((u, c)) => {
                    if !self.assign(st, u, c) {
                        return false;
                    }
                }
                None => return true,
            }
        }
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.node_limit.is_some_and(|l| self.nodes > l)
            || (self.nodes & 255 == 0 && self.deadline.is_some_and(|d| Instant::now() >= d))
        {
            self.limit_hit = true;
        }
        self.limit_hit
    }

    fn solve(&mut self, st: ColorState, from: usize) -> Option<ColorState> {
        if self.tick() {
            return None;
        }
        let Some(u) = (from..self.t).find(|&u| st.assign[u] == UNSET) else {
            return Some(st);
        };
        let top = if self.symmetry { (st.used + 1).min(self.r) } else { self.r };
        for c in 0..top {
            if self.blocked(&st, c, u) {
                continue;
            }
            let mut child = st.clone();
            if !self.assign(&mut child, u, c) || !self.propagate(&mut child) {
                continue;
            }
            if let Some(done) = self.solve(child, u + 1) {
                return Some(done);
            }
            if self.limit_hit {
                return None;
            }
        }
        None
    }
}

/// Searches for an `r`-coloring of `K_n` with no monochromatic `pattern`.
pub fn search_coloring(
    n: usize,
    r: usize,
    pattern: PatternName,
    config: &ColoringConfig,
) -> Result<ColoringOutcome> {
    if n == 0 || n > MAX_VERTICES {
        return Err(Error::VertexCount(n));
    }
    if r == 0 || r > u8::MAX as usize {
        return Err(Error::InvalidQuery(format!("color count {r} outside 1..=255")));
    }
    let p = catalog(pattern);
    if p.vertices() > n {
        return Ok(ColoringOutcome::Found(Coloring::monochrome(n, r)?));
    }
    if p.edges().is_empty() {
        return Ok(ColoringOutcome::NoneExists);
    }
    let mut s = ColorSearch::new(n, r, &p, config);
    let root = ColorState {
        assign: vec![UNSET; s.t],
        inc: vec![0; r * s.w],
        blocked: vec![0; r * s.w],
        used: 0,
    };
    match s.solve(root, 0) {
        Some(st) => {
            let c = Coloring::new(n, r, st.assign)?;
            if let Some(copy) = check_coloring(&c, &p) {
                return Err(Error::InvalidQuery(format!(
                    "coloring search produced a monochromatic copy in color {}",
                    copy.color
                )));
            }
            Ok(ColoringOutcome::Found(c))
        }
        None if s.limit_hit => Ok(ColoringOutcome::Unknown),
        None => Ok(ColoringOutcome::NoneExists),
    }
}

// ---------------------------------------------------------------------------
// deduction

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepKind {
    Pigeonhole,
    TuranLookup,
    StarDeletion,
    StarTilingImpossible,
    PartitionArgument,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparison {
    /// The large color class exceeds the looked-up maximum.
    Greater,
    /// The large color class meets the looked-up maximum exactly.
    Equal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Step {
    Pigeonhole { n: usize, r: usize, value: u64 },
    TuranLookup {
        table: TableName,
        n: usize,
        stated: u64,
        value: u64,
        source: Source,
        class_size: u64,
        comparison: Comparison,
    },
    StarDeletion { from_n: usize, from_r: usize, to_n: usize, to_r: usize },
    StarTilingImpossible { n: usize, r: usize, edges_avoiding_centers: u64 },
    PartitionArgument {
        classes: usize,
        edges_per_class: u64,
        bipartite_edges: u64,
        remaining_colors: usize,
        max_disjoint_family: usize,
    },
}

impl Step {
    pub fn kind(&self) -> StepKind {
        match self {
            Step::Pigeonhole { .. } => StepKind::Pigeonhole,
            Step::TuranLookup { .. } => StepKind::TuranLookup,
            Step::StarDeletion { .. } => StepKind::StarDeletion,
            Step::StarTilingImpossible { .. } => StepKind::StarTilingImpossible,
            Step::PartitionArgument { .. } => StepKind::PartitionArgument,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeductionStep {
    #[serde(flatten)]
    pub step: Step,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeductionProof {
    pub r: usize,
    pub n: usize,
    pub steps: Vec<DeductionStep>,
    pub valid: bool,
}

/// Constants used by the argument for each `r`: the stated pigeonhole value
/// and the table entry it is compared with.
fn plan(r: usize) -> Option<(u64, TableName, u64, Comparison)> {
    Some(match r {
        2 => (28, TableName::Ex1, 21, Comparison::Greater),
        3 => (28, TableName::Ex1, 28, Comparison::Equal),
        4 => (30, TableName::Ex2, 24, Comparison::Greater),
        5 => (33, TableName::Ex2, 30, Comparison::Greater),
        6 => (37, TableName::Ex3, 32, Comparison::Greater),
        7 => (41, TableName::Ex2, 40, Comparison::Greater),
        _ => return None,
    })
}

/// Builds the proof object for `R(P; r) <= r + 6` and checks every step.
/// The proof is returned even when a step fails; see [`verify_deduction`].
pub fn build_deduction(r: usize, policy: &LookupPolicy) -> Result<DeductionProof> {
    let (stated_ph, table, stated, comparison) =
        plan(r).ok_or_else(|| Error::InvalidQuery(format!("deduction covers 2 <= r <= 7, got {r}")))?;
    let n = r + 6;
    let total = binom(n as u64, 3);
    let mut steps = Vec::new();

    let ph = pigeonhole(n, r);
    steps.push(DeductionStep {
        step: Step::Pigeonhole { n, r, value: ph },
        holds: ph == stated_ph && ph * r as u64 >= total && (ph - 1) * (r as u64) < total,
        detail: format!("ceil(C({n},3)/{r}) = ceil({total}/{r}) = {ph}"),
    });

    let looked = lookup(table, n, policy)?;
    let value = looked.value.unwrap_or(0);
    let relation = match comparison {
        Comparison::Greater => ph > value,
        Comparison::Equal => ph == value,
    };
    let symbol = if comparison == Comparison::Greater { ">" } else { "=" };
    steps.push(DeductionStep {
        step: Step::TuranLookup {
            table,
            n,
            stated,
            value,
            source: looked.source,
            class_size: ph,
            comparison,
        },
        holds: looked.value == Some(stated) && relation,
        detail: format!("{ph} {symbol} {table}({n}) = {value} [{}]", looked.source),
    });

    match r {
        2 => {}
        3 => {
            // every class has exactly C(n-1,2) triples, hence is a full star;
            // r stars cannot cover the triples avoiding all centers
            let avoiding = binom((n - r) as u64, 3);
            steps.push(DeductionStep {
                step: Step::StarTilingImpossible { n, r, edges_avoiding_centers: avoiding },
                holds: avoiding > 0 && ph * r as u64 == total,
                detail: format!("C({},3) = {avoiding} triples avoid all {r} centers", n - r),
            });
        }
        _ => {
            let lower = build_deduction(r - 1, policy)?;
            steps.push(DeductionStep {
                step: Step::StarDeletion { from_n: n, from_r: r, to_n: n - 1, to_r: r - 1 },
                holds: lower.valid && lower.n == n - 1,
                detail: format!("deleting a star center leaves an {}-coloring of K{}", r - 1, n - 1),
            });
            if r == 6 {
                let report = r6_partition_check();
                let remaining = r - 1;
                let forced = report.bipartite_edges == remaining as u64 * report.max_class_intersection;
                steps.push(DeductionStep {
                    step: Step::PartitionArgument {
                        classes: report.class_count,
                        edges_per_class: report.max_class_intersection,
                        bipartite_edges: report.bipartite_edges,
                        remaining_colors: remaining,
                        max_disjoint_family: report.max_disjoint_family,
                    },
                    holds: report.all_hold() && forced && report.max_disjoint_family < remaining,
                    detail: format!(
                        "{} = {remaining} x {} forces every class to be a crossing K6+K6; at most {} are disjoint",
                        report.bipartite_edges, report.max_class_intersection, report.max_disjoint_family
                    ),
                });
            }
        }
    }
    let valid = steps.iter().all(|s| s.holds);
    Ok(DeductionProof { r, n, steps, valid })
}

/// Like [`build_deduction`] but fails with the first step that does not
/// hold.
pub fn verify_deduction(r: usize, policy: &LookupPolicy) -> Result<DeductionProof> {
    let proof = build_deduction(r, policy)?;
    if let Some((index, s)) = proof.steps.iter().enumerate().find(|(_, s)| !s.holds) {
        return Err(Error::InvalidStep { index, kind: format!("{:?}", s.step.kind()), msg: s.detail.clone() });
    }
    Ok(proof)
}

// ---------------------------------------------------------------------------
// r = 6 partition argument

/// A copy of `K6 + K6` on `U ∪ W` (with `U = {0..5}`, `W = {6..11}`) whose
/// cliques each take three vertices from both sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PartitionPairClass {
    /// Half of `U` containing vertex 0.
    pub u_half: u32,
    /// Half of `W` joined with `u_half`.
    pub w_half: u32,
}

const U_MASK: u32 = 0b0000_0011_1111;
const W_MASK: u32 = 0b1111_1100_0000;

impl PartitionPairClass {
    /// The two 6-vertex blocks.
    pub fn blocks(&self) -> [u32; 2] {
        [self.u_half | self.w_half, (U_MASK & !self.u_half) | (W_MASK & !self.w_half)]
    }

    pub fn graph(&self) -> Hypergraph3 {
        clique_blocks(&self.blocks())
    }
}

fn clique_blocks(blocks: &[u32]) -> Hypergraph3 {
    let mut g = Hypergraph3::empty(12).expect("n = 12");
    for rank in 0..triple_count(12) {
        let m = TripleId::from_rank_unchecked(rank).mask();
        if blocks.iter().any(|&b| m & b == m) {
            g.set_raw(rank);
        }
    }
    g
}

fn three_subsets(mask: u32) -> Vec<u32> {
    let bits: Vec<u32> = (0..32).filter(|i| mask >> i & 1 == 1).collect();
    let mut out = Vec::new();
    for a in 0..bits.len() {
        for b in a + 1..bits.len() {
            for c in b + 1..bits.len() {
                out.push((1 << bits[a]) | (1 << bits[b]) | (1 << bits[c]));
            }
        }
    }
    out
}

pub fn partition_pair_classes() -> Vec<PartitionPairClass> {
    let mut out = Vec::new();
    for u_half in three_subsets(U_MASK).into_iter().filter(|u| u & 1 == 1) {
        for w_half in three_subsets(W_MASK) {
            out.push(PartitionPairClass { u_half, w_half });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionReport {
    pub class_count: usize,
    pub min_class_intersection: u64,
    pub max_class_intersection: u64,
    pub bipartite_edges: u64,
    pub max_disjoint_family: usize,
    pub disjoint_pair: Option<(PartitionPairClass, PartitionPairClass)>,
    /// Largest intersection of the crossing graph with any copy of `K6 + K6`.
    pub max_copy_intersection: u64,
    pub copies_checked: usize,
    pub every_class_36: bool,
    pub bipartite_180: bool,
    pub max_family_2: bool,
}

impl PartitionReport {
    pub fn all_hold(&self) -> bool {
        self.every_class_36 && self.bipartite_180 && self.max_family_2 && self.max_copy_intersection <= 36
    }
}

/// Exhaustive check of the crossing classes on 12 vertices.
pub fn r6_partition_check() -> PartitionReport {
    let big = clique_blocks(&[U_MASK, W_MASK]);
    let crossing = {
        let mut g = Hypergraph3::empty(12).expect("n = 12");
        for rank in 0..triple_count(12) {
            if !big.has_rank(rank) {
                g.set_raw(rank);
            }
        }
        g
    };
    let classes = partition_pair_classes();
    let in_b: Vec<[u64; 4]> = classes
        .iter()
        .map(|c| {
            let g = c.graph().intersection(&crossing).expect("same n");
            let mut w = [0u64; 4];
            w.copy_from_slice(g.words());
            w
        })
        .collect();
    let counts: Vec<u64> = in_b.iter().map(|w| w.iter().map(|x| x.count_ones() as u64).sum()).collect();
    let disjoint = |a: &[u64; 4], b: &[u64; 4]| a.iter().zip(b).all(|(x, y)| x & y == 0);

    let mut pairs = Vec::new();
    for i in 0..classes.len() {
        for j in i + 1..classes.len() {
            if disjoint(&in_b[i], &in_b[j]) {
                pairs.push((i, j));
            }
        }
    }
    let mut max_family = if classes.is_empty() { 0 } else { 1 };
    if !pairs.is_empty() {
        max_family = 2;
    }
    'outer: for &(i, j) in &pairs {
        for k in j + 1..classes.len() {
            if disjoint(&in_b[i], &in_b[k]) && disjoint(&in_b[j], &in_b[k]) {
                max_family = 3;
                break 'outer;
            }
        }
    }

    // every split of the 12 vertices into two 6-sets (vertex 0 in the first)
    let mut max_copy = 0;
    let mut copies = 0;
    for first in 0u32..(1 << 12) {
        if first.count_ones() != 6 || first & 1 == 0 {
            continue;
        }
        let copy = clique_blocks(&[first, 0xfff & !first]);
        let shared = copy.intersection(&crossing).expect("same n").edge_count() as u64;
        max_copy = max_copy.max(shared);
        copies += 1;
    }

    let bipartite_edges = crossing.edge_count() as u64;
    PartitionReport {
        class_count: classes.len(),
        min_class_intersection: counts.iter().copied().min().unwrap_or(0),
        max_class_intersection: counts.iter().copied().max().unwrap_or(0),
        bipartite_edges,
        max_disjoint_family: max_family,
        disjoint_pair: pairs.first().map(|&(i, j)| (classes[i], classes[j])),
        max_copy_intersection: max_copy,
        copies_checked: copies,
        every_class_36: counts.iter().all(|&c| c == 36),
        bipartite_180: bipartite_edges == 180,
        max_family_2: max_family == 2,
    }
}
