//! Exact maximization of the edge count over `n`-vertex 3-graphs subject to
//! a [`ConstraintSet`].
//!
//! The search decides triples in colex order, so all triples with largest
//! vertex `j` ("level `j`") are decided before level `j + 1`. Pruning:
//!
//! * a triple that would complete a forbidden pattern together with one or
//!   two included edges is blocked as soon as those edges are included, and
//!   blocked triples are never branched on;
//! * symmetry: only labelings in which each vertex `j >= 3` has minimum
//!   degree in the induced graph on `0..=j` are explored. Every graph has
//!   such a labeling (repeatedly remove a minimum degree vertex), and in it
//!   `{0,1,2}` is an edge whenever the graph is nonempty, so the first
//!   included edge is always `{0,1,2}`;
//! * bound: the included count plus the compatible undecided triples, level
//!   by level, capped by `m(j+1) <= m(j) * (j+1) / (j-2)`, which follows from
//!   the minimum degree of the graph on `0..=j` being at most `3 m(j+1)/(j+1)`.
//!
//! Required and excluded structure, connectivity and the no-common-vertex
//! flag are checked at leaves. Every reported witness is re-verified with the
//! detectors in [`crate::patterns`].

use std::collections::HashSet;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{triple_count, Hypergraph3, TripleId};
use crate::iso::{canonical_form, embeds_into, CanonicalForm};
use crate::patterns::{
    catalog, common_vertex, contains, EdgeSignature, Pattern, PatternName,
};

/// Largest vertex count accepted by the search.
pub const SEARCH_MAX_VERTICES: usize = 16;

/// Structural side conditions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub connected: bool,
    pub intersecting: bool,
    pub no_common_vertex: bool,
}

impl Flags {
    /// Parses a comma separated list such as `connected,intersecting`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut f = Flags::default();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match tok {
                "connected" => f.connected = true,
                "intersecting" => f.intersecting = true,
                "no_common_vertex" | "no-common-vertex" => f.no_common_vertex = true,
                other => return Err(Error::InvalidQuery(format!("unknown flag `{other}`"))),
            }
        }
        Ok(f)
    }

    pub fn names(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if self.connected {
            v.push("connected");
        }
        if self.intersecting {
            v.push("intersecting");
        }
        if self.no_common_vertex {
            v.push("no_common_vertex");
        }
        v
    }
}

/// A structure the graph must contain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Required {
    Pattern(PatternName),
    Graph(Hypergraph3),
}

impl Required {
    fn vertices(&self) -> usize {
        match self {
            Required::Pattern(p) => catalog(*p).vertices(),
            Required::Graph(g) => g.n(),
        }
    }

    fn describe(&self) -> String {
        match self {
            Required::Pattern(p) => p.to_string(),
            Required::Graph(g) => format!("graph(n={},m={})", g.n(), g.edge_count()),
        }
    }

    fn is_in(&self, h: &Hypergraph3) -> bool {
        match self {
            Required::Pattern(p) => contains(h, &catalog(*p)).is_some(),
            Required::Graph(g) => embeds_into(g, h),
        }
    }
}

/// Full description of a maximization instance.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstraintSet {
    pub forbidden: Vec<PatternName>,
    pub required: Option<Required>,
    pub excluded_supergraphs: Vec<Hypergraph3>,
    pub flags: Flags,
}

impl ConstraintSet {
    pub fn forbidding(names: &[PatternName]) -> Self {
        ConstraintSet { forbidden: names.to_vec(), ..Default::default() }
    }

    pub fn requiring(mut self, req: Required) -> Self {
        self.required = Some(req);
        self
    }

    pub fn excluding(mut self, graphs: Vec<Hypergraph3>) -> Self {
        self.excluded_supergraphs = graphs;
        self
    }

    pub fn with_flags(mut self, flags: Flags) -> Self {
        self.flags = flags;
        self
    }

    /// Independent check of every constraint; returns the first violation.
    pub fn violation(&self, h: &Hypergraph3) -> Option<String> {
        for &name in &self.forbidden {
            if contains(h, &catalog(name)).is_some() {
                return Some(format!("contains forbidden {name}"));
            }
        }
        if let Some(req) = &self.required {
            if !req.is_in(h) {
                return Some(format!("does not contain required {}", req.describe()));
            }
        }
        if self.flags.intersecting && !crate::patterns::is_intersecting(h) {
            return Some("not intersecting".into());
        }
        if self.flags.connected && !h.is_connected() {
            return Some("not connected".into());
        }
        if self.flags.no_common_vertex && common_vertex(h).is_some() {
            return Some("has a common vertex".into());
        }
        for (i, x) in self.excluded_supergraphs.iter().enumerate() {
            if embeds_into(h, x) {
                return Some(format!("embeds into excluded supergraph #{i}"));
            }
        }
        None
    }

    pub fn is_satisfied_by(&self, h: &Hypergraph3) -> bool {
        self.violation(h).is_none()
    }

    pub fn describe(&self) -> String {
        let forb: Vec<String> = self.forbidden.iter().map(|p| p.to_string()).collect();
        let mut s = format!("forbid={{{}}}", forb.join(","));
        if let Some(r) = &self.required {
            s.push_str(&format!(" require={}", r.describe()));
        }
        if !self.excluded_supergraphs.is_empty() {
            s.push_str(&format!(" excluded={}", self.excluded_supergraphs.len()));
        }
        let flags = self.flags.names();
        if !flags.is_empty() {
            s.push_str(&format!(" flags={}", flags.join(",")));
        }
        s
    }
}

/// Order in which triples of the current level are branched on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branching {
    #[default]
    Colex,
    /// Within a level, the compatible triple whose vertices have the largest
    /// degree sum first.
    MostConstrained,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub time_limit: Option<Duration>,
    pub node_limit: Option<u64>,
    pub enumerate_all: bool,
    pub worker_count: usize,
    pub witness_limit: usize,
    pub branching: Branching,
    /// Feasible graphs used as starting incumbents.
    pub seeds: Vec<Hypergraph3>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            time_limit: None,
            node_limit: None,
            enumerate_all: false,
            worker_count: 1,
            witness_limit: 10_000,
            branching: Branching::Colex,
            seeds: Vec::new(),
        }
    }
}

impl SearchConfig {
    pub fn enumerating() -> Self {
        SearchConfig { enumerate_all: true, ..Default::default() }
    }

    pub fn with_time_limit(mut self, d: Duration) -> Self {
        self.time_limit = Some(d);
        self
    }

    pub fn with_workers(mut self, w: usize) -> Self {
        self.worker_count = w.max(1);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Exact,
    LowerBoundOnly,
    Infeasible,
    NotDefined,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Status::Exact => "Exact",
            Status::LowerBoundOnly => "LowerBoundOnly",
            Status::Infeasible => "Infeasible",
            Status::NotDefined => "NotDefined",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub elapsed_ms: u64,
    pub subtrees: usize,
    pub witnesses_truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub status: Status,
    pub value: Option<usize>,
    pub witnesses: Vec<Hypergraph3>,
    pub stats: SearchStats,
}

/// Machine-readable result line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub query: String,
    pub status: Status,
    pub value: Option<usize>,
    pub witness_count: usize,
    pub witnesses: Vec<Vec<[usize; 3]>>,
    pub nodes: u64,
    pub elapsed_ms: u64,
}

impl SearchOutcome {
    pub fn record(&self, query: impl Into<String>) -> ResultRecord {
        ResultRecord {
            query: query.into(),
            status: self.status,
            value: self.value,
            witness_count: self.witnesses.len(),
            witnesses: self.witnesses.iter().map(Hypergraph3::edge_list).collect(),
            nodes: self.stats.nodes,
            elapsed_ms: self.stats.elapsed_ms,
        }
    }

    fn without_value(status: Status, started: Instant) -> Self {
        SearchOutcome {
            status,
            value: None,
            witnesses: Vec::new(),
            stats: SearchStats { elapsed_ms: started.elapsed().as_millis() as u64, ..Default::default() },
        }
    }
}

/// Answer of [`decide_exists`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    Yes(Hypergraph3),
    No,
    Unknown,
}

// ---------------------------------------------------------------------------
// fixed-width bit sets

type Bits<const W: usize> = [u64; W];

#[inline]
fn popcnt3<const W: usize>(a: &Bits<W>, not_b: &Bits<W>, c: &Bits<W>) -> u32 {
    let mut s = 0;
    for i in 0..W {
        s += (a[i] & !not_b[i] & c[i]).count_ones();
    }
    s
}

#[inline]
fn set_bit<const W: usize>(b: &mut Bits<W>, i: usize) {
    b[i >> 6] |= 1 << (i & 63);
}

#[inline]
fn clear_bit<const W: usize>(b: &mut Bits<W>, i: usize) {
    b[i >> 6] &= !(1 << (i & 63));
}

#[inline]
fn or_into<const W: usize>(dst: &mut Bits<W>, src: &Bits<W>) {
    for i in 0..W {
        dst[i] |= src[i];
    }
}

fn for_each_bit<const W: usize>(b: &Bits<W>, mut f: impl FnMut(usize)) {
    for (i, &w) in b.iter().enumerate() {
        let mut w = w;
        while w != 0 {
            f(i * 64 + w.trailing_zeros() as usize);
            w &= w - 1;
        }
    }
}

// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
struct Node<const W: usize> {
    inc: Bits<W>,
    blocked: Bits<W>,
    undecided: Bits<W>,
    m: u32,
    m_lower: u32,
    level: u8,
    req_met: bool,
    deg: [u8; SEARCH_MAX_VERTICES],
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Optimize,
    Enumerate,
    Decide(u32),
}

#[inline]
fn key(value: u32, pos: usize) -> u64 {
    ((value as u64 + 1) << 32) | (u32::MAX as u64 - pos as u64)
}

#[inline]
fn key_value(k: u64) -> i64 {
    (k >> 32) as i64 - 1
}

struct Shared {
    best: AtomicU64,
    nodes: AtomicU64,
    limit_hit: AtomicBool,
    found: AtomicBool,
    deadline: Option<Instant>,
    node_limit: Option<u64>,
}

struct Solver<'a, const W: usize> {
    n: usize,
    t: usize,
    levels: Vec<Bits<W>>,
    pair_block: Vec<Bits<W>>,
    triple_block: Vec<Bits<W>>,
    has_triple_block: bool,
    generic: Vec<Pattern>,
    masks: Vec<u32>,
    track_required_m: bool,
    constraints: &'a ConstraintSet,
    mode: Mode,
    branching: Branching,
    witness_limit: usize,
    shared: &'a Shared,
}

struct Subtree {
    pos: usize,
    best_key: u64,
    witness: Option<Hypergraph3>,
    value: i64,
    forms: HashSet<CanonicalForm>,
    truncated: bool,
    local_nodes: u64,
    decided: Option<Hypergraph3>,
}

impl Subtree {
    fn new(pos: usize) -> Self {
        Subtree {
            pos,
            best_key: 0,
            witness: None,
            value: -1,
            forms: HashSet::new(),
            truncated: false,
            local_nodes: 0,
            decided: None,
        }
    }
}

impl<'a, const W: usize> Solver<'a, W> {
    fn new(
        n: usize,
        forbidden: &[Pattern],
        constraints: &'a ConstraintSet,
        mode: Mode,
        config: &SearchConfig,
        shared: &'a Shared,
    ) -> Self {
        let t = triple_count(n);
        let masks: Vec<u32> = (0..t).map(|r| TripleId::from_rank_unchecked(r).mask()).collect();
        let mut levels = vec![[0u64; W]; n];
        for r in 0..t {
            set_bit(&mut levels[TripleId::from_rank_unchecked(r).top()], r);
        }

        let mut two: Vec<u8> = Vec::new();
        let mut three: Vec<EdgeSignature> = Vec::new();
        let mut generic = Vec::new();
        for p in forbidden {
            match p.signature() {
                Some(EdgeSignature::Two(k)) => two.push(k),
                Some(sig @ EdgeSignature::Three(..)) => three.push(sig),
                Some(_) => {}
                None => generic.push(p.clone()),
            }
        }
        if constraints.flags.intersecting {
            two.push(0);
        }

        let mut pair_block = vec![[0u64; W]; t];
        if !two.is_empty() {
            for a in 0..t {
                for b in 0..t {
                    if a != b && two.contains(&((masks[a] & masks[b]).count_ones() as u8)) {
                        set_bit(&mut pair_block[a], b);
                    }
                }
            }
        }

        let has_triple_block = !three.is_empty();
        let mut triple_block = Vec::new();
        if has_triple_block {
            // pairwise intersection sizes that occur in some forbidden type
            let mut pair_ok = [false; 4];
            for s in &three {
                if let EdgeSignature::Three(p, _) = s {
                    for &k in p {
                        pair_ok[k as usize] = true;
                    }
                }
            }
            triple_block = vec![[0u64; W]; t * t];
            for a in 0..t {
                for b in a + 1..t {
                    if !pair_ok[(masks[a] & masks[b]).count_ones() as usize] {
                        continue;
                    }
                    let mut row = [0u64; W];
                    for c in 0..t {
                        if c == a || c == b {
                            continue;
                        }
                        if three.contains(&EdgeSignature::three(masks[a], masks[b], masks[c])) {
                            set_bit(&mut row, c);
                        }
                    }
                    triple_block[a * t + b] = row;
                    triple_block[b * t + a] = row;
                }
            }
        }

        let track_required_m = matches!(constraints.required, Some(Required::Pattern(PatternName::M)));
        Solver {
            n,
            t,
            levels,
            pair_block,
            triple_block,
            has_triple_block,
            generic,
            masks,
            track_required_m,
            constraints,
            mode,
            branching: config.branching,
            witness_limit: config.witness_limit.max(1),
            shared,
        }
    }

    fn root(&self) -> Node<W> {
        let mut undecided = [0u64; W];
        for r in 0..self.t {
            set_bit(&mut undecided, r);
        }
        let mut node = Node {
            inc: [0; W],
            blocked: [0; W],
            undecided,
            m: 0,
            m_lower: 0,
            level: 2,
            req_met: false,
            deg: [0; SEARCH_MAX_VERTICES],
        };
        // {0,1,2} is always the first edge
        self.include(&mut node, 0);
        clear_bit(&mut node.undecided, 0);
        node
    }

    fn include(&self, node: &mut Node<W>, r: usize) {
        if self.has_triple_block {
            let base = r * self.t;
            let inc = node.inc;
            for_each_bit(&inc, |f| or_into(&mut node.blocked, &self.triple_block[base + f]));
        }
        or_into(&mut node.blocked, &self.pair_block[r]);
        if self.track_required_m && !node.req_met {
            let mr = self.masks[r];
            let mut met = false;
            for_each_bit(&node.inc, |f| met |= self.masks[f] & mr == 0);
            node.req_met = met;
        }
        set_bit(&mut node.inc, r);
        node.m += 1;
        let [a, b, c] = TripleId::from_rank_unchecked(r).vertices();
        node.deg[a] += 1;
        node.deg[b] += 1;
        node.deg[c] += 1;
    }

    fn generic_ok(&self, node: &Node<W>, r: usize) -> bool {
        if self.generic.is_empty() {
            return true;
        }
        let mut words = node.inc;
        set_bit(&mut words, r);
        let h = Hypergraph3::from_words(self.n, &words);
        self.generic.iter().all(|p| contains(&h, p).is_none())
    }

    fn upper_bound(&self, node: &Node<W>) -> u32 {
        let j = node.level as usize;
        let mut a = node.m + popcnt3(&node.undecided, &node.blocked, &self.levels[j]);
        if j >= 3 {
            a = a.min(node.m_lower * (j as u32 + 1) / (j as u32 - 2));
        }
        for k in j + 1..self.n {
            let add = popcnt3(&node.undecided, &node.blocked, &self.levels[k]);
            a = (a + add).min(a * (k as u32 + 1) / (k as u32 - 2));
        }
        a
    }

    #[inline]
    fn pruned(&self, bound: u32, sub: &Subtree) -> bool {
        let best = self.shared.best.load(Ordering::Relaxed);
        match self.mode {
            Mode::Optimize => key(bound, sub.pos) <= best,
            Mode::Enumerate => (bound as i64) < key_value(best),
            Mode::Decide(target) => bound < target,
        }
    }

    fn stop(&self, sub: &mut Subtree) -> bool {
        sub.local_nodes += 1;
        if sub.local_nodes & 63 == 0 {
            let total = self.shared.nodes.fetch_add(64, Ordering::Relaxed) + 64;
            if self.shared.node_limit.is_some_and(|l| total >= l)
                || self.shared.deadline.is_some_and(|d| Instant::now() >= d)
            {
                self.shared.limit_hit.store(true, Ordering::Relaxed);
            }
        }
        self.shared.limit_hit.load(Ordering::Relaxed) || self.shared.found.load(Ordering::Relaxed)
    }

    fn degeneracy_ok(&self, node: &Node<W>, j: usize) -> bool {
        let dj = node.deg[j];
        node.deg[..j].iter().all(|&d| d >= dj)
    }

    /// Skips finished levels; returns the candidate triples of the current
    /// level, or `None` when the node is dead.
    fn settle(&self, node: &mut Node<W>) -> Option<Bits<W>> {
        loop {
            let j = node.level as usize;
            if j == self.n {
                return Some([0; W]);
            }
            let mut cand = [0u64; W];
            let mut any = false;
            for i in 0..W {
                cand[i] = node.undecided[i] & !node.blocked[i] & self.levels[j][i];
                any |= cand[i] != 0;
            }
            if any {
                return Some(cand);
            }
            if j >= 3 && !self.degeneracy_ok(node, j) {
                return None;
            }
            for i in 0..W {
                node.undecided[i] &= !self.levels[j][i];
            }
            node.level += 1;
            node.m_lower = node.m;
        }
    }

    fn choose(&self, node: &Node<W>, cand: &Bits<W>) -> usize {
        match self.branching {
            Branching::Colex => {
                let i = cand.iter().position(|&w| w != 0).expect("nonempty candidates");
                i * 64 + cand[i].trailing_zeros() as usize
            }
            Branching::MostConstrained => {
                let mut best = (0u32, usize::MAX);
                for_each_bit(cand, |r| {
                    let [a, b, c] = TripleId::from_rank_unchecked(r).vertices();
                    let s = node.deg[a] as u32 + node.deg[b] as u32 + node.deg[c] as u32;
                    if best.1 == usize::MAX || s > best.0 {
                        best = (s, r);
                    }
                });
                best.1
            }
        }
    }

    fn dfs(&self, mut node: Node<W>, sub: &mut Subtree, frontier: Option<(&mut Vec<Node<W>>, usize)>) {
        let mut frontier = frontier;
        loop {
            if self.stop(sub) {
                return;
            }
            let Some(cand) = self.settle(&mut node) else {
                return;
            };
            if let Some((list, split)) = frontier.as_mut() {
                if node.level as usize >= *split {
                    list.push(node);
                    return;
                }
            }
            if node.level as usize == self.n {
                self.leaf(&node, sub);
                return;
            }
            if self.pruned(self.upper_bound(&node), sub) {
                return;
            }
            let r = self.choose(&node, &cand);
            clear_bit(&mut node.undecided, r);
            if self.generic_ok(&node, r) {
                let mut child = node;
                self.include(&mut child, r);
                let f = frontier.as_mut().map(|(l, s)| (&mut **l, *s));
                self.dfs(child, sub, f);
            }
            // exclusion branch continues in this frame
        }
    }

    fn leaf(&self, node: &Node<W>, sub: &mut Subtree) {
        let value = node.m;
        if self.pruned(value, sub) {
            return;
        }
        let h = Hypergraph3::from_words(self.n, &node.inc);
        if !self.leaf_ok(&h, node) {
            return;
        }
        match self.mode {
            Mode::Optimize => {
                let k = key(value, sub.pos);
                if k > sub.best_key {
                    sub.best_key = k;
                    sub.witness = Some(h);
                }
                self.shared.best.fetch_max(k, Ordering::Relaxed);
            }
            Mode::Enumerate => {
                let v = value as i64;
                self.shared.best.fetch_max(key(value, 0), Ordering::Relaxed);
                if v > sub.value {
                    sub.value = v;
                    sub.forms.clear();
                    sub.truncated = false;
                }
                if v == sub.value {
                    if sub.forms.len() >= self.witness_limit {
                        let f = canonical_form(&h);
                        if !sub.forms.contains(&f) {
                            sub.truncated = true;
                        }
                    } else {
                        sub.forms.insert(canonical_form(&h));
                    }
                }
            }
            Mode::Decide(_) => {
                sub.decided = Some(h);
                self.shared.found.store(true, Ordering::Relaxed);
            }
        }
    }

    fn leaf_ok(&self, h: &Hypergraph3, node: &Node<W>) -> bool {
        let c = self.constraints;
        if let Some(req) = &c.required {
            let ok = if self.track_required_m { node.req_met } else { req.is_in(h) };
            if !ok {
                return false;
            }
        }
        if c.flags.connected && !h.is_connected() {
            return false;
        }
        if c.flags.no_common_vertex && common_vertex(h).is_some() {
            return false;
        }
        !c.excluded_supergraphs.iter().any(|x| embeds_into(h, x))
    }
}

struct Prepared {
    forbidden: Vec<Pattern>,
    /// A single edge is forbidden, so only the empty graph remains.
    only_empty: bool,
}

fn prepare(n: usize, constraints: &ConstraintSet) -> Result<std::result::Result<Prepared, Status>> {
    if n == 0 || n > SEARCH_MAX_VERTICES {
        return Err(Error::Capacity(format!(
            "search supports 1..={SEARCH_MAX_VERTICES} vertices, got {n}"
        )));
    }
    for x in &constraints.excluded_supergraphs {
        if x.n() != n {
            return Err(Error::InvalidQuery(format!(
                "excluded supergraph has {} vertices, query has {n}",
                x.n()
            )));
        }
        if x.edge_count() == triple_count(n) {
            // every graph embeds into the complete graph
            return Ok(Err(Status::NotDefined));
        }
    }
    if let Some(req) = &constraints.required {
        if req.vertices() > n {
            return Ok(Err(Status::Infeasible));
        }
    }
    let mut forbidden = Vec::new();
    for &name in &constraints.forbidden {
        let p = catalog(name);
        if p.vertices() > n {
            continue;
        }
        if p.edges().is_empty() {
            // every graph on at least that many vertices contains it
            return Ok(Err(Status::Infeasible));
        }
        forbidden.push(p);
    }
    let only_empty = forbidden.iter().any(|p| p.edges().len() == 1);
    Ok(Ok(Prepared { forbidden, only_empty }))
}

fn run<const W: usize>(
    n: usize,
    prep: &Prepared,
    constraints: &ConstraintSet,
    mode: Mode,
    config: &SearchConfig,
    started: Instant,
) -> (Vec<Subtree>, Shared) {
    let shared = Shared {
        best: AtomicU64::new(0),
        nodes: AtomicU64::new(0),
        limit_hit: AtomicBool::new(false),
        found: AtomicBool::new(false),
        deadline: config.time_limit.map(|d| started + d),
        node_limit: config.node_limit,
    };
    let mut results = Vec::new();

    // seeds and the empty graph share position 0
    let mut seed_sub = Subtree::new(0);
    let empty = Hypergraph3::empty(n).expect("valid n");
    let mut seeds: Vec<Hypergraph3> = vec![empty];
    seeds.extend(config.seeds.iter().filter(|s| s.n() == n).cloned());
    for s in seeds {
        if !constraints.is_satisfied_by(&s) {
            continue;
        }
        let v = s.edge_count() as u32;
        match mode {
            Mode::Optimize => {
                let k = key(v, 0);
                if k > seed_sub.best_key {
                    seed_sub.best_key = k;
                    seed_sub.witness = Some(s);
                    shared.best.fetch_max(k, Ordering::Relaxed);
                }
            }
            Mode::Enumerate => {
                shared.best.fetch_max(key(v, 0), Ordering::Relaxed);
                let vi = v as i64;
                if vi > seed_sub.value {
                    seed_sub.value = vi;
                    seed_sub.forms.clear();
                }
                if vi == seed_sub.value {
                    seed_sub.forms.insert(canonical_form(&s));
                }
            }
            Mode::Decide(target) => {
                if v >= target {
                    seed_sub.decided = Some(s);
                    shared.found.store(true, Ordering::Relaxed);
                }
            }
        }
    }

    if n >= 3 && !prep.only_empty && !shared.found.load(Ordering::Relaxed) {
        let solver = Solver::<W>::new(n, &prep.forbidden, constraints, mode, config, &shared);
        let split = if config.worker_count > 1 { n.min(6) } else { n.min(5) };
        let mut frontier = Vec::new();
        let mut gen_sub = Subtree::new(0);
        solver.dfs(solver.root(), &mut gen_sub, Some((&mut frontier, split)));
        seed_sub.local_nodes += gen_sub.local_nodes;
        let solve = |(i, node): (usize, Node<W>)| {
            let mut sub = Subtree::new(i + 1);
            solver.dfs(node, &mut sub, None);
            sub
        };
        let subs: Vec<Subtree> = if config.worker_count > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(config.worker_count)
                .build()
                .expect("thread pool");
            pool.install(|| frontier.into_par_iter().enumerate().with_max_len(1).map(solve).collect())
        } else {
            frontier.into_iter().enumerate().map(solve).collect()
        };
        results.push(seed_sub);
        results.extend(subs);
    } else {
        results.push(seed_sub);
    }
    (results, shared)
}

fn dispatch(
    n: usize,
    prep: &Prepared,
    constraints: &ConstraintSet,
    mode: Mode,
    config: &SearchConfig,
    started: Instant,
) -> (Vec<Subtree>, Shared) {
    match triple_count(n).div_ceil(64) {
        0 | 1 => run::<1>(n, prep, constraints, mode, config, started),
        2 => run::<2>(n, prep, constraints, mode, config, started),
        3 => run::<3>(n, prep, constraints, mode, config, started),
        4 => run::<4>(n, prep, constraints, mode, config, started),
        5 => run::<5>(n, prep, constraints, mode, config, started),
        6 => run::<6>(n, prep, constraints, mode, config, started),
        _ => run::<9>(n, prep, constraints, mode, config, started),
    }
}

fn total_nodes(subs: &[Subtree], shared: &Shared) -> u64 {
    let counted = shared.nodes.load(Ordering::Relaxed);
    let local: u64 = subs.iter().map(|s| s.local_nodes & 63).sum();
    counted + local
}

/// Maximum edge count over `n`-vertex graphs satisfying `constraints`.
pub fn max_edges(n: usize, constraints: &ConstraintSet, config: &SearchConfig) -> Result<SearchOutcome> {
    let started = Instant::now();
    let prep = match prepare(n, constraints)? {
        Ok(p) => p,
        Err(status) => return Ok(SearchOutcome::without_value(status, started)),
    };
    let mode = if config.enumerate_all { Mode::Enumerate } else { Mode::Optimize };
    let (subs, shared) = dispatch(n, &prep, constraints, mode, config, started);
    let limit_hit = shared.limit_hit.load(Ordering::Relaxed);
    let mut stats = SearchStats {
        nodes: total_nodes(&subs, &shared),
        elapsed_ms: 0,
        subtrees: subs.len().saturating_sub(1),
        witnesses_truncated: false,
    };

    let (value, witnesses) = if config.enumerate_all {
        let best = subs.iter().map(|s| s.value).max().unwrap_or(-1);
        let mut forms: Vec<CanonicalForm> = Vec::new();
        for s in subs.iter().filter(|s| s.value == best && best >= 0) {
            stats.witnesses_truncated |= s.truncated;
            forms.extend(s.forms.iter().cloned());
        }
        forms.sort();
        forms.dedup();
        if forms.len() > config.witness_limit {
            forms.truncate(config.witness_limit);
            stats.witnesses_truncated = true;
        }
        let value = (best >= 0).then_some(best as usize);
        (value, forms.iter().map(CanonicalForm::to_graph).collect::<Vec<_>>())
    } else {
        let best = subs.iter().filter(|s| s.witness.is_some()).max_by_key(|s| s.best_key);
        match best {
            Some(s) => (Some(key_value(s.best_key) as usize), vec![s.witness.clone().expect("witness")]),
            None => (None, Vec::new()),
        }
    };

    for w in &witnesses {
        if let Some(v) = constraints.violation(w) {
            return Err(Error::InvalidQuery(format!("search produced an invalid witness: {v}")));
        }
        if Some(w.edge_count()) != value {
            return Err(Error::InvalidQuery("search witness has the wrong edge count".into()));
        }
    }

    let status = match (limit_hit, value) {
        (true, _) => Status::LowerBoundOnly,
        (false, Some(_)) => Status::Exact,
        (false, None) => Status::Infeasible,
    };
    stats.elapsed_ms = started.elapsed().as_millis() as u64;
    Ok(SearchOutcome { status, value, witnesses, stats })
}

/// Whether some graph satisfying `constraints` has at least `target` edges.
pub fn decide_exists(
    n: usize,
    constraints: &ConstraintSet,
    target: usize,
    config: &SearchConfig,
) -> Result<Decision> {
    let started = Instant::now();
    if target > triple_count(n.min(SEARCH_MAX_VERTICES)) {
        return Err(Error::InvalidQuery(format!("target {target} exceeds C({n},3)")));
    }
    let prep = match prepare(n, constraints)? {
        Ok(p) => p,
        Err(_) => return Ok(Decision::No),
    };
    let (subs, shared) = dispatch(n, &prep, constraints, Mode::Decide(target as u32), config, started);
    if let Some(h) = subs.into_iter().find_map(|s| s.decided) {
        if let Some(v) = constraints.violation(&h) {
            return Err(Error::InvalidQuery(format!("search produced an invalid witness: {v}")));
        }
        return Ok(Decision::Yes(h));
    }
    if shared.limit_hit.load(Ordering::Relaxed) {
        Ok(Decision::Unknown)
    } else {
        Ok(Decision::No)
    }
}
