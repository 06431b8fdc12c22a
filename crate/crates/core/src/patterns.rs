//! The closed catalog of small 3-graphs used as forbidden or required
//! substructures, subgraph detection and counting, and the constructions of
//! the extremal graphs.

use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{binom, BitIter, Hypergraph3, MAX_VERTICES};

/// Names of the catalog patterns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PatternName {
    /// Loose path with three edges.
    P,
    /// Loose triangle.
    C,
    /// Two disjoint edges.
    M,
    /// Two edges sharing exactly one vertex.
    P2,
    /// `P2` plus a disjoint edge.
    P2uK3,
    /// Complete 3-graph on `k <= 6` vertices.
    K(u8),
}

impl fmt::Display for PatternName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternName::P => write!(f, "P"),
            PatternName::C => write!(f, "C"),
            PatternName::M => write!(f, "M"),
            PatternName::P2 => write!(f, "P2"),
            PatternName::P2uK3 => write!(f, "P2uK3"),
            PatternName::K(k) => write!(f, "K{k}"),
        }
    }
}

impl FromStr for PatternName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "P" | "P3" => Ok(PatternName::P),
            "C" | "C3" => Ok(PatternName::C),
            "M" | "M2" => Ok(PatternName::M),
            "P2" => Ok(PatternName::P2),
            "P2uK3" | "P2+K3" => Ok(PatternName::P2uK3),
            _ => {
                if let Some(k) = t.strip_prefix('K').and_then(|k| k.parse::<u8>().ok()) {
                    if (1..=6).contains(&k) {
                        return Ok(PatternName::K(k));
                    }
                }
                Err(Error::UnknownPattern(s.to_string()))
            }
        }
    }
}

/// Parses a comma separated list of pattern names.
pub fn parse_pattern_list(s: &str) -> Result<Vec<PatternName>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(str::parse).collect()
}

/// A catalog pattern with its automorphism count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    name: PatternName,
    vertices: usize,
    edges: Vec<[usize; 3]>,
    automorphism_count: u64,
}

impl Pattern {
    pub fn name(&self) -> PatternName {
        self.name
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[[usize; 3]] {
        &self.edges
    }

    pub fn automorphism_count(&self) -> u64 {
        self.automorphism_count
    }

    /// The pattern as a graph on its own vertex set.
    pub fn graph(&self) -> Hypergraph3 {
        Hypergraph3::from_triples(self.vertices.max(1), self.edges.iter().copied())
            .expect("catalog patterns are valid")
    }

    /// Configuration type of the edge set when it has at most three edges.
    pub(crate) fn signature(&self) -> Option<EdgeSignature> {
        let masks: Vec<u32> = self.edges.iter().map(|t| triple_mask(*t)).collect();
        EdgeSignature::of(&masks)
    }
}

fn triple_mask(t: [usize; 3]) -> u32 {
    (1 << t[0]) | (1 << t[1]) | (1 << t[2])
}

fn raw_edges(name: PatternName) -> (usize, Vec<[usize; 3]>) {
    match name {
        PatternName::P => (7, vec![[0, 1, 2], [2, 3, 4], [4, 5, 6]]),
        PatternName::C => (6, vec![[0, 1, 2], [2, 3, 4], [0, 4, 5]]),
        PatternName::M => (6, vec![[0, 1, 2], [3, 4, 5]]),
        PatternName::P2 => (5, vec![[0, 1, 2], [2, 3, 4]]),
        PatternName::P2uK3 => (8, vec![[0, 1, 2], [2, 3, 4], [5, 6, 7]]),
        PatternName::K(k) => {
            let k = k as usize;
            let mut e = Vec::new();
            for c in 0..k {
                for b in 0..c {
                    for a in 0..b {
                        e.push([a, b, c]);
                    }
                }
            }
            (k, e)
        }
    }
}

/// Counts vertex permutations preserving the edge set, by brute force.
fn brute_force_automorphisms(n: usize, edges: &[[usize; 3]]) -> u64 {
    let set: std::collections::HashSet<u32> = edges.iter().map(|t| triple_mask(*t)).collect();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut count = 0u64;
    // Heap's algorithm
    let mut c = vec![0usize; n];
    let check = |p: &[usize]| {
        edges
            .iter()
            .all(|t| set.contains(&((1 << p[t[0]]) | (1 << p[t[1]]) | (1 << p[t[2]]))))
    };
    if check(&perm) {
        count += 1;
    }
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            if check(&perm) {
                count += 1;
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    count
}

static CATALOG: LazyLock<Vec<Pattern>> = LazyLock::new(|| {
    let mut names = vec![
        PatternName::P,
        PatternName::C,
        PatternName::M,
        PatternName::P2,
        PatternName::P2uK3,
    ];
    names.extend((1..=6).map(PatternName::K));
    names
        .into_iter()
        .map(|name| {
            let (vertices, edges) = raw_edges(name);
            let automorphism_count = brute_force_automorphisms(vertices, &edges);
            Pattern { name, vertices, edges, automorphism_count }
        })
        .collect()
});

/// Looks up a catalog pattern.
pub fn catalog(name: PatternName) -> Pattern {
    CATALOG
        .iter()
        .find(|p| p.name == name)
        .cloned()
        .expect("every PatternName is in the catalog")
}

/// Looks up a catalog pattern by its textual name.
pub fn catalog_by_name(name: &str) -> Result<Pattern> {
    Ok(catalog(name.parse()?))
}

/// Isomorphism type of a set of at most three distinct edges.
///
/// For three edges the Venn region sizes are fixed by the triple
/// intersection and the pairwise intersection sizes, and the symmetric group
/// on the edges acts on the three pairs as the full symmetric group, so the
/// sorted pairwise sizes together with the common size classify the set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum EdgeSignature {
    Empty,
    One,
    Two(u8),
    Three([u8; 3], u8),
}

impl EdgeSignature {
    pub(crate) fn of(masks: &[u32]) -> Option<Self> {
        match masks {
            [] => Some(EdgeSignature::Empty),
            [_] => Some(EdgeSignature::One),
            [a, b] => Some(EdgeSignature::Two((a & b).count_ones() as u8)),
            [a, b, c] => Some(Self::three(*a, *b, *c)),
            _ => None,
        }
    }

    #[inline]
    pub(crate) fn three(a: u32, b: u32, c: u32) -> Self {
        let mut p = [
            (a & b).count_ones() as u8,
            (a & c).count_ones() as u8,
            (b & c).count_ones() as u8,
        ];
        p.sort_unstable();
        EdgeSignature::Three(p, (a & b & c).count_ones() as u8)
    }
}

/// Backtracking subgraph matcher: injective vertex maps sending every
/// pattern edge to a host edge.
pub(crate) struct Matcher<'a> {
    host_n: usize,
    host_masks: Vec<u32>,
    host_set: &'a Hypergraph3,
    incident: Vec<Vec<u32>>,
    host_deg: Vec<usize>,
    order: Vec<[usize; 3]>,
    pattern_deg: Vec<usize>,
    pattern_n: usize,
    isolated: Vec<usize>,
}

impl<'a> Matcher<'a> {
    pub(crate) fn new(pattern_n: usize, pattern_edges: &[[usize; 3]], host: &'a Hypergraph3) -> Self {
        let host_masks = host.edge_masks();
        let n = host.n();
        let mut incident = vec![Vec::new(); n];
        let mut host_deg = vec![0; n];
        for &m in &host_masks {
            for v in BitIter(m) {
                incident[v].push(m);
                host_deg[v] += 1;
            }
        }
        let mut pattern_deg = vec![0; pattern_n];
        for e in pattern_edges {
            for &v in e {
                pattern_deg[v] += 1;
            }
        }
        // connected expansion order: next edge shares the most mapped vertices
        let mut remaining: Vec<[usize; 3]> = pattern_edges.to_vec();
        let mut order = Vec::with_capacity(remaining.len());
        let mut covered = 0u32;
        while !remaining.is_empty() {
            let (idx, _) = remaining
                .iter()
                .enumerate()
                .max_by_key(|(i, e)| {
                    let shared = (triple_mask(**e) & covered).count_ones();
                    let deg: usize = e.iter().map(|&v| pattern_deg[v]).sum();
                    (shared, deg, usize::MAX - i)
                })
                .expect("nonempty");
            let e = remaining.remove(idx);
            covered |= triple_mask(e);
            order.push(e);
        }
        let isolated = (0..pattern_n).filter(|&v| pattern_deg[v] == 0).collect();
        Matcher {
            host_n: n,
            host_masks,
            host_set: host,
            incident,
            host_deg,
            order,
            pattern_deg,
            pattern_n,
            isolated,
        }
    }

    /// Calls `visit` with every embedding of the non-isolated pattern
    /// vertices (isolated ones are left as `usize::MAX`); stops when `visit`
    /// returns false. Returns false iff stopped early.
    fn walk<F: FnMut(&[usize], u32) -> bool>(
        &self,
        i: usize,
        map: &mut Vec<usize>,
        used: u32,
        visit: &mut F,
    ) -> bool {
        if i == self.order.len() {
            return visit(map, used);
        }
        let e = self.order[i];
        let mapped: Vec<usize> = e.iter().copied().filter(|&v| map[v] != usize::MAX).collect();
        if mapped.len() == 3 {
            let (a, b, c) = (map[e[0]], map[e[1]], map[e[2]]);
            if self.host_set.has_triple(a, b, c) {
                return self.walk(i + 1, map, used, visit);
            }
            return true;
        }
        let free: Vec<usize> = e.iter().copied().filter(|&v| map[v] == usize::MAX).collect();
        let need: u32 = mapped.iter().fold(0, |acc, &v| acc | (1 << map[v]));
        let candidates: &[u32] = match mapped.first() {
            Some(&v) => &self.incident[map[v]],
            None => &self.host_masks,
        };
        for &h in candidates {
            if h & need != need {
                continue;
            }
            let rest = h & !need;
            if rest & used != 0 {
                continue;
            }
            let targets: Vec<usize> = BitIter(rest).collect();
            debug_assert_eq!(targets.len(), free.len());
            for perm in permutations(targets.len()) {
                let ok = free
                    .iter()
                    .zip(perm.iter())
                    .all(|(&p, &k)| self.host_deg[targets[k]] >= self.pattern_deg[p]);
                if !ok {
                    continue;
                }
                for (&p, &k) in free.iter().zip(perm.iter()) {
                    map[p] = targets[k];
                }
                let cont = self.walk(i + 1, map, used | rest, visit);
                for &p in &free {
                    map[p] = usize::MAX;
                }
                if !cont {
                    return false;
                }
            }
        }
        true
    }

    pub(crate) fn find(&self) -> Option<Vec<usize>> {
        if self.pattern_n > self.host_n {
            return None;
        }
        let mut map = vec![usize::MAX; self.pattern_n];
        let mut found = None;
        let iso = self.isolated.len();
        self.walk(0, &mut map, 0, &mut |m, used| {
            let free = self.host_n - used.count_ones() as usize;
            if free < iso {
                return true;
            }
            let mut out = m.to_vec();
            let mut spare = BitIter(!used & crate::hypergraph::low_mask(self.host_n));
            for &v in &self.isolated {
                out[v] = spare.next().expect("enough free vertices");
            }
            found = Some(out);
            false
        });
        found
    }

    pub(crate) fn count(&self) -> u128 {
        if self.pattern_n > self.host_n {
            return 0;
        }
        let mut map = vec![usize::MAX; self.pattern_n];
        let mut total: u128 = 0;
        let iso = self.isolated.len();
        self.walk(0, &mut map, 0, &mut |_, used| {
            let free = self.host_n - used.count_ones() as usize;
            total += falling(free, iso);
            true
        });
        total
    }
}

fn falling(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128)
}

fn permutations(k: usize) -> &'static [&'static [usize]] {
    const P0: &[&[usize]] = &[&[]];
    const P1: &[&[usize]] = &[&[0]];
    const P2: &[&[usize]] = &[&[0, 1], &[1, 0]];
    const P3: &[&[usize]] =
        &[&[0, 1, 2], &[0, 2, 1], &[1, 0, 2], &[1, 2, 0], &[2, 0, 1], &[2, 1, 0]];
    match k {
        0 => P0,
        1 => P1,
        2 => P2,
        _ => P3,
    }
}

/// Generic detector: a witness map from pattern vertices to host vertices.
pub fn find_generic(host: &Hypergraph3, pattern: &Pattern) -> Option<Vec<usize>> {
    Matcher::new(pattern.vertices, &pattern.edges, host).find()
}

/// Two disjoint edges, found by mask tests.
pub fn find_matching(host: &Hypergraph3) -> Option<Vec<usize>> {
    let masks = host.edge_masks();
    for (i, &a) in masks.iter().enumerate() {
        for &b in &masks[i + 1..] {
            if a & b == 0 {
                let mut w: Vec<usize> = BitIter(a).collect();
                w.extend(BitIter(b));
                return Some(w);
            }
        }
    }
    None
}

/// Loose 3-edge path found by scanning middle edges; the returned witness
/// matches the catalog labeling `{0,1,2},{2,3,4},{4,5,6}`.
pub fn find_path(host: &Hypergraph3) -> Option<Vec<usize>> {
    let masks = host.edge_masks();
    for &mid in &masks {
        let verts: Vec<usize> = BitIter(mid).collect();
        for &x in &verts {
            for &y in &verts {
                if x == y {
                    continue;
                }
                let xb = 1u32 << x;
                let yb = 1u32 << y;
                for &a in &masks {
                    if a & mid != xb {
                        continue;
                    }
                    for &b in &masks {
                        if b & mid != yb || a & b != 0 {
                            continue;
                        }
                        let z = BitIter(mid & !xb & !yb).next().expect("middle vertex");
                        let a_rest: Vec<usize> = BitIter(a & !xb).collect();
                        let b_rest: Vec<usize> = BitIter(b & !yb).collect();
                        return Some(vec![a_rest[0], a_rest[1], x, z, y, b_rest[0], b_rest[1]]);
                    }
                }
            }
        }
    }
    None
}

/// Returns a witness embedding of `pattern` into `host`, if any.
pub fn contains(host: &Hypergraph3, pattern: &Pattern) -> Option<Vec<usize>> {
    if pattern.vertices > host.n() {
        return None;
    }
    match pattern.name {
        PatternName::M => find_matching(host),
        PatternName::P => find_path(host),
        _ => find_generic(host, pattern),
    }
}

/// Whether `map` sends every pattern edge onto a host edge injectively.
pub fn verify_witness(host: &Hypergraph3, pattern: &Pattern, map: &[usize]) -> bool {
    if map.len() != pattern.vertices {
        return false;
    }
    let mut seen = 0u64;
    for &v in map {
        if v >= host.n() || seen & (1 << v) != 0 {
            return false;
        }
        seen |= 1 << v;
    }
    pattern.edges.iter().all(|e| host.has_triple(map[e[0]], map[e[1]], map[e[2]]))
}

/// Number of injective embeddings of `pattern` into `host`.
pub fn count_embeddings(host: &Hypergraph3, pattern: &Pattern) -> u128 {
    Matcher::new(pattern.vertices, &pattern.edges, host).count()
}

/// Number of distinct copies of `pattern` in `host`.
pub fn count_copies(host: &Hypergraph3, pattern: &Pattern) -> u128 {
    count_embeddings(host, pattern) / pattern.automorphism_count as u128
}

/// True iff no two edges are disjoint.
pub fn is_intersecting(host: &Hypergraph3) -> bool {
    find_matching(host).is_none()
}

/// Smallest vertex lying in every edge. An edgeless graph returns vertex 0.
pub fn common_vertex(host: &Hypergraph3) -> Option<usize> {
    let all = host.edges().fold(crate::hypergraph::low_mask(host.n()), |acc, e| acc & e.mask());
    if all == 0 {
        None
    } else {
        Some(all.trailing_zeros() as usize)
    }
}

/// Parameterized extremal constructions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConstructionSpec {
    /// Full star centered at vertex 0.
    Star(usize),
    /// `K4` on `{0,1,2,3}` plus the full star at 0 over the other vertices.
    Comet(usize),
    /// Complete 3-graphs on consecutive vertex blocks.
    CliqueUnion(Vec<usize>),
    /// All triples containing `{0,1}` or `{2,3}`.
    H0(usize),
    Complete(usize),
    /// Triple `{1,2,3}` plus every triple through 0 meeting it.
    HiltonMilner(usize),
    /// Disjoint union of the parts on consecutive vertex blocks.
    Union(Vec<ConstructionSpec>),
}

impl fmt::Display for ConstructionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructionSpec::Star(n) => write!(f, "S({n})"),
            ConstructionSpec::Comet(n) => write!(f, "Co({n})"),
            ConstructionSpec::CliqueUnion(s) => {
                let parts: Vec<String> = s.iter().map(|k| format!("K{k}")).collect();
                write!(f, "{}", parts.join("+"))
            }
            ConstructionSpec::H0(n) => write!(f, "H0({n})"),
            ConstructionSpec::Complete(n) => write!(f, "K{n}"),
            ConstructionSpec::HiltonMilner(n) => write!(f, "HM({n})"),
            ConstructionSpec::Union(parts) => {
                let parts: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "{}", parts.join("+"))
            }
        }
    }
}

impl ConstructionSpec {
    pub fn vertex_count(&self) -> usize {
        match self {
            ConstructionSpec::CliqueUnion(s) => s.iter().sum(),
            ConstructionSpec::Star(n)
            | ConstructionSpec::Comet(n)
            | ConstructionSpec::H0(n)
            | ConstructionSpec::Complete(n)
            | ConstructionSpec::HiltonMilner(n) => *n,
            ConstructionSpec::Union(parts) => parts.iter().map(Self::vertex_count).sum(),
        }
    }

    /// Edge count by closed formula.
    pub fn expected_edges(&self) -> u64 {
        match self {
            ConstructionSpec::Star(n) => binom(*n as u64 - 1, 2),
            ConstructionSpec::Comet(n) => 4 + binom(*n as u64 - 4, 2),
            ConstructionSpec::CliqueUnion(s) => s.iter().map(|&k| binom(k as u64, 3)).sum(),
            ConstructionSpec::H0(n) => 2 * *n as u64 - 4,
            ConstructionSpec::Complete(n) => binom(*n as u64, 3),
            ConstructionSpec::HiltonMilner(n) => 3 * *n as u64 - 8,
            ConstructionSpec::Union(parts) => parts.iter().map(Self::expected_edges).sum(),
        }
    }
}

/// Builds the graph described by `spec`.
pub fn construct(spec: &ConstructionSpec) -> Result<Hypergraph3> {
    let bad = |msg: String| Err(Error::InvalidConstruction(msg));
    let n = spec.vertex_count();
    if n == 0 || n > MAX_VERTICES {
        return bad(format!("{spec}: vertex count {n} outside 1..=32"));
    }
    let mut t: Vec<[usize; 3]> = Vec::new();
    match spec {
        ConstructionSpec::Star(n) => {
            for c in 2..*n {
                for b in 1..c {
                    t.push([0, b, c]);
                }
            }
        }
        ConstructionSpec::Comet(n) => {
            if *n < 5 {
                return bad(format!("comet needs n >= 5, got {n}"));
            }
            t.extend([[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]);
            for c in 5..*n {
                for b in 4..c {
                    t.push([0, b, c]);
                }
            }
        }
        ConstructionSpec::CliqueUnion(sizes) => {
            if sizes.contains(&0) {
                return bad("clique sizes must be positive".into());
            }
            let mut off = 0;
            for &k in sizes {
                for c in 2..k {
                    for b in 1..c {
                        for a in 0..b {
                            t.push([off + a, off + b, off + c]);
                        }
                    }
                }
                off += k;
            }
        }
        ConstructionSpec::H0(n) => {
            if *n < 6 {
                return bad(format!("H0 needs n >= 6, got {n}"));
            }
            for x in 2..*n {
                t.push([0, 1, x]);
            }
            for x in (0..*n).filter(|&x| x != 2 && x != 3) {
                t.push([2, 3, x]);
            }
        }
        ConstructionSpec::Complete(n) => return Hypergraph3::complete(*n),
        ConstructionSpec::HiltonMilner(n) => {
            if *n < 6 {
                return bad(format!("Hilton-Milner family needs n >= 6, got {n}"));
            }
            t.push([1, 2, 3]);
            for c in 2..*n {
                for b in 1..c {
                    if b <= 3 || c <= 3 {
                        t.push([0, b, c]);
                    }
                }
            }
        }
        ConstructionSpec::Union(parts) => {
            let mut acc: Option<Hypergraph3> = None;
            for p in parts {
                let g = construct(p)?;
                acc = Some(match acc {
                    None => g,
                    Some(a) => a.disjoint_union(&g)?,
                });
            }
            return acc.ok_or_else(|| Error::InvalidConstruction("empty union".into()));
        }
    }
    Hypergraph3::from_triples(n, t)
}
