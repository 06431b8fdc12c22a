//! 3-uniform hypergraphs on at most 32 labeled vertices.
//!
//! Edges are stored as a bit vector indexed by the colex rank of the triple:
//! `rank({a,b,c}) = C(a,1) + C(b,2) + C(c,3)` for `a < b < c`. Because colex
//! ranks do not depend on `n`, the triples of `K(n)` are exactly the ranks
//! below `C(n,3)` and a graph on `n` vertices is a prefix-closed bit string.

use std::fmt;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 32;

/// Number of triples on [`MAX_VERTICES`] vertices.
pub const MAX_TRIPLES: usize = 4960;

/// `C(n, k)` for small arguments.
pub const fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = if k > n - k { n - k } else { k };
    let mut acc = 1u64;
    let mut i = 0;
    while i < k {
        acc = acc * (n - i) / (i + 1);
        i += 1;
    }
    acc
}

/// Number of triples on `n` vertices.
#[inline]
pub const fn triple_count(n: usize) -> usize {
    binom(n as u64, 3) as usize
}

struct TripleTable {
    verts: Vec<[u8; 3]>,
    masks: Vec<u32>,
}

static TABLE: LazyLock<TripleTable> = LazyLock::new(|| {
    let mut verts = Vec::with_capacity(MAX_TRIPLES);
    for c in 2..MAX_VERTICES as u8 {
        for b in 1..c {
            for a in 0..b {
                verts.push([a, b, c]);
            }
        }
    }
    let masks = verts
        .iter()
        .map(|t| (1u32 << t[0]) | (1u32 << t[1]) | (1u32 << t[2]))
        .collect();
    TripleTable { verts, masks }
});

/// Colex rank of an unordered vertex triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TripleId(u16);

impl TripleId {
    /// Builds an id from a raw rank, checking it against `n`.
    pub fn new(rank: usize, n: usize) -> Result<Self> {
        if rank >= triple_count(n) || n > MAX_VERTICES {
            return Err(Error::TripleOutOfRange { rank, n });
        }
        Ok(TripleId(rank as u16))
    }

    #[inline]
    pub(crate) fn from_rank_unchecked(rank: usize) -> Self {
        debug_assert!(rank < MAX_TRIPLES);
        TripleId(rank as u16)
    }

    #[inline]
    pub fn rank(self) -> usize {
        self.0 as usize
    }

    /// Sorted vertices of the triple.
    #[inline]
    pub fn vertices(self) -> [usize; 3] {
        let t = TABLE.verts[self.0 as usize];
        [t[0] as usize, t[1] as usize, t[2] as usize]
    }

    /// Bit mask of the three vertices.
    #[inline]
    pub fn mask(self) -> u32 {
        TABLE.masks[self.0 as usize]
    }

    /// Largest vertex of the triple; triples are grouped by it in colex order.
    #[inline]
    pub fn top(self) -> usize {
        TABLE.verts[self.0 as usize][2] as usize
    }
}

impl fmt::Display for TripleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.vertices();
        write!(f, "{{{a},{b},{c}}}")
    }
}

/// Rank of the triple `{a, b, c}`; requires `a < b < c < 32`.
pub fn rank_triple(a: usize, b: usize, c: usize) -> Result<TripleId> {
    if !(a < b && b < c) {
        return Err(Error::InvalidTriple([a, b, c]));
    }
    if c >= MAX_VERTICES {
        return Err(Error::VertexOutOfRange { vertex: c, n: MAX_VERTICES });
    }
    Ok(TripleId(rank_unchecked(a, b, c) as u16))
}

#[inline]
pub(crate) fn rank_unchecked(a: usize, b: usize, c: usize) -> usize {
    a + (b * (b - 1)) / 2 + (c * (c - 1) * (c - 2)) / 6
}

/// Rank of an arbitrary ordering of three distinct vertices.
#[inline]
pub(crate) fn rank_any(x: usize, y: usize, z: usize) -> usize {
    let (mut a, mut b, mut c) = (x, y, z);
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    if b > c {
        std::mem::swap(&mut b, &mut c);
    }
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    rank_unchecked(a, b, c)
}

/// Sorted triple with colex rank `id` on `n` vertices.
pub fn unrank_triple(id: TripleId, n: usize) -> Result<[usize; 3]> {
    if n > MAX_VERTICES || id.rank() >= triple_count(n) {
        return Err(Error::TripleOutOfRange { rank: id.rank(), n });
    }
    Ok(id.vertices())
}

/// A set of vertices of an `n`-vertex graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VertexSet {
    n: u8,
    mask: u32,
}

impl VertexSet {
    pub fn empty(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(VertexSet { n: n as u8, mask: 0 })
    }

    pub fn full(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(VertexSet { n: n as u8, mask: low_mask(n) })
    }

    pub fn from_mask(n: usize, mask: u32) -> Result<Self> {
        check_n(n)?;
        if mask & !low_mask(n) != 0 {
            let vertex = 31 - (mask & !low_mask(n)).leading_zeros() as usize;
            return Err(Error::VertexOutOfRange { vertex, n });
        }
        Ok(VertexSet { n: n as u8, mask })
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(n: usize, vertices: I) -> Result<Self> {
        check_n(n)?;
        let mut mask = 0u32;
        for v in vertices {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            mask |= 1 << v;
        }
        Ok(VertexSet { n: n as u8, mask })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn mask(&self) -> u32 {
        self.mask
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < 32 && self.mask & (1 << v) != 0
    }

    pub fn complement(&self) -> VertexSet {
        VertexSet { n: self.n, mask: !self.mask & low_mask(self.n()) }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        BitIter(self.mask)
    }
}

pub(crate) struct BitIter(pub u32);

impl Iterator for BitIter {
    type Item = usize;
    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }
}

#[inline]
pub(crate) fn low_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_VERTICES {
        Err(Error::VertexCount(n))
    } else {
        Ok(())
    }
}

/// The link of a vertex: the pairs that complete it to an edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Link {
    pub vertex: usize,
    pub pairs: Vec<[usize; 2]>,
}

impl Link {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// An `n`-vertex 3-uniform hypergraph. Values are immutable; edits return
/// new graphs.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph3 {
    n: u8,
    bits: Box<[u64]>,
}

impl fmt::Debug for Hypergraph3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hypergraph3(n={}, m={}, [", self.n, self.edge_count())?;
        for (i, e) in self.edges().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "])")
    }
}

impl Hypergraph3 {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        check_n(n)?;
        let words = triple_count(n).div_ceil(64);
        Ok(Hypergraph3 { n: n as u8, bits: vec![0u64; words].into_boxed_slice() })
    }

    /// Complete 3-graph `K(n)`.
    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Self::empty(n)?;
        let t = triple_count(n);
        for (i, w) in g.bits.iter_mut().enumerate() {
            let lo = i * 64;
            let cnt = t.saturating_sub(lo).min(64);
            *w = if cnt == 64 { u64::MAX } else { (1u64 << cnt) - 1 };
        }
        Ok(g)
    }

    /// Builds a graph from vertex triples (in any order within a triple).
    /// Repeated triples are merged.
    pub fn from_triples<I>(n: usize, triples: I) -> Result<Self>
    where
        I: IntoIterator<Item = [usize; 3]>,
    {
        let mut g = Self::empty(n)?;
        for t in triples {
            let mut s = t;
            s.sort_unstable();
            if s[0] == s[1] || s[1] == s[2] {
                return Err(Error::InvalidTriple(t));
            }
            if s[2] >= n {
                return Err(Error::VertexOutOfRange { vertex: s[2], n });
            }
            g.set_raw(rank_unchecked(s[0], s[1], s[2]));
        }
        Ok(g)
    }

    pub(crate) fn from_words(n: usize, words: &[u64]) -> Self {
        let len = triple_count(n).div_ceil(64);
        let mut bits = vec![0u64; len];
        bits.copy_from_slice(&words[..len]);
        Hypergraph3 { n: n as u8, bits: bits.into_boxed_slice() }
    }

    #[inline]
    pub(crate) fn set_raw(&mut self, rank: usize) {
        self.bits[rank >> 6] |= 1 << (rank & 63);
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// Raw bit words over colex ranks; bits at or above `C(n,3)` are zero.
    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.bits
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn has_rank(&self, rank: usize) -> bool {
        rank < triple_count(self.n()) && self.bits[rank >> 6] & (1 << (rank & 63)) != 0
    }

    #[inline]
    pub fn has_edge(&self, id: TripleId) -> bool {
        self.has_rank(id.rank())
    }

    /// Whether `{a,b,c}` (any order) is an edge.
    pub fn has_triple(&self, a: usize, b: usize, c: usize) -> bool {
        let n = self.n();
        if a >= n || b >= n || c >= n || a == b || b == c || a == c {
            return false;
        }
        self.has_rank(rank_any(a, b, c))
    }

    /// Edges in colex order.
    pub fn edges(&self) -> impl Iterator<Item = TripleId> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(TripleId::from_rank_unchecked(i * 64 + b))
            })
        })
    }

    /// Edges as sorted vertex triples in colex order.
    pub fn edge_list(&self) -> Vec<[usize; 3]> {
        self.edges().map(TripleId::vertices).collect()
    }

    /// Vertex masks of all edges in colex order.
    pub fn edge_masks(&self) -> Vec<u32> {
        self.edges().map(TripleId::mask).collect()
    }

    /// Returns a copy with triple `id` present or absent.
    pub fn edit(&self, id: TripleId, present: bool) -> Result<Self> {
        let n = self.n();
        if id.rank() >= triple_count(n) {
            return Err(Error::TripleOutOfRange { rank: id.rank(), n });
        }
        let mut g = self.clone();
        let (w, b) = (id.rank() >> 6, id.rank() & 63);
        if present {
            g.bits[w] |= 1 << b;
        } else {
            g.bits[w] &= !(1 << b);
        }
        Ok(g)
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n() {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n() })
        } else {
            Ok(())
        }
    }

    /// Number of edges containing `v`.
    pub fn degree(&self, v: usize) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.edges().filter(|e| e.mask() & (1 << v) != 0).count())
    }

    /// Degrees of all vertices.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n()];
        for e in self.edges() {
            for v in e.vertices() {
                d[v] += 1;
            }
        }
        d
    }

    pub fn link(&self, v: usize) -> Result<Link> {
        self.check_vertex(v)?;
        let pairs = self
            .edges()
            .filter(|e| e.mask() & (1 << v) != 0)
            .map(|e| {
                let mut p = [0usize; 2];
                let mut k = 0;
                for u in e.vertices() {
                    if u != v {
                        p[k] = u;
                        k += 1;
                    }
                }
                p
            })
            .collect();
        Ok(Link { vertex: v, pairs })
    }

    /// Union of the vertex sets of all edges.
    pub fn support(&self) -> u32 {
        self.edges().fold(0, |acc, e| acc | e.mask())
    }

    /// Subgraph induced on `s`, relabeled to `0..|s|` preserving order.
    pub fn induced(&self, s: &VertexSet) -> Result<Self> {
        if s.n() != self.n() {
            return Err(Error::InvalidQuery(format!(
                "vertex set over {} vertices used with a graph on {}",
                s.n(),
                self.n()
            )));
        }
        if s.is_empty() {
            return Err(Error::VertexCount(0));
        }
        let mut new_label = [usize::MAX; MAX_VERTICES];
        for (i, v) in s.iter().enumerate() {
            new_label[v] = i;
        }
        let mut g = Self::empty(s.len())?;
        for e in self.edges() {
            if e.mask() & !s.mask() == 0 {
                let [a, b, c] = e.vertices();
                g.set_raw(rank_unchecked(new_label[a], new_label[b], new_label[c]));
            }
        }
        Ok(g)
    }

    /// `H - v`.
    pub fn delete_vertex(&self, v: usize) -> Result<Self> {
        self.check_vertex(v)?;
        let keep = VertexSet::from_mask(self.n(), low_mask(self.n()) & !(1 << v))?;
        self.induced(&keep)
    }

    /// Vertex-disjoint union; `other`'s vertices are shifted above ours.
    pub fn disjoint_union(&self, other: &Hypergraph3) -> Result<Self> {
        let total = self.n() + other.n();
        if total > MAX_VERTICES {
            return Err(Error::Capacity(format!("union has {total} vertices, limit is 32")));
        }
        let mut g = Self::empty(total)?;
        for (i, &w) in self.bits.iter().enumerate() {
            g.bits[i] = w;
        }
        let off = self.n();
        for e in other.edges() {
            let [a, b, c] = e.vertices();
            g.set_raw(rank_unchecked(a + off, b + off, c + off));
        }
        Ok(g)
    }

    /// Applies a relabeling: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n();
        if perm.len() != n {
            return Err(Error::InvalidQuery(format!(
                "permutation of length {} for n={n}",
                perm.len()
            )));
        }
        let mut seen = 0u32;
        for &p in perm {
            if p >= n || seen & (1 << p) != 0 {
                return Err(Error::InvalidQuery("relabeling is not a permutation".into()));
            }
            seen |= 1 << p;
        }
        let mut g = Self::empty(n)?;
        for e in self.edges() {
            let [a, b, c] = e.vertices();
            g.set_raw(rank_any(perm[a], perm[b], perm[c]));
        }
        Ok(g)
    }

    /// Connected components as vertex masks, isolated vertices included,
    /// ordered by smallest vertex.
    pub fn components(&self) -> Vec<u32> {
        let n = self.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in self.edges() {
            let [a, b, c] = e.vertices();
            for y in [b, c] {
                let (ra, ry) = (find(&mut parent, a), find(&mut parent, y));
                if ra != ry {
                    parent[ra.max(ry)] = ra.min(ry);
                }
            }
        }
        let mut comps: Vec<u32> = Vec::new();
        let mut root_index = vec![usize::MAX; n];
        for v in 0..n {
            let r = find(&mut parent, v);
            if root_index[r] == usize::MAX {
                root_index[r] = comps.len();
                comps.push(0);
            }
            comps[root_index[r]] |= 1 << v;
        }
        comps
    }

    /// True iff no bipartition of the vertices into two nonempty sides has
    /// every edge inside one side.
    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// All triples on `n` vertices meeting both `u` and `w`.
    pub fn cross_edges(n: usize, u: &VertexSet, w: &VertexSet) -> Result<Self> {
        if u.n() != n || w.n() != n || u.mask() & w.mask() != 0 || (u.mask() | w.mask()) != low_mask(n)
        {
            return Err(Error::NotAPartition { n });
        }
        if u.is_empty() || w.is_empty() {
            return Err(Error::NotAPartition { n });
        }
        let mut g = Self::empty(n)?;
        for r in 0..triple_count(n) {
            let m = TripleId::from_rank_unchecked(r).mask();
            if m & u.mask() != 0 && m & w.mask() != 0 {
                g.set_raw(r);
            }
        }
        Ok(g)
    }

    /// Edge-set intersection of two graphs on the same vertex count.
    pub fn intersection(&self, other: &Hypergraph3) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::InvalidQuery("intersection of graphs on different n".into()));
        }
        let mut g = self.clone();
        for (a, b) in g.bits.iter_mut().zip(other.bits.iter()) {
            *a &= *b;
        }
        Ok(g)
    }

    /// True iff every edge of `self` is an edge of `other` (labeled).
    pub fn is_subgraph_of(&self, other: &Hypergraph3) -> bool {
        self.n == other.n && self.bits.iter().zip(other.bits.iter()).all(|(a, b)| a & !b == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(n: usize) -> Hypergraph3 {
        let mut t = Vec::new();
        for b in 1..n {
            for c in b + 1..n {
                t.push([0, b, c]);
            }
        }
        Hypergraph3::from_triples(n, t).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_triple(0, 1, 2).unwrap().rank(), 0);
        assert_eq!(rank_triple(0, 1, 3).unwrap().rank(), 1);
        assert_eq!(rank_triple(10, 11, 12).unwrap().rank(), 285);
        assert!(rank_triple(1, 1, 2).is_err());
        assert!(rank_triple(0, 1, 32).is_err());
        assert!(unrank_triple(TripleId::from_rank_unchecked(286), 13).is_err());
    }

    #[test]
    fn colex_enumeration_matches_rank() {
        // independent enumeration: sort all triples by (c, b, a)
        for n in 4..=13 {
            let mut all = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    for c in b + 1..n {
                        all.push([a, b, c]);
                    }
                }
            }
            all.sort_by_key(|t| (t[2], t[1], t[0]));
            assert_eq!(all.len(), triple_count(n));
            for (i, t) in all.iter().enumerate() {
                let id = rank_triple(t[0], t[1], t[2]).unwrap();
                assert_eq!(id.rank(), i);
                assert_eq!(unrank_triple(id, n).unwrap(), *t);
            }
        }
    }

    #[test]
    fn degrees_and_links() {
        let s7 = star(7);
        assert_eq!(s7.degree(0).unwrap(), 15);
        let k6 = Hypergraph3::complete(6).unwrap();
        for v in 0..6 {
            assert_eq!(k6.degree(v).unwrap(), 10);
            assert_eq!(k6.link(v).unwrap().len(), 10);
        }
        assert_eq!(Hypergraph3::empty(5).unwrap().degree(3).unwrap(), 0);
        assert!(k6.degree(6).is_err());
        let sum: usize = s7.degrees().iter().sum();
        assert_eq!(sum, 3 * s7.edge_count());
    }

    #[test]
    fn edit_is_pure() {
        let g = Hypergraph3::empty(5).unwrap();
        let id = rank_triple(1, 2, 4).unwrap();
        let h = g.edit(id, true).unwrap();
        assert!(g.is_empty());
        assert!(h.has_edge(id));
        assert!(h.edit(id, false).unwrap().is_empty());
        assert!(g.edit(TripleId::from_rank_unchecked(10), true).is_err());
    }

    #[test]
    fn induced_delete_union() {
        let s = star(9);
        let d = s.delete_vertex(0).unwrap();
        assert_eq!(d.n(), 8);
        assert!(d.is_empty());
        let k6 = Hypergraph3::complete(6).unwrap();
        let u = k6.disjoint_union(&k6).unwrap();
        assert_eq!(u.edge_count(), 40);
        assert!(!u.is_connected());
        let k8 = Hypergraph3::complete(8).unwrap();
        let sub = k8.induced(&VertexSet::from_vertices(8, [0, 2, 3, 5, 6, 7]).unwrap()).unwrap();
        assert_eq!(sub, k6);
        let big = Hypergraph3::complete(21).unwrap();
        assert!(big.disjoint_union(&k6.disjoint_union(&k6).unwrap()).is_err());
    }

    #[test]
    fn connectivity() {
        assert!(!Hypergraph3::empty(2).unwrap().is_connected());
        assert!(Hypergraph3::empty(1).unwrap().is_connected());
        assert!(Hypergraph3::complete(3).unwrap().is_connected());
        // star plus isolated vertex
        let g = star(5).disjoint_union(&Hypergraph3::empty(1).unwrap()).unwrap();
        assert!(!g.is_connected());
    }

    #[test]
    fn cross_edge_counts() {
        let u = VertexSet::from_vertices(12, 0..6).unwrap();
        assert_eq!(Hypergraph3::cross_edges(12, &u, &u.complement()).unwrap().edge_count(), 180);
        let u = VertexSet::from_vertices(3, [0]).unwrap();
        assert_eq!(Hypergraph3::cross_edges(3, &u, &u.complement()).unwrap().edge_count(), 1);
        let u = VertexSet::from_vertices(6, [0, 1, 2]).unwrap();
        assert_eq!(Hypergraph3::cross_edges(6, &u, &u.complement()).unwrap().edge_count(), 18);
        let bad = VertexSet::from_vertices(6, [0, 1]).unwrap();
        assert!(Hypergraph3::cross_edges(6, &u, &bad).is_err());
    }

    #[test]
    fn vertex_set_bounds() {
        assert!(VertexSet::from_vertices(4, [4]).is_err());
        assert!(VertexSet::from_mask(4, 0b10000).is_err());
        assert_eq!(VertexSet::full(32).unwrap().len(), 32);
        assert!(Hypergraph3::empty(33).is_err());
        assert!(Hypergraph3::empty(0).is_err());
    }
}
