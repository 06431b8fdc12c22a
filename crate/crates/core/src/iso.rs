//! Canonical labeling by partition refinement and individualization,
//! isomorphism and embedding tests, and deduplication of graph families.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::hypergraph::{binom, rank_any, Hypergraph3, TripleId};
use crate::patterns::{common_vertex, Matcher};

/// Sorted colex ranks of a graph under its canonical labeling.
///
/// Ordered first by `n`, then edge count, then lexicographically by ranks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CanonicalForm {
    n: usize,
    ranks: Vec<u16>,
}

impl Ord for CanonicalForm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then(self.ranks.len().cmp(&other.ranks.len()))
            .then_with(|| self.ranks.cmp(&other.ranks))
    }
}

impl PartialOrd for CanonicalForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl CanonicalForm {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges under the canonical labeling, in colex order.
    pub fn canonical_edges(&self) -> Vec<[usize; 3]> {
        self.ranks.iter().map(|&r| TripleId::from_rank_unchecked(r as usize).vertices()).collect()
    }

    pub fn to_graph(&self) -> Hypergraph3 {
        let mut g = Hypergraph3::empty(self.n).expect("valid n");
        for &r in &self.ranks {
            g.set_raw(r as usize);
        }
        g
    }
}

/// Per-vertex invariant used for the initial partition: the degree and the
/// sorted multiset of degree sums over the link pairs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RefinementKey {
    pub degree: usize,
    pub link_sums: Vec<usize>,
}

pub fn refinement_keys(h: &Hypergraph3) -> Vec<RefinementKey> {
    let deg = h.degrees();
    let mut sums = vec![Vec::new(); h.n()];
    for e in h.edges() {
        let [a, b, c] = e.vertices();
        sums[a].push(deg[b] + deg[c]);
        sums[b].push(deg[a] + deg[c]);
        sums[c].push(deg[a] + deg[b]);
    }
    sums.into_iter()
        .zip(deg)
        .map(|(mut s, d)| {
            s.sort_unstable();
            RefinementKey { degree: d, link_sums: s }
        })
        .collect()
}

struct Canonizer<'a> {
    h: &'a Hypergraph3,
    n: usize,
    edges: Vec<[usize; 3]>,
    best: Option<(Vec<u16>, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

type Partition = Vec<Vec<usize>>;

impl<'a> Canonizer<'a> {
    fn new(h: &'a Hypergraph3) -> Self {
        Canonizer { h, n: h.n(), edges: h.edge_list(), best: None, automorphisms: Vec::new() }
    }

    fn initial_partition(&self) -> Partition {
        let keys = refinement_keys(self.h);
        let mut verts: Vec<usize> = (0..self.n).collect();
        verts.sort_by(|&a, &b| keys[a].cmp(&keys[b]).then(a.cmp(&b)));
        let mut cells: Partition = Vec::new();
        for v in verts {
            match cells.last_mut() {
                Some(cell) if keys[cell[0]] == keys[v] => cell.push(v),
                _ => cells.push(vec![v]),
            }
        }
        cells
    }

    /// Splits cells by counts of link pairs per cell pair until stable.
    fn refine(&self, mut cells: Partition) -> Partition {
        loop {
            let k = cells.len();
            if k == self.n {
                return cells;
            }
            let mut cell_of = vec![0usize; self.n];
            for (i, c) in cells.iter().enumerate() {
                for &v in c {
                    cell_of[v] = i;
                }
            }
            let width = k * (k + 1) / 2;
            let pair_index = |x: usize, y: usize| {
                let (a, b) = if x <= y { (x, y) } else { (y, x) };
                b * (b + 1) / 2 + a
            };
            let mut sig = vec![vec![0u32; width]; self.n];
            for &[a, b, c] in &self.edges {
                let (ca, cb, cc) = (cell_of[a], cell_of[b], cell_of[c]);
                sig[a][pair_index(cb, cc)] += 1;
                sig[b][pair_index(ca, cc)] += 1;
                sig[c][pair_index(ca, cb)] += 1;
            }
            let mut next: Partition = Vec::with_capacity(k);
            for cell in &cells {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut sorted = cell.clone();
                sorted.sort_by(|&x, &y| sig[x].cmp(&sig[y]).then(x.cmp(&y)));
                let mut start = next.len();
                next.push(vec![sorted[0]]);
                for w in sorted.windows(2) {
                    if sig[w[0]] == sig[w[1]] {
                        next[start].push(w[1]);
                    } else {
                        next.push(vec![w[1]]);
                        start = next.len() - 1;
                    }
                }
            }
            if next.len() == k {
                return next;
            }
            cells = next;
        }
    }

    fn leaf(&mut self, cells: &Partition) {
        let mut label = vec![0usize; self.n];
        for (i, c) in cells.iter().enumerate() {
            label[c[0]] = i;
        }
        let mut ranks: Vec<u16> =
            self.edges.iter().map(|&[a, b, c]| rank_any(label[a], label[b], label[c]) as u16).collect();
        ranks.sort_unstable();
        match &self.best {
            None => self.best = Some((ranks, label)),
            Some((best, best_label)) => match ranks.cmp(best) {
                Ordering::Less => self.best = Some((ranks, label)),
                Ordering::Equal => {
                    // gamma(v) = the vertex carrying v's label in the best leaf
                    let mut inv = vec![0usize; self.n];
                    for (v, &l) in best_label.iter().enumerate() {
                        inv[l] = v;
                    }
                    let gamma: Vec<usize> = (0..self.n).map(|v| inv[label[v]]).collect();
                    if gamma.iter().enumerate().any(|(v, &g)| v != g) {
                        self.automorphisms.push(gamma);
                    }
                }
                Ordering::Greater => {}
            },
        }
    }

    fn same_orbit(&self, fixed: &[usize], a: usize, b: usize) -> bool {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for g in &self.automorphisms {
            if fixed.iter().any(|&v| g[v] != v) {
                continue;
            }
            for v in 0..self.n {
                let (x, y) = (find(&mut parent, v), find(&mut parent, g[v]));
                if x != y {
                    parent[x] = y;
                }
            }
        }
        find(&mut parent, a) == find(&mut parent, b)
    }

    fn search(&mut self, cells: Partition, fixed: &mut Vec<usize>) {
        let cells = self.refine(cells);
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            self.leaf(&cells);
            return;
        };
        let cell = cells[target].clone();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cell {
            if explored.iter().any(|&w| self.same_orbit(fixed, w, v)) {
                continue;
            }
            explored.push(v);
            let mut child: Partition = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..target]);
            child.push(vec![v]);
            child.push(cell.iter().copied().filter(|&x| x != v).collect());
            child.extend_from_slice(&cells[target + 1..]);
            fixed.push(v);
            self.search(child, fixed);
            fixed.pop();
        }
    }

    /// Transpositions `(u v)` that are automorphisms, one chain per twin class.
    fn seed_twins(&mut self) {
        let n = self.n;
        let mut class_rep: Vec<usize> = (0..n).collect();
        for u in 0..n {
            if class_rep[u] != u {
                continue;
            }
            let mut last = u;
            for v in u + 1..n {
                if class_rep[v] != v {
                    continue;
                }
                let mut perm: Vec<usize> = (0..n).collect();
                perm.swap(u, v);
                let ok = self.edges.iter().all(|&[a, b, c]| self.h.has_triple(perm[a], perm[b], perm[c]));
                if ok {
                    class_rep[v] = u;
                    let mut t: Vec<usize> = (0..n).collect();
                    t.swap(last, v);
                    self.automorphisms.push(t);
                    last = v;
                }
            }
        }
    }
}

/// Canonical form of `h`: equal for two graphs iff they are isomorphic.
pub fn canonical_form(h: &Hypergraph3) -> CanonicalForm {
    canonical_labeling(h).0
}

/// Canonical form together with the labeling `old vertex -> canonical label`.
pub fn canonical_labeling(h: &Hypergraph3) -> (CanonicalForm, Vec<usize>) {
    let mut c = Canonizer::new(h);
    c.seed_twins();
    let start = c.initial_partition();
    c.search(start, &mut Vec::new());
    let (ranks, label) = c.best.expect("search visits at least one leaf");
    (CanonicalForm { n: h.n(), ranks }, label)
}

/// Order of the automorphism group, by counting self-embeddings.
pub fn automorphism_count(h: &Hypergraph3) -> u128 {
    Matcher::new(h.n(), &h.edge_list(), h).count()
}

pub fn are_isomorphic(a: &Hypergraph3, b: &Hypergraph3) -> bool {
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        return false;
    }
    let mut da = a.degrees();
    let mut db = b.degrees();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return false;
    }
    canonical_form(a) == canonical_form(b)
}

/// Whether `big` is a full star on its vertex set.
fn is_full_star(big: &Hypergraph3) -> bool {
    let n = big.n() as u64;
    n >= 3 && big.edge_count() as u64 == binom(n - 1, 2) && common_vertex(big).is_some()
}

/// Component sizes of `big` when every component is complete.
fn clique_union_sizes(big: &Hypergraph3) -> Option<Vec<usize>> {
    let mut sizes = Vec::new();
    for comp in big.components() {
        let k = comp.count_ones() as u64;
        let inside = big.edges().filter(|e| e.mask() & comp == e.mask()).count() as u64;
        if inside != binom(k, 3) {
            return None;
        }
        sizes.push(k as usize);
    }
    Some(sizes)
}

fn pack(items: &[usize], bins: &mut [usize]) -> bool {
    let Some((&first, rest)) = items.split_first() else {
        return true;
    };
    for i in 0..bins.len() {
        if bins[i] < first || bins[..i].contains(&bins[i]) {
            continue;
        }
        bins[i] -= first;
        let ok = pack(rest, bins);
        bins[i] += first;
        if ok {
            return true;
        }
    }
    false
}

/// Generic backtracking embedding test.
pub fn embeds_generic(h: &Hypergraph3, big: &Hypergraph3) -> bool {
    h.n() <= big.n() && Matcher::new(h.n(), &h.edge_list(), big).find().is_some()
}

/// Whether `h`, padded with isolated vertices, is isomorphic to a subgraph of
/// `big`.
pub fn embeds_into(h: &Hypergraph3, big: &Hypergraph3) -> bool {
    if h.n() > big.n() || h.edge_count() > big.edge_count() {
        return false;
    }
    if h.is_empty() {
        return true;
    }
    if h.n() == big.n() && h.edge_count() == big.edge_count() {
        return are_isomorphic(h, big);
    }
    if is_full_star(big) {
        return common_vertex(h).is_some();
    }
    if let Some(mut bins) = clique_union_sizes(big) {
        let mut items: Vec<usize> = h.components().iter().map(|c| c.count_ones() as usize).collect();
        items.extend(std::iter::repeat_n(1, big.n() - h.n()));
        items.sort_unstable_by(|a, b| b.cmp(a));
        bins.sort_unstable_by(|a, b| b.cmp(a));
        return pack(&items, &mut bins);
    }
    embeds_generic(h, big)
}

/// One canonical representative per isomorphism class, sorted by form.
pub fn dedupe(family: &[Hypergraph3]) -> Vec<Hypergraph3> {
    let mut forms: Vec<CanonicalForm> = family.iter().map(canonical_form).collect();
    forms.sort();
    forms.dedup();
    forms.iter().map(CanonicalForm::to_graph).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::{construct, ConstructionSpec};
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    fn c(spec: ConstructionSpec) -> Hypergraph3 {
        construct(&spec).unwrap()
    }

    fn shuffle(h: &Hypergraph3, rng: &mut impl Rng) -> Hypergraph3 {
        let mut p: Vec<usize> = (0..h.n()).collect();
        p.shuffle(rng);
        h.relabel(&p).unwrap()
    }

    #[test]
    fn canonical_form_invariance() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let graphs = [
            c(ConstructionSpec::Comet(10)),
            c(ConstructionSpec::H0(9)),
            c(ConstructionSpec::CliqueUnion(vec![6, 6, 1])),
            c(ConstructionSpec::Star(11)),
            c(ConstructionSpec::HiltonMilner(8)),
        ];
        for g in &graphs {
            let f = canonical_form(g);
            assert_eq!(f.to_graph().edge_count(), g.edge_count());
            for _ in 0..200 {
                assert_eq!(canonical_form(&shuffle(g, &mut rng)), f);
            }
        }
    }

    #[test]
    fn canonical_form_random_graphs() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..40 {
            let n = rng.gen_range(5..=10);
            let t = crate::hypergraph::triple_count(n);
            let mut g = Hypergraph3::empty(n).unwrap();
            for r in 0..t {
                if rng.gen_bool(0.3) {
                    g.set_raw(r);
                }
            }
            let f = canonical_form(&g);
            for _ in 0..50 {
                assert_eq!(canonical_form(&shuffle(&g, &mut rng)), f);
            }
        }
    }

    #[test]
    fn distinct_classes() {
        assert_ne!(
            canonical_form(&c(ConstructionSpec::Star(8))),
            canonical_form(&c(ConstructionSpec::CliqueUnion(vec![6, 2])))
        );
        assert_ne!(
            canonical_form(&c(ConstructionSpec::Comet(13))),
            canonical_form(&c(ConstructionSpec::CliqueUnion(vec![6, 6, 1])))
        );
        assert!(!are_isomorphic(
            &c(ConstructionSpec::CliqueUnion(vec![6, 6])),
            &c(ConstructionSpec::Comet(12))
        ));
        assert!(!are_isomorphic(&c(ConstructionSpec::H0(8)), &c(ConstructionSpec::Star(8))));
    }

    #[test]
    fn embedding_examples() {
        let s7 = c(ConstructionSpec::Star(7));
        assert!(!embeds_into(&s7, &c(ConstructionSpec::CliqueUnion(vec![6, 1]))));
        let m = crate::patterns::catalog(crate::patterns::PatternName::M).graph();
        assert!(embeds_into(&m, &c(ConstructionSpec::Comet(10))));
        assert!(embeds_into(&s7, &s7));
        assert!(!embeds_into(
            &c(ConstructionSpec::Comet(13)),
            &c(ConstructionSpec::CliqueUnion(vec![6, 6, 1]))
        ));
    }

    #[test]
    fn dedupe_examples() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let s7 = c(ConstructionSpec::Star(7));
        assert_eq!(dedupe(&[s7.clone(), shuffle(&s7, &mut rng)]).len(), 1);
        assert!(dedupe(&[]).is_empty());
        let singles: Vec<Hypergraph3> = (0..10)
            .map(|r| Hypergraph3::empty(5).unwrap().edit(TripleId::new(r, 5).unwrap(), true).unwrap())
            .collect();
        assert_eq!(dedupe(&singles).len(), 1);
    }
}
