//! Exhaustive cross-check of the search against enumeration of every graph
//! on five and six vertices.

mod common;

use common::*;
use turan3_core::search::{max_edges, ConstraintSet, Flags, Required, SearchConfig, Status};
use turan3_core::{construct, ConstructionSpec, Hypergraph3, PatternName};

struct Universe {
    n: usize,
    t: usize,
    triples: Vec<u32>,
    contains: Vec<(&'static str, Vec<bool>)>,
    connected: Vec<bool>,
    intersecting: Vec<bool>,
    common: Vec<bool>,
}

impl Universe {
    fn new(n: usize) -> Self {
        let triples = colex_triples(n);
        let t = triples.len();
        let contains = naive_patterns()
            .iter()
            .map(|p| (p.name, containment_table(t, &copies(n, p))))
            .collect();
        let mut connected = Vec::with_capacity(1 << t);
        let mut intersecting = Vec::with_capacity(1 << t);
        let mut common = Vec::with_capacity(1 << t);
        for g in 0..(1u64 << t) {
            let e = edge_masks(g, &triples);
            connected.push(naive_connected(n, &e));
            intersecting.push(naive_intersecting(&e));
            common.push(naive_common_vertex(n, &e));
        }
        Universe { n, t, triples, contains, connected, intersecting, common }
    }

    fn has(&self, name: &str, g: usize) -> bool {
        self.contains.iter().find(|(p, _)| *p == name).unwrap().1[g]
    }

    /// `table[g]` is true iff `g` embeds into `x` up to relabeling.
    fn embeds_table(&self, x: &Hypergraph3) -> Vec<bool> {
        let mut table = vec![false; 1 << self.t];
        let edges: Vec<[usize; 3]> = x.edge_list();
        let mut perm: Vec<usize> = (0..self.n).collect();
        permutations(&mut perm, 0, &mut |p| {
            let mut m = 0usize;
            for e in &edges {
                let mask = (1u32 << p[e[0]]) | (1 << p[e[1]]) | (1 << p[e[2]]);
                m |= 1 << self.triples.iter().position(|&t| t == mask).unwrap();
            }
            table[m] = true;
        });
        for g in (0..(1usize << self.t)).rev() {
            if table[g] {
                continue;
            }
            table[g] = (0..self.t).any(|i| g >> i & 1 == 0 && table[g | 1 << i]);
        }
        table
    }

    fn best(&self, ok: impl Fn(usize) -> bool) -> Option<usize> {
        (0..(1usize << self.t)).filter(|&g| ok(g)).map(|g| g.count_ones() as usize).max()
    }
}

fn permutations(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, f);
        p.swap(k, i);
    }
}

fn flag_sets() -> Vec<Flags> {
    let mut out = Vec::new();
    for bits in 0..8 {
        out.push(Flags {
            connected: bits & 1 != 0,
            intersecting: bits & 2 != 0,
            no_common_vertex: bits & 4 != 0,
        });
    }
    out
}

fn forbidden_sets() -> Vec<Vec<&'static str>> {
    vec![
        vec![],
        vec!["P"],
        vec!["C"],
        vec!["M"],
        vec!["P", "C"],
        vec!["P2"],
        vec!["P2uK3"],
        vec!["K4"],
        vec!["C", "M"],
        vec!["P", "C", "P2uK3"],
    ]
}

fn names(v: &[&str]) -> Vec<PatternName> {
    v.iter().map(|s| s.parse().unwrap()).collect()
}

fn compare(u: &Universe, cs: &ConstraintSet, expected: Option<usize>, label: &str) {
    let out = max_edges(u.n, cs, &SearchConfig::default()).unwrap();
    match expected {
        Some(v) => {
            assert_eq!(out.status, Status::Exact, "{label}");
            assert_eq!(out.value, Some(v), "{label}");
            assert_eq!(out.witnesses[0].edge_count(), v, "{label}");
        }
        None => assert!(
            matches!(out.status, Status::Infeasible | Status::NotDefined),
            "{label}: {:?}",
            out.status
        ),
    }
}

fn flags_ok(u: &Universe, f: Flags, g: usize) -> bool {
    (!f.connected || u.connected[g]) && (!f.intersecting || u.intersecting[g]) && (!f.no_common_vertex || !u.common[g])
}

fn check_universe(n: usize) {
    let u = Universe::new(n);
    for forb in forbidden_sets() {
        for flags in flag_sets() {
            let expected = u.best(|g| forb.iter().all(|p| !u.has(p, g)) && flags_ok(&u, flags, g));
            let cs = ConstraintSet::forbidding(&names(&forb)).with_flags(flags);
            compare(&u, &cs, expected, &format!("n={n} forbid={forb:?} {flags:?}"));
        }
        for req in ["M", "C", "P2", "K4"] {
            let expected = u.best(|g| forb.iter().all(|p| !u.has(p, g)) && u.has(req, g));
            let cs = ConstraintSet::forbidding(&names(&forb))
                .requiring(Required::Pattern(req.parse().unwrap()));
            compare(&u, &cs, expected, &format!("n={n} forbid={forb:?} require={req}"));
        }
    }

    let spec = |s: ConstructionSpec| construct(&s).unwrap();
    let mut exclusions = vec![
        vec![spec(ConstructionSpec::Star(n))],
        vec![spec(ConstructionSpec::Star(n)), spec(ConstructionSpec::CliqueUnion(vec![n - 1, 1]))],
    ];
    if n >= 6 {
        exclusions.push(vec![spec(ConstructionSpec::HiltonMilner(n)), spec(ConstructionSpec::H0(n))]);
    }
    for excl in exclusions {
        let tables: Vec<Vec<bool>> = excl.iter().map(|x| u.embeds_table(x)).collect();
        for forb in [vec!["M"], vec!["P2"], vec![]] {
            let expected = u.best(|g| forb.iter().all(|p| !u.has(p, g)) && tables.iter().all(|t| !t[g]));
            let cs = ConstraintSet::forbidding(&names(&forb)).excluding(excl.clone());
            compare(&u, &cs, expected, &format!("n={n} forbid={forb:?} excluded={}", excl.len()));
        }
    }
}

#[test]
fn five_vertices_match_enumeration() {
    check_universe(5);
}

#[test]
fn six_vertices_match_enumeration() {
    check_universe(6);
}
