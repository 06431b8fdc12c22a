//! Brute-force reference implementations, written without the library's
//! detectors, used to cross-check the search.

#![allow(dead_code)]

/// Triples of `0..n` in colex order, as vertex bit masks.
pub fn colex_triples(n: usize) -> Vec<u32> {
    let mut out = Vec::new();
    for c in 0..n {
        for b in 0..c {
            for a in 0..b {
                out.push((1 << a) | (1 << b) | (1 << c));
            }
        }
    }
    out
}

pub struct NaivePattern {
    pub name: &'static str,
    pub vertices: usize,
    pub edges: Vec<[usize; 3]>,
}

pub fn naive_patterns() -> Vec<NaivePattern> {
    let p = |name, vertices, edges: &[[usize; 3]]| NaivePattern { name, vertices, edges: edges.to_vec() };
    vec![
        p("P", 7, &[[0, 1, 2], [2, 3, 4], [4, 5, 6]]),
        p("C", 6, &[[0, 1, 2], [2, 3, 4], [4, 5, 0]]),
        p("M", 6, &[[0, 1, 2], [3, 4, 5]]),
        p("P2", 5, &[[0, 1, 2], [2, 3, 4]]),
        p("P2uK3", 8, &[[0, 1, 2], [2, 3, 4], [5, 6, 7]]),
        p("K4", 4, &[[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]),
    ]
}

/// Every labeled copy of `pat` in `K_n`, as a bit set over colex indices.
pub fn copies(n: usize, pat: &NaivePattern) -> Vec<u64> {
    let triples = colex_triples(n);
    let index = |m: u32| triples.iter().position(|&t| t == m).unwrap();
    let mut out = Vec::new();
    let mut map = vec![usize::MAX; pat.vertices];
    fn rec(
        i: usize,
        n: usize,
        used: u32,
        map: &mut Vec<usize>,
        pat: &NaivePattern,
        index: &dyn Fn(u32) -> usize,
        out: &mut Vec<u64>,
    ) {
        if i == map.len() {
            let mut mask = 0u64;
            for e in &pat.edges {
                mask |= 1 << index((1 << map[e[0]]) | (1 << map[e[1]]) | (1 << map[e[2]]));
            }
            out.push(mask);
            return;
        }
        for v in 0..n {
            if used >> v & 1 == 0 {
                map[i] = v;
                rec(i + 1, n, used | 1 << v, map, pat, index, out);
            }
        }
    }
    if pat.vertices <= n {
        rec(0, n, 0, &mut map, pat, &index, &mut out);
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// `table[g]` is true iff graph `g` (bit set over colex indices) contains
/// some mask of `copies`, computed by closure under adding edges.
pub fn containment_table(t: usize, copies: &[u64]) -> Vec<bool> {
    let mut table = vec![false; 1 << t];
    for &c in copies {
        table[c as usize] = true;
    }
    for g in 0..(1usize << t) {
        if table[g] {
            continue;
        }
        let mut rest = g;
        while rest != 0 {
            let e = rest & rest.wrapping_neg();
            rest ^= e;
            if table[g ^ e] {
                table[g] = true;
                break;
            }
        }
    }
    table
}

pub fn edge_masks(g: u64, triples: &[u32]) -> Vec<u32> {
    (0..triples.len()).filter(|&i| g >> i & 1 == 1).map(|i| triples[i]).collect()
}

/// All vertices in one class of the relation "share an edge".
pub fn naive_connected(n: usize, edges: &[u32]) -> bool {
    if n <= 1 {
        return true;
    }
    let mut reached = 1u32;
    loop {
        let before = reached;
        for &e in edges {
            if e & reached != 0 {
                reached |= e;
            }
        }
        if reached == before {
            break;
        }
    }
    reached == (1u32 << n) - 1
}

pub fn naive_intersecting(edges: &[u32]) -> bool {
    edges.iter().all(|a| edges.iter().all(|b| a & b != 0))
}

/// Some vertex lies in every edge (vacuously true without edges).
pub fn naive_common_vertex(n: usize, edges: &[u32]) -> bool {
    (0..n).any(|v| edges.iter().all(|e| e >> v & 1 == 1))
}
