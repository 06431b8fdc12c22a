//! Text formats: `.hg3` for hypergraphs and `.col3` for edge colorings.
//!
//! ```text
//! hg3 n=<N> m=<M>
//! u v w          (M lines, u < v < w, colex order)
//! ```
//!
//! ```text
//! col3 n=<N> r=<R>
//! u v w c        (C(N,3) lines in colex order, 0 <= c < R)
//! ```
//!
//! Lines starting with `#` are comments and blank lines are ignored when
//! reading. Writers emit no comments, so `write(parse(s)) == s` for any
//! writer output `s`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::hypergraph::{rank_unchecked, triple_count, Hypergraph3, TripleId, MAX_VERTICES};
use crate::ramsey::Coloring;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn header_field(tok: Option<&str>, key: &str, line: usize) -> Result<usize> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing `{key}=` field")))?;
    let val = tok
        .strip_prefix(key)
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| parse_err(line, format!("expected `{key}=<value>`, found `{tok}`")))?;
    val.parse().map_err(|_| parse_err(line, format!("bad value for {key}: `{val}`")))
}

fn parse_triple<'a>(it: &mut impl Iterator<Item = &'a str>, n: usize, line: usize) -> Result<usize> {
    let mut v = [0usize; 3];
    for slot in &mut v {
        let tok = it.next().ok_or_else(|| parse_err(line, "expected three vertices"))?;
        *slot = tok.parse().map_err(|_| parse_err(line, format!("bad vertex `{tok}`")))?;
    }
    if !(v[0] < v[1] && v[1] < v[2]) {
        return Err(parse_err(line, "vertices must be strictly increasing"));
    }
    if v[2] >= n {
        return Err(parse_err(line, format!("vertex {} out of range for n={n}", v[2])));
    }
    Ok(rank_unchecked(v[0], v[1], v[2]))
}

/// Parses the `.hg3` format.
pub fn parse_hg3(text: &str) -> Result<Hypergraph3> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("hg3") {
        return Err(parse_err(hl, "expected `hg3` header"));
    }
    let n = header_field(toks.next(), "n", hl)?;
    let m = header_field(toks.next(), "m", hl)?;
    if toks.next().is_some() {
        return Err(parse_err(hl, "trailing header fields"));
    }
    if n == 0 || n > MAX_VERTICES {
        return Err(parse_err(hl, format!("n={n} outside 1..=32")));
    }
    let mut g = Hypergraph3::empty(n)?;
    let mut last: Option<usize> = None;
    let mut count = 0;
    for (ln, l) in lines {
        let mut it = l.split_whitespace();
        let r = parse_triple(&mut it, n, ln)?;
        if it.next().is_some() {
            return Err(parse_err(ln, "trailing fields"));
        }
        if last.is_some_and(|p| p >= r) {
            return Err(parse_err(ln, "edges must be distinct and in colex order"));
        }
        last = Some(r);
        g.set_raw(r);
        count += 1;
    }
    if count != m {
        return Err(parse_err(hl, format!("header says m={m} but {count} edges follow")));
    }
    Ok(g)
}

/// Writes the `.hg3` format.
pub fn write_hg3(h: &Hypergraph3) -> String {
    let mut s = format!("hg3 n={} m={}\n", h.n(), h.edge_count());
    for [a, b, c] in h.edge_list() {
        let _ = writeln!(s, "{a} {b} {c}");
    }
    s
}

/// Parses the `.col3` format.
pub fn parse_col3(text: &str) -> Result<Coloring> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("col3") {
        return Err(parse_err(hl, "expected `col3` header"));
    }
    let n = header_field(toks.next(), "n", hl)?;
    let r = header_field(toks.next(), "r", hl)?;
    if toks.next().is_some() {
        return Err(parse_err(hl, "trailing header fields"));
    }
    if n == 0 || n > MAX_VERTICES || r == 0 || r > u8::MAX as usize {
        return Err(parse_err(hl, "n must be in 1..=32 and r in 1..=255"));
    }
    let total = triple_count(n);
    let mut colors = Vec::with_capacity(total);
    for (ln, l) in lines {
        let mut it = l.split_whitespace();
        let rank = parse_triple(&mut it, n, ln)?;
        if rank != colors.len() {
            return Err(parse_err(ln, "triples must be listed exactly once in colex order"));
        }
        let tok = it.next().ok_or_else(|| parse_err(ln, "missing color"))?;
        let c: usize = tok.parse().map_err(|_| parse_err(ln, format!("bad color `{tok}`")))?;
        if c >= r {
            return Err(parse_err(ln, format!("color {c} out of range for r={r}")));
        }
        if it.next().is_some() {
            return Err(parse_err(ln, "trailing fields"));
        }
        colors.push(c as u8);
    }
    if colors.len() != total {
        return Err(parse_err(hl, format!("expected {total} triples, found {}", colors.len())));
    }
    Coloring::new(n, r, colors)
}

/// Writes the `.col3` format.
pub fn write_col3(c: &Coloring) -> String {
    let mut s = format!("col3 n={} r={}\n", c.n(), c.colors());
    for (rank, &col) in c.assignment().iter().enumerate() {
        let [a, b, d] = TripleId::from_rank_unchecked(rank).vertices();
        let _ = writeln!(s, "{a} {b} {d} {col}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::{construct, ConstructionSpec};

    #[test]
    fn hg3_round_trip_and_comments() {
        let g = construct(&ConstructionSpec::Comet(7)).unwrap();
        let text = write_hg3(&g);
        assert!(text.starts_with("hg3 n=7 m=7\n0 1 2\n0 1 3\n"));
        assert_eq!(parse_hg3(&text).unwrap(), g);
        let commented = format!("# comet\n{}", text.replace("0 1 3\n", "0 1 3\n# inner\n"));
        assert_eq!(parse_hg3(&commented).unwrap(), g);
    }

    #[test]
    fn hg3_rejects_malformed() {
        assert!(parse_hg3("").is_err());
        assert!(parse_hg3("hg3 n=4 m=1\n0 1 4\n").is_err());
        assert!(parse_hg3("hg3 n=4 m=2\n0 1 3\n0 1 2\n").is_err());
        assert!(parse_hg3("hg3 n=4 m=2\n0 1 2\n").is_err());
        assert!(parse_hg3("hg3 n=4 m=1\n2 1 3\n").is_err());
        assert!(parse_hg3("hg3 n=40 m=0\n").is_err());
        assert!(parse_hg3("graph n=4 m=0\n").is_err());
    }

    #[test]
    fn col3_round_trip() {
        let colors: Vec<u8> = (0..triple_count(6)).map(|i| (i % 3) as u8).collect();
        let c = Coloring::new(6, 3, colors).unwrap();
        let text = write_col3(&c);
        assert_eq!(parse_col3(&text).unwrap(), c);
        assert_eq!(write_col3(&parse_col3(&text).unwrap()), text);
        assert!(parse_col3("col3 n=4 r=2\n0 1 2 0\n").is_err());
        assert!(parse_col3("col3 n=3 r=2\n0 1 2 2\n").is_err());
    }
}
