use turan3_core::iso::canonical_form;
use turan3_core::ramsey::{search_coloring, ColoringConfig, ColoringOutcome};
use turan3_core::search::{decide_exists, max_edges, Branching, ConstraintSet, Decision, Flags, Required, SearchConfig};
use turan3_core::PatternName::{self, *};

fn value(n: usize, cs: &ConstraintSet, cfg: &SearchConfig) -> Option<usize> {
    max_edges(n, cs, cfg).unwrap().value
}

#[test]
fn outcome_is_independent_of_worker_count() {
    let cases = [
        (8, ConstraintSet::forbidding(&[P]), true),
        (8, ConstraintSet::forbidding(&[P, C]).requiring(Required::Pattern(M)), true),
        (8, ConstraintSet::forbidding(&[C]), false),
        (7, ConstraintSet::forbidding(&[M]).with_flags(Flags { no_common_vertex: true, ..Default::default() }), true),
    ];
    for (n, cs, enumerate) in cases {
        let base = SearchConfig { enumerate_all: enumerate, ..Default::default() };
        let one = max_edges(n, &cs, &base).unwrap();
        for workers in [2, 4] {
            let many = max_edges(n, &cs, &base.clone().with_workers(workers)).unwrap();
            assert_eq!(one.status, many.status);
            assert_eq!(one.value, many.value);
            assert_eq!(one.witnesses, many.witnesses, "{} workers={workers}", cs.describe());
        }
    }
}

#[test]
fn branching_orders_agree() {
    for forb in [vec![P], vec![C], vec![M], vec![P, C], vec![P2]] {
        let cs = ConstraintSet::forbidding(&forb);
        for n in 5..=8 {
            let colex = max_edges(n, &cs, &SearchConfig::enumerating()).unwrap();
            let other = SearchConfig { branching: Branching::MostConstrained, ..SearchConfig::enumerating() };
            let mc = max_edges(n, &cs, &other).unwrap();
            assert_eq!(colex.value, mc.value, "n={n} {}", cs.describe());
            assert_eq!(colex.witnesses, mc.witnesses, "n={n} {}", cs.describe());
        }
    }
}

#[test]
fn values_grow_with_n_and_shrink_with_constraints() {
    let families: [&[PatternName]; 4] = [&[P], &[C], &[M], &[P2]];
    for forb in families {
        let cs = ConstraintSet::forbidding(forb);
        let vals: Vec<usize> = (3..=9).map(|n| value(n, &cs, &SearchConfig::default()).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]), "{forb:?}: {vals:?}");
    }
    for n in 6..=8 {
        let base = value(n, &ConstraintSet::forbidding(&[P]), &SearchConfig::default()).unwrap();
        let tighter = value(n, &ConstraintSet::forbidding(&[P, C]), &SearchConfig::default()).unwrap();
        let conditional = value(
            n,
            &ConstraintSet::forbidding(&[P]).requiring(Required::Pattern(M)),
            &SearchConfig::default(),
        )
        .unwrap();
        assert!(tighter <= base && conditional <= base, "n={n}");
    }
}

#[test]
fn path_free_values_and_decisions() {
    let cs = ConstraintSet::forbidding(&[P]);
    assert_eq!(decide_exists(8, &cs, 22, &SearchConfig::default()).unwrap(), Decision::No);
    match decide_exists(8, &cs, 21, &SearchConfig::default()).unwrap() {
        Decision::Yes(h) => assert_eq!(h.edge_count(), 21),
        other => panic!("{other:?}"),
    }
    // P2-free graphs have at most n edges
    for n in 3..=9 {
        let v = value(n, &ConstraintSet::forbidding(&[P2]), &SearchConfig::default()).unwrap();
        assert!(v <= n, "n={n} v={v}");
    }
}

#[test]
fn enumerated_witnesses_are_distinct_classes() {
    let out = max_edges(6, &ConstraintSet::forbidding(&[M]), &SearchConfig::enumerating()).unwrap();
    assert_eq!(out.value, Some(10));
    let mut forms: Vec<_> = out.witnesses.iter().map(canonical_form).collect();
    let before = forms.len();
    forms.dedup();
    assert_eq!(forms.len(), before);
    assert!(before >= 2, "both the star and K5 are optimal");
}

#[test]
fn witness_limit_truncates() {
    let cfg = SearchConfig { witness_limit: 1, ..SearchConfig::enumerating() };
    let out = max_edges(6, &ConstraintSet::forbidding(&[M]), &cfg).unwrap();
    assert_eq!(out.witnesses.len(), 1);
    assert!(out.stats.witnesses_truncated);
}

#[test]
fn coloring_symmetry_breaking_preserves_answers() {
    let broken = ColoringConfig::default();
    let plain = ColoringConfig { symmetry_breaking: false, ..Default::default() };
    for (n, r, p) in [(5, 2, M), (6, 2, M), (6, 2, P2), (5, 2, P2), (6, 3, P2), (6, 2, C), (6, 2, K(4))] {
        let a = search_coloring(n, r, p, &broken).unwrap();
        let b = search_coloring(n, r, p, &plain).unwrap();
        assert_eq!(
            matches!(a, ColoringOutcome::Found(_)),
            matches!(b, ColoringOutcome::Found(_)),
            "n={n} r={r} {p}"
        );
        assert!(!matches!(a, ColoringOutcome::Unknown));
    }
}
