use lcdawg::oracles::{brute_maximal_repeats, brute_minimal_automaton, naive_find, DEFAULT_BOUND};
use lcdawg::{build_cdawg, persist, Error, Index, NodeKind, Text};

fn text(s: &str) -> Text {
    Text::new(s.as_bytes()).unwrap()
}

#[test]
fn ababaac_cdawg_matches_automaton() {
    let t = text("ababaac");
    let g = build_cdawg(&t);
    let a = brute_minimal_automaton(&t, DEFAULT_BOUND).unwrap();
    assert_eq!(g.node_count(), a.node_count());
    assert_eq!(g.edge_count(), a.edge_count());
    g.check_invariants().unwrap();
}

#[test]
fn abcdbcda_edges_are_right_extensions() {
    let t = text("abcdbcda");
    let g = build_cdawg(&t);
    let reps = brute_maximal_repeats(t.with_sentinel(), DEFAULT_BOUND).unwrap();
    assert_eq!(g.edge_count(), reps.right_extensions());
}

#[test]
fn node_count_for_a_is_occurrence_count() {
    // the naive scan finds 4 occurrences of "a" in ababaac
    let t = text("ababaac");
    let index = Index::build(&t).unwrap();
    let locus = index.locate(b"a").unwrap().unwrap();
    assert_eq!(locus.edge, None);
    assert_eq!(index.path_count(locus.node), 4);
    assert_eq!(index.count(b"a").unwrap(), naive_find(t.as_bytes(), b"a").len() as u64);
}

#[test]
fn type2_nodes_bounded_by_left_extensions() {
    for s in ["ababaac", "abcdbcda"] {
        let t = text(s);
        let index = Index::build(&t).unwrap();
        let left = brute_maximal_repeats(t.reversed().with_sentinel(), DEFAULT_BOUND).unwrap();
        let e_l = left.right_extensions();
        assert!(index.graph().type2_count() <= e_l, "{s}");
    }
}

#[test]
fn abcdbcda_has_a_type2_node() {
    let index = Index::build(&text("abcdbcda")).unwrap();
    let g = index.graph();
    assert!(g.nodes().any(|(_, n)| matches!(n.kind, NodeKind::Type2)));
}

#[test]
fn edge_labels_from_slp() {
    for s in ["ababaac", "abcdbcda"] {
        let t = text(s);
        let (index, trace) = Index::build_traced(&t).unwrap();
        let g = index.graph();
        for (i, e) in g.edges().iter().enumerate() {
            let id = lcdawg::EdgeId(i as u32);
            let got = index.slp().expand_prefix(index.slp().var_of_edge(id), e.slen).unwrap();
            assert_eq!(got, trace.labels.label(g, id, &t), "{s} edge {i}");
        }
        let mut full = t.as_bytes().to_vec();
        full.push(0);
        assert_eq!(index.slp().expand(index.slp().root()).unwrap(), full);
    }
}

#[test]
fn queries() {
    let t = text("ababaac");
    let index = Index::build(&t).unwrap();
    assert_eq!(index.find(b"aba").unwrap(), vec![1, 3]);
    assert_eq!(index.find(b"x").unwrap(), Vec::<u64>::new());
    assert_eq!(index.count(b"zz").unwrap(), 0);
    assert_eq!(index.count(b"ababaac").unwrap(), 1);
    assert!(index.exists(b"ab").unwrap());
    assert!(!index.exists(b"ca").unwrap());
    assert_eq!(index.exists(b""), Err(Error::EmptyPattern));

    let index = Index::build(&text("abcdbcda")).unwrap();
    assert_eq!(index.find(b"bcd").unwrap(), vec![2, 5]);
    assert_eq!(index.extract(3, 2).unwrap(), b"cd");
    assert_eq!(index.slp().access(index.slp().root(), 3, 2).unwrap(), b"cd");
    assert_eq!(index.extract(8, 2).unwrap(), b"a");
    assert!(matches!(index.extract(9, 1), Err(Error::OutOfBounds { .. })));
}

#[test]
fn sentinel_rejected() {
    assert!(matches!(Text::new(&b"ab\0c"[..]), Err(Error::SentinelInInput { offset: 2 })));
    let index = Index::build(&text("abc")).unwrap();
    assert!(matches!(index.find(b"a\0"), Err(Error::SentinelInPattern { offset: 1 })));
}

#[test]
fn oracle_examples() {
    assert_eq!(naive_find(b"ababaac", b"aba"), vec![1, 3]);
    assert_eq!(naive_find(b"ababaac", b"ababaac"), vec![1]);
    assert!(brute_maximal_repeats(b"aa", DEFAULT_BOUND).unwrap().contains(b"a"));
    assert_eq!(brute_maximal_repeats(b"abcd", DEFAULT_BOUND).unwrap().count(), 0);
}

#[test]
fn round_trip_preserves_answers() {
    let t = text("abcdbcda");
    let index = Index::build(&t).unwrap();
    let loaded = persist::from_bytes(&persist::to_bytes(&index)).unwrap();
    drop(t);
    assert_eq!(loaded.find(b"bcd").unwrap(), vec![2, 5]);
    assert_eq!(loaded.text(), b"abcdbcda");
    for p in [&b"a"[..], b"da", b"cdb", b"abcdbcda", b"x"] {
        assert_eq!(loaded.find(p).unwrap(), index.find(p).unwrap());
    }
}
