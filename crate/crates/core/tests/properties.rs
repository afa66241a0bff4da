use lcdawg::oracles::naive_find;
use lcdawg::{persist, EdgeId, Index, Text};
use proptest::prelude::*;

fn small_alphabet_text() -> impl Strategy<Value = Vec<u8>> {
    (1u8..=4).prop_flat_map(|sigma| prop::collection::vec(b'a'..b'a' + sigma, 0..200))
}

fn pattern() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(b'a'..=b'd', 1..8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn find_equals_naive(bytes in small_alphabet_text(), p in pattern(), from in 0usize..200, len in 1usize..20) {
        let t = Text::new(bytes.clone()).unwrap();
        let index = Index::build(&t).unwrap();
        prop_assert_eq!(index.find(&p).unwrap(), naive_find(&bytes, &p));
        // a pattern taken from the text itself always occurs
        if !bytes.is_empty() {
            let i = from % bytes.len();
            let sub = &bytes[i..(i + len).min(bytes.len())];
            let hits = index.find(sub).unwrap();
            prop_assert_eq!(&hits, &naive_find(&bytes, sub));
            prop_assert_eq!(index.count(sub).unwrap(), hits.len() as u64);
            prop_assert!(index.exists(sub).unwrap());
        }
    }

    #[test]
    fn slp_expands_to_edge_labels(bytes in small_alphabet_text()) {
        let t = Text::new(bytes).unwrap();
        let (index, trace) = Index::build_traced(&t).unwrap();
        let g = index.graph();
        for (i, e) in g.edges().iter().enumerate() {
            let id = EdgeId(i as u32);
            let x = index.slp().var_of_edge(id);
            prop_assert_eq!(index.slp().expand_prefix(x, e.slen).unwrap(), trace.labels.label(g, id, &t));
        }
        prop_assert_eq!(index.slp().expand(index.slp().root()).unwrap(), t.with_sentinel().to_vec());
    }

    #[test]
    fn round_trip_is_identity(bytes in prop::collection::vec(1u8..=255, 0..300), p in prop::collection::vec(1u8..=255, 1..4)) {
        let t = Text::new(bytes.clone()).unwrap();
        let index = Index::build(&t).unwrap();
        let raw = persist::to_bytes(&index);
        let loaded = persist::from_bytes(&raw).unwrap();
        prop_assert_eq!(persist::to_bytes(&loaded), raw);
        prop_assert_eq!(loaded.text(), bytes.clone());
        prop_assert_eq!(loaded.find(&p).unwrap(), naive_find(&bytes, &p));
    }

    #[test]
    fn extract_matches_slice(bytes in prop::collection::vec(b'a'..=b'c', 1..300), i in 0usize..300, m in 0usize..40) {
        let t = Text::new(bytes.clone()).unwrap();
        let index = Index::build(&t).unwrap();
        let i = i % bytes.len();
        let m = m.min(bytes.len() - i);
        prop_assert_eq!(index.extract(i as u64 + 1, m as u64).unwrap(), &bytes[i..i + m]);
    }

    #[test]
    fn truncated_files_are_rejected(bytes in prop::collection::vec(b'a'..=b'c', 1..100), cut in 0usize..10_000) {
        let index = Index::build(&Text::new(bytes).unwrap()).unwrap();
        let raw = persist::to_bytes(&index);
        let cut = cut % raw.len();
        prop_assert!(persist::from_bytes(&raw[..cut]).is_err());
    }

    #[test]
    fn corrupt_files_never_panic(bytes in prop::collection::vec(b'a'..=b'c', 1..60), at in 0usize..10_000, val in any::<u8>()) {
        let index = Index::build(&Text::new(bytes).unwrap()).unwrap();
        let mut raw = persist::to_bytes(&index);
        let at = at % raw.len();
        raw[at] = val;
        if let Ok(loaded) = persist::from_bytes(&raw) {
            // a tolerated flip must still yield a usable index
            let _ = loaded.find(b"a");
            let _ = loaded.extract(1, loaded.n().min(5));
        }
    }
}
