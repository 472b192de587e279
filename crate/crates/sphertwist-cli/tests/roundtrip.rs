use proptest::prelude::*;
use sphertwist_cli::catalog::{fixture, nakayama_scenario};
use sphertwist_cli::doc::AuditKind;
use sphertwist_cli::{parse_scenario, serialize_scenario, ScenarioDoc};

const FIXTURES: [&str; 6] = ["fix_a", "fix_n3", "fix_ut2", "fix_ctx1", "fix_ctx3", "fix_ctx3b"];

fn assert_round_trip(doc: &ScenarioDoc) {
    let text = serialize_scenario(doc);
    let back = parse_scenario(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
    assert_eq!(&back, doc);
    assert_eq!(serialize_scenario(&back), text);
}

#[test]
fn fixtures_survive_a_round_trip() {
    for name in FIXTURES {
        assert_round_trip(&fixture(name).unwrap().doc);
    }
}

fn audit_kind() -> impl Strategy<Value = AuditKind> {
    prop::sample::select(vec![
        AuditKind::Resolve,
        AuditKind::Ext,
        AuditKind::Tor,
        AuditKind::Spherical,
        AuditKind::Twist,
        AuditKind::Tilting,
        AuditKind::All,
    ])
}

fn nakayama_doc() -> impl Strategy<Value = ScenarioDoc> {
    (1usize..=4)
        .prop_flat_map(|n| (Just(n), prop::collection::btree_set(0..n, 1..=n), prop::collection::btree_set(2usize..=6, 1..=3)))
        .prop_flat_map(|(n, classes, ts)| {
            let doc = nakayama_scenario(n, &classes.into_iter().collect::<Vec<_>>(), ts.into_iter().collect());
            (Just(doc), prop::option::of(1usize..20), prop::option::of((-4i64..=0, 0i64..=4)), prop::collection::vec(audit_kind(), 0..4))
        })
        .prop_map(|(mut doc, cap, window, audits)| {
            doc.scenario.cap = cap;
            doc.scenario.window = window.map(|(lo, hi)| [lo, hi]);
            if !audits.is_empty() {
                doc.scenario.audits = audits;
            }
            doc
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_documents_round_trip(doc in nakayama_doc()) {
        let text = serialize_scenario(&doc);
        let back = parse_scenario(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(serialize_scenario(&back), text);
    }

    #[test]
    fn truncated_documents_are_rejected_with_a_position(cut in 1usize..200) {
        let text = serialize_scenario(&fixture("fix_ctx3").unwrap().doc);
        let cut = cut.min(text.trim_end().len() - 1);
        if let Err(e) = parse_scenario(&text[..cut]) {
            let (line, column) = e.location();
            prop_assert!(line >= 1 && column >= 1);
        } else {
            prop_assert!(false, "prefix of length {} parsed", cut);
        }
    }
}
