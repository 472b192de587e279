//! The shipped scenarios: the fixture files plus seeded random radical
//! square zero Nakayama contexts.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::doc::{parse_scenario, AlgebraSpec, AuditKind, FieldSpec, ModuleSpec, Scenario, ScenarioDoc, SummandRef};

pub const CATALOG_SEED: u64 = 0x5eed_ca7a;

/// `(name, contents)` of every fixture file.
pub const FIXTURE_FILES: [(&str, &str); 6] = [
    ("fix_a", include_str!("../fixtures/fix_a.json")),
    ("fix_n3", include_str!("../fixtures/fix_n3.json")),
    ("fix_ut2", include_str!("../fixtures/fix_ut2.json")),
    ("fix_ctx1", include_str!("../fixtures/fix_ctx1.json")),
    ("fix_ctx3", include_str!("../fixtures/fix_ctx3.json")),
    ("fix_ctx3b", include_str!("../fixtures/fix_ctx3b.json")),
];

#[derive(Debug, Clone)]
pub struct Entry {
    pub name: String,
    pub doc: ScenarioDoc,
}

impl Entry {
    pub fn ts(&self) -> &[usize] {
        &self.doc.scenario.t
    }
}

pub fn fixture(name: &str) -> Option<Entry> {
    FIXTURE_FILES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(n, text)| Entry { name: n.to_string(), doc: parse_scenario(text).unwrap_or_else(|e| panic!("shipped fixture {n}: {e}")) })
}

/// `X = A ⊕ S_c (c in classes)` over the cyclic Nakayama algebra on `n`
/// vertices with radical square zero, audited at `ts`.
pub fn nakayama_scenario(n: usize, classes: &[usize], ts: Vec<usize>) -> ScenarioDoc {
    let mut modules = std::collections::BTreeMap::new();
    modules.insert("A".to_string(), ModuleSpec::Regular);
    let mut x = vec![SummandRef { module: "A".into(), multiplicity: 1, projective: true }];
    for &c in classes {
        let name = format!("S{}", c + 1);
        modules.insert(name.clone(), ModuleSpec::Simple { class: c });
        x.push(SummandRef { module: name, multiplicity: 1, projective: false });
    }
    let label: Vec<String> = classes.iter().map(|c| (c + 1).to_string()).collect();
    ScenarioDoc {
        field: FieldSpec::Named("rational".into()),
        algebra: AlgebraSpec::Nakayama { vertices: n, loewy_length: 2 },
        modules,
        scenario: Scenario {
            name: Some(format!("N{n} with simples {}", label.join(","))),
            x,
            t: ts,
            audits: vec![AuditKind::All],
            ..Scenario::default()
        },
    }
}

/// `count` distinct random contexts with `n ≤ 5`, each audited at every
/// `t` in `2..=n+2`. Half the draws take the simples along an arithmetic
/// progression of vertices, the rest an arbitrary nonempty subset.
pub fn random_nakayama(seed: u64, count: usize) -> Vec<Entry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    while out.len() < count {
        let n: usize = rng.gen_range(1..=5);
        let classes: Vec<usize> = if rng.gen_bool(0.5) {
            let steps: Vec<usize> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
            let step = steps[rng.gen_range(0..steps.len())];
            let start = rng.gen_range(0..step);
            (start..n).step_by(step).collect()
        } else {
            (0..n).filter(|_| rng.gen_bool(0.5)).collect()
        };
        if classes.is_empty() || !seen.insert((n, classes.clone())) {
            continue;
        }
        let name = format!("nakayama_{n}_{}", classes.iter().map(|c| (c + 1).to_string()).collect::<Vec<_>>().join(""));
        out.push(Entry { name, doc: nakayama_scenario(n, &classes, (2..=n + 2).collect()) });
    }
    out
}

/// The context scenarios of the agreement suite.
pub fn catalog() -> Vec<Entry> {
    let mut out: Vec<Entry> = ["fix_ctx1", "fix_ctx3", "fix_ctx3b"].iter().filter_map(|n| fixture(n)).collect();
    out.extend(random_nakayama(CATALOG_SEED, 6));
    out
}
