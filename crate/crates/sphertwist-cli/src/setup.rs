//! Turns a typed [`ScenarioDoc`] into algebras, modules, the Frobenius
//! context and the surjection the audits run on.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use sphertwist_core::algebra::{cyclic_nakayama, truncated_polynomial, Arrow, QuiverPresentation, DEFAULT_PATH_CAP};
use sphertwist_core::frobenius::{build_context, FrobeniusContext, SummandSpec};
use sphertwist_core::{Algebra, Field, Matrix, Module, Scalar, SurjectionData};

use crate::doc::{AlgebraSpec, AuditKind, FieldSpec, IdealSpec, Located, ModuleSpec, Num, Rule, ScenarioDoc};
use crate::locate::Seg;
use crate::path;

pub const DEFAULT_CAP: usize = 24;

#[derive(Debug)]
pub struct Setup {
    pub name: Option<String>,
    pub field: Field,
    pub ambient: Arc<Algebra>,
    pub modules: BTreeMap<String, Module>,
    /// Present when the scenario lists summands of `X`. Building the context
    /// can fail on a well-formed document (a summand declared non-projective
    /// may be projective); the failure is reported by the audits.
    pub context: Option<Result<FrobeniusContext, String>>,
    /// An explicitly requested quotient of the ambient algebra.
    pub quotient: Option<SurjectionData>,
    pub ts: Vec<usize>,
    pub cap: usize,
    pub window: Option<(i64, i64)>,
    pub audits: Vec<AuditKind>,
}

impl Setup {
    pub fn build(doc: &ScenarioDoc) -> Result<Setup, Located> {
        let field = build_field(&doc.field)?;
        let ambient = Arc::new(build_algebra(field, &doc.algebra)?);
        let mut modules = BTreeMap::new();
        for (name, spec) in &doc.modules {
            modules.insert(name.clone(), build_module(&ambient, name, spec)?);
        }

        let sc = &doc.scenario;
        let mut summands = Vec::new();
        for (i, r) in sc.x.iter().enumerate() {
            let module = modules.get(&r.module).ok_or_else(|| {
                Located::new(path!["scenario", "x", i, "module"], Rule::Reference, format!("no module named {:?}", r.module))
            })?;
            if r.multiplicity == 0 {
                return Err(Located::new(
                    path!["scenario", "x", i, "multiplicity"],
                    Rule::Multiplicity,
                    "multiplicities must be at least 1",
                ));
            }
            summands.push(SummandSpec {
                label: r.module.clone(),
                module: module.clone(),
                multiplicity: r.multiplicity,
                projective: r.projective,
            });
        }
        for (i, &t) in sc.t.iter().enumerate() {
            if t < 2 {
                return Err(Located::new(path!["scenario", "t", i], Rule::Degree, format!("t = {t}; audited degrees start at 2")));
            }
        }
        if sc.cap == Some(0) {
            return Err(Located::new(path!["scenario", "cap"], Rule::Window, "the cap must be positive"));
        }
        let window = match sc.window {
            Some([lo, hi]) if lo > hi => {
                return Err(Located::new(path!["scenario", "window"], Rule::Window, format!("empty window [{lo}, {hi}]")));
            }
            w => w.map(|[lo, hi]| (lo, hi)),
        };
        if sc.surjection.is_some() && !summands.is_empty() {
            return Err(Located::new(
                path!["scenario", "surjection"],
                Rule::Requirement,
                "a scenario with X uses the projection onto the contraction algebra; drop either x or surjection",
            ));
        }
        let quotient = match &sc.surjection {
            None => None,
            Some(s) => Some(build_quotient(&ambient, &s.ideal)?),
        };

        let audits = AuditKind::expand(&sc.audits);
        for (i, kind) in sc.audits.iter().enumerate() {
            let needs: &[AuditKind] = if *kind == AuditKind::All { &AuditKind::CONCRETE } else { std::slice::from_ref(kind) };
            for k in needs {
                let per_t = matches!(k, AuditKind::Spherical | AuditKind::Tilting);
                if per_t && (summands.is_empty() || sc.t.is_empty()) {
                    return Err(Located::new(
                        path!["scenario", "audits", i],
                        Rule::Requirement,
                        format!("the {} audit needs scenario.x and scenario.t", k.name()),
                    ));
                }
                if !per_t && summands.is_empty() && quotient.is_none() {
                    return Err(Located::new(
                        path!["scenario", "audits", i],
                        Rule::Requirement,
                        format!("the {} audit needs scenario.x or scenario.surjection", k.name()),
                    ));
                }
            }
        }

        let context = (!summands.is_empty()).then(|| build_context(Arc::clone(&ambient), summands).map_err(|e| e.to_string()));
        Ok(Setup {
            name: sc.name.clone(),
            field,
            ambient,
            modules,
            context,
            quotient,
            ts: sc.t.clone(),
            cap: sc.cap.unwrap_or(DEFAULT_CAP),
            window,
            audits,
        })
    }

    /// The surjection the twist and Tor audits use: `π : Λ → Λ_con` when a
    /// context is present, otherwise the requested quotient.
    pub fn surjection(&self) -> Result<&SurjectionData, String> {
        match (&self.context, &self.quotient) {
            (Some(Ok(ctx)), _) => Ok(&ctx.pi),
            (Some(Err(e)), _) => Err(format!("context: {e}")),
            (None, Some(p)) => Ok(p),
            (None, None) => Err("no surjection in this scenario".into()),
        }
    }

    pub fn context(&self) -> Result<&FrobeniusContext, String> {
        match &self.context {
            Some(Ok(ctx)) => Ok(ctx),
            Some(Err(e)) => Err(format!("context: {e}")),
            None => Err("no X in this scenario".into()),
        }
    }
}

fn build_field(spec: &FieldSpec) -> Result<Field, Located> {
    match spec {
        FieldSpec::Named(n) if n == "rational" || n == "Q" => Ok(Field::Rational),
        FieldSpec::Named(n) => {
            Err(Located::new(path!["field"], Rule::Field, format!("unknown field {n:?}; use \"rational\" or {{\"prime\": p}}")))
        }
        FieldSpec::Prime { prime } => Field::prime(*prime).map_err(|e| Located::new(path!["field", "prime"], Rule::Field, e.to_string())),
    }
}

fn scalar(field: Field, n: &Num, at: Vec<Seg>) -> Result<Scalar, Located> {
    match n {
        Num::Int(i) => Ok(field.from_i64(*i)),
        Num::Text(s) => field.parse(s).map_err(|e| Located::new(at, Rule::Number, format!("{e} in {field}"))),
    }
}

fn vector(field: Field, row: &[Num], at: &[Seg]) -> Result<Vec<Scalar>, Located> {
    row.iter()
        .enumerate()
        .map(|(i, n)| {
            let mut p = at.to_vec();
            p.push(Seg::Index(i));
            scalar(field, n, p)
        })
        .collect()
}

fn build_algebra(field: Field, spec: &AlgebraSpec) -> Result<Algebra, Located> {
    let err = |p: Vec<Seg>, m: String| Located::new(p, Rule::Algebra, m);
    match spec {
        AlgebraSpec::BaseField => Ok(Algebra::base_field(field)),
        AlgebraSpec::TruncatedPolynomial { degree } => {
            if *degree == 0 {
                return Err(err(path!["algebra", "degree"], "degree must be at least 1".into()));
            }
            Ok(truncated_polynomial(field, *degree))
        }
        AlgebraSpec::Nakayama { vertices, loewy_length } => {
            if *vertices == 0 {
                return Err(err(path!["algebra", "vertices"], "at least one vertex is needed".into()));
            }
            if *loewy_length == 0 {
                return Err(err(path!["algebra", "loewy_length"], "Loewy length must be at least 1".into()));
            }
            Ok(cyclic_nakayama(field, *vertices, *loewy_length))
        }
        AlgebraSpec::Quiver { vertices, arrows, relations } => {
            let mut seen = BTreeSet::new();
            for (i, v) in vertices.iter().enumerate() {
                if !seen.insert(v) {
                    return Err(err(path!["algebra", "vertices", i], format!("vertex {v:?} listed twice")));
                }
            }
            let vertex = |name: &str, p: Vec<Seg>| {
                vertices.iter().position(|v| v == name).ok_or_else(|| Located::new(p, Rule::Reference, format!("no vertex named {name:?}")))
            };
            let mut names = BTreeSet::new();
            let mut out = Vec::new();
            for (i, a) in arrows.iter().enumerate() {
                if !names.insert(&a.name) {
                    return Err(err(path!["algebra", "arrows", i, "name"], format!("arrow {:?} listed twice", a.name)));
                }
                out.push(Arrow {
                    name: a.name.clone(),
                    source: vertex(&a.from, path!["algebra", "arrows", i, "from"])?,
                    target: vertex(&a.to, path!["algebra", "arrows", i, "to"])?,
                });
            }
            let mut q = QuiverPresentation { field, vertices: vertices.clone(), arrows: out, relations: Vec::new() };
            let mut rels = Vec::new();
            for (r, terms) in relations.iter().enumerate() {
                let mut rel = Vec::new();
                for (t, term) in terms.iter().enumerate() {
                    let c = scalar(field, &term.coeff, path!["algebra", "relations", r, t, "coeff"])?;
                    let names: Vec<&str> = term.path.iter().map(String::as_str).collect();
                    let p = q.path(&names).map_err(|e| err(path!["algebra", "relations", r, t, "path"], e.to_string()))?;
                    rel.push((c, p));
                }
                rels.push(rel);
            }
            q.relations = rels;
            q.to_algebra(DEFAULT_PATH_CAP).map_err(|e| err(path!["algebra"], e.to_string()))
        }
        AlgebraSpec::StructureConstants { labels, products, unit } => {
            let dim = unit.len();
            if products.len() != dim {
                return Err(err(path!["algebra", "products"], format!("expected {dim} rows of products, one per basis element")));
            }
            let mut mult = Vec::with_capacity(dim);
            for (i, row) in products.iter().enumerate() {
                if row.len() != dim {
                    return Err(err(path!["algebra", "products", i], format!("expected {dim} products in this row")));
                }
                let mut out = Vec::with_capacity(dim);
                for (j, v) in row.iter().enumerate() {
                    if v.len() != dim {
                        return Err(err(path!["algebra", "products", i, j], format!("expected {dim} coordinates")));
                    }
                    out.push(vector(field, v, &path!["algebra", "products", i, j])?);
                }
                mult.push(out);
            }
            let unit = vector(field, unit, &path!["algebra", "unit"])?;
            let labels = match labels {
                Some(l) if l.len() != dim => return Err(err(path!["algebra", "labels"], format!("expected {dim} labels"))),
                Some(l) => l.clone(),
                None => (0..dim).map(|i| format!("b{i}")).collect(),
            };
            Algebra::with_labels(field, labels, mult, unit).map_err(|e| err(path!["algebra"], e.to_string()))
        }
    }
}

fn build_module(a: &Arc<Algebra>, name: &String, spec: &ModuleSpec) -> Result<Module, Located> {
    let err = |p: Vec<Seg>, m: String| Located::new(p, Rule::Module, m);
    match spec {
        ModuleSpec::Regular => Ok(Module::regular(Arc::clone(a))),
        ModuleSpec::Simple { class } => Module::simple(a, *class).map_err(|e| err(path!["modules", name, "class"], e.to_string())),
        ModuleSpec::Projective { class } => {
            let prims = a.primitive_idempotents().map_err(|e| err(path!["modules", name], e.to_string()))?;
            if *class >= prims.class_count() {
                return Err(err(path!["modules", name, "class"], format!("the algebra has {} classes of simples", prims.class_count())));
            }
            let k = prims.members(*class)[0];
            Module::indecomposable_projective(Arc::clone(a), k).map_err(|e| err(path!["modules", name], e.to_string()))
        }
        ModuleSpec::Representation { dim, action } => {
            if action.len() != a.dim() {
                return Err(err(path!["modules", name, "action"], format!("expected {} matrices, one per basis element", a.dim())));
            }
            let field = a.field();
            let mut mats = Vec::with_capacity(action.len());
            for (i, m) in action.iter().enumerate() {
                if m.len() != *dim {
                    return Err(err(path!["modules", name, "action", i], format!("expected {dim} rows")));
                }
                let mut entries = Vec::with_capacity(dim * dim);
                for (r, row) in m.iter().enumerate() {
                    if row.len() != *dim {
                        return Err(err(path!["modules", name, "action", i, r], format!("expected {dim} entries")));
                    }
                    entries.extend(vector(field, row, &path!["modules", name, "action", i, r])?);
                }
                mats.push(Matrix::new(field, *dim, *dim, entries).map_err(|e| err(path!["modules", name, "action", i], e.to_string()))?);
            }
            Module::new(Arc::clone(a), *dim, mats).map_err(|e| err(path!["modules", name], e.to_string()))
        }
    }
}

fn build_quotient(a: &Arc<Algebra>, ideal: &IdealSpec) -> Result<SurjectionData, Located> {
    let at = path!["scenario", "surjection", "ideal"];
    let gens = match ideal {
        IdealSpec::Named(n) if n == "radical" => a.radical().map_err(|e| Located::new(at.clone(), Rule::Algebra, e.to_string()))?,
        IdealSpec::Named(n) => {
            return Err(Located::new(at, Rule::Algebra, format!("unknown ideal {n:?}; use \"radical\" or a list of generators")))
        }
        IdealSpec::Generators(rows) => {
            let mut out = Vec::with_capacity(rows.len());
            for (i, r) in rows.iter().enumerate() {
                let mut p = at.clone();
                p.push(Seg::Index(i));
                if r.len() != a.dim() {
                    return Err(Located::new(p, Rule::Algebra, format!("expected {} coordinates", a.dim())));
                }
                out.push(vector(a.field(), r, &p)?);
            }
            out
        }
    };
    a.quotient_surjection(&gens).map_err(|e| Located::new(at, Rule::Algebra, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doc::parse_scenario;

    fn setup(text: &str) -> Setup {
        Setup::build(&parse_scenario(text).unwrap()).unwrap()
    }

    #[test]
    fn quiver_and_structure_constant_forms_agree_on_dual_numbers() {
        let q = setup(
            r#"{"field": "rational", "algebra": {"kind": "quiver", "vertices": ["1"],
                "arrows": [{"name": "x", "from": "1", "to": "1"}],
                "relations": [[{"coeff": 1, "path": ["x", "x"]}]]}}"#,
        );
        let s = setup(
            r#"{"field": "rational", "algebra": {"kind": "structure_constants", "labels": ["1", "x"],
                "products": [[["1", "0"], ["0", "1"]], [["0", "1"], ["0", "0"]]], "unit": ["1", "0"]}}"#,
        );
        assert_eq!(q.ambient.dim(), 2);
        assert_eq!(s.ambient.dim(), 2);
        assert!(q.ambient.is_commutative() && s.ambient.is_commutative());
        assert_eq!(q.ambient.radical().unwrap().len(), 1);
        assert_eq!(s.ambient.radical().unwrap().len(), 1);
    }

    #[test]
    fn simple_classes_follow_the_vertex_order() {
        let s = setup(
            r#"{"field": "rational", "algebra": {"kind": "quiver", "vertices": ["u", "v"],
                "arrows": [{"name": "a", "from": "u", "to": "v"}]},
                "modules": {"Su": {"kind": "simple", "class": 0}, "Pu": {"kind": "projective", "class": 0}}}"#,
        );
        let su = &s.modules["Su"];
        let pu = &s.modules["Pu"];
        let prims = s.ambient.primitive_idempotents().unwrap();
        let e_u = &prims.elements[prims.members(0)[0]];
        assert_eq!(su.idempotent_part(e_u).dim(), 1);
        assert_eq!(pu.dim(), 2);
    }

    #[test]
    fn representations_are_checked_against_the_algebra() {
        let text = r#"{"field": "rational", "algebra": {"kind": "truncated_polynomial", "degree": 2},
            "modules": {"M": {"kind": "representation", "dim": 1, "action": [[["1"]], [["1"]]]}}}"#;
        let doc: ScenarioDoc = serde_json::from_str(text).unwrap();
        let e = Setup::build(&doc).unwrap_err();
        assert_eq!(e.rule, Rule::Module);
        assert_eq!(e.path, path!["modules", "M"]);
        let ok = r#"{"field": "rational", "algebra": {"kind": "truncated_polynomial", "degree": 2},
            "modules": {"M": {"kind": "representation", "dim": 1, "action": [[["1"]], [["0"]]]}}}"#;
        assert_eq!(setup(ok).modules["M"].dim(), 1);
    }

    #[test]
    fn context_failures_are_kept_for_the_report() {
        let s = setup(
            r#"{"field": "rational", "algebra": {"kind": "truncated_polynomial", "degree": 2},
                "modules": {"A": {"kind": "regular"}}, "scenario": {"x": [{"module": "A"}]}}"#,
        );
        assert!(matches!(s.context, Some(Err(_))));
        assert!(s.surjection().is_err());
    }

    #[test]
    fn quotients_by_the_radical() {
        let s = setup(
            r#"{"field": "rational", "algebra": {"kind": "quiver", "vertices": ["1", "2"],
                "arrows": [{"name": "a", "from": "1", "to": "2"}]},
                "scenario": {"surjection": {"ideal": "radical"}, "audits": ["twist"]}}"#,
        );
        let p = s.surjection().unwrap();
        assert_eq!(p.target.dim(), 2);
        assert_eq!(p.kernel_dim(), 1);
    }
}
