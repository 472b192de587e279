//! Runs the audits a scenario asks for and assembles the report.

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::audits::{run_audit, Registry};
use crate::doc::{AuditKind, ScenarioDoc};
use crate::report::{Report, Section};
use crate::setup::Setup;

pub const THREADS_VAR: &str = "SPHERTWIST_THREADS";

const TWIST_NOTE: &str = "the twist certificate checks that the images of the indecomposable projectives are perfect, \
have no morphisms in nonzero shifts within the shift window, and that A maps bijectively onto their endomorphisms; \
a window narrower than the kernel's projective dimension can miss morphisms";

const DEGREE_NOTE: &str = "every t >= 2 is audited; module categories of finite-dimensional algebras have Krull dimension zero, \
so no upper bound on t in terms of the dimension is imposed";

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads; `None` reads the environment, then uses rayon's default.
    pub threads: Option<usize>,
}

/// Reads `SPHERTWIST_THREADS`; unset means no preference.
pub fn threads_from_env() -> Result<Option<usize>, String> {
    match std::env::var(THREADS_VAR) {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(format!("{THREADS_VAR}: {e}")),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(format!("{THREADS_VAR} must be a positive integer, got {v:?}")),
        },
    }
}

fn scenario_echo(doc: &ScenarioDoc, setup: &Setup) -> Value {
    let mut m = Map::new();
    if let Some(name) = &setup.name {
        m.insert("name".into(), json!(name));
    }
    m.insert("field".into(), json!(setup.field.to_string()));
    m.insert("algebra".into(), json!({"kind": doc.algebra.kind(), "dim": setup.ambient.dim()}));
    let modules: Map<String, Value> = setup.modules.iter().map(|(k, v)| (k.clone(), json!({"dim": v.dim()}))).collect();
    if !modules.is_empty() {
        m.insert("modules".into(), Value::Object(modules));
    }
    match &setup.context {
        Some(Ok(ctx)) => {
            let x: Vec<Value> = ctx
                .summands
                .iter()
                .map(|s| json!({"module": s.label, "multiplicity": s.multiplicity, "projective": s.projective}))
                .collect();
            m.insert("x".into(), json!(x));
            m.insert(
                "context".into(),
                json!({
                    "lambda_dim": ctx.lambda.dim(),
                    "lambda_con_dim": ctx.lambda_con.dim(),
                    "proj_ideal_dim": ctx.proj_ideal.len(),
                    "nonprojective_summands": ctx.n(),
                }),
            );
        }
        Some(Err(e)) => {
            m.insert("context".into(), json!({"error": e}));
        }
        None => {}
    }
    if let Some(q) = &setup.quotient {
        m.insert("surjection".into(), json!({"source_dim": q.source.dim(), "target_dim": q.target.dim(), "kernel_dim": q.kernel.len()}));
    }
    if !setup.ts.is_empty() {
        m.insert("t".into(), json!(setup.ts));
    }
    m.insert("cap".into(), json!(setup.cap));
    if let Some((lo, hi)) = setup.window {
        m.insert("window".into(), json!([lo, hi]));
    }
    m.insert("audits".into(), json!(setup.audits.iter().map(|a| a.name()).collect::<Vec<_>>()));
    Value::Object(m)
}

/// Runs every audit of an already validated document.
pub fn run(doc: &ScenarioDoc, opts: &RunOptions) -> Result<Report, String> {
    let setup = Setup::build(doc).map_err(|l| l.message)?;
    let threads = match opts.threads {
        Some(n) => Some(n),
        None => threads_from_env()?,
    };
    let registry = Registry::standard();
    let jobs = registry.jobs(&setup.audits, &setup.ts);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| e.to_string())?;
    let sections: Vec<Section> = pool.install(|| jobs.par_iter().map(|(a, t)| run_audit(a.as_ref(), &setup, *t)).collect());
    let mut notes = Vec::new();
    if !setup.ts.is_empty() {
        notes.push(DEGREE_NOTE.to_string());
    }
    if setup.audits.contains(&AuditKind::Twist) {
        notes.push(TWIST_NOTE.to_string());
    }
    Ok(Report::new(scenario_echo(doc, &setup), sections, notes))
}
