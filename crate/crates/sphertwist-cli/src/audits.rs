//! The audits a scenario can request, kept in a registry of trait objects.
//! Each audit fills one [`Section`] per run: named pass/fail checks plus a
//! data tree.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Map, Value};
use sphertwist_core::frobenius::{stable_hom, suspension_power, FrobeniusContext, FrobeniusError};
use sphertwist_core::homology::{
    block_permutation, cotwist_data, ext_dims, ext_from_resolution, restrict_left, restrict_right, tor_dims, tor_dims_resolving_right,
    HomologyError,
};
use sphertwist_core::resolutions::{extract_shape, minimal_resolution, partially_minimal_resolution, Resolution, ResolutionError};
use sphertwist_core::spherical::{lambda_con_class, syz_audit, tail_matches_syzygy, tilting_audit, SphericalError, SphericalReport};
use sphertwist_core::twist::{equivalence_certificate, twist_dims_via_resolution, twist_triangle_check, ChainComplex, TwistError};
use sphertwist_core::{AlgebraError, Module, ModuleError, SurjectionData};

use crate::doc::AuditKind;
use crate::report::{Check, Section, Status};
use crate::setup::Setup;

/// Why an audit stopped early.
#[derive(Debug)]
pub enum Halt {
    Cap(String),
    Error(String),
}

impl From<String> for Halt {
    fn from(s: String) -> Halt {
        Halt::Error(s)
    }
}

fn halt(cap: bool, e: &dyn std::fmt::Display) -> Halt {
    if cap {
        Halt::Cap(e.to_string())
    } else {
        Halt::Error(e.to_string())
    }
}

fn resolution_cap(e: &ResolutionError) -> bool {
    matches!(e, ResolutionError::CapExceeded { .. })
}

fn twist_cap(e: &TwistError) -> bool {
    match e {
        TwistError::CapExceeded { .. } => true,
        TwistError::Resolution(r) => resolution_cap(r),
        _ => false,
    }
}

fn homology_cap(e: &HomologyError) -> bool {
    match e {
        HomologyError::CapExceeded { .. } => true,
        HomologyError::Resolution(r) => resolution_cap(r),
        HomologyError::Twist(t) => twist_cap(t),
        _ => false,
    }
}

impl From<ResolutionError> for Halt {
    fn from(e: ResolutionError) -> Halt {
        halt(resolution_cap(&e), &e)
    }
}

impl From<HomologyError> for Halt {
    fn from(e: HomologyError) -> Halt {
        halt(homology_cap(&e), &e)
    }
}

impl From<TwistError> for Halt {
    fn from(e: TwistError) -> Halt {
        halt(twist_cap(&e), &e)
    }
}

impl From<SphericalError> for Halt {
    fn from(e: SphericalError) -> Halt {
        let cap = match &e {
            SphericalError::Resolution(r) => resolution_cap(r),
            SphericalError::Homology(h) => homology_cap(h),
            _ => false,
        };
        halt(cap, &e)
    }
}

impl From<FrobeniusError> for Halt {
    fn from(e: FrobeniusError) -> Halt {
        Halt::Error(e.to_string())
    }
}

impl From<ModuleError> for Halt {
    fn from(e: ModuleError) -> Halt {
        Halt::Error(e.to_string())
    }
}

impl From<AlgebraError> for Halt {
    fn from(e: AlgebraError) -> Halt {
        Halt::Error(e.to_string())
    }
}

/// Collects checks and data for one section.
pub struct Sheet {
    checks: Vec<Check>,
    data: Map<String, Value>,
    truncated: Option<String>,
}

impl Sheet {
    fn new() -> Sheet {
        Sheet { checks: Vec::new(), data: Map::new(), truncated: None }
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool) {
        self.checks.push(Check { name: name.into(), pass });
    }

    pub fn put(&mut self, key: &str, value: impl Serialize) {
        self.data.insert(key.to_string(), serde_json::to_value(value).expect("audit data serializes"));
    }

    /// Marks the section as cut short by the cap without stopping it.
    pub fn truncated(&mut self, why: impl Into<String>) {
        self.truncated.get_or_insert_with(|| why.into());
    }
}

pub trait Audit: Send + Sync {
    fn kind(&self) -> AuditKind;

    /// Whether the audit runs once for each requested `t`.
    fn per_t(&self) -> bool {
        false
    }

    fn fill(&self, setup: &Setup, t: Option<usize>, sheet: &mut Sheet) -> Result<(), Halt>;
}

pub fn run_audit(audit: &dyn Audit, setup: &Setup, t: Option<usize>) -> Section {
    let mut sheet = Sheet::new();
    let outcome = audit.fill(setup, t, &mut sheet);
    let Sheet { checks, data, truncated } = sheet;
    let (status, message) = match outcome {
        Err(Halt::Error(m)) => (Status::Error, Some(m)),
        Err(Halt::Cap(m)) => (Status::CapExceeded, Some(m)),
        Ok(()) if checks.iter().any(|c| !c.pass) => (Status::Failed, truncated),
        Ok(()) => match truncated {
            Some(m) => (Status::CapExceeded, Some(m)),
            None => (Status::Ok, None),
        },
    };
    Section { audit: audit.kind().name().to_string(), t, status, message, checks, data }
}

pub struct Registry {
    audits: BTreeMap<AuditKind, Arc<dyn Audit>>,
}

impl Registry {
    pub fn empty() -> Registry {
        Registry { audits: BTreeMap::new() }
    }

    pub fn standard() -> Registry {
        let mut r = Registry::empty();
        r.register(Arc::new(ResolveAudit));
        r.register(Arc::new(ExtAudit));
        r.register(Arc::new(TorAudit));
        r.register(Arc::new(SphericalAudit));
        r.register(Arc::new(TwistAudit));
        r.register(Arc::new(TiltingAudit));
        r
    }

    pub fn register(&mut self, audit: Arc<dyn Audit>) {
        self.audits.insert(audit.kind(), audit);
    }

    pub fn get(&self, kind: AuditKind) -> Option<&Arc<dyn Audit>> {
        self.audits.get(&kind)
    }

    /// The work list for `kinds`, in order, expanding per-`t` audits.
    pub fn jobs(&self, kinds: &[AuditKind], ts: &[usize]) -> Vec<(Arc<dyn Audit>, Option<usize>)> {
        let mut out = Vec::new();
        for k in kinds {
            let Some(a) = self.get(*k) else { continue };
            if a.per_t() {
                out.extend(ts.iter().map(|&t| (Arc::clone(a), Some(t))));
            } else {
                out.push((Arc::clone(a), None));
            }
        }
        out
    }
}

fn labels(ctx: &FrobeniusContext, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| ctx.xi_label(i).to_string()).collect()
}

fn summand_profile(ctx: &FrobeniusContext, rows: &[Vec<usize>]) -> Map<String, Value> {
    rows.iter().enumerate().map(|(i, r)| (format!("S_{}", ctx.xi_label(i)), json!(r))).collect()
}

/// Records a resolution and its structural checks under `key`.
fn describe_resolution(sheet: &mut Sheet, key: &str, res: &Resolution, simples: Option<&[Module]>) -> Result<(), Halt> {
    sheet.put(
        key,
        json!({
            "dim": res.target.dim(),
            "term_dims": res.term_dims(),
            "length": res.length(),
            "complete": res.complete,
            "euler_characteristic": res.euler_characteristic(),
        }),
    );
    sheet.check(format!("{key}: exact"), res.is_exact());
    sheet.check(format!("{key}: projective terms"), res.terms_projective()?);
    if let Some(s) = simples {
        sheet.check(format!("{key}: partially minimal"), res.partially_minimal && res.hom_kills_differentials(s)?);
    }
    if res.complete {
        sheet.check(format!("{key}: alternating sum of dimensions"), res.euler_characteristic() == res.target.dim() as i64);
    } else {
        sheet.truncated(format!("the resolution of {key} did not finish within {} steps", res.cap));
    }
    Ok(())
}

pub struct ResolveAudit;

impl Audit for ResolveAudit {
    fn kind(&self) -> AuditKind {
        AuditKind::Resolve
    }

    fn fill(&self, setup: &Setup, _t: Option<usize>, sheet: &mut Sheet) -> Result<(), Halt> {
        if setup.context.is_none() {
            let p = setup.surjection()?;
            let b = restrict_right(p);
            let res = minimal_resolution(&b, setup.cap)?;
            return describe_resolution(sheet, "B", &res, None);
        }
        let ctx = setup.context()?;
        let simples = ctx.con_simples()?;
        let res = partially_minimal_resolution(ctx, &ctx.lambda_con_module(), setup.cap)?;
        describe_resolution(sheet, "lambda_con", &res, Some(&simples))?;

        let mut shapes = Map::new();
        for i in 0..ctx.n() {
            let key = format!("e_{} lambda_con", ctx.xi_label(i));
            let res_i = partially_minimal_resolution(ctx, &ctx.e_lambda_con(i)?, setup.cap)?;
            describe_resolution(sheet, &key, &res_i, Some(&simples))?;
            let mut by_t = Map::new();
            for &t in &setup.ts {
                let entry = match extract_shape(ctx, &res_i, i, t) {
                    Ok(shape) => {
                        let tail_ok = tail_matches_syzygy(ctx, &res_i, i, t)?;
                        sheet.check(format!("{key}: tail at t={t} is E(X, Omega^{} X_{})", t - 1, ctx.xi_label(i)), tail_ok);
                        json!({"tau": ctx.xi_label(shape.tau), "tail_projective": shape.tail_projective.len()})
                    }
                    Err(ResolutionError::ShapeMismatch(m)) => json!({"shape": m}),
                    Err(ResolutionError::CapExceeded { .. }) => json!({"shape": "incomplete"}),
                    Err(e) => return Err(e.into()),
                };
                by_t.insert(format!("t={t}"), entry);
            }
            if !by_t.is_empty() {
                shapes.insert(ctx.xi_label(i).to_string(), Value::Object(by_t));
            }
        }
        if !shapes.is_empty() {
            sheet.put("shapes", shapes);
        }
        Ok(())
    }
}

pub struct ExtAudit;

impl Audit for ExtAudit {
    fn kind(&self) -> AuditKind {
        AuditKind::Ext
    }

    fn fill(&self, setup: &Setup, _t: Option<usize>, sheet: &mut Sheet) -> Result<(), Halt> {
        if setup.context.is_none() {
            let p = setup.surjection()?;
            let b = restrict_right(p);
            let top = setup.cap.min(6);
            sheet.put("ext_B_B", ext_dims(&b, &b, 0..top + 1)?);
            return Ok(());
        }
        let ctx = setup.context()?;
        let simples = ctx.con_simples()?;
        let con = ctx.lambda_con_module();
        let res = partially_minimal_resolution(ctx, &con, setup.cap)?;
        let top = match res.length() {
            Some(l) if res.complete => l + 2,
            _ => res.terms.len().saturating_sub(1),
        };
        if !res.complete {
            sheet.truncated(format!("Ext is only known up to degree {}", top.saturating_sub(1)));
        }
        let mut rows = Vec::new();
        let mut routes_agree = true;
        for s in &simples {
            let fast = ext_from_resolution(&res, s, 0..top)?;
            routes_agree &= fast == ext_dims(&con, s, 0..top)?;
            rows.push(fast);
        }
        sheet.check("Ext(lambda_con, S) agrees with a minimal resolution", routes_agree);
        sheet.put("ext_lambda_con", summand_profile(ctx, &rows));

        let mut stable = Map::new();
        let mut agree = true;
        for i in 0..ctx.n() {
            for j in 0..ctx.n() {
                let (xi, xj) = (ctx.xi(i), ctx.xi(j));
                let ext = ext_dims(xi, xj, 1..4)?;
                let mut st = Vec::with_capacity(3);
                for k in 1..4i64 {
                    st.push(stable_hom(&suspension_power(xi, -k)?, xj)?.dim);
                }
                agree &= ext == st;
                stable.insert(format!("{},{}", ctx.xi_label(i), ctx.xi_label(j)), json!({"ext": ext, "stable_hom_from_syzygy": st}));
            }
        }
        sheet.check("Ext^k(X_i, X_j) = stable Hom(Omega^k X_i, X_j) for k = 1..3", agree);
        sheet.put("summands", stable);
        Ok(())
    }
}

/// Maps a permutation of `Λ_con` classes to one of summand indices.
fn classes_to_summands(ctx: &FrobeniusContext, perm: &[usize]) -> Result<Option<Vec<usize>>, Halt> {
    let classes: Vec<usize> = (0..ctx.n()).map(|i| lambda_con_class(ctx, i)).collect::<Result<_, _>>()?;
    Ok(classes.iter().map(|&c| perm.get(c).and_then(|d| classes.iter().position(|x| x == d))).collect())
}

fn cotwist_value(setup: &Setup, p: &SurjectionData, sheet: &mut Sheet) -> Result<Value, Halt> {
    let cd = cotwist_data(p, setup.cap)?;
    let mut v = json!({
        "tor_dims": cd.tor_dims,
        "complete": cd.complete,
        "concentrated_at": cd.concentrated,
        "cone_shift": cd.shift,
        "cone_cohomology": cd.cone_dims.iter().map(|(k, d)| json!([k, d])).collect::<Vec<_>>(),
    });
    if !cd.complete {
        sheet.truncated(format!("the resolution of B over A did not finish within {} steps", setup.cap));
    }
    if let Some(tb) = &cd.cotwist_bimodule {
        let perm = block_permutation(&tb.bimodule)?;
        let summands = match (&perm, setup.context()) {
            (Some(perm), Ok(ctx)) => classes_to_summands(ctx, perm)?.map(|s| labels(ctx, &s)),
            _ => None,
        };
        v["tor_bimodule"] = json!({
            "degree": tb.degree,
            "dim": tb.bimodule.dim(),
            "right_projective": tb.right_projective,
            "left_projective": tb.left_projective,
            "class_permutation": perm,
            "summand_permutation": summands,
        });
    }
    Ok(v)
}

pub struct TorAudit;

impl Audit for TorAudit {
    fn kind(&self) -> AuditKind {
        AuditKind::Tor
    }

    fn fill(&self, setup: &Setup, _t: Option<usize>, sheet: &mut Sheet) -> Result<(), Halt> {
        let p = setup.surjection()?;
        let v = cotwist_value(setup, p, sheet)?;
        let known: Vec<usize> = serde_json::from_value(v["tor_dims"].clone()).expect("tor dims round-trip");
        let k = known.len().min(5);
        let (bl, br) = (restrict_right(p), restrict_left(p));
        let left = tor_dims(&bl, &br, 0..k)?;
        let right = tor_dims_resolving_right(&bl, &br, 0..k)?;
        sheet.check("Tor balance: resolving either side gives the same dimensions", left == right && left[..] == known[..k]);
        sheet.put("cotwist", v);
        Ok(())
    }
}

fn spherical_value(ctx: &FrobeniusContext, r: &SphericalReport) -> Value {
    let tau = |t: &Option<Vec<usize>>| t.as_ref().map(|t| labels(ctx, t));
    json!({
        "verdict": r.verdict(),
        "side1": {
            "perfect": r.side1.perfect,
            "length": r.side1.length,
            "partially_minimal": r.side1.partially_minimal,
            "relatively_spherical": r.side1.relatively_spherical,
            "ext_profile": summand_profile(ctx, &r.side1.ext_profile),
        },
        "side2": {
            "rigid": r.side2.rigid,
            "add_periodic": r.side2.add_periodic,
            "tau": tau(&r.side2.tau),
        },
        "tau_from_shapes": tau(&r.tau_from_shapes),
        "nakayama": r.nakayama.as_ref().map(|n| json!({
            "self_injective": n.self_injective,
            "sigma": labels(ctx, &n.sigma),
            "tau_eq_sigma": n.tau_eq_sigma,
        })),
    })
}

pub struct SphericalAudit;

impl Audit for SphericalAudit {
    fn kind(&self) -> AuditKind {
        AuditKind::Spherical
    }

    fn per_t(&self) -> bool {
        true
    }

    fn fill(&self, setup: &Setup, t: Option<usize>, sheet: &mut Sheet) -> Result<(), Halt> {
        let ctx = setup.context()?;
        let t = t.expect("spherical runs per t");
        let r = syz_audit(ctx, t, setup.cap)?;
        sheet.check("the two characterisations agree", r.agreement);
        sheet.check("tau from resolution tails matches tau from syzygies", r.tau_consistent);
        sheet.check("resolution of lambda_con is partially minimal", r.side1.partially_minimal);
        sheet.put("report", spherical_value(ctx, &r));
        if !r.side1.perfect && r.side1.length.is_none() {
            sheet.truncated("lambda_con has no finite resolution within the cap");
        }
        if !r.verdict() {
            return Ok(());
        }

        sheet.check("lambda_con is perfect as a left module", r.left_perfect == Some(true));
        sheet.check(format!("stable Hom(X, Sigma^i X) = 0 for 0 < i <= {}", t.saturating_sub(2)), r.positive_rigid == Some(true));
        let cd = cotwist_data(&ctx.pi, setup.cap)?;
        sheet.check(format!("Tor(lambda_con, lambda_con) lives in degrees 0 and {t}"), cd.concentrated == Some(t));
        sheet.check(format!("the cotwist is a shift by {}", -(t as i64) - 1), cd.shift == Some(-(t as i64) - 1));
        let mut consequences = json!({"tor_dims": cd.tor_dims, "cone_shift": cd.shift});
        match &cd.cotwist_bimodule {
            Some(tb) => {
                sheet.check("Tor_t is projective on both sides", tb.right_projective && tb.left_projective);
                let perm = block_permutation(&tb.bimodule)?;
                let mapped = match &perm {
                    Some(p) => classes_to_summands(ctx, p)?,
                    None => None,
                };
                sheet.check("Tor_t permutes the summands by tau", mapped.is_some() && mapped == r.side2.tau);
                consequences["tor_permutation"] = json!(mapped.map(|m| labels(ctx, &m)));
            }
            None => sheet.check("Tor_t is projective on both sides", false),
        }
        let cert = equivalence_certificate(&ctx.pi, setup.window, setup.cap)?;
        sheet.check("the twist is an autoequivalence", cert.verdict);
        consequences["twist_certificate"] = json!(cert.verdict);
        sheet.put("consequences", consequences);
        Ok(())
    }
}

pub struct TwistAudit;

/// The battery of complexes the triangle is checked on: simples,
/// indecomposable projectives and the regular module.
fn battery(p: &SurjectionData) -> Result<Vec<(String, Module)>, Halt> {
    let a = Arc::clone(&p.source);
    let mut out = Vec::new();
    for (c, s) in Module::simples(&a)?.into_iter().enumerate() {
        out.push((format!("S{c}"), s));
    }
    let prims = a.primitive_idempotents()?;
    for (c, &k) in prims.reps.iter().enumerate() {
        out.push((format!("P{c}"), Module::free(Arc::clone(&a), vec![k])?));
    }
    out.push(("A".to_string(), Module::regular(a)));
    Ok(out)
}

impl Audit for TwistAudit {
    fn kind(&self) -> AuditKind {
        AuditKind::Twist
    }

    fn fill(&self, setup: &Setup, _t: Option<usize>, sheet: &mut Sheet) -> Result<(), Halt> {
        let p = setup.surjection()?;
        let cert = equivalence_certificate(p, setup.window, setup.cap)?;
        let nonzero: Vec<Value> =
            cert.hom_table.iter().filter(|e| e.dim > 0).map(|e| json!([e.source, e.target, e.shift, e.dim])).collect();
        sheet.put(
            "certificate",
            json!({
                "kernel_dim": p.kernel.len(),
                "kernel_pdim": cert.kernel_pdim,
                "perfect": cert.perfect,
                "shift_window": [cert.shift_window.0, cert.shift_window.1],
                "nonzero_homs": nonzero,
                "off_shift_zero": cert.off_shift_zero,
                "endo_dim": cert.endo_dim,
                "algebra_dim": p.source.dim(),
                "unit_map_bijective": cert.unit_map_bijective,
                "verdict": cert.verdict,
            }),
        );
        if !cert.perfect {
            sheet.truncated("ker p has no finite resolution within the cap; twist outputs are cut off at the window");
        }

        let mut triangles = Map::new();
        for (name, m) in battery(p)? {
            let c = ChainComplex::concentrated(&m, 0);
            let tr = twist_triangle_check(p, &c, setup.window, setup.cap)?;
            sheet.check(format!("triangle on {name}: T agrees with the cone of the counit"), tr.matches);
            let mut entry = json!({
                "window": [tr.window.0, tr.window.1],
                "twist": tr.twist_dims.iter().map(|(k, d)| json!([k, d])).collect::<Vec<_>>(),
                "cone": tr.cone_dims.iter().map(|(k, d)| json!([k, d])).collect::<Vec<_>>(),
                "truncated": tr.truncated,
            });
            if !tr.truncated {
                let other = twist_dims_via_resolution(p, &c, tr.window, setup.cap)?;
                let nz = |v: &[(i64, usize)]| v.iter().filter(|e| e.1 > 0).copied().collect::<Vec<_>>();
                sheet.check(format!("T({name}) from a resolution of ker p agrees"), nz(&other) == nz(&tr.twist_dims));
                entry["via_resolution"] = json!(other.iter().map(|(k, d)| json!([k, d])).collect::<Vec<_>>());
            }
            triangles.insert(name, entry);
        }
        sheet.put("triangles", triangles);
        Ok(())
    }
}

pub struct TiltingAudit;

fn side_value(s: &sphertwist_core::spherical::TiltingSide) -> Value {
    json!({
        "dim": s.dim,
        "pdim_right": s.pdims.0,
        "pdim_left": s.pdims.1,
        "rho_iso": s.rho_iso,
        "lambda_iso": s.lambda_iso,
    })
}

impl Audit for TiltingAudit {
    fn kind(&self) -> AuditKind {
        AuditKind::Tilting
    }

    fn per_t(&self) -> bool {
        true
    }

    fn fill(&self, setup: &Setup, t: Option<usize>, sheet: &mut Sheet) -> Result<(), Halt> {
        let ctx = setup.context()?;
        let t = t.expect("tilting runs per t");
        let r = syz_audit(ctx, t, setup.cap)?;
        if !r.verdict() {
            sheet.put("skipped", "X is not relatively spherical at this t");
            return Ok(());
        }
        let ta = tilting_audit(ctx, &r, setup.cap)?;
        let expected = ctx.lambda.dim() - ctx.lambda_con.dim();
        sheet.check("(a) I0 and D0 are perfect on both sides", ta.biperfect);
        sheet.check("(b) right multiplication maps are isomorphisms", ta.rho_iso);
        sheet.check("(c) left multiplication maps are isomorphisms", ta.lambda_iso);
        sheet.check("I0 (x)L D0 is concentrated in degree 0", ta.tensor_concentrated);
        sheet.check("dim I0 (x) D0 = dim lambda - dim lambda_con", ta.tensor_dim == expected);
        sheet.check("I0 (x) D0 -> [proj E] is an isomorphism", ta.composite_iso_to_proj_e);
        sheet.put(
            "tilting",
            json!({
                "i0": side_value(&ta.i0),
                "d0": side_value(&ta.d0),
                "tensor_dim": ta.tensor_dim,
                "expected_tensor_dim": expected,
                "composite_rank": ta.composite_rank,
                "proj_ideal_dim": ta.proj_ideal_dim,
                "failed": ta.failed,
            }),
        );
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_registry_covers_every_audit() {
        let r = Registry::standard();
        for k in AuditKind::CONCRETE {
            assert_eq!(r.get(k).map(|a| a.kind()), Some(k));
        }
        let jobs = r.jobs(&[AuditKind::Resolve, AuditKind::Spherical, AuditKind::Tilting], &[2, 3]);
        let shape: Vec<(AuditKind, Option<usize>)> = jobs.iter().map(|(a, t)| (a.kind(), *t)).collect();
        assert_eq!(
            shape,
            vec![
                (AuditKind::Resolve, None),
                (AuditKind::Spherical, Some(2)),
                (AuditKind::Spherical, Some(3)),
                (AuditKind::Tilting, Some(2)),
                (AuditKind::Tilting, Some(3)),
            ]
        );
    }

    #[test]
    fn cap_errors_are_told_apart_from_failures() {
        let e: Halt = HomologyError::Resolution(ResolutionError::CapExceeded { cap: 3 }).into();
        assert!(matches!(e, Halt::Cap(_)));
        let e: Halt = SphericalError::Precondition("x".into()).into();
        assert!(matches!(e, Halt::Error(_)));
    }
}
