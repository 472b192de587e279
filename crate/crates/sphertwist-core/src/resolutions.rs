//! Projective resolutions over `Λ`: minimal ones, and the partially
//! minimal ones built from covers whose kernels sit inside `radd₀`.

use std::sync::Arc;

use crate::algebra::{AlgebraError, IdempotentRole};
use crate::exactlin::RowSpace;
use crate::frobenius::FrobeniusContext;
use crate::modules::{free_hom_from_images, hom_basis, in_add, projective_cover, Module, ModuleError, ModuleHom};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResolutionError {
    #[error("resolution did not terminate within {cap} steps")]
    CapExceeded { cap: usize },
    #[error("map is not surjective")]
    NotSurjective,
    #[error("module is not over the endomorphism algebra of the context")]
    WrongAlgebra,
    #[error("resolution shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// `… → P_2 → P_1 → P_0 → M → 0`. `maps[i]` is `P_{i+1} → P_i`.
#[derive(Debug, Clone)]
pub struct Resolution {
    pub target: Module,
    pub terms: Vec<Module>,
    pub maps: Vec<ModuleHom>,
    pub augmentation: ModuleHom,
    pub minimal: bool,
    pub partially_minimal: bool,
    /// False when construction stopped at the cap with a nonzero kernel.
    pub complete: bool,
    pub cap: usize,
}

impl Resolution {
    /// The index of the last term, if the resolution is complete.
    pub fn length(&self) -> Option<usize> {
        self.complete.then(|| self.terms.len().saturating_sub(1))
    }

    pub fn term_dims(&self) -> Vec<usize> {
        self.terms.iter().map(Module::dim).collect()
    }

    pub fn require_complete(&self) -> Result<&Resolution, ResolutionError> {
        if self.complete {
            Ok(self)
        } else {
            Err(ResolutionError::CapExceeded { cap: self.cap })
        }
    }

    /// `f_i : P_i → P_{i-1}` for `i ≥ 1`, and the augmentation for `i = 0`.
    pub fn differential(&self, i: usize) -> &ModuleHom {
        if i == 0 {
            &self.augmentation
        } else {
            &self.maps[i - 1]
        }
    }

    pub fn tail(&self) -> Option<&Module> {
        self.terms.last()
    }

    /// Alternating sum of the term dimensions.
    pub fn euler_characteristic(&self) -> i64 {
        self.terms.iter().enumerate().map(|(i, p)| if i % 2 == 0 { p.dim() as i64 } else { -(p.dim() as i64) }).sum()
    }

    /// Exactness at every computed degree, checked by composites vanishing
    /// and by rank bookkeeping.
    pub fn is_exact(&self) -> bool {
        if !self.augmentation.is_surjective() {
            return false;
        }
        for i in 0..self.terms.len() {
            let into = if i < self.maps.len() { self.maps[i].rank() } else { 0 };
            let out = self.differential(i).rank();
            if i < self.maps.len() && !self.maps[i].then(self.differential(i)).is_zero() {
                return false;
            }
            let last_open = i + 1 == self.terms.len() && !self.complete;
            if !last_open && into + out != self.terms[i].dim() {
                return false;
            }
        }
        true
    }

    pub fn terms_projective(&self) -> Result<bool, ModuleError> {
        for p in &self.terms {
            if !p.is_projective()? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `Hom(f_i, S) = 0` for every `i > 0` and every listed module `S`.
    pub fn hom_kills_differentials(&self, simples: &[Module]) -> Result<bool, ModuleError> {
        for f in &self.maps {
            for s in simples {
                for g in hom_basis(f.target(), s)? {
                    if !f.matrix().mul(&g).is_zero() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// `radd₀(M) = M·rad(Λ) + M e₀ Λ`, the preimage of the radical of
/// `M / M e₀ Λ`.
pub fn radd0(ctx: &FrobeniusContext, m: &Module) -> Result<RowSpace, ResolutionError> {
    if !m.algebra().same_as(&ctx.lambda) {
        return Err(ResolutionError::WrongAlgebra);
    }
    let mut s = m.radical_rows()?;
    let l = &ctx.lambda;
    for v in m.idempotent_part(&ctx.e0).basis() {
        for b in 0..l.dim() {
            s.insert(m.apply(v, &l.basis(b)));
        }
    }
    Ok(s)
}

pub fn is_partially_essential(ctx: &FrobeniusContext, epi: &ModuleHom) -> Result<bool, ResolutionError> {
    if !epi.is_surjective() {
        return Err(ResolutionError::NotSurjective);
    }
    let r = radd0(ctx, epi.source())?;
    Ok(epi.kernel_rows().basis().iter().all(|v| r.contains(v)))
}

/// Primitive idempotents of `Λ` refining `e₀`, in order.
pub fn e0_primitives(ctx: &FrobeniusContext) -> Result<Vec<usize>, AlgebraError> {
    let prims = ctx.lambda.primitive_idempotents()?;
    let tags = ctx.lambda.idempotents();
    Ok((0..prims.elements.len()).filter(|&k| prims.origin[k].is_some_and(|o| tags[o].role == IdempotentRole::ProjectivePart)).collect())
}

/// `e₀Λ` as a free module.
pub fn e0_lambda(ctx: &FrobeniusContext) -> Result<Module, ResolutionError> {
    Ok(Module::free(Arc::clone(&ctx.lambda), e0_primitives(ctx)?)?)
}

/// A projective `Q` and an epimorphism `Q → M` with kernel inside
/// `radd₀(Q)`. The `Λ_con`-part of the top is covered by the `e_iΛ`; what
/// remains is generated by elements of the `M e_k` for primitives `e_k`
/// refining `e₀`, each covered by `e_kΛ`. Projective modules are covered
/// by themselves.
pub fn partial_cover(ctx: &FrobeniusContext, m: &Module) -> Result<(Module, ModuleHom), ResolutionError> {
    if !m.algebra().same_as(&ctx.lambda) {
        return Err(ResolutionError::WrongAlgebra);
    }
    if m.is_projective()? {
        return Ok(projective_cover(m)?);
    }
    let l = &ctx.lambda;
    let prims = l.primitive_idempotents()?;
    let mut summands = Vec::new();
    let mut images = Vec::new();

    let mut top = radd0(ctx, m)?;
    let mut gen = m.radical_rows()?;
    for i in 0..ctx.n() {
        let k = ctx.primitive_of_summand(i)?;
        for v in m.idempotent_part(&prims.elements[k]).basis() {
            if top.insert(v.clone()) {
                gen.insert(v.clone());
                summands.push(k);
                images.push(v.clone());
            }
        }
    }

    for &k in &e0_primitives(ctx)? {
        for v in m.idempotent_part(&prims.elements[k]).basis() {
            if gen.dim() == m.dim() {
                break;
            }
            if gen.contains(v) {
                continue;
            }
            for b in 0..l.dim() {
                gen.insert(m.apply(v, &l.basis(b)));
            }
            summands.push(k);
            images.push(v.clone());
        }
    }

    let q = Module::free(Arc::clone(l), summands)?;
    let epi = free_hom_from_images(&q, m, &images)?;
    if !epi.is_surjective() {
        return Err(ResolutionError::NotSurjective);
    }
    Ok((q, epi))
}

/// Default cap on resolution length: `2·dim Λ + 2`.
pub fn default_cap(m: &Module) -> usize {
    2 * m.algebra().dim() + 2
}

fn resolve_with(
    m: &Module,
    cap: usize,
    mut cover: impl FnMut(&Module) -> Result<(Module, ModuleHom), ResolutionError>,
) -> Result<(Vec<Module>, Vec<ModuleHom>, ModuleHom, bool), ResolutionError> {
    let (p0, aug) = cover(m)?;
    let mut terms = vec![p0];
    let mut maps: Vec<ModuleHom> = Vec::new();
    let mut last = aug.clone();
    loop {
        let (k, inc) = last.kernel();
        if k.dim() == 0 {
            return Ok((terms, maps, aug, true));
        }
        if terms.len() > cap {
            return Ok((terms, maps, aug, false));
        }
        let (p, epi) = if k.is_projective()? { projective_cover(&k)? } else { cover(&k)? };
        let f = epi.then(&inc);
        terms.push(p);
        maps.push(f.clone());
        last = f;
    }
}

/// The partially minimal resolution, by iterating [`partial_cover`] on
/// kernels and stopping at the first projective kernel. The result is
/// audited against every `Λ_con`-simple before the flag is set.
pub fn partially_minimal_resolution(ctx: &FrobeniusContext, m: &Module, cap: usize) -> Result<Resolution, ResolutionError> {
    let (terms, maps, augmentation, complete) = resolve_with(m, cap, |k| partial_cover(ctx, k))?;
    let mut res = Resolution { target: m.clone(), terms, maps, augmentation, minimal: false, partially_minimal: false, complete, cap };
    res.partially_minimal = res.hom_kills_differentials(&ctx.con_simples()?)?;
    Ok(res)
}

/// The minimal projective resolution over the algebra of `m`.
pub fn minimal_resolution(m: &Module, cap: usize) -> Result<Resolution, ResolutionError> {
    let (terms, maps, augmentation, complete) = resolve_with(m, cap, |k| Ok(projective_cover(k)?))?;
    Ok(Resolution { target: m.clone(), terms, maps, augmentation, minimal: true, partially_minimal: false, complete, cap })
}

/// Projective dimension, or `None` when the minimal resolution is still
/// running after `cap` steps.
pub fn projective_dimension(m: &Module, cap: usize) -> Result<Option<usize>, ResolutionError> {
    if m.dim() == 0 {
        return Ok(Some(0));
    }
    Ok(minimal_resolution(m, cap)?.length())
}

pub fn is_perfect(m: &Module, cap: usize) -> Result<bool, ResolutionError> {
    Ok(projective_dimension(m, cap)?.is_some())
}

/// The shape of a resolution of `e_iΛ_con`: its middle terms lie in
/// `add e₀Λ` and its tail is `e_jΛ` plus a projective part from `add e₀Λ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shape {
    pub index: usize,
    pub tau: usize,
    /// Primitive idempotents of the `add e₀Λ` part of the tail.
    pub tail_projective: Vec<usize>,
}

pub fn extract_shape(ctx: &FrobeniusContext, res: &Resolution, index: usize, t: usize) -> Result<Shape, ResolutionError> {
    let len = res.length().ok_or(ResolutionError::CapExceeded { cap: res.cap })?;
    if len != t {
        return Err(ResolutionError::ShapeMismatch(format!("length {len}, expected {t}")));
    }
    let e0l = e0_lambda(ctx)?;
    for (i, p) in res.terms.iter().enumerate().take(t).skip(1) {
        if !in_add(p, &e0l)? {
            return Err(ResolutionError::ShapeMismatch(format!("term {i} is not in add e0Λ")));
        }
    }
    let tail = res.tail().expect("complete resolutions have terms");
    let fd = tail.free_data().ok_or_else(|| ResolutionError::ShapeMismatch("tail is not presented as free".into()))?;
    let prims = ctx.lambda.primitive_idempotents()?;
    let con_classes: Vec<usize> = (0..ctx.n()).map(|j| ctx.con_class(j)).collect::<Result<_, _>>()?;
    let mut hits = Vec::new();
    let mut projective = Vec::new();
    for &k in &fd.summands {
        match con_classes.iter().position(|&c| c == prims.class[k]) {
            Some(j) => hits.push(j),
            None => projective.push(k),
        }
    }
    match hits.as_slice() {
        [j] => Ok(Shape { index, tau: *j, tail_projective: projective }),
        _ => Err(ResolutionError::ShapeMismatch(format!("tail has {} non-projective summands", hits.len()))),
    }
}

/// Some `z ∈ Q e` with `z·f = y`, where `f : Q → N` and `y ∈ N`.
fn preimage_in_part(f: &ModuleHom, e: &[crate::Scalar], y: &[crate::Scalar]) -> Option<crate::exactlin::Vector> {
    let part = f.source().idempotent_part(e);
    if part.dim() == 0 {
        return crate::exactlin::vec_is_zero(y).then(|| f.source().field().vec_zero(f.source().dim()));
    }
    let rows = part.basis_matrix();
    let c = rows.mul(f.matrix()).solve_left(y)?;
    Some(rows.left_apply(&c))
}

/// Chain maps `φ_i : P_i → P'_i` over `φ : M → M'` for `i ≤ upto`, by the
/// comparison theorem. `src` must have free terms.
pub fn lift_map(src: &Resolution, dst: &Resolution, phi: &ModuleHom, upto: usize) -> Result<Vec<ModuleHom>, ResolutionError> {
    let prims = src.target.algebra().primitive_idempotents()?;
    let mut out: Vec<ModuleHom> = Vec::new();
    for i in 0..=upto.min(src.terms.len() - 1) {
        let p = &src.terms[i];
        let fd = p.free_data().ok_or_else(|| ResolutionError::ShapeMismatch("terms must be free".into()))?;
        let down = if i == 0 { src.augmentation.then(phi) } else { src.maps[i - 1].then(&out[i - 1]) };
        let Some(q) = dst.terms.get(i) else {
            if !down.is_zero() {
                return Err(ResolutionError::ShapeMismatch("lift leaves the target resolution".into()));
            }
            break;
        };
        let f = dst.differential(i);
        let mut images = Vec::with_capacity(fd.summands.len());
        for (s, &k) in fd.summands.iter().enumerate() {
            let y = down.apply(&crate::modules::free_generator(p, s)?);
            let z = preimage_in_part(f, &prims.elements[k], &y)
                .ok_or_else(|| ResolutionError::ShapeMismatch(format!("no lift in degree {i}")))?;
            images.push(z);
        }
        out.push(free_hom_from_images(p, q, &images)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Field;
    use crate::fixtures::*;
    use crate::frobenius::syzygy;
    use proptest::prelude::*;

    fn q() -> Field {
        Field::Rational
    }

    /// Intersection of the kernels of all maps to `Λ_con`-simples: the
    /// intersection of the maximal submodules containing `M e₀ Λ`.
    fn radd0_oracle(ctx: &FrobeniusContext, m: &Module) -> RowSpace {
        let mut space = RowSpace::full(q(), m.dim());
        for s in ctx.con_simples().unwrap() {
            for g in hom_basis(m, &s).unwrap() {
                space = space.intersect(&RowSpace::from_matrix(&g.left_kernel()));
            }
        }
        space
    }

    fn same_space(a: &RowSpace, b: &RowSpace) -> bool {
        a.dim() == b.dim() && a.contains_space(b)
    }

    #[test]
    fn radd0_examples() {
        let ctx = ctx_dual_numbers(q()).unwrap();
        let e0l = e0_lambda(&ctx).unwrap();
        assert_eq!(radd0(&ctx, &e0l).unwrap().dim(), e0l.dim());
        let s = ctx.simple(0).unwrap();
        assert_eq!(radd0(&ctx, &s).unwrap().dim(), 0);
        let e1l = ctx.e_lambda(0).unwrap();
        let r = radd0(&ctx, &e1l).unwrap();
        assert!(same_space(&r, &radd0_oracle(&ctx, &e1l)));
        assert_eq!(r.dim(), 1);
    }

    #[test]
    fn radd0_matches_maximal_submodule_oracle() {
        for ctx in [ctx_dual_numbers(q()).unwrap(), ctx_nakayama3_all(q()).unwrap(), ctx_nakayama3_one(q()).unwrap()] {
            let mut mods = vec![ctx.lambda_con_module(), e0_lambda(&ctx).unwrap(), Module::regular(Arc::clone(&ctx.lambda))];
            mods.extend(Module::simples(&ctx.lambda).unwrap());
            for i in 0..ctx.n() {
                mods.push(ctx.e_lambda(i).unwrap());
            }
            for m in &mods {
                assert!(same_space(&radd0(&ctx, m).unwrap(), &radd0_oracle(&ctx, m)));
            }
        }
    }

    #[test]
    fn partially_essential_examples() {
        let ctx = ctx_dual_numbers(q()).unwrap();
        let e1l = ctx.e_lambda(0).unwrap();
        assert!(is_partially_essential(&ctx, &ModuleHom::identity(&e1l)).unwrap());
        for m in Module::simples(&ctx.lambda).unwrap() {
            let (_, epi) = projective_cover(&m).unwrap();
            assert!(is_partially_essential(&ctx, &epi).unwrap());
        }
        let (_, epi) = partial_cover(&ctx, &ctx.e_lambda_con(0).unwrap()).unwrap();
        assert!(is_partially_essential(&ctx, &epi).unwrap());
        assert!(epi.source().dim() == 2 && epi.target().dim() == 1);
        let zero = ModuleHom::zero(&e1l, &e1l);
        assert_eq!(is_partially_essential(&ctx, &zero), Err(ResolutionError::NotSurjective));
    }

    #[test]
    fn partial_cover_uses_e0_for_other_simples() {
        let ctx = ctx_nakayama3_one(q()).unwrap();
        let e0l = e0_lambda(&ctx).unwrap();
        let con = ctx.con_class(0).unwrap();
        let prims = ctx.lambda.primitive_idempotents().unwrap();
        for (c, s) in Module::simples(&ctx.lambda).unwrap().into_iter().enumerate() {
            let (p, epi) = partial_cover(&ctx, &s).unwrap();
            assert!(is_partially_essential(&ctx, &epi).unwrap());
            if c == con {
                assert_eq!(p.free_data().unwrap().summands, vec![ctx.primitive_of_summand(0).unwrap()]);
            } else {
                assert_eq!(p.dim(), projective_cover(&s).unwrap().0.dim());
                assert!(p.dim() < e0l.dim());
                assert!(p.free_data().unwrap().summands.iter().all(|&k| prims.class[k] != con));
            }
        }
        let p = ctx.e_lambda(0).unwrap();
        let (q0, epi) = partial_cover(&ctx, &p).unwrap();
        assert!(epi.is_iso());
        assert_eq!(q0.dim(), p.dim());
    }

    fn audit(ctx: &FrobeniusContext, res: &Resolution) {
        assert!(res.complete);
        assert!(res.is_exact());
        assert!(res.terms_projective().unwrap());
        assert!(res.partially_minimal);
        assert!(res.hom_kills_differentials(&ctx.con_simples().unwrap()).unwrap());
        assert_eq!(res.euler_characteristic(), res.target.dim() as i64);
    }

    fn stably_iso(ctx: &FrobeniusContext, a: &Module, b: &Module) -> bool {
        let e0l = e0_lambda(ctx).unwrap();
        let a0 = Module::direct_sum(&[a.clone(), e0l.clone()]).unwrap().sum;
        let b0 = Module::direct_sum(&[b.clone(), e0l]).unwrap().sum;
        in_add(&a0, &b0).unwrap() && in_add(&b0, &a0).unwrap()
    }

    #[test]
    fn resolution_of_con_over_dual_numbers() {
        let ctx = ctx_dual_numbers(q()).unwrap();
        let con = ctx.lambda_con_module();
        let res = partially_minimal_resolution(&ctx, &con, 10).unwrap();
        audit(&ctx, &res);
        assert_eq!(res.term_dims(), vec![2, 3, 2]);
        let omega_s = syzygy(ctx.xi(0)).unwrap();
        assert!(stably_iso(&ctx, res.tail().unwrap(), &ctx.hom_from_x(&omega_s).unwrap()));
        assert_eq!(projective_dimension(&con, 10).unwrap(), Some(2));
        assert!(is_perfect(&con, 10).unwrap());
    }

    #[test]
    fn resolution_of_con_over_nakayama3_one_simple() {
        let ctx = ctx_nakayama3_one(q()).unwrap();
        let con = ctx.lambda_con_module();
        let res = partially_minimal_resolution(&ctx, &con, 20).unwrap();
        audit(&ctx, &res);
        assert_eq!(res.length(), Some(4));
        assert!(stably_iso(&ctx, res.tail().unwrap(), &ctx.hom_from_x(ctx.xi(0)).unwrap()));
        assert_eq!(extract_shape(&ctx, &res, 0, 4).unwrap().tau, 0);
        assert!(matches!(extract_shape(&ctx, &res, 0, 2), Err(ResolutionError::ShapeMismatch(_))));
    }

    #[test]
    fn shapes_give_tau() {
        let ctx = ctx_dual_numbers(q()).unwrap();
        let res = partially_minimal_resolution(&ctx, &ctx.e_lambda_con(0).unwrap(), 10).unwrap();
        assert_eq!(extract_shape(&ctx, &res, 0, 2).unwrap().tau, 0);

        let ctx = ctx_nakayama3_all(q()).unwrap();
        for i in 0..3 {
            let res = partially_minimal_resolution(&ctx, &ctx.e_lambda_con(i).unwrap(), 20).unwrap();
            audit(&ctx, &res);
            assert_eq!(extract_shape(&ctx, &res, i, 2).unwrap().tau, (i + 1) % 3);
        }
    }

    #[test]
    fn infinite_projective_dimension_hits_cap() {
        let a = dual_numbers(q());
        let s = Module::simple(&a, 0).unwrap();
        assert_eq!(projective_dimension(&s, 6).unwrap(), None);
        let res = minimal_resolution(&s, 6).unwrap();
        assert!(!res.complete);
        assert_eq!(res.require_complete().unwrap_err(), ResolutionError::CapExceeded { cap: 6 });
        assert!(res.is_exact());
        assert_eq!(projective_dimension(&Module::regular(a), 6).unwrap(), Some(0));
    }

    #[test]
    fn minimal_resolutions_are_partially_minimal() {
        for ctx in [ctx_dual_numbers(q()).unwrap(), ctx_nakayama3_all(q()).unwrap(), ctx_nakayama3_one(q()).unwrap()] {
            let simples = ctx.con_simples().unwrap();
            let mut mods = vec![ctx.lambda_con_module()];
            mods.extend(Module::simples(&ctx.lambda).unwrap());
            for m in &mods {
                let res = minimal_resolution(m, 12).unwrap();
                assert!(res.is_exact());
                assert!(res.hom_kills_differentials(&simples).unwrap());
            }
        }
    }

    fn random_quotient(ctx: &FrobeniusContext, m: &Module, coeffs: &[i64]) -> ModuleHom {
        let r = radd0(ctx, m).unwrap();
        let mut v = q().vec_zero(m.dim());
        for (b, c) in r.basis().iter().zip(coeffs) {
            crate::exactlin::axpy(&mut v, &q().from_i64(*c), b);
        }
        let l = &ctx.lambda;
        let rows: Vec<_> = (0..l.dim()).map(|b| m.apply(&v, &l.basis(b))).collect();
        m.quotient(&rows).unwrap().1
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn partially_essential_epis_compose(
            c1 in proptest::collection::vec(-2i64..=2, 12),
            c2 in proptest::collection::vec(-2i64..=2, 12),
            which in 0usize..2,
        ) {
            let ctx = if which == 0 { ctx_dual_numbers(q()).unwrap() } else { ctx_nakayama3_one(q()).unwrap() };
            let m = Module::direct_sum(&[e0_lambda(&ctx).unwrap(), ctx.e_lambda(0).unwrap()]).unwrap().sum;
            let f = random_quotient(&ctx, &m, &c1);
            let g = random_quotient(&ctx, f.target(), &c2);
            prop_assert!(is_partially_essential(&ctx, &f).unwrap());
            prop_assert!(is_partially_essential(&ctx, &g).unwrap());
            prop_assert!(is_partially_essential(&ctx, &f.then(&g)).unwrap());
        }
    }
}
