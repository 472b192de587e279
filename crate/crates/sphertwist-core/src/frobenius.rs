//! The stable category of a self-injective algebra and the endomorphism
//! algebras `Λ = End(X)` and `Λ_con = Λ / [proj]` of an object `X`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Algebra, AlgebraError, IdempotentRole, SurjectionData, TaggedIdempotent};
use crate::exactlin::{vec_is_zero, Field, Matrix, RowSpace, Vector};
use crate::modules::{dual_regular, hom_basis, in_add, injective_envelope, projective_cover, Bimodule, Module, ModuleError, ModuleHom};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FrobeniusError {
    #[error("the ambient algebra is not self-injective")]
    NotSelfInjective,
    #[error("the projective part of X does not contain every indecomposable projective")]
    NotProgenerator,
    #[error("summand {0} is marked projective but is not")]
    NotProjective(String),
    #[error("summands {0} and {1} are stably isomorphic")]
    RepeatedSummand(String, String),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Whether `A_A` and `D(A)_A` generate the same additive category, i.e.
/// projectives and injectives coincide.
pub fn is_self_injective(a: &Arc<Algebra>) -> bool {
    a.self_injective_with(|| {
        let reg = Module::regular(Arc::clone(a));
        let dual = dual_regular(a);
        matches!((in_add(&reg, &dual), in_add(&dual, &reg)), (Ok(true), Ok(true)))
    })
}

fn require_self_injective(a: &Arc<Algebra>) -> Result<(), FrobeniusError> {
    if is_self_injective(a) {
        Ok(())
    } else {
        Err(FrobeniusError::NotSelfInjective)
    }
}

/// The Nakayama permutation on simple classes: `i -> j` when the socle of
/// the indecomposable projective of class `i` is the simple of class `j`.
pub fn nakayama_permutation(a: &Arc<Algebra>) -> Result<Vec<usize>, FrobeniusError> {
    require_self_injective(a)?;
    let prims = a.primitive_idempotents()?;
    let simples = Module::simples(a)?;
    let mut sigma = Vec::with_capacity(prims.class_count());
    for &k in &prims.reps {
        let p = Module::indecomposable_projective(Arc::clone(a), k)?;
        let (soc, _) = p.socle()?;
        let hits: Vec<usize> =
            (0..simples.len()).filter(|&j| !hom_basis(&simples[j], &soc).map(|h| h.is_empty()).unwrap_or(true)).collect();
        match hits.as_slice() {
            [j] if soc.dim() == simples[*j].dim() => sigma.push(*j),
            _ => return Err(FrobeniusError::NotSelfInjective),
        }
    }
    Ok(sigma)
}

/// Whether `A ≅ D(A)` as bimodules. Bimodule maps `A -> D(A)` are searched
/// for an invertible one among seeded random combinations of a basis.
pub fn is_symmetric(a: &Arc<Algebra>) -> bool {
    let reg = Bimodule::regular(a);
    let dual = Bimodule::dual_regular(a);
    let Ok(basis) = reg.hom_basis(&dual) else { return false };
    if a.dim() == 0 {
        return true;
    }
    find_invertible_combination(a.field(), &basis).is_some()
}

/// An invertible linear combination of square matrices, searched
/// deterministically.
pub fn find_invertible_combination(field: Field, basis: &[Matrix]) -> Option<Matrix> {
    let first = basis.first()?;
    if first.rows() != first.cols() {
        return None;
    }
    if let Some(m) = basis.iter().find(|m| m.is_invertible()) {
        return Some(m.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..24 {
        let mut m = Matrix::zeros(field, first.rows(), first.cols());
        for b in basis {
            m.add_scaled(&field.from_i64(rng.gen_range(-7..=7)), b);
        }
        if m.is_invertible() {
            return Some(m);
        }
    }
    None
}

/// Stable hom-space data: the subspace of maps factoring through a
/// projective and the dimension of the quotient.
#[derive(Debug, Clone)]
pub struct StableHom {
    pub hom_dim: usize,
    pub projective_part: Vec<Matrix>,
    pub dim: usize,
}

/// `Hom(m, n)` modulo maps factoring through projectives, the latter found
/// as composites `m -> I(m) -> n` through the injective envelope.
pub fn stable_hom(m: &Module, n: &Module) -> Result<StableHom, FrobeniusError> {
    require_self_injective(m.algebra())?;
    let field = m.field();
    let homs = hom_basis(m, n)?;
    if homs.is_empty() {
        return Ok(StableHom { hom_dim: 0, projective_part: Vec::new(), dim: 0 });
    }
    let (i, iota) = injective_envelope(m)?;
    let mut sub = RowSpace::new(field, m.dim() * n.dim());
    for g in hom_basis(&i, n)? {
        sub.insert(iota.matrix().mul(&g).to_vector());
        if sub.dim() == homs.len() {
            break;
        }
    }
    let part: Vec<Matrix> = sub.basis().iter().map(|v| Matrix::from_vector(field, m.dim(), n.dim(), v.clone())).collect();
    Ok(StableHom { hom_dim: homs.len(), dim: homs.len() - part.len(), projective_part: part })
}

/// `Ω m`, the kernel of a minimal projective cover.
pub fn syzygy(m: &Module) -> Result<Module, FrobeniusError> {
    require_self_injective(m.algebra())?;
    let (_, epi) = projective_cover(m)?;
    Ok(strip_projective_summands(&epi.kernel().0)?)
}

/// `Σ m = Ω⁻¹ m`, the cokernel of a minimal injective envelope.
pub fn cosyzygy(m: &Module) -> Result<Module, FrobeniusError> {
    require_self_injective(m.algebra())?;
    let (_, iota) = injective_envelope(m)?;
    Ok(strip_projective_summands(&iota.cokernel().0)?)
}

/// `Σ^k m` for any integer `k` (negative powers are syzygies), with
/// projective summands removed.
pub fn suspension_power(m: &Module, k: i64) -> Result<Module, FrobeniusError> {
    let mut cur = strip_projective_summands(m)?;
    for _ in 0..k.unsigned_abs() {
        cur = if k > 0 { cosyzygy(&cur)? } else { syzygy(&cur)? };
    }
    Ok(cur)
}

/// Removes projective summands. Over a self-injective algebra `eA` is a
/// summand of `M` exactly when some map `eA -> M` is nonzero on the simple
/// socle of `eA`; such a map is a split mono.
pub fn strip_projective_summands(m: &Module) -> Result<Module, ModuleError> {
    let a = m.algebra();
    if !is_self_injective(a) {
        return Ok(m.clone());
    }
    let prims = a.primitive_idempotents()?;
    let mut cur = m.clone();
    'again: loop {
        if cur.dim() == 0 {
            return Ok(cur);
        }
        for &k in &prims.reps {
            let p = Module::indecomposable_projective(Arc::clone(a), k)?;
            let soc = p.socle_rows()?;
            for g in hom_basis(&p, &cur)? {
                if soc.basis().iter().any(|s| !vec_is_zero(&g.left_apply(s))) {
                    let h = ModuleHom::from_parts(p.clone(), cur.clone(), g);
                    cur = h.cokernel().0;
                    continue 'again;
                }
            }
        }
        return Ok(cur);
    }
}

/// Whether `m ⊕ A` and `n ⊕ A` have the same additive closure, i.e. `m`
/// and `n` agree up to projective summands in add.
pub fn stably_add_equivalent(m: &Module, n: &Module) -> Result<bool, ModuleError> {
    let a = Module::regular(Arc::clone(m.algebra()));
    let ma = Module::direct_sum(&[m.clone(), a.clone()])?.sum;
    let na = Module::direct_sum(&[n.clone(), a])?.sum;
    Ok(in_add(&ma, &na)? && in_add(&na, &ma)?)
}

/// One summand of `X`, repeated `multiplicity` times.
#[derive(Debug, Clone)]
pub struct SummandSpec {
    pub label: String,
    pub module: Module,
    pub multiplicity: usize,
    pub projective: bool,
}

/// How a non-projective summand was certified indecomposable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndecomposabilityPath {
    /// The stable endomorphism algebra was checked to be local.
    StableEndLocal,
    /// Local check unavailable (characteristic too small); the scenario's
    /// declaration is trusted.
    Declared,
}

/// The data `X = P ⊕ ⊕ X_i^{a_i}`, `Λ = End(X)`, `Λ_con` and `π`.
#[derive(Debug, Clone)]
pub struct FrobeniusContext {
    pub ambient: Arc<Algebra>,
    pub summands: Vec<SummandSpec>,
    pub x: Module,
    /// `(summand index, copy, offset in X, dim)` for each copy in `X`.
    pub copies: Vec<(usize, usize, usize, usize)>,
    pub lambda: Arc<Algebra>,
    /// The basis of `Λ` as endomorphism matrices of `X`.
    pub lambda_basis: Vec<Matrix>,
    /// Echelon basis of `[proj E]` in `Λ`-coordinates.
    pub proj_ideal: Vec<Vector>,
    pub pi: SurjectionData,
    pub lambda_con: Arc<Algebra>,
    pub e0: Vector,
    /// `e_i` for each non-projective summand (projection onto its first copy).
    pub e: Vec<Vector>,
    /// Indices of the non-projective summands in `summands`.
    pub nonprojective: Vec<usize>,
    pub indecomposability: Vec<IndecomposabilityPath>,
    end_space: RowSpace,
}

impl FrobeniusContext {
    /// Number of non-projective summands `n`.
    pub fn n(&self) -> usize {
        self.nonprojective.len()
    }

    pub fn field(&self) -> Field {
        self.ambient.field()
    }

    /// `Λ`-coordinates of an endomorphism matrix of `X`.
    pub fn lambda_coords(&self, m: &Matrix) -> Vector {
        self.end_space.coords_unchecked(&m.to_vector())
    }

    /// Endomorphism matrix of `X` of an element of `Λ`.
    pub fn lambda_matrix(&self, v: &[crate::Scalar]) -> Matrix {
        let mut m = Matrix::zeros(self.field(), self.x.dim(), self.x.dim());
        for (c, b) in v.iter().zip(&self.lambda_basis) {
            if !c.is_zero() {
                m.add_scaled(c, b);
            }
        }
        m
    }

    /// The non-projective summand `X_i` (0-based).
    pub fn xi(&self, i: usize) -> &Module {
        &self.summands[self.nonprojective[i]].module
    }

    pub fn xi_label(&self, i: usize) -> &str {
        &self.summands[self.nonprojective[i]].label
    }

    /// The projective part `P`.
    pub fn p_part(&self) -> Result<Module, ModuleError> {
        let parts: Vec<Module> =
            self.summands.iter().filter(|s| s.projective).flat_map(|s| std::iter::repeat_n(s.module.clone(), s.multiplicity)).collect();
        Ok(Module::direct_sum(&parts)?.sum)
    }

    /// Index of the primitive idempotent of `Λ` equal to `e_i`.
    pub fn primitive_of_summand(&self, i: usize) -> Result<usize, AlgebraError> {
        let prims = self.lambda.primitive_idempotents()?;
        prims.elements.iter().position(|x| x == &self.e[i]).ok_or(AlgebraError::NotSplit)
    }

    /// Classes of primitive idempotents of `Λ` that come from `e_0`.
    pub fn projective_classes(&self) -> Result<Vec<usize>, AlgebraError> {
        let prims = self.lambda.primitive_idempotents()?;
        let mut out: Vec<usize> = (0..prims.elements.len()).filter(|&k| !self.is_con_primitive(prims, k)).map(|k| prims.class[k]).collect();
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    fn is_con_primitive(&self, prims: &crate::algebra::Primitives, k: usize) -> bool {
        prims.origin[k].is_some_and(|o| matches!(self.lambda.idempotents()[o].role, IdempotentRole::Summand { .. }))
    }

    /// The class in `Λ` of `e_i`.
    pub fn con_class(&self, i: usize) -> Result<usize, AlgebraError> {
        let k = self.primitive_of_summand(i)?;
        Ok(self.lambda.primitive_idempotents()?.class[k])
    }

    /// Pulls a `Λ_con`-module back to a `Λ`-module along `π`.
    pub fn restrict(&self, m: &Module) -> Module {
        let action = (0..self.lambda.dim()).map(|b| m.act(&self.pi.apply(&self.lambda.basis(b)))).collect();
        Module::from_parts(Arc::clone(&self.lambda), m.dim(), action, None)
    }

    /// `Λ_con` as a right `Λ`-module.
    pub fn lambda_con_module(&self) -> Module {
        self.restrict(&Module::regular(Arc::clone(&self.lambda_con)))
    }

    /// `e_i Λ_con` as a right `Λ`-module.
    pub fn e_lambda_con(&self, i: usize) -> Result<Module, ModuleError> {
        let con = self.lambda_con_module();
        let ebar = self.pi.apply(&self.e[i]);
        let rows = self.lambda_con.right_ideal(&ebar);
        Ok(con.submodule_of_space(&rows)?.0)
    }

    /// The simple `S_i = top(e_i Λ_con)` as a right `Λ`-module.
    pub fn simple(&self, i: usize) -> Result<Module, ModuleError> {
        Ok(self.e_lambda_con(i)?.top()?.0)
    }

    /// All `Λ_con`-simples `S_1..S_n` as `Λ`-modules.
    pub fn con_simples(&self) -> Result<Vec<Module>, ModuleError> {
        (0..self.n()).map(|i| self.simple(i)).collect()
    }

    /// `e_i Λ` as a free `Λ`-module.
    pub fn e_lambda(&self, i: usize) -> Result<Module, ModuleError> {
        let k = self.primitive_of_summand(i)?;
        Module::free(Arc::clone(&self.lambda), vec![k])
    }

    /// The object `E(X, M) = Hom(X, M)` as a right `Λ`-module via
    /// precomposition.
    pub fn hom_from_x(&self, m: &Module) -> Result<Module, ModuleError> {
        let field = self.field();
        let basis = hom_basis(&self.x, m)?;
        let space = RowSpace::from_rows(field, self.x.dim() * m.dim(), basis.iter().map(Matrix::to_vector));
        let action = (0..self.lambda.dim())
            .map(|b| {
                let l = &self.lambda_basis[b];
                let rows = space
                    .basis()
                    .iter()
                    .map(|f| {
                        let fm = Matrix::from_vector(field, self.x.dim(), m.dim(), f.clone());
                        space.coords_unchecked(&l.mul(&fm).to_vector())
                    })
                    .collect();
                Matrix::from_rows(field, space.dim(), rows)
            })
            .collect();
        Ok(Module::from_parts(Arc::clone(&self.lambda), space.dim(), action, None))
    }
}

/// Checks the hypotheses on `X` and assembles `Λ`, `[proj E]`, `π` and
/// `Λ_con`.
/// `End_A(M)` with `b_i · b_j = b_i ∘ b_j`, its basis as matrices of `M`,
/// and the span of that basis for taking coordinates.
pub struct EndAlgebra {
    pub algebra: Algebra,
    pub basis: Vec<Matrix>,
    pub space: RowSpace,
}

pub fn endomorphism_algebra(m: &Module) -> Result<EndAlgebra, FrobeniusError> {
    let field = m.field();
    let d = m.dim();
    let space = RowSpace::from_rows(field, d * d, hom_basis(m, m)?.iter().map(Matrix::to_vector));
    let basis: Vec<Matrix> = space.basis().iter().map(|v| Matrix::from_vector(field, d, d, v.clone())).collect();
    let n = basis.len();
    // First b_j, then b_i.
    let mult: Vec<Vec<Vector>> =
        (0..n).map(|i| (0..n).map(|j| space.coords_unchecked(&basis[j].mul(&basis[i]).to_vector())).collect()).collect();
    let unit = space.coords_unchecked(&Matrix::identity(field, d).to_vector());
    let labels = (0..n).map(|i| format!("f{i}")).collect();
    let algebra = Algebra::with_labels(field, labels, mult, unit)?;
    Ok(EndAlgebra { algebra, basis, space })
}

pub fn build_context(ambient: Arc<Algebra>, summands: Vec<SummandSpec>) -> Result<FrobeniusContext, FrobeniusError> {
    require_self_injective(&ambient)?;
    let field = ambient.field();
    for s in &summands {
        if !s.module.algebra().same_as(&ambient) {
            return Err(ModuleError::AlgebraMismatch.into());
        }
        if s.projective && !s.module.is_projective()? {
            return Err(FrobeniusError::NotProjective(s.label.clone()));
        }
    }
    let p_parts: Vec<Module> = summands.iter().filter(|s| s.projective).map(|s| s.module.clone()).collect();
    let regular = Module::regular(Arc::clone(&ambient));
    if p_parts.is_empty() || !in_add(&regular, &Module::direct_sum(&p_parts)?.sum)? {
        return Err(FrobeniusError::NotProgenerator);
    }
    let nonprojective: Vec<usize> = (0..summands.len()).filter(|&i| !summands[i].projective).collect();
    for (a, &i) in nonprojective.iter().enumerate() {
        for &j in &nonprojective[a + 1..] {
            if stably_add_equivalent(&summands[i].module, &summands[j].module)? {
                return Err(FrobeniusError::RepeatedSummand(summands[i].label.clone(), summands[j].label.clone()));
            }
        }
    }

    let mut parts = Vec::new();
    let mut copies = Vec::new();
    let mut off = 0;
    for (si, s) in summands.iter().enumerate() {
        for c in 0..s.multiplicity {
            parts.push(s.module.clone());
            copies.push((si, c, off, s.module.dim()));
            off += s.module.dim();
        }
    }
    let x = Module::direct_sum(&parts)?.sum;
    let dx = x.dim();

    let EndAlgebra { algebra: lambda, basis, space: end_space } = endomorphism_algebra(&x)?;
    let dl = basis.len();

    let projection = |start: usize, len: usize| -> Vector {
        let mut m = Matrix::zeros(field, dx, dx);
        for t in start..start + len {
            m.set(t, t, field.one());
        }
        end_space.coords_unchecked(&m.to_vector())
    };
    let mut tagged = Vec::new();
    let mut e0 = lambda.zero_element();
    for &(si, _, o, d) in &copies {
        if summands[si].projective {
            e0 = crate::exactlin::vec_add(&e0, &projection(o, d));
        }
    }
    tagged.push(TaggedIdempotent { role: IdempotentRole::ProjectivePart, element: e0.clone() });
    let mut e = vec![Vec::new(); nonprojective.len()];
    for &(si, c, o, d) in &copies {
        if let Some(i) = nonprojective.iter().position(|&j| j == si) {
            let el = projection(o, d);
            if c == 0 {
                e[i] = el.clone();
            }
            tagged.push(TaggedIdempotent { role: IdempotentRole::Summand { index: i, copy: c }, element: el });
        }
    }
    let lambda = Arc::new(lambda.with_idempotents(tagged)?);

    let (_, iota) = injective_envelope(&x)?;
    let mut ideal = RowSpace::new(field, dl);
    for g in hom_basis(iota.target(), &x)? {
        ideal.insert(end_space.coords_unchecked(&iota.matrix().mul(&g).to_vector()));
    }
    let pi = lambda.quotient_surjection(ideal.basis())?;
    let lambda_con = Arc::clone(&pi.target);

    let mut ctx = FrobeniusContext {
        ambient,
        summands,
        x,
        copies,
        lambda,
        lambda_basis: basis,
        proj_ideal: ideal.basis().to_vec(),
        pi,
        lambda_con,
        e0,
        e,
        nonprojective,
        indecomposability: Vec::new(),
        end_space,
    };
    ctx.indecomposability = (0..ctx.n()).map(|i| indecomposability_path(&ctx, i)).collect();
    Ok(ctx)
}

/// `X_i` is indecomposable and non-projective iff its stable endomorphism
/// ring `e_i Λ_con e_i` is local, i.e. has one-dimensional top.
fn indecomposability_path(ctx: &FrobeniusContext, i: usize) -> IndecomposabilityPath {
    let con = &ctx.lambda_con;
    let ebar = ctx.pi.apply(&ctx.e[i]);
    let corner = con.corner(&ebar, &ebar);
    let Ok(rad) = con.radical() else { return IndecomposabilityPath::Declared };
    let rad = RowSpace::from_rows(con.field(), con.dim(), rad);
    let local = corner.dim() > 0 && corner.dim() == corner.intersect(&rad).dim() + 1;
    if local {
        IndecomposabilityPath::StableEndLocal
    } else {
        IndecomposabilityPath::Declared
    }
}

/// Stable `Ext^1(m, n)` vanishes iff `Hom(Ω m, n)` is zero stably.
pub fn ext1_vanishes(m: &Module, n: &Module) -> Result<bool, FrobeniusError> {
    Ok(stable_hom(&syzygy(m)?, n)?.dim == 0)
}
