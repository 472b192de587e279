//! Right modules as representations and their homomorphisms.
//!
//! A module over an algebra `A` is a vector space with one action matrix per
//! basis element of `A`; vectors are rows and act by `v -> v * action(b)`.
//! Hom-spaces are solved for blockwise: every module splits along the
//! primitive idempotents of `A` as `M = ⊕ M e_k`, a homomorphism maps
//! `M e_k` to `N e_k`, and only Peirce-homogeneous algebra generators need
//! to be intertwined.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::algebra::{Algebra, AlgebraError};
use crate::exactlin::{vec_is_zero, Field, LinError, Matrix, RowSpace, Scalar, Vector};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModuleError {
    #[error("modules over different algebras")]
    AlgebraMismatch,
    #[error("subspace is not closed under the action")]
    NotASubmodule,
    #[error("action matrices do not define a module: {0}")]
    NotAModule(String),
    #[error("matrix is not a module homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Lin(#[from] LinError),
}

/// Summand data of a module built as `⊕_s e_{k_s} A`, with `k_s` indexing
/// the primitive idempotents of the algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeData {
    pub summands: Vec<usize>,
    pub offsets: Vec<usize>,
}

/// Bases adapted to a decomposition `V = ⊕ V_k` into the images of
/// orthogonal projectors: `bases[k]` has the block basis as rows and
/// `coords[k]` maps a vector to its coordinates in block `k`.
#[derive(Debug, Clone)]
pub(crate) struct BlockBasis {
    pub bases: Vec<Matrix>,
    pub coords: Vec<Matrix>,
}

impl BlockBasis {
    fn trivial(field: Field, dim: usize) -> BlockBasis {
        BlockBasis { bases: vec![Matrix::identity(field, dim)], coords: vec![Matrix::identity(field, dim)] }
    }

    /// Blocks from a complete family of orthogonal projectors.
    pub(crate) fn from_projectors(field: Field, dim: usize, projectors: &[Matrix]) -> Option<BlockBasis> {
        let bases: Vec<Matrix> = projectors.iter().map(Matrix::row_space).collect();
        let total: usize = bases.iter().map(Matrix::rows).sum();
        if total != dim {
            return None;
        }
        let mut t = Matrix::zeros(field, 0, dim);
        for b in &bases {
            t = t.vstack(b);
        }
        let inv = t.inverse()?;
        let mut coords = Vec::new();
        let mut off = 0;
        for b in &bases {
            coords.push(inv.block(0, dim, off, off + b.rows()));
            off += b.rows();
        }
        Some(BlockBasis { bases, coords })
    }

    fn sizes(&self) -> Vec<usize> {
        self.bases.iter().map(Matrix::rows).collect()
    }
}

/// One generator to intertwine: its action on source and target, and the
/// block moves `s -> t` it performs.
pub(crate) struct GenAction {
    pub on_source: Matrix,
    pub on_target: Matrix,
    pub moves: Vec<(usize, usize)>,
}

/// All matrices `F` with `A_M(g) F = F A_N(g)` for every generator, given
/// that `F` preserves the block decompositions. Returned in canonical
/// (echelon on the flattened matrices) form.
pub(crate) fn solve_intertwiners(field: Field, dm: usize, dn: usize, bm: &BlockBasis, bn: &BlockBasis, gens: &[GenAction]) -> Vec<Matrix> {
    let ms = bm.sizes();
    let ns = bn.sizes();
    let mut offsets = Vec::with_capacity(ms.len());
    let mut unknowns = 0;
    for k in 0..ms.len() {
        offsets.push(unknowns);
        unknowns += ms[k] * ns[k];
    }
    let mut eqs = RowSpace::new(field, unknowns);
    for g in gens {
        for &(s, t) in &g.moves {
            if ms[s] == 0 && ns[t] == 0 {
                continue;
            }
            let gm = bm.bases[s].mul(&g.on_source).mul(&bm.coords[t]);
            let gn = bn.bases[s].mul(&g.on_target).mul(&bn.coords[t]);
            if gm.is_zero() && gn.is_zero() {
                continue;
            }
            // (gm F_t - F_s gn)[a, b] = 0 for a < ms[s], b < ns[t].
            for a in 0..ms[s] {
                for b in 0..ns[t] {
                    let mut row = field.vec_zero(unknowns);
                    for c in 0..ms[t] {
                        let x = gm.get(a, c);
                        if !x.is_zero() {
                            let idx = offsets[t] + c * ns[t] + b;
                            row[idx] = &row[idx] + x;
                        }
                    }
                    for c in 0..ns[s] {
                        let x = gn.get(c, b);
                        if !x.is_zero() {
                            let idx = offsets[s] + a * ns[s] + c;
                            row[idx] = &row[idx] - x;
                        }
                    }
                    eqs.insert(row);
                }
            }
        }
    }
    let free = eqs.complement_columns();
    let mut out = RowSpace::new(field, dm * dn);
    for &f in &free {
        // Null-space vector with a 1 at the free column f.
        let mut x = field.vec_zero(unknowns);
        x[f] = field.one();
        for (row, &pc) in eqs.basis().iter().zip(eqs.pivots()) {
            x[pc] = -&row[f];
        }
        let mut mat = Matrix::zeros(field, dm, dn);
        for k in 0..ms.len() {
            if ms[k] == 0 || ns[k] == 0 {
                continue;
            }
            let block = Matrix::from_vector(field, ms[k], ns[k], x[offsets[k]..offsets[k] + ms[k] * ns[k]].to_vec());
            if block.is_zero() {
                continue;
            }
            mat = mat.add(&bm.coords[k].mul(&block).mul(&bn.bases[k]));
        }
        out.insert(mat.to_vector());
    }
    out.basis().iter().map(|v| Matrix::from_vector(field, dm, dn, v.clone())).collect()
}

struct ModuleData {
    algebra: Arc<Algebra>,
    dim: usize,
    action: Vec<Matrix>,
    free: Option<FreeData>,
    blocks: OnceLock<Option<BlockBasis>>,
}

/// A finite-dimensional right module. Cloning is cheap.
#[derive(Clone)]
pub struct Module(Arc<ModuleData>);

impl fmt::Debug for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Module").field("dim", &self.0.dim).field("free", &self.0.free).finish()
    }
}

impl PartialEq for Module {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.algebra.same_as(&other.0.algebra) && self.0.action == other.0.action)
    }
}

impl Module {
    /// A module from action matrices, one per basis element of `algebra`,
    /// checked against the structure constants.
    pub fn new(algebra: Arc<Algebra>, dim: usize, action: Vec<Matrix>) -> Result<Module, ModuleError> {
        if action.len() != algebra.dim() {
            return Err(ModuleError::Shape(format!("{} action matrices for an algebra of dimension {}", action.len(), algebra.dim())));
        }
        for m in &action {
            if m.rows() != dim || m.cols() != dim {
                return Err(ModuleError::Shape(format!("action matrix is not {dim}x{dim}")));
            }
            if m.field() != algebra.field() {
                return Err(ModuleError::Lin(LinError::FieldMismatch(algebra.field(), m.field())));
            }
        }
        let m = Module::from_parts(algebra, dim, action, None);
        if !m.act(m.algebra().unit()).is_identity() {
            return Err(ModuleError::NotAModule("the unit does not act as the identity".into()));
        }
        let a = m.algebra();
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let lhs = m.action(i).mul(m.action(j));
                if lhs != m.act(&a.product(i, j)) {
                    return Err(ModuleError::NotAModule(format!(
                        "action({}) action({}) != action({} {})",
                        a.labels()[i],
                        a.labels()[j],
                        a.labels()[i],
                        a.labels()[j]
                    )));
                }
            }
        }
        Ok(m)
    }

    pub(crate) fn from_parts(algebra: Arc<Algebra>, dim: usize, action: Vec<Matrix>, free: Option<FreeData>) -> Module {
        Module(Arc::new(ModuleData { algebra, dim, action, free, blocks: OnceLock::new() }))
    }

    pub fn zero(algebra: Arc<Algebra>) -> Module {
        let f = algebra.field();
        let action = vec![Matrix::zeros(f, 0, 0); algebra.dim()];
        Module::from_parts(algebra, 0, action, Some(FreeData { summands: vec![], offsets: vec![] }))
    }

    /// The regular right module `A_A`.
    pub fn regular(algebra: Arc<Algebra>) -> Module {
        let action = algebra.right_regular().to_vec();
        let dim = algebra.dim();
        Module::from_parts(algebra, dim, action, None)
    }

    /// `⊕_s e_{k_s} A` for primitive idempotent indices `k_s`.
    pub fn free(algebra: Arc<Algebra>, summands: Vec<usize>) -> Result<Module, ModuleError> {
        let field = algebra.field();
        let bases = algebra.projective_bases()?;
        let mut offsets = Vec::with_capacity(summands.len());
        let mut dim = 0;
        for &k in &summands {
            offsets.push(dim);
            dim += bases[k].dim();
        }
        let mut action = Vec::with_capacity(algebra.dim());
        for j in 0..algebra.dim() {
            let b = algebra.basis(j);
            let mut m = Matrix::zeros(field, dim, dim);
            for (s, &k) in summands.iter().enumerate() {
                for (i, y) in bases[k].basis().iter().enumerate() {
                    let c = bases[k].coords_unchecked(&algebra.mul(y, &b));
                    for (l, x) in c.into_iter().enumerate() {
                        if !x.is_zero() {
                            m.set(offsets[s] + i, offsets[s] + l, x);
                        }
                    }
                }
            }
            action.push(m);
        }
        Ok(Module::from_parts(algebra, dim, action, Some(FreeData { summands, offsets })))
    }

    /// The indecomposable projective `e_k A`.
    pub fn indecomposable_projective(algebra: Arc<Algebra>, k: usize) -> Result<Module, ModuleError> {
        Module::free(algebra, vec![k])
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.0.algebra
    }

    pub fn field(&self) -> Field {
        self.0.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn is_zero(&self) -> bool {
        self.0.dim == 0
    }

    pub fn action(&self, i: usize) -> &Matrix {
        &self.0.action[i]
    }

    pub fn actions(&self) -> &[Matrix] {
        &self.0.action
    }

    pub fn free_data(&self) -> Option<&FreeData> {
        self.0.free.as_ref()
    }

    /// The action matrix of an arbitrary algebra element.
    pub fn act(&self, x: &[Scalar]) -> Matrix {
        let mut m = Matrix::zeros(self.field(), self.dim(), self.dim());
        for (i, c) in x.iter().enumerate() {
            if !c.is_zero() {
                m.add_scaled(c, &self.0.action[i]);
            }
        }
        m
    }

    /// `v * x`.
    pub fn apply(&self, v: &[Scalar], x: &[Scalar]) -> Vector {
        let mut out = self.field().vec_zero(self.dim());
        for (i, c) in x.iter().enumerate() {
            if !c.is_zero() {
                crate::exactlin::axpy(&mut out, c, &self.0.action[i].left_apply(v));
            }
        }
        out
    }

    pub fn same_algebra(&self, other: &Module) -> bool {
        self.0.algebra.same_as(&other.0.algebra)
    }

    fn check_same(&self, other: &Module) -> Result<(), ModuleError> {
        if self.same_algebra(other) {
            Ok(())
        } else {
            Err(ModuleError::AlgebraMismatch)
        }
    }

    pub(crate) fn blocks(&self) -> Option<&BlockBasis> {
        self.0
            .blocks
            .get_or_init(|| {
                let prims = self.algebra().primitive_idempotents().ok()?;
                let projectors: Vec<Matrix> = prims.elements.iter().map(|e| self.act(e)).collect();
                BlockBasis::from_projectors(self.field(), self.dim(), &projectors)
            })
            .as_ref()
    }

    /// Basis of `M e` as rows.
    pub fn idempotent_part(&self, e: &[Scalar]) -> RowSpace {
        RowSpace::from_matrix(&self.act(e))
    }

    /// Basis (as rows) of `M * rad(A)`.
    pub fn radical_rows(&self) -> Result<RowSpace, ModuleError> {
        let rad = self.algebra().radical()?;
        let mut s = RowSpace::new(self.field(), self.dim());
        for r in &rad {
            s.insert_all(self.act(r).row_vectors());
        }
        Ok(s)
    }

    /// Basis (as rows) of the socle `{v : v rad(A) = 0}`.
    pub fn socle_rows(&self) -> Result<RowSpace, ModuleError> {
        let rad = self.algebra().radical()?;
        let mut big = Matrix::zeros(self.field(), self.dim(), 0);
        for r in &rad {
            big = big.hstack(&self.act(r));
        }
        Ok(RowSpace::from_matrix(&big.left_kernel()))
    }

    /// Submodule spanned by `rows`, with its inclusion.
    pub fn submodule(&self, rows: &[Vector]) -> Result<(Module, ModuleHom), ModuleError> {
        let space = RowSpace::from_rows(self.field(), self.dim(), rows.iter().cloned());
        self.submodule_of_space(&space)
    }

    pub fn submodule_of_space(&self, space: &RowSpace) -> Result<(Module, ModuleHom), ModuleError> {
        let field = self.field();
        let basis = space.basis();
        let d = basis.len();
        let mut action = Vec::with_capacity(self.0.action.len());
        for a in &self.0.action {
            let mut m = Matrix::zeros(field, d, d);
            for (i, u) in basis.iter().enumerate() {
                let w = a.left_apply(u);
                let c = space.coords(&w).ok_or(ModuleError::NotASubmodule)?;
                for (l, x) in c.into_iter().enumerate() {
                    if !x.is_zero() {
                        m.set(i, l, x);
                    }
                }
            }
            action.push(m);
        }
        let sub = Module::from_parts(Arc::clone(self.algebra()), d, action, None);
        let inc = Matrix::from_rows(field, self.dim(), basis.to_vec());
        Ok((sub.clone(), ModuleHom::from_parts(sub, self.clone(), inc)))
    }

    /// Quotient by the submodule spanned by `rows`, with the projection.
    pub fn quotient(&self, rows: &[Vector]) -> Result<(Module, ModuleHom), ModuleError> {
        let space = RowSpace::from_rows(self.field(), self.dim(), rows.iter().cloned());
        self.quotient_by_space(&space)
    }

    pub fn quotient_by_space(&self, space: &RowSpace) -> Result<(Module, ModuleHom), ModuleError> {
        let field = self.field();
        for u in space.basis() {
            for a in &self.0.action {
                if !space.contains(&a.left_apply(u)) {
                    return Err(ModuleError::NotASubmodule);
                }
            }
        }
        let comp = space.complement_columns();
        let d = comp.len();
        let project = |v: &[Scalar]| -> Vector {
            let r = space.reduce(v);
            comp.iter().map(|&c| r[c].clone()).collect()
        };
        let mut action = Vec::with_capacity(self.0.action.len());
        for a in &self.0.action {
            let rows = comp.iter().map(|&c| project(a.row(c))).collect();
            action.push(Matrix::from_rows(field, d, rows));
        }
        let q = Module::from_parts(Arc::clone(self.algebra()), d, action, None);
        let rows = (0..self.dim()).map(|i| project(&field.unit_vector(self.dim(), i))).collect();
        let proj = Matrix::from_rows(field, d, rows);
        Ok((q.clone(), ModuleHom::from_parts(self.clone(), q, proj)))
    }

    /// `M / M rad(A)` with its projection.
    pub fn top(&self) -> Result<(Module, ModuleHom), ModuleError> {
        let r = self.radical_rows()?;
        self.quotient_by_space(&r)
    }

    pub fn socle(&self) -> Result<(Module, ModuleHom), ModuleError> {
        let s = self.socle_rows()?;
        self.submodule_of_space(&s)
    }

    pub fn module_radical(&self) -> Result<(Module, ModuleHom), ModuleError> {
        let r = self.radical_rows()?;
        self.submodule_of_space(&r)
    }

    /// Direct sum with inclusions and projections.
    pub fn direct_sum(parts: &[Module]) -> Result<DirectSum, ModuleError> {
        let first = parts.first().ok_or_else(|| ModuleError::Shape("empty direct sum".into()))?;
        for p in parts {
            first.check_same(p)?;
        }
        let field = first.field();
        let dim: usize = parts.iter().map(Module::dim).sum();
        let algebra = Arc::clone(first.algebra());
        let action = (0..algebra.dim())
            .map(|i| {
                let mut m = Matrix::zeros(field, 0, 0);
                for p in parts {
                    m = m.direct_sum(p.action(i));
                }
                m
            })
            .collect();
        let free: Option<Vec<usize>> =
            parts.iter().map(|p| p.free_data().map(|f| f.summands.clone())).collect::<Option<Vec<_>>>().map(|v| v.concat());
        let sum = Module::from_parts(algebra, dim, action, None);
        let sum = match free {
            Some(summands) => Module::free(Arc::clone(sum.algebra()), summands)?,
            None => sum,
        };
        let mut inclusions = Vec::new();
        let mut projections = Vec::new();
        let mut off = 0;
        for p in parts {
            let mut inc = Matrix::zeros(field, p.dim(), dim);
            let mut proj = Matrix::zeros(field, dim, p.dim());
            for i in 0..p.dim() {
                inc.set(i, off + i, field.one());
                proj.set(off + i, i, field.one());
            }
            inclusions.push(ModuleHom::from_parts(p.clone(), sum.clone(), inc));
            projections.push(ModuleHom::from_parts(sum.clone(), p.clone(), proj));
            off += p.dim();
        }
        Ok(DirectSum { sum, inclusions, projections })
    }

    /// `M^n`.
    pub fn power(&self, n: usize) -> Result<Module, ModuleError> {
        if n == 0 {
            return Ok(Module::zero(Arc::clone(self.algebra())));
        }
        Ok(Module::direct_sum(&vec![self.clone(); n])?.sum)
    }

    /// The dual `D M = Hom_k(M, k)` as a right module over the opposite
    /// algebra.
    pub fn dual(&self) -> Module {
        self.dual_over(self.algebra().opposite_arc())
    }

    /// The dual with its action recorded over `algebra`, which must have the
    /// structure constants of the opposite of this module's algebra.
    pub fn dual_over(&self, algebra: Arc<Algebra>) -> Module {
        let action = self.0.action.iter().map(Matrix::transpose).collect();
        Module::from_parts(algebra, self.dim(), action, None)
    }

    /// The simple tops `e A / e rad(A)`, one per isomorphism class of
    /// primitive idempotents, in class order.
    pub fn simples(algebra: &Arc<Algebra>) -> Result<Vec<Module>, ModuleError> {
        let prims = algebra.primitive_idempotents()?;
        let mut out = Vec::new();
        for &k in &prims.reps {
            let p = Module::indecomposable_projective(Arc::clone(algebra), k)?;
            out.push(p.top()?.0);
        }
        Ok(out)
    }

    /// The simple module of class `c` as a quotient of `e_rep A`.
    pub fn simple(algebra: &Arc<Algebra>, class: usize) -> Result<Module, ModuleError> {
        let prims = algebra.primitive_idempotents()?;
        let &rep = prims.reps.get(class).ok_or_else(|| {
            ModuleError::Shape(format!("class {class} out of range: the algebra has {} simple classes", prims.reps.len()))
        })?;
        let p = Module::indecomposable_projective(Arc::clone(algebra), rep)?;
        Ok(p.top()?.0)
    }

    /// Multiplicities of the simples (by class) in the top of `M`.
    pub fn top_multiplicities(&self) -> Result<Vec<usize>, ModuleError> {
        let prims = self.algebra().primitive_idempotents()?;
        let rad = self.radical_rows()?;
        let mut out = Vec::new();
        for &k in &prims.reps {
            let part = self.idempotent_part(&prims.elements[k]);
            let total = rad.sum(&part).dim();
            out.push(total - rad.dim());
        }
        Ok(out)
    }

    pub fn is_projective(&self) -> Result<bool, ModuleError> {
        if self.free_data().is_some() {
            return Ok(true);
        }
        let (p, _) = projective_cover(self)?;
        Ok(p.dim() == self.dim())
    }
}

/// A direct sum with its structure maps.
#[derive(Debug, Clone)]
pub struct DirectSum {
    pub sum: Module,
    pub inclusions: Vec<ModuleHom>,
    pub projections: Vec<ModuleHom>,
}

/// A module homomorphism `source -> target`, as a `dim source x dim target`
/// matrix acting on rows.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleHom {
    source: Module,
    target: Module,
    matrix: Matrix,
}

impl ModuleHom {
    /// Checks the intertwining identity on every basis element.
    pub fn new(source: Module, target: Module, matrix: Matrix) -> Result<ModuleHom, ModuleError> {
        source.check_same(&target)?;
        if matrix.rows() != source.dim() || matrix.cols() != target.dim() {
            return Err(ModuleError::Shape(format!(
                "{}x{} matrix for a map from dimension {} to {}",
                matrix.rows(),
                matrix.cols(),
                source.dim(),
                target.dim()
            )));
        }
        let h = ModuleHom { source, target, matrix };
        if let Some(b) = h.failing_basis_element() {
            return Err(ModuleError::NotAHomomorphism(format!("does not commute with {}", h.source.algebra().labels()[b])));
        }
        Ok(h)
    }

    pub(crate) fn from_parts(source: Module, target: Module, matrix: Matrix) -> ModuleHom {
        debug_assert_eq!((matrix.rows(), matrix.cols()), (source.dim(), target.dim()));
        ModuleHom { source, target, matrix }
    }

    pub fn failing_basis_element(&self) -> Option<usize> {
        (0..self.source.algebra().dim()).find(|&i| self.source.action(i).mul(&self.matrix) != self.matrix.mul(self.target.action(i)))
    }

    pub fn identity(m: &Module) -> ModuleHom {
        ModuleHom::from_parts(m.clone(), m.clone(), Matrix::identity(m.field(), m.dim()))
    }

    pub fn zero(source: &Module, target: &Module) -> ModuleHom {
        ModuleHom::from_parts(source.clone(), target.clone(), Matrix::zeros(source.field(), source.dim(), target.dim()))
    }

    pub fn source(&self) -> &Module {
        &self.source
    }

    pub fn target(&self) -> &Module {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `self` followed by `g`.
    pub fn then(&self, g: &ModuleHom) -> ModuleHom {
        assert_eq!(self.target.dim(), g.source.dim(), "composable maps");
        ModuleHom::from_parts(self.source.clone(), g.target.clone(), self.matrix.mul(&g.matrix))
    }

    pub fn add(&self, g: &ModuleHom) -> ModuleHom {
        ModuleHom::from_parts(self.source.clone(), self.target.clone(), self.matrix.add(&g.matrix))
    }

    pub fn scale(&self, c: &Scalar) -> ModuleHom {
        ModuleHom::from_parts(self.source.clone(), self.target.clone(), self.matrix.scale(c))
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.source.dim()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target.dim()
    }

    pub fn is_iso(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    pub fn apply(&self, v: &[Scalar]) -> Vector {
        self.matrix.left_apply(v)
    }

    /// The kernel with its inclusion into the source.
    pub fn kernel(&self) -> (Module, ModuleHom) {
        self.source.submodule(&self.matrix.left_kernel().row_vectors()).expect("kernels are submodules")
    }

    /// The image with its inclusion into the target.
    pub fn image(&self) -> (Module, ModuleHom) {
        self.target.submodule(&self.matrix.row_vectors()).expect("images are submodules")
    }

    /// The cokernel with the projection from the target.
    pub fn cokernel(&self) -> (Module, ModuleHom) {
        self.target.quotient(&self.matrix.row_vectors()).expect("images are submodules")
    }

    pub fn image_rows(&self) -> RowSpace {
        RowSpace::from_matrix(&self.matrix)
    }

    pub fn kernel_rows(&self) -> RowSpace {
        RowSpace::from_matrix(&self.matrix.left_kernel())
    }

    /// The dual map `D N -> D M` over the opposite algebra.
    pub fn dual(&self, source: &Module, target: &Module) -> ModuleHom {
        ModuleHom::from_parts(source.clone(), target.clone(), self.matrix.transpose())
    }
}

/// `hom_space(m, n)` in canonical form.
pub fn hom_space(m: &Module, n: &Module) -> Result<Vec<ModuleHom>, ModuleError> {
    Ok(hom_basis(m, n)?.into_iter().map(|f| ModuleHom::from_parts(m.clone(), n.clone(), f)).collect())
}

/// Basis of `Hom_A(M, N)` as matrices, canonical (echelon on flattened
/// matrices).
pub fn hom_basis(m: &Module, n: &Module) -> Result<Vec<Matrix>, ModuleError> {
    m.check_same(n)?;
    let field = m.field();
    if m.dim() == 0 || n.dim() == 0 {
        return Ok(Vec::new());
    }
    if let Some(fd) = m.free_data() {
        return Ok(canonical(field, m.dim(), n.dim(), free_hom_basis(m, fd, n)?));
    }
    let a = m.algebra();
    match (m.blocks(), n.blocks(), a.generators()) {
        (Some(bm), Some(bn), Ok(gens)) => {
            let acts: Vec<GenAction> = gens
                .iter()
                .filter(|g| g.from != g.to || !a.primitive_idempotents().is_ok_and(|p| p.elements[g.from] == g.element))
                .map(|g| GenAction { on_source: m.act(&g.element), on_target: n.act(&g.element), moves: vec![(g.from, g.to)] })
                .collect();
            Ok(solve_intertwiners(field, m.dim(), n.dim(), bm, bn, &acts))
        }
        _ => {
            let bm = BlockBasis::trivial(field, m.dim());
            let bn = BlockBasis::trivial(field, n.dim());
            let acts: Vec<GenAction> = (0..a.dim())
                .map(|i| GenAction { on_source: m.action(i).clone(), on_target: n.action(i).clone(), moves: vec![(0, 0)] })
                .collect();
            Ok(solve_intertwiners(field, m.dim(), n.dim(), &bm, &bn, &acts))
        }
    }
}

fn canonical(field: Field, r: usize, c: usize, maps: Vec<Matrix>) -> Vec<Matrix> {
    let s = RowSpace::from_rows(field, r * c, maps.into_iter().map(|m| m.to_vector()));
    s.basis().iter().map(|v| Matrix::from_vector(field, r, c, v.clone())).collect()
}

/// Homs out of `⊕ e_{k_s} A`: one for each basis vector of each `N e_{k_s}`.
fn free_hom_basis(m: &Module, fd: &FreeData, n: &Module) -> Result<Vec<Matrix>, ModuleError> {
    let a = m.algebra();
    let field = m.field();
    let prims = a.primitive_idempotents()?;
    let bases = a.projective_bases()?;
    let mut out = Vec::new();
    for (s, &k) in fd.summands.iter().enumerate() {
        let part = n.idempotent_part(&prims.elements[k]);
        for w in part.basis() {
            out.push(free_map_from_images(field, m, n, fd, s, k, bases, w));
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn free_map_from_images(
    field: Field,
    m: &Module,
    n: &Module,
    fd: &FreeData,
    s: usize,
    k: usize,
    bases: &[RowSpace],
    w: &[Scalar],
) -> Matrix {
    let mut f = Matrix::zeros(field, m.dim(), n.dim());
    for (i, y) in bases[k].basis().iter().enumerate() {
        let img = n.apply(w, y);
        f.row_mut(fd.offsets[s] + i).clone_from_slice(&img);
    }
    f
}

/// The hom out of a free module sending the generator `e_{k_s}` of summand
/// `s` to `images[s]` (which must lie in `N e_{k_s}`).
pub fn free_hom_from_images(p: &Module, n: &Module, images: &[Vector]) -> Result<ModuleHom, ModuleError> {
    let fd = p.free_data().ok_or_else(|| ModuleError::Shape("source is not free".into()))?;
    let a = p.algebra();
    let bases = a.projective_bases()?;
    let field = p.field();
    let mut f = Matrix::zeros(field, p.dim(), n.dim());
    for (s, &k) in fd.summands.iter().enumerate() {
        for (i, y) in bases[k].basis().iter().enumerate() {
            let img = n.apply(&images[s], y);
            f.row_mut(fd.offsets[s] + i).clone_from_slice(&img);
        }
    }
    Ok(ModuleHom::from_parts(p.clone(), n.clone(), f))
}

/// The coordinates, inside a free module, of the generator `e_{k_s}` of
/// summand `s`.
pub fn free_generator(p: &Module, s: usize) -> Result<Vector, ModuleError> {
    let fd = p.free_data().ok_or_else(|| ModuleError::Shape("not a free module".into()))?;
    let a = p.algebra();
    let k = fd.summands[s];
    let bases = a.projective_bases()?;
    let e = &a.primitive_idempotents()?.elements[k];
    let c = bases[k].coords_unchecked(e);
    let mut v = p.field().vec_zero(p.dim());
    for (i, x) in c.into_iter().enumerate() {
        v[fd.offsets[s] + i] = x;
    }
    Ok(v)
}

/// Minimal projective cover: `P = ⊕ e_k A` with the multiplicities of the
/// simple tops of `M`, and an epimorphism whose kernel lies in `rad P`.
pub fn projective_cover(m: &Module) -> Result<(Module, ModuleHom), ModuleError> {
    let a = m.algebra();
    let prims = a.primitive_idempotents()?;
    let mut space = m.radical_rows()?;
    let mut summands = Vec::new();
    let mut images = Vec::new();
    for &k in &prims.reps {
        for v in m.idempotent_part(&prims.elements[k]).basis() {
            if space.insert(v.clone()) {
                summands.push(k);
                images.push(v.clone());
            }
        }
    }
    let p = Module::free(Arc::clone(a), summands)?;
    let epi = free_hom_from_images(&p, m, &images)?;
    Ok((p, epi))
}

/// Whether `m` is a direct summand of some power of `n`: the identity of
/// `m` must lie in the span of the composites `m -> n -> m`.
pub fn in_add(m: &Module, n: &Module) -> Result<bool, ModuleError> {
    m.check_same(n)?;
    if m.dim() == 0 {
        return Ok(true);
    }
    if n.dim() == 0 {
        return Ok(false);
    }
    let field = m.field();
    let to_n = hom_basis(m, n)?;
    let from_n = hom_basis(n, m)?;
    let end = RowSpace::from_rows(field, m.dim() * m.dim(), hom_basis(m, m)?.into_iter().map(|f| f.to_vector()));
    let id = Matrix::identity(field, m.dim()).to_vector();
    let id_coords = end.coords_unchecked(&id);
    let mut span = RowSpace::new(field, end.dim());
    for g in &to_n {
        for f in &from_n {
            let c = end.coords_unchecked(&g.mul(f).to_vector());
            if span.insert(c) && span.contains(&id_coords) {
                return Ok(true);
            }
            if span.dim() == end.dim() {
                return Ok(true);
            }
        }
    }
    Ok(span.contains(&id_coords))
}

/// Injective envelope `M -> D(P(D M))`, built from a projective cover over
/// the opposite algebra.
pub fn injective_envelope(m: &Module) -> Result<(Module, ModuleHom), ModuleError> {
    let d = m.dual();
    let (p, pi) = projective_cover(&d)?;
    let i = p.dual_over(Arc::clone(m.algebra()));
    let iota = ModuleHom::from_parts(m.clone(), i.clone(), pi.matrix().transpose());
    Ok((i, iota))
}

/// `D(A)` as a right `A`-module: the dual of the left regular module.
pub fn dual_regular(algebra: &Arc<Algebra>) -> Module {
    let action = (0..algebra.dim()).map(|j| algebra.left_mult_matrix(&algebra.basis(j)).transpose()).collect();
    Module::from_parts(Arc::clone(algebra), algebra.dim(), action, None)
}

/// An `A`-`B`-bimodule, stored as two commuting action families: `a . v`
/// is `v * left[a]` and `v . b` is `v * right[b]`.
#[derive(Clone)]
pub struct Bimodule {
    left: Arc<Algebra>,
    right: Arc<Algebra>,
    dim: usize,
    left_action: Vec<Matrix>,
    right_action: Vec<Matrix>,
    blocks: Arc<OnceLock<Option<BlockBasis>>>,
}

impl fmt::Debug for Bimodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Bimodule").field("dim", &self.dim).finish()
    }
}

impl Bimodule {
    /// Checks both actions and that they commute.
    pub fn new(
        left: Arc<Algebra>,
        right: Arc<Algebra>,
        dim: usize,
        left_action: Vec<Matrix>,
        right_action: Vec<Matrix>,
    ) -> Result<Bimodule, ModuleError> {
        let b = Bimodule::from_parts(left, right, dim, left_action, right_action);
        Module::new(b.left.opposite_arc(), dim, b.left_action.clone())?;
        Module::new(Arc::clone(&b.right), dim, b.right_action.clone())?;
        for l in &b.left_action {
            for r in &b.right_action {
                if l.mul(r) != r.mul(l) {
                    return Err(ModuleError::NotAModule("left and right actions do not commute".into()));
                }
            }
        }
        Ok(b)
    }

    pub(crate) fn from_parts(
        left: Arc<Algebra>,
        right: Arc<Algebra>,
        dim: usize,
        left_action: Vec<Matrix>,
        right_action: Vec<Matrix>,
    ) -> Bimodule {
        Bimodule { left, right, dim, left_action, right_action, blocks: Arc::new(OnceLock::new()) }
    }

    /// `A` as an `A`-`A`-bimodule.
    pub fn regular(a: &Arc<Algebra>) -> Bimodule {
        let left = (0..a.dim()).map(|i| a.left_mult_matrix(&a.basis(i))).collect();
        let right = a.right_regular().to_vec();
        Bimodule::from_parts(Arc::clone(a), Arc::clone(a), a.dim(), left, right)
    }

    /// `D(A) = Hom_k(A, k)` as an `A`-`A`-bimodule.
    pub fn dual_regular(a: &Arc<Algebra>) -> Bimodule {
        let r = Bimodule::regular(a);
        r.dual()
    }

    /// `D M` as a `B`-`A`-bimodule, recorded again over (`left`, `right`)
    /// swapped: `(b . phi . a)(m) = phi(a . m . b)`.
    pub fn dual(&self) -> Bimodule {
        // As a right module over the original left algebra, phi . a = phi * left[a]^T.
        let left = self.right_action.iter().map(Matrix::transpose).collect();
        let right = self.left_action.iter().map(Matrix::transpose).collect();
        Bimodule::from_parts(Arc::clone(&self.right), Arc::clone(&self.left), self.dim, left, right)
    }

    pub fn left_algebra(&self) -> &Arc<Algebra> {
        &self.left
    }

    pub fn right_algebra(&self) -> &Arc<Algebra> {
        &self.right
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left_action(&self, i: usize) -> &Matrix {
        &self.left_action[i]
    }

    pub fn right_action(&self, i: usize) -> &Matrix {
        &self.right_action[i]
    }

    pub fn left_act(&self, x: &[Scalar]) -> Matrix {
        combine(self.left.field(), self.dim, &self.left_action, x)
    }

    pub fn right_act(&self, x: &[Scalar]) -> Matrix {
        combine(self.left.field(), self.dim, &self.right_action, x)
    }

    /// The underlying right module.
    pub fn as_right_module(&self) -> Module {
        Module::from_parts(Arc::clone(&self.right), self.dim, self.right_action.clone(), None)
    }

    /// The underlying left module, as a right module over the opposite.
    pub fn as_left_module(&self) -> Module {
        Module::from_parts(self.left.opposite_arc(), self.dim, self.left_action.clone(), None)
    }

    /// The corresponding right module over `right ⊗ left^op`.
    pub fn to_enveloping_module(&self) -> Result<(Arc<Algebra>, Module), ModuleError> {
        let env = Arc::new(Algebra::enveloping(&self.left, &self.right)?);
        let dl = self.left.dim();
        let mut action = Vec::with_capacity(env.dim());
        for j in 0..self.right.dim() {
            for i in 0..dl {
                action.push(self.left_action[i].mul(&self.right_action[j]));
            }
        }
        let m = Module::from_parts(Arc::clone(&env), self.dim, action, None);
        Ok((env, m))
    }

    fn blocks(&self) -> Option<&BlockBasis> {
        self.blocks
            .get_or_init(|| {
                let pl = self.left.primitive_idempotents().ok()?;
                let pr = self.right.primitive_idempotents().ok()?;
                let mut projectors = Vec::new();
                for e in &pl.elements {
                    let le = self.left_act(e);
                    for f in &pr.elements {
                        projectors.push(le.mul(&self.right_act(f)));
                    }
                }
                BlockBasis::from_projectors(self.left.field(), self.dim, &projectors)
            })
            .as_ref()
    }

    fn same_algebras(&self, other: &Bimodule) -> bool {
        self.left.same_as(&other.left) && self.right.same_as(&other.right)
    }

    /// Basis of the bimodule homomorphisms `self -> other`.
    pub fn hom_basis(&self, other: &Bimodule) -> Result<Vec<Matrix>, ModuleError> {
        if !self.same_algebras(other) {
            return Err(ModuleError::AlgebraMismatch);
        }
        let field = self.left.field();
        if self.dim == 0 || other.dim == 0 {
            return Ok(Vec::new());
        }
        if let (Some(bm), Some(bn), Ok(gl), Ok(gr)) = (self.blocks(), other.blocks(), self.left.generators(), self.right.generators()) {
            let nl = self.left.primitive_idempotents()?.elements.len();
            let nr = self.right.primitive_idempotents()?.elements.len();
            let mut acts = Vec::new();
            for g in gl.iter().filter(|g| g.from != g.to) {
                // g = e_from g e_to sends e_to M f_c into e_from M f_c.
                let moves = (0..nr).map(|c| (g.to * nr + c, g.from * nr + c)).collect();
                acts.push(GenAction { on_source: self.left_act(&g.element), on_target: other.left_act(&g.element), moves });
            }
            for g in gr.iter().filter(|g| g.from != g.to) {
                let moves = (0..nl).map(|a| (a * nr + g.from, a * nr + g.to)).collect();
                acts.push(GenAction { on_source: self.right_act(&g.element), on_target: other.right_act(&g.element), moves });
            }
            // Non-idempotent generators inside a single corner e_k A e_k.
            let pl = self.left.primitive_idempotents()?;
            for g in gl.iter().filter(|g| g.from == g.to && g.element != pl.elements[g.from]) {
                let moves = (0..nr).map(|c| (g.to * nr + c, g.from * nr + c)).collect();
                acts.push(GenAction { on_source: self.left_act(&g.element), on_target: other.left_act(&g.element), moves });
            }
            let pr = self.right.primitive_idempotents()?;
            for g in gr.iter().filter(|g| g.from == g.to && g.element != pr.elements[g.from]) {
                let moves = (0..nl).map(|a| (a * nr + g.from, a * nr + g.to)).collect();
                acts.push(GenAction { on_source: self.right_act(&g.element), on_target: other.right_act(&g.element), moves });
            }
            return Ok(solve_intertwiners(field, self.dim, other.dim, bm, bn, &acts));
        }
        let bm = BlockBasis::trivial(field, self.dim);
        let bn = BlockBasis::trivial(field, other.dim);
        let mut acts = Vec::new();
        for i in 0..self.left.dim() {
            acts.push(GenAction { on_source: self.left_action[i].clone(), on_target: other.left_action[i].clone(), moves: vec![(0, 0)] });
        }
        for i in 0..self.right.dim() {
            acts.push(GenAction { on_source: self.right_action[i].clone(), on_target: other.right_action[i].clone(), moves: vec![(0, 0)] });
        }
        Ok(solve_intertwiners(field, self.dim, other.dim, &bm, &bn, &acts))
    }

    /// Whether the bimodule is projective as a right module.
    pub fn is_right_projective(&self) -> Result<bool, ModuleError> {
        self.as_right_module().is_projective()
    }

    /// Whether the bimodule is projective as a left module.
    pub fn is_left_projective(&self) -> Result<bool, ModuleError> {
        self.as_left_module().is_projective()
    }

    /// Sub-bimodule spanned by `rows` (which must be closed under both
    /// actions).
    pub fn sub_bimodule(&self, space: &RowSpace) -> Result<(Bimodule, Matrix), ModuleError> {
        let restrict = |mats: &[Matrix]| -> Result<Vec<Matrix>, ModuleError> {
            mats.iter()
                .map(|a| {
                    let rows = space
                        .basis()
                        .iter()
                        .map(|u| space.coords(&a.left_apply(u)).ok_or(ModuleError::NotASubmodule))
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok(Matrix::from_rows(self.left.field(), space.dim(), rows))
                })
                .collect()
        };
        let left = restrict(&self.left_action)?;
        let right = restrict(&self.right_action)?;
        let inc = space.basis_matrix();
        Ok((Bimodule::from_parts(Arc::clone(&self.left), Arc::clone(&self.right), space.dim(), left, right), inc))
    }

    /// Quotient bimodule with its projection matrix.
    pub fn quotient(&self, space: &RowSpace) -> Result<(Bimodule, Matrix), ModuleError> {
        let field = self.left.field();
        let comp = space.complement_columns();
        let project = |v: &[Scalar]| -> Vector {
            let r = space.reduce(v);
            comp.iter().map(|&c| r[c].clone()).collect()
        };
        let induce = |mats: &[Matrix]| -> Result<Vec<Matrix>, ModuleError> {
            mats.iter()
                .map(|a| {
                    for u in space.basis() {
                        if !space.contains(&a.left_apply(u)) {
                            return Err(ModuleError::NotASubmodule);
                        }
                    }
                    Ok(Matrix::from_rows(field, comp.len(), comp.iter().map(|&c| project(a.row(c))).collect()))
                })
                .collect()
        };
        let left = induce(&self.left_action)?;
        let right = induce(&self.right_action)?;
        let proj = Matrix::from_rows(field, comp.len(), (0..self.dim).map(|i| project(&field.unit_vector(self.dim, i))).collect());
        Ok((Bimodule::from_parts(Arc::clone(&self.left), Arc::clone(&self.right), comp.len(), left, right), proj))
    }

    pub fn is_zero_vector(v: &[Scalar]) -> bool {
        vec_is_zero(v)
    }
}

fn combine(field: Field, dim: usize, mats: &[Matrix], x: &[Scalar]) -> Matrix {
    let mut m = Matrix::zeros(field, dim, dim);
    for (i, c) in x.iter().enumerate() {
        if !c.is_zero() {
            m.add_scaled(c, &mats[i]);
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{cyclic_nakayama, truncated_polynomial, upper_triangular_2};
    use proptest::prelude::*;

    fn q() -> Field {
        Field::Rational
    }

    fn fix_a() -> Arc<Algebra> {
        Arc::new(truncated_polynomial(q(), 2))
    }

    fn fix_n3() -> Arc<Algebra> {
        Arc::new(cyclic_nakayama(q(), 3, 2))
    }

    fn fix_ut2() -> Arc<Algebra> {
        Arc::new(upper_triangular_2(q()))
    }

    /// Hom-space by brute force: intertwine every basis element, no blocks.
    fn dense_hom_dim(m: &Module, n: &Module) -> usize {
        let field = m.field();
        let bm = BlockBasis::trivial(field, m.dim());
        let bn = BlockBasis::trivial(field, n.dim());
        let acts: Vec<GenAction> = (0..m.algebra().dim())
            .map(|i| GenAction { on_source: m.action(i).clone(), on_target: n.action(i).clone(), moves: vec![(0, 0)] })
            .collect();
        solve_intertwiners(field, m.dim(), n.dim(), &bm, &bn, &acts).len()
    }

    /// `m` is in add(n) iff the approximation `n^h -> m` built from a hom basis
    /// splits: some `s : m -> n^h` has `s * phi = id`.
    fn add_by_split_approximation(m: &Module, n: &Module) -> bool {
        let basis = hom_basis(n, m).unwrap();
        if m.dim() == 0 {
            return true;
        }
        if basis.is_empty() {
            return false;
        }
        let big = n.power(basis.len()).unwrap();
        let mut phi = Matrix::zeros(m.field(), 0, m.dim());
        for f in &basis {
            phi = phi.vstack(f);
        }
        let sections = hom_basis(m, &big).unwrap();
        let field = m.field();
        let cols: Vec<Vector> = sections.iter().map(|s| s.mul(&phi).to_vector()).collect();
        let lhs = Matrix::from_rows(field, m.dim() * m.dim(), cols);
        lhs.solve_left(&Matrix::identity(field, m.dim()).to_vector()).is_some()
    }

    #[test]
    fn identity_is_a_hom() {
        let a = fix_n3();
        for m in Module::simples(&a).unwrap().into_iter().chain([Module::regular(a.clone())]) {
            let ends = hom_basis(&m, &m).unwrap();
            let s = RowSpace::from_rows(q(), m.dim() * m.dim(), ends.iter().map(Matrix::to_vector));
            assert!(s.contains(&Matrix::identity(q(), m.dim()).to_vector()));
        }
    }

    #[test]
    fn socle_inclusion_is_the_only_map_from_s_to_a() {
        let a = fix_a();
        let s = Module::simple(&a, 0).unwrap();
        let reg = Module::regular(a.clone());
        let homs = hom_space(&s, &reg).unwrap();
        assert_eq!(homs.len(), 1);
        assert!(homs[0].failing_basis_element().is_none());
        assert_eq!(homs[0].image_rows().basis(), &[a.basis(1)]);
    }

    #[test]
    fn simples_of_n3_are_pairwise_orthogonal() {
        let a = fix_n3();
        let simples = Module::simples(&a).unwrap();
        assert_eq!(simples.iter().map(Module::dim).collect::<Vec<_>>(), vec![1, 1, 1]);
        for (i, si) in simples.iter().enumerate() {
            for (j, sj) in simples.iter().enumerate() {
                assert_eq!(hom_basis(si, sj).unwrap().len(), usize::from(i == j));
            }
        }
    }

    #[test]
    fn simples_of_small_algebras() {
        let k = Arc::new(Algebra::base_field(q()));
        let s = Module::simples(&k).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].dim(), 1);
        let ut = fix_ut2();
        assert_eq!(Module::simples(&ut).unwrap().iter().map(Module::dim).collect::<Vec<_>>(), vec![1, 1]);
    }

    #[test]
    fn projective_covers() {
        let a = fix_a();
        let s = Module::simple(&a, 0).unwrap();
        let (p, epi) = projective_cover(&s).unwrap();
        assert_eq!(p.dim(), 2);
        assert!(epi.is_surjective());
        assert!(epi.failing_basis_element().is_none());
        assert_eq!(epi.kernel_rows().basis(), &[a.basis(1)]);

        let n3 = fix_n3();
        let s1 = Module::simple(&n3, 0).unwrap();
        let (p, epi) = projective_cover(&s1).unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(p.free_data().unwrap().summands, vec![0]);
        let rad = p.radical_rows().unwrap();
        assert!(rad.contains_space(&epi.kernel_rows()));

        let reg = Module::regular(n3.clone());
        let (p, epi) = projective_cover(&reg).unwrap();
        assert_eq!(p.dim(), 6);
        assert!(epi.is_iso());
    }

    #[test]
    fn add_membership_examples() {
        let a = fix_a();
        let s = Module::simple(&a, 0).unwrap();
        let reg = Module::regular(a.clone());
        assert!(in_add(&s, &s).unwrap());
        assert!(!in_add(&s, &reg).unwrap());
        let two = reg.power(2).unwrap();
        assert!(in_add(&two, &reg).unwrap());
        assert!(in_add(&reg, &two).unwrap());
    }

    #[test]
    fn add_membership_matches_split_approximation() {
        let n3 = fix_n3();
        let mut battery: Vec<Module> = Module::simples(&n3).unwrap();
        battery.push(Module::regular(n3.clone()));
        for k in 0..3 {
            battery.push(Module::indecomposable_projective(n3.clone(), k).unwrap());
        }
        battery.push(Module::direct_sum(&[battery[0].clone(), battery[3].clone()]).unwrap().sum);
        battery.push(Module::direct_sum(&[battery[1].clone(), battery[2].clone()]).unwrap().sum);
        for m in &battery {
            for n in &battery {
                assert_eq!(in_add(m, n).unwrap(), add_by_split_approximation(m, n));
            }
        }
    }

    #[test]
    fn radical_and_socle_of_dual_numbers() {
        let a = fix_a();
        let reg = Module::regular(a.clone());
        assert_eq!(reg.socle_rows().unwrap().basis(), &[a.basis(1)]);
        assert_eq!(reg.radical_rows().unwrap().basis(), &[a.basis(1)]);
        let (soc, inc) = reg.socle().unwrap();
        let (coker, _) = inc.cokernel();
        assert_eq!(soc.dim(), 1);
        assert_eq!(coker.dim(), 1);
        assert!(coker.action(1).is_zero());
    }

    #[test]
    fn kernel_of_identity_is_zero() {
        let reg = Module::regular(fix_n3());
        let (k, _) = ModuleHom::identity(&reg).kernel();
        assert_eq!(k.dim(), 0);
    }

    #[test]
    fn mismatched_algebras_are_rejected() {
        let m = Module::regular(fix_a());
        let n = Module::regular(fix_n3());
        assert_eq!(hom_basis(&m, &n).unwrap_err(), ModuleError::AlgebraMismatch);
        assert_eq!(in_add(&m, &n).unwrap_err(), ModuleError::AlgebraMismatch);
    }

    #[test]
    fn non_submodule_is_rejected() {
        let a = fix_a();
        let reg = Module::regular(a.clone());
        assert!(matches!(reg.submodule(&[a.basis(0)]), Err(ModuleError::NotASubmodule)));
    }

    #[test]
    fn bad_action_is_rejected() {
        let a = fix_a();
        let f = q();
        // x acting as the identity violates x^2 = 0.
        let action = vec![Matrix::identity(f, 1), Matrix::identity(f, 1)];
        assert!(matches!(Module::new(a, 1, action), Err(ModuleError::NotAModule(_))));
    }

    #[test]
    fn free_modules_agree_with_regular() {
        let a = fix_n3();
        let free = Module::free(a.clone(), vec![0, 1, 2]).unwrap();
        let reg = Module::regular(a.clone());
        assert_eq!(hom_basis(&free, &reg).unwrap().len(), 6);
        assert_eq!(hom_basis(&reg, &free).unwrap().len(), 6);
        assert!(in_add(&reg, &free).unwrap() && in_add(&free, &reg).unwrap());
    }

    #[test]
    fn injective_envelopes() {
        let ut = fix_ut2();
        // The simple at vertex 2 is the socle of e1 A, so its envelope is e1 A.
        let s2 = Module::simple(&ut, 1).unwrap();
        let (i, iota) = injective_envelope(&s2).unwrap();
        assert_eq!(i.dim(), 2);
        assert!(iota.is_injective());
        assert!(iota.failing_basis_element().is_none());
        let p1 = Module::indecomposable_projective(ut.clone(), 0).unwrap();
        assert!(in_add(&i, &p1).unwrap());
    }

    #[test]
    fn bimodule_homs_of_dual_numbers() {
        let a = fix_a();
        let reg = Bimodule::regular(&a);
        let dual = Bimodule::dual_regular(&a);
        assert_eq!(reg.hom_basis(&reg).unwrap().len(), 2);
        assert_eq!(reg.hom_basis(&dual).unwrap().len(), 2);
        let (env, m) = reg.to_enveloping_module().unwrap();
        assert_eq!(env.dim(), 4);
        let cyclic = RowSpace::from_rows(q(), 2, (0..4).map(|i| m.apply(a.unit(), &env.basis(i))));
        assert_eq!(cyclic.dim(), 2);
    }

    #[test]
    fn bimodule_constructor_checks_commuting() {
        let a = fix_a();
        let r = Bimodule::regular(&a);
        assert!(Bimodule::new(
            a.clone(),
            a.clone(),
            2,
            (0..2).map(|i| r.left_action(i).clone()).collect(),
            (0..2).map(|i| r.right_action(i).clone()).collect()
        )
        .is_ok());
    }

    fn n3_battery() -> Vec<Module> {
        let a = fix_n3();
        let mut out = Module::simples(&a).unwrap();
        for k in 0..3 {
            out.push(Module::indecomposable_projective(a.clone(), k).unwrap());
        }
        out.push(Module::regular(a));
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn block_solver_matches_dense_solver(i in 0usize..7, j in 0usize..7) {
            let b = n3_battery();
            let homs = hom_basis(&b[i], &b[j]).unwrap();
            prop_assert_eq!(homs.len(), dense_hom_dim(&b[i], &b[j]));
            for f in homs {
                let h = ModuleHom::from_parts(b[i].clone(), b[j].clone(), f);
                prop_assert!(h.failing_basis_element().is_none());
            }
        }

        #[test]
        fn kernel_rank_identity(i in 0usize..7, j in 0usize..7, coeffs in proptest::collection::vec(-2i64..=2, 8)) {
            let b = n3_battery();
            let homs = hom_basis(&b[i], &b[j]).unwrap();
            let mut f = Matrix::zeros(q(), b[i].dim(), b[j].dim());
            for (h, c) in homs.iter().zip(&coeffs) {
                f.add_scaled(&q().from_i64(*c), h);
            }
            let h = ModuleHom::from_parts(b[i].clone(), b[j].clone(), f);
            let (k, inc) = h.kernel();
            prop_assert_eq!(k.dim() + h.rank(), b[i].dim());
            prop_assert!(inc.failing_basis_element().is_none());
            prop_assert!(inc.then(&h).is_zero());
        }
    }
}
