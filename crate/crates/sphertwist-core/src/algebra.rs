//! Finite-dimensional associative algebras given by structure constants.
//!
//! An [`Algebra`] stores the products `b_i * b_j` of its basis elements as
//! sparse coordinate vectors. Elements are coordinate rows. Algebras can be
//! read off a quiver with relations, quotiented by two-sided ideals and
//! decomposed with respect to a complete set of primitive idempotents.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::exactlin::{axpy, vec_is_zero, vec_sub, Field, LinError, Matrix, RowSpace, Scalar, Vector};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("structure constants have the wrong shape: {0}")]
    Shape(String),
    #[error("not associative: (b{0} b{1}) b{2} != b{0} (b{1} b{2})")]
    NonAssociative(usize, usize, usize),
    #[error("the given unit is not a two-sided identity (fails on b{0})")]
    BadUnit(usize),
    #[error("the quotient of the path algebra is not finite-dimensional below path length {0}")]
    InfiniteDimensional(usize),
    #[error("malformed relation: {0}")]
    MalformedRelation(String),
    #[error("the trace-form radical needs characteristic 0 or p > {dim}, got p = {p}")]
    UnsupportedCharacteristic { p: u64, dim: usize },
    #[error("not a two-sided ideal: {0}")]
    NotAnIdeal(String),
    #[error("the semisimple quotient is not split over the base field")]
    NotSplit,
    #[error("not a surjective algebra map: {0}")]
    NotASurjection(String),
    #[error("bad idempotent data: {0}")]
    BadIdempotent(String),
    #[error("algebras over different fields ({0} and {1})")]
    FieldMismatch(Field, Field),
    #[error(transparent)]
    Lin(#[from] LinError),
}

type Sparse = Vec<(usize, Scalar)>;

/// What a recorded idempotent stands for.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum IdempotentRole {
    /// The trivial path at a quiver vertex.
    Vertex(usize),
    /// Projection onto the projective part `P` of an object `X`.
    ProjectivePart,
    /// Projection onto one copy of the summand `X_index`.
    Summand {
        index: usize,
        copy: usize,
    },
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedIdempotent {
    pub role: IdempotentRole,
    pub element: Vector,
}

/// A complete set of orthogonal primitive idempotents together with their
/// isomorphism classes (`e_i ~ e_j` iff `e_i A` and `e_j A` are isomorphic).
#[derive(Debug, Clone)]
pub struct Primitives {
    pub elements: Vec<Vector>,
    /// Index of the recorded idempotent each primitive refines, if any.
    pub origin: Vec<Option<usize>>,
    pub class: Vec<usize>,
    /// First primitive of each class.
    pub reps: Vec<usize>,
}

impl Primitives {
    pub fn class_count(&self) -> usize {
        self.reps.len()
    }

    pub fn members(&self, class: usize) -> Vec<usize> {
        (0..self.elements.len()).filter(|&i| self.class[i] == class).collect()
    }
}

#[derive(Default)]
struct Caches {
    radical: OnceLock<Result<Vec<Vector>, AlgebraError>>,
    primitives: OnceLock<Result<Primitives, AlgebraError>>,
    generators: OnceLock<Result<Vec<Generator>, AlgebraError>>,
    right_mult: OnceLock<Vec<Matrix>>,
    projective_bases: OnceLock<Result<Vec<RowSpace>, AlgebraError>>,
    opposite: OnceLock<Arc<Algebra>>,
    self_injective: OnceLock<bool>,
}

impl Clone for Caches {
    fn clone(&self) -> Self {
        Caches::default()
    }
}

/// An algebra generator lying in the Peirce component `e_from A e_to` of two
/// primitive idempotents; on a right module it maps `M e_from` into `M e_to`.
#[derive(Debug, Clone)]
pub struct Generator {
    pub from: usize,
    pub to: usize,
    pub element: Vector,
}

/// A finite-dimensional associative unital algebra.
#[derive(Clone)]
pub struct Algebra {
    field: Field,
    dim: usize,
    labels: Vec<String>,
    mult: Vec<Vec<Sparse>>,
    unit: Vector,
    idempotents: Vec<TaggedIdempotent>,
    caches: Caches,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algebra").field("field", &self.field).field("dim", &self.dim).field("labels", &self.labels).finish()
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.dim == other.dim && self.mult == other.mult && self.unit == other.unit
    }
}

fn to_sparse(v: &[Scalar]) -> Sparse {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

impl Algebra {
    /// Validates structure constants `mult[i][j] = b_i b_j` and a unit.
    pub fn from_structure_constants(field: Field, dim: usize, mult: Vec<Vec<Vector>>, unit: Vector) -> Result<Algebra, AlgebraError> {
        Algebra::with_labels(field, (0..dim).map(|i| format!("b{i}")).collect(), mult, unit)
    }

    pub fn with_labels(field: Field, labels: Vec<String>, mult: Vec<Vec<Vector>>, unit: Vector) -> Result<Algebra, AlgebraError> {
        let dim = labels.len();
        if mult.len() != dim || mult.iter().any(|r| r.len() != dim) {
            return Err(AlgebraError::Shape(format!("expected a {dim}x{dim} table of products")));
        }
        if unit.len() != dim {
            return Err(AlgebraError::Shape(format!("unit has length {}, expected {dim}", unit.len())));
        }
        for v in mult.iter().flatten().chain(std::iter::once(&unit)) {
            if v.len() != dim {
                return Err(AlgebraError::Shape(format!("product vector of length {}, expected {dim}", v.len())));
            }
            if let Some(x) = v.iter().find(|x| x.field() != field) {
                return Err(AlgebraError::FieldMismatch(field, x.field()));
            }
        }
        let mult = mult.into_iter().map(|row| row.iter().map(|v| to_sparse(v)).collect()).collect();
        let a = Algebra::from_sparse(field, labels, mult, unit);
        a.check_unit()?;
        a.check_associative()?;
        Ok(a)
    }

    fn from_sparse(field: Field, labels: Vec<String>, mult: Vec<Vec<Sparse>>, unit: Vector) -> Algebra {
        Algebra { field, dim: labels.len(), labels, mult, unit, idempotents: Vec::new(), caches: Caches::default() }
    }

    /// The base field as a one-dimensional algebra.
    pub fn base_field(field: Field) -> Algebra {
        Algebra::from_structure_constants(field, 1, vec![vec![vec![field.one()]]], vec![field.one()]).expect("k is an algebra")
    }

    /// The zero algebra.
    pub fn zero(field: Field) -> Algebra {
        Algebra::from_sparse(field, Vec::new(), Vec::new(), Vec::new())
    }

    fn check_unit(&self) -> Result<(), AlgebraError> {
        for i in 0..self.dim {
            let e = self.basis(i);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                return Err(AlgebraError::BadUnit(i));
            }
        }
        Ok(())
    }

    fn check_associative(&self) -> Result<(), AlgebraError> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let ij = &self.mult[i][j];
                for k in 0..self.dim {
                    let mut lhs = self.field.vec_zero(self.dim);
                    for (l, c) in ij {
                        for (m, d) in &self.mult[*l][k] {
                            lhs[*m].add_mul_assign(c, d);
                        }
                    }
                    let mut rhs = self.field.vec_zero(self.dim);
                    for (l, c) in &self.mult[j][k] {
                        for (m, d) in &self.mult[i][*l] {
                            rhs[*m].add_mul_assign(c, d);
                        }
                    }
                    if lhs != rhs {
                        return Err(AlgebraError::NonAssociative(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn zero_element(&self) -> Vector {
        self.field.vec_zero(self.dim)
    }

    pub fn basis(&self, i: usize) -> Vector {
        self.field.unit_vector(self.dim, i)
    }

    /// The coordinate vector of `b_i b_j`.
    pub fn product(&self, i: usize, j: usize) -> Vector {
        let mut v = self.zero_element();
        for (k, c) in &self.mult[i][j] {
            v[*k] = c.clone();
        }
        v
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let mut out = self.zero_element();
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in &self.mult[i][j] {
                    out[*k].add_mul_assign(&ab, c);
                }
            }
        }
        out
    }

    /// Matrix of `x -> x * y` (row `i` is `b_i y`).
    pub fn right_mult_matrix(&self, y: &[Scalar]) -> Matrix {
        let rows = (0..self.dim).map(|i| self.mul(&self.basis(i), y)).collect();
        Matrix::from_rows(self.field, self.dim, rows)
    }

    /// Matrix of `y -> x * y` (row `j` is `x b_j`).
    pub fn left_mult_matrix(&self, x: &[Scalar]) -> Matrix {
        let rows = (0..self.dim).map(|j| self.mul(x, &self.basis(j))).collect();
        Matrix::from_rows(self.field, self.dim, rows)
    }

    /// Right multiplication matrices of all basis elements: the regular
    /// right module.
    pub fn right_regular(&self) -> &[Matrix] {
        self.caches.right_mult.get_or_init(|| {
            (0..self.dim)
                .map(|j| {
                    let mut m = Matrix::zeros(self.field, self.dim, self.dim);
                    for i in 0..self.dim {
                        for (k, c) in &self.mult[i][j] {
                            m.set(i, *k, c.clone());
                        }
                    }
                    m
                })
                .collect()
        })
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.mult[i][j] == self.mult[j][i]))
    }

    pub fn idempotents(&self) -> &[TaggedIdempotent] {
        &self.idempotents
    }

    pub fn idempotent_with_role(&self, role: &IdempotentRole) -> Option<&Vector> {
        self.idempotents.iter().find(|t| &t.role == role).map(|t| &t.element)
    }

    /// Records orthogonal idempotents (with roles) on the algebra.
    pub fn with_idempotents(mut self, idems: Vec<TaggedIdempotent>) -> Result<Algebra, AlgebraError> {
        for (a, ta) in idems.iter().enumerate() {
            if ta.element.len() != self.dim {
                return Err(AlgebraError::BadIdempotent(format!("idempotent {a} has the wrong length")));
            }
            if self.mul(&ta.element, &ta.element) != ta.element {
                return Err(AlgebraError::BadIdempotent(format!("e{a}^2 != e{a}")));
            }
            for (b, tb) in idems.iter().enumerate() {
                if a != b && !vec_is_zero(&self.mul(&ta.element, &tb.element)) {
                    return Err(AlgebraError::BadIdempotent(format!("e{a} e{b} != 0")));
                }
            }
        }
        self.idempotents = idems;
        self.caches = Caches::default();
        Ok(self)
    }

    pub fn with_basis_labels(mut self, labels: Vec<String>) -> Algebra {
        assert_eq!(labels.len(), self.dim);
        self.labels = labels;
        self
    }

    /// The algebra with the opposite multiplication.
    pub fn opposite(&self) -> Algebra {
        let mult = (0..self.dim).map(|i| (0..self.dim).map(|j| self.mult[j][i].clone()).collect()).collect();
        let mut a = Algebra::from_sparse(self.field, self.labels.clone(), mult, self.unit.clone());
        a.idempotents = self.idempotents.clone();
        a
    }

    /// `b ⊗ a^op`, whose right modules are the `a`-`b`-bimodules. The basis
    /// element at index `j * dim(a) + i` is `b_j ⊗ a_i`.
    pub fn enveloping(a: &Algebra, b: &Algebra) -> Result<Algebra, AlgebraError> {
        if a.field != b.field {
            return Err(AlgebraError::FieldMismatch(a.field, b.field));
        }
        let (da, db) = (a.dim, b.dim);
        let n = da * db;
        let mut mult = vec![vec![Vec::new(); n]; n];
        for j in 0..db {
            for i in 0..da {
                for l in 0..db {
                    for k in 0..da {
                        let mut entry = Vec::new();
                        for (p, c) in &b.mult[j][l] {
                            for (q, d) in &a.mult[k][i] {
                                entry.push((p * da + q, c * d));
                            }
                        }
                        entry.sort_by_key(|e| e.0);
                        mult[j * da + i][l * da + k] = entry;
                    }
                }
            }
        }
        let mut unit = a.field.vec_zero(n);
        for (p, c) in b.unit.iter().enumerate() {
            for (q, d) in a.unit.iter().enumerate() {
                if !c.is_zero() && !d.is_zero() {
                    unit[p * da + q] = c * d;
                }
            }
        }
        let labels = (0..n).map(|x| format!("{}⊗{}", b.labels[x / da.max(1)], a.labels[x % da.max(1)])).collect();
        Ok(Algebra::from_sparse(a.field, labels, mult, unit))
    }

    /// Linear span of `{x y : x in xs, y in ys}`.
    pub fn product_span(&self, xs: &[Vector], ys: &[Vector]) -> RowSpace {
        let mut s = RowSpace::new(self.field, self.dim);
        for x in xs {
            for y in ys {
                s.insert(self.mul(x, y));
            }
        }
        s
    }

    fn trace_of_right_mult(&self, l: usize) -> Scalar {
        let mut t = self.field.zero();
        for i in 0..self.dim {
            for (k, c) in &self.mult[i][l] {
                if *k == i {
                    t = &t + c;
                }
            }
        }
        t
    }

    /// Basis of the Jacobson radical via the trace form, in echelon form.
    pub fn radical(&self) -> Result<Vec<Vector>, AlgebraError> {
        self.caches.radical.get_or_init(|| self.compute_radical()).clone()
    }

    fn compute_radical(&self) -> Result<Vec<Vector>, AlgebraError> {
        let p = self.field.characteristic();
        if p != 0 && p <= self.dim as u64 {
            return Err(AlgebraError::UnsupportedCharacteristic { p, dim: self.dim });
        }
        let traces: Vec<Scalar> = (0..self.dim).map(|l| self.trace_of_right_mult(l)).collect();
        let mut gram = Matrix::zeros(self.field, self.dim, self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let mut s = self.field.zero();
                for (l, c) in &self.mult[i][j] {
                    s.add_mul_assign(c, &traces[*l]);
                }
                gram.set(i, j, s);
            }
        }
        let rad = gram.left_kernel().row_vectors();
        if self.nilpotency_index(&rad).is_none() {
            return Err(AlgebraError::NotSplit);
        }
        Ok(rad)
    }

    /// The least `n >= 1` with `span(s)^n = 0` (0 when `s` spans zero), if
    /// the span is nilpotent at all.
    pub fn nilpotency_index(&self, s: &[Vector]) -> Option<usize> {
        let mut power = RowSpace::from_rows(self.field, self.dim, s.iter().cloned());
        if power.dim() == 0 {
            return Some(0);
        }
        for n in 1..=self.dim {
            let next = self.product_span(power.basis(), s);
            if next.dim() == 0 {
                return Some(n + 1);
            }
            power = next;
        }
        None
    }

    /// Quotient map onto `A / ideal`.
    pub fn quotient_surjection(self: &Arc<Self>, ideal: &[Vector]) -> Result<SurjectionData, AlgebraError> {
        let a = self;
        let space = RowSpace::from_rows(a.field, a.dim, ideal.iter().cloned());
        for r in space.basis() {
            for i in 0..a.dim {
                let b = a.basis(i);
                if !space.contains(&a.mul(&b, r)) {
                    return Err(AlgebraError::NotAnIdeal(format!("{} * (ideal element) leaves the span", a.labels[i])));
                }
                if !space.contains(&a.mul(r, &b)) {
                    return Err(AlgebraError::NotAnIdeal(format!("(ideal element) * {} leaves the span", a.labels[i])));
                }
            }
        }
        let comp = space.complement_columns();
        let project = |v: &[Scalar]| -> Vector {
            let r = space.reduce(v);
            comp.iter().map(|&c| r[c].clone()).collect()
        };
        let rows: Vec<Vector> = (0..a.dim).map(|i| project(&a.basis(i))).collect();
        let matrix = Matrix::from_rows(a.field, comp.len(), rows);
        let mult = comp.iter().map(|&c| comp.iter().map(|&d| to_sparse(&project(&a.product(c, d)))).collect()).collect();
        let labels = comp.iter().map(|&c| a.labels[c].clone()).collect();
        let mut target = Algebra::from_sparse(a.field, labels, mult, project(&a.unit));
        target.idempotents = a
            .idempotents
            .iter()
            .map(|t| TaggedIdempotent { role: t.role.clone(), element: project(&t.element) })
            .filter(|t| !vec_is_zero(&t.element))
            .collect();
        Ok(SurjectionData { source: Arc::clone(a), target: Arc::new(target), matrix, kernel: space.basis().to_vec() })
    }

    /// A complete set of orthogonal primitive idempotents refining the
    /// recorded ones.
    pub fn primitive_idempotents(&self) -> Result<&Primitives, AlgebraError> {
        self.caches.primitives.get_or_init(|| self.lift_idempotents()).as_ref().map_err(Clone::clone)
    }

    fn lift_idempotents(&self) -> Result<Primitives, AlgebraError> {
        if vec_is_zero(&self.unit) {
            return Ok(Primitives { elements: vec![], origin: vec![], class: vec![], reps: vec![] });
        }
        let rad = self.radical()?;
        let this = Arc::new(self.clone_without_caches());
        let quot = this.quotient_surjection(&rad)?;
        let mut start: Vec<(Vector, Option<usize>)> =
            self.idempotents.iter().enumerate().map(|(k, t)| (t.element.clone(), Some(k))).collect();
        let mut rest = self.unit.clone();
        for (e, _) in &start {
            rest = vec_sub(&rest, e);
        }
        if !vec_is_zero(&rest) {
            start.push((rest, None));
        }
        let mut elements = Vec::new();
        let mut origin = Vec::new();
        for (e, o) in start {
            for p in self.refine(&quot, e)? {
                elements.push(p);
                origin.push(o);
            }
        }
        let n = elements.len();
        let mut class = vec![usize::MAX; n];
        let mut reps = Vec::new();
        let bar: Vec<Vector> = elements.iter().map(|e| quot.apply(e)).collect();
        let b = &quot.target;
        for i in 0..n {
            if class[i] != usize::MAX {
                continue;
            }
            class[i] = reps.len();
            for j in i + 1..n {
                if class[j] == usize::MAX && !b.corner_is_zero(&bar[i], &bar[j]) {
                    class[j] = reps.len();
                }
            }
            reps.push(i);
        }
        Ok(Primitives { elements, origin, class, reps })
    }

    fn clone_without_caches(&self) -> Algebra {
        let mut a = Algebra::from_sparse(self.field, self.labels.clone(), self.mult.clone(), self.unit.clone());
        a.idempotents = self.idempotents.clone();
        a
    }

    /// Whether `e A f = 0`.
    pub fn corner_is_zero(&self, e: &[Scalar], f: &[Scalar]) -> bool {
        (0..self.dim).all(|k| vec_is_zero(&self.mul(&self.mul(e, &self.basis(k)), f)))
    }

    /// Basis of the Peirce component `e A f`, in echelon form.
    pub fn corner(&self, e: &[Scalar], f: &[Scalar]) -> RowSpace {
        let mut s = RowSpace::new(self.field, self.dim);
        for k in 0..self.dim {
            s.insert(self.mul(&self.mul(e, &self.basis(k)), f));
        }
        s
    }

    fn refine(&self, quot: &SurjectionData, e: Vector) -> Result<Vec<Vector>, AlgebraError> {
        let b = &quot.target;
        let ebar = quot.apply(&e);
        let corner = b.corner(&ebar, &ebar);
        if corner.dim() <= 1 {
            return Ok(vec![e]);
        }
        let basis = corner.basis().to_vec();
        let f = split_corner(b, &ebar, &basis).ok_or(AlgebraError::NotSplit)?;
        let lift = self.mul(&self.mul(&e, &quot.lift(&f)), &e);
        let a = self.purify(lift)?;
        let mut out = self.refine(quot, a.clone())?;
        out.extend(self.refine(quot, vec_sub(&e, &a))?);
        Ok(out)
    }

    /// Newton iteration `a <- 3a^2 - 2a^3` towards an idempotent.
    fn purify(&self, mut a: Vector) -> Result<Vector, AlgebraError> {
        let three = self.field.from_i64(3);
        let minus_two = self.field.from_i64(-2);
        for _ in 0..64 {
            let a2 = self.mul(&a, &a);
            if a2 == a {
                return Ok(a);
            }
            let a3 = self.mul(&a2, &a);
            let mut next = self.zero_element();
            axpy(&mut next, &three, &a2);
            axpy(&mut next, &minus_two, &a3);
            a = next;
        }
        Err(AlgebraError::NotSplit)
    }

    /// Generators of the algebra lying in Peirce components `e_p A e_q` of
    /// the primitive idempotents (the idempotents themselves included).
    pub fn generators(&self) -> Result<&[Generator], AlgebraError> {
        self.caches.generators.get_or_init(|| self.compute_generators()).as_deref().map_err(Clone::clone)
    }

    fn compute_generators(&self) -> Result<Vec<Generator>, AlgebraError> {
        let prims = self.primitive_idempotents()?;
        let rad = self.radical()?;
        let mut span = self.product_span(&rad, &rad);
        let mut gens: Vec<Generator> =
            prims.elements.iter().enumerate().map(|(k, e)| Generator { from: k, to: k, element: e.clone() }).collect();
        for e in &prims.elements {
            span.insert(e.clone());
        }
        'outer: for (p, e) in prims.elements.iter().enumerate() {
            for (q, f) in prims.elements.iter().enumerate() {
                if span.dim() == self.dim {
                    break 'outer;
                }
                let c = self.corner(e, f);
                for v in c.basis() {
                    if span.insert(v.clone()) {
                        gens.push(Generator { from: p, to: q, element: v.clone() });
                    }
                }
            }
        }
        if span.dim() != self.dim {
            return Err(AlgebraError::NotSplit);
        }
        Ok(gens)
    }

    /// Echelon bases of the indecomposable projectives `e_k A`, one per
    /// primitive idempotent.
    pub fn projective_bases(&self) -> Result<&[RowSpace], AlgebraError> {
        self.caches
            .projective_bases
            .get_or_init(|| Ok(self.primitive_idempotents()?.elements.iter().map(|e| self.right_ideal(e)).collect()))
            .as_deref()
            .map_err(Clone::clone)
    }

    /// The opposite algebra, shared between calls.
    pub fn opposite_arc(&self) -> Arc<Algebra> {
        Arc::clone(self.caches.opposite.get_or_init(|| Arc::new(self.opposite())))
    }

    pub(crate) fn self_injective_with(&self, decide: impl FnOnce() -> bool) -> bool {
        *self.caches.self_injective.get_or_init(decide)
    }

    /// Whether two algebras have identical structure constants.
    pub fn same_as(self: &Arc<Self>, other: &Arc<Algebra>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }

    /// The subspace `e A` for an element `e`, in echelon form.
    pub fn right_ideal(&self, e: &[Scalar]) -> RowSpace {
        let mut s = RowSpace::new(self.field, self.dim);
        for k in 0..self.dim {
            s.insert(self.mul(e, &self.basis(k)));
        }
        s
    }
}

/// Finds an idempotent `f` of the corner `B = ē Ā ē` with `0 != f != ē`.
fn split_corner(b: &Algebra, ebar: &[Scalar], basis: &[Vector]) -> Option<Vector> {
    let field = b.field;
    let mut candidates: Vec<Vector> = basis.to_vec();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            candidates.push(crate::exactlin::vec_add(&basis[i], &basis[j]));
        }
    }
    let dim = basis.len();
    let proper_ideal = |x: &Vector| -> Option<RowSpace> {
        if vec_is_zero(x) {
            return None;
        }
        let s = b.product_span(std::slice::from_ref(x), basis);
        (s.dim() > 0 && s.dim() < dim).then_some(s)
    };
    for x in &candidates {
        if let Some(s) = proper_ideal(x) {
            return idempotent_generator(b, &s);
        }
    }
    for x in &candidates {
        if RowSpace::from_rows(field, b.dim, [x.clone(), ebar.to_vec()]).dim() < 2 {
            continue;
        }
        for lambda in roots_of_min_poly(b, ebar, x) {
            let mut y = x.clone();
            axpy(&mut y, &-&lambda, ebar);
            if let Some(s) = proper_ideal(&y) {
                return idempotent_generator(b, &s);
            }
        }
    }
    None
}

/// The idempotent `f` in a right ideal `I = fB` of a semisimple algebra,
/// found by solving `f y = y` for all `y` in `I`.
fn idempotent_generator(b: &Algebra, ideal: &RowSpace) -> Option<Vector> {
    let ys = ideal.basis();
    let r = ys.len();
    let mut lhs = Matrix::zeros(b.field, r, 0);
    let mut rhs = Vec::new();
    for yj in ys {
        let block = Matrix::from_rows(b.field, b.dim, ys.iter().map(|yk| b.mul(yk, yj)).collect());
        lhs = lhs.hstack(&block);
        rhs.extend(yj.iter().cloned());
    }
    let c = lhs.solve_left(&rhs)?;
    let mut f = b.zero_element();
    for (ck, yk) in c.iter().zip(ys) {
        axpy(&mut f, ck, yk);
    }
    Some(f)
}

/// Roots in the base field of the minimal polynomial of `x` in the corner
/// algebra with unit `e`.
fn roots_of_min_poly(b: &Algebra, e: &[Scalar], x: &[Scalar]) -> Vec<Scalar> {
    let field = b.field;
    let mut powers: Vec<Vector> = vec![e.to_vec()];
    let coeffs = loop {
        let next = b.mul(powers.last().expect("nonempty"), x);
        let m = Matrix::from_rows(field, b.dim, powers.clone());
        if let Some(c) = m.solve_left(&next) {
            break c;
        }
        powers.push(next);
        if powers.len() > b.dim + 1 {
            return Vec::new();
        }
    };
    // x^n = Σ c_k x^k, so the polynomial is X^n - Σ c_k X^k.
    let mut poly: Vec<Scalar> = coeffs.iter().map(|c| -c).collect();
    poly.push(field.one());
    let eval = |t: &Scalar| -> Scalar {
        let mut acc = field.zero();
        for c in poly.iter().rev() {
            acc = &(&acc * t) + c;
        }
        acc
    };
    let candidates: Vec<Scalar> = match field {
        Field::Prime(p) if p <= 100_000 => (0..p as i64).map(|v| field.from_i64(v)).collect(),
        Field::Prime(_) => Vec::new(),
        Field::Rational => rational_root_candidates(&poly),
    };
    candidates.into_iter().filter(|t| eval(t).is_zero()).collect()
}

fn rational_root_candidates(poly: &[Scalar]) -> Vec<Scalar> {
    let mut lcm = BigInt::from(1);
    for c in poly {
        if let Scalar::Rat(r) = c {
            lcm = lcm.lcm(r.denom());
        }
    }
    let ints: Vec<BigInt> = poly
        .iter()
        .map(|c| match c {
            Scalar::Rat(r) => (r * num_rational::BigRational::from_integer(lcm.clone())).to_integer(),
            Scalar::Mod { .. } => unreachable!(),
        })
        .collect();
    let low = ints.iter().position(|c| !c.is_zero());
    let Some(low) = low else { return Vec::new() };
    let mut out = vec![Field::Rational.zero()];
    let divisors = |n: &BigInt| -> Vec<i64> {
        let n = n.abs().to_i64().unwrap_or(0);
        if n == 0 || n > 1_000_000 {
            return Vec::new();
        }
        (1..=n).filter(|d| n % d == 0).collect()
    };
    let ps = divisors(&ints[low]);
    let qs = divisors(ints.last().expect("monic"));
    for p in &ps {
        for q in &qs {
            for s in [1, -1] {
                let v = Field::Rational.from_ratio(BigInt::from(s * p), BigInt::from(*q)).expect("q > 0");
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
    }
    out
}

/// A surjective algebra map `p : A -> B` with its kernel.
#[derive(Clone, Debug)]
pub struct SurjectionData {
    pub source: Arc<Algebra>,
    pub target: Arc<Algebra>,
    /// `dim A x dim B`; row `i` holds `p(a_i)`.
    pub matrix: Matrix,
    /// Echelon basis of `ker p`.
    pub kernel: Vec<Vector>,
}

impl SurjectionData {
    /// Validates that `matrix` describes a surjective unital algebra map.
    pub fn new(source: Arc<Algebra>, target: Arc<Algebra>, matrix: Matrix) -> Result<SurjectionData, AlgebraError> {
        if matrix.rows() != source.dim || matrix.cols() != target.dim {
            return Err(AlgebraError::Shape("surjection matrix has the wrong shape".into()));
        }
        let s = SurjectionData { kernel: matrix.left_kernel().row_vectors(), source, target, matrix };
        if s.apply(s.source.unit()) != *s.target.unit() {
            return Err(AlgebraError::NotASurjection("p(1) != 1".into()));
        }
        for i in 0..s.source.dim {
            for j in 0..s.source.dim {
                let lhs = s.apply(&s.source.product(i, j));
                let rhs = s.target.mul(&s.apply(&s.source.basis(i)), &s.apply(&s.source.basis(j)));
                if lhs != rhs {
                    return Err(AlgebraError::NotASurjection(format!("p(b{i} b{j}) != p(b{i}) p(b{j})")));
                }
            }
        }
        if s.matrix.rank() != s.target.dim {
            return Err(AlgebraError::NotASurjection("not onto".into()));
        }
        Ok(s)
    }

    pub fn identity(a: Arc<Algebra>) -> SurjectionData {
        let m = Matrix::identity(a.field, a.dim);
        SurjectionData { source: Arc::clone(&a), target: a, matrix: m, kernel: Vec::new() }
    }

    pub fn apply(&self, x: &[Scalar]) -> Vector {
        self.matrix.left_apply(x)
    }

    /// Some preimage of `y`.
    pub fn lift(&self, y: &[Scalar]) -> Vector {
        self.matrix.solve_left(y).expect("surjective")
    }

    pub fn kernel_dim(&self) -> usize {
        self.kernel.len()
    }

    pub fn is_identity(&self) -> bool {
        self.kernel.is_empty()
    }
}

/// A path in a quiver, composed left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A quiver with relations; each relation is a linear combination of
/// parallel paths.
#[derive(Debug, Clone)]
pub struct QuiverPresentation {
    pub field: Field,
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub relations: Vec<Vec<(Scalar, Path)>>,
}

pub const DEFAULT_PATH_CAP: usize = 64;

impl QuiverPresentation {
    /// A path from arrow names, e.g. `["a", "b"]` for `a` followed by `b`.
    pub fn path(&self, names: &[&str]) -> Result<Path, AlgebraError> {
        let mut arrows = Vec::new();
        for n in names {
            let idx = self
                .arrows
                .iter()
                .position(|a| a.name == *n)
                .ok_or_else(|| AlgebraError::MalformedRelation(format!("unknown arrow {n}")))?;
            arrows.push(idx);
        }
        let first = arrows.first().ok_or_else(|| AlgebraError::MalformedRelation("empty path".into()))?;
        let p = Path { source: self.arrows[*first].source, target: self.arrows[*arrows.last().unwrap()].target, arrows };
        self.check_path(&p)?;
        Ok(p)
    }

    pub fn trivial_path(&self, v: usize) -> Path {
        Path { source: v, target: v, arrows: Vec::new() }
    }

    fn check_path(&self, p: &Path) -> Result<(), AlgebraError> {
        if p.source >= self.vertices.len() || p.target >= self.vertices.len() {
            return Err(AlgebraError::MalformedRelation("vertex out of range".into()));
        }
        let mut at = p.source;
        for &a in &p.arrows {
            let arrow = self.arrows.get(a).ok_or_else(|| AlgebraError::MalformedRelation(format!("arrow index {a} out of range")))?;
            if arrow.source != at {
                return Err(AlgebraError::MalformedRelation(format!("arrow {} does not start at {}", arrow.name, self.vertices[at])));
            }
            at = arrow.target;
        }
        if at != p.target {
            return Err(AlgebraError::MalformedRelation("path endpoint mismatch".into()));
        }
        Ok(())
    }

    fn path_label(&self, p: &Path) -> String {
        if p.arrows.is_empty() {
            format!("e{}", self.vertices[p.source])
        } else {
            p.arrows.iter().map(|&a| self.arrows[a].name.as_str()).collect::<Vec<_>>().join("")
        }
    }

    fn compose(&self, p: &Path, q: &Path) -> Option<Path> {
        if p.target != q.source {
            return None;
        }
        let mut arrows = p.arrows.clone();
        arrows.extend(&q.arrows);
        Some(Path { source: p.source, target: q.target, arrows })
    }

    /// All paths of length exactly `n`.
    fn paths_of_length(&self, n: usize) -> Vec<Path> {
        let mut layer: Vec<Path> = (0..self.vertices.len()).map(|v| self.trivial_path(v)).collect();
        for _ in 0..n {
            let mut next = Vec::new();
            for p in &layer {
                for (ai, a) in self.arrows.iter().enumerate() {
                    if a.source == p.target {
                        let mut arrows = p.arrows.clone();
                        arrows.push(ai);
                        next.push(Path { source: p.source, target: a.target, arrows });
                    }
                }
            }
            layer = next;
        }
        layer
    }

    /// Builds `kQ / I`, with `I` the ideal generated by the relations.
    pub fn to_algebra(&self, cap: usize) -> Result<Algebra, AlgebraError> {
        for (ri, r) in self.relations.iter().enumerate() {
            let Some((_, first)) = r.first() else {
                return Err(AlgebraError::MalformedRelation(format!("relation {ri} is empty")));
            };
            for (c, p) in r {
                self.check_path(p)?;
                if c.field() != self.field {
                    return Err(AlgebraError::FieldMismatch(self.field, c.field()));
                }
                if (p.source, p.target) != (first.source, first.target) {
                    return Err(AlgebraError::MalformedRelation(format!("relation {ri} mixes non-parallel paths")));
                }
            }
        }
        let max_rel = self.relations.iter().flat_map(|r| r.iter().map(|(_, p)| p.arrows.len())).max().unwrap_or(0);
        let min_rel = self.relations.iter().flat_map(|r| r.iter().map(|(_, p)| p.arrows.len())).min().unwrap_or(0);
        for n in 1..=cap {
            let layers: Vec<Vec<Path>> = (0..=n).map(|k| self.paths_of_length(k)).collect();
            let all: Vec<Path> = layers.iter().flatten().cloned().collect();
            // Columns ordered longest first so that echelon pivots land on long paths.
            let mut order: Vec<usize> = (0..all.len()).collect();
            order.sort_by(|&x, &y| all[y].arrows.len().cmp(&all[x].arrows.len()).then(x.cmp(&y)));
            let mut col_of = std::collections::HashMap::new();
            for (col, &i) in order.iter().enumerate() {
                col_of.insert(all[i].clone(), col);
            }
            let width = all.len();
            let mut ideal = RowSpace::new(self.field, width);
            let mut truncated = RowSpace::new(self.field, width);
            for r in &self.relations {
                for ul in 0..=n {
                    for vl in 0..=n - ul {
                        if ul + vl + min_rel > n && ul + vl + max_rel > n {
                            continue;
                        }
                        for u in &layers[ul] {
                            for v in &layers[vl] {
                                let mut full = self.field.vec_zero(width);
                                let mut short = self.field.vec_zero(width);
                                let mut fits = true;
                                for (c, p) in r {
                                    let Some(up) = self.compose(u, p) else { continue };
                                    let Some(upv) = self.compose(&up, v) else { continue };
                                    let len = upv.arrows.len();
                                    if len > n {
                                        fits = false;
                                        continue;
                                    }
                                    let col = col_of[&upv];
                                    full[col] = &full[col] + c;
                                    if len < n {
                                        short[col] = &short[col] + c;
                                    }
                                }
                                if fits {
                                    ideal.insert(full);
                                }
                                truncated.insert(short);
                            }
                        }
                    }
                }
            }
            let closed = layers[n].iter().all(|p| ideal.contains(&self.field.unit_vector(width, col_of[p])));
            if !closed {
                continue;
            }
            for p in &layers[n] {
                truncated.insert(self.field.unit_vector(width, col_of[p]));
            }
            return Ok(self.quotient_algebra(&all, &col_of, &truncated, n));
        }
        Err(AlgebraError::InfiniteDimensional(cap))
    }

    fn quotient_algebra(&self, all: &[Path], col_of: &std::collections::HashMap<Path, usize>, ideal: &RowSpace, n: usize) -> Algebra {
        let pivots: std::collections::HashSet<usize> = ideal.pivots().iter().copied().collect();
        let basis: Vec<&Path> = all.iter().filter(|p| p.arrows.len() < n && !pivots.contains(&col_of[*p])).collect();
        let idx_of_col: std::collections::HashMap<usize, usize> = basis.iter().enumerate().map(|(i, p)| (col_of[*p], i)).collect();
        let dim = basis.len();
        let width = all.len();
        let express = |p: Option<Path>| -> Sparse {
            let Some(p) = p else { return Vec::new() };
            if p.arrows.len() >= n {
                return Vec::new();
            }
            let r = ideal.reduce(&self.field.unit_vector(width, col_of[&p]));
            let mut out: Sparse = r.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(c, x)| (idx_of_col[&c], x.clone())).collect();
            out.sort_by_key(|e| e.0);
            out
        };
        let mult: Vec<Vec<Sparse>> = basis.iter().map(|p| basis.iter().map(|q| express(self.compose(p, q))).collect()).collect();
        let mut unit = self.field.vec_zero(dim);
        let mut idems = Vec::new();
        for v in 0..self.vertices.len() {
            let e = express(Some(self.trivial_path(v)));
            let mut vec = self.field.vec_zero(dim);
            for (k, c) in e {
                vec[k] = c.clone();
                unit[k] = &unit[k] + &c;
            }
            if !vec_is_zero(&vec) {
                idems.push(TaggedIdempotent { role: IdempotentRole::Vertex(v), element: vec });
            }
        }
        let labels = basis.iter().map(|p| self.path_label(p)).collect();
        let mut a = Algebra::from_sparse(self.field, labels, mult, unit);
        a.idempotents = idems;
        a
    }
}

/// Builds an algebra from a quiver with relations (paths compose left to
/// right) with the default path-length cap.
pub fn from_quiver(q: &QuiverPresentation) -> Result<Algebra, AlgebraError> {
    q.to_algebra(DEFAULT_PATH_CAP)
}

/// The path algebra of the cyclic quiver on `n` vertices modulo all paths of
/// length `len`; the self-injective Nakayama algebra with Loewy length `len`.
pub fn cyclic_nakayama(field: Field, n: usize, len: usize) -> Algebra {
    let vertices = (1..=n).map(|v| v.to_string()).collect();
    let arrows: Vec<Arrow> = (0..n).map(|i| Arrow { name: arrow_name(i), source: i, target: (i + 1) % n }).collect();
    let mut q = QuiverPresentation { field, vertices, arrows, relations: Vec::new() };
    for s in 0..n {
        let arrows = (0..len).map(|k| (s + k) % n).collect();
        q.relations.push(vec![(field.one(), Path { source: s, target: (s + len) % n, arrows })]);
    }
    q.to_algebra(DEFAULT_PATH_CAP).expect("Nakayama algebras are finite-dimensional")
}

fn arrow_name(i: usize) -> String {
    let letters = "abcdefghijklmnopqrstuvwxyz";
    match letters.chars().nth(i) {
        Some(c) => c.to_string(),
        None => format!("a{i}"),
    }
}

/// The path algebra of `1 -> 2`, i.e. upper-triangular 2x2 matrices, with
/// basis `e1, e2, a`.
pub fn upper_triangular_2(field: Field) -> Algebra {
    let quiver = QuiverPresentation {
        field,
        vertices: vec!["1".into(), "2".into()],
        arrows: vec![Arrow { name: "a".into(), source: 0, target: 1 }],
        relations: vec![],
    };
    from_quiver(&quiver).expect("A2 is finite-dimensional")
}

/// The truncated polynomial ring `k[x]/(x^n)` with basis `1, x, ..., x^{n-1}`.
pub fn truncated_polynomial(field: Field, n: usize) -> Algebra {
    let mult = (0..n).map(|i| (0..n).map(|j| if i + j < n { field.unit_vector(n, i + j) } else { field.vec_zero(n) }).collect()).collect();
    let labels = (0..n)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        })
        .collect();
    Algebra::with_labels(field, labels, mult, field.unit_vector(n, 0)).expect("valid table")
}
