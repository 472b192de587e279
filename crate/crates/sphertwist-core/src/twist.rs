//! Bounded complexes of right modules, their projective and injective
//! replacements, and the twist `T = RHom_A(ker p, −)` around a surjection
//! of algebras.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{Algebra, AlgebraError};
use crate::exactlin::{Field, Matrix, RowSpace, Vector};
use crate::modules::{free_hom_from_images, hom_basis, Module, ModuleError, ModuleHom};
use crate::resolutions::ResolutionError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TwistError {
    #[error("differentials compose to a nonzero map at degree {0}")]
    NotAComplex(i64),
    #[error("not a chain map: square at degree {0} does not commute")]
    NotAChainMap(i64),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("replacement did not terminate within {cap} steps")]
    CapExceeded { cap: usize },
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
}

/// A bounded cochain complex `C^lo → … → C^hi` of right modules, with
/// `diffs[i] : C^{lo+i} → C^{lo+i+1}`.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    algebra: Arc<Algebra>,
    lo: i64,
    terms: Vec<Module>,
    diffs: Vec<Matrix>,
}

impl ChainComplex {
    pub fn new(algebra: Arc<Algebra>, lo: i64, terms: Vec<Module>, diffs: Vec<Matrix>) -> Result<ChainComplex, TwistError> {
        if diffs.len() + 1 != terms.len().max(1) {
            return Err(TwistError::Shape("need one differential between consecutive terms".into()));
        }
        for (i, d) in diffs.iter().enumerate() {
            ModuleHom::new(terms[i].clone(), terms[i + 1].clone(), d.clone())?;
        }
        for t in &terms {
            if !t.algebra().same_as(&algebra) {
                return Err(ModuleError::AlgebraMismatch.into());
            }
        }
        let c = ChainComplex { algebra, lo, terms, diffs };
        for i in 1..c.diffs.len() {
            if !c.diffs[i - 1].mul(&c.diffs[i]).is_zero() {
                return Err(TwistError::NotAComplex(lo + i as i64 - 1));
            }
        }
        Ok(c.trimmed())
    }

    fn from_parts(algebra: Arc<Algebra>, lo: i64, terms: Vec<Module>, diffs: Vec<Matrix>) -> ChainComplex {
        ChainComplex { algebra, lo, terms, diffs }.trimmed()
    }

    fn trimmed(mut self) -> ChainComplex {
        while self.terms.last().is_some_and(|t| t.dim() == 0) {
            self.terms.pop();
            self.diffs.pop();
        }
        while self.terms.first().is_some_and(|t| t.dim() == 0) {
            self.terms.remove(0);
            if !self.diffs.is_empty() {
                self.diffs.remove(0);
            }
            self.lo += 1;
        }
        if self.terms.is_empty() {
            self.lo = 0;
            self.diffs.clear();
        }
        self
    }

    pub fn zero(algebra: Arc<Algebra>) -> ChainComplex {
        ChainComplex { algebra, lo: 0, terms: vec![], diffs: vec![] }
    }

    /// `m` placed in degree `degree`.
    pub fn concentrated(m: &Module, degree: i64) -> ChainComplex {
        ChainComplex::from_parts(Arc::clone(m.algebra()), degree, vec![m.clone()], vec![])
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `[lo, hi]` of nonzero terms, or `None` for the zero complex.
    pub fn window(&self) -> Option<(i64, i64)> {
        (!self.terms.is_empty()).then(|| (self.lo, self.lo + self.terms.len() as i64 - 1))
    }

    pub fn term(&self, k: i64) -> Module {
        match self.index(k) {
            Some(i) => self.terms[i].clone(),
            None => Module::zero(Arc::clone(&self.algebra)),
        }
    }

    pub fn dim_at(&self, k: i64) -> usize {
        self.index(k).map_or(0, |i| self.terms[i].dim())
    }

    fn index(&self, k: i64) -> Option<usize> {
        let i = k - self.lo;
        (i >= 0 && (i as usize) < self.terms.len()).then_some(i as usize)
    }

    /// `d^k : C^k → C^{k+1}`.
    pub fn diff(&self, k: i64) -> Matrix {
        match self.index(k) {
            Some(i) if i < self.diffs.len() => self.diffs[i].clone(),
            _ => Matrix::zeros(self.field(), self.dim_at(k), self.dim_at(k + 1)),
        }
    }

    /// `C[n]`: `C[n]^k = C^{k+n}` with differential `(−1)^n d`.
    pub fn shift(&self, n: i64) -> ChainComplex {
        let diffs = if n % 2 == 0 { self.diffs.clone() } else { self.diffs.iter().map(|d| d.scale(&-&self.field().one())).collect() };
        ChainComplex { algebra: Arc::clone(&self.algebra), lo: self.lo - n, terms: self.terms.clone(), diffs }
    }

    pub fn cohomology_dim(&self, k: i64) -> usize {
        self.dim_at(k) - self.diff(k).rank() - self.diff(k - 1).rank()
    }

    /// `(degree, dim H^degree)` over the window, zeros included.
    pub fn cohomology_dims(&self) -> Vec<(i64, usize)> {
        match self.window() {
            Some((lo, hi)) => (lo..=hi).map(|k| (k, self.cohomology_dim(k))).collect(),
            None => vec![],
        }
    }

    pub fn total_cohomology(&self) -> usize {
        self.cohomology_dims().iter().map(|(_, d)| d).sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cohomology_dims().iter().map(|&(k, d)| if k % 2 == 0 { d as i64 } else { -(d as i64) }).sum()
    }

    /// The complex of duals `D(C)^k = D(C^{−k})` over `algebra`, which must be
    /// the opposite of this complex's algebra.
    pub fn dual_over(&self, algebra: Arc<Algebra>) -> ChainComplex {
        let Some((lo, hi)) = self.window() else { return ChainComplex::zero(algebra) };
        let terms = (lo..=hi).rev().map(|k| self.term(k).dual_over(Arc::clone(&algebra))).collect();
        let diffs = (lo..hi).rev().map(|k| self.diff(k).transpose()).collect();
        ChainComplex::from_parts(algebra, -hi, terms, diffs)
    }

    pub fn dual(&self) -> ChainComplex {
        self.dual_over(self.algebra.opposite_arc())
    }
}

/// A chain map given degree-wise; missing degrees are zero.
#[derive(Debug, Clone)]
pub struct ChainMap {
    pub source: ChainComplex,
    pub target: ChainComplex,
    pub components: BTreeMap<i64, Matrix>,
}

impl ChainMap {
    pub fn new(source: ChainComplex, target: ChainComplex, components: BTreeMap<i64, Matrix>) -> Result<ChainMap, TwistError> {
        let f = ChainMap { source, target, components };
        for (&k, m) in &f.components {
            ModuleHom::new(f.source.term(k), f.target.term(k), m.clone())?;
        }
        let degrees = f.degrees();
        for &k in &degrees {
            let lhs = f.component(k).mul(&f.target.diff(k));
            let rhs = f.source.diff(k).mul(&f.component(k + 1));
            if lhs != rhs {
                return Err(TwistError::NotAChainMap(k));
            }
        }
        Ok(f)
    }

    fn degrees(&self) -> Vec<i64> {
        let mut ks: Vec<i64> = Vec::new();
        for c in [&self.source, &self.target] {
            if let Some((lo, hi)) = c.window() {
                ks.extend(lo - 1..=hi);
            }
        }
        ks.sort_unstable();
        ks.dedup();
        ks
    }

    pub fn component(&self, k: i64) -> Matrix {
        self.components.get(&k).cloned().unwrap_or_else(|| Matrix::zeros(self.source.field(), self.source.dim_at(k), self.target.dim_at(k)))
    }

    pub fn identity(c: &ChainComplex) -> ChainMap {
        let components = match c.window() {
            Some((lo, hi)) => (lo..=hi).map(|k| (k, Matrix::identity(c.field(), c.dim_at(k)))).collect(),
            None => BTreeMap::new(),
        };
        ChainMap { source: c.clone(), target: c.clone(), components }
    }

    /// The map induced on `H^k`, as a rank.
    pub fn cohomology_rank(&self, k: i64) -> usize {
        let z = self.source.diff(k).left_kernel();
        let mut img = RowSpace::from_matrix(&self.target.diff(k - 1));
        let base = img.dim();
        img.insert_all(z.mul(&self.component(k)).row_vectors());
        img.dim() - base
    }

    pub fn is_quasi_isomorphism(&self) -> bool {
        self.degrees().iter().all(|&k| {
            let r = self.cohomology_rank(k);
            r == self.source.cohomology_dim(k) && r == self.target.cohomology_dim(k)
        })
    }

    /// The mapping cone: `Cone^k = S^{k+1} ⊕ T^k` with differential
    /// `(s, t) ↦ (−d s, f(s) + d t)`.
    pub fn cone(&self) -> Result<ChainComplex, TwistError> {
        let s = &self.source;
        let t = &self.target;
        let alg = Arc::clone(s.algebra());
        let (lo, hi) = match (s.window(), t.window()) {
            (None, None) => return Ok(ChainComplex::zero(alg)),
            (Some((a, b)), None) => (a - 1, b - 1),
            (None, Some((a, b))) => (a, b),
            (Some((a, b)), Some((c, d))) => ((a - 1).min(c), (b - 1).max(d)),
        };
        let field = s.field();
        let neg = -&field.one();
        let mut terms = Vec::new();
        for k in lo..=hi {
            terms.push(Module::direct_sum(&[s.term(k + 1), t.term(k)])?.sum);
        }
        let mut diffs = Vec::new();
        for k in lo..hi {
            let top = s.diff(k + 1).scale(&neg).hstack(&self.component(k + 1));
            let bottom = Matrix::zeros(field, t.dim_at(k), s.dim_at(k + 2)).hstack(&t.diff(k));
            diffs.push(top.vstack(&bottom));
        }
        Ok(ChainComplex::from_parts(alg, lo, terms, diffs))
    }
}

/// A projective replacement `q : P → C` with free terms.
#[derive(Debug, Clone)]
pub struct Replacement {
    pub complex: ChainComplex,
    pub map: ChainMap,
    /// False when `P` continues below the computed range.
    pub complete: bool,
}

/// Builds `P` from the top degree downwards: `P^k` covers the cycles of
/// `Cone(q)` in degree `k` modulo the image of `C^{k−1}`, which makes the
/// cone exact. Stops `cap` degrees below the bottom of `C`.
pub fn projective_replacement(c: &ChainComplex, cap: usize) -> Result<Replacement, TwistError> {
    let alg = Arc::clone(c.algebra());
    let field = c.field();
    let Some((lo, hi)) = c.window() else {
        return Ok(Replacement { complex: c.clone(), map: ChainMap::identity(c), complete: true });
    };
    let prims = alg.primitive_idempotents()?;
    // Built top-down; index 0 is degree `hi`.
    let mut p_terms: Vec<Module> = Vec::new();
    let mut p_diffs: Vec<Matrix> = Vec::new();
    let mut q: Vec<Matrix> = Vec::new();
    let mut k = hi;
    let mut complete = false;
    loop {
        if k < lo - cap as i64 {
            break;
        }
        let (p_up, d_up, q_up) = match p_terms.last() {
            Some(p) => (p.clone(), p_diffs.last().cloned(), q.last().cloned()),
            None => (Module::zero(Arc::clone(&alg)), None, None),
        };
        let ck = c.term(k);
        let amb = Module::direct_sum(&[p_up.clone(), ck.clone()])?.sum;
        // Cone differential Cone^k = P^{k+1} ⊕ C^k → P^{k+2} ⊕ C^{k+1}.
        let p_up2 = p_terms.len().checked_sub(2).map_or(0, |i| p_terms[i].dim());
        let d_up_m = d_up.unwrap_or_else(|| Matrix::zeros(field, p_up.dim(), p_up2));
        let q_up_m = q_up.unwrap_or_else(|| Matrix::zeros(field, p_up.dim(), c.dim_at(k + 1)));
        let neg = -&field.one();
        let top = d_up_m.scale(&neg).hstack(&q_up_m);
        let bottom = Matrix::zeros(field, ck.dim(), p_up2).hstack(&c.diff(k));
        let cone_d = top.vstack(&bottom);
        let z_rows = cone_d.left_kernel();
        let (z, z_inc) = amb.submodule(&z_rows.row_vectors())?;
        let mut space = RowSpace::new(field, amb.dim());
        for v in z.radical_rows()?.basis() {
            space.insert(z_inc.apply(v));
        }
        let dc = c.diff(k - 1);
        for r in dc.row_vectors() {
            let mut v = field.vec_zero(p_up.dim());
            v.extend(r);
            space.insert(v);
        }
        let mut summands = Vec::new();
        let mut images = Vec::new();
        for &e in &prims.reps {
            for v in z.idempotent_part(&prims.elements[e]).basis() {
                let w = z_inc.apply(v);
                if space.insert(w.clone()) {
                    summands.push(e);
                    images.push(w);
                }
            }
        }
        let pk = Module::free(Arc::clone(&alg), summands)?;
        let psi = free_hom_from_images(&pk, &amb, &images)?;
        let m = psi.matrix();
        let d = m.block(0, pk.dim(), 0, p_up.dim()).scale(&neg);
        let qk = m.block(0, pk.dim(), p_up.dim(), amb.dim());
        let empty = pk.dim() == 0;
        p_terms.push(pk);
        p_diffs.push(d);
        q.push(qk);
        if empty && k <= lo {
            complete = true;
            break;
        }
        k -= 1;
    }
    p_terms.reverse();
    p_diffs.reverse();
    q.reverse();
    let bottom = hi - p_terms.len() as i64 + 1;
    // p_diffs[i] goes from degree bottom+i to bottom+i+1; the top one maps to zero.
    p_diffs.pop();
    let p = ChainComplex::from_parts(Arc::clone(&alg), bottom, p_terms.clone(), p_diffs);
    let mut components = BTreeMap::new();
    for (i, m) in q.into_iter().enumerate() {
        let deg = bottom + i as i64;
        if p.dim_at(deg) > 0 {
            components.insert(deg, m);
        }
    }
    let map = ChainMap { source: p.clone(), target: c.clone(), components };
    Ok(Replacement { complex: p, map, complete })
}

/// An injective replacement `C → J`, as the dual of a projective
/// replacement of `D(C)` over the opposite algebra.
pub fn injective_replacement(c: &ChainComplex, cap: usize) -> Result<(ChainComplex, ChainMap, bool), TwistError> {
    let alg = Arc::clone(c.algebra());
    let dc = c.dual();
    let rep = projective_replacement(&dc, cap)?;
    let j = rep.complex.dual_over(Arc::clone(&alg));
    let mut components = BTreeMap::new();
    for (k, m) in &rep.map.components {
        components.insert(-k, m.transpose());
    }
    let map = ChainMap { source: c.clone(), target: j.clone(), components };
    Ok((j, map, rep.complete))
}

/// `Hom^n(P, D) = ⊕_k Hom(P^k, D^{k+n})` with `d f = f d_D − (−1)^n d_P f`.
pub struct HomComplex {
    pub p: ChainComplex,
    pub d: ChainComplex,
}

/// An element of `Hom^n(P, D)`: one matrix per source degree.
pub type GradedMap = BTreeMap<i64, Matrix>;

impl HomComplex {
    pub fn new(p: ChainComplex, d: ChainComplex) -> HomComplex {
        HomComplex { p, d }
    }

    fn degrees(&self, n: i64) -> Vec<i64> {
        match (self.p.window(), self.d.window()) {
            (Some((a, b)), Some((c, e))) => (a..=b).filter(|k| (c..=e).contains(&(k + n))).collect(),
            _ => vec![],
        }
    }

    pub fn basis(&self, n: i64) -> Result<Vec<GradedMap>, ModuleError> {
        let mut out = Vec::new();
        for k in self.degrees(n) {
            for f in hom_basis(&self.p.term(k), &self.d.term(k + n))? {
                out.push(BTreeMap::from([(k, f)]));
            }
        }
        Ok(out)
    }

    pub fn differential(&self, n: i64, f: &GradedMap) -> GradedMap {
        let field = self.p.field();
        let sign = if n % 2 == 0 { -&field.one() } else { field.one() };
        let mut out: GradedMap = BTreeMap::new();
        for (&k, m) in f {
            let a = m.mul(&self.d.diff(k + n));
            if !a.is_zero() {
                add_into(&mut out, k, a);
            }
            if k > self.p.window().map_or(k, |w| w.0) {
                let b = self.p.diff(k - 1).mul(m).scale(&sign);
                if !b.is_zero() {
                    add_into(&mut out, k - 1, b);
                }
            }
        }
        out
    }

    fn flatten(&self, n: i64, f: &GradedMap) -> Vector {
        let field = self.p.field();
        let mut v = Vec::new();
        if let (Some((a, b)), Some(_)) = (self.p.window(), self.d.window()) {
            for k in a..=b {
                let (r, c) = (self.p.dim_at(k), self.d.dim_at(k + n));
                match f.get(&k) {
                    Some(m) => v.extend(m.to_vector()),
                    None => v.extend(field.vec_zero(r * c)),
                }
            }
        }
        v
    }

    fn flat_len(&self, n: i64) -> usize {
        match self.p.window() {
            Some((a, b)) => (a..=b).map(|k| self.p.dim_at(k) * self.d.dim_at(k + n)).sum(),
            None => 0,
        }
    }

    fn boundaries(&self, n: i64) -> Result<RowSpace, ModuleError> {
        let mut space = RowSpace::new(self.p.field(), self.flat_len(n));
        for f in self.basis(n - 1)? {
            space.insert(self.flatten(n, &self.differential(n - 1, &f)));
        }
        Ok(space)
    }

    /// `dim H^n`.
    pub fn cohomology_dim(&self, n: i64) -> Result<usize, ModuleError> {
        let basis = self.basis(n)?;
        let mut img = RowSpace::new(self.p.field(), self.flat_len(n + 1));
        for f in &basis {
            img.insert(self.flatten(n + 1, &self.differential(n, f)));
        }
        Ok(basis.len() - img.dim() - self.boundaries(n)?.dim())
    }

    /// Rank of the classes of the given cycles in `H^n`.
    pub fn class_rank(&self, n: i64, cycles: &[GradedMap]) -> Result<usize, ModuleError> {
        let mut space = self.boundaries(n)?;
        let base = space.dim();
        for f in cycles {
            space.insert(self.flatten(n, f));
        }
        Ok(space.dim() - base)
    }

    pub fn is_cycle(&self, n: i64, f: &GradedMap) -> bool {
        self.differential(n, f).values().all(Matrix::is_zero)
    }
}

fn add_into(out: &mut GradedMap, k: i64, m: Matrix) {
    match out.get_mut(&k) {
        Some(x) => *x = x.add(&m),
        None => {
            out.insert(k, m);
        }
    }
}

/// `dim Hom_D(C, E[n])` via a projective replacement of `C`.
pub fn derived_hom_dim(c: &ChainComplex, e: &ChainComplex, n: i64, cap: usize) -> Result<usize, TwistError> {
    let rep = projective_replacement(c, cap)?;
    if !rep.complete {
        return Err(TwistError::CapExceeded { cap });
    }
    Ok(HomComplex::new(rep.complex, e.clone()).cohomology_dim(n)?)
}

impl ChainComplex {
    /// Drops every term in degree above `n`.
    pub fn brutal_truncation(&self, n: i64) -> ChainComplex {
        let Some((lo, hi)) = self.window() else { return self.clone() };
        if n >= hi {
            return self.clone();
        }
        if n < lo {
            return ChainComplex::zero(Arc::clone(&self.algebra));
        }
        let keep = (n - lo + 1) as usize;
        ChainComplex::from_parts(Arc::clone(&self.algebra), lo, self.terms[..keep].to_vec(), self.diffs[..keep - 1].to_vec())
    }

    /// `τ≤n C`, with `Z^n = ker d^n` in degree `n`, and the inclusion
    /// matrix `Z^n → C^n`.
    pub fn smart_truncation(&self, n: i64) -> Result<(ChainComplex, Matrix), TwistError> {
        let field = self.field();
        let Some((lo, hi)) = self.window() else {
            return Ok((self.clone(), Matrix::zeros(field, 0, 0)));
        };
        if n >= hi {
            return Ok((self.clone(), Matrix::identity(field, self.dim_at(n))));
        }
        if n < lo {
            return Ok((ChainComplex::zero(Arc::clone(&self.algebra)), Matrix::zeros(field, 0, 0)));
        }
        let (z, inc) = self.term(n).submodule(&self.diff(n).left_kernel().row_vectors())?;
        let inc = inc.matrix().clone();
        let keep = (n - lo) as usize;
        let mut terms = self.terms[..keep].to_vec();
        let mut diffs = self.diffs[..keep.saturating_sub(1)].to_vec();
        if keep > 0 {
            let d = self.diff(n - 1);
            let rows = d.row_vectors().iter().map(|r| inc.solve_left(r).expect("boundaries are cycles")).collect();
            diffs.push(Matrix::from_rows(field, z.dim(), rows));
        }
        terms.push(z);
        Ok((ChainComplex::from_parts(Arc::clone(&self.algebra), lo, terms, diffs), inc))
    }

    /// A projective resolution placed in degrees `−len … 0`.
    pub fn from_resolution(res: &crate::resolutions::Resolution) -> ChainComplex {
        let alg = Arc::clone(res.target.algebra());
        let n = res.terms.len();
        let terms = res.terms.iter().rev().cloned().collect();
        let diffs = (1..n).rev().map(|i| res.maps[i - 1].matrix().clone()).collect();
        ChainComplex::from_parts(alg, -(n as i64 - 1), terms, diffs)
    }
}

/// `Hom_A(M, J^k)` for each degree of `J`, made into right modules through
/// `left`: the family of right-linear endomorphisms of `M` with
/// `F · a_j = left[j] F`.
struct HomInto {
    complex: ChainComplex,
    /// Per degree, the basis of homs (as matrices) and its flattened span.
    bases: BTreeMap<i64, (Vec<Matrix>, RowSpace)>,
}

impl HomInto {
    fn coords(&self, k: i64, f: &Matrix) -> Vector {
        self.bases[&k].1.coords_unchecked(&f.to_vector())
    }

    fn basis(&self, k: i64) -> &[Matrix] {
        self.bases.get(&k).map_or(&[], |b| &b.0)
    }

    /// The matrix of `F ↦ F · g` from degree `k` to degree `k'`.
    fn post_compose(&self, k: i64, k2: i64, g: &Matrix) -> Matrix {
        let field = self.complex.field();
        let cols = self.basis(k2).len();
        let rows = self.basis(k).iter().map(|f| self.coords(k2, &f.mul(g))).collect();
        Matrix::from_rows(field, cols, rows)
    }
}

fn hom_into(m: &Module, left: &[Matrix], j: &ChainComplex) -> Result<HomInto, TwistError> {
    let alg = Arc::clone(j.algebra());
    let field = j.field();
    let mut bases = BTreeMap::new();
    let Some((lo, hi)) = j.window() else {
        return Ok(HomInto { complex: ChainComplex::zero(alg), bases });
    };
    for k in lo..=hi {
        let jk = j.term(k);
        let span = RowSpace::from_rows(field, m.dim() * jk.dim(), hom_basis(m, &jk)?.iter().map(Matrix::to_vector));
        let basis = span.basis().iter().map(|v| Matrix::from_vector(field, m.dim(), jk.dim(), v.clone())).collect();
        bases.insert(k, (basis, span));
    }
    let mut out = HomInto { complex: ChainComplex::zero(Arc::clone(&alg)), bases };
    let mut terms = Vec::new();
    let mut diffs = Vec::new();
    for k in lo..=hi {
        let b = out.basis(k);
        let action = left.iter().map(|l| Matrix::from_rows(field, b.len(), b.iter().map(|f| out.coords(k, &l.mul(f))).collect())).collect();
        terms.push(Module::new(Arc::clone(&alg), b.len(), action)?);
        if k < hi {
            diffs.push(out.post_compose(k, k + 1, &j.diff(k)));
        }
    }
    out.complex = ChainComplex::new(alg, lo, terms, diffs)?;
    Ok(out)
}

/// `ker p` as a right ideal of `A`, with left multiplications by the basis
/// of `A` restricted to it.
pub fn kernel_ideal(p: &SurjectionData) -> Result<(Module, Vec<Matrix>), TwistError> {
    let a = &p.source;
    let (i, inc) = Module::regular(Arc::clone(a)).submodule(&p.kernel)?;
    let inc = inc.matrix();
    let left = (0..a.dim())
        .map(|j| {
            let l = inc.mul(&a.left_mult_matrix(&a.basis(j)));
            let rows = l.row_vectors().iter().map(|r| inc.solve_left(r).expect("ker p is a two-sided ideal")).collect();
            Matrix::from_rows(a.field(), i.dim(), rows)
        })
        .collect();
    Ok((i, left))
}

/// `Hom_A(B, N)` uses left multiplication by `p(a)` on `B`.
fn quotient_left(p: &SurjectionData) -> Vec<Matrix> {
    (0..p.source.dim()).map(|j| p.target.left_mult_matrix(&p.apply(&p.source.basis(j)))).collect()
}

use crate::algebra::SurjectionData;
use crate::resolutions::{lift_map, minimal_resolution, projective_dimension, Resolution};

/// `T(C)` together with how far it can be trusted.
#[derive(Debug, Clone)]
pub struct TwistOutput {
    pub complex: ChainComplex,
    /// Degrees that were computed; cohomology outside is zero unless
    /// `truncated`.
    pub window: (i64, i64),
    /// Set when `ker p` has no finite resolution within the cap, so that
    /// everything above `window.1` was cut off.
    pub truncated: bool,
    pub kernel_pdim: Option<usize>,
}

fn top_degree(c: &ChainComplex, pdim: Option<usize>, window: Option<(i64, i64)>) -> (i64, bool) {
    let hi = c.window().map_or(0, |w| w.1);
    match (pdim, window) {
        (Some(d), _) => (hi + d as i64, false),
        (None, Some((_, w))) => (w, true),
        (None, None) => (hi + 1, true),
    }
}

/// `T(C) = RHom_A(ker p, C)`, computed as `Hom_A(ker p, J)` for an injective
/// replacement `J` of `C`, cut down by smart truncation where `RHom`
/// vanishes.
pub fn twist_apply(p: &SurjectionData, c: &ChainComplex, window: Option<(i64, i64)>, cap: usize) -> Result<TwistOutput, TwistError> {
    let (ideal, left) = kernel_ideal(p)?;
    let pdim = projective_dimension(&ideal, cap)?;
    let (top, truncated) = top_degree(c, pdim, window);
    let lo = c.window().map_or(0, |w| w.0);
    if c.is_zero() || ideal.dim() == 0 || top < lo {
        return Ok(TwistOutput {
            complex: ChainComplex::zero(Arc::clone(&p.source)),
            window: (lo, top.max(lo)),
            truncated,
            kernel_pdim: pdim,
        });
    }
    let hi = c.window().map_or(0, |w| w.1);
    let depth = (top + 1 - hi).max(0) as usize;
    let (j, _, _) = injective_replacement(c, depth + 1)?;
    let hom = hom_into(&ideal, &left, &j.brutal_truncation(top + 1))?;
    let (complex, _) = hom.complex.smart_truncation(top)?;
    Ok(TwistOutput { complex, window: (lo, top), truncated, kernel_pdim: pdim })
}

/// `dim H^k RHom_A(ker p, C)` for `k` in `window`, from a projective
/// resolution of `ker p` instead of an injective replacement of `C`.
pub fn twist_dims_via_resolution(
    p: &SurjectionData,
    c: &ChainComplex,
    window: (i64, i64),
    cap: usize,
) -> Result<Vec<(i64, usize)>, TwistError> {
    let (ideal, _) = kernel_ideal(p)?;
    let hi = c.window().map_or(0, |w| w.1);
    let need = (window.1 - hi + 1).max(0) as usize;
    let res = minimal_resolution(&ideal, need.max(cap))?;
    let hom = HomComplex::new(ChainComplex::from_resolution(&res), c.clone());
    (window.0..=window.1).map(|k| Ok((k, hom.cohomology_dim(k)?))).collect()
}

/// Cohomology of `T(C)` against that of the cone of the counit
/// `Hom_A(B, J) → J`, `f ↦ f(1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleReport {
    pub window: (i64, i64),
    pub twist_dims: Vec<(i64, usize)>,
    pub cone_dims: Vec<(i64, usize)>,
    pub truncated: bool,
    pub matches: bool,
}

pub fn twist_triangle_check(
    p: &SurjectionData,
    c: &ChainComplex,
    window: Option<(i64, i64)>,
    cap: usize,
) -> Result<TriangleReport, TwistError> {
    let out = twist_apply(p, c, window, cap)?;
    let (lo, top) = out.window;
    let field = c.field();
    let hi = c.window().map_or(0, |w| w.1);
    let depth = (top + 2 - hi).max(0) as usize;
    let (j, _, _) = injective_replacement(c, depth + 1)?;
    let j = j.brutal_truncation(top + 2);
    let b = restrict_right(p);
    let sr = hom_into(&b, &quotient_left(p), &j)?;
    let unit = p.target.unit().clone();
    let mut components = BTreeMap::new();
    if let Some((jlo, jhi)) = j.window() {
        for k in jlo..=jhi {
            let rows = sr.basis(k).iter().map(|f| f.left_apply(&unit)).collect();
            components.insert(k, Matrix::from_rows(field, j.dim_at(k), rows));
        }
    }
    let counit = ChainMap::new(sr.complex.clone(), j, components)?;
    let cone = counit.cone()?;
    // The cone sits in degrees one below T, as the triangle SR → 1 → T.
    let cone_dims: Vec<(i64, usize)> = (lo - 1..=top).map(|k| (k, cone.cohomology_dim(k))).collect();
    let twist_dims: Vec<(i64, usize)> = (lo - 1..=top).map(|k| (k, out.complex.cohomology_dim(k))).collect();
    Ok(TriangleReport { window: (lo - 1, top), matches: cone_dims == twist_dims, twist_dims, cone_dims, truncated: out.truncated })
}

fn restrict_right(p: &SurjectionData) -> Module {
    let b = &p.target;
    let action = (0..p.source.dim()).map(|j| b.right_mult_matrix(&p.apply(&p.source.basis(j)))).collect();
    Module::new(Arc::clone(&p.source), b.dim(), action).expect("p is an algebra map")
}

/// `M → J^0 → J^1 → …`, the dual of a minimal projective resolution of
/// `D M` over the opposite algebra.
#[derive(Debug, Clone)]
pub struct Coresolution {
    pub complex: ChainComplex,
    pub resolution: Resolution,
}

pub fn injective_coresolution(m: &Module, len: usize) -> Result<Coresolution, TwistError> {
    let alg = Arc::clone(m.algebra());
    let resolution = minimal_resolution(&m.dual(), len)?;
    let terms = resolution.terms.iter().map(|p| p.dual_over(Arc::clone(&alg))).collect();
    let diffs = resolution.maps.iter().map(|f| f.matrix().transpose()).collect();
    Ok(Coresolution { complex: ChainComplex::from_parts(alg, 0, terms, diffs), resolution })
}

/// `T(M)` for a module, kept together with the data needed to apply `T`
/// to module maps.
struct ModuleTwist {
    coresolution: Coresolution,
    hom: HomInto,
    complex: ChainComplex,
    top: i64,
    top_inclusion: Matrix,
}

fn twist_module(ideal: &Module, left: &[Matrix], m: &Module, top: i64) -> Result<ModuleTwist, TwistError> {
    let coresolution = injective_coresolution(m, (top + 1).max(0) as usize)?;
    let hom = hom_into(ideal, left, &coresolution.complex.brutal_truncation(top + 1))?;
    let (complex, top_inclusion) = hom.complex.smart_truncation(top)?;
    Ok(ModuleTwist { coresolution, hom, complex, top, top_inclusion })
}

impl ModuleTwist {
    /// `T(λ)` for an endomorphism `λ` of the module, degree by degree.
    fn apply_endomorphism(&self, lambda: &Matrix) -> Result<BTreeMap<i64, Matrix>, TwistError> {
        let res = &self.coresolution.resolution;
        let dm = res.target.clone();
        let d_lambda = ModuleHom::new(dm.clone(), dm, lambda.transpose())?;
        let lifts = lift_map(res, res, &d_lambda, (self.top + 1).max(0) as usize)?;
        let mut out = BTreeMap::new();
        let Some((lo, hi)) = self.complex.window() else { return Ok(out) };
        for k in lo..=hi {
            let Some(psi) = lifts.get(k as usize) else { continue };
            let mut m = self.hom.post_compose(k, k, &psi.matrix().transpose());
            if k == self.top {
                let inc = &self.top_inclusion;
                let rows = inc.mul(&m).row_vectors().iter().map(|r| inc.solve_left(r).expect("T(λ) preserves cycles")).collect();
                m = Matrix::from_rows(m.field(), inc.rows(), rows);
            }
            out.insert(k, m);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomEntry {
    pub source: usize,
    pub target: usize,
    pub shift: i64,
    pub dim: usize,
}

/// The tilting-complex certificate for `T`: the images `T(e_iA)` are
/// perfect, have no homs in nonzero shifts, and `A → End(T(A))` is
/// bijective.
#[derive(Debug, Clone)]
pub struct TwistCertificate {
    pub surjection: SurjectionData,
    pub kernel_pdim: Option<usize>,
    /// `(class, multiplicity in A, T(e_iA))`.
    pub images: Vec<(usize, usize, ChainComplex)>,
    pub perfect: bool,
    pub shift_window: (i64, i64),
    pub hom_table: Vec<HomEntry>,
    pub off_shift_zero: bool,
    pub endo_dim: usize,
    pub unit_map_bijective: bool,
    pub verdict: bool,
}

pub fn equivalence_certificate(p: &SurjectionData, shift_window: Option<(i64, i64)>, cap: usize) -> Result<TwistCertificate, TwistError> {
    let a = Arc::clone(&p.source);
    let (ideal, left) = kernel_ideal(p)?;
    let pdim = projective_dimension(&ideal, cap)?;
    let mut cert = TwistCertificate {
        surjection: p.clone(),
        kernel_pdim: pdim,
        images: vec![],
        perfect: false,
        shift_window: shift_window.unwrap_or((0, 0)),
        hom_table: vec![],
        off_shift_zero: false,
        endo_dim: 0,
        unit_map_bijective: false,
        verdict: false,
    };
    let Some(d) = pdim else { return Ok(cert) };
    let top = d as i64;
    let prims = a.primitive_idempotents()?;
    let mut replacements = Vec::new();
    for (class, &rep) in prims.reps.iter().enumerate() {
        let e_a = Module::regular(Arc::clone(&a)).submodule(a.right_ideal(&prims.elements[rep]).basis())?.0;
        let t = twist_module(&ideal, &left, &e_a, top)?.complex;
        let mult = prims.class.iter().filter(|&&c| c == class).count();
        let rep = projective_replacement(&t, cap + d)?;
        cert.images.push((class, mult, t));
        replacements.push(rep);
    }
    cert.perfect = replacements.iter().all(|r| r.complete);
    if !cert.perfect {
        return Ok(cert);
    }
    let window = shift_window.unwrap_or_else(|| {
        let mut lo = 0;
        let mut hi = 0;
        for r in &replacements {
            for (_, _, t) in &cert.images {
                if let (Some((pl, ph)), Some((tl, th))) = (r.complex.window(), t.window()) {
                    lo = lo.min(tl - ph - 1);
                    hi = hi.max(th - pl + 1);
                }
            }
        }
        (lo, hi)
    });
    cert.shift_window = window;
    for (i, r) in replacements.iter().enumerate() {
        for (j, (_, _, t)) in cert.images.iter().enumerate() {
            let hom = HomComplex::new(r.complex.clone(), t.clone());
            for n in window.0..=window.1 {
                let dim = hom.cohomology_dim(n)?;
                if dim > 0 {
                    cert.hom_table.push(HomEntry { source: i, target: j, shift: n, dim });
                }
            }
        }
    }
    cert.off_shift_zero = cert.hom_table.iter().all(|e| e.shift == 0);
    cert.endo_dim = cert.hom_table.iter().filter(|e| e.shift == 0).map(|e| e.dim * cert.images[e.source].1 * cert.images[e.target].1).sum();

    let regular = Module::regular(Arc::clone(&a));
    let ta = twist_module(&ideal, &left, &regular, top)?;
    let rep = projective_replacement(&ta.complex, cap + d)?;
    let hom = HomComplex::new(rep.complex.clone(), ta.complex.clone());
    let mut classes = Vec::with_capacity(a.dim());
    for j in 0..a.dim() {
        let t_lambda = ta.apply_endomorphism(&a.left_mult_matrix(&a.basis(j)))?;
        let mut f = GradedMap::new();
        for (&k, q) in &rep.map.components {
            if let Some(m) = t_lambda.get(&k) {
                let g = q.mul(m);
                if !g.is_zero() {
                    f.insert(k, g);
                }
            }
        }
        debug_assert!(hom.is_cycle(0, &f));
        classes.push(f);
    }
    let direct = hom.cohomology_dim(0)?;
    cert.unit_map_bijective = direct == a.dim() && hom.class_rank(0, &classes)? == a.dim();
    cert.verdict = cert.perfect && cert.off_shift_zero && cert.endo_dim == a.dim() && cert.unit_map_bijective;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::homology::ext_dims;

    fn q() -> Field {
        Field::Rational
    }

    fn module_complex(m: &Module) -> ChainComplex {
        ChainComplex::concentrated(m, 0)
    }

    fn nonzero(dims: &[(i64, usize)]) -> Vec<(i64, usize)> {
        dims.iter().copied().filter(|&(_, d)| d > 0).collect()
    }

    #[test]
    fn cone_of_identity_is_acyclic_and_shift_zero_is_trivial() {
        let a = nakayama3(q());
        let m = Module::regular(Arc::clone(&a));
        let rep = projective_replacement(&module_complex(&Module::simple(&a, 0).unwrap()), 4).unwrap();
        for c in [module_complex(&m), rep.complex.clone()] {
            let cone = ChainMap::identity(&c).cone().unwrap();
            assert_eq!(cone.total_cohomology(), 0);
            let s = c.shift(0);
            assert_eq!(s.window(), c.window());
            assert_eq!(s.cohomology_dims(), c.cohomology_dims());
        }
    }

    #[test]
    fn cone_of_multiplication_by_x() {
        let a = dual_numbers(q());
        let m = Module::regular(Arc::clone(&a));
        let x = a.left_mult_matrix(&a.basis(1));
        let f = ChainMap::new(module_complex(&m), module_complex(&m), BTreeMap::from([(0, x.clone())])).unwrap();
        let cone = f.cone().unwrap();
        assert_eq!(cone.cohomology_dims(), vec![(-1, 1), (0, 1)]);
        let rank = x.rank();
        assert_eq!((m.dim() - rank, m.dim() - rank), (1, 1));
    }

    #[test]
    fn rejects_broken_complexes_and_maps() {
        let a = dual_numbers(q());
        let m = Module::regular(Arc::clone(&a));
        let x = a.left_mult_matrix(&a.basis(1));
        let one = Matrix::identity(q(), 2);
        assert_eq!(
            ChainComplex::new(Arc::clone(&a), 0, vec![m.clone(), m.clone(), m.clone()], vec![one.clone(), one.clone()]).unwrap_err(),
            TwistError::NotAComplex(0)
        );
        let c = ChainComplex::new(Arc::clone(&a), 0, vec![m.clone(), m.clone()], vec![x.clone()]).unwrap();
        let bad = ChainMap::new(c.clone(), c.clone(), BTreeMap::from([(0, one.clone())]));
        assert!(matches!(bad, Err(TwistError::NotAChainMap(_))));
    }

    #[test]
    fn shift_moves_cohomology() {
        let a = dual_numbers(q());
        let s = Module::simple(&a, 0).unwrap();
        let c = module_complex(&s).shift(3);
        assert_eq!(nonzero(&c.cohomology_dims()), vec![(-3, 1)]);
    }

    #[test]
    fn projective_replacements_are_quasi_isomorphisms() {
        let a = upper_triangular(q());
        for s in Module::simples(&a).unwrap() {
            let rep = projective_replacement(&module_complex(&s), 3).unwrap();
            assert!(rep.complete);
            assert!(rep.map.is_quasi_isomorphism());
            let shifted = ChainComplex::new(Arc::clone(&a), -1, vec![s.clone(), s.clone()], vec![Matrix::identity(q(), 1)]).unwrap();
            let rep = projective_replacement(&shifted, 3).unwrap();
            assert!(rep.complete && rep.map.is_quasi_isomorphism());
            assert_eq!(rep.complex.total_cohomology(), 0);
        }

        let d = dual_numbers(q());
        let sd = Module::simple(&d, 0).unwrap();
        let rep = projective_replacement(&module_complex(&sd), 3).unwrap();
        assert!(!rep.complete);
        let cone = rep.map.cone().unwrap();
        for k in -2..=1 {
            assert_eq!(cone.cohomology_dim(k), 0);
        }
    }

    #[test]
    fn injective_replacement_and_coresolution_agree() {
        let a = nakayama3(q());
        let s = Module::simple(&a, 1).unwrap();
        let (j, map, _) = injective_replacement(&module_complex(&s), 3).unwrap();
        let co = injective_coresolution(&s, 3).unwrap();
        for k in 0..3 {
            assert_eq!(j.dim_at(k), co.complex.dim_at(k));
            assert!(j.term(k).is_projective().unwrap());
        }
        let cone = map.cone().unwrap();
        for k in -1..2 {
            assert_eq!(cone.cohomology_dim(k), 0);
        }
    }

    #[test]
    fn derived_hom_between_modules_is_ext() {
        let a = nakayama3(q());
        let simples = Module::simples(&a).unwrap();
        for m in &simples {
            for n in &simples {
                let ext = ext_dims(m, n, 0..3).unwrap();
                let via =
                    (0..3).map(|k| derived_hom_dim(&module_complex(m), &module_complex(n), k as i64, 6)).collect::<Result<Vec<_>, _>>();
                // Simples over a self-injective algebra are not perfect.
                assert!(matches!(via, Err(TwistError::CapExceeded { .. })));
                let rep = projective_replacement(&module_complex(m), 4).unwrap();
                let hom = HomComplex::new(rep.complex, module_complex(n));
                let dims: Vec<usize> = (0..3).map(|k| hom.cohomology_dim(k).unwrap()).collect();
                assert_eq!(dims, ext);
            }
        }
        let ut = upper_triangular(q());
        let s = Module::simples(&ut).unwrap();
        let p = Module::regular(Arc::clone(&ut));
        for m in &s {
            for k in 0..2 {
                let got = derived_hom_dim(&module_complex(m), &module_complex(&p), k, 4).unwrap();
                assert_eq!(got, ext_dims(m, &p, k as usize..k as usize + 1).unwrap()[0]);
            }
        }
    }

    #[test]
    fn truncations() {
        let a = dual_numbers(q());
        let s = Module::simple(&a, 0).unwrap();
        let co = injective_coresolution(&s, 4).unwrap();
        let (t, _) = co.complex.smart_truncation(2).unwrap();
        assert_eq!(nonzero(&t.cohomology_dims()), vec![(0, 1)]);
        let b = co.complex.brutal_truncation(2);
        assert_eq!(b.window(), Some((0, 2)));
        assert_eq!(nonzero(&b.cohomology_dims()), vec![(0, 1), (2, 1)]);
    }

    #[test]
    fn twist_around_identity_is_zero() {
        let a = nakayama3(q());
        let p = SurjectionData::identity(Arc::clone(&a));
        let out = twist_apply(&p, &module_complex(&Module::regular(Arc::clone(&a))), None, 6).unwrap();
        assert!(out.complex.is_zero());
        assert!(!out.truncated);
        let tri = twist_triangle_check(&p, &module_complex(&Module::simple(&a, 0).unwrap()), None, 6).unwrap();
        assert!(tri.matches);
        assert!(tri.cone_dims.iter().all(|&(_, d)| d == 0));
    }

    #[test]
    fn twist_of_the_regular_module_for_dual_numbers_context() {
        let ctx = ctx_dual_numbers(q()).unwrap();
        let lam = Module::regular(Arc::clone(&ctx.lambda));
        let out = twist_apply(&ctx.pi, &module_complex(&lam), None, 10).unwrap();
        assert!(!out.truncated);
        let proj_e = Module::regular(Arc::clone(&ctx.lambda)).submodule(&ctx.proj_ideal).unwrap().0;
        assert_eq!(out.kernel_pdim, projective_dimension(&proj_e, 10).unwrap());
        assert!(out.kernel_pdim.is_some());
        let ext = ext_dims(&proj_e, &lam, 0..3).unwrap();
        assert_eq!(ext, vec![5, 1, 0]);
        let dims: Vec<usize> = (0..3).map(|k| out.complex.cohomology_dim(k)).collect();
        assert_eq!(dims, ext);
        let via = twist_dims_via_resolution(&ctx.pi, &module_complex(&lam), out.window, 10).unwrap();
        assert_eq!(nonzero(&via), vec![(0, 5), (1, 1)]);
    }

    #[test]
    fn twist_routes_agree_on_simples_and_projectives() {
        for ctx in [ctx_dual_numbers(q()).unwrap(), ctx_nakayama3_one(q()).unwrap()] {
            let lam = &ctx.lambda;
            let mut battery = Module::simples(lam).unwrap();
            let prims = lam.primitive_idempotents().unwrap();
            for &r in &prims.reps {
                battery.push(Module::regular(Arc::clone(lam)).submodule(lam.right_ideal(&prims.elements[r]).basis()).unwrap().0);
            }
            battery.push(Module::regular(Arc::clone(lam)));
            let (ideal, left) = kernel_ideal(&ctx.pi).unwrap();
            for m in &battery {
                let c = module_complex(m);
                let out = twist_apply(&ctx.pi, &c, None, 10).unwrap();
                let via = twist_dims_via_resolution(&ctx.pi, &c, out.window, 10).unwrap();
                let mine: Vec<(i64, usize)> = (out.window.0..=out.window.1).map(|k| (k, out.complex.cohomology_dim(k))).collect();
                assert_eq!(mine, via);
                let modular = twist_module(&ideal, &left, m, out.window.1).unwrap();
                assert_eq!(nonzero(&modular.complex.cohomology_dims()), nonzero(&mine));
                let tri = twist_triangle_check(&ctx.pi, &c, None, 10).unwrap();
                assert!(tri.matches, "{:?}", tri);
            }
        }
    }

    #[test]
    fn twist_for_a_non_perfect_kernel_is_flagged() {
        let a = dual_numbers(q());
        let p = a.quotient_surjection(&a.radical().unwrap()).unwrap();
        let out = twist_apply(&p, &module_complex(&Module::regular(Arc::clone(&a))), None, 4).unwrap();
        assert!(out.truncated);
        assert_eq!(out.kernel_pdim, None);
    }

    #[test]
    fn triangle_for_upper_triangular_to_its_diagonal() {
        let a = upper_triangular(q());
        let p = a.quotient_surjection(&a.radical().unwrap()).unwrap();
        let (ideal, _) = kernel_ideal(&p).unwrap();
        // kQ is hereditary, so the radical is projective on both sides.
        let op = a.opposite_arc();
        let left_rad = Module::regular(Arc::clone(&op)).submodule(&p.kernel).unwrap().0;
        assert!(ideal.is_projective().unwrap() && left_rad.is_projective().unwrap());
        assert_eq!(projective_dimension(&ideal, 4).unwrap(), Some(0));
        let tri = twist_triangle_check(&p, &module_complex(&Module::regular(Arc::clone(&a))), None, 4).unwrap();
        assert!(!tri.truncated);
        assert!(tri.matches, "{:?}", tri);
    }

    #[test]
    fn certificates() {
        let ctx = ctx_dual_numbers(q()).unwrap();
        let cert = equivalence_certificate(&ctx.pi, None, 10).unwrap();
        assert!(cert.perfect && cert.off_shift_zero && cert.unit_map_bijective);
        assert_eq!(cert.endo_dim, 5);
        assert!(cert.verdict);

        let a = dual_numbers(q());
        let p = a.quotient_surjection(&a.radical().unwrap()).unwrap();
        let cert = equivalence_certificate(&p, None, 4).unwrap();
        assert!(!cert.verdict);
        assert_eq!(cert.kernel_pdim, None);
    }

    #[test]
    fn certificate_for_nakayama_with_all_simples() {
        let ctx = ctx_nakayama3_all(q()).unwrap();
        let cert = equivalence_certificate(&ctx.pi, None, 20).unwrap();
        assert_eq!(cert.endo_dim, ctx.lambda.dim());
        assert!(cert.verdict);
    }
}
