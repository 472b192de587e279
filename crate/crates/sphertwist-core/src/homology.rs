//! Ext and Tor dimensions, the bimodule `Tor_t^A(B, B)` for a surjection
//! `A → B`, and the cotwist data read off from the cone of multiplication.

use std::collections::BTreeMap;
use std::ops::Range;
use std::sync::Arc;

use crate::algebra::{AlgebraError, SurjectionData};
use crate::exactlin::{Matrix, RowSpace, Vector};
use crate::free::{tensor_free_map, FreeTensor};
use crate::modules::{hom_basis, Bimodule, Module, ModuleError, ModuleHom};
use crate::resolutions::{lift_map, minimal_resolution, Resolution, ResolutionError};
use crate::twist::{ChainComplex, ChainMap, TwistError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HomologyError {
    #[error("resolution did not reach the requested degree within {cap} steps")]
    CapExceeded { cap: usize },
    #[error("Tor is not concentrated in two degrees: {0:?}")]
    NotConcentrated(Vec<usize>),
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Twist(#[from] TwistError),
}

/// `B` as a right `A`-module through `p`.
pub fn restrict_right(p: &SurjectionData) -> Module {
    let b = &p.target;
    let action = (0..p.source.dim()).map(|j| b.right_mult_matrix(&p.apply(&p.source.basis(j)))).collect();
    Module::from_parts(Arc::clone(&p.source), b.dim(), action, None)
}

/// `B` as a left `A`-module through `p`, i.e. a right module over `A^op`.
pub fn restrict_left(p: &SurjectionData) -> Module {
    let b = &p.target;
    let action = (0..p.source.dim()).map(|j| b.left_mult_matrix(&p.apply(&p.source.basis(j)))).collect();
    Module::from_parts(p.source.opposite_arc(), b.dim(), action, None)
}

/// `m` viewed over the opposite of the opposite of its algebra, so that it
/// can play the left module in a tensor over `A^op`.
fn as_left_of_opposite(m: &Module, op: &Arc<crate::Algebra>) -> Module {
    Module::from_parts(op.opposite_arc(), m.dim(), m.actions().to_vec(), None)
}

fn need(res: &Resolution, top: usize) -> Result<(), HomologyError> {
    if res.complete || top < res.terms.len() {
        Ok(())
    } else {
        Err(HomologyError::CapExceeded { cap: res.cap })
    }
}

/// `dim Ext^i(M, N)` for `i` in `degrees`, from the cohomology of
/// `Hom(P_•, N)`.
pub fn ext_from_resolution(res: &Resolution, n: &Module, degrees: Range<usize>) -> Result<Vec<usize>, HomologyError> {
    need(res, degrees.end)?;
    let field = n.field();
    let hom_dim = |i: usize| -> Result<Vec<Matrix>, HomologyError> {
        Ok(match res.terms.get(i) {
            Some(p) => hom_basis(p, n)?,
            None => vec![],
        })
    };
    // Rank of Hom(P_{i-1}, N) → Hom(P_i, N), G ↦ f_i G.
    let rank_into = |i: usize, basis_prev: &[Matrix]| -> usize {
        if i == 0 || i >= res.terms.len() {
            return 0;
        }
        let f = res.maps[i - 1].matrix();
        RowSpace::from_rows(field, res.terms[i].dim() * n.dim(), basis_prev.iter().map(|g| f.mul(g).to_vector())).dim()
    };
    let mut out = Vec::new();
    let mut prev = if degrees.start == 0 { vec![] } else { hom_dim(degrees.start - 1)? };
    for i in degrees {
        let cur = hom_dim(i)?;
        let into = rank_into(i, &prev);
        let out_rank = rank_into(i + 1, &cur);
        out.push(cur.len() - into - out_rank);
        prev = cur;
    }
    Ok(out)
}

/// `dim Ext^i(M, N)` from a minimal resolution of `M`.
pub fn ext_dims(m: &Module, n: &Module, degrees: Range<usize>) -> Result<Vec<usize>, HomologyError> {
    let res = minimal_resolution(m, degrees.end)?;
    ext_from_resolution(&res, n, degrees)
}

/// `P_• ⊗_A N` for a resolution with free terms: the tensored terms and
/// `d_i : C_i → C_{i−1}` as `diffs[i−1]`.
pub struct TorComplex {
    pub tensors: Vec<FreeTensor>,
    pub diffs: Vec<Matrix>,
}

impl TorComplex {
    pub fn new(res: &Resolution, n: &Module) -> Result<TorComplex, HomologyError> {
        let tensors = res.terms.iter().map(|p| FreeTensor::new(p, n)).collect::<Result<Vec<_>, _>>()?;
        let mut diffs = Vec::new();
        for (i, f) in res.maps.iter().enumerate() {
            diffs.push(tensor_free_map(f, &tensors[i + 1], &tensors[i], n)?);
        }
        Ok(TorComplex { tensors, diffs })
    }

    fn rank(&self, i: usize) -> usize {
        if i == 0 || i > self.diffs.len() {
            0
        } else {
            self.diffs[i - 1].rank()
        }
    }

    pub fn homology_dim(&self, i: usize) -> usize {
        match self.tensors.get(i) {
            Some(t) => t.dim - self.rank(i) - self.rank(i + 1),
            None => 0,
        }
    }

    /// `H_i` as cycles modulo boundaries.
    pub fn homology(&self, i: usize) -> Subquotient {
        let field_dim = self.tensors[i].dim;
        let z = if i == 0 { None } else { Some(RowSpace::from_matrix(&self.diffs[i - 1].left_kernel())) };
        let b = match self.diffs.get(i) {
            Some(d) => RowSpace::from_matrix(d),
            None => RowSpace::new(self.field(), field_dim),
        };
        let z = z.unwrap_or_else(|| RowSpace::full(self.field(), field_dim));
        Subquotient::new(&z, &b)
    }

    fn field(&self) -> crate::Field {
        self.tensors.first().and_then(|t| t.blocks.first()).map(|b| b.field()).unwrap_or(crate::Field::Rational)
    }
}

/// A subquotient `Z / B` of a coordinate space with chosen representatives.
#[derive(Debug, Clone)]
pub struct Subquotient {
    pub reps: Vec<Vector>,
    boundary_dim: usize,
    stack: Matrix,
}

impl Subquotient {
    pub fn new(z: &RowSpace, b: &RowSpace) -> Subquotient {
        let mut space = b.clone();
        let mut reps = Vec::new();
        for v in z.basis() {
            if space.insert(v.clone()) {
                reps.push(v.clone());
            }
        }
        let mut rows: Vec<Vector> = b.basis().to_vec();
        rows.extend(reps.iter().cloned());
        let stack = Matrix::from_rows(z.field(), z.ambient_dim(), rows);
        Subquotient { reps, boundary_dim: b.dim(), stack }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates of the class of a cycle.
    pub fn coords(&self, v: &[crate::Scalar]) -> Vector {
        let c = self.stack.solve_left(v).expect("vector is a cycle");
        c[self.boundary_dim..].to_vec()
    }

    /// The matrix of the map induced by `m` (which must preserve cycles and
    /// boundaries).
    pub fn induced(&self, m: &Matrix) -> Matrix {
        let rows = self.reps.iter().map(|r| self.coords(&m.left_apply(r))).collect();
        Matrix::from_rows(m.field(), self.dim(), rows)
    }
}

/// `dim Tor_i(M, N)` from a resolution of `M`; `N` is a module over `A^op`.
pub fn tor_from_resolution(res: &Resolution, n: &Module, degrees: Range<usize>) -> Result<Vec<usize>, HomologyError> {
    need(res, degrees.end)?;
    let c = TorComplex::new(res, n)?;
    Ok(degrees.map(|i| c.homology_dim(i)).collect())
}

/// `dim Tor_i^A(M, N)` resolving `M`.
pub fn tor_dims(m: &Module, n: &Module, degrees: Range<usize>) -> Result<Vec<usize>, HomologyError> {
    let res = minimal_resolution(m, degrees.end)?;
    tor_from_resolution(&res, n, degrees)
}

/// `dim Tor_i^A(M, N)` resolving `N` over `A^op` instead.
pub fn tor_dims_resolving_right(m: &Module, n: &Module, degrees: Range<usize>) -> Result<Vec<usize>, HomologyError> {
    let res = minimal_resolution(n, degrees.end)?;
    tor_from_resolution(&res, &as_left_of_opposite(m, n.algebra()), degrees)
}

/// `Tor_t^A(B, B)` as a `B`-`B`-bimodule. The right action comes from
/// `B`; the left action from lifting left multiplications on `B_A` to the
/// resolution.
#[derive(Debug, Clone)]
pub struct TorBimodule {
    pub degree: usize,
    pub bimodule: Bimodule,
    pub right_projective: bool,
    pub left_projective: bool,
}

fn tor_bimodule_from(p: &SurjectionData, res: &Resolution, t: usize) -> Result<TorBimodule, HomologyError> {
    let b = &p.target;
    let bl = restrict_left(p);
    let cx = TorComplex::new(res, &bl)?;
    let h = cx.homology(t);
    let ct = &cx.tensors[t];
    let field = b.field();

    let mut right = Vec::with_capacity(b.dim());
    for j in 0..b.dim() {
        let r = b.right_mult_matrix(&b.basis(j));
        let rows = (0..ct.dim)
            .map(|row| {
                let v = field.unit_vector(ct.dim, row);
                let mut img = field.vec_zero(ct.dim);
                for s in 0..ct.blocks.len() {
                    let y = r.left_apply(&ct.component(s, &v));
                    crate::exactlin::axpy(&mut img, &field.one(), &ct.embed(s, &y));
                }
                img
            })
            .collect();
        right.push(h.induced(&Matrix::from_rows(field, ct.dim, rows)));
    }

    let ba = res.target.clone();
    let mut left = Vec::with_capacity(b.dim());
    for j in 0..b.dim() {
        let lb = ModuleHom::new(ba.clone(), ba.clone(), b.left_mult_matrix(&b.basis(j)))?;
        let phis = lift_map(res, res, &lb, t)?;
        let m = match phis.get(t) {
            Some(phi) => tensor_free_map(phi, ct, ct, &bl)?,
            None => Matrix::zeros(field, ct.dim, ct.dim),
        };
        left.push(h.induced(&m));
    }
    let bimodule = Bimodule::new(Arc::clone(b), Arc::clone(b), h.dim(), left, right)?;
    Ok(TorBimodule {
        degree: t,
        right_projective: bimodule.is_right_projective()?,
        left_projective: bimodule.is_left_projective()?,
        bimodule,
    })
}

/// Dimensions of `Tor_i^A(B, B)` for `i ≤ cap` (or up to the resolution
/// length) with the resolution used.
pub fn self_tor_dims(p: &SurjectionData, cap: usize) -> Result<(Vec<usize>, Resolution), HomologyError> {
    let res = minimal_resolution(&restrict_right(p), cap + 1)?;
    let top = if res.complete { res.terms.len() } else { cap + 1 };
    let dims = tor_from_resolution(&res, &restrict_left(p), 0..top)?;
    Ok((dims, res))
}

/// The unique `t > 0` with `Tor_t ≠ 0`, if the profile is concentrated in
/// degrees `0` and `t`.
pub fn concentration(dims: &[usize], complete: bool) -> Option<usize> {
    if !complete {
        return None;
    }
    let nonzero: Vec<usize> = (1..dims.len()).filter(|&i| dims[i] != 0).collect();
    match nonzero.as_slice() {
        [t] => Some(*t),
        _ => None,
    }
}

pub fn tor_bimodule(p: &SurjectionData, t: usize, cap: usize) -> Result<TorBimodule, HomologyError> {
    let (dims, res) = self_tor_dims(p, cap)?;
    if concentration(&dims, res.complete) != Some(t) {
        return Err(HomologyError::NotConcentrated(dims));
    }
    tor_bimodule_from(p, &res, t)
}

#[derive(Debug, Clone)]
pub struct CotwistData {
    pub tor_dims: Vec<usize>,
    /// Whether the resolution of `B_A` finished, so the profile is complete.
    pub complete: bool,
    pub concentrated: Option<usize>,
    pub cotwist_bimodule: Option<TorBimodule>,
    /// The degree of the cone of multiplication carrying `Tor_t`.
    pub shift: Option<i64>,
    /// `dim H^k` of the cone of `B ⊗^L_A B → B`.
    pub cone_dims: Vec<(i64, usize)>,
}

/// Forms `P_• ⊗_A B → B` (multiplication in degree zero), takes its cone,
/// and reads off where the cohomology sits.
pub fn cotwist_data(p: &SurjectionData, cap: usize) -> Result<CotwistData, HomologyError> {
    let (dims, res) = self_tor_dims(p, cap)?;
    let concentrated = concentration(&dims, res.complete);
    let b = &p.target;
    let field = b.field();
    let bl = restrict_left(p);
    let cx = TorComplex::new(&res, &bl)?;

    let breg = Module::regular(Arc::clone(b));
    let right_module = |t: &FreeTensor| -> Module {
        let action = (0..b.dim())
            .map(|j| {
                let r = b.right_mult_matrix(&b.basis(j));
                let rows = (0..t.dim)
                    .map(|row| {
                        let v = field.unit_vector(t.dim, row);
                        let mut img = field.vec_zero(t.dim);
                        for s in 0..t.blocks.len() {
                            crate::exactlin::axpy(&mut img, &field.one(), &t.embed(s, &r.left_apply(&t.component(s, &v))));
                        }
                        img
                    })
                    .collect();
                Matrix::from_rows(field, t.dim, rows)
            })
            .collect();
        Module::from_parts(Arc::clone(b), t.dim, action, None)
    };
    let n = cx.tensors.len();
    let terms: Vec<Module> = (0..n).rev().map(|i| right_module(&cx.tensors[i])).collect();
    let diffs: Vec<Matrix> = (1..n).rev().map(|i| cx.diffs[i - 1].clone()).collect();
    let x = ChainComplex::new(Arc::clone(b), -(n as i64 - 1), terms, diffs)?;

    let c0 = &cx.tensors[0];
    let p0 = &res.terms[0];
    let mut beta = Vec::with_capacity(c0.dim);
    for row in 0..c0.dim {
        let v = field.unit_vector(c0.dim, row);
        let mut img = field.vec_zero(b.dim());
        for s in 0..c0.blocks.len() {
            let w = res.augmentation.apply(&crate::modules::free_generator(p0, s)?);
            crate::exactlin::axpy(&mut img, &field.one(), &b.mul(&w, &c0.component(s, &v)));
        }
        beta.push(img);
    }
    let beta = Matrix::from_rows(field, b.dim(), beta);
    let y = ChainComplex::concentrated(&breg, 0);
    let f = ChainMap::new(x, y, BTreeMap::from([(0, beta)]))?;
    let cone = f.cone()?;
    let cone_dims = cone.cohomology_dims();

    let (cotwist_bimodule, shift) = match concentrated {
        Some(t) => (Some(tor_bimodule_from(p, &res, t)?), Some(-(t as i64) - 1)),
        None => (None, None),
    };
    Ok(CotwistData { tor_dims: dims, complete: res.complete, concentrated, cotwist_bimodule, shift, cone_dims })
}

/// The class permutation `i ↦ j` with `e_i M e_j ≠ 0`, when every class
/// meets exactly one other.
pub fn block_permutation(m: &Bimodule) -> Result<Option<Vec<usize>>, HomologyError> {
    let lp = m.left_algebra().primitive_idempotents()?;
    let rp = m.right_algebra().primitive_idempotents()?;
    let mut perm = Vec::with_capacity(lp.class_count());
    for &i in &lp.reps {
        let l = m.left_act(&lp.elements[i]);
        let hits: Vec<usize> =
            rp.reps.iter().enumerate().filter(|(_, &j)| l.mul(&m.right_act(&rp.elements[j])).rank() > 0).map(|(c, _)| c).collect();
        match hits.as_slice() {
            [j] => perm.push(*j),
            _ => return Ok(None),
        }
    }
    let mut seen = perm.clone();
    seen.sort_unstable();
    seen.dedup();
    Ok((seen.len() == perm.len()).then_some(perm))
}
