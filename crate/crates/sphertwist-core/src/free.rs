//! Tensor products `P ⊗_A N` with `P = ⊕ e_{k_s} A` free, computed as
//! `⊕ e_{k_s} N`, and the general quotient construction used to check them.

use crate::exactlin::{axpy, Matrix, RowSpace, Vector};
use crate::modules::{free_generator, Module, ModuleError, ModuleHom};

fn check_left(p: &Module, n: &Module) -> Result<(), ModuleError> {
    if *n.algebra().as_ref() == *p.algebra().opposite_arc() {
        Ok(())
    } else {
        Err(ModuleError::AlgebraMismatch)
    }
}

/// For a map `f : ⊕ e_{k_s} A → ⊕ e_{l_t} A` the elements
/// `a_ts ∈ e_{l_t} A e_{k_s}` with `f(g_s) = Σ_t g'_t a_ts`, as `[s][t]`.
pub fn free_entries(f: &ModuleHom) -> Result<Vec<Vec<Vector>>, ModuleError> {
    let p = f.source();
    let q = f.target();
    let fs = p.free_data().ok_or_else(|| ModuleError::Shape("source is not free".into()))?;
    let ft = q.free_data().ok_or_else(|| ModuleError::Shape("target is not free".into()))?;
    let a = p.algebra();
    let bases = a.projective_bases()?;
    let field = a.field();
    let mut out = Vec::with_capacity(fs.summands.len());
    for s in 0..fs.summands.len() {
        let img = f.apply(&free_generator(p, s)?);
        let mut row = Vec::with_capacity(ft.summands.len());
        for (t, &l) in ft.summands.iter().enumerate() {
            let mut el = field.vec_zero(a.dim());
            for (i, y) in bases[l].basis().iter().enumerate() {
                let c = &img[ft.offsets[t] + i];
                if !c.is_zero() {
                    axpy(&mut el, c, y);
                }
            }
            row.push(el);
        }
        out.push(row);
    }
    Ok(out)
}

/// `P ⊗_A N` for free `P` and a left module `N` (a right module over the
/// opposite algebra): the blocks `e_{k_s} N` inside `N`.
#[derive(Debug, Clone)]
pub struct FreeTensor {
    pub dim: usize,
    pub offsets: Vec<usize>,
    pub blocks: Vec<RowSpace>,
}

impl FreeTensor {
    pub fn new(p: &Module, n: &Module) -> Result<FreeTensor, ModuleError> {
        check_left(p, n)?;
        let fd = p.free_data().ok_or_else(|| ModuleError::Shape("not a free module".into()))?;
        let prims = p.algebra().primitive_idempotents()?;
        let mut offsets = Vec::new();
        let mut blocks = Vec::new();
        let mut dim = 0;
        for &k in &fd.summands {
            let b = n.idempotent_part(&prims.elements[k]);
            offsets.push(dim);
            dim += b.dim();
            blocks.push(b);
        }
        Ok(FreeTensor { dim, offsets, blocks })
    }

    /// Coordinates of `g_s ⊗ x`, for `x ∈ e_{k_s} N`.
    pub fn embed(&self, s: usize, x: &[crate::Scalar]) -> Vector {
        let mut v = self.blocks[s].field().vec_zero(self.dim);
        for (i, c) in self.blocks[s].coords_unchecked(x).into_iter().enumerate() {
            v[self.offsets[s] + i] = c;
        }
        v
    }

    /// The `N`-vector of the block-`s` component of a tensor vector.
    pub fn component(&self, s: usize, v: &[crate::Scalar]) -> Vector {
        let b = &self.blocks[s];
        let mut out = b.field().vec_zero(b.ambient_dim());
        for (i, y) in b.basis().iter().enumerate() {
            let c = &v[self.offsets[s] + i];
            if !c.is_zero() {
                axpy(&mut out, c, y);
            }
        }
        out
    }
}

/// `f ⊗ 1 : P ⊗ N → P' ⊗ N`, sending `g_s ⊗ x` to `Σ_t g'_t ⊗ a_ts x`.
pub fn tensor_free_map(f: &ModuleHom, src: &FreeTensor, dst: &FreeTensor, n: &Module) -> Result<Matrix, ModuleError> {
    let field = n.field();
    let entries = free_entries(f)?;
    let mut rows = Vec::with_capacity(src.dim);
    for (s, row) in entries.iter().enumerate() {
        let acts: Vec<Option<Matrix>> = row.iter().map(|a| if crate::exactlin::vec_is_zero(a) { None } else { Some(n.act(a)) }).collect();
        for x in src.blocks[s].basis() {
            let mut img = field.vec_zero(dst.dim);
            for (t, act) in acts.iter().enumerate() {
                if let Some(m) = act {
                    let y = m.left_apply(x);
                    for (i, c) in dst.blocks[t].coords_unchecked(&y).into_iter().enumerate() {
                        img[dst.offsets[t] + i] = c;
                    }
                }
            }
            rows.push(img);
        }
    }
    Ok(Matrix::from_rows(field, dst.dim, rows))
}

/// `M ⊗_A N` for arbitrary modules, as the quotient of `M ⊗_k N` (index
/// `i·dim N + j`) by the relations `m a ⊗ n − m ⊗ a n`. Returns the
/// relation subspace.
pub fn tensor_relations(m: &Module, n: &Module) -> Result<RowSpace, ModuleError> {
    check_left(m, n)?;
    let field = m.field();
    let (dm, dn) = (m.dim(), n.dim());
    let mut rel = RowSpace::new(field, dm * dn);
    for a in 0..m.algebra().dim() {
        let ra = m.action(a);
        let la = n.action(a);
        for i in 0..dm {
            for j in 0..dn {
                let mut v = field.vec_zero(dm * dn);
                for (i2, c) in ra.row(i).iter().enumerate() {
                    if !c.is_zero() {
                        v[i2 * dn + j] = &v[i2 * dn + j] + c;
                    }
                }
                for (j2, c) in la.row(j).iter().enumerate() {
                    if !c.is_zero() {
                        v[i * dn + j2] = &v[i * dn + j2] - c;
                    }
                }
                rel.insert(v);
            }
        }
    }
    Ok(rel)
}

pub fn tensor_dim(m: &Module, n: &Module) -> Result<usize, ModuleError> {
    Ok(m.dim() * n.dim() - tensor_relations(m, n)?.dim())
}
