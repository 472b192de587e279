//! Properties of Ext, Tor, the spherical audits and the twist, over
//! generated Nakayama contexts and a few fixed ambients.

use std::sync::Arc;

use proptest::prelude::*;
use sphertwist_core::algebra::{cyclic_nakayama, truncated_polynomial, upper_triangular_2};
use sphertwist_core::fixtures::ctx_nakayama;
use sphertwist_core::frobenius::{stable_hom, syzygy, FrobeniusContext};
use sphertwist_core::homology::{cotwist_data, ext_dims, tor_bimodule, tor_dims, tor_dims_resolving_right};
use sphertwist_core::resolutions::minimal_resolution;
use sphertwist_core::spherical::{syz_audit, tilting_audit};
use sphertwist_core::twist::{equivalence_certificate, kernel_ideal, twist_apply, twist_triangle_check, ChainComplex};
use sphertwist_core::{Algebra, Field, Matrix, Module};

const Q: Field = Field::Rational;
const CAP: usize = 16;

fn ambient(i: usize) -> Arc<Algebra> {
    Arc::new(match i {
        0 => truncated_polynomial(Q, 2),
        1 => truncated_polynomial(Q, 3),
        2 => cyclic_nakayama(Q, 2, 2),
        3 => cyclic_nakayama(Q, 3, 2),
        4 => cyclic_nakayama(Q, 2, 3),
        _ => upper_triangular_2(Q),
    })
}

fn modules_over(a: &Arc<Algebra>) -> Vec<Module> {
    let mut out = Module::simples(a).unwrap();
    for &k in &a.primitive_idempotents().unwrap().reps {
        let p = Module::indecomposable_projective(Arc::clone(a), k).unwrap();
        out.push(p.module_radical().unwrap().0);
        out.push(p);
    }
    out.retain(|m| !m.is_zero());
    out
}

fn pick(items: &[Module], i: usize) -> Module {
    items[i % items.len()].clone()
}

fn nakayama_context() -> impl Strategy<Value = FrobeniusContext> {
    (1usize..=4)
        .prop_flat_map(|n| (Just(n), 1u32..(1 << n)))
        .prop_map(|(n, mask)| ctx_nakayama(Q, n, &(0..n).filter(|c| mask & (1 << c) != 0).collect::<Vec<_>>()).unwrap())
}

/// The battery: simples, indecomposable projectives and the regular module.
fn battery(a: &Arc<Algebra>) -> Vec<Module> {
    let mut out = Module::simples(a).unwrap();
    for &k in &a.primitive_idempotents().unwrap().reps {
        out.push(Module::indecomposable_projective(Arc::clone(a), k).unwrap());
    }
    out.push(Module::regular(Arc::clone(a)));
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn tor_balances(i in 0usize..6, s in 0usize..12, t in 0usize..12) {
        let a = ambient(i);
        let m = pick(&modules_over(&a), s);
        let n = pick(&modules_over(&a.opposite_arc()), t);
        prop_assert_eq!(tor_dims(&m, &n, 0..4).unwrap(), tor_dims_resolving_right(&m, &n, 0..4).unwrap());
    }

    #[test]
    fn ext_is_stable_hom_from_syzygies(i in 0usize..5, s in 0usize..12, t in 0usize..12) {
        let mods = modules_over(&ambient(i));
        let (m, n) = (pick(&mods, s), pick(&mods, t));
        let ext = ext_dims(&m, &n, 1..4).unwrap();
        let mut omega = m.clone();
        for (k, e) in ext.iter().enumerate() {
            omega = syzygy(&omega).unwrap();
            prop_assert_eq!(*e, stable_hom(&omega, &n).unwrap().dim, "degree {}", k + 1);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn cotwist_starts_with_the_quotient(ctx in nakayama_context()) {
        let data = cotwist_data(&ctx.pi, CAP).unwrap();
        prop_assert_eq!(data.tor_dims[0], ctx.lambda_con.dim());
    }

}

/// A context with a degree `t` in `2..=n+2`, where its spherical degrees lie.
fn context_and_degree() -> impl Strategy<Value = (FrobeniusContext, usize)> {
    (1usize..=4)
        .prop_flat_map(|n| (Just(n), 1u32..(1 << n), 2..=n + 2))
        .prop_map(|(n, mask, t)| (ctx_nakayama(Q, n, &(0..n).filter(|c| mask & (1 << c) != 0).collect::<Vec<_>>()).unwrap(), t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn audit_consequences_hold_when_both_sides_do((ctx, t) in context_and_degree()) {
        let report = syz_audit(&ctx, t, CAP).unwrap();
        prop_assert!(report.agreement);
        prop_assert!(report.tau_consistent);
        if let (Some(a), Some(b)) = (&report.side2.tau, &report.tau_from_shapes) {
            prop_assert_eq!(a, b);
        }
        if !report.verdict() {
            return Ok(());
        }
        prop_assert_eq!(report.left_perfect, Some(true));
        prop_assert_eq!(report.positive_rigid, Some(true));

        let data = cotwist_data(&ctx.pi, CAP).unwrap();
        prop_assert_eq!(data.concentrated, Some(t));
        prop_assert_eq!(data.shift, Some(-(t as i64) - 1));
        let tor = tor_bimodule(&ctx.pi, t, CAP).unwrap();
        prop_assert!(tor.bimodule.is_right_projective().unwrap());
        prop_assert!(tor.bimodule.is_left_projective().unwrap());

        let cert = equivalence_certificate(&ctx.pi, None, CAP).unwrap();
        prop_assert!(cert.verdict);
        prop_assert_eq!(cert.endo_dim, ctx.lambda.dim());

        let tilting = tilting_audit(&ctx, &report, CAP).unwrap();
        if tilting.failed.is_empty() {
            prop_assert_eq!(tilting.tensor_dim, ctx.lambda.dim() - ctx.lambda_con.dim());
        }
    }

    #[test]
    fn twist_triangles_and_euler_characteristics(ctx in nakayama_context(), s in 0usize..12) {
        let c = battery(&ctx.lambda)[s % battery(&ctx.lambda).len()].clone();
        let complex = ChainComplex::concentrated(&c, 0);
        let triangle = twist_triangle_check(&ctx.pi, &complex, None, CAP).unwrap();
        prop_assert!(triangle.matches, "{:?}", triangle);

        let out = twist_apply(&ctx.pi, &complex, None, CAP).unwrap();
        if out.truncated {
            return Ok(());
        }
        let (kernel, _) = kernel_ideal(&ctx.pi).unwrap();
        let top = out.kernel_pdim.unwrap() + 1;
        let predicted: i64 = ext_dims(&kernel, &c, 0..top)
            .unwrap()
            .iter()
            .enumerate()
            .map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum();
        prop_assert_eq!(out.complex.euler_characteristic(), predicted);
    }
}

#[test]
fn complexes_with_nonzero_squares_are_rejected() {
    let a = ambient(0);
    let reg = Module::regular(Arc::clone(&a));
    let x = a.right_mult_matrix(&a.basis(1));
    let id = Matrix::identity(Q, 2);
    let terms = vec![reg.clone(), reg.clone(), reg];
    assert!(ChainComplex::new(Arc::clone(&a), 0, terms.clone(), vec![x.clone(), x.clone()]).is_ok());
    assert!(ChainComplex::new(a, 0, terms, vec![id.clone(), id]).is_err());
}

#[test]
fn complete_resolutions_have_cohomology_only_in_degree_zero() {
    for i in 0..6 {
        let a = ambient(i);
        for m in modules_over(&a) {
            let res = minimal_resolution(&m, 6).unwrap();
            if !res.complete {
                continue;
            }
            let c = ChainComplex::from_resolution(&res);
            assert_eq!(c.cohomology_dim(0), m.dim());
            assert_eq!(c.total_cohomology(), m.dim());
        }
    }
}
