use std::sync::Arc;

use proptest::prelude::*;
use sphertwist_core::algebra::{cyclic_nakayama, truncated_polynomial, upper_triangular_2};
use sphertwist_core::exactlin::RowSpace;
use sphertwist_core::frobenius::{
    build_context, cosyzygy, ext1_vanishes, nakayama_permutation, stable_hom, suspension_power, syzygy, FrobeniusContext, SummandSpec,
};
use sphertwist_core::modules::{hom_basis, in_add, projective_cover};
use sphertwist_core::resolutions::{
    default_cap, e0_lambda, is_partially_essential, minimal_resolution, partially_minimal_resolution, Resolution,
};
use sphertwist_core::{Algebra, Field, Matrix, Module, ModuleHom, Scalar};

const Q: Field = Field::Rational;

/// Ambient algebras; the first six are self-injective.
fn ambient(i: usize) -> Arc<Algebra> {
    Arc::new(match i {
        0 => truncated_polynomial(Q, 2),
        1 => truncated_polynomial(Q, 3),
        2 => cyclic_nakayama(Q, 2, 2),
        3 => cyclic_nakayama(Q, 3, 2),
        4 => cyclic_nakayama(Q, 2, 3),
        5 => cyclic_nakayama(Q, 3, 3),
        _ => upper_triangular_2(Q),
    })
}

const AMBIENTS: usize = 7;
const SELF_INJECTIVE: usize = 6;

/// Simples, indecomposable projectives and their radicals, and `A`.
fn modules_over(a: &Arc<Algebra>) -> Vec<Module> {
    let mut out = vec![Module::regular(Arc::clone(a))];
    out.extend(Module::simples(a).unwrap());
    for &k in &a.primitive_idempotents().unwrap().reps {
        let p = Module::indecomposable_projective(Arc::clone(a), k).unwrap();
        out.push(p.module_radical().unwrap().0);
        out.push(p);
    }
    out.retain(|m| !m.is_zero());
    out
}

fn pick<T: Clone>(items: &[T], i: usize) -> T {
    items[i % items.len()].clone()
}

fn combination(basis: &[Matrix], coeffs: &[i64]) -> Option<Matrix> {
    let first = basis.first()?;
    let mut acc = Matrix::zeros(Q, first.rows(), first.cols());
    for (b, c) in basis.iter().zip(coeffs.iter().cycle()) {
        acc.add_scaled(&Q.from_i64(*c), b);
    }
    Some(acc)
}

/// The submodule generated by `vectors`.
fn generated(m: &Module, vectors: &[Vec<Scalar>]) -> RowSpace {
    let mut space = RowSpace::new(Q, m.dim());
    for v in vectors {
        space.insert(v.clone());
    }
    loop {
        let before = space.dim();
        for v in space.basis().to_vec() {
            for a in m.actions() {
                space.insert(Matrix::from_rows(Q, m.dim(), vec![v.clone()]).mul(a).row(0).to_vec());
            }
        }
        if space.dim() == before {
            return space;
        }
    }
}

fn sparse() -> impl Strategy<Value = i64> {
    prop::sample::select(vec![0, 0, 0, 0, 0, 1, -1, 2])
}

fn int_vector(coeffs: &[i64], n: usize) -> Vec<Scalar> {
    (0..n).map(|i| Q.from_i64(coeffs[i % coeffs.len()])).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn products_are_associative_on_basis_triples(i in 0..AMBIENTS) {
        let a = ambient(i);
        for x in 0..a.dim() {
            for y in 0..a.dim() {
                for z in 0..a.dim() {
                    let left = a.mul(&a.product(x, y), &a.basis(z));
                    let right = a.mul(&a.basis(x), &a.product(y, z));
                    prop_assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn radical_powers_vanish_within_the_dimension(i in 0..AMBIENTS) {
        let a = ambient(i);
        let rad = a.radical().unwrap();
        let index = a.nilpotency_index(&rad).unwrap();
        prop_assert!(index <= a.dim());
        let mut power = rad.clone();
        for _ in 1..index {
            power = a.product_span(&power, &rad).basis().to_vec();
        }
        prop_assert!(power.is_empty());
    }

    #[test]
    fn quotients_split_the_dimension(i in 0..AMBIENTS, square in any::<bool>()) {
        let a = ambient(i);
        let rad = a.radical().unwrap();
        let ideal = if square { a.product_span(&rad, &rad).basis().to_vec() } else { rad };
        let p = a.quotient_surjection(&ideal).unwrap();
        prop_assert_eq!(p.source.dim(), p.target.dim() + p.kernel_dim());
        prop_assert_eq!(p.kernel_dim(), ideal.len());
    }

    #[test]
    fn hom_basis_elements_intertwine(i in 0..AMBIENTS, s in 0usize..16, t in 0usize..16, coeffs in prop::collection::vec(-3i64..=3, 1..6)) {
        let a = ambient(i);
        let mods = modules_over(&a);
        let (m, n) = (pick(&mods, s), pick(&mods, t));
        let basis = hom_basis(&m, &n).unwrap();
        for f in &basis {
            for b in 0..a.dim() {
                prop_assert_eq!(m.action(b).mul(f), f.mul(n.action(b)));
            }
        }
        if let Some(f) = combination(&basis, &coeffs) {
            let h = ModuleHom::new(m.clone(), n, f).unwrap();
            prop_assert_eq!(h.kernel().0.dim() + h.rank(), m.dim());
        }
    }

    #[test]
    fn projective_cover_kernels_lie_in_the_radical(i in 0..AMBIENTS, s in 0usize..16) {
        let m = pick(&modules_over(&ambient(i)), s);
        let (p, epi) = projective_cover(&m).unwrap();
        prop_assert!(epi.is_surjective());
        prop_assert!(p.is_projective().unwrap());
        prop_assert!(p.radical_rows().unwrap().contains_space(&epi.kernel_rows()));
    }

    #[test]
    fn ext1_vanishes_exactly_when_stable_homs_from_the_syzygy_do(i in 0..SELF_INJECTIVE, s in 0usize..16, t in 0usize..16) {
        let mods = modules_over(&ambient(i));
        let (m, n) = (pick(&mods, s), pick(&mods, t));
        let stable = stable_hom(&syzygy(&m).unwrap(), &n).unwrap();
        prop_assert_eq!(ext1_vanishes(&m, &n).unwrap(), stable.dim == 0);
    }

    #[test]
    fn suspension_and_syzygy_are_inverse_up_to_projectives(i in 0..SELF_INJECTIVE, s in 0usize..16) {
        let a = ambient(i);
        let m = pick(&modules_over(&a), s);
        let reg = Module::regular(Arc::clone(&a));
        let with_a = |x: &Module| Module::direct_sum(&[x.clone(), reg.clone()]).unwrap().sum;
        for round_trip in [suspension_power(&syzygy(&m).unwrap(), 1).unwrap(), syzygy(&cosyzygy(&m).unwrap()).unwrap()] {
            prop_assert!(in_add(&with_a(&round_trip), &with_a(&m)).unwrap());
            prop_assert!(in_add(&with_a(&m), &with_a(&round_trip)).unwrap());
        }
    }

    #[test]
    fn nakayama_permutation_is_a_permutation_of_finite_order(i in 0..SELF_INJECTIVE) {
        let sigma = nakayama_permutation(&ambient(i)).unwrap();
        let mut seen = vec![false; sigma.len()];
        for &s in &sigma {
            prop_assert!(!seen[s]);
            seen[s] = true;
        }
        let identity: Vec<usize> = (0..sigma.len()).collect();
        let mut power = sigma.clone();
        let mut order = 1;
        while power != identity {
            power = power.iter().map(|&j| sigma[j]).collect();
            order += 1;
            prop_assert!(order <= sigma.len());
        }
    }
}

/// `X = A ⊕ ⊕ S_c^{m_c}` over a radical square zero cyclic Nakayama
/// algebra.
fn context(n: usize, mask: u32, mults: &[usize]) -> FrobeniusContext {
    let a = Arc::new(cyclic_nakayama(Q, n, 2));
    let mut summands = vec![SummandSpec { label: "A".into(), module: Module::regular(Arc::clone(&a)), multiplicity: 1, projective: true }];
    for c in (0..n).filter(|c| mask & (1 << c) != 0) {
        summands.push(SummandSpec {
            label: format!("S{}", c + 1),
            module: Module::simple(&a, c).unwrap(),
            multiplicity: mults[c % mults.len()],
            projective: false,
        });
    }
    build_context(a, summands).unwrap()
}

fn context_strategy() -> impl Strategy<Value = (usize, u32, Vec<usize>)> {
    (1usize..=4).prop_flat_map(|n| (Just(n), 1u32..(1 << n), prop::collection::vec(1usize..=2, 1..=n)))
}

/// Modules over `Λ` the resolution audits run on.
fn lambda_modules(ctx: &FrobeniusContext) -> Vec<Module> {
    let mut out = vec![ctx.lambda_con_module(), e0_lambda(ctx).unwrap()];
    out.extend(ctx.con_simples().unwrap());
    for i in 0..ctx.n() {
        out.push(ctx.e_lambda_con(i).unwrap());
        out.push(ctx.e_lambda(i).unwrap().module_radical().unwrap().0);
    }
    out.retain(|m| !m.is_zero());
    out
}

fn audit_resolution(ctx: &FrobeniusContext, res: &Resolution) -> Result<(), TestCaseError> {
    prop_assert!(res.is_exact());
    prop_assert!(res.terms_projective().unwrap());
    prop_assert!(res.hom_kills_differentials(&ctx.con_simples().unwrap()).unwrap());
    if res.complete {
        prop_assert_eq!(res.euler_characteristic(), res.target.dim() as i64);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lambda_con_dimension_counts_stable_homs((n, mask, mults) in context_strategy()) {
        let ctx = context(n, mask, &mults);
        let mut expected = 0;
        for &i in &ctx.nonprojective {
            for &j in &ctx.nonprojective {
                let (si, sj) = (&ctx.summands[i], &ctx.summands[j]);
                expected += si.multiplicity * sj.multiplicity * stable_hom(&si.module, &sj.module).unwrap().dim;
            }
        }
        prop_assert_eq!(ctx.lambda_con.dim(), expected);
    }

    #[test]
    fn partially_minimal_resolutions_pass_their_audits((n, mask, mults) in context_strategy(), s in 0usize..16) {
        let ctx = context(n, mask, &mults);
        let m = pick(&lambda_modules(&ctx), s);
        let res = partially_minimal_resolution(&ctx, &m, default_cap(&m)).unwrap();
        audit_resolution(&ctx, &res)?;
    }

    #[test]
    fn minimal_resolutions_are_partially_minimal((n, mask, mults) in context_strategy(), s in 0usize..16) {
        let ctx = context(n, mask, &mults);
        let m = pick(&lambda_modules(&ctx), s);
        let res = minimal_resolution(&m, default_cap(&m)).unwrap();
        audit_resolution(&ctx, &res)?;
    }

}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn partially_essential_epis_compose(
        (n, mask, mults) in context_strategy(),
        s in 0usize..16,
        u in prop::collection::vec(sparse(), 1..12),
        v in prop::collection::vec(sparse(), 1..12),
    ) {
        let ctx = context(n, mask, &mults);
        let m = pick(&lambda_modules(&ctx), s);
        let small = generated(&m, &[int_vector(&u, m.dim())]);
        let large = generated(&m, &[int_vector(&u, m.dim()), int_vector(&v, m.dim())]);
        let (mid, f) = m.quotient_by_space(&small).unwrap();
        let image = RowSpace::from_rows(Q, mid.dim(), large.basis().iter().map(|r| f.apply(r)).collect::<Vec<_>>());
        let (_, g) = mid.quotient_by_space(&image).unwrap();
        if is_partially_essential(&ctx, &f).unwrap() && is_partially_essential(&ctx, &g).unwrap() {
            prop_assert!(is_partially_essential(&ctx, &f.then(&g)).unwrap());
        }
    }
}
