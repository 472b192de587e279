//! Small algebras and contexts used throughout the test-suites and the
//! shipped catalog.

use std::sync::Arc;

use crate::algebra::{cyclic_nakayama, truncated_polynomial, upper_triangular_2, Algebra};
use crate::exactlin::Field;
use crate::frobenius::{build_context, FrobeniusContext, FrobeniusError, SummandSpec};
use crate::modules::Module;

/// `k[x]/(x^2)`.
pub fn dual_numbers(field: Field) -> Arc<Algebra> {
    Arc::new(truncated_polynomial(field, 2))
}

/// The cyclic Nakayama algebra on three vertices with radical square zero.
pub fn nakayama3(field: Field) -> Arc<Algebra> {
    Arc::new(cyclic_nakayama(field, 3, 2))
}

pub fn upper_triangular(field: Field) -> Arc<Algebra> {
    Arc::new(upper_triangular_2(field))
}

fn regular_summand(a: &Arc<Algebra>) -> SummandSpec {
    SummandSpec { label: "A".into(), module: Module::regular(Arc::clone(a)), multiplicity: 1, projective: true }
}

fn simple_summand(a: &Arc<Algebra>, class: usize) -> Result<SummandSpec, FrobeniusError> {
    Ok(SummandSpec { label: format!("S{}", class + 1), module: Module::simple(a, class)?, multiplicity: 1, projective: false })
}

/// `X = A ⊕ S` over the dual numbers.
pub fn ctx_dual_numbers(field: Field) -> Result<FrobeniusContext, FrobeniusError> {
    let a = dual_numbers(field);
    build_context(Arc::clone(&a), vec![regular_summand(&a), simple_summand(&a, 0)?])
}

/// `X = A ⊕ S_{c}` for the listed simple classes over the cyclic Nakayama
/// algebra on `n` vertices with radical square zero.
pub fn ctx_nakayama(field: Field, n: usize, classes: &[usize]) -> Result<FrobeniusContext, FrobeniusError> {
    let a = Arc::new(cyclic_nakayama(field, n, 2));
    let mut summands = vec![regular_summand(&a)];
    for &c in classes {
        summands.push(simple_summand(&a, c)?);
    }
    build_context(a, summands)
}

/// `X = A ⊕ S1 ⊕ S2 ⊕ S3` over [`nakayama3`].
pub fn ctx_nakayama3_all(field: Field) -> Result<FrobeniusContext, FrobeniusError> {
    ctx_nakayama(field, 3, &[0, 1, 2])
}

/// `X = A ⊕ S1` over [`nakayama3`].
pub fn ctx_nakayama3_one(field: Field) -> Result<FrobeniusContext, FrobeniusError> {
    ctx_nakayama(field, 3, &[0])
}
