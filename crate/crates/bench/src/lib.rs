//! Shared input builders for the benchmark suite.

use std::sync::Arc;

use atiyah_core::groupring::{RingElement, RingMatrix};
use atiyah_core::groups::Group;
use atiyah_core::scalar::{rational, CycloScalar, FieldSpec};

/// Deterministic dense-ish 2x2 matrix over k[S3] used by the elimination
/// benchmarks.
pub fn s3_test_matrix() -> RingMatrix {
    let g = Group::symmetric(3).expect("within cap");
    let f = FieldSpec::rationals();
    let e =
        |idx: u32, n: i64, d: i64| (idx, CycloScalar::from_rational(&f, rational(n, d)));
    let rows = vec![
        vec![
            RingElement::from_terms(&g, &f, [e(0, 1, 1), e(2, 1, 2), e(3, -1, 1)]).unwrap(),
            RingElement::from_terms(&g, &f, [e(1, 1, 1), e(4, 1, 2)]).unwrap(),
        ],
        vec![
            RingElement::from_terms(&g, &f, [e(5, -1, 2), e(3, 1, 1)]).unwrap(),
            RingElement::from_terms(&g, &f, [e(0, 1, 1), e(2, -1, 1)]).unwrap(),
        ],
    ];
    RingMatrix::from_entries(rows).expect("consistent shape")
}

/// The Markov element of the lamplighter truncation with n lamp positions.
pub fn lamplighter_markov(n: usize) -> (u32, RingElement) {
    let g = Group::lamplighter_truncation(n).expect("within cap");
    let f = FieldSpec::rationals();
    let op = atiyah_core::approx::SymbolicOperator::markov(&["t", "a*t"], &f).expect("valid");
    (n as u32, op.evaluate(&g).expect("words resolve"))
}

/// A couple of dense scalars in Q(z_8) for field-arithmetic benchmarks.
pub fn cyclotomic_pair() -> (CycloScalar, CycloScalar) {
    let f: Arc<FieldSpec> = FieldSpec::new(8).expect("valid conductor");
    let a = CycloScalar::from_coeffs(
        &f,
        vec![rational(1, 2), rational(-3, 1), rational(2, 5), rational(7, 3)],
    );
    let b = CycloScalar::from_coeffs(
        &f,
        vec![rational(-2, 7), rational(1, 1), rational(0, 1), rational(5, 2)],
    );
    (a, b)
}
