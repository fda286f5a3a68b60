//! Exact linear algebra over finite group rings.
//!
//! The crate computes von Neumann dimensions of kernels and images of
//! group-ring matrices over finite groups, with all arithmetic carried out
//! exactly in a cyclotomic-rational coefficient field. On top of the
//! computational core sit verification suites for the subgroup and
//! quotient transfer identities of the strong Atiyah conjecture, and an
//! approximation laboratory that tracks kernel dimensions along families
//! of finite quotients (lamplighter truncations).

pub mod approx;
mod error;
pub mod groupring;
pub mod groups;
pub mod morph;
pub mod scalar;
pub mod verify;
pub mod vnla;

pub use error::{Error, Result};
pub use groupring::{RingElement, RingMatrix};
pub use groups::{Group, Subgroup, Transversal};
pub use scalar::{CycloScalar, FieldSpec, Rational};
pub use vnla::{DimReport, FieldMatrix};

#[cfg(test)]
mod thread_safety {
    // all core values are immutable after construction and shareable
    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn core_types_are_send_and_sync() {
        assert_send_sync::<crate::Group>();
        assert_send_sync::<crate::Subgroup>();
        assert_send_sync::<crate::CycloScalar>();
        assert_send_sync::<crate::RingElement>();
        assert_send_sync::<crate::RingMatrix>();
        assert_send_sync::<crate::FieldMatrix>();
        assert_send_sync::<crate::morph::QuotientMap>();
        assert_send_sync::<crate::approx::QuotientFamily>();
    }
}
