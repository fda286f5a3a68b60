//! The group algebra kG over exact cyclotomic-rational scalars: sparse
//! elements, matrices, the *-involution and averaging idempotents.
//!
//! Vectors are rows and matrices act by right multiplication x -> xA; all
//! kernel and image language refers to this action.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::groups::{Group, Subgroup};
use crate::scalar::{CycloScalar, FieldSpec, Rational};
use crate::{Error, Result};

/// A sparse element of the group algebra: map from element index to a
/// nonzero coefficient.
#[derive(Clone, PartialEq)]
pub struct RingElement {
    group: Group,
    field: Arc<FieldSpec>,
    terms: BTreeMap<u32, CycloScalar>,
}

impl RingElement {
    pub fn zero(group: &Group, field: &Arc<FieldSpec>) -> RingElement {
        RingElement {
            group: group.clone(),
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(group: &Group, field: &Arc<FieldSpec>) -> RingElement {
        RingElement::group_element(group, field, 0)
    }

    /// The basis element g with coefficient 1.
    pub fn group_element(group: &Group, field: &Arc<FieldSpec>, g: u32) -> RingElement {
        let mut terms = BTreeMap::new();
        terms.insert(g, CycloScalar::one(field));
        RingElement {
            group: group.clone(),
            field: field.clone(),
            terms,
        }
    }

    /// Builds an element from (element, coefficient) pairs, merging repeats
    /// and dropping zero coefficients.
    pub fn from_terms<I>(group: &Group, field: &Arc<FieldSpec>, terms: I) -> Result<RingElement>
    where
        I: IntoIterator<Item = (u32, CycloScalar)>,
    {
        let mut out = RingElement::zero(group, field);
        for (g, c) in terms {
            if g as usize >= group.order() {
                return Err(Error::UnknownElement(format!("#{g}")));
            }
            if !FieldSpec::same(field, c.field()) {
                return Err(Error::FieldMismatch {
                    left: field.conductor(),
                    right: c.field().conductor(),
                });
            }
            out.add_term(g, &c);
        }
        Ok(out)
    }

    fn add_term(&mut self, g: u32, c: &CycloScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(g) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().checked_add(c).expect("same field");
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &CycloScalar)> {
        self.terms.iter().map(|(&g, c)| (g, c))
    }

    pub fn support(&self) -> Vec<u32> {
        self.terms.keys().copied().collect()
    }

    pub fn coeff(&self, g: u32) -> CycloScalar {
        self.terms
            .get(&g)
            .cloned()
            .unwrap_or_else(|| CycloScalar::zero(&self.field))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// True iff every supported group element lies in the subgroup.
    pub fn is_supported_in(&self, u: &Subgroup) -> bool {
        assert!(
            *u.parent() == self.group,
            "subgroup belongs to a different group"
        );
        self.terms.keys().all(|&g| u.contains(g))
    }

    fn check_compatible(&self, rhs: &RingElement) -> Result<()> {
        if self.group != rhs.group {
            return Err(Error::GroupMismatch {
                left: self.group.label().to_string(),
                right: rhs.group.label().to_string(),
            });
        }
        FieldSpec::same(&self.field, &rhs.field)
            .then_some(())
            .ok_or(Error::FieldMismatch {
                left: self.field.conductor(),
                right: rhs.field.conductor(),
            })
    }

    pub fn checked_add(&self, rhs: &RingElement) -> Result<RingElement> {
        self.check_compatible(rhs)?;
        let mut out = self.clone();
        for (&g, c) in &rhs.terms {
            out.add_term(g, c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, rhs: &RingElement) -> Result<RingElement> {
        self.check_compatible(rhs)?;
        let mut out = self.clone();
        for (&g, c) in &rhs.terms {
            out.add_term(g, &c.neg());
        }
        Ok(out)
    }

    /// Convolution product: (xy)_h = sum over ab = h of x_a y_b.
    pub fn checked_mul(&self, rhs: &RingElement) -> Result<RingElement> {
        self.check_compatible(rhs)?;
        let mut out = RingElement::zero(&self.group, &self.field);
        for (&a, ca) in &self.terms {
            for (&b, cb) in &rhs.terms {
                let h = self.group.mul(a, b);
                let c = ca.checked_mul(cb).expect("same field");
                out.add_term(h, &c);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &CycloScalar) -> RingElement {
        assert!(
            FieldSpec::same(&self.field, c.field()),
            "scalar field mismatch"
        );
        let mut out = RingElement::zero(&self.group, &self.field);
        for (&g, v) in &self.terms {
            out.add_term(g, &v.checked_mul(c).expect("same field"));
        }
        out
    }

    /// The *-involution: coefficients conjugated, group elements inverted.
    /// This is the adjoint of right multiplication for the standard inner
    /// product (conjugate-linear in the first slot).
    pub fn involution(&self) -> RingElement {
        let mut out = RingElement::zero(&self.group, &self.field);
        for (&g, c) in &self.terms {
            out.add_term(self.group.inv(g), &c.conj());
        }
        out
    }

    /// <x, y> = sum over g of conj(x_g) * y_g.
    pub fn inner(&self, rhs: &RingElement) -> Result<CycloScalar> {
        self.check_compatible(rhs)?;
        let mut acc = CycloScalar::zero(&self.field);
        for (&g, c) in &self.terms {
            if let Some(d) = rhs.terms.get(&g) {
                acc = acc
                    .checked_add(&c.conj().checked_mul(d).expect("same field"))
                    .expect("same field");
            }
        }
        Ok(acc)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&g, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "({c})#{g}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingElement[{}: {}]", self.group.label(), self)
    }
}

impl std::ops::Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        self.checked_add(rhs).expect("ring element mismatch")
    }
}

impl std::ops::Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        self.checked_sub(rhs).expect("ring element mismatch")
    }
}

impl std::ops::Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        self.checked_mul(rhs).expect("ring element mismatch")
    }
}

impl std::ops::Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement::zero(&self.group, &self.field)
            .checked_sub(self)
            .expect("same element")
    }
}

/// The averaging idempotent N_V = (1/|V|) * sum of the members of V.
pub fn averaging_idempotent(v: &Subgroup, field: &Arc<FieldSpec>) -> RingElement {
    let c = CycloScalar::from_rational(
        field,
        Rational::new(1.into(), (v.order() as i64).into()),
    );
    RingElement::from_terms(v.parent(), field, v.members().iter().map(|&g| (g, c.clone())))
        .expect("members are in range")
}

/// A dense matrix over the group algebra.
#[derive(Clone, PartialEq)]
pub struct RingMatrix {
    group: Group,
    field: Arc<FieldSpec>,
    rows: usize,
    cols: usize,
    entries: Vec<RingElement>,
}

impl RingMatrix {
    pub fn zero(group: &Group, field: &Arc<FieldSpec>, rows: usize, cols: usize) -> RingMatrix {
        RingMatrix {
            group: group.clone(),
            field: field.clone(),
            rows,
            cols,
            entries: vec![RingElement::zero(group, field); rows * cols],
        }
    }

    pub fn identity(group: &Group, field: &Arc<FieldSpec>, n: usize) -> RingMatrix {
        let mut m = RingMatrix::zero(group, field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = RingElement::one(group, field);
        }
        m
    }

    pub fn from_entries(rows: Vec<Vec<RingElement>>) -> Result<RingMatrix> {
        let m = rows.len();
        if m == 0 {
            return Err(Error::ShapeMismatch("matrix needs at least one row".into()));
        }
        let n = rows[0].len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch("ragged or empty rows".into()));
        }
        let group = rows[0][0].group().clone();
        let field = rows[0][0].field().clone();
        for r in &rows {
            for e in r {
                if *e.group() != group {
                    return Err(Error::GroupMismatch {
                        left: group.label().to_string(),
                        right: e.group().label().to_string(),
                    });
                }
                if !FieldSpec::same(&field, e.field()) {
                    return Err(Error::FieldMismatch {
                        left: field.conductor(),
                        right: e.field().conductor(),
                    });
                }
            }
        }
        Ok(RingMatrix {
            group,
            field,
            rows: m,
            cols: n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Single-entry 1x1 matrix.
    pub fn single(x: RingElement) -> RingMatrix {
        RingMatrix {
            group: x.group().clone(),
            field: x.field().clone(),
            rows: 1,
            cols: 1,
            entries: vec![x],
        }
    }

    /// m x m matrix with x on the diagonal and zero elsewhere.
    pub fn diagonal(x: &RingElement, m: usize) -> RingMatrix {
        let mut out = RingMatrix::zero(x.group(), x.field(), m, m);
        for i in 0..m {
            out.entries[i * m + i] = x.clone();
        }
        out
    }

    /// Horizontal concatenation (A | diag(x)) of shape m x (n+m).
    pub fn augment(&self, x: &RingElement) -> Result<RingMatrix> {
        if *x.group() != self.group {
            return Err(Error::GroupMismatch {
                left: self.group.label().to_string(),
                right: x.group().label().to_string(),
            });
        }
        if !FieldSpec::same(&self.field, x.field()) {
            return Err(Error::FieldMismatch {
                left: self.field.conductor(),
                right: x.field().conductor(),
            });
        }
        let (m, n) = (self.rows, self.cols);
        let mut out = RingMatrix::zero(&self.group, &self.field, m, n + m);
        for i in 0..m {
            for j in 0..n {
                out.entries[i * (n + m) + j] = self.entry(i, j).clone();
            }
            out.entries[i * (n + m) + n + i] = x.clone();
        }
        Ok(out)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &RingElement {
        &self.entries[i * self.cols + j]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, v: RingElement) {
        assert!(*v.group() == self.group && FieldSpec::same(&self.field, v.field()));
        self.entries[i * self.cols + j] = v;
    }

    pub fn map_entries(&self, f: impl Fn(&RingElement) -> RingElement) -> RingMatrix {
        RingMatrix {
            group: self.group.clone(),
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn is_supported_in(&self, u: &Subgroup) -> bool {
        self.entries.iter().all(|e| e.is_supported_in(u))
    }

    pub fn checked_mul(&self, rhs: &RingMatrix) -> Result<RingMatrix> {
        if self.group != rhs.group {
            return Err(Error::GroupMismatch {
                left: self.group.label().to_string(),
                right: rhs.group.label().to_string(),
            });
        }
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = RingMatrix::zero(&self.group, &self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = RingElement::zero(&self.group, &self.field);
                for k in 0..self.cols {
                    let prod = self.entry(i, k).checked_mul(rhs.entry(k, j))?;
                    acc = acc.checked_add(&prod)?;
                }
                out.entries[i * rhs.cols + j] = acc;
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RingMatrix[{} {}x{}]", self.group.label(), self.rows, self.cols)?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                writeln!(f, "  [{i}][{j}] = {}", self.entry(i, j))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    fn q() -> Arc<FieldSpec> {
        FieldSpec::rationals()
    }

    #[test]
    fn identity_acts_trivially() {
        let g = Group::cyclic(3).unwrap();
        let f = q();
        let e = RingElement::one(&g, &f);
        let x = RingElement::from_terms(
            &g,
            &f,
            [
                (1u32, CycloScalar::from_rational(&f, rational(2, 3))),
                (2u32, CycloScalar::from_integer(&f, -1)),
            ],
        )
        .unwrap();
        assert_eq!(e.checked_mul(&x).unwrap(), x);
        assert_eq!(x.checked_mul(&e).unwrap(), x);
    }

    #[test]
    fn zero_divisor_in_z2() {
        // (e + s)(e - s) = 0 in k[Z/2]
        let g = Group::cyclic(2).unwrap();
        let f = q();
        let one = CycloScalar::one(&f);
        let a = RingElement::from_terms(&g, &f, [(0, one.clone()), (1, one.clone())]).unwrap();
        let b = RingElement::from_terms(&g, &f, [(0, one.clone()), (1, one.neg())]).unwrap();
        assert!(a.checked_mul(&b).unwrap().is_zero());
    }

    #[test]
    fn full_sum_is_right_invariant() {
        let g = Group::cyclic(3).unwrap();
        let f = q();
        let one = CycloScalar::one(&f);
        let total =
            RingElement::from_terms(&g, &f, (0..3).map(|i| (i, one.clone()))).unwrap();
        let gen = RingElement::group_element(&g, &f, 1);
        assert_eq!(total.checked_mul(&gen).unwrap(), total);
    }

    #[test]
    fn involution_examples() {
        let z2 = Group::cyclic(2).unwrap();
        let f = q();
        let one = CycloScalar::one(&f);
        let a = RingElement::from_terms(&z2, &f, [(0, one.clone()), (1, one.clone())]).unwrap();
        assert_eq!(a.involution(), a);

        let e = RingElement::one(&z2, &f);
        assert_eq!(e.involution(), e);

        // (zeta4 * g)^* = -zeta4 * g^3 in k[Z/4] over Q(zeta4)
        let z4 = Group::cyclic(4).unwrap();
        let f4 = FieldSpec::new(4).unwrap();
        let x = RingElement::from_terms(&z4, &f4, [(1, CycloScalar::zeta(&f4))]).unwrap();
        let expected =
            RingElement::from_terms(&z4, &f4, [(3, CycloScalar::zeta(&f4).neg())]).unwrap();
        assert_eq!(x.involution(), expected);
    }

    #[test]
    fn involution_is_antimultiplicative() {
        let g = Group::symmetric(3).unwrap();
        let f = q();
        let one = CycloScalar::one(&f);
        let x = RingElement::from_terms(&g, &f, [(2, one.clone()), (3, one.clone())]).unwrap();
        let y = RingElement::from_terms(
            &g,
            &f,
            [(1, CycloScalar::from_rational(&f, rational(1, 2))), (4, one.clone())],
        )
        .unwrap();
        let lhs = x.checked_mul(&y).unwrap().involution();
        let rhs = y.involution().checked_mul(&x.involution()).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(x.involution().involution(), x);
    }

    #[test]
    fn averaging_idempotents() {
        let s3 = Group::symmetric(3).unwrap();
        let f = q();
        let triv = Subgroup::trivial(&s3);
        assert_eq!(averaging_idempotent(&triv, &f), RingElement::one(&s3, &f));

        let z2 = Group::cyclic(2).unwrap();
        let full = Subgroup::full(&z2);
        let nv = averaging_idempotent(&full, &f);
        assert_eq!(nv.coeff(0).as_rational().unwrap(), rational(1, 2));
        assert_eq!(nv.coeff(1).as_rational().unwrap(), rational(1, 2));

        let a3 = Subgroup::closure(&s3, &[3]);
        let nv = averaging_idempotent(&a3, &f);
        assert_eq!(nv.num_terms(), 3);
        assert_eq!(nv.coeff(3).as_rational().unwrap(), rational(1, 3));
        // idempotent and self-adjoint
        assert_eq!(nv.checked_mul(&nv).unwrap(), nv);
        assert_eq!(nv.involution(), nv);
    }

    #[test]
    fn absorption_of_nested_idempotents() {
        // N_H * N_V = N_V = N_V * N_H when H <= V
        let s3 = Group::symmetric(3).unwrap();
        let f = q();
        let v = Subgroup::closure(&s3, &[3]);
        let h = Subgroup::trivial(&s3);
        let nv = averaging_idempotent(&v, &f);
        let nh = averaging_idempotent(&h, &f);
        assert_eq!(nh.checked_mul(&nv).unwrap(), nv);
        assert_eq!(nv.checked_mul(&nh).unwrap(), nv);
        // and with a nontrivial nested pair: {e, g^2} inside Z/4
        let z4 = Group::cyclic(4).unwrap();
        let v = Subgroup::full(&z4);
        let h = Subgroup::closure(&z4, &[2]);
        let nv = averaging_idempotent(&v, &f);
        let nh = averaging_idempotent(&h, &f);
        assert_eq!(nh.checked_mul(&nv).unwrap(), nv);
        assert_eq!(nv.checked_mul(&nh).unwrap(), nv);
    }

    #[test]
    fn centrality_under_normalization() {
        // V normalized by U forces N_V u = u N_V for u in U
        let s3 = Group::symmetric(3).unwrap();
        let f = q();
        let v = Subgroup::closure(&s3, &[3]);
        let u = Subgroup::closure(&s3, &[2]);
        assert!(v.is_normalized_by(&u));
        let nv = averaging_idempotent(&v, &f);
        for &um in u.members() {
            let ue = RingElement::group_element(&s3, &f, um);
            assert_eq!(
                nv.checked_mul(&ue).unwrap(),
                ue.checked_mul(&nv).unwrap()
            );
        }
    }

    #[test]
    fn diagonal_and_augment() {
        let g = Group::cyclic(2).unwrap();
        let f = q();
        let e = RingElement::one(&g, &f);
        let d = RingMatrix::diagonal(&e, 2);
        assert_eq!(d, RingMatrix::identity(&g, &f, 2));

        let zero = RingElement::zero(&g, &f);
        let d0 = RingMatrix::diagonal(&zero, 3);
        assert_eq!(d0, RingMatrix::zero(&g, &f, 3, 3));

        let one = CycloScalar::one(&f);
        let a = RingMatrix::single(
            RingElement::from_terms(&g, &f, [(0, one.clone()), (1, one.clone())]).unwrap(),
        );
        let aug = a.augment(&e).unwrap();
        assert_eq!(aug.rows(), 1);
        assert_eq!(aug.cols(), 2);
        assert_eq!(aug.entry(0, 1), &e);
    }

    #[test]
    fn matrix_commutation_with_averaging_diagonals() {
        // entries in kU with V normalized by U commute with diag(N_V)
        let s3 = Group::symmetric(3).unwrap();
        let f = q();
        let u = Subgroup::closure(&s3, &[2]);
        let v = Subgroup::closure(&s3, &[3]);
        let one = CycloScalar::one(&f);
        let a = RingMatrix::single(
            RingElement::from_terms(&s3, &f, [(0, one.clone()), (2, one.clone())]).unwrap(),
        );
        assert!(a.is_supported_in(&u));
        let nv = averaging_idempotent(&v, &f);
        let dn = RingMatrix::diagonal(&nv, 1);
        assert_eq!(
            dn.checked_mul(&a).unwrap(),
            a.checked_mul(&dn).unwrap()
        );
    }

    #[test]
    fn mismatches_are_errors() {
        let f = q();
        let a = RingElement::one(&Group::cyclic(2).unwrap(), &f);
        let b = RingElement::one(&Group::cyclic(3).unwrap(), &f);
        assert!(matches!(
            a.checked_mul(&b),
            Err(Error::GroupMismatch { .. })
        ));
        let g = Group::cyclic(2).unwrap();
        let c = RingElement::one(&g, &FieldSpec::new(3).unwrap());
        let d = RingElement::one(&g, &FieldSpec::new(4).unwrap());
        assert!(matches!(
            c.checked_add(&d),
            Err(Error::FieldMismatch { .. })
        ));
    }

    #[test]
    fn inner_product_is_conjugate_linear_in_first_slot() {
        let g = Group::cyclic(4).unwrap();
        let f = FieldSpec::new(4).unwrap();
        let z = CycloScalar::zeta(&f);
        let x = RingElement::from_terms(&g, &f, [(1, z.clone())]).unwrap();
        let y = RingElement::from_terms(&g, &f, [(1, CycloScalar::one(&f))]).unwrap();
        // <z*g, g> = conj(z), <g, z*g> = z
        assert_eq!(x.inner(&y).unwrap(), z.conj());
        assert_eq!(y.inner(&x).unwrap(), z);
    }
}
