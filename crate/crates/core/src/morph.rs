//! Quotient maps with finite kernel and their transfer maps, plus
//! restriction of matrices to finite-index subgroups.
//!
//! For a surjection p: G -> Q with kernel K, the pushforward p_* sums
//! coefficients along fibers and the pullback p^* spreads a coefficient
//! uniformly over its fiber, scaled by 1/|K|.

use std::collections::BTreeMap;

use num::BigInt;

use crate::groupring::{averaging_idempotent, RingElement, RingMatrix};
use crate::groups::{Group, Subgroup, Transversal};
use crate::scalar::{CycloScalar, Rational};
use crate::{Error, Result};

/// Complement search is attempted automatically only below this order.
const SECTION_SEARCH_BOUND: usize = 512;

/// A surjective homomorphism G -> Q with finite kernel K, together with
/// coset data and an optional splitting section.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    source: Group,
    kernel: Subgroup,
    target: Group,
    /// projection[g] is the target index of the coset of g.
    projection: Vec<u32>,
    /// fibers[q] lists the source elements mapping to q.
    fibers: Vec<Vec<u32>>,
    /// section[q], when present, is a homomorphic lift with p(s(q)) = q.
    section: Option<Vec<u32>>,
}

/// Entrywise transfer direction for matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Push,
    Pull,
}

impl QuotientMap {
    /// Builds G -> G/K for a normal subgroup K. Cosets are labeled by their
    /// minimal element index, which fixes the quotient table deterministically.
    /// For small groups a splitting section is searched for automatically.
    pub fn new(g: &Group, k: &Subgroup) -> Result<QuotientMap> {
        if *k.parent() != *g {
            return Err(Error::GroupMismatch {
                left: g.label().to_string(),
                right: k.parent().label().to_string(),
            });
        }
        if !k.is_normal() {
            return Err(Error::NotNormal);
        }
        let order = g.order();
        let ksize = k.order();
        let qsize = order / ksize;
        // coset of g is gK; label it by the minimal member index
        let mut coset_min = vec![u32::MAX; order];
        let mut mins = Vec::with_capacity(qsize);
        for x in 0..order as u32 {
            if coset_min[x as usize] != u32::MAX {
                continue;
            }
            let members: Vec<u32> = k.members().iter().map(|&kk| g.mul(x, kk)).collect();
            let min = *members.iter().min().expect("kernel is nonempty");
            for m in &members {
                coset_min[*m as usize] = min;
            }
            mins.push(min);
        }
        mins.sort_unstable();
        let rank_of_min: BTreeMap<u32, u32> = mins
            .iter()
            .enumerate()
            .map(|(i, &m)| (m, i as u32))
            .collect();
        let projection: Vec<u32> = (0..order)
            .map(|x| rank_of_min[&coset_min[x]])
            .collect();
        let mut fibers = vec![Vec::new(); qsize];
        for (x, &q) in projection.iter().enumerate() {
            fibers[q as usize].push(x as u32);
        }
        // quotient multiplication through representatives
        let mut mul = vec![0u32; qsize * qsize];
        for (qa, fa) in fibers.iter().enumerate() {
            for (qb, fb) in fibers.iter().enumerate() {
                mul[qa * qsize + qb] = projection[g.mul(fa[0], fb[0]) as usize];
            }
        }
        // generator names transport along p
        let mut gens = BTreeMap::new();
        for (name, &ge) in g.generators() {
            gens.insert(name.clone(), projection[ge as usize]);
        }
        let label = format!("{}/K{}", g.label(), ksize);
        let target = Group::from_table(
            mul.chunks(qsize).map(|r| r.to_vec()).collect(),
            label.clone(),
        )?
        .relabeled(label, gens)?;
        let mut map = QuotientMap {
            source: g.clone(),
            kernel: k.clone(),
            target,
            projection,
            fibers,
            section: None,
        };
        if order <= SECTION_SEARCH_BOUND {
            map.section = map.find_complement_section();
        }
        Ok(map)
    }

    /// Installs a section from an explicit complement subgroup
    /// (C with C meet K trivial and |C| = |Q|).
    pub fn with_section_from(mut self, complement: &Subgroup) -> Result<QuotientMap> {
        if *complement.parent() != self.source {
            return Err(Error::GroupMismatch {
                left: self.source.label().to_string(),
                right: complement.parent().label().to_string(),
            });
        }
        let section = self.section_from_complement(complement).ok_or_else(|| {
            Error::Invalid("the given subgroup is not a complement of the kernel".into())
        })?;
        self.section = Some(section);
        Ok(self)
    }

    fn section_from_complement(&self, c: &Subgroup) -> Option<Vec<u32>> {
        if c.order() != self.target.order() {
            return None;
        }
        if c.members().iter().filter(|&&x| self.kernel.contains(x)).count() != 1 {
            return None;
        }
        let mut section = vec![u32::MAX; self.target.order()];
        for &x in c.members() {
            let q = self.projection[x as usize] as usize;
            if section[q] != u32::MAX {
                return None;
            }
            section[q] = x;
        }
        Some(section)
    }

    fn find_complement_section(&self) -> Option<Vec<u32>> {
        let n = self.source.order() as u32;
        // closures of single elements, then of pairs, in index order
        for x in 0..n {
            let c = Subgroup::closure(&self.source, &[x]);
            if let Some(s) = self.section_from_complement(&c) {
                return Some(s);
            }
        }
        for x in 0..n {
            for y in x + 1..n {
                let c = Subgroup::closure(&self.source, &[x, y]);
                if let Some(s) = self.section_from_complement(&c) {
                    return Some(s);
                }
            }
        }
        None
    }

    pub fn source(&self) -> &Group {
        &self.source
    }

    pub fn target(&self) -> &Group {
        &self.target
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    pub fn kernel_size(&self) -> usize {
        self.kernel.order()
    }

    pub fn project(&self, g: u32) -> u32 {
        self.projection[g as usize]
    }

    pub fn fiber(&self, q: u32) -> &[u32] {
        &self.fibers[q as usize]
    }

    pub fn section(&self) -> Option<&[u32]> {
        self.section.as_deref()
    }

    /// Image of a subgroup of the source, as a member set in the target.
    pub fn image_members(&self, w: &Subgroup) -> Vec<u32> {
        let mut out: Vec<u32> = w.members().iter().map(|&x| self.project(x)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// p_*: sums coefficients along fibers.
    pub fn pushforward(&self, x: &RingElement) -> Result<RingElement> {
        if *x.group() != self.source {
            return Err(Error::GroupMismatch {
                left: self.source.label().to_string(),
                right: x.group().label().to_string(),
            });
        }
        RingElement::from_terms(
            &self.target,
            x.field(),
            x.terms().map(|(g, c)| (self.project(g), c.clone())),
        )
    }

    /// p^*: each source element g picks up the coefficient of p(g), scaled
    /// by 1/|K|.
    pub fn pullback(&self, y: &RingElement) -> Result<RingElement> {
        if *y.group() != self.target {
            return Err(Error::GroupMismatch {
                left: self.target.label().to_string(),
                right: y.group().label().to_string(),
            });
        }
        let scale = CycloScalar::from_rational(
            y.field(),
            Rational::new(BigInt::from(1), BigInt::from(self.kernel_size() as i64)),
        );
        let mut terms = Vec::new();
        for (q, c) in y.terms() {
            let cc = c.checked_mul(&scale).expect("same field");
            for &g in self.fiber(q) {
                terms.push((g, cc.clone()));
            }
        }
        RingElement::from_terms(&self.source, y.field(), terms)
    }

    /// Entrywise transfer of a matrix.
    pub fn matrix_map(&self, a: &RingMatrix, direction: Direction) -> Result<RingMatrix> {
        let rows = a.rows();
        let cols = a.cols();
        let mut out = Vec::with_capacity(rows);
        for i in 0..rows {
            let mut row = Vec::with_capacity(cols);
            for j in 0..cols {
                row.push(match direction {
                    Direction::Push => self.pushforward(a.entry(i, j))?,
                    Direction::Pull => self.pullback(a.entry(i, j))?,
                });
            }
            out.push(row);
        }
        RingMatrix::from_entries(out)
    }

    /// N_K as an element of the source group algebra (equals p^* of the
    /// target identity).
    pub fn kernel_idempotent(
        &self,
        field: &std::sync::Arc<crate::scalar::FieldSpec>,
    ) -> RingElement {
        averaging_idempotent(&self.kernel, field)
    }
}

/// A matrix restricted to a finite-index subgroup, together with the
/// subgroup's standalone table and its member map back to the parent.
#[derive(Clone, Debug)]
pub struct RestrictedMatrix {
    pub matrix: RingMatrix,
    pub group: Group,
    pub to_parent: Vec<u32>,
}

/// Rewrites A over kG as a [G:U]m x [G:U]n matrix over kU, viewing kG^m as a
/// free kU-module on the right transversal.
///
/// With representatives {t_a} (so G is the disjoint union of the cosets
/// U t_a), block (a, b) at entry (i, j) is the kU-part of t_a * A[i][j] *
/// t_b^(-1); blocks with empty U-support are zero.
pub fn restrict_matrix(a: &RingMatrix, t: &Transversal) -> Result<RestrictedMatrix> {
    let u = t.subgroup();
    let g = a.group();
    if u.parent() != g {
        return Err(Error::GroupMismatch {
            left: g.label().to_string(),
            right: u.parent().label().to_string(),
        });
    }
    let (ugroup, to_parent) = u.as_group();
    let mut local = vec![u32::MAX; g.order()];
    for (i, &m) in to_parent.iter().enumerate() {
        local[m as usize] = i as u32;
    }
    let d = t.len();
    let (m, n) = (a.rows(), a.cols());
    let field = a.field();
    let mut rows = vec![vec![RingElement::zero(&ugroup, field); d * n]; d * m];
    for (ai, &ta) in t.reps().iter().enumerate() {
        for (bi, &tb) in t.reps().iter().enumerate() {
            let tb_inv = g.inv(tb);
            for i in 0..m {
                for j in 0..n {
                    let mut terms = Vec::new();
                    for (x, c) in a.entry(i, j).terms() {
                        let y = g.mul(g.mul(ta, x), tb_inv);
                        if u.contains(y) {
                            terms.push((local[y as usize], c.clone()));
                        }
                    }
                    if !terms.is_empty() {
                        rows[ai * m + i][bi * n + j] =
                            RingElement::from_terms(&ugroup, field, terms)?;
                    }
                }
            }
        }
    }
    Ok(RestrictedMatrix {
        matrix: RingMatrix::from_entries(rows)?,
        group: ugroup,
        to_parent,
    })
}

/// Re-expresses a matrix supported in U as a matrix over U's own table
/// (the inverse of viewing a kU-matrix as a kG-matrix).
pub fn matrix_over_subgroup(a: &RingMatrix, u: &Subgroup) -> Result<RestrictedMatrix> {
    if !a.is_supported_in(u) {
        return Err(Error::Invalid(
            "matrix entries are not supported in the subgroup".into(),
        ));
    }
    let (ugroup, to_parent) = u.as_group();
    let mut local = vec![u32::MAX; a.group().order()];
    for (i, &m) in to_parent.iter().enumerate() {
        local[m as usize] = i as u32;
    }
    let mut rows = Vec::with_capacity(a.rows());
    for i in 0..a.rows() {
        let mut row = Vec::with_capacity(a.cols());
        for j in 0..a.cols() {
            let terms: Vec<(u32, CycloScalar)> = a
                .entry(i, j)
                .terms()
                .map(|(g, c)| (local[g as usize], c.clone()))
                .collect();
            row.push(RingElement::from_terms(&ugroup, a.field(), terms)?);
        }
        rows.push(row);
    }
    Ok(RestrictedMatrix {
        matrix: RingMatrix::from_entries(rows)?,
        group: ugroup,
        to_parent,
    })
}
