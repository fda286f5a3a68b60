//! Regular representations, exact kernel bases, orthogonal projections,
//! and von Neumann traces and dimensions.
//!
//! A ring matrix A of shape m x n over a finite group G induces the right
//! multiplication operator x -> xA on row vectors, which in the group-element
//! basis is an m|G| x n|G| matrix over the coefficient field. The von Neumann
//! dimension of its kernel is the field kernel dimension divided by |G|.

use std::fmt;
use std::sync::Arc;

use num::{BigInt, One, Zero};
use serde::Serialize;

use crate::groupring::RingMatrix;
use crate::groups::Group;
use crate::scalar::{CycloScalar, FieldSpec, Rational};
use crate::{Error, Result};

pub mod modular;

/// Dense matrix over the coefficient field.
#[derive(Clone, PartialEq)]
pub struct FieldMatrix {
    field: Arc<FieldSpec>,
    rows: usize,
    cols: usize,
    data: Vec<CycloScalar>,
}

impl FieldMatrix {
    pub fn zero(field: &Arc<FieldSpec>, rows: usize, cols: usize) -> FieldMatrix {
        FieldMatrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![CycloScalar::zero(field); rows * cols],
        }
    }

    pub fn identity(field: &Arc<FieldSpec>, n: usize) -> FieldMatrix {
        let mut m = FieldMatrix::zero(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = CycloScalar::one(field);
        }
        m
    }

    pub fn from_rows(field: &Arc<FieldSpec>, rows: Vec<Vec<CycloScalar>>) -> FieldMatrix {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        FieldMatrix {
            field: field.clone(),
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
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

    pub fn get(&self, i: usize, j: usize) -> &CycloScalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycloScalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[CycloScalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Conjugate transpose (entrywise conjugation, then transpose).
    pub fn conj_transpose(&self) -> FieldMatrix {
        let mut out = FieldMatrix::zero(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j).conj();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &FieldMatrix) -> FieldMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in matmul");
        let mut out = FieldMatrix::zero(&self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.checked_mul(b).expect("same field");
                    let cur = out.get(i, j).checked_add(&prod).expect("same field");
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn sub(&self, rhs: &FieldMatrix) -> FieldMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a = a.checked_sub(b).expect("same field");
        }
        out
    }

    /// Reduced row echelon form and the pivot columns.
    ///
    /// Over plain rationals the forward pass is fraction-free (Bareiss);
    /// over a proper cyclotomic field it is ordinary Gauss-Jordan with eager
    /// canonicalization. Pivots are the first nonzero entry in column order,
    /// so the output is deterministic.
    pub fn rref(&self) -> (FieldMatrix, Vec<usize>) {
        if self.field.conductor() == 1 {
            rref_rational(self)
        } else {
            rref_cyclo(self)
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical basis (RREF rows) of the row space.
    pub fn row_space_basis(&self) -> FieldMatrix {
        let (r, pivots) = self.rref();
        let mut rows = Vec::with_capacity(pivots.len());
        for i in 0..pivots.len() {
            rows.push(r.row(i).to_vec());
        }
        FieldMatrix {
            field: self.field.clone(),
            rows: pivots.len(),
            cols: self.cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Inverse of a square matrix.
    pub fn inverse(&self) -> Result<FieldMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = FieldMatrix::zero(&self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, CycloScalar::one(&self.field));
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().take(n).enumerate().any(|(i, &p)| p != i) {
            return Err(Error::Singular);
        }
        let mut out = FieldMatrix::zero(&self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FieldMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

// ------------------------------------------------------------- elimination

/// Fraction-free echelon over Q followed by rational back-substitution.
fn rref_rational(m: &FieldMatrix) -> (FieldMatrix, Vec<usize>) {
    let rows = m.rows;
    let cols = m.cols;
    // integerize each row (scaling equations does not change the row space)
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| {
            let mut denom_lcm = BigInt::one();
            for j in 0..cols {
                let r = m.get(i, j).coeffs()[0].clone();
                denom_lcm = num::integer::lcm(denom_lcm, r.denom().clone());
            }
            (0..cols)
                .map(|j| {
                    let r = m.get(i, j).coeffs()[0].clone();
                    r.numer() * (&denom_lcm / r.denom())
                })
                .collect()
        })
        .collect();

    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = &a[i][j] * &a[r][c] - &a[i][c] * &a[r][j];
                let (q, rem) = num::integer::div_rem(num, prev.clone());
                assert!(rem.is_zero(), "fraction-free division must be exact");
                a[i][j] = q;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }

    // normalize pivot rows and eliminate upward, now in rationals
    let mut rat: Vec<Vec<Rational>> = a
        .into_iter()
        .map(|row| row.into_iter().map(Rational::from).collect())
        .collect();
    for (k, &c) in pivots.iter().enumerate().rev() {
        let inv = Rational::one() / rat[k][c].clone();
        for j in c..cols {
            let v = std::mem::replace(&mut rat[k][j], Rational::zero());
            rat[k][j] = v * &inv;
        }
        for i in 0..k {
            let f = rat[i][c].clone();
            if f.is_zero() {
                continue;
            }
            for j in c..cols {
                let sub = &f * &rat[k][j];
                rat[i][j] -= sub;
            }
        }
    }

    let field = m.field.clone();
    let data: Vec<CycloScalar> = rat
        .into_iter()
        .flatten()
        .map(|r| CycloScalar::from_rational(&field, r))
        .collect();
    (
        FieldMatrix {
            field,
            rows,
            cols,
            data,
        },
        pivots,
    )
}

/// Gauss-Jordan over a cyclotomic field with eager canonicalization.
fn rref_cyclo(m: &FieldMatrix) -> (FieldMatrix, Vec<usize>) {
    let mut a = m.clone();
    let rows = a.rows;
    let cols = a.cols;
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                let tmp = a.get(r, j).clone();
                a.set(r, j, a.get(pr, j).clone());
                a.set(pr, j, tmp);
            }
        }
        let inv = a.get(r, c).inverse().expect("pivot is nonzero");
        for j in c..cols {
            let v = a.get(r, j).checked_mul(&inv).expect("same field");
            a.set(r, j, v);
        }
        for i in 0..rows {
            if i == r || a.get(i, c).is_zero() {
                continue;
            }
            let f = a.get(i, c).clone();
            for j in c..cols {
                let sub = f.checked_mul(a.get(r, j)).expect("same field");
                let v = a.get(i, j).checked_sub(&sub).expect("same field");
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    (a, pivots)
}

// ------------------------------------------------------------ kernel bases

/// Basis of the left kernel {x : xM = 0}, canonicalized to reduced echelon
/// form. The row count is rows(M) - rank(M).
pub fn kernel_basis(m: &FieldMatrix) -> FieldMatrix {
    // left kernel of M = null space of M^T (as equations on x)
    let t = transpose(m);
    let (r, pivots) = t.rref();
    let n = m.rows; // number of unknowns
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut rows = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![CycloScalar::zero(&m.field); n];
        v[f] = CycloScalar::one(&m.field);
        for (k, &c) in pivots.iter().enumerate() {
            v[c] = r.get(k, f).neg();
        }
        rows.push(v);
    }
    let basis = FieldMatrix::from_rows(&m.field, rows);
    // canonical form for determinism
    basis.row_space_basis()
}

fn transpose(m: &FieldMatrix) -> FieldMatrix {
    let mut out = FieldMatrix::zero(&m.field, m.cols, m.rows);
    for i in 0..m.rows {
        for j in 0..m.cols {
            out.set(j, i, m.get(i, j).clone());
        }
    }
    out
}

/// Orthogonal projection onto the row span of the given basis rows:
/// P = B^H (B B^H)^(-1) B, with the inner product conjugate-linear in the
/// first argument. The Gram matrix is invertible because the rows are a basis.
pub fn projection_onto_row_span(basis: &FieldMatrix) -> FieldMatrix {
    let n = basis.cols;
    if basis.rows == 0 {
        return FieldMatrix::zero(&basis.field, n, n);
    }
    let bh = basis.conj_transpose();
    let gram = basis.matmul(&bh);
    let gram_inv = gram.inverse().expect("Gram matrix of a basis is invertible");
    bh.matmul(&gram_inv).matmul(basis)
}

// ------------------------------------------------------ regular representation

/// The matrix of x -> xA on row vectors indexed by (block, group element).
/// Block (i, j) holds right multiplication by entry A[i][j]: its (g, h)
/// entry is the coefficient of the element t with g*t = h.
pub fn regular_rep(a: &RingMatrix) -> FieldMatrix {
    let g = a.group();
    let n = g.order();
    let mut out = FieldMatrix::zero(a.field(), a.rows() * n, a.cols() * n);
    for bi in 0..a.rows() {
        for bj in 0..a.cols() {
            for (t, c) in a.entry(bi, bj).terms() {
                for gi in 0..n as u32 {
                    let h = g.mul(gi, t);
                    let row = bi * n + gi as usize;
                    let col = bj * n + h as usize;
                    let cur = out.get(row, col).checked_add(c).expect("same field");
                    out.set(row, col, cur);
                }
            }
        }
    }
    out
}

// --------------------------------------------------------------- reports

/// Which computational path produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComputePath {
    Exact,
    ModularScreen,
}

/// Divisibility diagnostic: does lcm(G) * dim lie in modulus * Z?
#[derive(Debug, Clone, Serialize)]
pub struct Membership {
    pub modulus: u64,
    pub holds: bool,
}

/// Exact dimension report for the kernel of a group-ring matrix.
#[derive(Debug, Clone, Serialize)]
pub struct DimReport {
    pub group: String,
    pub order: usize,
    pub shape: (usize, usize),
    #[serde(with = "rational_string")]
    pub vn_dim: Rational,
    pub kernel_dim: usize,
    #[serde(with = "rational_string")]
    pub lcm_times_dim: Rational,
    pub memberships: Vec<Membership>,
    pub path: ComputePath,
}

/// Serializes exact rationals as "p/q" strings (never floats).
pub mod rational_string {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};
    use std::str::FromStr;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        Rational::from_str(&s).map_err(serde::de::Error::custom)
    }
}

impl DimReport {
    /// Adds a membership diagnostic for the given modulus.
    pub fn with_membership(mut self, modulus: u64) -> DimReport {
        let holds = is_integer_multiple(&self.lcm_times_dim, modulus);
        self.memberships.push(Membership { modulus, holds });
        self
    }
}

/// True iff x lies in modulus * Z.
pub fn is_integer_multiple(x: &Rational, modulus: u64) -> bool {
    if modulus == 0 {
        return x.is_zero();
    }
    let scaled = x / Rational::from(BigInt::from(modulus));
    scaled.is_integer()
}

/// Exact von Neumann dimension of the kernel of x -> xA.
pub fn vn_dim_kernel(a: &RingMatrix) -> DimReport {
    let rep = regular_rep(a);
    let kernel = kernel_basis(&rep);
    let kdim = kernel.rows();
    report_from_kernel_dim(a, kdim, ComputePath::Exact)
}

pub(crate) fn report_from_kernel_dim(a: &RingMatrix, kdim: usize, path: ComputePath) -> DimReport {
    let g = a.group();
    let order = g.order();
    let vn_dim = Rational::new(BigInt::from(kdim), BigInt::from(order));
    let lcm_times_dim = &vn_dim * Rational::from(BigInt::from(order));
    DimReport {
        group: g.label().to_string(),
        order,
        shape: (a.rows(), a.cols()),
        vn_dim,
        kernel_dim: kdim,
        lcm_times_dim,
        memberships: Vec::new(),
        path,
    }
}

/// Exact von Neumann dimension of the closed image of x -> xA
/// (rank of the regular representation over |G|). For an m x n matrix the
/// kernel and image dimensions always add up to m: rank-nullity is taken
/// over the domain.
pub fn vn_dim_image(a: &RingMatrix) -> Rational {
    let rank = regular_rep(a).rank();
    Rational::new(BigInt::from(rank), BigInt::from(a.group().order()))
}

/// Orthogonal projection onto the kernel of x -> xA, as an m|G| x m|G|
/// matrix: P^2 = P, P = P^H, xP = x exactly on kernel rows.
pub fn kernel_projection(a: &RingMatrix) -> FieldMatrix {
    let rep = regular_rep(a);
    let kernel = kernel_basis(&rep);
    if kernel.rows() == 0 {
        let n = rep.rows();
        return FieldMatrix::zero(a.field(), n, n);
    }
    projection_onto_row_span(&kernel)
}

/// The von Neumann trace of an operator on l2(G)^m: the sum of the m
/// diagonal entries at the identity coordinate of each block.
pub fn vn_trace(p: &FieldMatrix, m: usize, g: &Group) -> Result<Rational> {
    let n = g.order();
    if p.rows() != m * n || p.cols() != m * n {
        return Err(Error::ShapeMismatch(format!(
            "expected {}x{}, got {}x{}",
            m * n,
            m * n,
            p.rows(),
            p.cols()
        )));
    }
    let mut acc = CycloScalar::zero(p.field());
    for k in 0..m {
        let d = k * n + g.identity() as usize;
        acc = acc.checked_add(p.get(d, d)).expect("same field");
    }
    acc.as_rational()
}

/// Trace of the kernel projection of A composed with right multiplication
/// by diag(w): the w-compressed dimension used by the transfer identities.
pub fn compressed_trace(a: &RingMatrix, w: &crate::groupring::RingElement) -> Result<Rational> {
    if w.group() != a.group() {
        return Err(Error::GroupMismatch {
            left: a.group().label().to_string(),
            right: w.group().label().to_string(),
        });
    }
    let m = a.rows();
    let p = kernel_projection(a);
    let diag = RingMatrix::diagonal(w, m);
    let wrep = regular_rep(&diag);
    // operator x -> (x * diag(w)) * P, i.e. the matrix W P
    let comp = wrep.matmul(&p);
    vn_trace(&comp, m, a.group())
}
