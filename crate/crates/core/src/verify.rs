//! Executable verification suites for the transfer identities behind the
//! strong Atiyah conjecture, each consuming concrete (group, subgroup,
//! matrix) instances and emitting pass/fail reports with exact witnesses.
//!
//! Every check is an exact equality or exact divisibility of rationals;
//! there are no tolerances anywhere.

use std::fmt::Display;
use std::sync::Arc;

use num::{BigInt, Signed};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::groupring::{averaging_idempotent, RingElement, RingMatrix};
use crate::groups::{Group, Subgroup, Transversal};
use crate::morph::{restrict_matrix, Direction, QuotientMap};
use crate::scalar::{rational, CycloScalar, FieldSpec, Rational};
use crate::vnla::{
    compressed_trace, is_integer_multiple, kernel_projection, projection_onto_row_span,
    regular_rep, vn_dim_image, vn_dim_kernel, vn_trace, FieldMatrix,
};
use crate::{Error, Result};

/// One exact check: label, expected and actual rendered as text.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub label: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

/// Report of a verification suite run; overall pass iff all checks pass.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub instance: String,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl SuiteReport {
    fn new(suite: &str, instance: impl Into<String>) -> SuiteReport {
        SuiteReport {
            suite: suite.to_string(),
            instance: instance.into(),
            checks: Vec::new(),
            pass: true,
        }
    }

    fn push(&mut self, label: impl Into<String>, expected: String, actual: String, pass: bool) {
        self.checks.push(Check {
            label: label.into(),
            expected,
            actual,
            pass,
        });
        self.pass &= pass;
    }

    fn check_eq<T: PartialEq + Display>(&mut self, label: impl Into<String>, expected: T, actual: T) {
        let pass = expected == actual;
        self.push(label, expected.to_string(), actual.to_string(), pass);
    }

    fn check_true(&mut self, label: impl Into<String>, actual: bool) {
        self.push(label, "true".to_string(), actual.to_string(), actual);
    }

    /// Informational entry: both sides are printed but nothing is asserted.
    fn record(&mut self, label: impl Into<String>, text: String) {
        self.push(label, "recorded".to_string(), text, true);
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// True when the report failed only on hypothesis validation.
    pub fn precondition_failure(&self) -> bool {
        !self.pass && self.failed_checks().all(|c| c.label.starts_with("hypothesis"))
    }
}

/// Seeded random instances used by the fuzz suites. Entries are sums of at
/// most three group elements with coefficients in {-1, 0, 1, 1/2} (plus the
/// primitive root when the field is a proper cyclotomic extension); shapes
/// are at most 3x3.
pub mod random {
    use super::*;

    fn palette(field: &Arc<FieldSpec>) -> Vec<CycloScalar> {
        let mut p = vec![
            CycloScalar::from_integer(field, -1),
            CycloScalar::from_integer(field, 0),
            CycloScalar::from_integer(field, 1),
            CycloScalar::from_rational(field, rational(1, 2)),
        ];
        if field.conductor() > 1 {
            p.push(CycloScalar::zeta(field));
            p.push(CycloScalar::zeta(field).neg());
        }
        p
    }

    pub fn ring_element(g: &Group, field: &Arc<FieldSpec>, rng: &mut ChaCha8Rng) -> RingElement {
        let pal = palette(field);
        let t = rng.next_u64() % 4;
        let terms: Vec<(u32, CycloScalar)> = (0..t)
            .map(|_| {
                let e = (rng.next_u64() % g.order() as u64) as u32;
                let c = pal[(rng.next_u64() % pal.len() as u64) as usize].clone();
                (e, c)
            })
            .collect();
        RingElement::from_terms(g, field, terms).expect("terms are in range")
    }

    pub fn ring_matrix(g: &Group, field: &Arc<FieldSpec>, rng: &mut ChaCha8Rng) -> RingMatrix {
        let m = 1 + (rng.next_u64() % 3) as usize;
        let n = 1 + (rng.next_u64() % 3) as usize;
        let rows: Vec<Vec<RingElement>> = (0..m)
            .map(|_| (0..n).map(|_| ring_element(g, field, rng)).collect())
            .collect();
        RingMatrix::from_entries(rows).expect("consistent shape")
    }

    /// Random matrix with entries supported in a subgroup.
    pub fn ring_matrix_in(
        u: &Subgroup,
        field: &Arc<FieldSpec>,
        rng: &mut ChaCha8Rng,
    ) -> RingMatrix {
        let g = u.parent();
        let pal = palette(field);
        let m = 1 + (rng.next_u64() % 3) as usize;
        let n = 1 + (rng.next_u64() % 3) as usize;
        let rows: Vec<Vec<RingElement>> = (0..m)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        let t = rng.next_u64() % 4;
                        let terms: Vec<(u32, CycloScalar)> = (0..t)
                            .map(|_| {
                                let e = u.members()
                                    [(rng.next_u64() % u.order() as u64) as usize];
                                let c =
                                    pal[(rng.next_u64() % pal.len() as u64) as usize].clone();
                                (e, c)
                            })
                            .collect();
                        RingElement::from_terms(g, field, terms).expect("in range")
                    })
                    .collect()
            })
            .collect();
        RingMatrix::from_entries(rows).expect("consistent shape")
    }
}

fn big(n: u64) -> Rational {
    Rational::from(BigInt::from(n))
}

// ----------------------------------------------------------- prop31 suite

/// Subgroup-criterion suite: a matrix over kU, a finite subgroup V
/// normalized by U, and a prime power dividing |V| / |U meet V|. Checks the
/// commutation, projection-factorization, trace-transfer, direct-sum and
/// divisibility steps, all as exact identities.
pub fn prop31(
    g: &Group,
    u: &Subgroup,
    v: &Subgroup,
    a: &RingMatrix,
    pn: u64,
) -> SuiteReport {
    let mut r = SuiteReport::new(
        "prop31",
        format!(
            "G={} |U|={} |V|={} A {}x{} pn={}",
            g.label(),
            u.order(),
            v.order(),
            a.rows(),
            a.cols(),
            pn
        ),
    );
    // (a) hypothesis validation; violations are reported, not thrown
    let uv = u.intersect(v);
    let ratio = (v.order() / uv.order()) as u64;
    r.check_true("hypothesis: matrix entries supported in U", a.is_supported_in(u));
    r.check_true("hypothesis: V is normalized by U", v.is_normalized_by(u));
    r.check_true(
        format!("hypothesis: pn divides |V|/|U meet V| = {ratio}"),
        pn >= 1 && ratio.is_multiple_of(pn.max(1)),
    );
    if !r.pass {
        return r;
    }

    let field = a.field();
    let m = a.rows();
    let one = RingElement::one(g, field);
    let nv = averaging_idempotent(v, field);
    let nuv = averaging_idempotent(&uv, field);
    let one_minus_nv = one.checked_sub(&nv).expect("same algebra");
    let one_minus_nuv = one.checked_sub(&nuv).expect("same algebra");

    // (b) commutation of A with the four averaging diagonals
    for (name, x) in [
        ("diag(N_V)", &nv),
        ("diag(1-N_V)", &one_minus_nv),
        ("diag(N_UV)", &nuv),
        ("diag(1-N_UV)", &one_minus_nuv),
    ] {
        let d = RingMatrix::diagonal(x, m);
        let lhs = d.checked_mul(a).expect("same shape");
        let rhs = a.checked_mul(&d).expect("same shape");
        r.check_true(format!("commutation: {name} A = A {name}"), lhs == rhs);
    }

    // kernels of the augmented matrices
    let b = a.augment(&one_minus_nv).expect("same algebra");
    let bp = a.augment(&one_minus_nuv).expect("same algebra");
    let c = a.augment(&nv).expect("same algebra");
    let cp = a.augment(&nuv).expect("same algebra");
    let dim_a = vn_dim_kernel(a);
    let dim_b = vn_dim_kernel(&b);
    let dim_bp = vn_dim_kernel(&bp);
    let dim_c = vn_dim_kernel(&c);
    let dim_cp = vn_dim_kernel(&cp);
    r.record(
        "kernel dimensions",
        format!(
            "dim ker A = {}, B = {}, B' = {}, C = {}, C' = {}",
            dim_a.vn_dim, dim_b.vn_dim, dim_bp.vn_dim, dim_c.vn_dim, dim_cp.vn_dim
        ),
    );

    // (c) projection factorization as literal matrix identities
    let pa = kernel_projection(a);
    let pb = kernel_projection(&b);
    let pbp = kernel_projection(&bp);
    let wv = regular_rep(&RingMatrix::diagonal(&nv, m));
    let wuv = regular_rep(&RingMatrix::diagonal(&nuv, m));
    r.check_true(
        "projection factorization: pr(ker B) = r(diag N_V) pr(ker A)",
        pb == wv.matmul(&pa),
    );
    r.check_true(
        "projection factorization: pr(ker B) = pr(ker A) r(diag N_V)",
        pb == pa.matmul(&wv),
    );
    r.check_true(
        "projection factorization: pr(ker B') = r(diag N_UV) pr(ker A)",
        pbp == wuv.matmul(&pa),
    );
    r.check_true(
        "projection factorization: pr(ker B') = pr(ker A) r(diag N_UV)",
        pbp == pa.matmul(&wuv),
    );

    // (d) trace transfer
    let ct_v = compressed_trace(a, &nv).expect("compatible");
    let ct_uv = compressed_trace(a, &nuv).expect("compatible");
    r.check_eq(
        format!("trace transfer: tr(N_UV-compressed) = {ratio} * tr(N_V-compressed)"),
        &ct_uv,
        &(&ct_v * big(ratio)),
    );
    r.check_eq("dim ker B equals the N_V-compressed trace", &dim_b.vn_dim, &ct_v);
    r.check_eq("dim ker B' equals the N_UV-compressed trace", &dim_bp.vn_dim, &ct_uv);
    r.check_eq(
        format!("dim ker B' = {ratio} * dim ker B"),
        &dim_bp.vn_dim,
        &(&dim_b.vn_dim * big(ratio)),
    );

    // (e) direct sum
    r.check_eq(
        "direct sum: dim ker A = dim ker B' + dim ker C'",
        &dim_a.vn_dim,
        &(&dim_bp.vn_dim + &dim_cp.vn_dim),
    );

    // (f) memberships
    r.check_true(
        format!("membership: |G| * dim ker B' lies in {ratio} Z"),
        is_integer_multiple(&dim_bp.lcm_times_dim, ratio),
    );
    r.check_true(
        format!("membership: |G| * dim ker A = {} lies in {pn} Z", dim_a.lcm_times_dim),
        is_integer_multiple(&dim_a.lcm_times_dim, pn),
    );

    // the scaled comparison for C' vs C is recorded, never asserted: the
    // displayed identity fails on ordinary instances
    let scaled = &dim_c.vn_dim * big(ratio);
    let verdict = if dim_cp.vn_dim == scaled {
        String::from("; equal on this instance")
    } else {
        String::from("; equality FAILS on this instance (not asserted)")
    };
    r.record(
        "recorded: dim ker C' vs (|V|/|U meet V|) * dim ker C",
        format!(
            "{} vs {} * ({}) = {}{}",
            dim_cp.vn_dim, ratio, dim_c.vn_dim, scaled, verdict
        ),
    );

    // (g) support containment: the projection of each e_k is supported on
    // the U-indexed coordinates of every block
    let n = g.order();
    let mut supported = true;
    for k in 0..m {
        let row = k * n + g.identity() as usize;
        for block in 0..m {
            for h in 0..n as u32 {
                if !u.contains(h) && !pa.get(row, block * n + h as usize).is_zero() {
                    supported = false;
                }
            }
        }
    }
    r.check_true("support containment: pr(e_k) lies in l2(U)^m", supported);
    r
}

/// Which built-in example instance of the subgroup criterion to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FootnoteCase {
    /// A finite normal subgroup serving as V for every subgroup U;
    /// toy instance G = S3, N = A3, U = <(12)>.
    FiniteNormal,
    /// Direct product G1 x G2 with U = G1 x {1} and V = {1} x V2.
    DirectProduct {
        /// Degenerate variant with V2 trivial: the divisibility hypothesis
        /// fails and the suite reports a precondition failure.
        v2_trivial: bool,
    },
}

/// Runs the subgroup-criterion suite on a built-in example instance.
pub fn prop31_footnote(case: FootnoteCase) -> Result<SuiteReport> {
    let field = FieldSpec::rationals();
    match case {
        FootnoteCase::FiniteNormal => {
            let g = Group::symmetric(3)?;
            let n = Subgroup::closure(&g, &[3]);
            let u = Subgroup::closure(&g, &[2]);
            let one = CycloScalar::one(&field);
            let a = RingMatrix::single(RingElement::from_terms(
                &g,
                &field,
                [(0, one.clone()), (2, one)],
            )?);
            let mut r = prop31(&g, &u, &n, &a, 3);
            r.suite = "prop31-footnote1".into();
            // V = N is normal in G, hence normalized by every subgroup
            r.check_true("footnote: V = N is normal in G", n.is_normal());
            Ok(r)
        }
        FootnoteCase::DirectProduct { v2_trivial } => {
            let g1 = Group::cyclic(2)?;
            let g2 = Group::cyclic(3)?;
            let g = Group::product(&[g1, g2])?;
            // U = G1 x {1}: generated by (s, e) at index 1*3 + 0 = 3
            let u = Subgroup::closure(&g, &[3]);
            // V = {1} x V2
            let v = if v2_trivial {
                Subgroup::trivial(&g)
            } else {
                Subgroup::closure(&g, &[1])
            };
            let one = CycloScalar::one(&field);
            let a = RingMatrix::single(RingElement::from_terms(
                &g,
                &field,
                [(0, one.clone()), (3, one)],
            )?);
            let mut r = prop31(&g, &u, &v, &a, 3);
            r.suite = "prop31-footnote2".into();
            if !v2_trivial {
                // lcm(G2)/|V2| = 3/3 = 1 is not a multiple of p = 3
                let v2 = v.order() as u64;
                r.check_true(
                    "footnote: lcm(G2)/|V2| is not a multiple of p",
                    !(3 / v2).is_multiple_of(3),
                );
            }
            Ok(r)
        }
    }
}

// ----------------------------------------------------------- prop41 suite

/// Matrix of the blockwise pushforward l2(G)^n -> l2(Q)^n acting on rows.
fn pushforward_matrix(p: &QuotientMap, blocks: usize, field: &Arc<FieldSpec>) -> FieldMatrix {
    let ng = p.source().order();
    let nq = p.target().order();
    let mut t = FieldMatrix::zero(field, blocks * ng, blocks * nq);
    let one = CycloScalar::one(field);
    for b in 0..blocks {
        for g in 0..ng as u32 {
            t.set(b * ng + g as usize, b * nq + p.project(g) as usize, one.clone());
        }
    }
    t
}

/// Matrix of the blockwise pullback l2(Q)^n -> l2(G)^n acting on rows.
fn pullback_matrix(p: &QuotientMap, blocks: usize, field: &Arc<FieldSpec>) -> FieldMatrix {
    let ng = p.source().order();
    let nq = p.target().order();
    let scale = CycloScalar::from_rational(
        field,
        Rational::new(BigInt::from(1), BigInt::from(p.kernel_size() as i64)),
    );
    let mut s = FieldMatrix::zero(field, blocks * nq, blocks * ng);
    for b in 0..blocks {
        for g in 0..ng as u32 {
            s.set(b * nq + p.project(g) as usize, b * ng + g as usize, scale.clone());
        }
    }
    s
}

/// Quotient-transfer suite: for A over kQ, the image of the pulled-back
/// matrix is the pullback of the image, the transported projection
/// P' = diag(p^*) P diag(p_*) is an orthogonal projection onto it, and the
/// image dimensions transfer with the factor |K|.
pub fn prop41(p: &QuotientMap, a: &RingMatrix) -> SuiteReport {
    let mut r = SuiteReport::new(
        "prop41",
        format!(
            "G={} Q={} |K|={} A {}x{}",
            p.source().label(),
            p.target().label(),
            p.kernel_size(),
            a.rows(),
            a.cols()
        ),
    );
    if a.group() != p.target() {
        r.check_true("hypothesis: matrix lives over the quotient group", false);
        return r;
    }
    let field = a.field();
    let n = a.cols();
    let k = p.kernel_size() as u64;

    let rep_q = regular_rep(a);
    let pulled = p.matrix_map(a, Direction::Pull).expect("matrix over Q");
    let rep_g = regular_rep(&pulled);

    // (a) image-space transfer: rowspace(rep_g) = pullback of rowspace(rep_q)
    let basis_q = rep_q.row_space_basis();
    let basis_g = rep_g.row_space_basis();
    let s = pullback_matrix(p, n, field);
    let mapped = basis_q.matmul(&s).row_space_basis();
    r.check_true(
        "image transfer: im(r_{p^*A}) = p^*(im(r_A)) as row spaces",
        mapped == basis_g,
    );

    // (b) transported projection P' = diag(p^*) P diag(p_*)
    let proj_q = projection_onto_row_span(&basis_q);
    let t = pushforward_matrix(p, n, field);
    let proj_g = t.matmul(&proj_q).matmul(&s);
    r.check_true("projection law: P'^2 = P'", proj_g.matmul(&proj_g) == proj_g);
    r.check_true("projection law: P'* = P'", proj_g.conj_transpose() == proj_g);
    r.check_true(
        "P' fixes the pulled-back image rows",
        basis_g.matmul(&proj_g) == basis_g,
    );
    r.check_true(
        "P' projects onto the pulled-back image",
        proj_g.row_space_basis() == basis_g,
    );

    // (c) image dimension transfer
    let dim_im_q = vn_dim_image(a);
    let dim_im_g = vn_dim_image(&pulled);
    r.check_eq(
        format!("dim_Q(im A) = |K| * dim_G(im p^*A) with |K| = {k}"),
        &dim_im_q,
        &(&dim_im_g * big(k)),
    );
    // the trace of P over Q agrees with the rank count
    let tr = vn_trace(&proj_q, n, p.target()).expect("square projection");
    r.check_eq("trace of P equals dim_Q(im A)", &tr, &dim_im_q);

    // (d) kernel conclusion via rank-nullity over the domain (sum = m)
    let m = big(a.rows() as u64);
    let dim_ker_q = vn_dim_kernel(a).vn_dim;
    r.check_eq(
        "rank-nullity over Q: dim ker A + dim im A = m",
        &(&dim_ker_q + &dim_im_q),
        &m,
    );
    r.check_eq(
        "kernel conclusion: dim ker A = m - |K| * dim_G(im p^*A)",
        &dim_ker_q,
        &(&m - &(&dim_im_g * big(k))),
    );
    r
}

// ----------------------------------------------------------- prop44 suite

/// Split-extension suite: with a section s of G -> Q, the dimension chain
/// |G| d = |Q||K| d = |s(Q)| [G:s(Q)] d = |s(Q)| dim ker res(A) holds
/// exactly, where d = dim_G ker A and the restriction is to s(Q).
pub fn prop44(p: &QuotientMap, a: &RingMatrix) -> Result<SuiteReport> {
    let section = p.section().ok_or(Error::MissingSection)?;
    let g = p.source();
    let mut r = SuiteReport::new(
        "prop44",
        format!(
            "G={} Q={} |K|={} A {}x{}",
            g.label(),
            p.target().label(),
            p.kernel_size(),
            a.rows(),
            a.cols()
        ),
    );
    if a.group() != g {
        r.check_true("hypothesis: matrix lives over the source group", false);
        return Ok(r);
    }
    let sq = Subgroup::from_members(g, section)?;
    let (index, t) = sq.index_and_transversal();
    r.check_eq("|G| = |Q| * |K|", g.order(), p.target().order() * p.kernel_size());
    r.check_eq("|s(Q)| = |Q|", sq.order(), p.target().order());
    r.check_eq("[G : s(Q)] = |K|", index, p.kernel_size());

    let d = vn_dim_kernel(a).vn_dim;
    let res = restrict_matrix(a, &t)?;
    let d_res = vn_dim_kernel(&res.matrix).vn_dim;

    let q1 = &d * big(g.order() as u64);
    let q2 = &d * big((p.target().order() * p.kernel_size()) as u64);
    let q3 = &d * big((sq.order() * index) as u64);
    let q4 = &d_res * big(sq.order() as u64);
    r.check_eq("chain: |G| d = |Q||K| d", &q1, &q2);
    r.check_eq("chain: |Q||K| d = |s(Q)| [G:s(Q)] d", &q2, &q3);
    r.check_eq("chain: |s(Q)| [G:s(Q)] d = |s(Q)| dim ker res(A)", &q3, &q4);
    r.check_eq(
        "restriction step: dim ker res(A) = [G:s(Q)] * dim ker A",
        &d_res,
        &(&d * big(index as u64)),
    );
    Ok(r)
}

// ---------------------------------------------------------- lemma42 suite

/// Kernel-size bookkeeping for a quotient: |G| = |K| |Q|, and for sampled
/// subgroups W the product set W K satisfies |W K| = |K| |p(W)|.
pub fn lemma42(p: &QuotientMap) -> SuiteReport {
    let g = p.source();
    let mut r = SuiteReport::new(
        "lemma42",
        format!("G={} |K|={} Q={}", g.label(), p.kernel_size(), p.target().label()),
    );
    r.check_eq(
        "|G| = |K| * |Q|",
        g.order(),
        p.kernel_size() * p.target().order(),
    );
    // sample: every cyclic subgroup, then a few two-generator closures
    let mut samples: Vec<Subgroup> = Vec::new();
    let mut seen: Vec<Vec<u32>> = Vec::new();
    let add = |w: Subgroup, samples: &mut Vec<Subgroup>, seen: &mut Vec<Vec<u32>>| {
        if !seen.contains(&w.members().to_vec()) {
            seen.push(w.members().to_vec());
            samples.push(w);
        }
    };
    for x in 0..g.order().min(64) as u32 {
        add(Subgroup::closure(g, &[x]), &mut samples, &mut seen);
    }
    for x in 1..g.order().min(5) as u32 {
        for y in x + 1..g.order().min(6) as u32 {
            add(Subgroup::closure(g, &[x, y]), &mut samples, &mut seen);
        }
    }
    for w in &samples {
        let wk = w.product_set(p.kernel());
        let image = p.image_members(w).len();
        r.check_eq(
            format!("|W K| = |K| * |p(W)| for W of order {}", w.order()),
            wk.len(),
            p.kernel_size() * image,
        );
    }
    r
}

// -------------------------------------------------------- restriction suite

/// Restriction formula: dim_U ker res(A) = [G:U] * dim_G ker A, checked for
/// the canonical transversal and for a shifted one (the result must be
/// transversal-independent).
pub fn restriction(g: &Group, u: &Subgroup, a: &RingMatrix) -> SuiteReport {
    let (index, t) = u.index_and_transversal();
    let mut r = SuiteReport::new(
        "restriction",
        format!("G={} |U|={} index={} A {}x{}", g.label(), u.order(), index, a.rows(), a.cols()),
    );
    if a.group() != g {
        r.check_true("hypothesis: matrix lives over G", false);
        return r;
    }
    let dim_g = vn_dim_kernel(a).vn_dim;
    let res = restrict_matrix(a, &t).expect("valid transversal");
    let dim_u = vn_dim_kernel(&res.matrix).vn_dim;
    r.check_eq(
        format!("dim_U ker res(A) = {index} * dim_G ker A"),
        &dim_u,
        &(&dim_g * big(index as u64)),
    );
    // alternative transversal: left-multiply non-identity reps by a fixed
    // member of U (same cosets, different representatives)
    if u.order() > 1 {
        let shift = u.members()[u.order() - 1];
        let alt: Vec<u32> = t
            .reps()
            .iter()
            .enumerate()
            .map(|(i, &rep)| if i == 0 { rep } else { g.mul(shift, rep) })
            .collect();
        let t2 = Transversal::new(u.clone(), alt).expect("still a transversal");
        let res2 = restrict_matrix(a, &t2).expect("valid transversal");
        let dim_u2 = vn_dim_kernel(&res2.matrix).vn_dim;
        r.check_eq("transversal independence", &dim_u, &dim_u2);
    } else {
        r.check_true("transversal independence (U trivial: unique transversal)", true);
    }
    r
}

// ------------------------------------------------------- transfer properties

/// Transfer-map properties on seeded random element pairs:
/// (1) p_* p^* = id, (2) p^* p_* = N_K-multiplication, (3) the adjoint
/// pairing with factor |K|, (4) the norm comparison via the exact
/// fiber-deviation identity, (5) the pullback isometry up to 1/|K|,
/// plus multiplicativity of p_*.
pub fn transfer_properties(
    p: &QuotientMap,
    field: &Arc<FieldSpec>,
    pairs: usize,
    seed: u64,
) -> SuiteReport {
    let mut r = SuiteReport::new(
        "pstar",
        format!(
            "G={} Q={} |K|={} pairs={} seed={} conductor={}",
            p.source().label(),
            p.target().label(),
            p.kernel_size(),
            pairs,
            seed,
            field.conductor()
        ),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = p.source().clone();
    let q = p.target().clone();
    let k = p.kernel_size() as u64;
    let k_scalar = CycloScalar::from_integer(field, k as i64);
    let nk = p.kernel_idempotent(field);
    let mut failures = 0usize;
    for i in 0..pairs {
        let x = random::ring_element(&g, field, &mut rng);
        let x2 = random::ring_element(&g, field, &mut rng);
        let y = random::ring_element(&q, field, &mut rng);
        let z = random::ring_element(&q, field, &mut rng);

        let mut ok = true;
        // (1) p_*(p^*(y)) = y
        ok &= p.pushforward(&p.pullback(&y).unwrap()).unwrap() == y;
        // (2) p^*(p_*(x)) = N_K x
        ok &= p.pullback(&p.pushforward(&x).unwrap()).unwrap()
            == nk.checked_mul(&x).unwrap();
        // (3) <p_* x, y>_Q = |K| <x, p^* y>_G
        let lhs3 = p.pushforward(&x).unwrap().inner(&y).unwrap();
        let rhs3 = x
            .inner(&p.pullback(&y).unwrap())
            .unwrap()
            .checked_mul(&k_scalar)
            .unwrap();
        ok &= lhs3 == rhs3;
        // (4) |K| <x,x> - <p_* x, p_* x> equals half the sum of squared
        // fiber deviations, an exact scalar identity; when rational it is
        // additionally checked nonnegative
        let push_x = p.pushforward(&x).unwrap();
        let gap = x
            .inner(&x)
            .unwrap()
            .checked_mul(&k_scalar)
            .unwrap()
            .checked_sub(&push_x.inner(&push_x).unwrap())
            .unwrap();
        let mut dev = CycloScalar::zero(field);
        for qe in 0..q.order() as u32 {
            let fiber = p.fiber(qe);
            for (ai, &ga) in fiber.iter().enumerate() {
                for &gb in &fiber[ai + 1..] {
                    let diff = x.coeff(ga).checked_sub(&x.coeff(gb)).unwrap();
                    dev = dev.checked_add(&diff.norm_sq()).unwrap();
                }
            }
        }
        ok &= gap == dev;
        if let Ok(gr) = gap.as_rational() {
            ok &= !gr.is_negative();
        }
        // (5) <p^* y, p^* z>_G = (1/|K|) <y, z>_Q
        let lhs5 = p
            .pullback(&y)
            .unwrap()
            .inner(&p.pullback(&z).unwrap())
            .unwrap()
            .checked_mul(&k_scalar)
            .unwrap();
        ok &= lhs5 == y.inner(&z).unwrap();
        // p_* is multiplicative
        ok &= p.pushforward(&x.checked_mul(&x2).unwrap()).unwrap()
            == p
                .pushforward(&x)
                .unwrap()
                .checked_mul(&p.pushforward(&x2).unwrap())
                .unwrap();

        if !ok {
            failures += 1;
            r.check_true(format!("pair {i}: transfer properties (1)-(5)"), false);
        }
    }
    r.check_eq(
        format!("all {pairs} random pairs satisfy properties (1)-(5) exactly"),
        0usize,
        failures,
    );
    r
}

// ----------------------------------------------------------- fuzz harness

/// Fuzz harness over seeded random sparse matrices: for every sample,
/// |G| * dim ker is a nonnegative integer (the finite-group integrality
/// floor) and kernel and image dimensions add up to the row count.
pub fn strong_atiyah_fuzz(
    g: &Group,
    field: &Arc<FieldSpec>,
    trials: usize,
    seed: u64,
) -> SuiteReport {
    let mut r = SuiteReport::new(
        "atiyah-fuzz",
        format!(
            "G={} trials={} seed={} conductor={}",
            g.label(),
            trials,
            seed,
            field.conductor()
        ),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0usize;
    for i in 0..trials {
        let a = random::ring_matrix(g, field, &mut rng);
        let ker = vn_dim_kernel(&a);
        let im = vn_dim_image(&a);
        let integral = ker.lcm_times_dim.is_integer() && !ker.lcm_times_dim.is_negative();
        let sum_ok = &ker.vn_dim + &im == big(a.rows() as u64);
        if !(integral && sum_ok) {
            failures += 1;
            r.push(
                format!("trial {i}: integrality and rank-nullity"),
                "integral and sum = m".to_string(),
                format!("lcm*dim = {}, ker+im = {}", ker.lcm_times_dim, &ker.vn_dim + &im),
                false,
            );
        }
    }
    r.check_eq(
        format!("all {trials} random matrices pass integrality and rank-nullity"),
        0usize,
        failures,
    );
    r
}
