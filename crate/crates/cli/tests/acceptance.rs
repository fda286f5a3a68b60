//! Acceptance suite: one test per criterion, each printing a pass line.
//!
//! Every expected value tagged as derived was pinned by an independent
//! dense-elimination oracle run before the implementation was written; the
//! small instances are re-derived here at test time by the self-contained
//! oracle module below, which shares no code with the library pipeline.

use std::sync::Arc;
use std::time::Instant;

use num::{BigInt, BigRational, One, Signed, Zero};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use atiyah_core::approx::{
    approximation_run, lamplighter_family, series_partial_sum, DimStrategy, SymbolicOperator,
};
use atiyah_core::groupring::{RingElement, RingMatrix};
use atiyah_core::groups::{Group, Subgroup};
use atiyah_core::morph::QuotientMap;
use atiyah_core::scalar::{rational, CycloScalar, FieldSpec, Rational};
use atiyah_core::verify;
use atiyah_core::vnla;

/// Brute-force elimination oracle, independent of the library: its own group
/// tables, its own regular representation, its own rational Gauss
/// elimination. Only plain `num` arithmetic is shared.
mod oracle {
    use num::{BigInt, BigRational, One, Zero};
    use std::collections::BTreeMap;

    pub type Q = BigRational;

    pub fn q(n: i64, d: i64) -> Q {
        Q::new(BigInt::from(n), BigInt::from(d))
    }

    /// Row rank by plain rational Gauss elimination.
    pub fn rank(mut m: Vec<Vec<Q>>) -> usize {
        let rows = m.len();
        if rows == 0 {
            return 0;
        }
        let cols = m[0].len();
        let mut r = 0usize;
        for c in 0..cols {
            let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let inv = Q::one() / m[r][c].clone();
            for j in c..cols {
                let v = m[r][j].clone() * &inv;
                m[r][j] = v;
            }
            for i in 0..rows {
                if i != r && !m[i][c].is_zero() {
                    let f = m[i][c].clone();
                    for j in c..cols {
                        let sub = &f * &m[r][j];
                        m[i][j] -= sub;
                    }
                }
            }
            r += 1;
            if r == rows {
                break;
            }
        }
        r
    }

    /// Left-kernel dimension of M: rows(M) - rank(M).
    pub fn left_nullity(m: Vec<Vec<Q>>) -> usize {
        let rows = m.len();
        rows - rank(m)
    }

    /// S3 as permutations of three points in lexicographic one-line order,
    /// composed as (a * b)(x) = a(b(x)).
    pub fn s3_table() -> Vec<Vec<usize>> {
        let mut perms: Vec<[usize; 3]> = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    if a != b && b != c && a != c {
                        perms.push([a, b, c]);
                    }
                }
            }
        }
        perms.sort();
        let index = |p: &[usize; 3]| perms.iter().position(|x| x == p).unwrap();
        let mut mul = vec![vec![0usize; 6]; 6];
        for (i, a) in perms.iter().enumerate() {
            for (j, b) in perms.iter().enumerate() {
                let comp = [a[b[0]], a[b[1]], a[b[2]]];
                mul[i][j] = index(&comp);
            }
        }
        mul
    }

    /// Sparse group-algebra element: element index -> coefficient.
    pub type Elem = BTreeMap<usize, Q>;

    /// Regular representation of a block matrix of sparse elements: entry
    /// (g, h) of block (i, j) is the coefficient of t with g t = h.
    pub fn regular_rep(
        entries: &[Vec<Elem>],
        order: usize,
        mul: &dyn Fn(usize, usize) -> usize,
    ) -> Vec<Vec<Q>> {
        let m = entries.len();
        let n = entries[0].len();
        let mut out = vec![vec![Q::zero(); n * order]; m * order];
        for (i, row) in entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                for (&t, c) in e {
                    for g in 0..order {
                        let h = mul(g, t);
                        out[i * order + g][j * order + h] += c;
                    }
                }
            }
        }
        out
    }

    /// Lamplighter truncation as raw bit arithmetic: elements (v, k) with v
    /// an n-bit lamp mask (position 0 in the most significant bit) and k the
    /// shift; index v * n + k.
    pub struct Lamp {
        pub n: usize,
        pub order: usize,
    }

    impl Lamp {
        pub fn new(n: usize) -> Lamp {
            Lamp {
                n,
                order: n * (1 << n),
            }
        }

        fn rot(&self, v: usize, k: i64) -> usize {
            let n = self.n as i64;
            let mut out = 0usize;
            for i in 0..self.n {
                let src = (i as i64 - k).rem_euclid(n) as usize;
                let bit = (v >> (self.n - 1 - src)) & 1;
                out |= bit << (self.n - 1 - i);
            }
            out
        }

        pub fn mul(&self, a: usize, b: usize) -> usize {
            let (va, ka) = (a / self.n, a % self.n);
            let (vb, kb) = (b / self.n, b % self.n);
            (va ^ self.rot(vb, ka as i64)) * self.n + (ka + kb) % self.n
        }

        pub fn inv(&self, a: usize) -> usize {
            let (v, k) = (a / self.n, a % self.n);
            self.rot(v, -(k as i64)) * self.n + (self.n - k) % self.n
        }

        /// The averaging element over {t, at} and inverses, weight 1/4.
        pub fn markov(&self) -> Elem {
            let a = (1usize << (self.n - 1)) * self.n;
            let t = 1usize;
            let at = self.mul(a, t);
            let mut e = Elem::new();
            for s in [t, self.inv(t), at, self.inv(at)] {
                *e.entry(s).or_insert_with(Q::zero) += q(1, 4);
            }
            e
        }
    }

    /// Exact kernel dimension of the Markov operator on the full regular
    /// representation, by dense elimination.
    pub fn lamp_markov_vn_dim(n: usize) -> Q {
        let lamp = Lamp::new(n);
        let entries = vec![vec![lamp.markov()]];
        let rep = regular_rep(&entries, lamp.order, &|a, b| lamp.mul(a, b));
        q(left_nullity(rep) as i64, lamp.order as i64)
    }
}

fn q_field() -> Arc<FieldSpec> {
    FieldSpec::rationals()
}

fn fuzz_corpus() -> Vec<Group> {
    vec![
        Group::cyclic(6).unwrap(),
        Group::symmetric(3).unwrap(),
        Group::dihedral(4).unwrap(),
        Group::quaternion8().unwrap(),
        Group::product(&[Group::cyclic(2).unwrap(), Group::cyclic(3).unwrap()]).unwrap(),
    ]
}

#[test]
fn acceptance_01_integrality_floor_on_random_matrices() {
    let start = Instant::now();
    let field = q_field();
    for g in fuzz_corpus() {
        let report = verify::strong_atiyah_fuzz(&g, &field, 200, 0xA71);
        assert!(
            report.pass,
            "fuzz failed on {}: {:?}",
            g.label(),
            report.failed_checks().collect::<Vec<_>>()
        );
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 60,
        "exactness floor took {elapsed:?}, budget is one minute"
    );
    println!(
        "[criterion 1] PASS - 200 random matrices over each of 5 groups: \
         |G| dim is a nonnegative integer and kernel+image = m ({elapsed:?})"
    );
}

#[test]
fn acceptance_02_subgroup_criterion_on_s3() {
    // independent oracle pass: dims of the five 6x6 / 6x12 eliminations
    let mul = oracle::s3_table();
    let mulf = |a: usize, b: usize| mul[a][b];
    // elements by construction: identity 0; (12) is one-line [1,0,2] = index 2;
    // the 3-cycles are the two order-3 elements
    let t12 = 2usize;
    assert_eq!(mul[t12][t12], 0);
    let cycles: Vec<usize> = (1..6)
        .filter(|&x| mul[x][mul[x][x]] == 0 && mul[x][x] != 0)
        .collect();
    assert_eq!(cycles.len(), 2);
    let one = || oracle::q(1, 1);
    let a_elem: oracle::Elem = [(0, one()), (t12, one())].into_iter().collect();
    let mut nv: oracle::Elem = [(0, oracle::q(1, 3))].into_iter().collect();
    for &c in &cycles {
        nv.insert(c, oracle::q(1, 3));
    }
    let nuv: oracle::Elem = [(0, one())].into_iter().collect();
    let sub = |lhs: &oracle::Elem, rhs: &oracle::Elem| {
        let mut out = lhs.clone();
        for (k, v) in rhs {
            let e = out.entry(*k).or_insert_with(BigRational::zero);
            *e -= v;
            if e.is_zero() {
                out.remove(k);
            }
        }
        out
    };
    let id: oracle::Elem = [(0, one())].into_iter().collect();
    let dim_of = |entries: Vec<Vec<oracle::Elem>>| {
        let rep = oracle::regular_rep(&entries, 6, &mulf);
        oracle::q(oracle::left_nullity(rep) as i64, 6)
    };
    let dim_a = dim_of(vec![vec![a_elem.clone()]]);
    let dim_b = dim_of(vec![vec![a_elem.clone(), sub(&id, &nv)]]);
    let dim_bp = dim_of(vec![vec![a_elem.clone(), sub(&id, &nuv)]]);
    let dim_c = dim_of(vec![vec![a_elem.clone(), nv.clone()]]);
    let dim_cp = dim_of(vec![vec![a_elem.clone(), nuv.clone()]]);
    assert_eq!(dim_a, oracle::q(1, 2), "oracle: dim ker A");
    assert_eq!(dim_b, oracle::q(1, 6), "oracle: dim ker B");
    assert_eq!(dim_bp, oracle::q(1, 2), "oracle: dim ker B'");
    assert_eq!(dim_c, oracle::q(1, 3), "oracle: dim ker C");
    assert_eq!(dim_cp, oracle::q(0, 1), "oracle: dim ker C'");
    assert_eq!(dim_bp, dim_b * oracle::q(3, 1), "oracle: transfer factor 3");
    // |G| dim ker A = 3 lies in 3Z
    assert_eq!(dim_a * oracle::q(6, 1), oracle::q(3, 1));

    // pipeline pass: the suite must reproduce the oracle values bit-exactly
    let g = Group::symmetric(3).unwrap();
    let field = q_field();
    let u = Subgroup::closure(&g, &[g.resolve_word("s1").unwrap()]);
    let v = Subgroup::closure(&g, &[g.resolve_word("s1*s2").unwrap()]);
    let one_s = CycloScalar::one(&field);
    let a = RingMatrix::single(
        RingElement::from_terms(&g, &field, [(0, one_s.clone()), (2, one_s)]).unwrap(),
    );
    let report = verify::prop31(&g, &u, &v, &a, 3);
    assert!(
        report.pass,
        "suite failed: {:?}",
        report.failed_checks().collect::<Vec<_>>()
    );
    let dims = report
        .checks
        .iter()
        .find(|c| c.label == "kernel dimensions")
        .unwrap();
    assert_eq!(
        dims.actual,
        "dim ker A = 1/2, B = 1/6, B' = 1/2, C = 1/3, C' = 0"
    );
    println!(
        "[criterion 2] PASS - S3 instance: oracle dims (1/2, 1/6, 1/2, 1/3, 0) \
         reproduced bit-exactly; transfer factor 3; 6*(1/2) = 3 in 3Z"
    );
}

fn quotient_corpus() -> Vec<QuotientMap> {
    let z4 = Group::cyclic(4).unwrap();
    let p1 = QuotientMap::new(&z4, &Subgroup::closure(&z4, &[2])).unwrap();
    let s3 = Group::symmetric(3).unwrap();
    let p2 = QuotientMap::new(&s3, &Subgroup::closure(&s3, &[3])).unwrap();
    let q8 = Group::quaternion8().unwrap();
    let p3 = QuotientMap::new(&q8, &Subgroup::closure(&q8, &[4])).unwrap();
    vec![p1, p2, p3]
}

#[test]
fn acceptance_03_transfer_properties_exact() {
    let field = q_field();
    for p in quotient_corpus() {
        let report = verify::transfer_properties(&p, &field, 100, 0x9515);
        assert!(
            report.pass,
            "transfer properties failed on {} -> {}: {:?}",
            p.source().label(),
            p.target().label(),
            report.failed_checks().collect::<Vec<_>>()
        );
    }
    println!(
        "[criterion 3] PASS - transfer properties (1)-(5) exact on 100 seeded \
         pairs over (Z/4)/(Z/2), S3/A3 and Q8/center, zero tolerance"
    );
}

#[test]
fn acceptance_04_image_transfer_and_projection_law() {
    let field = q_field();
    for p in quotient_corpus() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x41AB ^ p.source().order() as u64);
        for trial in 0..50 {
            let a = verify::random::ring_matrix(p.target(), &field, &mut rng);
            let report = verify::prop41(&p, &a);
            assert!(
                report.pass,
                "trial {trial} on {} -> {} failed: {:?}",
                p.source().label(),
                p.target().label(),
                report.failed_checks().collect::<Vec<_>>()
            );
        }
    }
    println!(
        "[criterion 4] PASS - dim_Q(im A) = |K| dim_G(im p^*A) and P'^2 = P' = P'* \
         exact on 50 random matrices over each of 3 quotients"
    );
}

#[test]
fn acceptance_05_restriction_formula() {
    let field = q_field();
    let s3 = Group::symmetric(3).unwrap();
    let z6 = Group::cyclic(6).unwrap();
    // indices 2, 3, 6 in both test groups
    let subgroups: Vec<(Group, Subgroup)> = vec![
        (s3.clone(), Subgroup::closure(&s3, &[3])),
        (s3.clone(), Subgroup::closure(&s3, &[2])),
        (s3.clone(), Subgroup::trivial(&s3)),
        (z6.clone(), Subgroup::closure(&z6, &[2])),
        (z6.clone(), Subgroup::closure(&z6, &[3])),
        (z6.clone(), Subgroup::trivial(&z6)),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x0505);
    let mut count = 0;
    'outer: loop {
        for (g, u) in &subgroups {
            let a = verify::random::ring_matrix(g, &field, &mut rng);
            let index = g.order() / u.order();
            assert!([2, 3, 6].contains(&index));
            let report = verify::restriction(g, u, &a);
            assert!(
                report.pass,
                "restriction failed on {} index {index}: {:?}",
                g.label(),
                report.failed_checks().collect::<Vec<_>>()
            );
            count += 1;
            if count >= 50 {
                break 'outer;
            }
        }
    }
    println!(
        "[criterion 5] PASS - restriction formula exact and transversal-independent \
         on 50 random (G, U, A) triples with index in {{2, 3, 6}}"
    );
}

#[test]
fn acceptance_06_split_extension_chain() {
    let field = q_field();
    // Z/2 x Z/3 with K the Z/2 factor, and S3 with K = A3 (split by <(12)>)
    let g1 = Group::product(&[Group::cyclic(2).unwrap(), Group::cyclic(3).unwrap()]).unwrap();
    let p1 = QuotientMap::new(&g1, &Subgroup::closure(&g1, &[3])).unwrap();
    assert!(p1.section().is_some());
    let s3 = Group::symmetric(3).unwrap();
    let p2 = QuotientMap::new(&s3, &Subgroup::closure(&s3, &[3])).unwrap();
    assert!(p2.section().is_some());
    for p in [p1, p2] {
        let mut rng = ChaCha8Rng::seed_from_u64(0x4444 ^ p.source().order() as u64);
        for trial in 0..25 {
            let a = verify::random::ring_matrix(p.source(), &field, &mut rng);
            let report = verify::prop44(&p, &a).unwrap();
            assert!(
                report.pass,
                "trial {trial} on {} failed: {:?}",
                p.source().label(),
                report.failed_checks().collect::<Vec<_>>()
            );
        }
    }
    println!(
        "[criterion 6] PASS - split-extension dimension chain exact on \
         Z/2 x Z/3 (K = Z/2) and S3 (K = A3), 25 random matrices each"
    );
}

#[test]
fn acceptance_07_series_digits_and_tail() {
    let start = Instant::now();
    let result = series_partial_sum(200, 10).unwrap();
    let elapsed = start.elapsed();
    assert_eq!(result.decimal, "0.1659457149");
    assert!(result.digits_certified);
    let bound = Rational::new(BigInt::one(), BigInt::from(10u64.pow(10)));
    assert!(result.tail_bound < bound, "tail bound not below 1e-10");
    assert!(elapsed.as_secs() < 1, "series took {elapsed:?}");
    // and through the CLI surface
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_atiyah"))
        .args(["series", "ds02", "--terms", "200", "--digits", "10"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("0.1659457149"));
    println!(
        "[criterion 7] PASS - series ds02 --terms 200 --digits 10 prints \
         0.1659457149 with certified tail below 1e-10 ({elapsed:?})"
    );
}

#[test]
fn acceptance_08_lamplighter_markov_sequence() {
    let start = Instant::now();
    // expected exact dimensions for n = 2..10, pinned before the build by an
    // independent dense-elimination oracle (three routes: exact elimination,
    // two-prime modular rank, character-orbit blocks, all in agreement)
    let frozen: Vec<(u32, Rational)> = vec![
        (2, rational(1, 4)),
        (3, rational(3, 8)),
        (4, rational(11, 32)),
        (5, rational(11, 32)),
        (6, rational(21, 64)),
        (7, rational(43, 128)),
        (8, rational(341, 1024)),
        (9, rational(171, 512)),
        (10, rational(341, 1024)),
    ];
    // (b) the in-test oracle re-derives the small cases by full elimination
    for n in 2..=5usize {
        let oracle_dim = oracle::lamp_markov_vn_dim(n);
        let expected = &frozen[n - 2].1;
        assert_eq!(
            &oracle_dim, expected,
            "oracle disagrees with the frozen value at n = {n}"
        );
    }
    // the pipeline must reproduce the whole frozen table bit-exactly
    let field = q_field();
    let family = lamplighter_family();
    let markov = SymbolicOperator::markov(&["t", "a*t"], &field).unwrap();
    let run = approximation_run(
        &family,
        &markov,
        2,
        10,
        Some(rational(1, 3)),
        DimStrategy::Auto,
    )
    .unwrap();
    assert!(run.aborted.is_none());
    assert_eq!(run.points.len(), frozen.len());
    for (point, (n, expected)) in run.points.iter().zip(&frozen) {
        assert_eq!(point.parameter, *n);
        assert_eq!(
            &point.vn_dim, expected,
            "pipeline dim differs from the pinned value at n = {n}"
        );
        // (a) denominator divides the group order n 2^n
        let order = BigInt::from(point.order);
        assert!(
            (&order % point.vn_dim.denom()).is_zero(),
            "denominator of {} does not divide {} at n = {n}",
            point.vn_dim,
            point.order
        );
    }
    // modular screening as a further independent route on mid-size cases
    for n in 6..=7u32 {
        let inst = family.instantiate(n).unwrap();
        let elem = markov.evaluate(&inst.group).unwrap();
        let screened =
            vnla::modular::vn_dim_kernel_screened(&RingMatrix::single(elem), 0xBEEF).unwrap();
        assert_eq!(&screened.vn_dim, &frozen[n as usize - 2].1);
    }
    // (c) the sequence approaches the limiting value 1/3
    let third = rational(1, 3);
    let err = |d: &Rational| {
        let e = d - &third;
        if e.is_negative() {
            -e
        } else {
            e
        }
    };
    let first = err(&run.points[0].vn_dim);
    let last = err(&run.points[run.points.len() - 1].vn_dim);
    assert!(
        last < first,
        "|dim_10 - 1/3| = {last} is not below |dim_2 - 1/3| = {first}"
    );
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 600,
        "lamplighter run took {elapsed:?}, budget is ten minutes"
    );
    println!(
        "[criterion 8] PASS - exact Markov kernel dimensions over L_2..L_10 match \
         the oracle-pinned sequence; |dim_10 - 1/3| = {last} < {first} = |dim_2 - 1/3| \
         ({elapsed:?})"
    );
}

#[test]
fn acceptance_09_discrepancy_is_recorded_not_asserted() {
    let g = Group::symmetric(3).unwrap();
    let field = q_field();
    let u = Subgroup::closure(&g, &[g.resolve_word("s1").unwrap()]);
    let v = Subgroup::closure(&g, &[g.resolve_word("s1*s2").unwrap()]);
    let one = CycloScalar::one(&field);
    let a = RingMatrix::single(
        RingElement::from_terms(&g, &field, [(0, one.clone()), (2, one)]).unwrap(),
    );
    let report = verify::prop31(&g, &u, &v, &a, 3);
    // the empirical comparison is present and flags the failed equality...
    let recorded = report
        .checks
        .iter()
        .find(|c| c.label.starts_with("recorded: dim ker C'"))
        .expect("recorded comparison missing");
    assert!(recorded.actual.contains("0 vs 3 * (1/3)"));
    assert!(recorded.actual.contains("FAILS"));
    assert!(recorded.pass, "the recorded entry must not be asserted");
    // ...while the suite still passes overall, so the CLI run exits 0
    assert!(report.pass);
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_atiyah"))
        .args(["verify", "prop31"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    println!(
        "[criterion 9] PASS - the C' vs C comparison (0 vs 3*(1/3)) is recorded, \
         flagged as failing, and the run still exits 0"
    );
}
