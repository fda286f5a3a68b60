//! Approximation laboratory: families of finite quotients, symbolic
//! operators over named generators, exact dimension sequences, and the
//! totient series with certified tails.
//!
//! The lamplighter truncations (Z/2 wr Z/n) come with a structure-aware
//! exact path: the regular representation block-diagonalizes over the
//! rational +/-1 characters of the lamp subgroup, orbit by orbit under the
//! shift, so kernel dimensions stay exact while the full |G| x |G|
//! elimination is never formed.

use std::fmt;
use std::sync::Arc;

use num::{BigInt, Integer, One, Signed, Zero};
use serde::Serialize;

use crate::groupring::{RingElement, RingMatrix};
use crate::groups::Group;
use crate::scalar::{CycloScalar, FieldSpec, Rational};
use crate::vnla::{rational_string, vn_dim_kernel, ComputePath, FieldMatrix};
use crate::{Error, Result};

/// Euler's totient by trial-division factorization.
pub fn euler_phi(k: u64) -> u64 {
    assert!(k >= 1, "totient of a nonpositive integer");
    let mut res = k;
    let mut m = k;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            res -= res / p;
        }
        p += 1;
    }
    if m > 1 {
        res -= res / m;
    }
    res
}

// --------------------------------------------------------- symbolic operators

/// A 1x1 operator written as words in named generators with exact
/// coefficients; evaluated inside each finite quotient of a family.
#[derive(Clone, Debug)]
pub struct SymbolicOperator {
    name: String,
    terms: Vec<(String, CycloScalar)>,
}

impl SymbolicOperator {
    /// Terms must be nonempty and coefficients nonzero.
    pub fn new(name: impl Into<String>, terms: Vec<(String, CycloScalar)>) -> Result<SymbolicOperator> {
        if terms.is_empty() {
            return Err(Error::Invalid("operator needs at least one term".into()));
        }
        if terms.iter().any(|(_, c)| c.is_zero()) {
            return Err(Error::Invalid("operator coefficients must be nonzero".into()));
        }
        Ok(SymbolicOperator {
            name: name.into(),
            terms,
        })
    }

    /// The identity word with coefficient one.
    pub fn identity(field: &Arc<FieldSpec>) -> SymbolicOperator {
        SymbolicOperator {
            name: "identity".into(),
            terms: vec![("e".into(), CycloScalar::one(field))],
        }
    }

    /// The simple-random-walk averaging operator over a symmetric generating
    /// set: (1/(2k)) * sum of (s + s^-1) over the k given generator words.
    pub fn markov(gen_words: &[&str], field: &Arc<FieldSpec>) -> Result<SymbolicOperator> {
        if gen_words.is_empty() {
            return Err(Error::Invalid("markov operator needs generators".into()));
        }
        let w = CycloScalar::from_rational(
            field,
            Rational::new(BigInt::one(), BigInt::from(2 * gen_words.len() as i64)),
        );
        let mut terms = Vec::new();
        for word in gen_words {
            terms.push((word.to_string(), w.clone()));
            terms.push((format!("({word})^-1"), w.clone()));
        }
        SymbolicOperator::new(format!("markov{{{}}}", gen_words.join(",")), terms)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Resolves every word in the given group and sums the terms.
    pub fn evaluate(&self, g: &Group) -> Result<RingElement> {
        let field = self.terms[0].1.field().clone();
        let mut resolved = Vec::with_capacity(self.terms.len());
        for (word, coeff) in &self.terms {
            resolved.push((g.resolve_word(word)?, coeff.clone()));
        }
        RingElement::from_terms(g, &field, resolved)
    }
}

impl fmt::Display for SymbolicOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

// ------------------------------------------------------------------ families

/// One instantiated member of a quotient family.
pub struct FamilyInstance {
    pub group: Group,
    /// Set for lamplighter truncations: the number of lamp positions,
    /// enabling the character-orbit exact path.
    pub lamp_split: Option<u32>,
}

/// A parameterized family of finite quotients with named generators.
pub struct QuotientFamily {
    name: String,
    min_param: u32,
    max_param: u32,
    build: Box<dyn Fn(u32) -> Result<FamilyInstance> + Send + Sync>,
}

impl QuotientFamily {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn min_param(&self) -> u32 {
        self.min_param
    }

    pub fn max_param(&self) -> u32 {
        self.max_param
    }

    pub fn instantiate(&self, param: u32) -> Result<FamilyInstance> {
        if param < self.min_param || param > self.max_param {
            return Err(Error::Invalid(format!(
                "parameter {param} outside [{}, {}] for family {}",
                self.min_param, self.max_param, self.name
            )));
        }
        (self.build)(param)
    }
}

/// The lamplighter truncations (Z/2 wr Z/n) with generators `a` (the lamp at
/// position 0) and `t` (the shift); genuine quotients of the lamplighter
/// group, with n capped so the order n 2^n stays within the size cap.
pub fn lamplighter_family() -> QuotientFamily {
    QuotientFamily {
        name: "lamplighter".into(),
        min_param: 1,
        max_param: 10,
        build: Box::new(|n| {
            Ok(FamilyInstance {
                group: Group::lamplighter_truncation(n as usize)?,
                lamp_split: Some(n),
            })
        }),
    }
}

// -------------------------------------------------- character-orbit blocks

/// Rotate an n-bit mask (position 0 stored in the most significant bit):
/// bit i of the result is bit (i - k) mod n of v.
fn rot_mask(v: u32, k: i64, n: u32) -> u32 {
    let n = n as i64;
    let mut out = 0u32;
    for i in 0..n {
        let src = (i - k).rem_euclid(n);
        let bit = (v >> (n - 1 - src)) & 1;
        out |= bit << (n - 1 - i);
    }
    out
}

/// Exact kernel dimension of right multiplication by x on l2(L_n) computed
/// blockwise: the lamp subgroup (Z/2)^n has rational characters chi(a_v) =
/// (-1)^<chi, v>, the shift permutes them, and each orbit O contributes an
/// invariant block of size n |O|. The total field nullity is the sum of the
/// block nullities; the result equals the full-matrix computation exactly.
pub fn lamplighter_kernel_dim(n: u32, x: &RingElement) -> Result<Rational> {
    let g = x.group();
    let order = g.order();
    if order != (n as usize) * (1usize << n) {
        return Err(Error::Invalid(format!(
            "group order {order} does not match lamplighter parameter {n}"
        )));
    }
    let field = x.field();
    // decompose terms: index = v * n + k
    let terms: Vec<(u32, u32, CycloScalar)> = x
        .terms()
        .map(|(gidx, c)| (gidx / n, gidx % n, c.clone()))
        .collect();
    let masks = 1u32 << n;
    let mut seen = vec![false; masks as usize];
    let mut nullity = 0usize;
    for start in 0..masks {
        if seen[start as usize] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut c = start;
        while !seen[c as usize] {
            seen[c as usize] = true;
            orbit.push(c);
            c = rot_mask(c, -1, n);
        }
        let mut pos = vec![u32::MAX; masks as usize];
        for (i, &m) in orbit.iter().enumerate() {
            pos[m as usize] = i as u32;
        }
        let size = (n as usize) * orbit.len();
        let mut block = FieldMatrix::zero(field, size, size);
        for &(v, k, ref coeff) in &terms {
            for (oi, &chi) in orbit.iter().enumerate() {
                let sign = (chi & v).count_ones() % 2 == 1;
                let val = if sign { coeff.neg() } else { coeff.clone() };
                let chi2 = rot_mask(chi, -(k as i64), n);
                let oj = pos[chi2 as usize] as usize;
                for j in 0..n as usize {
                    let row = oi * n as usize + j;
                    let col = oj * n as usize + (j + k as usize) % n as usize;
                    let cur = block.get(row, col).checked_add(&val).expect("same field");
                    block.set(row, col, cur);
                }
            }
        }
        nullity += size - block.rank();
    }
    Ok(Rational::new(BigInt::from(nullity), BigInt::from(order)))
}

// ----------------------------------------------------------------- runs

/// How dimensions are computed along a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimStrategy {
    /// Character-orbit blocks when the family provides the split, otherwise
    /// the generic dense pipeline. Exact either way.
    Auto,
    /// Force the generic dense pipeline (regular representation plus
    /// elimination). Exact; only viable for small parameters.
    Generic,
    /// Two-prime modular screening of the regular representation. Fast and
    /// probabilistic; reports are flagged and are not acceptance grade.
    Screened { seed: u64 },
}

/// One parameter point of an approximation run.
#[derive(Debug, Clone, Serialize)]
pub struct ApproxPoint {
    pub parameter: u32,
    pub order: usize,
    #[serde(with = "rational_string")]
    pub vn_dim: Rational,
    pub decimal: String,
    #[serde(with = "optional_rational_string")]
    pub error: Option<Rational>,
}

/// Exact dimension sequence along a family of finite quotients.
#[derive(Debug, Clone, Serialize)]
pub struct ApproxRun {
    pub family: String,
    pub operator: String,
    #[serde(with = "optional_rational_string")]
    pub target: Option<Rational>,
    pub points: Vec<ApproxPoint>,
    /// Set when an instantiation failure aborted the run; the points
    /// gathered so far are kept.
    pub aborted: Option<String>,
    pub path: ComputePath,
}

mod optional_rational_string {
    use super::Rational;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(
        r: &Option<Rational>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match r {
            Some(v) => s.serialize_some(&v.to_string()),
            None => s.serialize_none(),
        }
    }
}

impl ApproxRun {
    /// Fixed-column CSV: parameter, group order, exact dimension, decimal,
    /// absolute error to the target.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("parameter,order,vn_dim,decimal,error\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                p.parameter,
                p.order,
                p.vn_dim,
                p.decimal,
                p.error.as_ref().map(|e| e.to_string()).unwrap_or_default()
            ));
        }
        out
    }
}

/// Evaluates the operator in every quotient of the family for parameters
/// from..=to and computes the exact kernel dimension at each point.
pub fn approximation_run(
    family: &QuotientFamily,
    op: &SymbolicOperator,
    from: u32,
    to: u32,
    target: Option<Rational>,
    strategy: DimStrategy,
) -> Result<ApproxRun> {
    if from > to {
        return Err(Error::Invalid(format!("empty parameter range {from}..{to}")));
    }
    let path = match strategy {
        DimStrategy::Screened { .. } => ComputePath::ModularScreen,
        _ => ComputePath::Exact,
    };
    let mut run = ApproxRun {
        family: family.name().to_string(),
        operator: op.to_string(),
        target: target.clone(),
        points: Vec::new(),
        aborted: None,
        path,
    };
    for param in from..=to {
        let inst = match family.instantiate(param) {
            Ok(i) => i,
            Err(e) => {
                run.aborted = Some(format!("parameter {param}: {e}"));
                return Ok(run);
            }
        };
        let elem = op.evaluate(&inst.group)?;
        let dim = match (strategy, inst.lamp_split) {
            (DimStrategy::Auto, Some(n)) => lamplighter_kernel_dim(n, &elem)?,
            (DimStrategy::Screened { seed }, _) => {
                let a = RingMatrix::single(elem.clone());
                crate::vnla::modular::vn_dim_kernel_screened(&a, seed)?.vn_dim
            }
            _ => vn_dim_kernel(&RingMatrix::single(elem.clone())).vn_dim,
        };
        let error = target.as_ref().map(|t| {
            let d = &dim - t;
            if d.is_negative() {
                -d
            } else {
                d
            }
        });
        run.points.push(ApproxPoint {
            parameter: param,
            order: inst.group.order(),
            decimal: decimal_truncate(&dim, 12),
            vn_dim: dim,
            error,
        });
    }
    Ok(run)
}

// ------------------------------------------------------------------ series

/// Exact partial sum of the totient series sum_{k>=2} phi(k)/(2^k - 1)^2
/// with a certified tail bound.
#[derive(Debug, Clone, Serialize)]
pub struct SeriesResult {
    pub terms: u64,
    pub digits: usize,
    /// Decimal expansion truncated to `digits` places.
    pub decimal: String,
    #[serde(with = "rational_string")]
    pub partial_sum: Rational,
    #[serde(with = "rational_string")]
    pub tail_bound: Rational,
    /// True when adding the tail bound cannot change the printed digits, so
    /// they are digits of the limit as well.
    pub digits_certified: bool,
}

/// Truncated decimal expansion (toward zero) with `digits` places.
pub fn decimal_truncate(x: &Rational, digits: usize) -> String {
    let sign = if x.is_negative() { "-" } else { "" };
    let ax = x.abs();
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (ax.numer() * &scale).div_floor(ax.denom());
    let s = scaled.to_string();
    let s = format!("{:0>width$}", s, width = digits + 1);
    let (int_part, frac_part) = s.split_at(s.len() - digits);
    format!("{sign}{int_part}.{frac_part}")
}

/// Partial sums of the totient series. The tail beyond k_max is bounded by
/// sum_{k>k_max} k/(2^k - 1)^2 <= 4 sum_{k>k_max} k (1/4)^k, reported as an
/// exact rational.
pub fn series_partial_sum(k_max: u64, digits: usize) -> Result<SeriesResult> {
    if k_max < 2 {
        return Err(Error::Invalid("series starts at k = 2".into()));
    }
    let mut sum = Rational::zero();
    for k in 2..=k_max {
        let d = (BigInt::one() << k) - BigInt::one();
        sum += Rational::new(BigInt::from(euler_phi(k)), &d * &d);
    }
    // 4 * x^(K+1) * ((K+1) - K x) / (1 - x)^2 at x = 1/4
    let x = Rational::new(BigInt::one(), BigInt::from(4));
    let one = Rational::one();
    let mut xpow = Rational::one();
    for _ in 0..=k_max {
        xpow *= &x;
    }
    let kq = Rational::from(BigInt::from(k_max));
    let tail = Rational::from(BigInt::from(4))
        * &xpow
        * (&(&kq + &one) - &(&kq * &x))
        / (&(&one - &x) * &(&one - &x));
    let decimal = decimal_truncate(&sum, digits);
    let digits_certified = decimal_truncate(&(&sum + &tail), digits) == decimal;
    Ok(SeriesResult {
        terms: k_max,
        digits,
        decimal,
        partial_sum: sum,
        tail_bound: tail,
        digits_certified,
    })
}
