//! Exact arithmetic in a cyclotomic-rational field Q(z_n).
//!
//! A scalar is a residue modulo the n-th cyclotomic polynomial with
//! arbitrary-precision rational coefficients. Conductor 1 is plain Q.
//! Complex conjugation is the ring automorphism z -> z^(n-1).

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::{Error, Result};

/// Exact rational number with arbitrary-precision integers.
pub type Rational = BigRational;

/// Shorthand for small rational constants.
pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// The coefficient field Q(z_n), fixed by its conductor.
///
/// Holds the n-th cyclotomic polynomial (monic, integral, of degree phi(n))
/// and the reduced powers z^0 .. z^(n-1) used for conjugation and parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    conductor: u32,
    /// Monic integer coefficients of the cyclotomic polynomial, ascending degree.
    cyclo: Vec<BigInt>,
    /// z^j reduced modulo the cyclotomic polynomial, for j in 0..n.
    zeta_pows: Vec<Vec<Rational>>,
}

impl FieldSpec {
    /// Builds the field with the given conductor (1 means plain rationals).
    pub fn new(conductor: u32) -> Result<Arc<FieldSpec>> {
        if conductor == 0 {
            return Err(Error::Invalid("conductor must be >= 1".into()));
        }
        let cyclo = cyclotomic_poly(conductor);
        let degree = cyclo.len() - 1;
        let mut zeta_pows = Vec::with_capacity(conductor as usize);
        let mut cur = vec![Rational::zero(); degree];
        cur[0] = Rational::one();
        for _ in 0..conductor {
            zeta_pows.push(cur.clone());
            // multiply by z and reduce by the monic modulus
            let mut next = vec![Rational::zero(); degree + 1];
            for (i, c) in cur.iter().enumerate() {
                next[i + 1] = c.clone();
            }
            let lead = next[degree].clone();
            if !lead.is_zero() {
                for (i, m) in cyclo.iter().enumerate().take(degree) {
                    next[i] -= &lead * Rational::from(m.clone());
                }
            }
            next.truncate(degree);
            cur = next;
        }
        Ok(Arc::new(FieldSpec {
            conductor,
            cyclo,
            zeta_pows,
        }))
    }

    /// Plain rationals, conductor 1.
    pub fn rationals() -> Arc<FieldSpec> {
        FieldSpec::new(1).expect("conductor 1 is always valid")
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Degree of the extension: phi(conductor).
    pub fn degree(&self) -> usize {
        self.cyclo.len() - 1
    }

    pub fn same(a: &Arc<FieldSpec>, b: &Arc<FieldSpec>) -> bool {
        Arc::ptr_eq(a, b) || a.conductor == b.conductor
    }

    fn check_same(a: &Arc<FieldSpec>, b: &Arc<FieldSpec>) -> Result<()> {
        if FieldSpec::same(a, b) {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: a.conductor,
                right: b.conductor,
            })
        }
    }
}

/// The n-th cyclotomic polynomial by dividing x^n - 1 by the proper-divisor factors.
fn cyclotomic_poly(n: u32) -> Vec<BigInt> {
    let mut table: Vec<(u32, Vec<BigInt>)> = Vec::new();
    for d in 1..=n {
        if !n.is_multiple_of(d) {
            continue;
        }
        // x^d - 1
        let mut num = vec![BigInt::zero(); d as usize + 1];
        num[0] = BigInt::from(-1);
        num[d as usize] = BigInt::one();
        for (e, phi_e) in &table {
            if d % e == 0 && *e < d {
                num = poly_div_exact(&num, phi_e);
            }
        }
        table.push((d, num));
    }
    table.pop().expect("n >= 1").1
}

/// Exact division of integer polynomials by a monic divisor.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    debug_assert!(den.last().map(|c| c.is_one()).unwrap_or(false));
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (dd..rem.len()).rev() {
        let c = std::mem::take(&mut rem[k]);
        if c.is_zero() {
            continue;
        }
        for (i, d) in den.iter().enumerate().take(dd) {
            let sub = &c * d;
            rem[k - dd + i] -= sub;
        }
        quot[k - dd] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

/// The four field operations, for the dispatching entry point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// An exact element of Q(z_n): coefficient vector of length phi(n),
/// always fully reduced modulo the cyclotomic polynomial.
#[derive(Clone, PartialEq, Eq)]
pub struct CycloScalar {
    field: Arc<FieldSpec>,
    coeffs: Vec<Rational>,
}

impl CycloScalar {
    pub fn zero(field: &Arc<FieldSpec>) -> CycloScalar {
        CycloScalar {
            field: field.clone(),
            coeffs: vec![Rational::zero(); field.degree()],
        }
    }

    pub fn one(field: &Arc<FieldSpec>) -> CycloScalar {
        CycloScalar::from_rational(field, Rational::one())
    }

    pub fn from_rational(field: &Arc<FieldSpec>, r: Rational) -> CycloScalar {
        let mut coeffs = vec![Rational::zero(); field.degree()];
        coeffs[0] = r;
        CycloScalar {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn from_integer(field: &Arc<FieldSpec>, n: i64) -> CycloScalar {
        CycloScalar::from_rational(field, rational(n, 1))
    }

    /// The primitive root z_n (equals 1 when the conductor is 1).
    pub fn zeta(field: &Arc<FieldSpec>) -> CycloScalar {
        CycloScalar::zeta_pow(field, 1)
    }

    /// z_n^k, reduced.
    pub fn zeta_pow(field: &Arc<FieldSpec>, k: u32) -> CycloScalar {
        let k = (k % field.conductor) as usize;
        CycloScalar {
            field: field.clone(),
            coeffs: field.zeta_pows[k].clone(),
        }
    }

    /// Builds a scalar from an arbitrary-length coefficient vector, reducing it.
    pub fn from_coeffs(field: &Arc<FieldSpec>, coeffs: Vec<Rational>) -> CycloScalar {
        let mut c = coeffs;
        reduce_in_place(field, &mut c);
        CycloScalar {
            field: field.clone(),
            coeffs: c,
        }
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value, if the scalar lies in Q.
    pub fn as_rational(&self) -> Result<Rational> {
        if self.is_rational() {
            Ok(self.coeffs[0].clone())
        } else {
            Err(Error::NotRational(self.to_string()))
        }
    }

    pub fn checked_add(&self, rhs: &CycloScalar) -> Result<CycloScalar> {
        FieldSpec::check_same(&self.field, &rhs.field)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycloScalar {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn checked_sub(&self, rhs: &CycloScalar) -> Result<CycloScalar> {
        FieldSpec::check_same(&self.field, &rhs.field)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CycloScalar {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn checked_mul(&self, rhs: &CycloScalar) -> Result<CycloScalar> {
        FieldSpec::check_same(&self.field, &rhs.field)?;
        let d = self.field.degree();
        let mut prod = vec![Rational::zero(); 2 * d.max(1) - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                prod[i + j] += a * b;
            }
        }
        reduce_in_place(&self.field, &mut prod);
        Ok(CycloScalar {
            field: self.field.clone(),
            coeffs: prod,
        })
    }

    pub fn checked_div(&self, rhs: &CycloScalar) -> Result<CycloScalar> {
        FieldSpec::check_same(&self.field, &rhs.field)?;
        self.checked_mul(&rhs.inverse()?)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm
    /// modulo the (irreducible) cyclotomic polynomial.
    pub fn inverse(&self) -> Result<CycloScalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_rational() {
            let r = &self.coeffs[0];
            return Ok(CycloScalar::from_rational(
                &self.field,
                Rational::one() / r,
            ));
        }
        let modulus: Vec<Rational> = self
            .field
            .cyclo
            .iter()
            .map(|c| Rational::from(c.clone()))
            .collect();
        let (g, u) = poly_ext_gcd(&self.coeffs, &modulus);
        // gcd is a nonzero constant because the modulus is irreducible over Q
        debug_assert_eq!(poly_deg(&g), Some(0));
        let ginv = Rational::one() / g[0].clone();
        let inv: Vec<Rational> = u.iter().map(|c| c * &ginv).collect();
        Ok(CycloScalar::from_coeffs(&self.field, inv))
    }

    /// Complex conjugation: the automorphism z -> z^(n-1). Fixes rationals.
    pub fn conj(&self) -> CycloScalar {
        let n = self.field.conductor;
        if n == 1 {
            return self.clone();
        }
        let mut out = vec![Rational::zero(); self.field.degree()];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let image = &self.field.zeta_pows[((n as usize) - k) % n as usize];
            for (i, v) in image.iter().enumerate() {
                if !v.is_zero() {
                    out[i] += c * v;
                }
            }
        }
        CycloScalar {
            field: self.field.clone(),
            coeffs: out,
        }
    }

    /// |x|^2 = x * conj(x).
    pub fn norm_sq(&self) -> CycloScalar {
        self.checked_mul(&self.conj()).expect("same field")
    }

    pub fn neg(&self) -> CycloScalar {
        CycloScalar {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Re-normalizes (used by tests to confirm canonical-form idempotence).
    pub fn normalized(&self) -> CycloScalar {
        CycloScalar::from_coeffs(&self.field, self.coeffs.clone())
    }

    /// Parses the textual form: "p/q" for rationals, sums of "c*z^k" terms
    /// (with "z" the primitive root) for conductor > 1.
    pub fn parse(field: &Arc<FieldSpec>, text: &str) -> Result<CycloScalar> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse {
                what: "scalar",
                detail: "empty string".into(),
            });
        }
        let mut acc = CycloScalar::zero(field);
        let mut term = String::new();
        let chars = s.chars().peekable();
        let mut first = true;
        for c in chars {
            if (c == '+' || c == '-') && !first && !term.ends_with('^') && !term.is_empty() {
                acc = acc.checked_add(&parse_term(field, &term)?)?;
                term.clear();
                if c == '-' {
                    term.push('-');
                }
            } else {
                term.push(c);
            }
            first = false;
        }
        if !term.is_empty() {
            acc = acc.checked_add(&parse_term(field, &term)?)?;
        }
        Ok(acc)
    }
}

fn parse_term(field: &Arc<FieldSpec>, term: &str) -> Result<CycloScalar> {
    let bad = |detail: String| Error::Parse {
        what: "scalar",
        detail,
    };
    if let Some(zpos) = term.find('z') {
        if field.conductor() == 1 {
            return Err(bad(format!("'{term}': no root of unity over Q")));
        }
        let coeff_part = term[..zpos].trim_end_matches('*');
        let coeff = if coeff_part.is_empty() {
            Rational::one()
        } else if coeff_part == "-" {
            -Rational::one()
        } else {
            Rational::from_str(coeff_part).map_err(|e| bad(format!("'{coeff_part}': {e}")))?
        };
        let exp_part = &term[zpos + 1..];
        let exp: u32 = if exp_part.is_empty() {
            1
        } else if let Some(stripped) = exp_part.strip_prefix('^') {
            stripped
                .parse()
                .map_err(|e| bad(format!("'{exp_part}': {e}")))?
        } else {
            return Err(bad(format!("'{term}': malformed power")));
        };
        let z = CycloScalar::zeta_pow(field, exp);
        Ok(CycloScalar::from_rational(field, coeff)
            .checked_mul(&z)
            .expect("same field"))
    } else {
        let r = Rational::from_str(term).map_err(|e| bad(format!("'{term}': {e}")))?;
        Ok(CycloScalar::from_rational(field, r))
    }
}

/// Dispatching entry point over the four field operations.
pub fn field_arith(a: &CycloScalar, b: &CycloScalar, op: FieldOp) -> Result<CycloScalar> {
    match op {
        FieldOp::Add => a.checked_add(b),
        FieldOp::Sub => a.checked_sub(b),
        FieldOp::Mul => a.checked_mul(b),
        FieldOp::Div => a.checked_div(b),
    }
}

fn reduce_in_place(field: &Arc<FieldSpec>, coeffs: &mut Vec<Rational>) {
    let d = field.degree();
    if coeffs.len() > d {
        for k in (d..coeffs.len()).rev() {
            let c = std::mem::replace(&mut coeffs[k], Rational::zero());
            if c.is_zero() {
                continue;
            }
            for (i, m) in field.cyclo.iter().enumerate().take(d) {
                if !m.is_zero() {
                    let sub = &c * Rational::from(m.clone());
                    coeffs[k - d + i] -= sub;
                }
            }
        }
    }
    coeffs.resize(d, Rational::zero());
}

fn poly_deg(p: &[Rational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

/// Extended Euclid over Q[x]: returns (g, u) with u*a = g modulo b.
fn poly_ext_gcd(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    let mut u0 = vec![Rational::one()];
    let mut u1 = vec![Rational::zero()];
    while poly_deg(&r1).is_some() {
        let (q, rem) = poly_div_rem(&r0, &r1);
        let unew = poly_sub(&u0, &poly_mul(&q, &u1));
        r0 = r1;
        r1 = rem;
        u0 = u1;
        u1 = unew;
    }
    (r0, u0)
}

fn poly_div_rem(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let dd = poly_deg(den).expect("division by zero polynomial");
    let lead = den[dd].clone();
    let mut rem = num.to_vec();
    let nd = match poly_deg(&rem) {
        Some(d) if d >= dd => d,
        _ => return (vec![Rational::zero()], rem),
    };
    let mut quot = vec![Rational::zero(); nd - dd + 1];
    for k in (dd..=nd).rev() {
        let c = rem[k].clone() / lead.clone();
        if c.is_zero() {
            continue;
        }
        for i in 0..=dd {
            let sub = &c * &den[i];
            rem[k - dd + i] -= sub;
        }
        quot[k - dd] = c;
    }
    (quot, rem)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len()];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    out
}

impl fmt::Display for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.conductor() == 1 || self.is_rational() {
            return write!(f, "{}", self.coeffs[0]);
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let piece = match k {
                0 => format!("{mag}"),
                1 => format!("{mag}*z"),
                _ => format!("{mag}*z^{k}"),
            };
            if first {
                if c.is_negative() {
                    write!(f, "-{piece}")?;
                } else {
                    write!(f, "{piece}")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - {piece}")?;
            } else {
                write!(f, " + {piece}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloScalar(z_{}: {})", self.field.conductor(), self)
    }
}

impl std::ops::Add for &CycloScalar {
    type Output = CycloScalar;
    fn add(self, rhs: &CycloScalar) -> CycloScalar {
        self.checked_add(rhs).expect("scalar field mismatch")
    }
}

impl std::ops::Sub for &CycloScalar {
    type Output = CycloScalar;
    fn sub(self, rhs: &CycloScalar) -> CycloScalar {
        self.checked_sub(rhs).expect("scalar field mismatch")
    }
}

impl std::ops::Mul for &CycloScalar {
    type Output = CycloScalar;
    fn mul(self, rhs: &CycloScalar) -> CycloScalar {
        self.checked_mul(rhs).expect("scalar field mismatch")
    }
}

impl std::ops::Neg for &CycloScalar {
    type Output = CycloScalar;
    fn neg(self) -> CycloScalar {
        CycloScalar::neg(self)
    }
}
