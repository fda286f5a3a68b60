//! Modular screening: rank of a rational matrix modulo two distinct random
//! 62-bit primes. A fast probabilistic cross-check for large instances; the
//! exact path is required for acceptance-grade reports, and every report
//! states which path produced it.

use num::{BigInt, ToPrimitive};

use crate::groupring::RingMatrix;
use crate::vnla::{regular_rep, report_from_kernel_dim, ComputePath, DimReport, FieldMatrix};
use crate::{Error, Result};

/// Deterministic Miller-Rabin for u64 (the standard 12-witness set decides
/// primality for every 64-bit integer).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Next 62-bit prime drawn from a seeded deterministic stream.
fn random_prime_62(state: &mut u64) -> u64 {
    loop {
        let c = (splitmix64(state) | 1) & ((1u64 << 62) - 1) | (1u64 << 61);
        if is_prime_u64(c) {
            return c;
        }
    }
}

fn residue(n: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    let r = ((n % &m) + &m) % &m;
    r.to_u64().expect("residue fits in u64")
}

/// Rank of a conductor-1 matrix modulo p. Fails if a denominator vanishes mod p.
pub fn rank_mod_p(m: &FieldMatrix, p: u64) -> Result<usize> {
    if m.field().conductor() != 1 {
        return Err(Error::Screening(
            "modular screening requires rational scalars".into(),
        ));
    }
    let rows = m.rows();
    let cols = m.cols();
    let mut a = vec![0u64; rows * cols];
    for i in 0..rows {
        for j in 0..cols {
            let r = &m.get(i, j).coeffs()[0];
            let den = residue(r.denom(), p);
            if den == 0 {
                return Err(Error::Screening(format!("denominator vanishes mod {p}")));
            }
            let num = residue(r.numer(), p);
            a[i * cols + j] = mul_mod(num, pow_mod(den, p - 2, p), p);
        }
    }
    let mut rank = 0usize;
    for c in 0..cols {
        let Some(pr) = (rank..rows).find(|&i| a[i * cols + c] != 0) else {
            continue;
        };
        if pr != rank {
            for j in 0..cols {
                a.swap(rank * cols + j, pr * cols + j);
            }
        }
        let inv = pow_mod(a[rank * cols + c], p - 2, p);
        for j in c..cols {
            a[rank * cols + j] = mul_mod(a[rank * cols + j], inv, p);
        }
        for i in rank + 1..rows {
            let f = a[i * cols + c];
            if f == 0 {
                continue;
            }
            for j in c..cols {
                let sub = mul_mod(f, a[rank * cols + j], p);
                a[i * cols + j] = (a[i * cols + j] + p - sub) % p;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    Ok(rank)
}

/// Result of a two-prime screening pass.
#[derive(Debug, Clone)]
pub struct ScreenedRank {
    pub rank: usize,
    pub primes: [u64; 2],
}

/// Rank screened modulo two distinct random 62-bit primes; the two ranks
/// must agree.
pub fn screen_rank(m: &FieldMatrix, seed: u64) -> Result<ScreenedRank> {
    let mut state = seed ^ 0xA7C1_5EED_0000_0001;
    let p1 = random_prime_62(&mut state);
    let mut p2 = random_prime_62(&mut state);
    while p2 == p1 {
        p2 = random_prime_62(&mut state);
    }
    let r1 = rank_mod_p(m, p1)?;
    let r2 = rank_mod_p(m, p2)?;
    if r1 != r2 {
        return Err(Error::Screening(format!(
            "ranks disagree: {r1} mod {p1} vs {r2} mod {p2}"
        )));
    }
    Ok(ScreenedRank {
        rank: r1,
        primes: [p1, p2],
    })
}

/// Screened counterpart of [`vn_dim_kernel`](crate::vnla::vn_dim_kernel);
/// the report is marked with the modular-screen path.
pub fn vn_dim_kernel_screened(a: &RingMatrix, seed: u64) -> Result<DimReport> {
    let rep = regular_rep(a);
    let screened = screen_rank(&rep, seed)?;
    let kdim = rep.rows() - screened.rank;
    Ok(report_from_kernel_dim(a, kdim, ComputePath::ModularScreen))
}
