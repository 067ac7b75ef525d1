//! Local Euler factors and formal Dirichlet-series assembly.
//!
//! At a good prime the degree-3 factor is the reciprocal quadratic
//! `P_p(T) = 1 - a_p T + p^3 T^2`, with `a_p` subject to the integer-exact
//! Riemann Hypothesis bound `a_p^2 <= 4 p^3`. At the bad primes 2 and 3 the
//! newform's linear factor `1 - a_p T` is adopted.
//!
//! [`dirichlet_from_euler`] expands a full set of factors into Dirichlet
//! coefficients `a_1..a_N` by the per-prime geometric-series recursion; fed
//! with the eta oracle's `a_p` this reproduces the eta expansion itself,
//! which is the module's headline round-trip test.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::ffield::is_prime;

/// Bad primes of the threefold (and the level of the newform is 6).
pub const BAD_PRIMES: [u64; 2] = [2, 3];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LfunctionError {
    /// `a_p^2 > 4 p^3` at a good prime: upstream corruption.
    RhBoundViolated { p: u64, ap: i64 },
    /// [`euler_factor`] called on a composite.
    NotPrime(u64),
    /// [`dirichlet_from_euler`] is missing the factor at `p <= N`.
    MissingFactor { p: u64 },
    /// Two factors supplied for one prime.
    DuplicateFactor { p: u64 },
}

impl fmt::Display for LfunctionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LfunctionError::RhBoundViolated { p, ap } => {
                write!(f, "|a_{p}| = |{ap}| exceeds 2 p^(3/2)")
            }
            LfunctionError::NotPrime(p) => write!(f, "{p} is not prime"),
            LfunctionError::MissingFactor { p } => {
                write!(f, "no Euler factor supplied for prime {p}")
            }
            LfunctionError::DuplicateFactor { p } => {
                write!(f, "two Euler factors supplied for prime {p}")
            }
        }
    }
}

impl core::error::Error for LfunctionError {}

/// A local factor as the coefficient list of the reciprocal polynomial:
/// `[1, c_1]` or `[1, c_1, c_2]` for `1 + c_1 T + c_2 T^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerFactor {
    pub p: u64,
    pub coeffs: Vec<i128>,
}

impl EulerFactor {
    /// Degree of the local factor in `T`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

impl fmt::Display for EulerFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1")?;
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            if *c == 0 {
                continue;
            }
            let sign = if *c < 0 { '-' } else { '+' };
            let mag = c.unsigned_abs();
            write!(f, " {sign} ")?;
            if mag != 1 {
                write!(f, "{mag}*")?;
            }
            if k == 1 {
                write!(f, "T")?;
            } else {
                write!(f, "T^{k}")?;
            }
        }
        Ok(())
    }
}

/// Integer-exact Riemann Hypothesis bound at weight 4: `t^2 <= 4 p^3`.
pub fn rh_check(p: u64, t3: i64) -> bool {
    let t = t3 as i128;
    t * t <= 4 * (p as i128).pow(3)
}

/// Builds the local factor at `p`: `1 - a_p T + p^3 T^2` at a good prime
/// (rejecting RH-bound violations as a sign of upstream corruption), or the
/// adopted linear factor `1 - a_p T` at `p in {2, 3}`.
pub fn euler_factor(p: u64, ap: i64) -> Result<EulerFactor, LfunctionError> {
    if !is_prime(p) {
        return Err(LfunctionError::NotPrime(p));
    }
    if BAD_PRIMES.contains(&p) {
        return Ok(EulerFactor {
            p,
            coeffs: vec![1, -(ap as i128)],
        });
    }
    if !rh_check(p, ap) {
        return Err(LfunctionError::RhBoundViolated { p, ap });
    }
    Ok(EulerFactor {
        p,
        coeffs: vec![1, -(ap as i128), (p as i128).pow(3)],
    })
}

/// Expands `prod_p P_p(p^{-s})^{-1}` as Dirichlet coefficients `a_1..a_N`.
///
/// Returns the coefficient vector indexed by `n` (entry 0 is unused and
/// zero). Every prime `<= N` must be covered by exactly one factor.
///
/// For each prime the inverse power series of the local factor gives
/// `a_{p^r}` by the recursion `b_r = -c_1 b_{r-1} - c_2 b_{r-2}`; the
/// coefficients multiply across prime powers.
pub fn dirichlet_from_euler(
    factors: &[EulerFactor],
    order: usize,
) -> Result<Vec<BigInt>, LfunctionError> {
    let mut by_prime: BTreeMap<u64, &EulerFactor> = BTreeMap::new();
    for f in factors {
        if by_prime.insert(f.p, f).is_some() {
            return Err(LfunctionError::DuplicateFactor { p: f.p });
        }
    }
    // b[p][r] = a_{p^r}
    let mut prime_powers: BTreeMap<u64, Vec<BigInt>> = BTreeMap::new();
    for (&p, factor) in &by_prime {
        let c1 = factor.coeffs.get(1).copied().unwrap_or(0);
        let c2 = factor.coeffs.get(2).copied().unwrap_or(0);
        let mut b = vec![BigInt::one()];
        let mut power = p as u128;
        while power <= order as u128 {
            let r = b.len();
            let mut next = -BigInt::from(c1) * &b[r - 1];
            if r >= 2 {
                next -= BigInt::from(c2) * &b[r - 2];
            }
            b.push(next);
            power *= p as u128;
        }
        prime_powers.insert(p, b);
    }

    let mut out = vec![BigInt::zero(); order + 1];
    if order >= 1 {
        out[1] = BigInt::one();
    }
    for n in 2..=order {
        let mut rest = n as u64;
        let mut acc = BigInt::one();
        let mut d = 2u64;
        while rest > 1 {
            if d * d > rest {
                d = rest; // final prime factor
            }
            if rest.is_multiple_of(d) {
                let mut r = 0usize;
                while rest.is_multiple_of(d) {
                    rest /= d;
                    r += 1;
                }
                let b = prime_powers
                    .get(&d)
                    .ok_or(LfunctionError::MissingFactor { p: d })?;
                acc *= &b[r];
            }
            d += 1;
        }
        out[n] = acc;
    }
    Ok(out)
}

/// Formats an Euler factor together with its prime, for reports.
pub fn describe_factor(f: &EulerFactor) -> String {
    alloc::format!("P_{}(T) = {}", f.p, f)
}
