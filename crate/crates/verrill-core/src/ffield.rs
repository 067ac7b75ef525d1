//! Arithmetic modulo a prime and exhaustive enumeration of products of
//! projective spaces over `F_p`.
//!
//! Moduli are restricted to `2 <= p < 2^31` so that every product of two
//! residues fits in a `u64` without overflow; the desk-scale sweeps here
//! never need primes beyond a few hundred.
//!
//! Points of `P^{n_1} x ... x P^{n_k}` are enumerated once each in canonical
//! form (first nonzero coordinate of every factor scaled to 1), in
//! lexicographic order over the canonical coordinate tuples.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

/// Largest admissible modulus (exclusive).
pub const MAX_MODULUS: u64 = 1 << 31;

/// Errors from modulus construction and residue arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FfieldError {
    /// The candidate modulus failed the primality check.
    NotPrime(u64),
    /// The candidate modulus is `>= 2^31`.
    ModulusTooLarge(u64),
    /// Inversion of the zero residue.
    DivisionByZero,
    /// A projective factor whose coordinates are all zero.
    ZeroPoint,
    /// A projective factor of dimension zero was requested.
    EmptyFactor,
    /// A rational coefficient whose denominator vanishes mod p.
    BadDenominator(u64),
}

impl fmt::Display for FfieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FfieldError::NotPrime(p) => write!(f, "{p} is not prime"),
            FfieldError::ModulusTooLarge(p) => write!(f, "modulus {p} exceeds 2^31 - 1"),
            FfieldError::DivisionByZero => write!(f, "division by zero residue"),
            FfieldError::ZeroPoint => write!(f, "all coordinates of a projective factor are zero"),
            FfieldError::EmptyFactor => write!(f, "projective factors must have dimension >= 1"),
            FfieldError::BadDenominator(p) => {
                write!(f, "denominator vanishes modulo {p}")
            }
        }
    }
}

impl core::error::Error for FfieldError {}

/// A checked prime modulus `2 <= p < 2^31` with exact residue arithmetic.
///
/// All arithmetic returns residues in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimeModulus {
    p: u64,
}

impl PrimeModulus {
    /// Validates primality by deterministic trial division.
    pub fn new(p: u64) -> Result<Self, FfieldError> {
        if p >= MAX_MODULUS {
            return Err(FfieldError::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FfieldError::NotPrime(p));
        }
        Ok(PrimeModulus { p })
    }

    /// The underlying prime.
    pub fn get(&self) -> u64 {
        self.p
    }

    /// Reduces an arbitrary integer into `[0, p)`.
    pub fn reduce_i64(&self, a: i64) -> u64 {
        let r = a.rem_euclid(self.p as i64);
        r as u64
    }

    /// Reduces a big integer into `[0, p)`.
    pub fn reduce_bigint(&self, a: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let r = a.mod_floor(&p);
        r.to_u64().expect("residue fits u64")
    }

    /// Reduces an exact rational into `[0, p)`; errors if `p` divides the
    /// denominator.
    pub fn reduce_rational(&self, a: &BigRational) -> Result<u64, FfieldError> {
        let den = self.reduce_bigint(a.denom());
        if den == 0 {
            return Err(FfieldError::BadDenominator(self.p));
        }
        let num = self.reduce_bigint(a.numer());
        Ok(self.mul(num, self.inv(den)?))
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    /// Product of residues; both inputs must already lie in `[0, p)`.
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.p && b < self.p);
        // p < 2^31 keeps a*b < 2^62.
        (a * b) % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            exp >>= 1;
            if exp > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }

    /// Multiplicative inverse of `a` mod `p`.
    ///
    /// `a = 0` has no inverse and reports [`FfieldError::DivisionByZero`].
    pub fn inv(&self, a: u64) -> Result<u64, FfieldError> {
        if a.is_multiple_of(self.p) {
            return Err(FfieldError::DivisionByZero);
        }
        // Fermat: a^(p-2) since p is prime.
        Ok(self.pow(a, self.p - 2))
    }
}

/// Deterministic trial-division primality for `n < 2^31`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    if n.is_multiple_of(3) {
        return n == 3;
    }
    let mut d = 5u64;
    while d * d <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// A point of a product of projective spaces over `F_p`.
///
/// `factors[i]` holds the `n_i + 1` homogeneous coordinates of the i-th
/// factor. Canonical form scales the first nonzero coordinate of every
/// factor to 1, so canonical points compare by coordinate equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint {
    factors: Vec<Vec<u64>>,
    canonical: bool,
}

impl ProjPoint {
    /// Builds a point from raw homogeneous coordinates, rescaling every
    /// factor to canonical form.
    pub fn canonicalize(factors: Vec<Vec<u64>>, p: PrimeModulus) -> Result<Self, FfieldError> {
        let mut out = Vec::with_capacity(factors.len());
        for coords in factors {
            if coords.is_empty() {
                return Err(FfieldError::EmptyFactor);
            }
            let reduced: Vec<u64> = coords.iter().map(|&c| c % p.get()).collect();
            let lead = reduced
                .iter()
                .position(|&c| c != 0)
                .ok_or(FfieldError::ZeroPoint)?;
            let scale = p.inv(reduced[lead])?;
            out.push(reduced.iter().map(|&c| p.mul(c, scale)).collect());
        }
        Ok(ProjPoint {
            factors: out,
            canonical: true,
        })
    }

    /// Already-canonical constructor used by the enumerator.
    fn from_canonical(factors: Vec<Vec<u64>>) -> Self {
        ProjPoint {
            factors,
            canonical: true,
        }
    }

    pub fn factors(&self) -> &[Vec<u64>] {
        &self.factors
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    /// All coordinates flattened in factor order, e.g. for evaluating a
    /// multihomogeneous polynomial whose variables are declared in the same
    /// order.
    pub fn flat_coords(&self) -> Vec<u64> {
        self.factors.iter().flatten().copied().collect()
    }
}

/// Number of points of `P^n(F_p)`: `p^n + ... + p + 1`.
pub fn projective_space_size(dim: usize, p: u64) -> u64 {
    let mut total = 0u64;
    let mut pk = 1u64;
    for _ in 0..=dim {
        total += pk;
        pk *= p;
    }
    total
}

/// Number of points of the product space.
pub fn product_space_size(dims: &[usize], p: u64) -> u64 {
    dims.iter().map(|&n| projective_space_size(n, p)).product()
}

/// Streams every point of `P^{n_1} x ... x P^{n_k}` over `F_p` exactly once,
/// in canonical form, in lexicographic order over canonical coordinates.
///
/// The stream may be partitioned by index range via [`point_at`] and consumed
/// by independent workers; enumeration is pure.
pub fn enumerate_points(dims: &[usize], p: PrimeModulus) -> Result<ProductPointIter, FfieldError> {
    if dims.contains(&0) {
        return Err(FfieldError::EmptyFactor);
    }
    Ok(ProductPointIter::new(dims.to_vec(), p))
}

/// Unranks the `index`-th point (0-based) of the lexicographic enumeration.
pub fn point_at(dims: &[usize], p: PrimeModulus, mut index: u64) -> Option<ProjPoint> {
    if index >= product_space_size(dims, p.get()) {
        return None;
    }
    // Row-major over the factors: the first factor varies slowest.
    let mut factors = vec![Vec::new(); dims.len()];
    for (i, &n) in dims.iter().enumerate().rev() {
        let size = projective_space_size(n, p.get());
        let local = index % size;
        index /= size;
        factors[i] = unrank_factor(n, p.get(), local);
    }
    Some(ProjPoint::from_canonical(factors))
}

/// Unranks one projective factor: canonical tuples sorted lexicographically,
/// so the all-zeros-then-1 representative comes first and pivots move from
/// the last coordinate towards the first.
fn unrank_factor(dim: usize, p: u64, mut index: u64) -> Vec<u64> {
    let len = dim + 1;
    let mut block = 1u64; // number of points with the current pivot
    for pivot in (0..len).rev() {
        if index < block {
            let mut coords = vec![0u64; len];
            coords[pivot] = 1;
            // Digits of `index` in base p fill the free coordinates, most
            // significant first.
            let mut rem = index;
            for j in (pivot + 1..len).rev() {
                coords[j] = rem % p;
                rem /= p;
            }
            return coords;
        }
        index -= block;
        block *= p;
    }
    unreachable!("index checked against factor size")
}

/// Iterator over all canonical points of a product of projective spaces.
#[derive(Debug, Clone)]
pub struct ProductPointIter {
    p: PrimeModulus,
    next_index: u64,
    total: u64,
    // Odometer state: one factor iterator position each.
    state: Vec<FactorState>,
}

#[derive(Debug, Clone)]
struct FactorState {
    coords: Vec<u64>,
    pivot: usize,
}

impl FactorState {
    fn first(dim: usize) -> FactorState {
        let mut coords = vec![0u64; dim + 1];
        let pivot = dim;
        coords[pivot] = 1;
        FactorState { coords, pivot }
    }

    /// Advances to the next canonical representative; returns false on wrap.
    fn advance(&mut self, p: u64) -> bool {
        // Odometer over the free coordinates right of the pivot.
        for j in (self.pivot + 1..self.coords.len()).rev() {
            self.coords[j] += 1;
            if self.coords[j] < p {
                return true;
            }
            self.coords[j] = 0;
        }
        // Move the pivot one position earlier.
        if self.pivot == 0 {
            *self = FactorState::first(self.coords.len() - 1);
            return false;
        }
        self.coords[self.pivot] = 0;
        self.pivot -= 1;
        self.coords[self.pivot] = 1;
        true
    }
}

impl ProductPointIter {
    fn new(dims: Vec<usize>, p: PrimeModulus) -> Self {
        let total = product_space_size(&dims, p.get());
        let state = dims.iter().map(|&n| FactorState::first(n)).collect();
        ProductPointIter {
            p,
            next_index: 0,
            total,
            state,
        }
    }
}

impl Iterator for ProductPointIter {
    type Item = ProjPoint;

    fn next(&mut self) -> Option<ProjPoint> {
        if self.next_index >= self.total {
            return None;
        }
        let point =
            ProjPoint::from_canonical(self.state.iter().map(|s| s.coords.clone()).collect());
        self.next_index += 1;
        // Last factor spins fastest.
        for i in (0..self.state.len()).rev() {
            if self.state[i].advance(self.p.get()) {
                break;
            }
        }
        Some(point)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.next_index) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for ProductPointIter {}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;

    fn pm(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    #[test]
    fn primality_gate() {
        assert!(PrimeModulus::new(2).is_ok());
        assert!(PrimeModulus::new(97).is_ok());
        assert_eq!(PrimeModulus::new(1), Err(FfieldError::NotPrime(1)));
        assert_eq!(PrimeModulus::new(91), Err(FfieldError::NotPrime(91)));
        assert_eq!(
            PrimeModulus::new(1 << 31),
            Err(FfieldError::ModulusTooLarge(1 << 31))
        );
        // Largest prime below 2^31 is admissible.
        assert!(PrimeModulus::new(2147483647).is_ok());
    }

    #[test]
    fn inv_examples() {
        assert_eq!(pm(7).inv(1), Ok(1));
        assert_eq!(pm(7).inv(3), Ok(5));
        assert_eq!(pm(5).inv(0), Err(FfieldError::DivisionByZero));
    }

    #[test]
    fn inv_is_involution() {
        for p in [2, 3, 5, 7, 11, 13, 97] {
            let m = pm(p);
            for a in 1..p {
                let b = m.inv(a).unwrap();
                assert_eq!(m.mul(a, b), 1 % p);
                assert_eq!(m.inv(b).unwrap(), a);
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_points(&[1], pm(5)).unwrap().count(), 6);
        assert_eq!(enumerate_points(&[3], pm(5)).unwrap().count(), 156);
        assert_eq!(enumerate_points(&[3, 1], pm(7)).unwrap().count(), 3200);
        assert_eq!(product_space_size(&[3, 1], 7), 400 * 8);
    }

    #[test]
    fn enumeration_matches_closed_form_over_small_primes() {
        for p in [
            2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79,
            83, 89, 97,
        ] {
            for n in 1..=3usize {
                let count = enumerate_points(&[n], pm(p)).unwrap().count() as u64;
                assert_eq!(count, (p.pow(n as u32 + 1) - 1) / (p - 1));
            }
        }
    }

    #[test]
    fn enumeration_has_no_duplicates() {
        for p in [2, 3, 5, 7] {
            let mut seen = BTreeSet::new();
            for pt in enumerate_points(&[2, 1], pm(p)).unwrap() {
                assert!(pt.is_canonical());
                assert!(seen.insert(pt.flat_coords()), "duplicate at p={p}");
            }
            assert_eq!(seen.len() as u64, product_space_size(&[2, 1], p));
        }
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let pts: Vec<Vec<u64>> = enumerate_points(&[1], pm(3))
            .unwrap()
            .map(|pt| pt.flat_coords())
            .collect();
        assert_eq!(pts, vec![vec![0, 1], vec![1, 0], vec![1, 1], vec![1, 2]]);
    }

    #[test]
    fn unranking_agrees_with_streaming() {
        let dims = [2usize, 1];
        let p = pm(5);
        for (i, pt) in enumerate_points(&dims, p).unwrap().enumerate() {
            assert_eq!(point_at(&dims, p, i as u64), Some(pt));
        }
        assert_eq!(point_at(&dims, p, product_space_size(&dims, 5)), None);
    }

    #[test]
    fn canonicalize_rescales_and_rejects_zero() {
        let p = pm(7);
        let pt = ProjPoint::canonicalize(vec![vec![3, 5, 0]], p).unwrap();
        // 3^{-1} = 5 mod 7, so [3:5:0] ~ [1:4:0].
        assert_eq!(pt.flat_coords(), vec![1, 4, 0]);
        assert_eq!(
            ProjPoint::canonicalize(vec![vec![0, 0]], p),
            Err(FfieldError::ZeroPoint)
        );
    }

    #[test]
    fn rational_reduction() {
        use num_traits::One;
        let p = pm(7);
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        // 1/2 = 4 mod 7.
        assert_eq!(p.reduce_rational(&half), Ok(4));
        let bad = BigRational::new(BigInt::one(), BigInt::from(7));
        assert_eq!(p.reduce_rational(&bad), Err(FfieldError::BadDenominator(7)));
    }
}
