//! Truncated integer q-expansions and the eta-product newform oracle.
//!
//! The series of interest is the weight-4 newform on `Gamma_0(6)`,
//!
//! ```text
//! f(q) = eta(q)^2 eta(q^2)^2 eta(q^3)^2 eta(q^6)^2
//!      = q - 2q^2 - 3q^3 + 4q^4 + 6q^5 + 6q^6 - 16q^7 + ...
//! ```
//!
//! expanded by exact convolution of truncated Euler products
//! `prod_{n>=1} (1 - q^{dn})`. Coefficients are arbitrary-precision
//! integers throughout, so overflow can never silently corrupt the oracle.
//!
//! [`check_hecke_relations`] validates the newform structure of a candidate
//! expansion: normalization, multiplicativity across coprime indices, the
//! weight-k prime-power recursion at good primes, and the linear recursion
//! `a_{p^r} = a_p^r` at primes dividing the level.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Errors from series construction and the Hecke checker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QseriesError {
    /// `(sum d*r)/24` is negative or not an integer for the given quotient.
    BadLeadingPower { numerator: i64 },
    /// Inversion of a series whose constant term is not a unit of `Z`.
    NonUnitConstantTerm,
    /// A coefficient beyond the truncation order was requested.
    OrderExceeded { wanted: usize, order: usize },
    /// An eta factor with divisor zero.
    ZeroDivisor,
}

impl fmt::Display for QseriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QseriesError::BadLeadingPower { numerator } => write!(
                f,
                "leading q-power (sum d*r)/24 = {numerator}/24 is not a nonnegative integer"
            ),
            QseriesError::NonUnitConstantTerm => {
                write!(f, "series inversion needs constant term +-1")
            }
            QseriesError::OrderExceeded { wanted, order } => {
                write!(
                    f,
                    "coefficient {wanted} requested beyond truncation order {order}"
                )
            }
            QseriesError::ZeroDivisor => write!(f, "eta factor divisor must be >= 1"),
        }
    }
}

impl core::error::Error for QseriesError {}

/// A q-expansion `a_0 + a_1 q + ... + a_N q^N` with exact integer
/// coefficients, truncated at order `N`.
///
/// Arithmetic is exact through the common truncation order of the operands;
/// coefficients beyond it are never reported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntSeries {
    coeffs: Vec<BigInt>,
}

impl IntSeries {
    pub fn zero(order: usize) -> Self {
        IntSeries {
            coeffs: vec![BigInt::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = IntSeries::zero(order);
        s.coeffs[0] = BigInt::one();
        s
    }

    /// `c * q^k`, or zero if `k` exceeds the order.
    pub fn monomial(c: BigInt, k: usize, order: usize) -> Self {
        let mut s = IntSeries::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "series needs at least the constant term"
        );
        IntSeries { coeffs }
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `q^n`; errors beyond the truncation order.
    pub fn coeff(&self, n: usize) -> Result<&BigInt, QseriesError> {
        self.coeffs.get(n).ok_or(QseriesError::OrderExceeded {
            wanted: n,
            order: self.order(),
        })
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient as `i64`, for desk-scale consumers; panics on overflow
    /// rather than wrapping.
    pub fn coeff_i64(&self, n: usize) -> Result<i64, QseriesError> {
        Ok(self
            .coeff(n)?
            .to_i64()
            .expect("coefficient exceeds i64; use coeff() for exact access"))
    }

    pub fn add(&self, other: &IntSeries) -> IntSeries {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|n| &self.coeffs[n] + &other.coeffs[n])
            .collect();
        IntSeries { coeffs }
    }

    pub fn sub(&self, other: &IntSeries) -> IntSeries {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|n| &self.coeffs[n] - &other.coeffs[n])
            .collect();
        IntSeries { coeffs }
    }

    /// Exact Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &IntSeries) -> IntSeries {
        let order = self.order().min(other.order());
        let mut coeffs = vec![BigInt::zero(); order + 1];
        for (i, a) in self.coeffs.iter().take(order + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(order + 1 - i).enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        IntSeries { coeffs }
    }

    /// Multiplies by `1 - q^k` in place; the workhorse for Euler products.
    fn mul_one_minus_qk(&mut self, k: usize) {
        let order = self.order();
        for n in (k..=order).rev() {
            let lower = self.coeffs[n - k].clone();
            self.coeffs[n] -= lower;
        }
    }

    /// `self^n` by repeated squaring.
    pub fn pow(&self, n: u64) -> IntSeries {
        let mut acc = IntSeries::one(self.order());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Formal reciprocal to the truncation order; the constant term must be
    /// a unit of `Z` (i.e. +-1) for the result to stay integral.
    pub fn invert(&self) -> Result<IntSeries, QseriesError> {
        let a0 = &self.coeffs[0];
        if !a0.magnitude().is_one() {
            return Err(QseriesError::NonUnitConstantTerm);
        }
        let order = self.order();
        let mut inv = vec![BigInt::zero(); order + 1];
        inv[0] = a0.clone(); // 1/(+-1) = +-1
        for n in 1..=order {
            let mut acc = BigInt::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * &inv[n - k];
                }
            }
            inv[n] = -a0 * acc; // a0^{-1} = a0
        }
        Ok(IntSeries { coeffs: inv })
    }

    /// Multiplies by `q^k`, keeping the truncation order.
    pub fn shift(&self, k: usize) -> IntSeries {
        let order = self.order();
        let mut coeffs = vec![BigInt::zero(); order + 1];
        if k <= order {
            coeffs[k..].clone_from_slice(&self.coeffs[..=order - k]);
        }
        IntSeries { coeffs }
    }
}

/// An eta quotient `prod_d eta(q^d)^{r_d}`, stored as `(d, r)` factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaQuotientSpec {
    factors: Vec<(u64, i64)>,
}

impl EtaQuotientSpec {
    pub fn new(factors: Vec<(u64, i64)>) -> Result<Self, QseriesError> {
        if factors.iter().any(|&(d, _)| d == 0) {
            return Err(QseriesError::ZeroDivisor);
        }
        Ok(EtaQuotientSpec { factors })
    }

    /// `eta(q)^2 eta(q^2)^2 eta(q^3)^2 eta(q^6)^2`, the weight-4 newform on
    /// `Gamma_0(6)` serving as the modularity oracle.
    pub fn newform_gamma0_6() -> Self {
        EtaQuotientSpec {
            factors: vec![(1, 2), (2, 2), (3, 2), (6, 2)],
        }
    }

    pub fn factors(&self) -> &[(u64, i64)] {
        &self.factors
    }

    /// `(1/2) sum r`, as a rational in lowest terms `(num, den)`.
    pub fn weight(&self) -> (i64, i64) {
        let s: i64 = self.factors.iter().map(|&(_, r)| r).sum();
        if s % 2 == 0 {
            (s / 2, 1)
        } else {
            (s, 2)
        }
    }

    /// Order of vanishing at `q = 0`: `(sum d*r)/24`, which must be a
    /// nonnegative integer for the quotient to expand as a q-series.
    pub fn leading_power(&self) -> Result<u64, QseriesError> {
        let num: i64 = self.factors.iter().map(|&(d, r)| d as i64 * r).sum();
        if num < 0 || num % 24 != 0 {
            return Err(QseriesError::BadLeadingPower { numerator: num });
        }
        Ok((num / 24) as u64)
    }
}

/// Truncated Euler product `prod_{n>=1, dn<=N} (1 - q^{dn})`.
pub fn euler_factor_series(d: u64, order: usize) -> IntSeries {
    assert!(d >= 1, "divisor must be >= 1");
    let mut s = IntSeries::one(order);
    let mut k = d as usize;
    while k <= order {
        s.mul_one_minus_qk(k);
        k += d as usize;
    }
    s
}

/// Expands an eta quotient as `q^{(sum d*r)/24} prod_d E_d(q)^{r_d}`
/// truncated at `order`, where `E_d` is [`euler_factor_series`].
///
/// Rejects quotients whose leading q-power is negative or fractional.
pub fn eta_quotient_expansion(
    spec: &EtaQuotientSpec,
    order: usize,
) -> Result<IntSeries, QseriesError> {
    let lead = spec.leading_power()?;
    let mut acc = IntSeries::one(order);
    for &(d, r) in spec.factors() {
        let base = euler_factor_series(d, order);
        let powed = if r >= 0 {
            base.pow(r as u64)
        } else {
            base.invert()?.pow((-r) as u64)
        };
        acc = acc.mul(&powed);
    }
    Ok(acc.shift(lead as usize))
}

/// One failed Hecke relation, with both sides of the violated identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HeckeViolation {
    /// `a_1 != 1`.
    NotNormalized { a1: BigInt },
    /// `a_{mn} != a_m a_n` for coprime `m, n`.
    Multiplicative {
        m: usize,
        n: usize,
        lhs: BigInt,
        rhs: BigInt,
    },
    /// `a_{p^{r+1}} != a_p a_{p^r} - p^{k-1} a_{p^{r-1}}` at a good prime.
    GoodPrimePower {
        p: usize,
        r: u32,
        lhs: BigInt,
        rhs: BigInt,
    },
    /// `a_{p^r} != (a_p)^r` at a prime dividing the level.
    BadPrimePower {
        p: usize,
        r: u32,
        lhs: BigInt,
        rhs: BigInt,
    },
}

impl fmt::Display for HeckeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeckeViolation::NotNormalized { a1 } => write!(f, "a_1 = {a1}, expected 1"),
            HeckeViolation::Multiplicative { m, n, lhs, rhs } => {
                write!(f, "a_{} = {lhs} but a_{m}*a_{n} = {rhs}", m * n)
            }
            HeckeViolation::GoodPrimePower { p, r, lhs, rhs } => write!(
                f,
                "a_{{{p}^{}}} = {lhs} but a_{p}*a_{{{p}^{r}}} - p^(k-1)*a_{{{p}^{}}} = {rhs}",
                r + 1,
                r - 1
            ),
            HeckeViolation::BadPrimePower { p, r, lhs, rhs } => {
                write!(f, "a_{{{p}^{r}}} = {lhs} but (a_{p})^{r} = {rhs}")
            }
        }
    }
}

/// Outcome of [`check_hecke_relations`]: every violated instance is listed.
#[derive(Debug, Clone)]
pub struct HeckeReport {
    pub level: u64,
    pub weight: u32,
    pub nmax: usize,
    pub violations: Vec<HeckeViolation>,
}

impl HeckeReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for HeckeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_clean() {
            write!(
                f,
                "all Hecke relations hold to n = {} (level {}, weight {})",
                self.nmax, self.level, self.weight
            )
        } else {
            writeln!(f, "{} violated Hecke relation(s):", self.violations.len())?;
            for v in &self.violations {
                writeln!(f, "  {v}")?;
            }
            Ok(())
        }
    }
}

/// Checks the Hecke eigenform relations of a normalized expansion through
/// `nmax`:
///
/// - `a_1 = 1`;
/// - `a_{mn} = a_m a_n` for coprime `m, n >= 2` with `mn <= nmax`;
/// - `a_{p^{r+1}} = a_p a_{p^r} - p^{weight-1} a_{p^{r-1}}` for primes not
///   dividing the level;
/// - `a_{p^r} = (a_p)^r` for primes dividing the level.
///
/// Every violated instance is collected in the report; nothing is asserted.
pub fn check_hecke_relations(
    f: &IntSeries,
    level: u64,
    weight: u32,
    nmax: usize,
) -> Result<HeckeReport, QseriesError> {
    if nmax > f.order() {
        return Err(QseriesError::OrderExceeded {
            wanted: nmax,
            order: f.order(),
        });
    }
    assert!(nmax >= 4, "need nmax >= 4 to see any relation");
    let a = |n: usize| f.coeffs()[n].clone();
    let mut violations = Vec::new();

    if !a(1).is_one() {
        violations.push(HeckeViolation::NotNormalized { a1: a(1) });
    }

    for m in 2..=nmax {
        for n in m..=nmax / m {
            if m.gcd(&n) == 1 {
                let lhs = a(m * n);
                let rhs = a(m) * a(n);
                if lhs != rhs {
                    violations.push(HeckeViolation::Multiplicative { m, n, lhs, rhs });
                }
            }
        }
    }

    let pk = |p: usize| BigInt::from(p).pow(weight - 1);
    for p in sieve_primes(nmax) {
        let bad = level.is_multiple_of(p as u64);
        let mut power = p; // p^r
        let mut r = 1u32;
        while power <= nmax / p {
            power *= p;
            r += 1;
            if bad {
                let lhs = a(power);
                let rhs = a(p).pow(r);
                if lhs != rhs {
                    violations.push(HeckeViolation::BadPrimePower { p, r, lhs, rhs });
                }
            } else {
                let lhs = a(power);
                let rhs = a(p) * a(power / p) - pk(p) * a(power / p / p);
                if lhs != rhs {
                    violations.push(HeckeViolation::GoodPrimePower {
                        p,
                        r: r - 1,
                        lhs,
                        rhs,
                    });
                }
            }
        }
    }

    Ok(HeckeReport {
        level,
        weight,
        nmax,
        violations,
    })
}

/// Primes `<= n` by Eratosthenes.
pub fn sieve_primes(n: usize) -> Vec<usize> {
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Renders a series as a human-readable polynomial in `q`.
pub fn format_series(s: &IntSeries) -> String {
    use core::fmt::Write;
    let mut out = String::new();
    let mut first = true;
    for (n, c) in s.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mag = c.magnitude();
        if first {
            if c.is_negative() {
                out.push('-');
            }
            first = false;
        } else if c.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        if n == 0 {
            write!(out, "{mag}").unwrap();
        } else {
            if !mag.is_one() {
                write!(out, "{mag}*").unwrap();
            }
            if n == 1 {
                out.push('q');
            } else {
                write!(out, "q^{n}").unwrap();
            }
        }
    }
    if first {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn series(coeffs: &[i64]) -> IntSeries {
        IntSeries::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Independent oracle for `prod (1 - q^n)`: Euler's pentagonal number
    /// theorem, `sum_{k in Z} (-1)^k q^{k(3k-1)/2}`.
    fn pentagonal_series(order: usize) -> Vec<i64> {
        let mut out = vec![0i64; order + 1];
        let mut k = -((order as i64) + 2);
        while k <= order as i64 + 2 {
            let e = k * (3 * k - 1) / 2;
            if (0..=order as i64).contains(&e) {
                out[e as usize] += if k.rem_euclid(2) == 0 { 1 } else { -1 };
            }
            k += 1;
        }
        out
    }

    #[test]
    fn euler_factor_matches_pentagonal_oracle() {
        let expect = pentagonal_series(60);
        let got = euler_factor_series(1, 60);
        for n in 0..=60 {
            assert_eq!(got.coeffs()[n], BigInt::from(expect[n]), "at q^{n}");
        }
    }

    #[test]
    fn euler_factor_examples() {
        // 1 - q - q^2 + q^5 + q^7
        assert_eq!(
            euler_factor_series(1, 7),
            series(&[1, -1, -1, 0, 0, 1, 0, 1])
        );
        assert_eq!(euler_factor_series(6, 5), IntSeries::one(5));
        assert_eq!(euler_factor_series(2, 2), series(&[1, 0, -1]));
    }

    /// Second route to the newform expansion: plain i128 polynomial
    /// multiplication of the four squared Euler products, written without
    /// IntSeries.
    fn newform_by_direct_convolution(order: usize) -> Vec<i128> {
        let mulp = |a: &[i128], b: &[i128]| -> Vec<i128> {
            let mut out = vec![0i128; order + 1];
            for i in 0..=order {
                if a[i] == 0 {
                    continue;
                }
                for j in 0..=order - i {
                    out[i + j] += a[i] * b[j];
                }
            }
            out
        };
        let euler = |d: usize| -> Vec<i128> {
            let mut s = vec![0i128; order + 1];
            s[0] = 1;
            let mut k = d;
            while k <= order {
                let mut f = vec![0i128; order + 1];
                f[0] = 1;
                f[k] = -1;
                s = mulp(&s, &f);
                k += d;
            }
            s
        };
        let mut acc = vec![0i128; order + 1];
        acc[0] = 1;
        for d in [1usize, 2, 3, 6] {
            let e = euler(d);
            acc = mulp(&acc, &e);
            acc = mulp(&acc, &e);
        }
        // shift by q^1
        let mut out = vec![0i128; order + 1];
        out[1..=order].copy_from_slice(&acc[0..order]);
        out
    }

    #[test]
    fn newform_expansion_first_coefficients() {
        let spec = EtaQuotientSpec::newform_gamma0_6();
        let f = eta_quotient_expansion(&spec, 7).unwrap();
        assert_eq!(f, series(&[0, 1, -2, -3, 4, 6, 6, -16]));
    }

    #[test]
    fn newform_expansion_matches_independent_convolution() {
        let spec = EtaQuotientSpec::newform_gamma0_6();
        let f = eta_quotient_expansion(&spec, 100).unwrap();
        let oracle = newform_by_direct_convolution(100);
        for n in 0..=100 {
            assert_eq!(f.coeffs()[n], BigInt::from(oracle[n]), "at q^{n}");
        }
        assert!(f.coeffs()[1].is_one());
    }

    #[test]
    fn empty_quotient_is_one() {
        let spec = EtaQuotientSpec::new(vec![]).unwrap();
        assert_eq!(eta_quotient_expansion(&spec, 5).unwrap(), IntSeries::one(5));
    }

    #[test]
    fn newform_spec_weight_and_leading_power() {
        let spec = EtaQuotientSpec::newform_gamma0_6();
        assert_eq!(spec.weight(), (4, 1));
        assert_eq!(spec.leading_power(), Ok(1));
        assert_eq!(
            EtaQuotientSpec::new(vec![(0, 2)]),
            Err(QseriesError::ZeroDivisor)
        );
    }

    #[test]
    fn delta_expansion() {
        // eta(q)^24 = q - 24q^2 + ...
        let spec = EtaQuotientSpec::new(vec![(1, 24)]).unwrap();
        let f = eta_quotient_expansion(&spec, 2).unwrap();
        assert_eq!(f, series(&[0, 1, -24]));
    }

    #[test]
    fn fractional_leading_power_rejected() {
        let spec = EtaQuotientSpec::new(vec![(1, 2)]).unwrap();
        assert_eq!(
            eta_quotient_expansion(&spec, 5).unwrap_err(),
            QseriesError::BadLeadingPower { numerator: 2 }
        );
        // Negative leading power is also rejected.
        let spec = EtaQuotientSpec::new(vec![(1, -24)]).unwrap();
        assert_eq!(
            eta_quotient_expansion(&spec, 5).unwrap_err(),
            QseriesError::BadLeadingPower { numerator: -24 }
        );
    }

    #[test]
    fn negative_exponents_expand_via_inversion() {
        // eta(q^2)^{-24} * eta(q)^48 has leading power (48 - 48)/24 = 0.
        let spec = EtaQuotientSpec::new(vec![(2, -24), (1, 48)]).unwrap();
        let f = eta_quotient_expansion(&spec, 10).unwrap();
        // Cross-check against direct series algebra.
        let direct = euler_factor_series(1, 10)
            .pow(48)
            .mul(&euler_factor_series(2, 10).invert().unwrap().pow(24));
        assert_eq!(f, direct);
    }

    #[test]
    fn bad_prime_power_values() {
        let f = eta_quotient_expansion(&EtaQuotientSpec::newform_gamma0_6(), 30).unwrap();
        // a_4 = a_2^2, a_6 = a_2 a_3, a_25 = a_5^2 - 5^3.
        assert_eq!(f.coeffs()[4], BigInt::from(4));
        assert_eq!(f.coeffs()[6], BigInt::from(6));
        assert_eq!(f.coeffs()[25], BigInt::from(-89));
    }

    #[test]
    fn hecke_relations_clean_to_100() {
        let f = eta_quotient_expansion(&EtaQuotientSpec::newform_gamma0_6(), 100).unwrap();
        let report = check_hecke_relations(&f, 6, 4, 100).unwrap();
        assert!(report.is_clean(), "{report}");
    }

    #[test]
    fn hecke_relations_catch_corruption() {
        let f = eta_quotient_expansion(&EtaQuotientSpec::newform_gamma0_6(), 50).unwrap();
        let mut coeffs = f.coeffs().to_vec();
        coeffs[35] += 1; // a_35 = a_5 a_7 broken
        let g = IntSeries::from_coeffs(coeffs);
        let report = check_hecke_relations(&g, 6, 4, 50).unwrap();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, HeckeViolation::Multiplicative { m: 5, n: 7, .. })));
    }

    #[test]
    fn hecke_nmax_beyond_order_is_an_error() {
        let f = eta_quotient_expansion(&EtaQuotientSpec::newform_gamma0_6(), 20).unwrap();
        assert_eq!(
            check_hecke_relations(&f, 6, 4, 21).unwrap_err(),
            QseriesError::OrderExceeded {
                wanted: 21,
                order: 20
            }
        );
    }

    #[test]
    fn ramanujan_petersson_bound_for_small_primes() {
        let f = eta_quotient_expansion(&EtaQuotientSpec::newform_gamma0_6(), 100).unwrap();
        for p in sieve_primes(97) {
            let ap = f.coeff_i64(p).unwrap() as i128;
            assert!(ap * ap <= 4 * (p as i128).pow(3), "a_{p}^2 > 4 p^3");
        }
    }

    #[test]
    fn series_formatting() {
        assert_eq!(
            format_series(&series(&[0, 1, -2, 0, 4])),
            "q - 2*q^2 + 4*q^4"
        );
        assert_eq!(format_series(&series(&[-1, 1])), "-1 + q");
        assert_eq!(format_series(&IntSeries::zero(3)), "0");
    }

    proptest! {
        #[test]
        fn reciprocal_roundtrip(d in 1u64..6, order in 1usize..40) {
            let e = euler_factor_series(d, order);
            let inv = e.invert().unwrap();
            prop_assert_eq!(e.mul(&inv), IntSeries::one(order));
        }

        #[test]
        fn shift_then_mul_consistency(k in 0usize..10, order in 10usize..30) {
            let e = euler_factor_series(2, order);
            let shifted = e.shift(k);
            let monomial = IntSeries::monomial(BigInt::one(), k, order);
            prop_assert_eq!(shifted, e.mul(&monomial));
        }
    }
}
