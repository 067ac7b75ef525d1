//! Exact sparse multivariate polynomial algebra over big rationals.
//!
//! Polynomials live in a declared ordered variable set; terms map exponent
//! vectors to nonzero `BigRational` coefficients under the graded
//! lexicographic order, so printing and division are deterministic and
//! `parse . print` is the identity on canonical form.
//!
//! Besides ring arithmetic this module carries the three operations the
//! birational certificate is built from:
//!
//! - [`substitute_clearing_denominators`]: pull back a polynomial along a
//!   rational substitution `x_i -> N_i/D_i`, returning an exact
//!   numerator/denominator pair;
//! - [`exact_divide`]: division that either produces the exact quotient or
//!   reports non-divisibility;
//! - [`pseudo_remainder`]: pseudo-division by a divisor of positive degree
//!   in one variable, the ideal-membership test used against equations that
//!   are linear in the eliminated variable.

mod parser;

pub use parser::parse;

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::ffield::{FfieldError, PrimeModulus};

/// Errors from polynomial algebra; parser errors carry a byte position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyError {
    /// Malformed input text.
    Syntax { pos: usize, message: String },
    /// An identifier outside the declared variable set.
    UnknownVariable { pos: usize, name: String },
    /// Division (exact or pseudo) by the zero polynomial.
    DivisionByZero,
    /// [`exact_divide`] found no polynomial quotient.
    NotDivisible,
    /// [`pseudo_remainder`] against a divisor constant in the chosen variable.
    DivisorConstantInVariable { var: String },
    /// A rational substitution with a zero denominator polynomial.
    ZeroDenominator { var: String },
    /// A substitution missing the image of a source variable.
    MissingImage { var: String },
    /// Operands declared over different variable sets.
    VariableSetMismatch,
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::Syntax { pos, message } => write!(f, "syntax error at {pos}: {message}"),
            PolyError::UnknownVariable { pos, name } => {
                write!(f, "unknown variable `{name}` at {pos}")
            }
            PolyError::DivisionByZero => write!(f, "division by the zero polynomial"),
            PolyError::NotDivisible => write!(f, "no exact polynomial quotient exists"),
            PolyError::DivisorConstantInVariable { var } => {
                write!(f, "pseudo-division needs positive degree in `{var}`")
            }
            PolyError::ZeroDenominator { var } => {
                write!(f, "substitution for `{var}` has zero denominator")
            }
            PolyError::MissingImage { var } => {
                write!(f, "substitution has no image for `{var}`")
            }
            PolyError::VariableSetMismatch => {
                write!(f, "operands declared over different variable sets")
            }
        }
    }
}

impl core::error::Error for PolyError {}

/// An ordered set of variable names. Shared behind `Arc` so polynomials can
/// carry their ring cheaply.
#[derive(Debug, PartialEq, Eq)]
pub struct VarSet {
    names: Vec<String>,
}

impl VarSet {
    /// Declares variables in order. Names must be distinct identifiers
    /// (letter or `_` first, alphanumeric or `_` after).
    pub fn new(names: &[&str]) -> Arc<VarSet> {
        for (i, n) in names.iter().enumerate() {
            assert!(parser::is_identifier(n), "invalid variable name `{n}`");
            assert!(!names[..i].contains(n), "duplicate variable name `{n}`");
        }
        Arc::new(VarSet {
            names: names.iter().map(|n| n.to_string()).collect(),
        })
    }

    pub fn arity(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// An exponent vector under graded lexicographic order: higher total degree
/// first, ties broken by the exponent of the earliest variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn unit(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller must have checked divisibility.
    fn quotient_into(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A sparse multivariate polynomial with exact rational coefficients.
///
/// Invariants: no stored zero coefficients; every exponent vector has the
/// arity of the declared variable set.
#[derive(Debug, Clone)]
pub struct MPoly {
    vars: Arc<VarSet>,
    terms: BTreeMap<Monomial, BigRational>,
}

impl PartialEq for MPoly {
    fn eq(&self, other: &Self) -> bool {
        *self.vars == *other.vars && self.terms == other.terms
    }
}

impl Eq for MPoly {}

impl MPoly {
    pub fn zero(vars: &Arc<VarSet>) -> Self {
        MPoly {
            vars: Arc::clone(vars),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Arc<VarSet>, c: BigRational) -> Self {
        let mut p = MPoly::zero(vars);
        p.add_term(Monomial::unit(vars.arity()), c);
        p
    }

    pub fn constant_i64(vars: &Arc<VarSet>, c: i64) -> Self {
        MPoly::constant(vars, BigRational::from(BigInt::from(c)))
    }

    pub fn one(vars: &Arc<VarSet>) -> Self {
        MPoly::constant(vars, BigRational::one())
    }

    /// The `i`-th declared variable as a polynomial.
    pub fn var(vars: &Arc<VarSet>, i: usize) -> Self {
        assert!(i < vars.arity());
        let mut exps = vec![0; vars.arity()];
        exps[i] = 1;
        let mut p = MPoly::zero(vars);
        p.add_term(Monomial(exps), BigRational::one());
        p
    }

    /// A variable looked up by name; panics on names outside the set.
    pub fn var_named(vars: &Arc<VarSet>, name: &str) -> Self {
        let i = vars
            .index_of(name)
            .unwrap_or_else(|| panic!("variable `{name}` not declared"));
        MPoly::var(vars, i)
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &Monomial) -> BigRational {
        self.terms
            .get(mono)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    /// Largest exponent of variable `i` over all terms.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    /// Adds `c * mono`, dropping the term if the sum cancels.
    pub fn add_term(&mut self, mono: Monomial, c: BigRational) {
        assert_eq!(mono.0.len(), self.vars.arity(), "exponent arity mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn assert_same_vars(&self, other: &MPoly) {
        assert!(
            *self.vars == *other.vars,
            "operands declared over different variable sets"
        );
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        self.assert_same_vars(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.assert_same_vars(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            vars: Arc::clone(&self.vars),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        self.assert_same_vars(other);
        let mut out = MPoly::zero(&self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(&self.vars);
        }
        MPoly {
            vars: Arc::clone(&self.vars),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> MPoly {
        let mut acc = MPoly::one(&self.vars);
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

    /// Leading term in graded lex order, or `None` for the zero polynomial.
    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// Coefficient of `v^k` gathered as a polynomial in the other variables
    /// (the variable `v` itself is zeroed out in the result's monomials).
    pub fn coeff_of_power(&self, v: usize, k: u32) -> MPoly {
        let mut out = MPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            if m.0[v] == k {
                let mut exps = m.0.clone();
                exps[v] = 0;
                out.add_term(Monomial(exps), c.clone());
            }
        }
        out
    }

    /// Componentwise minimum of all exponent vectors: the largest monomial
    /// dividing every term. Unit for the zero polynomial.
    pub fn monomial_content(&self) -> Monomial {
        let arity = self.vars.arity();
        let mut content: Option<Vec<u32>> = None;
        for m in self.terms.keys() {
            match &mut content {
                None => content = Some(m.0.clone()),
                Some(c) => {
                    for (ci, ei) in c.iter_mut().zip(&m.0) {
                        *ci = (*ci).min(*ei);
                    }
                }
            }
        }
        Monomial(content.unwrap_or_else(|| vec![0; arity]))
    }

    /// Divides out a monomial that divides every term.
    pub fn divide_by_monomial(&self, mono: &Monomial) -> MPoly {
        let mut out = MPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            assert!(mono.divides(m), "monomial does not divide every term");
            out.add_term(mono.quotient_into(m), c.clone());
        }
        out
    }

    /// Flips the overall sign if the leading coefficient is negative, so two
    /// polynomials equal up to sign compare equal after normalization.
    pub fn sign_normalized(&self) -> MPoly {
        match self.leading_term() {
            Some((_, c)) if c.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    /// Substitutes a polynomial image for every variable (images live in the
    /// target variable set; their count must equal the source arity).
    pub fn compose(&self, target: &Arc<VarSet>, images: &[MPoly]) -> MPoly {
        assert_eq!(images.len(), self.vars.arity(), "one image per variable");
        for im in images {
            assert!(*im.vars == **target, "image in wrong variable set");
        }
        // Power tables keep repeated exponents cheap.
        let mut tables: Vec<Vec<MPoly>> = Vec::with_capacity(images.len());
        for (i, im) in images.iter().enumerate() {
            let d = self.degree_in(i);
            let mut tab = Vec::with_capacity(d as usize + 1);
            tab.push(MPoly::one(target));
            for k in 1..=d {
                let prev = &tab[(k - 1) as usize];
                tab.push(prev.mul(im));
            }
            tables.push(tab);
        }
        let mut out = MPoly::zero(target);
        for (m, c) in &self.terms {
            let mut term = MPoly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&tables[i][e as usize]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Exact evaluation at a rational point.
    pub fn eval_rational(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.vars.arity());
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    term *= &point[i];
                }
            }
            acc += term;
        }
        acc
    }

    /// Evaluation over `F_p`; errors if `p` divides a coefficient
    /// denominator.
    pub fn eval_mod(&self, p: PrimeModulus, point: &[u64]) -> Result<u64, FfieldError> {
        assert_eq!(point.len(), self.vars.arity());
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let mut term = p.reduce_rational(c)?;
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = p.mul(term, p.pow(point[i] % p.get(), e as u64));
                }
            }
            acc = p.add(acc, term);
        }
        Ok(acc)
    }

    /// Reduces all coefficients mod `p` into `(coefficient, exponents)`
    /// pairs for tight evaluation loops.
    pub fn to_modular_terms(&self, p: PrimeModulus) -> Result<Vec<(u64, Vec<u32>)>, FfieldError> {
        self.terms
            .iter()
            .map(|(m, c)| Ok((p.reduce_rational(c)?, m.0.clone())))
            .collect()
    }
}

impl fmt::Display for MPoly {
    /// Canonical form: terms in descending graded lex order, explicit `*`
    /// and `^`, integer or `n/d` coefficients. [`parse`] inverts this
    /// rendering exactly.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_unit_mono = m.total_degree() == 0;
            if is_unit_mono {
                write!(f, "{mag}")?;
            } else {
                let mut lead = true;
                if !mag.is_one() {
                    write!(f, "{mag}")?;
                    lead = false;
                }
                for (i, &e) in m.0.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    if !lead {
                        write!(f, "*")?;
                    }
                    lead = false;
                    write!(f, "{}", self.vars.name(i))?;
                    if e > 1 {
                        write!(f, "^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl core::ops::Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        MPoly::add(self, rhs)
    }
}

impl core::ops::Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        MPoly::sub(self, rhs)
    }
}

impl core::ops::Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        MPoly::mul(self, rhs)
    }
}

impl core::ops::Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly::neg(self)
    }
}

/// A rational substitution: each source variable maps to `numerator /
/// denominator`, both polynomials over a (possibly different) target
/// variable set.
#[derive(Debug, Clone)]
pub struct RationalSubstitution {
    target: Arc<VarSet>,
    images: Vec<(MPoly, MPoly)>,
}

impl RationalSubstitution {
    /// One `(numerator, denominator)` pair per source variable, in source
    /// declaration order. Zero denominators are rejected.
    pub fn new(
        source: &Arc<VarSet>,
        target: &Arc<VarSet>,
        images: Vec<(MPoly, MPoly)>,
    ) -> Result<Self, PolyError> {
        if images.len() != source.arity() {
            let missing = source.name(images.len().min(source.arity() - 1));
            return Err(PolyError::MissingImage {
                var: missing.to_string(),
            });
        }
        for (i, (num, den)) in images.iter().enumerate() {
            assert!(*num.vars == **target && *den.vars == **target);
            if den.is_zero() {
                return Err(PolyError::ZeroDenominator {
                    var: source.name(i).to_string(),
                });
            }
        }
        Ok(RationalSubstitution {
            target: Arc::clone(target),
            images,
        })
    }

    pub fn target(&self) -> &Arc<VarSet> {
        &self.target
    }

    pub fn images(&self) -> &[(MPoly, MPoly)] {
        &self.images
    }
}

/// Pulls `f` back along a rational substitution, clearing denominators.
///
/// Returns `(N, D)` with `f(sigma) = N/D` as rational functions, where `D`
/// is the product of the substitution denominators raised to the
/// per-variable degrees of `f`. No cancellation between `N` and `D` is
/// attempted; callers may cancel content themselves.
pub fn substitute_clearing_denominators(
    f: &MPoly,
    sigma: &RationalSubstitution,
) -> Result<(MPoly, MPoly), PolyError> {
    if sigma.images.len() != f.vars.arity() {
        return Err(PolyError::MissingImage {
            var: f
                .vars
                .name(sigma.images.len().min(f.vars.arity() - 1))
                .to_string(),
        });
    }
    let target = &sigma.target;
    let bounds: Vec<u32> = (0..f.vars.arity()).map(|i| f.degree_in(i)).collect();

    // Power tables for numerators and denominators up to the degree bounds.
    let table = |base: &MPoly, up_to: u32| -> Vec<MPoly> {
        let mut t = Vec::with_capacity(up_to as usize + 1);
        t.push(MPoly::one(target));
        for k in 1..=up_to {
            let prev = &t[(k - 1) as usize];
            t.push(prev.mul(base));
        }
        t
    };
    let num_tabs: Vec<Vec<MPoly>> = sigma
        .images
        .iter()
        .zip(&bounds)
        .map(|((num, _), &d)| table(num, d))
        .collect();
    let den_tabs: Vec<Vec<MPoly>> = sigma
        .images
        .iter()
        .zip(&bounds)
        .map(|((_, den), &d)| table(den, d))
        .collect();

    let mut numerator = MPoly::zero(target);
    for (m, c) in &f.terms {
        let mut term = MPoly::constant(target, c.clone());
        for (i, &e) in m.exponents().iter().enumerate() {
            term = term.mul(&num_tabs[i][e as usize]);
            term = term.mul(&den_tabs[i][(bounds[i] - e) as usize]);
        }
        numerator = numerator.add(&term);
    }
    let mut denominator = MPoly::one(target);
    for (tab, &d) in den_tabs.iter().zip(&bounds) {
        denominator = denominator.mul(&tab[d as usize]);
    }
    Ok((numerator, denominator))
}

/// Division with remainder by a single divisor in graded lex order:
/// `f = q g + r` where no term of `r` is divisible by the leading monomial
/// of `g`. Both outputs are canonical given the monomial order.
pub fn divide_with_remainder(f: &MPoly, g: &MPoly) -> Result<(MPoly, MPoly), PolyError> {
    f.assert_same_vars(g);
    let (gm, gc) = match g.leading_term() {
        None => return Err(PolyError::DivisionByZero),
        Some((m, c)) => (m.clone(), c.clone()),
    };
    let mut q = MPoly::zero(&f.vars);
    let mut r = MPoly::zero(&f.vars);
    let mut work = f.clone();
    while let Some((wm, wc)) = work.leading_term() {
        if gm.divides(wm) {
            let qm = gm.quotient_into(wm);
            let qc = wc / &gc;
            let mut piece = MPoly::zero(&f.vars);
            piece.add_term(qm.clone(), qc.clone());
            q.add_term(qm, qc);
            work = work.sub(&piece.mul(g));
        } else {
            let (wm, wc) = (wm.clone(), wc.clone());
            r.add_term(wm.clone(), wc.clone());
            let mut piece = MPoly::zero(&f.vars);
            piece.add_term(wm, wc);
            work = work.sub(&piece);
        }
    }
    Ok((q, r))
}

/// Exact polynomial division: returns `q` with `f = q * g`, or
/// [`PolyError::NotDivisible`] when no such polynomial exists.
pub fn exact_divide(f: &MPoly, g: &MPoly) -> Result<MPoly, PolyError> {
    f.assert_same_vars(g);
    let (gm, gc) = match g.leading_term() {
        None => return Err(PolyError::DivisionByZero),
        Some((m, c)) => (m.clone(), c.clone()),
    };
    let mut q = MPoly::zero(&f.vars);
    let mut r = f.clone();
    while let Some((rm, rc)) = r.leading_term() {
        // Any leading term outside LM(g)'s cone survives into the final
        // remainder of one-divisor division, so divisibility has already
        // failed.
        if !gm.divides(rm) {
            return Err(PolyError::NotDivisible);
        }
        let qm = gm.quotient_into(rm);
        let qc = rc / &gc;
        let mut piece = MPoly::zero(&f.vars);
        piece.add_term(qm.clone(), qc.clone());
        q.add_term(qm, qc);
        r = r.sub(&piece.mul(g));
    }
    Ok(q)
}

/// Pseudo-division of `f` by `g` with respect to the variable at index `v`.
///
/// Returns `(r, m)` with `m^k f = q g + r` for some polynomial `q` and
/// integer `k >= 0`, where `m` is the leading coefficient of `g` in `v` and
/// `deg_v(r) < deg_v(g)`. When `g` is linear in `v`, `r = 0` is exactly
/// membership of `f` in the ideal of `g` over the ring localized at `m`.
pub fn pseudo_remainder(f: &MPoly, g: &MPoly, v: usize) -> Result<(MPoly, MPoly), PolyError> {
    f.assert_same_vars(g);
    if g.is_zero() {
        return Err(PolyError::DivisionByZero);
    }
    let dg = g.degree_in(v);
    if dg == 0 {
        return Err(PolyError::DivisorConstantInVariable {
            var: f.vars.name(v).to_string(),
        });
    }
    let lead = g.coeff_of_power(v, dg);
    let mut r = f.clone();
    loop {
        let dr = r.degree_in(v);
        if r.is_zero() || dr < dg {
            return Ok((r, lead));
        }
        // r <- lead * r - lc_v(r) * x_v^{dr-dg} * g
        let rc = r.coeff_of_power(v, dr);
        let mut shift_exps = vec![0u32; f.vars.arity()];
        shift_exps[v] = dr - dg;
        let mut shift = MPoly::zero(&f.vars);
        shift.add_term(Monomial::from_exponents(shift_exps), BigRational::one());
        r = lead.mul(&r).sub(&rc.mul(&shift).mul(g));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn vs_xy() -> Arc<VarSet> {
        VarSet::new(&["x", "y"])
    }

    fn vs_xyz() -> Arc<VarSet> {
        VarSet::new(&["x", "y", "z"])
    }

    #[test]
    fn grlex_order() {
        // x^2 > x*y > y^2 > x > y > 1
        let m = |e: &[u32]| Monomial::from_exponents(e.to_vec());
        assert!(m(&[2, 0]) > m(&[1, 1]));
        assert!(m(&[1, 1]) > m(&[0, 2]));
        assert!(m(&[0, 2]) > m(&[1, 0]));
        assert!(m(&[1, 0]) > m(&[0, 1]));
        assert!(m(&[0, 1]) > m(&[0, 0]));
    }

    #[test]
    fn display_canonical_form() {
        let vs = vs_xy();
        let x = MPoly::var(&vs, 0);
        let y = MPoly::var(&vs, 1);
        let p = x.pow(2).sub(&y.pow(2)).add(&MPoly::constant_i64(&vs, -3));
        assert_eq!(p.to_string(), "x^2 - y^2 - 3");
        assert_eq!(MPoly::zero(&vs).to_string(), "0");
        let q = x.scale(&BigRational::new(BigInt::from(3), BigInt::from(2)));
        assert_eq!(q.to_string(), "3/2*x");
    }

    #[test]
    fn exact_divide_examples() {
        let vs = vs_xy();
        let x = MPoly::var(&vs, 0);
        let y = MPoly::var(&vs, 1);
        let num = x.pow(2).sub(&y.pow(2));
        let den = x.sub(&y);
        assert_eq!(exact_divide(&num, &den).unwrap(), x.add(&y));

        let bad = x.pow(2).add(&y.pow(2));
        assert_eq!(
            exact_divide(&bad, &den).unwrap_err(),
            PolyError::NotDivisible
        );
        assert_eq!(
            exact_divide(&num, &MPoly::zero(&vs)).unwrap_err(),
            PolyError::DivisionByZero
        );
    }

    #[test]
    fn divide_with_remainder_reconstructs() {
        let vs = vs_xy();
        let x = MPoly::var(&vs, 0);
        let y = MPoly::var(&vs, 1);
        let f = x.pow(3).add(&x.mul(&y)).add(&MPoly::constant_i64(&vs, 1));
        let g = x.pow(2).sub(&y);
        let (q, r) = divide_with_remainder(&f, &g).unwrap();
        assert_eq!(q.mul(&g).add(&r), f);
        // No term of r divisible by LM(g) = x^2.
        for (m, _) in r.terms() {
            assert!(m.exponents()[0] < 2);
        }
    }

    #[test]
    fn pseudo_remainder_of_self_is_zero() {
        let vs = vs_xyz();
        let x = MPoly::var(&vs, 0);
        let y = MPoly::var(&vs, 1);
        let g = x.pow(2).mul(&y).add(&MPoly::constant_i64(&vs, 5));
        let (r, m) = pseudo_remainder(&g, &g, 0).unwrap();
        assert!(r.is_zero());
        assert_eq!(m, g.coeff_of_power(0, 2));
    }

    #[test]
    fn pseudo_remainder_rejects_constant_divisor() {
        let vs = vs_xy();
        let x = MPoly::var(&vs, 0);
        let g = MPoly::constant_i64(&vs, 7);
        assert!(matches!(
            pseudo_remainder(&x, &g, 0),
            Err(PolyError::DivisorConstantInVariable { .. })
        ));
    }

    #[test]
    fn substitution_clears_denominators() {
        // f = t and f = t^2 under t -> T/U.
        let src = VarSet::new(&["t"]);
        let tgt = VarSet::new(&["T", "U"]);
        let t_img = (MPoly::var_named(&tgt, "T"), MPoly::var_named(&tgt, "U"));
        let sigma = RationalSubstitution::new(&src, &tgt, vec![t_img]).unwrap();

        let t = MPoly::var(&src, 0);
        let (n, d) = substitute_clearing_denominators(&t, &sigma).unwrap();
        assert_eq!(n, MPoly::var_named(&tgt, "T"));
        assert_eq!(d, MPoly::var_named(&tgt, "U"));

        let (n2, d2) = substitute_clearing_denominators(&t.pow(2), &sigma).unwrap();
        assert_eq!(n2, MPoly::var_named(&tgt, "T").pow(2));
        assert_eq!(d2, MPoly::var_named(&tgt, "U").pow(2));
    }

    #[test]
    fn zero_denominator_rejected() {
        let src = VarSet::new(&["t"]);
        let tgt = VarSet::new(&["T", "U"]);
        let img = (MPoly::var_named(&tgt, "T"), MPoly::zero(&tgt));
        assert!(matches!(
            RationalSubstitution::new(&src, &tgt, vec![img]),
            Err(PolyError::ZeroDenominator { .. })
        ));
    }

    /// Strategy for sparse polynomials over 4 variables, degree <= 4 per
    /// variable pair, small integer coefficients.
    fn arb_poly(vs: Arc<VarSet>) -> impl Strategy<Value = MPoly> {
        let arity = vs.arity();
        proptest::collection::vec((proptest::collection::vec(0u32..3, arity), -6i64..7), 0..6)
            .prop_map(move |terms| {
                let mut p = MPoly::zero(&vs);
                for (exps, c) in terms {
                    p.add_term(
                        Monomial::from_exponents(exps),
                        BigRational::from(BigInt::from(c)),
                    );
                }
                p
            })
    }

    proptest! {
        #[test]
        fn ring_distributivity(
            f in arb_poly(VarSet::new(&["x", "y", "z", "w"])),
            g in arb_poly(VarSet::new(&["x", "y", "z", "w"])),
            h in arb_poly(VarSet::new(&["x", "y", "z", "w"])),
        ) {
            let lhs = f.add(&g).mul(&h);
            let rhs = f.mul(&h).add(&g.mul(&h));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn parse_print_roundtrip(f in arb_poly(VarSet::new(&["x", "y", "z", "w"]))) {
            let text = f.to_string();
            let back = parse(&text, &VarSet::new(&["x", "y", "z", "w"])).unwrap();
            prop_assert_eq!(back, f);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn divide_product_recovers_factor(
            f in arb_poly(VarSet::new(&["x", "y", "z", "w"])),
            g in arb_poly(VarSet::new(&["x", "y", "z", "w"])),
        ) {
            prop_assume!(!g.is_zero());
            let prod = f.mul(&g);
            prop_assert_eq!(exact_divide(&prod, &g).unwrap(), f);
        }
    }
}
