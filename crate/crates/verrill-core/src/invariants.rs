//! Closed-form arithmetic checks: Hodge/Betti bookkeeping, the Beauville
//! table of semistable rational elliptic fibrations, and the congruence
//! criterion for `P Gamma_1(N) = P Gamma_0(N)`.
//!
//! A rigid Calabi-Yau threefold arising as the resolved self fiber product
//! of one of Beauville's six surfaces has `h^{1,1} = sum b_i^2` over the
//! four fiber multiplicities `[b_1..b_4]` and Euler characteristic
//! `chi = 2 h^{1,1}`; the multiplicities themselves always sum to 12. The
//! table below records all six rows; the level-6 row `[6,3,2,1]` with
//! `(h^{1,1}, chi) = (50, 100)` is the one the rest of this crate verifies
//! pointwise.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// Hodge numbers of a Calabi-Yau threefold (`h^{0,0} = h^{3,0} = 1` fixed).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HodgeData {
    pub h11: u64,
    pub h21: u64,
}

impl HodgeData {
    /// Rigid means `h^{2,1} = 0`, so the third Betti number is 2.
    pub fn is_rigid(&self) -> bool {
        self.h21 == 0
    }
}

/// Betti numbers `B_0..B_6` and the Euler characteristic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiNumbers {
    pub b: [u64; 7],
    pub chi: i64,
}

/// Betti numbers of a Calabi-Yau threefold from its Hodge numbers:
/// `B_0 = B_6 = 1`, `B_1 = B_5 = 0`, `B_2 = B_4 = h^{1,1}`,
/// `B_3 = 2(1 + h^{2,1})`, and `chi = 2(h^{1,1} - h^{2,1})`.
pub fn betti(h: HodgeData) -> BettiNumbers {
    BettiNumbers {
        b: [1, 0, h.h11, 2 * (1 + h.h21), h.h11, 0, 1],
        chi: 2 * (h.h11 as i64 - h.h21 as i64),
    }
}

/// One row of the Beauville list: a torsion-free genus-zero group with four
/// semistable fibers of types `I_{b_1}..I_{b_4}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BeauvilleRow {
    pub group: String,
    pub fiber_multiplicities: [u64; 4],
    pub h11: u64,
    pub chi: u64,
}

impl BeauvilleRow {
    fn new(group: &str, b: [u64; 4], h11: u64, chi: u64) -> Self {
        BeauvilleRow {
            group: group.to_string(),
            fiber_multiplicities: b,
            h11,
            chi,
        }
    }
}

/// The six rows: group, fiber types, `h^{1,1}` and `chi` of the resolved
/// self fiber product.
pub fn beauville_table() -> Vec<BeauvilleRow> {
    alloc::vec![
        BeauvilleRow::new("Gamma(3)", [3, 3, 3, 3], 36, 72),
        BeauvilleRow::new("Gamma_1(4) n Gamma(2)", [4, 4, 2, 2], 40, 80),
        BeauvilleRow::new("Gamma_1(5)", [5, 5, 1, 1], 52, 104),
        BeauvilleRow::new("Gamma_1(6)", [6, 3, 2, 1], 50, 100),
        BeauvilleRow::new("Gamma_0(8) n Gamma_1(4)", [8, 2, 1, 1], 70, 140),
        BeauvilleRow::new("Gamma_0(9) n Gamma_1(3)", [9, 1, 1, 1], 84, 168),
    ]
}

/// Outcome of checking one table row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BeauvilleCheck {
    pub group: String,
    pub sum: u64,
    pub sum_of_squares: u64,
    /// `sum b_i = 12` (Euler number of a rational elliptic surface).
    pub sum_ok: bool,
    /// `sum b_i^2 = h^{1,1}`.
    pub h11_ok: bool,
    /// `chi = 2 h^{1,1}`.
    pub chi_ok: bool,
}

impl BeauvilleCheck {
    pub fn is_ok(&self) -> bool {
        self.sum_ok && self.h11_ok && self.chi_ok
    }
}

impl fmt::Display for BeauvilleCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: sum={} ({}), sum_sq={} ({}), chi {}",
            self.group,
            self.sum,
            if self.sum_ok { "ok" } else { "FAIL" },
            self.sum_of_squares,
            if self.h11_ok { "= h11" } else { "!= h11 FAIL" },
            if self.chi_ok {
                "= 2*h11"
            } else {
                "!= 2*h11 FAIL"
            },
        )
    }
}

/// Checks `sum b_i = 12`, `sum b_i^2 = h^{1,1}` and `chi = 2 h^{1,1}` for a
/// table row, reporting each identity separately.
pub fn beauville_check(row: &BeauvilleRow) -> BeauvilleCheck {
    let sum: u64 = row.fiber_multiplicities.iter().sum();
    let sum_of_squares: u64 = row.fiber_multiplicities.iter().map(|b| b * b).sum();
    BeauvilleCheck {
        group: row.group.clone(),
        sum,
        sum_of_squares,
        sum_ok: sum == 12,
        h11_ok: sum_of_squares == row.h11,
        chi_ok: row.chi == 2 * row.h11,
    }
}

/// Whether `P Gamma_1(N) = P Gamma_0(N)` inside `PSL_2(Z)`.
///
/// For `(a b; c d)` in `Gamma_0(N)` one has `ad = 1 mod N`, so the two
/// projective images agree exactly when every unit `a mod N` satisfies
/// `a = +-1 mod N`. That holds precisely for the divisors of 4 and of 6.
pub fn projective_images_equal(n: u64) -> bool {
    assert!(n >= 1);
    for a in 2..n {
        if gcd(a, n) == 1 && a != n - 1 {
            return false;
        }
    }
    true
}

/// All `N <= nmax` with `P Gamma_1(N) = P Gamma_0(N)`.
pub fn gamma_equality_levels(nmax: u64) -> Vec<u64> {
    (1..=nmax).filter(|&n| projective_images_equal(n)).collect()
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
