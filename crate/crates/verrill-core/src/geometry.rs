//! The explicit models and every point-counting routine over `F_p`.
//!
//! Three models are registered, exactly as their defining equations are
//! written (no resolutions):
//!
//! - `verrill`: the hypersurface `X'` of bidegree (4,2) in `P^3 x P^1`,
//!   `(x+y+z+w) ((yz+zx+xy)w + xyz) t1 t0 - (t1+t0)^2 xyzw = 0`;
//! - `surface`: the elliptic surface `S` of bidegree (1,3) in `P^1 x P^2`,
//!   `(s1+s0) xyz - s0 (x+y+z)(yz+zx+xy) = 0`, fibered over `s = s1/s0`;
//! - `fiberprod`: the self fiber product `S x_{P^1} S` as the complete
//!   intersection `{H(s,P) = 0, H(s,Q) = 0}` in `P^1 x P^2 x P^2`.
//!
//! The surface has singular fibers exactly over `s in {8, -1, 0, infinity}`
//! of Kodaira types I1, I2, I3, I6 (the I6 appears after blowing up the
//! three surface singular points over infinity). Fiber counts drive both
//! the fiber-product totals and the census of `F_p`-rational nodes of the
//! self product, which downstream trace assembly corrects for.
//!
//! Counting is organized fiberwise (`O(p^3)` per prime); the direct ambient
//! enumeration is kept for small-prime cross-checks.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::ffield::{self, FfieldError, PrimeModulus};
use crate::polyalg::{parse, MPoly, VarSet};

/// A multihomogeneous model in a product of projective spaces.
#[derive(Debug, Clone)]
pub struct VarietyModel {
    name: String,
    ambient: Vec<usize>,
    vars: Arc<VarSet>,
    polys: Vec<MPoly>,
    multidegrees: Vec<Vec<u32>>,
}

impl VarietyModel {
    /// Builds a model, checking that the variable count matches the ambient
    /// block structure and that every defining polynomial is
    /// multihomogeneous; the multidegrees are recorded.
    pub fn new(
        name: &str,
        ambient: Vec<usize>,
        vars: Arc<VarSet>,
        polys: Vec<MPoly>,
    ) -> VarietyModel {
        let total: usize = ambient.iter().map(|&n| n + 1).sum();
        assert_eq!(
            vars.arity(),
            total,
            "variables must cover the ambient blocks"
        );
        let blocks = block_ranges(&ambient);
        let multidegrees = polys
            .iter()
            .map(|f| {
                let mut degree: Option<Vec<u32>> = None;
                for (mono, _) in f.terms() {
                    let d: Vec<u32> = blocks
                        .iter()
                        .map(|r| mono.exponents()[r.clone()].iter().sum())
                        .collect();
                    match &degree {
                        None => degree = Some(d),
                        Some(existing) => {
                            assert_eq!(*existing, d, "model `{name}` is not multihomogeneous")
                        }
                    }
                }
                degree.unwrap_or_else(|| vec![0; ambient.len()])
            })
            .collect();
        VarietyModel {
            name: name.to_string(),
            ambient,
            vars,
            polys,
            multidegrees,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ambient(&self) -> &[usize] {
        &self.ambient
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn polys(&self) -> &[MPoly] {
        &self.polys
    }

    pub fn multidegrees(&self) -> &[Vec<u32>] {
        &self.multidegrees
    }
}

fn block_ranges(ambient: &[usize]) -> Vec<core::ops::Range<usize>> {
    let mut out = Vec::with_capacity(ambient.len());
    let mut start = 0;
    for &n in ambient {
        out.push(start..start + n + 1);
        start += n + 1;
    }
    out
}

/// `X'` in `P^3 x P^1`: the threefold model of bidegree (4,2).
pub const VERRILL_MODEL_TEXT: &str = "(x+y+z+w)*((y*z+z*x+x*y)*w+x*y*z)*t1*t0-(t1+t0)^2*x*y*z*w";

/// `S` in `P^1 x P^2`: the elliptic surface model of bidegree (1,3).
pub const SURFACE_MODEL_TEXT: &str = "(s1+s0)*x*y*z-s0*(x+y+z)*(y*z+z*x+x*y)";

/// Second copy of `S` on the second `P^2` factor, for the fiber product.
pub const SURFACE_MODEL_TEXT_SECOND: &str = "(s1+s0)*X*Y*Z-s0*(X+Y+Z)*(Y*Z+Z*X+X*Y)";

/// The threefold model `X'`.
pub fn verrill_threefold() -> VarietyModel {
    let vars = VarSet::new(&["x", "y", "z", "w", "t1", "t0"]);
    let f = parse(VERRILL_MODEL_TEXT, &vars).expect("registry text parses");
    VarietyModel::new("verrill", vec![3, 1], vars, vec![f])
}

/// The elliptic surface model `S`.
pub fn level6_surface() -> VarietyModel {
    let vars = VarSet::new(&["s1", "s0", "x", "y", "z"]);
    let h = parse(SURFACE_MODEL_TEXT, &vars).expect("registry text parses");
    VarietyModel::new("surface", vec![1, 2], vars, vec![h])
}

/// The self fiber product `S x_{P^1} S` as a complete intersection.
pub fn fiber_product_model() -> VarietyModel {
    let vars = VarSet::new(&["s1", "s0", "x", "y", "z", "X", "Y", "Z"]);
    let h1 = parse(SURFACE_MODEL_TEXT, &vars).expect("registry text parses");
    let h2 = parse(SURFACE_MODEL_TEXT_SECOND, &vars).expect("registry text parses");
    VarietyModel::new("fiberprod", vec![1, 2, 2], vars, vec![h1, h2])
}

/// All registered models.
pub fn registry() -> Vec<VarietyModel> {
    vec![verrill_threefold(), level6_surface(), fiber_product_model()]
}

/// Looks a model up by its registry name.
pub fn model_by_name(name: &str) -> Option<VarietyModel> {
    registry().into_iter().find(|m| m.name() == name)
}

/// Counts the points of the ambient product space at which every defining
/// polynomial of the model vanishes, by exhaustive enumeration.
///
/// Coefficients are reduced mod `p`; a denominator divisible by `p` is an
/// error (registry models have integer coefficients, so this cannot happen
/// for them).
pub fn count_projective_zeros(model: &VarietyModel, p: PrimeModulus) -> Result<u64, FfieldError> {
    let compiled: Vec<Vec<(u64, Vec<u32>)>> = model
        .polys
        .iter()
        .map(|f| f.to_modular_terms(p))
        .collect::<Result<_, _>>()?;
    let mut count = 0u64;
    for point in ffield::enumerate_points(&model.ambient, p)? {
        let coords = point.flat_coords();
        let vanishes = compiled.iter().all(|terms| {
            let mut acc = 0u64;
            for (c, exps) in terms {
                let mut t = *c;
                for (&x, &e) in coords.iter().zip(exps) {
                    for _ in 0..e {
                        t = p.mul(t, x);
                    }
                }
                acc = p.add(acc, t);
            }
            acc == 0
        });
        if vanishes {
            count += 1;
        }
    }
    Ok(count)
}

/// A point of the base `P^1(F_p)`, written as a finite residue or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum BasePoint {
    Finite(u64),
    Infinity,
}

impl fmt::Display for BasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasePoint::Finite(s) => write!(f, "{s}"),
            BasePoint::Infinity => write!(f, "inf"),
        }
    }
}

/// The count of one fiber of the surface `S -> P^1` over `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FiberCount {
    pub p: u64,
    pub s: BasePoint,
    /// Number of points of the plane cubic fiber.
    pub count: u64,
    /// Whether `s` is one of the four singular fiber locations.
    pub singular: bool,
}

impl FiberCount {
    /// Integer-exact Hasse bound `(p + 1 - N)^2 <= 4p`, meaningful for
    /// smooth fibers.
    pub fn hasse_bound_holds(&self) -> bool {
        let d = self.p as i64 + 1 - self.count as i64;
        d * d <= 4 * self.p as i64
    }
}

/// The finite singular fiber locations reduced mod `p`: `{8, -1, 0}`.
///
/// These are pairwise distinct for every `p >= 5` (8 = -1 only mod 3,
/// 8 = 0 only mod 2).
pub fn singular_finite_s(p: u64) -> [u64; 3] {
    [8 % p, p - 1, 0]
}

/// Visits each canonical representative of `P^2(F_p)` once.
fn for_each_p2_point(p: u64, mut visit: impl FnMut(u64, u64, u64)) {
    visit(0, 0, 1);
    for z in 0..p {
        visit(0, 1, z);
    }
    for y in 0..p {
        for z in 0..p {
            visit(1, y, z);
        }
    }
}

/// Evaluates the fiber cubic `(s+1)xyz - (x+y+z)(yz+zx+xy)` at a point,
/// with `a = s+1 mod p` precomputed. For the fiber at infinity the
/// homogenized equation degenerates to `xyz = 0`, handled by the caller.
#[inline]
fn fiber_cubic(p: PrimeModulus, a: u64, x: u64, y: u64, z: u64) -> u64 {
    let e1 = p.add(p.add(x, y), z);
    let e2 = p.add(p.add(p.mul(x, y), p.mul(y, z)), p.mul(z, x));
    let e3 = p.mul(p.mul(x, y), z);
    p.sub(p.mul(a, e3), p.mul(e1, e2))
}

/// Counts the fiber of `S -> P^1` over `s`, flagging the singular
/// locations `{8, -1, 0, infinity}`.
///
/// Needs `p >= 5`: at 2 and 3 the model has bad reduction and the singular
/// locations collide.
pub fn count_fiber(p: PrimeModulus, s: BasePoint) -> FiberCount {
    assert!(
        p.get() >= 5,
        "fibers are only counted at good primes p >= 5"
    );
    let pp = p.get();
    let mut count = 0u64;
    let singular = match s {
        BasePoint::Infinity => true,
        BasePoint::Finite(v) => singular_finite_s(pp).contains(&(v % pp)),
    };
    match s {
        BasePoint::Infinity => {
            // Homogenized fiber is xyz = 0: the coordinate triangle.
            for_each_p2_point(pp, |x, y, z| {
                if p.mul(p.mul(x, y), z) == 0 {
                    count += 1;
                }
            });
        }
        BasePoint::Finite(v) => {
            let a = p.add(v % pp, 1);
            for_each_p2_point(pp, |x, y, z| {
                if fiber_cubic(p, a, x, y, z) == 0 {
                    count += 1;
                }
            });
        }
    }
    FiberCount {
        p: pp,
        s,
        count,
        singular,
    }
}

/// Fiber counts over every point of `P^1(F_p)`, finite values first in
/// increasing order, then infinity.
pub fn all_fiber_counts(p: PrimeModulus) -> Vec<FiberCount> {
    let mut out: Vec<FiberCount> = (0..p.get())
        .map(|s| count_fiber(p, BasePoint::Finite(s)))
        .collect();
    out.push(count_fiber(p, BasePoint::Infinity));
    out
}

/// The fiberwise count of the self fiber product `S x_{P^1} S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberProductCount {
    pub p: u64,
    /// `sum_s N_s^2` over all `s in P^1(F_p)`.
    pub total: u64,
    pub fibers: Vec<FiberCount>,
}

/// Counts `S x_{P^1} S` fiberwise: points over `s` are pairs of fiber
/// points, so the total is `sum_s N_s^2`. This agrees with the direct
/// enumeration of the `fiberprod` complete-intersection model.
pub fn count_fiber_product(p: PrimeModulus) -> FiberProductCount {
    let fibers = all_fiber_counts(p);
    let total = fibers.iter().map(|f| f.count * f.count).sum();
    FiberProductCount {
        p: p.get(),
        total,
        fibers,
    }
}

/// Points of the self fiber product of the *resolved* surface.
///
/// The minimal resolution of `S` blows up its three rational singular
/// points over `s = infinity`, replacing each by a line; the triangle fiber
/// (3p points) becomes the I6 hexagon with `6p` points, and no finite fiber
/// changes. The self product of the resolved surface therefore counts
/// `sum_{s finite} N_s^2 + (6p)^2`. Its only singularities are ordinary
/// double points over pairs of fiber nodes, which is what the node census
/// and the trace assembly correct for.
pub fn resolved_self_product_count(p: PrimeModulus) -> u64 {
    let pp = p.get();
    let finite_sum: u64 = (0..pp)
        .map(|s| {
            let n = count_fiber(p, BasePoint::Finite(s)).count;
            n * n
        })
        .sum();
    finite_sum + 36 * pp * pp
}

/// The census of `F_p`-rational nodes of the self fiber product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeCensus {
    pub p: u64,
    /// Number of rational nodes of the threefold: `sum_s k_s^2` over the
    /// per-fiber rational node counts below.
    pub r: u64,
    /// `(s, k_s)`: rational nodes of the (resolved) fiber over each
    /// singular location.
    pub per_fiber: Vec<(BasePoint, u64)>,
}

/// Counts the `F_p`-rational nodes of `S~ x_{P^1} S~`.
///
/// Nodes of the self product sit over pairs of nodes of one singular fiber,
/// so each singular `s` contributes `k_s^2` with `k_s` the number of
/// rational nodes of that fiber. For finite `s in {8, -1, 0}` the nodes are
/// found by enumerating the simultaneous zeros of the cubic and its three
/// partial derivatives. The I6 hexagon over infinity consists of six lines
/// through rational blowup centers and coordinate vertices, so its six
/// nodes are rational at every good prime and contribute the constant 36.
pub fn node_census(p: PrimeModulus) -> NodeCensus {
    assert!(p.get() >= 5, "node census needs a good prime p >= 5");
    let pp = p.get();
    let mut per_fiber = Vec::new();
    let mut r = 0u64;
    for s in singular_finite_s(pp) {
        let k = rational_fiber_nodes(p, s);
        per_fiber.push((BasePoint::Finite(s), k));
        r += k * k;
    }
    per_fiber.push((BasePoint::Infinity, 6));
    r += 36;
    NodeCensus {
        p: pp,
        r,
        per_fiber,
    }
}

/// Rational singular points of the fiber cubic over a finite `s`, by
/// enumerating common zeros of the cubic and its gradient.
fn rational_fiber_nodes(p: PrimeModulus, s: u64) -> u64 {
    let a = p.add(s % p.get(), 1);
    let mut k = 0u64;
    for_each_p2_point(p.get(), |x, y, z| {
        if fiber_cubic(p, a, x, y, z) != 0 {
            return;
        }
        // grad of a*xyz - e1*e2, componentwise:
        //   d/dx = a*yz - e2 - e1*(y+z), and cyclic shifts.
        let e1 = p.add(p.add(x, y), z);
        let e2 = p.add(p.add(p.mul(x, y), p.mul(y, z)), p.mul(z, x));
        let gx = p.sub(p.mul(a, p.mul(y, z)), p.add(e2, p.mul(e1, p.add(y, z))));
        let gy = p.sub(p.mul(a, p.mul(z, x)), p.add(e2, p.mul(e1, p.add(z, x))));
        let gz = p.sub(p.mul(a, p.mul(x, y)), p.add(e2, p.mul(e1, p.add(x, y))));
        if gx == 0 && gy == 0 && gz == 0 {
            k += 1;
        }
    });
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    #[test]
    fn registry_models_are_multihomogeneous_with_recorded_degrees() {
        let verrill = verrill_threefold();
        assert_eq!(verrill.multidegrees(), &[vec![4, 2]]);
        let surface = level6_surface();
        assert_eq!(surface.multidegrees(), &[vec![1, 3]]);
        let fp = fiber_product_model();
        assert_eq!(fp.multidegrees(), &[vec![1, 3, 0], vec![1, 0, 3]]);
    }

    #[test]
    fn registry_text_roundtrips_through_canonical_print() {
        for model in registry() {
            for f in model.polys() {
                let text = f.to_string();
                assert_eq!(&parse(&text, model.vars()).unwrap(), f);
            }
        }
    }

    #[test]
    fn hyperplane_and_empty_models() {
        // {x = 0} in P^3 at p = 7 is a P^2: 57 points.
        let vars = VarSet::new(&["x", "y", "z", "w"]);
        let model = VarietyModel::new(
            "hyperplane",
            vec![3],
            Arc::clone(&vars),
            vec![MPoly::var_named(&vars, "x")],
        );
        assert_eq!(count_projective_zeros(&model, pm(7)).unwrap(), 57);

        // No equations in P^1 at p = 5: the whole space.
        let vars1 = VarSet::new(&["u", "v"]);
        let model1 = VarietyModel::new("whole", vec![1], Arc::clone(&vars1), vec![]);
        assert_eq!(count_projective_zeros(&model1, pm(5)).unwrap(), 6);
        // Same with an explicit zero polynomial.
        let model0 = VarietyModel::new(
            "zero",
            vec![1],
            Arc::clone(&vars1),
            vec![MPoly::zero(&vars1)],
        );
        assert_eq!(count_projective_zeros(&model0, pm(5)).unwrap(), 6);
    }

    #[test]
    fn triangle_fibers_count_3p() {
        for p in [5u64, 7, 11, 13, 97] {
            let m = pm(p);
            let at0 = count_fiber(m, BasePoint::Finite(0));
            assert_eq!(at0.count, 3 * p, "s=0 at p={p}");
            assert!(at0.singular);
            let atinf = count_fiber(m, BasePoint::Infinity);
            assert_eq!(atinf.count, 3 * p, "s=inf at p={p}");
            assert!(atinf.singular);
        }
    }

    #[test]
    fn smooth_fibers_obey_hasse() {
        for p in [5u64, 7, 11, 13] {
            let m = pm(p);
            for f in all_fiber_counts(m) {
                if !f.singular {
                    assert!(f.hasse_bound_holds(), "Hasse fails at p={p}, s={}", f.s);
                }
            }
        }
    }

    #[test]
    fn fiber_product_total_matches_direct_enumeration() {
        let model = fiber_product_model();
        for p in [5u64, 7] {
            let m = pm(p);
            let fiberwise = count_fiber_product(m);
            let direct = count_projective_zeros(&model, m).unwrap();
            assert_eq!(fiberwise.total, direct, "at p={p}");
            // squares dominate: sum N_s^2 >= sum N_s
            let linear: u64 = fiberwise.fibers.iter().map(|f| f.count).sum();
            assert!(fiberwise.total >= linear);
        }
    }

    #[test]
    fn singular_locations_stay_distinct() {
        for p in [5u64, 7, 11, 13, 17, 97] {
            let s = singular_finite_s(p);
            assert!(s[0] != s[1] && s[0] != s[2] && s[1] != s[2], "p={p}");
        }
    }

    #[test]
    fn node_census_small_primes() {
        // s=0 fiber: triangle of lines, 3 rational nodes at every good p.
        // s=-1 fiber: line+conic, nodes rational iff p = 1 mod 3.
        // s=8 fiber: one node, always rational.
        let c5 = node_census(pm(5));
        assert_eq!(c5.r, 46); // 1 + 0 + 9 + 36
        let c7 = node_census(pm(7));
        assert_eq!(c7.r, 50); // 1 + 4 + 9 + 36
        for (census, i2_nodes) in [(&c5, 0u64), (&c7, 2u64)] {
            let p = census.p;
            let by_s = |s: BasePoint| {
                census
                    .per_fiber
                    .iter()
                    .find(|(loc, _)| *loc == s)
                    .map(|&(_, k)| k)
                    .unwrap()
            };
            assert_eq!(by_s(BasePoint::Finite(8 % p)), 1, "I1 node at p={p}");
            assert_eq!(
                by_s(BasePoint::Finite(p - 1)),
                i2_nodes,
                "I2 nodes at p={p}"
            );
            assert_eq!(by_s(BasePoint::Finite(0)), 3, "I3 nodes at p={p}");
            assert_eq!(by_s(BasePoint::Infinity), 6);
        }
    }

    #[test]
    fn node_census_follows_residue_class_mod_3() {
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31] {
            let census = node_census(pm(p));
            let expect = if p % 3 == 1 { 50 } else { 46 };
            assert_eq!(census.r, expect, "R(p) at p={p}");
        }
    }

    #[test]
    fn resolved_self_product_replaces_triangle_by_hexagon() {
        for p in [5u64, 7] {
            let m = pm(p);
            let unresolved = count_fiber_product(m).total;
            // Difference is exactly (6p)^2 - (3p)^2 = 27 p^2.
            assert_eq!(resolved_self_product_count(m), unresolved + 27 * p * p);
        }
    }
}
