//! Universal-torsor coordinates `(η₁, …, η₇, α₁, α₂, α₄)`: the monomial map
//! to the surface, its inverse, the coprimality and height predicates, and
//! the lattice-point count `#T(B)` with `N(B) = 2 #T(B)`.
//!
//! Coordinates satisfy
//!
//! ```text
//! η₁²η₂η₄²η₇ + η₅α₁ − η₆α₂ = 0
//! η₂η₃²η₅²η₆ + η₇α₂ − η₄α₄ = 0
//! ```
//!
//! and map to `x₀ = η₁η₂²η₃³η₅²η₆²`, `x₁ = η₁³η₂²η₃η₄²η₇²`,
//! `x₂ = η₁²η₂²η₃²η₄η₅η₆η₇`, `x₃ = η₁η₂η₃η₅η₇α₁`, `x₄ = α₁α₄`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::ExactRational;
use crate::surface::{check_bound, serialize_bigints, SurfacePoint};
use crate::window::abs_quadratic_window;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TorsorPoint {
    #[serde(serialize_with = "serialize_bigints")]
    pub eta: [BigInt; 7],
    #[serde(serialize_with = "serialize_bigints")]
    pub alpha: [BigInt; 3],
}

impl TorsorPoint {
    /// `alpha` is `(α₁, α₂, α₄)`.
    pub fn new(eta: [BigInt; 7], alpha: [BigInt; 3]) -> Self {
        TorsorPoint { eta, alpha }
    }

    pub fn from_i64(eta: [i64; 7], alpha: [i64; 3]) -> Self {
        TorsorPoint {
            eta: eta.map(BigInt::from),
            alpha: alpha.map(BigInt::from),
        }
    }

    pub(crate) fn from_i128(eta: [i128; 7], alpha: [i128; 3]) -> Self {
        TorsorPoint {
            eta: eta.map(BigInt::from),
            alpha: alpha.map(BigInt::from),
        }
    }

    pub fn alpha1(&self) -> &BigInt {
        &self.alpha[0]
    }
    pub fn alpha2(&self) -> &BigInt {
        &self.alpha[1]
    }
    pub fn alpha4(&self) -> &BigInt {
        &self.alpha[2]
    }

    /// `α₃ = (η₂η₃²η₅η₆² + η₇α₁)/η₄` when integral.
    pub fn alpha3(&self) -> Option<BigInt> {
        let [_, e2, e3, e4, e5, e6, e7] = &self.eta;
        if e4.is_zero() {
            return None;
        }
        let num = e2 * e3 * e3 * e5 * e6 * e6 + e7 * self.alpha1();
        let (q, r) = num.div_rem(e4);
        r.is_zero().then_some(q)
    }
}

fn torsor_residuals(t: &TorsorPoint) -> (BigInt, BigInt) {
    let [e1, e2, e3, e4, e5, e6, e7] = &t.eta;
    let [a1, a2, a4] = &t.alpha;
    let r1 = e1 * e1 * e2 * e4 * e4 * e7 + e5 * a1 - e6 * a2;
    let r2 = e2 * e3 * e3 * e5 * e5 * e6 + e7 * a2 - e4 * a4;
    (r1, r2)
}

/// Both torsor equations hold exactly.
pub fn check_equations(t: &TorsorPoint) -> bool {
    let (r1, r2) = torsor_residuals(t);
    r1.is_zero() && r2.is_zero()
}

/// Status of the three torsor equations involving `α₃`, which the count
/// never uses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuxiliaryEquations {
    pub alpha3_integral: bool,
    pub equations: [bool; 3],
}

impl AuxiliaryEquations {
    pub fn all_hold(&self) -> bool {
        self.alpha3_integral && self.equations.iter().all(|&b| b)
    }
}

pub fn auxiliary_equations(t: &TorsorPoint) -> AuxiliaryEquations {
    let Some(a3) = t.alpha3() else {
        return AuxiliaryEquations {
            alpha3_integral: false,
            equations: [false; 3],
        };
    };
    let [e1, e2, e3, e4, e5, e6, e7] = &t.eta;
    let [a1, a2, a4] = &t.alpha;
    let q1 = e2 * e3 * e3 * e5 * e6 * e6 + e7 * a1 - e4 * &a3;
    let q2 = e1 * e1 * e2 * e4 * e7 * e7 + e5 * &a3 - e6 * a4;
    let q3 = e1 * e1 * e2 * e2 * e3 * e3 * e4 * e5 * e6 * e7 + a1 * a4 - a2 * &a3;
    AuxiliaryEquations {
        alpha3_integral: true,
        equations: [q1.is_zero(), q2.is_zero(), q3.is_zero()],
    }
}

fn coprime(a: &BigInt, b: &BigInt) -> bool {
    a.gcd(b).is_one()
}

/// The seven derived coprimality conditions, in order:
///
/// 1. `gcd(α₁, η₁η₂η₃η₄η₆) = 1`
/// 2. `gcd(α₄, η₁η₂η₃η₅η₇) = 1`
/// 3. `gcd(α₂, η₁η₂η₃η₄η₅) = 1`
/// 4. `gcd(η₇, η₂η₃η₄η₅η₆) = 1`
/// 5. `gcd(η₆, η₁η₂η₄η₅) = 1`
/// 6. `gcd(η₁η₄, η₃η₅) = 1`
/// 7. `gcd(η₂, η₄η₅) = 1`
///
/// with the convention `gcd(0, m) = m`.
pub fn coprimality_conditions(t: &TorsorPoint) -> [bool; 7] {
    let [e1, e2, e3, e4, e5, e6, e7] = &t.eta;
    let [a1, a2, a4] = &t.alpha;
    let e123 = e1 * e2 * e3;
    [
        coprime(a1, &(&e123 * e4 * e6)),
        coprime(a4, &(&e123 * e5 * e7)),
        coprime(a2, &(&e123 * e4 * e5)),
        coprime(e7, &(e2 * e3 * e4 * e5 * e6)),
        coprime(e6, &(e1 * e2 * e4 * e5)),
        coprime(&(e1 * e4), &(e3 * e5)),
        coprime(e2, &(e4 * e5)),
    ]
}

/// All seven derived coprimality conditions hold.
pub fn check_coprimality(t: &TorsorPoint) -> bool {
    coprimality_conditions(t).iter().all(|&b| b)
}

/// The three coprimality conditions from the torsor derivation:
/// `gcd(η₃η₅η₆, η₁η₄η₇) = 1`, `gcd(η₅η₇, η₂α₄) = 1`, `gcd(η₁η₂η₃, α₁α₄) = 1`.
pub fn original_coprimality_conditions(t: &TorsorPoint) -> [bool; 3] {
    let [e1, e2, e3, e4, e5, e6, e7] = &t.eta;
    let [a1, _, a4] = &t.alpha;
    [
        coprime(&(e3 * e5 * e6), &(e1 * e4 * e7)),
        coprime(&(e5 * e7), &(e2 * a4)),
        coprime(&(e1 * e2 * e3), &(a1 * a4)),
    ]
}

pub fn check_original_coprimality(t: &TorsorPoint) -> bool {
    original_coprimality_conditions(t).iter().all(|&b| b)
}

/// The four height conditions (each coordinate of [`to_point`] bounded by `B`
/// in absolute value).
pub fn check_heights(t: &TorsorPoint, bound: u64) -> bool {
    let b = BigInt::from(bound);
    let [e1, e2, e3, e4, e5, e6, e7] = &t.eta;
    let [a1, _, a4] = &t.alpha;
    let c1 = e1 * e2 * e2 * e3 * e3 * e3 * e5 * e5 * e6 * e6;
    let c2 = e1 * e1 * e1 * e2 * e2 * e3 * e4 * e4 * e7 * e7;
    let c3 = (e1 * e2 * e3 * e5 * e7 * a1).abs();
    let c4 = (a1 * a4).abs();
    c1 <= b && c2 <= b && c3 <= b && c4 <= b
}

/// The monomial map to the surface.
pub fn to_point(t: &TorsorPoint) -> Result<SurfacePoint> {
    if t.eta.iter().any(|e| !e.is_positive()) {
        return Err(Error::TorsorInvariant("positivity of η₁..η₇"));
    }
    let (r1, r2) = torsor_residuals(t);
    if !r1.is_zero() {
        return Err(Error::TorsorInvariant("torsor equation 1"));
    }
    if !r2.is_zero() {
        return Err(Error::TorsorInvariant("torsor equation 2"));
    }
    if t.alpha1().is_zero() {
        return Err(Error::TorsorInvariant("α₁ ≠ 0"));
    }
    const NAMES: [&str; 7] = ["gcd1", "gcd2", "gcd3", "gcd4", "gcd5", "gcd6", "gcd7"];
    if let Some(i) = coprimality_conditions(t).iter().position(|&b| !b) {
        return Err(Error::TorsorInvariant(NAMES[i]));
    }
    let [e1, e2, e3, e4, e5, e6, e7] = &t.eta;
    let [a1, _, a4] = &t.alpha;
    let x0 = e1 * e2 * e2 * e3 * e3 * e3 * e5 * e5 * e6 * e6;
    let x1 = e1 * e1 * e1 * e2 * e2 * e3 * e4 * e4 * e7 * e7;
    let x2 = e1 * e1 * e2 * e2 * e3 * e3 * e4 * e5 * e6 * e7;
    let x3 = e1 * e2 * e3 * e5 * e7 * a1;
    let x4 = a1 * a4;
    SurfacePoint::new([x0, x1, x2, x3, x4])
        .map_err(|_| Error::TorsorInvariant("primitivity of the image"))
}

fn exact_div(a: &BigInt, b: &BigInt, step: &str) -> Result<BigInt> {
    let (q, r) = a.div_rem(b);
    if r.is_zero() {
        Ok(q)
    } else {
        Err(Error::NotLiftable(format!(
            "{step}: {b} does not divide {a}"
        )))
    }
}

fn exact_sqrt(a: &BigInt, step: &str) -> Result<BigInt> {
    let r = a.sqrt();
    if &(&r * &r) == a {
        Ok(r)
    } else {
        Err(Error::NotLiftable(format!("{step}: {a} is not a square")))
    }
}

/// Inverse of [`to_point`] on points with `x₀, x₁, x₂ > 0` and `x₃ ≠ 0`.
///
/// Each splitting is made canonical through a gcd, and the sign of `α₁` is
/// fixed to that of `x₃`.
pub fn lift(x: &SurfacePoint) -> Result<TorsorPoint> {
    let [x0, x1, x2, x3, x4] = x.coords();
    if !(x0.is_positive() && x1.is_positive() && x2.is_positive()) || x3.is_zero() {
        return Err(Error::NotLiftable("need x₀, x₁, x₂ > 0 and x₃ ≠ 0".into()));
    }
    // x₀ = y₀₁ x₀'², x₁ = y₀₁ x₁'², x₂ = y₀₁ x₀' x₁'
    let y01 = x0.gcd(x1);
    let x0p = exact_sqrt(&exact_div(x0, &y01, "x₀/y₀₁")?, "x₀'")?;
    let x1p = exact_sqrt(&exact_div(x1, &y01, "x₁/y₀₁")?, "x₁'")?;
    if &(&y01 * &x0p * &x1p) != x2 {
        return Err(Error::NotLiftable("x₂ ≠ y₀₁ x₀' x₁'".into()));
    }
    let y01p = y01.gcd(x3);
    let eta2 = exact_div(&y01, &y01p, "η₂")?;
    let x3p = exact_div(x3, &y01p, "x₃'")?;
    let y01pp = exact_div(&y01p, &eta2, "y₀₁''")?;
    let eta3 = y01pp.gcd(&x0p);
    let eta1 = exact_div(&y01pp, &eta3, "η₁")?;
    let x0pp = exact_div(&x0p, &eta3, "x₀''")?;
    let x1pp = exact_div(&x1p, &eta1, "x₁''")?;
    let g = x3p.gcd(x4);
    let alpha1 = if x3p.is_negative() { -g } else { g };
    let x3pp = exact_div(&x3p, &alpha1, "x₃''")?;
    let alpha4 = exact_div(x4, &alpha1, "α₄")?;
    let eta5 = x3pp.gcd(&x0pp);
    let eta7 = exact_div(&x3pp, &eta5, "η₇")?;
    let eta6 = exact_div(&x0pp, &eta5, "η₆")?;
    let eta4 = exact_div(&x1pp, &eta7, "η₄")?;
    let c1 = &eta1 * &eta1 * &eta2 * &eta4 * &eta4 * &eta7;
    let alpha2 = exact_div(&(c1 + &eta5 * &alpha1), &eta6, "α₂")?;
    let t = TorsorPoint {
        eta: [eta1, eta2, eta3, eta4, eta5, eta6, eta7],
        alpha: [alpha1, alpha2, alpha4],
    };
    match to_point(&t) {
        Ok(p) if &p == x => Ok(t),
        Ok(_) => Err(Error::NotLiftable(
            "lift does not map back to the input".into(),
        )),
        Err(e) => Err(Error::NotLiftable(format!(
            "lift violates an invariant: {e}"
        ))),
    }
}

/// `A₂ = η₁η₂η₃η₄η₅` and the squares of `Y₆ = B^{1/2}/η^{(1/2,1,3/2,0,1)}`
/// and `Y₇ = B^{1/2}/η^{(3/2,1,1/2,1,0)}`.
///
/// `Y₆` and `Y₇` are generally irrational; their squares are exact.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeightBounds {
    pub a2: u64,
    pub y6_sq: ExactRational,
    pub y7_sq: ExactRational,
}

impl HeightBounds {
    pub fn new(eta: [u64; 5], bound: u64) -> Result<Self> {
        if eta.contains(&0) {
            return Err(Error::NonPositive(format!("{eta:?}")));
        }
        let [e1, e2, e3, e4, e5] = eta.map(|e| e as u128);
        let d6 = e1 * e2 * e2 * e3 * e3 * e3 * e5 * e5;
        let d7 = e1 * e1 * e1 * e2 * e2 * e3 * e4 * e4;
        Ok(HeightBounds {
            a2: (e1 * e2 * e3 * e4 * e5) as u64,
            y6_sq: ExactRational::new(bound, BigInt::from(d6)),
            y7_sq: ExactRational::new(bound, BigInt::from(d7)),
        })
    }

    pub fn y6(&self) -> f64 {
        self.y6_sq.to_f64().sqrt()
    }

    pub fn y7(&self) -> f64 {
        self.y7_sq.to_f64().sqrt()
    }

    /// `Y₆ ≥ 1` and `Y₇ ≥ 1`.
    pub fn in_v(&self) -> bool {
        let one = ExactRational::one();
        self.y6_sq >= one && self.y7_sq >= one
    }
}

/// Which coprimality system an enumeration filters on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coprimality {
    /// The three conditions from the torsor derivation.
    Original,
    /// The seven derived conditions.
    Derived,
    /// No coprimality filter (candidate enumeration for equivalence tests).
    Unfiltered,
}

pub(crate) fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

#[inline]
fn coprime_i(a: i128, b: i128) -> bool {
    gcd_u128(a.unsigned_abs(), b.unsigned_abs()) == 1
}

/// `⌊√n⌋`.
pub(crate) fn isqrt(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn mod_inverse(a: i128, m: i128) -> i128 {
    if m == 1 {
        return 0;
    }
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "{a} not invertible mod {m}");
    old_s.rem_euclid(m)
}

/// `η = (η₁..η₅)` with `Y₆ ≥ 1`, `Y₇ ≥ 1` (and, if `coprime_only`, the two
/// coprimality conditions on `η` alone).
pub(crate) fn eta_tuples(b: u128, coprime_only: bool) -> Vec<[u128; 5]> {
    let mut out = Vec::new();
    let mut e1 = 1u128;
    while e1 <= b {
        let mut e2 = 1u128;
        while e1 * e2 * e2 <= b {
            let mut e3 = 1u128;
            while e1 * e2 * e2 * e3 * e3 * e3 <= b && e1 * e1 * e1 * e2 * e2 * e3 <= b {
                let r6 = e1 * e2 * e2 * e3 * e3 * e3;
                let r7 = e1 * e1 * e1 * e2 * e2 * e3;
                let mut e4 = 1u128;
                while r7 * e4 * e4 <= b {
                    if !coprime_only || (gcd_u128(e1 * e4, e3) == 1 && gcd_u128(e2, e4) == 1) {
                        let mut e5 = 1u128;
                        while r6 * e5 * e5 <= b {
                            if !coprime_only
                                || gcd_u128(e1 * e4 * e2, e5) == 1 && gcd_u128(e3, e4) == 1
                            {
                                out.push([e1, e2, e3, e4, e5]);
                            }
                            e5 += 1;
                        }
                    }
                    e4 += 1;
                }
                e3 += 1;
            }
            e2 += 1;
        }
        e1 += 1;
    }
    out
}

/// A lattice point found by the enumerators, in fixed-width integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct RawTorsor {
    pub eta: [i128; 7],
    pub alpha: [i128; 3],
}

impl RawTorsor {
    fn passes(&self, filter: Coprimality) -> bool {
        let [e1, e2, e3, e4, e5, e6, e7] = self.eta;
        let [a1, a2, a4] = self.alpha;
        match filter {
            Coprimality::Unfiltered => true,
            Coprimality::Original => {
                coprime_i(e3 * e5 * e6, e1 * e4 * e7)
                    && coprime_i(e5 * e7, e2 * a4)
                    && coprime_i(e1 * e2 * e3, a1)
                    && coprime_i(e1 * e2 * e3, a4)
            }
            Coprimality::Derived => {
                let e123 = e1 * e2 * e3;
                coprime_i(a1, e123 * e4 * e6)
                    && coprime_i(a4, e123 * e5 * e7)
                    && coprime_i(a2, e123 * e4 * e5)
                    && coprime_i(e7, e2 * e3 * e4 * e5 * e6)
                    && coprime_i(e6, e1 * e2 * e4 * e5)
                    && coprime_i(e1 * e4, e3 * e5)
                    && coprime_i(e2, e4 * e5)
            }
        }
    }
}

/// Fast enumeration: `η'` is pre-filtered by the coprimality conditions that
/// involve `η` alone, then `α₁` runs over a single residue class modulo
/// `η₄η₆` inside the exact window cut out by the last two height conditions.
fn enumerate_fast<T, F>(bound: u64, filter: Coprimality, init: T, visit: F) -> Vec<T>
where
    T: Send + Sync + Clone,
    F: Fn(&mut T, RawTorsor) + Sync,
{
    assert!(filter != Coprimality::Unfiltered);
    let b = bound as u128;
    let bi = bound as i128;
    eta_tuples(b, true)
        .par_iter()
        .map(|&[e1, e2, e3, e4, e5]| {
            let mut acc = init.clone();
            let r6 = e1 * e2 * e2 * e3 * e3 * e3 * e5 * e5;
            let r7 = e1 * e1 * e1 * e2 * e2 * e3 * e4 * e4;
            let max6 = isqrt(b / r6);
            let max7 = isqrt(b / r7);
            let [e1, e2, e3, e4, e5] = [e1, e2, e3, e4, e5].map(|e| e as i128);
            let e123 = e1 * e2 * e3;
            let p6 = e1 * e2 * e4 * e5;
            let p7 = e2 * e3 * e4 * e5;
            for e6 in 1..=max6 as i128 {
                if !coprime_i(e6, p6) {
                    continue;
                }
                let c2 = e2 * e3 * e3 * e5 * e5 * e6;
                let inv5 = mod_inverse(e5, e6);
                for e7 in 1..=max7 as i128 {
                    let a1_max = bi / (e123 * e5 * e7);
                    if a1_max == 0 {
                        break;
                    }
                    if !coprime_i(e7, p7 * e6) {
                        continue;
                    }
                    let c1 = e1 * e1 * e2 * e4 * e4 * e7;
                    // η₆ | c1 + η₅α₁
                    let res6 = (-c1 * inv5).rem_euclid(e6);
                    // η₄ | η₆c2 + η₇c1 + η₅η₇α₁
                    let k = e6 * c2 + e7 * c1;
                    let l = e5 * e7;
                    let res4 = if e4 == 1 {
                        0
                    } else {
                        (-(k % e4) * mod_inverse(l, e4)).rem_euclid(e4)
                    };
                    // CRT modulo η₄η₆
                    let modulus = e4 * e6;
                    let r = if e6 == 1 {
                        res4
                    } else if e4 == 1 {
                        res6
                    } else {
                        let t = ((res4 - res6).rem_euclid(e4) * mod_inverse(e6, e4)).rem_euclid(e4);
                        res6 + e6 * t
                    };
                    // |α₁ α₄| <= B  ⟺  |α₁ (l α₁ + k)| <= B η₄η₆
                    let m = bi * modulus;
                    for (lo, hi) in abs_quadratic_window(l, k, m) {
                        let lo = lo.max(-a1_max);
                        let hi = hi.min(a1_max);
                        if lo > hi {
                            continue;
                        }
                        let mut a1 = lo + (r - lo).rem_euclid(modulus);
                        while a1 <= hi {
                            if a1 != 0 {
                                let a4n = k + l * a1;
                                let a4 = a4n / modulus;
                                if (a1 * a4).abs() <= bi {
                                    let a2 = (c1 + e5 * a1) / e6;
                                    debug_assert_eq!(a4 * modulus, a4n);
                                    debug_assert_eq!(a2 * e6, c1 + e5 * a1);
                                    let raw = RawTorsor {
                                        eta: [e1, e2, e3, e4, e5, e6, e7],
                                        alpha: [a1, a2, a4],
                                    };
                                    if raw.passes(filter) {
                                        visit(&mut acc, raw);
                                    }
                                }
                            }
                            a1 += modulus;
                        }
                    }
                }
            }
            acc
        })
        .collect()
}

/// Literal enumeration in the natural loop order: every `η'` within the first
/// two height conditions, every `α₁` within the third, then `α₂` and `α₄`
/// whenever the divisibilities allow. No pre-filtering; slow.
fn enumerate_literal<F>(bound: u64, filter: Coprimality, mut visit: F)
where
    F: FnMut(RawTorsor),
{
    let b = bound as u128;
    let bi = bound as i128;
    for [e1, e2, e3, e4, e5] in eta_tuples(b, false) {
        let max6 = isqrt(b / (e1 * e2 * e2 * e3 * e3 * e3 * e5 * e5)) as i128;
        let max7 = isqrt(b / (e1 * e1 * e1 * e2 * e2 * e3 * e4 * e4)) as i128;
        let [e1, e2, e3, e4, e5] = [e1, e2, e3, e4, e5].map(|e| e as i128);
        for e6 in 1..=max6 {
            for e7 in 1..=max7 {
                let a1_max = bi / (e1 * e2 * e3 * e5 * e7);
                let c1 = e1 * e1 * e2 * e4 * e4 * e7;
                let c2 = e2 * e3 * e3 * e5 * e5 * e6;
                for a1 in -a1_max..=a1_max {
                    if a1 == 0 || (c1 + e5 * a1) % e6 != 0 {
                        continue;
                    }
                    let a2 = (c1 + e5 * a1) / e6;
                    if (c2 + e7 * a2) % e4 != 0 {
                        continue;
                    }
                    let a4 = (c2 + e7 * a2) / e4;
                    if (a1 * a4).abs() > bi {
                        continue;
                    }
                    let raw = RawTorsor {
                        eta: [e1, e2, e3, e4, e5, e6, e7],
                        alpha: [a1, a2, a4],
                    };
                    if raw.passes(filter) {
                        visit(raw);
                    }
                }
            }
        }
    }
}

/// `#T(B)`.
pub fn count(bound: u64) -> Result<u64> {
    check_bound(bound)?;
    Ok(
        enumerate_fast(bound, Coprimality::Original, 0u64, |n, _| *n += 1)
            .into_iter()
            .sum(),
    )
}

/// `#T(B)` filtering on the chosen coprimality system.
pub fn count_with(bound: u64, filter: Coprimality) -> Result<u64> {
    check_bound(bound)?;
    Ok(match filter {
        Coprimality::Unfiltered => {
            let mut n = 0u64;
            enumerate_literal(bound, filter, |_| n += 1);
            n
        }
        _ => enumerate_fast(bound, filter, 0u64, |n, _| *n += 1)
            .into_iter()
            .sum(),
    })
}

/// The elements of `T(B)`, sorted.
pub fn points(bound: u64) -> Result<Vec<TorsorPoint>> {
    check_bound(bound)?;
    let mut out: Vec<TorsorPoint> = enumerate_fast(
        bound,
        Coprimality::Original,
        Vec::new(),
        |v: &mut Vec<RawTorsor>, r| v.push(r),
    )
    .into_iter()
    .flatten()
    .map(|r| TorsorPoint::from_i128(r.eta, r.alpha))
    .collect();
    out.sort();
    Ok(out)
}

/// Tuples found by the literal loop order under `filter`, sorted. With
/// [`Coprimality::Unfiltered`] this is every solution of the torsor
/// equations and height conditions with `α₁ ≠ 0`.
pub fn points_literal(bound: u64, filter: Coprimality) -> Result<Vec<TorsorPoint>> {
    check_bound(bound)?;
    let mut out = Vec::new();
    enumerate_literal(bound, filter, |r| {
        out.push(TorsorPoint::from_i128(r.eta, r.alpha))
    });
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(eta: [i64; 7], alpha: [i64; 3]) -> TorsorPoint {
        TorsorPoint::from_i64(eta, alpha)
    }

    #[test]
    fn to_point_examples() {
        let p = to_point(&t([1; 7], [1, 2, 3])).unwrap();
        assert_eq!(p, SurfacePoint::from_i64([1, 1, 1, 1, 3]).unwrap());
        let p = to_point(&t([1; 7], [-1, 0, 1])).unwrap();
        assert_eq!(p, SurfacePoint::from_i64([1, 1, 1, -1, -1]).unwrap());
        let p = to_point(&t([1, 1, 1, 1, 1, 2, 1], [1, 1, 3])).unwrap();
        assert_eq!(p, SurfacePoint::from_i64([4, 1, 2, 1, 3]).unwrap());
    }

    #[test]
    fn to_point_names_the_violation() {
        assert_eq!(
            to_point(&t([1; 7], [1, 1, 1])),
            Err(Error::TorsorInvariant("torsor equation 1"))
        );
        assert_eq!(
            to_point(&t([1; 7], [1, 2, 4])),
            Err(Error::TorsorInvariant("torsor equation 2"))
        );
        assert_eq!(
            to_point(&t([0, 1, 1, 1, 1, 1, 1], [1, 2, 3])),
            Err(Error::TorsorInvariant("positivity of η₁..η₇"))
        );
        // η₁ = 2, α₁ = 2: 4 + 2 - 1·α₂ = 0 → α₂ = 6; 1 + 6 - α₄ = 0 → α₄ = 7
        assert_eq!(
            to_point(&t([2, 1, 1, 1, 1, 1, 1], [2, 6, 7])),
            Err(Error::TorsorInvariant("gcd1"))
        );
    }

    #[test]
    fn equation_examples() {
        assert!(check_equations(&t([1; 7], [1, 2, 3])));
        assert!(!check_equations(&t([1; 7], [1, 1, 1])));
        let aux = auxiliary_equations(&t([1; 7], [1, 2, 3]));
        assert!(aux.all_hold());
    }

    #[test]
    fn coprimality_examples() {
        assert!(check_coprimality(&t([1; 7], [-1, 0, 1])));
        // gcd(η₇, η₂ …) = 2
        assert!(!coprimality_conditions(&t([1, 2, 1, 1, 1, 1, 2], [1, 1, 1]))[3]);
        assert!(!check_coprimality(&t([2, 1, 1, 1, 1, 1, 1], [2, 6, 7])));
        assert!(!coprimality_conditions(&t([2, 1, 1, 1, 1, 1, 1], [2, 6, 7]))[0]);
    }

    #[test]
    fn height_examples() {
        assert!(check_heights(&t([1; 7], [-1, 0, 1]), 1));
        assert!(!check_heights(&t([1; 7], [1, 2, 3]), 1));
        assert!(check_heights(&t([1; 7], [1, 2, 3]), 3));
    }

    #[test]
    fn lift_examples() {
        let x = SurfacePoint::from_i64([1, 1, 1, -1, -1]).unwrap();
        assert_eq!(lift(&x).unwrap(), t([1; 7], [-1, 0, 1]));
        let x = SurfacePoint::from_i64([1, 1, 1, 1, 3]).unwrap();
        assert_eq!(lift(&x).unwrap(), t([1; 7], [1, 2, 3]));
        let x = SurfacePoint::from_i64([4, 1, 2, 1, 3]).unwrap();
        assert_eq!(lift(&x).unwrap(), t([1, 1, 1, 1, 1, 2, 1], [1, 1, 3]));
        let conic = SurfacePoint::from_i64([1, 1, 1, 0, 0]).unwrap();
        assert!(matches!(lift(&conic), Err(Error::NotLiftable(_))));
    }

    #[test]
    fn count_b1() {
        assert_eq!(count(1).unwrap(), 1);
        assert_eq!(points(1).unwrap(), vec![t([1; 7], [-1, 0, 1])]);
        assert_eq!(count(0), Err(Error::ZeroBound));
    }

    #[test]
    fn alpha4_zero_only_with_trivial_eta() {
        for p in points(300).unwrap() {
            if p.alpha4().is_zero() {
                let [e1, e2, e3, _, e5, _, e7] = &p.eta;
                assert!((e1 * e2 * e3 * e5 * e7).is_one(), "{p:?}");
            }
        }
    }

    #[test]
    fn height_bounds() {
        let hb = HeightBounds::new([1, 1, 1, 1, 1], 100).unwrap();
        assert_eq!(hb.a2, 1);
        assert!((hb.y6() - 10.0).abs() < 1e-12 && hb.in_v());
        let hb = HeightBounds::new([2, 1, 1, 1, 1], 7).unwrap();
        assert!(!hb.in_v());
    }

    #[test]
    fn inverse_and_gcd_helpers() {
        assert_eq!(mod_inverse(3, 7), 5);
        assert_eq!(mod_inverse(5, 1), 0);
        assert_eq!(gcd_u128(12, 18), 6);
        assert_eq!(gcd_u128(0, 5), 5);
        assert_eq!(isqrt(99), 9);
    }
}
