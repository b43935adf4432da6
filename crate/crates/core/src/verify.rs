//! Oracles tying the counting, arithmetic and density modules together:
//! brute-force lattice counts against their main terms, the summations over
//! `η₇` and `η₆`, the arithmetic summation checks, and the fit of the point
//! count against the predicted leading term.
//!
//! Observed values never use the closed form they are compared with.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arithfun::{
    self, big_theta_f64, sigma_minus, sum_residuals, weighted_sum_check, Parity, PsiKind,
    StdWeight, ZETA2,
};
use crate::density;
use crate::error::{Error, Result};
use crate::factor::distinct_primes;
use crate::surface::{self, check_bound};
use crate::torsor::{self, eta_tuples, gcd_u128, isqrt, HeightBounds};

/// Largest `B` accepted by the lattice-count oracles; keeps the integer form
/// of the height conditions inside `i128`.
pub const MAX_LEMMA_BOUND: u64 = 1_000_000_000;

// Frozen gates: twice the largest normalized residual on the calibration
// split, rounded up.

/// `ψ` summation checks; calibration maximum 0.1454.
pub const ARITH_GATE: f64 = 0.30;
/// Gate for the lattice counts. Each Möbius term counts a residue class in
/// at most two intervals, so `|R| ≤ 2 · 2^{ω(η₃) + ω(η₁) + ω(η₁η₂η₃)}`.
pub const INTER_GATE: f64 = 2.0;
/// Sums over `η₇`; calibration maximum 0.1277.
pub const SUM7_GATE: f64 = 0.26;
/// Sums over `η₆` and `η₇`; calibration maximum 0.1492.
pub const SUM6_GATE: f64 = 0.30;

const QUAD_TOL: f64 = 1e-10;
/// `g₃` is a nested quadrature; this keeps it well inside its error budget.
const QUAD_TOL_2D: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Lemma {
    PsiSum,
    PsiPrimeSum,
    WeightedSum,
    Inter,
    SumEta7,
    SumEta6,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaReport {
    pub lemma: Lemma,
    pub instance: String,
    /// Parity class or other stratum the instance was drawn from.
    pub class: String,
    pub main_term: f64,
    pub observed: f64,
    /// `observed − main_term`.
    pub residual: f64,
    pub error_scale: f64,
    /// `|residual| / error_scale`.
    pub normalized_residual: f64,
}

impl LemmaReport {
    fn new(
        lemma: Lemma,
        instance: String,
        class: String,
        main_term: f64,
        observed: f64,
        error_scale: f64,
    ) -> Self {
        let residual = observed - main_term;
        LemmaReport {
            lemma,
            instance,
            class,
            main_term,
            observed,
            residual,
            error_scale,
            normalized_residual: residual.abs() / error_scale,
        }
    }

    /// `residual / main_term`, or `None` when the main term vanishes.
    pub fn relative_residual(&self) -> Option<f64> {
        (self.main_term != 0.0).then(|| self.residual / self.main_term)
    }
}

fn neumaier<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for x in xs {
        let t = s + x;
        c += if s.abs() >= x.abs() { (s - t) + x } else { (x - t) + s };
        s = t;
    }
    s + c
}

fn coprime(a: u128, b: u128) -> bool {
    gcd_u128(a, b) == 1
}

fn check_lemma_bound(bound: u64) -> Result<()> {
    check_bound(bound)?;
    if bound > MAX_LEMMA_BOUND {
        return Err(Error::BoundTooLarge {
            bound,
            max: MAX_LEMMA_BOUND,
        });
    }
    Ok(())
}

fn rejected(what: &str, detail: String) -> Error {
    Error::OutsideDomain(format!("{detail} violates {what}"))
}

/// `(η, B)` with `η ∈ V` and, if `coprime`, `gcd(η₁η₄, η₃η₅) = gcd(η₂, η₄η₅) = 1`.
fn check_eta(eta: [u64; 5], bound: u64, coprime_conditions: bool) -> Result<HeightBounds> {
    check_lemma_bound(bound)?;
    let hb = HeightBounds::new(eta, bound)?;
    let detail = || format!("η={eta:?}, B={bound}");
    if !hb.in_v() {
        return Err(rejected("Y₆ ≥ 1, Y₇ ≥ 1", detail()));
    }
    let [e1, e2, e3, e4, e5] = eta.map(|e| e as u128);
    if coprime_conditions {
        if !coprime(e1 * e4, e3 * e5) {
            return Err(rejected("gcd6", detail()));
        }
        if !coprime(e2, e4 * e5) {
            return Err(rejected("gcd7", detail()));
        }
    }
    Ok(hb)
}

/// `η₁η₂²η₃³η₅²η₆²`, the first coordinate before the height bound.
fn first_coord(eta: [u64; 5], eta6: u64) -> u128 {
    let [e1, e2, e3, _, e5] = eta.map(|e| e as u128);
    let e6 = eta6 as u128;
    e1 * e2 * e2 * e3 * e3 * e3 * e5 * e5 * e6 * e6
}

/// `η₁³η₂²η₃η₄²η₇²`.
fn second_coord(eta: [u64; 5], eta7: u64) -> u128 {
    let [e1, e2, e3, e4, _] = eta.map(|e| e as u128);
    let e7 = eta7 as u128;
    e1 * e1 * e1 * e2 * e2 * e3 * e4 * e4 * e7 * e7
}

fn check_eta6(eta: [u64; 5], eta6: u64, bound: u64) -> Result<()> {
    let detail = || format!("η={eta:?}, η₆={eta6}, B={bound}");
    if eta6 == 0 {
        return Err(Error::NonPositive(detail()));
    }
    if first_coord(eta, eta6) > bound as u128 {
        return Err(rejected("condition1", detail()));
    }
    let [e1, e2, _, e4, e5] = eta.map(|e| e as u128);
    if !coprime(eta6 as u128, e1 * e2 * e4 * e5) {
        return Err(rejected("gcd5", detail()));
    }
    Ok(())
}

fn check_instance(eta: [u64; 7], bound: u64) -> Result<HeightBounds> {
    if eta.contains(&0) {
        return Err(Error::NonPositive(format!("{eta:?}")));
    }
    let head = [eta[0], eta[1], eta[2], eta[3], eta[4]];
    check_lemma_bound(bound)?;
    let hb = HeightBounds::new(head, bound)?;
    let detail = || format!("η'={eta:?}, B={bound}");
    if !coprime((eta[0] * eta[3]) as u128, (eta[2] * eta[4]) as u128) {
        return Err(rejected("gcd6", detail()));
    }
    if !coprime(eta[1] as u128, (eta[3] * eta[4]) as u128) {
        return Err(rejected("gcd7", detail()));
    }
    check_eta6(head, eta[5], bound)?;
    if second_coord(head, eta[6]) > bound as u128 {
        return Err(rejected("condition2", detail()));
    }
    let [_, e2, e3, e4, e5, e6, _] = eta.map(|e| e as u128);
    if !coprime(eta[6] as u128, e2 * e3 * e4 * e5 * e6) {
        return Err(rejected("gcd4", detail()));
    }
    Ok(hb)
}

/// Which form of the last two height conditions a lattice count uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HeightForm {
    /// `|η₁η₂η₃η₅η₇α₁| ≤ B` and `|α₁α₄| ≤ B`.
    Original,
    /// `h(α₂/A₂, η₇/Y₇, η₆/Y₆) ≤ 1`.
    Replaced,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeCount {
    /// Triples `(α₁, α₂, α₄)` found, including any with `α₁ = 0`.
    pub count: u64,
    /// How many of them have `α₁ = 0` (these map outside the counting region).
    pub alpha1_zero: u64,
}

fn div_floor(a: i128, b: i128) -> i128 {
    a.div_euclid(b)
}

fn div_ceil(a: i128, b: i128) -> i128 {
    -(-a).div_euclid(b)
}

/// Brute-force count of `(α₁, α₂, α₄)` over a fixed `η'`: both torsor
/// equations, the chosen height conditions and `gcd1`–`gcd3`.
pub fn lattice_count(eta: [u64; 7], bound: u64, form: HeightForm) -> Result<LatticeCount> {
    check_instance(eta, bound)?;
    let [e1, e2, e3, e4, e5, e6, e7] = eta.map(|e| e as i128);
    let b = bound as i128;
    let e123 = e1 * e2 * e3;
    let a2cap = e123 * e4 * e5;
    let c1 = e1 * e1 * e2 * e4 * e4 * e7;
    let c2 = e2 * e3 * e3 * e5 * e5 * e6;
    let m1 = (e123 * e4 * e6) as u128;
    let m4 = (e123 * e5 * e7) as u128;
    let m2 = a2cap as u128;
    let mut out = LatticeCount {
        count: 0,
        alpha1_zero: 0,
    };
    let mut visit = |a1: i128, a2: i128, a4: i128| {
        if gcd_u128(a1.unsigned_abs(), m1) == 1
            && gcd_u128(a4.unsigned_abs(), m4) == 1
            && gcd_u128(a2.unsigned_abs(), m2) == 1
        {
            out.count += 1;
            if a1 == 0 {
                out.alpha1_zero += 1;
            }
        }
    };
    match form {
        HeightForm::Replaced => {
            let x0 = e1 * e2 * e2 * e3 * e3 * e3 * e5 * e5 * e6 * e6;
            let x1 = e1 * e1 * e1 * e2 * e2 * e3 * e4 * e4 * e7 * e7;
            // B t₆t₇, with t₆ = η₆/Y₆ and t₇ = η₇/Y₇
            let m = e6 * e7 * e123 * e123 * e4 * e5;
            let step = e123 * e6 * e7;
            // t₇|t₇ − t₆u₂| ≤ 1  ⟺  |x₁ − η₁η₂η₃η₆η₇α₂| ≤ B
            for a2 in div_ceil(x1 - b, step)..=div_floor(x1 + b, step) {
                let n1 = e6 * a2 - c1;
                if n1 % e5 != 0 {
                    continue;
                }
                let n4 = c2 + e7 * a2;
                if n4 % e4 != 0 {
                    continue;
                }
                // B A₂² (t₇ − t₆u₂)(t₆ + t₇u₂)
                let q = a2cap * a2cap * m + a2cap * a2 * (x1 - x0) - m * a2 * a2;
                if q.abs() > b * a2cap * a2cap {
                    continue;
                }
                visit(n1 / e5, a2, n4 / e4);
            }
        }
        HeightForm::Original => {
            let a1_max = b / (e123 * e5 * e7);
            for a1 in -a1_max..=a1_max {
                let n2 = c1 + e5 * a1;
                if n2 % e6 != 0 {
                    continue;
                }
                let a2 = n2 / e6;
                let n4 = c2 + e7 * a2;
                if n4 % e4 != 0 {
                    continue;
                }
                let a4 = n4 / e4;
                if (a1 * a4).abs() > b {
                    continue;
                }
                visit(a1, a2, a4);
            }
        }
    }
    Ok(out)
}

fn t6_of(eta: [u64; 5], eta6: u64, bound: u64) -> f64 {
    (first_coord(eta, eta6) as f64 / bound as f64).sqrt()
}

fn t7_of(eta: [u64; 5], eta7: u64, bound: u64) -> f64 {
    (second_coord(eta, eta7) as f64 / bound as f64).sqrt()
}

fn head(eta: [u64; 7]) -> [u64; 5] {
    [eta[0], eta[1], eta[2], eta[3], eta[4]]
}

fn omega(n: u64) -> u32 {
    distinct_primes(n).len() as u32
}

/// `(A₂/(η₄η₅)) g₁(η₇/Y₇, η₆/Y₆) θ(η')`.
pub fn inter_main_term(eta: [u64; 7], bound: u64) -> Result<f64> {
    let hb = check_instance(eta, bound)?;
    let h = head(eta);
    let g = density::g1(t7_of(h, eta[6], bound), t6_of(h, eta[5], bound))?;
    let theta = arithfun::theta(eta)?.to_f64();
    Ok(hb.a2 as f64 / (eta[3] * eta[4]) as f64 * g * theta)
}

/// `θ(η')` as a function of `η₇` for fixed `(η, η₆)`: `θ₁(η, η₆)` times the
/// product over `p | η₁`, `p ∤ η₂η₄η₇` of `1 − 1/(p − 1)`.
struct ThetaAlongEta7 {
    theta1: f64,
    /// Primes of `η₁` not dividing `η₂η₄`.
    free: Vec<u64>,
}

impl ThetaAlongEta7 {
    fn new(eta: [u64; 5], eta6: u64) -> Result<Self> {
        let theta1 = arithfun::theta1(eta, eta6)?.to_f64();
        let free = distinct_primes(eta[0])
            .into_iter()
            .filter(|&p| eta[1] % p != 0 && eta[3] % p != 0)
            .collect();
        Ok(ThetaAlongEta7 { theta1, free })
    }

    fn at(&self, eta7: u64) -> f64 {
        let mut v = self.theta1;
        for &p in &self.free {
            if eta7 % p != 0 {
                if p == 2 {
                    return 0.0;
                }
                v *= 1.0 - 1.0 / (p - 1) as f64;
            }
        }
        v
    }
}

/// `∑_{η₇}` of the lattice-count main terms for fixed `(η, η₆)`.
fn sum_main_over_eta7(eta: [u64; 5], eta6: u64, bound: u64, hb: &HeightBounds) -> Result<f64> {
    let theta = ThetaAlongEta7::new(eta, eta6)?;
    let t6 = t6_of(eta, eta6, bound);
    let [_, e2, e3, e4, e5] = eta.map(|e| e as u128);
    let p7 = e2 * e3 * e4 * e5 * eta6 as u128;
    let d7 = second_coord(eta, 1);
    let max7 = isqrt(bound as u128 / d7) as u64;
    let scale = hb.a2 as f64 / (eta[3] * eta[4]) as f64;
    let mut terms = Vec::with_capacity(max7 as usize);
    for e7 in 1..=max7 {
        if !coprime(e7 as u128, p7) {
            continue;
        }
        let th = theta.at(e7);
        if th == 0.0 {
            continue;
        }
        terms.push(scale * density::g1(t7_of(eta, e7, bound), t6)? * th);
    }
    Ok(neumaier(terms))
}

/// `N(η,η₆,B) / N(η,B)` parity strata.
fn parity_class(eta: [u64; 5]) -> String {
    let n = arithfun::in_parity_set(eta[0], eta[1], eta[3]);
    let m = arithfun::in_parity_set(eta[2], eta[1], eta[4]);
    format!("{}N,{}M", if n { "" } else { "!" }, if m { "" } else { "!" })
}

/// Brute-force lattice count over `η'` (replaced height conditions) against
/// `(A₂/(η₄η₅)) g₁(η₇/Y₇, η₆/Y₆) θ(η')`, normalized by
/// `2^{ω(η₃) + ω(η₁) + ω(η₁η₂η₃)}`.
pub fn check_lemma_inter(eta: [u64; 7], bound: u64) -> Result<LemmaReport> {
    let observed = lattice_count(eta, bound, HeightForm::Replaced)?;
    let main = inter_main_term(eta, bound)?;
    let e123 = eta[0] * eta[1] * eta[2];
    let scale = 2f64.powi((omega(eta[2]) + omega(eta[0]) + omega(e123)) as i32);
    let class = format!(
        "{},{}",
        parity_class(head(eta)),
        if eta[6] % 2 == 0 { "even η₇" } else { "odd η₇" }
    );
    Ok(LemmaReport::new(
        Lemma::Inter,
        format!(
            "η'={eta:?} B={bound} α₁=0:{}",
            observed.alpha1_zero
        ),
        class,
        main,
        observed.count as f64,
        scale,
    ))
}

fn sup_on_log_grid<F: Fn(f64) -> Result<f64>>(lo: f64, hi: f64, f: F) -> Result<f64> {
    let n = 256;
    let (a, b) = (lo.ln(), hi.ln());
    let mut best = 0.0f64;
    for i in 0..=n {
        let t = (a + (b - a) * i as f64 / n as f64).exp().clamp(lo, hi);
        best = best.max(f(t)?);
    }
    Ok(best)
}

/// Direct sum over `η₇` of the lattice-count main terms against
/// `(A₂Y₇/(η₄η₅)) g₂(η₆/Y₆; η, B) θ₁'(η) θ₂'(η, η₆)`, normalized by
/// `(A₂/(η₄η₅)) Y₇^{1/4} σ_{−1/4}(η₁⋯η₆) sup_{t₇Y₇ ≥ 1} g₁(t₇, η₆/Y₆)`.
pub fn check_sum_eta7(eta: [u64; 5], eta6: u64, bound: u64) -> Result<LemmaReport> {
    let hb = check_eta(eta, bound, true)?;
    check_eta6(eta, eta6, bound)?;
    let observed = sum_main_over_eta7(eta, eta6, bound, &hb)?;
    let t6 = t6_of(eta, eta6, bound);
    let (y7, a) = (hb.y7(), hb.a2 as f64 / (eta[3] * eta[4]) as f64);
    let g2 = density::g2(t6, eta, bound, QUAD_TOL)?.value;
    let main = a
        * y7
        * g2
        * arithfun::theta1_prime(eta)?.to_f64()
        * arithfun::theta2_prime(eta, eta6)?.to_f64();
    let sup = sup_on_log_grid(1.0 / y7, 1.0, |t7| density::g1(t7, t6))?;
    let prod = eta.iter().product::<u64>() * eta6;
    let scale = a * y7.powf(0.25) * sigma_minus(0.25, prod)? * sup;
    Ok(LemmaReport::new(
        Lemma::SumEta7,
        format!("η={eta:?} η₆={eta6} B={bound}"),
        parity_class(eta),
        main,
        observed,
        scale,
    ))
}

/// Direct double sum over `η₆`, `η₇` of the lattice-count main terms against
/// `ζ(2)⁻¹ (B/(η₁⋯η₅)) g₃(η, B) Θ(η)`, normalized by
/// `(A₂/(η₄η₅)) σ_{−1/4}(η₁⋯η₅) (Y₆^{3/4} Y₇ + Y₆ Y₇^{3/4})`, the combined
/// shape of the two summation errors.
pub fn check_sum_eta6(eta: [u64; 5], bound: u64) -> Result<LemmaReport> {
    let hb = check_eta(eta, bound, true)?;
    let [e1, e2, _, e4, e5] = eta.map(|e| e as u128);
    let p6 = e1 * e2 * e4 * e5;
    let max6 = isqrt(bound as u128 / first_coord(eta, 1)) as u64;
    let per6: Vec<f64> = (1..=max6)
        .into_par_iter()
        .filter(|&e6| coprime(e6 as u128, p6))
        .map(|e6| sum_main_over_eta7(eta, e6, bound, &hb))
        .collect::<Result<_>>()?;
    let observed = neumaier(per6);
    let g3 = density::g3(eta, bound, QUAD_TOL_2D)?.value;
    let prod = eta.iter().product::<u64>();
    let main = bound as f64 / prod as f64 * g3 * big_theta_f64(eta)? / ZETA2;
    let (y6, y7) = (hb.y6(), hb.y7());
    let a = hb.a2 as f64 / (eta[3] * eta[4]) as f64;
    let scale =
        a * sigma_minus(0.25, prod)? * (y6.powf(0.75) * y7 + y6 * y7.powf(0.75));
    Ok(LemmaReport::new(
        Lemma::SumEta6,
        format!("η={eta:?} B={bound}"),
        parity_class(eta),
        main,
        observed,
        scale,
    ))
}

/// Totals of the lattice-count oracle over every admissible `η'` at one
/// height bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InterAggregate {
    #[serde(rename = "B")]
    pub bound: u64,
    pub form: HeightForm,
    pub instances: u64,
    pub observed: u64,
    pub alpha1_zero: u64,
    pub main_term: f64,
    pub abs_residual: f64,
    /// `abs_residual / (B log²B)`.
    pub shape_ratio: f64,
    /// `#T(B)` from the torsor enumeration.
    pub torsor_count: u64,
}

impl InterAggregate {
    /// `observed − alpha1_zero = #T(B)`.
    pub fn consistent(&self) -> bool {
        self.observed - self.alpha1_zero == self.torsor_count
    }
}

/// Every `η'` satisfying the two first height conditions and `gcd4`–`gcd7`.
pub fn admissible_eta7(bound: u64) -> Result<Vec<[u64; 7]>> {
    check_lemma_bound(bound)?;
    let b = bound as u128;
    let mut out = Vec::new();
    for [e1, e2, e3, e4, e5] in eta_tuples(b, true) {
        let eta = [e1, e2, e3, e4, e5].map(|e| e as u64);
        let max6 = isqrt(b / first_coord(eta, 1)) as u64;
        let max7 = isqrt(b / second_coord(eta, 1)) as u64;
        for e6 in 1..=max6 {
            if !coprime(e6 as u128, e1 * e2 * e4 * e5) {
                continue;
            }
            for e7 in 1..=max7 {
                if coprime(e7 as u128, e2 * e3 * e4 * e5 * e6 as u128) {
                    out.push([eta[0], eta[1], eta[2], eta[3], eta[4], e6, e7]);
                }
            }
        }
    }
    Ok(out)
}

/// Runs the lattice-count oracle over every admissible `η'`.
pub fn aggregate_inter(bound: u64, form: HeightForm) -> Result<InterAggregate> {
    let all = admissible_eta7(bound)?;
    let per: Vec<(LatticeCount, f64)> = all
        .par_iter()
        .map(|&eta| Ok((lattice_count(eta, bound, form)?, inter_main_term(eta, bound)?)))
        .collect::<Result<_>>()?;
    let observed = per.iter().map(|(c, _)| c.count).sum();
    let alpha1_zero = per.iter().map(|(c, _)| c.alpha1_zero).sum();
    let main_term = neumaier(per.iter().map(|&(_, m)| m));
    let abs_residual = neumaier(per.iter().map(|&(c, m)| (c.count as f64 - m).abs()));
    let lb = (bound as f64).ln();
    Ok(InterAggregate {
        bound,
        form,
        instances: all.len() as u64,
        observed,
        alpha1_zero,
        main_term,
        abs_residual,
        shape_ratio: abs_residual / (bound as f64 * lb * lb),
        torsor_count: torsor::count(bound)?,
    })
}

/// Instance suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Arith,
    Inter,
    Sum7,
    Sum6,
}

/// The disjoint instance sets a suite is run on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Calibration,
    Validation,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub split: Split,
    pub gate: f64,
    pub max_normalized_residual: f64,
    /// Number of instances per class.
    pub classes: BTreeMap<String, usize>,
    pub pass: bool,
    pub reports: Vec<LemmaReport>,
}

impl Suite {
    pub fn gate(self) -> f64 {
        match self {
            Suite::Arith => ARITH_GATE,
            Suite::Inter => INTER_GATE,
            Suite::Sum7 => SUM7_GATE,
            Suite::Sum6 => SUM6_GATE,
        }
    }

    /// Classes that must all be present in a run of the suite.
    pub fn required_classes(self) -> &'static [&'static str] {
        match self {
            Suite::Arith => &[],
            Suite::Inter => &["N,M,odd η₇", "N,M,even η₇", "!N,M,odd η₇", "!N,M,even η₇"],
            Suite::Sum7 => &["N,M", "!N,M", "N,!M"],
            Suite::Sum6 => &["N,M", "!N,M", "N,!M"],
        }
    }
}

const SUITE_SEED: u64 = 0x5eed;

/// Shuffles `pool` deterministically, splits it alternately into the two
/// halves, and keeps up to `per_class` of each class in the requested half.
fn stratified<T: Clone, K: Ord + Clone>(
    mut pool: Vec<T>,
    split: Split,
    per_class: usize,
    class: impl Fn(&T) -> K,
) -> Vec<T> {
    pool.shuffle(&mut ChaCha8Rng::seed_from_u64(SUITE_SEED));
    let mut seen: BTreeMap<K, usize> = BTreeMap::new();
    let mut out = Vec::new();
    for x in pool {
        let k = class(&x);
        let n = seen.entry(k).or_insert(0);
        let mine = match split {
            Split::Calibration => *n % 2 == 0,
            Split::Validation => *n % 2 == 1,
        };
        if mine && *n / 2 < per_class {
            out.push(x.clone());
        }
        *n += 1;
    }
    out
}

fn small_etas(max: u64) -> Vec<[u64; 5]> {
    let mut out = Vec::new();
    for e1 in 1..=max {
        for e2 in 1..=max {
            for e3 in 1..=max {
                for e4 in 1..=max {
                    for e5 in 1..=max {
                        let eta = [e1, e2, e3, e4, e5];
                        if arithfun::eta_coprime(eta) {
                            out.push(eta);
                        }
                    }
                }
            }
        }
    }
    out
}

fn inter_instances(split: Split) -> Vec<([u64; 7], u64)> {
    let mut pool = Vec::new();
    for bound in [1_000u64, 10_000, 100_000] {
        for eta in small_etas(3) {
            for e6 in 1..=6 {
                for e7 in 1..=6 {
                    let full = [eta[0], eta[1], eta[2], eta[3], eta[4], e6, e7];
                    if check_instance(full, bound).is_ok() {
                        pool.push((full, bound));
                    }
                }
            }
        }
    }
    stratified(pool, split, 40, |&(eta, _)| {
        (arithfun::in_parity_set(eta[0], eta[1], eta[3]), eta[6] % 2)
    })
}

fn sum7_instances(split: Split) -> Vec<([u64; 5], u64, u64)> {
    let mut pool = Vec::new();
    for bound in [10_000u64, 100_000, 1_000_000] {
        for eta in small_etas(4) {
            if check_eta(eta, bound, true).is_err() {
                continue;
            }
            for e6 in 1..=8 {
                if check_eta6(eta, e6, bound).is_ok() {
                    pool.push((eta, e6, bound));
                }
            }
        }
    }
    stratified(pool, split, 30, |&(eta, _, _)| parity_class(eta))
}

fn sum6_instances(split: Split) -> Vec<([u64; 5], u64)> {
    let mut pool = Vec::new();
    for bound in [10_000u64, 100_000] {
        for eta in small_etas(4) {
            if check_eta(eta, bound, true).is_ok() {
                pool.push((eta, bound));
            }
        }
    }
    // the largest sums cost about B/(η₁η₂η₃)² terms each
    stratified(pool, split, 12, |&(eta, _)| parity_class(eta))
}

fn arith_instances(split: Split) -> Vec<(PsiKind, u64, u64)> {
    let range: Vec<u64> = match split {
        Split::Calibration => (1..=20).collect(),
        Split::Validation => (21..=50).collect(),
    };
    let mut out = Vec::new();
    for kind in [PsiKind::Plain, PsiKind::Prime] {
        for &a in &range {
            for &b in &range {
                out.push((kind, a, b));
            }
        }
    }
    out
}

const ARITH_XS: [u64; 3] = [100, 1_000, 10_000];

fn arith_reports(split: Split) -> Result<Vec<LemmaReport>> {
    let plain: Vec<Vec<LemmaReport>> = arith_instances(split)
        .par_iter()
        .map(|&(kind, a, b)| {
            let sigma = sigma_minus(0.5, arithfun::error_modulus(kind, a, b))?;
            Ok(sum_residuals(kind, a, b, &ARITH_XS, 0.5)?
                .into_iter()
                .map(|r| LemmaReport {
                    lemma: match kind {
                        PsiKind::Plain => Lemma::PsiSum,
                        PsiKind::Prime => Lemma::PsiPrimeSum,
                    },
                    instance: format!("a={a} b={b} X={}", r.x),
                    class: format!("{kind:?}").to_lowercase(),
                    main_term: r.main_term,
                    observed: r.observed,
                    residual: r.residual,
                    error_scale: sigma * (r.x as f64).sqrt(),
                    normalized_residual: r.normalized_residual,
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut out: Vec<LemmaReport> = plain.into_iter().flatten().collect();
    if split == Split::Validation {
        out.extend(weighted_reports()?);
    }
    Ok(out)
}

/// Weighted variants on a sparse subset of the validation pairs.
fn weighted_reports() -> Result<Vec<LemmaReport>> {
    let mut cases = Vec::new();
    for a in 21..=50u64 {
        for b in 21..=50u64 {
            if (a + b) % 11 != 0 {
                continue;
            }
            for kind in [PsiKind::Plain, PsiKind::Prime] {
                for parity in [Parity::All, Parity::Even] {
                    let even_ok = match kind {
                        PsiKind::Plain => b % 2 == 1,
                        PsiKind::Prime => a % 2 == 0 && b % 2 == 1,
                    };
                    if parity == Parity::Even && !even_ok {
                        continue;
                    }
                    for weight in [StdWeight::One, StdWeight::Reciprocal, StdWeight::InvSqrt] {
                        for &(t1, t2) in &[(1.0, 1e3), (250.0, 1e4)] {
                            cases.push((kind, parity, a, b, weight, t1, t2));
                        }
                    }
                }
            }
        }
    }
    cases
        .par_iter()
        .map(|&(kind, parity, a, b, weight, t1, t2)| {
            let r = weighted_sum_check(kind, parity, a, b, &weight, t1, t2, 0.5)?;
            Ok(LemmaReport {
                lemma: Lemma::WeightedSum,
                instance: format!(
                    "{kind:?} {parity:?} a={a} b={b} g={} I=[{t1}, {t2}]",
                    r.weight
                ),
                class: format!("{parity:?}").to_lowercase(),
                main_term: r.main_term,
                observed: r.observed,
                residual: r.residual,
                error_scale: r.error_scale,
                normalized_residual: r.normalized_residual,
            })
        })
        .collect()
}

/// Runs one split of an instance suite against its frozen gate.
pub fn run_suite(suite: Suite, split: Split) -> Result<SuiteReport> {
    let reports: Vec<LemmaReport> = match suite {
        Suite::Arith => arith_reports(split)?,
        Suite::Inter => inter_instances(split)
            .par_iter()
            .map(|&(eta, b)| check_lemma_inter(eta, b))
            .collect::<Result<_>>()?,
        Suite::Sum7 => sum7_instances(split)
            .par_iter()
            .map(|&(eta, e6, b)| check_sum_eta7(eta, e6, b))
            .collect::<Result<_>>()?,
        Suite::Sum6 => sum6_instances(split)
            .iter()
            .map(|&(eta, b)| check_sum_eta6(eta, b))
            .collect::<Result<_>>()?,
    };
    let mut classes = BTreeMap::new();
    for r in &reports {
        *classes.entry(r.class.clone()).or_insert(0) += 1;
    }
    let max_normalized_residual = reports
        .iter()
        .map(|r| r.normalized_residual)
        .fold(0.0, f64::max);
    let gate = suite.gate();
    let covered = suite
        .required_classes()
        .iter()
        .all(|c| classes.contains_key(*c));
    Ok(SuiteReport {
        suite,
        split,
        gate,
        max_normalized_residual,
        classes,
        pass: covered && max_normalized_residual <= gate && max_normalized_residual.is_finite(),
        reports,
    })
}

/// One rung of the height ladder.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LadderRow {
    #[serde(rename = "B")]
    pub bound: u64,
    /// Direct count, for rungs at or below the spot-check limit.
    pub n_direct: Option<u64>,
    /// `2 #T(B)`.
    pub n_torsor: u64,
    /// `N / (B log⁵B)`.
    pub c_fit: f64,
    /// `c_fit / c`.
    pub ratio: f64,
    /// `N` over the main term `ζ(2)⁻¹ (ω_∞/2) B ∑_{η ∈ V} Θ(η)/(η₁⋯η₅)`,
    /// which keeps the lower-order powers of `log B`.
    pub main_term_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LadderGate {
    /// Every direct spot check equals `2 #T(B)`.
    pub direct_agrees: bool,
    /// `c_fit` strictly increasing and never above `c`.
    pub increasing_toward_c: bool,
    /// `ratio ∈ [0.3, 3]` on every rung.
    pub within_band: bool,
    /// Either of the two above.
    pub shape: bool,
    /// `|ratio − 1|` non-increasing over the last three rungs.
    pub decreasing_gap: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeightLadder {
    pub rows: Vec<LadderRow>,
    pub c: f64,
    pub omega_infty: f64,
    pub picard_rank: u32,
    pub direct_limit: u64,
    pub pmax: u64,
    pub quad_tol: f64,
    pub gate: LadderGate,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitOptions {
    /// Rungs up to this bound are also counted directly.
    pub direct_limit: u64,
    pub pmax: u64,
    pub quad_tol: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            direct_limit: 10_000,
            pmax: 100_000,
            quad_tol: 1e-8,
        }
    }
}

/// `ζ(2)⁻¹ (ω_∞/2) B ∑_{η ∈ V} Θ(η)/(η₁⋯η₅)`.
pub fn final_main_term(bound: u64, omega_infty: f64) -> Result<f64> {
    check_bound(bound)?;
    let terms: Vec<f64> = eta_tuples(bound as u128, true)
        .par_iter()
        .map(|e| {
            let eta = e.map(|x| x as u64);
            Ok(big_theta_f64(eta)? / eta.iter().product::<u64>() as f64)
        })
        .collect::<Result<_>>()?;
    Ok(omega_infty / 2.0 / ZETA2 * bound as f64 * neumaier(terms))
}

pub fn fit_asymptotic(ladder: &[u64], opts: FitOptions) -> Result<HeightLadder> {
    if ladder.is_empty() {
        return Err(Error::Config("empty ladder".into()));
    }
    if ladder.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config(format!("ladder must be strictly increasing: {ladder:?}")));
    }
    if ladder[0] < 2 {
        return Err(Error::Config("ladder rungs must be at least 2".into()));
    }
    let peyre = density::peyre_constant(opts.pmax, opts.quad_tol)?;
    let c = peyre.c.value;
    let omega = peyre.omega_infty.value;
    let mut rows = Vec::new();
    for &bound in ladder {
        let n_torsor = 2 * torsor::count(bound)?;
        let n_direct = if bound <= opts.direct_limit {
            Some(surface::count_direct(bound)?.count)
        } else {
            None
        };
        let lb = (bound as f64).ln();
        let c_fit = n_torsor as f64 / (bound as f64 * lb.powi(5));
        rows.push(LadderRow {
            bound,
            n_direct,
            n_torsor,
            c_fit,
            ratio: c_fit / c,
            main_term_ratio: n_torsor as f64 / final_main_term(bound, omega)?,
        });
    }
    let gate = ladder_gate(&rows, c);
    Ok(HeightLadder {
        rows,
        c,
        omega_infty: omega,
        picard_rank: 6,
        direct_limit: opts.direct_limit,
        pmax: opts.pmax,
        quad_tol: opts.quad_tol,
        gate,
    })
}

fn ladder_gate(rows: &[LadderRow], c: f64) -> LadderGate {
    let direct_agrees = rows
        .iter()
        .all(|r| r.n_direct.is_none_or(|n| n == r.n_torsor));
    let increasing_toward_c = rows.windows(2).all(|w| w[0].c_fit < w[1].c_fit)
        && rows.iter().all(|r| r.c_fit <= c);
    let within_band = rows.iter().all(|r| (0.3..=3.0).contains(&r.ratio));
    let tail = &rows[rows.len().saturating_sub(3)..];
    let decreasing_gap = tail
        .windows(2)
        .all(|w| (w[1].ratio - 1.0).abs() <= (w[0].ratio - 1.0).abs());
    LadderGate {
        direct_agrees,
        increasing_toward_c,
        within_band,
        shape: increasing_toward_c || within_band,
        decreasing_gap,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_instances() {
        // gcd4: η₇ = 2 shares a factor with η₂ = 2
        assert!(check_lemma_inter([1, 2, 1, 1, 1, 1, 2], 1000).is_err());
        // condition2
        assert!(check_lemma_inter([1, 1, 1, 1, 1, 1, 40], 1000).is_err());
        assert!(check_sum_eta7([2, 1, 2, 1, 1], 1, 1000).is_err());
        assert!(check_sum_eta6([1, 1, 1, 1, 1], 0).is_err());
    }

    #[test]
    fn both_height_forms_agree() {
        for eta in [[1, 1, 1, 1, 1, 1, 1], [2, 1, 1, 1, 1, 3, 2], [1, 3, 1, 2, 1, 5, 1]] {
            let a = lattice_count(eta, 5000, HeightForm::Replaced).unwrap();
            let b = lattice_count(eta, 5000, HeightForm::Original).unwrap();
            assert_eq!(a, b, "{eta:?}");
        }
    }

    #[test]
    fn trivial_instance_close_to_main_term() {
        let r = check_lemma_inter([1; 7], 100_000).unwrap();
        assert!(r.normalized_residual <= INTER_GATE, "{r:?}");
        // g₁ ≍ (t₆t₇)^{-1/2} = B^{1/2}
        assert!(r.main_term > 300.0, "{r:?}");
        // α₁ = 0 only for η' = 1⁷
        assert!(r.instance.ends_with("α₁=0:1"), "{}", r.instance);
    }

    #[test]
    fn vanishing_theta_instance() {
        // η₁ even, η₂η₄η₇ odd
        let r = check_lemma_inter([2, 1, 1, 1, 1, 1, 1], 10_000).unwrap();
        assert_eq!(r.main_term, 0.0);
        assert!(r.observed <= 2.0 * r.error_scale, "{r:?}");
    }

    #[test]
    fn theta_along_eta7_matches_theta() {
        for eta in [[2, 1, 3, 1, 1], [6, 5, 1, 7, 1], [1, 1, 15, 2, 1]] {
            for e6 in [1, 5, 7] {
                let t = ThetaAlongEta7::new(eta, e6).unwrap();
                for e7 in 1..40 {
                    let full = [eta[0], eta[1], eta[2], eta[3], eta[4], e6, e7];
                    let exact = arithfun::theta(full).unwrap().to_f64();
                    assert!((t.at(e7) - exact).abs() < 1e-15, "{full:?}");
                }
            }
        }
    }

    #[test]
    fn odd_eta7_vanish_outside_parity_set() {
        let eta = [2, 1, 1, 1, 1];
        assert!(!arithfun::in_parity_set(2, 1, 1));
        let t = ThetaAlongEta7::new(eta, 1).unwrap();
        assert!((1..50).step_by(2).all(|e7| t.at(e7) == 0.0));
        assert!(t.at(2) > 0.0);
    }

    #[test]
    fn ladder_gate_logic() {
        let row = |c_fit: f64| LadderRow {
            bound: 10,
            n_direct: None,
            n_torsor: 0,
            c_fit,
            ratio: c_fit,
            main_term_ratio: 1.0,
        };
        let g = ladder_gate(&[row(0.2), row(0.5), row(0.9)], 1.0);
        assert!(g.increasing_toward_c && !g.within_band && g.shape && g.decreasing_gap);
        let g = ladder_gate(&[row(5.0), row(4.0), row(2.0)], 1.0);
        assert!(!g.shape && g.decreasing_gap);
    }

    #[test]
    fn stratified_split_is_disjoint() {
        let pool: Vec<u32> = (0..100).collect();
        let a = stratified(pool.clone(), Split::Calibration, 100, |x| x % 3);
        let b = stratified(pool, Split::Validation, 100, |x| x % 3);
        assert!(a.iter().all(|x| !b.contains(x)));
        assert_eq!(a.len() + b.len(), 100);
    }
}
