//! The leading constant: the real density `ω_∞` through the `h`/`g₁`/`g₂`/`g₃`
//! chain, the local densities `ω_p` and their Euler product, the polytope
//! volume, and the assembled constant.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arithfun::{big_theta, ZETA2};
use crate::error::{Error, Result};
use crate::factor::{is_prime, primes_up_to};
use crate::polytope::{self, Affine};
use crate::quad::{self, QuadResult};
use crate::rational::ExactRational;
use crate::torsor::HeightBounds;

/// A floating-point value with an absolute error bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl From<QuadResult> for Estimate {
    fn from(r: QuadResult) -> Self {
        Estimate { value: r.value, error: r.error }
    }
}

/// A Monte Carlo mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

impl McEstimate {
    /// Distance from `x` in standard errors.
    pub fn z_score(&self, x: f64) -> f64 {
        (self.mean - x).abs() / self.std_error
    }
}

/// `max{t₆, t₇, t₇|t₇ − t₆u₂|, |t₇ − t₆u₂||t₆ + t₇u₂|}`.
pub fn h(u2: f64, t7: f64, t6: f64) -> f64 {
    let d = t7 - t6 * u2;
    t6.max(t7).max(t7 * d.abs()).max((d * (t6 + t7 * u2)).abs())
}

fn bisect<F: Fn(f64) -> bool>(mut inside: f64, mut outside: f64, pred: F) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (inside + outside);
        if mid == inside || mid == outside {
            break;
        }
        if pred(mid) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    0.5 * (inside + outside)
}

/// `∫_{h(u₂, t₇, t₆) ≤ 1} du₂` in closed form.
///
/// With `v = u₂ − t₇/t₆`, `P = t₆t₇` and `S = t₆² + t₇²` the conditions read
/// `P|v| ≤ 1` and `|v (P v + S)| ≤ 1`. The second is `[v₋, v₊]` minus the open
/// interval `(w₋, w₊)` where `P v² + S v + 1 < 0` (present when
/// `S² − 4P > 0`). Every length below is written without cancellation, so the
/// result stays accurate as `P → 0` and as `S² − 4P → 0`.
pub fn g1(t7: f64, t6: f64) -> Result<f64> {
    if !(t6 > 0.0 && t7 > 0.0) {
        return Err(Error::NonPositive(format!("t7={t7}, t6={t6}")));
    }
    if t6 > 1.0 || t7 > 1.0 {
        return Ok(0.0);
    }
    let p = t6 * t7;
    let s = t6 * t6 + t7 * t7;
    let outer = (s * s + 4.0 * p).sqrt();
    let inner = (s * s - 4.0 * p).max(0.0).sqrt();
    let has_hole = s * s - 4.0 * p > 0.0;
    // v₊ = 2/(S + √(S² + 4P)), w₊ = −2/(S + √(S² − 4P)); both lie inside
    // [−1/P, 1/P] since S ≥ 2P
    let v_plus = 2.0 / (s + outer);
    // v₋ + 1/P and w₋ + 1/P, rationalized
    let v_minus_clear = 2.0 * (1.0 - s - p) / (p * (2.0 - s + outer));
    let w_minus_clear = if 2.0 - s + inner > 0.0 {
        2.0 * (1.0 - s + p) / (p * (2.0 - s + inner))
    } else {
        // t₆ = t₇ = 1: w₋ = −1/P exactly
        0.0
    };
    let total = if has_hole {
        let w_plus = -2.0 / (s + inner);
        let right = v_plus - w_plus;
        let left = if v_minus_clear >= 0.0 {
            // w₋ − v₋
            4.0 / (outer + inner)
        } else {
            w_minus_clear.max(0.0)
        };
        right + left
    } else if v_minus_clear >= 0.0 {
        outer / p
    } else {
        v_plus + 1.0 / p
    };
    Ok(total)
}

/// `g₁` by sampling `h ≤ 1` on a uniform grid of `grid` points and refining
/// each change of the predicate by bisection. Uses only `h` and the linear
/// condition `t₇|t₇ − t₆u₂| ≤ 1`, which confines `u₂` to within `1/(t₆t₇)` of
/// `t₇/t₆`.
pub fn g1_by_sampling(t7: f64, t6: f64, grid: usize) -> Result<f64> {
    if !(t6 > 0.0 && t7 > 0.0) {
        return Err(Error::NonPositive(format!("t7={t7}, t6={t6}")));
    }
    let center = t7 / t6;
    let inside = |v: f64| h(center + v, t7, t6) <= 1.0;
    let reach = 1.0 / (t6 * t7) + 1.0;
    let (lo, hi) = (-reach, reach);
    let n = grid.max(2);
    let step = (hi - lo) / n as f64;
    let mut total = 0.0;
    let mut start: Option<f64> = None;
    let mut prev_x = lo;
    let mut prev_in = inside(lo);
    if prev_in {
        start = Some(lo);
    }
    for i in 1..=n {
        let x = lo + step * i as f64;
        let now = inside(x);
        if now != prev_in {
            let edge = if now { bisect(x, prev_x, inside) } else { bisect(prev_x, x, inside) };
            if now {
                start = Some(edge);
            } else if let Some(s) = start.take() {
                total += edge - s;
            }
        }
        prev_in = now;
        prev_x = x;
    }
    if let Some(s) = start {
        total += hi - s;
    }
    Ok(total)
}

/// `∫∫ g₁` over `t₆ ∈ [a6, 1]`, `t₇ ∈ [a7, 1]`, with `t = s²` on both axes.
fn g1_double_integral(a7: f64, a6: f64, tol: f64) -> Result<QuadResult> {
    let r = quad::integrate_2d(
        |s6, s7| 4.0 * s6 * s7 * g1(s7 * s7, s6 * s6).unwrap_or(0.0),
        (a6.sqrt(), 1.0),
        |_| (a7.sqrt(), 1.0),
        tol,
    )?;
    Ok(r)
}

fn bounds_in_v(eta: [u64; 5], bound: u64) -> Result<HeightBounds> {
    let hb = HeightBounds::new(eta, bound)?;
    if !hb.in_v() {
        return Err(Error::OutsideDomain(format!("η={eta:?} has Y₆ < 1 or Y₇ < 1 at B={bound}")));
    }
    Ok(hb)
}

/// `g₂(t₆; η, B) = ∫_{t₇Y₇ ≥ 1} g₁(t₇, t₆) dt₇`.
pub fn g2(t6: f64, eta: [u64; 5], bound: u64, tol: f64) -> Result<Estimate> {
    let hb = bounds_in_v(eta, bound)?;
    if !(t6 > 0.0) {
        return Err(Error::NonPositive(format!("t6={t6}")));
    }
    if t6 > 1.0 {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let a = 1.0 / hb.y7();
    let r = quad::integrate(|s| 2.0 * s * g1(s * s, t6).unwrap_or(0.0), a.sqrt(), 1.0, tol, 0.0)?;
    Ok(r.into())
}

/// `g₃(η, B) = ∫_{t₆Y₆ ≥ 1} g₂(t₆; η, B) dt₆`.
pub fn g3(eta: [u64; 5], bound: u64, tol: f64) -> Result<Estimate> {
    let hb = bounds_in_v(eta, bound)?;
    Ok(g1_double_integral(1.0 / hb.y7(), 1.0 / hb.y6(), tol)?.into())
}

/// `ω_∞ = 4 ∫∫ g₁` over `(0, 1]²`.
pub fn omega_infty(tol: f64) -> Result<Estimate> {
    if !(tol > 0.0) {
        return Err(Error::Config(format!("tolerance must be positive, got {tol}")));
    }
    let r = g1_double_integral(0.0, 0.0, tol / 4.0)?;
    Ok(Estimate { value: 4.0 * r.value, error: 4.0 * r.error })
}

/// Which cutoff of `g₃` is removed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Cutoff {
    T6,
    T7,
}

/// The measure of `{h ≤ 1, t₆ < 1/z}` (or `t₇ < 1/z`): what removing one
/// cutoff of `g₃` adds back.
pub fn cutoff_measure(axis: Cutoff, z: f64, tol: f64) -> Result<Estimate> {
    if !(z >= 1.0) {
        return Err(Error::OutsideDomain(format!("cutoff parameter {z} < 1")));
    }
    let edge = (1.0 / z).sqrt();
    let f = |s6: f64, s7: f64| 4.0 * s6 * s7 * g1(s7 * s7, s6 * s6).unwrap_or(0.0);
    let r = match axis {
        Cutoff::T6 => quad::integrate_2d(f, (0.0, edge), |_| (0.0, 1.0), tol)?,
        Cutoff::T7 => quad::integrate_2d(f, (0.0, 1.0), |_| (0.0, edge), tol)?,
    };
    Ok(r.into())
}

const MC_BATCH: u64 = 1 << 16;

/// Runs `samples` draws in fixed-size batches, each on its own ChaCha stream,
/// and reduces `(Σx, Σx²)` in batch order so the result does not depend on
/// the thread count.
fn monte_carlo<F>(samples: u64, seed: u64, draw: F) -> McEstimate
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    let batches = samples.div_ceil(MC_BATCH);
    let sums: Vec<(f64, f64)> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let n = MC_BATCH.min(samples - b * MC_BATCH);
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..n {
                let x = draw(&mut rng);
                s += x;
                s2 += x * x;
            }
            (s, s2)
        })
        .collect();
    let (s, s2) = sums.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    let n = samples as f64;
    let mean = s / n;
    let var = (s2 / n - mean * mean).max(0.0) * n / (n - 1.0).max(1.0);
    McEstimate { mean, std_error: (var / n).sqrt(), samples, seed }
}

/// `ω_∞` straight from its definition as
/// `2 ∫∫∫ dx₀ dx₂ dx₃ / (x₀x₂)` over `0 < x₀ ≤ 1`, `x₂ > 0`, `x₂² ≤ x₀`,
/// `|x₃| ≤ 1`, `|x₀² + x₂² + x₀x₃||x₃| ≤ x₀x₂`, by importance sampling
/// `x₀ = U⁸`, `x₂ = √x₀ V⁴`, `x₃` uniform.
pub fn omega_infty_monte_carlo(samples: u64, seed: u64) -> McEstimate {
    monte_carlo(samples, seed, |rng| {
        let u: f64 = 1.0 - rng.random::<f64>();
        let v: f64 = 1.0 - rng.random::<f64>();
        let x3: f64 = 2.0 * rng.random::<f64>() - 1.0;
        let x0 = u.powi(8);
        let x2 = x0.sqrt() * v.powi(4);
        if ((x0 * x0 + x2 * x2 + x0 * x3) * x3).abs() > x0 * x2 {
            return 0.0;
        }
        // 2/(x₀x₂) divided by the sampling density
        // (1/8) x₀^{-7/8} · (1/4) x₀^{-1/8} x₂^{-3/4} · (1/2)
        2.0 * 64.0 * x2.powf(-0.25)
    })
}

/// `ω_p = 1 + 6/p + 1/p²`.
pub fn omega_p(p: u64) -> Result<ExactRational> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(ExactRational::new(p * p + 6 * p + 1, p * p))
}

/// `(1 − 1/p)⁶ ω_p`.
pub fn euler_factor(p: u64) -> Result<ExactRational> {
    Ok(ExactRational::new(p - 1, p).pow(6) * omega_p(p)?)
}

fn log_euler_factor(p: u64) -> f64 {
    let t = 1.0 / p as f64;
    6.0 * (-t).ln_1p() + (t * (6.0 + t)).ln_1p()
}

/// Partial Euler product `∏_{p ≤ pmax} (1 − 1/p)⁶ ω_p` and a bound on its
/// distance to the full product.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EulerProduct {
    pub pmax: u64,
    pub value: f64,
    /// Bound on `|log(full) − log(partial)|`.
    pub log_tail_bound: f64,
    /// Bound on `|full − partial|`.
    pub tail_bound: f64,
}

/// For `p ≥ 11`, `−20/p² ≤ log((1 − 1/p)⁶ ω_p) < 0`, and
/// `∑_{p > P} 1/p² ≤ ∑_{odd n > P} 1/n² ≤ 1/(2(P − 1))`.
pub fn euler_product(pmax: u64) -> Result<EulerProduct> {
    if pmax < 2 {
        return Err(Error::OutsideDomain(format!("pmax={pmax} < 2")));
    }
    // compensated sum of logs
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for p in primes_up_to(pmax) {
        let x = log_euler_factor(p);
        let t = sum + x;
        comp += if sum.abs() >= x.abs() { (sum - t) + x } else { (x - t) + sum };
        sum = t;
    }
    let value = (sum + comp).exp();
    let start = pmax.max(10);
    let small: f64 = primes_up_to(start).into_iter().filter(|&p| p > pmax).map(|p| log_euler_factor(p).abs()).sum();
    let log_tail_bound = small + 10.0 / (start as f64 - 1.0);
    Ok(EulerProduct { pmax, value, log_tail_bound, tail_bound: value * log_tail_bound.exp_m1() })
}

/// `∏_{p ≤ pmax} (1 − 1/p)⁶ ω_p` exactly.
pub fn euler_product_exact(pmax: u64) -> Result<ExactRational> {
    primes_up_to(pmax).into_iter().map(euler_factor).product()
}

/// `{t ∈ ℝ⁵ : t ≥ 0, t₁ + 2t₂ + 3t₃ + 2t₅ ≤ 1, 3t₁ + 2t₂ + t₃ + 2t₄ ≤ 1}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Polytope5 {
    /// Rows `a` of the constraints `a · t ≤ 1`, besides `t ≥ 0`.
    pub rows: Vec<[i64; 5]>,
}

impl Default for Polytope5 {
    fn default() -> Self {
        Polytope5 { rows: vec![[1, 2, 3, 0, 2], [3, 2, 1, 2, 0]] }
    }
}

impl Polytope5 {
    pub fn constraints(&self) -> Vec<Affine> {
        let mut cs: Vec<Affine> = (0..5)
            .map(|i| {
                let mut c = [0i64; 5];
                c[i] = 1;
                Affine::from_i64(&c, 0)
            })
            .collect();
        cs.extend(self.rows.iter().map(|r| Affine::from_i64(&r.map(|x| -x), 1)));
        cs
    }

    pub fn contains(&self, t: &[f64; 5]) -> bool {
        t.iter().all(|&x| x >= 0.0) && self.rows.iter().all(|r| r.iter().zip(t).map(|(&a, &x)| a as f64 * x).sum::<f64>() <= 1.0)
    }

    /// Per-coordinate upper bounds implied by the rows.
    pub fn bounding_box(&self) -> [ExactRational; 5] {
        std::array::from_fn(|i| {
            let best = self.rows.iter().map(|r| r[i]).max().unwrap_or(0);
            ExactRational::new(1, best.max(1))
        })
    }

    pub fn volume(&self) -> Result<ExactRational> {
        polytope::volume(5, &self.constraints())
    }
}

/// The volume of [`Polytope5`], computed exactly.
pub fn polytope_alpha() -> ExactRational {
    Polytope5::default().volume().expect("the polytope is bounded")
}

/// Hit-or-miss estimate of the volume of [`Polytope5`] over its bounding box.
pub fn polytope_alpha_monte_carlo(samples: u64, seed: u64) -> McEstimate {
    let poly = Polytope5::default();
    let bx = poly.bounding_box().map(|b| b.to_f64());
    let box_volume: f64 = bx.iter().product();
    monte_carlo(samples, seed, |rng| {
        let t: [f64; 5] = std::array::from_fn(|i| bx[i] * rng.random::<f64>());
        if poly.contains(&t) {
            box_volume
        } else {
            0.0
        }
    })
}

/// Local sums at one prime.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalFactorReport {
    pub p: u64,
    /// `∑_k Θ(p^k)/p^{|k|}`, grouped by which exponents are positive.
    pub theta_sum: ExactRational,
    /// `(1 − 1/p²)⁻¹ (1 − 1/p)(1 + 6/p + 1/p²)`.
    pub closed_form: ExactRational,
    /// `∑_{k ∈ {0,1}⁵} (Θ∗μ)(p^k)/p^{|k|}`.
    pub convolved_sum: ExactRational,
    /// `(Θ∗μ)(p^k) = 0` for every `k ∈ {0,1,2}⁵ \ {0,1}⁵`.
    pub convolution_vanishes: bool,
    pub theta_sum_matches: bool,
    /// `convolved_sum = (1 − 1/p²)⁻¹ (1 − 1/p)⁶ ω_p`.
    pub convolved_matches: bool,
}

impl LocalFactorReport {
    pub fn holds(&self) -> bool {
        self.theta_sum_matches && self.convolved_matches && self.convolution_vanishes
    }
}

fn theta_at(p: u64, k: [u32; 5]) -> Result<ExactRational> {
    big_theta(k.map(|e| p.pow(e)))
}

/// `(Θ∗μ)(p^k)` for exponent vector `k`.
fn theta_mu_at(p: u64, k: [u32; 5]) -> Result<ExactRational> {
    let mut total = ExactRational::zero();
    for mask in 0u32..32 {
        let mut kk = k;
        let mut ok = true;
        for (i, e) in kk.iter_mut().enumerate() {
            if mask >> i & 1 == 1 {
                if *e == 0 {
                    ok = false;
                    break;
                }
                *e -= 1;
            }
        }
        if !ok {
            continue;
        }
        let term = theta_at(p, kk)?;
        total = if mask.count_ones() % 2 == 0 { total + term } else { total - term };
    }
    Ok(total)
}

pub fn local_factor_report(p: u64) -> Result<LocalFactorReport> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let pr = |n: u64, d: u64| ExactRational::new(n, d);
    // each positive slot contributes ∑_{k≥1} p^{-k} = 1/(p − 1)
    let geom = pr(1, p - 1);
    let mut theta_sum = ExactRational::zero();
    let mut convolved_sum = ExactRational::zero();
    for mask in 0u32..32 {
        let k: [u32; 5] = std::array::from_fn(|i| mask >> i & 1);
        theta_sum = theta_sum + theta_at(p, k)? * geom.pow(mask.count_ones() as i32);
        convolved_sum = convolved_sum + theta_mu_at(p, k)? * pr(1, p).pow(mask.count_ones() as i32);
    }
    let mut convolution_vanishes = true;
    for code in 0..243u32 {
        let k: [u32; 5] = std::array::from_fn(|i| code / 3u32.pow(i as u32) % 3);
        if k.contains(&2) && !theta_mu_at(p, k)?.is_zero() {
            convolution_vanishes = false;
        }
    }
    let dag_inv = pr(p * p, p * p - 1);
    let star = pr(p - 1, p);
    let omega = omega_p(p)?;
    let closed_form = dag_inv.clone() * star.clone() * omega.clone();
    let convolved_target = dag_inv * star.pow(6) * omega;
    Ok(LocalFactorReport {
        p,
        theta_sum_matches: theta_sum == closed_form,
        convolved_matches: convolved_sum == convolved_target,
        theta_sum,
        closed_form,
        convolved_sum,
        convolution_vanishes,
    })
}

/// The local sum of `Θ` at `p` equals `(1 − 1/p²)⁻¹ (1 − 1/p)(1 + 6/p + 1/p²)`
/// exactly, and the Möbius-convolved local sum matches `(1 − 1/p)⁶ ω_p` up to
/// the local factor of `ζ(2)`.
pub fn local_factor_identity(p: u64) -> Result<bool> {
    Ok(local_factor_report(p)?.holds())
}

/// `c = α(Ṽ) β(Ṽ) ω_∞ ∏_p (1 − 1/p)⁶ ω_p` with its ingredients.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeyreBreakdown {
    pub alpha_tilde: ExactRational,
    pub beta: ExactRational,
    /// Volume of [`Polytope5`]; equals `2 α(Ṽ)`.
    pub polytope_alpha: ExactRational,
    pub omega_infty: Estimate,
    pub euler_product: EulerProduct,
    pub c: Estimate,
    /// `ζ(2)⁻¹ (ω_∞/2) · polytope_alpha · ζ(2) ∏_p (1 − 1/p)⁶ ω_p`.
    pub c_from_count: f64,
    pub assemblies_agree: bool,
    pub quad_tol: f64,
}

pub fn peyre_constant(pmax: u64, quad_tol: f64) -> Result<PeyreBreakdown> {
    let alpha_tilde = ExactRational::new(1, 4320);
    let beta = ExactRational::one();
    let polytope_alpha = polytope_alpha();
    let omega = omega_infty(quad_tol)?;
    let euler = euler_product(pmax)?;
    let scale = (alpha_tilde.clone() * beta.clone()).to_f64();
    let c = Estimate {
        value: scale * omega.value * euler.value,
        error: scale * (omega.error * euler.value + omega.value * euler.tail_bound + omega.error * euler.tail_bound),
    };
    let c_from_count = omega.value / 2.0 * polytope_alpha.to_f64() * ZETA2 * euler.value / ZETA2;
    let assemblies_agree = (c_from_count - c.value).abs() <= 1e-12 * c.value.abs();
    Ok(PeyreBreakdown {
        alpha_tilde,
        beta,
        polytope_alpha,
        omega_infty: omega,
        euler_product: euler,
        c,
        c_from_count,
        assemblies_agree,
        quad_tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_examples() {
        assert_eq!(h(0.0, 1.0, 1.0), 1.0);
        assert_eq!(h(1.0, 1.0, 1.0), 1.0);
        assert_eq!(h(2.0, 1.0, 1.0), 3.0);
    }

    #[test]
    fn g1_examples() {
        assert!((g1(1.0, 1.0).unwrap() - 2f64.sqrt()).abs() < 1e-14);
        assert_eq!(g1(2.0, 0.5).unwrap(), 0.0);
        assert!(g1(0.0, 0.5).is_err());
        assert!((g1_by_sampling(1.0, 1.0, 10_000).unwrap() - 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn omega_p_examples() {
        assert_eq!(omega_p(2).unwrap(), ExactRational::new(17, 4));
        assert_eq!(omega_p(3).unwrap(), ExactRational::new(28, 9));
        assert_eq!(omega_p(5).unwrap(), ExactRational::new(56, 25));
        assert_eq!(omega_p(4), Err(Error::NotPrime(4)));
        assert_eq!(euler_factor(2).unwrap(), ExactRational::new(17, 256));
    }

    #[test]
    fn euler_factor_log_bound() {
        for p in primes_up_to(100_000).into_iter().filter(|&p| p >= 11) {
            let l = log_euler_factor(p);
            let t = 1.0 / p as f64;
            assert!(l < 0.0 && l >= -20.0 * t * t, "p={p}");
        }
    }

    #[test]
    fn euler_product_paths_agree() {
        let exact = euler_product_exact(100).unwrap().to_f64();
        let float = euler_product(100).unwrap().value;
        assert!((exact - float).abs() < 1e-14 * exact);
    }

    #[test]
    fn local_factor_small_primes() {
        assert!(local_factor_identity(2).unwrap());
        assert!(local_factor_identity(3).unwrap());
        assert_eq!(local_factor_identity(6), Err(Error::NotPrime(6)));
    }

    #[test]
    fn polytope_volume() {
        assert_eq!(polytope_alpha(), ExactRational::new(1, 2160));
        assert_eq!(polytope_alpha(), ExactRational::new(2, 1) * ExactRational::new(1, 4320));
        let bx = Polytope5::default().bounding_box();
        let vol: ExactRational = bx.into_iter().product();
        assert_eq!(vol, ExactRational::new(1, 72));
    }
}
