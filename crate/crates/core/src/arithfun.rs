//! Multiplicative functions, their Möbius convolutions and summation
//! checks, and the θ/Θ densities used by the torsor count.
//!
//! All the φ-type functions factor through the radical of their argument,
//! so internally everything is computed from sorted lists of distinct primes.
//! Products such as `η₁η₂η₃η₄η₅` are never formed; their prime sets are
//! merged instead.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::{distinct_primes, distinct_primes_of, gcd, primes_up_to, FactoredInteger};
use crate::quad;
use crate::rational::ExactRational;

/// `ζ(2) = π²/6`.
pub const ZETA2: f64 = std::f64::consts::PI * std::f64::consts::PI / 6.0;

type Primes = Vec<u64>;

fn check_positive(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::NonPositive(n.to_string()))
    } else {
        Ok(())
    }
}

fn intersect(a: &[u64], b: &[u64]) -> Primes {
    a.iter()
        .copied()
        .filter(|p| b.binary_search(p).is_ok())
        .collect()
}

fn union(a: &[u64], b: &[u64]) -> Primes {
    let mut v: Primes = a.iter().chain(b).copied().collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn divides(p: u64, set: &[u64]) -> bool {
    set.binary_search(&p).is_ok()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Local {
    /// `1 - 1/p`
    Star,
    /// `1 - 1/(p-1)`, skipping `p = 2`
    Circ,
    /// `1 - 1/p²`
    Dag,
    /// `1 + 1/(p(p-2))`, skipping `p = 2`
    Flat,
}

impl Local {
    fn factor(self, p: u64) -> Option<(u64, u64)> {
        match self {
            Local::Star => Some((p - 1, p)),
            Local::Circ if p == 2 => None,
            Local::Circ => Some((p - 2, p - 1)),
            Local::Dag => Some((p * p - 1, p * p)),
            Local::Flat if p == 2 => None,
            Local::Flat => Some(((p - 1) * (p - 1), p * (p - 2))),
        }
    }
}

fn local_product(ps: &[u64], kind: Local) -> ExactRational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for &p in ps {
        if let Some((n, d)) = kind.factor(p) {
            num *= n;
            den *= d;
        }
    }
    ExactRational::new(num, den)
}

fn local_product_f64(ps: &[u64], kind: Local) -> f64 {
    ps.iter()
        .filter_map(|&p| kind.factor(p))
        .map(|(n, d)| n as f64 / d as f64)
        .product()
}

/// `∏_{p | n} (1 - 1/p)`.
pub fn phi_star(n: u64) -> Result<ExactRational> {
    check_positive(n)?;
    Ok(local_product(&distinct_primes(n), Local::Star))
}

/// `∏_{p | n, p ≠ 2} (1 - 1/(p-1))`.
pub fn phi_circ(n: u64) -> Result<ExactRational> {
    check_positive(n)?;
    Ok(local_product(&distinct_primes(n), Local::Circ))
}

/// `∏_{p | n} (1 - 1/p²)`.
pub fn phi_dag(n: u64) -> Result<ExactRational> {
    check_positive(n)?;
    Ok(local_product(&distinct_primes(n), Local::Dag))
}

/// `∏_{p | n, p ≠ 2} (1 + 1/(p(p-2)))`.
pub fn phi_flat(n: u64) -> Result<ExactRational> {
    check_positive(n)?;
    Ok(local_product(&distinct_primes(n), Local::Flat))
}

pub fn mobius(n: u64) -> Result<i8> {
    let f = FactoredInteger::new(n)?;
    if !f.is_squarefree() {
        return Ok(0);
    }
    Ok(if f.omega() % 2 == 0 { 1 } else { -1 })
}

/// `σ_{-δ}(n) = ∑_{k | n} k^{-δ}` for `0 < δ ≤ 1`.
pub fn sigma_minus(delta: f64, n: u64) -> Result<f64> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::OutsideDomain(format!(
            "delta must lie in (0, 1], got {delta}"
        )));
    }
    let f = FactoredInteger::new(n)?;
    Ok(f.factors
        .iter()
        .map(|&(p, e)| {
            (0..=e)
                .map(|k| (p as f64).powf(-delta * k as f64))
                .sum::<f64>()
        })
        .product())
}

/// Squarefree divisors of the integer with the given prime set, with `μ`.
fn squarefree_divisors(ps: &[u64]) -> Vec<(u64, i8)> {
    let mut out = vec![(1u64, 1i8)];
    for &p in ps {
        let len = out.len();
        for i in 0..len {
            let (d, m) = out[i];
            out.push((d * p, -m));
        }
    }
    out
}

/// `ψ_{a,b}(n)`: `φ°(gcd(a,n))⁻¹` when `gcd(n,b) = 1`, else 0.
pub fn psi(a: u64, b: u64, n: u64) -> Result<ExactRational> {
    check_positive(a)?;
    check_positive(b)?;
    check_positive(n)?;
    if gcd(n, b) != 1 {
        return Ok(ExactRational::zero());
    }
    Ok(local_product(&distinct_primes(gcd(a, n)), Local::Circ).recip())
}

/// `ψ'_{a,b}(n)`: `φ°(gcd(a,n))⁻¹ φ*(n) φ*(gcd(a,n))⁻¹` when `gcd(n,b) = 1`, else 0.
pub fn psi_prime(a: u64, b: u64, n: u64) -> Result<ExactRational> {
    check_positive(a)?;
    check_positive(b)?;
    check_positive(n)?;
    if gcd(n, b) != 1 {
        return Ok(ExactRational::zero());
    }
    let g = distinct_primes(gcd(a, n));
    let v = local_product(&distinct_primes(n), Local::Star)
        / (local_product(&g, Local::Circ) * local_product(&g, Local::Star));
    Ok(v)
}

/// Mean value `Ψ(a,b) = φ*(b) φ♭(a) / φ♭(gcd(a,b))` of `ψ_{a,b}`.
pub fn psi_density(a: u64, b: u64) -> Result<ExactRational> {
    check_positive(a)?;
    check_positive(b)?;
    Ok(phi_star(b)? * phi_flat(a)? / phi_flat(gcd(a, b))?)
}

/// A rational multiple of an integer power of `ζ(2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZetaScaled {
    pub cofactor: ExactRational,
    pub zeta2_power: i32,
}

impl ZetaScaled {
    pub fn to_f64(&self) -> f64 {
        self.cofactor.to_f64() * ZETA2.powi(self.zeta2_power)
    }
}

/// Mean value `Ψ'(a,b) = Ψ(a,b) ζ(2)⁻¹ / φ†(ab)` of `ψ'_{a,b}`, with the
/// `ζ(2)⁻¹` factor kept symbolic.
pub fn psi_prime_density(a: u64, b: u64) -> Result<ZetaScaled> {
    let dag = local_product(&distinct_primes_of(&[a, b]), Local::Dag);
    Ok(ZetaScaled {
        cofactor: psi_density(a, b)? / dag,
        zeta2_power: -1,
    })
}

/// Dirichlet convolution `(f * μ)(n) = ∑_{d | n} f(n/d) μ(d)`.
pub fn convolve_mu<F>(f: F, n: u64) -> Result<ExactRational>
where
    F: Fn(u64) -> ExactRational,
{
    check_positive(n)?;
    let mut acc = ExactRational::zero();
    for (d, m) in squarefree_divisors(&distinct_primes(n)) {
        let v = f(n / d);
        acc = if m > 0 { acc + v } else { acc - v };
    }
    Ok(acc)
}

/// Closed form of `(ψ_{a,b} * μ)(n)`: `μ(n) ∏_{p | gcd(a,n), p ∤ b} -1/(p-2)`
/// when `n | ab` and (`2 ∤ n` or `2 | b`), zero otherwise.
pub fn psi_mu_closed(a: u64, b: u64, n: u64) -> Result<ExactRational> {
    check_positive(a)?;
    check_positive(b)?;
    let f = FactoredInteger::new(n)?;
    if !f.is_squarefree() {
        return Ok(ExactRational::zero());
    }
    let (pa, pb) = (distinct_primes(a), distinct_primes(b));
    let mut acc = ExactRational::one();
    for p in f.primes() {
        if divides(p, &pb) {
            acc = -acc;
        } else if p == 2 || !divides(p, &pa) {
            return Ok(ExactRational::zero());
        } else {
            acc = acc * ExactRational::new(1, p - 2);
        }
    }
    Ok(acc)
}

/// Closed form of `(ψ'_{a,b} * μ)(n)`.
pub fn psi_prime_mu_closed(a: u64, b: u64, n: u64) -> Result<ExactRational> {
    check_positive(a)?;
    check_positive(b)?;
    let f = FactoredInteger::new(n)?;
    if !f.is_squarefree() {
        return Ok(ExactRational::zero());
    }
    let (pa, pb) = (distinct_primes(a), distinct_primes(b));
    let even = n % 2 == 0;
    if even && !divides(2, &pb) && divides(2, &pa) {
        return Ok(ExactRational::zero());
    }
    let mut acc = ExactRational::one();
    for p in f.primes() {
        acc = -acc;
        if p == 2 {
            continue;
        }
        if !divides(p, &pa) && !divides(p, &pb) {
            acc = acc * ExactRational::new(1, p);
        } else if divides(p, &pa) && !divides(p, &pb) {
            acc = acc * ExactRational::new(-1, p - 2);
        }
    }
    if even && !divides(2, &pb) {
        acc = acc * ExactRational::new(1, 2);
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PsiKind {
    /// `ψ_{a,b}`
    Plain,
    /// `ψ'_{a,b}`
    Prime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    All,
    Even,
}

impl Parity {
    fn admits(self, n: u64) -> bool {
        match self {
            Parity::All => true,
            Parity::Even => n % 2 == 0,
        }
    }
}

/// `n ↦ ∏_{p|n}(p-1) · D/rad(n)` for `n ≤ x_max`, with `D = ∏_{p ≤ x_max} p`,
/// so that `φ*(n) = numer[n] / D` and partial sums stay exact integers.
struct PhiStarTable {
    x_max: u64,
    denom: BigUint,
    numer: Vec<BigUint>,
}

impl PhiStarTable {
    fn build(x_max: u64) -> Self {
        let denom: BigUint = primes_up_to(x_max).into_iter().map(BigUint::from).product();
        let mut numer = Vec::with_capacity(x_max as usize + 1);
        numer.push(BigUint::zero());
        for n in 1..=x_max {
            let ps = distinct_primes(n);
            let rad: u64 = ps.iter().product();
            let tot: BigUint = ps.iter().map(|&p| BigUint::from(p - 1)).product();
            numer.push(&denom / rad * tot);
        }
        PhiStarTable {
            x_max,
            denom,
            numer,
        }
    }

    fn shared(x_max: u64) -> Arc<PhiStarTable> {
        static CACHE: OnceLock<Mutex<Option<Arc<PhiStarTable>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(None));
        let mut slot = cache.lock().unwrap();
        match slot.as_ref() {
            Some(t) if t.x_max >= x_max => t.clone(),
            _ => {
                let t = Arc::new(PhiStarTable::build(x_max));
                *slot = Some(t.clone());
                t
            }
        }
    }
}

/// Exact partial sums `∑_{n ≤ X, parity} ψ_{a,b}(n)` (or `ψ'`) at each
/// checkpoint `X`, computed in one pass.
pub fn psi_partial_sums(
    kind: PsiKind,
    a: u64,
    b: u64,
    parity: Parity,
    checkpoints: &[u64],
) -> Result<Vec<ExactRational>> {
    check_positive(a)?;
    check_positive(b)?;
    let mut order: Vec<usize> = (0..checkpoints.len()).collect();
    order.sort_by_key(|&i| checkpoints[i]);
    let x_max = checkpoints.iter().copied().max().unwrap_or(0);

    // Group terms by g = gcd(a, n); the ψ-weight depends on n only through g
    // (and φ*(n) for ψ').
    let mut weights: BTreeMap<u64, ExactRational> = BTreeMap::new();
    let mut weight_of = |g: u64| -> ExactRational {
        weights
            .entry(g)
            .or_insert_with(|| {
                let ps = distinct_primes(g);
                match kind {
                    PsiKind::Plain => local_product(&ps, Local::Circ).recip(),
                    PsiKind::Prime => {
                        (local_product(&ps, Local::Circ) * local_product(&ps, Local::Star)).recip()
                    }
                }
            })
            .clone()
    };

    let table = match kind {
        PsiKind::Prime if x_max > 0 => Some(PhiStarTable::shared(x_max)),
        _ => None,
    };
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    let mut big: BTreeMap<u64, BigUint> = BTreeMap::new();

    let mut out = vec![ExactRational::zero(); checkpoints.len()];
    let mut next = 0usize;
    let mut snapshot =
        |counts: &BTreeMap<u64, u64>, big: &BTreeMap<u64, BigUint>| -> ExactRational {
            match kind {
                PsiKind::Plain => counts
                    .iter()
                    .map(|(&g, &c)| weight_of(g) * ExactRational::from_integer(c))
                    .sum(),
                PsiKind::Prime => {
                    let t = table.as_ref().unwrap();
                    big.iter()
                        .map(|(&g, s)| {
                            weight_of(g)
                                * ExactRational::new(
                                    BigInt::from(s.clone()),
                                    BigInt::from(t.denom.clone()),
                                )
                        })
                        .sum()
                }
            }
        };
    for n in 1..=x_max {
        while next < order.len() && checkpoints[order[next]] < n {
            out[order[next]] = snapshot(&counts, &big);
            next += 1;
        }
        if !parity.admits(n) || gcd(n, b) != 1 {
            continue;
        }
        let g = gcd(a, n);
        match kind {
            PsiKind::Plain => *counts.entry(g).or_insert(0) += 1,
            PsiKind::Prime => {
                let t = table.as_ref().unwrap();
                *big.entry(g).or_insert_with(BigUint::zero) += &t.numer[n as usize];
            }
        }
    }
    while next < order.len() {
        out[order[next]] = snapshot(&counts, &big);
        next += 1;
    }
    Ok(out)
}

/// `∑_{n ≤ X} ψ_{a,b}(n)`, exact.
pub fn sum_psi(a: u64, b: u64, x: u64) -> Result<ExactRational> {
    Ok(psi_partial_sums(PsiKind::Plain, a, b, Parity::All, &[x])?.remove(0))
}

/// `∑_{n ≤ X} ψ'_{a,b}(n)`, exact.
pub fn sum_psi_prime(a: u64, b: u64, x: u64) -> Result<ExactRational> {
    Ok(psi_partial_sums(PsiKind::Prime, a, b, Parity::All, &[x])?.remove(0))
}

/// Main-term density for `kind`, as a float.
pub fn density_f64(kind: PsiKind, a: u64, b: u64) -> Result<f64> {
    Ok(match kind {
        PsiKind::Plain => psi_density(a, b)?.to_f64(),
        PsiKind::Prime => psi_prime_density(a, b)?.to_f64(),
    })
}

/// The `σ_{-δ}` argument appearing in the error term for `kind`.
pub fn error_modulus(kind: PsiKind, a: u64, b: u64) -> u64 {
    match kind {
        PsiKind::Plain => a * b,
        PsiKind::Prime => b,
    }
}

/// Residual of a partial sum, normalized by `σ_{-δ}(·) X^δ`.
#[derive(Clone, Debug, Serialize)]
pub struct SumResidual {
    pub kind: PsiKind,
    pub a: u64,
    pub b: u64,
    pub x: u64,
    pub observed: f64,
    pub main_term: f64,
    pub residual: f64,
    pub normalized_residual: f64,
}

/// Residuals of `∑_{n ≤ X} ψ(n)` against `Ψ X` at each checkpoint.
pub fn sum_residuals(
    kind: PsiKind,
    a: u64,
    b: u64,
    xs: &[u64],
    delta: f64,
) -> Result<Vec<SumResidual>> {
    let sums = psi_partial_sums(kind, a, b, Parity::All, xs)?;
    let density = density_f64(kind, a, b)?;
    let sigma = sigma_minus(delta, error_modulus(kind, a, b))?;
    Ok(xs
        .iter()
        .zip(sums)
        .map(|(&x, s)| {
            let observed = s.to_f64();
            let main_term = density * x as f64;
            let residual = observed - main_term;
            SumResidual {
                kind,
                a,
                b,
                x,
                observed,
                main_term,
                residual,
                normalized_residual: residual.abs() / (sigma * (x as f64).powf(delta)),
            }
        })
        .collect())
}

/// A weight `g` for the weighted summation checks, annotated with the number
/// of sign changes of its derivative.
pub trait Weight: Sync {
    fn name(&self) -> String;
    fn eval(&self, t: f64) -> f64;
    /// `R_g(I)`; `None` when the weight carries no monotonicity annotation.
    fn derivative_sign_changes(&self, lo: f64, hi: f64) -> Option<u32>;
    fn sup_abs(&self, lo: f64, hi: f64) -> f64 {
        let lo = lo.max(f64::MIN_POSITIVE);
        let n = 4096;
        (0..=n)
            .map(|i| self.eval(lo + (hi - lo) * i as f64 / n as f64).abs())
            .fold(0.0, f64::max)
    }
}

/// The weights exercised by the summation checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StdWeight {
    One,
    Reciprocal,
    InvSqrt,
}

impl Weight for StdWeight {
    fn name(&self) -> String {
        match self {
            StdWeight::One => "1",
            StdWeight::Reciprocal => "1/t",
            StdWeight::InvSqrt => "t^-1/2",
        }
        .into()
    }

    fn eval(&self, t: f64) -> f64 {
        match self {
            StdWeight::One => 1.0,
            StdWeight::Reciprocal => 1.0 / t,
            StdWeight::InvSqrt => 1.0 / t.sqrt(),
        }
    }

    fn derivative_sign_changes(&self, _lo: f64, _hi: f64) -> Option<u32> {
        Some(0)
    }

    fn sup_abs(&self, lo: f64, hi: f64) -> f64 {
        match self {
            StdWeight::One => 1.0,
            _ => self.eval(lo.max(f64::MIN_POSITIVE)).max(self.eval(hi)),
        }
    }
}

/// An arbitrary weight with an optional sign-change annotation.
pub struct CustomWeight<F: Fn(f64) -> f64 + Sync> {
    pub name: String,
    pub f: F,
    pub sign_changes: Option<u32>,
}

impl<F: Fn(f64) -> f64 + Sync> Weight for CustomWeight<F> {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn eval(&self, t: f64) -> f64 {
        (self.f)(t)
    }
    fn derivative_sign_changes(&self, _lo: f64, _hi: f64) -> Option<u32> {
        self.sign_changes
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightedReport {
    pub kind: PsiKind,
    pub parity: Parity,
    pub a: u64,
    pub b: u64,
    pub weight: String,
    pub t1: f64,
    pub t2: f64,
    pub observed: f64,
    pub integral: f64,
    pub main_term: f64,
    pub residual: f64,
    /// `R_g(I)`
    pub sign_changes: u32,
    /// `M_I(g) = (1 + R_g(I)) sup |g|`
    pub m_i: f64,
    pub error_scale: f64,
    pub normalized_residual: f64,
}

/// Compares `∑_{n ∈ I} ψ(n) g(n)` (optionally over even `n` only) with
/// `Ψ ∫_I g` (halved for even `n`), normalizing the residual by
/// `σ_{-δ}(·) t₂^δ M_I(g)`.
pub fn weighted_sum_check(
    kind: PsiKind,
    parity: Parity,
    a: u64,
    b: u64,
    weight: &dyn Weight,
    t1: f64,
    t2: f64,
    delta: f64,
) -> Result<WeightedReport> {
    check_positive(a)?;
    check_positive(b)?;
    if !(t1 >= 0.0 && t1 < t2) {
        return Err(Error::OutsideDomain(format!(
            "need 0 <= t1 < t2, got [{t1}, {t2}]"
        )));
    }
    let sign_changes = weight
        .derivative_sign_changes(t1, t2)
        .ok_or_else(|| Error::MissingAnnotation(weight.name()))?;
    if parity == Parity::Even {
        let ok = match kind {
            PsiKind::Plain => b % 2 == 1,
            PsiKind::Prime => a % 2 == 0 && b % 2 == 1,
        };
        if !ok {
            return Err(Error::OutsideDomain(format!(
                "even-restricted sum needs {} (a={a}, b={b})",
                match kind {
                    PsiKind::Plain => "2 ∤ b",
                    PsiKind::Prime => "2 | a and 2 ∤ b",
                }
            )));
        }
    }

    let pa = distinct_primes(a);
    let lo = (t1.ceil() as u64).max(1);
    let hi = t2.floor() as u64;
    let mut observed = 0.0f64;
    let mut comp = 0.0f64;
    for n in lo..=hi {
        if !parity.admits(n) || gcd(n, b) != 1 {
            continue;
        }
        let g = intersect(&pa, &distinct_primes(gcd(a, n)));
        let mut v = 1.0 / local_product_f64(&g, Local::Circ);
        if kind == PsiKind::Prime {
            v *= local_product_f64(&distinct_primes(n), Local::Star)
                / local_product_f64(&g, Local::Star);
        }
        // Neumaier summation
        let term = v * weight.eval(n as f64);
        let t = observed + term;
        comp += if observed.abs() >= term.abs() {
            (observed - t) + term
        } else {
            (term - t) + observed
        };
        observed = t;
    }
    observed += comp;

    let integral = quad::integrate(
        |t| weight.eval(t),
        t1.max(f64::MIN_POSITIVE),
        t2,
        1e-12,
        1e-12,
    )?
    .value;
    let half = if parity == Parity::Even { 0.5 } else { 1.0 };
    let main_term = half * density_f64(kind, a, b)? * integral;
    let residual = observed - main_term;
    let m_i = (1 + sign_changes) as f64 * weight.sup_abs(t1, t2);
    let error_scale = sigma_minus(delta, error_modulus(kind, a, b))? * t2.powf(delta) * m_i;
    Ok(WeightedReport {
        kind,
        parity,
        a,
        b,
        weight: weight.name(),
        t1,
        t2,
        observed,
        integral,
        main_term,
        residual,
        sign_changes,
        m_i,
        error_scale,
        normalized_residual: residual.abs() / error_scale,
    })
}

fn check_all_positive(xs: &[u64]) -> Result<()> {
    xs.iter().try_for_each(|&x| check_positive(x))
}

/// `∏_{p | a, p ∤ excl} (1 - 1/(p-1))` (including `p = 2`, where it vanishes).
fn circ_all_primes_excluding(a: &[u64], excl: &[u64]) -> ExactRational {
    let mut acc = ExactRational::one();
    for &p in a {
        if !divides(p, excl) {
            if p == 2 {
                return ExactRational::zero();
            }
            acc = acc * ExactRational::new(p - 2, p - 1);
        }
    }
    acc
}

/// `θ₁(η, η₆)`.
pub fn theta1(eta: [u64; 5], eta6: u64) -> Result<ExactRational> {
    check_all_positive(&eta)?;
    check_positive(eta6)?;
    let [e1, e2, e3, e4, e5] = eta.map(distinct_primes);
    let p6 = distinct_primes(eta6);
    let all = union(&union(&union(&e1, &e2), &union(&e3, &e4)), &e5);
    let star = |ps: &[u64]| local_product(ps, Local::Star);
    Ok(
        star(&all) * star(&intersect(&e1, &e4)) / star(&e4) * star(&intersect(&e3, &e5))
            / star(&e5)
            * circ_all_primes_excluding(&e3, &union(&union(&e2, &e5), &p6)),
    )
}

/// `θ(η') = θ₁(η, η₆) ∏_{p | η₁, p ∤ η₂η₄η₇} (1 - 1/(p-1))`.
pub fn theta(eta: [u64; 7]) -> Result<ExactRational> {
    let head = [eta[0], eta[1], eta[2], eta[3], eta[4]];
    let t1 = theta1(head, eta[5])?;
    check_positive(eta[6])?;
    let excl = distinct_primes_of(&[eta[1], eta[3], eta[6]]);
    Ok(t1 * circ_all_primes_excluding(&distinct_primes(eta[0]), &excl))
}

/// `θ(η')` evaluated from its defining triple Möbius sum over `k₁ | η₃`,
/// `k₄ | η₁`, `k₂ | η₁η₂η₃`.
pub fn theta_by_mobius(eta: [u64; 7]) -> Result<ExactRational> {
    check_all_positive(&eta)?;
    let [e1, e2, e3, e4, e5, e6, e7] = eta;
    let p = |xs: &[u64]| distinct_primes_of(xs);
    let k1s: Vec<_> = squarefree_divisors(&p(&[e3]))
        .into_iter()
        .filter(|&(k, _)| {
            distinct_primes(k)
                .iter()
                .all(|q| !divides(*q, &p(&[e1, e2, e4, e6])))
        })
        .collect();
    let k4s: Vec<_> = squarefree_divisors(&p(&[e1]))
        .into_iter()
        .filter(|&(k, _)| {
            distinct_primes(k)
                .iter()
                .all(|q| !divides(*q, &p(&[e2, e3, e5, e7])))
        })
        .collect();
    let k2_base = squarefree_divisors(&p(&[e1, e2, e3]));
    let mut acc = ExactRational::zero();
    for &(k1, m1) in &k1s {
        for &(k4, m4) in &k4s {
            let excl = p(&[k1, k4, e4, e5]);
            for &(k2, m2) in &k2_base {
                if distinct_primes(k2).iter().any(|q| divides(*q, &excl)) {
                    continue;
                }
                let sign = (m1 * m4 * m2) as i64;
                acc = acc + ExactRational::new(sign, k1 * k4 * k2);
            }
        }
    }
    Ok(acc)
}

/// `θ₁'(η)`.
pub fn theta1_prime(eta: [u64; 5]) -> Result<ExactRational> {
    check_all_positive(&eta)?;
    let [e1, e2, e3, e4, e5] = eta;
    let star = |xs: &[u64]| local_product(&distinct_primes_of(xs), Local::Star);
    let gcd35 = intersect(&distinct_primes(e3), &distinct_primes(e5));
    Ok(
        star(&[e1, e2, e3, e4, e5]) * star(&[e2, e3, e4, e5]) * star(&[e1, e2]) / star(&[e2, e4])
            * local_product(&gcd35, Local::Star)
            / star(&[e5]),
    )
}

/// `θ₂'(η, η₆)`.
pub fn theta2_prime(eta: [u64; 5], eta6: u64) -> Result<ExactRational> {
    check_all_positive(&eta)?;
    check_positive(eta6)?;
    let p6 = distinct_primes(eta6);
    let p3 = distinct_primes(eta[2]);
    Ok(
        local_product(&p6, Local::Star) / local_product(&intersect(&p6, &p3), Local::Star)
            * circ_all_primes_excluding(&p3, &distinct_primes_of(&[eta[1], eta[4], eta6])),
    )
}

/// Whether `η` satisfies the two coprimality conditions `gcd(η₁η₄, η₃η₅) = 1`
/// and `gcd(η₂, η₄η₅) = 1`.
pub fn eta_coprime(eta: [u64; 5]) -> bool {
    let [e1, e2, e3, e4, e5] = eta;
    gcd(e1, e3) == 1
        && gcd(e1, e5) == 1
        && gcd(e4, e3) == 1
        && gcd(e4, e5) == 1
        && gcd(e2, e4) == 1
        && gcd(e2, e5) == 1
}

/// `Θ(η)`, defined to vanish when `η` fails [`eta_coprime`].
pub fn big_theta(eta: [u64; 5]) -> Result<ExactRational> {
    check_all_positive(&eta)?;
    if !eta_coprime(eta) {
        return Ok(ExactRational::zero());
    }
    let [e1, e2, e3, e4, e5] = eta;
    let star = |xs: &[u64]| local_product(&distinct_primes_of(xs), Local::Star);
    let dag = local_product(&distinct_primes_of(&eta), Local::Dag);
    Ok(
        star(&eta) / dag * star(&[e2, e3, e4, e5]) * star(&[e1, e2, e4, e5]) * star(&[e1, e2])
            / star(&[e2, e4])
            * star(&[e2, e3])
            / star(&[e2, e5]),
    )
}

/// Exponent of `(1 - 1/p)` in the local factor of `Θ` at a prime dividing
/// exactly the coordinates flagged in `divides`.
fn big_theta_star_exponent(divides: [bool; 5]) -> i32 {
    let any = |idx: &[usize]| idx.iter().any(|&i| divides[i]) as i32;
    any(&[0, 1, 2, 3, 4]) + any(&[1, 2, 3, 4]) + any(&[0, 1, 3, 4]) + any(&[0, 1]) - any(&[1, 3])
        + any(&[1, 2])
        - any(&[1, 4])
}

/// `Θ(η)` assembled prime by prime from its local factors; an independent
/// evaluation path to [`big_theta`].
pub fn big_theta_local(eta: [u64; 5]) -> Result<ExactRational> {
    check_all_positive(&eta)?;
    if !eta_coprime(eta) {
        return Ok(ExactRational::zero());
    }
    let mut acc = ExactRational::one();
    for p in distinct_primes_of(&eta) {
        let pattern = eta.map(|e| e % p == 0);
        let e = big_theta_star_exponent(pattern);
        let base = ExactRational::new(p - 1, p);
        acc = acc * base.pow(e) * ExactRational::new(p * p, p * p - 1);
    }
    Ok(acc)
}

/// `Θ(η)` in floating point, from the same local factors as
/// [`big_theta_local`].
pub fn big_theta_f64(eta: [u64; 5]) -> Result<f64> {
    check_all_positive(&eta)?;
    if !eta_coprime(eta) {
        return Ok(0.0);
    }
    let mut acc = 1.0;
    for p in distinct_primes_of(&eta) {
        let pattern = eta.map(|e| e % p == 0);
        let pf = p as f64;
        acc *= (1.0 - 1.0 / pf).powi(big_theta_star_exponent(pattern)) / (1.0 - 1.0 / (pf * pf));
    }
    Ok(acc)
}

/// Membership in the parity set `{(x, y, z) : 2 ∤ x or 2 | yz}`.
pub fn in_parity_set(x: u64, y: u64, z: u64) -> bool {
    x % 2 == 1 || y % 2 == 0 || z % 2 == 0
}

/// Checks `φ°(x)φ♭(x) / (φ°φ♭)(gcd(x, yz)) = c · φ*(x) / φ*(gcd(x, yz))`
/// with `c = 1` inside the parity set and `c = 2` outside.
pub fn parity_identity_holds(x: u64, y: u64, z: u64) -> Result<bool> {
    check_all_positive(&[x, y, z])?;
    let px = distinct_primes(x);
    let g = intersect(&px, &distinct_primes_of(&[y, z]));
    let lhs = local_product(&px, Local::Circ) * local_product(&px, Local::Flat)
        / (local_product(&g, Local::Circ) * local_product(&g, Local::Flat));
    let rhs = local_product(&px, Local::Star) / local_product(&g, Local::Star);
    let c = if in_parity_set(x, y, z) { 1 } else { 2 };
    Ok(lhs == rhs * ExactRational::from_integer(c))
}

/// `∑_{k | a, gcd(k, c) = 1} μ(k) / (k φ*(kb))`, summed directly.
pub fn mobius_aggregate_sum(a: u64, b: u64, c: u64) -> Result<ExactRational> {
    check_all_positive(&[a, b, c])?;
    let pb = distinct_primes(b);
    let pc = distinct_primes(c);
    let mut acc = ExactRational::zero();
    for (k, m) in squarefree_divisors(&distinct_primes(a)) {
        let pk = distinct_primes(k);
        if pk.iter().any(|q| divides(*q, &pc)) {
            continue;
        }
        let term =
            (ExactRational::from_integer(k) * local_product(&union(&pk, &pb), Local::Star)).recip();
        acc = if m > 0 { acc + term } else { acc - term };
    }
    Ok(acc)
}

/// Closed form of [`mobius_aggregate_sum`]:
/// `φ*(gcd(a,b)) / (φ*(b) φ*(gcd(a,b,c))) ∏_{p | a, p ∤ bc} (1 - 1/(p-1))`.
pub fn mobius_aggregate_closed(a: u64, b: u64, c: u64) -> Result<ExactRational> {
    check_all_positive(&[a, b, c])?;
    let (pa, pb, pc) = (distinct_primes(a), distinct_primes(b), distinct_primes(c));
    let gab = intersect(&pa, &pb);
    let gabc = intersect(&gab, &pc);
    Ok(local_product(&gab, Local::Star)
        / (local_product(&pb, Local::Star) * local_product(&gabc, Local::Star))
        * circ_all_primes_excluding(&pa, &union(&pb, &pc)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n, d)
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi_star(1).unwrap(), q(1, 1));
        assert_eq!(phi_circ(2).unwrap(), q(1, 1));
        assert_eq!(phi_flat(2).unwrap(), q(1, 1));
        assert_eq!(phi_star(12).unwrap(), q(1, 3));
        assert_eq!(phi_flat(15).unwrap(), q(64, 45));
        assert!(phi_star(0).is_err());
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi(3, 2, 5).unwrap(), q(1, 1));
        assert_eq!(psi(3, 2, 6).unwrap(), q(0, 1));
        assert_eq!(psi(5, 1, 10).unwrap(), q(4, 3));
        assert_eq!(psi_density(1, 1).unwrap(), q(1, 1));
        assert_eq!(psi_density(3, 2).unwrap(), q(2, 3));
        let d = psi_prime_density(1, 1).unwrap();
        assert_eq!(d.cofactor, q(1, 1));
        assert_eq!(d.zeta2_power, -1);
    }

    #[test]
    fn mobius_and_sigma() {
        assert_eq!(mobius(1).unwrap(), 1);
        assert_eq!(mobius(4).unwrap(), 0);
        assert_eq!(mobius(6).unwrap(), 1);
        assert!((sigma_minus(1.0, 6).unwrap() - 2.0).abs() < 1e-15);
        let expect = 1.0 + 2f64.powf(-0.5) + 0.5;
        assert!((sigma_minus(0.5, 4).unwrap() - expect).abs() < 1e-15);
        assert!(sigma_minus(0.0, 4).is_err());
    }

    #[test]
    fn convolution_examples() {
        for n in 1..50 {
            let v = convolve_mu(|m| psi(1, 1, m).unwrap(), n).unwrap();
            assert_eq!(v, if n == 1 { q(1, 1) } else { q(0, 1) });
        }
        // ψ_{3,2}(3) - ψ_{3,2}(1) = 2 - 1
        assert_eq!(convolve_mu(|m| psi(3, 2, m).unwrap(), 3).unwrap(), q(1, 1));
        assert_eq!(psi_mu_closed(3, 2, 3).unwrap(), q(1, 1));
    }

    #[test]
    fn small_partial_sums() {
        assert_eq!(sum_psi(1, 1, 100).unwrap(), q(100, 1));
        // ψ'_{1,1}(n) = φ*(n): 1 + 1/2 + 2/3 + 1/2 = 8/3
        assert_eq!(sum_psi_prime(1, 1, 4).unwrap(), q(8, 3));
        let direct: ExactRational = (1..=60).map(|n| psi_prime(6, 5, n).unwrap()).sum();
        assert_eq!(sum_psi_prime(6, 5, 60).unwrap(), direct);
        let sums = psi_partial_sums(PsiKind::Plain, 3, 2, Parity::Even, &[10, 5]).unwrap();
        assert_eq!(sums[1], q(0, 1));
    }

    #[test]
    fn theta_trivial_values() {
        assert_eq!(big_theta([1, 1, 1, 1, 1]).unwrap(), q(1, 1));
        assert_eq!(big_theta([1, 2, 1, 2, 1]).unwrap(), q(0, 1));
        assert_eq!(theta([1; 7]).unwrap(), q(1, 1));
    }

    #[test]
    fn big_theta_two_paths() {
        assert_eq!(
            big_theta([2, 3, 1, 1, 1]).unwrap(),
            big_theta_local([2, 3, 1, 1, 1]).unwrap()
        );
        // φ*(6)/φ†(6) · φ*(3) · φ*(6) · φ*(6)/φ*(3) · φ*(3)/φ*(3)
        let star6 = q(1, 3);
        let expect =
            star6.clone() / (q(3, 4) * q(8, 9)) * q(2, 3) * star6.clone() * star6 / q(2, 3);
        assert_eq!(big_theta([2, 3, 1, 1, 1]).unwrap(), expect);
    }

    #[test]
    fn weighted_rejects_unannotated() {
        let w = CustomWeight {
            name: "mystery".into(),
            f: |t: f64| t.sin(),
            sign_changes: None,
        };
        let err =
            weighted_sum_check(PsiKind::Plain, Parity::All, 1, 1, &w, 1.0, 10.0, 0.5).unwrap_err();
        assert_eq!(err, Error::MissingAnnotation("mystery".into()));
    }
}
