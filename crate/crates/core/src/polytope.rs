//! Exact integration of polynomials with rational coefficients over bounded
//! polytopes given by linear inequalities.
//!
//! Variables are eliminated last-to-first. For each variable the constraints
//! split into lower and upper bounds; the region is cut into cells on which
//! one lower and one upper bound are active, the polynomial is integrated
//! between them, and the remaining variables are handled recursively.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::ExactRational;

/// `coeffs · t + constant`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Affine {
    pub coeffs: Vec<BigRational>,
    pub constant: BigRational,
}

impl Affine {
    pub fn new(coeffs: Vec<BigRational>, constant: BigRational) -> Self {
        Affine { coeffs, constant }
    }

    pub fn from_i64(coeffs: &[i64], constant: i64) -> Self {
        Affine {
            coeffs: coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect(),
            constant: BigRational::from_integer(constant.into()),
        }
    }

    fn sub(&self, other: &Affine) -> Affine {
        Affine {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
            constant: &self.constant - &other.constant,
        }
    }

    fn scale(&self, s: &BigRational) -> Affine {
        Affine { coeffs: self.coeffs.iter().map(|c| c * s).collect(), constant: &self.constant * s }
    }

    fn eval(&self, t: &[BigRational]) -> BigRational {
        self.coeffs.iter().zip(t).fold(self.constant.clone(), |acc, (c, x)| acc + c * x)
    }

    fn to_poly(&self) -> Poly {
        let n = self.coeffs.len();
        let mut p = Poly::constant(n, self.constant.clone());
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                p = p.add(&Poly::var(n, i).scale(c));
            }
        }
        p
    }
}

/// Polynomial in a fixed number of variables, as a map from exponent vectors
/// to nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, BigRational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Poly::zero(nvars);
        p.terms.insert(e, BigRational::one());
        p
    }

    fn insert(&mut self, e: Vec<u32>, c: BigRational) {
        let entry = self.terms.entry(e).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &BigRational) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one(self.nvars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Replaces variable `i` by an affine form not involving it.
    fn substitute(&self, i: usize, a: &Affine) -> Poly {
        let ap = a.to_poly();
        let mut powers = vec![Poly::one(self.nvars)];
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e[i] as usize;
            while powers.len() <= k {
                let next = powers.last().unwrap().mul(&ap);
                powers.push(next);
            }
            let mut rest = e.clone();
            rest[i] = 0;
            let mut mono = Poly::zero(self.nvars);
            mono.terms.insert(rest, c.clone());
            out = out.add(&mono.mul(&powers[k]));
        }
        out
    }

    /// `∫_{lo}^{hi} self d t_i`.
    fn integrate_between(&self, i: usize, lo: &Affine, hi: &Affine) -> Poly {
        let mut anti = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[i] += 1;
            anti.insert(e2.clone(), c / BigRational::from_integer(BigInt::from(e2[i])));
        }
        anti.substitute(i, hi).add(&anti.substitute(i, lo).scale(&-BigRational::one()))
    }

    pub fn eval(&self, t: &[BigRational]) -> BigRational {
        self.terms.iter().fold(BigRational::zero(), |acc, (e, c)| {
            let m = e.iter().zip(t).fold(c.clone(), |m, (&k, x)| m * num_traits::pow(x.clone(), k as usize));
            acc + m
        })
    }
}

fn integrate_region(poly: &Poly, constraints: &[Affine], active: usize) -> Result<BigRational> {
    if active == 0 {
        let zero_point = vec![BigRational::zero(); poly.nvars];
        let feasible = constraints.iter().all(|c| !c.constant.is_negative());
        return Ok(if feasible { poly.eval(&zero_point) } else { BigRational::zero() });
    }
    let v = active - 1;
    let mut lowers: Vec<Affine> = Vec::new();
    let mut uppers: Vec<Affine> = Vec::new();
    let mut rest: Vec<Affine> = Vec::new();
    for c in constraints {
        let a = &c.coeffs[v];
        if a.is_zero() {
            rest.push(c.clone());
            continue;
        }
        // a t_v + r >= 0  ⟺  t_v >= -r/a (a > 0) or t_v <= r/(-a) (a < 0)
        let mut r = c.scale(&(-BigRational::one() / a));
        r.coeffs[v] = BigRational::zero();
        if a.is_positive() {
            // t_v >= r
            if !lowers.contains(&r) {
                lowers.push(r);
            }
        } else {
            let mut r = c.scale(&(BigRational::one() / -a));
            r.coeffs[v] = BigRational::zero();
            if !uppers.contains(&r) {
                uppers.push(r);
            }
        }
    }
    if lowers.is_empty() || uppers.is_empty() {
        return Err(Error::OutsideDomain(format!("variable t{} is unbounded", v + 1)));
    }
    let mut total = BigRational::zero();
    for (i, up) in uppers.iter().enumerate() {
        for (j, lo) in lowers.iter().enumerate() {
            let mut cell = rest.clone();
            cell.extend(uppers.iter().enumerate().filter(|&(m, _)| m != i).map(|(_, u)| u.sub(up)));
            cell.extend(lowers.iter().enumerate().filter(|&(m, _)| m != j).map(|(_, l)| lo.sub(l)));
            cell.push(up.sub(lo));
            let inner = poly.integrate_between(v, lo, up);
            total += integrate_region(&inner, &cell, v)?;
        }
    }
    Ok(total)
}

/// `∫_P poly` over `P = {t : c(t) >= 0 for every constraint c}`.
pub fn integrate(poly: &Poly, constraints: &[Affine]) -> Result<ExactRational> {
    let n = poly.nvars;
    if constraints.iter().any(|c| c.coeffs.len() != n) {
        return Err(Error::Config("constraint dimension mismatch".into()));
    }
    Ok(integrate_region(poly, constraints, n)?.into())
}

/// Volume of `{t : c(t) >= 0}`.
pub fn volume(nvars: usize, constraints: &[Affine]) -> Result<ExactRational> {
    integrate(&Poly::one(nvars), constraints)
}

/// Membership test at a rational point.
pub fn contains(constraints: &[Affine], t: &[BigRational]) -> bool {
    constraints.iter().all(|c| !c.eval(t).is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n, d)
    }

    fn simplex(n: usize) -> Vec<Affine> {
        let mut cs: Vec<Affine> = (0..n)
            .map(|i| {
                let mut c = vec![0; n];
                c[i] = 1;
                Affine::from_i64(&c, 0)
            })
            .collect();
        cs.push(Affine::from_i64(&vec![-1; n], 1));
        cs
    }

    #[test]
    fn simplex_volumes() {
        assert_eq!(volume(2, &simplex(2)).unwrap(), q(1, 2));
        assert_eq!(volume(3, &simplex(3)).unwrap(), q(1, 6));
        assert_eq!(volume(5, &simplex(5)).unwrap(), q(1, 120));
    }

    #[test]
    fn cube_and_moment() {
        let cube = vec![
            Affine::from_i64(&[1, 0], 0),
            Affine::from_i64(&[-1, 0], 2),
            Affine::from_i64(&[0, 1], 0),
            Affine::from_i64(&[0, -1], 3),
        ];
        assert_eq!(volume(2, &cube).unwrap(), q(6, 1));
        // ∫∫ x y over [0,2]×[0,3] = 2 · 9/2
        let xy = Poly::var(2, 0).mul(&Poly::var(2, 1));
        assert_eq!(integrate(&xy, &cube).unwrap(), q(9, 1));
        // ∫ x over the triangle x, y >= 0, x + y <= 1 = 1/6
        assert_eq!(integrate(&Poly::var(2, 0), &simplex(2)).unwrap(), q(1, 6));
    }

    #[test]
    fn min_of_two_upper_bounds() {
        // 0 <= y <= min(1, 2 - x), 0 <= x <= 2: area 1 + 1/2
        let cs = vec![
            Affine::from_i64(&[1, 0], 0),
            Affine::from_i64(&[-1, 0], 2),
            Affine::from_i64(&[0, 1], 0),
            Affine::from_i64(&[0, -1], 1),
            Affine::from_i64(&[-1, -1], 2),
        ];
        assert_eq!(volume(2, &cs).unwrap(), q(3, 2));
    }

    #[test]
    fn unbounded_rejected() {
        let cs = vec![Affine::from_i64(&[1], 0)];
        assert!(volume(1, &cs).is_err());
    }
}
