//! The surface `x₀x₁ = x₂²`, `(x₀ + x₁ + x₃)x₃ = x₂x₄` in `P⁴`, its height,
//! and a direct point counter used as ground truth for the torsor count.

use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::window::abs_quadratic_window;

/// Largest height bound accepted by the counters. Every intermediate
/// quantity in the enumeration loops then fits in `i128`.
pub const MAX_BOUND: u64 = 1_000_000_000_000;

pub(crate) fn check_bound(bound: u64) -> Result<()> {
    if bound == 0 {
        return Err(Error::ZeroBound);
    }
    if bound > MAX_BOUND {
        return Err(Error::BoundTooLarge {
            bound,
            max: MAX_BOUND,
        });
    }
    Ok(())
}

pub(crate) fn serialize_bigints<S: Serializer>(
    xs: &[BigInt],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        match x.to_i64() {
            Some(v) => seq.serialize_element(&v)?,
            None => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

/// Both defining quadrics vanish at `x`.
pub fn on_surface(x: &[BigInt; 5]) -> bool {
    let [x0, x1, x2, x3, x4] = x;
    (x0 * x1 - x2 * x2).is_zero() && ((x0 + x1 + x3) * x3 - x2 * x4).is_zero()
}

/// A primitive integer point on the surface with canonical sign: the first
/// nonzero coordinate is positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct SurfacePoint {
    #[serde(serialize_with = "serialize_bigints")]
    coords: [BigInt; 5],
}

impl SurfacePoint {
    /// Accepts `coords` only if it is already primitive, canonically signed
    /// and on the surface.
    pub fn new(coords: [BigInt; 5]) -> Result<Self> {
        let p = SurfacePoint::normalized(coords.clone())?;
        if p.coords != coords {
            return Err(Error::OutsideDomain(
                "coordinates are not primitive with canonical sign".into(),
            ));
        }
        Ok(p)
    }

    /// Scales `coords` to the primitive representative with canonical sign.
    pub fn normalized(mut coords: [BigInt; 5]) -> Result<Self> {
        let g = coords.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if g.is_zero() {
            return Err(Error::OutsideDomain(
                "the zero vector is not a projective point".into(),
            ));
        }
        let first = coords.iter().find(|x| !x.is_zero()).unwrap();
        let g = if first.is_negative() { -g } else { g };
        for x in coords.iter_mut() {
            *x = &*x / &g;
        }
        if !on_surface(&coords) {
            return Err(Error::OutsideDomain(
                "point does not lie on the surface".into(),
            ));
        }
        Ok(SurfacePoint { coords })
    }

    pub fn from_i64(coords: [i64; 5]) -> Result<Self> {
        SurfacePoint::new(coords.map(BigInt::from))
    }

    pub(crate) fn from_i128_unchecked(coords: [i128; 5]) -> Self {
        SurfacePoint {
            coords: coords.map(BigInt::from),
        }
    }

    pub fn coords(&self) -> &[BigInt; 5] {
        &self.coords
    }

    /// The image under `(x₂, x₄) ↦ (-x₂, -x₄)`.
    pub fn mirror(&self) -> SurfacePoint {
        let mut c = self.coords.clone();
        c[2] = -&c[2];
        c[4] = -&c[4];
        SurfacePoint { coords: c }
    }
}

/// `x₀x₁x₂x₃ ≠ 0`: the complement of the lines, as parametrized by the torsor.
pub fn in_counting_region(x: &SurfacePoint) -> bool {
    x.coords[..4].iter().all(|c| !c.is_zero())
}

/// `max |xᵢ|`.
pub fn height(x: &SurfacePoint) -> BigInt {
    x.coords.iter().map(|c| c.abs()).max().unwrap()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountResult {
    #[serde(rename = "B")]
    pub bound: u64,
    pub count: u64,
    /// Wall-clock seconds.
    pub elapsed: f64,
}

/// Visits every point with `x₀, x₁, x₂ > 0`, `x₃ ≠ 0`, primitive, height at
/// most `bound`. The full count is twice the number of visits.
fn direct_half<F, T>(bound: u64, init: T, visit: F) -> Vec<T>
where
    F: Fn(&mut T, [i128; 5]) + Sync,
    T: Send + Clone + Sync,
{
    let b = bound as i128;
    // x₀ = y a², x₁ = y b², x₂ = y a b with gcd(a, b) = 1 runs over every
    // positive solution of x₀x₁ = x₂² exactly once.
    let mut outer: Vec<(i128, i128)> = Vec::new();
    let mut y = 1i128;
    while y <= b {
        let mut a = 1i128;
        while y * a * a <= b {
            outer.push((y, a));
            a += 1;
        }
        y += 1;
    }
    outer
        .par_iter()
        .map(|&(y, a)| {
            let mut acc = init.clone();
            let mut bb = 1i128;
            while y * bb * bb <= b {
                if a.gcd(&bb) == 1 && y * a * bb <= b {
                    let (x0, x1, x2) = (y * a * a, y * bb * bb, y * a * bb);
                    let s = x0 + x1;
                    // |x₄| <= B  ⟺  |x₃ (x₃ + s)| <= B x₂
                    for (lo, hi) in abs_quadratic_window(1, s, b * x2) {
                        for x3 in lo.max(-b)..=hi.min(b) {
                            if x3 == 0 {
                                continue;
                            }
                            let q = (s + x3) * x3;
                            if q % x2 != 0 {
                                continue;
                            }
                            let x4 = q / x2;
                            if x4.abs() > b {
                                continue;
                            }
                            // gcd(x₀, x₁, x₂) = y, so this is the gcd of all five
                            if y.gcd(&x3).gcd(&x4) != 1 {
                                continue;
                            }
                            visit(&mut acc, [x0, x1, x2, x3, x4]);
                        }
                    }
                }
                bb += 1;
            }
            acc
        })
        .collect()
}

/// `N(B)`: points in the counting region of height at most `bound`, counted
/// as projective points.
pub fn count_direct(bound: u64) -> Result<CountResult> {
    check_bound(bound)?;
    let start = Instant::now();
    let half: u64 = direct_half(bound, 0u64, |n, _| *n += 1).into_iter().sum();
    Ok(CountResult {
        bound,
        count: 2 * half,
        elapsed: start.elapsed().as_secs_f64(),
    })
}

/// Every point counted by [`count_direct`], both signs of `x₂`, sorted.
pub fn direct_points(bound: u64) -> Result<Vec<SurfacePoint>> {
    check_bound(bound)?;
    let chunks = direct_half(bound, Vec::new(), |v: &mut Vec<[i128; 5]>, x| v.push(x));
    let mut out: Vec<SurfacePoint> = chunks
        .into_iter()
        .flatten()
        .flat_map(|x| {
            let p = SurfacePoint::from_i128_unchecked(x);
            let m = p.mirror();
            [p, m]
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Points `(a² : b² : ±ab : 0 : 0)` of height at most `bound` on the conic
/// `x₃ = x₄ = 0`. These lie outside the counting region; the count is kept
/// for diagnostics only.
pub fn count_conic(bound: u64) -> Result<u64> {
    check_bound(bound)?;
    let r = (bound as f64).sqrt() as u64 + 1;
    let r = (0..=r).rev().find(|&a| a * a <= bound).unwrap();
    let mut n = 0u64;
    for a in 1..=r {
        for b in 1..=r {
            if a.gcd(&b) == 1 {
                n += 2;
            }
        }
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: [i64; 5]) -> [BigInt; 5] {
        c.map(BigInt::from)
    }

    #[test]
    fn membership_examples() {
        assert!(on_surface(&pt([0, 0, 0, 0, 1])));
        assert!(on_surface(&pt([1, 1, 1, 1, 3])));
        assert!(!on_surface(&pt([1, 2, 1, 0, 0])));
    }

    #[test]
    fn region_and_height() {
        let p = SurfacePoint::from_i64([1, 1, 1, -1, -1]).unwrap();
        assert!(in_counting_region(&p));
        assert_eq!(height(&p), BigInt::from(1));
        assert!(!in_counting_region(
            &SurfacePoint::from_i64([0, 1, 0, 0, 1]).unwrap()
        ));
        assert!(!in_counting_region(
            &SurfacePoint::from_i64([1, 1, 1, 0, 0]).unwrap()
        ));
        assert_eq!(
            height(&SurfacePoint::from_i64([1, 1, 1, 1, 3]).unwrap()),
            BigInt::from(3)
        );
        assert_eq!(
            height(&SurfacePoint::from_i64([0, 0, 0, 0, 1]).unwrap()),
            BigInt::from(1)
        );
    }

    #[test]
    fn canonical_form() {
        assert!(SurfacePoint::from_i64([-1, -1, -1, 1, 1]).is_err());
        let p = SurfacePoint::normalized(pt([-2, -2, -2, 2, 2])).unwrap();
        assert_eq!(p, SurfacePoint::from_i64([1, 1, 1, -1, -1]).unwrap());
        assert!(SurfacePoint::normalized(pt([0; 5])).is_err());
        assert!(SurfacePoint::normalized(pt([1, 2, 1, 0, 0])).is_err());
    }

    #[test]
    fn count_b1() {
        assert_eq!(count_direct(1).unwrap().count, 2);
        assert_eq!(count_direct(0), Err(Error::ZeroBound));
        let pts = direct_points(1).unwrap();
        assert_eq!(
            pts,
            vec![
                SurfacePoint::from_i64([1, 1, -1, -1, 1]).unwrap(),
                SurfacePoint::from_i64([1, 1, 1, -1, -1]).unwrap(),
            ]
        );
    }

    #[test]
    fn conic_count() {
        // (1:1:±1:0:0) and for B = 4 also (1:4:±2:0:0), (4:1:±2:0:0)
        assert_eq!(count_conic(1).unwrap(), 2);
        assert_eq!(count_conic(4).unwrap(), 6);
    }
}
