//! Globally adaptive Gauss–Kronrod (7/15) quadrature in one dimension and a
//! nested two-dimensional driver built on it.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

const MAX_INTERVALS: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Estimated absolute error.
    pub error: f64,
    pub evals: usize,
}

/// Integrand values may carry their own error (from an inner quadrature);
/// that error is integrated alongside the value.
fn gk15<F>(f: &F, a: f64, b: f64) -> (f64, f64)
where
    F: Fn(f64) -> (f64, f64) + Sync,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut nodes = Vec::with_capacity(15);
    for &x in &XGK[..7] {
        nodes.push(c - h * x);
        nodes.push(c + h * x);
    }
    nodes.push(c);
    let vals: Vec<(f64, f64)> = if rayon::current_num_threads() > 1 {
        nodes.par_iter().map(|&x| f(x)).collect()
    } else {
        nodes.iter().map(|&x| f(x)).collect()
    };
    let mut kron = WGK[7] * vals[14].0;
    let mut gauss = WG[3] * vals[14].0;
    let mut inner = WGK[7] * vals[14].1;
    for j in 0..7 {
        let (lo, hi) = (vals[2 * j], vals[2 * j + 1]);
        kron += WGK[j] * (lo.0 + hi.0);
        inner += WGK[j] * (lo.1 + hi.1);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (lo.0 + hi.0);
        }
    }
    let mean = 0.5 * kron;
    let mut asc = WGK[7] * (vals[14].0 - mean).abs();
    let mut abs = WGK[7] * vals[14].0.abs();
    for j in 0..7 {
        let (lo, hi) = (vals[2 * j].0, vals[2 * j + 1].0);
        asc += WGK[j] * ((lo - mean).abs() + (hi - mean).abs());
        abs += WGK[j] * (lo.abs() + hi.abs());
    }
    let h = h.abs();
    let (asc, abs) = (asc * h, abs * h);
    // QUADPACK's rescaled estimate
    let mut err = ((kron - gauss) * h).abs();
    if asc != 0.0 && err != 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    if abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * abs);
    }
    (kron * (b - a) * 0.5, err + inner * h)
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Adaptive integration of an integrand that reports `(value, error)` at each
/// node.
pub fn integrate_with_error<F>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<QuadResult>
where
    F: Fn(f64) -> (f64, f64) + Sync,
{
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            evals: 0,
        });
    }
    let (v, e) = gk15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Piece {
        a,
        b,
        value: v,
        error: e,
    });
    let mut total = v;
    let mut err = e;
    let mut evals = 15;
    loop {
        let tol = abs_tol.max(rel_tol * total.abs());
        if err <= tol {
            break;
        }
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::Quadrature(format!(
                "error {err:.3e} above tolerance {tol:.3e} after {MAX_INTERVALS} subintervals"
            )));
        }
        let worst = heap.pop().unwrap();
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval exhausted at machine precision; accept what we have
            heap.push(Piece {
                error: 0.0,
                ..worst
            });
            err = heap.iter().map(|p| p.error).sum();
            continue;
        }
        let (v1, e1) = gk15(&f, worst.a, mid);
        let (v2, e2) = gk15(&f, mid, worst.b);
        evals += 30;
        total += v1 + v2 - worst.value;
        err += e1 + e2 - worst.error;
        heap.push(Piece {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Piece {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }
    // re-sum to shed the drift of the running updates
    let value = heap.iter().map(|p| p.value).sum();
    let error = heap.iter().map(|p| p.error).sum();
    Ok(QuadResult {
        value,
        error,
        evals,
    })
}

pub fn integrate<F>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> f64 + Sync,
{
    integrate_with_error(|x| (f(x), 0.0), a, b, abs_tol, rel_tol)
}

/// `∫_{x0}^{x1} ∫_{y0(x)}^{y1(x)} f(x, y) dy dx` by nested adaptive
/// quadrature. Inner tolerances are a tenth of the outer ones; inner error
/// estimates are folded into the reported error.
///
/// The inner limits should hug the support of `f`: a support much narrower
/// than the inner interval can fall between the Kronrod nodes.
pub fn integrate_2d<F, Y>(f: F, x: (f64, f64), y: Y, abs_tol: f64) -> Result<QuadResult>
where
    F: Fn(f64, f64) -> f64 + Sync,
    Y: Fn(f64) -> (f64, f64) + Sync,
{
    let inner_tol = 0.1 * abs_tol / (x.1 - x.0).abs().max(1e-300);
    let failure = std::sync::Mutex::new(None);
    let evals = std::sync::atomic::AtomicUsize::new(0);
    let outer = integrate_with_error(
        |xv| match y(xv) {
            (lo, hi) if hi <= lo => (0.0, 0.0),
            (lo, hi) => match integrate(|yv| f(xv, yv), lo, hi, inner_tol, 0.0) {
                Ok(r) => {
                    evals.fetch_add(r.evals, std::sync::atomic::Ordering::Relaxed);
                    (r.value, r.error)
                }
                Err(e) => {
                    *failure.lock().unwrap() = Some(e);
                    (0.0, 0.0)
                }
            },
        },
        x.0,
        x.1,
        abs_tol,
        0.0,
    )?;
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    Ok(QuadResult {
        evals: evals.into_inner(),
        ..outer
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_exact() {
        let r = integrate(|x| x.powi(5) - 3.0 * x, 0.0, 2.0, 1e-12, 0.0).unwrap();
        assert!((r.value - (64.0 / 6.0 - 6.0)).abs() < 1e-12);
    }

    #[test]
    fn kinked_and_singular() {
        let r = integrate(|x: f64| (x - 0.3).abs(), 0.0, 1.0, 1e-11, 0.0).unwrap();
        assert!((r.value - (0.045 + 0.245)).abs() < 1e-10);
        let r = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, 1e-9, 0.0).unwrap();
        assert!((r.value - 2.0).abs() < 1e-8, "{r:?}");
    }

    #[test]
    fn two_dimensional() {
        let r = integrate_2d(|x, y| 1.0 - x - y, (0.0, 1.0), |x| (0.0, 1.0 - x), 1e-9).unwrap();
        assert!((r.value - 1.0 / 6.0).abs() < 1e-8, "{r:?}");
        let r = integrate_2d(|x, y| x * y.cos(), (0.0, 2.0), |_| (0.0, 1.0), 1e-10).unwrap();
        assert!((r.value - 2.0 * 1f64.sin()).abs() < 1e-9, "{r:?}");
    }
}
