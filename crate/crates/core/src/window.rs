//! Integer windows for `|x (L x + K)| <= M`.

/// Integer ranges (inclusive) covering every `x` with `|x (l x + k)| <= m`,
/// for `l > 0`, `k >= 0`, `m >= 0`.
///
/// The ranges come from floating-point roots widened by a safety margin, so
/// they may contain a few extra integers; callers re-check each candidate
/// exactly.
pub fn abs_quadratic_window(l: i128, k: i128, m: i128) -> Vec<(i128, i128)> {
    debug_assert!(l > 0 && k >= 0 && m >= 0);
    let (lf, kf, mf) = (l as f64, k as f64, m as f64);
    let outer = (kf * kf + 4.0 * lf * mf).sqrt();
    let margin = 2.0 + 1e-12 * (kf + outer) / lf;
    let lo = ((-kf - outer) / (2.0 * lf) - margin).floor() as i128;
    let hi = ((-kf + outer) / (2.0 * lf) + margin).ceil() as i128;
    let disc = kf * kf - 4.0 * lf * mf;
    if disc > 0.0 {
        let inner = disc.sqrt();
        // open interval where l x² + k x < -m
        let ex_lo = ((-kf - inner) / (2.0 * lf) + margin).ceil() as i128;
        let ex_hi = ((-kf + inner) / (2.0 * lf) - margin).floor() as i128;
        if ex_lo <= ex_hi {
            return vec![(lo, ex_lo - 1), (ex_hi + 1, hi)];
        }
    }
    vec![(lo, hi)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn window_covers_every_solution(l in 1i128..50, k in 0i128..400, m in 0i128..3000) {
            let ranges = abs_quadratic_window(l, k, m);
            for x in -500i128..=500 {
                if (x * (l * x + k)).abs() <= m {
                    prop_assert!(ranges.iter().any(|&(a, b)| a <= x && x <= b), "x={x} missed by {ranges:?}");
                }
            }
        }
    }
}
