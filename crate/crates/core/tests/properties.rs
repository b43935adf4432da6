use num_bigint::BigInt;
use proptest::prelude::*;

use quartic_a3::arithfun::{phi_circ, phi_flat, phi_star, psi, psi_mu_closed, convolve_mu};
use quartic_a3::surface::{height, in_counting_region, on_surface, SurfacePoint};
use quartic_a3::torsor::{self, check_coprimality, check_equations, lift, to_point, TorsorPoint};
use quartic_a3::ExactRational;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn enumerated_points_round_trip(bound in 1u64..400, pick in any::<prop::sample::Index>()) {
        let ts = torsor::points(bound).unwrap();
        let t = pick.get(&ts);
        prop_assert!(check_equations(t) && check_coprimality(t));
        prop_assert!(torsor::check_heights(t, bound));
        let x = to_point(t).unwrap();
        prop_assert!(on_surface(x.coords()) && in_counting_region(&x));
        prop_assert!(height(&x) <= BigInt::from(bound));
        prop_assert_eq!(&lift(&x).unwrap(), t);
        prop_assert!(lift(&x.mirror()).is_err());
    }

    #[test]
    fn valid_torsor_points_round_trip(e in prop::array::uniform7(1i64..6)) {
        let [e1, e2, e3, e4, e5, e6, e7] = e;
        let c1 = e1 * e1 * e2 * e4 * e4 * e7;
        let c2 = e2 * e3 * e3 * e5 * e5 * e6;
        for a2 in -60i64..60 {
            // α₁ and α₄ are forced by the two torsor equations
            let (n1, n4) = (e6 * a2 - c1, c2 + e7 * a2);
            if n1 == 0 || n1 % e5 != 0 || n4 % e4 != 0 {
                continue;
            }
            let t = TorsorPoint::from_i64(e, [n1 / e5, a2, n4 / e4]);
            if !(check_equations(&t) && check_coprimality(&t)) {
                continue;
            }
            let x = to_point(&t).unwrap();
            prop_assert_eq!(lift(&x).unwrap(), t);
        }
    }

    #[test]
    fn normalization_is_projective(k in prop_oneof![-7i64..-1, 2i64..8], pick in 0usize..50) {
        let ts = torsor::points(60).unwrap();
        let x = to_point(&ts[pick % ts.len()]).unwrap();
        let scaled = x.coords().clone().map(|c| c * k);
        let y = SurfacePoint::normalized(scaled).unwrap();
        let back = if k < 0 { x.mirror() } else { x.clone() };
        // a negative scalar flips every sign, which normalization undoes
        prop_assert!(y == x || y == back);
    }

    #[test]
    fn phi_product_identity(n in 1u64..5_000) {
        let lhs = phi_circ(n).unwrap() * phi_flat(n).unwrap();
        let star = phi_star(n).unwrap();
        let want = if n % 2 == 1 { star } else { star * ExactRational::from_integer(2) };
        prop_assert_eq!(lhs, want);
    }

    #[test]
    fn mobius_convolution_closed_form(a in 1u64..80, b in 1u64..80, n in 1u64..80) {
        let c = convolve_mu(|m| psi(a, b, m).unwrap(), n).unwrap();
        prop_assert_eq!(c, psi_mu_closed(a, b, n).unwrap());
    }

    #[test]
    fn phi_star_in_unit_interval(n in 1u64..100_000) {
        let v = phi_star(n).unwrap();
        prop_assert!(v > ExactRational::zero() && v <= ExactRational::one());
    }
}

#[test]
fn point_count_is_monotone_in_the_bound() {
    let counts: Vec<u64> = (1..=120).map(|b| torsor::count(b).unwrap()).collect();
    assert!(counts.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(counts[0], 1);
}
