use cfq_core::cf::{evaluate_digits, expand, ContinuedFraction, ReducedFraction, WeightFn, Window};
use cfq_core::reflect::{reflect, reflect_upper, Half};
use proptest::prelude::*;

fn coprime_pair() -> impl Strategy<Value = (u64, u64)> {
    (2u64..1 << 40)
        .prop_flat_map(|n| (1..n, Just(n)))
        .prop_filter("coprime", |&(a, n)| num_integer::gcd(a, n) == 1)
}

proptest! {
    #[test]
    fn expansion_round_trips((a, n) in coprime_pair()) {
        let cf = expand(ReducedFraction::new(a, n).unwrap());
        prop_assert_eq!(evaluate_digits(cf.digits()), (a as i128, n as i128));
        prop_assert!(*cf.digits().last().unwrap() >= 2 || cf.digits() == [2]);
        prop_assert_eq!(ContinuedFraction::from_digits(cf.digits().to_vec()).unwrap(), cf.clone());
    }

    #[test]
    fn sum_is_at_least_ln_n((a, n) in coprime_pair()) {
        let cf = expand(ReducedFraction::new(a, n).unwrap());
        prop_assert!(cf.sum() as f64 >= (n as f64).ln());
    }

    #[test]
    fn alternating_sum_has_parity_of_sum((a, n) in coprime_pair()) {
        let cf = expand(ReducedFraction::new(a, n).unwrap());
        prop_assert_eq!((cf.alt() - cf.sum() as i128).rem_euclid(2), 0);
    }

    #[test]
    fn count_and_sum_are_restricted_sums((a, n) in coprime_pair(), b in 1u64..6, width in 0u64..6) {
        let cf = expand(ReducedFraction::new(a, n).unwrap());
        let w = Window::new(b, b + width).unwrap();
        let count = cf.restricted_sum(&WeightFn::One, &w).unwrap();
        prop_assert_eq!(count, (cf.count(b, b + width).unwrap()).into());
        let all = cf.restricted_sum(&WeightFn::Identity, &Window::unbounded(1).unwrap()).unwrap();
        prop_assert_eq!(all, cf.sum().into());
    }

    #[test]
    fn upper_half_digit_relations((a, n) in coprime_pair()) {
        let f = ReducedFraction::new(a, n).unwrap();
        prop_assume!(reflect(f).half == Half::Upper);
        let d = expand(f).digits().to_vec();
        let s = expand(reflect_upper(f).unwrap()).digits().to_vec();
        let r = d.len();
        prop_assume!(r >= 3);
        prop_assert_eq!(s.len(), r);
        prop_assert_eq!(s[0], 1);
        prop_assert_eq!(s[1], d[r - 1] - 1);
        prop_assert_eq!(s[r - 1], d[1] + 1);
        for i in 3..r {
            prop_assert_eq!(s[i - 1], d[r - i + 1]);
        }
    }
}

#[test]
fn reflection_involution_and_halves_up_to_300() {
    for n in 2..=300u64 {
        for a in cfq_core::arith::coprime_residues(n) {
            let f = ReducedFraction::new(a, n).unwrap();
            let rec = reflect(f);
            assert_eq!(reflect(rec.image).image, f);
            assert_eq!(rec.half == Half::Lower, 2 * rec.image.numerator() <= n, "{a}/{n}");
        }
    }
}
