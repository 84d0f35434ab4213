use cfq_core::discrepancy::{extreme_discrepancy, reduced_fraction_discrepancy, star_discrepancy, PointSet};
use cfq_core::weight::IntervalQ;
use cfq_core::ExactRational;
use proptest::prelude::*;

fn points() -> impl Strategy<Value = Vec<ExactRational>> {
    prop::collection::vec((1i64..50).prop_flat_map(|d| (0..=d, Just(d))), 1..40)
        .prop_map(|v| v.into_iter().map(|(p, d)| ExactRational::new(p, d)).collect())
}

proptest! {
    #[test]
    fn star_bounds_extreme(xs in points()) {
        let ps = PointSet::new(xs).unwrap();
        let star = star_discrepancy(&ps).unwrap().value;
        let ext = extreme_discrepancy(&ps, &IntervalQ::unit()).unwrap().value;
        prop_assert!(star <= ext);
        prop_assert!(ext <= star * ExactRational::from(2u64));
    }

    #[test]
    fn subrange_is_no_worse(xs in points(), lo in 0i64..10, len in 1i64..10) {
        let ps = PointSet::new(xs).unwrap();
        let hi = (lo + len).min(10);
        prop_assume!(lo < hi);
        let sub = IntervalQ::closed(ExactRational::new(lo, 10), ExactRational::new(hi, 10)).unwrap();
        let whole = extreme_discrepancy(&ps, &IntervalQ::unit()).unwrap().value;
        prop_assert!(extreme_discrepancy(&ps, &sub).unwrap().value <= whole);
    }

    #[test]
    fn witness_attains_value(xs in points()) {
        let ps = PointSet::new(xs.clone()).unwrap();
        let r = extreme_discrepancy(&ps, &IntervalQ::unit()).unwrap();
        let inside = xs.iter().filter(|x| r.witness.contains(x)).count() as u64;
        let local = ExactRational::new(inside as i64, xs.len() as i64) - r.witness.measure();
        prop_assert_eq!(local.abs(), r.value);
    }
}

#[test]
fn reduced_fractions_are_well_spread_near_ten_thousand() {
    let bound = ExactRational::new(1, 20);
    for n in 10_000..=10_100u64 {
        let d = reduced_fraction_discrepancy(n, &IntervalQ::unit()).unwrap().value;
        assert!(d <= bound, "N = {n}: {}", d.to_f64());
    }
}
