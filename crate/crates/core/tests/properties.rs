use num_bigint::BigInt;
use proptest::prelude::*;
use rrg_core::families::{
    admits, count, count_by_parts, enumerate_overpartitions, Family, FamilySpec, OverPartition,
};
use rrg_core::series::{expand_product, expand_product_q, Factor, ProductSpec, SeriesQ, SeriesXQ};

const ORDER: usize = 12;

fn series() -> impl Strategy<Value = SeriesQ> {
    prop::collection::vec(-50i64..50, 1..=ORDER + 1).prop_map(|v| SeriesQ::from_i64s(&v, ORDER))
}

fn unit() -> impl Strategy<Value = SeriesQ> {
    (prop::sample::select(vec![1i64, -1]), series()).prop_map(|(c0, s)| {
        let mut v: Vec<i64> = s.coeffs().iter().map(|c| i64::try_from(c).unwrap()).collect();
        v[0] = c0;
        SeriesQ::from_i64s(&v, ORDER)
    })
}

fn bivariate() -> impl Strategy<Value = SeriesXQ> {
    prop::collection::vec(prop::collection::vec(-9i64..9, 0..4), ORDER + 1).prop_map(|rows| {
        SeriesXQ::from_polys(
            rows.into_iter()
                .map(|r| r.into_iter().map(BigInt::from).collect())
                .collect(),
        )
        .unwrap()
    })
}

fn factor() -> impl Strategy<Value = Factor> {
    (1usize..4, 1usize..4, any::<bool>(), 0usize..2).prop_map(|(b, s, neg, x)| {
        let f = if neg { Factor::poch_neg(b, s) } else { Factor::poch(b, s) };
        f.with_x(x)
    })
}

proptest! {
    #[test]
    fn ring_axioms(f in series(), g in series(), h in series()) {
        prop_assert_eq!(f.add(&g).unwrap(), g.add(&f).unwrap());
        prop_assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
        prop_assert_eq!(
            f.mul(&g).unwrap().mul(&h).unwrap(),
            f.mul(&g.mul(&h).unwrap()).unwrap()
        );
        prop_assert_eq!(
            f.mul(&g.add(&h).unwrap()).unwrap(),
            f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap()
        );
        prop_assert_eq!(f.mul(&SeriesQ::one(ORDER)).unwrap(), f.clone());
        prop_assert!(f.sub(&f).unwrap().is_zero());
    }

    #[test]
    fn invert_round_trip(u in unit()) {
        let inv = u.invert().unwrap();
        prop_assert_eq!(u.mul(&inv).unwrap(), SeriesQ::one(ORDER));
        prop_assert_eq!(inv.invert().unwrap(), u);
    }

    #[test]
    fn binomials_cancel(f in series(), exp in 1usize..6, neg in any::<bool>()) {
        let sign = if neg { -1 } else { 1 };
        let mut g = f.clone();
        g.mul_binomial(sign, exp);
        g.div_binomial(sign, exp).unwrap();
        prop_assert_eq!(g, f);
    }

    #[test]
    fn truncation_commutes_with_mul(f in series(), g in series(), cut in 0usize..=ORDER) {
        let full = f.mul(&g).unwrap().truncate(cut).unwrap();
        let early = f.truncate(cut).unwrap().mul(&g.truncate(cut).unwrap()).unwrap();
        prop_assert_eq!(full, early);
    }

    #[test]
    fn bivariate_ring_and_specialization(f in bivariate(), g in bivariate()) {
        let fg = f.mul(&g).unwrap();
        prop_assert_eq!(&fg, &g.mul(&f).unwrap());
        prop_assert_eq!(fg.at_x_one(), f.at_x_one().mul(&g.at_x_one()).unwrap());
        prop_assert!(f.sub(&f).unwrap().is_zero());
    }

    #[test]
    fn product_in_place_matches_expansion(fs in prop::collection::vec(factor(), 0..4), over in any::<bool>()) {
        let mut spec = ProductSpec::new();
        for f in &fs {
            spec = if over { spec.over(*f) } else { spec.times(*f) };
        }
        let mut one = SeriesXQ::one(ORDER);
        spec.apply_xq(&mut one).unwrap();
        prop_assert_eq!(one, expand_product(&spec, ORDER).unwrap());
    }

    #[test]
    fn series_json_round_trip(f in series(), g in bivariate()) {
        let back: SeriesQ = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        prop_assert_eq!(back, f);
        let back: SeriesXQ = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn overpartition_weight_and_parts(n in 0u32..14) {
        for op in enumerate_overpartitions(n) {
            prop_assert_eq!(op.weight(), u64::from(n));
            prop_assert_eq!(op.canonical_sequence().len() as u64, op.num_parts());
            let json = serde_json::to_string(&op).unwrap();
            prop_assert_eq!(serde_json::from_str::<OverPartition>(&json).unwrap(), op);
        }
    }

    #[test]
    fn by_parts_sums_to_total(k in 1u32..4, a in 0u32..5, n in 0u32..13, bar in any::<bool>()) {
        let family = if bar { Family::Ubar } else { Family::U };
        prop_assume!(a <= k + 1);
        let spec = FamilySpec::of(family, k, a).unwrap();
        let split: u64 = (0..=u64::from(n)).map(|m| count_by_parts(&spec, m, n)).sum();
        prop_assert_eq!(split, count(&spec, n));
    }

    #[test]
    fn u_family_nested_in_a(k in 1u32..4, n in 0u32..12) {
        // Relaxing the clause on ones can only admit more.
        for a in 1..=k {
            let lo = FamilySpec::of(Family::U, k, a).unwrap();
            let hi = FamilySpec::of(Family::U, k, a + 1).unwrap();
            for op in enumerate_overpartitions(n) {
                prop_assert!(!admits(&lo, &op) || admits(&hi, &op));
            }
        }
    }
}

#[test]
fn overpartition_totals_to_thirty() {
    let spec = ProductSpec::new()
        .times(Factor::poch_neg(1, 1))
        .over(Factor::poch(1, 1));
    let product = expand_product_q(&spec, 30).unwrap();
    for n in 0..=30u32 {
        let c = enumerate_overpartitions(n).count();
        assert_eq!(BigInt::from(c), *product.coeff(n as usize).unwrap(), "n={n}");
    }
}
