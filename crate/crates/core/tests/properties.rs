use num_bigint::BigUint;
use proptest::prelude::*;

use gstrata::census::{census_rows, grassmannian_count, DEFAULT_BUDGET};
use gstrata::duality::{annihilator, dualize_configuration};
use gstrata::grassmann::{chart_coordinates, find_common_complement, from_chart};
use gstrata::io::{configuration_from_json, configuration_to_json};
use gstrata::matrix::{column_span_intersection, column_span_sum};
use gstrata::sampler::{sample_in_stratum, sample_uniform, SampleSpec};
use gstrata::strata::{dual_stratum_of, stratum_of};
use gstrata::{Error, FieldSpec, Matrix, StratumDescriptor};

fn field() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![Just(FieldSpec::Rational), Just(FieldSpec::Prime(5)), Just(FieldSpec::Prime(7))]
}

/// `(h, k, n, i)` with `n <= 6` and a nonempty stratum.
fn nonempty_desc() -> impl Strategy<Value = StratumDescriptor> {
    (1usize..=4, 2usize..=6)
        .prop_flat_map(|(h, n)| (Just(h), 1..n, Just(n)))
        .prop_flat_map(|(h, k, n)| (Just(h), Just(k), Just(n), 0..=n))
        .prop_filter_map("empty stratum", |(h, k, n, i)| {
            let d = StratumDescriptor::new(h, k, n, i).ok()?;
            d.is_nonempty().then_some(d)
        })
}

fn small_matrix(f: FieldSpec) -> impl Strategy<Value = Matrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-6i64..=6, r * c).prop_map(move |v| Matrix::from_i64(f, r, c, &v))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampled_configurations_land_in_their_stratum(desc in nonempty_desc(), f in field(), seed in any::<u64>()) {
        let mut spec = SampleSpec::new(desc, f, seed);
        spec.max_attempts = spec.max_attempts.max(50);
        let c = sample_in_stratum(&spec).unwrap();
        prop_assert_eq!((c.h(), c.k(), c.n()), (desc.h, desc.k, desc.n));
        prop_assert_eq!(stratum_of(&c), desc.i);
    }

    #[test]
    fn sum_and_intersection_dimensions(f in field(), n in 2usize..=6, seed in any::<u64>()) {
        let k = 1 + (seed as usize) % (n - 1);
        let c = sample_uniform(2, k, n, f, seed).unwrap();
        prop_assert_eq!(stratum_of(&c) + dual_stratum_of(&c), 2 * k);
    }

    #[test]
    fn duality_exchanges_sum_and_intersection(f in field(), n in 2usize..=6, h in 1usize..=4, seed in any::<u64>()) {
        let k = 1 + (seed as usize) % (n - 1);
        let c = sample_uniform(h, k, n, f, seed).unwrap();
        let d = dualize_configuration(&c);
        prop_assert_eq!(d.k(), n - k);
        prop_assert_eq!(dual_stratum_of(&d), n - stratum_of(&c));
        prop_assert_eq!(&dualize_configuration(&d), &c);
        let sum = gstrata::Subspace::span(&column_span_sum(&c.bases()).unwrap());
        let meet = gstrata::Subspace::span(&column_span_intersection(&d.bases()).unwrap());
        prop_assert_eq!(annihilator(&sum), meet);
    }

    #[test]
    fn json_round_trip(f in field(), n in 2usize..=5, h in 1usize..=3, seed in any::<u64>()) {
        let k = 1 + (seed as usize) % (n - 1);
        let c = sample_uniform(h, k, n, f, seed).unwrap();
        let text = configuration_to_json(&c);
        let back = configuration_from_json(&text).unwrap();
        prop_assert_eq!(configuration_to_json(&back), text);
        prop_assert_eq!(back, c);
    }

    #[test]
    fn common_complement_charts_invert(f in prop_oneof![Just(FieldSpec::Rational), Just(FieldSpec::Prime(7))],
                                       n in 2usize..=5, h in 1usize..=3, seed in any::<u64>()) {
        let k = 1 + (seed as usize) % (n - 1);
        let c = sample_uniform(h, k, n, f, seed).unwrap();
        let chart = match find_common_complement(&c, seed) {
            Ok(ch) => ch,
            Err(Error::NoCommonComplement(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        for s in c.subspaces() {
            prop_assert!(chart.complement().is_complement_of(s));
            let a = chart_coordinates(s, &chart).unwrap();
            prop_assert_eq!((a.rows(), a.cols()), (n - k, k));
            prop_assert_eq!(&from_chart(&a, &chart).unwrap(), s);
        }
    }

    #[test]
    fn rank_nullity_and_rref_idempotence(m in field().prop_flat_map(small_matrix)) {
        let (r, pivots) = m.rref();
        prop_assert_eq!(m.rank() + m.kernel().cols(), m.cols());
        prop_assert_eq!(pivots.len(), m.rank());
        prop_assert_eq!(r.rref().0, r.clone());
        prop_assert_eq!(m.transpose().rank(), m.rank());
        prop_assert!(m.mul(&m.kernel()).unwrap().is_zero());
    }

    #[test]
    fn strata_dimensions_decrease_along_closure(desc in nonempty_desc()) {
        let closure = desc.adjacency_closure();
        prop_assert_eq!(closure.first().copied(), Some(desc));
        for pair in closure.windows(2) {
            prop_assert!(pair[0].dimension().unwrap() > pair[1].dimension().unwrap());
        }
        if desc.h >= 2 {
            prop_assert_eq!(desc.local_model().unwrap().total_dimension(), desc.dimension().unwrap());
        }
    }
}

/// Exhaustive: over F_2 and F_3 with n <= 4 and h <= 3, the strata with
/// points are exactly the nonempty ones and they account for every tuple.
#[test]
fn census_support_matches_emptiness() {
    for q in [2u32, 3] {
        for n in 2usize..=4 {
            for k in 1..n {
                for h in 1usize..=3 {
                    let rows = census_rows(h, k, n, q, DEFAULT_BUDGET).unwrap();
                    let mut total = BigUint::from(0u32);
                    for r in &rows {
                        let desc = StratumDescriptor::new(h, k, n, r.i).unwrap();
                        assert_eq!(r.count != BigUint::from(0u32), desc.is_nonempty(), "{desc} over F_{q}");
                        total += &r.count;
                    }
                    let big_n = grassmannian_count(k, n, q);
                    let expected = (0..h).fold(BigUint::from(1u32), |acc, t| acc * (&big_n - BigUint::from(t)));
                    assert_eq!(total, expected, "h={h} k={k} n={n} q={q}");
                }
            }
        }
    }
}
