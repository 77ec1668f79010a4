use ffmc_core::census;
use ffmc_core::verify::{self, coprime_tuples_oracle, VerifyConfig};
use ffmc_core::{is_unimodular, linear_pencil, linearize, Fe, Field, MatF, MatPoly};
use proptest::prelude::*;

fn degrees() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0i64..=2, 1..=3).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn oracle_matches_closed_form(q in prop::sample::select(vec![2u64, 3]), ds in degrees(), seed in 1u64..1000) {
        let field = Field::with_order(q).unwrap();
        let m = ds.len();
        let a: Vec<Fe> = (0..m).map(|i| field.from_u64_wrapping((seed >> i) % q)).collect();
        prop_assume!(a.iter().any(|c| !c.is_zero()));
        let n = coprime_tuples_oracle(&field, &ds, &a, u64::MAX).unwrap();
        prop_assert_eq!(n, census::count_coprime_tuples(q, &ds).unwrap().value);
    }

    #[test]
    fn pencil_routes_agree(q in prop::sample::select(vec![2u64, 3, 4]), n in 2usize..=4, k in 1usize..=3, idx in any::<u64>()) {
        prop_assume!(k < n);
        let field = Field::with_order(q).unwrap();
        let total = q.pow((n * k) as u32);
        let y = MatF::from_counter(&field, n, k, idx % total);
        let direct = is_unimodular(&linear_pencil(&y));
        let monic = MatPoly::monic_from_lower(&field, n, k, &[y.neg()]).unwrap();
        prop_assert_eq!(direct, is_unimodular(&monic));
        prop_assert_eq!(direct, is_unimodular(&linearize(&monic).unwrap().1));
    }

    #[test]
    fn estimates_reproduce(seed in any::<u64>(), trials in 1u64..400) {
        let cfg = VerifyConfig::default();
        let a = verify::estimate_density(2, 3, 1, 2, trials, seed, &cfg).unwrap();
        let b = verify::estimate_density(2, 3, 1, 2, trials, seed, &VerifyConfig { jobs: Some(2), ..cfg }).unwrap();
        prop_assert_eq!(a.successes, b.successes);
        prop_assert!(a.successes <= trials);
    }
}

#[test]
fn exhaustive_counts_on_small_grid() {
    let cfg = VerifyConfig::default();
    for q in [2u64, 3, 4] {
        for n in 2..=3 {
            for k in 1..n {
                if q.pow((n * k) as u32) > 100_000 {
                    continue;
                }
                let r = verify::verify_count_simple(q, n, k, &cfg).unwrap();
                assert!(r.pass, "{r:?}");
                for d in 1..=2 {
                    if q.pow((n * k * d) as u32) <= 100_000 {
                        assert!(verify::verify_density_exhaustive(q, n, k, d, &cfg).unwrap().iter().all(|r| r.pass));
                    }
                }
            }
        }
    }
}

#[test]
fn splitting_over_gf4_and_gf3() {
    let cfg = VerifyConfig::default();
    for (q, m, d) in [(4, 1, 2), (3, 1, 3), (2, 3, 2), (2, 1, 4)] {
        let r = verify::verify_splitting(q, m, d, &cfg).unwrap();
        assert!(r.pass, "{r:?}");
    }
}
