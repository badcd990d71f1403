use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vinobound::nt::{enumerate_smooth, is_smooth_member, PrimeTable, SmoothSetSpec};
use vinobound::oracle::{
    brute_j, det_identity_check, target_distribution, zrd_check, OracleConfig, PolySystem,
    SystemSpec,
};
use vinobound::Execution;

fn cfg() -> OracleConfig {
    OracleConfig::default()
}

#[test]
fn smooth_variable_set_matches_member_list() {
    let table = PrimeTable::new(10_000);
    for (p, r) in [(30.0, 16.0), (60.0, 25.0), (120.0, 100.0), (50.0, 9.0)] {
        let spec = SmoothSetSpec::new(p, r);
        let dfs = enumerate_smooth(&table, &spec).unwrap();
        let listed: Vec<u64> = (1..=p as u64).filter(|&n| is_smooth_member(n, &spec)).collect();
        for (s, k) in [(1, 1), (2, 2), (2, 3), (3, 2)] {
            let a = brute_j(&SystemSpec::over(s, k, 1, dfs.clone()).unwrap(), None, &cfg()).unwrap();
            let b = brute_j(&SystemSpec::over(s, k, 1, listed.clone()).unwrap(), None, &cfg()).unwrap();
            assert_eq!(a, b, "P={p}, R={r}, s={s}, k={k}");
        }
    }
}

#[test]
fn zrd_beyond_the_exhaustive_range() {
    for (s, k, p) in [(2, 3, 8), (3, 2, 6), (3, 3, 5)] {
        let r = zrd_check(&SystemSpec::complete(s, k, p).unwrap(), &cfg()).unwrap();
        assert!(r.holds, "s={s}, k={k}, P={p}");
    }
}

#[test]
fn parallel_and_sequential_agree() {
    let sp = SystemSpec::interval(3, 3, 2, 9).unwrap();
    let a = brute_j(&sp, None, &cfg()).unwrap();
    let b = brute_j(&sp, None, &OracleConfig::sequential()).unwrap();
    assert_eq!(a, b);
    let seq = OracleConfig {
        exec: Execution::Sequential,
        ..Default::default()
    };
    assert_eq!(target_distribution(&sp, &cfg()).unwrap(), target_distribution(&sp, &seq).unwrap());
}

#[test]
fn degenerate_single_point() {
    for (s, k) in [(1, 1), (3, 3), (4, 2)] {
        assert_eq!(brute_j(&SystemSpec::complete(s, k, 1).unwrap(), None, &cfg()).unwrap(), 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn count_monotone_under_inclusion(
        small in proptest::collection::btree_set(1u64..=14, 1..6),
        extra in proptest::collection::btree_set(1u64..=14, 0..4),
        s in 1u32..=2,
        k in 1u32..=3,
        hfrac in 0.0f64..1.0,
    ) {
        let h = 1 + ((k as f64) * hfrac) as u32;
        let h = h.min(k);
        let a: Vec<u64> = small.iter().copied().collect();
        let b: Vec<u64> = small.union(&extra).copied().collect();
        let ja = brute_j(&SystemSpec::over(s, k, h, a).unwrap(), None, &cfg()).unwrap();
        let jb = brute_j(&SystemSpec::over(s, k, h, b).unwrap(), None, &cfg()).unwrap();
        prop_assert!(ja <= jb);
    }

    #[test]
    fn shifted_targets_never_beat_zero(
        set in proptest::collection::btree_set(1u64..=20, 1..7),
        s in 1u32..=3,
        k in 1u32..=3,
        pick in 0usize..1000,
    ) {
        let sp = SystemSpec::over(s, k, 1, set.into_iter().collect()).unwrap();
        let dist = target_distribution(&sp, &cfg()).unwrap();
        let mut keys: Vec<&Vec<i128>> = dist.keys().collect();
        keys.sort();
        let h = keys[pick % keys.len()].clone();
        let jh = brute_j(&sp, Some(&h), &cfg()).unwrap();
        let j0 = brute_j(&sp, None, &cfg()).unwrap();
        prop_assert_eq!(jh, dist[&h]);
        prop_assert!(jh <= j0);
    }

    #[test]
    fn determinant_identity_on_random_systems(
        seed in any::<u64>(),
        k in 2u32..=6,
        dfrac in 0.0f64..1.0,
        t in 1u64..=7,
        m in 0u32..=4,
        zs in proptest::collection::vec(-30i64..=30, 6),
    ) {
        let d = ((k as f64) * dfrac) as u32;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let poly = PolySystem::random(k, d, t, m, 20, &mut rng).unwrap();
        let r = det_identity_check(&poly, &zs[..(k - d) as usize]).unwrap();
        prop_assert!(r.magnitudes_equal);
    }
}
