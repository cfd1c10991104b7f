mod common;

use batchsched::bench::{bs_policy, generate_instance, run_experiment, BsSource, GenSpec, Stats, CSV_HEADER};
use batchsched::format::write_instance;
use batchsched::solver::Algorithm;
use batchsched::Mode;
use proptest::prelude::*;

fn spec(n: usize, density_pct: f64, seed: u64) -> GenSpec {
    GenSpec {
        n,
        m: 2,
        density_pct,
        p_range: (10, 100),
        s_choices: vec![2, 3, 4],
        mode: Mode::Max,
        seed,
    }
}

#[test]
fn empirical_density_within_three_sigma() {
    // 142 jobs give 10011 pairs.
    for d in [12.5, 50.0, 90.0] {
        let inst = generate_instance(&spec(142, d, 5)).unwrap();
        let pairs = 142.0 * 141.0 / 2.0;
        let prob = d / 100.0;
        let sigma = (pairs * prob * (1.0 - prob)).sqrt();
        let edges = inst.graph().edge_count() as f64;
        assert!(
            (edges - pairs * prob).abs() <= 3.0 * sigma,
            "density {d}: {edges} edges"
        );
    }
}

#[test]
fn full_density_is_complete_and_zero_is_rejected() {
    let inst = generate_instance(&spec(12, 100.0, 1)).unwrap();
    assert_eq!(inst.graph().edge_count(), 66);
    assert!(generate_instance(&spec(12, 0.0, 1)).is_err());
}

#[test]
fn generation_is_byte_identical_under_a_seed() {
    let a = write_instance(&generate_instance(&spec(25, 40.0, 77)).unwrap());
    let b = write_instance(&generate_instance(&spec(25, 40.0, 77)).unwrap());
    assert_eq!(a, b);
    let c = write_instance(&generate_instance(&spec(25, 40.0, 78)).unwrap());
    assert_ne!(a, c);
}

#[test]
fn oracle_only_cell_has_zero_gap() {
    let report = run_experiment(&[spec(7, 50.0, 3)], &[Algorithm::Oracle], 6, 10, 10).unwrap();
    let row = &report.rows[0];
    assert_eq!((row.instances, row.sol_count), (6, 6));
    let g = row.gap.unwrap();
    assert_eq!((g.min, g.mean, g.max), (0.0, 0.0, 0.0));
    assert_eq!(row.bs_source, BsSource::Oracle);
}

#[test]
fn oracle_bs_matches_exact_solvers_at_n8() {
    let mut s = spec(8, 50.0, 4);
    s.m = 1;
    let report = run_experiment(&[s], &[Algorithm::B1Max, Algorithm::H2], 10, 50, 10).unwrap();
    let exact = report.rows.iter().find(|r| r.method == Algorithm::B1Max).unwrap();
    assert_eq!(exact.sol_count, exact.instances);
}

#[test]
fn inapplicable_methods_are_skipped() {
    let report = run_experiment(&[spec(6, 50.0, 2)], &[Algorithm::B1Max, Algorithm::H1], 3, 10, 10).unwrap();
    let b1 = report.rows.iter().find(|r| r.method == Algorithm::B1Max).unwrap();
    assert_eq!((b1.instances, b1.skipped), (0, 3));
    let csv = report.to_csv();
    assert!(csv.starts_with(CSV_HEADER));
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn bs_policy_branches() {
    let small = generate_instance(&spec(8, 50.0, 9)).unwrap();
    let (bs, src) = bs_policy(&small, &[u64::MAX], 10).unwrap();
    assert_eq!(src, BsSource::Oracle);
    assert!(bs < u64::MAX);
    let big = generate_instance(&spec(100, 50.0, 9)).unwrap();
    assert_eq!(
        bs_policy(&big, &[410, 400], 10).unwrap(),
        (400, BsSource::BestOfMethods)
    );
}

proptest! {
    #[test]
    fn stats_ignore_order(mut v in prop::collection::vec(0.0f64..1.0, 1..40), rot in 0usize..40) {
        let a = Stats::of(&v).unwrap();
        let k = rot % v.len();
        v.rotate_left(k);
        v.reverse();
        prop_assert_eq!(Stats::of(&v).unwrap(), a);
        prop_assert!(a.min <= a.mean && a.mean <= a.max);
    }
}
