mod common;

use batchsched::exact::{
    solve_b1_max, solve_b1_sum, solve_b2_max_two_values, solve_bm_max_identical, solve_bm_sum_identical,
    solve_is,
};
use batchsched::model::validate;
use batchsched::oracle::brute_force_solve;
use batchsched::solver::{exact_for, solve, Algorithm, SolveOptions};
use batchsched::{Error, Mode};
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn auto_matches_oracle(seed in any::<u64>(), n in 1usize..=8, m in 1usize..=3, sum in any::<bool>()) {
        let mut r = common::rng(seed);
        let mode = if sum { Mode::Sum } else { Mode::Max };
        let distinct = r.gen_range(1..=3u64);
        let inst = common::instance(&mut r, n, m, mode, |r| 5 * r.gen_range(1..=distinct));
        let best = brute_force_solve(&inst, 10).unwrap().optimum;
        if exact_for(&inst).is_some() {
            let s = solve(&inst, Algorithm::Auto, &SolveOptions::default()).unwrap();
            prop_assert!(validate(&s.schedule, &inst).is_empty());
            prop_assert_eq!(s.cmax, best);
        }
    }

    #[test]
    fn is_never_beats_oracle_and_tux_never_loses_to_is(seed in any::<u64>(), n in 2usize..=9) {
        let mut r = common::rng(seed);
        let inst = common::instance(&mut r, n, 2, Mode::Max, |r| if r.gen_bool(0.5) { 4 } else { 11 });
        let best = brute_force_solve(&inst, 10).unwrap().optimum;
        let is = solve_is(&inst).unwrap();
        let tux = solve_b2_max_two_values(&inst).unwrap();
        prop_assert!(validate(&is.schedule, &inst).is_empty());
        prop_assert!(is.cmax >= best);
        prop_assert!(tux.cmax <= is.cmax);
        prop_assert_eq!(tux.cmax, best);
    }
}

#[test]
fn wrong_shapes_are_rejected() {
    let mut r = common::rng(1);
    let two = common::instance(&mut r, 4, 2, Mode::Max, |r| r.gen_range(1..=9));
    assert!(matches!(solve_b1_max(&two), Err(Error::WrongSubproblem { .. })));
    assert!(matches!(solve_b1_sum(&two), Err(Error::WrongSubproblem { .. })));
    let mixed = common::instance(&mut r, 4, 3, Mode::Max, |r| r.gen_range(1..=2) * 3);
    if mixed.distinct_proc_times().len() > 1 {
        assert!(solve_bm_max_identical(&mixed).is_err());
        assert!(solve_b2_max_two_values(&mixed).is_err());
    }
    assert!(solve_bm_sum_identical(&two.with_mode(Mode::Max)).is_err());
}
