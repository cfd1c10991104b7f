mod common;

use batchsched::milp::{
    build_model, enumerate_milp_optimum, export_lp, is_feasible, parse_lp, values_from_schedule, VarId,
};
use batchsched::oracle::brute_force_solve;
use batchsched::Mode;
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lp_round_trip(seed in any::<u64>(), n in 1usize..=6, m in 1usize..=3) {
        let mut r = common::rng(seed);
        let inst = common::instance(&mut r, n, m, Mode::Max, |r| r.gen_range(1..=50));
        let model = build_model(&inst).unwrap();
        prop_assert_eq!(parse_lp(&export_lp(&model)).unwrap(), model);
    }

    /// The assignment of a feasible schedule satisfies families 1 to 4 and its
    /// family-5 left-hand side, plus s, is the machine span.
    #[test]
    fn schedules_are_feasible_assignments(seed in any::<u64>(), n in 1usize..=7, m in 1usize..=3) {
        let mut r = common::rng(seed);
        let inst = common::instance(&mut r, n, m, Mode::Max, |r| r.gen_range(1..=50));
        let model = build_model(&inst).unwrap();
        let sched = brute_force_solve(&inst, 10).unwrap().witness;
        let values = values_from_schedule(&model, &sched, &inst);
        prop_assert!(is_feasible(&model, &values));
        let cmax = *values.last().unwrap();
        for (row, c) in model.constraints.iter().enumerate().filter(|(_, c)| c.family == 5) {
            let k: usize = c.name[3..].parse::<usize>().unwrap() - 1;
            let batches = sched.machine(k);
            let span = model.activity(row, &values) + cmax - inst.setup() as i64;
            if batches.is_empty() {
                prop_assert_eq!(span, -(inst.setup() as i64));
            } else {
                prop_assert_eq!(span, inst.span(batches) as i64);
            }
        }
    }
}

#[test]
fn enumeration_agrees_with_oracle() {
    for seed in 0..40 {
        let mut r = common::rng(seed);
        let (n, m) = [(4, 2), (3, 3), (6, 1), (2, 5)][seed as usize % 4];
        let inst = common::instance(&mut r, n, m, Mode::Max, |r| r.gen_range(1..=20));
        let opt = enumerate_milp_optimum(&build_model(&inst).unwrap()).unwrap();
        assert_eq!(
            opt.cmax,
            brute_force_solve(&inst, 10).unwrap().optimum,
            "seed {seed}"
        );
    }
}

#[test]
fn large_models_are_refused_by_enumeration() {
    let mut r = common::rng(0);
    let inst = common::instance(&mut r, 5, 2, Mode::Max, |_| 3);
    assert!(enumerate_milp_optimum(&build_model(&inst).unwrap()).is_err());
}

#[test]
fn names_are_one_based_and_short() {
    let mut r = common::rng(2);
    let inst = common::instance(&mut r, 50, 5, Mode::Max, |r| r.gen_range(1..=9));
    let model = build_model(&inst).unwrap();
    assert_eq!(model.vars[0], VarId::X { i: 0, j: 1, k: 0 });
    let lp = export_lp(&model);
    assert!(lp.contains("x_49_50_5"));
    assert!(lp.contains("y_50_5"));
    assert!(model.constraints.iter().all(|c| c.name.len() <= 255));
    assert_eq!(
        lp.lines().filter(|l| l.contains(':')).count(),
        model.constraint_count() + 1
    );
}
