//! Identical processing times on several machines.

use batchsched::exact::{pairs_first_formula, solve_bm_max_identical, solve_bm_sum_identical};
use batchsched::matching::CompatGraph;
use batchsched::{Instance, Mode};

fn main() -> batchsched::Result<()> {
    let g = CompatGraph::new(7, &[(0, 1), (2, 3), (4, 5), (5, 6)])?;
    let inst = Instance::new(vec![4; 7], 3, 2, Mode::Max, g)?;

    let max = solve_bm_max_identical(&inst)?;
    println!("max mode: Cmax {}", max.cmax);
    for (k, m) in max.schedule.machines().iter().enumerate() {
        println!("  M{}: {:?}", k + 1, m);
    }

    let sum = solve_bm_sum_identical(&inst.with_mode(Mode::Sum))?;
    let pairs = sum.layout.matching.len();
    println!(
        "sum mode: Cmax {} (pairs-first layout {}, formula {}, pairs split: {})",
        sum.cmax,
        sum.layout.cmax,
        pairs_first_formula(7, 3, pairs, 4, 2),
        sum.split_pairs
    );
    Ok(())
}
