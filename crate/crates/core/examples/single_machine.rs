//! One machine, both batch modes. The optimum is a maximum weight matching
//! (max mode) or a maximum cardinality matching (sum mode).

use batchsched::exact::{solve_b1_max, solve_b1_sum};
use batchsched::matching::CompatGraph;
use batchsched::{Instance, Mode};

fn main() -> batchsched::Result<()> {
    let g = CompatGraph::complete(3);
    let inst = Instance::new(vec![3, 5, 7], 1, 1, Mode::Max, g)?;

    let max = solve_b1_max(&inst)?;
    println!(
        "max mode: {:?} Cmax {} (closed form {:?})",
        max.schedule.machine(0),
        max.cmax,
        max.formula_cmax
    );

    let sum = solve_b1_sum(&inst.with_mode(Mode::Sum))?;
    println!("sum mode: {:?} Cmax {}", sum.schedule.machine(0), sum.cmax);
    Ok(())
}
