//! Two machines with two distinct processing times. `solve_is` gives the
//! matching-based schedule, `solve_b2_max_two_values` adds the
//! recombination step that makes it optimal.

use batchsched::exact::{solve_b2_max_two_values, solve_is};
use batchsched::matching::CompatGraph;
use batchsched::oracle::brute_force_solve;
use batchsched::{Instance, Mode};

fn main() -> batchsched::Result<()> {
    // Jobs 1, 2, 3 take q = 5 and jobs 0, 4 take p = 3.
    let p = vec![3, 5, 5, 5, 3];
    let edges = [(0, 2), (1, 2), (1, 4)];
    let inst = Instance::new(p, 2, 1, Mode::Max, CompatGraph::new(5, &edges)?)?;

    let is = solve_is(&inst)?;
    let tux = solve_b2_max_two_values(&inst)?;
    let oracle = brute_force_solve(&inst, 10)?;
    println!("profile {:?}", tux.profile);
    println!(
        "IS Cmax {}, Tux Cmax {}, optimum {}",
        is.cmax, tux.cmax, oracle.optimum
    );
    println!(
        "candidates tried: {}, fixed-prepend value {:?}",
        tux.candidates, tux.literal_cmax
    );
    for (k, m) in tux.schedule.machines().iter().enumerate() {
        println!("  M{}: {:?}", k + 1, m);
    }
    Ok(())
}
