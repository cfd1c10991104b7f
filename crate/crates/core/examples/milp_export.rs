//! Build the mixed-integer model, write it in LP format, read it back and
//! solve a tiny one by enumeration.

use batchsched::matching::CompatGraph;
use batchsched::milp::{build_model, enumerate_milp_optimum, export_lp, parse_lp};
use batchsched::{Instance, Mode};

fn main() -> batchsched::Result<()> {
    let inst = Instance::new(vec![3, 5, 7], 1, 1, Mode::Max, CompatGraph::complete(3))?;
    let model = build_model(&inst)?;
    let lp = export_lp(&model);
    print!("{lp}");

    assert_eq!(parse_lp(&lp)?, model);
    let opt = enumerate_milp_optimum(&model)?;
    println!(
        "\\ {} binaries, {} rows, optimum {} with {:?}",
        model.binary_count(),
        model.constraint_count(),
        opt.cmax,
        opt.schedule.machine(0)
    );
    Ok(())
}
