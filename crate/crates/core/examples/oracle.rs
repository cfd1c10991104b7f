//! Exhaustive optimum of a small instance, compared with `auto`.

use batchsched::bench::{generate_instance, GenSpec};
use batchsched::oracle::brute_force_solve;
use batchsched::solver::{solve, Algorithm, SolveOptions};
use batchsched::Mode;

fn main() -> batchsched::Result<()> {
    let spec = GenSpec {
        n: 9,
        m: 3,
        density_pct: 50.0,
        p_range: (10, 100),
        s_choices: vec![2, 3, 4],
        mode: Mode::Max,
        seed: 3,
    };
    let inst = generate_instance(&spec)?;
    let exact = brute_force_solve(&inst, 10)?;
    println!("optimum {} after {} batchings", exact.optimum, exact.explored);
    for (k, m) in exact.witness.machines().iter().enumerate() {
        println!("  M{}: {:?}", k + 1, m);
    }
    let h1 = solve(&inst, Algorithm::H1, &SolveOptions::default())?;
    println!("h1 reaches {}", h1.cmax);
    Ok(())
}
