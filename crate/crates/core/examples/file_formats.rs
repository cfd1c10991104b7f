//! Instance and schedule text formats.

use batchsched::format::{parse_instance, parse_schedule, write_schedule};
use batchsched::model::validate;
use batchsched::solver::{solve, Algorithm, SolveOptions};

fn main() -> batchsched::Result<()> {
    let text = "# n m s mode\n4 2 1 max\n6 4 4 2\n1 2\n3 4\n";
    let inst = parse_instance(text)?;
    let solved = solve(&inst, Algorithm::Auto, &SolveOptions::default())?;
    let out = write_schedule(&solved.schedule, solved.cmax);
    print!("{out}");

    let (back, cmax) = parse_schedule(&out)?;
    assert!(validate(&back, &inst).is_empty());
    println!("solved by {}, re-read Cmax {cmax}", solved.used);

    match parse_instance("2 1 1 max\n3 0\n") {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
