//! A small experiment grid: GAP and time statistics per cell as CSV.

use batchsched::bench::BenchConfig;

fn main() -> batchsched::Result<()> {
    let cfg = BenchConfig::parse(
        "sizes = 10, 20\n\
         machines = 2, 3\n\
         densities = 50\n\
         p_min = 10\n\
         p_max = 100\n\
         s_set = 2, 3, 4\n\
         iters = 200\n\
         seed = 1\n\
         methods = h1, h2\n\
         instances_per_cell = 5\n",
    )?;
    let report = batchsched::bench::run_config(&cfg)?;
    print!("{}", report.to_csv());
    Ok(())
}
