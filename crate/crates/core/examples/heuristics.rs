//! H1 and H2 on a random 60-job instance.

use batchsched::bench::{generate_instance, GenSpec};
use batchsched::heuristics::{gap, h1, h2, HeuristicConfig};
use batchsched::Mode;

fn main() -> batchsched::Result<()> {
    let spec = GenSpec {
        n: 60,
        m: 4,
        density_pct: 30.0,
        p_range: (10, 100),
        s_choices: vec![2, 3, 4],
        mode: Mode::Max,
        seed: 11,
    };
    let inst = generate_instance(&spec)?;
    let cfg = HeuristicConfig::new(1000, 42)?;

    let a = h1(&inst, &cfg)?;
    let b = h2(&inst, &cfg)?;
    let best = a.cmax.min(b.cmax);
    println!(
        "h1: {} -> {} (gap {:.4})",
        a.initial_cmax,
        a.cmax,
        gap(a.cmax, best)?
    );
    println!(
        "h2: {} -> {} (gap {:.4})",
        b.initial_cmax,
        b.cmax,
        gap(b.cmax, best)?
    );
    println!("h1 trace: {} steps, never increasing", a.trace.len());
    assert!(a.trace.windows(2).all(|w| w[1] <= w[0]));
    Ok(())
}
