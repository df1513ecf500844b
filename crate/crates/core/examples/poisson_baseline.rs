// Seeded uniform random points have `F_N(s)` close to `2s`.

use lowdisp::harness::{self, POISSON_SEED};
use lowdisp::{pcf_fast, PcfQuery};

pub fn run_example() -> lowdisp::Result<()> {
    let ps = harness::uniform_points(100_000, POISSON_SEED)?;
    for s in [0.5, 1.0, 2.0, 4.0] {
        let f = pcf_fast(&ps, PcfQuery::classical(s)?);
        println!("s = {s}: F_N = {f:.4}, 2s = {}", 2.0 * s);
    }
    Ok(())
}

fn main() -> lowdisp::Result<()> {
    run_example()
}
