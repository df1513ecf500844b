// Weak pair correlations: for alpha < 1 the statistic grows like
// `3 log(2) s`, not `2s`.

use lowdisp::harness;
use lowdisp::theory::{self, WEAK_SLOPE};

pub fn run_example() -> lowdisp::Result<()> {
    let study = harness::run_weak_study(100_000, &[0.25, 0.5, 0.75], &[0.5, 1.0, 2.0])?;
    print!("{}", study.table.to_csv_string()?);
    for (alpha, dev) in &study.deviations {
        println!("alpha {alpha}: max deviation from {WEAK_SLOPE:.4} s is {dev:.4}");
    }
    let g = theory::weak_lower_bound(100_000_000, 1.0, 0.5)?;
    println!("lower bound at N = 1e8, s = 1: {g:.6}");
    Ok(())
}

fn main() -> lowdisp::Result<()> {
    run_example()
}
