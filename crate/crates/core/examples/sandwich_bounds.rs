// Finite-N bounds that trap `F_N(s)` and shrink towards `F(s)`.

use lowdisp::theory;
use lowdisp::{pcf_fast, seq, PcfQuery};

pub fn run_example() -> lowdisp::Result<()> {
    let s = 3.3;
    for n in [100, 1000, 10_000, 100_000] {
        let b = theory::fn_bounds(n, s)?;
        let f = pcf_fast(&seq::generate(n)?, PcfQuery::classical(s)?);
        println!(
            "N = {n:>6}: {:.6} <= {:.6} <= {:.6}  (K_max {}, K_min {}, width {:.2e})",
            b.lower, f, b.upper, b.counts.k_max, b.counts.k_min, b.width()
        );
    }
    println!("limit F({s}) = {:.6}", theory::f_limit(s)?);
    Ok(())
}

fn main() -> lowdisp::Result<()> {
    run_example()
}
