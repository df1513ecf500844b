// Measured gaps against the binary expansion formula, and the way one new
// point splits the largest gap.

use lowdisp::seq::{self, DyadicExpansion};

pub fn run_example() -> lowdisp::Result<()> {
    let n = 12;
    let emp = seq::empirical_gaps(&seq::generate(n)?)?;
    let theo = seq::theoretical_gaps(n)?;
    let d = DyadicExpansion::of(n as u64)?;
    println!("N = {n}: top index {}, n0 = {}", d.top_index, d.n0);
    println!("gap multiset distance {:.2e}, sum {:.15}", emp.multiset_distance(&theo).unwrap(), emp.sum());
    println!("dispersion {:.8} (formula {:.8})", seq::dispersion(&seq::generate(n)?)?, seq::dispersion_formula(n));

    let split = seq::observe_split(13)?;
    println!(
        "adding point 13 splits a gap of {:.6} into {:.6} + {:.6}",
        split.parent, split.pieces.0, split.pieces.1
    );
    Ok(())
}

fn main() -> lowdisp::Result<()> {
    run_example()
}
