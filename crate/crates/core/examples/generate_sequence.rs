// The first points of `{log2(2n - 1)}` and their ascending-gap rotation.

use lowdisp::seq;

pub fn run_example() -> lowdisp::Result<()> {
    for n in 1..=8u64 {
        println!("x_{n} = {:.6}", seq::term(n));
    }

    let ps = seq::generate(8)?;
    let shifted = seq::generate_shifted(8)?;
    println!("sorted:  {:?}", ps.points().iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>());
    println!("shifted: {:?}", shifted.points().iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>());
    Ok(())
}

fn main() -> lowdisp::Result<()> {
    run_example()
}
