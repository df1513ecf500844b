// Where the limit crosses the Poissonian line `2s`.

use lowdisp::theory;

pub fn run_example() -> lowdisp::Result<()> {
    for fp in theory::fixed_points() {
        println!("s = {:.12} on piece {} (residual {:.1e})", fp.s, fp.piece, fp.residual);
    }
    println!("closed form: {:.12}", theory::nontrivial_fixed_point_closed_form());
    for s in [6.0, 12.0, 13.0, 20.0] {
        println!("F({s}) - 2s = {:+.4}", theory::f_limit(s)? - 2.0 * s);
    }
    Ok(())
}

fn main() -> lowdisp::Result<()> {
    run_example()
}
