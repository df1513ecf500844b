// Empirical pair correlation of the log sequence, with the fast and
// naive pair counts side by side.

use lowdisp::paircorr::{pair_count_fast, pair_count_naive};
use lowdisp::{pcf_curve, seq, PcfQuery};

pub fn run_example() -> lowdisp::Result<()> {
    let ps = seq::generate(1000)?;
    let q = PcfQuery::classical(2.0)?;
    let t = q.threshold(ps.n_points());
    println!("pairs within 2/N: fast {} naive {}", pair_count_fast(ps.points(), t), pair_count_naive(ps.points(), t));

    let table = pcf_curve(&ps, &[0.5, 1.0, 2.0, 4.0], 1.0)?;
    print!("{}", table.to_csv_string()?);
    Ok(())
}

fn main() -> lowdisp::Result<()> {
    run_example()
}
