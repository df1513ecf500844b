// The limit `F(s)` piece by piece, and the floor form that agrees with it.

use lowdisp::theory::{self, Piece, LN_4};

pub fn run_example() -> lowdisp::Result<()> {
    for k in 0..4 {
        let p = Piece::new(k);
        println!("piece {k}: [{:.4}, {:.4}) F = {} - {}/(4 log(2) s)", p.s_lo, p.s_hi, p.affine, p.coeff);
    }
    for s in [0.5, 1.0, 2.0, 5.0, 10.0] {
        println!("F({s}) = {:.6}  floor form {:.6}", theory::f_limit(s)?, theory::f_limit_floor_form(s)?);
    }
    let limit = theory::f_limit_piecewise(20.0 / LN_4)?;
    println!("largest jump over {} pieces: {:.2e}", limit.pieces.len(), limit.max_continuity_gap());
    Ok(())
}

fn main() -> lowdisp::Result<()> {
    run_example()
}
