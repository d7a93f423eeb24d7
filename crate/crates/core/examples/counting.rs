//! Latin-square counts by permanent formula and by backtracking, and the
//! log2 bounds around them.

use sebq::quasigroup::{
    count_latin_squares_backtrack, count_latin_squares_formula, known_latin_square_count,
    latin_square_log2_bounds,
};

fn main() -> sebq::Result<()> {
    for n in 1..=5 {
        let count = if n <= 4 {
            count_latin_squares_formula(n)?
        } else {
            count_latin_squares_backtrack(n)?
        };
        let b = latin_square_log2_bounds(n)?;
        println!(
            "L({n}) = {count:>6}  log2 {:>7.3} in [{:.3}, {:.3}]",
            (count as f64).log2(),
            b.lower,
            b.upper
        );
    }
    println!("L(10) = {}", known_latin_square_count(10).unwrap());
    let b = latin_square_log2_bounds(256)?;
    println!("log10 L(256) in [{:.1}, {:.1}]", b.lower / 10f64.log2(), b.upper / 10f64.log2());
    Ok(())
}
