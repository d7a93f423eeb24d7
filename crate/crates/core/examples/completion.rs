//! Completing a partial Latin square: unique, ambiguous and contradictory
//! inputs.

use sebq::games::{complete_latin_square, PartialLatinSquare};

fn main() -> sebq::Result<()> {
    let rows = |v: &[&[i8]]| -> Vec<Vec<Option<u8>>> {
        v.iter()
            .map(|r| r.iter().map(|&x| (x >= 0).then_some(x as u8)).collect())
            .collect()
    };
    let unique = PartialLatinSquare::from_rows(&rows(&[
        &[0, 1, 2, 3],
        &[1, 0, 3, 2],
        &[2, 3, 0, 1],
        &[-1, -1, -1, -1],
    ]))?;
    println!("{unique:?}");
    println!("-> {:?}", complete_latin_square(&unique).kind());
    let open = PartialLatinSquare::new(4)?;
    println!("empty 4x4 -> {:?}", complete_latin_square(&open).kind());
    // No row/column clash yet, but row 2 has nowhere left to put a 0.
    let stuck = PartialLatinSquare::from_rows(&rows(&[
        &[0, -1, -1],
        &[-1, 0, -1],
        &[-1, -1, 1],
    ]))?;
    println!("contradictory 3x3 -> {:?}", complete_latin_square(&stuck).kind());
    Ok(())
}
