//! Generate a key, write it in the key-file format and read it back.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sebq::cipher::SebqKey;
use sebq::cli::key_fingerprint;
use sebq::quasigroup::{parse_key_file, write_key_file};

fn main() -> sebq::Result<()> {
    let mut rng = ChaCha20Rng::seed_from_u64(2024);
    let key = SebqKey::generate(2, &mut rng)?;
    let text = write_key_file(key.square());
    print!("{text}");
    let back = SebqKey::from_square(parse_key_file(&text)?)?;
    assert_eq!(back.square(), key.square());
    println!("order {} fingerprint {}", key.order(), key_fingerprint(&key));
    Ok(())
}
