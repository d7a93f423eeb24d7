//! The expander-keyed variant: round trip, frame header, and how far a
//! single-block tamper propagates.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sebq::cipher::SebqKey;
use sebq::feistel::{decrypt_cca2, encrypt_cca2, open_cca2, seal_cca2, Cca2Key};
use sebq::transform::BlockVector;

fn main() -> sebq::Result<()> {
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    let base = SebqKey::generate(4, &mut rng)?;
    let key = Cca2Key::with_default_a(base, 8)?;
    let iv = BlockVector::random(4, 8, &mut rng);

    let frame = seal_cca2(&key, &iv, b"expander keyed")?;
    println!("frame version {}, a = {}", frame.version(), key.a());
    println!("{}", String::from_utf8_lossy(&open_cca2(&key, &frame)?));

    let msg = BlockVector::random(4, 40, &mut rng);
    let mut ct = encrypt_cca2(&key, &iv, &msg)?.into_symbols();
    ct[5] ^= 1;
    let back = decrypt_cca2(&key, &iv, &BlockVector::new(4, ct)?)?;
    let wrong: Vec<usize> = (0..msg.len()).filter(|&i| back[i] != msg[i]).collect();
    println!("flipping ciphertext block 5 garbles blocks {wrong:?}");
    Ok(())
}
