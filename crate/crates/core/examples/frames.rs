//! Seal bytes into a v1 frame, show its layout and parse it back.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sebq::cipher::{open, seal, CipherFrame, SebqKey};
use sebq::transform::BlockVector;

fn main() -> sebq::Result<()> {
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    let key = SebqKey::generate(8, &mut rng)?;
    let iv = BlockVector::random(8, 4, &mut rng);
    let frame = seal(&key, &iv, b"attack at dawn")?;
    let bytes = frame.to_bytes();
    println!("magic+version   {}", hex::encode(&bytes[..5]));
    println!("k, n, bit_len   {}", hex::encode(&bytes[5..16]));
    println!("iv              {}", hex::encode(&bytes[16..20]));
    println!("payload         {}", hex::encode(&bytes[20..]));
    let parsed = CipherFrame::from_bytes(&bytes)?;
    println!("{}", String::from_utf8_lossy(&open(&key, &parsed)?));
    println!("truncated: {}", CipherFrame::from_bytes(&bytes[..bytes.len() - 1]).unwrap_err());
    Ok(())
}
