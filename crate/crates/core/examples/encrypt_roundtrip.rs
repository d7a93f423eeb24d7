//! Quasigroup division on the 5-element example, then the string transform
//! and a full encrypt/decrypt round trip with power-of-two orders.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sebq::cipher::{decrypt, encrypt, SebqKey};
use sebq::transform::{e_transform, BlockVector};
use sebq::quasigroup::{parastrophe, LatinSquare, Quasigroup};

fn main() -> sebq::Result<()> {
    let mul = LatinSquare::from_rows(&[
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ])?;
    println!("left division table: {:?}", parastrophe(&mul).rows());
    let q = Quasigroup::new(mul);
    println!("2 * 3 = {}, 2 \\ 4 = {}", q.mul(2, 3), q.ldiv(2, 4));

    let q4 = Quasigroup::new(LatinSquare::from_rows(&[[2, 1, 0, 3], [3, 0, 1, 2], [1, 2, 3, 0], [0, 3, 2, 1]])?);
    let (gamma, leader) = e_transform(&q4, &[1, 3], &[0, 3, 2, 2])?;
    println!("e-transform of [0,3,2,2] under leader [1,3]: {gamma:?}, next leader {leader:?}");

    let mut rng = ChaCha20Rng::seed_from_u64(1);
    let key = SebqKey::generate(4, &mut rng)?;
    let iv = BlockVector::random(4, 8, &mut rng);
    let msg = BlockVector::new(4, b"quasigroup".iter().flat_map(|b| [b >> 4, b & 15]).collect())?;
    let ct = encrypt(&key, &iv, &msg)?;
    println!("plaintext  {:?}", msg.symbols());
    println!("ciphertext {:?}", ct.symbols());
    assert_eq!(decrypt(&key, &iv, &ct)?, msg);
    Ok(())
}
