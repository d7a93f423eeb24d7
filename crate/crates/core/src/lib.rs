//! A quasigroup-based symmetric cipher in a chained mode of operation.
//!
//! The secret key is a random Latin square of order `2^k`. Messages are split
//! into `k`-bit symbols and encrypted one block at a time; each block is folded
//! through an `n`-symbol leader vector that is updated after every block, so
//! the ciphertext of a block depends on the IV and every earlier plaintext
//! block.
//!
//! Layout:
//!
//! * [`quasigroup`]: Latin squares, parastrophes, random generation, counting.
//! * [`transform`]: the e/d string transformations the cipher is built from.
//! * [`cipher`]: keys, block and message encryption, bit packing, padding and
//!   the binary frame format.
//! * [`feistel`]: the variant that expands the leader through a keyed expander
//!   before every block.
//! * [`games`]: IND-CPA / IND-CCA / LOR experiments and the concrete attacks.
//! * [`analysis`]: randomness tests, avalanche experiments, operation counts
//!   and minimum-order estimates.
//! * [`cli`]: the `sebq` command-line front end.
//!
//! ```
//! use rand::SeedableRng;
//! use rand_chacha::ChaCha20Rng;
//! use sebq::cipher::{decrypt, encrypt, SebqKey};
//! use sebq::transform::BlockVector;
//!
//! let mut rng = ChaCha20Rng::seed_from_u64(7);
//! let key = SebqKey::generate(4, &mut rng).unwrap();
//! let iv = BlockVector::random(4, 8, &mut rng);
//! let msg = BlockVector::new(4, vec![1, 2, 3, 4, 5]).unwrap();
//! let ct = encrypt(&key, &iv, &msg).unwrap();
//! assert_eq!(decrypt(&key, &iv, &ct).unwrap(), msg);
//! ```

pub mod analysis;
pub mod cipher;
pub mod cli;
pub mod error;
pub mod feistel;
pub mod games;
pub mod quasigroup;
pub mod transform;

pub use error::{Error, Result};
