//! The chained-mode cipher: keys, per-block maps and whole-message encryption.
//!
//! A key is a Latin square of order `2^k` (with its parastrophe precomputed).
//! Encryption threads a leader vector of `n` symbols through the message; the
//! IV is the initial leader and is not secret.
//!
//! Table lookups are indexed by secret data, so none of this is constant-time.

mod bits;
mod frame;

pub use bits::{pack_bits, pad, unpack_bits, unpad};
pub use frame::{
    Cca2Header, CipherFrame, EXPANDER_DEFAULT, EXPANDER_EXTERNAL, FRAME_MAGIC, FRAME_V1, FRAME_V2,
};

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::quasigroup::{random_latin_square, LatinSquare, Quasigroup};
use crate::transform::{check_k, d_step, e_step, BlockVector, OpCounts};

/// Secret key: a quasigroup of order `2^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SebqKey {
    k: u8,
    q: Arc<Quasigroup>,
}

impl SebqKey {
    /// Random key of order `2^k` drawn from `rng`.
    pub fn generate<R: Rng + ?Sized>(k: u8, rng: &mut R) -> Result<Self> {
        check_k(k)?;
        let square = random_latin_square(1 << k, rng)?;
        Self::from_square(square)
    }

    /// Wraps an existing Latin square whose order is a power of two in `2..=256`.
    pub fn from_square(square: LatinSquare) -> Result<Self> {
        let order = square.order();
        if order < 2 || !order.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(order));
        }
        let k = order.trailing_zeros() as u8;
        check_k(k)?;
        Ok(Self {
            k,
            q: Arc::new(Quasigroup::new(square)),
        })
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn order(&self) -> usize {
        1 << self.k
    }

    pub fn quasigroup(&self) -> &Quasigroup {
        &self.q
    }

    pub(crate) fn shared_quasigroup(&self) -> Arc<Quasigroup> {
        Arc::clone(&self.q)
    }

    pub fn square(&self) -> &LatinSquare {
        self.q.mul_table()
    }

    fn check_vector(&self, v: &BlockVector) -> Result<()> {
        if v.k() != self.k {
            return Err(Error::KeyMismatch {
                key_k: self.k,
                frame_k: v.k(),
            });
        }
        Ok(())
    }

    fn check_iv(&self, iv: &BlockVector) -> Result<()> {
        self.check_vector(iv)?;
        if iv.is_empty() {
            return Err(Error::Empty("IV"));
        }
        Ok(())
    }
}

/// Deterministic key generation from a 64-bit seed.
pub fn keygen(k: u8, seed: u64) -> Result<SebqKey> {
    SebqKey::generate(k, &mut ChaCha20Rng::seed_from_u64(seed))
}

/// The leader vector carried from block to block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CipherState {
    leader: BlockVector,
}

impl CipherState {
    pub fn new(leader: BlockVector) -> Result<Self> {
        if leader.is_empty() {
            return Err(Error::Empty("leader"));
        }
        Ok(Self { leader })
    }

    pub fn leader(&self) -> &BlockVector {
        &self.leader
    }

    pub fn len(&self) -> usize {
        self.leader.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leader.is_empty()
    }

    fn symbols_mut(&mut self) -> &mut [u8] {
        self.leader.symbols_mut()
    }
}

/// Encrypts one symbol: returns the ciphertext symbol and the next state.
pub fn encrypt_block(key: &SebqKey, m: u8, state: &CipherState) -> Result<(u8, CipherState)> {
    key.check_vector(state.leader())?;
    key.q.check_symbol(m)?;
    let mut next = state.clone();
    let c = e_step(&key.q, next.symbols_mut(), m, &mut ());
    Ok((c, next))
}

/// Decrypts one symbol: returns the plaintext symbol and the next state.
pub fn decrypt_block(key: &SebqKey, c: u8, state: &CipherState) -> Result<(u8, CipherState)> {
    key.check_vector(state.leader())?;
    key.q.check_symbol(c)?;
    let mut next = state.clone();
    let m = d_step(&key.q, next.symbols_mut(), c, &mut ());
    Ok((m, next))
}

/// Encrypts `message` under `iv`. The IV itself is left untouched.
pub fn encrypt(key: &SebqKey, iv: &BlockVector, message: &BlockVector) -> Result<BlockVector> {
    Ok(encrypt_instrumented(key, iv, message)?.0)
}

/// [`encrypt`], also returning the table lookups and XORs it performed.
pub fn encrypt_instrumented(
    key: &SebqKey,
    iv: &BlockVector,
    message: &BlockVector,
) -> Result<(BlockVector, OpCounts)> {
    key.check_iv(iv)?;
    key.check_vector(message)?;
    let mut leader = iv.symbols().to_vec();
    let mut counts = OpCounts::default();
    let out = message
        .iter()
        .map(|&m| e_step(&key.q, &mut leader, m, &mut counts))
        .collect();
    Ok((BlockVector::new(key.k, out)?, counts))
}

/// Decrypts `ciphertext` under `iv`.
pub fn decrypt(key: &SebqKey, iv: &BlockVector, ciphertext: &BlockVector) -> Result<BlockVector> {
    key.check_iv(iv)?;
    key.check_vector(ciphertext)?;
    let mut leader = iv.symbols().to_vec();
    let out = ciphertext
        .iter()
        .map(|&c| d_step(&key.q, &mut leader, c, &mut ()))
        .collect();
    BlockVector::new(key.k, out)
}

/// Pads `data`, encrypts it under `iv` and wraps the result in a v1 frame.
pub fn seal(key: &SebqKey, iv: &BlockVector, data: &[u8]) -> Result<CipherFrame> {
    let bit_len = data.len() * 8;
    let padded = pad(data, bit_len, key.k)?;
    let ct = encrypt(key, iv, &padded)?;
    CipherFrame::new(iv.clone(), ct, bit_len as u64, None)
}

/// Decrypts a v1 frame and strips its padding. The recovered bit length must
/// match the header.
pub fn open(key: &SebqKey, frame: &CipherFrame) -> Result<Vec<u8>> {
    if frame.cca2.is_some() {
        return Err(Error::Unsupported("v2 frame needs the expander scheme".into()));
    }
    let pt = decrypt(key, &frame.iv, &frame.payload)?;
    unpad_checked(&pt, frame.bit_len)
}

pub(crate) fn unpad_checked(padded: &BlockVector, bit_len: u64) -> Result<Vec<u8>> {
    let (bytes, len) = unpad(padded)?;
    if len as u64 != bit_len {
        return Err(Error::MalformedPadding);
    }
    Ok(bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quasigroup::LatinSquare;
    use crate::transform::e_transform;

    fn xor_key(k: u8) -> SebqKey {
        SebqKey::from_square(LatinSquare::xor_table(1 << k).unwrap()).unwrap()
    }

    fn bv(k: u8, s: &[u8]) -> BlockVector {
        BlockVector::new(k, s.to_vec()).unwrap()
    }

    #[test]
    fn keygen_guards_and_determinism() {
        let k1 = keygen(1, 3).unwrap();
        assert_eq!(k1.order(), 2);
        assert_eq!(keygen(4, 7).unwrap(), keygen(4, 7).unwrap());
        assert_ne!(keygen(4, 7).unwrap(), keygen(4, 8).unwrap());
        assert!(matches!(keygen(9, 0), Err(Error::InvalidK(9))));
        assert!(matches!(keygen(0, 0), Err(Error::InvalidK(0))));
    }

    #[test]
    fn block_examples() {
        let key = xor_key(2);
        let st = CipherState::new(bv(2, &[1, 2])).unwrap();
        let (c, next) = encrypt_block(&key, 3, &st).unwrap();
        assert_eq!(c, 0);
        assert_eq!(next.leader().symbols(), &[2, 2]);
        let (m, back) = decrypt_block(&key, 0, &st).unwrap();
        assert_eq!(m, 3);
        assert_eq!(back, next);

        let zero = CipherState::new(bv(2, &[0, 0, 0])).unwrap();
        let (c, next) = encrypt_block(&key, 0, &zero).unwrap();
        assert_eq!(c, 0);
        assert_eq!(next, zero);
        assert!(encrypt_block(&key, 4, &zero).is_err());
    }

    #[test]
    fn single_leader_uses_one_lookup() {
        let key = keygen(3, 11).unwrap();
        let q = key.quasigroup();
        for r in 0..8u8 {
            let st = CipherState::new(bv(3, &[r])).unwrap();
            for m in 0..8u8 {
                let (c, _) = encrypt_block(&key, m, &st).unwrap();
                assert_eq!(c, q.mul(r, m));
                let (p, _) = decrypt_block(&key, m, &st).unwrap();
                assert_eq!(p, q.ldiv(r, m));
            }
        }
    }

    #[test]
    fn message_examples() {
        let key = xor_key(2);
        let iv = bv(2, &[1, 2]);
        let c = encrypt(&key, &iv, &bv(2, &[3, 0])).unwrap();
        assert_eq!(c.symbols(), &[0, 0]);
        assert_eq!(decrypt(&key, &iv, &c).unwrap().symbols(), &[3, 0]);
        assert!(encrypt(&key, &iv, &bv(2, &[])).unwrap().is_empty());
        assert!(decrypt(&key, &iv, &bv(2, &[])).unwrap().is_empty());
        assert!(matches!(
            encrypt(&key, &bv(2, &[]), &bv(2, &[1])),
            Err(Error::Empty(_))
        ));
        assert!(matches!(
            encrypt(&key, &bv(3, &[1]), &bv(2, &[1])),
            Err(Error::KeyMismatch { .. })
        ));
    }

    #[test]
    fn exhaustive_bijection_k2_l3() {
        let key = keygen(2, 5).unwrap();
        let iv = bv(2, &[3, 1]);
        let mut seen = std::collections::HashSet::new();
        for x in 0..64u8 {
            let m = bv(2, &[x >> 4, (x >> 2) & 3, x & 3]);
            let c = encrypt(&key, &iv, &m).unwrap();
            assert_eq!(decrypt(&key, &iv, &c).unwrap(), m);
            assert!(seen.insert(c.into_symbols()));
        }
        assert_eq!(seen.len(), 64);
    }

    #[test]
    fn matches_e_transform_and_state_sequences() {
        let mut rng = ChaCha20Rng::seed_from_u64(99);
        for _ in 0..200 {
            let k = rng.random_range(1..=5);
            let key = SebqKey::generate(k, &mut rng).unwrap();
            let n = rng.random_range(1..6);
            let l = rng.random_range(0..20);
            let iv = BlockVector::random(k, n, &mut rng);
            let m = BlockVector::random(k, l, &mut rng);
            let c = encrypt(&key, &iv, &m).unwrap();
            let (ec, _) = e_transform(key.quasigroup(), &iv, &m).unwrap();
            assert_eq!(c.symbols(), &ec[..]);

            let mut es = CipherState::new(iv.clone()).unwrap();
            let mut ds = es.clone();
            for (&mi, &ci) in m.iter().zip(c.iter()) {
                let (c2, e2) = encrypt_block(&key, mi, &es).unwrap();
                let (m2, d2) = decrypt_block(&key, ci, &ds).unwrap();
                assert_eq!((c2, m2), (ci, mi));
                assert_eq!(e2, d2);
                es = e2;
                ds = d2;
            }
        }
    }

    #[test]
    fn iv_changes_ciphertext() {
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let key = SebqKey::generate(4, &mut rng).unwrap();
        let m = BlockVector::random(4, 32, &mut rng);
        let iv = BlockVector::random(4, 8, &mut rng);
        let mut iv2 = iv.clone();
        iv2.symbols_mut()[0] ^= 1;
        let a = encrypt(&key, &iv, &m).unwrap();
        let b = encrypt(&key, &iv2, &m).unwrap();
        let same = a.iter().zip(b.iter()).filter(|(x, y)| x == y).count();
        // Expected 2 equal blocks out of 32.
        assert!(same < 10, "{same} equal blocks");
    }

    #[test]
    fn seal_open_round_trip() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for k in [1u8, 3, 4, 8] {
            let key = SebqKey::generate(k, &mut rng).unwrap();
            let iv = BlockVector::random(k, 5, &mut rng);
            for len in [0usize, 1, 7, 100] {
                let data: Vec<u8> = (0..len).map(|_| rng.random()).collect();
                let frame = seal(&key, &iv, &data).unwrap();
                let parsed = CipherFrame::from_bytes(&frame.to_bytes()).unwrap();
                assert_eq!(open(&key, &parsed).unwrap(), data);
            }
        }
    }
}
