//! The expander-wrapped variant of the chained cipher.
//!
//! Every block is encrypted against `G_a(R)` instead of the leader `R`
//! itself: the `k0`-block leader is expanded to `a` blocks, the block is
//! encrypted under that expanded leader, and the resulting `a`-block leader
//! is XOR-folded back to `k0` blocks to form the next `R`.
//!
//! The construction defeats table recovery from decryption queries, because
//! the decryption oracle no longer exposes single `\` lookups. It is still
//! length-preserving and deterministic per IV. So a decryption oracle that
//! answers every single-block ciphertext except the challenge gives the
//! challenge plaintext away by elimination: it is the one plaintext symbol
//! that never comes back. Nothing here is a proven PRF or a proven IND-CCA2
//! scheme.
//!
//! The checksum makes the XOR of every post-step leader equal to the output
//! symbol, and XOR-folding preserves that sum, so the compressed state
//! carries `k·(k0 − 1)` bits beyond the last ciphertext symbol. With `k0 = 1`
//! the next state is exactly the previous ciphertext symbol. After a
//! tampered block, decryption resynchronises with probability
//! `2^(−k·(k0 − 1))` per block.

use std::fmt;
use std::sync::Arc;

use crate::cipher::{
    pad, unpad_checked, Cca2Header, CipherFrame, SebqKey, EXPANDER_DEFAULT,
};
use crate::error::{Error, Result};
use crate::quasigroup::Quasigroup;
use crate::transform::{d_step, e_step, BlockVector};

/// Minimum sponge state width in blocks.
pub const SPONGE_WIDTH: usize = 16;

/// Constant block that prefixes every squeeze input.
pub const DOMAIN_PREFIX: u8 = 0xA5;

/// Deterministic map from a leader (the seed) to an `a`-block leader.
pub trait Expander: Send + Sync {
    /// Output length in blocks.
    fn output_len(&self) -> usize;

    /// Frame identifier: [`EXPANDER_DEFAULT`] or
    /// [`EXPANDER_EXTERNAL`](crate::cipher::EXPANDER_EXTERNAL).
    fn id(&self) -> u8;

    /// Writes `output_len()` symbols of width `seed.k()` into `out`.
    fn expand_into(&self, seed: &[u8], out: &mut Vec<u8>);
}

impl fmt::Debug for dyn Expander {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Expander")
            .field("id", &self.id())
            .field("a", &self.output_len())
            .finish()
    }
}

/// The default expander: a sponge built from the secret quasigroup.
///
/// Absorb: e-transform the seed from an all-zeros leader of width
/// `max(SPONGE_WIDTH, seed.len())`. Squeeze: for each output block `j`,
/// e-transform `[DOMAIN_PREFIX, j]` (both reduced mod the order) and keep the
/// last ciphertext symbol.
#[derive(Debug, Clone)]
pub struct QuasigroupSponge {
    q: Arc<Quasigroup>,
    a: usize,
}

impl QuasigroupSponge {
    pub fn new(key: &SebqKey, a: usize) -> Result<Self> {
        check_a(a)?;
        Ok(Self {
            q: key.shared_quasigroup(),
            a,
        })
    }
}

fn check_a(a: usize) -> Result<()> {
    if a < 2 || a > u16::MAX as usize {
        return Err(Error::OutOfGuard {
            what: "expander output length a",
            value: a,
            range: "2..=65535",
        });
    }
    Ok(())
}

impl Expander for QuasigroupSponge {
    fn output_len(&self) -> usize {
        self.a
    }

    fn id(&self) -> u8 {
        EXPANDER_DEFAULT
    }

    fn expand_into(&self, seed: &[u8], out: &mut Vec<u8>) {
        let mask = (self.q.order() - 1) as u8;
        let mut state = vec![0u8; SPONGE_WIDTH.max(seed.len())];
        for &s in seed {
            e_step(&self.q, &mut state, s, &mut ());
        }
        out.clear();
        for j in 0..self.a {
            e_step(&self.q, &mut state, DOMAIN_PREFIX & mask, &mut ());
            out.push(e_step(&self.q, &mut state, j as u8 & mask, &mut ()));
        }
    }
}

/// Expands `seed` under `e`; the result has `e.output_len()` blocks.
pub fn expand(e: &dyn Expander, seed: &BlockVector) -> Result<BlockVector> {
    if seed.is_empty() {
        return Err(Error::Empty("expander seed"));
    }
    let mut out = Vec::with_capacity(e.output_len());
    e.expand_into(seed, &mut out);
    BlockVector::new(seed.k(), out)
}

/// XOR-folds `wide` into `k0` blocks: block `i` lands on `i mod k0`.
pub fn compress(wide: &[u8], k0: usize, out: &mut [u8]) {
    debug_assert_eq!(out.len(), k0);
    out.fill(0);
    for (i, &s) in wide.iter().enumerate() {
        out[i % k0] ^= s;
    }
}

/// Base key plus expander.
#[derive(Debug, Clone)]
pub struct Cca2Key {
    base: SebqKey,
    expander: Arc<dyn Expander>,
}

impl Cca2Key {
    /// Uses the default sponge with output length `a`.
    pub fn new(base: SebqKey, a: usize) -> Result<Self> {
        let sponge = QuasigroupSponge::new(&base, a)?;
        Ok(Self {
            base,
            expander: Arc::new(sponge),
        })
    }

    /// Default `a = 2·k0` for leaders of `k0` blocks.
    pub fn with_default_a(base: SebqKey, k0: usize) -> Result<Self> {
        Self::new(base, (2 * k0).max(2))
    }

    /// Plugs in an arbitrary expander.
    pub fn with_expander(base: SebqKey, expander: Arc<dyn Expander>) -> Result<Self> {
        check_a(expander.output_len())?;
        Ok(Self { base, expander })
    }

    pub fn base(&self) -> &SebqKey {
        &self.base
    }

    pub fn expander(&self) -> &dyn Expander {
        self.expander.as_ref()
    }

    pub fn a(&self) -> usize {
        self.expander.output_len()
    }

    pub fn header(&self) -> Cca2Header {
        Cca2Header {
            a: self.a() as u16,
            expander_id: self.expander.id(),
        }
    }

    fn check(&self, iv: &BlockVector, data: &BlockVector) -> Result<()> {
        for v in [iv, data] {
            if v.k() != self.base.k() {
                return Err(Error::KeyMismatch {
                    key_k: self.base.k(),
                    frame_k: v.k(),
                });
            }
        }
        if iv.is_empty() {
            return Err(Error::Empty("IV"));
        }
        Ok(())
    }
}

fn run(
    key: &Cca2Key,
    iv: &BlockVector,
    input: &BlockVector,
    step: fn(&Quasigroup, &mut [u8], u8, &mut ()) -> u8,
) -> Result<BlockVector> {
    key.check(iv, input)?;
    let q = key.base.quasigroup();
    let mut r = iv.symbols().to_vec();
    let mut wide = Vec::with_capacity(key.a());
    let out = input
        .iter()
        .map(|&x| {
            key.expander.expand_into(&r, &mut wide);
            let y = step(q, &mut wide, x, &mut ());
            let k0 = r.len();
            compress(&wide, k0, &mut r);
            y
        })
        .collect();
    BlockVector::new(key.base.k(), out)
}

pub fn encrypt_cca2(key: &Cca2Key, iv: &BlockVector, message: &BlockVector) -> Result<BlockVector> {
    run(key, iv, message, e_step::<()>)
}

pub fn decrypt_cca2(
    key: &Cca2Key,
    iv: &BlockVector,
    ciphertext: &BlockVector,
) -> Result<BlockVector> {
    run(key, iv, ciphertext, d_step::<()>)
}

/// Pads and encrypts `data` into a v2 frame.
pub fn seal_cca2(key: &Cca2Key, iv: &BlockVector, data: &[u8]) -> Result<CipherFrame> {
    let bit_len = data.len() * 8;
    let padded = pad(data, bit_len, key.base.k())?;
    let ct = encrypt_cca2(key, iv, &padded)?;
    CipherFrame::new(iv.clone(), ct, bit_len as u64, Some(key.header()))
}

/// Decrypts a v2 frame; its `a` and expander id must match the key.
pub fn open_cca2(key: &Cca2Key, frame: &CipherFrame) -> Result<Vec<u8>> {
    let h = frame
        .cca2
        .ok_or_else(|| Error::Unsupported("v1 frame has no expander parameters".into()))?;
    if h != key.header() {
        return Err(Error::ExpanderMismatch(format!(
            "frame has a = {}, expander {:#04x}; key has a = {}, expander {:#04x}",
            h.a,
            h.expander_id,
            key.a(),
            key.expander.id()
        )));
    }
    let pt = decrypt_cca2(key, &frame.iv, &frame.payload)?;
    unpad_checked(&pt, frame.bit_len)
}
