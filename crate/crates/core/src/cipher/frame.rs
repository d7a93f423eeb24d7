//! Binary ciphertext frames. All integers are big-endian.
//!
//! ```text
//! v1: "SEBQ" | 0x01 | k:u8 | n:u16 | bit_len:u64 | iv | payload
//! v2: "SEBQ" | 0x02 | k:u8 | n:u16 | bit_len:u64 | a:u16 | expander:u8 | iv | payload
//! ```
//!
//! `iv` is `ceil(n·k/8)` bytes of packed symbols. `payload` holds
//! `ceil((bit_len + 1) / k)` packed ciphertext symbols (the padded length).

use super::bits::{pack_bits, unpack_bits};
use crate::error::{Error, Result};
use crate::transform::{check_k, BlockVector};

pub const FRAME_MAGIC: &[u8; 4] = b"SEBQ";
pub const FRAME_V1: u8 = 0x01;
pub const FRAME_V2: u8 = 0x02;
pub const EXPANDER_DEFAULT: u8 = 0x00;
pub const EXPANDER_EXTERNAL: u8 = 0x01;

/// Extra header fields of a version-2 (expander) frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cca2Header {
    pub a: u16,
    pub expander_id: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CipherFrame {
    pub iv: BlockVector,
    pub payload: BlockVector,
    pub bit_len: u64,
    pub cca2: Option<Cca2Header>,
}

fn padded_blocks(bit_len: u64, k: u8) -> Result<usize> {
    let blocks = (bit_len + 1).div_ceil(k as u64);
    usize::try_from(blocks).map_err(|_| Error::CorruptFrame("bit length too large".into()))
}

impl CipherFrame {
    pub fn new(
        iv: BlockVector,
        payload: BlockVector,
        bit_len: u64,
        cca2: Option<Cca2Header>,
    ) -> Result<Self> {
        if iv.k() != payload.k() {
            return Err(Error::KeyMismatch {
                key_k: iv.k(),
                frame_k: payload.k(),
            });
        }
        if iv.is_empty() || iv.len() > u16::MAX as usize {
            return Err(Error::OutOfGuard {
                what: "IV length n",
                value: iv.len(),
                range: "1..=65535",
            });
        }
        let expected = padded_blocks(bit_len, iv.k())?;
        if payload.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: payload.len(),
            });
        }
        Ok(Self {
            iv,
            payload,
            bit_len,
            cca2,
        })
    }

    pub fn k(&self) -> u8 {
        self.iv.k()
    }

    pub fn n(&self) -> usize {
        self.iv.len()
    }

    pub fn version(&self) -> u8 {
        if self.cca2.is_some() {
            FRAME_V2
        } else {
            FRAME_V1
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let iv = pack_bits(&self.iv);
        let payload = pack_bits(&self.payload);
        let mut out = Vec::with_capacity(24 + iv.len() + payload.len());
        out.extend_from_slice(FRAME_MAGIC);
        out.push(self.version());
        out.push(self.k());
        out.extend_from_slice(&(self.n() as u16).to_be_bytes());
        out.extend_from_slice(&self.bit_len.to_be_bytes());
        if let Some(h) = self.cca2 {
            out.extend_from_slice(&h.a.to_be_bytes());
            out.push(h.expander_id);
        }
        out.extend_from_slice(&iv);
        out.extend_from_slice(&payload);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4)? != FRAME_MAGIC {
            return Err(Error::CorruptFrame("bad magic".into()));
        }
        let version = r.u8()?;
        if version != FRAME_V1 && version != FRAME_V2 {
            return Err(Error::CorruptFrame(format!("unknown version {version:#04x}")));
        }
        let k = r.u8()?;
        check_k(k).map_err(|_| Error::CorruptFrame(format!("k = {k} outside 1..=8")))?;
        let n = u16::from_be_bytes(r.array()?) as usize;
        if n == 0 {
            return Err(Error::CorruptFrame("empty IV".into()));
        }
        let bit_len = u64::from_be_bytes(r.array()?);
        let cca2 = if version == FRAME_V2 {
            let a = u16::from_be_bytes(r.array()?);
            let expander_id = r.u8()?;
            if expander_id > EXPANDER_EXTERNAL {
                return Err(Error::CorruptFrame(format!(
                    "unknown expander {expander_id:#04x}"
                )));
            }
            Some(Cca2Header { a, expander_id })
        } else {
            None
        };
        let iv_bytes = r.take((n * k as usize).div_ceil(8))?;
        let iv = unpack_bits(iv_bytes, k, n)?;
        let l = padded_blocks(bit_len, k)?;
        let payload_len = l
            .checked_mul(k as usize)
            .ok_or_else(|| Error::CorruptFrame("bit length too large".into()))?
            .div_ceil(8);
        let rest = r.rest();
        if rest.len() != payload_len {
            return Err(Error::CorruptFrame(format!(
                "payload is {} bytes, header implies {payload_len}",
                rest.len()
            )));
        }
        let payload = unpack_bits(rest, k, l)?;
        Ok(Self {
            iv,
            payload,
            bit_len,
            cca2,
        })
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(len)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| Error::CorruptFrame("truncated header".into()))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn array<const N: usize>(&mut self) -> Result<[u8; N]> {
        Ok(self.take(N)?.try_into().expect("length taken"))
    }

    fn rest(self) -> &'a [u8] {
        &self.bytes[self.pos..]
    }
}
