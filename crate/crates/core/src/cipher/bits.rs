//! MSB-first bit packing of k-bit symbols, and `10*` padding.

use crate::error::{Error, Result};
use crate::transform::{check_k, BlockVector};

/// Packs symbols contiguously, most significant bit first. The final byte is
/// zero-filled.
pub fn pack_bits(blocks: &BlockVector) -> Vec<u8> {
    let k = blocks.k() as u32;
    if k == 8 {
        return blocks.symbols().to_vec();
    }
    let mut out = Vec::with_capacity((blocks.len() * k as usize).div_ceil(8));
    let mut acc: u32 = 0;
    let mut held: u32 = 0;
    for &s in blocks.iter() {
        acc = (acc << k) | s as u32;
        held += k;
        if held >= 8 {
            held -= 8;
            out.push((acc >> held) as u8);
            acc &= (1 << held) - 1;
        }
    }
    if held > 0 {
        out.push((acc << (8 - held)) as u8);
    }
    out
}

/// Reads `count` k-bit symbols from the front of `bytes`.
pub fn unpack_bits(bytes: &[u8], k: u8, count: usize) -> Result<BlockVector> {
    check_k(k)?;
    let needed = (count * k as usize).div_ceil(8);
    if bytes.len() < needed {
        return Err(Error::InsufficientBytes {
            needed,
            available: bytes.len(),
        });
    }
    if k == 8 {
        return BlockVector::new(8, bytes[..count].to_vec());
    }
    let k = k as u32;
    let mask = (1u32 << k) - 1;
    let mut out = Vec::with_capacity(count);
    let mut acc: u32 = 0;
    let mut held: u32 = 0;
    let mut it = bytes.iter();
    while out.len() < count {
        if held < k {
            acc = (acc << 8) | *it.next().expect("length checked") as u32;
            held += 8;
        }
        held -= k;
        out.push(((acc >> held) & mask) as u8);
        acc &= (1 << held) - 1;
    }
    BlockVector::new(k as u8, out)
}

/// Appends a `1` bit and then `0` bits up to the next multiple of `k`, and
/// splits the result into k-bit symbols. Only the first `bit_len` bits of
/// `data` are used.
pub fn pad(data: &[u8], bit_len: usize, k: u8) -> Result<BlockVector> {
    check_k(k)?;
    let have = data.len() * 8;
    if have < bit_len {
        return Err(Error::InsufficientBytes {
            needed: bit_len.div_ceil(8),
            available: data.len(),
        });
    }
    let count = (bit_len + 1).div_ceil(k as usize);
    let total_bytes = (count * k as usize).div_ceil(8);
    let mut buf = vec![0u8; total_bytes];
    let full = bit_len / 8;
    buf[..full].copy_from_slice(&data[..full]);
    let rem = bit_len % 8;
    if rem > 0 {
        buf[full] = data[full] & (0xFFu8 << (8 - rem));
    }
    buf[bit_len / 8] |= 0x80 >> (bit_len % 8);
    unpack_bits(&buf, k, count)
}

/// Strips one `10*` suffix. Returns the data bytes (trailing bits zeroed) and
/// the exact bit length.
pub fn unpad(blocks: &BlockVector) -> Result<(Vec<u8>, usize)> {
    let total = blocks.bit_len();
    let mut bytes = pack_bits(blocks);
    let last_one = (0..total)
        .rev()
        .find(|&i| bytes[i / 8] >> (7 - i % 8) & 1 == 1)
        .ok_or(Error::MalformedPadding)?;
    if total - last_one > blocks.k() as usize {
        return Err(Error::MalformedPadding);
    }
    let bit_len = last_one;
    bytes.truncate(bit_len.div_ceil(8));
    if bit_len % 8 > 0 {
        let last = bytes.len() - 1;
        bytes[last] &= 0xFFu8 << (8 - bit_len % 8);
    }
    Ok((bytes, bit_len))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn nibble_and_bit_packing() {
        let v = BlockVector::new(4, vec![0xA, 0xB]).unwrap();
        assert_eq!(pack_bits(&v), vec![0xAB]);
        let v = BlockVector::new(1, vec![1, 0, 1, 1, 0, 0, 0, 0]).unwrap();
        assert_eq!(pack_bits(&v), vec![0xB0]);
        let v = BlockVector::new(3, vec![0b101, 0b011, 0b111]).unwrap();
        assert_eq!(pack_bits(&v), vec![0b1010_1111, 0b1000_0000]);
        assert_eq!(unpack_bits(&[0b1010_1111, 0b1000_0000], 3, 3).unwrap(), v);
    }

    #[test]
    fn unpack_needs_enough_bytes() {
        assert!(matches!(
            unpack_bits(&[0xFF], 4, 3),
            Err(Error::InsufficientBytes {
                needed: 2,
                available: 1
            })
        ));
    }

    #[test]
    fn pad_examples() {
        // 7 bits, k = 4: one pad bit reaches the 8-bit boundary.
        let p = pad(&[0b1010_1100], 7, 4).unwrap();
        assert_eq!(p.symbols(), &[0b1010, 0b1101]);
        // Aligned input gains a whole "1000" block.
        let p = pad(&[0xAB], 8, 4).unwrap();
        assert_eq!(p.symbols(), &[0xA, 0xB, 0b1000]);
        // Empty input is a single padding block.
        let p = pad(&[], 0, 4).unwrap();
        assert_eq!(p.symbols(), &[0b1000]);
        assert_eq!(unpad(&p).unwrap(), (vec![], 0));
    }

    #[test]
    fn unpad_rejects_missing_marker() {
        let zeros = BlockVector::new(4, vec![0, 0]).unwrap();
        assert!(matches!(unpad(&zeros), Err(Error::MalformedPadding)));
        // Marker more than one block from the end.
        let far = BlockVector::new(4, vec![0b1000, 0]).unwrap();
        assert!(matches!(unpad(&far), Err(Error::MalformedPadding)));
    }

    proptest! {
        #[test]
        fn pack_unpack_round_trip(k in 1u8..=8, raw in proptest::collection::vec(any::<u8>(), 0..64)) {
            let syms: Vec<u8> = raw.iter().map(|&s| ((s as u16) & ((1 << k) - 1)) as u8).collect();
            let v = BlockVector::new(k, syms).unwrap();
            let packed = pack_bits(&v);
            prop_assert_eq!(packed.len(), (v.len() * k as usize).div_ceil(8));
            prop_assert_eq!(unpack_bits(&packed, k, v.len()).unwrap(), v);
        }

        #[test]
        fn pad_unpad_round_trip(k in 1u8..=8, data in proptest::collection::vec(any::<u8>(), 0..32), cut in 0usize..8) {
            let bit_len = (data.len() * 8).saturating_sub(cut);
            let padded = pad(&data, bit_len, k).unwrap();
            prop_assert!(padded.bit_len() > bit_len);
            prop_assert!(padded.bit_len() - bit_len <= k as usize);
            let (bytes, len) = unpad(&padded).unwrap();
            prop_assert_eq!(len, bit_len);
            let mut expected = data[..bit_len.div_ceil(8)].to_vec();
            if bit_len % 8 > 0 {
                let last = expected.len() - 1;
                expected[last] &= 0xFFu8 << (8 - bit_len % 8);
            }
            prop_assert_eq!(bytes, expected);
        }
    }
}
