use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use sebq::cipher::{
    decrypt, encrypt, keygen, open, pack_bits, pad, seal, unpack_bits, unpad, CipherFrame,
    Cca2Header,
};
use sebq::feistel::{decrypt_cca2, encrypt_cca2, open_cca2, seal_cca2, Cca2Key};
use sebq::quasigroup::{
    parse_key_file, random_latin_square, validate_latin_square, write_key_file,
};
use sebq::transform::BlockVector;

fn symbols(k: u8, max_len: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0..=((1u16 << k) - 1) as u8, 0..=max_len)
}

/// (k, key seed, IV symbols, message symbols) with a non-empty IV.
fn cipher_case() -> impl Strategy<Value = (u8, u64, Vec<u8>, Vec<u8>)> {
    (1u8..=5, any::<u64>()).prop_flat_map(|(k, seed)| {
        (
            Just(k),
            Just(seed),
            symbols(k, 12).prop_filter("non-empty IV", |v| !v.is_empty()),
            symbols(k, 80),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn plain_round_trip((k, seed, iv, m) in cipher_case()) {
        let key = keygen(k, seed).unwrap();
        let iv = BlockVector::new(k, iv).unwrap();
        let m = BlockVector::new(k, m).unwrap();
        let c = encrypt(&key, &iv, &m).unwrap();
        prop_assert_eq!(c.len(), m.len());
        prop_assert_eq!(decrypt(&key, &iv, &c).unwrap(), m);
    }

    #[test]
    fn encryption_is_prefix_closed((k, seed, iv, m) in cipher_case(), cut in any::<prop::sample::Index>()) {
        let key = keygen(k, seed).unwrap();
        let iv = BlockVector::new(k, iv).unwrap();
        let cut = if m.is_empty() { 0 } else { cut.index(m.len() + 1) };
        let full = encrypt(&key, &iv, &BlockVector::new(k, m.clone()).unwrap()).unwrap();
        let head = encrypt(&key, &iv, &BlockVector::new(k, m[..cut].to_vec()).unwrap()).unwrap();
        prop_assert_eq!(&full[..cut], &head[..]);
    }

    #[test]
    fn distinct_messages_give_distinct_ciphertexts(
        (k, seed, iv, m) in cipher_case(),
        pos in any::<prop::sample::Index>(),
        delta in 1u8..=255,
    ) {
        prop_assume!(!m.is_empty());
        let key = keygen(k, seed).unwrap();
        let iv = BlockVector::new(k, iv).unwrap();
        let mut m2 = m.clone();
        let i = pos.index(m.len());
        m2[i] ^= delta & (((1u16 << k) - 1) as u8);
        prop_assume!(m2 != m);
        let c1 = encrypt(&key, &iv, &BlockVector::new(k, m).unwrap()).unwrap();
        let c2 = encrypt(&key, &iv, &BlockVector::new(k, m2).unwrap()).unwrap();
        prop_assert_eq!(&c1[..i], &c2[..i]);
        prop_assert_ne!(c1[i], c2[i]);
    }

    #[test]
    fn cca2_round_trip((k, seed, iv, m) in cipher_case(), a in 2usize..=40) {
        let key = Cca2Key::new(keygen(k, seed).unwrap(), a).unwrap();
        let iv = BlockVector::new(k, iv).unwrap();
        let m = BlockVector::new(k, m).unwrap();
        let c = encrypt_cca2(&key, &iv, &m).unwrap();
        prop_assert_eq!(decrypt_cca2(&key, &iv, &c).unwrap(), m);
    }

    #[test]
    fn sealed_bytes_round_trip(
        k in 1u8..=8,
        seed in any::<u64>(),
        data in prop::collection::vec(any::<u8>(), 0..64),
        cca2 in any::<bool>(),
    ) {
        let key = keygen(k.min(5), seed).unwrap();
        let k = key.k();
        let iv = BlockVector::random(k, 3, &mut ChaCha20Rng::seed_from_u64(seed));
        let frame = if cca2 {
            let key = Cca2Key::with_default_a(key.clone(), 3).unwrap();
            seal_cca2(&key, &iv, &data).unwrap()
        } else {
            seal(&key, &iv, &data).unwrap()
        };
        let parsed = CipherFrame::from_bytes(&frame.to_bytes()).unwrap();
        prop_assert_eq!(&parsed, &frame);
        let back = if cca2 {
            open_cca2(&Cca2Key::with_default_a(key, 3).unwrap(), &parsed).unwrap()
        } else {
            open(&key, &parsed).unwrap()
        };
        prop_assert_eq!(back, data);
    }

    #[test]
    fn frame_round_trip(
        k in 1u8..=8,
        iv_len in 1usize..20,
        bit_len in 0u64..200,
        a in 2u16..,
        v2 in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let iv = BlockVector::random(k, iv_len, &mut rng);
        let payload = BlockVector::random(k, (bit_len as usize + 1).div_ceil(k as usize), &mut rng);
        let header = v2.then_some(Cca2Header { a, expander_id: 0 });
        let f = CipherFrame::new(iv, payload, bit_len, header).unwrap();
        prop_assert_eq!(CipherFrame::from_bytes(&f.to_bytes()).unwrap(), f);
    }

    #[test]
    fn truncated_frames_are_rejected(seed in any::<u64>(), drop in 1usize..30) {
        let key = keygen(4, seed % 8).unwrap();
        let iv = BlockVector::random(4, 4, &mut ChaCha20Rng::seed_from_u64(seed));
        let bytes = seal(&key, &iv, b"payload").unwrap().to_bytes();
        let cut = bytes.len().saturating_sub(drop);
        prop_assert!(CipherFrame::from_bytes(&bytes[..cut]).is_err());
    }

    #[test]
    fn padding_round_trip(k in 1u8..=8, data in prop::collection::vec(any::<u8>(), 0..40), trim in 0usize..8) {
        let bit_len = (data.len() * 8).saturating_sub(trim);
        let padded = pad(&data, bit_len, k).unwrap();
        prop_assert_eq!(padded.len(), (bit_len + 1).div_ceil(k as usize));
        let (bytes, n) = unpad(&padded).unwrap();
        prop_assert_eq!(n, bit_len);
        let expect = unpack_bits(&data, 1, bit_len).unwrap();
        prop_assert_eq!(unpack_bits(&bytes, 1, n).unwrap(), expect);
    }

    #[test]
    fn pack_unpack_round_trip(k in 1u8..=8, seed in any::<u64>(), len in 0usize..50) {
        let v = BlockVector::random(k, len, &mut ChaCha20Rng::seed_from_u64(seed));
        prop_assert_eq!(unpack_bits(&pack_bits(&v), k, len).unwrap(), v);
    }

    #[test]
    fn generated_squares_are_latin_and_parastrophe_divides(n in 1usize..=24, seed in any::<u64>()) {
        let sq = random_latin_square(n, &mut ChaCha20Rng::seed_from_u64(seed)).unwrap();
        prop_assert!(validate_latin_square(&sq.rows()).is_ok());
        let q = sebq::quasigroup::Quasigroup::new(sq.clone());
        for x in 0..n as u8 {
            for y in 0..n as u8 {
                prop_assert_eq!(q.mul(x, q.ldiv(x, y)), y);
                prop_assert_eq!(q.ldiv(x, q.mul(x, y)), y);
            }
        }
        prop_assert_eq!(parse_key_file(&write_key_file(&sq)).unwrap(), sq);
    }
}
