//! The e- and d-string transformations over a quasigroup.
//!
//! For a leader `β = b_1 … b_n` the e-transformation encrypts one symbol `a`
//! as `b_n * (… * (b_1 * a))` and replaces the leader by the chain of
//! intermediate values, with the last entry overwritten by the XOR of all
//! entries. The d-transformation walks the same chain backwards with `\` and
//! arrives at the same new leader, so the two stay in lockstep.
//!
//! The whole-string functions here allocate; the per-symbol kernels
//! [`e_step`] and [`d_step`] update a leader in place and are what the cipher
//! uses.

use std::ops::Deref;

use rand::Rng;

use crate::error::{Error, Result};
use crate::quasigroup::Quasigroup;

/// A string of `k`-bit symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockVector {
    k: u8,
    symbols: Vec<u8>,
}

impl BlockVector {
    pub fn new(k: u8, symbols: Vec<u8>) -> Result<Self> {
        check_k(k)?;
        if let Some(&s) = symbols.iter().find(|&&s| (s as u16) >> k != 0) {
            return Err(Error::SymbolTooWide {
                symbol: s as usize,
                k,
            });
        }
        Ok(Self { k, symbols })
    }

    pub fn zeros(k: u8, len: usize) -> Self {
        check_k(k).expect("k out of range");
        Self {
            k,
            symbols: vec![0; len],
        }
    }

    pub fn random<R: Rng + ?Sized>(k: u8, len: usize, rng: &mut R) -> Self {
        check_k(k).expect("k out of range");
        let order = 1u16 << k;
        let symbols = (0..len).map(|_| rng.random_range(0..order) as u8).collect();
        Self { k, symbols }
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<u8> {
        self.symbols
    }

    /// Callers must only write symbols below `2^k`.
    pub(crate) fn symbols_mut(&mut self) -> &mut [u8] {
        &mut self.symbols
    }

    pub fn bit_len(&self) -> usize {
        self.symbols.len() * self.k as usize
    }
}

impl Deref for BlockVector {
    type Target = [u8];

    fn deref(&self) -> &[u8] {
        &self.symbols
    }
}

impl AsRef<[u8]> for BlockVector {
    fn as_ref(&self) -> &[u8] {
        &self.symbols
    }
}

pub(crate) fn check_k(k: u8) -> Result<()> {
    if (1..=8).contains(&k) {
        Ok(())
    } else {
        Err(Error::InvalidK(k as usize))
    }
}

/// Receives operation counts from the transformation kernels.
pub trait OpProbe {
    fn lookups(&mut self, _count: usize) {}
    fn xors(&mut self, _count: usize) {}
}

impl OpProbe for () {}

/// Table lookups and symbol XORs performed by a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct OpCounts {
    pub lookups: u64,
    pub xors: u64,
}

impl OpProbe for OpCounts {
    fn lookups(&mut self, count: usize) {
        self.lookups += count as u64;
    }

    fn xors(&mut self, count: usize) {
        self.xors += count as u64;
    }
}

/// `b_n * (b_{n-1} * (… * (b_1 * a)))`; the identity when `beta` is empty.
pub fn fold_apply(q: &Quasigroup, beta: &[u8], a: u8) -> Result<u8> {
    q.check_symbol(a)?;
    q.check_symbols(beta)?;
    Ok(beta.iter().fold(a, |acc, &b| q.mul(b, acc)))
}

/// Inverse of [`fold_apply`]: `b_1 \ (b_2 \ (… \ (b_n \ c)))`.
pub fn unfold_apply(q: &Quasigroup, beta: &[u8], c: u8) -> Result<u8> {
    q.check_symbol(c)?;
    q.check_symbols(beta)?;
    Ok(beta.iter().rev().fold(c, |acc, &b| q.ldiv(b, acc)))
}

/// Replaces the last entry by the XOR of all entries; returns the XOR count.
#[inline]
pub fn apply_checksum(v: &mut [u8]) -> usize {
    match v.split_last_mut() {
        Some((last, rest)) => {
            *last = rest.iter().fold(*last, |acc, &x| acc ^ x);
            rest.len()
        }
        None => 0,
    }
}

/// Copy of `v` with its last block replaced by the XOR of all blocks.
pub fn checksum_f(v: &[u8]) -> Result<Vec<u8>> {
    if v.is_empty() {
        return Err(Error::Empty("checksum input"));
    }
    let mut out = v.to_vec();
    apply_checksum(&mut out);
    Ok(out)
}

/// Encrypts one symbol against `leader` and advances the leader in place.
#[inline]
pub fn e_step<P: OpProbe + ?Sized>(q: &Quasigroup, leader: &mut [u8], a: u8, probe: &mut P) -> u8 {
    let n = q.order();
    let table = q.mul_table().cells();
    let mut cur = a as usize;
    for r in leader.iter_mut() {
        cur = table[*r as usize * n + cur] as usize;
        *r = cur as u8;
    }
    probe.lookups(leader.len());
    probe.xors(apply_checksum(leader));
    cur as u8
}

/// Decrypts one symbol against `leader` and advances the leader in place to
/// the same value [`e_step`] produces.
#[inline]
pub fn d_step<P: OpProbe + ?Sized>(q: &Quasigroup, leader: &mut [u8], c: u8, probe: &mut P) -> u8 {
    let n = q.order();
    let table = q.ldiv_table().cells();
    let mut cur = c as usize;
    for r in leader.iter_mut().rev() {
        let next = table[*r as usize * n + cur] as usize;
        *r = cur as u8;
        cur = next;
    }
    probe.lookups(leader.len());
    probe.xors(apply_checksum(leader));
    cur as u8
}

fn check_transform_inputs(q: &Quasigroup, leader: &[u8], data: &[u8]) -> Result<()> {
    if !q.order().is_power_of_two() {
        return Err(Error::NotPowerOfTwo(q.order()));
    }
    if leader.is_empty() {
        return Err(Error::Empty("leader"));
    }
    q.check_symbols(leader)?;
    q.check_symbols(data)
}

/// New leader after encrypting `a`: the intermediate fold values
/// `d_i = b_i * (… * (b_1 * a))`, then [`checksum_f`].
pub fn leader_update_enc(q: &Quasigroup, a: u8, delta: &[u8]) -> Result<Vec<u8>> {
    check_transform_inputs(q, delta, &[a])?;
    let mut out = delta.to_vec();
    e_step(q, &mut out, a, &mut ());
    Ok(out)
}

/// New leader after decrypting `c`: the backward chain `d_n = c`,
/// `d_{i-1} = b_i \ d_i`, then [`checksum_f`].
pub fn leader_update_dec(q: &Quasigroup, c: u8, delta: &[u8]) -> Result<Vec<u8>> {
    check_transform_inputs(q, delta, &[c])?;
    let mut out = delta.to_vec();
    d_step(q, &mut out, c, &mut ());
    Ok(out)
}

/// e-transformation of `alpha` under `leader`; returns the ciphertext string
/// and the final leader.
pub fn e_transform(q: &Quasigroup, leader: &[u8], alpha: &[u8]) -> Result<(Vec<u8>, Vec<u8>)> {
    check_transform_inputs(q, leader, alpha)?;
    let mut state = leader.to_vec();
    let cipher = alpha.iter().map(|&a| e_step(q, &mut state, a, &mut ())).collect();
    Ok((cipher, state))
}

/// d-transformation of `gamma` under `leader`; inverse of [`e_transform`].
pub fn d_transform(q: &Quasigroup, leader: &[u8], gamma: &[u8]) -> Result<(Vec<u8>, Vec<u8>)> {
    check_transform_inputs(q, leader, gamma)?;
    let mut state = leader.to_vec();
    let plain = gamma.iter().map(|&c| d_step(q, &mut state, c, &mut ())).collect();
    Ok((plain, state))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quasigroup::{fixtures::EXAMPLE_MUL, random_latin_square, LatinSquare};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn xor4() -> Quasigroup {
        Quasigroup::xor(4).unwrap()
    }

    /// Step-by-step re-execution of the definitions, independent of the kernels.
    fn reference_e(q: &Quasigroup, leader: &[u8], alpha: &[u8]) -> (Vec<u8>, Vec<u8>) {
        let mut delta = leader.to_vec();
        let mut out = Vec::new();
        for &a in alpha {
            let mut chain = Vec::new();
            let mut x = a;
            for &b in &delta {
                x = q.mul(b, x);
                chain.push(x);
            }
            out.push(*chain.last().unwrap());
            let sum = chain.iter().fold(0, |s, &d| s ^ d);
            *chain.last_mut().unwrap() = sum;
            delta = chain;
        }
        (out, delta)
    }

    #[test]
    fn fold_examples() {
        let q = xor4();
        assert_eq!(fold_apply(&q, &[1, 2], 3).unwrap(), 2 ^ (1 ^ 3));
        assert_eq!(fold_apply(&q, &[1, 2], 3).unwrap(), 0);
        assert_eq!(fold_apply(&q, &[], 3).unwrap(), 3);
        let example = Quasigroup::new(LatinSquare::from_rows(&EXAMPLE_MUL).unwrap());
        assert_eq!(fold_apply(&example, &[1], 2).unwrap(), 3);
        assert!(matches!(
            fold_apply(&q, &[1], 9),
            Err(Error::InvalidSymbol { symbol: 9, .. })
        ));
    }

    #[test]
    fn checksum_examples() {
        assert_eq!(checksum_f(&[2, 2]).unwrap(), vec![2, 0]);
        assert_eq!(checksum_f(&[7]).unwrap(), vec![7]);
        assert_eq!(checksum_f(&[1, 2, 3]).unwrap(), vec![1, 2, 0]);
        assert!(checksum_f(&[]).is_err());
    }

    #[test]
    fn leader_update_examples() {
        let q = xor4();
        assert_eq!(leader_update_enc(&q, 3, &[1, 2]).unwrap(), vec![2, 2]);
        assert_eq!(leader_update_enc(&q, 0, &[0, 0]).unwrap(), vec![0, 0]);
        assert_eq!(leader_update_dec(&q, 0, &[1, 2]).unwrap(), vec![2, 2]);
        assert_eq!(leader_update_dec(&q, 0, &[0, 0]).unwrap(), vec![0, 0]);
        assert!(leader_update_enc(&q, 0, &[]).is_err());
        assert!(leader_update_dec(&q, 0, &[]).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let q = Quasigroup::new(random_latin_square(8, &mut rng).unwrap());
        for b in 0..8u8 {
            for a in 0..8u8 {
                assert_eq!(leader_update_enc(&q, a, &[b]).unwrap(), vec![q.mul(b, a)]);
                // The decrypt-side leader is the encrypt-side one: (b * m) = (c).
                assert_eq!(leader_update_dec(&q, a, &[b]).unwrap(), vec![a]);
            }
        }
    }

    #[test]
    fn transform_examples() {
        let q = xor4();
        let (c, l) = e_transform(&q, &[1, 2], &[3, 0]).unwrap();
        assert_eq!((c.as_slice(), l.as_slice()), (&[0, 0][..], &[2, 2][..]));
        assert_eq!(reference_e(&q, &[1, 2], &[3, 0]), (c, l));

        let (p, l) = d_transform(&q, &[1, 2], &[0, 0]).unwrap();
        assert_eq!((p.as_slice(), l.as_slice()), (&[3, 0][..], &[2, 2][..]));

        assert_eq!(e_transform(&q, &[1, 2], &[]).unwrap(), (vec![], vec![1, 2]));
        assert_eq!(d_transform(&q, &[1, 2], &[]).unwrap(), (vec![], vec![1, 2]));
        assert_eq!(
            e_transform(&q, &[0, 0], &[0, 0, 0]).unwrap().0,
            vec![0, 0, 0]
        );
        assert!(matches!(
            e_transform(&q, &[], &[1]),
            Err(Error::Empty("leader"))
        ));
    }

    #[test]
    fn non_power_of_two_order_is_rejected() {
        let q = Quasigroup::new(LatinSquare::from_rows(&EXAMPLE_MUL).unwrap());
        assert!(matches!(
            e_transform(&q, &[1], &[2]),
            Err(Error::NotPowerOfTwo(5))
        ));
    }

    #[test]
    fn kernels_match_reference_on_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &n in &[4usize, 8, 16] {
            let q = Quasigroup::new(random_latin_square(n, &mut rng).unwrap());
            for _ in 0..50 {
                let len = rng.random_range(1..6);
                let leader: Vec<u8> = (0..len).map(|_| rng.random_range(0..n) as u8).collect();
                let alpha: Vec<u8> = (0..rng.random_range(0..20))
                    .map(|_| rng.random_range(0..n) as u8)
                    .collect();
                let got = e_transform(&q, &leader, &alpha).unwrap();
                assert_eq!(got, reference_e(&q, &leader, &alpha));
                let back = d_transform(&q, &leader, &got.0).unwrap();
                assert_eq!(back.0, alpha);
                assert_eq!(back.1, got.1);
            }
        }
    }

    #[test]
    fn xor_quasigroup_closed_form() {
        // With XOR, each ciphertext symbol is the XOR of the leader and the input.
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let q = Quasigroup::xor(16).unwrap();
        for _ in 0..100 {
            let leader: Vec<u8> = (0..5).map(|_| rng.random_range(0..16)).collect();
            let alpha: Vec<u8> = (0..10).map(|_| rng.random_range(0..16)).collect();
            let (cipher, _) = e_transform(&q, &leader, &alpha).unwrap();
            let mut state = leader.clone();
            for (&a, &c) in alpha.iter().zip(&cipher) {
                let sum = state.iter().fold(0, |s, &x| s ^ x);
                assert_eq!(c, sum ^ a);
                state = leader_update_enc(&q, a, &state).unwrap();
            }
        }
    }

    #[test]
    fn block_vector_validates_width() {
        assert!(BlockVector::new(2, vec![0, 3]).is_ok());
        assert!(matches!(
            BlockVector::new(2, vec![4]),
            Err(Error::SymbolTooWide { symbol: 4, k: 2 })
        ));
        assert!(matches!(BlockVector::new(9, vec![]), Err(Error::InvalidK(9))));
        assert!(BlockVector::new(8, vec![255]).is_ok());
    }
}
