//! Avalanche experiments: flip one input bit (or perturb the key minimally),
//! re-encrypt, and measure the fraction of ciphertext bits that change.
//!
//! Plaintext changes only propagate forward: flipping a bit in block `j`
//! leaves ciphertext blocks before `j` untouched, so the measured percentage
//! scales with the fraction of the message after the flip.
//!
//! A flip confined to the last IV symbol only ever changes the last leader
//! slot, so every ciphertext block differs and the rate tends to
//! `2^(k−1) / (2^k − 1)` (8/15 for k = 4) rather than one half.

use rand::Rng;
use serde::Serialize;

use crate::cipher::{encrypt, SebqKey};
use crate::error::{Error, Result};
use crate::quasigroup::{JacobsonMatthews, LatinSquare};
use crate::transform::BlockVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AvalancheTarget {
    Key,
    Iv,
    Plaintext,
}

impl std::str::FromStr for AvalancheTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "key" => Ok(Self::Key),
            "iv" => Ok(Self::Iv),
            "plaintext" => Ok(Self::Plaintext),
            _ => Err(Error::Unsupported(format!("avalanche target {s:?}"))),
        }
    }
}

/// One flip position across all trials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlipRow {
    /// Bit index for IV/plaintext targets; perturbation index for the key.
    pub position: usize,
    /// Percentage of changed ciphertext bits, one entry per trial.
    pub percents: Vec<f64>,
    pub average: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AvalancheReport {
    pub target: AvalancheTarget,
    pub rows: Vec<FlipRow>,
    /// Extremes and mean over every individual flip.
    pub max: f64,
    pub min: f64,
    pub mean: f64,
}

/// Percentage of differing bits between two equal-shape vectors.
pub fn percent_changed(a: &BlockVector, b: &BlockVector) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    if a.is_empty() {
        return 0.0;
    }
    let diff: u32 = a.iter().zip(b.iter()).map(|(x, y)| (x ^ y).count_ones()).sum();
    100.0 * diff as f64 / a.bit_len() as f64
}

fn flip_bit(v: &BlockVector, bit: usize) -> Result<BlockVector> {
    let k = v.k() as usize;
    if bit >= v.bit_len() {
        return Err(Error::OutOfGuard {
            what: "flip position",
            value: bit,
            range: "below the bit length",
        });
    }
    let mut s = v.to_vec();
    // Bit 0 is the most significant bit of symbol 0.
    s[bit / k] ^= 1 << (k - 1 - bit % k);
    BlockVector::new(v.k(), s)
}

/// Smallest Latin-property-preserving change: swap a random intercalate. If
/// the square has none, take Jacobson–Matthews moves until it changes.
pub fn perturb_key<R: Rng + ?Sized>(key: &SebqKey, rng: &mut R) -> Result<SebqKey> {
    let sq = key.square();
    let inter = sq.intercalates();
    let next = if inter.is_empty() {
        jm_perturb(sq, rng)
    } else {
        let (r1, r2, c1, c2) = inter[rng.random_range(0..inter.len())];
        let mut s = sq.clone();
        s.swap_intercalate(r1, r2, c1, c2);
        s
    };
    SebqKey::from_square(next)
}

fn jm_perturb<R: Rng + ?Sized>(sq: &LatinSquare, rng: &mut R) -> LatinSquare {
    let mut jm = JacobsonMatthews::new(sq);
    loop {
        jm.run(1, rng);
        let cand = jm.square();
        if &cand != sq {
            return cand;
        }
    }
}

/// Runs `trials` trials. Trial 0 uses the given inputs; later trials redraw
/// the targeted input (a fresh key, IV or message of the same shape) and
/// keep the others. In each trial every entry of `positions` is one flip
/// (for the key target, one independent intercalate swap).
pub fn avalanche<R: Rng + ?Sized>(
    target: AvalancheTarget,
    key: &SebqKey,
    iv: &BlockVector,
    message: &BlockVector,
    trials: usize,
    positions: &[usize],
    rng: &mut R,
) -> Result<AvalancheReport> {
    if trials == 0 || positions.is_empty() {
        return Err(Error::OutOfGuard {
            what: "trials × positions",
            value: 0,
            range: ">= 1",
        });
    }
    if message.is_empty() {
        return Err(Error::Empty("message"));
    }
    let limit = match target {
        AvalancheTarget::Key => usize::MAX,
        AvalancheTarget::Iv => iv.bit_len(),
        AvalancheTarget::Plaintext => message.bit_len(),
    };
    if let Some(&bad) = positions.iter().find(|&&p| p >= limit) {
        return Err(Error::OutOfGuard {
            what: "flip position",
            value: bad,
            range: "below the target's bit length",
        });
    }
    let k = key.k();
    let mut rows: Vec<FlipRow> = positions
        .iter()
        .map(|&position| FlipRow {
            position,
            percents: Vec::with_capacity(trials),
            average: 0.0,
        })
        .collect();
    for t in 0..trials {
        let (key_t, iv_t, msg_t) = match (t, target) {
            (0, _) => (key.clone(), iv.clone(), message.clone()),
            (_, AvalancheTarget::Key) => (SebqKey::generate(k, rng)?, iv.clone(), message.clone()),
            (_, AvalancheTarget::Iv) => (key.clone(), BlockVector::random(k, iv.len(), rng), message.clone()),
            (_, AvalancheTarget::Plaintext) => {
                (key.clone(), iv.clone(), BlockVector::random(k, message.len(), rng))
            }
        };
        let base = encrypt(&key_t, &iv_t, &msg_t)?;
        for row in rows.iter_mut() {
            let other = match target {
                AvalancheTarget::Key => encrypt(&perturb_key(&key_t, rng)?, &iv_t, &msg_t)?,
                AvalancheTarget::Iv => encrypt(&key_t, &flip_bit(&iv_t, row.position)?, &msg_t)?,
                AvalancheTarget::Plaintext => {
                    encrypt(&key_t, &iv_t, &flip_bit(&msg_t, row.position)?)?
                }
            };
            row.percents.push(percent_changed(&base, &other));
        }
    }
    let mut all = Vec::with_capacity(trials * rows.len());
    for row in rows.iter_mut() {
        row.average = row.percents.iter().sum::<f64>() / trials as f64;
        all.extend_from_slice(&row.percents);
    }
    Ok(AvalancheReport {
        target,
        rows,
        max: all.iter().copied().fold(f64::MIN, f64::max),
        min: all.iter().copied().fold(f64::MAX, f64::min),
        mean: all.iter().sum::<f64>() / all.len() as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cipher::keygen;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn xor_key_is_linear_in_the_plaintext() {
        let key = SebqKey::from_square(LatinSquare::xor_table(16).unwrap()).unwrap();
        let iv = BlockVector::new(4, vec![9]).unwrap();
        let msg = BlockVector::new(4, vec![5]).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let rep = avalanche(AvalancheTarget::Plaintext, &key, &iv, &msg, 5, &[0, 1, 2, 3], &mut rng)
            .unwrap();
        for row in &rep.rows {
            assert!(row.percents.iter().all(|&p| p == 25.0));
        }
        assert_eq!((rep.max, rep.min, rep.mean), (25.0, 25.0, 25.0));
    }

    #[test]
    fn perturbation_keeps_a_latin_square_and_changes_four_cells() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let key = keygen(4, 3).unwrap();
        let next = perturb_key(&key, &mut rng).unwrap();
        let diff = key
            .square()
            .cells()
            .iter()
            .zip(next.square().cells())
            .filter(|(a, b)| a != b)
            .count();
        assert!(diff == 4 || key.square().intercalates().is_empty());
        LatinSquare::from_rows(&next.square().rows()).unwrap();
    }

    #[test]
    fn jm_fallback_changes_the_square() {
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        // Cyclic squares of odd order have no intercalates.
        let sq = LatinSquare::cyclic(5).unwrap();
        assert!(sq.intercalates().is_empty());
        let next = jm_perturb(&sq, &mut rng);
        assert_ne!(next, sq);
        LatinSquare::from_rows(&next.rows()).unwrap();
        let key = keygen(1, 0).unwrap();
        assert_ne!(perturb_key(&key, &mut rng).unwrap().square(), key.square());
    }

    #[test]
    fn positions_are_checked() {
        let key = keygen(2, 1).unwrap();
        let iv = BlockVector::zeros(2, 2);
        let msg = BlockVector::zeros(2, 3);
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        assert!(avalanche(AvalancheTarget::Iv, &key, &iv, &msg, 1, &[4], &mut rng).is_err());
        assert!(avalanche(AvalancheTarget::Plaintext, &key, &iv, &msg, 1, &[5], &mut rng).is_ok());
        assert!(avalanche(AvalancheTarget::Plaintext, &key, &iv, &msg, 0, &[0], &mut rng).is_err());
    }

    #[test]
    fn early_plaintext_flips_reach_about_half() {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let key = keygen(4, 1).unwrap();
        let iv = BlockVector::random(4, 100, &mut rng);
        let msg = BlockVector::random(4, 1000, &mut rng);
        let rep =
            avalanche(AvalancheTarget::Plaintext, &key, &iv, &msg, 3, &[0, 1, 2], &mut rng).unwrap();
        assert!((47.0..=53.0).contains(&rep.mean), "{}", rep.mean);
        for row in &rep.rows {
            for &p in &row.percents {
                assert!((0.0..=100.0).contains(&p));
            }
        }
        assert!(rep.max >= rep.mean && rep.mean >= rep.min);
    }
}
