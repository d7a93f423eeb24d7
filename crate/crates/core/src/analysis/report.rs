//! Ciphertext statistics runs and CSV/JSON writers.

use std::io::Write;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use super::avalanche::AvalancheReport;
use super::randomness::{bits_from_bytes, pass_rates, randomness_suite, PassRate, TestReport};
use crate::cipher::{encrypt, pack_bits, SebqKey};
use crate::error::{Error, Result};
use crate::transform::BlockVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaintextKind {
    Random,
    Zeros,
    Ones,
}

impl std::str::FromStr for PlaintextKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(Self::Random),
            "zeros" => Ok(Self::Zeros),
            "ones" => Ok(Self::Ones),
            _ => Err(Error::Unsupported(format!("plaintext kind {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CipherStatsConfig {
    pub k: u8,
    pub iv_bits: usize,
    pub message_bits: usize,
    pub sequences: usize,
    pub alpha: f64,
    pub plaintext: PlaintextKind,
    pub seed: u64,
}

impl Default for CipherStatsConfig {
    fn default() -> Self {
        Self {
            k: 4,
            iv_bits: 400,
            message_bits: 4000,
            sequences: 100,
            alpha: 0.01,
            plaintext: PlaintextKind::Random,
            seed: 0,
        }
    }
}

/// Encrypts `sequences` messages, each under a fresh key and IV, and runs
/// the randomness suite on every ciphertext.
pub fn cipher_stats(cfg: &CipherStatsConfig) -> Result<(Vec<Vec<TestReport>>, Vec<PassRate>)> {
    let k = cfg.k as usize;
    if cfg.sequences == 0 || !cfg.iv_bits.is_multiple_of(k) || !cfg.message_bits.is_multiple_of(k) || cfg.iv_bits == 0 {
        return Err(Error::Unsupported(format!(
            "need sequences >= 1 and IV/message bit lengths that are non-zero multiples of k = {k}"
        )));
    }
    let mut master = ChaCha20Rng::seed_from_u64(cfg.seed);
    let mut all = Vec::with_capacity(cfg.sequences);
    for _ in 0..cfg.sequences {
        let mut rng = ChaCha20Rng::seed_from_u64(master.next_u64());
        let key = SebqKey::generate(cfg.k, &mut rng)?;
        let iv = BlockVector::random(cfg.k, cfg.iv_bits / k, &mut rng);
        let l = cfg.message_bits / k;
        let msg = match cfg.plaintext {
            PlaintextKind::Random => BlockVector::random(cfg.k, l, &mut rng),
            PlaintextKind::Zeros => BlockVector::zeros(cfg.k, l),
            PlaintextKind::Ones => BlockVector::new(cfg.k, vec![((1u16 << k) - 1) as u8; l])?,
        };
        let ct = encrypt(&key, &iv, &msg)?;
        let bits = bits_from_bytes(&pack_bits(&ct), ct.bit_len());
        all.push(randomness_suite(&bits, cfg.alpha)?);
    }
    let rates = pass_rates(&all);
    Ok((all, rates))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// `test,success_percent,passed,total,mean_p_value`
pub fn write_pass_rates_csv<W: Write>(rates: &[PassRate], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["test", "success_percent", "passed", "total", "mean_p_value"])
        .map_err(csv_err)?;
    for r in rates {
        out.write_record([
            r.test.to_string(),
            format!("{:.1}", r.success_percent),
            r.passed.to_string(),
            r.total.to_string(),
            format!("{:.6}", r.mean_p_value),
        ])
        .map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

/// `position,trial_1..trial_T,average`
pub fn write_avalanche_csv<W: Write>(rep: &AvalancheReport, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let trials = rep.rows.first().map_or(0, |r| r.percents.len());
    let mut header = vec!["position".to_string()];
    header.extend((1..=trials).map(|t| format!("trial_{t}")));
    header.push("average".into());
    out.write_record(&header).map_err(csv_err)?;
    for row in &rep.rows {
        let mut rec = vec![row.position.to_string()];
        rec.extend(row.percents.iter().map(|p| format!("{p:.3}")));
        rec.push(format!("{:.3}", row.average));
        out.write_record(&rec).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

/// Pretty JSON followed by a newline.
pub fn write_json<T: Serialize, W: Write>(value: &T, mut w: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value).map_err(std::io::Error::other)?;
    w.write_all(b"\n")?;
    Ok(())
}
