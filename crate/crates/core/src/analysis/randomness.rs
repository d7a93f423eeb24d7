//! Statistical randomness tests over bit sequences.
//!
//! Bits are `u8` values `0` or `1`. The formulas and reference constants are
//! the standard published definitions (monobit, block frequency, runs,
//! longest run of ones, cumulative sums, serial, approximate entropy).
//! Each test function returns its p-value(s) or an error when the sequence is
//! too short for it.

use serde::Serialize;
use statrs::function::erf::erfc;
use statrs::function::gamma::gamma_ur;

use crate::error::{Error, Result};

/// Minimum length accepted by [`randomness_suite`].
pub const MIN_SUITE_BITS: usize = 100;
pub const BLOCK_FREQUENCY_M: usize = 128;

fn igamc(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    gamma_ur(a, x).clamp(0.0, 1.0)
}

fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

fn too_short(what: &'static str, len: usize, range: &'static str) -> Error {
    Error::OutOfGuard {
        what,
        value: len,
        range,
    }
}

/// Unpacks the first `bit_len` bits of `bytes`, most significant bit first.
pub fn bits_from_bytes(bytes: &[u8], bit_len: usize) -> Vec<u8> {
    (0..bit_len.min(bytes.len() * 8))
        .map(|i| bytes[i / 8] >> (7 - i % 8) & 1)
        .collect()
}

/// Monobit test.
pub fn frequency(bits: &[u8]) -> Result<f64> {
    if bits.is_empty() {
        return Err(too_short("frequency test length", 0, ">= 1"));
    }
    let n = bits.len() as f64;
    let s: i64 = bits.iter().map(|&b| 2 * b as i64 - 1).sum();
    Ok(erfc(s.unsigned_abs() as f64 / n.sqrt() / std::f64::consts::SQRT_2))
}

/// Frequency within non-overlapping blocks of `m` bits.
pub fn block_frequency(bits: &[u8], m: usize) -> Result<f64> {
    if m == 0 || bits.len() < m {
        return Err(too_short("block frequency length", bits.len(), ">= block size"));
    }
    let blocks = bits.len() / m;
    let chi2: f64 = bits
        .chunks_exact(m)
        .map(|blk| {
            let pi = blk.iter().map(|&b| b as f64).sum::<f64>() / m as f64;
            (pi - 0.5).powi(2)
        })
        .sum::<f64>()
        * 4.0
        * m as f64;
    Ok(igamc(blocks as f64 / 2.0, chi2 / 2.0))
}

/// Runs test. Returns 0 when the frequency prerequisite fails.
pub fn runs(bits: &[u8]) -> Result<f64> {
    if bits.len() < 2 {
        return Err(too_short("runs test length", bits.len(), ">= 2"));
    }
    let n = bits.len() as f64;
    let pi = bits.iter().map(|&b| b as f64).sum::<f64>() / n;
    if (pi - 0.5).abs() >= 2.0 / n.sqrt() {
        return Ok(0.0);
    }
    let v = 1 + bits.windows(2).filter(|w| w[0] != w[1]).count();
    let num = (v as f64 - 2.0 * n * pi * (1.0 - pi)).abs();
    let den = 2.0 * (2.0 * n).sqrt() * pi * (1.0 - pi);
    Ok(erfc(num / den))
}

/// Longest run of ones in blocks; the block size follows the sequence
/// length (8, 128 or 10^4 bits).
pub fn longest_run_of_ones(bits: &[u8]) -> Result<f64> {
    let n = bits.len();
    let (m, lo, probs): (usize, usize, &[f64]) = if n < 128 {
        return Err(too_short("longest-run test length", n, ">= 128"));
    } else if n < 6272 {
        (8, 1, &[0.2148, 0.3672, 0.2305, 0.1875])
    } else if n < 750_000 {
        (128, 4, &[0.1174, 0.2430, 0.2493, 0.1752, 0.1027, 0.1124])
    } else {
        (
            10_000,
            10,
            &[0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727],
        )
    };
    let k = probs.len() - 1;
    let mut v = vec![0usize; probs.len()];
    for blk in bits.chunks_exact(m) {
        let (mut best, mut cur) = (0, 0);
        for &b in blk {
            cur = if b == 1 { cur + 1 } else { 0 };
            best = best.max(cur);
        }
        v[best.clamp(lo, lo + k) - lo] += 1;
    }
    let blocks = (n / m) as f64;
    let chi2: f64 = v
        .iter()
        .zip(probs)
        .map(|(&vi, &p)| (vi as f64 - blocks * p).powi(2) / (blocks * p))
        .sum();
    Ok(igamc(k as f64 / 2.0, chi2 / 2.0))
}

/// Cumulative sums test, forward (`reverse = false`) or backward.
pub fn cumulative_sums(bits: &[u8], reverse: bool) -> Result<f64> {
    if bits.is_empty() {
        return Err(too_short("cumulative sums length", 0, ">= 1"));
    }
    let n = bits.len() as i64;
    let mut s = 0i64;
    let mut z = 0i64;
    let mut step = |b: u8| {
        s += 2 * b as i64 - 1;
        z = z.max(s.abs());
    };
    if reverse {
        bits.iter().rev().for_each(|&b| step(b));
    } else {
        bits.iter().for_each(|&b| step(b));
    }
    let sqrt_n = (n as f64).sqrt();
    let zf = z as f64;
    let mut sum1 = 0.0;
    let mut k = (-n / z + 1) / 4;
    while k <= (n / z - 1) / 4 {
        sum1 += normal_cdf((4 * k + 1) as f64 * zf / sqrt_n)
            - normal_cdf((4 * k - 1) as f64 * zf / sqrt_n);
        k += 1;
    }
    let mut sum2 = 0.0;
    let mut k = (-n / z - 3) / 4;
    while k <= (n / z - 1) / 4 {
        sum2 += normal_cdf((4 * k + 3) as f64 * zf / sqrt_n)
            - normal_cdf((4 * k + 1) as f64 * zf / sqrt_n);
        k += 1;
    }
    Ok((1.0 - sum1 + sum2).clamp(0.0, 1.0))
}

/// Counts of every overlapping `m`-bit pattern, wrapping around the end.
fn pattern_counts(bits: &[u8], m: usize) -> Vec<u64> {
    let mut counts = vec![0u64; 1 << m];
    if m == 0 {
        counts[0] = bits.len() as u64;
        return counts;
    }
    let n = bits.len();
    let mask = (1usize << m) - 1;
    let mut w = 0usize;
    for &b in &bits[..m - 1] {
        w = (w << 1) | b as usize;
    }
    for i in 0..n {
        w = ((w << 1) | bits[(i + m - 1) % n] as usize) & mask;
        counts[w] += 1;
    }
    counts
}

fn psi_squared(bits: &[u8], m: usize) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let n = bits.len() as f64;
    let sum: f64 = pattern_counts(bits, m)
        .iter()
        .map(|&c| (c as f64).powi(2))
        .sum();
    sum * (1u64 << m) as f64 / n - n
}

/// Default serial block length: `floor(log2 n) − 3`, capped at 16.
pub fn default_serial_m(n: usize) -> usize {
    (n.max(1).ilog2() as usize).saturating_sub(3).min(16)
}

/// Default approximate-entropy block length: `floor(log2 n) − 6`.
pub fn default_apen_m(n: usize) -> usize {
    (n.max(1).ilog2() as usize).saturating_sub(6)
}

/// Serial test with block length `m ≥ 2`; returns both p-values.
pub fn serial(bits: &[u8], m: usize) -> Result<(f64, f64)> {
    if !(2..=16).contains(&m) || bits.len() < m {
        return Err(too_short("serial test block length", m, "2..=16 and <= length"));
    }
    let p0 = psi_squared(bits, m);
    let p1 = psi_squared(bits, m - 1);
    let p2 = psi_squared(bits, m - 2);
    let d1 = p0 - p1;
    let d2 = p0 - 2.0 * p1 + p2;
    Ok((
        igamc((1u64 << (m - 1)) as f64 / 2.0, d1 / 2.0),
        igamc((1u64 << (m - 2)) as f64 / 2.0, d2 / 2.0),
    ))
}

fn phi(bits: &[u8], m: usize) -> f64 {
    let n = bits.len() as f64;
    pattern_counts(bits, m)
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            p * p.ln()
        })
        .sum()
}

/// Approximate entropy with block length `m ≥ 1`.
pub fn approximate_entropy(bits: &[u8], m: usize) -> Result<f64> {
    if !(1..=16).contains(&m) || bits.len() <= m {
        return Err(too_short(
            "approximate entropy block length",
            m,
            "1..=16 and < length",
        ));
    }
    let n = bits.len() as f64;
    let apen = phi(bits, m) - phi(bits, m + 1);
    let chi2 = 2.0 * n * (std::f64::consts::LN_2 - apen);
    Ok(igamc((1u64 << (m - 1)) as f64, chi2 / 2.0))
}

/// Outcome of one sub-test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestReport {
    pub test: &'static str,
    /// `None` when the sub-test was skipped.
    pub p_value: Option<f64>,
    pub passed: bool,
    pub length: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

/// Sub-test names in report order.
pub const SUITE_TESTS: [&str; 9] = [
    "frequency",
    "block-frequency",
    "runs",
    "longest-run",
    "cusum-forward",
    "cusum-backward",
    "serial-1",
    "serial-2",
    "approximate-entropy",
];

/// Runs every sub-test at significance `alpha`. A sub-test the sequence is
/// too short for is reported as skipped.
pub fn randomness_suite(bits: &[u8], alpha: f64) -> Result<Vec<TestReport>> {
    if bits.len() < MIN_SUITE_BITS {
        return Err(too_short("sequence length", bits.len(), ">= 100"));
    }
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::Unsupported(format!("significance {alpha} outside [0, 1)")));
    }
    let n = bits.len();
    let serial_res = serial(bits, default_serial_m(n));
    let results: [Result<f64>; 9] = [
        frequency(bits),
        block_frequency(bits, BLOCK_FREQUENCY_M),
        runs(bits),
        longest_run_of_ones(bits),
        cumulative_sums(bits, false),
        cumulative_sums(bits, true),
        serial_res.as_ref().map(|p| p.0).map_err(|e| Error::Unsupported(e.to_string())),
        serial_res.map(|p| p.1),
        approximate_entropy(bits, default_apen_m(n)),
    ];
    Ok(SUITE_TESTS
        .iter()
        .zip(results)
        .map(|(&test, r)| match r {
            Ok(p) => TestReport {
                test,
                p_value: Some(p),
                passed: p >= alpha,
                length: n,
                skipped: None,
            },
            Err(e) => TestReport {
                test,
                p_value: None,
                passed: false,
                length: n,
                skipped: Some(e.to_string()),
            },
        })
        .collect())
}

/// Pass count of one sub-test over many sequences.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PassRate {
    pub test: &'static str,
    pub passed: usize,
    pub total: usize,
    pub success_percent: f64,
    pub mean_p_value: f64,
}

/// Aggregates suite reports of many sequences, per sub-test. Skipped
/// results count towards `total` but not `passed`.
pub fn pass_rates(reports: &[Vec<TestReport>]) -> Vec<PassRate> {
    SUITE_TESTS
        .iter()
        .map(|&test| {
            let rows: Vec<&TestReport> = reports
                .iter()
                .flat_map(|r| r.iter().filter(|t| t.test == test))
                .collect();
            let total = rows.len();
            let passed = rows.iter().filter(|t| t.passed).count();
            let ps: Vec<f64> = rows.iter().filter_map(|t| t.p_value).collect();
            PassRate {
                test,
                passed,
                total,
                success_percent: if total == 0 {
                    0.0
                } else {
                    100.0 * passed as f64 / total as f64
                },
                mean_p_value: if ps.is_empty() {
                    0.0
                } else {
                    ps.iter().sum::<f64>() / ps.len() as f64
                },
            }
        })
        .collect()
}
