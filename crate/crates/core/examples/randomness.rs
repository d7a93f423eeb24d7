//! Randomness battery over ciphertexts of all-zero plaintexts.

use sebq::analysis::{cipher_stats, write_pass_rates_csv, CipherStatsConfig, PlaintextKind};

fn main() -> sebq::Result<()> {
    let cfg = CipherStatsConfig {
        plaintext: PlaintextKind::Zeros,
        sequences: 20,
        ..Default::default()
    };
    let (reports, rates) = cipher_stats(&cfg)?;
    for r in &reports[0] {
        println!("{:<20} p = {:?}", r.test, r.p_value);
    }
    write_pass_rates_csv(&rates, std::io::stdout())
}
