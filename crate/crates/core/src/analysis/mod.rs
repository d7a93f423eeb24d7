//! Randomness tests, avalanche experiments, operation counts and minimum
//! secure orders, with CSV/JSON report writers.

pub mod avalanche;
pub mod complexity;
pub mod randomness;
pub mod report;

pub use avalanche::{avalanche, percent_changed, perturb_key, AvalancheReport, AvalancheTarget, FlipRow};
pub use complexity::{
    instrumented_counts, log2_square_count, min_secure_order, min_secure_order_with,
    operation_count, opcount_report, secure_order_report, CountPolicy, OpCountReport,
    SecureOrderReport, DEFAULT_OPS_PER_TRIAL, QUOTED_EXAMPLE_OPS,
};
pub use randomness::{
    bits_from_bytes, pass_rates, randomness_suite, PassRate, TestReport, SUITE_TESTS,
};
pub use report::{
    cipher_stats, write_avalanche_csv, write_json, write_pass_rates_csv, CipherStatsConfig,
    PlaintextKind,
};
