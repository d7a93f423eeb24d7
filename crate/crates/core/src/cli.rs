//! The `sebq` command line.
//!
//! Exit codes: 0 success, 1 usage or parameter error, 2 I/O error, 3 corrupt
//! frame, 4 malformed padding, 5 key/frame mismatch.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

use crate::analysis::{
    avalanche, cipher_stats, opcount_report, secure_order_report, write_avalanche_csv,
    write_json, write_pass_rates_csv, AvalancheTarget, CipherStatsConfig, PlaintextKind,
    DEFAULT_OPS_PER_TRIAL,
};
use crate::cipher::{open, seal, CipherFrame, SebqKey};
use crate::error::{Error, Result};
use crate::feistel::{open_cca2, seal_cca2, Cca2Key};
use crate::games::{
    cca_table_recovery, cpa_column_recovery, run_ind_cca, Budget, GameConfig, OracleSession,
    QueryPolicy, Scheme, SchemeKind, TableRecovery, DEFAULT_NODE_BUDGET,
};
use crate::quasigroup::{parse_key_file, write_key_file};
use crate::transform::BlockVector;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_CORRUPT_FRAME: i32 = 3;
pub const EXIT_PADDING: i32 = 4;
pub const EXIT_KEY_MISMATCH: i32 = 5;

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        Error::CorruptFrame(_) => EXIT_CORRUPT_FRAME,
        Error::MalformedPadding => EXIT_PADDING,
        Error::KeyMismatch { .. } | Error::ExpanderMismatch(_) => EXIT_KEY_MISMATCH,
        _ => EXIT_USAGE,
    }
}

#[derive(Debug, Parser)]
#[command(name = "sebq", version, about = "Quasigroup chained-mode cipher toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    Plain,
    Cca2,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a random Latin-square key.
    Keygen {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=8))]
        k: u8,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Encrypt a file into a frame.
    Encrypt(CryptArgs),
    /// Decrypt a frame.
    Decrypt(CryptArgs),
    /// Statistical analysis reports.
    #[command(subcommand)]
    Analyze(Analyze),
    /// Attack demonstrations against a fresh hidden key.
    #[command(subcommand)]
    Attack(Attack),
}

#[derive(Debug, Args)]
struct CryptArgs {
    #[arg(long)]
    key: PathBuf,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// IV length in blocks (encrypt only).
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u16).range(1..))]
    n: u16,
    #[arg(long, value_enum, default_value_t = SchemeArg::Plain)]
    scheme: SchemeArg,
    /// Expander output length for cca2; defaults to 2·n.
    #[arg(long)]
    a: Option<u16>,
    #[arg(long)]
    seed: Option<u64>,
    /// Fixed IV as comma-separated symbols, for test vectors (encrypt only).
    #[arg(long)]
    iv: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Analyze {
    /// Randomness battery over ciphertexts.
    Stats {
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(1..=8))]
        k: u8,
        #[arg(long, default_value_t = 4000)]
        bits: usize,
        #[arg(long, default_value_t = 400)]
        iv_bits: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0.01)]
        alpha: f64,
        #[arg(long, default_value = "random")]
        plaintext: String,
        #[arg(long)]
        seed: Option<u64>,
        /// CSV output path.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Avalanche experiment.
    Avalanche {
        #[arg(long, default_value = "plaintext")]
        target: String,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(1..=8))]
        k: u8,
        #[arg(long, default_value_t = 4000)]
        bits: usize,
        #[arg(long, default_value_t = 400)]
        iv_bits: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        /// Comma-separated flip positions; defaults depend on the target.
        #[arg(long)]
        positions: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Operation count for an n-block leader, k-bit symbols and l blocks.
    Opcount {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        l: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Minimum Latin-square order for a brute-force target.
    SecureOrder {
        #[arg(long, default_value_t = 128)]
        target_bits: u32,
        #[arg(long, default_value_t = DEFAULT_OPS_PER_TRIAL)]
        ops: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum Attack {
    /// Recover one column with repeated chosen-IV encryptions.
    CpaColumn {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        k: u8,
        #[arg(long)]
        message: u8,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Recover the whole table from decryption queries.
    CcaRecover {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        k: u8,
        #[arg(long, value_enum, default_value_t = SchemeArg::Plain)]
        scheme: SchemeArg,
        /// Games played to estimate the advantage.
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// JSON-lines game transcript.
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
}

fn rng_for(seed: Option<u64>) -> ChaCha20Rng {
    match seed {
        Some(s) => ChaCha20Rng::seed_from_u64(s),
        None => ChaCha20Rng::from_os_rng(),
    }
}

fn read(path: &Path) -> Result<Vec<u8>> {
    Ok(fs::read(path)?)
}

fn write(path: &Path, data: &[u8]) -> Result<()> {
    Ok(fs::write(path, data)?)
}

fn load_key(path: &Path) -> Result<SebqKey> {
    let text = String::from_utf8(read(path)?)
        .map_err(|_| Error::KeyFile("key file is not UTF-8".into()))?;
    SebqKey::from_square(parse_key_file(&text)?)
}

/// SHA-256 of the canonical key-file text, hex encoded.
pub fn key_fingerprint(key: &SebqKey) -> String {
    hex::encode(Sha256::digest(write_key_file(key.square()).as_bytes()))
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::Unsupported(format!("invalid {what} entry {t:?}")))
        })
        .collect()
}

/// Parses arguments and runs; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Keygen { k, seed, out: path } => {
            let key = SebqKey::generate(k, &mut rng_for(seed))?;
            write(&path, write_key_file(key.square()).as_bytes())?;
            writeln!(out, "order {} fingerprint {}", key.order(), key_fingerprint(&key))?;
            Ok(())
        }
        Command::Encrypt(a) => encrypt_cmd(a, out),
        Command::Decrypt(a) => decrypt_cmd(a, out),
        Command::Analyze(a) => analyze_cmd(a, out),
        Command::Attack(a) => attack_cmd(a, out),
    }
}

fn cca2_key(key: SebqKey, n: usize, a: Option<u16>) -> Result<Cca2Key> {
    match a {
        Some(a) => Cca2Key::new(key, a as usize),
        None => Cca2Key::with_default_a(key, n),
    }
}

fn encrypt_cmd(a: CryptArgs, out: &mut dyn Write) -> Result<()> {
    let key = load_key(&a.key)?;
    let data = read(&a.input)?;
    let mut rng = rng_for(a.seed);
    let iv = match &a.iv {
        Some(s) => BlockVector::new(key.k(), parse_list(s, "IV")?)?,
        None => BlockVector::random(key.k(), a.n as usize, &mut rng),
    };
    let frame = match a.scheme {
        SchemeArg::Plain => seal(&key, &iv, &data)?,
        SchemeArg::Cca2 => seal_cca2(&cca2_key(key, iv.len(), a.a)?, &iv, &data)?,
    };
    let bytes = frame.to_bytes();
    write(&a.out, &bytes)?;
    writeln!(
        out,
        "encrypted {} bytes into {} bytes (version {}, n = {})",
        data.len(),
        bytes.len(),
        frame.version(),
        frame.n()
    )?;
    Ok(())
}

fn decrypt_cmd(a: CryptArgs, out: &mut dyn Write) -> Result<()> {
    let key = load_key(&a.key)?;
    let frame = CipherFrame::from_bytes(&read(&a.input)?)?;
    if frame.k() != key.k() {
        return Err(Error::KeyMismatch {
            key_k: key.k(),
            frame_k: frame.k(),
        });
    }
    let data = match frame.cca2 {
        None => open(&key, &frame)?,
        Some(h) => open_cca2(&cca2_key(key, frame.n(), Some(h.a))?, &frame)?,
    };
    write(&a.out, &data)?;
    writeln!(out, "decrypted {} bytes", data.len())?;
    Ok(())
}

fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::OutOfGuard {
            what: "trials",
            value: 0,
            range: ">= 1",
        });
    }
    Ok(())
}

fn analyze_cmd(a: Analyze, out: &mut dyn Write) -> Result<()> {
    match a {
        Analyze::Stats {
            k,
            bits,
            iv_bits,
            trials,
            alpha,
            plaintext,
            seed,
            out: csv_path,
            json,
        } => {
            check_trials(trials)?;
            let cfg = CipherStatsConfig {
                k,
                iv_bits,
                message_bits: bits,
                sequences: trials,
                alpha,
                plaintext: plaintext.parse::<PlaintextKind>()?,
                seed: seed.unwrap_or_else(|| rand::rng().random()),
            };
            let (_, rates) = cipher_stats(&cfg)?;
            if let Some(p) = csv_path {
                write_pass_rates_csv(&rates, fs::File::create(p)?)?;
            }
            if let Some(p) = json {
                write_json(&serde_json::json!({ "config": cfg, "pass_rates": rates }), fs::File::create(p)?)?;
            }
            for r in &rates {
                writeln!(out, "{:<20} {:>4}/{} passed", r.test, r.passed, r.total)?;
            }
            let worst = rates.iter().map(|r| r.passed).min().unwrap_or(0);
            writeln!(out, "minimum pass count {worst}/{trials} at alpha {alpha}")?;
            Ok(())
        }
        Analyze::Avalanche {
            target,
            k,
            bits,
            iv_bits,
            trials,
            positions,
            seed,
            out: csv_path,
            json,
        } => {
            check_trials(trials)?;
            let target: AvalancheTarget = target.parse()?;
            let kk = k as usize;
            if bits == 0 || bits % kk != 0 || iv_bits == 0 || iv_bits % kk != 0 {
                return Err(Error::Unsupported(format!(
                    "bit lengths must be non-zero multiples of k = {k}"
                )));
            }
            let positions: Vec<usize> = match positions {
                Some(s) => parse_list(&s, "position")?,
                None => default_positions(target, iv_bits),
            };
            let mut rng = rng_for(seed);
            let key = SebqKey::generate(k, &mut rng)?;
            let iv = BlockVector::random(k, iv_bits / kk, &mut rng);
            let msg = BlockVector::random(k, bits / kk, &mut rng);
            let rep = avalanche(target, &key, &iv, &msg, trials, &positions, &mut rng)?;
            if let Some(p) = csv_path {
                write_avalanche_csv(&rep, fs::File::create(p)?)?;
            }
            if let Some(p) = json {
                write_json(&rep, fs::File::create(p)?)?;
            }
            writeln!(
                out,
                "mean avalanche {:.3}% (min {:.3}%, max {:.3}%) over {} flips",
                rep.mean,
                rep.min,
                rep.max,
                trials * positions.len()
            )?;
            Ok(())
        }
        Analyze::Opcount { n, k, l, json } => {
            let rep = opcount_report(n, k, l)?;
            if let Some(p) = json {
                write_json(&rep, fs::File::create(p)?)?;
            }
            writeln!(out, "{}", rep.encrypt_ops)?;
            writeln!(
                out,
                "encryption and decryption together: {}; lookups n*l = {}, xors (n-1)*l = {}",
                rep.total_ops, rep.predicted_lookups, rep.predicted_xors
            )?;
            writeln!(out, "note: {}", rep.note)?;
            Ok(())
        }
        Analyze::SecureOrder {
            target_bits,
            ops,
            json,
        } => {
            let rep = secure_order_report(target_bits, ops)?;
            if let Some(p) = json {
                write_json(&rep, fs::File::create(p)?)?;
            }
            writeln!(out, "exact-table policy: {}", rep.exact_table)?;
            writeln!(out, "lower-bound policy: {}", rep.lower_bound)?;
            writeln!(out, "note: {}", rep.note)?;
            Ok(())
        }
    }
}

/// Flip positions used when none are given.
pub fn default_positions(target: AvalancheTarget, iv_bits: usize) -> Vec<usize> {
    match target {
        AvalancheTarget::Plaintext | AvalancheTarget::Key => (0..10).collect(),
        AvalancheTarget::Iv => {
            let mut v: Vec<usize> = (0..8).collect();
            v.extend([127, 255].iter().filter(|&&p| p < iv_bits));
            v
        }
    }
}

fn attack_cmd(a: Attack, out: &mut dyn Write) -> Result<()> {
    match a {
        Attack::CpaColumn { k, message, seed } => {
            let mut rng = rng_for(seed);
            let key = SebqKey::generate(k, &mut rng)?;
            if message as usize >= key.order() {
                return Err(Error::InvalidSymbol {
                    symbol: message as usize,
                    order: key.order(),
                });
            }
            let mut oracle = OracleSession::new(
                Scheme::Plain(key.clone()),
                false,
                1,
                QueryPolicy::CHOSEN_IV_REPEATS,
                Budget::UNLIMITED,
                false,
                rng.random(),
            )?;
            let column = cpa_column_recovery(&mut oracle, message)?;
            let truth = key.square().column(message as usize);
            let shown: Vec<String> = column.iter().map(u8::to_string).collect();
            writeln!(out, "column {message}: {}", shown.join(" "))?;
            writeln!(
                out,
                "{} encryption queries, matches hidden key: {}",
                oracle.usage().q_e,
                column == truth
            )?;
            Ok(())
        }
        Attack::CcaRecover {
            k,
            scheme,
            trials,
            seed,
            transcript,
        } => {
            check_trials(trials)?;
            let mut rng = rng_for(seed);
            let kind = match scheme {
                SchemeArg::Plain => SchemeKind::Plain,
                SchemeArg::Cca2 => SchemeKind::Cca2 { a: 0 },
            };
            let key = SebqKey::generate(k, &mut rng)?;
            let hidden = kind.instantiate(key.clone(), 1)?;
            let mut oracle = OracleSession::new(
                hidden,
                false,
                1,
                QueryPolicy::CHOSEN_IV_REPEATS,
                Budget::UNLIMITED,
                true,
                rng.random(),
            )?
            .without_log();
            let skip = rng.random_range(0..key.order()) as u8;
            let rec = cca_table_recovery(&mut oracle, Some(skip), DEFAULT_NODE_BUDGET)?;
            let cells = key.order() * key.order();
            let correct = rec.correct_cells(key.square());

            let mut cfg = GameConfig::new(k, 1, kind);
            cfg.policy = QueryPolicy::CHOSEN_IV_REPEATS;
            cfg.trials = trials;
            cfg.seed = rng.random();
            cfg.keep_transcripts = transcript.is_some();
            let outcome = run_ind_cca(&mut TableRecovery::default(), &cfg)?;
            if let Some(p) = transcript {
                outcome.write_jsonl(std::io::BufWriter::new(fs::File::create(p)?))?;
            }
            writeln!(
                out,
                "{} decryption queries, completion {:?}",
                rec.queries,
                rec.completion.kind()
            )?;
            writeln!(
                out,
                "recovered {correct}/{cells} cells, advantage {:.3}",
                outcome.advantage
            )?;
            Ok(())
        }
    }
}
