//! Indistinguishability experiments with logged, budgeted oracles.
//!
//! A game draws a fresh key and a hidden bit `b` per trial, hands an
//! [`OracleSession`] to an [`Adversary`], issues the challenge
//! `E(x_b)` and records the guess. Advantage is estimated as
//! `Pr[b' = 1 | b = 1] − Pr[b' = 1 | b = 0]`.

mod attacks;
mod completion;

pub use attacks::{
    cca_table_recovery, cpa_column_recovery, CcaRecovery, ExhaustiveRestricted, RandomGuess,
    RepeatedMessage, TableRecovery,
};
pub use completion::{
    complete_latin_square, complete_latin_square_with_budget, Completion, CompletionKind,
    PartialLatinSquare, DEFAULT_NODE_BUDGET,
};

use std::collections::HashSet;
use std::io::Write;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::cipher::{decrypt, encrypt, SebqKey};
use crate::error::{Error, Result};
use crate::feistel::{decrypt_cca2, encrypt_cca2, Cca2Key};
use crate::transform::BlockVector;

/// The scheme behind an oracle.
#[derive(Debug, Clone)]
pub enum Scheme {
    Plain(SebqKey),
    Cca2(Cca2Key),
}

impl Scheme {
    pub fn base(&self) -> &SebqKey {
        match self {
            Scheme::Plain(k) => k,
            Scheme::Cca2(k) => k.base(),
        }
    }

    pub fn encrypt(&self, iv: &BlockVector, m: &BlockVector) -> Result<BlockVector> {
        match self {
            Scheme::Plain(k) => encrypt(k, iv, m),
            Scheme::Cca2(k) => encrypt_cca2(k, iv, m),
        }
    }

    pub fn decrypt(&self, iv: &BlockVector, c: &BlockVector) -> Result<BlockVector> {
        match self {
            Scheme::Plain(k) => decrypt(k, iv, c),
            Scheme::Cca2(k) => decrypt_cca2(k, iv, c),
        }
    }
}

/// Which scheme a game instantiates per trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    Plain,
    /// The expander variant with output length `a` (default `2·n` when 0).
    Cca2 { a: usize },
}

impl SchemeKind {
    pub fn instantiate(self, key: SebqKey, n: usize) -> Result<Scheme> {
        Ok(match self {
            SchemeKind::Plain => Scheme::Plain(key),
            SchemeKind::Cca2 { a: 0 } => Scheme::Cca2(Cca2Key::with_default_a(key, n)?),
            SchemeKind::Cca2 { a } => Scheme::Cca2(Cca2Key::new(key, a)?),
        })
    }
}

/// What the adversary may do with the encryption oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QueryPolicy {
    /// Whether a message may be submitted more than once. When false, the
    /// challenge messages also count as submitted.
    pub allow_repeats: bool,
    /// Whether the adversary picks IVs; otherwise the oracle draws them.
    pub chosen_iv: bool,
}

impl QueryPolicy {
    pub const RESTRICTED: Self = Self {
        allow_repeats: false,
        chosen_iv: true,
    };
    pub const CHOSEN_IV_REPEATS: Self = Self {
        allow_repeats: true,
        chosen_iv: true,
    };
}

/// Query and volume limits. Volumes are in bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub q_e: usize,
    pub mu_e: usize,
    pub q_d: usize,
    pub mu_d: usize,
}

impl Budget {
    pub const UNLIMITED: Self = Self {
        q_e: usize::MAX,
        mu_e: usize::MAX,
        q_d: usize::MAX,
        mu_d: usize::MAX,
    };
}

impl Default for Budget {
    fn default() -> Self {
        Self::UNLIMITED
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QueryKind {
    Encrypt,
    LeftRight,
    Decrypt,
    /// A decryption query for a challenge ciphertext, refused.
    Rejected,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QueryRecord {
    pub kind: QueryKind,
    pub iv: Vec<u8>,
    pub input: Vec<u8>,
    /// For left-right queries, the second message.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_alt: Option<Vec<u8>>,
    pub output: Vec<u8>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Usage {
    pub q_e: usize,
    pub mu_e: usize,
    pub q_d: usize,
    pub mu_d: usize,
}

/// One adversary's view of a keyed scheme with a hidden bit.
pub struct OracleSession {
    scheme: Scheme,
    b: bool,
    n: usize,
    policy: QueryPolicy,
    budget: Budget,
    decrypt_enabled: bool,
    rng: ChaCha20Rng,
    submitted: HashSet<Vec<u8>>,
    challenges: HashSet<(Vec<u8>, Vec<u8>)>,
    usage: Usage,
    log: Vec<QueryRecord>,
    keep_log: bool,
}

impl OracleSession {
    /// `n` is the IV length in blocks; `seed` drives oracle-chosen IVs.
    pub fn new(
        scheme: Scheme,
        b: bool,
        n: usize,
        policy: QueryPolicy,
        budget: Budget,
        decrypt_enabled: bool,
        seed: u64,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty("IV"));
        }
        Ok(Self {
            scheme,
            b,
            n,
            policy,
            budget,
            decrypt_enabled,
            rng: ChaCha20Rng::seed_from_u64(seed),
            submitted: HashSet::new(),
            challenges: HashSet::new(),
            usage: Usage::default(),
            log: Vec::new(),
            keep_log: true,
        })
    }

    /// Stops recording queries; usage counters are still maintained.
    pub fn without_log(mut self) -> Self {
        self.keep_log = false;
        self
    }

    pub fn k(&self) -> u8 {
        self.scheme.base().k()
    }

    pub fn order(&self) -> usize {
        self.scheme.base().order()
    }

    pub fn iv_len(&self) -> usize {
        self.n
    }

    pub fn policy(&self) -> QueryPolicy {
        self.policy
    }

    pub fn usage(&self) -> Usage {
        self.usage
    }

    pub fn log(&self) -> &[QueryRecord] {
        &self.log
    }

    pub fn take_log(&mut self) -> Vec<QueryRecord> {
        std::mem::take(&mut self.log)
    }

    fn record(&mut self, rec: QueryRecord) {
        if self.keep_log {
            self.log.push(rec);
        }
    }

    fn resolve_iv(&mut self, iv: Option<&BlockVector>) -> Result<BlockVector> {
        match (iv, self.policy.chosen_iv) {
            (Some(iv), true) => {
                if iv.len() != self.n {
                    return Err(Error::LengthMismatch {
                        expected: self.n,
                        actual: iv.len(),
                    });
                }
                Ok(iv.clone())
            }
            (Some(_), false) => Err(Error::RestrictionViolated(
                "IVs are chosen by the oracle".into(),
            )),
            (None, _) => Ok(BlockVector::random(self.k(), self.n, &mut self.rng)),
        }
    }

    fn charge_encrypt(&mut self, blocks: usize) -> Result<()> {
        let bits = blocks * self.k() as usize;
        if self.usage.q_e >= self.budget.q_e {
            return Err(Error::BudgetExceeded("q_e"));
        }
        if self.usage.mu_e.saturating_add(bits) > self.budget.mu_e {
            return Err(Error::BudgetExceeded("mu_e"));
        }
        self.usage.q_e += 1;
        self.usage.mu_e += bits;
        Ok(())
    }

    fn note_submitted(&mut self, m: &BlockVector) -> Result<()> {
        if !self.policy.allow_repeats && !self.submitted.insert(m.to_vec()) {
            return Err(Error::RestrictionViolated(format!(
                "message {:?} submitted twice",
                m.symbols()
            )));
        }
        Ok(())
    }

    /// Encryption oracle. Returns the IV used and the ciphertext.
    pub fn encrypt(
        &mut self,
        iv: Option<&BlockVector>,
        m: &BlockVector,
    ) -> Result<(BlockVector, BlockVector)> {
        let iv = self.resolve_iv(iv)?;
        self.note_submitted(m)?;
        self.charge_encrypt(m.len())?;
        let c = self.scheme.encrypt(&iv, m)?;
        self.record(QueryRecord {
            kind: QueryKind::Encrypt,
            iv: iv.to_vec(),
            input: m.to_vec(),
            input_alt: None,
            output: c.to_vec(),
        });
        Ok((iv, c))
    }

    /// Decryption oracle; refuses every challenge ciphertext.
    pub fn decrypt(&mut self, iv: &BlockVector, c: &BlockVector) -> Result<BlockVector> {
        if !self.decrypt_enabled {
            return Err(Error::Unsupported("no decryption oracle in this game".into()));
        }
        if iv.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: iv.len(),
            });
        }
        if self.challenges.contains(&(iv.to_vec(), c.to_vec())) {
            self.record(QueryRecord {
                kind: QueryKind::Rejected,
                iv: iv.to_vec(),
                input: c.to_vec(),
                input_alt: None,
                output: Vec::new(),
            });
            return Err(Error::ChallengeQuery);
        }
        let bits = c.len() * self.k() as usize;
        if self.usage.q_d >= self.budget.q_d {
            return Err(Error::BudgetExceeded("q_d"));
        }
        if self.usage.mu_d.saturating_add(bits) > self.budget.mu_d {
            return Err(Error::BudgetExceeded("mu_d"));
        }
        self.usage.q_d += 1;
        self.usage.mu_d += bits;
        let m = self.scheme.decrypt(iv, c)?;
        self.record(QueryRecord {
            kind: QueryKind::Decrypt,
            iv: iv.to_vec(),
            input: c.to_vec(),
            input_alt: None,
            output: m.to_vec(),
        });
        Ok(m)
    }

    /// Left-or-right oracle: encrypts `x_b`. Counts as one encryption query
    /// of `|x0|` blocks, and the result becomes a refused decryption input.
    pub fn left_right(
        &mut self,
        iv: Option<&BlockVector>,
        x0: &BlockVector,
        x1: &BlockVector,
    ) -> Result<(BlockVector, BlockVector)> {
        if x0.len() != x1.len() {
            return Err(Error::LengthMismatch {
                expected: x0.len(),
                actual: x1.len(),
            });
        }
        let iv = self.resolve_iv(iv)?;
        self.note_submitted(x0)?;
        if x1 != x0 {
            self.note_submitted(x1)?;
        }
        self.charge_encrypt(x0.len())?;
        let x = if self.b { x1 } else { x0 };
        let c = self.scheme.encrypt(&iv, x)?;
        self.challenges.insert((iv.to_vec(), c.to_vec()));
        self.record(QueryRecord {
            kind: QueryKind::LeftRight,
            iv: iv.to_vec(),
            input: x0.to_vec(),
            input_alt: Some(x1.to_vec()),
            output: c.to_vec(),
        });
        Ok((iv, c))
    }
}

/// Left-or-right query with an oracle-chosen (or policy-permitted) IV.
pub fn lr_oracle(
    session: &mut OracleSession,
    x0: &BlockVector,
    x1: &BlockVector,
) -> Result<BlockVector> {
    Ok(session.left_right(None, x0, x1)?.1)
}

/// A challenge request: two equal-length messages and, if the policy allows,
/// the IV to encrypt under.
#[derive(Debug, Clone)]
pub struct ChallengeRequest {
    pub iv: Option<BlockVector>,
    pub x0: BlockVector,
    pub x1: BlockVector,
}

/// The challenge as the adversary sees it.
#[derive(Debug, Clone)]
pub struct Challenge {
    pub iv: BlockVector,
    pub ciphertext: BlockVector,
    pub x0: BlockVector,
    pub x1: BlockVector,
}

/// An adversary in the two-phase indistinguishability experiment.
pub trait Adversary {
    fn name(&self) -> &'static str;

    /// First phase: query as needed, then name the challenge pair.
    fn choose(&mut self, oracle: &mut OracleSession, rng: &mut dyn RngCore)
        -> Result<ChallengeRequest>;

    /// Second phase: query as needed, then guess `b`.
    fn guess(
        &mut self,
        oracle: &mut OracleSession,
        challenge: &Challenge,
        rng: &mut dyn RngCore,
    ) -> Result<bool>;
}

#[derive(Debug, Clone, Serialize)]
pub struct GameConfig {
    pub k: u8,
    /// IV length in blocks.
    pub n: usize,
    pub scheme: SchemeKind,
    pub policy: QueryPolicy,
    pub budget: Budget,
    pub trials: usize,
    pub seed: u64,
    /// Retain per-trial query logs in the outcome.
    pub keep_transcripts: bool,
}

impl GameConfig {
    pub fn new(k: u8, n: usize, scheme: SchemeKind) -> Self {
        Self {
            k,
            n,
            scheme,
            policy: QueryPolicy::RESTRICTED,
            budget: Budget::UNLIMITED,
            trials: 1000,
            seed: 0,
            keep_transcripts: false,
        }
    }
}

/// One trial of a game, as exported to JSON lines.
#[derive(Debug, Clone, Serialize)]
pub struct TrialTranscript {
    pub trial: usize,
    pub b: bool,
    pub b_guess: bool,
    pub usage: Usage,
    pub queries: Vec<QueryRecord>,
    /// Running `b' = 1` counts for `b = 1` and `b = 0`, and trials of each.
    pub guessed_one_given_one: usize,
    pub trials_b_one: usize,
    pub guessed_one_given_zero: usize,
    pub trials_b_zero: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct GameOutcome {
    pub adversary: &'static str,
    pub trials: usize,
    pub advantage: f64,
    pub correct: usize,
    pub transcripts: Vec<TrialTranscript>,
}

impl GameOutcome {
    /// Writes one JSON object per trial.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        for t in &self.transcripts {
            serde_json::to_writer(&mut w, t).map_err(std::io::Error::other)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// IND-CPA experiment: no decryption oracle.
pub fn run_ind_cpa(adv: &mut dyn Adversary, cfg: &GameConfig) -> Result<GameOutcome> {
    run_game(adv, cfg, false)
}

/// IND-CCA experiment: decryption oracle that refuses the challenge.
pub fn run_ind_cca(adv: &mut dyn Adversary, cfg: &GameConfig) -> Result<GameOutcome> {
    run_game(adv, cfg, true)
}

fn run_game(adv: &mut dyn Adversary, cfg: &GameConfig, cca: bool) -> Result<GameOutcome> {
    if cfg.trials == 0 {
        return Err(Error::OutOfGuard {
            what: "trials",
            value: 0,
            range: ">= 1",
        });
    }
    let mut master = ChaCha20Rng::seed_from_u64(cfg.seed);
    let (mut g1b1, mut t1, mut g1b0, mut t0, mut correct) = (0, 0, 0, 0, 0);
    let mut transcripts = Vec::new();
    for trial in 0..cfg.trials {
        let mut rng = ChaCha20Rng::seed_from_u64(master.next_u64());
        let key = SebqKey::generate(cfg.k, &mut rng)?;
        let scheme = cfg.scheme.instantiate(key, cfg.n)?;
        let b: bool = rng.random();
        let mut oracle = OracleSession::new(
            scheme,
            b,
            cfg.n,
            cfg.policy,
            cfg.budget,
            cca,
            rng.next_u64(),
        )?;
        if !cfg.keep_transcripts {
            oracle = oracle.without_log();
        }
        let req = adv.choose(&mut oracle, &mut rng)?;
        let (iv, ciphertext) = oracle.left_right(req.iv.as_ref(), &req.x0, &req.x1)?;
        let challenge = Challenge {
            iv,
            ciphertext,
            x0: req.x0,
            x1: req.x1,
        };
        let guess = adv.guess(&mut oracle, &challenge, &mut rng)?;
        if b {
            t1 += 1;
            g1b1 += guess as usize;
        } else {
            t0 += 1;
            g1b0 += guess as usize;
        }
        correct += (guess == b) as usize;
        if cfg.keep_transcripts {
            transcripts.push(TrialTranscript {
                trial,
                b,
                b_guess: guess,
                usage: oracle.usage(),
                queries: oracle.take_log(),
                guessed_one_given_one: g1b1,
                trials_b_one: t1,
                guessed_one_given_zero: g1b0,
                trials_b_zero: t0,
            });
        }
    }
    let rate = |x: usize, t: usize| if t == 0 { 0.0 } else { x as f64 / t as f64 };
    Ok(GameOutcome {
        adversary: adv.name(),
        trials: cfg.trials,
        advantage: rate(g1b1, t1) - rate(g1b0, t0),
        correct,
        transcripts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cipher::keygen;

    fn session(b: bool, policy: QueryPolicy, budget: Budget, cca: bool) -> OracleSession {
        let key = keygen(2, 1).unwrap();
        OracleSession::new(Scheme::Plain(key), b, 1, policy, budget, cca, 5).unwrap()
    }

    fn bv(s: &[u8]) -> BlockVector {
        BlockVector::new(2, s.to_vec()).unwrap()
    }

    #[test]
    fn left_right_encrypts_the_selected_message() {
        let key = keygen(2, 1).unwrap();
        let iv = bv(&[2]);
        for b in [false, true] {
            let mut s = session(b, QueryPolicy::CHOSEN_IV_REPEATS, Budget::UNLIMITED, false);
            let (_, c) = s.left_right(Some(&iv), &bv(&[1, 2]), &bv(&[3, 0])).unwrap();
            let expected = if b { bv(&[3, 0]) } else { bv(&[1, 2]) };
            assert_eq!(c, encrypt(&key, &iv, &expected).unwrap());
        }
        let mut s = session(true, QueryPolicy::RESTRICTED, Budget::UNLIMITED, false);
        assert!(matches!(
            lr_oracle(&mut s, &bv(&[1]), &bv(&[1, 2])),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn equal_messages_hide_b() {
        let iv = bv(&[1]);
        let mut s0 = session(false, QueryPolicy::CHOSEN_IV_REPEATS, Budget::UNLIMITED, false);
        let mut s1 = session(true, QueryPolicy::CHOSEN_IV_REPEATS, Budget::UNLIMITED, false);
        let m = bv(&[2, 3, 1]);
        assert_eq!(
            s0.left_right(Some(&iv), &m, &m).unwrap(),
            s1.left_right(Some(&iv), &m, &m).unwrap()
        );
    }

    #[test]
    fn budgets_are_enforced() {
        let budget = Budget {
            q_e: 2,
            ..Budget::UNLIMITED
        };
        let mut s = session(false, QueryPolicy::CHOSEN_IV_REPEATS, budget, false);
        s.encrypt(None, &bv(&[1])).unwrap();
        lr_oracle(&mut s, &bv(&[1]), &bv(&[2])).unwrap();
        assert!(matches!(
            s.encrypt(None, &bv(&[1])),
            Err(Error::BudgetExceeded("q_e"))
        ));
        let budget = Budget {
            mu_d: 4,
            ..Budget::UNLIMITED
        };
        let mut s = session(false, QueryPolicy::CHOSEN_IV_REPEATS, budget, true);
        s.decrypt(&bv(&[0]), &bv(&[1, 2])).unwrap();
        assert!(matches!(
            s.decrypt(&bv(&[0]), &bv(&[1])),
            Err(Error::BudgetExceeded("mu_d"))
        ));
    }

    #[test]
    fn restrictions_and_challenge_exclusion() {
        let mut s = session(false, QueryPolicy::RESTRICTED, Budget::UNLIMITED, true);
        s.encrypt(None, &bv(&[1])).unwrap();
        assert!(matches!(
            s.encrypt(None, &bv(&[1])),
            Err(Error::RestrictionViolated(_))
        ));
        assert!(matches!(
            s.left_right(None, &bv(&[1]), &bv(&[2])),
            Err(Error::RestrictionViolated(_))
        ));
        let (iv, c) = s.left_right(Some(&bv(&[3])), &bv(&[0]), &bv(&[2])).unwrap();
        assert!(matches!(s.decrypt(&iv, &c), Err(Error::ChallengeQuery)));
        assert_eq!(s.log().last().unwrap().kind, QueryKind::Rejected);
        // Same ciphertext under another IV is a different query.
        let other = bv(&[(iv[0] + 1) % 4]);
        s.decrypt(&other, &c).unwrap();

        let mut no_iv = session(
            false,
            QueryPolicy {
                allow_repeats: true,
                chosen_iv: false,
            },
            Budget::UNLIMITED,
            false,
        );
        assert!(matches!(
            no_iv.encrypt(Some(&bv(&[0])), &bv(&[1])),
            Err(Error::RestrictionViolated(_))
        ));
        assert!(matches!(no_iv.decrypt(&bv(&[0]), &bv(&[1])), Err(Error::Unsupported(_))));
    }

    #[test]
    fn log_matches_queries() {
        let mut s = session(true, QueryPolicy::CHOSEN_IV_REPEATS, Budget::UNLIMITED, true);
        let (iv, c) = s.encrypt(Some(&bv(&[2])), &bv(&[1, 1])).unwrap();
        let m = s.decrypt(&iv, &c).unwrap();
        assert_eq!(m, bv(&[1, 1]));
        let log = s.log();
        assert_eq!(log.len(), 2);
        assert_eq!(log[0].kind, QueryKind::Encrypt);
        assert_eq!(log[0].output, c.to_vec());
        assert_eq!(log[1].kind, QueryKind::Decrypt);
        assert_eq!(log[1].output, vec![1, 1]);
        assert_eq!(
            s.usage(),
            Usage {
                q_e: 1,
                mu_e: 4,
                q_d: 1,
                mu_d: 4
            }
        );
    }

    #[test]
    fn transcripts_serialize_as_json_lines() {
        let mut cfg = GameConfig::new(2, 1, SchemeKind::Plain);
        cfg.trials = 3;
        cfg.keep_transcripts = true;
        let out = run_ind_cpa(&mut RandomGuess, &cfg).unwrap();
        let mut buf = Vec::new();
        out.write_jsonl(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        let v: serde_json::Value = serde_json::from_str(lines[2]).unwrap();
        assert_eq!(v["trial"], 2);
        assert_eq!(v["queries"][0]["kind"], "left_right");
    }
}
