//! Concrete adversaries against single-block, single-symbol-leader
//! instances (`n = 1`), where a ciphertext block is one table lookup.

use rand::{Rng, RngCore};
use serde::Serialize;

use super::completion::{complete_latin_square_with_budget, Completion, PartialLatinSquare};
use super::{Adversary, Challenge, ChallengeRequest, OracleSession};
use crate::error::{Error, Result};
use crate::quasigroup::LatinSquare;
use crate::transform::BlockVector;

fn require_single_leader(oracle: &OracleSession) -> Result<()> {
    if oracle.iv_len() != 1 {
        return Err(Error::Unsupported(format!(
            "attack needs a 1-block leader, oracle uses {}",
            oracle.iv_len()
        )));
    }
    Ok(())
}

fn symbol(oracle: &OracleSession, s: usize) -> BlockVector {
    BlockVector::new(oracle.k(), vec![s as u8]).expect("symbol below order")
}

fn two_distinct(order: usize, rng: &mut dyn RngCore) -> (u8, u8) {
    let m0 = rng.random_range(0..order);
    let m1 = (m0 + rng.random_range(1..order)) % order;
    (m0 as u8, m1 as u8)
}

/// Encrypts `m` once under every IV and returns the column `mul[r][m]` for
/// `r = 0..order`. Needs chosen IVs and repeated messages.
pub fn cpa_column_recovery(oracle: &mut OracleSession, m: u8) -> Result<Vec<u8>> {
    require_single_leader(oracle)?;
    let policy = oracle.policy();
    if !policy.allow_repeats || !policy.chosen_iv {
        return Err(Error::Unsupported(
            "column recovery needs chosen IVs and repeated messages".into(),
        ));
    }
    let msg = symbol(oracle, m as usize);
    (0..oracle.order())
        .map(|r| {
            let iv = symbol(oracle, r);
            Ok(oracle.encrypt(Some(&iv), &msg)?.1[0])
        })
        .collect()
}

/// Result of [`cca_table_recovery`].
#[derive(Debug, Clone)]
pub struct CcaRecovery {
    /// Cells learned from decryption answers that were consistent with
    /// earlier answers.
    pub partial: PartialLatinSquare,
    pub completion: Completion,
    pub queries: usize,
    /// Answers dropped because they contradicted the partial square.
    pub conflicts: usize,
}

impl CcaRecovery {
    pub fn recovered(&self) -> Option<&LatinSquare> {
        self.completion.square()
    }

    /// Cells the attack got right: from the completed square when there is
    /// one, else from the partial square.
    pub fn correct_cells(&self, truth: &LatinSquare) -> usize {
        match self.completion.square() {
            Some(sq) => {
                let n = truth.order();
                (0..n * n)
                    .filter(|&i| sq.cells()[i] == truth.cells()[i])
                    .count()
            }
            None => self.partial.matching_cells(truth),
        }
    }
}

/// Decrypts every single-block ciphertext `c ≠ skip` under every IV `r`.
/// Against the plain scheme each answer `m = r \ c` fixes `mul[r][m] = c`;
/// the `skip` column is then forced by completion.
pub fn cca_table_recovery(
    oracle: &mut OracleSession,
    skip: Option<u8>,
    node_budget: u64,
) -> Result<CcaRecovery> {
    require_single_leader(oracle)?;
    let n = oracle.order();
    let mut partial = PartialLatinSquare::new(n)?;
    let mut queries = 0;
    let mut conflicts = 0;
    for r in 0..n {
        let iv = symbol(oracle, r);
        for c in 0..n {
            if skip == Some(c as u8) {
                continue;
            }
            let m = oracle.decrypt(&iv, &symbol(oracle, c))?[0];
            queries += 1;
            if !partial.try_set(r, m as usize, c as u8) {
                conflicts += 1;
            }
        }
    }
    let completion = complete_latin_square_with_budget(&partial, node_budget);
    Ok(CcaRecovery {
        partial,
        completion,
        queries,
        conflicts,
    })
}

/// Guesses `b` with a fair coin.
#[derive(Debug, Default, Clone, Copy)]
pub struct RandomGuess;

impl Adversary for RandomGuess {
    fn name(&self) -> &'static str {
        "random-guess"
    }

    fn choose(
        &mut self,
        oracle: &mut OracleSession,
        rng: &mut dyn RngCore,
    ) -> Result<ChallengeRequest> {
        let (m0, m1) = two_distinct(oracle.order(), rng);
        Ok(ChallengeRequest {
            iv: None,
            x0: symbol(oracle, m0 as usize),
            x1: symbol(oracle, m1 as usize),
        })
    }

    fn guess(&mut self, _: &mut OracleSession, _: &Challenge, rng: &mut dyn RngCore) -> Result<bool> {
        Ok(rng.random())
    }
}

/// Under the no-repeat rule: learns every column except the two challenge
/// columns by querying distinct two-block messages `(m, t)` under IV `t`,
/// then tests both placements of the challenge symbol by completion. Both
/// placements always complete (swapping the two columns is again a Latin
/// square), so it falls back to a coin flip.
#[derive(Debug, Clone)]
pub struct ExhaustiveRestricted {
    pub node_budget: u64,
    partial: Option<PartialLatinSquare>,
}

impl Default for ExhaustiveRestricted {
    fn default() -> Self {
        Self {
            node_budget: 100_000,
            partial: None,
        }
    }
}

impl Adversary for ExhaustiveRestricted {
    fn name(&self) -> &'static str {
        "exhaustive-restricted"
    }

    fn choose(
        &mut self,
        oracle: &mut OracleSession,
        rng: &mut dyn RngCore,
    ) -> Result<ChallengeRequest> {
        require_single_leader(oracle)?;
        let n = oracle.order();
        let (m0, m1) = two_distinct(n, rng);
        let mut partial = PartialLatinSquare::new(n)?;
        let chosen = oracle.policy().chosen_iv;
        for m in (0..n).filter(|&m| m != m0 as usize && m != m1 as usize) {
            for t in 0..n {
                let msg = BlockVector::new(oracle.k(), vec![m as u8, t as u8])?;
                let iv = symbol(oracle, t);
                let (iv, c) = oracle.encrypt(chosen.then_some(&iv), &msg)?;
                partial.set(iv[0] as usize, m, c[0])?;
            }
        }
        self.partial = Some(partial);
        let iv = symbol(oracle, rng.random_range(0..n));
        Ok(ChallengeRequest {
            iv: chosen.then_some(iv),
            x0: symbol(oracle, m0 as usize),
            x1: symbol(oracle, m1 as usize),
        })
    }

    fn guess(
        &mut self,
        _: &mut OracleSession,
        ch: &Challenge,
        rng: &mut dyn RngCore,
    ) -> Result<bool> {
        let partial = self.partial.take().ok_or(Error::Empty("learned columns"))?;
        let r = ch.iv[0] as usize;
        let c = ch.ciphertext[0];
        let feasible = |m: u8| {
            let mut p = partial.clone();
            p.try_set(r, m as usize, c)
                && !matches!(
                    complete_latin_square_with_budget(&p, self.node_budget),
                    Completion::Unsat
                )
        };
        match (feasible(ch.x0[0]), feasible(ch.x1[0])) {
            (true, false) => Ok(false),
            (false, true) => Ok(true),
            _ => Ok(rng.random()),
        }
    }
}

/// With repeats and chosen IVs: recovers the column of `x0` and checks the
/// challenge ciphertext against it.
#[derive(Debug, Default, Clone, Copy)]
pub struct RepeatedMessage;

impl Adversary for RepeatedMessage {
    fn name(&self) -> &'static str {
        "repeated-message"
    }

    fn choose(
        &mut self,
        oracle: &mut OracleSession,
        rng: &mut dyn RngCore,
    ) -> Result<ChallengeRequest> {
        require_single_leader(oracle)?;
        let n = oracle.order();
        let (m0, m1) = two_distinct(n, rng);
        let iv = symbol(oracle, rng.random_range(0..n));
        Ok(ChallengeRequest {
            iv: oracle.policy().chosen_iv.then_some(iv),
            x0: symbol(oracle, m0 as usize),
            x1: symbol(oracle, m1 as usize),
        })
    }

    fn guess(
        &mut self,
        oracle: &mut OracleSession,
        ch: &Challenge,
        _: &mut dyn RngCore,
    ) -> Result<bool> {
        let column = cpa_column_recovery(oracle, ch.x0[0])?;
        Ok(column[ch.iv[0] as usize] != ch.ciphertext[0])
    }
}

/// Per-trial statistics kept by [`TableRecovery`].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RecoveryStats {
    pub queries: usize,
    pub known_cells: usize,
    pub conflicts: usize,
    pub completion: super::CompletionKind,
}

/// Recovers the table with [`cca_table_recovery`] (skipping the challenge
/// ciphertext symbol) and decrypts the challenge with it. Falls back to a
/// coin flip when completion is not unique or the decryption matches
/// neither message.
#[derive(Debug, Clone)]
pub struct TableRecovery {
    pub node_budget: u64,
    pub last: Option<RecoveryStats>,
    pub last_square: Option<LatinSquare>,
    pub last_partial: Option<PartialLatinSquare>,
}

impl Default for TableRecovery {
    fn default() -> Self {
        Self {
            node_budget: 20_000,
            last: None,
            last_square: None,
            last_partial: None,
        }
    }
}

impl Adversary for TableRecovery {
    fn name(&self) -> &'static str {
        "table-recovery"
    }

    fn choose(
        &mut self,
        oracle: &mut OracleSession,
        rng: &mut dyn RngCore,
    ) -> Result<ChallengeRequest> {
        RepeatedMessage.choose(oracle, rng)
    }

    fn guess(
        &mut self,
        oracle: &mut OracleSession,
        ch: &Challenge,
        rng: &mut dyn RngCore,
    ) -> Result<bool> {
        let rec = cca_table_recovery(oracle, Some(ch.ciphertext[0]), self.node_budget)?;
        self.last = Some(RecoveryStats {
            queries: rec.queries,
            known_cells: rec.partial.known_count(),
            conflicts: rec.conflicts,
            completion: rec.completion.kind(),
        });
        self.last_partial = Some(rec.partial.clone());
        self.last_square = rec.completion.square().cloned();
        let Completion::Unique(sq) = &rec.completion else {
            return Ok(rng.random());
        };
        let r = ch.iv[0] as usize;
        let m = sq
            .row(r)
            .iter()
            .position(|&s| s == ch.ciphertext[0])
            .expect("Latin row contains every symbol") as u8;
        if m == ch.x0[0] {
            Ok(false)
        } else if m == ch.x1[0] {
            Ok(true)
        } else {
            Ok(rng.random())
        }
    }
}
