//! With repeated messages and chosen IVs, one column of the hidden table
//! falls out of `order` encryptions.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sebq::cipher::SebqKey;
use sebq::games::{cpa_column_recovery, Budget, OracleSession, QueryPolicy, Scheme};

fn main() -> sebq::Result<()> {
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let key = SebqKey::generate(3, &mut rng)?;
    let mut oracle = OracleSession::new(
        Scheme::Plain(key.clone()),
        false,
        1,
        QueryPolicy::CHOSEN_IV_REPEATS,
        Budget::UNLIMITED,
        false,
        6,
    )?;
    let col = cpa_column_recovery(&mut oracle, 2)?;
    println!("recovered column 2: {col:?}");
    println!("hidden column 2:    {:?}", key.square().column(2));
    for q in oracle.log().iter().take(3) {
        println!("{}", serde_json::to_string(q).unwrap());
    }
    Ok(())
}
