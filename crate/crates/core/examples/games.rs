//! Indistinguishability games with the bundled adversaries.

use sebq::games::{
    run_ind_cca, run_ind_cpa, ExhaustiveRestricted, GameConfig, QueryPolicy, RandomGuess,
    RepeatedMessage, SchemeKind, TableRecovery,
};

fn main() -> sebq::Result<()> {
    let mut cfg = GameConfig::new(2, 1, SchemeKind::Plain);
    cfg.trials = 500;
    println!("restricted CPA, coin:        {:+.3}", run_ind_cpa(&mut RandomGuess, &cfg)?.advantage);
    println!(
        "restricted CPA, exhaustive:  {:+.3}",
        run_ind_cpa(&mut ExhaustiveRestricted::default(), &cfg)?.advantage
    );
    cfg.policy = QueryPolicy::CHOSEN_IV_REPEATS;
    println!("CPA with repeats:            {:+.3}", run_ind_cpa(&mut RepeatedMessage, &cfg)?.advantage);

    let mut cfg = GameConfig::new(4, 1, SchemeKind::Plain);
    cfg.policy = QueryPolicy::CHOSEN_IV_REPEATS;
    cfg.trials = 50;
    println!("CCA, table recovery:         {:+.3}", run_ind_cca(&mut TableRecovery::default(), &cfg)?.advantage);
    cfg.scheme = SchemeKind::Cca2 { a: 0 };
    cfg.trials = 200;
    println!("CCA on cca2 variant:         {:+.3}", run_ind_cca(&mut TableRecovery::default(), &cfg)?.advantage);
    Ok(())
}
