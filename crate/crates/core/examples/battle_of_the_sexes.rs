//! Exact stochastically stable distribution of the battle of the sexes with
//! memory 2 and sample size 2, including the mixed-history states.
//!
//! `cargo run --example battle_of_the_sexes`

use stochstab::format::parse_game;
use stochstab::{build_chain, ssd, AdaptiveConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let game = parse_game(include_str!("../fixtures/battle_of_the_sexes.game"))?;
    let chain = build_chain(&game, AdaptiveConfig::new(2, 2)?)?;
    let result = ssd(&chain.matrix)?;
    println!("{} states, {} stochastically stable", chain.labels.len(), result.sss.len());
    for &i in &result.sss {
        println!("{}  {}", chain.labels[i], result.ssd[i]);
    }
    Ok(())
}
