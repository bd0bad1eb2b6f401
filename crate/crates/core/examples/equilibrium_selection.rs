//! Which conventions survive small mistake rates, over a grid of memory and
//! sample sizes.
//!
//! `cargo run --release --example equilibrium_selection`

use stochstab::format::parse_game;
use stochstab::{build_chain, ssd, AdaptiveConfig};

const GAMES: [(&str, &str); 3] = [
    ("coordination", include_str!("../fixtures/coordination.game")),
    ("battle of the sexes", include_str!("../fixtures/battle_of_the_sexes.game")),
    ("biased battle of the sexes", include_str!("../fixtures/biased_battle_of_the_sexes.game")),
];

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let max_memory: usize = std::env::args().nth(1).map_or(Ok(3), |s| s.parse())?;
    for (name, text) in GAMES {
        let game = parse_game(text)?;
        println!("{name}");
        for m in 1..=max_memory {
            for s in 1..=m {
                let chain = build_chain(&game, AdaptiveConfig::new(m, s)?)?;
                let result = ssd(&chain.matrix)?;
                let support: Vec<String> = result
                    .sss
                    .iter()
                    .map(|&i| format!("{}:{:.4}", chain.labels[i], stochstab::rational::to_f64(&result.ssd[i])))
                    .collect();
                println!("  m={m} s={s} ({} states)  {}", chain.labels.len(), support.join(" "));
            }
        }
    }
    Ok(())
}
