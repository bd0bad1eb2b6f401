//! Adaptive play with one period of memory in a pure coordination game, with
//! the solver trace.
//!
//! `cargo run --example qwerty`

use stochstab::format::parse_game;
use stochstab::ssd::Step;
use stochstab::{build_chain, ssd, AdaptiveConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let game = parse_game(include_str!("../fixtures/qwerty.game"))?;
    let chain = build_chain(&game, AdaptiveConfig::new(1, 1)?)?;
    println!("states: {}", chain.labels.join(" "));
    println!("M(e) =\n{}", chain.matrix.matrix());

    let result = ssd(&chain.matrix)?;
    for entry in &result.trace {
        let names = |s: &[usize]| s.iter().map(|&i| chain.labels[i].as_str()).collect::<Vec<_>>().join(",");
        match &entry.step {
            Step::Collapse { classes, states_after } => {
                let parts: Vec<String> = classes.iter().map(|c| format!("{{{}}}", names(c))).collect();
                println!("iteration {}: collapse {} -> {} states", entry.iteration, parts.join(" "), states_after);
            }
            Step::TransientScale { transient, alpha, .. } => {
                println!("iteration {}: speed up all but {{{}}} by ({})/e", entry.iteration, names(transient), alpha);
            }
        }
    }
    for (label, w) in chain.labels.iter().zip(result.ssd.weights()) {
        println!("{label}  {w}");
    }
    Ok(())
}
