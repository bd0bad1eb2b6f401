//! A hand-written perturbed process: validation, classes at `e = 0` and
//! `e > 0`, and the limit distribution.
//!
//! `cargo run --example custom_chain`

use stochstab::format::parse_poly_matrix;
use stochstab::{ssd, PerturbedMatrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // a ring where leaving state 3 costs two mistakes and every other exit costs one
    let m = PerturbedMatrix::validated(parse_poly_matrix(
        "1 - e, 0, e^2, e
         e, 1 - 2e, 0, 0
         0, 2e, 1 - e^2, 0
         0, 0, 0, 1 - e",
    )?)?;
    println!("M(e) =\n{}", m.matrix());
    for c in m.constant_part().communicating_classes().classes() {
        let states: Vec<usize> = c.states.iter().map(|s| s + 1).collect();
        println!("e = 0: {:?} {}", states, if c.is_closed() { "closed" } else { "transient" });
    }
    for s in 0..m.n() {
        println!("state {} out-resistance {}", s + 1, m.out_resistance(s));
    }
    let result = ssd(&m)?;
    println!("ssd: {:?}", result.ssd.weights().iter().map(|x| x.to_string()).collect::<Vec<_>>());
    println!("stochastically stable: {:?}", result.sss.iter().map(|s| s + 1).collect::<Vec<_>>());
    Ok(())
}
