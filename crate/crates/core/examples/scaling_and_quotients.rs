//! Diagonal scaling and normalized quotients of a small Markov chain.
//!
//! `cargo run --example scaling_and_quotients`

use stochstab::format::MatrixFile;
use stochstab::{MarkovMatrix, PerturbedMatrix, Rational};

fn chain(text: &str) -> Result<MarkovMatrix, Box<dyn std::error::Error>> {
    let file = MatrixFile::parse(text)?;
    Ok(PerturbedMatrix::new(file.matrix)?.constant_part())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = chain(include_str!("../fixtures/thirds.txt"))?;
    println!("M =\n{}", m.matrix());
    println!("stable distribution: {:?}", show(m.stable_distribution()?.weights()));

    // scaling column j by d_j keeps the chain Markov and reweights the stable distribution
    let d = [Rational::from_integer(1.into()), Rational::new(3.into(), 2.into()), Rational::from_integer(1.into())];
    let scaled = m.diagonal_scale(&d)?;
    println!("\nM scaled by diag(1, 3/2, 1) =\n{}", scaled.matrix());
    println!("stable distribution: {:?}", show(scaled.stable_distribution()?.weights()));

    let m = chain(include_str!("../fixtures/three_state.txt"))?;
    println!("\nM =\n{}", m.matrix());
    let t = m.normalized_quotient(&[2])?;
    println!("eliminate state 3, keep {:?}", t.kept.iter().map(|k| k + 1).collect::<Vec<_>>());
    println!("normalized quotient =\n{}", t.m_hat.matrix());
    println!("p =\n{}", t.p);
    println!("i* =\n{}", t.i_star);
    let small = t.m_hat.stable_distribution()?;
    let lifted = t.i_star.mul_vec(small.weights());
    println!("stable on the quotient: {:?}", show(small.weights()));
    println!("mapped back by i*:      {:?}", show(&lifted));
    println!("stable on M:            {:?}", show(m.stable_distribution()?.weights()));
    Ok(())
}

fn show(v: &[Rational]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}
