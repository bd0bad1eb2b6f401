//! Exact stable distributions against a double-precision solve as `e` shrinks.
//!
//! `cargo run --example instability`

use stochstab::format::MatrixFile;
use stochstab::rational::to_f64;
use stochstab::sweep::sweep;
use stochstab::{ssd, PerturbedMatrix, Rational};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let file = MatrixFile::parse(include_str!("../fixtures/two_clusters.txt"))?;
    let m = PerturbedMatrix::validated(file.matrix)?;
    let limit = ssd(&m)?.ssd;
    println!("limit: {:?}", limit.weights().iter().map(|x| x.to_string()).collect::<Vec<_>>());

    let ratio = Rational::new(1.into(), 10.into());
    println!("\n{:>8}  {:>12}  {:>12}", "e", "exact L1", "float L1");
    for point in sweep(&m, &ratio, &ratio, 7, true)? {
        let exact_gap = to_f64(&point.exact.l1_distance(&limit));
        let float_gap = point.float_error().map_or("singular".into(), |g| format!("{g:.3e}"));
        println!("{:>8.0e}  {:>12.3e}  {:>12}", to_f64(&point.eps), exact_gap, float_gap);
    }
    Ok(())
}
