//! Stable distributions along a geometric sequence of perturbation rates.
//!
//! The exact sweep solves each matrix over the rationals. The floating-point
//! sweep solves the same systems in `f64`; it exists to show how rounding
//! misleads the naive "take smaller and smaller e" approach and is never
//! used for results.

use nalgebra::{DMatrix, DVector};

use crate::error::Result;
use crate::markov::Distribution;
use crate::perturbed::PerturbedMatrix;
use crate::rational::{self, Rational};

#[derive(Clone, Debug)]
pub struct SweepPoint {
    pub eps: Rational,
    pub exact: Distribution,
    /// `None` unless a float sweep was requested; inner `None` if the float solve was singular.
    pub float: Option<Option<Vec<f64>>>,
}

impl SweepPoint {
    /// L1 distance between the float and exact solutions, if both exist.
    pub fn float_error(&self) -> Option<f64> {
        let float = self.float.as_ref()?.as_ref()?;
        Some(
            float
                .iter()
                .zip(self.exact.weights())
                .map(|(f, e)| (f - rational::to_f64(e)).abs())
                .sum(),
        )
    }
}

/// `e_k = from * factor^k` for `k = 0..steps`.
pub fn geometric(from: &Rational, factor: &Rational, steps: usize) -> Vec<Rational> {
    std::iter::successors(Some(from.clone()), |e| Some(e * factor))
        .take(steps)
        .collect()
}

pub fn sweep(
    m: &PerturbedMatrix,
    from: &Rational,
    factor: &Rational,
    steps: usize,
    with_float: bool,
) -> Result<Vec<SweepPoint>> {
    geometric(from, factor, steps)
        .into_iter()
        .map(|eps| {
            let exact = m.exact_stable_at(&eps)?;
            let float = with_float.then(|| float_stable_at(m, rational::to_f64(&eps)));
            Ok(SweepPoint { eps, exact, float })
        })
        .collect()
}

/// Double-precision stable distribution: solves `(M - I) v = 0` with the
/// last equation replaced by `sum(v) = 1`, via LU with partial pivoting.
pub fn float_stable_at(m: &PerturbedMatrix, eps: f64) -> Option<Vec<f64>> {
    let n = m.n();
    let mut a = DMatrix::<f64>::from_fn(n, n, |i, j| {
        m.get(i, j).eval_f64(eps) - if i == j { 1.0 } else { 0.0 }
    });
    for j in 0..n {
        a[(n - 1, j)] = 1.0;
    }
    let mut b = DVector::<f64>::zeros(n);
    b[n - 1] = 1.0;
    a.lu().solve(&b).map(|v| v.iter().copied().collect())
}
