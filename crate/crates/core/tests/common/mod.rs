//! Strategies and independent oracles shared by the integration tests and the
//! acceptance suite.
#![allow(dead_code)]

use num::{BigInt, BigRational, One, Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use stochstab::matrix::RatMatrix;
use stochstab::{EpsPoly, MarkovMatrix, PerturbedMatrix, PolyMatrix};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).expect("fixture exists")
}

#[derive(Clone, Copy, Debug)]
pub enum Shape {
    Any,
    /// Every state reaches a hub state in one step.
    Regular,
    /// Contains the cycle 0 -> 1 -> ... -> n-1 -> 0.
    Irreducible,
}

/// Column-stochastic matrix built from small integer weights.
pub fn markov(max_n: usize, shape: Shape) -> impl Strategy<Value = MarkovMatrix> {
    (1..=max_n)
        .prop_flat_map(move |n| {
            (
                Just(n),
                proptest::collection::vec(prop_oneof![2 => Just(0u32), 3 => 1u32..=4], n * n),
                0..n,
            )
        })
        .prop_map(move |(n, mut w, hub)| {
            for j in 0..n {
                match shape {
                    Shape::Any => {}
                    Shape::Regular => w[hub * n + j] += 1,
                    Shape::Irreducible => w[((j + 1) % n) * n + j] += 1,
                }
                if (0..n).all(|i| w[i * n + j] == 0) {
                    w[j * n + j] = 1;
                }
            }
            let sums: Vec<u32> = (0..n).map(|j| (0..n).map(|i| w[i * n + j]).sum()).collect();
            let m = RatMatrix::from_fn(n, n, |i, j| q(w[i * n + j] as i64, sums[j] as i64));
            MarkovMatrix::new(m).expect("columns are normalized")
        })
}

/// A matrix with a random eliminable set: no closed class is removed entirely.
pub fn with_eliminable(max_n: usize, shape: Shape) -> impl Strategy<Value = (MarkovMatrix, Vec<usize>)> {
    (markov(max_n, shape), proptest::collection::vec(any::<bool>(), max_n))
        .prop_map(|(m, mask)| {
            let n = m.n();
            let mut keep = vec![false; n];
            for (s, k) in keep.iter_mut().enumerate() {
                *k = !mask[s];
            }
            for c in m.communicating_classes().closed_classes() {
                if c.states.iter().all(|&s| !keep[s]) {
                    keep[c.states[0]] = true;
                }
            }
            let elim = (0..n).filter(|&s| !keep[s]).collect();
            (m, elim)
        })
}

/// Eliminable set split in two stages: first `first`, then the rest.
pub fn with_nested(max_n: usize) -> impl Strategy<Value = (MarkovMatrix, Vec<usize>, Vec<usize>)> {
    (with_eliminable(max_n, Shape::Any), proptest::collection::vec(any::<bool>(), max_n)).prop_map(
        |((m, elim), mask)| {
            let first: Vec<usize> = elim.iter().copied().filter(|&s| mask[s]).collect();
            (m, elim, first)
        },
    )
}

/// Perturbed process that is admissible and regular for e > 0. Off-diagonal
/// entries are `c e^r` with small `c`, so diagonals keep a positive constant.
pub fn perturbed(max_n: usize) -> impl Strategy<Value = PerturbedMatrix> {
    (2..=max_n)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec((prop_oneof![1 => Just(0u32), 1 => 1u32..=3], 0usize..=3), n * n),
                0..n,
            )
        })
        .prop_map(|(n, cells, hub)| build_perturbed(n, &cells, hub))
}

/// Like [`perturbed`] but the constant part only moves forward (`j -> i` with
/// `i > j`), so every class of the constant part is a single state.
pub fn perturbed_forward(max_n: usize) -> impl Strategy<Value = PerturbedMatrix> {
    (2..=max_n)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec((prop_oneof![1 => Just(0u32), 1 => 1u32..=3], 0usize..=3), n * n),
                0..n,
            )
        })
        .prop_map(|(n, mut cells, hub)| {
            for i in 0..n {
                for j in 0..n {
                    if i < j && cells[i * n + j].1 == 0 {
                        cells[i * n + j].1 = 1;
                    }
                }
            }
            build_perturbed(n, &cells, hub)
        })
}

fn build_perturbed(n: usize, cells: &[(u32, usize)], hub: usize) -> PerturbedMatrix {
    let unit = q(1, 4 * n as i64);
    let mut m = PolyMatrix::zeros(n, n);
    for j in 0..n {
        for i in (0..n).filter(|&i| i != j) {
            let (c, r) = cells[i * n + j];
            let c = if c == 0 && i == hub { 1 } else { c };
            let r = if cells[i * n + j].0 == 0 && i == hub { 3 } else { r };
            if c > 0 {
                m[(i, j)] = EpsPoly::monomial(&unit * BigInt::from(c), r);
            }
        }
        let out = (0..n)
            .filter(|&i| i != j)
            .fold(EpsPoly::zero(), |acc, i| &acc + &m[(i, j)]);
        m[(j, j)] = &EpsPoly::one() - &out;
    }
    PerturbedMatrix::validated(m).expect("generator yields admissible regular processes")
}

/// Stable distribution of a regular chain by plain Gaussian elimination on
/// `(M - I) v = 0, sum v = 1`, written independently of the library solver.
pub fn oracle_stable(m: &RatMatrix) -> Vec<Q> {
    let n = m.rows();
    let mut rows: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            let mut row: Vec<Q> = (0..n)
                .map(|j| {
                    let delta = if i == j { Q::one() } else { Q::zero() };
                    m[(i, j)].clone() - delta
                })
                .collect();
            row.push(Q::zero());
            row
        })
        .collect();
    rows.push(vec![Q::one(); n + 1]);
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows.len()).find(|&k| !rows[k][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for k in 0..rows.len() {
            if k != r && !rows[k][c].is_zero() {
                let f = rows[k][c].clone();
                for t in 0..=n {
                    let delta = &f * &rows[r][t];
                    rows[k][t] = &rows[k][t] - delta;
                }
            }
        }
        r += 1;
    }
    assert_eq!(r, n, "chain is not regular");
    (0..n).map(|i| rows[i][n].clone()).collect()
}

pub fn l1(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

pub fn ensure(cond: bool, what: &str) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(what.to_string()))
    }
}

pub fn identity(n: usize) -> RatMatrix {
    RatMatrix::identity(n)
}

pub fn is_column_stochastic(m: &RatMatrix) -> bool {
    (0..m.cols()).all(|j| {
        let col: Vec<&Q> = (0..m.rows()).map(|i| &m[(i, j)]).collect();
        col.iter().all(|x| !x.is_negative()) && col.into_iter().sum::<Q>() == Q::one()
    })
}

// Quotient properties, used by both the property tests and the acceptance suite.

pub fn quotient_identity(m: &MarkovMatrix, elim: &[usize]) -> Result<(), TestCaseError> {
    let t = m.quotient(elim).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let back = t.p.mul(&m.displacement()).mul(&t.i).add(&identity(t.kept.len()));
    ensure(&back == t.m_hat.matrix(), "p (M - I) i + I differs from the quotient")
}

pub fn quotients_are_markov(m: &MarkovMatrix, elim: &[usize]) -> Result<(), TestCaseError> {
    let t = m.quotient(elim).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let n = m.normalized_quotient(elim).map_err(|e| TestCaseError::fail(e.to_string()))?;
    ensure(is_column_stochastic(t.m_hat.matrix()), "quotient is not Markov")?;
    ensure(is_column_stochastic(n.m_hat.matrix()), "normalized quotient is not Markov")?;
    ensure(is_column_stochastic(&n.i_star), "columns of i* do not sum to 1")
}

pub fn naturality(m: &MarkovMatrix, elim: &[usize], first: &[usize]) -> Result<(), TestCaseError> {
    let fail = |e: stochstab::Error| TestCaseError::fail(e.to_string());
    let whole = m.quotient(elim).map_err(fail)?;
    let one = m.quotient(first).map_err(fail)?;
    let rest: Vec<usize> = elim
        .iter()
        .filter(|s| !first.contains(s))
        .map(|s| one.kept.iter().position(|k| k == s).expect("kept"))
        .collect();
    let two = one.m_hat.quotient(&rest).map_err(fail)?;
    ensure(two.p.mul(&one.p) == whole.p, "p != p2 p1")?;
    ensure(one.i.mul(&two.i) == whole.i, "i != i1 i2")?;
    ensure(two.m_hat == whole.m_hat, "staged quotient differs")
}

pub fn inclusion_maps_stable(m: &MarkovMatrix, elim: &[usize]) -> Result<(), TestCaseError> {
    let fail = |e: stochstab::Error| TestCaseError::fail(e.to_string());
    let t = m.normalized_quotient(elim).map_err(fail)?;
    let small = t.m_hat.stable_distribution().map_err(fail)?;
    let mapped = t.i_star.mul_vec(small.weights());
    let full = m.stable_distribution().map_err(fail)?;
    ensure(mapped == full.weights(), "i* stab(quotient) != stab(M)")
}

pub fn stable_matches_oracle(m: &MarkovMatrix) -> Result<(), TestCaseError> {
    let v = m.stable_distribution().map_err(|e| TestCaseError::fail(e.to_string()))?;
    ensure(v.weights() == oracle_stable(m.matrix()).as_slice(), "stable distribution differs from oracle")
}

pub fn irreducible_is_positive(m: &MarkovMatrix) -> Result<(), TestCaseError> {
    let v = m.stable_distribution().map_err(|e| TestCaseError::fail(e.to_string()))?;
    ensure(v.weights().iter().all(|x| x.is_positive()), "irreducible chain has a zero weight")
}
