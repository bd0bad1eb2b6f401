//! Perturbed Markov processes: column-stochastic matrices whose entries are
//! polynomials in the perturbation rate `e`.

use std::cmp::Ordering;

use num::{One, Signed, Zero};

use crate::classes::{ClassPartition, Representative};
use crate::error::{Error, Result};
use crate::markov::{Distribution, MarkovMatrix};
use crate::matrix::{PolyMatrix, RatMatrix};
use crate::poly::{EpsPoly, Resistance};
use crate::rational::{self, Rational};

/// `n x n` matrix of polynomials with columns summing to the constant 1 and
/// every nonzero entry positive for all small `e > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbedMatrix {
    m: PolyMatrix,
}

/// Output of [`PerturbedMatrix::transient_scale`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransientScale {
    pub matrix: PerturbedMatrix,
    /// The limiting inclusion `diag(chi_N)` as a 0/1 vector.
    pub i0: Vec<bool>,
    /// Safety factor applied on top of the `1/e` speed-up of non-transient columns.
    pub alpha: Rational,
}

/// Output of [`PerturbedMatrix::quotient_step`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientStep {
    pub matrix: PerturbedMatrix,
    /// Normalized inclusion of the constant part, `n x k`.
    pub i_star: RatMatrix,
    pub kept: Vec<usize>,
}

impl PerturbedMatrix {
    /// Checks unit column sums and admissibility. Regularity is checked by [`validate`](Self::validate).
    pub fn new(m: PolyMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Shape {
                expected: m.rows() * m.rows(),
                got: m.rows() * m.cols(),
            });
        }
        for (column, sum) in m.column_sums().into_iter().enumerate() {
            if !sum.is_one() {
                return Err(Error::ColumnSumNotOne { column, sum });
            }
        }
        if let Some(((row, column), entry)) = m
            .entries()
            .find(|(_, p)| p.sign_near_zero() == Ordering::Less)
        {
            return Err(Error::NegativeLeadingCoefficient {
                row,
                column,
                entry: entry.clone(),
            });
        }
        Ok(PerturbedMatrix { m })
    }

    /// All three invariants, including a single closed class for symbolic `e > 0`.
    pub fn validated(m: PolyMatrix) -> Result<Self> {
        let p = PerturbedMatrix::new(m)?;
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        PerturbedMatrix::new(self.m.clone())?;
        let classes = self.symbolic_classes();
        if !classes.is_regular() {
            return Err(Error::NotRegularForPositiveEps {
                classes: classes.closed_classes().map(|c| c.states.clone()).collect(),
            });
        }
        Ok(())
    }

    pub fn from_markov(m: &MarkovMatrix) -> Self {
        PerturbedMatrix {
            m: m.matrix().to_poly(),
        }
    }

    pub fn n(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.m
    }

    pub fn get(&self, to: usize, from: usize) -> &EpsPoly {
        &self.m[(to, from)]
    }

    pub fn is_constant(&self) -> bool {
        self.m.entries().all(|(_, p)| p.is_constant())
    }

    pub fn max_degree(&self) -> usize {
        self.m.max_degree()
    }

    /// Largest finite resistance among the entries.
    pub fn max_resistance(&self) -> usize {
        self.m
            .entries()
            .filter_map(|(_, p)| p.resistance().finite())
            .max()
            .unwrap_or(0)
    }

    pub fn constant_part(&self) -> MarkovMatrix {
        MarkovMatrix::new(self.m.constant_terms())
            .expect("constant layer of an admissible process is Markov")
    }

    /// Classes of the digraph with an edge wherever the entry is a nonzero polynomial.
    pub fn symbolic_classes(&self) -> ClassPartition {
        let n = self.n();
        let succ: Vec<Vec<usize>> = (0..n)
            .map(|j| (0..n).filter(|&i| i != j && !self.m[(i, j)].is_zero()).collect())
            .collect();
        ClassPartition::from_successors(&succ)
    }

    /// Least resistance of a transition out of `state`.
    pub fn out_resistance(&self, state: usize) -> Resistance {
        (0..self.n())
            .filter(|&i| i != state)
            .map(|i| self.m[(i, state)].resistance())
            .min()
            .unwrap_or(Resistance::Infinite)
    }

    /// Speeds up every non-transient state by `alpha / e`: returns
    /// `(M - I) D + I` with `D_jj = 1` on `transient` and `alpha / e` elsewhere.
    ///
    /// Every closed class of the constant part must be trivial, so each
    /// non-transient state is absorbing at `e = 0` and its displacement column
    /// is divisible by `e`. `alpha` is `1 / (2 c)` where `c` is the largest
    /// first-order outflow coefficient among those columns (or 1 when
    /// `c <= 1/2`), which keeps the new diagonal at least `1/2` at `e = 0`.
    pub fn transient_scale(&self, transient: &[usize]) -> Result<TransientScale> {
        let n = self.n();
        let mut in_t = vec![false; n];
        for &s in transient {
            if s >= n {
                return Err(Error::StateOutOfRange { state: s, n });
            }
            in_t[s] = true;
        }
        if self.constant_part().communicating_classes().closed_classes().any(|c| !c.is_trivial()) {
            return Err(Error::NontrivialClass);
        }
        let mut c_max = Rational::zero();
        for j in (0..n).filter(|&j| !in_t[j]) {
            let outflow = &EpsPoly::one() - &self.m[(j, j)];
            if !outflow.constant_term().is_zero() {
                return Err(Error::NotDivisible { poly: outflow });
            }
            c_max = c_max.max(outflow.coeff(1));
        }
        let alpha = if c_max <= rational::rat(1, 2) {
            Rational::one()
        } else {
            (Rational::from_integer(2.into()) * c_max).recip()
        };

        let mut out = self.m.clone();
        for j in (0..n).filter(|&j| !in_t[j]) {
            for i in 0..n {
                let mut displacement = self.m[(i, j)].clone();
                if i == j {
                    displacement = &displacement - &EpsPoly::one();
                }
                let scaled = displacement.divide_by_eps()?.scale(&alpha);
                out[(i, j)] = if i == j { &scaled + &EpsPoly::one() } else { scaled };
            }
        }
        let matrix = PerturbedMatrix::new(out).map_err(lost_admissibility)?;
        Ok(TransientScale {
            matrix,
            i0: in_t.iter().map(|t| !t).collect(),
            alpha,
        })
    }

    /// Collapses the states in `collapse` using the normalized quotient of the
    /// constant part: returns `p0 (M_e - I) i0* + I` and `i0*`.
    pub fn quotient_step(&self, collapse: &[usize]) -> Result<QuotientStep> {
        if collapse.is_empty() {
            return Err(Error::EmptyCollapseSet);
        }
        let q = self.constant_part().normalized_quotient(collapse)?;
        let n = self.n();
        let mut displacement = self.m.clone();
        for j in 0..n {
            displacement[(j, j)] = &displacement[(j, j)] - &EpsPoly::one();
        }
        let mut reduced = PolyMatrix::rat_mul(&q.p, &displacement.mul_rat(&q.i_star));
        for j in 0..reduced.rows() {
            reduced[(j, j)] = &reduced[(j, j)] + &EpsPoly::one();
        }
        let matrix = PerturbedMatrix::new(reduced).map_err(lost_admissibility)?;
        Ok(QuotientStep {
            matrix,
            i_star: q.i_star,
            kept: q.kept,
        })
    }

    /// States to collapse: every state of a closed class of the constant part
    /// except one representative per class.
    pub fn collapse_set(&self, choice: Representative) -> Vec<usize> {
        self.constant_part()
            .communicating_classes()
            .all_but_closed_class_representatives(choice)
    }

    pub fn eval_at(&self, eps: &Rational) -> Result<MarkovMatrix> {
        if !eps.is_positive() {
            return Err(Error::NonPositiveEps);
        }
        let m = self.m.eval_at(eps);
        if let Some(((row, column), value)) = m.entries().find(|(_, v)| v.is_negative()) {
            return Err(Error::NotMarkovAtEps {
                row,
                column,
                value: value.clone(),
                eps: eps.clone(),
            });
        }
        MarkovMatrix::new(m)
    }

    /// Exact stable distribution of the process at a fixed rational `e`.
    pub fn exact_stable_at(&self, eps: &Rational) -> Result<Distribution> {
        self.eval_at(eps)?.stable_distribution()
    }
}

fn lost_admissibility(e: Error) -> Error {
    match e {
        Error::NegativeLeadingCoefficient { row, column, entry } => {
            Error::AdmissibilityLost { row, column, entry }
        }
        other => other,
    }
}
