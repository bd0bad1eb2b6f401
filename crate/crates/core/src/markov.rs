//! Column-stochastic matrices over the rationals and the quotient construction.
//!
//! Entry `(i, j)` is the probability of moving from state `j` to state `i`,
//! so every column sums to one. Eliminating a set of states `P` factors
//! `M - I` through a projection `p` and an inclusion `i` with
//! `p (M - I) i + I = M_hat`; `i` carries eigenvectors of `M_hat` for
//! eigenvalue one to those of `M`.

use num::{One, Signed, Zero};

use crate::classes::{ClassPartition, Representative};
use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::RatMatrix;
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovMatrix {
    m: RatMatrix,
}

impl MarkovMatrix {
    /// Checks nonnegativity and unit column sums.
    pub fn new(m: RatMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotMarkov {
                reason: format!("matrix is {}x{}", m.rows(), m.cols()),
            });
        }
        if let Some(((r, c), v)) = m.entries().find(|(_, v)| v.is_negative()) {
            return Err(Error::NotMarkov {
                reason: format!("entry ({}, {}) = {} is negative", r + 1, c + 1, rational::render(v)),
            });
        }
        for (c, sum) in m.column_sums().iter().enumerate() {
            if !sum.is_one() {
                return Err(Error::NotMarkov {
                    reason: format!("column {} sums to {}", c + 1, rational::render(sum)),
                });
            }
        }
        Ok(MarkovMatrix { m })
    }

    pub fn identity(n: usize) -> Self {
        MarkovMatrix {
            m: RatMatrix::identity(n),
        }
    }

    pub fn n(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> RatMatrix {
        self.m
    }

    pub fn get(&self, to: usize, from: usize) -> &Rational {
        &self.m[(to, from)]
    }

    /// `M - I`
    pub fn displacement(&self) -> RatMatrix {
        self.m.sub(&RatMatrix::identity(self.n()))
    }

    pub fn successors(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        (0..n)
            .map(|j| (0..n).filter(|&i| i != j && !self.m[(i, j)].is_zero()).collect())
            .collect()
    }

    pub fn communicating_classes(&self) -> ClassPartition {
        ClassPartition::from_successors(&self.successors())
    }

    pub fn is_regular(&self) -> bool {
        self.communicating_classes().is_regular()
    }

    pub fn is_irreducible(&self) -> bool {
        self.communicating_classes().is_irreducible()
    }

    /// `(M - I) D + I` for a positive diagonal `D` with `D_ii <= 1 / (1 - M_ii)`.
    pub fn diagonal_scale(&self, d: &[Rational]) -> Result<MarkovMatrix> {
        let n = self.n();
        assert_eq!(d.len(), n, "one scale factor per state");
        for (i, di) in d.iter().enumerate() {
            if !di.is_positive() {
                return Err(Error::NonPositiveScale { index: i });
            }
            if (Rational::one() - &self.m[(i, i)]) * di > Rational::one() {
                return Err(Error::ScaleOutOfRange { index: i });
            }
        }
        let scaled = self.displacement().scale_columns(d);
        MarkovMatrix::new(scaled.add(&RatMatrix::identity(n)))
    }

    pub fn is_stable(&self, v: &[Rational]) -> bool {
        self.m.mul_vec(v).as_slice() == v
    }

    /// Eliminates the states in `eliminate`.
    pub fn quotient(&self, eliminate: &[usize]) -> Result<QuotientTriple> {
        let n = self.n();
        let mut in_p = vec![false; n];
        for &s in eliminate {
            if s >= n {
                return Err(Error::StateOutOfRange { state: s, n });
            }
            in_p[s] = true;
        }
        let classes = self.communicating_classes();
        if let Some(c) = classes
            .closed_classes()
            .find(|c| c.states.iter().all(|&s| in_p[s]))
        {
            return Err(Error::ClosedClassEliminated {
                class: c.states.clone(),
            });
        }
        let kept: Vec<usize> = (0..n).filter(|&s| !in_p[s]).collect();
        let elim: Vec<usize> = (0..n).filter(|&s| in_p[s]).collect();
        let (k, q) = (kept.len(), elim.len());

        // I - M restricted to the eliminated states.
        let block = RatMatrix::identity(q).sub(&self.m.select(&elim, &elim));
        let into_elim = self.m.select(&elim, &kept);
        let out_of_elim = self.m.select(&kept, &elim);
        // (I - Mbar)^-1 Ntilde and Nbar (I - Mbar)^-1
        let lower_i = linalg::solve(&block, &into_elim)?;
        let right_p = linalg::solve(&block.transpose(), &out_of_elim.transpose())?.transpose();

        let mut p = RatMatrix::zeros(k, n);
        let mut i = RatMatrix::zeros(n, k);
        for (a, &s) in kept.iter().enumerate() {
            p[(a, s)] = Rational::one();
            i[(s, a)] = Rational::one();
        }
        for (c, &s) in elim.iter().enumerate() {
            for a in 0..k {
                p[(a, s)] = right_p[(a, c)].clone();
                i[(s, a)] = lower_i[(c, a)].clone();
            }
        }
        let m_hat = self.m.select(&kept, &kept).add(&out_of_elim.mul(&lower_i));
        let m_hat = MarkovMatrix::new(m_hat)?;
        let d = i.column_sums();
        let inv: Vec<Rational> = d.iter().map(|x| x.recip()).collect();
        let i_star = i.scale_columns(&inv);
        Ok(QuotientTriple {
            m_hat,
            p,
            i,
            d,
            i_star,
            kept,
            normalized: false,
        })
    }

    /// Quotient rescaled by the inverse column sums of `i`, so that `i_star`
    /// maps stable distributions to stable distributions exactly.
    pub fn normalized_quotient(&self, eliminate: &[usize]) -> Result<QuotientTriple> {
        let mut q = self.quotient(eliminate)?;
        let inv: Vec<Rational> = q.d.iter().map(|x| x.recip()).collect();
        q.m_hat = q.m_hat.diagonal_scale(&inv)?;
        q.normalized = true;
        Ok(q)
    }

    pub fn stable_distribution(&self) -> Result<Distribution> {
        self.stable_distribution_with(Representative::Lowest)
    }

    /// The unique stable distribution of a regular matrix.
    ///
    /// Collapses the closed class onto one representative with a normalized
    /// quotient; the single column of `i_star` is the answer. Transient states
    /// get weight zero, so only the closed class takes part in the elimination.
    pub fn stable_distribution_with(&self, choice: Representative) -> Result<Distribution> {
        let classes = self.communicating_classes();
        if !classes.is_regular() {
            return Err(Error::NotRegular {
                closed_classes: classes.num_closed(),
            });
        }
        let closed = classes.closed_classes().next().expect("regular").clone();
        let rep = choice.pick(&closed);
        let restricted = MarkovMatrix::new(self.m.select(&closed.states, &closed.states))?;
        let eliminate: Vec<usize> = (0..closed.states.len())
            .filter(|&k| closed.states[k] != rep)
            .collect();
        let q = restricted.normalized_quotient(&eliminate)?;
        let mut weights = vec![Rational::zero(); self.n()];
        for (k, &s) in closed.states.iter().enumerate() {
            weights[s] = q.i_star[(k, 0)].clone();
        }
        Distribution::new(weights)
    }
}

/// Result of eliminating a set of states: `(m_hat, p, i)` plus the
/// normalization `d` (column sums of `i`) and `i_star = i d^-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientTriple {
    pub m_hat: MarkovMatrix,
    /// `k x n` projection.
    pub p: RatMatrix,
    /// `n x k` inclusion; the identity on the kept rows.
    pub i: RatMatrix,
    pub d: Vec<Rational>,
    pub i_star: RatMatrix,
    /// The `k` retained states, ascending.
    pub kept: Vec<usize>,
    normalized: bool,
}

impl QuotientTriple {
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Inclusion matching `m_hat`: `i` for a plain quotient, `i_star` for a normalized one.
    pub fn inclusion(&self) -> &RatMatrix {
        if self.normalized {
            &self.i_star
        } else {
            &self.i
        }
    }

    /// Unique extension of an eigenvector of `m_hat` to one of the original matrix.
    pub fn extend(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        assert_eq!(v.len(), self.kept.len(), "vector must live on the kept states");
        if !self.m_hat.is_stable(v) {
            return Err(Error::NotEigenvector);
        }
        Ok(self.inclusion().mul_vec(v))
    }
}

/// Nonnegative weights summing to exactly one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Distribution {
    weights: Vec<Rational>,
}

impl Distribution {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if let Some((k, w)) = weights.iter().enumerate().find(|(_, w)| w.is_negative()) {
            return Err(Error::NotDistribution {
                reason: format!("weight {} is {}", k + 1, rational::render(w)),
            });
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::NotDistribution {
                reason: format!("weights sum to {}", rational::render(&total)),
            });
        }
        Ok(Distribution { weights })
    }

    /// Divides a nonnegative, nonzero vector by its sum.
    pub fn normalize(v: Vec<Rational>) -> Result<Self> {
        let total: Rational = v.iter().sum();
        if total.is_zero() {
            return Err(Error::NotDistribution {
                reason: "vector sums to zero".into(),
            });
        }
        Distribution::new(v.into_iter().map(|x| x / &total).collect())
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn into_weights(self) -> Vec<Rational> {
        self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&k| !self.weights[k].is_zero()).collect()
    }

    pub fn l1_distance(&self, other: &Distribution) -> Rational {
        self.weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| (a - b).abs())
            .sum()
    }
}

impl std::ops::Index<usize> for Distribution {
    type Output = Rational;
    fn index(&self, k: usize) -> &Rational {
        &self.weights[k]
    }
}
