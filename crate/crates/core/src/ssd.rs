//! Stochastically stable distributions by repeated collapsing and scaling.
//!
//! Each iteration looks at the constant part `M0` of the current process.
//! If `M0` has a single closed class the loop stops. Otherwise, when `M0`
//! has a non-trivial closed class, every such class is collapsed onto a
//! representative with the normalized quotient of `M0` and the accumulator
//! is multiplied by `i0*`. When all closed classes are single absorbing
//! states, those are sped up by `1/e` and the columns of the transient
//! states are zeroed in the accumulator.
//!
//! Transient classes are never collapsed. Entering a transient class at
//! different states can lead to different first-order exit probabilities,
//! which collapsing onto one representative would merge. The
//! final stable distribution of `M0`, pushed through the accumulator and
//! renormalized, is the limit distribution.

use num::Zero;

use crate::classes::Representative;
use crate::error::{Error, Result};
use crate::markov::Distribution;
use crate::matrix::RatMatrix;
use crate::perturbed::PerturbedMatrix;
use crate::rational::Rational;

#[derive(Clone, Debug, Default)]
pub struct SsdOptions {
    pub representative: Representative,
    /// Overrides the default budget of `n (R + 1) + 1` iterations.
    pub iteration_limit: Option<usize>,
}

/// One iteration of the solver. State indices refer to the original process.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Collapse {
        /// Non-trivial closed classes of `M0`, each led by its representative.
        classes: Vec<Vec<usize>>,
        states_after: usize,
    },
    TransientScale {
        transient: Vec<usize>,
        sped_up: Vec<usize>,
        alpha: Rational,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub iteration: usize,
    pub states_before: usize,
    pub step: Step,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SsdResult {
    pub ssd: Distribution,
    /// Support of `ssd`, ascending.
    pub sss: Vec<usize>,
    /// Composite of the limiting inclusions, `n x k` for the final `k`-state process.
    pub accumulator: RatMatrix,
    pub trace: Vec<TraceEntry>,
}

impl SsdResult {
    /// Original states that were transient when some scaling step ran.
    pub fn transient_in_trace(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .trace
            .iter()
            .filter_map(|t| match &t.step {
                Step::TransientScale { transient, .. } => Some(transient.iter().copied()),
                _ => None,
            })
            .flatten()
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Step-by-step driver, exposed so intermediate processes can be inspected.
#[derive(Clone, Debug)]
pub struct SsdSolver {
    process: PerturbedMatrix,
    accumulator: RatMatrix,
    origin: Vec<usize>,
    options: SsdOptions,
    limit: usize,
    trace: Vec<TraceEntry>,
}

impl SsdSolver {
    pub fn new(m: &PerturbedMatrix, options: SsdOptions) -> Result<Self> {
        m.validate()?;
        let n = m.n();
        // Entry degrees never grow, so they bound every resistance seen later.
        let r = m.max_degree().max(m.max_resistance());
        let limit = options.iteration_limit.unwrap_or(n * (r + 1) + 1);
        Ok(SsdSolver {
            process: m.clone(),
            accumulator: RatMatrix::identity(n),
            origin: (0..n).collect(),
            options,
            limit,
            trace: Vec::new(),
        })
    }

    pub fn process(&self) -> &PerturbedMatrix {
        &self.process
    }

    pub fn accumulator(&self) -> &RatMatrix {
        &self.accumulator
    }

    /// Original index of each current state.
    pub fn origin(&self) -> &[usize] {
        &self.origin
    }

    pub fn trace(&self) -> &[TraceEntry] {
        &self.trace
    }

    pub fn iteration_limit(&self) -> usize {
        self.limit
    }

    pub fn is_done(&self) -> bool {
        self.process.constant_part().is_regular()
    }

    /// Runs one iteration; `None` once the constant part has one closed class.
    pub fn step(&mut self) -> Result<Option<&TraceEntry>> {
        let m0 = self.process.constant_part();
        let classes = m0.communicating_classes();
        if classes.is_regular() {
            return Ok(None);
        }
        if self.trace.len() >= self.limit {
            return Err(Error::IterationLimitExceeded { limit: self.limit });
        }
        let states_before = self.process.n();
        let collapse = classes.all_but_closed_class_representatives(self.options.representative);
        let step = if collapse.is_empty() {
            let transient = classes.transient_states();
            let scaled = self.process.transient_scale(&transient)?;
            for &t in &transient {
                self.accumulator.zero_column(t);
            }
            let step = Step::TransientScale {
                transient: transient.iter().map(|&t| self.origin[t]).collect(),
                sped_up: (0..states_before)
                    .filter(|&s| scaled.i0[s])
                    .map(|s| self.origin[s])
                    .collect(),
                alpha: scaled.alpha,
            };
            self.process = scaled.matrix;
            step
        } else {
            let reduced = self.process.quotient_step(&collapse)?;
            let rep = self.options.representative;
            let collapsed = classes
                .classes()
                .iter()
                .filter(|c| c.is_closed() && !c.is_trivial())
                .map(|c| {
                    let lead = rep.pick(c);
                    std::iter::once(lead)
                        .chain(c.states.iter().copied().filter(|&s| s != lead))
                        .map(|s| self.origin[s])
                        .collect()
                })
                .collect();
            self.accumulator = self.accumulator.mul(&reduced.i_star);
            self.origin = reduced.kept.iter().map(|&s| self.origin[s]).collect();
            self.process = reduced.matrix;
            Step::Collapse {
                classes: collapsed,
                states_after: self.process.n(),
            }
        };
        self.trace.push(TraceEntry {
            iteration: self.trace.len() + 1,
            states_before,
            step,
        });
        Ok(self.trace.last())
    }

    pub fn run(&mut self) -> Result<()> {
        while self.step()?.is_some() {}
        Ok(())
    }

    pub fn finish(mut self) -> Result<SsdResult> {
        self.run()?;
        let final_stable = self
            .process
            .constant_part()
            .stable_distribution_with(self.options.representative)?;
        let raw = self.accumulator.mul_vec(final_stable.weights());
        if raw.iter().all(Zero::is_zero) {
            return Err(Error::DegenerateLimit);
        }
        let ssd = Distribution::normalize(raw)?;
        Ok(SsdResult {
            sss: ssd.support(),
            ssd,
            accumulator: self.accumulator,
            trace: self.trace,
        })
    }
}

/// Stochastically stable distribution of a regular perturbed process.
pub fn ssd(m: &PerturbedMatrix) -> Result<SsdResult> {
    ssd_with(m, SsdOptions::default())
}

pub fn ssd_with(m: &PerturbedMatrix, options: SsdOptions) -> Result<SsdResult> {
    SsdSolver::new(m, options)?.finish()
}
