use std::fmt;

use thiserror::Error;

use crate::poly::EpsPoly;
use crate::rational::{self, Rational};

/// Location-tagged failure while reading a text file or argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based; 0 when the input was a single string, not a file.
    pub line: usize,
    /// 1-based character column within the line.
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn at_line(mut self, line: usize, offset: usize) -> Self {
        self.line = line;
        self.column += offset;
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
        } else {
            write!(f, "column {}: {}", self.column, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

fn states(list: &[usize]) -> String {
    let shown: Vec<String> = list.iter().map(|s| (s + 1).to_string()).collect();
    format!("{{{}}}", shown.join(","))
}

/// Errors raised by the library. State indices in messages are 1-based.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),

    #[error("polynomial {poly} has a nonzero constant term and is not divisible by e")]
    NotDivisible { poly: EpsPoly },

    #[error("matrix must be square with {expected} entries, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("not a Markov matrix: {reason}")]
    NotMarkov { reason: String },

    #[error("not a distribution: {reason}")]
    NotDistribution { reason: String },

    #[error("state {} is out of range for {n} states", .state + 1)]
    StateOutOfRange { state: usize, n: usize },

    #[error("scale factor for state {} must be positive", .index + 1)]
    NonPositiveScale { index: usize },

    #[error("scale factor for state {} exceeds 1/(1 - M_ii)", .index + 1)]
    ScaleOutOfRange { index: usize },

    #[error("the eliminated set contains the whole closed class {}", states(.class))]
    ClosedClassEliminated { class: Vec<usize> },

    #[error("I - M restricted to the eliminated states is singular")]
    SingularBlock,

    #[error("matrix is not regular: it has {closed_classes} closed classes")]
    NotRegular { closed_classes: usize },

    #[error("vector is not in the kernel of M - I for the quotient")]
    NotEigenvector,

    #[error("column {} sums to {sum}, not 1", .column + 1)]
    ColumnSumNotOne { column: usize, sum: EpsPoly },

    #[error("entry ({}, {}) = {entry} is negative for small e > 0", .row + 1, .column + 1)]
    NegativeLeadingCoefficient {
        row: usize,
        column: usize,
        entry: EpsPoly,
    },

    #[error("process is not regular for e > 0; closed classes: {}", .classes.iter().map(|c| states(c)).collect::<Vec<_>>().join(" "))]
    NotRegularForPositiveEps { classes: Vec<Vec<usize>> },

    #[error("the constant part still has a non-trivial closed class")]
    NontrivialClass,

    #[error("the collapse set is empty")]
    EmptyCollapseSet,

    #[error("admissibility lost: entry ({}, {}) = {entry} is negative for small e > 0", .row + 1, .column + 1)]
    AdmissibilityLost {
        row: usize,
        column: usize,
        entry: EpsPoly,
    },

    #[error("no convergence within {limit} iterations; input is not a regular perturbed process")]
    IterationLimitExceeded { limit: usize },

    #[error("accumulated limit vector vanished; the leading-order terms do not determine the distribution")]
    DegenerateLimit,

    #[error("entry ({}, {}) evaluates to {} at e = {}; e is too large", .row + 1, .column + 1, rational::render(.value), rational::render(.eps))]
    NotMarkovAtEps {
        row: usize,
        column: usize,
        value: Rational,
        eps: Rational,
    },

    #[error("e must be positive")]
    NonPositiveEps,

    #[error("sample size {s} exceeds memory {m}")]
    SampleTooLarge { s: usize, m: usize },

    #[error("invalid adaptive-play configuration: {reason}")]
    InvalidConfig { reason: String },

    #[error("invalid game: {reason}")]
    InvalidGame { reason: String },

    #[error("chain would have {states} states, over the budget of {budget}")]
    StateBudgetExceeded { states: u128, budget: usize },
}

impl Error {
    /// Process exit code: 2 for parse errors, 4 for internal invariant
    /// breaches, 3 for every other precondition violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::AdmissibilityLost { .. } | Error::DegenerateLimit => 4,
            _ => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
