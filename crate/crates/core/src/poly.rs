//! Polynomials in the perturbation rate `e` with exact rational coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Signed, Zero};

use crate::error::Error;
use crate::rational::{self, Rational};

/// Order of vanishing of a transition probability as `e -> 0`.
///
/// `Infinite` marks an absent edge and compares greater than every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Resistance {
    Finite(usize),
    Infinite,
}

impl Resistance {
    pub fn finite(self) -> Option<usize> {
        match self {
            Resistance::Finite(r) => Some(r),
            Resistance::Infinite => None,
        }
    }
}

impl fmt::Display for Resistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Resistance::Finite(r) => write!(f, "{r}"),
            Resistance::Infinite => f.write_str("inf"),
        }
    }
}

/// A polynomial `c_0 + c_1 e + ... + c_D e^D`.
///
/// Trailing zero coefficients are always trimmed, so the zero polynomial has
/// no coefficients and structural equality is polynomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct EpsPoly {
    coeffs: Vec<Rational>,
}

impl EpsPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        EpsPoly { coeffs }
    }

    pub fn constant(c: Rational) -> Self {
        EpsPoly::new(vec![c])
    }

    /// `c * e^degree`
    pub fn monomial(c: Rational, degree: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); degree];
        coeffs.push(c);
        EpsPoly::new(coeffs)
    }

    /// The polynomial `e`.
    pub fn eps() -> Self {
        EpsPoly::monomial(Rational::one(), 1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, degree: usize) -> Rational {
        self.coeffs.get(degree).cloned().unwrap_or_else(Rational::zero)
    }

    /// Degree of the polynomial, `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(0)
    }

    pub fn resistance(&self) -> Resistance {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(r) => Resistance::Finite(r),
            None => Resistance::Infinite,
        }
    }

    /// Least nonzero degree and its coefficient; `(Infinite, 0)` for zero.
    pub fn resistance_and_leading(&self) -> (Resistance, Rational) {
        match self.resistance() {
            Resistance::Finite(r) => (Resistance::Finite(r), self.coeffs[r].clone()),
            Resistance::Infinite => (Resistance::Infinite, Rational::zero()),
        }
    }

    pub fn leading(&self) -> Rational {
        self.resistance_and_leading().1
    }

    /// Sign of the polynomial for all sufficiently small `e > 0`.
    pub fn sign_near_zero(&self) -> Ordering {
        self.leading().cmp(&Rational::zero())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return EpsPoly::zero();
        }
        EpsPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Exact quotient by `e`.
    pub fn divide_by_eps(&self) -> Result<Self, Error> {
        match self.coeffs.first() {
            None => Ok(EpsPoly::zero()),
            Some(c) if !c.is_zero() => Err(Error::NotDivisible { poly: self.clone() }),
            Some(_) => Ok(EpsPoly::new(self.coeffs[1..].to_vec())),
        }
    }

    pub fn eval_at(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + rational::to_f64(c))
    }

    fn combine(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        EpsPoly::new(
            (0..len)
                .map(|k| {
                    f(
                        self.coeffs.get(k).unwrap_or(&zero),
                        other.coeffs.get(k).unwrap_or(&zero),
                    )
                })
                .collect(),
        )
    }
}

impl Zero for EpsPoly {
    fn zero() -> Self {
        EpsPoly { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for EpsPoly {
    fn one() -> Self {
        EpsPoly::constant(Rational::one())
    }
}

impl From<Rational> for EpsPoly {
    fn from(c: Rational) -> Self {
        EpsPoly::constant(c)
    }
}

impl<'a> Add<&'a EpsPoly> for &'a EpsPoly {
    type Output = EpsPoly;
    fn add(self, rhs: &EpsPoly) -> EpsPoly {
        self.combine(rhs, |a, b| a + b)
    }
}

impl<'a> Sub<&'a EpsPoly> for &'a EpsPoly {
    type Output = EpsPoly;
    fn sub(self, rhs: &EpsPoly) -> EpsPoly {
        self.combine(rhs, |a, b| a - b)
    }
}

impl<'a> Mul<&'a EpsPoly> for &'a EpsPoly {
    type Output = EpsPoly;
    fn mul(self, rhs: &EpsPoly) -> EpsPoly {
        if self.is_zero() || rhs.is_zero() {
            return EpsPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        EpsPoly::new(out)
    }
}

impl Neg for &EpsPoly {
    type Output = EpsPoly;
    fn neg(self) -> EpsPoly {
        EpsPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Add for EpsPoly {
    type Output = EpsPoly;
    fn add(self, rhs: EpsPoly) -> EpsPoly {
        &self + &rhs
    }
}

impl Sub for EpsPoly {
    type Output = EpsPoly;
    fn sub(self, rhs: EpsPoly) -> EpsPoly {
        &self - &rhs
    }
}

impl Mul for EpsPoly {
    type Output = EpsPoly;
    fn mul(self, rhs: EpsPoly) -> EpsPoly {
        &self * &rhs
    }
}

impl Neg for EpsPoly {
    type Output = EpsPoly;
    fn neg(self) -> EpsPoly {
        -&self
    }
}

/// Renders in the text grammar accepted by [`crate::format::parse_poly`],
/// lowest degree first, e.g. `1/2 - 1/2 e^5`.
impl fmt::Display for EpsPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let magnitude = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let coeff = rational::render(&magnitude);
            match k {
                0 => f.write_str(&coeff)?,
                _ => {
                    if !magnitude.is_one() {
                        write!(f, "{coeff} ")?;
                    }
                    f.write_str("e")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
