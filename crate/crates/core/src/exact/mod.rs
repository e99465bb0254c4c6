//! Exact arithmetic substrate: rationals, sparse multivariate polynomials
//! and rational functions, plus the text grammar both are read from.

mod exponent;
mod fraction;
mod parse;
mod poly;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

pub use exponent::ExponentVector;
pub use fraction::Fraction;
pub use parse::{parse_fraction, parse_poly, ParseError};
pub use poly::Poly;

/// Exact rational coefficients.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("variable contexts differ: [{left}] vs [{right}]")]
    ContextMismatch { left: String, right: String },
    #[error("expected {expected} values, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("variable index {index} out of range for {len} variables")]
    VariableOutOfRange { index: usize, len: usize },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("the zero polynomial has no leading term")]
    ZeroPolynomial,
    #[error("division by zero")]
    DivisionByZero,
}

/// An ordered list of variable names shared by a family of polynomials.
///
/// Cloning is cheap; equality compares names.
#[derive(Clone)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self, ExactError> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().trim().to_string()).collect();
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(ExactError::DuplicateVariable(name.clone()));
            }
        }
        Ok(Vars(names.into()))
    }

    /// `prefix1, …, prefixn`.
    pub fn indexed(prefix: &str, n: usize) -> Self {
        Vars((1..=n).map(|i| format!("{prefix}{i}")).collect::<Vec<_>>().into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    /// Concatenation; fails if a name appears twice.
    pub fn concat(&self, other: &Vars) -> Result<Vars, ExactError> {
        let names: Vec<&String> = self.0.iter().chain(other.0.iter()).collect();
        Vars::new(&names)
    }

    pub fn slice(&self, start: usize, end: usize) -> Vars {
        Vars(self.0[start..end].to_vec().into())
    }

    pub(crate) fn ensure_same(&self, other: &Vars) -> Result<(), ExactError> {
        if self == other {
            Ok(())
        } else {
            Err(ExactError::ContextMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }
}

impl PartialEq for Vars {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Vars {}

impl fmt::Display for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.join(", "))
    }
}

impl fmt::Debug for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vars[{self}]")
    }
}
