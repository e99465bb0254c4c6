//! The dominance order on `ℚ(g₁,…,g_d)`: every generator is larger than
//! every element of the field generated by the ones declared before it.
//!
//! Signs and magnitudes are read off lex-leading terms, which are
//! multiplicative, so none of this needs reduced fractions.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::exact::{ExactError, Fraction, Poly, Rational, Vars};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("base ring cutoff {cutoff} exceeds the {count} declared generators")]
    BadCutoff { cutoff: usize, count: usize },
    #[error("`{0}` is not an element of the base ring")]
    NotInBaseRing(String),
    #[error("`{0}` is not positive")]
    NotPositive(String),
}

/// Generators `g₁ < g₂ < … < g_d` of the ambient field, plus the cutoff `e`
/// such that the discretely ordered base ring is `M = ℤ[g₁,…,g_e]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FieldContext {
    generators: Vars,
    base_cutoff: usize,
}

impl FieldContext {
    pub fn new<S: AsRef<str>>(generators: &[S], base_cutoff: usize) -> Result<Self, OrderError> {
        let generators = Vars::new(generators)?;
        FieldContext::from_vars(generators, base_cutoff)
    }

    pub fn from_vars(generators: Vars, base_cutoff: usize) -> Result<Self, OrderError> {
        if base_cutoff > generators.len() {
            return Err(OrderError::BadCutoff {
                cutoff: base_cutoff,
                count: generators.len(),
            });
        }
        Ok(FieldContext {
            generators,
            base_cutoff,
        })
    }

    pub fn generators(&self) -> &Vars {
        &self.generators
    }

    pub fn base_cutoff(&self) -> usize {
        self.base_cutoff
    }

    /// The generators of `M`.
    pub fn base_ring_vars(&self) -> Vars {
        self.generators.slice(0, self.base_cutoff)
    }

    pub fn generator(&self, index: usize) -> Result<Fraction, ExactError> {
        Fraction::generator(&self.generators, index)
    }

    pub fn integer(&self, c: i64) -> Fraction {
        Fraction::integer(&self.generators, c)
    }

    pub fn rational(&self, c: Rational) -> Fraction {
        Fraction::constant(&self.generators, c)
    }

    /// Whether a polynomial over the field generators lies in `M`: integer
    /// coefficients and only the first `e` generators.
    pub fn is_in_base_ring(&self, p: &Poly) -> bool {
        &self.generators == p.vars()
            && p.is_integral()
            && (self.base_cutoff..self.generators.len()).all(|i| !p.uses_var(i))
    }

    /// `Z` or `Z[g₁, …, g_e]`.
    pub fn base_ring_name(&self) -> String {
        if self.base_cutoff == 0 {
            "Z".to_string()
        } else {
            format!("Z[{}]", self.base_ring_vars())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    fn from_i8(s: i8) -> Sign {
        match s.signum() {
            -1 => Sign::Negative,
            0 => Sign::Zero,
            _ => Sign::Positive,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.as_i8())
    }
}

/// Size class of a field element relative to the integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Magnitude {
    Zero,
    /// `0 < |x| < 1/n` for every positive integer `n`.
    Infinitesimal,
    /// Finite and not infinitesimal.
    Finite,
    /// `|x| > n` for every integer `n`.
    Infinite,
}

impl Magnitude {
    pub fn name(self) -> &'static str {
        match self {
            Magnitude::Zero => "zero",
            Magnitude::Infinitesimal => "infinitesimal",
            Magnitude::Finite => "finite_noninfinitesimal",
            Magnitude::Infinite => "infinite",
        }
    }

    /// Zero, infinitesimal or finite.
    pub fn is_finite(self) -> bool {
        self != Magnitude::Infinite
    }
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn sign_of(x: &Fraction) -> Sign {
    Sign::from_i8(x.numerator().leading_sign() * x.denominator().leading_sign())
}

pub fn compare(x: &Fraction, y: &Fraction) -> Result<Ordering, ExactError> {
    let d = x.checked_sub(y)?;
    Ok(match sign_of(&d) {
        Sign::Negative => Ordering::Less,
        Sign::Zero => Ordering::Equal,
        Sign::Positive => Ordering::Greater,
    })
}

pub fn abs(x: &Fraction) -> Fraction {
    if sign_of(x) == Sign::Negative {
        -x
    } else {
        x.clone()
    }
}

pub fn classify(x: &Fraction) -> Magnitude {
    match x.leading_exponents() {
        None => Magnitude::Zero,
        Some((num, den)) => match num.cmp(den) {
            Ordering::Greater => Magnitude::Infinite,
            Ordering::Equal => Magnitude::Finite,
            Ordering::Less => Magnitude::Infinitesimal,
        },
    }
}

/// How a positive element of `M` was seen to be at least 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiscretenessWitness {
    /// A positive integer.
    Constant(BigInt),
    /// A nonconstant element, hence infinite.
    Nonconstant,
}

/// Confirms that a positive element of `M` is `≥ 1`, i.e. that nothing in
/// `M` sits strictly between 0 and 1.
pub fn check_positive_geq_one(
    field: &FieldContext,
    p: &Poly,
) -> Result<DiscretenessWitness, OrderError> {
    if !field.is_in_base_ring(p) {
        return Err(OrderError::NotInBaseRing(p.to_string()));
    }
    let x = Fraction::from_poly(p.clone());
    if sign_of(&x) != Sign::Positive {
        return Err(OrderError::NotPositive(p.to_string()));
    }
    let witness = match p.constant_value() {
        Some(c) => {
            debug_assert!(c.is_integer() && c >= Rational::one());
            DiscretenessWitness::Constant(c.to_integer())
        }
        None => {
            debug_assert_eq!(classify(&x), Magnitude::Infinite);
            DiscretenessWitness::Nonconstant
        }
    };
    debug_assert!(compare(&x, &field.integer(1))? != Ordering::Less);
    Ok(witness)
}
