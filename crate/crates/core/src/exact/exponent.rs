use std::cmp::Ordering;
use std::fmt;

use super::ExactError;

/// Exponents of a monomial, one entry per variable of its context.
///
/// The ordering is lexicographic with the *last* variable most significant,
/// so a `BTreeMap` keyed by exponent vectors keeps its dominant term last.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(entries: Vec<u32>) -> Self {
        ExponentVector(entries)
    }

    pub fn zero(len: usize) -> Self {
        ExponentVector(vec![0; len])
    }

    /// The exponent vector of the single variable `var`.
    pub fn unit(len: usize, var: usize) -> Self {
        let mut e = vec![0; len];
        e[var] = 1;
        ExponentVector(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ExactError> {
        if self.len() != other.len() {
            return Err(ExactError::ArityMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        let entries = self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(ExactError::ExponentOverflow))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ExponentVector(entries))
    }

    /// `self - other`, or `None` when some entry would go negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        if self.len() != other.len() {
            return None;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(ExponentVector)
    }

    /// Componentwise `self >= other`.
    pub fn divides_into(&self, other: &Self) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn componentwise_min(&self, other: &Self) -> Self {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub(crate) fn with_entry(&self, i: usize, value: u32) -> Self {
        let mut e = self.0.clone();
        e[i] = value;
        ExponentVector(e)
    }

    /// Keeps only the listed positions, in the listed order.
    pub fn project(&self, positions: &[usize]) -> Self {
        ExponentVector(positions.iter().map(|&p| self.0[p]).collect())
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .iter()
            .rev()
            .cmp(other.0.iter().rev())
            .then_with(|| self.0.len().cmp(&other.0.len()))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}
