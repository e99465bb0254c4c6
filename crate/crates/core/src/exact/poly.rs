use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{ExactError, ExponentVector, Rational, Vars};

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept in a `BTreeMap` ordered by [`ExponentVector`]'s dominance
/// order, and no stored coefficient is ever zero, so structural equality is
/// polynomial equality.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    vars: Vars,
    terms: BTreeMap<ExponentVector, Rational>,
}

impl Poly {
    pub fn zero(vars: &Vars) -> Self {
        Poly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &Vars) -> Self {
        Poly::constant(vars, Rational::one())
    }

    pub fn constant(vars: &Vars, c: Rational) -> Self {
        Poly::monomial(vars, ExponentVector::zero(vars.len()), c)
    }

    pub fn integer(vars: &Vars, c: i64) -> Self {
        Poly::constant(vars, Rational::from_integer(BigInt::from(c)))
    }

    /// The variable at position `index`.
    pub fn var(vars: &Vars, index: usize) -> Result<Self, ExactError> {
        if index >= vars.len() {
            return Err(ExactError::VariableOutOfRange {
                index,
                len: vars.len(),
            });
        }
        Ok(Poly::monomial(
            vars,
            ExponentVector::unit(vars.len(), index),
            Rational::one(),
        ))
    }

    pub fn var_named(vars: &Vars, name: &str) -> Result<Self, ExactError> {
        let index = vars
            .index_of(name)
            .ok_or_else(|| ExactError::UnknownVariable(name.to_string()))?;
        Poly::var(vars, index)
    }

    pub fn monomial(vars: &Vars, exp: ExponentVector, coeff: Rational) -> Self {
        assert_eq!(exp.len(), vars.len(), "exponent arity must match context");
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        Poly {
            vars: vars.clone(),
            terms,
        }
    }

    /// Builds a polynomial from possibly repeated, possibly zero terms.
    pub fn from_terms<I>(vars: &Vars, terms: I) -> Self
    where
        I: IntoIterator<Item = (ExponentVector, Rational)>,
    {
        let mut p = Poly::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent arity must match context");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exp: ExponentVector, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    /// Terms in ascending dominance order (the leading term comes last).
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: &ExponentVector) -> Rational {
        self.terms.get(exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.coeff(&ExponentVector::zero(self.vars.len())))
        } else {
            None
        }
    }

    /// All coefficients are integers.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// The lexicographically greatest term, last variable most significant.
    pub fn lex_leading(&self) -> Result<(&ExponentVector, &Rational), ExactError> {
        self.terms.iter().next_back().ok_or(ExactError::ZeroPolynomial)
    }

    pub fn leading_sign(&self) -> i8 {
        match self.terms.values().next_back() {
            None => 0,
            Some(c) if c.is_positive() => 1,
            Some(_) => -1,
        }
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|e| e.total_degree()).max()
    }

    /// Total degree counting only the listed variable positions.
    pub fn degree_in(&self, positions: &[usize]) -> Option<u64> {
        self.terms
            .keys()
            .map(|e| positions.iter().map(|&p| u64::from(e.get(p))).sum())
            .max()
    }

    /// Whether variable `index` occurs in some term.
    pub fn uses_var(&self, index: usize) -> bool {
        self.terms.keys().any(|e| e.get(index) > 0)
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly, ExactError> {
        self.vars.ensure_same(&other.vars)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly, ExactError> {
        self.vars.ensure_same(&other.vars)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly, ExactError> {
        self.vars.ensure_same(&other.vars)?;
        // Accumulate over integers and divide once per output term.
        let (na, da) = self.integer_terms();
        let (nb, db) = other.integer_terms();
        let mut acc: BTreeMap<ExponentVector, BigInt> = BTreeMap::new();
        for (ea, ca) in &na {
            for (eb, cb) in &nb {
                *acc.entry(ea.checked_add(eb)?).or_default() += ca * cb;
            }
        }
        let den = da * db;
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e, Rational::new(c, den.clone())))
            .collect();
        Ok(Poly {
            vars: self.vars.clone(),
            terms,
        })
    }

    /// Terms scaled to integers by the common denominator, and that
    /// denominator.
    fn integer_terms(&self) -> (Vec<(&ExponentVector, BigInt)>, BigInt) {
        let d = self.denominator_lcm();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e, c.numer() * (&d / c.denom())))
            .collect();
        (terms, d)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Multiplies by `coeff * X^exp`.
    pub fn mul_term(&self, exp: &ExponentVector, coeff: &Rational) -> Result<Poly, ExactError> {
        if coeff.is_zero() {
            return Ok(Poly::zero(&self.vars));
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| Ok((e.checked_add(exp)?, c * coeff)))
            .collect::<Result<BTreeMap<_, _>, ExactError>>()?;
        Ok(Poly {
            vars: self.vars.clone(),
            terms,
        })
    }

    pub fn pow(&self, k: u32) -> Result<Poly, ExactError> {
        let mut result = Poly::one(&self.vars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.checked_mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(result)
    }

    pub fn partial_derivative(&self, var: usize) -> Result<Poly, ExactError> {
        if var >= self.vars.len() {
            return Err(ExactError::VariableOutOfRange {
                index: var,
                len: self.vars.len(),
            });
        }
        let mut out = Poly::zero(&self.vars);
        for (e, c) in &self.terms {
            let k = e.get(var);
            if k > 0 {
                out.add_term(e.with_entry(var, k - 1), c * Rational::from_integer(k.into()));
            }
        }
        Ok(out)
    }

    /// Substitutes rationals for every variable.
    pub fn eval_rational(&self, point: &[Rational]) -> Result<Rational, ExactError> {
        if point.len() != self.vars.len() {
            return Err(ExactError::ArityMismatch {
                expected: self.vars.len(),
                found: point.len(),
            });
        }
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e.entries()) {
                if k > 0 {
                    t *= num_traits::pow::Pow::pow(x, k);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Substitutes rationals for the variables at `positions`; the result
    /// lives over the remaining variables, in their original order.
    pub fn specialize(&self, positions: &[usize], values: &[Rational]) -> Result<Poly, ExactError> {
        if positions.len() != values.len() {
            return Err(ExactError::ArityMismatch {
                expected: positions.len(),
                found: values.len(),
            });
        }
        if let Some(&bad) = positions.iter().find(|&&p| p >= self.vars.len()) {
            return Err(ExactError::VariableOutOfRange {
                index: bad,
                len: self.vars.len(),
            });
        }
        let keep: Vec<usize> = (0..self.vars.len()).filter(|i| !positions.contains(i)).collect();
        let rest = Vars::new(&keep.iter().map(|&i| self.vars.name(i)).collect::<Vec<_>>())?;
        let mut out = Poly::zero(&rest);
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (&p, v) in positions.iter().zip(values) {
                let k = e.get(p);
                if k > 0 {
                    t *= num_traits::pow::Pow::pow(v, k);
                }
            }
            out.add_term(e.project(&keep), t);
        }
        Ok(out)
    }

    /// Re-expresses the polynomial over `target`, matching variables by
    /// name. Variables absent from `target` must not occur in any term.
    pub fn embed(&self, target: &Vars) -> Result<Poly, ExactError> {
        if &self.vars == target {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, name) in self.vars.names().iter().enumerate() {
            match target.index_of(name) {
                Some(j) => map.push(Some(j)),
                None if !self.uses_var(i) => map.push(None),
                None => return Err(ExactError::UnknownVariable(name.clone())),
            }
        }
        let mut out = Poly::zero(target);
        for (e, c) in &self.terms {
            let mut entries = vec![0u32; target.len()];
            for (i, slot) in map.iter().enumerate() {
                if let Some(j) = slot {
                    entries[*j] = e.get(i);
                }
            }
            out.add_term(ExponentVector::new(entries), c.clone());
        }
        Ok(out)
    }

    /// Splits the polynomial by its exponents at `positions`:
    /// `self = Σ_w coeff_w · X^w`, where each `coeff_w` lives over the other
    /// variables.
    pub fn coefficients_in(
        &self,
        positions: &[usize],
    ) -> Result<BTreeMap<ExponentVector, Poly>, ExactError> {
        let keep: Vec<usize> = (0..self.vars.len()).filter(|i| !positions.contains(i)).collect();
        let rest = Vars::new(&keep.iter().map(|&i| self.vars.name(i)).collect::<Vec<_>>())?;
        let mut out: BTreeMap<ExponentVector, Poly> = BTreeMap::new();
        for (e, c) in &self.terms {
            out.entry(e.project(positions))
                .or_insert_with(|| Poly::zero(&rest))
                .add_term(e.project(&keep), c.clone());
        }
        Ok(out)
    }

    /// Componentwise minimum exponent over all terms (the largest monomial
    /// dividing the polynomial). `None` for zero.
    pub fn monomial_content(&self) -> Option<ExponentVector> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, e| acc.componentwise_min(e)))
    }

    /// Divides every exponent by the monomial `exp`, which must divide
    /// every term.
    pub(crate) fn div_monomial(&self, exp: &ExponentVector) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let q = e.checked_sub(exp).expect("monomial must divide every term");
                    (q, c.clone())
                })
                .collect(),
        }
    }

    /// Exact quotient `self / divisor` when the division leaves no
    /// remainder, `None` otherwise.
    pub fn try_div_exact(&self, divisor: &Poly) -> Option<Poly> {
        if self.vars != divisor.vars || divisor.is_zero() {
            return None;
        }
        let (lead_e, lead_c) = divisor.lex_leading().ok()?;
        let mut rem = self.clone();
        let mut quot = Poly::zero(&self.vars);
        while let Some((e, c)) = rem.terms.iter().next_back() {
            let qe = e.checked_sub(lead_e)?;
            let qc = c / lead_c;
            for (de, dc) in &divisor.terms {
                rem.add_term(de.checked_add(&qe).ok()?, -(dc * &qc));
            }
            quot.add_term(qe, qc);
        }
        Some(quot)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

macro_rules! poly_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        /// Panics when the operands live over different variable contexts;
        /// use the `checked_*` form to get an error instead.
        impl $trait<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                self.$checked(rhs).expect("polynomial operands must share a context")
            }
        }
        impl $trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
    };
}

poly_binop!(Add, add, checked_add);
poly_binop!(Sub, sub, checked_sub);
poly_binop!(Mul, mul, checked_mul);

fn write_monomial(f: &mut fmt::Formatter<'_>, vars: &Vars, e: &ExponentVector) -> fmt::Result {
    let mut first = true;
    for (i, &k) in e.entries().iter().enumerate() {
        if k == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "{}", vars.name(i))?;
        if k > 1 {
            write!(f, "^{k}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Poly {
    /// Dominant term first, in the same grammar the parser accepts.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let abs = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if e.is_zero() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write_monomial(f, &self.vars, e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({self})", self.vars)
    }
}
