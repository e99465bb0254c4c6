use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::One;

use super::{ExactError, ExponentVector, Poly, Rational, Vars};

/// A rational function `numerator / denominator` over a generator context.
///
/// Stored forms are not gcd-reduced, so `==` compares values by
/// cross-multiplication. Construction normalizes cheaply: the denominator
/// is made monic (positive lex-leading coefficient 1), common monomial
/// factors are cancelled, and an exact polynomial quotient is taken when
/// one exists.
#[derive(Clone)]
pub struct Fraction {
    num: Poly,
    den: Poly,
}

impl Fraction {
    pub fn new(num: Poly, den: Poly) -> Result<Self, ExactError> {
        num.vars().ensure_same(den.vars())?;
        if den.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Fraction::normalized(num, den))
    }

    pub fn from_poly(p: Poly) -> Self {
        let den = Poly::one(p.vars());
        Fraction { num: p, den }
    }

    pub fn zero(vars: &Vars) -> Self {
        Fraction::from_poly(Poly::zero(vars))
    }

    pub fn one(vars: &Vars) -> Self {
        Fraction::from_poly(Poly::one(vars))
    }

    pub fn constant(vars: &Vars, c: Rational) -> Self {
        Fraction::from_poly(Poly::constant(vars, c))
    }

    pub fn integer(vars: &Vars, c: i64) -> Self {
        Fraction::from_poly(Poly::integer(vars, c))
    }

    /// The generator at position `index` of the context.
    pub fn generator(vars: &Vars, index: usize) -> Result<Self, ExactError> {
        Poly::var(vars, index).map(Fraction::from_poly)
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            let vars = num.vars().clone();
            return Fraction::zero(&vars);
        }
        let (_, lead) = den.lex_leading().expect("denominator is nonzero");
        let inv = lead.recip();
        let (mut num, mut den) = if inv.is_one() {
            (num, den)
        } else {
            (num.scale(&inv), den.scale(&inv))
        };
        if den.is_one() {
            return Fraction { num, den };
        }
        let common = num
            .monomial_content()
            .zip(den.monomial_content())
            .map(|(a, b)| a.componentwise_min(&b));
        if let Some(m) = common.filter(|m| !m.is_zero()) {
            num = num.div_monomial(&m);
            den = den.div_monomial(&m);
        }
        if den.is_constant() {
            return Fraction { num, den };
        }
        if let Some(q) = num.try_div_exact(&den) {
            let vars = q.vars().clone();
            return Fraction {
                num: q,
                den: Poly::one(&vars),
            };
        }
        Fraction { num, den }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The value as a polynomial, when the stored denominator is constant.
    pub fn as_poly(&self) -> Option<Poly> {
        self.den
            .constant_value()
            .map(|d| self.num.scale(&d.recip()))
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.as_poly().and_then(|p| p.constant_value())
    }

    /// Exponent vectors of the lex-leading terms of numerator and
    /// denominator. `None` for zero.
    pub fn leading_exponents(&self) -> Option<(&ExponentVector, &ExponentVector)> {
        let (a, _) = self.num.lex_leading().ok()?;
        let (b, _) = self.den.lex_leading().ok()?;
        Some((a, b))
    }

    pub fn checked_add(&self, other: &Fraction) -> Result<Fraction, ExactError> {
        self.vars().ensure_same(other.vars())?;
        if self.den == other.den {
            return Ok(Fraction::normalized(
                self.num.checked_add(&other.num)?,
                self.den.clone(),
            ));
        }
        let num = self
            .num
            .checked_mul(&other.den)?
            .checked_add(&other.num.checked_mul(&self.den)?)?;
        Ok(Fraction::normalized(num, self.den.checked_mul(&other.den)?))
    }

    pub fn checked_sub(&self, other: &Fraction) -> Result<Fraction, ExactError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Fraction) -> Result<Fraction, ExactError> {
        self.vars().ensure_same(other.vars())?;
        Ok(Fraction::normalized(
            self.num.checked_mul(&other.num)?,
            self.den.checked_mul(&other.den)?,
        ))
    }

    pub fn checked_div(&self, other: &Fraction) -> Result<Fraction, ExactError> {
        self.vars().ensure_same(other.vars())?;
        if other.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Fraction::normalized(
            self.num.checked_mul(&other.den)?,
            self.den.checked_mul(&other.num)?,
        ))
    }

    pub fn recip(&self) -> Result<Fraction, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Fraction::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn scale(&self, c: &Rational) -> Fraction {
        Fraction::normalized(self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, k: u32) -> Result<Fraction, ExactError> {
        Ok(Fraction::normalized(self.num.pow(k)?, self.den.pow(k)?))
    }

    /// Value-level equality: `p/q == p'/q'` iff `p·q' == p'·q`.
    pub fn value_eq(&self, other: &Fraction) -> bool {
        self.vars() == other.vars()
            && (self.num.clone() * &other.den) == (other.num.clone() * &self.den)
    }
}

impl PartialEq for Fraction {
    fn eq(&self, other: &Self) -> bool {
        self.value_eq(other)
    }
}

impl Eq for Fraction {}

impl Neg for &Fraction {
    type Output = Fraction;
    fn neg(self) -> Fraction {
        Fraction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for Fraction {
    type Output = Fraction;
    fn neg(self) -> Fraction {
        -&self
    }
}

macro_rules! frac_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Fraction> for &Fraction {
            type Output = Fraction;
            fn $method(self, rhs: &Fraction) -> Fraction {
                self.$checked(rhs).expect("fraction operation failed")
            }
        }
        impl $trait<Fraction> for Fraction {
            type Output = Fraction;
            fn $method(self, rhs: Fraction) -> Fraction {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Fraction> for Fraction {
            type Output = Fraction;
            fn $method(self, rhs: &Fraction) -> Fraction {
                (&self).$method(rhs)
            }
        }
    };
}

frac_binop!(Add, add, checked_add);
frac_binop!(Sub, sub, checked_sub);
frac_binop!(Mul, mul, checked_mul);
frac_binop!(Div, div, checked_div);

impl Poly {
    /// Substitutes `point[i]` for variable `i`. All point entries must share
    /// one generator context; the result lives there too.
    ///
    /// Works over the common denominator `Π den_i^{deg_i}`, so the sum is
    /// assembled as a single polynomial before normalizing.
    pub fn eval(&self, point: &[Fraction]) -> Result<Fraction, ExactError> {
        if point.len() != self.vars().len() {
            return Err(ExactError::ArityMismatch {
                expected: self.vars().len(),
                found: point.len(),
            });
        }
        let Some(first) = point.first() else {
            // No variables: a constant over an empty context.
            return Ok(Fraction::from_poly(self.clone()));
        };
        let field = first.vars().clone();
        for x in point {
            field.ensure_same(x.vars())?;
        }
        let n = point.len();
        let max_deg: Vec<u32> = (0..n)
            .map(|i| self.terms().map(|(e, _)| e.get(i)).max().unwrap_or(0))
            .collect();
        // powers[i][k] = num_i^k, den_powers[i][k] = den_i^k
        let mut num_pows: Vec<Vec<Poly>> = Vec::with_capacity(n);
        let mut den_pows: Vec<Vec<Poly>> = Vec::with_capacity(n);
        for (x, &d) in point.iter().zip(&max_deg) {
            let mut np = vec![Poly::one(&field)];
            let mut dp = vec![Poly::one(&field)];
            for k in 1..=d as usize {
                np.push(np[k - 1].checked_mul(&x.num)?);
                dp.push(if x.den.is_one() {
                    dp[0].clone()
                } else {
                    dp[k - 1].checked_mul(&x.den)?
                });
            }
            num_pows.push(np);
            den_pows.push(dp);
        }
        let mut acc = Poly::zero(&field);
        for (e, c) in self.terms() {
            let mut t = Poly::constant(&field, c.clone());
            for i in 0..n {
                let k = e.get(i) as usize;
                let top = max_deg[i] as usize;
                if k > 0 {
                    t = t.checked_mul(&num_pows[i][k])?;
                }
                if top > k && !point[i].den.is_one() {
                    t = t.checked_mul(&den_pows[i][top - k])?;
                }
            }
            acc = acc.checked_add(&t)?;
        }
        let mut den = Poly::one(&field);
        for i in 0..n {
            if !point[i].den.is_one() && max_deg[i] > 0 {
                den = den.checked_mul(&den_pows[i][max_deg[i] as usize])?;
            }
        }
        Ok(Fraction::normalized(acc, den))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.num_terms() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        let simple_den = self.den.num_terms() == 1 && {
            let (e, c) = self.den.lex_leading().expect("nonzero");
            c.is_one() && e.entries().iter().filter(|&&k| k > 0).count() == 1
        };
        if simple_den {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

impl fmt::Debug for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fraction[{}]({self})", self.vars())
    }
}
