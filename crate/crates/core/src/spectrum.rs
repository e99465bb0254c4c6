//! Points of `Spec(R[X̄])` represented by evaluation at coordinates in a
//! dominance field, and the cone predicates checked against a finite
//! corpus of polynomials.
//!
//! Corpus polynomials live over `X1..Xn` followed by the generators of the
//! base ring `M`; they are matched to a point by variable name.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::exact::{ExactError, Fraction, Poly, Rational, Vars};
use crate::order::{classify, compare, sign_of, FieldContext, Magnitude, OrderError, Sign};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("coordinate {index} is over [{found}], expected [{expected}]")]
    CoordinateContext {
        index: usize,
        expected: String,
        found: String,
    },
    #[error("points live in different fields")]
    FieldMismatch,
    #[error("`{0}` is not a polynomial over the base ring")]
    NotOverBaseRing(String),
    #[error("corpus contains the zero polynomial")]
    ZeroInCorpus,
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(Rational),
    #[error("hyperplane normal is zero")]
    ZeroNormal,
}

/// A point `α` given by its coordinates `X₁(α),…,Xₙ(α)`.
#[derive(Clone, Debug)]
pub struct SpecPoint {
    field: FieldContext,
    x_vars: Vars,
    coords: Vec<Fraction>,
}

impl SpecPoint {
    pub fn new(field: FieldContext, coords: Vec<Fraction>) -> Result<Self, SpecError> {
        let x_vars = Vars::indexed("X", coords.len());
        SpecPoint::with_var_names(field, x_vars, coords)
    }

    pub fn with_var_names(
        field: FieldContext,
        x_vars: Vars,
        coords: Vec<Fraction>,
    ) -> Result<Self, SpecError> {
        if x_vars.len() != coords.len() {
            return Err(ExactError::ArityMismatch {
                expected: x_vars.len(),
                found: coords.len(),
            }
            .into());
        }
        for (index, c) in coords.iter().enumerate() {
            if c.vars() != field.generators() {
                return Err(SpecError::CoordinateContext {
                    index,
                    expected: field.generators().to_string(),
                    found: c.vars().to_string(),
                });
            }
        }
        // Rejects clashes between coordinate and generator names.
        x_vars.concat(field.generators())?;
        Ok(SpecPoint {
            field,
            x_vars,
            coords,
        })
    }

    pub fn field(&self) -> &FieldContext {
        &self.field
    }

    pub fn coords(&self) -> &[Fraction] {
        &self.coords
    }

    pub fn arity(&self) -> usize {
        self.coords.len()
    }

    pub fn x_vars(&self) -> &Vars {
        &self.x_vars
    }

    /// `X1..Xn` followed by the generators of `M`: the context of `M[X̄]`.
    pub fn ring_vars(&self) -> Vars {
        self.x_vars
            .concat(&self.field.base_ring_vars())
            .expect("names checked at construction")
    }

    /// Same field, new coordinates.
    pub fn with_coords(&self, coords: Vec<Fraction>) -> Result<Self, SpecError> {
        SpecPoint::with_var_names(self.field.clone(), self.x_vars.clone(), coords)
    }

    /// `self + s·q` for a rational scalar and rational direction.
    pub fn translate(&self, s: &Rational, q: &[Rational]) -> Result<Self, SpecError> {
        if q.len() != self.arity() {
            return Err(ExactError::ArityMismatch {
                expected: self.arity(),
                found: q.len(),
            }
            .into());
        }
        let coords = self
            .coords
            .iter()
            .zip(q)
            .map(|(c, qi)| c.checked_add(&self.field.rational(s * qi)))
            .collect::<Result<Vec<_>, _>>()?;
        self.with_coords(coords)
    }

    /// `f(X₁(α),…,Xₙ(α))`. The polynomial may use any of `X1..Xn` and any
    /// field generator as a coefficient variable.
    pub fn value(&self, f: &Poly) -> Result<Fraction, SpecError> {
        let gens = self.field.generators();
        let mut point = Vec::with_capacity(f.vars().len());
        for name in f.vars().names() {
            if let Some(i) = self.x_vars.index_of(name) {
                point.push(self.coords[i].clone());
            } else if let Some(j) = gens.index_of(name) {
                point.push(Fraction::generator(gens, j)?);
            } else {
                return Err(ExactError::UnknownVariable(name.clone()).into());
            }
        }
        if point.is_empty() {
            let c = f.constant_value().unwrap_or_else(Rational::zero);
            return Ok(self.field.rational(c));
        }
        Ok(f.eval(&point)?)
    }

    /// Whether `f ∈ M[X̄]`: integer coefficients, and every variable is a
    /// coordinate or a generator of `M`.
    pub fn is_over_base_ring(&self, f: &Poly) -> bool {
        let ring = self.ring_vars();
        f.is_integral() && f.embed(&ring).is_ok()
    }
}

impl fmt::Display for SpecPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Evaluation record for one polynomial.
#[derive(Clone, Debug)]
pub struct Witness {
    pub poly: Poly,
    pub value: Fraction,
    pub sign: Sign,
    pub magnitude: Magnitude,
}

impl Witness {
    fn of(point: &SpecPoint, poly: &Poly) -> Result<Self, SpecError> {
        let value = point.value(poly)?;
        Ok(Witness {
            poly: poly.clone(),
            sign: sign_of(&value),
            magnitude: classify(&value),
            value,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Failure {
    /// Position in the corpus, or `None` for a base-ring sample element.
    pub corpus_index: Option<usize>,
    pub poly: Poly,
    pub value: Fraction,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct ConeVerdict {
    pub predicate: &'static str,
    pub passed: bool,
    /// One entry per corpus polynomial, in corpus order.
    pub witnesses: Vec<Witness>,
    pub failure: Option<Failure>,
}

impl ConeVerdict {
    fn fail(mut self, failure: Failure) -> Self {
        self.passed = false;
        self.failure = Some(failure);
        self
    }

    fn renamed(mut self, predicate: &'static str) -> Self {
        self.predicate = predicate;
        self
    }
}

fn witnesses(p: &SpecPoint, corpus: &[Poly]) -> Result<Vec<Witness>, SpecError> {
    corpus.iter().map(|f| Witness::of(p, f)).collect()
}

/// Corpus positions of the polynomials vanishing at `p`.
pub fn supp_corpus(p: &SpecPoint, corpus: &[Poly]) -> Result<Vec<usize>, SpecError> {
    let mut out = Vec::new();
    for (i, f) in corpus.iter().enumerate() {
        if p.value(f)?.is_zero() {
            out.push(i);
        }
    }
    Ok(out)
}

/// Every corpus value that is positive is at least 1.
pub fn is_discrete_cone(p: &SpecPoint, corpus: &[Poly]) -> Result<ConeVerdict, SpecError> {
    let ws = witnesses(p, corpus)?;
    let one = p.field().integer(1);
    let mut failure = None;
    for (i, w) in ws.iter().enumerate() {
        if w.sign == Sign::Positive && compare(&w.value, &one)? == Ordering::Less {
            failure = Some(Failure {
                corpus_index: Some(i),
                poly: w.poly.clone(),
                value: w.value.clone(),
                reason: "value lies strictly between 0 and 1".to_string(),
            });
            break;
        }
    }
    let verdict = ConeVerdict {
        predicate: "discrete",
        passed: true,
        witnesses: ws,
        failure: None,
    };
    Ok(match failure {
        Some(f) => verdict.fail(f),
        None => verdict,
    })
}

/// A fixed finite sample of nonzero elements of `M`, as polynomials over the
/// field generators.
pub fn base_ring_sample(field: &FieldContext) -> Vec<Poly> {
    let gens = field.generators();
    let mut out: Vec<Poly> = [1, 2, 3, -1, -2, 7]
        .iter()
        .map(|&c| Poly::integer(gens, c))
        .collect();
    let e = field.base_cutoff();
    for j in 0..e {
        let g = Poly::var(gens, j).expect("generator index in range");
        let five = Poly::integer(gens, 5);
        out.push(g.clone());
        out.push(&g - &five);
        out.push(&five - &g);
        out.push(&(&g * &g) - &(&g * &Poly::integer(gens, 3)));
        for k in 0..j {
            let h = Poly::var(gens, k).expect("generator index in range");
            out.push(&(&g * &h) - &Poly::one(gens));
            out.push(&h - &g);
        }
    }
    out
}

/// `M^{≥0}` maps into the cone, no nonzero element of `M` is in the
/// support (both checked on [`base_ring_sample`]), and the corpus is
/// discrete.
pub fn is_m_discrete_cone(p: &SpecPoint, corpus: &[Poly]) -> Result<ConeVerdict, SpecError> {
    let field = p.field();
    for m in base_ring_sample(field) {
        let own = Fraction::from_poly(m.clone());
        let image = p.value(&m)?;
        if sign_of(&own) == Sign::Positive && sign_of(&image) != Sign::Positive {
            let verdict = is_discrete_cone(p, corpus)?.renamed("m-discrete");
            return Ok(verdict.fail(Failure {
                corpus_index: None,
                poly: m,
                value: image,
                reason: "positive element of M is not positive at the point".to_string(),
            }));
        }
        if image.is_zero() {
            let verdict = is_discrete_cone(p, corpus)?.renamed("m-discrete");
            return Ok(verdict.fail(Failure {
                corpus_index: None,
                poly: m,
                value: image,
                reason: "nonzero element of M lies in the support".to_string(),
            }));
        }
    }
    Ok(is_discrete_cone(p, corpus)?.renamed("m-discrete"))
}

fn require_base_ring(p: &SpecPoint, corpus: &[Poly]) -> Result<(), SpecError> {
    match corpus.iter().find(|f| !p.is_over_base_ring(f)) {
        Some(f) => Err(SpecError::NotOverBaseRing(f.to_string())),
        None => Ok(()),
    }
}

/// The restriction of `p` to `M[X̄]` is an `M`-discrete prime cone, checked
/// on a corpus drawn from `M[X̄]`.
pub fn is_arithmetical(p: &SpecPoint, corpus: &[Poly]) -> Result<ConeVerdict, SpecError> {
    require_base_ring(p, corpus)?;
    Ok(is_m_discrete_cone(p, corpus)?.renamed("arithmetical"))
}

/// Arithmetical, and no corpus polynomial vanishes at `p`.
pub fn is_transcendental(p: &SpecPoint, corpus: &[Poly]) -> Result<ConeVerdict, SpecError> {
    if corpus.iter().any(Poly::is_zero) {
        return Err(SpecError::ZeroInCorpus);
    }
    let verdict = is_arithmetical(p, corpus)?.renamed("transcendental");
    if !verdict.passed {
        return Ok(verdict);
    }
    let support = supp_corpus(p, corpus)?;
    match support.first() {
        Some(&i) => {
            let value = verdict.witnesses[i].value.clone();
            Ok(verdict.fail(Failure {
                corpus_index: Some(i),
                poly: corpus[i].clone(),
                value,
                reason: "point lies on the zero set".to_string(),
            }))
        }
        None => Ok(verdict),
    }
}

/// `f(α) = 0` and `α` is arithmetical on the corpus: a solution of `f = 0`
/// in a discretely ordered extension of `M`.
pub fn diophantine_witness(
    f: &Poly,
    p: &SpecPoint,
    corpus: &[Poly],
) -> Result<ConeVerdict, SpecError> {
    require_base_ring(p, std::slice::from_ref(f))?;
    let value = p.value(f)?;
    let verdict = is_arithmetical(p, corpus)?.renamed("diophantine");
    if !value.is_zero() {
        return Ok(verdict.fail(Failure {
            corpus_index: None,
            poly: f.clone(),
            value,
            reason: "point is not a root".to_string(),
        }));
    }
    Ok(verdict)
}

/// `Σ (p_i − q_i)²`.
pub fn distance_squared(p: &SpecPoint, q: &SpecPoint) -> Result<Fraction, SpecError> {
    if p.field() != q.field() {
        return Err(SpecError::FieldMismatch);
    }
    if p.arity() != q.arity() {
        return Err(ExactError::ArityMismatch {
            expected: p.arity(),
            found: q.arity(),
        }
        .into());
    }
    let mut acc = p.field().integer(0);
    for (a, b) in p.coords().iter().zip(q.coords()) {
        let d = a.checked_sub(b)?;
        acc = acc.checked_add(&d.checked_mul(&d)?)?;
    }
    Ok(acc)
}

/// `distance_squared(center, p) ≤ r²`. Membership of the coordinate ball
/// is a sound certificate for membership of the Robson ball.
pub fn ball_contains(center: &SpecPoint, r: &Rational, p: &SpecPoint) -> Result<bool, SpecError> {
    if !r.is_positive() {
        return Err(SpecError::NonPositiveRadius(r.clone()));
    }
    let d = distance_squared(center, p)?;
    let r2 = center.field().rational(r * r);
    Ok(compare(&d, &r2)? != Ordering::Greater)
}

#[derive(Clone, Debug)]
pub struct Clearance {
    pub passed: bool,
    /// `Σ a_i x_i`.
    pub value: Fraction,
    pub magnitude: Magnitude,
}

/// The point is infinitely far from the hyperplane `Σ a_i X_i = 0`, which
/// for a normal with entries in `M` is equivalent to `Σ a_i x_i` being
/// infinite.
pub fn hyperplane_clearance(p: &SpecPoint, normal: &[Poly]) -> Result<Clearance, SpecError> {
    if normal.len() != p.arity() {
        return Err(ExactError::ArityMismatch {
            expected: p.arity(),
            found: normal.len(),
        }
        .into());
    }
    if normal.iter().all(Poly::is_zero) {
        return Err(SpecError::ZeroNormal);
    }
    let field = p.field();
    let mut acc = field.integer(0);
    for (a, x) in normal.iter().zip(p.coords()) {
        let a = a.embed(field.generators())?;
        if !field.is_in_base_ring(&a) {
            return Err(SpecError::NotOverBaseRing(a.to_string()));
        }
        acc = acc.checked_add(&Fraction::from_poly(a).checked_mul(x)?)?;
    }
    let magnitude = classify(&acc);
    Ok(Clearance {
        passed: magnitude == Magnitude::Infinite,
        value: acc,
        magnitude,
    })
}

pub fn hyperplane_clearance_int(p: &SpecPoint, normal: &[i64]) -> Result<Clearance, SpecError> {
    let gens = p.field().generators();
    let normal: Vec<Poly> = normal.iter().map(|&a| Poly::integer(gens, a)).collect();
    hyperplane_clearance(p, &normal)
}

#[derive(Clone, Debug)]
pub struct BatchClearance {
    pub bound: u32,
    pub checked: usize,
    /// First failing normal in enumeration order.
    pub failure: Option<(Vec<i64>, Clearance)>,
}

impl BatchClearance {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks every nonzero integer normal with `|a_i| ≤ bound`.
pub fn clearance_batch(p: &SpecPoint, bound: u32) -> Result<BatchClearance, SpecError> {
    let n = p.arity();
    let b = i64::from(bound);
    let mut a = vec![-b; n];
    let mut checked = 0;
    if n == 0 {
        return Ok(BatchClearance {
            bound,
            checked,
            failure: None,
        });
    }
    loop {
        if a.iter().any(|&x| x != 0) {
            checked += 1;
            let c = hyperplane_clearance_int(p, &a)?;
            if !c.passed {
                return Ok(BatchClearance {
                    bound,
                    checked,
                    failure: Some((a, c)),
                });
            }
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == n {
                return Ok(BatchClearance {
                    bound,
                    checked,
                    failure: None,
                });
            }
            if a[i] < b {
                a[i] += 1;
                break;
            }
            a[i] = -b;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, parse_fraction, parse_poly};

    fn field() -> FieldContext {
        FieldContext::new(&["u", "t"], 0).unwrap()
    }

    fn point_in(field: &FieldContext, coords: &[&str]) -> SpecPoint {
        let cs = coords
            .iter()
            .map(|s| parse_fraction(s, field.generators()).unwrap())
            .collect();
        SpecPoint::new(field.clone(), cs).unwrap()
    }

    fn point(coords: &[&str]) -> SpecPoint {
        point_in(&field(), coords)
    }

    fn corpus(p: &SpecPoint, polys: &[&str]) -> Vec<Poly> {
        let v = p.ring_vars();
        polys.iter().map(|s| parse_poly(s, &v).unwrap()).collect()
    }

    #[test]
    fn support_on_a_corpus() {
        let p = point(&["t", "t^2"]);
        let c = corpus(&p, &["X2 - X1^2", "X1"]);
        assert_eq!(supp_corpus(&p, &c).unwrap(), vec![0]);
        let q = point(&["t", "t^2 + 1/t"]);
        assert!(supp_corpus(&q, &c).unwrap().is_empty());
        assert!(supp_corpus(&q, &[]).unwrap().is_empty());
    }

    #[test]
    fn discrete_cone_examples() {
        let p = point(&["t", "t^2"]);
        assert!(is_discrete_cone(&p, &corpus(&p, &["X1", "X2 - X1^2", "2"])).unwrap().passed);
        let q = point(&["t", "t^2 + 1/t"]);
        let v = is_discrete_cone(&q, &corpus(&q, &["X2 - X1^2"])).unwrap();
        assert!(!v.passed);
        let fail = v.failure.unwrap();
        assert_eq!(fail.corpus_index, Some(0));
        assert_eq!(fail.value.to_string(), "1/t");
        let r = point(&["3", "4"]);
        assert!(is_discrete_cone(&r, &corpus(&r, &["X1 - 2"])).unwrap().passed);
    }

    #[test]
    fn m_discrete_examples() {
        let p = point(&["t", "t^2"]);
        assert!(is_m_discrete_cone(&p, &corpus(&p, &["X1", "X2 - X1^2", "2"])).unwrap().passed);
        let f = FieldContext::new(&["u", "t"], 1).unwrap();
        let q = point_in(&f, &["u", "t"]);
        let sample = corpus(&q, &["u - 5"]);
        let v = q.value(&sample[0]).unwrap();
        assert!(!v.is_zero());
        assert!(is_m_discrete_cone(&q, &sample).unwrap().passed);
    }

    #[test]
    fn arithmetical_examples() {
        let p = point(&["t", "t^2 + 1/t"]);
        assert!(!is_arithmetical(&p, &corpus(&p, &["X2 - X1^2"])).unwrap().passed);
        let q = point(&["t + 1", "t^2 + 1/t + 1"]);
        let v = is_arithmetical(&q, &corpus(&q, &["X2 - X1^2"])).unwrap();
        assert!(v.passed);
        assert_eq!(v.witnesses[0].value, parse_fraction("1/t - 2*t", field().generators()).unwrap());
        let r = point(&["t", "u*t"]);
        assert!(is_arithmetical(&r, &corpus(&r, &["X1*X2 - 7", "X2 - X1"])).unwrap().passed);
        let half = vec![parse_poly("1/2*X1", &r.ring_vars()).unwrap()];
        assert!(matches!(
            is_arithmetical(&r, &half),
            Err(SpecError::NotOverBaseRing(_))
        ));
    }

    #[test]
    fn transcendental_examples() {
        let p = point(&["t", "t^2"]);
        let v = is_transcendental(&p, &corpus(&p, &["X2 - X1^2"])).unwrap();
        assert!(!v.passed);
        let q = point(&["t", "u*t"]);
        assert!(is_transcendental(&q, &corpus(&q, &["X2 - X1^2", "X2 - X1", "X1*X2 - 7"]))
            .unwrap()
            .passed);
        assert!(is_transcendental(&q, &[]).unwrap().passed);
    }

    #[test]
    fn diophantine_examples() {
        let p = point(&["t", "t^2"]);
        let v = p.ring_vars();
        let f = parse_poly("X2 - X1^2", &v).unwrap();
        assert!(diophantine_witness(&f, &p, &corpus(&p, &["X1", "X1 + X2"])).unwrap().passed);

        let m = FieldContext::new(&["a", "t"], 1).unwrap();
        let q = point_in(&m, &["0", "t"]);
        let g = parse_poly("X1^2 + X2^2 - a", &q.ring_vars()).unwrap();
        assert!(!diophantine_witness(&g, &q, &[]).unwrap().passed);

        let r = point(&["t", "t"]);
        let h = parse_poly("X1 - X2", &r.ring_vars()).unwrap();
        assert!(diophantine_witness(&h, &r, &corpus(&r, &["X1"])).unwrap().passed);
    }

    #[test]
    fn distances() {
        let p = point(&["t", "u*t"]);
        let q = point(&["t + 3", "u*t + 4"]);
        assert_eq!(distance_squared(&p, &q).unwrap().as_rational(), Some(int(25)));
        assert!(distance_squared(&p, &p).unwrap().is_zero());
        let a = point(&["t", "0"]);
        let o = point(&["0", "0"]);
        assert_eq!(distance_squared(&a, &o).unwrap().to_string(), "t^2");
        assert!(distance_squared(&a, &point(&["0"])).is_err());
    }

    #[test]
    fn ball_membership() {
        let c = point(&["t", "u*t"]);
        let p = point(&["t + 1", "u*t + 1"]);
        assert!(ball_contains(&c, &int(2), &p).unwrap());
        assert!(!ball_contains(&c, &int(1), &p).unwrap());
        assert!(ball_contains(&c, &crate::exact::rat(1, 1000), &c).unwrap());
        assert!(matches!(
            ball_contains(&c, &int(0), &p),
            Err(SpecError::NonPositiveRadius(_))
        ));
    }

    #[test]
    fn clearance_examples() {
        let p = point(&["t", "u*t"]);
        assert!(hyperplane_clearance_int(&p, &[1, -1]).unwrap().passed);
        let q = point(&["t", "t + 1/u"]);
        let c = hyperplane_clearance_int(&q, &[1, -1]).unwrap();
        assert!(!c.passed);
        assert_eq!(c.magnitude, Magnitude::Infinitesimal);
        let r = point(&["t", "t^2 + 1/t"]);
        let batch = clearance_batch(&r, 5).unwrap();
        assert!(batch.passed());
        assert_eq!(batch.checked, 11 * 11 - 1);
        assert!(matches!(
            hyperplane_clearance_int(&r, &[0, 0]),
            Err(SpecError::ZeroNormal)
        ));
    }
}
