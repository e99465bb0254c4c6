//! Line search for a point at which every corpus polynomial is infinite.
//!
//! Points `P_i = α + (i−1)·λ·q` are generated along a rational direction
//! `q` drawn from `∩ U_F`. If the search fails, the linear stage
//! `G_m(X, q) = P₀(q) + Σ P_i(q) X_i` of a failing polynomial is finite on
//! the segment, and interpolating it to zero yields a point `C` on an
//! `M`-rational hyperplane at finite distance from `α`: a certificate that
//! `α` does not clear every such hyperplane.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::exact::{ExactError, Fraction, Poly, Rational};
use crate::nabla::{sample_direction, Direction, NablaError, NablaExpansion};
use crate::order::{classify, Magnitude};
use crate::spectrum::{
    ball_contains, clearance_batch, distance_squared, BatchClearance, SpecError, SpecPoint,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Nabla(#[from] NablaError),
    #[error("degree must be at least 1, got {0}")]
    BadDegree(u64),
    #[error("search corpus is empty")]
    EmptyCorpus,
    #[error("corpus polynomial `{0}` is constant")]
    ConstantPolynomial(String),
    #[error("corpus polynomial `{0}` is not over the base ring")]
    NotOverBaseRing(String),
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(Rational),
    #[error("step size must be positive, got {0}")]
    NonPositiveStep(Rational),
    #[error("direction ({direction}) is not in U_F for corpus polynomial {index}")]
    DirectionNotAdmissible { index: usize, direction: Direction },
    #[error("point budget overflows")]
    BudgetOverflow,
    #[error("no infinite point among {points} generated points and no finite linear stage to refute with")]
    Exhausted { points: u64 },
    #[error("linear stage takes equal values at both points")]
    Degenerate,
    #[error("linear stage is not finite at {0}")]
    NotFinite(String),
    #[error("refuter points must be a finite, non-infinitesimal distance apart")]
    BadSeparation,
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

/// Minimal `N` such that any `N` admissible points on a segment contain an
/// `F`-infinite one, for `deg F = degree`.
///
/// With `N₁ = ⌊(N−1)/2⌋`, `N_{i+1} = ⌊(N_i−1)/2⌋` and `N_m ≥ 2` required,
/// the least such `N` is `3·2^m − 1` where `m = degree − 1`. Linear
/// polynomials need two points.
pub fn required_points(degree: u64) -> Result<u64, SearchError> {
    match degree {
        0 => Err(SearchError::BadDegree(0)),
        1 => Ok(2),
        d => {
            let m = d - 1;
            if m > 61 {
                return Err(SearchError::BudgetOverflow);
            }
            Ok((3u64 << m) - 1)
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub alpha: SpecPoint,
    /// Nonconstant polynomials over `M[X̄]`.
    pub corpus: Vec<Poly>,
    pub radius: Rational,
    pub seed: u64,
    /// Sampled from `∩ U_F` when absent.
    pub direction: Option<Direction>,
    /// Overrides the planned step size.
    pub lambda: Option<Rational>,
    /// Overrides the planned point count.
    pub count: Option<u64>,
    /// Bound for the advisory hyperplane-clearance check on `α`.
    pub precheck_bound: u32,
}

impl SearchConfig {
    pub fn new(alpha: SpecPoint, corpus: Vec<Poly>, radius: Rational) -> Self {
        SearchConfig {
            alpha,
            corpus,
            radius,
            seed: 0,
            direction: None,
            lambda: None,
            count: None,
            precheck_bound: 2,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_direction(mut self, q: Direction) -> Self {
        self.direction = Some(q);
        self
    }

    pub fn with_lambda(mut self, lambda: Rational) -> Self {
        self.lambda = Some(lambda);
        self
    }

    pub fn with_count(mut self, count: u64) -> Self {
        self.count = Some(count);
        self
    }

    /// Validates the corpus and builds one expansion per polynomial.
    pub fn expansions(&self) -> Result<Vec<NablaExpansion>, SearchError> {
        if self.corpus.is_empty() {
            return Err(SearchError::EmptyCorpus);
        }
        if !self.radius.is_positive() {
            return Err(SearchError::NonPositiveRadius(self.radius.clone()));
        }
        let ring = self.alpha.ring_vars();
        let n = self.alpha.arity();
        self.corpus
            .iter()
            .map(|f| {
                if !self.alpha.is_over_base_ring(f) {
                    return Err(SearchError::NotOverBaseRing(f.to_string()));
                }
                let f = f.embed(&ring)?;
                match NablaExpansion::new(&f, n) {
                    Err(NablaError::Constant(s)) => Err(SearchError::ConstantPolynomial(s)),
                    other => Ok(other?),
                }
            })
            .collect()
    }

    /// The supplied direction after checking it against every `U_F`, or a
    /// sampled one.
    pub fn resolve_direction(&self, expansions: &[NablaExpansion]) -> Result<Direction, SearchError> {
        match &self.direction {
            Some(q) => {
                for (index, e) in expansions.iter().enumerate() {
                    if !e.contains(q)? {
                        return Err(SearchError::DirectionNotAdmissible {
                            index,
                            direction: q.clone(),
                        });
                    }
                }
                Ok(q.clone())
            }
            None => Ok(sample_direction(expansions, self.seed)?),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plan {
    pub count: u64,
    pub lambda: Rational,
}

/// Point count `Π_j required_points(deg F_j)` and step size
/// `λ = r / (count·(1 + Σ|q_i|))`, which keeps every generated point
/// within distance `r` of `α`.
pub fn plan_points(degrees: &[u64], radius: &Rational, q: &Direction) -> Result<Plan, SearchError> {
    if !radius.is_positive() {
        return Err(SearchError::NonPositiveRadius(radius.clone()));
    }
    let mut count: u64 = 1;
    for &d in degrees {
        count = count
            .checked_mul(required_points(d)?)
            .ok_or(SearchError::BudgetOverflow)?;
    }
    let spread: Rational = q.entries().iter().map(|c| c.abs()).sum::<Rational>() + Rational::one();
    let lambda = radius / (Rational::from_integer(BigInt::from(count)) * spread);
    Ok(Plan { count, lambda })
}

/// `d₀ + Σ d_i X_i` with `d_i ∈ M`: the linear stage of a corpus
/// polynomial along `q`, denominators cleared by the integer `scale`.
#[derive(Clone, Debug)]
pub struct LinearStage {
    pub d0: Poly,
    pub d: Vec<Poly>,
    pub scale: BigInt,
}

impl LinearStage {
    /// Evaluates `(P₀(q), …, Pₙ(q))` and clears denominators. The entries
    /// are returned over the field generators of `alpha`.
    pub fn from_expansion(
        e: &NablaExpansion,
        q: &Direction,
        alpha: &SpecPoint,
    ) -> Result<Self, SearchError> {
        let cols = e.linear_rep_at(q)?;
        let scale = cols
            .iter()
            .fold(BigInt::one(), |acc, p| num_integer::Integer::lcm(&acc, &p.denominator_lcm()));
        let m = Rational::from_integer(scale.clone());
        let gens = alpha.field().generators();
        let mut scaled = cols
            .iter()
            .map(|p| p.scale(&m).embed(gens))
            .collect::<Result<Vec<_>, _>>()?;
        let d0 = scaled.remove(0);
        Ok(LinearStage {
            d0,
            d: scaled,
            scale,
        })
    }

    pub fn from_coefficients(d0: Poly, d: Vec<Poly>) -> Self {
        LinearStage {
            d0,
            d,
            scale: BigInt::one(),
        }
    }

    pub fn value_at(&self, p: &SpecPoint) -> Result<Fraction, SearchError> {
        if self.d.len() != p.arity() {
            return Err(ExactError::ArityMismatch {
                expected: self.d.len(),
                found: p.arity(),
            }
            .into());
        }
        let gens = p.field().generators();
        let mut acc = Fraction::from_poly(self.d0.embed(gens)?);
        for (di, x) in self.d.iter().zip(p.coords()) {
            acc = acc.checked_add(&Fraction::from_poly(di.embed(gens)?).checked_mul(x)?)?;
        }
        Ok(acc)
    }
}

/// A point `C` on the hyperplane `Σ d_i X_i + d₀ = 0` at non-infinite
/// distance from `α`.
#[derive(Clone, Debug)]
pub struct RefutationCertificate {
    pub d0: Poly,
    pub d: Vec<Poly>,
    pub scale: BigInt,
    pub c: SpecPoint,
    /// `Σ d_i c_i + d₀`; always exactly zero.
    pub check_value: Fraction,
    pub distance_squared: Fraction,
    pub clearance: Magnitude,
}

/// Interpolates the linear stage between two points where it is finite
/// and distinct: `C = a + s·(b − a)` with `s = G(a) / (G(a) − G(b))`.
pub fn refute_linear(
    stage: &LinearStage,
    alpha: &SpecPoint,
    a_pt: &SpecPoint,
    b_pt: &SpecPoint,
) -> Result<RefutationCertificate, SearchError> {
    if stage.d.iter().all(Poly::is_zero) {
        return Err(SpecError::ZeroNormal.into());
    }
    let ga = stage.value_at(a_pt)?;
    let gb = stage.value_at(b_pt)?;
    for (g, pt) in [(&ga, a_pt), (&gb, b_pt)] {
        if !classify(g).is_finite() {
            return Err(SearchError::NotFinite(pt.to_string()));
        }
    }
    if classify(&distance_squared(a_pt, b_pt)?) != Magnitude::Finite {
        return Err(SearchError::BadSeparation);
    }
    let gap = ga.checked_sub(&gb)?;
    if gap.is_zero() {
        return Err(SearchError::Degenerate);
    }
    let s = ga.checked_div(&gap)?;
    let coords = a_pt
        .coords()
        .iter()
        .zip(b_pt.coords())
        .map(|(a, b)| a.checked_add(&s.checked_mul(&b.checked_sub(a)?)?))
        .collect::<Result<Vec<_>, _>>()?;
    let c = a_pt.with_coords(coords)?;
    let check_value = stage.value_at(&c)?;
    if !check_value.is_zero() {
        return Err(SearchError::Inconsistent(format!(
            "certificate point misses its hyperplane by {check_value}"
        )));
    }
    let dist = distance_squared(alpha, &c)?;
    let clearance = classify(&dist);
    if clearance == Magnitude::Infinite {
        return Err(SearchError::Inconsistent(
            "certificate point is infinitely far from alpha".to_string(),
        ));
    }
    Ok(RefutationCertificate {
        d0: stage.d0.clone(),
        d: stage.d.clone(),
        scale: stage.scale.clone(),
        c,
        check_value,
        distance_squared: dist,
        clearance,
    })
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub gamma: SpecPoint,
    /// 1-based index of `γ` among the generated points.
    pub index: u64,
    pub values: Vec<Fraction>,
    pub magnitudes: Vec<Magnitude>,
    pub points_generated: u64,
    pub direction: Direction,
    pub lambda: Rational,
    pub count: u64,
    /// `γ` lies in the coordinate ball of radius `r`; guaranteed unless the
    /// step size or count was overridden.
    pub in_ball: bool,
    pub precheck: BatchClearance,
}

#[derive(Clone, Debug)]
pub struct Refutation {
    pub certificate: RefutationCertificate,
    /// Corpus position of the polynomial whose linear stage was used.
    pub poly_index: usize,
    pub a_index: u64,
    pub b_index: u64,
    pub points_generated: u64,
    pub direction: Direction,
    pub lambda: Rational,
    pub count: u64,
    pub precheck: BatchClearance,
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found(SearchReport),
    Refuted(Refutation),
}

/// Resolves the direction and the effective plan (overrides applied).
pub fn prepare(config: &SearchConfig) -> Result<(Vec<NablaExpansion>, Direction, Plan), SearchError> {
    let expansions = config.expansions()?;
    let q = config.resolve_direction(&expansions)?;
    let degrees: Vec<u64> = expansions.iter().map(NablaExpansion::degree).collect();
    let mut plan = plan_points(&degrees, &config.radius, &q)?;
    if let Some(l) = &config.lambda {
        if !l.is_positive() {
            return Err(SearchError::NonPositiveStep(l.clone()));
        }
        plan.lambda = l.clone();
    }
    if let Some(c) = config.count {
        plan.count = c.max(1);
    }
    Ok((expansions, q, plan))
}

pub fn find_infinite_point(config: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    let (expansions, q, plan) = prepare(config)?;
    let alpha = &config.alpha;
    let precheck = clearance_batch(alpha, config.precheck_bound)?;
    let point_at = |i: u64| -> Result<SpecPoint, SearchError> {
        let s = &plan.lambda * Rational::from_integer(BigInt::from(i - 1));
        Ok(alpha.translate(&s, q.entries())?)
    };

    // A polynomial finite at more than deg F points of the line is finite
    // along all of it, so the search cannot succeed past that point.
    let mut finite_hits = vec![0u64; expansions.len()];
    let mut generated = 0;
    'points: for i in 1..=plan.count {
        let p = point_at(i)?;
        generated = i;
        let mut values = Vec::with_capacity(expansions.len());
        let mut magnitudes = Vec::with_capacity(expansions.len());
        for (j, e) in expansions.iter().enumerate() {
            let v = p.value(e.source())?;
            let m = classify(&v);
            if m.is_finite() {
                finite_hits[j] += 1;
            }
            values.push(v);
            magnitudes.push(m);
        }
        if magnitudes.iter().all(|&m| m == Magnitude::Infinite) {
            let in_ball = ball_contains(alpha, &config.radius, &p)?;
            return Ok(SearchOutcome::Found(SearchReport {
                gamma: p,
                index: i,
                values,
                magnitudes,
                points_generated: generated,
                direction: q,
                lambda: plan.lambda,
                count: plan.count,
                in_ball,
                precheck,
            }));
        }
        for (hits, e) in finite_hits.iter().zip(&expansions) {
            if *hits > e.degree() {
                break 'points;
            }
        }
    }

    let a_pt = point_at(1)?;
    let b_pt = point_at(2)?;
    for (j, e) in expansions.iter().enumerate() {
        let stage = LinearStage::from_expansion(e, &q, alpha)?;
        let finite_at = |pt: &SpecPoint| -> Result<bool, SearchError> {
            Ok(classify(&stage.value_at(pt)?).is_finite())
        };
        if finite_at(&a_pt)? && finite_at(&b_pt)? {
            let certificate = refute_linear(&stage, alpha, &a_pt, &b_pt)?;
            return Ok(SearchOutcome::Refuted(Refutation {
                certificate,
                poly_index: j,
                a_index: 1,
                b_index: 2,
                points_generated: generated,
                direction: q,
                lambda: plan.lambda,
                count: plan.count,
                precheck,
            }));
        }
    }
    Err(SearchError::Exhausted { points: generated })
}
