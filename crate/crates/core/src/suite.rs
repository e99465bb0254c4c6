//! Seeded property checks over every module, grouped into families.
//!
//! Each family runs `trials` random cases (the search families run one
//! case per ten trials) and records how many failed. The order families
//! take their comparator from [`SuiteOptions`], so a deliberately broken
//! comparison can be injected to confirm that the suite notices.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::exact::{ExactError, ExponentVector, Fraction, Poly, Rational, Vars};
use crate::nabla::{sample_direction, NablaExpansion};
use crate::order::{check_positive_geq_one, classify, compare, FieldContext, Magnitude};
use crate::random::Sampler;
use crate::search::{find_infinite_point, LinearStage, SearchConfig, SearchOutcome};
use crate::spectrum::{
    ball_contains, distance_squared, hyperplane_clearance, hyperplane_clearance_int,
    is_arithmetical, is_discrete_cone, is_m_discrete_cone, is_transcendental, supp_corpus,
    SpecPoint,
};

pub type Comparator = fn(&Fraction, &Fraction) -> Result<Ordering, ExactError>;

#[derive(Clone, Copy)]
pub struct SuiteOptions {
    pub compare: Comparator,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { compare }
    }
}

/// A comparison with the sign of `y` flipped: it reads the sign of
/// `x + y` instead of `x − y`. Used as a negative control.
pub fn flipped_sign_compare(x: &Fraction, y: &Fraction) -> Result<Ordering, ExactError> {
    let zero = Fraction::zero(x.vars());
    compare(&x.checked_add(y)?, &zero)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyResult {
    pub name: &'static str,
    pub cases: u64,
    pub failures: u64,
    /// Description of the first failing case.
    pub first_failure: Option<String>,
}

impl FamilyResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteSummary {
    pub seed: u64,
    pub trials: u64,
    pub families: Vec<FamilyResult>,
    pub warning: Option<String>,
}

impl SuiteSummary {
    pub fn all_passed(&self) -> bool {
        self.families.iter().all(FamilyResult::passed)
    }

    pub fn family(&self, name: &str) -> Option<&FamilyResult> {
        self.families.iter().find(|f| f.name == name)
    }
}

type Case = fn(&mut Sampler, &SuiteOptions) -> Result<(), String>;

/// Family name, case function, and whether it runs at the reduced rate.
const FAMILIES: &[(&str, Case, bool)] = &[
    ("ring-laws", ring_laws, false),
    ("lex-leading", lex_leading, false),
    ("derivative-rules", derivative_rules, false),
    ("eval-homomorphism", eval_homomorphism, false),
    ("total-order", total_order, false),
    ("order-ring-compatibility", order_ring, false),
    ("classify-thresholds", classify_thresholds, false),
    ("base-ring-discreteness", base_ring_discreteness, false),
    ("generators-infinite", generators_infinite, false),
    ("closed-form", closed_form, false),
    ("sign-persistence", sign_persistence, false),
    ("direction-sampling", direction_sampling, false),
    ("predicate-nesting", predicate_nesting, false),
    ("support-ideal", support_ideal, false),
    ("distance-laws", distance_laws, false),
    ("clearance-scaling", clearance_scaling, false),
    ("search-soundness", search_soundness, true),
    ("certificate-soundness", certificate_soundness, true),
];

pub fn family_names() -> Vec<&'static str> {
    FAMILIES.iter().map(|f| f.0).collect()
}

pub fn run_property_suite(seed: u64, trials: u64) -> SuiteSummary {
    run_property_suite_with(seed, trials, &SuiteOptions::default())
}

pub fn run_property_suite_with(seed: u64, trials: u64, opts: &SuiteOptions) -> SuiteSummary {
    let families = FAMILIES
        .iter()
        .enumerate()
        .map(|(i, &(name, case, reduced))| {
            let cases = if reduced { trials.div_ceil(10) } else { trials };
            run_family(name, case, family_seed(seed, i), cases, opts)
        })
        .collect();
    SuiteSummary {
        seed,
        trials,
        families,
        warning: (trials == 0).then(|| "no trials requested; every family passes vacuously".to_string()),
    }
}

/// Runs a single family by name.
pub fn run_family_named(name: &str, seed: u64, cases: u64, opts: &SuiteOptions) -> Option<FamilyResult> {
    let (i, &(name, case, _)) = FAMILIES.iter().enumerate().find(|(_, f)| f.0 == name)?;
    Some(run_family(name, case, family_seed(seed, i), cases, opts))
}

fn family_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(index as u64)
}

fn run_family(name: &'static str, case: Case, seed: u64, cases: u64, opts: &SuiteOptions) -> FamilyResult {
    let mut s = Sampler::new(seed);
    let mut failures = 0;
    let mut first_failure = None;
    for i in 0..cases {
        if let Err(msg) = case(&mut s, opts) {
            failures += 1;
            first_failure.get_or_insert_with(|| format!("case {i}: {msg}"));
        }
    }
    FamilyResult {
        name,
        cases,
        failures,
        first_failure,
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn ut() -> FieldContext {
    FieldContext::new(&["u", "t"], 0).expect("distinct names")
}

fn ring_laws(s: &mut Sampler, _: &SuiteOptions) -> Result<(), String> {
    let v = Vars::indexed("X", 3);
    let a = s.poly(&v, 4, 3, 9);
    let b = s.poly(&v, 4, 3, 9);
    let c = s.poly(&v, 4, 3, 9);
    let show = || format!("a = {a}, b = {b}, c = {c}");
    ensure(&(&a + &b) + &c == &a + &(&b + &c), || format!("addition not associative: {}", show()))?;
    ensure(&(&a * &b) * &c == &a * &(&b * &c), || format!("multiplication not associative: {}", show()))?;
    ensure(&a + &b == &b + &a, || format!("addition not commutative: {}", show()))?;
    ensure(&a * &b == &b * &a, || format!("multiplication not commutative: {}", show()))?;
    ensure(&a * &(&b + &c) == &(&a * &b) + &(&a * &c), || format!("not distributive: {}", show()))?;
    ensure(&a + &Poly::zero(&v) == a && &a * &Poly::one(&v) == a, || format!("identity fails: {}", show()))?;
    ensure((&a + &(-&a)).is_zero(), || format!("a + (-a) is not zero: {}", show()))
}

fn lex_leading(s: &mut Sampler, _: &SuiteOptions) -> Result<(), String> {
    let v = Vars::indexed("X", 3);
    let p = s.nonzero_poly(&v, 4, 3, 9);
    let q = s.nonzero_poly(&v, 4, 3, 9);
    let (ep, cp) = p.lex_leading().map_err(err)?;
    let (eq, cq) = q.lex_leading().map_err(err)?;
    let pq = &p * &q;
    let (e, c) = pq.lex_leading().map_err(err)?;
    ensure(*e == ep.checked_add(eq).map_err(err)? && *c == cp * cq, || {
        format!("lex_leading({p} * {q}) = ({e}, {c})")
    })
}

fn derivative_rules(s: &mut Sampler, _: &SuiteOptions) -> Result<(), String> {
    let v = Vars::indexed("X", 3);
    let p = s.poly(&v, 4, 3, 9);
    let q = s.poly(&v, 4, 3, 9);
    let i = s.int(0, 2) as usize;
    let d = |f: &Poly| f.partial_derivative(i).map_err(err);
    ensure(d(&(&p + &q))? == &d(&p)? + &d(&q)?, || format!("sum rule fails for {p}, {q}"))?;
    ensure(d(&(&p * &q))? == &(&d(&p)? * &q) + &(&p * &d(&q)?), || {
        format!("product rule fails for {p}, {q} in X{}", i + 1)
    })
}

fn eval_homomorphism(s: &mut Sampler, _: &SuiteOptions) -> Result<(), String> {
    let v = Vars::indexed("X", 3);
    let p = s.poly(&v, 4, 3, 9);
    let q = s.poly(&v, 4, 3, 9);
    let pt = s.rational_vec(3, 7, 5);
    let e = |f: &Poly| f.eval_rational(&pt).map_err(err);
    ensure(e(&(&p + &q))? == e(&p)? + e(&q)?, || format!("eval(p + q) fails for {p}, {q}"))?;
    ensure(e(&(&p * &q))? == e(&p)? * e(&q)?, || format!("eval(p * q) fails for {p}, {q}"))?;

    let field = ut();
    let v2 = Vars::indexed("X", 2);
    let p = s.poly(&v2, 3, 2, 5);
    let q = s.poly(&v2, 3, 2, 5);
    let pt = [s.fraction(field.generators()), s.fraction(field.generators())];
    let e = |f: &Poly| f.eval(&pt).map_err(err);
    let sum = e(&p)?.checked_add(&e(&q)?).map_err(err)?;
    let prod = e(&p)?.checked_mul(&e(&q)?).map_err(err)?;
    ensure(e(&(&p + &q))? == sum, || format!("field eval(p + q) fails for {p}, {q}"))?;
    ensure(e(&(&p * &q))? == prod, || format!("field eval(p * q) fails for {p}, {q}"))
}

/// Draws a field element, sometimes scaled by a generator power so that
/// all magnitudes occur.
fn element(s: &mut Sampler, field: &FieldContext) -> Fraction {
    let x = s.fraction(field.generators());
    let j = s.int(0, field.generators().len() as i64 - 1) as usize;
    let g = field.generator(j).expect("generator index in range");
    match s.int(0, 3) {
        0 => x.checked_mul(&g).expect("shared context"),
        1 => x.checked_div(&g).expect("nonzero generator"),
        _ => x,
    }
}

fn total_order(s: &mut Sampler, opts: &SuiteOptions) -> Result<(), String> {
    let field = ut();
    let x = element(s, &field);
    let y = if s.chance(0.1) { x.clone() } else { element(s, &field) };
    let z = if s.chance(0.1) { y.clone() } else { element(s, &field) };
    let cmp = |a: &Fraction, b: &Fraction| (opts.compare)(a, b).map_err(err);
    for a in [&x, &y, &z] {
        ensure(cmp(a, a)? == Ordering::Equal, || format!("{a} is not equal to itself"))?;
    }
    for (a, b) in [(&x, &y), (&y, &z), (&x, &z)] {
        let ab = cmp(a, b)?;
        ensure(ab == cmp(b, a)?.reverse(), || format!("trichotomy fails for {a}, {b}"))?;
        ensure((ab == Ordering::Equal) == a.value_eq(b), || {
            format!("antisymmetry fails for {a}, {b}")
        })?;
    }
    let triple = [&x, &y, &z];
    for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)] {
        let (a, b, c) = (triple[i], triple[j], triple[k]);
        if cmp(a, b)? != Ordering::Greater && cmp(b, c)? != Ordering::Greater {
            ensure(cmp(a, c)? != Ordering::Greater, || {
                format!("transitivity fails for {a} <= {b} <= {c}")
            })?;
        }
    }
    Ok(())
}

fn positive(s: &mut Sampler, field: &FieldContext, opts: &SuiteOptions) -> Result<Fraction, String> {
    let zero = field.integer(0);
    loop {
        let x = element(s, field);
        match (opts.compare)(&x, &zero).map_err(err)? {
            Ordering::Greater => return Ok(x),
            Ordering::Less => return Ok(-&x),
            Ordering::Equal => continue,
        }
    }
}

fn order_ring(s: &mut Sampler, opts: &SuiteOptions) -> Result<(), String> {
    let field = ut();
    let zero = field.integer(0);
    let x = positive(s, &field, opts)?;
    let y = positive(s, &field, opts)?;
    let sum = x.checked_add(&y).map_err(err)?;
    let prod = x.checked_mul(&y).map_err(err)?;
    ensure((opts.compare)(&sum, &zero).map_err(err)? == Ordering::Greater, || {
        format!("{x} + {y} is not positive")
    })?;
    ensure((opts.compare)(&prod, &zero).map_err(err)? == Ordering::Greater, || {
        format!("{x} * {y} is not positive")
    })
}

fn classify_thresholds(s: &mut Sampler, opts: &SuiteOptions) -> Result<(), String> {
    let field = ut();
    let x = if s.chance(0.05) { field.integer(0) } else { element(s, &field) };
    let cmp = |a: &Fraction, b: &Fraction| (opts.compare)(a, b).map_err(err);
    let zero = field.integer(0);
    let abs = if cmp(&x, &zero)? == Ordering::Less { -&x } else { x.clone() };
    match classify(&x) {
        Magnitude::Zero => ensure(x.is_zero(), || format!("{x} classified zero")),
        Magnitude::Infinite => {
            for n in 1..=50 {
                ensure(cmp(&abs, &field.integer(n))? == Ordering::Greater, || {
                    format!("infinite {x} is not above {n}")
                })?;
            }
            Ok(())
        }
        Magnitude::Infinitesimal => {
            for n in 1..=50 {
                let bound = field.rational(Rational::new(BigInt::one(), BigInt::from(n)));
                ensure(cmp(&abs, &bound)? == Ordering::Less, || {
                    format!("infinitesimal {x} is not below 1/{n}")
                })?;
            }
            Ok(())
        }
        Magnitude::Finite => {
            let (_, cn) = x.numerator().lex_leading().map_err(err)?;
            let (_, cd) = x.denominator().lex_leading().map_err(err)?;
            let c = (cn / cd).abs();
            let two = Rational::from_integer(2.into());
            ensure(cmp(&abs, &field.rational(&c * &two))? == Ordering::Less, || {
                format!("finite {x} is not below {}", &c * &two)
            })?;
            ensure(cmp(&abs, &field.rational(&c / &two))? == Ordering::Greater, || {
                format!("finite {x} is not above {}", &c / &two)
            })
        }
    }
}

fn base_ring_discreteness(s: &mut Sampler, opts: &SuiteOptions) -> Result<(), String> {
    let field = FieldContext::new(&["Y1", "Y2"], 1).expect("distinct names");
    let mut p = s.base_ring_element(&field);
    let x = Fraction::from_poly(p.clone());
    if (opts.compare)(&x, &field.integer(0)).map_err(err)? == Ordering::Less {
        p = -&p;
    }
    let x = Fraction::from_poly(p.clone());
    ensure((opts.compare)(&x, &field.integer(1)).map_err(err)? != Ordering::Less, || {
        format!("0 < {p} < 1")
    })?;
    check_positive_geq_one(&field, &p).map(|_| ()).map_err(err)
}

fn generators_infinite(s: &mut Sampler, opts: &SuiteOptions) -> Result<(), String> {
    let d = s.int(1, 4) as usize;
    let e = s.int(0, d as i64) as usize;
    let field = FieldContext::from_vars(Vars::indexed("g", d), e).map_err(err)?;
    let big = field.integer(1_000_000);
    for j in 0..d {
        let g = field.generator(j).map_err(err)?;
        ensure(classify(&g) == Magnitude::Infinite, || format!("g{} is not infinite", j + 1))?;
        ensure((opts.compare)(&g, &big).map_err(err)? == Ordering::Greater, || {
            format!("g{} is below 10^6", j + 1)
        })?;
        if j > 0 {
            let prev = field.generator(j - 1).map_err(err)?.pow(5).map_err(err)?;
            ensure((opts.compare)(&g, &prev).map_err(err)? == Ordering::Greater, || {
                format!("g{} does not dominate g{}^5", j + 1, j)
            })?;
        }
    }
    Ok(())
}

/// `G_k = k!·[s^k] F(X + sT)` for `k = 1..m`, over the expansion's `X,T`
/// context. Independent of the operator iteration.
pub fn shifted_tower(e: &NablaExpansion) -> Result<Vec<Poly>, ExactError> {
    let n = e.arity();
    let xt = e.xt_vars();
    let shift = Vars::new(&["s__"])?;
    let ctx = xt.concat(&shift)?;
    let s_pos = ctx.len() - 1;
    let sv = Fraction::from_poly(Poly::var(&ctx, s_pos)?);
    let f = e.source();
    let mut point = Vec::with_capacity(f.vars().len());
    for (i, name) in f.vars().names().iter().enumerate() {
        if i < n {
            let x = Fraction::from_poly(Poly::var(&ctx, i)?);
            let t = Fraction::from_poly(Poly::var(&ctx, n + i)?);
            point.push(x.checked_add(&sv.checked_mul(&t)?)?);
        } else {
            let j = ctx.index_of(name).ok_or_else(|| ExactError::UnknownVariable(name.clone()))?;
            point.push(Fraction::from_poly(Poly::var(&ctx, j)?));
        }
    }
    let shifted = f.eval(&point)?.as_poly().expect("polynomial substitution");
    let by_s = shifted.coefficients_in(&[s_pos])?;
    let m = e.depth();
    let mut out = Vec::with_capacity(m);
    let mut fact = Rational::one();
    for k in 1..=m {
        fact *= Rational::from_integer(BigInt::from(k));
        let c = by_s
            .get(&ExponentVector::new(vec![k as u32]))
            .cloned()
            .unwrap_or_else(|| Poly::zero(xt));
        out.push(c.embed(xt)?.scale(&fact));
    }
    Ok(out)
}

fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `b_{v,w} = k!/Π l_i! · Π v_i!/w_i!` with `l = v − w`, `k = |l|`.
pub fn multinomial_b(v: &ExponentVector, w: &ExponentVector) -> Option<Rational> {
    let l = v.checked_sub(w)?;
    let k = l.total_degree() as u32;
    let mut num = factorial(k);
    let mut den = BigInt::one();
    for i in 0..v.len() {
        num *= factorial(v.get(i));
        den *= factorial(l.get(i)) * factorial(w.get(i));
    }
    Some(Rational::new(num, den))
}

/// Σ_w P_{k,w}(T)·X^w over the `X,T` context.
fn reassemble(e: &NablaExpansion, k: usize) -> Result<Poly, ExactError> {
    let xt = e.xt_vars();
    let n = e.arity();
    let mut acc = Poly::zero(xt);
    for (w, p) in e.coeff_table(k).into_iter().flatten() {
        let mut exp = vec![0u32; xt.len()];
        exp[..n].copy_from_slice(w.entries());
        acc = acc.checked_add(&p.embed(xt)?.mul_term(&ExponentVector::new(exp), &Rational::one())?)?;
    }
    Ok(acc)
}

/// Checks one expansion against the shift oracle, the multinomial formula
/// and the degree law.
pub fn check_closed_form(f: &Poly, n: usize) -> Result<(), String> {
    let e = NablaExpansion::new(f, n).map_err(err)?;
    let oracle = shifted_tower(&e).map_err(err)?;
    let m = e.depth();
    let x_positions: Vec<usize> = (0..n).collect();
    for k in 1..=m {
        let g = &e.tower()[k - 1];
        ensure(*g == oracle[k - 1], || format!("G_{k} of {f} is `{g}`, shift oracle gives `{}`", oracle[k - 1]))?;
        let r = reassemble(&e, k).map_err(err)?;
        ensure(r == *g, || format!("closed form of G_{k} for {f} is `{r}`, iteration gives `{g}`"))?;
        for ((v, w), b) in e.b_coefficients(k).into_iter().flatten() {
            let expected = multinomial_b(v, w);
            ensure(expected.as_ref() == Some(b), || {
                format!("b_{{{v},{w}}} = {b} at level {k}, formula gives {expected:?}")
            })?;
        }
        let want = (m - k + 1) as u64;
        ensure(!g.is_zero() && g.degree_in(&x_positions) == Some(want), || {
            format!("deg_X G_{k} of {f} is {:?}, expected {want}", g.degree_in(&x_positions))
        })?;
    }
    Ok(())
}

/// A random `F` over `X1..Xn` with `2 ≤ deg F ≤ max_deg`.
pub fn random_nonlinear(s: &mut Sampler, n: usize, max_deg: u32) -> Poly {
    let v = Vars::indexed("X", n);
    loop {
        let f = s.nonconstant_poly(&v, n, 5, max_deg, 9);
        if f.total_degree().unwrap_or(0) >= 2 {
            return f;
        }
    }
}

fn closed_form(s: &mut Sampler, _: &SuiteOptions) -> Result<(), String> {
    let n = s.int(1, 3) as usize;
    let f = random_nonlinear(s, n, 4);
    check_closed_form(&f, n)
}

fn sign_persistence(s: &mut Sampler, _: &SuiteOptions) -> Result<(), String> {
    let n = s.int(1, 3) as usize;
    let v = Vars::indexed("X", n);
    let a = s.nonzero_int(9);
    let mut exp = vec![0u32; n];
    for _ in 0..s.int(2, 4) {
        exp[s.int(0, n as i64 - 1) as usize] += 1;
    }
    let f = Poly::monomial(&v, ExponentVector::new(exp), Rational::from_integer(a.into()));
    let e = NablaExpansion::new(&f, n).map_err(err)?;
    for k in 1..=e.depth() {
        for (_, b) in e.b_coefficients(k).into_iter().flatten() {
            ensure(b.is_positive(), || format!("b = {b} for {f} at level {k}"))?;
        }
        for (w, p) in e.coeff_table(k).into_iter().flatten() {
            for (_, c) in p.terms() {
                ensure(c.signum() == Rational::from_integer(a.signum().into()), || {
                    format!("P_{{{k},{w}}} of {f} has coefficient {c}")
                })?;
            }
        }
    }
    Ok(())
}

fn direction_sampling(s: &mut Sampler, _: &SuiteOptions) -> Result<(), String> {
    let n = s.int(1, 3) as usize;
    let v = Vars::indexed("X", n);
    let count = s.int(1, 3);
    let expansions = (0..count)
        .map(|_| NablaExpansion::new(&s.nonconstant_poly(&v, n, 4, 3, 9), n))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    let seed = s.int(0, i64::MAX) as u64;
    let q = sample_direction(&expansions, seed).map_err(err)?;
    ensure(!q.is_zero(), || "sampled the zero direction".to_string())?;
    for e in &expansions {
        let ok = e.membership_u1(&q).map_err(err)? && e.membership_u2(&q).map_err(err)?;
        ensure(ok, || format!("({q}) is not in U_F for {}", e.source()))?;
    }
    Ok(())
}

/// A point and corpus for the predicate families.
fn point_and_corpus(s: &mut Sampler) -> (SpecPoint, Vec<Poly>) {
    let field = FieldContext::new(&["u", "t"], s.int(0, 1) as usize).expect("distinct names");
    let n = s.int(1, 3) as usize;
    let p = s.spec_point(&field, n);
    let size = s.int(1, 5) as usize;
    let corpus = s.corpus(&p, size, 2, true);
    (p, corpus)
}

fn predicate_nesting(s: &mut Sampler, _: &SuiteOptions) -> Result<(), String> {
    let (p, corpus) = point_and_corpus(s);
    let t = is_transcendental(&p, &corpus).map_err(err)?.passed;
    let a = is_arithmetical(&p, &corpus).map_err(err)?.passed;
    let m = is_m_discrete_cone(&p, &corpus).map_err(err)?.passed;
    let d = is_discrete_cone(&p, &corpus).map_err(err)?.passed;
    ensure((!t || a) && (!a || m) && (!m || d), || {
        format!("chain broken at {p}: transcendental {t}, arithmetical {a}, m-discrete {m}, discrete {d}")
    })
}

fn support_ideal(s: &mut Sampler, _: &SuiteOptions) -> Result<(), String> {
    let (p, corpus) = point_and_corpus(s);
    let supp = supp_corpus(&p, &corpus).map_err(err)?;
    let ring = p.ring_vars();
    for &i in &supp {
        for &j in &supp {
            let sum = &corpus[i] + &corpus[j];
            ensure(p.value(&sum).map_err(err)?.is_zero(), || format!("f + g leaves the support at {p}"))?;
        }
        let h = s.poly(&ring, 3, 2, 5);
        let hf = &h * &corpus[i];
        ensure(p.value(&hf).map_err(err)?.is_zero(), || format!("h * f leaves the support at {p}"))?;
    }
    for (i, f) in corpus.iter().enumerate() {
        if corpus.iter().enumerate().any(|(j, g)| supp.contains(&j) && g == f) {
            ensure(supp.contains(&i), || format!("duplicate of a support element is missing at {p}"))?;
        }
    }
    Ok(())
}

fn distance_laws(s: &mut Sampler, _: &SuiteOptions) -> Result<(), String> {
    let field = ut();
    let n = s.int(1, 3) as usize;
    let p = s.spec_point(&field, n);
    let q = if s.chance(0.1) { p.clone() } else { s.spec_point(&field, n) };
    let r = s.spec_point(&field, n);
    let d = |a: &SpecPoint, b: &SpecPoint| distance_squared(a, b).map_err(err);
    ensure(d(&p, &q)? == d(&q, &p)?, || format!("distance is not symmetric for {p}, {q}"))?;
    ensure(d(&p, &p)?.is_zero(), || format!("d({p}, {p}) is not zero"))?;
    let same = p.coords().iter().zip(q.coords()).all(|(a, b)| a.value_eq(b));
    ensure(d(&p, &q)?.is_zero() == same, || format!("distance zero mismatch for {p}, {q}"))?;

    // d(p,r) ≤ d(p,q) + d(q,r) + 2·sqrt(d(p,q)·d(q,r)), squared out.
    let a = d(&p, &r)?;
    let b = d(&p, &q)?;
    let c = d(&q, &r)?;
    let gap = a.checked_sub(&b).and_then(|x| x.checked_sub(&c)).map_err(err)?;
    let zero = field.integer(0);
    if compare(&gap, &zero).map_err(err)? == Ordering::Greater {
        let lhs = gap.checked_mul(&gap).map_err(err)?;
        let rhs = b.checked_mul(&c).map_err(err)?.scale(&Rational::from_integer(4.into()));
        ensure(compare(&lhs, &rhs).map_err(err)? != Ordering::Greater, || {
            format!("triangle inequality fails for {p}, {q}, {r}")
        })?;
    }
    Ok(())
}

fn clearance_scaling(s: &mut Sampler, _: &SuiteOptions) -> Result<(), String> {
    let field = ut();
    let n = s.int(1, 3) as usize;
    let p = if s.chance(0.5) { s.clearance_point(&field, n) } else { s.spec_point(&field, n) };
    let mut a: Vec<i64> = (0..n).map(|_| s.int(-3, 3)).collect();
    if a.iter().all(|&x| x == 0) {
        a[0] = 1;
    }
    let k = s.nonzero_int(5);
    let ka: Vec<i64> = a.iter().map(|x| x * k).collect();
    let c1 = hyperplane_clearance_int(&p, &a).map_err(err)?;
    let c2 = hyperplane_clearance_int(&p, &ka).map_err(err)?;
    ensure(c1.passed == c2.passed && c1.magnitude == c2.magnitude, || {
        format!("clearance of {p} changes when scaling {a:?} by {k}")
    })
}

fn search_soundness(s: &mut Sampler, _: &SuiteOptions) -> Result<(), String> {
    let field = ut();
    let n = s.int(1, 3) as usize;
    let alpha = s.clearance_point(&field, n);
    let size = s.int(1, 3) as usize;
    let corpus = s.corpus(&alpha, size, 2, false);
    let r = s.rational(9, 4).abs() + Rational::new(BigInt::one(), BigInt::from(2));
    let cfg = SearchConfig::new(alpha.clone(), corpus.clone(), r.clone()).with_seed(s.int(0, 1000) as u64);
    match find_infinite_point(&cfg).map_err(err)? {
        SearchOutcome::Found(rep) => verify_report(&alpha, &corpus, &r, &rep),
        SearchOutcome::Refuted(_) => Err(format!("clearing point {alpha} was refuted")),
    }
}

/// Independent re-check of a search report.
pub fn verify_report(
    alpha: &SpecPoint,
    corpus: &[Poly],
    r: &Rational,
    rep: &crate::search::SearchReport,
) -> Result<(), String> {
    for f in corpus {
        let v = rep.gamma.value(f).map_err(err)?;
        ensure(classify(&v) == Magnitude::Infinite, || format!("{f} is {v} at {}", rep.gamma))?;
    }
    ensure(ball_contains(alpha, r, &rep.gamma).map_err(err)?, || {
        format!("{} is outside the ball of radius {r}", rep.gamma)
    })?;
    ensure(rep.index >= 1 && rep.index <= rep.count, || format!("index {} beyond count {}", rep.index, rep.count))?;
    ensure(is_transcendental(&rep.gamma, corpus).map_err(err)?.passed, || {
        format!("{} is not transcendental on the corpus", rep.gamma)
    })
}

fn certificate_soundness(s: &mut Sampler, _: &SuiteOptions) -> Result<(), String> {
    let field = ut();
    let x1 = s.clearance_point(&field, 1).coords()[0].clone();
    let a = s.int(-3, 3);
    let b = s.rational(5, 2);
    let mut eps = s.infinitesimal(&field);
    if eps.is_zero() {
        eps = field.generator(1).map_err(err)?.recip().map_err(err)?;
    }
    let x2 = x1
        .scale(&Rational::from_integer(a.into()))
        .checked_add(&field.rational(b.clone()))
        .and_then(|x| x.checked_add(&eps))
        .map_err(err)?;
    let alpha = SpecPoint::new(field.clone(), vec![x1, x2]).map_err(err)?;
    let ring = alpha.ring_vars();
    let lin = &(&Poly::var(&ring, 1).map_err(err)? - &Poly::var(&ring, 0).map_err(err)?.scale(&Rational::from_integer(a.into())))
        - &Poly::constant(&ring, b);
    let lin = lin.scale(&Rational::from_integer(lin.denominator_lcm()));
    let f = if s.chance(0.5) { lin.clone() } else { &lin * &lin };
    let cfg = SearchConfig::new(alpha.clone(), vec![f.clone()], Rational::one());
    let SearchOutcome::Refuted(refutation) = find_infinite_point(&cfg).map_err(err)? else {
        return Err(format!("{f} reported infinite near {alpha}"));
    };
    let cert = &refutation.certificate;
    ensure(cert.check_value.is_zero(), || format!("check value {}", cert.check_value))?;
    ensure(cert.d.iter().any(|d| !d.is_zero()), || "zero normal".to_string())?;
    ensure(cert.clearance != Magnitude::Infinite, || "certificate point is infinitely far".to_string())?;
    let stage = LinearStage::from_coefficients(cert.d0.clone(), cert.d.clone());
    ensure(stage.value_at(&cert.c).map_err(err)?.is_zero(), || "C is off its hyperplane".to_string())?;
    let c = hyperplane_clearance(&alpha, &cert.d).map_err(err)?;
    ensure(!c.passed, || format!("{alpha} clears the certificate normal"))?;
    Ok(())
}
