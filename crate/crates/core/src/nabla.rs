//! The operator tower `G_k = (∇ᵏ·T)F`, its coefficient table, and the
//! Zariski-open direction sets the search samples from.
//!
//! Polynomials here carry three blocks of variables: the coordinates
//! `X1..Xn`, the direction `T1..Tn`, and trailing coefficient variables
//! (generators of the base ring) which the operators treat as constants.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exact::{ExactError, ExponentVector, Poly, Rational, Vars};

/// Give up on direction sampling after this many candidates.
pub const MAX_DIRECTION_TRIES: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NablaError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("polynomial `{0}` is constant in the coordinates")]
    Constant(String),
    #[error("degree {0} polynomial: use the linear path")]
    Linear(u64),
    #[error("tower depth {m} requires degree {expected}, polynomial has degree {found}")]
    DegreeMismatch { m: usize, expected: u64, found: u64 },
    #[error("closed form and iterated operator disagree at k = {k}: {detail}")]
    Inconsistent { k: usize, detail: String },
    #[error("expansions disagree on the number of coordinates ({0} vs {1})")]
    ArityMismatch(usize, usize),
    #[error("no expansions supplied")]
    NoExpansions,
    #[error("no admissible direction among {0} candidates")]
    NoDirection(usize),
    #[error("invalid direction `{0}`")]
    BadDirection(String),
}

/// A rational direction vector `q ∈ ℚⁿ`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Direction(Vec<Rational>);

impl Direction {
    pub fn new(q: Vec<Rational>) -> Self {
        Direction(q)
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }
}

impl FromStr for Direction {
    type Err = NablaError;

    /// Comma separated rationals, e.g. `1, -2/3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split(',')
            .map(|part| {
                Rational::from_str(part.trim()).map_err(|_| NablaError::BadDirection(s.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Direction)
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// `Σ_i (∂H/∂X_i)·T_i` for `H` over `X1..Xn, T1..Tn, …`.
pub fn nabla_dot(h: &Poly, n: usize) -> Result<Poly, ExactError> {
    if h.vars().len() < 2 * n {
        return Err(ExactError::ArityMismatch {
            expected: 2 * n,
            found: h.vars().len(),
        });
    }
    let mut acc = Poly::zero(h.vars());
    for i in 0..n {
        let d = h.partial_derivative(i)?;
        if d.is_zero() {
            continue;
        }
        acc = acc.checked_add(&d.mul_term(&ExponentVector::unit(h.vars().len(), n + i), &Rational::one())?)?;
    }
    Ok(acc)
}

/// The tower `G₁,…,G_m` of a polynomial `F` of degree `m+1` together with
/// its coefficient table and the linear representation of `G_m`.
///
/// For a linear `F` the tower is empty and the linear representation is
/// `F` itself.
#[derive(Clone, Debug)]
pub struct NablaExpansion {
    source: Poly,
    n: usize,
    degree: u64,
    xt_vars: Vars,
    t_vars: Vars,
    tower: Vec<Poly>,
    /// `coeff_table[k-1][w] = P_{k,w}(T)`, including the `w = 0` column.
    coeff_table: Vec<BTreeMap<ExponentVector, Poly>>,
    /// `b_table[k-1][(v, w)] = b_{v,w}`.
    b_table: Vec<BTreeMap<(ExponentVector, ExponentVector), Rational>>,
    linear_rep: Vec<Poly>,
}

fn t_block(n: usize) -> Vars {
    Vars::indexed("T", n)
}

impl NablaExpansion {
    /// Expands a polynomial whose first `n` variables are the coordinates.
    /// Any further variables are coefficients.
    pub fn new(source: &Poly, n: usize) -> Result<Self, NablaError> {
        let vars = source.vars();
        if vars.len() < n {
            return Err(ExactError::ArityMismatch {
                expected: n,
                found: vars.len(),
            }
            .into());
        }
        let x_positions: Vec<usize> = (0..n).collect();
        let degree = source.degree_in(&x_positions).unwrap_or(0);
        if degree == 0 {
            return Err(NablaError::Constant(source.to_string()));
        }
        let coeff_vars = vars.slice(n, vars.len());
        let t_vars = t_block(n).concat(&coeff_vars)?;
        let xt_vars = vars.slice(0, n).concat(&t_vars)?;
        let mut e = NablaExpansion {
            source: source.clone(),
            n,
            degree,
            xt_vars,
            t_vars,
            tower: Vec::new(),
            coeff_table: Vec::new(),
            b_table: Vec::new(),
            linear_rep: Vec::new(),
        };
        if degree == 1 {
            let by_x = source.coefficients_in(&x_positions)?;
            e.linear_rep = e.linear_columns(&by_x, |p| p.embed(&e.t_vars))?;
        } else {
            e.expand((degree - 1) as usize)?;
        }
        Ok(e)
    }

    /// Columns `w = 0, e₁, …, eₙ` of a degree-one table.
    fn linear_columns(
        &self,
        table: &BTreeMap<ExponentVector, Poly>,
        lift: impl Fn(&Poly) -> Result<Poly, ExactError>,
    ) -> Result<Vec<Poly>, NablaError> {
        let mut cols = Vec::with_capacity(self.n + 1);
        let keys = std::iter::once(ExponentVector::zero(self.n))
            .chain((0..self.n).map(|i| ExponentVector::unit(self.n, i)));
        for w in keys {
            cols.push(match table.get(&w) {
                Some(p) => lift(p)?,
                None => Poly::zero(&self.t_vars),
            });
        }
        Ok(cols)
    }

    fn expand(&mut self, m: usize) -> Result<(), NablaError> {
        let n = self.n;
        let x_positions: Vec<usize> = (0..n).collect();
        let t_positions: Vec<usize> = (n..2 * n).collect();

        // Route 1: iterate the operator on F.
        let mut g = self.source.embed(&self.xt_vars)?;
        for _ in 0..m {
            g = nabla_dot(&g, n)?;
            self.tower.push(g.clone());
        }

        // Route 2: differentiate each monic monomial X^v separately, read off
        // b_{v,w}, and assemble P_{k,w}(T) = Σ_v a_v b_{v,w} T^{v-w}.
        let by_v = self.source.coefficients_in(&x_positions)?;
        let mut tables: Vec<BTreeMap<ExponentVector, Poly>> = vec![BTreeMap::new(); m];
        let mut b_tables: Vec<BTreeMap<(ExponentVector, ExponentVector), Rational>> =
            vec![BTreeMap::new(); m];
        for (v, a_v) in &by_v {
            if v.is_zero() {
                continue;
            }
            let a_t = a_v.embed(&self.t_vars)?;
            let mut exp = vec![0u32; self.xt_vars.len()];
            exp[..n].copy_from_slice(v.entries());
            let mut mono = Poly::monomial(&self.xt_vars, ExponentVector::new(exp), Rational::one());
            for k in 1..=m {
                mono = nabla_dot(&mono, n)?;
                for (e, b) in mono.terms() {
                    let w = e.project(&x_positions);
                    let l = e.project(&t_positions);
                    if w.checked_add(&l)? != *v {
                        return Err(NablaError::Inconsistent {
                            k,
                            detail: format!("term with w = {w}, l = {l} from v = {v}"),
                        });
                    }
                    b_tables[k - 1].insert((v.clone(), w.clone()), b.clone());
                    let mut t_exp = vec![0u32; self.t_vars.len()];
                    t_exp[..n].copy_from_slice(l.entries());
                    let contrib = a_t.mul_term(&ExponentVector::new(t_exp), b)?;
                    let slot = tables[k - 1]
                        .entry(w)
                        .or_insert_with(|| Poly::zero(&self.t_vars));
                    *slot = slot.checked_add(&contrib)?;
                }
            }
        }
        for table in &mut tables {
            table.retain(|_, p| !p.is_zero());
        }

        for k in 1..=m {
            let g_k = &self.tower[k - 1];
            let mut reassembled = Poly::zero(&self.xt_vars);
            for (w, p) in &tables[k - 1] {
                let mut x_exp = vec![0u32; self.xt_vars.len()];
                x_exp[..n].copy_from_slice(w.entries());
                let term = p
                    .embed(&self.xt_vars)?
                    .mul_term(&ExponentVector::new(x_exp), &Rational::one())?;
                reassembled = reassembled.checked_add(&term)?;
            }
            if &reassembled != g_k {
                return Err(NablaError::Inconsistent {
                    k,
                    detail: format!("iterated `{g_k}` vs closed form `{reassembled}`"),
                });
            }
            let expected = (m - k + 1) as u64;
            let found = g_k.degree_in(&x_positions);
            if g_k.is_zero() || found != Some(expected) {
                return Err(NablaError::Inconsistent {
                    k,
                    detail: format!("deg_X G_k = {found:?}, expected {expected}"),
                });
            }
        }

        self.linear_rep = self.linear_columns(&tables[m - 1], |p| Ok(p.clone()))?;
        if self.linear_rep[1..].iter().all(Poly::is_zero) {
            return Err(NablaError::Inconsistent {
                k: m,
                detail: "G_m has no linear part".to_string(),
            });
        }
        self.coeff_table = tables;
        self.b_table = b_tables;
        Ok(())
    }

    pub fn source(&self) -> &Poly {
        &self.source
    }

    /// Number of coordinates `n`.
    pub fn arity(&self) -> usize {
        self.n
    }

    /// `deg_X F`.
    pub fn degree(&self) -> u64 {
        self.degree
    }

    /// `m = deg F − 1`, the tower depth.
    pub fn depth(&self) -> usize {
        (self.degree - 1) as usize
    }

    /// `X1..Xn, T1..Tn` followed by the coefficient variables.
    pub fn xt_vars(&self) -> &Vars {
        &self.xt_vars
    }

    /// `T1..Tn` followed by the coefficient variables.
    pub fn t_vars(&self) -> &Vars {
        &self.t_vars
    }

    /// `G₁,…,G_m`.
    pub fn tower(&self) -> &[Poly] {
        &self.tower
    }

    /// `P_{k,w}(T)` for every `w` with a nonzero coefficient in `G_k`,
    /// including `w = 0`.
    pub fn coeff_table(&self, k: usize) -> Option<&BTreeMap<ExponentVector, Poly>> {
        k.checked_sub(1).and_then(|i| self.coeff_table.get(i))
    }

    /// `b_{v,w}` at level `k`, keyed by `(v, w)`.
    pub fn b_coefficients(&self, k: usize) -> Option<&BTreeMap<(ExponentVector, ExponentVector), Rational>> {
        k.checked_sub(1).and_then(|i| self.b_table.get(i))
    }

    /// `(P₀, P₁, …, Pₙ)` with `G_m = P₀ + Σ P_i X_i` (or `F` itself when
    /// linear).
    pub fn linear_rep(&self) -> &[Poly] {
        &self.linear_rep
    }

    fn at(&self, p: &Poly, q: &Direction) -> Result<Poly, ExactError> {
        let positions: Vec<usize> = (0..self.n).collect();
        p.specialize(&positions, q.entries())
    }

    /// `(P₀(q), …, Pₙ(q))`, over the coefficient variables.
    pub fn linear_rep_at(&self, q: &Direction) -> Result<Vec<Poly>, ExactError> {
        self.linear_rep.iter().map(|p| self.at(p, q)).collect()
    }

    /// `P_{k,w}(q) ≠ 0` for every level and every nonzero `w`.
    pub fn membership_u1(&self, q: &Direction) -> Result<bool, ExactError> {
        self.check_len(q)?;
        for table in &self.coeff_table {
            for (w, p) in table {
                if !w.is_zero() && self.at(p, q)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `Σ q_i P_i(q) ≠ 0`.
    pub fn membership_u2(&self, q: &Direction) -> Result<bool, ExactError> {
        self.check_len(q)?;
        let cols = self.linear_rep_at(q)?;
        let mut acc = Poly::zero(cols[0].vars());
        for (qi, p) in q.entries().iter().zip(&cols[1..]) {
            acc = acc.checked_add(&p.scale(qi))?;
        }
        Ok(!acc.is_zero())
    }

    pub fn contains(&self, q: &Direction) -> Result<bool, ExactError> {
        Ok(self.membership_u1(q)? && self.membership_u2(q)?)
    }

    fn check_len(&self, q: &Direction) -> Result<(), ExactError> {
        if q.len() != self.n {
            return Err(ExactError::ArityMismatch {
                expected: self.n,
                found: q.len(),
            });
        }
        Ok(())
    }
}

/// Builds the tower for `deg F = m + 1 ≥ 2`.
pub fn build_tower(f: &Poly, n: usize, m: usize) -> Result<NablaExpansion, NablaError> {
    let positions: Vec<usize> = (0..n.min(f.vars().len())).collect();
    let found = f.degree_in(&positions).unwrap_or(0);
    if found == 0 {
        return Err(NablaError::Constant(f.to_string()));
    }
    if found == 1 {
        return Err(NablaError::Linear(1));
    }
    if found != m as u64 + 1 {
        return Err(NablaError::DegreeMismatch {
            m,
            expected: m as u64 + 1,
            found,
        });
    }
    NablaExpansion::new(f, n)
}

/// Rationals `a/b` in lowest terms with `max(|a|, b) ≤ h`.
fn rationals_of_height(h: i64) -> Vec<Rational> {
    let mut out = vec![Rational::zero()];
    for b in 1..=h {
        for a in 1..=h {
            if num_integer::gcd(a, b) == 1 {
                let r = crate::exact::rat(a, b);
                out.push(r.clone());
                out.push(-r);
            }
        }
    }
    out
}

fn height(r: &Rational) -> num_bigint::BigInt {
    use num_traits::Signed;
    r.numer().abs().max(r.denom().clone())
}

/// Samples a rational direction in `U_{F₁} ∩ … ∩ U_{F_l}`.
///
/// Candidates are enumerated in layers of increasing height (the largest
/// numerator or denominator among the entries); each layer is shuffled
/// with a ChaCha stream seeded by `seed`.
pub fn sample_direction(expansions: &[NablaExpansion], seed: u64) -> Result<Direction, NablaError> {
    let n = expansions.first().ok_or(NablaError::NoExpansions)?.arity();
    if let Some(e) = expansions.iter().find(|e| e.arity() != n) {
        return Err(NablaError::ArityMismatch(n, e.arity()));
    }
    if n == 0 {
        return Err(NablaError::NoDirection(0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tried = 0usize;
    for h in 1i64.. {
        let values = rationals_of_height(h);
        let hb = num_bigint::BigInt::from(h);
        let mut layer: Vec<Vec<Rational>> = vec![Vec::new()];
        for _ in 0..n {
            layer = layer
                .into_iter()
                .flat_map(|prefix| {
                    values.iter().map(move |v| {
                        let mut next = prefix.clone();
                        next.push(v.clone());
                        next
                    })
                })
                .collect();
            if layer.len() > MAX_DIRECTION_TRIES * 4 {
                return Err(NablaError::NoDirection(tried));
            }
        }
        layer.retain(|q| q.iter().any(|c| height(c) == hb));
        layer.shuffle(&mut rng);
        for q in layer {
            let q = Direction(q);
            if q.is_zero() {
                continue;
            }
            tried += 1;
            if tried > MAX_DIRECTION_TRIES {
                return Err(NablaError::NoDirection(MAX_DIRECTION_TRIES));
            }
            let mut ok = true;
            for e in expansions {
                if !e.contains(&q)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(q);
            }
        }
    }
    unreachable!("height loop is unbounded")
}
