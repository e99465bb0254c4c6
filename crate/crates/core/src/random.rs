//! Seeded generators for polynomials, field elements, points and corpora.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{ExponentVector, Fraction, Poly, Rational, Vars};
use crate::order::FieldContext;
use crate::spectrum::SpecPoint;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn nonzero_int(&mut self, bound: i64) -> i64 {
        let x = self.rng.gen_range(1..=bound);
        if self.rng.gen_bool(0.5) {
            -x
        } else {
            x
        }
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn rational(&mut self, num_bound: i64, den_bound: i64) -> Rational {
        let n = self.int(-num_bound, num_bound);
        let d = self.int(1, den_bound);
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    pub fn rational_vec(&mut self, n: usize, num_bound: i64, den_bound: i64) -> Vec<Rational> {
        (0..n).map(|_| self.rational(num_bound, den_bound)).collect()
    }

    /// An exponent vector over the given positions with total degree at
    /// most `max_deg`; other entries are zero.
    fn exponent(&mut self, len: usize, positions: &[usize], max_deg: u32) -> ExponentVector {
        let mut e = vec![0u32; len];
        if positions.is_empty() {
            return ExponentVector::new(e);
        }
        let d = self.rng.gen_range(0..=max_deg);
        for _ in 0..d {
            let i = *positions.choose(&mut self.rng).expect("nonempty");
            e[i] += 1;
        }
        ExponentVector::new(e)
    }

    /// Integer coefficients in `[−coeff_bound, coeff_bound]`, up to
    /// `max_terms` terms, each of total degree `≤ max_deg`. May be zero.
    pub fn poly(&mut self, vars: &Vars, max_terms: usize, max_deg: u32, coeff_bound: i64) -> Poly {
        let positions: Vec<usize> = (0..vars.len()).collect();
        self.poly_in(vars, &positions, max_terms, max_deg, coeff_bound)
    }

    /// Like [`Sampler::poly`] but only the variables at `positions` occur.
    pub fn poly_in(
        &mut self,
        vars: &Vars,
        positions: &[usize],
        max_terms: usize,
        max_deg: u32,
        coeff_bound: i64,
    ) -> Poly {
        let k = self.rng.gen_range(1..=max_terms.max(1));
        let terms: Vec<(ExponentVector, Rational)> = (0..k)
            .map(|_| {
                let e = self.exponent(vars.len(), positions, max_deg);
                let c = self.int(-coeff_bound, coeff_bound);
                (e, Rational::from_integer(BigInt::from(c)))
            })
            .collect();
        Poly::from_terms(vars, terms)
    }

    pub fn nonzero_poly(&mut self, vars: &Vars, max_terms: usize, max_deg: u32, coeff_bound: i64) -> Poly {
        loop {
            let p = self.poly(vars, max_terms, max_deg, coeff_bound);
            if !p.is_zero() {
                return p;
            }
        }
    }

    /// A polynomial of `X`-degree between 1 and `max_deg` over `vars`, whose
    /// first `n` variables are coordinates and the rest coefficients.
    pub fn nonconstant_poly(&mut self, vars: &Vars, n: usize, max_terms: usize, max_deg: u32, coeff_bound: i64) -> Poly {
        let x_positions: Vec<usize> = (0..n).collect();
        loop {
            let p = self.poly(vars, max_terms, max_deg, coeff_bound);
            if p.degree_in(&x_positions).unwrap_or(0) >= 1 {
                return p;
            }
        }
    }

    pub fn fraction(&mut self, vars: &Vars) -> Fraction {
        let num = self.poly(vars, 3, 2, 5);
        let den = self.nonzero_poly(vars, 2, 2, 4);
        Fraction::new(num, den).expect("nonzero denominator")
    }

    pub fn nonzero_fraction(&mut self, vars: &Vars) -> Fraction {
        loop {
            let x = self.fraction(vars);
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// A nonzero element of `M` over the field generators.
    pub fn base_ring_element(&mut self, field: &FieldContext) -> Poly {
        let positions: Vec<usize> = (0..field.base_cutoff()).collect();
        loop {
            let p = self.poly_in(field.generators(), &positions, 4, 4, 9);
            if !p.is_zero() {
                return p;
            }
        }
    }

    /// An infinitesimal (or zero) element: a small rational over a positive
    /// monomial in the generators.
    pub fn infinitesimal(&mut self, field: &FieldContext) -> Fraction {
        let gens = field.generators();
        let positions: Vec<usize> = (0..gens.len()).collect();
        let mut den = ExponentVector::zero(gens.len());
        while den.is_zero() {
            den = self.exponent(gens.len(), &positions, 2);
        }
        let c = self.rational(5, 3);
        Fraction::new(
            Poly::constant(gens, c),
            Poly::monomial(gens, den, Rational::from_integer(1.into())),
        )
        .expect("monomial denominator")
    }

    /// Coordinates `x_i = m_i + c_i + ε_i`: distinct nonconstant monomials
    /// `m_i` in the generators, rationals `c_i` and infinitesimals `ε_i`.
    /// Any nonzero integer combination `Σ a_i x_i` keeps its largest `m_i`
    /// as lex-leading term, so the point clears every hyperplane over `ℤ`.
    pub fn clearance_point(&mut self, field: &FieldContext, n: usize) -> SpecPoint {
        let gens = field.generators();
        let positions: Vec<usize> = (0..gens.len()).collect();
        let mut used: Vec<ExponentVector> = Vec::new();
        let mut coords = Vec::with_capacity(n);
        while coords.len() < n {
            let e = self.exponent(gens.len(), &positions, 3);
            if e.is_zero() || used.contains(&e) {
                continue;
            }
            used.push(e.clone());
            let mono = Fraction::from_poly(Poly::monomial(gens, e, Rational::from_integer(1.into())));
            let c = field.rational(self.rational(9, 4));
            let eps = self.infinitesimal(field);
            let x = mono
                .checked_add(&c)
                .and_then(|x| x.checked_add(&eps))
                .expect("shared context");
            coords.push(x);
        }
        SpecPoint::new(field.clone(), coords).expect("coordinates over the field")
    }

    /// A point with a mix of rational, base-ring and general coordinates.
    pub fn spec_point(&mut self, field: &FieldContext, n: usize) -> SpecPoint {
        let coords = (0..n)
            .map(|_| match self.int(0, 3) {
                0 => field.rational(self.rational(5, 3)),
                1 if field.base_cutoff() > 0 => Fraction::from_poly(self.base_ring_element(field)),
                _ => self.fraction(field.generators()),
            })
            .collect();
        SpecPoint::new(field.clone(), coords).expect("coordinates over the field")
    }

    /// Nonzero polynomials over `M[X̄]` for the given point. When
    /// `vanishing` is set, some entries are built to vanish at the point
    /// where a coordinate is rational.
    pub fn corpus(&mut self, p: &SpecPoint, size: usize, max_deg: u32, vanishing: bool) -> Vec<Poly> {
        let ring = p.ring_vars();
        let n = p.arity();
        let mut out = Vec::with_capacity(size);
        while out.len() < size {
            if vanishing && self.chance(0.3) {
                let i = self.rng.gen_range(0..n);
                if let Some(c) = p.coords()[i].as_rational() {
                    // (den·X_i − num)·h vanishes at p and stays integral.
                    let xi = Poly::var(&ring, i).expect("coordinate index");
                    let lin = &xi.scale(&Rational::from_integer(c.denom().clone()))
                        - &Poly::constant(&ring, Rational::from_integer(c.numer().clone()));
                    let h = self.nonzero_poly(&ring, 2, 1, 3);
                    out.push(&lin * &h);
                    continue;
                }
            }
            let f = self.nonconstant_poly(&ring, n, 4, max_deg, 9);
            if !f.is_zero() {
                out.push(f);
            }
        }
        out
    }
}
