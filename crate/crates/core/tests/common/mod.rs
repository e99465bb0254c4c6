#![allow(dead_code)]

use std::collections::BTreeMap;

use dspec_core::exact::{ExponentVector, Fraction, Poly, Rational, Vars};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

pub fn xs(n: usize) -> Vars {
    Vars::indexed("X", n)
}

pub fn ut() -> Vars {
    Vars::new(&["u", "t"]).unwrap()
}

/// Integer-coefficient polynomial over `vars` with at most `max_terms`
/// terms and per-variable exponents below `max_exp`.
pub fn poly(vars: Vars, max_terms: usize, max_exp: u32, coeff: i64) -> impl Strategy<Value = Poly> {
    let n = vars.len();
    prop::collection::vec((prop::collection::vec(0..max_exp, n), -coeff..=coeff), 0..=max_terms).prop_map(
        move |terms| {
            Poly::from_terms(
                &vars,
                terms
                    .into_iter()
                    .map(|(e, c)| (ExponentVector::new(e), Rational::from_integer(BigInt::from(c)))),
            )
        },
    )
}

pub fn nonzero_poly(vars: Vars, max_terms: usize, max_exp: u32, coeff: i64) -> impl Strategy<Value = Poly> {
    poly(vars, max_terms.max(1), max_exp, coeff).prop_filter("nonzero", |p| !p.is_zero())
}

pub fn rational(bound: i64) -> impl Strategy<Value = Rational> {
    (-bound..=bound, 1..=bound).prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

pub fn fraction(vars: Vars) -> impl Strategy<Value = Fraction> {
    (poly(vars.clone(), 3, 3, 6), nonzero_poly(vars, 2, 3, 4)).prop_map(|(n, d)| Fraction::new(n, d).unwrap())
}

/// Least `N ≥ 2` with `N_m ≥ 2`, where `N_0 = N` and
/// `N_{i+1} = ⌊(N_i − 1)/2⌋`, found by trying `N = 2, 3, …`.
pub fn brute_force_points(degree: u64) -> u64 {
    if degree == 1 {
        return 2;
    }
    let m = degree - 1;
    (2i64..)
        .find(|&n| {
            let mut k = n;
            for _ in 0..m {
                k = (k - 1).div_euclid(2);
            }
            k >= 2
        })
        .unwrap() as u64
}

/// Recomputes every corpus value at `γ` and the squared distance to `α`
/// from the coordinates alone.
pub fn reverify(
    alpha: &dspec_core::spectrum::SpecPoint,
    corpus: &[Poly],
    r: &Rational,
    gamma: &dspec_core::spectrum::SpecPoint,
) -> Result<(), String> {
    use dspec_core::order::{classify, compare, Magnitude};
    for f in corpus {
        let v = gamma.value(f).map_err(|e| e.to_string())?;
        if classify(&v) != Magnitude::Infinite {
            return Err(format!("{f} takes {v} ({}) at {gamma}", classify(&v)));
        }
    }
    let field = alpha.field();
    let mut d2 = field.integer(0);
    for (g, a) in gamma.coords().iter().zip(alpha.coords()) {
        let diff = g.checked_sub(a).map_err(|e| e.to_string())?;
        d2 = d2.checked_add(&diff.checked_mul(&diff).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    }
    if compare(&d2, &field.rational(r * r)).map_err(|e| e.to_string())? == std::cmp::Ordering::Greater {
        return Err(format!("{gamma} is at squared distance {d2} > {r}^2"));
    }
    Ok(())
}

pub fn fact(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, i| a * i)
}

pub fn binom(n: u32, k: u32) -> BigInt {
    fact(n) / (fact(k) * fact(n - k))
}

/// Adds `k!·[s^k] a·(X + sT)^v` to `out[k]` for `1 ≤ k ≤ m`, expanding each
/// factor with the binomial theorem. Keys are exponents over X then T.
fn shift_monomial(v: &ExponentVector, a: &Rational, n: usize, out: &mut [BTreeMap<Vec<u32>, Rational>]) {
    let m = out.len() - 1;
    // choices[i] = j picks X_i^{v_i − j}·s^j·T_i^j
    let mut choices = vec![0u32; n];
    loop {
        let k: u32 = choices.iter().sum();
        if k >= 1 && (k as usize) <= m {
            let mut coeff = Rational::from_integer(fact(k)) * a;
            let mut exp = vec![0u32; 2 * n];
            for i in 0..n {
                coeff *= Rational::from_integer(binom(v.get(i), choices[i]));
                exp[i] = v.get(i) - choices[i];
                exp[n + i] = choices[i];
            }
            *out[k as usize].entry(exp).or_insert_with(Rational::zero) += coeff;
        }
        let mut i = 0;
        while i < n && choices[i] == v.get(i) {
            choices[i] = 0;
            i += 1;
        }
        if i == n {
            return;
        }
        choices[i] += 1;
    }
}

/// `G_k = k!·[s^k] F(X + sT)` for `k = 1..=m`, indexed by `k`.
pub fn shift_oracle(f: &Poly, n: usize, m: usize) -> Vec<BTreeMap<Vec<u32>, Rational>> {
    let mut out = vec![BTreeMap::new(); m + 1];
    for (v, a) in f.terms() {
        shift_monomial(v, a, n, &mut out);
    }
    for level in &mut out {
        level.retain(|_, c| !c.is_zero());
    }
    out
}

pub fn as_map(p: &Poly) -> BTreeMap<Vec<u32>, Rational> {
    p.terms().map(|(e, c)| (e.entries().to_vec(), c.clone())).collect()
}

/// `k!/Π l_i! · Π v_i!/w_i!` with `l = v − w` and `k = |l|`.
pub fn multinomial_b(v: &ExponentVector, w: &ExponentVector) -> Rational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    let mut k = 0;
    for i in 0..v.len() {
        let l = v.get(i) - w.get(i);
        k += l;
        num *= fact(v.get(i));
        den *= fact(l) * fact(w.get(i));
    }
    Rational::new(num * fact(k), den)
}

/// `Σ_w P_{k,w}(T)·X^w` rebuilt from the coefficient table, keyed like
/// [`shift_oracle`].
pub fn reassemble(e: &dspec_core::nabla::NablaExpansion, k: usize) -> BTreeMap<Vec<u32>, Rational> {
    let n = e.arity();
    let mut re: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
    for (w, p) in e.coeff_table(k).unwrap() {
        for (t, c) in p.terms() {
            let mut exp = w.entries().to_vec();
            exp.extend_from_slice(&t.entries()[..n]);
            *re.entry(exp).or_insert_with(Rational::zero) += c;
        }
    }
    re.retain(|_, c| !c.is_zero());
    re
}
