mod common;

use std::cmp::Ordering;

use common::*;
use dspec_core::exact::{rat, Fraction, Vars};
use dspec_core::order::{abs, check_positive_geq_one, classify, compare, sign_of, FieldContext, Magnitude, Sign};
use proptest::prelude::*;

fn field() -> FieldContext {
    FieldContext::new(&["u", "t"], 1).unwrap()
}

/// Field elements spread across all magnitudes.
fn element() -> impl Strategy<Value = Fraction> {
    (fraction(ut()), -2i32..=2, 0usize..2).prop_map(|(x, k, g)| {
        let gen = Fraction::generator(&ut(), g).unwrap();
        let shift = if k >= 0 { gen.pow(k as u32).unwrap() } else { gen.pow((-k) as u32).unwrap().recip().unwrap() };
        x.checked_mul(&shift).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn total_order_laws(x in element(), y in element(), z in element()) {
        prop_assert_eq!(compare(&x, &x).unwrap(), Ordering::Equal);
        prop_assert_eq!(compare(&x, &y).unwrap(), compare(&y, &x).unwrap().reverse());
        prop_assert_eq!(compare(&x, &y).unwrap() == Ordering::Equal, x.value_eq(&y));
        if compare(&x, &y).unwrap() != Ordering::Greater && compare(&y, &z).unwrap() != Ordering::Greater {
            prop_assert_ne!(compare(&x, &z).unwrap(), Ordering::Greater);
        }
    }

    #[test]
    fn order_is_compatible_with_ring_operations(x in element(), y in element(), z in element()) {
        let (x, y) = (abs(&x), abs(&y));
        if !x.is_zero() && !y.is_zero() {
            prop_assert_eq!(sign_of(&x.checked_add(&y).unwrap()), Sign::Positive);
            prop_assert_eq!(sign_of(&x.checked_mul(&y).unwrap()), Sign::Positive);
        }
        // x ≤ y implies x + z ≤ y + z
        if compare(&x, &y).unwrap() != Ordering::Greater {
            let l = x.checked_add(&z).unwrap();
            let r = y.checked_add(&z).unwrap();
            prop_assert_ne!(compare(&l, &r).unwrap(), Ordering::Greater);
        }
    }

    #[test]
    fn classify_agrees_with_integer_thresholds(x in element()) {
        let f = field();
        let a = abs(&x);
        match classify(&x) {
            Magnitude::Zero => prop_assert!(x.is_zero()),
            Magnitude::Infinite => {
                for n in 1..=50 {
                    prop_assert_eq!(compare(&a, &f.integer(n)).unwrap(), Ordering::Greater);
                }
            }
            Magnitude::Infinitesimal => {
                for n in 1..=50 {
                    prop_assert_eq!(compare(&a, &f.rational(rat(1, n))).unwrap(), Ordering::Less);
                }
            }
            Magnitude::Finite => {
                // Finite and not infinitesimal: bounded by some integer
                // above and some 1/n below. The leading coefficient ratio
                // c gives both.
                let c = x.numerator().lex_leading().unwrap().1 / x.denominator().lex_leading().unwrap().1;
                let c = num_traits::Signed::abs(&c);
                prop_assert_eq!(compare(&a, &f.rational(&c * rat(2, 1))).unwrap(), Ordering::Less);
                prop_assert_eq!(compare(&a, &f.rational(&c * rat(1, 2))).unwrap(), Ordering::Greater);
            }
        }
    }

    #[test]
    fn base_ring_has_nothing_between_zero_and_one(p in nonzero_poly(Vars::new(&["u", "t"]).unwrap(), 4, 5, 9)) {
        let f = field();
        // Restrict to Z[u] by dropping t.
        let p = p.specialize(&[1], &[rat(0, 1)]).unwrap().embed(f.generators()).unwrap();
        prop_assume!(!p.is_zero());
        let p = if p.leading_sign() < 0 { -&p } else { p };
        let x = Fraction::from_poly(p.clone());
        prop_assert_ne!(compare(&x, &f.integer(1)).unwrap(), Ordering::Less);
        prop_assert!(check_positive_geq_one(&f, &p).is_ok());
    }
}

#[test]
fn every_generator_is_infinite() {
    for d in 1..=5 {
        let f = FieldContext::from_vars(Vars::indexed("g", d), 0).unwrap();
        for j in 0..d {
            let g = f.generator(j).unwrap();
            assert_eq!(classify(&g), Magnitude::Infinite);
            if j > 0 {
                let below = f.generator(j - 1).unwrap().pow(50).unwrap();
                assert_eq!(compare(&g, &below).unwrap(), Ordering::Greater);
            }
        }
    }
}

#[test]
fn y2_minus_y1_to_the_ninth_is_at_least_one() {
    let f = FieldContext::new(&["Y1", "Y2"], 2).unwrap();
    let p = dspec_core::exact::parse_poly("Y2 - Y1^9", f.generators()).unwrap();
    assert!(check_positive_geq_one(&f, &p).is_ok());
    assert_eq!(classify(&Fraction::from_poly(p)), Magnitude::Infinite);
}
