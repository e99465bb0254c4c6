//! Acceptance criteria, one line per criterion. Run with
//! `cargo test -p dspec-core --test acceptance`.

mod common;

use std::cmp::Ordering;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{as_map, brute_force_points, multinomial_b, reassemble, reverify, shift_oracle};
use dspec_core::exact::{int, parse_fraction, parse_poly, Fraction, Rational};
use dspec_core::nabla::NablaExpansion;
use dspec_core::order::{classify, compare, FieldContext, Magnitude};
use dspec_core::random::Sampler;
use dspec_core::search::{find_infinite_point, required_points, SearchConfig, SearchOutcome};
use dspec_core::spectrum::{
    distance_squared, hyperplane_clearance, is_arithmetical, is_discrete_cone, is_m_discrete_cone,
    is_transcendental, SpecPoint,
};
use dspec_core::suite::random_nonlinear;
use num_traits::Signed;

type Outcome = Result<String, String>;

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn ut() -> FieldContext {
    FieldContext::new(&["u", "t"], 0).unwrap()
}

fn point(f: &FieldContext, coords: &[&str]) -> SpecPoint {
    let cs = coords.iter().map(|c| parse_fraction(c, f.generators()).unwrap()).collect();
    SpecPoint::new(f.clone(), cs).unwrap()
}

fn ordered_field_laws() -> Outcome {
    let field = ut();
    let gens = field.generators();
    let zero = field.integer(0);
    let mut s = Sampler::new(1);
    let triples = 1000;
    for _ in 0..triples {
        let x = s.fraction(gens);
        let y = if s.chance(0.1) { x.clone() } else { s.fraction(gens) };
        let z = s.fraction(gens);
        let c = |a: &Fraction, b: &Fraction| compare(a, b).map_err(e2s);
        for (a, b) in [(&x, &y), (&y, &z), (&x, &z)] {
            let ab = c(a, b)?;
            check(ab == c(b, a)?.reverse(), || format!("trichotomy: {a} vs {b}"))?;
            let equal = a.checked_sub(b).map_err(e2s)?.is_zero();
            check((ab == Ordering::Equal) == equal, || format!("trichotomy: {a} = {b}"))?;
        }
        let t = [&x, &y, &z];
        for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)] {
            if c(t[i], t[j])? != Ordering::Greater && c(t[j], t[k])? != Ordering::Greater {
                check(c(t[i], t[k])? != Ordering::Greater, || {
                    format!("transitivity: {} <= {} <= {}", t[i], t[j], t[k])
                })?;
            }
        }
        let xz = x.checked_add(&z).map_err(e2s)?;
        let yz = y.checked_add(&z).map_err(e2s)?;
        check(c(&xz, &yz)? == c(&x, &y)?, || format!("addition: {x}, {y}, {z}"))?;
        if c(&z, &zero)? == Ordering::Greater {
            let xz = x.checked_mul(&z).map_err(e2s)?;
            let yz = y.checked_mul(&z).map_err(e2s)?;
            check(c(&xz, &yz)? == c(&x, &y)?, || format!("multiplication: {x}, {y}, {z}"))?;
        }
    }
    Ok(format!("{triples} triples"))
}

fn base_ring_discrete() -> Outcome {
    let field = FieldContext::new(&["Y1"], 1).unwrap();
    let one = field.integer(1);
    let mut s = Sampler::new(2);
    let count = 500;
    for _ in 0..count {
        let mut p = s.base_ring_element(&field);
        // Y1 is infinite, so the sign is that of the top Y1-coefficient.
        let top = p.terms().max_by_key(|(e, _)| e.get(0)).map(|(_, c)| c.clone()).unwrap();
        if top.is_negative() {
            p = -&p;
        }
        let x = Fraction::from_poly(p.clone());
        check(compare(&x, &field.integer(0)).map_err(e2s)? == Ordering::Greater, || {
            format!("{p} is not positive")
        })?;
        check(compare(&x, &one).map_err(e2s)? != Ordering::Less, || format!("0 < {p} < 1"))?;
    }
    Ok(format!("{count} positive elements"))
}

fn closed_form_tower() -> Outcome {
    let mut s = Sampler::new(3);
    let count = 200;
    for _ in 0..count {
        let n = s.int(1, 3) as usize;
        let f = random_nonlinear(&mut s, n, 4);
        let e = NablaExpansion::new(&f, n).map_err(e2s)?;
        let m = e.depth();
        let want = shift_oracle(&f, n, m);
        let xpos: Vec<usize> = (0..n).collect();
        for k in 1..=m {
            let g = &e.tower()[k - 1];
            check(as_map(g) == want[k], || format!("G_{k} of {f} is {g}"))?;
            check(reassemble(&e, k) == want[k], || format!("closed form of G_{k} for {f}"))?;
            for ((v, w), b) in e.b_coefficients(k).into_iter().flatten() {
                check(*b == multinomial_b(v, w), || format!("b_{{{v},{w}}} = {b} for {f}"))?;
            }
            check(!g.is_zero(), || format!("G_{k} of {f} vanishes"))?;
            let d = g.degree_in(&xpos);
            check(d == Some((m - k + 1) as u64), || format!("deg_X G_{k} of {f} is {d:?}"))?;
        }
    }
    Ok(format!("{count} polynomials"))
}

fn point_budget() -> Outcome {
    let mut got = Vec::new();
    for d in [2, 3, 4] {
        let r = required_points(d).map_err(e2s)?;
        let oracle = brute_force_points(d);
        check(r == oracle, || format!("degree {d}: {r}, oracle {oracle}"))?;
        got.push(r);
    }
    check(got == [5, 11, 23], || format!("table {got:?}"))?;
    Ok("5, 11, 23".to_string())
}

fn worked_example() -> Outcome {
    let f = ut();
    let alpha = point(&f, &["t", "t^2 + 1/t"]);
    let corpus = vec![parse_poly("X2 - X1^2", &alpha.ring_vars()).map_err(e2s)?];
    let cfg = SearchConfig::new(alpha, corpus.clone(), int(1))
        .with_direction("1,1".parse().map_err(e2s)?)
        .with_lambda(int(1))
        .with_count(5);
    let SearchOutcome::Found(rep) = find_infinite_point(&cfg).map_err(e2s)? else {
        return Err("no report".to_string());
    };
    check(rep.index == 2, || format!("index {}", rep.index))?;
    let want = parse_fraction("1/t - 2*t", f.generators()).map_err(e2s)?;
    check(rep.values[0] == want, || format!("value {}", rep.values[0]))?;
    check(classify(&rep.values[0]) == Magnitude::Infinite, || "value is not infinite".to_string())?;
    let gamma = point(&f, &["t + 1", "t^2 + 1/t + 1"]);
    check(rep.gamma.coords() == gamma.coords(), || format!("gamma {}", rep.gamma))?;
    check(is_transcendental(&rep.gamma, &corpus).map_err(e2s)?.passed, || "gamma is not transcendental".to_string())?;
    Ok("index 2, value 1/t - 2t".to_string())
}

fn theorem_conformance() -> Outcome {
    let field = ut();
    let configs = 50;
    for seed in 0..configs {
        let mut s = Sampler::new(1000 + seed);
        let n = s.int(1, 3) as usize;
        let alpha = s.clearance_point(&field, n);
        let size = s.int(1, 5) as usize;
        let corpus = s.corpus(&alpha, size, 3, false);
        let r = s.rational(9, 4).abs() + Rational::new(1.into(), 4.into());
        let cfg = SearchConfig::new(alpha.clone(), corpus.clone(), r.clone()).with_seed(seed);
        match find_infinite_point(&cfg) {
            Ok(SearchOutcome::Found(rep)) => {
                check(rep.index <= rep.count, || format!("seed {seed}: index {} > {}", rep.index, rep.count))?;
                check(rep.magnitudes.iter().all(|&m| m == Magnitude::Infinite), || {
                    format!("seed {seed}: reported magnitudes {:?}", rep.magnitudes)
                })?;
                reverify(&alpha, &corpus, &r, &rep.gamma).map_err(|e| format!("seed {seed}: {e}"))?;
            }
            Ok(SearchOutcome::Refuted(_)) => return Err(format!("seed {seed}: {alpha} refuted")),
            Err(e) => return Err(format!("seed {seed}: {e}")),
        }
    }
    Ok(format!("{configs}/{configs} reports"))
}

fn refuter_soundness() -> Outcome {
    let f = ut();
    let alpha = point(&f, &["t", "t + 1/u"]);
    let corpus = vec![parse_poly("X2 - X1", &alpha.ring_vars()).map_err(e2s)?];
    let SearchOutcome::Refuted(x) = find_infinite_point(&SearchConfig::new(alpha.clone(), corpus, int(1))).map_err(e2s)?
    else {
        return Err("no certificate".to_string());
    };
    let c = &x.certificate;
    check(c.check_value.is_zero(), || format!("check value {}", c.check_value))?;
    let k = c.d[1].clone();
    check(k.is_constant() && !k.is_zero() && c.d[0] == -&k, || {
        format!("d = ({}, {})", c.d[0], c.d[1])
    })?;
    check(c.clearance != Magnitude::Infinite, || "certificate point is infinitely far".to_string())?;
    check(!hyperplane_clearance(&alpha, &c.d).map_err(e2s)?.passed, || "alpha clears d".to_string())?;
    Ok(format!("d = ({}, {})", c.d[0], c.d[1]))
}

fn rational_distance() -> Outcome {
    let field = ut();
    let mut s = Sampler::new(8);
    let count = 100;
    for _ in 0..count {
        let n = s.int(1, 4) as usize;
        let a = s.rational_vec(n, 50, 20);
        let b = s.rational_vec(n, 50, 20);
        let lift = |v: &[Rational]| SpecPoint::new(field.clone(), v.iter().map(|x| field.rational(x.clone())).collect());
        let got = distance_squared(&lift(&a).map_err(e2s)?, &lift(&b).map_err(e2s)?).map_err(e2s)?;
        let want: Rational = a.iter().zip(&b).map(|(x, y)| (x - y) * (x - y)).sum();
        check(got == field.rational(want.clone()), || format!("{got} != {want}"))?;
    }
    Ok(format!("{count} pairs"))
}

fn predicate_nesting() -> Outcome {
    let mut s = Sampler::new(9);
    let count = 100;
    let mut tally = [0; 4];
    for i in 0..count {
        let field = FieldContext::new(&["u", "t"], s.int(0, 2) as usize).unwrap();
        let n = s.int(1, 3) as usize;
        let p = s.spec_point(&field, n);
        let size = s.int(0, 5) as usize;
        let c = s.corpus(&p, size, 3, true);
        let d = is_discrete_cone(&p, &c).map_err(e2s)?.passed;
        let m = is_m_discrete_cone(&p, &c).map_err(e2s)?.passed;
        let a = is_arithmetical(&p, &c).map_err(e2s)?.passed;
        let t = is_transcendental(&p, &c).map_err(e2s)?.passed;
        check((!t || a) && (!a || m) && (!m || d), || {
            format!("pair {i}: transcendental {t}, arithmetical {a}, m-discrete {m}, discrete {d} at {p}")
        })?;
        for (slot, passed) in tally.iter_mut().zip([t, a, m, d]) {
            *slot += usize::from(passed);
        }
    }
    let [t, a, m, d] = tally;
    Ok(format!("{count} pairs; passing: transcendental {t}, arithmetical {a}, m-discrete {m}, discrete {d}"))
}

struct Criterion {
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { name: "ordered-field laws on Q(u,t)", limit: Some(Duration::from_secs(10)), run: ordered_field_laws },
        Criterion { name: "discreteness of Z[Y1]", limit: None, run: base_ring_discrete },
        Criterion { name: "closed form equals iterated operator", limit: Some(Duration::from_secs(20)), run: closed_form_tower },
        Criterion { name: "point budget recursion", limit: None, run: point_budget },
        Criterion { name: "worked search example", limit: None, run: worked_example },
        Criterion { name: "search on clearing points", limit: Some(Duration::from_secs(60)), run: theorem_conformance },
        Criterion { name: "refuter soundness", limit: None, run: refuter_soundness },
        Criterion { name: "rational distance", limit: None, run: rational_distance },
        Criterion { name: "predicate nesting", limit: None, run: predicate_nesting },
    ];
    let mut failed = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = (c.run)();
        let took = start.elapsed();
        if let (Ok(_), Some(limit)) = (&outcome, c.limit) {
            if took > limit {
                outcome = Err(format!("took {took:.2?}, limit {limit:?}"));
            }
        }
        match outcome {
            Ok(detail) => println!("AC{} {}: pass ({detail}; {took:.2?})", i + 1, c.name),
            Err(e) => {
                failed += 1;
                println!("AC{} {}: FAIL ({e}; {took:.2?})", i + 1, c.name);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
