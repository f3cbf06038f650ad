use num_complex::Complex64;
use proptest::prelude::*;
use resurgence::alien::{alien_derivation, alien_of_exp, apply_stokes, PlusFromDelta, ResurgentSeries, Transseries};
use resurgence::borelfun::{BorelFunction, Detour, HyperlogD2, PathSpec, RationalFn};
use resurgence::error::Error;
use resurgence::hyperlog::{l_numeric, MonomialFamily};
use resurgence::laplace::{lateral_jump, laplace_ray, laplace_ray_moment, verify_asymptotics, RaySpec};
use resurgence::mzv::{verify_relation, wa_eval, wa_shuffle, ze_eval, ze_to_wa, MzvIndex, WaWord};
use resurgence::scalars::{ExactScalar, GaussRat};
use resurgence::series::{inverse_borel, FormalSeries, Outer};
use resurgence::words::{shuffle_product, Word};
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn horner(coeffs: &[ExactScalar], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(c(0.0, 0.0), |acc, a| acc * z + a.to_c64())
}

fn two_poles() -> BorelFunction {
    BorelFunction::Rational(RationalFn::new(
        vec![ExactScalar::one()],
        vec![(GaussRat::from_int(1), 1), (GaussRat::from_int(2), 1)],
    ))
}

#[test]
fn taylor_agrees_with_evaluation_near_zero() {
    let cases = [
        (BorelFunction::euler(), 1.0),
        (BorelFunction::stirling(), 2.0 * PI),
        (BorelFunction::dilog(), 1.0),
        (two_poles(), 1.0),
    ];
    for (f, radius) in cases {
        let t = f.taylor(60).unwrap();
        for k in 0..12 {
            let z = Complex64::from_polar(radius * (0.05 + 0.035 * k as f64), 0.7 + 0.5 * k as f64);
            let (a, b) = (horner(&t, z), f.eval_c64(z));
            assert!((a - b).norm() < 1e-12 * (1.0 + b.norm()), "{f} at {z}: {a} vs {b}");
        }
    }
}

#[test]
fn rational_minors_are_single_valued() {
    // poles at -1, -2, -3 on the way to -7/2
    let f = BorelFunction::Rational(RationalFn::new(
        vec![ExactScalar::from_int(5), ExactScalar::one()],
        vec![(GaussRat::from_int(-1), 2), (GaussRat::from_int(-2), 1), (GaussRat::from_int(-3), 1)],
    ));
    let target = ExactScalar::from_ratio(-7, 2);
    let z = c(-3.5, 0.0);
    let reference = f.eval_c64(z);
    for mask in 0..8u32 {
        let detours = (0..3).map(|k| if mask >> k & 1 == 1 { Detour::Plus } else { Detour::Minus }).collect();
        let v = f.continue_eval_c64(&PathSpec { target: target.clone(), detours }, z).unwrap();
        assert!((v - reference).norm() < 1e-13, "{mask}: {v}");
    }
}

#[test]
fn euler_extraction_gives_two_pi_i() {
    let data = BorelFunction::euler().extract_singularity(&PathSpec::principal(ExactScalar::from_int(-1))).unwrap();
    let s = inverse_borel(&data.chi_series(8).unwrap());
    let mut expected = vec![ExactScalar::zero(); s.order() + 1];
    expected[0] = ExactScalar::tau();
    assert_eq!(s, FormalSeries::new(expected));
}

#[test]
fn stirling_minor_is_even() {
    let f = BorelFunction::stirling();
    for k in 0..20 {
        let z = Complex64::from_polar(0.3 + 0.45 * k as f64, 0.37 * k as f64 + 0.1);
        if f.singular_points(20.0).iter().any(|p| (p.to_c64() - z).norm() < 0.1) {
            continue;
        }
        let (a, b) = (f.eval_c64(z), f.eval_c64(-z));
        assert!((a - b).norm() < 1e-12 * (1.0 + a.norm()), "{z}");
    }
}

#[test]
fn alien_chain_rule_on_exp_stirling() {
    let phi = ResurgentSeries::from_minor(BorelFunction::stirling());
    for k in 1..=2 {
        let omega = ExactScalar::tau().scale_int(k);
        let lhs = alien_of_exp(&phi, &omega, 10).unwrap();
        // Delta_{2 pi i k} of the Stirling series is the constant 1/k
        let e = FormalSeries::substitute(&Outer::Exp, &phi.to_formal(10).unwrap()).unwrap();
        assert_eq!(lhs, e.scale(&ExactScalar::from_ratio(1, k)));
    }
}

#[test]
fn polynomial_minors_are_annihilated() {
    let p = ResurgentSeries::new(
        ExactScalar::from_int(3),
        BorelFunction::Rational(RationalFn::polynomial(vec![
            ExactScalar::one(),
            ExactScalar::from_ratio(-1, 2),
            ExactScalar::from_int(4),
        ])),
    );
    for omega in [ExactScalar::one(), ExactScalar::from_int(-2), ExactScalar::tau()] {
        assert!(alien_derivation(&p, &omega).unwrap().is_zero());
    }
}

/// Minor of d/dz: multiplication by -zeta (the constant term drops).
fn derivative(phi: &ResurgentSeries) -> ResurgentSeries {
    let mz = RationalFn::polynomial(vec![ExactScalar::zero(), ExactScalar::from_int(-1)]);
    let minor = match &phi.minor {
        BorelFunction::Rational(r) => BorelFunction::Rational(r.mul(&mz)),
        BorelFunction::HyperlogD2(h) => BorelFunction::HyperlogD2(HyperlogD2 {
            logs: h.logs.iter().map(|(r, a)| (r.mul(&mz), a.clone())).collect(),
            rational: h.rational.mul(&mz),
        }),
        other => panic!("no product rule for {other}"),
    };
    ResurgentSeries::from_minor(minor)
}

#[test]
fn derivative_commutes_with_alien_derivation_up_to_omega() {
    let order = 12;
    let fam = MonomialFamily::ints(&[1, 2], order).unwrap();
    for w in [vec![1], vec![2], vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]] {
        let phi = fam.v_resurgent(&Word::ints(&w)).unwrap();
        for om in 1..=4 {
            let omega = ExactScalar::from_int(om);
            let d_phi = alien_derivation(&phi, &omega).unwrap();
            // [d/dz, Delta] phi = (Delta phi)' - Delta(phi')
            let lhs = d_phi
                .to_formal(order)
                .unwrap()
                .differentiate()
                .sub(&alien_derivation(&derivative(&phi), &omega).unwrap().to_formal(order).unwrap());
            let rhs = d_phi.to_formal(order).unwrap().scale(&omega);
            assert_eq!(lhs.truncate(order - 1), rhs.truncate(order - 1), "w = {w:?}, omega = {om}");
        }
    }
}

#[test]
fn stokes_automorphism_is_multiplicative() {
    // Delta_j acts on component k as k a_j: a derivation of the grading
    let a = [ExactScalar::one(), ExactScalar::from_ratio(1, 2), ExactScalar::from_int(-3)];
    let delta = |j: usize, k: usize, s: &FormalSeries| Ok(s.scale(&a[j - 1].scale_int(k as i64)));
    let plus = PlusFromDelta::new(&delta, 3).unwrap();
    let comp = |xs: &[i64]| FormalSeries::new(xs.iter().map(|&x| ExactScalar::from_ratio(x, 3)).collect());
    let t1 = Transseries::new(vec![comp(&[1, 2, 0]), comp(&[0, 1, 1]), comp(&[2, -1, 5]), comp(&[1, 0, 0])], ExactScalar::one())
        .unwrap();
    let t2 = Transseries::new(vec![comp(&[3, 0, 1]), comp(&[1, 1, 0]), comp(&[0, 0, 2]), comp(&[-4, 1, 1])], ExactScalar::one())
        .unwrap();
    let lhs = apply_stokes(&t1.mul(&t2).unwrap(), &plus).unwrap();
    let rhs = apply_stokes(&t1, &plus).unwrap().mul(&apply_stokes(&t2, &plus).unwrap()).unwrap();
    assert_eq!(lhs, rhs);
    assert_ne!(lhs, t1.mul(&t2).unwrap());
}

#[test]
fn v_series_is_symmetral() {
    let fam = MonomialFamily::ints(&[1, 2], 12).unwrap();
    let words: Vec<Word> = [vec![1], vec![2], vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]].iter().map(|w| Word::ints(w)).collect();
    for a in &words {
        for b in &words {
            if a.len() + b.len() > 3 {
                continue;
            }
            let lhs = fam.v_series(a).unwrap().cauchy_product(&fam.v_series(b).unwrap());
            let rhs = shuffle_product(a, b).iter().fold(FormalSeries::zero(12), |acc, (w, n)| {
                acc.add(&fam.v_series(w).unwrap().scale(&ExactScalar::from_int(*n as i64)))
            });
            assert_eq!(lhs, rhs, "{a} / {b}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn resonant_words_always_raise(w in prop::collection::vec(prop_oneof![-3i64..0, 1i64..4], 1..5)) {
        let fam = MonomialFamily::ints(&[-3, -2, -1, 1, 2, 3], 6).unwrap();
        let resonant = (1..=w.len()).any(|k| w[..k].iter().sum::<i64>() == 0);
        match fam.v_series(&Word::ints(&w)) {
            Err(Error::Resonance(_)) => prop_assert!(resonant),
            Ok(_) => prop_assert!(!resonant),
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }
}

#[test]
fn l_plus_is_symmetral() {
    let l = |w: &[i64]| l_numeric(w, 53).unwrap();
    let pairs: [(&[i64], &[i64]); 4] = [(&[1], &[1]), (&[1], &[2]), (&[1], &[1, 1]), (&[2], &[1, 1])];
    for (a, b) in pairs {
        let (la, lb) = (l(a), l(b));
        let mut lhs = c(0.0, 0.0);
        let mut err = la.error + lb.error;
        for (w, n) in shuffle_product(&Word::ints(a), &Word::ints(b)) {
            let v = l(&w.int_letters().unwrap());
            lhs += v.value.to_c64() * n as f64;
            err += v.error * n as f64;
        }
        let rhs = la.value.to_c64() * lb.value.to_c64();
        assert!((lhs - rhs).norm() < 1e-8 + 10.0 * err, "{a:?} {b:?}: {lhs} vs {rhs}");
    }
}

#[test]
fn l_numeric_matches_exact_extraction() {
    let fam = MonomialFamily::ints(&[1, 2], 8).unwrap();
    for w in [vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]] {
        let eta = ExactScalar::from_int(w.iter().sum());
        let exact = fam.extract_l(&eta, 2).unwrap().get(&Word::ints(&w)).to_c64();
        let num = l_numeric(&w, 53).unwrap();
        assert!((num.value.to_c64() - exact).norm() < 1e-9, "{w:?}: {} vs {exact}", num.value);
    }
}

fn plain_indices(max_weight: u32, max_depth: usize) -> Vec<MzvIndex> {
    let mut out = vec![];
    let mut stack: Vec<Vec<u32>> = (1..=max_weight).map(|s| vec![s]).collect();
    while let Some(s) = stack.pop() {
        let w: u32 = s.iter().sum();
        if s[0] >= 2 {
            out.push(MzvIndex::plain(&s).unwrap());
        }
        if s.len() < max_depth {
            for t in 1..=max_weight - w {
                let mut n = s.clone();
                n.push(t);
                stack.push(n);
            }
        }
    }
    out
}

#[test]
fn ze_is_symmetrel() {
    let idx = plain_indices(6, 2);
    let mut checked = 0;
    for (i, a) in idx.iter().enumerate() {
        for b in &idx[i..] {
            if a.weight() + b.weight() > 8 {
                continue;
            }
            let r = verify_relation(a, b, true, false, 1e-8).unwrap();
            assert!(r.ok(), "{a} * {b}: {r:?}");
            checked += 1;
        }
    }
    // a coloured pair: alternating sums
    let alt = MzvIndex::parse("(1)", Some("(1/2)")).unwrap();
    let two = MzvIndex::parse("(2,1)", Some("(1/2,1/2)")).unwrap();
    assert!(verify_relation(&alt, &two, true, false, 1e-8).unwrap().ok());
    assert!(checked > 20);
}

fn wa_words(max_len: usize) -> Vec<WaWord> {
    let mut out = vec![];
    let mut cur: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = vec![];
        for w in &cur {
            for l in [0, 1, -1] {
                let mut n = w.clone();
                n.push(l);
                next.push(n);
            }
        }
        out.extend(next.iter().cloned());
        cur = next;
    }
    out.into_iter().map(|w| WaWord::ints(&w).unwrap()).filter(WaWord::is_integrable).collect()
}

#[test]
fn wa_is_symmetral() {
    let words = wa_words(2);
    let mut checked = 0;
    for (i, a) in words.iter().enumerate() {
        for b in &words[i..] {
            if a.len() + b.len() > 4 {
                continue;
            }
            let (va, vb) = (wa_eval(a, 53).unwrap(), wa_eval(b, 53).unwrap());
            let mut lhs = c(0.0, 0.0);
            let mut err = va.error + vb.error;
            for (w, n) in wa_shuffle(a, b) {
                let v = wa_eval(&w, 53).unwrap();
                lhs += v.c64() * n as f64;
                err += v.error * n as f64;
            }
            let rhs = va.c64() * vb.c64();
            assert!((lhs - rhs).norm() < 1e-9 + 10.0 * err, "{a} / {b}: {lhs} vs {rhs}");
            checked += 1;
        }
    }
    assert!(checked > 10);
}

#[test]
fn dictionary_is_consistent() {
    let mut idx = plain_indices(4, 4);
    for (s, e) in [("(1)", "(1/2)"), ("(2)", "(1/2)"), ("(1,1)", "(1/2,1/2)"), ("(2,1)", "(0,1/2)"), ("(1,2)", "(1/2,0)")] {
        idx.push(MzvIndex::parse(s, Some(e)).unwrap());
    }
    for i in idx {
        let z = ze_eval(&i, 53).unwrap().c64();
        let w = wa_eval(&ze_to_wa(&i).unwrap(), 53).unwrap().c64();
        assert!((z - w).norm() < 1e-6, "{i}: {z} vs {w}");
    }
}

#[test]
fn euler_sum_solves_its_equation() {
    let f = BorelFunction::euler();
    for x in [2.0, 5.0, 10.0] {
        let spec = RaySpec::new(0.0, c(x, 0.0));
        let phi = laplace_ray(&f, &ExactScalar::zero(), &spec).unwrap().c64();
        let dphi = laplace_ray_moment(&f, &ExactScalar::zero(), &spec, 1).unwrap().c64();
        assert!((-dphi + phi - 1.0 / x).norm() < 1e-8, "z = {x}");
    }
}

#[test]
fn rays_in_a_free_sector_glue() {
    let f = BorelFunction::euler();
    for z in [c(3.0, 0.0), c(2.0, 1.5), c(4.0, -2.0)] {
        let a = laplace_ray(&f, &ExactScalar::zero(), &RaySpec::new(-PI / 4.0, z)).unwrap();
        let b = laplace_ray(&f, &ExactScalar::zero(), &RaySpec::new(PI / 5.0, z)).unwrap();
        assert!((a.c64() - b.c64()).norm() < 2.0 * (a.error_estimate + b.error_estimate) + 1e-13, "{z}");
    }
}

#[test]
fn stirling_jump_sums_all_singularities() {
    let z = c(0.5, -0.5);
    let j = lateral_jump(&BorelFunction::stirling(), &ExactScalar::zero(), PI / 2.0, 0.3, z).unwrap();
    let expected = -(c(1.0, 0.0) - (c(0.0, -2.0 * PI) * z).exp()).ln();
    assert!((j.jump() - expected).norm() < 1e-9 + 2.0 * j.error, "{} vs {expected}", j.jump());
}

#[test]
fn euler_asymptotics_are_gevrey() {
    let f = BorelFunction::euler();
    let zs = [c(5.0, 0.0), c(10.0, 0.0), c(20.0, 0.0)];
    let r = verify_asymptotics(&f, &ExactScalar::zero(), &FormalSeries::euler(10), 0.0, &zs, 1.0).unwrap();
    assert!(r.bounded);
    for row in &r.rows {
        // |remainder| <= n! |z|^{-n-1}; the zero-order remainder is the sum itself
        let fact: f64 = (1..=row.n).map(|k| k as f64).product();
        assert!(row.scaled_remainder <= fact * (1.0 + 1e-6), "n = {}: {}", row.n, row.scaled_remainder);
    }
    let sup0 = zs
        .iter()
        .map(|z| z.norm() * laplace_ray(&f, &ExactScalar::zero(), &RaySpec::new(0.0, *z)).unwrap().c64().norm())
        .fold(0.0, f64::max);
    assert!((r.rows[0].scaled_remainder - sup0).abs() < 1e-12);
}

#[test]
fn index_round_trips() {
    for i in plain_indices(5, 3) {
        assert_eq!(MzvIndex::from_word(&i.to_word()).unwrap(), i);
        assert_eq!(MzvIndex::parse(&i.to_string(), None).unwrap(), i);
    }
    let i = MzvIndex::parse("2,1", Some("1/3,1/2")).unwrap();
    assert_eq!(MzvIndex::parse(&i.to_string(), None).unwrap(), i);
}
