//! Acceptance criteria 1-11, one PASS/FAIL line each.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use resurgence::alien::{alien_derivation, alien_plus, ResurgentSeries};
use resurgence::borelfun::{BorelFunction, Builtin, RationalFn};
use resurgence::freealg::{apply_action, lie_expand, mould_expand, stokes_components, DerivationAction, Poly};
use resurgence::hyperlog::{build_u, MonomialFamily};
use resurgence::laplace::{hankel_laplace, lateral_jump, laplace_ray, RaySpec};
use resurgence::mould::{random_alternal, random_mould, random_symmetral, Alphabet};
use resurgence::mzv::{verify_relation, wa_eval, ze_eval, ze_to_wa, MzvIndex};
use resurgence::scalars::{bernoulli, rat, ExactScalar, GaussRat};
use resurgence::series::{predict_coefficients_exact, FormalSeries};
use resurgence::words::{all_words, shuffle_product, Letter, Word};
use resurgence::Mould;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn c1() -> Outcome {
    let phi = ResurgentSeries::from_minor(BorelFunction::stirling());
    let mut got = vec![];
    let mut ok = true;
    for r in 1..=3 {
        let d = alien_derivation(&phi, &ExactScalar::tau().scale_int(r)).expect("alien derivation");
        ok &= d.constant == ExactScalar::from_ratio(1, r) && d.minor.is_zero();
        got.push(d.constant.to_string());
    }
    outcome(ok, format!("Delta_(2 pi i r) stirling = [{}]", got.join(", ")))
}

fn c2() -> Outcome {
    let r = laplace_ray(&BorelFunction::stirling(), &ExactScalar::zero(), &RaySpec::new(0.0, Complex64::new(10.0, 0.0)))
        .expect("laplace");
    let want = 362880f64.ln() - 9.5 * 10f64.ln() + 10.0 - 0.5 * (2.0 * PI).ln();
    let err = (r.c64() - want).norm();
    outcome(err <= 1e-9, format!("value {:.15} target {:.15} |diff| {:.2e} (tol 1e-9)", r.re, want, err))
}

fn c3() -> Outcome {
    let z = Complex64::new(-3.0, 0.0);
    let j = lateral_jump(&BorelFunction::euler(), &ExactScalar::zero(), PI, 0.3, z).expect("jump");
    let want = 2.0 * PI * (-3.0f64).exp();
    let plus = alien_plus(&ResurgentSeries::from_minor(BorelFunction::euler()), &ExactScalar::from_int(-1)).expect("plus");
    let exact_ok = plus.constant == ExactScalar::tau() && plus.minor.is_zero();
    // omega = -1: e^{-omega z} |Delta+|
    let predicted = z.exp().norm() * plus.constant.to_c64().norm();
    let a = (j.jump().norm() - want).abs();
    let b = (j.jump().norm() - predicted).abs();
    outcome(
        exact_ok && a <= 1e-7 && b <= 1e-7,
        format!("|jump| {:.10} vs 2 pi e^-3 {:.10} (diff {a:.1e}); Delta+_(-1) = {}; prediction diff {b:.1e} (tol 1e-7)", j.jump().norm(), want, plus.constant),
    )
}

fn c4() -> Outcome {
    let a = Alphabet::ints(&[1, 2]);
    let n = 4;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut fails = vec![];
    let one = Mould::one(a.clone(), n);
    let id = Mould::identity(a.clone(), n);
    for _ in 0..3 {
        let m = random_mould(&mut rng, &a, n, None);
        if m.product(&one).unwrap() != m || one.product(&m).unwrap() != m {
            fails.push("M x 1");
        }
        if m.compose(&id).unwrap() != m {
            fails.push("M o I");
        }
        let al = random_alternal(&mut rng, &a, n, None).unwrap();
        let e = al.exp().unwrap();
        if !e.is_symmetral() || e.log().unwrap() != al {
            fails.push("exp/log on alternal");
        }
        let s = random_symmetral(&mut rng, &a, n).unwrap();
        let t = random_symmetral(&mut rng, &a, n).unwrap();
        if s.log().unwrap().exp().unwrap() != s || !s.log().unwrap().is_alternal() {
            fails.push("log/exp on symmetral");
        }
        if !s.product(&t).unwrap().is_symmetral() || !s.mult_inverse().unwrap().is_symmetral() {
            fails.push("symmetral group");
        }
        let bl = random_alternal(&mut rng, &a, n, None).unwrap();
        if !al.commutator(&bl).unwrap().is_alternal() {
            fails.push("alternal Lie closure");
        }
    }
    let half = ExactScalar::from_ratio(1, 2);
    let p = Mould::exp_w(a.clone(), n, &half).product(&Mould::exp_w(a.clone(), n, &-&half)).unwrap();
    if p != one {
        fails.push("Exp_1/2 x Exp_-1/2");
    }
    outcome(fails.is_empty(), if fails.is_empty() { "all laws exact to length 4 over {1,2}".to_string() } else { format!("failed: {fails:?}") })
}

fn c5() -> Outcome {
    let a = Alphabet::ints(&[1, 2]);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut bad = 0;
    for _ in 0..25 {
        let m = random_alternal(&mut rng, &a, 3, None).unwrap();
        if lie_expand(&m).unwrap() != mould_expand(&m) {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("{} of 25 random alternal moulds expand identically", 25 - bad))
}

fn random_poly<R: Rng>(rng: &mut R, vars: usize, deg: u32) -> Poly {
    let mut p = Poly::default();
    for _ in 0..3 {
        let e: Vec<u32> = (0..vars).map(|_| rng.gen_range(0..=deg)).collect();
        if e.iter().sum::<u32>() > deg {
            continue;
        }
        p.add_term(e, ExactScalar::from_ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4)));
    }
    p
}

fn c6() -> Outcome {
    let k_max = 4;
    let comps = stokes_components(k_max).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut checks = 0;
    let mut bad = 0;
    for _ in 0..4 {
        let mut images = BTreeMap::new();
        for j in 1..=k_max as i64 {
            for v in 0..2 {
                images.insert((Letter::Int(j), v), random_poly(&mut rng, 2, 2));
            }
        }
        let act = DerivationAction { variables: 2, images, degree: 64 };
        let p = random_poly(&mut rng, 2, 2);
        let q = random_poly(&mut rng, 2, 2);
        let plus = |k: usize, x: &Poly| if k == 0 { x.clone() } else { apply_action(&comps[k - 1], &act, x).unwrap() };
        for k in 1..=k_max {
            let lhs = plus(k, &p.mul(&q));
            let rhs = (0..=k).fold(Poly::default(), |acc, i| acc.add(&plus(i, &p).mul(&plus(k - i, &q))));
            checks += 1;
            if lhs != rhs {
                bad += 1;
            }
        }
    }
    outcome(bad == 0, format!("{} of {checks} Leibniz identities exact (r <= 4)", checks - bad))
}

fn c7() -> Outcome {
    let fam = MonomialFamily::ints(&[1, 2], 12).unwrap();
    let words: Vec<Word> = all_words(&[Letter::Int(1), Letter::Int(2)], 3);
    let mut checks = 0;
    let mut bad = 0;
    for a in &words {
        for b in &words {
            if a.is_empty() || b.is_empty() || a.len() + b.len() > 3 {
                continue;
            }
            let lhs = fam.v_series(a).unwrap().cauchy_product(&fam.v_series(b).unwrap());
            let rhs = shuffle_product(a, b).into_iter().fold(FormalSeries::zero(12), |acc, (w, c)| {
                acc.add(&fam.v_series(&w).unwrap().scale(&ExactScalar::from_int(c as i64)))
            });
            checks += 1;
            if lhs != rhs {
                bad += 1;
            }
        }
    }
    let mut borel_bad = 0;
    for w in words.iter().filter(|w| !w.is_empty() && w.len() <= 2) {
        let b = resurgence::series::borel(&fam.v_series(w).unwrap());
        if fam.v_borel(w).unwrap().taylor(12).unwrap() != b.coeffs {
            borel_bad += 1;
        }
    }
    outcome(bad == 0 && borel_bad == 0, format!("shuffle {}/{checks} exact at order 12; Borel cross-check failures {borel_bad}", checks - bad))
}

fn c8() -> Outcome {
    let fam = MonomialFamily::ints(&[1, 2, 3, 4], 12).unwrap();
    let u = build_u(&fam.v_total(4, 2).unwrap()).unwrap();
    let order = 12;
    let mut checks = 0;
    let mut bad = vec![];
    for w in all_words(&[Letter::Int(1), Letter::Int(2)], 2).into_iter().filter(|w| !w.is_empty()) {
        let g = fam.gu_resurgent(&u, &w).unwrap();
        for eta in 1..=4 {
            let d = alien_derivation(&g, &ExactScalar::from_int(eta)).unwrap().to_formal(order).unwrap();
            let want = if w.first() == Some(&Letter::Int(eta)) {
                fam.gu_resurgent(&u, &w.tail()).unwrap().to_formal(order).unwrap()
            } else {
                FormalSeries::zero(order)
            };
            checks += 1;
            if d != want {
                bad.push(format!("Delta_{eta} gU^{w}"));
            }
        }
    }
    outcome(bad.is_empty(), format!("{} of {checks} prefix-rule identities exact; failures {bad:?}", checks - bad.len()))
}

fn c9() -> Outcome {
    let target = PI.powi(4) / 36.0;
    let z2 = MzvIndex::plain(&[2]).unwrap();
    let r = verify_relation(&z2, &z2, true, true, 1e-8).unwrap();
    let st = r.stuffle.as_ref().unwrap();
    let sh = r.shuffle.as_ref().unwrap();
    let e1 = (st.re - target).abs();
    let e2 = (sh.re - target).abs();
    let z21 = ze_eval(&MzvIndex::plain(&[2, 1]).unwrap(), 53).unwrap();
    let z3 = ze_eval(&MzvIndex::plain(&[3]).unwrap(), 53).unwrap();
    let e3 = (z21.re - z3.re).abs();
    let mut e4: f64 = 0.0;
    let mut n = 0;
    for s in [vec![2], vec![3], vec![4], vec![2, 1], vec![3, 1], vec![2, 2], vec![2, 1, 1]] {
        let idx = MzvIndex::plain(&s).unwrap();
        let w = wa_eval(&ze_to_wa(&idx).unwrap(), 53).unwrap();
        e4 = e4.max((ze_eval(&idx, 53).unwrap().c64() - w.c64()).norm());
        n += 1;
    }
    for (s, e) in [(vec![2], vec![(1, 2)]), (vec![1], vec![(1, 2)]), (vec![2, 1], vec![(1, 2), (1, 2)]), (vec![1, 1], vec![(1, 2), (0, 1)])] {
        let idx = MzvIndex::new(s, e.into_iter().map(|(a, b)| rat(a, b)).collect()).unwrap();
        let w = wa_eval(&ze_to_wa(&idx).unwrap(), 53).unwrap();
        e4 = e4.max((ze_eval(&idx, 53).unwrap().c64() - w.c64()).norm());
        n += 1;
    }
    outcome(
        e1 <= 1e-8 && e2 <= 1e-8 && e3 <= 1e-9 && e4 <= 1e-6,
        format!("stuffle {e1:.1e}, shuffle {e2:.1e} (tol 1e-8); zeta(2,1)-zeta(3) {e3:.1e} (tol 1e-9); dictionary max {e4:.1e} over {n} indices (tol 1e-6)"),
    )
}

fn c10() -> Outcome {
    let euler = FormalSeries::euler(31);
    let sings = [(ExactScalar::from_int(-1), ExactScalar::tau())];
    let exact = (0..=30).all(|n| predict_coefficients_exact(&sings, n).unwrap() == euler.coeff(n + 1));
    // Stirling: leading pair +-2 pi i with a0 = +-1, against B_22 / (22 * 21)
    let st = [(ExactScalar::tau(), ExactScalar::one()), (-&ExactScalar::tau(), ExactScalar::from_int(-1))];
    let pred = predict_coefficients_exact(&st, 20).unwrap().to_c64();
    let b = &bernoulli(22)[22] / rat(22 * 21, 1);
    let oracle = ExactScalar::from_rational(b).to_c64().re;
    let rel = (pred - oracle).norm() / oracle.abs();
    outcome(exact && rel <= 0.02, format!("Euler exact for n <= 30: {exact}; Stirling n = 20 relative error {rel:.2e} (tol 2%)"))
}

fn c11() -> Outcome {
    let f = BorelFunction::Rational(RationalFn::simple_pole(ExactScalar::tau_pow(-1), GaussRat::zero()));
    let a = hankel_laplace(&f, 0.0, Complex64::new(3.0, 0.0)).unwrap();
    let e1 = (a.c64() - 1.0).norm();
    let i = BorelFunction::ClosedForm(Builtin::ISigma(rat(1, 2)));
    let b = hankel_laplace(&i, 0.0, Complex64::new(2.0, 0.0)).unwrap();
    let e2 = (b.c64() - 0.5f64.sqrt()).norm();
    outcome(e1 <= 1e-8 && e2 <= 1e-8, format!("1/(2 pi i zeta) -> 1: {e1:.1e}; I_1/2 at z=2 -> 2^-1/2: {e2:.1e} (tol 1e-8)"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 11] = [
        ("Stirling alien derivative", c1, Duration::from_secs(1)),
        ("Stirling Borel sum", c2, Duration::from_secs(5)),
        ("Euler Stokes jump", c3, Duration::from_secs(10)),
        ("Mould algebra suite", c4, Duration::from_secs(30)),
        ("Dynkin-Specht-Wever", c5, Duration::from_secs(10)),
        ("Modified Leibniz", c6, Duration::from_secs(10)),
        ("V symmetrality", c7, Duration::from_secs(10)),
        ("Delta-friendliness", c8, Duration::from_secs(10)),
        ("MZV relations", c9, Duration::from_secs(60)),
        ("Coefficient asymptotics", c10, Duration::from_secs(1)),
        ("Hankel identities", c11, Duration::from_secs(5)),
    ];
    let mut failed = 0;
    for (k, (name, f, limit)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = f();
        let dt = t.elapsed();
        let ok = o.ok && dt <= *limit;
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {} ({}; {:.3}s, limit {}s)",
            k + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            o.detail,
            dt.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
